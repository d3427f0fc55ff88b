//! Structure decomposition of the 17-vertex demo graph: the A/C/D split,
//! factor-critical components, and the edge-disjoint partition whose parts
//! preserve the total matching size.

use irmatch::decomposition::{
    build_partition, check_partition_identity, edmonds_gallai, render_report,
};
use irmatch::generators;

fn main() {
    let ug = generators::decomposition_demo().graph.to_undirected();
    let eg = edmonds_gallai(&ug);
    let partition = build_partition(&ug, &eg);
    let identity = check_partition_identity(&ug, &partition);
    print!("{}", render_report(&ug, &eg, &partition, &identity));
}
