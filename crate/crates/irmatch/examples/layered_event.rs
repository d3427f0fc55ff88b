//! Four-layer instance at n = 1600: sample ownerships, watch for the
//! favorable deviation event (third layer one standard deviation heavy, the
//! first two light, enough fourth-layer vertices), and measure how far the
//! closed-form internal optimum then exceeds the share of the optimum.

use irmatch::generators;
use irmatch::ownership::{sample_ownership, PlayerProfile};

fn main() -> irmatch::Result<()> {
    let n = 1600usize;
    let inst = generators::layered(n)?;
    let shape = generators::layered_shape(n)?;
    let profile = PlayerProfile::parse("1/2,1/2")?;
    let samples = 20_000u64;

    let sqrt_n = (n as f64).sqrt();
    let sigma = sqrt_n / 4.0;
    let c_min = (n as f64 / 8.0 + sigma).ceil() as usize;
    let ab_max = (n as f64 / 8.0 - sigma).floor() as usize;
    let d_min = (3.0 * sqrt_n).ceil() as usize;
    println!("event: c >= {c_min}, a,b <= {ab_max}, d >= {d_min} over {samples} samples");

    let mut hits = 0u64;
    let mut surplus_sum = 0.0;
    for t in 0..samples {
        let a = sample_ownership(&inst.graph, &profile, 1600, t);
        let count =
            |r: std::ops::Range<usize>| r.filter(|&v| a.owner(v) == 0).count();
        let (la, lb, lc, ld) = (
            count(shape.layer_a()),
            count(shape.layer_b()),
            count(shape.layer_c()),
            count(shape.layer_d()),
        );
        if lc >= c_min && la <= ab_max && lb <= ab_max && ld >= d_min {
            hits += 1;
            let internal = generators::layered_internal_opt(la, lb, lc, ld);
            surplus_sum += internal as f64 - (la + lb + lc) as f64;
        }
    }
    println!(
        "event frequency {:.4}; mean internal surplus over the share {:.2} (sqrt(n)/2 = {})",
        hits as f64 / samples as f64,
        surplus_sum / hits.max(1) as f64,
        sqrt_n / 2.0
    );
    Ok(())
}
