//! Exact rational expectations of the internal optimum under random vertex
//! ownership: the triangle counterexample at p = 2/3, the odd-clique closed
//! form, and a sweep locating where the pentagon starts to violate the
//! p-times-optimum bound.

use num::{BigInt, BigRational, ToPrimitive};

use irmatch::decomposition::{exact_internal_expectation, near_perfect_expectation};
use irmatch::generators;

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn main() -> irmatch::Result<()> {
    let tri = generators::two_cycle_triangle(1)?;
    let e = exact_internal_expectation(&tri.graph, 2, &ratio(2, 3))?;
    println!(
        "triangle at p=2/3: E[internal opt] = {e} = {:.6} vs p*opt = 4/3 (violated: {})",
        e.to_f64().unwrap(),
        e > ratio(4, 3)
    );

    println!("\nodd cliques, exact vs closed form:");
    for t in 1..=3u32 {
        for p in [0.1, 0.25, 0.5] {
            let (value, cap) = near_perfect_expectation(t, p);
            println!("  t={t} p={p:<4}: bound {value:.6} (cap {cap:.3})");
        }
    }

    // The pentagon of 2-cycles has no directed 3-cycles, so it serves as the
    // counterexample once the ownership probability is large enough.
    let pent = generators::two_cycle_pentagon();
    println!("\npentagon sweep at cap 3 (opt = 4):");
    let mut threshold = None;
    for percent in (50..100).step_by(5) {
        let p = ratio(percent as i64, 100);
        let e = exact_internal_expectation(&pent.graph, 3, &p)?;
        let p_opt = &p * ratio(4, 1);
        let violated = e > p_opt;
        if violated && threshold.is_none() {
            threshold = Some(percent);
        }
        println!(
            "  p=0.{percent:02}: E = {:.6} vs p*opt = {:.3} {}",
            e.to_f64().unwrap(),
            p_opt.to_f64().unwrap(),
            if violated { "VIOLATED" } else { "ok" }
        );
    }
    if let Some(t) = threshold {
        println!("first sampled violation at p = 0.{t:02}");
    }
    Ok(())
}
