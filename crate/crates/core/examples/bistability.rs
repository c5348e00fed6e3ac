//! Derived constants, the bistable window and the stability of every branch
//! at a few control drives.
//!
//! `cargo run --release --example bistability -- [g]`

use jcsr::model::{bistable_region, derived_params, jacobian_eigenvalues, steady_states, SystemParams};

fn main() -> jcsr::Result<()> {
    let g: f64 = std::env::args().nth(1).map_or(6.0, |s| s.parse().expect("g"));
    let p = SystemParams::new(1.0, 10.0, g);
    let d = derived_params(&p)?;
    println!("C = {:.6}, n0 = {:.6}", d.cooperativity, d.saturation_photons);
    match bistable_region(&p, (0.5, 4.0), 1e-4)? {
        Some((lo, hi)) => println!("bistable for E1 in [{lo:.4}, {hi:.4}]"),
        None => println!("no bistable region"),
    }
    for e1 in [1.8, 2.0, 2.2, 2.3, 2.4, 2.6] {
        for s in steady_states(&p, e1)? {
            let max_re = jacobian_eigenvalues(&p.with_e1(e1), &s)?
                .iter()
                .map(|l| l.re)
                .fold(f64::NEG_INFINITY, f64::max);
            println!(
                "E1 = {e1:.2}  alpha = {:.5}  D0 = {:+.5}  {:?} (max Re lambda = {max_re:+.4})",
                s.alpha, s.d0, s.stability
            );
        }
    }
    Ok(())
}
