//! Mean residence time against noise strength and the Arrhenius fit
//! `ln tau_bar = c + barrier / D`.
//!
//! `cargo run --release --example kramers -- [T] [seeds]`

use jcsr::analysis::kramers_scan;
use jcsr::model::{potential_extrema, SystemParams};
use jcsr::seed::derive_seeds;
use jcsr::semiclassical::SdeConfig;

fn main() -> jcsr::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).map_or(default, |s| s.parse().expect("number"));
    let p = SystemParams::default();
    let cfg = SdeConfig::new(1e-3, arg(0, 5e4), 0, 100);
    let seeds = derive_seeds(3, arg(1, 4.0) as usize);

    let scan = kramers_scan(&p, &[0.02, 0.03, 0.04, 0.05, 0.06], &cfg, &seeds)?;
    for q in &scan.points {
        println!(
            "D = {:.2}: tau_bar = {:8.1} +- {:6.1} from {} switches{}",
            q.noise,
            q.tau_bar,
            q.stderr,
            q.transitions,
            if q.flagged { " (too few, not fitted)" } else { "" }
        );
    }
    if let Some(f) = scan.fit {
        println!("ln tau_bar = {:.3} + {:.4}/D, R^2 = {:.4}", f.intercept, f.slope, f.r_squared);
    }
    println!("potential barriers {:?}", potential_extrema(&p).barriers());
    Ok(())
}
