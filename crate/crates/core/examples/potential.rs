//! Effective potential of the field amplitude: its extrema coincide with the
//! steady-state roots.
//!
//! `cargo run --release --example potential -- [E1]`

use jcsr::model::{potential_extrema, steady_states, ExtremumKind, SystemParams};

fn main() -> jcsr::Result<()> {
    let e1: f64 = std::env::args().nth(1).map_or(2.24, |s| s.parse().expect("E1"));
    let p = SystemParams::default().with_e1(e1);
    let profile = potential_extrema(&p);
    let roots = steady_states(&p, e1)?;
    for (e, r) in profile.extrema.iter().zip(&roots) {
        let kind = if e.kind == ExtremumKind::Min { "min" } else { "max" };
        println!("{kind} alpha = {:.8} U = {:+.6}   root alpha = {:.8}", e.alpha, e.value, r.alpha);
    }
    for b in profile.barriers() {
        println!("barrier {b:.6}");
    }
    let lo = profile.values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = profile.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for (a, u) in profile.grid.iter().zip(&profile.values).step_by(profile.grid.len() / 30) {
        let bar = ((u - lo) / (hi - lo) * 60.0) as usize;
        println!("{a:6.3} {}*", " ".repeat(bar));
    }
    Ok(())
}
