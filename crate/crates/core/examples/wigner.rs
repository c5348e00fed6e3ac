//! Wigner function of the unconditional steady state below and above the
//! quantum switching point, drawn as a coarse density plot.
//!
//! `cargo run --release --example wigner -- [N] [E1...]`

use jcsr::model::SystemParams;
use jcsr::quantum::{build_operators, me_steady_state, reduce_cavity, wigner, SteadyOptions, WignerGrid};

fn main() -> jcsr::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let fock_dim: usize = args.first().map_or(50, |s| s.parse().expect("N"));
    let mut e1s: Vec<f64> = args.iter().skip(1).map(|s| s.parse().expect("E1")).collect();
    if e1s.is_empty() {
        e1s = vec![2.25, 2.55];
    }
    let ops = build_operators(fock_dim)?;
    let grid = WignerGrid::new((-2.5, 5.5), (-3.0, 3.0), 81, 61);
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    for e1 in e1s {
        let r = me_steady_state(&ops, &SystemParams::default().with_e1(e1), &SteadyOptions::default())?;
        let w = wigner(&reduce_cavity(&r.state.rho, fock_dim), &grid);
        let peaks = w.peaks(0.05);
        println!("E1 = {e1}: <a> = {:.4}, integral {:.5}, {} peak(s)", r.a, w.integral(), peaks.len());
        for p in &peaks {
            println!("  W({:.2}) = {:.4}, prominence {:.4}", p.beta, p.value, p.prominence);
        }
        let top = w.max();
        for iy in (0..grid.im_points).rev().step_by(3) {
            let row: String = (0..grid.re_points)
                .map(|ix| shades[((w.at(ix, iy).max(0.0) / top) * 9.0).round() as usize])
                .collect();
            println!("  {row}");
        }
    }
    Ok(())
}
