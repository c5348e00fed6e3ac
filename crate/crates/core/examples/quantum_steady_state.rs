//! Unconditional steady state of the master equation across the drive,
//! next to the semiclassical branches.

use jcsr::model::{bistable_region, steady_states, SystemParams};
use jcsr::quantum::{build_operators, me_steady_state_from, QuantumState, SteadyOptions};

fn main() -> jcsr::Result<()> {
    let fock_dim: usize = std::env::args().nth(1).map_or(50, |s| s.parse().expect("Fock dimension"));
    let ops = build_operators(fock_dim)?;
    let base = SystemParams::default();
    if let Some((lo, hi)) = bistable_region(&base, (1.5, 3.5), 0.001)? {
        println!("semiclassical bistable region: [{lo:.3}, {hi:.3}]");
    }
    println!("E1,re_a,im_a,sigma_z,top_fock,semiclassical_alphas");
    let mut state = QuantumState::ground(&ops);
    for k in 0..=24 {
        let e1 = 1.8 + 0.05 * k as f64;
        let p = base.with_e1(e1);
        let r = me_steady_state_from(&ops, &p, state, &SteadyOptions::default())?;
        let alphas: Vec<String> = steady_states(&p, e1)?.iter().map(|s| format!("{:.3}", s.alpha)).collect();
        println!(
            "{e1:.2},{:.6},{:.6},{:.6},{:.2e},{}",
            r.a.re,
            r.a.im,
            r.sigma_z,
            r.state.top_fock_population(),
            alphas.join(" ")
        );
        state = r.state;
    }
    Ok(())
}
