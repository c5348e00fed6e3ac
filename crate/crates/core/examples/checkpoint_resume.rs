//! A conditioned run interrupted halfway, serialized and resumed, ends in
//! exactly the state of an uninterrupted run.

use jcsr::model::SystemParams;
use jcsr::quantum::{build_operators, sme_integrate, QuantumState, SmeCheckpoint, SmeConfig, SmeIntegrator};

fn main() -> jcsr::Result<()> {
    let ops = build_operators(50)?;
    let p = SystemParams::default().with_e1(2.55);
    let cfg = SmeConfig::new(1e-3, 10.0, 42, 100);
    let init = QuantumState::ground(&ops);

    let whole = sme_integrate(&ops, &p, &init, &cfg)?;

    let mut first = SmeIntegrator::new(&ops, &p, &init, &cfg)?;
    first.advance(cfg.steps() / 2)?;
    let json = serde_json::to_string(&first.checkpoint())?;
    println!("checkpoint at t = {:.1}: {} bytes", first.time(), json.len());
    let cp: SmeCheckpoint = serde_json::from_str(&json)?;
    let mut second = SmeIntegrator::resume(&ops, cp)?;
    second.advance(u64::MAX)?;
    let resumed = second.finish();

    let same = whole.record.samples == resumed.record.samples && whole.final_state.rho == resumed.final_state.rho;
    println!("final <a> {:.6}, identical after resume: {same}", resumed.record.samples.last().unwrap().a);
    Ok(())
}
