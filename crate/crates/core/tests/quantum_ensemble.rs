use jcsr::model::SystemParams;
use jcsr::quantum::{build_operators, me_evolve, sme_ensemble, QuantumState, SmeConfig};
use jcsr::seed::derive_seeds;

/// First-order discretization bias at dt = 1e-3.
const BIAS: f64 = 2e-3;

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn conditioned_average_matches_master_equation() {
    let m = 200;
    let ops = build_operators(12).unwrap();
    let p = SystemParams::default().with_e1(1.2).with_signal(0.3, 0.5);
    let init = QuantumState::ground(&ops);
    let (reference, _) = me_evolve(&ops, &p, &init, 1e-3, 4.0, 250).unwrap();
    let runs = sme_ensemble(&ops, &p, &init, &SmeConfig::new(1e-3, 4.0, 0, 250), &derive_seeds(21, m)).unwrap();
    for (k, r) in reference.iter().skip(1).enumerate() {
        let a: Vec<f64> = runs.iter().map(|run| run.record.samples[k].a.re).collect();
        let z: Vec<f64> = runs.iter().map(|run| run.record.samples[k].sigma_z).collect();
        let (ma, sa) = mean_and_stderr(&a);
        let (mz, sz) = mean_and_stderr(&z);
        assert!((ma - r.a.re).abs() <= 5.0 * sa + BIAS, "t = {}: {ma} vs {}", r.t, r.a.re);
        assert!((mz - r.sigma_z).abs() <= 5.0 * sz + BIAS, "t = {}: {mz} vs {}", r.t, r.sigma_z);
    }
}

#[test]
fn homodyne_current_tracks_the_quadrature() {
    let ops = build_operators(12).unwrap();
    let p = SystemParams::default().with_e1(1.2);
    let init = QuantumState::ground(&ops);
    let runs = sme_ensemble(&ops, &p, &init, &SmeConfig::new(1e-3, 40.0, 0, 100), &derive_seeds(22, 1)).unwrap();
    let residual: Vec<f64> = runs[0]
        .record
        .samples
        .iter()
        .map(|s| s.current - 2.0 * p.kappa.sqrt() * s.a.re)
        .collect();
    let (mean, stderr) = mean_and_stderr(&residual);
    assert!(mean.abs() <= 3.0 * stderr, "{mean} +- {stderr}");
}
