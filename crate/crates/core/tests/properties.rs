use proptest::prelude::*;

use jcsr::analysis::{detect_transitions, response_lag, Thresholds, MAX_LAG_SAMPLES};
use jcsr::model::{
    bistable_region, derived_params, potential_extrema, steady_states, SystemParams,
};
use jcsr::quantum::{build_operators, sme_integrate, QuantumState, SmeConfig};
use jcsr::seed::derive_seeds;
use jcsr::semiclassical::{integrate, Record, SdeConfig, SemiclassicalState};

fn strong() -> SystemParams {
    SystemParams::new(1.0, 10.0, 6.0)
}

fn std_dev(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_solve_the_drive_equation_and_extremize_the_potential(e1 in 0.0f64..4.0, g in 0.5f64..8.0) {
        let p = SystemParams::new(1.0, 10.0, g).with_e1(e1);
        let d = derived_params(&p).unwrap();
        let roots = steady_states(&p, e1).unwrap();
        let extrema = potential_extrema(&p).extrema;
        prop_assert_eq!(roots.len(), extrema.len());
        for (r, x) in roots.iter().zip(&extrema) {
            let sat = 1.0 + r.alpha * r.alpha / d.saturation_photons;
            let drive = 0.5 * p.kappa * r.alpha * (2.0 * d.cooperativity / sat + 1.0);
            prop_assert!((drive - e1).abs() < 1e-9);
            prop_assert!((r.d0 + 1.0 / sat).abs() < 1e-12);
            prop_assert!((r.alpha - x.alpha).abs() < 1e-6);
        }
    }

    #[test]
    fn three_roots_exactly_inside_the_window(e1 in 1.8f64..2.8) {
        let p = strong();
        let (lo, hi) = bistable_region(&p, (1.0, 4.0), 1e-7).unwrap().unwrap();
        prop_assume!((e1 - lo).abs() > 1e-5 && (e1 - hi).abs() > 1e-5);
        let expected = if e1 > lo && e1 < hi { 3 } else { 1 };
        prop_assert_eq!(steady_states(&p, e1).unwrap().len(), expected);
    }

    #[test]
    fn seeds_are_distinct_and_prefix_stable(master in any::<u64>(), n in 1usize..200, k in 0usize..200) {
        let seeds = derive_seeds(master, n);
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), n);
        let k = k.min(n);
        prop_assert_eq!(&derive_seeds(master, k)[..], &seeds[..k]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn kraus_steps_keep_every_snapshot_physical(
        fock in 6usize..12,
        e1 in 0.0f64..1.0,
        g in 0.0f64..3.0,
        e2 in 0.0f64..0.3,
        delta in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let ops = build_operators(fock).unwrap();
        let p = SystemParams::new(1.0, 10.0, g).with_e1(e1).with_signal(e2, delta);
        let cfg = SmeConfig { snapshot_every: 1, truncation: 1.0, ..SmeConfig::new(1e-3, 1.0, seed, 50) };
        let run = sme_integrate(&ops, &p, &QuantumState::ground(&ops), &cfg).unwrap();
        prop_assert_eq!(run.snapshots.len(), 20);
        for s in &run.snapshots {
            prop_assert!(s.hygiene.is_valid(1.0), "{:?}", s);
        }
    }
}

fn endpoint(dt: f64) -> Record {
    let p = strong().with_e1(2.24).with_signal(0.1, 0.3).with_noise(0.0);
    let steps = (10.0 / dt).round() as usize;
    *integrate(&p, SemiclassicalState::ground(), &SdeConfig::new(dt, 10.0, 0, steps))
        .unwrap()
        .records
        .last()
        .unwrap()
}

#[test]
fn noiseless_scheme_is_first_order() {
    let err = |a: &Record, b: &Record| {
        ((a.re_alpha - b.re_alpha).powi(2) + (a.im_alpha - b.im_alpha).powi(2) + (a.d0 - b.d0).powi(2)).sqrt()
    };
    let (coarse, mid, fine) = (endpoint(4e-3), endpoint(2e-3), endpoint(1e-3));
    let ratio = err(&coarse, &mid) / err(&mid, &fine);
    assert!((1.6..2.4).contains(&ratio), "{ratio}");
}

#[test]
fn unstable_root_is_an_equilibrium() {
    let p = strong().with_e1(2.24).with_noise(0.0);
    let middle = steady_states(&p, p.e1).unwrap()[1];
    let tr = integrate(&p, middle.as_state(), &SdeConfig::new(1e-3, 10.0, 0, 1000)).unwrap();
    for r in &tr.records {
        assert!((r.re_alpha - middle.alpha).abs() < 1e-6, "{} at t = {}", r.re_alpha, r.t);
    }
}

#[test]
fn field_and_inversion_move_together() {
    let p = strong().with_e1(2.24).with_noise(0.06);
    let roots = steady_states(&p, p.e1).unwrap();
    let thresholds = Thresholds::for_params(&p).unwrap();
    let tr = integrate(&p, roots[0].as_state(), &SdeConfig::new(1e-3, 2e4, 7, 100)).unwrap();
    let field = detect_transitions(&tr.times(), &tr.amplitude(), thresholds).unwrap();
    assert!(field.switches.len() >= 20);
    let (shift, correlation) = response_lag(&tr.amplitude(), &tr.inversion(), MAX_LAG_SAMPLES);
    assert!(shift.abs() <= 1 && correlation > 0.8, "{shift} {correlation}");

    let high: Vec<f64> = tr.records.iter().map(|r| r.re_alpha).filter(|&x| x > roots[1].alpha).collect();
    let low: Vec<f64> = tr.records.iter().map(|r| r.re_alpha).filter(|&x| x < roots[1].alpha).collect();
    assert!(std_dev(&low) < std_dev(&high));
}
