use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{SnrSource, Thresholds};
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::quantum::{SmeScheme, WignerGrid, TRUNCATION_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Semiclassical,
    Quantum,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Semiclassical => "semiclassical",
            Engine::Quantum => "quantum",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    pub dt: f64,
    /// Integrated time per trajectory.
    pub duration: f64,
    /// Steps between records.
    pub stride: usize,
    /// Independent trajectories per point; their seeds derive from the master seed.
    pub trajectories: usize,
    /// Fock truncation; required by the quantum engine.
    pub fock_dim: Option<usize>,
    pub scheme: SmeScheme,
    pub truncation: f64,
    /// Wall-clock seconds between quantum checkpoints; 0 disables them.
    pub checkpoint_seconds: f64,
    /// Records between full quantum hygiene checks; 0 disables them.
    pub snapshot_every: usize,
    pub imaginary_noise: bool,
    /// Time discarded before analysis.
    pub burn_in: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            duration: 1e4,
            stride: 100,
            trajectories: 1,
            fock_dim: None,
            scheme: SmeScheme::default(),
            truncation: TRUNCATION_TOLERANCE,
            checkpoint_seconds: 600.0,
            snapshot_every: 0,
            imaginary_noise: false,
            burn_in: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Analysis {
    /// `[low_to_high, high_to_low]`; derived from the model or the data when absent.
    pub thresholds: Option<[f64; 2]>,
    /// Fixed histogram bin width for residence times; Freedman–Diaconis when absent.
    pub bin_width: Option<f64>,
    pub e1_range: [f64; 2],
    pub e1_points: usize,
    pub noise_values: Vec<f64>,
    pub snr_source: SnrSource,
    pub wigner_e1: Vec<f64>,
    pub wigner_re: [f64; 2],
    pub wigner_im: [f64; 2],
    pub wigner_points: usize,
    pub alpha_max: Option<f64>,
    pub alpha_points: usize,
}

impl Default for Analysis {
    fn default() -> Self {
        Self {
            thresholds: None,
            bin_width: None,
            e1_range: [1.8, 3.0],
            e1_points: 121,
            noise_values: vec![0.02, 0.03, 0.04, 0.05, 0.06],
            snr_source: SnrSource::default(),
            wigner_e1: vec![2.25, 2.55],
            wigner_re: [-2.5, 5.5],
            wigner_im: [-3.0, 3.0],
            wigner_points: 81,
            alpha_max: None,
            alpha_points: 601,
        }
    }
}

impl Analysis {
    pub fn thresholds(&self) -> Result<Option<Thresholds>> {
        self.thresholds.map(|[up, down]| Thresholds::new(up, down)).transpose()
    }

    pub fn wigner_grid(&self) -> WignerGrid {
        let ([r0, r1], [i0, i1]) = (self.wigner_re, self.wigner_im);
        WignerGrid::new((r0, r1), (i0, i1), self.wigner_points, self.wigner_points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Output {
    pub dir: PathBuf,
}

impl Default for Output {
    fn default() -> Self {
        Self { dir: PathBuf::from("out") }
    }
}

/// Everything a subcommand needs, read from TOML and then overridden by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub engine: Engine,
    /// Master seed; per-trajectory seeds derive from it.
    pub seed: u64,
    pub params: SystemParams,
    pub numerics: Numerics,
    pub analysis: Analysis,
    pub output: Output,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            engine: Engine::default(),
            seed: 1,
            params: SystemParams::default(),
            numerics: Numerics::default(),
            analysis: Analysis::default(),
            output: Output::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        self.params.validate().map_err(|e| Error::Config(e.to_string()))?;
        let n = &self.numerics;
        if !(n.dt > 0.0 && n.dt.is_finite()) {
            return bad(format!("numerics.dt = {}", n.dt));
        }
        if !(n.duration > 0.0 && n.duration.is_finite()) {
            return bad(format!("numerics.duration = {}", n.duration));
        }
        if n.stride == 0 {
            return bad("numerics.stride must be positive".into());
        }
        if n.trajectories == 0 {
            return bad("numerics.trajectories must be positive: the seed list is empty".into());
        }
        if !(n.burn_in >= 0.0 && n.burn_in < n.duration) {
            return bad(format!("numerics.burn_in = {} outside [0, duration)", n.burn_in));
        }
        if !(n.truncation > 0.0) {
            return bad(format!("numerics.truncation = {}", n.truncation));
        }
        if let Some(fd) = n.fock_dim {
            if fd < 2 {
                return bad(format!("numerics.fock_dim = {fd} (need at least 2)"));
            }
        }
        if self.engine == Engine::Quantum && n.fock_dim.is_none() {
            return bad("the quantum engine needs numerics.fock_dim".into());
        }
        let a = &self.analysis;
        a.thresholds().map_err(|e| Error::Config(e.to_string()))?;
        if let Some(w) = a.bin_width {
            if !(w > 0.0) {
                return bad(format!("analysis.bin_width = {w}"));
            }
        }
        let [lo, hi] = a.e1_range;
        if !(lo >= 0.0 && hi >= lo && a.e1_points >= 1) {
            return bad(format!("analysis.e1_range = [{lo}, {hi}] with {} points", a.e1_points));
        }
        if a.noise_values.is_empty() || a.noise_values.iter().any(|d| !(*d > 0.0)) {
            return bad("analysis.noise_values must be non-empty and positive".into());
        }
        if a.wigner_points < 2 || a.wigner_re[1] <= a.wigner_re[0] || a.wigner_im[1] <= a.wigner_im[0] {
            return bad("analysis wigner grid is empty".into());
        }
        if a.alpha_points < 2 {
            return bad("analysis.alpha_points must be at least 2".into());
        }
        Ok(())
    }

    pub fn fock_dim(&self) -> Result<usize> {
        self.numerics
            .fock_dim
            .ok_or_else(|| Error::Config("the quantum engine needs numerics.fock_dim".into()))
    }

    /// Per-trajectory seeds.
    pub fn seeds(&self) -> Vec<u64> {
        crate::seed::derive_seeds(self.seed, self.numerics.trajectories)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_and_defaults() {
        let c = RunConfig::from_toml(
            r#"
            engine = "quantum"
            seed = 9
            [params]
            kappa = 1.0
            gamma = 10.0
            g = 6.0
            e1 = 2.55
            [numerics]
            fock_dim = 50
            scheme = "euler-maruyama"
            "#,
        )
        .unwrap();
        assert_eq!(c.engine, Engine::Quantum);
        assert_eq!(c.params.e2, 0.0);
        assert_eq!(c.numerics.dt, 1e-3);
        assert_eq!(c.numerics.scheme, SmeScheme::EulerMaruyama);
        c.validate().unwrap();
        assert_eq!(RunConfig::from_toml(&c.to_toml()).unwrap(), c);
        assert_eq!(c.seeds().len(), 1);
    }

    #[test]
    fn rejections() {
        assert!(matches!(RunConfig::from_toml("engine = 3"), Err(Error::Config(_))));
        assert!(matches!(RunConfig::from_toml("[params]\nkapa = 1"), Err(Error::Config(_))));
        let mut c = RunConfig::default();
        c.engine = Engine::Quantum;
        assert!(c.validate().is_err());
        c.numerics.fock_dim = Some(40);
        c.validate().unwrap();
        c.numerics.trajectories = 0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.params.gamma = -1.0;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = RunConfig::default();
        c.analysis.thresholds = Some([1.0, 2.0]);
        assert!(c.validate().is_err());
    }
}
