//! Scenario configuration: a flat key-value text format with optional
//! section headers, strict key validation, and per-scenario defaults.
//!
//! Every key not set in the file is filled from the scenario's defaults and
//! the fully resolved configuration is echoed into each output file's
//! metadata header, so any CSV can be reproduced from its own header.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::hamiltonian::CouplingConvention;

/// The five runnable experiment families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Homogeneous ensembles of 1..=N atoms in the long-wavelength limit.
    HomogeneousScaling,
    /// Four detuned atoms, eleven modes, swept over Γ0.
    InhomogeneousGammaSweep,
    /// Homogeneous chain swept over the interatomic spacing Δr/λ0.
    SpatialDilution,
    /// Energy-conservation drift swept over the Trotter step count.
    TrotterError,
    /// One atom, one resonant mode: Rabi oscillation benchmark.
    JaynesCummings,
}

impl ScenarioKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioKind::HomogeneousScaling => "homogeneous_scaling",
            ScenarioKind::InhomogeneousGammaSweep => "inhomogeneous_gamma_sweep",
            ScenarioKind::SpatialDilution => "spatial_dilution",
            ScenarioKind::TrotterError => "trotter_error",
            ScenarioKind::JaynesCummings => "jaynes_cummings",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "homogeneous_scaling" => Ok(ScenarioKind::HomogeneousScaling),
            "inhomogeneous_gamma_sweep" => Ok(ScenarioKind::InhomogeneousGammaSweep),
            "spatial_dilution" => Ok(ScenarioKind::SpatialDilution),
            "trotter_error" => Ok(ScenarioKind::TrotterError),
            "jaynes_cummings" => Ok(ScenarioKind::JaynesCummings),
            _ => Err(Error::Config(format!("unknown scenario {s:?}"))),
        }
    }

    pub fn all() -> &'static [ScenarioKind] {
        &[
            ScenarioKind::HomogeneousScaling,
            ScenarioKind::InhomogeneousGammaSweep,
            ScenarioKind::SpatialDilution,
            ScenarioKind::TrotterError,
            ScenarioKind::JaynesCummings,
        ]
    }

    pub fn describe(&self) -> &'static str {
        match self {
            ScenarioKind::HomogeneousScaling => {
                "intensity, coherence, occupation, and peak fits for ensembles of 1..=n_atoms \
                 resonant atoms at a common position, with master-equation companions"
            }
            ScenarioKind::InhomogeneousGammaSweep => {
                "four spectrally detuned atoms in an eleven-mode bath, swept over gamma0, \
                 against the homogeneous master-equation reference"
            }
            ScenarioKind::SpatialDilution => {
                "evenly spaced emitter chain in a 1-D bath swept over dr_over_lambda, with \
                 the anchored cosine-sum prediction for the peak coherence"
            }
            ScenarioKind::TrotterError => {
                "energy-conservation drift of the four-atom seven-mode system for each \
                 trotter_steps value, with an exact-evolution baseline"
            }
            ScenarioKind::JaynesCummings => {
                "single atom exchanging one excitation with a resonant mode; occupation \
                 oscillates with period pi/g"
            }
        }
    }
}

/// Which engine produces the rows of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Trotter,
    Exact,
    Lindblad,
}

impl Backend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Backend::Trotter => "trotter",
            Backend::Exact => "exact",
            Backend::Lindblad => "lindblad",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "trotter" => Ok(Backend::Trotter),
            "exact" => Ok(Backend::Exact),
            "lindblad" => Ok(Backend::Lindblad),
            _ => Err(Error::Config(format!(
                "unknown backend {s:?} (expected trotter, exact, or lindblad)"
            ))),
        }
    }
}

/// Fully resolved scenario configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub n_atoms: usize,
    /// Sweep list; a single entry for non-sweep scenarios.
    pub gamma0: Vec<f64>,
    pub atom_freq_center: f64,
    /// Spacing between successive atom frequencies; 0 = spectrally
    /// homogeneous. Atoms sit at center + spacing * (α - (N-1)/2).
    pub atom_freq_spacing: f64,
    pub mode_count: usize,
    /// Full frequency span of the mode window, centered on the atomic line.
    /// With a single mode this doubles as the effective level spacing fed to
    /// the coupling calibration.
    pub mode_window_width: f64,
    /// Explicit per-mode qubit allocations; empty selects the automatic
    /// rule (1 per mode; resonant mode gets 2 for homogeneous runs of 4+
    /// atoms).
    pub mode_qubits: Vec<usize>,
    /// Explicit atom positions (natural units). Overrides dr_over_lambda.
    pub positions: Vec<f64>,
    /// Sweep of interatomic spacings in units of the emission wavelength.
    pub dr_over_lambda: Vec<f64>,
    pub total_time_lifetimes: f64,
    /// Sweep list; a single entry outside the trotter_error scenario.
    pub trotter_steps: Vec<usize>,
    pub sample_stride: usize,
    pub backend: Backend,
    pub coupling_convention: CouplingConvention,
    pub out_dir: PathBuf,
}

impl ScenarioConfig {
    /// The scenario's default configuration.
    pub fn defaults(kind: ScenarioKind) -> Self {
        let base = ScenarioConfig {
            scenario: kind,
            n_atoms: 4,
            gamma0: vec![2.0],
            atom_freq_center: 100.0,
            atom_freq_spacing: 0.0,
            mode_count: 7,
            mode_window_width: 50.0,
            mode_qubits: Vec::new(),
            positions: Vec::new(),
            dr_over_lambda: vec![0.0],
            total_time_lifetimes: 3.0,
            trotter_steps: vec![1600],
            sample_stride: 16,
            backend: Backend::Trotter,
            coupling_convention: CouplingConvention::G2OverDelta,
            out_dir: PathBuf::from("out"),
        };
        match kind {
            ScenarioKind::HomogeneousScaling => ScenarioConfig { n_atoms: 7, ..base },
            ScenarioKind::InhomogeneousGammaSweep => ScenarioConfig {
                gamma0: vec![0.1, 2.0, 3.0, 5.0],
                atom_freq_spacing: 7.5,
                mode_count: 11,
                mode_window_width: 37.5,
                ..base
            },
            ScenarioKind::SpatialDilution => ScenarioConfig {
                dr_over_lambda: (0..=12).map(|i| i as f64 * 0.125).collect(),
                ..base
            },
            ScenarioKind::TrotterError => ScenarioConfig {
                trotter_steps: vec![100, 200, 400, 800, 1600],
                ..base
            },
            ScenarioKind::JaynesCummings => ScenarioConfig {
                n_atoms: 1,
                // δ = width = 1 and Γ0 = π/2 give g = 1/2 under the default
                // convention, so g/ω = 0.005 and the period is 2π
                gamma0: vec![std::f64::consts::FRAC_PI_2],
                mode_count: 1,
                mode_window_width: 1.0,
                total_time_lifetimes: 20.0,
                trotter_steps: vec![20000],
                sample_stride: 20,
                ..base
            },
        }
    }

    /// Effective bath level spacing: window width over (count - 1), or the
    /// width itself for a single-mode cavity.
    pub fn mode_spacing(&self) -> f64 {
        if self.mode_count >= 2 {
            self.mode_window_width / (self.mode_count - 1) as f64
        } else {
            self.mode_window_width
        }
    }

    /// Qubit allocation per mode for an ensemble of `n_atoms`.
    pub fn resolve_mode_qubits(&self, n_atoms: usize) -> Vec<usize> {
        if !self.mode_qubits.is_empty() {
            if self.mode_qubits.len() == 1 {
                return vec![self.mode_qubits[0]; self.mode_count];
            }
            return self.mode_qubits.clone();
        }
        let mut qubits = vec![1usize; self.mode_count];
        let homogeneous = self.atom_freq_spacing == 0.0;
        if homogeneous && n_atoms >= 4 && self.mode_count >= 2 {
            qubits[self.mode_count / 2] = 2;
        }
        qubits
    }

    /// Emission wavelength λ0 = 1/ω0 in natural units.
    pub fn lambda0(&self) -> f64 {
        1.0 / self.atom_freq_center
    }

    fn validate(&self) -> Result<()> {
        let fail = |key: &str, msg: String| Err(Error::Config(format!("key `{key}`: {msg}")));
        if self.n_atoms == 0 {
            return fail("n_atoms", "must be at least 1".into());
        }
        if self.gamma0.is_empty() {
            return fail("gamma0", "sweep list must be non-empty".into());
        }
        for &g in &self.gamma0 {
            if !(g > 0.0) {
                return fail("gamma0", format!("must be positive, got {g}"));
            }
        }
        if !(self.atom_freq_center > 0.0) {
            return fail("atom_freq_center", "must be positive".into());
        }
        if self.atom_freq_spacing < 0.0 {
            return fail("atom_freq_spacing", "must be non-negative".into());
        }
        if self.mode_count == 0 {
            return fail("mode_count", "must be at least 1".into());
        }
        if !(self.mode_window_width > 0.0) {
            return fail("mode_window_width", "must be positive".into());
        }
        if !self.mode_qubits.is_empty()
            && self.mode_qubits.len() != 1
            && self.mode_qubits.len() != self.mode_count
        {
            return fail(
                "mode_qubits",
                format!(
                    "needs 1 or {} entries, got {}",
                    self.mode_count,
                    self.mode_qubits.len()
                ),
            );
        }
        for &q in &self.mode_qubits {
            if q == 0 {
                return fail("mode_qubits", "allocations must be at least 1".into());
            }
        }
        if !self.positions.is_empty() && self.positions.len() != self.n_atoms {
            return fail(
                "positions",
                format!("needs {} entries, got {}", self.n_atoms, self.positions.len()),
            );
        }
        if self.dr_over_lambda.is_empty() {
            return fail("dr_over_lambda", "sweep list must be non-empty".into());
        }
        for &x in &self.dr_over_lambda {
            if x < 0.0 {
                return fail("dr_over_lambda", format!("must be non-negative, got {x}"));
            }
        }
        if !(self.total_time_lifetimes > 0.0) {
            return fail("total_time_lifetimes", "must be positive".into());
        }
        if self.trotter_steps.is_empty() {
            return fail("trotter_steps", "sweep list must be non-empty".into());
        }
        for &n in &self.trotter_steps {
            if n == 0 {
                return fail("trotter_steps", "step counts must be at least 1".into());
            }
        }
        if self.sample_stride == 0 {
            return fail("sample_stride", "must be at least 1".into());
        }
        if self.scenario == ScenarioKind::JaynesCummings && self.mode_count != 1 {
            return fail("mode_count", "jaynes_cummings uses exactly one mode".into());
        }
        Ok(())
    }

    /// Serialize in the same flat format [`parse_config`] reads; parsing the
    /// result reproduces this configuration exactly.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[scenario]");
        let _ = writeln!(s, "scenario = {}", self.scenario.as_str());
        let _ = writeln!(s, "backend = {}", self.backend.as_str());
        let _ = writeln!(s, "out_dir = {}", self.out_dir.display());
        let _ = writeln!(s, "[system]");
        let _ = writeln!(s, "n_atoms = {}", self.n_atoms);
        let _ = writeln!(s, "gamma0 = {}", join_f64(&self.gamma0));
        let _ = writeln!(s, "atom_freq_center = {}", self.atom_freq_center);
        let _ = writeln!(s, "atom_freq_spacing = {}", self.atom_freq_spacing);
        let _ = writeln!(s, "mode_count = {}", self.mode_count);
        let _ = writeln!(s, "mode_window_width = {}", self.mode_window_width);
        if !self.mode_qubits.is_empty() {
            let _ = writeln!(s, "mode_qubits = {}", join_usize(&self.mode_qubits));
        }
        if !self.positions.is_empty() {
            let _ = writeln!(s, "positions = {}", join_f64(&self.positions));
        }
        let _ = writeln!(s, "dr_over_lambda = {}", join_f64(&self.dr_over_lambda));
        let _ = writeln!(s, "coupling_convention = {}", self.coupling_convention.as_str());
        let _ = writeln!(s, "[evolution]");
        let _ = writeln!(s, "total_time_lifetimes = {}", self.total_time_lifetimes);
        let _ = writeln!(s, "trotter_steps = {}", join_usize(&self.trotter_steps));
        let _ = writeln!(s, "sample_stride = {}", self.sample_stride);
        s
    }
}

fn join_f64(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn join_usize(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Parse the flat key-value scenario format.
///
/// Lines are `key = value`; `#` starts a comment; `[section]` headers are
/// organizational only. Unknown keys, malformed values, and constraint
/// violations are hard errors carrying the key name and line number.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    // first pass: find the scenario so defaults can be scenario-specific
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(Error::Config(format!("line {lineno}: unterminated section header")));
            }
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(Error::Config(format!(
                "line {lineno}: expected `key = value`, got {line:?}"
            )));
        };
        let key = line[..eq].trim().to_string();
        let value = line[eq + 1..].trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(Error::Config(format!("line {lineno}: empty key or value")));
        }
        entries.push((lineno, key, value));
    }

    let scenario_entry = entries
        .iter()
        .find(|(_, k, _)| k == "scenario")
        .ok_or_else(|| Error::Config("missing required key `scenario`".into()))?;
    let scenario = ScenarioKind::parse(&scenario_entry.2)
        .map_err(|e| Error::Config(format!("line {}: {e}", scenario_entry.0)))?;

    let mut cfg = ScenarioConfig::defaults(scenario);
    let mut seen: Vec<&str> = Vec::new();

    for (lineno, key, value) in &entries {
        let ctx = |e: Error| Error::Config(format!("line {lineno}, key `{key}`: {e}"));
        if seen.contains(&key.as_str()) {
            return Err(Error::Config(format!("line {lineno}: duplicate key `{key}`")));
        }
        match key.as_str() {
            "scenario" => {}
            "n_atoms" => cfg.n_atoms = parse_usize(value).map_err(ctx)?,
            "gamma0" => cfg.gamma0 = parse_f64_list(value).map_err(ctx)?,
            "atom_freq_center" => cfg.atom_freq_center = parse_f64(value).map_err(ctx)?,
            "atom_freq_spacing" => cfg.atom_freq_spacing = parse_f64(value).map_err(ctx)?,
            "mode_count" => cfg.mode_count = parse_usize(value).map_err(ctx)?,
            "mode_window_width" => cfg.mode_window_width = parse_f64(value).map_err(ctx)?,
            "mode_qubits" => cfg.mode_qubits = parse_usize_list(value).map_err(ctx)?,
            "positions" => cfg.positions = parse_f64_list(value).map_err(ctx)?,
            "dr_over_lambda" => cfg.dr_over_lambda = parse_f64_list(value).map_err(ctx)?,
            "total_time_lifetimes" => cfg.total_time_lifetimes = parse_f64(value).map_err(ctx)?,
            "trotter_steps" => cfg.trotter_steps = parse_usize_list(value).map_err(ctx)?,
            "sample_stride" => cfg.sample_stride = parse_usize(value).map_err(ctx)?,
            "backend" => cfg.backend = Backend::parse(value).map_err(ctx)?,
            "coupling_convention" => {
                cfg.coupling_convention = CouplingConvention::parse(value).map_err(ctx)?
            }
            "out_dir" => cfg.out_dir = PathBuf::from(value),
            _ => {
                return Err(Error::Config(format!("line {lineno}: unknown key `{key}`")));
            }
        }
        seen.push(key.as_str());
    }

    cfg.validate()?;
    Ok(cfg)
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Config(format!("expected a number, got {s:?}")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| Error::Config(format!("expected a non-negative integer, got {s:?}")))
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|item| parse_f64(item.trim())).collect()
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',').map(|item| parse_usize(item.trim())).collect()
}

/// Qubit cap for system construction, overridable through the environment.
pub fn qubit_cap_from_env() -> usize {
    std::env::var("SUPERRAD_MAX_QUBITS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(crate::hamiltonian::DEFAULT_QUBIT_CAP)
}

/// Parallelism cap for sweep execution, overridable through the environment.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("SUPERRAD_THREADS").ok().and_then(|v| v.parse::<usize>().ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config("scenario = jaynes_cummings\n").unwrap();
        assert_eq!(cfg.scenario, ScenarioKind::JaynesCummings);
        assert_eq!(cfg.n_atoms, 1);
        assert_eq!(cfg.mode_count, 1);
        assert_eq!(cfg.backend, Backend::Trotter);
        assert_eq!(cfg.coupling_convention, CouplingConvention::G2OverDelta);
        // δ = 1, Γ0 = π/2 -> g = 1/2
        let g = crate::hamiltonian::coupling_from_gamma(
            cfg.gamma0[0],
            cfg.mode_spacing(),
            cfg.coupling_convention,
        )
        .unwrap();
        assert!((g - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sections_and_comments_are_cosmetic() {
        let text = "\
# experiment
[scenario]
scenario = homogeneous_scaling
[system]
n_atoms = 5   # five emitters
gamma0 = 2.0
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.n_atoms, 5);
        assert_eq!(cfg.gamma0, vec![2.0]);
    }

    #[test]
    fn unknown_key_is_hard_error() {
        let err = parse_config("scenario = jaynes_cummings\nn_atmos = 3\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("n_atmos"), "{msg}");
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn constraint_violation_names_key() {
        let err = parse_config("scenario = homogeneous_scaling\nn_atoms = 0\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("n_atoms"), "{msg}");
    }

    #[test]
    fn type_mismatch_names_key_and_line() {
        let err = parse_config("scenario = homogeneous_scaling\ngamma0 = fast\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("gamma0") && msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn duplicate_key_rejected() {
        let err =
            parse_config("scenario = jaynes_cummings\nn_atoms = 1\nn_atoms = 2\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn gamma_sweep_list_parses() {
        let cfg = parse_config(
            "scenario = inhomogeneous_gamma_sweep\ngamma0 = 0.1, 2.0, 3.0, 5.0\n",
        )
        .unwrap();
        assert_eq!(cfg.gamma0, vec![0.1, 2.0, 3.0, 5.0]);
        assert_eq!(cfg.mode_count, 11);
        assert!((cfg.mode_spacing() - 3.75).abs() < 1e-12);
        assert_eq!(cfg.atom_freq_spacing, 7.5);
    }

    #[test]
    fn automatic_mode_qubits_rule() {
        let cfg = ScenarioConfig::defaults(ScenarioKind::HomogeneousScaling);
        assert_eq!(cfg.resolve_mode_qubits(3), vec![1; 7]);
        let q = cfg.resolve_mode_qubits(5);
        assert_eq!(q[3], 2);
        assert_eq!(q.iter().sum::<usize>(), 8);

        let inh = ScenarioConfig::defaults(ScenarioKind::InhomogeneousGammaSweep);
        assert_eq!(inh.resolve_mode_qubits(4), vec![1; 11]);

        let explicit = ScenarioConfig {
            mode_qubits: vec![3],
            ..ScenarioConfig::defaults(ScenarioKind::HomogeneousScaling)
        };
        assert_eq!(explicit.resolve_mode_qubits(6), vec![3; 7]);
    }

    fn arb_config() -> impl Strategy<Value = ScenarioConfig> {
        let kind = prop_oneof![
            Just(ScenarioKind::HomogeneousScaling),
            Just(ScenarioKind::InhomogeneousGammaSweep),
            Just(ScenarioKind::SpatialDilution),
            Just(ScenarioKind::TrotterError),
        ];
        (
            kind,
            1usize..6,
            prop::collection::vec(0.1f64..8.0, 1..4),
            50.0f64..150.0,
            prop::collection::vec(0.0f64..1.4, 1..5),
            100usize..2000,
            1usize..64,
        )
            .prop_map(|(kind, n_atoms, gamma0, center, drs, steps, stride)| ScenarioConfig {
                n_atoms,
                gamma0,
                atom_freq_center: center,
                dr_over_lambda: drs,
                trotter_steps: vec![steps],
                sample_stride: stride,
                ..ScenarioConfig::defaults(kind)
            })
    }

    proptest! {
        #[test]
        fn emit_then_parse_round_trips(cfg in arb_config()) {
            let parsed = parse_config(&cfg.to_text()).unwrap();
            prop_assert_eq!(parsed, cfg);
        }
    }
}
