//! Master-equation reference integrator for the homogeneous long-wavelength
//! (Dicke) limit, over atom degrees of freedom only.
//!
//! The collective generator is
//!
//! ```text
//! dρ/dt = -i[H_A, ρ] + Γ0 (S- ρ S+ - 1/2 {S+S-, ρ}),   H_A = 1/2 Σ ω_α σz_α
//! ```
//!
//! with `S± = Σ_α σ±_α`. Intensity is invariant under the free rotation, so
//! the integrator drops `H_A` by default (rotating frame); both paths agree
//! on every phase-invariant observable and a test pins that down. An
//! independent-decay variant with jump operators `σ-_α` per atom provides
//! the no-cooperation baseline.
//!
//! Integration is fixed-step RK4: deterministic, with a step-halving
//! self-check in the tests instead of adaptive control.

use ndarray::{Array1, Array2};
use ndarray_linalg::Eigh;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::timeseries::TimeSeries;

/// Density matrices above 7 atoms (128 x 128) are outside the oracle's remit.
pub const MAX_ORACLE_ATOMS: usize = 7;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn cone() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Atom-only density matrix, 2^N_A on a side. Qubit 0 is the most
/// significant bit of the basis index; bit set means excited.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub entries: Array2<Complex64>,
    n_atoms: usize,
}

impl DensityMatrix {
    pub fn from_entries(n_atoms: usize, entries: Array2<Complex64>) -> Result<Self> {
        let dim = 1usize << n_atoms;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::InvalidArgument(format!(
                "expected {dim}x{dim} matrix for {n_atoms} atoms"
            )));
        }
        Ok(DensityMatrix { entries, n_atoms })
    }

    /// |e…e><e…e|: every atom excited.
    pub fn fully_excited(n_atoms: usize) -> Result<Self> {
        if n_atoms == 0 || n_atoms > MAX_ORACLE_ATOMS {
            return Err(Error::InvalidArgument(format!(
                "oracle supports 1..={MAX_ORACLE_ATOMS} atoms, got {n_atoms}"
            )));
        }
        let dim = 1usize << n_atoms;
        let mut entries = Array2::from_elem((dim, dim), czero());
        entries[[dim - 1, dim - 1]] = cone();
        Ok(DensityMatrix { entries, n_atoms })
    }

    /// |g…g><g…g|: the dark steady state.
    pub fn ground(n_atoms: usize) -> Result<Self> {
        let dim = 1usize << n_atoms;
        let mut entries = Array2::from_elem((dim, dim), czero());
        entries[[0, 0]] = cone();
        DensityMatrix::from_entries(n_atoms, entries)
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.diag().sum()
    }

    pub fn purity(&self) -> f64 {
        self.entries.dot(&self.entries).diag().sum().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        let adj = self.entries.t().mapv(|v| v.conj());
        (&self.entries - &adj).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let sym = (&self.entries + &self.entries.t().mapv(|v| v.conj())) * Complex64::new(0.5, 0.0);
        let (vals, _) = sym
            .eigh(ndarray_linalg::UPLO::Lower)
            .map_err(|e| Error::Construction(format!("eigenvalues of rho failed: {e}")))?;
        Ok(vals.iter().cloned().fold(f64::INFINITY, f64::min))
    }
}

/// Dense single-atom lowering operator placed on atom `alpha` of `n` atoms.
fn sigma_minus_dense(n: usize, alpha: usize) -> Array2<Complex64> {
    let dim = 1usize << n;
    let mut m = Array2::from_elem((dim, dim), czero());
    let bit = 1usize << (n - 1 - alpha);
    for b in 0..dim {
        if b & bit != 0 {
            m[[b & !bit, b]] = cone();
        }
    }
    m
}

/// Operator bundle for one ensemble size.
struct AtomOps {
    s_minus: Array2<Complex64>,
    s_plus: Array2<Complex64>,
    splus_sminus: Array2<Complex64>,
    sigma_minus: Vec<Array2<Complex64>>,
    /// Σ_α σ+σ- (diagonal excitation counter)
    excitation: Array2<Complex64>,
    /// H_A / ω: 1/2 Σ σz
    half_sigma_z: Array2<Complex64>,
}

impl AtomOps {
    fn new(n_atoms: usize) -> Self {
        let dim = 1usize << n_atoms;
        let mut s_minus = Array2::from_elem((dim, dim), czero());
        let mut sigma_minus = Vec::with_capacity(n_atoms);
        for alpha in 0..n_atoms {
            let m = sigma_minus_dense(n_atoms, alpha);
            s_minus += &m;
            sigma_minus.push(m);
        }
        let s_plus = s_minus.t().mapv(|v| v.conj());
        let splus_sminus = s_plus.dot(&s_minus);
        let mut excitation = Array2::from_elem((dim, dim), czero());
        let mut half_sigma_z = Array2::from_elem((dim, dim), czero());
        for b in 0..dim {
            let k = (b as u64).count_ones() as f64;
            excitation[[b, b]] = Complex64::new(k, 0.0);
            half_sigma_z[[b, b]] = Complex64::new(k - n_atoms as f64 / 2.0, 0.0);
        }
        AtomOps { s_minus, s_plus, splus_sminus, sigma_minus, excitation, half_sigma_z }
    }
}

/// Which dissipator drives the ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DecayModel {
    /// One collective jump operator S− at rate Γ0.
    #[default]
    Collective,
    /// Independent jumps σ−_α at rate Γ0 each (no cooperation).
    Independent,
}

/// Generator of the collective Dicke master equation applied to `rho`,
/// including the free rotation `H_A = 1/2 Σ ω_α σz`.
pub fn dicke_rhs(rho: &DensityMatrix, gamma0: f64, omega: f64) -> DensityMatrix {
    let ops = AtomOps::new(rho.n_atoms());
    let d = rhs_with(&ops, &rho.entries, gamma0, omega, DecayModel::Collective);
    DensityMatrix { entries: d, n_atoms: rho.n_atoms() }
}

fn rhs_with(
    ops: &AtomOps,
    rho: &Array2<Complex64>,
    gamma0: f64,
    omega: f64,
    model: DecayModel,
) -> Array2<Complex64> {
    let mut out = Array2::from_elem(rho.dim(), czero());
    if omega != 0.0 {
        let h = ops.half_sigma_z.mapv(|v| v * omega);
        let comm = h.dot(rho) - rho.dot(&h);
        out += &comm.mapv(|v| v * Complex64::new(0.0, -1.0));
    }
    let g = Complex64::new(gamma0, 0.0);
    let half = Complex64::new(0.5, 0.0);
    match model {
        DecayModel::Collective => {
            let jump = ops.s_minus.dot(rho).dot(&ops.s_plus);
            let anti = ops.splus_sminus.dot(rho) + rho.dot(&ops.splus_sminus);
            out += &(jump - anti.mapv(|v| v * half)).mapv(|v| v * g);
        }
        DecayModel::Independent => {
            for sm in &ops.sigma_minus {
                let sp = sm.t().mapv(|v| v.conj());
                let spsm = sp.dot(sm);
                let jump = sm.dot(rho).dot(&sp);
                let anti = spsm.dot(rho) + rho.dot(&spsm);
                out += &(jump - anti.mapv(|v| v * half)).mapv(|v| v * g);
            }
        }
    }
    out
}

/// Fixed-step RK4 master-equation integrator.
pub struct LindbladIntegrator {
    ops: AtomOps,
    n_atoms: usize,
    gamma0: f64,
    /// Free rotation frequency; zero selects the rotating frame.
    pub omega: f64,
    pub model: DecayModel,
}

/// One sampled point of a master-equation trajectory.
#[derive(Clone, Debug)]
pub struct LindbladSample {
    /// Time in units of 1/Γ0.
    pub time: f64,
    pub intensity: f64,
    pub coherence: f64,
    /// Excitation left in the atoms, Σ_α <σ+σ->.
    pub excitation: f64,
    pub atom_populations: Vec<f64>,
}

impl LindbladIntegrator {
    pub fn new(n_atoms: usize, gamma0: f64) -> Result<Self> {
        if n_atoms == 0 || n_atoms > MAX_ORACLE_ATOMS {
            return Err(Error::InvalidArgument(format!(
                "oracle supports 1..={MAX_ORACLE_ATOMS} atoms, got {n_atoms}"
            )));
        }
        if gamma0 <= 0.0 {
            return Err(Error::InvalidArgument("gamma0 must be positive".into()));
        }
        Ok(LindbladIntegrator {
            ops: AtomOps::new(n_atoms),
            n_atoms,
            gamma0,
            omega: 0.0,
            model: DecayModel::Collective,
        })
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn with_model(mut self, model: DecayModel) -> Self {
        self.model = model;
        self
    }

    fn rhs(&self, rho: &Array2<Complex64>) -> Array2<Complex64> {
        rhs_with(&self.ops, rho, self.gamma0, self.omega, self.model)
    }

    fn sample(&self, t_abs: f64, rho: &Array2<Complex64>) -> LindbladSample {
        let g = self.gamma0;
        let tr = |op: &Array2<Complex64>| -> f64 { op.dot(rho).diag().sum().re };
        let intensity = g * tr(&self.ops.splus_sminus);
        let excitation = tr(&self.ops.excitation);
        let atom_populations = self
            .ops
            .sigma_minus
            .iter()
            .map(|sm| {
                let sp = sm.t().mapv(|v| v.conj());
                sp.dot(sm).dot(rho).diag().sum().re
            })
            .collect();
        LindbladSample {
            time: t_abs * g,
            intensity,
            coherence: intensity - g * excitation,
            excitation,
            atom_populations,
        }
    }

    /// Integrate from `rho0` to absolute time `total_time` with RK4 step
    /// `dt`, sampling every `sample_stride` steps (plus both endpoints).
    /// Fails if the trace drifts by more than 1e-6.
    pub fn integrate(
        &self,
        rho0: &DensityMatrix,
        total_time: f64,
        dt: f64,
        sample_stride: usize,
    ) -> Result<(Vec<LindbladSample>, DensityMatrix)> {
        if rho0.n_atoms() != self.n_atoms {
            return Err(Error::InvalidArgument("atom count mismatch".into()));
        }
        if !(dt > 0.0) || !(total_time > 0.0) {
            return Err(Error::InvalidArgument("time step and horizon must be positive".into()));
        }
        if sample_stride == 0 {
            return Err(Error::InvalidArgument("sample stride must be >= 1".into()));
        }
        let steps = (total_time / dt).round().max(1.0) as usize;
        let dt = total_time / steps as f64;
        let mut rho = rho0.entries.clone();
        let mut out = vec![self.sample(0.0, &rho)];
        let half = Complex64::new(dt / 2.0, 0.0);
        let sixth = Complex64::new(dt / 6.0, 0.0);
        let two = Complex64::new(2.0, 0.0);
        for step in 1..=steps {
            let k1 = self.rhs(&rho);
            let k2 = self.rhs(&(&rho + &k1.mapv(|v| v * half)));
            let k3 = self.rhs(&(&rho + &k2.mapv(|v| v * half)));
            let k4 = self.rhs(&(&rho + &k3.mapv(|v| v * Complex64::new(dt, 0.0))));
            rho = &rho + &((k1 + k2.mapv(|v| v * two) + k3.mapv(|v| v * two) + k4)
                .mapv(|v| v * sixth));
            let tr = rho.diag().sum();
            if (tr.re - 1.0).abs() > 1e-6 || tr.im.abs() > 1e-6 {
                return Err(Error::Integration(format!(
                    "trace drifted to {tr} at step {step} of {steps}"
                )));
            }
            if step % sample_stride == 0 || step == steps {
                out.push(self.sample(step as f64 * dt, &rho));
            }
        }
        Ok((out, DensityMatrix { entries: rho, n_atoms: self.n_atoms }))
    }
}

/// Closed-form independent-emission intensity `N_A Γ0 e^{-Γ0 t}`.
pub fn independent_intensity(n_atoms: usize, gamma0: f64, t: f64) -> f64 {
    n_atoms as f64 * gamma0 * (-gamma0 * t).exp()
}

/// Default RK4 step: `0.01 / Γ0`.
pub fn default_step(gamma0: f64) -> f64 {
    0.01 / gamma0
}

/// Intensity and coherence of the fully inverted collective ensemble,
/// sampled on the RK4 grid. Times in the returned series are in lifetimes.
pub fn dicke_intensity_series(
    n_atoms: usize,
    gamma0: f64,
    total_time: f64,
    dt: f64,
) -> Result<(TimeSeries, TimeSeries)> {
    let integrator = LindbladIntegrator::new(n_atoms, gamma0)?;
    let rho0 = DensityMatrix::fully_excited(n_atoms)?;
    let (samples, _) = integrator.integrate(&rho0, total_time, dt, 1)?;
    let times: Vec<f64> = samples.iter().map(|s| s.time).collect();
    let intensity = TimeSeries::new(
        "lindblad_intensity",
        times.clone(),
        samples.iter().map(|s| s.intensity).collect(),
    )?;
    let coherence = TimeSeries::new(
        "lindblad_coherence",
        times,
        samples.iter().map(|s| s.coherence).collect(),
    )?;
    Ok((intensity, coherence))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dark_state_is_stationary() {
        let rho = DensityMatrix::ground(3).unwrap();
        let d = dicke_rhs(&rho, 1.7, 100.0);
        let max: f64 = d.entries.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(max < 1e-15);
    }

    #[test]
    fn single_atom_decay_rate() {
        let rho = DensityMatrix::fully_excited(1).unwrap();
        let gamma0 = 2.0;
        let d = dicke_rhs(&rho, gamma0, 0.0);
        // d<σ+σ->/dt = tr(σ+σ- dρ) = -Γ0
        let dpop = d.entries[[1, 1]].re;
        assert!((dpop + gamma0).abs() < 1e-14);
        // trace of the derivative vanishes
        assert!(d.entries.diag().sum().norm() < 1e-14);
    }

    #[test]
    fn two_atom_initial_burst_slope() {
        // Explicit 4x4 algebra for ρ = |ee><ee|:
        //   S-|ee> = |eg> + |ge> = |s~>, so S-ρS+ = |s~><s~|,
        //   S+S-|ee> = 2|ee>  =>  {S+S-, ρ} = 4ρ,
        //   tr(S+S- |s~><s~|) = ||S-|s~>||² = ||2|gg>||² = 4,
        //   tr(S+S- ρ) = 2,
        // hence d<S+S->/dt = Γ0 (4 - 1/2·4·2) = 0: the two-atom burst starts
        // flat and the intensity maximum sits at t = 0.
        let n = 2;
        let gamma0 = 1.3;
        let rho = DensityMatrix::fully_excited(n).unwrap();
        let d = dicke_rhs(&rho, gamma0, 0.0);

        let mut s_minus = Array2::from_elem((4, 4), czero());
        // basis |00>,|01>,|10>,|11>, bit set = excited
        s_minus[[0b00, 0b01]] = cone();
        s_minus[[0b00, 0b10]] = cone();
        s_minus[[0b01, 0b11]] = cone();
        s_minus[[0b10, 0b11]] = cone();
        let s_plus = s_minus.t().mapv(|v| v.conj());
        let spsm = s_plus.dot(&s_minus);
        let slope = spsm.dot(&d.entries).diag().sum().re;
        assert!(slope.abs() < 1e-13, "two-atom d<S+S->/dt at t=0 must vanish, got {slope}");

        // and the second derivative is negative: one RK4 step must not
        // raise the intensity above its t = 0 value
        let integrator = LindbladIntegrator::new(n, gamma0).unwrap();
        let (samples, _) = integrator.integrate(&rho, 0.1 / gamma0, 1e-3, 10).unwrap();
        assert!(samples.iter().all(|s| s.intensity <= samples[0].intensity + 1e-12));
    }

    #[test]
    fn single_atom_exponential_intensity() {
        let gamma0 = 2.0;
        let integrator = LindbladIntegrator::new(1, gamma0).unwrap();
        let rho0 = DensityMatrix::fully_excited(1).unwrap();
        let (samples, rho_final) = integrator
            .integrate(&rho0, 3.0 / gamma0, default_step(gamma0), 5)
            .unwrap();
        for s in &samples {
            let expect = gamma0 * (-s.time).exp();
            assert!(
                (s.intensity - expect).abs() < 1e-6 * expect.max(1e-3),
                "t={} got {} want {}",
                s.time,
                s.intensity,
                expect
            );
        }
        assert!((rho_final.trace().re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn trajectory_invariants_hold() {
        let gamma0 = 1.0;
        let integrator = LindbladIntegrator::new(4, gamma0).unwrap();
        let rho0 = DensityMatrix::fully_excited(4).unwrap();
        let (samples, rho_final) = integrator
            .integrate(&rho0, 3.0, default_step(gamma0), 25)
            .unwrap();
        assert!((rho_final.trace().re - 1.0).abs() < 1e-8);
        assert!(rho_final.hermiticity_error() < 1e-10);
        assert!(rho_final.min_eigenvalue().unwrap() > -1e-7);
        assert!(rho_final.purity() <= 1.0 + 1e-8);
        // <Sz> = excitation - N/2 decreases monotonically from N/2
        let mut last = f64::INFINITY;
        for s in &samples {
            assert!(s.excitation <= last + 1e-9);
            last = s.excitation;
        }
    }

    #[test]
    fn superradiant_burst_timing() {
        // Peak intensity occurs at t > 0 for N >= 3. For N = 3 the cascade
        // solves in closed form: I(t)/Γ0 = (36Γ0t - 21)e^{-3Γ0t} + 24e^{-4Γ0t},
        // whose maximum sits at Γ0 t = 0.1561; larger (but still small) N
        // peaks later, approaching the asymptotic delay ln(N)/N from below.
        let gamma0 = 1.0;
        let mut peak_times = Vec::new();
        for n in 3..=6 {
            let (intensity, _) =
                dicke_intensity_series(n, gamma0, 3.0, default_step(gamma0)).unwrap();
            let (t_peak, v_peak) = intensity.max_point();
            assert!(t_peak > 0.0, "N={n} peak at t=0");
            assert!(v_peak > n as f64 * gamma0, "N={n} burst below initial rate");
            peak_times.push(t_peak);
        }
        assert!((peak_times[0] - 0.1561).abs() < 0.011, "N=3 peak at {}", peak_times[0]);
        for w in peak_times.windows(2) {
            assert!(w[1] > w[0], "small-N peak delay grows with N: {peak_times:?}");
        }
    }

    #[test]
    fn step_halving_consistency() {
        let gamma0 = 1.0;
        let n = 2;
        let run = |dt: f64| {
            let integrator = LindbladIntegrator::new(n, gamma0).unwrap();
            let rho0 = DensityMatrix::fully_excited(n).unwrap();
            let (samples, _) = integrator.integrate(&rho0, 2.0, dt, usize::MAX).unwrap();
            samples.last().unwrap().intensity
        };
        let coarse = run(0.01);
        let fine = run(0.005);
        assert!((coarse - fine).abs() < 1e-6, "RK4 self-check: {coarse} vs {fine}");
    }

    #[test]
    fn independent_model_matches_closed_form() {
        let gamma0 = 1.3;
        let n = 3;
        let integrator = LindbladIntegrator::new(n, gamma0)
            .unwrap()
            .with_model(DecayModel::Independent);
        let rho0 = DensityMatrix::fully_excited(n).unwrap();
        let (samples, _) = integrator
            .integrate(&rho0, 3.0 / gamma0, default_step(gamma0) / 2.0, 10)
            .unwrap();
        for s in &samples {
            let expect = independent_intensity(n, gamma0, s.time / gamma0);
            assert!(
                (s.intensity - expect).abs() < 1e-6 * expect.max(1e-3),
                "t={}: {} vs {}",
                s.time,
                s.intensity,
                expect
            );
            assert!(s.coherence.abs() < 1e-9);
        }
    }

    #[test]
    fn rotating_frame_equivalence() {
        let gamma0 = 1.0;
        let n = 2;
        let rho0 = DensityMatrix::fully_excited(n).unwrap();
        let plain = LindbladIntegrator::new(n, gamma0).unwrap();
        let rotated = LindbladIntegrator::new(n, gamma0).unwrap().with_omega(gamma0);
        let (a, _) = plain.integrate(&rho0, 2.0, 1e-3, 100).unwrap();
        let (b, _) = rotated.integrate(&rho0, 2.0, 1e-3, 100).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.intensity - y.intensity).abs() < 1e-9);
            assert!((x.coherence - y.coherence).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_form_independent_checks() {
        assert!((independent_intensity(4, 2.0, 0.0) - 8.0).abs() < 1e-14);
        let e = std::f64::consts::E;
        assert!((independent_intensity(4, 2.0, 0.5) - 8.0 / e).abs() < 1e-12);
    }

    #[test]
    fn peak_scaling_is_quadratic() {
        // fitted exponent over N in 2..=6 lies in [1.8, 2.2]
        let gamma0 = 1.0;
        let points: Vec<(f64, f64)> = (2..=6)
            .map(|n| {
                let (intensity, _) =
                    dicke_intensity_series(n, gamma0, 3.0, default_step(gamma0)).unwrap();
                (n as f64, intensity.max_point().1)
            })
            .collect();
        let fit = crate::analysis::fit_peak_scaling(&points).unwrap();
        assert!(
            (1.8..=2.2).contains(&fit.exponent),
            "exponent {} outside [1.8, 2.2]",
            fit.exponent
        );
    }
}
