//! Dense statevector evolution.
//!
//! Every Pauli string `P` squares to the identity, so
//! `exp(-iθP) = cos θ · 1 - i sin θ · P` is applied exactly as a pairwise
//! amplitude update over the index pairs `P` connects — no gate
//! decomposition, no matrix materialization. Diagonal sums are applied as
//! per-amplitude phases. A Trotter step is one diagonal phase pass for the
//! free Hamiltonian followed by the ordered product of string exponentials
//! of the interaction, first order in the step size.
//!
//! Basis convention: qubit 0 is the most significant bit of the index.

use ndarray::{Array1, Array2};
use ndarray_linalg::Eigh;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianParts, QubitLayout};
use crate::pauli::{Pauli, PauliSum, PauliTerm};

/// exact_evolve refuses above this width; the eigendecomposition of a
/// 2^12 x 2^12 Hermitian matrix is the practical ceiling.
pub const EXACT_WIDTH_CAP: usize = 12;

/// 2^n complex amplitudes of an n-qubit register.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state with the given index.
    pub fn basis_state(n: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes for {n} qubits, got {}",
                1usize << n,
                amps.len()
            )));
        }
        Ok(StateVector { n, amps })
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product <self|other>.
    pub fn overlap(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Max-norm distance between amplitude vectors.
    pub fn max_deviation(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `|1>^⊗N_A ⊗ |0>^⊗ΣQ`: all atoms excited, all modes empty.
pub fn init_state(layout: &QubitLayout) -> StateVector {
    let n = layout.total_qubits();
    let mut index = 0usize;
    for a in 0..layout.n_atoms() {
        index |= 1 << (n - 1 - layout.atom_qubit(a));
    }
    StateVector::basis_state(n, index)
}

/// Bit masks realizing one Pauli string on basis indices:
/// `P|b> = pref * (-1)^popcount(b & phase_mask) |b ^ flip_mask>`.
#[derive(Clone, Copy, Debug)]
struct StringKernel {
    flip_mask: u64,
    phase_mask: u64,
    prefactor: Complex64, // i^(number of Y letters)
}

fn kernel_for(letters: &[Pauli], n: usize) -> StringKernel {
    let mut flip = 0u64;
    let mut phase = 0u64;
    let mut ny = 0u32;
    for (q, &p) in letters.iter().enumerate() {
        let bit = 1u64 << (n - 1 - q);
        match p {
            Pauli::I => {}
            Pauli::X => flip |= bit,
            Pauli::Y => {
                flip |= bit;
                phase |= bit;
                ny += 1;
            }
            Pauli::Z => phase |= bit,
        }
    }
    let prefactor = match ny % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    StringKernel { flip_mask: flip, phase_mask: phase, prefactor }
}

fn parity(v: u64) -> f64 {
    if v.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Apply `exp(-i * coefficient * dt * P)` for one Pauli string exactly.
/// The term must be Hermitian (real coefficient).
pub fn apply_pauli_exponential(state: &mut StateVector, term: &PauliTerm, dt: f64) -> Result<()> {
    if term.width() != state.n {
        return Err(Error::InvalidArgument(format!(
            "term width {} does not match state width {}",
            term.width(),
            state.n
        )));
    }
    if term.coefficient.im.abs() > 1e-10 * (1.0 + term.coefficient.re.abs()) {
        return Err(Error::InvalidArgument(format!(
            "non-Hermitian exponential: coefficient {} has an imaginary part",
            term.coefficient
        )));
    }
    let theta = term.coefficient.re * dt;
    let kernel = kernel_for(&term.letters, state.n);
    apply_rotation(state, kernel, theta);
    Ok(())
}

fn apply_rotation(state: &mut StateVector, kernel: StringKernel, theta: f64) {
    let (s, c) = theta.sin_cos();
    let dim = state.amps.len();
    if kernel.flip_mask == 0 {
        // diagonal string: pure phase per amplitude
        for b in 0..dim {
            let sign = parity(b as u64 & kernel.phase_mask);
            let phase = Complex64::new(c, -s * sign);
            state.amps[b] *= phase;
        }
        return;
    }
    let pivot = 1u64 << (63 - kernel.flip_mask.leading_zeros());
    let minus_i_s = Complex64::new(0.0, -s);
    for b in 0..dim {
        if b as u64 & pivot != 0 {
            continue;
        }
        let b2 = b ^ kernel.flip_mask as usize;
        let phi_b = kernel.prefactor * parity(b as u64 & kernel.phase_mask);
        let phi_b2 = kernel.prefactor * parity(b2 as u64 & kernel.phase_mask);
        let (ab, ab2) = (state.amps[b], state.amps[b2]);
        state.amps[b] = c * ab + minus_i_s * phi_b2 * ab2;
        state.amps[b2] = c * ab2 + minus_i_s * phi_b * ab;
    }
}

/// One instruction of a Trotter step.
#[derive(Clone, Debug)]
pub enum ScheduleEntry {
    /// Diagonal sum applied as per-amplitude phases (exact).
    Diagonal(PauliSum),
    /// Single Pauli-string rotation `exp(-i coeff δt P)` (exact).
    Rotation(PauliTerm),
}

/// Precompiled first-order Trotter evolution plan.
///
/// The schedule order is fixed and recorded: the diagonal free part first,
/// then the interaction pair terms in the order they were assembled
/// (atoms outer, modes inner), each pair's strings sorted descending by
/// letter sequence so the Y-type string precedes the X-type one.
#[derive(Clone, Debug)]
pub struct TrotterPlan {
    pub delta_t: f64,
    pub step_count: usize,
    pub schedule: Vec<ScheduleEntry>,
    width: usize,
    diag_phases: Vec<Complex64>,
    rotations: Vec<(StringKernel, f64)>,
}

impl TrotterPlan {
    pub fn new(parts: &HamiltonianParts, total_time: f64, step_count: usize) -> Result<Self> {
        if step_count == 0 {
            return Err(Error::InvalidArgument("a plan needs at least one step".into()));
        }
        if !(total_time > 0.0) {
            return Err(Error::InvalidArgument("total time must be positive".into()));
        }
        let delta_t = total_time / step_count as f64;
        let width = parts.h0.width();

        let mut schedule = vec![ScheduleEntry::Diagonal(parts.h0.clone())];
        for pair in &parts.hint_terms {
            let mut strings: Vec<PauliTerm> = pair.terms().to_vec();
            strings.sort_by(|a, b| b.letters.cmp(&a.letters));
            for s in strings {
                if s.coefficient.im.abs() > 1e-10 * (1.0 + s.coefficient.re.abs()) {
                    return Err(Error::Construction(
                        "interaction string has a complex coefficient".into(),
                    ));
                }
                schedule.push(ScheduleEntry::Rotation(s));
            }
        }

        // precompute per-basis phases for the diagonal pass
        let dim = 1usize << width;
        let mut energies = vec![0.0f64; dim];
        for t in parts.h0.terms() {
            let kernel = kernel_for(&t.letters, width);
            debug_assert_eq!(kernel.flip_mask, 0);
            let coeff = t.coefficient.re;
            for (b, e) in energies.iter_mut().enumerate() {
                *e += coeff * parity(b as u64 & kernel.phase_mask);
            }
        }
        let diag_phases = energies
            .iter()
            .map(|e| Complex64::from_polar(1.0, -e * delta_t))
            .collect();

        let rotations = schedule
            .iter()
            .filter_map(|entry| match entry {
                ScheduleEntry::Rotation(t) => {
                    Some((kernel_for(&t.letters, width), t.coefficient.re * delta_t))
                }
                ScheduleEntry::Diagonal(_) => None,
            })
            .collect();

        Ok(TrotterPlan { delta_t, step_count, schedule, width, diag_phases, rotations })
    }

    pub fn total_time(&self) -> f64 {
        self.delta_t * self.step_count as f64
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

/// Advance the state by one Trotter step: `e^{-iH0 δt}` then the ordered
/// interaction exponentials.
pub fn trotter_step(state: &mut StateVector, plan: &TrotterPlan) -> Result<()> {
    if state.n != plan.width {
        return Err(Error::InvalidArgument(format!(
            "state width {} does not match plan width {}",
            state.n, plan.width
        )));
    }
    for (amp, phase) in state.amps.iter_mut().zip(&plan.diag_phases) {
        *amp *= phase;
    }
    for &(kernel, theta) in &plan.rotations {
        apply_rotation(state, kernel, theta);
    }
    Ok(())
}

/// Run all steps of the plan, invoking `sampler(t, state)` at t = 0, every
/// `sample_stride` steps, and at the final step.
pub fn evolve<F>(
    state: &mut StateVector,
    plan: &TrotterPlan,
    sample_stride: usize,
    mut sampler: F,
) -> Result<()>
where
    F: FnMut(f64, &StateVector) -> Result<()>,
{
    if sample_stride == 0 {
        return Err(Error::InvalidArgument("sample stride must be >= 1".into()));
    }
    sampler(0.0, state)?;
    for step in 1..=plan.step_count {
        trotter_step(state, plan)?;
        if step % sample_stride == 0 || step == plan.step_count {
            sampler(step as f64 * plan.delta_t, state)?;
        }
    }
    Ok(())
}

/// Exact evolution oracle: applies `e^{-iHt}` through the eigendecomposition
/// of the dense Hermitian Hamiltonian. Decomposes once, evolves many times.
pub struct ExactEvolver {
    eigenvalues: Array1<f64>,
    eigenvectors: Array2<Complex64>,
    width: usize,
}

impl ExactEvolver {
    pub fn new(h: &Array2<Complex64>) -> Result<Self> {
        let dim = h.nrows();
        if h.ncols() != dim || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "Hamiltonian must be square with power-of-two dimension, got {}x{}",
                h.nrows(),
                h.ncols()
            )));
        }
        let width = dim.trailing_zeros() as usize;
        if width > EXACT_WIDTH_CAP {
            return Err(Error::Capacity(format!(
                "exact evolution on {width} qubits exceeds cap {EXACT_WIDTH_CAP}"
            )));
        }
        let herm_err = h
            .iter()
            .zip(h.t().mapv(|v| v.conj()).iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if herm_err > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "matrix is not Hermitian (max deviation {herm_err:.2e})"
            )));
        }
        let (eigenvalues, eigenvectors) = h
            .eigh(ndarray_linalg::UPLO::Lower)
            .map_err(|e| Error::Construction(format!("eigendecomposition failed: {e}")))?;
        // LAPACK sees the row-major array as its own transpose, i.e. the
        // conjugate of a Hermitian matrix, so the returned columns are the
        // conjugates of the eigenvectors of `h`.
        let eigenvectors = eigenvectors.mapv(|v| v.conj());

        // verify H (V y) = V (Λ y) on a fixed probe vector
        let mut x = 0.37f64;
        let probe: Array1<Complex64> = (0..dim)
            .map(|_| {
                x = (x * 997.0 + 0.317).fract();
                Complex64::new(x - 0.5, (x * 631.0).fract() - 0.5)
            })
            .collect();
        let vy = eigenvectors.dot(&probe);
        let lhs = h.dot(&vy);
        let scaled: Array1<Complex64> = probe
            .iter()
            .zip(eigenvalues.iter())
            .map(|(p, &e)| p * e)
            .collect();
        let rhs = eigenvectors.dot(&scaled);
        let scale = eigenvalues.iter().fold(1.0f64, |m, e| m.max(e.abs()));
        let residual = lhs
            .iter()
            .zip(rhs.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if residual > 1e-8 * scale * (dim as f64).sqrt() {
            return Err(Error::Construction(format!(
                "eigendecomposition residual {residual:.2e} too large for scale {scale:.2e}"
            )));
        }
        Ok(ExactEvolver { eigenvalues, eigenvectors, width })
    }

    pub fn evolve(&self, state: &StateVector, t: f64) -> Result<StateVector> {
        if state.n != self.width {
            return Err(Error::InvalidArgument(format!(
                "state width {} does not match Hamiltonian width {}",
                state.n, self.width
            )));
        }
        let psi = Array1::from_vec(state.amps.clone());
        // V e^{-iΛt} V† ψ
        let in_eigen = self.eigenvectors.t().mapv(|v| v.conj()).dot(&psi);
        let rotated: Array1<Complex64> = in_eigen
            .iter()
            .zip(self.eigenvalues.iter())
            .map(|(a, &e)| a * Complex64::from_polar(1.0, -e * t))
            .collect();
        let out = self.eigenvectors.dot(&rotated);
        StateVector::from_amplitudes(self.width, out.to_vec())
    }
}

/// One-shot exact evolution of `state` under dense Hermitian `h` for time `t`.
pub fn exact_evolve(h: &Array2<Complex64>, state: &StateVector, t: f64) -> Result<StateVector> {
    ExactEvolver::new(h)?.evolve(state, t)
}
