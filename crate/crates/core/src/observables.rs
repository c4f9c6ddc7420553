//! Physical expectation values extracted from a statevector: per-mode and
//! total occupation, emission intensity with its coherent/non-coherent
//! split, per-atom excitation, and total energy.
//!
//! Intensity follows `I = Γ0 <S+ S->` with `S± = Σ_α σ±_α`; the
//! non-coherent part is `Γ0 Σ_α <σ+_α σ-_α>` and the coherence is their
//! difference, so the decomposition identity holds by construction and is
//! still re-validated at CSV-write time.

use num_complex::Complex64;

use crate::error::Result;
use crate::hamiltonian::{QubitLayout, SystemSpec};
use crate::pauli::{Pauli, PauliSum};
use crate::state::StateVector;

/// <ψ|O|ψ> evaluated term by term on the statevector, without materializing
/// any matrix. Hermitian operators give a vanishing imaginary part.
pub fn expectation(state: &StateVector, op: &PauliSum) -> Complex64 {
    let n = state.qubit_count();
    assert_eq!(op.width(), n, "operator width must match state width");
    let amps = state.amplitudes();
    let mut acc = Complex64::new(0.0, 0.0);
    for term in op.terms() {
        let mut flip = 0usize;
        let mut phase_mask = 0usize;
        let mut ny = 0u32;
        for (q, &p) in term.letters.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    phase_mask |= bit;
                    ny += 1;
                }
                Pauli::Z => phase_mask |= bit,
            }
        }
        let pref = match ny % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let mut term_acc = Complex64::new(0.0, 0.0);
        for b in 0..amps.len() {
            let src = b ^ flip;
            let sign = if ((src & phase_mask).count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
            term_acc += amps[b].conj() * amps[src] * sign;
        }
        acc += term.coefficient * pref * term_acc;
    }
    acc
}

/// Occupation read directly off mode `k`'s register bits:
/// `<n_k> = Σ_b |ψ_b|² · value(register bits of b)`, which equals the
/// expectation of the encoded number operator at c = 0.
pub fn mode_occupation(state: &StateVector, layout: &QubitLayout, mode: usize) -> f64 {
    let n = state.qubit_count();
    let (start, width) = layout.mode_register(mode);
    let shift = n - start - width;
    let mask = (1usize << width) - 1;
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(b, a)| a.norm_sqr() * ((b >> shift) & mask) as f64)
        .sum()
}

/// Sum of [`mode_occupation`] over all modes.
pub fn total_occupation(state: &StateVector, layout: &QubitLayout) -> f64 {
    (0..layout.n_modes()).map(|k| mode_occupation(state, layout, k)).sum()
}

/// Excited population of atom `alpha`: `<σ+_α σ-_α>`.
pub fn atom_population(state: &StateVector, layout: &QubitLayout, alpha: usize) -> f64 {
    let n = state.qubit_count();
    let bit = 1usize << (n - 1 - layout.atom_qubit(alpha));
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(b, _)| b & bit != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// `S+S-` over the atom qubits of the layout, identity on the field, as a
/// simplified Pauli sum. Assembled once per system and reused every sample.
pub fn splus_sminus(layout: &QubitLayout) -> Result<PauliSum> {
    let width = layout.total_qubits();
    let mut s_plus = PauliSum::zero(width);
    for a in 0..layout.n_atoms() {
        let q = layout.atom_qubit(a);
        let x = PauliSum::single(width, q, Pauli::X, Complex64::new(0.5, 0.0))?;
        let y = PauliSum::single(width, q, Pauli::Y, Complex64::new(0.0, -0.5))?;
        s_plus = s_plus.add(&x.add(&y)?)?;
    }
    let s_minus = s_plus.adjoint();
    s_plus.multiply(&s_minus)
}

/// Emission intensity `Γ0 <S+S->`.
pub fn intensity(state: &StateVector, spec: &SystemSpec) -> Result<f64> {
    let op = splus_sminus(&spec.layout)?;
    Ok(spec.gamma0() * expectation(state, &op).re)
}

/// Non-coherent part of the intensity, `Γ0 Σ_α <σ+_α σ-_α>`.
pub fn intensity_noncoherent(state: &StateVector, spec: &SystemSpec) -> f64 {
    let pops: f64 =
        (0..spec.n_atoms()).map(|a| atom_population(state, &spec.layout, a)).sum();
    spec.gamma0() * pops
}

/// Cross-emitter coherence `Γ0 Σ_{α≠β} <σ+_α σ-_β>`; may transiently be
/// negative (subradiance).
pub fn coherence(state: &StateVector, spec: &SystemSpec) -> Result<f64> {
    Ok(intensity(state, spec)? - intensity_noncoherent(state, spec))
}

/// Total energy `<H>`.
pub fn energy(state: &StateVector, h_total: &PauliSum) -> f64 {
    expectation(state, h_total).re
}

/// One sampled row of every tracked observable. Time is stored in units of
/// the free emission lifetime 1/Γ0.
#[derive(Clone, Debug)]
pub struct ObservableRecord {
    pub time: f64,
    pub intensity: f64,
    pub intensity_nc: f64,
    pub coherence: f64,
    pub energy: f64,
    pub energy_drift_rel: f64,
    pub n_total: f64,
    pub n_modes: Vec<f64>,
    pub atom_populations: Vec<f64>,
}

/// Precomputed operators for repeated sampling of one system.
pub struct ObservableEngine {
    layout: QubitLayout,
    gamma0: f64,
    n_atoms: usize,
    splus_sminus: PauliSum,
    h_total: PauliSum,
    reference_energy: Option<f64>,
}

impl ObservableEngine {
    pub fn new(spec: &SystemSpec, h_total: &PauliSum) -> Result<Self> {
        Ok(ObservableEngine {
            layout: spec.layout.clone(),
            gamma0: spec.gamma0(),
            n_atoms: spec.n_atoms(),
            splus_sminus: splus_sminus(&spec.layout)?,
            h_total: h_total.clone(),
            reference_energy: None,
        })
    }

    /// Sample every observable at `t_abs` (absolute time). The first call
    /// pins the reference energy used for the drift column.
    pub fn record(&mut self, t_abs: f64, state: &StateVector) -> ObservableRecord {
        let g = self.gamma0;
        let intensity = g * expectation(state, &self.splus_sminus).re;
        let pops: Vec<f64> =
            (0..self.n_atoms).map(|a| atom_population(state, &self.layout, a)).collect();
        let intensity_nc = g * pops.iter().sum::<f64>();
        let n_modes: Vec<f64> =
            (0..self.layout.n_modes()).map(|k| mode_occupation(state, &self.layout, k)).collect();
        let energy = expectation(state, &self.h_total).re;
        let e0 = *self.reference_energy.get_or_insert(energy);
        ObservableRecord {
            time: t_abs * g,
            intensity,
            intensity_nc,
            coherence: intensity - intensity_nc,
            energy,
            energy_drift_rel: (energy - e0).abs() / (self.n_atoms as f64 * g),
            n_total: n_modes.iter().sum(),
            n_modes,
            atom_populations: pops,
        }
    }
}
