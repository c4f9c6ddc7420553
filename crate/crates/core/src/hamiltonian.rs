//! Assembly of the qubitized system Hamiltonian from a physical description
//! of emitters and radiation modes.
//!
//! The free part is diagonal,
//!
//! ```text
//! H0 = -1/2 Σ_α ω_α Z_α + Σ_k ω_k n_k
//! ```
//!
//! with `n_k` the encoded number operator of mode `k` (which reduces to
//! `(I - Z)/2` for a single-qubit register). Each (atom, mode) pair
//! contributes the interaction
//!
//! ```text
//! -i g_k X_α (e^{-i k r_α} a†_k - e^{i k r_α} a_k)
//! ```
//!
//! which for a single-qubit mode collapses to
//! `-g_k [cos(k r_α) X_α Y_k + sin(k r_α) X_α X_k]`. Multi-qubit registers
//! use the encoded ladder operators directly so the pair term is consistent
//! with the binary encoding by construction; Hermiticity is checked at
//! assembly time.

use num_complex::Complex64;

use crate::boson::{annihilation_op, creation_op, number_op, MAX_REGISTER_QUBITS};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum};

/// Default ceiling on the total number of qubits in a system.
pub const DEFAULT_QUBIT_CAP: usize = 24;

/// A two-level emitter: transition frequency, position on the 1-D axis
/// (natural units, c = 1), and free emission rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomSpec {
    pub frequency: f64,
    pub position: f64,
    pub gamma0: f64,
}

/// One radiation mode: frequency, wavevector (equal to the frequency in
/// natural units), coupling strength, and qubit allocation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeSpec {
    pub frequency: f64,
    pub wavevector: f64,
    pub coupling: f64,
    pub qubit_allocation: usize,
}

impl ModeSpec {
    /// A mode at `frequency` with `k = ω` and the given coupling.
    pub fn resonant(frequency: f64, coupling: f64, qubit_allocation: usize) -> Self {
        ModeSpec { frequency, wavevector: frequency, coupling, qubit_allocation }
    }
}

/// Placement of atoms and mode registers on the qubit line: atoms occupy the
/// lowest indices, then each mode's register follows contiguously in
/// frequency order.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitLayout {
    n_atoms: usize,
    mode_starts: Vec<usize>,
    mode_widths: Vec<usize>,
    total: usize,
}

impl QubitLayout {
    pub fn new(n_atoms: usize, mode_widths: &[usize]) -> Self {
        let mut mode_starts = Vec::with_capacity(mode_widths.len());
        let mut next = n_atoms;
        for &w in mode_widths {
            mode_starts.push(next);
            next += w;
        }
        QubitLayout { n_atoms, mode_starts, mode_widths: mode_widths.to_vec(), total: next }
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn n_modes(&self) -> usize {
        self.mode_widths.len()
    }

    pub fn atom_qubit(&self, atom: usize) -> usize {
        debug_assert!(atom < self.n_atoms);
        atom
    }

    /// `(start, width)` of the register for mode `k`.
    pub fn mode_register(&self, mode: usize) -> (usize, usize) {
        (self.mode_starts[mode], self.mode_widths[mode])
    }

    pub fn total_qubits(&self) -> usize {
        self.total
    }
}

/// The complete physical system: atoms, modes, and their qubit placement.
#[derive(Clone, Debug)]
pub struct SystemSpec {
    pub atoms: Vec<AtomSpec>,
    pub modes: Vec<ModeSpec>,
    pub layout: QubitLayout,
}

impl SystemSpec {
    /// Validate and lay out a system, enforcing `qubit_cap` on the total.
    pub fn new(atoms: Vec<AtomSpec>, modes: Vec<ModeSpec>, qubit_cap: usize) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidArgument("system needs at least one atom".into()));
        }
        if modes.is_empty() {
            return Err(Error::InvalidArgument("system needs at least one mode".into()));
        }
        let gamma0 = atoms[0].gamma0;
        for (i, a) in atoms.iter().enumerate() {
            if a.frequency <= 0.0 || a.gamma0 <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "atom {i}: frequency and gamma0 must be positive"
                )));
            }
            if (a.gamma0 - gamma0).abs() > 1e-12 * gamma0.abs() {
                return Err(Error::InvalidArgument(
                    "all atoms in an ensemble share one gamma0".into(),
                ));
            }
        }
        for (k, m) in modes.iter().enumerate() {
            if m.frequency <= 0.0 {
                return Err(Error::InvalidArgument(format!("mode {k}: frequency must be positive")));
            }
            if (m.wavevector - m.frequency).abs() > 1e-12 * m.frequency {
                return Err(Error::InvalidArgument(format!(
                    "mode {k}: wavevector must equal frequency in natural units"
                )));
            }
            if m.qubit_allocation == 0 || m.qubit_allocation > MAX_REGISTER_QUBITS {
                return Err(Error::InvalidArgument(format!(
                    "mode {k}: qubit allocation must be in 1..={MAX_REGISTER_QUBITS}"
                )));
            }
            if k + 1 < modes.len() && modes[k + 1].frequency <= m.frequency {
                return Err(Error::InvalidArgument(
                    "mode frequencies must be strictly increasing".into(),
                ));
            }
        }
        let widths: Vec<usize> = modes.iter().map(|m| m.qubit_allocation).collect();
        let layout = QubitLayout::new(atoms.len(), &widths);
        if layout.total_qubits() > qubit_cap {
            return Err(Error::Capacity(format!(
                "system needs {} qubits, cap is {qubit_cap}",
                layout.total_qubits()
            )));
        }
        Ok(SystemSpec { atoms, modes, layout })
    }

    /// The shared free emission rate of the ensemble.
    pub fn gamma0(&self) -> f64 {
        self.atoms[0].gamma0
    }

    pub fn n_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }
}

/// Free + interaction decomposition of the system Hamiltonian.
#[derive(Clone, Debug)]
pub struct HamiltonianParts {
    /// Diagonal free part (I/Z letters only).
    pub h0: PauliSum,
    /// One Hermitian sum per (atom, mode) pair, atoms outer, modes inner.
    pub hint_terms: Vec<PauliSum>,
    /// Simplified h0 + Σ hint.
    pub total: PauliSum,
}

/// Which reading of the Fermi's-Golden-Rule relation fixes the coupling.
///
/// `G2OverDelta` takes the level spacing as an inverse density of states,
/// `Γ0 = 2π g²/δ`; `G2TimesDelta` takes the relation at face value as
/// `Γ0 = 2π g² δ`. The two coincide at δ = 1. `G2OverDelta` is the default:
/// it is the convention under which a simulated single atom actually decays
/// at rate Γ0 (see the calibration test in the acceptance suite).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CouplingConvention {
    #[default]
    G2OverDelta,
    G2TimesDelta,
}

impl CouplingConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            CouplingConvention::G2OverDelta => "g2_over_delta",
            CouplingConvention::G2TimesDelta => "g2_times_delta",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "g2_over_delta" => Ok(CouplingConvention::G2OverDelta),
            "g2_times_delta" => Ok(CouplingConvention::G2TimesDelta),
            _ => Err(Error::InvalidArgument(format!(
                "unknown coupling convention {s:?} (expected g2_over_delta or g2_times_delta)"
            ))),
        }
    }
}

/// Uniform atom-mode coupling from the target free emission rate and the
/// bath level spacing.
pub fn coupling_from_gamma(
    gamma0: f64,
    mode_spacing: f64,
    convention: CouplingConvention,
) -> Result<f64> {
    if gamma0 <= 0.0 || mode_spacing <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "gamma0 and mode spacing must be positive, got {gamma0} and {mode_spacing}"
        )));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(match convention {
        CouplingConvention::G2OverDelta => (gamma0 * mode_spacing / two_pi).sqrt(),
        CouplingConvention::G2TimesDelta => (gamma0 / (two_pi * mode_spacing)).sqrt(),
    })
}

/// Evenly spaced mode frequencies spanning `center ± width/2`.
pub fn standard_mode_window(center: f64, width: f64, count: usize) -> Result<Vec<f64>> {
    if count < 1 {
        return Err(Error::InvalidArgument("mode window needs at least one mode".into()));
    }
    if count == 1 {
        return Ok(vec![center]);
    }
    if width <= 0.0 {
        return Err(Error::InvalidArgument("mode window width must be positive".into()));
    }
    let lo = center - width / 2.0;
    let step = width / (count - 1) as f64;
    Ok((0..count).map(|i| lo + step * i as f64).collect())
}

/// Diagonal free Hamiltonian `-1/2 Σ ω_α Z_α + Σ ω_k n_k`.
pub fn build_h0(spec: &SystemSpec) -> Result<PauliSum> {
    let width = spec.layout.total_qubits();
    let mut h = PauliSum::zero(width);
    for (alpha, atom) in spec.atoms.iter().enumerate() {
        let z = PauliSum::single(
            width,
            spec.layout.atom_qubit(alpha),
            Pauli::Z,
            Complex64::new(-0.5 * atom.frequency, 0.0),
        )?;
        h = h.add(&z)?;
    }
    for (k, mode) in spec.modes.iter().enumerate() {
        let (start, q) = spec.layout.mode_register(k);
        let n = number_op(q, 0.0)?.embed(width, start)?;
        h = h.add(&n.scaled(Complex64::new(mode.frequency, 0.0)))?;
    }
    let h = h.simplify();
    debug_assert!(h.is_diagonal());
    Ok(h)
}

/// One Hermitian interaction sum per (atom, mode) pair, atoms outer.
pub fn build_hint(spec: &SystemSpec) -> Result<Vec<PauliSum>> {
    let width = spec.layout.total_qubits();
    let mut terms = Vec::with_capacity(spec.atoms.len() * spec.modes.len());
    for (alpha, atom) in spec.atoms.iter().enumerate() {
        let x_atom = PauliSum::single(
            width,
            spec.layout.atom_qubit(alpha),
            Pauli::X,
            Complex64::new(1.0, 0.0),
        )?;
        for (k, mode) in spec.modes.iter().enumerate() {
            let (start, q) = spec.layout.mode_register(k);
            let phase = mode.wavevector * atom.position;
            let fwd = Complex64::from_polar(1.0, -phase);
            let adag = creation_op(q, 0.0)?.embed(width, start)?;
            let a = annihilation_op(q, 0.0)?.embed(width, start)?;
            // -i g (e^{-ikr} a† - e^{ikr} a)
            let field = adag
                .scaled(fwd)
                .add(&a.scaled(-fwd.conj()))?
                .scaled(Complex64::new(0.0, -mode.coupling));
            let pair = x_atom.multiply(&field)?.simplify();
            if !pair.is_hermitian(1e-10) {
                return Err(Error::Construction(format!(
                    "interaction term for atom {alpha}, mode {k} is not Hermitian"
                )));
            }
            terms.push(pair);
        }
    }
    Ok(terms)
}

/// Assemble free, interaction, and total Hamiltonians for a system.
pub fn build_total(spec: &SystemSpec) -> Result<HamiltonianParts> {
    let h0 = build_h0(spec)?;
    let hint_terms = build_hint(spec)?;
    let mut total = h0.clone();
    for t in &hint_terms {
        total = total.add(t)?;
    }
    let total = total.simplify();
    if !total.is_hermitian(1e-10) {
        return Err(Error::Construction("assembled Hamiltonian is not Hermitian".into()));
    }
    Ok(HamiltonianParts { h0, hint_terms, total })
}
