//! Bosonic ladder and number operators on binary-encoded qubit registers.
//!
//! A mode with `q` qubits stores Fock occupations `0..=2^q - 1` as the bit
//! string of the occupation number, most significant bit first (qubit 0 of
//! the register). The operators are built from recursion relations over the
//! register width; the shift parameter `c` is pure bookkeeping for the
//! recursion and must be zero for physical use.
//!
//! On a single qubit the construction reduces to `a† = (X - iY)/2`,
//! `a = (X + iY)/2`, `n = (I - Z)/2`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum, PauliTerm};

/// Register widths beyond this would expand into an unmanageable number of
/// Pauli strings (and allow occupations far past any physical use here).
pub const MAX_REGISTER_QUBITS: usize = 10;

/// A `q`-qubit binary register for one bosonic mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BosonRegister {
    qubit_count: usize,
}

impl BosonRegister {
    pub fn new(qubit_count: usize) -> Result<Self> {
        if qubit_count == 0 {
            return Err(Error::InvalidArgument("register needs at least one qubit".into()));
        }
        if qubit_count > MAX_REGISTER_QUBITS {
            return Err(Error::Capacity(format!(
                "register of {qubit_count} qubits exceeds cap {MAX_REGISTER_QUBITS}"
            )));
        }
        Ok(BosonRegister { qubit_count })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    /// Largest storable occupation, `2^q - 1`.
    pub fn max_occupation(&self) -> u64 {
        (1u64 << self.qubit_count) - 1
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum OpKind {
    Create,
    Annihilate,
    Number,
}

fn check_args(q: usize, c: f64) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidArgument("operator needs at least one qubit".into()));
    }
    if q > MAX_REGISTER_QUBITS {
        return Err(Error::Capacity(format!(
            "operator on {q} qubits exceeds cap {MAX_REGISTER_QUBITS}"
        )));
    }
    if c < 0.0 || !c.is_finite() {
        return Err(Error::InvalidArgument(format!("shift c must be finite and >= 0, got {c}")));
    }
    Ok(())
}

/// Creation operator `a†_q(c)` as a simplified Pauli sum on `q` qubits.
///
/// Built from the recursion
/// `a†_q(c) = (I+Z)/2 ⊗ a†_{q-1}(c)
///          + sqrt(c + 2^(q-1))/2^q (X-iY) ⊗ (X+iY)^⊗(q-1)
///          + (I-Z)/2 ⊗ a†_{q-1}(c + 2^(q-1))`
/// with `a†_0 = 0`.
pub fn creation_op(q: usize, c: f64) -> Result<PauliSum> {
    check_args(q, c)?;
    Ok(cached(OpKind::Create, q, c))
}

/// Annihilation operator `a_q(c)`; the conjugate recursion of [`creation_op`].
pub fn annihilation_op(q: usize, c: f64) -> Result<PauliSum> {
    check_args(q, c)?;
    Ok(cached(OpKind::Annihilate, q, c))
}

/// Number operator `n_q(c) = a†_q(c) a_q(c)`, a diagonal sum (I/Z letters
/// only). Its dense matrix is `diag(0, c+1, c+2, …, c+2^q-1)`: the recursion's
/// defining sum starts at occupation 1, so no `c` appears on the vacuum
/// entry. At the physical point `c = 0` this is `diag(0, 1, …, 2^q-1)`.
pub fn number_op(q: usize, c: f64) -> Result<PauliSum> {
    check_args(q, c)?;
    Ok(cached(OpKind::Number, q, c))
}

fn cached(kind: OpKind, q: usize, c: f64) -> PauliSum {
    static CACHE: OnceLock<Mutex<HashMap<(OpKind, usize, u64), PauliSum>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (kind, q, c.to_bits());
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let built = build(kind, q, c).simplify();
    cache.lock().unwrap().insert(key, built.clone());
    built
}

fn build(kind: OpKind, q: usize, c: f64) -> PauliSum {
    if q == 0 {
        return PauliSum::zero(0);
    }
    let half = Complex64::new(0.5, 0.0);
    let proj0 = PauliSum::from_terms(
        1,
        vec![
            PauliTerm::new(half, vec![Pauli::I]),
            PauliTerm::new(half, vec![Pauli::Z]),
        ],
    )
    .unwrap();
    let proj1 = PauliSum::from_terms(
        1,
        vec![
            PauliTerm::new(half, vec![Pauli::I]),
            PauliTerm::new(-half, vec![Pauli::Z]),
        ],
    )
    .unwrap();

    let shift = (1u64 << (q - 1)) as f64;
    let lower = build(kind, q - 1, c);
    let upper = build(kind, q - 1, c + shift);

    let mut out = proj0.tensor(&lower).add(&proj1.tensor(&upper)).unwrap();
    out = out.add(&bridge(kind, q, c, shift)).unwrap();
    out
}

/// The middle recursion term that crosses the register's most significant
/// bit: a raise/lower/projector on the leading qubit tensored across the
/// remaining `q-1` qubits.
fn bridge(kind: OpKind, q: usize, c: f64, shift: f64) -> PauliSum {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let x = |coeff: Complex64| PauliTerm::new(coeff, vec![Pauli::X]);
    let y = |coeff: Complex64| PauliTerm::new(coeff, vec![Pauli::Y]);
    let ident = |coeff: Complex64| PauliTerm::new(coeff, vec![Pauli::I]);
    let z = |coeff: Complex64| PauliTerm::new(coeff, vec![Pauli::Z]);

    // (head) ⊗ (tail)^⊗(q-1), with the overall 1/2^q folded into the scale.
    let (scale, head, tail) = match kind {
        OpKind::Create => (
            Complex64::new((c + shift).sqrt() / (1u64 << q) as f64, 0.0),
            PauliSum::from_terms(1, vec![x(one), y(-i)]).unwrap(),
            PauliSum::from_terms(1, vec![x(one), y(i)]).unwrap(),
        ),
        OpKind::Annihilate => (
            Complex64::new((c + shift).sqrt() / (1u64 << q) as f64, 0.0),
            PauliSum::from_terms(1, vec![x(one), y(i)]).unwrap(),
            PauliSum::from_terms(1, vec![x(one), y(-i)]).unwrap(),
        ),
        OpKind::Number => (
            Complex64::new((c + shift) / (1u64 << q) as f64, 0.0),
            PauliSum::from_terms(1, vec![ident(one), z(-one)]).unwrap(),
            PauliSum::from_terms(1, vec![ident(one), z(one)]).unwrap(),
        ),
    };

    let mut prod = head;
    for _ in 1..q {
        prod = prod.tensor(&tail);
    }
    prod.scaled(scale)
}
