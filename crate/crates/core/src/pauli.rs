//! Weighted sums of Pauli strings: the operator representation used for the
//! qubitized Hamiltonian, the encoded bosonic operators, and all observables.
//!
//! Conventions, fixed throughout the crate:
//!
//! * A string's `letters[i]` acts on qubit `i`.
//! * Qubit 0 is the **most significant bit** of a computational-basis index,
//!   so the dense realization of a string is the plain Kronecker product
//!   `letters[0] ⊗ letters[1] ⊗ …`.
//! * Coefficients smaller than [`PRUNE_EPS`] in magnitude are dropped when a
//!   sum is simplified.

use std::fmt;

use ndarray::{linalg::kron, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficient magnitudes at or below this are treated as floating-point dust
/// and removed by [`PauliSum::simplify`]. The smallest physical coefficients
/// in the binary encoding are `sqrt(c + 2^(q-1)) / 2^q`, many orders above.
pub const PRUNE_EPS: f64 = 1e-14;

/// Widths above this would need a dense matrix of 2^14 x 2^14 complex
/// entries; refuse rather than exhaust memory.
pub const DENSE_WIDTH_CAP: usize = 14;

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Result<Pauli> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::InvalidArgument(format!("unknown Pauli letter {c:?}"))),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Product of two letters on the same qubit: `self * other = phase * letter`.
    pub fn mul(self, other: Pauli) -> (Complex64, Pauli) {
        use Pauli::*;
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match (self, other) {
            (I, p) => (one, p),
            (p, I) => (one, p),
            (X, X) | (Y, Y) | (Z, Z) => (one, I),
            (X, Y) => (i, Z),
            (Y, X) => (-i, Z),
            (Y, Z) => (i, X),
            (Z, Y) => (-i, X),
            (Z, X) => (i, Y),
            (X, Z) => (-i, Y),
        }
    }

    /// 2x2 dense matrix of the letter.
    pub fn matrix(self) -> Array2<Complex64> {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => Array2::from_shape_vec((2, 2), vec![one, z, z, one]).unwrap(),
            Pauli::X => Array2::from_shape_vec((2, 2), vec![z, one, one, z]).unwrap(),
            Pauli::Y => Array2::from_shape_vec((2, 2), vec![z, -i, i, z]).unwrap(),
            Pauli::Z => Array2::from_shape_vec((2, 2), vec![one, z, z, -one]).unwrap(),
        }
    }
}

/// A complex-weighted tensor product of Pauli letters, one per qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coefficient: Complex64,
    pub letters: Vec<Pauli>,
}

impl PauliTerm {
    pub fn new(coefficient: Complex64, letters: Vec<Pauli>) -> Self {
        PauliTerm { coefficient, letters }
    }

    pub fn identity(width: usize) -> Self {
        PauliTerm::new(Complex64::new(1.0, 0.0), vec![Pauli::I; width])
    }

    pub fn width(&self) -> usize {
        self.letters.len()
    }

    /// Letters as a label string, e.g. `XIZ`.
    pub fn label(&self) -> String {
        self.letters.iter().map(|p| p.to_char()).collect()
    }

    pub fn is_identity_string(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// True when the string contains only I and Z letters.
    pub fn is_diagonal(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I || p == Pauli::Z)
    }

    /// Conjugate transpose. Pauli strings are Hermitian, so only the
    /// coefficient conjugates.
    pub fn adjoint(&self) -> Self {
        PauliTerm::new(self.coefficient.conj(), self.letters.clone())
    }

    /// Letter-wise product of two strings of equal width.
    pub fn multiply(&self, other: &PauliTerm) -> Result<PauliTerm> {
        if self.width() != other.width() {
            return Err(Error::InvalidArgument(format!(
                "width mismatch in Pauli product: {} vs {}",
                self.width(),
                other.width()
            )));
        }
        let mut coeff = self.coefficient * other.coefficient;
        let letters = self
            .letters
            .iter()
            .zip(other.letters.iter())
            .map(|(&a, &b)| {
                let (phase, p) = a.mul(b);
                coeff *= phase;
                p
            })
            .collect();
        Ok(PauliTerm::new(coeff, letters))
    }

    pub fn tensor(&self, other: &PauliTerm) -> PauliTerm {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        PauliTerm::new(self.coefficient * other.coefficient, letters)
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.coefficient.re, self.coefficient.im, self.label())
    }
}

/// A multiset of [`PauliTerm`]s over a common qubit width.
#[derive(Clone, Debug)]
pub struct PauliSum {
    width: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    /// The zero operator on `width` qubits.
    pub fn zero(width: usize) -> Self {
        PauliSum { width, terms: Vec::new() }
    }

    pub fn identity(width: usize) -> Self {
        PauliSum { width, terms: vec![PauliTerm::identity(width)] }
    }

    /// A single letter `p` on `qubit`, identity elsewhere, weighted by `coeff`.
    pub fn single(width: usize, qubit: usize, p: Pauli, coeff: Complex64) -> Result<Self> {
        if qubit >= width {
            return Err(Error::InvalidArgument(format!(
                "qubit {qubit} out of range for width {width}"
            )));
        }
        let mut letters = vec![Pauli::I; width];
        letters[qubit] = p;
        Ok(PauliSum { width, terms: vec![PauliTerm::new(coeff, letters)] })
    }

    pub fn from_terms(width: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        for t in &terms {
            if t.width() != width {
                return Err(Error::InvalidArgument(format!(
                    "term width {} does not match declared width {width}",
                    t.width()
                )));
            }
        }
        Ok(PauliSum { width, terms })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|t| t.is_diagonal())
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.width != other.width {
            return Err(Error::InvalidArgument(format!(
                "width mismatch in sum: {} vs {}",
                self.width, other.width
            )));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(PauliSum { width: self.width, terms })
    }

    pub fn scaled(&self, factor: Complex64) -> PauliSum {
        PauliSum {
            width: self.width,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm::new(t.coefficient * factor, t.letters.clone()))
                .collect(),
        }
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum { width: self.width, terms: self.terms.iter().map(|t| t.adjoint()).collect() }
    }

    /// Distributed product of two sums over equal widths, simplified.
    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.width != other.width {
            return Err(Error::InvalidArgument(format!(
                "width mismatch in product: {} vs {}",
                self.width, other.width
            )));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.multiply(b)?);
            }
        }
        Ok(PauliSum { width: self.width, terms }.simplify())
    }

    /// Kronecker-product composition: `self` acts on the leading qubits.
    pub fn tensor(&self, other: &PauliSum) -> PauliSum {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.tensor(b));
            }
        }
        PauliSum { width: self.width + other.width, terms }
    }

    /// Place this sum on the contiguous qubit range starting at `start`
    /// inside a register of `total_width` qubits; identity elsewhere.
    pub fn embed(&self, total_width: usize, start: usize) -> Result<PauliSum> {
        if start + self.width > total_width {
            return Err(Error::InvalidArgument(format!(
                "cannot embed width {} at qubit {start} into register of {total_width}",
                self.width
            )));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut letters = vec![Pauli::I; total_width];
                letters[start..start + self.width].copy_from_slice(&t.letters);
                PauliTerm::new(t.coefficient, letters)
            })
            .collect();
        Ok(PauliSum { width: total_width, terms })
    }

    /// Merge terms with identical letter sequences, drop coefficients below
    /// [`PRUNE_EPS`], and leave terms in a canonical (sorted) order.
    pub fn simplify(&self) -> PauliSum {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| a.letters.cmp(&b.letters));
        let mut merged: Vec<PauliTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.letters == t.letters => last.coefficient += t.coefficient,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coefficient.norm() > PRUNE_EPS);
        PauliSum { width: self.width, terms: merged }
    }

    /// A sum is Hermitian exactly when every simplified coefficient is real:
    /// distinct Pauli strings are linearly independent and each is Hermitian.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.simplify().terms.iter().all(|t| t.coefficient.im.abs() <= tol)
    }

    /// Exact Kronecker expansion into a dense `2^width x 2^width` matrix.
    /// Used in tests and the exact-evolution oracle only.
    pub fn dense(&self) -> Result<Array2<Complex64>> {
        if self.width > DENSE_WIDTH_CAP {
            return Err(Error::Capacity(format!(
                "dense realization of width {} exceeds cap {DENSE_WIDTH_CAP}",
                self.width
            )));
        }
        let dim = 1usize << self.width;
        let mut out = Array2::<Complex64>::zeros((dim, dim));
        for t in &self.terms {
            let mut m = Array2::from_elem((1, 1), t.coefficient);
            for &p in &t.letters {
                m = kron(&m, &p.matrix());
            }
            out += &m;
        }
        Ok(out)
    }

    /// One term per line: `<re> <im> <letters>`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for t in &self.terms {
            s.push_str(&format!("{t}\n"));
        }
        s
    }

    /// Parse the [`to_text`](Self::to_text) format. Width is inferred from
    /// the first line; all lines must agree.
    pub fn from_text(text: &str) -> Result<PauliSum> {
        let mut terms = Vec::new();
        let mut width = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::InvalidArgument(format!(
                    "line {}: expected `<re> <im> <letters>`, got {line:?}",
                    lineno + 1
                )));
            }
            let re: f64 = fields[0]
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("line {}: {e}", lineno + 1)))?;
            let im: f64 = fields[1]
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("line {}: {e}", lineno + 1)))?;
            let letters: Vec<Pauli> =
                fields[2].chars().map(Pauli::from_char).collect::<Result<_>>()?;
            match width {
                None => width = Some(letters.len()),
                Some(w) if w != letters.len() => {
                    return Err(Error::InvalidArgument(format!(
                        "line {}: width {} disagrees with {}",
                        lineno + 1,
                        letters.len(),
                        w
                    )));
                }
                _ => {}
            }
            terms.push(PauliTerm::new(Complex64::new(re, im), letters));
        }
        let width = width.ok_or_else(|| {
            Error::InvalidArgument("cannot parse a Pauli sum from empty text".into())
        })?;
        Ok(PauliSum { width, terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qubit_products() {
        let (phase, p) = Pauli::X.mul(Pauli::Y);
        assert_eq!(p, Pauli::Z);
        assert_eq!(phase, c(0.0, 1.0));
        let (phase, p) = Pauli::Y.mul(Pauli::X);
        assert_eq!(p, Pauli::Z);
        assert_eq!(phase, c(0.0, -1.0));
        for p in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z] {
            let (phase, q) = p.mul(p);
            assert_eq!(q, Pauli::I);
            assert_eq!(phase, c(1.0, 0.0));
        }
    }

    #[test]
    fn x_times_y_is_i_z() {
        let x = PauliSum::single(1, 0, Pauli::X, c(1.0, 0.0)).unwrap();
        let y = PauliSum::single(1, 0, Pauli::Y, c(1.0, 0.0)).unwrap();
        let xy = x.multiply(&y).unwrap();
        assert_eq!(xy.term_count(), 1);
        assert_eq!(xy.terms()[0].letters, vec![Pauli::Z]);
        assert!((xy.terms()[0].coefficient - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn multiply_by_identity_is_noop() {
        // fixed "random" 3-qubit sum
        let a = PauliSum::from_terms(
            3,
            vec![
                PauliTerm::new(c(0.7, -0.2), vec![Pauli::X, Pauli::I, Pauli::Z]),
                PauliTerm::new(c(-1.3, 0.4), vec![Pauli::Y, Pauli::Y, Pauli::I]),
                PauliTerm::new(c(0.05, 0.0), vec![Pauli::Z, Pauli::X, Pauli::X]),
            ],
        )
        .unwrap();
        let id = PauliSum::identity(3);
        let prod = a.multiply(&id).unwrap();
        let diff = prod.add(&a.scaled(c(-1.0, 0.0))).unwrap().simplify();
        assert!(diff.is_zero());
    }

    #[test]
    fn dense_z_is_diag() {
        let z = PauliSum::single(1, 0, Pauli::Z, c(1.0, 0.0)).unwrap();
        let m = z.dense().unwrap();
        assert_eq!(m[[0, 0]], c(1.0, 0.0));
        assert_eq!(m[[1, 1]], c(-1.0, 0.0));
        assert_eq!(m[[0, 1]], c(0.0, 0.0));
    }

    #[test]
    fn dense_projector_zero() {
        // (I + Z)/2 = |0><0|
        let p = PauliSum::identity(1)
            .add(&PauliSum::single(1, 0, Pauli::Z, c(1.0, 0.0)).unwrap())
            .unwrap()
            .scaled(c(0.5, 0.0));
        let m = p.dense().unwrap();
        assert_eq!(m[[0, 0]], c(1.0, 0.0));
        assert_eq!(m[[1, 1]], c(0.0, 0.0));
    }

    #[test]
    fn dense_xx_antidiagonal() {
        let xx = PauliSum::from_terms(
            2,
            vec![PauliTerm::new(c(1.0, 0.0), vec![Pauli::X, Pauli::X])],
        )
        .unwrap();
        let m = xx.dense().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(m[[i, j]], c(expect, 0.0), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn dense_width_cap() {
        let s = PauliSum::identity(15);
        assert!(matches!(s.dense(), Err(Error::Capacity(_))));
    }

    #[test]
    fn width_mismatch_rejected() {
        let a = PauliSum::identity(2);
        let b = PauliSum::identity(3);
        assert!(matches!(a.multiply(&b), Err(Error::InvalidArgument(_))));
        assert!(matches!(a.add(&b), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn hermitian_flag_matches_dense() {
        let h = PauliSum::from_terms(
            2,
            vec![
                PauliTerm::new(c(0.5, 0.0), vec![Pauli::X, Pauli::Y]),
                PauliTerm::new(c(-1.5, 0.0), vec![Pauli::Z, Pauli::I]),
            ],
        )
        .unwrap();
        assert!(h.is_hermitian(1e-12));
        let m = h.dense().unwrap();
        let mt = m.t().mapv(|v| v.conj());
        let err: f64 = (&m - &mt).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);

        let g = PauliSum::from_terms(
            2,
            vec![PauliTerm::new(c(0.0, 0.7), vec![Pauli::X, Pauli::I])],
        )
        .unwrap();
        assert!(!g.is_hermitian(1e-12));
    }

    fn arb_sum() -> impl Strategy<Value = PauliSum> {
        let letter = prop_oneof![
            Just(Pauli::I),
            Just(Pauli::X),
            Just(Pauli::Y),
            Just(Pauli::Z)
        ];
        let term = (
            prop::collection::vec(letter, 3),
            -2.0f64..2.0,
            -2.0f64..2.0,
        )
            .prop_map(|(letters, re, im)| PauliTerm::new(Complex64::new(re, im), letters));
        prop::collection::vec(term, 1..12)
            .prop_map(|terms| PauliSum::from_terms(3, terms).unwrap())
    }

    proptest! {
        #[test]
        fn simplify_is_idempotent(s in arb_sum()) {
            let once = s.simplify();
            let twice = once.simplify();
            prop_assert_eq!(once.term_count(), twice.term_count());
            for (a, b) in once.terms().iter().zip(twice.terms()) {
                prop_assert_eq!(&a.letters, &b.letters);
                prop_assert!((a.coefficient - b.coefficient).norm() < 1e-15);
            }
        }

        #[test]
        fn text_round_trip(s in arb_sum()) {
            let s = s.simplify();
            prop_assume!(!s.is_zero());
            let parsed = PauliSum::from_text(&s.to_text()).unwrap();
            prop_assert_eq!(parsed.width(), s.width());
            prop_assert_eq!(parsed.term_count(), s.term_count());
            for (a, b) in parsed.terms().iter().zip(s.terms()) {
                prop_assert_eq!(&a.letters, &b.letters);
                prop_assert!((a.coefficient - b.coefficient).norm() < 1e-12);
            }
        }

        #[test]
        fn product_matches_dense(a in arb_sum(), b in arb_sum()) {
            let prod = a.multiply(&b).unwrap();
            let lhs = prod.dense().unwrap();
            let rhs = a.dense().unwrap().dot(&b.dense().unwrap());
            let err: f64 = (&lhs - &rhs).iter().map(|v| v.norm()).fold(0.0, f64::max);
            prop_assert!(err < 1e-10);
        }
    }
}
