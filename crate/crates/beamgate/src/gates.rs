//! State vectors, gate matrices and the Deutsch-Jozsa oracles.
//!
//! Everything here is plain dense linear algebra over `Complex<f64>`. The
//! direct summation in [`matvec_oracle`] is the ground truth that the optical
//! pipeline is checked against; nothing in this module knows about fields or
//! lattices.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// A length-N complex state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    coeffs: Vec<Complex64>,
}

impl StateVector {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    /// Logical basis vector `e_k` of dimension `n`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::IndexOutOfRange {
                context: "basis state",
                index: k,
                limit: n,
            });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Ok(Self { coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Scale to unit Euclidean norm.
    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidField("cannot normalize a zero vector".into()));
        }
        for c in &mut self.coeffs {
            *c /= n;
        }
        Ok(self)
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "inner product of vectors with dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Squared magnitudes of the coefficients.
    pub fn intensities(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Random unit vector with i.i.d. complex Gaussian entries.
    pub fn random_unit<R: Rng>(n: usize, rng: &mut R) -> Self {
        let coeffs = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self { coeffs }
            .normalized()
            .expect("Gaussian sample is nonzero almost surely")
    }
}

/// A dense N x N complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl GateMatrix {
    /// Build from row-major entries; length must be a perfect square times n.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(
                "matrix rows must be non-empty and square".into(),
            ));
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            entries[j * n + j] = Complex64::new(1.0, 0.0);
        }
        Self { n, entries }
    }

    /// Diagonal matrix from its diagonal entries.
    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for (j, d) in diag.iter().enumerate() {
            entries[j * n + j] = *d;
        }
        Self { n, entries }
    }

    /// Matrix with `weights` copied into every row, so column k carries the
    /// uniform entry `weights[k]`.
    ///
    /// This is how a vector (or the diagonal of a phase oracle) is laid onto
    /// a modulation plane: the weight marks the x-component and is repeated
    /// down all y-components.
    pub fn from_broadcast_vector(weights: &[Complex64]) -> Self {
        let n = weights.len();
        let mut entries = Vec::with_capacity(n * n);
        for _ in 0..n {
            entries.extend_from_slice(weights);
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.entries.chunks(self.n)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.n;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for k in 0..n {
                entries[k * n + j] = self.get(j, k).conj();
            }
        }
        Self { n, entries }
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "matrix product of {}x{} and {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        let n = self.n;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for k in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for m in 0..n {
                    acc += self.get(j, m) * other.get(m, k);
                }
                entries[j * n + k] = acc;
            }
        }
        Ok(Self { n, entries })
    }

    /// Max entrywise deviation of `M M^dagger` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.matmul(&self.dagger()).expect("same dims");
        let id = Self::identity(self.n);
        prod.entries
            .iter()
            .zip(&id.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Haar-ish random unitary via modified Gram-Schmidt on a complex
    /// Gaussian matrix. Good enough for exercising the pipeline; no claim of
    /// exact Haar measure.
    pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                    })
                    .collect()
            })
            .collect();
        for i in 0..n {
            // two passes of orthogonalization for numerical robustness
            for _ in 0..2 {
                for j in 0..i {
                    let (head, tail) = cols.split_at_mut(i);
                    let done = &head[j];
                    let current = &mut tail[0];
                    let proj: Complex64 = done
                        .iter()
                        .zip(current.iter())
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                    for (dst, src) in current.iter_mut().zip(done) {
                        *dst -= proj * src;
                    }
                }
            }
            let norm = cols[i].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            for c in &mut cols[i] {
                *c /= norm;
            }
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for (k, col) in cols.iter().enumerate() {
            for (j, v) in col.iter().enumerate() {
                entries[j * n + k] = *v;
            }
        }
        Self { n, entries }
    }
}

/// A Boolean function on `0..N` given by its truth table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanFunction {
    table: Vec<u8>,
}

/// The Deutsch-Jozsa dichotomy, plus the catch-all for everything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionClass {
    Constant,
    Balanced,
    Neither,
}

impl std::fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FunctionClass::Constant => write!(f, "constant"),
            FunctionClass::Balanced => write!(f, "balanced"),
            FunctionClass::Neither => write!(f, "neither"),
        }
    }
}

impl BooleanFunction {
    pub fn new(table: Vec<u8>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::Parse("empty truth table".into()));
        }
        if table.iter().any(|&b| b > 1) {
            return Err(Error::Parse("truth table entries must be 0 or 1".into()));
        }
        Ok(Self { table })
    }

    /// Parse a bit string such as "1001".
    pub fn from_bits(s: &str) -> Result<Self> {
        let table = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("invalid bit '{other}' in '{s}'"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(table)
    }

    pub fn constant(n: usize, value: u8) -> Result<Self> {
        Self::new(vec![value; n])
    }

    /// Uniformly random balanced function on `0..n` (n even).
    pub fn random_balanced<R: Rng>(n: usize, rng: &mut R) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::Parse(format!(
                "balanced function needs even table length, got {n}"
            )));
        }
        let mut table = vec![0u8; n];
        for idx in rand::seq::index::sample(rng, n, n / 2) {
            table[idx] = 1;
        }
        Self::new(table)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.table
    }

    pub fn classify(&self) -> FunctionClass {
        let ones: usize = self.table.iter().map(|&b| b as usize).sum();
        if ones == 0 || ones == self.table.len() {
            FunctionClass::Constant
        } else if self.table.len().is_multiple_of(2) && ones == self.table.len() / 2 {
            FunctionClass::Balanced
        } else {
            FunctionClass::Neither
        }
    }

    /// Complement table (0 <-> 1). The oracle changes only by a global sign.
    pub fn complement(&self) -> Self {
        Self {
            table: self.table.iter().map(|&b| 1 - b).collect(),
        }
    }
}

/// Direct summation `v_j = sum_k M_jk u_k`.
///
/// Ground truth for the optics pipeline: the element-wise product of the
/// matrix with the broadcast vector, summed over columns.
pub fn matvec_oracle(m: &GateMatrix, u: &StateVector) -> Result<StateVector> {
    if m.dim() != u.dim() {
        return Err(Error::DimensionMismatch(format!(
            "matrix dim {} vs vector dim {}",
            m.dim(),
            u.dim()
        )));
    }
    let coeffs = m
        .rows()
        .map(|row| row.iter().zip(u.coeffs()).map(|(m, u)| m * u).sum())
        .collect();
    Ok(StateVector::new(coeffs))
}

/// N-dimensional Hadamard gate for `N = 2^n_qubits`.
///
/// Entry `(m, k)` is `(-1)^(m.k) / sqrt(N)` where `m.k` is the dot product of
/// the binary representations; equivalently the n-fold tensor power of the
/// single-qubit gate.
pub fn hadamard_matrix(n_qubits: u32) -> GateMatrix {
    assert!(n_qubits >= 1, "hadamard_matrix requires n_qubits >= 1");
    let n = 1usize << n_qubits;
    let scale = 1.0 / (n as f64).sqrt();
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    for m in 0..n {
        for k in 0..n {
            let sign = if (m & k).count_ones() % 2 == 0 {
                scale
            } else {
                -scale
            };
            entries[m * n + k] = Complex64::new(sign, 0.0);
        }
    }
    GateMatrix { n, entries }
}

/// k-th Hadamard basis state, i.e. column k of the Hadamard gate.
pub fn hadamard_basis_state(n_qubits: u32, k: usize) -> Result<StateVector> {
    let n = 1usize << n_qubits;
    if k >= n {
        return Err(Error::IndexOutOfRange {
            context: "Hadamard basis state",
            index: k,
            limit: n,
        });
    }
    let h = hadamard_matrix(n_qubits);
    Ok(StateVector::new((0..n).map(|m| h.get(m, k)).collect()))
}

/// Diagonal phase oracle with entries `(-1)^F(k)`.
pub fn oracle_matrix(f: &BooleanFunction) -> GateMatrix {
    let diag: Vec<Complex64> = f
        .bits()
        .iter()
        .map(|&b| Complex64::new(if b == 0 { 1.0 } else { -1.0 }, 0.0))
        .collect();
    GateMatrix::diagonal(&diag)
}

/// Ideal Deutsch-Jozsa output `H_N U_F u_0` for a constant or balanced `f`.
///
/// Constant functions give `+/- e_0`; balanced functions give a vector whose
/// component on `e_0` is exactly zero. Anything else is rejected.
pub fn dj_expected_output(f: &BooleanFunction, n_qubits: u32) -> Result<StateVector> {
    if f.classify() == FunctionClass::Neither {
        return Err(Error::NeitherConstantNorBalanced);
    }
    let n = 1usize << n_qubits;
    if f.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "truth table length {} vs dimension {}",
            f.len(),
            n
        )));
    }
    let h = hadamard_matrix(n_qubits);
    let u0 = hadamard_basis_state(n_qubits, 0)?;
    let after_oracle = matvec_oracle(&oracle_matrix(f), &u0)?;
    matvec_oracle(&h, &after_oracle)
}

/// All balanced truth tables of length `n` (choose n/2 positions for the 1s).
pub fn all_balanced_functions(n: usize) -> Vec<BooleanFunction> {
    let mut out = Vec::new();
    let mut table = vec![0u8; n];
    fn recurse(table: &mut Vec<u8>, start: usize, remaining: usize, out: &mut Vec<BooleanFunction>) {
        if remaining == 0 {
            out.push(BooleanFunction::new(table.clone()).unwrap());
            return;
        }
        for i in start..=(table.len() - remaining) {
            table[i] = 1;
            recurse(table, i + 1, remaining - 1, out);
            table[i] = 0;
        }
    }
    recurse(&mut table, 0, n / 2, &mut out);
    out
}
