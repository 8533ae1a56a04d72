//! Channel algebra in the Liouville (transfer-matrix) representation.
//!
//! Operators on `C^d` are expanded in a fixed trace-orthonormal Hermitian basis
//! `{A_0, ..., A_{d^2-1}}` with `A_0 = 1/sqrt(d)`. For qubits the basis is the
//! normalized Pauli basis in the order `(1, X, Y, Z)/sqrt(2)`. For `d > 2` it is
//! the generalized Gell-Mann basis: for each pair `j < k` (lexicographic) the
//! symmetric then antisymmetric element, followed by the `d - 1` diagonal
//! elements. The `d = 2` case of that construction coincides with the Pauli
//! ordering above.
//!
//! A channel `E` is the real matrix with `E[j, k] = Tr(A_j E(A_k))`. Trace
//! preservation fixes the first row to `(1, 0, ..., 0)`, the first column
//! below it is the nonunital part `alpha(E)` and the lower-right block is the
//! unital part `phi(E)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::SymmetricEigen;

use crate::math::sqrt;
use crate::{CMatrix, Complex64, Error, RMatrix, RVector, Result};

/// Largest allowed deviation of the first row from `(1, 0, ..., 0)`.
pub const TP_TOLERANCE: f64 = 1e-12;
/// Smallest accepted Choi eigenvalue.
pub const CP_TOLERANCE: f64 = -1e-9;
/// Tolerance for unitarity of gate matrices and for the channel-norm relations.
pub const UNITARY_TOLERANCE: f64 = 1e-10;
const NORM_TOLERANCE: f64 = 1e-9;

/// Basis elements before normalization, paired with `Tr(B^2)`. Entries are
/// small integers (times `i` for the antisymmetric elements), which keeps
/// products of basis elements exact.
fn raw_basis(d: usize) -> Vec<(CMatrix, f64)> {
    assert!(d >= 2, "operator basis needs d >= 2");
    let zero = Complex64::new(0.0, 0.0);
    let mut basis = Vec::with_capacity(d * d);
    basis.push((CMatrix::identity(d, d), d as f64));
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = CMatrix::from_element(d, d, zero);
            sym[(j, k)] = Complex64::new(1.0, 0.0);
            sym[(k, j)] = Complex64::new(1.0, 0.0);
            basis.push((sym, 2.0));
            let mut anti = CMatrix::from_element(d, d, zero);
            anti[(j, k)] = Complex64::new(0.0, -1.0);
            anti[(k, j)] = Complex64::new(0.0, 1.0);
            basis.push((anti, 2.0));
        }
    }
    for l in 1..d {
        let mut diag = CMatrix::from_element(d, d, zero);
        for j in 0..l {
            diag[(j, j)] = Complex64::new(1.0, 0.0);
        }
        diag[(l, l)] = Complex64::new(-(l as f64), 0.0);
        basis.push((diag, (l * (l + 1)) as f64));
    }
    basis
}

/// The trace-orthonormal Hermitian operator basis for dimension `d`.
pub fn operator_basis(d: usize) -> Vec<CMatrix> {
    raw_basis(d)
        .into_iter()
        .map(|(b, n)| b * Complex64::new(1.0 / sqrt(n), 0.0))
        .collect()
}

/// `M[j, k] = Tr(A_j E(A_k))` for a map given by its action on operators,
/// evaluated on the unnormalized basis and rescaled once per entry.
fn liouville_matrix(d: usize, image: impl Fn(&CMatrix) -> CMatrix) -> RMatrix {
    let raw = raw_basis(d);
    let n = d * d;
    let mut m = RMatrix::zeros(n, n);
    for (k, (bk, nk)) in raw.iter().enumerate() {
        let out = image(bk);
        for (j, (bj, nj)) in raw.iter().enumerate() {
            m[(j, k)] = (bj * &out).trace().re / sqrt(nj * nk);
        }
    }
    m
}

/// Expansion coefficients `Tr(A_k X)` of an operator.
fn coordinates(op: &CMatrix, basis: &[CMatrix]) -> Vec<Complex64> {
    basis.iter().map(|a| (a * op).trace()).collect()
}

fn operator_from_coordinates(coords: &[Complex64], basis: &[CMatrix]) -> CMatrix {
    let d = basis[0].nrows();
    let mut op = CMatrix::zeros(d, d);
    for (c, a) in coords.iter().zip(basis) {
        op += a * *c;
    }
    op
}

fn real_coordinates(op: &CMatrix, basis: &[CMatrix]) -> Result<RVector> {
    let coords = coordinates(op, basis);
    let max_imag = coords.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    if max_imag > 1e-10 {
        return Err(Error::Physicality(format!(
            "operator is not Hermitian (imaginary coordinate {max_imag:e})"
        )));
    }
    Ok(RVector::from_iterator(
        coords.len(),
        coords.iter().map(|c| c.re),
    ))
}

fn hermitian_eigenvalues(m: &CMatrix) -> RVector {
    // Symmetrize to shed roundoff in the anti-Hermitian part.
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues
}

fn dim_from_len(len: usize) -> Result<usize> {
    let d = sqrt(len as f64) as usize;
    for cand in [d, d + 1] {
        if cand * cand == len && cand >= 2 {
            return Ok(cand);
        }
    }
    Err(Error::InvalidParameter(format!(
        "vector length {len} is not d^2 for any d >= 2"
    )))
}

/// Liouville coordinates `|rho)` of a density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    entries: RVector,
    dim: usize,
}

impl StateVector {
    /// Validates `Tr rho = 1`, Hermiticity and positivity.
    pub fn from_density_matrix(rho: &CMatrix) -> Result<Self> {
        let d = rho.nrows();
        if rho.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: rho.ncols(),
            });
        }
        let basis = operator_basis(d);
        let entries = real_coordinates(rho, &basis)?;
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::Physicality(format!(
                "density operator has trace {trace}"
            )));
        }
        let min = hermitian_eigenvalues(rho).min();
        if min < CP_TOLERANCE {
            return Err(Error::Physicality(format!(
                "density operator has negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { entries, dim: d })
    }

    pub fn from_entries(entries: &[f64]) -> Result<Self> {
        let dim = dim_from_len(entries.len())?;
        let basis = operator_basis(dim);
        let coords: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_density_matrix(&operator_from_coordinates(&coords, &basis))
    }

    /// The pure state `|psi><psi|`; `psi` is normalized here.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
        if norm <= 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let v = nalgebra::DVector::from_iterator(psi.len(), psi.iter().map(|c| c / sqrt(norm)));
        Self::from_density_matrix(&(&v * v.adjoint()))
    }

    /// Computational basis state `|k><k|`.
    pub fn basis_state(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::InvalidParameter(format!("basis index {k} >= d = {d}")));
        }
        let mut psi = vec![Complex64::new(0.0, 0.0); d];
        psi[k] = Complex64::new(1.0, 0.0);
        Self::pure(&psi)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        let mut entries = RVector::zeros(d * d);
        entries[0] = 1.0 / sqrt(d as f64);
        Self { entries, dim: d }
    }

    /// Qubit state `(1 + x X + y Y + z Z) / 2` for a Bloch vector of norm at most 1.
    pub fn qubit_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let s = 1.0 / sqrt(2.0);
        Self::from_entries(&[s, x * s, y * s, z * s])
    }

    pub fn entries(&self) -> &RVector {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `rho_0 = Tr(rho)/sqrt(d)`.
    pub fn trace_component(&self) -> f64 {
        self.entries[0]
    }

    /// The traceless part `vec(rho)`.
    pub fn traceless(&self) -> RVector {
        self.entries.rows(1, self.entries.len() - 1).into_owned()
    }

    /// Purity `Tr(rho^2)`, the squared norm of `|rho)`.
    pub fn purity(&self) -> f64 {
        self.entries.norm_squared()
    }

    pub fn density_matrix(&self) -> CMatrix {
        let basis = operator_basis(self.dim);
        let coords: Vec<Complex64> = self.entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        operator_from_coordinates(&coords, &basis)
    }

    /// `|rho) ⊗ |rho)` in the Kronecker ordering used by [`LinearMap::tensor_square`].
    pub fn tensor_square(&self) -> RVector {
        self.entries.kronecker(&self.entries)
    }
}

/// Liouville row vector `(E|` of a measurement effect.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectVector {
    entries: RVector,
    dim: usize,
}

impl EffectVector {
    /// Validates `0 <= E <= 1`.
    pub fn from_operator(e: &CMatrix) -> Result<Self> {
        let d = e.nrows();
        if e.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: e.ncols(),
            });
        }
        let basis = operator_basis(d);
        let entries = real_coordinates(e, &basis)?;
        let eig = hermitian_eigenvalues(e);
        if eig.min() < CP_TOLERANCE || eig.max() > 1.0 - CP_TOLERANCE {
            return Err(Error::Physicality(format!(
                "effect eigenvalues [{:e}, {:e}] leave [0, 1]",
                eig.min(),
                eig.max()
            )));
        }
        Ok(Self { entries, dim: d })
    }

    pub fn from_entries(entries: &[f64]) -> Result<Self> {
        let dim = dim_from_len(entries.len())?;
        let basis = operator_basis(dim);
        let coords: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_operator(&operator_from_coordinates(&coords, &basis))
    }

    /// Projector onto `psi`.
    pub fn projector(psi: &[Complex64]) -> Result<Self> {
        let s = StateVector::pure(psi)?;
        Ok(Self {
            entries: s.entries,
            dim: s.dim,
        })
    }

    pub fn basis_projector(d: usize, k: usize) -> Result<Self> {
        let s = StateVector::basis_state(d, k)?;
        Ok(Self {
            entries: s.entries,
            dim: s.dim,
        })
    }

    pub fn entries(&self) -> &RVector {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `E_0 = Tr(E)/sqrt(d)`.
    pub fn trace_component(&self) -> f64 {
        self.entries[0]
    }

    pub fn traceless(&self) -> RVector {
        self.entries.rows(1, self.entries.len() - 1).into_owned()
    }

    pub fn operator(&self) -> CMatrix {
        let basis = operator_basis(self.dim);
        let coords: Vec<Complex64> = self.entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        operator_from_coordinates(&coords, &basis)
    }

    pub fn tensor_square(&self) -> RVector {
        self.entries.kronecker(&self.entries)
    }
}

/// Tolerance used when reporting out-of-range probabilities.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

/// `p(E|rho) = Tr(E rho) = (E|rho)`.
///
/// Values within [`PROBABILITY_TOLERANCE`] of `[0, 1]` are clamped; anything
/// further out signals invalid inputs.
pub fn probability(e: &EffectVector, s: &StateVector) -> Result<f64> {
    if e.dim != s.dim {
        return Err(Error::DimensionMismatch {
            expected: e.dim,
            found: s.dim,
        });
    }
    clamp_probability(e.entries.dot(&s.entries))
}

pub(crate) fn clamp_probability(p: f64) -> Result<f64> {
    if !(-PROBABILITY_TOLERANCE..=1.0 + PROBABILITY_TOLERANCE).contains(&p) {
        return Err(Error::Physicality(format!("probability {p} outside [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// An unvalidated linear map in Liouville form, e.g. a difference of channels.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    matrix: RMatrix,
    dim: usize,
}

impl LinearMap {
    pub fn new(dim: usize, matrix: RMatrix) -> Result<Self> {
        let n = dim * dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { matrix, dim })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: RMatrix::identity(dim * dim, dim * dim),
            dim,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: RMatrix::zeros(dim * dim, dim * dim),
            dim,
        }
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap> {
        check_dims(self.dim, other.dim)?;
        Ok(Self {
            matrix: &self.matrix - &other.matrix,
            dim: self.dim,
        })
    }

    /// Applies the map to an arbitrary (not necessarily Hermitian) operator.
    pub fn apply_operator(&self, x: &CMatrix) -> CMatrix {
        let basis = operator_basis(self.dim);
        let coords = coordinates(x, &basis);
        let out: Vec<Complex64> = (0..coords.len())
            .map(|j| {
                coords
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * self.matrix[(j, k)])
                    .sum()
            })
            .collect();
        operator_from_coordinates(&out, &basis)
    }

    /// `J(D) = (D ⊗ 1)(Phi)` with `Phi` the normalized maximally entangled state.
    ///
    /// Row index `i*d + a` pairs output index `i` with ancilla index `a`.
    pub fn to_choi(&self) -> ChoiMatrix {
        let d = self.dim;
        let zero = Complex64::new(0.0, 0.0);
        let mut j = CMatrix::from_element(d * d, d * d, zero);
        for a in 0..d {
            for b in 0..d {
                let mut unit = CMatrix::from_element(d, d, zero);
                unit[(a, b)] = Complex64::new(1.0, 0.0);
                let image = self.apply_operator(&unit);
                for r in 0..d {
                    for c in 0..d {
                        j[(r * d + a, c * d + b)] = image[(r, c)] / d as f64;
                    }
                }
            }
        }
        ChoiMatrix { matrix: j, dim: d }
    }

    /// Kronecker square; index `j*d^2 + k` labels basis element `A_j ⊗ A_k`.
    pub fn tensor_square(&self) -> RMatrix {
        self.matrix.kronecker(&self.matrix)
    }

    /// Nonunital column `alpha`.
    pub fn alpha(&self) -> RVector {
        let n = self.matrix.nrows();
        self.matrix.view((1, 0), (n - 1, 1)).column(0).into_owned()
    }

    /// Unital block `phi`.
    pub fn phi(&self) -> RMatrix {
        let n = self.matrix.nrows();
        self.matrix.view((1, 1), (n - 1, n - 1)).into_owned()
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// A completely positive, trace-preserving map in Liouville form.
///
/// Validated on construction against [`TP_TOLERANCE`] and [`CP_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    map: LinearMap,
}

impl QuantumChannel {
    pub fn new(dim: usize, matrix: RMatrix) -> Result<Self> {
        Self::from_map(LinearMap::new(dim, matrix)?)
    }

    pub fn from_map(map: LinearMap) -> Result<Self> {
        let tp = tp_deviation(&map.matrix);
        if tp > TP_TOLERANCE {
            return Err(Error::Physicality(format!(
                "not trace preserving: first row deviates by {tp:e}"
            )));
        }
        let min = map.to_choi().min_eigenvalue();
        if min < CP_TOLERANCE {
            return Err(Error::Physicality(format!(
                "not completely positive: Choi eigenvalue {min:e}"
            )));
        }
        Ok(Self { map })
    }

    /// Row-major `d^2 x d^2` entries.
    pub fn from_row_major(dim: usize, entries: &[f64]) -> Result<Self> {
        let n = dim * dim;
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Self::new(dim, RMatrix::from_row_slice(n, n, entries))
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        let m = &self.map.matrix;
        let mut out = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            out.extend(m.row(r).iter().copied());
        }
        out
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            map: LinearMap::identity(dim),
        }
    }

    /// Unitary channel `rho -> u rho u^†`, with `M[j, k] = Tr(A_j u A_k u^†)`.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        let d = u.nrows();
        if u.ncols() != d || d < 2 {
            return Err(Error::InvalidParameter(format!(
                "unitary must be square with d >= 2, got {}x{}",
                u.nrows(),
                u.ncols()
            )));
        }
        let dev = (u.adjoint() * u - CMatrix::identity(d, d))
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if dev > UNITARY_TOLERANCE {
            return Err(Error::Physicality(format!(
                "matrix is not unitary (deviation {dev:e})"
            )));
        }
        let n = d * d;
        let ud = u.adjoint();
        let mut m = liouville_matrix(d, |b| u * b * &ud);
        // First row and column are exact for a unitary channel.
        for k in 1..n {
            m[(0, k)] = 0.0;
            m[(k, 0)] = 0.0;
        }
        m[(0, 0)] = 1.0;
        Ok(Self {
            map: LinearMap { matrix: m, dim: d },
        })
    }

    /// Channel given by Kraus operators, `rho -> sum_i K_i rho K_i^†`.
    pub fn from_kraus(kraus: &[CMatrix]) -> Result<Self> {
        let d = kraus
            .first()
            .ok_or_else(|| Error::InvalidParameter("no Kraus operators".into()))?
            .nrows();
        let n = d * d;
        let mut m = liouville_matrix(d, |b| {
            let mut image = CMatrix::zeros(d, d);
            for kr in kraus {
                image += kr * b * kr.adjoint();
            }
            image
        });
        for k in 1..n {
            if m[(0, k)].abs() < 1e-13 {
                m[(0, k)] = 0.0;
            }
        }
        if (m[(0, 0)] - 1.0).abs() < 1e-13 {
            m[(0, 0)] = 1.0;
        }
        Self::new(d, m)
    }

    pub fn dim(&self) -> usize {
        self.map.dim
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.map.matrix
    }

    pub fn as_map(&self) -> &LinearMap {
        &self.map
    }

    pub fn into_map(self) -> LinearMap {
        self.map
    }

    /// Matrix product `self · other`: `other` acts first.
    pub fn compose(&self, other: &QuantumChannel) -> Result<QuantumChannel> {
        check_dims(self.dim(), other.dim())?;
        let matrix = &self.map.matrix * &other.map.matrix;
        let tp = tp_deviation(&matrix);
        if tp > TP_TOLERANCE {
            return Err(Error::Numerical(format!(
                "composition drifted from trace preservation by {tp:e}"
            )));
        }
        Ok(Self {
            map: LinearMap {
                matrix,
                dim: self.dim(),
            },
        })
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        check_dims(self.dim(), s.dim)?;
        Ok(StateVector {
            entries: &self.map.matrix * &s.entries,
            dim: s.dim,
        })
    }

    pub fn alpha(&self) -> RVector {
        self.map.alpha()
    }

    pub fn phi(&self) -> RMatrix {
        self.map.phi()
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.alpha().amax() <= tol
    }

    /// `f = Tr(phi) / (d^2 - 1)`.
    pub fn average_fidelity_f(&self) -> f64 {
        let d = self.dim() as f64;
        self.phi().trace() / (d * d - 1.0)
    }

    /// Average gate fidelity with the identity, `F_avg = f + (1 - f)/d`.
    pub fn average_gate_fidelity(&self) -> f64 {
        let f = self.average_fidelity_f();
        f + (1.0 - f) / self.dim() as f64
    }

    /// Average gate infidelity `r = (d - 1)(1 - f)/d`.
    pub fn infidelity(&self) -> f64 {
        let d = self.dim() as f64;
        (d - 1.0) * (1.0 - self.average_fidelity_f()) / d
    }

    pub fn to_choi(&self) -> ChoiMatrix {
        self.map.to_choi()
    }

    /// `F[Phi, J(E)] = <Phi|J(E)|Phi>`.
    pub fn choi_fidelity(&self) -> f64 {
        self.to_choi().entanglement_fidelity()
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.map)
    }

    pub fn tensor_square(&self) -> RMatrix {
        self.map.tensor_square()
    }
}

/// Matrix product `a · b` (apply `b`, then `a`).
pub fn compose(a: &QuantumChannel, b: &QuantumChannel) -> Result<QuantumChannel> {
    a.compose(b)
}

fn tp_deviation(m: &RMatrix) -> f64 {
    let mut dev = (m[(0, 0)] - 1.0).abs();
    for k in 1..m.ncols() {
        dev = dev.max(m[(0, k)].abs());
    }
    dev
}

/// Choi matrix of a linear map.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    matrix: CMatrix,
    dim: usize,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn eigenvalues(&self) -> RVector {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().min()
    }

    /// Trace norm, the sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        self.matrix.singular_values().sum()
    }

    /// `<Phi|J|Phi>` for the maximally entangled `Phi`.
    pub fn entanglement_fidelity(&self) -> f64 {
        let d = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..d {
            for k in 0..d {
                acc += self.matrix[(j * d + j, k * d + k)];
            }
        }
        acc.re / d as f64
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// A violated physicality relation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Violation {
    NotTracePreserving,
    NotCompletelyPositive,
    DeterminantAboveOne,
    SpectralNormAboveSqrtD,
    SpectralRadiusAboveOne,
    NonunitalNormAboveBound,
    UnitalNormNotOne,
}

/// Physicality diagnostics for a Liouville matrix.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ValidationReport {
    pub trace_preserving: bool,
    pub completely_positive: bool,
    pub unital: bool,
    pub min_choi_eigenvalue: f64,
    pub spectral_norm: f64,
    pub spectral_radius: f64,
    pub alpha_norm: f64,
    pub determinant: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks trace preservation, complete positivity and the channel-norm relations
/// `det <= 1`, `||E||_inf <= sqrt(d)`, spectral radius `<= 1`,
/// `||alpha||_2 <= sqrt(d - 1)` and, for unital maps, `||E||_inf = 1`.
pub fn validate(map: &LinearMap) -> ValidationReport {
    let m = &map.matrix;
    let d = map.dim as f64;
    let trace_preserving = tp_deviation(m) <= TP_TOLERANCE;
    let min_choi_eigenvalue = map.to_choi().min_eigenvalue();
    let completely_positive = min_choi_eigenvalue >= CP_TOLERANCE;
    let spectral_norm = m.singular_values().max();
    let spectral_radius = m
        .complex_eigenvalues()
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let alpha_norm = map.alpha().norm();
    let unital = alpha_norm <= NORM_TOLERANCE;
    let determinant = m.determinant();

    let mut violations = Vec::new();
    if !trace_preserving {
        violations.push(Violation::NotTracePreserving);
    }
    if !completely_positive {
        violations.push(Violation::NotCompletelyPositive);
    }
    if determinant > 1.0 + NORM_TOLERANCE {
        violations.push(Violation::DeterminantAboveOne);
    }
    if spectral_norm > sqrt(d) + NORM_TOLERANCE {
        violations.push(Violation::SpectralNormAboveSqrtD);
    }
    if spectral_radius > 1.0 + NORM_TOLERANCE {
        violations.push(Violation::SpectralRadiusAboveOne);
    }
    if alpha_norm > sqrt(d - 1.0) + NORM_TOLERANCE {
        violations.push(Violation::NonunitalNormAboveBound);
    }
    if unital && (spectral_norm - 1.0).abs() > NORM_TOLERANCE {
        violations.push(Violation::UnitalNormNotOne);
    }
    ValidationReport {
        trace_preserving,
        completely_positive,
        unital,
        min_choi_eigenvalue,
        spectral_norm,
        spectral_radius,
        alpha_norm,
        determinant,
        violations,
    }
}
