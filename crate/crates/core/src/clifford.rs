//! The single-qubit Clifford group, group twirls and the irrep decomposition of
//! its tensor-square representation on the traceless sector.
//!
//! Group elements are kept as exact signed permutation matrices, so conjugating
//! by them only permutes and negates entries. Averages over the group use an
//! anchored mean (see [`twirl`]), which makes the twirl of an already invariant
//! matrix bit-exact.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::liouville::QuantumChannel;
use crate::math::{anchored_mean, round};
use crate::{CMatrix, Complex64, Error, RMatrix, Result};

/// Modulus threshold for counting unit-modulus eigenvalues.
pub const CONTRACTIVITY_TOLERANCE: f64 = 1e-10;

type Key = Vec<i64>;

fn key_of(m: &RMatrix) -> Key {
    m.iter().map(|&x| round(x * 1e9) as i64).collect()
}

/// A finite group of unitary channels with cached multiplication table,
/// inverses and tensor squares.
#[derive(Debug, Clone)]
pub struct GateSet {
    gates: Vec<QuantumChannel>,
    squares: Vec<RMatrix>,
    products: Vec<usize>,
    inverses: Vec<usize>,
    identity: usize,
    index: BTreeMap<Key, usize>,
}

impl GateSet {
    /// Builds a gate set from an explicit list, checking closure.
    pub fn from_gates(gates: Vec<QuantumChannel>) -> Result<Self> {
        let n = gates.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty gate set".into()));
        }
        let dim = gates[0].dim();
        let mut index = BTreeMap::new();
        for (i, g) in gates.iter().enumerate() {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.dim(),
                });
            }
            if index.insert(key_of(g.matrix()), i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate gate at index {i}")));
            }
        }
        let mut products = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = gates[i].matrix() * gates[j].matrix();
                products[i * n + j] = *index.get(&key_of(&prod)).ok_or_else(|| {
                    Error::InvalidParameter(format!("gate set not closed: g{i} g{j}"))
                })?;
            }
        }
        let id_key = key_of(&RMatrix::identity(dim * dim, dim * dim));
        let identity = *index
            .get(&id_key)
            .ok_or_else(|| Error::InvalidParameter("gate set lacks the identity".into()))?;
        let mut inverses = vec![usize::MAX; n];
        for i in 0..n {
            inverses[i] = (0..n)
                .find(|&j| products[i * n + j] == identity)
                .ok_or_else(|| Error::InvalidParameter(format!("gate {i} has no inverse")))?;
        }
        let squares = gates.iter().map(|g| g.tensor_square()).collect();
        Ok(Self {
            gates,
            squares,
            products,
            inverses,
            identity,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.gates[0].dim()
    }

    pub fn gate(&self, i: usize) -> &QuantumChannel {
        &self.gates[i]
    }

    pub fn gates(&self) -> &[QuantumChannel] {
        &self.gates
    }

    /// `g_i ⊗ g_i`.
    pub fn tensor_square(&self, i: usize) -> &RMatrix {
        &self.squares[i]
    }

    /// Index of `g_i · g_j`.
    pub fn product(&self, i: usize, j: usize) -> usize {
        self.products[i * self.len() + j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    /// Index of a channel in the set, if present.
    pub fn index_of(&self, c: &QuantumChannel) -> Option<usize> {
        self.index.get(&key_of(c.matrix())).copied()
    }

    /// The same group with elements reordered: new element `k` is old `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: perm.len(),
            });
        }
        Self::from_gates(perm.iter().map(|&i| self.gates[i].clone()).collect())
    }
}

fn snap(m: &RMatrix) -> RMatrix {
    m.map(round)
}

/// Generates the 24-element single-qubit Clifford group from the Hadamard and
/// phase channels.
///
/// Elements are listed in descending lexicographic order of their row-major
/// Liouville matrices, which puts the identity first.
pub fn build_clifford_1q() -> Result<GateSet> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let h = CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
    let p = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
    let generators = [
        snap(QuantumChannel::from_unitary(&h)?.matrix()),
        snap(QuantumChannel::from_unitary(&p)?.matrix()),
    ];

    let mut elements: Vec<RMatrix> = vec![RMatrix::identity(4, 4)];
    let mut seen: BTreeMap<Key, ()> = BTreeMap::new();
    seen.insert(key_of(&elements[0]), ());
    let mut frontier = 0;
    while frontier < elements.len() {
        if elements.len() > 24 {
            return Err(Error::Internal("Clifford closure exceeded 24 elements".into()));
        }
        let current = elements[frontier].clone();
        frontier += 1;
        for g in &generators {
            let next = g * &current;
            if seen.insert(key_of(&next), ()).is_none() {
                elements.push(next);
            }
        }
    }
    if elements.len() != 24 {
        return Err(Error::Internal(format!(
            "Clifford closure produced {} elements",
            elements.len()
        )));
    }
    let row_major = |m: &RMatrix| -> Vec<f64> { m.transpose().iter().copied().collect() };
    elements.sort_by(|a, b| {
        row_major(b)
            .partial_cmp(&row_major(a))
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let gates = elements
        .into_iter()
        .map(|m| QuantumChannel::new(2, m))
        .collect::<Result<Vec<_>>>()?;
    GateSet::from_gates(gates)
}

fn group_average(a: &RMatrix, reps: &[&RMatrix], invs: &[&RMatrix]) -> RMatrix {
    let conj: Vec<RMatrix> = reps.iter().zip(invs).map(|(g, gi)| *g * a * *gi).collect();
    let n = conj.len();
    RMatrix::from_fn(a.nrows(), a.ncols(), |r, c| {
        anchored_mean(conj.iter().map(|m| m[(r, c)]), a[(r, c)], n)
    })
}

/// Group twirl `|G|^-1 sum_g g A g^-1` of a `d^2 x d^2` matrix.
///
/// The mean is anchored at `A` itself, so a twirl-invariant input is returned
/// unchanged bit for bit.
pub fn twirl(a: &RMatrix, group: &GateSet) -> Result<RMatrix> {
    let n = group.dim() * group.dim();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.nrows(),
        });
    }
    let reps: Vec<&RMatrix> = group.gates.iter().map(|g| g.matrix()).collect();
    let invs: Vec<&RMatrix> = group
        .inverses
        .iter()
        .map(|&i| group.gates[i].matrix())
        .collect();
    Ok(group_average(a, &reps, &invs))
}

/// Twirl of a channel, returned as a channel.
pub fn twirl_channel(c: &QuantumChannel, group: &GateSet) -> Result<QuantumChannel> {
    QuantumChannel::new(c.dim(), twirl(c.matrix(), group)?)
}

/// `|G|^-1 sum_g g^{⊗2} (C ⊗ C) (g^-1)^{⊗2}`.
pub fn tensor_twirl(c: &QuantumChannel, group: &GateSet) -> Result<RMatrix> {
    tensor_twirl_matrix(&c.tensor_square(), group)
}

/// Tensor-square twirl of an arbitrary `d^4 x d^4` matrix.
pub fn tensor_twirl_matrix(a: &RMatrix, group: &GateSet) -> Result<RMatrix> {
    let n = group.dim().pow(4);
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.nrows(),
        });
    }
    let reps: Vec<&RMatrix> = group.squares.iter().collect();
    let invs: Vec<&RMatrix> = group.inverses.iter().map(|&i| &group.squares[i]).collect();
    Ok(group_average(a, &reps, &invs))
}

/// Indices of the `A ⊗ A` block (traceless ⊗ traceless) in a qubit tensor square,
/// ordered `(j, k)` row-major with `j, k` in `x, y, z`.
pub fn aa_indices() -> [usize; 9] {
    let mut out = [0; 9];
    for j in 0..3 {
        for k in 0..3 {
            out[j * 3 + k] = (j + 1) * 4 + (k + 1);
        }
    }
    out
}

/// Extracts the `A ⊗ A` block of a 16 x 16 matrix.
pub fn aa_block(m: &RMatrix) -> RMatrix {
    let idx = aa_indices();
    RMatrix::from_fn(9, 9, |r, c| m[(idx[r], idx[c])])
}

/// The blocks of a twirled qubit tensor square that map `1 ⊗ A` and `A ⊗ 1`
/// into `A ⊗ A`, each 9 x 3.
pub fn cross_blocks(m: &RMatrix) -> (RMatrix, RMatrix) {
    let idx = aa_indices();
    let one_a = RMatrix::from_fn(9, 3, |r, c| m[(idx[r], c + 1)]);
    let a_one = RMatrix::from_fn(9, 3, |r, c| m[(idx[r], (c + 1) * 4)]);
    (one_a, a_one)
}

/// Orthogonal projectors onto the four irreps of `g ⊗ g` on the 9-dimensional
/// `A ⊗ A` sector: trivial, two-dimensional, antisymmetric and symmetric
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrepProjectors {
    pub p1: RMatrix,
    pub p2: RMatrix,
    pub ps: RMatrix,
    pub pt: RMatrix,
}

impl IrrepProjectors {
    pub fn all(&self) -> [&RMatrix; 4] {
        [&self.p1, &self.p2, &self.ps, &self.pt]
    }
}

/// `sum_v v v^T / |v|^2` for mutually orthogonal integer vectors, with each entry
/// formed as one integer over the common denominator so that products of
/// different projectors cancel exactly.
fn projector_from(vectors: &[[i64; 9]]) -> RMatrix {
    let norms: Vec<i64> = vectors.iter().map(|v| v.iter().map(|x| x * x).sum()).collect();
    let common: i64 = norms.iter().product();
    let mut p = RMatrix::zeros(9, 9);
    for r in 0..9 {
        for c in 0..9 {
            let num: i64 = vectors
                .iter()
                .zip(&norms)
                .map(|(v, n)| v[r] * v[c] * (common / n))
                .sum();
            p[(r, c)] = num as f64 / common as f64;
        }
    }
    p
}

/// Projectors built from the operator bases
/// `XX+YY+ZZ`; `XX-YY`, `XX+YY-2ZZ`; `XY-YX`, `XZ-ZX`, `YZ-ZY`; `XY+YX`, `XZ+ZX`, `YZ+ZY`.
pub fn irrep_projectors() -> IrrepProjectors {
    let e = |pairs: &[(usize, usize, i64)]| {
        let mut v = [0i64; 9];
        for &(j, k, w) in pairs {
            v[j * 3 + k] += w;
        }
        v
    };
    let (x, y, z) = (0, 1, 2);
    IrrepProjectors {
        p1: projector_from(&[e(&[(x, x, 1), (y, y, 1), (z, z, 1)])]),
        p2: projector_from(&[
            e(&[(x, x, 1), (y, y, -1)]),
            e(&[(x, x, 1), (y, y, 1), (z, z, -2)]),
        ]),
        ps: projector_from(&[
            e(&[(x, y, 1), (y, x, -1)]),
            e(&[(x, z, 1), (z, x, -1)]),
            e(&[(y, z, 1), (z, y, -1)]),
        ]),
        pt: projector_from(&[
            e(&[(x, y, 1), (y, x, 1)]),
            e(&[(x, z, 1), (z, x, 1)]),
            e(&[(y, z, 1), (z, y, 1)]),
        ]),
    }
}

/// Eigenvalues of `(phi ⊗ phi)` twirled over the Clifford group, one per irrep.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IrrepEigenvalues {
    pub l1: f64,
    pub l2: f64,
    pub ls: f64,
    pub lt: f64,
}

fn check_phi(phi: &RMatrix) -> Result<()> {
    if phi.nrows() != 3 || phi.ncols() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: phi.nrows().max(phi.ncols()),
        });
    }
    Ok(())
}

/// Closed forms for `l1`, `l2`, `lt`; `ls` by projection onto the antisymmetric irrep.
pub fn irrep_eigenvalues(phi: &RMatrix) -> Result<IrrepEigenvalues> {
    check_phi(phi)?;
    let frob = phi.norm_squared();
    let diag_sq: f64 = (0..3).map(|j| phi[(j, j)] * phi[(j, j)]).sum();
    let tr = phi.trace();
    let tr_sq = (phi * phi).trace();
    let ps = irrep_projectors().ps;
    Ok(IrrepEigenvalues {
        l1: frob / 3.0,
        l2: 0.5 * diag_sq - frob / 6.0,
        ls: (&ps * phi.kronecker(phi)).trace() / 3.0,
        lt: tr_sq / 6.0 + tr * tr / 6.0 - diag_sq / 3.0,
    })
}

/// `Tr(P_R phi⊗2) / Tr P_R` for every irrep.
pub fn projected_eigenvalues(phi: &RMatrix) -> Result<IrrepEigenvalues> {
    check_phi(phi)?;
    let p = irrep_projectors();
    let sq = phi.kronecker(phi);
    let ev = |pr: &RMatrix| (pr * &sq).trace() / pr.trace();
    Ok(IrrepEigenvalues {
        l1: ev(&p.p1),
        l2: ev(&p.p2),
        ls: ev(&p.ps),
        lt: ev(&p.pt),
    })
}

/// Number of eigenvalues of the tensor-square twirl with modulus at least
/// `1 - CONTRACTIVITY_TOLERANCE`. A channel is 2-contractive iff this is 1.
pub fn contractivity_count(c: &QuantumChannel, group: &GateSet) -> Result<usize> {
    let t = tensor_twirl(c, group)?;
    Ok(t.complex_eigenvalues()
        .iter()
        .filter(|z| z.norm() >= 1.0 - CONTRACTIVITY_TOLERANCE)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RVector;
    use approx::assert_abs_diff_eq;

    fn depolarizing(p: f64) -> QuantumChannel {
        QuantumChannel::new(2, RMatrix::from_diagonal(&RVector::from_vec(vec![1.0, p, p, p])))
            .unwrap()
    }

    fn amplitude_damping(g: f64) -> QuantumChannel {
        let sg = g.sqrt();
        QuantumChannel::from_row_major(
            2,
            &[
                1.0, 0.0, 0.0, 0.0, 0.0, sg, 0.0, 0.0, 0.0, 0.0, sg, 0.0, 1.0 - g, 0.0, 0.0, g,
            ],
        )
        .unwrap()
    }

    #[test]
    fn group_has_24_signed_permutations() {
        let g = build_clifford_1q().unwrap();
        assert_eq!(g.len(), 24);
        assert_eq!(g.identity_index(), 0);
        for ch in g.gates() {
            let phi = ch.phi();
            for r in 0..3 {
                let nz: Vec<f64> = phi.row(r).iter().copied().filter(|&x| x != 0.0).collect();
                assert_eq!(nz.len(), 1);
                assert!(nz[0] == 1.0 || nz[0] == -1.0);
            }
            assert_abs_diff_eq!(phi.determinant(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn character_statistics() {
        let g = build_clifford_1q().unwrap();
        let chars: Vec<f64> = g.gates().iter().map(|c| c.phi().trace()).collect();
        assert_eq!(chars.iter().filter(|c| c.abs() == 3.0).count(), 1);
        assert_eq!(chars.iter().filter(|c| **c == 0.0).count(), 8);
        assert_eq!(chars.iter().filter(|c| c.abs() == 1.0).count(), 15);
        let sum = g
            .gates()
            .iter()
            .fold(RMatrix::zeros(3, 3), |acc, c| acc + c.phi());
        assert_eq!(sum, RMatrix::zeros(3, 3));
    }

    #[test]
    fn multiplication_table_is_consistent() {
        let g = build_clifford_1q().unwrap();
        for i in 0..24 {
            assert_eq!(g.product(i, g.inverse(i)), 0);
            for j in 0..24 {
                let prod = g.gate(i).matrix() * g.gate(j).matrix();
                assert_eq!(&prod, g.gate(g.product(i, j)).matrix());
            }
        }
    }

    #[test]
    fn twirl_examples() {
        let g = build_clifford_1q().unwrap();
        let id = RMatrix::identity(4, 4);
        assert_eq!(twirl(&id, &g).unwrap(), id);
        let dep = depolarizing(0.97);
        assert_eq!(&twirl(dep.matrix(), &g).unwrap(), dep.matrix());
        let gamma: f64 = 0.81;
        let t = twirl(amplitude_damping(gamma).matrix(), &g).unwrap();
        let f = (2.0 * gamma.sqrt() + gamma) / 3.0;
        let expected = RMatrix::from_diagonal(&RVector::from_vec(vec![1.0, f, f, f]));
        assert_abs_diff_eq!((t - expected).amax(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn traceless_blocks_twirl_to_multiples_of_identity() {
        let g = build_clifford_1q().unwrap();
        let mut a = RMatrix::zeros(4, 4);
        a[(1, 2)] = 0.3;
        a[(3, 1)] = -1.1;
        a[(2, 2)] = 0.6;
        a[(3, 3)] = 0.9;
        let t = twirl(&a, &g).unwrap();
        let expected = RMatrix::from_diagonal(&RVector::from_vec(vec![0.0, 0.5, 0.5, 0.5]));
        assert_abs_diff_eq!((t - expected).amax(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn tensor_twirl_examples() {
        let g = build_clifford_1q().unwrap();
        let t = tensor_twirl(&QuantumChannel::identity(2), &g).unwrap();
        assert_eq!(t, RMatrix::identity(16, 16));
        let p: f64 = 0.9;
        let t = tensor_twirl(&depolarizing(p), &g).unwrap();
        assert_abs_diff_eq!((aa_block(&t) - RMatrix::identity(9, 9) * (p * p)).amax(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn projectors_structure() {
        let p = irrep_projectors();
        let traces: Vec<f64> = p.all().iter().map(|m| m.trace()).collect();
        assert_eq!(traces, vec![1.0, 2.0, 3.0, 3.0]);
        let sum = p.all().iter().fold(RMatrix::zeros(9, 9), |acc, m| acc + *m);
        assert_abs_diff_eq!((sum - RMatrix::identity(9, 9)).amax(), 0.0, epsilon = 1e-15);
        for (i, a) in p.all().iter().enumerate() {
            assert_abs_diff_eq!((*a * *a - *a).amax(), 0.0, epsilon = 1e-15);
            assert_eq!(a.transpose(), **a);
            for b in p.all().iter().skip(i + 1) {
                assert_abs_diff_eq!((*a * *b).amax(), 0.0, epsilon = 1e-15);
            }
        }
        // P1 = u u^T with u = (xx + yy + zz)/sqrt(3).
        for r in 0..9 {
            for c in 0..9 {
                let diag = |i: usize| i.is_multiple_of(4);
                let expected = if diag(r) && diag(c) { 1.0 / 3.0 } else { 0.0 };
                assert_abs_diff_eq!(p.p1[(r, c)], expected, epsilon = 1e-16);
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let ev = irrep_eigenvalues(&RMatrix::identity(3, 3)).unwrap();
        assert_eq!((ev.l1, ev.l2, ev.lt), (1.0, 1.0, 1.0));
        assert_abs_diff_eq!(ev.ls, 1.0, epsilon = 1e-15);
        let p = 0.7;
        let ev = irrep_eigenvalues(&(RMatrix::identity(3, 3) * p)).unwrap();
        for l in [ev.l1, ev.l2, ev.ls, ev.lt] {
            assert_abs_diff_eq!(l, p * p, epsilon = 1e-15);
        }
        let (a, b, c) = (0.9, -0.4, 0.75);
        let phi = RMatrix::from_diagonal(&RVector::from_vec(vec![a, b, c]));
        let ev = irrep_eigenvalues(&phi).unwrap();
        let pr = projected_eigenvalues(&phi).unwrap();
        let x = (a * a + b * b + c * c) / 3.0;
        for l in [ev.l1, ev.l2, pr.l1, pr.l2] {
            assert_abs_diff_eq!(l, x, epsilon = 1e-15);
        }
        assert!(irrep_eigenvalues(&RMatrix::identity(4, 4)).is_err());
    }

    #[test]
    fn contractivity_examples() {
        let g = build_clifford_1q().unwrap();
        assert!(contractivity_count(&QuantumChannel::identity(2), &g).unwrap() >= 2);
        assert_eq!(contractivity_count(&depolarizing(0.99), &g).unwrap(), 1);
        assert_eq!(contractivity_count(&amplitude_damping(0.9), &g).unwrap(), 1);
        assert_eq!(contractivity_count(&amplitude_damping(0.0), &g).unwrap(), 1);
    }

    #[test]
    fn permuted_group_keeps_structure() {
        let g = build_clifford_1q().unwrap();
        let perm: Vec<usize> = (0..24).rev().collect();
        let h = g.permuted(&perm).unwrap();
        assert_eq!(h.identity_index(), 23);
        let ad = amplitude_damping(0.5);
        assert_abs_diff_eq!(
            (tensor_twirl(&ad, &g).unwrap() - tensor_twirl(&ad, &h).unwrap()).amax(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn non_group_is_rejected() {
        let g = build_clifford_1q().unwrap();
        let partial = g.gates()[..5].to_vec();
        assert!(GateSet::from_gates(partial).is_err());
    }
}
