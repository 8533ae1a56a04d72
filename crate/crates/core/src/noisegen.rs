//! Parametric noise channels, random channel samplers and schedule builders.
//!
//! Samplers take an explicit generator; use [`crate::rng::auxiliary_rng`] for
//! reproducible streams.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::liouville::{LinearMap, QuantumChannel};
use crate::math::{acos, cos, sin, sqrt};
use crate::rbsim::NoiseSchedule;
use crate::{CMatrix, Complex64, Error, RMatrix, RVector, Result};

/// Retry cap for every rejection loop in this module.
pub const MAX_ATTEMPTS: usize = 10_000;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Qubit depolarizing channel with unital block `p 1`; CP for `-1/3 <= p <= 1`.
pub fn depolarizing(p: f64) -> Result<QuantumChannel> {
    depolarizing_qudit(2, p)
}

/// `d`-dimensional depolarizing channel with unital block `p 1`.
pub fn depolarizing_qudit(d: usize, p: f64) -> Result<QuantumChannel> {
    if d < 2 || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("depolarizing(d = {d}, p = {p})")));
    }
    let n = d * d;
    let mut diag = vec![p; n];
    diag[0] = 1.0;
    QuantumChannel::new(d, RMatrix::from_diagonal(&RVector::from_vec(diag)))
}

/// Amplitude damping toward `|0>`: `diag(1, sqrt g, sqrt g, g)` with `1 - g` in
/// the first column of the `Z` row. `g = 1` is the identity.
pub fn amplitude_damping(g: f64) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&g) {
        return Err(Error::InvalidParameter(format!("damping g = {g} outside [0, 1]")));
    }
    let sg = sqrt(g);
    QuantumChannel::from_row_major(
        2,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, sg, 0.0, 0.0, //
            0.0, 0.0, sg, 0.0, //
            1.0 - g, 0.0, 0.0, g,
        ],
    )
}

/// `rho -> (1 - px - py - pz) rho + px X rho X + py Y rho Y + pz Z rho Z`.
pub fn pauli_channel(px: f64, py: f64, pz: f64) -> Result<QuantumChannel> {
    if px < 0.0 || py < 0.0 || pz < 0.0 || px + py + pz > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "Pauli probabilities ({px}, {py}, {pz})"
        )));
    }
    let diag = vec![
        1.0,
        1.0 - 2.0 * (py + pz),
        1.0 - 2.0 * (px + pz),
        1.0 - 2.0 * (px + py),
    ];
    QuantumChannel::new(2, RMatrix::from_diagonal(&RVector::from_vec(diag)))
}

/// `exp(-i angle/2 n·sigma)` for a unit axis `n`.
pub fn rotation_unitary(axis: [f64; 3], angle: f64) -> Result<CMatrix> {
    let norm = sqrt(axis.iter().map(|x| x * x).sum());
    if !(norm > 0.0) || !angle.is_finite() {
        return Err(Error::InvalidParameter(format!("rotation axis {axis:?}, angle {angle}")));
    }
    let [x, y, z] = axis.map(|a| a / norm);
    let (co, si) = (cos(angle / 2.0), sin(angle / 2.0));
    Ok(CMatrix::from_row_slice(
        2,
        2,
        &[
            c(co, -si * z),
            c(-si * y, -si * x),
            c(si * y, -si * x),
            c(co, si * z),
        ],
    ))
}

/// Coherent over-rotation by `angle` about `axis`.
pub fn overrotation(axis: [f64; 3], angle: f64) -> Result<QuantumChannel> {
    QuantumChannel::from_unitary(&rotation_unitary(axis, angle)?)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn ginibre<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| c(gaussian(rng), gaussian(rng)) / sqrt(2.0))
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(d, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let x = r[(i, i)];
            if x.norm() > 0.0 {
                x / x.norm()
            } else {
                c(1.0, 0.0)
            }
        } else {
            c(0.0, 0.0)
        }
    });
    q * phases
}

/// Random CPTP map with `d^2` Ginibre Kraus operators normalized by `S^{-1/2}`,
/// `S = sum_i G_i^† G_i`.
pub fn random_channel<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<QuantumChannel> {
    let gs: Vec<CMatrix> = (0..d * d).map(|_| ginibre(d, rng)).collect();
    let mut s = CMatrix::zeros(d, d);
    for g in &gs {
        s += g.adjoint() * g;
    }
    let s = (&s + s.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(s);
    if eig.eigenvalues.min() <= 0.0 {
        return Err(Error::Numerical("singular Kraus normalization".into()));
    }
    let inv_sqrt = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| c(1.0 / sqrt(l), 0.0)));
    let root = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.adjoint();
    let kraus: Vec<CMatrix> = gs.iter().map(|g| g * &root).collect();
    QuantumChannel::from_kraus(&kraus)
}

fn random_axis<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v = [gaussian(rng), gaussian(rng), gaussian(rng)];
        if v.iter().map(|x| x * x).sum::<f64>() > 1e-12 {
            return v;
        }
    }
}

/// Mixture of `terms` qubit rotations about random axes with angles uniform in
/// `[0, max_angle]` and uniformly distributed weights. Unital, and nonunitary
/// whenever two of the rotations differ.
pub fn random_unital_qubit<R: Rng + ?Sized>(
    max_angle: f64,
    terms: usize,
    rng: &mut R,
) -> Result<QuantumChannel> {
    if terms == 0 || !(max_angle > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "unital mixture with {terms} terms, max angle {max_angle}"
        )));
    }
    let weights = simplex_point(terms, 1.0, rng);
    let mut m = RMatrix::zeros(4, 4);
    for w in weights {
        let angle = rng.random_range(0.0..=max_angle);
        m += overrotation(random_axis(rng), angle)?.matrix() * w;
    }
    for k in 0..4 {
        m[(0, k)] = if k == 0 { 1.0 } else { 0.0 };
        m[(k, 0)] = if k == 0 { 1.0 } else { 0.0 };
    }
    QuantumChannel::new(2, m)
}

/// Pauli channel with each probability uniform in `[0, p_max]`.
pub fn random_pauli_channel<R: Rng + ?Sized>(p_max: f64, rng: &mut R) -> Result<QuantumChannel> {
    if !(p_max > 0.0 && p_max <= 1.0 / 3.0) {
        return Err(Error::InvalidParameter(format!("p_max = {p_max}")));
    }
    let mut p = || rng.random_range(0.0..=p_max);
    let (px, py, pz) = (p(), p(), p());
    pauli_channel(px, py, pz)
}

/// Uniform point on `{x_i >= 0, sum x_i = total}`.
fn simplex_point<R: Rng + ?Sized>(n: usize, total: f64, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -crate::math::ln(1.0 - rng.random::<f64>())).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|x| total * x / s).collect()
}

/// Haar-random rotation in SO(3) from a uniform unit quaternion.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    let q = loop {
        let q = [gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng)];
        let n = sqrt(q.iter().map(|x| x * x).sum());
        if n > 1e-12 {
            break q.map(|x| x / n);
        }
    };
    let [w, x, y, z] = q;
    Matrix3::new(
        1.0 - 2.0 * (y * y + z * z),
        2.0 * (x * y - w * z),
        2.0 * (x * z + w * y),
        2.0 * (x * y + w * z),
        1.0 - 2.0 * (x * x + z * z),
        2.0 * (y * z - w * x),
        2.0 * (x * z - w * y),
        2.0 * (y * z + w * x),
        1.0 - 2.0 * (x * x + y * y),
    )
}

/// Rodrigues rotation by `theta` about the unit axis `n`.
fn axis_rotation(n: Vector3<f64>, theta: f64) -> Matrix3<f64> {
    let k = Matrix3::new(0.0, -n[2], n[1], n[2], 0.0, -n[0], -n[1], n[0], 0.0);
    Matrix3::identity() * cos(theta) + k * sin(theta) + n * n.transpose() * (1.0 - cos(theta))
}

/// Parameters of the qubit channel
/// `(1 ⊕ U) [[1, 0], [t e_3, diag(w)]] (1 ⊕ U^T) (1 ⊕ V)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExtremalChannelSpec {
    pub w: [f64; 3],
    pub t: f64,
    pub u: Matrix3<f64>,
    pub v: Matrix3<f64>,
}

impl ExtremalChannelSpec {
    /// `|t| + |w_3| <= 1` and `(w_j ± w_k)^2 <= (1 ± w_l)^2` for all permutations.
    pub fn satisfies_cp_conditions(&self, tol: f64) -> bool {
        let [w1, w2, w3] = self.w;
        if self.t.abs() + w3.abs() > 1.0 + tol {
            return false;
        }
        [(w1, w2, w3), (w1, w3, w2), (w2, w3, w1)].iter().all(|&(a, b, l)| {
            (a + b) * (a + b) <= (1.0 + l) * (1.0 + l) + tol
                && (a - b) * (a - b) <= (1.0 - l) * (1.0 - l) + tol
        })
    }

    pub fn matrix(&self) -> RMatrix {
        let mut core = RMatrix::zeros(4, 4);
        core[(0, 0)] = 1.0;
        for j in 0..3 {
            core[(j + 1, j + 1)] = self.w[j];
        }
        core[(3, 0)] = self.t;
        let lift = |r: &Matrix3<f64>| {
            let mut m = RMatrix::identity(4, 4);
            for i in 0..3 {
                for j in 0..3 {
                    m[(i + 1, j + 1)] = r[(i, j)];
                }
            }
            m
        };
        lift(&self.u) * core * lift(&self.u.transpose()) * lift(&self.v)
    }

    pub fn to_channel(&self) -> Result<QuantumChannel> {
        QuantumChannel::new(2, self.matrix())
    }
}

/// Largest `|t|` keeping the channel CP, by bisection on the Choi spectrum.
fn max_nonunital(spec: &ExtremalChannelSpec) -> f64 {
    let cp = |t: f64| {
        let s = ExtremalChannelSpec { t, ..spec.clone() };
        LinearMap::new(2, s.matrix())
            .map(|m| m.to_choi().min_eigenvalue() >= 0.0)
            .unwrap_or(false)
    };
    let hi0 = 1.0 - spec.w[2].abs();
    if cp(hi0) {
        return hi0;
    }
    let (mut lo, mut hi) = (0.0, hi0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if cp(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Samples an extremal-form qubit channel with infidelity `r <= r_max`.
///
/// Measure: `r` uniform in `(0, r_max]`; a split `u` uniform in `[0, 1]` sends
/// a fraction `1 - u` of the infidelity into the singular values
/// `w_j = 1 - delta_j r` with `delta` uniform on `{sum delta = 6(1 - u)}`
/// (rejecting draws that violate `|delta_j - delta_k| <= delta_l`); `t` is
/// uniform on the CP-feasible interval; `U` is Haar on SO(3); `V` is a rotation
/// about a uniformly random axis whose angle is fixed so that the infidelity is
/// exactly `r`. `V` is therefore not Haar: a Haar `V` would almost never give a
/// small infidelity.
pub fn sample_extremal_spec<R: Rng + ?Sized>(r_max: f64, rng: &mut R) -> Result<ExtremalChannelSpec> {
    if !(r_max > 0.0 && r_max < 1.0 / 3.0) {
        return Err(Error::InvalidParameter(format!("r_max = {r_max} outside (0, 1/3)")));
    }
    for _ in 0..MAX_ATTEMPTS {
        let r = r_max * (1.0 - rng.random::<f64>());
        let split: f64 = rng.random();
        let delta = simplex_point(3, 6.0 * (1.0 - split), rng);
        let ok = [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
            .iter()
            .all(|&(j, k, l)| (delta[j] - delta[k]).abs() <= delta[l]);
        if !ok {
            continue;
        }
        let w = [1.0 - delta[0] * r, 1.0 - delta[1] * r, 1.0 - delta[2] * r];
        let u = random_rotation(rng);
        let mut spec = ExtremalChannelSpec {
            w,
            t: 0.0,
            u,
            v: Matrix3::identity(),
        };
        let t_max = max_nonunital(&spec);
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        spec.t = sign * t_max * rng.random::<f64>();

        let m = u * Matrix3::from_diagonal(&Vector3::from(w)) * u.transpose();
        let axis = Vector3::from(random_axis(rng)).normalize();
        let nmn = (axis.transpose() * m * axis)[(0, 0)];
        let target = 3.0 - 6.0 * r;
        let tr = m.trace();
        let cos_theta = if tr - nmn > 0.0 { (target - nmn) / (tr - nmn) } else { 1.0 };
        if !(-1.0..=1.0).contains(&cos_theta) {
            continue;
        }
        spec.v = axis_rotation(axis, acos(cos_theta));
        if !spec.satisfies_cp_conditions(1e-12) {
            continue;
        }
        let ch = match spec.to_channel() {
            Ok(ch) => ch,
            Err(_) => continue,
        };
        if ch.infidelity() <= r_max * (1.0 + 1e-9) {
            return Ok(spec);
        }
    }
    Err(Error::Numerical(format!(
        "extremal sampler exceeded {MAX_ATTEMPTS} attempts"
    )))
}

/// Channel drawn by [`sample_extremal_spec`].
pub fn sample_extremal<R: Rng + ?Sized>(r_max: f64, rng: &mut R) -> Result<QuantumChannel> {
    sample_extremal_spec(r_max, rng)?.to_channel()
}

/// Time-independent schedule.
pub fn schedule_constant(c: QuantumChannel) -> NoiseSchedule {
    NoiseSchedule::constant(c)
}

/// `channels[t - 1]` at step `t`.
pub fn schedule_tabular(channels: Vec<QuantumChannel>) -> Result<NoiseSchedule> {
    NoiseSchedule::tabular(channels)
}

/// `first` for steps `1..=switch`, `second` afterwards, up to `horizon`.
pub fn schedule_two_phase(
    first: QuantumChannel,
    second: QuantumChannel,
    switch: usize,
    horizon: usize,
) -> Result<NoiseSchedule> {
    NoiseSchedule::tabular(
        (1..=horizon)
            .map(|t| if t <= switch { first.clone() } else { second.clone() })
            .collect(),
    )
}

/// `Lambda_t = R_z(theta_t) base` with `theta_t` uniform in
/// `[-amplitude, amplitude]`, for `t = 1..=horizon`: a fluctuating field along z
/// on top of fixed noise.
pub fn schedule_fluctuating<R: Rng + ?Sized>(
    base: &QuantumChannel,
    amplitude: f64,
    horizon: usize,
    rng: &mut R,
) -> Result<NoiseSchedule> {
    if base.dim() != 2 || !(amplitude >= 0.0) || horizon == 0 {
        return Err(Error::InvalidParameter(format!(
            "fluctuating schedule (d = {}, amplitude = {amplitude}, horizon = {horizon})",
            base.dim()
        )));
    }
    let channels = (0..horizon)
        .map(|_| {
            let theta = if amplitude > 0.0 {
                rng.random_range(-amplitude..=amplitude)
            } else {
                0.0
            };
            overrotation([0.0, 0.0, 1.0], theta)?.compose(base)
        })
        .collect::<Result<Vec<_>>>()?;
    NoiseSchedule::tabular(channels)
}

/// Gate-dependent version of `base` with perturbations of strength `epsilon`.
///
/// Gates are paired `(0, 1), (2, 3), ...`; each pair gets `+D` and `-D` with
/// `D = (K - Lambda_t) / ||K - Lambda_t||_inf` for a random channel `K`, so the
/// perturbations average to zero over the gates and have unit norm. An unpaired
/// last gate gets no perturbation. Draws are repeated until both
/// `Lambda_t ± epsilon D` are CP, which needs a full-rank Choi matrix for
/// `Lambda_t` once `epsilon > 0`.
pub fn perturb_gate_dependent<R: Rng + ?Sized>(
    base: &NoiseSchedule,
    epsilon: f64,
    n_gates: usize,
    rng: &mut R,
) -> Result<NoiseSchedule> {
    if n_gates == 0 {
        return Err(Error::InvalidParameter("no gates to perturb".into()));
    }
    let base = base.without_gate_dependence();
    let mut deltas = Vec::with_capacity(base.base_channels().len());
    for lambda in base.base_channels() {
        let d = lambda.dim();
        let mut row = vec![LinearMap::zero(d); n_gates];
        for pair in 0..n_gates / 2 {
            let mut found = None;
            for _ in 0..MAX_ATTEMPTS / 100 {
                let k = random_channel(d, rng)?;
                let diff = k.matrix() - lambda.matrix();
                let norm = diff.singular_values().max();
                if norm <= 0.0 {
                    continue;
                }
                let dm = diff / norm;
                let plus = LinearMap::new(d, lambda.matrix() + &dm * epsilon)?;
                let minus = LinearMap::new(d, lambda.matrix() - &dm * epsilon)?;
                if plus.to_choi().min_eigenvalue() >= 0.0 && minus.to_choi().min_eigenvalue() >= 0.0 {
                    found = Some(dm);
                    break;
                }
            }
            let dm = found.ok_or_else(|| {
                Error::Physicality(format!(
                    "no CP-preserving perturbation of strength {epsilon} found; the base channel may be extremal"
                ))
            })?;
            row[2 * pair] = LinearMap::new(d, dm.clone())?;
            row[2 * pair + 1] = LinearMap::new(d, -dm)?;
        }
        deltas.push(row);
    }
    base.with_gate_dependence(epsilon, deltas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::auxiliary_rng;
    use crate::stats::nonunital_check;

    #[test]
    fn parametric_channels() {
        assert_eq!(depolarizing(1.0).unwrap(), QuantumChannel::identity(2));
        assert!((depolarizing(0.98).unwrap().infidelity() - 0.01).abs() < 1e-15);
        assert_eq!(amplitude_damping(1.0).unwrap(), QuantumChannel::identity(2));
        let reset = amplitude_damping(0.0).unwrap();
        let out = reset.apply(&crate::liouville::StateVector::basis_state(2, 1).unwrap()).unwrap();
        assert_eq!(out, crate::liouville::StateVector::basis_state(2, 0).unwrap());
        assert_eq!(pauli_channel(0.0, 0.0, 0.0).unwrap(), QuantumChannel::identity(2));
        let p = pauli_channel(0.01, 0.02, 0.03).unwrap();
        let diag: Vec<f64> = (1..4).map(|i| p.matrix()[(i, i)]).collect();
        assert!((diag[0] - 0.9).abs() < 1e-15);
        assert!((diag[1] - 0.92).abs() < 1e-15);
        assert!((diag[2] - 0.94).abs() < 1e-15);
        assert_eq!(overrotation([1.0, 0.0, 0.0], 0.0).unwrap(), QuantumChannel::identity(2));
        assert!(amplitude_damping(1.5).is_err());
        assert!(pauli_channel(0.5, 0.5, 0.5).is_err());
    }

    #[test]
    fn amplitude_damping_closed_forms() {
        for g in [0.0f64, 0.25, 0.9, 0.99] {
            let ad = amplitude_damping(g).unwrap();
            let rep = ad.validate();
            assert!(rep.is_valid(), "{g}: {rep:?}");
            assert!((rep.alpha_norm - (1.0 - g)).abs() < 1e-15);
            assert!((rep.determinant - g * g).abs() < 1e-15);
            assert!((ad.average_fidelity_f() - (2.0 * g.sqrt() + g) / 3.0).abs() < 1e-15);
        }
        // The noise acts differently on X and Z unless g = 1.
        let ad = amplitude_damping(0.5).unwrap();
        assert_ne!(ad.matrix()[(1, 1)], ad.matrix()[(3, 3)]);
    }

    #[test]
    fn overrotation_matches_axis_rotation() {
        let ch = overrotation([0.0, 0.0, 1.0], 0.3).unwrap();
        let rot = axis_rotation(Vector3::new(0.0, 0.0, 1.0), 0.3);
        let phi = ch.phi();
        for i in 0..3 {
            for j in 0..3 {
                assert!((phi[(i, j)] - rot[(i, j)]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn random_channels_are_valid() {
        let mut rng = auxiliary_rng(1, 0);
        for d in [2, 3] {
            for _ in 0..10 {
                assert!(random_channel(d, &mut rng).unwrap().validate().is_valid());
                let u = random_unitary(d, &mut rng);
                assert!((u.adjoint() * &u - CMatrix::identity(d, d)).norm() < 1e-12);
            }
        }
        for _ in 0..10 {
            let ch = random_unital_qubit(0.2, 3, &mut rng).unwrap();
            assert!(ch.validate().is_valid());
            assert!(ch.is_unital(0.0));
            assert!(random_pauli_channel(0.01, &mut rng).unwrap().validate().is_valid());
        }
    }

    #[test]
    fn extremal_samples() {
        let mut rng = auxiliary_rng(2, 0);
        let r_max = 2.69e-4;
        for _ in 0..100 {
            let spec = sample_extremal_spec(r_max, &mut rng).unwrap();
            assert!(spec.satisfies_cp_conditions(1e-12));
            assert!(spec.w[2] > 0.0);
            let ch = spec.to_channel().unwrap();
            assert!(ch.validate().is_valid());
            assert!(ch.infidelity() <= r_max * (1.0 + 1e-9));
            assert!(nonunital_check(&ch).unwrap().passes);
        }
        let spec = ExtremalChannelSpec {
            t: 0.0,
            ..sample_extremal_spec(r_max, &mut rng).unwrap()
        };
        assert!(spec.to_channel().unwrap().is_unital(1e-15));
    }

    #[test]
    fn schedules() {
        let mut rng = auxiliary_rng(3, 0);
        let base = depolarizing(0.99).unwrap();
        let a = schedule_fluctuating(&base, 0.01, 20, &mut auxiliary_rng(3, 1)).unwrap();
        let b = schedule_fluctuating(&base, 0.01, 20, &mut auxiliary_rng(3, 1)).unwrap();
        for t in 1..=20 {
            assert_eq!(a.lambda(t).unwrap(), b.lambda(t).unwrap());
        }
        let two = schedule_two_phase(base.clone(), depolarizing(0.9).unwrap(), 5, 10).unwrap();
        assert_eq!(two.lambda(5).unwrap(), &base);
        assert_ne!(two.lambda(6).unwrap(), &base);
        assert!(two.lambda(11).is_err());

        let pert = perturb_gate_dependent(&schedule_constant(base.clone()), 1e-4, 24, &mut rng).unwrap();
        let mut sum = RMatrix::zeros(4, 4);
        for g in 0..24 {
            let delta = pert.delta(1, g).unwrap();
            assert!(delta.matrix().singular_values().max() <= 1.0 + 1e-12);
            sum += pert.lambda_for_gate(1, g).unwrap().matrix();
        }
        assert!((sum / 24.0 - base.matrix()).amax() < 1e-12);
        let zero = perturb_gate_dependent(&schedule_constant(base.clone()), 0.0, 24, &mut rng).unwrap();
        assert_eq!(zero.lambda_for_gate(1, 3).unwrap(), &base);
        assert!(perturb_gate_dependent(
            &schedule_constant(amplitude_damping(0.9).unwrap()),
            1e-3,
            24,
            &mut rng
        )
        .is_err());
    }
}
