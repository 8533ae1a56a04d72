//! Constrained least-squares fit of `F_m = A + B f^m`.
//!
//! The fit profiles out the linear parameters: for fixed `f`, `(A, B)` solve a
//! two-variable quadratic program over `A, B >= 0`, `A + B <= 1`. The profile
//! cost is scanned on a log grid in `kappa = -ln f`, refined by golden-section
//! search and finally polished with damped Gauss-Newton steps on all three
//! parameters.

use alloc::format;
use alloc::vec::Vec;

use nalgebra::{Matrix3, Vector3};

use super::bounds::qubit_variance_bound;
use crate::math::{exp, ln, powi, sqrt};
use crate::{Error, Result};

const FEASIBILITY_TOLERANCE: f64 = 1e-12;

/// Mean survival estimate at length `m` with its least-squares weight.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayPoint {
    pub m: usize,
    pub value: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub f: f64,
    /// One-standard-deviation uncertainties from the inverse Gauss-Newton
    /// Hessian; infinite when a parameter is not identifiable.
    pub sigma_a: f64,
    pub sigma_b: f64,
    pub sigma_f: f64,
    /// `sqrt(sum_i w_i (y_i - A - B f^m_i)^2)`.
    pub residual_norm: f64,
    /// Set when all values coincide and `f` cannot be identified; the fit then
    /// reports `f = 1`, `A = 0`, `B` equal to the common value.
    pub degenerate: bool,
}

impl FitResult {
    /// `r = (d - 1)(1 - f)/d`.
    pub fn infidelity(&self, d: usize) -> f64 {
        let d = d as f64;
        (d - 1.0) * (1.0 - self.f) / d
    }

    pub fn sigma_infidelity(&self, d: usize) -> f64 {
        let d = d as f64;
        (d - 1.0) * self.sigma_f / d
    }
}

/// Whether weights are inverse variances (`absolute`) or only relative, in
/// which case the covariance is rescaled by the reduced chi-square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FitOptions {
    pub absolute_weights: bool,
}

/// Weights `1 / qubit_variance_bound(m, r, delta)`; uniform when the bound vanishes.
pub fn default_weights(lengths: &[usize], r: f64, delta_spam: f64) -> Vec<f64> {
    lengths
        .iter()
        .map(|&m| {
            let v = qubit_variance_bound(m, r, delta_spam);
            if v > 0.0 {
                1.0 / v
            } else {
                1.0
            }
        })
        .collect()
}

struct Data {
    m: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
}

impl Data {
    fn cost(&self, a: f64, b: f64, f: f64) -> f64 {
        self.m
            .iter()
            .zip(&self.y)
            .zip(&self.w)
            .map(|((&m, &y), &w)| {
                let r = y - a - b * pow_m(f, m);
                w * r * r
            })
            .sum()
    }

    /// Best feasible `(A, B)` for fixed `f`.
    fn profile(&self, f: f64) -> (f64, f64, f64) {
        let (mut sw, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        let (mut s1x2, mut s1xy) = (0.0, 0.0);
        for ((&m, &y), &w) in self.m.iter().zip(&self.y).zip(&self.w) {
            let x = pow_m(f, m);
            sw += w;
            sx += w * x;
            sxx += w * x * x;
            sy += w * y;
            sxy += w * x * y;
            s1x2 += w * (1.0 - x) * (1.0 - x);
            s1xy += w * (y - 1.0) * (1.0 - x);
        }
        let mut candidates: Vec<(f64, f64)> = Vec::with_capacity(4);
        let det = sw * sxx - sx * sx;
        if det > 1e-14 * sw * sxx.max(1e-300) {
            candidates.push(((sxx * sy - sx * sxy) / det, (sw * sxy - sx * sy) / det));
        }
        let b_edge = if sxx > 0.0 { (sxy / sxx).clamp(0.0, 1.0) } else { 0.0 };
        candidates.push((0.0, b_edge));
        candidates.push(((sy / sw).clamp(0.0, 1.0), 0.0));
        if s1x2 > 0.0 {
            let b = (-s1xy / s1x2).clamp(0.0, 1.0);
            candidates.push((1.0 - b, b));
        }
        let mut best = (0.0, 0.0, f64::INFINITY);
        for (a, b) in candidates {
            if a < -FEASIBILITY_TOLERANCE || b < -FEASIBILITY_TOLERANCE || a + b > 1.0 + FEASIBILITY_TOLERANCE {
                continue;
            }
            let c = self.cost(a, b, f);
            if c < best.2 {
                best = (a, b, c);
            }
        }
        best
    }
}

fn pow_m(f: f64, m: f64) -> f64 {
    powi(f, m as i32)
}

fn kappa_to_f(kappa: f64) -> f64 {
    exp(-kappa)
}

/// Initial `kappa` from a log-linear regression of the first differences.
fn initial_kappa(data: &Data) -> Option<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..data.m.len().saturating_sub(1) {
        let dm = data.m[i + 1] - data.m[i];
        let dy = data.y[i + 1] - data.y[i];
        if dm > 0.0 && dy != 0.0 {
            xs.push(0.5 * (data.m[i] + data.m[i + 1]));
            ys.push(ln((dy / dm).abs()));
        }
    }
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    (slope.is_finite() && slope < 0.0).then_some(-slope)
}

fn golden_section(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (sqrt(5.0) - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..300 {
        if hi - lo <= 1e-15 * hi.abs().max(1e-300) {
            break;
        }
        if g1 <= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = g(x2);
        }
    }
    if g1 <= g2 {
        x1
    } else {
        x2
    }
}

fn feasible(a: f64, b: f64, f: f64) -> bool {
    a >= 0.0 && b >= 0.0 && a + b <= 1.0 + FEASIBILITY_TOLERANCE && (0.0..=1.0).contains(&f)
}

fn normal_matrix(data: &Data, a: f64, b: f64, f: f64) -> (Matrix3<f64>, Vector3<f64>) {
    let mut jtj = Matrix3::zeros();
    let mut jtr = Vector3::zeros();
    for ((&m, &y), &w) in data.m.iter().zip(&data.y).zip(&data.w) {
        let x = pow_m(f, m);
        let dx = if m > 0.0 { m * pow_m(f, m - 1.0) } else { 0.0 };
        let j = Vector3::new(1.0, x, b * dx);
        let r = y - a - b * x;
        jtj += j * j.transpose() * w;
        jtr += j * (w * r);
    }
    (jtj, jtr)
}

/// Fits with relative weights.
pub fn fit_decay(points: &[DecayPoint]) -> Result<FitResult> {
    fit_decay_with(points, &FitOptions::default())
}

pub fn fit_decay_with(points: &[DecayPoint], opts: &FitOptions) -> Result<FitResult> {
    let mut pts: Vec<DecayPoint> = points.to_vec();
    pts.sort_by_key(|p| p.m);
    let mut distinct = pts.iter().map(|p| p.m).collect::<Vec<_>>();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 distinct lengths, got {}",
            distinct.len()
        )));
    }
    if let Some(p) = pts
        .iter()
        .find(|p| !(p.weight > 0.0 && p.weight.is_finite() && p.value.is_finite()))
    {
        return Err(Error::InvalidParameter(format!(
            "invalid point at m = {}: value {}, weight {}",
            p.m, p.value, p.weight
        )));
    }
    let data = Data {
        m: pts.iter().map(|p| p.m as f64).collect(),
        y: pts.iter().map(|p| p.value).collect(),
        w: pts.iter().map(|p| p.weight).collect(),
    };
    let n = pts.len();

    let y0 = data.y[0];
    if data.y.iter().all(|&y| (y - y0).abs() <= 1e-14) {
        let (a, b) = (0.0, y0.clamp(0.0, 1.0));
        return Ok(FitResult {
            a,
            b,
            f: 1.0,
            sigma_a: f64::INFINITY,
            sigma_b: f64::INFINITY,
            sigma_f: f64::INFINITY,
            residual_norm: sqrt(data.cost(a, b, 1.0)),
            degenerate: true,
        });
    }

    // Profile scan over kappa = -ln f, including f = 1 and f = 0.
    let profile_k = |k: f64| data.profile(kappa_to_f(k)).2;
    let mut grid: Vec<f64> = Vec::with_capacity(260);
    grid.push(0.0);
    for i in 0..=240 {
        grid.push(crate::math::powf(10.0, -10.0 + 0.05 * i as f64));
    }
    if let Some(k0) = initial_kappa(&data) {
        grid.push(k0);
        grid.sort_by(f64::total_cmp);
    }
    let costs: Vec<f64> = grid.iter().map(|&k| profile_k(k)).collect();
    let mut best_i = 0;
    for (i, c) in costs.iter().enumerate() {
        if *c < costs[best_i] {
            best_i = i;
        }
    }
    let zero_f = data.profile(0.0);
    let mut f = if zero_f.2 < costs[best_i] {
        0.0
    } else {
        let lo = if best_i == 0 { 0.0 } else { grid[best_i - 1] };
        let hi = grid[(best_i + 1).min(grid.len() - 1)];
        let k = golden_section(profile_k, lo, hi);
        let k = if profile_k(k) <= costs[best_i] { k } else { grid[best_i] };
        kappa_to_f(k)
    };
    let (mut a, mut b, mut cost) = data.profile(f);

    // Damped Gauss-Newton polish.
    let mut mu = 1e-3;
    for _ in 0..200 {
        let (jtj, jtr) = normal_matrix(&data, a, b, f);
        let mut damped = jtj;
        for i in 0..3 {
            damped[(i, i)] += mu * jtj[(i, i)].max(1e-300);
        }
        let Some(step) = damped.lu().solve(&jtr) else { break };
        let (na, nb, nf) = (a + step[0], b + step[1], f + step[2]);
        let nc = if feasible(na, nb, nf) { data.cost(na, nb, nf) } else { f64::INFINITY };
        if nc < cost {
            let small = step.amax() <= 1e-15;
            a = na;
            b = nb;
            f = nf;
            cost = nc;
            mu = (mu * 0.3).max(1e-12);
            if small {
                break;
            }
        } else {
            mu *= 10.0;
            if mu > 1e8 {
                break;
            }
        }
    }

    let (jtj, _) = normal_matrix(&data, a, b, f);
    let scale = if opts.absolute_weights {
        1.0
    } else if n > 3 {
        cost / (n - 3) as f64
    } else {
        0.0
    };
    let (sigma_a, sigma_b, sigma_f) = match jtj.try_inverse() {
        Some(cov) if cov.iter().all(|x| x.is_finite()) => (
            sqrt((cov[(0, 0)] * scale).max(0.0)),
            sqrt((cov[(1, 1)] * scale).max(0.0)),
            sqrt((cov[(2, 2)] * scale).max(0.0)),
        ),
        _ => (f64::INFINITY, f64::INFINITY, f64::INFINITY),
    };
    if !(a.is_finite() && b.is_finite() && f.is_finite()) {
        return Err(Error::Numerical("fit diverged".into()));
    }
    Ok(FitResult {
        a,
        b,
        f,
        sigma_a,
        sigma_b,
        sigma_f,
        residual_norm: sqrt(cost),
        degenerate: false,
    })
}
