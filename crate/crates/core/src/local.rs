//! Local special Lagrangian fibrations of `C^3`: the Harvey–Lawson map, the
//! piecewise fibrations `F±` with fibers `N±_{a,c}`, and a numerical checker
//! for the Lagrangian and special conditions on sampled fiber points.
//!
//! The Kähler form is the standard `ω = (i/2) Σ dz_j ∧ dz̄_j`, so
//! `ω(u, v) = Im <u, v>` and a round disk of radius `r` has area `π r^2`.
//! The holomorphic volume form is `Ω = dz_1 ∧ dz_2 ∧ dz_3`.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

pub type C3 = [Complex64; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalError {
    #[error("target {0:?} lies on the discriminant")]
    OnDiscriminant([f64; 3]),
    #[error("tolerance and step sizes must be positive and finite")]
    BadTolerance,
    #[error("no sample points")]
    NoPoints,
}

/// `(Im(z1 z2 z3), |z1|^2 - |z2|^2, |z1|^2 - |z3|^2)`.
pub fn hl_map(z: &C3) -> [f64; 3] {
    let [a, b, c] = z.map(|w| w.norm_sqr());
    [(z[0] * z[1] * z[2]).im, a - b, a - c]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HlRay {
    /// `x2 = 0, x3 <= 0`
    RayI,
    /// `x2 <= 0, x3 = 0`
    RayII,
    /// `x2 = x3 >= 0`
    RayIII,
    Origin,
    Off,
}

/// Which branch of the Harvey–Lawson discriminant contains `x`, within `tol`.
pub fn hl_discriminant_classify(x: [f64; 3], tol: f64) -> HlRay {
    let [x1, x2, x3] = x;
    if x1.hypot(x2).hypot(x3) < tol {
        return HlRay::Origin;
    }
    if x1.abs() >= tol {
        return HlRay::Off;
    }
    if x2.abs() < tol && x3 <= tol {
        HlRay::RayI
    } else if x3.abs() < tol && x2 <= tol {
        HlRay::RayII
    } else if (x2 - x3).abs() < tol && x2 >= -tol {
        HlRay::RayIII
    } else {
        HlRay::Off
    }
}

/// `diag(e^{iθ1}, e^{iθ2}, e^{-i(θ1+θ2)}) z`.
pub fn torus_act(z: &C3, t1: f64, t2: f64) -> C3 {
    [
        z[0] * Complex64::from_polar(1.0, t1),
        z[1] * Complex64::from_polar(1.0, t2),
        z[2] * Complex64::from_polar(1.0, -t1 - t2),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `F±(z) = (a, c)`.
pub fn joyce_f(sign: Sign, z: &C3) -> (f64, Complex64) {
    let (m1, m2) = (z[0].norm_sqr(), z[1].norm_sqr());
    let a = 0.5 * (m1 - m2);
    if m1 == 0.0 && m2 == 0.0 {
        return (a, z[2]);
    }
    let denom = if m2 <= m1 { m1.sqrt() } else { m2.sqrt() };
    let shift = z[0].conj() * z[1].conj() / denom;
    (a, z[2] - sign.value() * shift)
}

/// Membership in `N±_{a,c}` up to `tol`.
pub fn joyce_n_member(sign: Sign, a: f64, c: Complex64, z: &C3, tol: f64) -> bool {
    let w = z[2] - c;
    let q = [z[0].norm_sqr() - a, z[1].norm_sqr() + a, w.norm_sqr() + a.abs()];
    let p = z[0] * z[1] * w;
    (q[0] - q[1]).abs() <= tol
        && (q[1] - q[2]).abs() <= tol
        && (q[0] - q[2]).abs() <= tol
        && p.im.abs() < tol
        && sign.value() * p.re >= -tol
}

/// Whether `z` lies on the fiber of `F±` through itself.
pub fn joyce_roundtrip(sign: Sign, z: &C3, tol: f64) -> bool {
    let (a, c) = joyce_f(sign, z);
    joyce_n_member(sign, a, c, z, tol)
}

/// Area `2π|a|` of the holomorphic disk whose boundary circle lies in
/// `N±_{a,c}`.
pub fn disk_area(a: f64) -> f64 {
    TAU * a.abs()
}

/// `count` points of the circle in `N±_{a,c}` bounding the vanishing disk:
/// `|z1|^2 = 2a` for `a > 0`, `|z2|^2 = -2a` for `a < 0`, a single point for
/// `a = 0`.
pub fn disk_boundary(a: f64, c: Complex64, count: usize) -> Vec<C3> {
    let r = (2.0 * a.abs()).sqrt();
    let zero = Complex64::new(0.0, 0.0);
    (0..count)
        .map(|k| {
            let e = Complex64::from_polar(r, TAU * k as f64 / count as f64);
            if a >= 0.0 {
                [e, zero, c]
            } else {
                [zero, e, c]
            }
        })
        .collect()
}

/// `∫ ω` over any surface bounded by the closed polygon through `points`,
/// via the primitive `λ = ½ Σ Im(z̄_j dz_j)`.
pub fn symplectic_area(points: &[C3]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|k| {
            let (p, q) = (&points[k], &points[(k + 1) % n]);
            (0..3).map(|j| 0.5 * (p[j].conj() * q[j]).im).sum::<f64>()
        })
        .sum()
}

/// Fiber of the unit-strip discriminant `{x1 = 0, 0 <= x2 <= 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RibbonRegion {
    Interior,
    Edge,
    Outside,
}

pub fn ribbon_classify(x: [f64; 3], tol: f64) -> RibbonRegion {
    if x[0].abs() >= tol || x[1] < -tol || x[1] > 1.0 + tol {
        RibbonRegion::Outside
    } else if x[1].abs() < tol || (x[1] - 1.0).abs() < tol {
        RibbonRegion::Edge
    } else {
        RibbonRegion::Interior
    }
}

/// A three-constraint description of a real 3-fold in `C^3` (or, for the
/// complex line control, a four-constraint surface).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FiberModel {
    /// `hl_map(z) = target`.
    HarveyLawson { target: [f64; 3] },
    /// `N±_{a,c}` without its sign condition.
    Joyce { sign: Sign, a: f64, c: Complex64 },
    /// `|z_1| = |z_2| = |z_3| = 1`: Lagrangian but not special.
    UnitTorus,
    /// `z_2 = z_3 = 0`: a complex line, not Lagrangian.
    ComplexLine,
}

impl FiberModel {
    pub fn constraints(&self, z: &C3) -> Vec<f64> {
        match *self {
            FiberModel::HarveyLawson { target } => {
                let f = hl_map(z);
                (0..3).map(|k| f[k] - target[k]).collect()
            }
            FiberModel::Joyce { a, c, .. } => {
                let w = z[2] - c;
                vec![
                    z[0].norm_sqr() - z[1].norm_sqr() - 2.0 * a,
                    z[1].norm_sqr() + a - w.norm_sqr() - a.abs(),
                    (z[0] * z[1] * w).im,
                ]
            }
            FiberModel::UnitTorus => z.iter().map(|w| w.norm_sqr() - 1.0).collect(),
            FiberModel::ComplexLine => vec![z[1].re, z[1].im, z[2].re, z[2].im],
        }
    }
}

fn to_real(z: &C3) -> [f64; 6] {
    [z[0].re, z[0].im, z[1].re, z[1].im, z[2].re, z[2].im]
}

fn from_real(x: &[f64]) -> C3 {
    [
        Complex64::new(x[0], x[1]),
        Complex64::new(x[2], x[3]),
        Complex64::new(x[4], x[5]),
    ]
}

/// `ω(u, v) = Im Σ conj(u_j) v_j`.
pub fn omega(u: &C3, v: &C3) -> f64 {
    (0..3).map(|j| (u[j].conj() * v[j]).im).sum()
}

/// `Ω(u, v, w) = det[u v w]`.
pub fn holomorphic_volume(u: &C3, v: &C3, w: &C3) -> Complex64 {
    u[0] * (v[1] * w[2] - v[2] * w[1]) - v[0] * (u[1] * w[2] - u[2] * w[1]) + w[0] * (u[1] * v[2] - u[2] * v[1])
}

/// Singular values of a constraint Jacobian below this (relative to the
/// largest, floored at 1) count as rank loss.
const RANK_TOL: f64 = 1e-6;

/// Orthonormal tangent frame at `z` from the kernel of the central
/// difference Jacobian, or `None` when the Jacobian loses rank.
pub fn tangent_frame(model: &FiberModel, z: &C3, h: f64) -> Option<Vec<C3>> {
    let x = to_real(z);
    let m = model.constraints(z).len();
    // rows past m stay zero so the SVD returns a full right basis
    let mut jac = SMatrix::<f64, 6, 6>::zeros();
    for k in 0..6 {
        let (mut hi, mut lo) = (x, x);
        hi[k] += h;
        lo[k] -= h;
        let (gh, gl) = (model.constraints(&from_real(&hi)), model.constraints(&from_real(&lo)));
        for r in 0..m {
            jac[(r, k)] = (gh[r] - gl[r]) / (2.0 * h);
        }
    }
    let svd = jac.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let top = svd.singular_values[order[0]].max(1.0);
    if svd.singular_values[order[m - 1]] < RANK_TOL * top {
        return None;
    }
    Some(
        order[m..]
            .iter()
            .map(|&k| {
                let row: Vec<f64> = vt.row(k).iter().copied().collect();
                from_real(&row)
            })
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlagReport {
    /// Largest `|ω(u, v)|` over frame pairs.
    pub max_omega: f64,
    /// Largest `|Im(e^{iθ} Ω)| / |Ω|` on 3-frames at the reported phase.
    pub max_im_omega: Option<f64>,
    pub phase: f64,
    pub samples: usize,
    /// Indices of points whose Jacobian lost rank.
    pub flagged: Vec<usize>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlagOptions {
    pub h: f64,
    pub tolerance: f64,
    /// Minimize the volume residual over 360 phases instead of `θ = 0`.
    pub phase_scan: bool,
}

impl Default for SlagOptions {
    fn default() -> Self {
        Self {
            h: 1e-5,
            tolerance: 1e-5,
            phase_scan: false,
        }
    }
}

/// Checks `ω|_L = 0` and `Im(e^{iθ} Ω)|_L = 0` on tangent frames at the
/// given points of a fiber. Points are processed in parallel and merged in
/// index order.
pub fn slag_check(points: &[C3], model: &FiberModel, opts: SlagOptions) -> Result<SlagReport, LocalError> {
    if !(opts.h > 0.0 && opts.h.is_finite() && opts.tolerance > 0.0) {
        return Err(LocalError::BadTolerance);
    }
    if points.is_empty() {
        return Err(LocalError::NoPoints);
    }
    let frames: Vec<Option<Vec<C3>>> = points.par_iter().map(|z| tangent_frame(model, z, opts.h)).collect();
    let mut flagged = Vec::new();
    let mut max_omega: f64 = 0.0;
    let mut volumes = Vec::new();
    for (k, frame) in frames.iter().enumerate() {
        let Some(f) = frame else {
            flagged.push(k);
            continue;
        };
        for a in 0..f.len() {
            for b in a + 1..f.len() {
                max_omega = max_omega.max(omega(&f[a], &f[b]).abs());
            }
        }
        if f.len() == 3 {
            volumes.push(holomorphic_volume(&f[0], &f[1], &f[2]));
        }
    }
    let residual = |theta: f64| {
        let rot = Complex64::from_polar(1.0, theta);
        volumes.iter().map(|v| (rot * v).im.abs() / v.norm()).fold(0.0, f64::max)
    };
    let (phase, max_im_omega) = if volumes.is_empty() {
        (0.0, None)
    } else if opts.phase_scan {
        // θ and θ + π give the same residual, so half of the 360-point
        // grid suffices
        let (t, r) = (0..180)
            .map(|k| {
                let t = TAU * k as f64 / 360.0;
                (t, residual(t))
            })
            .fold((0.0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        (t, Some(r))
    } else {
        (0.0, Some(residual(0.0)))
    };
    let samples = points.len() - flagged.len();
    let passed = samples > 0 && max_omega < opts.tolerance && max_im_omega.is_some_and(|r| r < opts.tolerance);
    Ok(SlagReport {
        max_omega,
        max_im_omega,
        phase,
        samples,
        flagged,
        tolerance: opts.tolerance,
        passed,
    })
}

/// Deterministic per-sample generator: seeded by `seed`, one stream per
/// sample index, so results do not depend on scheduling.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberSample {
    pub points: Vec<C3>,
    pub failures: usize,
}

/// Residual bound for sampled fiber points.
pub const FIBER_TOL: f64 = 1e-9;

const NEWTON_ITERATIONS: usize = 100;

/// Analytic Jacobian of `hl_map` in real coordinates.
fn hl_jacobian(z: &C3) -> SMatrix<f64, 3, 6> {
    let x = to_real(z);
    let p = z[1] * z[2];
    let q = z[0] * z[2];
    let r = z[0] * z[1];
    // d Im(z1 z2 z3) / d(Re zj, Im zj) = (Im(p), Re(p)) for the cofactor p
    SMatrix::<f64, 3, 6>::from_row_slice(&[
        p.im, p.re, q.im, q.re, r.im, r.re, //
        2.0 * x[0], 2.0 * x[1], -2.0 * x[2], -2.0 * x[3], 0.0, 0.0, //
        2.0 * x[0], 2.0 * x[1], 0.0, 0.0, -2.0 * x[4], -2.0 * x[5],
    ])
}

/// Newton iteration onto `hl_map(z) = target` with minimum-norm steps.
fn hl_newton(mut z: C3, target: [f64; 3]) -> Option<C3> {
    for _ in 0..NEWTON_ITERATIONS {
        let f = hl_map(&z);
        let g = SVector::<f64, 3>::from_fn(|k, _| f[k] - target[k]);
        if g.norm() < 0.1 * FIBER_TOL {
            return Some(z);
        }
        let j = hl_jacobian(&z);
        let jjt = j * j.transpose();
        let y = jjt.lu().solve(&g)?;
        let step = j.transpose() * y;
        let x = to_real(&z);
        let next: Vec<f64> = (0..6).map(|k| x[k] - step[k]).collect();
        z = from_real(&next);
    }
    let f = hl_map(&z);
    ((0..3).map(|k| (f[k] - target[k]).powi(2)).sum::<f64>().sqrt() < FIBER_TOL).then_some(z)
}

/// Seed point on `hl_map^{-1}(x)` with `|z1|^2 = t`, or `None` when the
/// moduli are too small to reach `x1`.
fn hl_seed(x: [f64; 3], t: f64, phase_branch: bool) -> Option<C3> {
    let (m1, m2, m3) = (t, t - x[1], t - x[2]);
    if m2 < 0.0 || m3 < 0.0 {
        return None;
    }
    let rho = (m1 * m2 * m3).sqrt();
    if rho < x[0].abs() || rho == 0.0 {
        return None;
    }
    let s = (x[0] / rho).asin();
    let phi = if phase_branch { PI - s } else { s };
    Some([
        Complex64::new(m1.sqrt(), 0.0),
        Complex64::new(m2.sqrt(), 0.0),
        Complex64::from_polar(m3.sqrt(), phi),
    ])
}

/// Smallest `|z1|^2` for which `hl_map^{-1}(x)` has points.
fn hl_min_modulus(x: [f64; 3]) -> f64 {
    let lo0 = 0f64.max(x[1]).max(x[2]);
    let reach = |t: f64| t * (t - x[1]) * (t - x[2]) >= x[0] * x[0];
    let mut hi = lo0 + 1.0;
    while !reach(hi) {
        hi = lo0 + 2.0 * (hi - lo0);
    }
    let mut lo = lo0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if reach(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `count` points of the smooth fiber `hl_map^{-1}(x)`.
///
/// Seeds are exact solutions at random `|z1|^2` moved along random torus
/// orbits, perturbed, and pulled back onto the fiber by Newton iteration;
/// every returned point has residual below [`FIBER_TOL`]. Point `k` only
/// depends on `(seed, k)`.
pub fn sample_hl_fiber(x: [f64; 3], count: usize, seed: u64) -> Result<FiberSample, LocalError> {
    if !x.iter().all(|v| v.is_finite()) || hl_discriminant_classify(x, FIBER_TOL) != HlRay::Off {
        return Err(LocalError::OnDiscriminant(x));
    }
    let t0 = hl_min_modulus(x);
    let results: Vec<Option<C3>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(seed, k as u64);
            let t = t0 + rng.gen_range(1e-3..2.0);
            let seed_point = hl_seed(x, t, rng.gen_bool(0.5))?;
            let z = torus_act(&seed_point, rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
            let jitter = z.map(|w| w + Complex64::new(rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3)));
            hl_newton(jitter, x)
        })
        .collect();
    let failures = results.iter().filter(|r| r.is_none()).count();
    Ok(FiberSample {
        points: results.into_iter().flatten().collect(),
        failures,
    })
}

/// `count` points of `N±_{a,c}` with common modulus `s = |a| + t`,
/// `t ∈ [t_min, t_min + 2)`, and random torus phases. Exact by
/// construction.
pub fn sample_joyce_fiber(sign: Sign, a: f64, c: Complex64, count: usize, t_min: f64, seed: u64) -> Vec<C3> {
    (0..count)
        .map(|k| {
            let mut rng = sample_rng(seed, k as u64);
            let s = a.abs() + t_min + rng.gen_range(0.0..2.0);
            let (t1, t2) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
            let t3 = -t1 - t2 + if sign == Sign::Plus { 0.0 } else { PI };
            [
                Complex64::from_polar((s + a).sqrt(), t1),
                Complex64::from_polar((s - a).sqrt(), t2),
                c + Complex64::from_polar((s - a.abs()).sqrt(), t3),
            ]
        })
        .collect()
}

/// Point with coordinates uniform in the disk of radius `scale`.
pub fn random_point(rng: &mut impl Rng, scale: f64) -> C3 {
    std::array::from_fn(|_| {
        let r = scale * rng.gen::<f64>().sqrt();
        Complex64::from_polar(r, rng.gen_range(0.0..TAU))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close3(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        (0..3).all(|k| (a[k] - b[k]).abs() <= tol)
    }

    #[test]
    fn hl_map_examples() {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        assert_eq!(hl_map(&[one, one, one]), [0.0, 0.0, 0.0]);
        assert_eq!(hl_map(&[zero, zero, c(0.0, 2.0)]), [0.0, 0.0, -4.0]);
        assert_eq!(hl_map(&[c(1.0, 1.0), zero, zero]), [0.0, 2.0, 2.0]);
        assert_eq!(hl_discriminant_classify(hl_map(&[zero, zero, c(0.0, 2.0)]), 1e-9), HlRay::RayI);
        assert_eq!(hl_discriminant_classify(hl_map(&[c(1.0, 1.0), zero, zero]), 1e-9), HlRay::RayIII);
    }

    #[test]
    fn classify_rays() {
        assert_eq!(hl_discriminant_classify([0.0, 0.0, -5.0], 1e-9), HlRay::RayI);
        assert_eq!(hl_discriminant_classify([0.0, -2.0, 0.0], 1e-9), HlRay::RayII);
        assert_eq!(hl_discriminant_classify([0.0, 3.0, 3.0], 1e-9), HlRay::RayIII);
        assert_eq!(hl_discriminant_classify([1.0, 0.0, 0.0], 1e-9), HlRay::Off);
        assert_eq!(hl_discriminant_classify([0.0, 0.0, 0.0], 1e-9), HlRay::Origin);
        assert_eq!(hl_discriminant_classify([0.0, 1.0, 2.0], 1e-9), HlRay::Off);
        assert_eq!(hl_discriminant_classify([0.0, 0.0, 1.0], 1e-9), HlRay::Off);
    }

    #[test]
    fn singular_set_maps_into_rays() {
        let zero = c(0.0, 0.0);
        for k in 0..50 {
            let w = Complex64::from_polar(0.1 * k as f64 + 0.05, 0.37 * k as f64);
            for z in [[zero, zero, w], [zero, w, zero], [w, zero, zero]] {
                assert_ne!(hl_discriminant_classify(hl_map(&z), 1e-12), HlRay::Off);
            }
        }
    }

    #[test]
    fn torus_action_group_law() {
        let z = [c(0.3, -1.0), c(2.0, 0.5), c(-0.7, 0.1)];
        assert_eq!(torus_act(&z, 0.0, 0.0), z);
        let lhs = torus_act(&torus_act(&z, 0.4, -1.1), 2.0, 0.3);
        let rhs = torus_act(&z, 2.4, -0.8);
        for k in 0..3 {
            assert!((lhs[k] - rhs[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn joyce_branches() {
        let zero = c(0.0, 0.0);
        let w = c(0.4, -2.0);
        assert_eq!(joyce_f(Sign::Plus, &[zero, zero, w]), (0.0, w));
        let (a, cc) = joyce_f(Sign::Minus, &[c(0.0, 3.0), zero, w]);
        assert_eq!((a, cc), (4.5, w));
        // |z1| = |z2|: the two denominators agree
        let z = [Complex64::from_polar(1.3, 0.2), Complex64::from_polar(1.3, -2.1), w];
        let (_, c2) = joyce_f(Sign::Plus, &z);
        let shift = z[0].conj() * z[1].conj() / 1.3;
        assert!((c2 - (w - shift)).norm() < 1e-14);
    }

    #[test]
    fn joyce_membership_examples() {
        let cc = c(0.5, 1.0);
        let zero = c(0.0, 0.0);
        let a = 0.7;
        let z = [c((2.0 * a as f64).sqrt(), 0.0), zero, cc];
        assert!(joyce_n_member(Sign::Plus, a, cc, &z, 1e-12));
        assert!(joyce_n_member(Sign::Minus, a, cc, &z, 1e-12));
        let z = [zero, c((2.0 * a as f64).sqrt(), 0.0), cc];
        assert!(joyce_n_member(Sign::Plus, -a, cc, &z, 1e-12));
        let one = c(1.0, 0.0);
        assert!(!joyce_n_member(Sign::Plus, 5.0, zero, &[one, one, one], 1e-9));
    }

    #[test]
    fn joyce_fibers_map_to_their_parameters() {
        for sign in [Sign::Plus, Sign::Minus] {
            for (a, cc) in [(1.0, c(0.0, 0.0)), (-0.4, c(1.0, -2.0))] {
                for z in sample_joyce_fiber(sign, a, cc, 200, 0.0, 7) {
                    assert!(joyce_n_member(sign, a, cc, &z, 1e-9));
                    let (a2, c2) = joyce_f(sign, &z);
                    assert!((a2 - a).abs() < 1e-9 && (c2 - cc).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn disk_areas_by_shoelace() {
        assert_eq!(disk_area(1.0), TAU);
        assert_eq!(disk_area(0.0), 0.0);
        assert_eq!(disk_area(-1.0), TAU);
        for a in [0.1, 1.0, 10.0, -2.0] {
            let circle = disk_boundary(a, c(0.3, 0.0), 4096);
            assert!(circle.iter().all(|z| joyce_n_member(Sign::Plus, a, c(0.3, 0.0), z, 1e-12)));
            assert!(circle.iter().all(|z| joyce_n_member(Sign::Minus, a, c(0.3, 0.0), z, 1e-12)));
            let area = symplectic_area(&circle).abs();
            assert!((area - disk_area(a)).abs() < 1e-5 * disk_area(a), "{a}: {area}");
        }
    }

    #[test]
    fn hl_sampler_lands_on_the_fiber() {
        for x in [[0.5, 0.0, 0.0], [-0.3, 1.2, -0.7], [0.0, 1.0, 2.0]] {
            let s = sample_hl_fiber(x, 100, 3).unwrap();
            assert_eq!(s.failures, 0);
            assert_eq!(s.points.len(), 100);
            for z in &s.points {
                assert!(close3(hl_map(z), x, FIBER_TOL));
                let moved = torus_act(z, 1.7, -0.4);
                assert!(close3(hl_map(&moved), x, 1e-12 * (1.0 + z[0].norm_sqr())));
            }
        }
        assert_eq!(
            sample_hl_fiber([0.0, 0.0, -1.0], 4, 0),
            Err(LocalError::OnDiscriminant([0.0, 0.0, -1.0]))
        );
    }

    #[test]
    fn hl_point_is_special_lagrangian() {
        let z = [c(1.1, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        let model = FiberModel::HarveyLawson { target: hl_map(&z) };
        let r = slag_check(&[z], &model, SlagOptions::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.flagged.is_empty());
    }

    #[test]
    fn controls_are_rejected() {
        let line = FiberModel::ComplexLine;
        let p = [c(0.5, 0.2), c(0.0, 0.0), c(0.0, 0.0)];
        let r = slag_check(&[p], &line, SlagOptions::default()).unwrap();
        assert!((r.max_omega - 1.0).abs() < 1e-9);
        assert!(r.max_im_omega.is_none() && !r.passed);

        let torus: Vec<C3> = (0..20)
            .map(|k| {
                let t = 0.1 + 0.13 * k as f64;
                [Complex64::from_polar(1.0, t), Complex64::from_polar(1.0, 0.4), Complex64::from_polar(1.0, -0.2)]
            })
            .collect();
        let r = slag_check(&torus, &FiberModel::UnitTorus, SlagOptions::default()).unwrap();
        assert!(r.max_omega < 1e-9);
        assert!(r.max_im_omega.unwrap() > 0.5);
        assert!(!r.passed);
    }

    #[test]
    fn phase_scan_finds_the_torus_phase() {
        // Ω on the torus frame is ∓i e^{i Σφ}; a fixed Σφ has a best phase
        let z = [Complex64::from_polar(1.0, 0.3), Complex64::from_polar(1.0, 0.4), Complex64::from_polar(1.0, 0.1)];
        let opts = SlagOptions {
            phase_scan: true,
            ..SlagOptions::default()
        };
        let r = slag_check(&[z], &FiberModel::UnitTorus, opts).unwrap();
        assert!(r.max_im_omega.unwrap() < TAU / 360.0);
        // Im(e^{iθ} i e^{0.8i}) = 0 at θ = π/2 - 0.8 (mod π)
        let want = (PI / 2.0 - 0.8).rem_euclid(PI);
        assert!((r.phase - want).abs() < TAU / 360.0, "{}", r.phase);
    }

    #[test]
    fn singular_joyce_point_is_flagged() {
        let cc = c(0.2, -0.1);
        let model = FiberModel::Joyce {
            sign: Sign::Plus,
            a: 0.0,
            c: cc,
        };
        let zero = c(0.0, 0.0);
        let r = slag_check(&[[zero, zero, cc]], &model, SlagOptions::default()).unwrap();
        assert_eq!(r.flagged, vec![0]);
        assert_eq!(r.samples, 0);
        assert!(!r.passed);
    }

    #[test]
    fn residuals_stay_at_rounding_level_across_steps() {
        // every constraint is at most quadratic in each real coordinate, so
        // central differences are exact and only rounding remains
        let x = [0.4, -0.2, 0.9];
        let pts = sample_hl_fiber(x, 50, 11).unwrap().points;
        let model = FiberModel::HarveyLawson { target: x };
        for h in [0.05, 0.025, 1e-3, 1e-5, 5e-6] {
            let r = slag_check(&pts, &model, SlagOptions { h, ..SlagOptions::default() }).unwrap();
            assert!(r.max_omega < 1e-9 && r.max_im_omega.unwrap() < 1e-9, "{h}: {r:?}");
        }
    }
}
