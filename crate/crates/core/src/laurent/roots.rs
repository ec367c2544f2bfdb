use super::LaurentError;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::TAU;

const MAX_SWEEPS: usize = 200;
const REL_TOL: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMethod {
    Aberth,
    /// Aberth stalled and the companion-matrix eigenvalues were used.
    Companion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    /// Sorted by real part, then imaginary part.
    pub roots: Vec<Complex64>,
    pub method: RootMethod,
    pub sweeps: usize,
}

/// All complex roots (with multiplicity) of `sum coeffs[k] w^k`.
///
/// Trailing zero coefficients are trimmed; the degree is what remains.
pub fn univariate_roots(coeffs: &[Complex64]) -> Result<RootSet, LaurentError> {
    let zero = Complex64::new(0.0, 0.0);
    let Some(top) = coeffs.iter().rposition(|c| *c != zero) else {
        return Err(LaurentError::ConstantPolynomial);
    };
    if top == 0 {
        return Err(LaurentError::ConstantPolynomial);
    }
    // roots at the origin factor out exactly
    let low = coeffs.iter().position(|c| *c != zero).unwrap();
    let reduced = &coeffs[low..=top];
    let mut roots = vec![zero; low];
    let (mut rest, method, sweeps) = if reduced.len() == 1 {
        (Vec::new(), RootMethod::Aberth, 0)
    } else {
        solve_nonzero(reduced)?
    };
    roots.append(&mut rest);
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(RootSet {
        roots,
        method,
        sweeps,
    })
}

/// Relative backward residual `|p(w)| / sum |c_k| |w|^k`.
pub fn relative_residual(coeffs: &[Complex64], w: Complex64) -> f64 {
    let (value, scale) = if w.norm() <= 1.0 {
        horner_abs(coeffs.iter().rev(), w)
    } else {
        horner_abs(coeffs.iter(), w.inv())
    };
    if scale == 0.0 {
        0.0
    } else {
        value.norm() / scale
    }
}

fn horner_abs<'a>(it: impl Iterator<Item = &'a Complex64>, x: Complex64) -> (Complex64, f64) {
    let r = x.norm();
    let mut v = Complex64::new(0.0, 0.0);
    let mut s = 0.0;
    for c in it {
        v = v * x + c;
        s = s * r + c.norm();
    }
    (v, s)
}

/// Newton correction `p(w)/p'(w)` and the relative residual at `w`,
/// evaluating the reversed polynomial outside the unit disk.
fn newton_step(coeffs: &[Complex64], w: Complex64) -> (Complex64, f64) {
    let d = coeffs.len() - 1;
    if w.norm() <= 1.0 {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        let r = w.norm();
        for c in coeffs.iter().rev() {
            dp = dp * w + p;
            p = p * w + c;
            s = s * r + c.norm();
        }
        (p / dp, if s == 0.0 { 0.0 } else { p.norm() / s })
    } else {
        let y = w.inv();
        let r = y.norm();
        let mut q = Complex64::new(0.0, 0.0);
        let mut dq = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        for c in coeffs.iter() {
            dq = dq * y + q;
            q = q * y + c;
            s = s * r + c.norm();
        }
        let ratio = y * (Complex64::new(d as f64, 0.0) - y * dq / q);
        (ratio.inv(), if s == 0.0 { 0.0 } else { q.norm() / s })
    }
}

/// Starting points on circles whose radii come from the upper convex hull
/// of `(k, log|c_k|)`.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let pts: Vec<(f64, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k as f64, c.norm().ln()))
        .collect();
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(coeffs.len() - 1);
    for (seg, pair) in hull.windows(2).enumerate() {
        let (k1, l1) = pair[0];
        let (k2, l2) = pair[1];
        let count = (k2 - k1) as usize;
        let radius = (-(l2 - l1) / (k2 - k1)).exp();
        let offset = 0.4 + 0.7 * seg as f64;
        for j in 0..count {
            let angle = TAU * j as f64 / count as f64 + offset;
            out.push(Complex64::from_polar(radius, angle));
        }
    }
    out
}

fn solve_nonzero(coeffs: &[Complex64]) -> Result<(Vec<Complex64>, RootMethod, usize), LaurentError> {
    let d = coeffs.len() - 1;
    if d == 1 {
        return Ok((vec![-coeffs[0] / coeffs[1]], RootMethod::Aberth, 0));
    }
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; d];
    for sweep in 1..=MAX_SWEEPS {
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (ratio, residual) = newton_step(coeffs, z[i]);
            if residual <= REL_TOL || !ratio.is_finite() {
                done[i] = true;
                continue;
            }
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let correction = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !correction.is_finite() {
                continue;
            }
            z[i] -= correction;
            if correction.norm() <= f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
        if done.iter().all(|&x| x) {
            return Ok((z, RootMethod::Aberth, sweep));
        }
    }
    let mut z = companion_eigenvalues(coeffs)?;
    for w in z.iter_mut() {
        for _ in 0..8 {
            let (ratio, residual) = newton_step(coeffs, *w);
            if residual <= REL_TOL || !ratio.is_finite() {
                break;
            }
            *w -= ratio;
        }
    }
    Ok((z, RootMethod::Companion, MAX_SWEEPS))
}

fn companion_eigenvalues(coeffs: &[Complex64]) -> Result<Vec<Complex64>, LaurentError> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -coeffs[i] / lead;
    }
    let eig = m
        .schur()
        .eigenvalues()
        .ok_or(LaurentError::NoConvergence)?;
    Ok(eig.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-10
    }

    #[test]
    fn quadratics() {
        let r = univariate_roots(&[c(-1.0), c(0.0), c(1.0)]).unwrap().roots;
        assert!(close(r[0], c(-1.0)) && close(r[1], c(1.0)));
        let r = univariate_roots(&[c(6.0), c(-5.0), c(1.0)]).unwrap().roots;
        assert!(close(r[0], c(2.0)) && close(r[1], c(3.0)));
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(univariate_roots(&[c(3.0)]), Err(LaurentError::ConstantPolynomial));
        assert_eq!(
            univariate_roots(&[c(0.0), c(0.0)]),
            Err(LaurentError::ConstantPolynomial)
        );
        assert_eq!(univariate_roots(&[]), Err(LaurentError::ConstantPolynomial));
        // trailing zeros trimmed: 2 + w -> root -2
        let r = univariate_roots(&[c(2.0), c(1.0), c(0.0)]).unwrap().roots;
        assert_eq!(r.len(), 1);
        assert!(close(r[0], c(-2.0)));
        // w^2 (w - 1)
        let r = univariate_roots(&[c(0.0), c(0.0), c(-1.0), c(1.0)]).unwrap().roots;
        assert_eq!(r, vec![c(0.0), c(0.0), c(1.0)]);
    }

    #[test]
    fn random_degree_seven_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let co: Vec<Complex64> = (0..8)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let set = univariate_roots(&co).unwrap();
            assert_eq!(set.roots.len(), 7);
            for w in &set.roots {
                assert!(relative_residual(&co, *w) < 1e-8);
            }
        }
    }

    #[test]
    fn widely_spread_moduli() {
        // (w - 1e-8)(w - 1)(w - 1e8)
        let a = 1e-8;
        let b = 1.0;
        let cc = 1e8;
        let co = [
            c(-a * b * cc),
            c(a * b + a * cc + b * cc),
            c(-(a + b + cc)),
            c(1.0),
        ];
        let r = univariate_roots(&co).unwrap().roots;
        for (got, want) in r.iter().zip([a, b, cc]) {
            assert!((got - c(want)).norm() / want < 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn repeated_roots_are_accepted() {
        // (w - 2)^3
        let co = [c(-8.0), c(12.0), c(-6.0), c(1.0)];
        let set = univariate_roots(&co).unwrap();
        for w in &set.roots {
            assert!(relative_residual(&co, *w) < 1e-8);
            assert!((w - c(2.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn companion_fallback_agrees() {
        let co = [c(6.0), c(-5.0), c(1.0)];
        let mut e = companion_eigenvalues(&co).unwrap();
        e.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!(close(e[0], c(2.0)) && close(e[1], c(3.0)));
    }
}
