use super::AmoebaError;
use serde::Serialize;
use crate::laurent::LaurentPolynomial;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;

pub const DEFAULT_GRID: usize = 512;

/// Central-difference step used to read off component orders.
pub const ORDER_STEP: f64 = 0.25;

/// Nodes with `|f|` below this are dropped from the quadrature.
const UNDERFLOW: f64 = 1e-300;

/// Fraction of dropped nodes above which a value is flagged.
const LOW_CONFIDENCE_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RonkinValue {
    pub value: f64,
    /// `|value(grid) - value(grid / 2)|`.
    pub error: f64,
    pub excluded: usize,
    pub nodes: usize,
    pub low_confidence: bool,
}

/// The average of `log |f|` over the torus `{|z_j| = e^{x_j}}`, by the
/// trapezoidal rule on a `grid^n` lattice of angles.
///
/// The half-resolution estimate is read off the even-index subgrid in the
/// same pass. Rows of the lattice are summed in parallel and merged in index
/// order, so the result is independent of the thread count.
pub fn ronkin_value(f: &LaurentPolynomial, x: &[f64], grid: usize) -> Result<RonkinValue, AmoebaError> {
    let n = f.num_vars();
    if !(1..=3).contains(&n) {
        return Err(AmoebaError::RonkinDimension(n));
    }
    if x.len() != n {
        return Err(crate::laurent::LaurentError::PointDimension {
            got: x.len(),
            expected: n,
        }
        .into());
    }
    if grid < 64 || grid % 2 == 1 {
        return Err(AmoebaError::GridTooSmall(grid));
    }
    // factor out the largest term modulus so nothing overflows
    let logs: Vec<f64> = f
        .terms()
        .iter()
        .map(|t| t.coeff.norm().ln() + t.exp.iter().zip(x).map(|(&e, xi)| e as f64 * xi).sum::<f64>())
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<Complex64> = f
        .terms()
        .iter()
        .zip(&logs)
        .map(|(t, l)| t.coeff / t.coeff.norm() * (l - top).exp())
        .collect();
    let g = grid as i64;
    let exps: Vec<Vec<i64>> = f
        .terms()
        .iter()
        .map(|t| t.exp.iter().map(|e| e.rem_euclid(g)).collect())
        .collect();
    let table: Vec<Complex64> = (0..grid)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / grid as f64))
        .collect();
    let floor = UNDERFLOW.ln() - top;

    let inner = grid.pow(n as u32 - 1);
    let rows: Vec<(f64, f64, usize, usize)> = (0..grid)
        .into_par_iter()
        .map(|k0| {
            let mut all = 0.0;
            let mut even = 0.0;
            let mut dropped = 0;
            let mut dropped_even = 0;
            let mut idx = vec![0usize; n];
            idx[0] = k0;
            for r in 0..inner {
                let mut rest = r;
                for slot in idx.iter_mut().skip(1) {
                    *slot = rest % grid;
                    rest /= grid;
                }
                let mut sum = Complex64::new(0.0, 0.0);
                for (c, m) in scaled.iter().zip(&exps) {
                    let phase = m
                        .iter()
                        .zip(&idx)
                        .map(|(&e, &k)| e as usize * k)
                        .sum::<usize>()
                        % grid;
                    sum += c * table[phase];
                }
                let on_even = idx.iter().all(|k| k % 2 == 0);
                let norm = sum.norm();
                if norm == 0.0 || norm.ln() < floor {
                    dropped += 1;
                    dropped_even += usize::from(on_even);
                    continue;
                }
                let v = norm.ln();
                all += v;
                if on_even {
                    even += v;
                }
            }
            (all, even, dropped, dropped_even)
        })
        .collect();
    let (mut all, mut even, mut dropped, mut dropped_even) = (0.0, 0.0, 0, 0);
    for (a, e, d, de) in rows {
        all += a;
        even += e;
        dropped += d;
        dropped_even += de;
    }
    let nodes = grid.pow(n as u32);
    let even_nodes = (grid / 2).pow(n as u32);
    let kept = nodes - dropped;
    let kept_even = even_nodes - dropped_even;
    let value = if kept == 0 { f64::NEG_INFINITY } else { top + all / kept as f64 };
    let half = if kept_even == 0 { f64::NEG_INFINITY } else { top + even / kept_even as f64 };
    Ok(RonkinValue {
        value,
        error: (value - half).abs(),
        excluded: dropped,
        nodes,
        low_confidence: dropped as f64 > LOW_CONFIDENCE_FRACTION * nodes as f64,
    })
}

/// Reads off the order of the complement component containing `x` from a
/// central-difference gradient of the Ronkin function (step
/// [`ORDER_STEP`]).
///
/// Each coordinate must be within 0.1 of an integer and the rounded vector
/// must lie in the Newton polytope.
pub fn ronkin_order(f: &LaurentPolynomial, x: &[f64], grid: usize) -> Result<Vec<i64>, AmoebaError> {
    let gradient = ronkin_gradient(f, x, grid)?;
    let order: Vec<i64> = gradient.iter().map(|g| g.round() as i64).collect();
    if gradient.iter().zip(&order).any(|(g, &o)| (g - o as f64).abs() > 0.1) {
        return Err(AmoebaError::TooCloseToAmoeba { gradient });
    }
    if !f.newton_polytope()?.contains(&order) {
        return Err(AmoebaError::OrderOutsidePolytope { order });
    }
    Ok(order)
}

fn ronkin_gradient(f: &LaurentPolynomial, x: &[f64], grid: usize) -> Result<Vec<f64>, AmoebaError> {
    let mut out = Vec::with_capacity(x.len());
    for j in 0..x.len() {
        let mut hi = x.to_vec();
        let mut lo = x.to_vec();
        hi[j] += ORDER_STEP;
        lo[j] -= ORDER_STEP;
        let d = ronkin_value(f, &hi, grid)?.value - ronkin_value(f, &lo, grid)?.value;
        out.push(d / (2.0 * ORDER_STEP));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Jensen's formula in `w`: `N(x, y) = (1/2π) ∫ log max(|1 + e^{x+iθ}|, e^y) dθ`,
    /// integrated by composite Simpson on a fine grid.
    fn jensen_line(x: f64, y: f64) -> f64 {
        let n = 200_000;
        let h = TAU / n as f64;
        let g = |t: f64| {
            let a = (Complex64::new(1.0, 0.0) + Complex64::from_polar(x.exp(), t)).norm();
            a.max(y.exp()).ln()
        };
        let mut s = g(0.0) + g(TAU);
        for k in 1..n {
            s += g(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0 / TAU
    }

    #[test]
    fn dominant_term_values() {
        let f = LaurentPolynomial::line();
        let v = ronkin_value(&f, &[10.0, 0.0], 512).unwrap();
        assert!((v.value - 10.0).abs() < 1e-3);
        let v = ronkin_value(&f, &[-3.0, -3.0], 512).unwrap();
        assert!(v.value.abs() < 1e-12);
        assert_eq!(v.excluded, 0);
    }

    #[test]
    fn origin_value_matches_one_dimensional_jensen_integral() {
        let f = LaurentPolynomial::line();
        let oracle = jensen_line(0.0, 0.0);
        assert!((oracle - 0.3230659472).abs() < 1e-6, "{oracle}");
        let v = ronkin_value(&f, &[0.0, 0.0], 1024).unwrap();
        assert!((v.value - oracle).abs() < 1e-3, "{} vs {oracle}", v.value);
        assert!((v.value - oracle).abs() <= 3.0 * v.error + 1e-6);
        for (x, y) in [(0.7, -0.4), (-1.5, 0.2), (2.0, 2.5)] {
            let v = ronkin_value(&f, &[x, y], 512).unwrap();
            assert!((v.value - jensen_line(x, y)).abs() < 2e-3, "{x} {y}");
        }
    }

    #[test]
    fn symmetric_in_the_two_variables() {
        let f = LaurentPolynomial::line();
        for (x, y) in [(0.3, -1.2), (2.0, 0.5), (-0.25, 0.75)] {
            let a = ronkin_value(&f, &[x, y], 256).unwrap().value;
            let b = ronkin_value(&f, &[y, x], 256).unwrap().value;
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn orders_of_the_line() {
        let f = LaurentPolynomial::line();
        assert_eq!(ronkin_order(&f, &[10.0, 0.0], 256).unwrap(), vec![1, 0]);
        assert_eq!(ronkin_order(&f, &[-10.0, -10.0], 256).unwrap(), vec![0, 0]);
        assert_eq!(ronkin_order(&f, &[0.0, 10.0], 256).unwrap(), vec![0, 1]);
        assert!(matches!(
            ronkin_order(&f, &[0.0, 0.0], 256),
            Err(AmoebaError::TooCloseToAmoeba { .. })
        ));
    }

    #[test]
    fn three_variables_and_bad_grids() {
        let f = LaurentPolynomial::from_real(3, [(vec![1, 0, 0], 1.0), (vec![0, 1, 0], 1.0), (vec![0, 0, 1], 1.0)])
            .unwrap();
        let v = ronkin_value(&f, &[5.0, 0.0, 0.0], 64).unwrap();
        assert!((v.value - 5.0).abs() < 1e-3);
        assert_eq!(ronkin_value(&f, &[0.0; 3], 32), Err(AmoebaError::GridTooSmall(32)));
        assert_eq!(ronkin_value(&f, &[0.0; 3], 65), Err(AmoebaError::GridTooSmall(65)));
    }

    #[test]
    fn exact_zeros_on_the_grid_are_excluded() {
        // z - 1 vanishes on the whole k0 = 0 row of the lattice
        let f = LaurentPolynomial::from_real(2, [(vec![1, 0], 1.0), (vec![0, 0], -1.0)]).unwrap();
        let v = ronkin_value(&f, &[0.0, 0.0], 96).unwrap();
        assert_eq!(v.excluded, 96);
        assert!(v.low_confidence);
        assert!(v.value.is_finite());
        let v = ronkin_value(&f, &[1.0, 0.0], 96).unwrap();
        assert_eq!(v.excluded, 0);
        assert!(!v.low_confidence);
    }
}
