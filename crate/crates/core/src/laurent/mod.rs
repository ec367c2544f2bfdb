//! Laurent polynomials with integer exponents and complex coefficients,
//! their Newton polytopes, and the univariate root finder used to slice
//! zero sets along torus fibers.

mod polytope;
mod roots;

pub use polytope::{LatticePoint, NewtonPolytope};
pub use roots::{relative_residual, univariate_roots, RootMethod, RootSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaurentError {
    #[error("polynomial has no nonzero terms")]
    Empty,
    #[error("number of variables must be positive")]
    NoVariables,
    #[error("exponent {exp:?} has length {got}, expected {expected}")]
    ExponentLength {
        exp: Vec<i64>,
        got: usize,
        expected: usize,
    },
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    PointDimension { got: usize, expected: usize },
    #[error("coordinate {index} is zero but carries a negative exponent")]
    ZeroCoordinate { index: usize },
    #[error("coefficient is not finite")]
    NonFinite,
    #[error("polytope dimension {0} is outside the supported range 1..=4")]
    UnsupportedDimension(usize),
    #[error("operation requires a polytope in Z^2, got Z^{0}")]
    NotPlanar(usize),
    #[error("root finding needs a polynomial of degree >= 1")]
    ConstantPolynomial,
    #[error("root finder failed to converge")]
    NoConvergence,
}

/// One monomial `coeff * z^exp`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub exp: Vec<i64>,
    pub coeff: Complex64,
}

/// A finitely supported Laurent polynomial in `num_vars` variables.
///
/// Construction merges repeated exponents, drops zero coefficients and sorts
/// the terms lexicographically by exponent, so two polynomials with the same
/// support and coefficients compare equal regardless of input order.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPolynomial {
    num_vars: usize,
    terms: Vec<Term>,
}

impl LaurentPolynomial {
    pub fn new<I>(num_vars: usize, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        if num_vars == 0 {
            return Err(LaurentError::NoVariables);
        }
        let mut merged: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        for (exp, coeff) in terms {
            if exp.len() != num_vars {
                return Err(LaurentError::ExponentLength {
                    got: exp.len(),
                    expected: num_vars,
                    exp,
                });
            }
            if !coeff.re.is_finite() || !coeff.im.is_finite() {
                return Err(LaurentError::NonFinite);
            }
            *merged.entry(exp).or_default() += coeff;
        }
        let terms: Vec<Term> = merged
            .into_iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|(exp, coeff)| Term { exp, coeff })
            .collect();
        if terms.is_empty() {
            return Err(LaurentError::Empty);
        }
        Ok(Self { num_vars, terms })
    }

    /// Convenience constructor for real coefficients.
    pub fn from_real<I>(num_vars: usize, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (Vec<i64>, f64)>,
    {
        Self::new(
            num_vars,
            terms
                .into_iter()
                .map(|(e, c)| (e, Complex64::new(c, 0.0))),
        )
    }

    /// `z + w + 1`, the standard line in the torus.
    pub fn line() -> Self {
        Self::from_real(2, [(vec![1, 0], 1.0), (vec![0, 1], 1.0), (vec![0, 0], 1.0)])
            .expect("valid polynomial")
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = &[i64]> {
        self.terms.iter().map(|t| t.exp.as_slice())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Exact convex hull of the support. Fails only for more than four
    /// variables.
    pub fn newton_polytope(&self) -> Result<NewtonPolytope, LaurentError> {
        NewtonPolytope::from_points(self.num_vars, self.support().map(|e| e.to_vec()))
    }

    /// `sum a_I z^I`, summed in term order.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64, LaurentError> {
        if z.len() != self.num_vars {
            return Err(LaurentError::PointDimension {
                got: z.len(),
                expected: self.num_vars,
            });
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let mut mono = t.coeff;
            for (i, (&e, &zi)) in t.exp.iter().zip(z).enumerate() {
                if e < 0 && zi == Complex64::new(0.0, 0.0) {
                    return Err(LaurentError::ZeroCoordinate { index: i });
                }
                mono *= zi.powi(e as i32);
            }
            sum += mono;
        }
        Ok(sum)
    }

    /// Exponent range of variable `var` over the support.
    pub fn degree_range(&self, var: usize) -> (i64, i64) {
        let it = self.terms.iter().map(|t| t.exp[var]);
        let lo = it.clone().min().unwrap();
        let hi = it.max().unwrap();
        (lo, hi)
    }

    /// Coefficients (ascending powers, shifted so the lowest exponent is 0)
    /// of the univariate polynomial obtained by fixing every variable except
    /// `free` to the given values.
    pub fn slice_coefficients(&self, free: usize, fixed: &[Complex64]) -> Vec<Complex64> {
        let (lo, hi) = self.degree_range(free);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for t in &self.terms {
            let mut c = t.coeff;
            for (i, &e) in t.exp.iter().enumerate() {
                if i != free {
                    c *= fixed[i].powi(e as i32);
                }
            }
            coeffs[(t.exp[free] - lo) as usize] += c;
        }
        coeffs
    }

    pub fn to_document(&self) -> PolynomialDocument {
        PolynomialDocument {
            vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|t| TermDocument {
                    exp: t.exp.clone(),
                    re: t.coeff.re,
                    im: t.coeff.im,
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, PolynomialParseError> {
        let doc: PolynomialDocument = serde_json::from_str(text)?;
        Ok(Self::try_from(doc)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serializable")
    }
}

/// Wire form: `{ "vars": n, "terms": [ { "exp": [..], "re": x, "im": y } ] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialDocument {
    pub vars: usize,
    pub terms: Vec<TermDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    pub exp: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl TryFrom<PolynomialDocument> for LaurentPolynomial {
    type Error = LaurentError;

    fn try_from(doc: PolynomialDocument) -> Result<Self, Self::Error> {
        Self::new(
            doc.vars,
            doc.terms
                .into_iter()
                .map(|t| (t.exp, Complex64::new(t.re, t.im))),
        )
    }
}

#[derive(Debug, Error)]
pub enum PolynomialParseError {
    #[error("malformed polynomial document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] LaurentError),
}

/// Baker's genus count: interior lattice points of a polygon in Z^2.
pub fn baker_genus(p: &NewtonPolytope) -> Result<usize, LaurentError> {
    if p.dim() != 2 {
        return Err(LaurentError::NotPlanar(p.dim()));
    }
    Ok(p.lattice_points().iter().filter(|lp| lp.interior).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluate_line() {
        let f = LaurentPolynomial::line();
        assert_eq!(f.evaluate(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(), c(3.0, 0.0));
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let v = f.evaluate(&[w, w * w]).unwrap();
        assert!(v.norm() < 1e-12);
        assert_eq!(f.evaluate(&[c(2.0, 0.0), c(-3.0, 0.0)]).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn zero_coordinate_with_negative_exponent() {
        let f = LaurentPolynomial::from_real(1, [(vec![1], 1.0), (vec![-1], 1.0)]).unwrap();
        assert_eq!(
            f.evaluate(&[c(0.0, 0.0)]),
            Err(LaurentError::ZeroCoordinate { index: 0 })
        );
        let g = LaurentPolynomial::from_real(1, [(vec![2], 1.0)]).unwrap();
        assert_eq!(g.evaluate(&[c(0.0, 0.0)]).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn normalization_merges_and_drops() {
        let f = LaurentPolynomial::from_real(
            2,
            [(vec![1, 0], 1.0), (vec![0, 0], 2.0), (vec![1, 0], -1.0)],
        )
        .unwrap();
        assert_eq!(f.terms().len(), 1);
        assert_eq!(
            LaurentPolynomial::from_real(1, [(vec![1], 1.0), (vec![1], -1.0)]),
            Err(LaurentError::Empty)
        );
        assert!(matches!(
            LaurentPolynomial::from_real(2, [(vec![1], 1.0)]),
            Err(LaurentError::ExponentLength { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{ "vars": 2, "terms": [
            { "exp": [1, 0], "re": 1.0, "im": 0.0 },
            { "exp": [0, 1], "re": 1.0, "im": 0.0 },
            { "exp": [0, 0], "re": 1.0, "im": 0.0 } ] }"#;
        let f = LaurentPolynomial::from_json(text).unwrap();
        assert_eq!(f, LaurentPolynomial::line());
        assert_eq!(LaurentPolynomial::from_json(&f.to_json()).unwrap(), f);
        assert!(LaurentPolynomial::from_json(r#"{"vars":2,"terms":[]}"#).is_err());
        assert!(LaurentPolynomial::from_json(r#"{"vars":2}"#).is_err());
    }

    #[test]
    fn slice_coefficients_shift_negative_powers() {
        // z + z^-1 w^-1 + w^2, fix z = 2: w^2 + 0.5 w^-1 + 2 -> shifted by w
        let f = LaurentPolynomial::from_real(
            2,
            [(vec![1, 0], 1.0), (vec![-1, -1], 1.0), (vec![0, 2], 1.0)],
        )
        .unwrap();
        let co = f.slice_coefficients(1, &[c(2.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(co, vec![c(0.5, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn genus_examples() {
        let tri = NewtonPolytope::from_points(2, [vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(baker_genus(&tri).unwrap(), 0);
        let quintic =
            NewtonPolytope::from_points(2, [vec![0, 0], vec![5, 0], vec![0, 5]]).unwrap();
        assert_eq!(baker_genus(&quintic).unwrap(), 6);
        let seg = NewtonPolytope::from_points(2, [vec![0, 0], vec![4, 2]]).unwrap();
        assert_eq!(baker_genus(&seg).unwrap(), 0);
        let cube = NewtonPolytope::from_points(3, [vec![0, 0, 0], vec![1, 1, 1]]).unwrap();
        assert_eq!(baker_genus(&cube), Err(LaurentError::NotPlanar(3)));
    }
}
