//! Amoebas of bivariate Laurent polynomials: rasterization by torus-fiber
//! slicing, the Ronkin function, complement components with their orders,
//! the tropical spine, and the moment-map compactification.

mod components;
mod raster;
mod ronkin;
mod spine;

pub use components::{
    complement_components, distance_to_marked, spine_retract_check, ComplementComponent,
    RetractReport,
};
pub use raster::{compactified_amoeba, moment_map, rasterize_amoeba, AmoebaRaster};
pub use ronkin::{ronkin_order, ronkin_value, RonkinValue, DEFAULT_GRID, ORDER_STEP};
pub use spine::{build_spine, AffineFunction, SpineEdge, SpineEdgeKind, TropicalSpine};

use crate::laurent::{LaurentError, LaurentPolynomial};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AmoebaError {
    #[error("window needs xmin < xmax, ymin < ymax and resolution >= 16")]
    InvalidWindow,
    #[error("at least 4 angular samples are needed, got {0}")]
    AngularSamples(usize),
    #[error("amoeba rasterization needs a polynomial in 2 variables, got {0}")]
    NotBivariate(usize),
    #[error("ronkin quadrature supports 1 to 3 variables, got {0}")]
    RonkinDimension(usize),
    #[error("quadrature grid must be even and at least 64, got {0}")]
    GridTooSmall(usize),
    #[error("point is too close to the amoeba: gradient {gradient:?} is not integral")]
    TooCloseToAmoeba { gradient: Vec<f64> },
    #[error("rounded gradient {order:?} lies outside the Newton polygon")]
    OrderOutsidePolytope { order: Vec<i64> },
    #[error("two components share order {order:?}; resolution too low")]
    DuplicateOrder { order: Vec<i64> },
    #[error("Newton polygon is degenerate (not 2-dimensional)")]
    DegeneratePolygon,
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// A rectangle in log space sampled by `resolution x resolution` pixels.
///
/// Pixel `(i, j)` covers `[xmin + i dx, xmin + (i+1) dx) x [ymin + j dy, ..)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub resolution: usize,
}

impl Window {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64, resolution: usize) -> Result<Self, AmoebaError> {
        let finite = [xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite());
        if !finite || xmin >= xmax || ymin >= ymax || resolution < 16 {
            return Err(AmoebaError::InvalidWindow);
        }
        Ok(Self {
            xmin,
            xmax,
            ymin,
            ymax,
            resolution,
        })
    }

    pub fn square(lo: f64, hi: f64, resolution: usize) -> Result<Self, AmoebaError> {
        Self::new(lo, hi, lo, hi, resolution)
    }

    pub fn dx(&self) -> f64 {
        (self.xmax - self.xmin) / self.resolution as f64
    }

    pub fn dy(&self) -> f64 {
        (self.ymax - self.ymin) / self.resolution as f64
    }

    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.xmin + (i as f64 + 0.5) * self.dx(),
            self.ymin + (j as f64 + 0.5) * self.dy(),
        ]
    }

    pub fn column(&self, x: f64) -> Option<usize> {
        cell(x, self.xmin, self.dx(), self.resolution)
    }

    pub fn row(&self, y: f64) -> Option<usize> {
        cell(y, self.ymin, self.dy(), self.resolution)
    }

    pub fn pixel_of(&self, p: [f64; 2]) -> Option<(usize, usize)> {
        Some((self.column(p[0])?, self.row(p[1])?))
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.xmin && p[0] <= self.xmax && p[1] >= self.ymin && p[1] <= self.ymax
    }

    /// The same rectangle at twice the resolution.
    pub fn doubled(&self) -> Self {
        Self {
            resolution: 2 * self.resolution,
            ..*self
        }
    }
}

fn cell(v: f64, lo: f64, step: f64, n: usize) -> Option<usize> {
    let k = ((v - lo) / step).floor();
    (k >= 0.0 && k < n as f64).then_some(k as usize)
}

/// Componentwise `log |z_j|`.
pub fn log_map(z: &[Complex64]) -> Result<Vec<f64>, AmoebaError> {
    z.iter()
        .enumerate()
        .map(|(index, c)| {
            if *c == Complex64::new(0.0, 0.0) {
                Err(LaurentError::ZeroCoordinate { index }.into())
            } else {
                Ok(c.norm().ln())
            }
        })
        .collect()
}

/// Patchworking polynomial on `d Δ_2` with coefficients
/// `exp(-λ |m - b|^2) (-1)^(m1 + m2)`, `b` the barycenter of the triangle.
///
/// For `λ` large enough every lattice point of the triangle owns a
/// complement component, so the amoeba has the maximal number of holes.
pub fn viro_polynomial(d: i64, lambda: f64) -> LaurentPolynomial {
    let b = d as f64 / 3.0;
    let mut terms = Vec::new();
    for m1 in 0..=d {
        for m2 in 0..=d - m1 {
            let r2 = (m1 as f64 - b).powi(2) + (m2 as f64 - b).powi(2);
            let sign = if (m1 + m2) % 2 == 0 { 1.0 } else { -1.0 };
            terms.push((vec![m1, m2], sign * (-lambda * r2).exp()));
        }
    }
    LaurentPolynomial::from_real(2, terms).expect("nonempty support")
}

/// The plane quintic with default patchworking coefficients.
pub fn viro_quintic() -> LaurentPolynomial {
    viro_polynomial(5, 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn log_map_examples() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(log_map(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap(), vec![0.0, 0.0]);
        let v = log_map(&[c(E, 0.0), c(E * E, 0.0)]).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15 && (v[1] - 2.0).abs() < 1e-15);
        let v = log_map(&[c(-E, 0.0), c(0.0, E)]).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
        assert!(matches!(
            log_map(&[c(0.0, 0.0), c(1.0, 0.0)]),
            Err(AmoebaError::Laurent(LaurentError::ZeroCoordinate { index: 0 }))
        ));
    }

    #[test]
    fn window_pixels_are_half_open() {
        let w = Window::square(0.0, 16.0, 16).unwrap();
        assert_eq!(w.pixel_of([0.0, 0.0]), Some((0, 0)));
        assert_eq!(w.pixel_of([1.0, 2.999]), Some((1, 2)));
        assert_eq!(w.pixel_of([16.0, 1.0]), None);
        assert_eq!(w.pixel_of([-1e-12, 1.0]), None);
        assert_eq!(w.center(0, 15), [0.5, 15.5]);
        assert!(Window::square(0.0, 1.0, 8).is_err());
        assert!(Window::new(1.0, 0.0, 0.0, 1.0, 32).is_err());
    }

    #[test]
    fn viro_quintic_support() {
        let f = viro_quintic();
        assert_eq!(f.terms().len(), 21);
        let p = f.newton_polytope().unwrap();
        assert_eq!(crate::laurent::baker_genus(&p).unwrap(), 6);
    }
}
