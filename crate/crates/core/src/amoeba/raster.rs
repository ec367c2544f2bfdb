use super::{AmoebaError, Window};
use crate::laurent::{univariate_roots, LaurentPolynomial};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;
use std::fmt::Write as _;

/// Angular bisection depth used where consecutive samples of a root drift
/// more than one pixel apart.
const MAX_REFINE_DEPTH: usize = 8;

/// Pixel membership of an amoeba (or of its moment-map image) together with
/// the number of sampled witness points that landed in each pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct AmoebaRaster {
    window: Window,
    /// Row-major: index `j * resolution + i`.
    hits: Vec<u32>,
}

impl AmoebaRaster {
    fn from_hits(window: Window, hits: Vec<u32>) -> Self {
        debug_assert_eq!(hits.len(), window.resolution * window.resolution);
        Self { window, hits }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn resolution(&self) -> usize {
        self.window.resolution
    }

    pub fn is_member(&self, i: usize, j: usize) -> bool {
        self.hits(i, j) > 0
    }

    pub fn hits(&self, i: usize, j: usize) -> u32 {
        self.hits[j * self.window.resolution + i]
    }

    pub fn membership(&self) -> Vec<bool> {
        self.hits.iter().map(|&h| h > 0).collect()
    }

    pub fn marked_count(&self) -> usize {
        self.hits.iter().filter(|&&h| h > 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.marked_count() == 0
    }

    /// Marked pixel centers, row by row.
    pub fn marked_centers(&self) -> Vec<[f64; 2]> {
        let n = self.window.resolution;
        (0..n)
            .flat_map(|j| (0..n).map(move |i| (i, j)))
            .filter(|&(i, j)| self.is_member(i, j))
            .map(|(i, j)| self.window.center(i, j))
            .collect()
    }

    /// `x,y,member,hits` with one line per pixel center, rows bottom-up.
    pub fn to_csv(&self) -> String {
        let n = self.window.resolution;
        let mut out = String::from("x,y,member,hits\n");
        for j in 0..n {
            for i in 0..n {
                let [x, y] = self.window.center(i, j);
                let h = self.hits(i, j);
                // adding 0.0 turns -0.0 into 0.0
                let _ = writeln!(out, "{:.6},{:.6},{},{}", x + 0.0, y + 0.0, u8::from(h > 0), h);
            }
        }
        out
    }
}

/// Sampled witnesses along one fiber `{|fixed variable| = e^s}`.
struct Slicer<'a, M> {
    f: &'a LaurentPolynomial,
    free: usize,
    angular: usize,
    window: Window,
    map: M,
}

/// A root of the slice, keyed by `log |root|`, and its image point.
type Sample = Vec<(f64, [f64; 2])>;

impl<M> Slicer<'_, M>
where
    M: Fn(f64, Complex64, Complex64) -> [f64; 2] + Sync,
{
    fn sample(&self, s: f64, theta: f64) -> Sample {
        let fixed = Complex64::from_polar(s.exp(), theta);
        let mut vals = [fixed, fixed];
        vals[self.free] = Complex64::new(1.0, 0.0);
        let coeffs = self.f.slice_coefficients(self.free, &vals);
        let Ok(set) = univariate_roots(&coeffs) else {
            return Vec::new();
        };
        let mut out: Sample = set
            .roots
            .into_iter()
            .filter(|r| r.norm() > 0.0 && r.is_finite())
            .map(|r| (r.norm().ln(), (self.map)(s, fixed, r)))
            .collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// Chebyshev distance in pixels, after clamping both points to the
    /// window grown by one pixel so that excursions far outside do not count.
    fn pixel_gap(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let w = &self.window;
        let (dx, dy) = (w.dx(), w.dy());
        let cx = |v: f64| v.clamp(w.xmin - dx, w.xmax + dx);
        let cy = |v: f64| v.clamp(w.ymin - dy, w.ymax + dy);
        ((cx(a[0]) - cx(b[0])).abs() / dx).max((cy(a[1]) - cy(b[1])).abs() / dy)
    }

    fn close(&self, a: &Sample, b: &Sample) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(p, q)| self.pixel_gap(p.1, q.1) <= 1.0)
    }

    fn refine(&self, s: f64, t0: f64, a: &Sample, t1: f64, b: &Sample, depth: usize, out: &mut Vec<[f64; 2]>) {
        if depth == MAX_REFINE_DEPTH || self.close(a, b) {
            return;
        }
        let tm = 0.5 * (t0 + t1);
        let m = self.sample(s, tm);
        out.extend(m.iter().map(|p| p.1));
        self.refine(s, t0, a, tm, &m, depth + 1, out);
        self.refine(s, tm, &m, t1, b, depth + 1, out);
    }

    fn slice(&self, s: f64) -> Vec<[f64; 2]> {
        let k = self.angular;
        let samples: Vec<Sample> = (0..k).map(|j| self.sample(s, TAU * j as f64 / k as f64)).collect();
        let mut out: Vec<[f64; 2]> = samples.iter().flatten().map(|p| p.1).collect();
        for j in 0..k {
            let t0 = TAU * j as f64 / k as f64;
            let t1 = TAU * (j + 1) as f64 / k as f64;
            self.refine(s, t0, &samples[j], t1, &samples[(j + 1) % k], 0, &mut out);
        }
        out
    }
}

fn check_bivariate(f: &LaurentPolynomial, angular: usize) -> Result<(), AmoebaError> {
    if f.num_vars() != 2 {
        return Err(AmoebaError::NotBivariate(f.num_vars()));
    }
    if angular < 4 {
        return Err(AmoebaError::AngularSamples(angular));
    }
    Ok(())
}

fn depends_on(f: &LaurentPolynomial, var: usize) -> bool {
    let (lo, hi) = f.degree_range(var);
    lo < hi
}

/// Bins the witnesses of one pass; `lines[k]` are the fixed log-moduli.
fn run_pass<M>(slicer: &Slicer<'_, M>, lines: &[f64], window: &Window) -> Vec<Vec<(usize, usize)>>
where
    M: Fn(f64, Complex64, Complex64) -> [f64; 2] + Sync,
{
    lines
        .par_iter()
        .map(|&s| {
            slicer
                .slice(s)
                .into_iter()
                .filter_map(|p| window.pixel_of(p))
                .collect()
        })
        .collect()
}

fn accumulate(window: &Window, passes: &[Vec<Vec<(usize, usize)>>]) -> Vec<u32> {
    let n = window.resolution;
    let mut hits = vec![0u32; n * n];
    for pass in passes {
        for line in pass {
            for &(i, j) in line {
                hits[j * n + i] += 1;
            }
        }
    }
    hits
}

/// Rasterizes `Log(V_f)` over the window.
///
/// Each pixel column is sliced at its center abscissa: for `angular`
/// equally spaced phases of the first variable the second is solved for and
/// `(x, log|w|)` is binned; a second pass slices rows the same way with the
/// roles swapped. Phases are bisected locally where consecutive roots land
/// more than a pixel apart. A variable the polynomial does not depend on is
/// simply never solved for. Output does not depend on the thread count.
pub fn rasterize_amoeba(f: &LaurentPolynomial, window: &Window, angular: usize) -> Result<AmoebaRaster, AmoebaError> {
    check_bivariate(f, angular)?;
    let n = window.resolution;
    let mut passes = Vec::new();
    if !f.is_monomial() {
        if depends_on(f, 1) {
            let cols: Vec<f64> = (0..n).map(|i| window.center(i, 0)[0]).collect();
            let slicer = Slicer {
                f,
                free: 1,
                angular,
                window: *window,
                map: |s: f64, _: Complex64, w: Complex64| [s, w.norm().ln()],
            };
            passes.push(run_pass(&slicer, &cols, window));
        }
        if depends_on(f, 0) {
            let rows: Vec<f64> = (0..n).map(|j| window.center(0, j)[1]).collect();
            let slicer = Slicer {
                f,
                free: 0,
                angular,
                window: *window,
                map: |s: f64, _: Complex64, z: Complex64| [z.norm().ln(), s],
            };
            passes.push(run_pass(&slicer, &rows, window));
        }
    }
    Ok(AmoebaRaster::from_hits(*window, accumulate(window, &passes)))
}

/// `Σ |z^m| m / Σ |z^m|` over the given lattice points.
pub fn moment_map(support: &[Vec<i64>], z: &[Complex64]) -> Result<Vec<f64>, AmoebaError> {
    let logs = super::log_map(z)?;
    Ok(moment_from_logs(support, &logs))
}

fn moment_from_logs(support: &[Vec<i64>], logs: &[f64]) -> Vec<f64> {
    let weights: Vec<f64> = support
        .iter()
        .map(|m| m.iter().zip(logs).map(|(&e, l)| e as f64 * l).sum())
        .collect();
    let top = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    let mut acc = vec![0.0; logs.len()];
    for (m, w) in support.iter().zip(&weights) {
        let e = (w - top).exp();
        total += e;
        for (a, &c) in acc.iter_mut().zip(m) {
            *a += e * c as f64;
        }
    }
    acc.iter().map(|a| a / total).collect()
}

/// Rasterizes the moment-map image of `V_f` over the bounding box of the
/// Newton polygon.
///
/// The window is padded by half a pixel so that lattice points of the
/// polygon sit on pixel centers. Fibers are sampled at `resolution` log
/// moduli evenly spread over `[-log_extent, log_extent]` in both passes.
pub fn compactified_amoeba(
    f: &LaurentPolynomial,
    resolution: usize,
    log_extent: f64,
    angular: usize,
) -> Result<AmoebaRaster, AmoebaError> {
    check_bivariate(f, angular)?;
    let poly = f.newton_polytope()?;
    if poly.affine_dim() != 2 {
        return Err(AmoebaError::DegeneratePolygon);
    }
    let support: Vec<Vec<i64>> = poly.lattice_points().into_iter().map(|lp| lp.point).collect();
    let bound = |k: usize, pick: fn(i64, i64) -> i64| {
        poly.vertices().iter().map(|v| v[k]).reduce(pick).unwrap() as f64
    };
    let (x0, x1) = (bound(0, i64::min), bound(0, i64::max));
    let (y0, y1) = (bound(1, i64::min), bound(1, i64::max));
    if resolution < 16 {
        return Err(AmoebaError::InvalidWindow);
    }
    let px = (x1 - x0) / (resolution - 1) as f64 / 2.0;
    let py = (y1 - y0) / (resolution - 1) as f64 / 2.0;
    let window = Window::new(x0 - px, x1 + px, y0 - py, y1 + py, resolution)?;
    if !(log_extent > 0.0 && log_extent.is_finite()) {
        return Err(AmoebaError::InvalidWindow);
    }
    let lines: Vec<f64> = (0..resolution)
        .map(|k| -log_extent + 2.0 * log_extent * (k as f64 + 0.5) / resolution as f64)
        .collect();
    let support = &support;
    let mu_w = move |s: f64, _: Complex64, w: Complex64| {
        let v = moment_from_logs(support, &[s, w.norm().ln()]);
        [v[0], v[1]]
    };
    let mu_z = move |s: f64, _: Complex64, z: Complex64| {
        let v = moment_from_logs(support, &[z.norm().ln(), s]);
        [v[0], v[1]]
    };
    let mut passes = Vec::new();
    if depends_on(f, 1) {
        let slicer = Slicer {
            f,
            free: 1,
            angular,
            window,
            map: mu_w,
        };
        passes.push(run_pass(&slicer, &lines, &window));
    }
    if depends_on(f, 0) {
        let slicer = Slicer {
            f,
            free: 0,
            angular,
            window,
            map: mu_z,
        };
        passes.push(run_pass(&slicer, &lines, &window));
    }
    Ok(AmoebaRaster::from_hits(window, accumulate(&window, &passes)))
}
