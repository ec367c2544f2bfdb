use super::ronkin::{ronkin_order, ronkin_value};
use super::spine::TropicalSpine;
use super::{AmoebaError, AmoebaRaster};
use crate::laurent::LaurentPolynomial;
use serde::Serialize;
use std::collections::{BTreeSet, VecDeque};

/// A 4-connected region of unmarked pixels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplementComponent {
    /// `(i, j)` pixel indices in row-major order.
    pub pixels: Vec<(usize, usize)>,
    /// False when the region touches the window frame.
    pub bounded: bool,
    /// Pixel farthest from the rasterized amoeba.
    pub deep_pixel: (usize, usize),
    /// Chessboard distance in pixels from the deep pixel to the amoeba
    /// (`None` when nothing is marked).
    pub depth: Option<u32>,
    /// `None` when the Ronkin gradient at the deep pixel is not integral.
    pub order: Option<Vec<i64>>,
    /// `N_f(x) - <order, x>` at the deep pixel.
    pub ronkin_constant: Option<f64>,
}

/// Chessboard distance from every pixel to the nearest marked pixel, row
/// major; `u32::MAX` everywhere when nothing is marked.
pub fn distance_to_marked(raster: &AmoebaRaster) -> Vec<u32> {
    let n = raster.resolution();
    let inf = u32::MAX;
    let mut d: Vec<u32> = raster.membership().iter().map(|&m| if m { 0 } else { inf }).collect();
    let relax = |d: &mut Vec<u32>, at: usize, from: usize| {
        let v = d[from].saturating_add(1);
        if v < d[at] {
            d[at] = v;
        }
    };
    for j in 0..n {
        for i in 0..n {
            let at = j * n + i;
            if i > 0 {
                relax(&mut d, at, at - 1);
            }
            if j > 0 {
                relax(&mut d, at, at - n);
                if i > 0 {
                    relax(&mut d, at, at - n - 1);
                }
                if i + 1 < n {
                    relax(&mut d, at, at - n + 1);
                }
            }
        }
    }
    for j in (0..n).rev() {
        for i in (0..n).rev() {
            let at = j * n + i;
            if i + 1 < n {
                relax(&mut d, at, at + 1);
            }
            if j + 1 < n {
                relax(&mut d, at, at + n);
                if i + 1 < n {
                    relax(&mut d, at, at + n + 1);
                }
                if i > 0 {
                    relax(&mut d, at, at + n - 1);
                }
            }
        }
    }
    d
}

/// Flood fill of unmarked pixels: each region's pixels (row-major) and
/// whether it avoids the frame.
pub(crate) fn label_regions(raster: &AmoebaRaster) -> Vec<(Vec<(usize, usize)>, bool)> {
    let n = raster.resolution();
    let member = raster.membership();
    let mut seen = vec![false; n * n];
    let mut out = Vec::new();
    for start in 0..n * n {
        if member[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut pixels = Vec::new();
        let mut bounded = true;
        while let Some(p) = queue.pop_front() {
            let (i, j) = (p % n, p / n);
            pixels.push((i, j));
            if i == 0 || j == 0 || i + 1 == n || j + 1 == n {
                bounded = false;
            }
            let mut push = |q: usize| {
                if !member[q] && !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            };
            if i > 0 {
                push(p - 1);
            }
            if i + 1 < n {
                push(p + 1);
            }
            if j > 0 {
                push(p - n);
            }
            if j + 1 < n {
                push(p + n);
            }
        }
        pixels.sort_by_key(|&(i, j)| (j, i));
        out.push((pixels, bounded));
    }
    out
}

/// Complement components of a raster with their orders and Ronkin
/// constants, evaluated at each component's deepest pixel.
///
/// Components whose deepest pixel still sees a non-integral gradient keep
/// an undetermined order; two components with the same order mean the
/// raster is too coarse and are reported as an error.
pub fn complement_components(
    raster: &AmoebaRaster,
    f: &LaurentPolynomial,
    grid: usize,
) -> Result<Vec<ComplementComponent>, AmoebaError> {
    if f.num_vars() != 2 {
        return Err(AmoebaError::NotBivariate(f.num_vars()));
    }
    let n = raster.resolution();
    let window = raster.window();
    let dist = distance_to_marked(raster);
    let mut out = Vec::new();
    let mut orders = BTreeSet::new();
    for (pixels, bounded) in label_regions(raster) {
        let &(di, dj) = if dist.iter().all(|&d| d == u32::MAX) {
            let mid = (n as f64 - 1.0) / 2.0;
            pixels
                .iter()
                .min_by(|a, b| {
                    let da = (a.0 as f64 - mid).powi(2) + (a.1 as f64 - mid).powi(2);
                    let db = (b.0 as f64 - mid).powi(2) + (b.1 as f64 - mid).powi(2);
                    da.total_cmp(&db)
                })
                .unwrap()
        } else {
            // first pixel in row-major order among the deepest
            pixels
                .iter()
                .rev()
                .max_by_key(|&&(i, j)| dist[j * n + i])
                .unwrap()
        };
        let depth = dist[dj * n + di];
        let x = window.center(di, dj);
        let (order, ronkin_constant) = match ronkin_order(f, &x, grid) {
            Ok(order) => {
                let value = ronkin_value(f, &x, grid)?.value;
                let c = value - order[0] as f64 * x[0] - order[1] as f64 * x[1];
                if !orders.insert(order.clone()) {
                    return Err(AmoebaError::DuplicateOrder { order });
                }
                (Some(order), Some(c))
            }
            Err(AmoebaError::TooCloseToAmoeba { .. }) => (None, None),
            Err(e) => return Err(e),
        };
        out.push(ComplementComponent {
            pixels,
            bounded,
            deep_pixel: (di, dj),
            depth: (depth != u32::MAX).then_some(depth),
            order,
            ronkin_constant,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetractReport {
    pub passed: bool,
    pub points_checked: usize,
    /// Sampled spine points more than 2 pixels away from every marked pixel.
    pub violations: Vec<[f64; 2]>,
    pub raster_bounded_components: usize,
    pub spine_bounded_faces: usize,
}

/// Pixel-level consistency of a spine with an amoeba raster: sampled spine
/// points inside the window lie within 2 pixels of the amoeba, and the
/// raster has as many bounded complement components as the spine has
/// bounded cells.
pub fn spine_retract_check(raster: &AmoebaRaster, spine: &TropicalSpine) -> RetractReport {
    let window = raster.window();
    let n = raster.resolution();
    let dist = distance_to_marked(raster);
    let step = 0.5 * window.dx().min(window.dy());
    let mut checked = 0;
    let mut violations = Vec::new();
    for edge in spine.edges() {
        let (p, d, t0, t1) = spine.parametric(edge);
        let Some((a, b)) = clip(window, p, d, t0, t1) else {
            continue;
        };
        let len = (b - a) * d[0].hypot(d[1]);
        let count = (len / step).ceil() as usize + 1;
        for k in 0..count {
            let t = if count == 1 { a } else { a + (b - a) * k as f64 / (count - 1) as f64 };
            let q = [p[0] + t * d[0], p[1] + t * d[1]];
            let Some((i, j)) = window.pixel_of(q) else {
                continue;
            };
            checked += 1;
            if dist[j * n + i] > 2 {
                violations.push(q);
            }
        }
    }
    let raster_bounded = label_regions(raster).iter().filter(|r| r.1).count();
    let spine_bounded = spine.bounded_faces().len();
    RetractReport {
        passed: violations.is_empty() && raster_bounded == spine_bounded,
        points_checked: checked,
        violations,
        raster_bounded_components: raster_bounded,
        spine_bounded_faces: spine_bounded,
    }
}

/// Parameter interval of `p + t d`, `t in [t0, t1]`, inside the window.
fn clip(w: &super::Window, p: [f64; 2], d: [f64; 2], mut t0: f64, mut t1: f64) -> Option<(f64, f64)> {
    for (k, (lo, hi)) in [(w.xmin, w.xmax), (w.ymin, w.ymax)].into_iter().enumerate() {
        if d[k] == 0.0 {
            if p[k] < lo || p[k] > hi {
                return None;
            }
        } else {
            let (mut a, mut b) = ((lo - p[k]) / d[k], (hi - p[k]) / d[k]);
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            t0 = t0.max(a);
            t1 = t1.min(b);
        }
    }
    (t0 <= t1).then_some((t0, t1))
}
