use super::LaurentError;
use crate::intlin::{self, IntMatrix};
use std::collections::BTreeSet;

/// Lattice polytope given as the convex hull of finitely many integer
/// points in `Z^n`, `1 <= n <= 4`.
///
/// Only extreme points are kept as vertices. A facet description is built
/// inside the affine hull (after an injective coordinate projection) with
/// exact integer arithmetic and is used for membership and lattice-point
/// enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    hull: Hull,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Hull {
    origin: Vec<i128>,
    /// basis of the direction space of the affine hull
    directions: IntMatrix,
    /// coordinates that parametrize the affine hull injectively
    pivots: Vec<usize>,
    /// `normal . y <= offset` in projected coordinates
    facets: Vec<(Vec<i128>, i128)>,
}

/// A lattice point of a polytope, flagged when it lies in the topological
/// interior (off every proper face; never true for lower-dimensional hulls).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticePoint {
    pub point: Vec<i64>,
    pub interior: bool,
}

impl NewtonPolytope {
    pub fn from_points<I>(dim: usize, points: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = Vec<i64>>,
    {
        if dim == 0 || dim > 4 {
            return Err(LaurentError::UnsupportedDimension(dim));
        }
        let mut set = BTreeSet::new();
        for p in points {
            if p.len() != dim {
                return Err(LaurentError::ExponentLength {
                    got: p.len(),
                    expected: dim,
                    exp: p,
                });
            }
            set.insert(p);
        }
        if set.is_empty() {
            return Err(LaurentError::Empty);
        }
        let points: Vec<Vec<i64>> = set.into_iter().collect();
        let wide: Vec<Vec<i128>> = points
            .iter()
            .map(|p| p.iter().map(|&x| i128::from(x)).collect())
            .collect();

        let origin = wide[0].clone();
        let mut directions: IntMatrix = Vec::new();
        for p in &wide[1..] {
            let d: Vec<i128> = p.iter().zip(&origin).map(|(a, b)| a - b).collect();
            let mut trial = directions.clone();
            trial.push(d.clone());
            if intlin::rank(&trial) > directions.len() {
                directions = trial;
            }
        }
        let r = directions.len();
        let pivots = choose_pivots(&directions, dim);
        let project = |p: &[i128]| -> Vec<i128> { pivots.iter().map(|&c| p[c] - origin[c]).collect() };
        let projected: Vec<Vec<i128>> = wide.iter().map(|p| project(p)).collect();

        let candidates = non_midpoints(&projected);
        let facets = if r == 0 {
            Vec::new()
        } else {
            enumerate_facets(&projected, &candidates, r)
        };

        let vertices: Vec<Vec<i64>> = if r == 0 {
            vec![points[0].clone()]
        } else {
            candidates
                .iter()
                .filter(|&&i| {
                    let tight: IntMatrix = facets
                        .iter()
                        .filter(|(n, b)| dot(n, &projected[i]) == *b)
                        .map(|(n, _)| n.clone())
                        .collect();
                    intlin::rank(&tight) == r
                })
                .map(|&i| points[i].clone())
                .collect()
        };

        Ok(Self {
            dim,
            vertices,
            hull: Hull {
                origin,
                directions,
                pivots,
                facets,
            },
        })
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.hull.directions.len()
    }

    /// Extreme points in lexicographic order.
    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    fn project(&self, p: &[i128]) -> Vec<i128> {
        self.hull
            .pivots
            .iter()
            .map(|&c| p[c] - self.hull.origin[c])
            .collect()
    }

    fn in_affine_hull(&self, p: &[i128]) -> bool {
        let d: Vec<i128> = p.iter().zip(&self.hull.origin).map(|(a, b)| a - b).collect();
        if d.iter().all(|&x| x == 0) {
            return true;
        }
        let mut m = self.hull.directions.clone();
        m.push(d);
        intlin::rank(&m) == self.hull.directions.len()
    }

    fn classify(&self, p: &[i64]) -> Option<bool> {
        if p.len() != self.dim {
            return None;
        }
        let wide: Vec<i128> = p.iter().map(|&x| i128::from(x)).collect();
        if !self.in_affine_hull(&wide) {
            return None;
        }
        let y = self.project(&wide);
        let mut strict = true;
        for (n, b) in &self.hull.facets {
            let v = dot(n, &y);
            if v > *b {
                return None;
            }
            if v == *b {
                strict = false;
            }
        }
        Some(strict && self.affine_dim() == self.dim)
    }

    /// Closed-polytope membership for an integer point.
    pub fn contains(&self, p: &[i64]) -> bool {
        self.classify(p).is_some()
    }

    /// Topological interior membership in `R^n`.
    pub fn is_interior(&self, p: &[i64]) -> bool {
        self.classify(p) == Some(true)
    }

    /// All lattice points, sorted lexicographically.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let lo: Vec<i64> = (0..self.dim)
            .map(|k| self.vertices.iter().map(|v| v[k]).min().unwrap())
            .collect();
        let hi: Vec<i64> = (0..self.dim)
            .map(|k| self.vertices.iter().map(|v| v[k]).max().unwrap())
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if let Some(interior) = self.classify(&cur) {
                out.push(LatticePoint {
                    point: cur.clone(),
                    interior,
                });
            }
            // odometer increment, last coordinate fastest -> lexicographic order
            let mut k = self.dim;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    for j in k + 1..self.dim {
                        cur[j] = lo[j];
                    }
                    break;
                }
            }
        }
    }
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coordinates on which the direction space projects isomorphically.
fn choose_pivots(directions: &IntMatrix, dim: usize) -> Vec<usize> {
    let r = directions.len();
    if r == 0 {
        return Vec::new();
    }
    let mut cols: Vec<usize> = (0..r).collect();
    loop {
        let minor: IntMatrix = directions
            .iter()
            .map(|row| cols.iter().map(|&c| row[c]).collect())
            .collect();
        if intlin::det(&minor) != 0 {
            return cols;
        }
        // next combination
        let mut i = r;
        loop {
            assert!(i > 0, "direction space has full rank on some coordinate set");
            i -= 1;
            if cols[i] < dim - r + i {
                cols[i] += 1;
                for j in i + 1..r {
                    cols[j] = cols[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Indices of points that are not the midpoint of two other points of the
/// set. Midpoints are never extreme, and for dense lattice supports this
/// leaves little more than the vertices.
fn non_midpoints(points: &[Vec<i128>]) -> Vec<usize> {
    let set: BTreeSet<&Vec<i128>> = points.iter().collect();
    (0..points.len())
        .filter(|&i| {
            let p = &points[i];
            !points.iter().any(|q| {
                if q == p {
                    return false;
                }
                let mirror: Vec<i128> = p.iter().zip(q).map(|(a, b)| 2 * a - b).collect();
                set.contains(&mirror)
            })
        })
        .collect()
}

/// Generalized cross product: the normal to `r - 1` vectors in `R^r`.
fn normal(vectors: &[Vec<i128>], r: usize) -> Vec<i128> {
    (0..r)
        .map(|k| {
            let minor: IntMatrix = vectors
                .iter()
                .map(|v| (0..r).filter(|&c| c != k).map(|c| v[c]).collect())
                .collect();
            let sign = if k % 2 == 0 { 1 } else { -1 };
            sign * intlin::det(&minor)
        })
        .collect()
}

fn enumerate_facets(points: &[Vec<i128>], candidates: &[usize], r: usize) -> Vec<(Vec<i128>, i128)> {
    let mut facets = BTreeSet::new();
    let mut combo: Vec<usize> = (0..r).collect();
    let m = candidates.len();
    if m < r {
        return Vec::new();
    }
    loop {
        let base = &points[candidates[combo[0]]];
        let vectors: Vec<Vec<i128>> = combo[1..]
            .iter()
            .map(|&j| points[candidates[j]].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let n = intlin::primitive(&normal(&vectors, r));
        if n.iter().any(|&x| x != 0) {
            let b = dot(&n, base);
            let mut above = false;
            let mut below = false;
            for &i in candidates {
                let v = dot(&n, &points[i]) - b;
                above |= v > 0;
                below |= v < 0;
                if above && below {
                    break;
                }
            }
            if !above {
                facets.insert((n, b));
            } else if !below {
                facets.insert((n.iter().map(|x| -x).collect(), -b));
            }
        }
        // next r-combination of 0..m
        let mut i = r;
        loop {
            if i == 0 {
                return facets.into_iter().collect();
            }
            i -= 1;
            if combo[i] < m - r + i {
                combo[i] += 1;
                for j in i + 1..r {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}
