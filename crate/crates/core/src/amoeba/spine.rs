use super::ComplementComponent;
use crate::laurent::NewtonPolytope;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};

/// `x -> <grad, x> + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineFunction {
    pub grad: [i64; 2],
    pub offset: f64,
}

impl AffineFunction {
    pub fn new(grad: [i64; 2], offset: f64) -> Self {
        Self { grad, offset }
    }
}

type Point = [BigRational; 2];

#[derive(Debug, Clone, PartialEq)]
pub enum SpineEdgeKind {
    Segment { from: usize, to: usize },
    /// Leaves vertex `from` in direction `dir`.
    Ray { from: usize },
    /// A full line through `point`, when no vertex bounds the tie.
    Line { point: Point },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpineEdge {
    pub kind: SpineEdgeKind,
    /// Primitive direction; from `from` to `to` for segments, outward for rays.
    pub dir: [i64; 2],
    /// Lattice length of the gradient difference across the edge.
    pub weight: i64,
    /// Indices of the two functions attaining the maximum on either side.
    pub between: [usize; 2],
}

/// Corner locus of `max_k (<g_k, x> + c_k)` in the plane, computed exactly.
///
/// Offsets are rounded to `1e-9` and handled as rationals, so the
/// combinatorics (which functions tie where, which cells are bounded) are
/// exact for the rounded data.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalSpine {
    functions: Vec<AffineFunction>,
    vertices: Vec<Point>,
    edges: Vec<SpineEdge>,
    bounded_faces: Vec<usize>,
}

fn rational_offset(c: f64) -> BigRational {
    BigRational::new(BigInt::from((c * 1e9).round() as i64), BigInt::from(1_000_000_000))
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn dot(g: [i64; 2], p: &Point) -> BigRational {
    int(g[0]) * &p[0] + int(g[1]) * &p[1]
}

struct RawEdge {
    lo: Option<Point>,
    hi: Option<Point>,
    base: Point,
    d: [i64; 2],
    between: [usize; 2],
}

/// Spine of the components with determined orders.
pub fn build_spine(components: &[ComplementComponent]) -> TropicalSpine {
    let functions = components
        .iter()
        .filter_map(|c| {
            let o = c.order.as_ref()?;
            Some(AffineFunction::new([o[0], o[1]], c.ronkin_constant?))
        })
        .collect();
    TropicalSpine::from_functions(functions)
}

impl TropicalSpine {
    pub fn from_functions(functions: Vec<AffineFunction>) -> Self {
        let q: Vec<BigRational> = functions.iter().map(|f| rational_offset(f.offset)).collect();
        // among equal gradients only the largest offset can reach the max
        let mut best: BTreeMap<[i64; 2], usize> = BTreeMap::new();
        for (k, f) in functions.iter().enumerate() {
            match best.get(&f.grad) {
                Some(&b) if q[b] >= q[k] => {}
                _ => {
                    best.insert(f.grad, k);
                }
            }
        }
        let active: Vec<usize> = best.values().copied().collect();
        let value = |k: usize, p: &Point| dot(functions[k].grad, p) + &q[k];

        let mut raw = Vec::new();
        for (ai, &i) in active.iter().enumerate() {
            for &j in &active[ai + 1..] {
                let gi = functions[i].grad;
                let gj = functions[j].grad;
                let a = [gi[0] - gj[0], gi[1] - gj[1]];
                // tie line <a, x> = q_j - q_i, through p0 along d
                let r = &q[j] - &q[i];
                let norm2 = int(a[0] * a[0] + a[1] * a[1]);
                let p0: Point = [int(a[0]) * &r / &norm2, int(a[1]) * &r / &norm2];
                let d = [-a[1], a[0]];
                let mut lo: Option<BigRational> = None;
                let mut hi: Option<BigRational> = None;
                let mut empty = false;
                for &k in &active {
                    if k == i || k == j {
                        continue;
                    }
                    let gk = functions[k].grad;
                    let dk = [gk[0] - gi[0], gk[1] - gi[1]];
                    let alpha = dk[0] * d[0] + dk[1] * d[1];
                    let beta = dot(dk, &p0) + &q[k] - &q[i];
                    if alpha == 0 {
                        if beta > BigRational::zero() {
                            empty = true;
                            break;
                        }
                        continue;
                    }
                    let bound = -beta / int(alpha);
                    if alpha > 0 {
                        hi = Some(match hi {
                            Some(h) if h <= bound => h,
                            _ => bound,
                        });
                    } else {
                        lo = Some(match lo {
                            Some(l) if l >= bound => l,
                            _ => bound,
                        });
                    }
                }
                if empty {
                    continue;
                }
                if let (Some(l), Some(h)) = (&lo, &hi) {
                    if l >= h {
                        continue;
                    }
                }
                let one = int(1);
                let t_mid = match (&lo, &hi) {
                    (Some(l), Some(h)) => (l + h) / int(2),
                    (Some(l), None) => l + &one,
                    (None, Some(h)) => h - &one,
                    (None, None) => BigRational::zero(),
                };
                let at = |t: &BigRational| -> Point { [&p0[0] + t * int(d[0]), &p0[1] + t * int(d[1])] };
                let mid = at(&t_mid);
                // functions tied along the whole piece have gradients on the
                // line through g_i, g_j; only the extreme two bound cells
                let level = value(i, &mid);
                let tied: Vec<usize> = active.iter().copied().filter(|&k| value(k, &mid) == level).collect();
                let along = |k: usize| {
                    let g = functions[k].grad;
                    g[0] * a[0] + g[1] * a[1]
                };
                let plus = *tied.iter().max_by_key(|&&k| along(k)).unwrap();
                let minus = *tied.iter().min_by_key(|&&k| along(k)).unwrap();
                if plus != i || minus != j {
                    continue;
                }
                raw.push(RawEdge {
                    lo: lo.as_ref().map(at),
                    hi: hi.as_ref().map(at),
                    base: p0,
                    d,
                    between: [i, j],
                });
            }
        }

        let points: BTreeSet<Point> = raw.iter().flat_map(|e| e.lo.iter().chain(e.hi.iter()).cloned()).collect();
        let vertices: Vec<Point> = points.into_iter().collect();
        let index = |p: &Point| vertices.binary_search(p).expect("collected");
        let mut edges: Vec<SpineEdge> = raw
            .into_iter()
            .map(|e| {
                let weight = e.d[0].gcd(&e.d[1]);
                let dir = [e.d[0] / weight, e.d[1] / weight];
                let (kind, dir) = match (&e.lo, &e.hi) {
                    (Some(l), Some(h)) => (
                        SpineEdgeKind::Segment {
                            from: index(l),
                            to: index(h),
                        },
                        dir,
                    ),
                    (Some(l), None) => (SpineEdgeKind::Ray { from: index(l) }, dir),
                    (None, Some(h)) => (SpineEdgeKind::Ray { from: index(h) }, [-dir[0], -dir[1]]),
                    (None, None) => {
                        let flip = if dir[0] < 0 || (dir[0] == 0 && dir[1] < 0) { -1 } else { 1 };
                        (SpineEdgeKind::Line { point: e.base }, [flip * dir[0], flip * dir[1]])
                    }
                };
                SpineEdge {
                    kind,
                    dir,
                    weight,
                    between: e.between,
                }
            })
            .collect();
        edges.sort_by(|a, b| edge_key(a).cmp(&edge_key(b)));

        let bounded_faces = bounded_cells(&functions, &active, &edges);
        Self {
            functions,
            vertices,
            edges,
            bounded_faces,
        }
    }

    pub fn functions(&self) -> &[AffineFunction] {
        &self.functions
    }

    pub fn edges(&self) -> &[SpineEdge] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_exact(&self, k: usize) -> &[BigRational; 2] {
        &self.vertices[k]
    }

    pub fn vertex(&self, k: usize) -> [f64; 2] {
        to_f64(&self.vertices[k])
    }

    pub fn rays(&self) -> impl Iterator<Item = &SpineEdge> {
        self.edges.iter().filter(|e| matches!(e.kind, SpineEdgeKind::Ray { .. }))
    }

    /// Indices of the functions whose cell is bounded.
    pub fn bounded_faces(&self) -> &[usize] {
        &self.bounded_faces
    }

    /// `(p, d, t0, t1)` with the edge equal to `{p + t d : t0 <= t <= t1}`.
    pub fn parametric(&self, e: &SpineEdge) -> ([f64; 2], [f64; 2], f64, f64) {
        let dir = [e.dir[0] as f64, e.dir[1] as f64];
        match &e.kind {
            SpineEdgeKind::Segment { from, to } => {
                let a = self.vertex(*from);
                let b = self.vertex(*to);
                (a, [b[0] - a[0], b[1] - a[1]], 0.0, 1.0)
            }
            SpineEdgeKind::Ray { from } => (self.vertex(*from), dir, 0.0, f64::INFINITY),
            SpineEdgeKind::Line { point } => (to_f64(point), dir, f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Vertices where the weighted primitive directions of the incident
    /// edges do not sum to zero (exact integer arithmetic).
    pub fn balance_defects(&self) -> Vec<usize> {
        let mut sums = vec![[0i64; 2]; self.vertices.len()];
        for e in &self.edges {
            let w = [e.weight * e.dir[0], e.weight * e.dir[1]];
            match e.kind {
                SpineEdgeKind::Segment { from, to } => {
                    sums[from][0] += w[0];
                    sums[from][1] += w[1];
                    sums[to][0] -= w[0];
                    sums[to][1] -= w[1];
                }
                SpineEdgeKind::Ray { from } => {
                    sums[from][0] += w[0];
                    sums[from][1] += w[1];
                }
                SpineEdgeKind::Line { .. } => {}
            }
        }
        (0..sums.len()).filter(|&k| sums[k] != [0, 0]).collect()
    }

    pub fn is_balanced(&self) -> bool {
        self.balance_defects().is_empty()
    }

    /// Number of edges at each vertex.
    pub fn valences(&self) -> Vec<usize> {
        let mut v = vec![0; self.vertices.len()];
        for e in &self.edges {
            match e.kind {
                SpineEdgeKind::Segment { from, to } => {
                    v[from] += 1;
                    v[to] += 1;
                }
                SpineEdgeKind::Ray { from } => v[from] += 1,
                SpineEdgeKind::Line { .. } => {}
            }
        }
        v
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| match &e.kind {
                SpineEdgeKind::Segment { from, to } => json!({
                    "from": from, "to": to, "dir": e.dir, "weight": e.weight, "between": e.between,
                }),
                SpineEdgeKind::Ray { from } => json!({
                    "from": from, "ray_dir": e.dir, "weight": e.weight, "between": e.between,
                }),
                SpineEdgeKind::Line { point } => json!({
                    "line_point": to_f64(point), "line_dir": e.dir, "weight": e.weight, "between": e.between,
                }),
            })
            .collect();
        json!({
            "functions": self.functions,
            "vertices": (0..self.vertices.len()).map(|k| self.vertex(k)).collect::<Vec<_>>(),
            "edges": edges,
            "bounded_faces": self.bounded_faces.len(),
            "balanced": self.is_balanced(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }
}

fn to_f64(p: &Point) -> [f64; 2] {
    [p[0].to_f64().unwrap_or(f64::NAN), p[1].to_f64().unwrap_or(f64::NAN)]
}

fn edge_key(e: &SpineEdge) -> (u8, usize, usize, [i64; 2], [usize; 2]) {
    match e.kind {
        SpineEdgeKind::Segment { from, to } => (0, from, to, e.dir, e.between),
        SpineEdgeKind::Ray { from } => (1, from, 0, e.dir, e.between),
        SpineEdgeKind::Line { .. } => (2, 0, 0, e.dir, e.between),
    }
}

/// A cell is bounded exactly when its gradient is interior to the convex
/// hull of all gradients (its recession cone is then trivial).
fn bounded_cells(functions: &[AffineFunction], active: &[usize], edges: &[SpineEdge]) -> Vec<usize> {
    if active.len() < 3 {
        return Vec::new();
    }
    let Ok(hull) = NewtonPolytope::from_points(2, active.iter().map(|&k| functions[k].grad.to_vec())) else {
        return Vec::new();
    };
    let present: BTreeSet<usize> = edges.iter().flat_map(|e| e.between).collect();
    present
        .into_iter()
        .filter(|&k| hull.is_interior(&functions[k].grad))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spine(fs: &[([i64; 2], f64)]) -> TropicalSpine {
        TropicalSpine::from_functions(fs.iter().map(|&(g, c)| AffineFunction::new(g, c)).collect())
    }

    #[test]
    fn three_rays_of_the_line() {
        let s = spine(&[([0, 0], 0.0), ([1, 0], 0.0), ([0, 1], 0.0)]);
        assert_eq!(s.vertex_count(), 1);
        assert_eq!(s.vertex_exact(0), &[int(0), int(0)]);
        let mut dirs: Vec<[i64; 2]> = s.rays().map(|e| e.dir).collect();
        dirs.sort();
        assert_eq!(dirs, vec![[-1, 0], [0, -1], [1, 1]]);
        assert!(s.rays().all(|e| e.weight == 1));
        assert!(s.is_balanced());
        assert!(s.bounded_faces().is_empty());
    }

    #[test]
    fn two_functions_give_a_line() {
        let s = spine(&[([0, 0], 0.0), ([1, 0], 0.0)]);
        assert_eq!(s.vertex_count(), 0);
        assert_eq!(s.edges().len(), 1);
        let e = &s.edges()[0];
        assert_eq!(e.dir, [0, 1]);
        assert!(matches!(e.kind, SpineEdgeKind::Line { .. }));
        let (p, _, _, _) = s.parametric(e);
        assert_eq!(p[0], 0.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(spine(&[([0, 0], 0.0)]).is_empty());
        assert!(spine(&[]).is_empty());
        // identical gradients: the smaller offset never wins
        let s = spine(&[([0, 0], 0.0), ([0, 0], -1.0)]);
        assert!(s.is_empty());
    }

    #[test]
    fn collinear_gradients_skip_the_middle_function() {
        // max(0, x + 1, 2x): the middle function wins on [-1, 1]
        let s = spine(&[([0, 0], 0.0), ([1, 0], 1.0), ([2, 0], 0.0)]);
        assert_eq!(s.edges().len(), 2);
        // max(0, x - 1, 2x): the middle function never wins
        let s = spine(&[([0, 0], 0.0), ([1, 0], -1.0), ([2, 0], 0.0)]);
        assert_eq!(s.edges().len(), 1);
        assert_eq!(s.edges()[0].weight, 2);
        assert_eq!(s.edges()[0].dir, [0, 1]);
    }

    #[test]
    fn one_bounded_cell() {
        // cubic-like: interior gradient (1,1) with a large constant
        let s = spine(&[([0, 0], 0.0), ([3, 0], 0.0), ([0, 3], 0.0), ([1, 1], 2.0)]);
        assert_eq!(s.bounded_faces(), &[3]);
        assert!(s.is_balanced());
        assert_eq!(s.vertex_count(), 3);
        assert_eq!(s.rays().count(), 3);
        assert!(s.rays().all(|e| e.weight == 3));
        // with a small constant the interior cell disappears
        let s = spine(&[([0, 0], 0.0), ([3, 0], 0.0), ([0, 3], 0.0), ([1, 1], -2.0)]);
        assert!(s.bounded_faces().is_empty());
        assert_eq!(s.vertex_count(), 1);
    }

    #[test]
    fn four_valent_vertex_is_balanced() {
        let s = spine(&[([0, 0], 0.0), ([1, 0], 0.0), ([0, 1], 0.0), ([1, 1], 0.0)]);
        assert_eq!(s.vertex_count(), 1);
        assert_eq!(s.valences(), vec![4]);
        assert!(s.is_balanced());
    }

    #[test]
    fn json_fields() {
        let s = spine(&[([0, 0], 0.0), ([1, 0], 0.0), ([0, 1], 0.0)]);
        let v = s.to_json_value();
        assert_eq!(v["functions"].as_array().unwrap().len(), 3);
        assert_eq!(v["vertices"], json!([[0.0, 0.0]]));
        assert_eq!(v["edges"].as_array().unwrap().len(), 3);
        assert!(v["edges"][0].get("ray_dir").is_some());
    }
}
