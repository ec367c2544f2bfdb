//! Trivalent discriminant graphs: the toric construction from unit
//! triangulations of the 2-faces of `d Δ_4`, Euler characteristic, the
//! mirror involution, and the flop and conifold rewrites.
//!
//! Edges are stored with two ends `a`, `b`; each vertex lists its arms
//! (half-edges) in rotation order. An optional edge label is the monodromy
//! around the edge as seen from end `a`; seen from `b` it is inverted.

use crate::monodromy::{classify_vertex, mirror_dual, MatrixDocument, MonodromyMatrix, VertexClass};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("no edge with id {0}")]
    UnknownEdge(usize),
    #[error("no vertex with id {0}")]
    UnknownVertex(usize),
    #[error("duplicate id {0}")]
    DuplicateId(usize),
    #[error("edge {0} is a loop")]
    LoopEdge(usize),
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotTrivalent { vertex: usize, degree: usize },
    #[error("arms of edge {0} are not four distinct edges to other vertices")]
    DegenerateArms(usize),
    #[error("stub key {key:?} matched {count} pieces, expected 3")]
    StubMismatch { key: (usize, usize, usize), count: usize },
    #[error("vertex {vertex} is {expected:?} but its labels classify as {found:?}")]
    LabelMismatch {
        vertex: usize,
        expected: VertexKind,
        found: VertexClass,
    },
    #[error("malformed graph document: {0}")]
    Json(String),
}

pub type GraphResult<T> = Result<T, GraphError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexKind {
    Positive,
    Negative,
}

impl VertexKind {
    pub fn sign(self) -> i64 {
        match self {
            VertexKind::Positive => 1,
            VertexKind::Negative => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            VertexKind::Positive => VertexKind::Negative,
            VertexKind::Negative => VertexKind::Positive,
        }
    }

    fn class(self) -> VertexClass {
        match self {
            VertexKind::Positive => VertexClass::Positive,
            VertexKind::Negative => VertexClass::Negative,
        }
    }
}

/// Where a vertex of the toric construction came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexOrigin {
    /// Dual to unit triangle `index` of the 2-face spanned by `face`.
    Triangle { face: [usize; 3], index: usize },
    /// Joins the three faces along unit `segment` of polytope edge `edge`.
    Segment { edge: [usize; 2], segment: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum End {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: End,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaVertex {
    pub id: usize,
    pub kind: VertexKind,
    pub arms: Vec<HalfEdge>,
    pub origin: Option<VertexOrigin>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaEdge {
    pub id: usize,
    pub a: usize,
    pub b: usize,
    pub monodromy: Option<MonodromyMatrix>,
}

impl GammaEdge {
    fn endpoint(&self, end: End) -> usize {
        match end {
            End::A => self.a,
            End::B => self.b,
        }
    }

    fn set_endpoint(&mut self, end: End, v: usize) {
        match end {
            End::A => self.a = v,
            End::B => self.b = v,
        }
    }

    /// Label seen from the given end.
    fn label_from(&self, end: End) -> Option<MonodromyMatrix> {
        let m = self.monodromy.as_ref()?;
        Some(match end {
            End::A => m.clone(),
            End::B => m.inverse(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GammaGraph {
    vertices: BTreeMap<usize, GammaVertex>,
    edges: BTreeMap<usize, GammaEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct GraphStats {
    pub positive: usize,
    pub negative: usize,
    pub edges: usize,
    pub euler_characteristic: i64,
    pub connected: bool,
    pub trivalent: bool,
}

impl GammaGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: usize, kind: VertexKind) -> GraphResult<()> {
        if self.vertices.contains_key(&id) {
            return Err(GraphError::DuplicateId(id));
        }
        self.vertices.insert(
            id,
            GammaVertex {
                id,
                kind,
                arms: Vec::new(),
                origin: None,
            },
        );
        Ok(())
    }

    /// Adds edge `a -- b`, appending it to the arm lists of both ends.
    pub fn add_edge(&mut self, id: usize, a: usize, b: usize, monodromy: Option<MonodromyMatrix>) -> GraphResult<()> {
        if self.edges.contains_key(&id) {
            return Err(GraphError::DuplicateId(id));
        }
        for v in [a, b] {
            if !self.vertices.contains_key(&v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        self.edges.insert(id, GammaEdge { id, a, b, monodromy });
        self.vertices.get_mut(&a).unwrap().arms.push(HalfEdge { edge: id, end: End::A });
        self.vertices.get_mut(&b).unwrap().arms.push(HalfEdge { edge: id, end: End::B });
        Ok(())
    }

    pub fn vertices(&self) -> impl Iterator<Item = &GammaVertex> {
        self.vertices.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = &GammaEdge> {
        self.edges.values()
    }

    pub fn vertex(&self, id: usize) -> Option<&GammaVertex> {
        self.vertices.get(&id)
    }

    pub fn edge(&self, id: usize) -> Option<&GammaEdge> {
        self.edges.get(&id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn count(&self, kind: VertexKind) -> usize {
        self.vertices.values().filter(|v| v.kind == kind).count()
    }

    /// Every vertex has exactly three arms.
    pub fn check_trivalent(&self) -> GraphResult<()> {
        match self.vertices.values().find(|v| v.arms.len() != 3) {
            Some(v) => Err(GraphError::NotTrivalent {
                vertex: v.id,
                degree: v.arms.len(),
            }),
            None => Ok(()),
        }
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.vertices.keys().next() else {
            return true;
        };
        let mut seen = BTreeMap::from([(start, ())]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for h in &self.vertices[&v].arms {
                let e = &self.edges[&h.edge];
                for w in [e.a, e.b] {
                    if seen.insert(w, ()).is_none() {
                        queue.push_back(w);
                    }
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            positive: self.count(VertexKind::Positive),
            negative: self.count(VertexKind::Negative),
            edges: self.edge_count(),
            euler_characteristic: self.vertices.values().map(|v| v.kind.sign()).sum(),
            connected: self.is_connected(),
            trivalent: self.check_trivalent().is_ok(),
        }
    }

    /// Monodromy triple around a vertex in arm order, every label read from
    /// the vertex's own end; `None` unless all three arms are labeled.
    pub fn vertex_triple(&self, id: usize) -> Option<[MonodromyMatrix; 3]> {
        let v = self.vertices.get(&id)?;
        if v.arms.len() != 3 {
            return None;
        }
        let ms: Option<Vec<MonodromyMatrix>> = v.arms.iter().map(|h| self.edges[&h.edge].label_from(h.end)).collect();
        ms?.try_into().ok()
    }

    /// Checks every fully labeled vertex against its stored kind.
    pub fn validate_labels(&self) -> GraphResult<()> {
        for v in self.vertices.values() {
            self.validate_vertex(v.id)?;
        }
        Ok(())
    }

    fn validate_vertex(&self, id: usize) -> GraphResult<()> {
        let v = &self.vertices[&id];
        if let Some(triple) = self.vertex_triple(id) {
            let found = classify_vertex(&triple);
            if found != v.kind.class() {
                return Err(GraphError::LabelMismatch {
                    vertex: id,
                    expected: v.kind,
                    found,
                });
            }
        }
        Ok(())
    }

    /// Loops list end `A` before end `B` in their vertex's arms; swapping
    /// the ends of a loop inverts its label.
    fn normalize_loops(&mut self) {
        let loops: Vec<usize> = self.edges.values().filter(|e| e.a == e.b).map(|e| e.id).collect();
        for id in loops {
            let v = self.edges[&id].a;
            let arms = &self.vertices[&v].arms;
            let first = arms.iter().find(|h| h.edge == id).map(|h| h.end);
            if first == Some(End::B) {
                for h in self.vertices.get_mut(&v).unwrap().arms.iter_mut() {
                    if h.edge == id {
                        h.end = match h.end {
                            End::A => End::B,
                            End::B => End::A,
                        };
                    }
                }
                let e = self.edges.get_mut(&id).unwrap();
                e.monodromy = e.monodromy.as_ref().map(MonodromyMatrix::inverse);
            }
        }
    }
}

/// `#Positive - #Negative` of a finalized (trivalent) graph.
pub fn euler_characteristic(g: &GammaGraph) -> GraphResult<i64> {
    g.check_trivalent()?;
    Ok(g.stats().euler_characteristic)
}

/// Flips every vertex kind and dualizes every label.
pub fn mirror_graph(g: &GammaGraph) -> GammaGraph {
    let mut out = g.clone();
    for v in out.vertices.values_mut() {
        v.kind = v.kind.flipped();
    }
    for e in out.edges.values_mut() {
        e.monodromy = e.monodromy.as_ref().map(mirror_dual);
    }
    out
}

/// The two endpoints of `e` and their other arms, with each arm list
/// rotated so that `e` comes first.
struct LocalPattern {
    v1: usize,
    v2: usize,
    h1: HalfEdge,
    h2: HalfEdge,
    /// `[a, b]` at `v1`, `[c, d]` at `v2`, in rotation order after `e`.
    arms1: [HalfEdge; 2],
    arms2: [HalfEdge; 2],
    /// Position of `e` in each arm list.
    slot1: usize,
    slot2: usize,
}

fn local_pattern(g: &GammaGraph, edge: usize) -> GraphResult<LocalPattern> {
    let e = g.edges.get(&edge).ok_or(GraphError::UnknownEdge(edge))?;
    if e.a == e.b {
        return Err(GraphError::LoopEdge(edge));
    }
    let rotate = |v: usize, end: End| -> GraphResult<([HalfEdge; 2], usize)> {
        let arms = &g.vertices[&v].arms;
        if arms.len() != 3 {
            return Err(GraphError::NotTrivalent {
                vertex: v,
                degree: arms.len(),
            });
        }
        let k = arms.iter().position(|h| h.edge == edge && h.end == end).expect("incident");
        Ok(([arms[(k + 1) % 3], arms[(k + 2) % 3]], k))
    };
    let (arms1, slot1) = rotate(e.a, End::A)?;
    let (arms2, slot2) = rotate(e.b, End::B)?;
    Ok(LocalPattern {
        v1: e.a,
        v2: e.b,
        h1: HalfEdge { edge, end: End::A },
        h2: HalfEdge { edge, end: End::B },
        arms1,
        arms2,
        slot1,
        slot2,
    })
}

/// Flop through the 4-valent intermediate: with `v1 = [e, a, b]` and
/// `v2 = [e, c, d]`, the result has `v1 = [e, a, c]` and `v2 = [e, b, d]`;
/// `e` keeps its position in each arm list.
///
/// Kinds stay with the vertex ids, so counts and χ are unchanged, and
/// applying the move twice restores the graph. When `e`, `a`, `b`, `c`, `d`
/// are all labeled, the label of `e` is recomputed so that `v1` composes to
/// the identity, and both vertices must still classify as their kinds.
/// Otherwise the label of `e` is dropped.
pub fn flop_move(g: &GammaGraph, edge: usize) -> GraphResult<GammaGraph> {
    let p = local_pattern(g, edge)?;
    let [a, b] = p.arms1;
    let [c, d] = p.arms2;
    let mut out = g.clone();
    let place = |slot: usize, arms: [HalfEdge; 3]| -> Vec<HalfEdge> { (0..3).map(|k| arms[(k + 3 - slot) % 3]).collect() };
    out.vertices.get_mut(&p.v1).unwrap().arms = place(p.slot1, [p.h1, a, c]);
    out.vertices.get_mut(&p.v2).unwrap().arms = place(p.slot2, [p.h2, b, d]);
    out.edges.get_mut(&b.edge).unwrap().set_endpoint(b.end, p.v2);
    out.edges.get_mut(&c.edge).unwrap().set_endpoint(c.end, p.v1);

    let label = |h: HalfEdge| out.edges[&h.edge].label_from(h.end);
    let new_label = match (label(a), label(c), g.edges[&edge].monodromy.is_some()) {
        (Some(ma), Some(mc), true) if label(b).is_some() && label(d).is_some() => {
            Some(ma.mul(&mc).inverse())
        }
        _ => None,
    };
    out.edges.get_mut(&edge).unwrap().monodromy = new_label;
    out.normalize_loops();
    out.validate_vertex(p.v1)?;
    out.validate_vertex(p.v2)?;
    Ok(out)
}

/// Conifold rewrite: contracts `e`, then separates the crossing arms, so
/// `v1`, `v2` and `e` disappear and the arms fuse pairwise into edges
/// `a -- b` and `c -- d`.
///
/// Each fused edge keeps the id of its first arm and loses its label. The
/// vertex count drops by 2, the edge count by 3, and χ changes by
/// `-(sign v1 + sign v2)`. The four arms must be distinct non-loop edges
/// that avoid the other endpoint.
pub fn conifold_move(g: &GammaGraph, edge: usize) -> GraphResult<GammaGraph> {
    let p = local_pattern(g, edge)?;
    let arms = [p.arms1[0], p.arms1[1], p.arms2[0], p.arms2[1]];
    let mut ids: Vec<usize> = arms.iter().map(|h| h.edge).collect();
    ids.sort_unstable();
    ids.dedup();
    let far = |h: &HalfEdge| {
        let e = &g.edges[&h.edge];
        e.endpoint(other(h.end))
    };
    if ids.len() != 4 || arms.iter().any(|h| far(h) == p.v1 || far(h) == p.v2) {
        return Err(GraphError::DegenerateArms(edge));
    }
    let mut out = g.clone();
    out.vertices.remove(&p.v1);
    out.vertices.remove(&p.v2);
    out.edges.remove(&edge);
    for [keep, drop] in [p.arms1, p.arms2] {
        // far end of `drop` becomes the near end of `keep`
        let far_end = other(drop.end);
        let target = g.edges[&drop.edge].endpoint(far_end);
        out.edges.remove(&drop.edge);
        let e = out.edges.get_mut(&keep.edge).unwrap();
        e.set_endpoint(keep.end, target);
        e.monodromy = None;
        for h in out.vertices.get_mut(&target).unwrap().arms.iter_mut() {
            if h.edge == drop.edge && h.end == far_end {
                *h = keep;
            }
        }
    }
    out.normalize_loops();
    Ok(out)
}

fn other(end: End) -> End {
    match end {
        End::A => End::B,
        End::B => End::A,
    }
}

/// Unit triangulation of the 2-face of `d Δ_4` spanned by three polytope
/// vertices. Points are barycentric (coordinates in `Z^5` summing to `d`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceTriangulation {
    pub face: [usize; 3],
    pub d: usize,
    pub triangles: Vec<[[i64; 5]; 3]>,
}

impl FaceTriangulation {
    /// Unit segments on the boundary of the face.
    pub fn boundary_segments(&self) -> Vec<[[i64; 5]; 2]> {
        self.segment_counts()
            .into_iter()
            .filter(|(_, n)| *n == 1)
            .map(|(s, _)| s)
            .collect()
    }

    fn segment_counts(&self) -> BTreeMap<[[i64; 5]; 2], usize> {
        let mut counts = BTreeMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                *counts.entry(side(t, k)).or_insert(0) += 1;
            }
        }
        counts
    }
}

/// Side of a triangle opposite its `k`-th corner, endpoints sorted.
fn side(t: &[[i64; 5]; 3], k: usize) -> [[i64; 5]; 2] {
    let mut s = [t[(k + 1) % 3], t[(k + 2) % 3]];
    s.sort();
    s
}

/// The standard unit triangulation: `(d^2 + d)/2` upward and `(d^2 - d)/2`
/// downward triangles, upward first, each family in lexicographic order.
pub fn unit_triangulation(face: [usize; 3], d: usize) -> FaceTriangulation {
    let [p, q, r] = face;
    let point = |i: i64, j: i64, k: i64| {
        let mut x = [0i64; 5];
        x[p] += i;
        x[q] += j;
        x[r] += k;
        x
    };
    let d = d as i64;
    let mut triangles = Vec::new();
    for i in 0..d {
        for j in 0..d - i {
            let k = d - 1 - i - j;
            triangles.push([point(i + 1, j, k), point(i, j + 1, k), point(i, j, k + 1)]);
        }
    }
    for i in 0..d - 1 {
        for j in 0..d - 1 - i {
            let k = d - 2 - i - j;
            triangles.push([point(i + 1, j + 1, k), point(i + 1, j, k + 1), point(i, j + 1, k + 1)]);
        }
    }
    FaceTriangulation {
        face,
        d: d as usize,
        triangles,
    }
}

/// Key of a boundary unit segment: polytope edge `(u, v)`, `u < v`, and the
/// segment index counted from `u`.
pub type StubKey = (usize, usize, usize);

/// Dual graph of a face triangulation, before gluing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphPiece {
    pub face: [usize; 3],
    /// One Negative vertex per triangle.
    pub vertices: usize,
    /// `(t1, side1, t2, side2)`: triangles sharing a side, with the index of
    /// the side in each.
    pub internal: Vec<(usize, usize, usize, usize)>,
    /// `(key, triangle, side)`.
    pub stubs: Vec<(StubKey, usize, usize)>,
}

fn stub_key(seg: &[[i64; 5]; 2]) -> StubKey {
    let support: Vec<usize> = (0..5).filter(|&k| seg[0][k] != 0 || seg[1][k] != 0).collect();
    let (u, v) = (support[0], support[1]);
    let s = seg[0][v].min(seg[1][v]);
    (u, v, s as usize)
}

pub fn dual_graph_of_face(t: &FaceTriangulation) -> GraphPiece {
    let mut owners: BTreeMap<[[i64; 5]; 2], Vec<(usize, usize)>> = BTreeMap::new();
    for (ti, tri) in t.triangles.iter().enumerate() {
        for k in 0..3 {
            owners.entry(side(tri, k)).or_default().push((ti, k));
        }
    }
    let mut internal = Vec::new();
    let mut stubs = Vec::new();
    for (seg, own) in owners {
        match own.as_slice() {
            [(t1, s1), (t2, s2)] => internal.push((*t1, *s1, *t2, *s2)),
            [(t1, s1)] => stubs.push((stub_key(&seg), *t1, *s1)),
            _ => unreachable!("unit triangulation sides have one or two owners"),
        }
    }
    internal.sort_unstable();
    stubs.sort_unstable();
    GraphPiece {
        face: t.face,
        vertices: t.triangles.len(),
        internal,
        stubs,
    }
}

/// The graph of the quintic-type family: dual graphs of the unit
/// triangulations of all ten 2-faces of `d Δ_4`, glued three at a time
/// along each unit segment of each polytope edge by a Positive vertex.
///
/// Vertex ids: the Negative vertices face by face (faces in lexicographic
/// order), then the Positive vertices by `(edge, segment)`. Unlabeled.
pub fn build_gamma_simplex(d: usize) -> GraphResult<GammaGraph> {
    assert!(d >= 1, "degree must be positive");
    let mut faces = Vec::new();
    for p in 0..5 {
        for q in p + 1..5 {
            for r in q + 1..5 {
                faces.push([p, q, r]);
            }
        }
    }
    // slots[v][side] = half-edge, filled as edges are created
    let mut kinds = Vec::new();
    let mut origins = Vec::new();
    let mut slots: Vec<[Option<HalfEdge>; 3]> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut stubs: BTreeMap<StubKey, Vec<(usize, usize)>> = BTreeMap::new();
    for face in &faces {
        let piece = dual_graph_of_face(&unit_triangulation(*face, d));
        let base = kinds.len();
        for index in 0..piece.vertices {
            kinds.push(VertexKind::Negative);
            origins.push(VertexOrigin::Triangle { face: *face, index });
            slots.push([None; 3]);
        }
        for (t1, s1, t2, s2) in piece.internal {
            let id = edges.len();
            edges.push((base + t1, base + t2));
            slots[base + t1][s1] = Some(HalfEdge { edge: id, end: End::A });
            slots[base + t2][s2] = Some(HalfEdge { edge: id, end: End::B });
        }
        for (key, t, s) in piece.stubs {
            stubs.entry(key).or_default().push((base + t, s));
        }
    }
    for (key, pieces) in stubs {
        if pieces.len() != 3 {
            return Err(GraphError::StubMismatch {
                key,
                count: pieces.len(),
            });
        }
        let v = kinds.len();
        kinds.push(VertexKind::Positive);
        origins.push(VertexOrigin::Segment {
            edge: [key.0, key.1],
            segment: key.2,
        });
        slots.push([None; 3]);
        for (k, (w, s)) in pieces.into_iter().enumerate() {
            let id = edges.len();
            edges.push((v, w));
            slots[v][k] = Some(HalfEdge { edge: id, end: End::A });
            slots[w][s] = Some(HalfEdge { edge: id, end: End::B });
        }
    }
    let mut g = GammaGraph::new();
    for (id, ((kind, origin), arms)) in kinds.into_iter().zip(origins).zip(slots).enumerate() {
        let arms: Option<Vec<HalfEdge>> = arms.into_iter().collect();
        let arms = arms.ok_or(GraphError::NotTrivalent { vertex: id, degree: 0 })?;
        g.vertices.insert(
            id,
            GammaVertex {
                id,
                kind,
                arms,
                origin: Some(origin),
            },
        );
    }
    for (id, (a, b)) in edges.into_iter().enumerate() {
        g.edges.insert(id, GammaEdge { id, a, b, monodromy: None });
    }
    g.check_trivalent()?;
    Ok(g)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDocument {
    id: usize,
    kind: VertexKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arms: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    origin: Option<VertexOrigin>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<usize>,
    a: usize,
    b: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    monodromy: Option<MatrixDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    vertices: Vec<VertexDocument>,
    edges: Vec<EdgeDocument>,
}

impl GammaGraph {
    /// `{ "vertices": [{ "id", "kind", "arms", "origin"? }], "edges": [{ "id", "a", "b", "monodromy"? }] }`.
    ///
    /// `arms` lists edge ids in rotation order; a loop appears twice, end
    /// `a` first.
    pub fn to_json(&self) -> String {
        let doc = GraphDocument {
            vertices: self
                .vertices
                .values()
                .map(|v| VertexDocument {
                    id: v.id,
                    kind: v.kind,
                    arms: Some(v.arms.iter().map(|h| h.edge).collect()),
                    origin: v.origin.clone(),
                })
                .collect(),
            edges: self
                .edges
                .values()
                .map(|e| EdgeDocument {
                    id: Some(e.id),
                    a: e.a,
                    b: e.b,
                    monodromy: e.monodromy.as_ref().map(MatrixDocument::from),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    /// Parses a graph document. Edge ids default to list positions; when a
    /// vertex omits `arms`, its arms follow the edge list order.
    pub fn from_json(text: &str) -> GraphResult<Self> {
        let doc: GraphDocument = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let mut g = GammaGraph::new();
        for v in &doc.vertices {
            g.add_vertex(v.id, v.kind)?;
            g.vertices.get_mut(&v.id).unwrap().origin = v.origin.clone();
        }
        for (k, e) in doc.edges.into_iter().enumerate() {
            let label = match e.monodromy {
                Some(m) => Some(MonodromyMatrix::try_from(m).map_err(|err| GraphError::Json(err.to_string()))?),
                None => None,
            };
            g.add_edge(e.id.unwrap_or(k), e.a, e.b, label)?;
        }
        for v in doc.vertices {
            let Some(arms) = v.arms else { continue };
            let current = g.vertices[&v.id].arms.clone();
            let mut pool = current.clone();
            let mut ordered = Vec::with_capacity(arms.len());
            for id in arms {
                let k = pool
                    .iter()
                    .position(|h| h.edge == id)
                    .ok_or_else(|| GraphError::Json(format!("vertex {} lists arm {id} it is not on", v.id)))?;
                ordered.push(pool.remove(k));
            }
            if !pool.is_empty() {
                return Err(GraphError::Json(format!("vertex {} omits some of its arms", v.id)));
            }
            g.vertices.get_mut(&v.id).unwrap().arms = ordered;
        }
        Ok(g)
    }

    /// Graphviz rendering: Positive vertices filled black, Negative white.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph gamma {\n  node [shape=circle, width=0.15, label=\"\"];\n");
        for v in self.vertices.values() {
            let fill = match v.kind {
                VertexKind::Positive => "black",
                VertexKind::Negative => "white",
            };
            let _ = writeln!(out, "  v{} [style=filled, fillcolor={fill}];", v.id);
        }
        for e in self.edges.values() {
            let _ = writeln!(out, "  v{} -- v{} [id=e{}];", e.a, e.b, e.id);
        }
        out.push_str("}\n");
        out
    }
}
