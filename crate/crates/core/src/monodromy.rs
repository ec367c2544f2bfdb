//! Integer monodromy matrices of torus fibrations.
//!
//! Matrices act on column vectors. The mirror fibration (dual tori) has
//! monodromy `M -> (M^-1)^T`, which is how the `H_1` and `H^1` actions are
//! related; only one of them is ever stored.

use crate::intlin;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonodromyError {
    #[error("matrix size {0} unsupported (expected 2 or 3)")]
    Size(usize),
    #[error("matrix rows are not square of size {0}")]
    Shape(usize),
    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(i64),
    #[error("matrix list is empty")]
    EmptyList,
    #[error("expected {expected}x{expected} matrices, found size {got}")]
    MixedSizes { expected: usize, got: usize },
    #[error("a vertex needs exactly three matrices, got {0}")]
    TripleLength(usize),
    #[error("malformed matrix document: {0}")]
    Json(String),
}

/// A 2x2 or 3x3 integer matrix of determinant one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonodromyMatrix {
    size: usize,
    entries: Vec<i64>,
}

impl fmt::Debug for MonodromyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl MonodromyMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, MonodromyError> {
        let size = rows.len();
        if size != 2 && size != 3 {
            return Err(MonodromyError::Size(size));
        }
        if rows.iter().any(|r| r.len() != size) {
            return Err(MonodromyError::Shape(size));
        }
        let m = Self {
            size,
            entries: rows.into_iter().flatten().collect(),
        };
        let d = m.det();
        if d != 1 {
            return Err(MonodromyError::NotUnimodular(d));
        }
        Ok(m)
    }

    pub fn identity(size: usize) -> Self {
        assert!(size == 2 || size == 3);
        let mut entries = vec![0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1;
        }
        Self { size, entries }
    }

    /// `[[1, k], [0, 1]]`.
    pub fn semistable(k: i64) -> Self {
        Self {
            size: 2,
            entries: vec![1, k, 0, 1],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.size + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    fn wide(&self) -> Vec<Vec<i128>> {
        self.entries
            .chunks(self.size)
            .map(|r| r.iter().map(|&x| i128::from(x)).collect())
            .collect()
    }

    fn det(&self) -> i64 {
        intlin::det(&self.wide()) as i64
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size, "size mismatch");
        let n = self.size;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
            }
        }
        Self { size: n, entries }
    }

    pub fn transpose(&self) -> Self {
        let n = self.size;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.get(i, j);
            }
        }
        Self { size: n, entries }
    }

    /// Exact inverse: the adjugate, since the determinant is one.
    pub fn inverse(&self) -> Self {
        let n = self.size;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<i128>> = (0..n)
                    .filter(|&r| r != j)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != i)
                            .map(|c| i128::from(self.get(r, c)))
                            .collect()
                    })
                    .collect();
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                entries[i * n + j] = sign * intlin::det(&minor) as i64;
            }
        }
        Self { size: n, entries }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.size)
    }

    /// `M - I` as a wide integer matrix.
    fn nilpotent_part(&self) -> Vec<Vec<i128>> {
        let mut m = self.wide();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= 1;
        }
        m
    }
}

/// Rank and integer basis (row Hermite normal form) of `ker(M - I)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedSpace {
    pub dimension: usize,
    pub basis: Vec<Vec<i64>>,
}

pub fn fixed_space(m: &MonodromyMatrix) -> FixedSpace {
    common_fixed_space(std::slice::from_ref(m))
}

/// `ker(M_1 - I) ∩ ... ∩ ker(M_k - I)`.
pub fn common_fixed_space(ms: &[MonodromyMatrix]) -> FixedSpace {
    let n = ms[0].size;
    let stacked: Vec<Vec<i128>> = ms.iter().flat_map(|m| m.nilpotent_part()).collect();
    let basis: Vec<Vec<i64>> = intlin::kernel(&stacked, n)
        .into_iter()
        .map(|v| v.into_iter().map(|x| x as i64).collect())
        .collect();
    FixedSpace {
        dimension: basis.len(),
        basis,
    }
}

/// The conjugation invariant `k` of a semistable (unipotent, rank <= 1)
/// monodromy, or `None` when `M` is not of that form.
///
/// `k` is the gcd of the entries of `M - I`, so `[[1, k], [0, 1]]` gives
/// `|k|` and the identity gives 0.
pub fn semistable_k(m: &MonodromyMatrix) -> Option<u64> {
    let nil = m.nilpotent_part();
    let n = m.size;
    let square_zero = (0..n).all(|i| (0..n).all(|j| (0..n).map(|k| nil[i][k] * nil[k][j]).sum::<i128>() == 0));
    if !square_zero || intlin::rank(&nil) > 1 {
        return None;
    }
    let g = nil.iter().flatten().fold(0i128, |g, &x| g.gcd(&x));
    Some(g as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexClass {
    Positive,
    Negative,
    Invalid,
}

/// A classified, ordered triple of 3x3 monodromies around a graph vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexModel {
    pub matrices: [MonodromyMatrix; 3],
    pub class: VertexClass,
}

impl VertexModel {
    pub fn new(matrices: [MonodromyMatrix; 3]) -> Self {
        let class = classify_vertex(&matrices);
        Self { matrices, class }
    }
}

/// Positive when the three local monodromies share a 2-dimensional fixed
/// plane, negative when their fixed planes meet in a line. The triple must
/// compose to the identity in the given order (cyclic rotations of a valid
/// triple are therefore valid too) and each matrix must be semistable with
/// `k = 1`.
pub fn classify_vertex(triple: &[MonodromyMatrix; 3]) -> VertexClass {
    if triple.iter().any(|m| m.size != 3) {
        return VertexClass::Invalid;
    }
    let product = triple[0].mul(&triple[1]).mul(&triple[2]);
    if !product.is_identity() || triple.iter().any(|m| semistable_k(m) != Some(1)) {
        return VertexClass::Invalid;
    }
    match common_fixed_space(triple).dimension {
        2 => VertexClass::Positive,
        1 => VertexClass::Negative,
        _ => VertexClass::Invalid,
    }
}

/// `M -> (M^-1)^T`.
pub fn mirror_dual(m: &MonodromyMatrix) -> MonodromyMatrix {
    m.inverse().transpose()
}

/// The edge monodromy `I + e_1 e_3^T`.
pub fn edge_monodromy() -> MonodromyMatrix {
    MonodromyMatrix::new(vec![vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]).unwrap()
}

/// Local monodromies on `H_1` around a positive vertex.
pub fn positive_vertex_triple() -> [MonodromyMatrix; 3] {
    [
        edge_monodromy(),
        MonodromyMatrix::new(vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 1]]).unwrap(),
        MonodromyMatrix::new(vec![vec![1, 0, -1], vec![0, 1, -1], vec![0, 0, 1]]).unwrap(),
    ]
}

/// Local monodromies on `H_1` around a negative vertex.
pub fn negative_vertex_triple() -> [MonodromyMatrix; 3] {
    [
        edge_monodromy(),
        MonodromyMatrix::new(vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap(),
        MonodromyMatrix::new(vec![vec![1, -1, -1], vec![0, 1, 0], vec![0, 0, 1]]).unwrap(),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct K3Report {
    pub count: usize,
    pub ks: Vec<Option<u64>>,
    pub all_k_one: bool,
    pub product_is_identity: bool,
    /// Set when the list does not have the 24 entries of a generic fibration.
    pub count_warning: Option<String>,
}

impl K3Report {
    pub fn passed(&self) -> bool {
        self.all_k_one && self.product_is_identity
    }
}

/// Checks a list of 2x2 local monodromies of an elliptic fibration over the
/// sphere: every fiber semistable with `k = 1`, and the ordered product
/// trivial.
pub fn validate_k3_list(ms: &[MonodromyMatrix]) -> Result<K3Report, MonodromyError> {
    if ms.is_empty() {
        return Err(MonodromyError::EmptyList);
    }
    if let Some(m) = ms.iter().find(|m| m.size != 2) {
        return Err(MonodromyError::MixedSizes {
            expected: 2,
            got: m.size,
        });
    }
    let ks: Vec<Option<u64>> = ms.iter().map(semistable_k).collect();
    let product = ms
        .iter()
        .fold(MonodromyMatrix::identity(2), |acc, m| acc.mul(m));
    Ok(K3Report {
        count: ms.len(),
        all_k_one: ks.iter().all(|&k| k == Some(1)),
        ks,
        product_is_identity: product.is_identity(),
        count_warning: (ms.len() != 24)
            .then(|| format!("expected 24 singular fibers, found {}", ms.len())),
    })
}

/// Finds 24 conjugates of `[[1,1],[0,1]]` whose ordered product is the
/// identity.
///
/// Conjugators are enumerated as words of length `<= max_word_len` in the
/// generators `S = [[0,-1],[1,0]]` and `T = [[1,1],[0,1]]`; the search
/// stops at the first pair `(A, B)` with `(AB)^12 = I` and returns
/// `A, B, A, B, ...`.
pub fn search_k3_list(max_word_len: usize) -> Option<Vec<MonodromyMatrix>> {
    let s = MonodromyMatrix::new(vec![vec![0, -1], vec![1, 0]]).unwrap();
    let t = MonodromyMatrix::semistable(1);
    let gens = [s.clone(), s.inverse(), t.clone(), t.inverse()];
    let mut words = vec![MonodromyMatrix::identity(2)];
    let mut frontier = words.clone();
    for _ in 0..max_word_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let c = w.mul(g);
                if !words.contains(&c) && !next.contains(&c) {
                    next.push(c);
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut conjugates: Vec<MonodromyMatrix> = Vec::new();
    for c in &words {
        let m = c.mul(&t).mul(&c.inverse());
        if !conjugates.contains(&m) {
            conjugates.push(m);
        }
    }
    for a in &conjugates {
        for b in &conjugates {
            let ab = a.mul(b);
            let mut p = MonodromyMatrix::identity(2);
            for _ in 0..12 {
                p = p.mul(&ab);
            }
            if p.is_identity() {
                return Some((0..24).map(|i| if i % 2 == 0 { a.clone() } else { b.clone() }).collect());
            }
        }
    }
    None
}

/// `{ "size": s, "rows": [[..], ..] }`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub size: usize,
    pub rows: Vec<Vec<i64>>,
}

/// `{ "matrices": [m1, m2, ...] }`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixListDocument {
    pub matrices: Vec<MatrixDocument>,
}

impl TryFrom<MatrixDocument> for MonodromyMatrix {
    type Error = MonodromyError;

    fn try_from(doc: MatrixDocument) -> Result<Self, Self::Error> {
        if doc.rows.len() != doc.size {
            return Err(MonodromyError::Shape(doc.size));
        }
        Self::new(doc.rows)
    }
}

impl From<&MonodromyMatrix> for MatrixDocument {
    fn from(m: &MonodromyMatrix) -> Self {
        Self {
            size: m.size,
            rows: m.rows(),
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<MonodromyMatrix, MonodromyError> {
    let doc: MatrixDocument =
        serde_json::from_str(text).map_err(|e| MonodromyError::Json(e.to_string()))?;
    doc.try_into()
}

pub fn parse_matrix_list(text: &str) -> Result<Vec<MonodromyMatrix>, MonodromyError> {
    let doc: MatrixListDocument =
        serde_json::from_str(text).map_err(|e| MonodromyError::Json(e.to_string()))?;
    doc.matrices.into_iter().map(TryInto::try_into).collect()
}

pub fn parse_triple(text: &str) -> Result<[MonodromyMatrix; 3], MonodromyError> {
    let ms = parse_matrix_list(text)?;
    let n = ms.len();
    ms.try_into().map_err(|_| MonodromyError::TripleLength(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> MonodromyMatrix {
        MonodromyMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rejects_non_unimodular() {
        assert_eq!(
            MonodromyMatrix::new(vec![vec![2, 0], vec![0, 1]]),
            Err(MonodromyError::NotUnimodular(2))
        );
        assert_eq!(
            MonodromyMatrix::new(vec![vec![0, 1], vec![1, 0]]),
            Err(MonodromyError::NotUnimodular(-1))
        );
        assert_eq!(
            MonodromyMatrix::new(vec![vec![1]]),
            Err(MonodromyError::Size(1))
        );
    }

    #[test]
    fn fixed_spaces() {
        let fs = fixed_space(&edge_monodromy());
        assert_eq!(fs.dimension, 2);
        assert_eq!(fs.basis, vec![vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(fixed_space(&MonodromyMatrix::identity(3)).dimension, 3);
        let third = &negative_vertex_triple()[2];
        let fs = fixed_space(third);
        assert_eq!(fs.basis, vec![vec![1, 0, 0], vec![0, 1, -1]]);
    }

    #[test]
    fn semistable_invariant() {
        for k in [1, 2, 5] {
            assert_eq!(semistable_k(&MonodromyMatrix::semistable(k)), Some(k as u64));
        }
        assert_eq!(semistable_k(&MonodromyMatrix::identity(2)), Some(0));
        // elliptic element of order 6
        assert_eq!(semistable_k(&mat(&[&[1, 1], &[-1, 0]])), None);
        // -T is not unipotent
        assert_eq!(semistable_k(&mat(&[&[-1, -1], &[0, -1]])), None);
    }

    #[test]
    fn vertex_triples() {
        let pos = positive_vertex_triple();
        let neg = negative_vertex_triple();
        assert_eq!(classify_vertex(&pos), VertexClass::Positive);
        assert_eq!(classify_vertex(&neg), VertexClass::Negative);
        assert_eq!(common_fixed_space(&pos).dimension, 2);
        assert_eq!(common_fixed_space(&neg).basis, vec![vec![1, 0, 0]]);
        let id = MonodromyMatrix::identity(3);
        assert_eq!(classify_vertex(&[id.clone(), id.clone(), id]), VertexClass::Invalid);
        let rot = [pos[1].clone(), pos[2].clone(), pos[0].clone()];
        assert_eq!(classify_vertex(&rot), VertexClass::Positive);
        // product no longer trivial
        let bad = [neg[0].clone(), neg[1].clone(), neg[2].inverse()];
        assert_eq!(classify_vertex(&bad), VertexClass::Invalid);
        // product trivial but one factor has k = 2
        let doubled = [
            edge_monodromy().mul(&edge_monodromy()),
            MonodromyMatrix::identity(3),
            edge_monodromy().inverse().mul(&edge_monodromy().inverse()),
        ];
        assert_eq!(classify_vertex(&doubled), VertexClass::Invalid);
    }

    #[test]
    fn mirror_swaps_vertex_types() {
        assert_eq!(
            mirror_dual(&edge_monodromy()),
            mat(&[&[1, 0, 0], &[0, 1, 0], &[-1, 0, 1]])
        );
        let dual = |t: [MonodromyMatrix; 3]| t.map(|m| mirror_dual(&m));
        assert_eq!(classify_vertex(&dual(positive_vertex_triple())), VertexClass::Negative);
        assert_eq!(classify_vertex(&dual(negative_vertex_triple())), VertexClass::Positive);
    }

    #[test]
    fn k3_lists() {
        let list = search_k3_list(3).expect("pair found");
        let report = validate_k3_list(&list).unwrap();
        assert!(report.passed());
        assert!(report.count_warning.is_none());
        let single = validate_k3_list(&[MonodromyMatrix::semistable(1)]).unwrap();
        assert!(single.all_k_one);
        assert!(!single.product_is_identity);
        assert!(single.count_warning.is_some());
        assert_eq!(validate_k3_list(&[]), Err(MonodromyError::EmptyList));
    }

    #[test]
    fn documents() {
        let m = parse_matrix(r#"{"size": 2, "rows": [[1, 1], [0, 1]]}"#).unwrap();
        assert_eq!(m, MonodromyMatrix::semistable(1));
        assert!(matches!(
            parse_matrix(r#"{"size": 2, "rows": [[2, 0], [0, 1]]}"#),
            Err(MonodromyError::NotUnimodular(2))
        ));
        assert!(matches!(
            parse_triple(r#"{"matrices": [{"size": 2, "rows": [[1, 1], [0, 1]]}]}"#),
            Err(MonodromyError::TripleLength(1))
        ));
    }

    fn sl_matrix(size: usize) -> impl Strategy<Value = MonodromyMatrix> {
        // products of elementary matrices stay in SL(n, Z)
        prop::collection::vec((0..size, 0..size, -2i64..=2), 1..8).prop_map(move |ops| {
            let mut m = MonodromyMatrix::identity(size);
            for (i, j, a) in ops {
                if i == j {
                    continue;
                }
                let mut e = MonodromyMatrix::identity(size);
                e.entries[i * size + j] = a;
                m = m.mul(&e);
            }
            m
        })
    }

    proptest! {
        #[test]
        fn mirror_is_an_involution(m in sl_matrix(3)) {
            prop_assert_eq!(mirror_dual(&mirror_dual(&m)), m.clone());
            prop_assert!(m.mul(&m.inverse()).is_identity());
        }

        #[test]
        fn k_is_conjugation_invariant(c in sl_matrix(3), k in 1i64..4) {
            let m = MonodromyMatrix::new(vec![vec![1, 0, k], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
            let conj = c.mul(&m).mul(&c.inverse());
            prop_assert_eq!(semistable_k(&conj), Some(k as u64));
            prop_assert_eq!(semistable_k(&mirror_dual(&conj)), Some(k as u64));
        }

        #[test]
        fn k_is_conjugation_invariant_sl2(c in sl_matrix(2)) {
            let conj = c.mul(&MonodromyMatrix::semistable(1)).mul(&c.inverse());
            prop_assert_eq!(semistable_k(&conj), Some(1));
        }
    }
}
