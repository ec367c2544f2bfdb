//! Exact integer linear algebra on small dense matrices.
//!
//! Everything here works on `i128` so that the products formed during
//! elimination of the (at most 4x4, small-entry) matrices used by the
//! polytope and monodromy code cannot overflow.

use num_integer::Integer;

pub type IntMatrix = Vec<Vec<i128>>;

/// Rank over the rationals, by fraction-free (Bareiss) elimination.
pub fn rank(rows: &[Vec<i128>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: IntMatrix = rows.to_vec();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..m.len() {
            for c in col + 1..ncols {
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Determinant of a square matrix (Bareiss).
pub fn det(rows: &[Vec<i128>]) -> i128 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut m: IntMatrix = rows.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Divides a vector by the gcd of its entries and makes the first nonzero
/// entry positive. The zero vector is returned unchanged.
pub fn primitive(v: &[i128]) -> Vec<i128> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g == 0 {
        return v.to_vec();
    }
    let sign = v.iter().find(|&&x| x != 0).map_or(1, |x| x.signum());
    v.iter().map(|&x| sign * x / g).collect()
}

/// Basis of the integer kernel lattice `{v in Z^n : A v = 0}`, returned in
/// row Hermite normal form.
///
/// Column operations reduce `A` to column echelon form while the same
/// operations are applied to an identity matrix; the columns of the
/// transform that end up opposite zero columns span the kernel lattice.
pub fn kernel(rows: &[Vec<i128>], ncols: usize) -> Vec<Vec<i128>> {
    let mut a: IntMatrix = rows.to_vec();
    // u[j] is column j of the unimodular transform
    let mut u: IntMatrix = (0..ncols)
        .map(|j| (0..ncols).map(|i| i128::from(i == j)).collect())
        .collect();
    let mut pivot_col = 0;
    for r in 0..a.len() {
        if pivot_col == ncols {
            break;
        }
        // gcd-reduce row r across columns pivot_col.. into column pivot_col
        loop {
            let nz: Vec<usize> = (pivot_col..ncols).filter(|&c| a[r][c] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&c) = nz.first() {
                    swap_cols(&mut a, &mut u, pivot_col, c);
                }
                break;
            }
            let &min_c = nz.iter().min_by_key(|&&c| a[r][c].abs()).unwrap();
            swap_cols(&mut a, &mut u, pivot_col, min_c);
            let p = a[r][pivot_col];
            for c in pivot_col + 1..ncols {
                let q = Integer::div_floor(&a[r][c], &p);
                if q != 0 {
                    for row in a.iter_mut() {
                        row[c] -= q * row[pivot_col];
                    }
                    for i in 0..ncols {
                        let t = u[pivot_col][i];
                        u[c][i] -= q * t;
                    }
                }
            }
        }
        if a[r][pivot_col] != 0 {
            pivot_col += 1;
        }
    }
    let basis: IntMatrix = u[pivot_col..].to_vec();
    hermite_rows(basis)
}

fn swap_cols(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    u.swap(i, j);
}

/// Row-style Hermite normal form of a full-row-rank integer matrix: pivots
/// positive and strictly increasing in column, entries above each pivot
/// reduced into `[0, pivot)`.
pub fn hermite_rows(mut m: IntMatrix) -> IntMatrix {
    if m.is_empty() {
        return m;
    }
    let ncols = m[0].len();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (row..m.len()).filter(|&r| m[r][col] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&r) = nz.first() {
                    m.swap(row, r);
                }
                break;
            }
            let &min_r = nz.iter().min_by_key(|&&r| m[r][col].abs()).unwrap();
            m.swap(row, min_r);
            for r in row + 1..m.len() {
                let q = Integer::div_floor(&m[r][col], &m[row][col]);
                if q != 0 {
                    for c in 0..ncols {
                        let t = m[row][c];
                        m[r][c] -= q * t;
                    }
                }
            }
        }
        if m[row][col] == 0 {
            continue;
        }
        if m[row][col] < 0 {
            for x in m[row].iter_mut() {
                *x = -*x;
            }
        }
        let p = m[row][col];
        for r in 0..row {
            let q = Integer::div_floor(&m[r][col], &p);
            if q != 0 {
                for c in 0..ncols {
                    let t = m[row][c];
                    m[r][c] -= q * t;
                }
            }
        }
        row += 1;
    }
    m.retain(|r| r.iter().any(|&x| x != 0));
    m
}

pub fn mat_vec(rows: &[Vec<i128>], v: &[i128]) -> Vec<i128> {
    rows.iter()
        .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i128]]) -> IntMatrix {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn rank_and_det() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[0, 0, 1], &[0, 0, 0]])), 1);
        assert_eq!(det(&m(&[&[2, 1], &[7, 4]])), 1);
        assert_eq!(det(&m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])), -1);
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])), 0);
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y = 0 has integer kernel spanned by (2, -1), not (4, -2)
        let k = kernel(&m(&[&[2, 4]]), 2);
        assert_eq!(k, vec![vec![2, -1]]);
        // x2 + x3 = 0 in Z^3
        let k = kernel(&m(&[&[0, 1, 1]]), 3);
        assert_eq!(k, vec![vec![1, 0, 0], vec![0, 1, -1]]);
        // full-rank: empty kernel
        assert!(kernel(&m(&[&[1, 0], &[0, 1]]), 2).is_empty());
        // zero map: whole lattice
        assert_eq!(kernel(&m(&[&[0, 0, 0]]), 3).len(), 3);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = m(&[&[3, 5, 7, 11], &[2, -4, 6, 0]]);
        let k = kernel(&a, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn primitive_normalizes_sign() {
        assert_eq!(primitive(&[-4, 6]), vec![2, -3]);
        assert_eq!(primitive(&[0, 0]), vec![0, 0]);
    }
}
