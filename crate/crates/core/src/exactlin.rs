//! Exact inertia of symmetric integer matrices.
//!
//! Everything here runs over `BigInt`/`BigRational`; there is no floating
//! point on any path. The inertia is read off a congruence diagonalization,
//! so Sylvester's law of inertia guarantees the counts are those of the
//! original matrix.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
}

/// Dense symmetric matrix with unbounded integer entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymIntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl SymIntMatrix {
    pub fn zeros(n: usize) -> Self {
        SymIntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LinError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(LinError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            entries.extend(r);
        }
        let m = SymIntMatrix { n, entries };
        for i in 0..n {
            for j in (i + 1)..n {
                if m.get(i, j) != m.get(j, i) {
                    return Err(LinError::NotSymmetric { i, j });
                }
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, LinError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// `diag(d_0, …, d_{n-1})`.
    pub fn diagonal(d: &[i64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.entries[i * d.len() + i] = BigInt::from(x);
        }
        m
    }

    /// `A + Aᵀ` for an arbitrary square integer matrix `A`.
    pub fn symmetrize(a: &[Vec<BigInt>]) -> Result<Self, LinError> {
        let n = a.len();
        for (row, r) in a.iter().enumerate() {
            if r.len() != n {
                return Err(LinError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[i * n + j] = &a[i][j] + &a[j][i];
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    /// Adds `v` to entries `(i, j)` and `(j, i)` (once if `i == j`).
    pub fn add_sym(&mut self, i: usize, j: usize, v: &BigInt) {
        let n = self.n;
        self.entries[i * n + j] += v;
        if i != j {
            self.entries[j * n + i] += v;
        }
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    /// Principal submatrix with row/column `k` removed.
    pub fn delete(&self, k: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&i| i != k).collect();
        let mut m = Self::zeros(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m.entries[a * keep.len() + b] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn neg(&self) -> Self {
        SymIntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut m = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.entries[i * n + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                m.entries[(i + self.n) * n + j + self.n] = other.get(i, j).clone();
            }
        }
        m
    }

    /// `Pᵀ · self · P` for a square integer matrix `P` of matching size.
    pub fn congruent(&self, p: &[Vec<BigInt>]) -> Self {
        let n = self.n;
        assert_eq!(p.len(), n);
        let mut mp = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    mp[i][j] += a * &p[k][j];
                }
            }
        }
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                if p[k][i].is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += &p[k][i] * &mp[k][j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for SymIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        write!(f, "SymIntMatrix{:?}", rows)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InertiaTriple {
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero: usize,
}

impl InertiaTriple {
    pub fn signature(&self) -> i64 {
        self.n_pos as i64 - self.n_neg as i64
    }

    pub fn dim(&self) -> usize {
        self.n_pos + self.n_neg + self.n_zero
    }
}

impl std::ops::Add for InertiaTriple {
    type Output = InertiaTriple;
    fn add(self, o: InertiaTriple) -> InertiaTriple {
        InertiaTriple {
            n_pos: self.n_pos + o.n_pos,
            n_neg: self.n_neg + o.n_neg,
            n_zero: self.n_zero + o.n_zero,
        }
    }
}

/// Counts of positive, negative and zero eigenvalues of `m`.
///
/// Symmetric elimination: each step is a congruence `A ↦ EᵀAE`. A zero
/// pivot with a nonzero off-diagonal entry is repaired by swapping in a
/// nonzero diagonal entry if one exists, otherwise by adding row/column `j`
/// to row/column `k`, which makes the pivot `2·a[k][j] ≠ 0`.
pub fn inertia(m: &SymIntMatrix) -> InertiaTriple {
    let n = m.dim();
    let mut a: Vec<Vec<BigRational>> = m
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut out = InertiaTriple::default();

    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = ((k + 1)..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = ((k + 1)..n).find(|&j| !a[k][j].is_zero()) {
                // row_k += row_j, then col_k += col_j
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            } else {
                out.n_zero += 1;
                continue;
            }
        }

        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            out.n_pos += 1;
        } else {
            out.n_neg += 1;
        }

        let pivot_row: Vec<(usize, BigRational)> = ((k + 1)..n)
            .filter(|&c| !a[k][c].is_zero())
            .map(|c| (c, a[k][c].clone()))
            .collect();
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for (c, v) in &pivot_row {
                let d = &f * v;
                a[i][*c] -= d;
            }
            a[i][k] = BigRational::zero();
        }
        for c in (k + 1)..n {
            a[k][c] = BigRational::zero();
        }
    }
    out
}

/// `n₊ − n₋`.
pub fn signature(m: &SymIntMatrix) -> i64 {
    inertia(m).signature()
}

/// Identity helper used by callers building unimodular changes of basis.
pub fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> SymIntMatrix {
        SymIntMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn small_examples() {
        let t = inertia(&SymIntMatrix::diagonal(&[2, -3]));
        assert_eq!((t.n_pos, t.n_neg, t.n_zero), (1, 1, 0));
        let t = inertia(&m(&[vec![0]]));
        assert_eq!((t.n_pos, t.n_neg, t.n_zero), (0, 0, 1));
        let t = inertia(&m(&[vec![0, 1], vec![1, 0]]));
        assert_eq!((t.n_pos, t.n_neg, t.n_zero), (1, 1, 0));
        let t = inertia(&m(&[vec![-2, 1], vec![1, -2]]));
        assert_eq!((t.n_pos, t.n_neg, t.n_zero), (0, 2, 0));
    }

    #[test]
    fn signatures() {
        assert_eq!(signature(&SymIntMatrix::diagonal(&[2, -3])), 0);
        assert_eq!(signature(&m(&[vec![-2, 1], vec![1, -2]])), -2);
        assert_eq!(signature(&SymIntMatrix::zeros(0)), 0);
    }

    #[test]
    fn zero_pivot_needs_row_combination() {
        // all diagonal entries zero
        let t = inertia(&m(&[
            vec![0, 1, 1],
            vec![1, 0, 1],
            vec![1, 1, 0],
        ]));
        // eigenvalues 2, -1, -1
        assert_eq!((t.n_pos, t.n_neg, t.n_zero), (1, 2, 0));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(
            SymIntMatrix::from_i64(&[vec![1, 2], vec![3, 4]]),
            Err(LinError::NotSymmetric { i: 0, j: 1 })
        );
        assert!(matches!(
            SymIntMatrix::from_i64(&[vec![1, 2], vec![3]]),
            Err(LinError::NotSquare { row: 1, .. })
        ));
    }

    #[test]
    fn huge_entries() {
        let big: BigInt = BigInt::from(10).pow(40);
        let mat = SymIntMatrix::from_rows(vec![
            vec![big.clone(), big.clone() + 1],
            vec![big.clone() + 1, big.clone()],
        ])
        .unwrap();
        // det = big² − (big+1)² < 0
        assert_eq!(inertia(&mat), InertiaTriple { n_pos: 1, n_neg: 1, n_zero: 0 });
    }
}
