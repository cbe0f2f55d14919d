//! Rank and kernel computations.
//!
//! Floating point: Householder QR with column pivoting on the remaining
//! column norms. A pivot counts as nonzero when `|R_jj| > tol · |R_00|`.
//!
//! Exact: fraction-free (Bareiss) elimination over the integers after clearing
//! row denominators. Kernels in both paths come from back-substitution on the
//! same factorization that produced the rank.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Column-pivoted QR factorization `A P = Q R`.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    /// `R` in the upper triangle; Householder residue below it is zeroed.
    r: DMatrix<f64>,
    /// `perm[j]` is the original column placed at position `j`.
    perm: Vec<usize>,
}

impl PivotedQr {
    pub fn new(a: &DMatrix<f64>) -> Self {
        let (rows, cols) = a.shape();
        let mut m = a.clone();
        let mut perm: Vec<usize> = (0..cols).collect();
        for j in 0..rows.min(cols) {
            let mut best = j;
            let mut best_norm = -1.0;
            for c in j..cols {
                let nrm = m.view((j, c), (rows - j, 1)).norm_squared();
                if nrm > best_norm {
                    best = c;
                    best_norm = nrm;
                }
            }
            if best != j {
                m.swap_columns(j, best);
                perm.swap(j, best);
            }
            let mut v: DVector<f64> = m.view((j, j), (rows - j, 1)).column(0).into_owned();
            let alpha = v.norm();
            if alpha == 0.0 {
                break;
            }
            let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
            v[0] += sign * alpha;
            let scale = 2.0 / v.norm_squared();
            for c in j..cols {
                let mut col = m.column_mut(c);
                let mut part = col.rows_mut(j, rows - j);
                let d = v.dot(&part) * scale;
                part.axpy(-d, &v, 1.0);
            }
            m[(j, j)] = -sign * alpha;
            for i in j + 1..rows {
                m[(i, j)] = 0.0;
            }
        }
        Self { r: m, perm }
    }

    /// `|R_jj|` in pivot order.
    pub fn pivots(&self) -> Vec<f64> {
        let (rows, cols) = self.r.shape();
        (0..rows.min(cols)).map(|j| self.r[(j, j)].abs()).collect()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Number of leading pivots exceeding `tol` times the largest pivot.
    pub fn rank(&self, tol: f64) -> usize {
        let pivots = self.pivots();
        let Some(&largest) = pivots.first() else {
            return 0;
        };
        if largest == 0.0 {
            return 0;
        }
        pivots.iter().take_while(|&&p| p > tol * largest).count()
    }

    /// Unit-norm kernel basis vectors assuming numerical rank `rank`.
    ///
    /// Each free column `f` yields `P [−R11⁻¹ R12 e_f; e_f]`.
    pub fn kernel(&self, rank: usize) -> Vec<DVector<f64>> {
        let cols = self.r.ncols();
        (rank..cols)
            .map(|f| {
                let mut y = vec![0.0; cols];
                y[f] = 1.0;
                for i in (0..rank).rev() {
                    let mut acc = self.r[(i, f)];
                    for j in i + 1..rank {
                        acc += self.r[(i, j)] * y[j];
                    }
                    y[i] = -acc / self.r[(i, i)];
                }
                let mut x = DVector::zeros(cols);
                for (pos, &orig) in self.perm.iter().enumerate() {
                    x[orig] = y[pos];
                }
                let nrm = x.norm();
                x / nrm
            })
            .collect()
    }
}

/// Numerical rank of a real matrix at relative tolerance `tol`.
pub fn numerical_rank(a: &DMatrix<f64>, tol: f64) -> usize {
    PivotedQr::new(a).rank(tol)
}

/// Row echelon form produced by fraction-free elimination.
#[derive(Debug, Clone)]
pub struct ExactEchelon {
    /// The nonzero echelon rows, one per pivot.
    rows: Vec<Vec<BigInt>>,
    pivot_cols: Vec<usize>,
    cols: usize,
}

impl ExactEchelon {
    /// Eliminates integer rows of length `cols`.
    pub fn from_integer_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let mut a: Vec<Vec<BigInt>> = rows
            .into_iter()
            .inspect(|r| assert_eq!(r.len(), cols, "ragged matrix"))
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        let mut prev = BigInt::one();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == a.len() {
                break;
            }
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let (head, tail) = a.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let pivot = pivot_row[c].clone();
            for row in tail.iter_mut() {
                let factor = std::mem::take(&mut row[c]);
                for j in c + 1..cols {
                    let num = &pivot * &row[j] - &factor * &pivot_row[j];
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    row[j] = q;
                }
            }
            // drop rows that became zero; they cannot produce later pivots
            let mut keep: Vec<Vec<BigInt>> = a
                .drain(r + 1..)
                .filter(|row| row.iter().any(|x| !x.is_zero()))
                .collect();
            a.append(&mut keep);
            prev = pivot;
            pivot_cols.push(c);
            r += 1;
        }
        a.truncate(r);
        Self {
            rows: a,
            pivot_cols,
            cols,
        }
    }

    /// Eliminates rational rows; each row is first scaled by the lcm of its
    /// denominators, which leaves the row space unchanged.
    pub fn from_rational_rows(rows: &[Vec<BigRational>], cols: usize) -> Self {
        let ints = rows
            .iter()
            .map(|row| {
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                row.iter()
                    .map(|q| q.numer() * (&lcm / q.denom()))
                    .collect()
            })
            .collect();
        Self::from_integer_rows(ints, cols)
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    /// Kernel basis: one vector per free column, with a 1 in that column and
    /// zeros in the other free columns.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let free: Vec<usize> = (0..self.cols)
            .filter(|c| !self.pivot_cols.contains(c))
            .collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![BigRational::zero(); self.cols];
                x[f] = BigRational::one();
                for (row, &pc) in self.rows.iter().zip(&self.pivot_cols).rev() {
                    let mut acc = BigRational::zero();
                    for j in pc + 1..self.cols {
                        if !row[j].is_zero() && !x[j].is_zero() {
                            acc += BigRational::from_integer(row[j].clone()) * &x[j];
                        }
                    }
                    x[pc] = -acc / BigRational::from_integer(row[pc].clone());
                }
                x
            })
            .collect()
    }
}

/// Exact rank of an integer matrix given as rows.
pub fn exact_rank_integer(rows: Vec<Vec<BigInt>>, cols: usize) -> usize {
    ExactEchelon::from_integer_rows(rows, cols).rank()
}
