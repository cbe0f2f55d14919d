//! GF(2) machinery behind the orthogonality arguments.
//!
//! For a 0/1 matrix `L` with sign matrix `E = ((−1)^{L_jk})`: if `E` has a
//! nontrivial real kernel then either `L` has a nontrivial GF(2) kernel or
//! `L v = (1, …, 1)` for some `v`. Applied to the rows `r ∈ {0,1}^m` at which
//! `Σ_i (−1)^{r_i} ξ_i` vanishes, the witness `v` gives a nonempty set `𝒦` of
//! even size on which every such row has the same parity `b`.
//!
//! Rows and GF(2) vectors are packed into `u64` masks: bit `i` holds column
//! `i` (0-based), so at most 64 columns are supported.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::rank::exact_rank_integer;
use crate::state::MultiIndex;

/// Largest `m` for which the `2^m` diagonal entries are enumerated.
pub const MAX_ENUMERATION_BITS: usize = 24;

/// Default relative zero test for float `ξ`: `|Σ ±ξ_i| ≤ tol · ‖ξ‖₁`.
pub const DEFAULT_ZERO_TOLERANCE: f64 = 1e-9;

/// An `ℓ × m` matrix over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Z2Matrix {
    rows: Vec<u64>,
    cols: usize,
}

impl Z2Matrix {
    pub fn from_rows(rows: Vec<u64>, cols: usize) -> Result<Self> {
        if cols == 0 || cols > 64 {
            return Err(invalid(format!("column count {cols} outside 1..=64")));
        }
        let spill = if cols == 64 { 0 } else { !0u64 << cols };
        if rows.iter().any(|r| r & spill != 0) {
            return Err(invalid("row has bits beyond the column count"));
        }
        Ok(Self { rows, cols })
    }

    /// Builds from rows of 0/1 entries listed by column.
    pub fn from_bits(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let packed = rows
            .iter()
            .map(|row| {
                if row.len() != cols {
                    return Err(Error::LengthMismatch {
                        expected: cols,
                        found: row.len(),
                    });
                }
                row.iter().enumerate().try_fold(0u64, |acc, (j, &b)| match b {
                    0 => Ok(acc),
                    1 => Ok(acc | 1 << j),
                    other => Err(invalid(format!("entry {other} is not 0 or 1"))),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(packed, cols)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        ((self.rows[row] >> col) & 1) as u8
    }

    /// `L v` over GF(2), one bit per row.
    pub fn mul_vec(&self, v: u64) -> Vec<u8> {
        self.rows
            .iter()
            .map(|r| ((r & v).count_ones() & 1) as u8)
            .collect()
    }

    /// Exact rank of `E = ((−1)^{L_jk})` over the rationals.
    pub fn sign_matrix_rank(&self) -> usize {
        let mut distinct = self.rows.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let rows = distinct
            .iter()
            .map(|r| {
                (0..self.cols)
                    .map(|j| BigInt::from(if r >> j & 1 == 1 { -1 } else { 1 }))
                    .collect()
            })
            .collect();
        exact_rank_integer(rows, self.cols)
    }
}

/// Which branch of the sign-matrix dichotomy a witness came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// `L v = 0`, `v ≠ 0`.
    Kernel,
    /// `L v = (1, …, 1)`.
    OnesPreimage,
}

/// A GF(2) witness together with its parity set and parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Z2Witness {
    pub kind: WitnessKind,
    /// The vector `v`, bit `i` for column `i`.
    pub v: u64,
    pub cols: usize,
    /// Support of `v`, 0-based.
    pub parity_set: Vec<usize>,
    /// 0 for a kernel witness, 1 for a ones-preimage.
    pub parity: u8,
}

impl Z2Witness {
    fn new(kind: WitnessKind, v: u64, cols: usize) -> Self {
        Self {
            kind,
            v,
            cols,
            parity_set: (0..cols).filter(|&i| v >> i & 1 == 1).collect(),
            parity: match kind {
                WitnessKind::Kernel => 0,
                WitnessKind::OnesPreimage => 1,
            },
        }
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.cols).map(|i| (self.v >> i & 1) as u8).collect()
    }

    /// Checks the defining equation against `l`.
    pub fn verifies(&self, l: &Z2Matrix) -> bool {
        let target = match self.kind {
            WitnessKind::Kernel => {
                if self.v == 0 {
                    return false;
                }
                0
            }
            WitnessKind::OnesPreimage => 1,
        };
        l.mul_vec(self.v).iter().all(|&b| b == target)
    }
}

/// Reduced echelon basis of the row space, keyed by pivot column.
struct RowBasis {
    /// `(pivot column, row)`; each pivot column is clear in every other row.
    rows: Vec<(usize, u64)>,
}

impl RowBasis {
    fn new(l: &Z2Matrix) -> Self {
        let mut rows: Vec<(usize, u64)> = Vec::new();
        for &raw in l.rows() {
            let mut r = raw;
            for &(p, b) in &rows {
                if r >> p & 1 == 1 {
                    r ^= b;
                }
            }
            if r == 0 {
                continue;
            }
            let p = r.trailing_zeros() as usize;
            for (_, b) in rows.iter_mut() {
                if *b >> p & 1 == 1 {
                    *b ^= r;
                }
            }
            rows.push((p, r));
            if rows.len() == l.ncols() {
                break;
            }
        }
        Self { rows }
    }

    /// Kernel basis from the free columns of the reduced form.
    fn kernel(&self, cols: usize) -> Vec<u64> {
        let pivots: u64 = self.rows.iter().fold(0, |acc, &(p, _)| acc | 1 << p);
        (0..cols)
            .filter(|f| pivots >> f & 1 == 0)
            .map(|f| {
                let mut v = 1u64 << f;
                for &(p, b) in &self.rows {
                    if b >> f & 1 == 1 {
                        v |= 1 << p;
                    }
                }
                v
            })
            .collect()
    }
}

/// Lexicographically smallest nonzero vector in the span of `basis`, reading
/// `(v_1, …, v_m)` with `v_1` most significant.
fn lex_min_nonzero(basis: &[u64], cols: usize) -> Option<u64> {
    let key = |v: u64| v.reverse_bits() >> (64 - cols);
    let mut echelon: Vec<u64> = Vec::new();
    for &b in basis {
        let mut x = key(b);
        for &e in &echelon {
            x = x.min(x ^ e);
        }
        if x != 0 {
            echelon.push(x);
            echelon.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    // leading bits are distinct, so the vector with the lowest one is the minimum
    echelon.iter().copied().min().map(key)
}

/// Solves `L v = (1, …, 1)` by elimination on `[L | 1]`.
fn ones_preimage(l: &Z2Matrix) -> Option<u64> {
    let mut rows: Vec<(usize, u64, bool)> = Vec::new();
    for &raw in l.rows() {
        let (mut r, mut rhs) = (raw, true);
        for &(p, b, c) in &rows {
            if r >> p & 1 == 1 {
                r ^= b;
                rhs ^= c;
            }
        }
        if r == 0 {
            if rhs {
                return None;
            }
            continue;
        }
        let p = r.trailing_zeros() as usize;
        for (_, b, c) in rows.iter_mut() {
            if *b >> p & 1 == 1 {
                *b ^= r;
                *c ^= rhs;
            }
        }
        rows.push((p, r, rhs));
    }
    Some(
        rows.iter()
            .filter(|&&(_, _, c)| c)
            .fold(0u64, |acc, &(p, _, _)| acc | 1 << p),
    )
}

fn solve_unchecked(l: &Z2Matrix) -> Result<Z2Witness> {
    let basis = RowBasis::new(l);
    let kernel = basis.kernel(l.ncols());
    let witness = if let Some(v) = lex_min_nonzero(&kernel, l.ncols()) {
        Z2Witness::new(WitnessKind::Kernel, v, l.ncols())
    } else {
        let v = ones_preimage(l).ok_or(Error::InternalContradiction)?;
        Z2Witness::new(WitnessKind::OnesPreimage, v, l.ncols())
    };
    if !witness.verifies(l) {
        return Err(Error::Internal("GF(2) witness failed verification".into()));
    }
    Ok(witness)
}

/// Finds a GF(2) kernel vector of `L`, or failing that a preimage of the
/// all-ones vector. Kernel witnesses are preferred; among kernel vectors the
/// lexicographically smallest is returned.
///
/// Fails with [`Error::NoWitness`] if the sign matrix of `L` is injective.
pub fn solve_sign_kernel(l: &Z2Matrix) -> Result<Z2Witness> {
    if l.sign_matrix_rank() == l.ncols() {
        return Err(Error::NoWitness);
    }
    solve_unchecked(l)
}

fn check_capacity(m: usize) -> Result<()> {
    if m == 0 {
        return Err(invalid("ξ must be nonempty"));
    }
    if m > MAX_ENUMERATION_BITS {
        return Err(Error::Capacity(format!(
            "{m} coefficients exceed the enumeration cap of {MAX_ENUMERATION_BITS}"
        )));
    }
    Ok(())
}

/// Streams the diagonal `Σ_i (−1)^{r_i} ξ_i` over `r ∈ [0, 2^m)` by splitting
/// `r` into a low and a high half and adding two precomputed partial sums.
fn zero_rows_by<T, F>(xi: &[T], add: fn(&T, &T) -> T, neg: fn(&T) -> T, zero: T, is_zero: F) -> Vec<u64>
where
    T: Clone,
    F: Fn(&T) -> bool,
{
    let m = xi.len();
    let lo_bits = m / 2;
    let partial = |part: &[T]| -> Vec<T> {
        (0..1usize << part.len())
            .map(|r| {
                part.iter().enumerate().fold(zero.clone(), |acc, (i, x)| {
                    if r >> i & 1 == 1 {
                        add(&acc, &neg(x))
                    } else {
                        add(&acc, x)
                    }
                })
            })
            .collect()
    };
    let lo = partial(&xi[..lo_bits]);
    let hi = partial(&xi[lo_bits..]);
    let mut out = Vec::new();
    for (h, hv) in hi.iter().enumerate() {
        for (l, lv) in lo.iter().enumerate() {
            if is_zero(&add(hv, lv)) {
                out.push(((h << lo_bits) | l) as u64);
            }
        }
    }
    out
}

/// All `r ∈ {0,1}^m` (bit `i` of the returned mask is `r_{i+1}`) with
/// `|Σ_i (−1)^{r_i} ξ_i| ≤ tol · ‖ξ‖₁`, in increasing order of `r`.
pub fn zero_rows(xi: &[f64], tol: f64) -> Result<Vec<u64>> {
    check_capacity(xi.len())?;
    let l1: f64 = xi.iter().map(|x| x.abs()).sum();
    if l1 == 0.0 {
        return Err(invalid("ξ must not be all zero"));
    }
    let threshold = tol * l1;
    Ok(zero_rows_by(xi, |a, b| a + b, |a| -a, 0.0, |s| s.abs() <= threshold))
}

/// Exact variant of [`zero_rows`] for rational `ξ`.
pub fn zero_rows_exact(xi: &[BigRational]) -> Result<Vec<u64>> {
    check_capacity(xi.len())?;
    if xi.iter().all(Zero::is_zero) {
        return Err(invalid("ξ must not be all zero"));
    }
    let lcm = xi.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = xi.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    // 24 terms of magnitude below 2^100 cannot overflow i128
    let small: Option<Vec<i128>> = ints
        .iter()
        .map(|x| x.to_i128().filter(|v| v.unsigned_abs() < 1u128 << 100))
        .collect();
    Ok(match small {
        Some(v) => zero_rows_by(&v, |a, b| a + b, |a| -a, 0i128, |s| *s == 0),
        None => zero_rows_by(&ints, |a, b| a + b, |a| -a, BigInt::zero(), |s| s.is_zero()),
    })
}

fn parity_witness(rows: Vec<u64>, m: usize) -> Result<Z2Witness> {
    if rows.is_empty() {
        return Err(Error::NoWitness);
    }
    let l = Z2Matrix::from_rows(rows, m)?;
    let w = solve_unchecked(&l)?;
    if w.parity_set.is_empty() || w.parity_set.len() % 2 != 0 {
        return Err(Error::Internal(format!(
            "parity set {:?} is not a nonempty even set",
            w.parity_set
        )));
    }
    Ok(w)
}

/// Parity set `𝒦` and parity `b` for the zero rows of `ξ`.
///
/// The zero rows themselves certify that the sign matrix kills `ξ`, so the
/// rank precondition of [`solve_sign_kernel`] is not re-checked.
pub fn find_parity_set(xi: &[f64], tol: f64) -> Result<Z2Witness> {
    parity_witness(zero_rows(xi, tol)?, xi.len())
}

/// Exact variant of [`find_parity_set`].
pub fn find_parity_set_exact(xi: &[BigRational]) -> Result<Z2Witness> {
    parity_witness(zero_rows_exact(xi)?, xi.len())
}

/// `Σ_{k∈𝒦} r_k mod 2` if it is the same for every row, else `None`.
pub fn constant_parity(rows: &[u64], parity_set: &[usize]) -> Option<u8> {
    let mask = parity_set.iter().fold(0u64, |acc, &k| acc | 1 << k);
    let mut parities = rows.iter().map(|r| ((r & mask).count_ones() & 1) as u8);
    let first = parities.next()?;
    parities.all(|p| p == first).then_some(first)
}

/// Splits all `n`-bit multi-indices by the parity of their bits in `slots`:
/// the first class has parity `b`, the second the opposite parity.
pub fn partition_parity_classes(
    n: usize,
    slots: &[usize],
    b: u8,
) -> Result<(Vec<MultiIndex>, Vec<MultiIndex>)> {
    if slots.is_empty() {
        return Err(invalid("slot set must be nonempty"));
    }
    if let Some(&k) = slots.iter().find(|&&k| k >= n) {
        return Err(invalid(format!("slot {k} out of range for {n} qubits")));
    }
    if b > 1 {
        return Err(invalid(format!("parity {b} is not a bit")));
    }
    let mut same = Vec::with_capacity(1 << (n - 1));
    let mut other = Vec::with_capacity(1 << (n - 1));
    for index in 0..1usize << n {
        let m = MultiIndex::from_index(n, index)?;
        let parity = slots.iter().map(|&k| m.bit(k)).sum::<u8>() & 1;
        if parity == b {
            same.push(m);
        } else {
            other.push(m);
        }
    }
    Ok((same, other))
}
