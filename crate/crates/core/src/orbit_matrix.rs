//! The real `2^{n+1} × (3n+1)` matrix `M` whose kernel is the isotropy Lie
//! algebra of a state, and the orbit dimension `rank M − 1`.
//!
//! Columns are ordered `(A_1, B_1, C_1, …, A_n, B_n, C_n, phase)`: column
//! `3k + g` is `G_kψ` for generator `g` and the last column is `−iψ`. Complex
//! vectors become real ones via `(z_1, …, z_N) ↦ (a_1, b_1, …, a_N, b_N)`, so
//! row `2p` holds real parts and row `2p + 1` imaginary parts for the
//! multi-index at storage position `p`.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::lie_action::{apply_algebra, triple_generic, LocalAlgebraElement};
use crate::rank::{ExactEchelon, PivotedQr};
use crate::state::{
    bit_set, rational_to_f64, slot_mask, times_i, Amplitudes, MultiIndex, PureState, Scalar,
};

/// Default relative pivot tolerance for the floating-point rank.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Which arithmetic produced a rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankPath {
    Exact,
    Float,
}

impl RankPath {
    pub fn as_str(self) -> &'static str {
        match self {
            RankPath::Exact => "exact",
            RankPath::Float => "float",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Entries {
    Float(DMatrix<f64>),
    /// Row-major.
    Exact(Vec<Vec<BigRational>>),
}

/// The matrix `M` of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitMatrix {
    n: usize,
    entries: Entries,
}

fn realify<T: Scalar>(columns: &[Vec<Complex<T>>]) -> Vec<Vec<T>> {
    let len = columns[0].len();
    let mut rows = Vec::with_capacity(2 * len);
    for p in 0..len {
        rows.push(columns.iter().map(|c| c[p].re.clone()).collect());
        rows.push(columns.iter().map(|c| c[p].im.clone()).collect());
    }
    rows
}

fn columns_generic<T: Scalar>(n: usize, amps: &[Complex<T>]) -> Vec<Vec<Complex<T>>> {
    let mut cols = Vec::with_capacity(3 * n + 1);
    for k in 0..n {
        let t = triple_generic(n, amps, k);
        cols.push(t.a);
        cols.push(t.b);
        cols.push(t.c);
    }
    cols.push(amps.iter().map(|z| -times_i(z)).collect());
    cols
}

/// Entrywise construction from the real and imaginary parts of the isotropy
/// equations, with `θ` moved to the left-hand side:
///
/// ```text
/// Re row I:  t_k: −(−1)^{i_k} b_I   r_k: (−1)^{i_k} a_{I_k}   s_k: −b_{I_k}   θ:  b_I
/// Im row I:  t_k:  (−1)^{i_k} a_I   r_k: (−1)^{i_k} b_{I_k}   s_k:  a_{I_k}   θ: −a_I
/// ```
fn equation_rows_generic<T: Scalar>(n: usize, amps: &[Complex<T>]) -> Vec<Vec<T>> {
    let signed = |set: bool, x: &T| if set { -x.clone() } else { x.clone() };
    let mut rows = Vec::with_capacity(2 * amps.len());
    for (i, c) in amps.iter().enumerate() {
        let mut re_row = Vec::with_capacity(3 * n + 1);
        let mut im_row = Vec::with_capacity(3 * n + 1);
        for k in 0..n {
            let mask = slot_mask(n, k);
            let set = bit_set(i, mask);
            let f = &amps[i ^ mask];
            re_row.push(-signed(set, &c.im));
            re_row.push(signed(set, &f.re));
            re_row.push(-f.im.clone());
            im_row.push(signed(set, &c.re));
            im_row.push(signed(set, &f.im));
            im_row.push(f.re.clone());
        }
        re_row.push(c.im.clone());
        im_row.push(-c.re.clone());
        rows.push(re_row);
        rows.push(im_row);
    }
    rows
}

fn float_from_rows(rows: Vec<Vec<f64>>, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j])
}

impl OrbitMatrix {
    /// Stacks the real forms of `A_kψ, B_kψ, C_kψ` and `−iψ` as columns.
    pub fn build(psi: &PureState) -> Self {
        let n = psi.n();
        let entries = match psi.amplitudes() {
            Amplitudes::Float(a) => {
                Entries::Float(float_from_rows(realify(&columns_generic(n, a)), 3 * n + 1))
            }
            Amplitudes::Exact(a) => Entries::Exact(realify(&columns_generic(n, a))),
        };
        Self { n, entries }
    }

    /// Independent builder evaluating the isotropy equations entry by entry.
    pub fn build_from_equations(psi: &PureState) -> Self {
        let n = psi.n();
        let entries = match psi.amplitudes() {
            Amplitudes::Float(a) => {
                Entries::Float(float_from_rows(equation_rows_generic(n, a), 3 * n + 1))
            }
            Amplitudes::Exact(a) => Entries::Exact(equation_rows_generic(n, a)),
        };
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nrows(&self) -> usize {
        2 << self.n
    }

    pub fn ncols(&self) -> usize {
        3 * self.n + 1
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows(), self.ncols())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, Entries::Exact(_))
    }

    /// Entry as a float.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        match &self.entries {
            Entries::Float(m) => m[(row, col)],
            Entries::Exact(rows) => rational_to_f64(&rows[row][col]),
        }
    }

    pub fn exact_entry(&self, row: usize, col: usize) -> Option<&BigRational> {
        match &self.entries {
            Entries::Exact(rows) => Some(&rows[row][col]),
            Entries::Float(_) => None,
        }
    }

    pub fn to_float(&self) -> DMatrix<f64> {
        match &self.entries {
            Entries::Float(m) => m.clone(),
            Entries::Exact(rows) => {
                DMatrix::from_fn(self.nrows(), self.ncols(), |i, j| rational_to_f64(&rows[i][j]))
            }
        }
    }

    /// Column labels `t1, r1, s1, …, tn, rn, sn, theta` (qubits numbered from 1).
    pub fn column_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = (1..=self.n)
            .flat_map(|k| [format!("t{k}"), format!("r{k}"), format!("s{k}")])
            .collect();
        labels.push("theta".into());
        labels
    }

    /// Row labels `I:re`, `I:im` with `I` as a bitstring.
    pub fn row_labels(&self) -> Vec<String> {
        (0..1usize << self.n)
            .flat_map(|p| {
                let bits = MultiIndex::from_index(self.n, p)
                    .expect("index in range")
                    .to_string();
                [format!("{bits}:re"), format!("{bits}:im")]
            })
            .collect()
    }

    /// Writes `M` as CSV with a header row of column labels.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["row".to_string()];
        header.extend(self.column_labels());
        out.write_record(&header).map_err(io)?;
        for (i, label) in self.row_labels().into_iter().enumerate() {
            let mut record = vec![label];
            for j in 0..self.ncols() {
                record.push(match &self.entries {
                    Entries::Exact(rows) => rows[i][j].to_string(),
                    Entries::Float(m) => format!("{:.16e}", m[(i, j)]),
                });
            }
            out.write_record(&record).map_err(io)?;
        }
        out.flush().map_err(|e| Error::Internal(format!("csv: {e}")))
    }

    /// Exact kernel basis from the same elimination that yields the rank.
    pub fn kernel_exact(&self) -> Result<Vec<Vec<BigRational>>> {
        match &self.entries {
            Entries::Exact(rows) => Ok(ExactEchelon::from_rational_rows(rows, self.ncols()).kernel()),
            Entries::Float(_) => Err(Error::UnsupportedRepresentation),
        }
    }

    /// Numerical rank and unit-norm kernel basis at relative tolerance `tol`.
    pub fn kernel_float(&self, tol: f64) -> (usize, Vec<DVector<f64>>) {
        let qr = PivotedQr::new(&self.to_float());
        let rank = qr.rank(tol);
        (rank, qr.kernel(rank))
    }

    /// `M · v` over the rationals.
    pub fn apply_exact(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.ncols() {
            return Err(Error::LengthMismatch {
                expected: self.ncols(),
                found: v.len(),
            });
        }
        match &self.entries {
            Entries::Exact(rows) => Ok(rows
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(v)
                        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                        .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect()),
            Entries::Float(_) => Err(Error::UnsupportedRepresentation),
        }
    }
}

/// Numerical rank of `M` via column-pivoted QR at relative tolerance `tol`.
pub fn rank_float(m: &OrbitMatrix, tol: f64) -> usize {
    PivotedQr::new(&m.to_float()).rank(tol)
}

/// Rank of `M` over the rationals.
pub fn rank_exact(m: &OrbitMatrix) -> Result<usize> {
    match &m.entries {
        Entries::Exact(rows) => Ok(ExactEchelon::from_rational_rows(rows, m.ncols()).rank()),
        Entries::Float(_) => Err(Error::UnsupportedRepresentation),
    }
}

/// An isotropy algebra element `X` with `X·ψ = iθψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsotropyElement {
    pub x: LocalAlgebraElement,
    pub theta: f64,
}

impl IsotropyElement {
    /// Splits a kernel vector `(t_1, r_1, s_1, …, θ)` of `M`.
    pub fn from_kernel_vector(v: &[f64]) -> Result<Self> {
        let (theta, xs) = v
            .split_last()
            .ok_or_else(|| invalid("empty kernel vector"))?;
        Ok(Self {
            x: LocalAlgebraElement::from_flat(xs)?,
            theta: *theta,
        })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = self.x.to_flat();
        v.push(self.theta);
        v
    }
}

/// Options controlling how a state is analyzed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub tolerance: f64,
    /// Fail instead of falling back to floats when the state is not exact.
    pub require_exact: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            require_exact: false,
        }
    }
}

/// Rank, path, and isotropy basis of one state.
#[derive(Debug, Clone)]
pub struct OrbitAnalysis {
    pub n: usize,
    pub rank: usize,
    pub path: RankPath,
    pub tolerance: f64,
    pub isotropy: Vec<IsotropyElement>,
}

impl OrbitAnalysis {
    pub fn orbit_dimension(&self) -> usize {
        self.rank - 1
    }

    pub fn isotropy_dimension(&self) -> usize {
        3 * self.n + 1 - self.rank
    }
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / nrm).collect()
}

fn to_element(v: Vec<f64>) -> IsotropyElement {
    let elem = IsotropyElement::from_kernel_vector(&v).expect("kernel vector has 3n+1 entries");
    // θ is determined by X: a kernel vector with X = 0 must be the zero vector.
    debug_assert!(elem.x.to_flat().iter().any(|&c| c != 0.0) || elem.theta == 0.0);
    elem
}

/// Rank of `M` and a basis of its kernel, exact when the state is exact.
pub fn analyze(psi: &PureState, opts: AnalysisOptions) -> Result<OrbitAnalysis> {
    let m = OrbitMatrix::build(psi);
    let (rank, path, isotropy) = if m.is_exact() {
        let rows = match &m.entries {
            Entries::Exact(rows) => rows,
            Entries::Float(_) => unreachable!(),
        };
        let echelon = ExactEchelon::from_rational_rows(rows, m.ncols());
        let basis = echelon
            .kernel()
            .into_iter()
            .map(|v| to_element(normalized(v.iter().map(rational_to_f64).collect())))
            .collect();
        (echelon.rank(), RankPath::Exact, basis)
    } else {
        if opts.require_exact {
            return Err(Error::UnsupportedRepresentation);
        }
        let (rank, kernel) = m.kernel_float(opts.tolerance);
        let basis = kernel
            .into_iter()
            .map(|v| to_element(v.iter().copied().collect()))
            .collect();
        (rank, RankPath::Float, basis)
    };
    if rank == 0 {
        return Err(Error::Internal("matrix of a nonzero state has rank 0".into()));
    }
    Ok(OrbitAnalysis {
        n: psi.n(),
        rank,
        path,
        tolerance: opts.tolerance,
        isotropy,
    })
}

/// `rank M − 1`: exact when the state is exact, float at the default
/// tolerance otherwise.
pub fn orbit_dimension(psi: &PureState) -> usize {
    let m = OrbitMatrix::build(psi);
    let rank = match rank_exact(&m) {
        Ok(r) => r,
        Err(_) => rank_float(&m, DEFAULT_TOLERANCE),
    };
    rank - 1
}

/// Basis of the isotropy Lie algebra, one element per kernel vector of `M`.
pub fn isotropy_basis(psi: &PureState) -> Vec<IsotropyElement> {
    analyze(psi, AnalysisOptions::default())
        .expect("default analysis cannot fail on a valid state")
        .isotropy
}

/// `‖X·ψ − iθψ‖ ≤ tol·‖ψ‖`.
pub fn verify_isotropy(psi: &PureState, elem: &IsotropyElement, tol: f64) -> Result<bool> {
    let xpsi = apply_algebra(&elem.x, psi)?;
    let amps = psi.to_f64();
    let residual: f64 = xpsi
        .iter()
        .zip(&amps)
        .map(|(a, c)| (a - c * num_complex::Complex64::new(0.0, elem.theta)).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(residual <= tol * psi.norm())
}

/// Smallest orbit dimension over all `n`-qubit states:
/// `3n/2` for even `n`, `(3n+1)/2` for odd `n`.
pub fn min_orbit_bound(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(invalid("qubit count must be at least 1"));
    }
    Ok((3 * n + 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_action::{triple_columns, Generator};
    use crate::state::{
        make_basis, make_cat, make_singlet_product, make_singlet_product_plus_zero,
        sample_haar_state,
    };
    use num_bigint::BigInt;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn basis(bits: &str) -> PureState {
        make_basis(bits.parse().unwrap())
    }

    #[test]
    fn hand_built_single_qubit_matrix() {
        let m = OrbitMatrix::build(&basis("0"));
        assert_eq!(m.shape(), (4, 4));
        let expected = [
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, -1.0, 0.0, 0.0],
        ];
        for (col, column) in expected.iter().enumerate() {
            for (row, &value) in column.iter().enumerate() {
                assert_eq!(m.get(row, col), value, "row {row} col {col}");
            }
        }
        assert_eq!(OrbitMatrix::build_from_equations(&basis("0")), m);
    }

    #[test]
    fn builders_agree_on_random_states() {
        for seed in 0..50u64 {
            let n = 1 + (seed as usize % 6);
            let psi = sample_haar_state(n, seed).unwrap();
            let a = OrbitMatrix::build(&psi).to_float();
            let b = OrbitMatrix::build_from_equations(&psi).to_float();
            assert_eq!(a.shape(), (2 << n, 3 * n + 1));
            assert!((a - b).abs().max() == 0.0, "seed {seed}");
        }
        let psi = make_singlet_product_plus_zero(2).unwrap();
        assert_eq!(OrbitMatrix::build(&psi), OrbitMatrix::build_from_equations(&psi));
    }

    #[test]
    fn columns_match_triples_and_entries_are_amplitudes() {
        let psi = sample_haar_state(3, 4).unwrap();
        let m = OrbitMatrix::build(&psi);
        let amps = psi.to_f64();
        for k in 0..3 {
            let t = triple_columns(&psi, k).unwrap();
            for (g, gen) in Generator::ALL.into_iter().enumerate() {
                for (p, z) in t.get(gen).iter().enumerate() {
                    assert_eq!(m.get(2 * p, 3 * k + g), z.re);
                    assert_eq!(m.get(2 * p + 1, 3 * k + g), z.im);
                }
            }
        }
        for (p, c) in amps.iter().enumerate() {
            let minus_i = c * Complex64::new(0.0, -1.0);
            assert_eq!(m.get(2 * p, 9), minus_i.re);
            assert_eq!(m.get(2 * p + 1, 9), minus_i.im);
        }
        let allowed: Vec<f64> = amps.iter().flat_map(|z| [z.re, -z.re, z.im, -z.im]).collect();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = m.get(i, j);
                assert!(v == 0.0 || allowed.contains(&v));
            }
        }
    }

    #[test]
    fn exact_ranks_of_named_families() {
        assert_eq!(rank_exact(&OrbitMatrix::build(&basis("000"))).unwrap(), 7);
        assert_eq!(rank_exact(&OrbitMatrix::build(&make_singlet_product(2).unwrap())).unwrap(), 7);
        assert_eq!(rank_exact(&OrbitMatrix::build(&make_cat(3).unwrap())).unwrap(), 8);
        let float = OrbitMatrix::build(&sample_haar_state(2, 1).unwrap());
        assert_eq!(rank_exact(&float), Err(Error::UnsupportedRepresentation));
    }

    #[test]
    fn float_rank_of_singlet() {
        let m = OrbitMatrix::build(&make_singlet_product(1).unwrap().to_float_state());
        assert_eq!(rank_float(&m, DEFAULT_TOLERANCE), 4);
    }

    #[test]
    fn float_rank_agrees_with_exact_on_families() {
        let mut states = vec![];
        for n in 1..=8 {
            states.push(make_cat(n).unwrap());
            states.push(make_basis(MultiIndex::from_index(n, (0x5a5a >> n) & ((1 << n) - 1)).unwrap()));
        }
        for k in 1..=4 {
            states.push(make_singlet_product(k).unwrap());
        }
        for k in 1..=3 {
            states.push(make_singlet_product_plus_zero(k).unwrap());
        }
        for psi in states {
            let m = OrbitMatrix::build(&psi);
            assert_eq!(rank_float(&m, DEFAULT_TOLERANCE), rank_exact(&m).unwrap());
        }
    }

    #[test]
    fn orbit_dimensions() {
        assert_eq!(orbit_dimension(&make_singlet_product(1).unwrap()), 3);
        assert_eq!(orbit_dimension(&make_singlet_product_plus_zero(1).unwrap()), 5);
        for n in 1..=6 {
            let zeros = make_basis(MultiIndex::from_index(n, 0).unwrap());
            assert_eq!(orbit_dimension(&zeros), 2 * n);
        }
    }

    #[test]
    fn basis_state_kernel_oracle() {
        // (t_1 A, …, t_n A) with θ = Σ t_k annihilates the system
        for n in 1..=5 {
            let m = OrbitMatrix::build(&make_basis(MultiIndex::from_index(n, 0).unwrap()));
            for k in 0..n {
                let mut v = vec![BigRational::zero(); 3 * n + 1];
                v[3 * k] = BigRational::from_integer(BigInt::from(1));
                v[3 * n] = BigRational::from_integer(BigInt::from(1));
                assert!(m.apply_exact(&v).unwrap().iter().all(Zero::is_zero));
            }
            assert_eq!(m.kernel_exact().unwrap().len(), n);
        }
    }

    #[test]
    fn singlet_isotropy_contains_diagonal_pairs() {
        let s = make_singlet_product(1).unwrap();
        let basis = isotropy_basis(&s);
        assert_eq!(basis.len(), 3);
        let span = DMatrix::from_fn(7, 3, |i, j| basis[j].to_flat()[i]);
        for g in 0..3 {
            let mut target = DVector::zeros(7);
            target[g] = 1.0;
            target[3 + g] = 1.0;
            let aug = DMatrix::from_fn(7, 4, |i, j| if j < 3 { span[(i, j)] } else { target[i] });
            assert_eq!(crate::rank::numerical_rank(&aug, 1e-10), 3);
        }
        for e in &basis {
            assert!(verify_isotropy(&s, e, 1e-10).unwrap());
        }
    }

    #[test]
    fn random_three_qubit_isotropy_is_trivial() {
        for seed in 0..5 {
            assert!(isotropy_basis(&sample_haar_state(3, seed).unwrap()).is_empty());
        }
    }

    #[test]
    fn verify_isotropy_examples() {
        let s = make_singlet_product(1).unwrap();
        for g in Generator::ALL {
            let x = LocalAlgebraElement::new(vec![g.into(), g.into()]);
            assert!(verify_isotropy(&s, &IsotropyElement { x, theta: 0.0 }, 1e-12).unwrap());
        }
        let ket0 = basis("0");
        let a = IsotropyElement {
            x: LocalAlgebraElement::unit(1, 0, Generator::A).unwrap(),
            theta: 1.0,
        };
        assert!(verify_isotropy(&ket0, &a, 1e-12).unwrap());
        let b = IsotropyElement {
            x: LocalAlgebraElement::unit(1, 0, Generator::B).unwrap(),
            theta: 0.0,
        };
        assert!(!verify_isotropy(&ket0, &b, 1e-12).unwrap());
    }

    #[test]
    fn bound_formula() {
        assert_eq!(min_orbit_bound(2).unwrap(), 3);
        assert_eq!(min_orbit_bound(3).unwrap(), 5);
        assert_eq!(min_orbit_bound(10).unwrap(), 15);
        assert_eq!(min_orbit_bound(1).unwrap(), 2);
        assert!(min_orbit_bound(0).is_err());
    }

    #[test]
    fn csv_dump_has_labels() {
        let mut buf = Vec::new();
        OrbitMatrix::build(&make_singlet_product(1).unwrap())
            .write_csv(&mut buf)
            .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "row,t1,r1,s1,t2,r2,s2,theta");
        // B_1ψ = c_10 = −1 and B_2ψ = c_01 = 1 at I = 00
        assert_eq!(lines.next().unwrap(), "00:re,0,-1,0,0,1,0,0");
        assert_eq!(text.lines().count(), 9);
        assert!(text.contains("01:im,1,"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn exact_kernel_is_exact(k in 1usize..4, extra in 0usize..2, bits in any::<u16>()) {
            let psi = if extra == 0 {
                make_singlet_product(k).unwrap()
            } else {
                crate::state::tensor(&make_singlet_product(k).unwrap(), &basis(if bits & 1 == 0 { "0" } else { "1" })).unwrap()
            };
            let m = OrbitMatrix::build(&psi);
            let kernel = m.kernel_exact().unwrap();
            prop_assert_eq!(kernel.len(), m.ncols() - rank_exact(&m).unwrap());
            for v in kernel {
                prop_assert!(m.apply_exact(&v).unwrap().iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn rank_is_scale_invariant(n in 1usize..6, seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
            prop_assume!(re.abs() + im.abs() > 1e-3);
            let psi = sample_haar_state(n, seed).unwrap();
            let scaled = psi.scaled(Complex64::new(re, im)).unwrap();
            prop_assert_eq!(orbit_dimension(&scaled), orbit_dimension(&psi));
        }

        #[test]
        fn orbit_dimension_within_bounds(n in 1usize..7, seed in any::<u64>()) {
            let psi = sample_haar_state(n, seed).unwrap();
            let d = orbit_dimension(&psi);
            prop_assert!(d >= min_orbit_bound(n).unwrap());
            prop_assert!(d <= 3 * n);
        }

        #[test]
        fn float_isotropy_elements_verify(n in 1usize..4, seed in any::<u64>()) {
            // product states have nontrivial isotropy
            let a = sample_haar_state(1, seed).unwrap();
            let b = sample_haar_state(n, seed ^ 1).unwrap();
            let psi = crate::state::tensor(&a, &b).unwrap();
            let analysis = analyze(&psi, AnalysisOptions::default()).unwrap();
            prop_assert_eq!(analysis.isotropy.len(), analysis.isotropy_dimension());
            for e in &analysis.isotropy {
                prop_assert!(verify_isotropy(&psi, e, 1e-10).unwrap());
            }
        }
    }
}
