//! Closed-form inner products between columns of `M`, and executable checks
//! of the orthogonality statements built on them.
//!
//! Inner products are conjugate-linear in the left argument:
//! `⟨u|v⟩ = Σ conj(u_p) v_p`. Viewed through `ℂ^N ≅ ℝ^{2N}`, the real dot
//! product of `u` and `v` is `Re⟨u|v⟩`.
//!
//! The single-operator forms `⟨ψ|A_k|ψ⟩`, `⟨ψ|B_k|ψ⟩`, `⟨ψ|C_k|ψ⟩` pair with
//! `ψ` itself, not with the last column `−iψ` of `M`; the two differ by a
//! factor of `i`, which does not affect whether they vanish.

use std::fmt;

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lie_action::{triple_columns, triple_columns_exact, Triple};
use crate::state::{bit_set, slot_mask, times_i, PureState, Scalar};
use crate::z2::{find_parity_set, DEFAULT_ZERO_TOLERANCE};

/// Relative threshold for accepting a scenario's hypothesis.
pub const HYPOTHESIS_TOLERANCE: f64 = 1e-12;

/// Relative threshold (times `‖ψ‖²`) for a real dot product to count as zero.
pub const CONCLUSION_TOLERANCE: f64 = 1e-10;

/// The twelve closed forms. `XY` stands for `⟨X_jψ|Y_kψ⟩`; a single letter
/// `Y` for `⟨ψ|Y_kψ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    A,
    AA,
    BA,
    CA,
    B,
    AB,
    BB,
    CB,
    C,
    AC,
    BC,
    CC,
}

impl Tag {
    pub const ALL: [Tag; 12] = [
        Tag::A,
        Tag::AA,
        Tag::BA,
        Tag::CA,
        Tag::B,
        Tag::AB,
        Tag::BB,
        Tag::CB,
        Tag::C,
        Tag::AC,
        Tag::BC,
        Tag::CC,
    ];

    pub fn is_pair(self) -> bool {
        !matches!(self, Tag::A | Tag::B | Tag::C)
    }

    fn form(self) -> Form {
        use Flip::{Keep, J, K};
        use Phase::{MinusI, One, I};
        let f = |left, right, phase, sign_j, sign_k| Form {
            left,
            right,
            phase,
            sign_j,
            sign_k,
        };
        match self {
            Tag::A => f(Keep, Keep, I, false, true),
            Tag::AA => f(Keep, Keep, One, true, true),
            Tag::BA => f(J, Keep, I, true, true),
            Tag::CA => f(J, Keep, One, false, true),
            Tag::B => f(Keep, K, One, false, true),
            Tag::AB => f(Keep, K, MinusI, true, true),
            Tag::BB => f(J, K, One, true, true),
            Tag::CB => f(J, K, MinusI, false, true),
            Tag::C => f(Keep, K, I, false, false),
            Tag::AC => f(Keep, K, One, true, false),
            Tag::BC => f(J, K, I, true, false),
            Tag::CC => f(J, K, One, false, false),
        }
    }
}

#[derive(Clone, Copy)]
enum Flip {
    Keep,
    J,
    K,
}

#[derive(Clone, Copy)]
enum Phase {
    One,
    I,
    MinusI,
}

/// `phase · Σ_I (−1)^{[sign_j] i_j + [sign_k] i_k} conj(c_left) c_right`.
#[derive(Clone, Copy)]
struct Form {
    left: Flip,
    right: Flip,
    phase: Phase,
    sign_j: bool,
    sign_k: bool,
}

/// A row of the table together with its slots (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InnerProductKind {
    pub tag: Tag,
    pub j: Option<usize>,
    pub k: usize,
}

impl InnerProductKind {
    pub fn single(tag: Tag, k: usize) -> Result<Self> {
        if tag.is_pair() {
            return Err(invalid(format!("{tag:?} needs two slots")));
        }
        Ok(Self { tag, j: None, k })
    }

    pub fn pair(tag: Tag, j: usize, k: usize) -> Result<Self> {
        if !tag.is_pair() {
            return Err(invalid(format!("{tag:?} takes a single slot")));
        }
        Ok(Self { tag, j: Some(j), k })
    }

    /// Operators on the left and right of the inner product.
    pub fn operands(&self) -> (OperatorLabel, OperatorLabel) {
        let j = self.j.unwrap_or(self.k);
        let op = |c: u8, slot| match c {
            b'A' => OperatorLabel::A(slot),
            b'B' => OperatorLabel::B(slot),
            _ => OperatorLabel::C(slot),
        };
        let name = format!("{:?}", self.tag);
        match name.as_bytes() {
            [r] => (OperatorLabel::Identity, op(*r, self.k)),
            [l, r] => (op(*l, j), op(*r, self.k)),
            _ => unreachable!("tags have one or two letters"),
        }
    }
}

impl fmt::Display for InnerProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.j {
            Some(j) => write!(f, "{:?}(j={},k={})", self.tag, j + 1, self.k + 1),
            None => write!(f, "{:?}(k={})", self.tag, self.k + 1),
        }
    }
}

/// Every valid kind for `n` qubits: single kinds for each `k`, pair kinds
/// for each `(j, k)` including `j = k`.
pub fn all_kinds(n: usize) -> Vec<InnerProductKind> {
    let mut out = Vec::with_capacity(3 * n + 9 * n * n);
    for tag in Tag::ALL {
        for k in 0..n {
            if tag.is_pair() {
                out.extend((0..n).map(|j| InnerProductKind { tag, j: Some(j), k }));
            } else {
                out.push(InnerProductKind { tag, j: None, k });
            }
        }
    }
    out
}

fn table_generic<T: Scalar>(n: usize, amps: &[Complex<T>], kind: &InnerProductKind) -> Complex<T> {
    let form = kind.tag.form();
    let mk = slot_mask(n, kind.k);
    let mj = kind.j.map_or(0, |j| slot_mask(n, j));
    let flip = |f: Flip, i: usize| match f {
        Flip::Keep => i,
        Flip::J => i ^ mj,
        Flip::K => i ^ mk,
    };
    let mut acc = Complex::<T>::zero();
    for i in 0..amps.len() {
        let term = amps[flip(form.left, i)].conj() * amps[flip(form.right, i)].clone();
        let negative = (form.sign_j && bit_set(i, mj)) ^ (form.sign_k && bit_set(i, mk));
        acc = if negative { acc - term } else { acc + term };
    }
    match form.phase {
        Phase::One => acc,
        Phase::I => times_i(&acc),
        Phase::MinusI => -times_i(&acc),
    }
}

fn check_kind(psi: &PureState, kind: &InnerProductKind) -> Result<()> {
    let n = psi.n();
    if kind.tag.is_pair() != kind.j.is_some() {
        return Err(invalid(format!("slot arity does not match {:?}", kind.tag)));
    }
    if let Some(bad) = [Some(kind.k), kind.j].into_iter().flatten().find(|&s| s >= n) {
        return Err(invalid(format!("slot {bad} out of range for {n} qubits")));
    }
    Ok(())
}

/// Evaluates a closed form directly from the amplitudes.
pub fn table_inner_product(psi: &PureState, kind: &InnerProductKind) -> Result<Complex64> {
    check_kind(psi, kind)?;
    Ok(table_generic(psi.n(), &psi.to_f64(), kind))
}

/// Exact variant of [`table_inner_product`].
pub fn table_inner_product_exact(
    psi: &PureState,
    kind: &InnerProductKind,
) -> Result<Complex<BigRational>> {
    check_kind(psi, kind)?;
    let amps = psi.exact_amplitudes().ok_or(Error::UnsupportedRepresentation)?;
    Ok(table_generic(psi.n(), amps, kind))
}

/// An operator whose action on `ψ` gives a column of `M` (up to the phase
/// column's factor `−i`). Slots are 0-based; display is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorLabel {
    Identity,
    A(usize),
    B(usize),
    C(usize),
}

impl OperatorLabel {
    fn slot(self) -> Option<usize> {
        match self {
            OperatorLabel::Identity => None,
            OperatorLabel::A(k) | OperatorLabel::B(k) | OperatorLabel::C(k) => Some(k),
        }
    }
}

impl fmt::Display for OperatorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorLabel::Identity => write!(f, "I"),
            OperatorLabel::A(k) => write!(f, "A{}", k + 1),
            OperatorLabel::B(k) => write!(f, "B{}", k + 1),
            OperatorLabel::C(k) => write!(f, "C{}", k + 1),
        }
    }
}

fn pick<T: Clone>(amps: &[Complex<T>], triple: Option<&Triple<T>>, label: OperatorLabel) -> Vec<Complex<T>> {
    match (label, triple) {
        (OperatorLabel::A(_), Some(t)) => t.a.clone(),
        (OperatorLabel::B(_), Some(t)) => t.b.clone(),
        (OperatorLabel::C(_), Some(t)) => t.c.clone(),
        _ => amps.to_vec(),
    }
}

/// `⟨u|v⟩`, conjugate-linear in `u`.
pub fn inner<T: Scalar>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    u.iter()
        .zip(v)
        .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b.clone())
}

fn check_label(psi: &PureState, label: OperatorLabel) -> Result<()> {
    match label.slot() {
        Some(k) if k >= psi.n() => Err(invalid(format!("slot {k} out of range for {} qubits", psi.n()))),
        _ => Ok(()),
    }
}

/// `⟨left·ψ | right·ψ⟩` from the actual column vectors.
pub fn direct_inner_product(
    psi: &PureState,
    left: OperatorLabel,
    right: OperatorLabel,
) -> Result<Complex64> {
    check_label(psi, left)?;
    check_label(psi, right)?;
    let amps = psi.to_f64();
    let column = |label: OperatorLabel| -> Result<Vec<Complex64>> {
        let t = label.slot().map(|k| triple_columns(psi, k)).transpose()?;
        Ok(pick(&amps, t.as_ref(), label))
    };
    Ok(inner(&column(left)?, &column(right)?))
}

/// Exact variant of [`direct_inner_product`].
pub fn direct_inner_product_exact(
    psi: &PureState,
    left: OperatorLabel,
    right: OperatorLabel,
) -> Result<Complex<BigRational>> {
    check_label(psi, left)?;
    check_label(psi, right)?;
    let amps = psi.exact_amplitudes().ok_or(Error::UnsupportedRepresentation)?;
    let column = |label: OperatorLabel| -> Result<Vec<Complex<BigRational>>> {
        let t = label.slot().map(|k| triple_columns_exact(psi, k)).transpose()?;
        Ok(pick(amps, t.as_ref(), label))
    };
    Ok(inner(&column(left)?, &column(right)?))
}

/// Dot product of the real identifications `(re_1, im_1, re_2, im_2, …)`.
pub fn real_dot(u: &[Complex64], v: &[Complex64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    Ok(u.iter().zip(v).map(|(a, b)| a.re * b.re + a.im * b.im).sum())
}

/// Hypothesis data for [`orthogonality_report`]. Slots are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    /// `A_kψ, B_kψ, C_kψ` are mutually orthogonal as real vectors.
    Triple { k: usize },
    /// `Σ_i ξ_i A_{j_i}ψ = 0` with `j_1 < … < j_m`.
    Main { xi: Vec<f64>, slots: Vec<usize> },
    /// `A_lψ = A_{l'}ψ` and `C_lψ = C_{l'}ψ` with `l < l'`.
    TwoCommon { l: usize, l2: usize },
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Triple { .. } => "triple",
            Scenario::Main { .. } => "main",
            Scenario::TwoCommon { .. } => "two-common",
        }
    }
}

/// One asserted orthogonality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub pair: String,
    /// The real dot product.
    pub value_re: f64,
    /// Imaginary part of the complex inner product, for reference.
    pub value_im: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    pub scenario: String,
    pub hypothesis_residual: f64,
    /// The slot set `K` of the main scenario, 1-based like the pair labels.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity_slots: Option<Vec<usize>>,
    pub checks: Vec<Check>,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// A column of `M` as a complex vector: `−iψ` or one of the triples.
#[derive(Clone, Copy)]
enum Column {
    Phase,
    Op(OperatorLabel),
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Column::Phase => write!(f, "-iψ"),
            Column::Op(l) => write!(f, "{l}"),
        }
    }
}

struct Columns {
    phase: Vec<Complex64>,
    triples: Vec<Triple<f64>>,
}

impl Columns {
    fn new(psi: &PureState) -> Result<Self> {
        let phase = psi.to_f64().iter().map(|z| Complex64::new(z.im, -z.re)).collect();
        let triples = (0..psi.n()).map(|k| triple_columns(psi, k)).collect::<Result<_>>()?;
        Ok(Self { phase, triples })
    }

    fn get(&self, c: Column) -> &[Complex64] {
        match c {
            Column::Phase | Column::Op(OperatorLabel::Identity) => &self.phase,
            Column::Op(OperatorLabel::A(k)) => &self.triples[k].a,
            Column::Op(OperatorLabel::B(k)) => &self.triples[k].b,
            Column::Op(OperatorLabel::C(k)) => &self.triples[k].c,
        }
    }

    fn check(&self, u: Column, v: Column, threshold: f64) -> Check {
        let z = inner(self.get(u), self.get(v));
        Check {
            pair: format!("{u}·{v}"),
            value_re: z.re,
            value_im: z.im,
            pass: z.re.abs() <= threshold,
        }
    }
}

fn ops(k: usize) -> [Column; 3] {
    [OperatorLabel::A(k), OperatorLabel::B(k), OperatorLabel::C(k)].map(Column::Op)
}

/// `{−iψ} ∪ T_j` for every `j` outside `inside`.
fn outside_columns(n: usize, inside: &[usize]) -> Vec<Column> {
    std::iter::once(Column::Phase)
        .chain((0..n).filter(|j| !inside.contains(j)).flat_map(ops))
        .collect()
}

fn check_slot(n: usize, k: usize) -> Result<()> {
    if k >= n {
        return Err(invalid(format!("slot {k} out of range for {n} qubits")));
    }
    Ok(())
}

/// Lists every real dot product the scenario's statement says vanishes,
/// after checking its hypothesis.
pub fn orthogonality_report(psi: &PureState, scenario: &Scenario) -> Result<OrthogonalityReport> {
    let n = psi.n();
    let norm = psi.norm();
    let threshold = CONCLUSION_TOLERANCE * norm * norm;
    let cols = Columns::new(psi)?;
    let (residual, parity_slots, pairs) = match scenario {
        Scenario::Triple { k } => {
            check_slot(n, *k)?;
            let [a, b, c] = ops(*k);
            (0.0, None, vec![(a, b), (a, c), (b, c)])
        }
        Scenario::Main { xi, slots } => {
            if xi.len() != slots.len() {
                return Err(Error::LengthMismatch {
                    expected: slots.len(),
                    found: xi.len(),
                });
            }
            if slots.is_empty() || slots.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid("slots must be nonempty and strictly increasing"));
            }
            for &k in slots {
                check_slot(n, k)?;
            }
            let l1: f64 = xi.iter().map(|x| x.abs()).sum();
            let mut sum = vec![Complex64::zero(); psi.dim()];
            for (&x, &k) in xi.iter().zip(slots) {
                for (s, a) in sum.iter_mut().zip(&cols.triples[k].a) {
                    *s += a * x;
                }
            }
            let residual = inner(&sum, &sum).re.sqrt() / (norm * l1);
            if !(residual <= HYPOTHESIS_TOLERANCE) {
                return Err(Error::HypothesisViolation { residual });
            }
            let witness = find_parity_set(xi, DEFAULT_ZERO_TOLERANCE)?;
            let set: Vec<usize> = witness.parity_set.iter().map(|&i| slots[i]).collect();
            let outside = outside_columns(n, &set);
            let pairs = set
                .iter()
                .flat_map(|&k| [Column::Op(OperatorLabel::B(k)), Column::Op(OperatorLabel::C(k))])
                .flat_map(|u| outside.iter().map(move |&v| (u, v)))
                .collect();
            (residual, Some(set.iter().map(|k| k + 1).collect()), pairs)
        }
        Scenario::TwoCommon { l, l2 } => {
            if l >= l2 {
                return Err(invalid("slots must satisfy l < l'"));
            }
            check_slot(n, *l2)?;
            let diff = |a: &[Complex64], b: &[Complex64]| -> f64 {
                a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
            };
            let (tl, tl2) = (&cols.triples[*l], &cols.triples[*l2]);
            let residual = diff(&tl.a, &tl2.a).max(diff(&tl.c, &tl2.c)) / norm;
            if !(residual <= HYPOTHESIS_TOLERANCE) {
                return Err(Error::HypothesisViolation { residual });
            }
            let outside = outside_columns(n, &[*l, *l2]);
            let pairs = [*l, *l2]
                .into_iter()
                .flat_map(ops)
                .flat_map(|u| outside.iter().map(move |&v| (u, v)))
                .collect();
            (residual, None, pairs)
        }
    };
    Ok(OrthogonalityReport {
        scenario: scenario.name().to_string(),
        hypothesis_residual: residual,
        parity_slots,
        checks: pairs.into_iter().map(|(u, v)| cols.check(u, v, threshold)).collect(),
    })
}
