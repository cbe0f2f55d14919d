//! Multi-indices, pure-state vectors and generators for the standard state
//! families.
//!
//! Amplitudes are stored in multi-index order: the multi-index
//! `I = (i_1 i_2 … i_n)` lives at storage position `Σ_k i_k 2^{n-k}`, so qubit
//! 1 is the most significant bit. Qubit positions in this API are 0-based:
//! position `k` addresses `i_{k+1}`.

use std::fmt;
use std::fs;
use std::ops::Neg;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest qubit count a [`PureState`] may carry.
pub const MAX_QUBITS: usize = 30;

/// Real scalar fields the generic kernels run over: `f64` and `BigRational`.
pub trait Scalar: Clone + Num + Neg<Output = Self> + fmt::Debug + Send + Sync + 'static {}

impl Scalar for f64 {}
impl Scalar for BigRational {}

/// Bit mask of qubit position `k` inside an `n`-bit storage index.
#[inline]
pub(crate) fn slot_mask(n: usize, k: usize) -> usize {
    1 << (n - 1 - k)
}

/// `(-1)^{i_k}` as a boolean: true when the bit is set (sign is negative).
#[inline]
pub(crate) fn bit_set(index: usize, mask: usize) -> bool {
    index & mask != 0
}

/// `i · z`.
#[inline]
pub(crate) fn times_i<T: Scalar>(z: &Complex<T>) -> Complex<T> {
    Complex::new(-z.im.clone(), z.re.clone())
}

/// An n-bit multi-index `(i_1 … i_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    index: usize,
    n: usize,
}

impl MultiIndex {
    /// Builds a multi-index from its storage position.
    pub fn from_index(n: usize, index: usize) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(invalid(format!("multi-index length {n} outside 1..=63")));
        }
        if index >> n != 0 {
            return Err(invalid(format!("index {index} does not fit in {n} bits")));
        }
        Ok(Self { index, n })
    }

    /// Builds a multi-index from bits listed left to right.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let n = bits.len();
        let mut index = 0usize;
        for &b in bits {
            if b > 1 {
                return Err(invalid(format!("bit value {b} is not 0 or 1")));
            }
            index = (index << 1) | b as usize;
        }
        Self::from_index(n, index)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Storage position `Σ_k i_k 2^{n-k}`.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Bit at 0-based position `k`.
    pub fn bit(&self, k: usize) -> u8 {
        ((self.index >> (self.n - 1 - k)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.n).map(|k| self.bit(k)).collect()
    }

    fn check_slot(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(invalid(format!(
                "qubit position {k} out of range for {} qubits",
                self.n
            )));
        }
        Ok(())
    }

    /// `I_k`: complements the bit at position `k`.
    pub fn complement(&self, k: usize) -> Result<Self> {
        self.check_slot(k)?;
        Ok(Self {
            index: self.index ^ slot_mask(self.n, k),
            n: self.n,
        })
    }

    /// `I_{kl}` for `k < l`.
    pub fn double_complement(&self, k: usize, l: usize) -> Result<Self> {
        self.check_slot(k)?;
        self.check_slot(l)?;
        if k >= l {
            return Err(invalid(format!("need k < l, got k={k}, l={l}")));
        }
        Ok(Self {
            index: self.index ^ slot_mask(self.n, k) ^ slot_mask(self.n, l),
            n: self.n,
        })
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n {
            write!(f, "{}", self.bit(k))?;
        }
        Ok(())
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(pos, c)| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!(
                    "bitstring {s:?}: unexpected {other:?} at position {pos}"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        if bits.is_empty() {
            return Err(Error::Parse("empty bitstring".into()));
        }
        Self::from_bits(&bits)
    }
}

/// Amplitude storage; exactness is a property of the whole state.
#[derive(Debug, Clone, PartialEq)]
pub enum Amplitudes {
    Float(Vec<Complex64>),
    Exact(Vec<Complex<BigRational>>),
}

/// A nonzero, not necessarily normalized vector `Σ_I c_I |I⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Amplitudes,
}

fn check_len(n: usize, len: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(invalid(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
    }
    let expected = 1usize << n;
    if len != expected {
        return Err(Error::LengthMismatch {
            expected,
            found: len,
        });
    }
    Ok(())
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn complex_to_f64(z: &Complex<BigRational>) -> Complex64 {
    Complex64::new(rational_to_f64(&z.re), rational_to_f64(&z.im))
}

fn int_ratio(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl PureState {
    pub fn from_float(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_len(n, amps.len())?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("amplitudes must be finite"));
        }
        if amps.iter().all(|z| z.is_zero()) {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            n,
            amps: Amplitudes::Float(amps),
        })
    }

    pub fn from_exact(n: usize, amps: Vec<Complex<BigRational>>) -> Result<Self> {
        check_len(n, amps.len())?;
        if amps.iter().all(|z| z.is_zero()) {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            n,
            amps: Amplitudes::Exact(amps),
        })
    }

    /// Exact state from Gaussian-integer amplitudes `(re, im)`.
    pub fn from_integers(n: usize, amps: &[(i64, i64)]) -> Result<Self> {
        Self::from_exact(
            n,
            amps.iter()
                .map(|&(re, im)| Complex::new(int_ratio(re), int_ratio(im)))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of amplitudes, `2^n`.
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.amps, Amplitudes::Exact(_))
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.amps
    }

    pub fn exact_amplitudes(&self) -> Option<&[Complex<BigRational>]> {
        match &self.amps {
            Amplitudes::Exact(a) => Some(a),
            Amplitudes::Float(_) => None,
        }
    }

    /// Amplitudes as floats (converted if exact).
    pub fn to_f64(&self) -> Vec<Complex64> {
        match &self.amps {
            Amplitudes::Float(a) => a.clone(),
            Amplitudes::Exact(a) => a.iter().map(complex_to_f64).collect(),
        }
    }

    /// Float copy of this state.
    pub fn to_float_state(&self) -> PureState {
        PureState {
            n: self.n,
            amps: Amplitudes::Float(self.to_f64()),
        }
    }

    pub fn amplitude(&self, index: MultiIndex) -> Result<Complex64> {
        if index.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: index.n(),
            });
        }
        Ok(match &self.amps {
            Amplitudes::Float(a) => a[index.index()],
            Amplitudes::Exact(a) => complex_to_f64(&a[index.index()]),
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        match &self.amps {
            Amplitudes::Float(a) => a.iter().map(|z| z.norm_sqr()).sum(),
            Amplitudes::Exact(a) => rational_to_f64(&exact_norm_sqr(a)),
        }
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Number of nonzero amplitudes.
    pub fn support_size(&self) -> usize {
        match &self.amps {
            Amplitudes::Float(a) => a.iter().filter(|z| !z.is_zero()).count(),
            Amplitudes::Exact(a) => a.iter().filter(|z| !z.is_zero()).count(),
        }
    }

    /// `λ ψ` as a float state.
    pub fn scaled(&self, lambda: Complex64) -> Result<PureState> {
        PureState::from_float(self.n, self.to_f64().into_iter().map(|z| z * lambda).collect())
    }
}

pub(crate) fn exact_norm_sqr(a: &[Complex<BigRational>]) -> BigRational {
    a.iter().fold(BigRational::zero(), |acc, z| {
        acc + z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()
    })
}

fn require_copies(k: usize) -> Result<()> {
    if k == 0 {
        return Err(invalid("copy count must be at least 1"));
    }
    if 2 * k > MAX_QUBITS {
        return Err(invalid(format!("{k} singlet copies exceed {MAX_QUBITS} qubits")));
    }
    Ok(())
}

/// The singlet `|01⟩ − |10⟩`.
pub fn singlet() -> PureState {
    PureState::from_integers(2, &[(0, 0), (1, 0), (-1, 0), (0, 0)]).expect("singlet is valid")
}

/// `k` copies of the singlet on `2k` qubits, with amplitudes in `{0, ±1}`.
pub fn make_singlet_product(k: usize) -> Result<PureState> {
    require_copies(k)?;
    let s = singlet();
    (1..k).try_fold(s.clone(), |acc, _| tensor(&acc, &s))
}

/// `k` singlets followed by one qubit in `|0⟩`, on `2k + 1` qubits.
pub fn make_singlet_product_plus_zero(k: usize) -> Result<PureState> {
    require_copies(k)?;
    let zero = make_basis(MultiIndex::from_bits(&[0])?);
    tensor(&make_singlet_product(k)?, &zero)
}

/// The unnormalized cat state `|0…0⟩ + |1…1⟩`.
///
/// The `1/√2` normalization is dropped; ranks are insensitive to scale.
pub fn make_cat(n: usize) -> Result<PureState> {
    if n == 0 {
        return Err(invalid("cat state needs at least one qubit"));
    }
    check_len(n, 1 << n.min(MAX_QUBITS))?;
    let dim = 1usize << n;
    let mut amps = vec![Complex::new(BigRational::zero(), BigRational::zero()); dim];
    amps[0].re = int_ratio(1);
    amps[dim - 1].re = int_ratio(1);
    PureState::from_exact(n, amps)
}

/// Computational basis state `|I⟩`.
pub fn make_basis(index: MultiIndex) -> PureState {
    let dim = 1usize << index.n();
    let mut amps = vec![Complex::new(BigRational::zero(), BigRational::zero()); dim];
    amps[index.index()].re = int_ratio(1);
    PureState::from_exact(index.n(), amps).expect("basis state is valid")
}

/// Draws a state with i.i.d. standard normal real and imaginary parts.
///
/// The induced distribution on rays is unitarily invariant.
pub fn sample_haar_state_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PureState> {
    check_len(n, 1 << n.min(MAX_QUBITS))?;
    let amps = (0..1usize << n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    PureState::from_float(n, amps)
}

/// Seeded variant of [`sample_haar_state_with`] using ChaCha20.
pub fn sample_haar_state(n: usize, seed: u64) -> Result<PureState> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    sample_haar_state_with(n, &mut rng)
}

fn kron<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.clone() * y.clone()))
        .collect()
}

/// `ψ1 ⊗ ψ2`; exact iff both inputs are exact.
pub fn tensor(a: &PureState, b: &PureState) -> Result<PureState> {
    let n = a.n + b.n;
    match (&a.amps, &b.amps) {
        (Amplitudes::Exact(x), Amplitudes::Exact(y)) => PureState::from_exact(n, kron(x, y)),
        _ => PureState::from_float(n, kron(&a.to_f64(), &b.to_f64())),
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct StateFile {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitudes_exact: Option<Vec<[String; 2]>>,
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.contains(['.', 'e', 'E']) {
        return Err(Error::Parse(format!("{s:?} is not a decimal-free rational")));
    }
    BigRational::from_str(t).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

impl PureState {
    /// Parses the JSON state format.
    ///
    /// `{"n": 2, "amplitudes": [[re, im], …]}` for float states, or
    /// `{"n": 2, "amplitudes_exact": [["p/q", "r/s"], …]}` for exact ones.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        match (file.amplitudes, file.amplitudes_exact) {
            (Some(_), Some(_)) => Err(Error::Parse(
                "give either \"amplitudes\" or \"amplitudes_exact\", not both".into(),
            )),
            (None, None) => Err(Error::Parse(
                "missing \"amplitudes\" or \"amplitudes_exact\"".into(),
            )),
            (Some(a), None) => PureState::from_float(
                file.n,
                a.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
            ),
            (None, Some(a)) => {
                let amps = a
                    .iter()
                    .map(|[re, im]| Ok(Complex::new(parse_rational(re)?, parse_rational(im)?)))
                    .collect::<Result<Vec<_>>>()?;
                PureState::from_exact(file.n, amps)
            }
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let file = match &self.amps {
            Amplitudes::Float(a) => StateFile {
                n: self.n,
                amplitudes: Some(a.iter().map(|z| [z.re, z.im]).collect()),
                amplitudes_exact: None,
            },
            Amplitudes::Exact(a) => StateFile {
                n: self.n,
                amplitudes: None,
                amplitudes_exact: Some(
                    a.iter().map(|z| [z.re.to_string(), z.im.to_string()]).collect(),
                ),
            },
        };
        serde_json::to_string(&file).expect("state serializes")
    }
}
