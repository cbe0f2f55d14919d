//! The action of `su(2)^n` and `SU(2)^n` on the n-qubit Hilbert space.
//!
//! `su(2)` is spanned by
//!
//! ```text
//! A = [[i, 0], [0, -i]]   B = [[0, 1], [-1, 0]]   C = [[0, i], [i, 0]]
//! ```
//!
//! (`A = iσ_z`, `B = iσ_y`, `C = iσ_x`), and `X = tA + rB + sC` is the matrix
//! `[[it, u], [-ū, -it]]` with `u = r + is`. Everything here works termwise on
//! the `2^n` coefficient array; no `2^n × 2^n` operator is ever formed.

use std::ops::{Add, Mul};

use num_complex::{Complex, Complex64};
use num_rational::BigRational;

use crate::error::{invalid, Error, Result};
use crate::lu_adjust::Su2Element;
use crate::state::{bit_set, slot_mask, times_i, PureState, Scalar};

/// One of the three basis elements of `su(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    A,
    B,
    C,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::A, Generator::B, Generator::C];

    /// The 2×2 matrix of this generator.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        Su2Coordinates::from(self).to_matrix()
    }
}

/// Coordinates `(t, r, s)` of `X = tA + rB + sC`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Su2Coordinates {
    pub t: f64,
    pub r: f64,
    pub s: f64,
}

impl Su2Coordinates {
    pub fn new(t: f64, r: f64, s: f64) -> Self {
        Self { t, r, s }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.t, self.r, self.s]
    }

    pub fn from_array([t, r, s]: [f64; 3]) -> Self {
        Self { t, r, s }
    }

    pub fn norm(self) -> f64 {
        (self.t * self.t + self.r * self.r + self.s * self.s).sqrt()
    }

    /// `[[it, r + is], [-r + is, -it]]`.
    pub fn to_matrix(self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(0.0, self.t), Complex64::new(self.r, self.s)],
            [Complex64::new(-self.r, self.s), Complex64::new(0.0, -self.t)],
        ]
    }

    /// Reads coordinates off a traceless skew-Hermitian matrix.
    pub fn from_matrix(m: &[[Complex64; 2]; 2]) -> Self {
        Self {
            t: m[0][0].im,
            r: m[0][1].re,
            s: m[0][1].im,
        }
    }
}

impl From<Generator> for Su2Coordinates {
    fn from(g: Generator) -> Self {
        match g {
            Generator::A => Self::new(1.0, 0.0, 0.0),
            Generator::B => Self::new(0.0, 1.0, 0.0),
            Generator::C => Self::new(0.0, 0.0, 1.0),
        }
    }
}

/// An element `X = (X_1, …, X_n)` of `su(2)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalAlgebraElement {
    pub coords: Vec<Su2Coordinates>,
}

impl LocalAlgebraElement {
    pub fn new(coords: Vec<Su2Coordinates>) -> Self {
        Self { coords }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            coords: vec![Su2Coordinates::default(); n],
        }
    }

    /// `A_k`, `B_k` or `C_k`: the generator in slot `k`, zero elsewhere.
    pub fn unit(n: usize, k: usize, g: Generator) -> Result<Self> {
        if k >= n {
            return Err(invalid(format!("slot {k} out of range for {n} qubits")));
        }
        let mut x = Self::zero(n);
        x.coords[k] = g.into();
        Ok(x)
    }

    /// Unpacks a real vector `(t_1, r_1, s_1, …, t_n, r_n, s_n)`.
    pub fn from_flat(v: &[f64]) -> Result<Self> {
        if v.len() % 3 != 0 {
            return Err(invalid(format!("flat length {} is not a multiple of 3", v.len())));
        }
        Ok(Self {
            coords: v
                .chunks_exact(3)
                .map(|c| Su2Coordinates::new(c[0], c[1], c[2]))
                .collect(),
        })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.coords.iter().flat_map(|c| c.to_array()).collect()
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }
}

impl Add for &LocalAlgebraElement {
    type Output = LocalAlgebraElement;

    fn add(self, rhs: Self) -> LocalAlgebraElement {
        assert_eq!(self.n(), rhs.n(), "slot counts differ");
        LocalAlgebraElement {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| Su2Coordinates::new(a.t + b.t, a.r + b.r, a.s + b.s))
                .collect(),
        }
    }
}

impl Mul<&LocalAlgebraElement> for f64 {
    type Output = LocalAlgebraElement;

    fn mul(self, rhs: &LocalAlgebraElement) -> LocalAlgebraElement {
        LocalAlgebraElement {
            coords: rhs
                .coords
                .iter()
                .map(|c| Su2Coordinates::new(self * c.t, self * c.r, self * c.s))
                .collect(),
        }
    }
}

/// A local unitary `U = (U_1, …, U_n)` in `SU(2)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    pub factors: Vec<Su2Element>,
}

impl LocalUnitary {
    pub fn new(factors: Vec<Su2Element>) -> Self {
        Self { factors }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            factors: vec![Su2Element::identity(); n],
        }
    }

    /// Slotwise exponential `(exp X_1, …, exp X_n)`.
    pub fn exp(x: &LocalAlgebraElement) -> Self {
        Self {
            factors: x.coords.iter().map(|&c| su2_exp(c)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn dagger(&self) -> Self {
        Self {
            factors: self.factors.iter().map(Su2Element::dagger).collect(),
        }
    }

    /// Independent Haar-random factors.
    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self {
            factors: (0..n).map(|_| Su2Element::random(rng)).collect(),
        }
    }

    /// Every factor is special unitary to within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.factors.iter().all(|u| u.is_valid(tol))
    }
}

/// `exp(X)` for `X ∈ su(2)` in closed form: with `θ = |X|`,
/// `exp(X) = cos θ · I + sin θ · X/θ`.
pub fn su2_exp(x: Su2Coordinates) -> Su2Element {
    let theta = x.norm();
    if theta == 0.0 {
        return Su2Element::identity();
    }
    let (sin, cos) = theta.sin_cos();
    let m = x.to_matrix();
    let f = sin / theta;
    Su2Element::from_matrix_unchecked([
        [Complex64::new(cos, 0.0) + m[0][0] * f, m[0][1] * f],
        [m[1][0] * f, Complex64::new(cos, 0.0) + m[1][1] * f],
    ])
}

fn check_slots(n: usize, found: usize) -> Result<()> {
    if n != found {
        return Err(Error::LengthMismatch { expected: n, found });
    }
    Ok(())
}

/// `X·ψ = Σ_I (Σ_k (−1)^{i_k} [c_I·i t_k + c_{I_k}·conj^{i_k}(u_k)]) |I⟩`.
pub(crate) fn apply_algebra_generic<T: Scalar>(
    n: usize,
    amps: &[Complex<T>],
    coords: &[[T; 3]],
) -> Vec<Complex<T>> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); amps.len()];
    for (k, [t, r, s]) in coords.iter().enumerate() {
        let mask = slot_mask(n, k);
        let u = Complex::new(r.clone(), s.clone());
        let u_conj = u.conj();
        for (i, slot) in out.iter_mut().enumerate() {
            let flipped = &amps[i ^ mask];
            let set = bit_set(i, mask);
            let coupling = if set { &u_conj } else { &u };
            let term = times_i(&amps[i]).scale(t.clone()) + flipped.clone() * coupling.clone();
            if set {
                *slot = slot.clone() - term;
            } else {
                *slot = slot.clone() + term;
            }
        }
    }
    out
}

/// Applies `X ∈ su(2)^n` to `ψ` (float arithmetic).
pub fn apply_algebra(x: &LocalAlgebraElement, psi: &PureState) -> Result<Vec<Complex64>> {
    check_slots(psi.n(), x.n())?;
    let coords: Vec<[f64; 3]> = x.coords.iter().map(|c| c.to_array()).collect();
    Ok(apply_algebra_generic(psi.n(), &psi.to_f64(), &coords))
}

/// Exact variant of [`apply_algebra`] for rational coordinates on an exact state.
pub fn apply_algebra_exact(
    coords: &[[BigRational; 3]],
    psi: &PureState,
) -> Result<Vec<Complex<BigRational>>> {
    check_slots(psi.n(), coords.len())?;
    let amps = psi.exact_amplitudes().ok_or(Error::UnsupportedRepresentation)?;
    Ok(apply_algebra_generic(psi.n(), amps, coords))
}

/// The three columns `A_kψ`, `B_kψ`, `C_kψ` of the triple `T_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Triple<T: Clone> {
    pub a: Vec<Complex<T>>,
    pub b: Vec<Complex<T>>,
    pub c: Vec<Complex<T>>,
}

impl<T: Clone> Triple<T> {
    pub fn get(&self, g: Generator) -> &[Complex<T>] {
        match g {
            Generator::A => &self.a,
            Generator::B => &self.b,
            Generator::C => &self.c,
        }
    }
}

pub(crate) fn triple_generic<T: Scalar>(n: usize, amps: &[Complex<T>], k: usize) -> Triple<T> {
    let mask = slot_mask(n, k);
    let len = amps.len();
    let mut a = Vec::with_capacity(len);
    let mut b = Vec::with_capacity(len);
    let mut c = Vec::with_capacity(len);
    for i in 0..len {
        let flipped = &amps[i ^ mask];
        let ia = times_i(&amps[i]);
        if bit_set(i, mask) {
            a.push(-ia);
            b.push(-flipped.clone());
        } else {
            a.push(ia);
            b.push(flipped.clone());
        }
        c.push(times_i(flipped));
    }
    Triple { a, b, c }
}

fn check_slot(psi: &PureState, k: usize) -> Result<()> {
    if k >= psi.n() {
        return Err(invalid(format!(
            "slot {k} out of range for {} qubits",
            psi.n()
        )));
    }
    Ok(())
}

/// `A_kψ = Σ i(−1)^{i_k} c_I|I⟩`, `B_kψ = Σ (−1)^{i_k} c_{I_k}|I⟩`,
/// `C_kψ = Σ i c_{I_k}|I⟩`.
pub fn triple_columns(psi: &PureState, k: usize) -> Result<Triple<f64>> {
    check_slot(psi, k)?;
    Ok(triple_generic(psi.n(), &psi.to_f64(), k))
}

/// Exact variant of [`triple_columns`].
pub fn triple_columns_exact(psi: &PureState, k: usize) -> Result<Triple<BigRational>> {
    check_slot(psi, k)?;
    let amps = psi.exact_amplitudes().ok_or(Error::UnsupportedRepresentation)?;
    Ok(triple_generic(psi.n(), amps, k))
}

/// `(U_1 ⊗ … ⊗ U_n)ψ`, one slot at a time.
pub fn apply_group(u: &LocalUnitary, psi: &PureState) -> Result<PureState> {
    check_slots(psi.n(), u.n())?;
    let n = psi.n();
    let mut amps = psi.to_f64();
    for (k, factor) in u.factors.iter().enumerate() {
        let m = factor.matrix();
        let mask = slot_mask(n, k);
        for i in (0..amps.len()).filter(|i| i & mask == 0) {
            let (x0, x1) = (amps[i], amps[i | mask]);
            amps[i] = m[0][0] * x0 + m[0][1] * x1;
            amps[i | mask] = m[1][0] * x0 + m[1][1] * x1;
        }
    }
    PureState::from_float(n, amps)
}

#[cfg(test)]
pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{make_basis, make_singlet_product, sample_haar_state, singlet, tensor};
    use num_bigint::BigInt;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const I: Complex64 = Complex64::new(0.0, 1.0);

    fn ratio(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn random_element(n: usize, rng: &mut impl Rng) -> LocalAlgebraElement {
        LocalAlgebraElement::new(
            (0..n)
                .map(|_| {
                    Su2Coordinates::new(
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                    )
                })
                .collect(),
        )
    }

    fn mat_vec(m: &[[Complex64; 2]; 2], v: [Complex64; 2]) -> [Complex64; 2] {
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    fn kron_all(vs: &[[Complex64; 2]]) -> Vec<Complex64> {
        vs.iter().fold(vec![Complex64::new(1.0, 0.0)], |acc, v| {
            acc.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()
        })
    }

    #[test]
    fn generator_matrices() {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(Generator::A.matrix(), [[I, z], [z, -I]]);
        assert_eq!(Generator::B.matrix(), [[z, one], [-one, z]]);
        assert_eq!(Generator::C.matrix(), [[z, I], [I, z]]);
        let x = Su2Coordinates::new(0.3, -1.2, 0.7);
        let m = x.to_matrix();
        // traceless, skew-Hermitian
        assert_eq!(m[0][0] + m[1][1], z);
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(m[r][c], -m[c][r].conj());
            }
        }
        assert_eq!(Su2Coordinates::from_matrix(&m), x);
    }

    #[test]
    fn diagonal_pair_kills_singlet() {
        let s = singlet();
        for g in Generator::ALL {
            let x = LocalAlgebraElement::new(vec![g.into(), g.into()]);
            assert!(apply_algebra(&x, &s).unwrap().iter().all(|z| *z == Complex64::new(0.0, 0.0)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let one = random_element(1, &mut rng).coords[0];
            let x = LocalAlgebraElement::new(vec![one, one]);
            assert!(norm_sqr(&apply_algebra(&x, &s).unwrap()) < 1e-28);
        }
    }

    #[test]
    fn hand_evaluated_actions() {
        let ket00 = make_basis("00".parse().unwrap());
        let x = LocalAlgebraElement::unit(2, 0, Generator::A).unwrap();
        let out = apply_algebra(&x, &ket00).unwrap();
        assert_eq!(out[0], I);
        assert!(out[1..].iter().all(|z| z.norm() == 0.0));

        let ket0 = make_basis("0".parse().unwrap());
        let x = LocalAlgebraElement::unit(1, 0, Generator::B).unwrap();
        assert_eq!(
            apply_algebra(&x, &ket0).unwrap(),
            vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)]
        );
        assert!(LocalAlgebraElement::unit(1, 1, Generator::B).is_err());
        assert!(apply_algebra(&LocalAlgebraElement::zero(2), &ket0).is_err());
    }

    #[test]
    fn singlet_triples() {
        let s = singlet();
        let t1 = triple_columns_exact(&s, 0).unwrap();
        let t2 = triple_columns_exact(&s, 1).unwrap();
        let zero = ratio(0);
        let one = ratio(1);
        let expect_a1 = vec![
            Complex::new(zero.clone(), zero.clone()),
            Complex::new(zero.clone(), one.clone()),
            Complex::new(zero.clone(), one.clone()),
            Complex::new(zero.clone(), zero.clone()),
        ];
        assert_eq!(t1.a, expect_a1);
        for g in Generator::ALL {
            let neg: Vec<_> = t1.get(g).iter().map(|z| -z.clone()).collect();
            assert_eq!(t2.get(g), neg.as_slice());
        }
        assert!(triple_columns(&s, 2).is_err());
        assert_eq!(
            triple_columns_exact(&s.to_float_state(), 0),
            Err(Error::UnsupportedRepresentation)
        );
    }

    #[test]
    fn unit_actions_match_triples_exactly() {
        let s = make_singlet_product(2).unwrap();
        let psi = tensor(&s, &make_basis("1".parse().unwrap())).unwrap();
        for k in 0..psi.n() {
            let triple = triple_columns_exact(&psi, k).unwrap();
            for (slot, g) in Generator::ALL.into_iter().enumerate() {
                let mut coords = vec![[ratio(0), ratio(0), ratio(0)]; psi.n()];
                coords[k][slot] = ratio(1);
                assert_eq!(apply_algebra_exact(&coords, &psi).unwrap(), triple.get(g));
            }
        }
    }

    #[test]
    fn group_identity_and_phase() {
        let psi = sample_haar_state(3, 11).unwrap();
        let same = apply_group(&LocalUnitary::identity(3), &psi).unwrap();
        assert_eq!(same.to_f64(), psi.to_f64());

        let t = 0.37;
        let mut x = LocalAlgebraElement::zero(2);
        x.coords[0] = Su2Coordinates::new(t, 0.0, 0.0);
        let ket00 = make_basis("00".parse().unwrap());
        let out = apply_group(&LocalUnitary::exp(&x), &ket00).unwrap().to_f64();
        assert!((out[0] - Complex64::from_polar(1.0, t)).norm() < 1e-15);
        assert!(out[1..].iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn product_state_leibniz_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            for _ in 0..10 {
                let vs: Vec<[Complex64; 2]> = (0..n)
                    .map(|_| {
                        [
                            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                        ]
                    })
                    .collect();
                let x = random_element(n, &mut rng);
                let psi = PureState::from_float(n, kron_all(&vs)).unwrap();
                let mut expected = vec![Complex64::new(0.0, 0.0); 1 << n];
                for i in 0..n {
                    let mut factors = vs.clone();
                    factors[i] = mat_vec(&x.coords[i].to_matrix(), vs[i]);
                    for (e, v) in expected.iter_mut().zip(kron_all(&factors)) {
                        *e += v;
                    }
                }
                let got = apply_algebra(&x, &psi).unwrap();
                for (g, e) in got.iter().zip(&expected) {
                    assert!((g - e).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn infinitesimal_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=4 {
            let psi = sample_haar_state(n, 100 + n as u64).unwrap();
            let x = random_element(n, &mut rng);
            let xpsi = apply_algebra(&x, &psi).unwrap();
            let base = psi.to_f64();
            let remainder = |eps: f64| {
                let moved = apply_group(&LocalUnitary::exp(&(eps * &x)), &psi).unwrap().to_f64();
                let r: Vec<Complex64> = moved
                    .iter()
                    .zip(&base)
                    .zip(&xpsi)
                    .map(|((m, b), d)| m - b - d * eps)
                    .collect();
                norm_sqr(&r).sqrt()
            };
            let (e4, e5) = (remainder(1e-4), remainder(1e-5));
            let ratio = e4 / e5;
            assert!((50.0..200.0).contains(&ratio), "n={n} ratio={ratio}");
        }
    }

    proptest! {
        #[test]
        fn triple_columns_preserve_norm(n in 1usize..6, seed in any::<u64>(), k in 0usize..6) {
            let k = k % n;
            let psi = sample_haar_state(n, seed).unwrap();
            let t = triple_columns(&psi, k).unwrap();
            let norm = psi.norm_sqr();
            for g in Generator::ALL {
                prop_assert!((norm_sqr(t.get(g)) - norm).abs() <= 1e-12 * norm);
            }
        }

        #[test]
        fn float_unit_action_matches_triple(n in 1usize..6, seed in any::<u64>(), k in 0usize..6) {
            let k = k % n;
            let psi = sample_haar_state(n, seed).unwrap();
            let t = triple_columns(&psi, k).unwrap();
            for g in Generator::ALL {
                let x = LocalAlgebraElement::unit(n, k, g).unwrap();
                let out = apply_algebra(&x, &psi).unwrap();
                for (a, b) in out.iter().zip(t.get(g)) {
                    prop_assert!((a - b).norm() <= 1e-14);
                }
            }
        }

        #[test]
        fn action_is_linear(n in 1usize..5, seed in any::<u64>(), alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let psi = sample_haar_state(n, seed ^ 0xabc).unwrap();
            let x = random_element(n, &mut rng);
            let y = random_element(n, &mut rng);
            let lhs = apply_algebra(&(&(alpha * &x) + &(beta * &y)), &psi).unwrap();
            let ax = apply_algebra(&x, &psi).unwrap();
            let ay = apply_algebra(&y, &psi).unwrap();
            for ((l, a), b) in lhs.iter().zip(&ax).zip(&ay) {
                prop_assert!((l - (a * alpha + b * beta)).norm() <= 1e-12);
            }
        }

        #[test]
        fn group_action_preserves_norm(n in 1usize..6, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let psi = sample_haar_state(n, seed).unwrap();
            let u = LocalUnitary::exp(&(3.0 * &random_element(n, &mut rng)));
            prop_assert!(u.is_valid(1e-12));
            let moved = apply_group(&u, &psi).unwrap();
            prop_assert!((moved.norm() - psi.norm()).abs() <= 1e-12 * psi.norm());
        }
    }
}
