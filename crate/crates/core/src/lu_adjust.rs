//! Frame rotations of `su(2)`, their lifts to `SU(2)`, and local-unitary
//! adjustments of a state.
//!
//! Under the identification `A ↔ i`, `B ↔ j`, `C ↔ k` the matrix
//! `U = [[w + ix, y + iz], [−y + iz, w − ix]]` is the unit quaternion
//! `q = w + xi + yj + zk`, and `X ↦ U†XU` is `v ↦ q̄ v q`.
//!
//! Replacing `ψ` by `Uψ` turns `A_k(Uψ)` into `U (U_k† A U_k)_k ψ`, so a
//! rotation `R_k` with `R_k(A)` pointing along a chosen combination of
//! `A_kψ, B_kψ, C_kψ` moves that combination into the `A` column.

use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::lie_action::{apply_group, triple_columns, Generator, LocalUnitary, Su2Coordinates};
use crate::rank::PivotedQr;
use crate::state::PureState;

/// Tolerance for unit length and orthogonality of frame vectors.
pub const FRAME_TOLERANCE: f64 = 1e-10;

/// Entrywise tolerance for `U†XU = R(X)` after lifting.
pub const LIFT_TOLERANCE: f64 = 1e-10;

/// Relative tolerance for triple-span ranks and principal angles.
pub const SPAN_TOLERANCE: f64 = 1e-8;

/// Relative residual allowed in the hypotheses of the adjustments.
pub const HYPOTHESIS_TOLERANCE: f64 = 1e-10;

const VALIDITY_TOLERANCE: f64 = 1e-12;

type Mat2 = [[Complex64; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn mat_dagger(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// An element of `SU(2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Element {
    m: Mat2,
}

impl Su2Element {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            m: [[one, zero], [zero, one]],
        }
    }

    /// Wraps a matrix without checking that it is special unitary.
    pub fn from_matrix_unchecked(m: Mat2) -> Self {
        Self { m }
    }

    pub fn new(m: Mat2) -> Result<Self> {
        let u = Self { m };
        if !u.is_valid(VALIDITY_TOLERANCE) {
            return Err(invalid("matrix is not in SU(2)"));
        }
        Ok(u)
    }

    /// `w + xi + yj + zk`, normalized.
    pub fn from_quaternion([w, x, y, z]: [f64; 4]) -> Result<Self> {
        let norm = (w * w + x * x + y * y + z * z).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(invalid("quaternion must be finite and nonzero"));
        }
        let (w, x, y, z) = (w / norm, x / norm, y / norm, z / norm);
        Ok(Self {
            m: [
                [Complex64::new(w, x), Complex64::new(y, z)],
                [Complex64::new(-y, z), Complex64::new(w, -x)],
            ],
        })
    }

    /// `(w, x, y, z)` read from the first row.
    pub fn quaternion(&self) -> [f64; 4] {
        [self.m[0][0].re, self.m[0][0].im, self.m[0][1].re, self.m[0][1].im]
    }

    /// Haar-distributed element: a normalized Gaussian quaternion.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            if let Ok(u) = Self::from_quaternion(q) {
                return u;
            }
        }
    }

    pub fn matrix(&self) -> Mat2 {
        self.m
    }

    pub fn dagger(&self) -> Self {
        Self {
            m: mat_dagger(&self.m),
        }
    }

    /// `U†U = I` and `det U = 1`, entrywise to `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        let p = mat_mul(&mat_dagger(&self.m), &self.m);
        let unitary = (0..2).all(|i| {
            (0..2).all(|j| {
                let target = if i == j { 1.0 } else { 0.0 };
                (p[i][j] - target).norm() <= tol
            })
        });
        let det = self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0];
        unitary && (det - 1.0).norm() <= tol
    }

    /// `U†XU`.
    pub fn conjugate(&self, x: Su2Coordinates) -> Su2Coordinates {
        let y = mat_mul(&mat_mul(&mat_dagger(&self.m), &x.to_matrix()), &self.m);
        Su2Coordinates::from_matrix(&y)
    }

    /// The rotation `X ↦ U†XU` in the basis `(A, B, C)`.
    pub fn adjoint(&self) -> So3Rotation {
        let cols = Generator::ALL.map(|g| Vector3::from(self.conjugate(g.into()).to_array()));
        So3Rotation {
            m: Matrix3::from_columns(&cols),
        }
    }
}

impl std::ops::Mul for &Su2Element {
    type Output = Su2Element;

    fn mul(self, rhs: &Su2Element) -> Su2Element {
        Su2Element {
            m: mat_mul(&self.m, &rhs.m),
        }
    }
}

/// A rotation of `su(2)`: column `g` holds the coordinates of `R(g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So3Rotation {
    m: Matrix3<f64>,
}

impl So3Rotation {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let orth = (m.transpose() * m - Matrix3::identity()).amax();
        let det = m.determinant();
        if !(orth <= VALIDITY_TOLERANCE && (det - 1.0).abs() <= VALIDITY_TOLERANCE) {
            return Err(invalid(format!(
                "not a rotation: |RᵀR − I| = {orth:e}, det = {det}"
            )));
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self {
            m: Matrix3::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn image(&self, g: Generator) -> Su2Coordinates {
        let c = self.m.column(g as usize);
        Su2Coordinates::new(c[0], c[1], c[2])
    }

    pub fn apply(&self, x: Su2Coordinates) -> Su2Coordinates {
        let v = self.m * Vector3::from(x.to_array());
        Su2Coordinates::new(v[0], v[1], v[2])
    }
}

fn check_unit(v: &Vector3<f64>, what: &str) -> Result<()> {
    if !v.iter().all(|x| x.is_finite()) || (v.norm() - 1.0).abs() > FRAME_TOLERANCE {
        return Err(invalid(format!("{what} must be a unit vector")));
    }
    Ok(())
}

/// Rotation with `R(A) = first` and, if given, `R(C) = second`.
///
/// Without `second`, `R(B)` is the basis axis least aligned with `first`
/// (ties resolved in the order A, B, C) made orthogonal to it, and
/// `R(C) = R(A) × R(B)`. With `second`, `R(B) = R(C) × R(A)`.
pub fn so3_from_frame(first: [f64; 3], second: Option<[f64; 3]>) -> Result<So3Rotation> {
    let a = Vector3::from(first);
    check_unit(&a, "first frame vector")?;
    let (b, c) = match second {
        Some(second) => {
            let c = Vector3::from(second);
            check_unit(&c, "second frame vector")?;
            if a.dot(&c).abs() > FRAME_TOLERANCE {
                return Err(invalid("frame vectors must be orthogonal"));
            }
            (c.cross(&a), c)
        }
        None => {
            let axis = (0..3)
                .min_by(|&i, &j| a[i].abs().total_cmp(&a[j].abs()))
                .expect("three axes");
            let e = Vector3::ith(axis, 1.0);
            let b = (e - a * a.dot(&e)).normalize();
            (b, a.cross(&b))
        }
    };
    So3Rotation::new(Matrix3::from_columns(&[a, b, c]))
}

/// The unit quaternion `p` with `p v p̄ = R v` (Shepperd's method).
fn rotation_quaternion(r: &Matrix3<f64>) -> [f64; 4] {
    let tr = r.trace();
    let diag = [r[(0, 0)], r[(1, 1)], r[(2, 2)]];
    let largest = (0..3).max_by(|&i, &j| diag[i].total_cmp(&diag[j])).expect("three entries");
    if tr >= diag[largest] {
        let w = 0.5 * (1.0 + tr).sqrt();
        let f = 0.25 / w;
        [w, (r[(2, 1)] - r[(1, 2)]) * f, (r[(0, 2)] - r[(2, 0)]) * f, (r[(1, 0)] - r[(0, 1)]) * f]
    } else {
        match largest {
            0 => {
                let x = 0.5 * (1.0 + diag[0] - diag[1] - diag[2]).sqrt();
                let f = 0.25 / x;
                [(r[(2, 1)] - r[(1, 2)]) * f, x, (r[(0, 1)] + r[(1, 0)]) * f, (r[(0, 2)] + r[(2, 0)]) * f]
            }
            1 => {
                let y = 0.5 * (1.0 - diag[0] + diag[1] - diag[2]).sqrt();
                let f = 0.25 / y;
                [(r[(0, 2)] - r[(2, 0)]) * f, (r[(0, 1)] + r[(1, 0)]) * f, y, (r[(1, 2)] + r[(2, 1)]) * f]
            }
            _ => {
                let z = 0.5 * (1.0 - diag[0] - diag[1] + diag[2]).sqrt();
                let f = 0.25 / z;
                [(r[(1, 0)] - r[(0, 1)]) * f, (r[(0, 2)] + r[(2, 0)]) * f, (r[(1, 2)] + r[(2, 1)]) * f, z]
            }
        }
    }
}

/// `U ∈ SU(2)` with `U†XU = R(X)` for every `X ∈ su(2)`.
///
/// `±U` both work; the sign makes the first non-negligible entry of
/// `(Re U₁₁, Im U₁₁, Re U₁₂, Im U₁₂)` positive.
pub fn su2_lift(r: &So3Rotation) -> Result<Su2Element> {
    let [w, x, y, z] = rotation_quaternion(&r.m);
    let mut q = [w, -x, -y, -z];
    if q.iter().find(|c| c.abs() > 1e-12).is_some_and(|&c| c < 0.0) {
        q = q.map(|c| -c);
    }
    let u = Su2Element::from_quaternion(q)?;
    for g in Generator::ALL {
        let got = u.conjugate(g.into()).to_array();
        let want = r.image(g).to_array();
        if got.iter().zip(&want).any(|(a, b)| (a - b).abs() > LIFT_TOLERANCE) {
            return Err(Error::Internal(format!("lift of {g:?} missed: {got:?} vs {want:?}")));
        }
    }
    Ok(u)
}

fn check_slot(psi: &PureState, k: usize) -> Result<()> {
    if k >= psi.n() {
        return Err(invalid(format!("slot {k} out of range for {} qubits", psi.n())));
    }
    Ok(())
}

/// The `2^{n+1} × 3` real matrix `(A_kψ, B_kψ, C_kψ)`.
pub fn triple_matrix(psi: &PureState, k: usize) -> Result<DMatrix<f64>> {
    let t = triple_columns(psi, k)?;
    let rows = 2 * psi.dim();
    Ok(DMatrix::from_fn(rows, 3, |i, j| {
        let z = t.get(Generator::ALL[j])[i / 2];
        if i % 2 == 0 {
            z.re
        } else {
            z.im
        }
    }))
}

fn stacked_triples(psi: &PureState, slots: &[usize]) -> Result<DMatrix<f64>> {
    if slots.is_empty() {
        return Err(invalid("slot set must be nonempty"));
    }
    let blocks = slots
        .iter()
        .map(|&k| triple_matrix(psi, k))
        .collect::<Result<Vec<_>>>()?;
    let rows = 2 * psi.dim();
    let mut m = DMatrix::zeros(rows, 3 * slots.len());
    for (i, b) in blocks.iter().enumerate() {
        m.view_mut((0, 3 * i), (rows, 3)).copy_from(b);
    }
    Ok(m)
}

/// Dimension of the real span `⟨T_{k_1}, …, T_{k_r}⟩` at relative tolerance `tol`.
pub fn triple_span_dim(psi: &PureState, slots: &[usize], tol: f64) -> Result<usize> {
    Ok(PivotedQr::new(&stacked_triples(psi, slots)?).rank(tol))
}

/// A local unitary and the state it produces.
#[derive(Debug, Clone)]
pub struct Adjustment {
    pub unitary: LocalUnitary,
    pub state: PureState,
    /// Relative residual of the target identity on the new state.
    pub residual: f64,
}

fn lift_slots(n: usize, frames: &[(usize, So3Rotation)]) -> Result<LocalUnitary> {
    let mut u = LocalUnitary::identity(n);
    for (k, r) in frames {
        u.factors[*k] = su2_lift(r)?;
    }
    Ok(u)
}

fn combination(t: &DMatrix<f64>, c: &[f64; 3]) -> DVector<f64> {
    t * Vector3::from(*c)
}

/// Rewrites a dependency `Σ_i ξ_i (α_i A + β_i B + γ_i C)_{j_i} ψ = 0` as
/// `Σ_i ξ_i' A_{j_i} ψ' = 0` with `ψ' = Uψ`.
///
/// Each `(α_i, β_i, γ_i)` is normalized and `ξ_i' = ξ_i·|(α_i, β_i, γ_i)|`;
/// slot `j_i` gets the lift of a rotation sending `A` to the normalized
/// direction. Returns the adjustment and `ξ'`.
pub fn adjust_dependency(
    psi: &PureState,
    slots: &[usize],
    coefficients: &[[f64; 3]],
    xi: &[f64],
) -> Result<(Adjustment, Vec<f64>)> {
    if slots.is_empty() {
        return Err(invalid("slot set must be nonempty"));
    }
    for (found, expected) in [(coefficients.len(), slots.len()), (xi.len(), slots.len())] {
        if found != expected {
            return Err(Error::LengthMismatch { expected, found });
        }
    }
    if slots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("slots must be strictly increasing"));
    }
    let psi = psi.to_float_state();
    let norm = psi.norm();
    let mut directions = Vec::with_capacity(slots.len());
    let mut scaled = Vec::with_capacity(slots.len());
    let mut sum = DVector::zeros(2 * psi.dim());
    for ((&k, c), &x) in slots.iter().zip(coefficients).zip(xi) {
        check_slot(&psi, k)?;
        let len = Vector3::from(*c).norm();
        if !(len.is_finite() && len > 0.0 && x.is_finite()) {
            return Err(invalid(format!("coefficients for slot {k} must be finite and nonzero")));
        }
        let d = c.map(|v| v / len);
        sum += combination(&triple_matrix(&psi, k)?, &d) * (x * len);
        directions.push(d);
        scaled.push(x * len);
    }
    let scale = norm * scaled.iter().map(|x| x.abs()).sum::<f64>();
    let before = sum.norm() / scale;
    if before > HYPOTHESIS_TOLERANCE {
        return Err(Error::HypothesisViolation { residual: before });
    }
    let frames = slots
        .iter()
        .zip(&directions)
        .map(|(&k, d)| Ok((k, so3_from_frame(*d, None)?)))
        .collect::<Result<Vec<_>>>()?;
    let unitary = lift_slots(psi.n(), &frames)?;
    let state = apply_group(&unitary, &psi)?;
    let mut after = DVector::zeros(2 * state.dim());
    for (&k, &x) in slots.iter().zip(&scaled) {
        after += triple_matrix(&state, k)?.column(0) * x;
    }
    let adjustment = Adjustment {
        unitary,
        state,
        residual: after.norm() / scale,
    };
    Ok((adjustment, scaled))
}

/// Unit vectors spanning `⟨T_l⟩ ∩ ⟨T_{l'}⟩`, as pairs of coordinates
/// `(a, b)` with `Q_l a = Q_{l'} b`, where `Q_k = T_k / ‖ψ‖` has orthonormal
/// columns. Directions are those whose principal angle satisfies
/// `1 − cos θ ≤ tol`, most aligned first.
pub fn span_intersection(
    psi: &PureState,
    l: usize,
    l2: usize,
    tol: f64,
) -> Result<Vec<(Vector3<f64>, Vector3<f64>)>> {
    let norm = psi.norm();
    let ql = triple_matrix(psi, l)? / norm;
    let ql2 = triple_matrix(psi, l2)? / norm;
    let g: Matrix3<f64> = (ql.transpose() * &ql2).fixed_view::<3, 3>(0, 0).into_owned();
    let eig = SymmetricEigen::new(g * g.transpose());
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut out: Vec<(Vector3<f64>, Vector3<f64>)> = Vec::new();
    for i in order {
        let cos = eig.eigenvalues[i].max(0.0).sqrt();
        if 1.0 - cos > tol {
            break;
        }
        let a = eig.eigenvectors.column(i).normalize();
        let mut b = g.transpose() * a;
        for (_, prev) in &out {
            b -= prev * prev.dot(&b);
        }
        out.push((a, b.normalize()));
    }
    Ok(out)
}

/// Finds `U` acting on slots `l < l'` with `A_lψ' = A_{l'}ψ'` and
/// `C_lψ' = C_{l'}ψ'` for `ψ' = Uψ`.
///
/// Requires `dim ⟨T_l, T_{l'}⟩ ≤ 4`, which forces the intersection
/// `⟨T_l⟩ ∩ ⟨T_{l'}⟩` to have dimension at least 2. Two orthonormal
/// directions `x_1, x_2` in it become the images of `A` and `C` on both
/// slots.
pub fn adjust_two_common(psi: &PureState, l: usize, l2: usize) -> Result<Adjustment> {
    if l >= l2 {
        return Err(invalid("slots must satisfy l < l'"));
    }
    let psi = psi.to_float_state();
    check_slot(&psi, l2)?;
    let qr = PivotedQr::new(&stacked_triples(&psi, &[l, l2])?);
    if qr.rank(SPAN_TOLERANCE) > 4 {
        let p = qr.pivots();
        return Err(Error::HypothesisViolation {
            residual: p[4] / p[0],
        });
    }
    let dirs = span_intersection(&psi, l, l2, SPAN_TOLERANCE)?;
    if dirs.len() < 2 {
        return Err(Error::DegenerateIntersection { dim: dirs.len() });
    }
    let (a1, b1) = dirs[0];
    let (a2, b2) = dirs[1];
    let frames = [
        (l, so3_from_frame(a1.into(), Some(a2.into()))?),
        (l2, so3_from_frame(b1.into(), Some(b2.into()))?),
    ];
    let unitary = lift_slots(psi.n(), &frames)?;
    let state = apply_group(&unitary, &psi)?;
    let (tl, tl2) = (triple_matrix(&state, l)?, triple_matrix(&state, l2)?);
    let residual = [0, 2]
        .iter()
        .map(|&c| (tl.column(c) - tl2.column(c)).norm())
        .fold(0.0, f64::max)
        / psi.norm();
    Ok(Adjustment {
        unitary,
        state,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_action::apply_algebra;
    use crate::orbit_matrix::{rank_float, OrbitMatrix, DEFAULT_TOLERANCE};
    use crate::state::{make_basis, make_singlet_product, sample_haar_state_with, singlet, tensor};
    use crate::MultiIndex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
        (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).norm() <= tol))
    }

    /// Haar rotation from Gram-Schmidt on a Gaussian matrix, independent of
    /// the quaternion formulas.
    fn random_rotation(rng: &mut impl Rng) -> Matrix3<f64> {
        let g = Matrix3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let mut q = g.qr().q();
        if q.determinant() < 0.0 {
            q.column_mut(0).neg_mut();
        }
        q
    }

    fn projector(t: &DMatrix<f64>) -> DMatrix<f64> {
        let q = t.clone().qr().q();
        &q * q.transpose()
    }

    /// `ψ = V ψ₀` with `ψ₀` a product of `k` singlets. Pair `(2p, 2p+1)` then
    /// satisfies `Σ (V_j A V_j†)_j ψ = 0`, whose coordinates are returned per
    /// slot together with `ξ = 1`.
    fn engineered(k: usize, rng: &mut impl Rng) -> (PureState, Vec<[f64; 3]>) {
        let v = LocalUnitary::new((0..2 * k).map(|_| Su2Element::random(rng)).collect());
        let psi = apply_group(&v, &make_singlet_product(k).unwrap()).unwrap();
        let coeffs = v
            .factors
            .iter()
            .map(|f| f.dagger().conjugate(Generator::A.into()).to_array())
            .collect();
        (psi, coeffs)
    }

    #[test]
    fn su2_basics() {
        let id = Su2Element::identity();
        assert!(id.is_valid(1e-15));
        assert_eq!(Su2Element::from_quaternion([0.0, 1.0, 0.0, 0.0]).unwrap().matrix(), Generator::A.matrix());
        assert_eq!(Su2Element::from_quaternion([0.0, 0.0, 1.0, 0.0]).unwrap().matrix(), Generator::B.matrix());
        assert_eq!(Su2Element::from_quaternion([0.0, 0.0, 0.0, 1.0]).unwrap().matrix(), Generator::C.matrix());
        assert!(Su2Element::from_quaternion([0.0; 4]).is_err());
        assert!(Su2Element::new([[c(2.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = Su2Element::random(&mut rng);
        assert!(u.is_valid(1e-14));
        assert!(close(&(&u * &u.dagger()).matrix(), &id.matrix(), 1e-14));
    }

    #[test]
    fn frame_examples() {
        let id = so3_from_frame([1.0, 0.0, 0.0], None).unwrap();
        assert_eq!(id, So3Rotation::identity());

        let r = so3_from_frame([0.0, 1.0, 0.0], None).unwrap();
        assert_eq!(r.image(Generator::A).to_array(), [0.0, 1.0, 0.0]);
        assert!((r.matrix().transpose() * r.matrix() - Matrix3::identity()).amax() < 1e-15);
        assert!((r.matrix().determinant() - 1.0).abs() < 1e-15);

        let r = so3_from_frame([1.0, 0.0, 0.0], Some([0.0, 1.0, 0.0])).unwrap();
        assert_eq!(r.image(Generator::C).to_array(), [0.0, 1.0, 0.0]);
        assert_eq!(r.image(Generator::B).to_array(), [0.0, 0.0, -1.0]);
        assert!((r.matrix().determinant() - 1.0).abs() < 1e-15);

        assert!(so3_from_frame([2.0, 0.0, 0.0], None).is_err());
        assert!(so3_from_frame([1.0, 0.0, 0.0], Some([S, S, 0.0])).is_err());
        assert!(so3_from_frame([1.0, 0.0, 0.0], Some([0.0, 2.0, 0.0])).is_err());
    }

    #[test]
    fn lift_examples() {
        assert_eq!(su2_lift(&So3Rotation::identity()).unwrap(), Su2Element::identity());

        // A ↦ B, B ↦ −A, C ↦ C
        let r = So3Rotation::new(Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0)).unwrap();
        let u = su2_lift(&r).unwrap();
        let expected = [[c(S, 0.0), c(0.0, -S)], [c(0.0, -S), c(S, 0.0)]];
        assert!(close(&u.matrix(), &expected, 1e-15));
        let m = u.matrix();
        let conj = mat_mul(&mat_mul(&mat_dagger(&m), &Generator::A.matrix()), &m);
        assert!(close(&conj, &Generator::B.matrix(), 1e-15));
    }

    #[test]
    fn lift_round_trips_random_rotations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let r = So3Rotation::new(random_rotation(&mut rng)).unwrap();
            let u = su2_lift(&r).unwrap();
            assert!(u.is_valid(1e-12));
            assert!((u.adjoint().matrix() - r.matrix()).amax() < 1e-12);
        }
        for _ in 0..100 {
            let u = Su2Element::random(&mut rng);
            let lifted = su2_lift(&u.adjoint()).unwrap();
            let (p, q) = (u.quaternion(), lifted.quaternion());
            let same = p.iter().zip(&q).all(|(a, b)| (a - b).abs() < 1e-10);
            let flipped = p.iter().zip(&q).all(|(a, b)| (a + b).abs() < 1e-10);
            assert!(same || flipped);
        }
    }

    #[test]
    fn triple_span_examples() {
        let s = singlet();
        assert_eq!(triple_span_dim(&s, &[0, 1], SPAN_TOLERANCE).unwrap(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let a = sample_haar_state_with(1, &mut rng).unwrap();
            let b = sample_haar_state_with(1, &mut rng).unwrap();
            let p = tensor(&a, &b).unwrap();
            // i·ψ lies in both triples of a product state
            assert_eq!(triple_span_dim(&p, &[0, 1], SPAN_TOLERANCE).unwrap(), 5);
            let g = sample_haar_state_with(3, &mut rng).unwrap();
            assert_eq!(triple_span_dim(&g, &[0, 1], SPAN_TOLERANCE).unwrap(), 6);
            for k in 0..3 {
                assert_eq!(triple_span_dim(&g, &[k], SPAN_TOLERANCE).unwrap(), 3);
            }
        }
        assert!(triple_span_dim(&s, &[], SPAN_TOLERANCE).is_err());
    }

    #[test]
    fn dependency_already_in_a_columns() {
        let s = singlet();
        let (adj, xi) = adjust_dependency(&s, &[0, 1], &[[1.0, 0.0, 0.0]; 2], &[1.0, 1.0]).unwrap();
        assert_eq!(adj.unitary, LocalUnitary::identity(2));
        assert_eq!(adj.state.to_f64(), s.to_f64());
        assert_eq!(xi, vec![1.0, 1.0]);
    }

    #[test]
    fn dependency_in_b_columns_of_singlet() {
        let s = singlet();
        let (adj, _) = adjust_dependency(&s, &[0, 1], &[[0.0, 1.0, 0.0]; 2], &[1.0, 1.0]).unwrap();
        assert!(adj.residual < 1e-15);
        let a0 = triple_columns(&adj.state, 0).unwrap().a;
        let a1 = triple_columns(&adj.state, 1).unwrap().a;
        assert!(a0.iter().zip(&a1).all(|(x, y)| (x + y).norm() < 1e-15));
    }

    #[test]
    fn dependency_hypothesis_is_checked() {
        let b = make_basis(MultiIndex::from_index(2, 0).unwrap());
        let err = adjust_dependency(&b, &[0, 1], &[[1.0, 0.0, 0.0]; 2], &[1.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation { residual } if residual > 0.1));
        assert!(adjust_dependency(&b, &[1, 0], &[[1.0, 0.0, 0.0]; 2], &[1.0, -1.0]).is_err());
        assert!(adjust_dependency(&b, &[0, 1], &[[0.0; 3]; 2], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn engineered_dependencies_preserve_spans_and_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for k in 1..=3 {
            for _ in 0..5 {
                let (psi, coeffs) = engineered(k, &mut rng);
                let slots: Vec<usize> = (0..2 * k).collect();
                let scaled: Vec<[f64; 3]> = coeffs.iter().map(|c| c.map(|x| 2.5 * x)).collect();
                let (adj, xi) = adjust_dependency(&psi, &slots, &scaled, &vec![1.0; 2 * k]).unwrap();
                assert!(adj.residual < 1e-10, "residual {}", adj.residual);
                assert!(xi.iter().all(|x| (x - 2.5).abs() < 1e-12));
                for j in 0..2 * k {
                    let moved = DMatrix::from_columns(
                        &(0..3)
                            .map(|g| {
                                let col = triple_matrix(&psi, j).unwrap().column(g).into_owned();
                                let amps = (0..psi.dim()).map(|p| c(col[2 * p], col[2 * p + 1])).collect();
                                let v = PureState::from_float(psi.n(), amps).unwrap();
                                let w = apply_group(&adj.unitary, &v).unwrap().to_f64();
                                DVector::from_iterator(2 * w.len(), w.iter().flat_map(|z| [z.re, z.im]))
                            })
                            .collect::<Vec<_>>(),
                    );
                    let diff = projector(&moved) - projector(&triple_matrix(&adj.state, j).unwrap());
                    assert!(diff.amax() < 1e-8);
                }
                let before = rank_float(&OrbitMatrix::build(&psi), DEFAULT_TOLERANCE);
                let after = rank_float(&OrbitMatrix::build(&adj.state), DEFAULT_TOLERANCE);
                assert_eq!(before, after);
            }
        }
    }

    #[test]
    fn two_common_on_singlets() {
        let s = singlet();
        let adj = adjust_two_common(&s, 0, 1).unwrap();
        assert!(adj.residual < 1e-10);
        assert_eq!(span_intersection(&s, 0, 1, SPAN_TOLERANCE).unwrap().len(), 3);

        let zero = make_basis(MultiIndex::from_index(1, 0).unwrap());
        let s0 = tensor(&s, &zero).unwrap();
        let adj = adjust_two_common(&s0, 0, 1).unwrap();
        assert!(adj.residual < 1e-10);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let (psi, _) = engineered(2, &mut rng);
            for (l, l2) in [(0, 1), (2, 3)] {
                assert!(triple_span_dim(&psi, &[l, l2], SPAN_TOLERANCE).unwrap() <= 4);
                assert!(span_intersection(&psi, l, l2, SPAN_TOLERANCE).unwrap().len() >= 2);
                let adj = adjust_two_common(&psi, l, l2).unwrap();
                assert!(adj.residual < 1e-10, "residual {}", adj.residual);
                let before = rank_float(&OrbitMatrix::build(&psi), DEFAULT_TOLERANCE);
                assert_eq!(before, rank_float(&OrbitMatrix::build(&adj.state), DEFAULT_TOLERANCE));
            }
        }
    }

    #[test]
    fn two_common_rejects_product_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = sample_haar_state_with(1, &mut rng).unwrap();
        let b = sample_haar_state_with(1, &mut rng).unwrap();
        let p = tensor(&a, &b).unwrap();
        assert!(matches!(adjust_two_common(&p, 0, 1), Err(Error::HypothesisViolation { .. })));
        assert!(adjust_two_common(&p, 1, 0).is_err());
    }

    #[test]
    fn adjusted_state_is_stabilized_consistently() {
        // A_0ψ' + A_1ψ' = 0 means (A, A) generates an isotropy direction of ψ'
        let s = singlet();
        let (adj, _) = adjust_dependency(&s, &[0, 1], &[[0.0, 0.6, 0.8]; 2], &[1.0, 1.0]).unwrap();
        let x = crate::LocalAlgebraElement::new(vec![Generator::A.into(); 2]);
        let v = apply_algebra(&x, &adj.state).unwrap();
        assert!(crate::lie_action::norm_sqr(&v) < 1e-28);
    }
}
