//! Phase spaces on `A ⊕ A*`: construction from a symmetric S-equation
//! solution (or from the semidirect product at `r = 0`), the canonical
//! symplectic form, parakähler verification, and symplectomorphism checks.
//!
//! The 2n-dimensional basis is always ordered `(e_1..e_n, e_1*..e_n*)`.
//! Brackets and products are generated from the operator formulas, never
//! transcribed from display tables.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{
    ad_vec, left_mult_vec, right_mult_vec, sub_adjacent_with_tolerance, Algebra, LieAlgebra,
};
use crate::error::LsaError;
use crate::sequation::{s_residual_tensor, BilinearForm, FormRole, SymmetricTensor};
use crate::tensor::{basis_vector, vec_max_norm, Tensor3};
use crate::{C64, DEFAULT_TOL};

/// A 2n-dimensional phase space: the base algebra, the deforming tensor,
/// the Lie bracket on `A ⊕ A*`, the canonical symplectic form, and the
/// compatible left-symmetric product on the doubled space.
#[derive(Debug, Clone)]
pub struct PhaseSpace {
    pub base: Algebra,
    pub r: SymmetricTensor,
    pub lie: LieAlgebra,
    pub omega: BilinearForm,
    pub lsa: Option<Algebra>,
    /// False when the S-residual of `r` exceeded tolerance at build time.
    pub verified: bool,
}

impl PhaseSpace {
    pub fn half_dim(&self) -> usize {
        self.base.dim()
    }
}

/// General complex linear map between coefficient spaces.
#[derive(Debug, Clone)]
pub struct LinearMap {
    pub dim_in: usize,
    pub dim_out: usize,
    pub matrix: DMatrix<C64>,
}

impl LinearMap {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self, LsaError> {
        for v in matrix.iter() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(LsaError::NonFiniteEntry(vec![]));
            }
        }
        Ok(LinearMap { dim_in: matrix.ncols(), dim_out: matrix.nrows(), matrix })
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.matrix * v
    }
}

/// Canonical symplectic form on `A ⊕ A*`:
/// `ω_p(x+a*, y+b*) = ⟨a*,y⟩ − ⟨b*,x⟩`, the block matrix `[[0,−I],[I,0]]`.
pub fn canonical_omega(n: usize) -> Result<BilinearForm, LsaError> {
    if n < 1 {
        return Err(LsaError::DimensionMismatch { expected: 1, got: 0 });
    }
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = C64::new(-1.0, 0.0);
        m[(n + i, i)] = C64::new(1.0, 0.0);
    }
    BilinearForm::new(m, FormRole::Symplectic)
}

/// Max over basis triples of the cyclic sum
/// `ω([x,y],z) + ω([y,z],x) + ω([z,x],y)`.
pub fn two_cocycle_residual(l: &LieAlgebra, omega: &BilinearForm) -> Result<f64, LsaError> {
    let n = l.dim();
    if omega.dim != n {
        return Err(LsaError::DimensionMismatch { expected: n, got: omega.dim });
    }
    let mut worst: f64 = 0.0;
    for x in 0..n {
        let ex = basis_vector(n, x);
        for y in 0..n {
            let ey = basis_vector(n, y);
            let bxy = l.bracket(&ex, &ey);
            for z in 0..n {
                let ez = basis_vector(n, z);
                let byz = l.bracket(&ey, &ez);
                let bzx = l.bracket(&ez, &ex);
                let v = omega.eval(&bxy, &ez) + omega.eval(&byz, &ex) + omega.eval(&bzx, &ey);
                worst = worst.max(v.norm());
            }
        }
    }
    Ok(worst)
}

struct DualReps {
    /// `L*(e_i) = −L_{e_i}ᵀ` for each basis index.
    lstar: Vec<DMatrix<C64>>,
    /// `R*(e_i) = −R_{e_i}ᵀ`.
    rstar: Vec<DMatrix<C64>>,
    /// `ad*(e_i) = −ad_{e_i}ᵀ`.
    adstar: Vec<DMatrix<C64>>,
}

fn dual_reps(a: &Algebra) -> DualReps {
    let n = a.dim();
    let mut lstar = Vec::with_capacity(n);
    let mut rstar = Vec::with_capacity(n);
    let mut adstar = Vec::with_capacity(n);
    for i in 0..n {
        let ei = basis_vector(n, i);
        lstar.push(-left_mult_vec(a, &ei).transpose());
        rstar.push(-right_mult_vec(a, &ei).transpose());
        adstar.push(-ad_vec(a, &ei).transpose());
    }
    DualReps { lstar, rstar, adstar }
}

fn set_block(t: &mut Tensor3, i: usize, j: usize, a_part: Option<&DVector<C64>>, dual_part: Option<&DVector<C64>>, n: usize) {
    if let Some(v) = a_part {
        for k in 0..n {
            t.set(i, j, k, v[k]);
        }
    }
    if let Some(v) = dual_part {
        for k in 0..n {
            t.set(i, j, n + k, v[k]);
        }
    }
}

/// Builds the phase space of `A` determined by a symmetric tensor `r`.
///
/// Brackets on `A ⊕ A*`:
/// `[e_i,e_j]` from the sub-adjacent Lie algebra,
/// `[x,a*] = [x,r(a*)] − r(L*(x)a*) + L*(x)a*`,
/// `[a*,b*] = L*(r(a*))b* − L*(r(b*))a*`;
/// the compatible left-symmetric product comes from
/// `x∗a* = x·r(a*) − r(ad*(x)a*) + ad*(x)a*`,
/// `a*∗x = r(a*)·x + r(R*(x)a*) − R*(x)a*`,
/// `a*∗b* = −R*(r(b*))a* + ad*(r(a*))b*`, plus `A`'s own product.
pub fn build_phase_space(a: &Algebra, r: &SymmetricTensor) -> Result<PhaseSpace, LsaError> {
    build_phase_space_with_tolerance(a, r, DEFAULT_TOL)
}

pub fn build_phase_space_with_tolerance(
    a: &Algebra,
    r: &SymmetricTensor,
    tol: f64,
) -> Result<PhaseSpace, LsaError> {
    let n = a.dim();
    if r.dim() != n {
        return Err(LsaError::DimensionMismatch { expected: n, got: r.dim() });
    }
    let sub = sub_adjacent_with_tolerance(a, tol)?;
    let verified = s_residual_tensor(a, r)?.norm < tol;
    let reps = dual_reps(a);

    let mut f = Tensor3::zeros(2 * n);
    let mut lsa_c = Tensor3::zeros(2 * n);

    // A x A block
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                f.set(i, j, k, sub.brackets().get(i, j, k));
                lsa_c.set(i, j, k, a.constants().get(i, j, k));
            }
        }
    }

    for i in 0..n {
        let xi = basis_vector(n, i);
        for j in 0..n {
            let aj = basis_vector(n, j);
            let raj = r.map(&aj);

            // [x, a*]
            let lstar_x_a = &reps.lstar[i] * &aj;
            let bracket_a_part = a.commutator(&xi, &raj) - r.map(&lstar_x_a);
            set_block(&mut f, i, n + j, Some(&bracket_a_part), Some(&lstar_x_a), n);
            // antisymmetric partner [a*, x]
            let neg_a = -&bracket_a_part;
            let neg_d = -&lstar_x_a;
            set_block(&mut f, n + j, i, Some(&neg_a), Some(&neg_d), n);

            // x ∗ a*
            let adstar_x_a = &reps.adstar[i] * &aj;
            let prod_a_part = a.product(&xi, &raj) - r.map(&adstar_x_a);
            set_block(&mut lsa_c, i, n + j, Some(&prod_a_part), Some(&adstar_x_a), n);

            // a* ∗ x  (here the dual element is e_j^*, the algebra element e_i)
            let rstar_x_a = &reps.rstar[i] * &aj;
            let prod2_a_part = a.product(&raj, &xi) + r.map(&rstar_x_a);
            let prod2_d_part = -&rstar_x_a;
            set_block(&mut lsa_c, n + j, i, Some(&prod2_a_part), Some(&prod2_d_part), n);
        }
    }

    // dual-dual block
    let lstar_of = |v: &DVector<C64>| -> DMatrix<C64> { -left_mult_vec(a, v).transpose() };
    for i in 0..n {
        let ai = basis_vector(n, i);
        let rai = r.map(&ai);
        let lstar_rai = lstar_of(&rai);
        let adstar_rai = -ad_vec(a, &rai).transpose();
        for j in 0..n {
            let bj = basis_vector(n, j);
            let rbj = r.map(&bj);
            let lstar_rbj = lstar_of(&rbj);
            let rstar_rbj = -right_mult_vec(a, &rbj).transpose();

            let bracket = &lstar_rai * &bj - &lstar_rbj * &ai;
            set_block(&mut f, n + i, n + j, None, Some(&bracket), n);

            let prod = -(&rstar_rbj * &ai) + &adstar_rai * &bj;
            set_block(&mut lsa_c, n + i, n + j, None, Some(&prod), n);
        }
    }

    let lie = LieAlgebra::with_tolerance(2 * n, f, tol)?;
    let omega = canonical_omega(n)?;
    let mut labels: Vec<String> = a.basis_labels().to_vec();
    labels.extend(a.basis_labels().iter().map(|l| format!("{l}*")));
    let lsa = Algebra::new(2 * n, labels, lsa_c)?;
    Ok(PhaseSpace { base: a.clone(), r: r.clone(), lie, omega, lsa: Some(lsa), verified })
}

/// Semidirect phase space `G(A) ⋉_{L*} G(A)*`, the `r = 0` case:
/// `[x_1+v_1, x_2+v_2] = [x_1,x_2] + L*(x_1)v_2 − L*(x_2)v_1`.
pub fn semidirect_phase_space(a: &Algebra) -> Result<PhaseSpace, LsaError> {
    build_phase_space(a, &SymmetricTensor::zero(a.dim()))
}

/// Recovers the compatible left-symmetric product from a symplectic form:
/// the unique `x∗y` with `ω(x∗y, z) = −ω(y, [x,z])` for all `z`.
pub fn lsa_from_symplectic(l: &LieAlgebra, omega: &BilinearForm) -> Result<Algebra, LsaError> {
    lsa_from_symplectic_with_tolerance(l, omega, DEFAULT_TOL)
}

pub fn lsa_from_symplectic_with_tolerance(
    l: &LieAlgebra,
    omega: &BilinearForm,
    tol: f64,
) -> Result<Algebra, LsaError> {
    let n = l.dim();
    if omega.dim != n {
        return Err(LsaError::DimensionMismatch { expected: n, got: omega.dim });
    }
    let det = omega.mat.clone().determinant().norm();
    if det < tol {
        return Err(LsaError::Degenerate { det });
    }
    let cocycle = two_cocycle_residual(l, omega)?;
    if cocycle > tol {
        return Err(LsaError::NotTwoCocycle { residual: cocycle, tol });
    }
    let wt = omega.mat.transpose();
    let lu = wt.lu();
    let mut c = Tensor3::zeros(n);
    let f = l.brackets();
    for x in 0..n {
        for y in 0..n {
            // rhs_z = −ω(e_y, [e_x, e_z]) = −Σ_m f[x][z][m] W[y][m]
            let rhs = DVector::from_fn(n, |z, _| {
                -(0..n).map(|m| f.get(x, z, m) * omega.mat[(y, m)]).sum::<C64>()
            });
            let p = lu.solve(&rhs).ok_or(LsaError::Degenerate { det })?;
            for k in 0..n {
                c.set(x, y, k, p[k]);
            }
        }
    }
    let labels = (1..=n).map(|i| format!("x{i}")).collect();
    Algebra::new(n, labels, c)
}

/// Full parakähler verification report. All residuals below tolerance
/// means the phase space is a verified parakähler Lie algebra with
/// Lagrangian splitting `(span e_i | span e_i*)`.
#[derive(Debug, Clone)]
pub struct ParakahlerReport {
    pub jacobi: f64,
    pub omega_antisymmetry: f64,
    pub omega_abs_det: f64,
    pub two_cocycle: f64,
    /// Bracket coefficients escaping `span{e_i}`.
    pub closure_plus: f64,
    /// Bracket coefficients escaping `span{e_i*}`.
    pub closure_minus: f64,
    pub isotropy_plus: f64,
    pub isotropy_minus: f64,
    pub tolerance: f64,
    pub verified: bool,
}

impl ParakahlerReport {
    pub fn max_residual(&self) -> f64 {
        self.jacobi
            .max(self.omega_antisymmetry)
            .max(self.two_cocycle)
            .max(self.closure_plus)
            .max(self.closure_minus)
            .max(self.isotropy_plus)
            .max(self.isotropy_minus)
    }
}

pub fn check_parakahler(p: &PhaseSpace) -> ParakahlerReport {
    check_parakahler_with_tolerance(p, DEFAULT_TOL)
}

pub fn check_parakahler_with_tolerance(p: &PhaseSpace, tol: f64) -> ParakahlerReport {
    let n = p.half_dim();
    let f = p.lie.brackets();
    let w = &p.omega.mat;

    let omega_antisymmetry =
        (w + w.transpose()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let omega_abs_det = w.clone().determinant().norm();
    let two_cocycle = two_cocycle_residual(&p.lie, &p.omega).unwrap_or(f64::INFINITY);

    let mut closure_plus: f64 = 0.0;
    let mut closure_minus: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                closure_plus = closure_plus.max(f.get(i, j, n + k).norm());
                closure_minus = closure_minus.max(f.get(n + i, n + j, k).norm());
            }
        }
    }

    let mut isotropy_plus: f64 = 0.0;
    let mut isotropy_minus: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            isotropy_plus = isotropy_plus.max(w[(i, j)].norm());
            isotropy_minus = isotropy_minus.max(w[(n + i, n + j)].norm());
        }
    }

    let report = ParakahlerReport {
        jacobi: p.lie.recorded_jacobi(),
        omega_antisymmetry,
        omega_abs_det,
        two_cocycle,
        closure_plus,
        closure_minus,
        isotropy_plus,
        isotropy_minus,
        tolerance: tol,
        verified: false,
    };
    let verified = report.max_residual() < tol && omega_abs_det > tol;
    ParakahlerReport { verified, ..report }
}

/// Max over basis pairs of `|φ([x,y]₁) − [φx, φy]₂|`.
pub fn verify_lie_isomorphism(
    l1: &LieAlgebra,
    l2: &LieAlgebra,
    phi: &LinearMap,
) -> Result<f64, LsaError> {
    let n = l1.dim();
    if l2.dim() != n || phi.dim_in != n || phi.dim_out != n {
        return Err(LsaError::DimensionMismatch { expected: n, got: l2.dim() });
    }
    let det = phi.matrix.clone().determinant().norm();
    if det < DEFAULT_TOL {
        return Err(LsaError::SingularMap { det });
    }
    let mut worst: f64 = 0.0;
    for x in 0..n {
        let ex = basis_vector(n, x);
        let px = phi.apply(&ex);
        for y in 0..n {
            let ey = basis_vector(n, y);
            let py = phi.apply(&ey);
            let lhs = phi.apply(&l1.bracket(&ex, &ey));
            let rhs = l2.bracket(&px, &py);
            worst = worst.max(vec_max_norm(&(lhs - rhs)));
        }
    }
    Ok(worst)
}

/// Symplectomorphism / parakähler-isomorphism report for a supplied map.
/// Subspace preservation is reported separately so symplectic-but-not-
/// parakähler isomorphisms are distinguishable.
#[derive(Debug, Clone)]
pub struct SymplectoReport {
    pub lie_residual: f64,
    pub pullback_residual: f64,
    /// Coefficients of `φ(G₁⁺)` escaping `G₂⁺`.
    pub plus_escape: f64,
    /// Coefficients of `φ(G₁⁻)` escaping `G₂⁻`.
    pub minus_escape: f64,
    pub preserves_plus: bool,
    pub preserves_minus: bool,
    pub tolerance: f64,
    pub symplectic_isomorphism: bool,
    pub parakahler_isomorphism: bool,
}

pub fn verify_symplectomorphism(
    p1: &PhaseSpace,
    p2: &PhaseSpace,
    phi: &LinearMap,
) -> Result<SymplectoReport, LsaError> {
    verify_symplectomorphism_with_tolerance(p1, p2, phi, DEFAULT_TOL)
}

pub fn verify_symplectomorphism_with_tolerance(
    p1: &PhaseSpace,
    p2: &PhaseSpace,
    phi: &LinearMap,
    tol: f64,
) -> Result<SymplectoReport, LsaError> {
    let lie_residual = verify_lie_isomorphism(&p1.lie, &p2.lie, phi)?;
    let m = &phi.matrix;
    let pullback = &p1.omega.mat - m.transpose() * &p2.omega.mat * m;
    let pullback_residual = pullback.iter().map(|z| z.norm()).fold(0.0, f64::max);

    // φ(G⁺) ⊆ G⁺ iff the lower-left block vanishes; invertibility then
    // forces equality of the spans (same dimension on both sides).
    let n = p1.half_dim();
    let mut plus_escape: f64 = 0.0;
    let mut minus_escape: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            plus_escape = plus_escape.max(m[(n + i, j)].norm());
            minus_escape = minus_escape.max(m[(i, n + j)].norm());
        }
    }
    let preserves_plus = plus_escape < tol;
    let preserves_minus = minus_escape < tol;
    let symplectic = lie_residual < tol && pullback_residual < tol;
    Ok(SymplectoReport {
        lie_residual,
        pullback_residual,
        plus_escape,
        minus_escape,
        preserves_plus,
        preserves_minus,
        tolerance: tol,
        symplectic_isomorphism: symplectic,
        parakahler_isomorphism: symplectic && preserves_plus && preserves_minus,
    })
}

/// The explicit symplectomorphism from the semidirect phase space to the
/// `r`-deformed one: `φ(x) = x`, `φ(a*) = −r(a*) + a*`. Always invertible
/// (unit-triangular block structure).
pub fn theorem39_map(a: &Algebra, r: &SymmetricTensor) -> Result<LinearMap, LsaError> {
    let n = a.dim();
    if r.dim() != n {
        return Err(LsaError::DimensionMismatch { expected: n, got: r.dim() });
    }
    let mut m = DMatrix::identity(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(j, n + i)] = -r.matrix()[(i, j)];
        }
    }
    LinearMap::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::sequation::dual_product;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn diag2(a: f64, b: f64) -> SymmetricTensor {
        SymmetricTensor::from_rows(&[
            &[c(a, 0.0), c(0.0, 0.0)],
            &[c(0.0, 0.0), c(b, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn canonical_omega_small() {
        let w1 = canonical_omega(1).unwrap();
        assert_eq!(w1.mat[(0, 1)], c(-1.0, 0.0));
        assert_eq!(w1.mat[(1, 0)], c(1.0, 0.0));

        let w2 = canonical_omega(2).unwrap();
        assert_eq!(w2.mat[(0, 2)], c(-1.0, 0.0));
        assert_eq!(w2.mat[(1, 3)], c(-1.0, 0.0));
        assert_eq!(w2.mat[(2, 0)], c(1.0, 0.0));
        assert_eq!((&w2.mat + w2.mat.transpose()).norm(), 0.0);
        assert!((w2.mat.determinant().norm() - 1.0).abs() < 1e-15);
        assert!(canonical_omega(0).is_err());
    }

    #[test]
    fn two_cocycle_counterexamples() {
        // On the Heisenberg algebra every antisymmetric form is a
        // 2-cocycle (all brackets are central and repeated-index triples
        // cancel pairwise), so a genuine failure needs either a
        // non-antisymmetric form or a different bracket.
        let mut f = Tensor3::zeros(3);
        f.set(0, 1, 2, c(1.0, 0.0));
        f.set(1, 0, 2, c(-1.0, 0.0));
        let heis = LieAlgebra::new(3, f).unwrap();
        let mut w = DMatrix::zeros(3, 3);
        w[(0, 1)] = c(1.0, 0.0);
        w[(1, 0)] = c(-1.0, 0.0);
        let omega = BilinearForm::new(w, FormRole::Generic).unwrap();
        assert_eq!(two_cocycle_residual(&heis, &omega).unwrap(), 0.0);

        // Generic ω(x3,x3) = 1 pairs the bracket image with itself:
        // cyclic sum at (x1,x2,x3) is exactly 1
        let mut w = DMatrix::zeros(3, 3);
        w[(2, 2)] = c(1.0, 0.0);
        let omega = BilinearForm::new(w, FormRole::Generic).unwrap();
        assert_eq!(two_cocycle_residual(&heis, &omega).unwrap(), 1.0);

        // [x1,x2] = x2 with antisymmetric ω(x2,x3) = 1:
        // cyclic sum at (x1,x2,x3) = ω(x2,x3) = 1
        let mut f = Tensor3::zeros(3);
        f.set(0, 1, 1, c(1.0, 0.0));
        f.set(1, 0, 1, c(-1.0, 0.0));
        let aff = LieAlgebra::new(3, f).unwrap();
        let mut w = DMatrix::zeros(3, 3);
        w[(1, 2)] = c(1.0, 0.0);
        w[(2, 1)] = c(-1.0, 0.0);
        let omega = BilinearForm::new(w, FormRole::Generic).unwrap();
        assert_eq!(two_cocycle_residual(&aff, &omega).unwrap(), 1.0);

        // abelian: always zero
        let ab = LieAlgebra::new(3, Tensor3::zeros(3)).unwrap();
        assert_eq!(two_cocycle_residual(&ab, &omega).unwrap(), 0.0);
    }

    #[test]
    fn build_ai_diag_brackets() {
        let ai = catalog::instantiate_algebra("AI", &Default::default()).unwrap();
        let p = build_phase_space(&ai, &diag2(1.0, 2.0)).unwrap();
        assert!(p.verified);
        let f = p.lie.brackets();
        // only nonzero brackets: [e1,e1*] = e1 − e1*, [e2,e2*] = 2e2 − e2*
        assert_eq!(f.get(0, 2, 0), c(1.0, 0.0));
        assert_eq!(f.get(0, 2, 2), c(-1.0, 0.0));
        assert_eq!(f.get(1, 3, 1), c(2.0, 0.0));
        assert_eq!(f.get(1, 3, 3), c(-1.0, 0.0));
        // everything else vanishes
        let mut extra: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let expected = matches!(
                        (i, j, k),
                        (0, 2, 0) | (0, 2, 2) | (2, 0, 0) | (2, 0, 2)
                            | (1, 3, 1) | (1, 3, 3) | (3, 1, 1) | (3, 1, 3)
                    );
                    if !expected {
                        extra = extra.max(f.get(i, j, k).norm());
                    }
                }
            }
        }
        assert_eq!(extra, 0.0);
        assert_eq!(two_cocycle_residual(&p.lie, &p.omega).unwrap(), 0.0);
    }

    #[test]
    fn build_nii_k_example() {
        // (NII_k, k generic), r = diag(0, 1): brackets are
        // [e1,e2] = e1, [e1,e2*] = e1, [e2,e1*] = e1*,
        // [e2,e2*] = k·e2 − k·e2*, [e1*,e2*] = −e1*
        let k = c(3.0, 0.0);
        let mut params = std::collections::BTreeMap::new();
        params.insert("k".to_string(), k);
        let a = catalog::instantiate_algebra("NII_k", &params).unwrap();
        let r = diag2(0.0, 1.0);
        let p = build_phase_space(&a, &r).unwrap();
        assert!(p.verified);
        let f = p.lie.brackets();
        assert_eq!(f.get(0, 1, 0), c(1.0, 0.0)); // [e1,e2] = e1
        assert_eq!(f.get(0, 3, 0), c(1.0, 0.0)); // [e1,e2*] = r22 e1
        assert_eq!(f.get(1, 3, 1), k); // k r22 e2
        assert_eq!(f.get(1, 3, 3), -k); // −k e2*
        assert_eq!(f.get(1, 3, 2), c(0.0, 0.0)); // no e1* term here …
        assert_eq!(f.get(1, 2, 2), c(1.0, 0.0)); // … it lives in [e2,e1*]
        assert_eq!(f.get(2, 3, 2), c(-1.0, 0.0)); // [e1*,e2*] = −r22·e1*
    }

    #[test]
    fn semidirect_examples() {
        // (AIV): abelian 4-dim
        let aiv = catalog::instantiate_algebra("AIV", &Default::default()).unwrap();
        let p = semidirect_phase_space(&aiv).unwrap();
        assert_eq!(p.lie.brackets().max_norm(), 0.0);

        // (AI): [e1,e1*] = −e1*, [e2,e2*] = −e2* only
        let ai = catalog::instantiate_algebra("AI", &Default::default()).unwrap();
        let p = semidirect_phase_space(&ai).unwrap();
        let f = p.lie.brackets();
        assert_eq!(f.get(0, 2, 2), c(-1.0, 0.0));
        assert_eq!(f.get(1, 3, 3), c(-1.0, 0.0));
        assert_eq!(f.get(0, 3, 3), c(0.0, 0.0));

        // (NV): [e1,e2] = e2, [e1,e1*] = −2e1*, [e2,e1*] = −e2*, [e1,e2*] = −e2*
        let nv = catalog::instantiate_algebra("NV", &Default::default()).unwrap();
        let p = semidirect_phase_space(&nv).unwrap();
        let f = p.lie.brackets();
        assert_eq!(f.get(0, 1, 1), c(1.0, 0.0));
        assert_eq!(f.get(0, 2, 2), c(-2.0, 0.0));
        assert_eq!(f.get(1, 2, 3), c(-1.0, 0.0));
        assert_eq!(f.get(0, 3, 3), c(-1.0, 0.0));
    }

    #[test]
    fn lsa_from_symplectic_blocks() {
        let ai = catalog::instantiate_algebra("AI", &Default::default()).unwrap();
        let r = diag2(1.0, 2.0);
        let p = build_phase_space(&ai, &r).unwrap();
        let rec = lsa_from_symplectic(&p.lie, &p.omega).unwrap();

        // restricts to (AI) on span{e1,e2}
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let d = (rec.constants().get(i, j, k) - ai.constants().get(i, j, k)).norm();
                    assert!(d < 1e-12);
                }
                for k in 0..2 {
                    assert!(rec.constants().get(i, j, 2 + k).norm() < 1e-12);
                }
            }
        }
        // restricts to dual_product on span{e1*,e2*}
        let d = dual_product(&ai, &r).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let diff =
                        (rec.constants().get(2 + i, 2 + j, 2 + k) - d.constants().get(i, j, k)).norm();
                    assert!(diff < 1e-12);
                    assert!(rec.constants().get(2 + i, 2 + j, k).norm() < 1e-12);
                }
            }
        }
        // abelian case: zero product
        let ab = LieAlgebra::new(2, Tensor3::zeros(2)).unwrap();
        let w = canonical_omega(1).unwrap();
        let z = lsa_from_symplectic(&ab, &w).unwrap();
        assert_eq!(z.constants().max_norm(), 0.0);
    }

    #[test]
    fn lsa_from_symplectic_commutator_matches_bracket() {
        let nv = catalog::instantiate_algebra("NV", &Default::default()).unwrap();
        let r = diag2(1.5, 3.0); // SE(NV) second family
        let p = build_phase_space(&nv, &r).unwrap();
        let rec = lsa_from_symplectic(&p.lie, &p.omega).unwrap();
        let n = 4;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let comm = rec.constants().get(i, j, k) - rec.constants().get(j, i, k);
                    assert!((comm - p.lie.brackets().get(i, j, k)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn lsa_from_symplectic_rejects_bad_inputs() {
        let mut f = Tensor3::zeros(3);
        f.set(0, 1, 2, c(1.0, 0.0));
        f.set(1, 0, 2, c(-1.0, 0.0));
        let l = LieAlgebra::new(3, f).unwrap();
        let deg = BilinearForm::new(DMatrix::zeros(3, 3), FormRole::Generic).unwrap();
        assert!(matches!(lsa_from_symplectic(&l, &deg), Err(LsaError::Degenerate { .. })));
    }

    #[test]
    fn parakahler_reports() {
        let ai = catalog::instantiate_algebra("AI", &Default::default()).unwrap();
        let good = check_parakahler(&build_phase_space(&ai, &diag2(1.0, 2.0)).unwrap());
        assert!(good.verified, "{good:?}");

        // non-solution: (NV), r = diag(1,1) — Jacobi or cocycle must fail
        let nv = catalog::instantiate_algebra("NV", &Default::default()).unwrap();
        let bad_p = build_phase_space(&nv, &diag2(1.0, 1.0)).unwrap();
        assert!(!bad_p.verified);
        let bad = check_parakahler(&bad_p);
        assert!(!bad.verified);
        assert!(bad.jacobi > 1e-8 || bad.two_cocycle > 1e-8, "{bad:?}");

        let t2 = catalog::instantiate_algebra("T2", &Default::default()).unwrap();
        let sd = check_parakahler(&semidirect_phase_space(&t2).unwrap());
        assert!(sd.verified, "{sd:?}");
    }

    #[test]
    fn lie_isomorphism_basics() {
        let nv = catalog::instantiate_algebra("NV", &Default::default()).unwrap();
        let p = semidirect_phase_space(&nv).unwrap();
        let id = LinearMap::new(DMatrix::identity(4, 4)).unwrap();
        assert_eq!(verify_lie_isomorphism(&p.lie, &p.lie, &id).unwrap(), 0.0);

        // relabeled copy under a basis permutation
        let mut perm = DMatrix::zeros(4, 4);
        let order = [1usize, 0, 3, 2];
        for (new, &old) in order.iter().enumerate() {
            perm[(new, old)] = c(1.0, 0.0);
        }
        let f2 = Tensor3::from_fn(4, |i, j, k| {
            p.lie.brackets().get(order[i], order[j], order[k])
        });
        // f2 is the bracket in the permuted basis; the inverse permutation
        // is then an isomorphism from the original
        let l2 = LieAlgebra::new(4, f2).unwrap();
        let phim = LinearMap::new(perm.transpose()).unwrap();
        assert!(verify_lie_isomorphism(&p.lie, &l2, &phim).unwrap() < 1e-15);

        let sing = LinearMap::new(DMatrix::zeros(4, 4)).unwrap();
        assert!(matches!(
            verify_lie_isomorphism(&p.lie, &p.lie, &sing),
            Err(LsaError::SingularMap { .. })
        ));
    }

    #[test]
    fn theorem39_suite_ai() {
        let ai = catalog::instantiate_algebra("AI", &Default::default()).unwrap();
        let r = diag2(1.0, 2.0);
        let phi = theorem39_map(&ai, &r).unwrap();
        // e1* ↦ −e1 + e1*, e2* ↦ −2e2 + e2*
        assert_eq!(phi.matrix[(0, 2)], c(-1.0, 0.0));
        assert_eq!(phi.matrix[(1, 3)], c(-2.0, 0.0));

        let sd = semidirect_phase_space(&ai).unwrap();
        let def = build_phase_space(&ai, &r).unwrap();
        let rep = verify_symplectomorphism(&sd, &def, &phi).unwrap();
        assert!(rep.symplectic_isomorphism, "{rep:?}");
        assert!(rep.preserves_plus);
        assert!(!rep.preserves_minus); // r ≠ 0: φ(A*) ≠ A*
        assert!(!rep.parakahler_isomorphism);

        // r = 0: φ is the identity and everything is preserved
        let z = SymmetricTensor::zero(2);
        let phi0 = theorem39_map(&ai, &z).unwrap();
        assert_eq!(phi0.matrix, DMatrix::identity(4, 4));
        let rep0 = verify_symplectomorphism(&sd, &semidirect_phase_space(&ai).unwrap(), &phi0).unwrap();
        assert!(rep0.parakahler_isomorphism);
    }

    #[test]
    fn dual_bracket_matches_dual_product_commutator() {
        let nv = catalog::instantiate_algebra("NV", &Default::default()).unwrap();
        let r = diag2(2.0, 4.0);
        let p = build_phase_space(&nv, &r).unwrap();
        let d = dual_product(&nv, &r).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let comm = d.constants().get(i, j, k) - d.constants().get(j, i, k);
                    let br = p.lie.brackets().get(2 + i, 2 + j, 2 + k);
                    assert!((comm - br).norm() < 1e-12);
                }
            }
        }
    }
}
