//! Structure-constant representation of algebras, axiom checks, the
//! sub-adjacent Lie algebra, and the (dual) multiplication operators.

use nalgebra::{DMatrix, DVector};

use crate::error::LsaError;
use crate::tensor::{basis_vector, vec_max_norm, Tensor3};
use crate::{C64, DEFAULT_TOL};

/// Algebra given by a basis and the rank-3 tensor `c` with
/// `e_i·e_j = Σ_k c[i][j][k] e_k`. The product need not satisfy any axiom
/// at construction; `verified` records whether the left-symmetry check
/// passed.
#[derive(Debug, Clone)]
pub struct Algebra {
    dim: usize,
    basis_labels: Vec<String>,
    c: Tensor3,
    verified: bool,
}

impl Algebra {
    pub fn new(dim: usize, basis_labels: Vec<String>, c: Tensor3) -> Result<Self, LsaError> {
        if dim == 0 || c.dim() != dim {
            return Err(LsaError::DimensionMismatch { expected: dim, got: c.dim() });
        }
        if basis_labels.len() != dim {
            return Err(LsaError::DimensionMismatch { expected: dim, got: basis_labels.len() });
        }
        c.check_finite()?;
        let mut a = Algebra { dim, basis_labels, c, verified: false };
        a.verified = left_symmetry_residual(&a) < DEFAULT_TOL;
        Ok(a)
    }

    /// Builds from a sparse list of nonzero basis products (0-based indices).
    pub fn from_products(dim: usize, products: &[(usize, usize, usize, C64)]) -> Result<Self, LsaError> {
        let mut c = Tensor3::zeros(dim);
        for &(i, j, k, v) in products {
            if i >= dim || j >= dim || k >= dim {
                return Err(LsaError::IndexOutOfRange { index: i.max(j).max(k), dim });
            }
            c.set(i, j, k, v);
        }
        let labels = (1..=dim).map(|i| format!("e{i}")).collect();
        Algebra::new(dim, labels, c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn constants(&self) -> &Tensor3 {
        &self.c
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Coefficients of `x·y`.
    pub fn product(&self, x: &DVector<C64>, y: &DVector<C64>) -> DVector<C64> {
        self.c.apply(x, y)
    }

    /// Commutator `x·y − y·x`.
    pub fn commutator(&self, x: &DVector<C64>, y: &DVector<C64>) -> DVector<C64> {
        self.product(x, y) - self.product(y, x)
    }
}

/// Lie algebra with bracket `[x_i,x_j] = Σ_k f[i][j][k] x_k`. Antisymmetry
/// is enforced at construction (within tolerance) and then made exact by
/// antisymmetrization; the Jacobi residual is recorded.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    dim: usize,
    f: Tensor3,
    jacobi: f64,
}

impl LieAlgebra {
    pub fn new(dim: usize, f: Tensor3) -> Result<Self, LsaError> {
        Self::with_tolerance(dim, f, DEFAULT_TOL)
    }

    pub fn with_tolerance(dim: usize, f: Tensor3, tol: f64) -> Result<Self, LsaError> {
        if dim == 0 || f.dim() != dim {
            return Err(LsaError::DimensionMismatch { expected: dim, got: f.dim() });
        }
        f.check_finite()?;
        let mut defect: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    defect = defect.max((f.get(i, j, k) + f.get(j, i, k)).norm());
                }
            }
        }
        if defect > tol {
            return Err(LsaError::NotAntisymmetric { defect, tol });
        }
        let exact = Tensor3::from_fn(dim, |i, j, k| (f.get(i, j, k) - f.get(j, i, k)) * 0.5);
        let mut l = LieAlgebra { dim, f: exact, jacobi: 0.0 };
        l.jacobi = jacobi_residual(&l);
        Ok(l)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn brackets(&self) -> &Tensor3 {
        &self.f
    }

    pub fn recorded_jacobi(&self) -> f64 {
        self.jacobi
    }

    pub fn bracket(&self, x: &DVector<C64>, y: &DVector<C64>) -> DVector<C64> {
        self.f.apply(x, y)
    }
}

/// A complex `dim_out × dim_in` matrix acting on coefficient vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    pub dim_in: usize,
    pub dim_out: usize,
    pub matrix: DMatrix<C64>,
}

impl LinearOperator {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self, LsaError> {
        for v in matrix.iter() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(LsaError::NonFiniteEntry(vec![]));
            }
        }
        Ok(LinearOperator { dim_in: matrix.ncols(), dim_out: matrix.nrows(), matrix })
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.matrix * v
    }
}

/// Max over basis triples of the left-symmetry defect
/// `(e_i e_j)e_k − e_i(e_j e_k) − (e_j e_i)e_k + e_j(e_i e_k)` in
/// coefficient max-norm. Zero (up to tolerance) iff `A` is left-symmetric.
pub fn left_symmetry_residual(a: &Algebra) -> f64 {
    let n = a.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let ei = basis_vector(n, i);
        for j in 0..n {
            let ej = basis_vector(n, j);
            let eij = a.product(&ei, &ej);
            let eji = a.product(&ej, &ei);
            for k in 0..n {
                let ek = basis_vector(n, k);
                let ejk = a.product(&ej, &ek);
                let eik = a.product(&ei, &ek);
                let assoc = a.product(&eij, &ek) - a.product(&ei, &ejk)
                    - a.product(&eji, &ek)
                    + a.product(&ej, &eik);
                worst = worst.max(vec_max_norm(&assoc));
            }
        }
    }
    worst
}

/// Sub-adjacent Lie algebra: `f[i][j][k] = c[i][j][k] − c[j][i][k]`.
/// Rejects inputs that fail the left-symmetry check.
pub fn sub_adjacent(a: &Algebra) -> Result<LieAlgebra, LsaError> {
    sub_adjacent_with_tolerance(a, DEFAULT_TOL)
}

pub fn sub_adjacent_with_tolerance(a: &Algebra, tol: f64) -> Result<LieAlgebra, LsaError> {
    let residual = left_symmetry_residual(a);
    if residual > tol {
        return Err(LsaError::NotLeftSymmetric { residual, tol });
    }
    let n = a.dim();
    let f = Tensor3::from_fn(n, |i, j, k| a.c.get(i, j, k) - a.c.get(j, i, k));
    LieAlgebra::with_tolerance(n, f, tol)
}

/// Max-norm of the cyclic Jacobi sum `[[x_i,x_j],x_k] + [[x_j,x_k],x_i] +
/// [[x_k,x_i],x_j]` over all basis triples.
pub fn jacobi_residual(l: &LieAlgebra) -> f64 {
    let n = l.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let xi = basis_vector(n, i);
        for j in 0..n {
            let xj = basis_vector(n, j);
            let bij = l.bracket(&xi, &xj);
            for k in 0..n {
                let xk = basis_vector(n, k);
                let bjk = l.bracket(&xj, &xk);
                let bki = l.bracket(&xk, &xi);
                let cyc = l.bracket(&bij, &xk) + l.bracket(&bjk, &xi) + l.bracket(&bki, &xj);
                worst = worst.max(vec_max_norm(&cyc));
            }
        }
    }
    worst
}

/// Left multiplication by `e_i`: `(L_i)_{kj} = c[i][j][k]`.
pub fn left_mult(a: &Algebra, i: usize) -> Result<LinearOperator, LsaError> {
    let n = a.dim();
    if i >= n {
        return Err(LsaError::IndexOutOfRange { index: i, dim: n });
    }
    LinearOperator::new(DMatrix::from_fn(n, n, |k, j| a.c.get(i, j, k)))
}

/// Right multiplication by `e_i`: `(R_i)_{kj} = c[j][i][k]`.
pub fn right_mult(a: &Algebra, i: usize) -> Result<LinearOperator, LsaError> {
    let n = a.dim();
    if i >= n {
        return Err(LsaError::IndexOutOfRange { index: i, dim: n });
    }
    LinearOperator::new(DMatrix::from_fn(n, n, |k, j| a.c.get(j, i, k)))
}

/// Adjoint action of `e_i` on the sub-adjacent Lie algebra: `ad_i = L_i − R_i`.
pub fn ad(a: &Algebra, i: usize) -> Result<LinearOperator, LsaError> {
    let l = left_mult(a, i)?;
    let r = right_mult(a, i)?;
    LinearOperator::new(l.matrix - r.matrix)
}

/// Left multiplication by an arbitrary element `x = Σ x_i e_i`.
pub fn left_mult_vec(a: &Algebra, x: &DVector<C64>) -> DMatrix<C64> {
    let n = a.dim();
    DMatrix::from_fn(n, n, |k, j| (0..n).map(|i| x[i] * a.c.get(i, j, k)).sum())
}

/// Right multiplication by an arbitrary element.
pub fn right_mult_vec(a: &Algebra, x: &DVector<C64>) -> DMatrix<C64> {
    let n = a.dim();
    DMatrix::from_fn(n, n, |k, j| (0..n).map(|i| x[i] * a.c.get(j, i, k)).sum())
}

/// Adjoint action of an arbitrary element.
pub fn ad_vec(a: &Algebra, x: &DVector<C64>) -> DMatrix<C64> {
    left_mult_vec(a, x) - right_mult_vec(a, x)
}

/// Dual operator under the pairing convention
/// `⟨φ*(x)a*, y⟩ = −⟨a*, φ(x)y⟩`, i.e. `M ↦ −Mᵀ`.
pub fn dual_op(m: &LinearOperator) -> Result<LinearOperator, LsaError> {
    if m.dim_in != m.dim_out {
        return Err(LsaError::NotSquare { rows: m.dim_out, cols: m.dim_in });
    }
    LinearOperator::new(-m.matrix.transpose())
}

/// `−Mᵀ` on a raw matrix (the dual-representation convention above).
pub fn dual_matrix(m: &DMatrix<C64>) -> DMatrix<C64> {
    -m.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn nv() -> Algebra {
        // e1·e1 = 2e1, e1·e2 = e2, e2·e2 = e1
        Algebra::from_products(
            2,
            &[(0, 0, 0, c(2.0, 0.0)), (0, 1, 1, c(1.0, 0.0)), (1, 1, 0, c(1.0, 0.0))],
        )
        .unwrap()
    }

    fn abelian(n: usize) -> Algebra {
        Algebra::from_products(n, &[]).unwrap()
    }

    /// Independent oracle: expand the left-symmetry defect directly from the
    /// quadruple contraction of structure constants, no vector products.
    fn ls_oracle(a: &Algebra) -> f64 {
        let n = a.dim();
        let cc = a.constants();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for out in 0..n {
                        let mut s = c(0.0, 0.0);
                        for m in 0..n {
                            s += cc.get(i, j, m) * cc.get(m, k, out)
                                - cc.get(j, k, m) * cc.get(i, m, out)
                                - cc.get(j, i, m) * cc.get(m, k, out)
                                + cc.get(i, k, m) * cc.get(j, m, out);
                        }
                        worst = worst.max(s.norm());
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn nv_is_left_symmetric() {
        assert_eq!(left_symmetry_residual(&nv()), 0.0);
        assert_eq!(ls_oracle(&nv()), 0.0);
    }

    #[test]
    fn zero_products_are_left_symmetric() {
        assert_eq!(left_symmetry_residual(&abelian(2)), 0.0);
    }

    #[test]
    fn non_left_symmetric_example() {
        // e1·e2 = e1, e2·e1 = e2 only
        let a = Algebra::from_products(2, &[(0, 1, 0, c(1.0, 0.0)), (1, 0, 1, c(1.0, 0.0))]).unwrap();
        let r = left_symmetry_residual(&a);
        assert!(r > 0.5, "residual {r}");
        // value frozen from the brute-force expansion oracle
        assert!((r - ls_oracle(&a)).abs() < 1e-15);
        assert!(!a.is_verified());
    }

    #[test]
    fn residual_invariant_under_basis_permutation() {
        let a = Algebra::from_products(2, &[(0, 1, 0, c(1.0, 0.5)), (1, 0, 1, c(-2.0, 0.0))]).unwrap();
        // swap e1 <-> e2
        let perm = [1usize, 0];
        let cp = Tensor3::from_fn(2, |i, j, k| a.constants().get(perm[i], perm[j], perm[k]));
        let b = Algebra::new(2, a.basis_labels().to_vec(), cp).unwrap();
        assert!((left_symmetry_residual(&a) - left_symmetry_residual(&b)).abs() < 1e-15);
    }

    #[test]
    fn sub_adjacent_nv() {
        let l = sub_adjacent(&nv()).unwrap();
        // [e1,e2] = e2 (since e2·e1 = 0)
        assert_eq!(l.brackets().get(0, 1, 1), c(1.0, 0.0));
        assert_eq!(l.brackets().get(0, 1, 0), c(0.0, 0.0));
        assert_eq!(l.recorded_jacobi(), 0.0);
    }

    #[test]
    fn sub_adjacent_abelian() {
        let l = sub_adjacent(&abelian(2)).unwrap();
        assert_eq!(l.brackets().max_norm(), 0.0);
    }

    #[test]
    fn sub_adjacent_t2() {
        let t2 = catalog::instantiate_algebra("T2", &Default::default()).unwrap();
        let l = sub_adjacent(&t2).unwrap();
        // [e1,e2] = e2, [e1,e3] = e3/2, [e2,e3] = 0 (e2·e3 = e3·e2 = e1 cancel)
        assert_eq!(l.brackets().get(0, 1, 1), c(1.0, 0.0));
        assert_eq!(l.brackets().get(0, 2, 2), c(0.5, 0.0));
        for k in 0..3 {
            assert_eq!(l.brackets().get(1, 2, k), c(0.0, 0.0));
        }
    }

    #[test]
    fn sub_adjacent_rejects_non_left_symmetric() {
        let a = Algebra::from_products(2, &[(0, 1, 0, c(1.0, 0.0)), (1, 0, 1, c(1.0, 0.0))]).unwrap();
        assert!(matches!(sub_adjacent(&a), Err(LsaError::NotLeftSymmetric { .. })));
    }

    #[test]
    fn sub_adjacent_is_exactly_antisymmetric() {
        let l = sub_adjacent(&nv()).unwrap();
        let f = l.brackets();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert_eq!(f.get(i, j, k), -f.get(j, i, k));
                }
            }
        }
    }

    #[test]
    fn jacobi_fails_for_bad_bracket() {
        // [x1,x2]=x3, [x1,x3]=x1, antisymmetric completion, dim 3
        let mut f = Tensor3::zeros(3);
        f.set(0, 1, 2, c(1.0, 0.0));
        f.set(1, 0, 2, c(-1.0, 0.0));
        f.set(0, 2, 0, c(1.0, 0.0));
        f.set(2, 0, 0, c(-1.0, 0.0));
        let l = LieAlgebra::new(3, f).unwrap();
        // brute-force cyclic sum: [[x1,x2],x3] + [[x2,x3],x1] + [[x3,x1],x2]
        // = [x3,x3] + 0 + [-x1,x2] = -x3, so the residual is 1
        assert!((jacobi_residual(&l) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn left_mult_examples() {
        // (NV): L_{e1} = diag(2,1)
        let l = left_mult(&nv(), 0).unwrap();
        assert_eq!(l.matrix[(0, 0)], c(2.0, 0.0));
        assert_eq!(l.matrix[(1, 1)], c(1.0, 0.0));
        assert_eq!(l.matrix[(0, 1)], c(0.0, 0.0));

        // abelian: zero operator
        assert_eq!(left_mult(&abelian(2), 1).unwrap().matrix.norm(), 0.0);

        // (AII): e2·e1 = e1, e2·e2 = e2, so L_{e2} = identity
        let aii = catalog::instantiate_algebra("AII", &Default::default()).unwrap();
        let l2 = left_mult(&aii, 1).unwrap();
        assert_eq!(l2.matrix, DMatrix::identity(2, 2));
    }

    #[test]
    fn right_mult_and_dual_nv() {
        // (NV): e1·e2 = e2 ⇒ (R_{e2})_{21} = 1; e2·e2 = e1 ⇒ (R_{e2})_{12} = 1
        let r = right_mult(&nv(), 1).unwrap();
        assert_eq!(r.matrix[(1, 0)], c(1.0, 0.0));
        assert_eq!(r.matrix[(0, 1)], c(1.0, 0.0));
        let rd = dual_op(&r).unwrap();
        assert_eq!(rd.matrix, -r.matrix.transpose());
    }

    #[test]
    fn dual_op_examples() {
        let d = LinearOperator::new(DMatrix::from_diagonal(&DVector::from_vec(vec![
            c(2.0, 0.0),
            c(1.0, 0.0),
        ])))
        .unwrap();
        let dd = dual_op(&d).unwrap();
        assert_eq!(dd.matrix[(0, 0)], c(-2.0, 0.0));
        assert_eq!(dd.matrix[(1, 1)], c(-1.0, 0.0));
        // involution
        assert_eq!(dual_op(&dd).unwrap().matrix, d.matrix);
        // zero maps to zero
        let z = LinearOperator::new(DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(dual_op(&z).unwrap().matrix.norm(), 0.0);
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(left_mult(&nv(), 5), Err(LsaError::IndexOutOfRange { .. })));
    }

    #[test]
    fn regular_representation_property() {
        // [L_x, L_y] = L_{[x,y]} for left-symmetric algebras (all catalog ids)
        for id in catalog::algebra_ids() {
            let a = catalog::instantiate_default(id).unwrap();
            let n = a.dim();
            for x in 0..n {
                for y in 0..n {
                    let lx = left_mult(&a, x).unwrap().matrix;
                    let ly = left_mult(&a, y).unwrap().matrix;
                    let comm = &lx * &ly - &ly * &lx;
                    let xv = basis_vector(n, x);
                    let yv = basis_vector(n, y);
                    let br = a.commutator(&xv, &yv);
                    let lbr = left_mult_vec(&a, &br);
                    assert!((comm - lbr).norm() < 1e-12, "failed for {id} ({x},{y})");
                }
            }
        }
    }
}
