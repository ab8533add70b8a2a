//! JSON representations shared by the CLI and external tooling.
//!
//! Conventions: complex numbers are `[re, im]` pairs; basis indices in
//! product/bracket lists are 1-based; omitted index pairs mean a zero
//! product. Floats are emitted in shortest round-trip form.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::LsaError;
use crate::phase::PhaseSpace;
use crate::sequation::SymmetricTensor;
use crate::tensor::Tensor3;
use crate::C64;

pub type Cx = [f64; 2];

fn cx(v: C64) -> Cx {
    [v.re, v.im]
}

fn uncx(p: Cx) -> C64 {
    C64::new(p[0], p[1])
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductJson {
    pub left: usize,
    pub right: usize,
    pub coeffs: Vec<Cx>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub basis: Vec<String>,
    pub products: Vec<ProductJson>,
}

fn tensor_products(t: &Tensor3) -> Vec<ProductJson> {
    let n = t.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let coeffs: Vec<Cx> = (0..n).map(|k| cx(t.get(i, j, k))).collect();
            if coeffs.iter().any(|c| c[0] != 0.0 || c[1] != 0.0) {
                out.push(ProductJson { left: i + 1, right: j + 1, coeffs });
            }
        }
    }
    out
}

fn products_tensor(dim: usize, products: &[ProductJson]) -> Result<Tensor3, LsaError> {
    let mut t = Tensor3::zeros(dim);
    for p in products {
        if p.left == 0 || p.right == 0 || p.left > dim || p.right > dim {
            return Err(LsaError::InvalidInput {
                field: "products".into(),
                message: format!("index pair ({}, {}) outside 1..{dim}", p.left, p.right),
            });
        }
        if p.coeffs.len() != dim {
            return Err(LsaError::InvalidInput {
                field: "coeffs".into(),
                message: format!("expected {dim} coefficients, got {}", p.coeffs.len()),
            });
        }
        for (k, c) in p.coeffs.iter().enumerate() {
            t.set(p.left - 1, p.right - 1, k, uncx(*c));
        }
    }
    t.check_finite()?;
    Ok(t)
}

pub fn algebra_to_json(a: &Algebra) -> AlgebraJson {
    AlgebraJson {
        dim: a.dim(),
        basis: a.basis_labels().to_vec(),
        products: tensor_products(a.constants()),
    }
}

pub fn algebra_from_json(j: &AlgebraJson) -> Result<Algebra, LsaError> {
    if j.dim == 0 {
        return Err(LsaError::InvalidInput { field: "dim".into(), message: "must be positive".into() });
    }
    let basis = if j.basis.is_empty() {
        (1..=j.dim).map(|i| format!("e{i}")).collect()
    } else {
        j.basis.clone()
    };
    Algebra::new(j.dim, basis, products_tensor(j.dim, &j.products)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetricTensorJson {
    pub dim: usize,
    pub r: Vec<Vec<Cx>>,
}

pub fn tensor_to_json(r: &SymmetricTensor) -> SymmetricTensorJson {
    SymmetricTensorJson { dim: r.dim(), r: matrix_to_rows(r.matrix()) }
}

pub fn tensor_from_json(j: &SymmetricTensorJson) -> Result<SymmetricTensor, LsaError> {
    SymmetricTensor::new(matrix_from_rows(j.dim, j.dim, &j.r)?)
}

pub fn matrix_to_rows(m: &DMatrix<C64>) -> Vec<Vec<Cx>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| cx(m[(i, j)])).collect()).collect()
}

pub fn matrix_from_rows(nrows: usize, ncols: usize, rows: &[Vec<Cx>]) -> Result<DMatrix<C64>, LsaError> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(LsaError::InvalidInput {
            field: "r".into(),
            message: format!("expected {nrows}x{ncols} matrix"),
        });
    }
    let m = DMatrix::from_fn(nrows, ncols, |i, j| uncx(rows[i][j]));
    for v in m.iter() {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(LsaError::NonFiniteEntry(vec![]));
        }
    }
    Ok(m)
}

/// Residual record shared by the verification verbs. `worst_indices` are
/// 1-based and present only where a worst entry is meaningful.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualReport {
    pub norm: f64,
    pub tolerance: f64,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_indices: Option<Vec<usize>>,
}

impl ResidualReport {
    pub fn new(norm: f64, tolerance: f64, worst: Option<(usize, usize, usize)>) -> Self {
        ResidualReport {
            norm,
            tolerance,
            verified: norm < tolerance,
            worst_indices: worst.map(|(i, j, k)| vec![i + 1, j + 1, k + 1]),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProvenanceJson {
    pub algebra: Option<String>,
    pub r: Vec<Vec<Cx>>,
}

/// Basis ordering is always `(e_1..e_n, e_1*..e_n*)`; the `basis` field
/// spells it out.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseSpaceJson {
    pub n: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<ProductJson>,
    pub omega: Vec<Vec<Cx>>,
    pub provenance: ProvenanceJson,
    pub verified: bool,
}

pub fn phase_space_to_json(p: &PhaseSpace, algebra_id: Option<&str>) -> PhaseSpaceJson {
    let n = p.half_dim();
    let mut basis: Vec<String> = p.base.basis_labels().to_vec();
    basis.extend(p.base.basis_labels().iter().map(|l| format!("{l}*")));
    PhaseSpaceJson {
        n,
        basis,
        brackets: tensor_products(p.lie.brackets()),
        omega: matrix_to_rows(&p.omega.mat),
        provenance: ProvenanceJson {
            algebra: algebra_id.map(|s| s.to_string()),
            r: matrix_to_rows(p.r.matrix()),
        },
        verified: p.verified,
    }
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(s: &str, what: &str) -> Result<T, LsaError> {
    serde_json::from_str(s).map_err(|e| LsaError::InvalidInput {
        field: what.to_string(),
        message: e.to_string(),
    })
}
