//! Multi-start Gauss–Newton search for symmetric solutions of the
//! S-equation. The residual map is the coordinate form of `[[r,r]]`
//! (n³ quadratic equations in the n(n+1)/2 independent entries of `r`),
//! so the Jacobian is exactly the polarized bilinear form and needs no
//! differencing.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{left_symmetry_residual, Algebra};
use crate::error::LsaError;
use crate::sequation::{s_polarized, s_residual_tensor, SymmetricTensor};
use crate::tensor::Tensor3;
use crate::C64;

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub starts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub newton_tol: f64,
    pub cluster_tol: f64,
    pub sample_radius: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            starts: 500,
            seed: 0,
            max_iters: 100,
            newton_tol: 1e-12,
            cluster_tol: 1e-6,
            sample_radius: 2.0,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<(), LsaError> {
        let ok = self.starts > 0
            && self.max_iters > 0
            && self.newton_tol > 0.0
            && self.cluster_tol > self.newton_tol
            && self.sample_radius > 0.0;
        if !ok {
            return Err(LsaError::InvalidInput {
                field: "config".into(),
                message: "all fields positive and cluster_tol > newton_tol required".into(),
            });
        }
        Ok(())
    }
}

/// Clustered converged points. Solutions lie on positive-dimensional
/// varieties, so clusters are representatives of wherever the iteration
/// landed, not isolated roots; classify them with `family_membership`.
#[derive(Debug, Clone)]
pub struct SolutionSet {
    pub solutions: Vec<SymmetricTensor>,
    pub multiplicity: Vec<usize>,
    pub det: Vec<f64>,
    pub residual: Vec<f64>,
    /// True when the residual map vanishes identically (abelian case):
    /// every symmetric tensor is a solution and the single reported
    /// cluster (r = 0) stands for the whole space.
    pub identically_zero: bool,
    pub converged_starts: usize,
}

fn unknown_indices(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(n * (n + 1) / 2);
    for p in 0..n {
        for q in p..n {
            v.push((p, q));
        }
    }
    v
}

fn flatten(t: &Tensor3) -> DVector<C64> {
    let n = t.dim();
    DVector::from_fn(n * n * n, |idx, _| {
        let k = idx % n;
        let j = (idx / n) % n;
        let i = idx / (n * n);
        t.get(i, j, k)
    })
}

fn residual_vec(a: &Algebra, r: &DMatrix<C64>) -> DVector<C64> {
    flatten(&s_polarized(a, r, r))
}

fn basis_direction(n: usize, p: usize, q: usize) -> DMatrix<C64> {
    let mut e = DMatrix::zeros(n, n);
    e[(p, q)] = C64::new(1.0, 0.0);
    e[(q, p)] = C64::new(1.0, 0.0);
    e
}

/// One Gauss–Newton run from `start`; returns the converged symmetric
/// tensor and its final residual norm, or `None` on divergence.
///
/// The residual map is homogeneous quadratic in `r`, so its zero set is a
/// union of cones through the origin and the exact Gauss–Newton step from
/// any point is `−r/2`: unconstrained iteration drains every start into
/// the trivial solution. One affine gauge equation `⟨start, r⟩ = ‖start‖²`
/// (complex-linear, so it meets every cone component transversally) pins
/// the scale near the start and lets the iteration land on nonzero
/// representatives.
pub fn refine(
    a: &Algebra,
    start: &DMatrix<C64>,
    max_iters: usize,
    newton_tol: f64,
) -> Option<(SymmetricTensor, f64)> {
    let n = a.dim();
    let unknowns = unknown_indices(n);
    let m = unknowns.len();
    let mut r = (start + start.transpose()) * C64::new(0.5, 0.0);

    // gauge functional: conjugate start direction, unit-normalized; a zero
    // start degenerates gracefully (F(0) = 0 converges immediately)
    let mut gauge = DVector::<C64>::zeros(m);
    for (col, &(p, q)) in unknowns.iter().enumerate() {
        gauge[col] = r[(p, q)].conj();
    }
    let gnorm = gauge.norm();
    if gnorm > 0.0 {
        gauge /= C64::new(gnorm, 0.0);
    }
    let gauge_target: C64 = (0..m).map(|col| gauge[col] * r[(unknowns[col].0, unknowns[col].1)]).sum();
    let gauge_resid = |r: &DMatrix<C64>| -> C64 {
        (0..m).map(|col| gauge[col] * r[(unknowns[col].0, unknowns[col].1)]).sum::<C64>()
            - gauge_target
    };
    let objective = |f: &DVector<C64>, g: C64| (f.norm() * f.norm() + g.norm_sqr()).sqrt();

    let scale = |r: &DMatrix<C64>| 1.0 + r.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let finish = |r: DMatrix<C64>| -> Option<(SymmetricTensor, f64)> {
        let t = SymmetricTensor::new(r).ok()?;
        let res = s_residual_tensor(a, &t).ok()?.norm;
        Some((t, res))
    };

    let mut f = residual_vec(a, &r);
    let mut g = gauge_resid(&r);
    for _ in 0..max_iters {
        if objective(&f, g) < newton_tol * scale(&r) {
            return finish(r);
        }
        let mut jac = DMatrix::zeros(n * n * n + 1, m);
        for (col, &(p, q)) in unknowns.iter().enumerate() {
            let e = basis_direction(n, p, q);
            let d = flatten(&s_polarized(a, &e, &r)) + flatten(&s_polarized(a, &r, &e));
            for row in 0..n * n * n {
                jac[(row, col)] = d[row];
            }
            jac[(n * n * n, col)] = gauge[col];
        }
        let mut rhs = DVector::zeros(n * n * n + 1);
        for row in 0..n * n * n {
            rhs[row] = -f[row];
        }
        rhs[n * n * n] = -g;
        let svd = jac.svd(true, true);
        let step = svd.solve(&rhs, 1e-10).ok()?;
        // step halving when the full update overshoots
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..25 {
            let mut cand = r.clone();
            for (col, &(p, q)) in unknowns.iter().enumerate() {
                let d = step[col] * C64::new(lambda, 0.0);
                cand[(p, q)] += d;
                if p != q {
                    cand[(q, p)] += d;
                }
            }
            let fc = residual_vec(a, &cand);
            let gc = gauge_resid(&cand);
            if objective(&fc, gc) < objective(&f, g) {
                r = cand;
                f = fc;
                g = gc;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            return None;
        }
    }
    if objective(&f, g) < newton_tol * scale(&r) {
        finish(r)
    } else {
        None
    }
}

/// Multi-start solve. Deterministic for fixed `(a, cfg)`: starts are
/// drawn sequentially from a seeded generator and clustered in order.
pub fn solve(a: &Algebra, cfg: &SolveConfig) -> Result<SolutionSet, LsaError> {
    cfg.validate()?;
    let ls = left_symmetry_residual(a);
    if ls > crate::DEFAULT_TOL {
        return Err(LsaError::NotLeftSymmetric { residual: ls, tol: crate::DEFAULT_TOL });
    }
    let n = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // identically-zero residual map: probe a few random tensors
    let mut probe_zero = true;
    for _ in 0..3 {
        let probe = random_symmetric(n, &mut rng, cfg.sample_radius);
        if residual_vec(a, &probe).norm() > 1e-13 {
            probe_zero = false;
            break;
        }
    }
    if probe_zero {
        let zero = SymmetricTensor::zero(n);
        return Ok(SolutionSet {
            solutions: vec![zero],
            multiplicity: vec![cfg.starts],
            det: vec![0.0],
            residual: vec![0.0],
            identically_zero: true,
            converged_starts: cfg.starts,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut converged: Vec<(SymmetricTensor, f64)> = Vec::new();
    for _ in 0..cfg.starts {
        let start = random_symmetric(n, &mut rng, cfg.sample_radius);
        if let Some(hit) = refine(a, &start, cfg.max_iters, cfg.newton_tol) {
            converged.push(hit);
        }
    }

    let mut solutions: Vec<SymmetricTensor> = Vec::new();
    let mut multiplicity: Vec<usize> = Vec::new();
    let mut residual: Vec<f64> = Vec::new();
    for (t, res) in &converged {
        let mut found = None;
        for (idx, rep) in solutions.iter().enumerate() {
            let d = (t.matrix() - rep.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            if d < cfg.cluster_tol {
                found = Some(idx);
                break;
            }
        }
        match found {
            Some(idx) => multiplicity[idx] += 1,
            None => {
                solutions.push(t.clone());
                multiplicity.push(1);
                residual.push(*res);
            }
        }
    }
    let det = solutions.iter().map(|t| t.determinant().norm()).collect();
    Ok(SolutionSet {
        solutions,
        multiplicity,
        det,
        residual,
        identically_zero: false,
        converged_starts: converged.len(),
    })
}

fn random_symmetric(n: usize, rng: &mut ChaCha8Rng, radius: f64) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(n, n);
    for p in 0..n {
        for q in p..n {
            let v = loop {
                let v = C64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius));
                if v.norm() <= radius {
                    break v;
                }
            };
            m[(p, q)] = v;
            m[(q, p)] = v;
        }
    }
    m
}

/// Per-cluster |det r| plus whether any cluster is invertible at the
/// clustering tolerance. When the residual map vanishes identically every
/// invertible symmetric tensor is a solution, so invertibility holds even
/// though the single representative cluster is r = 0. A negative answer
/// is evidence from finitely many starts, never a proof of non-existence.
#[derive(Debug, Clone)]
pub struct InvertibilityReport {
    pub dets: Vec<f64>,
    pub threshold: f64,
    pub invertible_found: bool,
    pub starts_converged: usize,
}

pub fn invertibility_report(s: &SolutionSet, threshold: f64) -> InvertibilityReport {
    InvertibilityReport {
        dets: s.det.clone(),
        threshold,
        invertible_found: s.identically_zero || s.det.iter().any(|d| *d > threshold),
        starts_converged: s.converged_starts,
    }
}

/// Re-export of the catalog fit so solver callers can classify clusters.
pub use crate::catalog::{family_membership, MembershipFit};
