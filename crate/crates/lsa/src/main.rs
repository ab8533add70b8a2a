use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use lsa::algebra::{jacobi_residual, left_symmetry_residual, sub_adjacent_with_tolerance};
use lsa::catalog::{self, Params};
use lsa::io;
use lsa::phase::{
    build_phase_space_with_tolerance, check_parakahler_with_tolerance, semidirect_phase_space,
    theorem39_map, verify_symplectomorphism_with_tolerance, LinearMap,
};
use lsa::sequation::{
    dual_product, s_residual_operator, s_residual_tensor, SymmetricTensor,
};
use lsa::solver::{self, SolveConfig};
use lsa::{Algebra, C64};

/// Verify, construct, and solve: left-symmetric algebras, the S-equation,
/// and the phase spaces they generate. All reports are JSON on stdout;
/// exit 0 = checks passed, 1 = a check failed, 2 = usage or input error.
#[derive(Parser)]
#[command(name = "lsa", version)]
struct Cli {
    /// Residual tolerance for every verification in this invocation.
    #[arg(long, global = true, default_value_t = lsa::DEFAULT_TOL)]
    tolerance: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct AlgebraArgs {
    /// Catalog algebra id (e.g. NV, NII_k, T1_lambda).
    #[arg(long)]
    catalog: Option<String>,
    /// Path to an algebra JSON file (alternative to --catalog).
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Comma-separated complex parameters, e.g. "k=2" or "r11=1+2i,r22=-i".
    #[arg(long)]
    params: Option<String>,
}

#[derive(Args)]
struct RArgs {
    /// Path to a symmetric-tensor JSON file.
    #[arg(long)]
    r: Option<PathBuf>,
    /// Catalog solution-family id (alternative to --r; uses --params).
    #[arg(long)]
    family: Option<String>,
    /// Branch tag for families carrying a ± choice.
    #[arg(long)]
    branch: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the left-symmetry axiom.
    Verify(AlgebraArgs),
    /// Emit the sub-adjacent Lie algebra and its Jacobi residual.
    SubAdjacent(AlgebraArgs),
    /// Evaluate the S-equation residual (tensor and operator forms).
    SResidual {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        r: RArgs,
    },
    /// Emit the left-symmetric product induced on the dual space.
    DualProduct {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        r: RArgs,
    },
    /// Build the phase space on A ⊕ A* determined by r.
    BuildPhase {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        r: RArgs,
    },
    /// Build the phase space and run the full parakähler verification.
    CheckParakahler {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        r: RArgs,
    },
    /// Verify a supplied linear map between the semidirect and deformed
    /// phase spaces of the same algebra.
    CheckIso {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        r: RArgs,
        /// Path to a 2n×2n matrix JSON file (rows of [re,im] pairs).
        #[arg(long)]
        map: PathBuf,
    },
    /// Verify the explicit deformation isomorphism x ↦ x, a* ↦ −r(a*)+a*.
    Theorem39 {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        r: RArgs,
    },
    /// Multi-start numerical search for symmetric S-equation solutions.
    Solve {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 500)]
        starts: usize,
        /// Random seed (defaults to LSA_SEED, then 0).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-12)]
        newton_tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        cluster_tol: f64,
        #[arg(long, default_value_t = 2.0)]
        sample_radius: f64,
    },
    /// Registry access: list ids, export generators, or run the sweep.
    Catalog {
        #[command(subcommand)]
        sub: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Print all algebra and family ids.
    List,
    /// Emit the full registry with constraint metadata.
    Export,
    /// Random-draw regression sweep over every family and branch.
    Sweep {
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_complex(s: &str) -> Result<C64> {
    let s = s.trim();
    let err = || anyhow!("cannot parse complex number `{s}` (use forms like 2, -0.5, 1+2i, -i)");
    if let Ok(re) = s.parse::<f64>() {
        return Ok(C64::new(re, 0.0));
    }
    if let Some(im_part) = s.strip_suffix('i') {
        // pure imaginary or a+bi: split at the last +/- that is not an exponent sign
        let bytes = im_part.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx] as char;
            if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
                split = Some(idx);
                break;
            }
        }
        let (re_s, im_s) = match split {
            Some(idx) => (&im_part[..idx], &im_part[idx..]),
            None => ("0", im_part),
        };
        let re = if re_s.is_empty() { 0.0 } else { re_s.parse::<f64>().map_err(|_| err())? };
        let im = match im_s {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => im_s.parse::<f64>().map_err(|_| err())?,
        };
        return Ok(C64::new(re, im));
    }
    Err(err())
}

fn parse_params(spec: &Option<String>) -> Result<Params> {
    let mut out = Params::new();
    if let Some(spec) = spec {
        for piece in spec.split(',').filter(|p| !p.trim().is_empty()) {
            let (name, value) = piece
                .split_once('=')
                .ok_or_else(|| anyhow!("parameter `{piece}` is not of the form name=value"))?;
            out.insert(name.trim().to_string(), parse_complex(value)?);
        }
    }
    Ok(out)
}

fn read_json<T: for<'de> serde::Deserialize<'de>>(path: &PathBuf, what: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {what} file {}", path.display()))?;
    io::parse_json(&text, what).map_err(|e| anyhow!("{e}"))
}

struct Inputs {
    algebra: Algebra,
    algebra_id: Option<String>,
}

fn load_algebra(args: &AlgebraArgs, params: &Params) -> Result<Inputs> {
    match (&args.catalog, &args.algebra) {
        (Some(id), None) => Ok(Inputs {
            algebra: catalog::instantiate_algebra(id, params)?,
            algebra_id: Some(id.clone()),
        }),
        (None, Some(path)) => {
            let j: io::AlgebraJson = read_json(path, "algebra")?;
            Ok(Inputs { algebra: io::algebra_from_json(&j)?, algebra_id: None })
        }
        _ => bail!("exactly one of --catalog or --algebra is required"),
    }
}

/// Resolves (algebra, r). With --family the algebra is the family's own
/// (validated against --catalog when both are given).
fn load_pair(aargs: &AlgebraArgs, rargs: &RArgs) -> Result<(Inputs, SymmetricTensor)> {
    let params = parse_params(&aargs.params)?;
    match (&rargs.r, &rargs.family) {
        (Some(path), None) => {
            let inputs = load_algebra(aargs, &params)?;
            let j: io::SymmetricTensorJson = read_json(path, "symmetric tensor")?;
            Ok((inputs, io::tensor_from_json(&j)?))
        }
        (None, Some(fam)) => {
            let entry = catalog::family_entry(fam)?;
            if let Some(cat) = &aargs.catalog {
                if cat != entry.algebra_id {
                    bail!("family {fam} belongs to algebra {}, not {cat}", entry.algebra_id);
                }
            }
            let algebra = catalog::family_algebra(fam, &params)?;
            let r = catalog::instantiate_family(fam, &params, rargs.branch.as_deref())?;
            Ok((Inputs { algebra, algebra_id: Some(entry.algebra_id.to_string()) }, r))
        }
        _ => bail!("exactly one of --r or --family is required"),
    }
}

fn env_seed() -> u64 {
    std::env::var("LSA_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0)
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    use std::io::Write;
    let text = serde_json::to_string_pretty(value)?;
    // exit quietly when the consumer closes the pipe (e.g. `| head`)
    if let Err(e) = writeln!(std::io::stdout(), "{text}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        return Err(e.into());
    }
    Ok(())
}

#[derive(Serialize)]
struct SResidualOut {
    norm: f64,
    operator_norm: f64,
    tolerance: f64,
    verified: bool,
    worst_indices: Vec<usize>,
}

#[derive(Serialize)]
struct ClusterOut {
    r: Vec<Vec<[f64; 2]>>,
    multiplicity: usize,
    abs_det: f64,
    residual: f64,
    matched_families: Vec<MatchOut>,
}

#[derive(Serialize)]
struct MatchOut {
    family: String,
    fit_residual: f64,
    branch: Option<String>,
}

#[derive(Serialize)]
struct SolveOut {
    starts: usize,
    seed: u64,
    converged_starts: usize,
    identically_zero: bool,
    invertible_solution_found: bool,
    clusters: Vec<ClusterOut>,
}

fn run(cli: Cli) -> Result<i32> {
    let tol = cli.tolerance;
    match cli.cmd {
        Cmd::Verify(args) => {
            let params = parse_params(&args.params)?;
            let inputs = load_algebra(&args, &params)?;
            let norm = left_symmetry_residual(&inputs.algebra);
            let report = io::ResidualReport::new(norm, tol, None);
            emit(&report)?;
            Ok(if report.verified { 0 } else { 1 })
        }
        Cmd::SubAdjacent(args) => {
            let params = parse_params(&args.params)?;
            let inputs = load_algebra(&args, &params)?;
            let ls = left_symmetry_residual(&inputs.algebra);
            if ls > tol {
                emit(&io::ResidualReport::new(ls, tol, None))?;
                return Ok(1);
            }
            let l = sub_adjacent_with_tolerance(&inputs.algebra, tol)?;
            #[derive(Serialize)]
            struct Out {
                dim: usize,
                brackets: Vec<io::ProductJson>,
                jacobi_residual: f64,
                verified: bool,
            }
            let jac = jacobi_residual(&l);
            let a = Algebra::new(
                l.dim(),
                inputs.algebra.basis_labels().to_vec(),
                l.brackets().clone(),
            )?;
            emit(&Out {
                dim: l.dim(),
                brackets: io::algebra_to_json(&a).products,
                jacobi_residual: jac,
                verified: jac < tol,
            })?;
            Ok(if jac < tol { 0 } else { 1 })
        }
        Cmd::SResidual { algebra, r } => {
            let (inputs, r) = load_pair(&algebra, &r)?;
            let sres = s_residual_tensor(&inputs.algebra, &r)?;
            let op = s_residual_operator(&inputs.algebra, &r)?;
            let (i, j, k) = sres.worst_indices;
            let out = SResidualOut {
                norm: sres.norm,
                operator_norm: op,
                tolerance: tol,
                verified: sres.norm < tol,
                worst_indices: vec![i + 1, j + 1, k + 1],
            };
            emit(&out)?;
            Ok(if out.verified { 0 } else { 1 })
        }
        Cmd::DualProduct { algebra, r } => {
            let (inputs, r) = load_pair(&algebra, &r)?;
            let d = dual_product(&inputs.algebra, &r)?;
            #[derive(Serialize)]
            struct Out {
                algebra: io::AlgebraJson,
                s_residual: f64,
                /// True when r solves the S-equation, so the product is a
                /// left-symmetric structure on the dual.
                verified: bool,
            }
            let sres = s_residual_tensor(&inputs.algebra, &r)?.norm;
            let out = Out { algebra: io::algebra_to_json(&d), s_residual: sres, verified: sres < tol };
            emit(&out)?;
            Ok(if out.verified { 0 } else { 1 })
        }
        Cmd::BuildPhase { algebra, r } => {
            let (inputs, r) = load_pair(&algebra, &r)?;
            let p = build_phase_space_with_tolerance(&inputs.algebra, &r, tol)?;
            emit(&io::phase_space_to_json(&p, inputs.algebra_id.as_deref()))?;
            Ok(if p.verified { 0 } else { 1 })
        }
        Cmd::CheckParakahler { algebra, r } => {
            let (inputs, r) = load_pair(&algebra, &r)?;
            let p = build_phase_space_with_tolerance(&inputs.algebra, &r, tol)?;
            let rep = check_parakahler_with_tolerance(&p, tol);
            #[derive(Serialize)]
            struct Out {
                jacobi: f64,
                omega_antisymmetry: f64,
                omega_abs_det: f64,
                two_cocycle: f64,
                closure_plus: f64,
                closure_minus: f64,
                isotropy_plus: f64,
                isotropy_minus: f64,
                tolerance: f64,
                verified: bool,
            }
            emit(&Out {
                jacobi: rep.jacobi,
                omega_antisymmetry: rep.omega_antisymmetry,
                omega_abs_det: rep.omega_abs_det,
                two_cocycle: rep.two_cocycle,
                closure_plus: rep.closure_plus,
                closure_minus: rep.closure_minus,
                isotropy_plus: rep.isotropy_plus,
                isotropy_minus: rep.isotropy_minus,
                tolerance: rep.tolerance,
                verified: rep.verified,
            })?;
            Ok(if rep.verified { 0 } else { 1 })
        }
        Cmd::CheckIso { algebra, r, map } => {
            let (inputs, r) = load_pair(&algebra, &r)?;
            let n = inputs.algebra.dim();
            let rows: Vec<Vec<[f64; 2]>> = read_json(&map, "map")?;
            let m = io::matrix_from_rows(2 * n, 2 * n, &rows)?;
            let phi = LinearMap::new(m)?;
            let p1 = semidirect_phase_space(&inputs.algebra)?;
            let p2 = build_phase_space_with_tolerance(&inputs.algebra, &r, tol)?;
            let rep = verify_symplectomorphism_with_tolerance(&p1, &p2, &phi, tol)?;
            emit_symplecto(&rep)?;
            Ok(if rep.symplectic_isomorphism { 0 } else { 1 })
        }
        Cmd::Theorem39 { algebra, r } => {
            let (inputs, r) = load_pair(&algebra, &r)?;
            let phi = theorem39_map(&inputs.algebra, &r)?;
            let p1 = semidirect_phase_space(&inputs.algebra)?;
            let p2 = build_phase_space_with_tolerance(&inputs.algebra, &r, tol)?;
            let rep = verify_symplectomorphism_with_tolerance(&p1, &p2, &phi, tol)?;
            emit_symplecto(&rep)?;
            Ok(if rep.symplectic_isomorphism { 0 } else { 1 })
        }
        Cmd::Solve { algebra, starts, seed, max_iters, newton_tol, cluster_tol, sample_radius } => {
            let params = parse_params(&algebra.params)?;
            let inputs = load_algebra(&algebra, &params)?;
            let cfg = SolveConfig {
                starts,
                seed: seed.unwrap_or_else(env_seed),
                max_iters,
                newton_tol,
                cluster_tol,
                sample_radius,
            };
            let set = solver::solve(&inputs.algebra, &cfg)?;
            let fams: Vec<&str> = inputs
                .algebra_id
                .as_deref()
                .map(catalog::families_for)
                .unwrap_or_default();
            let clusters = set
                .solutions
                .iter()
                .enumerate()
                .map(|(idx, sol)| {
                    let matched = fams
                        .iter()
                        .filter_map(|f| {
                            catalog::family_membership(f, sol, &params, cfg.cluster_tol).ok()
                        })
                        .filter(|fit| fit.matched)
                        .map(|fit| MatchOut {
                            family: fit.family,
                            fit_residual: fit.residual,
                            branch: fit.branch,
                        })
                        .collect();
                    ClusterOut {
                        r: io::matrix_to_rows(sol.matrix()),
                        multiplicity: set.multiplicity[idx],
                        abs_det: set.det[idx],
                        residual: set.residual[idx],
                        matched_families: matched,
                    }
                })
                .collect();
            let inv = solver::invertibility_report(&set, cfg.cluster_tol);
            emit(&SolveOut {
                starts: cfg.starts,
                seed: cfg.seed,
                converged_starts: set.converged_starts,
                identically_zero: set.identically_zero,
                invertible_solution_found: inv.invertible_found,
                clusters,
            })?;
            Ok(0)
        }
        Cmd::Catalog { sub } => match sub {
            CatalogCmd::List => {
                #[derive(Serialize)]
                struct Out {
                    algebras: Vec<&'static str>,
                    families: Vec<&'static str>,
                }
                emit(&Out { algebras: catalog::algebra_ids(), families: catalog::family_ids() })?;
                Ok(0)
            }
            CatalogCmd::Export => {
                #[derive(Serialize)]
                struct Out {
                    algebras: &'static [catalog::AlgebraEntry],
                    families: &'static [catalog::FamilyEntry],
                }
                emit(&Out {
                    algebras: catalog::ALGEBRA_ENTRIES,
                    families: catalog::FAMILY_ENTRIES,
                })?;
                Ok(0)
            }
            CatalogCmd::Sweep { samples, seed } => {
                let report = catalog::regression_sweep_with_tolerance(
                    samples,
                    seed.unwrap_or_else(env_seed),
                    tol,
                );
                emit(&report)?;
                Ok(if report.all_passed { 0 } else { 1 })
            }
        },
    }
}

fn emit_symplecto(rep: &lsa::phase::SymplectoReport) -> Result<()> {
    #[derive(Serialize)]
    struct Out {
        lie_residual: f64,
        pullback_residual: f64,
        preserves_g_plus: bool,
        preserves_g_minus: bool,
        plus_escape: f64,
        minus_escape: f64,
        tolerance: f64,
        symplectic_isomorphism: bool,
        parakahler_isomorphism: bool,
    }
    emit(&Out {
        lie_residual: rep.lie_residual,
        pullback_residual: rep.pullback_residual,
        preserves_g_plus: rep.preserves_plus,
        preserves_g_minus: rep.preserves_minus,
        plus_escape: rep.plus_escape,
        minus_escape: rep.minus_escape,
        tolerance: rep.tolerance,
        symplectic_isomorphism: rep.symplectic_isomorphism,
        parakahler_isomorphism: rep.parakahler_isomorphism,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
