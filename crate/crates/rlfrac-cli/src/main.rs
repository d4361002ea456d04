//! `rlfrac` — build, solve, and verify Riemann-Liouville fractional
//! resolvent / cosine families from the command line.
//!
//! Exit codes: 0 on success with all checks passing, 1 when a verification
//! check fails, 2 on usage or runtime errors, 3 when the Cauchy-problem
//! certification fails.

mod config;

use clap::{Args, Parser, Subcommand};
use config::RunConfig;
use nalgebra::{DMatrix, DVector};
use rlfrac::error::Result;
use rlfrac::family::{make_grid, solve_rl_cauchy, FamilyKind, RlFamily};
use rlfrac::linalg::{Generator, C64};
use rlfrac::ml::{ml_scalar_detailed, MlParams, DEFAULT_SERIES_RADIUS};
use rlfrac::verify::{
    self, check_caputo_resolvent, check_cosine_equation, check_laplace_identity,
    check_resolvent_equation, check_uniqueness, recover_generator, recover_generator_def23,
    FamilyOracle, ResidualReport,
};
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "rlfrac", version, about = "Riemann-Liouville fractional resolvent toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Path to the JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Override the fractional order α from the config
    #[arg(long)]
    alpha: Option<f64>,
    /// Override the output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the quadrature order
    #[arg(long, value_name = "N")]
    quad_order: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Mittag-Leffler function E_{α,β}(z)
    EvalMl {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Argument z: real ("-1.5") or complex ("1+2i")
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Build a family and export its sampled trajectory
    Build {
        #[command(flatten)]
        common: ConfigArgs,
    },
    /// Solve the Riemann-Liouville Cauchy problem and certify the
    /// weighted initial conditions
    Solve {
        #[command(flatten)]
        common: ConfigArgs,
    },
    /// Run verification checks and write machine-readable reports
    Verify {
        #[command(flatten)]
        common: ConfigArgs,
        /// Comma-separated subset of
        /// resolvent,cosine,generator,caputo,laplace,uniqueness
        #[arg(long, default_value = "resolvent,cosine")]
        checks: String,
        /// Perturb the family under test by EPS·t·I (negative control)
        #[arg(long, value_name = "EPS")]
        corrupt: Option<f64>,
    },
    /// Recover the generator from the family's short-time expansion
    RecoverGenerator {
        #[command(flatten)]
        common: ConfigArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::EvalMl { alpha, beta, z, tol } => cmd_eval_ml(alpha, beta, &z, tol),
        Command::Build { common } => with_config(common, cmd_build),
        Command::Solve { common } => with_config(common, cmd_solve),
        Command::Verify { common, checks, corrupt } => {
            with_config(common, |cfg| cmd_verify(cfg, &checks, corrupt))
        }
        Command::RecoverGenerator { common } => with_config(common, cmd_recover),
    };
    std::process::exit(code);
}

fn with_config<F: FnOnce(RunConfig) -> i32>(args: ConfigArgs, f: F) -> i32 {
    let mut cfg = match RunConfig::load(&args.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Some(alpha) = args.alpha {
        cfg.alpha = alpha;
    }
    if let Some(out) = args.out {
        cfg.out_dir = out;
    }
    if let Some(n) = args.quad_order {
        cfg.quad_order = n;
    }
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return 2;
    }
    f(cfg)
}

fn fail(e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    2
}

fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let trimmed = s.trim();
    if let Ok(re) = f64::from_str(trimmed) {
        return Ok(C64::new(re, 0.0));
    }
    C64::from_str(trimmed).map_err(|_| format!("cannot parse complex number \"{s}\""))
}

fn cmd_eval_ml(alpha: f64, beta: f64, z: &str, tol: f64) -> i32 {
    let z = match parse_complex(z) {
        Ok(z) => z,
        Err(e) => return fail(e),
    };
    let params = match MlParams::new(alpha, beta) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    match ml_scalar_detailed(&params, z, tol, DEFAULT_SERIES_RADIUS) {
        Ok(eval) => {
            let branch = match eval.branch {
                rlfrac::ml::MlBranch::Series => "series",
                rlfrac::ml::MlBranch::Asymptotic => "asymptotic",
                rlfrac::ml::MlBranch::SeriesExtended => "series-extended",
            };
            if eval.value.im == 0.0 {
                println!("E_{{{alpha},{beta}}}({z}) = {}", eval.value.re);
            } else {
                println!(
                    "E_{{{alpha},{beta}}}({z}) = {} {} {}i",
                    eval.value.re,
                    if eval.value.im < 0.0 { "-" } else { "+" },
                    eval.value.im.abs()
                );
            }
            println!("error estimate {:.3e} ({branch} branch)", eval.error_estimate);
            0
        }
        Err(e) => fail(e),
    }
}

fn load_generator(cfg: &RunConfig) -> Result<Generator> {
    Generator::from_json_file(&cfg.generator)
}

fn ensure_out_dir(cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    Ok(())
}

fn cmd_build(cfg: RunConfig) -> i32 {
    match build_inner(&cfg) {
        Ok(()) => 0,
        Err(e) => fail(e),
    }
}

fn build_inner(cfg: &RunConfig) -> Result<()> {
    ensure_out_dir(cfg)?;
    let gen = load_generator(cfg)?;
    let kind = cfg.family_kind()?;
    let fam = RlFamily::new(cfg.order(), gen, kind, cfg.ml_tol)?;
    let grid = make_grid(cfg.grid_kind()?, cfg.grid.t_max, cfg.grid.count);
    let traj = fam.sample(&grid)?;
    let csv = cfg.out_dir.join("trajectory.csv");
    let sidecar = cfg.out_dir.join("trajectory.json");
    traj.write_files(&csv, &sidecar)?;
    println!(
        "built {} family: alpha = {}, dim = {}, {} grid points on (0, {}]",
        match kind {
            FamilyKind::RiemannLiouville => "riemann-liouville",
            FamilyKind::Caputo => "caputo",
        },
        cfg.alpha,
        fam.generator().dim(),
        grid.len(),
        cfg.grid.t_max
    );
    println!("wrote {} and {}", csv.display(), sidecar.display());
    Ok(())
}

fn cmd_solve(cfg: RunConfig) -> i32 {
    match solve_inner(&cfg) {
        Ok(passed) => {
            if passed {
                0
            } else {
                eprintln!("certification failed");
                3
            }
        }
        Err(e) => fail(e),
    }
}

fn solve_inner(cfg: &RunConfig) -> Result<bool> {
    if cfg.family_kind()? != FamilyKind::RiemannLiouville {
        return Err(rlfrac::Error::InvalidInput(
            "solve addresses the Riemann-Liouville problem; set kind = \"rl\"".into(),
        ));
    }
    ensure_out_dir(cfg)?;
    let gen = load_generator(cfg)?;
    let dim = gen.dim();
    let x = match &cfg.initial {
        Some(v) => DVector::from_vec(v.clone()),
        None => {
            let mut e1 = DVector::zeros(dim);
            e1[0] = 1.0;
            e1
        }
    };
    let grid = make_grid(cfg.grid_kind()?, cfg.grid.t_max, cfg.grid.count);
    let sol = solve_rl_cauchy(cfg.order(), gen, &x, &grid, cfg.ml_tol, cfg.quad_order)?;

    let csv = cfg.out_dir.join("solution.csv");
    let sidecar = cfg.out_dir.join("solution.json");
    sol.trajectory.write_files(&csv, &sidecar)?;

    let cert = &sol.certification;
    println!(
        "initial-condition certification: limit errors {:.3e} (t=1e-3), {:.3e} (t=1e-4) -> {}",
        cert.limit_errors[0],
        cert.limit_errors[1],
        if cert.limit_passed { "PASS" } else { "FAIL" }
    );
    match cert.derivative_slope {
        Some(slope) => println!(
            "derivative decay d/dt J^(2-a) u ~ t^{slope:.3} (need >= {:.3}) -> {}",
            cfg.alpha - 1.0 - 0.05,
            if cert.slope_passed { "PASS" } else { "FAIL" }
        ),
        None => println!("derivative decay at noise floor (A x = 0) -> PASS"),
    }
    println!("wrote {} and {}", csv.display(), sidecar.display());
    Ok(cert.passed())
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum CheckId {
    Resolvent,
    Cosine,
    Generator,
    Caputo,
    Laplace,
    Uniqueness,
}

fn parse_checks(list: &str) -> std::result::Result<Vec<CheckId>, String> {
    let mut checks = Vec::new();
    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let id = match token {
            "resolvent" => CheckId::Resolvent,
            "cosine" => CheckId::Cosine,
            "generator" => CheckId::Generator,
            "caputo" => CheckId::Caputo,
            "laplace" => CheckId::Laplace,
            "uniqueness" => CheckId::Uniqueness,
            other => return Err(format!("unknown check \"{other}\"")),
        };
        if !checks.contains(&id) {
            checks.push(id);
        }
    }
    if checks.is_empty() {
        return Err("no checks selected".into());
    }
    checks.sort();
    Ok(checks)
}

fn cmd_verify(cfg: RunConfig, checks: &str, corrupt: Option<f64>) -> i32 {
    let checks = match parse_checks(checks) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match verify_inner(&cfg, &checks, corrupt) {
        Ok(reports) => {
            print!("{}", verify::render_summary(&reports));
            if reports.iter().all(|r| r.passed) {
                0
            } else {
                1
            }
        }
        Err(e) => fail(e),
    }
}

fn verify_inner(
    cfg: &RunConfig,
    checks: &[CheckId],
    corrupt: Option<f64>,
) -> Result<Vec<ResidualReport>> {
    ensure_out_dir(cfg)?;
    let gen = load_generator(cfg)?;
    let order = cfg.order();
    let alpha = cfg.alpha;
    let n = cfg.quad_order;
    let pairs = cfg.check_pairs();
    let tols = &cfg.tolerances;
    let grid = make_grid(cfg.grid_kind()?, cfg.grid.t_max, cfg.grid.count);
    let t_seq: Vec<f64> = (0..10).map(|k| 0.1 * 2f64.powi(-k)).collect();

    let needs_rl = checks.iter().any(|c| *c != CheckId::Caputo);
    let rl = if needs_rl {
        Some(RlFamily::new(order, gen.clone(), FamilyKind::RiemannLiouville, cfg.ml_tol)?)
    } else {
        None
    };
    let caputo = if checks.contains(&CheckId::Caputo) {
        Some(RlFamily::new(order, gen.clone(), FamilyKind::Caputo, cfg.ml_tol)?)
    } else {
        None
    };

    let mut reports = Vec::new();
    for check in checks {
        match check {
            CheckId::Resolvent => {
                let fam = rl.as_ref().expect("rl family built");
                let oracle = match corrupt {
                    Some(eps) => FamilyOracle::corrupted(fam, eps),
                    None => FamilyOracle::from_family(fam),
                };
                reports.push(check_resolvent_equation(&oracle, alpha, &pairs, n, tols.resolvent)?);
            }
            CheckId::Cosine => {
                let fam = rl.as_ref().expect("rl family built");
                let oracle = match corrupt {
                    Some(eps) => FamilyOracle::corrupted(fam, eps),
                    None => FamilyOracle::from_family(fam),
                };
                reports.push(check_cosine_equation(&oracle, alpha, &pairs, n, tols.cosine)?);
            }
            CheckId::Generator => {
                let fam = rl.as_ref().expect("rl family built");
                let oracle = match corrupt {
                    Some(eps) => FamilyOracle::corrupted(fam, eps),
                    None => FamilyOracle::from_family(fam),
                };
                let reference = fam.generator().entries_real().expect("real generator");
                let (recovered, report) =
                    recover_generator(&oracle, alpha, &t_seq, Some(&reference), tols.generator)?;
                reports.push(report);
                let def23 = recover_generator_def23(&oracle, alpha, &t_seq, n)?;
                let abs = (&def23 - &recovered).norm();
                let rel = abs / recovered.norm().max(1.0);
                reports.push(ResidualReport::new(
                    "generator-def23",
                    t_seq.iter().map(|&t| verify::CheckPoint::single(t)).collect(),
                    abs,
                    rel,
                    tols.generator,
                    n,
                ));
            }
            CheckId::Caputo => {
                let fam = caputo.as_ref().expect("caputo family built");
                let oracle = match corrupt {
                    Some(eps) => FamilyOracle::corrupted(fam, eps),
                    None => FamilyOracle::from_family(fam),
                };
                reports.push(check_caputo_resolvent(&oracle, alpha, &pairs, n, tols.caputo)?);
            }
            CheckId::Laplace => {
                let fam = rl.as_ref().expect("rl family built");
                reports.extend(check_laplace_identity(
                    fam,
                    &cfg.lam_mu,
                    n,
                    cfg.laplace_horizon,
                    cfg.laplace_abscissa,
                    tols.laplace_closed,
                    tols.laplace_numerical,
                )?);
            }
            CheckId::Uniqueness => {
                let fam = rl.as_ref().expect("rl family built");
                let oracle_a = FamilyOracle::from_family(fam);
                let oracle_b = match corrupt {
                    Some(eps) => FamilyOracle::corrupted(fam, eps),
                    None => FamilyOracle::from_family_series(fam),
                };
                reports.push(check_uniqueness(
                    &oracle_a,
                    &oracle_b,
                    alpha,
                    &grid,
                    n,
                    tols.uniqueness,
                )?);
            }
        }
    }

    verify::write_jsonl(&reports, &cfg.out_dir.join("reports.jsonl"))?;
    verify::write_csv_summary(&reports, &cfg.out_dir.join("summary.csv"))?;
    Ok(reports)
}

fn cmd_recover(cfg: RunConfig) -> i32 {
    match recover_inner(&cfg) {
        Ok(passed) => {
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => fail(e),
    }
}

fn recover_inner(cfg: &RunConfig) -> Result<bool> {
    ensure_out_dir(cfg)?;
    let gen = load_generator(cfg)?;
    let order = cfg.order();
    let fam = RlFamily::new(order, gen, FamilyKind::RiemannLiouville, cfg.ml_tol)?;
    let oracle = FamilyOracle::from_family(&fam);
    let reference = fam.generator().entries_real().expect("real generator");
    let t_seq: Vec<f64> = (0..10).map(|k| 0.1 * 2f64.powi(-k)).collect();
    let (recovered, report) = recover_generator(
        &oracle,
        cfg.alpha,
        &t_seq,
        Some(&reference),
        cfg.tolerances.generator,
    )?;

    println!("recovered generator ({0}x{0}):", recovered.nrows());
    for i in 0..recovered.nrows() {
        let row: Vec<String> = (0..recovered.ncols())
            .map(|j| format!("{:+.12e}", recovered[(i, j)]))
            .collect();
        println!("  [{}]", row.join(", "));
    }
    println!(
        "{} relative error {:.3e} (tolerance {:.1e})",
        if report.passed { "PASS" } else { "FAIL" },
        report.rel_residual,
        report.tolerance
    );

    write_matrix_json(&recovered, &cfg.out_dir.join("recovered.json"))?;
    Ok(report.passed)
}

fn write_matrix_json(m: &DMatrix<f64>, path: &Path) -> Result<()> {
    #[derive(serde::Serialize)]
    struct MatrixFile {
        dim: usize,
        rows: Vec<Vec<f64>>,
    }
    let file = MatrixFile {
        dim: m.nrows(),
        rows: (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect(),
    };
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}
