//! `tba-exact` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or invalid input, 2 solver failure,
//! 3 verification failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use tba_exact::closedform::Quantity;
use tba_exact::indices::{cfiv, itilde, IndexMethod, IndexResult};
use tba_exact::output::{num, samples_csv, su2k_csv, su3_csv};
use tba_exact::relations::{run_suite, IdentityReport, Suite};
use tba_exact::solver::{closed_form_residual, solve_su2k, solve_su3, RESIDUAL_WINDOW};
use tba_exact::{ClosedFormSolution, Error, Grid, ModelSpec, Options, SolveReport};

const SOLVE_TOL: f64 = 1e-10;
const VERIFY_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "tba-exact", version, about = "Exact massless N=2 TBA solutions, an independent solver and numerical checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the TBA equations by damped fixed-point iteration.
    #[command(allow_negative_numbers = true)]
    Solve(Common),
    /// Residual of the closed-form solution in the TBA equations.
    #[command(allow_negative_numbers = true)]
    Verify(Common),
    /// Run the identity suite and print a JSON report.
    #[command(allow_negative_numbers = true)]
    Relations {
        #[command(flatten)]
        common: Common,
        /// all, airy, wronskian, ysystem, appendix_c or squared
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// CFIV index and conserved-charge integrals of SU(2)_k.
    #[command(allow_negative_numbers = true)]
    Index {
        #[command(flatten)]
        common: Common,
        /// Compute I~_m instead of the CFIV index
        #[arg(long)]
        m: Option<u32>,
        /// quadrature, gamma_formula or both
        #[arg(long, default_value = "both")]
        method: String,
        /// Scan k = 0.5, 1, ..., 4 instead of the single --k
        #[arg(long)]
        scan: bool,
    },
    /// Sample one closed-form function on the grid.
    #[command(allow_negative_numbers = true)]
    Dump {
        #[command(flatten)]
        common: Common,
        /// expA, A, B (su2k) or expA1, expA2, A1, A2, B0, B0bar (su3)
        #[arg(long = "fn", default_value = "B")]
        function: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Su2k,
    Su3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone, Debug)]
struct Common {
    #[arg(long, value_enum, default_value = "su2k")]
    model: ModelArg,
    /// Level k >= 0 of SU(2)_k
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = -40.0)]
    theta_min: f64,
    #[arg(long, default_value_t = 6.0)]
    theta_max: f64,
    #[arg(long, default_value_t = 0.025)]
    step: f64,
    /// Damping of the fixed-point iteration, in (0, 1]
    #[arg(long, default_value_t = 0.5)]
    damping: f64,
    /// Tolerance [default: 1e-10 for solve, 1e-6 for verify]
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

/// Validated settings shared by all commands.
struct RunConfig {
    model: ModelSpec,
    grid: Grid,
    damping: f64,
    tol: f64,
    seed: u64,
    output_path: Option<PathBuf>,
    format: Format,
}

impl RunConfig {
    fn new(c: &Common, default_tol: f64) -> anyhow::Result<Self> {
        let model = match c.model {
            ModelArg::Su2k => ModelSpec::su2k(c.k)?,
            ModelArg::Su3 => ModelSpec::su3(),
        };
        let tol = c.tol.unwrap_or(default_tol);
        if !(tol > 0.0) {
            bail!("--tol must be > 0, got {tol}");
        }
        if !(c.damping > 0.0 && c.damping <= 1.0) {
            bail!("--damping must lie in (0, 1], got {}", c.damping);
        }
        Ok(Self {
            model,
            grid: Grid::new(c.theta_min, c.theta_max, c.step)?,
            damping: c.damping,
            tol,
            seed: c.seed,
            output_path: c.out.clone(),
            format: c.format,
        })
    }

    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.output_path {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => stdout(text),
        }
    }
}

fn stdout(text: &str) -> anyhow::Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        // a closed pipe (e.g. `| head`) is not an error
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => r.context("writing to stdout"),
    }
}

enum Failure {
    Usage(anyhow::Error),
    Solver(anyhow::Error),
    Verification,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(c) => cmd_solve(&c),
        Command::Verify(c) => cmd_verify(&c),
        Command::Relations { common, suite } => cmd_relations(&common, &suite),
        Command::Index { common, m, method, scan } => cmd_index(&common, m, &method, scan),
        Command::Dump { common, function } => cmd_dump(&common, &function),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("solver failure: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => ExitCode::from(3),
    }
}

fn report_path(out: &Path) -> PathBuf {
    out.with_extension("report.json")
}

fn columns_json(csv: &str) -> anyhow::Result<String> {
    let table = tba_exact::output::parse_csv(csv)?;
    let mut map = serde_json::Map::new();
    for name in &table.columns {
        map.insert(name.clone(), serde_json::json!(table.column(name).unwrap()));
    }
    Ok(serde_json::to_string_pretty(&map)? + "\n")
}

fn cmd_solve(c: &Common) -> Result<(), Failure> {
    let cfg = RunConfig::new(c, SOLVE_TOL)?;
    let opts = Options {
        damping: cfg.damping,
        tol: cfg.tol,
        ..Options::default()
    };
    opts.validate()?;
    let solved = match cfg.model {
        ModelSpec::Su2k { k } => solve_su2k(k, cfg.grid, &opts).map(|s| (su2k_csv(&s), s.report)),
        ModelSpec::Su3 => solve_su3(cfg.grid, &opts).map(|s| (su3_csv(&s), s.report)),
    };
    let (csv, report) = match solved {
        Ok(v) => v,
        Err(Error::NonConvergence { iterations, residual }) => {
            let report = SolveReport {
                iterations,
                damping: cfg.damping,
                residual,
                converged: false,
                per_equation: Vec::new(),
            };
            stdout(&(serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)? + "\n"))?;
            return Err(Failure::Solver(anyhow!("no convergence after {iterations} iterations")));
        }
        Err(e) => return Err(Failure::Solver(e.into())),
    };
    let body = match cfg.format {
        Format::Csv => csv,
        Format::Json => columns_json(&csv)?,
    };
    let report_json = serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)? + "\n";
    match &cfg.output_path {
        Some(p) => {
            cfg.emit(&body)?;
            let rp = report_path(p);
            fs::write(&rp, &report_json).with_context(|| format!("writing {}", rp.display()))?;
            stdout(&report_json)?;
        }
        None => {
            stdout(&body)?;
            eprint!("{report_json}");
        }
    }
    Ok(())
}

fn cmd_verify(c: &Common) -> Result<(), Failure> {
    let cfg = RunConfig::new(c, VERIFY_TOL)?;
    let cf = ClosedFormSolution::new(cfg.model)?;
    let sups = closed_form_residual(&cf, cfg.grid, RESIDUAL_WINDOW).map_err(|e| Failure::Solver(e.into()))?;
    let ok = sups.iter().all(|(_, s)| *s < cfg.tol);
    let text = match cfg.format {
        Format::Csv => {
            let mut s = String::from("# tba-exact v1 equation,sup\nequation,sup\n");
            for (name, sup) in &sups {
                s += &format!("{name},{}\n", num(*sup));
            }
            s
        }
        Format::Json => {
            let v: Vec<_> = sups
                .iter()
                .map(|(n, s)| serde_json::json!({"equation": n, "sup": s, "tol": cfg.tol, "passed": *s < cfg.tol}))
                .collect();
            serde_json::to_string_pretty(&v).map_err(anyhow::Error::from)? + "\n"
        }
    };
    cfg.emit(&text)?;
    for (name, sup) in &sups {
        eprintln!("{} {name}: sup residual {sup:.3e} (tol {:e})", if *sup < cfg.tol { "ok" } else { "FAIL" }, cfg.tol);
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_relations(c: &Common, suite: &str) -> Result<(), Failure> {
    let cfg = RunConfig::new(c, VERIFY_TOL)?;
    let suite: Suite = suite.parse()?;
    let checks = run_suite(suite, cfg.seed).map_err(|e| Failure::Solver(e.into()))?;
    let reports: Vec<IdentityReport> = checks.iter().map(|c| c.report(cfg.seed)).collect();
    cfg.emit(&(serde_json::to_string_pretty(&reports).map_err(anyhow::Error::from)? + "\n"))?;
    for c in &checks {
        eprintln!("{c}");
    }
    if checks.iter().all(|c| c.passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_index(c: &Common, m: Option<u32>, method: &str, scan: bool) -> Result<(), Failure> {
    let cfg = RunConfig::new(c, VERIFY_TOL)?;
    let methods = match method {
        "both" => vec![IndexMethod::Quadrature, IndexMethod::GammaFormula],
        s => vec![s.parse::<IndexMethod>()?],
    };
    let ks: Vec<f64> = if scan {
        (1..=8).map(|i| 0.5 * i as f64).collect()
    } else {
        match cfg.model {
            ModelSpec::Su2k { k } => vec![k],
            ModelSpec::Su3 => return Err(Failure::Usage(anyhow!("index is defined for --model su2k only"))),
        }
    };
    let mut rows: Vec<(IndexMethod, IndexResult)> = Vec::new();
    for &k in &ks {
        for &meth in &methods {
            let r = match m {
                Some(m) => itilde(m, k, meth)?,
                None => cfiv(k, meth)?,
            };
            rows.push((meth, r));
        }
    }
    let text = match cfg.format {
        Format::Csv => {
            let mut s = String::from("# tba-exact v1 k,m,method,numeric,exact,abs_diff\nk,m,method,numeric,exact,abs_diff\n");
            for (meth, r) in &rows {
                let m = r.m.map_or(String::new(), |m| m.to_string());
                s += &format!("{},{m},{meth},{},{},{}\n", num(r.k), num(r.numeric), num(r.exact), num(r.abs_diff));
            }
            s
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(meth, r)| {
                    let mut j = serde_json::to_value(r).unwrap();
                    j["method"] = serde_json::json!(meth.to_string());
                    j
                })
                .collect();
            serde_json::to_string_pretty(&v).map_err(anyhow::Error::from)? + "\n"
        }
    };
    cfg.emit(&text)?;
    for (meth, r) in &rows {
        eprintln!(
            "k = {} {}{meth}: numeric {:.12} exact {:.12} diff {:.2e}",
            r.k,
            r.m.map_or(String::new(), |m| format!("m = {m} ")),
            r.numeric,
            r.exact,
            r.abs_diff
        );
    }
    Ok(())
}

fn cmd_dump(c: &Common, function: &str) -> Result<(), Failure> {
    let cfg = RunConfig::new(c, VERIFY_TOL)?;
    let q: Quantity = function.parse()?;
    let cf = ClosedFormSolution::new(cfg.model)?;
    let thetas = cfg.grid.thetas();
    let values = thetas
        .iter()
        .map(|&t| cf.quantity(q, Complex64::new(t, 0.0)))
        .collect::<Result<Vec<_>, _>>()?;
    let csv = samples_csv(&thetas, &values)?;
    let text = match cfg.format {
        Format::Csv => csv,
        Format::Json => columns_json(&csv)?,
    };
    cfg.emit(&text)
        .map_err(Failure::Usage)
}
