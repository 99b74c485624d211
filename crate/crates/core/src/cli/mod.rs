//! Command-line driver: group files in, JSON reports and CSV arrays out.

pub mod input;
pub mod report;
pub mod suites;

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact::{format_q, parse_q, Q};
use crate::liecore::{parse_group_definition, Algebra, Functional, NilpotentAlgebra};
use crate::modspace::{mod_norm, PredualSplit};
use crate::orbit::{Orbit, OrbitData, DEFAULT_NODE_CAP};
use crate::repgrid::{gaussian_window, Representation, SchrodingerRep, TildeRep, C64};
use crate::wpcalc::{gaussian_symbol, quantize, GaussianSpec};
use report::{complex, num, num_map, write_csv, write_json, SCHEMA_VERSION};
pub use suites::Suite;

#[derive(Parser, Debug)]
#[command(
    name = "nilweyl",
    version,
    about = "Weyl quantization on coadjoint orbits"
)]
pub struct Cli {
    /// Seed for every randomized input.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for report.json and CSV output.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Grid points per axis (power of two).
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Box half-width per chart axis, comma-separated; one value applies to every axis.
    /// Default sqrt(pi * points / 2).
    #[arg(long = "box", global = true, value_delimiter = ',')]
    pub half_width: Option<Vec<f64>>,
    /// Multiplies every tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub tolerance_scale: f64,
    /// Width of the Gaussian reference window.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub sigma: f64,
    /// Largest number of nodes any grid may have.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_CAP)]
    pub cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a group-definition file.
    Validate { group: PathBuf },
    /// Jump indices, isotropy and graph polynomials of the orbit of xi0.
    Orbit {
        group: PathBuf,
        /// Comma-separated rationals; defaults to the file's [orbit] xi0.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi0: Option<Vec<String>>,
    },
    /// Quantize a symbol given as CSV rows (chart coords..., re, im).
    Quantize {
        group: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi0: Option<Vec<String>>,
        /// Symbol file; a centred unit Gaussian when absent.
        #[arg(long)]
        symbol: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = RepKind::Tilde)]
        rep: RepKind,
        /// Write the full matrix instead of the singular values.
        #[arg(long)]
        matrix: bool,
    },
    /// Run identity suites and report residuals against tolerances.
    Verify {
        group: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi0: Option<Vec<String>>,
        #[arg(long, value_enum, value_delimiter = ',')]
        suite: Option<Vec<Suite>>,
        #[arg(long, value_enum, default_value_t = RepKind::Tilde)]
        rep: RepKind,
    },
    /// Mixed modulation norm of f with window phi.
    Modnorm {
        group: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi0: Option<Vec<String>>,
        /// Vector file on the Hilbert grid; the reference window when absent.
        #[arg(long)]
        f: Option<PathBuf>,
        /// Window file on the Hilbert grid; the reference window when absent.
        #[arg(long)]
        phi: Option<PathBuf>,
        /// Inner exponent, 1..inf.
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        /// Outer exponent, 1..inf.
        #[arg(long, default_value_t = 2.0)]
        s: f64,
        /// Inner and outer predual positions, 1-based: "2,3;5,6".
        #[arg(long)]
        split: Option<String>,
        #[arg(long, value_enum, default_value_t = RepKind::Tilde)]
        rep: RepKind,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RepKind {
    /// `π̃` on `L²(O)`.
    Tilde,
    /// Schrödinger model of heis3 on `L²(ℝ)`.
    Schrodinger,
}

impl RepKind {
    fn name(self) -> &'static str {
        match self {
            RepKind::Tilde => "tilde",
            RepKind::Schrodinger => "schrodinger",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Task {
    Validate,
    Orbit,
    Quantize {
        symbol: Option<PathBuf>,
        matrix: bool,
    },
    Verify {
        suites: Vec<Suite>,
    },
    Modnorm {
        f: Option<PathBuf>,
        phi: Option<PathBuf>,
        r: f64,
        s: f64,
        split: Option<String>,
    },
}

impl Task {
    fn name(&self) -> &'static str {
        match self {
            Task::Validate => "validate",
            Task::Orbit => "orbit",
            Task::Quantize { .. } => "quantize",
            Task::Verify { .. } => "verify",
            Task::Modnorm { .. } => "modnorm",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub group: PathBuf,
    pub xi0: Option<Vec<String>>,
    pub points: Option<usize>,
    pub half_width: Option<Vec<f64>>,
    pub cap: usize,
    pub sigma: f64,
    pub rep: RepKind,
    pub out: PathBuf,
    pub seed: u64,
    pub tolerance_scale: f64,
    pub task: Task,
}

impl ExperimentConfig {
    pub fn from_cli(cli: Cli) -> Self {
        let (group, xi0, rep, task) = match cli.command {
            Command::Validate { group } => (group, None, RepKind::Tilde, Task::Validate),
            Command::Orbit { group, xi0 } => (group, xi0, RepKind::Tilde, Task::Orbit),
            Command::Quantize {
                group,
                xi0,
                symbol,
                rep,
                matrix,
            } => (group, xi0, rep, Task::Quantize { symbol, matrix }),
            Command::Verify {
                group,
                xi0,
                suite,
                rep,
            } => {
                let mut suites = suite.unwrap_or_else(Suite::all);
                suites.sort();
                suites.dedup();
                (group, xi0, rep, Task::Verify { suites })
            }
            Command::Modnorm {
                group,
                xi0,
                f,
                phi,
                r,
                s,
                split,
                rep,
            } => (
                group,
                xi0,
                rep,
                Task::Modnorm {
                    f,
                    phi,
                    r,
                    s,
                    split,
                },
            ),
        };
        Self {
            group,
            xi0,
            points: cli.points,
            half_width: cli.half_width,
            cap: cli.cap,
            sigma: cli.sigma,
            rep,
            out: cli.out,
            seed: cli.seed,
            tolerance_scale: cli.tolerance_scale,
            task,
        }
    }

    fn echo(&self, points: Option<usize>) -> Value {
        json!({
            "group": self.group.file_name().map(|s| s.to_string_lossy().into_owned()),
            "xi0": self.xi0,
            "points": points,
            "box": self.half_width.as_ref().map(|v| v.iter().map(|x| num(*x)).collect::<Vec<_>>()),
            "sigma": num(self.sigma),
            "rep": self.rep.name(),
            "seed": self.seed,
            "tolerance_scale": num(self.tolerance_scale),
        })
    }
}

pub struct Outcome {
    pub pass: bool,
    pub report: PathBuf,
    pub summary: String,
}

struct Group {
    algebra: Algebra,
    xi0: Option<Vec<Q>>,
}

fn load_group(path: &Path) -> Result<Group> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let algebra = parse_group_definition(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })?;
    let doc: toml::Table = toml::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let xi0 = match doc.get("orbit").and_then(|o| o.get("xi0")) {
        None => None,
        Some(toml::Value::Array(a)) => Some(
            a.iter()
                .map(|v| match v {
                    toml::Value::String(s) => parse_q(s),
                    toml::Value::Integer(i) => Ok(Q::from_integer((*i).into())),
                    other => Err(Error::Parse(format!("xi0 entry {other} is not rational"))),
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        Some(other) => return Err(Error::Parse(format!("xi0 = {other} is not an array"))),
    };
    Ok(Group { algebra, xi0 })
}

fn orbit_of(cfg: &ExperimentConfig, g: &Group) -> Result<Orbit> {
    let xi0 = match &cfg.xi0 {
        Some(v) => v.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?,
        None => g.xi0.clone().ok_or_else(|| {
            Error::Parse("no xi0: pass --xi0 or add [orbit] xi0 to the group file".into())
        })?,
    };
    OrbitData::new(&Functional::new(&g.algebra, xi0)?)
}

fn half_widths(cfg: &ExperimentConfig, n: usize) -> Vec<f64> {
    cfg.half_width
        .clone()
        .unwrap_or_else(|| vec![(PI * n as f64 / 2.0).sqrt()])
}

fn tilde(cfg: &ExperimentConfig, orbit: &Orbit, n: usize) -> Result<TildeRep> {
    TildeRep::with_cap(orbit, n, &half_widths(cfg, n), cfg.cap)
}

fn schrodinger(cfg: &ExperimentConfig, orbit: &Orbit, n: usize) -> Result<SchrodingerRep> {
    let h = NilpotentAlgebra::heisenberg();
    let unit = Functional::dual_basis(&h, 0);
    if **orbit.algebra() != *h || orbit.xi0().coords() != unit.coords() {
        return Err(Error::UnsupportedRegime(
            "the Schrödinger model needs heis3 with [X3, X2] = X1 and xi0 = xi_1".into(),
        ));
    }
    match half_widths(cfg, n)[..] {
        [l] => SchrodingerRep::new(n, l),
        _ => Err(Error::Domain(
            "the Schrödinger model takes one box half-width".into(),
        )),
    }
}

/// Runs `$body` with `$r` bound to the configured representation.
macro_rules! with_rep {
    ($cfg:expr, $orbit:expr, $n:expr, |$r:ident| $body:expr) => {
        match $cfg.rep {
            RepKind::Tilde => {
                let $r = tilde($cfg, $orbit, $n)?;
                $body
            }
            RepKind::Schrodinger => {
                let $r = schrodinger($cfg, $orbit, $n)?;
                $body
            }
        }
    };
}

fn q_list(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_q(x))).collect())
}

fn header(cfg: &ExperimentConfig, points: Option<usize>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(cfg.task.name()));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("config".into(), cfg.echo(points));
    m.insert(
        "tolerances".into(),
        num_map(&suites::tolerance_table(cfg.tolerance_scale)),
    );
    m
}

fn finish(
    cfg: &ExperimentConfig,
    mut m: Map<String, Value>,
    pass: bool,
    summary: String,
) -> Result<Outcome> {
    m.insert("pass".into(), json!(pass));
    fs::create_dir_all(&cfg.out)?;
    let report = cfg.out.join("report.json");
    write_json(&report, &Value::Object(m))?;
    Ok(Outcome {
        pass,
        report,
        summary,
    })
}

/// Executes one configured task and writes `report.json` under `cfg.out`.
pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let group = load_group(&cfg.group)?;
    match &cfg.task {
        Task::Validate => validate(cfg, &group),
        Task::Orbit => orbit_report(cfg, &group),
        Task::Quantize { symbol, matrix } => quantize_task(cfg, &group, symbol.as_deref(), *matrix),
        Task::Verify { suites } => verify(cfg, &group, suites),
        Task::Modnorm {
            f,
            phi,
            r,
            s,
            split,
        } => modnorm(
            cfg,
            &group,
            f.as_deref(),
            phi.as_deref(),
            *r,
            *s,
            split.as_deref(),
        ),
    }
}

fn validate(cfg: &ExperimentConfig, g: &Group) -> Result<Outcome> {
    let a = &g.algebra;
    let mut m = header(cfg, None);
    m.insert(
        "algebra".into(),
        json!({
            "name": a.name(),
            "dim": a.dim(),
            "labels": a.labels(),
            "class": a.class(),
            "xi0": g.xi0.as_deref().map(q_list),
        }),
    );
    let summary = format!(
        "{}: valid nilpotent algebra of dimension {} and class {}",
        a.name(),
        a.dim(),
        a.class()
    );
    finish(cfg, m, true, summary)
}

fn orbit_report(cfg: &ExperimentConfig, g: &Group) -> Result<Outcome> {
    let orbit = orbit_of(cfg, g)?;
    let graph: Map<String, Value> = orbit
        .graph_polynomials()
        .into_iter()
        .map(|(j, p)| (j.to_string(), json!(p.to_coefficient_map())))
        .collect();
    let mut m = header(cfg, None);
    m.insert(
        "orbit".into(),
        json!({
            "xi0": q_list(orbit.xi0().coords()),
            "isotropy_basis": orbit.isotropy_basis().iter().map(|x| q_list(x.coords())).collect::<Vec<_>>(),
            "e": orbit.jump_indices(),
            "d": orbit.dim(),
            "point_orbit": orbit.dim() == 0,
            "pfaffian": format_q(orbit.pfaffian()),
            "graph": graph,
        }),
    );
    let summary = format!(
        "{}: e = {:?}, d = {}",
        g.algebra.name(),
        orbit.jump_indices(),
        orbit.dim()
    );
    finish(cfg, m, true, summary)
}

fn quantize_task(
    cfg: &ExperimentConfig,
    g: &Group,
    symbol: Option<&Path>,
    matrix: bool,
) -> Result<Outcome> {
    let orbit = orbit_of(cfg, g)?;
    let n = cfg.points.unwrap_or(64);
    with_rep!(cfg, &orbit, n, |rep| {
        let a = match symbol {
            Some(p) => rep.new_symbol(input::read_grid_csv(p, rep.symbol_lattice())?)?,
            None => {
                let axes = rep.symbol_lattice().axes();
                let spec = GaussianSpec {
                    centre: axes.iter().map(|a| a.origin).collect(),
                    widths: vec![cfg.sigma; axes.len()],
                    freq: vec![0.0; axes.len()],
                    amp: C64::new(1.0, 0.0),
                };
                gaussian_symbol(&rep, &spec)
            }
        };
        let op = quantize(&a, &rep)?;
        fs::create_dir_all(&cfg.out)?;
        let mut m = header(cfg, Some(n));
        let (data, op_norm) = if matrix {
            let mat = op.matrix();
            let path = cfg.out.join("operator.csv");
            write_csv(
                &path,
                &["row", "col", "re", "im"],
                (0..mat.nrows()).flat_map(|i| {
                    (0..mat.ncols())
                        .map(move |j| vec![i as f64, j as f64, mat[(i, j)].re, mat[(i, j)].im])
                }),
            )?;
            (path, op.op_norm())
        } else {
            let svd = singular_values(op.matrix());
            let path = cfg.out.join("singular_values.csv");
            write_csv(
                &path,
                &["k", "sigma"],
                svd.iter()
                    .enumerate()
                    .map(|(k, s)| vec![(k + 1) as f64, *s]),
            )?;
            (path, svd[0])
        };
        m.insert(
            "operator".into(),
            json!({
                "dim": op.dim(),
                "trace": complex(op.trace()),
                "integral": complex(a.integral()),
                "op_norm": num(op_norm),
                "frobenius": num(op.frobenius_norm()),
                "file": data.file_name().map(|s| s.to_string_lossy().into_owned()),
            }),
        );
        let summary = format!(
            "quantized on {} nodes; operator norm {:.6e}",
            op.dim(),
            op_norm
        );
        finish(cfg, m, true, summary)
    })
}

/// Singular values in nonincreasing order.
fn singular_values(m: &nalgebra::DMatrix<C64>) -> Vec<f64> {
    let a = faer::Mat::<faer::complex_native::c64>::from_fn(m.nrows(), m.ncols(), |i, j| {
        faer::complex_native::c64::new(m[(i, j)].re, m[(i, j)].im)
    });
    let mut s = a.singular_values();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

fn verify(cfg: &ExperimentConfig, g: &Group, list: &[Suite]) -> Result<Outcome> {
    let orbit = orbit_of(cfg, g)?;
    let tol = suites::tolerance_table(cfg.tolerance_scale);
    let mut results = Vec::new();
    let mut all = true;
    let mut lines = Vec::new();
    for &suite in list {
        let n = cfg.points.unwrap_or(suite.default_points());
        let mut rng = suites::rng_for(cfg.seed, suite);
        let res = match suite {
            Suite::Orbit => suites::orbit_suite(&orbit, &mut rng)?,
            Suite::TildeAmbiguity => {
                if cfg.rep != RepKind::Tilde {
                    return Err(Error::UnsupportedRegime(
                        "tilde-ambiguity needs --rep tilde".into(),
                    ));
                }
                suites::tilde_ambiguity_suite(&tilde(cfg, &orbit, n)?, &mut rng, 16)?
            }
            Suite::Moyal => with_rep!(cfg, &orbit, n, |rep| suites::moyal_suite(
                &rep, &mut rng, 5
            )?),
            Suite::Trace => with_rep!(cfg, &orbit, n, |rep| suites::trace_suite(&rep, &mut rng)?),
            Suite::Reconstruct => {
                with_rep!(cfg, &orbit, n, |rep| suites::reconstruct_suite(
                    &rep, cfg.sigma, &mut rng
                )?)
            }
            Suite::Rankone => with_rep!(cfg, &orbit, n, |rep| {
                // the tilde predual box only holds the ambiguity of centred windows
                let (f, phi) = match cfg.rep {
                    RepKind::Tilde => {
                        let w = gaussian_window(&rep, cfg.sigma)?.function().clone();
                        (w.clone(), w.scale(C64::new(0.6, 0.8)))
                    }
                    RepKind::Schrodinger => (
                        crate::wpcalc::random_gaussian_vector(&rep, &mut rng),
                        crate::wpcalc::random_gaussian_vector(&rep, &mut rng),
                    ),
                };
                suites::rankone_suite(&rep, &f, &phi)?
            }),
        };
        let pass = res.pass(suite, &tol);
        all &= pass;
        lines.push(format!(
            "{:<16} {}  {}",
            suite.name(),
            if pass { "pass" } else { "FAIL" },
            res.residuals
                .iter()
                .map(|(k, v)| format!("{k}={v:.3e}"))
                .collect::<Vec<_>>()
                .join(" ")
        ));
        let points = if suite == Suite::Orbit { None } else { Some(n) };
        results.push(json!({
            "suite": suite.name(),
            "points": points,
            "box": points.map(|n| half_widths(cfg, n).into_iter().map(num).collect::<Vec<_>>()),
            "residuals": num_map(&res.residuals),
            "tolerances": num_map(&res.residuals.keys().map(|k| {
                let key = format!("{}.{k}", suite.name());
                (k.clone(), tol[&key])
            }).collect()),
            "notes": res.notes,
            "pass": pass,
        }));
    }
    let mut m = header(cfg, cfg.points);
    m.insert("results".into(), Value::Array(results));
    finish(cfg, m, all, lines.join("\n"))
}

fn parse_split(text: &str) -> Result<(Vec<usize>, Vec<usize>)> {
    let groups: Vec<&str> = text.split(';').collect();
    if groups.len() != 2 {
        return Err(Error::Parse(format!(
            "split {text:?} needs two groups separated by ';'"
        )));
    }
    let parse = |g: &str| -> Result<Vec<usize>> {
        g.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| match s.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(Error::Parse(format!(
                    "split entry {s:?} is not a 1-based index"
                ))),
            })
            .collect()
    };
    Ok((parse(groups[0])?, parse(groups[1])?))
}

fn modnorm(
    cfg: &ExperimentConfig,
    g: &Group,
    f: Option<&Path>,
    phi: Option<&Path>,
    r: f64,
    s: f64,
    split: Option<&str>,
) -> Result<Outcome> {
    let orbit = orbit_of(cfg, g)?;
    let n = cfg.points.unwrap_or(64);
    let tol = suites::tolerance_table(cfg.tolerance_scale);
    with_rep!(cfg, &orbit, n, |rep| {
        let load = |p: Option<&Path>| -> Result<_> {
            match p {
                Some(p) => rep.new_vector(input::read_grid_csv(p, rep.hilbert_lattice())?),
                None => Ok(gaussian_window(&rep, cfg.sigma)?.function().clone()),
            }
        };
        let fv = load(f)?;
        let pv = load(phi)?;
        let split = match split {
            Some(t) => {
                let (i, o) = parse_split(t)?;
                PredualSplit::new(&rep, i, o)?
            }
            None => PredualSplit::default_for(&rep),
        };
        let value = mod_norm(&fv, &pv, r, s, &split, &rep)?;
        let m22 = mod_norm(&fv, &pv, 2.0, 2.0, &split, &rep)?;
        let hilbert = fv.norm() * pv.norm();
        let check = if hilbert > 0.0 {
            (m22 - hilbert).abs() / hilbert
        } else {
            m22
        };
        let pass = check <= tol["modnorm.m22"];
        let one = |v: &[usize]| v.iter().map(|k| k + 1).collect::<Vec<_>>();
        let mut m = header(cfg, Some(n));
        m.insert(
            "modnorm".into(),
            json!({
                "r": num(r),
                "s": num(s),
                "split": {
                    "inner": one(split.inner()),
                    "outer": one(split.outer()),
                    "convention": split.is_convention(),
                },
                "value": num(value),
                "f_norm": num(fv.norm()),
                "phi_norm": num(pv.norm()),
                "m22_residual": num(check),
            }),
        );
        let summary = format!("M^{{{r},{s}}} norm {value:.9e} (M^{{2,2}} residual {check:.2e})");
        finish(cfg, m, pass, summary)
    })
}

/// Entry point of the `nilweyl` binary.
pub fn main() -> ExitCode {
    let cfg = ExperimentConfig::from_cli(Cli::parse());
    match run(&cfg) {
        Ok(o) => {
            println!("{}", o.summary);
            println!("report: {}", o.report.display());
            if o.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
