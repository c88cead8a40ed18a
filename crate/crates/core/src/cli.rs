//! Command-line front end.
//!
//! Every subcommand produces a [`Report`]; the resolved [`RunConfig`] is echoed
//! into it so that a report is reproducible from its own contents.

use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Result, WickError};
use crate::fock::{self, FockRep, DEFAULT_SEED, POSITIVITY_TOL};
use crate::ideals::{conjecture_check, invertibility_hypotheses, k_chain};
use crate::linalg;
use crate::model::{build_ccr_flip, ModelKind, ModelSpec, WickCoefficients};
use crate::oscrep::{self, DEFAULT_INTERIOR};
use crate::report::{Item, Report, Verdict};
use crate::subspace::DEFAULT_RANK_TOL;
use crate::tensor_ops::{check_braid, op_norm, DEFAULT_IDENTITY_TOL};
use crate::C64;

#[derive(Debug, Parser)]
#[command(name = "wick", version, about = "Wick ideal, Fock and representation checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Largest dense operator side length.
    #[arg(long, env = linalg::DENSE_CAP_ENV, global = true)]
    pub dense_cap: Option<usize>,

    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hermiticity, braid relation and norms of T.
    CheckModel {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = DEFAULT_IDENTITY_TOL)]
        tol: f64,
    },
    /// Dimensions of K_m and ker R_m.
    IdealChain {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 5)]
        m_max: usize,
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        rel_tol: f64,
        /// Also write each K_m and ker R_m basis as JSON into this directory.
        #[arg(long)]
        export_dir: Option<PathBuf>,
    },
    /// ker R_{n+1} against the recursive and product parts, for n = 2..=N.
    Conjecture {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        rel_tol: f64,
    },
    /// Fock positivity, relations, adjointness and ideal annihilation.
    Fock {
        #[command(flatten)]
        model: ModelArgs,
        /// Top level of the truncation.
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_IDENTITY_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        rel_tol: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Truncated-oscillator representations.
    Reps {
        #[command(flatten)]
        rep: RepArgs,
        /// Per-mode cutoff.
        #[arg(long = "N", visible_alias = "cutoff", default_value_t = 9)]
        cutoff: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Interior band: mode indices up to N - r.
        #[arg(long, default_value_t = DEFAULT_INTERIOR)]
        interior: usize,
    },
}

#[derive(Debug, Clone, Args)]
#[group(skip)]
#[command(group(ArgGroup::new("model_kind").required(true).args(["quon", "ccr", "free", "file"])))]
pub struct ModelArgs {
    #[arg(long)]
    pub quon: bool,
    /// CCR algebra: T is the flip.
    #[arg(long, visible_alias = "flip")]
    pub ccr: bool,
    #[arg(long)]
    pub free: bool,
    /// Coefficient file (JSON).
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Complex scalar, e.g. `1`, `i`, `0.5-0.5i`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, conflicts_with = "lambda_arg")]
    pub lambda: Option<C64>,
    /// λ = e^{iθ}.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_arg: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[group(skip)]
#[command(group(ArgGroup::new("rep_kind").required(true).args(["k3", "k4", "k4_x1zero"])))]
pub struct RepArgs {
    /// Two-mode representation parameterized by --x.
    #[arg(long)]
    pub k3: bool,
    /// Three-mode representation parameterized by --x1 (nonzero) and --x2.
    #[arg(long)]
    pub k4: bool,
    /// Degenerate three-mode representation with x1 = 0; uses --x2.
    #[arg(long)]
    pub k4_x1zero: bool,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub x: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub x1: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub x2: Option<C64>,
}

/// Parses `re`, `imi`, or `re±imi` (e.g. `1`, `-i`, `2.5i`, `1+0.5i`, `1e-3-2i`).
pub fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {s:?} (expected re+imi)");
    let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        return Ok(C64::new(num(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |x: &str| match x {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => num(x),
    };
    let z = match split {
        Some(k) => C64::new(num(&body[..k])?, imag(&body[k..])?),
        None => C64::new(0.0, imag(body)?),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(bad())
    }
}

impl ModelArgs {
    pub fn spec(&self) -> Result<ModelSpec> {
        let d = self.d;
        let need_d = || {
            d.ok_or_else(|| WickError::InvalidParameter("--d is required for built-in models".into()))
        };
        if !self.quon && (self.q.is_some() || self.lambda.is_some() || self.lambda_arg.is_some()) {
            return Err(WickError::InvalidParameter(
                "--q/--lambda only apply to --quon".into(),
            ));
        }
        if self.quon {
            let q = self
                .q
                .ok_or_else(|| WickError::InvalidParameter("--quon needs --q".into()))?;
            let lambda = match (self.lambda, self.lambda_arg) {
                (Some(l), _) => l,
                (None, Some(theta)) => C64::from_polar(1.0, theta),
                (None, None) => C64::new(1.0, 0.0),
            };
            Ok(ModelSpec::quon(need_d()?, q, lambda))
        } else if self.ccr {
            Ok(ModelSpec::ccr_flip(need_d()?))
        } else if self.free {
            Ok(ModelSpec::free(need_d()?))
        } else {
            let path = self.file.clone().expect("clap enforces one model kind");
            let mut spec = ModelSpec::custom(path);
            spec.d = d.unwrap_or(0);
            // resolve the dimension from the file so reports echo it
            spec.d = spec.build()?.d();
            Ok(spec)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RepSpec {
    K3 { x: (f64, f64) },
    K4 { x1: (f64, f64), x2: (f64, f64) },
    K4X1Zero { x2: (f64, f64) },
}

impl RepArgs {
    pub fn spec(&self) -> Result<RepSpec> {
        let pair = |z: C64| (z.re, z.im);
        let zero = C64::new(0.0, 0.0);
        if self.k3 {
            if self.x1.is_some() || self.x2.is_some() {
                return Err(WickError::InvalidParameter("--k3 takes --x only".into()));
            }
            Ok(RepSpec::K3 {
                x: pair(self.x.unwrap_or(zero)),
            })
        } else {
            if self.x.is_some() {
                return Err(WickError::InvalidParameter("--x only applies to --k3".into()));
            }
            if self.k4 {
                let x1 = self
                    .x1
                    .ok_or_else(|| WickError::InvalidParameter("--k4 needs --x1".into()))?;
                Ok(RepSpec::K4 {
                    x1: pair(x1),
                    x2: pair(self.x2.unwrap_or(zero)),
                })
            } else {
                if self.x1.is_some_and(|z| z != zero) {
                    return Err(WickError::InvalidParameter(
                        "--k4-x1zero fixes x1 = 0".into(),
                    ));
                }
                let x2 = self
                    .x2
                    .ok_or_else(|| WickError::InvalidParameter("--k4-x1zero needs --x2".into()))?;
                Ok(RepSpec::K4X1Zero { x2: pair(x2) })
            }
        }
    }
}

/// Fully resolved parameters of one run; echoed verbatim into the report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rep: Option<RepSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interior: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub dense_cap: usize,
    #[serde(skip)]
    pub export_dir: Option<PathBuf>,
}

impl RunConfig {
    fn empty(command: &'static str) -> Self {
        Self {
            command,
            model: None,
            rep: None,
            n: None,
            m_max: None,
            cutoff: None,
            interior: None,
            rel_tol: None,
            tol: None,
            seed: None,
            dense_cap: linalg::dense_cap(),
            export_dir: None,
        }
    }

    pub fn from_command(cmd: &Command) -> Result<Self> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(WickError::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        Ok(match cmd {
            Command::CheckModel { model, tol } => Self {
                model: Some(model.spec()?),
                tol: Some(positive("--tol", *tol)?),
                ..Self::empty("check-model")
            },
            Command::IdealChain {
                model,
                m_max,
                rel_tol,
                export_dir,
            } => Self {
                model: Some(model.spec()?),
                m_max: Some(*m_max),
                rel_tol: Some(positive("--rel-tol", *rel_tol)?),
                export_dir: export_dir.clone(),
                ..Self::empty("ideal-chain")
            },
            Command::Conjecture { model, n, rel_tol } => Self {
                model: Some(model.spec()?),
                n: Some(*n),
                rel_tol: Some(positive("--rel-tol", *rel_tol)?),
                ..Self::empty("conjecture")
            },
            Command::Fock {
                model,
                n,
                tol,
                rel_tol,
                seed,
            } => Self {
                model: Some(model.spec()?),
                n: Some(*n),
                tol: Some(positive("--tol", *tol)?),
                rel_tol: Some(positive("--rel-tol", *rel_tol)?),
                seed: Some(*seed),
                ..Self::empty("fock")
            },
            Command::Reps {
                rep,
                cutoff,
                tol,
                interior,
            } => Self {
                rep: Some(rep.spec()?),
                cutoff: Some(*cutoff),
                tol: Some(positive("--tol", *tol)?),
                interior: Some(*interior),
                ..Self::empty("reps")
            },
        })
    }

    fn model(&self) -> Result<WickCoefficients> {
        self.model
            .as_ref()
            .ok_or_else(|| WickError::InvalidParameter("no model given".into()))?
            .build()
    }

    fn report(&self) -> Report {
        Report::new(serde_json::to_value(self).expect("config serializes"))
    }
}

fn identity_item(name: &str, r: &crate::tensor_ops::IdentityReport) -> Item {
    Item::residual(name, r.residual, r.tolerance)
}

pub fn cmd_check_model(config: &RunConfig) -> Result<Report> {
    let t = config.model()?;
    let tol = config.tol.unwrap_or(DEFAULT_IDENTITY_TOL);
    let mut report = config.report();
    let m = t.induced_matrix();
    let herm = (m - &linalg::adjoint(m))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    report.push(Item::residual("hermiticity", herm, tol).dim("d", t.d()));
    let braid = check_braid(&t, tol)?;
    report.push(identity_item("braid", &braid));
    let norm_t = linalg::spectral_norm(m)?;
    report.push(
        Item::new("norm_t", Verdict::Pass)
            .metric("value", norm_t)
            .flag("contraction", norm_t <= 1.0 + tol),
    );
    let t121 = op_norm(&crate::tensor_ops::TensorOperator::word(&t, 3, &[1, 2, 1])?)?;
    report.push(
        Item::new("norm_t1t2t1", Verdict::Pass)
            .metric("value", t121)
            .flag("strict_contraction", t121 < 1.0 - tol),
    );
    Ok(report)
}

pub fn cmd_ideal_chain(config: &RunConfig) -> Result<Report> {
    let t = config.model()?;
    let m_max = config.m_max.unwrap_or(5);
    let rel_tol = config.rel_tol.unwrap_or(DEFAULT_RANK_TOL);
    let mut report = config.report();
    let ideals = k_chain(&t, m_max, rel_tol)?;
    if let Some(dir) = &config.export_dir {
        std::fs::create_dir_all(dir)?;
        for e in &ideals.entries {
            e.k.write_export(dir.join(format!("k{}.json", e.m)))?;
            e.ker_r.write_export(dir.join(format!("ker_r{}.json", e.m)))?;
        }
    }
    for e in &ideals.entries {
        let mut item = Item::new(
            format!("k{}", e.m),
            Verdict::gated(e.contained, e.conclusive),
        )
        .dim("dim_k", e.dim_k)
        .dim("dim_ker_r", e.dim_ker_r)
        .flag("contained", e.contained)
        .flag("equal", e.equal)
        .metric("gap_k", e.gap_k)
        .metric("gap_ker_r", e.gap_ker_r);
        if let Some(nested) = e.nested {
            item = item.flag("nested", nested);
        }
        report.push(item);
    }
    // Sufficient condition for K_{m+1} = ker R_{m+1}; informational.
    for m in 2..m_max {
        if linalg::check_cap(t.d().pow(m as u32 + 1)).is_err() {
            break;
        }
        let inv = invertibility_hypotheses(&t, m, rel_tol)?;
        report.push(
            Item::new(format!("invertibility_m{m}"), Verdict::Pass)
                .flag("satisfied", inv.satisfied)
                .metric("sigma_min_chain", inv.sigma_min_chain)
                .metric("sigma_min_squared", inv.sigma_min_squared),
        );
    }
    Ok(report)
}

pub fn cmd_conjecture(config: &RunConfig) -> Result<Report> {
    let t = config.model()?;
    let n_max = config.n.unwrap_or(4);
    let rel_tol = config.rel_tol.unwrap_or(DEFAULT_RANK_TOL);
    if n_max < 2 {
        return Err(WickError::InvalidParameter(format!(
            "--n must be at least 2, got {n_max}"
        )));
    }
    let mut report = config.report();
    for n in 2..=n_max {
        let c = conjecture_check(&t, n, rel_tol)?;
        report.push(
            Item::new(format!("conjecture_n{n}"), c.verdict())
                .dim("dim_lhs", c.dim_lhs)
                .dim("dim_recursive_part", c.dim_recursive_part)
                .dim("dim_product_part", c.dim_product_part)
                .dim("dim_rhs", c.dim_rhs)
                .metric("residual_rhs_in_lhs", c.residual_rhs_in_lhs)
                .metric("residual_lhs_in_rhs", c.residual_lhs_in_rhs)
                .metric("min_gap", c.min_gap),
        );
    }
    Ok(report)
}

pub fn cmd_fock(config: &RunConfig) -> Result<Report> {
    let t = config.model()?;
    let n_max = config.n.unwrap_or(5);
    let tol = config.tol.unwrap_or(DEFAULT_IDENTITY_TOL);
    let rel_tol = config.rel_tol.unwrap_or(DEFAULT_RANK_TOL);
    let seed = config.seed.unwrap_or(DEFAULT_SEED);
    if n_max < 2 {
        return Err(WickError::InvalidParameter(format!(
            "--n must be at least 2, got {n_max}"
        )));
    }
    let mut report = config.report();
    let rep = FockRep::new(&t, n_max)?;
    for n in 0..=n_max {
        report.push(fock::positivity(&rep, n, POSITIVITY_TOL)?.item());
    }
    let braided = check_braid(&t, DEFAULT_IDENTITY_TOL)?.pass;
    if braided {
        for n in 2..=n_max {
            report.push(fock::gram_kernel(&rep, n, rel_tol)?.item());
        }
    } else {
        report.push(Item::new("ker_p_is_sum", Verdict::Inconclusive).note("T is not braided"));
    }
    report.push(fock::verify_star_relation(&rep, tol, seed)?.item());
    report.push(fock::verify_adjointness(&rep, tol, seed)?.item());
    if braided {
        let ideals = k_chain(&t, n_max, rel_tol)?;
        for a in fock::verify_ideal_annihilation(&t, &ideals, tol)? {
            report.push(a.item());
        }
    }
    if let Some(ModelSpec {
        d: 2,
        kind: ModelKind::Quon { q, lambda },
    }) = &config.model
    {
        if n_max >= 4 {
            let qa = fock::verify_quon_a_relations(*q, *lambda, n_max, 1e-9, seed)?;
            report.extend(qa.items());
        }
    }
    Ok(report)
}

pub fn cmd_reps(config: &RunConfig) -> Result<Report> {
    let spec = config
        .rep
        .as_ref()
        .ok_or_else(|| WickError::InvalidParameter("no representation given".into()))?;
    let cutoff = config.cutoff.unwrap_or(9);
    let tol = config.tol.unwrap_or(1e-9);
    let r = config.interior.unwrap_or(DEFAULT_INTERIOR);
    let c = |p: (f64, f64)| C64::new(p.0, p.1);
    let mut report = config.report();
    let items = |checks: Vec<oscrep::RepCheck>| checks.into_iter().map(|ch| ch.item()).collect::<Vec<_>>();
    match *spec {
        RepSpec::K3 { x } => {
            let rep = oscrep::build_rep_k3(c(x), cutoff)?;
            report.extend(items(oscrep::verify_k3(&rep, tol, r)?));
            report.extend(items(oscrep::verify_change_of_generators(c(x), cutoff, tol, r)?));
        }
        RepSpec::K4 { x1, x2 } => {
            let rep = oscrep::build_rep_k4(c(x1), c(x2), cutoff)?;
            report.extend(items(oscrep::verify_abasic(&rep, tol, r)?));
            report.extend(items(oscrep::verify_adcomrel(&rep, tol, r)?));
            report.extend(items(oscrep::verify_cbasic(&rep, tol, r)?));
            if cutoff > oscrep::K4_GENERATOR_INTERIOR {
                let ideals = k_chain(&build_ccr_flip(2)?, 4, DEFAULT_RANK_TOL)?;
                let demo = oscrep::demonstrate_k4_ne_i4(&rep, &ideals, tol)?;
                report.extend(demo.items());
            }
        }
        RepSpec::K4X1Zero { x2 } => {
            let rep = oscrep::build_rep_k4_x1zero(c(x2), cutoff)?;
            report.extend(items(oscrep::verify_abasic(&rep, tol, r)?));
        }
    }
    Ok(report)
}

pub fn execute(config: &RunConfig) -> Result<Report> {
    match config.command {
        "check-model" => cmd_check_model(config),
        "ideal-chain" => cmd_ideal_chain(config),
        "conjecture" => cmd_conjecture(config),
        "fock" => cmd_fock(config),
        "reps" => cmd_reps(config),
        other => Err(WickError::InvalidParameter(format!("unknown command {other}"))),
    }
}

/// Parses, runs and renders; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(cap) = cli.dense_cap {
        linalg::set_dense_cap(cap);
    }
    let start = Instant::now();
    let result = RunConfig::from_command(&cli.command).and_then(|config| execute(&config));
    let mut report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if cli.timing {
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let text = match cli.format {
        Format::Human => report.render_human(),
        Format::Json => report.to_json() + "\n",
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    report.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn complex_syntax() {
        assert_eq!(parse_complex("1").unwrap(), c(1.0, 0.0));
        assert_eq!(parse_complex("1+0i").unwrap(), c(1.0, 0.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("0.7i").unwrap(), c(0.0, 0.7));
        assert_eq!(parse_complex("1-0.5i").unwrap(), c(1.0, -0.5));
        assert_eq!(parse_complex("-2+i").unwrap(), c(-2.0, 1.0));
        assert_eq!(parse_complex("1e-3-2e+1i").unwrap(), c(1e-3, -20.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+2j").is_err());
        assert!(parse_complex("inf").is_err() || !parse_complex("inf").unwrap().re.is_finite());
    }

    #[test]
    fn parses_quon_command() {
        let cli = Cli::try_parse_from([
            "wick", "check-model", "--quon", "--d", "2", "--q", "0.5", "--lambda", "1+0i",
        ])
        .unwrap();
        let config = RunConfig::from_command(&cli.command).unwrap();
        assert_eq!(config.model, Some(ModelSpec::quon(2, 0.5, c(1.0, 0.0))));
        let report = execute(&config).unwrap();
        assert_eq!(report.exit_code(), 0);
        let t121 = report.items.iter().find(|i| i.name == "norm_t1t2t1").unwrap();
        assert!((t121.metrics["value"] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn lambda_arg_and_conflicts() {
        let cli = Cli::try_parse_from([
            "wick", "check-model", "--quon", "--d", "2", "--q", "0.3", "--lambda-arg", "1.5707963267948966",
        ])
        .unwrap();
        let config = RunConfig::from_command(&cli.command).unwrap();
        let ModelKind::Quon { lambda, .. } = config.model.unwrap().kind else {
            panic!("expected quon")
        };
        assert!((lambda - c(0.0, 1.0)).norm() < 1e-15);
        assert!(Cli::try_parse_from(["wick", "check-model", "--quon", "--free", "--d", "2"]).is_err());
        let cli = Cli::try_parse_from(["wick", "check-model", "--free", "--d", "2", "--q", "0.5"]).unwrap();
        assert!(RunConfig::from_command(&cli.command).is_err());
    }

    #[test]
    fn rep_arguments() {
        let cli = Cli::try_parse_from(["wick", "reps", "--k4", "--x1", "1", "--x2", "0.7i", "--N", "9"]).unwrap();
        let config = RunConfig::from_command(&cli.command).unwrap();
        assert!(matches!(config.rep, Some(RepSpec::K4 { x1: (1.0, 0.0), x2: (0.0, 0.7) })));
        let cli = Cli::try_parse_from(["wick", "reps", "--k4"]).unwrap();
        assert!(RunConfig::from_command(&cli.command).is_err());
    }

    #[test]
    fn free_fock_has_unit_gram() {
        let cli = Cli::try_parse_from(["wick", "fock", "--free", "--d", "2", "--n", "5"]).unwrap();
        let report = execute(&RunConfig::from_command(&cli.command).unwrap()).unwrap();
        assert_eq!(report.exit_code(), 0);
        for n in 0..=5 {
            let item = report.items.iter().find(|i| i.name == format!("positivity_p{n}")).unwrap();
            assert!((item.metrics["min_eigenvalue"] - 1.0).abs() < 1e-12);
        }
    }
}
