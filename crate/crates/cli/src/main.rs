use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use whitehead_lab::additive::{
    beta_all, beta_cyclic, check_phi_conditions, conj_basis, phi_module_basis, tau, ConditionReport, PhiTuple,
    PhiTupleJson, Shape,
};
use whitehead_lab::group::{parse_group_arg, FiniteGroup, SubgroupLattice, CATALOG_NAMES, DEFAULT_ORDER_CAP, DEFAULT_SUITE};
use whitehead_lab::k1::{
    check_psi_conditions, integral_log_l, key_identity_all, random_unit, seeded_rng, theta_all, PsiTuple, PsiTupleJson,
    UnitShape,
};
use whitehead_lab::padic::{PrecisionContext, QpVec, DEFAULT_CHECK_PRECISION, INTERNAL_HEADROOM};
use whitehead_lab::ring::{group_basis, ElementJson, GroupRing};
use whitehead_lab::suite::{run_suite, SuiteConfig, SuiteReport};
use whitehead_lab::Error;

mod render;

#[derive(Parser)]
#[command(name = "whitehead-lab", version, about = "Additive and multiplicative invariants of Z_p[G] for finite p-groups")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Opts {
    /// Prime; overrides the default prime of catalog groups.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Working precision in p-adic digits (default: derived from |G|).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Digits to which identities must hold.
    #[arg(long, global = true, default_value_t = DEFAULT_CHECK_PRECISION)]
    check_precision: u32,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// A JSON group file or `catalog:name[:params]`.
    #[arg(long, global = true)]
    group: Option<String>,
    /// Number of random units (and derived sample counts).
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    #[command(subcommand)]
    Group(GroupCmd),
    #[command(subcommand)]
    Additive(AdditiveCmd),
    #[command(subcommand)]
    K1(K1Cmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Catalog entries and the default suite.
    List,
    /// Order, subgroups and conjugacy classes.
    Info,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    All,
    Cyclic,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Shape {
        match s {
            ShapeArg::All => Shape::AllSubgroups,
            ShapeArg::Cyclic => Shape::CyclicOnly,
        }
    }
}

#[derive(Args)]
struct Input {
    /// Comma-separated integer coefficients.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    coeffs: Option<String>,
    /// JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum AdditiveCmd {
    /// beta of a class function, given over the class basis.
    Beta {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = ShapeArg::Cyclic)]
        shape: ShapeArg,
    },
    /// tau of a tuple over the cyclic subgroups.
    Tau {
        #[arg(long)]
        input: PathBuf,
    },
    /// The Phi conditions on a tuple.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Howell basis of the solved Phi module modulo p^check-precision.
    Basis {
        #[arg(long, value_enum, default_value_t = ShapeArg::Cyclic)]
        shape: ShapeArg,
    },
}

#[derive(Subcommand)]
enum K1Cmd {
    /// theta(u) for a unit over the group basis.
    Theta {
        #[command(flatten)]
        input: Input,
    },
    /// The integral logarithm L(u).
    #[command(name = "L", alias = "l")]
    L {
        #[command(flatten)]
        input: Input,
    },
    /// The Psi conditions M1-M4 on a tuple.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Residuals of the key identity for every subgroup, on a given unit or
    /// on random units.
    Identity {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// The full suite on `--group`, or on the default catalog suite.
    All,
}

/// A command failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::PrecisionExhausted(_)) { 3 } else { 2 };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// What a command produced: a document and whether its checks passed.
struct Output {
    json: serde_json::Value,
    text: String,
    passed: bool,
}

impl Output {
    fn data<T: Serialize>(value: &T, text: String) -> Self {
        Output { json: serde_json::to_value(value).expect("serializable"), text, passed: true }
    }
}

struct Setup {
    lat: SubgroupLattice,
    ctx: PrecisionContext,
}

impl Opts {
    fn group(&self) -> Result<FiniteGroup, Failure> {
        let arg = self.group.as_deref().ok_or_else(|| input_error("--group is required"))?;
        Ok(parse_group_arg(arg, self.p)?.build(DEFAULT_ORDER_CAP)?)
    }

    fn context(&self, g: &FiniteGroup) -> Result<PrecisionContext, Error> {
        match self.precision {
            Some(n) => PrecisionContext::new(g.p(), n, self.check_precision, self.seed),
            None => PrecisionContext::for_group(g.p(), g.order(), self.check_precision, self.seed),
        }
    }

    fn setup(&self) -> Result<Setup, Failure> {
        let g = self.group()?;
        let ctx = self.context(&g)?;
        Ok(Setup { lat: SubgroupLattice::new(g)?, ctx })
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

/// Coefficients over `labels`, at the working precision.
fn read_vector(s: &Setup, input: &Input, labels: &[String]) -> Result<Vec<u128>, Failure> {
    let ring = s.ctx.work_ring();
    if let Some(c) = &input.coeffs {
        let v = c
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| input_error(format!("bad coefficient `{x}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        if v.len() != labels.len() {
            return Err(Error::DimensionMismatch(v.len(), labels.len()).into());
        }
        return Ok(v.into_iter().map(|x| ring.from_i64(x)).collect());
    }
    let path = input.input.as_ref().ok_or_else(|| input_error("give --coeffs or --input"))?;
    let e: ElementJson = read_json(path)?;
    if e.basis.labels != labels || e.shift != 0 {
        return Err(Error::BasisMismatch("element is not an integral vector over the expected basis".into()).into());
    }
    let (r, v) = e.dense()?;
    if r.prec() < s.ctx.n_work {
        return Err(Error::PrecisionExhausted(format!("input has {} digits, need {}", r.prec(), s.ctx.n_work)).into());
    }
    Ok(v.into_iter().map(|x| ring.reduce(x)).collect())
}

fn condition_output(report: ConditionReport) -> Output {
    let text = render::conditions(&report);
    let passed = report.passed;
    Output { json: serde_json::to_value(&report).expect("serializable"), text, passed }
}

fn group_cmd(opts: &Opts, cmd: &GroupCmd) -> Result<Output, Failure> {
    match cmd {
        GroupCmd::List => {
            let suite: Vec<_> = DEFAULT_SUITE.iter().map(|(n, p)| json!({"name": n, "p": p})).collect();
            let doc = json!({"schema": whitehead_lab::SCHEMA, "catalog": CATALOG_NAMES, "suite": suite});
            Ok(Output { text: render::list(), json: doc, passed: true })
        }
        GroupCmd::Info => {
            let s = opts.setup()?;
            let doc = render::group_info(&s.lat);
            Ok(Output { text: render::group_info_text(&s.lat), json: doc, passed: true })
        }
    }
}

fn additive_cmd(opts: &Opts, cmd: &AdditiveCmd) -> Result<Output, Failure> {
    let s = opts.setup()?;
    let lat = &s.lat;
    match cmd {
        AdditiveCmd::Beta { input, shape } => {
            let a = QpVec::integral(s.ctx.work_ring(), read_vector(&s, input, &conj_basis(lat).labels)?);
            let t = match Shape::from(*shape) {
                Shape::CyclicOnly => beta_cyclic(lat, &a)?,
                Shape::AllSubgroups => beta_all(lat, &a)?,
            };
            let j = t.to_json(lat);
            Ok(Output::data(&j, render::phi_tuple(&j)))
        }
        AdditiveCmd::Tau { input } => {
            let j: PhiTupleJson = read_json(input)?;
            let t = PhiTuple::from_json(lat, &j)?;
            if t.shape != Shape::CyclicOnly {
                return Err(input_error("tau takes a tuple over the cyclic subgroups"));
            }
            let v = tau(lat, &t)?.normalize();
            let e = ElementJson::new(conj_basis(lat), &v.ring(), v.numerators(), v.shift());
            Ok(Output::data(&e, render::element(&e)))
        }
        AdditiveCmd::Check { input } => {
            let j: PhiTupleJson = read_json(input)?;
            let t = PhiTuple::from_json(lat, &j)?;
            Ok(condition_output(check_phi_conditions(lat, &t, s.ctx.n_check)?))
        }
        AdditiveCmd::Basis { shape } => {
            let b = phi_module_basis(lat, Shape::from(*shape), s.ctx.n_check, INTERNAL_HEADROOM)?;
            let doc = json!({"schema": whitehead_lab::SCHEMA, "shape": Shape::from(*shape), "basis": b.to_json()});
            Ok(Output { text: render::howell(&b), json: doc, passed: true })
        }
    }
}

fn k1_cmd(opts: &Opts, cmd: &K1Cmd) -> Result<Output, Failure> {
    let s = opts.setup()?;
    let lat = &s.lat;
    let ring = s.ctx.work_ring();
    let unit = |input: &Input| -> Result<Vec<u128>, Failure> {
        let u = read_vector(&s, input, &group_basis(&lat.group).labels)?;
        if !GroupRing::new(&lat.group, ring).is_unit(&u) {
            return Err(Error::NotAUnit.into());
        }
        Ok(u)
    };
    match cmd {
        K1Cmd::Theta { input } => {
            let j = theta_all(lat, ring, &unit(input)?)?.to_json(lat);
            Ok(Output::data(&j, render::psi_tuple(&j)))
        }
        K1Cmd::L { input } => {
            let l = integral_log_l(lat, ring, &unit(input)?)?.normalize();
            let e = ElementJson::new(conj_basis(lat), &l.ring(), l.numerators(), l.shift());
            Ok(Output::data(&e, render::element(&e)))
        }
        K1Cmd::Check { input } => {
            let j: PsiTupleJson = read_json(input)?;
            let t = PsiTuple::from_json(lat, &j)?;
            Ok(condition_output(check_psi_conditions(lat, &t, s.ctx.n_check)?))
        }
        K1Cmd::Identity { input } => {
            let units = if input.coeffs.is_some() || input.input.is_some() {
                vec![unit(input)?]
            } else {
                let mut rng = seeded_rng(s.ctx.seed, 0);
                (0..opts.samples.unwrap_or(20)).map(|_| random_unit(&lat.group, ring, UnitShape::General, &mut rng)).collect()
            };
            let all: Vec<usize> = (0..lat.len()).collect();
            let rows = units.iter().map(|u| key_identity_all(lat, ring, u, &all)).collect::<Result<Vec<_>, _>>()?;
            let passed = rows.iter().flatten().all(|&r| r >= s.ctx.n_check as i64);
            let doc = json!({
                "schema": whitehead_lab::SCHEMA,
                "precision": s.ctx,
                "residuals": rows,
                "passed": passed,
            });
            Ok(Output { text: render::residuals(&rows, s.ctx.n_check), json: doc, passed })
        }
    }
}

fn suite_config(opts: &Opts, label: &str, g: &FiniteGroup) -> Result<SuiteConfig, Error> {
    let mut cfg = SuiteConfig::new(label, opts.context(g)?);
    if let Some(n) = opts.samples {
        cfg.units = n;
        cfg.lattice_samples = 2 * n;
        cfg.identity_units = (n / 5).max(1);
        cfg.tuples = (n / 5).max(1);
    }
    Ok(cfg)
}

fn verify_cmd(opts: &Opts) -> Result<Output, Failure> {
    let targets: Vec<(String, FiniteGroup)> = match &opts.group {
        Some(arg) => vec![(arg.clone(), opts.group()?)],
        None => DEFAULT_SUITE
            .iter()
            .map(|&(name, p)| {
                let g = parse_group_arg(&format!("catalog:{name}"), Some(p))?.build(DEFAULT_ORDER_CAP)?;
                Ok((name.to_string(), g))
            })
            .collect::<Result<_, Error>>()?,
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for (label, g) in targets {
        let cfg = suite_config(opts, &label, &g)?;
        let r = run_suite(g, &cfg).map_err(|e| Failure {
            code: if matches!(e.error, Error::PrecisionExhausted(_)) { 3 } else { 2 },
            message: e.to_string(),
        })?;
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed);
    let text = reports.iter().map(SuiteReport::to_text).collect::<Vec<_>>().join("\n");
    let doc = json!({"schema": whitehead_lab::SCHEMA, "passed": passed, "reports": reports});
    Ok(Output { json: doc, text, passed })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.cmd {
        Cmd::Group(c) => group_cmd(&cli.opts, c),
        Cmd::Additive(c) => additive_cmd(&cli.opts, c),
        Cmd::K1(c) => k1_cmd(&cli.opts, c),
        Cmd::Verify(VerifyCmd::All) => verify_cmd(&cli.opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    let body = match cli.opts.format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
        Format::Text => out.text,
    };
    match &cli.opts.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::from(if out.passed { 0 } else { 1 })
}
