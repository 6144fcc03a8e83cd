//! Command-line front end for `vk-core`.
//!
//! Every command builds a [`Report`] which is emitted either as JSON or as an
//! indented text rendering of the same tree. Exit codes: 0 on success, 2 when
//! the input does not parse or validate, 3 when the operation itself fails.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use vk_core::forms::{exterior_d, horizontalize};
use vk_core::kernel::{
    self, build_rho, decompose, generate_null, poincare_potential, sniatycki_form,
};
use vk_core::parse::{parse_form, parse_lagrangian, parse_list};
use vk_core::{DiffForm, Error, Expr, JetSpace, Lagrangian, Order, Point, ZeroTest, ZeroVerdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_OPERATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "vk",
    version,
    about = "Euler operator and null Lagrangians for first-order problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Base dimension
    #[arg(short = 'n')]
    pub n: usize,
    /// Fibre dimension
    #[arg(short = 'm')]
    pub m: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Seed for the randomized zero test
    #[arg(long, env = "VK_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct LagrangianArgs {
    #[command(flatten)]
    pub common: Common,
    /// Lagrangian over x, y and z coordinates, e.g. "z1_1*z2_2 - z1_2*z2_1"
    #[arg(allow_hyphen_values = true)]
    pub lagrangian: String,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Euler expressions of a Lagrangian
    Euler(LagrangianArgs),
    /// Test the kernel conditions and report every residual
    KernelCheck(LagrangianArgs),
    /// Multi-affine decomposition of a null Lagrangian
    Decompose(LagrangianArgs),
    /// The closed n-form on U x V attached to a null Lagrangian
    Rho(LagrangianArgs),
    /// Homotopy potential of a closed polynomial form on U x V
    Potential {
        #[command(flatten)]
        common: Common,
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Null Lagrangian from an (n-1)-form on U x V
    Generate {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
    },
    /// Divergence expression of n functions on U x V, separated by `;`
    Divergence {
        #[command(flatten)]
        common: Common,
        #[arg(allow_hyphen_values = true)]
        functions: String,
    },
    /// Sniatycki form of a Lagrangian and its horizontalization
    Sniatycki(LagrangianArgs),
    /// decompose, rho, closedness, potential and generate in sequence
    VerifyRoundtrip(LagrangianArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Euler(_) => "euler",
            Command::KernelCheck(_) => "kernel-check",
            Command::Decompose(_) => "decompose",
            Command::Rho(_) => "rho",
            Command::Potential { .. } => "potential",
            Command::Generate { .. } => "generate",
            Command::Divergence { .. } => "divergence",
            Command::Sniatycki(_) => "sniatycki",
            Command::VerifyRoundtrip(_) => "verify-roundtrip",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Euler(a)
            | Command::KernelCheck(a)
            | Command::Decompose(a)
            | Command::Rho(a)
            | Command::Sniatycki(a)
            | Command::VerifyRoundtrip(a) => &a.common,
            Command::Potential { common, .. }
            | Command::Generate { common, .. }
            | Command::Divergence { common, .. } => common,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Dims {
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub dims: Dims,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Value>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

impl Report {
    fn new(command: &str, common: &Common) -> Self {
        Report {
            command: command.to_string(),
            dims: Dims {
                n: common.n,
                m: common.m,
            },
            inputs: Map::new(),
            outputs: Map::new(),
            residuals: None,
            verdict: None,
            witnesses: Vec::new(),
            seed: common.seed,
            error: None,
        }
    }

    fn input(&mut self, key: &str, v: impl Into<Value>) {
        self.inputs.insert(key.to_string(), v.into());
    }

    fn output(&mut self, key: &str, v: impl Into<Value>) {
        self.outputs.insert(key.to_string(), v.into());
    }

    fn witness(&mut self, label: String, v: &ZeroVerdict) {
        if let ZeroVerdict::NonZero { witness, value } = v {
            self.witnesses
                .push(json!({ "of": label, "point": point_json(witness), "value": value }));
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        if let Value::Object(map) = &value {
            for key in [
                "command",
                "dims",
                "seed",
                "inputs",
                "outputs",
                "residuals",
                "verdict",
                "witnesses",
                "error",
            ] {
                if let Some(v) = map.get(key) {
                    write_text(&mut out, key, v, 0);
                }
            }
        }
        out
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("null".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(a) if a.iter().all(|x| x.is_number()) => Some(format!(
            "[{}]",
            a.iter()
                .map(Value::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        )),
        _ => None,
    }
}

fn write_text(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar_text(v) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    out.push_str(&format!("{pad}{key}:\n"));
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                write_text(out, k, x, depth + 1);
            }
        }
        Value::Array(items) => {
            for (idx, x) in items.iter().enumerate() {
                write_text(out, &format!("[{idx}]"), x, depth + 1);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

fn point_json(p: &Point) -> Value {
    Value::Object(
        p.values()
            .iter()
            .map(|(c, v)| (c.to_string(), json!(v)))
            .collect(),
    )
}

/// Result of one invocation: exit code plus what goes to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    kind: String,
    message: String,
}

impl Failure {
    fn input(e: Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }

    fn operation(e: Error) -> Self {
        Failure {
            code: EXIT_OPERATION,
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

trait Stage<T> {
    fn input(self) -> Result<T, Failure>;
    fn op(self) -> Result<T, Failure>;
}

impl<T> Stage<T> for vk_core::Result<T> {
    fn input(self) -> Result<T, Failure> {
        self.map_err(Failure::input)
    }

    fn op(self) -> Result<T, Failure> {
        self.map_err(Failure::operation)
    }
}

fn config_space(c: &Common) -> Result<JetSpace, Failure> {
    JetSpace::new(c.n, c.m, Order::Config).input()
}

fn zero_test(c: &Common) -> Result<ZeroTest, Failure> {
    if c.trials == 0 {
        return Err(Failure::input(Error::InvalidConfig(
            "trials must be at least 1".into(),
        )));
    }
    if !(c.tol > 0.0 && c.tol.is_finite()) {
        return Err(Failure::input(Error::InvalidConfig(format!(
            "tol must be positive, got {}",
            c.tol
        ))));
    }
    Ok(ZeroTest {
        trials: c.trials,
        tol: c.tol,
        seed: c.seed,
    })
}

fn strings(items: &[Expr]) -> Value {
    Value::Array(items.iter().map(|e| Value::String(e.to_string())).collect())
}

fn volume_form(l: &Lagrangian) -> Result<DiffForm, Failure> {
    DiffForm::volume(l.space()).scale(l.body()).op()
}

/// Euler components, their tiers and a null/nonzero verdict.
fn report_euler(r: &mut Report, l: &Lagrangian, test: &ZeroTest) -> Result<(), Failure> {
    let e = kernel::euler(l);
    let tiers = e.verdicts(test).op()?;
    r.output("components", strings(e.components()));
    r.output("tiers", tiers.iter().map(|v| v.label()).collect::<Vec<_>>());
    for (idx, v) in tiers.iter().enumerate() {
        r.witness(format!("E{}", idx + 1), v);
    }
    let null = tiers.iter().all(ZeroVerdict::is_zero);
    r.verdict = Some(json!(if null { "null" } else { "nonzero" }));
    Ok(())
}

fn decomposition_json(d: &kernel::Decomposition) -> (Value, Value) {
    let coeffs = d
        .coeffs()
        .iter()
        .map(|((s, sigma), v)| json!({ "s": s, "sigma": sigma, "value": v.to_string() }))
        .collect();
    (Value::String(d.f0().to_string()), Value::Array(coeffs))
}

fn execute(cmd: &Command, r: &mut Report) -> Result<(), Failure> {
    let c = cmd.common();
    let test = zero_test(c)?;
    match cmd {
        Command::Euler(a) => {
            r.input("lagrangian", a.lagrangian.as_str());
            let l = parse_lagrangian(&a.lagrangian, c.n, c.m).input()?;
            report_euler(r, &l, &test)
        }
        Command::KernelCheck(a) => {
            r.input("lagrangian", a.lagrangian.as_str());
            let l = parse_lagrangian(&a.lagrangian, c.n, c.m).input()?;
            let k = kernel::kernel_check(&l, &test).op()?;
            let hessian: Vec<Value> = k
                .hessian
                .iter()
                .map(|h| {
                    json!({ "i": h.i, "k": h.k, "sigma": h.sigma, "mu": h.mu,
                            "residual": h.residual.to_string(), "tier": h.verdict.label() })
                })
                .collect();
            let coefficients: Vec<Value> = k
                .coefficients
                .iter()
                .map(|cr| {
                    json!({ "mu": cr.mu,
                            "monomial": cr.monomial.as_ref().map(|m| m.to_string()).unwrap_or_else(|| "*".into()),
                            "residual": cr.residual.to_string(), "tier": cr.verdict.label() })
                })
                .collect();
            for h in &k.hessian {
                r.witness(
                    format!("hessian i={} k={} sigma={} mu={}", h.i, h.k, h.sigma, h.mu),
                    &h.verdict,
                );
            }
            for cr in &k.coefficients {
                let mono = cr
                    .monomial
                    .as_ref()
                    .map(|m| m.to_string())
                    .unwrap_or_else(|| "*".into());
                r.witness(format!("coefficient mu={} of {mono}", cr.mu), &cr.verdict);
            }
            r.output("hessian_ok", k.hessian.iter().all(|h| h.verdict.is_zero()));
            r.output("coefficients_checked", k.coefficients.len());
            r.residuals = Some(json!({ "hessian": hessian, "coefficients": coefficients }));
            r.verdict = Some(json!(k.verdict));
            Ok(())
        }
        Command::Decompose(a) => {
            r.input("lagrangian", a.lagrangian.as_str());
            let l = parse_lagrangian(&a.lagrangian, c.n, c.m).input()?;
            let d = decompose(&l, &test).op()?;
            let (f0, coeffs) = decomposition_json(&d);
            r.output("f0", f0);
            r.output("coeffs", coeffs);
            Ok(())
        }
        Command::Rho(a) => {
            r.input("lagrangian", a.lagrangian.as_str());
            let l = parse_lagrangian(&a.lagrangian, c.n, c.m).input()?;
            let d = decompose(&l, &test).op()?;
            let rho = build_rho(&d).op()?;
            r.output("rho", rho.to_string());
            r.output("closed", exterior_d(&rho).is_zero());
            Ok(())
        }
        Command::Potential { form, .. } => {
            r.input("form", form.as_str());
            let rho = parse_form(form, config_space(c)?, None).input()?;
            let eta = poincare_potential(&rho).op()?;
            r.output("eta", eta.to_string());
            r.output("d_eta_equals_form", exterior_d(&eta) == rho);
            Ok(())
        }
        Command::Generate { eta, .. } => {
            r.input("eta", eta.as_str());
            let form = parse_form(eta, config_space(c)?, Some(c.n - 1)).input()?;
            let l = generate_null(&form).op()?;
            r.output("lagrangian", l.body().to_string());
            report_euler(r, &l, &test)
        }
        Command::Divergence { functions, .. } => {
            r.input("functions", functions.as_str());
            let config = config_space(c)?;
            let fs = parse_list(functions, c.n, c.m).input()?;
            if fs.len() != c.n {
                return Err(Failure::input(Error::BadArity(format!(
                    "expected {} functions, found {}",
                    c.n,
                    fs.len()
                ))));
            }
            if let Some(bad) = fs
                .iter()
                .flat_map(Expr::coords)
                .find(|x| !config.contains(*x))
            {
                return Err(Failure::input(Error::NotInSpace {
                    coord: bad,
                    space: config,
                }));
            }
            let l = kernel::divergence_lagrangian(c.n, c.m, &fs).op()?;
            r.output("lagrangian", l.body().to_string());
            report_euler(r, &l, &test)
        }
        Command::Sniatycki(a) => {
            r.input("lagrangian", a.lagrangian.as_str());
            let l = parse_lagrangian(&a.lagrangian, c.n, c.m).input()?;
            let lambda = sniatycki_form(&l).op()?;
            let h = horizontalize(&lambda).op()?;
            r.output("lambda", lambda.to_string());
            r.output("horizontalized", h.to_string());
            r.output("recovers_lagrangian", h == volume_form(&l)?);
            Ok(())
        }
        Command::VerifyRoundtrip(a) => {
            r.input("lagrangian", a.lagrangian.as_str());
            let l = parse_lagrangian(&a.lagrangian, c.n, c.m).input()?;
            let mut stages = Vec::new();
            let result = roundtrip(&l, &test, &mut stages);
            r.output("stages", Value::Array(stages));
            r.verdict = Some(json!(if result.is_ok() { "ok" } else { "failed" }));
            result
        }
    }
}

fn stage(stages: &mut Vec<Value>, name: &str, status: &str, detail: String) {
    stages.push(json!({ "stage": name, "status": status, "detail": detail }));
}

fn roundtrip(l: &Lagrangian, test: &ZeroTest, stages: &mut Vec<Value>) -> Result<(), Failure> {
    let run = |stages: &mut Vec<Value>, name: &str, r: vk_core::Result<String>| match r {
        Ok(detail) => {
            stage(stages, name, "ok", detail);
            Ok(())
        }
        Err(e) => {
            stage(stages, name, "failed", e.to_string());
            Err(Failure::operation(e))
        }
    };
    let d = decompose(l, test);
    run(
        stages,
        "decompose",
        d.as_ref()
            .map(|d| format!("f0 = {}, {} coefficients", d.f0(), d.coeffs().len()))
            .map_err(Clone::clone),
    )?;
    let d = d.expect("checked above");
    let rho = build_rho(&d);
    run(
        stages,
        "rho",
        rho.as_ref().map(ToString::to_string).map_err(Clone::clone),
    )?;
    let rho = rho.expect("checked above");
    let closed = if exterior_d(&rho).is_zero() {
        Ok("d rho = 0".to_string())
    } else {
        Err(Error::NotClosed)
    };
    run(stages, "closed", closed)?;
    let eta = poincare_potential(&rho);
    run(
        stages,
        "potential",
        eta.as_ref().map(ToString::to_string).map_err(Clone::clone),
    )?;
    let eta = eta.expect("checked above");
    let back = generate_null(&eta).map_err(Failure::operation);
    let back = match back {
        Ok(b) => b,
        Err(f) => {
            stage(stages, "generate", "failed", f.message.clone());
            return Err(f);
        }
    };
    let diff = back.body() - l.body();
    if diff.is_zero() {
        stage(stages, "generate", "ok", back.body().to_string());
        Ok(())
    } else {
        let message = format!("regenerated Lagrangian differs by {diff}");
        stage(stages, "generate", "failed", message.clone());
        Err(Failure {
            code: EXIT_OPERATION,
            kind: "RoundTripMismatch".into(),
            message,
        })
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    let common = cli.command.common().clone();
    let mut report = Report::new(cli.command.name(), &common);
    let (code, stderr) = match execute(&cli.command, &mut report) {
        Ok(()) => (EXIT_OK, String::new()),
        Err(f) => {
            let msg = format!("error: {}\n", f.message);
            report.error = Some(ErrorInfo {
                kind: f.kind,
                message: f.message,
            });
            (f.code, msg)
        }
    };
    let mut stdout = match common.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    if !stdout.ends_with('\n') {
        stdout.push('\n');
    }
    Outcome {
        code,
        stdout,
        stderr,
    }
}
