//! Command-line front end: build, analyze, factor, iterate, simulate and
//! verify chains; emit machine-readable (JSON), CSV or table output.
//!
//! Exit codes: 0 success, 1 invalid parameters or usage, 2 numerical
//! failure (no factorization, bracketing failure, negative matrix), 3
//! verification failure.

mod doc;

pub use doc::{FactorDoc, OutputDocument, SimDoc};

use clap::{Args, Parser, Subcommand};
use polychain::chains::{build, ChainKind, StochasticChain};
use polychain::factor::stochastic_factors;
use polychain::families::{FamilyKind, FamilySpec};
use polychain::sim::simulate;
use polychain::verify::{run_suite, Tolerances};
use polychain::{Error as CoreError, Matrix};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "polychain",
    about = "Finite Markov chains from orthogonal and multiple orthogonal polynomials",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the stochastic matrix for a family
    Build(ChainArgs),
    /// Build plus steady state, return times, period, reversal and gap ratio
    Analyze(ChainArgs),
    /// Build plus the pure-birth/pure-death stochastic factorization
    Factor(ChainArgs),
    /// r-step transition probabilities
    Iterate(IterateArgs),
    /// Sample a trajectory and report empirical statistics
    Simulate(SimulateArgs),
    /// Run the property suite for a family and truncation size
    Verify(ChainArgs),
    /// Print the family catalog with parameter domains and flags
    ListFamilies,
}

#[derive(Args, Debug, Default, Clone)]
struct ChainArgs {
    /// Family name (see list-families)
    #[arg(long)]
    family: Option<String>,
    /// Family parameter, repeated: --param alpha=0.5
    #[arg(long = "param", value_name = "NAME=VALUE")]
    param: Vec<String>,
    /// Number of chain states m
    #[arg(long)]
    states: Option<usize>,
    /// Chain kind: scalar, II or I (default: scalar, or II for multiple families)
    #[arg(long)]
    kind: Option<String>,
    /// Diagonal shift added to the recurrence matrix
    #[arg(long)]
    shift: Option<f64>,
    /// Output format: json, csv or table
    #[arg(long)]
    format: Option<String>,
    /// Decimal digits in table output
    #[arg(long)]
    digits: Option<usize>,
    /// Write the document to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON config file with the same keys as the flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// Verification tolerance override, repeated: --tol row-sum=1e-9
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
}

#[derive(Args, Debug)]
struct IterateArgs {
    #[command(flatten)]
    chain: ChainArgs,
    /// Number of transitions
    #[arg(long)]
    r: Option<u32>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    chain: ChainArgs,
    /// Trajectory length
    #[arg(long)]
    steps: Option<u64>,
    /// RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Start state, 1-based
    #[arg(long)]
    start: Option<usize>,
}

/// Everything a subcommand needs after flag/config merging.
struct Settings {
    family: String,
    params: BTreeMap<String, f64>,
    states: usize,
    kind: Option<String>,
    shift: f64,
    format: OutputFormat,
    digits: usize,
    output: Option<PathBuf>,
    tolerances: Tolerances,
    tol_document: BTreeMap<String, f64>,
    r: Option<u32>,
    steps: u64,
    seed: u64,
    start: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum OutputFormat {
    Json,
    Csv,
    Table,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: msg.into(),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::InvalidParams(_)
            | CoreError::TruncationTooLarge { .. }
            | CoreError::UnsupportedFamily(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Entry point used by the binary and by tests. Parses `argv` (without the
/// program name), writes the document or table to `out` and diagnostics to
/// `err`, and returns the process exit code.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut full = vec!["polychain".to_string()];
    full.extend_from_slice(argv);
    let cli = match Cli::try_parse_from(&full) {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own help/version on stdout with exit 0
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 1;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::ListFamilies => {
            list_families(out);
            Ok(0)
        }
        Command::Build(args) => {
            let s = Settings::merge(&args, None, None)?;
            let (spec, kind) = s.family_spec()?;
            let chain = build(&spec, s.states, kind)?;
            let doc = s.base_document(&chain);
            s.emit(out, &doc, TableView::Build(&chain))?;
            Ok(0)
        }
        Command::Analyze(args) => {
            let s = Settings::merge(&args, None, None)?;
            let (spec, kind) = s.family_spec()?;
            let chain = build(&spec, s.states, kind)?;
            let analysis = chain.analyze()?;
            let mut doc = s.base_document(&chain);
            doc.steady_state = Some(analysis.steady_state.clone());
            doc.return_times = Some(analysis.return_times.clone());
            doc.period = Some(analysis.period);
            doc.ergodic = Some(analysis.ergodic);
            doc.gap_ratio = analysis.gap_ratio;
            doc.reversal = Some(doc::matrix_to_vec(&analysis.reversal));
            doc.warnings = analysis.warnings.clone();
            s.emit(out, &doc, TableView::Analyze(&chain, &analysis))?;
            Ok(0)
        }
        Command::Factor(args) => {
            let s = Settings::merge(&args, None, None)?;
            let (spec, kind) = s.family_spec()?;
            let chain = build(&spec, s.states, kind)?;
            let fact = stochastic_factors(&chain)?;
            let mut doc = s.base_document(&chain);
            doc.factors = Some(
                fact.factors
                    .iter()
                    .map(|f| FactorDoc {
                        role: f.role.as_str().to_string(),
                        matrix: doc::matrix_to_vec(&f.matrix),
                    })
                    .collect(),
            );
            s.emit(out, &doc, TableView::Factor(&chain, &fact))?;
            Ok(0)
        }
        Command::Iterate(args) => {
            let s = Settings::merge(&args.chain, args.r, None)?;
            let (spec, kind) = s.family_spec()?;
            let chain = build(&spec, s.states, kind)?;
            let r = s.r.unwrap_or(1);
            let pr = chain.iterated(r);
            let mut doc = s.base_document(&chain);
            doc.matrix = doc::matrix_to_vec(&pr);
            doc.r = Some(r);
            s.emit(out, &doc, TableView::Matrix(&pr))?;
            Ok(0)
        }
        Command::Simulate(args) => {
            let s = Settings::merge(&args.chain, None, Some((args.steps, args.seed, args.start)))?;
            let (spec, kind) = s.family_spec()?;
            let chain = build(&spec, s.states, kind)?;
            if s.start < 1 || s.start > chain.m {
                return Err(Failure::usage(format!(
                    "start state {} outside 1..{}",
                    s.start, chain.m
                )));
            }
            let report = simulate(&chain, s.start - 1, s.steps, s.seed);
            let mut doc = s.base_document(&chain);
            let finite = |v: &[f64]| -> Vec<Option<f64>> {
                v.iter().map(|&x| x.is_finite().then_some(x)).collect()
            };
            doc.simulation = Some(SimDoc {
                steps: report.steps,
                seed: report.seed,
                start: s.start,
                empirical_distribution: report.empirical_distribution.clone(),
                empirical_return_times: finite(&report.empirical_return_times),
                return_time_se: finite(&report.return_time_se),
                visit_counts: report.visit_counts.clone(),
            });
            s.emit(out, &doc, TableView::Simulate(&report))?;
            Ok(0)
        }
        Command::Verify(args) => {
            let s = Settings::merge(&args, None, None)?;
            let (spec, _) = s.family_spec()?;
            let checks = run_suite(&spec, s.states, &s.tolerances)?;
            let mut all_ok = true;
            for c in &checks {
                let status = if !c.passed {
                    all_ok = false;
                    "FAIL"
                } else if c.skipped {
                    "SKIP"
                } else {
                    "PASS"
                };
                let _ = writeln!(out, "[{status}] {:<22} {}", c.name, c.detail);
            }
            if all_ok {
                let _ = writeln!(out, "verify: all properties hold");
                Ok(0)
            } else {
                let _ = writeln!(err, "verify: at least one property failed");
                Ok(3)
            }
        }
    }
}

impl Settings {
    fn merge(
        args: &ChainArgs,
        r: Option<u32>,
        sim: Option<(Option<u64>, Option<u64>, Option<usize>)>,
    ) -> Result<Self, Failure> {
        let config: serde_json::Value = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Failure::usage(format!("cannot read config {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| Failure::usage(format!("config is not valid JSON: {e}")))?
            }
            None => serde_json::Value::Null,
        };
        let cfg_str = |key: &str| -> Option<String> {
            config.get(key).and_then(|v| match v {
                serde_json::Value::String(s) => Some(s.clone()),
                other => other.as_f64().map(|x| x.to_string()),
            })
        };
        let cfg_f64 = |key: &str| config.get(key).and_then(|v| v.as_f64());
        let cfg_u64 = |key: &str| config.get(key).and_then(|v| v.as_u64());

        let family = args
            .family
            .clone()
            .or_else(|| cfg_str("family"))
            .ok_or_else(|| Failure::usage("--family is required"))?
            .to_lowercase();

        let mut params = BTreeMap::new();
        if let Some(v) = config.get("param") {
            merge_param_value(v, &mut params)?;
        }
        for p in &args.param {
            let (k, v) = split_kv(p).ok_or_else(|| {
                Failure::usage(format!("--param expects NAME=VALUE, got '{p}'"))
            })?;
            params.insert(k, v);
        }

        let states = args
            .states
            .or_else(|| cfg_u64("states").map(|v| v as usize))
            .ok_or_else(|| Failure::usage("--states is required"))?;
        if states == 0 {
            return Err(Failure::usage("--states must be at least 1"));
        }

        let mut tolerances = Tolerances::default();
        let mut tol_document = BTreeMap::new();
        if let Some(serde_json::Value::Object(map)) = config.get("tol") {
            for (k, v) in map {
                let value = v
                    .as_f64()
                    .ok_or_else(|| Failure::usage(format!("tol.{k} must be a number")))?;
                if !tolerances.set(k, value) {
                    return Err(Failure::usage(format!("unknown tolerance '{k}'")));
                }
                tol_document.insert(k.clone(), value);
            }
        }
        for t in &args.tol {
            let (k, v) = split_kv(t)
                .ok_or_else(|| Failure::usage(format!("--tol expects NAME=VALUE, got '{t}'")))?;
            if !tolerances.set(&k, v) {
                return Err(Failure::usage(format!("unknown tolerance '{k}'")));
            }
            tol_document.insert(k, v);
        }

        let format = match args
            .format
            .clone()
            .or_else(|| cfg_str("format"))
            .unwrap_or_else(|| "json".into())
            .to_lowercase()
            .as_str()
        {
            "json" => OutputFormat::Json,
            "csv" => OutputFormat::Csv,
            "table" => OutputFormat::Table,
            other => return Err(Failure::usage(format!("unknown format '{other}'"))),
        };

        let (steps_arg, seed_arg, start_arg) = sim.unwrap_or((None, None, None));
        Ok(Settings {
            family,
            params,
            states,
            kind: args.kind.clone().or_else(|| cfg_str("kind")),
            shift: args.shift.or_else(|| cfg_f64("shift")).unwrap_or(0.0),
            format,
            digits: args
                .digits
                .or_else(|| cfg_u64("digits").map(|v| v as usize))
                .unwrap_or(2),
            output: args.output.clone().or_else(|| {
                cfg_str("output").map(PathBuf::from)
            }),
            tolerances,
            tol_document,
            r: r.or_else(|| cfg_u64("r").map(|v| v as u32)),
            steps: steps_arg.or_else(|| cfg_u64("steps")).unwrap_or(100_000),
            seed: seed_arg.or_else(|| cfg_u64("seed")).unwrap_or(0),
            start: start_arg
                .or_else(|| cfg_u64("start").map(|v| v as usize))
                .unwrap_or(1),
        })
    }

    fn family_spec(&self) -> Result<(FamilySpec, ChainKind), Failure> {
        let kind_of = |expected: &[&str]| -> Result<(), Failure> {
            for key in self.params.keys() {
                if !expected.contains(&key.as_str()) {
                    return Err(Failure::usage(format!(
                        "unknown parameter '{key}' for family {} (expects: {})",
                        self.family,
                        expected.join(", ")
                    )));
                }
            }
            Ok(())
        };
        let need = |name: &str| -> Result<f64, Failure> {
            self.params
                .get(name)
                .copied()
                .ok_or_else(|| Failure::usage(format!("family {} needs --param {name}=...", self.family)))
        };
        let need_n = |name: &str| -> Result<u32, Failure> {
            let v = need(name)?;
            if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
                return Err(Failure::usage(format!(
                    "parameter {name} must be a nonnegative integer, got {v}"
                )));
            }
            Ok(v as u32)
        };
        let kind = match self.family.as_str() {
            "hahn" => {
                kind_of(&["alpha", "beta", "N"])?;
                FamilyKind::Hahn {
                    alpha: need("alpha")?,
                    beta: need("beta")?,
                    n: need_n("N")?,
                }
            }
            "jacobi" | "jacobi01" => {
                kind_of(&["alpha", "beta"])?;
                FamilyKind::Jacobi01 {
                    alpha: need("alpha")?,
                    beta: need("beta")?,
                }
            }
            "meixner" => {
                kind_of(&["beta", "c"])?;
                FamilyKind::Meixner {
                    beta: need("beta")?,
                    c: need("c")?,
                }
            }
            "kravchuk" => {
                kind_of(&["p", "N"])?;
                FamilyKind::Kravchuk {
                    p: need("p")?,
                    n: need_n("N")?,
                }
            }
            "laguerre" => {
                kind_of(&["alpha"])?;
                FamilyKind::Laguerre {
                    alpha: need("alpha")?,
                }
            }
            "charlier" => {
                kind_of(&["b"])?;
                FamilyKind::Charlier { b: need("b")? }
            }
            "hermite" => {
                kind_of(&[])?;
                FamilyKind::Hermite
            }
            "multiple-hahn" => {
                kind_of(&["alpha1", "alpha2", "beta", "N"])?;
                FamilyKind::MultipleHahn {
                    alpha1: need("alpha1")?,
                    alpha2: need("alpha2")?,
                    beta: need("beta")?,
                    n: need_n("N")?,
                }
            }
            "jacobi-pineiro" => {
                kind_of(&["alpha1", "alpha2", "beta"])?;
                FamilyKind::JacobiPineiro {
                    alpha1: need("alpha1")?,
                    alpha2: need("alpha2")?,
                    beta: need("beta")?,
                }
            }
            "multiple-meixner-ii" => {
                kind_of(&["beta1", "beta2", "c"])?;
                FamilyKind::MultipleMeixnerII {
                    beta1: need("beta1")?,
                    beta2: need("beta2")?,
                    c: need("c")?,
                }
            }
            "multiple-laguerre-i" => {
                kind_of(&["alpha1", "alpha2"])?;
                FamilyKind::MultipleLaguerreI {
                    alpha1: need("alpha1")?,
                    alpha2: need("alpha2")?,
                }
            }
            other => {
                return Err(Failure::usage(format!(
                    "unknown family '{other}' (see list-families)"
                )))
            }
        };
        let spec = FamilySpec::with_shift(kind, self.shift)?;
        let chain_kind = match self.kind.as_deref() {
            None => {
                if spec.is_multiple() {
                    ChainKind::TypeII
                } else {
                    ChainKind::Scalar
                }
            }
            Some(k) => match k.to_lowercase().as_str() {
                "scalar" => ChainKind::Scalar,
                "ii" | "2" => ChainKind::TypeII,
                "i" | "1" => ChainKind::TypeI,
                other => {
                    return Err(Failure::usage(format!(
                        "unknown kind '{other}' (scalar, II or I)"
                    )))
                }
            },
        };
        Ok((spec, chain_kind))
    }

    fn base_document(&self, chain: &StochasticChain) -> OutputDocument {
        OutputDocument {
            family: self.family.clone(),
            params: self.params.clone(),
            m: chain.m,
            kind: chain.kind.as_str().to_string(),
            shift: self.shift,
            x_max: chain.x_max,
            matrix: doc::matrix_to_vec(&chain.p),
            r: None,
            steady_state: None,
            return_times: None,
            period: None,
            ergodic: None,
            gap_ratio: None,
            factors: None,
            reversal: None,
            simulation: None,
            warnings: chain.warnings.clone(),
            tolerances: self.tol_document.clone(),
        }
    }

    fn emit(
        &self,
        out: &mut dyn Write,
        doc: &OutputDocument,
        view: TableView,
    ) -> Result<(), Failure> {
        let rendered = match self.format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(doc)
                    .map_err(|e| Failure::usage(format!("serialization failed: {e}")))?;
                s.push('\n');
                s
            }
            OutputFormat::Csv => render_csv(doc),
            OutputFormat::Table => render_table(doc, view, self.digits),
        };
        match &self.output {
            Some(path) => std::fs::write(path, rendered).map_err(|e| {
                Failure::usage(format!("cannot write {}: {e}", path.display()))
            })?,
            None => {
                let _ = out.write_all(rendered.as_bytes());
            }
        }
        Ok(())
    }
}

enum TableView<'a> {
    Build(&'a StochasticChain),
    Analyze(&'a StochasticChain, &'a polychain::ChainAnalysis),
    Factor(&'a StochasticChain, &'a polychain::factor::StochasticFactorization),
    Matrix(&'a Matrix),
    Simulate(&'a polychain::sim::SimReport),
}

fn split_kv(s: &str) -> Option<(String, f64)> {
    let (k, v) = s.split_once('=')?;
    let value: f64 = v.trim().parse().ok()?;
    Some((k.trim().to_string(), value))
}

fn merge_param_value(
    v: &serde_json::Value,
    params: &mut BTreeMap<String, f64>,
) -> Result<(), Failure> {
    match v {
        serde_json::Value::Object(map) => {
            for (k, val) in map {
                let x = val
                    .as_f64()
                    .ok_or_else(|| Failure::usage(format!("param.{k} must be a number")))?;
                params.insert(k.clone(), x);
            }
            Ok(())
        }
        serde_json::Value::Array(items) => {
            for item in items {
                let s = item
                    .as_str()
                    .ok_or_else(|| Failure::usage("param array entries must be 'k=v' strings"))?;
                let (k, x) = split_kv(s)
                    .ok_or_else(|| Failure::usage(format!("bad param entry '{s}'")))?;
                params.insert(k, x);
            }
            Ok(())
        }
        _ => Err(Failure::usage("config 'param' must be an object or array")),
    }
}

fn render_csv(doc: &OutputDocument) -> String {
    let m = doc.m;
    let mut s = String::new();
    for i in 0..m {
        let row: Vec<String> = doc.matrix[i * m..(i + 1) * m]
            .iter()
            .map(|v| format!("{v:.17e}"))
            .collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn fmt_matrix(data: &[f64], m: usize, digits: usize) -> String {
    let mut s = String::new();
    let width = digits + 4;
    for i in 0..m {
        for j in 0..m {
            s.push_str(&format!("{:>width$.digits$}", data[i * m + j]));
        }
        s.push('\n');
    }
    s
}

fn fmt_vec(data: &[f64], digits: usize) -> String {
    data.iter()
        .map(|v| format!("{v:.digits$}"))
        .collect::<Vec<_>>()
        .join("  ")
}

fn render_table(doc: &OutputDocument, view: TableView, digits: usize) -> String {
    let m = doc.m;
    let mut s = format!(
        "family: {}  kind: {}  m: {}  shift: {}  x_max: {:.6}\n",
        doc.family, doc.kind, m, doc.shift, doc.x_max
    );
    match view {
        TableView::Build(chain) => {
            s.push_str("P =\n");
            s.push_str(&fmt_matrix(chain.p.as_slice(), m, digits));
        }
        TableView::Analyze(chain, analysis) => {
            s.push_str("P =\n");
            s.push_str(&fmt_matrix(chain.p.as_slice(), m, digits));
            s.push_str(&format!(
                "steady state: {}\n",
                fmt_vec(&analysis.steady_state, digits)
            ));
            s.push_str(&format!(
                "return times: {}\n",
                fmt_vec(&analysis.return_times, digits)
            ));
            s.push_str(&format!(
                "period: {}  ergodic: {}\n",
                analysis.period, analysis.ergodic
            ));
            if let Some(g) = analysis.gap_ratio {
                s.push_str(&format!("gap ratio: {g:.6}\n"));
            }
            s.push_str("time reversal Q =\n");
            s.push_str(&fmt_matrix(analysis.reversal.as_slice(), m, digits));
        }
        TableView::Factor(chain, fact) => {
            s.push_str("P =\n");
            s.push_str(&fmt_matrix(chain.p.as_slice(), m, digits));
            for (i, f) in fact.factors.iter().enumerate() {
                s.push_str(&format!("factor {} ({}):\n", i + 1, f.role.as_str()));
                s.push_str(&fmt_matrix(f.matrix.as_slice(), m, digits));
            }
        }
        TableView::Matrix(p) => {
            if let Some(r) = doc.r {
                s.push_str(&format!("P^{r} =\n"));
            } else {
                s.push_str("P =\n");
            }
            s.push_str(&fmt_matrix(p.as_slice(), m, digits));
        }
        TableView::Simulate(rep) => {
            s.push_str(&format!(
                "steps: {}  seed: {}  start: {}\n",
                rep.steps,
                rep.seed,
                rep.start_state + 1
            ));
            s.push_str(&format!(
                "empirical distribution: {}\n",
                fmt_vec(&rep.empirical_distribution, digits.max(3))
            ));
            let shown: Vec<f64> = rep
                .empirical_return_times
                .iter()
                .filter(|v| v.is_finite())
                .copied()
                .collect();
            s.push_str(&format!(
                "empirical return times (visited states): {}\n",
                fmt_vec(&shown, digits)
            ));
        }
    }
    if !doc.warnings.is_empty() {
        s.push_str(&format!("warnings: {}\n", doc.warnings.join("; ")));
    }
    s
}

fn list_families(out: &mut dyn Write) {
    let rows: &[(&str, &str, &str, &str)] = &[
        (
            "hahn",
            "alpha>-1, beta>-1, N (m<=N)",
            "scalar",
            "nonneg; pbf",
        ),
        ("jacobi", "alpha>-1, beta>-1", "scalar", "nonneg; pbf"),
        ("meixner", "beta>0, 0<c<1", "scalar", "nonneg; pbf"),
        ("kravchuk", "0<p<1, N (m<=N)", "scalar", "nonneg; pbf"),
        ("laguerre", "alpha>-1", "scalar", "nonneg; pbf"),
        ("charlier", "b>0", "scalar", "nonneg; pbf"),
        (
            "hermite",
            "(none)",
            "scalar",
            "nonneg; period 2; pbf only with shift > x_max",
        ),
        (
            "multiple-hahn",
            "alpha1,alpha2,beta>-1, alpha1-alpha2 not integer, N (m<=N)",
            "II, I",
            "nonneg iff |alpha1-alpha2|<1; pbf iff -1<alpha1-alpha2<0",
        ),
        (
            "jacobi-pineiro",
            "alpha1,alpha2,beta>-1, alpha1-alpha2 not integer",
            "II, I",
            "nonneg iff |alpha1-alpha2|<1; pbf iff -1<alpha1-alpha2<0",
        ),
        (
            "multiple-meixner-ii",
            "beta1,beta2>0, 0<c<1, beta1-beta2 not integer",
            "II, I",
            "nonneg iff |beta1-beta2|<1; pbf iff -1<beta1-beta2<0",
        ),
        (
            "multiple-laguerre-i",
            "alpha1,alpha2>-1, alpha1-alpha2 not integer",
            "II, I",
            "nonneg iff |alpha1-alpha2|<1; pbf iff -1<alpha1-alpha2<0",
        ),
    ];
    let _ = writeln!(out, "{:<22} {:<58} {:<8} flags", "family", "parameters", "kinds");
    for (name, params, kinds, flags) in rows {
        let _ = writeln!(out, "{name:<22} {params:<58} {kinds:<8} {flags}");
    }
}
