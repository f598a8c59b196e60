//! Command-line front end: ideal files in, canonical text or JSON out.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 hypothesis not met,
//! 3 randomized method failed, 4 two independent computations disagree.

pub mod parse;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use moncore::engine::{self, CoreReport, ValidityFlags};
use moncore::formulas::{self, FormulaError};
use moncore::newton;
use moncore::{EngineError, MonomialError, MonomialIdeal, NewtonError, RingContext};

use parse::{parse_ideal_file, parse_monomials, IdealFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_GENERICITY: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "moncore", version, about = "Cores, closures, adjoints and first coefficient ideals of monomial ideals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Override the characteristic of the ideal file (0 or a prime).
    #[arg(long = "char", global = true)]
    pub characteristic: Option<u64>,
    /// Report the running time (makes output non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoreMethodArg {
    Mono,
    Colon,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdjointMethodArg {
    Howald,
    Colon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    ColonLemma,
    ComesOut,
    AdjHypothesis,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Core of a zero-dimensional monomial ideal.
    Core {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "colon")]
        method: CoreMethodArg,
        /// First seed of the mono route; seeds s, s+1, s+2 are used.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exponent of the colon formula (default: the reduction number).
        #[arg(long)]
        t: Option<u64>,
    },
    /// Adjoint ideal adj(I^c).
    Adjoint {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        power: u64,
        #[arg(long, value_enum, default_value = "howald")]
        method: AdjointMethodArg,
        #[arg(long)]
        t: Option<u64>,
    },
    /// Integral closure of I^t.
    Closure {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        power: u64,
    },
    /// First coefficient ideal.
    Fci { file: PathBuf },
    /// Reduction number r_J(I).
    Rednum {
        file: PathBuf,
        /// Generators of J (default: the pure powers of I).
        #[arg(long)]
        reduction: Option<String>,
    },
    /// Closed-form core for the recognized shapes, cross-checked.
    Formula { file: PathBuf },
    /// Core of S_{>=n} for S = k[x_1^{a_1}, ..., x_d^{a_d}].
    Weighted {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(long)]
        n: u64,
        /// Accept a normality check of the first t powers as a last resort.
        #[arg(long)]
        t: Option<u64>,
    },
    /// t = alpha n + sum beta_i k_i with sum beta_i < n / gcd(n, k).
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        t: i64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_delimiter = ',')]
        k: Vec<u64>,
        /// Require alpha >= 0.
        #[arg(long)]
        alpha_nonneg: bool,
    },
    /// Check an identity or hypothesis on one ideal.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long, default_value_t = 1)]
        i: u64,
    },
}

/// Everything a run writes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// The machine-readable result. Fields appear in this order; absent
/// optional fields are omitted.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
    pub ring: Vec<String>,
    pub char: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<u64>>>,
    pub method: String,
    pub flags: BTreeMap<String, bool>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

struct Report {
    record: OutputRecord,
    /// Text-mode stdout.
    text: String,
    /// Text-mode stderr notes.
    notes: Vec<String>,
}

struct Failure {
    code: i32,
    message: String,
    detail: Option<Box<Report>>,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into(), detail: None }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Failure {
        let code = match &e {
            EngineError::NotAReduction(_) | EngineError::NoMonomialReduction => EXIT_HYPOTHESIS,
            EngineError::Genericity | EngineError::TooFewSeeds => EXIT_GENERICITY,
            EngineError::AdjointDisagreement { .. } | EngineError::Unstable(..) | EngineError::Guard(_) => {
                EXIT_DISAGREEMENT
            }
            EngineError::InvalidArgument(_) => EXIT_USAGE,
            EngineError::Monomial(m) => return Failure::from(m.clone()),
            EngineError::Newton(n) => return Failure::from(n.clone()),
            EngineError::Grobner(_) => EXIT_HYPOTHESIS,
        };
        let message = match &e {
            EngineError::AdjointDisagreement { colon, howald } => {
                format!("adjoint oracle disagreement: colon {colon}, Howald {howald}")
            }
            _ => e.to_string(),
        };
        Failure::new(code, message)
    }
}

impl From<MonomialError> for Failure {
    fn from(e: MonomialError) -> Failure {
        let code = match e {
            MonomialError::NotMPrimary => EXIT_HYPOTHESIS,
            _ => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<NewtonError> for Failure {
    fn from(e: NewtonError) -> Failure {
        match e {
            NewtonError::Monomial(m) => Failure::from(m),
            other => Failure::new(EXIT_USAGE, other.to_string()),
        }
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Failure {
        let code = match &e {
            FormulaError::Inconsistent(_) => EXIT_DISAGREEMENT,
            FormulaError::NotDivisible { .. } | FormulaError::DeltaDoesNotDivide(..) => EXIT_USAGE,
            FormulaError::Monomial(m) => return Failure::from(m.clone()),
            FormulaError::Newton(n) => return Failure::from(n.clone()),
            _ => EXIT_HYPOTHESIS,
        };
        Failure::new(code, e.to_string())
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn generators(ideal: &MonomialIdeal) -> Vec<Vec<u64>> {
    ideal.gens().iter().map(|g| g.to_vec()).collect()
}

fn lines(ideal: &MonomialIdeal) -> String {
    ideal.format_gens().iter().fold(String::new(), |mut s, g| {
        s.push_str(g);
        s.push('\n');
        s
    })
}

fn flag_map(flags: &ValidityFlags) -> BTreeMap<String, bool> {
    BTreeMap::from([
        ("char_condition".to_string(), flags.char_condition),
        ("equigenerated".to_string(), flags.equigenerated),
        ("reduction_found".to_string(), flags.reduction_found),
        ("seed_agreement".to_string(), flags.seed_agreement),
    ])
}

struct Input {
    file: IdealFile,
    hash: String,
}

impl Input {
    fn ring(&self) -> &Arc<RingContext> {
        &self.file.ring
    }

    fn ideal(&self) -> &MonomialIdeal {
        &self.file.ideal
    }

    fn record(&self, command: String, method: &str, result: Option<&MonomialIdeal>) -> OutputRecord {
        OutputRecord {
            command,
            input_sha256: Some(self.hash.clone()),
            ring: self.ring().names().to_vec(),
            char: Some(self.ring().field().characteristic()),
            generators: result.map(generators),
            method: method.to_string(),
            flags: BTreeMap::new(),
            extra: BTreeMap::new(),
            timing_ms: None,
        }
    }

    fn report(&self, command: String, method: &str, result: &MonomialIdeal) -> Report {
        Report { record: self.record(command, method, Some(result)), text: lines(result), notes: Vec::new() }
    }
}

fn load(path: &PathBuf, characteristic: Option<u64>) -> Result<Input, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::new(EXIT_USAGE, format!("{}: not valid UTF-8", path.display())))?;
    let mut file = parse_ideal_file(&text).map_err(|e| Failure::new(EXIT_USAGE, format!("{}:{e}", path.display())))?;
    if let Some(c) = characteristic {
        file = file.with_characteristic(c).map_err(|m| Failure::new(EXIT_USAGE, m))?;
    }
    Ok(Input { file, hash: sha256_hex(&bytes) })
}

fn reduction(ideal: &MonomialIdeal) -> Result<engine::ReductionData, Failure> {
    engine::find_monomial_reduction(ideal)?.ok_or_else(|| Failure::from(EngineError::NoMonomialReduction))
}

fn colon_hypothesis_note(report: &CoreReport, r: u64) -> String {
    format!(
        "colon formula hypotheses not met: char {} <= r = {r} and the ideal is not equigenerated",
        report.characteristic
    )
}

fn relation(a: &MonomialIdeal, b: &MonomialIdeal) -> &'static str {
    match (b.is_subset_of(a), a.is_subset_of(b)) {
        (true, false) => "strictly contains",
        (false, true) => "is strictly contained in",
        _ => "is incomparable with",
    }
}

fn cmd_core(input: &Input, echo: String, method: CoreMethodArg, seed: u64, t: Option<u64>) -> Result<Report, Failure> {
    let ideal = input.ideal();
    let seeds = [seed, seed.wrapping_add(1), seed.wrapping_add(2)];
    let run_colon = || -> Result<(CoreReport, u64), Failure> {
        let rd = reduction(ideal)?;
        Ok((engine::core_colon(ideal, &rd, t)?, rd.r))
    };
    let run_mono = || -> Result<CoreReport, Failure> { Ok(engine::core_mono(ideal, &seeds)?) };

    let with_meta = |report: &CoreReport, method: &str, r: Option<u64>| {
        let mut rep = input.report(echo.clone(), method, &report.core);
        rep.record.flags = flag_map(&report.flags);
        if let Some(t) = report.t {
            rep.record.extra.insert("t".into(), json!(t));
        }
        if let Some(r) = r {
            rep.record.extra.insert("r".into(), json!(r));
        }
        if !report.seeds.is_empty() {
            rep.record.extra.insert("seeds".into(), json!(report.seeds));
        }
        rep
    };

    match method {
        CoreMethodArg::Colon => {
            let (report, r) = run_colon()?;
            if !report.is_valid() {
                return Err(Failure::new(EXIT_HYPOTHESIS, colon_hypothesis_note(&report, r) + "; use --method mono"));
            }
            let mut rep = with_meta(&report, "colon", Some(r));
            rep.notes.push(format!("method colon, r = {r}, t = {}", report.t.unwrap_or(r)));
            Ok(rep)
        }
        CoreMethodArg::Mono => {
            let report = run_mono()?;
            let mut rep = with_meta(&report, "mono", None);
            rep.notes.push(format!("method mono, seeds {:?}", report.seeds));
            Ok(rep)
        }
        CoreMethodArg::Both => {
            let (colon, mono) = std::thread::scope(|s| {
                let c = s.spawn(run_colon);
                let m = run_mono();
                (c.join().expect("colon thread panicked"), m)
            });
            let (colon, r) = colon?;
            let mono = mono?;
            let mut flags = colon.flags;
            flags.seed_agreement = mono.flags.seed_agreement;
            let merged = CoreReport { flags, seeds: mono.seeds.clone(), ..colon.clone() };
            if mono.core == colon.core {
                let mut rep = with_meta(&merged, "both", Some(r));
                rep.notes.push(format!("mono and colon agree, r = {r}, seeds {:?}", mono.seeds));
                return Ok(rep);
            }
            let mut message = format!("mono {} colon", relation(&mono.core, &colon.core));
            if !colon.is_valid() {
                message = format!("{message} ({})", colon_hypothesis_note(&colon, r));
            }
            let mut rep = with_meta(&CoreReport { core: mono.core.clone(), ..merged }, "both", Some(r));
            rep.record.extra.insert("relation".into(), json!(message));
            rep.record.extra.insert("colon_generators".into(), json!(generators(&colon.core)));
            rep.record.extra.insert("colon_valid".into(), json!(colon.is_valid()));
            rep.text = format!("# mono\n{}# colon\n{}", lines(&mono.core), lines(&colon.core));
            Err(Failure { code: EXIT_DISAGREEMENT, message, detail: Some(Box::new(rep)) })
        }
    }
}

fn cmd_adjoint(
    input: &Input,
    echo: String,
    power: u64,
    method: AdjointMethodArg,
    t: Option<u64>,
) -> Result<Report, Failure> {
    let ideal = input.ideal();
    match method {
        AdjointMethodArg::Howald => Ok(input.report(echo, "howald", &newton::adjoint(ideal, power)?)),
        AdjointMethodArg::Colon => {
            if power != ideal.dim() as u64 {
                return Err(Failure::new(EXIT_USAGE, "the colon route computes adj(I^d) only; pass --power d"));
            }
            let rd = reduction(ideal)?;
            let adj = engine::adjoint_colon(ideal, &rd, t)?;
            let mut rep = input.report(echo, "colon", &adj);
            rep.record.extra.insert("r".into(), json!(rd.r));
            rep.notes.push("colon value agrees with Howald's description".into());
            Ok(rep)
        }
    }
}

fn cmd_rednum(input: &Input, echo: String, reduction: Option<&str>) -> Result<Report, Failure> {
    let ideal = input.ideal();
    let j = match reduction {
        Some(text) => parse_monomials(text, input.ring())
            .map_err(|e| Failure::new(EXIT_USAGE, format!("--reduction: column {}: {}", e.column, e.message)))?,
        None => reduction_or_pure_powers(ideal)?,
    };
    if !j.is_subset_of(ideal) {
        return Err(Failure::new(EXIT_HYPOTHESIS, format!("{j} is not contained in the ideal")));
    }
    let r = engine::reduction_number(&j, ideal)?;
    let mut record = input.record(echo, "powers", None);
    record.extra.insert("reduction".into(), json!(generators(&j)));
    record.extra.insert("value".into(), json!(r));
    Ok(Report { record, text: format!("{r}\n"), notes: vec![format!("J = {j}")] })
}

fn reduction_or_pure_powers(ideal: &MonomialIdeal) -> Result<MonomialIdeal, Failure> {
    let n = ideal.pure_power_exponents()?;
    Ok(MonomialIdeal::pure_powers(ideal.ring(), &n))
}

fn core_by_colon(ideal: &MonomialIdeal) -> Result<MonomialIdeal, Failure> {
    let rd = reduction(ideal)?;
    Ok(engine::core_colon(ideal, &rd, None)?.core)
}

fn cmd_formula(input: &Input, echo: String) -> Result<Report, Failure> {
    let ideal = input.ideal();
    let (formula, fci, shape, general) = match ideal.dim() {
        2 => {
            let shape = formulas::parse_dim2(ideal).ok_or_else(|| {
                Failure::new(EXIT_HYPOTHESIS, "not of the form mu (x^n, y^n, x^{n-k} y^k, ...)")
            })?;
            let formula = formulas::core_dim2(&shape)?;
            let fci = formulas::fci_dim2(&shape).ok();
            // The core of mu I' is mu core(I').
            let reduced = MonomialIdeal::minimalize(
                ideal.ring(),
                ideal.gens().iter().map(|g| g.saturating_sub(&shape.mu)),
            );
            let general = core_by_colon(&reduced)?.shift(&shape.mu)?;
            let desc = json!({"d": 2, "mu": shape.mu.to_vec(), "n": shape.n, "ks": shape.ks, "delta": shape.delta});
            (formula, fci, desc, general)
        }
        3 => {
            let shape = formulas::parse_dim3(ideal).ok_or_else(|| {
                Failure::new(
                    EXIT_HYPOTHESIS,
                    "not of the form (x^n, y^n, z^n, x^{n-k} y^k, x^{n-l} z^l, y^{n-m} z^m)",
                )
            })?;
            let formula = formulas::core_dim3(&shape)?;
            let fci = formulas::fci_dim3(&shape).ok();
            let general = core_by_colon(ideal)?;
            let desc = json!({
                "d": 3, "n": shape.n, "ks": shape.ks, "ls": shape.ls, "ms": shape.ms,
                "a": shape.a, "b": shape.b, "c": shape.c, "delta": shape.delta,
            });
            (formula, fci, desc, general)
        }
        d => return Err(Failure::new(EXIT_HYPOTHESIS, format!("no closed form in {d} variables"))),
    };
    let mut rep = input.report(echo, "formula", &formula);
    rep.record.extra.insert("shape".into(), shape.clone());
    if let Some(f) = &fci {
        rep.record.extra.insert("fci".into(), json!(generators(f)));
    }
    rep.notes.push(format!("shape {shape}"));
    if general != formula {
        rep.record.extra.insert("colon_generators".into(), json!(generators(&general)));
        rep.record.extra.insert("cross_check".into(), json!("disagree"));
        let message = format!("closed form {} the colon value", relation(&formula, &general));
        return Err(Failure { code: EXIT_DISAGREEMENT, message, detail: Some(Box::new(rep)) });
    }
    rep.record.extra.insert("cross_check".into(), json!("agree"));
    rep.notes.push("closed form agrees with the colon formula".into());
    Ok(rep)
}

fn cmd_weighted(echo: String, weights: &[u64], n: u64, t: Option<u64>) -> Result<Report, Failure> {
    if weights.is_empty() {
        return Err(Failure::new(EXIT_USAGE, "--weights needs at least one value"));
    }
    if weights.contains(&0) {
        return Err(Failure::new(EXIT_USAGE, "weights must be positive"));
    }
    let w = formulas::weighted_core(weights, n, t)?;
    let ambient = w.core.substitute_powers(weights)?;
    let ring = w.core.ring();
    let target = {
        let sum: u64 = weights.iter().sum();
        weights.len() as u64 * n + 1 - sum
    };
    let hypothesis = match w.hypothesis {
        formulas::WeightedHypothesis::LargeMultiple => "n/lcm >= d - 1".to_string(),
        formulas::WeightedHypothesis::PairwiseCoprime => "pairwise coprime weights".to_string(),
        formulas::WeightedHypothesis::UnverifiedNormality(t) => format!("powers integrally closed up to {t}"),
    };
    let record = OutputRecord {
        command: echo,
        input_sha256: None,
        ring: ring.names().to_vec(),
        char: None,
        generators: Some(generators(&ambient)),
        method: "formula".into(),
        flags: BTreeMap::from([(
            "normality_proved".to_string(),
            !matches!(w.hypothesis, formulas::WeightedHypothesis::UnverifiedNormality(_)),
        )]),
        extra: BTreeMap::from([
            ("degree".to_string(), json!(target)),
            ("hypothesis".to_string(), json!(hypothesis)),
            ("subring_generators".to_string(), json!(generators(&w.core))),
        ]),
        timing_ms: None,
    };
    Ok(Report {
        record,
        text: lines(&ambient),
        notes: vec![format!("generators of (S_{{>={target}}})R; {hypothesis}")],
    })
}

fn cmd_decompose(echo: String, t: i64, n: u64, ks: &[u64], alpha_nonneg: bool) -> Result<Report, Failure> {
    if n == 0 {
        return Err(Failure::new(EXIT_USAGE, "--n must be positive"));
    }
    let (alpha, beta) = formulas::decompose(t, n, ks, alpha_nonneg)?;
    let record = OutputRecord {
        command: echo,
        input_sha256: None,
        ring: Vec::new(),
        char: None,
        generators: None,
        method: "search".into(),
        flags: BTreeMap::new(),
        extra: BTreeMap::from([("alpha".to_string(), json!(alpha)), ("beta".to_string(), json!(beta))]),
        timing_ms: None,
    };
    let beta_text: Vec<String> = beta.iter().map(|b| b.to_string()).collect();
    Ok(Report { record, text: format!("alpha {alpha}\nbeta {}\n", beta_text.join(",")), notes: Vec::new() })
}

fn cmd_check(input: &Input, echo: String, property: Property, t: Option<u64>, i: u64) -> Result<Report, Failure> {
    let ideal = input.ideal();
    let rd = reduction(ideal)?;
    let (holds, name, t) = match property {
        Property::ColonLemma => {
            let t = t.unwrap_or(rd.r);
            (engine::check_colon_lemma(ideal, &rd, t, i)?, "colon-lemma", t)
        }
        Property::ComesOut => {
            let t = t.unwrap_or(rd.r);
            (engine::check_comes_out(ideal, &rd, t, i)?, "comes-out", t)
        }
        Property::AdjHypothesis => {
            let t = t.unwrap_or(rd.r.max(ideal.dim() as u64 - 1));
            (engine::check_adj_hypothesis(ideal, &rd, t)?, "adj-hypothesis", t)
        }
    };
    let mut record = input.record(echo, name, None);
    record.extra.insert("r".into(), json!(rd.r));
    record.extra.insert("t".into(), json!(t));
    record.extra.insert("i".into(), json!(i));
    record.extra.insert("value".into(), json!(holds));
    let rep = Report { record, text: format!("{holds}\n"), notes: Vec::new() };
    if holds {
        return Ok(rep);
    }
    let (code, message) = match property {
        Property::AdjHypothesis => (EXIT_HYPOTHESIS, "closure(I^{dt}) is not contained in I^{dt} + J^{<t+1>}"),
        _ => (EXIT_DISAGREEMENT, "identity fails"),
    };
    Err(Failure { code, message: message.into(), detail: Some(Box::new(rep)) })
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let echo = format!("{:?}", cli.command);
    let ch = cli.characteristic;
    match &cli.command {
        Command::Core { file, method, seed, t } => cmd_core(&load(file, ch)?, echo, *method, *seed, *t),
        Command::Adjoint { file, power, method, t } => cmd_adjoint(&load(file, ch)?, echo, *power, *method, *t),
        Command::Closure { file, power } => {
            let input = load(file, ch)?;
            let closed = newton::closure_of_power(input.ideal(), *power)?;
            Ok(input.report(echo, "newton", &closed))
        }
        Command::Fci { file } => {
            let input = load(file, ch)?;
            let rd = reduction(input.ideal())?;
            let fci = engine::first_coefficient_ideal(input.ideal(), &rd)?;
            let mut rep = input.report(echo, "colon", &fci);
            rep.record.extra.insert("r".into(), json!(rd.r));
            Ok(rep)
        }
        Command::Rednum { file, reduction } => cmd_rednum(&load(file, ch)?, echo, reduction.as_deref()),
        Command::Formula { file } => cmd_formula(&load(file, ch)?, echo),
        Command::Weighted { weights, n, t } => cmd_weighted(echo, weights, *n, *t),
        Command::Decompose { t, n, k, alpha_nonneg } => cmd_decompose(echo, *t, *n, k, *alpha_nonneg),
        Command::Check { file, property, t, i } => cmd_check(&load(file, ch)?, echo, *property, *t, *i),
    }
}

fn render(report: &Report, json_mode: bool) -> (String, String) {
    if json_mode {
        let mut out = serde_json::to_string(&report.record).expect("records serialize");
        out.push('\n');
        (out, String::new())
    } else {
        let mut err = String::new();
        for n in &report.notes {
            let _ = writeln!(err, "# {n}");
        }
        if let Some(ms) = report.record.timing_ms {
            let _ = writeln!(err, "# time {ms} ms");
        }
        (report.text.clone(), err)
    }
}

/// Runs one command; all output is returned rather than printed.
pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let result = dispatch(cli);
    let elapsed = cli.timing.then(|| start.elapsed().as_millis());
    match result {
        Ok(mut report) => {
            report.record.timing_ms = elapsed;
            let (stdout, stderr) = render(&report, cli.json);
            Outcome { stdout, stderr, code: EXIT_OK }
        }
        Err(failure) => {
            let (stdout, mut stderr) = match failure.detail {
                Some(mut report) => {
                    report.record.timing_ms = elapsed;
                    if cli.json {
                        report.record.extra.insert("error".into(), json!(failure.message));
                        report.record.extra.insert("exit".into(), json!(failure.code));
                    }
                    render(&report, cli.json)
                }
                None if cli.json => {
                    let v = json!({"error": failure.message, "exit": failure.code});
                    (format!("{v}\n"), String::new())
                }
                None => (String::new(), String::new()),
            };
            let _ = writeln!(stderr, "error: {}", failure.message);
            Outcome { stdout, stderr, code: failure.code }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Argument errors exit with code 1.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            }
        }
    }
}
