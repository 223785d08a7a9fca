//! Command-line surface.

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zerosum_core::search;
use zerosum_core::{
    formulas, verifier, AbelianGroup, CheckKind, DivisorPair, Error, GSequence, SearchBudget, Verdict,
};

use crate::cert::{
    self, Certificate, Claim, GroupInfo, Method, Parameters, Status, Timing, Value, VerifyError,
};
use crate::runtime::PoolRuntime;
use crate::spec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

/// Environment variable that overrides the default node budget.
pub const BUDGET_ENV: &str = "ZEROSUM_BUDGET_NODES";

#[derive(Parser, Debug)]
#[command(name = "zerosum", version, about = "Zero-sum invariants of finite abelian groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// d*, k*, d(G) and k(G).
    Invariants(Common),
    /// D_(d',d)(G) for one divisor pair, or for all of them.
    Dpair(Common),
    /// Γ_δ(G) with its bounds, for one δ or for all of them.
    Gamma(Common),
    /// Explicit extremal sequences.
    Construct {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kind: ConstructKind,
    },
    /// Count (and optionally list) zero-sumfree sequences.
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        length: Option<u64>,
        /// Include every sequence as a witness (requires --length).
        #[arg(long, requires = "length")]
        list: bool,
    },
    /// Exhaustive checks of theorems and conjectures.
    Check {
        #[command(flatten)]
        common: Common,
        /// Check name, or "all".
        #[arg(long, default_value = "all")]
        name: String,
        /// Length threshold for the order-divisibility check.
        #[arg(long)]
        threshold: Option<u64>,
    },
    /// Re-verify a certificate from scratch.
    VerifyCert {
        file: PathBuf,
        #[command(flatten)]
        run: RunFlags,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    Dstar,
    Kstar,
    Gamma,
}

impl ConstructKind {
    fn name(self) -> &'static str {
        match self {
            ConstructKind::Dstar => "dstar",
            ConstructKind::Kstar => "kstar",
            ConstructKind::Gamma => "gamma",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Formula,
    Search,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct Common {
    /// "2,4" or "C2xC4".
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub delta: Option<u64>,
    #[arg(long)]
    pub dprime: Option<u64>,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long, value_enum, default_value = "both")]
    pub method: MethodArg,
    #[command(flatten)]
    pub run: RunFlags,
}

#[derive(Args, Debug)]
pub struct RunFlags {
    #[arg(long)]
    pub budget_nodes: Option<u64>,
    #[arg(long, default_value_t = 300.0)]
    pub budget_seconds: f64,
    #[arg(long, default_value_t = 1)]
    pub parallel: usize,
    /// Also write the certificate, with timing, to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

impl RunFlags {
    fn budget(&self) -> Result<SearchBudget, String> {
        let max_nodes = match self.budget_nodes {
            Some(n) => n,
            None => match std::env::var(BUDGET_ENV) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| format!("{BUDGET_ENV}={v:?} is not a node count"))?,
                Err(_) => SearchBudget::default().max_nodes,
            },
        };
        if self.budget_seconds.is_nan() || self.budget_seconds < 0.0 {
            return Err("--budget-seconds must be a nonnegative number".into());
        }
        Ok(SearchBudget {
            max_nodes,
            max_seconds: self.budget_seconds,
            parallel_width: self.parallel.max(1),
        })
    }
}

/// What a command produced: the exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Parse `argv` (including the program name) and run the command.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    run(cli.command)
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::VerifyCert { file, run } => verify_cert(&file, &run),
        Command::Invariants(c) => execute("invariants", &c, Parameters::default(), invariants),
        Command::Dpair(c) => {
            let params = Parameters {
                d_prime: c.dprime,
                d: c.d,
                ..Parameters::default()
            };
            execute("dpair", &c, params, dpair)
        }
        Command::Gamma(c) => {
            let params = Parameters {
                delta: c.delta,
                ..Parameters::default()
            };
            execute("gamma", &c, params, gamma)
        }
        Command::Construct { common, kind } => {
            let params = Parameters {
                kind: Some(kind.name().into()),
                delta: common.delta,
                ..Parameters::default()
            };
            execute("construct", &common, params, |job| construct(job, kind))
        }
        Command::Enumerate { common, length, list } => {
            let params = Parameters {
                length,
                ..Parameters::default()
            };
            execute("enumerate", &common, params, |job| enumerate(job, length, list))
        }
        Command::Check { common, name, threshold } => {
            let params = Parameters {
                check: Some(name.clone()),
                delta: common.delta,
                threshold,
                ..Parameters::default()
            };
            execute("check", &common, params, |job| check(job, &name, threshold))
        }
    }
}

/// State shared by the invariant commands.
struct Job<'a> {
    group: AbelianGroup,
    common: &'a Common,
    method: MethodArg,
    budget: SearchBudget,
    runtime: PoolRuntime,
    claims: Vec<Claim>,
    notes: Vec<String>,
    inconsistent: bool,
}

/// Errors that stop a command early.
enum Stop {
    Usage(String),
    Core(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Core(e)
    }
}

type Step = Result<(), Stop>;

fn core_exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Internal(_) | Error::WitnessRejected(_) => EXIT_INCONSISTENT,
        _ => EXIT_USAGE,
    }
}

impl Job<'_> {
    fn searches(&self) -> bool {
        self.method != MethodArg::Formula
    }

    fn uses_formula(&self) -> bool {
        self.method != MethodArg::Search
    }

    /// Record a value computed by formula, search or both. With both, the
    /// two are compared and a mismatch is recorded as two separate claims.
    fn resolve(
        &mut self,
        base: Claim,
        formula: Option<Value>,
        search: impl FnOnce(&Self) -> Result<(Value, GSequence, u64), Error>,
    ) -> Step {
        let formula = if self.uses_formula() { formula } else { None };
        let searched = if self.searches() { Some(search(self)?) } else { None };
        match (formula, searched) {
            (None, None) => {
                self.notes.push(format!("{}: no closed form for this group; use --method search", base.name));
            }
            (Some(v), None) => self.claims.push(Claim { value: v, method: Method::Formula, ..base }),
            (None, Some((v, seq, nodes))) => self.claims.push(
                Claim { value: v, method: Method::Search, ..base }
                    .with_witness(&seq)
                    .extra("nodes", nodes),
            ),
            (Some(f), Some((s, seq, nodes))) if f == s => self.claims.push(
                Claim { value: s, method: Method::Both, ..base }
                    .with_witness(&seq)
                    .extra("nodes", nodes),
            ),
            (Some(f), Some((s, seq, nodes))) => {
                self.notes.push(format!("{}: formula gives {f}, search gives {s}", base.name));
                self.inconsistent = true;
                self.claims.push(Claim { value: f, method: Method::Formula, ..base.clone() });
                self.claims.push(
                    Claim { value: s, method: Method::Search, ..base }
                        .with_witness(&seq)
                        .extra("nodes", nodes),
                );
            }
        }
        Ok(())
    }
}

fn execute(
    command: &str,
    common: &Common,
    mut parameters: Parameters,
    body: impl FnOnce(&mut Job<'_>) -> Step,
) -> Outcome {
    let started = Instant::now();
    let group = match spec::parse_group_spec(&common.group) {
        Ok(g) => g,
        Err(e) => return Outcome::usage(format!("--group {:?}: {e}", common.group)),
    };
    let budget = match common.run.budget() {
        Ok(b) => b,
        Err(e) => return Outcome::usage(e),
    };
    let runtime = match PoolRuntime::new(budget.parallel_width) {
        Ok(rt) => rt,
        Err(e) => return Outcome::usage(format!("cannot start {} threads: {e}", budget.parallel_width)),
    };
    parameters.budget_nodes = budget.max_nodes;
    parameters.budget_seconds = budget.max_seconds;
    if matches!(command, "invariants" | "dpair" | "gamma") {
        parameters.method = Some(match common.method {
            MethodArg::Formula => Method::Formula,
            MethodArg::Search => Method::Search,
            MethodArg::Both => Method::Both,
        });
    }
    let mut job = Job {
        group,
        common,
        method: common.method,
        budget,
        runtime,
        claims: Vec::new(),
        notes: Vec::new(),
        inconsistent: false,
    };

    let (mut code, mut status) = (EXIT_OK, Status::Ok);
    match body(&mut job) {
        Ok(()) => {}
        Err(Stop::Usage(msg)) => return Outcome::usage(msg),
        Err(Stop::Core(e)) => {
            code = core_exit_code(&e);
            if code == EXIT_USAGE {
                return Outcome::usage(e);
            }
            status = if code == EXIT_BUDGET { Status::BudgetExceeded } else { Status::Inconsistent };
            job.notes.push(e.to_string());
        }
    }
    if job.inconsistent {
        code = EXIT_INCONSISTENT;
        status = Status::Inconsistent;
    }
    if code == EXIT_OK {
        status = cert::derived_status(&job.claims);
        let bug = job.claims.iter().any(|c| c.extra.get("implementation_bug") == Some(&Value::Bool(true)));
        code = match status {
            _ if bug => EXIT_INCONSISTENT,
            Status::Counterexample => EXIT_COUNTEREXAMPLE,
            Status::BudgetExceeded => EXIT_BUDGET,
            _ => EXIT_OK,
        };
        if bug {
            status = Status::Inconsistent;
        }
    }

    let mut certificate = Certificate {
        schema_version: cert::SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        group: GroupInfo {
            spec: common.group.clone(),
            invariant_factors: job.group.invariant_factors().to_vec(),
        },
        parameters,
        status,
        claims: job.claims,
        notes: job.notes,
        timing: None,
    };
    let stdout = render(&certificate, common.run.format);
    let mut stderr = String::new();
    if let Some(path) = &common.run.out {
        certificate.timing = Some(Timing {
            elapsed_seconds: started.elapsed().as_secs_f64(),
            parallel: budget.parallel_width,
        });
        if let Err(e) = std::fs::write(path, certificate.to_json()) {
            stderr = format!("error: cannot write {}: {e}\n", path.display());
            code = code.max(EXIT_USAGE);
        }
    }
    Outcome { code, stdout, stderr }
}

fn invariants(job: &mut Job<'_>) -> Step {
    let g = job.group.clone();
    job.claims.push(Claim::new("d_star", formulas::d_star(&g), Method::Formula));
    job.claims.push(Claim::new("k_star", formulas::k_star(&g), Method::Formula));
    job.claims.push(Claim::new("cross_bound", formulas::invariant_cross_bound(&g), Method::Formula));

    let d = formulas::davenport_closed_form(&g).map(|big_d| Value::Integer(big_d - 1));
    job.resolve(Claim::new("d", 0u64, Method::Formula), d, |job| {
        let found = search::longest_zero_sumfree(&job.group, &job.budget, &job.runtime)?;
        Ok((found.value.into(), found.witness.sequence, found.nodes))
    })?;

    let k = formulas::little_cross_p_group(&g).ok().map(Value::from);
    job.resolve(Claim::new("k", 0u64, Method::Formula), k, |job| {
        let found = search::max_cross_number(&job.group, &job.budget, &job.runtime)?;
        Ok((found.value.into(), found.witness.sequence, found.nodes))
    })
}

fn dpair(job: &mut Job<'_>) -> Step {
    let g = job.group.clone();
    let pairs = match (job.common.dprime, job.common.d) {
        (Some(dp), Some(d)) => {
            let pair = DivisorPair::new(dp, d);
            pair.validate(&g)?;
            vec![pair]
        }
        (None, None) => DivisorPair::all(&g),
        _ => return Err(Stop::Usage("--dprime and --d must be given together".into())),
    };
    for pair in pairs {
        let base = Claim::new("D_pair", 0u64, Method::Formula)
            .param("d_prime", pair.d_prime)
            .param("d", pair.d);
        let formula = if job.uses_formula() {
            Some(search::d_pair_formula_or_oracle(&g, pair, &job.budget, &job.runtime)?.into())
        } else {
            None
        };
        let oracle = matches!(formulas::d_pair_formula(&g, pair), Err(Error::NeedsOracle { .. }));
        let before = job.claims.len();
        job.resolve(base, formula, |job| {
            let found = search::d_pair_bruteforce(&job.group, pair, &job.budget, &job.runtime)?;
            Ok((found.value.into(), found.witness.sequence, found.nodes))
        })?;
        if oracle && job.uses_formula() {
            for c in &mut job.claims[before..] {
                if c.method != Method::Search {
                    c.extra.insert("reduced_group_by_search".into(), Value::Bool(true));
                }
            }
        }
    }
    Ok(())
}

fn deltas(job: &Job<'_>) -> Result<Vec<u64>, Stop> {
    let d = formulas::davenport_p_group(&job.group)?;
    Ok(match job.common.delta {
        Some(delta) => {
            formulas::check_delta(&job.group, delta)?;
            vec![delta]
        }
        None => (0..d).collect(),
    })
}

fn gamma(job: &mut Job<'_>) -> Step {
    let g = job.group.clone();
    for delta in deltas(job)? {
        let bounds = formulas::gamma_bounds(&g, delta)?;
        job.claims.push(Claim::new("gamma_lower", bounds.lower, Method::Formula).param("delta", delta));
        job.claims.push(Claim::new("gamma_upper", bounds.upper, Method::Formula).param("delta", delta));
        let before = job.claims.len();
        job.resolve(
            Claim::new("gamma_exact", 0u64, Method::Formula).param("delta", delta),
            bounds.exact.map(Value::Integer),
            |job| {
                let found = search::gamma_exact(&job.group, delta, &job.budget, &job.runtime)?;
                Ok((found.value.into(), found.witness.sequence, found.nodes))
            },
        )?;
        let exact = job.claims[before..]
            .iter()
            .find(|c| c.method != Method::Formula || bounds.exact.is_some())
            .map(|c| c.value.clone());
        if let Some(Value::Integer(exact)) = exact {
            if exact < bounds.lower || exact > bounds.upper {
                job.inconsistent = true;
                job.notes.push(format!(
                    "δ = {delta}: value {exact} outside [{}, {}]",
                    bounds.lower, bounds.upper
                ));
            }
            job.claims.push(
                Claim::new("upper_bound_attained", exact == bounds.upper, Method::Formula).param("delta", delta),
            );
        }
    }
    Ok(())
}

fn construct(job: &mut Job<'_>, kind: ConstructKind) -> Step {
    let g = job.group.clone();
    match kind {
        ConstructKind::Gamma => {
            for delta in deltas(job)? {
                job.claims.push(cert::construction_claim(&g, "gamma", Some(delta))?);
            }
        }
        _ => job.claims.push(cert::construction_claim(&g, kind.name(), None)?),
    }
    Ok(())
}

fn enumerate(job: &mut Job<'_>, length: Option<u64>, list: bool) -> Step {
    let g = job.group.clone();
    match length {
        Some(length) => {
            let found = Mutex::new(Vec::new());
            let count = search::enumerate_zero_sumfree(&g, length as usize, &job.budget, &job.runtime, |ranks| {
                if list {
                    found.lock().expect("poisoned").push(ranks.to_vec());
                }
            })?;
            job.claims.push(
                Claim::new("zero_sumfree_sequences", count, Method::Enumeration).param("length", length),
            );
            let mut found = found.into_inner().expect("poisoned");
            // canonical rank vectors sort in search order
            found.sort_unstable();
            for (i, ranks) in found.iter().enumerate() {
                let seq = GSequence::from_ranks(&g, ranks);
                job.claims.push(
                    Claim::new("zero_sumfree_sequence", length, Method::Enumeration)
                        .param("length", length)
                        .param("index", i as u64)
                        .with_witness(&seq),
                );
            }
        }
        None => {
            let census = search::census(&g, usize::MAX, &job.budget, &job.runtime)?;
            for (length, &count) in census.by_length.iter().enumerate() {
                job.claims.push(
                    Claim::new("zero_sumfree_sequences", count, Method::Enumeration)
                        .param("length", length as u64),
                );
            }
        }
    }
    Ok(())
}

fn check(job: &mut Job<'_>, name: &str, threshold: Option<u64>) -> Step {
    let g = job.group.clone();
    let kinds: Vec<CheckKind> = if name == "all" {
        CheckKind::ALL
            .into_iter()
            .filter(|k| g.is_p_group() || !k.requires_p_group())
            .collect()
    } else {
        match CheckKind::from_name(name) {
            Some(k) => vec![k],
            None => {
                let known: Vec<&str> = CheckKind::ALL.iter().map(|k| k.name()).collect();
                return Err(Stop::Usage(format!("unknown check {name:?}; expected all or one of {}", known.join(", "))));
            }
        }
    };
    for kind in kinds {
        let runs: Vec<Option<u64>> = if kind == CheckKind::GammaConjecture {
            deltas(job)?.into_iter().map(Some).collect()
        } else {
            vec![None]
        };
        for delta in runs {
            let threshold = (kind == CheckKind::OrderDivisibility)
                .then(|| threshold.unwrap_or_else(|| verifier::default_order_threshold(&g)));
            let report = verifier::run_check(kind, &g, delta, threshold, &job.budget, &job.runtime)?;
            let mut claim = Claim::new(kind.name(), report.verdict.name(), Method::Check)
                .extra("proven", report.proven)
                .extra("implementation_bug", report.implementation_bug)
                .extra("min_length", report.min_length);
            if let Some(delta) = delta {
                claim = claim.param("delta", delta);
            }
            if let Some(t) = threshold {
                claim = claim.param("threshold", t);
            }
            if let Some(m) = report.max_length {
                claim = claim.extra("max_length", m);
            }
            if report.verdict != Verdict::BudgetExceeded {
                claim = claim
                    .extra("sequences_checked", report.sequences_checked)
                    .extra("nodes", report.nodes);
                for (key, value) in &report.values {
                    claim = claim.extra(key, Value::from(*value));
                }
            }
            if let Some(seq) = &report.counterexample {
                claim = claim.with_witness(seq);
            }
            if let Some(note) = &report.note {
                job.notes.push(format!("{kind}: {note}"));
            }
            job.claims.push(claim);
        }
    }
    Ok(())
}

fn verify_cert(file: &std::path::Path, run: &RunFlags) -> Outcome {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("cannot read {}: {e}", file.display())),
    };
    let budget = match run.budget() {
        Ok(b) => b,
        Err(e) => return Outcome::usage(e),
    };
    let runtime = match PoolRuntime::new(budget.parallel_width) {
        Ok(rt) => rt,
        Err(e) => return Outcome::usage(e),
    };
    let result = Certificate::from_json(&text).and_then(|c| cert::verify_certificate(&c, &budget, &runtime));
    let verification = match result {
        Ok(v) => v,
        Err(VerifyError::Schema(msg)) => return Outcome::usage(format!("{}: {msg}", file.display())),
        Err(e @ VerifyError::Budget(_)) => {
            return Outcome {
                code: EXIT_BUDGET,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let code = if verification.accepted { EXIT_OK } else { EXIT_COUNTEREXAMPLE };
    let stdout = match run.format {
        Format::Json => {
            let body = serde_json::json!({
                "status": if verification.accepted { "accepted" } else { "rejected" },
                "claims_checked": verification.claims_checked,
                "rejection": verification.rejection,
            });
            let mut s = serde_json::to_string_pretty(&body).expect("serialises");
            s.push('\n');
            s
        }
        Format::Text => match &verification.rejection {
            None => format!("accepted ({} claims checked)\n", verification.claims_checked),
            Some(r) => format!(
                "rejected: {}{}\n",
                r.name.as_deref().map(|n| format!("claim {n}: ")).unwrap_or_default(),
                r.reason
            ),
        },
    };
    Outcome { code, stdout, stderr: String::new() }
}

pub fn render(certificate: &Certificate, format: Format) -> String {
    match format {
        Format::Json => certificate.to_json(),
        Format::Text => render_text(certificate),
    }
}

fn render_text(c: &Certificate) -> String {
    let group = AbelianGroup::new(&c.group.invariant_factors)
        .map(|g| g.to_string())
        .unwrap_or_else(|_| format!("{:?}", c.group.invariant_factors));
    let mut rows = vec![[
        "claim".to_string(),
        "params".to_string(),
        "value".to_string(),
        "method".to_string(),
        "witness".to_string(),
    ]];
    for claim in &c.claims {
        let params: Vec<String> = claim.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let witness = claim
            .witness
            .as_ref()
            .map(|w| {
                w.iter()
                    .map(|e| {
                        let coords: Vec<String> = e.coords.iter().map(u64::to_string).collect();
                        match e.multiplicity {
                            1 => format!("({})", coords.join(",")),
                            m => format!("({})^{m}", coords.join(",")),
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("·")
            })
            .unwrap_or_default();
        rows.push([
            claim.name.clone(),
            params.join(" "),
            claim.value.to_string(),
            claim.method.name().to_string(),
            witness,
        ]);
    }
    let mut widths = [0usize; 5];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = format!("{} {} [{}]  status: {}\n", c.command, group, c.group.spec, c.status.name());
    for row in &rows {
        let mut line = String::new();
        for (i, (cell, w)) in row.iter().zip(widths).enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            line.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    for note in &c.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}
