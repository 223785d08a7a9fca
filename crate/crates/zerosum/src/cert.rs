//! JSON certificates and their independent re-verification.
//!
//! A certificate records the group, the command that produced it and a list
//! of claims. Each claim carries its value and, where one exists, a witness
//! sequence. [`verify_certificate`] re-derives every claim from the
//! sequence-level routines and the closed forms, falling back to the search
//! oracle only where no closed form applies. Stored verdicts are never
//! trusted.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use zerosum_core::search::{self, ClaimKind, ClaimValue};
use zerosum_core::{
    constructions, formulas, verifier, AbelianGroup, CheckKind, DivisorPair, Error, ExactRational,
    GSequence, Runtime, SearchBudget, Verdict, Witness,
};

use crate::spec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub group: GroupInfo,
    pub parameters: Parameters,
    pub status: Status,
    pub claims: Vec<Claim>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInfo {
    /// As given by the user.
    pub spec: String,
    pub invariant_factors: Vec<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<u64>,
    pub budget_nodes: u64,
    pub budget_seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub elapsed_seconds: f64,
    pub parallel: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Counterexample,
    BudgetExceeded,
    Inconsistent,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Counterexample => "counterexample",
            Status::BudgetExceeded => "budget_exceeded",
            Status::Inconsistent => "inconsistent",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Formula,
    Search,
    Both,
    Construction,
    Enumeration,
    Check,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Formula => "formula",
            Method::Search => "search",
            Method::Both => "both",
            Method::Construction => "construction",
            Method::Enumeration => "enumeration",
            Method::Check => "check",
        }
    }

    fn searched(self) -> bool {
        matches!(self, Method::Search | Method::Both)
    }
}

/// A claimed value. Rationals are stored as `{"num": n, "den": d}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Integer(u64),
    Rational { num: i64, den: i64 },
    Text(String),
}

impl From<ClaimValue> for Value {
    fn from(v: ClaimValue) -> Self {
        match v {
            ClaimValue::Integer(n) => Value::Integer(n),
            ClaimValue::Rational(q) => q.into(),
        }
    }
}

impl From<ExactRational> for Value {
    fn from(q: ExactRational) -> Self {
        Value::Rational {
            num: q.numer(),
            den: q.denom(),
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Integer(n) => write!(f, "{n}"),
            Value::Rational { num, den } if *den == 1 => write!(f, "{num}"),
            Value::Rational { num, den } => write!(f, "{num}/{den}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

/// One element of a witness, with coordinates against the invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub coords: Vec<u64>,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claim {
    pub name: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, u64>,
    pub value: Value,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, Value>,
}

impl Claim {
    pub fn new(name: &str, value: impl Into<Value>, method: Method) -> Self {
        Claim {
            name: name.to_string(),
            params: BTreeMap::new(),
            value: value.into(),
            method,
            witness: None,
            extra: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: u64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_witness(mut self, seq: &GSequence) -> Self {
        self.witness = Some(encode_sequence(seq));
        self
    }

    pub fn extra(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extra.insert(key.to_string(), value.into());
        self
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::Integer(n)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

pub fn encode_sequence(seq: &GSequence) -> Vec<Entry> {
    seq.counts()
        .map(|(g, multiplicity)| Entry {
            coords: g.coords().to_vec(),
            multiplicity,
        })
        .collect()
}

/// Rebuild a witness. Coordinates must already be reduced.
pub fn decode_sequence(group: &AbelianGroup, entries: &[Entry]) -> Result<GSequence, String> {
    let mut seq = GSequence::new(group);
    for (i, e) in entries.iter().enumerate() {
        if e.coords.len() != group.rank() {
            return Err(format!("entry {i} has {} coordinates, expected {}", e.coords.len(), group.rank()));
        }
        if let Some((c, n)) = e
            .coords
            .iter()
            .zip(group.invariant_factors())
            .find(|(c, n)| c >= n)
        {
            return Err(format!("entry {i} has coordinate {c} outside [0, {n})"));
        }
        if e.multiplicity == 0 {
            return Err(format!("entry {i} has multiplicity 0"));
        }
        let coords: Vec<i64> = e.coords.iter().map(|&c| c as i64).collect();
        let g = group.element(&coords).map_err(|e| e.to_string())?;
        seq.push(&g, e.multiplicity).map_err(|e| e.to_string())?;
    }
    Ok(seq)
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, VerifyError> {
        let cert: Certificate =
            serde_json::from_str(text).map_err(|e| VerifyError::Schema(e.to_string()))?;
        if cert.schema_version != SCHEMA_VERSION {
            return Err(VerifyError::Schema(format!(
                "schema version {} is not supported (expected {SCHEMA_VERSION})",
                cert.schema_version
            )));
        }
        Ok(cert)
    }
}

/// Status implied by the claims alone.
pub fn derived_status(claims: &[Claim]) -> Status {
    let mut status = Status::Ok;
    for c in claims {
        if CheckKind::from_name(&c.name).is_none() {
            continue;
        }
        match &c.value {
            Value::Text(v) if v == Verdict::Counterexample.name() => status = status.max(Status::Counterexample),
            Value::Text(v) if v == Verdict::BudgetExceeded.name() => status = status.max(Status::BudgetExceeded),
            _ => {}
        }
    }
    status
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("re-verification could not finish: {0}")]
    Budget(Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    /// Index into `claims`, or `None` for certificate-level problems.
    pub claim: Option<usize>,
    pub name: Option<String>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub accepted: bool,
    pub claims_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejection: Option<Rejection>,
}

enum Fail {
    Reject(String),
    Abort(VerifyError),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Fail::Abort(VerifyError::Budget(e)),
            other => Fail::Reject(other.to_string()),
        }
    }
}

fn reject<T>(msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail::Reject(msg.into()))
}

fn expect_eq(what: &str, claimed: &Value, actual: Value) -> Result<(), Fail> {
    if *claimed == actual {
        Ok(())
    } else {
        reject(format!("{what}: claimed {claimed}, recomputed {actual}"))
    }
}

struct Checker<'a, R> {
    group: &'a AbelianGroup,
    claims: &'a [Claim],
    budget: &'a SearchBudget,
    runtime: &'a R,
}

impl<R: Runtime> Checker<'_, R> {
    fn param(&self, c: &Claim, key: &str) -> Result<u64, Fail> {
        match c.params.get(key) {
            Some(&v) => Ok(v),
            None => reject(format!("missing parameter {key}")),
        }
    }

    fn witness(&self, c: &Claim) -> Result<Option<GSequence>, Fail> {
        match &c.witness {
            None => Ok(None),
            Some(entries) => decode_sequence(self.group, entries).map(Some).map_err(Fail::Reject),
        }
    }

    fn required_witness(&self, c: &Claim) -> Result<GSequence, Fail> {
        match self.witness(c)? {
            Some(seq) => Ok(seq),
            None => reject("witness missing"),
        }
    }

    fn claim_value(c: &Claim) -> Result<ClaimValue, Fail> {
        match c.value {
            Value::Integer(n) => Ok(ClaimValue::Integer(n)),
            Value::Rational { num, den } => match ExactRational::new(num, den) {
                Some(q) if q.numer() == num && q.denom() == den => Ok(ClaimValue::Rational(q)),
                _ => reject(format!("{num}/{den} is not a reduced fraction")),
            },
            _ => reject("value has the wrong type"),
        }
    }

    fn reverify_witness(&self, c: &Claim, seq: GSequence, claim: ClaimKind) -> Result<(), Fail> {
        let w = Witness {
            sequence: seq,
            claim,
            value: Self::claim_value(c)?,
        };
        w.reverify()?;
        Ok(())
    }

    fn check(&self, c: &Claim) -> Result<(), Fail> {
        let g = self.group;
        match c.name.as_str() {
            "d_star" => expect_eq("d*(G)", &c.value, formulas::d_star(g).into()),
            "k_star" => expect_eq("k*(G)", &c.value, formulas::k_star(g).into()),
            "cross_bound" => expect_eq("Σ (n_i − 1)/n_i", &c.value, formulas::invariant_cross_bound(g).into()),
            "d" => {
                if c.method.searched() {
                    let seq = self.required_witness(c)?;
                    self.reverify_witness(c, seq, ClaimKind::LongestZeroSumfree)?;
                }
                let actual = match formulas::davenport_closed_form(g) {
                    Some(big_d) => big_d - 1,
                    None => search::longest_zero_sumfree(g, self.budget, self.runtime)?.value,
                };
                expect_eq("d(G)", &c.value, actual.into())
            }
            "k" => {
                if c.method.searched() {
                    let seq = self.required_witness(c)?;
                    self.reverify_witness(c, seq, ClaimKind::MaxCross)?;
                }
                let actual = match formulas::little_cross_p_group(g) {
                    Ok(k) => k,
                    Err(Error::NotPGroup) => search::max_cross_number(g, self.budget, self.runtime)?.value,
                    Err(e) => return Err(e.into()),
                };
                expect_eq("k(G)", &c.value, actual.into())
            }
            "D_pair" => {
                let pair = DivisorPair::new(self.param(c, "d_prime")?, self.param(c, "d")?);
                pair.validate(g)?;
                if c.method.searched() {
                    let seq = self.required_witness(c)?;
                    self.reverify_witness(c, seq, ClaimKind::DPair { pair })?;
                }
                let actual = search::d_pair_formula_or_oracle(g, pair, self.budget, self.runtime)?;
                expect_eq("D_(d',d)(G)", &c.value, actual.into())
            }
            "gamma_lower" => {
                let delta = self.param(c, "delta")?;
                expect_eq("lower bound", &c.value, formulas::gamma_lower(g, delta)?.into())
            }
            "gamma_upper" => {
                let delta = self.param(c, "delta")?;
                expect_eq("upper bound", &c.value, formulas::gamma_upper(g, delta)?.into())
            }
            "gamma_exact" => self.check_gamma_exact(c),
            "upper_bound_attained" => {
                let delta = self.param(c, "delta")?;
                let exact = self
                    .claims
                    .iter()
                    .find(|o| o.name == "gamma_exact" && o.params.get("delta") == Some(&delta))
                    .ok_or_else(|| Fail::Reject("no gamma_exact claim for this δ".into()))?;
                // the gamma_exact claim is verified on its own
                let attained = exact.value == Value::Integer(formulas::gamma_upper(g, delta)?);
                expect_eq("attainment", &c.value, attained.into())
            }
            "dstar_sequence" => {
                let seq = self.required_witness(c)?;
                if !seq.is_zero_sumfree() {
                    return reject(format!("{seq} is not zero-sumfree"));
                }
                expect_eq("witness length", &c.value, (seq.len() as u64).into())?;
                expect_eq("d*(G)", &c.value, formulas::d_star(g).into())
            }
            "kstar_sequence" => {
                let seq = self.required_witness(c)?;
                if !seq.is_zero_sumfree() {
                    return reject(format!("{seq} is not zero-sumfree"));
                }
                expect_eq("witness cross number", &c.value, seq.cross_number().into())?;
                expect_eq("k*(G)", &c.value, formulas::k_star(g).into())
            }
            "gamma_sequence" => {
                let delta = self.param(c, "delta")?;
                let seq = self.required_witness(c)?;
                self.reverify_witness(c, seq, ClaimKind::Gamma { delta })?;
                expect_eq("upper bound", &c.value, formulas::gamma_upper(g, delta)?.into())
            }
            "zero_sumfree_sequences" => {
                let length = self.param(c, "length")? as usize;
                let count = search::enumerate_zero_sumfree(g, length, self.budget, self.runtime, |_| {})?;
                expect_eq("number of sequences", &c.value, count.into())
            }
            "zero_sumfree_sequence" => {
                let length = self.param(c, "length")?;
                let seq = self.required_witness(c)?;
                if !seq.is_zero_sumfree() {
                    return reject(format!("{seq} is not zero-sumfree"));
                }
                expect_eq("witness length", &c.value, (seq.len() as u64).into())?;
                expect_eq("length", &c.value, length.into())
            }
            name => match CheckKind::from_name(name) {
                Some(kind) => self.check_verdict(c, kind),
                None => reject(format!("unknown claim {name:?}")),
            },
        }
    }

    fn check_gamma_exact(&self, c: &Claim) -> Result<(), Fail> {
        let g = self.group;
        let delta = self.param(c, "delta")?;
        let bounds = formulas::gamma_bounds(g, delta)?;
        let witness = self.witness(c)?;
        let has_witness = witness.is_some();
        if let Some(seq) = witness {
            self.reverify_witness(c, seq, ClaimKind::Gamma { delta })?;
        } else if c.method.searched() {
            return reject("witness missing");
        }
        // a witness shows Γ_δ ≤ value, so meeting the lower bound settles it
        if has_witness && c.value == Value::Integer(bounds.lower) {
            return Ok(());
        }
        let actual = match bounds.exact {
            Some(exact) => exact,
            None => search::gamma_exact(g, delta, self.budget, self.runtime)?.value,
        };
        expect_eq("Γ_δ(G)", &c.value, actual.into())
    }

    fn check_verdict(&self, c: &Claim, kind: CheckKind) -> Result<(), Fail> {
        let delta = c.params.get("delta").copied();
        let threshold = c.params.get("threshold").copied();
        let report = verifier::run_check(kind, self.group, delta, threshold, self.budget, self.runtime)?;
        if report.verdict == Verdict::BudgetExceeded {
            return Err(Fail::Abort(VerifyError::Budget(Error::BudgetExceeded {
                limit: zerosum_core::BudgetLimit::Nodes,
                nodes: report.nodes,
                completed_roots: 0,
                total_roots: 0,
            })));
        }
        expect_eq("verdict", &c.value, report.verdict.name().into())?;
        let stored = self.witness(c)?;
        if stored != report.counterexample {
            return reject("counterexample differs from the recomputed one");
        }
        for (key, value) in &c.extra {
            let actual: Value = match key.as_str() {
                "sequences_checked" => report.sequences_checked.into(),
                "proven" => report.proven.into(),
                "implementation_bug" => report.implementation_bug.into(),
                "min_length" => report.min_length.into(),
                "max_length" => match report.max_length {
                    Some(m) => m.into(),
                    None => return reject("max_length recorded for an unbounded check"),
                },
                "nodes" => report.nodes.into(),
                name => match report.value(name) {
                    Some(v) => v.into(),
                    None => return reject(format!("unknown detail {name:?}")),
                },
            };
            expect_eq(key, value, actual)?;
        }
        Ok(())
    }
}

/// Re-check every claim of `cert` from scratch.
pub fn verify_certificate<R: Runtime>(
    cert: &Certificate,
    budget: &SearchBudget,
    runtime: &R,
) -> Result<Verification, VerifyError> {
    let rejected = |claim: Option<usize>, reason: String, claims_checked| Verification {
        accepted: false,
        claims_checked,
        rejection: Some(Rejection {
            claim,
            name: claim.map(|i| cert.claims[i].name.clone()),
            reason,
        }),
    };
    let group = AbelianGroup::new(&cert.group.invariant_factors)
        .map_err(|e| VerifyError::Schema(format!("invalid group: {e}")))?;
    if group.invariant_factors() != cert.group.invariant_factors.as_slice() {
        return Ok(rejected(None, "invariant factors are not normalised".into(), 0));
    }
    match spec::parse_group_spec(&cert.group.spec) {
        Ok(g) if g == group => {}
        Ok(g) => {
            return Ok(rejected(None, format!("spec {:?} normalises to {g}, not {group}", cert.group.spec), 0))
        }
        Err(e) => return Err(VerifyError::Schema(format!("group spec: {e}"))),
    }
    if cert.status == Status::Inconsistent {
        return Ok(rejected(None, "the producing run found an inconsistency".into(), 0));
    }
    let checker = Checker {
        group: &group,
        claims: &cert.claims,
        budget,
        runtime,
    };
    for (i, c) in cert.claims.iter().enumerate() {
        match checker.check(c) {
            Ok(()) => {}
            Err(Fail::Reject(reason)) => return Ok(rejected(Some(i), reason, i)),
            Err(Fail::Abort(e)) => return Err(e),
        }
    }
    let derived = derived_status(&cert.claims);
    if cert.status != Status::BudgetExceeded && cert.status != derived {
        return Ok(rejected(
            None,
            format!("status {} does not match the claims ({})", cert.status.name(), derived.name()),
            cert.claims.len(),
        ));
    }
    Ok(Verification {
        accepted: true,
        claims_checked: cert.claims.len(),
        rejection: None,
    })
}

/// Construction claims, shared by the CLI and the tests.
pub fn construction_claim(group: &AbelianGroup, kind: &str, delta: Option<u64>) -> Result<Claim, Error> {
    Ok(match kind {
        "dstar" => {
            let seq = constructions::dstar_sequence(group)?;
            Claim::new("dstar_sequence", seq.len() as u64, Method::Construction).with_witness(&seq)
        }
        "kstar" => {
            let seq = constructions::kstar_sequence(group)?;
            Claim::new("kstar_sequence", seq.cross_number(), Method::Construction).with_witness(&seq)
        }
        _ => {
            let delta = delta.unwrap_or(0);
            let seq = constructions::gamma_extremal_sequence(group, delta)?;
            Claim::new("gamma_sequence", seq.max_order_count() as u64, Method::Construction)
                .param("delta", delta)
                .with_witness(&seq)
        }
    })
}
