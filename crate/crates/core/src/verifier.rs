//! The closed registry of checkable claims and a parallel runner producing
//! one report per claim.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cf_identities::{product_identity_sides, sign_identity_sides, Sign, IDENTITY_SCALE};
use crate::cfrac::{Family, NamedCf, CF_VALUE_SCALE, DEFAULT_DEPTH_CAP};
use crate::dissection::{
    dissection_lhs, dissection_terms, reduction_sides, ReductionMultiplier, ScanOutcome,
    TheoremTag, QuotientEntry, QUOTIENTS,
};
use crate::error::{Error, Result};
use crate::partitions::{count_triple, theorem_sides, THEOREM_KEYS};
use crate::series::{format_exponent, Agreement, LatticeSeries, Witness};
use crate::theta::{common_scale, helper_sides, theta_product, theta_sum, HelperIdentity, SignedMonomial};

/// Default order (lattice units) for claims on the integer lattice.
pub const DEFAULT_ORDER_INTEGER: i64 = 200;
/// Default order (lattice units) for claims on the half-power lattice.
pub const DEFAULT_ORDER_HALF: i64 = 60;
/// Default order (lattice units) for claims on the quarter-power lattice.
pub const DEFAULT_ORDER_QUARTER: i64 = 120;
/// Default bound for the vanishing-coefficient scans.
pub const DEFAULT_SCAN_ORDER: i64 = 500;

/// What a claim checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClaimKind {
    /// A helper theta identity at fixed arguments.
    Helper(HelperIdentity, Vec<SignedMonomial>),
    /// Sum and product forms of every theta function in the continued-fraction
    /// closed forms.
    TripleProduct,
    /// Stabilized continued fraction against its theta quotient.
    ContinuedFraction(NamedCf),
    /// The dissection identity for one theorem's parameters.
    Dissection(TheoremTag),
    /// Dissection left side times the multiplier against the first quotient.
    Reduction(TheoremTag),
    /// Vanishing of a quotient's coefficients along a progression.
    Vanishing(&'static QuotientEntry),
    /// Both signs of `1/X ∓ q^(o/2) X = ...`; an explicit denominator pair
    /// overrides the derived one.
    SignIdentity(NamedCf, Option<(SignedMonomial, SignedMonomial)>),
    /// Product of the `+` combinations over a family.
    ProductIdentity(Family),
    /// `first(n) - second(n - shift) - third(n) = 0`.
    Partition(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub id: String,
    pub kind: ClaimKind,
}

impl Claim {
    fn new(id: impl Into<String>, kind: ClaimKind) -> Self {
        Claim { id: id.into(), kind }
    }

    /// Lattice on which the claim's order is measured.
    pub fn scale(&self) -> u32 {
        match &self.kind {
            ClaimKind::Helper(_, args) => common_scale(args),
            ClaimKind::ContinuedFraction(_) => CF_VALUE_SCALE,
            ClaimKind::SignIdentity(..) | ClaimKind::ProductIdentity(_) => IDENTITY_SCALE,
            _ => 1,
        }
    }

    pub fn default_order(&self) -> i64 {
        if let ClaimKind::Vanishing(_) = self.kind {
            return DEFAULT_SCAN_ORDER;
        }
        match self.scale() {
            1 => DEFAULT_ORDER_INTEGER,
            2 => DEFAULT_ORDER_HALF,
            _ => DEFAULT_ORDER_QUARTER,
        }
    }

    /// Runs the check through `order` lattice units.
    pub fn check(&self, order: i64, depth_cap: usize) -> Result<Outcome> {
        let scale = self.scale();
        match &self.kind {
            ClaimKind::Helper(id, args) => {
                let (lhs, rhs) = helper_sides(*id, args, scale, order)?;
                compare(&lhs, &rhs, order)
            }
            ClaimKind::TripleProduct => {
                for cf in NamedCf::all() {
                    for (a, b) in cf.theta_args() {
                        let sum = theta_sum(a, b, scale, order)?;
                        let product = theta_product(a, b, scale, order)?;
                        let outcome = compare(&sum, &product, order)?;
                        if !outcome.is_pass() {
                            return Ok(outcome.with_note(format!("{cf}: f({a}, {b})")));
                        }
                    }
                }
                Ok(Outcome::pass())
            }
            ClaimKind::ContinuedFraction(cf) => {
                let stabilized = cf.stabilized(order, depth_cap)?;
                let closed = cf.theta_quotient(scale, order)?;
                compare(&stabilized.value, &closed, order)
            }
            ClaimKind::Dissection(tag) => {
                let params = tag.params();
                let lhs = dissection_lhs(&params, order)?;
                let mut rhs = LatticeSeries::zero(1, order);
                for term in dissection_terms(&params, order)? {
                    rhs = rhs.add(&term)?;
                }
                compare(&lhs, &rhs, order)
            }
            ClaimKind::Reduction(tag) => {
                let (lhs, rhs) = reduction_sides(*tag, order, ReductionMultiplier::FourthPower)?;
                compare(&lhs, &rhs, order)
            }
            ClaimKind::Vanishing(entry) => Ok(match entry.scan(order)? {
                ScanOutcome::AllZero => Outcome::pass(),
                ScanOutcome::FirstNonzero { n, coefficient } => Outcome::fail(Witness {
                    index: n,
                    scale: 1,
                    lhs: coefficient,
                    rhs: 0.into(),
                }),
            }),
            ClaimKind::SignIdentity(cf, denominator) => {
                for sign in Sign::BOTH {
                    let (lhs, rhs) = sign_identity_sides(*cf, sign, *denominator, order)?;
                    let outcome = compare(&lhs, &rhs, order)?;
                    if !outcome.is_pass() {
                        return Ok(outcome.with_note(format!("{sign} sign")));
                    }
                }
                Ok(Outcome::pass())
            }
            ClaimKind::ProductIdentity(family) => {
                let (lhs, rhs) = product_identity_sides(*family, order)?;
                compare(&lhs, &rhs, order)
            }
            ClaimKind::Partition(key) => {
                let (lhs, rhs) = theorem_sides(&count_triple(key)?, order)?;
                compare(&lhs, &rhs, order)
            }
        }
    }

    /// Runs the check and packages the result as a report.
    pub fn run(&self, options: &RunOptions) -> ClaimReport {
        let order = options.order.unwrap_or_else(|| self.default_order());
        let started = Instant::now();
        let result = self.check(order, options.depth_cap);
        let runtime_ms = if options.timing {
            started.elapsed().as_millis() as u64
        } else {
            0
        };
        let order_checked = OrderChecked {
            order,
            scale: self.scale(),
        };
        let (status, witness, message) = match result {
            Ok(Outcome { witness: None, .. }) => (Status::Pass, None, None),
            Ok(Outcome { witness: Some(w), note }) => (Status::Fail, Some(WitnessRecord::from(&w)), note),
            Err(e) => (Status::Error, None, Some(e.to_string())),
        };
        ClaimReport {
            claim_id: self.id.clone(),
            status,
            order_checked,
            witness,
            message,
            runtime_ms,
        }
    }
}

/// Result of one check: a witness when the two sides differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl Outcome {
    fn pass() -> Self {
        Outcome { witness: None, note: None }
    }

    fn fail(w: Witness) -> Self {
        Outcome { witness: Some(w), note: None }
    }

    fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }

    pub fn is_pass(&self) -> bool {
        self.witness.is_none()
    }
}

fn compare(lhs: &LatticeSeries, rhs: &LatticeSeries, order: i64) -> Result<Outcome> {
    Ok(match lhs.eq_to_order(rhs, order)? {
        Agreement::Equal => Outcome::pass(),
        Agreement::Differ(w) => Outcome::fail(w),
    })
}

/// The full claim set in report order.
pub fn registry() -> Vec<Claim> {
    let q = SignedMonomial::q;
    let mq = SignedMonomial::minus_q;
    let mut claims = vec![
        Claim::new("E20A", ClaimKind::Helper(HelperIdentity::E20A, vec![mq(1, 4), q(17, 4)])),
        Claim::new("E26", ClaimKind::Helper(HelperIdentity::E26, vec![mq(4, 1), mq(5, 1)])),
        Claim::new("E27", ClaimKind::Helper(HelperIdentity::E27, vec![mq(1, 4), q(17, 4)])),
        Claim::new("E31", ClaimKind::Helper(HelperIdentity::E31, vec![q(1, 4), mq(17, 4)])),
        Claim::new("E38", ClaimKind::Helper(HelperIdentity::E38, vec![])),
        Claim::new("E40", ClaimKind::Helper(HelperIdentity::E40, vec![])),
        Claim::new("TRIPLE", ClaimKind::TripleProduct),
    ];
    for cf in NamedCf::all() {
        claims.push(Claim::new(format!("CF.{cf}"), ClaimKind::ContinuedFraction(cf)));
    }
    for tag in TheoremTag::ALL {
        let t = tag.params().t;
        claims.push(Claim::new(format!("DISS.{t}"), ClaimKind::Dissection(tag)));
    }
    for tag in TheoremTag::ALL {
        claims.push(Claim::new(format!("RED.{tag}"), ClaimKind::Reduction(tag)));
    }
    for entry in &QUOTIENTS {
        claims.push(Claim::new(entry.claim_key, ClaimKind::Vanishing(entry)));
    }
    for (family, theorem) in [(Family::A, "T31"), (Family::B, "T32"), (Family::C, "T33")] {
        for i in 1..=family.count() {
            let cf = NamedCf::new(family, i).expect("index within family");
            let id = format!("{theorem}.{}", roman(i));
            claims.push(Claim::new(&id, ClaimKind::SignIdentity(cf, None)));
            if id == "T32.iii" {
                // variant with f(-q^4, -q^8) in the denominator; expected to fail
                let variant = Some((mq(4, 1), mq(8, 1)));
                claims.push(Claim::new("T32.iii-printed", ClaimKind::SignIdentity(cf, variant)));
            }
        }
        if family != Family::C {
            let id = format!("{theorem}.{}", roman(family.count() + 1));
            claims.push(Claim::new(id, ClaimKind::ProductIdentity(family)));
        }
    }
    for key in THEOREM_KEYS {
        claims.push(Claim::new(key, ClaimKind::Partition(key)));
    }
    claims
}

fn roman(i: usize) -> &'static str {
    ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii"][i - 1]
}

/// Looks up a claim by id.
pub fn find_claim(id: &str) -> Result<Claim> {
    registry()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownName(id.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderChecked {
    pub order: i64,
    pub scale: u32,
}

/// Wire form of a [`Witness`]: exponent as `k/D` or `k`, coefficients as
/// decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub exponent: String,
    pub lhs_coefficient: String,
    pub rhs_coefficient: String,
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        WitnessRecord {
            exponent: format_exponent(w.exponent()),
            lhs_coefficient: w.lhs.to_string(),
            rhs_coefficient: w.rhs.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub status: Status,
    pub order_checked: OrderChecked,
    pub witness: Option<WitnessRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Overrides every claim's default order when set.
    pub order: Option<i64>,
    pub depth_cap: usize,
    /// Worker threads; `0` lets the pool choose.
    pub jobs: usize,
    /// Records wall-clock runtimes; off gives byte-stable reports.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            order: None,
            depth_cap: DEFAULT_DEPTH_CAP,
            jobs: 0,
            timing: true,
        }
    }
}

/// Runs the claims in parallel; reports come back in input order.
pub fn run_claims(claims: &[Claim], options: &RunOptions) -> Result<Vec<ClaimReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(|| claims.par_iter().map(|c| c.run(options)).collect()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub claim_id: String,
    pub exponent: String,
}

/// Totals plus the claims confirmed and the claims refuted with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub confirmed: Vec<String>,
    pub counterexamples: Vec<Counterexample>,
}

impl Summary {
    pub fn from_reports(reports: &[ClaimReport]) -> Self {
        let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
        Summary {
            total: reports.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            errors: count(Status::Error),
            confirmed: reports
                .iter()
                .filter(|r| r.status == Status::Pass)
                .map(|r| r.claim_id.clone())
                .collect(),
            counterexamples: reports
                .iter()
                .filter_map(|r| {
                    r.witness.as_ref().map(|w| Counterexample {
                        claim_id: r.claim_id.clone(),
                        exponent: w.exponent.clone(),
                    })
                })
                .collect(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

/// Final line of a JSON report stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub summary: Summary,
}
