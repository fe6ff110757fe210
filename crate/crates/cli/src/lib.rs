//! Input parsing, report records and command implementations for the `ciani`
//! binary.

use std::io::Read;

use ciani::classifier::{classify_quartic, ClassificationResult, ComponentInvariantReport, Profile};
use ciani::graphs::DecoratedGraphType;
use ciani::hyperelliptic::{classify_hyp, l_invariants, HypCianiModel};
use ciani::oracle::{oracle_classify, RationalBranchData};
use ciani::quartic::{invariants, CianiQuartic};
use ciani::valuation::{odd_bad_primes, val_p, ValuedContext, Q};
use ciani::Error;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// Parse `n` or `n/d` with integer n, d; anything else is rejected.
pub fn parse_rational(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let int = |t: &str| {
        let ok = !t.is_empty()
            && t.strip_prefix(['-', '+'])
                .unwrap_or(t)
                .chars()
                .all(|c| c.is_ascii_digit())
            && t.chars().any(|c| c.is_ascii_digit());
        if ok {
            t.parse::<BigInt>().map_err(|e| e.to_string())
        } else {
            Err(format!("'{s}' is not an integer or a fraction n/d"))
        }
    };
    match s.split_once('/') {
        None => Ok(Q::from_integer(int(s)?)),
        Some((n, d)) => {
            let d = int(d)?;
            if d == BigInt::from(0) {
                return Err(format!("'{s}' has zero denominator"));
            }
            Ok(Q::new(int(n)?, d))
        }
    }
}

pub fn parse_list(s: &str, n: usize) -> Result<Vec<Q>, String> {
    let v: Vec<Q> = s.split(',').map(parse_rational).collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated values, got {}", v.len()));
    }
    Ok(v)
}

pub fn parse_prime(s: &str) -> Result<ValuedContext, String> {
    let p: u64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a positive integer"))?;
    ValuedContext::new(p).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum CurveInput {
    Quartic(CianiQuartic),
    Hyperelliptic(HypCianiModel),
}

impl CurveInput {
    pub fn from_fields(fields: &[&str]) -> Result<Self, String> {
        let vals: Vec<Q> = fields.iter().map(|f| parse_rational(f)).collect::<Result<_, _>>()?;
        match vals.len() {
            6 => Ok(CurveInput::Quartic(CianiQuartic::new(
                vals.try_into().expect("six values"),
            ))),
            2 => Ok(CurveInput::Hyperelliptic(HypCianiModel::new(
                vals[0].clone(),
                vals[1].clone(),
            ))),
            n => Err(format!("expected 6 quartic or 2 hyperelliptic coefficients, got {n}")),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CurveInput::Quartic(_) => "quartic",
            CurveInput::Hyperelliptic(_) => "hyperelliptic",
        }
    }

    /// Odd primes dividing the discriminant, with nonzero exponent.
    pub fn bad_primes(&self) -> Result<Vec<u64>, Error> {
        let disc = match self {
            CurveInput::Quartic(f) => invariants(f)?.delta_y,
            CurveInput::Hyperelliptic(h) => h.discriminant(),
        };
        if disc == Q::from_integer(0.into()) {
            return Err(Error::SingularCurve);
        }
        Ok(odd_bad_primes(&disc)?
            .into_iter()
            .filter_map(|(p, _)| u64::try_from(p).ok())
            .collect())
    }

    fn raw_valuations(&self, ctx: &ValuedContext) -> Result<Vec<String>, Error> {
        Ok(match self {
            CurveInput::Quartic(f) => invariants(f)?
                .five()
                .iter()
                .map(|x| val_p(x, ctx).to_string())
                .collect(),
            CurveInput::Hyperelliptic(h) => l_invariants(h).iter().map(|x| val_p(x, ctx).to_string()).collect(),
        })
    }
}

/// One classification outcome (or failure) for one curve at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub label: Option<String>,
    pub kind: String,
    pub prime: u64,
    pub case_id: Option<String>,
    pub reduction_type: Option<String>,
    pub hyperelliptic_reduction: Option<bool>,
    pub graph_type: Option<String>,
    pub components: Option<serde_json::Value>,
    pub shift: Option<String>,
    pub raw_valuations: Vec<String>,
    pub normalized_valuations: Vec<String>,
    pub auxiliary_valuation: Option<String>,
    pub warnings: Vec<String>,
    pub error: Option<String>,
}

impl ReportRecord {
    fn empty(label: Option<&str>, kind: &str, prime: u64) -> Self {
        ReportRecord {
            label: label.map(str::to_string),
            kind: kind.to_string(),
            prime,
            case_id: None,
            reduction_type: None,
            hyperelliptic_reduction: None,
            graph_type: None,
            components: None,
            shift: None,
            raw_valuations: Vec::new(),
            normalized_valuations: Vec::new(),
            auxiliary_valuation: None,
            warnings: Vec::new(),
            error: None,
        }
    }

    fn set_profile(&mut self, p: &Profile) {
        match p {
            Profile::Quartic(v) => {
                self.shift = Some(v.shift.to_string());
                self.normalized_valuations = v.normalized().iter().map(|x| x.to_string()).collect();
                self.auxiliary_valuation = Some(v.nu_aux.to_string());
            }
            Profile::Hyperelliptic(h) => {
                self.shift = Some(h.shift.to_string());
                self.normalized_valuations = h.normalized().iter().map(|x| x.to_string()).collect();
                self.auxiliary_valuation = Some(h.nu_disc.to_string());
            }
        }
    }

    fn from_result(label: Option<&str>, input: &CurveInput, prime: u64, r: &ClassificationResult) -> Self {
        let mut rec = ReportRecord::empty(label, input.kind(), prime);
        rec.case_id = Some(r.case_id.clone());
        rec.reduction_type = Some(r.reduction_type.to_string());
        rec.hyperelliptic_reduction = Some(r.reduction_type.hyperelliptic_reduction);
        rec.graph_type = Some(r.graph.name().to_string());
        rec.components = Some(serde_json::to_value(&r.components).expect("reports serialise"));
        rec.set_profile(&r.profile);
        if let ComponentInvariantReport::JPair { degenerate, roots, .. } = &r.components {
            if *degenerate {
                rec.warnings
                    .push("degenerate quadratic: j-invariants from coefficient formulas".into());
            } else if roots.is_empty() {
                rec.warnings.push("quadratic has no roots in F_p".into());
            }
        }
        rec
    }

    pub fn is_unmatched(&self) -> bool {
        self.warnings.iter().any(|w| w.starts_with("UnmatchedProfile"))
    }

    /// One line for the plain-text output.
    pub fn human(&self) -> String {
        let mut s = String::new();
        if let Some(l) = &self.label {
            s.push_str(&format!("{l}  "));
        }
        s.push_str(&format!("p={}", self.prime));
        if let Some(e) = &self.error {
            s.push_str(&format!("  error: {e}"));
            return s;
        }
        let opt = |x: &Option<String>| x.clone().unwrap_or_else(|| "-".into());
        s.push_str(&format!(
            "  {}  {}  {}",
            opt(&self.case_id),
            opt(&self.reduction_type),
            opt(&self.graph_type)
        ));
        if let Some(c) = &self.components {
            if c.get("kind").and_then(|k| k.as_str()) != Some("None") {
                s.push_str(&format!("  {c}"));
            }
        }
        s.push_str(&format!("  nu=[{}]", self.normalized_valuations.join(", ")));
        for w in &self.warnings {
            s.push_str(&format!("  [{w}]"));
        }
        s
    }
}

/// Classify one curve at one prime. Unmatched profiles yield a record with a
/// warning; other failures are returned as errors.
pub fn classify_record(label: Option<&str>, input: &CurveInput, ctx: &ValuedContext) -> Result<ReportRecord, Error> {
    let prime = ctx.p().try_into().expect("primes are parsed from u64");
    let result = match input {
        CurveInput::Quartic(f) => classify_quartic(f, ctx),
        CurveInput::Hyperelliptic(h) => classify_hyp(&h.clone().validated()?, ctx),
    };
    let mut rec = match result {
        Ok(r) => ReportRecord::from_result(label, input, prime, &r),
        Err(Error::UnmatchedProfile(p)) => {
            let mut rec = ReportRecord::empty(label, input.kind(), prime);
            rec.set_profile(&Profile::Quartic((*p).clone()));
            rec.warnings.push(format!("UnmatchedProfile: {p}"));
            rec
        }
        Err(Error::UnmatchedHypProfile(h)) => {
            let mut rec = ReportRecord::empty(label, input.kind(), prime);
            rec.set_profile(&Profile::Hyperelliptic((*h).clone()));
            rec.warnings.push(format!("UnmatchedProfile: {h}"));
            rec
        }
        Err(e) => return Err(e),
    };
    rec.raw_valuations = input.raw_valuations(ctx)?;
    Ok(rec)
}

/// Records at every odd prime dividing the discriminant.
pub fn analyze(label: Option<&str>, input: &CurveInput) -> Result<Vec<ReportRecord>, Error> {
    input
        .bad_primes()?
        .into_iter()
        .map(|p| classify_record(label, input, &ValuedContext::new(p)?))
        .collect()
}

pub enum PrimeChoice {
    Fixed(ValuedContext),
    AllOdd,
}

/// Process CSV rows `label,A,B,C,a,b,c` or `label,M,N`. Row failures become
/// records carrying `error`.
pub fn batch(reader: impl Read, header: bool, primes: &PrimeChoice) -> Result<Vec<ReportRecord>, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        let fields: Vec<&str> = row.iter().collect();
        let label = fields.first().copied().unwrap_or("").to_string();
        let fixed_prime = match primes {
            PrimeChoice::Fixed(c) => c.p().try_into().unwrap_or(0),
            PrimeChoice::AllOdd => 0,
        };
        let failure = |msg: String| {
            let mut r = ReportRecord::empty(Some(&label), "unknown", fixed_prime);
            r.error = Some(format!("row {}: {msg}", i + 1));
            r
        };
        let input = match CurveInput::from_fields(fields.get(1..).unwrap_or(&[])) {
            Ok(x) => x,
            Err(e) => {
                out.push(failure(e));
                continue;
            }
        };
        let res = match primes {
            PrimeChoice::Fixed(c) => classify_record(Some(&label), &input, c).map(|r| vec![r]),
            PrimeChoice::AllOdd => analyze(Some(&label), &input),
        };
        match res {
            Ok(rs) => out.extend(rs),
            Err(e) => {
                let mut r = failure(e.to_string());
                r.kind = input.kind().to_string();
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// One row of the decorated-graph listing.
#[derive(Clone, Debug, Serialize)]
pub struct GraphRow {
    pub graph: String,
    pub components: usize,
    pub marks: Vec<Vec<u8>>,
    pub edges: Vec<(usize, usize)>,
    pub edge_labels: Vec<u8>,
    pub stable_type: String,
    pub listed_type: String,
}

pub fn graph_rows() -> Vec<GraphRow> {
    DecoratedGraphType::ALL
        .iter()
        .map(|&g| {
            let t = g.representative();
            let dg = ciani::graphs::edge_labels(&t);
            let mut marks = vec![Vec::new(); t.components];
            for &(c, l) in &t.marks {
                marks[c].push(l);
            }
            GraphRow {
                graph: g.name().to_string(),
                components: t.components,
                marks,
                edges: t.edges.clone(),
                edge_labels: dg.edge_labels,
                stable_type: g.stable_type().name().to_string(),
                listed_type: g.listed_type().name().to_string(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleRow {
    pub label: String,
    pub prime: u64,
    pub classifier: Option<String>,
    pub oracle: Option<String>,
    pub agree: bool,
    pub error: Option<String>,
}

/// Oracle against classifier on CSV rows `label,A,B,C,a,b,c`.
pub fn oracle_check(reader: impl Read, header: bool, ctx: &ValuedContext) -> Result<Vec<OracleRow>, String> {
    let prime: u64 = ctx.p().try_into().map_err(|_| "prime too large".to_string())?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| e.to_string())?;
        let fields: Vec<&str> = row.iter().collect();
        let label = fields.first().copied().unwrap_or("").to_string();
        let mut rec = OracleRow {
            label,
            prime,
            classifier: None,
            oracle: None,
            agree: false,
            error: None,
        };
        let run = || -> Result<(String, String), String> {
            let f = match CurveInput::from_fields(fields.get(1..).unwrap_or(&[]))? {
                CurveInput::Quartic(f) => f,
                CurveInput::Hyperelliptic(_) => return Err("oracle needs a quartic row".into()),
            };
            let d = RationalBranchData::from_quartic(&f).map_err(|e| e.to_string())?;
            let c = classify_quartic(&f, ctx).map_err(|e| e.to_string())?;
            let o = oracle_classify(&d, ctx).map_err(|e| e.to_string())?;
            Ok((c.graph.name().to_string(), o.name().to_string()))
        };
        match run() {
            Ok((c, o)) => {
                rec.agree = c == o;
                rec.classifier = Some(c);
                rec.oracle = Some(o);
            }
            Err(e) => rec.error = Some(e),
        }
        out.push(rec);
    }
    Ok(out)
}
