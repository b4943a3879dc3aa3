//! Per-index verdict records shared by every verification sweep.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::ball::Ball;
use crate::error::{invalid, Error, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Fails,
    Equality,
    Uncertain,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "HOLDS",
            Verdict::Fails => "FAILS",
            Verdict::Equality => "EQUALITY",
            Verdict::Uncertain => "UNCERTAIN",
        }
    }

    /// Verdict for a strict inequality `difference > 0`.
    pub fn from_sign<T: Signed>(difference: &T) -> Verdict {
        if difference.is_positive() {
            Verdict::Holds
        } else if difference.is_zero() {
            Verdict::Equality
        } else {
            Verdict::Fails
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "HOLDS" => Ok(Verdict::Holds),
            "FAILS" => Ok(Verdict::Fails),
            "EQUALITY" => Ok(Verdict::Equality),
            "UNCERTAIN" => Ok(Verdict::Uncertain),
            other => invalid(format!("unknown verdict {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReportKind {
    BoPp,
    BoPoly,
    LogconcavePp,
    TuranPoly,
    CftPoly,
    Step,
    Custom(String),
}

impl fmt::Display for ReportKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportKind::BoPp => f.write_str("BO_PP"),
            ReportKind::BoPoly => f.write_str("BO_POLY"),
            ReportKind::LogconcavePp => f.write_str("LOGCONCAVE_PP"),
            ReportKind::TuranPoly => f.write_str("TURAN_POLY"),
            ReportKind::CftPoly => f.write_str("CFT_POLY"),
            ReportKind::Step => f.write_str("STEP"),
            ReportKind::Custom(name) => write!(f, "CUSTOM:{name}"),
        }
    }
}

impl FromStr for ReportKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "BO_PP" => ReportKind::BoPp,
            "BO_POLY" => ReportKind::BoPoly,
            "LOGCONCAVE_PP" => ReportKind::LogconcavePp,
            "TURAN_POLY" => ReportKind::TuranPoly,
            "CFT_POLY" => ReportKind::CftPoly,
            "STEP" => ReportKind::Step,
            other => match other.strip_prefix("CUSTOM:") {
                Some(name) => ReportKind::Custom(name.to_string()),
                None => return invalid(format!("unknown report kind {other:?}")),
            },
        })
    }
}

/// The tested difference at one index: an exact rational, or an enclosure
/// printed as decimal endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Exact(BigRational),
    Interval { lo: String, hi: String },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Exact(q) => write!(f, "{q}"),
            Witness::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

impl FromStr for Witness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let (lo, hi) = inner
                .split_once(", ")
                .ok_or_else(|| Error::InvalidArgument(format!("bad interval witness {s:?}")))?;
            return Ok(Witness::Interval { lo: lo.to_string(), hi: hi.to_string() });
        }
        s.parse::<BigRational>()
            .map(Witness::Exact)
            .map_err(|e| Error::InvalidArgument(format!("bad exact witness {s:?}: {e}")))
    }
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Witness {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub a: u64,
    /// Second index for pair-indexed inequalities.
    pub b: Option<u64>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl Record {
    pub fn index(&self) -> (u64, Option<u64>) {
        (self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Ball,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub holds: usize,
    pub fails: usize,
    pub equality: usize,
    pub uncertain: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IneqReport {
    pub schema_version: u32,
    pub kind: ReportKind,
    pub range: String,
    pub backend: Backend,
    pub records: Vec<Record>,
}

impl IneqReport {
    pub fn new(kind: ReportKind, range: impl Into<String>, backend: Backend) -> Self {
        IneqReport {
            schema_version: REPORT_SCHEMA_VERSION,
            kind,
            range: range.into(),
            backend,
            records: Vec::new(),
        }
    }

    /// Records the exact verdict of `difference > 0`. Only non-HOLDS records
    /// keep their witness.
    pub fn push_exact(&mut self, a: u64, b: Option<u64>, difference: BigRational) -> Verdict {
        let verdict = Verdict::from_sign(&difference);
        let witness = (verdict != Verdict::Holds).then_some(Witness::Exact(difference));
        self.records.push(Record { a, b, verdict, witness });
        verdict
    }

    pub fn push_exact_int(&mut self, a: u64, b: Option<u64>, difference: BigInt) -> Verdict {
        self.push_exact(a, b, BigRational::from_integer(difference))
    }

    /// Records the verdict of `difference > 0` for an enclosure; overlap
    /// with zero gives UNCERTAIN.
    pub fn push_ball(&mut self, a: u64, b: Option<u64>, difference: &Ball) -> Verdict {
        assert_eq!(self.backend, Backend::Ball, "interval record in an exact report");
        let verdict = if difference.is_positive() {
            Verdict::Holds
        } else if difference.is_negative() {
            Verdict::Fails
        } else {
            Verdict::Uncertain
        };
        let witness = (verdict != Verdict::Holds).then(|| {
            let (lo, hi) = difference.endpoints_decimal(12);
            Witness::Interval { lo, hi }
        });
        self.records.push(Record { a, b, verdict, witness });
        verdict
    }

    pub fn push(&mut self, record: Record) {
        debug_assert!(record.verdict != Verdict::Uncertain || self.backend == Backend::Ball);
        self.records.push(record);
    }

    pub fn tally(&self) -> Tally {
        let mut t = Tally::default();
        for r in &self.records {
            match r.verdict {
                Verdict::Holds => t.holds += 1,
                Verdict::Fails => t.fails += 1,
                Verdict::Equality => t.equality += 1,
                Verdict::Uncertain => t.uncertain += 1,
            }
        }
        t
    }

    pub fn all_hold(&self) -> bool {
        self.records.iter().all(|r| r.verdict == Verdict::Holds)
    }

    pub fn with_verdict(&self, verdict: Verdict) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(move |r| r.verdict == verdict)
    }

    pub fn get(&self, a: u64, b: Option<u64>) -> Option<&Record> {
        self.records.iter().find(|r| r.a == a && r.b == b)
    }

    /// Appends another report's records; used to merge parallel chunks in
    /// index order.
    pub fn extend(&mut self, other: IneqReport) {
        self.records.extend(other.records);
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(["kind", "range", "backend", "a", "b", "verdict", "witness"])
            .map_err(csv_err)?;
        let backend = match self.backend {
            Backend::Exact => "exact",
            Backend::Ball => "ball",
        };
        for r in &self.records {
            w.write_record([
                self.kind.to_string(),
                self.range.clone(),
                backend.to_string(),
                r.a.to_string(),
                r.b.map(|b| b.to_string()).unwrap_or_default(),
                r.verdict.to_string(),
                r.witness.as_ref().map(|w| w.to_string()).unwrap_or_default(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Parses the output of [`IneqReport::to_csv`]. An empty report carries no
    /// rows, so its kind/range/backend must be supplied by the caller.
    pub fn from_csv(s: &str, kind: ReportKind, range: &str, backend: Backend) -> Result<Self> {
        let mut report = IneqReport::new(kind, range, backend);
        let mut rdr = csv::Reader::from_reader(s.as_bytes());
        for row in rdr.records() {
            let row = row.map_err(csv_err)?;
            let field = |i: usize| row.get(i).unwrap_or("");
            report.kind = field(0).parse()?;
            report.range = field(1).to_string();
            report.backend = match field(2) {
                "exact" => Backend::Exact,
                "ball" => Backend::Ball,
                other => return invalid(format!("unknown backend {other:?}")),
            };
            let a = field(3).parse().map_err(|_| Error::InvalidArgument(format!("bad index {:?}", field(3))))?;
            let b = match field(4) {
                "" => None,
                s => Some(s.parse().map_err(|_| Error::InvalidArgument(format!("bad index {s:?}")))?),
            };
            let verdict = field(5).parse()?;
            let witness = match field(6) {
                "" => None,
                s => Some(s.parse()?),
            };
            report.records.push(Record { a, b, verdict, witness });
        }
        Ok(report)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}
