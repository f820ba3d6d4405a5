//! Records and their plain / JSON / CSV renderings.

use std::fmt::Write as _;

use anth_core::Expansion;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub const CSV_HEADER: [&str; 8] = [
    "N",
    "m",
    "period_len",
    "palindrome",
    "case",
    "distinct_logoi",
    "pell_x",
    "pell_y",
];

fn join(v: &[BigInt]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// `[4; (2,1,3,1,2,8)]`, `[(1,2)]`, `[1; 2, (3)]`, `[1; 2]`.
pub fn bracket(e: &Expansion) -> String {
    if e.period.is_empty() {
        return match e.preperiod.split_first() {
            None => "[]".into(),
            Some((a0, [])) => format!("[{a0}]"),
            Some((a0, rest)) => format!("[{a0}; {}]", join(rest).replace(',', ", ")),
        };
    }
    let period = format!("({})", join(&e.period));
    match e.preperiod.split_first() {
        None => format!("[{period}]"),
        Some((a0, [])) => format!("[{a0}; {period}]"),
        Some((a0, rest)) => format!("[{a0}; {}, {period}]", join(rest).replace(',', ", ")),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellPair {
    pub x: String,
    pub y: String,
}

/// One row of a sweep; big integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRecord {
    #[serde(rename = "N")]
    pub n: String,
    pub m: String,
    pub period_len: usize,
    pub palindrome: bool,
    pub case: Option<String>,
    pub distinct_logoi: usize,
    pub platonic_number: usize,
    pub pell: Option<PellPair>,
}

impl SweepRecord {
    pub fn plain(&self) -> String {
        let mut s = format!(
            "N={} m={} period_len={} palindrome={} case={} distinct_logoi={} platonic_number={}",
            self.n,
            self.m,
            self.period_len,
            yes_no(self.palindrome),
            self.case.as_deref().unwrap_or("-"),
            self.distinct_logoi,
            self.platonic_number
        );
        if let Some(p) = &self.pell {
            let _ = write!(s, " pell=({}, {})", p.x, p.y);
        }
        s
    }

    pub fn csv_row(&self) -> [String; 8] {
        let (x, y) = match &self.pell {
            Some(p) => (p.x.clone(), p.y.clone()),
            None => (String::new(), String::new()),
        };
        [
            self.n.clone(),
            self.m.clone(),
            self.period_len.to_string(),
            yes_no(self.palindrome).into(),
            self.case.clone().unwrap_or_default(),
            self.distinct_logoi.to_string(),
            x,
            y,
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandRecord {
    pub input: String,
    pub rational: bool,
    pub preperiod: Vec<String>,
    pub period: Vec<String>,
    pub period_len: usize,
    /// Only meaningful for `sqrt(r)` inputs.
    pub palindrome: Option<bool>,
    pub case: Option<String>,
    pub distinct_logoi: Option<usize>,
    pub pell: Option<PellPair>,
    pub negative_pell: Option<PellPair>,
}

impl ExpandRecord {
    pub fn plain(&self, e: &Expansion) -> String {
        if self.rational {
            return format!("rational: {}\n", bracket(e));
        }
        let mut s = format!("{} = {}", self.input, bracket(e));
        if let Some(p) = self.palindrome {
            let _ = write!(s, " palindromic={}", yes_no(p));
        }
        s.push('\n');
        let _ = write!(s, "period_len={}", self.period_len);
        if let Some(c) = &self.case {
            let _ = write!(s, " case={c}");
        }
        if let Some(d) = self.distinct_logoi {
            let _ = write!(s, " distinct_logoi={d}");
        }
        s.push('\n');
        if let Some(p) = &self.pell {
            let _ = writeln!(s, "pell: x={} y={}", p.x, p.y);
        }
        if let Some(p) = &self.negative_pell {
            let _ = writeln!(s, "negative pell: x={} y={}", p.x, p.y);
        }
        s
    }

    /// `n` fills the `N` column.
    pub fn csv_row(&self, n: &str) -> [String; 8] {
        let m = self
            .preperiod
            .first()
            .or(self.period.first())
            .cloned()
            .unwrap_or_default();
        let (x, y) = match &self.pell {
            Some(p) => (p.x.clone(), p.y.clone()),
            None => (String::new(), String::new()),
        };
        [
            n.to_string(),
            m,
            self.period_len.to_string(),
            self.palindrome
                .map(|p| yes_no(p).to_string())
                .unwrap_or_default(),
            self.case.clone().unwrap_or_default(),
            self.distinct_logoi
                .map(|d| d.to_string())
                .unwrap_or_default(),
            x,
            y,
        ]
    }
}

pub fn csv_document<R, I>(header: &[&str], rows: I) -> String
where
    R: AsRef<[String]>,
    I: IntoIterator<Item = R>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.as_ref()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}
