//! Profile reports: the aperiodicity classification with per-horizon exact
//! values and certified bounds.

use serde::Serialize;

use super::language::LanguageHandle;
use super::rank::{min_global_rank, Profiler};
use crate::error::Result;
use crate::regular::{cycle_witnesses, CycleWitness};
use crate::words::Word;
use crate::{universal_upper_bound, Caps};

pub const REPORT_SCHEMA: &str = "rankprof.profile/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    BoundedStarfree,
    LogarithmicNonaperiodic,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::BoundedStarfree => "bounded-starfree",
            Classification::LogarithmicNonaperiodic => "logarithmic-nonaperiodic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessInfo {
    pub r: Word,
    pub x: Word,
    pub s: Word,
    pub index: usize,
    pub period: usize,
    pub i: usize,
    pub j: usize,
    pub i_member: bool,
    pub context_len: usize,
    pub block_len: usize,
    pub min_horizon: usize,
}

impl From<&CycleWitness> for WitnessInfo {
    fn from(w: &CycleWitness) -> Self {
        WitnessInfo {
            r: w.r.clone(),
            x: w.x.clone(),
            s: w.s.clone(),
            index: w.index,
            period: w.period,
            i: w.i,
            j: w.j,
            i_member: w.i_member,
            context_len: w.context_len(),
            block_len: w.block_len(),
            min_horizon: w.min_horizon(),
        }
    }
}

/// Result of the global rank search; `value` is `None` when the language
/// needs rank above `q_max` (or the search hit a cap, see `note`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobalRank {
    pub q_max: usize,
    pub value: Option<usize>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub n: usize,
    /// `None` when the row was skipped.
    pub exact: Option<usize>,
    pub skipped: Option<String>,
    pub lower: Option<usize>,
    pub upper: usize,
    pub witness_member: Option<Word>,
    pub witness_nonmember: Option<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileReport {
    pub schema: &'static str,
    pub language: String,
    pub alphabet: Vec<String>,
    pub classification: Classification,
    pub monoid_size: usize,
    /// Best cycle witness (non-aperiodic only).
    pub witness: Option<WitnessInfo>,
    /// Number of witnesses whose bounds are maximized in `lower`.
    pub witness_count: usize,
    /// Global rank search (aperiodic only).
    pub global_rank: Option<GlobalRank>,
    pub rows: Vec<ProfileRow>,
    /// Certified bounds or monotonicity failing on computed rows.
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    pub min_n: usize,
    pub max_n: usize,
    /// Defaults to the caps' `q_max` for the alphabet.
    pub q_max: Option<usize>,
    pub caps: Caps,
}

impl ClassifyOptions {
    pub fn new(max_n: usize) -> Self {
        ClassifyOptions { min_n: 2, max_n, q_max: None, caps: Caps::from_env() }
    }
}

pub fn classify(lang: &LanguageHandle, opts: &ClassifyOptions) -> Result<ProfileReport> {
    let monoid = lang.monoid()?;
    let aperiodic = monoid.is_aperiodic();
    let witnesses = if aperiodic { Vec::new() } else { cycle_witnesses(monoid)? };
    let global_rank = if aperiodic {
        let q_max = opts.q_max.unwrap_or_else(|| opts.caps.q_max(lang.is_unary()));
        Some(match min_global_rank(lang, q_max, opts.caps) {
            Ok(value) => GlobalRank { q_max, value, note: value.is_none().then(|| format!("bounded, rank > {q_max}")) },
            Err(e) if e.is_cap() => GlobalRank { q_max, value: None, note: Some(e.to_string()) },
            Err(e) => return Err(e),
        })
    } else {
        None
    };

    let mut profiler = Profiler::new(lang, opts.caps);
    let mut rows = Vec::new();
    for n in opts.min_n..=opts.max_n {
        let lower = witnesses.iter().filter_map(|w| w.lower_bound(n)).max();
        let upper = universal_upper_bound(n.max(1));
        let mut row = ProfileRow { n, exact: None, skipped: None, lower, upper, witness_member: None, witness_nonmember: None };
        match profiler.rho(n) {
            Ok(r) => {
                row.exact = Some(r.value);
                if let Some((u, v)) = r.witness {
                    row.witness_member = Some(u);
                    row.witness_nonmember = Some(v);
                }
            }
            Err(e) if e.is_cap() => row.skipped = Some(e.to_string()),
            Err(e) => return Err(e),
        }
        rows.push(row);
    }

    let mut violations = Vec::new();
    let mut prev: Option<(usize, usize)> = None;
    for row in &rows {
        let Some(exact) = row.exact else { continue };
        if let Some(lower) = row.lower.filter(|&l| l > exact) {
            violations.push(format!("n = {}: lower bound {lower} exceeds exact {exact}", row.n));
        }
        if exact > row.upper {
            violations.push(format!("n = {}: exact {exact} exceeds upper bound {}", row.n, row.upper));
        }
        if let Some(q) = global_rank.as_ref().and_then(|g| g.value).filter(|&q| exact > q) {
            violations.push(format!("n = {}: exact {exact} exceeds global rank {q}", row.n));
        }
        if let Some((pn, pv)) = prev.filter(|&(_, pv)| pv > exact) {
            violations.push(format!("n = {}: exact {exact} below {pv} at n = {pn}", row.n));
        }
        prev = Some((row.n, exact));
    }

    Ok(ProfileReport {
        schema: REPORT_SCHEMA,
        language: lang.description().to_string(),
        alphabet: lang.alphabet().symbols().iter().map(char::to_string).collect(),
        classification: if aperiodic { Classification::BoundedStarfree } else { Classification::LogarithmicNonaperiodic },
        monoid_size: monoid.size(),
        witness: witnesses.first().map(WitnessInfo::from),
        witness_count: witnesses.len(),
        global_rank,
        rows,
        violations,
    })
}

impl ProfileReport {
    pub fn has_skipped(&self) -> bool {
        self.rows.iter().any(|r| r.exact.is_none())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per horizon; `exact` is `skipped` and missing values are empty.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let word = |v: &Option<Word>| v.as_ref().map(ToString::to_string).unwrap_or_default();
        w.write_record(["n", "exact", "lower", "upper", "witness_member", "witness_nonmember"]).expect("in-memory write");
        for r in &self.rows {
            let exact = r.exact.map_or_else(|| "skipped".to_string(), |x| x.to_string());
            w.write_record([
                r.n.to_string(),
                exact,
                opt(r.lower),
                r.upper.to_string(),
                word(&r.witness_member),
                word(&r.witness_nonmember),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    /// Tab-separated `n exact lower upper`, `NaN` for missing values.
    pub fn to_plot(&self) -> String {
        let opt = |v: Option<usize>| v.map_or_else(|| "NaN".to_string(), |x| x.to_string());
        let mut out = String::from("n\texact\tlower\tupper\n");
        for r in &self.rows {
            out.push_str(&format!("{}\t{}\t{}\t{}\n", r.n, opt(r.exact), opt(r.lower), r.upper));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::builtin;

    fn opts(min_n: usize, max_n: usize) -> ClassifyOptions {
        ClassifyOptions { min_n, max_n, q_max: None, caps: Caps::default() }
    }

    #[test]
    fn parity_report() {
        let r = classify(&builtin("even").unwrap(), &opts(2, 16)).unwrap();
        assert_eq!(r.classification, Classification::LogarithmicNonaperiodic);
        assert_eq!(r.rows.len(), 15);
        let w = r.witness.as_ref().unwrap();
        assert_eq!((w.x.to_string(), w.period, w.min_horizon), ("a".into(), 2, 2));
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(!r.has_skipped());
        assert_eq!(r.to_csv().lines().count(), 16);
        assert_eq!(r.to_plot().lines().next(), Some("n\texact\tlower\tupper"));
    }

    #[test]
    fn star_free_report() {
        let l = LanguageHandle::parse_spec("regex:a*b*").unwrap();
        let r = classify(&l, &opts(1, 6)).unwrap();
        assert_eq!(r.classification, Classification::BoundedStarfree);
        assert!(r.witness.is_none());
        assert_eq!(r.global_rank.as_ref().unwrap().value, Some(2));
        assert!(r.rows.iter().all(|row| row.lower.is_none()));
    }

    #[test]
    fn skipped_rows_keep_bounds() {
        let l = LanguageHandle::parse_spec("regex:((a|b)(a|b))*").unwrap();
        let r = classify(&l, &opts(9, 12)).unwrap();
        assert!(r.has_skipped());
        let last = r.rows.last().unwrap();
        assert_eq!(last.exact, None);
        assert!(last.skipped.is_some());
        assert_eq!(last.upper, 8);
        assert!(last.lower.is_some());
        assert!(r.to_csv().contains("12,skipped,"));
        assert!(r.to_plot().contains("12\tNaN\t"));
    }
}
