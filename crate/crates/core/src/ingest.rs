//! Number-field census tables: JSONL (canonical) and CSV loaders, validation,
//! grouping by Galois group, and comparisons against the rank bounds.
//!
//! A JSONL file may start with a header line `{"base_field": {...}}` giving
//! the base field data; CSV files carry the same object after a
//! `# base_field:` comment. Without a header the base field is `Q`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::bounds::{self, BaseFieldData};
use crate::counting::CensusSeries;
use crate::perm::{parse_label, PermError, PermGroup, TransitiveTable};
use crate::{arith, quadforms};

/// Imaginary quadratic fields with `|D| <= 10^4`, with class invariants.
pub const QUADRATIC_SAMPLE: &str = include_str!("../data/imaginary_quadratic_10000.jsonl");

pub const CSV_HEADER: [&str; 6] = [
    "label",
    "degree",
    "group",
    "disc_norm",
    "disc_signed",
    "class_invariants",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub label: String,
    pub degree: u32,
    /// `nTk` label or generators in cycle notation.
    pub group: String,
    pub disc_norm: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disc_signed: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<(u32, u32)>,
    /// Elementary divisors of the class group; `[]` is the trivial group and
    /// `None` means unknown.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_invariants: Option<Vec<u64>>,
}

impl FieldRecord {
    /// `rk_ℓ` of the class group, when the invariants are known.
    pub fn class_rank(&self, ell: u64) -> Option<u64> {
        self.class_invariants
            .as_ref()
            .map(|inv| inv.iter().filter(|&&d| d % ell == 0).count() as u64)
    }

    pub fn group_key(&self) -> &str {
        self.group.trim()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Jsonl,
    Csv,
}

impl Format {
    /// From a file extension: `.csv` is CSV, anything else JSONL.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Jsonl,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParseReport {
    pub accepted: usize,
    pub rejected: Vec<RowError>,
}

impl std::fmt::Display for ParseReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} malformed rows", self.rejected.len())?;
        for e in self.rejected.iter().take(10) {
            write!(f, "\n  line {}: {}", e.line, e.message)?;
        }
        if self.rejected.len() > 10 {
            write!(f, "\n  ...")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Malformed(ParseReport),
    #[error("bad header: {0}")]
    Header(String),
    #[error(transparent)]
    Group(#[from] PermError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// Any malformed row fails the whole parse.
    #[default]
    Strict,
    /// Malformed rows are dropped and listed in the report.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Header {
    base_field: BaseFieldData,
}

/// Resolves group strings once and caches the result.
pub struct GroupResolver {
    table: TransitiveTable,
    cache: HashMap<String, Result<PermGroup, PermError>>,
}

impl GroupResolver {
    pub fn new(table: TransitiveTable) -> Self {
        Self {
            table,
            cache: HashMap::new(),
        }
    }

    /// Uses the table named by `TORSIONLAB_DATA`, or the bundled one.
    pub fn from_env() -> Result<Self, PermError> {
        Ok(Self::new(TransitiveTable::load()?))
    }

    pub fn resolve(&mut self, spec: &str) -> Result<PermGroup, PermError> {
        let key = spec.trim();
        if let Some(hit) = self.cache.get(key) {
            return hit.clone();
        }
        let out = resolve_in(&self.table, key);
        self.cache.insert(key.to_string(), out.clone());
        out
    }
}

fn resolve_in(table: &TransitiveTable, spec: &str) -> Result<PermGroup, PermError> {
    let g = if parse_label(spec).is_some() {
        table.group(spec)?
    } else if spec.starts_with('(') {
        PermGroup::parse(spec, None)?
    } else {
        return Err(PermError::UnknownLabel(spec.to_string()));
    };
    if !g.is_transitive() {
        return Err(PermError::NotTransitive);
    }
    Ok(g)
}

/// A transitive group from an `nTk` label or explicit generators.
pub fn resolve_group(spec: &str) -> Result<PermGroup, PermError> {
    resolve_in(&TransitiveTable::load()?, spec.trim())
}

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub base: BaseFieldData,
    records: Vec<FieldRecord>,
    /// Whether the base field came from an explicit header.
    has_header: bool,
}

impl Dataset {
    pub fn new(base: BaseFieldData, records: Vec<FieldRecord>) -> Self {
        Self {
            base,
            records,
            has_header: base != BaseFieldData::default(),
        }
    }

    pub fn records(&self) -> &[FieldRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Record indices per group key, in order of first appearance sorted by key.
    pub fn groups(&self) -> BTreeMap<String, Vec<usize>> {
        let mut out: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, r) in self.records.iter().enumerate() {
            out.entry(r.group_key().to_string()).or_default().push(i);
        }
        out
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        if self.has_header {
            let header = Header { base_field: self.base };
            out.push_str(&serde_json::to_string(&header).expect("serializable"));
            out.push('\n');
        }
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("serializable"));
            out.push('\n');
        }
        out
    }

    /// CSV form; signatures are not part of the CSV schema and are dropped.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.has_header {
            let header = Header { base_field: self.base };
            out.push_str("# base_field: ");
            out.push_str(&serde_json::to_string(&header.base_field).expect("serializable"));
            out.push('\n');
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for r in &self.records {
            let inv = match &r.class_invariants {
                None => String::new(),
                Some(v) if v.is_empty() => "1".to_string(),
                Some(v) => v.iter().map(u64::to_string).collect::<Vec<_>>().join("."),
            };
            w.write_record([
                r.label.clone(),
                r.degree.to_string(),
                r.group.clone(),
                r.disc_norm.to_string(),
                r.disc_signed.map(|d| d.to_string()).unwrap_or_default(),
                inv,
            ])
            .expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
        out
    }
}

/// Checks one record against its resolved group and the schema invariants.
fn validate(r: &FieldRecord, resolver: &mut GroupResolver) -> Result<(), String> {
    if r.label.trim().is_empty() {
        return Err("empty label".into());
    }
    if r.disc_norm == 0 {
        return Err("disc_norm must be at least 1".into());
    }
    if let Some(s) = r.disc_signed {
        if s.unsigned_abs() != r.disc_norm {
            return Err(format!("|disc_signed| = {} differs from disc_norm {}", s.unsigned_abs(), r.disc_norm));
        }
    }
    if let Some((r1, r2)) = r.signature {
        if r1 + 2 * r2 != r.degree {
            return Err(format!("signature ({r1}, {r2}) does not match degree {}", r.degree));
        }
    }
    if let Some(inv) = &r.class_invariants {
        if inv.iter().any(|&d| d < 2) {
            return Err("elementary divisors must be at least 2".into());
        }
        if inv.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err("elementary divisors must each divide the next".into());
        }
    }
    let g = resolver.resolve(&r.group).map_err(|e| format!("group {:?}: {e}", r.group))?;
    if g.degree() != r.degree as usize {
        return Err(format!(
            "degree mismatch: record has degree {}, group {} has degree {}",
            r.degree,
            r.group.trim(),
            g.degree()
        ));
    }
    Ok(())
}

struct Collector<'a> {
    resolver: &'a mut GroupResolver,
    labels: HashSet<String>,
    records: Vec<FieldRecord>,
    report: ParseReport,
}

impl Collector<'_> {
    fn push(&mut self, line: u64, parsed: Result<FieldRecord, String>) {
        let checked = parsed.and_then(|r| {
            validate(&r, self.resolver)?;
            if !self.labels.insert(r.label.clone()) {
                return Err(format!("duplicate label {:?}", r.label));
            }
            Ok(r)
        });
        match checked {
            Ok(r) => {
                self.records.push(r);
                self.report.accepted += 1;
            }
            Err(message) => self.report.rejected.push(RowError { line, message }),
        }
    }
}

pub fn parse_str(
    text: &str,
    format: Format,
    strictness: Strictness,
    resolver: &mut GroupResolver,
) -> Result<(Dataset, ParseReport), IngestError> {
    let mut c = Collector {
        resolver,
        labels: HashSet::new(),
        records: Vec::new(),
        report: ParseReport::default(),
    };
    let mut header: Option<BaseFieldData> = None;
    match format {
        Format::Jsonl => {
            let mut first = true;
            for (i, raw) in text.lines().enumerate() {
                let line = i as u64 + 1;
                if raw.trim().is_empty() {
                    continue;
                }
                let value: Value = match serde_json::from_str(raw) {
                    Ok(v) => v,
                    Err(e) => {
                        c.push(line, Err(format!("invalid JSON: {e}")));
                        first = false;
                        continue;
                    }
                };
                if first && value.get("base_field").is_some() {
                    let h: Header = serde_json::from_value(value)
                        .map_err(|e| IngestError::Header(e.to_string()))?;
                    header = Some(h.base_field);
                    first = false;
                    continue;
                }
                first = false;
                c.push(line, serde_json::from_value(value).map_err(|e| e.to_string()));
            }
        }
        Format::Csv => {
            let mut body_start = 0;
            let mut offset_lines = 0u64;
            for raw in text.split_inclusive('\n') {
                let t = raw.trim();
                if let Some(rest) = t.strip_prefix("# base_field:") {
                    let base: BaseFieldData = serde_json::from_str(rest.trim())
                        .map_err(|e| IngestError::Header(e.to_string()))?;
                    header = Some(base);
                } else if !t.starts_with('#') && !t.is_empty() {
                    break;
                }
                body_start += raw.len();
                offset_lines += 1;
            }
            let mut reader = csv::ReaderBuilder::new()
                .comment(Some(b'#'))
                .trim(csv::Trim::All)
                .flexible(true)
                .from_reader(text[body_start..].as_bytes());
            let names: Vec<String> = reader
                .headers()
                .map_err(|e| IngestError::Header(e.to_string()))?
                .iter()
                .map(str::to_string)
                .collect();
            if names != CSV_HEADER {
                return Err(IngestError::Header(format!(
                    "expected {:?}, found {names:?}",
                    CSV_HEADER.join(",")
                )));
            }
            for row in reader.records() {
                match row {
                    Ok(rec) => {
                        let line = rec.position().map_or(0, |p| p.line()) + offset_lines;
                        c.push(line, csv_record(&rec));
                    }
                    Err(e) => {
                        let line = e.position().map_or(0, |p| p.line()) + offset_lines;
                        c.push(line, Err(e.to_string()));
                    }
                }
            }
        }
    }
    if strictness == Strictness::Strict && !c.report.rejected.is_empty() {
        return Err(IngestError::Malformed(c.report));
    }
    let has_header = header.is_some();
    let ds = Dataset {
        base: header.unwrap_or_default(),
        records: c.records,
        has_header,
    };
    Ok((ds, c.report))
}

fn csv_record(rec: &csv::StringRecord) -> Result<FieldRecord, String> {
    if rec.len() != CSV_HEADER.len() {
        return Err(format!("expected {} fields, found {}", CSV_HEADER.len(), rec.len()));
    }
    fn num<T: std::str::FromStr>(field: &str, v: &str) -> Result<T, String> {
        v.parse().map_err(|_| format!("{field}: expected an integer, found {v:?}"))
    }
    let disc_signed = match &rec[4] {
        "" => None,
        s => Some(num("disc_signed", s)?),
    };
    let class_invariants = match &rec[5] {
        "" => None,
        "1" => Some(Vec::new()),
        s => Some(
            s.split('.')
                .map(|p| num("class_invariants", p))
                .collect::<Result<Vec<u64>, _>>()?,
        ),
    };
    Ok(FieldRecord {
        label: rec[0].to_string(),
        degree: num("degree", &rec[1])?,
        group: rec[2].to_string(),
        disc_norm: num("disc_norm", &rec[3])?,
        disc_signed,
        signature: None,
        class_invariants,
    })
}

pub fn parse(
    path: &Path,
    format: Format,
    strictness: Strictness,
    resolver: &mut GroupResolver,
) -> Result<(Dataset, ParseReport), IngestError> {
    let text = std::fs::read_to_string(path).map_err(|e| IngestError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_str(&text, format, strictness, resolver)
}

/// `(D, a_D)` over the records whose group key is `group`.
pub fn to_census(ds: &Dataset, group: &str) -> CensusSeries {
    let key = group.trim();
    CensusSeries::from_discriminants(
        ds.records
            .iter()
            .filter(|r| r.group_key() == key)
            .map(|r| r.disc_norm),
    )
    .expect("validated records have positive discriminants")
}

/// Largest number of records sharing one signed discriminant (records
/// without a signed discriminant are keyed by the norm).
pub fn max_signed_multiplicity(ds: &Dataset, group: &str) -> u64 {
    let key = group.trim();
    let mut counts: HashMap<i128, u64> = HashMap::new();
    for r in ds.records.iter().filter(|r| r.group_key() == key) {
        let k = r.disc_signed.map_or(r.disc_norm as i128, i128::from);
        *counts.entry(k).or_insert(0) += 1;
    }
    counts.values().copied().max().unwrap_or(0)
}

#[derive(Debug, Clone, Serialize)]
pub struct RankViolation {
    pub label: String,
    pub rank: u64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub ell: u64,
    pub checked: usize,
    pub skipped_no_invariants: usize,
    pub skipped_not_ell_group: usize,
    pub skipped_invalid: Vec<String>,
    pub violations: Vec<RankViolation>,
    /// Largest `rank / bound` among checked records with a positive bound.
    pub max_ratio: f64,
    pub notes: Vec<String>,
}

impl RankReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `rk_ℓ(Cl_E)` of every ℓ-group record against the torsion rank
/// bound for its degree `ℓ^r` and discriminant.
pub fn rank_vs_bound(
    ds: &Dataset,
    ell: u64,
    base: &BaseFieldData,
    resolver: &mut GroupResolver,
) -> Result<RankReport, IngestError> {
    if !arith::is_prime(ell) {
        return Err(IngestError::Header(format!("{ell} is not prime")));
    }
    let mut rep = RankReport {
        ell,
        checked: 0,
        skipped_no_invariants: 0,
        skipped_not_ell_group: 0,
        skipped_invalid: Vec::new(),
        violations: Vec::new(),
        max_ratio: 0.0,
        notes: Vec::new(),
    };
    let mut by_group: HashMap<String, Option<u64>> = HashMap::new();
    for r in &ds.records {
        let Some(rank) = r.class_rank(ell) else {
            rep.skipped_no_invariants += 1;
            continue;
        };
        let key = r.group_key().to_string();
        let exponent = match by_group.get(&key) {
            Some(e) => *e,
            None => {
                let g = resolver.resolve(&key)?;
                let e = match arith::prime_power(g.order()?) {
                    Some((p, _)) if p == ell => match arith::prime_power(g.degree() as u64) {
                        Some((q, r)) if q == ell => Some(r as u64),
                        _ => None,
                    },
                    _ => None,
                };
                by_group.insert(key.clone(), e);
                e
            }
        };
        let Some(r_exp) = exponent else {
            rep.skipped_not_ell_group += 1;
            continue;
        };
        match bounds::torsion_rank_bound(ell, r_exp, base, r.disc_norm) {
            Ok(bound) => {
                rep.checked += 1;
                if rank as f64 > bound {
                    rep.violations.push(RankViolation {
                        label: r.label.clone(),
                        rank,
                        bound,
                    });
                }
                if bound > 0.0 {
                    rep.max_ratio = rep.max_ratio.max(rank as f64 / bound);
                }
            }
            Err(e) => rep.skipped_invalid.push(format!("{}: {e}", r.label)),
        }
    }
    if rep.skipped_no_invariants > 0 {
        rep.notes.push(format!("{} records without class invariants skipped", rep.skipped_no_invariants));
    }
    if rep.skipped_not_ell_group > 0 {
        rep.notes.push(format!(
            "{} records skipped: group is not an {ell}-group of {ell}-power degree",
            rep.skipped_not_ell_group
        ));
    }
    Ok(rep)
}

/// Imaginary quadratic fields with `|D| <= limit`, one record each, labeled
/// `2.0.|D|.1`. Class invariants are included when `with_invariants` is set.
pub fn imaginary_quadratic_dataset(limit: i64, with_invariants: bool) -> Result<Dataset, quadforms::FormError> {
    let records = if with_invariants {
        quadforms::class_groups_up_to(limit)?
            .into_iter()
            .map(|g| quadratic_record(g.discriminant(), Some(g.invariants().to_vec())))
            .collect()
    } else {
        quadforms::negative_fundamental_discriminants(limit)
            .into_iter()
            .map(|d| quadratic_record(d, None))
            .collect()
    };
    Ok(Dataset::new(BaseFieldData::default(), records))
}

fn quadratic_record(d: i64, class_invariants: Option<Vec<u64>>) -> FieldRecord {
    FieldRecord {
        label: format!("2.0.{}.1", d.unsigned_abs()),
        degree: 2,
        group: "2T1".to_string(),
        disc_norm: d.unsigned_abs(),
        disc_signed: Some(d),
        signature: Some((0, 1)),
        class_invariants,
    }
}
