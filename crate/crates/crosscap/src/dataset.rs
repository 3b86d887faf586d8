//! Vendored knot tables: loading, integrity checks, reports.
//!
//! Three files make up a data directory:
//!
//! - `knots.csv`: one row per knot,
//!   `name,crossings,det,signature,arf,slice,g4,gamma4_seed,checkerboard_file`.
//!   `gamma4_seed` carries table-known genus values (sub-8-crossing knots),
//!   `checkerboard_file` points at a JSON file of tagged definite forms.
//! - `bandmoves.csv`: `src,dst,framing,figure`; `dst` may name a slice
//!   pseudo-node as `SLICE:<description>`.
//! - `concordances.csv`: `a,b,provenance`.
//!
//! Loading cross-references everything: duplicate names, dangling edges,
//! malformed forms, definiteness tags that do not match the built form, and
//! form determinants that disagree with the knot determinant are all
//! load-time errors.

use crate::gamma4::{
    self, propagate_upper_bounds, resolve, BandMoveEdge, Certificate, ConcordanceEdge,
    CongruenceClass, Gamma4Error, KnotRecord, Propagation, SeedValue, TaggedForm,
};
use crate::embed::SearchBudget;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Provenance attached to values taken from the vendored tables.
pub const TABLE_PROVENANCE: &str = "KnotInfo (vendored table)";

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Csv { path: PathBuf, line: u64, message: String },
    #[error("{path}: {message}")]
    Json { path: PathBuf, message: String },
    #[error("duplicate knot name '{name}'")]
    DuplicateKnot { name: String },
    #[error("{path}: file declares knot '{found}', expected '{expected}'")]
    FormFileMismatch { path: PathBuf, expected: String, found: String },
    #[error("knot {name}: form '{label}' has |det| = {form_det}, but det K = {knot_det}")]
    DeterminantMismatch { name: String, label: String, form_det: String, knot_det: u64 },
    #[error(transparent)]
    Invariant(#[from] Gamma4Error),
    #[error("unknown knot '{name}'")]
    UnknownKnot { name: String },
}

/// All inputs of a table run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub knots: Vec<KnotRecord>,
    pub band_moves: Vec<BandMoveEdge>,
    pub concordances: Vec<ConcordanceEdge>,
}

#[derive(Debug, Serialize, Deserialize)]
struct KnotRow {
    name: String,
    crossings: u32,
    det: u64,
    signature: i64,
    arf: u8,
    slice: bool,
    g4: Option<u32>,
    gamma4_seed: Option<u32>,
    checkerboard_file: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BandMoveRow {
    src: String,
    dst: String,
    framing: i32,
    figure: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ConcordanceRow {
    a: String,
    b: String,
    provenance: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct FormsFile {
    knot: String,
    forms: Vec<TaggedForm>,
}

fn read_to_string(path: &Path) -> Result<String, DataError> {
    fs::read_to_string(path).map_err(|source| DataError::Io { path: path.to_path_buf(), source })
}

fn csv_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, DataError> {
    let text = read_to_string(path)?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for result in reader.deserialize() {
        let row = result.map_err(|e| DataError::Csv {
            path: path.to_path_buf(),
            line: e.position().map_or(0, csv::Position::line),
            message: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}

impl Dataset {
    /// Load and fully cross-reference a data directory.
    pub fn load(dir: &Path) -> Result<Dataset, DataError> {
        let knot_rows: Vec<KnotRow> = csv_rows(&dir.join("knots.csv"))?;
        let mut knots = Vec::with_capacity(knot_rows.len());
        for row in knot_rows {
            let checkerboards = match &row.checkerboard_file {
                None => Vec::new(),
                Some(rel) => {
                    let path = dir.join(rel);
                    let text = read_to_string(&path)?;
                    let file: FormsFile = serde_json::from_str(&text).map_err(|e| DataError::Json {
                        path: path.clone(),
                        message: e.to_string(),
                    })?;
                    if file.knot != row.name {
                        return Err(DataError::FormFileMismatch {
                            path,
                            expected: row.name.clone(),
                            found: file.knot,
                        });
                    }
                    file.forms
                }
            };
            knots.push(KnotRecord {
                name: row.name,
                crossing_number: row.crossings,
                det: row.det,
                signature: row.signature,
                arf: row.arf,
                is_slice: row.slice,
                g4: row.g4,
                gamma4_known: row
                    .gamma4_seed
                    .map(|value| SeedValue { value, provenance: TABLE_PROVENANCE.to_string() }),
                checkerboards,
            });
        }

        let band_moves = csv_rows::<BandMoveRow>(&dir.join("bandmoves.csv"))?
            .into_iter()
            .map(|r| BandMoveEdge { src: r.src, dst: r.dst, framing: r.framing, provenance: r.figure })
            .collect();

        let concordance_path = dir.join("concordances.csv");
        let concordances = if concordance_path.exists() {
            csv_rows::<ConcordanceRow>(&concordance_path)?
                .into_iter()
                .map(|r| ConcordanceEdge { a: r.a, b: r.b, provenance: r.provenance })
                .collect()
        } else {
            Vec::new()
        };

        let dataset = Dataset { knots, band_moves, concordances };
        dataset.validate()?;
        Ok(dataset)
    }

    /// Integrity: unique names, record invariants, stored forms matching
    /// the knot determinant, and resolvable edges.
    pub fn validate(&self) -> Result<(), DataError> {
        let mut seen = std::collections::BTreeSet::new();
        for k in &self.knots {
            let name = gamma4::normalize_name(&k.name);
            if !seen.insert(name.clone()) {
                return Err(DataError::DuplicateKnot { name });
            }
            k.validate()?;
            for form in &k.checkerboards {
                let built = form.build().map_err(|source| Gamma4Error::FormBuild {
                    name: k.name.clone(),
                    label: form.label.clone(),
                    source,
                })?;
                let det = built.determinant().abs();
                if det != k.det.into() {
                    return Err(DataError::DeterminantMismatch {
                        name: k.name.clone(),
                        label: form.label.clone(),
                        form_det: det.to_string(),
                        knot_det: k.det,
                    });
                }
            }
        }
        // Edge endpoints resolve; the propagation does the checking.
        propagate_upper_bounds(&self.knots, &self.band_moves, &self.concordances)?;
        Ok(())
    }

    /// Write the dataset back out in the same formats.
    pub fn save(&self, dir: &Path) -> Result<(), DataError> {
        fs::create_dir_all(dir).map_err(|source| DataError::Io { path: dir.to_path_buf(), source })?;
        let forms_dir = dir.join("forms");
        fs::create_dir_all(&forms_dir)
            .map_err(|source| DataError::Io { path: forms_dir.clone(), source })?;

        let mut writer = csv::Writer::from_writer(Vec::new());
        for k in &self.knots {
            let checkerboard_file = if k.checkerboards.is_empty() {
                None
            } else {
                let rel = format!("forms/{}.json", k.name);
                let file = FormsFile { knot: k.name.clone(), forms: k.checkerboards.clone() };
                let path = dir.join(&rel);
                let text = serde_json::to_string_pretty(&file).expect("serializable forms");
                fs::write(&path, text).map_err(|source| DataError::Io { path, source })?;
                Some(rel)
            };
            writer
                .serialize(KnotRow {
                    name: k.name.clone(),
                    crossings: k.crossing_number,
                    det: k.det,
                    signature: k.signature,
                    arf: k.arf,
                    slice: k.is_slice,
                    g4: k.g4,
                    gamma4_seed: k.gamma4_known.as_ref().map(|s| s.value),
                    checkerboard_file,
                })
                .map_err(|e| DataError::Csv {
                    path: dir.join("knots.csv"),
                    line: 0,
                    message: e.to_string(),
                })?;
        }
        let knots_csv = writer.into_inner().expect("in-memory writer");
        fs::write(dir.join("knots.csv"), knots_csv)
            .map_err(|source| DataError::Io { path: dir.join("knots.csv"), source })?;

        let mut writer = csv::Writer::from_writer(Vec::new());
        for mv in &self.band_moves {
            writer
                .serialize(BandMoveRow {
                    src: mv.src.clone(),
                    dst: mv.dst.clone(),
                    framing: mv.framing,
                    figure: mv.provenance.clone(),
                })
                .map_err(|e| DataError::Csv {
                    path: dir.join("bandmoves.csv"),
                    line: 0,
                    message: e.to_string(),
                })?;
        }
        fs::write(dir.join("bandmoves.csv"), writer.into_inner().expect("in-memory writer"))
            .map_err(|source| DataError::Io { path: dir.join("bandmoves.csv"), source })?;

        let mut writer = csv::Writer::from_writer(Vec::new());
        for c in &self.concordances {
            writer
                .serialize(ConcordanceRow {
                    a: c.a.clone(),
                    b: c.b.clone(),
                    provenance: c.provenance.clone(),
                })
                .map_err(|e| DataError::Csv {
                    path: dir.join("concordances.csv"),
                    line: 0,
                    message: e.to_string(),
                })?;
        }
        fs::write(dir.join("concordances.csv"), writer.into_inner().expect("in-memory writer"))
            .map_err(|source| DataError::Io { path: dir.join("concordances.csv"), source })?;
        Ok(())
    }

    pub fn knot(&self, name: &str) -> Option<&KnotRecord> {
        let wanted = gamma4::normalize_name(name);
        self.knots.iter().find(|k| gamma4::normalize_name(&k.name) == wanted)
    }

    pub fn propagation(&self) -> Result<Propagation, Gamma4Error> {
        propagate_upper_bounds(&self.knots, &self.band_moves, &self.concordances)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Determined,
    Undetermined,
}

/// Resolved bounds and evidence for one knot, as persisted in the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotReport {
    pub name: String,
    pub crossings: u32,
    pub class: CongruenceClass,
    pub divisors: Vec<u64>,
    pub lower: u32,
    pub upper: u32,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma4: Option<u32>,
    /// Smallest 4-dimensional clasp number compatible with the genus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c4_lower: Option<u32>,
    pub certificates: Vec<Certificate>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub determined: usize,
    pub taints: usize,
    pub undetermined: Vec<String>,
    /// crossing number -> genus -> knot names
    pub groups: BTreeMap<u32, BTreeMap<u32, Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub knots: Vec<KnotReport>,
    pub summary: Summary,
}

impl Report {
    pub fn knot(&self, name: &str) -> Option<&KnotReport> {
        let wanted = gamma4::normalize_name(name);
        self.knots.iter().find(|k| gamma4::normalize_name(&k.name) == wanted)
    }
}

/// Resolve every knot in the dataset. Resolution is independent per knot,
/// so the work fans out over `jobs` threads; results are reassembled in
/// dataset order regardless of scheduling.
pub fn run_table(dataset: &Dataset, budget: SearchBudget, jobs: usize) -> Result<Report, DataError> {
    let propagation = dataset.propagation()?;
    let jobs = jobs.max(1);

    let intervals: Vec<Result<gamma4::Gamma4Interval, Gamma4Error>> = if jobs == 1 {
        dataset.knots.iter().map(|k| resolve(k, &propagation, budget)).collect()
    } else {
        let n = dataset.knots.len();
        let mut slots: Vec<Option<Result<gamma4::Gamma4Interval, Gamma4Error>>> = Vec::new();
        slots.resize_with(n, || None);
        let chunk = n.div_ceil(jobs);
        std::thread::scope(|scope| {
            let propagation = &propagation;
            let knots = &dataset.knots;
            for (t, slot_chunk) in slots.chunks_mut(chunk).enumerate() {
                scope.spawn(move || {
                    for (i, slot) in slot_chunk.iter_mut().enumerate() {
                        let idx = t * chunk + i;
                        *slot = Some(resolve(&knots[idx], propagation, budget));
                    }
                });
            }
        });
        slots.into_iter().map(|s| s.expect("filled by worker")).collect()
    };

    let mut reports = Vec::with_capacity(dataset.knots.len());
    let mut summary = Summary { total: dataset.knots.len(), ..Summary::default() };
    for (k, interval) in dataset.knots.iter().zip(intervals) {
        let interval = interval?;
        let gamma4_value = interval.determined();
        let status = if gamma4_value.is_some() { Status::Determined } else { Status::Undetermined };
        if interval.tainted() {
            summary.taints += 1;
        }
        match gamma4_value {
            Some(g) => {
                summary.determined += 1;
                summary
                    .groups
                    .entry(k.crossing_number)
                    .or_default()
                    .entry(g)
                    .or_default()
                    .push(k.name.clone());
            }
            None => summary.undetermined.push(k.name.clone()),
        }
        reports.push(KnotReport {
            name: k.name.clone(),
            crossings: k.crossing_number,
            class: k.class(),
            divisors: gamma4::square_quotient_divisors(k.det),
            lower: interval.lower,
            upper: interval.upper,
            status,
            gamma4: gamma4_value,
            c4_lower: gamma4_value.map(gamma4::clasp_lower_from_gamma4),
            certificates: interval.certificates,
        });
    }
    Ok(Report { knots: reports, summary })
}

/// Resolve a single knot by name.
pub fn run_single(dataset: &Dataset, name: &str, budget: SearchBudget) -> Result<Report, DataError> {
    let record = dataset
        .knot(name)
        .ok_or_else(|| DataError::UnknownKnot { name: name.to_string() })?
        .clone();
    let propagation = dataset.propagation()?;
    let interval = resolve(&record, &propagation, budget)?;
    let gamma4_value = interval.determined();
    let report = KnotReport {
        name: record.name.clone(),
        crossings: record.crossing_number,
        class: record.class(),
        divisors: gamma4::square_quotient_divisors(record.det),
        lower: interval.lower,
        upper: interval.upper,
        status: if gamma4_value.is_some() { Status::Determined } else { Status::Undetermined },
        gamma4: gamma4_value,
        c4_lower: gamma4_value.map(gamma4::clasp_lower_from_gamma4),
        certificates: interval.certificates,
    };
    let mut summary = Summary { total: 1, ..Summary::default() };
    match gamma4_value {
        Some(g) => {
            summary.determined = 1;
            summary
                .groups
                .entry(record.crossing_number)
                .or_default()
                .entry(g)
                .or_default()
                .push(record.name.clone());
        }
        None => summary.undetermined.push(record.name.clone()),
    }
    if report.certificates.iter().any(Certificate::is_taint) {
        summary.taints = 1;
    }
    Ok(Report { knots: vec![report], summary })
}

/// Human-readable table grouped by crossing number and genus.
pub fn render_table(report: &Report) -> String {
    let mut out = String::new();
    for (crossings, by_genus) in &report.summary.groups {
        let total: usize = by_genus.values().map(Vec::len).sum();
        let _ = writeln!(out, "crossing number {crossings} ({total} knots)");
        for (genus, names) in by_genus {
            let _ = writeln!(out, "  gamma4 = {genus}  ({} knots): {}", names.len(), names.join(", "));
        }
    }
    if !report.summary.undetermined.is_empty() {
        let _ = writeln!(out, "UNDETERMINED: {}", report.summary.undetermined.join(", "));
    }
    let _ = writeln!(
        out,
        "{} of {} determined, {} engine taints",
        report.summary.determined, report.summary.total, report.summary.taints
    );
    out
}

/// Full evidence dump for one knot: congruence class, divisors, every
/// embedding problem attempted with its verdict, and the upper-bound chain.
pub fn render_certificates(report: &KnotReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "knot {}  (crossings {})", report.name, report.crossings);
    let _ = writeln!(out, "  class sigma+4Arf = {}", report.class);
    let _ = writeln!(
        out,
        "  square-quotient divisors of det: {}",
        report.divisors.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
    );
    let _ = writeln!(out, "  bounds: {} <= gamma4 <= {}", report.lower, report.upper);
    if let Some(g) = report.gamma4 {
        let _ = writeln!(out, "  gamma4 = {g}");
    }
    if let Some(c4) = report.c4_lower {
        let _ = writeln!(out, "  clasp number c4 >= {c4}");
    }
    for cert in &report.certificates {
        match cert {
            Certificate::CongruenceFloor { class, floor } => {
                let _ = writeln!(out, "  - congruence class {class} forces gamma4 >= {floor}");
            }
            Certificate::EmbeddingNonexistence { form, summand, target_rank, nodes, candidates, steps } => {
                let summand = summand.map_or(String::new(), |l| format!(" + [-{l}]"));
                let _ = writeln!(
                    out,
                    "  - no embedding of {form}{summand} into rank {target_rank} (exhaustive: {nodes} nodes, {candidates} candidates, {steps} steps)"
                );
            }
            Certificate::EmbeddingExists { form, summand, target_rank, columns } => {
                let summand = summand.map_or(String::new(), |l| format!(" + [-{l}]"));
                let _ = writeln!(
                    out,
                    "  - embedding found: {form}{summand} into rank {target_rank}: {columns:?}"
                );
            }
            Certificate::RestrictionReuse { form, indices, target_rank, nodes, divisors_settled } => {
                let _ = writeln!(
                    out,
                    "  - sub-form of {form} on basis {indices:?} fails to embed into rank {target_rank} ({nodes} nodes); settles divisors {divisors_settled:?}"
                );
            }
            Certificate::EngineUndecided { form, summand, target_rank, steps } => {
                let summand = summand.map_or(String::new(), |l| format!(" + [-{l}]"));
                let _ = writeln!(
                    out,
                    "  - UNDECIDED search for {form}{summand} into rank {target_rank} after {steps} steps (bound weakened)"
                );
            }
            Certificate::MissingFormData { class } => {
                let _ = writeln!(out, "  - no stored checkerboard form for the class-{class} obstruction");
            }
            Certificate::SliceKnot => {
                let _ = writeln!(out, "  - slice knot: gamma4 = 1 by convention");
            }
            Certificate::SeedValue { value, provenance } => {
                let _ = writeln!(out, "  - table value gamma4 = {value} [{provenance}]");
            }
            Certificate::BandChain { steps, terminal, terminal_value, bound } => {
                let _ = writeln!(out, "  - chain (bound {bound}), ending at {terminal} with value {terminal_value}:");
                for s in steps {
                    match s.framing {
                        Some(f) => {
                            let _ = writeln!(out, "      {} -({f})-> {}  [{}]", s.from, s.to, s.provenance);
                        }
                        None => {
                            let _ = writeln!(out, "      {} ~ {}  [{}]", s.from, s.to, s.provenance);
                        }
                    }
                }
            }
            Certificate::CrossingCap { crossings, bound } => {
                let _ = writeln!(out, "  - crossing cap: floor({crossings}/2) = {bound}");
            }
            Certificate::UnreachableNode => {
                let _ = writeln!(out, "  - WARNING: no chain or seed reaches this knot");
            }
        }
    }
    out
}
