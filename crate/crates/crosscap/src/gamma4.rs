//! Per-knot resolution of the non-orientable 4-genus.
//!
//! Lower bounds come in three flavors keyed by `sigma + 4*Arf mod 8`:
//!
//! - class 4: no Möbius band can exist, so the bound starts at 2; if in
//!   addition neither definite Goeritz form embeds in the diagonal lattice
//!   of rank two larger, the bound rises to 3.
//! - class +2 or -2: a Möbius band would force the double branched cover of
//!   the 4-ball to be definite with intersection form `[l]` for some
//!   square-quotient divisor `l` of the knot determinant. Gluing it to the
//!   checkerboard cover and diagonalizing shows `G + [-l]` must embed in
//!   rank `rank(G) + 1`; if every divisor fails, the bound is 2.
//! - class 0: same divisor game, but the hypothetical cover may be definite
//!   of either sign, so both signed variants must fail.
//!
//! Upper bounds propagate through declared non-oriented band moves (cost 1,
//! usable in both directions) and concordances (cost 0): a path ending at a
//! slice knot or at a knot with a known value caps the genus. Everything a
//! bound relies on is recorded as a machine-checkable [`Certificate`].
//!
//! Mirrors: the genus is mirror invariant, so records are normalized. A
//! knot and its mirror share a name, signatures classify up to the `+2/-2`
//! symmetry, and positive definite forms are negated before they reach the
//! search engine.

use crate::embed::{
    embedding_exists_with_summand, find_embedding, EmbeddingProblem, SearchBudget, SearchOutcome,
};
use crate::forms::{
    form_from_weighted_graph, goeritz_from_incidence, CheckerboardIncidence, Definiteness,
    FormError, IntSymForm, WeightedGraphForm,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Edge targets with this prefix are declared slice pseudo-nodes rather
/// than knots carried in the table (composites, high-crossing knots).
pub const SLICE_PREFIX: &str = "SLICE:";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum Gamma4Error {
    #[error("signature {0} is odd")]
    OddSignature(i64),
    #[error("knot {name}: determinant {det} is even")]
    EvenDeterminant { name: String, det: u64 },
    #[error("knot {name}: slice knots must have zero signature and Arf invariant")]
    BadSliceInvariants { name: String },
    #[error("knot {name}: arf must be 0 or 1, got {arf}")]
    BadArf { name: String, arf: u8 },
    #[error("knot {name}: form '{label}' failed to build: {source}")]
    FormBuild { name: String, label: String, source: FormError },
    #[error("knot {name}: form '{label}' is declared {declared} but is {actual}")]
    DefinitenessMismatch { name: String, label: String, declared: Definiteness, actual: Definiteness },
    #[error("edge {src} -> {dst}: {reason}")]
    BadEdge { src: String, dst: String, reason: String },
    #[error("knot {name}: lower bound {lower} exceeds upper bound {upper}")]
    IntegrityFailure { name: String, lower: u32, upper: u32 },
    #[error("embedding engine: {0}")]
    Engine(#[from] crate::embed::EmbedError),
}

/// Strip a leading mirror sign: the genus cannot tell a knot from its
/// mirror, so `-9_2` and `9_2` are the same node. Slice pseudo-names pass
/// through untouched.
pub fn normalize_name(raw: &str) -> String {
    let raw = raw.trim();
    if raw.starts_with(SLICE_PREFIX) {
        raw.to_string()
    } else {
        raw.strip_prefix('-').unwrap_or(raw).to_string()
    }
}

/// The four-class partition of `sigma + 4*Arf mod 8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CongruenceClass {
    Zero,
    PlusTwo,
    MinusTwo,
    Four,
}

impl fmt::Display for CongruenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CongruenceClass::Zero => write!(f, "0"),
            CongruenceClass::PlusTwo => write!(f, "+2"),
            CongruenceClass::MinusTwo => write!(f, "-2"),
            CongruenceClass::Four => write!(f, "4"),
        }
    }
}

pub fn congruence_class(signature: i64, arf: u8) -> Result<CongruenceClass, Gamma4Error> {
    if signature.rem_euclid(2) != 0 {
        return Err(Gamma4Error::OddSignature(signature));
    }
    match (signature + 4 * i64::from(arf & 1)).rem_euclid(8) {
        0 => Ok(CongruenceClass::Zero),
        2 => Ok(CongruenceClass::PlusTwo),
        4 => Ok(CongruenceClass::Four),
        6 => Ok(CongruenceClass::MinusTwo),
        _ => unreachable!("even residue mod 8"),
    }
}

/// Divisors `l` of `det` with `det / l` a perfect square, ascending.
/// Always contains `det` itself.
pub fn square_quotient_divisors(det: u64) -> Vec<u64> {
    assert!(det >= 1, "determinant must be positive");
    let mut out: Vec<u64> = (1..=det)
        .filter(|l| det.is_multiple_of(*l))
        .filter(|l| {
            let q = det / l;
            let r = q.isqrt();
            r * r == q
        })
        .collect();
    out.sort_unstable();
    out
}

/// Cap on the genus given the 4-dimensional clasp number.
pub fn clasp_upper(c4: u32) -> u32 {
    if c4.is_multiple_of(2) && c4 != 2 {
        c4
    } else {
        c4 + 1
    }
}

/// Cap on the genus given the crossing number: `floor(c / 2)`, valid for
/// knots with at least 3 crossings.
pub fn crossing_upper(c: u32) -> u32 {
    debug_assert!(c >= 3, "crossing bound needs c >= 3");
    c / 2
}

/// Smallest clasp number compatible with a known genus. The genus of a
/// knot bounding an embedded disk is still 1 under the conventions used
/// here (a disk gives up a band to a Möbius summand), so the cap at
/// `c4 = 0` is taken to be 1 rather than the raw formula's 0.
pub fn clasp_lower_from_gamma4(gamma4: u32) -> u32 {
    (0..).find(|&c| if c == 0 { 1 } else { clasp_upper(c) } >= gamma4).unwrap()
}

/// A stored definite form attached to a knot record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedForm {
    pub label: String,
    pub definiteness: Definiteness,
    #[serde(flatten)]
    pub source: FormSource,
    /// Apply an overall sign flip after building (used when mirroring a
    /// record whose forms are stored as graphs).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub mirrored: bool,
    /// Basis indices of a sub-form already known not to embed; lets one
    /// nonexistence proof settle every divisor at once.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction_hint: Option<Vec<usize>>,
    #[serde(default)]
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormSource {
    #[serde(rename = "graph")]
    Graph(WeightedGraphForm),
    #[serde(rename = "checkerboard")]
    Checkerboard(CheckerboardIncidence),
}

impl TaggedForm {
    pub fn build(&self) -> Result<IntSymForm, FormError> {
        let form = match &self.source {
            FormSource::Graph(g) => form_from_weighted_graph(g)?,
            FormSource::Checkerboard(c) => goeritz_from_incidence(c)?,
        };
        Ok(if self.mirrored { form.negated() } else { form })
    }

    fn mirror(&self) -> TaggedForm {
        let definiteness = match self.definiteness {
            Definiteness::PositiveDefinite => Definiteness::NegativeDefinite,
            Definiteness::NegativeDefinite => Definiteness::PositiveDefinite,
            Definiteness::Other => Definiteness::Other,
        };
        TaggedForm { definiteness, mirrored: !self.mirrored, ..self.clone() }
    }
}

/// A table-known genus value with its source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedValue {
    pub value: u32,
    pub provenance: String,
}

/// Invariant bundle for one knot. Signature, Arf, determinant and
/// sliceness are table inputs, not recomputed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    pub crossing_number: u32,
    pub det: u64,
    pub signature: i64,
    pub arf: u8,
    pub is_slice: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g4: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma4_known: Option<SeedValue>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checkerboards: Vec<TaggedForm>,
}

impl KnotRecord {
    pub fn validate(&self) -> Result<(), Gamma4Error> {
        if self.det.is_multiple_of(2) {
            return Err(Gamma4Error::EvenDeterminant { name: self.name.clone(), det: self.det });
        }
        congruence_class(self.signature, self.arf)?;
        if self.arf > 1 {
            return Err(Gamma4Error::BadArf { name: self.name.clone(), arf: self.arf });
        }
        if self.is_slice && (self.signature != 0 || self.arf != 0) {
            return Err(Gamma4Error::BadSliceInvariants { name: self.name.clone() });
        }
        for form in &self.checkerboards {
            let built = form.build().map_err(|source| Gamma4Error::FormBuild {
                name: self.name.clone(),
                label: form.label.clone(),
                source,
            })?;
            let actual = built.definiteness();
            if actual != form.definiteness {
                return Err(Gamma4Error::DefinitenessMismatch {
                    name: self.name.clone(),
                    label: form.label.clone(),
                    declared: form.definiteness,
                    actual,
                });
            }
        }
        Ok(())
    }

    pub fn class(&self) -> CongruenceClass {
        congruence_class(self.signature, self.arf).expect("validated record")
    }

    /// The mirror knot: signature flips, forms negate, everything else is
    /// unchanged. Resolution must not distinguish the two.
    pub fn mirrored(&self) -> KnotRecord {
        KnotRecord {
            signature: -self.signature,
            checkerboards: self.checkerboards.iter().map(TaggedForm::mirror).collect(),
            ..self.clone()
        }
    }
}

/// A declared non-oriented band move `src -> dst` with its framing.
/// Band moves are symmetric, so the edge is usable in both directions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandMoveEdge {
    pub src: String,
    pub dst: String,
    pub framing: i32,
    pub provenance: String,
}

/// A declared smooth concordance; the genus agrees across it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcordanceEdge {
    pub a: String,
    pub b: String,
    pub provenance: String,
}

/// One hop in an upper-bound chain. `framing` is `None` for concordances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<i32>,
    pub provenance: String,
}

/// Machine-checkable evidence attached to a resolved bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Floor implied by the congruence class alone.
    CongruenceFloor { class: CongruenceClass, floor: u32 },
    /// An exhausted embedding search: the form (plus optional summand) does
    /// not embed in the diagonal lattice of the stated rank.
    EmbeddingNonexistence {
        form: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        summand: Option<u64>,
        target_rank: usize,
        nodes: u64,
        candidates: u64,
        steps: u64,
    },
    /// An embedding that defeats an obstruction attempt.
    EmbeddingExists {
        form: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        summand: Option<u64>,
        target_rank: usize,
        columns: Vec<Vec<i64>>,
    },
    /// A sub-form of the stored form already fails to embed, settling every
    /// divisor problem at once.
    RestrictionReuse {
        form: String,
        indices: Vec<usize>,
        target_rank: usize,
        nodes: u64,
        divisors_settled: Vec<u64>,
    },
    /// The engine ran out of budget; the affected bound was weakened.
    EngineUndecided {
        form: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        summand: Option<u64>,
        target_rank: usize,
        steps: u64,
    },
    /// An obstruction wanted checkerboard data the record does not carry.
    MissingFormData { class: CongruenceClass },
    /// The record itself is slice; the genus is 1 by convention.
    SliceKnot,
    /// A table-known value used directly.
    SeedValue { value: u32, provenance: String },
    /// A chain of band moves and concordances ending at a terminal node.
    BandChain { steps: Vec<PathStep>, terminal: String, terminal_value: u32, bound: u32 },
    /// Crossing-number cap `floor(c/2)`.
    CrossingCap { crossings: u32, bound: u32 },
    /// No chain and no seed reached this knot; only generic caps apply.
    UnreachableNode,
}

impl Certificate {
    pub fn is_taint(&self) -> bool {
        matches!(self, Certificate::EngineUndecided { .. })
    }
}

/// Resolved bounds for one knot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gamma4Interval {
    pub lower: u32,
    pub upper: u32,
    pub certificates: Vec<Certificate>,
}

impl Gamma4Interval {
    pub fn determined(&self) -> Option<u32> {
        (self.lower == self.upper).then_some(self.lower)
    }

    pub fn tainted(&self) -> bool {
        self.certificates.iter().any(Certificate::is_taint)
    }
}

// ---------------------------------------------------------------------------
// Upper bounds: propagation over the band-move/concordance graph.
// ---------------------------------------------------------------------------

/// What seeded the best chain reaching a knot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Terminal {
    Slice(String),
    Seed { name: String, value: u32, provenance: String },
}

/// Best chain found for one node: `value` is the genus bound before the
/// floor at 1 is applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reached {
    pub value: u32,
    pub steps: Vec<PathStep>,
    pub terminal: Terminal,
}

/// Single-source-per-terminal shortest paths over the mixed move graph.
#[derive(Debug, Clone, Default)]
pub struct Propagation {
    reach: BTreeMap<String, Reached>,
}

impl Propagation {
    pub fn get(&self, name: &str) -> Option<&Reached> {
        self.reach.get(&normalize_name(name))
    }
}

#[derive(Debug, Clone)]
struct GraphEdge {
    from: String,
    to: String,
    cost: u32,
    framing: Option<i32>,
    provenance: String,
}

/// Validate edge endpoints against the record set and run the relaxation.
///
/// Slice records and slice pseudo-nodes start at 0, seeded records at their
/// known value; band edges cost 1 in either direction, concordances 0.
pub fn propagate_upper_bounds(
    records: &[KnotRecord],
    moves: &[BandMoveEdge],
    concordances: &[ConcordanceEdge],
) -> Result<Propagation, Gamma4Error> {
    let known: BTreeMap<String, &KnotRecord> =
        records.iter().map(|r| (normalize_name(&r.name), r)).collect();

    let check_endpoint = |raw: &str, other: &str| -> Result<String, Gamma4Error> {
        let name = normalize_name(raw);
        if name.starts_with(SLICE_PREFIX) || known.contains_key(&name) {
            Ok(name)
        } else {
            Err(Gamma4Error::BadEdge {
                src: raw.to_string(),
                dst: other.to_string(),
                reason: format!("endpoint '{name}' is neither a table knot nor a slice pseudo-node"),
            })
        }
    };

    let mut edges: Vec<GraphEdge> = Vec::new();
    for mv in moves {
        let src = check_endpoint(&mv.src, &mv.dst)?;
        let dst = check_endpoint(&mv.dst, &mv.src)?;
        if src == dst {
            return Err(Gamma4Error::BadEdge {
                src: mv.src.clone(),
                dst: mv.dst.clone(),
                reason: "band move joins a knot to itself".into(),
            });
        }
        if mv.provenance.trim().is_empty() {
            return Err(Gamma4Error::BadEdge {
                src: mv.src.clone(),
                dst: mv.dst.clone(),
                reason: "band move has empty provenance".into(),
            });
        }
        edges.push(GraphEdge {
            from: src,
            to: dst,
            cost: 1,
            framing: Some(mv.framing),
            provenance: mv.provenance.clone(),
        });
    }
    for c in concordances {
        let a = check_endpoint(&c.a, &c.b)?;
        let b = check_endpoint(&c.b, &c.a)?;
        edges.push(GraphEdge { from: a, to: b, cost: 0, framing: None, provenance: c.provenance.clone() });
    }

    // Base values at terminal nodes.
    let mut reach: BTreeMap<String, Reached> = BTreeMap::new();
    for (name, record) in &known {
        if record.is_slice {
            reach.insert(
                name.clone(),
                Reached { value: 0, steps: Vec::new(), terminal: Terminal::Slice(name.clone()) },
            );
        } else if let Some(seed) = &record.gamma4_known {
            reach.insert(
                name.clone(),
                Reached {
                    value: seed.value,
                    steps: Vec::new(),
                    terminal: Terminal::Seed {
                        name: name.clone(),
                        value: seed.value,
                        provenance: seed.provenance.clone(),
                    },
                },
            );
        }
    }
    for e in &edges {
        for node in [&e.from, &e.to] {
            if node.starts_with(SLICE_PREFIX) {
                reach.entry(node.clone()).or_insert_with(|| Reached {
                    value: 0,
                    steps: Vec::new(),
                    terminal: Terminal::Slice(node.clone()),
                });
            }
        }
    }

    // Bellman-Ford to a fixpoint; the graph is tiny and has no negative
    // costs, and strict improvement keeps the result deterministic.
    loop {
        let mut changed = false;
        for e in &edges {
            for (from, to) in [(&e.from, &e.to), (&e.to, &e.from)] {
                let Some(src_reach) = reach.get(to).cloned() else { continue };
                let candidate = src_reach.value + e.cost;
                let better = match reach.get(from) {
                    None => true,
                    Some(r) => candidate < r.value,
                };
                if better {
                    let mut steps = vec![PathStep {
                        from: from.clone(),
                        to: to.clone(),
                        framing: e.framing,
                        provenance: e.provenance.clone(),
                    }];
                    steps.extend(src_reach.steps.iter().cloned());
                    reach.insert(
                        from.clone(),
                        Reached { value: candidate, steps, terminal: src_reach.terminal.clone() },
                    );
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    Ok(Propagation { reach })
}

/// Upper bound for one knot from the propagated chains plus generic caps.
pub fn upper_bound(k: &KnotRecord, propagation: &Propagation) -> (u32, Vec<Certificate>) {
    let mut best: Option<(u32, Certificate)> = None;
    let mut consider = |bound: u32, cert: Certificate| match &best {
        Some((b, _)) if *b <= bound => {}
        _ => best = Some((bound, cert)),
    };

    if let Some(reached) = propagation.get(&k.name) {
        let bound = reached.value.max(1);
        let cert = if reached.steps.is_empty() {
            match &reached.terminal {
                Terminal::Slice(_) => Certificate::SliceKnot,
                Terminal::Seed { value, provenance, .. } => {
                    Certificate::SeedValue { value: *value, provenance: provenance.clone() }
                }
            }
        } else {
            let (terminal, terminal_value) = match &reached.terminal {
                Terminal::Slice(name) => (name.clone(), 0),
                Terminal::Seed { name, value, .. } => (name.clone(), *value),
            };
            Certificate::BandChain { steps: reached.steps.clone(), terminal, terminal_value, bound }
        };
        consider(bound, cert);
    }

    if k.crossing_number >= 3 {
        let bound = crossing_upper(k.crossing_number);
        consider(bound, Certificate::CrossingCap { crossings: k.crossing_number, bound });
    }

    match best {
        Some((bound, cert)) => (bound, vec![cert]),
        None => (u32::MAX, vec![Certificate::UnreachableNode]),
    }
}

// ---------------------------------------------------------------------------
// Lower bounds: congruence floor plus embedding obstructions.
// ---------------------------------------------------------------------------

fn normalized_negative(k: &KnotRecord, form: &TaggedForm) -> Result<IntSymForm, Gamma4Error> {
    let built = form.build().map_err(|source| Gamma4Error::FormBuild {
        name: k.name.clone(),
        label: form.label.clone(),
        source,
    })?;
    let actual = built.definiteness();
    if actual != form.definiteness {
        return Err(Gamma4Error::DefinitenessMismatch {
            name: k.name.clone(),
            label: form.label.clone(),
            declared: form.definiteness,
            actual,
        });
    }
    Ok(match actual {
        Definiteness::NegativeDefinite => built,
        _ => built.negated(),
    })
}

fn nonexistence_cert(label: &str, summand: Option<u64>, target_rank: usize, out: &SearchOutcome) -> Certificate {
    let stats = out.stats();
    Certificate::EmbeddingNonexistence {
        form: label.to_string(),
        summand,
        target_rank,
        nodes: stats.nodes_explored,
        candidates: stats.candidates_enumerated,
        steps: stats.steps,
    }
}

/// Verdict of the per-divisor obstruction loop for one normalized form.
enum DivisorSweep {
    AllFail(Vec<Certificate>),
    SomeEmbed(Certificate),
    Undecided(Certificate),
}

/// Run `G + [-l]` against rank `rank(G) + 1` for every divisor. A
/// restriction hint is tried first: if the named sub-form already fails to
/// embed in the target, every divisor is settled at once.
fn sweep_divisors(
    form: &TaggedForm,
    g: &IntSymForm,
    divisors: &[u64],
    budget: SearchBudget,
) -> Result<DivisorSweep, Gamma4Error> {
    let target_rank = g.rank() + 1;

    if let Some(indices) = &form.restriction_hint {
        let sub = g.principal_submatrix(indices);
        if let Ok(problem) = EmbeddingProblem::new(sub, target_rank) {
            if let SearchOutcome::NoEmbedding(stats) = find_embedding(&problem, budget) {
                return Ok(DivisorSweep::AllFail(vec![Certificate::RestrictionReuse {
                    form: form.label.clone(),
                    indices: indices.clone(),
                    target_rank,
                    nodes: stats.nodes_explored,
                    divisors_settled: divisors.to_vec(),
                }]));
            }
        }
        // An unexpectedly embeddable or unbuildable restriction is not an
        // error; fall through to the direct per-divisor searches.
    }

    let mut certs = Vec::new();
    for &ell in divisors {
        let out = embedding_exists_with_summand(g, ell as i64, target_rank, budget)
            .map_err(Gamma4Error::Engine)?;
        match out {
            SearchOutcome::NoEmbedding(_) => {
                certs.push(nonexistence_cert(&form.label, Some(ell), target_rank, &out));
            }
            SearchOutcome::Embeds(cert, _) => {
                return Ok(DivisorSweep::SomeEmbed(Certificate::EmbeddingExists {
                    form: form.label.clone(),
                    summand: Some(ell),
                    target_rank,
                    columns: cert.columns,
                }));
            }
            SearchOutcome::Undecided(stats) => {
                return Ok(DivisorSweep::Undecided(Certificate::EngineUndecided {
                    form: form.label.clone(),
                    summand: Some(ell),
                    target_rank,
                    steps: stats.steps,
                }));
            }
        }
    }
    Ok(DivisorSweep::AllFail(certs))
}

fn negative_side(k: &KnotRecord) -> Option<&TaggedForm> {
    k.checkerboards
        .iter()
        .find(|f| f.definiteness == Definiteness::NegativeDefinite)
        .or_else(|| k.checkerboards.iter().find(|f| f.definiteness == Definiteness::PositiveDefinite))
}

fn positive_side(k: &KnotRecord) -> Option<&TaggedForm> {
    k.checkerboards.iter().find(|f| f.definiteness == Definiteness::PositiveDefinite)
}

/// Lower bound with certificates. Any engine `Undecided` weakens the bound
/// and leaves a taint certificate behind.
pub fn lower_bound(k: &KnotRecord, budget: SearchBudget) -> Result<(u32, Vec<Certificate>), Gamma4Error> {
    let class = k.class();
    match class {
        CongruenceClass::Four => {
            let mut certs = vec![Certificate::CongruenceFloor { class, floor: 2 }];
            let (Some(neg), Some(pos)) = (
                k.checkerboards.iter().find(|f| f.definiteness == Definiteness::NegativeDefinite),
                positive_side(k),
            ) else {
                certs.push(Certificate::MissingFormData { class });
                return Ok((2, certs));
            };
            let mut all_fail = true;
            for form in [neg, pos] {
                let g = normalized_negative(k, form)?;
                let target_rank = g.rank() + 2;
                let problem = EmbeddingProblem::new(g, target_rank).map_err(Gamma4Error::Engine)?;
                match find_embedding(&problem, budget) {
                    out @ SearchOutcome::NoEmbedding(_) => {
                        certs.push(nonexistence_cert(&form.label, None, target_rank, &out));
                    }
                    SearchOutcome::Embeds(cert, _) => {
                        all_fail = false;
                        certs.push(Certificate::EmbeddingExists {
                            form: form.label.clone(),
                            summand: None,
                            target_rank,
                            columns: cert.columns,
                        });
                    }
                    SearchOutcome::Undecided(stats) => {
                        all_fail = false;
                        certs.push(Certificate::EngineUndecided {
                            form: form.label.clone(),
                            summand: None,
                            target_rank,
                            steps: stats.steps,
                        });
                    }
                }
            }
            Ok((if all_fail { 3 } else { 2 }, certs))
        }
        CongruenceClass::PlusTwo | CongruenceClass::MinusTwo => {
            let mut certs = vec![Certificate::CongruenceFloor { class, floor: 1 }];
            let Some(form) = negative_side(k) else {
                certs.push(Certificate::MissingFormData { class });
                return Ok((1, certs));
            };
            let g = normalized_negative(k, form)?;
            let divisors = square_quotient_divisors(k.det);
            match sweep_divisors(form, &g, &divisors, budget)? {
                DivisorSweep::AllFail(mut sweep_certs) => {
                    certs.append(&mut sweep_certs);
                    Ok((2, certs))
                }
                DivisorSweep::SomeEmbed(cert) => {
                    certs.push(cert);
                    Ok((1, certs))
                }
                DivisorSweep::Undecided(cert) => {
                    certs.push(cert);
                    Ok((1, certs))
                }
            }
        }
        CongruenceClass::Zero => {
            let mut certs = vec![Certificate::CongruenceFloor { class, floor: 1 }];
            let (Some(neg), Some(pos)) = (
                k.checkerboards.iter().find(|f| f.definiteness == Definiteness::NegativeDefinite),
                positive_side(k),
            ) else {
                if !k.is_slice {
                    certs.push(Certificate::MissingFormData { class });
                }
                return Ok((1, certs));
            };
            let divisors = square_quotient_divisors(k.det);
            let mut bound = 2;
            for form in [neg, pos] {
                let g = normalized_negative(k, form)?;
                match sweep_divisors(form, &g, &divisors, budget)? {
                    DivisorSweep::AllFail(mut sweep_certs) => certs.append(&mut sweep_certs),
                    DivisorSweep::SomeEmbed(cert) => {
                        certs.push(cert);
                        bound = 1;
                        break;
                    }
                    DivisorSweep::Undecided(cert) => {
                        certs.push(cert);
                        bound = 1;
                        break;
                    }
                }
            }
            Ok((bound, certs))
        }
    }
}

/// Resolve one knot against the propagated upper bounds.
///
/// A lower bound exceeding the upper bound means the tables or the engine
/// are wrong, and is reported as a hard error rather than clamped.
pub fn resolve(
    k: &KnotRecord,
    propagation: &Propagation,
    budget: SearchBudget,
) -> Result<Gamma4Interval, Gamma4Error> {
    k.validate()?;
    let (lower, mut certs) = lower_bound(k, budget)?;
    let (upper, mut upper_certs) = upper_bound(k, propagation);
    certs.append(&mut upper_certs);
    if lower > upper {
        return Err(Gamma4Error::IntegrityFailure { name: k.name.clone(), lower, upper });
    }
    Ok(Gamma4Interval { lower, upper, certificates: certs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn graph_form(label: &str, definiteness: Definiteness, weights: &[i64], edges: &[(usize, usize)]) -> TaggedForm {
        TaggedForm {
            label: label.to_string(),
            definiteness,
            source: FormSource::Graph(WeightedGraphForm::new(weights.to_vec(), edges.to_vec()).unwrap()),
            mirrored: false,
            restriction_hint: None,
            provenance: "test".into(),
        }
    }

    fn bare_record(name: &str, crossings: u32, det: u64, signature: i64, arf: u8) -> KnotRecord {
        KnotRecord {
            name: name.into(),
            crossing_number: crossings,
            det,
            signature,
            arf,
            is_slice: false,
            g4: None,
            gamma4_known: None,
            checkerboards: Vec::new(),
        }
    }

    #[test]
    fn congruence_examples() {
        assert_eq!(congruence_class(0, 1).unwrap(), CongruenceClass::Four);
        assert_eq!(congruence_class(-2, 0).unwrap(), CongruenceClass::MinusTwo);
        assert_eq!(congruence_class(-8, 1).unwrap(), CongruenceClass::Four);
        assert_eq!(congruence_class(0, 0).unwrap(), CongruenceClass::Zero);
        assert_eq!(congruence_class(2, 0).unwrap(), CongruenceClass::PlusTwo);
        assert!(matches!(congruence_class(3, 0), Err(Gamma4Error::OddSignature(3))));
    }

    #[test]
    fn congruence_is_periodic_and_matches_modular_arithmetic() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let sigma = 2 * rng.gen_range(-50i64..=50);
            let arf = rng.gen_range(0u8..=1);
            let class = congruence_class(sigma, arf).unwrap();
            assert_eq!(class, congruence_class(sigma + 8, arf).unwrap());
            assert_eq!(class, congruence_class(sigma - 8, arf).unwrap());
            let expected = match (sigma + 4 * arf as i64).rem_euclid(8) {
                0 => CongruenceClass::Zero,
                2 => CongruenceClass::PlusTwo,
                4 => CongruenceClass::Four,
                6 => CongruenceClass::MinusTwo,
                _ => unreachable!(),
            };
            assert_eq!(class, expected);
        }
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(square_quotient_divisors(75), vec![3, 75]);
        assert_eq!(square_quotient_divisors(15), vec![15]);
        assert_eq!(square_quotient_divisors(36), vec![1, 4, 9, 36]);
        assert_eq!(square_quotient_divisors(1), vec![1]);
    }

    #[test]
    fn clasp_and_crossing_caps() {
        assert_eq!(clasp_upper(4), 4);
        assert_eq!(clasp_upper(2), 3);
        assert_eq!(clasp_upper(1), 2);
        assert_eq!(crossing_upper(8), 4);
        assert_eq!(crossing_upper(9), 4);
        assert_eq!(crossing_upper(3), 1);
        assert_eq!(clasp_lower_from_gamma4(3), 2);
        assert_eq!(clasp_lower_from_gamma4(2), 1);
        assert_eq!(clasp_lower_from_gamma4(1), 0);
    }

    #[test]
    fn name_normalization() {
        assert_eq!(normalize_name("-9_2"), "9_2");
        assert_eq!(normalize_name("8_18"), "8_18");
        assert_eq!(normalize_name("SLICE:3_1#-3_1"), "SLICE:3_1#-3_1");
    }

    fn cycle_form(label: &str, sign: i64) -> TaggedForm {
        let definiteness = if sign < 0 {
            Definiteness::NegativeDefinite
        } else {
            Definiteness::PositiveDefinite
        };
        graph_form(label, definiteness, &[3 * sign; 4], &[(0, 1), (1, 2), (2, 3), (3, 0)])
    }

    fn record_8_18() -> KnotRecord {
        KnotRecord {
            checkerboards: vec![cycle_form("negative", -1), cycle_form("positive", 1)],
            ..bare_record("8_18", 8, 45, 0, 1)
        }
    }

    #[test]
    fn lower_bound_class_four_with_forms() {
        let k = record_8_18();
        k.validate().unwrap();
        let (bound, certs) = lower_bound(&k, SearchBudget::default()).unwrap();
        assert_eq!(bound, 3);
        let nonexistence = certs
            .iter()
            .filter(|c| matches!(c, Certificate::EmbeddingNonexistence { target_rank: 6, .. }))
            .count();
        assert_eq!(nonexistence, 2);
    }

    #[test]
    fn lower_bound_class_four_without_forms_is_two() {
        let k = bare_record("9_14", 9, 37, 0, 1);
        let (bound, certs) = lower_bound(&k, SearchBudget::default()).unwrap();
        assert_eq!(bound, 2);
        assert!(certs.iter().any(|c| matches!(c, Certificate::MissingFormData { .. })));
    }

    #[test]
    fn lower_bound_class_two_embedding_defeats_obstruction() {
        // Right-handed trefoil: class +2, negative form is the negated A2
        // chain; [-2,1;1,-2] + [-3] embeds in rank 3, so the bound stays 1.
        let k = KnotRecord {
            checkerboards: vec![graph_form(
                "negative",
                Definiteness::NegativeDefinite,
                &[-2, -2],
                &[(0, 1)],
            )],
            ..bare_record("3_1", 3, 3, -2, 1)
        };
        let (bound, certs) = lower_bound(&k, SearchBudget::default()).unwrap();
        assert_eq!(bound, 1);
        assert!(certs.iter().any(|c| matches!(c, Certificate::EmbeddingExists { .. })));
    }

    #[test]
    fn lower_bound_class_two_obstruction_gives_two() {
        let k = KnotRecord {
            checkerboards: vec![graph_form(
                "negative",
                Definiteness::NegativeDefinite,
                &[-2, -2, -4, -2, -2, -2],
                &[(0, 1), (1, 2), (2, 3), (2, 4), (4, 5)],
            )],
            ..bare_record("9_16", 9, 39, -6, 0)
        };
        let (bound, certs) = lower_bound(&k, SearchBudget::default()).unwrap();
        assert_eq!(bound, 2);
        assert!(certs
            .iter()
            .any(|c| matches!(c, Certificate::EmbeddingNonexistence { summand: Some(39), target_rank: 7, .. })));
    }

    #[test]
    fn lower_bound_restriction_hint_settles_all_divisors() {
        let mut form = graph_form(
            "negative",
            Definiteness::NegativeDefinite,
            &[-3, -3, -3, -3, -3],
            &[(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)],
        );
        form.restriction_hint = Some(vec![0, 1, 2, 3]);
        let k = KnotRecord { checkerboards: vec![form], ..bare_record("9_40", 9, 75, -2, 1) };
        let (bound, certs) = lower_bound(&k, SearchBudget::default()).unwrap();
        assert_eq!(bound, 2);
        let reuse = certs.iter().find_map(|c| match c {
            Certificate::RestrictionReuse { divisors_settled, indices, .. } => {
                Some((divisors_settled.clone(), indices.clone()))
            }
            _ => None,
        });
        let (divisors, indices) = reuse.expect("restriction reuse certificate");
        assert_eq!(divisors, vec![3, 75]);
        assert_eq!(indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn lower_bound_class_zero_both_sides_must_fail() {
        let k = KnotRecord {
            checkerboards: vec![cycle_form("negative", -1), cycle_form("positive", 1)],
            ..bare_record("synthetic", 9, 45, 4, 1)
        };
        assert_eq!(k.class(), CongruenceClass::Zero);
        let (bound, _) = lower_bound(&k, SearchBudget::default()).unwrap();
        assert_eq!(bound, 2);

        // A class-zero knot whose form embeds keeps the floor.
        let k = KnotRecord {
            checkerboards: vec![
                graph_form("negative", Definiteness::NegativeDefinite, &[-9], &[]),
                graph_form("positive", Definiteness::PositiveDefinite, &[9], &[]),
            ],
            ..bare_record("synthetic2", 9, 9, 0, 0)
        };
        let (bound, _) = lower_bound(&k, SearchBudget::default()).unwrap();
        assert_eq!(bound, 1);
    }

    #[test]
    fn undecided_engine_taints_and_weakens() {
        let k = record_8_18();
        let (bound, certs) = lower_bound(&k, SearchBudget { max_steps: 3 }).unwrap();
        assert_eq!(bound, 2);
        assert!(certs.iter().any(Certificate::is_taint));
    }

    #[test]
    fn definiteness_mismatch_is_a_hard_error() {
        let k = KnotRecord {
            checkerboards: vec![graph_form(
                "negative",
                Definiteness::NegativeDefinite,
                &[2],
                &[],
            )],
            ..bare_record("bogus", 8, 3, -2, 1)
        };
        assert!(matches!(k.validate(), Err(Gamma4Error::DefinitenessMismatch { .. })));
    }

    fn mini_world() -> (Vec<KnotRecord>, Vec<BandMoveEdge>, Vec<ConcordanceEdge>) {
        let seed = |name: &str, c: u32, det: u64, sig: i64, arf: u8, value: u32| KnotRecord {
            gamma4_known: Some(SeedValue { value, provenance: "table".into() }),
            ..bare_record(name, c, det, sig, arf)
        };
        let slice = |name: &str, c: u32, det: u64| KnotRecord {
            is_slice: true,
            ..bare_record(name, c, det, 0, 0)
        };
        let records = vec![
            record_8_18(),
            seed("7_7", 7, 21, 0, 1, 2),
            slice("9_46", 9, 9),
            bare_record("9_29", 9, 51, -2, 1),
            slice("8_20", 8, 9),
            bare_record("9_33", 9, 61, 0, 1),
            bare_record("9_45", 9, 23, -2, 0),
            seed("3_1", 3, 3, -2, 1, 1),
            bare_record("8_10", 8, 27, -2, 1),
        ];
        let mv = |src: &str, dst: &str, framing: i32| BandMoveEdge {
            src: src.into(),
            dst: dst.into(),
            framing,
            provenance: "test".into(),
        };
        let moves = vec![
            mv("8_18", "7_7", 0),
            mv("9_29", "9_46", 1),
            mv("9_33", "9_45", -1),
            mv("9_45", "SLICE:10_137", -1),
        ];
        let conc = vec![ConcordanceEdge { a: "8_10".into(), b: "-3_1".into(), provenance: "test".into() }];
        (records, moves, conc)
    }

    #[test]
    fn upper_bound_propagation() {
        let (records, moves, conc) = mini_world();
        let prop = propagate_upper_bounds(&records, &moves, &conc).unwrap();

        let get = |name: &str| records.iter().find(|r| r.name == name).unwrap();
        assert_eq!(upper_bound(get("8_18"), &prop).0, 3);
        assert_eq!(upper_bound(get("9_29"), &prop).0, 1);
        assert_eq!(upper_bound(get("9_46"), &prop).0, 1); // slice itself
        assert_eq!(upper_bound(get("9_45"), &prop).0, 1); // one move to a slice pseudo-node
        assert_eq!(upper_bound(get("9_33"), &prop).0, 2); // two moves
        assert_eq!(upper_bound(get("8_10"), &prop).0, 1); // concordance, cost 0
    }

    #[test]
    fn upper_bound_falls_back_to_crossing_cap() {
        let (records, moves, conc) = mini_world();
        let prop = propagate_upper_bounds(&records, &moves, &conc).unwrap();
        let lonely = bare_record("9_00", 9, 13, 0, 1);
        let (bound, certs) = upper_bound(&lonely, &prop);
        assert_eq!(bound, 4);
        assert!(matches!(certs[0], Certificate::CrossingCap { crossings: 9, bound: 4 }));
    }

    #[test]
    fn dangling_edges_are_rejected() {
        let (records, mut moves, conc) = mini_world();
        moves.push(BandMoveEdge { src: "8_18".into(), dst: "99_99".into(), framing: 0, provenance: "x".into() });
        assert!(matches!(
            propagate_upper_bounds(&records, &moves, &conc),
            Err(Gamma4Error::BadEdge { .. })
        ));
    }

    #[test]
    fn resolve_8_18_and_mirror_invariance() {
        let (records, moves, conc) = mini_world();
        let prop = propagate_upper_bounds(&records, &moves, &conc).unwrap();
        let k = record_8_18();
        let interval = resolve(&k, &prop, SearchBudget::default()).unwrap();
        assert_eq!(interval.determined(), Some(3));
        assert!(!interval.tainted());

        let mirrored = k.mirrored();
        mirrored.validate().unwrap();
        let mirrored_interval = resolve(&mirrored, &prop, SearchBudget::default()).unwrap();
        assert_eq!(mirrored_interval.determined(), Some(3));
        assert_eq!(interval.lower, mirrored_interval.lower);
        assert_eq!(interval.upper, mirrored_interval.upper);
    }

    #[test]
    fn mirroring_swaps_class_sign_but_not_bounds() {
        // A +-2-class knot with a stored negative form: the mirror stores
        // the same form as a positive one behind the `mirrored` flag, and
        // normalization reproduces the identical search problems.
        let k = KnotRecord {
            checkerboards: vec![graph_form(
                "negative",
                Definiteness::NegativeDefinite,
                &[-2, -2, -4, -2, -2, -2],
                &[(0, 1), (1, 2), (2, 3), (2, 4), (4, 5)],
            )],
            ..bare_record("9_16", 9, 39, -6, 0)
        };
        assert_eq!(k.class(), CongruenceClass::PlusTwo);
        let m = k.mirrored();
        m.validate().unwrap();
        assert_eq!(m.class(), CongruenceClass::MinusTwo);
        assert_eq!(m.checkerboards[0].definiteness, Definiteness::PositiveDefinite);
        let (b1, _) = lower_bound(&k, SearchBudget::default()).unwrap();
        let (b2, _) = lower_bound(&m, SearchBudget::default()).unwrap();
        assert_eq!(b1, 2);
        assert_eq!(b2, 2);
    }

    #[test]
    fn resolve_integrity_failure() {
        // Claim a seed of 1 for a class-4 knot: lower 2 > upper 1 must be
        // reported, not clamped.
        let (mut records, moves, conc) = mini_world();
        let k = KnotRecord {
            gamma4_known: Some(SeedValue { value: 1, provenance: "bogus".into() }),
            ..bare_record("9_14", 9, 37, 0, 1)
        };
        records.push(k.clone());
        let prop = propagate_upper_bounds(&records, &moves, &conc).unwrap();
        let err = resolve(&k, &prop, SearchBudget::default()).unwrap_err();
        assert!(matches!(err, Gamma4Error::IntegrityFailure { lower: 2, upper: 1, .. }));
    }

    #[test]
    fn monotonicity_adding_edges_and_divisors() {
        let (records, moves, conc) = mini_world();
        let prop = propagate_upper_bounds(&records, &moves, &conc).unwrap();
        let before = upper_bound(records.iter().find(|r| r.name == "9_33").unwrap(), &prop).0;

        let mut more = moves.clone();
        more.push(BandMoveEdge { src: "9_33".into(), dst: "9_46".into(), framing: 0, provenance: "extra".into() });
        let prop2 = propagate_upper_bounds(&records, &more, &conc).unwrap();
        let after = upper_bound(records.iter().find(|r| r.name == "9_33").unwrap(), &prop2).0;
        assert!(after <= before);

        // The class +-2 lower bound is antitone in the divisor list: a
        // larger determinant brings extra divisors, which can only give the
        // obstruction more ways to fail. The negated A2 chain embeds with
        // the [-3] summand, so every determinant whose divisor list
        // contains 3 keeps the bound at 1.
        let a2 = graph_form("negative", Definiteness::NegativeDefinite, &[-2, -2], &[(0, 1)]);
        for det in [3u64, 27] {
            assert!(square_quotient_divisors(det).contains(&3));
            let k = KnotRecord { checkerboards: vec![a2.clone()], ..bare_record("t", 3, det, -2, 1) };
            let (bound, _) = lower_bound(&k, SearchBudget::default()).unwrap();
            assert_eq!(bound, 1, "det {det}");
        }
    }

    #[test]
    fn slice_record_resolves_to_one() {
        let (records, moves, conc) = mini_world();
        let prop = propagate_upper_bounds(&records, &moves, &conc).unwrap();
        let slice = records.iter().find(|r| r.name == "9_46").unwrap();
        let interval = resolve(slice, &prop, SearchBudget::default()).unwrap();
        assert_eq!(interval.determined(), Some(1));
        assert!(interval.certificates.iter().any(|c| matches!(c, Certificate::SliceKnot)));
    }
}
