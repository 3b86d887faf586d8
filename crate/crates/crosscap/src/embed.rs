//! Exhaustive search for isometric embeddings of negative definite forms
//! into diagonal unimodular lattices.
//!
//! The only targets are `(Z^m, -Id)`; positive definite problems are
//! normalized by negating both sides before they reach this module. A
//! source basis vector of square `-N` must map to an integer vector of
//! norm `N`, and each pair of images must reproduce the corresponding Gram
//! entry, so the search places images depth-first, one basis vector at a
//! time, enumerating at each level only the vectors of the required norm
//! that satisfy every inner-product constraint against the images already
//! placed.
//!
//! Basis vectors are ordered by ascending norm (ties broken by descending
//! degree in the incidence graph), which places the most rigid vectors
//! first. Signed coordinate permutations are isometries of the target, so
//! the first image is fixed to its canonical orbit representative and the
//! second is reduced modulo the stabilizer of the first; deeper levels are
//! enumerated in full. A search that exhausts its node budget reports
//! [`SearchOutcome::Undecided`], never nonexistence.

use crate::forms::{Definiteness, IntSymForm};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EmbedError {
    #[error("source form is not negative definite")]
    NotNegativeDefinite,
    #[error("target rank {target} is smaller than the source rank {source_rank}")]
    TargetRankTooSmall { source_rank: usize, target: usize },
    #[error("source form has entries that do not fit in 64 bits")]
    EntryTooLarge,
    #[error("summand must be a positive integer, got {0}")]
    BadSummand(i64),
    #[error("brute-force limits exceeded: rank <= {max_rank}, norms <= {max_norm}, target rank <= {max_target}")]
    OracleLimits { max_rank: usize, max_norm: i64, max_target: usize },
}

/// An embedding question: does `source` embed isometrically in `(Z^m, -Id)`?
#[derive(Debug, Clone)]
pub struct EmbeddingProblem {
    source: IntSymForm,
    target_rank: usize,
    gram: Vec<Vec<i64>>,
}

impl EmbeddingProblem {
    pub fn new(source: IntSymForm, target_rank: usize) -> Result<Self, EmbedError> {
        if source.rank() > 0 && source.definiteness() != Definiteness::NegativeDefinite {
            return Err(EmbedError::NotNegativeDefinite);
        }
        if target_rank < source.rank() {
            return Err(EmbedError::TargetRankTooSmall {
                source_rank: source.rank(),
                target: target_rank,
            });
        }
        let gram = source.to_i64().map_err(|_| EmbedError::EntryTooLarge)?;
        Ok(EmbeddingProblem { source, target_rank, gram })
    }

    pub fn source(&self) -> &IntSymForm {
        &self.source
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }
}

/// Images of the source basis vectors, one column per basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingCertificate {
    pub columns: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Placement nodes visited in the outer depth-first search.
    pub nodes_explored: u64,
    /// Candidate vectors emitted by the per-level enumerator.
    pub candidates_enumerated: u64,
    /// Total low-level enumeration steps, the unit the budget is charged in.
    pub steps: u64,
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Step cap for a single search. Exhaustion yields `Undecided`, which the
/// callers must keep distinct from a proof of nonexistence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_steps: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_steps: 50_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// An embedding exists; the certificate has been verified.
    Embeds(EmbeddingCertificate, SearchStats),
    /// The search space was exhausted without finding an embedding.
    NoEmbedding(SearchStats),
    /// The budget ran out first; existence is unknown.
    Undecided(SearchStats),
}

impl SearchOutcome {
    pub fn exists(&self) -> Option<bool> {
        match self {
            SearchOutcome::Embeds(..) => Some(true),
            SearchOutcome::NoEmbedding(..) => Some(false),
            SearchOutcome::Undecided(..) => None,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            SearchOutcome::Embeds(_, s) | SearchOutcome::NoEmbedding(s) | SearchOutcome::Undecided(s) => s,
        }
    }

    pub fn certificate(&self) -> Option<&EmbeddingCertificate> {
        match self {
            SearchOutcome::Embeds(c, _) => Some(c),
            _ => None,
        }
    }
}

/// Enumeration mode for [`vectors_of_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormVectors {
    /// Every integer vector of the given norm.
    Full,
    /// One representative per orbit under signed coordinate permutations:
    /// entries non-increasing and non-negative.
    Canonical,
}

/// All vectors `v` in `Z^m` with `sum v_i^2 = n`, in the requested mode.
pub fn vectors_of_norm(m: usize, n: i64, mode: NormVectors) -> Vec<Vec<i64>> {
    assert!(n >= 0, "norm must be non-negative");
    let mut out = Vec::new();
    let mut current = vec![0i64; m];
    match mode {
        NormVectors::Canonical => {
            canonical_rec(m, 0, n, i64::MAX, &mut current, &mut out);
        }
        NormVectors::Full => {
            full_rec(m, 0, n, &mut current, &mut out);
        }
    }
    out
}

fn canonical_rec(m: usize, k: usize, remaining: i64, max_val: i64, current: &mut [i64], out: &mut Vec<Vec<i64>>) {
    if k == m {
        if remaining == 0 {
            out.push(current.to_vec());
        }
        return;
    }
    let cap = remaining.isqrt().min(max_val);
    for v in (0..=cap).rev() {
        current[k] = v;
        canonical_rec(m, k + 1, remaining - v * v, v, current, out);
    }
    current[k] = 0;
}

fn full_rec(m: usize, k: usize, remaining: i64, current: &mut [i64], out: &mut Vec<Vec<i64>>) {
    if k == m {
        if remaining == 0 {
            out.push(current.to_vec());
        }
        return;
    }
    let cap = remaining.isqrt();
    for v in -cap..=cap {
        current[k] = v;
        full_rec(m, k + 1, remaining - v * v, current, out);
    }
    current[k] = 0;
}

struct BudgetExceeded;

struct Search<'a> {
    m: usize,
    /// Gram matrix in search order.
    gram: Vec<Vec<i64>>,
    placed: Vec<Vec<i64>>,
    /// suffix square-sums of each placed vector, length m+1
    suffixes: Vec<Vec<i64>>,
    stats: &'a mut SearchStats,
    budget: SearchBudget,
}

impl Search<'_> {
    fn charge(&mut self) -> Result<(), BudgetExceeded> {
        self.stats.steps += 1;
        if self.stats.steps > self.budget.max_steps {
            Err(BudgetExceeded)
        } else {
            Ok(())
        }
    }

    fn dfs(&mut self, level: usize) -> Result<Option<Vec<Vec<i64>>>, BudgetExceeded> {
        self.stats.nodes_explored += 1;
        self.charge()?;
        let n = self.gram.len();
        if level == n {
            return Ok(Some(self.placed.clone()));
        }
        let norm = -self.gram[level][level];
        // Required coordinate sums against each placed image: the target
        // pairing is -Id, so sum_i v_i w_i must equal -G[j][level].
        let required: Vec<i64> = (0..level).map(|j| -self.gram[j][level]).collect();

        let mut candidates: Vec<Vec<i64>> = Vec::new();
        if level == 0 {
            candidates = vectors_of_norm(self.m, norm, NormVectors::Canonical);
            self.stats.candidates_enumerated += candidates.len() as u64;
            self.stats.steps += candidates.len() as u64;
        } else {
            let mut current = vec![0i64; self.m];
            self.constrained_rec(0, norm, &required, &mut current, &mut candidates)?;
            if level == 1 {
                let v0 = self.placed[0].clone();
                candidates.retain(|v| is_canonical_under_stabilizer(&v0, v));
            }
        }

        for v in candidates {
            let suffix = suffix_squares(&v);
            self.placed.push(v);
            self.suffixes.push(suffix);
            let found = self.dfs(level + 1);
            self.placed.pop();
            self.suffixes.pop();
            if let Some(images) = found? {
                return Ok(Some(images));
            }
        }
        Ok(None)
    }

    /// Enumerate every vector of the given norm whose coordinate sums
    /// against the placed images match `required`. Prunes with the
    /// Cauchy-Schwarz bound on the not-yet-assigned coordinates.
    fn constrained_rec(
        &mut self,
        k: usize,
        remaining: i64,
        residual: &[i64],
        current: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) -> Result<(), BudgetExceeded> {
        self.charge()?;
        if k == self.m {
            if remaining == 0 && residual.iter().all(|&r| r == 0) {
                self.stats.candidates_enumerated += 1;
                out.push(current.clone());
            }
            return Ok(());
        }
        for (j, &r) in residual.iter().enumerate() {
            let tail = self.suffixes[j][k];
            if r * r > remaining * tail {
                return Ok(());
            }
        }
        let cap = remaining.isqrt();
        let mut next = residual.to_vec();
        for v in -cap..=cap {
            for (j, slot) in next.iter_mut().enumerate() {
                *slot = residual[j] - v * self.placed[j][k];
            }
            current[k] = v;
            self.constrained_rec(k + 1, remaining - v * v, &next, current, out)?;
        }
        current[k] = 0;
        Ok(())
    }
}

fn suffix_squares(v: &[i64]) -> Vec<i64> {
    let mut suffix = vec![0i64; v.len() + 1];
    for k in (0..v.len()).rev() {
        suffix[k] = suffix[k + 1] + v[k] * v[k];
    }
    suffix
}

/// Canonical representative of `v` in its orbit under the stabilizer of the
/// canonical vector `v0`: coordinates may be permuted within blocks where
/// `v0` is constant, and sign-flipped where `v0` vanishes.
fn canonicalize_under_stabilizer(v0: &[i64], v: &[i64]) -> Vec<i64> {
    let mut out = v.to_vec();
    let mut start = 0;
    while start < v0.len() {
        let mut end = start + 1;
        while end < v0.len() && v0[end] == v0[start] {
            end += 1;
        }
        if v0[start] == 0 {
            for x in &mut out[start..end] {
                *x = x.abs();
            }
        }
        out[start..end].sort_unstable_by(|a, b| b.cmp(a));
        start = end;
    }
    out
}

fn is_canonical_under_stabilizer(v0: &[i64], v: &[i64]) -> bool {
    canonicalize_under_stabilizer(v0, v) == v
}

/// Decide whether the problem's source embeds in `(Z^m, -Id)`.
///
/// Positive answers carry a certificate that has already been checked
/// against the source Gram matrix; negative answers are exhaustive subject
/// to the symmetry reductions described in the module docs.
///
/// ```
/// use crosscap::embed::{find_embedding, EmbeddingProblem, SearchBudget};
/// use crosscap::forms::IntSymForm;
///
/// // A chain of two -2s needs three basis vectors: f1-f2, f2-f3.
/// let a2 = IntSymForm::from_rows(&[&[-2, 1], &[1, -2]]).unwrap();
/// let rank2 = EmbeddingProblem::new(a2.clone(), 2).unwrap();
/// assert_eq!(find_embedding(&rank2, SearchBudget::default()).exists(), Some(false));
/// let rank3 = EmbeddingProblem::new(a2, 3).unwrap();
/// assert_eq!(find_embedding(&rank3, SearchBudget::default()).exists(), Some(true));
/// ```
pub fn find_embedding(problem: &EmbeddingProblem, budget: SearchBudget) -> SearchOutcome {
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let n = problem.source.rank();

    if n == 0 {
        stats.wall_time = start.elapsed();
        let cert = EmbeddingCertificate { columns: Vec::new() };
        return SearchOutcome::Embeds(cert, stats);
    }

    let order = search_order(&problem.gram);
    let gram: Vec<Vec<i64>> = order
        .iter()
        .map(|&a| order.iter().map(|&b| problem.gram[a][b]).collect())
        .collect();

    let mut search = Search {
        m: problem.target_rank,
        gram,
        placed: Vec::with_capacity(n),
        suffixes: Vec::with_capacity(n),
        stats: &mut stats,
        budget,
    };

    let result = search.dfs(0);
    stats.wall_time = start.elapsed();
    match result {
        Err(BudgetExceeded) => SearchOutcome::Undecided(stats),
        Ok(None) => SearchOutcome::NoEmbedding(stats),
        Ok(Some(images)) => {
            let mut columns = vec![Vec::new(); n];
            for (pos, image) in images.into_iter().enumerate() {
                columns[order[pos]] = image;
            }
            let cert = EmbeddingCertificate { columns };
            assert!(
                verify_certificate(&problem.source, &cert),
                "internal error: found embedding fails verification"
            );
            SearchOutcome::Embeds(cert, stats)
        }
    }
}

/// Most-constrained-first ordering: ascending norm, then descending degree
/// in the incidence graph, then index.
fn search_order(gram: &[Vec<i64>]) -> Vec<usize> {
    let n = gram.len();
    let mut order: Vec<usize> = (0..n).collect();
    let degree = |i: usize| gram[i].iter().enumerate().filter(|&(j, &x)| j != i && x != 0).count();
    order.sort_by_key(|&i| (-gram[i][i], std::cmp::Reverse(degree(i)), i));
    order
}

/// Decide embeddability of `G + [-ell]` into `(Z^target_rank, -Id)`.
pub fn embedding_exists_with_summand(
    source: &IntSymForm,
    ell: i64,
    target_rank: usize,
    budget: SearchBudget,
) -> Result<SearchOutcome, EmbedError> {
    if ell <= 0 {
        return Err(EmbedError::BadSummand(ell));
    }
    let problem = EmbeddingProblem::new(source.direct_sum(&[-ell]), target_rank)?;
    Ok(find_embedding(&problem, budget))
}

/// Exact Gram check: `columns^T (-Id) columns == source`.
pub fn verify_certificate(source: &IntSymForm, cert: &EmbeddingCertificate) -> bool {
    let n = source.rank();
    if cert.columns.len() != n {
        return false;
    }
    let m = cert.columns.first().map_or(0, Vec::len);
    if cert.columns.iter().any(|c| c.len() != m) {
        return false;
    }
    for a in 0..n {
        for b in 0..n {
            let dot: i128 = (0..m)
                .map(|i| cert.columns[a][i] as i128 * cert.columns[b][i] as i128)
                .sum();
            if BigInt::from(-dot) != *source.entry(a, b) {
                return false;
            }
        }
    }
    true
}

const ORACLE_MAX_RANK: usize = 4;
const ORACLE_MAX_NORM: i64 = 6;
const ORACLE_MAX_TARGET: usize = 6;

/// Independent oracle: enumerate tuples of norm-correct vectors directly,
/// with no basis reordering and no symmetry reduction. Usable only on small
/// instances; the limits are enforced.
pub fn brute_force_embedding(problem: &EmbeddingProblem) -> Result<SearchOutcome, EmbedError> {
    let n = problem.source.rank();
    let m = problem.target_rank;
    let max_norm = (0..n).map(|i| -problem.gram[i][i]).max().unwrap_or(0);
    if n > ORACLE_MAX_RANK || m > ORACLE_MAX_TARGET || max_norm > ORACLE_MAX_NORM {
        return Err(EmbedError::OracleLimits {
            max_rank: ORACLE_MAX_RANK,
            max_norm: ORACLE_MAX_NORM,
            max_target: ORACLE_MAX_TARGET,
        });
    }

    let start = Instant::now();
    let mut stats = SearchStats::default();
    if n == 0 {
        stats.wall_time = start.elapsed();
        return Ok(SearchOutcome::Embeds(EmbeddingCertificate { columns: Vec::new() }, stats));
    }

    let pools: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|i| vectors_of_norm(m, -problem.gram[i][i], NormVectors::Full))
        .collect();
    stats.candidates_enumerated = pools.iter().map(|p| p.len() as u64).sum();

    let mut chosen: Vec<&Vec<i64>> = Vec::with_capacity(n);
    let found = brute_rec(&problem.gram, &pools, &mut chosen, &mut stats);
    stats.wall_time = start.elapsed();
    Ok(match found {
        Some(columns) => {
            let cert = EmbeddingCertificate { columns };
            assert!(verify_certificate(&problem.source, &cert));
            SearchOutcome::Embeds(cert, stats)
        }
        None => SearchOutcome::NoEmbedding(stats),
    })
}

fn brute_rec<'a>(
    gram: &[Vec<i64>],
    pools: &'a [Vec<Vec<i64>>],
    chosen: &mut Vec<&'a Vec<i64>>,
    stats: &mut SearchStats,
) -> Option<Vec<Vec<i64>>> {
    let level = chosen.len();
    if level == gram.len() {
        return Some(chosen.iter().map(|v| (*v).clone()).collect());
    }
    'next: for v in &pools[level] {
        stats.nodes_explored += 1;
        stats.steps += 1;
        for (j, w) in chosen.iter().enumerate() {
            let dot: i64 = v.iter().zip(w.iter()).map(|(a, b)| a * b).sum();
            if -dot != gram[j][level] {
                continue 'next;
            }
        }
        chosen.push(v);
        if let Some(hit) = brute_rec(gram, pools, chosen, stats) {
            return Some(hit);
        }
        chosen.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{form_from_weighted_graph, WeightedGraphForm};

    fn graph_form(weights: &[i64], edges: &[(usize, usize)]) -> IntSymForm {
        form_from_weighted_graph(&WeightedGraphForm::new(weights.to_vec(), edges.to_vec()).unwrap())
            .unwrap()
    }

    fn chain_form(weights: &[i64]) -> IntSymForm {
        let edges: Vec<(usize, usize)> = (0..weights.len() - 1).map(|i| (i, i + 1)).collect();
        graph_form(weights, &edges)
    }

    #[test]
    fn norm_vector_enumeration() {
        let canon = vectors_of_norm(3, 2, NormVectors::Canonical);
        assert_eq!(canon, vec![vec![1, 1, 0]]);

        let canon = vectors_of_norm(6, 3, NormVectors::Canonical);
        assert_eq!(canon, vec![vec![1, 1, 1, 0, 0, 0]]);

        let canon = vectors_of_norm(5, 4, NormVectors::Canonical);
        assert_eq!(canon, vec![vec![2, 0, 0, 0, 0], vec![1, 1, 1, 1, 0]]);

        // full orbit sizes: norm 1 in rank 2 -> 4 signed unit vectors
        assert_eq!(vectors_of_norm(2, 1, NormVectors::Full).len(), 4);
        // norm 2 in rank 2 -> (+-1, +-1)
        assert_eq!(vectors_of_norm(2, 2, NormVectors::Full).len(), 4);
    }

    #[test]
    fn trivial_embeddings() {
        let p = EmbeddingProblem::new(IntSymForm::diagonal(&[-1]), 1).unwrap();
        let out = find_embedding(&p, SearchBudget::default());
        let cert = out.certificate().expect("[-1] embeds in rank 1");
        assert_eq!(cert.columns, vec![vec![1]]);

        let p = EmbeddingProblem::new(IntSymForm::diagonal(&[-2]), 2).unwrap();
        assert_eq!(find_embedding(&p, SearchBudget::default()).exists(), Some(true));

        let p = EmbeddingProblem::new(IntSymForm::empty(), 0).unwrap();
        assert_eq!(find_embedding(&p, SearchBudget::default()).exists(), Some(true));
    }

    #[test]
    fn orthogonal_norm_two_pair_embeds_in_rank_two() {
        // diag(-2,-2) maps to f1+f2, f1-f2.
        let p = EmbeddingProblem::new(IntSymForm::diagonal(&[-2, -2]), 2).unwrap();
        let out = find_embedding(&p, SearchBudget::default());
        assert_eq!(out.exists(), Some(true));
        let brute = brute_force_embedding(&p).unwrap();
        assert_eq!(brute.exists(), Some(true));
    }

    #[test]
    fn a2_chain_needs_rank_three() {
        let a2 = chain_form(&[-2, -2]);
        let p = EmbeddingProblem::new(a2.clone(), 2).unwrap();
        assert_eq!(find_embedding(&p, SearchBudget::default()).exists(), Some(false));
        assert_eq!(brute_force_embedding(&p).unwrap().exists(), Some(false));

        let p = EmbeddingProblem::new(a2, 3).unwrap();
        let out = find_embedding(&p, SearchBudget::default());
        assert_eq!(out.exists(), Some(true));
    }

    #[test]
    fn a7_chain_embeds_in_rank_eight() {
        let a7 = chain_form(&[-2; 7]);
        let p = EmbeddingProblem::new(a7.clone(), 8).unwrap();
        let out = find_embedding(&p, SearchBudget::default());
        let cert = out.certificate().expect("A7 embeds as f_i - f_{i+1}");
        assert!(verify_certificate(&a7, cert));
    }

    #[test]
    fn four_cycle_of_minus_threes_does_not_embed_in_rank_six() {
        let g = graph_form(&[-3; 4], &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let p = EmbeddingProblem::new(g, 6).unwrap();
        let out = find_embedding(&p, SearchBudget::default());
        assert_eq!(out.exists(), Some(false));
        assert!(out.stats().nodes_explored > 0);
    }

    #[test]
    fn four_cycle_of_minus_threes_embeds_one_rank_higher() {
        // The rank-6 obstruction is sharp: one extra basis vector admits an
        // embedding, which the symmetry reductions must not lose.
        let g = graph_form(&[-3; 4], &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        for target in 7..=8 {
            let p = EmbeddingProblem::new(g.clone(), target).unwrap();
            let out = find_embedding(&p, SearchBudget::default());
            let cert = out.certificate().unwrap_or_else(|| panic!("embeds in rank {target}"));
            assert!(verify_certificate(&g, cert));
        }
    }

    #[test]
    fn summand_embeddings() {
        // [-1] + [-1] embeds in rank 2.
        let out = embedding_exists_with_summand(
            &IntSymForm::diagonal(&[-1]),
            1,
            2,
            SearchBudget::default(),
        )
        .unwrap();
        assert_eq!(out.exists(), Some(true));

        assert_eq!(
            embedding_exists_with_summand(&IntSymForm::diagonal(&[-1]), 0, 2, SearchBudget::default())
                .unwrap_err(),
            EmbedError::BadSummand(0)
        );
    }

    #[test]
    fn verify_rejects_wrong_certificates() {
        let a2 = chain_form(&[-2, -2]);
        let good = EmbeddingCertificate { columns: vec![vec![1, -1, 0], vec![0, 1, -1]] };
        assert!(verify_certificate(&a2, &good));
        let flipped = EmbeddingCertificate { columns: vec![vec![1, -1, 0], vec![0, -1, 1]] };
        assert!(!verify_certificate(&a2, &flipped));
        assert!(verify_certificate(&IntSymForm::empty(), &EmbeddingCertificate { columns: vec![] }));
        // dimension mismatch
        assert!(!verify_certificate(&a2, &EmbeddingCertificate { columns: vec![vec![1, -1, 0]] }));
    }

    #[test]
    fn budget_exhaustion_is_undecided() {
        let g = chain_form(&[-2; 7]);
        let p = EmbeddingProblem::new(g, 8).unwrap();
        let out = find_embedding(&p, SearchBudget { max_steps: 5 });
        assert!(matches!(out, SearchOutcome::Undecided(_)));
    }

    #[test]
    fn problem_validation() {
        assert_eq!(
            EmbeddingProblem::new(IntSymForm::diagonal(&[1]), 2).unwrap_err(),
            EmbedError::NotNegativeDefinite
        );
        assert_eq!(
            EmbeddingProblem::new(IntSymForm::diagonal(&[-1, -1]), 1).unwrap_err(),
            EmbedError::TargetRankTooSmall { source_rank: 2, target: 1 }
        );
    }

    #[test]
    fn oracle_limits_enforced() {
        let p = EmbeddingProblem::new(IntSymForm::diagonal(&[-7]), 4).unwrap();
        assert!(matches!(brute_force_embedding(&p), Err(EmbedError::OracleLimits { .. })));
        let p = EmbeddingProblem::new(IntSymForm::diagonal(&[-1; 5]), 6).unwrap();
        assert!(matches!(brute_force_embedding(&p), Err(EmbedError::OracleLimits { .. })));
    }

    #[test]
    fn embeddability_invariant_under_signed_permutation_conjugation() {
        // Conjugating the source by a signed permutation of its basis must
        // not change the verdict.
        let base = graph_form(&[-3, -2, -3], &[(0, 1), (1, 2)]);
        let verdict = |g: &IntSymForm, target: usize| {
            find_embedding(&EmbeddingProblem::new(g.clone(), target).unwrap(), SearchBudget::default())
                .exists()
        };
        let perms: [[usize; 3]; 3] = [[1, 0, 2], [2, 1, 0], [1, 2, 0]];
        let signs: [[i64; 3]; 2] = [[1, -1, 1], [-1, -1, 1]];
        for target in 3..=5 {
            let expected = verdict(&base, target);
            for perm in &perms {
                for sign in &signs {
                    let n = 3;
                    let mut rows = vec![vec![0i64; n]; n];
                    for a in 0..n {
                        for b in 0..n {
                            let v = base.entry(perm[a], perm[b]).clone();
                            let v: i64 = i64::try_from(&v).unwrap();
                            rows[a][b] = sign[a] * sign[b] * v;
                        }
                    }
                    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
                    let conj = IntSymForm::from_rows(&refs).unwrap();
                    assert_eq!(verdict(&conj, target), expected);
                }
            }
        }
    }
}
