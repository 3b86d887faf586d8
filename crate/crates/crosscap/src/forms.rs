//! Integral symmetric bilinear forms and the Goeritz construction.
//!
//! A knot projection with a checkerboard coloring determines a symmetric
//! integer matrix: sum the signed crossings between each pair of white
//! regions, fix the diagonal so that every row of the resulting
//! "pre-Goeritz" matrix sums to zero, and delete the row and column of the
//! region `X_0`. The absolute value of its determinant equals the knot
//! determinant, which gives a cheap integrity check on transcribed data.
//!
//! All arithmetic in this module is exact integer arithmetic; definiteness
//! is decided by Sylvester's criterion on leading principal minors, never
//! by floating point.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormError {
    #[error("matrix is not square: row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("matrix is not symmetric at ({i},{j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("degenerate diagram: no white regions")]
    DegenerateDiagram,
    #[error("crossing {index} touches region {region}, but only {count} white regions exist")]
    RegionOutOfRange { index: usize, region: usize, count: usize },
    #[error("crossing {index} has weight {eta}, expected +1 or -1")]
    BadCrossingWeight { index: usize, eta: i64 },
    #[error("edge {index} joins vertex {vertex}, but only {count} vertices exist")]
    VertexOutOfRange { index: usize, vertex: usize, count: usize },
    #[error("edge {index} is a loop at vertex {vertex}")]
    LoopEdge { index: usize, vertex: usize },
    #[error("entry ({i},{j}) does not fit in 64 bits")]
    EntryTooLarge { i: usize, j: usize },
}

/// Exact definiteness class of a symmetric integer matrix.
///
/// `Other` covers indefinite, semidefinite and singular forms alike; the
/// obstruction machinery only ever distinguishes the two definite cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Definiteness {
    #[serde(rename = "positive")]
    PositiveDefinite,
    #[serde(rename = "negative")]
    NegativeDefinite,
    #[serde(rename = "other")]
    Other,
}

impl fmt::Display for Definiteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Definiteness::PositiveDefinite => write!(f, "positive definite"),
            Definiteness::NegativeDefinite => write!(f, "negative definite"),
            Definiteness::Other => write!(f, "other"),
        }
    }
}

/// A symmetric bilinear form on `Z^n`, stored as an exact integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSymForm {
    entries: Vec<Vec<BigInt>>,
}

impl IntSymForm {
    /// Build a form from a square, symmetric matrix.
    pub fn new(entries: Vec<Vec<BigInt>>) -> Result<Self, FormError> {
        let n = entries.len();
        for (row, r) in entries.iter().enumerate() {
            if r.len() != n {
                return Err(FormError::NotSquare { row, len: r.len(), expected: n });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if entries[i][j] != entries[j][i] {
                    return Err(FormError::NotSymmetric { i, j });
                }
            }
        }
        Ok(IntSymForm { entries })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self, FormError> {
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntSymForm::new(entries)
    }

    /// The rank-0 form.
    pub fn empty() -> Self {
        IntSymForm { entries: Vec::new() }
    }

    /// Diagonal form with the given entries.
    pub fn diagonal(diag: &[i64]) -> Self {
        let n = diag.len();
        let mut entries = vec![vec![BigInt::zero(); n]; n];
        for (i, &d) in diag.iter().enumerate() {
            entries[i][i] = BigInt::from(d);
        }
        IntSymForm { entries }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// Entrywise negation. Mirroring a knot diagram negates its Goeritz form.
    pub fn negated(&self) -> IntSymForm {
        IntSymForm {
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    /// Block sum with the given extra diagonal entries.
    pub fn direct_sum(&self, diag: &[i64]) -> IntSymForm {
        let n = self.rank();
        let m = n + diag.len();
        let mut entries = vec![vec![BigInt::zero(); m]; m];
        for i in 0..n {
            for j in 0..n {
                entries[i][j] = self.entries[i][j].clone();
            }
        }
        for (k, &d) in diag.iter().enumerate() {
            entries[n + k][n + k] = BigInt::from(d);
        }
        IntSymForm { entries }
    }

    /// The sub-form spanned by the given basis indices, in the given order.
    ///
    /// Panics if an index is out of range or repeated.
    pub fn principal_submatrix(&self, indices: &[usize]) -> IntSymForm {
        let mut seen = vec![false; self.rank()];
        for &i in indices {
            assert!(i < self.rank(), "index {i} out of range");
            assert!(!seen[i], "index {i} repeated");
            seen[i] = true;
        }
        let entries = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect();
        IntSymForm { entries }
    }

    /// Exact determinant via fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        determinant_of(&self.entries)
    }

    /// Sylvester's criterion on exact leading principal minors.
    pub fn definiteness(&self) -> Definiteness {
        let n = self.rank();
        if n == 0 {
            // The empty form is vacuously both; report Other so callers
            // never treat it as a usable definite form.
            return Definiteness::Other;
        }
        let mut positive = true;
        let mut negative = true;
        for k in 1..=n {
            let sub: Vec<Vec<BigInt>> = (0..k)
                .map(|i| (0..k).map(|j| self.entries[i][j].clone()).collect())
                .collect();
            let minor = determinant_of(&sub);
            if minor.is_zero() {
                return Definiteness::Other;
            }
            // Positive definite needs every leading minor positive; negative
            // definite needs the k-th minor to have sign (-1)^k.
            if minor.is_negative() {
                positive = false;
                if k % 2 == 0 {
                    negative = false;
                }
            } else if k % 2 == 1 {
                negative = false;
            }
            if !positive && !negative {
                return Definiteness::Other;
            }
        }
        if positive {
            Definiteness::PositiveDefinite
        } else if negative {
            Definiteness::NegativeDefinite
        } else {
            Definiteness::Other
        }
    }

    /// Convert to an `i64` matrix for the search engine.
    pub fn to_i64(&self) -> Result<Vec<Vec<i64>>, FormError> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| i64::try_from(x).map_err(|_| FormError::EntryTooLarge { i, j }))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for IntSymForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

fn determinant_of(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = 1i32;
    let mut denom = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(pivot) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, pivot);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &denom; // exact by Bareiss
            }
        }
        denom = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// White-region incidence data of a checkerboard-colored knot projection.
///
/// Regions are indexed `0..white_regions` with region 0 the one deleted in
/// the Goeritz construction; each crossing records the two incident white
/// regions and its weight `eta` in `{-1, +1}`. Repeated pairs are multiple
/// crossings between the same two regions.
///
/// Serialized as `{"white_regions": n, "crossings": [[i, j, eta], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckerboardIncidence {
    pub white_regions: usize,
    pub crossings: Vec<(usize, usize, i64)>,
}

impl CheckerboardIncidence {
    pub fn new(white_regions: usize, crossings: Vec<(usize, usize, i64)>) -> Result<Self, FormError> {
        let data = CheckerboardIncidence { white_regions, crossings };
        data.validate()?;
        Ok(data)
    }

    pub fn validate(&self) -> Result<(), FormError> {
        if self.white_regions == 0 {
            return Err(FormError::DegenerateDiagram);
        }
        for (index, &(i, j, eta)) in self.crossings.iter().enumerate() {
            for region in [i, j] {
                if region >= self.white_regions {
                    return Err(FormError::RegionOutOfRange {
                        index,
                        region,
                        count: self.white_regions,
                    });
                }
            }
            if eta != 1 && eta != -1 {
                return Err(FormError::BadCrossingWeight { index, eta });
            }
        }
        Ok(())
    }
}

/// Goeritz matrix of a checkerboard coloring.
///
/// Off-diagonal entries of the pre-Goeritz matrix are `-sum(eta)` over the
/// crossings joining the two regions; diagonal entries make every row sum
/// to zero; the row and column of region 0 are then deleted. A single white
/// region (an unknot-style coloring) yields the empty form.
///
/// ```
/// use crosscap::forms::{goeritz_from_incidence, CheckerboardIncidence};
///
/// // Two white regions joined by three crossings of weight -1: the
/// // absolute determinant recovers the knot determinant 3.
/// let data = CheckerboardIncidence::new(2, vec![(0, 1, -1); 3])?;
/// let g = goeritz_from_incidence(&data)?;
/// assert_eq!(g.determinant().to_string(), "-3");
/// # Ok::<(), crosscap::forms::FormError>(())
/// ```
pub fn goeritz_from_incidence(data: &CheckerboardIncidence) -> Result<IntSymForm, FormError> {
    data.validate()?;
    let n1 = data.white_regions;
    let mut pre = vec![vec![BigInt::zero(); n1]; n1];
    for &(i, j, eta) in &data.crossings {
        if i == j {
            continue; // a crossing meeting one white region twice contributes nothing
        }
        pre[i][j] -= eta;
        pre[j][i] -= eta;
    }
    for i in 0..n1 {
        let off: BigInt = (0..n1).filter(|&k| k != i).map(|k| pre[i][k].clone()).sum();
        pre[i][i] = -off;
    }
    debug_assert!(pre
        .iter()
        .all(|row| row.iter().sum::<BigInt>().is_zero()));
    let entries = (1..n1)
        .map(|i| (1..n1).map(|j| pre[i][j].clone()).collect())
        .collect();
    IntSymForm::new(entries)
}

/// A form presented as a vertex-weighted multigraph: diagonal entries are
/// the vertex weights, the off-diagonal entry at `(i,j)` is the number of
/// edges between vertices `i` and `j`.
///
/// Serialized as `{"weights": [...], "edges": [[i, j], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedGraphForm {
    pub weights: Vec<i64>,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
}

impl WeightedGraphForm {
    pub fn new(weights: Vec<i64>, edges: Vec<(usize, usize)>) -> Result<Self, FormError> {
        let g = WeightedGraphForm { weights, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), FormError> {
        let count = self.weights.len();
        for (index, &(i, j)) in self.edges.iter().enumerate() {
            for vertex in [i, j] {
                if vertex >= count {
                    return Err(FormError::VertexOutOfRange { index, vertex, count });
                }
            }
            if i == j {
                return Err(FormError::LoopEdge { index, vertex: i });
            }
        }
        Ok(())
    }
}

pub fn form_from_weighted_graph(g: &WeightedGraphForm) -> Result<IntSymForm, FormError> {
    g.validate()?;
    let n = g.weights.len();
    let mut entries = vec![vec![BigInt::zero(); n]; n];
    for (i, &w) in g.weights.iter().enumerate() {
        entries[i][i] = BigInt::from(w);
    }
    for &(i, j) in &g.edges {
        entries[i][j] += 1;
        entries[j][i] += 1;
    }
    IntSymForm::new(entries)
}
