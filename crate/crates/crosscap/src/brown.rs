//! Z/4-valued quadratic refinements of Z/2 inner product spaces and their
//! Brown invariant.
//!
//! A nonsingular symmetric pairing on a Z/2 vector space is a direct sum of
//! copies of `P` (one generator `x` with `x.x = 1`) or of the hyperbolic
//! plane `T` (generators `y, z` with `y.y = z.z = 0`, `y.z = 1`), subject to
//! the single relation `P + T = 3P`. A quadratic refinement assigns each
//! vector a value in Z/4 with `q(a + b) = q(a) + q(b) + 2 a.b`, and its
//! Brown invariant `beta` in Z/8 is read off the Gauss sum
//! `sum_x i^q(x) = 2^(dim/2) * zeta_8^beta`.
//!
//! `beta` is computed here from the Gauss sum directly, while `normal_form`
//! decomposes the space into standard summands and reduces them with the
//! relations `2 q_{0,0} = 2 q_{2,2}` and `4 q_{-1} = 4 q_1`; the two routes
//! are independent and are cross-checked in the tests.
//!
//! Vectors are bitmasks over the basis, so everything here caps out at
//! dimension [`MAX_DIM`]; the knot pipeline needs dimension 3 at most.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Hard cap on dimensions; `brown_invariant` walks all `2^dim` vectors.
pub const MAX_DIM: usize = 20;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BrownError {
    #[error("pairing matrix is not square or not symmetric")]
    BadPairing,
    #[error("dimension {0} exceeds the supported maximum {MAX_DIM}")]
    DimTooLarge(usize),
    #[error("pairing is singular")]
    SingularPairing,
    #[error("basis value count {values} does not match dimension {dim}")]
    ValueCountMismatch { values: usize, dim: usize },
    #[error("malformed quadratic form: q(e_{0}) = {1} has the wrong parity")]
    ParityViolation(usize, u8),
    #[error("malformed quadratic form: Gauss sum has the wrong magnitude")]
    MalformedForm,
}

/// A Z/2 vector space with a symmetric bilinear pairing, vectors as bitmasks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Z2InnerSpace {
    dim: usize,
    /// Row `i` is the mask of basis vectors pairing to 1 with `e_i`.
    rows: Vec<u32>,
}

impl Z2InnerSpace {
    /// Build from a 0/1 matrix; entries are reduced mod 2.
    pub fn new(pairing: &[Vec<u8>]) -> Result<Self, BrownError> {
        let dim = pairing.len();
        if dim > MAX_DIM {
            return Err(BrownError::DimTooLarge(dim));
        }
        if pairing.iter().any(|r| r.len() != dim) {
            return Err(BrownError::BadPairing);
        }
        for i in 0..dim {
            for j in 0..dim {
                if (pairing[i][j] ^ pairing[j][i]) & 1 != 0 {
                    return Err(BrownError::BadPairing);
                }
            }
        }
        let rows = pairing
            .iter()
            .map(|r| r.iter().enumerate().fold(0u32, |m, (j, &v)| m | (((v & 1) as u32) << j)))
            .collect();
        Ok(Z2InnerSpace { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Pairing of two vectors given as basis bitmasks.
    pub fn pair(&self, x: u32, y: u32) -> u8 {
        let mut acc = 0u32;
        let mut bits = x;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            acc ^= (self.rows[i] & y).count_ones();
        }
        (acc & 1) as u8
    }

    pub fn is_nonsingular(&self) -> bool {
        // Gaussian elimination over GF(2).
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.dim {
            let Some(pivot) = (rank..self.dim).find(|&r| rows[r] >> col & 1 == 1) else {
                continue;
            };
            rows.swap(rank, pivot);
            for r in 0..self.dim {
                if r != rank && rows[r] >> col & 1 == 1 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
        rank == self.dim
    }

    fn require_nonsingular(&self) -> Result<(), BrownError> {
        if self.is_nonsingular() {
            Ok(())
        } else {
            Err(BrownError::SingularPairing)
        }
    }
}

/// `x.x = 0` for every vector. Over Z/2 the squaring map is linear, so this
/// holds exactly when every diagonal entry vanishes.
pub fn is_even(s: &Z2InnerSpace) -> Result<bool, BrownError> {
    s.require_nonsingular()?;
    Ok((0..s.dim).all(|i| s.rows[i] >> i & 1 == 0))
}

/// Isomorphism type of a nonsingular pairing: `m` copies of `P` or `n`
/// copies of the hyperbolic plane `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Odd { p_copies: usize },
    Even { t_copies: usize },
}

/// A standard basis realizing the decomposition, as masks over the original
/// basis. Odd: `p_copies` vectors of square 1, mutually orthogonal. Even:
/// `t_copies` consecutive hyperbolic pairs.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub kind: SpaceKind,
    pub basis: Vec<u32>,
}

/// Split a nonsingular pairing into the standard form, returning an explicit
/// change-of-basis witness. Any summands of `P` absorb hyperbolic planes via
/// `P + T = 3P`, so the result is pure.
pub fn decompose(s: &Z2InnerSpace) -> Result<Decomposition, BrownError> {
    s.require_nonsingular()?;
    let mut working: Vec<u32> = (0..s.dim).map(|i| 1u32 << i).collect();
    let mut p_vectors: Vec<u32> = Vec::new();
    let mut t_pairs: Vec<(u32, u32)> = Vec::new();

    while !working.is_empty() {
        if let Some(pos) = working.iter().position(|&v| s.pair(v, v) == 1) {
            let v = working.remove(pos);
            for w in working.iter_mut() {
                if s.pair(*w, v) == 1 {
                    *w ^= v;
                }
            }
            p_vectors.push(v);
        } else {
            let v = working.remove(0);
            let pos = working
                .iter()
                .position(|&w| s.pair(v, w) == 1)
                .expect("nonsingular pairing must pair v with something");
            let w = working.remove(pos);
            for u in working.iter_mut() {
                let a = s.pair(*u, w);
                let b = s.pair(*u, v);
                if a == 1 {
                    *u ^= v;
                }
                if b == 1 {
                    *u ^= w;
                }
            }
            t_pairs.push((v, w));
        }
    }

    // P + T = 3P: an odd space must come out as copies of P only.
    if !p_vectors.is_empty() {
        while let Some((y, z)) = t_pairs.pop() {
            let x = p_vectors.pop().expect("carrier vector");
            p_vectors.push(x ^ y);
            p_vectors.push(x ^ z);
            p_vectors.push(x ^ y ^ z);
        }
    }

    let decomposition = if p_vectors.is_empty() {
        let basis = t_pairs.iter().flat_map(|&(y, z)| [y, z]).collect();
        Decomposition { kind: SpaceKind::Even { t_copies: t_pairs.len() }, basis }
    } else {
        Decomposition { kind: SpaceKind::Odd { p_copies: p_vectors.len() }, basis: p_vectors }
    };
    debug_assert!(witness_is_standard(s, &decomposition));
    Ok(decomposition)
}

fn witness_is_standard(s: &Z2InnerSpace, d: &Decomposition) -> bool {
    let basis = &d.basis;
    if basis.len() != s.dim {
        return false;
    }
    let expected = |i: usize, j: usize| -> u8 {
        match d.kind {
            SpaceKind::Odd { .. } => u8::from(i == j),
            SpaceKind::Even { .. } => u8::from(i / 2 == j / 2 && i != j),
        }
    };
    (0..basis.len()).all(|i| (0..basis.len()).all(|j| s.pair(basis[i], basis[j]) == expected(i, j)))
}

/// A quadratic refinement, stored by its values on the basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Z4QuadraticForm {
    space: Z2InnerSpace,
    basis_values: Vec<u8>,
}

impl Z4QuadraticForm {
    /// The refinement extends to all of `V` once `q(e_i) = e_i.e_i mod 2`
    /// holds for every basis vector; that parity condition is checked here
    /// and any violation reported. Construction also requires the pairing
    /// to be nonsingular.
    pub fn new(space: Z2InnerSpace, basis_values: Vec<u8>) -> Result<Self, BrownError> {
        space.require_nonsingular()?;
        if basis_values.len() != space.dim {
            return Err(BrownError::ValueCountMismatch {
                values: basis_values.len(),
                dim: space.dim,
            });
        }
        let basis_values: Vec<u8> = basis_values.iter().map(|v| v & 3).collect();
        for (i, &v) in basis_values.iter().enumerate() {
            if v & 1 != space.pair(1 << i, 1 << i) {
                return Err(BrownError::ParityViolation(i, v));
            }
        }
        Ok(Z4QuadraticForm { space, basis_values })
    }

    /// Skip the parity validation; exists so the malformed-input error path
    /// of [`brown_invariant`] stays reachable.
    pub fn new_unchecked(space: Z2InnerSpace, basis_values: Vec<u8>) -> Self {
        let basis_values = basis_values.iter().map(|v| v & 3).collect();
        Z4QuadraticForm { space, basis_values }
    }

    pub fn space(&self) -> &Z2InnerSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn basis_values(&self) -> &[u8] {
        &self.basis_values
    }

    /// Evaluate on a vector given as a basis bitmask.
    pub fn eval(&self, x: u32) -> u8 {
        let mut total = 0u32;
        let mut bits = x;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            total += self.basis_values[i] as u32;
            // cross terms 2 e_i . e_j for j in x, j > i
            let rest = bits;
            total += 2 * (self.space.rows[i] & rest).count_ones();
        }
        (total & 3) as u8
    }

    /// Direct sum; pairings and values are placed block-diagonally.
    pub fn direct_sum(&self, other: &Z4QuadraticForm) -> Result<Z4QuadraticForm, BrownError> {
        let d1 = self.dim();
        let d = d1 + other.dim();
        if d > MAX_DIM {
            return Err(BrownError::DimTooLarge(d));
        }
        let mut rows = Vec::with_capacity(d);
        rows.extend(self.space.rows.iter().copied());
        rows.extend(other.space.rows.iter().map(|&r| r << d1));
        let space = Z2InnerSpace { dim: d, rows };
        let mut values = self.basis_values.clone();
        values.extend_from_slice(&other.basis_values);
        Ok(Z4QuadraticForm { space, basis_values: values })
    }
}

/// Standard quadratic forms on `P` and `T`.
pub mod standard {
    use super::{Z2InnerSpace, Z4QuadraticForm};

    /// `q_{e}` on `P` for `e` in `{1, -1}` (value 1 or 3 on the generator).
    pub fn p_form(value: u8) -> Z4QuadraticForm {
        let space = Z2InnerSpace::new(&[vec![1]]).unwrap();
        Z4QuadraticForm::new(space, vec![value & 3]).unwrap()
    }

    /// `q_{i,j}` on the hyperbolic plane `T`; `i`, `j` must be even.
    pub fn t_form(i: u8, j: u8) -> Z4QuadraticForm {
        let space = Z2InnerSpace::new(&[vec![0, 1], vec![1, 0]]).unwrap();
        Z4QuadraticForm::new(space, vec![i & 3, j & 3]).unwrap()
    }

    /// n-fold direct sum.
    pub fn sum(parts: &[Z4QuadraticForm]) -> Z4QuadraticForm {
        let mut it = parts.iter();
        let first = it.next().expect("at least one summand").clone();
        it.fold(first, |acc, q| acc.direct_sum(q).unwrap())
    }
}

/// Norm on Z/8: the smallest absolute value in the residue class.
pub fn z8_norm(x: u8) -> u8 {
    let r = x & 7;
    r.min(8 - r)
}

/// Brown invariant in Z/8, from the Gauss sum.
///
/// Summing `i^q(x)` over all vectors yields `2^(dim/2) * zeta_8^beta`; only
/// the four counts of each Z/4 value are needed. A value table that is not
/// actually quadratic makes the magnitude come out wrong, which is reported
/// as [`BrownError::MalformedForm`].
///
/// ```
/// use crosscap::brown::{brown_invariant, standard};
///
/// assert_eq!(brown_invariant(&standard::p_form(1))?, 1);
/// assert_eq!(brown_invariant(&standard::t_form(2, 2))?, 4);
/// # Ok::<(), crosscap::brown::BrownError>(())
/// ```
pub fn brown_invariant(q: &Z4QuadraticForm) -> Result<u8, BrownError> {
    let dim = q.dim();
    let mut counts = [0i64; 4];
    for x in 0..(1u64 << dim) {
        counts[q.eval(x as u32) as usize] += 1;
    }
    let re = counts[0] - counts[2];
    let im = counts[1] - counts[3];
    if re * re + im * im != 1i64 << dim {
        return Err(BrownError::MalformedForm);
    }
    let beta = if dim.is_multiple_of(2) {
        let half = 1i64 << (dim / 2);
        match (re, im) {
            (r, 0) if r == half => 0,
            (0, i) if i == half => 2,
            (r, 0) if r == -half => 4,
            (0, i) if i == -half => 6,
            _ => return Err(BrownError::MalformedForm),
        }
    } else {
        let half = 1i64 << (dim / 2);
        match (re > 0, im > 0) {
            _ if re.abs() != half || im.abs() != half => return Err(BrownError::MalformedForm),
            (true, true) => 1,
            (false, true) => 3,
            (false, false) => 5,
            (true, false) => 7,
        }
    };
    Ok(beta)
}

/// Canonical decomposition of a quadratic refinement.
///
/// Odd spaces reduce to copies of `q_1` and at most three of `q_{-1}`; even
/// spaces to copies of `q_{0,0}` and at most one `q_{2,2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "parity", rename_all = "snake_case")]
pub enum NormalForm {
    Odd { q1: usize, q_minus1: usize },
    Even { q00: usize, q22: usize },
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NormalForm::Odd { q1, q_minus1 } => write!(f, "{q1}·q(1) + {q_minus1}·q(-1)"),
            NormalForm::Even { q00, q22 } => write!(f, "{q00}·q(0,0) + {q22}·q(2,2)"),
        }
    }
}

impl NormalForm {
    pub fn dim(&self) -> usize {
        match *self {
            NormalForm::Odd { q1, q_minus1 } => q1 + q_minus1,
            NormalForm::Even { q00, q22 } => 2 * (q00 + q22),
        }
    }

    pub fn brown_invariant(&self) -> u8 {
        match *self {
            NormalForm::Odd { q1, q_minus1 } => ((q1 as i64 - q_minus1 as i64).rem_euclid(8)) as u8,
            NormalForm::Even { q22, .. } => ((4 * q22) % 8) as u8,
        }
    }
}

/// Decompose the space, read off the standard summands of `q` in the new
/// basis, and reduce them with the two relations. This route never looks at
/// the Gauss sum.
pub fn normal_form(q: &Z4QuadraticForm) -> Result<NormalForm, BrownError> {
    let d = decompose(q.space())?;
    match d.kind {
        SpaceKind::Odd { p_copies } => {
            let mut q1 = 0usize;
            let mut qm1 = 0usize;
            for &v in &d.basis {
                match q.eval(v) {
                    1 => q1 += 1,
                    3 => qm1 += 1,
                    other => {
                        // square-1 vectors must take odd values
                        debug_assert!(other % 2 == 1);
                        return Err(BrownError::MalformedForm);
                    }
                }
            }
            debug_assert_eq!(q1 + qm1, p_copies);
            while qm1 >= 4 {
                qm1 -= 4;
                q1 += 4;
            }
            Ok(NormalForm::Odd { q1, q_minus1: qm1 })
        }
        SpaceKind::Even { t_copies } => {
            let mut q00 = 0usize;
            let mut q22 = 0usize;
            for pair in d.basis.chunks_exact(2) {
                let (a, b) = (q.eval(pair[0]), q.eval(pair[1]));
                if a % 2 != 0 || b % 2 != 0 {
                    return Err(BrownError::MalformedForm);
                }
                // q_{0,0}, q_{0,2}, q_{2,0} are one class; q_{2,2} the other.
                if a == 2 && b == 2 {
                    q22 += 1;
                } else {
                    q00 += 1;
                }
            }
            debug_assert_eq!(q00 + q22, t_copies);
            while q22 >= 2 {
                q22 -= 2;
                q00 += 2;
            }
            Ok(NormalForm::Even { q00, q22 })
        }
    }
}
