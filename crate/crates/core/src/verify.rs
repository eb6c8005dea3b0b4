//! Ground-truth covering check by exhaustive enumeration over all t-row
//! subsets and all alpha^t target vectors.
//!
//! The fast path hashes each column's t-tuple into a presence bitset per
//! row set, O(C(m,t) * n). The naive per-(row-set, vector) column scan is
//! kept as a differential oracle.

use itertools::Itertools;

use crate::exact::binomial;
use crate::model::ArrayMatrix;
use crate::Error;
use num_traits::ToPrimitive;

/// Outcome of a full deficiency enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficiencyReport {
    /// (sorted row indices, missing vector) in lexicographic order.
    pub missing: Vec<(Vec<usize>, Vec<u8>)>,
    pub total_checked: u64,
    pub is_covering: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverageStats {
    pub covered: u64,
    pub total: u64,
    /// Minimum, over all (row set, vector) pairs, of the number of
    /// witnessing columns. >= 1 iff covering.
    pub min_witness_count: u64,
}

fn check_t(matrix: &ArrayMatrix, t: usize) -> Result<(), Error> {
    if t < 1 || t > matrix.m {
        return Err(Error::InvalidInput(format!(
            "strength t={t} outside 1..={}",
            matrix.m
        )));
    }
    let vectors = (matrix.alpha as u64).checked_pow(t as u32);
    if vectors.is_none() || vectors.unwrap() > (1 << 32) {
        return Err(Error::WorkBoundExceeded(format!(
            "alpha^t too large for exhaustive verification (alpha={} t={t})",
            matrix.alpha
        )));
    }
    Ok(())
}

/// Index of the t-tuple read down `rows` at column `col`, treating the
/// tuple as a base-alpha number with the first row most significant. This
/// ordering makes vector enumeration lexicographic.
#[inline]
fn tuple_index(matrix: &ArrayMatrix, rows: &[usize], col: usize) -> usize {
    let mut idx = 0usize;
    for &r in rows {
        idx = idx * matrix.alpha as usize + (matrix.get(r, col) - 1) as usize;
    }
    idx
}

fn index_to_vector(mut idx: usize, alpha: u32, t: usize) -> Vec<u8> {
    let mut v = vec![0u8; t];
    for slot in v.iter_mut().rev() {
        *slot = (idx % alpha as usize) as u8 + 1;
        idx /= alpha as usize;
    }
    v
}

/// True iff every t-row subset realizes every vector in some column.
pub fn is_covering(matrix: &ArrayMatrix, t: usize) -> Result<bool, Error> {
    check_t(matrix, t)?;
    let vectors = (matrix.alpha as usize).pow(t as u32);
    let mut present = vec![false; vectors];
    for rows in (0..matrix.m).combinations(t) {
        present.fill(false);
        let mut remaining = vectors;
        for col in 0..matrix.n {
            let idx = tuple_index(matrix, &rows, col);
            if !present[idx] {
                present[idx] = true;
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
        }
        if remaining > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All uncovered (row set, vector) pairs, lexicographically ordered.
pub fn missing_tuples(matrix: &ArrayMatrix, t: usize) -> Result<DeficiencyReport, Error> {
    check_t(matrix, t)?;
    let vectors = (matrix.alpha as usize).pow(t as u32);
    let mut missing = Vec::new();
    let mut present = vec![false; vectors];
    let mut total_checked = 0u64;
    for rows in (0..matrix.m).combinations(t) {
        present.fill(false);
        for col in 0..matrix.n {
            present[tuple_index(matrix, &rows, col)] = true;
        }
        total_checked += vectors as u64;
        for (idx, &hit) in present.iter().enumerate() {
            if !hit {
                missing.push((rows.clone(), index_to_vector(idx, matrix.alpha, t)));
            }
        }
    }
    Ok(DeficiencyReport {
        is_covering: missing.is_empty(),
        missing,
        total_checked,
    })
}

/// First uncovered (row set, vector) in lexicographic order, if any.
/// Cheaper than a full `missing_tuples` when only the resampling target is
/// needed; also returns the total deficiency count for progress tracking.
pub fn first_missing_and_count(
    matrix: &ArrayMatrix,
    t: usize,
) -> Result<(Option<(Vec<usize>, Vec<u8>)>, u64), Error> {
    check_t(matrix, t)?;
    let vectors = (matrix.alpha as usize).pow(t as u32);
    let mut present = vec![false; vectors];
    let mut first = None;
    let mut count = 0u64;
    for rows in (0..matrix.m).combinations(t) {
        present.fill(false);
        for col in 0..matrix.n {
            present[tuple_index(matrix, &rows, col)] = true;
        }
        for (idx, &hit) in present.iter().enumerate() {
            if !hit {
                count += 1;
                if first.is_none() {
                    first = Some((rows.clone(), index_to_vector(idx, matrix.alpha, t)));
                }
            }
        }
    }
    Ok((first, count))
}

/// Coverage diagnostics: covered pair count, total, and the minimum
/// witness multiplicity across all pairs.
pub fn coverage_stats(matrix: &ArrayMatrix, t: usize) -> Result<CoverageStats, Error> {
    check_t(matrix, t)?;
    let vectors = (matrix.alpha as usize).pow(t as u32);
    let total = binomial(matrix.m as u64, t as i64)
        .to_u64()
        .ok_or_else(|| Error::WorkBoundExceeded("C(m,t) overflows u64".into()))?
        * vectors as u64;
    let mut covered = 0u64;
    let mut min_witness = u64::MAX;
    let mut counts = vec![0u64; vectors];
    for rows in (0..matrix.m).combinations(t) {
        counts.fill(0);
        for col in 0..matrix.n {
            counts[tuple_index(matrix, &rows, col)] += 1;
        }
        for &c in &counts {
            if c > 0 {
                covered += 1;
            }
            min_witness = min_witness.min(c);
        }
    }
    if total == 0 {
        min_witness = 0;
    }
    Ok(CoverageStats {
        covered,
        total,
        min_witness_count: min_witness,
    })
}

/// Differential oracle: direct O(C(m,t) * alpha^t * n) scan.
pub fn is_covering_naive(matrix: &ArrayMatrix, t: usize) -> Result<bool, Error> {
    check_t(matrix, t)?;
    let vectors = (matrix.alpha as usize).pow(t as u32);
    for rows in (0..matrix.m).combinations(t) {
        for idx in 0..vectors {
            let target = index_to_vector(idx, matrix.alpha, t);
            let witnessed = (0..matrix.n).any(|col| {
                rows.iter()
                    .zip(&target)
                    .all(|(&r, &v)| matrix.get(r, col) == v)
            });
            if !witnessed {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
