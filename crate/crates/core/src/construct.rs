//! Constructive counterpart of the LLL existence argument: sample a tiled
//! matrix, then repeatedly resample every tile of the rows of the
//! lexicographically first uncovered (row set, vector) event until the
//! matrix is covering.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

use crate::bounds::{sufficient_n, CoveringParams, DegreeMode};
use crate::exact::binomial;
use crate::model::{fill_tile, sample_array, ArrayMatrix};
use crate::verify::first_missing_and_count;
use crate::Error;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, Serialize)]
pub struct ConstructionLog {
    pub resample_count: u64,
    /// (row set, missing vector) targeted at each resampling step, when
    /// tracing is enabled.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<(Vec<usize>, Vec<u8>)>>,
    pub wall_time_ms: u64,
    pub final_n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructFailure {
    pub resample_count: u64,
    /// Smallest deficiency count seen across all iterations.
    pub best_deficiency: u64,
    pub seed: u64,
}

impl std::fmt::Display for ConstructFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "no covering array after {} resamples (best deficiency {})",
            self.resample_count, self.best_deficiency
        )
    }
}

/// Default resampling cap: 100 * C(m, t).
pub fn default_max_resamples(m: u32, t: u32) -> u64 {
    100 * binomial(m as u64, t as i64).to_u64().unwrap_or(u64::MAX / 100)
}

/// Build a covering array at total width `n` (core + alpha augmentation
/// columns; computed from the LLL sufficient bound when omitted).
/// Deterministic given (params, k, n, seed).
pub fn construct(
    params: CoveringParams,
    k: u32,
    n: Option<u64>,
    seed: u64,
    max_resamples: Option<u64>,
    trace: bool,
) -> Result<(ArrayMatrix, ConstructionLog), Error> {
    let start = Instant::now();
    let n_total = match n {
        Some(n) => n,
        None => sufficient_n(params, k, DegreeMode::Exact)?.sufficient_n,
    };
    if n_total < params.alpha as u64 {
        return Err(Error::InvalidInput(format!(
            "n={n_total} leaves no room for the {} augmentation columns",
            params.alpha
        )));
    }
    let n_core = n_total - params.alpha as u64;
    let tile_width = (k * params.alpha) as usize;
    if tile_width == 0 || n_core % tile_width as u64 != 0 {
        return Err(Error::Divisibility {
            n: n_core,
            tile_width: tile_width as u64,
        });
    }
    let max_resamples = max_resamples.unwrap_or_else(|| default_max_resamples(params.m, params.t));

    let mut matrix = sample_array(params, n_core as usize, k, true, seed)?;
    // dedicated sequential stream for resampling, distinct from the
    // per-(row, tile) streams used for the initial fill
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);

    let mut resample_count = 0u64;
    let mut best_deficiency = u64::MAX;
    let mut steps = trace.then(Vec::new);
    let core = n_core as usize;
    loop {
        let (first, deficiency) = first_missing_and_count(&matrix, params.t as usize)?;
        best_deficiency = best_deficiency.min(deficiency);
        let Some((rows, vector)) = first else {
            let log = ConstructionLog {
                resample_count,
                trace: steps,
                wall_time_ms: start.elapsed().as_millis() as u64,
                final_n: matrix.n,
                seed,
            };
            debug_assert!(crate::verify::is_covering(&matrix, params.t as usize)?);
            return Ok((matrix, log));
        };
        if resample_count >= max_resamples {
            return Err(Error::Construction(ConstructFailure {
                resample_count,
                best_deficiency,
                seed,
            }));
        }
        // resample every tile of every row the violated event depends on;
        // augmentation columns are never touched
        for &r in &rows {
            let row = matrix.row_mut(r);
            for tile in row[..core].chunks_mut(tile_width) {
                fill_tile(tile, params.alpha, k, &mut rng);
            }
        }
        if let Some(s) = steps.as_mut() {
            s.push((rows, vector));
        }
        resample_count += 1;
    }
}
