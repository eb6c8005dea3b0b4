//! Random matrix generation: i.i.d. uniform entries, and tiled rows built
//! from 1 x (k*alpha) tiles each holding exactly k copies of every letter.
//! Augmentation appends alpha constant columns at the right edge.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::{BufRead, Write};

use crate::bounds::CoveringParams;
use crate::Error;

/// How a matrix was produced; the verifier and constructor treat core and
/// augmentation columns distinctly based on this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Iid,
    Tiled { k: u32, augmented: bool },
    /// Loaded from a file; no structural guarantees beyond the alphabet.
    External,
}

/// m x n matrix over the alphabet {1..alpha}, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayMatrix {
    pub m: usize,
    pub n: usize,
    pub alpha: u32,
    pub provenance: Provenance,
    entries: Vec<u8>,
}

impl ArrayMatrix {
    pub fn from_rows(rows: Vec<Vec<u8>>, alpha: u32, provenance: Provenance) -> Result<Self, Error> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(m * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::InvalidInput("ragged rows".into()));
            }
            for &v in row {
                if v == 0 || v as u32 > alpha {
                    return Err(Error::InvalidInput(format!(
                        "entry {v} outside alphabet 1..={alpha}"
                    )));
                }
            }
            entries.extend_from_slice(row);
        }
        Ok(Self { m, n, alpha, provenance, entries })
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.entries[row * self.n + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[u8] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    pub fn row_mut(&mut self, row: usize) -> &mut [u8] {
        &mut self.entries[row * self.n..(row + 1) * self.n]
    }

    /// Columns belonging to the tiled core (everything left of the
    /// augmentation block, if any).
    pub fn core_cols(&self) -> usize {
        match self.provenance {
            Provenance::Tiled { augmented: true, .. } => self.n - self.alpha as usize,
            _ => self.n,
        }
    }

    /// Text format: first line "m n alpha", then m lines of n
    /// space-separated letters.
    pub fn store<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {} {}", self.m, self.n, self.alpha)?;
        for r in 0..self.m {
            let line: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn load<R: BufRead>(r: R) -> Result<Self, Error> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty matrix file".into()))??;
        let dims: Vec<u64> = header
            .split_whitespace()
            .map(|tok| tok.parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Error::InvalidInput(format!("bad header '{header}': {e}")))?;
        if dims.len() != 3 {
            return Err(Error::InvalidInput(format!("bad header '{header}'")));
        }
        let (m, n, alpha) = (dims[0] as usize, dims[1] as usize, dims[2] as u32);
        if alpha == 0 || alpha > u8::MAX as u32 {
            return Err(Error::InvalidInput(format!("unsupported alphabet size {alpha}")));
        }
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::InvalidInput("truncated matrix file".into()))??;
            let row: Vec<u8> = line
                .split_whitespace()
                .map(|tok| tok.parse::<u8>())
                .collect::<Result<_, _>>()
                .map_err(|e| Error::InvalidInput(format!("bad row '{line}': {e}")))?;
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "row has {} entries, expected {n}",
                    row.len()
                )));
            }
            rows.push(row);
        }
        Self::from_rows(rows, alpha, Provenance::External)
    }
}

// splitmix64; mixes (seed, row, tile) into a per-tile stream so generation
// is reproducible regardless of evaluation order.
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn tile_stream(seed: u64, row: u64, tile: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(mix(mix(seed) ^ row) ^ tile))
}

/// Fill `buf` (length k*alpha) with a uniform random arrangement of the
/// multiset {1^k, 2^k, ..., alpha^k}.
pub fn fill_tile<R: Rng>(buf: &mut [u8], alpha: u32, k: u32, rng: &mut R) {
    debug_assert_eq!(buf.len(), (alpha * k) as usize);
    let mut pos = 0;
    for letter in 1..=alpha as u8 {
        for _ in 0..k {
            buf[pos] = letter;
            pos += 1;
        }
    }
    buf.shuffle(rng);
}

/// One tiled row of width `n_core`: a concatenation of n_core/(k*alpha)
/// independent uniform tiles.
pub fn sample_tiled_row(
    n_core: usize,
    alpha: u32,
    k: u32,
    seed: u64,
    row_index: u64,
) -> Result<Vec<u8>, Error> {
    let tile_width = (alpha * k) as usize;
    if tile_width == 0 || n_core % tile_width != 0 {
        return Err(Error::Divisibility {
            n: n_core as u64,
            tile_width: tile_width as u64,
        });
    }
    let mut row = vec![0u8; n_core];
    for (j, tile) in row.chunks_mut(tile_width).enumerate() {
        let mut rng = tile_stream(seed, row_index, j as u64);
        fill_tile(tile, alpha, k, &mut rng);
    }
    Ok(row)
}

/// m independent tiled rows, optionally followed by the alpha constant
/// augmentation columns (all 1's, ..., all alpha's).
pub fn sample_array(
    params: CoveringParams,
    n_core: usize,
    k: u32,
    augment: bool,
    seed: u64,
) -> Result<ArrayMatrix, Error> {
    let mut rows = Vec::with_capacity(params.m as usize);
    for r in 0..params.m as u64 {
        let mut row = sample_tiled_row(n_core, params.alpha, k, seed, r)?;
        if augment {
            row.extend(1..=params.alpha as u8);
        }
        rows.push(row);
    }
    ArrayMatrix::from_rows(rows, params.alpha, Provenance::Tiled { k, augmented: augment })
}

/// Every entry i.i.d. uniform on {1..alpha}.
pub fn sample_iid_array(params: CoveringParams, n: usize, seed: u64) -> Result<ArrayMatrix, Error> {
    let mut rows = Vec::with_capacity(params.m as usize);
    for r in 0..params.m as u64 {
        let mut rng = tile_stream(seed, r, 0);
        let row: Vec<u8> = (0..n)
            .map(|_| rng.random_range(1..=params.alpha as u8))
            .collect();
        rows.push(row);
    }
    ArrayMatrix::from_rows(rows, params.alpha, Provenance::Iid)
}

/// Check the tile-composition invariant on the core part of a tiled row.
pub fn tile_invariant_holds(row: &[u8], alpha: u32, k: u32) -> bool {
    let tile_width = (alpha * k) as usize;
    if tile_width == 0 || row.len() % tile_width != 0 {
        return false;
    }
    row.chunks(tile_width).all(|tile| {
        let mut counts = vec![0u32; alpha as usize + 1];
        for &v in tile {
            if v == 0 || v as u32 > alpha {
                return false;
            }
            counts[v as usize] += 1;
        }
        counts[1..].iter().all(|&c| c == k)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: u32, t: u32, alpha: u32) -> CoveringParams {
        CoveringParams::new(m, t, alpha).unwrap()
    }

    #[test]
    fn tiles_hold_multiset_invariant() {
        for seed in 0..20u64 {
            let row = sample_tiled_row(12, 2, 1, seed, 0).unwrap();
            assert!(tile_invariant_holds(&row, 2, 1));
            let row = sample_tiled_row(12, 3, 2, seed, 0).unwrap();
            assert!(tile_invariant_holds(&row, 3, 2));
        }
        assert!(sample_tiled_row(5, 2, 1, 0, 0).is_err());
    }

    #[test]
    fn single_tile_uniform_alpha2_k1() {
        // P(tile = [1,2]) = 1/2 within 3 sigma over 1e5 samples
        let trials = 100_000;
        let mut count = 0u64;
        for i in 0..trials {
            let row = sample_tiled_row(2, 2, 1, 12345, i).unwrap();
            if row == [1, 2] {
                count += 1;
            }
        }
        let p = count as f64 / trials as f64;
        let sigma = (0.25f64 / trials as f64).sqrt();
        assert!((p - 0.5).abs() < 3.0 * sigma, "p={p}");
    }

    #[test]
    fn single_tile_uniform_alpha2_k2_chi_square() {
        // 6 arrangements of {1,1,2,2}; chi-square, 5 dof, 3-sigma-ish cutoff
        let trials = 100_000u64;
        let mut counts = std::collections::HashMap::new();
        for i in 0..trials {
            let row = sample_tiled_row(4, 2, 2, 777, i).unwrap();
            *counts.entry(row).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 6);
        let expected = trials as f64 / 6.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // P(chi2_5 > 20.5) ~ 1e-3
        assert!(chi2 < 20.5, "chi2={chi2}");
    }

    #[test]
    fn augmentation_and_determinism() {
        let p = params(4, 2, 3);
        let a = sample_array(p, 6, 1, true, 42).unwrap();
        let b = sample_array(p, 6, 1, true, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n, 9);
        assert_eq!(a.core_cols(), 6);
        for r in 0..a.m {
            assert_eq!(&a.row(r)[6..], &[1, 2, 3]);
            // letter counts in the core all equal n_core/alpha
            let mut counts = [0u32; 4];
            for &v in &a.row(r)[..6] {
                counts[v as usize] += 1;
            }
            assert_eq!(&counts[1..], &[2, 2, 2]);
        }
        let c = sample_array(p, 6, 1, true, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn iid_marginals_and_determinism() {
        let p = params(100, 2, 2);
        let a = sample_iid_array(p, 100, 7).unwrap();
        assert_eq!(a, sample_iid_array(p, 100, 7).unwrap());
        let ones: u64 = (0..a.m)
            .map(|r| a.row(r).iter().filter(|&&v| v == 1).count() as u64)
            .sum();
        let total = (a.m * a.n) as f64;
        let p_hat = ones as f64 / total;
        let sigma = (0.25 / total).sqrt();
        assert!((p_hat - 0.5).abs() < 4.0 * sigma, "p_hat={p_hat}");
    }

    #[test]
    fn iid_row_sums_binomial_mean() {
        let p = params(10_000, 2, 2);
        let a = sample_iid_array(p, 32, 99).unwrap();
        let mean: f64 = (0..a.m)
            .map(|r| a.row(r).iter().filter(|&&v| v == 1).count() as f64)
            .sum::<f64>()
            / a.m as f64;
        // Binomial(32, 1/2): mean 16, sd of the sample mean = sqrt(8)/100
        let sd = (32.0 * 0.25f64).sqrt() / (a.m as f64).sqrt();
        assert!((mean - 16.0).abs() < 3.0 * sd, "mean={mean}");
    }

    #[test]
    fn positional_marginal_uniform() {
        // letter at a fixed position of a tiled row is uniform
        let trials = 100_000u64;
        let mut count1 = 0u64;
        for i in 0..trials {
            let row = sample_tiled_row(6, 3, 1, 31337, i).unwrap();
            if row[4] == 1 {
                count1 += 1;
            }
        }
        let p = count1 as f64 / trials as f64;
        let third: f64 = 1.0 / 3.0;
        let sigma = (third * (1.0 - third) / trials as f64).sqrt();
        assert!((p - third).abs() < 3.0 * sigma, "p={p}");
    }

    #[test]
    fn cross_tile_independence() {
        // indicator(first letter of tile 0 == 1) vs same for tile 1
        let trials = 100_000u64;
        let (mut c0, mut c1, mut c01) = (0u64, 0u64, 0u64);
        for i in 0..trials {
            let row = sample_tiled_row(4, 2, 1, 555, i).unwrap();
            let a = row[0] == 1;
            let b = row[2] == 1;
            c0 += a as u64;
            c1 += b as u64;
            c01 += (a && b) as u64;
        }
        let n = trials as f64;
        let cov = c01 as f64 / n - (c0 as f64 / n) * (c1 as f64 / n);
        // sd of empirical covariance of two independent Bernoulli(1/2)
        let sd = 0.25 / n.sqrt();
        assert!(cov.abs() < 3.0 * sd, "cov={cov}");
    }

    #[test]
    fn text_format_round_trip() {
        let p = params(3, 2, 2);
        let a = sample_array(p, 4, 1, true, 1).unwrap();
        let mut buf = Vec::new();
        a.store(&mut buf).unwrap();
        let b = ArrayMatrix::load(&buf[..]).unwrap();
        assert_eq!(a.m, b.m);
        assert_eq!(a.n, b.n);
        assert_eq!(a.alpha, b.alpha);
        for r in 0..a.m {
            assert_eq!(a.row(r), b.row(r));
        }
    }

    #[test]
    fn load_rejects_malformed() {
        assert!(ArrayMatrix::load(&b""[..]).is_err());
        assert!(ArrayMatrix::load(&b"2 2\n1 1\n1 1\n"[..]).is_err());
        assert!(ArrayMatrix::load(&b"2 2 2\n1 1\n"[..]).is_err());
        assert!(ArrayMatrix::load(&b"1 2 2\n1 3\n"[..]).is_err());
    }
}
