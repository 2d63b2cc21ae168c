//! Classical and quantum bounds of ROCN Bell functionals.
//!
//! The classical bound is `max_a sum_j |sum_i h_ij a_i|` over `a in {-1,1}^m`
//! (the optimal `b` is the sign of each column sum). The first entry of `a` is
//! fixed to `+1` by the global sign symmetry, leaving `2^(m-1)` candidates.
//!
//! Candidates are encoded as bitmasks: bit `m-1-i` set means `a_i = -1`, so the
//! numeric order of masks is the lexicographic order of `a` with `+1` before
//! `-1`. Ties between candidates are always resolved towards the smallest mask,
//! which makes every result independent of the number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rocn::{is_platonic, RocnMatrix};

/// Largest row count accepted by the exhaustive search.
pub const MAX_SEARCH_ROWS: usize = 30;

/// Masks scanned sequentially by one task.
const CHUNK: u64 = 1 << 12;

/// Knobs for the exhaustive searches.
#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    /// Worker threads; 0 uses the global rayon pool.
    pub threads: usize,
    /// Use dense floating-point dot products even when the matrix has a
    /// uniform-magnitude sign pattern.
    pub force_general: bool,
}

/// Classical and quantum bounds of one ROCN matrix.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundsReport {
    pub m: usize,
    pub n: usize,
    pub beta_c: f64,
    pub optimal_a: Vec<i8>,
    pub optimal_b: Vec<i8>,
    pub beta_q: f64,
    pub epping_bound: f64,
    pub gap: f64,
    pub nontrivial: bool,
    pub is_platonic: bool,
    /// Integer `C` with `beta_c = magnitude * C`, set when the bitmask path ran.
    pub integer_value: Option<i64>,
    /// Common entry magnitude `c` used by the bitmask path.
    pub magnitude: Option<f64>,
}

/// Column sign patterns of a uniform-magnitude matrix, one mask per column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrix {
    rows: usize,
    columns: Vec<u32>,
}

impl SignMatrix {
    /// `negative[i][j]` is true where entry `(i, j)` is negative.
    pub fn from_negative_flags(negative: &[Vec<bool>]) -> Result<Self> {
        let rows = negative.len();
        if rows == 0 || rows > MAX_SEARCH_ROWS + 1 {
            return Err(Error::SearchTooLarge {
                rows,
                limit: MAX_SEARCH_ROWS,
            });
        }
        let cols = negative[0].len();
        if negative.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged sign matrix".into()));
        }
        let columns = (0..cols)
            .map(|j| {
                (0..rows).fold(0u32, |acc, i| {
                    acc | (u32::from(negative[i][j]) << (rows - 1 - i))
                })
            })
            .collect();
        Ok(SignMatrix { rows, columns })
    }

    pub fn from_signs(rows: &[Vec<i64>]) -> Result<Self> {
        let flags: Vec<Vec<bool>> = rows.iter().map(|r| r.iter().map(|&x| x < 0).collect()).collect();
        Self::from_negative_flags(&flags)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    /// Signed column sum `sum_i s_ij a_i` for the candidate `mask`.
    #[inline]
    pub fn column_sum(&self, j: usize, mask: u32) -> i64 {
        self.rows as i64 - 2 * i64::from((self.columns[j] ^ mask).count_ones())
    }

    /// `sum_j |sum_i s_ij a_i|`.
    #[inline]
    pub fn value(&self, mask: u32) -> i64 {
        let m = self.rows as i64;
        self.columns
            .iter()
            .map(|&c| (m - 2 * i64::from((c ^ mask).count_ones())).abs())
            .sum()
    }
}

/// Converts a mask over `m` rows to the sign vector `a`.
pub fn mask_to_signs(mask: u32, m: usize) -> Vec<i8> {
    (0..m)
        .map(|i| if mask >> (m - 1 - i) & 1 == 1 { -1 } else { 1 })
        .collect()
}

/// Inverse of [`mask_to_signs`].
pub fn signs_to_mask(a: &[i8]) -> u32 {
    let m = a.len();
    a.iter()
        .enumerate()
        .fold(0, |acc, (i, &s)| acc | (u32::from(s < 0) << (m - 1 - i)))
}

fn check_rows(m: usize) -> Result<()> {
    if m > MAX_SEARCH_ROWS {
        return Err(Error::SearchTooLarge {
            rows: m,
            limit: MAX_SEARCH_ROWS,
        });
    }
    Ok(())
}

/// Runs `f` inside a pool of `threads` workers, or the global pool for 0.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Maximizes `eval` over masks `0..count`; ties go to the smallest mask.
fn argmax<V, F>(count: u64, eval: F) -> (V, u32)
where
    V: PartialOrd + Copy + Send,
    F: Fn(u32) -> V + Sync,
{
    let better = |x: (V, u32), y: (V, u32)| -> (V, u32) {
        if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
            y
        } else {
            x
        }
    };
    let chunks = count.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(count);
            let mut best = (eval(lo as u32), lo as u32);
            for mask in lo + 1..hi {
                let v = eval(mask as u32);
                if v > best.0 {
                    best = (v, mask as u32);
                }
            }
            best
        })
        .reduce_with(better)
        .expect("at least one candidate")
}

/// Smallest mask in `0..count` satisfying `pred`.
fn first_match<F>(count: u64, pred: F) -> Option<u32>
where
    F: Fn(u32) -> bool + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    (0..chunks).into_par_iter().find_map_first(|c| {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(count);
        (lo..hi).map(|m| m as u32).find(|&m| pred(m))
    })
}

/// `max_a sum_j |sum_i s_ij a_i|` for an integer sign matrix, with the
/// maximizing mask.
pub fn max_sign_sum(s: &SignMatrix) -> (i64, u32) {
    let count = 1u64 << (s.rows() - 1);
    argmax(count, |mask| s.value(mask))
}

/// `sum_j |sum_i h_ij a_i|` in a fixed summation order.
pub fn strategy_value(h: &RocnMatrix, a: &[i8]) -> f64 {
    column_sums(h, a).iter().map(|x| x.abs()).sum()
}

fn column_sums(h: &RocnMatrix, a: &[i8]) -> Vec<f64> {
    (0..h.n())
        .map(|j| (0..h.m()).map(|i| h.get(i, j) * f64::from(a[i])).sum())
        .collect()
}

fn general_value(h: &RocnMatrix, mask: u32) -> f64 {
    let m = h.m();
    (0..h.n())
        .map(|j| {
            (0..m)
                .map(|i| {
                    let neg = mask >> (m - 1 - i) & 1 == 1;
                    if neg {
                        -h.get(i, j)
                    } else {
                        h.get(i, j)
                    }
                })
                .sum::<f64>()
                .abs()
        })
        .sum()
}

/// Exhaustive `max_a sum_j |sum_i A_ij a_i|` for an arbitrary integer matrix,
/// with the optimal `a` (first entry `+1`, smallest mask on ties).
pub fn max_dense_integer(rows: &[Vec<i64>]) -> Result<(i64, Vec<i8>)> {
    let m = rows.len();
    if m == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    check_rows(m)?;
    let n = rows[0].len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("ragged matrix".into()));
    }
    let (value, mask) = argmax(1u64 << (m - 1), |mask| {
        (0..n)
            .map(|j| {
                (0..m)
                    .map(|i| {
                        if mask >> (m - 1 - i) & 1 == 1 {
                            -rows[i][j]
                        } else {
                            rows[i][j]
                        }
                    })
                    .sum::<i64>()
                    .abs()
            })
            .sum::<i64>()
    });
    Ok((value, mask_to_signs(mask, m)))
}

/// Optimal Bob signs for Alice's `a`: the sign of each column sum, `+1` on ties.
pub fn induced_b(h: &RocnMatrix, a: &[i8]) -> Vec<i8> {
    column_sums(h, a)
        .into_iter()
        .map(|x| if x < 0.0 { -1 } else { 1 })
        .collect()
}

/// Exact classical bound by exhaustive search over Alice's sign vectors.
pub fn classical_bound(h: &RocnMatrix, opts: SearchOptions) -> Result<BoundsReport> {
    let (m, n) = (h.m(), h.n());
    check_rows(m)?;
    let pattern = if opts.force_general { None } else { h.sign_pattern() };

    let (beta_c, mask, integer_value, magnitude, optimal_b) = match pattern {
        Some((c, negative)) => {
            let s = SignMatrix::from_negative_flags(&negative)?;
            let (value, mask) = with_threads(opts.threads, || max_sign_sum(&s));
            let b = (0..n)
                .map(|j| if s.column_sum(j, mask) < 0 { -1 } else { 1 })
                .collect();
            let exact = h.exact().and_then(|ex| ex.magnitude_multiple_f64(value));
            (exact.unwrap_or(c * value as f64), mask, Some(value), Some(c), b)
        }
        None => {
            let count = 1u64 << (m - 1);
            let (value, mask) = with_threads(opts.threads, || argmax(count, |k| general_value(h, k)));
            let a = mask_to_signs(mask, m);
            (value, mask, None, None, induced_b(h, &a))
        }
    };

    let beta_q = quantum_bound(h);
    Ok(BoundsReport {
        m,
        n,
        beta_c,
        optimal_a: mask_to_signs(mask, m),
        optimal_b,
        beta_q,
        epping_bound: epping_bound(h),
        gap: beta_q - beta_c,
        nontrivial: beta_c < beta_q - 1e-9,
        is_platonic: is_platonic(h, crate::rocn::DEFAULT_TOL),
        integer_value,
        magnitude,
    })
}

/// Maximal quantum value of an ROCN functional: the column count `n`.
pub fn quantum_bound(h: &RocnMatrix) -> f64 {
    h.n() as f64
}

/// `sqrt(m n) * ||h||_2`, where the spectral norm is the largest row norm.
pub fn epping_bound(h: &RocnMatrix) -> f64 {
    ((h.m() * h.n()) as f64).sqrt() * h.spectral_norm()
}

/// Range `(n^2 2^-n binom(n, n/2), n sqrt(n))` for `sqrt(n) * beta_c` of a full
/// order-`n` Hadamard-derived matrix.
pub fn best_bound_range(n: usize) -> Result<(f64, f64)> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "Best bound needs an even order, got {n}"
        )));
    }
    // binom(n, n/2) / 2^n computed as a running product to stay in range.
    let half = n / 2;
    let mut central = 1.0f64;
    for k in 1..=half {
        central *= (half + k) as f64 / k as f64 / 4.0;
    }
    let nf = n as f64;
    Ok((nf * nf * central, nf * nf.sqrt()))
}

/// Outcome of the triviality search.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NontrivialityReport {
    pub nontrivial: bool,
    pub witness: Option<Vec<i8>>,
}

/// Looks for `a` with `sum_{i<k} h_ij h_kj a_i a_k = 0` in every column.
///
/// Such an `a` reaches the quantum value `n` classically, so the inequality is
/// nontrivial exactly when none exists. The witness is the first one in mask
/// order.
pub fn nontriviality_check(h: &RocnMatrix, opts: SearchOptions) -> Result<NontrivialityReport> {
    let m = h.m();
    check_rows(m)?;
    let count = 1u64 << (m - 1);
    let pattern = if opts.force_general { None } else { h.sign_pattern() };

    let witness = match pattern {
        Some((_, negative)) => {
            // With entries +-c: cross term = c^2 ((m - 2p)^2 - m) / 2.
            let s = SignMatrix::from_negative_flags(&negative)?;
            let mm = m as i64;
            with_threads(opts.threads, || {
                first_match(count, |mask| {
                    (0..s.cols()).all(|j| {
                        let v = s.column_sum(j, mask);
                        v * v == mm
                    })
                })
            })
        }
        None => {
            let norms: Vec<f64> = (0..h.n())
                .map(|j| (0..m).map(|i| h.get(i, j).powi(2)).sum())
                .collect();
            with_threads(opts.threads, || {
                first_match(count, |mask| {
                    let a = mask_to_signs(mask, m);
                    column_sums(h, &a)
                        .iter()
                        .zip(&norms)
                        .all(|(s, q)| ((s * s - q) / 2.0).abs() <= 1e-9)
                })
            })
        }
    };

    Ok(NontrivialityReport {
        nontrivial: witness.is_none(),
        witness: witness.map(|mask| mask_to_signs(mask, m)),
    })
}
