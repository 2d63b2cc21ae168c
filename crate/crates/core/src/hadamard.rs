//! Hadamard matrices: constructions, catalogue I/O, excess and the row-removal
//! harness.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{mask_to_signs, max_sign_sum, with_threads, SignMatrix, MAX_SEARCH_ROWS};
use crate::error::{Error, Result};

/// Largest order accepted by [`remove_row_conjecture`].
pub const MAX_CONJECTURE_ORDER: usize = 24;

/// Square `+-1` matrix with `H H^T = n I`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HadamardMatrix {
    order: usize,
    entries: Vec<i8>,
}

impl HadamardMatrix {
    /// Validates integer rows and builds the matrix.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row {bad} has {} entries, expected {n}",
                rows[bad].len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if let Some(j) = row.iter().position(|&x| x != 1 && x != -1) {
                return Err(Error::NotSign { row: i, col: j, value: row[j] });
            }
        }
        let entries: Vec<i8> = rows.iter().flatten().map(|&x| x as i8).collect();
        let h = HadamardMatrix { order: n, entries };
        if let Some((i, k)) = h.first_non_orthogonal_pair() {
            return Err(Error::NotOrthogonal(i, k));
        }
        Ok(h)
    }

    fn unchecked(order: usize, entries: Vec<i8>) -> Self {
        HadamardMatrix { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        i64::from(self.entries[i * self.order + j])
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.order)
            .map(|i| self.row(i).iter().map(|&x| i64::from(x)).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.order;
        let mut entries = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        Self::unchecked(n, entries)
    }

    /// Row and column permutations and negations; the result is Hadamard again.
    ///
    /// Entry `(i, j)` of the result is `r_i c_j H[row_perm[i], col_perm[j]]`.
    pub fn transform(
        &self,
        row_perm: &[usize],
        col_perm: &[usize],
        row_signs: &[i8],
        col_signs: &[i8],
    ) -> Result<Self> {
        let n = self.order;
        let is_perm = |p: &[usize]| {
            let mut seen = vec![false; n];
            p.len() == n && p.iter().all(|&k| k < n && !std::mem::replace(&mut seen[k], true))
        };
        if !is_perm(row_perm) || !is_perm(col_perm) {
            return Err(Error::InvalidArgument("not a permutation of the indices".into()));
        }
        let sign_ok = |s: &[i8]| s.len() == n && s.iter().all(|&x| x == 1 || x == -1);
        if !sign_ok(row_signs) || !sign_ok(col_signs) {
            return Err(Error::InvalidArgument("sign vectors must have +-1 entries".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(row_signs[i] * col_signs[j] * self.entries[row_perm[i] * n + col_perm[j]]);
            }
        }
        Ok(Self::unchecked(n, entries))
    }

    fn first_non_orthogonal_pair(&self) -> Option<(usize, usize)> {
        let n = self.order;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |k| (i, k)))
            .find(|&(i, k)| {
                self.row(i)
                    .iter()
                    .zip(self.row(k))
                    .map(|(&a, &b)| i64::from(a * b))
                    .sum::<i64>()
                    != 0
            })
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.order)
            .map(|i| self.row(i).iter().map(|&x| i64::from(x)).sum())
            .collect()
    }

    fn sign_matrix(&self, skip_row: Option<usize>) -> Result<SignMatrix> {
        let flags: Vec<Vec<bool>> = (0..self.order)
            .filter(|&i| Some(i) != skip_row)
            .map(|i| self.row(i).iter().map(|&x| x < 0).collect())
            .collect();
        SignMatrix::from_negative_flags(&flags)
    }
}

impl fmt::Debug for HadamardMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HadamardMatrix(order {})", self.order)?;
        for i in 0..self.order {
            let line: String = self.row(i).iter().map(|&x| if x > 0 { '+' } else { '-' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Order `2^k` Sylvester matrix from `H_{2n} = [[H, H], [H, -H]]`.
pub fn sylvester(k: u32) -> HadamardMatrix {
    let mut n = 1usize;
    let mut entries = vec![1i8];
    for _ in 0..k {
        let m = 2 * n;
        let mut next = vec![0i8; m * m];
        for i in 0..n {
            for j in 0..n {
                let x = entries[i * n + j];
                next[i * m + j] = x;
                next[i * m + j + n] = x;
                next[(i + n) * m + j] = x;
                next[(i + n) * m + j + n] = -x;
            }
        }
        entries = next;
        n = m;
    }
    HadamardMatrix::unchecked(n, entries)
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Paley type I matrix of order `q + 1` for a prime `q = 3 mod 4`.
///
/// With the Jacobsthal matrix `Q_ij = chi(j - i)` and
/// `S = [[0, 1^T], [-1, Q]]`, the matrix is `I + S`.
pub fn paley_i(q: u64) -> Result<HadamardMatrix> {
    if !is_prime(q) {
        return Err(Error::InvalidArgument(format!("{q} is not prime")));
    }
    if q % 4 != 3 {
        return Err(Error::InvalidArgument(format!("{q} is not congruent to 3 mod 4")));
    }
    let qs = q as usize;
    let mut residue = vec![false; qs];
    for x in 1..q {
        residue[(x * x % q) as usize] = true;
    }
    let chi = |x: usize| -> i8 {
        if x == 0 {
            0
        } else if residue[x] {
            1
        } else {
            -1
        }
    };
    let n = qs + 1;
    let mut entries = vec![0i8; n * n];
    for i in 0..n {
        for j in 0..n {
            let s = match (i, j) {
                (0, 0) => 0,
                (0, _) => 1,
                (_, 0) => -1,
                _ => chi((j + qs - i) % qs),
            };
            entries[i * n + j] = s + i8::from(i == j);
        }
    }
    let h = HadamardMatrix::unchecked(n, entries);
    debug_assert!(h.first_non_orthogonal_pair().is_none());
    Ok(h)
}

/// True iff `m` is square with `+-1` entries and `M M^T = n I`.
pub fn is_hadamard(m: &[Vec<i64>]) -> bool {
    HadamardMatrix::from_rows(m).is_ok()
}

/// Plain excess: the sum of all entries.
pub fn excess(h: &HadamardMatrix) -> i64 {
    h.entries.iter().map(|&x| i64::from(x)).sum()
}

/// Optimized excess with the optimal sign flips.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExcessReport {
    pub order: usize,
    pub sigma: i64,
    pub sigma_opt: i64,
    pub optimal_row_signs: Vec<i8>,
    pub optimal_col_signs: Vec<i8>,
    pub beta_c_scaled: f64,
    pub regular: bool,
    pub row_sum: Option<i64>,
}

/// Maximum of the excess over row and column negations (and permutations,
/// which do not change it).
pub fn optimized_excess(h: &HadamardMatrix, threads: usize) -> Result<ExcessReport> {
    let n = h.order;
    if n > MAX_SEARCH_ROWS {
        return Err(Error::SearchTooLarge { rows: n, limit: MAX_SEARCH_ROWS });
    }
    let s = h.sign_matrix(None)?;
    let (sigma_opt, mask) = with_threads(threads, || max_sign_sum(&s));
    let (regular, row_sum) = is_regular(h);
    Ok(ExcessReport {
        order: n,
        sigma: excess(h),
        sigma_opt,
        optimal_row_signs: mask_to_signs(mask, n),
        optimal_col_signs: (0..n).map(|j| if s.column_sum(j, mask) < 0 { -1 } else { 1 }).collect(),
        beta_c_scaled: sigma_opt as f64 / (n as f64).sqrt(),
        regular,
        row_sum,
    })
}

/// Whether all row sums agree, with the common value.
pub fn is_regular(h: &HadamardMatrix) -> (bool, Option<i64>) {
    let sums = h.row_sums();
    if sums.iter().all(|&s| s == sums[0]) {
        (true, Some(sums[0]))
    } else {
        (false, None)
    }
}

/// Integer value `sum_{i != removed} |sum_j H_ij b_j|` of column signs `b` on
/// the truncation without row `removed`.
pub fn truncation_value_for_column_signs(h: &HadamardMatrix, removed: usize, b: &[i8]) -> Result<i64> {
    let n = h.order;
    if removed >= n || b.len() != n {
        return Err(Error::Dimension(format!(
            "need a row index below {n} and {n} column signs"
        )));
    }
    Ok((0..n)
        .filter(|&i| i != removed)
        .map(|i| {
            h.row(i)
                .iter()
                .zip(b)
                .map(|(&x, &s)| i64::from(x * s))
                .sum::<i64>()
                .abs()
        })
        .sum())
}

/// Optimized excess of one single-row truncation.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TruncationResult {
    pub removed_row: usize,
    /// Integer `sqrt(n - 1) * beta_c`.
    pub excess: i64,
    pub beta_c: f64,
    pub optimal_a: Vec<i8>,
}

/// Row-removal conjecture sweep over every single-row truncation.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjectureReport {
    pub order: usize,
    pub per_row_beta_c: Vec<f64>,
    pub per_row_excess: Vec<i64>,
    pub all_equal: bool,
    /// Common truncated excess when all rows agree.
    pub value: Option<i64>,
    pub truncations: Vec<TruncationResult>,
}

/// Optimized excess of the truncation that drops row `removed`.
pub fn truncated_excess(h: &HadamardMatrix, removed: usize) -> Result<TruncationResult> {
    let n = h.order;
    if removed >= n {
        return Err(Error::InvalidArgument(format!("row {removed} out of range for order {n}")));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("order 1 has no proper truncation".into()));
    }
    let s = h.sign_matrix(Some(removed))?;
    let (value, mask) = max_sign_sum(&s);
    Ok(TruncationResult {
        removed_row: removed,
        excess: value,
        beta_c: value as f64 / ((n - 1) as f64).sqrt(),
        optimal_a: mask_to_signs(mask, n - 1),
    })
}

/// Computes the optimized excess of every single-row truncation and checks
/// that they all coincide (compared as integers).
pub fn remove_row_conjecture(h: &HadamardMatrix, threads: usize) -> Result<ConjectureReport> {
    let n = h.order;
    if n > MAX_CONJECTURE_ORDER {
        return Err(Error::SearchTooLarge { rows: n, limit: MAX_CONJECTURE_ORDER });
    }
    let truncations = with_threads(threads, || {
        (0..n)
            .into_par_iter()
            .map(|r| truncated_excess(h, r))
            .collect::<Result<Vec<_>>>()
    })?;
    let per_row_excess: Vec<i64> = truncations.iter().map(|t| t.excess).collect();
    let all_equal = per_row_excess.iter().all(|&v| v == per_row_excess[0]);
    Ok(ConjectureReport {
        order: n,
        per_row_beta_c: truncations.iter().map(|t| t.beta_c).collect(),
        value: all_equal.then_some(per_row_excess[0]),
        per_row_excess,
        all_equal,
        truncations,
    })
}

/// Parses a catalogue matrix: rows of `+`/`-` characters or whitespace
/// separated `+-1` integers, `#` comments, optional `order n` header.
pub fn load_hadamard(text: &str) -> Result<HadamardMatrix> {
    let mut declared = None;
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("order") {
            if !rows.is_empty() || declared.is_some() {
                return Err(Error::Parse { line: line_no, message: "misplaced order header".into() });
            }
            let n = rest.trim().parse::<usize>().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("bad order: {e}"),
            })?;
            declared = Some(n);
            continue;
        }
        let row: Vec<i64> = if line.chars().all(|c| c == '+' || c == '-') {
            line.chars().map(|c| if c == '+' { 1 } else { -1 }).collect()
        } else {
            line.split_whitespace()
                .map(|tok| {
                    tok.parse::<i64>().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("unexpected token '{tok}'"),
                    })
                })
                .collect::<Result<_>>()?
        };
        rows.push(row);
    }
    if let Some(n) = declared {
        if n != rows.len() {
            return Err(Error::Parse {
                line: 1,
                message: format!("header declares order {n} but {} rows follow", rows.len()),
            });
        }
    }
    HadamardMatrix::from_rows(&rows)
}

/// Canonical catalogue text: `order n` header, then `+`/`-` rows.
pub fn save_hadamard(h: &HadamardMatrix) -> String {
    let mut out = format!("order {}\n", h.order);
    for i in 0..h.order {
        out.extend(h.row(i).iter().map(|&x| if x > 0 { '+' } else { '-' }));
        out.push('\n');
    }
    out
}

const ORDER16: [(&str, &str); 5] = [
    ("hadamard16_a", include_str!("../data/hadamard16_a.txt")),
    ("hadamard16_b", include_str!("../data/hadamard16_b.txt")),
    ("hadamard16_c", include_str!("../data/hadamard16_c.txt")),
    ("hadamard16_d", include_str!("../data/hadamard16_d.txt")),
    ("hadamard16_e", include_str!("../data/hadamard16_e.txt")),
];

/// The five inequivalent order-16 representatives, one per equivalence class.
pub fn order16_representatives() -> Vec<(&'static str, HadamardMatrix)> {
    ORDER16
        .iter()
        .map(|&(name, text)| (name, load_hadamard(text).expect("bundled matrix is Hadamard")))
        .collect()
}

/// Every bundled matrix: Sylvester orders 2 to 32, Paley orders 12, 20 and
/// 24, and the order-16 representatives.
pub fn bundled_catalogue() -> Vec<(String, HadamardMatrix)> {
    let mut out: Vec<(String, HadamardMatrix)> = (1..=5)
        .map(|k| (format!("sylvester{}", 1 << k), sylvester(k)))
        .collect();
    for q in [11, 19, 23] {
        out.push((format!("paley{}", q + 1), paley_i(q).expect("valid Paley prime")));
    }
    out.extend(order16_representatives().into_iter().map(|(n, h)| (n.to_string(), h)));
    out
}

/// Looks up a bundled matrix by name.
pub fn catalogue_entry(name: &str) -> Option<HadamardMatrix> {
    bundled_catalogue().into_iter().find(|(n, _)| n == name).map(|(_, h)| h)
}
