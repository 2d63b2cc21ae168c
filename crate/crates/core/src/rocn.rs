//! Row-orthogonal, column-normalized (ROCN) matrices.
//!
//! An `m x n` real matrix `h` with `m <= n` is ROCN when its rows are pairwise
//! orthogonal and each column has unit Euclidean norm. Such a matrix defines the
//! correlation Bell functional `sum_ij h_ij <A_i B_j>`.
//!
//! Matrices built from Hadamard truncations or read from files with exact
//! entries also carry an [`ExactForm`] `h = R / sqrt(c)` with `R` rational,
//! which lets rank and classical-bound computations stay exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hadamard::HadamardMatrix;
use crate::numerics::{ratio_to_f64, RationalMatrix, RealMatrix};

/// Default tolerance for the ROCN conditions.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Tolerance on the total mass `sum_i H_i^2 = n`.
const MASS_TOL: f64 = 1e-9;

/// `h = numerators / sqrt(radicand)` with rational numerators and a positive
/// rational radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactForm {
    pub numerators: RationalMatrix,
    pub radicand: BigRational,
}

impl ExactForm {
    pub fn to_real(&self) -> RealMatrix {
        let scale = ratio_to_f64(&self.radicand).sqrt();
        let r = &self.numerators;
        RealMatrix::from_fn(r.rows(), r.cols(), |i, j| ratio_to_f64(&r[(i, j)]) / scale)
    }

    /// Checks both ROCN conditions in exact arithmetic.
    pub fn is_exactly_rocn(&self) -> bool {
        let r = &self.numerators;
        let (m, n) = (r.rows(), r.cols());
        for i in 0..m {
            for k in i + 1..m {
                let dot: BigRational = (0..n).map(|j| &r[(i, j)] * &r[(k, j)]).sum();
                if !dot.is_zero() {
                    return false;
                }
            }
        }
        (0..n).all(|j| {
            let norm: BigRational = (0..m).map(|i| &r[(i, j)] * &r[(i, j)]).sum();
            norm == self.radicand
        })
    }

    /// Common magnitude of all numerators, if every entry is `+-p` for one
    /// rational `p != 0`.
    pub fn common_magnitude(&self) -> Option<BigRational> {
        let r = &self.numerators;
        let first = r[(0, 0)].abs();
        if first.is_zero() {
            return None;
        }
        for i in 0..r.rows() {
            for j in 0..r.cols() {
                if r[(i, j)].abs() != first {
                    return None;
                }
            }
        }
        Some(first)
    }

    /// `k * p / sqrt(radicand)` evaluated as `(k p / radicand) * sqrt(radicand)`,
    /// which rounds correctly for integer radicands.
    pub fn magnitude_multiple_f64(&self, k: i64) -> Option<f64> {
        let num = self.common_magnitude()? * BigRational::from_integer(k.into());
        let q = ratio_to_f64(&self.radicand);
        Some(ratio_to_f64(&(num / &self.radicand)) * q.sqrt())
    }

    /// `k * p / sqrt(radicand)` as text, e.g. `18/sqrt(7)`, where `p` is the
    /// common magnitude of the numerators.
    pub fn format_magnitude_multiple(&self, k: i64) -> Option<String> {
        let num = self.common_magnitude()? * BigRational::from_integer(k.into());
        let q = &self.radicand;
        if q.is_one() {
            return Some(num.to_string());
        }
        let num = if num.is_integer() { num.to_string() } else { format!("({num})") };
        Some(if q.is_integer() { format!("{num}/sqrt({})", q.numer()) } else { format!("{num}/sqrt({q})") })
    }
}

/// A validated ROCN matrix.
#[derive(Clone, Debug)]
pub struct RocnMatrix {
    h: RealMatrix,
    row_norms_sq: Vec<f64>,
    exact: Option<ExactForm>,
}

impl RocnMatrix {
    /// Validates `h` against the ROCN conditions with tolerance `tol`.
    pub fn new(h: RealMatrix, tol: f64) -> Result<Self> {
        let report = validate_rocn(&h, tol)?;
        if !report.is_rocn {
            return Err(Error::NotRocn {
                row_residual: report.row_orthogonality_residual,
                column_residual: report.column_norm_residual,
                tolerance: tol,
            });
        }
        Ok(RocnMatrix {
            h,
            row_norms_sq: report.row_norms_squared,
            exact: None,
        })
    }

    /// Builds from an exact representation; both ROCN conditions must hold
    /// exactly.
    pub fn from_exact(exact: ExactForm) -> Result<Self> {
        let h = exact.to_real();
        let mut out = RocnMatrix::new(h, DEFAULT_TOL)?;
        if !exact.is_exactly_rocn() {
            return Err(Error::InvalidArgument(
                "exact entries violate the ROCN conditions".into(),
            ));
        }
        out.exact = Some(exact);
        Ok(out)
    }

    pub fn from_rows(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        Self::new(RealMatrix::from_rows(rows)?, tol)
    }

    /// Number of rows (Alice's settings).
    pub fn m(&self) -> usize {
        self.h.rows()
    }

    /// Number of columns (Bob's settings).
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.h
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.h[(i, j)]
    }

    /// `H_i^2 = sum_j h_ij^2` for each row.
    pub fn row_norms_squared(&self) -> &[f64] {
        &self.row_norms_sq
    }

    pub fn exact(&self) -> Option<&ExactForm> {
        self.exact.as_ref()
    }

    /// Largest row norm, which is the spectral norm of `h` since the rows are
    /// orthogonal.
    pub fn spectral_norm(&self) -> f64 {
        self.row_norms_sq.iter().copied().fold(0.0, f64::max).sqrt()
    }

    /// Returns `(c, negative)` when every entry is `+-c`; `negative[i][j]` marks
    /// the sign. Exact forms are checked exactly, float matrices to 1e-12.
    pub fn sign_pattern(&self) -> Option<(f64, Vec<Vec<bool>>)> {
        let c = match &self.exact {
            Some(ex) => {
                let p = ex.common_magnitude()?;
                ratio_to_f64(&p) / ratio_to_f64(&ex.radicand).sqrt()
            }
            None => {
                let c = self.h[(0, 0)].abs();
                if c == 0.0 {
                    return None;
                }
                let uniform = self
                    .h
                    .as_slice()
                    .iter()
                    .all(|x| (x.abs() - c).abs() <= 1e-12 * c);
                if !uniform {
                    return None;
                }
                c
            }
        };
        let signs = (0..self.m())
            .map(|i| (0..self.n()).map(|j| self.h[(i, j)] < 0.0).collect())
            .collect();
        Some((c, signs))
    }

    /// Applies row/column permutations and sign flips. Exact forms are carried
    /// along.
    pub fn transform(
        &self,
        row_perm: &[usize],
        col_perm: &[usize],
        row_signs: &[i8],
        col_signs: &[i8],
    ) -> Result<RocnMatrix> {
        let (m, n) = (self.m(), self.n());
        if row_perm.len() != m || col_perm.len() != n || row_signs.len() != m || col_signs.len() != n
        {
            return Err(Error::Dimension("transform arguments have wrong length".into()));
        }
        let sign = |i: usize, j: usize| f64::from(row_signs[i] * col_signs[j]);
        let h = RealMatrix::from_fn(m, n, |i, j| {
            sign(i, j) * self.h[(row_perm[i], col_perm[j])]
        });
        let exact = self.exact.as_ref().map(|ex| ExactForm {
            numerators: RationalMatrix::from_fn(m, n, |i, j| {
                let v = ex.numerators[(row_perm[i], col_perm[j])].clone();
                if row_signs[i] * col_signs[j] < 0 {
                    -v
                } else {
                    v
                }
            }),
            radicand: ex.radicand.clone(),
        });
        let mut out = RocnMatrix::new(h, DEFAULT_TOL)?;
        out.exact = exact;
        Ok(out)
    }
}

/// Residuals of the ROCN conditions.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationReport {
    pub rows: usize,
    pub cols: usize,
    /// `max_{i != k} |sum_j h_ij h_kj|`
    pub row_orthogonality_residual: f64,
    /// `max_j |sum_i h_ij^2 - 1|`
    pub column_norm_residual: f64,
    pub tolerance: f64,
    pub is_rocn: bool,
    pub is_platonic: bool,
    pub row_norms_squared: Vec<f64>,
}

pub fn validate_rocn(h: &RealMatrix, tol: f64) -> Result<ValidationReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (m, n) = (h.rows(), h.cols());
    if m == 0 || n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    if m > n {
        return Err(Error::TooManyRows { rows: m, cols: n });
    }
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    if let Some(i) = (0..m).find(|&i| h.row(i).iter().all(|&x| x == 0.0)) {
        return Err(Error::ZeroRow(i));
    }

    let mut row_res = 0.0f64;
    for i in 0..m {
        for k in i + 1..m {
            let dot: f64 = h.row(i).iter().zip(h.row(k)).map(|(a, b)| a * b).sum();
            row_res = row_res.max(dot.abs());
        }
    }
    let col_res = (0..n)
        .map(|j| ((0..m).map(|i| h[(i, j)] * h[(i, j)]).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let norms: Vec<f64> = (0..m).map(|i| h.row(i).iter().map(|x| x * x).sum()).collect();
    let is_rocn = row_res <= tol && col_res <= tol;
    let is_platonic = is_rocn && platonic_norms(&norms, n, tol);

    Ok(ValidationReport {
        rows: m,
        cols: n,
        row_orthogonality_residual: row_res,
        column_norm_residual: col_res,
        tolerance: tol,
        is_rocn,
        is_platonic,
        row_norms_squared: norms,
    })
}

fn platonic_norms(norms: &[f64], n: usize, tol: f64) -> bool {
    let target = n as f64 / norms.len() as f64;
    norms.iter().all(|h2| (h2 - target).abs() <= tol)
}

/// True when every row has squared norm `n/m`, i.e. `h` is semi-orthogonal up
/// to the factor `sqrt(n/m)`.
///
/// The printed form of this condition in some sources reads `m/n`; only `n/m`
/// is compatible with column normalization (total mass `n` spread over `m`
/// rows).
pub fn is_platonic(h: &RocnMatrix, tol: f64) -> bool {
    platonic_norms(h.row_norms_squared(), h.n(), tol)
}

/// Deletes `removed_rows` from a Hadamard matrix and rescales by
/// `1/sqrt(remaining)`.
pub fn from_truncated_hadamard(had: &HadamardMatrix, removed_rows: &[usize]) -> Result<RocnMatrix> {
    let order = had.order();
    if let Some(&bad) = removed_rows.iter().find(|&&r| r >= order) {
        return Err(Error::InvalidArgument(format!(
            "row {bad} out of range for order {order}"
        )));
    }
    let kept: Vec<usize> = (0..order).filter(|r| !removed_rows.contains(r)).collect();
    if kept.is_empty() {
        return Err(Error::InvalidArgument("cannot remove every row".into()));
    }
    let m = kept.len();
    let numerators = RationalMatrix::from_fn(m, order, |i, j| {
        BigRational::from_integer(BigInt::from(had.entry(kept[i], j)))
    });
    RocnMatrix::from_exact(ExactForm {
        numerators,
        radicand: BigRational::from_integer(BigInt::from(m)),
    })
}

/// Builds an ROCN matrix with prescribed squared row norms as `h = S W`, where
/// `S = [diag(H_1..H_m) | 0]` and `W` is orthogonal with
/// `sum_i H_i^2 W_ij^2 = 1` for every column.
///
/// `W` is assembled from at most `n - 1` Givens rotations: a carried index is
/// repeatedly paired with an untouched index lying on the other side of 1 and
/// rotated so that the untouched one lands exactly on 1 (constructive
/// Schur-Horn for the all-ones diagonal).
pub fn synthesize_from_row_norms(row_norms_sq: &[f64], n: usize) -> Result<RocnMatrix> {
    let m = row_norms_sq.len();
    if m == 0 {
        return Err(Error::InvalidRowNorms("no rows given".into()));
    }
    if m > n {
        return Err(Error::TooManyRows { rows: m, cols: n });
    }
    if let Some((i, v)) = row_norms_sq
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v > 0.0))
    {
        return Err(Error::InvalidRowNorms(format!(
            "squared norm {v} of row {i} is not positive"
        )));
    }
    let total: f64 = row_norms_sq.iter().sum();
    if (total - n as f64).abs() > MASS_TOL {
        return Err(Error::InvalidRowNorms(format!(
            "squared norms sum to {total}, expected n = {n}"
        )));
    }

    let mut lambda = vec![0.0; n];
    lambda[..m].copy_from_slice(row_norms_sq);
    let w = horn_rotation(&lambda);
    let h = RealMatrix::from_fn(m, n, |i, j| row_norms_sq[i].sqrt() * w[(i, j)]);
    RocnMatrix::new(h, 1e-9)
}

/// Orthogonal `W` with `diag(W^T diag(lambda) W) = 1`, for `lambda >= 0`
/// summing to its length.
fn horn_rotation(lambda: &[f64]) -> RealMatrix {
    const EPS: f64 = 1e-14;
    let n = lambda.len();
    let mut w = RealMatrix::identity(n);
    let mut diag = lambda.to_vec();
    let mut untouched: Vec<usize> = (1..n).collect();
    let mut carry = 0;

    while !untouched.is_empty() {
        let p = diag[carry];
        if (p - 1.0).abs() <= EPS {
            carry = untouched.remove(0);
            continue;
        }
        // The remaining mass averages to 1, so a partner on the other side
        // always exists.
        let pos = untouched
            .iter()
            .position(|&k| (diag[k] - 1.0) * (p - 1.0) <= 0.0)
            .unwrap_or(0);
        let k = untouched.remove(pos);
        let q = diag[k];
        if (q - 1.0).abs() <= EPS {
            continue;
        }
        let c2 = ((1.0 - p) / (q - p)).clamp(0.0, 1.0);
        let (c, s) = (c2.sqrt(), (1.0 - c2).sqrt());
        for row in 0..n {
            let wk = w[(row, k)];
            let wc = w[(row, carry)];
            w[(row, k)] = c * wk + s * wc;
            w[(row, carry)] = -s * wk + c * wc;
        }
        diag[k] = 1.0;
        diag[carry] = p + q - 1.0;
    }
    w
}

/// One parsed matrix entry.
#[derive(Clone, Debug, PartialEq)]
enum Entry {
    Decimal(f64),
    /// `value / sqrt(radicand)`; radicand 1 for plain fractions.
    Exact { value: BigRational, radicand: BigInt },
}

impl Entry {
    fn to_f64(&self) -> f64 {
        match self {
            Entry::Decimal(x) => *x,
            Entry::Exact { value, radicand } => {
                ratio_to_f64(value) / radicand.to_f64().unwrap_or(f64::NAN).sqrt()
            }
        }
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    s.trim().parse::<BigInt>().ok()
}

fn parse_entry(tok: &str) -> Option<Entry> {
    let (sign, body) = match tok.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, tok.strip_prefix('+').unwrap_or(tok)),
    };
    let apply = |v: BigRational| if sign < 0 { -v } else { v };

    if let Some((num, den)) = body.split_once('/') {
        let num = parse_int(num)?;
        if let Some(inner) = den.strip_prefix("sqrt(").and_then(|d| d.strip_suffix(')')) {
            let radicand = parse_int(inner)?;
            if radicand <= BigInt::zero() {
                return None;
            }
            return Some(Entry::Exact {
                value: apply(BigRational::from_integer(num)),
                radicand,
            });
        }
        let den = parse_int(den)?;
        if den.is_zero() {
            return None;
        }
        return Some(Entry::Exact {
            value: apply(BigRational::new(num, den)),
            radicand: BigInt::one(),
        });
    }
    if let Some(i) = parse_int(body) {
        return Some(Entry::Exact {
            value: apply(BigRational::from_integer(i)),
            radicand: BigInt::one(),
        });
    }
    let x: f64 = body.parse().ok()?;
    x.is_finite().then_some(Entry::Decimal(f64::from(sign) * x))
}

/// A matrix read from the text format, with its exact form when every entry
/// is exact and all irrational entries share one radicand.
#[derive(Clone, Debug)]
pub struct ParsedMatrix {
    pub matrix: RealMatrix,
    pub exact: Option<ExactForm>,
}

impl ParsedMatrix {
    pub fn into_rocn(self, tol: f64) -> Result<RocnMatrix> {
        match self.exact {
            Some(ex) if ex.is_exactly_rocn() => RocnMatrix::from_exact(ex),
            _ => RocnMatrix::new(self.matrix, tol),
        }
    }
}

/// Parses the matrix text format: a header line `m n`, then `m` rows of
/// whitespace-separated entries. Entries are decimals, integers, `p/q` or
/// `p/sqrt(q)`. Blank lines and `#` comments are ignored.
pub fn parse_matrix_text(text: &str) -> Result<ParsedMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing 'm n' header".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse {
            line: hline,
            message: format!("bad header '{header}'"),
        })?;
    let [m, n] = dims[..] else {
        return Err(Error::Parse {
            line: hline,
            message: format!("header must be 'm n', got '{header}'"),
        });
    };

    let mut entries = Vec::with_capacity(m * n);
    for _ in 0..m {
        let (lno, line) = lines.next().ok_or(Error::Parse {
            line: hline,
            message: format!("expected {m} rows"),
        })?;
        let row: Vec<Entry> = line
            .split_whitespace()
            .map(|t| {
                parse_entry(t).ok_or(Error::Parse {
                    line: lno,
                    message: format!("cannot parse entry '{t}'"),
                })
            })
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::Parse {
                line: lno,
                message: format!("expected {n} entries, found {}", row.len()),
            });
        }
        entries.extend(row);
    }
    if let Some((lno, _)) = lines.next() {
        return Err(Error::Parse {
            line: lno,
            message: format!("unexpected content after {m} rows"),
        });
    }

    let matrix = RealMatrix::from_vec(m, n, entries.iter().map(Entry::to_f64).collect())?;
    Ok(ParsedMatrix {
        exact: exact_form(&entries, m, n),
        matrix,
    })
}

fn exact_form(entries: &[Entry], m: usize, n: usize) -> Option<ExactForm> {
    let mut radicand: Option<BigInt> = None;
    let mut values = Vec::with_capacity(entries.len());
    for e in entries {
        let Entry::Exact { value, radicand: r } = e else {
            return None;
        };
        if !value.is_zero() && !r.is_one() {
            match &radicand {
                None => radicand = Some(r.clone()),
                Some(q) if q == r => {}
                Some(_) => return None,
            }
        }
        values.push((value.clone(), r.is_one()));
    }
    let radicand = radicand.unwrap_or_else(BigInt::one);
    // Plain rationals can only join a common irrational radicand when they are
    // zero; otherwise the numerator would be irrational.
    if !radicand.is_one() && values.iter().any(|(v, plain)| *plain && !v.is_zero()) {
        return None;
    }
    let numerators = RationalMatrix::from_vec(m, n, values.into_iter().map(|(v, _)| v).collect()).ok()?;
    Some(ExactForm {
        numerators,
        radicand: BigRational::from_integer(radicand),
    })
}

/// Writes the text format. Exact entries with integer numerators and an
/// integer radicand are written as `p/sqrt(q)` (or `p/q`, `p`); anything else
/// falls back to 17 significant digits.
pub fn format_matrix_text(h: &RocnMatrix) -> String {
    let (m, n) = (h.m(), h.n());
    let mut out = format!("{m} {n}\n");
    for i in 0..m {
        let row: Vec<String> = (0..n).map(|j| format_entry(h, i, j)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn format_entry(h: &RocnMatrix, i: usize, j: usize) -> String {
    if let Some(ex) = h.exact() {
        let v = &ex.numerators[(i, j)];
        if ex.radicand.is_one() {
            return if v.is_integer() {
                v.numer().to_string()
            } else {
                format!("{}/{}", v.numer(), v.denom())
            };
        }
        if ex.radicand.is_integer() && v.is_integer() {
            return format!("{}/sqrt({})", v.numer(), ex.radicand.numer());
        }
    }
    format!("{:.17e}", h.get(i, j))
}
