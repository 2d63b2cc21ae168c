//! Rank criterion for self-testing and the counterexample family used when it
//! fails.
//!
//! `M` has one row per Bob setting `j` and one column per Alice pair `i < k`
//! (lexicographic), with entries `h_ij h_kj`. Full column rank forces Alice's
//! observables to anticommute pairwise; otherwise a null vector `s` deforms the
//! Clifford Gram matrix to `I + alpha S` without changing the Bell value.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::clifford::{jw_generators, MAX_GENERATORS};
use crate::error::{Error, Result};
use crate::numerics::{
    ratio_to_f64, rank_exact_with_pivots, DenseMatrix, RationalMatrix, RealMatrix,
};
use crate::rocn::RocnMatrix;

/// Relative singular-value threshold of the numeric rank.
pub const NUMERIC_RANK_TOL: f64 = 1e-10;

/// Smallest eigenvalue of `G(alpha)` accepted as positive definite.
const PD_TOL: f64 = 1e-12;

/// Alice pairs `(i, k)`, `i < k`, in column order of `M`.
pub fn pair_index(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (i + 1..m).map(move |k| (i, k))).collect()
}

/// `M_{j,(i,k)} = h_ij h_kj`.
pub fn build_m(h: &RocnMatrix) -> RealMatrix {
    let pairs = pair_index(h.m());
    RealMatrix::from_fn(h.n(), pairs.len(), |j, p| {
        let (i, k) = pairs[p];
        h.get(i, j) * h.get(k, j)
    })
}

/// `M` built from the exact numerators of `h`; it differs from [`build_m`] by
/// the positive factor `1/radicand`, which changes neither rank nor kernel.
pub fn build_m_exact(h: &RocnMatrix) -> Option<RationalMatrix> {
    let exact = h.exact()?;
    let r = &exact.numerators;
    let pairs = pair_index(h.m());
    Some(RationalMatrix::from_fn(h.n(), pairs.len(), |j, p| {
        let (i, k) = pairs[p];
        &r[(i, j)] * &r[(k, j)]
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    SelfTests,
    SelfTestsUpToTwin,
    Fails,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum RankMode {
    Exact,
    Numeric,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SelfTestReport {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "M")]
    pub matrix: Vec<Vec<f64>>,
    pub rank: usize,
    pub required_rank: usize,
    pub full_column_rank: bool,
    pub odd_m: bool,
    pub verdict: Verdict,
    pub rank_mode: RankMode,
    /// Pivot columns of the exact elimination (rank certificate).
    pub pivots: Option<Vec<usize>>,
    /// `n >= m(m-1)/2`, necessary for full column rank.
    pub enough_settings: bool,
}

/// Rank of `M` (exact when possible) and the resulting verdict.
pub fn selftest_verdict(h: &RocnMatrix) -> Result<SelfTestReport> {
    let (m, n) = (h.m(), h.n());
    let required_rank = m * (m - 1) / 2;
    let real = build_m(h);
    let (rank, rank_mode, pivots) = match build_m_exact(h) {
        Some(exact) => {
            let pivots = rank_exact_with_pivots(&exact);
            (pivots.len(), RankMode::Exact, Some(pivots))
        }
        None if required_rank == 0 => (0, RankMode::Numeric, None),
        None => (real.rank_numeric(NUMERIC_RANK_TOL)?, RankMode::Numeric, None),
    };
    let full_column_rank = rank == required_rank;
    let odd_m = m % 2 == 1;
    let verdict = match (full_column_rank, odd_m) {
        (false, _) => Verdict::Fails,
        (true, true) => Verdict::SelfTestsUpToTwin,
        (true, false) => Verdict::SelfTests,
    };
    Ok(SelfTestReport {
        m,
        n,
        matrix: real.to_rows(),
        rank,
        required_rank,
        full_column_rank,
        odd_m,
        verdict,
        rank_mode,
        pivots,
        enough_settings: n >= required_rank,
    })
}

/// Basis null vector of the first free column of the reduced row echelon
/// form, computed in floating point with partial pivoting.
fn numeric_first_null_vector(a: &RealMatrix, tol: f64) -> Option<Vec<f64>> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = a.to_rows();
    let scale = a.as_slice().iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(1.0);
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        if row == rows {
            break;
        }
        let best = (row..rows).max_by(|&x, &y| r[x][c].abs().total_cmp(&r[y][c].abs()))?;
        if r[best][c].abs() <= tol * scale {
            continue;
        }
        r.swap(row, best);
        let p = r[row][c];
        r[row].iter_mut().for_each(|x| *x /= p);
        for other in 0..rows {
            if other != row && r[other][c] != 0.0 {
                let f = r[other][c];
                let pivot_row = r[row].clone();
                for (x, p) in r[other].iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![0.0; cols];
    v[free] = 1.0;
    for (pr, &pc) in pivots.iter().enumerate() {
        if pc < free {
            v[pc] = -r[pr][free];
        }
    }
    Some(v)
}

/// One-parameter family of strategies reaching the quantum bound whose Alice
/// Gram matrix `I + alpha S` is not the Clifford one.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CounterexampleFamily {
    pub m: usize,
    pub n: usize,
    /// Unit null vector of `M`, indexed like the pairs.
    pub null_vector: Vec<f64>,
    /// Exact null vector before normalization, as `p/q` strings.
    pub exact_null_vector: Option<Vec<String>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<f64>>,
    pub s_norm: f64,
    pub alpha_max: f64,
    #[serde(skip)]
    h: RocnMatrix,
    #[serde(skip)]
    generators: Vec<DenseMatrix>,
}

/// Observables and diagnostics of the family at one parameter value.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyEvaluation {
    pub alpha: f64,
    pub gram: Vec<Vec<f64>>,
    /// Max over `j` of `|sum_{i<k} h_ij h_kj {A_i, A_k}|` entrywise.
    pub linear_system_residual: f64,
    /// Max `|G(alpha) - I - alpha S|`.
    pub gram_deviation: f64,
    /// Max `|{A_i, A_k} - 2 G_ik I|`.
    pub anticommutator_residual: f64,
    /// Max `|A_i^2 - I|`.
    pub involution_residual: f64,
    pub max_off_diagonal: f64,
    #[serde(skip)]
    pub observables: Vec<DenseMatrix>,
}

impl CounterexampleFamily {
    /// `G(alpha) = I + alpha S`.
    pub fn gram_at(&self, alpha: f64) -> RealMatrix {
        RealMatrix::from_fn(self.m, self.m, |i, k| {
            if i == k {
                1.0
            } else {
                alpha * self.s[i][k]
            }
        })
    }

    /// `V` with `V V^T = G(alpha)`; its rows are unit vectors.
    pub fn factor_at(&self, alpha: f64) -> Result<RealMatrix> {
        if !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha must be finite, got {alpha}")));
        }
        let (vals, vecs) = self.gram_at(alpha).symmetric_eigen()?;
        let smallest = vals[0];
        if smallest < PD_TOL {
            return Err(Error::NotPositiveDefinite(smallest));
        }
        let roots: Vec<f64> = vals.iter().map(|v| v.sqrt()).collect();
        Ok(RealMatrix::from_fn(self.m, self.m, |i, j| vecs[(i, j)] * roots[j]))
    }

    /// `A_i(alpha) = sum_j V_ij A_j` over the Clifford generators.
    pub fn observables_at(&self, alpha: f64) -> Result<Vec<DenseMatrix>> {
        let v = self.factor_at(alpha)?;
        let d = self.generators[0].rows();
        Ok((0..self.m)
            .map(|i| {
                let mut a = DenseMatrix::zeros(d, d);
                for (j, g) in self.generators.iter().enumerate() {
                    a = &a + &g.scale_real(v[(i, j)]);
                }
                a
            })
            .collect())
    }

    pub fn evaluate(&self, alpha: f64) -> Result<FamilyEvaluation> {
        let obs = self.observables_at(alpha)?;
        let gram = self.gram_at(alpha);
        let d = obs[0].rows();
        let id = DenseMatrix::identity(d);
        let pairs = pair_index(self.m);

        let anti: Vec<DenseMatrix> = pairs.iter().map(|&(i, k)| obs[i].anticommutator(&obs[k])).collect();
        let mut linear_system_residual = 0.0f64;
        for j in 0..self.n {
            let mut acc = DenseMatrix::zeros(d, d);
            for (p, &(i, k)) in pairs.iter().enumerate() {
                acc = &acc + &anti[p].scale_real(self.h.get(i, j) * self.h.get(k, j));
            }
            linear_system_residual = linear_system_residual.max(acc.max_abs());
        }

        let mut anticommutator_residual = 0.0f64;
        let mut involution_residual = 0.0f64;
        for i in 0..self.m {
            involution_residual = involution_residual.max((&obs[i] * &obs[i]).max_abs_diff(&id));
            for k in i..self.m {
                let target = id.scale_real(2.0 * gram[(i, k)]);
                anticommutator_residual =
                    anticommutator_residual.max(obs[i].anticommutator(&obs[k]).max_abs_diff(&target));
            }
        }

        let mut gram_deviation = 0.0f64;
        let mut max_off_diagonal = 0.0f64;
        for i in 0..self.m {
            for k in 0..self.m {
                let expected = if i == k { 1.0 } else { alpha * self.s[i][k] };
                gram_deviation = gram_deviation.max((gram[(i, k)] - expected).abs());
                if i != k {
                    max_off_diagonal = max_off_diagonal.max(gram[(i, k)].abs());
                }
            }
        }

        Ok(FamilyEvaluation {
            alpha,
            gram: gram.to_rows(),
            linear_system_residual,
            gram_deviation,
            anticommutator_residual,
            involution_residual,
            max_off_diagonal,
            observables: obs,
        })
    }
}

/// Builds the family from the first null vector of `M`.
pub fn counterexample_family(h: &RocnMatrix) -> Result<CounterexampleFamily> {
    let (m, n) = (h.m(), h.n());
    if m > MAX_GENERATORS {
        return Err(Error::InvalidArgument(format!(
            "{m} generators exceed the limit of {MAX_GENERATORS}"
        )));
    }
    let (raw, exact_null_vector): (Vec<f64>, Option<Vec<String>>) = match build_m_exact(h) {
        Some(exact) => {
            let v: Vec<BigRational> = exact.first_null_vector().ok_or(Error::FullColumnRank)?;
            debug_assert!(v.iter().any(|x| !x.is_zero()));
            (
                v.iter().map(ratio_to_f64).collect(),
                Some(v.iter().map(|x| x.to_string()).collect()),
            )
        }
        None => {
            let report = selftest_verdict(h)?;
            if report.full_column_rank {
                return Err(Error::FullColumnRank);
            }
            let v = numeric_first_null_vector(&build_m(h), NUMERIC_RANK_TOL).ok_or(Error::FullColumnRank)?;
            (v, None)
        }
    };
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    let null_vector: Vec<f64> = raw.iter().map(|x| x / norm).collect();

    let mut s = vec![vec![0.0; m]; m];
    for (p, &(i, k)) in pair_index(m).iter().enumerate() {
        s[i][k] = null_vector[p];
        s[k][i] = null_vector[p];
    }
    let (eig, _) = RealMatrix::from_rows(&s)?.symmetric_eigen()?;
    let s_norm = eig.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));

    Ok(CounterexampleFamily {
        m,
        n,
        null_vector,
        exact_null_vector,
        s,
        s_norm,
        alpha_max: 1.0 / s_norm,
        h: h.clone(),
        generators: jw_generators(m)?,
    })
}
