#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rocn_core::hadamard::{sylvester, HadamardMatrix};
use rocn_core::numerics::{DenseMatrix, C64};
use rocn_core::rocn::{from_truncated_hadamard, synthesize_from_row_norms, RocnMatrix, DEFAULT_TOL};

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn chsh() -> RocnMatrix {
    from_truncated_hadamard(&sylvester(1), &[]).unwrap()
}

/// The elegant-inequality matrix in its usual row order, kept exact.
pub fn ebi() -> RocnMatrix {
    let text = "3 4\n\
        1/sqrt(3) 1/sqrt(3) -1/sqrt(3) -1/sqrt(3)\n\
        1/sqrt(3) -1/sqrt(3) 1/sqrt(3) -1/sqrt(3)\n\
        1/sqrt(3) -1/sqrt(3) -1/sqrt(3) 1/sqrt(3)\n";
    rocn_core::parse_matrix_text(text).unwrap().into_rocn(DEFAULT_TOL).unwrap()
}

pub fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn random_signs(rng: &mut ChaCha8Rng, n: usize) -> Vec<i8> {
    (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect()
}

/// Random permutation and sign flips of rows and columns.
pub fn random_monomial(rng: &mut ChaCha8Rng, h: &RocnMatrix) -> RocnMatrix {
    let (m, n) = (h.m(), h.n());
    let (rp, cp) = (random_perm(rng, m), random_perm(rng, n));
    let (rs, cs) = (random_signs(rng, m), random_signs(rng, n));
    h.transform(&rp, &cp, &rs, &cs).unwrap()
}

pub fn random_hadamard_monomial(rng: &mut ChaCha8Rng, h: &HadamardMatrix) -> HadamardMatrix {
    let n = h.order();
    h.transform(&random_perm(rng, n), &random_perm(rng, n), &random_signs(rng, n), &random_signs(rng, n))
        .unwrap()
}

/// Positive squared row norms summing to `n`.
pub fn random_row_norms(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut norms: Vec<f64> = raw.iter().map(|x| x * n as f64 / total).collect();
    // Put the rounding slack on the last entry so the sum is n to the ulp.
    let rest: f64 = norms[..m - 1].iter().sum();
    norms[m - 1] = n as f64 - rest;
    norms
}

/// Horn-synthesized ROCN matrix with random shape and norms, then scrambled.
pub fn random_rocn(rng: &mut ChaCha8Rng, max_m: usize, max_n: usize) -> RocnMatrix {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(m..=max_n);
    let norms = random_row_norms(rng, m, n);
    let h = synthesize_from_row_norms(&norms, n).unwrap();
    random_monomial(rng, &h)
}

/// Truncation of a Sylvester matrix keeping a random subset of rows.
pub fn random_truncated_hadamard(rng: &mut ChaCha8Rng, max_order_log: u32) -> RocnMatrix {
    let k = rng.gen_range(1..=max_order_log);
    let had = sylvester(k);
    let n = had.order();
    let keep = rng.gen_range(1..=n);
    let perm = random_perm(rng, n);
    let removed: Vec<usize> = perm[keep..].to_vec();
    let h = from_truncated_hadamard(&had, &removed).unwrap();
    random_monomial(rng, &h)
}

pub fn random_complex_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn random_state(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
    let v = random_complex_vector(rng, d * d);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_vec(rows, cols, random_complex_vector(rng, rows * cols)).unwrap()
}

/// `I - 2P` with `P` the projector onto a random subspace.
pub fn random_involution(rng: &mut ChaCha8Rng, d: usize) -> DenseMatrix {
    let k = rng.gen_range(0..=d);
    let mut basis: Vec<Vec<C64>> = Vec::new();
    while basis.len() < k {
        let mut v = random_complex_vector(rng, d);
        for b in &basis {
            let dot: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    DenseMatrix::from_fn(d, d, |i, j| {
        let p: C64 = basis.iter().map(|b| b[i] * b[j].conj()).sum();
        let delta = if i == j { 1.0 } else { 0.0 };
        C64::new(delta, 0.0) - p * 2.0
    })
}

/// `max_{a, b} sum_ij a_i h_ij b_j` by enumerating both sign vectors.
pub fn naive_double_max(h: &RocnMatrix) -> f64 {
    let (m, n) = (h.m(), h.n());
    let mut best = f64::NEG_INFINITY;
    for am in 0u32..1 << m {
        for bm in 0u32..1 << n {
            let mut v = 0.0;
            for i in 0..m {
                let a = if am >> i & 1 == 1 { -1.0 } else { 1.0 };
                for j in 0..n {
                    let b = if bm >> j & 1 == 1 { -1.0 } else { 1.0 };
                    v += a * h.get(i, j) * b;
                }
            }
            best = best.max(v);
        }
    }
    best
}

/// Integer version of [`naive_double_max`].
pub fn naive_double_max_int(rows: &[Vec<i64>]) -> i64 {
    let m = rows.len();
    let n = rows[0].len();
    let mut best = i64::MIN;
    for am in 0u32..1 << m {
        for bm in 0u32..1 << n {
            let mut v = 0;
            for (i, row) in rows.iter().enumerate() {
                let a = if am >> i & 1 == 1 { -1 } else { 1 };
                for (j, &x) in row.iter().enumerate() {
                    let b = if bm >> j & 1 == 1 { -1 } else { 1 };
                    v += a * x * b;
                }
            }
            best = best.max(v);
        }
    }
    best
}

/// Integer numerators of a Hadamard-derived ROCN matrix (entries `+-1`).
pub fn sign_rows(h: &RocnMatrix) -> Vec<Vec<i64>> {
    (0..h.m())
        .map(|i| (0..h.n()).map(|j| if h.get(i, j) < 0.0 { -1 } else { 1 }).collect())
        .collect()
}
