//! Jordan-Wigner Clifford generators, reference strategies and their twins.
//!
//! Bipartite vectors use the index `i * d + k` (Alice `i`, Bob `k`), so a state
//! reshapes to a `d x d` matrix `Psi` and `(A (x) B) psi` becomes `A Psi B^T`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    hermitian_eigenvalues, kron, kron_all, min_eigenvalue_hermitian, partial_transpose_last_qubit,
    DenseMatrix, C64,
};
use crate::rocn::RocnMatrix;

/// Largest generator count for reference strategies (d = 64).
pub const MAX_GENERATORS: usize = 13;
/// Largest local dimension for which the full SOS eigenvalue check runs.
pub const MAX_SOS_DIM: usize = 16;

const NORM_TOL: f64 = 1e-12;
const INVOLUTION_TOL: f64 = 1e-10;
const IMAG_TOL: f64 = 1e-8;
const TWIN_TOL: f64 = 1e-12;

pub fn identity2() -> DenseMatrix {
    DenseMatrix::identity(2)
}

pub fn pauli_x() -> DenseMatrix {
    DenseMatrix::from_fn(2, 2, |i, j| C64::new(if i != j { 1.0 } else { 0.0 }, 0.0))
}

pub fn pauli_y() -> DenseMatrix {
    let mut y = DenseMatrix::zeros(2, 2);
    y[(0, 1)] = C64::new(0.0, -1.0);
    y[(1, 0)] = C64::new(0.0, 1.0);
    y
}

pub fn pauli_z() -> DenseMatrix {
    let mut z = DenseMatrix::zeros(2, 2);
    z[(0, 0)] = C64::new(1.0, 0.0);
    z[(1, 1)] = C64::new(-1.0, 0.0);
    z
}

/// Number of qubits `floor(m / 2)` carrying `m` generators.
pub fn qubits_for(m: usize) -> usize {
    m / 2
}

/// Clifford generators on `d = 2^(m/2)`: for `i <= 2r` a string of `Y`s
/// followed by `Z` (odd `i`) or `X` (even `i`), padded with identities; for odd
/// `m` the last generator is `Y^(x)r`.
pub fn jw_generators(m: usize) -> Result<Vec<DenseMatrix>> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one generator".into()));
    }
    let r = qubits_for(m);
    let (x, y, z, id) = (pauli_x(), pauli_y(), pauli_z(), identity2());
    let mut out = Vec::with_capacity(m);
    for i in 1..=2 * r {
        let ys = (i - 1) / 2;
        let middle = if i % 2 == 1 { &z } else { &x };
        let factors = std::iter::repeat_n(&y, ys)
            .chain(std::iter::once(middle))
            .chain(std::iter::repeat_n(&id, r - ys - 1));
        out.push(kron_all(factors));
    }
    if m % 2 == 1 {
        out.push(kron_all(std::iter::repeat_n(&y, r)));
    }
    Ok(out)
}

/// `(1/sqrt d) sum_i |i>|i>`.
pub fn max_entangled_state(d: usize) -> Result<Vec<C64>> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut psi = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        psi[i * d + i] = amp;
    }
    Ok(psi)
}

/// Largest entrywise deviation from `O = O^dagger` and `O^2 = I`.
pub fn involution_residual(o: &DenseMatrix) -> f64 {
    let sq = o * o;
    o.hermitian_residual()
        .max(sq.max_abs_diff(&DenseMatrix::identity(o.rows())))
}

/// Shared pure state with binary observables for both parties.
#[derive(Clone, Debug)]
pub struct Strategy {
    d: usize,
    state: Vec<C64>,
    alice: Vec<DenseMatrix>,
    bob: Vec<DenseMatrix>,
}

impl Strategy {
    /// Checks normalization, dimensions and that every observable is a
    /// Hermitian involution.
    pub fn new(state: Vec<C64>, alice: Vec<DenseMatrix>, bob: Vec<DenseMatrix>) -> Result<Self> {
        let d = (state.len() as f64).sqrt().round() as usize;
        if d == 0 || d * d != state.len() {
            return Err(Error::Dimension(format!(
                "state length {} is not a square",
                state.len()
            )));
        }
        let norm = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!("state has norm {norm}")));
        }
        for (party, obs) in [("Alice", &alice), ("Bob", &bob)] {
            for (index, o) in obs.iter().enumerate() {
                if o.rows() != d || o.cols() != d {
                    return Err(Error::Dimension(format!(
                        "{party} observable {index} is {}x{}, expected {d}x{d}",
                        o.rows(),
                        o.cols()
                    )));
                }
                let residual = involution_residual(o);
                if residual.is_nan() || residual > INVOLUTION_TOL {
                    return Err(Error::NotInvolution { party, index, residual });
                }
            }
        }
        Ok(Strategy { d, state, alice, bob })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn state(&self) -> &[C64] {
        &self.state
    }

    pub fn alice(&self) -> &[DenseMatrix] {
        &self.alice
    }

    pub fn bob(&self) -> &[DenseMatrix] {
        &self.bob
    }

    fn state_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_vec(self.d, self.d, self.state.clone()).expect("square state")
    }
}

/// Bob's observables `B_j = sum_i h_ij A_i^T`.
fn bob_from_alice(h: &RocnMatrix, alice: &[DenseMatrix]) -> Vec<DenseMatrix> {
    let d = alice[0].rows();
    let transposed: Vec<DenseMatrix> = alice.iter().map(|a| a.transpose()).collect();
    (0..h.n())
        .map(|j| {
            let mut b = DenseMatrix::zeros(d, d);
            for (i, at) in transposed.iter().enumerate() {
                b = &b + &at.scale_real(h.get(i, j));
            }
            b
        })
        .collect()
}

/// Maximally entangled state with Jordan-Wigner observables for Alice and
/// `B_j = sum_i h_ij A_i^T` for Bob.
pub fn reference_strategy(h: &RocnMatrix) -> Result<Strategy> {
    let m = h.m();
    if m > MAX_GENERATORS {
        return Err(Error::InvalidArgument(format!(
            "{m} generators exceed the limit of {MAX_GENERATORS}"
        )));
    }
    let alice = jw_generators(m)?;
    let bob = bob_from_alice(h, &alice);
    Strategy::new(max_entangled_state(alice[0].rows())?, alice, bob)
}

/// `<psi| A (x) B |psi> = Tr(Psi^dagger A Psi B^T)`.
fn expectation(psi: &DenseMatrix, psi_dag: &DenseMatrix, a: &DenseMatrix, b: &DenseMatrix) -> C64 {
    let left = &(psi_dag * a) * psi;
    let bt = b.transpose();
    let d = psi.rows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for k in 0..d {
            acc += left[(i, k)] * bt[(k, i)];
        }
    }
    acc
}

/// Correlators `<A_i (x) B_j>` as an `m x n` row-major table.
pub fn correlation_matrix(s: &Strategy) -> Result<Vec<Vec<f64>>> {
    let psi = s.state_matrix();
    let psi_dag = psi.dagger();
    s.alice
        .iter()
        .map(|a| {
            s.bob
                .iter()
                .map(|b| {
                    let e = expectation(&psi, &psi_dag, a, b);
                    if e.im.abs() > IMAG_TOL {
                        Err(Error::ComplexExpectation(e.im))
                    } else {
                        Ok(e.re)
                    }
                })
                .collect()
        })
        .collect()
}

fn check_shapes(h: &RocnMatrix, s: &Strategy) -> Result<()> {
    if s.alice.len() != h.m() || s.bob.len() != h.n() {
        return Err(Error::Dimension(format!(
            "strategy has {}x{} observables, functional is {}x{}",
            s.alice.len(),
            s.bob.len(),
            h.m(),
            h.n()
        )));
    }
    Ok(())
}

/// `sum_ij h_ij <A_i B_j>`.
pub fn bell_value(h: &RocnMatrix, s: &Strategy) -> Result<f64> {
    check_shapes(h, s)?;
    let corr = correlation_matrix(s)?;
    Ok((0..h.m())
        .map(|i| (0..h.n()).map(|j| h.get(i, j) * corr[i][j]).sum::<f64>())
        .sum())
}

/// The Bell operator `sum_ij h_ij A_i (x) B_j` on the joint space.
pub fn bell_operator(h: &RocnMatrix, s: &Strategy) -> Result<DenseMatrix> {
    check_shapes(h, s)?;
    let d = s.d;
    let mut op = DenseMatrix::zeros(d * d, d * d);
    for (j, b) in s.bob.iter().enumerate() {
        let c = combined_alice(h, s, j);
        op = &op + &kron(&c, b);
    }
    Ok(op)
}

fn combined_alice(h: &RocnMatrix, s: &Strategy, j: usize) -> DenseMatrix {
    let mut c = DenseMatrix::zeros(s.d, s.d);
    for (i, a) in s.alice.iter().enumerate() {
        c = &c + &a.scale_real(h.get(i, j));
    }
    c
}

/// Largest `|{A_i, A_k} - 2 delta_ik I|` over a set of operators.
pub fn anticommutator_residual(ops: &[DenseMatrix]) -> f64 {
    let Some(first) = ops.first() else { return 0.0 };
    let two = DenseMatrix::identity(first.rows()).scale_real(2.0);
    let zero = DenseMatrix::zeros(first.rows(), first.cols());
    let mut worst = 0.0f64;
    for i in 0..ops.len() {
        for k in i..ops.len() {
            let ac = ops[i].anticommutator(&ops[k]);
            let target = if i == k { &two } else { &zero };
            worst = worst.max(ac.max_abs_diff(target));
        }
    }
    worst
}

/// Evidence that a strategy reaches the quantum bound.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SaturationReport {
    pub bell_value: f64,
    pub quantum_bound: f64,
    /// `||N_j psi||` with `N_j = I - sum_i h_ij A_i (x) B_j`.
    pub kernel_residuals: Vec<f64>,
    /// Smallest eigenvalue of `n I - B_h`; absent above the SOS size limit.
    pub sos_min_eigenvalue: Option<f64>,
    pub anticommutator_residual: f64,
    pub tolerance: f64,
    pub saturated: bool,
}

/// Kernel residuals, SOS spectrum and anticommutation of a strategy.
pub fn verify_saturation(h: &RocnMatrix, s: &Strategy, tol: f64) -> Result<SaturationReport> {
    check_shapes(h, s)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let psi = s.state_matrix();
    let kernel_residuals = s
        .bob
        .iter()
        .enumerate()
        .map(|(j, b)| {
            let c = combined_alice(h, s, j);
            let image = &(&c * &psi) * &b.transpose();
            (&psi - &image)
                .as_slice()
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect::<Vec<_>>();

    let n = h.n() as f64;
    let sos_min_eigenvalue = if s.d <= MAX_SOS_DIM {
        let op = bell_operator(h, s)?;
        let shifted = &DenseMatrix::identity(s.d * s.d).scale_real(n) - &op;
        Some(min_eigenvalue_hermitian(&shifted)?)
    } else {
        None
    };

    let anticommutator_residual = anticommutator_residual(&s.alice);
    let saturated = kernel_residuals.iter().all(|&r| r <= tol);
    Ok(SaturationReport {
        bell_value: bell_value(h, s)?,
        quantum_bound: n,
        kernel_residuals,
        sos_min_eigenvalue,
        anticommutator_residual,
        tolerance: tol,
        saturated,
    })
}

fn odd_generator_count(m: usize) -> Result<usize> {
    if m.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "twin defined for odd m only (got m = {m})"
        )));
    }
    Ok(qubits_for(m))
}

/// Twin of a reference strategy: the last generator changes sign and Bob is
/// rebuilt from the flipped set. The state is unchanged.
///
/// The result is cross-checked against partial transposition of every
/// observable on the last qubit; a disagreement above `1e-12` is an error.
pub fn twin_strategy(h: &RocnMatrix, s: &Strategy) -> Result<Strategy> {
    check_shapes(h, s)?;
    let r = odd_generator_count(h.m())?;
    if s.d != 1 << r {
        return Err(Error::Dimension(format!(
            "local dimension {} does not match {} generators",
            s.d,
            h.m()
        )));
    }
    let mut alice = s.alice.clone();
    let last = alice.len() - 1;
    alice[last] = -&alice[last];
    let bob = bob_from_alice(h, &alice);

    if r > 0 {
        let worst = s
            .alice
            .iter()
            .zip(&alice)
            .chain(s.bob.iter().zip(&bob))
            .map(|(orig, flipped)| {
                partial_transpose_last_qubit(orig, r).map(|pt| pt.max_abs_diff(flipped))
            })
            .try_fold(0.0f64, |acc, x| x.map(|v| acc.max(v)))?;
        if worst > TWIN_TOL {
            return Err(Error::TwinMismatch(worst));
        }
    }
    Strategy::new(s.state.clone(), alice, bob)
}

/// Every observable of `s` partially transposed on the last qubit.
pub fn partial_transpose_strategy(s: &Strategy) -> Result<Strategy> {
    let r = s.d.trailing_zeros() as usize;
    if s.d != 1 << r || r == 0 {
        return Err(Error::Dimension(format!("local dimension {} is not a qubit register", s.d)));
    }
    let pt = |ops: &[DenseMatrix]| -> Result<Vec<DenseMatrix>> {
        ops.iter().map(|o| partial_transpose_last_qubit(o, r)).collect()
    };
    Strategy::new(s.state.clone(), pt(&s.alice)?, pt(&s.bob)?)
}

/// Outcome of the twin construction for one functional.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TwinReport {
    pub m: usize,
    pub d: usize,
    /// Max entrywise gap between the sign-flip and partial-transpose routes.
    pub route_difference: Option<f64>,
    pub correlation_difference: f64,
    pub twin_bell_value: f64,
    pub last_generator_flipped: bool,
}

/// Builds the twin of the reference strategy and compares correlations.
pub fn twin_report(h: &RocnMatrix) -> Result<TwinReport> {
    let s = reference_strategy(h)?;
    let t = twin_strategy(h, &s)?;
    let route_difference = if s.d > 1 {
        let pt = partial_transpose_strategy(&s)?;
        Some(
            pt.alice
                .iter()
                .zip(&t.alice)
                .chain(pt.bob.iter().zip(&t.bob))
                .map(|(a, b)| a.max_abs_diff(b))
                .fold(0.0, f64::max),
        )
    } else {
        None
    };
    let c0 = correlation_matrix(&s)?;
    let c1 = correlation_matrix(&t)?;
    let correlation_difference = c0
        .iter()
        .flatten()
        .zip(c1.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let last = h.m() - 1;
    Ok(TwinReport {
        m: h.m(),
        d: s.d,
        route_difference,
        correlation_difference,
        twin_bell_value: bell_value(h, &t)?,
        last_generator_flipped: t.alice[last].max_abs_diff(&-&s.alice[last]) == 0.0,
    })
}

/// Dimension of `{P : [P, A_i] = 0 for all i}`.
pub fn commutant_dimension(generators: &[DenseMatrix]) -> Result<usize> {
    let Some(first) = generators.first() else {
        return Err(Error::InvalidArgument("no generators given".into()));
    };
    let d = first.rows();
    if generators.iter().any(|g| g.rows() != d || g.cols() != d) {
        return Err(Error::Dimension("generators must share one square shape".into()));
    }
    // Row-major vec(P A - A P) = (I (x) A^T - A (x) I) vec(P).
    let id = DenseMatrix::identity(d);
    let mut gram = DenseMatrix::zeros(d * d, d * d);
    for a in generators {
        let l = &kron(&id, &a.transpose()) - &kron(a, &id);
        gram = &gram + &(&l.dagger() * &l);
    }
    let eig = hermitian_eigenvalues(&gram)?;
    let scale = eig.last().copied().unwrap_or(0.0).max(1.0);
    Ok(eig.iter().filter(|&&e| e <= 1e-9 * scale).count())
}

/// `I (x) Y (x) I (x) Y ...` on `r` qubits.
pub fn conjugation_unitary(r: usize) -> DenseMatrix {
    let (y, id) = (pauli_y(), identity2());
    kron_all((0..r).map(|q| if q % 2 == 1 { &y } else { &id }))
}

/// Result of the complex-conjugation equivalence test for odd `m`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EquivalenceReport {
    pub m: usize,
    pub r: usize,
    pub r_parity: &'static str,
    pub conjugation_equivalent: bool,
    /// `s_i` with `A_i^* = s_i A_i`.
    pub conjugation_signs: Vec<i8>,
    pub conjugation_sign_residual: f64,
    /// Tensor description of `U_A`, e.g. `I(x)Y(x)I`.
    pub unitary_description: String,
    pub witness_unitary: Option<DenseMatrix>,
    /// Max deviation of `U_A A_i^* U_A^dagger` from its expected target: the
    /// twin generators when `r` is odd, the originals when `r` is even.
    pub residual: f64,
    /// `||(U_A (x) U_B) Phi - Phi||` for the witness pair.
    pub state_residual: Option<f64>,
    /// Max deviation of `U_B B_j^* U_B^dagger` from the twin Bob observables
    /// of the all-generator reference functional.
    pub bob_residual: Option<f64>,
    /// Commutant dimension of the first `2r` generators.
    pub commutant_dimension: Option<usize>,
}

/// Tests whether the twin of the `m`-generator reference strategy is reached
/// by complex conjugation followed by a local unitary.
pub fn conjugation_equivalence_check(m: usize) -> Result<EquivalenceReport> {
    let r = odd_generator_count(m)?;
    if m > MAX_GENERATORS {
        return Err(Error::InvalidArgument(format!(
            "{m} generators exceed the limit of {MAX_GENERATORS}"
        )));
    }
    let gens = jw_generators(m)?;
    let d = gens[0].rows();

    let conjugation_signs: Vec<i8> = (1..=m)
        .map(|i| if ((i - 1) / 2) % 2 == 0 { 1 } else { -1 })
        .collect();
    let conjugation_sign_residual = gens
        .iter()
        .zip(&conjugation_signs)
        .map(|(a, &s)| a.conj().max_abs_diff(&a.scale_real(f64::from(s))))
        .fold(0.0, f64::max);

    let u = conjugation_unitary(r);
    let u_dag = u.dagger();
    let mut twin = gens.clone();
    twin[m - 1] = -&gens[m - 1];
    let odd = r % 2 == 1;
    let target = if odd { &twin } else { &gens };
    let residual = gens
        .iter()
        .zip(target)
        .map(|(a, t)| (&(&u * &a.conj()) * &u_dag).max_abs_diff(t))
        .fold(0.0, f64::max);

    let description = if r == 0 {
        "1".to_string()
    } else {
        (0..r)
            .map(|q| if q % 2 == 1 { "Y" } else { "I" })
            .collect::<Vec<_>>()
            .join("(x)")
    };

    let (state_residual, bob_residual, commutant) = if odd {
        let ub = u.transpose();
        let phi = max_entangled_state(d)?;
        let moved = kron(&u, &ub).mul_vec(&phi);
        let state_res = moved
            .iter()
            .zip(&phi)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        // Bob's twin observables B_j = A_j^T for the identity functional.
        let ub_dag = ub.dagger();
        let bob_res = gens
            .iter()
            .zip(&twin)
            .map(|(a, t)| (&(&ub * &a.transpose().conj()) * &ub_dag).max_abs_diff(&t.transpose()))
            .fold(0.0, f64::max);
        (Some(state_res), Some(bob_res), None)
    } else {
        let dim = if r == 0 { None } else { Some(commutant_dimension(&gens[..2 * r])?) };
        (None, None, dim)
    };

    Ok(EquivalenceReport {
        m,
        r,
        r_parity: if odd { "odd" } else { "even" },
        conjugation_equivalent: odd,
        conjugation_signs,
        conjugation_sign_residual,
        unitary_description: description,
        witness_unitary: odd.then_some(u),
        residual,
        state_residual,
        bob_residual,
        commutant_dimension: commutant,
    })
}

/// Formats `z` as `a+bi` / `a-bi` with round-trip precision.
pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

/// Parses the output of [`format_complex`]; a bare real number is accepted too.
pub fn parse_complex(s: &str) -> Option<C64> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().ok().map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
    let re = body[..split].parse::<f64>().ok()?;
    let im = body[split..].parse::<f64>().ok()?;
    Some(C64::new(re, im))
}

/// Text form of a complex matrix: a `rows cols` header, then one row per line.
pub fn format_complex_matrix(m: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format_complex(m[(i, j)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_complex_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty input".into() })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse { line: hline, message: format!("bad dimension '{t}'") }))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse { line: hline, message: "header must be 'rows cols'".into() });
    };
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (line, l) in lines {
        let row: Vec<C64> = l
            .split_whitespace()
            .map(|t| parse_complex(t).ok_or(Error::Parse { line, message: format!("bad entry '{t}'") }))
            .collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(Error::Parse { line, message: format!("expected {cols} entries, found {}", row.len()) });
        }
        data.extend(row);
        seen += 1;
    }
    if seen != rows {
        return Err(Error::Parse { line: hline, message: format!("expected {rows} rows, found {seen}") });
    }
    DenseMatrix::from_vec(rows, cols, data)
}
