//! Moment matrices of pairwise correlations and the chained inequalities
//! obtained from their positivity.
//!
//! For dichotomic variables `X_1…X_N` and `k = 2…N−1`, the vector
//! `ξ_k = (1, X_1X_k, X_kX_{k+1}, X_1X_{k+1})` has the moment matrix
//! `M_k = ⟨ξ_k ξ_kᵀ⟩`. Summing the i-th closed-form eigenvalue over k and
//! asking for non-negativity yields the i-th chained inequality
//! `LHS_i ≤ N − 2`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::povm::{check_count, eta_opt_equatorial, Signs};
use crate::qmath::{eig_hermitian, ComplexMatrix, TAU_POS};

/// Tolerance on the consistency checks of stored correlations.
const CORR_TOL: f64 = 1e-12;

/// First-row and adjacent pairwise correlations of N dichotomic variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCorrelations {
    n: usize,
    /// `⟨X_1 X_k⟩` for k = 2…N.
    c1k: Vec<f64>,
    /// `⟨X_k X_{k+1}⟩` for k = 1…N−1.
    adj: Vec<f64>,
}

impl PairCorrelations {
    /// `c1k[i] = ⟨X_1 X_{i+2}⟩`, `adj[i] = ⟨X_{i+1} X_{i+2}⟩`. The shared
    /// entry `⟨X_1 X_2⟩` must agree between the two lists.
    pub fn new(n: usize, c1k: Vec<f64>, adj: Vec<f64>) -> Result<Self> {
        check_count(n, 2)?;
        if c1k.len() != n - 1 {
            return Err(Error::DimensionMismatch { expected: n - 1, got: c1k.len() });
        }
        if adj.len() != n - 1 {
            return Err(Error::DimensionMismatch { expected: n - 1, got: adj.len() });
        }
        if let Some(bad) = c1k.iter().chain(&adj).find(|x| !x.is_finite() || x.abs() > 1.0 + CORR_TOL) {
            return Err(Error::InvalidCorrelations(format!("correlation {bad} outside [-1, 1]")));
        }
        if (c1k[0] - adj[0]).abs() > CORR_TOL {
            return Err(Error::InvalidCorrelations(format!(
                "<X1 X2> given twice with different values {} and {}",
                c1k[0], adj[0]
            )));
        }
        Ok(Self { n, c1k, adj })
    }

    /// Builds the stored entries from a full correlation function
    /// `corr(k, l) = ⟨X_k X_l⟩`, 1-based with `k < l`.
    pub fn from_fn(n: usize, corr: impl Fn(usize, usize) -> f64) -> Result<Self> {
        check_count(n, 2)?;
        let c1k = (2..=n).map(|k| corr(1, k)).collect();
        let adj = (1..n).map(|k| corr(k, k + 1)).collect();
        Self::new(n, c1k, adj)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `⟨X_1 X_k⟩`, k = 2…N.
    pub fn first_row(&self, k: usize) -> f64 {
        self.c1k[k - 2]
    }

    /// `⟨X_k X_{k+1}⟩`, k = 1…N−1.
    pub fn adjacent(&self, k: usize) -> f64 {
        self.adj[k - 1]
    }

    /// `⟨X_1 X_N⟩`.
    pub fn c1n(&self) -> f64 {
        self.c1k[self.n - 2]
    }
}

/// `M_k` in the block layout
///
/// ```text
/// 1 u v w
/// u 1 w v
/// v w 1 u
/// w v u 1
/// ```
///
/// with `u = ⟨X_1X_k⟩`, `v = ⟨X_kX_{k+1}⟩`, `w = ⟨X_1X_{k+1}⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentMatrix {
    pub k: usize,
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl MomentMatrix {
    pub fn from_correlations(corr: &PairCorrelations, k: usize) -> Result<Self> {
        if k < 2 || k + 1 > corr.n() {
            return Err(Error::BadIndex(format!("moment matrix index {k} not in 2..={}", corr.n() - 1)));
        }
        Ok(Self { k, u: corr.first_row(k), v: corr.adjacent(k), w: corr.first_row(k + 1) })
    }

    pub fn entries(&self) -> [[f64; 4]; 4] {
        let (u, v, w) = (self.u, self.v, self.w);
        [[1.0, u, v, w], [u, 1.0, w, v], [v, w, 1.0, u], [w, v, u, 1.0]]
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let rows: Vec<Vec<f64>> = self.entries().iter().map(|r| r.to_vec()).collect();
        ComplexMatrix::from_real_rows(&rows).expect("4x4 by construction")
    }

    pub fn is_psd(&self) -> bool {
        moment_eigenvalues(self).iter().all(|&l| l >= -TAU_POS)
    }
}

/// The four eigenvalues of `M_k`, in the order
///
/// * `λ1 = 1 + u − v − w`
/// * `λ2 = 1 − u + v − w`
/// * `λ3 = 1 − u − v + w`
/// * `λ4 = 1 + u + v + w`
pub fn moment_eigenvalues(m: &MomentMatrix) -> [f64; 4] {
    let (u, v, w) = (m.u, m.v, m.w);
    [1.0 + u - v - w, 1.0 - u + v - w, 1.0 - u - v + w, 1.0 + u + v + w]
}

/// Numerical eigenvalues of the dense moment matrix, ascending.
pub fn moment_eigenvalues_numeric(m: &MomentMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian(&m.to_dense())?.values)
}

/// Which of the four chained inequalities; the i-th one is
/// `Σ_{k=2}^{N−1} λ_i^(k) ≥ 0` rewritten as `LHS_i ≤ N − 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chained {
    One = 1,
    Two = 2,
    Three = 3,
    Four = 4,
}

impl Chained {
    pub const ALL: [Chained; 4] = [Chained::One, Chained::Two, Chained::Three, Chained::Four];
}

impl TryFrom<u8> for Chained {
    type Error = Error;

    fn try_from(which: u8) -> Result<Self> {
        match which {
            1 => Ok(Chained::One),
            2 => Ok(Chained::Two),
            3 => Ok(Chained::Three),
            4 => Ok(Chained::Four),
            other => Err(Error::BadIndex(format!("chained inequality {other} not in 1..=4"))),
        }
    }
}

/// Left-hand side of a chained inequality. With `u_k = ⟨X_1X_k⟩` and
/// `v_k = ⟨X_kX_{k+1}⟩`, sums over `k = 2…N−1` unless noted:
///
/// 1. `Σ v_k + u_N − u_2`
/// 2. `u_2 + 2 Σ_{k=3}^{N−1} u_k + u_N − Σ v_k`
/// 3. `Σ_{k=1}^{N−1} v_k − u_N`
/// 4. `−(Σ v_k + u_2 + 2 Σ_{k=3}^{N−1} u_k + u_N)`
pub fn chained_lhs(corr: &PairCorrelations, which: Chained) -> Result<f64> {
    let n = corr.n();
    check_count(n, 3)?;
    let inner_adj: f64 = (2..n).map(|k| corr.adjacent(k)).sum();
    let inner_row: f64 = (3..n).map(|k| corr.first_row(k)).sum();
    let u2 = corr.first_row(2);
    let un = corr.c1n();
    Ok(match which {
        Chained::One => inner_adj + un - u2,
        Chained::Two => u2 + 2.0 * inner_row + un - inner_adj,
        Chained::Three => corr.adjacent(1) + inner_adj - un,
        Chained::Four => -(inner_adj + u2 + 2.0 * inner_row + un),
    })
}

/// Classical bound `N − 2`.
pub fn classical_bound(n: usize) -> Result<f64> {
    check_count(n, 3)?;
    Ok(n as f64 - 2.0)
}

/// Largest quantum value `N cos(π/N)` of inequality 3.
pub fn quantum_bound(n: usize) -> Result<f64> {
    check_count(n, 3)?;
    let nf = n as f64;
    Ok(nf * (PI / nf).cos())
}

/// Largest value of inequality 3 when the first measurements are jointly
/// measurable: `η_opt(N)·N cos(π/N)`.
pub fn attenuated_bound(n: usize) -> Result<f64> {
    Ok(eta_opt_equatorial(n)? * quantum_bound(n)?)
}

/// All four chained values for one set of correlations, with the bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainedReport {
    pub n: usize,
    /// `LHS_1 … LHS_4`.
    pub values: [f64; 4],
    pub classical_bound: f64,
    pub quantum_bound: f64,
    pub attenuated_bound: f64,
    pub violated: [bool; 4],
}

pub fn chained_report(corr: &PairCorrelations) -> Result<ChainedReport> {
    let n = corr.n();
    let classical = classical_bound(n)?;
    let mut values = [0.0; 4];
    for (slot, which) in values.iter_mut().zip(Chained::ALL) {
        *slot = chained_lhs(corr, which)?;
    }
    Ok(ChainedReport {
        n,
        values,
        classical_bound: classical,
        quantum_bound: quantum_bound(n)?,
        attenuated_bound: attenuated_bound(n)?,
        violated: values.map(|v| v > classical + 1e-12),
    })
}

/// Probability distribution over `{±1}^N`, indexed like [`Signs::from_mask`].
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    n: usize,
    weights: Vec<f64>,
}

/// Largest N for which a full distribution is materialized.
pub const MAX_ORACLE_VARS: usize = 20;
/// Largest N for exact enumeration of correlations.
pub const MAX_EXACT_VARS: usize = 12;

impl JointDistribution {
    /// Normalizes non-negative `weights` of length `2^n`.
    pub fn new(n: usize, weights: Vec<f64>) -> Result<Self> {
        check_vars(n)?;
        if weights.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, got: weights.len() });
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidState("negative or non-finite weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidState("distribution has zero mass".into()));
        }
        Ok(Self { n, weights: weights.into_iter().map(|w| w / total).collect() })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        check_vars(n)?;
        Self::new(n, vec![1.0; 1 << n])
    }

    pub fn point_mass(a: &Signs) -> Result<Self> {
        let n = a.len();
        check_vars(n)?;
        let mask = a
            .as_slice()
            .iter()
            .fold(0usize, |acc, &s| (acc << 1) | usize::from(s == -1));
        let mut w = vec![0.0; 1 << n];
        w[mask] = 1.0;
        Self::new(n, w)
    }

    /// A random distribution: either dense with exponential weights or
    /// supported on a handful of sign strings, so that both the interior and
    /// the faces of the correlation polytope are exercised.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_vars(n)?;
        let size = 1usize << n;
        let mut w = vec![0.0; size];
        if rng.random_bool(0.5) {
            for x in &mut w {
                *x = -(1.0 - rng.random::<f64>()).ln();
            }
        } else {
            let support = rng.random_range(1..=4.min(size));
            for _ in 0..support {
                w[rng.random_range(0..size)] += rng.random::<f64>() + 1e-3;
            }
        }
        Self::new(n, w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Correlations computed by summing over every sign string.
    pub fn exact_correlations(&self) -> Result<PairCorrelations> {
        if self.n > MAX_EXACT_VARS {
            return Err(Error::TooManyVars(self.n));
        }
        let n = self.n;
        let mut c1k = vec![0.0; n - 1];
        let mut adj = vec![0.0; n - 1];
        for (mask, &p) in self.weights.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let a = Signs::from_mask(n, mask as u64);
            accumulate(&a, p, &mut c1k, &mut adj);
        }
        PairCorrelations::new(n, c1k, adj)
    }

    /// Empirical correlations of `trials` independent draws.
    pub fn sampled_correlations(&self, trials: usize, seed: u64) -> Result<PairCorrelations> {
        if trials == 0 {
            return Err(Error::BadShots);
        }
        let n = self.n;
        let mut cdf = Vec::with_capacity(self.weights.len());
        let mut acc = 0.0;
        for &w in &self.weights {
            acc += w;
            cdf.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c1k = vec![0.0; n - 1];
        let mut adj = vec![0.0; n - 1];
        let weight = 1.0 / trials as f64;
        for _ in 0..trials {
            let u = rng.random::<f64>() * acc;
            let idx = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            accumulate(&Signs::from_mask(n, idx as u64), weight, &mut c1k, &mut adj);
        }
        let clamp = |v: Vec<f64>| v.into_iter().map(|x| x.clamp(-1.0, 1.0)).collect();
        PairCorrelations::new(n, clamp(c1k), clamp(adj))
    }
}

fn accumulate(a: &Signs, p: f64, c1k: &mut [f64], adj: &mut [f64]) {
    let s = a.as_slice();
    for k in 1..s.len() {
        c1k[k - 1] += p * f64::from(s[0] * s[k]);
        adj[k - 1] += p * f64::from(s[k - 1] * s[k]);
    }
}

/// How [`classical_sample_oracle`] turns a distribution into correlations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Exact,
    Sampled { trials: usize },
}

/// Correlations of a random classical joint distribution over N dichotomic
/// variables, drawn from `seed`. These can never violate a chained
/// inequality; exact mode makes that hold to round-off.
pub fn classical_sample_oracle(n: usize, mode: OracleMode, seed: u64) -> Result<PairCorrelations> {
    check_vars(n)?;
    check_count(n, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = JointDistribution::random(n, &mut rng)?;
    match mode {
        OracleMode::Exact => dist.exact_correlations(),
        OracleMode::Sampled { trials } => dist.sampled_correlations(trials, rng.random()),
    }
}

fn check_vars(n: usize) -> Result<()> {
    if n > MAX_ORACLE_VARS {
        Err(Error::TooManyVars(n))
    } else {
        Ok(())
    }
}
