//! Sequential unsharp-then-sharp measurements on a single qubit.
//!
//! Each pair correlation `⟨X_k^(η) X_{k+l}⟩` comes from independent trials
//! that start in `𝟙/2`, apply the Lüders instrument of the noisy POVM along
//! `θ_k`, then measure `σ_{θ_{k+l}}` sharply.
//!
//! Monte-Carlo trials are split into fixed-size blocks. Block `j` of a run
//! draws from a ChaCha8 stream keyed by `(seed, pair)` with stream id `j`,
//! so the result does not depend on how blocks are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{quantum_bound, PairCorrelations};
use crate::povm::{check_count, check_eta, Effect};
use crate::qmath::bloch::equatorial_angle;
use crate::qmath::{BlochOperator, UnitVector3};

/// Trials per RNG block.
pub const BLOCK_SIZE: usize = 8192;

/// Default number of trials per correlation estimate.
pub const DEFAULT_SHOTS: usize = 200_000;

/// Lüders instrument of a dichotomic POVM: Kraus operators `E(a)^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Instrument {
    effects: [Effect; 2],
    kraus: [BlochOperator; 2],
}

impl Instrument {
    pub fn dichotomic(axis: &UnitVector3, eta: f64) -> Result<Self> {
        let effects = [Effect::dichotomic(axis, eta, 1)?, Effect::dichotomic(axis, eta, -1)?];
        let kraus = [effects[0].op.sqrt_psd()?, effects[1].op.sqrt_psd()?];
        Ok(Self { effects, kraus })
    }

    /// Noisy measurement of `σ_θ`.
    pub fn equatorial(theta: f64, eta: f64) -> Result<Self> {
        Self::dichotomic(&UnitVector3::equatorial(theta), eta)
    }

    pub fn effect(&self, outcome: i8) -> &Effect {
        &self.effects[slot(outcome)]
    }

    pub fn kraus(&self, outcome: i8) -> &BlochOperator {
        &self.kraus[slot(outcome)]
    }
}

fn slot(outcome: i8) -> usize {
    usize::from(outcome != 1)
}

/// Post-measurement state `M ρ M† / p` and probability `p = Tr[ρ E(a)]`.
pub fn lueders_post_state(state: &BlochOperator, inst: &Instrument, outcome: i8) -> Result<(BlochOperator, f64)> {
    if outcome != 1 && outcome != -1 {
        return Err(Error::BadIndex(format!("outcome {outcome} is not ±1")));
    }
    if !state.is_density() {
        return Err(Error::InvalidState(format!("{state:?} is not a density operator")));
    }
    let p = state.trace_product(&inst.effect(outcome).op);
    if p < 1e-15 {
        return Err(Error::ZeroProbability(p));
    }
    Ok((inst.kraus(outcome).sandwich(state).scale(1.0 / p), p))
}

/// `Σ_a a·p(a)·Tr[ρ_a σ_{θ2}]` for a noisy measurement along `theta1` on `𝟙/2`
/// followed by a sharp one along `theta2`, evaluated through the instrument.
pub fn sequential_correlation(theta1: f64, theta2: f64, eta: f64) -> Result<f64> {
    let inst = Instrument::equatorial(theta1, eta)?;
    let second = BlochOperator::sigma_theta(theta2);
    let rho = BlochOperator::maximally_mixed();
    let mut total = 0.0;
    for a in [1i8, -1] {
        let (post, p) = lueders_post_state(&rho, &inst, a)?;
        total += f64::from(a) * p * post.trace_product(&second);
    }
    Ok(total)
}

/// `⟨X_k^(η) X_{k+l}⟩ = η cos(πl/N)`.
pub fn analytic_pair_correlation(n: usize, k: usize, l: usize, eta: f64) -> Result<f64> {
    check_pair(n, k, l)?;
    check_eta(eta)?;
    Ok(eta * equatorial_angle(n, l).cos())
}

/// All correlations the chained inequalities need, from the analytic
/// sequential model at unsharpness `eta`.
pub fn analytic_correlations(n: usize, eta: f64) -> Result<PairCorrelations> {
    check_count(n, 2)?;
    check_eta(eta)?;
    PairCorrelations::from_fn(n, |k, l| eta * equatorial_angle(n, l - k).cos())
}

/// Seeded estimates of the correlations the chained inequalities need.
/// `⟨X_1X_2⟩` is drawn once and shared by both lists.
pub fn simulated_correlations(n: usize, eta: f64, shots: usize, seed: u64) -> Result<PairCorrelations> {
    check_count(n, 2)?;
    check_eta(eta)?;
    let c1k = (2..=n)
        .map(|k| simulate_pair(n, 1, k - 1, eta, shots, seed).map(|e| e.mean))
        .collect::<Result<Vec<_>>>()?;
    let mut adj = vec![c1k[0]];
    for k in 2..n {
        adj.push(simulate_pair(n, k, 1, eta, shots, seed)?.mean);
    }
    PairCorrelations::new(n, c1k, adj)
}

/// One sequential trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub k: usize,
    pub l: usize,
    pub a: i8,
    pub b: i8,
}

/// Mean of `a·b` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√shots`.
    pub stderr: f64,
    pub shots: usize,
}

impl CorrelationEstimate {
    /// From the number of trials with `a·b = +1`.
    pub fn from_agreements(agree: u64, shots: usize) -> Self {
        let n = shots as f64;
        let mean = (2.0 * agree as f64 - n) / n;
        let var = if shots > 1 { (1.0 - mean * mean).max(0.0) * n / (n - 1.0) } else { 0.0 };
        Self { mean, stderr: (var / n).sqrt(), shots }
    }

    pub fn from_trials(trials: &[TrialRecord]) -> Result<Self> {
        if trials.is_empty() {
            return Err(Error::BadShots);
        }
        let agree = trials.iter().filter(|t| t.a == t.b).count() as u64;
        Ok(Self::from_agreements(agree, trials.len()))
    }
}

/// Outcome probabilities of one unsharp-sharp pair on `𝟙/2`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairSampler {
    pub(crate) p_first_plus: f64,
    /// `p(b = +1 | a)` for `a = +1, −1`.
    pub(crate) p_second_plus: [f64; 2],
}

impl PairSampler {
    fn new(theta1: f64, theta2: f64, eta: f64) -> Result<Self> {
        let inst = Instrument::equatorial(theta1, eta)?;
        let readout = BlochOperator::projector(&UnitVector3::equatorial(theta2), 1);
        let rho = BlochOperator::maximally_mixed();
        let (post_plus, p_plus) = lueders_post_state(&rho, &inst, 1)?;
        let (post_minus, _) = lueders_post_state(&rho, &inst, -1)?;
        Ok(Self {
            p_first_plus: p_plus,
            p_second_plus: [post_plus.trace_product(&readout), post_minus.trace_product(&readout)],
        })
    }

    fn trial<R: Rng>(&self, rng: &mut R) -> (i8, i8) {
        let a: i8 = if rng.random::<f64>() < self.p_first_plus { 1 } else { -1 };
        let b: i8 = if rng.random::<f64>() < self.p_second_plus[slot(a)] { 1 } else { -1 };
        (a, b)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Stream key for pair `(k, k+l)` among N settings.
pub(crate) fn pair_key(n: usize, k: usize, l: usize) -> u64 {
    ((n as u64) << 40) ^ ((k as u64) << 20) ^ l as u64
}

pub(crate) fn block_rng(seed: u64, key: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(key)));
    rng.set_stream(block);
    rng
}

fn block_len(shots: usize, block: usize) -> usize {
    BLOCK_SIZE.min(shots - block * BLOCK_SIZE)
}

fn count_agreements(sampler: &PairSampler, shots: usize, seed: u64, key: u64) -> u64 {
    let blocks = shots.div_ceil(BLOCK_SIZE);
    (0..blocks)
        .into_par_iter()
        .map(|j| {
            let mut rng = block_rng(seed, key, j as u64);
            (0..block_len(shots, j)).filter(|_| {
                let (a, b) = sampler.trial(&mut rng);
                a == b
            })
            .count() as u64
        })
        .sum()
}

/// Seeded estimate of `⟨a·b⟩` under `sampler`.
pub(crate) fn estimate(sampler: &PairSampler, shots: usize, seed: u64, key: u64) -> Result<CorrelationEstimate> {
    if shots == 0 {
        return Err(Error::BadShots);
    }
    Ok(CorrelationEstimate::from_agreements(count_agreements(sampler, shots, seed, key), shots))
}

/// Monte-Carlo estimate for a noisy measurement at `theta1` followed by a
/// sharp one at `theta2`; `key` selects the RNG stream family.
pub(crate) fn simulate_angles(theta1: f64, theta2: f64, eta: f64, shots: usize, seed: u64, key: u64) -> Result<CorrelationEstimate> {
    if shots == 0 {
        return Err(Error::BadShots);
    }
    estimate(&PairSampler::new(theta1, theta2, eta)?, shots, seed, key)
}

/// Seeded Monte-Carlo estimate of `⟨X_k^(η) X_{k+l}⟩`.
pub fn simulate_pair(n: usize, k: usize, l: usize, eta: f64, shots: usize, seed: u64) -> Result<CorrelationEstimate> {
    check_pair(n, k, l)?;
    check_eta(eta)?;
    simulate_angles(equatorial_angle(n, k), equatorial_angle(n, k + l), eta, shots, seed, pair_key(n, k, l))
}

/// The individual trials behind [`simulate_pair`], in block order.
pub fn sample_trials(n: usize, k: usize, l: usize, eta: f64, shots: usize, seed: u64) -> Result<Vec<TrialRecord>> {
    check_pair(n, k, l)?;
    check_eta(eta)?;
    if shots == 0 {
        return Err(Error::BadShots);
    }
    let sampler = PairSampler::new(equatorial_angle(n, k), equatorial_angle(n, k + l), eta)?;
    let key = pair_key(n, k, l);
    let mut out = Vec::with_capacity(shots);
    for j in 0..shots.div_ceil(BLOCK_SIZE) {
        let mut rng = block_rng(seed, key, j as u64);
        for _ in 0..block_len(shots, j) {
            let (a, b) = sampler.trial(&mut rng);
            out.push(TrialRecord { k, l, a, b });
        }
    }
    Ok(out)
}

/// Analytic evaluation or seeded Monte-Carlo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum SimMode {
    Analytic,
    MonteCarlo { shots: usize, seed: u64 },
}

/// `S_N(η) = Σ_{k=1}^{N−1} ⟨X_k^(η) X_{k+1}⟩ − ⟨X_1^(η) X_N⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequentialChainValue {
    pub n: usize,
    pub eta: f64,
    pub value: f64,
    /// Propagated standard error; absent in analytic mode.
    pub stderr: Option<f64>,
    /// Per-pair estimates: the N−1 adjacent pairs then `(1, N)`.
    pub pairs: Vec<CorrelationEstimate>,
}

pub fn chained_sequential_value(n: usize, eta: f64, mode: SimMode) -> Result<SequentialChainValue> {
    check_count(n, 3)?;
    check_eta(eta)?;
    match mode {
        SimMode::Analytic => Ok(SequentialChainValue {
            n,
            eta,
            value: eta * quantum_bound(n)?,
            stderr: None,
            pairs: Vec::new(),
        }),
        SimMode::MonteCarlo { shots, seed } => {
            let mut pairs = (1..n)
                .map(|k| simulate_pair(n, k, 1, eta, shots, seed))
                .collect::<Result<Vec<_>>>()?;
            pairs.push(simulate_pair(n, 1, n - 1, eta, shots, seed)?);
            let value = pairs[..n - 1].iter().map(|p| p.mean).sum::<f64>() - pairs[n - 1].mean;
            let stderr = pairs.iter().map(|p| p.stderr * p.stderr).sum::<f64>().sqrt();
            Ok(SequentialChainValue { n, eta, value, stderr: Some(stderr), pairs })
        }
    }
}

fn check_pair(n: usize, k: usize, l: usize) -> Result<()> {
    check_count(n, 2)?;
    if k < 1 || l < 1 || k + l > n {
        return Err(Error::BadIndex(format!("pair k={k}, l={l} outside 1 ≤ k, 1 ≤ l, k+l ≤ {n}")));
    }
    Ok(())
}
