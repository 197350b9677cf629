//! The N-setting linear steering inequality
//! `(1/N) Σ_k ⟨σ^A_{θ_k} σ^B_{θ_k}⟩ ≤ f(N)` and its single-qubit sequential
//! analogue.
//!
//! Alice measures the noisy POVM along `θ_k`; Bob reads out his conditional
//! state with the spin-flipped projectors `Π̄_θ(b) = (𝟙 − b σ_θ)/2`, so that
//! the singlet gives `+η` per setting.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::povm::{check_count, check_eta};
use crate::qmath::bloch::equatorial_angle;
use crate::qmath::{partial_trace_first, tensor, BlochOperator, ComplexMatrix, UnitVector3, TAU_POS};
use crate::seqsim::{self, sequential_correlation, PairSampler, SimMode};

/// Two-qubit density matrix; qubit A is the first tensor factor.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    rho: ComplexMatrix,
}

impl TwoQubitState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
        }
        rho.check_hermitian()?;
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = rho.min_eigenvalue()?;
        if min < -TAU_POS {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
        Ok(Self { rho })
    }

    /// `|ψ⁻⟩ = (|01⟩ − |10⟩)/√2`.
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [
            Complex64::new(0.0, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        Self { rho: ComplexMatrix::outer(&psi).expect("dimension 4") }
    }

    /// `𝟙/4`.
    pub fn maximally_mixed() -> Self {
        let id = ComplexMatrix::identity(4).expect("dimension 4");
        Self { rho: id.scale(Complex64::new(0.25, 0.0)) }
    }

    /// `p·|ψ⁻⟩⟨ψ⁻| + (1 − p)·𝟙/4`.
    pub fn werner(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidState(format!("Werner weight {p} outside [0, 1]")));
        }
        let a = Self::singlet().rho.scale(Complex64::new(p, 0.0));
        let b = Self::maximally_mixed().rho.scale(Complex64::new(1.0 - p, 0.0));
        Self::new(&a + &b)
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn product(a: &BlochOperator, b: &BlochOperator) -> Result<Self> {
        Self::new(tensor(&ComplexMatrix::from_bloch(a), &ComplexMatrix::from_bloch(b))?)
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }
}

/// Bob's normalized state after Alice obtains the outcome of `effect`, and
/// the probability of that outcome.
pub fn conditional_state(state: &TwoQubitState, effect: &BlochOperator) -> Result<(BlochOperator, f64)> {
    let lifted = tensor(&ComplexMatrix::from_bloch(effect), &ComplexMatrix::identity(2)?)?;
    let unnormalized = partial_trace_first(&(&lifted * state.rho()))?;
    let p = unnormalized.trace().re;
    if p < 1e-15 {
        return Err(Error::ZeroProbability(p));
    }
    let rho_b = unnormalized.scale(Complex64::new(1.0 / p, 0.0)).to_bloch()?;
    Ok((rho_b, p))
}

/// `p(b = +1)` when Bob reads out `σ_θ` on `rho_b` with the spin-flipped
/// projector `(𝟙 − σ_θ)/2`.
fn bob_plus_probability(rho_b: &BlochOperator, theta: f64) -> f64 {
    rho_b.trace_product(&BlochOperator::projector(&UnitVector3::equatorial(theta), 1).spin_flipped())
}

/// Bob's conditional expectation `Σ_b b·Tr[ρ_B Π̄_θ(b)] = −Tr[ρ_B σ_θ]`.
pub fn bob_conditional_expectation(rho_b: &BlochOperator, theta: f64) -> f64 {
    2.0 * bob_plus_probability(rho_b, theta) - 1.0
}

/// `f(N) = (1/N)(|sin(Nπ/2)| + 2 Σ_{k=1}^{⌊N/2⌋} sin((2k−1)π/2N))`.
pub fn f_bound(n: usize) -> Result<f64> {
    check_count(n, 2)?;
    let nf = n as f64;
    let edge = (nf * std::f64::consts::FRAC_PI_2).sin().abs();
    let s: f64 = (1..=n / 2)
        .map(|k| ((2 * k - 1) as f64 * std::f64::consts::PI / (2.0 * nf)).sin())
        .sum();
    Ok((edge + 2.0 * s) / nf)
}

/// `(1/N) Σ_k σ_{θ_k}`, whose largest eigenvalue is `f(N)`.
pub fn average_observable(n: usize) -> Result<BlochOperator> {
    check_count(n, 2)?;
    let sum: BlochOperator = (1..=n).map(|k| BlochOperator::sigma_theta(equatorial_angle(n, k))).sum();
    Ok(sum.scale(1.0 / n as f64))
}

/// Value of a steering functional against its bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteeringReport {
    pub n: usize,
    pub eta: f64,
    /// `(1/N) Σ_k ⟨σ_{θ_k} σ_{θ_k}⟩`.
    pub functional: f64,
    /// `f(N)`.
    pub bound: f64,
    pub violated: bool,
    pub per_setting: Vec<f64>,
    /// Standard error of `functional` in Monte-Carlo mode.
    pub stderr: Option<f64>,
}

impl SteeringReport {
    fn new(n: usize, eta: f64, per_setting: Vec<f64>, stderr: Option<f64>) -> Result<Self> {
        let functional = per_setting.iter().sum::<f64>() / n as f64;
        let bound = f_bound(n)?;
        Ok(Self { n, eta, functional, bound, violated: functional > bound + 1e-12, per_setting, stderr })
    }
}

/// Alice's outcome probabilities and Bob's readout probabilities for one
/// setting; `None` marks an outcome that never occurs.
fn setting_statistics(state: &TwoQubitState, theta: f64, eta: f64) -> Result<[Option<(f64, BlochOperator)>; 2]> {
    let axis = UnitVector3::equatorial(theta);
    let mut out = [None, None];
    for (slot, a) in out.iter_mut().zip([1i8, -1]) {
        let effect = BlochOperator::dichotomic_effect(&axis, eta, a);
        *slot = match conditional_state(state, &effect) {
            Ok((rho_b, p)) => Some((p, rho_b)),
            Err(Error::ZeroProbability(_)) => None,
            Err(e) => return Err(e),
        };
    }
    Ok(out)
}

/// Left-hand side of the N-setting linear steering inequality for Alice's
/// noisy equatorial POVMs with unsharpness `eta`, computed from conditional
/// states.
pub fn steering_functional(state: &TwoQubitState, n: usize, eta: f64) -> Result<SteeringReport> {
    check_count(n, 2)?;
    check_eta(eta)?;
    let per_setting = (1..=n)
        .map(|k| {
            let theta = equatorial_angle(n, k);
            let stats = setting_statistics(state, theta, eta)?;
            Ok(stats
                .iter()
                .zip([1.0, -1.0])
                .filter_map(|(s, a)| s.map(|(p, rho_b)| a * p * bob_conditional_expectation(&rho_b, theta)))
                .sum())
        })
        .collect::<Result<Vec<f64>>>()?;
    SteeringReport::new(n, eta, per_setting, None)
}

/// Seeded Monte-Carlo estimate of [`steering_functional`]: each setting
/// samples Alice's outcome, then Bob's spin-flipped readout.
pub fn steering_functional_montecarlo(state: &TwoQubitState, n: usize, eta: f64, shots: usize, seed: u64) -> Result<SteeringReport> {
    check_count(n, 2)?;
    check_eta(eta)?;
    let mut per_setting = Vec::with_capacity(n);
    let mut var = 0.0;
    for k in 1..=n {
        let theta = equatorial_angle(n, k);
        let stats = setting_statistics(state, theta, eta)?;
        let second = |s: &Option<(f64, BlochOperator)>| s.map_or(0.5, |(_, rho_b)| bob_plus_probability(&rho_b, theta));
        let sampler = PairSampler {
            p_first_plus: stats[0].map_or(0.0, |(p, _)| p),
            p_second_plus: [second(&stats[0]), second(&stats[1])],
        };
        let est = seqsim::estimate(&sampler, shots, seed, steering_key(n, k))?;
        per_setting.push(est.mean);
        var += est.stderr * est.stderr;
    }
    SteeringReport::new(n, eta, per_setting, Some(var.sqrt() / n as f64))
}

/// RNG stream family for the bipartite protocol, disjoint from the
/// single-qubit pair keys.
fn steering_key(n: usize, k: usize) -> u64 {
    seqsim::pair_key(n, k, 0) ^ (1 << 63)
}

/// Single-qubit analogue: N same-angle unsharp-sharp pairs on `𝟙/2`,
/// averaged over settings.
pub fn local_analogue(n: usize, eta: f64, mode: SimMode) -> Result<SteeringReport> {
    check_count(n, 2)?;
    check_eta(eta)?;
    match mode {
        SimMode::Analytic => {
            let per_setting = (1..=n)
                .map(|k| {
                    let theta = equatorial_angle(n, k);
                    sequential_correlation(theta, theta, eta)
                })
                .collect::<Result<Vec<_>>>()?;
            SteeringReport::new(n, eta, per_setting, None)
        }
        SimMode::MonteCarlo { shots, seed } => {
            let mut per_setting = Vec::with_capacity(n);
            let mut var = 0.0;
            for k in 1..=n {
                let theta = equatorial_angle(n, k);
                let est = seqsim::simulate_angles(theta, theta, eta, shots, seed, seqsim::pair_key(n, k, 0))?;
                per_setting.push(est.mean);
                var += est.stderr * est.stderr;
            }
            SteeringReport::new(n, eta, per_setting, Some(var.sqrt() / n as f64))
        }
    }
}
