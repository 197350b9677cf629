//! Noisy dichotomic qubit POVMs and their joint measurability.
//!
//! A set of N effects `E_k(a) = (𝟙 + η·a·n̂_k·σ)/2` is bracketed by two
//! bounds on η built from the vectors `m_a = Σ_k a_k n̂_k` over all sign
//! strings `a ∈ {±1}^N`:
//!
//! * necessary: `η ≤ max_a |m_a| / N`
//! * sufficient: `η ≤ 2^N / Σ_a |m_a|`
//!
//! For N evenly spaced equatorial axes the threshold has the closed form
//! [`eta_opt_equatorial`], which coincides with [`eta_opt_uola`].

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::bloch::{equatorial_angle, norm3};
use crate::qmath::{BlochOperator, UnitVector3, TAU_POS};

/// Largest N handled by exhaustive sign enumeration.
pub const MAX_ENUMERATED_AXES: usize = 20;

/// A sign string `a = (a_1, …, a_N)` with `a_k = ±1`.
///
/// Ordered lexicographically with `+` before `-`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signs(Vec<i8>);

impl Signs {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::Parse(format!("sign {bad} is not ±1")));
        }
        Ok(Self(signs))
    }

    /// Sign string whose i-th entry is `-1` iff bit `n-1-i` of `mask` is set,
    /// so that increasing masks enumerate strings in lexicographic order.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self((0..n).map(|i| if mask >> (n - 1 - i) & 1 == 1 { -1 } else { 1 }).collect())
    }

    /// Every sign string of length `n`, in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Signs> {
        (0..1u64 << n).map(move |mask| Signs::from_mask(n, mask))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, k: usize) -> i8 {
        self.0[k]
    }
}

impl Ord for Signs {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |s: &Signs| s.0.iter().map(|&x| x == -1).collect::<Vec<bool>>();
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for Signs {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Signs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for Signs {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::Parse(format!("bad sign character {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<i8>>>()
            .map(Signs)
    }
}

/// A single effect of a dichotomic POVM together with its outcome label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Effect {
    pub op: BlochOperator,
    pub outcome: i8,
}

impl Effect {
    /// `(𝟙 + η·a·n̂·σ)/2`.
    pub fn dichotomic(axis: &UnitVector3, eta: f64, outcome: i8) -> Result<Self> {
        check_eta(eta)?;
        check_outcome(outcome)?;
        Ok(Self { op: BlochOperator::dichotomic_effect(axis, eta, outcome), outcome })
    }
}

/// Two-outcome noisy POVM along an axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<Effect>,
    axis: UnitVector3,
    eta: f64,
}

impl Povm {
    pub fn dichotomic(axis: UnitVector3, eta: f64) -> Result<Self> {
        let effects = vec![Effect::dichotomic(&axis, eta, 1)?, Effect::dichotomic(&axis, eta, -1)?];
        Ok(Self { effects, axis, eta })
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    /// The effect for outcome `a = ±1`.
    pub fn effect(&self, outcome: i8) -> BlochOperator {
        if outcome == 1 {
            self.effects[0].op
        } else {
            self.effects[1].op
        }
    }

    pub fn axis(&self) -> &UnitVector3 {
        &self.axis
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `‖Σ_a E(a) − 𝟙‖`.
    pub fn completeness_residual(&self) -> f64 {
        let sum: BlochOperator = self.effects.iter().map(|e| e.op).sum();
        spectral_norm(&(sum - BlochOperator::identity()))
    }
}

/// N dichotomic POVMs sharing one unsharpness parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmSet {
    povms: Vec<Povm>,
    eta: f64,
}

impl PovmSet {
    pub fn from_axes(axes: &[UnitVector3], eta: f64) -> Result<Self> {
        check_eta(eta)?;
        let povms = axes.iter().map(|&a| Povm::dichotomic(a, eta)).collect::<Result<_>>()?;
        Ok(Self { povms, eta })
    }

    pub fn len(&self) -> usize {
        self.povms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.povms.is_empty()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn povms(&self) -> &[Povm] {
        &self.povms
    }

    pub fn axes(&self) -> Vec<UnitVector3> {
        self.povms.iter().map(|p| p.axis).collect()
    }
}

/// N equatorial POVMs with axes at `θ_k = kπ/N`, k = 1…N.
pub fn make_equatorial_set(n: usize, eta: f64) -> Result<PovmSet> {
    check_count(n, 2)?;
    check_eta(eta)?;
    PovmSet::from_axes(&equatorial_axes(n), eta)
}

pub fn equatorial_axes(n: usize) -> Vec<UnitVector3> {
    (1..=n).map(|k| UnitVector3::equatorial(equatorial_angle(n, k))).collect()
}

/// Named axis configurations used by the tables and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "family", content = "n")]
pub enum AxisFamily {
    /// `θ_k = kπ/N` in the x–y plane.
    Equatorial(usize),
    /// The first N of x, z, y (N = 2 gives x and z).
    Orthogonal(usize),
    /// The first N of three coplanar axes 120° apart.
    Trine(usize),
}

impl AxisFamily {
    pub fn axes(&self) -> Result<Vec<UnitVector3>> {
        match *self {
            AxisFamily::Equatorial(n) => {
                check_count(n, 2)?;
                Ok(equatorial_axes(n))
            }
            AxisFamily::Orthogonal(n) => {
                check_family_size(n)?;
                Ok([UnitVector3::x(), UnitVector3::z(), UnitVector3::y()][..n].to_vec())
            }
            AxisFamily::Trine(n) => {
                check_family_size(n)?;
                Ok((0..n).map(|k| UnitVector3::equatorial(2.0 * PI * k as f64 / 3.0)).collect())
            }
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            AxisFamily::Equatorial(n) | AxisFamily::Orthogonal(n) | AxisFamily::Trine(n) => n,
        }
    }
}

impl fmt::Display for AxisFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisFamily::Equatorial(n) => write!(f, "equatorial:{n}"),
            AxisFamily::Orthogonal(n) => write!(f, "orthogonal:{n}"),
            AxisFamily::Trine(n) => write!(f, "trine:{n}"),
        }
    }
}

impl FromStr for AxisFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, n) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected FAMILY:N, got {s:?}")))?;
        let n: usize = n.parse().map_err(|_| Error::Parse(format!("bad axis count in {s:?}")))?;
        match name {
            "equatorial" => Ok(AxisFamily::Equatorial(n)),
            "orthogonal" => Ok(AxisFamily::Orthogonal(n)),
            "trine" => Ok(AxisFamily::Trine(n)),
            other => Err(Error::Parse(format!("unknown axis family {other:?}"))),
        }
    }
}

/// `m_a = Σ_k a_k n̂_k` for one sign string.
#[derive(Debug, Clone, PartialEq)]
pub struct MVector {
    pub a: Signs,
    pub m: [f64; 3],
}

impl MVector {
    pub fn compute(axes: &[UnitVector3], a: Signs) -> Result<Self> {
        if axes.len() != a.len() {
            return Err(Error::DimensionMismatch { expected: axes.len(), got: a.len() });
        }
        let m = m_vector(axes, a.as_slice());
        Ok(Self { a, m })
    }

    pub fn norm(&self) -> f64 {
        norm3(&self.m)
    }
}

fn m_vector(axes: &[UnitVector3], signs: &[i8]) -> [f64; 3] {
    let mut m = [0.0; 3];
    for (axis, &s) in axes.iter().zip(signs) {
        let n = axis.components();
        let s = f64::from(s);
        m[0] += s * n[0];
        m[1] += s * n[1];
        m[2] += s * n[2];
    }
    m
}

/// Visits `|m_a|` for every sign string with `a_1 = +1`, in lexicographic
/// order. The other half follows from `m_{-a} = -m_a`.
fn for_each_half_norm(axes: &[UnitVector3], mut f: impl FnMut(u64, f64)) -> Result<()> {
    let n = axes.len();
    check_count(n, 2)?;
    if n > MAX_ENUMERATED_AXES {
        return Err(Error::TooManyAxes(n));
    }
    let comps: Vec<[f64; 3]> = axes.iter().map(|a| a.components()).collect();
    for mask in 0..1u64 << (n - 1) {
        let mut m = [0.0; 3];
        for (i, c) in comps.iter().enumerate() {
            let s = if mask >> (n - 1 - i) & 1 == 1 { -1.0 } else { 1.0 };
            m[0] += s * c[0];
            m[1] += s * c[1];
            m[2] += s * c[2];
        }
        f(mask, norm3(&m));
    }
    Ok(())
}

/// `max_a |m_a|` and its lexicographically smallest maximizer with `a_1 = +1`.
pub fn max_m_norm(axes: &[UnitVector3]) -> Result<(f64, Signs)> {
    let mut best = (f64::NEG_INFINITY, 0u64);
    for_each_half_norm(axes, |mask, norm| {
        if norm > best.0 + 1e-12 {
            best = (norm, mask);
        }
    })?;
    Ok((best.0, Signs::from_mask(axes.len(), best.1)))
}

/// `Σ_a |m_a|` over all `2^N` sign strings.
pub fn sum_m_norms(axes: &[UnitVector3]) -> Result<f64> {
    let mut sum = 0.0;
    for_each_half_norm(axes, |_, norm| sum += norm)?;
    Ok(2.0 * sum)
}

/// Necessary bound `η ≤ max_a |m_a| / N`.
pub fn eta_necessary(axes: &[UnitVector3]) -> Result<f64> {
    Ok(max_m_norm(axes)?.0 / axes.len() as f64)
}

/// Sufficient bound `η ≤ 2^N / Σ_a |m_a|`.
pub fn eta_sufficient(axes: &[UnitVector3]) -> Result<f64> {
    let total = sum_m_norms(axes)?;
    Ok((1u64 << axes.len()) as f64 / total)
}

/// `max_a |m_a|` for N equatorial axes in closed form:
/// `√(N + 2 Σ_{k=1}^{⌊N/2⌋} (N − 2k) cos(kπ/N))`.
pub fn equatorial_max_m_norm(n: usize) -> Result<f64> {
    check_count(n, 2)?;
    let nf = n as f64;
    let s: f64 = (1..=n / 2).map(|k| (nf - 2.0 * k as f64) * (k as f64 * PI / nf).cos()).sum();
    Ok((nf + 2.0 * s).sqrt())
}

/// Joint-measurability threshold of N equatorial POVMs.
pub fn eta_opt_equatorial(n: usize) -> Result<f64> {
    Ok(equatorial_max_m_norm(n)? / n as f64)
}

/// `1 / (N sin(π/2N))`.
pub fn eta_opt_uola(n: usize) -> Result<f64> {
    check_count(n, 2)?;
    let nf = n as f64;
    Ok(1.0 / (nf * (PI / (2.0 * nf)).sin()))
}

/// Candidate parent POVM indexed by sign strings.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalPovm {
    n: usize,
    effects: BTreeMap<Signs, BlochOperator>,
}

impl GlobalPovm {
    /// Collects `(a, G(a))` pairs. Every sign string of length `n` must occur
    /// exactly once.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (Signs, BlochOperator)>) -> Result<Self> {
        if n > MAX_ENUMERATED_AXES {
            return Err(Error::TooManyAxes(n));
        }
        let mut effects = BTreeMap::new();
        for (a, op) in entries {
            if a.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: a.len() });
            }
            let key = a.to_string();
            if effects.insert(a, op).is_some() {
                return Err(Error::Parse(format!("duplicate sign string {key}")));
            }
        }
        if effects.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, got: effects.len() });
        }
        Ok(Self { n, effects })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: &Signs) -> Option<&BlochOperator> {
        self.effects.get(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Signs, &BlochOperator)> {
        self.effects.iter()
    }

    /// Mutable access to one element, e.g. to perturb a candidate.
    pub fn get_mut(&mut self, a: &Signs) -> Option<&mut BlochOperator> {
        self.effects.get_mut(a)
    }

    /// `Σ_{a: a_k = outcome} G(a)`.
    pub fn marginal(&self, k: usize, outcome: i8) -> BlochOperator {
        self.effects.iter().filter(|(a, _)| a.get(k) == outcome).map(|(_, op)| *op).sum()
    }

    /// Single-setting statistics `p(a_k | x_k)` recovered from the joint
    /// outcome distribution `p(a) = Tr[ρ G(a)]`. Entry `[k]` is `[p(+1), p(-1)]`.
    pub fn marginal_probabilities(&self, rho: &BlochOperator) -> Vec<[f64; 2]> {
        let mut out = vec![[0.0; 2]; self.n];
        for (a, op) in &self.effects {
            let p = rho.trace_product(op);
            for (k, slot) in out.iter_mut().enumerate() {
                slot[usize::from(a.get(k) == -1)] += p;
            }
        }
        out
    }

    pub fn to_records(&self) -> Vec<EffectRecord> {
        self.effects
            .iter()
            .map(|(a, op)| EffectRecord { a: a.to_string(), c0: op.c0, cx: op.c[0], cy: op.c[1], cz: op.c[2] })
            .collect()
    }

    pub fn from_records(records: &[EffectRecord]) -> Result<Self> {
        let n = records.first().map(|r| r.a.len()).unwrap_or(0);
        let entries = records
            .iter()
            .map(|r| {
                for v in [r.c0, r.cx, r.cy, r.cz] {
                    if !v.is_finite() {
                        return Err(Error::Parse(format!("non-finite coefficient for {}", r.a)));
                    }
                }
                Ok((r.a.parse::<Signs>()?, BlochOperator::new(r.c0, [r.cx, r.cy, r.cz])))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(n, entries)
    }
}

/// One element of a global POVM in the JSON effect-file schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectRecord {
    /// Sign string such as `"+-+"`.
    pub a: String,
    pub c0: f64,
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

/// `G(a) = 2^{-N}(𝟙 + η m_a·σ)`.
///
/// Marginals and completeness hold for every η; positivity holds only while
/// `η·max_a |m_a| ≤ 1`, which is stricter than joint measurability in general.
pub fn build_symmetric_global(set: &PovmSet) -> Result<GlobalPovm> {
    let n = set.len();
    if n > MAX_ENUMERATED_AXES {
        return Err(Error::TooManyAxes(n));
    }
    let axes = set.axes();
    let w = 1.0 / (1u64 << n) as f64;
    let eta = set.eta();
    let entries = Signs::all(n).map(|a| {
        let m = m_vector(&axes, a.as_slice());
        let op = BlochOperator::new(w, [w * eta * m[0], w * eta * m[1], w * eta * m[2]]);
        (a, op)
    });
    GlobalPovm::from_entries(n, entries)
}

/// Outcome of [`verify_global`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    /// Smallest eigenvalue over all `G(a)`.
    pub min_eigenvalue: f64,
    /// Sign string attaining `min_eigenvalue`.
    pub min_eigenvalue_at: String,
    /// `‖Σ_a G(a) − 𝟙‖`.
    pub completeness_residual: f64,
    /// `max_{k,a} ‖Σ_{a_k fixed} G − E_k(a)‖`.
    pub marginal_residual: f64,
    pub positive: bool,
    pub complete: bool,
    pub marginals_match: bool,
    pub pass: bool,
}

/// Checks positivity, completeness and the marginal conditions of a candidate
/// parent POVM against a POVM set.
pub fn verify_global(g: &GlobalPovm, set: &PovmSet) -> Result<VerificationReport> {
    if g.n() != set.len() {
        return Err(Error::DimensionMismatch { expected: set.len(), got: g.n() });
    }
    let (min_eigenvalue, min_at) = g
        .iter()
        .map(|(a, op)| (op.min_eigenvalue(), a))
        .fold((f64::INFINITY, None), |acc, (v, a)| if v < acc.0 { (v, Some(a)) } else { acc });
    let total: BlochOperator = g.iter().map(|(_, op)| *op).sum();
    let completeness_residual = spectral_norm(&(total - BlochOperator::identity()));
    let mut marginal_residual: f64 = 0.0;
    for (k, povm) in set.povms().iter().enumerate() {
        for outcome in [1, -1] {
            let diff = g.marginal(k, outcome) - povm.effect(outcome);
            marginal_residual = marginal_residual.max(spectral_norm(&diff));
        }
    }
    let positive = min_eigenvalue >= -TAU_POS;
    let complete = completeness_residual <= TAU_POS;
    let marginals_match = marginal_residual <= TAU_POS;
    Ok(VerificationReport {
        n: g.n(),
        min_eigenvalue,
        min_eigenvalue_at: min_at.map(|a| a.to_string()).unwrap_or_default(),
        completeness_residual,
        marginal_residual,
        positive,
        complete,
        marginals_match,
        pass: positive && complete && marginals_match,
    })
}

/// Operator norm of a Hermitian qubit operator, `|c0| + |c|`.
fn spectral_norm(op: &BlochOperator) -> f64 {
    op.c0.abs() + op.vector_norm()
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::BadEta(eta))
    }
}

pub(crate) fn check_count(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::BadCount { got: n, min })
    } else {
        Ok(())
    }
}

fn check_family_size(n: usize) -> Result<()> {
    check_count(n, 2)?;
    if n > 3 {
        return Err(Error::BadIndex(format!("family supports at most 3 axes, got {n}")));
    }
    Ok(())
}

fn check_outcome(outcome: i8) -> Result<()> {
    if outcome == 1 || outcome == -1 {
        Ok(())
    } else {
        Err(Error::BadIndex(format!("outcome {outcome} is not ±1")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn axes(f: &str) -> Vec<UnitVector3> {
        f.parse::<AxisFamily>().unwrap().axes().unwrap()
    }

    #[test]
    fn equatorial_set_two_sharp() {
        let set = make_equatorial_set(2, 1.0).unwrap();
        let a = set.axes();
        assert_abs_diff_eq!(a[0].components()[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a[1].components()[0], -1.0, epsilon = 1e-15);
        for p in set.povms() {
            let e = p.effect(1);
            assert_abs_diff_eq!(e.min_eigenvalue(), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(e.max_eigenvalue(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn equatorial_three_axes_sixty_degrees() {
        let a = make_equatorial_set(3, 2.0 / 3.0).unwrap().axes();
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert_abs_diff_eq!(a[i].dot(&a[j]).abs(), 0.5, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn equatorial_four_complete() {
        let set = make_equatorial_set(4, 0.6532).unwrap();
        assert_eq!(set.len(), 4);
        for p in set.povms() {
            assert!(p.completeness_residual() < 1e-15);
        }
    }

    #[test]
    fn bad_arguments() {
        assert_eq!(make_equatorial_set(1, 0.5), Err(Error::BadCount { got: 1, min: 2 }));
        assert_eq!(make_equatorial_set(3, 1.5), Err(Error::BadEta(1.5)));
        assert_eq!(make_equatorial_set(3, -0.1), Err(Error::BadEta(-0.1)));
        assert_eq!(max_m_norm(&equatorial_axes(21)).unwrap_err(), Error::TooManyAxes(21));
        assert!(eta_opt_equatorial(1).is_err());
        assert!(eta_opt_uola(0).is_err());
    }

    #[test]
    fn max_m_norm_examples() {
        let (v, a) = max_m_norm(&axes("orthogonal:2")).unwrap();
        assert_abs_diff_eq!(v, SQRT_2, epsilon = 1e-15);
        assert_eq!(a.to_string(), "++");
        assert_abs_diff_eq!(max_m_norm(&axes("trine:3")).unwrap().0, 2.0, epsilon = 1e-12);
        let parallel = vec![UnitVector3::z(); 5];
        let (v, a) = max_m_norm(&parallel).unwrap();
        assert_abs_diff_eq!(v, 5.0);
        assert_eq!(a.to_string(), "+++++");
    }

    #[test]
    fn argmax_tie_break_is_lexicographic() {
        // For trine axes ++-, +-+, -++ (and negations) all reach |m| = 2.
        let (_, a) = max_m_norm(&axes("trine:3")).unwrap();
        assert_eq!(a.to_string(), "++-");
    }

    #[test]
    fn table_one_bounds() {
        assert_abs_diff_eq!(eta_necessary(&axes("orthogonal:2")).unwrap(), FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(eta_sufficient(&axes("orthogonal:2")).unwrap(), FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(eta_necessary(&axes("orthogonal:3")).unwrap(), 1.0 / 3f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(eta_sufficient(&axes("orthogonal:3")).unwrap(), 1.0 / 3f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(eta_necessary(&axes("trine:3")).unwrap(), 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eta_sufficient(&axes("trine:2")).unwrap(), 3f64.sqrt() - 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eta_necessary(&axes("trine:2")).unwrap(), 3f64.sqrt() / 2.0, epsilon = 1e-12);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn closed_forms_table_two() {
        assert_abs_diff_eq!(eta_opt_equatorial(3).unwrap(), 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eta_opt_equatorial(4).unwrap(), 0.6532, epsilon = 1e-4);
        assert_abs_diff_eq!(eta_opt_equatorial(100).unwrap(), 0.6366, epsilon = 1e-4);
        assert_abs_diff_eq!(eta_opt_uola(3).unwrap(), 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eta_opt_uola(2).unwrap(), FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(eta_opt_uola(20).unwrap(), 0.6372, epsilon = 1e-4);
    }

    #[test]
    fn symmetric_global_orthogonal_pair() {
        let set = PovmSet::from_axes(&axes("orthogonal:2"), FRAC_1_SQRT_2).unwrap();
        let g = build_symmetric_global(&set).unwrap();
        let e = FRAC_1_SQRT_2 / 4.0;
        let gpm = g.get(&"+-".parse().unwrap()).unwrap();
        assert!(gpm.max_abs_diff(&BlochOperator::new(0.25, [e, 0.0, -e])) < 1e-15);
        assert!(verify_global(&g, &set).unwrap().pass);
    }

    #[test]
    fn symmetric_global_fails_positivity_above_threshold() {
        let set = PovmSet::from_axes(&axes("orthogonal:2"), 0.8).unwrap();
        let g = build_symmetric_global(&set).unwrap();
        let r = verify_global(&g, &set).unwrap();
        assert!(!r.pass && !r.positive && r.complete && r.marginals_match);
        assert_abs_diff_eq!(r.min_eigenvalue, (1.0 - 0.8 * SQRT_2) / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_global_trine_is_not_optimal() {
        let set = PovmSet::from_axes(&axes("trine:3"), 2.0 / 3.0).unwrap();
        let g = build_symmetric_global(&set).unwrap();
        let r = verify_global(&g, &set).unwrap();
        assert!(!r.positive);
        assert_abs_diff_eq!(r.min_eigenvalue, (1.0 - 4.0 / 3.0) / 8.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_eta_global_is_uniform() {
        let set = make_equatorial_set(5, 0.0).unwrap();
        let g = build_symmetric_global(&set).unwrap();
        for (_, op) in g.iter() {
            assert_eq!(*op, BlochOperator::new(1.0 / 32.0, [0.0; 3]));
        }
    }

    #[test]
    fn scaled_effect_breaks_completeness() {
        let set = PovmSet::from_axes(&axes("orthogonal:2"), 0.5).unwrap();
        let mut g = build_symmetric_global(&set).unwrap();
        let key: Signs = "++".parse().unwrap();
        let op = g.get_mut(&key).unwrap();
        *op = op.scale(1.01);
        let r = verify_global(&g, &set).unwrap();
        assert!(!r.complete && !r.pass);
    }

    #[test]
    fn verify_dimension_mismatch() {
        let set2 = PovmSet::from_axes(&axes("orthogonal:2"), 0.5).unwrap();
        let set3 = PovmSet::from_axes(&axes("orthogonal:3"), 0.5).unwrap();
        let g = build_symmetric_global(&set2).unwrap();
        assert!(matches!(verify_global(&g, &set3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn marginal_probabilities_match_single_povms() {
        let set = make_equatorial_set(4, 0.2).unwrap();
        let g = build_symmetric_global(&set).unwrap();
        let rho = BlochOperator::new(0.5, [0.3, -0.2, 0.4]);
        for (k, p) in g.marginal_probabilities(&rho).iter().enumerate() {
            let povm = &set.povms()[k];
            assert_abs_diff_eq!(p[0], rho.trace_product(&povm.effect(1)), epsilon = 1e-14);
            assert_abs_diff_eq!(p[1], rho.trace_product(&povm.effect(-1)), epsilon = 1e-14);
        }
    }

    #[test]
    fn records_round_trip() {
        let set = make_equatorial_set(3, 0.3).unwrap();
        let g = build_symmetric_global(&set).unwrap();
        assert_eq!(GlobalPovm::from_records(&g.to_records()).unwrap(), g);
    }

    #[test]
    fn incomplete_or_duplicate_records_rejected() {
        let set = make_equatorial_set(2, 0.3).unwrap();
        let mut recs = build_symmetric_global(&set).unwrap().to_records();
        recs.pop();
        assert!(GlobalPovm::from_records(&recs).is_err());
        let dup = recs[0].clone();
        recs.push(dup);
        assert!(GlobalPovm::from_records(&recs).is_err());
    }

    #[test]
    fn sign_string_parsing() {
        let s: Signs = "+-+".parse().unwrap();
        assert_eq!(s.as_slice(), &[1, -1, 1]);
        assert!("+x".parse::<Signs>().is_err());
        let order: Vec<String> = Signs::all(2).map(|s| s.to_string()).collect();
        assert_eq!(order, ["++", "+-", "-+", "--"]);
        assert!(Signs::from_mask(2, 1) < Signs::from_mask(2, 2));
    }

    #[test]
    fn axis_family_parsing() {
        assert_eq!("trine:2".parse::<AxisFamily>().unwrap(), AxisFamily::Trine(2));
        assert!("trine".parse::<AxisFamily>().is_err());
        assert!("square:4".parse::<AxisFamily>().is_err());
        assert!(AxisFamily::Orthogonal(4).axes().is_err());
        let t = axes("trine:3");
        assert_abs_diff_eq!(t[0].dot(&t[1]), -0.5, epsilon = 1e-12);
    }
}
