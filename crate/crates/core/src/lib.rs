//! Joint measurability of noisy qubit POVMs, chained pairwise-correlation
//! inequalities from moment-matrix positivity, and the N-setting linear
//! steering inequality with its single-qubit sequential analogue.
//!
//! Modules, bottom-up:
//!
//! * [`qmath`]: Bloch-coefficient qubit operators and a dense 2×2 / 4×4 path.
//! * [`povm`]: noisy POVMs, joint-measurability bounds, parent POVMs.
//! * [`moments`]: moment matrices and the four chained inequalities.
//! * [`seqsim`]: sequential unsharp-sharp measurements, analytic and sampled.
//! * [`steering`]: the linear steering inequality and its local analogue.
//! * [`tables`]: the rows of the three reference tables.

pub mod error;
pub mod moments;
pub mod povm;
pub mod qmath;
pub mod seqsim;
pub mod steering;
pub mod tables;

pub use error::{Error, Result};
pub use moments::{
    attenuated_bound, chained_lhs, chained_report, classical_bound, classical_sample_oracle, moment_eigenvalues,
    quantum_bound, Chained, ChainedReport, JointDistribution, MomentMatrix, OracleMode, PairCorrelations,
};
pub use povm::{
    build_symmetric_global, eta_necessary, eta_opt_equatorial, eta_opt_uola, eta_sufficient, make_equatorial_set,
    max_m_norm, verify_global, AxisFamily, Effect, EffectRecord, GlobalPovm, MVector, Povm, PovmSet, Signs,
    VerificationReport,
};
pub use qmath::{BlochOperator, ComplexMatrix, UnitVector3};
pub use seqsim::{
    analytic_pair_correlation, chained_sequential_value, lueders_post_state, simulate_pair, simulated_correlations, CorrelationEstimate,
    Instrument, SequentialChainValue, SimMode, TrialRecord,
};
pub use steering::{conditional_state, f_bound, local_analogue, steering_functional, SteeringReport, TwoQubitState};
