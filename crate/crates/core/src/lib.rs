//! Prophet inequalities with strategic boxes: distributions, classic threshold policies,
//! optimal signaling, robustness checks, equilibrium solvers and a Monte Carlo oracle.

// Guards like `!(b > a)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dist;
pub mod error;
pub mod mc;
pub mod oracle;
pub mod prophet;
pub mod quad;
pub mod random;
pub mod report;
pub mod reproduce;
pub mod signaling;
pub mod stackelberg;
pub mod strategic;
pub mod suites;

pub use dist::{Dist, DistSpec, Segment};
pub use error::{Error, Result};
pub use mc::{simulate, SimConfig, SimResult};
pub use prophet::{Instance, ThresholdSpectrum};
pub use report::{CaseReport, Row, Verdict};
pub use signaling::{PoolingStrategy, SignalKind};
pub use stackelberg::{EquilibriumOutcome, Policy, Profile, Regime, Strategy};
pub use strategic::RobustnessReport;
