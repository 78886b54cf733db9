//! Validated enclosures of the Stokes constant of the inner equation of
//! conservative Hopf-zero unfoldings.

// `!(x > 0.0)` is deliberate throughout: NaN must fail every gate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod certificate;
pub mod error;
pub mod flow;
pub mod interval;
pub mod oracle;
pub mod pipeline;
pub mod problem;
pub mod scalar;
pub mod shooting;
pub mod thresholds;

pub use bounds::ConstantTable;
pub use error::{Error, Gate, Result};
pub use flow::{IntegratorConfig, SectionHit, StateBox};
pub use interval::{ComplexInterval, Interval, IntervalVector};
pub use pipeline::{exit_code, run, Mode, RunConfig, RunOutput};
pub use problem::{example1, example2, ProblemSpec};
pub use shooting::{DeltaEnclosure, ShootingConfig};
pub use thresholds::RhoThresholds;
