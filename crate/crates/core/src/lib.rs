//! Machinery for programs that act on predicted rather than real input.
//!
//! * [`tm`]: budgeted Turing-machine interpretation and canonical word order.
//! * [`distance`]: normalized compression distance and table oracles.
//! * [`qim`]: acceptors that say yes to words the base machine accepts or
//!   that are close to an already accepted word, and the languages built
//!   from them.
//! * [`predict`]: simple-past, AR and Kalman predictors, indicator
//!   sequences and a compression-based randomness proxy.
//! * [`sim`]: a seeded pursuit game with delayed perception.
//! * [`dsl`]: a tiny declarative language binding predictors to predicted
//!   inputs.

pub mod bundled;
pub mod distance;
pub mod dsl;
pub mod predict;
pub mod qim;
pub mod sim;
pub mod tm;

pub use distance::{ncd, Compressor, DistanceError, DistanceOracle, DistanceTable, Threshold};
pub use dsl::{parse_dsl, Program};
pub use predict::{Predictor, PredictorSpec, Schedule};
pub use qim::{Decision, QimConfig, SelfSimilarState};
pub use sim::{GameConfig, GameResult, Motion, Strategy, SweepRow};
pub use tm::{parse_tm, TmOutcome, TmSpec, TmVerdict};
