//! Analytic upper bounds on outcome probabilities in measurements of qubit
//! channels, with the supporting channel, measurement and optimization
//! machinery.
//!
//! The central quantity is `tr[τ J_Ψ]` for a two-qubit density operator `τ`
//! and the Choi matrix `J_Ψ` of a channel `Ψ` drawn from one of five classes
//! (see [`ChannelClass`]). [`bounds`] gives closed-form upper bounds on its
//! maximum over each class and [`oracle`] finds the maximum numerically.

pub mod bounds;
pub mod channels;
pub mod convertibility;
pub mod detection;
pub mod error;
pub mod io;
pub mod measurement;
pub mod oracle;
pub mod qubit;
pub mod random;
pub mod svd;

pub use bounds::{BoundReport, DominanceReport};
pub use channels::{ChannelClass, QubitChannel, Representation};
pub use convertibility::{ConversionInstance, ConvertibilityReport, Verdict};
pub use error::{Error, Result};
pub use oracle::{OracleConfig, OracleResult};
pub use measurement::{Povm, Ppovm, ProcessEffect};
pub use qubit::{
    BlochVector, CorrelationMatrix, Mat2, Mat4, PureState, QubitState, Subsystem, TwoQubitState,
};
