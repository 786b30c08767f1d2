//! Generalized cyclotomic quaternary sequences of period `2p^m`: construction,
//! exact periodic correlation over the Gaussian integers, closed-form
//! predictions, and a brute-force verification harness.

pub mod closed_form;
pub mod correlation;
pub mod cyclotomy;
pub mod error;
pub mod number_theory;
pub mod sequences;
pub mod verification;

pub use correlation::{
    autocorrelation, cross_correlation, difference_count, CorrelationProfile, DifferenceKind,
    GaussianInt,
};
pub use cyclotomy::{build_class_table, fast_class, ClassTable, ResidueLabel};
pub use error::{Error, Result};
pub use number_theory::{Class, PMod8, PrimePowerParams};
pub use sequences::{build_sequence, Periodic, Sequence, SequenceKind};
pub use verification::{run_suite, CheckId, OmegaConvention, VerificationReport};
