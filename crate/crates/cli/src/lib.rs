//! Command implementations behind the `cicy` binary.

pub mod battery;
pub mod commands;
pub mod input;
pub mod output;

use cicy_core::hibi::HibiError;
use cicy_core::invariants::InvariantsError;
use cicy_core::monodromy::MonodromyError;

/// Failures with a fixed exit code.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Mismatch(String),
}

pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

/// 2 for bad input or configuration, 3 when working precision ran out, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(f) = cause.downcast_ref::<Failure>() {
            return match f {
                Failure::Usage(_) => EXIT_USAGE,
                Failure::Mismatch(_) => EXIT_MISMATCH,
            };
        }
        if let Some(MonodromyError::Precision(_)) = cause.downcast_ref::<MonodromyError>() {
            return EXIT_PRECISION;
        }
        if cause.downcast_ref::<cicy_core::catalog::CatalogError>().is_some() {
            return EXIT_USAGE;
        }
        let bad_degrees = |h: &HibiError| matches!(h, HibiError::DegreeSum { .. } | HibiError::NotPure);
        match cause.downcast_ref::<InvariantsError>() {
            Some(InvariantsError::NotThreefold { .. } | InvariantsError::BadDegrees) => return EXIT_USAGE,
            Some(InvariantsError::Hibi(h)) if bad_degrees(h) => return EXIT_USAGE,
            _ => {}
        }
        if cause.downcast_ref::<HibiError>().is_some_and(bad_degrees) {
            return EXIT_USAGE;
        }
    }
    EXIT_MISMATCH
}
