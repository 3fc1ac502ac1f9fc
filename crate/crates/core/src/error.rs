use thiserror::Error;

/// Reasons a rigorous computation is abandoned.
///
/// Every variant means "the certificate could not be established"; none of
/// them is recoverable inside the certified path.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("assertSafe: not a safe number ({0:e})")]
    NotSafe(f64),
    #[error("S.recip: not well-defined on [{lo:e}, {hi:e}]")]
    RecipNotWellDefined { lo: f64, hi: f64 },
    #[error("S.compare: uncomparable [{a_lo:e}, {a_hi:e}] vs [{b_lo:e}, {b_hi:e}]")]
    Uncomparable {
        a_lo: f64,
        a_hi: f64,
        b_lo: f64,
        b_hi: f64,
    },
    #[error("compose: |f2| is too large (upper bound {norm_ub:e})")]
    ComposeNormTooLarge { norm_ub: f64 },
    #[error("eval: not in domain t=[{lo:e}, {hi:e}]")]
    EvalNotInDomain { lo: f64, hi: f64 },
    #[error("deriv: mu is not < 1 (mu=[{lo:e}, {hi:e}])")]
    DerivRadiusTooLarge { lo: f64, hi: f64 },
    #[error("list must have even length (got {0})")]
    OddLength(usize),
    #[error("lshift: constant coefficient [{lo:e}, {hi:e}] does not enclose the expected value {expected}")]
    ShiftConstantMismatch { lo: f64, hi: f64, expected: f64 },
    #[error("split: degree {k} is below the tail degree {d}")]
    SplitBelowTail { k: usize, d: usize },
    #[error("invalid decimal literal {0:?}")]
    InvalidDecimal(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
