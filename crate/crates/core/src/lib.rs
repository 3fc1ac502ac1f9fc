//! Validated numerics for the renormalization fixed point of Lorenz maps.

pub mod certify;
pub mod cinterval;
pub mod error;
pub mod funcball;
pub mod ilinalg;
pub mod oracle;
pub mod poly;
pub mod renorm;
pub mod scalar;
pub mod selftest;

pub use error::{Error, Result};
pub use funcball::{FunctionBall, LorenzPair};
pub use poly::PolyRect;
pub use scalar::Scalar;
