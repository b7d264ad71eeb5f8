//! Closed-form integrals of powers divided by asin x, asin² x and ln(1+x),
//! the coefficient triangles behind them, and the double series they yield.

pub mod closedform;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod specfun;
pub mod summation;
pub mod transforms;
pub mod triangles;

pub use error::{Error, Result};
