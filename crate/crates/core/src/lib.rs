//! Gaussian maps, canonical ideals and extensions of canonical curves,
//! computed by exact linear algebra over a prime field.

pub mod canideal;
pub mod curvemodel;
pub mod error;
pub mod exactcore;
pub mod extender;
pub mod gaussmap;
pub mod planeext;

pub use error::{Error, Result};
