//! Plane models with ordinary singularities, point sampling and the
//! canonical series.

mod curve;
mod points;
mod sections;

pub use curve::{taylor_coefficients, taylor_rows, Gonality, PlaneCurve, SingularPoint};
pub use points::CurvePoint;
pub use sections::{omega_eval, SectionBasis, SectionRole};
