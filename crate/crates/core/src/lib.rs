//! Linear Shannon capacity of Cayley graphs over finite fields.
//!
//! Floating-point quantities are generic over [`Real`]; the aliases at the
//! bottom of this file fix the scalar to `f64`.

pub mod capacity;
pub mod cayley;
pub mod error;
pub mod gf;
pub mod mis;
pub mod poly;
pub mod polycert;
pub mod report;
pub mod scalar;
pub mod simplex;
pub mod theta;

pub use capacity::{
    alpha_exact, alpha_exact_with, alpha_lin_exact, is_linear_independent_set, rho_lin,
    rho_lin_exponent, theta_lin_lower, AlphaLinOptions, AlphaLinResult, AlphaOptions, AlphaResult,
    Exponent, LinearCode, ThetaLinLower,
};
pub use cayley::{CayleyGraph, PowerVertex};
pub use error::{Error, Result};
pub use gf::{FieldCtx, FieldElem, FieldSpec, Op};
pub use poly::MultiPoly;
pub use polycert::{certify_code, Certificate, Stage, Verdict};
pub use report::{capacity_report, run_separation, CapacityReport, ReportOptions, SeparationReport};
pub use scalar::Real;
pub use theta::{hoffman_bound, lovasz_theta, ThetaResult};

pub type Theta = ThetaResult<f64>;
pub type Theta32 = ThetaResult<f32>;
pub type LpProblem = simplex::Problem<f64>;
pub type LpSolution = simplex::Solution<f64>;
