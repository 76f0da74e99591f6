//! Running-maximum distributions of the Slepian process `S(t) = B(t+1) - B(t)`
//! on `[0, 1]`.
//!
//! Closed forms and low-dimensional integrals for the law of `m_s = max_{u≤s} S(u)`,
//! the joint law of `(m_s, M_t)`, and the moments of `m_s`, together with a
//! path simulator used as an independent check.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bachelier;
pub mod dist;
pub mod error;
pub mod moments;
pub mod montecarlo;
pub mod quadrature;
pub mod special;
pub mod timewarp;
pub mod validation;

pub use bachelier::{LinearBoundary, TwoPieceBoundary};
pub use dist::{global_max_cdf, joint_cdf, prob_nonpositive, running_max_cdf, running_max_pdf, JointQuery, MarginalQuery};
pub use error::{Error, Result};
pub use montecarlo::{MaxSampling, McEstimate, McSpec, PathSample};
pub use quadrature::{QuadResult, QuadratureSpec};
pub use timewarp::{warp, JointParams, WarpedTime};
