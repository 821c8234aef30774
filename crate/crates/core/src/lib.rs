//! Special functions for the kernel `ker(u; n, k₀, σ, σ̂)` of the intertwining
//! operator on the shift subgroup, and numerical checks of the identities it
//! satisfies.
//!
//! Layers, bottom up: gamma and Pochhammer ([`numerics`]), hypergeometric
//! series ([`hypergeom`]), double-exponential quadrature ([`quadrature`]),
//! confluent functions ([`confluent`]), Legendre and Gegenbauer functions
//! ([`legendre`]), Bessel functions ([`bessel`]), the kernel itself
//! ([`kernel`]) and the identity checks ([`identity`]) with their report
//! records ([`report`]).

pub mod bessel;
pub mod confluent;
pub mod error;
pub mod hypergeom;
pub mod identity;
pub mod kernel;
pub mod legendre;
pub mod numerics;
pub mod quadrature;
pub mod report;

pub use error::{Error, Result};
pub use hypergeom::SeriesResult;
pub use kernel::{ClosedForm, Diagnostics, KernelParams, KernelValue, Method, Variant};
pub use numerics::{ComplexValue, Tolerance};
pub use quadrature::QuadratureResult;
pub use report::{IdentityReport, ParamValue, Params, Status};
