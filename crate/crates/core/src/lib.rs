//! Arbitrary-order Active Flux solver for 1D scalar conservation laws.
//!
//! Cells carry continuous interface point values plus `N - 1` moments; the
//! moments evolve exactly in semi-discrete form and the point values are
//! updated either by upwind finite differences with SSP-RK3 ([`method_a`]) or
//! by characteristic tracing ([`method_b`]).

pub mod app;
pub mod basis;
pub mod error;
pub mod limiter;
pub mod method_a;
pub mod method_b;
pub mod quadrature;
pub mod scheme;
pub mod stability;
pub mod state;

pub use basis::{BasisSet, Dof, Polynomial};
pub use error::{Error, Result};
pub use method_a::{FdStencil, MethodA};
pub use method_b::MethodB;
pub use scheme::{Flux, MomentOperator};
pub use stability::Method;
pub use state::{Mesh, State};
