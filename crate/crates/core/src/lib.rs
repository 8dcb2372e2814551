//! Sharp constants of the spherical Fourier restriction inequality for
//! radial functions on `R^d`.
//!
//! The crate is organised bottom-up:
//!
//! - [`special_fns`]: Gamma, real-order Bessel functions of the first kind, their zeros,
//!   and sphere areas.
//! - [`quadrature`]: adaptive Gauss-Kronrod, semi-infinite integrals and oscillatory
//!   Bessel integrals partitioned at zeros.
//! - [`radial_fourier`]: radial profiles, the Hankel-type kernel, transforms and norms.
//! - [`restriction`]: admissibility checks, Gaussian lower bounds, the sharp radial
//!   constant and its extremal profile.
//! - [`gls`]: Grand Lebesgue Space norms and the transfer of restriction bounds.
//! - [`verify`]: seeded random profiles, independent oracle quadrature and the
//!   dominance suite.
//! - [`cli`]: the batch front end used by the `radial-restriction` binary.

pub mod cli;
pub mod error;
pub mod gls;
pub mod quadrature;
pub mod radial_fourier;
pub mod restriction;
pub mod special_fns;
pub mod verify;

pub use error::{Error, Result};
pub use quadrature::{QuadResult, Tolerance};
pub use radial_fourier::{DecayClass, RadialProfile};
pub use restriction::{RestrictionParams, SharpConstantResult};
pub use special_fns::{BesselOrder, RadialKernel};
