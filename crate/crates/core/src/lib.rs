//! Linearised gravity–capillary waves generated by flow over a small step.
//!
//! Two independent routes produce the exponentially small waves:
//! classical Fourier inversion, evaluated by residues of the dispersion
//! relation, and exponential asymptotics, where the waves are switched on
//! across Stokes lines. The library computes both and the checks linking them.
//!
//! Numerical routines are generic over [`Real`] (`f32` or `f64`); exact
//! recurrences run over any [`num_traits::Num`] type, including big rationals.
//!
//! ```
//! use stepwaves::{dispersion, FlowParams64};
//!
//! let flow = FlowParams64::new(0.4, 0.02, 0.01)?;
//! let roots = dispersion::roots(&flow, 5)?;
//! assert_eq!(roots.region, dispersion::Region::II);
//! # Ok::<(), stepwaves::Error>(())
//! ```

// `!(x > 0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersion;
pub mod error;
pub mod exp_asym;
pub mod fourier_surface;
pub mod params;
pub mod quadrature;
pub mod resummation;
pub mod scalar;
pub mod solve;
pub mod special;

pub use error::{Error, Result};
pub use params::{branched_constants, scale, BranchedConstants, Family, FlowParams, ScaledParams};
pub use scalar::Real;

pub type FlowParams64 = FlowParams<f64>;
pub type ScaledParams64 = ScaledParams<f64>;
pub type BranchedConstants64 = BranchedConstants<f64>;
pub type RootSet64 = dispersion::RootSet<f64>;
pub type SurfaceProfile64 = fourier_surface::SurfaceProfile<f64>;
pub type FlowParams32 = FlowParams<f32>;
pub type ScaledParams32 = ScaledParams<f32>;
pub type BranchedConstants32 = BranchedConstants<f32>;
