//! Two evaluations of the `H^{-1/2}(Γ)` norm of a boundary function: a
//! Neumann lifting solved with higher-order elements, and a weighted norm of
//! periodic biorthogonal wavelet coefficients.

mod boundary_fn;
mod dual;
mod wavelet;

pub use boundary_fn::{ArcFunction, BoundaryFunction, FluxError};
pub use dual::{neumann_dual_error, DualError};
pub use wavelet::{
    dwt_step, low_pass, sample_to_dyadic, wavelet_norm, wavelet_pyramid, WaveletPyramid,
    DEFAULT_LEVEL, MAX_LEVEL,
};
