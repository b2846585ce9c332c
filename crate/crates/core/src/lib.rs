//! Non-perturbative sum-frequency generation of single-photon waveforms.
//!
//! * [`model`]: parameter records and the reduction to `(p, T, q)`.
//! * [`analytic`]: closed-form waveforms, efficiency, fidelity, purity.
//! * [`design`]: time-lens and compression design equations.
//! * [`oracle`]: sampled grids, transforms and the order-by-order recursion
//!   used to check the closed forms independently.
//! * [`acceptance`]: the end-to-end checks run by `sfg verify`.

pub mod acceptance;
pub mod analytic;
pub mod design;
pub mod error;
pub mod exec;
pub mod model;
pub mod optimize;
pub mod oracle;
pub mod quad;
pub mod series;

pub use error::{Result, SfgError};
pub use model::{DimensionlessParams, EscortSpec, PhotonSpec, Realization};
pub use num_complex::Complex64 as C64;
pub use series::SeriesValue;
