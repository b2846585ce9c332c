//! Brute-force numerical engine on sampled grids, used to check the
//! analytic results and to go beyond the closed-form Gaussian family.

pub mod axis;
pub mod export;
pub mod fourier;
pub mod grid;
pub mod measures;
pub mod recursion;
pub mod sampling;
pub mod simulate;

pub use axis::Axis;
pub use export::{write_escort_csv, write_grid_csv};
pub use fourier::{apply_signal_spectral_phase, apply_spectral_chirp, ft_1d, ft_forward, ft_inverse};
pub use grid::{Domain, EscortGrid, JointGrid};
pub use measures::{
    effective_width, grid_efficiency, grid_fidelity, grid_norm, grid_purity, grid_purity_direct, grid_purity_gram,
    spectral_marginal, temporal_marginal,
};
pub use recursion::{frequency_recursion_step, recursion_depth, recursion_depth_for_p, recursion_upconvert, Parity};
pub use sampling::{sample_escort, sample_input, GridPlan};
pub use simulate::{compression_width_ratio, efficiency_with_doubling, simulate_time_lens, LensOutcome, Simulation, WidthRatio};
