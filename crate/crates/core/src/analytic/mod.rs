//! Closed-form waveforms, efficiency, fidelity and entanglement.

pub mod efficiency;
pub mod fidelity;
pub mod purity;
pub mod waveform;

pub use efficiency::{
    dense_scan_max, efficiency, efficiency_at, efficiency_lowq, efficiency_quadrature, efficiency_series,
    optimal_p_paper, optimal_p_paper_with, optimal_p_refined, DEFAULT_P_MAX, SERIES_CROSSOVER,
};
pub use fidelity::{fidelity_at, fidelity_first_order, fidelity_reduced};
pub use purity::{input_purity, upconverted_purity, PurityResult};
pub use waveform::{
    escort_time, f1f, f3_first_order, f3f, input_time, EscortWaveform, InputWaveform, ModeAmplitudes, Upconversion,
    WaveformSample,
};
