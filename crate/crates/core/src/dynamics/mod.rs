//! Ergodicity of the dual automorphism, wavelet-set tiling checks and the
//! wavelet representation.

pub mod ergodic;
pub mod tiling;
pub mod wavelet;

pub use ergodic::{candidate_periods, euler_phi, is_ergodic, periodic_lattice_points, ErgodicityReport, PeriodicWitness};
pub use tiling::{dilation_tiling, is_wavelet_set, translation_tiling, IntervalUnion, TilingVerdict, WaveletSetVerdict};
pub use wavelet::{box_indicator, wavelet_rep_eval, wavelet_rep_eval_composed, ScaledValue};
