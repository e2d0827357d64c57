//! Shared numerical kernels.
//!
//! Framing and STFT/ISTFT with perfect reconstruction, mel cepstra,
//! one-third-octave band energies, linear prediction, dynamic time warping,
//! and cross-fade concatenation. Everything here is a pure function of its
//! inputs; returned values are plain data and safe to share across threads.

mod bands;
mod concat;
mod dtw;
mod lpc;
mod mel;
mod stft;

pub use bands::{third_octave_band_centers, third_octave_energies, ThirdOctaveEnergies, BAND_COUNT};
pub use concat::cross_fade_concat;
pub use dtw::{dtw_align, DtwPath};
pub use lpc::{inverse_filter, lpc, synthesis_filter};
pub use mel::{
    dct_ii_orthonormal, idct_iii_orthonormal, mel_cepstra, CepstraTrack, MelFilterbank,
    CEPSTRA_FRAME_MS, CEPSTRA_HOP_MS, MEL_FILTER_COUNT,
};
pub use stft::{hann_window, istft, stft, stft_padded, istft_padded, Spectrogram};
