//! Word-level enhancement of disordered (cleft lip and palate) speech.
//!
//! The toolkit operates on annotated nonsensical words (/sasa/, /kaka/, ...):
//! each phoneme segment carries a class and an error label, a per-segment
//! transform is chosen from that label, the modified segments are stitched
//! back together, and the result is scored against a healthy reference
//! template with alignment-based objective metrics (P-STOI, P-ESTOI, MCD).
//!
//! Modules:
//! - [`audio`]: WAV I/O, resampling, level normalization.
//! - [`dsp`]: STFT/ISTFT, mel cepstra, one-third-octave bands, LPC, DTW,
//!   cross-fade concatenation.
//! - [`events`]: glottal closure instants and voicing decisions.
//! - [`transforms`]: the five segment-level enhancement techniques.
//! - [`pipeline`]: annotation parsing, plan selection, word stitching,
//!   batch runs.
//! - [`metrics`]: template-aligned intelligibility and spectral distance.
//! - [`stimuli`]: deterministic synthetic corpus generator.

pub mod audio;
pub mod dsp;
pub mod error;
pub mod events;
pub mod metrics;
pub mod pipeline;
pub mod stimuli;
pub mod transforms;

pub use audio::Waveform;
pub use error::{Error, Result};
