//! One-third-octave band energies at 10 kHz, the front end of the
//! intelligibility metrics: 256-sample Hann frames, 128 hop, 512-point FFT,
//! 15 bands with center frequencies 150·2^(j/3) Hz.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::audio::{Waveform, METRICS_RATE};
use crate::dsp::stft::hann_window;
use crate::error::{Error, Result};

pub const BAND_COUNT: usize = 15;
const FRAME_LEN: usize = 256;
const HOP: usize = 128;
const N_FFT: usize = 512;

/// Non-negative band energies per frame.
#[derive(Debug, Clone)]
pub struct ThirdOctaveEnergies {
    pub frames: Vec<[f64; BAND_COUNT]>,
    pub hop: usize,
    pub sample_rate: u32,
}

impl ThirdOctaveEnergies {
    pub fn num_frames(&self) -> usize {
        self.frames.len()
    }
}

/// Band center frequencies in Hz.
pub fn third_octave_band_centers() -> [f64; BAND_COUNT] {
    std::array::from_fn(|j| 150.0 * 2f64.powf(j as f64 / 3.0))
}

/// FFT bin ranges `[lo, hi)` per band for a 512-point spectrum at 10 kHz.
fn band_bins() -> [(usize, usize); BAND_COUNT] {
    let edge = 2f64.powf(1.0 / 6.0);
    let bin_hz = METRICS_RATE as f64 / N_FFT as f64;
    third_octave_band_centers().map(|c| {
        let lo = ((c / edge) / bin_hz).ceil() as usize;
        let hi = ((c * edge) / bin_hz).ceil() as usize;
        (lo, hi.min(N_FFT / 2 + 1))
    })
}

/// Per-frame one-third-octave band energies of a 10 kHz signal.
pub fn third_octave_energies(w: &Waveform) -> Result<ThirdOctaveEnergies> {
    if w.sample_rate != METRICS_RATE {
        return Err(Error::Configuration(format!(
            "third-octave analysis runs at {METRICS_RATE} Hz, got {}",
            w.sample_rate
        )));
    }
    if w.len() < FRAME_LEN {
        return Err(Error::TooShort {
            needed: FRAME_LEN,
            got: w.len(),
        });
    }
    let bins = band_bins();
    let window = hann_window(FRAME_LEN);
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(N_FFT);
    let num_frames = (w.len() - FRAME_LEN) / HOP + 1;

    let mut frames = Vec::with_capacity(num_frames);
    let mut buf = vec![Complex::new(0.0, 0.0); N_FFT];
    for t in 0..num_frames {
        let start = t * HOP;
        for (n, b) in buf.iter_mut().enumerate() {
            *b = if n < FRAME_LEN {
                Complex::new(w.samples[start + n] * window[n], 0.0)
            } else {
                Complex::new(0.0, 0.0)
            };
        }
        fft.process(&mut buf);
        let energies: [f64; BAND_COUNT] =
            bins.map(|(lo, hi)| buf[lo..hi].iter().map(|c| c.norm_sqr()).sum());
        frames.push(energies);
    }
    Ok(ThirdOctaveEnergies {
        frames,
        hop: HOP,
        sample_rate: METRICS_RATE,
    })
}
