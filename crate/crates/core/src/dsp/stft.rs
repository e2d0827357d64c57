//! Short-time Fourier analysis and weighted overlap-add resynthesis.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::audio::Waveform;
use crate::error::{Error, Result};

/// Complex short-time spectrum. Frame `t` covers input samples
/// `[t*hop, t*hop + frame_len)`; each frame holds `frame_len/2 + 1` bins.
#[derive(Debug, Clone)]
pub struct Spectrogram {
    pub frames: Vec<Vec<Complex<f64>>>,
    pub frame_len: usize,
    pub hop: usize,
    pub sample_rate: u32,
}

impl Spectrogram {
    pub fn num_frames(&self) -> usize {
        self.frames.len()
    }

    pub fn num_bins(&self) -> usize {
        self.frame_len / 2 + 1
    }

    /// Frequency of bin `k` in Hz.
    pub fn bin_freq(&self, k: usize) -> f64 {
        k as f64 * self.sample_rate as f64 / self.frame_len as f64
    }

    fn validate(&self) -> Result<()> {
        let bins = self.num_bins();
        if self.hop == 0 || self.hop > self.frame_len {
            return Err(Error::Configuration(format!(
                "hop {} out of range for frame_len {}",
                self.hop, self.frame_len
            )));
        }
        for f in &self.frames {
            if f.len() != bins {
                return Err(Error::DimensionMismatch {
                    expected: bins,
                    got: f.len(),
                });
            }
        }
        Ok(())
    }
}

/// Periodic Hann window of length `len`.
pub fn hann_window(len: usize) -> Vec<f64> {
    (0..len)
        .map(|n| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * n as f64 / len as f64).cos()))
        .collect()
}

fn check_cola(frame_len: usize, hop: usize) -> Result<()> {
    if !frame_len.is_power_of_two() {
        return Err(Error::Configuration(format!(
            "frame_len {frame_len} must be a power of two"
        )));
    }
    if hop != frame_len / 2 && hop != frame_len / 4 {
        return Err(Error::Configuration(format!(
            "hop {hop} must be frame_len/2 or frame_len/4 for constant overlap-add"
        )));
    }
    Ok(())
}

/// Hann-windowed STFT. The signal must be at least one frame long.
pub fn stft(w: &Waveform, frame_len: usize, hop: usize) -> Result<Spectrogram> {
    check_cola(frame_len, hop)?;
    if w.len() < frame_len {
        return Err(Error::TooShort {
            needed: frame_len,
            got: w.len(),
        });
    }
    let window = hann_window(frame_len);
    let num_frames = (w.len() - frame_len) / hop + 1;
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(frame_len);
    let bins = frame_len / 2 + 1;

    let mut frames = Vec::with_capacity(num_frames);
    let mut buf = vec![Complex::new(0.0, 0.0); frame_len];
    for t in 0..num_frames {
        let start = t * hop;
        for (n, b) in buf.iter_mut().enumerate() {
            *b = Complex::new(w.samples[start + n] * window[n], 0.0);
        }
        fft.process(&mut buf);
        frames.push(buf[..bins].to_vec());
    }
    Ok(Spectrogram {
        frames,
        frame_len,
        hop,
        sample_rate: w.sample_rate,
    })
}

/// Weighted overlap-add inverse STFT.
///
/// Each frame is inverse-transformed, multiplied by the synthesis (Hann)
/// window, and accumulated; the accumulated squared-window sum is divided
/// out per sample. For an unmodified spectrogram this reconstructs the
/// input to machine precision away from the first/last frame.
pub fn istft(s: &Spectrogram, original_len: usize) -> Result<Waveform> {
    s.validate()?;
    let frame_len = s.frame_len;
    let window = hann_window(frame_len);
    let mut planner = FftPlanner::new();
    let ifft = planner.plan_fft_inverse(frame_len);

    let span = if s.frames.is_empty() {
        0
    } else {
        (s.frames.len() - 1) * s.hop + frame_len
    };
    let mut acc = vec![0.0f64; span.max(original_len)];
    let mut norm = vec![0.0f64; span.max(original_len)];
    let mut buf = vec![Complex::new(0.0, 0.0); frame_len];

    for (t, frame) in s.frames.iter().enumerate() {
        // Rebuild the full Hermitian spectrum from the half-spectrum.
        for k in 0..frame.len() {
            buf[k] = frame[k];
        }
        for k in frame.len()..frame_len {
            buf[k] = frame[frame_len - k].conj();
        }
        ifft.process(&mut buf);
        let start = t * s.hop;
        for n in 0..frame_len {
            let v = buf[n].re / frame_len as f64;
            acc[start + n] += v * window[n];
            norm[start + n] += window[n] * window[n];
        }
    }

    let mut out = vec![0.0f64; original_len];
    for (i, o) in out.iter_mut().enumerate() {
        if i < acc.len() && norm[i] > 1e-12 {
            *o = acc[i] / norm[i];
        }
    }
    Ok(Waveform::new(out, s.sample_rate))
}

/// STFT of the signal padded with `frame_len` zeros on both ends, so every
/// original sample sits in the fully-overlapped interior and a round trip
/// through [`istft_padded`] is exact everywhere.
pub fn stft_padded(w: &Waveform, frame_len: usize, hop: usize) -> Result<Spectrogram> {
    check_cola(frame_len, hop)?;
    let total = w.len() + 2 * frame_len;
    // Round up so the frame grid tiles the padded signal exactly.
    let grid = (total - frame_len).div_ceil(hop) * hop + frame_len;
    let mut padded = vec![0.0; frame_len];
    padded.extend_from_slice(&w.samples);
    padded.resize(grid, 0.0);
    stft(&Waveform::new(padded, w.sample_rate), frame_len, hop)
}

/// Inverse of [`stft_padded`]: resynthesize and strip the padding, returning
/// exactly `original_len` samples.
pub fn istft_padded(s: &Spectrogram, original_len: usize) -> Result<Waveform> {
    let full = istft(s, (s.frames.len() - 1) * s.hop + s.frame_len)?;
    let start = s.frame_len;
    let out = full.samples[start..start + original_len].to_vec();
    Ok(Waveform::new(out, s.sample_rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn noise(len: usize, seed: u64) -> Waveform {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Waveform::new((0..len).map(|_| rng.gen_range(-1.0..1.0)).collect(), 16_000)
    }

    #[test]
    fn dc_signal_puts_window_sum_in_bin_zero() {
        let w = Waveform::new(vec![1.0; 4096], 16_000);
        let s = stft(&w, 512, 128).unwrap();
        let wsum: f64 = hann_window(512).iter().sum();
        for frame in &s.frames {
            assert!((frame[0].norm() - wsum).abs() < 1e-9);
        }
    }

    #[test]
    fn tone_at_bin_center_shows_hann_leakage() {
        // Bin 32 of a 512-point frame at 16 kHz is 1000 Hz.
        let freq = 32.0 * 16_000.0 / 512.0;
        let w = Waveform::new(
            (0..8192)
                .map(|n| (2.0 * std::f64::consts::PI * freq * n as f64 / 16_000.0).cos())
                .collect(),
            16_000,
        );
        let s = stft(&w, 512, 128).unwrap();
        let frame = &s.frames[10];
        let peak = frame[32].norm();
        // Periodic Hann: adjacent bins at half the peak, two bins out ~zero
        // (first sidelobe of the continuous window is -31.5 dB).
        assert!((frame[31].norm() / peak - 0.5).abs() < 1e-6);
        assert!((frame[33].norm() / peak - 0.5).abs() < 1e-6);
        assert!(frame[35].norm() / peak < 10f64.powf(-31.5 / 20.0));
    }

    #[test]
    fn zeros_give_all_zero_spectrogram() {
        let w = Waveform::new(vec![0.0; 2048], 16_000);
        let s = stft(&w, 512, 128).unwrap();
        assert!(s
            .frames
            .iter()
            .all(|f| f.iter().all(|c| c.norm() == 0.0)));
    }

    #[test]
    fn too_short_signal_is_rejected() {
        let w = Waveform::new(vec![0.0; 100], 16_000);
        assert!(matches!(
            stft(&w, 512, 128),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn round_trip_white_noise_interior() {
        for hop in [128, 256] {
            let w = noise(9000, 7);
            let s = stft(&w, 512, hop).unwrap();
            let back = istft(&s, w.len()).unwrap();
            let peak = w.samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
            for i in 512..w.len() - 512 {
                assert!(
                    (back.samples[i] - w.samples[i]).abs() <= 1e-6 * peak,
                    "hop {hop} sample {i}"
                );
            }
        }
    }

    #[test]
    fn all_zero_spectrogram_resynthesizes_to_zeros() {
        let s = Spectrogram {
            frames: vec![vec![Complex::new(0.0, 0.0); 257]; 20],
            frame_len: 512,
            hop: 128,
            sample_rate: 16_000,
        };
        let w = istft(&s, 2000).unwrap();
        assert!(w.samples.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn doubling_magnitude_doubles_interior_output() {
        let w = noise(8000, 11);
        let mut s = stft(&w, 512, 128).unwrap();
        for f in &mut s.frames {
            for c in f.iter_mut() {
                *c *= 2.0;
            }
        }
        let back = istft(&s, w.len()).unwrap();
        let peak = w.samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        for i in 512..w.len() - 512 {
            assert!((back.samples[i] - 2.0 * w.samples[i]).abs() <= 2e-6 * peak);
        }
    }

    #[test]
    fn inconsistent_metadata_is_rejected() {
        let s = Spectrogram {
            frames: vec![vec![Complex::new(0.0, 0.0); 100]; 4],
            frame_len: 512,
            hop: 128,
            sample_rate: 16_000,
        };
        assert!(istft(&s, 1000).is_err());
    }

    #[test]
    fn padded_round_trip_is_exact_everywhere() {
        let w = noise(5000, 3);
        let s = stft_padded(&w, 512, 128).unwrap();
        let back = istft_padded(&s, w.len()).unwrap();
        assert_eq!(back.len(), w.len());
        for i in 0..w.len() {
            assert!((back.samples[i] - w.samples[i]).abs() < 1e-10);
        }
    }
}
