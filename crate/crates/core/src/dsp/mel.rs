//! Mel-cepstral analysis.
//!
//! Per frame: power spectrum, 26 triangular mel filters spanning 0 to
//! Nyquist, log with a 1e-10 floor, orthonormal DCT-II, keep the first D
//! coefficients. A global gain change therefore lands entirely in `c_0`.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::audio::Waveform;
use crate::dsp::stft::hann_window;
use crate::error::{Error, Result};

pub const MEL_FILTER_COUNT: usize = 26;
pub const CEPSTRA_FRAME_MS: f64 = 25.0;
pub const CEPSTRA_HOP_MS: f64 = 10.0;
const LOG_FLOOR: f64 = 1e-10;

/// Frame-synchronous mel-cepstral coefficients `c_0..c_{D-1}`.
#[derive(Debug, Clone)]
pub struct CepstraTrack {
    pub frames: Vec<Vec<f64>>,
    pub order: usize,
    pub frame_len: usize,
    pub hop: usize,
    pub sample_rate: u32,
}

impl CepstraTrack {
    pub fn num_frames(&self) -> usize {
        self.frames.len()
    }

    /// Rows with `c_0` dropped, the feature used for alignment and
    /// conversion modelling.
    pub fn without_c0(&self) -> Vec<Vec<f64>> {
        self.frames.iter().map(|f| f[1..].to_vec()).collect()
    }
}

fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// Triangular mel filterbank over an `n_fft`-point half spectrum.
#[derive(Debug, Clone)]
pub struct MelFilterbank {
    /// Per filter: (first bin, weights).
    filters: Vec<(usize, Vec<f64>)>,
    centers_hz: Vec<f64>,
    pub n_fft: usize,
    pub sample_rate: u32,
}

impl MelFilterbank {
    pub fn new(sample_rate: u32, n_filters: usize, n_fft: usize) -> Self {
        let nyquist = sample_rate as f64 / 2.0;
        let mel_max = hz_to_mel(nyquist);
        let points: Vec<f64> = (0..n_filters + 2)
            .map(|i| mel_to_hz(mel_max * i as f64 / (n_filters + 1) as f64))
            .collect();
        let bin_hz = sample_rate as f64 / n_fft as f64;
        let bins = n_fft / 2 + 1;

        let mut filters = Vec::with_capacity(n_filters);
        for m in 0..n_filters {
            let (lo, mid, hi) = (points[m], points[m + 1], points[m + 2]);
            let first = (lo / bin_hz).ceil() as usize;
            let last = ((hi / bin_hz).floor() as usize).min(bins - 1);
            let mut weights = Vec::new();
            for k in first..=last {
                let f = k as f64 * bin_hz;
                let w = if f <= mid {
                    (f - lo) / (mid - lo)
                } else {
                    (hi - f) / (hi - mid)
                };
                weights.push(w.max(0.0));
            }
            // Unit-sum triangles: each filter averages rather than sums, so a
            // flat power spectrum maps to flat band energies.
            let sum: f64 = weights.iter().sum();
            if sum > 0.0 {
                for w in weights.iter_mut() {
                    *w /= sum;
                }
            }
            filters.push((first, weights));
        }
        Self {
            filters,
            centers_hz: points[1..=n_filters].to_vec(),
            n_fft,
            sample_rate,
        }
    }

    pub fn num_filters(&self) -> usize {
        self.filters.len()
    }

    /// Center frequency of each filter in Hz.
    pub fn centers_hz(&self) -> &[f64] {
        &self.centers_hz
    }

    /// Band energies of a half power spectrum (`n_fft/2 + 1` bins).
    pub fn apply(&self, power: &[f64]) -> Vec<f64> {
        self.filters
            .iter()
            .map(|(first, weights)| {
                weights
                    .iter()
                    .enumerate()
                    .map(|(i, w)| w * power[first + i])
                    .sum()
            })
            .collect()
    }

    /// Log band energies with the standard floor applied.
    pub fn log_energies(&self, power: &[f64]) -> Vec<f64> {
        self.apply(power)
            .iter()
            .map(|&e| e.max(LOG_FLOOR).ln())
            .collect()
    }
}

/// Orthonormal DCT-II, truncated to `out_dim` coefficients.
pub fn dct_ii_orthonormal(x: &[f64], out_dim: usize) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(out_dim);
    for k in 0..out_dim {
        let mut acc = 0.0;
        for (i, &v) in x.iter().enumerate() {
            acc += v
                * (std::f64::consts::PI * k as f64 * (2.0 * i as f64 + 1.0) / (2.0 * n as f64))
                    .cos();
        }
        let scale = if k == 0 {
            (1.0 / n as f64).sqrt()
        } else {
            (2.0 / n as f64).sqrt()
        };
        out.push(scale * acc);
    }
    out
}

/// Inverse of the orthonormal DCT-II for a truncated coefficient vector:
/// missing coefficients are treated as zero.
pub fn idct_iii_orthonormal(c: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = c[0] * (1.0 / n as f64).sqrt();
        for (k, &v) in c.iter().enumerate().skip(1) {
            acc += v
                * (2.0 / n as f64).sqrt()
                * (std::f64::consts::PI * k as f64 * (2.0 * i as f64 + 1.0) / (2.0 * n as f64))
                    .cos();
        }
        *o = acc;
    }
    out
}

pub(crate) fn ms_to_samples(ms: f64, rate: u32) -> usize {
    (ms * rate as f64 / 1000.0).round() as usize
}

/// Mel cepstra on 25 ms frames with a 10 ms hop.
pub fn mel_cepstra(w: &Waveform, order: usize) -> Result<CepstraTrack> {
    let frame_len = ms_to_samples(CEPSTRA_FRAME_MS, w.sample_rate);
    let hop = ms_to_samples(CEPSTRA_HOP_MS, w.sample_rate);
    mel_cepstra_framed(w, order, frame_len, hop)
}

/// Mel cepstra with explicit framing.
pub fn mel_cepstra_framed(
    w: &Waveform,
    order: usize,
    frame_len: usize,
    hop: usize,
) -> Result<CepstraTrack> {
    if !(2..=MEL_FILTER_COUNT).contains(&order) {
        return Err(Error::Configuration(format!(
            "cepstral order {order} out of range [2, {MEL_FILTER_COUNT}]"
        )));
    }
    if w.len() < frame_len {
        return Err(Error::TooShort {
            needed: frame_len,
            got: w.len(),
        });
    }
    let n_fft = frame_len.next_power_of_two().max(256);
    let bank = MelFilterbank::new(w.sample_rate, MEL_FILTER_COUNT, n_fft);
    let window = hann_window(frame_len);
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n_fft);
    let bins = n_fft / 2 + 1;

    let num_frames = (w.len() - frame_len) / hop + 1;
    let mut frames = Vec::with_capacity(num_frames);
    let mut buf = vec![Complex::new(0.0, 0.0); n_fft];
    for t in 0..num_frames {
        let start = t * hop;
        for (n, b) in buf.iter_mut().enumerate() {
            *b = if n < frame_len {
                Complex::new(w.samples[start + n] * window[n], 0.0)
            } else {
                Complex::new(0.0, 0.0)
            };
        }
        fft.process(&mut buf);
        let power: Vec<f64> = buf[..bins].iter().map(|c| c.norm_sqr()).collect();
        let logmel = bank.log_energies(&power);
        frames.push(dct_ii_orthonormal(&logmel, order));
    }
    Ok(CepstraTrack {
        frames,
        order,
        frame_len,
        hop,
        sample_rate: w.sample_rate,
    })
}
