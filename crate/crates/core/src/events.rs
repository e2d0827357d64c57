//! Excitation-event analysis: glottal closure instants and voicing.
//!
//! GCIs are read off the zero-frequency-filtered signal, whose
//! negative-to-positive zero crossings line up with the strong excitation
//! impulse of each pitch cycle. Voicing is a deterministic three-feature
//! frame rule used to gate the temporal transforms.

use crate::audio::Waveform;
use crate::dsp::mel::ms_to_samples;
use crate::error::{Error, Result};

/// Sorted glottal closure instants (sample indices) plus the mean pitch
/// period used during detection.
#[derive(Debug, Clone)]
pub struct GciSequence {
    pub instants: Vec<usize>,
    pub mean_period: f64,
}

impl GciSequence {
    pub fn is_empty(&self) -> bool {
        self.instants.is_empty()
    }
}

/// Per-frame voiced flags on 25 ms frames with a 10 ms hop.
#[derive(Debug, Clone)]
pub struct VoicingTrack {
    pub voiced: Vec<bool>,
    pub frame_len: usize,
    pub hop: usize,
}

impl VoicingTrack {
    pub fn voiced_fraction(&self) -> f64 {
        if self.voiced.is_empty() {
            return 0.0;
        }
        self.voiced.iter().filter(|v| **v).count() as f64 / self.voiced.len() as f64
    }
}

const MIN_PITCH_HZ: f64 = 50.0;
const MAX_PITCH_HZ: f64 = 400.0;

/// Mean pitch period in samples from the normalized autocorrelation peak in
/// the 50-400 Hz lag range, clamped to [2.5 ms, 20 ms].
pub(crate) fn estimate_pitch_period(samples: &[f64], rate: u32) -> f64 {
    let min_lag = (rate as f64 / MAX_PITCH_HZ).floor() as usize;
    let max_lag = ((rate as f64 / MIN_PITCH_HZ).ceil() as usize).min(samples.len() / 2);
    let fallback = rate as f64 / 150.0;
    if max_lag <= min_lag {
        return fallback;
    }
    let energy: f64 = samples.iter().map(|s| s * s).sum();
    if energy <= 0.0 {
        return fallback;
    }
    let mut best = (fallback, 0.0);
    for lag in min_lag..=max_lag {
        let r: f64 = samples[..samples.len() - lag]
            .iter()
            .zip(&samples[lag..])
            .map(|(a, b)| a * b)
            .sum();
        let norm = r / energy;
        if norm > best.1 {
            best = (lag as f64, norm);
        }
    }
    let period = if best.1 > 0.0 { best.0 } else { fallback };
    period.clamp(2.5e-3 * rate as f64, 20e-3 * rate as f64)
}

fn cumsum_twice(x: &mut [f64]) {
    for _ in 0..2 {
        let mut acc = 0.0;
        for v in x.iter_mut() {
            acc += *v;
            *v = acc;
        }
    }
}

/// Subtract a centered moving average of half-width `half` (window
/// `2*half + 1`, shrinking at the edges).
fn remove_trend(x: &[f64], half: usize) -> Vec<f64> {
    let n = x.len();
    let mut prefix = vec![0.0f64; n + 1];
    for (i, &v) in x.iter().enumerate() {
        prefix[i + 1] = prefix[i] + v;
    }
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            x[i] - (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// Zero-frequency filtering: two resonator passes, each a cumulative double
/// integration followed by moving-average trend removal over one estimated
/// mean pitch period. The input mean is removed up front so a DC offset
/// cannot leak through the integrators.
pub fn zero_frequency_filter(w: &Waveform) -> Result<Waveform> {
    let min_len = ms_to_samples(100.0, w.sample_rate);
    if w.len() < min_len {
        return Err(Error::TooShort {
            needed: min_len,
            got: w.len(),
        });
    }
    let period = estimate_pitch_period(&w.samples, w.sample_rate);
    let half = (period / 2.0).round().max(1.0) as usize;

    let mean = w.samples.iter().sum::<f64>() / w.len() as f64;
    let mut y: Vec<f64> = w.samples.iter().map(|s| s - mean).collect();
    for _ in 0..2 {
        cumsum_twice(&mut y);
        y = remove_trend(&y, half);
    }
    Ok(Waveform::new(y, w.sample_rate))
}

/// GCIs as negative-to-positive zero crossings of the zero-frequency-filtered
/// signal. Crossings closer than a quarter of the mean period are merged,
/// keeping the one with the steeper local slope. An empty result is valid
/// (silence has no excitation events).
pub fn detect_gci(w: &Waveform) -> Result<GciSequence> {
    let zff = zero_frequency_filter(w)?;
    let period = estimate_pitch_period(&w.samples, w.sample_rate);
    let min_gap = (0.25 * period).round() as usize;

    let slope_at = |n: usize| -> f64 {
        let lo = n.saturating_sub(1);
        let hi = (n + 1).min(zff.len() - 1);
        (zff.samples[hi] - zff.samples[lo]) / (hi - lo).max(1) as f64
    };

    let mut instants: Vec<usize> = Vec::new();
    for n in 1..zff.len() {
        if zff.samples[n - 1] < 0.0 && zff.samples[n] >= 0.0 {
            if let Some(&last) = instants.last() {
                if n - last < min_gap {
                    if slope_at(n) > slope_at(last) {
                        *instants.last_mut().unwrap() = n;
                    }
                    continue;
                }
            }
            instants.push(n);
        }
    }

    let mean_period = if instants.len() >= 2 {
        (instants[instants.len() - 1] - instants[0]) as f64 / (instants.len() - 1) as f64
    } else {
        period
    };
    Ok(GciSequence {
        instants,
        mean_period,
    })
}

/// Frame-level voicing: a frame is voiced when it carries energy (above 1%
/// of the loudest frame), has a low zero-crossing rate (< 0.25 per sample),
/// and shows a periodicity peak above 0.3 in the 50-400 Hz lag range.
pub fn voicing(w: &Waveform) -> VoicingTrack {
    let frame_len = ms_to_samples(25.0, w.sample_rate);
    let hop = ms_to_samples(10.0, w.sample_rate);
    if w.len() < frame_len {
        return VoicingTrack {
            voiced: vec![],
            frame_len,
            hop,
        };
    }
    let num_frames = (w.len() - frame_len) / hop + 1;
    let frame_energy = |t: usize| -> f64 {
        let s = &w.samples[t * hop..t * hop + frame_len];
        s.iter().map(|v| v * v).sum::<f64>() / frame_len as f64
    };
    let max_energy = (0..num_frames).map(frame_energy).fold(0.0f64, f64::max);

    let min_lag = (w.sample_rate as f64 / MAX_PITCH_HZ).floor() as usize;
    let max_lag = ((w.sample_rate as f64 / MIN_PITCH_HZ).ceil() as usize).min(frame_len - 1);

    let voiced = (0..num_frames)
        .map(|t| {
            let s = &w.samples[t * hop..t * hop + frame_len];
            let energy = frame_energy(t);
            if max_energy <= 0.0 || energy <= 0.01 * max_energy {
                return false;
            }
            let crossings = s.windows(2).filter(|p| (p[0] < 0.0) != (p[1] < 0.0)).count();
            let zcr = crossings as f64 / frame_len as f64;
            if zcr >= 0.25 {
                return false;
            }
            let e: f64 = s.iter().map(|v| v * v).sum();
            let mut peak = 0.0f64;
            for lag in min_lag..=max_lag {
                let r: f64 = s[..frame_len - lag]
                    .iter()
                    .zip(&s[lag..])
                    .map(|(a, b)| a * b)
                    .sum();
                peak = peak.max(r / e);
            }
            peak > 0.3
        })
        .collect();

    VoicingTrack {
        voiced,
        frame_len,
        hop,
    }
}
