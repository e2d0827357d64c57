//! Mono audio I/O and rate conversion.
//!
//! Everything downstream works on [`Waveform`]: finite `f64` samples in
//! [-1, 1] plus a sample rate. Files are RIFF/WAVE, 16-bit PCM or 32-bit
//! float; multi-channel input is averaged down to mono. Enhancement runs at
//! 16 kHz, intelligibility metrics at 10 kHz, storage stays at the source
//! rate.

use std::path::Path;

use crate::error::{Error, Result};

/// Sample rate used by the enhancement transforms.
pub const ENHANCE_RATE: u32 = 16_000;
/// Sample rate used by the intelligibility metrics.
pub const METRICS_RATE: u32 = 10_000;

/// A mono sample sequence with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

impl Waveform {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Self {
        debug_assert!(sample_rate > 0);
        Self {
            samples,
            sample_rate,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// Root-mean-square amplitude; 0 for an empty signal.
    pub fn rms(&self) -> f64 {
        rms(&self.samples)
    }

    /// Copy of the sample range `[start, end)`, keeping the sample rate.
    pub fn slice(&self, start: usize, end: usize) -> Waveform {
        Waveform::new(self.samples[start..end].to_vec(), self.sample_rate)
    }
}

pub(crate) fn rms(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let energy: f64 = samples.iter().map(|s| s * s).sum();
    (energy / samples.len() as f64).sqrt()
}

/// Read a RIFF/WAVE file into a mono waveform scaled to [-1, 1].
///
/// Accepts 16-bit PCM and 32-bit IEEE float; multi-channel content is
/// averaged to mono.
pub fn read_wav(path: impl AsRef<Path>) -> Result<Waveform> {
    let path = path.as_ref();
    let reader = hound::WavReader::open(path).map_err(|e| map_hound_err(path, e))?;
    let spec = reader.spec();
    let channels = spec.channels as usize;
    if channels == 0 {
        return Err(Error::Format {
            path: path.to_path_buf(),
            detail: "zero channels".into(),
        });
    }

    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => reader
            .into_samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| map_hound_err(path, e))?,
        (hound::SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(|v| v as f64))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| map_hound_err(path, e))?,
        (fmt, bits) => {
            return Err(Error::UnsupportedCodec {
                path: path.to_path_buf(),
                detail: format!("{bits}-bit {fmt:?} is not supported (PCM16 or float32 only)"),
            })
        }
    };

    let samples = if channels == 1 {
        interleaved
    } else {
        interleaved
            .chunks_exact(channels)
            .map(|frame| frame.iter().sum::<f64>() / channels as f64)
            .collect()
    };

    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::Format {
            path: path.to_path_buf(),
            detail: "non-finite sample data".into(),
        });
    }

    Ok(Waveform::new(samples, spec.sample_rate))
}

fn map_hound_err(path: &Path, e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::Io(io),
        hound::Error::FormatError(msg) => Error::Format {
            path: path.to_path_buf(),
            detail: msg.to_string(),
        },
        hound::Error::Unsupported => Error::UnsupportedCodec {
            path: path.to_path_buf(),
            detail: "unsupported encoding".into(),
        },
        other => Error::Format {
            path: path.to_path_buf(),
            detail: other.to_string(),
        },
    }
}

/// Write a waveform as a 16-bit PCM mono WAV file.
///
/// Samples outside [-1, 1] saturate rather than wrap, so a round trip
/// reproduces in-range samples within one quantization step (2^-15).
pub fn write_wav(w: &Waveform, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if w.samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::DegenerateSignal(
            "refusing to write non-finite samples".into(),
        ));
    }
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: w.sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(|e| map_hound_err(path, e))?;
    for &s in &w.samples {
        let q = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        writer.write_sample(q).map_err(|e| map_hound_err(path, e))?;
    }
    writer.finalize().map_err(|e| map_hound_err(path, e))?;
    Ok(())
}

/// Band-limited rational resampling (polyphase windowed sinc, Kaiser β=8,
/// 32 taps per branch). Equal rates return the input unchanged.
pub fn resample(w: &Waveform, target_rate: u32) -> Result<Waveform> {
    if target_rate == 0 {
        return Err(Error::Configuration("target_rate must be positive".into()));
    }
    if target_rate == w.sample_rate {
        return Ok(w.clone());
    }
    let g = gcd(w.sample_rate as u64, target_rate as u64);
    let up = (target_rate as u64 / g) as usize; // L
    let down = (w.sample_rate as u64 / g) as usize; // M

    let taps_per_branch = 32;
    // Odd length keeps the group delay at an integer number of upsampled
    // samples so it can be compensated exactly.
    let filter_len = taps_per_branch * up + 1;
    let center = taps_per_branch * up / 2;
    // Cutoff in cycles per upsampled sample: half the narrower of the two
    // Nyquist bands.
    let cutoff = 0.5 / up.max(down) as f64;
    let beta = 8.0;
    let mut h = vec![0.0f64; filter_len];
    for (n, tap) in h.iter_mut().enumerate() {
        let t = n as f64 - center as f64;
        *tap = 2.0 * cutoff * sinc(2.0 * cutoff * t) * kaiser(n, filter_len, beta) * up as f64;
    }

    let out_len = ((w.samples.len() as f64) * target_rate as f64 / w.sample_rate as f64).round()
        as usize;
    let x = &w.samples;
    let mut out = Vec::with_capacity(out_len);
    for j in 0..out_len {
        let u = j * down + center; // delay-compensated upsampled position
        let phase = u % up;
        let base = (u / up) as isize;
        let mut acc = 0.0;
        let mut k = phase;
        let mut idx = base;
        while k < filter_len {
            if idx >= 0 {
                if let Some(&xv) = x.get(idx as usize) {
                    acc += h[k] * xv;
                }
            }
            k += up;
            idx -= 1;
        }
        out.push(acc);
    }
    Ok(Waveform::new(out, target_rate))
}

/// Scale a signal so its RMS equals `target_rms`.
pub fn normalize_rms(w: &Waveform, target_rms: f64) -> Result<Waveform> {
    let current = w.rms();
    if current <= 0.0 {
        return Err(Error::DegenerateSignal(
            "cannot normalize an all-zero signal".into(),
        ));
    }
    let c = target_rms / current;
    Ok(Waveform::new(
        w.samples.iter().map(|s| s * c).collect(),
        w.sample_rate,
    ))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x)
    }
}

fn kaiser(n: usize, len: usize, beta: f64) -> f64 {
    let m = (len - 1) as f64;
    let r = 2.0 * n as f64 / m - 1.0;
    bessel_i0(beta * (1.0 - r * r).max(0.0).sqrt()) / bessel_i0(beta)
}

/// Modified Bessel function of the first kind, order zero (series expansion).
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..32 {
        term *= (half / k as f64) * (half / k as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}
