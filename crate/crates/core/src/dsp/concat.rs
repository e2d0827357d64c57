//! Cross-faded concatenation of waveform segments.
//!
//! Adjacent segments overlap by the fade length and are blended with
//! complementary raised-cosine ramps (the ramps sum to one, so identical
//! overlapping content passes through unchanged). Total length is the sum
//! of the segment lengths minus one fade per joint.

use crate::audio::Waveform;
use crate::error::{Error, Result};

pub fn cross_fade_concat(segments: &[Waveform], fade_ms: f64) -> Result<Waveform> {
    let first = segments
        .first()
        .ok_or_else(|| Error::Configuration("no segments to concatenate".into()))?;
    let rate = first.sample_rate;
    let fade = (fade_ms * rate as f64 / 1000.0).round() as usize;

    for (i, seg) in segments.iter().enumerate() {
        if seg.sample_rate != rate {
            return Err(Error::Configuration(format!(
                "segment {i} rate {} differs from {rate}",
                seg.sample_rate
            )));
        }
        if seg.len() < 2 * fade {
            return Err(Error::TooShort {
                needed: 2 * fade,
                got: seg.len(),
            });
        }
    }

    let mut out = first.samples.clone();
    for seg in &segments[1..] {
        let joint = out.len() - fade;
        for t in 0..fade {
            let win_in =
                0.5 * (1.0 - (std::f64::consts::PI * (t as f64 + 0.5) / fade as f64).cos());
            let win_out = 1.0 - win_in;
            out[joint + t] = out[joint + t] * win_out + seg.samples[t] * win_in;
        }
        out.extend_from_slice(&seg.samples[fade..]);
    }
    Ok(Waveform::new(out, rate))
}
