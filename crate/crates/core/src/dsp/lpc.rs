//! Linear prediction by the autocorrelation method.
//!
//! Coefficient convention: `A(z) = 1 + a_1 z^-1 + ... + a_p z^-p`, so the
//! residual is `e[n] = x[n] + sum_k a_k x[n-k]` and the synthesis filter is
//! `1/A(z)`. Inverse filtering followed by synthesis filtering is an exact
//! algebraic identity.

use crate::error::{Error, Result};

/// Autocorrelation LPC via Levinson-Durbin. Returns the coefficients
/// `a_1..a_p` and the inverse-filtered residual.
pub fn lpc(frame: &[f64], order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order >= frame.len() {
        return Err(Error::Configuration(format!(
            "lpc order {order} must be below frame length {}",
            frame.len()
        )));
    }
    let mut r = vec![0.0f64; order + 1];
    for (k, rk) in r.iter_mut().enumerate() {
        *rk = frame[..frame.len() - k]
            .iter()
            .zip(&frame[k..])
            .map(|(a, b)| a * b)
            .sum();
    }
    if r[0] <= 0.0 {
        return Err(Error::DegenerateSignal(
            "all-zero frame has a singular autocorrelation".into(),
        ));
    }

    let mut a = vec![0.0f64; order];
    let mut err = r[0];
    for i in 0..order {
        let mut acc = r[i + 1];
        for j in 0..i {
            acc += a[j] * r[i - j];
        }
        if err <= 0.0 {
            return Err(Error::DegenerateSignal(
                "prediction error vanished during Levinson recursion".into(),
            ));
        }
        let k = -acc / err;
        a[i] = k;
        for j in 0..i / 2 + i % 2 {
            let tmp = a[j] + k * a[i - 1 - j];
            a[i - 1 - j] += k * a[j];
            a[j] = tmp;
        }
        err *= 1.0 - k * k;
    }

    let residual = inverse_filter(frame, &a);
    Ok((a, residual))
}

/// `e[n] = x[n] + sum_k a_k x[n-k]`, with x taken as zero before the frame.
pub fn inverse_filter(x: &[f64], coeffs: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0f64; x.len()];
    for n in 0..x.len() {
        let mut acc = x[n];
        for (k, &a) in coeffs.iter().enumerate() {
            if n > k {
                acc += a * x[n - 1 - k];
            }
        }
        e[n] = acc;
    }
    e
}

/// All-pole synthesis: `x[n] = e[n] - sum_k a_k x[n-k]`.
pub fn synthesis_filter(e: &[f64], coeffs: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0f64; e.len()];
    for n in 0..e.len() {
        let mut acc = e[n];
        for (k, &a) in coeffs.iter().enumerate() {
            if n > k {
                acc -= a * x[n - 1 - k];
            }
        }
        x[n] = acc;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn white(len: usize, seed: u64) -> Vec<f64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }

    #[test]
    fn recovers_known_ar2_coefficients() {
        let (a1, a2) = (-1.5, 0.7);
        let e = white(4096, 42);
        let mut x = vec![0.0f64; e.len()];
        for n in 0..e.len() {
            let mut v = e[n];
            if n > 0 {
                v -= a1 * x[n - 1];
            }
            if n > 1 {
                v -= a2 * x[n - 2];
            }
            x[n] = v;
        }
        let (coeffs, _) = lpc(&x, 2).unwrap();
        assert!((coeffs[0] - a1).abs() < 0.05, "a1 = {}", coeffs[0]);
        assert!((coeffs[1] - a2).abs() < 0.05, "a2 = {}", coeffs[1]);
    }

    #[test]
    fn white_noise_has_no_prediction_gain() {
        let x = white(16_000, 7);
        let (_, residual) = lpc(&x, 12).unwrap();
        let ex: f64 = x.iter().map(|v| v * v).sum();
        let er: f64 = residual.iter().map(|v| v * v).sum();
        let gain_db = 10.0 * (ex / er).log10();
        assert!(gain_db.abs() <= 1.0, "prediction gain {gain_db:.2} dB");
    }

    #[test]
    fn inverse_then_synthesis_is_exact() {
        let x = white(2048, 3);
        let (coeffs, residual) = lpc(&x, 12).unwrap();
        let back = synthesis_filter(&residual, &coeffs);
        let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).abs() <= 1e-6 * peak);
        }
    }

    #[test]
    fn all_zero_frame_is_degenerate() {
        assert!(matches!(
            lpc(&[0.0; 256], 12),
            Err(Error::DegenerateSignal(_))
        ));
    }
}
