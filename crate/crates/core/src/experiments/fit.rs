//! One-parameter-nonlinear Gaussian fits: for a fixed width the model is
//! linear in its remaining coefficients, so the width is found by a log-grid
//! scan followed by golden-section refinement of the residual.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    pub amplitude: f64,
    pub sigma: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub offset: f64,
    pub amplitude: f64,
    pub sigma: f64,
    pub residual: f64,
}

fn gaussian(x: f64, sigma: f64) -> f64 {
    (-(x * x) / (2.0 * sigma * sigma)).exp()
}

fn check(x: &[f64], y: &[f64], min_len: usize) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if x.len() < min_len {
        return Err(Error::EmptyGrid);
    }
    let span = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if span <= 0.0 {
        return Err(Error::EmptyGrid);
    }
    Ok(span)
}

/// Minimizes `cost(σ)` over `σ ∈ [span/1000, 100·span]`.
fn minimize_width(span: f64, cost: impl Fn(f64) -> f64) -> f64 {
    let (lo, hi) = ((span * 1e-3).ln(), (span * 1e2).ln());
    let steps = 400;
    let mut best = 0;
    let mut best_cost = f64::INFINITY;
    for k in 0..=steps {
        let s = lo + (hi - lo) * k as f64 / steps as f64;
        let c = cost(s.exp());
        if c < best_cost {
            best_cost = c;
            best = k;
        }
    }
    let step = (hi - lo) / steps as f64;
    let (mut a, mut b) = (
        lo + step * (best as f64 - 1.0),
        lo + step * (best as f64 + 1.0),
    );
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..200 {
        if cost(c.exp()) < cost(d.exp()) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
        if (b - a).abs() < 1e-13 {
            break;
        }
    }
    (0.5 * (a + b)).exp()
}

/// Fits `y ≈ A·exp(−x²/2σ²)`.
pub fn fit_gaussian_lineshape(x: &[f64], y: &[f64]) -> Result<GaussianFit> {
    let span = check(x, y, 2)?;
    let solve = |sigma: f64| {
        let g: Vec<f64> = x.iter().map(|&v| gaussian(v, sigma)).collect();
        let gg: f64 = g.iter().map(|v| v * v).sum();
        let gy: f64 = g.iter().zip(y).map(|(a, b)| a * b).sum();
        let amp = if gg > 0.0 { gy / gg } else { 0.0 };
        let res: f64 = g.iter().zip(y).map(|(a, b)| (amp * a - b).powi(2)).sum();
        (amp, res)
    };
    let sigma = minimize_width(span, |s| solve(s).1);
    let (amplitude, residual) = solve(sigma);
    Ok(GaussianFit {
        amplitude,
        sigma,
        residual,
    })
}

/// Fits `y ≈ c + A·exp(−t²/2σ²)`.
pub fn fit_gaussian_decay(t: &[f64], y: &[f64]) -> Result<DecayFit> {
    let span = check(t, y, 3)?;
    let n = t.len() as f64;
    let solve = |sigma: f64| {
        let g: Vec<f64> = t.iter().map(|&v| gaussian(v, sigma)).collect();
        let sg: f64 = g.iter().sum();
        let sgg: f64 = g.iter().map(|v| v * v).sum();
        let sy: f64 = y.iter().sum();
        let sgy: f64 = g.iter().zip(y).map(|(a, b)| a * b).sum();
        let det = n * sgg - sg * sg;
        let (offset, amp) = if det.abs() > 1e-300 {
            ((sgg * sy - sg * sgy) / det, (n * sgy - sg * sy) / det)
        } else {
            (sy / n, 0.0)
        };
        let res: f64 = g
            .iter()
            .zip(y)
            .map(|(a, b)| (offset + amp * a - b).powi(2))
            .sum();
        (offset, amp, res)
    };
    let sigma = minimize_width(span, |s| solve(s).2);
    let (offset, amplitude, residual) = solve(sigma);
    Ok(DecayFit {
        offset,
        amplitude,
        sigma,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_lineshape_width() {
        let x: Vec<f64> = (0..21).map(|k| -100.0 + 10.0 * k as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| 0.1 * gaussian(v, 61.0)).collect();
        let fit = fit_gaussian_lineshape(&x, &y).unwrap();
        assert!((fit.sigma - 61.0).abs() < 1e-6, "{}", fit.sigma);
        assert!((fit.amplitude - 0.1).abs() < 1e-9);
    }

    #[test]
    fn recovers_decay() {
        let t: Vec<f64> = (0..31).map(|k| 0.1 * k as f64).collect();
        let y: Vec<f64> = t.iter().map(|&v| 0.5 + 0.44 * gaussian(v, 0.98)).collect();
        let fit = fit_gaussian_decay(&t, &y).unwrap();
        assert!((fit.sigma - 0.98).abs() < 1e-6);
        assert!((fit.offset - 0.5).abs() < 1e-8);
        assert!((fit.amplitude - 0.44).abs() < 1e-8);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(fit_gaussian_lineshape(&[0.0], &[1.0]).is_err());
        assert!(fit_gaussian_decay(&[0.0, 1.0], &[1.0]).is_err());
    }
}
