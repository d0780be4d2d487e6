//! Grid check that the Fourier transform of the gradient distribution
//! ℳ̃(ξ) = 2 ξ̸ a(ξ²) Θ(ξ²) ε(ξ⁰) in 1+1 dimensions is supported in the mass
//! cone.
//!
//! ℳ̃ does not decay along the light cone, so it is multiplied by a Gaussian
//! window of width σ before sampling. The window smears the transform by
//! about 1/σ in momentum space; energy counts as leaked only if it lies
//! outside the mass cone by more than `band_factor / σ` (Euclidean distance
//! to the cone lines).

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FourierConfig {
    /// Grid points per axis.
    pub n: usize,
    /// The grid covers [−L, L)² in position space.
    pub half_width: f64,
    pub window_sigma: f64,
    pub band_factor: f64,
    /// Largest windowed sample on the grid boundary, relative to the
    /// largest sample, that does not raise the edge warning.
    pub edge_tolerance: f64,
}

impl Default for FourierConfig {
    fn default() -> Self {
        Self { n: 256, half_width: 16.0, window_sigma: 4.0, band_factor: 3.0, edge_tolerance: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierReport {
    pub n: usize,
    /// Energy outside the resolution band around the mass cone over total.
    pub leakage: f64,
    /// Energy with k² < 0 over total, without the band.
    pub raw_leakage: f64,
    pub total_energy: f64,
    pub edge_ratio: f64,
    pub edge_warning: bool,
}

fn fft2(data: &mut [Complex<f64>], n: usize, planner: &mut FftPlanner<f64>) {
    let fft = planner.plan_fft_forward(n);
    for row in data.chunks_mut(n) {
        fft.process(row);
    }
    let mut col = vec![Complex::new(0.0, 0.0); n];
    for j in 0..n {
        for i in 0..n {
            col[i] = data[i * n + j];
        }
        fft.process(&mut col);
        for i in 0..n {
            data[i * n + j] = col[i];
        }
    }
}

fn frequency(j: usize, n: usize, dx: f64) -> f64 {
    let j = if j < n.div_ceil(2) { j as f64 } else { j as f64 - n as f64 };
    2.0 * std::f64::consts::PI * j / (n as f64 * dx)
}

pub fn fourier_support_check<F: Fn(f64) -> f64>(profile: F, cfg: &FourierConfig) -> Result<FourierReport> {
    if cfg.n < 4 || !(cfg.half_width > 0.0 && cfg.window_sigma > 0.0 && cfg.band_factor >= 0.0) {
        return Err(Error::InvalidInput(format!("invalid Fourier grid {cfg:?}")));
    }
    let n = cfg.n;
    let dx = 2.0 * cfg.half_width / n as f64;
    let coord = |i: usize| (i as f64 - (n / 2) as f64) * dx;
    let two_s2 = 2.0 * cfg.window_sigma * cfg.window_sigma;
    let mut c0 = vec![Complex::new(0.0, 0.0); n * n];
    let mut c1 = c0.clone();
    let (mut peak, mut edge) = (0.0f64, 0.0f64);
    for i in 0..n {
        let t = coord(i);
        for j in 0..n {
            let x = coord(j);
            let z = t * t - x * x;
            if z <= 0.0 {
                continue;
            }
            let a = profile(z);
            if !a.is_finite() {
                return Err(Error::InvalidInput(format!("profile is not finite at ξ² = {z}")));
            }
            let g = a * t.signum() * (-(t * t + x * x) / two_s2).exp();
            let (v0, v1) = (2.0 * t * g, 2.0 * x * g);
            let mag = v0.hypot(v1);
            peak = peak.max(mag);
            if i == 0 || j == 0 || i == n - 1 || j == n - 1 {
                edge = edge.max(mag);
            }
            c0[i * n + j] = Complex::new(v0, 0.0);
            c1[i * n + j] = Complex::new(v1, 0.0);
        }
    }
    let mut planner = FftPlanner::new();
    fft2(&mut c0, n, &mut planner);
    fft2(&mut c1, n, &mut planner);
    let band = cfg.band_factor / cfg.window_sigma;
    let (mut total, mut out, mut raw) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let k0 = frequency(i, n, dx);
        for j in 0..n {
            let k1 = frequency(j, n, dx);
            let e = c0[i * n + j].norm_sqr() + c1[i * n + j].norm_sqr();
            total += e;
            if k0 * k0 - k1 * k1 < 0.0 {
                raw += e;
                let dist = (k0 - k1).abs().min((k0 + k1).abs()) / std::f64::consts::SQRT_2;
                if dist > band {
                    out += e;
                }
            }
        }
    }
    let ratio = |x: f64| if total > 0.0 { x / total } else { 0.0 };
    let edge_ratio = if peak > 0.0 { edge / peak } else { 0.0 };
    Ok(FourierReport {
        n,
        leakage: ratio(out),
        raw_leakage: ratio(raw),
        total_energy: total,
        edge_ratio,
        edge_warning: edge_ratio > cfg.edge_tolerance,
    })
}

/// The profile shipped for the support check.
pub fn shipped_profile(z: f64) -> f64 {
    (-z).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_profile_has_no_leakage() {
        let r = fourier_support_check(|_| 0.0, &FourierConfig { n: 32, ..Default::default() }).unwrap();
        assert_eq!(r.leakage, 0.0);
        assert_eq!(r.total_energy, 0.0);
    }

    #[test]
    fn frequencies_follow_fft_layout() {
        assert_eq!(frequency(0, 8, 1.0), 0.0);
        assert!((frequency(3, 8, 1.0) - 3.0 * std::f64::consts::PI / 4.0).abs() < 1e-15);
        assert!((frequency(4, 8, 1.0) + std::f64::consts::PI).abs() < 1e-15);
        assert!((frequency(7, 8, 1.0) + std::f64::consts::PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn parseval_on_small_grid() {
        let cfg = FourierConfig { n: 16, ..Default::default() };
        let r = fourier_support_check(shipped_profile, &cfg).unwrap();
        let n = cfg.n;
        let dx = 2.0 * cfg.half_width / n as f64;
        let mut direct = 0.0;
        for i in 0..n {
            let t = (i as f64 - 8.0) * dx;
            for j in 0..n {
                let x = (j as f64 - 8.0) * dx;
                let z = t * t - x * x;
                if z > 0.0 {
                    let g = shipped_profile(z) * (-(t * t + x * x) / 32.0).exp();
                    direct += 4.0 * (t * t + x * x) * g * g;
                }
            }
        }
        assert!((r.total_energy / (n * n) as f64 - direct).abs() < 1e-10 * direct);
    }

    #[test]
    fn undecayed_profile_warns() {
        let cfg = FourierConfig { n: 64, window_sigma: 1e3, ..Default::default() };
        assert!(fourier_support_check(|_| 1.0, &cfg).unwrap().edge_warning);
    }
}
