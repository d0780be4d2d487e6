use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// |A| = Σ|λ_j|.
pub fn spectral_weight(roots: &[Complex64]) -> f64 {
    roots.iter().map(|z| z.norm()).sum()
}

/// |A²| = Σ|λ_j|², since the roots of A² are the squares of the roots of A.
pub fn spectral_weight_sq(roots: &[Complex64]) -> f64 {
    roots.iter().map(|z| z.norm_sqr()).sum()
}

/// L_μ = |A²| − μ|A|².
pub fn lagrangian(roots: &[Complex64], mu: f64) -> f64 {
    Functional::lagrangian(mu).value(roots)
}

/// (1/4n) Σ_{i,j} (|λ_i| − |λ_j|)² with 2n = number of roots; equals the
/// Lagrangian at μ = 1/(2n).
pub fn critical_lagrangian_pairwise(roots: &[Complex64]) -> f64 {
    if roots.is_empty() {
        return 0.0;
    }
    pairwise_spread(roots)
}

/// (1/k) Σ_{i<j} (|λ_i| − |λ_j|)² = |A²| − |A|²/k.
fn pairwise_spread(roots: &[Complex64]) -> f64 {
    let abs: Vec<f64> = roots.iter().map(|z| z.norm()).collect();
    let mut s = 0.0;
    for (i, a) in abs.iter().enumerate() {
        for b in &abs[i + 1..] {
            s += (a - b) * (a - b);
        }
    }
    s / abs.len() as f64
}

/// Critical multiplier μ = 1/(2n) for spin dimension n.
pub fn critical_mu(n: usize) -> f64 {
    1.0 / (2.0 * n as f64)
}

/// Per-chain functional a·|A²| + b·|A|². The Lagrangian L_μ is (1, −μ);
/// the constraint density |A|² is (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    pub a: f64,
    pub b: f64,
}

impl Functional {
    pub fn lagrangian(mu: f64) -> Self {
        Self { a: 1.0, b: -mu }
    }

    pub fn constraint() -> Self {
        Self { a: 0.0, b: 1.0 }
    }

    /// a·|A²| + b·|A|², evaluated as a·(|A²| − |A|²/k) + (a/k + b)·|A|² for
    /// k roots, with the first bracket summed pairwise. The direct form
    /// cancels catastrophically when the moduli nearly coincide.
    pub fn value(&self, roots: &[Complex64]) -> f64 {
        if roots.is_empty() {
            return 0.0;
        }
        let k = roots.len() as f64;
        let w = spectral_weight(roots);
        let spread = if self.a == 0.0 { 0.0 } else { pairwise_spread(roots) };
        self.a * spread + (self.a / k + self.b) * w * w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn weights_of_small_multisets() {
        assert_eq!(spectral_weight(&[c(1.0, 0.0), c(1.0, 0.0)]), 2.0);
        assert_eq!(spectral_weight_sq(&[c(1.0, 0.0), c(1.0, 0.0)]), 2.0);
        assert_eq!(spectral_weight(&[c(0.0, 1.0), c(0.0, -1.0)]), 2.0);
        assert_eq!(spectral_weight_sq(&[c(0.0, 1.0), c(0.0, -1.0)]), 2.0);
        assert_eq!(spectral_weight(&[c(3.0, 0.0), c(-1.0, 0.0)]), 4.0);
        assert_eq!(spectral_weight_sq(&[c(3.0, 0.0), c(-1.0, 0.0)]), 10.0);
    }

    #[test]
    fn lagrangian_examples() {
        let r = [c(3.0, 0.0), c(-1.0, 0.0)];
        assert_eq!(lagrangian(&r, 0.5), 2.0);
        assert_eq!(critical_lagrangian_pairwise(&r), 2.0);
        let z = c(0.3, -1.7);
        assert!(lagrangian(&[z, z.conj()], 0.5).abs() < 1e-15);
        assert_eq!(lagrangian(&[c(1.0, 0.0), c(0.0, 0.0)], 0.5), 0.5);
    }
}
