//! Vector-scalar kernels P(x,y) = α ξ̸ + β in Minkowski space, Dirac
//! representation, metric (+,−,−,−).

use serde::{Deserialize, Serialize};

use crate::causal::{classify_roots, Classification};
use crate::linalg::{CMat, C64, I, ONE, ZERO};
use crate::{Error, Result};

/// Minkowski product with signature (+,−,−,−).
pub fn minkowski_dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

/// γ⁰..γ³ in the Dirac representation.
pub fn gamma_matrices() -> [CMat; 4] {
    let z = ZERO;
    let g0 = CMat::from_row_slice(4, 4, &[ONE, z, z, z, z, ONE, z, z, z, z, -ONE, z, z, z, z, -ONE]);
    let sigma = [
        [z, ONE, ONE, z],
        [z, -I, I, z],
        [ONE, z, z, -ONE],
    ];
    let mut out = [g0.clone(), g0.clone(), g0.clone(), g0];
    for (k, s) in sigma.iter().enumerate() {
        let mut g = CMat::zeros(4, 4);
        for r in 0..2 {
            for c in 0..2 {
                g[(r, c + 2)] = s[2 * r + c];
                g[(r + 2, c)] = -s[2 * r + c];
            }
        }
        out[k + 1] = g;
    }
    out
}

/// ξ̸ = ξ_j γ^j.
pub fn slash(xi: &[f64; 4]) -> CMat {
    let g = gamma_matrices();
    let lowered = [xi[0], -xi[1], -xi[2], -xi[3]];
    let mut out = CMat::zeros(4, 4);
    for j in 0..4 {
        out += &g[j] * C64::new(lowered[j], 0.0);
    }
    out
}

/// P(x,y) = α ξ̸ + β with ξ = y − x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorScalarKernel {
    pub alpha: C64,
    pub beta: C64,
    pub xi: [f64; 4],
}

impl VectorScalarKernel {
    pub fn new(alpha: C64, beta: C64, xi: [f64; 4]) -> Self {
        Self { alpha, beta, xi }
    }

    pub fn xi_sq(&self) -> f64 {
        minkowski_dot(&self.xi, &self.xi)
    }

    /// P(y,x), represented by (ᾱ, β̄, ξ).
    pub fn reversed(&self) -> Self {
        Self { alpha: self.alpha.conj(), beta: self.beta.conj(), xi: self.xi }
    }

    pub fn matrix(&self) -> CMat {
        slash(&self.xi) * self.alpha + CMat::identity(4, 4) * self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainCoefficients {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinkowskiChain {
    pub coefficients: ChainCoefficients,
    /// b ± √(a²ξ²), each twice, sorted by (Re, Im).
    pub roots: Vec<C64>,
    /// A_xy = b + a ξ̸.
    pub matrix: CMat,
}

impl MinkowskiChain {
    pub fn classify(&self, tau_im: f64, tau_mod: f64) -> Classification {
        classify_roots(&self.roots, tau_im, tau_mod)
    }
}

pub fn chain_coefficients(k: &VectorScalarKernel) -> ChainCoefficients {
    let a = 2.0 * (k.alpha * k.beta.conj()).re;
    let b = k.alpha.norm_sqr() * k.xi_sq() + k.beta.norm_sqr();
    ChainCoefficients { a, b }
}

pub fn minkowski_chain(k: &VectorScalarKernel) -> MinkowskiChain {
    let c = chain_coefficients(k);
    let xi_sq = k.xi_sq();
    let root = if xi_sq >= 0.0 { C64::new(c.a * xi_sq.sqrt(), 0.0) } else { C64::new(0.0, c.a * (-xi_sq).sqrt()) };
    let b = C64::new(c.b, 0.0);
    let mut roots = vec![b + root, b + root, b - root, b - root];
    crate::linalg::sort_roots(&mut roots);
    let matrix = slash(&k.xi) * C64::new(c.a, 0.0) + CMat::identity(4, 4) * b;
    MinkowskiChain { coefficients: c, roots, matrix }
}

/// ℳ[A_xy] for L = |A²| − ¼|A|²: 2A − ½Tr(A)𝟙 = 2aξ̸ for timelike ξ, zero
/// for spacelike ξ. Undefined within `tol` of the light cone.
pub fn minkowski_gradient(k: &VectorScalarKernel, tol: f64) -> Result<CMat> {
    let xi_sq = k.xi_sq();
    if xi_sq.abs() <= tol {
        return Err(Error::LightConeUndefined { xi_sq });
    }
    if xi_sq < 0.0 {
        return Ok(CMat::zeros(4, 4));
    }
    let chain = minkowski_chain(k);
    let a = &chain.matrix;
    let tr = crate::linalg::trace(a);
    let m = a * C64::new(2.0, 0.0) - CMat::identity(4, 4) * (tr * 0.5);
    let vector = slash(&k.xi) * C64::new(2.0 * chain.coefficients.a, 0.0);
    let scale = 1.0 + m.norm();
    if (&m - &vector).norm() > 1e-10 * scale {
        return Err(Error::InvalidInput("trace-free part of the chain is not proportional to ξ̸".into()));
    }
    Ok(m)
}

/// Q(x,y) = ½ ℳ[A_xy] P(x,y), using ℳ[A_xy] = ℳ[A_yx].
pub fn minkowski_q(k: &VectorScalarKernel, tol: f64) -> Result<CMat> {
    Ok(minkowski_gradient(k, tol)? * k.matrix() * C64::new(0.5, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::CausalClass;
    use crate::indefinite::{functional_gradient, Functional};
    use crate::Tolerances;

    fn k(a: f64, b: f64, xi: [f64; 4]) -> VectorScalarKernel {
        VectorScalarKernel::new(C64::new(a, 0.0), C64::new(b, 0.0), xi)
    }

    #[test]
    fn clifford_relations() {
        let g = gamma_matrices();
        let eta = [1.0, -1.0, -1.0, -1.0];
        for i in 0..4 {
            for j in 0..4 {
                let anti = &g[i] * &g[j] + &g[j] * &g[i];
                let expect = CMat::identity(4, 4) * C64::new(if i == j { 2.0 * eta[i] } else { 0.0 }, 0.0);
                assert!((anti - expect).norm() < 1e-14);
            }
        }
        let xi = [0.3, -1.2, 0.5, 2.0];
        let s = slash(&xi);
        assert!((&s * &s - CMat::identity(4, 4) * C64::new(minkowski_dot(&xi, &xi), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn timelike_example() {
        let ch = minkowski_chain(&k(1.0, 1.0, [1.0, 0.0, 0.0, 0.0]));
        assert_eq!(ch.coefficients, ChainCoefficients { a: 2.0, b: 2.0 });
        let re: Vec<f64> = ch.roots.iter().map(|z| z.re).collect();
        assert_eq!(re, vec![0.0, 0.0, 4.0, 4.0]);
        assert!(ch.roots.iter().all(|z| z.im == 0.0));
        assert_eq!(ch.classify(1e-9, 1e-9).class, CausalClass::Timelike);
    }

    #[test]
    fn spacelike_example() {
        let ch = minkowski_chain(&k(1.0, 1.0, [0.0, 1.0, 0.0, 0.0]));
        assert_eq!(ch.coefficients, ChainCoefficients { a: 2.0, b: 0.0 });
        for z in &ch.roots {
            assert!((z.norm() - 2.0).abs() < 1e-15 && z.re == 0.0);
        }
        assert_eq!(ch.classify(1e-9, 1e-9).class, CausalClass::Spacelike);
    }

    #[test]
    fn scalar_free_kernel_has_degenerate_roots() {
        let ch = minkowski_chain(&k(1.5, 0.0, [2.0, 1.0, 0.0, 0.5]));
        assert_eq!(ch.coefficients.a, 0.0);
        let b = ch.coefficients.b;
        assert!(ch.roots.iter().all(|z| *z == C64::new(b, 0.0)));
        assert_eq!(crate::indefinite::critical_lagrangian_pairwise(&ch.roots), 0.0);
    }

    #[test]
    fn roots_match_matrix_spectrum() {
        let kern = VectorScalarKernel::new(C64::new(0.4, -1.1), C64::new(0.7, 0.2), [1.3, 0.2, -0.4, 0.5]);
        let ch = minkowski_chain(&kern);
        let direct = kern.matrix() * kern.reversed().matrix();
        assert!((&direct - &ch.matrix).norm() < 1e-12);
        let mut ev = crate::linalg::eigenvalues(&direct).unwrap();
        crate::linalg::sort_roots(&mut ev);
        for (a, b) in ev.iter().zip(&ch.roots) {
            assert!((a - b).norm() < 1e-6);
        }
    }

    #[test]
    fn gradient_forms() {
        let m = minkowski_gradient(&k(1.0, 1.0, [1.0, 0.0, 0.0, 0.0]), 1e-9).unwrap();
        let g0 = &gamma_matrices()[0];
        assert!((m - g0 * C64::new(4.0, 0.0)).norm() < 1e-14);
        let zero = minkowski_gradient(&k(1.0, 1.0, [0.2, 1.0, 0.0, 0.0]), 1e-9).unwrap();
        assert_eq!(zero, CMat::zeros(4, 4));
        assert!(matches!(
            minkowski_gradient(&k(1.0, 1.0, [1.0, 1.0, 0.0, 0.0]), 1e-9),
            Err(Error::LightConeUndefined { .. })
        ));
    }

    #[test]
    fn gradient_is_symmetric_under_swap() {
        let kern = VectorScalarKernel::new(C64::new(0.4, -1.1), C64::new(0.7, 0.2), [1.3, 0.2, -0.4, 0.5]);
        let a = minkowski_gradient(&kern, 1e-9).unwrap();
        let b = minkowski_gradient(&kern.reversed(), 1e-9).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn gradient_agrees_with_spectral_gradient() {
        let kern = VectorScalarKernel::new(C64::new(0.4, -1.1), C64::new(0.7, 0.2), [1.3, 0.2, -0.4, 0.5]);
        let m = minkowski_gradient(&kern, 1e-9).unwrap();
        let g = functional_gradient(&minkowski_chain(&kern).matrix, Functional::lagrangian(0.25), &Tolerances::default())
            .unwrap();
        assert!((m - g.matrix).norm() < 1e-8);
    }
}
