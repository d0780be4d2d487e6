//! Mass-cone geometry in momentum space and the support of the
//! convolution of the gradient distribution with the Dirac sea shells.

use serde::{Deserialize, Serialize};

use super::SeaConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeRegion {
    UpperCone,
    LowerCone,
    Outside,
    Boundary,
}

/// k² with signature (+,−,…,−) for a momentum of any dimension ≥ 1.
pub fn minkowski_square(k: &[f64]) -> f64 {
    k.first().map_or(0.0, |k0| k0 * k0) - k.iter().skip(1).map(|x| x * x).sum::<f64>()
}

pub fn mass_cone_classify(k: &[f64], tol: f64) -> ConeRegion {
    let ksq = minkowski_square(k);
    if ksq.abs() <= tol {
        ConeRegion::Boundary
    } else if ksq < 0.0 {
        ConeRegion::Outside
    } else if k[0] > 0.0 {
        ConeRegion::UpperCone
    } else {
        ConeRegion::LowerCone
    }
}

/// Compact piece of the lower mass shell p = (−m cosh s, m sinh s) on which
/// q − p lies in the closed mass cone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellInterval {
    pub mass: f64,
    /// Rapidity range [s₋, s₊].
    pub rapidity: [f64; 2],
    /// Spatial momentum range m sinh s.
    pub momentum: [f64; 2],
    /// Energy range −m cosh s.
    pub energy: [f64; 2],
}

/// 1+1 dimensional support of the convolution at q. With q = (−M cosh θ,
/// M sinh θ) one has (q − p)² = M² + m² − 2Mm cosh(s − θ), so the support is
/// |s − θ| ≤ |log(M/m)|.
pub fn convolution_support(q: [f64; 2], seas: &SeaConfig, tol: f64) -> Result<Vec<ShellInterval>> {
    if mass_cone_classify(&q, tol) != ConeRegion::LowerCone {
        return Err(Error::Unbounded { q: q.to_vec() });
    }
    let big_m = minkowski_square(&q).sqrt();
    let theta = (q[1] / big_m).asinh();
    Ok(seas
        .masses
        .iter()
        .map(|&m| {
            let half = (big_m / m).ln().abs();
            let (lo, hi) = (theta - half, theta + half);
            let e = [-m * lo.cosh(), -m * hi.cosh()];
            let energy = if lo <= 0.0 && hi >= 0.0 {
                [e[0].min(e[1]), -m]
            } else {
                [e[0].min(e[1]), e[0].max(e[1])]
            };
            ShellInterval { mass: m, rapidity: [lo, hi], momentum: [m * lo.sinh(), m * hi.sinh()], energy }
        })
        .collect())
}
