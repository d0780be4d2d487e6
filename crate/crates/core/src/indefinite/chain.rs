
use super::projector::FermionicProjector;
use crate::linalg::{eigenvalues, sort_roots, CMat, C64};
use crate::Result;

/// Closed chain A_xy = P(x,y) P(y,x) on E_x(H) with its characteristic roots.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedChain {
    pub x: usize,
    pub y: usize,
    pub matrix: CMat,
    /// Roots sorted by (Re, Im).
    pub roots: Vec<C64>,
}

impl ClosedChain {
    pub fn from_matrix(x: usize, y: usize, matrix: CMat) -> Result<Self> {
        let mut roots = eigenvalues(&matrix)?;
        sort_roots(&mut roots);
        Ok(Self { x, y, matrix, roots })
    }
}

pub fn closed_chain(p: &FermionicProjector, x: usize, y: usize) -> Result<ClosedChain> {
    let pxy = p.kernel(x, y)?;
    let pyx = p.kernel(y, x)?;
    ClosedChain::from_matrix(x, y, pxy * pyx)
}

/// All m² chains, indexed as `[x * m + y]`.
pub fn all_chains(p: &FermionicProjector) -> Result<Vec<ClosedChain>> {
    let m = p.space().m();
    let kernels = p.kernels();
    let mut out = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            out.push(ClosedChain::from_matrix(x, y, &kernels[x * m + y] * &kernels[y * m + x])?);
        }
    }
    Ok(out)
}
