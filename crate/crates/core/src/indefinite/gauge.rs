use super::projector::FermionicProjector;
use super::space::DiscreteSpacetime;
use crate::linalg::{CMat, C64, I};
use crate::rng::{hermitian_gaussian, Rng};
use crate::{Error, Result};

/// Block-diagonal transformation with one indefinite-unitary 2n×2n block per
/// point. It commutes with every E_x.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTransform {
    space: DiscreteSpacetime,
    blocks: Vec<CMat>,
}

impl GaugeTransform {
    /// Validates U_xᴴ S U_x = S for every block.
    pub fn new(space: DiscreteSpacetime, blocks: Vec<CMat>, tol: f64) -> Result<Self> {
        if blocks.len() != space.m() {
            return Err(Error::Dimension(format!("{} gauge blocks for {} points", blocks.len(), space.m())));
        }
        let b = space.block_dim();
        let sig: Vec<f64> = space.block_signature();
        for u in &blocks {
            if u.nrows() != b || u.ncols() != b {
                return Err(Error::Dimension(format!("gauge block must be {b}×{b}")));
            }
            let mut su = u.clone();
            for (i, s) in sig.iter().enumerate() {
                if *s < 0.0 {
                    su.row_mut(i).neg_mut();
                }
            }
            let g = u.adjoint() * su;
            let mut dev: f64 = 0.0;
            for i in 0..b {
                for j in 0..b {
                    let target = if i == j { sig[i] } else { 0.0 };
                    dev = dev.max((g[(i, j)] - C64::new(target, 0.0)).norm());
                }
            }
            if !(dev <= tol * (1.0 + u.norm().powi(2))) {
                return Err(Error::NotUnitary { deviation: dev });
            }
        }
        Ok(Self { space, blocks })
    }

    pub fn identity(space: DiscreteSpacetime) -> Self {
        let b = space.block_dim();
        Self { space, blocks: vec![CMat::identity(b, b); space.m()] }
    }

    /// Random local transformation U_x = exp(i S H_x) with Gaussian Hermitian
    /// H_x scaled by `scale`.
    pub fn random(space: DiscreteSpacetime, rng: &mut Rng, scale: f64) -> Self {
        let b = space.block_dim();
        let sig = space.block_signature();
        let blocks = (0..space.m())
            .map(|_| {
                let mut gen = hermitian_gaussian(rng, b) * C64::new(scale, 0.0);
                for (i, s) in sig.iter().enumerate() {
                    if *s < 0.0 {
                        gen.row_mut(i).neg_mut();
                    }
                }
                (gen * I).exp()
            })
            .collect();
        Self { space, blocks }
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn matrix(&self) -> CMat {
        let mut out = CMat::zeros(self.space.dim(), self.space.dim());
        for (x, u) in self.blocks.iter().enumerate() {
            let r = self.space.block(x);
            out.view_mut((r.start, r.start), (r.len(), r.len())).copy_from(u);
        }
        out
    }
}

/// P → U P U⁻¹, realized on the image basis as u_i → U u_i.
pub fn gauge_transform(p: &FermionicProjector, u: &GaugeTransform) -> Result<FermionicProjector> {
    if p.space() != &u.space {
        return Err(Error::Dimension("gauge transform and projector live on different spaces".into()));
    }
    let mut basis = p.basis().clone();
    for (x, ux) in u.blocks.iter().enumerate() {
        let r = p.space().block(x);
        let local = ux * basis.rows(r.start, r.len());
        basis.rows_mut(r.start, r.len()).copy_from(&local);
    }
    Ok(FermionicProjector::from_basis_unchecked(*p.space(), basis))
}
