use serde::{Deserialize, Serialize};

use super::space::DiscreteSpacetime;
use crate::linalg::{CMat, C64};
use crate::{Error, Result};

/// Rank-f projector with negative-definite image, stored through a basis
/// u_1..u_f of its image with ⟨u_i|u_j⟩ = −δ_ij. The operator itself is
/// P v = −Σ_i u_i ⟨u_i|v⟩, i.e. P = −U Uᴴ S.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionicProjector {
    space: DiscreteSpacetime,
    basis: CMat,
}

/// Deviations of a projector from its defining identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectorReport {
    /// max |(P² − P)_ij|
    pub idempotency: f64,
    /// max |(SP − (SP)ᴴ)_ij|; zero iff P is self-adjoint for ⟨.|.⟩
    pub self_adjointness: f64,
    /// max |(G + 1)_ij| for the Gram matrix G of the basis
    pub gram: f64,
    /// numerical rank of the basis
    pub rank: usize,
}

impl ProjectorReport {
    pub fn passes(&self, tol: f64, f: usize) -> bool {
        self.idempotency <= tol && self.self_adjointness <= tol && self.gram <= tol && self.rank == f
    }
}

impl FermionicProjector {
    /// Builds a projector from an image basis, rejecting bases whose Gram
    /// matrix deviates from −1 by more than `tol`.
    pub fn new(space: DiscreteSpacetime, basis: CMat, tol: f64) -> Result<Self> {
        if basis.nrows() != space.dim() {
            return Err(Error::Dimension(format!(
                "basis vectors have length {}, space dimension is {}",
                basis.nrows(),
                space.dim()
            )));
        }
        if basis.ncols() > space.max_rank() {
            return Err(Error::InfeasibleRank { f: basis.ncols(), max: space.max_rank() });
        }
        let p = Self { space, basis };
        let dev = p.gram_deviation();
        if !(dev <= tol) {
            return Err(Error::InvalidInput(format!(
                "basis is not indefinite-orthonormal: max |G + 1| = {dev:.3e} exceeds {tol:.1e}"
            )));
        }
        Ok(p)
    }

    pub(crate) fn from_basis_unchecked(space: DiscreteSpacetime, basis: CMat) -> Self {
        Self { space, basis }
    }

    /// The zero projector (f = 0).
    pub fn zero(space: DiscreteSpacetime) -> Self {
        Self { space, basis: CMat::zeros(space.dim(), 0) }
    }

    pub fn space(&self) -> &DiscreteSpacetime {
        &self.space
    }

    /// Number of particles f.
    pub fn f(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn gram(&self) -> CMat {
        self.space.gram(&self.basis)
    }

    pub fn gram_deviation(&self) -> f64 {
        let g = self.gram();
        let mut dev: f64 = 0.0;
        for i in 0..g.nrows() {
            for j in 0..g.ncols() {
                let target = if i == j { -1.0 } else { 0.0 };
                dev = dev.max((g[(i, j)] - C64::new(target, 0.0)).norm());
            }
        }
        dev
    }

    /// Full 2nm × 2nm operator P = −U Uᴴ S.
    pub fn matrix(&self) -> CMat {
        -self.space.signature_right(&(&self.basis * self.basis.adjoint()))
    }

    /// Rows of the basis belonging to point x, i.e. E_x u_i as a 2n × f block.
    pub fn local_basis(&self, x: usize) -> CMat {
        let r = self.space.block(x);
        self.basis.rows(r.start, r.len()).into_owned()
    }

    /// Discrete kernel P(x,y) = E_x P E_y in block coordinates.
    pub fn kernel(&self, x: usize, y: usize) -> Result<CMat> {
        self.space.check_point(x)?;
        self.space.check_point(y)?;
        Ok(self.kernel_from_blocks(&self.local_basis(x), &self.local_basis(y)))
    }

    fn kernel_from_blocks(&self, ux: &CMat, uy: &CMat) -> CMat {
        let prod = ux * uy.adjoint();
        let n = self.space.n();
        let mut out = -prod;
        for j in n..2 * n {
            out.column_mut(j).neg_mut();
        }
        out
    }

    /// All kernels, indexed as `[x * m + y]`.
    pub fn kernels(&self) -> Vec<CMat> {
        let m = self.space.m();
        let locals: Vec<CMat> = (0..m).map(|x| self.local_basis(x)).collect();
        let mut out = Vec::with_capacity(m * m);
        for x in 0..m {
            for y in 0..m {
                out.push(self.kernel_from_blocks(&locals[x], &locals[y]));
            }
        }
        out
    }

    /// Applies P to a vector of H.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.space.dim() {
            return Err(Error::Dimension(format!("vector of length {} for space of dimension {}", v.len(), self.space.dim())));
        }
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for k in 0..self.f() {
            let col: Vec<C64> = self.basis.column(k).iter().copied().collect();
            let c = self.space.inner(&col, v);
            for (o, u) in out.iter_mut().zip(&col) {
                *o -= u * c;
            }
        }
        Ok(out)
    }

    pub fn report(&self) -> ProjectorReport {
        let p = self.matrix();
        let p2 = &p * &p;
        let idempotency = (p2 - &p).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let sp = self.space.signature_left(&p);
        let self_adjointness = (&sp - sp.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let rank = if self.f() == 0 { 0 } else { self.basis.clone().svd(false, false).rank(1e-8 * self.basis.norm().max(1.0)) };
        ProjectorReport { idempotency, self_adjointness, gram: self.gram_deviation(), rank }
    }

    /// Restores ⟨u_i|u_j⟩ = −δ_ij after floating-point drift. With −G = L Lᴴ
    /// the new basis is U L^{−H}; it spans the same image.
    pub fn reorthonormalized(&self) -> Result<Self> {
        if self.f() == 0 {
            return Ok(self.clone());
        }
        let neg = -self.gram();
        let herm = (&neg + neg.adjoint()).scale(0.5);
        let chol = herm
            .cholesky()
            .ok_or_else(|| Error::InvalidInput("image lost negative definiteness".into()))?;
        let l_adj = chol.l().adjoint();
        let inv = l_adj
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("singular Cholesky factor".into()))?;
        Ok(Self { space: self.space, basis: &self.basis * inv })
    }

    /// Replaces the basis by U·basis. For an indefinite-unitary U this is the
    /// projector U P U⁻¹.
    pub fn transformed(&self, u: &CMat) -> Self {
        Self { space: self.space, basis: u * &self.basis }
    }
}

/// On-disk form of a projector. Each basis vector is a list of 2nm complex
/// entries stored as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectorDocument {
    pub schema: String,
    pub n: usize,
    pub m: usize,
    pub f: usize,
    pub basis: Vec<Vec<[f64; 2]>>,
    pub tolerance: ToleranceMetadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceMetadata {
    /// Gram deviation accepted when the document is read back.
    pub projector: f64,
    /// Gram deviation at the time of writing.
    pub gram_deviation: f64,
}

pub const PROJECTOR_SCHEMA: &str = "dstlab.projector/1";

impl FermionicProjector {
    pub fn to_document(&self, tol: f64) -> ProjectorDocument {
        let basis = (0..self.f())
            .map(|k| self.basis.column(k).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        ProjectorDocument {
            schema: PROJECTOR_SCHEMA.into(),
            n: self.space.n(),
            m: self.space.m(),
            f: self.f(),
            basis,
            tolerance: ToleranceMetadata { projector: tol, gram_deviation: self.gram_deviation() },
        }
    }

    pub fn from_document(doc: &ProjectorDocument) -> Result<Self> {
        if doc.schema != PROJECTOR_SCHEMA {
            return Err(Error::Serialization(format!("unsupported projector schema {:?}", doc.schema)));
        }
        let space = DiscreteSpacetime::new(doc.n, doc.m)?;
        if doc.basis.len() != doc.f {
            return Err(Error::Dimension(format!("f = {} but {} basis vectors given", doc.f, doc.basis.len())));
        }
        let mut basis = CMat::zeros(space.dim(), doc.f);
        for (k, col) in doc.basis.iter().enumerate() {
            if col.len() != space.dim() {
                return Err(Error::Dimension(format!("basis vector {k} has {} entries, expected {}", col.len(), space.dim())));
            }
            for (i, [re, im]) in col.iter().enumerate() {
                basis[(i, k)] = C64::new(*re, *im);
            }
        }
        Self::new(space, basis, doc.tolerance.projector)
    }

    pub fn to_json(&self, tol: f64) -> String {
        serde_json::to_string_pretty(&self.to_document(tol)).expect("projector document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indefinite::random_projector;
    use crate::rng::{complex_gaussian_matrix, rng_from_seed};

    #[test]
    fn localized_particle_kernel() {
        let space = DiscreteSpacetime::new(1, 3).unwrap();
        let mut basis = CMat::zeros(6, 1);
        basis[(1, 0)] = C64::new(1.0, 0.0);
        let p = FermionicProjector::new(space, basis, 1e-12).unwrap();
        let k11 = p.kernel(0, 0).unwrap();
        // E_1 u = u with u on the negative coordinate; P(1,1) = −u uᴴ S
        assert_eq!(k11[(1, 1)], C64::new(1.0, 0.0));
        for x in 0..3 {
            for y in 0..3 {
                if x != 0 || y != 0 {
                    assert!(p.kernel(x, y).unwrap().iter().all(|z| z.norm() == 0.0));
                }
            }
        }
    }

    #[test]
    fn zero_projector_kernels_vanish() {
        let p = FermionicProjector::zero(DiscreteSpacetime::new(1, 3).unwrap());
        assert!(p.kernels().iter().all(|k| k.iter().all(|z| z.norm() == 0.0)));
    }

    #[test]
    fn kernel_sum_reproduces_application() {
        let space = DiscreteSpacetime::new(1, 3).unwrap();
        let p = random_projector(space, 2, 5).unwrap();
        let mut rng = rng_from_seed(99);
        let u = complex_gaussian_matrix(&mut rng, 6, 1);
        let uv: Vec<C64> = u.iter().copied().collect();
        let pu = p.apply(&uv).unwrap();
        let direct = p.matrix() * &u;
        for x in 0..3 {
            let mut acc = CMat::zeros(2, 1);
            for y in 0..3 {
                let r = space.block(y);
                acc += p.kernel(x, y).unwrap() * u.rows(r.start, r.len());
            }
            for (k, i) in space.block(x).enumerate() {
                assert!((acc[(k, 0)] - pu[i]).norm() < 1e-12 * (1.0 + pu[i].norm()));
                assert!((acc[(k, 0)] - direct[(i, 0)]).norm() < 1e-12 * (1.0 + pu[i].norm()));
            }
        }
    }

    #[test]
    fn rejects_positive_image() {
        let space = DiscreteSpacetime::new(1, 2).unwrap();
        let mut basis = CMat::zeros(4, 1);
        basis[(0, 0)] = C64::new(1.0, 0.0);
        assert!(FermionicProjector::new(space, basis, 1e-9).is_err());
    }

    #[test]
    fn out_of_range_kernel() {
        let p = FermionicProjector::zero(DiscreteSpacetime::new(1, 2).unwrap());
        assert_eq!(p.kernel(0, 2), Err(Error::IndexOutOfRange { index: 2, len: 2 }));
    }

    #[test]
    fn reorthonormalization_restores_gram() {
        let space = DiscreteSpacetime::new(1, 4).unwrap();
        let p = random_projector(space, 2, 1).unwrap();
        let mut drifted = p.basis().clone();
        drifted[(0, 0)] += C64::new(1e-6, 2e-6);
        let q = FermionicProjector::from_basis_unchecked(space, drifted).reorthonormalized().unwrap();
        assert!(q.gram_deviation() < 1e-13);
    }

    #[test]
    fn json_round_trip() {
        let space = DiscreteSpacetime::new(2, 3).unwrap();
        let p = random_projector(space, 3, 11).unwrap();
        let back = FermionicProjector::from_json(&p.to_json(1e-9)).unwrap();
        assert_eq!(back, p);
        let mut doc = p.to_document(1e-9);
        doc.basis[0][0][0] += 0.1;
        assert!(FermionicProjector::from_document(&doc).is_err());
        doc = p.to_document(1e-9);
        doc.f = 2;
        assert!(matches!(FermionicProjector::from_document(&doc), Err(Error::Dimension(_))));
        assert!(FermionicProjector::from_json("{\"n\": 1}").is_err());
    }
}
