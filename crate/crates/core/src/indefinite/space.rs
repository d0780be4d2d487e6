use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::linalg::{CMat, C64, ZERO};
use crate::{Error, Result};

/// Discrete space-time of `m` points, each carrying a 2n-dimensional block of
/// signature (n, n) inside H = C^{2nm}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct DiscreteSpacetime {
    n: usize,
    m: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    n: usize,
    m: usize,
}

impl TryFrom<RawSpace> for DiscreteSpacetime {
    type Error = Error;
    fn try_from(raw: RawSpace) -> Result<Self> {
        DiscreteSpacetime::new(raw.n, raw.m)
    }
}

impl From<DiscreteSpacetime> for RawSpace {
    fn from(s: DiscreteSpacetime) -> Self {
        RawSpace { n: s.n, m: s.m }
    }
}

impl DiscreteSpacetime {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidInput(format!("spin dimension and point count must be positive (n={n}, m={m})")));
        }
        Ok(Self { n, m })
    }

    /// Spin dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of space-time points.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        2 * self.n * self.m
    }

    pub fn block_dim(&self) -> usize {
        2 * self.n
    }

    /// Largest rank of a negative-definite subspace.
    pub fn max_rank(&self) -> usize {
        self.n * self.m
    }

    pub fn check_point(&self, x: usize) -> Result<()> {
        if x >= self.m {
            return Err(Error::IndexOutOfRange { index: x, len: self.m });
        }
        Ok(())
    }

    /// Coordinate range of the block E_x(H).
    pub fn block(&self, x: usize) -> Range<usize> {
        let b = self.block_dim();
        x * b..(x + 1) * b
    }

    /// Signature entry of coordinate `i`: +1 on the first n coordinates of a
    /// block, −1 on the last n.
    pub fn sign(&self, i: usize) -> f64 {
        if i % self.block_dim() < self.n {
            1.0
        } else {
            -1.0
        }
    }

    pub fn signature(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.sign(i)).collect()
    }

    /// Signature of a single block, (+1)^n (−1)^n.
    pub fn block_signature(&self) -> Vec<f64> {
        (0..self.block_dim()).map(|i| self.sign(i)).collect()
    }

    /// ⟨u|v⟩ = Σ s_i conj(u_i) v_i.
    pub fn inner(&self, u: &[C64], v: &[C64]) -> C64 {
        u.iter().zip(v).enumerate().fold(ZERO, |acc, (i, (a, b))| acc + a.conj() * b * self.sign(i))
    }

    /// Gram matrix Wᴴ S W of the columns of `w`.
    pub fn gram(&self, w: &CMat) -> CMat {
        let sw = self.signature_left(w);
        w.adjoint() * sw
    }

    /// S·M (rows scaled by the signature).
    pub fn signature_left(&self, mat: &CMat) -> CMat {
        let mut out = mat.clone();
        for i in 0..out.nrows() {
            let s = self.sign(i);
            if s < 0.0 {
                out.row_mut(i).neg_mut();
            }
        }
        out
    }

    /// M·S (columns scaled by the signature).
    pub fn signature_right(&self, mat: &CMat) -> CMat {
        let mut out = mat.clone();
        for j in 0..out.ncols() {
            if self.sign(j) < 0.0 {
                out.column_mut(j).neg_mut();
            }
        }
        out
    }

    /// Coordinate projector E_x as a full matrix.
    pub fn point_projector(&self, x: usize) -> CMat {
        let mut e = CMat::zeros(self.dim(), self.dim());
        for i in self.block(x) {
            e[(i, i)] = C64::new(1.0, 0.0);
        }
        e
    }

    /// Indices of the negative-signature coordinates, point by point.
    pub fn negative_coordinates(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.sign(i) < 0.0).collect()
    }
}
