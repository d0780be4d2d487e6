//! Two-particle systems (n = 1, f = 2): local correlation matrices
//! F_x = ½(ρ_x + v⃗_x·σ⃗), the closed-form chain roots λ±, geometry of the
//! Pauli vectors and outer-symmetry tests by orthogonal Procrustes.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::indefinite::{DiscreteSpacetime, FermionicProjector};
use crate::linalg::{CMat, C64};
use crate::{Error, Result};

/// Per-point data (ρ_x, v⃗_x) of a two-particle system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalCorrelation {
    pub rho: Vec<f64>,
    pub v: Vec<[f64; 3]>,
}

fn require_two_particles(p: &FermionicProjector) -> Result<()> {
    if p.space().n() != 1 || p.f() != 2 {
        return Err(Error::InvalidInput(format!(
            "local correlations need n = 1 and f = 2 (got n = {}, f = {})",
            p.space().n(),
            p.f()
        )));
    }
    Ok(())
}

/// (F_x)_ij = −⟨u_i|E_x u_j⟩ as a 2×2 Hermitian matrix.
pub fn correlation_matrix(p: &FermionicProjector, x: usize) -> Result<CMat> {
    require_two_particles(p)?;
    p.space().check_point(x)?;
    let u = p.local_basis(x);
    let mut su = u.clone();
    su.row_mut(1).neg_mut();
    Ok(-(u.adjoint() * su))
}

pub fn local_correlations(p: &FermionicProjector) -> Result<LocalCorrelation> {
    require_two_particles(p)?;
    let m = p.space().m();
    let mut rho = Vec::with_capacity(m);
    let mut v = Vec::with_capacity(m);
    for x in 0..m {
        let f = correlation_matrix(p, x)?;
        rho.push((f[(0, 0)] + f[(1, 1)]).re);
        v.push([2.0 * f[(0, 1)].re, -2.0 * f[(0, 1)].im, (f[(0, 0)] - f[(1, 1)]).re]);
    }
    Ok(LocalCorrelation { rho, v })
}

fn norm3(a: &[f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn det3(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    dot3(a, &cross3(b, c))
}

impl LocalCorrelation {
    pub fn m(&self) -> usize {
        self.rho.len()
    }

    pub fn rho_sum(&self) -> f64 {
        self.rho.iter().sum()
    }

    pub fn v_sum(&self) -> [f64; 3] {
        self.v.iter().fold([0.0; 3], |acc, w| [acc[0] + w[0], acc[1] + w[1], acc[2] + w[2]])
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.v.iter().map(norm3).collect()
    }

    /// max_x (|ρ_x| − |v⃗_x|, 0): positive when a point violates the
    /// (1,1)-signature bound.
    pub fn signature_violation(&self) -> f64 {
        self.rho.iter().zip(&self.v).map(|(r, w)| (r.abs() - norm3(w)).max(0.0)).fold(0.0, f64::max)
    }

    /// Gram matrix [v⃗_x · v⃗_y].
    pub fn pauli_gram(&self) -> Vec<Vec<f64>> {
        self.v.iter().map(|a| self.v.iter().map(|b| dot3(a, b)).collect()).collect()
    }

    /// Points rotated by a common R.
    pub fn rotated(&self, r: &[[f64; 3]; 3]) -> Self {
        let v = self
            .v
            .iter()
            .map(|w| [dot3(&r[0], w), dot3(&r[1], w), dot3(&r[2], w)])
            .collect();
        Self { rho: self.rho.clone(), v }
    }
}

/// Unit eigenvectors (p, q) of n̂·σ⃗ with eigenvalues +1 and −1.
fn spin_eigenvectors(n: &[f64; 3]) -> ([C64; 2], [C64; 2]) {
    let (nx, ny, nz) = (n[0], n[1], n[2]);
    let p = if nz > -0.5 {
        let s = (2.0 * (1.0 + nz)).sqrt();
        [C64::new((1.0 + nz) / s, 0.0), C64::new(nx / s, ny / s)]
    } else {
        let s = (2.0 * (1.0 - nz)).sqrt();
        [C64::new(nx / s, -ny / s), C64::new((1.0 - nz) / s, 0.0)]
    };
    let q = [-p[1].conj(), p[0].conj()];
    (p, q)
}

/// Two-particle projector realizing prescribed (ρ_x, v⃗_x).
///
/// F_x = α p pᴴ − β q qᴴ with α = (ρ + |v|)/2, β = (|v| − ρ)/2 is realized
/// by u_j(x) = (√β q̄_j, √α p̄_j); the Gram matrix is then −Σ_x F_x, which
/// equals −1 exactly when Σρ = 2 and Σv⃗ = 0.
pub fn projector_from_correlations(corr: &LocalCorrelation, tol: f64) -> Result<FermionicProjector> {
    let m = corr.m();
    if corr.v.len() != m || m == 0 {
        return Err(Error::Dimension("ρ and v lists must be non-empty and of equal length".into()));
    }
    let space = DiscreteSpacetime::new(1, m)?;
    let mut basis = CMat::zeros(2 * m, 2);
    for x in 0..m {
        let len = norm3(&corr.v[x]);
        let rho = corr.rho[x];
        if rho.abs() > len + tol {
            return Err(Error::InvalidInput(format!("point {x}: |ρ| = {} exceeds |v| = {len}", rho.abs())));
        }
        let alpha = ((rho + len) / 2.0).max(0.0);
        let beta = ((len - rho) / 2.0).max(0.0);
        if len == 0.0 {
            continue;
        }
        let dir = [corr.v[x][0] / len, corr.v[x][1] / len, corr.v[x][2] / len];
        let (p, q) = spin_eigenvectors(&dir);
        for j in 0..2 {
            basis[(2 * x, j)] = q[j].conj() * beta.sqrt();
            basis[(2 * x + 1, j)] = p[j].conj() * alpha.sqrt();
        }
    }
    FermionicProjector::new(space, basis, tol)
}

/// m = 3 symmetric family: ρ_x = 2/3, Pauli vectors of length v at 120°.
pub fn symmetric_triangle_correlations(v: f64) -> LocalCorrelation {
    let dirs = (0..3).map(|k| {
        let a = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
        [v * a.cos(), v * a.sin(), 0.0]
    });
    LocalCorrelation { rho: vec![2.0 / 3.0; 3], v: dirs.collect() }
}

pub fn symmetric_triangle(v: f64) -> Result<FermionicProjector> {
    if v < 2.0 / 3.0 {
        return Err(Error::InvalidInput(format!("the symmetric family needs v ≥ 2/3, got {v}")));
    }
    projector_from_correlations(&symmetric_triangle_correlations(v), 1e-12)
}

/// Unit directions of a regular tetrahedron.
pub fn tetrahedron_directions() -> [[f64; 3]; 4] {
    let s = 1.0 / 3f64.sqrt();
    [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
}

/// ρ_x = 1/2 and Pauli vectors of common length `len` along a regular
/// tetrahedron.
pub fn regular_tetrahedron(len: f64) -> LocalCorrelation {
    let v = tetrahedron_directions().iter().map(|d| [len * d[0], len * d[1], len * d[2]]).collect();
    LocalCorrelation { rho: vec![0.5; 4], v }
}

/// Discriminant |ρ_x v⃗_y + ρ_y v⃗_x|² − |v⃗_x × v⃗_y|².
pub fn discriminant(rx: f64, vx: &[f64; 3], ry: f64, vy: &[f64; 3]) -> f64 {
    let s = [rx * vy[0] + ry * vx[0], rx * vy[1] + ry * vx[1], rx * vy[2] + ry * vx[2]];
    let c = cross3(vx, vy);
    dot3(&s, &s) - dot3(&c, &c)
}

/// λ± = ¼(ρ_xρ_y + v⃗_x·v⃗_y ± √disc), with √disc = i√(−disc) for disc < 0.
pub fn lambda_pm(rx: f64, vx: &[f64; 3], ry: f64, vy: &[f64; 3]) -> [C64; 2] {
    let base = rx * ry + dot3(vx, vy);
    let d = discriminant(rx, vx, ry, vy);
    let root = if d >= 0.0 { C64::new(d.sqrt(), 0.0) } else { C64::new(0.0, (-d).sqrt()) };
    [(C64::new(base, 0.0) + root) * 0.25, (C64::new(base, 0.0) - root) * 0.25]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub lengths: Vec<f64>,
    pub mean_length: f64,
    /// (max − min)/mean over non-degenerate points.
    pub length_spread: f64,
    /// 2/m
    pub target_length: f64,
    /// max_x ||v⃗_x| − 2/m| / (2/m)
    pub max_relative_deviation: f64,
    /// Normalized dot products v̂_x·v̂_y; `None` for degenerate points.
    pub dots: Vec<Vec<Option<f64>>>,
    /// max over pairs of |v̂_x·v̂_y + 1/(m−1)|; zero for a regular simplex.
    pub simplex_fit_error: f64,
    /// Smallest angle (radians) between two Pauli vectors.
    pub min_pair_angle: f64,
    /// Points with |v⃗_x| below the degeneracy threshold.
    pub degenerate: Vec<usize>,
}

pub fn geometry_diagnostics(corr: &LocalCorrelation) -> Result<GeometryReport> {
    let m = corr.m();
    if m < 2 {
        return Err(Error::InvalidInput("geometry diagnostics need at least two points".into()));
    }
    let lengths = corr.lengths();
    let scale = lengths.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let degenerate: Vec<usize> = (0..m).filter(|&x| lengths[x] <= 1e-12 * scale.max(1.0)).collect();
    let good: Vec<usize> = (0..m).filter(|x| !degenerate.contains(x)).collect();
    let mean_length = if good.is_empty() { 0.0 } else { good.iter().map(|&x| lengths[x]).sum::<f64>() / good.len() as f64 };
    let (lo, hi) = good.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(lengths[x]), hi.max(lengths[x])));
    let length_spread = if mean_length > 0.0 { (hi - lo) / mean_length } else { 0.0 };
    let target = 2.0 / m as f64;
    let max_relative_deviation = lengths.iter().map(|l| (l - target).abs() / target).fold(0.0, f64::max);
    let mut dots = vec![vec![None; m]; m];
    let mut fit: f64 = 0.0;
    let mut min_angle = f64::INFINITY;
    let ideal = -1.0 / (m as f64 - 1.0);
    for &x in &good {
        for &y in &good {
            let d = (dot3(&corr.v[x], &corr.v[y]) / (lengths[x] * lengths[y])).clamp(-1.0, 1.0);
            dots[x][y] = Some(d);
            if x < y {
                fit = fit.max((d - ideal).abs());
                min_angle = min_angle.min(d.acos());
            }
        }
    }
    Ok(GeometryReport {
        lengths,
        mean_length,
        length_spread,
        target_length: target,
        max_relative_deviation,
        dots,
        simplex_fit_error: fit,
        min_pair_angle: min_angle,
        degenerate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryVerdict {
    Realized,
    NotRealized,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub permutation: Vec<usize>,
    pub verdict: SymmetryVerdict,
    /// Best proper rotation found by Procrustes (rows of R).
    pub rotation: [[f64; 3]; 3],
    /// max_x |R v⃗_x − v⃗_σ(x)|
    pub residual: f64,
    pub evidence: Vec<String>,
}

fn procrustes(corr: &LocalCorrelation, sigma: &[usize]) -> Matrix3<f64> {
    let mut h = Matrix3::zeros();
    for (x, &sx) in sigma.iter().enumerate() {
        let a = Vector3::from(corr.v[x]);
        let b = Vector3::from(corr.v[sx]);
        h += b * a.transpose();
    }
    let svd = h.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let d = (u * vt).determinant().signum();
    u * Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, if d == 0.0 { 1.0 } else { d })) * vt
}

fn validate_permutation(sigma: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    if sigma.len() != m {
        return Err(Error::InvalidInput(format!("permutation of length {} for {m} points", sigma.len())));
    }
    for &s in sigma {
        if s >= m || seen[s] {
            return Err(Error::InvalidInput(format!("{sigma:?} is not a permutation")));
        }
        seen[s] = true;
    }
    Ok(())
}

/// Decides whether σ is realized by a single rotation R ∈ SO(3) with
/// R v⃗_x = v⃗_σ(x) and ρ_x = ρ_σ(x).
pub fn test_permutation(corr: &LocalCorrelation, sigma: &[usize], tol: f64) -> Result<SymmetryReport> {
    let m = corr.m();
    validate_permutation(sigma, m)?;
    let r = procrustes(corr, sigma);
    let residual = (0..m)
        .map(|x| (r * Vector3::from(corr.v[x]) - Vector3::from(corr.v[sigma[x]])).norm())
        .fold(0.0, f64::max);
    let rho_ok = (0..m).all(|x| (corr.rho[x] - corr.rho[sigma[x]]).abs() <= tol);
    let rotation = [[r[(0, 0)], r[(0, 1)], r[(0, 2)]], [r[(1, 0)], r[(1, 1)], r[(1, 2)]], [r[(2, 0)], r[(2, 1)], r[(2, 2)]]];
    let mut evidence = Vec::new();
    if rho_ok && residual <= tol {
        return Ok(SymmetryReport { permutation: sigma.to_vec(), verdict: SymmetryVerdict::Realized, rotation, residual, evidence });
    }
    if !rho_ok {
        evidence.push("ρ is not invariant under the permutation".into());
    }
    for x in 0..m {
        for y in x..m {
            let d = dot3(&corr.v[x], &corr.v[y]) - dot3(&corr.v[sigma[x]], &corr.v[sigma[y]]);
            if d.abs() > tol {
                evidence.push(format!("Gram entry ({x},{y}) changes by {d:.3e}"));
            }
        }
    }
    for a in 0..m {
        for b in (a + 1)..m {
            for c in (b + 1)..m {
                let d0 = det3(&corr.v[a], &corr.v[b], &corr.v[c]);
                let d1 = det3(&corr.v[sigma[a]], &corr.v[sigma[b]], &corr.v[sigma[c]]);
                if d0.abs() > tol && d1.abs() > tol && d0.signum() != d1.signum() {
                    evidence.push(format!("orientation of ({a},{b},{c}) flips: det {d0:.3e} → {d1:.3e}"));
                }
            }
        }
    }
    let verdict = if evidence.is_empty() { SymmetryVerdict::Inconclusive } else { SymmetryVerdict::NotRealized };
    Ok(SymmetryReport { permutation: sigma.to_vec(), verdict, rotation, residual, evidence })
}

/// All permutations of 0..m with their parity (true = odd).
pub fn permutations(m: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..m).collect(), &mut out);
    out.into_iter()
        .map(|p| {
            let inversions = (0..m).flat_map(|i| ((i + 1)..m).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            (p, inversions % 2 == 1)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpossibilityCertificate {
    pub certified: bool,
    pub rho_uniform: bool,
    pub equal_lengths: bool,
    pub equal_angles: bool,
    pub odd_tested: usize,
    pub odd_realized: Vec<Vec<usize>>,
}

/// Computational version of the argument that a two-particle system on four
/// points cannot be symmetric under all of S_4: full symmetry forces
/// ρ_x = 1/2, equal lengths and equal angles (a tetrahedron), and no odd
/// permutation of a tetrahedron is a proper rotation.
pub fn full_symmetry_impossibility_check(corr: &LocalCorrelation, tol: f64) -> Result<ImpossibilityCertificate> {
    if corr.m() != 4 {
        return Err(Error::InvalidInput("the impossibility check is defined for m = 4".into()));
    }
    let rho_uniform = corr.rho.iter().all(|r| (r - 0.5).abs() <= tol);
    let lengths = corr.lengths();
    let mean = lengths.iter().sum::<f64>() / 4.0;
    let equal_lengths = lengths.iter().all(|l| (l - mean).abs() <= tol);
    let gram = corr.pauli_gram();
    let off: Vec<f64> = (0..4).flat_map(|x| ((x + 1)..4).map(move |y| (x, y))).map(|(x, y)| gram[x][y]).collect();
    let off_mean = off.iter().sum::<f64>() / off.len() as f64;
    let equal_angles = off.iter().all(|g| (g - off_mean).abs() <= tol);
    let mut odd_tested = 0;
    let mut odd_realized = Vec::new();
    for (sigma, odd) in permutations(4) {
        if odd {
            odd_tested += 1;
            if test_permutation(corr, &sigma, tol)?.verdict == SymmetryVerdict::Realized {
                odd_realized.push(sigma);
            }
        }
    }
    let certified = rho_uniform && equal_lengths && equal_angles && odd_realized.is_empty();
    Ok(ImpossibilityCertificate { certified, rho_uniform, equal_lengths, equal_angles, odd_tested, odd_realized })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::indefinite::{closed_chain, random_projector};
    use crate::linalg::{eigenvalues, sort_roots};

    #[test]
    fn triangle_at_two_thirds() {
        let l = lambda_pm(2.0 / 3.0, &[2.0 / 3.0, 0.0, 0.0], 2.0 / 3.0, &[-1.0 / 3.0, 3f64.sqrt() / 3.0, 0.0]);
        assert!((l[0] - C64::new(1.0 / 9.0, 0.0)).norm() < 1e-15);
        assert!(l[1].norm() < 1e-15);
    }

    #[test]
    fn threshold_double_root() {
        let v = 4.0 * 3f64.sqrt() / 9.0;
        let c = symmetric_triangle_correlations(v);
        assert!(discriminant(c.rho[0], &c.v[0], c.rho[1], &c.v[1]).abs() < 1e-15);
        // The square root amplifies rounding of a vanishing discriminant.
        let l = lambda_pm(c.rho[0], &c.v[0], c.rho[1], &c.v[1]);
        assert!((l[0] - C64::new(1.0 / 27.0, 0.0)).norm() < 1e-7);
        assert!((l[1] - C64::new(1.0 / 27.0, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn constructed_family_has_requested_correlations() {
        for v in [2.0 / 3.0, 0.7, 0.8, 1.3] {
            let p = symmetric_triangle(v).unwrap();
            let c = local_correlations(&p).unwrap();
            let target = symmetric_triangle_correlations(v);
            for x in 0..3 {
                assert!((c.rho[x] - 2.0 / 3.0).abs() < 1e-12);
                for k in 0..3 {
                    assert!((c.v[x][k] - target.v[x][k]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn chain_roots_match_closed_form() {
        let space = DiscreteSpacetime::new(1, 4).unwrap();
        let p = random_projector(space, 2, 12).unwrap();
        let c = local_correlations(&p).unwrap();
        for (x, y) in [(0, 1), (2, 3), (1, 1)] {
            let mut a = closed_chain(&p, x, y).unwrap().roots;
            let mut b = lambda_pm(c.rho[x], &c.v[x], c.rho[y], &c.v[y]).to_vec();
            sort_roots(&mut a);
            sort_roots(&mut b);
            for (r, s) in a.iter().zip(&b) {
                assert!((r - s).norm() < 1e-10 * (1.0 + s.norm()), "{r} vs {s}");
            }
            let fx = correlation_matrix(&p, x).unwrap();
            let fy = correlation_matrix(&p, y).unwrap();
            let mut e = eigenvalues(&(fx * fy)).unwrap();
            sort_roots(&mut e);
            for (r, s) in a.iter().zip(&e) {
                assert!((r - s).norm() < 1e-10 * (1.0 + s.norm()));
            }
        }
    }

    #[test]
    fn tetrahedron_symmetries() {
        let t = regular_tetrahedron(0.5);
        let g = geometry_diagnostics(&t).unwrap();
        assert!(g.simplex_fit_error < 1e-14);
        for (sigma, odd) in permutations(4) {
            let r = test_permutation(&t, &sigma, 1e-9).unwrap();
            let expected = if odd { SymmetryVerdict::NotRealized } else { SymmetryVerdict::Realized };
            assert_eq!(r.verdict, expected, "{sigma:?}");
        }
        assert!(full_symmetry_impossibility_check(&t, 1e-9).unwrap().certified);
    }

    #[test]
    fn planar_square_is_not_certified() {
        let sq = LocalCorrelation {
            rho: vec![0.5; 4],
            v: vec![[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [-0.5, 0.0, 0.0], [0.0, -0.5, 0.0]],
        };
        let r = test_permutation(&sq, &[2, 1, 0, 3], 1e-9).unwrap();
        assert_eq!(r.verdict, SymmetryVerdict::Realized);
        let cert = full_symmetry_impossibility_check(&sq, 1e-9).unwrap();
        assert!(!cert.certified);
        assert!(!cert.odd_realized.is_empty());
    }

    #[test]
    fn rejects_wrong_particle_number() {
        let space = DiscreteSpacetime::new(1, 4).unwrap();
        let p = random_projector(space, 3, 1).unwrap();
        assert!(local_correlations(&p).is_err());
    }
}
