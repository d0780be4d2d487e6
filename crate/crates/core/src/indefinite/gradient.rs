//! Gradient ℳ of a spectral functional with respect to the chain matrix,
//! normalized so that δL = Re Tr(ℳ δA).
//!
//! For a simple root, δλ_j = Tr(Π_j δA) with Π_j the spectral projector, so
//! ℳ = Σ_j c_j Π_j with c_j = ∂L/∂λ_j in the Wirtinger sense. Clusters of
//! colliding roots are handled with cluster projectors when A is semisimple
//! there. Zero roots get coefficient 0 (the symmetric subgradient of |λ|,
//! which is also the limit of central differences); the remaining simple
//! roots use projectors built from left and right null vectors. Defective
//! clusters fall back to central differences.

use serde::{Deserialize, Serialize};

use super::spectral::Functional;
use crate::linalg::{eigen_decomposition, eigenvalues, CMat, C64, I, ONE};
use crate::tolerances::Tolerances;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GradientMethod {
    /// Spectral projectors of simple roots.
    Analytic,
    /// Cluster projectors for a semisimple matrix with colliding roots.
    Semisimple,
    /// Zero roots present: they get coefficient 0, simple nonzero roots
    /// their spectral projectors.
    ZeroRoot,
    /// Central finite differences (zero root or defective collision).
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub matrix: CMat,
    pub method: GradientMethod,
}

/// Gradient of L_μ = |A²| − μ|A|².
pub fn lagrangian_gradient(a: &CMat, mu: f64, tol: &Tolerances) -> Result<Gradient> {
    functional_gradient(a, Functional::lagrangian(mu), tol)
}

fn coefficient(fun: Functional, lambda: C64, abs_sum: f64) -> C64 {
    let mut c = lambda.conj() * (2.0 * fun.a);
    if fun.b != 0.0 {
        c += lambda.conj() / lambda.norm() * (2.0 * fun.b * abs_sum);
    }
    c
}

pub fn functional_gradient(a: &CMat, fun: Functional, tol: &Tolerances) -> Result<Gradient> {
    crate::linalg::check_square(a)?;
    let dim = a.nrows();
    if dim == 0 {
        return Ok(Gradient { matrix: a.clone(), method: GradientMethod::Analytic });
    }
    let roots = eigenvalues(a)?;
    let scale = 1.0 + a.norm();
    let needs_abs = fun.b != 0.0;
    let abs_sum: f64 = roots.iter().map(|z| z.norm()).sum();
    if needs_abs && roots.iter().any(|z| z.norm() < tol.degenerate_abs * scale) {
        return zero_roots(a, fun, &roots, abs_sum, tol);
    }

    let clusters = cluster(&roots, tol.collision_rel * scale);
    if clusters.len() == dim {
        if dim == 2 {
            let (l1, l2) = (roots[0], roots[1]);
            let id = CMat::identity(2, 2);
            let p1 = (a - id.map(|z| z * l2)).map(|z| z / (l1 - l2));
            let p2 = (a - id.map(|z| z * l1)).map(|z| z / (l2 - l1));
            let m = p1 * coefficient(fun, l1, abs_sum) + p2 * coefficient(fun, l2, abs_sum);
            return Ok(Gradient { matrix: m, method: GradientMethod::Analytic });
        }
        if let Ok(e) = eigen_decomposition(a) {
            if e.condition() < 1e8 {
                let mut right = e.right.clone();
                for (j, &l) in e.values.iter().enumerate() {
                    let c = coefficient(fun, l, abs_sum);
                    for i in 0..dim {
                        right[(i, j)] *= c;
                    }
                }
                return Ok(Gradient { matrix: right * &e.right_inv, method: GradientMethod::Analytic });
            }
        }
    }
    semisimple(a, fun, &roots, &clusters, abs_sum, tol)
}

/// Groups roots whose mutual distance is below `gap` (single linkage).
fn cluster(roots: &[C64], gap: f64) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..roots.len()).collect();
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            if (roots[i] - roots[j]).norm() < gap {
                let (li, lj) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == lj {
                        *l = li;
                    }
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (i, &l) in label.iter().enumerate() {
        match seen.iter().position(|&s| s == l) {
            Some(k) => groups[k].push(i),
            None => {
                seen.push(l);
                groups.push(vec![i]);
            }
        }
    }
    groups
}

fn semisimple(
    a: &CMat,
    fun: Functional,
    roots: &[C64],
    clusters: &[Vec<usize>],
    abs_sum: f64,
    tol: &Tolerances,
) -> Result<Gradient> {
    let dim = a.nrows();
    let id = CMat::identity(dim, dim);
    let centers: Vec<C64> = clusters
        .iter()
        .map(|g| g.iter().map(|&i| roots[i]).sum::<C64>() / g.len() as f64)
        .collect();
    // Semisimple iff the product over clusters of (A − c_g) vanishes.
    let scale = 1.0 + a.norm();
    let mut minpoly = id.clone();
    for &c in &centers {
        minpoly *= a - &id * c;
    }
    if minpoly.norm() > 1e-6 * scale.powi(centers.len() as i32) {
        return fd(a, fun, tol);
    }
    let mut m = CMat::zeros(dim, dim);
    for (g, group) in clusters.iter().enumerate() {
        let mut proj = id.clone();
        for (h, &ch) in centers.iter().enumerate() {
            if h != g {
                proj = proj * (a - &id * ch) / (centers[g] - ch);
            }
        }
        let c = group.iter().map(|&i| coefficient(fun, roots[i], abs_sum)).sum::<C64>() / group.len() as f64;
        m += proj * c;
    }
    Ok(Gradient { matrix: m, method: GradientMethod::Semisimple })
}

fn zero_roots(a: &CMat, fun: Functional, roots: &[C64], abs_sum: f64, tol: &Tolerances) -> Result<Gradient> {
    let scale = 1.0 + a.norm();
    let nonzero: Vec<C64> = roots.iter().copied().filter(|z| z.norm() >= tol.degenerate_abs * scale).collect();
    let gap = tol.collision_rel * scale;
    for (i, zi) in nonzero.iter().enumerate() {
        if nonzero[i + 1..].iter().any(|zj| (zi - zj).norm() < gap) {
            return fd(a, fun, tol);
        }
    }
    let mut m = CMat::zeros(a.nrows(), a.ncols());
    for &l in &nonzero {
        match simple_projector(a, l) {
            Some(p) => m += p * coefficient(fun, l, abs_sum),
            None => return fd(a, fun, tol),
        }
    }
    Ok(Gradient { matrix: m, method: GradientMethod::ZeroRoot })
}

fn null_vector(b: CMat) -> nalgebra::DVector<C64> {
    let svd = b.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let k = (0..svd.singular_values.len())
        .min_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]))
        .expect("non-empty");
    v_t.row(k).adjoint()
}

/// Π = r l^H / (l^H r) for a simple root λ.
fn simple_projector(a: &CMat, lambda: C64) -> Option<CMat> {
    let id = CMat::identity(a.nrows(), a.ncols());
    let shifted = a - &id * lambda;
    let r = null_vector(shifted.clone());
    let l = null_vector(shifted.adjoint());
    let norm = l.dotc(&r);
    if norm.norm() < 1e-8 * r.norm() * l.norm() {
        return None;
    }
    Some(r * l.adjoint() / norm)
}

fn fd(a: &CMat, fun: Functional, tol: &Tolerances) -> Result<Gradient> {
    Ok(Gradient { matrix: finite_difference_gradient(a, fun, tol.fd_step)?, method: GradientMethod::FiniteDifference })
}

/// Central differences: ℳ_ji = ∂L/∂Re A_ij − i ∂L/∂Im A_ij.
pub fn finite_difference_gradient(a: &CMat, fun: Functional, step: f64) -> Result<CMat> {
    let dim = a.nrows();
    let h = step * (1.0 + crate::linalg::max_abs(a));
    let eval = |b: &CMat| -> Result<f64> { Ok(fun.value(&eigenvalues(b)?)) };
    let mut m = CMat::zeros(dim, dim);
    let mut work = a.clone();
    for i in 0..dim {
        for j in 0..dim {
            let mut partial = [0.0; 2];
            for (k, dir) in [ONE, I].into_iter().enumerate() {
                let orig = work[(i, j)];
                work[(i, j)] = orig + dir * h;
                let plus = eval(&work)?;
                work[(i, j)] = orig - dir * h;
                let minus = eval(&work)?;
                work[(i, j)] = orig;
                partial[k] = (plus - minus) / (2.0 * h);
            }
            m[(j, i)] = C64::new(partial[0], -partial[1]);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_diag;
    use crate::rng::{complex_gaussian_matrix, rng_from_seed};

    fn rel(a: &CMat, b: &CMat) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn diagonal_with_opposite_signs() {
        // Direct differentiation: c = 2λ − 2μ|A| sign(λ) = (6 − 4, −2 + 4).
        let g = lagrangian_gradient(&real_diag(&[3.0, -1.0]), 0.5, &Tolerances::default()).unwrap();
        assert!(rel(&g.matrix, &real_diag(&[2.0, 2.0])) < 1e-14);
    }

    #[test]
    fn diagonal_with_equal_signs_is_trace_free_form() {
        let a = real_diag(&[3.0, 1.0]);
        let g = lagrangian_gradient(&a, 0.5, &Tolerances::default()).unwrap();
        assert!(rel(&g.matrix, &real_diag(&[2.0, -2.0])) < 1e-14);
    }

    #[test]
    fn conjugate_pair_of_equal_modulus_has_zero_gradient() {
        let mut a = CMat::zeros(2, 2);
        a[(0, 0)] = C64::new(0.4, 0.0);
        a[(0, 1)] = C64::new(1.3, 0.0);
        a[(1, 0)] = C64::new(-0.9, 0.0);
        a[(1, 1)] = C64::new(0.4, 0.0);
        let g = lagrangian_gradient(&a, 0.5, &Tolerances::default()).unwrap();
        assert!(g.matrix.norm() < 1e-13);
    }

    #[test]
    fn agrees_with_finite_differences() {
        let mut rng = rng_from_seed(7);
        let tol = Tolerances::default();
        for dim in [2, 4] {
            for _ in 0..10 {
                let a = complex_gaussian_matrix(&mut rng, dim, dim);
                let fun = Functional::lagrangian(1.0 / dim as f64);
                let g = functional_gradient(&a, fun, &tol).unwrap();
                assert_eq!(g.method, GradientMethod::Analytic);
                let fdm = finite_difference_gradient(&a, fun, 1e-5).unwrap();
                assert!(rel(&g.matrix, &fdm) < 1e-6, "{}", rel(&g.matrix, &fdm));
            }
        }
    }

    #[test]
    fn repeated_semisimple_roots() {
        let mut rng = rng_from_seed(8);
        let v = complex_gaussian_matrix(&mut rng, 4, 4);
        let d = real_diag(&[2.0, 2.0, -0.5, 1.0]);
        let a = &v * d * v.clone().try_inverse().unwrap();
        let fun = Functional::lagrangian(0.25);
        let g = functional_gradient(&a, fun, &Tolerances::default()).unwrap();
        assert_eq!(g.method, GradientMethod::Semisimple);
        // Along directions that keep the double root semisimple the
        // directional derivative is well defined; compare on A itself.
        let h = 1e-6;
        let plus = fun.value(&eigenvalues(&a.scale(1.0 + h)).unwrap());
        let minus = fun.value(&eigenvalues(&a.scale(1.0 - h)).unwrap());
        let fd_dir = (plus - minus) / (2.0 * h);
        let an = crate::linalg::trace_product(&g.matrix, &a).re;
        assert!((fd_dir - an).abs() < 1e-6 * fd_dir.abs());
    }

    #[test]
    fn zero_root_gets_zero_coefficient() {
        let g = lagrangian_gradient(&real_diag(&[1.0, 0.0]), 0.5, &Tolerances::default()).unwrap();
        assert_eq!(g.method, GradientMethod::ZeroRoot);
        let fdm = finite_difference_gradient(&real_diag(&[1.0, 0.0]), Functional::lagrangian(0.5), 1e-6).unwrap();
        assert!(rel(&g.matrix, &fdm) < 1e-6);
    }

    #[test]
    fn structural_zero_roots_match_rank_preserving_variation() {
        // Rank-2 chain on a 4-dimensional space, varied within rank 2.
        let mut rng = rng_from_seed(21);
        let u = complex_gaussian_matrix(&mut rng, 4, 2);
        let w = complex_gaussian_matrix(&mut rng, 2, 4);
        let du = complex_gaussian_matrix(&mut rng, 4, 2);
        let a = &u * &w;
        let fun = Functional::lagrangian(0.25);
        let g = functional_gradient(&a, fun, &Tolerances::default()).unwrap();
        assert_eq!(g.method, GradientMethod::ZeroRoot);
        let at = |t: f64| fun.value(&eigenvalues(&((&u + du.scale(t)) * &w)).unwrap());
        let h = 1e-6;
        let fd_dir = (at(h) - at(-h)) / (2.0 * h);
        let an = crate::linalg::trace_product(&g.matrix, &(&du * &w)).re;
        assert!((fd_dir - an).abs() < 1e-6 * (1.0 + fd_dir.abs()), "{fd_dir} {an}");
    }
}
