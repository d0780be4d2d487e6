use super::gradient::{functional_gradient, GradientMethod};
use super::projector::FermionicProjector;
use super::space::DiscreteSpacetime;
use super::spectral::Functional;
use crate::linalg::{eigenvalues, trace_product, CMat, C64, I};
use crate::tolerances::Tolerances;
use crate::Result;

/// Kernel Q(x,y) = ¼(ℳ[A_xy] P(x,y) + P(x,y) ℳ[A_yx]).
#[derive(Debug, Clone, PartialEq)]
pub struct QKernel {
    space: DiscreteSpacetime,
    pub functional: Functional,
    /// Blocks indexed as `[x * m + y]`.
    pub blocks: Vec<CMat>,
    /// Number of chains whose gradient needed the finite-difference fallback.
    pub fallbacks: usize,
}

impl QKernel {
    pub fn block(&self, x: usize, y: usize) -> &CMat {
        &self.blocks[x * self.space.m() + y]
    }

    /// Q as an operator on H.
    pub fn matrix(&self) -> CMat {
        let m = self.space.m();
        let mut out = CMat::zeros(self.space.dim(), self.space.dim());
        for x in 0..m {
            for y in 0..m {
                let (rx, ry) = (self.space.block(x), self.space.block(y));
                out.view_mut((rx.start, ry.start), (rx.len(), ry.len())).copy_from(self.block(x, y));
            }
        }
        out
    }
}

/// Functional value together with its Q kernel.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: f64,
    pub q: QKernel,
}

pub fn evaluate(p: &FermionicProjector, fun: Functional, tol: &Tolerances) -> Result<Evaluation> {
    let data = ChainData::new(p)?;
    Ok(Evaluation { value: data.total(fun), q: data.q_kernel(fun, tol)? })
}

/// Kernels, chains and chain roots of one projector, shared between several
/// functionals.
#[derive(Debug, Clone)]
pub struct ChainData {
    space: DiscreteSpacetime,
    kernels: Vec<CMat>,
    chains: Vec<CMat>,
    roots: Vec<Vec<C64>>,
}

impl ChainData {
    pub fn new(p: &FermionicProjector) -> Result<Self> {
        let space = *p.space();
        let m = space.m();
        let kernels = p.kernels();
        let mut chains = Vec::with_capacity(m * m);
        let mut roots = Vec::with_capacity(m * m);
        for x in 0..m {
            for y in 0..m {
                let a = &kernels[x * m + y] * &kernels[y * m + x];
                roots.push(eigenvalues(&a)?);
                chains.push(a);
            }
        }
        Ok(Self { space, kernels, chains, roots })
    }

    pub fn roots(&self) -> &[Vec<C64>] {
        &self.roots
    }

    pub fn total(&self, fun: Functional) -> f64 {
        self.roots.iter().map(|r| fun.value(r)).sum()
    }

    pub fn q_kernel(&self, fun: Functional, tol: &Tolerances) -> Result<QKernel> {
        let m = self.space.m();
        let mut grads = Vec::with_capacity(m * m);
        let mut fallbacks = 0;
        for a in &self.chains {
            let g = functional_gradient(a, fun, tol)?;
            if g.method == GradientMethod::FiniteDifference {
                fallbacks += 1;
            }
            grads.push(g.matrix);
        }
        let mut blocks = Vec::with_capacity(m * m);
        for x in 0..m {
            for y in 0..m {
                let pxy = &self.kernels[x * m + y];
                blocks.push((&grads[x * m + y] * pxy + pxy * &grads[y * m + x]).scale(0.25));
            }
        }
        Ok(QKernel { space: self.space, functional: fun, blocks, fallbacks })
    }
}

pub fn q_kernel(p: &FermionicProjector, mu: f64, tol: &Tolerances) -> Result<QKernel> {
    Ok(evaluate(p, Functional::lagrangian(mu), tol)?.q)
}

/// [P, Q] as an operator on H.
pub fn commutator(p: &FermionicProjector, q: &QKernel) -> CMat {
    let pm = p.matrix();
    let qm = q.matrix();
    &pm * &qm - &qm * &pm
}

/// Frobenius norm of [P, Q_μ]; zero exactly at solutions of the
/// Euler-Lagrange equations.
pub fn el_residual(p: &FermionicProjector, mu: f64, tol: &Tolerances) -> Result<f64> {
    Ok(commutator(p, &q_kernel(p, mu, tol)?).norm())
}

/// First variation 4i Tr([P, Q] B) along P → e^{iτB} P e^{−iτB}.
pub fn first_variation(p: &FermionicProjector, q: &QKernel, b: &CMat) -> C64 {
    I * 4.0 * trace_product(&commutator(p, q), b)
}
