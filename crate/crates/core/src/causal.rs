//! Discrete causal structure: point pairs are timelike when all roots of the
//! closed chain are real, spacelike when the roots form complex conjugate
//! pairs of one common modulus, and undetermined otherwise.

use serde::{Deserialize, Serialize};

use crate::indefinite::{all_chains, ClosedChain, FermionicProjector};
use crate::linalg::C64;
use crate::tolerances::Tolerances;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalClass {
    Timelike,
    Spacelike,
    Undetermined,
}

impl CausalClass {
    pub fn label(&self) -> &'static str {
        match self {
            CausalClass::Timelike => "timelike",
            CausalClass::Spacelike => "spacelike",
            CausalClass::Undetermined => "undetermined",
        }
    }
}

/// Classification together with the data it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: CausalClass,
    pub roots: Vec<[f64; 2]>,
    pub tau_im: f64,
    pub tau_mod: f64,
}

pub fn classify_roots(roots: &[C64], tau_im: f64, tau_mod: f64) -> Classification {
    let class = if roots.iter().all(|z| z.im.abs() <= tau_im) {
        CausalClass::Timelike
    } else if conjugate_paired(roots, tau_im) && equal_moduli(roots, tau_mod) {
        CausalClass::Spacelike
    } else {
        CausalClass::Undetermined
    };
    Classification { class, roots: roots.iter().map(|z| [z.re, z.im]).collect(), tau_im, tau_mod }
}

/// Classifies a chain with τ_im = τ_mod = causal_rel·(1 + max|λ|).
pub fn classify(chain: &ClosedChain, tol: &Tolerances) -> Classification {
    let tau = tol.causal(&chain.roots);
    classify_roots(&chain.roots, tau, tau)
}

fn conjugate_paired(roots: &[C64], tau: f64) -> bool {
    let mut used = vec![false; roots.len()];
    for z in roots {
        let target = z.conj();
        let best = (0..roots.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| (roots[a] - target).norm().total_cmp(&(roots[b] - target).norm()));
        match best {
            Some(j) if (roots[j] - target).norm() <= tau => used[j] = true,
            _ => return false,
        }
    }
    true
}

fn equal_moduli(roots: &[C64], tau: f64) -> bool {
    let (lo, hi) = roots
        .iter()
        .map(|z| z.norm())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
    roots.is_empty() || hi - lo <= tau
}

/// Symmetric m×m table of causal classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalGraph {
    pub m: usize,
    pub classes: Vec<Vec<CausalClass>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjacencyEntry {
    pub point: usize,
    pub timelike: Vec<usize>,
    pub spacelike: Vec<usize>,
    pub undetermined: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub timelike: usize,
    pub spacelike: usize,
    pub undetermined: usize,
}

pub fn causal_graph(p: &FermionicProjector, tol: &Tolerances) -> Result<CausalGraph> {
    let m = p.space().m();
    let chains = all_chains(p)?;
    let mut classes = vec![vec![CausalClass::Undetermined; m]; m];
    for x in 0..m {
        for y in x..m {
            let c = classify(&chains[x * m + y], tol).class;
            classes[x][y] = c;
            classes[y][x] = c;
        }
    }
    Ok(CausalGraph { m, classes })
}

impl CausalGraph {
    pub fn is_symmetric(&self) -> bool {
        (0..self.m).all(|x| (0..self.m).all(|y| self.classes[x][y] == self.classes[y][x]))
    }

    pub fn adjacency(&self) -> Vec<AdjacencyEntry> {
        (0..self.m)
            .map(|x| {
                let pick = |c: CausalClass| (0..self.m).filter(|&y| y != x && self.classes[x][y] == c).collect();
                AdjacencyEntry {
                    point: x,
                    timelike: pick(CausalClass::Timelike),
                    spacelike: pick(CausalClass::Spacelike),
                    undetermined: pick(CausalClass::Undetermined),
                }
            })
            .collect()
    }

    /// Counts over unordered pairs x < y; the diagonal is excluded.
    pub fn counts(&self) -> ClassCounts {
        let mut c = ClassCounts::default();
        for x in 0..self.m {
            for y in (x + 1)..self.m {
                match self.classes[x][y] {
                    CausalClass::Timelike => c.timelike += 1,
                    CausalClass::Spacelike => c.spacelike += 1,
                    CausalClass::Undetermined => c.undetermined += 1,
                }
            }
        }
        c
    }

    /// Edge list in a DIMACS-like text format: a header `p causal <m> <edges>`
    /// followed by `e <x> <y> <class>` lines with 1-based points, x < y.
    pub fn to_dimacs(&self) -> String {
        let mut lines = Vec::new();
        for x in 0..self.m {
            for y in (x + 1)..self.m {
                lines.push(format!("e {} {} {}", x + 1, y + 1, self.classes[x][y].label()));
            }
        }
        let mut out = format!("c discrete causal structure\np causal {} {}\n", self.m, lines.len());
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
        out
    }
}
