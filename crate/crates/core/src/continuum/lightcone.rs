//! Exact algebra of light-cone expansions. Terms are products of a
//! polynomial in the real symbols C₀..C₃, D₀..D₃ (complex rational
//! coefficients) with a structure ξ̸^s (ξ²)^p log(ξ²)^l ε(ξ⁰)^e and a
//! distribution kind.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type CRational = Complex<Rational64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symbol {
    C0,
    C1,
    C2,
    C3,
    D0,
    D1,
    D2,
    D3,
}

impl Symbol {
    pub const ALL: [Symbol; 8] = [Symbol::C0, Symbol::C1, Symbol::C2, Symbol::C3, Symbol::D0, Symbol::D1, Symbol::D2, Symbol::D3];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["C0", "C1", "C2", "C3", "D0", "D1", "D2", "D3"][self.index()]
    }

    pub fn parse(s: &str) -> Option<Symbol> {
        Symbol::ALL.into_iter().find(|x| x.name() == s)
    }
}

pub type Monomial = [u8; 8];

/// Polynomial in the real symbols with complex rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, CRational>,
}

fn real(r: Rational64) -> CRational {
    Complex::new(r, Rational64::zero())
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CRational) -> Self {
        let mut p = Self::zero();
        p.add_term([0; 8], c);
        p
    }

    pub fn symbol(s: Symbol) -> Self {
        let mut mono = [0u8; 8];
        mono[s.index()] = 1;
        let mut p = Self::zero();
        p.add_term(mono, real(Rational64::one()));
        p
    }

    fn add_term(&mut self, mono: Monomial, c: CRational) {
        let entry = self.terms.entry(mono).or_insert_with(CRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CRational)> {
        self.terms.iter()
    }

    /// Coefficient of a monomial given as (symbol, power) pairs.
    pub fn coefficient(&self, powers: &[(Symbol, u8)]) -> CRational {
        let mut mono = [0u8; 8];
        for &(s, k) in powers {
            mono[s.index()] += k;
        }
        self.terms.get(&mono).copied().unwrap_or_else(CRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, *c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = *ma;
                for i in 0..8 {
                    m[i] += mb[i];
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: CRational) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    /// Complex conjugation; the symbols are real.
    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect() }
    }

    /// Replaces the given symbols by rational values.
    pub fn substitute(&self, values: &BTreeMap<Symbol, Rational64>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut mono = *m;
            let mut coef = *c;
            for (&s, &v) in values {
                let k = mono[s.index()];
                for _ in 0..k {
                    coef *= real(v);
                }
                mono[s.index()] = 0;
            }
            out.add_term(mono, coef);
        }
        out
    }
}

fn fmt_rational(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_complex(c: &CRational) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rational(&c.re),
        (true, false) => format!("{}i", fmt_rational(&c.im)),
        _ => format!("({} + {}i)", fmt_rational(&c.re), fmt_rational(&c.im)),
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = String::new();
                for sym in Symbol::ALL {
                    match m[sym.index()] {
                        0 => {}
                        1 => s.push_str(sym.name()),
                        k => s.push_str(&format!("{}^{}", sym.name(), k)),
                    }
                }
                let one = real(Rational64::one());
                match (s.is_empty(), *c == one) {
                    (true, _) => fmt_complex(c),
                    (false, true) => s,
                    (false, false) => format!("{}·{}", fmt_complex(c), s),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Singularity {
    /// Principal parts, logarithms and polynomials in ξ².
    Regular,
    Theta,
    Delta,
    DeltaPrime,
}

impl Singularity {
    fn degree(self) -> i32 {
        match self {
            Singularity::Regular | Singularity::Theta => 0,
            Singularity::Delta => -2,
            Singularity::DeltaPrime => -4,
        }
    }

    fn on_cone(self) -> bool {
        matches!(self, Singularity::Delta | Singularity::DeltaPrime)
    }
}

/// ξ̸^slash (ξ²)^xi2_power log(ξ²)^log_power ε(ξ⁰)^epsilon times a distribution kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Structure {
    pub slash: bool,
    pub xi2_power: i32,
    pub log_power: u32,
    pub epsilon: bool,
    pub kind: Singularity,
}

impl Structure {
    pub fn regular(slash: bool, xi2_power: i32) -> Self {
        Self { slash, xi2_power, log_power: 0, epsilon: false, kind: Singularity::Regular }
    }

    /// Scaling degree in ξ (logarithms count as degree 0).
    pub fn degree(&self) -> i32 {
        self.slash as i32 + 2 * self.xi2_power + self.kind.degree()
    }

    fn is_smooth(&self) -> bool {
        self.kind == Singularity::Regular && self.xi2_power >= 0 && self.log_power == 0 && !self.epsilon
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.slash {
            parts.push("ξ̸".to_string());
        }
        if self.xi2_power != 0 {
            parts.push(format!("(ξ²)^{}", self.xi2_power));
        }
        match self.log_power {
            0 => {}
            1 => parts.push("log(ξ²)".into()),
            k => parts.push(format!("log(ξ²)^{k}")),
        }
        if self.epsilon {
            parts.push("ε(ξ⁰)".into());
        }
        match self.kind {
            Singularity::Regular => {}
            Singularity::Theta => parts.push("Θ(ξ²)".into()),
            Singularity::Delta => parts.push("δ(ξ²)".into()),
            Singularity::DeltaPrime => parts.push("δ'(ξ²)".into()),
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductMode {
    /// Evaluate away from the light cone: δ and δ' terms vanish there.
    AwayFromCone,
    /// Keep distributions; products of two singular factors are rejected.
    Distributional,
}

/// Finite sum of terms, exact up to (and including) scaling degree
/// `valid_through`; higher-degree contributions are unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LightconeExpansion {
    terms: BTreeMap<Structure, Polynomial>,
    pub valid_through: i32,
}

impl LightconeExpansion {
    pub fn new(valid_through: i32) -> Self {
        Self { terms: BTreeMap::new(), valid_through }
    }

    pub fn add_term(&mut self, s: Structure, c: Polynomial) {
        let entry = self.terms.entry(s).or_default();
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&s);
        }
    }

    /// Terms ordered by degree, then structure.
    pub fn terms(&self) -> Vec<(Structure, &Polynomial)> {
        let mut v: Vec<(Structure, &Polynomial)> = self.terms.iter().map(|(s, p)| (*s, p)).collect();
        v.sort_by_key(|(s, _)| (s.degree(), *s));
        v
    }

    pub fn coefficient(&self, s: &Structure) -> Polynomial {
        self.terms.get(s).cloned().unwrap_or_default()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().map(|s| s.degree()).min()
    }

    /// Adjoint with respect to the spin inner product: ξ̸ and ε are
    /// self-adjoint, so only coefficients are conjugated.
    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(s, p)| (*s, p.conj())).collect(), valid_through: self.valid_through }
    }

    pub fn substitute(&self, values: &BTreeMap<Symbol, Rational64>) -> Self {
        let mut out = Self::new(self.valid_through);
        for (s, p) in &self.terms {
            out.add_term(*s, p.substitute(values));
        }
        out
    }

    pub fn mul(&self, other: &Self, mode: ProductMode) -> Result<Self> {
        let (Some(da), Some(db)) = (self.min_degree(), other.min_degree()) else {
            return Ok(Self::new(self.valid_through.min(other.valid_through)));
        };
        let valid = (self.valid_through + db).min(other.valid_through + da);
        let mut out = Self::new(valid);
        for (sa, pa) in &self.terms {
            for (sb, pb) in &other.terms {
                let Some(kind) = combine_kinds(sa, sb, mode)? else { continue };
                let both = sa.slash && sb.slash;
                let s = Structure {
                    slash: sa.slash ^ sb.slash,
                    xi2_power: sa.xi2_power + sb.xi2_power + both as i32,
                    log_power: sa.log_power + sb.log_power,
                    epsilon: sa.epsilon ^ sb.epsilon,
                    kind,
                };
                if s.degree() > valid {
                    continue;
                }
                out.add_term(s, pa.mul(pb));
            }
        }
        Ok(out)
    }

    /// Sets Θ(ξ²) = 1, the timelike region away from the cone.
    pub fn timelike(&self) -> Self {
        let mut out = Self::new(self.valid_through);
        for (s, p) in &self.terms {
            if s.kind.on_cone() {
                continue;
            }
            out.add_term(Structure { kind: Singularity::Regular, ..*s }, p.clone());
        }
        out
    }

    /// Part proportional to ξ̸.
    pub fn vector_part(&self) -> Self {
        let mut out = Self::new(self.valid_through);
        for (s, p) in self.terms.iter().filter(|(s, _)| s.slash) {
            out.add_term(*s, p.clone());
        }
        out
    }

    pub fn scale(&self, c: CRational) -> Self {
        let mut out = Self::new(self.valid_through);
        for (s, p) in &self.terms {
            out.add_term(*s, p.scale(c));
        }
        out
    }
}

fn combine_kinds(a: &Structure, b: &Structure, mode: ProductMode) -> Result<Option<Singularity>> {
    use Singularity::*;
    let cone = a.kind.on_cone() || b.kind.on_cone();
    if cone && mode == ProductMode::AwayFromCone {
        return Ok(None);
    }
    Ok(Some(match (a.kind, b.kind) {
        (Regular, Regular) => Regular,
        (Theta, Regular) | (Regular, Theta) | (Theta, Theta) => Theta,
        (k @ (Delta | DeltaPrime), _) if b.is_smooth() => k,
        (_, k @ (Delta | DeltaPrime)) if a.is_smooth() => k,
        _ => return Err(Error::UnimplementedProduct(format!("({a}) · ({b})"))),
    }))
}

impl fmt::Display for LightconeExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, p) in self.terms() {
            writeln!(f, "[{}] {}  ×  {}", s.degree(), p, s)?;
        }
        write!(f, "(exact through degree {})", self.valid_through)
    }
}

fn i_times(p: Polynomial) -> Polynomial {
    p.scale(Complex::new(Rational64::zero(), Rational64::one()))
}

/// Expansion of P(x,y) near the light cone in the basis of C₀..C₃, D₀..D₃;
/// all displayed terms have degree ≤ 0.
pub fn dirac_sea_expansion() -> LightconeExpansion {
    use Symbol::*;
    let mut e = LightconeExpansion::new(0);
    let s = |slash, p| Structure::regular(slash, p);
    let eps = |slash, kind| Structure { slash, xi2_power: 0, log_power: 0, epsilon: true, kind };
    e.add_term(s(true, -2), i_times(Polynomial::symbol(C0)));
    e.add_term(s(false, -1), Polynomial::symbol(C1));
    e.add_term(s(true, -1), i_times(Polynomial::symbol(C2)));
    e.add_term(Structure { log_power: 1, ..s(false, 0) }, Polynomial::symbol(C3));
    e.add_term(eps(true, Singularity::DeltaPrime), Polynomial::symbol(D0));
    e.add_term(eps(false, Singularity::Delta), i_times(Polynomial::symbol(D1)));
    e.add_term(eps(true, Singularity::Delta), Polynomial::symbol(D2));
    e.add_term(eps(false, Singularity::Theta), i_times(Polynomial::symbol(D3)));
    e
}

/// A_xy = P(x,y) P(x,y)* away from the light cone, restricted to ξ² > 0.
pub fn expansion_product(p: &LightconeExpansion) -> Result<LightconeExpansion> {
    Ok(p.mul(&p.conj(), ProductMode::AwayFromCone)?.timelike())
}

/// ℳ as twice the trace-free (vector) part of a chain expansion.
pub fn gradient_expansion(a: &LightconeExpansion) -> LightconeExpansion {
    a.vector_part().scale(real(Rational64::from_integer(2)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub powers: BTreeMap<String, u8>,
    /// [numerator, denominator]
    pub re: [i64; 2],
    pub im: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub degree: i32,
    pub structure: Structure,
    pub display: String,
    pub coefficient: Vec<MonomialJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionJson {
    pub valid_through: i32,
    pub terms: Vec<TermJson>,
}

fn pair(r: &Rational64) -> [i64; 2] {
    [*r.numer(), *r.denom()]
}

impl LightconeExpansion {
    pub fn to_json(&self) -> ExpansionJson {
        ExpansionJson {
            valid_through: self.valid_through,
            terms: self
                .terms()
                .into_iter()
                .map(|(s, p)| TermJson {
                    degree: s.degree(),
                    structure: s,
                    display: s.to_string(),
                    coefficient: p
                        .terms()
                        .map(|(m, c)| MonomialJson {
                            powers: Symbol::ALL
                                .iter()
                                .filter(|sym| m[sym.index()] > 0)
                                .map(|sym| (sym.name().to_string(), m[sym.index()]))
                                .collect(),
                            re: pair(&c.re),
                            im: pair(&c.im),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Parses "3", "-2/5" or a JSON number with an exact decimal expansion.
pub fn parse_rational(v: &serde_json::Value) -> Result<Rational64> {
    let bad = || Error::InvalidInput(format!("not an exact rational: {v}"));
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return Ok(Rational64::from_integer(i));
            }
            parse_decimal(&n.to_string()).ok_or_else(bad)
        }
        serde_json::Value::String(s) => {
            let s = s.trim();
            if let Some((a, b)) = s.split_once('/') {
                let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                if b == 0 {
                    return Err(bad());
                }
                return Ok(Rational64::new(a, b));
            }
            parse_decimal(s).ok_or_else(bad)
        }
        serde_json::Value::Array(a) if a.len() == 2 => {
            let (Some(n), Some(d)) = (a[0].as_i64(), a[1].as_i64()) else { return Err(bad()) };
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
        _ => Err(bad()),
    }
}

fn parse_decimal(s: &str) -> Option<Rational64> {
    if s.contains(['e', 'E']) {
        return None;
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if frac.len() > 15 {
        return None;
    }
    let digits: i64 = format!("{int}{frac}").parse().ok()?;
    let r = Rational64::new(digits, 10i64.checked_pow(frac.len() as u32)?);
    Some(if neg { -r } else { r })
}
