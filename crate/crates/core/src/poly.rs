//! Sparse polynomials in `x₁..x_p, y₁..y_q` over `Q(i)`.
//!
//! Variables are indexed `0..p` for the x-block and `p..p+q` for the y-block.
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic with `x₁ > … > x_p > y₁ > … > y_q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Range, Sub};

use serde::{Deserialize, Serialize};

use crate::arith::{q, GaussianRational};
use crate::error::{Error, Result};
use crate::linalg;

/// Which block of variables an operation acts on.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Block {
    X,
    Y,
}

impl Block {
    pub fn name(self) -> &'static str {
        match self {
            Block::X => "x",
            Block::Y => "y",
        }
    }

    pub fn other(self) -> Block {
        match self {
            Block::X => Block::Y,
            Block::Y => Block::X,
        }
    }
}

/// The ambient space `R^{p+q}` with coordinates `x₁..x_p, y₁..y_q`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VariableSpace {
    pub p: usize,
    pub q: usize,
}

impl VariableSpace {
    pub fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    pub fn nvars(&self) -> usize {
        self.p + self.q
    }

    pub fn block_size(&self, block: Block) -> usize {
        match block {
            Block::X => self.p,
            Block::Y => self.q,
        }
    }

    pub fn block_range(&self, block: Block) -> Range<usize> {
        match block {
            Block::X => 0..self.p,
            Block::Y => self.p..self.p + self.q,
        }
    }

    /// Global index of the `i`-th (0-based) variable of `block`.
    pub fn var(&self, block: Block, i: usize) -> usize {
        assert!(i < self.block_size(block), "variable index out of range");
        self.block_range(block).start + i
    }

    pub fn var_name(&self, v: usize) -> String {
        if v < self.p {
            format!("x{}", v + 1)
        } else {
            format!("y{}", v - self.p + 1)
        }
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(self.p, self.q, other.p, other.q))
        }
    }
}

/// Exponent vector with cached total degree. The derived ordering compares
/// degree first, then exponents lexicographically, which is grlex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u16>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self {
            degree: 0,
            exps: vec![0; nvars],
        }
    }

    pub fn from_exps(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Self { degree, exps }
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[v] = 1;
        Self { degree: 1, exps }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, v: usize) -> u16 {
        self.exps[v]
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn block_degree(&self, range: Range<usize>) -> u32 {
        self.exps[range].iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial {
            degree: self.degree - other.degree,
            exps,
        })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub(crate) fn bump(&mut self, v: usize, by: i32) {
        let e = self.exps[v] as i32 + by;
        assert!(e >= 0, "negative exponent");
        self.exps[v] = e as u16;
        self.degree = (self.degree as i32 + by) as u32;
    }

    /// All monomials of total degree `d` in the variables of `range`, listed
    /// in descending grlex order.
    pub fn all_of_degree(nvars: usize, range: Range<usize>, d: u32) -> Vec<Monomial> {
        fn rec(vars: &[usize], d: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
            match vars.split_first() {
                None => {}
                Some((&v, [])) => {
                    cur[v] = d as u16;
                    out.push(cur.clone());
                    cur[v] = 0;
                }
                Some((&v, rest)) => {
                    for e in (0..=d).rev() {
                        cur[v] = e as u16;
                        rec(rest, d - e, cur, out);
                    }
                    cur[v] = 0;
                }
            }
        }
        let vars: Vec<usize> = range.collect();
        let mut out = Vec::new();
        if vars.is_empty() {
            if d == 0 {
                out.push(vec![0; nvars]);
            }
        } else {
            rec(&vars, d, &mut vec![0; nvars], &mut out);
        }
        out.into_iter().map(Monomial::from_exps).collect()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

/// Sparse polynomial on a [`VariableSpace`]. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    space: VariableSpace,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl MultiPoly {
    pub fn zero(space: VariableSpace) -> Self {
        Self {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: VariableSpace, c: GaussianRational) -> Self {
        let mut p = Self::zero(space);
        p.add_term(Monomial::one(space.nvars()), c);
        p
    }

    pub fn one(space: VariableSpace) -> Self {
        Self::constant(space, GaussianRational::one())
    }

    /// The coordinate function with global index `v`.
    pub fn var(space: VariableSpace, v: usize) -> Self {
        let mut p = Self::zero(space);
        p.add_term(Monomial::var(space.nvars(), v), GaussianRational::one());
        p
    }

    /// `x_{i+1}` (0-based `i`).
    pub fn x(space: VariableSpace, i: usize) -> Self {
        Self::var(space, space.var(Block::X, i))
    }

    /// `y_{j+1}` (0-based `j`).
    pub fn y(space: VariableSpace, j: usize) -> Self {
        Self::var(space, space.var(Block::Y, j))
    }

    pub fn monomial(space: VariableSpace, exps: Vec<u16>, c: GaussianRational) -> Self {
        assert_eq!(exps.len(), space.nvars());
        let mut p = Self::zero(space);
        p.add_term(Monomial::from_exps(exps), c);
        p
    }

    pub fn from_terms(space: VariableSpace, terms: impl IntoIterator<Item = (Monomial, GaussianRational)>) -> Self {
        let mut p = Self::zero(space);
        for (m, c) in terms {
            assert_eq!(m.nvars(), space.nvars());
            p.add_term(m, c);
        }
        p
    }

    /// `Σ_{v ∈ block} v²`.
    pub fn r_squared(space: VariableSpace, block: Block) -> Self {
        let mut p = Self::zero(space);
        for v in space.block_range(block) {
            let mut m = Monomial::one(space.nvars());
            m.bump(v, 2);
            p.add_term(m, GaussianRational::one());
        }
        p
    }

    /// `ρ = (1/2) Σ_{v ∈ block} v²`.
    pub fn rho(space: VariableSpace, block: Block) -> Self {
        Self::r_squared(space, block).scale(&q(1, 2))
    }

    pub fn space(&self) -> VariableSpace {
        self.space
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, GaussianRational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, GaussianRational> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Maximum total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Minimum total degree, `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    /// Common block degree if every term has the same degree in `block`.
    pub fn block_homogeneous_degree(&self, block: Block) -> Option<u32> {
        let range = self.space.block_range(block);
        let mut it = self.terms.keys().map(|m| m.block_degree(range.clone()));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.min_degree() == self.degree()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.space);
        }
        Self {
            space: self.space,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: i64) -> Self {
        Self {
            space: self.space,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| (m.degree() as i64) <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product truncated at total degree `max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: i64) -> Self {
        assert_eq!(self.space, other.space, "variable space mismatch");
        let mut out = Self::zero(self.space);
        for (ma, ca) in &self.terms {
            if ma.degree() as i64 > max_degree {
                break;
            }
            for (mb, cb) in &other.terms {
                if (ma.degree() + mb.degree()) as i64 > max_degree {
                    break;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.space);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `∂f/∂v` for global variable index `v`.
    pub fn partial(&self, v: usize) -> Self {
        let mut out = Self::zero(self.space);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.bump(v, -1);
            out.add_term(m2, c * &GaussianRational::from_int(e as i64));
        }
        out
    }

    /// Block Laplacian `Σ_{v ∈ block} ∂_v²`.
    pub fn laplacian(&self, block: Block) -> Self {
        let mut out = Self::zero(self.space);
        for (m, c) in &self.terms {
            for v in self.space.block_range(block) {
                let e = m.exp(v) as i64;
                if e < 2 {
                    continue;
                }
                let mut m2 = m.clone();
                m2.bump(v, -2);
                out.add_term(m2, c * &GaussianRational::from_int(e * (e - 1)));
            }
        }
        out
    }

    /// Block Euler operator `Σ_{v ∈ block} v ∂_v`.
    pub fn euler(&self, block: Block) -> Self {
        let range = self.space.block_range(block);
        let mut out = Self::zero(self.space);
        for (m, c) in &self.terms {
            let d = m.block_degree(range.clone()) as i64;
            out.add_term(m.clone(), c * &GaussianRational::from_int(d));
        }
        out
    }

    /// Harmonic correction `P − ρ/(2d + n − 4) · ΔP` for `P` homogeneous of
    /// degree `d` in the `n` variables of `block`.
    pub fn dagger(&self, block: Block) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let d = self
            .block_homogeneous_degree(block)
            .ok_or(Error::NotHomogeneous(block.name()))? as i64;
        let lap = self.laplacian(block);
        if lap.is_zero() {
            return Ok(self.clone());
        }
        let n = self.space.block_size(block) as i64;
        let den = 2 * d + n - 4;
        if den == 0 {
            return Err(Error::DegenerateDenominator(format!(
                "2d + n - 4 = 0 with d = {d}, n = {n}"
            )));
        }
        let corr = &Self::rho(self.space, block) * &lap;
        Ok(self - &corr.scale(&q(1, den)))
    }

    pub fn is_harmonic(&self, block: Block) -> bool {
        self.laplacian(block).is_zero()
    }

    /// Evaluates `Σ c_j u^j` at `u = base`, keeping total degree `≤ max_degree`.
    pub fn compose_series(base: &Self, coeffs: &[GaussianRational], max_degree: i64) -> Self {
        let mut out = Self::zero(base.space);
        let mut power = Self::one(base.space);
        for c in coeffs {
            if power.is_zero() || power.min_degree().is_none_or(|d| d as i64 > max_degree) {
                break;
            }
            out = &out + &power.scale(c);
            power = power.mul_truncated(base, max_degree);
        }
        out.truncate(max_degree)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.space, rhs.space, "variable space mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.space, rhs.space, "variable space mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.space, rhs.space, "variable space mismatch");
        let mut out = MultiPoly::zero(self.space);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&GaussianRational::from_int(-1))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    let name = self.space.var_name(v);
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            match (vars.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

/// `C(n, k)` with `C(n, k) = 0` whenever `n < 0`, `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> u64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `dim 𝓗^k(R^n) = C(n+k−1, n−1) − C(n+k−3, n−1)`.
pub fn harmonic_dimension(n: usize, k: usize) -> usize {
    let (n, k) = (n as i64, k as i64);
    (binomial(n + k - 1, n - 1) - binomial(n + k - 3, n - 1)) as usize
}

/// Basis of the homogeneous degree-`k` harmonic polynomials in one block.
#[derive(Clone, Debug)]
pub struct HarmonicBasis {
    pub block: Block,
    pub degree: usize,
    pub elements: Vec<MultiPoly>,
}

impl HarmonicBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Kernel of the block Laplacian on homogeneous degree-`k` polynomials of
/// `block`, computed by exact elimination in the monomial basis.
pub fn harmonic_basis(space: VariableSpace, block: Block, k: usize) -> HarmonicBasis {
    let nvars = space.nvars();
    let range = space.block_range(block);
    let source = Monomial::all_of_degree(nvars, range.clone(), k as u32);
    let target: BTreeMap<Monomial, usize> = if k >= 2 {
        Monomial::all_of_degree(nvars, range.clone(), k as u32 - 2)
            .into_iter()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect()
    } else {
        BTreeMap::new()
    };
    // Rows indexed by target monomials, columns by source monomials.
    let mut rows: Vec<Vec<(usize, GaussianRational)>> = vec![Vec::new(); target.len()];
    for (col, m) in source.iter().enumerate() {
        let lap = MultiPoly::from_terms(space, [(m.clone(), GaussianRational::one())]).laplacian(block);
        for (tm, c) in lap.terms() {
            rows[target[tm]].push((col, c.clone()));
        }
    }
    let kernel = linalg::nullspace(&rows, source.len());
    let elements = kernel
        .into_iter()
        .map(|v| MultiPoly::from_terms(space, v.into_iter().map(|(c, a)| (source[c].clone(), a))))
        .collect();
    HarmonicBasis {
        block,
        degree: k,
        elements,
    }
}

/// Truncated one-variable power series `Σ c_j u^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateSeries {
    pub coeffs: Vec<GaussianRational>,
}

impl UnivariateSeries {
    pub fn new(coeffs: Vec<GaussianRational>) -> Self {
        Self { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * &GaussianRational::from_int(j as i64))
                .collect(),
        }
    }
}

/// Checks `Δ(h φ(ρ)) = (2d + n) h φ′(ρ) + 2 h ρ φ″(ρ)` through total degree
/// `validity`, where `h` is harmonic and homogeneous of degree `d` in `block`.
///
/// The identity needs `Δh = 0`: for non-harmonic `h` the cross term
/// `φ(ρ)Δh` is missing, so such input is rejected.
pub fn laplacian_product_rule_check(
    h: &MultiPoly,
    phi: &UnivariateSeries,
    block: Block,
    validity: i64,
) -> Result<bool> {
    let space = h.space();
    let d = h
        .block_homogeneous_degree(block)
        .ok_or(Error::NotHomogeneous(block.name()))?;
    if !h.is_harmonic(block) {
        return Err(Error::NotHarmonic(block.name()));
    }
    let hdeg = h.degree().unwrap_or(0) as i64;
    if validity < hdeg {
        return Err(Error::TruncationTooSmall {
            needed: hdeg,
            available: validity,
        });
    }
    let n = space.block_size(block) as i64;
    let rho = MultiPoly::rho(space, block);
    let lhs = h
        .mul_truncated(&MultiPoly::compose_series(&rho, &phi.coeffs, validity + 2), validity + 2)
        .laplacian(block)
        .truncate(validity);
    let d1 = phi.derivative();
    let d2 = d1.derivative();
    let t1 = h
        .mul_truncated(&MultiPoly::compose_series(&rho, &d1.coeffs, validity), validity)
        .scale(&GaussianRational::from_int(2 * d as i64 + n));
    let t2 = (h * &rho).mul_truncated(&MultiPoly::compose_series(&rho, &d2.coeffs, validity), validity)
        .scale(&GaussianRational::from_int(2));
    Ok(lhs == (&t1 + &t2).truncate(validity))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: usize, q: usize) -> VariableSpace {
        VariableSpace::new(p, q)
    }

    #[test]
    fn laplacian_examples() {
        let sp = s(2, 1);
        let x1 = MultiPoly::x(sp, 0);
        let x2 = MultiPoly::x(sp, 1);
        let x1sq = &x1 * &x1;
        assert_eq!(x1sq.laplacian(Block::X), MultiPoly::constant(sp, q(2, 1)));
        assert!((&x1sq - &(&x2 * &x2)).laplacian(Block::X).is_zero());
        assert_eq!((&x1sq * &x2).laplacian(Block::X), x2.scale(&q(2, 1)));
    }

    #[test]
    fn euler_examples() {
        let sp = s(2, 2);
        let x12 = &MultiPoly::x(sp, 0) * &MultiPoly::x(sp, 1);
        assert_eq!(x12.euler(Block::X), x12.scale(&q(2, 1)));
        assert!(MultiPoly::y(sp, 0).pow(3).euler(Block::X).is_zero());
        let f = &(&MultiPoly::x(sp, 0) * &MultiPoly::y(sp, 0)) * &MultiPoly::y(sp, 1);
        assert_eq!(f.euler(Block::Y), f.scale(&q(2, 1)));
    }

    #[test]
    fn harmonic_basis_examples() {
        let b0 = harmonic_basis(s(4, 1), Block::X, 0);
        assert_eq!(b0.len(), 1);
        assert_eq!(b0.elements[0], MultiPoly::one(s(4, 1)));
        assert_eq!(harmonic_basis(s(4, 1), Block::X, 2).len(), 9);
        assert_eq!(harmonic_basis(s(2, 1), Block::X, 3).len(), 2);
        assert_eq!(harmonic_basis(s(1, 3), Block::Y, 2).len(), 5);
    }

    #[test]
    fn harmonic_dimension_formula() {
        assert_eq!(harmonic_dimension(4, 2), 9);
        assert_eq!(harmonic_dimension(2, 5), 2);
        assert_eq!(harmonic_dimension(3, 4), 9);
        assert_eq!(harmonic_dimension(6, 3), 50);
        assert_eq!(harmonic_dimension(1, 3), 0);
    }

    #[test]
    fn dagger_examples() {
        let sp = s(4, 2);
        let h = &MultiPoly::x(sp, 0) * &MultiPoly::x(sp, 1);
        assert_eq!(h.dagger(Block::X).unwrap(), h);

        let x1 = MultiPoly::x(sp, 0);
        let p = &x1 * &x1;
        let expected = &p - &MultiPoly::r_squared(sp, Block::X).scale(&q(1, 4));
        let got = p.dagger(Block::X).unwrap();
        assert_eq!(got, expected);
        assert!(got.is_harmonic(Block::X));

        // 2d + n − 4 = 0 here, but ΔP = 0 so there is nothing to correct.
        let sp2 = s(2, 2);
        assert_eq!(MultiPoly::x(sp2, 0).dagger(Block::X).unwrap(), MultiPoly::x(sp2, 0));
    }

    #[test]
    fn dagger_of_x_times_harmonic_is_harmonic() {
        let sp = s(3, 4);
        for block in [Block::X, Block::Y] {
            for k in 0..4 {
                for h in harmonic_basis(sp, block, k).elements {
                    for v in sp.block_range(block) {
                        let p = &MultiPoly::var(sp, v) * &h;
                        assert_eq!(p.laplacian(block), h.partial(v).scale(&q(2, 1)));
                        assert!(p.dagger(block).unwrap().is_harmonic(block));
                    }
                }
            }
        }
    }

    #[test]
    fn product_rule_examples() {
        let one = UnivariateSeries::new(vec![q(1, 1)]);
        let u = UnivariateSeries::new(vec![q(0, 1), q(1, 1)]);
        let u2 = UnivariateSeries::new(vec![q(0, 1), q(0, 1), q(1, 1)]);

        let sp = s(3, 1);
        assert!(laplacian_product_rule_check(&MultiPoly::one(sp), &one, Block::X, 4).unwrap());

        let x1 = MultiPoly::x(sp, 0);
        let lhs = (&x1 * &MultiPoly::rho(sp, Block::X)).laplacian(Block::X);
        assert_eq!(lhs, x1.scale(&q(5, 1)));
        assert!(laplacian_product_rule_check(&x1, &u, Block::X, 4).unwrap());

        let sp4 = s(4, 1);
        let h = &MultiPoly::x(sp4, 0) * &MultiPoly::x(sp4, 1);
        assert!(laplacian_product_rule_check(&h, &u2, Block::X, 6).unwrap());
    }

    #[test]
    fn product_rule_rejects_non_harmonic() {
        let sp = s(3, 1);
        let x1 = MultiPoly::x(sp, 0);
        let u = UnivariateSeries::new(vec![q(0, 1), q(1, 1)]);
        assert!(matches!(
            laplacian_product_rule_check(&(&x1 * &x1), &u, Block::X, 6),
            Err(Error::NotHarmonic(_))
        ));
        assert!(matches!(
            laplacian_product_rule_check(&x1, &u, Block::X, 0),
            Err(Error::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn grlex_order() {
        let sp = s(2, 1);
        let x1 = MultiPoly::x(sp, 0);
        let x2 = MultiPoly::x(sp, 1);
        let y1 = MultiPoly::y(sp, 0);
        let f = &(&(&x1 + &x2) + &y1) + &(&x2 * &x2);
        let order: Vec<String> = f
            .terms()
            .keys()
            .map(|m| MultiPoly::from_terms(sp, [(m.clone(), q(1, 1))]).to_string())
            .collect();
        assert_eq!(order, vec!["y1", "x2", "x1", "x2^2"]);
    }
}
