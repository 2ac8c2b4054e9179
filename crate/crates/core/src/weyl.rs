//! Polynomial-coefficient differential operators on `V = R^{p+q}`.
//!
//! An operator is a finite sum `Σ c · x^a ∂^b`, always stored in normal order
//! (every multiplication to the left of every derivative). Normal order is
//! unique, so two operators are equal exactly when their term maps agree.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::GaussianRational;
use crate::error::Result;
use crate::poly::{Block, Monomial, MultiPoly, VariableSpace};

/// `x^mult ∂^deriv`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OpKey {
    pub mult: Monomial,
    pub deriv: Monomial,
}

#[derive(Clone, PartialEq, Eq)]
pub struct WeylOperator {
    space: VariableSpace,
    terms: BTreeMap<OpKey, GaussianRational>,
}

fn falling(n: u16, k: u16) -> i64 {
    (0..k).map(|i| (n - i) as i64).product()
}

fn binom(n: u16, k: u16) -> i64 {
    falling(n, k) / falling(k, k)
}

impl WeylOperator {
    pub fn zero(space: VariableSpace) -> Self {
        Self {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(space: VariableSpace, c: GaussianRational) -> Self {
        let n = space.nvars();
        let mut op = Self::zero(space);
        op.add_term(
            OpKey {
                mult: Monomial::one(n),
                deriv: Monomial::one(n),
            },
            c,
        );
        op
    }

    pub fn identity(space: VariableSpace) -> Self {
        Self::scalar(space, GaussianRational::one())
    }

    /// Multiplication by the coordinate with global index `v`.
    pub fn var(space: VariableSpace, v: usize) -> Self {
        Self::multiplication(&MultiPoly::var(space, v))
    }

    /// `∂_v` for global index `v`.
    pub fn partial(space: VariableSpace, v: usize) -> Self {
        let n = space.nvars();
        let mut op = Self::zero(space);
        op.add_term(
            OpKey {
                mult: Monomial::one(n),
                deriv: Monomial::var(n, v),
            },
            GaussianRational::one(),
        );
        op
    }

    /// Multiplication by a polynomial.
    pub fn multiplication(f: &MultiPoly) -> Self {
        let space = f.space();
        let n = space.nvars();
        let mut op = Self::zero(space);
        for (m, c) in f.terms() {
            op.add_term(
                OpKey {
                    mult: m.clone(),
                    deriv: Monomial::one(n),
                },
                c.clone(),
            );
        }
        op
    }

    /// `E = Σ_{v ∈ block} v ∂_v`.
    pub fn euler(space: VariableSpace, block: Block) -> Self {
        let n = space.nvars();
        let mut op = Self::zero(space);
        for v in space.block_range(block) {
            op.add_term(
                OpKey {
                    mult: Monomial::var(n, v),
                    deriv: Monomial::var(n, v),
                },
                GaussianRational::one(),
            );
        }
        op
    }

    /// `Δ = Σ_{v ∈ block} ∂_v²`.
    pub fn laplacian(space: VariableSpace, block: Block) -> Self {
        let n = space.nvars();
        let mut op = Self::zero(space);
        for v in space.block_range(block) {
            let mut d = Monomial::one(n);
            d.bump(v, 2);
            op.add_term(
                OpKey {
                    mult: Monomial::one(n),
                    deriv: d,
                },
                GaussianRational::one(),
            );
        }
        op
    }

    /// Multiplication by `r² = Σ_{v ∈ block} v²`.
    pub fn r_squared(space: VariableSpace, block: Block) -> Self {
        Self::multiplication(&MultiPoly::r_squared(space, block))
    }

    pub fn space(&self) -> VariableSpace {
        self.space
    }

    pub fn terms(&self) -> &BTreeMap<OpKey, GaussianRational> {
        &self.terms
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

    pub fn add_term(&mut self, key: OpKey, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
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

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.space);
        }
        Self {
            space: self.space,
            terms: self.terms.iter().map(|(k, a)| (k.clone(), a * c)).collect(),
        }
    }

    /// Highest total derivative order among the terms.
    pub fn max_derivative_order(&self) -> u32 {
        self.terms.keys().map(|k| k.deriv.degree()).max().unwrap_or(0)
    }

    /// Largest amount by which a term lowers polynomial degree,
    /// `max(|b| − |a|)` over terms `x^a ∂^b`, floored at zero.
    pub fn degree_drop(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.deriv.degree() as i64 - k.mult.degree() as i64)
            .max()
            .unwrap_or(0)
            .max(0) as u32
    }

    /// Largest amount by which a term raises polynomial degree,
    /// `max(|a| − |b|)` over terms, floored at zero.
    pub fn degree_raise(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.mult.degree() as i64 - k.deriv.degree() as i64)
            .max()
            .unwrap_or(0)
            .max(0) as u32
    }

    /// Normal-ordered product `self ∘ other`.
    ///
    /// `x^a ∂^b · x^c ∂^d = Σ_{k ≤ b, k ≤ c} Π_v C(b_v, k_v) c_v!/(c_v − k_v)! · x^{a+c−k} ∂^{b−k+d}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.space.check_same(&other.space)?;
        let n = self.space.nvars();
        let mut out = Self::zero(self.space);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let coeff = ca * cb;
                // Variables where a derivative of A meets a monomial of B.
                let active: Vec<usize> = (0..n)
                    .filter(|&v| ka.deriv.exp(v) > 0 && kb.mult.exp(v) > 0)
                    .collect();
                let mut k = vec![0u16; n];
                loop {
                    let mut factor: i64 = 1;
                    let mut mult = ka.mult.exps().to_vec();
                    let mut deriv = kb.deriv.exps().to_vec();
                    for v in 0..n {
                        mult[v] += kb.mult.exp(v) - k[v];
                        deriv[v] += ka.deriv.exp(v) - k[v];
                    }
                    for &v in &active {
                        factor *= binom(ka.deriv.exp(v), k[v]) * falling(kb.mult.exp(v), k[v]);
                    }
                    out.add_term(
                        OpKey {
                            mult: Monomial::from_exps(mult),
                            deriv: Monomial::from_exps(deriv),
                        },
                        &coeff * &GaussianRational::from_int(factor),
                    );
                    // Odometer over 0 ≤ k_v ≤ min(b_v, c_v) on active variables.
                    let mut advanced = false;
                    for &v in &active {
                        let cap = ka.deriv.exp(v).min(kb.mult.exp(v));
                        if k[v] < cap {
                            k[v] += 1;
                            advanced = true;
                            break;
                        }
                        k[v] = 0;
                    }
                    if !advanced {
                        break;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.compose(other)? - &other.compose(self)?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.space);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact action on a polynomial.
    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        self.apply_bounded(f, i64::MAX)
    }

    /// Action on a polynomial, discarding output terms of total degree above
    /// `max_degree`.
    pub fn apply_bounded(&self, f: &MultiPoly, max_degree: i64) -> Result<MultiPoly> {
        self.space.check_same(&f.space())?;
        let n = self.space.nvars();
        let mut out = MultiPoly::zero(self.space);
        for (k, c) in &self.terms {
            let shift = k.mult.degree() as i64 - k.deriv.degree() as i64;
            for (m, a) in f.terms() {
                if m.degree() as i64 + shift > max_degree {
                    // Terms are sorted by degree, so the rest are too high too.
                    break;
                }
                if !k.deriv.divides(m) {
                    continue;
                }
                let mut factor: i64 = 1;
                let mut exps = Vec::with_capacity(n);
                for v in 0..n {
                    let (mv, bv) = (m.exp(v), k.deriv.exp(v));
                    factor *= falling(mv, bv);
                    exps.push(mv - bv + k.mult.exp(v));
                }
                out.add_term(
                    Monomial::from_exps(exps),
                    &(c * a) * &GaussianRational::from_int(factor),
                );
            }
        }
        Ok(out)
    }
}

impl<'a> Add<&'a WeylOperator> for &'a WeylOperator {
    type Output = WeylOperator;
    fn add(self, rhs: &WeylOperator) -> WeylOperator {
        assert_eq!(self.space, rhs.space, "variable space mismatch");
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a WeylOperator> for &'a WeylOperator {
    type Output = WeylOperator;
    fn sub(self, rhs: &WeylOperator) -> WeylOperator {
        assert_eq!(self.space, rhs.space, "variable space mismatch");
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }
}

/// Composition; panics if the variable spaces differ (see
/// [`WeylOperator::compose`] for the fallible form).
impl<'a> Mul<&'a WeylOperator> for &'a WeylOperator {
    type Output = WeylOperator;
    fn mul(self, rhs: &WeylOperator) -> WeylOperator {
        self.compose(rhs).expect("variable space mismatch")
    }
}

impl Neg for &WeylOperator {
    type Output = WeylOperator;
    fn neg(self) -> WeylOperator {
        self.scale(&GaussianRational::from_int(-1))
    }
}

impl fmt::Display for WeylOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            for (v, &e) in k.mult.exps().iter().enumerate() {
                if e > 0 {
                    let name = self.space.var_name(v);
                    parts.push(if e == 1 { name } else { format!("{name}^{e}") });
                }
            }
            for (v, &e) in k.deriv.exps().iter().enumerate() {
                if e > 0 {
                    let name = format!("d{}", self.space.var_name(v));
                    parts.push(if e == 1 { name } else { format!("{name}^{e}") });
                }
            }
            if parts.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", parts.join("*"))?;
            } else {
                write!(f, "{c}*{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeylOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylOperator({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::error::Error;

    fn sp() -> VariableSpace {
        VariableSpace::new(3, 2)
    }

    #[test]
    fn canonical_commutation() {
        let s = sp();
        for v in 0..s.nvars() {
            for w in 0..s.nvars() {
                let c = WeylOperator::partial(s, v)
                    .commutator(&WeylOperator::var(s, w))
                    .unwrap();
                if v == w {
                    assert_eq!(c, WeylOperator::identity(s));
                } else {
                    assert!(c.is_zero());
                }
            }
        }
    }

    #[test]
    fn compose_examples() {
        let s = sp();
        let d = WeylOperator::partial(s, 0);
        let x = WeylOperator::var(s, 0);
        let xd = &x * &d;
        assert_eq!(&d * &x, &xd + &WeylOperator::identity(s));
        assert_eq!(xd.terms().len(), 1);

        let x1sq = WeylOperator::multiplication(&MultiPoly::x(s, 0).pow(2));
        let c = xd.commutator(&x1sq).unwrap();
        assert_eq!(c, x1sq.scale(&q(2, 1)));
    }

    #[test]
    fn apply_examples() {
        let s = sp();
        let x1 = MultiPoly::x(s, 0);
        assert_eq!(
            WeylOperator::partial(s, 0).apply(&x1.pow(3)).unwrap(),
            x1.pow(2).scale(&q(3, 1))
        );
        let op = &WeylOperator::var(s, 0) * &WeylOperator::partial(s, 1);
        let f = &MultiPoly::x(s, 1) * &MultiPoly::y(s, 0);
        assert_eq!(op.apply(&f).unwrap(), &x1 * &MultiPoly::y(s, 0));
        let g = &(&MultiPoly::x(s, 0) * &MultiPoly::x(s, 1)) * &MultiPoly::x(s, 2);
        assert_eq!(
            WeylOperator::euler(s, Block::X).apply(&g).unwrap(),
            g.scale(&q(3, 1))
        );
    }

    #[test]
    fn space_mismatch_is_an_error() {
        let a = WeylOperator::identity(VariableSpace::new(2, 2));
        let b = WeylOperator::identity(VariableSpace::new(3, 1));
        assert!(matches!(a.compose(&b), Err(Error::SpaceMismatch(..))));
    }

    #[test]
    fn degree_bookkeeping() {
        let s = sp();
        let lap = WeylOperator::laplacian(s, Block::X);
        assert_eq!(lap.degree_drop(), 2);
        assert_eq!(lap.max_derivative_order(), 2);
        let x_minus = &WeylOperator::r_squared(s, Block::X) + &WeylOperator::laplacian(s, Block::Y);
        assert_eq!(x_minus.degree_drop(), 2);
        assert_eq!(x_minus.degree_raise(), 2);
        assert_eq!(WeylOperator::euler(s, Block::Y).degree_drop(), 0);
    }
}
