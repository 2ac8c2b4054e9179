//! The modules `M^±_m`: Bessel-type radial series, typical elements, truncated
//! operator application, membership and eigenvalue checks, the `p`-action
//! formula and the linear obstruction solve.
//!
//! Elements are total-degree truncations of formal power series. A
//! [`TruncatedElement`] records the degree up to which its expansion is exact.
//! Applying an operator that lowers degree by `d` costs `d` degrees of
//! validity, since output degree `e` only sees input degrees `≤ e + d`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{q, GaussianRational};
use crate::error::{Error, Result};
use crate::liealg::{self, CasimirKind, Flavor, Generator, LieAlgebra, Signature};
use crate::linalg::LinearSystem;
use crate::poly::{self, harmonic_basis, harmonic_dimension, Block, Monomial, MultiPoly, VariableSpace};
use crate::symsq;
use crate::weyl::WeylOperator;

type GR = GaussianRational;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModuleParams {
    pub p: usize,
    pub q: usize,
    pub m: usize,
    pub sign: Sign,
}

impl ModuleParams {
    pub fn new(p: usize, q: usize, m: usize, sign: Sign) -> Self {
        Self { p, q, m, sign }
    }

    /// `p, q ≥ 2`, `p + q` even and `m + 3 ≤ (p + q)/2`.
    pub fn validate(&self) -> Result<()> {
        let (p, q, m) = (self.p, self.q, self.m);
        if p < 2 || q < 2 {
            return Err(Error::InvalidParams(format!("need p, q >= 2, got p = {p}, q = {q}")));
        }
        if (p + q) % 2 != 0 {
            return Err(Error::InvalidParams(format!("p + q = {} is odd", p + q)));
        }
        if 2 * (m + 3) > p + q {
            return Err(Error::InvalidParams(format!(
                "m + 3 = {} exceeds (p + q)/2 = {}",
                m + 3,
                (p + q) / 2
            )));
        }
        Ok(())
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.p, self.q)
    }

    pub fn space(&self) -> VariableSpace {
        VariableSpace::new(self.p, self.q)
    }

    pub fn with_sign(&self, sign: Sign) -> Self {
        Self { sign, ..*self }
    }

    pub fn ktype(&self, k: usize, l: usize) -> KType {
        KType::new(self.p, self.q, k, l)
    }

    /// `(μ₊, μ₋)` for a K-type when both are non-negative integers.
    pub fn mus(&self, kt: &KType) -> Option<(u32, u32)> {
        let d = kt.kappa_diff();
        let m = self.m as i64;
        if d.abs() > m || (m - d) % 2 != 0 {
            return None;
        }
        Some((((m - d) / 2) as u32, ((m + d) / 2) as u32))
    }

    pub fn admits(&self, kt: &KType) -> bool {
        self.mus(kt).is_some()
    }

    /// Scalar by which `Ω̂_g` acts: `m(m+2) − (p+q)²/4 + (p+q)`.
    pub fn casimir_g_scalar(&self) -> GR {
        let (m, n) = (self.m as i64, (self.p + self.q) as i64);
        &(&GR::from_int(m * (m + 2)) - &q(n * n, 4)) + &GR::from_int(n)
    }

    /// `λ_κ = (κ₊−κ₋)(κ₊+κ₋−2) − ((p−q)/(p+q))·m(m+2)`.
    pub fn lambda(&self, kt: &KType) -> GR {
        let d = kt.kappa_diff();
        let s = &(&kt.kappa_plus() + &kt.kappa_minus()) - &GR::from_int(2);
        let m = self.m as i64;
        let corr = q((self.p as i64 - self.q as i64) * m * (m + 2), (self.p + self.q) as i64);
        &(&s * &GR::from_int(d)) - &corr
    }

    /// Smallest validity a check may end at.
    pub fn required_validity(&self) -> i64 {
        self.m as i64 + 4
    }

    /// Default truncation degree `2m + 12`.
    pub fn default_validity(&self) -> i64 {
        2 * self.m as i64 + 12
    }
}

impl fmt::Display for ModuleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} q={} m={} sign={}", self.p, self.q, self.m, self.sign)
    }
}

/// `κ = (k + p/2, l + q/2)`, stored as doubled integers.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KType {
    pub k: usize,
    pub l: usize,
    twice_kappa_plus: i64,
    twice_kappa_minus: i64,
}

impl KType {
    pub fn new(p: usize, q: usize, k: usize, l: usize) -> Self {
        Self {
            k,
            l,
            twice_kappa_plus: (2 * k + p) as i64,
            twice_kappa_minus: (2 * l + q) as i64,
        }
    }

    pub fn kappa_plus(&self) -> GR {
        q(self.twice_kappa_plus, 2)
    }

    pub fn kappa_minus(&self) -> GR {
        q(self.twice_kappa_minus, 2)
    }

    /// `κ₊ − κ₋`, an integer because `p + q` is even.
    pub fn kappa_diff(&self) -> i64 {
        (self.twice_kappa_plus - self.twice_kappa_minus) / 2
    }
}

impl fmt::Display for KType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.kappa_plus(), self.kappa_minus())
    }
}

/// `Σ c_{ab} ρ_x^a ρ_y^b` up to total degree `cutoff` (`ρ_x^a ρ_y^b` has
/// degree `2a + 2b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialSeries {
    pub coeffs: BTreeMap<(u32, u32), GR>,
    pub cutoff: i64,
}

impl RadialSeries {
    /// Multiplies by `ρ_block^e`, dropping terms past the cutoff.
    pub fn times_rho(&self, block: Block, e: u32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&(a, b), c)| {
                let key = match block {
                    Block::X => (a + e, b),
                    Block::Y => (a, b + e),
                };
                (key, c.clone())
            })
            .filter(|((a, b), _)| 2 * (*a as i64 + *b as i64) <= self.cutoff)
            .collect();
        Self {
            coeffs,
            cutoff: self.cutoff,
        }
    }

    pub fn to_poly(&self, space: VariableSpace) -> MultiPoly {
        let rx = MultiPoly::rho(space, Block::X);
        let ry = MultiPoly::rho(space, Block::Y);
        let amax = self.coeffs.keys().map(|k| k.0).max().unwrap_or(0);
        let bmax = self.coeffs.keys().map(|k| k.1).max().unwrap_or(0);
        let powers = |base: &MultiPoly, top: u32| {
            let mut v = vec![MultiPoly::one(space)];
            for _ in 0..top {
                let next = v.last().unwrap() * base;
                v.push(next);
            }
            v
        };
        let (px, py) = (powers(&rx, amax), powers(&ry, bmax));
        let mut out = MultiPoly::zero(space);
        for (&(a, b), c) in &self.coeffs {
            let t = &px[a as usize] * &py[b as usize];
            out = &out + &t.scale(c);
        }
        out
    }
}

fn is_pole(alpha: &GR) -> bool {
    alpha.is_real() && alpha.re().is_integer() && *alpha.re() <= num_rational::BigRational::from_integer(0.into())
}

/// `ψ_α = Σ_j (−1)^j/(j!(α)_j) (ρ_xρ_y)^j`, i.e. `Ψ_α(r_x²r_y²/4)`.
pub fn psi_series(alpha: &GR, cutoff: i64) -> Result<RadialSeries> {
    if is_pole(alpha) {
        return Err(Error::Pole(format!("psi_{alpha} is undefined for alpha in -N")));
    }
    let mut coeffs = BTreeMap::new();
    let mut c = GR::one();
    let mut j: u32 = 0;
    while 4 * j as i64 <= cutoff {
        coeffs.insert((j, j), c.clone());
        let den = &GR::from_int(j as i64 + 1) * &(alpha + &GR::from_int(j as i64));
        c = -(&c / &den);
        j += 1;
    }
    Ok(RadialSeries { coeffs, cutoff })
}

/// A formal series known exactly through total degree `validity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedElement {
    pub expansion: MultiPoly,
    pub validity: i64,
}

impl TruncatedElement {
    pub fn new(expansion: MultiPoly, validity: i64) -> Self {
        Self {
            expansion: expansion.truncate(validity),
            validity,
        }
    }

    pub fn space(&self) -> VariableSpace {
        self.expansion.space()
    }

    pub fn scale(&self, c: &GR) -> Self {
        Self {
            expansion: self.expansion.scale(c),
            validity: self.validity,
        }
    }

    /// Difference, valid through the smaller validity.
    pub fn sub(&self, other: &Self) -> Self {
        let v = self.validity.min(other.validity);
        Self::new(&self.expansion - &other.expansion, v)
    }

    pub fn add(&self, other: &Self) -> Self {
        let v = self.validity.min(other.validity);
        Self::new(&self.expansion + &other.expansion, v)
    }

    pub fn is_zero_up_to_validity(&self) -> bool {
        self.expansion.truncate(self.validity).is_zero()
    }

    pub fn equals_up_to_validity(&self, other: &Self) -> bool {
        self.sub(other).is_zero_up_to_validity()
    }
}

/// `A f`, valid through `validity(f) − drop(A)`.
pub fn apply_operator(a: &WeylOperator, f: &TruncatedElement) -> Result<TruncatedElement> {
    let drop = a.degree_drop() as i64;
    let validity = f.validity - drop;
    if validity < 0 {
        return Err(Error::ValidityUnderflow {
            drop,
            validity: f.validity,
        });
    }
    let expansion = a.apply_bounded(&f.expansion, validity)?;
    Ok(TruncatedElement { expansion, validity })
}

fn harmonic_degree(h: &MultiPoly, block: Block) -> Result<usize> {
    let d = h
        .block_homogeneous_degree(block)
        .ok_or(Error::NotHomogeneous(block.name()))?;
    if h.block_homogeneous_degree(block.other()) != Some(0) {
        return Err(Error::NotHomogeneous(block.other().name()));
    }
    if !h.is_harmonic(block) {
        return Err(Error::NotHarmonic(block.name()));
    }
    Ok(d as usize)
}

/// Radial part `ρ_y^{μ₋}ψ_{κ₊}` (sign `+`) or `ρ_x^{μ₊}ψ_{κ₋}` (sign `−`).
fn radial_part(params: &ModuleParams, kt: &KType, cutoff: i64) -> Result<RadialSeries> {
    let (mu_plus, mu_minus) = params
        .mus(kt)
        .ok_or_else(|| Error::NotAKType(format!("{kt} for {params}")))?;
    Ok(match params.sign {
        Sign::Plus => psi_series(&kt.kappa_plus(), cutoff)?.times_rho(Block::Y, mu_minus),
        Sign::Minus => psi_series(&kt.kappa_minus(), cutoff)?.times_rho(Block::X, mu_plus),
    })
}

/// `h₁h₂ρ_y^{μ₋}ψ_{κ₊}` (sign `+`) or `h₁h₂ρ_x^{μ₊}ψ_{κ₋}` (sign `−`).
pub fn typical_element(params: &ModuleParams, h1: &MultiPoly, h2: &MultiPoly, validity: i64) -> Result<TruncatedElement> {
    let space = params.space();
    space.check_same(&h1.space())?;
    space.check_same(&h2.space())?;
    let k = harmonic_degree(h1, Block::X)?;
    let l = harmonic_degree(h2, Block::Y)?;
    let kt = params.ktype(k, l);
    let radial = radial_part(params, &kt, validity - (k + l) as i64)?;
    let hh = h1 * h2;
    let expansion = hh.mul_truncated(&radial.to_poly(space), validity);
    Ok(TruncatedElement::new(expansion, validity))
}

/// A typical element together with the data it was built from.
#[derive(Clone, Debug)]
pub struct Sample {
    pub params: ModuleParams,
    pub ktype: KType,
    pub h1: MultiPoly,
    pub h2: MultiPoly,
    pub element: TruncatedElement,
}

impl Sample {
    pub fn new(params: &ModuleParams, h1: MultiPoly, h2: MultiPoly, validity: i64) -> Result<Self> {
        let element = typical_element(params, &h1, &h2, validity)?;
        let ktype = params.ktype(harmonic_degree(&h1, Block::X)?, harmonic_degree(&h2, Block::Y)?);
        Ok(Self {
            params: *params,
            ktype,
            h1,
            h2,
            element,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KTypeEntry {
    pub k: usize,
    pub l: usize,
    pub kappa: String,
    pub multiplicity: usize,
}

/// K-types with `k ≤ k_max`, `l ≤ l_max` and `κ₊ − κ₋ ∈ {−m, −m+2, …, m}`.
pub fn ktype_enumeration(params: &ModuleParams, k_max: usize, l_max: usize) -> Vec<KTypeEntry> {
    let mut out = Vec::new();
    for k in 0..=k_max {
        for l in 0..=l_max {
            let kt = params.ktype(k, l);
            if params.admits(&kt) {
                out.push(KTypeEntry {
                    k,
                    l,
                    kappa: kt.to_string(),
                    multiplicity: harmonic_dimension(params.p, k) * harmonic_dimension(params.q, l),
                });
            }
        }
    }
    out
}

fn first_harmonic(space: VariableSpace, block: Block, k: usize) -> MultiPoly {
    harmonic_basis(space, block, k).elements.swap_remove(0)
}

/// One typical element per admissible K-type with `k ≤ k_max`, `l ≤ l_max`,
/// built from the first harmonic basis element of each degree.
pub fn default_samples(params: &ModuleParams, k_max: usize, l_max: usize, validity: i64) -> Result<Vec<Sample>> {
    let space = params.space();
    ktype_enumeration(params, k_max, l_max)
        .into_par_iter()
        .map(|e| {
            Sample::new(
                params,
                first_harmonic(space, Block::X, e.k),
                first_harmonic(space, Block::Y, e.l),
                validity,
            )
        })
        .collect()
}

type SampleCache = Mutex<HashMap<(ModuleParams, usize, usize, i64), Arc<Vec<Sample>>>>;

/// [`default_samples`], memoized for the life of the process.
pub fn cached_samples(params: &ModuleParams, k_max: usize, l_max: usize, validity: i64) -> Result<Arc<Vec<Sample>>> {
    static CACHE: OnceLock<SampleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (*params, k_max, l_max, validity);
    if let Some(s) = cache.lock().unwrap().get(&key) {
        return Ok(s.clone());
    }
    let samples = Arc::new(default_samples(params, k_max, l_max, validity)?);
    cache.lock().unwrap().insert(key, samples.clone());
    Ok(samples)
}

/// Every product of harmonic basis elements in K-type `(k, l)`.
pub fn full_basis_samples(params: &ModuleParams, k: usize, l: usize, validity: i64) -> Result<Vec<Sample>> {
    let space = params.space();
    let bx = harmonic_basis(space, Block::X, k).elements;
    let by = harmonic_basis(space, Block::Y, l).elements;
    let pairs: Vec<_> = bx
        .iter()
        .flat_map(|a| by.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    pairs
        .into_par_iter()
        .map(|(a, b)| Sample::new(params, a, b, validity))
        .collect()
}

fn check_validity(needed: i64, available: i64) -> Result<()> {
    if available < needed {
        return Err(Error::TruncationTooSmall { needed, available });
    }
    Ok(())
}

type OpCache = Mutex<HashMap<(Signature, &'static str), Arc<WeylOperator>>>;

fn cached_operator(sig: Signature, name: &'static str, build: impl FnOnce() -> Result<WeylOperator>) -> Result<Arc<WeylOperator>> {
    static CACHE: OnceLock<OpCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(op) = cache.lock().unwrap().get(&(sig, name)) {
        return Ok(op.clone());
    }
    let op = Arc::new(build()?);
    cache.lock().unwrap().insert((sig, name), op.clone());
    Ok(op)
}

/// `π(Ω)` for one of the three Casimir elements.
pub fn casimir_image(which: CasimirKind, sig: Signature) -> Result<Arc<WeylOperator>> {
    let name = match which {
        CasimirKind::G => "casimir_g",
        CasimirKind::Op => "casimir_op",
        CasimirKind::Oq => "casimir_oq",
    };
    cached_operator(sig, name, || Ok(liealg::pi(&liealg::casimir(which, sig))))
}

/// `Ξ̂ = π(γ₂(Ξ))`.
pub fn xi_operator(sig: Signature) -> Result<Arc<WeylOperator>> {
    cached_operator(sig, "xi", || symsq::pi_of_tensor(&symsq::build_xi(sig)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub h_eigenvalue: bool,
    pub annihilated: bool,
    pub power_annihilated: bool,
    /// Lowest validity at which any of the three claims was checked.
    pub validity: i64,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.h_eigenvalue && self.annihilated && self.power_annihilated
    }
}

/// `Hf = ±mf`, `X^±f = 0`, `(X^∓)^{m+1}f = 0` through the tracked validity.
pub fn verify_membership(params: &ModuleParams, f: &TruncatedElement) -> Result<MembershipReport> {
    let sig = params.signature();
    let m = params.m as i64;
    let (h, xp, xm) = liealg::sl2_triple(sig);
    let (kill, lower, eigen) = match params.sign {
        Sign::Plus => (&xp, &xm, m),
        Sign::Minus => (&xm, &xp, -m),
    };
    let needed = params.required_validity();
    check_validity(needed, f.validity - 2 * (m + 1))?;

    let hf = apply_operator(&h, f)?;
    let h_eigenvalue = hf.equals_up_to_validity(&f.scale(&GR::from_int(eigen)));
    let killed = apply_operator(kill, f)?;
    let annihilated = killed.is_zero_up_to_validity();
    let mut g = f.clone();
    for _ in 0..=params.m {
        g = apply_operator(lower, &g)?;
    }
    let power_annihilated = g.is_zero_up_to_validity();
    Ok(MembershipReport {
        h_eigenvalue,
        annihilated,
        power_annihilated,
        validity: hf.validity.min(killed.validity).min(g.validity),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenCheck {
    pub operator: String,
    pub expected: String,
    pub passed: bool,
    pub validity: i64,
}

fn eigen_check(name: &str, op: &WeylOperator, f: &TruncatedElement, expected: GR, needed: i64) -> Result<EigenCheck> {
    let lhs = apply_operator(op, f)?;
    check_validity(needed, lhs.validity)?;
    Ok(EigenCheck {
        operator: name.to_string(),
        passed: lhs.equals_up_to_validity(&f.scale(&expected)),
        expected: expected.to_string(),
        validity: lhs.validity,
    })
}

/// Predicted scalar of a Casimir image on K-type `κ`: `(κ₊−1)² − (p−2)²/4`,
/// `(κ₋−1)² − (q−2)²/4`, or the `Ω̂_g` scalar.
pub fn casimir_eigenvalue(params: &ModuleParams, which: CasimirKind, kt: &KType) -> GR {
    let one = GR::one();
    let shifted = |kappa: GR, n: usize| {
        let k = &kappa - &one;
        let n = n as i64;
        &(&k * &k) - &q((n - 2) * (n - 2), 4)
    };
    match which {
        CasimirKind::Op => shifted(kt.kappa_plus(), params.p),
        CasimirKind::Oq => shifted(kt.kappa_minus(), params.q),
        CasimirKind::G => params.casimir_g_scalar(),
    }
}

/// One Casimir image on a typical element of K-type `κ`.
pub fn casimir_eigenvalue_check_one(
    params: &ModuleParams,
    which: CasimirKind,
    kt: &KType,
    f: &TruncatedElement,
) -> Result<EigenCheck> {
    let name = match which {
        CasimirKind::Op => "omega_op",
        CasimirKind::Oq => "omega_oq",
        CasimirKind::G => "omega_g",
    };
    let op = casimir_image(which, params.signature())?;
    eigen_check(name, &op, f, casimir_eigenvalue(params, which, kt), params.required_validity())
}

/// `Ω̂_{o_p}`, `Ω̂_{o_q}` and `Ω̂_g` on a typical element of K-type `κ`.
pub fn casimir_eigenvalue_check(params: &ModuleParams, kt: &KType, f: &TruncatedElement) -> Result<Vec<EigenCheck>> {
    [CasimirKind::Op, CasimirKind::Oq, CasimirKind::G]
        .into_iter()
        .map(|w| casimir_eigenvalue_check_one(params, w, kt, f))
        .collect()
}

/// `Ξ̂ f = λ_κ f`.
pub fn xi_eigenvalue_check(params: &ModuleParams, kt: &KType, f: &TruncatedElement) -> Result<EigenCheck> {
    let sig = params.signature();
    eigen_check("xi", &*xi_operator(sig)?, f, params.lambda(kt), params.required_validity())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PActionReport {
    pub i: usize,
    pub j: usize,
    pub equal: bool,
    /// Which of the four right-hand terms are nonzero.
    pub active_terms: [bool; 4],
    pub validity: i64,
}

fn ratio(num: &GR, den: &GR, what: &str) -> Result<GR> {
    if den.is_zero() {
        return Err(Error::DegenerateDenominator(format!("{what} = 0")));
    }
    Ok(num / den)
}

/// One right-hand term `c · P₁P₂ · ρ^e ψ_α` through `validity`.
#[allow(clippy::too_many_arguments)]
fn paction_term(
    space: VariableSpace,
    c: &GR,
    p1: &MultiPoly,
    p2: &MultiPoly,
    rho_block: Block,
    e: i64,
    alpha: &GR,
    validity: i64,
) -> Result<Option<MultiPoly>> {
    let pp = p1 * p2;
    if c.is_zero() || pp.is_zero() {
        return Ok(None);
    }
    let e = u32::try_from(e).map_err(|_| Error::NotAKType(format!("negative radial exponent {e}")))?;
    let hdeg = pp.degree().unwrap_or(0) as i64;
    let radial = psi_series(alpha, validity - hdeg)?.times_rho(rho_block, e);
    Ok(Some(pp.mul_truncated(&radial.to_poly(space), validity).scale(c)))
}

/// `sign · i · π(X_{i,p+j}) f`.
pub fn p_action_lhs(params: &ModuleParams, sample: &Sample, i: usize, j: usize, sign: i64) -> Result<TruncatedElement> {
    let gen = Generator { i, j: params.p + j };
    let op = liealg::pi_generator(gen, params.signature()).scale(&(&GR::i() * &GR::from_int(sign)));
    apply_operator(&op, &sample.element)
}

/// Compares `i·π(X_{i,p+j}) f` with the four-term expansion of the
/// `p`-action for `f = h₁h₂ρ^μψ`. Indices `i < p`, `j < q` are 0-based.
///
/// With `π` as in [`liealg::pi_generator`] the expansion equals `+i·π(X)f`;
/// [`p_action_lhs`] with `sign = -1` gives its negative.
pub fn p_action_check(params: &ModuleParams, sample: &Sample, i: usize, j: usize) -> Result<PActionReport> {
    let space = params.space();
    if i >= params.p || j >= params.q {
        return Err(Error::IndexViolation(format!("({i},{j}) outside [p]x[q]")));
    }
    let kt = sample.ktype;
    let (mu_plus, mu_minus) = params
        .mus(&kt)
        .ok_or_else(|| Error::NotAKType(format!("{kt} for {params}")))?;
    let (kp, km) = (kt.kappa_plus(), kt.kappa_minus());
    let one = GR::one();
    let (h1, h2) = (&sample.h1, &sample.h2);

    let lhs = p_action_lhs(params, sample, i, j, 1)?;
    let validity = lhs.validity;

    let xi = space.var(Block::X, i);
    let yj = space.var(Block::Y, j);
    let dh1 = h1.partial(xi);
    let dh2 = h2.partial(yj);
    let xh1 = (&MultiPoly::x(space, i) * h1).dagger(Block::X)?;
    let yh2 = (&MultiPoly::y(space, j) * h2).dagger(Block::Y)?;

    // (coefficient, x-factor, y-factor, radial exponent, ψ index)
    let terms: [(GR, &MultiPoly, &MultiPoly, i64, GR); 4] = match params.sign {
        Sign::Plus => {
            let mu = GR::from_int(mu_minus as i64);
            let e = mu_minus as i64;
            let kmm1 = &km - &one;
            [
                (ratio(&(&(&km + &mu) - &one), &kmm1, "kappa_- - 1")?, &dh1, &dh2, e, &kp - &one),
                (mu.clone(), &dh1, &yh2, e - 1, &kp - &one),
                (
                    ratio(&(&(&kp - &km) - &mu), &(&kp * &kmm1), "kappa_+ (kappa_- - 1)")?,
                    &xh1,
                    &dh2,
                    e + 1,
                    &kp + &one,
                ),
                (ratio(&(&(&kp - &mu) - &one), &kp, "kappa_+")?, &xh1, &yh2, e, &kp + &one),
            ]
        }
        Sign::Minus => {
            let mu = GR::from_int(mu_plus as i64);
            let e = mu_plus as i64;
            let kpm1 = &kp - &one;
            [
                (ratio(&(&(&kp + &mu) - &one), &kpm1, "kappa_+ - 1")?, &dh1, &dh2, e, &km - &one),
                (
                    ratio(&(&(&km - &kp) - &mu), &(&km * &kpm1), "kappa_- (kappa_+ - 1)")?,
                    &dh1,
                    &yh2,
                    e + 1,
                    &km + &one,
                ),
                (mu.clone(), &xh1, &dh2, e - 1, &km - &one),
                (ratio(&(&(&km - &mu) - &one), &km, "kappa_-")?, &xh1, &yh2, e, &km + &one),
            ]
        }
    };
    let rho_block = match params.sign {
        Sign::Plus => Block::Y,
        Sign::Minus => Block::X,
    };
    let mut rhs = MultiPoly::zero(space);
    let mut active_terms = [false; 4];
    for (t, (c, a, b, e, alpha)) in terms.iter().enumerate() {
        if let Some(v) = paction_term(space, c, a, b, rho_block, *e, alpha, validity)? {
            active_terms[t] = !v.is_zero();
            rhs = &rhs + &v;
        }
    }
    let rhs = TruncatedElement::new(rhs, validity);
    Ok(PActionReport {
        i,
        j,
        equal: lhs.equals_up_to_validity(&rhs),
        active_terms,
        validity,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Nonzero coefficients of `Y` keyed by generator `X_{i,j}` (1-based).
    pub y: Vec<(String, String)>,
    pub lambda: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GarfinkleResult {
    pub exists: bool,
    pub witness: Option<Witness>,
    pub samples: usize,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub distinct_lambdas: Vec<String>,
    pub validity: i64,
    pub warnings: Vec<String>,
}

/// Default sample set for the obstruction solve: one element per K-type with
/// `k, l ≤ 2`, plus a full harmonic basis of the first K-type that has more
/// than one.
pub fn garfinkle_samples(params: &ModuleParams, validity: i64) -> Result<Vec<Sample>> {
    let mut samples = default_samples(params, 2, 2, validity)?;
    if let Some(e) = ktype_enumeration(params, 2, 2).into_iter().find(|e| e.multiplicity > 1) {
        samples.retain(|s| (s.ktype.k, s.ktype.l) != (e.k, e.l));
        samples.extend(full_basis_samples(params, e.k, e.l, validity)?);
    }
    Ok(samples)
}

/// Per-monomial coefficients of one sample: `(unknown, value)` pairs.
type SampleRows = BTreeMap<Monomial, Vec<(usize, GR)>>;

type GarfinkleCache = Mutex<HashMap<(ModuleParams, i64), GarfinkleResult>>;

/// [`garfinkle_obstruction`] on the default samples, memoized.
pub fn garfinkle_default(params: &ModuleParams, validity: i64) -> Result<GarfinkleResult> {
    static CACHE: OnceLock<GarfinkleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&(*params, validity)) {
        return Ok(r.clone());
    }
    let r = garfinkle_obstruction(params, validity, None)?;
    cache.lock().unwrap().insert((*params, validity), r.clone());
    Ok(r)
}

/// Looks for `Y ∈ g` and `λ` with `π(Y)f = (λ_{κ(f)} − λ)f` for every sample,
/// as one exact linear system whose unknowns are the coordinates of `Y`
/// followed by `λ`.
pub fn garfinkle_obstruction(params: &ModuleParams, validity: i64, samples: Option<&[Sample]>) -> Result<GarfinkleResult> {
    params.validate()?;
    let sig = params.signature();
    let owned;
    let samples = match samples {
        Some(s) => s,
        None => {
            owned = garfinkle_samples(params, validity)?;
            &owned
        }
    };
    let alg = LieAlgebra::get(sig, Flavor::G);
    let dim = alg.dim();
    let ops: Vec<WeylOperator> = alg.basis().iter().map(|g| liealg::pi_generator(*g, sig)).collect();
    let drop = ops.iter().map(|o| o.degree_drop() as i64).max().unwrap_or(0);
    let check_at = samples.iter().map(|s| s.element.validity).min().unwrap_or(validity) - drop;
    check_validity(params.required_validity(), check_at)?;

    // Rows of each sample, keyed by monomial: images of the basis, then f.
    let blocks: Vec<(GR, SampleRows)> = samples
        .par_iter()
        .map(|s| -> Result<_> {
            let f = TruncatedElement::new(s.element.expansion.clone(), check_at);
            let mut rows = SampleRows::new();
            for (a, op) in ops.iter().enumerate() {
                let img = op.apply_bounded(&s.element.expansion, check_at)?;
                for (mono, c) in img.into_terms() {
                    rows.entry(mono).or_default().push((a, c));
                }
            }
            for (mono, c) in f.expansion.terms() {
                rows.entry(mono.clone()).or_default().push((dim, c.clone()));
            }
            Ok((params.lambda(&s.ktype), rows))
        })
        .collect::<Result<_>>()?;

    let mut sys = LinearSystem::new(dim + 1);
    for (lam, rows) in &blocks {
        for row in rows.values() {
            // λ_κ times the coefficient of f.
            let rhs = row
                .iter()
                .find(|(c, _)| *c == dim)
                .map(|(_, v)| v * lam)
                .unwrap_or_else(GR::zero);
            sys.push(row.clone(), rhs);
            if !sys.is_consistent() {
                break;
            }
        }
        if !sys.is_consistent() {
            break;
        }
    }

    let distinct: BTreeSet<String> = blocks.iter().map(|(l, _)| l.to_string()).collect();
    let mut warnings = Vec::new();
    if samples.len() < 2 {
        warnings.push("fewer than two samples: the system is solvable with Y = 0".to_string());
    } else if params.m > 0 && distinct.len() < 2 {
        warnings.push("all samples share one lambda value: the system is solvable with Y = 0".to_string());
    }
    let witness = sys.solution().map(|x| Witness {
        y: alg
            .basis()
            .iter()
            .zip(&x)
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| (format!("{g:?}"), c.to_string()))
            .collect(),
        lambda: x[dim].to_string(),
    });
    Ok(GarfinkleResult {
        exists: witness.is_some(),
        witness,
        samples: samples.len(),
        unknowns: dim + 1,
        equations: sys.rows_seen(),
        rank: sys.rank(),
        distinct_lambdas: distinct.into_iter().collect(),
        validity: check_at,
        warnings,
    })
}

/// Sorted `(k, l)` pairs reachable by [`typical_element`], for cross-checking
/// against [`ktype_enumeration`].
pub fn constructible_ktypes(params: &ModuleParams, k_max: usize, l_max: usize) -> Vec<(usize, usize)> {
    let space = params.space();
    let mut out = Vec::new();
    for k in 0..=k_max {
        for l in 0..=l_max {
            let h1 = first_harmonic(space, Block::X, k);
            let h2 = first_harmonic(space, Block::Y, l);
            if typical_element(params, &h1, &h2, 4).is_ok() {
                out.push((k, l));
            }
        }
    }
    out
}

/// Checks the product rule for `Δ(h·φ(ρ))` with `φ` the one-variable series
/// of `ψ_α` in `ρ`, on a harmonic `h`.
pub fn product_rule_check(h: &MultiPoly, block: Block, alpha: &GR, validity: i64) -> Result<bool> {
    let series = psi_series(alpha, 2 * validity)?;
    let coeffs: Vec<GR> = series.coeffs.values().cloned().collect();
    poly::laplacian_product_rule_check(h, &poly::UnivariateSeries::new(coeffs), block, validity)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: usize, q: usize, m: usize) -> ModuleParams {
        ModuleParams::new(p, q, m, Sign::Plus)
    }

    #[test]
    fn psi_coefficients() {
        let s = psi_series(&GR::from_int(2), 8).unwrap();
        assert_eq!(s.coeffs[&(0, 0)], GR::one());
        assert_eq!(s.coeffs[&(1, 1)], q(-1, 2));
        assert_eq!(s.coeffs[&(2, 2)], q(1, 12));
        assert!(matches!(psi_series(&GR::from_int(-1), 8), Err(Error::Pole(_))));
        assert!(matches!(psi_series(&GR::zero(), 8), Err(Error::Pole(_))));
        assert!(psi_series(&q(-1, 2), 8).is_ok());
    }

    #[test]
    fn psi_recurrence() {
        let alpha = q(5, 2);
        let s = psi_series(&alpha, 20).unwrap();
        for j in 0..5u32 {
            let c = &s.coeffs[&(j, j)];
            let next = &s.coeffs[&(j + 1, j + 1)];
            let lhs = &(next * &(&GR::from_int(j as i64 + 1) * &(&alpha + &GR::from_int(j as i64)))) + c;
            assert!(lhs.is_zero());
        }
    }

    #[test]
    fn params_validation() {
        assert!(params(2, 4, 0).validate().is_ok());
        assert!(params(4, 6, 2).validate().is_ok());
        assert!(params(3, 4, 0).validate().is_err());
        assert!(params(4, 4, 2).validate().is_err());
        assert!(params(1, 5, 0).validate().is_err());
    }

    #[test]
    fn lambda_values() {
        let pr = params(4, 4, 1);
        assert_eq!(pr.lambda(&pr.ktype(1, 0)), GR::from_int(3));
        assert_eq!(pr.lambda(&pr.ktype(0, 1)), GR::from_int(-3));
        let pr = params(2, 4, 0);
        assert!(pr.lambda(&pr.ktype(1, 0)).is_zero());
        assert_eq!(params(4, 4, 1).casimir_g_scalar(), GR::from_int(-5));
    }

    #[test]
    fn typical_examples() {
        let pr = params(4, 4, 0);
        let s = pr.space();
        let f = typical_element(&pr, &MultiPoly::one(s), &MultiPoly::one(s), 6).unwrap();
        let rxy = &MultiPoly::rho(s, Block::X) * &MultiPoly::rho(s, Block::Y);
        let expect = &MultiPoly::one(s) - &rxy.scale(&q(1, 2));
        assert_eq!(f.expansion, expect);

        assert!(matches!(
            typical_element(&pr, &MultiPoly::x(s, 0), &MultiPoly::one(s), 6),
            Err(Error::NotAKType(_))
        ));
        let pr1 = params(4, 4, 1);
        assert_eq!(pr1.mus(&pr1.ktype(1, 0)), Some((0, 1)));
        let f = typical_element(&pr1, &MultiPoly::x(s, 0), &MultiPoly::one(s), 7).unwrap();
        assert_eq!(f.expansion.min_degree(), Some(3));
        let not_harmonic = &MultiPoly::x(s, 0) * &MultiPoly::x(s, 0);
        assert!(matches!(
            typical_element(&pr, &not_harmonic, &MultiPoly::one(s), 6),
            Err(Error::NotHarmonic(_))
        ));
    }

    #[test]
    fn apply_operator_validity() {
        let pr = params(4, 4, 0);
        let s = pr.space();
        let f = typical_element(&pr, &MultiPoly::one(s), &MultiPoly::one(s), 10).unwrap();
        let id = apply_operator(&WeylOperator::identity(s), &f).unwrap();
        assert_eq!(id, f);
        let g = apply_operator(&WeylOperator::laplacian(s, Block::X), &f).unwrap();
        assert_eq!(g.validity, 8);
        let (_, _, xm) = liealg::sl2_triple(pr.signature());
        let mut h = f.clone();
        for _ in 0..2 {
            h = apply_operator(&xm, &h).unwrap();
        }
        assert_eq!(h.validity, 6);
        let tiny = TruncatedElement::new(MultiPoly::one(s), 1);
        assert!(matches!(
            apply_operator(&WeylOperator::laplacian(s, Block::X), &tiny),
            Err(Error::ValidityUnderflow { .. })
        ));
    }

    #[test]
    fn membership_examples() {
        let pr = params(4, 4, 0);
        let s = pr.space();
        let f = typical_element(&pr, &MultiPoly::one(s), &MultiPoly::one(s), 12).unwrap();
        assert!(verify_membership(&pr, &f).unwrap().passed());
        let wrong = ModuleParams { m: 2, ..pr };
        assert!(!verify_membership(&wrong, &f).unwrap().h_eigenvalue);
        let pr1 = params(4, 4, 1);
        let f = typical_element(&pr1, &MultiPoly::x(s, 0), &MultiPoly::one(s), 14).unwrap();
        assert!(verify_membership(&pr1, &f).unwrap().passed());
        let short = TruncatedElement::new(f.expansion.clone(), 6);
        assert!(matches!(verify_membership(&pr1, &short), Err(Error::TruncationTooSmall { .. })));
    }

    #[test]
    fn minus_sign_membership() {
        let pr = ModuleParams::new(4, 4, 1, Sign::Minus);
        let s = pr.space();
        let f = typical_element(&pr, &MultiPoly::one(s), &MultiPoly::y(s, 1), 14).unwrap();
        assert!(verify_membership(&pr, &f).unwrap().passed());
    }

    #[test]
    fn eigenvalue_examples() {
        let pr = params(4, 4, 1);
        let s = pr.space();
        let smp = Sample::new(&pr, MultiPoly::x(s, 0), MultiPoly::one(s), 14).unwrap();
        let checks = casimir_eigenvalue_check(&pr, &smp.ktype, &smp.element).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        assert_eq!(checks[0].expected, "3");
        assert_eq!(checks[2].expected, "-5");
        let xi = xi_eigenvalue_check(&pr, &smp.ktype, &smp.element).unwrap();
        assert!(xi.passed);
        assert_eq!(xi.expected, "3");
    }

    #[test]
    fn ktype_lists() {
        let e = ktype_enumeration(&params(4, 4, 0), 2, 2);
        assert_eq!(e.iter().map(|e| (e.k, e.l, e.multiplicity)).collect::<Vec<_>>(), vec![(0, 0, 1), (1, 1, 16), (2, 2, 81)]);
        let e = ktype_enumeration(&params(4, 4, 1), 2, 2);
        assert!(e.iter().all(|e| e.k.abs_diff(e.l) == 1));
        let pr = params(2, 4, 0);
        let e = ktype_enumeration(&pr, 3, 3);
        assert!(e.iter().all(|e| e.k == e.l + 1));
        let listed: Vec<_> = e.iter().map(|e| (e.k, e.l)).collect();
        assert_eq!(constructible_ktypes(&pr, 3, 3), listed);
    }

    #[test]
    fn p_action_examples() {
        let pr = params(4, 4, 0);
        let s = pr.space();
        let smp = Sample::new(&pr, MultiPoly::one(s), MultiPoly::one(s), 10).unwrap();
        let r = p_action_check(&pr, &smp, 1, 2).unwrap();
        assert!(r.equal);
        assert_eq!(r.active_terms, [false, false, false, true]);
        let plus = p_action_lhs(&pr, &smp, 1, 2, 1).unwrap();
        let minus = p_action_lhs(&pr, &smp, 1, 2, -1).unwrap();
        assert!(!plus.equals_up_to_validity(&minus));

        let pr1 = params(4, 4, 1);
        let h1 = first_harmonic(s, Block::X, 1);
        let smp = Sample::new(&pr1, h1, MultiPoly::one(s), 12).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!(p_action_check(&pr1, &smp, i, j).unwrap().equal, "({i},{j})");
            }
        }
        let prm = pr1.with_sign(Sign::Minus);
        let smp = Sample::new(&prm, MultiPoly::x(s, 0), MultiPoly::one(s), 12).unwrap();
        assert!(p_action_check(&prm, &smp, 0, 0).unwrap().equal);
    }

    #[test]
    fn p_action_degenerate_denominator() {
        let pr = ModuleParams::new(4, 2, 1, Sign::Plus);
        let s = pr.space();
        let smp = Sample::new(&pr, MultiPoly::one(s), MultiPoly::one(s), 10).unwrap();
        assert_eq!(smp.ktype.kappa_minus(), GR::one());
        assert!(matches!(
            p_action_check(&pr, &smp, 0, 0),
            Err(Error::DegenerateDenominator(_))
        ));
    }

    #[test]
    fn garfinkle_small() {
        let pr = params(4, 4, 0);
        let r = garfinkle_obstruction(&pr, 8, None).unwrap();
        assert!(r.exists);
        let w = r.witness.unwrap();
        assert!(w.y.is_empty());
        assert_eq!(w.lambda, "0");

        let pr1 = params(4, 4, 1);
        let s = pr1.space();
        let one = Sample::new(&pr1, MultiPoly::x(s, 0), MultiPoly::one(s), 8).unwrap();
        let r = garfinkle_obstruction(&pr1, 8, Some(std::slice::from_ref(&one))).unwrap();
        assert!(r.exists);
        assert!(!r.warnings.is_empty());
        let r = garfinkle_obstruction(&pr1, 9, None).unwrap();
        assert!(!r.exists);
        assert_eq!(r.distinct_lambdas.len(), 4);
    }

    #[test]
    fn product_rule() {
        let s = VariableSpace::new(3, 2);
        let h = &MultiPoly::x(s, 0) * &MultiPoly::x(s, 1);
        assert!(product_rule_check(&h, Block::X, &q(5, 2), 8).unwrap());
    }
}
