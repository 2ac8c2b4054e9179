//! The Lie algebras `g = o(p,q) ⊗ C` and `o_n`, the representation `π` of
//! `U(g)` by differential operators, and PBW normal forms in `U(g)`.
//!
//! Generators are the antisymmetric families `X_{i,j} = ε_j E_{i,j} − ε_i E_{j,i}`
//! (the `G` flavor) and `M_{i,j} = E_{i,j} − E_{j,i}` (the `On` flavor), with
//! `ε_i = 1` on the first `p` indices and `−1` on the last `q`. Indices are
//! 0-based in code; only `i < j` is stored and `X_{j,i} = −X_{i,j}` is applied on
//! construction. Structure constants come from matrix commutators in the
//! defining representation and are cached per `(signature, flavor)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith::{q, GaussianRational};
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::poly::{Block, VariableSpace};
use crate::symsq::SymSquareTensor;
use crate::weyl::WeylOperator;

type GR = GaussianRational;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    pub fn eps(&self, i: usize) -> i64 {
        if i < self.p {
            1
        } else {
            -1
        }
    }

    pub fn space(&self) -> VariableSpace {
        VariableSpace::new(self.p, self.q)
    }

    /// Both indices in `[p]` or both in `p + [q]`.
    pub fn same_block(&self, i: usize, j: usize) -> bool {
        (i < self.p) == (j < self.p)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    /// `X_{i,j}` basis of `o(p,q) ⊗ C`.
    G,
    /// `M_{i,j}` basis of `o_n`.
    On,
}

/// Canonical generator with `i < j` (0-based).
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub i: usize,
    pub j: usize,
}

impl Generator {
    /// Canonical form of the index pair `(i, j)` and the sign relating them:
    /// `X_{i,j} = sign · X_{canonical}`. Returns `None` for `i == j`.
    pub fn canonical(i: usize, j: usize) -> Option<(i64, Generator)> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Some((1, Generator { i, j })),
            std::cmp::Ordering::Greater => Some((-1, Generator { i: j, j: i })),
            std::cmp::Ordering::Equal => None,
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i + 1, self.j + 1)
    }
}

pub type Matrix = Vec<Vec<GR>>;

fn zero_matrix(n: usize) -> Matrix {
    vec![vec![GR::zero(); n]; n]
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut c = zero_matrix(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    c[i][j] += &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    c
}

pub fn mat_sub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

/// Basis, structure constants and defining matrices of one flavor.
pub struct LieAlgebra {
    sig: Signature,
    flavor: Flavor,
    basis: Vec<Generator>,
    index: HashMap<Generator, usize>,
    brackets: Vec<Vec<SparseVec>>,
}

impl LieAlgebra {
    /// Shared, lazily built instance for `(sig, flavor)`.
    pub fn get(sig: Signature, flavor: Flavor) -> Arc<LieAlgebra> {
        type Cache = Mutex<HashMap<(Signature, Flavor), Arc<LieAlgebra>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(a) = cache.lock().unwrap().get(&(sig, flavor)) {
            return a.clone();
        }
        let built = Arc::new(Self::build(sig, flavor));
        cache
            .lock()
            .unwrap()
            .entry((sig, flavor))
            .or_insert(built)
            .clone()
    }

    fn build(sig: Signature, flavor: Flavor) -> Self {
        let n = sig.n();
        let basis: Vec<Generator> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| Generator { i, j }))
            .collect();
        let index = basis.iter().enumerate().map(|(k, g)| (*g, k)).collect();
        let mut alg = Self {
            sig,
            flavor,
            basis,
            index,
            brackets: Vec::new(),
        };
        let mats: Vec<Matrix> = alg.basis.iter().map(|g| alg.generator_matrix(*g)).collect();
        let dim = alg.basis.len();
        let mut brackets = vec![vec![Vec::new(); dim]; dim];
        for a in 0..dim {
            for b in a + 1..dim {
                let c = mat_sub(&matmul(&mats[a], &mats[b]), &matmul(&mats[b], &mats[a]));
                let v = alg
                    .decompose_matrix(&c)
                    .expect("commutator of generators lies in the algebra");
                brackets[b][a] = v.iter().map(|(k, x)| (*k, -x)).collect();
                brackets[a][b] = v;
            }
        }
        alg.brackets = brackets;
        alg
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Generator] {
        &self.basis
    }

    pub fn index_of(&self, g: Generator) -> usize {
        self.index[&g]
    }

    /// `[e_a, e_b]` in basis coordinates.
    pub fn bracket_basis(&self, a: usize, b: usize) -> &SparseVec {
        &self.brackets[a][b]
    }

    /// Defining `n × n` matrix of a canonical generator.
    pub fn generator_matrix(&self, g: Generator) -> Matrix {
        let n = self.sig.n();
        let mut m = zero_matrix(n);
        match self.flavor {
            Flavor::G => {
                m[g.i][g.j] = GR::from_int(self.sig.eps(g.j));
                m[g.j][g.i] = GR::from_int(-self.sig.eps(g.i));
            }
            Flavor::On => {
                m[g.i][g.j] = GR::one();
                m[g.j][g.i] = GR::from_int(-1);
            }
        }
        m
    }

    /// Coordinates of a matrix in the generator basis, or `None` if it is not
    /// in the algebra.
    pub fn decompose_matrix(&self, m: &Matrix) -> Option<SparseVec> {
        let n = self.sig.n();
        let mut out = Vec::new();
        for (k, g) in self.basis.iter().enumerate() {
            let c = match self.flavor {
                Flavor::G => &m[g.i][g.j] * &GR::from_int(self.sig.eps(g.j)),
                Flavor::On => m[g.i][g.j].clone(),
            };
            if !c.is_zero() {
                out.push((k, c));
            }
        }
        let mut rebuilt = zero_matrix(n);
        for (k, c) in &out {
            let gm = self.generator_matrix(self.basis[*k]);
            for i in 0..n {
                for j in 0..n {
                    if !gm[i][j].is_zero() {
                        rebuilt[i][j] += &(&gm[i][j] * c);
                    }
                }
            }
        }
        (&rebuilt == m).then_some(out)
    }
}

/// Element of `g` or `o_n` in canonical generator coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct LieElement {
    sig: Signature,
    flavor: Flavor,
    coeffs: BTreeMap<Generator, GR>,
}

impl LieElement {
    pub fn zero(sig: Signature, flavor: Flavor) -> Self {
        Self {
            sig,
            flavor,
            coeffs: BTreeMap::new(),
        }
    }

    /// `X_{i,j}` (or `M_{i,j}`) for any ordered pair `i ≠ j`, 0-based.
    pub fn generator(sig: Signature, flavor: Flavor, i: usize, j: usize) -> Result<Self> {
        let n = sig.n();
        if i >= n || j >= n {
            return Err(Error::IndexViolation(format!("({i}, {j}) outside [0, {n})")));
        }
        let (sign, g) = Generator::canonical(i, j)
            .ok_or_else(|| Error::IndexViolation(format!("diagonal index pair ({i}, {i})")))?;
        let mut e = Self::zero(sig, flavor);
        e.add_term(g, GR::from_int(sign));
        Ok(e)
    }

    pub fn from_coords(sig: Signature, flavor: Flavor, v: &SparseVec) -> Self {
        let alg = LieAlgebra::get(sig, flavor);
        let mut e = Self::zero(sig, flavor);
        for (k, c) in v {
            e.add_term(alg.basis()[*k], c.clone());
        }
        e
    }

    pub fn coords(&self) -> SparseVec {
        let alg = LieAlgebra::get(self.sig, self.flavor);
        let mut v: SparseVec = self
            .coeffs
            .iter()
            .map(|(g, c)| (alg.index_of(*g), c.clone()))
            .collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn coeffs(&self) -> &BTreeMap<Generator, GR> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, g: Generator, c: GR) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(g).or_default();
        *e += &c;
        if e.is_zero() {
            self.coeffs.remove(&g);
        }
    }

    pub fn scale(&self, c: &GR) -> Self {
        let mut out = Self::zero(self.sig, self.flavor);
        for (g, a) in &self.coeffs {
            out.add_term(*g, a * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (g, c) in &other.coeffs {
            out.add_term(*g, c.clone());
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch);
        }
        Ok(())
    }

    /// Lie bracket via the cached structure constants.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let alg = LieAlgebra::get(self.sig, self.flavor);
        let mut out = Self::zero(self.sig, self.flavor);
        for (ga, ca) in &self.coeffs {
            for (gb, cb) in &other.coeffs {
                let c = ca * cb;
                for (k, s) in alg.bracket_basis(alg.index_of(*ga), alg.index_of(*gb)) {
                    out.add_term(alg.basis()[*k], &c * s);
                }
            }
        }
        Ok(out)
    }

    /// Image in the defining representation.
    pub fn matrix(&self) -> Matrix {
        let alg = LieAlgebra::get(self.sig, self.flavor);
        let n = self.sig.n();
        let mut m = zero_matrix(n);
        for (g, c) in &self.coeffs {
            let gm = alg.generator_matrix(*g);
            for i in 0..n {
                for j in 0..n {
                    if !gm[i][j].is_zero() {
                        m[i][j] += &(&gm[i][j] * c);
                    }
                }
            }
        }
        m
    }

    /// `B(X, Y) = tr(XY) / 2` in the defining representation.
    pub fn form_b(&self, other: &Self) -> Result<GR> {
        self.check_compatible(other)?;
        let prod = matmul(&self.matrix(), &other.matrix());
        let tr: GR = (0..self.sig.n()).map(|i| prod[i][i].clone()).sum();
        Ok(tr * q(1, 2))
    }

    /// `Φ : g → o_n`, `X ↦ I^{1/2} X I^{-1/2}`; on generators `M`, `−M` or `√−1·M`.
    pub fn phi(&self) -> Result<Self> {
        if self.flavor != Flavor::G {
            return Err(Error::FlavorMismatch);
        }
        let mut out = Self::zero(self.sig, Flavor::On);
        for (g, c) in &self.coeffs {
            out.add_term(*g, c * &phi_factor(self.sig, *g));
        }
        Ok(out)
    }

    pub fn phi_inv(&self) -> Result<Self> {
        if self.flavor != Flavor::On {
            return Err(Error::FlavorMismatch);
        }
        let mut out = Self::zero(self.sig, Flavor::G);
        for (g, c) in &self.coeffs {
            out.add_term(*g, c * &phi_factor(self.sig, *g).inv()?);
        }
        Ok(out)
    }
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.flavor {
            Flavor::G => "X",
            Flavor::On => "M",
        };
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(g, c)| format!("{c}*{name}{g:?}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Scalar with `Φ(X_{i,j}) = factor · M_{i,j}`.
pub fn phi_factor(sig: Signature, g: Generator) -> GR {
    match (g.i < sig.p, g.j < sig.p) {
        (true, true) => GR::one(),
        (false, false) => GR::from_int(-1),
        _ => GR::i(),
    }
}

/// `X_{i,j}^∨`: `−X_{i,j}` within a block, `X_{i,j}` across blocks.
pub fn dual_generator(sig: Signature, i: usize, j: usize) -> Result<LieElement> {
    let x = LieElement::generator(sig, Flavor::G, i, j)?;
    Ok(if sig.same_block(i, j) {
        x.scale(&GR::from_int(-1))
    } else {
        x
    })
}

/// `π(X_{i,j})` for a canonical generator.
pub fn pi_generator(g: Generator, sig: Signature) -> WeylOperator {
    let space = sig.space();
    let var = |k: usize| WeylOperator::var(space, k);
    let d = |k: usize| WeylOperator::partial(space, k);
    let (i, j) = (g.i, g.j);
    match (i < sig.p, j < sig.p) {
        // x_i ∂_{x_j} − x_j ∂_{x_i}
        (true, true) => &(&var(i) * &d(j)) - &(&var(j) * &d(i)),
        // −y_{i'} ∂_{y_{j'}} + y_{j'} ∂_{y_{i'}}
        (false, false) => &(&var(j) * &d(i)) - &(&var(i) * &d(j)),
        // −√−1 (x_i y_{j'} + ∂_{x_i} ∂_{y_{j'}})
        (true, false) => (&(&var(i) * &var(j)) + &(&d(i) * &d(j))).scale(&-GR::i()),
        (false, true) => unreachable!("canonical generators have i < j"),
    }
}

/// `π` on an element of `g`.
pub fn pi_lie(x: &LieElement) -> Result<WeylOperator> {
    if x.flavor() != Flavor::G {
        return Err(Error::FlavorMismatch);
    }
    let mut out = WeylOperator::zero(x.signature().space());
    for (g, c) in x.coeffs() {
        out = &out + &pi_generator(*g, x.signature()).scale(c);
    }
    Ok(out)
}

/// Element of `U(g)`: a combination of words in the canonical generators,
/// each word a sequence of basis indices.
#[derive(Clone, PartialEq, Eq)]
pub struct EnvelopingElement {
    sig: Signature,
    words: BTreeMap<Vec<u16>, GR>,
}

impl EnvelopingElement {
    pub fn zero(sig: Signature) -> Self {
        Self {
            sig,
            words: BTreeMap::new(),
        }
    }

    pub fn scalar(sig: Signature, c: GR) -> Self {
        let mut e = Self::zero(sig);
        e.add_word(Vec::new(), c);
        e
    }

    pub fn one(sig: Signature) -> Self {
        Self::scalar(sig, GR::one())
    }

    pub fn from_word(sig: Signature, word: Vec<u16>, c: GR) -> Self {
        let mut e = Self::zero(sig);
        e.add_word(word, c);
        e
    }

    /// Degree-one element from a `G`-flavor Lie element.
    pub fn from_lie(x: &LieElement) -> Result<Self> {
        if x.flavor() != Flavor::G {
            return Err(Error::FlavorMismatch);
        }
        let mut e = Self::zero(x.signature());
        for (k, c) in x.coords() {
            e.add_word(vec![k as u16], c);
        }
        Ok(e)
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn words(&self) -> &BTreeMap<Vec<u16>, GR> {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn add_word(&mut self, w: Vec<u16>, c: GR) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.words.entry(w) {
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

    pub fn scale(&self, c: &GR) -> Self {
        let mut out = Self::zero(self.sig);
        for (w, a) in &self.words {
            out.add_word(w.clone(), a * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        let mut out = self.clone();
        for (w, c) in &other.words {
            out.add_word(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&GR::from_int(-1)))
    }

    /// Product in `U(g)` (concatenation of words).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        let mut out = Self::zero(self.sig);
        for (wa, ca) in &self.words {
            for (wb, cb) in &other.words {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_word(w, ca * cb);
            }
        }
        Ok(out)
    }

    /// Elements whose words all have length `d`.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        let mut out = Self::zero(self.sig);
        for (w, c) in &self.words {
            if w.len() == d {
                out.add_word(w.clone(), c.clone());
            }
        }
        out
    }

    pub fn max_word_len(&self) -> usize {
        self.words.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_normal(&self) -> bool {
        self.words.keys().all(|w| w.windows(2).all(|p| p[0] <= p[1]))
    }
}

impl fmt::Debug for EnvelopingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alg = LieAlgebra::get(self.sig, Flavor::G);
        let parts: Vec<String> = self
            .words
            .iter()
            .map(|(w, c)| {
                let letters: Vec<String> = w
                    .iter()
                    .map(|&k| format!("X{:?}", alg.basis()[k as usize]))
                    .collect();
                if letters.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", letters.join("·"))
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `π(u)`: the multiplicative extension of [`pi_generator`] over words.
pub fn pi(u: &EnvelopingElement) -> WeylOperator {
    let sig = u.signature();
    let alg = LieAlgebra::get(sig, Flavor::G);
    let gens: Vec<WeylOperator> = alg.basis().iter().map(|g| pi_generator(*g, sig)).collect();
    let mut out = WeylOperator::zero(sig.space());
    for (w, c) in u.words() {
        let mut op = WeylOperator::identity(sig.space());
        for &k in w {
            op = &op * &gens[k as usize];
        }
        out = &out + &op.scale(c);
    }
    out
}

type WordSum = BTreeMap<Vec<u16>, GR>;

fn add_into(acc: &mut WordSum, src: &WordSum, c: &GR) {
    for (w, a) in src {
        let e = acc.entry(w.clone()).or_default();
        *e += &(a * c);
        if e.is_zero() {
            acc.remove(w);
        }
    }
}

/// Normal form of a single word, rewriting the leftmost descent first.
fn normal_form_word(alg: &LieAlgebra, w: &[u16], memo: &mut HashMap<Vec<u16>, WordSum>) -> WordSum {
    if let Some(r) = memo.get(w) {
        return r.clone();
    }
    let result = match w.windows(2).position(|p| p[0] > p[1]) {
        None => BTreeMap::from([(w.to_vec(), GR::one())]),
        Some(k) => rewrite_at(alg, w, k, &mut |alg, w| normal_form_word(alg, w, memo)),
    };
    memo.insert(w.to_vec(), result.clone());
    result
}

/// `u·a·b·v = u·b·a·v + u·[a,b]·v` at position `k`, normalizing each piece
/// with `recurse`.
fn rewrite_at(
    alg: &LieAlgebra,
    w: &[u16],
    k: usize,
    recurse: &mut dyn FnMut(&LieAlgebra, &[u16]) -> WordSum,
) -> WordSum {
    let (a, b) = (w[k], w[k + 1]);
    let mut out = WordSum::new();
    let mut swapped = w.to_vec();
    swapped.swap(k, k + 1);
    add_into(&mut out, &recurse(alg, &swapped), &GR::one());
    for (e, c) in alg.bracket_basis(a as usize, b as usize) {
        let mut shorter = w[..k].to_vec();
        shorter.push(*e as u16);
        shorter.extend_from_slice(&w[k + 2..]);
        add_into(&mut out, &recurse(alg, &shorter), c);
    }
    out
}

/// PBW normal form: every word rewritten into non-decreasing words in the
/// basis order `(i, j)` lexicographic, using `XY = YX + [X, Y]`.
pub fn pbw_normal_form(u: &EnvelopingElement) -> EnvelopingElement {
    let alg = LieAlgebra::get(u.signature(), Flavor::G);
    let mut memo = HashMap::new();
    let mut out = WordSum::new();
    for (w, c) in u.words() {
        add_into(&mut out, &normal_form_word(&alg, w, &mut memo), c);
    }
    EnvelopingElement {
        sig: u.signature(),
        words: out,
    }
}

/// PBW normal form where `choose` picks which descent of a word to rewrite
/// (it receives the word and its descent positions). Used to check that the
/// result does not depend on the rewriting schedule.
pub fn pbw_normal_form_with(
    u: &EnvelopingElement,
    choose: &mut dyn FnMut(&[u16], &[usize]) -> usize,
) -> EnvelopingElement {
    fn go(
        alg: &LieAlgebra,
        w: &[u16],
        choose: &mut dyn FnMut(&[u16], &[usize]) -> usize,
    ) -> WordSum {
        let descents: Vec<usize> = w
            .windows(2)
            .enumerate()
            .filter(|(_, p)| p[0] > p[1])
            .map(|(k, _)| k)
            .collect();
        if descents.is_empty() {
            return BTreeMap::from([(w.to_vec(), GR::one())]);
        }
        let k = descents[choose(w, &descents) % descents.len()];
        rewrite_at(alg, w, k, &mut |alg, w| go(alg, w, choose))
    }
    let alg = LieAlgebra::get(u.signature(), Flavor::G);
    let mut out = WordSum::new();
    for (w, c) in u.words() {
        add_into(&mut out, &go(&alg, w, choose), c);
    }
    EnvelopingElement {
        sig: u.signature(),
        words: out,
    }
}

/// Symmetrization `γ₂(Σ c_{ab} X_a ⊗ X_b) = Σ c_{ab} (X_a X_b + X_b X_a)/2`.
pub fn gamma2(t: &SymSquareTensor) -> Result<EnvelopingElement> {
    if t.flavor() != Flavor::G {
        return Err(Error::FlavorMismatch);
    }
    if !t.is_symmetric() {
        return Err(Error::NonSymmetric);
    }
    let sig = t.signature();
    let alg = LieAlgebra::get(sig, Flavor::G);
    let half = q(1, 2);
    let mut out = EnvelopingElement::zero(sig);
    for ((a, b), c) in t.coeffs() {
        let (ia, ib) = (alg.index_of(*a) as u16, alg.index_of(*b) as u16);
        let c = c * &half;
        out.add_word(vec![ia, ib], c.clone());
        out.add_word(vec![ib, ia], c);
    }
    Ok(out)
}

/// Degree-two symbol of a normal-form element, read back as a symmetric
/// tensor (`σ₂ ∘ p₂`).
pub fn symbol2(u: &EnvelopingElement) -> SymSquareTensor {
    let sig = u.signature();
    let alg = LieAlgebra::get(sig, Flavor::G);
    let nf = pbw_normal_form(u);
    let mut t = SymSquareTensor::zero(sig, Flavor::G);
    let half = q(1, 2);
    for (w, c) in nf.words() {
        if w.len() != 2 {
            continue;
        }
        let (a, b) = (alg.basis()[w[0] as usize], alg.basis()[w[1] as usize]);
        if a == b {
            t.add(a, b, c.clone());
        } else {
            t.add(a, b, c * &half);
            t.add(b, a, c * &half);
        }
    }
    t
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CasimirKind {
    G,
    Op,
    Oq,
}

/// Quadratic Casimir elements `Ω_g = Σ_{i<j} X_{i,j} X_{i,j}^∨` and
/// `Ω_{o_p}`, `Ω_{o_q} = Σ_{i<j} X_{i,j} X_{j,i}` over the respective block.
pub fn casimir(which: CasimirKind, sig: Signature) -> EnvelopingElement {
    let alg = LieAlgebra::get(sig, Flavor::G);
    let mut out = EnvelopingElement::zero(sig);
    for (k, g) in alg.basis().iter().enumerate() {
        let coeff = match which {
            CasimirKind::G => {
                if sig.same_block(g.i, g.j) {
                    -1
                } else {
                    1
                }
            }
            CasimirKind::Op if g.j < sig.p => -1,
            CasimirKind::Oq if g.i >= sig.p => -1,
            _ => continue,
        };
        out.add_word(vec![k as u16, k as u16], GR::from_int(coeff));
    }
    out
}

/// `(H, X⁺, X⁻)` with `H = −E_x − p/2 + E_y + q/2`, `X⁺ = −(Δ_x + r_y²)/2`,
/// `X⁻ = (r_x² + Δ_y)/2`.
pub fn sl2_triple(sig: Signature) -> (WeylOperator, WeylOperator, WeylOperator) {
    let s = sig.space();
    let ex = WeylOperator::euler(s, Block::X);
    let ey = WeylOperator::euler(s, Block::Y);
    let shift = WeylOperator::scalar(s, q(sig.q as i64 - sig.p as i64, 2));
    let h = &(&ey - &ex) + &shift;
    let xp = (&WeylOperator::laplacian(s, Block::X) + &WeylOperator::r_squared(s, Block::Y)).scale(&q(-1, 2));
    let xm = (&WeylOperator::r_squared(s, Block::X) + &WeylOperator::laplacian(s, Block::Y)).scale(&q(1, 2));
    (h, xp, xm)
}

/// `Ω̂_{g'} = H² + 2(X⁺X⁻ + X⁻X⁺)`.
pub fn sl2_casimir_operator(sig: Signature) -> WeylOperator {
    let (h, xp, xm) = sl2_triple(sig);
    let sym = &(&xp * &xm) + &(&xm * &xp);
    &(&h * &h) + &sym.scale(&GR::from_int(2))
}

/// Closed-form operators for the three Casimir images.
pub fn casimir_operator_closed_form(which: CasimirKind, sig: Signature) -> WeylOperator {
    let s = sig.space();
    let (p, qq) = (sig.p as i64, sig.q as i64);
    let ex = WeylOperator::euler(s, Block::X);
    let ey = WeylOperator::euler(s, Block::Y);
    let lx = WeylOperator::laplacian(s, Block::X);
    let ly = WeylOperator::laplacian(s, Block::Y);
    let rx = WeylOperator::r_squared(s, Block::X);
    let ry = WeylOperator::r_squared(s, Block::Y);
    let c = |n: i64| GR::from_int(n);
    match which {
        CasimirKind::Op => &(&(&ex * &ex) + &ex.scale(&c(p - 2))) - &(&rx * &lx),
        CasimirKind::Oq => &(&(&ey * &ey) + &ey.scale(&c(qq - 2))) - &(&ry * &ly),
        CasimirKind::G => {
            let diff = &ex - &ey;
            let sum = &ex + &ey;
            let quartic = &(&(&(&rx * &ry) + &(&rx * &lx)) + &(&ry * &ly)) + &(&lx * &ly);
            let mut out = &diff * &diff;
            out = &out + &diff.scale(&c(p - qq));
            out = &out - &sum.scale(&c(2));
            out = &out - &quartic;
            &out - &WeylOperator::scalar(s, c(p * qq))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(sig: Signature, i: usize, j: usize) -> LieElement {
        LieElement::generator(sig, Flavor::G, i, j).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let sig = Signature::new(4, 2);
        assert_eq!(x(sig, 0, 1).bracket(&x(sig, 1, 2)).unwrap(), x(sig, 0, 2));
        assert!(x(sig, 0, 1).bracket(&x(sig, 2, 3)).unwrap().is_zero());
        let a = x(sig, 0, 4).add(&x(sig, 2, 5).scale(&q(3, 2))).unwrap();
        assert!(a.bracket(&a).unwrap().is_zero());
    }

    #[test]
    fn bracket_matches_matrix_commutator() {
        let sig = Signature::new(2, 3);
        let alg = LieAlgebra::get(sig, Flavor::G);
        for a in alg.basis() {
            for b in alg.basis() {
                let xa = x(sig, a.i, a.j);
                let xb = x(sig, b.i, b.j);
                let lhs = xa.bracket(&xb).unwrap().matrix();
                let (ma, mb) = (xa.matrix(), xb.matrix());
                assert_eq!(lhs, mat_sub(&matmul(&ma, &mb), &matmul(&mb, &ma)));
            }
        }
    }

    #[test]
    fn antisymmetric_construction() {
        let sig = Signature::new(2, 2);
        assert_eq!(x(sig, 2, 0), x(sig, 0, 2).scale(&GR::from_int(-1)));
        assert!(LieElement::generator(sig, Flavor::G, 1, 1).is_err());
    }

    #[test]
    fn phi_examples() {
        let sig = Signature::new(3, 3);
        let m = |i, j| LieElement::generator(sig, Flavor::On, i, j).unwrap();
        assert_eq!(x(sig, 0, 1).phi().unwrap(), m(0, 1));
        assert_eq!(x(sig, 3, 4).phi().unwrap(), m(3, 4).scale(&GR::from_int(-1)));
        assert_eq!(x(sig, 0, 3).phi().unwrap(), m(0, 3).scale(&GR::i()));
        let mixed = x(sig, 0, 3).add(&x(sig, 4, 5)).unwrap();
        assert_eq!(mixed.phi().unwrap().phi_inv().unwrap(), mixed);
    }

    #[test]
    fn phi_is_matrix_conjugation() {
        let sig = Signature::new(2, 3);
        let n = sig.n();
        let half: Vec<GR> = (0..n).map(|i| if i < sig.p { GR::one() } else { GR::i() }).collect();
        let alg = LieAlgebra::get(sig, Flavor::G);
        for g in alg.basis() {
            let xm = x(sig, g.i, g.j).matrix();
            let conj: Matrix = (0..n)
                .map(|i| (0..n).map(|j| &(&half[i] * &xm[i][j]) * &half[j].inv().unwrap()).collect())
                .collect();
            assert_eq!(x(sig, g.i, g.j).phi().unwrap().matrix(), conj);
        }
    }

    #[test]
    fn form_b_examples() {
        let sig = Signature::new(3, 2);
        let d = dual_generator(sig, 0, 1).unwrap();
        assert_eq!(x(sig, 0, 1).form_b(&d).unwrap(), GR::one());
        assert!(x(sig, 0, 1).form_b(&dual_generator(sig, 2, 3).unwrap()).unwrap().is_zero());
        assert_eq!(x(sig, 0, 3).form_b(&x(sig, 0, 3)).unwrap(), GR::one());
    }

    #[test]
    fn pi_generator_cases() {
        let sig = Signature::new(2, 2);
        let s = sig.space();
        let v = |k| WeylOperator::var(s, k);
        let d = |k| WeylOperator::partial(s, k);
        assert_eq!(
            pi_generator(Generator { i: 0, j: 1 }, sig),
            &(&v(0) * &d(1)) - &(&v(1) * &d(0))
        );
        assert_eq!(
            pi_generator(Generator { i: 2, j: 3 }, sig),
            &(&v(3) * &d(2)) - &(&v(2) * &d(3))
        );
        assert_eq!(
            pi_generator(Generator { i: 0, j: 2 }, sig),
            (&(&v(0) * &v(2)) + &(&d(0) * &d(2))).scale(&-GR::i())
        );
    }

    #[test]
    fn pi_of_words() {
        let sig = Signature::new(2, 2);
        assert_eq!(pi(&EnvelopingElement::one(sig)), WeylOperator::identity(sig.space()));
        let g = pi_generator(Generator { i: 0, j: 1 }, sig);
        assert_eq!(pi(&EnvelopingElement::from_word(sig, vec![0, 0], GR::one())), &g * &g);
    }

    #[test]
    fn pbw_single_rewrite() {
        let sig = Signature::new(3, 1);
        let alg = LieAlgebra::get(sig, Flavor::G);
        let a = alg.index_of(Generator { i: 1, j: 2 }) as u16;
        let b = alg.index_of(Generator { i: 0, j: 1 }) as u16;
        let u = EnvelopingElement::from_word(sig, vec![a, b], GR::one());
        let nf = pbw_normal_form(&u);
        // X_{2,3}X_{1,2} = X_{1,2}X_{2,3} + [X_{2,3}, X_{1,2}] = X_{1,2}X_{2,3} − X_{1,3}.
        let mut expected = EnvelopingElement::from_word(sig, vec![b, a], GR::one());
        let c = alg.index_of(Generator { i: 0, j: 2 }) as u16;
        expected.add_word(vec![c], GR::from_int(-1));
        assert_eq!(nf, expected);
        assert_eq!(pbw_normal_form(&nf), nf);
    }

    #[test]
    fn sl2_relations() {
        let sig = Signature::new(3, 3);
        let (h, xp, xm) = sl2_triple(sig);
        assert_eq!(h.commutator(&xp).unwrap(), xp.scale(&GR::from_int(2)));
        assert_eq!(h.commutator(&xm).unwrap(), xm.scale(&GR::from_int(-2)));
        assert_eq!(xp.commutator(&xm).unwrap(), h);
    }

    #[test]
    fn casimir_images_match_closed_forms() {
        let sig = Signature::new(2, 4);
        for which in [CasimirKind::G, CasimirKind::Op, CasimirKind::Oq] {
            assert_eq!(
                pi(&casimir(which, sig)),
                casimir_operator_closed_form(which, sig),
                "{which:?}"
            );
        }
    }
}
