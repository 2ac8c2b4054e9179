//! Tensor squares of `g` and `o_n`: the invariant tensors `Q`, `S_{ijkl}`,
//! `S_{ij}`, `Ξ`, the adjoint action on `S²`, and the four-summand
//! decomposition of `S²(o_n)`.
//!
//! A [`SymSquareTensor`] is stored over ordered pairs of canonical generators,
//! so `X_{j,i} ⊗ X_{k,l}` is folded to `−X_{i,j} ⊗ X_{k,l}` on insertion.
//! Coordinates on `S²` use one slot per unordered pair `a ≤ b`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{q, GaussianRational};
use crate::error::{Error, Result};
use crate::gkmodule::{self, GarfinkleResult, ModuleParams};
use crate::liealg::{self, Flavor, Generator, LieAlgebra, LieElement, Signature};
use crate::linalg::{self, Echelon, SparseVec};
use crate::weyl::WeylOperator;

type GR = GaussianRational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymSquareTensor {
    sig: Signature,
    flavor: Flavor,
    coeffs: BTreeMap<(Generator, Generator), GR>,
}

impl SymSquareTensor {
    pub fn zero(sig: Signature, flavor: Flavor) -> Self {
        Self {
            sig,
            flavor,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn coeffs(&self) -> &BTreeMap<(Generator, Generator), GR> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&mut self, a: Generator, b: Generator, c: GR) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry((a, b)).or_default();
        *e += &c;
        if e.is_zero() {
            self.coeffs.remove(&(a, b));
        }
    }

    /// Adds `c · Z_{i,j} ⊗ Z_{k,l}` for arbitrary index pairs; diagonal pairs
    /// are the zero generator and contribute nothing.
    pub fn add_pairs(&mut self, (i, j): (usize, usize), (k, l): (usize, usize), c: &GR) {
        let (Some((s1, a)), Some((s2, b))) = (Generator::canonical(i, j), Generator::canonical(k, l)) else {
            return;
        };
        self.add(a, b, c * &GR::from_int(s1 * s2));
    }

    /// `x ⊗ y` for Lie elements of matching flavor.
    pub fn outer(x: &LieElement, y: &LieElement) -> Result<Self> {
        if x.signature() != y.signature() {
            return Err(Error::SignatureMismatch);
        }
        if x.flavor() != y.flavor() {
            return Err(Error::FlavorMismatch);
        }
        let mut t = Self::zero(x.signature(), x.flavor());
        for (a, ca) in x.coeffs() {
            for (b, cb) in y.coeffs() {
                t.add(*a, *b, ca * cb);
            }
        }
        Ok(t)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.sig, self.flavor);
        for ((a, b), c) in &self.coeffs {
            t.add(*b, *a, c.clone());
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.coeffs
            .iter()
            .all(|((a, b), c)| self.coeffs.get(&(*b, *a)) == Some(c))
    }

    pub fn scale(&self, c: &GR) -> Self {
        let mut t = Self::zero(self.sig, self.flavor);
        for ((a, b), x) in &self.coeffs {
            t.add(*a, *b, x * c);
        }
        t
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut t = self.clone();
        for ((a, b), c) in &other.coeffs {
            t.add(*a, *b, c.clone());
        }
        Ok(t)
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus(&other.scale(&GR::from_int(-1)))
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

    /// `Φ ⊗ Φ`.
    pub fn phi(&self) -> Result<Self> {
        if self.flavor != Flavor::G {
            return Err(Error::FlavorMismatch);
        }
        let mut t = Self::zero(self.sig, Flavor::On);
        for ((a, b), c) in &self.coeffs {
            let f = &liealg::phi_factor(self.sig, *a) * &liealg::phi_factor(self.sig, *b);
            t.add(*a, *b, c * &f);
        }
        Ok(t)
    }

    /// `Φ⁻¹ ⊗ Φ⁻¹`.
    pub fn phi_inv(&self) -> Result<Self> {
        if self.flavor != Flavor::On {
            return Err(Error::FlavorMismatch);
        }
        let mut t = Self::zero(self.sig, Flavor::G);
        for ((a, b), c) in &self.coeffs {
            let f = &liealg::phi_factor(self.sig, *a) * &liealg::phi_factor(self.sig, *b);
            t.add(*a, *b, c * &f.inv()?);
        }
        Ok(t)
    }

    /// Coordinates on `S²` (slot per unordered basis pair `a ≤ b`, holding
    /// `c_{ab}`). Errors on non-symmetric input.
    pub fn sym_coords(&self) -> Result<SparseVec> {
        if !self.is_symmetric() {
            return Err(Error::NonSymmetric);
        }
        let alg = LieAlgebra::get(self.sig, self.flavor);
        let dim = alg.dim();
        Ok(linalg::sparse_from_entries(self.coeffs.iter().filter_map(|((a, b), c)| {
            let (ia, ib) = (alg.index_of(*a), alg.index_of(*b));
            (ia <= ib).then(|| (sym_index(dim, ia, ib), c.clone()))
        })))
    }

    pub fn from_sym_coords(sig: Signature, flavor: Flavor, v: &SparseVec) -> Self {
        let alg = LieAlgebra::get(sig, flavor);
        let pairs = sym_pairs(alg.dim());
        let mut t = Self::zero(sig, flavor);
        for (k, c) in v {
            let (a, b) = pairs[*k];
            let (ga, gb) = (alg.basis()[a], alg.basis()[b]);
            t.add(ga, gb, c.clone());
            if a != b {
                t.add(gb, ga, c.clone());
            }
        }
        t
    }
}

/// Slot of the unordered pair `a ≤ b` among `dim(dim+1)/2` slots.
pub fn sym_index(dim: usize, a: usize, b: usize) -> usize {
    debug_assert!(a <= b && b < dim);
    a * dim - a * (a + 1) / 2 + b
}

fn sym_pairs(dim: usize) -> Vec<(usize, usize)> {
    (0..dim).flat_map(|a| (a..dim).map(move |b| (a, b))).collect()
}

/// `Q = Σ_{i≠j} X_{i,j} ⊗ X_{i,j}^∨` (`G`) or `Q̂ = Σ_{i,k} M_{i,k} ⊗ M_{k,i}` (`On`).
pub fn build_q(flavor: Flavor, sig: Signature) -> SymSquareTensor {
    let n = sig.n();
    let mut t = SymSquareTensor::zero(sig, flavor);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            match flavor {
                Flavor::G => {
                    let sign = if sig.same_block(i, j) { -1 } else { 1 };
                    t.add_pairs((i, j), (i, j), &GR::from_int(sign));
                }
                Flavor::On => t.add_pairs((i, j), (j, i), &GR::one()),
            }
        }
    }
    t
}

fn check_on_indices(sig: Signature, idx: &[usize]) -> Result<()> {
    let n = sig.n();
    if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
        return Err(Error::IndexViolation(format!("index {bad} outside [0, {n})")));
    }
    Ok(())
}

/// `Ŝ_{ijkl} = ½(M_{ij}⊗M_{kl} − M_{ik}⊗M_{jl} + M_{il}⊗M_{jk} + transposes)`
/// for `i < j < k < l` (0-based).
pub fn build_s4(sig: Signature, i: usize, j: usize, k: usize, l: usize) -> Result<SymSquareTensor> {
    check_on_indices(sig, &[i, j, k, l])?;
    if !(i < j && j < k && k < l) {
        return Err(Error::IndexViolation(format!(
            "need i < j < k < l, got ({i}, {j}, {k}, {l})"
        )));
    }
    let half = q(1, 2);
    let neg_half = q(-1, 2);
    let mut t = SymSquareTensor::zero(sig, Flavor::On);
    for (a, b, c) in [
        ((i, j), (k, l), &half),
        ((i, k), (j, l), &neg_half),
        ((i, l), (j, k), &half),
    ] {
        t.add_pairs(a, b, c);
        t.add_pairs(b, a, c);
    }
    Ok(t)
}

/// `Ŝ_{ij} = ½ Σ_k (M_{ik}⊗M_{kj} + M_{kj}⊗M_{ik}) − δ_{ij} Q̂ / n` (0-based).
pub fn build_s2(sig: Signature, i: usize, j: usize) -> Result<SymSquareTensor> {
    check_on_indices(sig, &[i, j])?;
    let n = sig.n();
    let half = q(1, 2);
    let mut t = SymSquareTensor::zero(sig, Flavor::On);
    for k in 0..n {
        t.add_pairs((i, k), (k, j), &half);
        t.add_pairs((k, j), (i, k), &half);
    }
    if i == j {
        t = t.minus(&build_q(Flavor::On, sig).scale(&q(1, n as i64)))?;
    }
    Ok(t)
}

/// `Ξ = Φ⁻¹(Ξ̂)` with `Ξ̂ = ½(Σ_{i∈[p]} Ŝ_{ii} − Σ_{i∈p+[q]} Ŝ_{ii})`.
pub fn build_xi(sig: Signature) -> Result<SymSquareTensor> {
    let mut hat = SymSquareTensor::zero(sig, Flavor::On);
    for i in 0..sig.n() {
        let sign = q(sig.eps(i), 2);
        hat = hat.plus(&build_s2(sig, i, i)?.scale(&sign))?;
    }
    hat.phi_inv()
}

/// `Σ_{i<k∈[p]} X_{i,k}⊗X_{k,i} − Σ_{i<k∈p+[q]} X_{i,k}⊗X_{k,i} − ((p−q)/2n) Q`.
pub fn build_xi_closed_form(sig: Signature) -> Result<SymSquareTensor> {
    let n = sig.n();
    let mut t = SymSquareTensor::zero(sig, Flavor::G);
    for i in 0..n {
        for k in i + 1..n {
            if !sig.same_block(i, k) {
                continue;
            }
            let sign = GR::from_int(sig.eps(i));
            t.add_pairs((i, k), (k, i), &sign);
        }
    }
    let c = q(sig.p as i64 - sig.q as i64, 2 * n as i64);
    t.minus(&build_q(Flavor::G, sig).scale(&c))
}

/// Derivation action `[X,·] ⊗ 1 + 1 ⊗ [X,·]`.
pub fn adjoint_action(x: &LieElement, t: &SymSquareTensor) -> Result<SymSquareTensor> {
    if x.signature() != t.signature() {
        return Err(Error::SignatureMismatch);
    }
    if x.flavor() != t.flavor() {
        return Err(Error::FlavorMismatch);
    }
    let alg = LieAlgebra::get(t.signature(), t.flavor());
    let mut out = SymSquareTensor::zero(t.signature(), t.flavor());
    for (g, cx) in x.coeffs() {
        let ix = alg.index_of(*g);
        for ((a, b), c) in t.coeffs() {
            let c = cx * c;
            for (k, s) in alg.bracket_basis(ix, alg.index_of(*a)) {
                out.add(alg.basis()[*k], *b, &c * s);
            }
            for (k, s) in alg.bracket_basis(ix, alg.index_of(*b)) {
                out.add(*a, alg.basis()[*k], &c * s);
            }
        }
    }
    Ok(out)
}

/// `π(γ₂(t))` for a symmetric `G`-flavor tensor.
pub fn pi_of_tensor(t: &SymSquareTensor) -> Result<WeylOperator> {
    Ok(liealg::pi(&liealg::gamma2(t)?))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SubspaceLabel {
    /// Trivial summand, spanned by `Q̂`.
    Empty,
    /// `(1,1,1,1)`, spanned by the `Ŝ_{ijkl}`.
    Wedge4,
    /// `(2)`, spanned by the `Ŝ_{ij}`.
    Sym2,
    /// `(2,2)`, the trace-pairing complement of the other three.
    TwoTwo,
}

impl SubspaceLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SubspaceLabel::Empty => "empty",
            SubspaceLabel::Wedge4 => "(1,1,1,1)",
            SubspaceLabel::Sym2 => "(2)",
            SubspaceLabel::TwoTwo => "(2,2)",
        }
    }
}

/// One summand of `S²(o_n)` with a basis in `S²` coordinates.
#[derive(Clone, Debug)]
pub struct InvariantSubspace {
    pub label: SubspaceLabel,
    pub n: usize,
    pub basis: Vec<SparseVec>,
    /// For the complement only: the free column carried by each basis vector.
    free_columns: Option<Vec<usize>>,
    echelon: Option<Echelon>,
}

impl InvariantSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn tensors(&self) -> Vec<SymSquareTensor> {
        let sig = Signature::new(self.n, 0);
        self.basis
            .iter()
            .map(|v| SymSquareTensor::from_sym_coords(sig, Flavor::On, v))
            .collect()
    }

    /// Exact membership of a vector in the span of the basis.
    pub fn contains(&self, v: &SparseVec) -> bool {
        if let Some(free) = &self.free_columns {
            // Nullspace basis: vector `k` is the only one touching `free[k]`,
            // so the coefficients are read off those columns.
            let mut residue = v.clone();
            for (k, &f) in free.iter().enumerate() {
                if let Ok(pos) = residue.binary_search_by_key(&f, |(c, _)| *c) {
                    let a = -&residue[pos].1;
                    residue = linalg::axpy(&residue, &a, &self.basis[k]);
                }
            }
            residue.is_empty()
        } else {
            self.echelon
                .as_ref()
                .expect("echelon built for spanning-set subspaces")
                .contains(v)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub dims: Vec<(SubspaceLabel, usize)>,
    pub expected_dims: Vec<usize>,
    pub total_dim: usize,
    pub direct_sum: bool,
    pub invariant: Vec<(SubspaceLabel, bool)>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        let dims: Vec<usize> = self.dims.iter().map(|(_, d)| *d).collect();
        dims == self.expected_dims
            && dims.iter().sum::<usize>() == self.total_dim
            && self.direct_sum
            && self.invariant.iter().all(|(_, ok)| *ok)
    }
}

fn spanning_subspace(label: SubspaceLabel, n: usize, vectors: Vec<SparseVec>) -> InvariantSubspace {
    let mut ech = Echelon::new();
    let mut basis = Vec::new();
    for v in vectors {
        if ech.insert(v.clone()) {
            basis.push(v);
        }
    }
    InvariantSubspace {
        label,
        n,
        basis,
        free_columns: None,
        echelon: Some(ech),
    }
}

/// The four summands `E_∅ ⊕ E_(1⁴) ⊕ E_(2) ⊕ E_(2,2)` of `S²(o_n)`.
pub fn decompose_s2(n: usize) -> Result<Vec<InvariantSubspace>> {
    if n < 4 {
        return Err(Error::IndexViolation(format!("decomposition needs n >= 4, got {n}")));
    }
    let sig = Signature::new(n, 0);
    let dim = LieAlgebra::get(sig, Flavor::On).dim();
    let total = dim * (dim + 1) / 2;

    let empty = spanning_subspace(SubspaceLabel::Empty, n, vec![build_q(Flavor::On, sig).sym_coords()?]);
    let mut wedge = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    wedge.push(build_s4(sig, i, j, k, l)?.sym_coords()?);
                }
            }
        }
    }
    let wedge = spanning_subspace(SubspaceLabel::Wedge4, n, wedge);
    let mut sym2 = Vec::new();
    for i in 0..n {
        for j in i..n {
            sym2.push(build_s2(sig, i, j)?.sym_coords()?);
        }
    }
    let sym2 = spanning_subspace(SubspaceLabel::Sym2, n, sym2);

    // Complement: vectors c with ⟨u, c⟩ = 0 for every u in the first three.
    let pairs = sym_pairs(dim);
    let weighted = |v: &SparseVec| -> SparseVec {
        v.iter()
            .map(|(k, c)| {
                let (a, b) = pairs[*k];
                let w = if a == b { 1 } else { 2 };
                (*k, c * &GR::from_int(w))
            })
            .collect()
    };
    let rows: Vec<SparseVec> = [&empty, &wedge, &sym2]
        .iter()
        .flat_map(|s| s.basis.iter().map(weighted))
        .collect();
    let (free_columns, complement) = linalg::nullspace_with_free_columns(&rows, total)
        .into_iter()
        .unzip();
    let two_two = InvariantSubspace {
        label: SubspaceLabel::TwoTwo,
        n,
        basis: complement,
        free_columns: Some(free_columns),
        echelon: None,
    };
    Ok(vec![empty, wedge, sym2, two_two])
}

/// Dimension audit, direct-sum certificate and invariance of every summand
/// under the adjoint action of every generator.
pub fn decomposition_report(n: usize) -> Result<DecompositionReport> {
    let subspaces = decompose_s2(n)?;
    let sig = Signature::new(n, 0);
    let alg = LieAlgebra::get(sig, Flavor::On);
    let dim = alg.dim();
    let total = dim * (dim + 1) / 2;
    let binom4 = crate::poly::binomial(n as i64, 4) as usize;
    let sym = n * (n + 1) / 2 - 1;
    let expected_dims = vec![1, binom4, sym, total - 1 - binom4 - sym];

    // The first three are independent iff their union has full rank; the
    // complement meets their sum trivially iff the pairing restricted to
    // that sum is nondegenerate.
    let u: Vec<&SparseVec> = subspaces[..3].iter().flat_map(|s| s.basis.iter()).collect();
    let union_rank = Echelon::from_rows(u.iter().copied()).rank();
    let pairs = sym_pairs(dim);
    let pair = |x: &SparseVec, y: &SparseVec| -> GR {
        let mut acc = GR::zero();
        let (mut i, mut j) = (0, 0);
        while i < x.len() && j < y.len() {
            match x[i].0.cmp(&y[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let (a, b) = pairs[x[i].0];
                    let w = GR::from_int(if a == b { 1 } else { 2 });
                    acc += &(&(&x[i].1 * &y[j].1) * &w);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    };
    let gram: Vec<SparseVec> = u
        .iter()
        .map(|x| linalg::dense_to_sparse(&u.iter().map(|y| pair(x, y)).collect::<Vec<_>>()))
        .collect();
    let gram_rank = Echelon::from_rows(gram.iter()).rank();
    let direct_sum = union_rank == u.len() && gram_rank == u.len() && subspaces[3].dim() + u.len() == total;

    let mut invariant = Vec::new();
    for s in &subspaces {
        let mut ok = true;
        'outer: for t in s.tensors() {
            for g in alg.basis() {
                let x = LieElement::generator(sig, Flavor::On, g.i, g.j)?;
                let image = adjoint_action(&x, &t)?;
                if !s.contains(&image.sym_coords()?) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        invariant.push((s.label, ok));
    }
    Ok(DecompositionReport {
        n,
        dims: subspaces.iter().map(|s| (s.label, s.dim())).collect(),
        expected_dims,
        total_dim: total,
        direct_sum,
        invariant,
    })
}

/// Checks that `e_α ⊗ e_α` lies in `E_(2,2)`, where `e_α ∈ o_n` is the
/// highest root vector `f₁f₂ᵀ − f₂f₁ᵀ` with `f₁ = e₁ + i e₂`, `f₂ = e₃ + i e₄`.
/// This fixes the positive system whose first two simple isotropic directions
/// are `f₁, f₂`.
pub fn highest_weight_check(n: usize) -> Result<bool> {
    let subspaces = decompose_s2(n)?;
    let sig = Signature::new(n, 0);
    let mut f1 = vec![GR::zero(); n];
    let mut f2 = vec![GR::zero(); n];
    f1[0] = GR::one();
    f1[1] = GR::i();
    f2[2] = GR::one();
    f2[3] = GR::i();
    let alg = LieAlgebra::get(sig, Flavor::On);
    let m: Vec<Vec<GR>> = (0..n)
        .map(|i| (0..n).map(|j| &(&f1[i] * &f2[j]) - &(&f2[i] * &f1[j])).collect())
        .collect();
    let coords = alg
        .decompose_matrix(&m)
        .ok_or_else(|| Error::IndexViolation("highest root vector not in o_n".into()))?;
    let e = LieElement::from_coords(sig, Flavor::On, &coords);
    let t = SymSquareTensor::outer(&e, &e)?;
    Ok(subspaces[3].contains(&t.sym_coords()?))
}

/// Outcome of the three inclusion steps for `W ⊂ σ(I) ∩ S²(g)`.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub params: ModuleParams,
    pub validity: i64,
    /// `Ω̂_g` acts by `m(m+2) − (p+q)²/4 + (p+q)` on every sampled element.
    pub casimir_scalar: bool,
    pub casimir_samples: usize,
    /// `π(Φ⁻¹(Ŝ_{ijkl})) = 0` for every `i<j<k<l`.
    pub s4_vanishing: bool,
    pub s4_count: usize,
    pub garfinkle: GarfinkleResult,
    pub joseph_consistent: bool,
    /// First step that failed, if any.
    pub failed_step: Option<String>,
}

/// Runs the three proof steps and combines them.
pub fn theorem_ingredients(params: &ModuleParams, validity: i64) -> Result<TheoremReport> {
    params.validate()?;
    let sig = params.signature();

    let samples = gkmodule::cached_samples(params, 2, 2, validity)?;
    let omega = gkmodule::casimir_image(liealg::CasimirKind::G, sig)?;
    let scalar = params.casimir_g_scalar();
    let mut casimir_scalar = true;
    for s in samples.iter() {
        let lhs = gkmodule::apply_operator(&omega, &s.element)?;
        if !lhs.equals_up_to_validity(&s.element.scale(&scalar)) {
            casimir_scalar = false;
        }
    }

    let n = sig.n();
    let mut s4_vanishing = true;
    let mut s4_count = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    s4_count += 1;
                    let t = build_s4(sig, i, j, k, l)?.phi_inv()?;
                    if !pi_of_tensor(&t)?.is_zero() {
                        s4_vanishing = false;
                    }
                }
            }
        }
    }

    let garfinkle = gkmodule::garfinkle_default(params, validity)?;
    let failed_step = if !casimir_scalar {
        Some("casimir".to_string())
    } else if !s4_vanishing {
        Some("s4".to_string())
    } else if !garfinkle.exists {
        Some("e2_obstruction".to_string())
    } else {
        None
    };
    Ok(TheoremReport {
        params: *params,
        validity,
        casimir_scalar,
        casimir_samples: samples.len(),
        s4_vanishing,
        s4_count,
        joseph_consistent: failed_step.is_none(),
        garfinkle,
        failed_step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{casimir, gamma2, pbw_normal_form, CasimirKind};

    #[test]
    fn q_lemma() {
        let sig = Signature::new(3, 2);
        let qg = build_q(Flavor::G, sig);
        assert!(qg.is_symmetric());
        assert_eq!(build_q(Flavor::On, sig).phi_inv().unwrap(), qg);
        let lhs = pbw_normal_form(&gamma2(&qg).unwrap());
        let rhs = pbw_normal_form(&casimir(CasimirKind::G, sig).scale(&GR::from_int(2)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn s4_properties() {
        let sig = Signature::new(2, 2);
        let t = build_s4(sig, 0, 1, 2, 3).unwrap();
        assert!(t.is_symmetric());
        assert!(pi_of_tensor(&t.phi_inv().unwrap()).unwrap().is_zero());
        assert!(build_s4(sig, 0, 2, 1, 3).is_err());
        assert!(build_s4(sig, 0, 1, 2, 4).is_err());
    }

    #[test]
    fn s2_properties() {
        let sig = Signature::new(4, 0);
        let mut sum = SymSquareTensor::zero(sig, Flavor::On);
        for i in 0..4 {
            let t = build_s2(sig, i, i).unwrap();
            assert!(t.is_symmetric());
            sum = sum.plus(&t).unwrap();
        }
        assert!(sum.is_zero());
        let s12 = build_s2(sig, 0, 1).unwrap();
        assert!(s12.is_symmetric());
        for (a, b) in s12.coeffs().keys() {
            let touches = |g: &Generator| g.i <= 1 || g.j <= 1;
            assert!(touches(a) && touches(b));
        }
    }

    #[test]
    fn xi_closed_form_and_lemma() {
        for (p, qq) in [(3, 3), (2, 4), (4, 2), (3, 1)] {
            let sig = Signature::new(p, qq);
            let xi = build_xi(sig).unwrap();
            assert_eq!(xi, build_xi_closed_form(sig).unwrap(), "({p},{qq})");
            let lhs = pbw_normal_form(&gamma2(&xi).unwrap());
            let c = q(p as i64 - qq as i64, (p + qq) as i64);
            let rhs = casimir(CasimirKind::Op, sig)
                .sub(&casimir(CasimirKind::Oq, sig))
                .unwrap()
                .sub(&casimir(CasimirKind::G, sig).scale(&c))
                .unwrap();
            assert_eq!(lhs, pbw_normal_form(&rhs));
        }
    }

    #[test]
    fn adjoint_kills_q() {
        let sig = Signature::new(2, 3);
        for flavor in [Flavor::G, Flavor::On] {
            let qt = build_q(flavor, sig);
            for g in LieAlgebra::get(sig, flavor).basis() {
                let x = LieElement::generator(sig, flavor, g.i, g.j).unwrap();
                assert!(adjoint_action(&x, &qt).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn adjoint_preserves_symmetry_and_wedge_span() {
        let sig = Signature::new(5, 0);
        let subspaces = decompose_s2(5).unwrap();
        let t = build_s4(sig, 0, 1, 2, 3).unwrap();
        for g in LieAlgebra::get(sig, Flavor::On).basis() {
            let x = LieElement::generator(sig, Flavor::On, g.i, g.j).unwrap();
            let img = adjoint_action(&x, &t).unwrap();
            assert!(img.is_symmetric());
            assert!(subspaces[1].contains(&img.sym_coords().unwrap()));
        }
    }

    #[test]
    fn decomposition_dims_small() {
        let r = decomposition_report(5).unwrap();
        assert_eq!(r.dims.iter().map(|(_, d)| *d).collect::<Vec<_>>(), vec![1, 5, 14, 35]);
        assert_eq!(r.total_dim, 55);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn membership_separates_summands() {
        let sig = Signature::new(5, 0);
        let subspaces = decompose_s2(5).unwrap();
        let s4 = build_s4(sig, 0, 1, 2, 3).unwrap().sym_coords().unwrap();
        let qh = build_q(Flavor::On, sig).sym_coords().unwrap();
        let s2 = build_s2(sig, 0, 1).unwrap().sym_coords().unwrap();
        assert!(!subspaces[3].contains(&s4));
        assert!(!subspaces[3].contains(&qh));
        assert!(!subspaces[3].contains(&s2));
        assert!(!subspaces[1].contains(&qh));
        assert!(subspaces[2].contains(&s2));
        for v in &subspaces[3].basis {
            assert!(subspaces[3].contains(v));
            assert!(!subspaces[0].contains(v) && !subspaces[2].contains(v));
        }
    }

    #[test]
    fn highest_root_square_lies_in_complement() {
        assert!(highest_weight_check(5).unwrap());
    }

    #[test]
    fn gamma2_rejects_non_symmetric() {
        let sig = Signature::new(2, 2);
        let mut t = SymSquareTensor::zero(sig, Flavor::G);
        t.add(Generator { i: 0, j: 1 }, Generator { i: 0, j: 2 }, GR::one());
        assert!(matches!(gamma2(&t), Err(Error::NonSymmetric)));
    }
}
