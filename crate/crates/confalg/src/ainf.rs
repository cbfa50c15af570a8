//! A∞- and A∞[1]-conformal algebras, the graded Lie algebra of conformal
//! cochains, Maurer–Cartan elements, cohomology and representations.

use crate::assocconf::{hochschild_delta, AssocConfAlgebra, AssocError, Cochain, ConformalBimodule};
use crate::confmap::{
    build_from_trees, diamond, expect_zero, ConfMap, Failure, MapError, Report, Tree,
};
use crate::confmod::{Generator, GradedModule, ModElement};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AInfError {
    #[error("map of arity {arity} has degree {found}, expected {expected}")]
    Degree { arity: usize, found: i32, expected: i32 },
    #[error("map stored under arity {key} has arity {found}")]
    Arity { key: usize, found: usize },
    #[error("module mismatch: {0}")]
    ModuleMismatch(String),
    #[error("{0}")]
    Axiom(Failure),
    #[error("cochain is not in the coefficient subspace: {0}")]
    NotInSubspace(String),
    #[error(transparent)]
    Assoc(#[from] AssocError),
    #[error(transparent)]
    Map(#[from] MapError),
}

fn parity(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn validate(module: &Arc<GradedModule>, maps: &BTreeMap<usize, ConfMap>, degree: impl Fn(usize) -> i32) -> Result<(), AInfError> {
    for (&k, f) in maps {
        if f.arity != k {
            return Err(AInfError::Arity { key: k, found: f.arity });
        }
        if f.source != *module || f.target != *module {
            return Err(AInfError::ModuleMismatch(format!("map of arity {k} is not on the structure's module")));
        }
        if f.degree != degree(k) {
            return Err(AInfError::Degree { arity: k, found: f.degree, expected: degree(k) });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AInfStructure {
    pub module: Arc<GradedModule>,
    mults: BTreeMap<usize, ConfMap>,
}

impl AInfStructure {
    /// Zero maps are dropped; `μ_k` must have degree `k - 2`.
    pub fn new(module: Arc<GradedModule>, mults: BTreeMap<usize, ConfMap>) -> Result<Self, AInfError> {
        validate(&module, &mults, |k| k as i32 - 2)?;
        let mults = mults.into_iter().filter(|(_, f)| !f.is_zero()).collect();
        Ok(AInfStructure { module, mults })
    }

    pub fn mult(&self, k: usize) -> Option<&ConfMap> {
        self.mults.get(&k)
    }

    pub fn mults(&self) -> &BTreeMap<usize, ConfMap> {
        &self.mults
    }

    pub fn max_arity(&self) -> usize {
        self.mults.keys().copied().max().unwrap_or(0)
    }

    /// Largest `n` at which an identity can have a nonzero term.
    pub fn identity_bound(&self) -> usize {
        (2 * self.max_arity()).saturating_sub(1).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AInf1Structure {
    pub module: Arc<GradedModule>,
    mults: BTreeMap<usize, ConfMap>,
}

impl AInf1Structure {
    /// Zero maps are dropped; every `ρ_k` must have degree `-1`.
    pub fn new(module: Arc<GradedModule>, mults: BTreeMap<usize, ConfMap>) -> Result<Self, AInfError> {
        validate(&module, &mults, |_| -1)?;
        let mults = mults.into_iter().filter(|(_, f)| !f.is_zero()).collect();
        Ok(AInf1Structure { module, mults })
    }

    pub fn mult(&self, k: usize) -> Option<&ConfMap> {
        self.mults.get(&k)
    }

    pub fn mults(&self) -> &BTreeMap<usize, ConfMap> {
        &self.mults
    }

    /// `ρ = Σ ρ_k` as an element of `C^{-1}_cs`.
    pub fn as_cochain(&self) -> CsCochain {
        CsCochain { module: self.module.clone(), degree: -1, maps: self.mults.clone() }
    }

    pub fn max_arity(&self) -> usize {
        self.mults.keys().copied().max().unwrap_or(0)
    }
}

/// Trees `f_k(x_1, …, f_l(x_i, …), …)` for all `k + l = n + 1`, with a sign
/// per `(i, l, tuple)`.
fn composite_defect(
    module: &Arc<GradedModule>,
    maps: &BTreeMap<usize, ConfMap>,
    n: usize,
    degree: i32,
    sign: impl Fn(usize, usize, &[usize]) -> i64 + Clone + 'static,
    keep: &dyn Fn(&[usize]) -> bool,
) -> ConfMap {
    let mut trees = Vec::new();
    let mut signs: Vec<Box<dyn Fn(&[usize]) -> i64>> = Vec::new();
    for k in 1..=n {
        let l = n + 1 - k;
        let (Some(outer), Some(inner)) = (maps.get(&k), maps.get(&l)) else { continue };
        for i in 1..=k {
            let mut children: Vec<Tree> = (0..i - 1).map(Tree::Leaf).collect();
            children.push(Tree::corolla(inner, &(i - 1..i - 1 + l).collect::<Vec<_>>()));
            children.extend((i - 1 + l..n).map(Tree::Leaf));
            trees.push(Tree::node(outer, children));
            let s = sign.clone();
            signs.push(Box::new(move |t: &[usize]| s(i, l, t)));
        }
    }
    let terms: Vec<(Tree, &dyn Fn(&[usize]) -> i64)> =
        trees.into_iter().zip(&signs).map(|(t, s)| (t, s.as_ref())).collect();
    build_from_trees(module.clone(), module.clone(), n, degree, &terms, keep)
}

/// Left side of the `n`-th A∞ identity, with the printed signs
/// `(-1)^{i(l+1) + l(|a_1| + … + |a_{i-1}|)}`.
pub fn ainf_defect(s: &AInfStructure, n: usize, keep: &dyn Fn(&[usize]) -> bool) -> ConfMap {
    let m = s.module.clone();
    let sign = move |i: usize, l: usize, t: &[usize]| {
        parity((i * (l + 1)) as i64 + l as i64 * m.tuple_degree(&t[..i - 1]) as i64)
    };
    composite_defect(&s.module, &s.mults, n, n as i32 - 3, sign, keep)
}

/// Left side of the `n`-th A∞[1] identity, signs `(-1)^{|v_1| + … + |v_{i-1}|}`.
pub fn ainf1_defect(s: &AInf1Structure, n: usize) -> ConfMap {
    let m = s.module.clone();
    let sign = move |i: usize, _: usize, t: &[usize]| parity(m.tuple_degree(&t[..i - 1]) as i64);
    composite_defect(&s.module, &s.mults, n, -2, sign, &crate::confmap::all_tuples)
}

/// `Σ_{k+l=n+1} ρ_k ⋄ ρ_l`.
pub fn mc_defect(s: &AInf1Structure, n: usize) -> ConfMap {
    let mut acc = ConfMap::zero(s.module.clone(), s.module.clone(), n, -2);
    for k in 1..=n {
        let l = n + 1 - k;
        if let (Some(a), Some(b)) = (s.mults.get(&k), s.mults.get(&l)) {
            acc = acc.add(&diamond(a, b).expect("maps on one module"));
        }
    }
    acc
}

pub fn check_ainf(s: &AInfStructure, up_to_n: usize) -> Report {
    for n in 1..=up_to_n {
        expect_zero(&ainf_defect(s, n, &crate::confmap::all_tuples), format!("A∞ identity n={n}"))?;
    }
    Ok(())
}

pub fn check_ainf1(s: &AInf1Structure, up_to_n: usize) -> Report {
    for n in 1..=up_to_n {
        expect_zero(&ainf1_defect(s, n), format!("A∞[1] identity n={n}"))?;
    }
    Ok(())
}

pub fn is_maurer_cartan(s: &AInf1Structure, up_to_n: usize) -> bool {
    (1..=up_to_n).all(|n| mc_defect(s, n).is_zero())
}

/// `μ_2 = a_λ b`, all other maps zero.
pub fn from_assoc(a: &AssocConfAlgebra) -> AInfStructure {
    AInfStructure::new(a.module.clone(), BTreeMap::from([(2, a.mult.clone())])).expect("degree 0 product")
}

/// A differential graded associative conformal algebra as an A∞ structure.
/// Checks `d² = 0`, the graded Leibniz rule
/// `d(a_λ b) = (da)_λ b + (-1)^{|a|} a_λ(db)` and associativity.
pub fn dga_to_ainf(module: Arc<GradedModule>, d: &ConfMap, mult: &ConfMap) -> Result<AInfStructure, AInfError> {
    let s = AInfStructure::new(module, BTreeMap::from([(1, d.clone()), (2, mult.clone())]))?;
    let all = crate::confmap::all_tuples;
    let labels = [(1, "d² = 0"), (2, "graded Leibniz rule"), (3, "a_λ(b_μ c) = (a_λ b)_{λ+μ} c")];
    for (n, label) in labels {
        expect_zero(&ainf_defect(&s, n, &all), label).map_err(AInfError::Axiom)?;
    }
    Ok(s)
}

/// `A ⊕ I[1]` for a subset of generators spanning a two-sided ideal `I`:
/// `μ_1` includes the copy of `I` into `A`, and `μ_2` is the product with
/// `I[1] ⋅ I[1] = 0`.
pub fn ideal_extension(a: &AssocConfAlgebra, ideal: &[usize]) -> Result<AInfStructure, AInfError> {
    let ra = a.module.rank();
    let mut gens: Vec<Generator> = a.module.generators().to_vec();
    let sub = GradedModule::new(ideal.iter().map(|&g| Generator { name: a.module.name(g).into(), degree: 1 }).collect())
        .map_err(AssocError::from)?;
    for g in a.module.direct_sum(&sub).generators().iter().skip(ra) {
        gens.push(g.clone());
    }
    let e = Arc::new(GradedModule::new(gens).map_err(AssocError::from)?);
    let copy: BTreeMap<usize, usize> = ideal.iter().enumerate().map(|(j, &g)| (g, ra + j)).collect();
    let lift = |v: &ModElement| -> Result<ModElement, AInfError> {
        let mut out = ModElement::zero();
        for (g, p) in &v.coords {
            let Some(&h) = copy.get(g) else {
                return Err(AInfError::NotInSubspace(format!("product leaves the ideal via `{}`", a.module.name(*g))));
            };
            out.add_term(h, p);
        }
        Ok(out)
    };
    let mut d = ConfMap::zero(e.clone(), e.clone(), 1, -1);
    for (&g, &h) in &copy {
        d.set(vec![h], ModElement::generator(g))?;
    }
    let mut mult = a.mult.embed(e.clone(), &(0..ra).collect::<Vec<_>>(), e.clone(), &(0..ra).collect::<Vec<_>>());
    for (t, v) in a.mult.entries() {
        if let Some(&h) = copy.get(&t[1]) {
            mult.set(vec![t[0], h], lift(v)?)?;
        }
        if let Some(&h) = copy.get(&t[0]) {
            mult.set(vec![h, t[1]], lift(v)?)?;
        }
    }
    // the ideal must be closed even where the product vanishes on ideal inputs
    for &g in ideal {
        for x in 0..ra {
            lift(&a.mult.value(&[x, g]))?;
            lift(&a.mult.value(&[g, x]))?;
        }
    }
    dga_to_ainf(e, &d, &mult)
}

/// `A_0 ⊕ A_1` with two copies of `A` and `μ_1 = id : A_1 → A_0`.
pub fn doubled(a: &AssocConfAlgebra) -> AInfStructure {
    let all: Vec<usize> = (0..a.module.rank()).collect();
    ideal_extension(a, &all).expect("A is an ideal in itself")
}

/// `A ⊕ ker f` for a morphism `f : A → B` whose kernel is spanned by the
/// given generators of `A`.
pub fn kernel_extension(
    a: &AssocConfAlgebra,
    b: &AssocConfAlgebra,
    f: &ConfMap,
    kernel: &[usize],
) -> Result<AInfStructure, AInfError> {
    use crate::confmap::{multi_insert, Inner};
    if f.arity != 1 || f.source != a.module || f.target != b.module {
        return Err(AInfError::ModuleMismatch("f must be a ℚ[∂]-linear map A → B".into()));
    }
    let lhs = multi_insert(f, &[Inner::Map(&a.mult)])?;
    // b.mult ∘ (f ⊗ f) needs f's source to be b's module, so evaluate directly
    let rhs = ConfMap::build(a.module.clone(), b.module.clone(), 2, 0, |t| {
        let fx = f.value(&[t[0]]);
        let fy = f.value(&[t[1]]);
        crate::confmap::evaluate(&b.mult, &[fx, fy]).expect("binary map").value
    });
    expect_zero(&lhs.sub(&rhs), "f(a_λ b) = f(a)_λ f(b)").map_err(AInfError::Axiom)?;
    for &g in kernel {
        if !f.value(&[g]).is_zero() {
            return Err(AInfError::NotInSubspace(format!("f does not vanish on `{}`", a.module.name(g))));
        }
    }
    ideal_extension(a, kernel)
}

/// `A ⊕ M` with `M` in degree 1, `μ_2` the semidirect product and `μ_3 = δφ`
/// for a 2-cochain `φ ∈ C²(A, M)`.
pub fn phi_extension(b: &ConformalBimodule, phi: &ConfMap) -> Result<AInfStructure, AInfError> {
    let (ext, a_idx, m_idx) = b.extension();
    let e = Arc::new(
        GradedModule::new(
            ext.generators()
                .iter()
                .enumerate()
                .map(|(i, g)| Generator { name: g.name.clone(), degree: if m_idx.contains(&i) { 1 } else { 0 } })
                .collect(),
        )
        .map_err(AssocError::from)?,
    );
    let mu3 = match hochschild_delta(b, &Cochain::Map(phi.clone()))? {
        Cochain::Map(f) => f,
        Cochain::Zero(_) => unreachable!("δ of a 2-cochain is a 3-cochain"),
    };
    let mu2 = b.semidirect_product().with_modules(e.clone(), e.clone(), 0);
    let mu3 = mu3.embed(e.clone(), a_idx, e.clone(), m_idx).with_modules(e.clone(), e.clone(), 1);
    AInfStructure::new(e, BTreeMap::from([(2, mu2), (3, mu3)]))
}

/// Conjugation `f ↦ (-1)^{k(k-1)/2} s ∘ f ∘ (s⁻¹)^{⊗k}` onto shifted modules,
/// with the Koszul sign of `(s⁻¹)^{⊗k}` taken from shifted input degrees.
pub fn shift_map(f: &ConfMap, source: Arc<GradedModule>, target: Arc<GradedModule>) -> ConfMap {
    let k = f.arity;
    let src = source.clone();
    let out = f.with_modules(source, target, f.degree + 1 - k as i32);
    out.map_entries(|t, v| {
        let sign = parity(shift_exponent(&src, t, k));
        if sign == 1 {
            v.clone()
        } else {
            v.neg()
        }
    })
}

fn shift_exponent(shifted: &GradedModule, t: &[usize], k: usize) -> i64 {
    let koszul: i64 = t.iter().enumerate().map(|(i, &g)| (k - 1 - i) as i64 * shifted.degree(g) as i64).sum();
    (k * (k - 1) / 2) as i64 + koszul
}

/// Inverse of [`shift_map`].
pub fn unshift_map(f: &ConfMap, source: Arc<GradedModule>, target: Arc<GradedModule>) -> ConfMap {
    let k = f.arity;
    let shifted = f.source.clone();
    let out = f.with_modules(source, target, f.degree - 1 + k as i32);
    out.map_entries(|t, v| {
        if parity(shift_exponent(&shifted, t, k)) == 1 {
            v.clone()
        } else {
            v.neg()
        }
    })
}

pub fn shift(s: &AInfStructure) -> AInf1Structure {
    let v = Arc::new(s.module.degree_shift(1));
    let mults = s.mults.iter().map(|(&k, f)| (k, shift_map(f, v.clone(), v.clone()))).collect();
    AInf1Structure::new(v, mults).expect("shifted maps have degree -1")
}

pub fn unshift(s: &AInf1Structure) -> AInfStructure {
    let a = Arc::new(s.module.degree_shift(-1));
    let mults = s.mults.iter().map(|(&k, f)| (k, unshift_map(f, a.clone(), a.clone()))).collect();
    AInfStructure::new(a, mults).expect("unshifted maps have degree k - 2")
}

/// A homogeneous element `Σ_k φ_k` of `C^•_cs(V)`; its degree is the common
/// map degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsCochain {
    pub module: Arc<GradedModule>,
    pub degree: i32,
    maps: BTreeMap<usize, ConfMap>,
}

impl CsCochain {
    pub fn zero(module: Arc<GradedModule>, degree: i32) -> Self {
        CsCochain { module, degree, maps: BTreeMap::new() }
    }

    pub fn new(module: Arc<GradedModule>, degree: i32, maps: Vec<ConfMap>) -> Result<Self, AInfError> {
        let mut out = Self::zero(module, degree);
        for f in maps {
            if f.source != out.module || f.target != out.module {
                return Err(AInfError::ModuleMismatch("cochain component on another module".into()));
            }
            if f.degree != degree {
                return Err(AInfError::Degree { arity: f.arity, found: f.degree, expected: degree });
            }
            out.add_component(f);
        }
        Ok(out)
    }

    pub fn single(f: ConfMap) -> Self {
        let mut out = Self::zero(f.source.clone(), f.degree);
        out.add_component(f);
        out
    }

    fn add_component(&mut self, f: ConfMap) {
        let k = f.arity;
        let sum = match self.maps.remove(&k) {
            Some(g) => g.add(&f),
            None => f,
        };
        if !sum.is_zero() {
            self.maps.insert(k, sum);
        }
    }

    pub fn component(&self, k: usize) -> Option<&ConfMap> {
        self.maps.get(&k)
    }

    pub fn components(&self) -> impl Iterator<Item = &ConfMap> {
        self.maps.values()
    }

    pub fn is_zero(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn add(&self, other: &CsCochain) -> CsCochain {
        assert_eq!(self.degree, other.degree, "cochains of different degree");
        let mut out = self.clone();
        for f in other.maps.values() {
            out.add_component(f.clone());
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> CsCochain {
        let mut out = Self::zero(self.module.clone(), self.degree);
        for f in self.maps.values() {
            out.add_component(f.scale_int(n));
        }
        out
    }

    pub fn neg(&self) -> CsCochain {
        self.scale_int(-1)
    }

    pub fn sub(&self, other: &CsCochain) -> CsCochain {
        self.add(&other.neg())
    }
}

/// `⟦φ, ψ⟧ = Σ (φ_k ⋄ ψ_l - (-1)^{mn} ψ_l ⋄ φ_k)`.
pub fn gla_bracket(phi: &CsCochain, psi: &CsCochain) -> Result<CsCochain, AInfError> {
    if phi.module != psi.module {
        return Err(AInfError::ModuleMismatch("bracket of cochains on different modules".into()));
    }
    let sign = parity(phi.degree as i64 * psi.degree as i64);
    let mut out = CsCochain::zero(phi.module.clone(), phi.degree + psi.degree);
    for f in phi.maps.values() {
        for g in psi.maps.values() {
            out.add_component(diamond(f, g)?);
            out.add_component(diamond(g, f)?.scale_int(-sign));
        }
    }
    Ok(out)
}

/// `δ_ρ φ = (-1)^{n-1} ⟦ρ, φ⟧` for `φ ∈ C^n(A, A) = C^{-(n-1)}_cs(A[-1])`.
pub fn cohomology_delta(s: &AInf1Structure, phi: &CsCochain) -> Result<CsCochain, AInfError> {
    let n = 1 - phi.degree;
    Ok(gla_bracket(&s.as_cochain(), phi)?.scale_int(parity((n - 1) as i64)))
}

/// Relative sign between `δ_ρ` on a shifted arity-`l` cochain and the
/// Hochschild differential of the same cochain, shifted. Found by direct
/// comparison for `l ≤ 4`; every entry is `+1` with the conventions here.
pub const HOCHSCHILD_SIGNS: [i64; 4] = [1, 1, 1, 1];

/// A representation `{η_k}`. Each `η_k` is stored as `k` maps on `A ⊕ M`,
/// the `i`-th supported on tuples whose only `M` entry is at position `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AInfRepresentation {
    pub base: AInfStructure,
    pub module: Arc<GradedModule>,
    ext: Arc<GradedModule>,
    m_idx: Vec<usize>,
    actions: BTreeMap<usize, Vec<ConfMap>>,
}

impl AInfRepresentation {
    /// `A ⊕ M` as used by [`AInfRepresentation::new`], with `M`'s positions.
    pub fn extension_of(base: &AInfStructure, module: &GradedModule) -> (Arc<GradedModule>, Vec<usize>) {
        let ext = Arc::new(base.module.direct_sum(module));
        let ra = base.module.rank();
        (ext, (ra..ra + module.rank()).collect())
    }

    pub fn new(
        base: AInfStructure,
        module: Arc<GradedModule>,
        actions: BTreeMap<usize, Vec<ConfMap>>,
    ) -> Result<Self, AInfError> {
        let (ext, m_idx) = Self::extension_of(&base, &module);
        let ra = base.module.rank();
        for (&k, family) in &actions {
            if family.len() != k {
                return Err(AInfError::Arity { key: k, found: family.len() });
            }
            for (pos, f) in family.iter().enumerate() {
                if f.source != ext || f.target != ext || f.arity != k {
                    return Err(AInfError::ModuleMismatch(format!("η_{k} is not a map on A ⊕ M")));
                }
                if f.degree != k as i32 - 2 {
                    return Err(AInfError::Degree { arity: k, found: f.degree, expected: k as i32 - 2 });
                }
                for (t, v) in f.entries() {
                    let ms: Vec<usize> = (0..k).filter(|&i| t[i] >= ra).collect();
                    if ms != [pos] || v.coords.keys().any(|&g| g < ra) {
                        return Err(AInfError::NotInSubspace(format!(
                            "η_{k} at M-position {} has value on ({}) outside A^{{k-1,1}} → M",
                            pos + 1,
                            f.tuple_names(t).join(", ")
                        )));
                    }
                }
            }
        }
        Ok(AInfRepresentation { base, module, ext, m_idx, actions })
    }

    pub fn zero(base: AInfStructure, module: Arc<GradedModule>) -> Self {
        Self::new(base, module, BTreeMap::new()).expect("no actions")
    }

    /// `η_k = μ_k` on a copy of `A`.
    pub fn adjoint(base: &AInfStructure) -> Self {
        let module = Arc::new((*base.module).clone());
        let (ext, m_idx) = Self::extension_of(base, &module);
        let mut actions = BTreeMap::new();
        for (&k, mu) in &base.mults {
            let family = (0..k)
                .map(|pos| {
                    let mut f = ConfMap::zero(ext.clone(), ext.clone(), k, mu.degree);
                    for (t, v) in mu.entries() {
                        let mut t2 = t.clone();
                        t2[pos] = m_idx[t[pos]];
                        let v2 = ModElement { coords: v.coords.iter().map(|(g, p)| (m_idx[*g], p.clone())).collect() };
                        f.set(t2, v2).expect("copy of a valid map");
                    }
                    f
                })
                .collect();
            actions.insert(k, family);
        }
        Self::new(base.clone(), module, actions).expect("adjoint actions are valid")
    }

    /// A conformal bimodule as a representation of `from_assoc(A)` with
    /// `η_2` given by the two actions.
    pub fn from_bimodule(b: &ConformalBimodule) -> Self {
        let base = from_assoc(&b.algebra);
        let (ext, _) = Self::extension_of(&base, &b.module);
        let (bext, _, _) = b.extension();
        assert_eq!(*ext, **bext, "same direct sum construction");
        let prod = b.semidirect_product().with_modules(ext.clone(), ext.clone(), 0);
        let ra = base.module.rank();
        let at = |pos: usize| prod.map_entries(|t, v| if t[pos] >= ra && t[1 - pos] < ra { v.clone() } else { ModElement::zero() });
        let actions = BTreeMap::from([(2, vec![at(0), at(1)])]);
        Self::new(base, b.module.clone(), actions).expect("bimodule actions are valid")
    }

    pub fn extension(&self) -> (&Arc<GradedModule>, &[usize]) {
        (&self.ext, &self.m_idx)
    }

    pub fn action(&self, k: usize, pos: usize) -> Option<&ConfMap> {
        self.actions.get(&k).map(|f| &f[pos])
    }

    fn theta(&self) -> AInfStructure {
        let ra = self.base.module.rank();
        let a_idx: Vec<usize> = (0..ra).collect();
        let mut mults: BTreeMap<usize, ConfMap> = BTreeMap::new();
        for (&k, mu) in &self.base.mults {
            mults.insert(k, mu.embed(self.ext.clone(), &a_idx, self.ext.clone(), &a_idx));
        }
        for (&k, family) in &self.actions {
            for f in family {
                let sum = match mults.remove(&k) {
                    Some(g) => g.add(f),
                    None => f.clone(),
                };
                mults.insert(k, sum);
            }
        }
        AInfStructure::new(self.ext.clone(), mults).expect("θ_k has degree k - 2")
    }

    fn identity_bound(&self) -> usize {
        let k = self.base.max_arity().max(self.actions.keys().copied().max().unwrap_or(0));
        (2 * k).saturating_sub(1).max(1)
    }
}

/// The identities with exactly one argument from `M`.
pub fn check_representation(r: &AInfRepresentation, up_to_n: usize) -> Report {
    let theta = r.theta();
    let ra = r.base.module.rank();
    let one_m = move |t: &[usize]| t.iter().filter(|&&g| g >= ra).count() == 1;
    for n in 1..=up_to_n {
        expect_zero(&ainf_defect(&theta, n, &one_m), format!("representation identity n={n}"))?;
    }
    Ok(())
}

/// `A ⋉ M` with `θ_k = μ_k + Σ_i η_k(…, m_i, …)`.
pub fn semidirect(r: &AInfRepresentation) -> Result<AInfStructure, AInfError> {
    check_representation(r, r.identity_bound()).map_err(AInfError::Axiom)?;
    Ok(r.theta())
}

/// `δ_Δ φ` for `φ ∈ C^n(A, M)` (a cochain on `(A ⊕ M)[-1]` supported on
/// `A`-inputs with `M`-outputs), checked to stay in that subspace.
pub fn restrict_to_coefficients(r: &AInfRepresentation, phi: &CsCochain) -> Result<CsCochain, AInfError> {
    let delta = shift(&r.theta());
    if phi.module != delta.module {
        return Err(AInfError::ModuleMismatch("cochain is not on (A ⊕ M)[-1]".into()));
    }
    let ra = r.base.module.rank();
    let in_subspace = |c: &CsCochain| -> Result<(), String> {
        for f in c.components() {
            for (t, v) in f.entries() {
                if t.iter().any(|&g| g >= ra) || v.coords.keys().any(|&g| g < ra) {
                    return Err(format!("value on ({})", f.tuple_names(t).join(", ")));
                }
            }
        }
        Ok(())
    };
    in_subspace(phi).map_err(AInfError::NotInSubspace)?;
    let out = cohomology_delta(&delta, phi)?;
    in_subspace(&out).map_err(|w| AInfError::NotInSubspace(format!("δ leaves C(A, M): {w}")))?;
    Ok(out)
}
