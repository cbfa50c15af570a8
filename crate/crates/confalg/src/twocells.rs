//! 2-term A∞-conformal algebras, skeletal structures and their cocycles,
//! associative conformal 2-algebras, and the functors `S` and `T` between
//! the two pictures.

use crate::ainf::{ainf_defect, AInfError, AInfStructure};
use crate::assocconf::{hochschild_delta, is_cocycle, AssocConfAlgebra, AssocError, Cochain, ConformalBimodule};
use crate::confmap::{
    build_from_trees, evaluate, expect_zero, multi_insert, ConfMap, Failure, Inner, MapError, Plan, Report, Tree,
};
use crate::confmod::{Generator, GradedModule, ModElement, ModuleError};
use crate::polyring::Poly;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwoCellError {
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("{0}")]
    Axiom(Failure),
    #[error("Θ is not a cocycle: {0}")]
    NotCocycle(Failure),
    #[error("not skeletal: {0}")]
    NotSkeletal(String),
    #[error("morphisms do not compose: {0}")]
    Endpoint(String),
    #[error("source map does not split along the identities: {0}")]
    NotSplit(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Assoc(#[from] AssocError),
    #[error(transparent)]
    AInf(#[from] AInfError),
}

fn leaf<'a>(i: usize) -> Tree<'a> {
    Tree::Leaf(i)
}

fn on<'a>(f: &'a ConfMap, child: Tree<'a>) -> Tree<'a> {
    Tree::node(f, vec![child])
}

/// `Σ sign · tree` as a map, on the tuples accepted by `keep`.
fn tree_sum(
    source: &Arc<GradedModule>,
    target: &Arc<GradedModule>,
    arity: usize,
    degree: i32,
    terms: Vec<(i64, Tree<'_>)>,
    keep: &dyn Fn(&[usize]) -> bool,
) -> ConfMap {
    let signs: Vec<Box<dyn Fn(&[usize]) -> i64>> = terms
        .iter()
        .map(|&(s, _)| Box::new(move |_: &[usize]| s) as Box<dyn Fn(&[usize]) -> i64>)
        .collect();
    let terms: Vec<(Tree, &dyn Fn(&[usize]) -> i64)> =
        terms.into_iter().zip(&signs).map(|((_, t), s)| (t, s.as_ref())).collect();
    build_from_trees(source.clone(), target.clone(), arity, degree, &terms, keep)
}

fn degree_pattern(m: &Arc<GradedModule>, pattern: &[i32]) -> impl Fn(&[usize]) -> bool {
    let m = m.clone();
    let pattern = pattern.to_vec();
    move |t: &[usize]| t.len() == pattern.len() && t.iter().zip(&pattern).all(|(&g, &d)| m.degree(g) == d)
}

fn apply1(f: &ConfMap, x: &ModElement) -> ModElement {
    evaluate(f, std::slice::from_ref(x)).expect("arity-1 map").value
}

fn compose(f: &ConfMap, g: &ConfMap) -> Result<ConfMap, MapError> {
    multi_insert(f, &[Inner::Map(g)])
}

/// `A_1 →β A_0` with `μ₂` and `μ₃`, stored on one module whose degree-0
/// generators come first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTermAInf {
    pub module: Arc<GradedModule>,
    pub beta: ConfMap,
    pub mu2: ConfMap,
    pub mu3: ConfMap,
}

/// One condition of a 2-term structure, named by what it says.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwoTermItem {
    MixedProduct,
    LeftAction,
    RightAction,
    Balanced,
    Associator,
    RightModule,
    MiddleModule,
    LeftModule,
    Cocycle,
}

impl TwoTermItem {
    pub const ALL: [TwoTermItem; 9] = [
        TwoTermItem::MixedProduct,
        TwoTermItem::LeftAction,
        TwoTermItem::RightAction,
        TwoTermItem::Balanced,
        TwoTermItem::Associator,
        TwoTermItem::RightModule,
        TwoTermItem::MiddleModule,
        TwoTermItem::LeftModule,
        TwoTermItem::Cocycle,
    ];

    /// Arity of the identity and the degrees of its inputs.
    fn pattern(self) -> &'static [i32] {
        match self {
            TwoTermItem::MixedProduct | TwoTermItem::Balanced => &[1, 1],
            TwoTermItem::LeftAction => &[0, 1],
            TwoTermItem::RightAction => &[1, 0],
            TwoTermItem::Associator => &[0, 0, 0],
            TwoTermItem::RightModule => &[0, 0, 1],
            TwoTermItem::MiddleModule => &[0, 1, 0],
            TwoTermItem::LeftModule => &[1, 0, 0],
            TwoTermItem::Cocycle => &[0, 0, 0, 0],
        }
    }
}

impl fmt::Display for TwoTermItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TwoTermItem::MixedProduct => "μ₂(m, n) = 0",
            TwoTermItem::LeftAction => "β μ₂(a, m) = μ₂(a, βm)",
            TwoTermItem::RightAction => "β μ₂(m, a) = μ₂(βm, a)",
            TwoTermItem::Balanced => "μ₂(βm, n) = μ₂(m, βn)",
            TwoTermItem::Associator => "β μ₃(a, b, c) = (ab)c − a(bc)",
            TwoTermItem::RightModule => "μ₃(a, b, βm) = (ab)m − a(bm)",
            TwoTermItem::MiddleModule => "μ₃(a, βm, c) = (am)c − a(mc)",
            TwoTermItem::LeftModule => "μ₃(βm, b, c) = (mb)c − m(bc)",
            TwoTermItem::Cocycle => "μ₃ is a cocycle for μ₂",
        };
        f.write_str(s)
    }
}

fn check_two_term_module(m: &GradedModule) -> Result<(), TwoCellError> {
    let mut seen_one = false;
    for g in m.generators() {
        match g.degree {
            0 if seen_one => {
                return Err(TwoCellError::Shape(format!("degree-0 generator `{}` follows a degree-1 one", g.name)))
            }
            0 => {}
            1 => seen_one = true,
            d => return Err(TwoCellError::Shape(format!("generator `{}` has degree {d}", g.name))),
        }
    }
    Ok(())
}

fn expect_shape(f: &ConfMap, name: &str, m: &Arc<GradedModule>, arity: usize, degree: i32) -> Result<(), TwoCellError> {
    if f.arity != arity || f.degree != degree || f.source != *m || f.target != *m {
        return Err(TwoCellError::Shape(format!("{name} must have arity {arity} and degree {degree} on the module")));
    }
    Ok(())
}

impl TwoTermAInf {
    pub fn new(beta: ConfMap, mu2: ConfMap, mu3: ConfMap) -> Result<Self, TwoCellError> {
        let module = beta.source.clone();
        check_two_term_module(&module)?;
        expect_shape(&beta, "β", &module, 1, -1)?;
        expect_shape(&mu2, "μ₂", &module, 2, 0)?;
        expect_shape(&mu3, "μ₃", &module, 3, 1)?;
        Ok(TwoTermAInf { module, beta, mu2, mu3 })
    }

    pub fn zero(module: Arc<GradedModule>) -> Result<Self, TwoCellError> {
        Self::new(
            ConfMap::zero(module.clone(), module.clone(), 1, -1),
            ConfMap::zero(module.clone(), module.clone(), 2, 0),
            ConfMap::zero(module.clone(), module, 3, 1),
        )
    }

    /// Reads `μ₁ = β`, `μ₂`, `μ₃` off an A∞ structure on a module in
    /// degrees 0 and 1.
    pub fn from_ainf(s: &AInfStructure) -> Result<Self, TwoCellError> {
        let m = s.module.clone();
        check_two_term_module(&m)?;
        if let Some(k) = s.mults().iter().find(|(k, f)| **k > 3 && !f.is_zero()).map(|(k, _)| *k) {
            return Err(TwoCellError::Shape(format!("map of arity {k} in a 2-term structure")));
        }
        let get = |k: usize, d: i32| s.mult(k).cloned().unwrap_or_else(|| ConfMap::zero(m.clone(), m.clone(), k, d));
        Self::new(get(1, -1), get(2, 0), get(3, 1))
    }

    pub fn as_ainf(&self) -> AInfStructure {
        let maps = [(1, &self.beta), (2, &self.mu2), (3, &self.mu3)]
            .into_iter()
            .filter(|(_, f)| !f.is_zero())
            .map(|(k, f)| (k, f.clone()))
            .collect();
        AInfStructure::new(self.module.clone(), maps).expect("2-term maps have A∞ degrees")
    }

    pub fn a0(&self) -> Vec<usize> {
        self.module.indices_of_degree(0)
    }

    pub fn a1(&self) -> Vec<usize> {
        self.module.indices_of_degree(1)
    }

    pub fn is_skeletal(&self) -> bool {
        self.beta.is_zero()
    }
}

/// Every condition with its outcome, read off the A∞ identities for
/// `n = 2, 3, 4` on the matching input degrees.
pub fn two_term_items(x: &TwoTermAInf) -> Vec<(TwoTermItem, Report)> {
    let s = x.as_ainf();
    TwoTermItem::ALL
        .iter()
        .map(|&item| {
            let keep = degree_pattern(&x.module, item.pattern());
            let defect = match item {
                TwoTermItem::MixedProduct => {
                    x.mu2.map_entries(|t, v| if keep(t) { v.clone() } else { ModElement::zero() })
                }
                _ => ainf_defect(&s, item.pattern().len(), &keep),
            };
            (item, expect_zero(&defect, item.to_string()))
        })
        .collect()
}

pub fn check_two_term(x: &TwoTermAInf) -> Report {
    two_term_items(x).into_iter().try_for_each(|(_, r)| r)
}

/// `(f₀, f₁, f₂)`; `f₀` and `f₁` are the degree-0 and degree-1 parts of one
/// degree-0 map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTermMorphism {
    pub source: TwoTermAInf,
    pub target: TwoTermAInf,
    pub f0: ConfMap,
    pub f1: ConfMap,
    pub f2: ConfMap,
}

fn supported_in_degree(f: &ConfMap, d: i32) -> bool {
    f.entries().all(|(t, _)| f.source.degree(t[0]) == d)
}

impl TwoTermMorphism {
    pub fn new(
        source: TwoTermAInf,
        target: TwoTermAInf,
        f0: ConfMap,
        f1: ConfMap,
        f2: ConfMap,
    ) -> Result<Self, TwoCellError> {
        for (f, name, arity, degree) in [(&f0, "f₀", 1, 0), (&f1, "f₁", 1, 0), (&f2, "f₂", 2, 1)] {
            if f.arity != arity || f.degree != degree || f.source != source.module || f.target != target.module {
                return Err(TwoCellError::Shape(format!("{name} must have arity {arity} and degree {degree}")));
            }
        }
        if !supported_in_degree(&f0, 0) || !supported_in_degree(&f1, 1) {
            return Err(TwoCellError::Shape("f₀ lives on A₀ and f₁ on A₁".into()));
        }
        Ok(TwoTermMorphism { source, target, f0, f1, f2 })
    }

    pub fn identity(x: &TwoTermAInf) -> Self {
        let id = ConfMap::identity(x.module.clone());
        let part = |d: i32| id.map_entries(|t, v| if x.module.degree(t[0]) == d { v.clone() } else { ModElement::zero() });
        TwoTermMorphism {
            source: x.clone(),
            target: x.clone(),
            f0: part(0),
            f1: part(1),
            f2: ConfMap::zero(x.module.clone(), x.module.clone(), 2, 1),
        }
    }

    /// `f₀ + f₁`.
    pub fn linear(&self) -> ConfMap {
        self.f0.add(&self.f1)
    }
}

/// The morphism identities with their outcomes. Besides the three
/// `μ₂`-identities and the `μ₃`-coherence this includes `β′ f₁ = f₀ β`.
pub fn morphism_items(f: &TwoTermMorphism) -> Vec<(&'static str, Report)> {
    let (x, y) = (&f.source, &f.target);
    let src = &x.module;
    let tgt = &y.module;
    let lin = f.linear();
    let keep = |p: &[i32]| degree_pattern(src, p);
    let chain = tree_sum(
        src,
        tgt,
        1,
        -1,
        vec![(1, on(&y.beta, on(&lin, leaf(0)))), (-1, on(&lin, on(&x.beta, leaf(0))))],
        &keep(&[1]),
    );
    let products = |lead: Tree<'_>, pattern: &[i32]| -> ConfMap {
        tree_sum(
            src,
            tgt,
            2,
            0,
            vec![
                (1, lead),
                (-1, on(&lin, Tree::corolla(&x.mu2, &[0, 1]))),
                (1, Tree::node(&y.mu2, vec![on(&lin, leaf(0)), on(&lin, leaf(1))])),
            ],
            &keep(pattern),
        )
    };
    let first = products(on(&y.beta, Tree::corolla(&f.f2, &[0, 1])), &[0, 0]);
    let second = products(Tree::node(&f.f2, vec![leaf(0), on(&x.beta, leaf(1))]), &[0, 1]);
    let third = products(Tree::node(&f.f2, vec![on(&x.beta, leaf(0)), leaf(1)]), &[1, 0]);
    let coherence = tree_sum(
        src,
        tgt,
        3,
        1,
        vec![
            (1, Tree::node(&f.f2, vec![leaf(0), Tree::corolla(&x.mu2, &[1, 2])])),
            (-1, Tree::node(&f.f2, vec![Tree::corolla(&x.mu2, &[0, 1]), leaf(2)])),
            (1, Tree::node(&y.mu2, vec![on(&lin, leaf(0)), Tree::corolla(&f.f2, &[1, 2])])),
            (-1, Tree::node(&y.mu2, vec![Tree::corolla(&f.f2, &[0, 1]), on(&lin, leaf(2))])),
            (-1, Tree::node(&y.mu3, vec![on(&lin, leaf(0)), on(&lin, leaf(1)), on(&lin, leaf(2))])),
            (1, on(&lin, Tree::corolla(&x.mu3, &[0, 1, 2]))),
        ],
        &keep(&[0, 0, 0]),
    );
    let labels = [
        ("β′ f₁ = f₀ β", chain),
        ("β′ f₂(a, b) = f₀(ab) − f₀(a)f₀(b)", first),
        ("f₂(a, βm) = f₁(am) − f₀(a)f₁(m)", second),
        ("f₂(βm, a) = f₁(ma) − f₁(m)f₀(a)", third),
        ("f₂ intertwines μ₃ and μ₃′", coherence),
    ];
    labels.into_iter().map(|(l, d)| (l, expect_zero(&d, l))).collect()
}

pub fn check_morphism(f: &TwoTermMorphism) -> Report {
    morphism_items(f).into_iter().try_for_each(|(_, r)| r)
}

/// `g ∘ f = (g₀f₀, g₁f₁, g₂(f₀ ⊗ f₀) + g₁f₂)`.
pub fn compose_morphisms(g: &TwoTermMorphism, f: &TwoTermMorphism) -> Result<TwoTermMorphism, TwoCellError> {
    if f.target != g.source {
        return Err(TwoCellError::Endpoint("target of f differs from source of g".into()));
    }
    let lin_f = f.linear();
    let lin_g = g.linear();
    let f2 = multi_insert(&g.f2, &[Inner::Map(&lin_f), Inner::Map(&lin_f)])?.add(&compose(&lin_g, &f.f2)?);
    TwoTermMorphism::new(f.source.clone(), g.target.clone(), compose(&g.f0, &f.f0)?, compose(&g.f1, &f.f1)?, f2)
}

/// An associative conformal algebra `A`, an `A`-bimodule `M`, and an
/// `(n+1)`-cochain `Θ` of `A` with values in `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletalData {
    pub bimodule: ConformalBimodule,
    pub n: usize,
    pub theta: ConfMap,
}

impl SkeletalData {
    pub fn new(bimodule: ConformalBimodule, n: usize, theta: ConfMap) -> Result<Self, TwoCellError> {
        if n < 2 {
            return Err(TwoCellError::Shape(format!("a skeletal structure has n ≥ 2 terms, got {n}")));
        }
        if theta.arity != n + 1 || theta.source != bimodule.algebra.module || theta.target != bimodule.module {
            return Err(TwoCellError::Shape(format!("Θ must be an {}-cochain of A with values in M", n + 1)));
        }
        Ok(SkeletalData { bimodule, n, theta })
    }

    /// Same tables, ignoring generator names.
    pub fn agrees_with(&self, other: &SkeletalData) -> bool {
        let same = |f: &ConfMap, g: &ConfMap| f.entries().eq(g.entries());
        self.n == other.n
            && same(&self.bimodule.algebra.mult, &other.bimodule.algebra.mult)
            && self.bimodule.left_table() == other.bimodule.left_table()
            && self.bimodule.right_table() == other.bimodule.right_table()
            && same(&self.theta, &other.theta)
    }
}

/// `M → 0 → ⋯ → A` with `M` in degree `n − 1`, `μ₂` the semidirect product
/// and `μ_{n+1} = Θ`. No cocycle check.
pub fn skeletal_structure(d: &SkeletalData) -> AInfStructure {
    let b = &d.bimodule;
    let (ext, a_idx, m_idx) = b.extension();
    let top = d.n as i32 - 1;
    let gens = ext
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| Generator { name: g.name.clone(), degree: if m_idx.contains(&i) { top } else { 0 } })
        .collect();
    let e = Arc::new(GradedModule::new(gens).expect("names of an extension are distinct"));
    let mu2 = b.semidirect_product().with_modules(e.clone(), e.clone(), 0);
    let theta = d.theta.embed(e.clone(), a_idx, e.clone(), m_idx).with_modules(e.clone(), e.clone(), top);
    let maps = [(2, mu2), (d.n + 1, theta)].into_iter().filter(|(_, f)| !f.is_zero()).collect();
    AInfStructure::new(e, maps).expect("skeletal maps have A∞ degrees")
}

pub fn skeletal_from_cocycle(d: &SkeletalData) -> Result<AInfStructure, TwoCellError> {
    let delta = hochschild_delta(&d.bimodule, &Cochain::Map(d.theta.clone()))?;
    if let Some(witness) = delta.as_map().and_then(|f| f.witness()) {
        return Err(TwoCellError::NotCocycle(Failure { check: "δΘ = 0".into(), witness }));
    }
    Ok(skeletal_structure(d))
}

struct SkeletalParts {
    data: SkeletalData,
    a_idx: Vec<usize>,
    m_idx: Vec<usize>,
}

fn skeletal_parts(s: &AInfStructure) -> Result<SkeletalParts, TwoCellError> {
    let m = &s.module;
    let degrees: BTreeSet<i32> = m.generators().iter().map(|g| g.degree).collect();
    let top = match degrees.iter().copied().collect::<Vec<_>>()[..] {
        [0, d] if d >= 1 => d,
        _ => return Err(TwoCellError::NotSkeletal(format!("generator degrees {degrees:?}, expected 0 and one d ≥ 1"))),
    };
    let n = top as usize + 1;
    if let Some(k) = s.mults().iter().find(|(k, f)| **k != 2 && **k != n + 1 && !f.is_zero()).map(|(k, _)| *k) {
        return Err(TwoCellError::NotSkeletal(format!("nonzero map of arity {k}")));
    }
    let a_idx = m.indices_of_degree(0);
    let m_idx = m.indices_of_degree(top);
    let sub = |idx: &[usize]| -> Result<Arc<GradedModule>, TwoCellError> {
        Ok(Arc::new(GradedModule::new(
            idx.iter().map(|&i| Generator { name: m.name(i).into(), degree: 0 }).collect(),
        )?))
    };
    let (am, mm) = (sub(&a_idx)?, sub(&m_idx)?);
    let zero2 = ConfMap::zero(m.clone(), m.clone(), 2, 0);
    let mu2 = s.mult(2).unwrap_or(&zero2);
    let algebra = AssocConfAlgebra::checked(mu2.restrict(am.clone(), &a_idx, am.clone(), &a_idx)?)?;
    let local_m: HashMap<usize, usize> = m_idx.iter().enumerate().map(|(j, &g)| (g, j)).collect();
    let local_a: HashMap<usize, usize> = a_idx.iter().enumerate().map(|(j, &g)| (g, j)).collect();
    let to_m = |v: &ModElement| ModElement { coords: v.coords.iter().map(|(g, p)| (local_m[g], p.clone())).collect() };
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for (t, v) in mu2.entries() {
        match (local_a.get(&t[0]), local_m.get(&t[1]), local_m.get(&t[0]), local_a.get(&t[1])) {
            (Some(&a), Some(&x), _, _) => {
                left.insert((a, x), to_m(v));
            }
            (_, _, Some(&x), Some(&a)) => {
                right.insert((x, a), to_m(v));
            }
            _ => {}
        }
    }
    let bimodule = ConformalBimodule::checked(algebra, mm.clone(), &left, &right)?;
    let theta = match s.mult(n + 1) {
        Some(f) => f.restrict(am.clone(), &a_idx, mm.clone(), &m_idx)?.with_modules(am, mm, 0),
        None => ConfMap::zero(am, mm, n + 1, 0),
    };
    Ok(SkeletalParts { data: SkeletalData::new(bimodule, n, theta)?, a_idx, m_idx })
}

/// Inverse of [`skeletal_from_cocycle`].
pub fn cocycle_from_skeletal(s: &AInfStructure) -> Result<SkeletalData, TwoCellError> {
    let parts = skeletal_parts(s)?;
    if !is_cocycle(&parts.data.bimodule, &Cochain::Map(parts.data.theta.clone()))? {
        let delta = hochschild_delta(&parts.data.bimodule, &Cochain::Map(parts.data.theta.clone()))?;
        let witness = delta.as_map().and_then(|f| f.witness()).expect("nonzero δΘ");
        return Err(TwoCellError::NotCocycle(Failure { check: "δΘ = 0".into(), witness }));
    }
    Ok(parts.data)
}

/// `μ′_{n+1} = μ_{n+1} + δσ` for `σ : A₀^{⊗n} → A_{n−1}`, given as a map of
/// degree `n − 1` on the structure's module.
pub fn apply_equivalence(s: &AInfStructure, sigma: &ConfMap) -> Result<AInfStructure, TwoCellError> {
    let parts = skeletal_parts(s)?;
    let d = &parts.data;
    let top = d.n as i32 - 1;
    if sigma.arity != d.n || sigma.degree != top || sigma.source != s.module || sigma.target != s.module {
        return Err(TwoCellError::Shape(format!("σ must have arity {} and degree {top}", d.n)));
    }
    let b = &d.bimodule;
    let local = sigma.restrict(b.algebra.module.clone(), &parts.a_idx, b.module.clone(), &parts.m_idx)?;
    let delta = hochschild_delta(b, &Cochain::Map(local.with_modules(b.algebra.module.clone(), b.module.clone(), 0)))?;
    let delta = delta.as_map().expect("δ of an n-cochain with n ≥ 2").clone();
    let shift = delta.embed(s.module.clone(), &parts.a_idx, s.module.clone(), &parts.m_idx).with_modules(
        s.module.clone(),
        s.module.clone(),
        top,
    );
    let mut maps = s.mults().clone();
    let k = d.n + 1;
    let old = maps.remove(&k).unwrap_or_else(|| ConfMap::zero(s.module.clone(), s.module.clone(), k, top));
    let new = old.add(&shift);
    if !new.is_zero() {
        maps.insert(k, new);
    }
    Ok(AInfStructure::new(s.module.clone(), maps)?)
}

/// A category internal to `ℚ[∂]`-modules (objects `C₀`, arrows `C₁`) with a
/// conformal product functor `π` and an associator `𝔸`. Arrows compose by
/// `u ∘ v = u + v − 1_{t(v)}`, the only linear composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfTwoAlgebra {
    pub objects: Arc<GradedModule>,
    pub arrows: Arc<GradedModule>,
    pub s: ConfMap,
    pub t: ConfMap,
    pub iota: ConfMap,
    pub pi0: ConfMap,
    pub pi1: ConfMap,
    pub associator: ConfMap,
}

impl ConfTwoAlgebra {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        s: ConfMap,
        t: ConfMap,
        iota: ConfMap,
        pi0: ConfMap,
        pi1: ConfMap,
        associator: ConfMap,
    ) -> Result<Self, TwoCellError> {
        let c0 = iota.source.clone();
        let c1 = iota.target.clone();
        for m in [&c0, &c1] {
            if let Some(g) = m.generators().iter().find(|g| g.degree != 0) {
                return Err(TwoCellError::Shape(format!("generator `{}` is not in degree 0", g.name)));
            }
        }
        let shapes: [(&ConfMap, &str, &Arc<GradedModule>, &Arc<GradedModule>, usize); 6] = [
            (&s, "s", &c1, &c0, 1),
            (&t, "t", &c1, &c0, 1),
            (&iota, "ι", &c0, &c1, 1),
            (&pi0, "π on objects", &c0, &c0, 2),
            (&pi1, "π on arrows", &c1, &c1, 2),
            (&associator, "𝔸", &c0, &c1, 3),
        ];
        for (f, name, src, tgt, arity) in shapes {
            if f.arity != arity || f.degree != 0 || f.source != *src || f.target != *tgt {
                return Err(TwoCellError::Shape(format!("{name} has the wrong shape")));
            }
        }
        Ok(ConfTwoAlgebra { objects: c0, arrows: c1, s, t, iota, pi0, pi1, associator })
    }

    /// Only identity arrows; `𝔸_{a,b,c} = 1_{a(bc)}`.
    pub fn discrete(a: &AssocConfAlgebra) -> Self {
        let m = a.module.clone();
        let id = ConfMap::identity(m.clone());
        let assoc = compose(&id, &multi_insert(&a.mult, &[Inner::Id, Inner::Map(&a.mult)]).expect("one module"))
            .expect("one module");
        ConfTwoAlgebra::new(id.clone(), id.clone(), id, a.mult.clone(), a.mult.clone(), assoc).expect("valid shapes")
    }

    /// `u ∘ v` for arrows with `s(u) = t(v)`.
    pub fn compose_arrows(&self, u: &ModElement, v: &ModElement) -> Result<ModElement, TwoCellError> {
        let tv = apply1(&self.t, v);
        if apply1(&self.s, u) != tv {
            return Err(TwoCellError::Endpoint("arrows are not composable".into()));
        }
        Ok(u.add(v).sub(&apply1(&self.iota, &tv)))
    }

    /// `id − ι s`, the projection of arrows onto `ker s`.
    fn kernel_projection(&self) -> ConfMap {
        ConfMap::identity(self.arrows.clone()).sub(&compose(&self.iota, &self.s).expect("ι after s"))
    }
}

/// Structural axioms, the interchange law, the associator's endpoints and
/// naturality, and the pentagon.
pub fn two_algebra_items(c: &ConfTwoAlgebra) -> Vec<(&'static str, Report)> {
    let ev = |r: Result<ConfMap, MapError>| r.expect("maps of a 2-algebra compose");
    let all = crate::confmap::all_tuples;
    let (c0, c1) = (&c.objects, &c.arrows);
    let id0 = ConfMap::identity(c0.clone());
    let mut out: Vec<(&'static str, ConfMap)> = vec![
        ("s ∘ ι = id", ev(compose(&c.s, &c.iota)).sub(&id0)),
        ("t ∘ ι = id", ev(compose(&c.t, &c.iota)).sub(&id0)),
    ];
    for (label, end) in [("π commutes with s", &c.s), ("π commutes with t", &c.t)] {
        let lhs = ev(compose(end, &c.pi1));
        let rhs = ev(multi_insert(&c.pi0, &[Inner::Map(end), Inner::Map(end)]));
        out.push((label, lhs.sub(&rhs)));
    }
    let ids = ev(multi_insert(&c.pi1, &[Inner::Map(&c.iota), Inner::Map(&c.iota)]));
    out.push(("1_a 1_b = 1_{ab}", ids.sub(&ev(compose(&c.iota, &c.pi0)))));
    let k = c.kernel_projection();
    let itk = ev(compose(&c.iota, &ev(compose(&c.t, &k))));
    let kk = ev(multi_insert(&c.pi1, &[Inner::Map(&k), Inner::Map(&k)]));
    let left = ev(multi_insert(&c.pi1, &[Inner::Map(&itk), Inner::Map(&k)]));
    let right = ev(multi_insert(&c.pi1, &[Inner::Map(&k), Inner::Map(&itk)]));
    out.push(("interchange: h k = 1_{t h} k", kk.sub(&left)));
    out.push(("interchange: h k = h 1_{t k}", kk.sub(&right)));

    let a_bc = ev(multi_insert(&c.pi0, &[Inner::Id, Inner::Map(&c.pi0)]));
    let ab_c = ev(multi_insert(&c.pi0, &[Inner::Map(&c.pi0), Inner::Id]));
    out.push(("s(𝔸_{a,b,c}) = a(bc)", ev(compose(&c.s, &c.associator)).sub(&a_bc)));
    out.push(("t(𝔸_{a,b,c}) = (ab)c", ev(compose(&c.t, &c.associator)).sub(&ab_c)));

    let naturality = tree_sum(
        c1,
        c1,
        3,
        0,
        vec![
            (1, Tree::node(&c.associator, vec![on(&c.t, leaf(0)), on(&c.t, leaf(1)), on(&c.t, leaf(2))])),
            (1, Tree::node(&c.pi1, vec![leaf(0), Tree::corolla(&c.pi1, &[1, 2])])),
            (
                -1,
                on(
                    &c.iota,
                    Tree::node(&c.pi0, vec![on(&c.t, leaf(0)), Tree::node(&c.pi0, vec![on(&c.t, leaf(1)), on(&c.t, leaf(2))])]),
                ),
            ),
            (-1, Tree::node(&c.pi1, vec![Tree::corolla(&c.pi1, &[0, 1]), leaf(2)])),
            (-1, Tree::node(&c.associator, vec![on(&c.s, leaf(0)), on(&c.s, leaf(1)), on(&c.s, leaf(2))])),
            (
                1,
                on(
                    &c.iota,
                    Tree::node(&c.pi0, vec![Tree::node(&c.pi0, vec![on(&c.s, leaf(0)), on(&c.s, leaf(1))]), on(&c.s, leaf(2))]),
                ),
            ),
        ],
        &all,
    );
    out.push(("𝔸 is natural", naturality));
    out.push(("pentagon", pentagon_defect(c)));
    out.into_iter().map(|(l, d)| (l, expect_zero(&d, l))).collect()
}

/// `𝔸_{ab,c,d} ∘ 𝔸_{a,b,cd}` minus `(𝔸_{a,b,c} 1_d) ∘ 𝔸_{a,bc,d} ∘ (1_a 𝔸_{b,c,d})`.
pub fn pentagon_defect(c: &ConfTwoAlgebra) -> ConfMap {
    let p = &c.pi0;
    let a = &c.associator;
    let pr = |i: usize, j: usize| Tree::corolla(p, &[i, j]);
    let terms = vec![
        (1, Tree::node(a, vec![leaf(0), leaf(1), pr(2, 3)])),
        (1, Tree::node(a, vec![pr(0, 1), leaf(2), leaf(3)])),
        (-1, on(&c.iota, Tree::node(p, vec![pr(0, 1), pr(2, 3)]))),
        (-1, Tree::node(&c.pi1, vec![on(&c.iota, leaf(0)), Tree::corolla(a, &[1, 2, 3])])),
        (-1, Tree::node(a, vec![leaf(0), pr(1, 2), leaf(3)])),
        (-1, Tree::node(&c.pi1, vec![Tree::corolla(a, &[0, 1, 2]), on(&c.iota, leaf(3))])),
        (1, on(&c.iota, Tree::node(p, vec![leaf(0), Tree::node(p, vec![pr(1, 2), leaf(3)])]))),
        (1, on(&c.iota, Tree::node(p, vec![Tree::node(p, vec![leaf(0), pr(1, 2)]), leaf(3)]))),
    ];
    tree_sum(&c.objects, &c.arrows, 4, 0, terms, &crate::confmap::all_tuples)
}

pub fn check_two_algebra(c: &ConfTwoAlgebra) -> Report {
    two_algebra_items(c).into_iter().try_for_each(|(_, r)| r)
}

/// A homomorphism `(F₀, F₁)` with `𝔽_{a,b} : F₀(a) F₀(b) → F₀(ab)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoAlgMorphism {
    pub source: ConfTwoAlgebra,
    pub target: ConfTwoAlgebra,
    pub f0: ConfMap,
    pub f1: ConfMap,
    pub phi: ConfMap,
}

impl TwoAlgMorphism {
    pub fn new(
        source: ConfTwoAlgebra,
        target: ConfTwoAlgebra,
        f0: ConfMap,
        f1: ConfMap,
        phi: ConfMap,
    ) -> Result<Self, TwoCellError> {
        let shapes = [
            (&f0, "F₀", &source.objects, &target.objects, 1),
            (&f1, "F₁", &source.arrows, &target.arrows, 1),
            (&phi, "𝔽", &source.objects, &target.arrows, 2),
        ];
        for (f, name, src, tgt, arity) in shapes {
            if f.arity != arity || f.degree != 0 || f.source != *src || f.target != *tgt {
                return Err(TwoCellError::Shape(format!("{name} has the wrong shape")));
            }
        }
        Ok(TwoAlgMorphism { source, target, f0, f1, phi })
    }

    /// `(id, id)` with identity arrows `1_{ab}`.
    pub fn identity(c: &ConfTwoAlgebra) -> Self {
        let phi = compose(&c.iota, &c.pi0).expect("ι after π");
        TwoAlgMorphism {
            source: c.clone(),
            target: c.clone(),
            f0: ConfMap::identity(c.objects.clone()),
            f1: ConfMap::identity(c.arrows.clone()),
            phi,
        }
    }
}

pub fn two_alg_morphism_items(m: &TwoAlgMorphism) -> Vec<(&'static str, Report)> {
    let ev = |r: Result<ConfMap, MapError>| r.expect("maps of a homomorphism compose");
    let (c, d) = (&m.source, &m.target);
    let mut out: Vec<(&'static str, ConfMap)> = vec![
        ("s′ F₁ = F₀ s", ev(compose(&d.s, &m.f1)).sub(&ev(compose(&m.f0, &c.s)))),
        ("t′ F₁ = F₀ t", ev(compose(&d.t, &m.f1)).sub(&ev(compose(&m.f0, &c.t)))),
        ("F₁ ι = ι′ F₀", ev(compose(&m.f1, &c.iota)).sub(&ev(compose(&d.iota, &m.f0)))),
    ];
    let src_phi = ev(multi_insert(&d.pi0, &[Inner::Map(&m.f0), Inner::Map(&m.f0)]));
    out.push(("s′(𝔽_{a,b}) = F₀(a)F₀(b)", ev(compose(&d.s, &m.phi)).sub(&src_phi)));
    out.push(("t′(𝔽_{a,b}) = F₀(ab)", ev(compose(&d.t, &m.phi)).sub(&ev(compose(&m.f0, &c.pi0)))));

    let all = crate::confmap::all_tuples;
    let f0 = &m.f0;
    let naturality = tree_sum(
        &c.arrows,
        &d.arrows,
        2,
        0,
        vec![
            (1, Tree::node(&m.phi, vec![on(&c.t, leaf(0)), on(&c.t, leaf(1))])),
            (1, Tree::node(&d.pi1, vec![on(&m.f1, leaf(0)), on(&m.f1, leaf(1))])),
            (-1, on(&d.iota, Tree::node(&d.pi0, vec![on(f0, on(&c.t, leaf(0))), on(f0, on(&c.t, leaf(1)))]))),
            (-1, on(&m.f1, Tree::corolla(&c.pi1, &[0, 1]))),
            (-1, Tree::node(&m.phi, vec![on(&c.s, leaf(0)), on(&c.s, leaf(1))])),
            (1, on(&d.iota, on(f0, Tree::node(&c.pi0, vec![on(&c.s, leaf(0)), on(&c.s, leaf(1))])))),
        ],
        &all,
    );
    out.push(("𝔽 is natural", naturality));

    let fl = |i: usize| on(f0, leaf(i));
    let hexagon = tree_sum(
        &c.objects,
        &d.arrows,
        3,
        0,
        vec![
            (1, Tree::node(&d.associator, vec![fl(0), fl(1), fl(2)])),
            (1, Tree::node(&d.pi1, vec![Tree::corolla(&m.phi, &[0, 1]), on(&d.iota, fl(2))])),
            (1, Tree::node(&m.phi, vec![Tree::corolla(&c.pi0, &[0, 1]), leaf(2)])),
            (-1, on(&d.iota, Tree::node(&d.pi0, vec![Tree::node(&d.pi0, vec![fl(0), fl(1)]), fl(2)]))),
            (-1, on(&d.iota, Tree::node(&d.pi0, vec![on(f0, Tree::corolla(&c.pi0, &[0, 1])), fl(2)]))),
            (-1, Tree::node(&d.pi1, vec![on(&d.iota, fl(0)), Tree::corolla(&m.phi, &[1, 2])])),
            (-1, Tree::node(&m.phi, vec![leaf(0), Tree::corolla(&c.pi0, &[1, 2])])),
            (-1, on(&m.f1, Tree::corolla(&c.associator, &[0, 1, 2]))),
            (1, on(&d.iota, Tree::node(&d.pi0, vec![fl(0), on(f0, Tree::corolla(&c.pi0, &[1, 2]))]))),
            (1, on(&d.iota, on(f0, Tree::node(&c.pi0, vec![leaf(0), Tree::corolla(&c.pi0, &[1, 2])])))),
        ],
        &all,
    );
    out.push(("hexagon", hexagon));
    out.into_iter().map(|(l, d)| (l, expect_zero(&d, l))).collect()
}

pub fn check_two_alg_morphism(m: &TwoAlgMorphism) -> Report {
    two_alg_morphism_items(m).into_iter().try_for_each(|(_, r)| r)
}

/// `(G₀F₀, G₁F₁)` with `(𝔾 ⋄ 𝔽)_{a,b} = G₁(𝔽_{a,b}) ∘ 𝔾_{F₀a,F₀b}`.
pub fn compose_two_alg(g: &TwoAlgMorphism, f: &TwoAlgMorphism) -> Result<TwoAlgMorphism, TwoCellError> {
    if f.target != g.source {
        return Err(TwoCellError::Endpoint("target of F differs from source of G".into()));
    }
    let mid = &f.target;
    let outer = &g.target;
    let g_of_f = multi_insert(&g.phi, &[Inner::Map(&f.f0), Inner::Map(&f.f0)])?;
    let g1_phi = compose(&g.f1, &f.phi)?;
    let prod = multi_insert(&mid.pi0, &[Inner::Map(&f.f0), Inner::Map(&f.f0)])?;
    let unit = compose(&outer.iota, &compose(&g.f0, &prod)?)?;
    TwoAlgMorphism::new(
        f.source.clone(),
        g.target.clone(),
        compose(&g.f0, &f.f0)?,
        compose(&g.f1, &f.f1)?,
        g_of_f.add(&g1_phi).sub(&unit),
    )
}

/// `C = (A₀ ⊕ A₁ ⇉ A₀)` with `s(a, h) = a`, `t(a, h) = a + βh`,
/// `(a, h)(b, k) = (ab, ak + hb + (βh)k)` and `𝔸_{a,b,c} = (a(bc), μ₃(a, b, c))`.
/// Arrows use the generators of `X` in order, the first `rank A₀` being the
/// identities. No checks on `X`.
pub fn functor_s_unchecked(x: &TwoTermAInf) -> ConfTwoAlgebra {
    let a0 = x.a0();
    let r0 = a0.len();
    let c1 = Arc::new(
        GradedModule::new(x.module.generators().iter().map(|g| Generator { name: g.name.clone(), degree: 0 }).collect())
            .expect("distinct names"),
    );
    let c0 = Arc::new(GradedModule::new(x.module.generators()[..r0].to_vec()).expect("distinct names"));
    let all_c0: Vec<usize> = (0..r0).collect();
    let mut s = ConfMap::zero(c1.clone(), c0.clone(), 1, 0);
    let mut t = ConfMap::zero(c1.clone(), c0.clone(), 1, 0);
    let mut iota = ConfMap::zero(c0.clone(), c1.clone(), 1, 0);
    for &j in &all_c0 {
        s.set(vec![j], ModElement::generator(j)).expect("degree 0");
        t.set(vec![j], ModElement::generator(j)).expect("degree 0");
        iota.set(vec![j], ModElement::generator(j)).expect("degree 0");
    }
    for g in r0..x.module.rank() {
        t.set(vec![g], x.beta.value(&[g])).expect("β lands in A₀");
    }
    let pi0 = x.mu2.restrict(c0.clone(), &all_c0, c0.clone(), &all_c0).expect("A₀ is closed under μ₂");
    let plain = x.mu2.with_modules(c1.clone(), c1.clone(), 0);
    let twisted = tree_sum(
        &x.module,
        &x.module,
        2,
        1,
        vec![(1, Tree::node(&x.mu2, vec![on(&x.beta, leaf(0)), leaf(1)]))],
        &degree_pattern(&x.module, &[1, 1]),
    )
    .with_modules(c1.clone(), c1.clone(), 0);
    let pi1 = plain.add(&twisted);
    let nested = multi_insert(&x.mu2, &[Inner::Id, Inner::Map(&x.mu2)])
        .expect("one module")
        .restrict(c0.clone(), &all_c0, x.module.clone(), &(0..x.module.rank()).collect::<Vec<_>>())
        .expect("identity target map");
    let mu3 = x.mu3.restrict(c0.clone(), &all_c0, x.module.clone(), &(0..x.module.rank()).collect::<Vec<_>>()).expect("identity target map");
    let associator = nested.add(&mu3.with_modules(c0.clone(), x.module.clone(), 0)).with_modules(c0.clone(), c1.clone(), 0);
    ConfTwoAlgebra::new(s, t, iota, pi0, pi1, associator).expect("valid shapes")
}

pub fn functor_s(x: &TwoTermAInf) -> Result<ConfTwoAlgebra, TwoCellError> {
    check_two_term(x).map_err(TwoCellError::Axiom)?;
    Ok(functor_s_unchecked(x))
}

/// `S` on a morphism: `F₀ = f₀`, `F₁ = f₀ ⊕ f₁`, `𝔽_{a,b} = (f₀(a)f₀(b), f₂(a, b))`.
pub fn functor_s_morphism(f: &TwoTermMorphism) -> Result<TwoAlgMorphism, TwoCellError> {
    let src = functor_s(&f.source)?;
    let tgt = functor_s(&f.target)?;
    let r0 = src.objects.rank();
    let r0t = tgt.objects.rank();
    let f0 = f.f0.restrict(src.objects.clone(), &(0..r0).collect::<Vec<_>>(), tgt.objects.clone(), &(0..r0t).collect::<Vec<_>>())?;
    let f1 = f.linear().with_modules(src.arrows.clone(), tgt.arrows.clone(), 0);
    let units = compose(&tgt.iota, &multi_insert(&tgt.pi0, &[Inner::Map(&f0), Inner::Map(&f0)])?)?;
    let f2 = f
        .f2
        .restrict(src.objects.clone(), &(0..r0).collect::<Vec<_>>(), f.target.module.clone(), &(0..f.target.module.rank()).collect::<Vec<_>>())?
        .with_modules(src.objects.clone(), tgt.arrows.clone(), 0);
    TwoAlgMorphism::new(src, tgt, f0, f1, units.add(&f2))
}

/// The arrow generators `ι(a)` for each object `a`, and the remaining ones,
/// which give a basis `g − ι s(g)` of `ker s`.
fn splitting(c: &ConfTwoAlgebra) -> Result<(Vec<usize>, Vec<usize>), TwoCellError> {
    let mut units = Vec::new();
    for a in 0..c.objects.rank() {
        let v = c.iota.value(&[a]);
        let g = match v.coords.iter().collect::<Vec<_>>()[..] {
            [(g, p)] if *p == Poly::int(1) => *g,
            _ => return Err(TwoCellError::NotSplit(format!("ι({}) is not an arrow generator", c.objects.name(a)))),
        };
        if units.contains(&g) {
            return Err(TwoCellError::NotSplit(format!("ι is not injective on generators at `{}`", c.arrows.name(g))));
        }
        units.push(g);
    }
    let kernel = (0..c.arrows.rank()).filter(|g| !units.contains(g)).collect();
    Ok((units, kernel))
}

/// `A₁ = ker s` (basis `g − ι s(g)`), `β = t`, `μ₂` through identity arrows
/// and `μ₃ = pr₂ 𝔸`.
pub fn functor_t(c: &ConfTwoAlgebra) -> Result<TwoTermAInf, TwoCellError> {
    check_two_algebra(c).map_err(TwoCellError::Axiom)?;
    let (_, kernel) = splitting(c)?;
    let r0 = c.objects.rank();
    let top = GradedModule::new(kernel.iter().map(|&g| Generator { name: c.arrows.name(g).into(), degree: 1 }).collect())?;
    let a = Arc::new(c.objects.direct_sum(&top));
    let slot: HashMap<usize, usize> = kernel.iter().enumerate().map(|(q, &g)| (g, r0 + q)).collect();
    let pr2 = |x: &ModElement| ModElement {
        coords: x.coords.iter().filter_map(|(g, p)| slot.get(g).map(|&q| (q, p.clone()))).collect(),
    };
    let k = c.kernel_projection();
    let mut beta = ConfMap::zero(a.clone(), a.clone(), 1, -1);
    for &g in &kernel {
        beta.set(vec![slot[&g]], apply1(&c.t, &k.value(&[g])))?;
    }
    let mut mu2 = ConfMap::zero(a.clone(), a.clone(), 2, 0);
    for (t, v) in c.pi0.entries() {
        mu2.set(t.clone(), v.clone())?;
    }
    let left = Plan::new(&Tree::node(&c.pi1, vec![on(&c.iota, leaf(0)), on(&k, leaf(1))]), 2);
    let right = Plan::new(&Tree::node(&c.pi1, vec![on(&k, leaf(0)), on(&c.iota, leaf(1))]), 2);
    for x in 0..r0 {
        for &g in &kernel {
            mu2.set(vec![x, slot[&g]], pr2(&left.eval(&[x, g])))?;
            mu2.set(vec![slot[&g], x], pr2(&right.eval(&[g, x])))?;
        }
    }
    let mut mu3 = ConfMap::zero(a.clone(), a.clone(), 3, 1);
    for (t, v) in c.associator.entries() {
        mu3.set(t.clone(), pr2(v))?;
    }
    TwoTermAInf::new(beta, mu2, mu3)
}

/// `T` on a homomorphism: `f₀ = F₀`, `f₁ = F₁` on `ker s`, and
/// `f₂(a, b) = 𝔽_{a,b} − 1_{s(𝔽_{a,b})}`.
pub fn functor_t_morphism(m: &TwoAlgMorphism) -> Result<TwoTermMorphism, TwoCellError> {
    let x = functor_t(&m.source)?;
    let y = functor_t(&m.target)?;
    let (_, ker_src) = splitting(&m.source)?;
    let (_, ker_tgt) = splitting(&m.target)?;
    let r0 = m.source.objects.rank();
    let r0t = m.target.objects.rank();
    let slot: HashMap<usize, usize> = ker_tgt.iter().enumerate().map(|(q, &g)| (g, r0t + q)).collect();
    let pr2 = |v: &ModElement| ModElement {
        coords: v.coords.iter().filter_map(|(g, p)| slot.get(g).map(|&q| (q, p.clone()))).collect(),
    };
    let mut f0 = ConfMap::zero(x.module.clone(), y.module.clone(), 1, 0);
    for (t, v) in m.f0.entries() {
        f0.set(t.clone(), v.clone())?;
    }
    let k = m.source.kernel_projection();
    let mut f1 = ConfMap::zero(x.module.clone(), y.module.clone(), 1, 0);
    for (q, &g) in ker_src.iter().enumerate() {
        f1.set(vec![r0 + q], pr2(&apply1(&m.f1, &k.value(&[g]))))?;
    }
    let mut f2 = ConfMap::zero(x.module.clone(), y.module.clone(), 2, 1);
    let shifted = m.phi.sub(&compose(&m.target.iota, &compose(&m.target.s, &m.phi)?)?);
    for (t, v) in shifted.entries() {
        f2.set(t.clone(), pr2(v))?;
    }
    TwoTermMorphism::new(x, y, f0, f1, f2)
}

/// `Υ_C : S(T(C)) → C`, `(Υ_C)₀ = id`, `(Υ_C)₁(a, m) = 1_a + m`, identity `𝔽`.
pub fn upsilon(c: &ConfTwoAlgebra) -> Result<TwoAlgMorphism, TwoCellError> {
    let st = functor_s(&functor_t(c)?)?;
    let (units, kernel) = splitting(c)?;
    if st.objects != c.objects {
        return Err(TwoCellError::Shape("objects of S(T(C)) differ from those of C".into()));
    }
    let k = c.kernel_projection();
    let mut f1 = ConfMap::zero(st.arrows.clone(), c.arrows.clone(), 1, 0);
    for (a, &u) in units.iter().enumerate() {
        f1.set(vec![a], ModElement::generator(u))?;
    }
    let r0 = units.len();
    for (q, &g) in kernel.iter().enumerate() {
        f1.set(vec![r0 + q], k.value(&[g]))?;
    }
    let phi = compose(&c.iota, &c.pi0)?;
    TwoAlgMorphism::new(st, c.clone(), ConfMap::identity(c.objects.clone()), f1, phi)
}
