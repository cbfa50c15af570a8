//! Lie conformal algebras, conformal modules, the CNR bracket, Lie conformal
//! cohomology, and L∞- / L∞[1]-conformal algebras.

use crate::ainf::{shift_map, unshift_map, AInfStructure, CsCochain};
use crate::assocconf::{
    add_cochains, check_ungraded, scale_cochain, truncated_monomials, AssocConfAlgebra, Cochain, Coordinates,
    TruncatedRanks,
};
use crate::confmap::{
    all_tuples, build_from_trees, evaluate, expect_zero, koszul_sign, perm_sign, permute, shuffles, symmetrize,
    symmetry_defect, ConfMap, Failure, MapError, Perm, Report, SymMode, Tree, Witness,
};
use crate::confmod::{Generator, GradedModule, ModElement, ModuleError};
use crate::linalg::Echelon;
use crate::polyring::{rat, Poly, Var};
use rand::Rng;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("a λ-bracket must be a binary map of degree 0 on one module")]
    BadShape,
    #[error("module must be concentrated in degree 0")]
    Graded,
    #[error("structure constants of a current Lie algebra must be rational numbers")]
    NotConstant,
    #[error("{0}")]
    Axiom(Failure),
    #[error("map of arity {arity} is not {mode}")]
    NotSymmetric { arity: usize, mode: SymMode },
    #[error("map of arity {arity} has degree {found}, expected {expected}")]
    Degree { arity: usize, found: i32, expected: i32 },
    #[error("map stored under arity {key} has arity {found}")]
    Arity { key: usize, found: usize },
    #[error("module mismatch: {0}")]
    ModuleMismatch(String),
    #[error("cochain does not live on the given algebra and module")]
    CochainMismatch,
    #[error("the two coboundary formulas disagree at {0}")]
    RouteMismatch(Witness),
    #[error("the truncated cochain space is empty")]
    EmptyTruncation,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

fn parity(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn require(f: &ConfMap, mode: SymMode) -> Result<(), LieError> {
    if symmetry_defect(f, mode).is_some() {
        return Err(LieError::NotSymmetric { arity: f.arity, mode });
    }
    Ok(())
}

/// Sum over `(outer, inner, c)` and over `σ ∈ Sh(q, n-q)` of
/// `c · [sgn σ] ε(σ) · outer(inner(x_{σ(1)}, …, x_{σ(q)}), x_{σ(q+1)}, …)`.
/// The λ†_σ cases come out of the tree's leaf positions.
fn shuffle_sum(
    module: &Arc<GradedModule>,
    pairs: &[(&ConfMap, &ConfMap, i64)],
    n: usize,
    degree: i32,
    mode: SymMode,
    keep: &dyn Fn(&[usize]) -> bool,
) -> ConfMap {
    let mut trees = Vec::new();
    let mut signs: Vec<Box<dyn Fn(&[usize]) -> i64>> = Vec::new();
    for &(outer, inner, c) in pairs {
        let q = inner.arity;
        if c == 0 || outer.arity + q != n + 1 {
            continue;
        }
        for sigma in shuffles(q, n - q) {
            let mut children = vec![Tree::corolla(inner, &sigma[..q])];
            children.extend(sigma[q..].iter().map(|&p| Tree::Leaf(p)));
            trees.push(Tree::node(outer, children));
            let sgn = if mode == SymMode::Skew { perm_sign(&sigma) } else { 1 };
            let m = module.clone();
            let s: Perm = sigma.clone();
            signs.push(Box::new(move |t: &[usize]| {
                let degs: Vec<i32> = t.iter().map(|&g| m.degree(g)).collect();
                c * sgn * koszul_sign(&s, &degs)
            }));
        }
    }
    let terms: Vec<(Tree, &dyn Fn(&[usize]) -> i64)> =
        trees.into_iter().zip(&signs).map(|(t, s)| (t, s.as_ref())).collect();
    build_from_trees(module.clone(), module.clone(), n, degree, &terms, keep)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieConfAlgebra {
    pub module: Arc<GradedModule>,
    pub bracket: ConfMap,
}

impl LieConfAlgebra {
    /// Wraps a λ-bracket without checking the axioms.
    pub fn new(bracket: ConfMap) -> Result<Self, LieError> {
        if bracket.arity != 2 || bracket.degree != 0 || bracket.source != bracket.target {
            return Err(LieError::BadShape);
        }
        check_ungraded(&bracket.source).map_err(|_| LieError::Graded)?;
        Ok(LieConfAlgebra { module: bracket.source.clone(), bracket })
    }

    pub fn checked(bracket: ConfMap) -> Result<Self, LieError> {
        let l = Self::new(bracket)?;
        check_lie(&l).map_err(LieError::Axiom)?;
        Ok(l)
    }

    pub fn zero(module: Arc<GradedModule>) -> Result<Self, LieError> {
        Self::new(ConfMap::zero(module.clone(), module, 2, 0))
    }
}

/// `[x_λ y] + [y_{-λ-∂} x]`.
pub fn skew_defect(bracket: &ConfMap) -> ConfMap {
    bracket.add(&permute(bracket, &[1, 0]))
}

/// `[x_λ[y_μ z]] - [[x_λ y]_{λ+μ} z] - [y_μ[x_λ z]]`.
pub fn jacobi_defect(bracket: &ConfMap, keep: &dyn Fn(&[usize]) -> bool) -> ConfMap {
    let b = bracket;
    let t1 = Tree::node(b, vec![Tree::Leaf(0), Tree::corolla(b, &[1, 2])]);
    let t2 = Tree::node(b, vec![Tree::corolla(b, &[0, 1]), Tree::Leaf(2)]);
    let t3 = Tree::node(b, vec![Tree::Leaf(1), Tree::corolla(b, &[0, 2])]);
    let plus = |_: &[usize]| 1i64;
    let minus = |_: &[usize]| -1i64;
    build_from_trees(b.source.clone(), b.target.clone(), 3, 0, &[(t1, &plus), (t2, &minus), (t3, &minus)], keep)
}

pub fn check_lie(l: &LieConfAlgebra) -> Report {
    expect_zero(&skew_defect(&l.bracket), "skew-symmetry")?;
    expect_zero(&jacobi_defect(&l.bracket, &all_tuples), "conformal Jacobi identity")
}

/// `Vir = ℚ[∂]l` with `[l_λ l] = (∂ + 2λ)l`.
pub fn virasoro() -> LieConfAlgebra {
    let m = Arc::new(GradedModule::ungraded(&["l"]).expect("one generator"));
    let mut b = ConfMap::zero(m.clone(), m, 2, 0);
    b.set(vec![0, 0], ModElement::term(0, Poly::d() + Poly::l(1).scale_int(2))).expect("degree 0 entry");
    LieConfAlgebra::checked(b).expect("Vir is a Lie conformal algebra")
}

/// `Cur g` for a Lie algebra given by structure constants; antisymmetry and
/// Jacobi are verified.
pub fn cur_lie<S: AsRef<str>>(
    names: &[S],
    table: &BTreeMap<(usize, usize), ModElement>,
) -> Result<LieConfAlgebra, LieError> {
    let module = Arc::new(GradedModule::ungraded(names)?);
    let mut b = ConfMap::zero(module.clone(), module, 2, 0);
    for (&(i, j), v) in table {
        if v.coords.values().any(|p| !p.is_constant()) {
            return Err(LieError::NotConstant);
        }
        b.set(vec![i, j], v.clone())?;
    }
    LieConfAlgebra::checked(b)
}

pub fn cur_abelian(n: usize) -> LieConfAlgebra {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    cur_lie(&names, &BTreeMap::new()).expect("abelian")
}

/// `Cur sl₂` on `h, e, f`.
pub fn cur_sl2() -> LieConfAlgebra {
    let c = |g: usize, k: i64| ModElement::term(g, Poly::int(k));
    let table = BTreeMap::from([
        ((0, 1), c(1, 2)),
        ((1, 0), c(1, -2)),
        ((0, 2), c(2, -2)),
        ((2, 0), c(2, 2)),
        ((1, 2), c(0, 1)),
        ((2, 1), c(0, -1)),
    ]);
    cur_lie(&["h", "e", "f"], &table).expect("sl₂ is a Lie algebra")
}

/// `[a_λ b] = a_λ b - b_{-∂-λ} a`.
pub fn skew_symmetrize_assoc(a: &AssocConfAlgebra) -> LieConfAlgebra {
    LieConfAlgebra::new(symmetrize(&a.mult, SymMode::Skew)).expect("same module and degree")
}

/// A conformal module over a Lie conformal algebra, stored on `E = L ⊕ M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformalLModule {
    pub algebra: LieConfAlgebra,
    pub module: Arc<GradedModule>,
    ext: Arc<GradedModule>,
    l_idx: Vec<usize>,
    m_idx: Vec<usize>,
    action: ConfMap,
    product: ConfMap,
}

impl ConformalLModule {
    /// Action given as a table `(x, v) ↦ x_λ v` with values in `M`.
    pub fn new(
        algebra: LieConfAlgebra,
        module: Arc<GradedModule>,
        table: &BTreeMap<(usize, usize), ModElement>,
    ) -> Result<Self, LieError> {
        check_ungraded(&module).map_err(|_| LieError::Graded)?;
        let rl = algebra.module.rank();
        let ext = Arc::new(algebra.module.direct_sum(&module));
        let l_idx: Vec<usize> = (0..rl).collect();
        let m_idx: Vec<usize> = (rl..rl + module.rank()).collect();
        let mut action = ConfMap::zero(ext.clone(), ext.clone(), 2, 0);
        for (&(x, v), val) in table {
            let lifted = ModElement { coords: val.coords.iter().map(|(g, p)| (m_idx[*g], p.clone())).collect() };
            action.set(vec![l_idx[x], m_idx[v]], lifted)?;
        }
        // ([x_λ y], x_λ v - y_{-∂-λ} u)
        let product = algebra
            .bracket
            .embed(ext.clone(), &l_idx, ext.clone(), &l_idx)
            .add(&action)
            .sub(&permute(&action, &[1, 0]));
        Ok(ConformalLModule { algebra, module, ext, l_idx, m_idx, action, product })
    }

    pub fn checked(
        algebra: LieConfAlgebra,
        module: Arc<GradedModule>,
        table: &BTreeMap<(usize, usize), ModElement>,
    ) -> Result<Self, LieError> {
        let m = Self::new(algebra, module, table)?;
        m.check_axioms().map_err(LieError::Axiom)?;
        Ok(m)
    }

    pub fn adjoint(algebra: LieConfAlgebra) -> Self {
        let table: BTreeMap<(usize, usize), ModElement> =
            algebra.bracket.entries().map(|(t, v)| ((t[0], t[1]), v.clone())).collect();
        let module = Arc::new((*algebra.module).clone());
        Self::new(algebra, module, &table).expect("adjoint action is valid")
    }

    pub fn extension(&self) -> (&Arc<GradedModule>, &[usize], &[usize]) {
        (&self.ext, &self.l_idx, &self.m_idx)
    }

    /// The bracket of `L ⋉ M` on `E`.
    pub fn semidirect_product(&self) -> &ConfMap {
        &self.product
    }

    pub fn action_table(&self) -> BTreeMap<(usize, usize), ModElement> {
        let rl = self.l_idx.len();
        self.action
            .entries()
            .map(|(t, v)| {
                let local = ModElement { coords: v.coords.iter().map(|(g, p)| (g - rl, p.clone())).collect() };
                ((t[0], t[1] - rl), local)
            })
            .collect()
    }

    fn is_m(&self, g: usize) -> bool {
        g >= self.l_idx.len()
    }

    pub fn check_axioms(&self) -> Report {
        let keep = |t: &[usize]| !self.is_m(t[0]) && !self.is_m(t[1]) && self.is_m(t[2]);
        expect_zero(&jacobi_defect(&self.product, &keep), "x_λ(y_μ v) - y_μ(x_λ v) = [x_λ y]_{λ+μ} v")
    }

    fn only_l(&self) -> impl Fn(&[usize]) -> bool + '_ {
        move |t: &[usize]| t.iter().all(|&g| !self.is_m(g))
    }

    fn lift(&self, v: &ModElement) -> ModElement {
        ModElement { coords: v.coords.iter().map(|(g, p)| (self.m_idx[*g], p.clone())).collect() }
    }

    fn lower(&self, v: &ModElement) -> ModElement {
        let rl = self.l_idx.len();
        ModElement { coords: v.coords.iter().map(|(g, p)| (g - rl, p.clone())).collect() }
    }

    fn check_cochain(&self, c: &Cochain) -> Result<(), LieError> {
        match c {
            Cochain::Zero(m) => {
                if m.coords.keys().any(|&g| g >= self.module.rank()) || m.check_plain(&self.module).is_err() {
                    return Err(LieError::CochainMismatch);
                }
            }
            Cochain::Map(f) => {
                if f.source != self.algebra.module || f.target != self.module || f.degree != 0 {
                    return Err(LieError::CochainMismatch);
                }
                require(f, SymMode::Skew)?;
            }
        }
        Ok(())
    }

    pub fn zero_cochain(&self, n: usize) -> Cochain {
        if n == 0 {
            Cochain::Zero(ModElement::zero())
        } else {
            Cochain::Map(ConfMap::zero(self.algebra.module.clone(), self.module.clone(), n, 0))
        }
    }
}

/// `φ ⋄ ψ = Σ_{σ ∈ Sh(m, n-1)} sgn(σ) φ(ψ(x_{σ(1)}, …, x_{σ(m)}), …)`.
pub fn cnr_diamond(phi: &ConfMap, psi: &ConfMap) -> Result<ConfMap, LieError> {
    same_module(phi, psi)?;
    let n = phi.arity + psi.arity - 1;
    Ok(shuffle_sum(&phi.source, &[(phi, psi, 1)], n, phi.degree + psi.degree, SymMode::Skew, &all_tuples))
}

fn same_module(phi: &ConfMap, psi: &ConfMap) -> Result<(), LieError> {
    for f in [phi, psi] {
        if f.source != phi.source || f.target != phi.source {
            return Err(LieError::ModuleMismatch("maps must live on one module".into()));
        }
    }
    Ok(())
}

fn cnr_terms(phi: &ConfMap, psi: &ConfMap, keep: &dyn Fn(&[usize]) -> bool) -> ConfMap {
    let (n, m) = (phi.arity, psi.arity);
    let c = -parity(((m - 1) * (n - 1)) as i64);
    shuffle_sum(&phi.source, &[(phi, psi, 1), (psi, phi, c)], n + m - 1, phi.degree + psi.degree, SymMode::Skew, keep)
}

/// `[φ, ψ]_CNR = φ ⋄ ψ - (-1)^{(m-1)(n-1)} ψ ⋄ φ` for skew maps of arities
/// `n` and `m`.
pub fn cnr_bracket(phi: &ConfMap, psi: &ConfMap) -> Result<ConfMap, LieError> {
    same_module(phi, psi)?;
    require(phi, SymMode::Skew)?;
    require(psi, SymMode::Skew)?;
    Ok(cnr_terms(phi, psi, &all_tuples))
}

/// The Lie conformal coboundary. Computed twice, as `(-1)^{n-1}[π_⋉, φ]_CNR`
/// restricted to `L`, and by the explicit four-group formula; the results
/// must agree.
pub fn lie_delta(m: &ConformalLModule, c: &Cochain) -> Result<Cochain, LieError> {
    let (a, b) = lie_delta_routes(m, c)?;
    if let Some(w) = a.sub(&b).witness() {
        return Err(LieError::RouteMismatch(w));
    }
    Ok(Cochain::Map(a))
}

/// Both computations of `δc`: through `[π_⋉, φ]_CNR` (for `n = 0`, through
/// the action) first, then the explicit formula (for `n = 0`, through `L ⋉ M`).
pub fn lie_delta_routes(m: &ConformalLModule, c: &Cochain) -> Result<(ConfMap, ConfMap), LieError> {
    m.check_cochain(c)?;
    Ok(match c {
        Cochain::Zero(v) => (delta_zero_action(m, v)?, delta_zero_semidirect(m, v)?),
        Cochain::Map(phi) => (delta_cnr(m, phi)?, delta_explicit(m, phi)?),
    })
}

/// `δv(x) = (x_{-λ-∂} v)|_{λ=0}`.
fn delta_zero_action(m: &ConformalLModule, v: &ModElement) -> Result<ConfMap, LieError> {
    let lifted = m.lift(v);
    let mut out = ConfMap::zero(m.algebra.module.clone(), m.module.clone(), 1, 0);
    for x in 0..m.l_idx.len() {
        let val = evaluate(&m.action, &[ModElement::generator(m.l_idx[x]), lifted.clone()])?.value;
        out.set(vec![x], m.lower(&val.map_coeffs(|p| p.substitute(Var::L(1), &-Poly::d()))))?;
    }
    Ok(out)
}

/// `δv(x) = -[v_0 x]` in `L ⋉ M`.
fn delta_zero_semidirect(m: &ConformalLModule, v: &ModElement) -> Result<ConfMap, LieError> {
    let lifted = m.lift(v);
    let mut out = ConfMap::zero(m.algebra.module.clone(), m.module.clone(), 1, 0);
    for x in 0..m.l_idx.len() {
        let val = evaluate(&m.product, &[lifted.clone(), ModElement::generator(m.l_idx[x])])?.value;
        out.set(vec![x], m.lower(&val.map_coeffs(|p| p.substitute(Var::L(1), &Poly::zero()))).neg())?;
    }
    Ok(out)
}

fn embed_cochain(m: &ConformalLModule, phi: &ConfMap) -> ConfMap {
    phi.embed(m.ext.clone(), &m.l_idx, m.ext.clone(), &m.m_idx)
}

fn restrict_cochain(m: &ConformalLModule, f: &ConfMap) -> Result<ConfMap, LieError> {
    Ok(f.restrict(m.algebra.module.clone(), &m.l_idx, m.module.clone(), &m.m_idx)?)
}

fn delta_cnr(m: &ConformalLModule, phi: &ConfMap) -> Result<ConfMap, LieError> {
    let n = phi.arity;
    let phi_e = embed_cochain(m, phi);
    let keep = m.only_l();
    let full = cnr_terms(&m.product, &phi_e, &keep);
    restrict_cochain(m, &full.scale_int(parity(n as i64 - 1)))
}

fn delta_explicit(m: &ConformalLModule, phi: &ConfMap) -> Result<ConfMap, LieError> {
    let n = phi.arity;
    let phi_e = embed_cochain(m, phi);
    let pi = &m.product;
    let mut trees = Vec::new();
    let mut signs = Vec::new();
    let without = |skip: &[usize]| -> Vec<usize> { (0..=n).filter(|p| !skip.contains(p)).collect() };
    for i in 1..=n {
        trees.push(Tree::node(pi, vec![Tree::Leaf(i - 1), Tree::corolla(&phi_e, &without(&[i - 1]))]));
        signs.push(parity(i as i64 + 1));
    }
    trees.push(Tree::node(pi, vec![Tree::Leaf(n), Tree::corolla(&phi_e, &without(&[n]))]));
    signs.push(parity(n as i64));
    for i in 1..=n {
        for j in i + 1..=n + 1 {
            let mut children = vec![Tree::corolla(pi, &[i - 1, j - 1])];
            children.extend(without(&[i - 1, j - 1]).into_iter().map(Tree::Leaf));
            trees.push(Tree::node(&phi_e, children));
            signs.push(parity((i + j) as i64));
        }
    }
    let closures: Vec<Box<dyn Fn(&[usize]) -> i64>> =
        signs.into_iter().map(|s| Box::new(move |_: &[usize]| s) as Box<dyn Fn(&[usize]) -> i64>).collect();
    let terms: Vec<(Tree, &dyn Fn(&[usize]) -> i64)> =
        trees.into_iter().zip(&closures).map(|(t, s)| (t, s.as_ref())).collect();
    let keep = m.only_l();
    let full = build_from_trees(m.ext.clone(), m.ext.clone(), n + 1, 0, &terms, &keep);
    restrict_cochain(m, &full)
}

pub fn is_lie_cocycle(m: &ConformalLModule, c: &Cochain) -> Result<bool, LieError> {
    Ok(lie_delta(m, c)?.is_zero())
}

/// A linearly independent spanning set of the skew-symmetrizations of the
/// truncated `n`-cochains (`D`-degree ≤ `dmax`, each `λ`-degree ≤ `lmax`).
/// For `n = 0` this is the `D`-degree ≤ `dmax` part of `M`.
pub fn lie_truncation_basis(m: &ConformalLModule, n: usize, dmax: u32, lmax: u32) -> Vec<Cochain> {
    let rm = m.module.rank();
    if n == 0 {
        return (0..rm)
            .flat_map(|g| (0..=dmax).map(move |d| Cochain::Zero(ModElement::term(g, Poly::d().pow(d)))))
            .collect();
    }
    let monos = truncated_monomials(n - 1, dmax, lmax);
    let mut coords = Coordinates::default();
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for t in crate::confmap::tuples(m.algebra.module.rank(), n) {
        if t.windows(2).any(|w| w[0] > w[1]) {
            continue;
        }
        for g in 0..rm {
            for mono in &monos {
                let mut f = ConfMap::zero(m.algebra.module.clone(), m.module.clone(), n, 0);
                f.set(t.clone(), ModElement::term(g, Poly::monomial(rat(1), mono.clone()))).expect("basis cochain");
                let c = Cochain::Map(symmetrize(&f, SymMode::Skew));
                let before = e.rank();
                e.insert(coords.vector(&c));
                if e.rank() > before {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn lie_delta_echelon(m: &ConformalLModule, basis: &[Cochain]) -> Result<Echelon, LieError> {
    if basis.is_empty() {
        return Err(LieError::EmptyTruncation);
    }
    let mut coords = Coordinates::default();
    let mut e = Echelon::new();
    for c in basis {
        e.insert(coords.vector(&lie_delta(m, c)?));
    }
    Ok(e)
}

/// Ranks of `δ` on [`lie_truncation_basis`].
pub fn truncated_lie_delta_ranks(m: &ConformalLModule, n: usize, dmax: u32, lmax: u32) -> Result<TruncatedRanks, LieError> {
    let e = lie_delta_echelon(m, &lie_truncation_basis(m, n, dmax, lmax))?;
    Ok(TruncatedRanks { domain: e.rank() + e.kernel().len(), rank: e.rank(), kernel: e.kernel().len() })
}

/// A basis of the truncated Lie cocycles.
pub fn truncated_lie_cocycles(m: &ConformalLModule, n: usize, dmax: u32, lmax: u32) -> Result<Vec<Cochain>, LieError> {
    let basis = lie_truncation_basis(m, n, dmax, lmax);
    let e = lie_delta_echelon(m, &basis)?;
    Ok(e
        .kernel()
        .iter()
        .map(|combo| {
            combo
                .iter()
                .fold(m.zero_cochain(n), |acc, (i, q)| add_cochains(&acc, &scale_cochain(&basis[*i], q)))
        })
        .collect())
}

pub fn random_lie_cochain(
    m: &ConformalLModule,
    n: usize,
    dmax: u32,
    lmax: u32,
    density: f64,
    rng: &mut impl Rng,
) -> Cochain {
    let mut acc = m.zero_cochain(n);
    for c in lie_truncation_basis(m, n, dmax, lmax) {
        if rng.gen_bool(density) {
            acc = add_cochains(&acc, &scale_cochain(&c, &rat(rng.gen_range(-3..=3))));
        }
    }
    acc
}

fn validate(
    module: &Arc<GradedModule>,
    maps: &BTreeMap<usize, ConfMap>,
    degree: impl Fn(usize) -> i32,
    mode: SymMode,
) -> Result<(), LieError> {
    for (&k, f) in maps {
        if f.arity != k {
            return Err(LieError::Arity { key: k, found: f.arity });
        }
        if f.source != *module || f.target != *module {
            return Err(LieError::ModuleMismatch(format!("map of arity {k} is not on the structure's module")));
        }
        if f.degree != degree(k) {
            return Err(LieError::Degree { arity: k, found: f.degree, expected: degree(k) });
        }
        require(f, mode)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LInfStructure {
    pub module: Arc<GradedModule>,
    brackets: BTreeMap<usize, ConfMap>,
}

impl LInfStructure {
    /// `l_k` must be skew-symmetric of degree `k - 2`; zero maps are dropped.
    pub fn new(module: Arc<GradedModule>, brackets: BTreeMap<usize, ConfMap>) -> Result<Self, LieError> {
        validate(&module, &brackets, |k| k as i32 - 2, SymMode::Skew)?;
        let brackets = brackets.into_iter().filter(|(_, f)| !f.is_zero()).collect();
        Ok(LInfStructure { module, brackets })
    }

    /// A Lie conformal algebra as an L∞-conformal algebra with only `l_2`.
    pub fn from_lie(l: &LieConfAlgebra) -> Self {
        Self::new(l.module.clone(), BTreeMap::from([(2, l.bracket.clone())])).expect("a λ-bracket is skew")
    }

    pub fn bracket(&self, k: usize) -> Option<&ConfMap> {
        self.brackets.get(&k)
    }

    pub fn brackets(&self) -> &BTreeMap<usize, ConfMap> {
        &self.brackets
    }

    pub fn max_arity(&self) -> usize {
        self.brackets.keys().copied().max().unwrap_or(0)
    }

    pub fn identity_bound(&self) -> usize {
        (2 * self.max_arity()).saturating_sub(1).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LInf1Structure {
    pub module: Arc<GradedModule>,
    brackets: BTreeMap<usize, ConfMap>,
}

impl LInf1Structure {
    /// `ϱ_k` must be graded symmetric of degree `-1`; zero maps are dropped.
    pub fn new(module: Arc<GradedModule>, brackets: BTreeMap<usize, ConfMap>) -> Result<Self, LieError> {
        validate(&module, &brackets, |_| -1, SymMode::Sym)?;
        let brackets = brackets.into_iter().filter(|(_, f)| !f.is_zero()).collect();
        Ok(LInf1Structure { module, brackets })
    }

    pub fn bracket(&self, k: usize) -> Option<&ConfMap> {
        self.brackets.get(&k)
    }

    pub fn brackets(&self) -> &BTreeMap<usize, ConfMap> {
        &self.brackets
    }

    pub fn as_cochain(&self) -> CsCochain {
        CsCochain::new(self.module.clone(), -1, self.brackets.values().cloned().collect()).expect("degree -1 maps")
    }

    pub fn max_arity(&self) -> usize {
        self.brackets.keys().copied().max().unwrap_or(0)
    }
}

/// Left side of the `n`-th higher conformal Jacobi identity, with signs
/// `sgn(σ) ε(σ) (-1)^{q(p-1)}`.
pub fn linf_defect(s: &LInfStructure, n: usize) -> ConfMap {
    let mut pairs = Vec::new();
    for (&p, outer) in &s.brackets {
        if let Some(inner) = s.brackets.get(&(n + 1).wrapping_sub(p)) {
            let q = inner.arity;
            pairs.push((outer, inner, parity((q * (p - 1)) as i64)));
        }
    }
    shuffle_sum(&s.module, &pairs, n, n as i32 - 3, SymMode::Skew, &all_tuples)
}

/// Left side of the `n`-th shifted identity, signs `ε(σ)` only.
pub fn linf1_defect(s: &LInf1Structure, n: usize) -> ConfMap {
    let mut pairs = Vec::new();
    for (&p, outer) in &s.brackets {
        if let Some(inner) = s.brackets.get(&(n + 1).wrapping_sub(p)) {
            pairs.push((outer, inner, 1));
        }
    }
    shuffle_sum(&s.module, &pairs, n, -2, SymMode::Sym, &all_tuples)
}

pub fn check_linf(s: &LInfStructure, up_to_n: usize) -> Report {
    for n in 1..=up_to_n {
        expect_zero(&linf_defect(s, n), format!("L∞ identity n={n}"))?;
    }
    Ok(())
}

pub fn check_linf1(s: &LInf1Structure, up_to_n: usize) -> Report {
    for n in 1..=up_to_n {
        expect_zero(&linf1_defect(s, n), format!("L∞[1] identity n={n}"))?;
    }
    Ok(())
}

/// `ϱ_k = (-1)^{k(k-1)/2} s ∘ l_k ∘ (s⁻¹)^{⊗k}`, with the same conventions
/// as the A∞ shift.
pub fn shift_linf(s: &LInfStructure) -> LInf1Structure {
    let w = Arc::new(s.module.degree_shift(1));
    let maps = s.brackets.iter().map(|(&k, f)| (k, shift_map(f, w.clone(), w.clone()))).collect();
    LInf1Structure::new(w, maps).expect("shifting turns skew maps into graded symmetric ones")
}

pub fn unshift_linf(s: &LInf1Structure) -> LInfStructure {
    let l = Arc::new(s.module.degree_shift(-1));
    let maps = s.brackets.iter().map(|(&k, f)| (k, unshift_map(f, l.clone(), l.clone()))).collect();
    LInfStructure::new(l, maps).expect("unshifting turns graded symmetric maps into skew ones")
}

/// `ϱ ⋄̄ τ = Σ_{σ ∈ Sh(l, k-1)} ε(σ) ϱ(τ(w_{σ(1)}, …, w_{σ(l)}), …)`.
pub fn sym_diamond(rho: &ConfMap, tau: &ConfMap) -> Result<ConfMap, LieError> {
    same_module(rho, tau)?;
    let n = rho.arity + tau.arity - 1;
    Ok(shuffle_sum(&rho.source, &[(rho, tau, 1)], n, rho.degree + tau.degree, SymMode::Sym, &all_tuples))
}

/// `{[ϱ, τ]} = Σ (ϱ_k ⋄̄ τ_l - (-1)^{mn} τ_l ⋄̄ ϱ_k)` on graded symmetric
/// cochains.
pub fn sym_gla_bracket(rho: &CsCochain, tau: &CsCochain) -> Result<CsCochain, LieError> {
    if rho.module != tau.module {
        return Err(LieError::ModuleMismatch("bracket of cochains on different modules".into()));
    }
    for f in rho.components().chain(tau.components()) {
        require(f, SymMode::Sym)?;
    }
    let sign = parity(rho.degree as i64 * tau.degree as i64);
    let mut out = CsCochain::zero(rho.module.clone(), rho.degree + tau.degree);
    for f in rho.components() {
        for g in tau.components() {
            out = out.add(&CsCochain::single(sym_diamond(f, g)?));
            out = out.add(&CsCochain::single(sym_diamond(g, f)?.scale_int(-sign)));
        }
    }
    Ok(out)
}

/// `l_k = Σ_σ sgn(σ) ε(σ) μ_k ∘ σ` with `λ_k ↦ λ_k†`.
pub fn skew_symmetrize_ainf(s: &AInfStructure) -> LInfStructure {
    let maps = s.mults().iter().map(|(&k, f)| (k, symmetrize(f, SymMode::Skew))).collect();
    LInfStructure::new(s.module.clone(), maps).expect("symmetrized maps are skew")
}

/// The 2-term L∞-conformal algebra on `L ⊕ M[-1]` with `l_2` the semidirect
/// bracket and `l_3 = θ` for a Lie 3-cocycle `θ`.
pub fn two_term_from_cocycle(m: &ConformalLModule, theta: &ConfMap) -> Result<LInfStructure, LieError> {
    let c = Cochain::Map(theta.clone());
    if theta.arity != 3 {
        return Err(LieError::CochainMismatch);
    }
    let d = lie_delta(m, &c)?;
    expect_zero(d.as_map().expect("δ of a map is a map"), "Lie 3-cocycle").map_err(LieError::Axiom)?;
    let e = Arc::new(GradedModule::new(
        m.ext
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| Generator { name: g.name.clone(), degree: if m.is_m(i) { 1 } else { 0 } })
            .collect(),
    )?);
    let l2 = m.product.with_modules(e.clone(), e.clone(), 0);
    let l3 = embed_cochain(m, theta).with_modules(e.clone(), e.clone(), 1);
    LInfStructure::new(e, BTreeMap::from([(2, l2), (3, l3)]))
}
