//! Conformal sesquilinear maps stored by structure constants, and the
//! operations built on them: evaluation, insertion, permutation and
//! (skew-)symmetrization.
//!
//! Every composite is computed by evaluating an expression [`Tree`] on a
//! generator tuple. Position `j < p` of a `p`-tuple carries `λ_j = L_j`;
//! the last position carries `λ_p = -D - (L_1 + … + L_{p-1})`. A map whose
//! slots receive subtrees with λ-sums `Λ_1, …, Λ_k` has its table value
//! substituted by `L_j ↦ Λ_j` and `D ↦ -(Λ_1 + … + Λ_k)`; this single rule
//! covers both sesquilinearity identities and all λ† bookkeeping.

use crate::confmod::{GradedModule, ModElement, PolyValue};
use crate::polyring::{rat, Poly, Var};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("expected {expected} arguments, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("argument {0} is not homogeneous")]
    Inhomogeneous(usize),
    #[error("slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("module mismatch: {0}")]
    ModuleMismatch(String),
    #[error("value on ({tuple}) has generator `{gen}` of degree {found}, expected {expected}")]
    DegreeMismatch { tuple: String, gen: String, found: i32, expected: i32 },
    #[error("value on ({tuple}) uses L{index}, but only L1..L{max} are available")]
    LambdaOutOfRange { tuple: String, index: usize, max: usize },
    #[error("map is not {0}")]
    NotSymmetric(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymMode {
    Skew,
    Sym,
}

impl fmt::Display for SymMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymMode::Skew => "skew-symmetric",
            SymMode::Sym => "symmetric",
        })
    }
}

/// A k-ary conformal sesquilinear map of degree `g`, determined by its values
/// on generator tuples. Zero values are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfMap {
    pub source: Arc<GradedModule>,
    pub target: Arc<GradedModule>,
    pub arity: usize,
    pub degree: i32,
    table: BTreeMap<Vec<usize>, ModElement>,
}

/// First generator tuple on which a map is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub tuple: Vec<String>,
    pub value: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) ↦ {}", self.tuple.join(", "), self.value)
    }
}

/// A failed identity check: which identity, and where it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub check: String,
    pub witness: Witness,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {}", self.check, self.witness)
    }
}

/// Outcome of an identity check.
pub type Report = Result<(), Failure>;

/// `Ok` if `defect` vanishes, otherwise its first nonzero entry.
pub fn expect_zero(defect: &ConfMap, check: impl Into<String>) -> Report {
    match defect.witness() {
        None => Ok(()),
        Some(witness) => Err(Failure { check: check.into(), witness }),
    }
}

impl ConfMap {
    pub fn zero(source: Arc<GradedModule>, target: Arc<GradedModule>, arity: usize, degree: i32) -> Self {
        assert!(arity >= 1, "arity must be at least 1");
        ConfMap { source, target, arity, degree, table: BTreeMap::new() }
    }

    pub fn identity(m: Arc<GradedModule>) -> Self {
        let mut f = ConfMap::zero(m.clone(), m.clone(), 1, 0);
        for g in 0..m.rank() {
            f.table.insert(vec![g], ModElement::generator(g));
        }
        f
    }

    /// Store a value after checking degrees and λ range.
    pub fn set(&mut self, tuple: Vec<usize>, value: ModElement) -> Result<(), MapError> {
        if tuple.len() != self.arity {
            return Err(MapError::WrongArity { expected: self.arity, got: tuple.len() });
        }
        let expected = self.source.tuple_degree(&tuple) + self.degree;
        let tname = || self.tuple_names(&tuple).join(", ");
        for (g, p) in &value.coords {
            let found = self.target.degree(*g);
            if found != expected {
                return Err(MapError::DegreeMismatch { tuple: tname(), gen: self.target.name(*g).into(), found, expected });
            }
            if p.max_l_index() >= self.arity {
                return Err(MapError::LambdaOutOfRange { tuple: tname(), index: p.max_l_index(), max: self.arity - 1 });
            }
        }
        self.set_unchecked(tuple, value);
        Ok(())
    }

    fn set_unchecked(&mut self, tuple: Vec<usize>, value: ModElement) {
        if value.is_zero() {
            self.table.remove(&tuple);
        } else {
            self.table.insert(tuple, value);
        }
    }

    /// Build a map from its values on all generator tuples.
    pub fn build(
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
        arity: usize,
        degree: i32,
        mut f: impl FnMut(&[usize]) -> ModElement,
    ) -> Self {
        let mut out = ConfMap::zero(source.clone(), target, arity, degree);
        for t in tuples(source.rank(), arity) {
            let v = f(&t);
            out.set_unchecked(t, v);
        }
        out
    }

    /// Like [`ConfMap::build`], visiting only tuples accepted by `keep`.
    pub fn build_filtered(
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
        arity: usize,
        degree: i32,
        keep: impl Fn(&[usize]) -> bool,
        mut f: impl FnMut(&[usize]) -> ModElement,
    ) -> Self {
        let mut out = ConfMap::zero(source.clone(), target, arity, degree);
        for t in tuples(source.rank(), arity) {
            if keep(&t) {
                let v = f(&t);
                out.set_unchecked(t, v);
            }
        }
        out
    }

    pub fn get(&self, tuple: &[usize]) -> Option<&ModElement> {
        self.table.get(tuple)
    }

    pub fn value(&self, tuple: &[usize]) -> ModElement {
        self.table.get(tuple).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &ModElement)> {
        self.table.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.table.len()
    }

    /// Largest degree of any table polynomial in `v`.
    pub fn max_degree_in(&self, v: Var) -> u32 {
        self.table.values().flat_map(|e| e.coords.values()).map(|p| p.degree_in(v)).max().unwrap_or(0)
    }

    pub fn tuple_names(&self, tuple: &[usize]) -> Vec<String> {
        tuple.iter().map(|&g| self.source.name(g).to_string()).collect()
    }

    pub fn witness(&self) -> Option<Witness> {
        self.table.iter().next().map(|(t, v)| Witness { tuple: self.tuple_names(t), value: v.render(&self.target) })
    }

    fn assert_compatible(&self, other: &ConfMap) {
        assert!(
            self.arity == other.arity && self.source == other.source && self.target == other.target,
            "incompatible maps"
        );
    }

    pub fn add(&self, other: &ConfMap) -> ConfMap {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (t, v) in &other.table {
            let sum = out.value(t).add(v);
            out.set_unchecked(t.clone(), sum);
        }
        out
    }

    pub fn sub(&self, other: &ConfMap) -> ConfMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ConfMap {
        self.scale_int(-1)
    }

    pub fn scale_int(&self, n: i64) -> ConfMap {
        let c = Poly::constant(rat(n));
        let mut out = ConfMap::zero(self.source.clone(), self.target.clone(), self.arity, self.degree);
        for (t, v) in &self.table {
            out.set_unchecked(t.clone(), v.mul_poly(&c));
        }
        out
    }

    /// Same table, viewed with a different degree (used when shifting).
    pub fn with_modules(&self, source: Arc<GradedModule>, target: Arc<GradedModule>, degree: i32) -> ConfMap {
        ConfMap { source, target, arity: self.arity, degree, table: self.table.clone() }
    }

    /// Multiply each entry by a sign depending on its tuple.
    pub fn map_entries(&self, f: impl Fn(&[usize], &ModElement) -> ModElement) -> ConfMap {
        let mut out = ConfMap::zero(self.source.clone(), self.target.clone(), self.arity, self.degree);
        for (t, v) in &self.table {
            out.set_unchecked(t.clone(), f(t, v));
        }
        out
    }

    /// Re-express along index maps into larger modules (e.g. direct summands).
    pub fn embed(
        &self,
        source: Arc<GradedModule>,
        src_map: &[usize],
        target: Arc<GradedModule>,
        tgt_map: &[usize],
    ) -> ConfMap {
        let mut out = ConfMap::zero(source, target, self.arity, self.degree);
        for (t, v) in &self.table {
            let t2 = t.iter().map(|&g| src_map[g]).collect();
            let v2 = ModElement { coords: v.coords.iter().map(|(g, p)| (tgt_map[*g], p.clone())).collect() };
            out.set_unchecked(t2, v2);
        }
        out
    }

    /// Restrict to tuples inside `src_map`'s image and targets inside
    /// `tgt_map`'s image, re-indexed to the smaller modules. Values leaving
    /// the target image are reported as an error.
    pub fn restrict(
        &self,
        source: Arc<GradedModule>,
        src_map: &[usize],
        target: Arc<GradedModule>,
        tgt_map: &[usize],
    ) -> Result<ConfMap, MapError> {
        let inv_src: HashMap<usize, usize> = src_map.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let inv_tgt: HashMap<usize, usize> = tgt_map.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut out = ConfMap::zero(source, target, self.arity, self.degree);
        for (t, v) in &self.table {
            let Some(t2) = t.iter().map(|g| inv_src.get(g).copied()).collect::<Option<Vec<_>>>() else {
                continue;
            };
            let mut v2 = ModElement::zero();
            for (g, p) in &v.coords {
                match inv_tgt.get(g) {
                    Some(&h) => v2.add_term(h, p),
                    None => {
                        return Err(MapError::ModuleMismatch(format!(
                            "value on ({}) leaves the target summand via `{}`",
                            self.tuple_names(t).join(", "),
                            self.target.name(*g)
                        )))
                    }
                }
            }
            out.set_unchecked(t2, v2);
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        if self.table.is_empty() {
            return "0".into();
        }
        self.table
            .iter()
            .map(|(t, v)| format!("({}) ↦ {}", self.tuple_names(t).join(", "), v.render(&self.target)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// All tuples in `{0..rank}^len`, lexicographic.
pub fn tuples(rank: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * rank);
        for t in &out {
            for g in 0..rank {
                let mut t2 = t.clone();
                t2.push(g);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// λ assignment for a `p`-tuple: `L_1, …, L_{p-1}, -D - ΣL`.
pub fn position_lambdas(p: usize) -> Vec<Poly> {
    let mut out: Vec<Poly> = (1..p).map(Poly::l).collect();
    out.push(-(Poly::d() + Poly::l_sum(1, p - 1)));
    out
}

/// An expression built from maps with leaves at tuple positions (0-based).
#[derive(Debug, Clone)]
pub enum Tree<'a> {
    Leaf(usize),
    Node(&'a ConfMap, Vec<Tree<'a>>),
}

impl<'a> Tree<'a> {
    pub fn node(f: &'a ConfMap, children: Vec<Tree<'a>>) -> Self {
        assert_eq!(f.arity, children.len(), "tree node arity mismatch");
        Tree::Node(f, children)
    }

    /// `f(x_{pos[0]}, …)` with plain leaves.
    pub fn corolla(f: &'a ConfMap, positions: &[usize]) -> Self {
        Tree::node(f, positions.iter().map(|&p| Tree::Leaf(p)).collect())
    }

    pub fn leaves(&self) -> Vec<usize> {
        match self {
            Tree::Leaf(p) => vec![*p],
            Tree::Node(_, ch) => ch.iter().flat_map(|c| c.leaves()).collect(),
        }
    }
}

struct PlanNode<'a> {
    map: &'a ConfMap,
    children: Vec<PlanChild>,
    leaves: Vec<usize>,
    subst: HashMap<Var, Poly>,
    powers: RefCell<HashMap<(Var, u32), Poly>>,
}

enum PlanChild {
    Leaf(usize),
    Node(usize),
}

/// A [`Tree`] prepared for repeated evaluation on `p`-tuples; substituted
/// table values are cached since they do not depend on the tuple.
pub struct Plan<'a> {
    nodes: Vec<PlanNode<'a>>,
    root: PlanChild,
    cache: RefCell<HashMap<(usize, Vec<usize>), ModElement>>,
    values: RefCell<HashMap<(usize, Vec<usize>), ModElement>>,
}

impl<'a> Plan<'a> {
    pub fn new(tree: &Tree<'a>, p: usize) -> Self {
        let lams = position_lambdas(p);
        let mut nodes = Vec::new();
        let root = Self::compile(tree, &lams, &mut nodes).0;
        Plan { nodes, root, cache: RefCell::new(HashMap::new()), values: RefCell::new(HashMap::new()) }
    }

    fn compile(tree: &Tree<'a>, lams: &[Poly], nodes: &mut Vec<PlanNode<'a>>) -> (PlanChild, Poly) {
        match tree {
            Tree::Leaf(pos) => (PlanChild::Leaf(*pos), lams[*pos].clone()),
            Tree::Node(f, ch) => {
                let mut children = Vec::new();
                let mut sums = Vec::new();
                for c in ch {
                    let (pc, s) = Self::compile(c, lams, nodes);
                    children.push(pc);
                    sums.push(s);
                }
                let total = sums.iter().fold(Poly::zero(), |a, s| &a + s);
                let mut subst: HashMap<Var, Poly> =
                    sums.iter().take(f.arity - 1).enumerate().map(|(j, s)| (Var::L(j + 1), s.clone())).collect();
                subst.insert(Var::D, -&total);
                nodes.push(PlanNode { map: f, children, leaves: tree.leaves(), subst, powers: RefCell::default() });
                (PlanChild::Node(nodes.len() - 1), total)
            }
        }
    }

    pub fn eval(&self, gens: &[usize]) -> ModElement {
        self.eval_child(&self.root, gens)
    }

    fn eval_child(&self, c: &PlanChild, gens: &[usize]) -> ModElement {
        match c {
            PlanChild::Leaf(pos) => ModElement::generator(gens[*pos]),
            PlanChild::Node(i) => self.eval_node(*i, gens),
        }
    }

    /// Subtree values depend only on the generators at their leaves.
    fn eval_node(&self, idx: usize, gens: &[usize]) -> ModElement {
        let key = (idx, self.nodes[idx].leaves.iter().map(|&p| gens[p]).collect::<Vec<_>>());
        if let Some(v) = self.values.borrow().get(&key) {
            return v.clone();
        }
        let v = self.compute_node(idx, gens);
        self.values.borrow_mut().insert(key, v.clone());
        v
    }

    fn compute_node(&self, idx: usize, gens: &[usize]) -> ModElement {
        let node = &self.nodes[idx];
        let vals: Vec<ModElement> = node.children.iter().map(|c| self.eval_child(c, gens)).collect();
        if vals.iter().any(|v| v.is_zero()) {
            return ModElement::zero();
        }
        let mut out = ModElement::zero();
        let supports: Vec<Vec<(&usize, &Poly)>> = vals.iter().map(|v| v.coords.iter().collect()).collect();
        let mut choice = vec![0usize; supports.len()];
        loop {
            let key: Vec<usize> = choice.iter().zip(&supports).map(|(&c, s)| *s[c].0).collect();
            if let Some(entry) = node.map.get(&key) {
                let coeff = choice.iter().zip(&supports).fold(Poly::one(), |acc, (&c, s)| &acc * s[c].1);
                let mut cache = self.cache.borrow_mut();
                let subbed =
                    cache.entry((idx, key)).or_insert_with(|| {
                    let mut powers = node.powers.borrow_mut();
                    let mut out = ModElement::zero();
                    for (g, p) in &entry.coords {
                        out.add_term(*g, &p.substitute_cached(&node.subst, &mut powers));
                    }
                    out
                });
                for (g, p) in &subbed.coords {
                    if coeff.is_one() {
                        out.add_term(*g, p);
                    } else {
                        out.add_term(*g, &(p * &coeff));
                    }
                }
            }
            // advance the mixed-radix counter
            let mut j = 0;
            loop {
                if j == choice.len() {
                    return out;
                }
                choice[j] += 1;
                if choice[j] < supports[j].len() {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
        }
    }
}

/// Sum of `sign(tuple) · tree(tuple)` over several trees, as a map.
pub fn build_from_trees(
    source: Arc<GradedModule>,
    target: Arc<GradedModule>,
    arity: usize,
    degree: i32,
    terms: &[(Tree<'_>, &dyn Fn(&[usize]) -> i64)],
    keep: &dyn Fn(&[usize]) -> bool,
) -> ConfMap {
    let plans: Vec<Plan> = terms.iter().map(|(t, _)| Plan::new(t, arity)).collect();
    ConfMap::build_filtered(source, target, arity, degree, keep, |tuple| {
        let mut acc = ModElement::zero();
        for (plan, (_, sign)) in plans.iter().zip(terms) {
            let s = sign(tuple);
            if s == 0 {
                continue;
            }
            let v = plan.eval(tuple);
            acc = if s == 1 { acc.add(&v) } else { acc.add(&v.mul_poly(&Poly::int(s))) };
        }
        acc
    })
}

pub fn all_tuples(_: &[usize]) -> bool {
    true
}

/// Multilinear, sesquilinear extension of `f` to arbitrary arguments.
pub fn evaluate(f: &ConfMap, args: &[ModElement]) -> Result<PolyValue, MapError> {
    let k = f.arity;
    if args.len() != k {
        return Err(MapError::WrongArity { expected: k, got: args.len() });
    }
    for (j, a) in args.iter().enumerate() {
        if !a.is_homogeneous(&f.source) {
            return Err(MapError::Inhomogeneous(j + 1));
        }
    }
    let total_l = Poly::l_sum(1, k - 1);
    let scalars: Vec<Vec<(usize, Poly)>> = args
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let sub = if j + 1 < k { -Poly::l(j + 1) } else { Poly::d() + total_l.clone() };
            a.coords.iter().map(|(g, p)| (*g, p.substitute(Var::D, &sub))).collect()
        })
        .collect();
    let mut out = ModElement::zero();
    for t in tuples_from(&scalars) {
        let key: Vec<usize> = t.iter().map(|(g, _)| *g).collect();
        if let Some(v) = f.get(&key) {
            let c = t.iter().fold(Poly::one(), |acc, (_, p)| &acc * p);
            out = out.add(&v.mul_poly(&c));
        }
    }
    Ok(PolyValue::new(k, out))
}

fn tuples_from<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![vec![]];
    for c in choices {
        let mut next = Vec::new();
        for t in &out {
            for x in c {
                let mut t2 = t.clone();
                t2.push(x.clone());
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// One block of a simultaneous insertion.
#[derive(Debug, Clone, Copy)]
pub enum Inner<'a> {
    Id,
    Map(&'a ConfMap),
}

impl Inner<'_> {
    fn arity(&self) -> usize {
        match self {
            Inner::Id => 1,
            Inner::Map(g) => g.arity,
        }
    }

    fn degree(&self) -> i32 {
        match self {
            Inner::Id => 0,
            Inner::Map(g) => g.degree,
        }
    }
}

/// `f ∘ (g_1 ⊗ … ⊗ g_k)` with Koszul signs `(-1)^{|g_j|(|v_1| + … )}` over the
/// inputs preceding block `j`.
pub fn multi_insert(f: &ConfMap, inners: &[Inner<'_>]) -> Result<ConfMap, MapError> {
    if inners.len() != f.arity {
        return Err(MapError::WrongArity { expected: f.arity, got: inners.len() });
    }
    let mut source: Option<Arc<GradedModule>> = None;
    for inner in inners {
        let s = match inner {
            Inner::Id => f.source.clone(),
            Inner::Map(g) => {
                if g.target != f.source {
                    return Err(MapError::ModuleMismatch("inner target differs from outer source".into()));
                }
                g.source.clone()
            }
        };
        match &source {
            None => source = Some(s),
            Some(prev) if *prev != s => return Err(MapError::ModuleMismatch("inner sources differ".into())),
            _ => {}
        }
    }
    let source = source.expect("arity ≥ 1");
    let mut children = Vec::new();
    let mut starts = Vec::new();
    let mut pos = 0;
    for inner in inners {
        starts.push(pos);
        match inner {
            Inner::Id => children.push(Tree::Leaf(pos)),
            Inner::Map(g) => children.push(Tree::corolla(g, &(pos..pos + g.arity).collect::<Vec<_>>())),
        }
        pos += inner.arity();
    }
    let p = pos;
    let degree = f.degree + inners.iter().map(|i| i.degree()).sum::<i32>();
    let src = source.clone();
    let degs: Vec<i32> = inners.iter().map(|i| i.degree()).collect();
    let sign = move |t: &[usize]| -> i64 {
        let mut e = 0i64;
        for (j, &d) in degs.iter().enumerate() {
            if d % 2 != 0 {
                e += src.tuple_degree(&t[..starts[j]]) as i64;
            }
        }
        if e.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    };
    let tree = Tree::node(f, children);
    Ok(build_from_trees(source, f.target.clone(), p, degree, &[(tree, &sign)], &all_tuples))
}

/// `f ∘_i g` (1-based slot) with sign `(-1)^{|g|(|v_1| + … + |v_{i-1}|)}`.
pub fn insert(f: &ConfMap, i: usize, g: &ConfMap) -> Result<ConfMap, MapError> {
    if i == 0 || i > f.arity {
        return Err(MapError::SlotOutOfRange { slot: i, arity: f.arity });
    }
    if g.source != f.source || g.target != f.source {
        return Err(MapError::ModuleMismatch("insert needs inner and outer on one module".into()));
    }
    let inners: Vec<Inner> = (1..=f.arity).map(|j| if j == i { Inner::Map(g) } else { Inner::Id }).collect();
    multi_insert(f, &inners)
}

/// `f ⋄ g = Σ_i f ∘_i g`.
pub fn diamond(f: &ConfMap, g: &ConfMap) -> Result<ConfMap, MapError> {
    let mut acc: Option<ConfMap> = None;
    for i in 1..=f.arity {
        let t = insert(f, i, g)?;
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t),
        });
    }
    Ok(acc.expect("arity ≥ 1"))
}

/// A permutation of `{0..k}` in one-line notation: position `j` receives
/// the argument originally at `sigma[j]`.
pub type Perm = Vec<usize>;

pub fn permutations(k: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// `(p, q)`-shuffles of `{0..p+q}`: increasing on the first `p` and on the
/// last `q` positions.
pub fn shuffles(p: usize, q: usize) -> Vec<Perm> {
    let n = p + q;
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize != p {
            continue;
        }
        let first: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let rest: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
        out.push(first.into_iter().chain(rest).collect());
    }
    out.sort();
    out
}

pub fn perm_sign(sigma: &[usize]) -> i64 {
    let mut inv = 0;
    for a in 0..sigma.len() {
        for b in a + 1..sigma.len() {
            if sigma[a] > sigma[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Koszul sign of reordering `(x_0, …)` into `(x_{σ(0)}, …)` for elements of
/// the given degrees: one factor `(-1)^{|x||y|}` per pair that changes order.
pub fn koszul_sign(sigma: &[usize], degrees: &[i32]) -> i64 {
    let mut e = 0i64;
    for a in 0..sigma.len() {
        for b in a + 1..sigma.len() {
            if sigma[a] > sigma[b] {
                e += (degrees[sigma[a]] as i64) * (degrees[sigma[b]] as i64);
            }
        }
    }
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The permutation `j ↦ τ(σ(j))`, so that
/// `permute(permute(f, σ), τ) = permute(f, compose_perm(σ, τ))`.
pub fn compose_perm(sigma: &[usize], tau: &[usize]) -> Perm {
    sigma.iter().map(|&s| tau[s]).collect()
}

/// `(permute f σ)(x_1, …, x_k) = f(x_{σ(1)}, …, x_{σ(k)})` with λ†
/// bookkeeping and no signs.
pub fn permute(f: &ConfMap, sigma: &[usize]) -> ConfMap {
    assert_eq!(sigma.len(), f.arity, "permutation size mismatch");
    let tree = Tree::corolla(f, sigma);
    build_from_trees(f.source.clone(), f.target.clone(), f.arity, f.degree, &[(tree, &|_: &[usize]| 1)], &all_tuples)
}

fn sym_sign(mode: SymMode, sigma: &[usize], source: &GradedModule, tuple: &[usize]) -> i64 {
    let degs: Vec<i32> = tuple.iter().map(|&g| source.degree(g)).collect();
    let eps = koszul_sign(sigma, &degs);
    match mode {
        SymMode::Skew => perm_sign(sigma) * eps,
        SymMode::Sym => eps,
    }
}

/// `Σ_σ [sgn σ] ε(σ) permute(f, σ)`, without a `1/k!`.
pub fn symmetrize(f: &ConfMap, mode: SymMode) -> ConfMap {
    let perms = permutations(f.arity);
    let src = f.source.clone();
    let signs: Vec<Box<dyn Fn(&[usize]) -> i64>> = perms
        .iter()
        .map(|s| {
            let s = s.clone();
            let src = src.clone();
            Box::new(move |t: &[usize]| sym_sign(mode, &s, &src, t)) as Box<dyn Fn(&[usize]) -> i64>
        })
        .collect();
    let terms: Vec<(Tree, &dyn Fn(&[usize]) -> i64)> =
        perms.iter().zip(&signs).map(|(s, sg)| (Tree::corolla(f, s), sg.as_ref())).collect();
    build_from_trees(f.source.clone(), f.target.clone(), f.arity, f.degree, &terms, &all_tuples)
}

/// Checks `f = [sgn τ] ε(τ) permute(f, τ)` for all adjacent transpositions.
pub fn is_symmetric(f: &ConfMap, mode: SymMode) -> bool {
    symmetry_defect(f, mode).is_none()
}

/// First adjacent transposition (0-based `i` swapping `i, i+1`) that fails,
/// with the nonzero difference.
pub fn symmetry_defect(f: &ConfMap, mode: SymMode) -> Option<(usize, Witness)> {
    for i in 0..f.arity.saturating_sub(1) {
        let mut tau: Perm = (0..f.arity).collect();
        tau.swap(i, i + 1);
        let src = f.source.clone();
        let t2 = tau.clone();
        let sign = move |t: &[usize]| sym_sign(mode, &t2, &src, t);
        let moved = build_from_trees(
            f.source.clone(),
            f.target.clone(),
            f.arity,
            f.degree,
            &[(Tree::corolla(f, &tau), &sign)],
            &all_tuples,
        );
        let diff = f.sub(&moved);
        if let Some(w) = diff.witness() {
            return Some((i, w));
        }
    }
    None
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::confmod::Generator;
    use rand::Rng;

    pub fn vir_module() -> Arc<GradedModule> {
        Arc::new(GradedModule::ungraded(&["l"]).unwrap())
    }

    pub fn vir_bracket() -> ConfMap {
        let m = vir_module();
        let mut f = ConfMap::zero(m.clone(), m, 2, 0);
        f.set(vec![0, 0], ModElement::term(0, "D + 2*L1".parse().unwrap())).unwrap();
        f
    }

    pub fn graded_module(degs: &[i32]) -> Arc<GradedModule> {
        Arc::new(
            GradedModule::new(
                degs.iter().enumerate().map(|(i, d)| Generator { name: format!("g{i}"), degree: *d }).collect(),
            )
            .unwrap(),
        )
    }

    /// Random map with small integer coefficients, D- and λ-degree ≤ `deg`.
    pub fn random_map(rng: &mut impl Rng, m: &Arc<GradedModule>, arity: usize, degree: i32, deg: u32) -> ConfMap {
        ConfMap::build(m.clone(), m.clone(), arity, degree, |t| {
            let want = m.tuple_degree(t) + degree;
            let mut v = ModElement::zero();
            for g in m.indices_of_degree(want) {
                if rng.gen_bool(0.3) {
                    continue;
                }
                let mut p = Poly::zero();
                for _ in 0..rng.gen_range(1..=3) {
                    let mut mono = Poly::int(rng.gen_range(-3..=3));
                    mono = &mono * &Poly::d().pow(rng.gen_range(0..=deg));
                    for j in 1..arity {
                        mono = &mono * &Poly::l(j).pow(rng.gen_range(0..=deg));
                    }
                    p += mono;
                }
                v.add_term(g, &p);
            }
            v
        })
    }
}
