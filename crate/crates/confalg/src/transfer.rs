//! Contraction data, the operator `∂_{ρ₁}`, planar trees and homotopy
//! transfer of A∞[1]- and A∞-conformal structures.

use crate::ainf::{shift, shift_map, unshift, unshift_map, AInf1Structure, AInfError, AInfStructure};
use crate::confmap::{diamond, expect_zero, multi_insert, ConfMap, Failure, Inner, MapError, Report};
use crate::confmod::GradedModule;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransferError {
    #[error("bad contraction shape: {0}")]
    Shape(String),
    #[error("invalid contraction: {0}")]
    Contraction(Failure),
    #[error("transfer bound must be at least 2, got {0}")]
    Bound(usize),
    #[error("structure has no map of arity {0}")]
    MissingArity(usize),
    #[error("binary trees need a dg structure, found a map of arity {0}")]
    HigherMap(usize),
    #[error("the structure's differential differs from the contraction's")]
    Differential,
    #[error("a tree with one leaf has no map attached")]
    SingleLeaf,
    #[error("∂_ρ₁ needs arity at least 2, got {0}")]
    Arity(usize),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    AInf(#[from] AInfError),
}

/// `(V, ρ₁) ⇄ (W, θ₁)` with `p`, `i` and a homotopy `h` on `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub big: Arc<GradedModule>,
    pub rho1: ConfMap,
    pub small: Arc<GradedModule>,
    pub theta1: ConfMap,
    pub p: ConfMap,
    pub i: ConfMap,
    pub h: ConfMap,
}

fn shape(f: &ConfMap, name: &str, src: &Arc<GradedModule>, tgt: &Arc<GradedModule>, degree: i32) -> Result<(), TransferError> {
    if f.arity != 1 {
        return Err(TransferError::Shape(format!("{name} has arity {}", f.arity)));
    }
    if f.source != *src || f.target != *tgt {
        return Err(TransferError::Shape(format!("{name} has the wrong source or target")));
    }
    if f.degree != degree {
        return Err(TransferError::Shape(format!("{name} has degree {}, expected {degree}", f.degree)));
    }
    Ok(())
}

/// `f ∘ g` for an arity-1 map `f`.
pub fn compose(f: &ConfMap, g: &ConfMap) -> Result<ConfMap, MapError> {
    multi_insert(f, &[Inner::Map(g)])
}

impl Contraction {
    pub fn new(rho1: ConfMap, theta1: ConfMap, p: ConfMap, i: ConfMap, h: ConfMap) -> Result<Self, TransferError> {
        let big = rho1.source.clone();
        let small = theta1.source.clone();
        shape(&rho1, "ρ₁", &big, &big, -1)?;
        shape(&theta1, "θ₁", &small, &small, -1)?;
        shape(&p, "p", &big, &small, 0)?;
        shape(&i, "i", &small, &big, 0)?;
        shape(&h, "h", &big, &big, 1)?;
        Ok(Contraction { big, rho1, small, theta1, p, i, h })
    }

    /// `V = W`, `i = p = id`, `h = 0`.
    pub fn identity(rho1: ConfMap) -> Self {
        let v = rho1.source.clone();
        let id = ConfMap::identity(v.clone());
        Contraction {
            big: v.clone(),
            theta1: rho1.clone(),
            rho1,
            small: v.clone(),
            p: id.clone(),
            i: id,
            h: ConfMap::zero(v.clone(), v, 1, 1),
        }
    }

    /// The same data on the modules shifted up by one.
    pub fn shift(&self) -> Self {
        let v = Arc::new(self.big.degree_shift(1));
        let w = Arc::new(self.small.degree_shift(1));
        Contraction {
            rho1: shift_map(&self.rho1, v.clone(), v.clone()),
            theta1: shift_map(&self.theta1, w.clone(), w.clone()),
            p: shift_map(&self.p, v.clone(), w.clone()),
            i: shift_map(&self.i, w.clone(), v.clone()),
            h: shift_map(&self.h, v.clone(), v.clone()),
            big: v,
            small: w,
        }
    }

    pub fn unshift(&self) -> Self {
        let v = Arc::new(self.big.degree_shift(-1));
        let w = Arc::new(self.small.degree_shift(-1));
        Contraction {
            rho1: unshift_map(&self.rho1, v.clone(), v.clone()),
            theta1: unshift_map(&self.theta1, w.clone(), w.clone()),
            p: unshift_map(&self.p, v.clone(), w.clone()),
            i: unshift_map(&self.i, w.clone(), v.clone()),
            h: unshift_map(&self.h, v.clone(), v.clone()),
            big: v,
            small: w,
        }
    }
}

pub fn check_contraction(c: &Contraction) -> Report {
    let eval = |r: Result<ConfMap, MapError>| r.expect("contraction maps compose");
    expect_zero(&eval(compose(&c.rho1, &c.rho1)), "ρ₁² = 0")?;
    expect_zero(&eval(compose(&c.theta1, &c.theta1)), "θ₁² = 0")?;
    let pd = eval(compose(&c.p, &c.rho1)).sub(&eval(compose(&c.theta1, &c.p)));
    expect_zero(&pd, "p ρ₁ = θ₁ p")?;
    let id = eval(compose(&c.i, &c.theta1)).sub(&eval(compose(&c.rho1, &c.i)));
    expect_zero(&id, "i θ₁ = ρ₁ i")?;
    let homotopy = ConfMap::identity(c.big.clone())
        .sub(&eval(compose(&c.i, &c.p)))
        .sub(&eval(compose(&c.rho1, &c.h)))
        .sub(&eval(compose(&c.h, &c.rho1)));
    expect_zero(&homotopy, "id − ip = ρ₁h + hρ₁")?;
    expect_zero(&eval(compose(&c.p, &c.i)).sub(&ConfMap::identity(c.small.clone())), "pi = id")
}

/// `∂_{ρ₁}(f) = ρ₁ ⋄ f − (-1)^{|f|} f ⋄ ρ₁`.
pub fn partial_rho1(rho1: &ConfMap, f: &ConfMap) -> Result<ConfMap, TransferError> {
    if f.arity < 2 {
        return Err(TransferError::Arity(f.arity));
    }
    let left = diamond(rho1, f)?;
    let right = diamond(f, rho1)?;
    Ok(if f.degree.rem_euclid(2) == 0 { left.sub(&right) } else { left.add(&right) })
}

/// A planar rooted tree; internal vertices have at least two children.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

impl PlanarTree {
    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(ch) => ch.iter().map(|c| c.leaves()).sum(),
        }
    }

    pub fn internal_edges(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(ch) => ch.iter().map(|c| c.internal_edges() + usize::from(*c != PlanarTree::Leaf)).sum(),
        }
    }

    pub fn is_binary(&self) -> bool {
        match self {
            PlanarTree::Leaf => true,
            PlanarTree::Node(ch) => ch.len() == 2 && ch.iter().all(|c| c.is_binary()),
        }
    }

    fn arities(&self, out: &mut Vec<usize>) {
        if let PlanarTree::Node(ch) = self {
            out.push(ch.len());
            for c in ch {
                c.arities(out);
            }
        }
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => write!(f, "|"),
            PlanarTree::Node(ch) => {
                write!(f, "(")?;
                for (j, c) in ch.iter().enumerate() {
                    if j > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn compositions(k: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 1..=k - (parts - 1) {
        for mut rest in compositions(k - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Planar trees with `k` leaves; only binary ones if `binary`.
pub fn enumerate_trees(k: usize, binary: bool) -> Vec<PlanarTree> {
    assert!(k >= 1, "a tree has at least one leaf");
    if k == 1 {
        return vec![PlanarTree::Leaf];
    }
    let max_parts = if binary { 2 } else { k };
    let mut out = Vec::new();
    for parts in 2..=max_parts {
        for comp in compositions(k, parts) {
            let mut acc: Vec<Vec<PlanarTree>> = vec![vec![]];
            for &n in &comp {
                let subs = enumerate_trees(n, binary);
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        subs.iter().map(move |s| {
                            let mut v = prefix.clone();
                            v.push(s.clone());
                            v
                        })
                    })
                    .collect();
            }
            out.extend(acc.into_iter().map(PlanarTree::Node));
        }
    }
    out
}

/// `ρ_T = ρ_l((h∘ρ_{T_1}) ⊗ ⋯ ⊗ (h∘ρ_{T_l}))` with `h∘ρ_| = id`.
pub fn rho_tree(t: &PlanarTree, s: &AInf1Structure, h: &ConfMap) -> Result<ConfMap, TransferError> {
    let PlanarTree::Node(children) = t else {
        return Err(TransferError::SingleLeaf);
    };
    if h.source != s.module || h.target != s.module || h.arity != 1 {
        return Err(TransferError::Shape("h must be an arity-1 map on the structure's module".into()));
    }
    let rho = s.mult(children.len()).ok_or(TransferError::MissingArity(children.len()))?;
    let mut factors: Vec<Option<ConfMap>> = Vec::new();
    for c in children {
        factors.push(match c {
            PlanarTree::Leaf => None,
            PlanarTree::Node(_) => {
                let hr = compose(h, &rho_tree(c, s, h)?)?;
                debug_assert_eq!(hr.degree, h.degree - 1);
                Some(hr)
            }
        });
    }
    let inners: Vec<Inner> = factors.iter().map(|f| f.as_ref().map_or(Inner::Id, Inner::Map)).collect();
    Ok(multi_insert(rho, &inners)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeMode {
    Binary,
    General,
}

fn supported(t: &PlanarTree, s: &AInf1Structure) -> bool {
    let mut ar = Vec::new();
    t.arities(&mut ar);
    ar.iter().all(|a| s.mult(*a).is_some_and(|m| !m.is_zero()))
}

/// `θ_1` from the contraction and `θ_k = p ∘ ρ_k ∘ i^{⊗k}` for `2 ≤ k ≤ up_to`,
/// where `ρ_k` sums `ρ_T` over planar (or planar binary) trees with `k` leaves.
/// Trees whose vertices need a map the structure lacks contribute zero.
pub fn transfer(c: &Contraction, s: &AInf1Structure, up_to: usize, mode: TreeMode) -> Result<AInf1Structure, TransferError> {
    if up_to < 2 {
        return Err(TransferError::Bound(up_to));
    }
    if s.module != c.big {
        return Err(TransferError::Shape("structure lives on a different module".into()));
    }
    let d = s.mult(1).cloned().unwrap_or_else(|| ConfMap::zero(c.big.clone(), c.big.clone(), 1, -1));
    if d != c.rho1 {
        return Err(TransferError::Differential);
    }
    if mode == TreeMode::Binary {
        if let Some((&k, _)) = s.mults().iter().find(|(&k, m)| k > 2 && !m.is_zero()) {
            return Err(TransferError::HigherMap(k));
        }
    }
    check_contraction(c).map_err(TransferError::Contraction)?;
    let mut out = BTreeMap::new();
    if !c.theta1.is_zero() {
        out.insert(1, c.theta1.clone());
    }
    for k in 2..=up_to {
        let mut rho_k = ConfMap::zero(c.big.clone(), c.big.clone(), k, -1);
        for t in enumerate_trees(k, mode == TreeMode::Binary) {
            if supported(&t, s) {
                rho_k = rho_k.add(&rho_tree(&t, s, &c.h)?);
            }
        }
        let outer = compose(&c.p, &rho_k)?;
        let theta = multi_insert(&outer, &vec![Inner::Map(&c.i); k])?;
        if !theta.is_zero() {
            out.insert(k, theta);
        }
    }
    Ok(AInf1Structure::new(c.small.clone(), out)?)
}

/// Transfer of an A∞ structure along a contraction of `(A, μ₁)` onto
/// `(H, ν₁)`: shift, transfer, unshift.
pub fn transfer_ainf(c: &Contraction, s: &AInfStructure, up_to: usize, mode: TreeMode) -> Result<AInfStructure, TransferError> {
    let shifted = transfer(&c.shift(), &shift(s), up_to, mode)?;
    Ok(unshift(&shifted))
}
