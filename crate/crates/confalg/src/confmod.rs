//! Free graded ℂ[∂]-modules of finite rank, their elements and λ-valued elements.

use crate::polyring::{Poly, Var};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("coordinate of `{0}` must be a polynomial in D only")]
    NotInD(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
}

/// A free ℂ[∂]-module with an ordered, named, graded basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GradedModule {
    gens: Vec<Generator>,
}

impl GradedModule {
    pub fn new(gens: Vec<Generator>) -> Result<Self, ModuleError> {
        let mut seen = HashSet::new();
        for g in &gens {
            if !seen.insert(g.name.as_str()) {
                return Err(ModuleError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(GradedModule { gens })
    }

    /// Module concentrated in degree 0.
    pub fn ungraded<S: AsRef<str>>(names: &[S]) -> Result<Self, ModuleError> {
        Self::new(names.iter().map(|n| Generator { name: n.as_ref().to_string(), degree: 0 }).collect())
    }

    pub fn from_components(components: &BTreeMap<i32, Vec<String>>) -> Result<Self, ModuleError> {
        let gens = components
            .iter()
            .flat_map(|(d, names)| names.iter().map(move |n| Generator { name: n.clone(), degree: *d }))
            .collect();
        Self::new(gens)
    }

    pub fn components(&self) -> BTreeMap<i32, Vec<String>> {
        let mut out: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for g in &self.gens {
            out.entry(g.degree).or_default().push(g.name.clone());
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn degree(&self, idx: usize) -> i32 {
        self.gens[idx].degree
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.gens[idx].name
    }

    pub fn index_of(&self, name: &str) -> Result<usize, ModuleError> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| ModuleError::UnknownGenerator(name.to_string()))
    }

    pub fn indices_of_degree(&self, d: i32) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.gens[i].degree == d).collect()
    }

    /// Every degree raised by `s`.
    pub fn degree_shift(&self, s: i32) -> GradedModule {
        GradedModule {
            gens: self.gens.iter().map(|g| Generator { name: g.name.clone(), degree: g.degree + s }).collect(),
        }
    }

    /// `self ⊕ other`; `other`'s generators come after `self`'s, and a clashing
    /// name gets `'` appended until it is free.
    pub fn direct_sum(&self, other: &GradedModule) -> GradedModule {
        let mut gens = self.gens.clone();
        let mut taken: HashSet<String> = gens.iter().map(|g| g.name.clone()).collect();
        for g in &other.gens {
            let mut name = g.name.clone();
            while taken.contains(&name) {
                name.push('\'');
            }
            taken.insert(name.clone());
            gens.push(Generator { name, degree: g.degree });
        }
        GradedModule { gens }
    }

    /// Sum of degrees of a generator tuple.
    pub fn tuple_degree(&self, tuple: &[usize]) -> i32 {
        tuple.iter().map(|&g| self.degree(g)).sum()
    }
}

impl fmt::Display for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components()
            .iter()
            .map(|(d, names)| format!("{d}: [{}]", names.join(", ")))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Element of a free module: generator index → coefficient polynomial.
///
/// For a plain module element the coefficients involve only `D`; inside a
/// λ-valued context ([`PolyValue`]) they may also involve `L1, …, L_{k-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ModElement {
    pub coords: BTreeMap<usize, Poly>,
}

impl ModElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(idx: usize) -> Self {
        Self::term(idx, Poly::one())
    }

    pub fn term(idx: usize, p: Poly) -> Self {
        let mut e = Self::zero();
        e.add_term(idx, &p);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add_term(&mut self, idx: usize, p: &Poly) {
        if p.is_zero() {
            return;
        }
        let slot = self.coords.entry(idx).or_default();
        *slot += p;
        if slot.is_zero() {
            self.coords.remove(&idx);
        }
    }

    pub fn add(&self, other: &ModElement) -> ModElement {
        let mut out = self.clone();
        for (i, p) in &other.coords {
            out.add_term(*i, p);
        }
        out
    }

    pub fn neg(&self) -> ModElement {
        ModElement { coords: self.coords.iter().map(|(i, p)| (*i, -p)).collect() }
    }

    pub fn sub(&self, other: &ModElement) -> ModElement {
        self.add(&other.neg())
    }

    pub fn mul_poly(&self, q: &Poly) -> ModElement {
        let mut out = ModElement::zero();
        for (i, p) in &self.coords {
            out.add_term(*i, &(p * q));
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> ModElement {
        let mut out = ModElement::zero();
        for (i, p) in &self.coords {
            out.add_term(*i, &f(p));
        }
        out
    }

    /// The common degree of all occurring generators (`None` if empty or mixed).
    pub fn degree(&self, m: &GradedModule) -> Option<i32> {
        let mut it = self.coords.keys().map(|&i| m.degree(i));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self, m: &GradedModule) -> bool {
        self.is_zero() || self.degree(m).is_some()
    }

    /// Check every coordinate is a polynomial in `D` alone.
    pub fn check_plain(&self, m: &GradedModule) -> Result<(), ModuleError> {
        for (i, p) in &self.coords {
            if p.max_l_index() > 0 {
                return Err(ModuleError::NotInD(m.name(*i).to_string()));
            }
        }
        Ok(())
    }

    pub fn render(&self, m: &GradedModule) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coords
            .iter()
            .map(|(i, p)| format!("({p})*{}", m.name(*i)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// ∂ acting on an element: every coordinate multiplied by `D`.
pub fn apply_partial(m: &ModElement) -> ModElement {
    m.mul_poly(&Poly::var(Var::D))
}

/// Element of `M[λ1, …, λ_{k-1}]` for a k-ary context.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyValue {
    pub arity: usize,
    pub value: ModElement,
}

impl PolyValue {
    pub fn new(arity: usize, value: ModElement) -> Self {
        debug_assert!(value.coords.values().all(|p| p.max_l_index() < arity.max(1)));
        PolyValue { arity, value }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// True if no `L_j` with `j ≥ arity` occurs.
    pub fn respects_arity(&self) -> bool {
        self.value.coords.values().all(|p| p.max_l_index() < self.arity.max(1))
    }
}
