//! Exact polynomials over ℚ in `D` (standing for ∂) and `L1, L2, …` (the λ's).
//!
//! All variables commute. Terms are kept in a `BTreeMap` keyed by
//! [`Monomial`], whose order is graded lexicographic with `D < L1 < L2 < …`,
//! so iteration and printing are deterministic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `p/q`, or just `p` when `q = 1`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let s = s.trim();
    let bad = || PolyError::Parse { pos: 0, msg: format!("bad rational `{s}`") };
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("renaming is not injective on the variables of the polynomial ({0})")]
    NonInjective(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    D,
    /// `L(i)` is λ_i, with `i ≥ 1`.
    L(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::D => write!(f, "D"),
            Var::L(i) => write!(f, "L{i}"),
        }
    }
}

/// Exponent vector: `d` for D, `l[i-1]` for L_i, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    d: u32,
    l: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(d: u32, mut l: Vec<u32>) -> Self {
        while l.last() == Some(&0) {
            l.pop();
        }
        Monomial { d, l }
    }

    pub fn exp(&self, v: Var) -> u32 {
        match v {
            Var::D => self.d,
            Var::L(i) => self.l.get(i - 1).copied().unwrap_or(0),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.d + self.l.iter().sum::<u32>()
    }

    pub fn is_one(&self) -> bool {
        self.d == 0 && self.l.is_empty()
    }

    /// Variables with nonzero exponent, `D` first.
    pub fn vars(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        let d = (self.d > 0).then_some((Var::D, self.d));
        d.into_iter().chain(
            self.l.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, e)| (Var::L(i + 1), *e)),
        )
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.l.len().max(other.l.len());
        let l = (0..n)
            .map(|i| self.l.get(i).copied().unwrap_or(0) + other.l.get(i).copied().unwrap_or(0))
            .collect();
        Monomial::new(self.d + other.d, l)
    }

    fn without(&self, v: Var) -> Monomial {
        let mut m = self.clone();
        match v {
            Var::D => m.d = 0,
            Var::L(i) => {
                if i <= m.l.len() {
                    m.l[i - 1] = 0;
                }
            }
        }
        Monomial::new(m.d, m.l)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| {
            let n = self.l.len().max(other.l.len());
            for i in (0..n).rev() {
                let a = self.l.get(i).copied().unwrap_or(0);
                let b = other.l.get(i).copied().unwrap_or(0);
                if a != b {
                    return a.cmp(&b);
                }
            }
            self.d.cmp(&other.d)
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        let m = match v {
            Var::D => Monomial::new(1, vec![]),
            Var::L(i) => {
                assert!(i >= 1, "λ indices start at 1");
                let mut l = vec![0; i];
                l[i - 1] = 1;
                Monomial::new(0, l)
            }
        };
        Self::monomial(Rational::one(), m)
    }

    pub fn d() -> Self {
        Self::var(Var::D)
    }

    pub fn l(i: usize) -> Self {
        Self::var(Var::L(i))
    }

    /// `L_a + L_{a+1} + … + L_b` (zero when `a > b`).
    pub fn l_sum(a: usize, b: usize) -> Self {
        (a..=b).fold(Poly::zero(), |acc, i| acc + Poly::l(i))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let slot = e.get_mut();
                *slot = if slot.is_integer() && c.is_integer() {
                    Rational::from_integer(slot.numer() + c.numer())
                } else {
                    &*slot + c
                };
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, q)| (m.clone(), q * c)).collect() }
    }

    pub fn scale_int(&self, n: i64) -> Poly {
        self.scale(&rat(n))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Largest `i` with `L_i` occurring, or 0.
    pub fn max_l_index(&self) -> usize {
        self.terms.keys().map(|m| m.l.len()).max().unwrap_or(0)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    /// Coefficient of `v^e`, as a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: Var, e: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exp(v) == e {
                out.add_term(m.without(v), c.clone());
            }
        }
        out
    }

    /// Replace `v` by `expr`.
    pub fn substitute(&self, v: Var, expr: &Poly) -> Poly {
        let mut map = HashMap::new();
        map.insert(v, expr.clone());
        self.substitute_many(&map)
    }

    /// Simultaneous substitution; variables absent from `map` are kept.
    pub fn substitute_many(&self, map: &HashMap<Var, Poly>) -> Poly {
        self.substitute_cached(map, &mut HashMap::new())
    }

    /// As [`Poly::substitute_many`], reusing powers of the substituted
    /// expressions across calls with the same `map`.
    pub fn substitute_cached(&self, map: &HashMap<Var, Poly>, cache: &mut HashMap<(Var, u32), Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut kept = Monomial::one();
            let mut factor = Poly::constant(c.clone());
            for (v, e) in m.vars() {
                match map.get(&v) {
                    Some(expr) => {
                        let p = cache.entry((v, e)).or_insert_with(|| expr.pow(e));
                        factor = &factor * &*p;
                    }
                    None => {
                        let single = match v {
                            Var::D => Monomial::new(e, vec![]),
                            Var::L(i) => {
                                let mut l = vec![0; i];
                                l[i - 1] = e;
                                Monomial::new(0, l)
                            }
                        };
                        kept = kept.mul(&single);
                    }
                }
            }
            if kept.is_one() {
                out += factor;
            } else {
                for (fm, fc) in factor.terms {
                    out.add_term(fm.mul(&kept), fc);
                }
            }
        }
        out
    }

    /// Rename `L_i → L_j`; the mapping must be injective on occurring variables.
    pub fn rename_vars(&self, mapping: &BTreeMap<usize, usize>) -> Result<Poly, PolyError> {
        let occurring: Vec<usize> = (1..=self.max_l_index()).filter(|&i| self.contains(Var::L(i))).collect();
        let image = |i: usize| mapping.get(&i).copied().unwrap_or(i);
        let mut seen = BTreeMap::new();
        for &i in &occurring {
            if let Some(prev) = seen.insert(image(i), i) {
                return Err(PolyError::NonInjective(format!("L{prev} and L{i} both map to L{}", image(i))));
            }
        }
        let map: HashMap<Var, Poly> = occurring.iter().map(|&i| (Var::L(i), Poly::l(image(i)))).collect();
        Ok(self.substitute_many(&map))
    }

    /// Shift every `L_i` to `L_{i+offset}`.
    pub fn shift_l(&self, offset: usize) -> Poly {
        if offset == 0 {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut l = m.l.clone();
                if !l.is_empty() {
                    let mut shifted = vec![0; offset];
                    shifted.append(&mut l);
                    l = shifted;
                }
                (Monomial::new(m.d, l), c.clone())
            })
            .collect();
        Poly { terms }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += rhs;
        self
    }
}

/// Skips the gcd reduction when both factors are integers.
fn rat_mul(a: &Rational, b: &Rational) -> Rational {
    if a.is_integer() && b.is_integer() {
        Rational::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl SubAssign for Poly {
    fn sub_assign(&mut self, rhs: Poly) {
        *self -= &rhs;
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), rat_mul(ca, cb));
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .vars()
                .map(|(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&a), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl FromStr for Poly {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s, pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos < s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc += self.term()?;
            } else if self.eat('-') || self.eat('−') {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') || self.eat('·') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                if !d.is_constant() || d.is_zero() {
                    return Err(self.err("division only by nonzero constants"));
                }
                acc = acc.scale(&(Rational::one() / d.constant_term()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, PolyError> {
        if self.eat('-') || self.eat('−') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let e: u32 = match self.digits().map(str::parse) {
                Some(Ok(e)) => e,
                _ => return Err(self.err("expected a small exponent")),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some('D') | Some('∂') => {
                self.pos += self.peek().map(char::len_utf8).unwrap_or(1);
                Ok(Poly::d())
            }
            Some(c @ ('L' | 'λ')) => {
                self.pos += c.len_utf8();
                let idx: usize = match self.digits().map(str::parse) {
                    Some(Ok(i)) => i,
                    _ => return Err(self.err("expected λ index")),
                };
                if idx == 0 {
                    return Err(self.err("λ indices start at 1"));
                }
                Ok(Poly::l(idx))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = BigInt::from_str(self.digits().unwrap_or("0")).map_err(|_| self.err("bad integer"))?;
                Ok(Poly::constant(BigRational::from_integer(n)))
            }
            _ => Err(self.err("expected a number, D, L<i>, or `(`")),
        }
    }
}

#[cfg(test)]
pub(crate) mod strategies {
    use super::*;
    use proptest::prelude::*;

    pub fn poly(max_l: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
        let mono = (0..=max_deg, proptest::collection::vec(0..=max_deg, max_l));
        proptest::collection::vec((-5i64..=5, mono), 0..=max_terms).prop_map(|ts| {
            let mut p = Poly::zero();
            for (c, (d, l)) in ts {
                p += Poly::monomial(rat(c), Monomial::new(d, l));
            }
            p
        })
    }
}

#[cfg(test)]
mod tests {
    use super::strategies::poly;
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn multiply_examples() {
        let a = p("D + 2*L1");
        assert_eq!(&a * &Poly::one(), a);
        // schoolbook: D·D + D·2L1 + 2L1·D + 4L1²
        let sq = &a * &a;
        let expected = &(&(&Poly::d() * &Poly::d()) + &(&Poly::d() * &Poly::l(1)).scale_int(4))
            + &(&Poly::l(1) * &Poly::l(1)).scale_int(4);
        assert_eq!(sq, expected);
        assert!((&Poly::zero() * &a).is_zero());
    }

    #[test]
    fn substitute_examples() {
        assert_eq!(p("D + 2*L1").substitute(Var::L(1), &p("-L1 - D")), p("-D - 2*L1"));
        let q = p("3*D^2*L1 - L1 + 7");
        assert_eq!(q.substitute(Var::L(1), &Poly::l(1)), q);
        assert_eq!(p("L1*L2").substitute(Var::L(2), &p("L1 + L3")), p("L1^2 + L1*L3"));
    }

    #[test]
    fn substitute_is_simultaneous() {
        let mut m = HashMap::new();
        m.insert(Var::L(1), Poly::l(2));
        m.insert(Var::L(2), Poly::l(1));
        assert_eq!(p("L1 + 2*L2^2").substitute_many(&m), p("L2 + 2*L1^2"));
    }

    #[test]
    fn rename_examples() {
        let mut m = BTreeMap::new();
        m.insert(1, 3);
        assert_eq!(p("L1*D").rename_vars(&m).unwrap(), p("L3*D"));
        assert_eq!(p("L1 + L2").rename_vars(&BTreeMap::new()).unwrap(), p("L1 + L2"));
        let mut swap = BTreeMap::new();
        swap.insert(1, 2);
        swap.insert(2, 1);
        assert_eq!(p("L1 + L2").rename_vars(&swap).unwrap(), p("L1 + L2"));
        let mut clash = BTreeMap::new();
        clash.insert(1, 2);
        assert!(p("L1 + L2").rename_vars(&clash).is_err());
        assert!(p("L1").rename_vars(&clash).is_ok());
    }

    #[test]
    fn printing_is_canonical() {
        assert_eq!(p("4*L1^2 + D^2 + 4*D*L1").to_string(), "D^2 + 4*D*L1 + 4*L1^2");
        assert_eq!(p("2*L1 + D").to_string(), "D + 2*L1");
        assert_eq!(p("-1/2 + L2 - L1*L2").to_string(), "-1/2 + L2 - L1*L2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p("λ1 + λ2").to_string(), "L1 + L2");
        assert_eq!(p("  3 / 6 * D ").to_string(), "1/2*D");
    }

    #[test]
    fn parse_errors() {
        assert!("D +".parse::<Poly>().is_err());
        assert!("L0".parse::<Poly>().is_err());
        assert!("D/L1".parse::<Poly>().is_err());
        assert!("x".parse::<Poly>().is_err());
    }

    #[test]
    fn coefficient_extraction() {
        let q = p("D^2 + 3*D*L1^2 + 5*L1^2 - L2");
        assert_eq!(q.coeff_of(Var::L(1), 2), p("3*D + 5"));
        assert_eq!(q.coeff_of(Var::L(1), 0), p("D^2 - L2"));
    }

    proptest! {
        #[test]
        fn ring_axioms(a in poly(2, 2, 4), b in poly(2, 2, 4), c in poly(2, 2, 4)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn degree_is_additive(a in poly(2, 3, 4), b in poly(2, 3, 4)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let ab = &a * &b;
            for v in [Var::D, Var::L(1), Var::L(2)] {
                prop_assert_eq!(ab.degree_in(v), a.degree_in(v) + b.degree_in(v));
            }
        }

        #[test]
        fn renaming_round_trip(a in poly(2, 3, 5)) {
            let mut fwd = BTreeMap::new();
            fwd.insert(1, 4);
            fwd.insert(2, 5);
            let mut back = BTreeMap::new();
            back.insert(4, 1);
            back.insert(5, 2);
            let there = a.rename_vars(&fwd).unwrap();
            prop_assert_eq!(there.rename_vars(&back).unwrap(), a.clone());
            prop_assert_eq!(a.substitute(Var::L(1), &Poly::l(7)).substitute(Var::L(7), &Poly::l(1)), a);
        }

        #[test]
        fn print_parse_round_trip(a in poly(3, 3, 6)) {
            let s = a.to_string();
            prop_assert_eq!(s.parse::<Poly>().unwrap(), a);
        }
    }
}
