//! Exact sparse linear algebra over ℚ: rank and kernel of a list of vectors.

use crate::polyring::Rational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

pub type SparseVec = BTreeMap<usize, Rational>;

fn axpy(target: &mut SparseVec, c: &Rational, x: &SparseVec) {
    for (k, v) in x {
        let slot = target.entry(*k).or_insert_with(Rational::zero);
        *slot += c * v;
        if slot.is_zero() {
            target.remove(k);
        }
    }
}

/// Incremental echelon form. Each inserted vector is reduced against the
/// stored pivots while tracking which combination of inputs it came from.
#[derive(Debug, Default, Clone)]
pub struct Echelon {
    pivots: BTreeMap<usize, (SparseVec, SparseVec)>,
    kernel: Vec<SparseVec>,
    count: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: SparseVec) {
        let idx = self.count;
        self.count += 1;
        let mut v = v;
        let mut combo: SparseVec = BTreeMap::from([(idx, Rational::one())]);
        loop {
            let Some((&lead, c)) = v.iter().next() else {
                self.kernel.push(combo);
                return;
            };
            match self.pivots.get(&lead) {
                Some((pv, pc)) => {
                    let c = -c.clone();
                    axpy(&mut v, &c, pv);
                    axpy(&mut combo, &c, pc);
                }
                None => {
                    let inv = c.recip();
                    for x in v.values_mut() {
                        *x *= &inv;
                    }
                    for x in combo.values_mut() {
                        *x *= &inv;
                    }
                    self.pivots.insert(lead, (v, combo));
                    return;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coefficient vectors (indexed by insertion order) of combinations
    /// that vanish; a basis of the kernel.
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }
}

pub fn rank(vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}
