//! Exact sparse Gaussian elimination over the rationals.
//!
//! Rows are kept in echelon form keyed by their smallest column, which fixes
//! the pivot order independently of how the rows were produced. Every basis
//! row remembers which input generators it is built from, so membership
//! queries return the combination that certifies them.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::Rational;

/// Sparse vector indexed by ordered column keys.
pub type SparseVec<K> = BTreeMap<K, Rational>;

/// Adds `k · src` into `dst`, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(dst: &mut SparseVec<K>, k: &Rational, src: &SparseVec<K>) {
    if k.is_zero() {
        return;
    }
    for (col, v) in src {
        let e = dst.entry(col.clone()).or_insert_with(Rational::zero);
        *e += k * v;
        if e.is_zero() {
            dst.remove(col);
        }
    }
}

#[derive(Clone, Debug)]
struct Row<K> {
    entries: SparseVec<K>,
    combo: SparseVec<usize>,
}

/// Incrementally built row-echelon basis of a span of generators.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: Vec<Row<K>>,
    pivots: BTreeMap<K, usize>,
    generators: usize,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: Vec::new(), pivots: BTreeMap::new(), generators: 0 }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Dimension of the span so far.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of generators inserted.
    pub fn generators(&self) -> usize {
        self.generators
    }

    /// Inserts the next generator (numbered consecutively from zero) and
    /// reports whether it enlarged the span.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let index = self.generators;
        self.generators += 1;
        let mut combo = SparseVec::new();
        combo.insert(index, Rational::one());
        let (rest, used) = self.reduce(v);
        if rest.is_empty() {
            return false;
        }
        axpy(&mut combo, &-Rational::one(), &used);
        let (pivot, lead) = rest.iter().next().map(|(k, c)| (k.clone(), c.clone())).expect("nonempty");
        let inv = Rational::one() / lead;
        let entries = rest.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        let combo = combo.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(Row { entries, combo });
        true
    }

    /// Returns `(remainder, combination)` with
    /// `v = remainder + sum combination[g] · generator_g`; the remainder has
    /// no entry in any pivot column.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut rest = v.clone();
        let mut combo = SparseVec::new();
        let mut floor: Option<K> = None;
        loop {
            let next = rest
                .iter()
                .filter(|(k, _)| floor.as_ref().is_none_or(|f| *k > f))
                .find(|(k, _)| self.pivots.contains_key(*k))
                .map(|(k, c)| (k.clone(), c.clone()));
            let Some((col, coeff)) = next else { break };
            let row = &self.rows[self.pivots[&col]];
            axpy(&mut rest, &-coeff.clone(), &row.entries);
            axpy(&mut combo, &coeff, &row.combo);
            floor = Some(col);
        }
        (rest, combo)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).0.is_empty()
    }
}

/// Rank of a list of rows.
pub fn rank<K: Ord + Clone>(rows: &[SparseVec<K>]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn v(entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries.iter().map(|&(k, c)| (k, ratio(c, 1))).collect()
    }

    #[test]
    fn membership_with_certificate() {
        let gens = [v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)]), v(&[(0, 1), (2, -1)])];
        let mut e = Echelon::new();
        assert!(e.insert(&gens[0]));
        assert!(e.insert(&gens[1]));
        assert!(!e.insert(&gens[2]));
        assert_eq!(e.rank(), 2);
        let target = v(&[(0, 2), (1, 5), (2, 3)]);
        let (rest, combo) = e.reduce(&target);
        assert!(rest.is_empty());
        let mut rebuilt = SparseVec::new();
        for (g, c) in &combo {
            axpy(&mut rebuilt, c, &gens[*g]);
        }
        assert_eq!(rebuilt, target);
        assert!(!e.contains(&v(&[(2, 1)])));
    }
}
