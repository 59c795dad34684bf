use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::Rational;

/// Derivative orders `(j_1, ..., j_n)` along each base axis.
///
/// Ordered graded-lexicographically: total order `|J|` first, then
/// componentwise from the first axis.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(SmallVec<[u32; 3]>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, dim))
    }

    pub fn new(orders: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(orders))
    }

    /// Unit index along `axis` (0-based).
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut m = Self::zero(dim);
        m.0[axis] = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn orders(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    /// `|J|`
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&j| j == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `J - K`, defined only when `K <= J` componentwise.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.dim(), other.dim());
        let mut out = SmallVec::with_capacity(self.dim());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(out))
    }

    pub fn increment(&self, axis: usize) -> Self {
        let mut m = self.clone();
        m.0[axis] += 1;
        m
    }

    pub fn decrement(&self, axis: usize) -> Option<Self> {
        let mut m = self.clone();
        m.0[axis] = m.0[axis].checked_sub(1)?;
        Some(m)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All `K` with `0 <= K <= self` componentwise, in graded-lex order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(SmallVec::new())];
        for &j in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (j as usize + 1));
            for prefix in &out {
                for k in 0..=j {
                    let mut m = prefix.clone();
                    m.0.push(k);
                    next.push(m);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// All multi-indices of dimension `dim` with `|J| <= max_order`.
    pub fn all_up_to(dim: usize, max_order: u32) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(SmallVec::new())];
        for _ in 0..dim {
            let mut next = Vec::new();
            for prefix in &out {
                let used = prefix.order();
                for k in 0..=(max_order - used) {
                    let mut m = prefix.clone();
                    m.0.push(k);
                    next.push(m);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// `(-1)^{|J|}` as a sign.
    pub fn parity_sign(&self) -> i32 {
        if self.order().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, ")")
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Product of componentwise binomials `C(j_i, k_i)`; zero when any `k_i > j_i`.
pub fn multi_binomial(j: &MultiIndex, k: &MultiIndex) -> Rational {
    let mut acc = BigInt::one();
    for (&a, &b) in j.0.iter().zip(&k.0) {
        if b > a {
            return Rational::zero();
        }
        acc *= binomial(a, b);
    }
    Rational::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(multi_binomial(&MultiIndex::new(&[3, 0]), &MultiIndex::new(&[2, 0])), q(3));
        assert_eq!(multi_binomial(&MultiIndex::new(&[2, 1]), &MultiIndex::new(&[1, 1])), q(2));
        assert_eq!(multi_binomial(&MultiIndex::new(&[1, 0]), &MultiIndex::new(&[2, 0])), q(0));
    }

    #[test]
    fn graded_lex_order() {
        let a = MultiIndex::new(&[0, 2]);
        let b = MultiIndex::new(&[1, 0]);
        let c = MultiIndex::new(&[2, 0]);
        assert!(b < a);
        assert!(a < c);
        assert_eq!(MultiIndex::new(&[1, 1]).sub_indices().len(), 4);
        assert_eq!(MultiIndex::all_up_to(2, 2).len(), 6);
    }

    #[test]
    fn subtraction_requires_dominance() {
        let j = MultiIndex::new(&[2, 1]);
        assert_eq!(j.checked_sub(&MultiIndex::new(&[1, 1])), Some(MultiIndex::new(&[1, 0])));
        assert_eq!(j.checked_sub(&MultiIndex::new(&[0, 2])), None);
    }
}
