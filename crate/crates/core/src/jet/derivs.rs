//! Memoized tables of total derivatives.

use std::collections::HashMap;

use crate::jet::{DiffPolynomial, MultiIndex};

/// Anything with a total derivative.
pub trait TotalDerivative: Clone {
    fn total_derivative(&self, axis: usize) -> Self;
    fn is_zero(&self) -> bool;
}

impl TotalDerivative for DiffPolynomial {
    fn total_derivative(&self, axis: usize) -> Self {
        DiffPolynomial::total_derivative(self, axis)
    }
    fn is_zero(&self) -> bool {
        DiffPolynomial::is_zero(self)
    }
}

/// `D_M f` for arbitrary `M`, each computed once from a cached
/// lower-order neighbour.
pub struct Derivatives<T: TotalDerivative> {
    table: HashMap<MultiIndex, T>,
}

impl<T: TotalDerivative> Derivatives<T> {
    pub fn new(base: T, dim: usize) -> Self {
        let mut table = HashMap::new();
        table.insert(MultiIndex::zero(dim), base);
        Derivatives { table }
    }

    pub fn get(&mut self, m: &MultiIndex) -> &T {
        if !self.table.contains_key(m) {
            let axis = m.orders().iter().rposition(|&k| k > 0).expect("zero index is always cached");
            let lower = m.decrement(axis).expect("positive order");
            let prev = self.get(&lower);
            let next = if prev.is_zero() { prev.clone() } else { prev.total_derivative(axis) };
            self.table.insert(m.clone(), next);
        }
        &self.table[m]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_derivatives() {
        let u = |a: u32, b: u32| DiffPolynomial::jet(0, MultiIndex::new(&[a, b]));
        let f = &(&u(0, 0) * &u(1, 0)) * &u(0, 2);
        let mut d = Derivatives::new(f.clone(), 2);
        for m in MultiIndex::all_up_to(2, 3) {
            assert_eq!(d.get(&m), &f.total_derivative_multi(&m));
        }
    }
}
