//! Seeded generators for randomized trials and property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graded::{GradedDensity, LocalFunctional};
use crate::jet::{DiffPolynomial, JetVar, Monomial, MultiIndex};
use crate::operators::GradedDiffOperator;
use crate::tensors::{Kind, Label, WedgeDensity};
use crate::Rational;

/// Shape limits for random objects.
#[derive(Clone, Debug)]
pub struct Shape {
    pub dim: usize,
    pub fields: usize,
    /// Largest derivative order of jet variables.
    pub max_order: u32,
    /// Largest polynomial degree of a monomial.
    pub max_degree: u32,
    /// Number of monomials drawn (before merging).
    pub terms: usize,
    /// Largest θ grading order.
    pub max_grading: u32,
}

impl Shape {
    pub fn new(dim: usize, fields: usize) -> Self {
        Shape { dim, fields, max_order: 3, max_degree: 3, terms: 3, max_grading: 1 }
    }

    pub fn order(mut self, k: u32) -> Self {
        self.max_order = k;
        self
    }

    pub fn degree(mut self, k: u32) -> Self {
        self.max_degree = k;
        self
    }

    pub fn terms(mut self, k: usize) -> Self {
        self.terms = k;
        self
    }

    pub fn grading(mut self, k: u32) -> Self {
        self.max_grading = k;
        self
    }
}

/// Deterministic random source.
pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent stream for trial `index` derived from `seed`.
    pub fn for_trial(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Generator { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coefficient(&mut self) -> Rational {
        let num = loop {
            let n: i64 = self.rng.gen_range(-5..=5);
            if n != 0 {
                break n;
            }
        };
        let den: i64 = *[1, 1, 1, 2, 3].choose(&mut self.rng).expect("nonempty");
        crate::ratio(num, den)
    }

    pub fn multi_index(&mut self, dim: usize, max: u32) -> MultiIndex {
        let total = self.rng.gen_range(0..=max);
        let mut orders = vec![0u32; dim];
        for _ in 0..total {
            let axis = self.rng.gen_range(0..dim);
            orders[axis] += 1;
        }
        MultiIndex::new(&orders)
    }

    pub fn jet_var(&mut self, shape: &Shape) -> JetVar {
        let field = self.rng.gen_range(0..shape.fields);
        JetVar::new(field, self.multi_index(shape.dim, shape.max_order))
    }

    pub fn monomial(&mut self, shape: &Shape, min_degree: u32) -> Monomial {
        let deg = self.rng.gen_range(min_degree..=shape.max_degree.max(min_degree));
        let mut m = Monomial::one();
        for _ in 0..deg {
            m = m.mul(&Monomial::var(self.jet_var(shape)));
        }
        m
    }

    /// Random polynomial with no constant term when `min_degree > 0`.
    pub fn polynomial(&mut self, shape: &Shape, min_degree: u32) -> DiffPolynomial {
        let mut p = DiffPolynomial::zero();
        for _ in 0..shape.terms {
            let m = self.monomial(shape, min_degree);
            let c = self.coefficient();
            p.add_term(m, c);
        }
        p
    }

    /// Random polynomial that is never zero.
    pub fn nonzero_polynomial(&mut self, shape: &Shape, min_degree: u32) -> DiffPolynomial {
        loop {
            let p = self.polynomial(shape, min_degree);
            if !p.is_zero() {
                return p;
            }
        }
    }

    pub fn density(&mut self, shape: &Shape, min_degree: u32) -> GradedDensity {
        let mut d = GradedDensity::zero(shape.dim);
        for _ in 0..shape.terms {
            let j = self.multi_index(shape.dim, shape.max_grading);
            let single = Shape { terms: 1, ..shape.clone() };
            d.add_term(j, &self.polynomial(&single, min_degree));
        }
        d
    }

    /// Bulk functional `∫θ f` with `f` of degree at least one.
    pub fn functional(&mut self, shape: &Shape) -> LocalFunctional {
        LocalFunctional::bulk(shape.dim, self.nonzero_polynomial(shape, 1))
    }

    pub fn operator(&mut self, shape: &Shape) -> GradedDiffOperator {
        let mut op = GradedDiffOperator::zero(shape.dim, shape.fields);
        let coeff_shape = Shape { terms: 1, max_degree: shape.max_degree.min(1), ..shape.clone() };
        for _ in 0..shape.terms {
            let a = self.rng.gen_range(0..shape.fields);
            let b = self.rng.gen_range(0..shape.fields);
            let j = self.multi_index(shape.dim, shape.max_grading);
            let n = self.multi_index(shape.dim, shape.max_order);
            let c = self.polynomial(&coeff_shape, 0);
            op.add_term(a, b, j, n, &c);
        }
        op
    }

    pub fn label(&mut self, shape: &Shape) -> Label {
        let field = self.rng.gen_range(0..shape.fields);
        Label::new(field, self.multi_index(shape.dim, shape.max_order))
    }

    /// Random wedge density of the given degree.
    pub fn wedge_density<K: Kind>(&mut self, shape: &Shape, degree: usize) -> WedgeDensity<K> {
        let mut w = WedgeDensity::<K>::zero(shape.dim, degree);
        let coeff_shape = Shape { terms: 1, ..shape.clone() };
        for _ in 0..shape.terms {
            let j = self.multi_index(shape.dim, shape.max_grading);
            let labels: Vec<Label> = (0..degree).map(|_| self.label(shape)).collect();
            let c = self.polynomial(&coeff_shape, 0);
            w.add_term(&j, &labels, &c);
        }
        w
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_are_reproducible() {
        let shape = Shape::new(1, 1);
        let a = Generator::new(7).polynomial(&shape, 1);
        let b = Generator::new(7).polynomial(&shape, 1);
        assert_eq!(a, b);
        let c = Generator::for_trial(7, 1).polynomial(&shape, 1);
        let d = Generator::for_trial(7, 1).polynomial(&shape, 1);
        assert_eq!(c, d);
    }

    #[test]
    fn respects_order_bound() {
        let shape = Shape::new(2, 2).order(2).terms(6);
        let mut g = Generator::new(3);
        for _ in 0..20 {
            assert!(g.polynomial(&shape, 0).max_order() <= 2);
        }
    }
}
