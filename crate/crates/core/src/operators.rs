//! Graded matrix differential operators `Î_AB = θ^(J) I^{<J>N}_AB D_N`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::graded::GradedDensity;
use crate::jet::{multi_binomial, DiffPolynomial, JetVar, MultiIndex};
use crate::{ratio, sign, Error, Rational};

/// Key of one operator term: row, column, θ grading and derivative order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpKey {
    pub row: usize,
    pub col: usize,
    pub grading: MultiIndex,
    pub order: MultiIndex,
}

/// A square matrix of graded differential operators, fully expanded in the
/// basis `θ^(J) c(φ) D_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDiffOperator {
    dim: usize,
    size: usize,
    terms: BTreeMap<OpKey, DiffPolynomial>,
}

impl GradedDiffOperator {
    pub fn zero(dim: usize, size: usize) -> Self {
        GradedDiffOperator { dim, size, terms: BTreeMap::new() }
    }

    /// Scalar operator `θ^(J) c D_N` on a single field.
    pub fn monomial(grading: MultiIndex, coeff: DiffPolynomial, order: MultiIndex) -> Self {
        let mut op = Self::zero(grading.dim(), 1);
        op.add_term(0, 0, grading, order, &coeff);
        op
    }

    /// Multiplication by the plain polynomial `c` (grading zero, order zero).
    pub fn multiplication(dim: usize, size: usize, c: &DiffPolynomial) -> Self {
        let mut op = Self::zero(dim, size);
        for a in 0..size {
            op.add_term(a, a, MultiIndex::zero(dim), MultiIndex::zero(dim), c);
        }
        op
    }

    /// Multiplication by `θ^(J)`.
    pub fn theta(dim: usize, size: usize, grading: MultiIndex) -> Self {
        let mut op = Self::zero(dim, size);
        for a in 0..size {
            op.add_term(a, a, grading.clone(), MultiIndex::zero(dim), &DiffPolynomial::one());
        }
        op
    }

    /// The total derivative `D_N` on every field.
    pub fn derivative(dim: usize, size: usize, order: MultiIndex) -> Self {
        let mut op = Self::zero(dim, size);
        for a in 0..size {
            op.add_term(a, a, MultiIndex::zero(dim), order.clone(), &DiffPolynomial::one());
        }
        op
    }

    pub fn identity(dim: usize, size: usize) -> Self {
        Self::multiplication(dim, size, &DiffPolynomial::one())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpKey, &DiffPolynomial)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, row: usize, col: usize, grading: &MultiIndex, order: &MultiIndex) -> DiffPolynomial {
        let key = OpKey { row, col, grading: grading.clone(), order: order.clone() };
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, row: usize, col: usize, grading: MultiIndex, order: MultiIndex, c: &DiffPolynomial) {
        assert!(row < self.size && col < self.size, "operator entry out of range");
        if c.is_zero() {
            return;
        }
        let key = OpKey { row, col, grading, order };
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Terms of entry `(row, col)` as `(grading, order, coefficient)`.
    pub fn entry(&self, row: usize, col: usize) -> Vec<(&MultiIndex, &MultiIndex, &DiffPolynomial)> {
        self.terms
            .iter()
            .filter(|(k, _)| k.row == row && k.col == col)
            .map(|(k, c)| (&k.grading, &k.order, c))
            .collect()
    }

    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(|k| k.order.order()).max().unwrap_or(0)
    }

    pub fn max_grading(&self) -> u32 {
        self.terms.keys().map(|k| k.grading.order()).max().unwrap_or(0)
    }

    /// Largest jet order inside the coefficients.
    pub fn max_coefficient_order(&self) -> u32 {
        self.terms.values().map(DiffPolynomial::max_order).max().unwrap_or(0)
    }

    /// True when no coefficient depends on the fields.
    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.jet_vars().is_empty())
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "operators over different dimensions");
        assert_eq!(self.size, other.size, "operators over different field sets");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.row, k.col, k.grading.clone(), k.order.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero(self.dim, self.size);
        if k.is_zero() {
            return out;
        }
        for (key, c) in &self.terms {
            out.terms.insert(key.clone(), c.scale(k));
        }
        out
    }

    /// Composition `self ∘ other`, re-expanded into `θ^(J) c D_N` form.
    pub fn compose(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.dim, self.size);
        for (k1, a) in &self.terms {
            for (k2, b) in other.terms.iter().filter(|(k2, _)| k2.row == k1.col) {
                // D_N (θ^(G) b D_M f) = sum_{P+Q+R=N} N!/(P!Q!R!) θ^(G+P) D_Q b D_{R+M} f
                for p in k1.order.sub_indices() {
                    let rest = k1.order.checked_sub(&p).expect("sub index");
                    let cp = multi_binomial(&k1.order, &p);
                    for q in rest.sub_indices() {
                        let r = rest.checked_sub(&q).expect("sub index");
                        let coeff = &cp * multi_binomial(&rest, &q);
                        let c = (a * &b.total_derivative_multi(&q)).scale(&coeff);
                        out.add_term(
                            k1.row,
                            k2.col,
                            k1.grading.add(&k2.grading).add(&p),
                            r.add(&k2.order),
                            &c,
                        );
                    }
                }
            }
        }
        out
    }

    /// `(op g)_A = sum_B θ^(J) I^{<J>N}_AB D_N g_B`.
    pub fn apply(&self, g: &[DiffPolynomial]) -> Result<Vec<GradedDensity>, Error> {
        if g.len() != self.size {
            return Err(Error::FieldMismatch { expected: self.size, got: g.len() });
        }
        let mut out = vec![GradedDensity::zero(self.dim); self.size];
        for (k, c) in &self.terms {
            let v = c * &g[k.col].total_derivative_multi(&k.order);
            out[k.row].add_term(k.grading.clone(), &v);
        }
        Ok(out)
    }

    /// Applies the operator to graded arguments, letting `D_N` act on θ too.
    pub fn apply_graded(&self, g: &[GradedDensity]) -> Result<Vec<GradedDensity>, Error> {
        if g.len() != self.size {
            return Err(Error::FieldMismatch { expected: self.size, got: g.len() });
        }
        let mut out = vec![GradedDensity::zero(self.dim); self.size];
        for (k, c) in &self.terms {
            let mut d = g[k.col].clone();
            for (axis, &n) in k.order.orders().iter().enumerate() {
                for _ in 0..n {
                    d = d.total_derivative(axis);
                }
            }
            out[k.row].add_assign(&d.mul_poly(c).shift(&k.grading));
        }
        Ok(out)
    }

    /// The graded adjoint `Î*`, with `∫ f Î g = ∫ g Î* f` modulo formal
    /// divergences.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.dim, self.size);
        for (k, c) in &self.terms {
            let sgn = sign(k.order.order());
            for l in k.order.sub_indices() {
                let rest = k.order.checked_sub(&l).expect("sub index");
                let cl = multi_binomial(&k.order, &l);
                for m in rest.sub_indices() {
                    let inner = rest.checked_sub(&m).expect("sub index");
                    let coeff = &sgn * &cl * multi_binomial(&rest, &m);
                    out.add_term(
                        k.col,
                        k.row,
                        k.grading.add(&l),
                        m,
                        &c.total_derivative_multi(&inner).scale(&coeff),
                    );
                }
            }
        }
        out
    }

    /// `½(Î − Î*)`.
    pub fn antisymmetrize(&self) -> Self {
        self.sub(&self.adjoint()).scale(&ratio(1, 2))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.adjoint().add(self).is_zero()
    }

    /// Differentiates the coefficients along `direction`:
    /// `θ^(J) (∂I/∂φ_C^(K)) D_K(direction_C) D_N`.
    pub fn frechet(&self, direction: &[GradedDensity]) -> Result<Self, Error> {
        if direction.len() != self.size {
            return Err(Error::FieldMismatch { expected: self.size, got: direction.len() });
        }
        let mut out = Self::zero(self.dim, self.size);
        for (k, c) in &self.terms {
            for v in c.jet_vars() {
                let dc = c.partial(&v);
                let mut d = direction[v.field].clone();
                for (axis, &n) in v.order.orders().iter().enumerate() {
                    for _ in 0..n {
                        d = d.total_derivative(axis);
                    }
                }
                for (g, p) in d.terms() {
                    out.add_term(k.row, k.col, k.grading.add(g), k.order.clone(), &(&dc * p));
                }
            }
        }
        Ok(out)
    }

    /// Drops every term with a nonzero θ grading (`θ ≡ 1`).
    pub fn standard_part(&self) -> Self {
        let mut out = Self::zero(self.dim, self.size);
        for (k, c) in self.terms.iter().filter(|(k, _)| k.grading.is_zero()) {
            out.terms.insert(k.clone(), c.clone());
        }
        out
    }

    /// Classical formal adjoint `sum (-1)^{|N|} D_N ∘ c` of the standard part.
    pub fn classical_adjoint(&self) -> Self {
        let mut out = Self::zero(self.dim, self.size);
        for (k, c) in self.standard_part().terms.iter() {
            let sgn = sign(k.order.order());
            for m in k.order.sub_indices() {
                let inner = k.order.checked_sub(&m).expect("sub index");
                let coeff = &sgn * multi_binomial(&k.order, &m);
                out.add_term(
                    k.col,
                    k.row,
                    MultiIndex::zero(self.dim),
                    m,
                    &c.total_derivative_multi(&inner).scale(&coeff),
                );
            }
        }
        out
    }

    /// Jet variables occurring in coefficients.
    pub fn coefficient_vars(&self) -> std::collections::BTreeSet<JetVar> {
        self.terms.values().flat_map(|c| c.jet_vars()).collect()
    }
}

/// Alias matching the common name of the operation.
pub fn adjoint(op: &GradedDiffOperator) -> GradedDiffOperator {
    op.adjoint()
}

pub fn antisymmetrize(op: &GradedDiffOperator) -> GradedDiffOperator {
    op.antisymmetrize()
}

pub fn operator_frechet(op: &GradedDiffOperator, direction: &[GradedDensity]) -> Result<GradedDiffOperator, Error> {
    op.frechet(direction)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(k: u32) -> MultiIndex {
        MultiIndex::new(&[k])
    }

    fn u(k: u32) -> DiffPolynomial {
        DiffPolynomial::jet(0, mi(k))
    }

    fn c(p: i64, q: i64) -> DiffPolynomial {
        DiffPolynomial::constant(ratio(p, q))
    }

    fn term(g: u32, coeff: DiffPolynomial, n: u32) -> GradedDiffOperator {
        GradedDiffOperator::monomial(mi(g), coeff, mi(n))
    }

    #[test]
    fn adjoint_of_theta_d() {
        let op = term(0, c(1, 1), 1);
        let expected = term(0, c(-1, 1), 1).add(&term(1, c(-1, 1), 0));
        assert_eq!(op.adjoint(), expected);
        let anti = term(0, c(1, 1), 1).add(&term(1, c(1, 2), 0));
        assert_eq!(op.antisymmetrize(), anti);
        assert!(anti.is_antisymmetric());
    }

    #[test]
    fn apply_examples() {
        let op = term(0, c(1, 1), 1).add(&term(1, c(1, 2), 0));
        let g = u(0).pow(2);
        let out = op.apply(&[g]).unwrap();
        let mut expected = GradedDensity::zero(1);
        expected.add_term(mi(0), &(&u(0) * &u(1)).scale(&ratio(2, 1)));
        expected.add_term(mi(1), &u(0).pow(2).scale(&ratio(1, 2)));
        assert_eq!(out[0], expected);
        assert!(GradedDiffOperator::zero(1, 1).apply(&[u(0)]).unwrap()[0].is_zero());
        assert!(op.apply(&[]).is_err());
    }

    #[test]
    fn composition_normalizes_products() {
        // θD ∘ θu = θ(u D + u_x) + Dθ u
        let d = GradedDiffOperator::derivative(1, 1, mi(1));
        let m = GradedDiffOperator::multiplication(1, 1, &u(0));
        let expected = term(0, u(0), 1).add(&term(0, u(1), 0)).add(&term(1, u(0), 0));
        assert_eq!(d.compose(&m), expected);
        // θD ∘ θ = θ D + Dθ
        let t = GradedDiffOperator::theta(1, 1, mi(0));
        assert_eq!(d.compose(&t), term(0, c(1, 1), 1).add(&term(1, c(1, 1), 0)));
    }

    #[test]
    fn operator_frechet_examples() {
        let op = term(0, u(0).scale(&ratio(2, 3)), 1);
        let eta = GradedDensity::bulk(1, DiffPolynomial::jet(0, mi(2)));
        let f = op.frechet(&[eta]).unwrap();
        assert_eq!(f, term(0, u(2).scale(&ratio(2, 3)), 1));
        let constant = term(0, c(1, 1), 3).add(&term(1, c(1, 2), 0));
        assert!(constant.frechet(&[GradedDensity::bulk(1, u(0))]).unwrap().is_zero());
    }

    #[test]
    fn zeroth_order_operator_is_self_adjoint() {
        let op = term(0, &u(0) * &u(1), 0);
        assert_eq!(op.adjoint(), op);
    }
}
