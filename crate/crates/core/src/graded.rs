//! θ-graded densities and local functionals modulo formal divergences.
//!
//! A density `sum_J θ^(J) f^<J>` carries the factor `θ^(J) = D_J θ` on
//! each coefficient. Gradings multiply additively, `θ^(I) θ^(J) =
//! θ^(I+J)`. Formal integration by parts moves every derivative off θ:
//! `∫ θ^(J) f ≡ ∫ θ (-1)^{|J|} D_J f`, so the grading-zero form is a unique
//! representative of each functional.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::jet::{higher_euler_all, is_classical_divergence, DiffPolynomial, MultiIndex};
use crate::{sign, Rational};

/// `θ^(a) · θ^(b) = θ^(a+b)`
pub fn theta_multiply(a: &MultiIndex, b: &MultiIndex) -> MultiIndex {
    a.add(b)
}

/// Finite sum `sum_J θ^(J) f^<J>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedDensity {
    dim: usize,
    terms: BTreeMap<MultiIndex, DiffPolynomial>,
}

impl GradedDensity {
    pub fn zero(dim: usize) -> Self {
        GradedDensity { dim, terms: BTreeMap::new() }
    }

    /// `θ · f`
    pub fn bulk(dim: usize, f: DiffPolynomial) -> Self {
        Self::term(MultiIndex::zero(dim), f)
    }

    /// `θ^(J) · f`
    pub fn term(j: MultiIndex, f: DiffPolynomial) -> Self {
        let mut d = Self::zero(j.dim());
        d.add_term(j, &f);
        d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &DiffPolynomial)> {
        self.terms.iter()
    }

    pub fn get(&self, j: &MultiIndex) -> Option<&DiffPolynomial> {
        self.terms.get(j)
    }

    /// The grading-zero coefficient, zero if absent.
    pub fn bulk_part(&self) -> DiffPolynomial {
        self.terms.get(&MultiIndex::zero(self.dim)).cloned().unwrap_or_default()
    }

    /// Everything except the grading-zero coefficient.
    pub fn boundary_part(&self) -> GradedDensity {
        let mut out = self.clone();
        out.terms.remove(&MultiIndex::zero(self.dim));
        out
    }

    pub fn add_term(&mut self, j: MultiIndex, f: &DiffPolynomial) {
        debug_assert_eq!(j.dim(), self.dim);
        if f.is_zero() {
            return;
        }
        let slot = self.terms.entry(j.clone()).or_default();
        *slot += f;
        if slot.is_zero() {
            self.terms.remove(&j);
        }
    }

    pub fn add_assign(&mut self, other: &GradedDensity) {
        for (j, f) in &other.terms {
            self.add_term(j.clone(), f);
        }
    }

    pub fn scale(&self, c: &Rational) -> GradedDensity {
        let mut out = Self::zero(self.dim);
        for (j, f) in &self.terms {
            out.add_term(j.clone(), &f.scale(c));
        }
        out
    }

    /// Multiplies every coefficient by an ungraded polynomial.
    pub fn mul_poly(&self, p: &DiffPolynomial) -> GradedDensity {
        let mut out = Self::zero(self.dim);
        for (j, f) in &self.terms {
            out.add_term(j.clone(), &(f * p));
        }
        out
    }

    /// Multiplies by `θ^(shift)`.
    pub fn shift(&self, shift: &MultiIndex) -> GradedDensity {
        let mut out = Self::zero(self.dim);
        for (j, f) in &self.terms {
            out.add_term(theta_multiply(j, shift), f);
        }
        out
    }

    /// Product under the θ multiplication rule.
    pub fn mul(&self, other: &GradedDensity) -> GradedDensity {
        let mut out = Self::zero(self.dim);
        for (i, f) in &self.terms {
            for (j, g) in &other.terms {
                out.add_term(theta_multiply(i, j), &(f * g));
            }
        }
        out
    }

    /// Applies `op` to each coefficient, keeping gradings.
    pub fn map_coefficients(&self, op: impl Fn(&DiffPolynomial) -> DiffPolynomial) -> GradedDensity {
        let mut out = Self::zero(self.dim);
        for (j, f) in &self.terms {
            out.add_term(j.clone(), &op(f));
        }
        out
    }

    /// `D_axis` acting by Leibniz on both the θ factor and the coefficient.
    pub fn total_derivative(&self, axis: usize) -> GradedDensity {
        let mut out = Self::zero(self.dim);
        for (j, f) in &self.terms {
            out.add_term(j.increment(axis), f);
            out.add_term(j.clone(), &f.total_derivative(axis));
        }
        out
    }

    /// `sum_J (-1)^{|J|} D_J f^<J>`, the grading-zero coefficient after
    /// formal integration by parts.
    pub fn canonical_coefficient(&self) -> DiffPolynomial {
        let terms: Vec<(&MultiIndex, &DiffPolynomial)> = self.terms.iter().collect();
        nested_integration(&terms, 0, self.dim)
    }

    /// Largest `|J|` among the gradings present.
    pub fn max_grading(&self) -> u32 {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn max_order(&self) -> u32 {
        self.terms.values().map(DiffPolynomial::max_order).max().unwrap_or(0)
    }

    /// Coefficients in the domain-integral notation
    /// `∫_Ω D_J f^<<J>>` with `f^<<J>> = (-1)^{|J|} f^<J>`.
    pub fn domain_coefficients(&self) -> BTreeMap<MultiIndex, DiffPolynomial> {
        self.terms.iter().map(|(j, f)| (j.clone(), f.scale(&sign(j.order())))).collect()
    }
}

impl Add for &GradedDensity {
    type Output = GradedDensity;
    fn add(self, rhs: &GradedDensity) -> GradedDensity {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &GradedDensity {
    type Output = GradedDensity;
    fn sub(self, rhs: &GradedDensity) -> GradedDensity {
        let mut out = self.clone();
        out.add_assign(&-rhs);
        out
    }
}

impl Neg for &GradedDensity {
    type Output = GradedDensity;
    fn neg(self) -> GradedDensity {
        self.map_coefficients(|f| -f)
    }
}

/// Horner scheme `g_0 - D(g_1 - D(g_2 - ...))` along `axis`, recursing on the
/// remaining axes for each slice.
fn nested_integration(terms: &[(&MultiIndex, &DiffPolynomial)], axis: usize, dim: usize) -> DiffPolynomial {
    if axis == dim {
        let mut g = DiffPolynomial::zero();
        for (_, f) in terms {
            g += *f;
        }
        return g;
    }
    let top = terms.iter().map(|(j, _)| j.get(axis)).max().unwrap_or(0);
    let mut acc = DiffPolynomial::zero();
    for k in (0..=top).rev() {
        if !acc.is_zero() {
            acc = -&acc.total_derivative(axis);
        }
        let slice: Vec<_> = terms.iter().filter(|(j, _)| j.get(axis) == k).cloned().collect();
        if !slice.is_empty() {
            acc += &nested_integration(&slice, axis + 1, dim);
        }
    }
    acc
}

/// Reduces a density to its grading-zero representative `θ · g`.
pub fn canonicalize_functional(d: &GradedDensity) -> GradedDensity {
    GradedDensity::bulk(d.dim(), d.canonical_coefficient())
}

/// A local functional `∫ density`, an equivalence class modulo formal
/// divergences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFunctional {
    pub density: GradedDensity,
}

impl LocalFunctional {
    pub fn new(density: GradedDensity) -> Self {
        LocalFunctional { density }
    }

    /// `∫ θ f`
    pub fn bulk(dim: usize, f: DiffPolynomial) -> Self {
        LocalFunctional { density: GradedDensity::bulk(dim, f) }
    }

    pub fn dim(&self) -> usize {
        self.density.dim()
    }

    pub fn canonical(&self) -> LocalFunctional {
        LocalFunctional { density: canonicalize_functional(&self.density) }
    }

    /// `g` in the canonical form `∫ θ g`.
    pub fn canonical_density(&self) -> DiffPolynomial {
        self.density.canonical_coefficient()
    }

    pub fn is_zero(&self) -> bool {
        functional_is_zero(self)
    }

    /// Equality as functionals (difference is a formal divergence).
    pub fn equals(&self, other: &LocalFunctional) -> bool {
        (&self.density - &other.density).canonical_coefficient().is_zero()
    }

    pub fn add(&self, other: &LocalFunctional) -> LocalFunctional {
        LocalFunctional { density: &self.density + &other.density }
    }

    pub fn sub(&self, other: &LocalFunctional) -> LocalFunctional {
        LocalFunctional { density: &self.density - &other.density }
    }

    pub fn scale(&self, c: &Rational) -> LocalFunctional {
        LocalFunctional { density: self.density.scale(c) }
    }
}

pub fn functional_is_zero(f: &LocalFunctional) -> bool {
    f.density.canonical_coefficient().is_zero()
}

/// Full variational derivative `δF/δphi_A = sum_J (-1)^{|J|} E^J_A(f) D_J θ`
/// of a functional, stored by grading `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVariationalDerivative {
    pub field: usize,
    pub components: BTreeMap<MultiIndex, DiffPolynomial>,
    dim: usize,
}

impl GradedVariationalDerivative {
    /// The classical Euler–Lagrange part (grading zero).
    pub fn classical(&self) -> DiffPolynomial {
        self.components.get(&MultiIndex::zero(self.dim)).cloned().unwrap_or_default()
    }

    pub fn component(&self, j: &MultiIndex) -> DiffPolynomial {
        self.components.get(j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// As a graded density `sum_J θ^(J) (-1)^{|J|} E^J_A(f)`.
    pub fn as_density(&self) -> GradedDensity {
        let mut d = GradedDensity::zero(self.dim);
        for (j, c) in &self.components {
            d.add_term(j.clone(), c);
        }
        d
    }
}

/// Canonicalizes first when the functional carries nonzero gradings.
pub fn variational_derivative(f: &LocalFunctional, field: usize) -> GradedVariationalDerivative {
    let g = f.canonical_density();
    let components = higher_euler_all(&g, field)
        .into_iter()
        .map(|(j, e)| {
            let s = sign(j.order());
            (j, e.scale(&s))
        })
        .collect();
    GradedVariationalDerivative { field, components, dim: f.dim() }
}

/// Class of a density in the classical calculus (`θ ≡ 1`), where every
/// total divergence integrates to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardClass {
    pub representative: DiffPolynomial,
    fields: usize,
    dim: usize,
}

impl StandardClass {
    pub fn new(representative: DiffPolynomial, fields: usize, dim: usize) -> Self {
        StandardClass { representative, fields, dim }
    }

    pub fn is_zero(&self) -> bool {
        is_classical_divergence(&self.representative, self.fields, self.dim)
    }

    pub fn equals(&self, other: &StandardClass) -> bool {
        is_classical_divergence(&(&self.representative - &other.representative), self.fields, self.dim)
    }
}

/// Puts `θ ≡ 1`: every `D_J θ` with `|J| > 0` vanishes.
pub fn quotient_to_standard(d: &GradedDensity, fields: usize) -> StandardClass {
    StandardClass::new(d.bulk_part(), fields, d.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn u(k: u32) -> DiffPolynomial {
        DiffPolynomial::jet(0, MultiIndex::new(&[k]))
    }

    fn t(k: u32) -> MultiIndex {
        MultiIndex::new(&[k])
    }

    #[test]
    fn theta_products() {
        assert_eq!(theta_multiply(&t(0), &t(0)), t(0));
        assert_eq!(theta_multiply(&t(1), &t(0)), t(1));
        assert_eq!(theta_multiply(&t(1), &t(1)), t(2));
    }

    #[test]
    fn canonical_examples() {
        // Dθ·u → θ·(−u_x)
        let d = GradedDensity::term(t(1), u(0));
        assert_eq!(canonicalize_functional(&d), GradedDensity::bulk(1, -&u(1)));
        // D(θu) = θ u_x + Dθ u → 0
        let div = GradedDensity::bulk(1, u(0)).total_derivative(0);
        assert!(canonicalize_functional(&div).is_zero());
        // θ u_x is already canonical
        let c = GradedDensity::bulk(1, u(1));
        assert_eq!(canonicalize_functional(&c), c);
    }

    #[test]
    fn zero_test_keeps_real_divergences() {
        let formal = GradedDensity::bulk(1, u(2)).total_derivative(0);
        assert!(functional_is_zero(&LocalFunctional::new(formal)));
        let real = GradedDensity::bulk(1, (&u(0) * &u(0)).scale(&ratio(1, 2)).total_derivative(0));
        assert!(!functional_is_zero(&LocalFunctional::new(real)));
        let mut sum = GradedDensity::bulk(1, u(1));
        sum.add_term(t(1), &u(0));
        assert!(functional_is_zero(&LocalFunctional::new(sum)));
    }

    #[test]
    fn variational_derivative_examples() {
        let f = LocalFunctional::bulk(1, u(1));
        let v = variational_derivative(&f, 0);
        assert_eq!(v.components.len(), 1);
        assert_eq!(v.component(&t(1)), DiffPolynomial::integer(-1));

        let half_sq = LocalFunctional::bulk(1, (&u(0) * &u(0)).scale(&ratio(1, 2)));
        let v = variational_derivative(&half_sq, 0);
        assert_eq!(v.components.len(), 1);
        assert_eq!(v.classical(), u(0));

        let uux = LocalFunctional::bulk(1, &u(0) * &u(1));
        let v = variational_derivative(&uux, 0);
        assert!(v.classical().is_zero());
        // (-1)^1 E^1(u u_x) = -u
        assert_eq!(v.component(&t(1)), -&u(0));
    }

    #[test]
    fn standard_quotient_examples() {
        assert!(quotient_to_standard(&GradedDensity::term(t(1), u(0)), 1).is_zero());
        assert!(quotient_to_standard(&GradedDensity::bulk(1, u(1)), 1).is_zero());
        assert!(!quotient_to_standard(&GradedDensity::bulk(1, &u(0) * &u(0)), 1).is_zero());
    }
}
