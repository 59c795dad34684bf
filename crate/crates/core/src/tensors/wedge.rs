//! The shared wedge engine behind functional forms and multivectors.
//!
//! A basis label `(A, K)` stands for `δphi_A^(K) = D_K δphi_A` on forms and
//! for `D_K δ/δphi_A` on multivectors. Wedge words are kept sorted with the
//! permutation sign folded into the coefficient; repeated labels vanish.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::graded::GradedDensity;
use crate::jet::{multi_binomial, Derivatives, DiffPolynomial, MultiIndex, TotalDerivative};
use crate::{sign, Rational};

/// Basis label `(field, derivative order)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub field: usize,
    pub order: MultiIndex,
}

impl Label {
    pub fn new(field: usize, order: MultiIndex) -> Self {
        Label { field, order }
    }

    pub fn shifted(&self, axis: usize) -> Self {
        Label { field: self.field, order: self.order.increment(axis) }
    }
}

/// A sorted wedge word with no repeated labels.
pub type Wedge = SmallVec<[Label; 4]>;

/// Sorts `labels`, returning the permutation sign, or `None` when a label
/// repeats.
pub fn normalize_wedge(labels: &[Label]) -> Option<(i32, Wedge)> {
    let mut w: Wedge = labels.iter().cloned().collect();
    let mut sgn = 1;
    // insertion sort keeps track of transpositions
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            w.swap(j - 1, j);
            sgn = -sgn;
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((sgn, w))
}

/// Ungraded wedge polynomial `sum c_w w`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WedgePoly {
    terms: BTreeMap<Wedge, DiffPolynomial>,
}

impl TotalDerivative for WedgePoly {
    fn total_derivative(&self, axis: usize) -> Self {
        WedgePoly::total_derivative(self, axis)
    }
    fn is_zero(&self) -> bool {
        WedgePoly::is_zero(self)
    }
}

impl WedgePoly {
    pub fn zero() -> Self {
        WedgePoly::default()
    }

    pub fn scalar(c: DiffPolynomial) -> Self {
        let mut p = Self::zero();
        p.add(&[], &c);
        p
    }

    pub fn single(c: DiffPolynomial, labels: &[Label]) -> Self {
        let mut p = Self::zero();
        p.add(labels, &c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Wedge, &DiffPolynomial)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · l_1 ∧ ... ∧ l_m` for labels in any order.
    pub fn add(&mut self, labels: &[Label], c: &DiffPolynomial) {
        if c.is_zero() {
            return;
        }
        let Some((sgn, w)) = normalize_wedge(labels) else { return };
        self.add_sorted(w, &if sgn < 0 { -c } else { c.clone() });
    }

    pub(crate) fn add_sorted(&mut self, w: Wedge, c: &DiffPolynomial) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_assign(&mut self, other: &WedgePoly) {
        for (w, c) in &other.terms {
            self.add_sorted(w.clone(), c);
        }
    }

    pub fn add_scaled(&mut self, other: &WedgePoly, k: &Rational) {
        if k.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_sorted(w.clone(), &c.scale(k));
        }
    }

    pub fn scale(&self, k: &Rational) -> WedgePoly {
        let mut out = Self::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn mul_poly(&self, p: &DiffPolynomial) -> WedgePoly {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_sorted(w.clone(), &(c * p));
        }
        out
    }

    /// Exterior product.
    pub fn wedge(&self, other: &WedgePoly) -> WedgePoly {
        let mut out = Self::zero();
        let mut buf: Vec<Label> = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                buf.clear();
                buf.extend(a.iter().cloned());
                buf.extend(b.iter().cloned());
                out.add(&buf, &(ca * cb));
            }
        }
        out
    }

    /// `D_axis` by Leibniz over the coefficient and every label.
    pub fn total_derivative(&self, axis: usize) -> WedgePoly {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_sorted(w.clone(), &c.total_derivative(axis));
            for i in 0..w.len() {
                let mut labels: Wedge = w.clone();
                labels[i] = labels[i].shifted(axis);
                out.add(&labels, c);
            }
        }
        out
    }

    pub fn total_derivative_multi(&self, k: &MultiIndex) -> WedgePoly {
        let mut acc = self.clone();
        for (axis, &n) in k.orders().iter().enumerate() {
            for _ in 0..n {
                if acc.is_zero() {
                    return acc;
                }
                acc = acc.total_derivative(axis);
            }
        }
        acc
    }

    /// Largest derivative order among coefficients and labels.
    pub fn max_order(&self) -> u32 {
        self.terms
            .iter()
            .map(|(w, c)| {
                let l = w.iter().map(|l| l.order.order()).max().unwrap_or(0);
                l.max(c.max_order())
            })
            .max()
            .unwrap_or(0)
    }

    /// Number of labels per word, `None` when empty or mixed.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|w| w.len());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

/// Type tag for [`WedgeDensity`]: forms or multivectors.
pub trait Kind: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Dual: Kind<Dual = Self>;
    const NAME: &'static str;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vector;

impl Kind for Form {
    type Dual = Vector;
    const NAME: &'static str = "form";
}

impl Kind for Vector {
    type Dual = Form;
    const NAME: &'static str = "multivector";
}

/// θ-graded wedge density `sum_J θ^(J) W^<J>` of fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeDensity<K: Kind> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, WedgePoly>,
    _kind: PhantomData<K>,
}

/// Functional `m`-form.
pub type FunctionalForm = WedgeDensity<Form>;
/// Functional `m`-vector.
pub type MultiVector = WedgeDensity<Vector>;

impl<K: Kind> WedgeDensity<K> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        WedgeDensity { dim, degree, terms: BTreeMap::new(), _kind: PhantomData }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn gradings(&self) -> impl Iterator<Item = (&MultiIndex, &WedgePoly)> {
        self.terms.iter()
    }

    pub fn at(&self, j: &MultiIndex) -> Option<&WedgePoly> {
        self.terms.get(j)
    }

    /// Number of (grading, word) pairs.
    pub fn len(&self) -> usize {
        self.terms.values().map(WedgePoly::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `θ^(j) c l_1 ∧ ... ∧ l_m` for labels in any order.
    pub fn add_term(&mut self, j: &MultiIndex, labels: &[Label], c: &DiffPolynomial) {
        assert_eq!(labels.len(), self.degree, "degree mismatch in {}", K::NAME);
        let mut p = WedgePoly::zero();
        p.add(labels, c);
        self.add_poly(j, &p);
    }

    /// Adds `θ^(j) p`.
    pub fn add_poly(&mut self, j: &MultiIndex, p: &WedgePoly) {
        if p.is_zero() {
            return;
        }
        debug_assert!(p.degree().is_none_or(|d| d == self.degree));
        let slot = self.terms.entry(j.clone()).or_default();
        slot.add_assign(p);
        if slot.is_zero() {
            self.terms.remove(j);
        }
    }

    pub fn from_poly(j: &MultiIndex, degree: usize, p: &WedgePoly) -> Self {
        let mut out = Self::zero(j.dim(), degree);
        out.add_poly(j, p);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (j, p) in &other.terms {
            out.add_poly(j, p);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (j, p) in &self.terms {
            out.add_poly(j, &p.scale(k));
        }
        out
    }

    pub fn mul_poly(&self, c: &DiffPolynomial) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (j, p) in &self.terms {
            out.add_poly(j, &p.mul_poly(c));
        }
        out
    }

    /// Exterior product with θ gradings added.
    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                out.add_poly(&i.add(j), &a.wedge(b));
            }
        }
        out
    }

    /// `D_axis` acting on θ factors, coefficients and labels.
    pub fn total_derivative(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (j, p) in &self.terms {
            out.add_poly(&j.increment(axis), p);
            out.add_poly(j, &p.total_derivative(axis));
        }
        out
    }

    pub fn max_grading(&self) -> u32 {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn max_order(&self) -> u32 {
        self.terms.values().map(WedgePoly::max_order).max().unwrap_or(0)
    }

    /// `sum_J (-1)^{|J|} D_J W^<J>`: the grading-zero representative after
    /// moving every derivative off θ.
    pub fn canonical_residue(&self) -> WedgePoly {
        let mut out = WedgePoly::zero();
        for (j, p) in &self.terms {
            out.add_scaled(&p.total_derivative_multi(j), &sign(j.order()));
        }
        out
    }

    /// True when the difference is a formal divergence.
    pub fn equals_mod_divergence(&self, other: &Self) -> bool {
        self.sub(other).canonical_residue().is_zero()
    }

    /// Keeps only grading zero (`θ ≡ 1`).
    pub fn standard_part(&self) -> WedgePoly {
        self.terms.get(&MultiIndex::zero(self.dim)).cloned().unwrap_or_default()
    }

    /// Recasts a degree-0 density as a scalar graded density.
    pub fn to_scalar(&self) -> GradedDensity {
        assert_eq!(self.degree, 0, "to_scalar on a {} of degree {}", K::NAME, self.degree);
        let mut out = GradedDensity::zero(self.dim);
        for (j, p) in &self.terms {
            for (_, c) in p.terms() {
                out.add_term(j.clone(), c);
            }
        }
        out
    }

    pub fn from_scalar(d: &GradedDensity) -> Self {
        let mut out = Self::zero(d.dim(), 0);
        for (j, c) in d.terms() {
            out.add_poly(j, &WedgePoly::scalar(c.clone()));
        }
        out
    }

    /// For degree 1: moves every label derivative onto θ so that only
    /// order-zero labels remain, `θ^(J) c D_K e_A ≡ sum_L θ^(J+L) (-1)^{|K|}
    /// C(K,L) D_{K-L} c e_A`.
    pub fn characteristic_form(&self) -> Self {
        assert_eq!(self.degree, 1, "characteristic form needs degree 1");
        let mut out = Self::zero(self.dim, 1);
        for (j, p) in &self.terms {
            for (w, c) in p.terms() {
                let label = &w[0];
                let base = Label::new(label.field, MultiIndex::zero(self.dim));
                let k = &label.order;
                for l in k.sub_indices() {
                    let rest = k.checked_sub(&l).expect("sub index");
                    let coeff = multi_binomial(k, &l) * sign(k.order());
                    let term = c.total_derivative_multi(&rest).scale(&coeff);
                    out.add_term(&j.add(&l), std::slice::from_ref(&base), &term);
                }
            }
        }
        out
    }

    /// Flattened `(grading, monomial, word) -> coefficient` view.
    pub fn flat_terms(&self) -> Vec<(MultiIndex, crate::jet::Monomial, Wedge, Rational)> {
        let mut out = Vec::new();
        for (j, p) in &self.terms {
            for (w, c) in p.terms() {
                for (m, q) in c.terms() {
                    out.push((j.clone(), m.clone(), w.clone(), q.clone()));
                }
            }
        }
        out
    }
}

impl<K: Kind> WedgeDensity<K> {
    /// Interior product of a degree-1 element of the dual kind, contracting
    /// slot `i` with sign `(-1)^{i+1}`. The contracted label's derivative
    /// acts on the dual coefficient; the dual label's derivative acts on
    /// everything that remains.
    pub fn contract_left(&self, one: &WedgeDensity<K::Dual>) -> Self {
        self.contract(one, false)
    }

    /// Same as [`Self::contract_left`] with slots counted from the right,
    /// slot `i` of `m` carrying sign `(-1)^{m-i}`.
    pub fn contract_right(&self, one: &WedgeDensity<K::Dual>) -> Self {
        self.contract(one, true)
    }

    fn contract(&self, one: &WedgeDensity<K::Dual>, from_right: bool) -> Self {
        assert_eq!(one.degree(), 1, "contraction needs a degree-1 argument");
        assert!(self.degree >= 1, "cannot contract into degree 0");
        let m = self.degree;
        let dim = self.dim;
        // derivative tables of the dual coefficients, one per dual term
        let mut duals: Vec<(&MultiIndex, &Label, Derivatives<DiffPolynomial>)> = Vec::new();
        for (i_grade, op) in one.gradings() {
            for (lw, s) in op.terms() {
                duals.push((i_grade, &lw[0], Derivatives::new(s.clone(), dim)));
            }
        }
        let mut acc: BTreeMap<MultiIndex, WedgePoly> = BTreeMap::new();
        for (j_grade, p) in &self.terms {
            for (w, c) in p.terms() {
                for (idx, label) in w.iter().enumerate() {
                    if !duals.iter().any(|(_, d, _)| d.field == label.field) {
                        continue;
                    }
                    let slot_sign = if from_right { sign((m - 1 - idx) as u32) } else { sign(idx as u32) };
                    let rest: Vec<Label> =
                        w.iter().enumerate().filter(|(k, _)| *k != idx).map(|(_, l)| l.clone()).collect();
                    let mut tails = Derivatives::new(WedgePoly::single(c.clone(), &rest), dim);
                    for (i_grade, dual_label, heads) in duals.iter_mut() {
                        if dual_label.field != label.field {
                            continue;
                        }
                        let head = heads.get(&label.order);
                        if head.is_zero() {
                            continue;
                        }
                        let tail = tails.get(&dual_label.order).mul_poly(head);
                        acc.entry(i_grade.add(j_grade)).or_default().add_scaled(&tail, &slot_sign);
                    }
                }
            }
        }
        let mut out = Self::zero(dim, m - 1);
        for (g, p) in &acc {
            out.add_poly(g, p);
        }
        out
    }

    /// Value on `m` arguments of the dual kind, `a_m ⌟ ... a_1 ⌟ self`.
    pub fn evaluate(&self, args: &[WedgeDensity<K::Dual>]) -> Result<GradedDensity, crate::Error> {
        if args.len() != self.degree {
            return Err(crate::Error::DegreeMismatch(format!(
                "{} of degree {} evaluated on {} arguments",
                K::NAME,
                self.degree,
                args.len()
            )));
        }
        let mut acc = self.clone();
        for a in args {
            if a.degree() != 1 {
                return Err(crate::Error::DegreeMismatch("arguments must have degree 1".into()));
            }
            acc = acc.contract_left(a);
        }
        Ok(acc.to_scalar())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(k: u32) -> Label {
        Label::new(0, MultiIndex::new(&[k]))
    }

    #[test]
    fn repeated_labels_vanish() {
        assert!(normalize_wedge(&[l(0), l(1), l(0)]).is_none());
        let (s, w) = normalize_wedge(&[l(2), l(0), l(1)]).unwrap();
        assert_eq!(s, 1);
        assert_eq!(w.as_slice(), &[l(0), l(1), l(2)]);
        let (s, _) = normalize_wedge(&[l(1), l(0)]).unwrap();
        assert_eq!(s, -1);
    }

    #[test]
    fn derivative_of_wedge_word() {
        // D(ξ ∧ ξ1 ∧ ξ2) = ξ ∧ ξ1 ∧ ξ3
        let p = WedgePoly::single(DiffPolynomial::one(), &[l(0), l(1), l(2)]);
        let d = p.total_derivative(0);
        assert_eq!(d, WedgePoly::single(DiffPolynomial::one(), &[l(0), l(1), l(3)]));
    }

    #[test]
    fn characteristic_form_moves_derivatives_to_theta() {
        // θ u D ξ ≡ −Dθ u ξ − θ u_x ξ
        let u = DiffPolynomial::jet(0, MultiIndex::new(&[0]));
        let mut v = MultiVector::zero(1, 1);
        v.add_term(&MultiIndex::new(&[0]), &[l(1)], &u);
        let c = v.characteristic_form();
        let mut expected = MultiVector::zero(1, 1);
        expected.add_term(&MultiIndex::new(&[1]), &[l(0)], &-&u);
        expected.add_term(&MultiIndex::new(&[0]), &[l(0)], &-&DiffPolynomial::jet(0, MultiIndex::new(&[1])));
        assert_eq!(c, expected);
        assert!(v.equals_mod_divergence(&c));
    }
}
