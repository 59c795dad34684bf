use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::multiindex::MultiIndex;
use crate::Rational;

/// The jet coordinate `phi_A^(J)`: field `A` differentiated `J` times.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetVar {
    pub field: usize,
    pub order: MultiIndex,
}

impl JetVar {
    pub fn new(field: usize, order: MultiIndex) -> Self {
        JetVar { field, order }
    }

    pub fn shifted(&self, axis: usize) -> Self {
        JetVar { field: self.field, order: self.order.increment(axis) }
    }

    pub fn shifted_by(&self, by: &MultiIndex) -> Self {
        JetVar { field: self.field, order: self.order.add(by) }
    }
}

/// A product of jet variables and base coordinates with positive exponents.
///
/// `vars` is sorted by [`JetVar`] with no repeats; `coords` holds the
/// exponents of `x^1..x^n` with trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    vars: SmallVec<[(JetVar, u32); 4]>,
    coords: SmallVec<[u32; 3]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: JetVar) -> Self {
        let mut vars = SmallVec::new();
        vars.push((v, 1));
        Monomial { vars, coords: SmallVec::new() }
    }

    pub fn coord(axis: usize) -> Self {
        let mut coords: SmallVec<[u32; 3]> = SmallVec::from_elem(0, axis + 1);
        coords[axis] = 1;
        Monomial { vars: SmallVec::new(), coords }
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty() && self.coords.is_empty()
    }

    pub fn vars(&self) -> &[(JetVar, u32)] {
        &self.vars
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn coord_exponent(&self, axis: usize) -> u32 {
        self.coords.get(axis).copied().unwrap_or(0)
    }

    pub fn exponent(&self, v: &JetVar) -> u32 {
        self.vars
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.vars[i].1)
            .unwrap_or(0)
    }

    /// Total polynomial degree in the jet variables.
    pub fn degree(&self) -> u32 {
        self.vars.iter().map(|(_, e)| e).sum()
    }

    pub fn max_order(&self) -> u32 {
        self.vars.iter().map(|(v, _)| v.order.order()).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut vars = SmallVec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() && j < other.vars.len() {
            let (a, ea) = &self.vars[i];
            let (b, eb) = &other.vars[j];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    vars.push((a.clone(), *ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    vars.push((b.clone(), *eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    vars.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        vars.extend(self.vars[i..].iter().cloned());
        vars.extend(other.vars[j..].iter().cloned());
        let len = self.coords.len().max(other.coords.len());
        let mut coords: SmallVec<[u32; 3]> = SmallVec::with_capacity(len);
        for k in 0..len {
            coords.push(self.coord_exponent(k) + other.coord_exponent(k));
        }
        Monomial { vars, coords }
    }

    /// Total exponent of the base coordinates.
    pub fn coord_degree(&self) -> u32 {
        self.coords.iter().sum()
    }

    /// Monomials whose total derivative along `axis` contains `self`: one jet
    /// factor lowered by `e_axis`, or one extra power of `x^axis`.
    pub fn lowerings(&self, axis: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        for (v, _) in &self.vars {
            if v.order.get(axis) == 0 {
                continue;
            }
            let lowered = JetVar::new(v.field, v.order.decrement(axis).expect("positive order"));
            let (_, rest) = self.lower(v).expect("present");
            out.push(rest.mul(&Monomial::var(lowered)));
        }
        out.push(self.mul(&Monomial::coord(axis)));
        out
    }

    /// Removes one power of `v`, returning the exponent it had.
    fn lower(&self, v: &JetVar) -> Option<(u32, Monomial)> {
        let idx = self.vars.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let e = self.vars[idx].1;
        let mut out = self.clone();
        if e == 1 {
            out.vars.remove(idx);
        } else {
            out.vars[idx].1 -= 1;
        }
        Some((e, out))
    }

    fn lower_coord(&self, axis: usize) -> Option<(u32, Monomial)> {
        let e = self.coord_exponent(axis);
        if e == 0 {
            return None;
        }
        let mut out = self.clone();
        out.coords[axis] -= 1;
        while out.coords.last() == Some(&0) {
            out.coords.pop();
        }
        Some((e, out))
    }
}

/// An exact polynomial in jet variables (and optionally base coordinates).
///
/// The zero polynomial has no terms; no stored coefficient is ever zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl DiffPolynomial {
    pub fn zero() -> Self {
        DiffPolynomial::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(v: JetVar) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    /// The jet variable `phi_field^(J)` as a polynomial.
    pub fn jet(field: usize, order: MultiIndex) -> Self {
        Self::var(JetVar::new(field, order))
    }

    pub fn coord(axis: usize) -> Self {
        Self::term(Rational::one(), Monomial::coord(axis))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant term when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &DiffPolynomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> DiffPolynomial {
        if c.is_zero() {
            return Self::zero();
        }
        DiffPolynomial { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> DiffPolynomial {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Largest `|J|` among the jet variables present (0 for constants).
    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(Monomial::max_order).max().unwrap_or(0)
    }

    /// Largest order of field `field` present, `None` if absent.
    pub fn max_order_in(&self, field: usize) -> Option<u32> {
        self.jet_vars()
            .into_iter()
            .filter(|v| v.field == field)
            .map(|v| v.order.order())
            .max()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn jet_vars(&self) -> BTreeSet<JetVar> {
        self.terms
            .keys()
            .flat_map(|m| m.vars.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn depends_on_coords(&self) -> bool {
        self.terms.keys().any(|m| !m.coords.is_empty())
    }

    /// `∂f/∂phi_A^(J)`
    pub fn partial(&self, v: &JetVar) -> DiffPolynomial {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.lower(v) {
                out.add_term(rest, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// `∂f/∂x^axis` (explicit dependence only).
    pub fn partial_coord(&self, axis: usize) -> DiffPolynomial {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.lower_coord(axis) {
                out.add_term(rest, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Total derivative `D_axis` (0-based axis).
    pub fn total_derivative(&self, axis: usize) -> DiffPolynomial {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.lower_coord(axis) {
                out.add_term(rest, c * Rational::from_integer(e.into()));
            }
            for (v, e) in &m.vars {
                let (_, rest) = m.lower(v).expect("variable present");
                let shifted = Monomial::var(v.shifted(axis));
                out.add_term(rest.mul(&shifted), c * Rational::from_integer((*e).into()));
            }
        }
        out
    }

    /// `D_J = D_1^{j_1} ... D_n^{j_n}`
    pub fn total_derivative_multi(&self, j: &MultiIndex) -> DiffPolynomial {
        let mut acc = self.clone();
        for (axis, &k) in j.orders().iter().enumerate() {
            for _ in 0..k {
                if acc.is_zero() {
                    return acc;
                }
                acc = acc.total_derivative(axis);
            }
        }
        acc
    }

    /// Replaces every jet variable via `subst`, expanding products exactly.
    pub fn substitute(&self, subst: &dyn Fn(&JetVar) -> DiffPolynomial) -> DiffPolynomial {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPolynomial::term(
                c.clone(),
                Monomial { vars: SmallVec::new(), coords: m.coords.clone() },
            );
            for (v, e) in &m.vars {
                acc = &acc * &subst(v).pow(*e);
            }
            out += &acc;
        }
        out
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }
}

impl From<Rational> for DiffPolynomial {
    fn from(c: Rational) -> Self {
        DiffPolynomial::constant(c)
    }
}

impl AddAssign<&DiffPolynomial> for DiffPolynomial {
    fn add_assign(&mut self, rhs: &DiffPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&DiffPolynomial> for DiffPolynomial {
    fn sub_assign(&mut self, rhs: &DiffPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn add(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn sub(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn neg(self) -> DiffPolynomial {
        DiffPolynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Mul for &DiffPolynomial {
    type Output = DiffPolynomial;
    fn mul(self, rhs: &DiffPolynomial) -> DiffPolynomial {
        let mut out = DiffPolynomial::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: u32) -> DiffPolynomial {
        DiffPolynomial::jet(0, MultiIndex::new(&[k]))
    }

    #[test]
    fn leibniz_on_product() {
        // D(u u_x) = u_x^2 + u u_xx
        let f = &u(0) * &u(1);
        let expected = &(&u(1) * &u(1)) + &(&u(0) * &u(2));
        assert_eq!(f.total_derivative(0), expected);
    }

    #[test]
    fn constants_and_prolongation() {
        assert!(DiffPolynomial::integer(7).total_derivative(0).is_zero());
        assert_eq!(u(0).total_derivative_multi(&MultiIndex::new(&[2])), u(2));
    }

    #[test]
    fn explicit_coordinates_are_differentiated() {
        // D_x(x u) = u + x u_x
        let f = &DiffPolynomial::coord(0) * &u(0);
        let expected = &u(0) + &(&DiffPolynomial::coord(0) * &u(1));
        assert_eq!(f.total_derivative(0), expected);
    }

    #[test]
    fn cancellation_gives_canonical_zero() {
        let f = &u(1) - &u(1);
        assert!(f.is_zero());
        assert_eq!(f, DiffPolynomial::zero());
    }
}
