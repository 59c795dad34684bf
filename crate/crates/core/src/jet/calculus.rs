use std::collections::BTreeMap;

use super::derivs::Derivatives;
use super::multiindex::{multi_binomial, MultiIndex};
use super::poly::{DiffPolynomial, JetVar};
use crate::{sign, Error, Space};

/// `D_axis f` for a 1-based `axis` as written by users.
pub fn total_derivative(space: &Space, f: &DiffPolynomial, axis: usize) -> Result<DiffPolynomial, Error> {
    if axis == 0 || axis > space.dim() {
        return Err(Error::AxisOutOfRange { axis, dim: space.dim() });
    }
    Ok(f.total_derivative(axis - 1))
}

/// A scalar linear differential operator `sum_N c_N D_N`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperatorRow {
    pub coeffs: BTreeMap<MultiIndex, DiffPolynomial>,
}

impl OperatorRow {
    pub fn zero() -> Self {
        OperatorRow::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, n: MultiIndex, c: &DiffPolynomial) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(n.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn add(&self, other: &OperatorRow) -> OperatorRow {
        let mut out = self.clone();
        for (n, c) in &other.coeffs {
            out.add_term(n.clone(), c);
        }
        out
    }

    pub fn scale_poly(&self, p: &DiffPolynomial) -> OperatorRow {
        let mut out = OperatorRow::zero();
        for (n, c) in &self.coeffs {
            out.add_term(n.clone(), &(c * p));
        }
        out
    }

    pub fn apply(&self, eta: &DiffPolynomial) -> DiffPolynomial {
        let mut out = DiffPolynomial::zero();
        for (n, c) in &self.coeffs {
            out += &(c * &eta.total_derivative_multi(n));
        }
        out
    }

    /// `D_axis ∘ self`
    pub fn after_total_derivative(&self, axis: usize) -> OperatorRow {
        let mut out = OperatorRow::zero();
        for (n, c) in &self.coeffs {
            out.add_term(n.clone(), &c.total_derivative(axis));
            out.add_term(n.increment(axis), c);
        }
        out
    }
}

/// `f'_A = sum_J (∂f/∂phi_A^(J)) D_J`
pub fn frechet_derivative(f: &DiffPolynomial, field: usize) -> OperatorRow {
    let mut row = OperatorRow::zero();
    for v in f.jet_vars() {
        if v.field == field {
            row.add_term(v.order.clone(), &f.partial(&v));
        }
    }
    row
}

/// Applies the Fréchet derivative of `f` in the direction `eta` (one
/// polynomial per field): `sum_A f'_A(eta_A)`.
pub fn frechet_apply(f: &DiffPolynomial, eta: &[DiffPolynomial]) -> DiffPolynomial {
    let mut out = DiffPolynomial::zero();
    for v in f.jet_vars() {
        let d = eta[v.field].total_derivative_multi(&v.order);
        out += &(&f.partial(&v) * &d);
    }
    out
}

/// Second Fréchet derivative as the symmetric table of mixed partials
/// `∂²f / ∂phi_A^(J) ∂phi_B^(K)` over ordered pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SecondFrechet {
    pub entries: BTreeMap<(JetVar, JetVar), DiffPolynomial>,
}

impl SecondFrechet {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, a: &JetVar, b: &JetVar) -> Option<&DiffPolynomial> {
        self.entries.get(&(a.clone(), b.clone()))
    }

    /// `f''(xi, eta)` for per-field directions.
    pub fn apply(&self, xi: &[DiffPolynomial], eta: &[DiffPolynomial]) -> DiffPolynomial {
        let mut out = DiffPolynomial::zero();
        for ((a, b), c) in &self.entries {
            let da = xi[a.field].total_derivative_multi(&a.order);
            let db = eta[b.field].total_derivative_multi(&b.order);
            out += &(&(c * &da) * &db);
        }
        out
    }
}

pub fn second_frechet(f: &DiffPolynomial) -> SecondFrechet {
    let vars: Vec<JetVar> = f.jet_vars().into_iter().collect();
    let mut entries = BTreeMap::new();
    for a in &vars {
        let fa = f.partial(a);
        if fa.is_zero() {
            continue;
        }
        for b in &vars {
            let fab = fa.partial(b);
            if !fab.is_zero() {
                entries.insert((a.clone(), b.clone()), fab);
            }
        }
    }
    SecondFrechet { entries }
}

/// Higher Eulerian operator
/// `E^J_A(f) = sum_K (-1)^{|K|+|J|} C(K,J) D_{K-J} ∂f/∂phi_A^(K)`.
pub fn higher_euler(f: &DiffPolynomial, field: usize, j: &MultiIndex) -> DiffPolynomial {
    let mut out = DiffPolynomial::zero();
    for v in f.jet_vars() {
        if v.field != field {
            continue;
        }
        let Some(rest) = v.order.checked_sub(j) else { continue };
        let c = multi_binomial(&v.order, j) * sign(v.order.order() + j.order());
        out.add_scaled(&f.partial(&v).total_derivative_multi(&rest), &c);
    }
    out
}

/// Every nonzero `E^J_A(f)` keyed by `J`.
pub fn higher_euler_all(f: &DiffPolynomial, field: usize) -> BTreeMap<MultiIndex, DiffPolynomial> {
    let mut out: BTreeMap<MultiIndex, DiffPolynomial> = BTreeMap::new();
    for v in f.jet_vars() {
        if v.field != field {
            continue;
        }
        let mut table = Derivatives::new(f.partial(&v), v.order.dim());
        for j in v.order.sub_indices() {
            let rest = v.order.checked_sub(&j).expect("sub index");
            let c = multi_binomial(&v.order, &j) * sign(v.order.order() + j.order());
            out.entry(j).or_default().add_scaled(table.get(&rest), &c);
        }
    }
    out.retain(|_, e| !e.is_zero());
    out
}

/// Classical Euler–Lagrange derivative `E^0_A(f)`.
pub fn euler_lagrange(f: &DiffPolynomial, field: usize, dim: usize) -> DiffPolynomial {
    higher_euler(f, field, &MultiIndex::zero(dim))
}

/// `sum_J D_J(E^J_A(f) eta_A)`, the integrated-by-parts form of `f'(eta)`.
pub fn euler_reconstruction(f: &DiffPolynomial, eta: &[DiffPolynomial]) -> DiffPolynomial {
    let mut out = DiffPolynomial::zero();
    for (field, e) in eta.iter().enumerate() {
        for (j, ej) in higher_euler_all(f, field) {
            out += &(&ej * e).total_derivative_multi(&j);
        }
    }
    out
}

/// True when `f` is a total divergence in the classical sense (every
/// Euler–Lagrange derivative vanishes). Constants count as divergences
/// since `c = D_1(c x^1)`.
pub fn is_classical_divergence(f: &DiffPolynomial, fields: usize, dim: usize) -> bool {
    if dim == 0 {
        return f.is_zero();
    }
    (0..fields).all(|a| euler_lagrange(f, a, dim).is_zero())
}
