//! Differentials, pairings, interior products and Lie derivatives of forms.

use crate::graded::LocalFunctional;
use crate::tensors::wedge::{FunctionalForm, Label, MultiVector, WedgePoly};
use crate::Error;

/// First variation `dF = ∫θ^(J) ∂f^<J>/∂φ_A^(K) δφ_A^(K)`.
pub fn differential(f: &LocalFunctional) -> FunctionalForm {
    form_differential(&FunctionalForm::from_scalar(&f.density))
}

/// Exterior differential: each coefficient is differentiated in every jet
/// variable and the matching `δφ` label is prepended.
pub fn form_differential(sigma: &FunctionalForm) -> FunctionalForm {
    let mut out = FunctionalForm::zero(sigma.dim(), sigma.degree() + 1);
    let mut labels: Vec<Label> = Vec::new();
    for (j, p) in sigma.gradings() {
        let mut acc = WedgePoly::zero();
        for (w, c) in p.terms() {
            for v in c.jet_vars() {
                labels.clear();
                labels.push(Label::new(v.field, v.order.clone()));
                labels.extend(w.iter().cloned());
                acc.add(&labels, &c.partial(&v));
            }
        }
        out.add_poly(j, &acc);
    }
    out
}

fn check_dims(a: usize, b: usize) -> Result<(), Error> {
    if a != b {
        return Err(Error::Dimension(format!("dimension {a} against dimension {b}")));
    }
    Ok(())
}

/// Trace pairing of a 1-vector with a 1-form.
pub fn pairing(xi: &MultiVector, sigma: &FunctionalForm) -> Result<LocalFunctional, Error> {
    if xi.degree() != 1 || sigma.degree() != 1 {
        return Err(Error::DegreeMismatch(format!(
            "pairing needs degrees (1, 1), got ({}, {})",
            xi.degree(),
            sigma.degree()
        )));
    }
    check_dims(xi.dim(), sigma.dim())?;
    Ok(LocalFunctional::new(sigma.contract_left(xi).to_scalar()))
}

/// `Ξ ⌟ Σ` for a 1-vector and an `m`-form, `m ≥ 1`.
pub fn interior_product(xi: &MultiVector, sigma: &FunctionalForm) -> Result<FunctionalForm, Error> {
    if xi.degree() != 1 {
        return Err(Error::DegreeMismatch(format!("contracting a {}-vector", xi.degree())));
    }
    if sigma.degree() == 0 {
        return Err(Error::DegreeMismatch("cannot contract into a 0-form".into()));
    }
    check_dims(xi.dim(), sigma.dim())?;
    Ok(sigma.contract_left(xi))
}

/// `α ⌟ V` for a 1-form and an `m`-vector, `m ≥ 1`.
pub fn interior_product_form(alpha: &FunctionalForm, v: &MultiVector) -> Result<MultiVector, Error> {
    if alpha.degree() != 1 {
        return Err(Error::DegreeMismatch(format!("contracting a {}-form", alpha.degree())));
    }
    if v.degree() == 0 {
        return Err(Error::DegreeMismatch("cannot contract into a 0-vector".into()));
    }
    check_dims(alpha.dim(), v.dim())?;
    Ok(v.contract_left(alpha))
}

/// Cartan formula `L_Ξ Σ = Ξ⌟dΣ + d(Ξ⌟Σ)`.
pub fn lie_derivative(xi: &MultiVector, sigma: &FunctionalForm) -> Result<FunctionalForm, Error> {
    let first = interior_product(xi, &form_differential(sigma))?;
    if sigma.degree() == 0 {
        return Ok(first);
    }
    Ok(first.add(&form_differential(&interior_product(xi, sigma)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GradedDensity;
    use crate::jet::{DiffPolynomial, MultiIndex};
    use crate::ratio;

    fn mi(k: u32) -> MultiIndex {
        MultiIndex::new(&[k])
    }
    fn u(k: u32) -> DiffPolynomial {
        DiffPolynomial::jet(0, mi(k))
    }
    fn l(k: u32) -> Label {
        Label::new(0, mi(k))
    }

    #[test]
    fn differential_examples() {
        let f = LocalFunctional::bulk(1, u(0).pow(2).scale(&ratio(1, 2)));
        let mut expected = FunctionalForm::zero(1, 1);
        expected.add_term(&mi(0), &[l(0)], &u(0));
        assert_eq!(differential(&f), expected);

        let g = LocalFunctional::bulk(1, &u(0) * &u(1));
        let mut expected = FunctionalForm::zero(1, 1);
        expected.add_term(&mi(0), &[l(0)], &u(1));
        expected.add_term(&mi(0), &[l(1)], &u(0));
        assert_eq!(differential(&g), expected);
        assert!(form_differential(&differential(&g)).is_zero());
    }

    #[test]
    fn form_differential_examples() {
        let mut s = FunctionalForm::zero(1, 1);
        s.add_term(&mi(0), &[l(0)], &u(0));
        assert!(form_differential(&s).is_zero());
        let mut s = FunctionalForm::zero(1, 1);
        s.add_term(&mi(0), &[l(0)], &u(1));
        let mut expected = FunctionalForm::zero(1, 2);
        expected.add_term(&mi(0), &[l(1), l(0)], &DiffPolynomial::one());
        assert_eq!(form_differential(&s), expected);
    }

    #[test]
    fn pairing_examples() {
        let mut s = FunctionalForm::zero(1, 1);
        s.add_term(&mi(0), &[l(0)], &u(0));
        let mut xi = MultiVector::zero(1, 1);
        xi.add_term(&mi(0), &[l(0)], &u(1));
        let p = pairing(&xi, &s).unwrap();
        assert_eq!(p.density, GradedDensity::bulk(1, &u(0) * &u(1)));

        let mut b = FunctionalForm::zero(1, 1);
        b.add_term(&mi(1), &[l(0)], &DiffPolynomial::one());
        let mut one = MultiVector::zero(1, 1);
        one.add_term(&mi(0), &[l(0)], &DiffPolynomial::one());
        let p = pairing(&one, &b).unwrap();
        assert_eq!(p.density, GradedDensity::term(mi(1), DiffPolynomial::one()));
        assert!(pairing(&one, &FunctionalForm::zero(1, 1)).unwrap().is_zero());
        assert!(pairing(&one, &FunctionalForm::zero(1, 2)).is_err());
    }

    #[test]
    fn lie_derivative_example() {
        let mut s = FunctionalForm::zero(1, 1);
        s.add_term(&mi(0), &[l(0)], &u(0));
        let mut xi = MultiVector::zero(1, 1);
        xi.add_term(&mi(0), &[l(0)], &u(1));
        let mut expected = FunctionalForm::zero(1, 1);
        expected.add_term(&mi(0), &[l(0)], &u(1));
        expected.add_term(&mi(0), &[l(1)], &u(0));
        assert_eq!(lie_derivative(&xi, &s).unwrap(), expected);
        assert!(lie_derivative(&MultiVector::zero(1, 1), &s).unwrap().is_zero());
    }

    #[test]
    fn two_form_value_is_antisymmetric() {
        let mut s = FunctionalForm::zero(1, 2);
        s.add_term(&mi(0), &[l(0), l(1)], &u(0));
        let mut a = MultiVector::zero(1, 1);
        a.add_term(&mi(0), &[l(0)], &u(2));
        let mut b = MultiVector::zero(1, 1);
        b.add_term(&mi(0), &[l(0)], &u(0).pow(2));
        let ab = LocalFunctional::new(s.evaluate(&[a.clone(), b.clone()]).unwrap());
        let ba = LocalFunctional::new(s.evaluate(&[b, a]).unwrap());
        assert!(ab.add(&ba).is_zero());
        assert!(!ab.is_zero());
    }
}
