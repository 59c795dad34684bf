//! Evolutionary vector fields and their identification with 1-vectors.

use crate::graded::{GradedDensity, LocalFunctional};
use crate::jet::{DiffPolynomial, MultiIndex};
use crate::tensors::wedge::{Label, MultiVector};
use crate::Error;

/// Evolutionary vector field given by graded characteristics `ψ_A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvolutionaryVectorField {
    dim: usize,
    chars: Vec<GradedDensity>,
}

impl EvolutionaryVectorField {
    pub fn new(dim: usize, chars: Vec<GradedDensity>) -> Self {
        assert!(chars.iter().all(|c| c.dim() == dim), "characteristic of the wrong dimension");
        EvolutionaryVectorField { dim, chars }
    }

    /// Field with grading-zero characteristics.
    pub fn from_polys(dim: usize, chars: &[DiffPolynomial]) -> Self {
        Self::new(dim, chars.iter().map(|c| GradedDensity::bulk(dim, c.clone())).collect())
    }

    pub fn zero(dim: usize, fields: usize) -> Self {
        Self::new(dim, vec![GradedDensity::zero(dim); fields])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn characteristics(&self) -> &[GradedDensity] {
        &self.chars
    }

    pub fn is_zero(&self) -> bool {
        self.chars.iter().all(GradedDensity::is_zero)
    }

    /// `∫θ^(J) ψ_A^<J> δ/δφ_A`.
    pub fn to_onevector(&self) -> MultiVector {
        let mut v = MultiVector::zero(self.dim, 1);
        for (a, psi) in self.chars.iter().enumerate() {
            let label = Label::new(a, MultiIndex::zero(self.dim));
            for (j, c) in psi.terms() {
                v.add_term(j, std::slice::from_ref(&label), c);
            }
        }
        v
    }

    /// Reads characteristics off the canonical form of a 1-vector.
    pub fn from_onevector(v: &MultiVector, fields: usize) -> Result<Self, Error> {
        if v.degree() != 1 {
            return Err(Error::DegreeMismatch(format!("expected a 1-vector, got degree {}", v.degree())));
        }
        let mut chars = vec![GradedDensity::zero(v.dim()); fields];
        for (j, p) in v.characteristic_form().gradings() {
            for (w, c) in p.terms() {
                let a = w[0].field;
                if a >= fields {
                    return Err(Error::FieldMismatch { expected: fields, got: a + 1 });
                }
                chars[a].add_term(j.clone(), c);
            }
        }
        Ok(Self::new(v.dim(), chars))
    }

    /// True when the two fields agree as 1-vectors modulo formal divergences.
    pub fn equals_mod_divergence(&self, other: &Self) -> bool {
        self.to_onevector().equals_mod_divergence(&other.to_onevector())
    }

    pub fn scale(&self, k: &crate::Rational) -> Self {
        Self::new(self.dim, self.chars.iter().map(|c| c.scale(k)).collect())
    }
}

/// `∫θ^(I+J) D_K ψ_A^<J> ∂f^<I>/∂φ_A^(K)`.
pub fn vf_action(xi: &EvolutionaryVectorField, f: &LocalFunctional) -> LocalFunctional {
    let mut out = GradedDensity::zero(f.dim());
    for (i, g) in f.density.terms() {
        for v in g.jet_vars() {
            let Some(psi) = xi.chars.get(v.field) else { continue };
            let dg = g.partial(&v);
            for (j, c) in psi.terms() {
                out.add_term(i.add(j), &(&dg * &c.total_derivative_multi(&v.order)));
            }
        }
    }
    LocalFunctional::new(out)
}

/// Characteristic `D_L ξ ∂λ/∂φ^(L) − D_L λ ∂ξ/∂φ^(L)` with gradings added.
pub fn commutator(xi: &EvolutionaryVectorField, lambda: &EvolutionaryVectorField) -> EvolutionaryVectorField {
    let fields = xi.chars.len().max(lambda.chars.len());
    let mut chars = vec![GradedDensity::zero(xi.dim); fields];
    let push = |out: &mut Vec<GradedDensity>, acting: &EvolutionaryVectorField, target: &EvolutionaryVectorField, sgn: i64| {
        for (a, t) in target.chars.iter().enumerate() {
            for (j, c) in t.terms() {
                for v in c.jet_vars() {
                    let Some(psi) = acting.chars.get(v.field) else { continue };
                    let dc = c.partial(&v);
                    for (i, p) in psi.terms() {
                        let term = (&dc * &p.total_derivative_multi(&v.order)).scale(&crate::ratio(sgn, 1));
                        out[a].add_term(i.add(j), &term);
                    }
                }
            }
        }
    };
    push(&mut chars, xi, lambda, 1);
    push(&mut chars, lambda, xi, -1);
    EvolutionaryVectorField::new(xi.dim, chars)
}

pub fn vf_to_onevector(xi: &EvolutionaryVectorField) -> MultiVector {
    xi.to_onevector()
}

pub fn onevector_to_vf(v: &MultiVector, fields: usize) -> Result<EvolutionaryVectorField, Error> {
    EvolutionaryVectorField::from_onevector(v, fields)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn u(k: u32) -> DiffPolynomial {
        DiffPolynomial::jet(0, MultiIndex::new(&[k]))
    }

    #[test]
    fn action_of_translation() {
        let xi = EvolutionaryVectorField::from_polys(1, &[u(1)]);
        let f = LocalFunctional::bulk(1, u(0).pow(2).scale(&ratio(1, 2)));
        assert!(vf_action(&xi, &f).equals(&LocalFunctional::bulk(1, &u(0) * &u(1))));
        let zero = EvolutionaryVectorField::zero(1, 1);
        assert!(vf_action(&zero, &f).is_zero());
    }

    #[test]
    fn commutator_examples() {
        let t = EvolutionaryVectorField::from_polys(1, &[u(1)]);
        let s = EvolutionaryVectorField::from_polys(1, &[u(0)]);
        let k = EvolutionaryVectorField::from_polys(1, &[u(3)]);
        assert!(commutator(&t, &s).is_zero());
        assert!(commutator(&t, &k).is_zero());
        let q = EvolutionaryVectorField::from_polys(1, &[&u(0) * &u(1)]);
        assert!(commutator(&q, &q).is_zero());
    }

    #[test]
    fn onevector_round_trip() {
        let xi = EvolutionaryVectorField::new(
            1,
            vec![{
                let mut d = GradedDensity::bulk(1, u(1));
                d.add_term(MultiIndex::new(&[1]), &u(0).pow(2));
                d
            }],
        );
        let v = vf_to_onevector(&xi);
        assert_eq!(onevector_to_vf(&v, 1).unwrap(), xi);
    }
}
