//! The Schouten–Nijenhuis bracket of functional multivectors.
//!
//! Sign conventions: `[P, Q] = dP⌟Q + (-1)^{pq} dQ⌟P`, where the mixed
//! tensor `dP` is contracted into `Q` counting slots from the right. With
//! this choice the bracket of two 1-vectors is minus their commutator, and
//! the general bracket agrees with the operator form
//! `[Î, K̂] = ½∫ξ∧Î'(K̂ξ)∧ξ + ½∫ξ∧K̂'(Îξ)∧ξ` for antisymmetric operators.

use crate::jet::MultiIndex;
use crate::operators::GradedDiffOperator;
use crate::tensors::wedge::{Label, MultiVector, WedgePoly};
use crate::{ratio, sign, Error};

/// `½∫ξ_A ∧ Î_AB ξ_B`.
pub fn bivector_of_operator(op: &GradedDiffOperator) -> MultiVector {
    let mut out = MultiVector::zero(op.dim(), 2);
    let half = ratio(1, 2);
    for (k, c) in op.terms() {
        let left = Label::new(k.row, MultiIndex::zero(op.dim()));
        let right = Label::new(k.col, k.order.clone());
        out.add_term(&k.grading, &[left, right], &c.scale(&half));
    }
    out
}

/// Contracts the differential of `p` into `q`.
fn mixed_contraction(p: &MultiVector, q: &MultiVector) -> MultiVector {
    let qdeg = q.degree();
    let mut out = MultiVector::zero(p.dim(), p.degree() + qdeg - 1);
    for (jp, pp) in p.gradings() {
        for (wp, c) in pp.terms() {
            for v in c.jet_vars() {
                let base = WedgePoly::single(c.partial(&v), wp);
                for (jq, qp) in q.gradings() {
                    let mut acc = WedgePoly::zero();
                    for (wq, qc) in qp.terms() {
                        for (idx, label) in wq.iter().enumerate() {
                            if label.field != v.field {
                                continue;
                            }
                            let slot_sign = sign((qdeg - 1 - idx) as u32);
                            let left = base.total_derivative_multi(&label.order);
                            if left.is_zero() {
                                continue;
                            }
                            let rest: Vec<Label> =
                                wq.iter().enumerate().filter(|(k, _)| *k != idx).map(|(_, l)| l.clone()).collect();
                            let right = WedgePoly::single(qc.clone(), &rest).total_derivative_multi(&v.order);
                            acc.add_scaled(&left.wedge(&right), &slot_sign);
                        }
                    }
                    out.add_poly(&jp.add(jq), &acc);
                }
            }
        }
    }
    out
}

/// General Schouten–Nijenhuis bracket of a `p`-vector and a `q`-vector.
pub fn sn_bracket(p: &MultiVector, q: &MultiVector) -> Result<MultiVector, Error> {
    if p.dim() != q.dim() {
        return Err(Error::Dimension(format!("bracket of dimension {} with dimension {}", p.dim(), q.dim())));
    }
    if p.degree() == 0 || q.degree() == 0 {
        return Err(Error::DegreeMismatch("bracket arguments must have degree at least 1".into()));
    }
    let s = sign((p.degree() * q.degree()) as u32);
    Ok(mixed_contraction(p, q).add(&mixed_contraction(q, p).scale(&s)))
}

/// Bracket of the bivectors of two antisymmetric operators via their
/// coefficient derivatives.
pub fn sn_bracket_bivectors(i_op: &GradedDiffOperator, k_op: &GradedDiffOperator) -> Result<MultiVector, Error> {
    if i_op.dim() != k_op.dim() || i_op.size() != k_op.size() {
        return Err(Error::FieldMismatch { expected: i_op.size(), got: k_op.size() });
    }
    for (name, op) in [("first", i_op), ("second", k_op)] {
        if !op.is_antisymmetric() {
            return Err(Error::NotAntisymmetric(format!("{name} operator differs from minus its adjoint")));
        }
    }
    Ok(prolonged(i_op, k_op).add(&prolonged(k_op, i_op)))
}

/// `½∫ξ ∧ Î'(K̂ξ) ∧ ξ`.
fn prolonged(i_op: &GradedDiffOperator, k_op: &GradedDiffOperator) -> MultiVector {
    let dim = i_op.dim();
    let half = ratio(1, 2);
    // K̂ξ per row as a graded 1-vector density
    let mut k_xi: Vec<Vec<(MultiIndex, WedgePoly)>> = vec![Vec::new(); k_op.size()];
    for (k, c) in k_op.terms() {
        let w = WedgePoly::single(c.clone(), &[Label::new(k.col, k.order.clone())]);
        k_xi[k.row].push((k.grading.clone(), w));
    }
    let mut out = MultiVector::zero(dim, 3);
    for (k, c) in i_op.terms() {
        let head = WedgePoly::single(ratio(1, 1).into(), &[Label::new(k.row, MultiIndex::zero(dim))]);
        let tail = WedgePoly::single(ratio(1, 1).into(), &[Label::new(k.col, k.order.clone())]);
        for v in c.jet_vars() {
            let dc = c.partial(&v);
            for (g, w) in &k_xi[v.field] {
                let middle = w.total_derivative_multi(&v.order).mul_poly(&dc);
                let term = head.wedge(&middle).wedge(&tail).scale(&half);
                out.add_poly(&k.grading.add(g), &term);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::DiffPolynomial;
    use crate::tensors::fields::{commutator, EvolutionaryVectorField};

    fn mi(k: u32) -> MultiIndex {
        MultiIndex::new(&[k])
    }
    fn u(k: u32) -> DiffPolynomial {
        DiffPolynomial::jet(0, mi(k))
    }

    #[test]
    fn one_vectors_give_minus_commutator() {
        let a = EvolutionaryVectorField::from_polys(1, &[&u(0) * &u(2)]);
        let b = EvolutionaryVectorField::from_polys(1, &[u(1).pow(2)]);
        let lhs = sn_bracket(&a.to_onevector(), &b.to_onevector()).unwrap();
        let rhs = commutator(&a, &b).to_onevector().scale(&ratio(-1, 1));
        assert!(lhs.equals_mod_divergence(&rhs));
        assert!(!rhs.is_zero());
    }

    #[test]
    fn constant_bivector_brackets_to_zero() {
        let op = GradedDiffOperator::monomial(mi(0), DiffPolynomial::one(), mi(1))
            .add(&GradedDiffOperator::monomial(mi(1), DiffPolynomial::constant(ratio(1, 2)), mi(0)));
        let psi = bivector_of_operator(&op);
        assert!(sn_bracket(&psi, &psi).unwrap().is_zero());
        assert!(sn_bracket_bivectors(&op, &op).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_antisymmetric() {
        let op = GradedDiffOperator::monomial(mi(0), DiffPolynomial::one(), mi(1));
        assert!(matches!(sn_bracket_bivectors(&op, &op), Err(Error::NotAntisymmetric(_))));
    }
}
