//! Poisson bivectors, boundary-aware brackets and the Hamiltonian test.

use crate::graded::{quotient_to_standard, GradedDensity, LocalFunctional, StandardClass};
use crate::jet::{higher_euler_all, Derivatives, DiffPolynomial, MultiIndex};
use crate::operators::GradedDiffOperator;
use crate::tensors::{
    bivector_of_operator, commutator, differential, multivector_is_zero, sn_bracket_bivectors, standard_is_zero,
    EvolutionaryVectorField, MultiVector, StandardTest, ZeroOptions, ZeroTest,
};
use crate::{sign, Error, Rational};

/// An antisymmetric operator together with its bivector
/// `Ψ = ½∫ δ/δφ ∧ Î δ/δφ`.
#[derive(Clone, Debug)]
pub struct PoissonCandidate {
    operator: GradedDiffOperator,
    bivector: MultiVector,
}

impl PoissonCandidate {
    pub fn new(operator: GradedDiffOperator) -> Result<Self, Error> {
        if !operator.is_antisymmetric() {
            return Err(Error::NotAntisymmetric("the adjoint is not minus the operator; antisymmetrize first".into()));
        }
        let bivector = bivector_of_operator(&operator);
        Ok(PoissonCandidate { operator, bivector })
    }

    pub fn operator(&self) -> &GradedDiffOperator {
        &self.operator
    }

    pub fn bivector(&self) -> &MultiVector {
        &self.bivector
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn fields(&self) -> usize {
        self.operator.size()
    }

    fn check(&self, f: &LocalFunctional) -> Result<(), Error> {
        if f.dim() != self.dim() {
            return Err(Error::Dimension(format!("functional over dimension {} with an operator over {}", f.dim(), self.dim())));
        }
        let max_field = f.density.terms().flat_map(|(_, c)| c.jet_vars()).map(|v| v.field + 1).max().unwrap_or(0);
        if max_field > self.fields() {
            return Err(Error::FieldMismatch { expected: self.fields(), got: max_field });
        }
        Ok(())
    }
}

/// Value of a bracket with its bulk/boundary split.
#[derive(Clone, Debug)]
pub struct BracketResult {
    /// Representative `sum θ^(J) b^<J>` produced by the higher-Euler formula.
    pub value: LocalFunctional,
    /// Grading-zero part of the representative.
    pub bulk: DiffPolynomial,
    /// Terms with `|J| > 0`.
    pub boundary: GradedDensity,
}

impl BracketResult {
    fn from_density(d: GradedDensity) -> Self {
        BracketResult { bulk: d.bulk_part(), boundary: d.boundary_part(), value: LocalFunctional::new(d) }
    }

    /// `bulk + boundary`, which always equals `value` exactly.
    pub fn recombined(&self) -> GradedDensity {
        let mut d = GradedDensity::bulk(self.value.dim(), self.bulk.clone());
        d.add_assign(&self.boundary);
        d
    }
}

/// `{F, G} = ∫θ^(J) D_{P+Q}(E^P_A(f) Î^<J>_AB E^Q_B(g))`, integrated by parts
/// onto θ.
pub fn poisson_bracket(f: &LocalFunctional, g: &LocalFunctional, p: &PoissonCandidate) -> Result<BracketResult, Error> {
    p.check(f)?;
    p.check(g)?;
    let fc = f.canonical_density();
    let gc = g.canonical_density();
    let ef: Vec<_> = (0..p.fields()).map(|a| higher_euler_all(&fc, a)).collect();
    let mut eg: Vec<Vec<(MultiIndex, Derivatives<DiffPolynomial>)>> = (0..p.fields())
        .map(|a| higher_euler_all(&gc, a).into_iter().map(|(q, e)| (q, Derivatives::new(e, p.dim()))).collect())
        .collect();
    let mut out = GradedDensity::zero(p.dim());
    for (k, c) in p.operator.terms() {
        for (pi, ep) in &ef[k.row] {
            for (qi, eq) in eg[k.col].iter_mut() {
                let shift = pi.add(qi);
                let s: Rational = sign(shift.order());
                let term = (ep * &(c * eq.get(&k.order))).scale(&s);
                out.add_term(k.grading.add(&shift), &term);
            }
        }
    }
    Ok(BracketResult::from_density(out))
}

/// The same bracket as `Ψ(dF, dG)` with uncanonicalized first variations.
pub fn poisson_bracket_frechet(
    f: &LocalFunctional,
    g: &LocalFunctional,
    p: &PoissonCandidate,
) -> Result<LocalFunctional, Error> {
    p.check(f)?;
    p.check(g)?;
    Ok(LocalFunctional::new(p.bivector.evaluate(&[differential(f), differential(g)])?))
}

/// `Î dH = −dH ⌟ Ψ` as a 1-vector.
pub fn hamiltonian_vector_field(h: &LocalFunctional, p: &PoissonCandidate) -> Result<MultiVector, Error> {
    p.check(h)?;
    Ok(p.bivector.contract_left(&differential(h)).scale(&-Rational::from_integer(1.into())))
}

/// Hamiltonian vector field in characteristic form.
pub fn hamiltonian_field(h: &LocalFunctional, p: &PoissonCandidate) -> Result<EvolutionaryVectorField, Error> {
    EvolutionaryVectorField::from_onevector(&hamiltonian_vector_field(h, p)?, p.fields())
}

/// Outcome of the Hamiltonian test.
#[derive(Clone, Debug)]
pub struct HamiltonianVerdict {
    pub hamiltonian: bool,
    /// `[Ψ, Ψ]` before any reduction.
    pub trivector: MultiVector,
    pub zero_test: ZeroTest,
    /// The same trivector in the classical calculus.
    pub standard: StandardTest,
}

impl HamiltonianVerdict {
    /// Canonical residue of the trivector when the test fails.
    pub fn obstruction(&self) -> Option<&crate::tensors::WedgePoly> {
        (!self.hamiltonian).then_some(&self.zero_test.residue)
    }
}

/// Decides whether `[Ψ, Ψ]` vanishes modulo formal divergences.
pub fn is_hamiltonian(p: &PoissonCandidate, opts: &ZeroOptions) -> Result<HamiltonianVerdict, Error> {
    let trivector = sn_bracket_bivectors(&p.operator, &p.operator)?;
    let zero_test = multivector_is_zero(&trivector, opts)?;
    let standard = standard_is_zero(&trivector, &ZeroOptions { order_bound: None, ..opts.clone() })?;
    Ok(HamiltonianVerdict { hamiltonian: zero_test.is_zero, trivector, zero_test, standard })
}

/// `{{F,G},H} + {{G,H},F} + {{H,F},G}` evaluated by nested brackets.
pub fn jacobi_residual(
    f: &LocalFunctional,
    g: &LocalFunctional,
    h: &LocalFunctional,
    p: &PoissonCandidate,
) -> Result<LocalFunctional, Error> {
    let mut acc = GradedDensity::zero(p.dim());
    for (a, b, c) in [(f, g, h), (g, h, f), (h, f, g)] {
        let ab = poisson_bracket(a, b, p)?.value;
        acc.add_assign(&poisson_bracket(&ab, c, p)?.value.density);
    }
    Ok(LocalFunctional::new(acc))
}

/// Value of a trivector on three differentials, `T(dF, dG, dH)`.
pub fn trivector_value(
    t: &MultiVector,
    f: &LocalFunctional,
    g: &LocalFunctional,
    h: &LocalFunctional,
) -> Result<LocalFunctional, Error> {
    Ok(LocalFunctional::new(t.evaluate(&[differential(f), differential(g), differential(h)])?))
}

/// Checks `[X_F, X_H] = −X_{{F,H}}` modulo formal divergences.
pub fn commutator_theorem_check(f: &LocalFunctional, h: &LocalFunctional, p: &PoissonCandidate) -> Result<bool, Error> {
    let xf = hamiltonian_field(f, p)?;
    let xh = hamiltonian_field(h, p)?;
    let fh = poisson_bracket(f, h, p)?.value;
    let xfh = hamiltonian_field(&fh, p)?;
    Ok(commutator(&xf, &xh).equals_mod_divergence(&xfh.scale(&-Rational::from_integer(1.into()))))
}

/// Classical class of the bracket (`θ ≡ 1`).
pub fn standard_bracket(f: &LocalFunctional, g: &LocalFunctional, p: &PoissonCandidate) -> Result<StandardClass, Error> {
    Ok(quotient_to_standard(&poisson_bracket(f, g, p)?.value.density, p.fields()))
}

/// Grading orders that may appear in a bracket: operator gradings plus the
/// orders of the higher-Euler shifts.
pub fn admissible_gradings(f: &LocalFunctional, g: &LocalFunctional, p: &PoissonCandidate) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let fo = f.canonical_density().max_order();
    let go = g.canonical_density().max_order();
    for (k, _) in p.operator.terms() {
        for s in MultiIndex::all_up_to(p.dim(), fo + go) {
            out.push(k.grading.add(&s));
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn mi(k: u32) -> MultiIndex {
        MultiIndex::new(&[k])
    }
    fn u(k: u32) -> DiffPolynomial {
        DiffPolynomial::jet(0, mi(k))
    }
    fn kdv1() -> PoissonCandidate {
        PoissonCandidate::new(GradedDiffOperator::monomial(mi(0), DiffPolynomial::one(), mi(1)).antisymmetrize()).unwrap()
    }

    #[test]
    fn boundary_bracket_example() {
        let f = LocalFunctional::bulk(1, u(0));
        let g = LocalFunctional::bulk(1, u(0).pow(2).scale(&ratio(1, 2)));
        let b = poisson_bracket(&f, &g, &kdv1()).unwrap();
        assert!(b.value.equals(&LocalFunctional::bulk(1, u(1).scale(&ratio(1, 2)))));
        assert!(!b.value.is_zero());
        assert_eq!(b.recombined(), b.value.density);
        let alt = poisson_bracket_frechet(&f, &g, &kdv1()).unwrap();
        assert!(alt.equals(&b.value));
    }

    #[test]
    fn hamiltonian_field_reproduces_bracket() {
        let p = kdv1();
        let f = LocalFunctional::bulk(1, &u(0) * &u(2));
        let h = LocalFunctional::bulk(1, u(0).pow(3));
        let x = hamiltonian_vector_field(&h, &p).unwrap();
        let lhs = crate::tensors::pairing(&x, &differential(&f)).unwrap();
        assert!(lhs.equals(&poisson_bracket(&f, &h, &p).unwrap().value));
    }

    #[test]
    fn rejects_symmetric_operator() {
        let op = GradedDiffOperator::monomial(mi(0), DiffPolynomial::one(), mi(2));
        assert!(PoissonCandidate::new(op).is_err());
    }
}
