//! Randomized invariants. Inputs come from seeded generators so every
//! failure reproduces from the reported seed.

use num_traits::One;
use proptest::prelude::*;
use varcalc::exec::Exec;
use varcalc::frontend::{parse_expression, print_functional, print_operator, ProblemSpec};
use varcalc::graded::{canonicalize_functional, variational_derivative, LocalFunctional};
use varcalc::jet::{euler_reconstruction, frechet_apply, DiffPolynomial};
use varcalc::poisson::{
    commutator_theorem_check, hamiltonian_vector_field, poisson_bracket, poisson_bracket_frechet, PoissonCandidate,
};
use varcalc::random::{Generator, Shape};
use varcalc::tensors::{
    commutator, differential, form_differential, multivector_is_zero, pairing, sn_bracket, EvolutionaryVectorField,
    Form, Method, MultiVector, Vector, WedgeDensity, ZeroOptions,
};
use varcalc::{ratio, Rational, Space};

fn shape() -> Shape {
    Shape::new(1, 1).order(2).degree(2).terms(2)
}

fn kdv(name: &str) -> PoissonCandidate {
    PoissonCandidate::new(ProblemSpec::from_corpus(name).unwrap().operator).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn adjoint_is_an_involution(seed in any::<u64>()) {
        let o = Generator::new(seed).operator(&shape());
        prop_assert_eq!(o.adjoint().adjoint(), o);
    }

    #[test]
    fn adjoint_moves_across_the_pairing(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let o = g.operator(&shape());
        let f = g.polynomial(&shape(), 0);
        let h = g.polynomial(&shape(), 0);
        let lhs = LocalFunctional::new(o.apply(std::slice::from_ref(&h)).unwrap()[0].mul_poly(&f));
        let rhs = LocalFunctional::new(o.adjoint().apply(&[f]).unwrap()[0].mul_poly(&h));
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn antisymmetrized_operators_are_antisymmetric(seed in any::<u64>()) {
        let o = Generator::new(seed).operator(&Shape::new(2, 2).order(2).terms(3));
        prop_assert!(o.antisymmetrize().is_antisymmetric());
    }

    #[test]
    fn differential_squares_to_zero(seed in any::<u64>(), degree in 1usize..=3) {
        let sigma = Generator::new(seed).wedge_density::<Form>(&shape(), degree);
        let dd = form_differential(&form_differential(&sigma));
        prop_assert!(dd.equals_mod_divergence(&WedgeDensity::zero(1, degree + 2)));
    }

    #[test]
    fn pairing_ignores_divergences(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let v = g.wedge_density::<Vector>(&shape(), 1);
        let sigma = g.wedge_density::<Form>(&shape(), 1);
        let dv = g.wedge_density::<Vector>(&shape(), 1).total_derivative(0);
        let ds = g.wedge_density::<Form>(&shape(), 1).total_derivative(0);
        let base = pairing(&v, &sigma).unwrap();
        prop_assert!(base.equals(&pairing(&v.add(&dv), &sigma).unwrap()));
        prop_assert!(base.equals(&pairing(&v, &sigma.add(&ds)).unwrap()));
    }

    #[test]
    fn bracket_of_one_vectors_is_minus_the_commutator(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let a = EvolutionaryVectorField::from_polys(1, &[g.polynomial(&shape(), 0)]);
        let b = EvolutionaryVectorField::from_polys(1, &[g.polynomial(&shape(), 0)]);
        let sn = sn_bracket(&a.to_onevector(), &b.to_onevector()).unwrap();
        let minus = commutator(&a, &b).to_onevector().scale(&-Rational::one());
        prop_assert!(sn.equals_mod_divergence(&minus));
    }

    #[test]
    fn bracket_paths_agree(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let p = PoissonCandidate::new(g.operator(&shape()).antisymmetrize()).unwrap();
        let f = g.functional(&shape());
        let h = g.functional(&shape());
        prop_assert!(poisson_bracket(&f, &h, &p).unwrap().value.equals(&poisson_bracket_frechet(&f, &h, &p).unwrap()));
    }

    #[test]
    fn bracket_is_antisymmetric_and_bilinear(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let p = PoissonCandidate::new(g.operator(&shape()).antisymmetrize()).unwrap();
        let (f, h, k) = (g.functional(&shape()), g.functional(&shape()), g.functional(&shape()));
        let fh = poisson_bracket(&f, &h, &p).unwrap().value;
        let hf = poisson_bracket(&h, &f, &p).unwrap().value;
        prop_assert!(fh.add(&hf).is_zero());
        let c = ratio(3, 2);
        let lhs = poisson_bracket(&f.scale(&c).add(&k), &h, &p).unwrap().value;
        let rhs = fh.scale(&c).add(&poisson_bracket(&k, &h, &p).unwrap().value);
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn bracket_split_recombines(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let p = kdv("kdv2");
        let r = poisson_bracket(&g.functional(&shape()), &g.functional(&shape()), &p).unwrap();
        prop_assert_eq!(r.recombined(), r.value.density.clone());
    }

    #[test]
    fn hamiltonian_field_pairs_to_the_bracket(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let p = kdv("kdv2");
        let f = g.functional(&shape());
        let h = g.functional(&shape());
        let x = hamiltonian_vector_field(&h, &p).unwrap();
        let paired = pairing(&x, &differential(&f)).unwrap();
        prop_assert!(paired.equals(&poisson_bracket(&f, &h, &p).unwrap().value));
    }

    #[test]
    fn euler_reconstruction_matches_frechet(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let f = g.polynomial(&Shape::new(1, 2), 0);
        let eta = [g.polynomial(&shape(), 0), g.polynomial(&shape(), 0)];
        prop_assert_eq!(frechet_apply(&f, &eta), euler_reconstruction(&f, &eta));
    }

    #[test]
    fn canonical_form_is_equivalent_and_idempotent(seed in any::<u64>()) {
        let d = Generator::new(seed).density(&Shape::new(2, 1).order(2).grading(2), 0);
        let c = canonicalize_functional(&d);
        prop_assert!(LocalFunctional::new(c.clone()).equals(&LocalFunctional::new(d)));
        prop_assert_eq!(canonicalize_functional(&c), c);
    }

    #[test]
    fn divergences_have_zero_variational_derivative(seed in any::<u64>()) {
        let d = Generator::new(seed).density(&shape(), 0).total_derivative(0);
        prop_assert!(LocalFunctional::new(d.clone()).is_zero());
        prop_assert!(variational_derivative(&LocalFunctional::new(d), 0).is_zero());
    }

    #[test]
    fn zero_test_methods_agree(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let s = Shape::new(1, 1).order(2).degree(1).terms(3).grading(2);
        let v: MultiVector = if seed % 2 == 0 {
            g.wedge_density::<Vector>(&s, 2).total_derivative(0)
        } else {
            g.wedge_density::<Vector>(&s, 2)
        };
        let rewrite = multivector_is_zero(&v, &ZeroOptions::default()).unwrap();
        let span = multivector_is_zero(&v, &ZeroOptions::default().with_method(Method::Span)).unwrap();
        prop_assert_eq!(rewrite.is_zero, span.is_zero);
        prop_assert_eq!(&rewrite.residue, &span.residue);
        prop_assert!(rewrite.certificate.verify(&v, &rewrite.residue));
        if span.is_zero {
            prop_assert!(span.certificate.verify(&v, &span.residue));
        }
        if seed % 2 == 0 {
            prop_assert!(rewrite.is_zero);
        }
    }

    #[test]
    fn printed_values_parse_back(seed in any::<u64>()) {
        let space = Space::new(1, &["u"]).unwrap();
        let mut g = Generator::new(seed);
        let f = LocalFunctional::new(g.density(&shape(), 0));
        let text = print_functional(&space, &f);
        prop_assert_eq!(parse_expression(&space, &text).unwrap().into_functional(1).unwrap(), f);
        let o = g.operator(&shape());
        if !o.is_zero() {
            let text = print_operator(&space, &o);
            prop_assert_eq!(parse_expression(&space, &text).unwrap().into_operator(1).unwrap(), o);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn hamiltonian_fields_commute_like_brackets(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let p = kdv("kdv1");
        let (f, h) = (g.functional(&shape()), g.functional(&shape()));
        prop_assert!(commutator_theorem_check(&f, &h, &p).unwrap());
    }

    #[test]
    fn execution_policy_does_not_change_results(seed in any::<u64>()) {
        let p = kdv("kdv2");
        let run = |exec: Exec| {
            exec.map_range(4, |i| {
                let mut g = Generator::for_trial(seed, i as u64);
                poisson_bracket(&g.functional(&shape()), &g.functional(&shape()), &p).unwrap().value
            })
        };
        prop_assert_eq!(run(Exec::Parallel), run(Exec::Sequential));
    }
}

#[test]
fn first_kdv_hamiltonian_flow() {
    // Bulk of the field of H = int u^3/6 - u_x^2/2 under theta*D + 1/2 theta_x.
    let space = Space::new(1, &["u"]).unwrap();
    let h = parse_expression(&space, "int u^3/6 - u_x^2/2").unwrap().into_functional(1).unwrap();
    let x = hamiltonian_vector_field(&h, &kdv("kdv1")).unwrap();
    let field = EvolutionaryVectorField::from_onevector(&x, 1).unwrap();
    let expected: DiffPolynomial = parse_expression(&space, "u_xxx + u*u_x").unwrap().into_polynomial().unwrap();
    assert_eq!(field.characteristics()[0].bulk_part(), expected);
    assert!(!field.characteristics()[0].boundary_part().is_zero());
}
