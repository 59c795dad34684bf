//! Hamiltonian checks of problem specs and their reports.

use serde::Serialize;

use crate::exec::Exec;
use crate::frontend::print::{print_operator, print_theta, print_wedge_density, print_wedge_poly};
use crate::frontend::problem::{CheckOptions, ProblemSpec};
use crate::graded::LocalFunctional;
use crate::jet::DiffPolynomial;
use crate::poisson::{is_hamiltonian, jacobi_residual, trivector_value, PoissonCandidate};
use crate::random::{Generator, Shape};
use crate::tensors::{multivector_is_zero, sn_bracket, Certificate, Method, MultiVector, Vector, WedgePoly, ZeroOptions};
use crate::{ratio, Error, Space};

/// One divergence generator `D_axis(theta^(J) * term)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateTerm {
    pub axis: String,
    pub grading: String,
    pub term: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandardVerdict {
    pub hamiltonian: bool,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remainder: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    /// General bracket `[Ψ,Ψ]` agrees with the operator form modulo divergences.
    pub general_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiTrials {
    pub trials: usize,
    pub seed: u64,
    /// Trials where the Jacobi residual equals `-1/2` times the trivector value.
    pub agreed: usize,
    /// Trials where the Jacobi residual itself vanishes.
    pub vanished: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub method: Method,
    pub order_bound: u32,
    pub complete: bool,
}

/// Outcome of [`run_check`]. Serialized keys are stable; timing is only
/// present when filled in by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub structure: String,
    pub dimension: usize,
    pub fields: Vec<String>,
    pub operator: String,
    pub antisymmetrized: bool,
    pub hamiltonian: bool,
    pub trivector: String,
    pub trivector_terms: usize,
    pub identically_zero: bool,
    pub obstruction: Option<String>,
    pub certificate: Option<Vec<CertificateTerm>>,
    pub standard_quotient: StandardVerdict,
    pub cross_check: CrossCheck,
    pub jacobi: JacobiTrials,
    pub bounds: Bounds,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Verdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdict serializes")
    }

    pub fn to_text(&self) -> String {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let mut lines = vec![
            format!("structure: {}", self.structure),
            format!("dimension: {}  fields: {}", self.dimension, self.fields.join(", ")),
            format!("operator{}: {}", if self.antisymmetrized { " (antisymmetrized)" } else { "" }, self.operator.replace('\n', "; ")),
            format!("hamiltonian: {}", yes_no(self.hamiltonian)),
            format!("trivector ({} terms): {}", self.trivector_terms, self.trivector),
        ];
        if let Some(o) = &self.obstruction {
            lines.push(format!("obstruction: {o}"));
        }
        if let Some(c) = &self.certificate {
            lines.push(format!("certificate: {} generators", c.len()));
            for g in c {
                lines.push(format!("  D_{}({}*{})", g.axis, g.grading, g.term));
            }
        }
        lines.push(format!(
            "standard quotient: hamiltonian {}{}",
            yes_no(self.standard_quotient.hamiltonian),
            if self.standard_quotient.complete { "" } else { " (search incomplete)" }
        ));
        lines.push(format!("general bracket agrees: {}", yes_no(self.cross_check.general_agrees)));
        lines.push(format!(
            "jacobi trials: {}/{} agree with -1/2 trivector value, {} vanish (seed {})",
            self.jacobi.agreed, self.jacobi.trials, self.jacobi.vanished, self.jacobi.seed
        ));
        lines.push(format!(
            "method: {:?}  order bound: {}  complete: {}",
            self.bounds.method,
            self.bounds.order_bound,
            yes_no(self.bounds.complete)
        ));
        if let Some(t) = self.timing_ms {
            lines.push(format!("time: {t} ms"));
        }
        lines.join("\n")
    }
}

fn certificate_terms(space: &Space, c: &Certificate) -> Vec<CertificateTerm> {
    c.generators
        .iter()
        .map(|g| {
            let body = WedgePoly::single(DiffPolynomial::term(g.multiplier.clone(), g.monomial.clone()), &g.labels);
            CertificateTerm {
                axis: space.axes()[g.axis].clone(),
                grading: print_theta(space, &g.grading),
                term: format!("({})", print_wedge_poly::<Vector>(space, &body)),
            }
        })
        .collect()
}

/// Shape of the random functionals used in Jacobi trials: order at most
/// three, cubic densities on a line and quadratic ones in higher
/// dimensions, where nested brackets of cubics grow too large to
/// canonicalize quickly.
pub fn trial_shape(space: &Space) -> Shape {
    let degree = if space.dim() == 1 { 3 } else { 2 };
    Shape::new(space.dim(), space.num_fields()).order(3).degree(degree).terms(2)
}

/// Draws the functional triple of trial `index`.
pub fn trial_triple(space: &Space, seed: u64, index: usize) -> [LocalFunctional; 3] {
    let shape = trial_shape(space);
    let mut g = Generator::for_trial(seed, index as u64);
    [g.functional(&shape), g.functional(&shape), g.functional(&shape)]
}

/// Whether `{{F,G},H} + cyclic = -1/2 [Ψ,Ψ](dF,dG,dH)`, and whether the
/// residual itself vanishes.
pub fn jacobi_trial(
    p: &PoissonCandidate,
    trivector: &MultiVector,
    triple: &[LocalFunctional; 3],
) -> Result<(bool, bool), Error> {
    let [f, g, h] = triple;
    let jac = jacobi_residual(f, g, h, p)?;
    let value = trivector_value(trivector, f, g, h)?;
    Ok((jac.add(&value.scale(&ratio(1, 2))).is_zero(), jac.is_zero()))
}

/// Runs the Hamiltonian test with its cross-checks.
pub fn run_check(spec: &ProblemSpec, opts: &CheckOptions, exec: Exec) -> Result<Verdict, Error> {
    let space = &spec.space;
    let p = PoissonCandidate::new(spec.operator.clone())
        .map_err(|e| Error::Problem(format!("{}: {e}", spec.name)))?;
    let zopts = ZeroOptions { method: opts.method, order_bound: opts.order_bound, exec, ..ZeroOptions::default() };
    let v = is_hamiltonian(&p, &zopts)?;

    let general = sn_bracket(p.bivector(), p.bivector())?;
    let general_agrees = multivector_is_zero(&general.sub(&v.trivector), &zopts)?.is_zero;

    let outcomes = exec.map_range(opts.trials, |i| jacobi_trial(&p, &v.trivector, &trial_triple(space, opts.seed, i)));
    let mut agreed = 0;
    let mut vanished = 0;
    for o in outcomes {
        let (a, z) = o?;
        agreed += a as usize;
        vanished += z as usize;
    }

    let zt = &v.zero_test;
    Ok(Verdict {
        structure: spec.name.clone(),
        dimension: space.dim(),
        fields: space.fields().to_vec(),
        operator: print_operator(space, &spec.operator),
        antisymmetrized: spec.antisymmetrized,
        hamiltonian: v.hamiltonian,
        trivector: print_wedge_density(space, &v.trivector),
        trivector_terms: v.trivector.flat_terms().len(),
        identically_zero: v.trivector.is_zero(),
        obstruction: v.obstruction().map(|r| {
            let dens = MultiVector::from_poly(&crate::jet::MultiIndex::zero(space.dim()), 3, r);
            print_wedge_density(space, &dens)
        }),
        certificate: v.hamiltonian.then(|| certificate_terms(space, &zt.certificate)),
        standard_quotient: StandardVerdict {
            hamiltonian: v.standard.is_zero,
            complete: v.standard.complete,
            remainder: (!v.standard.is_zero).then(|| print_wedge_poly::<Vector>(space, &v.standard.remainder)),
        },
        cross_check: CrossCheck { general_agrees },
        jacobi: JacobiTrials { trials: opts.trials, seed: opts.seed, agreed, vanished },
        bounds: Bounds { method: zt.method, order_bound: zt.order_bound, complete: zt.complete },
        timing_ms: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(name: &str) -> Verdict {
        let spec = ProblemSpec::from_corpus(name).unwrap();
        let opts = CheckOptions { trials: 2, ..spec.options.clone() };
        run_check(&spec, &opts, Exec::Sequential).unwrap()
    }

    #[test]
    fn kdv1_is_hamiltonian() {
        let v = quick("kdv1");
        assert!(v.hamiltonian && v.identically_zero && v.obstruction.is_none());
        assert_eq!(v.jacobi.agreed, 2);
        assert_eq!(v.jacobi.vanished, 2);
    }

    #[test]
    fn kdv2_has_an_obstruction() {
        let v = quick("kdv2");
        assert!(!v.hamiltonian);
        assert!(v.obstruction.is_some() && v.certificate.is_none());
        assert!(v.standard_quotient.hamiltonian);
        assert!(v.cross_check.general_agrees);
        assert_eq!(v.jacobi.agreed, 2);
    }

    #[test]
    fn json_is_stable() {
        let a = quick("canonical2").to_json();
        let b = quick("canonical2").to_json();
        assert_eq!(a, b);
        assert!(!a.contains("timing_ms"));
        let parsed: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(parsed["hamiltonian"], serde_json::Value::Bool(true));
    }
}
