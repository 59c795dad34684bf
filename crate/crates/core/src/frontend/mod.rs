//! Parsing, printing, problem files and the built-in corpus.

mod check;
mod parse;
mod print;
mod problem;

pub use check::{
    jacobi_trial, run_check, trial_shape, trial_triple, Bounds, CertificateTerm, CrossCheck, JacobiTrials,
    StandardVerdict, Verdict,
};
pub use parse::{parse_expression, Parsed};
pub use print::{
    print_density, print_derivative, print_functional, print_label, print_monomial, print_operator,
    print_operator_entry, print_polynomial, print_theta, print_wedge_density, print_wedge_poly, suffix,
};
pub use problem::{corpus_names, parse_method, CheckOptions, ProblemSpec, CORPUS};
