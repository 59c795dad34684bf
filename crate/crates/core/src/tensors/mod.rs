//! Functional forms, evolutionary vector fields and multivectors.

mod fields;
mod forms;
mod reduce;
mod sn;
mod wedge;

pub use fields::{commutator, onevector_to_vf, vf_action, vf_to_onevector, EvolutionaryVectorField};
pub use forms::{differential, form_differential, interior_product, interior_product_form, lie_derivative, pairing};
pub use reduce::{
    default_bound, multivector_is_zero, standard_is_zero, Certificate, DivergenceTerm, Method, StandardTest, ZeroOptions,
    ZeroTest,
};
pub use sn::{bivector_of_operator, sn_bracket, sn_bracket_bivectors};
pub use wedge::{normalize_wedge, Form, FunctionalForm, Kind, Label, MultiVector, Vector, Wedge, WedgeDensity, WedgePoly};
