//! Order-n Nambu brackets as Jacobian determinants, their identities, and
//! the structures induced on phase space.

mod axioms;
mod bivector;
mod bracket;
mod field;
pub mod linalg;

pub use axioms::{verify_bracket_axiom, Axiom, AxiomKind};
pub use bivector::{check_bivector_identity, check_bivector_identity_with_step, induced_bivector};
pub use bracket::{
    bracket_field, canonical_jacobian, is_canonical, liouville_divergence, nambu_bracket,
    nambu_vector_field, NambuSystem,
};
pub use field::{
    central_gradient, central_partial, gradient, EvalFn, GradFn, GradientScheme, PhasePoint,
    ScalarField, StepRule, NESTED_STEP,
};
