//! Exact algebra kernel and discriminant-variety pipeline.
//!
//! Everything here is pure computation over `alloc`: rational polynomials,
//! degrevlex block orders, Buchberger's algorithm, elimination and
//! saturation, Jacobian minor ideals, the component algorithms of the
//! minimal discriminant variety, and an exhaustive finite-field oracle.
//! Parsing, reports and the command line live in the `discvar` crate.
#![no_std]

extern crate alloc;

pub mod discvar;
pub mod error;
pub mod fp_oracle;
pub mod groebner;
pub mod ideal;
pub mod monomial;
pub mod order;
pub mod poly;
pub mod ring;

pub use crate::discvar::{
    assemble, critical, preprocess, properness_defects, singular, w_f_component,
    ComponentLabel, ComponentStatus, DiscriminantVarietyResult, ParametricSystem, Pipeline,
    PreprocessResult, VarietyComponent,
};
pub use crate::error::{Error, Result};
pub use crate::groebner::{buchberger, normal_form, s_polynomial, GroebnerBasis};
pub use crate::ideal::{Ideal, JacobianMatrix};
pub use crate::monomial::Monomial;
pub use crate::order::BlockOrder;
pub use crate::poly::{Polynomial, Rational};
pub use crate::ring::{Ring, VarKind};
