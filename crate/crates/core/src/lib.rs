pub mod catalog;
pub mod error;
pub mod geometry;
pub mod gf;
pub mod invariance;
pub mod groups;
pub mod linalg;
pub mod mpoly;
pub mod stohr;
pub mod suites;

pub use error::{Error, Result};
pub use gf::{Elem, Field};
pub use linalg::Matrix3;
pub use mpoly::{Monomial, MultiPoly, Var};
pub use suites::{run_suite, run_suite_filtered, Check, LambdaSpec, Report, SuiteId, SuiteParams};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/nonclassical.md")]
    mod nonclassical {}
    #[doc = include_str!("../../../book/src/suites.md")]
    mod suites {}
}
