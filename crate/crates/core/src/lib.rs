pub mod cli;
pub mod entropy;
pub mod error;
pub mod field;
pub mod functors;
pub mod io;
pub mod linalg;
pub mod model;
pub mod report;

pub use error::{Error, Result};

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    pub mod intro {}
    #[doc = include_str!("../../../book/src/fields.md")]
    pub mod fields {}
    #[doc = include_str!("../../../book/src/linear-algebra.md")]
    pub mod linear_algebra {}
    #[doc = include_str!("../../../book/src/flows.md")]
    pub mod flows {}
    #[doc = include_str!("../../../book/src/entropy.md")]
    pub mod entropy {}
    #[doc = include_str!("../../../book/src/change-of-scalars.md")]
    pub mod change_of_scalars {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
