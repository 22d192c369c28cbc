//! Doc-tests for the code in the guide under `book/src`.

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cyclotomic.md")]
pub mod cyclotomic {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/eisenstein.md")]
pub mod eisenstein {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/continued-fractions.md")]
pub mod continued_fractions {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/theta-lift.md")]
pub mod theta_lift {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/relations.md")]
pub mod relations {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/real-quadratic.md")]
pub mod real_quadratic {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub mod readme {}
