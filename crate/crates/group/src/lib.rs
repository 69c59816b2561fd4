//! Normal forms for the star-polygon groups `G(p1,...,pk) = <a1,...,ak | a1^p1 = ... = ak^pk>`
//! and for two presentations of the braid group B3.
//!
//! Every element is written as `Δ^m · v` where `Δ` is the distinguished element
//! (`a_i^{p_i}` for star-polygon groups, `aba` for the standard braid presentation)
//! and `v` is a canonical suffix. The exponent `m` is the winding number of a walk
//! in the Schreier graph on the cosets of `<Δ>`.

mod error;
mod normal_form;
mod spec;

pub use error::GroupError;
pub use normal_form::{apply_generator, evaluate_word, one_sided_allowed, BraidLetter, NormalForm, Suffix, Syllable};
pub use spec::{GroupSpec, SignedGenerator};
