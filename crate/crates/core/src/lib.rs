//! Exact-arithmetic engine for the affine VW supercategory, the Brauer
//! supercategory, and the deformed endomorphism algebras A_hbar.

pub mod center;
pub mod diagrams;
pub mod engine;
pub mod hbar;
pub mod pn_rep;
pub mod render;
pub mod superlin;
pub mod verify;
pub mod word;

pub use diagrams::{Connector, DottedDiagram, Pt};
pub use engine::{compose, flip, normal_form, specialize, tensor, Morphism};
pub use hbar::HbarPoly;
pub use word::{Gen, GenWord};
