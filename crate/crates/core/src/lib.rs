//! Constraint satisfaction over copresheaves on finite categories.
//!
//! A template is a finite-set-valued functor on a finite category; an instance
//! is another one over the same base, and a solution is a natural
//! transformation between them. The crate builds the constructions needed to
//! move between formulations of these problems (categories of elements, their
//! left adjoint, Kan extensions, Yoneda extensions and nerves) and to run the
//! resulting reductions on concrete inputs.

pub mod copresheaf;
pub mod error;
pub mod fincat;
pub mod findiag;
pub mod graphs;
pub mod grothendieck;
pub mod kan;
pub mod minion;
pub mod par;
pub mod reduce;
pub mod structures;

pub use copresheaf::{Copresheaf, FinSet, NatTransformation};
pub use error::{Error, Result};
pub use fincat::{CatFunctor, FinCategory, MorId, ObjId, Presentation};
pub use findiag::{FinDiagram, QuotientSet};
