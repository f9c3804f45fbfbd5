//! Exact evaluation of sl(m) tangle, link and MOY-graph invariants.
//!
//! Diagrams are words in caps, cups, crossings and dumbbells
//! ([`diagram`]). The [`ktheory`] engine acts on sparse vectors of Laurent
//! polynomials ([`laurent`]); [`classical`] is an independent dense oracle at
//! `q = 1`, [`skein`] cross-checks link values by crossing resolution, and
//! [`relations`] runs the relation battery.

pub mod classical;
pub mod diagram;
pub mod ktheory;
pub mod laurent;
pub mod relations;
pub mod skein;

pub use diagram::dsl::{parse_dsl, render_dsl, DslError};
pub use diagram::{
    braid_closure, resolve_crossings, CapOrder, CrossingType, DiagramError, Generator, Label,
    ResolutionTerm, StrandSeq, TangleWord,
};
pub use laurent::LaurentPoly;
pub use ktheory::{basis_states, BasisState, Engine, EngineError, EngineOptions, OperatorMatrix, StateVector};
