//! Exact hyperplane covers and edge slicings of the hypercube `{0,1}^n`.
//!
//! The crate provides, over exact integer/rational arithmetic:
//!
//! * [`geometry`] — hyperplanes, cube vertices and edges, containment and
//!   edge-slicing predicates, bit-parallel covered/sliced sets, canonical
//!   forms;
//! * [`family`] — cover, skew-cover, nondegenerate-cover and slicing-family
//!   predicates with re-checkable witnesses, plus incidence statistics;
//! * [`constructions`] — the named fixture families (trivial cover, tight
//!   n-plane skew cover, sum-layer cover, axis slicing family);
//! * [`reduction`] — the expansion of a C-box slicing family into a
//!   nondegenerate cover of at most 2C times the size;
//! * [`witness`] — a mechanical replay of the n/2 lower-bound argument for
//!   nondegenerate covers, with exhaustive claim verification;
//! * [`search`] — exact minimum covers and slicings at small dimension via
//!   complete candidate enumeration and branch-and-bound set cover;
//! * [`io`] — the JSON-lines family interchange format;
//! * [`corpus`] — randomized family generators for property suites.

mod bitset;

pub mod constructions;
pub mod corpus;
pub mod family;
pub mod geometry;
pub mod io;
pub mod reduction;
pub mod search;
pub mod witness;

pub use family::{Family, IncidenceIndex, Verdict, Violation};
pub use geometry::{Edge, EdgeSet, Hyperplane, SupportMask, Vertex, VertexSet, MAX_DIM};
pub use search::{Certification, Mode, SearchResult};
pub use witness::{RestrictedTrace, Sign, WitnessReport};
