//! Stepping-up construction of a `K_5^(4)`-free 4-graph from a red/blue
//! coloring of pairs.
//!
//! Vertices of the 4-graph are the integers `0..2^D`. A 4-tuple of vertices
//! is classified by the sequence of highest differing bit positions between
//! consecutive members (its delta profile), and the pair coloring decides
//! which profiles are edges.
//!
//! * [`delta`]: bitwise delta function, profiles and their basic laws.
//! * [`coloring`]: pair colorings, good triples, verification and search,
//!   greedy partial Steiner systems and the union-bound calculator.
//! * [`construction`]: the implicit 4-graph and its edge rules.
//! * [`verification`]: exhaustive `K_5^(4)` search and exact independence numbers.
//! * [`certificate`]: layered local-maxima sequences and the edge extractor.
//! * [`cli`]: command implementations behind the `stepup` binary.

pub mod certificate;
pub mod cli;
pub mod coloring;
pub mod construction;
pub mod delta;
mod error;
pub mod verification;

pub use certificate::{
    build_layers, extract_edge, monotone_witness, ExtractionTrace, LayerOutcome, LayerParams,
    LayerStack, MonotoneRun,
};
pub use coloring::{
    bound::{probabilistic_bound, BoundReport},
    random_phi_search,
    steiner::{greedy_partial_steiner, SteinerSystem},
    verify_phi, Color, PairColoring, PhiCheck,
};
pub use construction::{Edge4, HypergraphView, Rule};
pub use delta::{delta, delta_profile, OrderedTuple};
pub use error::{Error, Result};
pub use verification::{find_k5, independence_number, is_independent, AlphaResult};
