//! Exact arithmetic for square-tiled surfaces (origamis): SL(2,Z)-orbits,
//! Veech groups, integral homology, and the Kontsevich-Zorich monodromy,
//! together with machine-checkable certificates of Zariski density,
//! free-product structure, arithmeticity and representation
//! non-faithfulness.
//!
//! Everything is computed over the integers or the rationals; there is no
//! floating point on any certified path.
//!
//! The main pipeline, for an origami `(h, v)`:
//!
//! 1. [`origami`] — stratum, SL(2,Z)-orbit graph, cusps, cylinders.
//! 2. [`orbit`] — Veech group index and Schreier generators.
//! 3. [`homology`] — relative/absolute homology, intersection form.
//! 4. [`kz`] — homology maps of T, S, -Id along the orbit, monodromy
//!    matrices of closed words, tautological/non-tautological split.
//! 5. [`arithmeticity`] — Galois-pinching and Zariski-density
//!    certificates, unipotent word search, root-group coverage, kernel
//!    witnesses.
//! 6. [`pingpong`] — exact rational-cone ping-pong tables certifying
//!    free products of 2x2 matrix groups, with constructive membership.
//!
//! The crate ships the nine-square genus-3 origami whose orbit has four
//! elements as [`fixtures::o1`]; `examples/` contains one runnable
//! program per pipeline stage and `src/main.rs` is a thin CLI driver
//! (`origami-kz --input <file> [--stage <name>]`).

pub mod arithmeticity;
pub mod fixtures;
pub mod homology;
pub mod kz;
pub mod linalg;
pub mod orbit;
pub mod origami;
pub mod perm;
pub mod pingpong;
pub mod pipeline;

pub use origami::Origami;
pub use perm::Permutation;
