//! Tree nim and tripod nim.
//!
//! * [`nim`]: classic and misère nim.
//! * [`tree`]: tree nim positions and the memoized game oracle.
//! * [`rays`]: rays, P-completions, worlds and box-barrier shadows.
//! * [`tripod`]: completion arrays `C_c(a, b)` for tripod nim and their analyses.
//! * [`periodicity`]: additive period detection on array rows.
//! * [`dynsys`]: the seed dynamical systems `D(1,n)` and `D(k,n)`.
//! * [`plot`]: SVG and PGM renderings of arrays.

pub mod dynsys;
pub mod nim;
pub mod periodicity;
pub mod plot;
pub mod rays;
pub mod tree;
pub mod tripod;

pub use nim::{misere_outcome, nim_outcome, nim_sum, OutcomeClass};
pub use tree::{Move, TreePosition, TreeSolver};
