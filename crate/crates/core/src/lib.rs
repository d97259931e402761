//! Zero-sum invariants of finite abelian groups.
//!
//! * [`group`]: groups in invariant-factor form, elements, enumeration.
//! * [`zero_sum`]: subset-sum reachability, witnesses, and exact search for
//!   the Davenport constant `D(G)`, the short constant `D^s(G)` and `ZS(G)`.
//! * [`bounds`]: closed-form upper bounds and a combiner.
//! * [`extraction`]: constructive zero-sum extraction by block peeling and
//!   quotient recombination.
//! * [`expansion`]: translate-expansion checks over `Z_p^d`.

pub mod arith;
pub mod bitset;
pub mod bounds;
pub mod error;
pub mod expansion;
pub mod extraction;
pub mod group;
pub mod sequence;
pub mod zero_sum;

pub use error::{Error, Result};
pub use group::{enumerate_groups, Element, Group};
pub use sequence::{Sequence, Witness};
pub use zero_sum::SearchConfig;
