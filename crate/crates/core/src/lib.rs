//! Exact-arithmetic toolkit for the tent map `f(x) = 1 - |2x - 1|` and the
//! maps that commute with it.
//!
//! * [`rational`], [`binary`]: exact rationals and eventually periodic
//!   binary expansions.
//! * [`tent`]: tent and skew tent maps, inverse branches, preimage sets.
//! * [`sawtooth`], [`probe`]: the continuous commuting maps `ξ_(k)` and a
//!   search for intervals of linearity.
//! * [`commutants`], [`continuation`]: commuting maps on the finite sets
//!   `A_n` and which of them extend continuously.
//! * [`conjugacy`]: the conjugacy between the tent map and a skew tent.
//! * [`audit`], [`cli`]: the consolidated claim report and the command line.

pub mod audit;
pub mod binary;
pub mod cli;
pub mod commutants;
pub mod conjugacy;
pub mod continuation;
pub mod error;
pub mod limits;
pub mod plm;
pub mod probe;
pub mod rational;
pub mod sample;
pub mod sawtooth;
pub mod tent;
pub mod word;

pub use binary::{BinaryExpansion, UnitInterval};
pub use commutants::CommutingTable;
pub use conjugacy::ConjugacyIterate;
pub use error::{Error, Result};
pub use plm::{Evaluator, PiecewiseLinearMap};
pub use rational::Rational;
pub use sawtooth::SawtoothMap;
pub use word::BinaryWord;
