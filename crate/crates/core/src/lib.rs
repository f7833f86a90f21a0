pub mod adversary;
pub mod bits;
pub mod derand;
pub mod design;
pub mod error;
pub mod hamming;
pub mod machines;
pub mod nwprg;
pub mod searchprob;
pub mod stream;
pub mod text;

pub use bits::BitString;
pub use design::{Design, DesignReport, Violation};
pub use error::{Error, Result};
pub use machines::{Machine, Outcome, TruncationBudget};
pub use nwprg::{HardFunction, Oracle, TargetedPrg};
pub use searchprob::{HardnessParams, HardnessProblem, Membership, SearchProblem};
pub use stream::RandomStream;
