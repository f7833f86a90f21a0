//! Fixtures shared by the benchmarks.

use nwlab_core::adversary::DistinguisherSpec;
use nwlab_core::design::gen_design_greedy;
use nwlab_core::{BitString, Oracle, RandomStream, TargetedPrg};

/// A generator with `r = 4` (16-bit targets), `d = 10` and one output per greedy set.
pub fn census_prg() -> TargetedPrg {
    let design = gen_design_greedy(10, 4, 1, 4).expect("design").design;
    let table = BitString::from_u64(0b1111_1111_1111_0000, 16);
    let m = design.len();
    TargetedPrg::with_oracle(&design, Oracle::Table(table), m).expect("generator")
}

/// A generator with `r = 5`, `d = 16` and up to eight outputs on a keyed oracle.
pub fn wide_prg() -> TargetedPrg {
    let design = gen_design_greedy(16, 5, 2, 8).expect("design").design;
    let m = design.len().min(8);
    TargetedPrg::with_oracle(&design, Oracle::Seeded(7), m).expect("generator")
}

pub fn target(n: usize, key: u64) -> BitString {
    RandomStream::new(key).next_bits(n)
}

pub fn first_bit() -> DistinguisherSpec {
    DistinguisherSpec::Bit { index: 0 }
}
