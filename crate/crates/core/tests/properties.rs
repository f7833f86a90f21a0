use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use nwlab_core::adversary::{
    exact_advantage, Distinguisher, hybrid_acceptance, hybrid_sample, leak_from_choice, DistinguisherSpec, LeakChoice,
    LeakOutput,
};
use nwlab_core::derand::{pad, unpad};
use nwlab_core::design::{gen_design_greedy, verify_design};
use nwlab_core::hamming::{bad_set_bound, hamming_distance};
use nwlab_core::machines::{decode, enumerate_paths, run_traced, run_truncated, InputTape};
use nwlab_core::searchprob::{HardnessParams, HardnessProblem};
use nwlab_core::{BitString, Oracle, RandomStream, TargetedPrg, TruncationBudget};

fn bitstring(max_len: usize) -> impl Strategy<Value = BitString> {
    prop::collection::vec(any::<bool>(), 0..=max_len).prop_map(|v| v.into_iter().collect())
}

/// A valid toy generator: `r` in 2..=3, `d` up to 10, the seeded oracle.
fn small_prg() -> impl Strategy<Value = (TargetedPrg, u64)> {
    (2usize..=3, 0usize..=1, 1usize..=4, any::<u64>()).prop_filter_map(
        "design too small",
        |(r, s, m, key)| {
            let d = (3 * r + 1).min(10);
            let build = gen_design_greedy(d, r, s.min(r - 1), m).ok()?;
            if build.design.len() < m {
                return None;
            }
            let prg = TargetedPrg::with_oracle(&build.design, Oracle::Seeded(key), m).ok()?;
            Some((prg, key))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pad_round_trips(x in bitstring(12), k in 0usize..40) {
        let p = pad(&x, k);
        prop_assert_eq!(p.raw.len(), k.max(2 * x.len()));
        prop_assert_eq!(unpad(&p.raw).unwrap(), x);
    }

    #[test]
    fn expand_reads_the_table((prg, _) in small_prg(), x_bits in any::<u64>(), seed in any::<u64>()) {
        let n = prg.n();
        let x = BitString::from_u64(x_bits & ((1 << n) - 1), n);
        let seed = BitString::from_u64(seed & ((1 << prg.d()) - 1), prg.d());
        let z = prg.truth_table(&x).unwrap();
        let out = prg.expand(&x, &seed).unwrap();
        prop_assert_eq!(out.len(), prg.m());
        for (j, set) in prg.design().sets.iter().take(prg.m()).enumerate() {
            let mut idx = 0usize;
            for &p in set {
                idx = 2 * idx + seed.bit(p) as usize;
            }
            prop_assert_eq!(out.bit(j), z.bit(idx));
        }
    }

    #[test]
    fn greedy_designs_verify(r in 2usize..=4, s in 0usize..=2, extra in 1usize..=6, m in 1usize..=12) {
        let s = s.min(r - 1);
        let d = r + extra;
        let build = gen_design_greedy(d, r, s, m).unwrap();
        prop_assert!(verify_design(&build.design).valid);
        prop_assert_eq!(build.design.len() + build.shortfall, m);
    }

    #[test]
    fn hybrids_match_brute_force((prg, _) in small_prg(), x_bits in any::<u64>(), key in any::<u64>()) {
        let n = prg.n();
        let m = prg.m();
        let x = BitString::from_u64(x_bits & ((1 << n) - 1), n);
        let table: BitString = {
            let mut rng = RandomStream::new(key);
            rng.next_bits(1 << m)
        };
        let d = DistinguisherSpec::Table { table };
        let mut previous = None;
        let mut steps = BigRational::zero();
        for j in 0..=m {
            let exact = hybrid_acceptance(&d, &prg, &x, j).unwrap();
            let mut hits = 0u64;
            for seed in BitString::all(prg.d()) {
                for fill in BitString::all(m - j) {
                    let sample = hybrid_sample(&prg, &x, j, &seed, &fill).unwrap();
                    hits += d.decide(&x, &sample, &BitString::new()).unwrap() as u64;
                }
            }
            let total = BigInt::one() << (prg.d() + m - j);
            prop_assert_eq!(&exact, &BigRational::new(hits.into(), total));
            if let Some(prev) = previous {
                steps += &exact - &prev;
            }
            previous = Some(exact);
        }
        let report = exact_advantage(&d, &prg, &x).unwrap();
        prop_assert_eq!(steps, &report.p_generator - &report.p_uniform);
    }

    #[test]
    fn leak_serialization_round_trips(
        (prg, key) in small_prg(),
        j_pick in any::<usize>(),
        y_off in any::<u64>(),
        b in any::<bool>(),
        w_j in any::<bool>(),
        tail_seed in any::<u64>(),
    ) {
        let p = prg.params();
        let x = RandomStream::new(key).next_bits(p.n);
        let z = prg.truth_table(&x).unwrap();
        let j = j_pick % p.m + 1;
        let w_tail = RandomStream::new(tail_seed).next_bits(p.m - j);
        let choice = LeakChoice {
            j,
            y_off: y_off & ((1 << (p.d - p.r)) - 1),
            b,
            w_j,
            w_tail,
        };
        let leak = leak_from_choice(&prg, &z, &choice).unwrap();
        let bits = leak.to_bits(&p);
        prop_assert_eq!(bits.len(), LeakOutput::serialized_len(&p, j));
        prop_assert_eq!(LeakOutput::from_bits(&bits, &p).unwrap(), leak);
    }

    #[test]
    fn machines_are_deterministic_per_stream(desc in bitstring(12), input in bitstring(6), seed in any::<u64>()) {
        let machine = decode(&desc);
        let tape = InputTape::new(&[&input]);
        let budget = TruncationBudget { max_steps: 200, max_work_cells: 4 };
        let a = run_truncated(&machine, &tape, &mut RandomStream::new(seed), &budget, 8);
        let b = run_truncated(&machine, &tape, &mut RandomStream::new(seed), &budget, 8);
        prop_assert_eq!(&a, &b);
        prop_assert!(a.output().len() <= 8);
    }

    #[test]
    fn work_head_stays_in_budget(desc in bitstring(16), input in bitstring(6), seed in any::<u64>(), cells in 1usize..5) {
        let machine = decode(&desc);
        let tape = InputTape::new(&[&input]);
        let budget = TruncationBudget { max_steps: 300, max_work_cells: cells };
        let (_, trace) = run_traced(&machine, &tape, &mut RandomStream::new(seed), &budget, 8);
        prop_assert!(trace.len() as u64 <= budget.max_steps);
        for step in &trace {
            prop_assert!(step.work.len() <= cells);
        }
    }

    #[test]
    fn path_probabilities_sum_to_one(desc in bitstring(12), input in bitstring(4)) {
        let machine = decode(&desc);
        let tape = InputTape::new(&[&input]);
        let budget = TruncationBudget { max_steps: 64, max_work_cells: 3 };
        let leaves = enumerate_paths(&machine, &tape, &budget, 4).unwrap();
        let total: BigRational = leaves.iter().map(|l| l.probability()).sum();
        prop_assert_eq!(total, BigRational::one());
    }

    /// Brute-force bad set of an arbitrary decoder table against the bound.
    #[test]
    fn bad_set_inequality(n in 2usize..=8, ell in 0usize..=2, dist_pick in any::<usize>(), key in any::<u64>()) {
        let dist = dist_pick % n + 1;
        let mut rng = RandomStream::new(key);
        let words = (1usize << (ell + 1)) - 1;
        let decoded: Vec<BitString> = (0..words).map(|_| rng.next_bits(n)).collect();
        let bad = BitString::all(n)
            .filter(|r| decoded.iter().any(|a| hamming_distance(a, r).unwrap() < dist))
            .count();
        let bound = bad_set_bound(n as u64, ell as u64, dist as u64).unwrap();
        prop_assert!(BigUint::from(bad) <= bound);
    }
}

#[test]
fn census_counts_respect_the_bound() {
    let problem = HardnessProblem::new(HardnessParams::new(6, 2, 2, 1, 1)).unwrap();
    let x = BitString::from_u64(0b101100, 6);
    let sweep = problem.random_is_hard_sweep(&x).unwrap();
    assert!(sweep.pass, "max bad-set count {} over bound {}", sweep.max_count, sweep.bound);
}

#[test]
fn seeded_oracle_is_stable() {
    let oracle = Oracle::Seeded(7);
    let design = gen_design_greedy(6, 2, 1, 3).unwrap().design;
    let a = TargetedPrg::with_oracle(&design, oracle.clone(), 3).unwrap();
    let b = TargetedPrg::new(&design, Arc::new(oracle), 3).unwrap();
    let x = BitString::from_u64(0b1001, 4);
    assert_eq!(a.enumerate_outputs(&x).unwrap(), b.enumerate_outputs(&x).unwrap());
}
