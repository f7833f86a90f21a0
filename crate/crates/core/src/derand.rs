//! Derandomization by seed enumeration.
//!
//! Inputs are first padded with a self-delimiting code so the generator sees
//! a target of exactly its own length `n`; the randomized algorithm then runs
//! on every generator output. Decisions take the strict majority, searches
//! return the first candidate the derandomized verifier accepts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::adversary::{Distinguisher, EXACT_LIMIT};
use crate::bits::BitString;
use crate::error::{guard, Error, Result};
use crate::nwprg::TargetedPrg;
use crate::searchprob::SearchProblem;

/// `pad(x, k)`: `1 x_1 1 x_2 .. 1 x_|x|` followed by zeros up to length `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaddedString {
    pub raw: BitString,
}

impl PaddedString {
    /// Number of payload bits the encoding carries.
    pub fn payload_len(&self) -> usize {
        self.raw
            .as_slice()
            .chunks(2)
            .take_while(|pair| pair.len() == 2 && pair[0])
            .count()
    }
}

pub fn pad(x: &BitString, k: usize) -> PaddedString {
    let mut raw = BitString::with_capacity(k.max(2 * x.len()));
    for b in x.iter() {
        raw.push(true);
        raw.push(b);
    }
    while raw.len() < k {
        raw.push(false);
    }
    PaddedString { raw }
}

/// Reads pairs while the first bit of the pair is 1.
pub fn unpad(x_prime: &BitString) -> Result<BitString> {
    let mut out = BitString::new();
    let mut i = 0;
    while i < x_prime.len() && x_prime.bit(i) {
        if i + 1 == x_prime.len() {
            return Err(Error::Decode(format!(
                "dangling pair marker at position {i}"
            )));
        }
        out.push(x_prime.bit(i + 1));
        i += 2;
    }
    Ok(out)
}

/// `c = max(a, b)` for an algorithm running in time `k^a` and space
/// `b log k`.
pub fn pad_exponent(a: u32, b: u32) -> Result<u32> {
    if a == 0 || b == 0 {
        return Err(Error::domain("time and space exponents start at 1"));
    }
    Ok(a.max(b))
}

/// `k^c` with `c = max(a, b)`.
pub fn default_pad_target(rand_len: usize, a: u32, b: u32) -> Result<usize> {
    let c = pad_exponent(a, b)?;
    rand_len
        .checked_pow(c)
        .ok_or_else(|| Error::domain("pad target overflows"))
}

/// Inputs answered from a table instead of by the derandomizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExceptionTable<T> {
    pub entries: BTreeMap<BitString, T>,
}

impl<T> Default for ExceptionTable<T> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

/// A randomized algorithm for a promise decision problem.
pub trait RandomizedDecider: Send + Sync {
    fn label(&self) -> String;
    fn rand_len(&self, k: usize) -> usize;
    fn decide(&self, x: &BitString, gamma: &BitString) -> Result<bool>;
}

/// `P_gamma[M(x, gamma) = 1]`.
pub fn acceptance_probability(m: &dyn RandomizedDecider, x: &BitString) -> Result<BigRational> {
    let t = m.rand_len(x.len());
    guard("decider coins", t as u64, EXACT_LIMIT as u64)?;
    let mut hits = 0u64;
    for gamma in BitString::all(t) {
        hits += m.decide(x, &gamma)? as u64;
    }
    Ok(BigRational::new(BigInt::from(hits), BigInt::one() << t))
}

/// The answer when `x` satisfies the 2/3 vs 1/3 promise.
pub fn promise_answer(m: &dyn RandomizedDecider, x: &BitString) -> Result<Option<bool>> {
    let p = acceptance_probability(m, x)?;
    let third = BigRational::new(1.into(), 3.into());
    Ok(if p >= &third * BigInt::from(2) {
        Some(true)
    } else if p <= third {
        Some(false)
    } else {
        None
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Predicate {
    Constant { value: bool },
    Parity,
    Majority,
    FirstBit,
    /// Two consecutive ones somewhere.
    ContainsOneOne,
    WeightAtLeast { k: usize },
    Palindrome,
}

impl Predicate {
    pub fn eval(&self, x: &BitString) -> bool {
        match self {
            Predicate::Constant { value } => *value,
            Predicate::Parity => x.count_ones() % 2 == 1,
            Predicate::Majority => 2 * x.count_ones() > x.len(),
            Predicate::FirstBit => x.get(0).unwrap_or(false),
            Predicate::ContainsOneOne => x.as_slice().windows(2).any(|w| w[0] && w[1]),
            Predicate::WeightAtLeast { k } => x.count_ones() >= *k,
            Predicate::Palindrome => x.iter().eq(x.iter().rev()),
        }
    }
}

/// `M(x, gamma) = P(x) xor (gamma_a and gamma_b)`: correct with probability
/// 3/4 on every input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoisyDecider {
    pub predicate: Predicate,
    pub coins: usize,
    pub noise: [usize; 2],
}

impl RandomizedDecider for NoisyDecider {
    fn label(&self) -> String {
        format!("{:?} with noise on {:?}", self.predicate, self.noise)
    }

    fn rand_len(&self, _k: usize) -> usize {
        self.coins
    }

    fn decide(&self, x: &BitString, gamma: &BitString) -> Result<bool> {
        if gamma.len() != self.coins {
            return Err(Error::LengthMismatch {
                left: gamma.len(),
                right: self.coins,
            });
        }
        let [a, b] = self.noise;
        if a >= self.coins || b >= self.coins || a == b {
            return Err(Error::config("noise coins must be two distinct coin positions"));
        }
        Ok(self.predicate.eval(x) ^ (gamma.bit(a) && gamma.bit(b)))
    }
}

/// A decider from a closure.
pub struct FnDecider<F> {
    label: String,
    coins: usize,
    f: F,
}

impl<F> FnDecider<F>
where
    F: Fn(&BitString, &BitString) -> bool + Send + Sync,
{
    pub fn new(label: impl Into<String>, coins: usize, f: F) -> Self {
        Self {
            label: label.into(),
            coins,
            f,
        }
    }
}

impl<F> RandomizedDecider for FnDecider<F>
where
    F: Fn(&BitString, &BitString) -> bool + Send + Sync,
{
    fn label(&self) -> String {
        self.label.clone()
    }

    fn rand_len(&self, _k: usize) -> usize {
        self.coins
    }

    fn decide(&self, x: &BitString, gamma: &BitString) -> Result<bool> {
        Ok((self.f)(x, gamma))
    }
}

/// `D(x', gamma) = M(unpad(x'), gamma)`.
pub struct InducedDecision<'a> {
    pub decider: &'a dyn RandomizedDecider,
}

impl Distinguisher for InducedDecision<'_> {
    fn decide(&self, target: &BitString, candidate: &BitString, _aux: &BitString) -> Result<bool> {
        self.decider.decide(&unpad(target)?, candidate)
    }

    fn label(&self) -> String {
        format!("induced by {}", self.decider.label())
    }
}

/// `D(x', gamma)` accepts when the derandomized verifier accepts
/// `find(unpad(x'), gamma)`.
pub struct InducedSearch<'a> {
    pub problem: &'a dyn SearchProblem,
}

impl Distinguisher for InducedSearch<'_> {
    fn decide(&self, target: &BitString, candidate: &BitString, _aux: &BitString) -> Result<bool> {
        let x = unpad(target)?;
        let y = self.problem.find(&x, candidate)?;
        self.problem.verify_exact(&x, &y)
    }

    fn label(&self) -> String {
        format!("induced by {}", self.problem.label())
    }
}

pub fn induced_distinguisher(problem: &dyn SearchProblem) -> InducedSearch<'_> {
    InducedSearch { problem }
}

/// Pads `x` to the generator's target length and checks the coin count.
fn padded_target(prg: &TargetedPrg, x: &BitString, pad_target: usize, coins: usize) -> Result<BitString> {
    let x_prime = pad(x, pad_target).raw;
    if x_prime.len() != prg.n() {
        return Err(Error::config(format!(
            "pad(x, {pad_target}) has {} bits but the generator takes targets of {}",
            x_prime.len(),
            prg.n()
        )));
    }
    if coins != prg.m() {
        return Err(Error::config(format!(
            "the algorithm uses {coins} coins but the generator outputs {}",
            prg.m()
        )));
    }
    guard("seed length d", prg.d() as u64, EXACT_LIMIT as u64)?;
    Ok(x_prime)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionRun {
    pub answer: bool,
    /// Seeds whose output made `M` accept.
    pub accepting: u64,
    pub seeds_tried: u64,
    pub from_exception: bool,
}

/// Accepts iff more than half of the `2^d` seeds make `M` accept.
pub fn derandomize_decision(
    m: &dyn RandomizedDecider,
    prg: &TargetedPrg,
    x: &BitString,
    pad_target: usize,
    exceptions: &ExceptionTable<bool>,
) -> Result<DecisionRun> {
    if let Some(&answer) = exceptions.entries.get(x) {
        return Ok(DecisionRun {
            answer,
            accepting: 0,
            seeds_tried: 0,
            from_exception: true,
        });
    }
    let x_prime = padded_target(prg, x, pad_target, m.rand_len(x.len()))?;
    let z = prg.truth_table(&x_prime)?;
    let seeds = 1u64 << prg.d();
    let mut accepting = 0;
    for s in 0..seeds {
        accepting += m.decide(x, &prg.expand_table(&z, s))? as u64;
    }
    Ok(DecisionRun {
        answer: accepting > seeds / 2,
        accepting,
        seeds_tried: seeds,
        from_exception: false,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRun {
    /// Empty when no seed produced an accepted candidate.
    pub witness: BitString,
    pub seed_used: Option<BitString>,
    pub seeds_tried: u64,
    pub from_exception: bool,
}

/// The first seed, in lexicographic order, whose candidate the
/// derandomized verifier accepts.
pub fn derandomize_search(
    problem: &dyn SearchProblem,
    prg: &TargetedPrg,
    x: &BitString,
    pad_target: usize,
    exceptions: &ExceptionTable<BitString>,
) -> Result<SearchRun> {
    if let Some(witness) = exceptions.entries.get(x) {
        return Ok(SearchRun {
            witness: witness.clone(),
            seed_used: None,
            seeds_tried: 0,
            from_exception: true,
        });
    }
    let x_prime = padded_target(prg, x, pad_target, problem.finder_rand_len(x.len()))?;
    let z = prg.truth_table(&x_prime)?;
    let d = prg.d();
    for s in 0..1u64 << d {
        let y = problem.find(x, &prg.expand_table(&z, s))?;
        if problem.verify_exact(x, &y)? {
            return Ok(SearchRun {
                witness: y,
                seed_used: Some(BitString::from_u64(s, d)),
                seeds_tried: s + 1,
                from_exception: false,
            });
        }
    }
    Ok(SearchRun {
        witness: BitString::new(),
        seed_used: None,
        seeds_tried: 1 << d,
        from_exception: false,
    })
}
