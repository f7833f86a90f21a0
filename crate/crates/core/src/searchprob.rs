//! Search problems with randomized verifiers and finders, and the hardness
//! search problem built from machine enumeration.
//!
//! In the hardness problem an instance is `(x, r)` with `|x| = |r| = n`, and
//! `r` is a yes-witness when every pair `(A, leak)` of short machines
//! recovers `r` poorly:
//!
//! `p(A, leak) = P[|leak(r, x)| <= ell and d_H(A(w, x), r) < dist] < 1/(2n)`
//!
//! and a no-instance when `|x| != |r|` or some pair reaches `1/n`. The
//! machines run under a [`TruncationBudget`] of `n^c1` steps and
//! `c2 ceil(log2 n)` work cells; `leak` gets `r # x` on its input tape, `A`
//! gets `w # x`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{guard, Error, Result};
use crate::hamming::bad_set_bound;
use crate::machines::{
    enumerate_machines, enumerate_paths, InputTape, Machine, Outcome, TruncationBudget,
};
use crate::stream::RandomStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Yes,
    No,
    Neither,
}

/// A search problem given by a randomized verifier and a randomized finder.
pub trait SearchProblem: Send + Sync {
    fn label(&self) -> String;

    /// Coins the finder uses on inputs of length `k`.
    fn finder_rand_len(&self, k: usize) -> usize;

    fn find(&self, x: &BitString, gamma: &BitString) -> Result<BitString>;

    /// Coins the verifier uses on inputs of length `k`.
    fn verifier_rand_len(&self, k: usize) -> usize;

    fn verify(&self, x: &BitString, y: &BitString, omega: &BitString) -> Result<bool>;

    /// The relation itself, where the problem knows it.
    fn membership(&self, _x: &BitString, _y: &BitString) -> Result<Option<Membership>> {
        Ok(None)
    }

    /// The verifier with its coins removed: accepts when more than half of
    /// all coin strings accept.
    fn verify_exact(&self, x: &BitString, y: &BitString) -> Result<bool> {
        let t = self.verifier_rand_len(x.len());
        guard("verifier coins", t as u64, 16)?;
        let mut accepted = 0u64;
        for omega in BitString::all(t) {
            accepted += self.verify(x, y, &omega)? as u64;
        }
        Ok(2 * accepted > 1u64 << t)
    }
}

/// `P_gamma[(x, find(x, gamma)) is a yes pair]`, by enumerating the coins.
pub fn finder_success(problem: &dyn SearchProblem, x: &BitString) -> Result<BigRational> {
    let t = problem.finder_rand_len(x.len());
    guard("finder coins", t as u64, 20)?;
    let mut hits = 0u64;
    for gamma in BitString::all(t) {
        let y = problem.find(x, &gamma)?;
        if problem.membership(x, &y)? == Some(Membership::Yes) {
            hits += 1;
        }
    }
    Ok(BigRational::new(BigInt::from(hits), BigInt::one() << t))
}

/// `ceil(2 ln(2 / failure_prob) / gap^2)` samples.
pub fn chernoff_samples(gap: Rational64, failure_prob: Rational64) -> Result<u64> {
    let zero = Rational64::zero();
    let one = Rational64::one();
    if !(gap > zero && gap < one) {
        return Err(Error::domain(format!("gap {gap} must lie in (0, 1)")));
    }
    if !(failure_prob > zero && failure_prob < one) {
        return Err(Error::domain(format!(
            "failure probability {failure_prob} must lie in (0, 1)"
        )));
    }
    let g = gap.to_f64().unwrap_or(f64::NAN);
    let delta = failure_prob.to_f64().unwrap_or(f64::NAN);
    let count = (2.0 * (2.0 / delta).ln() / (g * g)).ceil();
    Ok((count as u64).max(1))
}

/// Probability `num / 2^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub num: u128,
    pub exp: u32,
}

impl Dyadic {
    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::one() << self.exp)
    }

    /// `self >= 1 / k`.
    pub fn at_least_inverse(self, k: u128) -> bool {
        k * self.num >= 1u128 << self.exp
    }

    /// `self > a / b`.
    pub fn exceeds(self, a: u128, b: u128) -> bool {
        b * self.num > a << self.exp
    }
}

/// Exact output law of one machine run, with all probabilities over the
/// common denominator `2^exp`.
#[derive(Clone, Debug)]
pub struct RunLaw {
    pub exp: u32,
    /// Output (empty when truncated) and its mass.
    pub entries: Vec<(BitString, u128)>,
}

/// Leaves deeper than this would overflow the pair arithmetic.
const MAX_DEPTH: u32 = 60;

impl RunLaw {
    pub fn exact(machine: &Machine, tape: &InputTape, budget: &TruncationBudget, max_output: usize) -> Result<Self> {
        let leaves = enumerate_paths(machine, tape, budget, max_output)?;
        let exp = leaves.iter().map(|l| l.random.len() as u32).max().unwrap_or(0);
        guard("random path depth", exp as u64, MAX_DEPTH as u64)?;
        let mut merged: HashMap<BitString, u128> = HashMap::new();
        for leaf in leaves {
            let output = match leaf.outcome {
                Outcome::Halted { output, .. } => output,
                Outcome::Truncated { .. } => BitString::new(),
            };
            *merged.entry(output).or_default() += 1u128 << (exp - leaf.random.len() as u32);
        }
        let mut entries: Vec<_> = merged.into_iter().collect();
        entries.sort();
        Ok(Self { exp, entries })
    }

    pub fn mass(&self, mut event: impl FnMut(&BitString) -> bool) -> Dyadic {
        let num = self.entries.iter().filter(|(o, _)| event(o)).map(|(_, p)| p).sum();
        Dyadic { num, exp: self.exp }
    }
}

/// Parameters of the hardness search problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardnessParams {
    pub n: usize,
    /// Step budget `n^c1`.
    pub c1: u32,
    /// Work budget `c2 ceil(log2 n)`.
    pub c2: usize,
    pub ell: usize,
    pub dist: usize,
    /// Longest machine description enumerated; `floor(log2 n)` by default.
    pub max_desc_bits: usize,
    /// Simulations per pair in the verifier; Chernoff-sized when absent.
    #[serde(default)]
    pub sample_count: Option<u64>,
}

/// Exact mode enumerates descriptions up to this length.
pub const EXACT_DESC_LIMIT: usize = 6;
/// Exact mode works with inputs up to this length.
pub const EXACT_N_LIMIT: usize = 14;

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

impl HardnessParams {
    /// Defaults `max_desc_bits = floor(log2 n)`.
    pub fn new(n: usize, c1: u32, c2: usize, ell: usize, dist: usize) -> Self {
        Self {
            n,
            c1,
            c2,
            ell,
            dist,
            max_desc_bits: if n == 0 { 0 } else { n.ilog2() as usize },
            sample_count: None,
        }
    }

    pub fn budget(&self) -> TruncationBudget {
        TruncationBudget {
            max_steps: (self.n as u64).saturating_pow(self.c1),
            max_work_cells: self.c2 * ceil_log2(self.n).max(1),
        }
    }
}

/// The distinct programs with descriptions of at most `max_bits` bits, in
/// order of first appearance, plus the number of descriptions.
pub fn distinct_programs(max_bits: usize) -> Result<(Vec<Machine>, u64)> {
    let mut seen = Vec::<Machine>::new();
    let mut count = 0;
    for (_, m) in enumerate_machines(max_bits)? {
        count += 1;
        if !seen.contains(&m) {
            seen.push(m);
        }
    }
    Ok((seen, count))
}

/// The hardness search problem at fixed parameters.
///
/// Machine pairs are enumerated once; pairs whose descriptions decode to the
/// same programs are evaluated once.
#[derive(Clone, Debug)]
pub struct HardnessProblem {
    pub params: HardnessParams,
    programs: Arc<Vec<Machine>>,
    descriptions: u64,
}

/// Probability reached by the strongest pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub membership: Membership,
    #[serde(with = "crate::text")]
    pub max_probability: BigRational,
    /// Programs of the strongest pair as `(attacker, leak)` descriptions.
    pub best_pair: Option<(BitString, BitString)>,
    pub pairs: usize,
    pub description_pairs: u64,
}

/// Per-`x` memo of attacker laws, keyed by program and leak.
struct AttackerCache<'a> {
    problem: &'a HardnessProblem,
    x: &'a BitString,
    laws: HashMap<(usize, BitString), Arc<RunLaw>>,
}

impl<'a> AttackerCache<'a> {
    fn new(problem: &'a HardnessProblem, x: &'a BitString) -> Self {
        Self {
            problem,
            x,
            laws: HashMap::new(),
        }
    }

    fn law(&mut self, a: usize, w: &BitString) -> Result<Arc<RunLaw>> {
        if let Some(law) = self.laws.get(&(a, w.clone())) {
            return Ok(law.clone());
        }
        let p = &self.problem.params;
        let tape = InputTape::new(&[w, self.x]);
        let law = Arc::new(RunLaw::exact(
            &self.problem.programs[a],
            &tape,
            &p.budget(),
            p.n,
        )?);
        self.laws.insert((a, w.clone()), law.clone());
        Ok(law)
    }
}

impl HardnessProblem {
    pub fn new(params: HardnessParams) -> Result<Self> {
        let (programs, descriptions) = distinct_programs(params.max_desc_bits)?;
        Ok(Self {
            params,
            programs: Arc::new(programs),
            descriptions,
        })
    }

    pub fn programs(&self) -> &[Machine] {
        &self.programs
    }

    /// Number of `(A, leak)` description pairs, `(2^(b+1) - 1)^2`.
    pub fn description_pairs(&self) -> u64 {
        self.descriptions * self.descriptions
    }

    pub fn pair_count(&self) -> usize {
        self.programs.len() * self.programs.len()
    }

    fn leak_law(&self, leak: usize, x: &BitString, r: &BitString) -> Result<RunLaw> {
        let p = &self.params;
        RunLaw::exact(&self.programs[leak], &InputTape::new(&[r, x]), &p.budget(), p.ell + 1)
    }

    fn attacker_hits(&self, law: &RunLaw, r: &BitString) -> Dyadic {
        let dist = self.params.dist;
        law.mass(|o| o.len() == r.len() && hamming(o, r) < dist)
    }

    /// `p(A, leak)` for every pair, indexed `a * programs + leak`.
    fn pair_probabilities(&self, x: &BitString, r: &BitString) -> Result<Vec<Dyadic>> {
        let k = self.programs.len();
        let mut cache = AttackerCache::new(self, x);
        let mut out = vec![Dyadic { num: 0, exp: 0 }; k * k];
        for leak in 0..k {
            let law = self.leak_law(leak, x, r)?;
            let usable: Vec<_> = law
                .entries
                .iter()
                .filter(|(w, _)| w.len() <= self.params.ell)
                .collect();
            for a in 0..k {
                let mut parts = Vec::with_capacity(usable.len());
                for (w, mass) in &usable {
                    let a_law = cache.law(a, w)?;
                    parts.push((*mass, self.attacker_hits(&a_law, r)));
                }
                let exp_a = parts.iter().map(|(_, d)| d.exp).max().unwrap_or(0);
                let num = parts
                    .iter()
                    .map(|(mass, d)| mass * (d.num << (exp_a - d.exp)))
                    .sum();
                out[a * k + leak] = Dyadic {
                    num,
                    exp: law.exp + exp_a,
                };
            }
        }
        Ok(out)
    }

    fn check_exact(&self) -> Result<()> {
        guard(
            "description length",
            self.params.max_desc_bits as u64,
            EXACT_DESC_LIMIT as u64,
        )?;
        guard("input length n", self.params.n as u64, EXACT_N_LIMIT as u64)
    }

    /// Exact classification of `(x, r)`.
    pub fn yes_oracle(&self, x: &BitString, r: &BitString) -> Result<OracleReport> {
        self.check_exact()?;
        let mut report = OracleReport {
            membership: Membership::No,
            max_probability: BigRational::zero(),
            best_pair: None,
            pairs: self.pair_count(),
            description_pairs: self.description_pairs(),
        };
        if x.len() != r.len() {
            return Ok(report);
        }
        if x.len() != self.params.n {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: self.params.n,
            });
        }
        let probs = self.pair_probabilities(x, r)?;
        let k = self.programs.len();
        let (best, p) = probs
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.to_rational().cmp(&b.to_rational()))
            .expect("at least one program");
        let n = self.params.n as u128;
        report.membership = if p.at_least_inverse(n) {
            Membership::No
        } else if p.at_least_inverse(2 * n) {
            Membership::Neither
        } else {
            Membership::Yes
        };
        report.max_probability = p.to_rational();
        report.best_pair = Some((
            self.programs[best / k].encode(),
            self.programs[best % k].encode(),
        ));
        Ok(report)
    }

    /// Simulations per pair: the configured count, or enough to estimate
    /// each pair within `1/(4n)` with failure `1/(20 pairs)`.
    pub fn sample_count(&self) -> Result<u64> {
        match self.params.sample_count {
            Some(s) => Ok(s),
            None => chernoff_samples(
                Rational64::new(1, 4 * self.params.n as i64),
                Rational64::new(1, 20 * self.pair_count() as i64),
            ),
        }
    }

    /// The verifier: rejects on the first pair whose estimated success
    /// exceeds `3/(4n)`.
    ///
    /// Each simulation runs the pair on fresh random tapes. The pair's path
    /// trees are expanded once, so a simulation amounts to drawing a uniform
    /// tape and checking whether it lands on a successful leaf; tapes are
    /// drawn `exp` bits at a time, which is exactly the resolution of the
    /// trees.
    pub fn verifier(&self, x: &BitString, r: &BitString, rng: &mut RandomStream) -> Result<bool> {
        if x.len() != r.len() {
            return Ok(false);
        }
        self.check_exact()?;
        let samples = self.sample_count()?;
        let probs = self.pair_probabilities(x, r)?;
        let n = self.params.n as u128;
        for p in probs {
            let hits = if p.num == 0 {
                0
            } else if p.num == 1u128 << p.exp {
                samples
            } else {
                (0..samples)
                    .filter(|_| draw_below(rng, p.exp) < p.num)
                    .count() as u64
            };
            // hits / samples > 3 / (4n)
            if 4 * n * hits as u128 > 3 * samples as u128 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Uniform `r` of the same length as `x`.
    pub fn finder(&self, x: &BitString, rng: &mut RandomStream) -> BitString {
        rng.next_bits(x.len())
    }
}

fn draw_below(rng: &mut RandomStream, exp: u32) -> u128 {
    let hi = rng.next_u64_bits(exp.saturating_sub(64).min(64)) as u128;
    let lo = rng.next_u64_bits(exp.min(64)) as u128;
    (hi << 64) | lo
}

fn hamming(a: &BitString, b: &BitString) -> usize {
    a.iter().zip(b.iter()).filter(|(x, y)| x != y).count()
}

impl SearchProblem for HardnessProblem {
    fn label(&self) -> String {
        format!(
            "hardness n={} ell={} dist={}",
            self.params.n, self.params.ell, self.params.dist
        )
    }

    fn finder_rand_len(&self, k: usize) -> usize {
        k
    }

    fn find(&self, _x: &BitString, gamma: &BitString) -> Result<BitString> {
        Ok(gamma.clone())
    }

    fn verifier_rand_len(&self, _k: usize) -> usize {
        64
    }

    fn verify(&self, x: &BitString, y: &BitString, omega: &BitString) -> Result<bool> {
        let seed = omega.slice(0, omega.len().min(64)).to_u64()?;
        self.verifier(x, y, &mut RandomStream::new(seed))
    }

    fn membership(&self, x: &BitString, y: &BitString) -> Result<Option<Membership>> {
        Ok(Some(self.yes_oracle(x, y)?.membership))
    }

    /// Accepts when no pair succeeds with probability above `3/(4n)`.
    fn verify_exact(&self, x: &BitString, y: &BitString) -> Result<bool> {
        if x.len() != y.len() {
            return Ok(false);
        }
        self.check_exact()?;
        let n = self.params.n as u128;
        Ok(self
            .pair_probabilities(x, y)?
            .iter()
            .all(|p| !p.exceeds(3, 4 * n)))
    }
}

/// Outcome of the counting argument for one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadSetCount {
    /// Number of `r` the pair recovers with probability at least `1/(2n)`.
    pub count: u64,
    #[serde(with = "crate::text")]
    pub bound: BigUint,
    pub pass: bool,
}

/// Bad-set counts for every pair with a deterministic leak: for each `r` the
/// leak uses its best random path, i.e. the leak output (of at most `ell`
/// bits) that helps `A` most.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadSetSweep {
    pub n: usize,
    pub ell: usize,
    pub dist: usize,
    pub x: BitString,
    #[serde(with = "crate::text")]
    pub bound: BigUint,
    /// Largest count over all pairs.
    pub max_count: u64,
    pub pairs: usize,
    pub description_pairs: u64,
    pub violations: usize,
    pub pass: bool,
}

impl HardnessProblem {
    fn check_census(&self) -> Result<()> {
        self.check_exact()?;
        if self.params.n >= 64 {
            return Err(Error::domain("census inputs must be shorter than 64 bits"));
        }
        Ok(())
    }

    /// For every attacker program and every leak value `w` with
    /// `|w| <= ell`, the set of `r` with `P[d_H(A(w, x), r) < dist] >= 1/(2n)`.
    fn good_sets(&self, x: &BitString) -> Result<Vec<HashMap<BitString, Vec<bool>>>> {
        let p = self.params;
        let leaks: Vec<BitString> = (0..=p.ell).flat_map(BitString::all).collect();
        (0..self.programs.len())
            .into_par_iter()
            .map(|a| {
                let mut by_leak = HashMap::new();
                for w in &leaks {
                    let tape = InputTape::new(&[w, x]);
                    let law = RunLaw::exact(&self.programs[a], &tape, &p.budget(), p.n)?;
                    by_leak.insert(w.clone(), good_set(&law, p.n, p.dist));
                }
                Ok(by_leak)
            })
            .collect()
    }

    /// For every leak program and every `r`, the leak values of at most
    /// `ell` bits it can output.
    fn leak_values(&self, x: &BitString) -> Result<Vec<Vec<Vec<BitString>>>> {
        let n = self.params.n;
        (0..self.programs.len())
            .into_par_iter()
            .map(|leak| {
                (0..1u64 << n)
                    .map(|rv| {
                        let r = BitString::from_u64(rv, n);
                        let law = self.leak_law(leak, x, &r)?;
                        Ok(law
                            .entries
                            .into_iter()
                            .map(|(w, _)| w)
                            .filter(|w| w.len() <= self.params.ell)
                            .collect())
                    })
                    .collect()
            })
            .collect()
    }

    /// Bad-set count of one `(attacker, leak)` program pair.
    pub fn random_is_hard_census(&self, attacker: &Machine, leak: &Machine, x: &BitString) -> Result<BadSetCount> {
        let sub = HardnessProblem {
            params: self.params,
            programs: Arc::new(vec![attacker.clone(), leak.clone()]),
            descriptions: 2,
        };
        sub.check_census()?;
        let good = sub.good_sets(x)?;
        let values = sub.leak_values(x)?;
        let count = count_bad(&good[0], &values[1]);
        let bound = self.bad_set_bound()?;
        Ok(BadSetCount {
            pass: BigUint::from(count) <= bound,
            count,
            bound,
        })
    }

    fn bad_set_bound(&self) -> Result<BigUint> {
        let p = self.params;
        if p.dist == 0 {
            return Ok(BigUint::zero());
        }
        bad_set_bound(p.n as u64, p.ell as u64, p.dist as u64)
    }

    /// [`Self::random_is_hard_census`] over every program pair.
    pub fn random_is_hard_sweep(&self, x: &BitString) -> Result<BadSetSweep> {
        self.check_census()?;
        if x.len() != self.params.n {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: self.params.n,
            });
        }
        let good = self.good_sets(x)?;
        let values = self.leak_values(x)?;
        let bound = self.bad_set_bound()?;
        let mut max_count = 0;
        let mut violations = 0;
        for a in &good {
            for leak in &values {
                let count = count_bad(a, leak);
                max_count = max_count.max(count);
                if BigUint::from(count) > bound {
                    violations += 1;
                }
            }
        }
        let p = self.params;
        Ok(BadSetSweep {
            n: p.n,
            ell: p.ell,
            dist: p.dist,
            x: x.clone(),
            bound,
            max_count,
            pairs: self.pair_count(),
            description_pairs: self.description_pairs(),
            violations,
            pass: violations == 0,
        })
    }

    /// Exact yes/no classification of every `r` for a fixed `x`.
    pub fn classify_all(&self, x: &BitString) -> Result<Vec<Membership>> {
        self.check_census()?;
        let n = self.params.n;
        (0..1u64 << n)
            .map(|rv| Ok(self.yes_oracle(x, &BitString::from_u64(rv, n))?.membership))
            .collect()
    }
}

/// `good[r]` iff `P[output within distance < dist of r] >= 1/(2n)`.
fn good_set(law: &RunLaw, n: usize, dist: usize) -> Vec<bool> {
    let mut acc = vec![0u128; 1 << n];
    for (out, mass) in &law.entries {
        if out.len() != n {
            continue;
        }
        let o = out.to_u64().expect("n < 64");
        for (rv, slot) in acc.iter_mut().enumerate() {
            if ((rv as u64 ^ o).count_ones() as usize) < dist {
                *slot += mass;
            }
        }
    }
    let need = 1u128 << law.exp;
    acc.into_iter().map(|a| 2 * n as u128 * a >= need).collect()
}

fn count_bad(good: &HashMap<BitString, Vec<bool>>, leak_values: &[Vec<BitString>]) -> u64 {
    leak_values
        .iter()
        .enumerate()
        .filter(|(rv, ws)| ws.iter().any(|w| good[w][*rv]))
        .count() as u64
}

/// `pairs * bad_set_bound(n, ell, dist) / 2^n`: the union bound on the
/// fraction of `r` that are not yes-witnesses.
pub fn finder_failure_bound(pairs: u64, n: usize, ell: usize, dist: usize) -> Result<BigRational> {
    let bound = bad_set_bound(n as u64, ell as u64, dist as u64)?;
    Ok(BigRational::new(
        BigInt::from(bound * pairs),
        BigInt::one() << n,
    ))
}

/// A toy relation with a noisy verifier and a noisy finder.
///
/// The verifier reports the relation and errs exactly when both of its two
/// coins are 1, so it is right with probability 3/4. The finder returns a
/// yes-witness unless its first two coins are both 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum ToySearch {
    /// `y = x`.
    Identity,
    /// `y` is the complement of `x`.
    Complement,
    /// `y` is `x` reversed.
    Reverse,
    /// Yes within distance 1 of `x`, no from distance 3 on.
    NearCopy,
    /// Yes when `y` agrees with `x` on at least 2/3 of the positions, no
    /// below 1/3.
    Agreement,
    /// Yes when `y` has the same length and parity as `x` and ends in 1.
    ParityWitness,
    /// No pair is a yes pair.
    Unsolvable,
}

pub const TOY_FINDER_COINS: usize = 4;
pub const TOY_VERIFIER_COINS: usize = 2;

impl ToySearch {
    pub const ALL: [ToySearch; 7] = [
        ToySearch::Identity,
        ToySearch::Complement,
        ToySearch::Reverse,
        ToySearch::NearCopy,
        ToySearch::Agreement,
        ToySearch::ParityWitness,
        ToySearch::Unsolvable,
    ];

    fn relation(&self, x: &BitString, y: &BitString) -> Membership {
        use Membership::*;
        if x.len() != y.len() {
            return No;
        }
        let dist = hamming(x, y);
        let n = x.len();
        let yes_if = |b: bool| if b { Yes } else { No };
        match self {
            ToySearch::Identity => yes_if(dist == 0),
            ToySearch::Complement => yes_if(dist == n),
            ToySearch::Reverse => yes_if(y.iter().eq(x.iter().rev())),
            ToySearch::NearCopy => match dist {
                0 | 1 => Yes,
                2 => Neither,
                _ => No,
            },
            ToySearch::Agreement => {
                let agree = n - dist;
                if 3 * agree >= 2 * n {
                    Yes
                } else if 3 * agree < n {
                    No
                } else {
                    Neither
                }
            }
            ToySearch::ParityWitness => yes_if(
                n > 0 && y.count_ones() % 2 == x.count_ones() % 2 && y.bit(n - 1),
            ),
            ToySearch::Unsolvable => No,
        }
    }

    /// The intended witness, perturbed by coins 2.. when they are not used
    /// to break it.
    fn witness(&self, x: &BitString, gamma: &BitString) -> BitString {
        let n = x.len();
        match self {
            ToySearch::Identity | ToySearch::Unsolvable => x.clone(),
            ToySearch::Complement => x.complement(),
            ToySearch::Reverse => x.iter().rev().collect(),
            ToySearch::NearCopy | ToySearch::Agreement => {
                let mut y = x.clone();
                let room = *self == ToySearch::NearCopy || n >= 3;
                if n > 0 && room && gamma.bit(2) {
                    let at = gamma.bit(3) as usize * (n - 1);
                    y.set(at, !y.bit(at));
                }
                y
            }
            ToySearch::ParityWitness => {
                if n == 0 {
                    return BitString::new();
                }
                let mut y = BitString::zeros(n);
                y.set(n - 1, true);
                if x.count_ones().is_multiple_of(2) {
                    let at = if n >= 2 { gamma.bit(2) as usize * (n - 2) } else { 0 };
                    y.set(at, !y.bit(at));
                }
                y
            }
        }
    }
}

impl SearchProblem for ToySearch {
    fn label(&self) -> String {
        format!("{self:?}").to_lowercase()
    }

    fn finder_rand_len(&self, _k: usize) -> usize {
        TOY_FINDER_COINS
    }

    fn find(&self, x: &BitString, gamma: &BitString) -> Result<BitString> {
        if gamma.len() != TOY_FINDER_COINS {
            return Err(Error::LengthMismatch {
                left: gamma.len(),
                right: TOY_FINDER_COINS,
            });
        }
        let y = self.witness(x, gamma);
        Ok(if gamma.bit(0) && gamma.bit(1) {
            y.complement()
        } else {
            y
        })
    }

    fn verifier_rand_len(&self, _k: usize) -> usize {
        TOY_VERIFIER_COINS
    }

    fn verify(&self, x: &BitString, y: &BitString, omega: &BitString) -> Result<bool> {
        if omega.len() != TOY_VERIFIER_COINS {
            return Err(Error::LengthMismatch {
                left: omega.len(),
                right: TOY_VERIFIER_COINS,
            });
        }
        // Neither pairs are accepted when y is closer to the witness side.
        let truth = match self.relation(x, y) {
            Membership::Yes => true,
            Membership::No => false,
            Membership::Neither => 2 * hamming(x, y) <= x.len(),
        };
        Ok(truth ^ (omega.bit(0) && omega.bit(1)))
    }

    fn membership(&self, x: &BitString, y: &BitString) -> Result<Option<Membership>> {
        Ok(Some(self.relation(x, y)))
    }
}
