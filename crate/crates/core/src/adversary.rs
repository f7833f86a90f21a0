//! From a distinguisher to a leak/attacker pair.
//!
//! A distinguisher `D` that tells generator outputs from uniform strings is
//! turned into a next-bit predictor through the hybrids
//! `H_j = (h(s_{I_1}), .., h(s_{I_j}), w_{j+1}, .., w_m)`. The leak algorithm
//! picks the hybrid index `j` and the seed bits outside `I_j`, and writes down
//! for every earlier set the table of `h(y_{I_i})` as `y_{I_j}` ranges over
//! all `2^r` values. With that the attacker evaluates `D` on `H_{j-1}` for
//! every candidate position and XORs in the guesses `b` and `w_j`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{guard, Error, Result};
use crate::hamming::hamming_distance;
use crate::nwprg::{leakage_exponents, PaperParams, TargetedPrg, ToyParams};
use crate::stream::RandomStream;

/// Exact advantage needs `d <= 20` and `m <= 20`.
pub const EXACT_LIMIT: usize = 20;
/// Largest auxiliary randomness that exact mode enumerates.
pub const AUX_LIMIT: usize = 8;
/// The census visits at most this many `m * 2^(d - r + m - 1)` leak choices.
pub const CENSUS_LIMIT: u64 = 1 << 22;

/// A targeted distinguisher. `aux` carries its coins; deterministic
/// distinguishers declare `aux_bits() == 0` and ignore it.
pub trait Distinguisher: Send + Sync {
    fn decide(&self, target: &BitString, candidate: &BitString, aux: &BitString) -> Result<bool>;

    fn aux_bits(&self) -> usize {
        0
    }

    fn label(&self) -> String;
}

/// Distinguishers that can be written down in a configuration file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistinguisherSpec {
    Constant { value: bool },
    /// The candidate bit at `index`.
    Bit { index: usize },
    /// Accepts exactly one string.
    Equals { string: BitString },
    /// `table[int(candidate)]`; the table has `2^m` entries.
    Table { table: BitString },
    /// A fixed random function of the candidate, keyed by `key`.
    SeededTable { key: u64 },
    Parity,
    /// Accepts when more than half of the bits are 1.
    Majority,
    /// The candidate bit at `index`, flipped when all `aux_bits` coins are 1.
    NoisyBit { index: usize, aux_bits: usize },
}

fn bit_of(candidate: &BitString, index: usize) -> Result<bool> {
    candidate.get(index).ok_or_else(|| {
        Error::domain(format!(
            "candidate of length {} has no bit {index}",
            candidate.len()
        ))
    })
}

impl Distinguisher for DistinguisherSpec {
    fn decide(&self, _target: &BitString, candidate: &BitString, aux: &BitString) -> Result<bool> {
        Ok(match self {
            DistinguisherSpec::Constant { value } => *value,
            DistinguisherSpec::Bit { index } => bit_of(candidate, *index)?,
            DistinguisherSpec::Equals { string } => candidate == string,
            DistinguisherSpec::Table { table } => {
                if table.len() != 1 << candidate.len() {
                    return Err(Error::LengthMismatch {
                        left: table.len(),
                        right: 1 << candidate.len(),
                    });
                }
                table.bit(candidate.to_u64()? as usize)
            }
            DistinguisherSpec::SeededTable { key } => {
                RandomStream::new(*key).split(&format!("D:{candidate}")).next_bit()
            }
            DistinguisherSpec::Parity => candidate.count_ones() % 2 == 1,
            DistinguisherSpec::Majority => 2 * candidate.count_ones() > candidate.len(),
            DistinguisherSpec::NoisyBit { index, aux_bits } => {
                let flip = aux.len() == *aux_bits && aux.count_ones() == *aux_bits;
                bit_of(candidate, *index)? ^ flip
            }
        })
    }

    fn aux_bits(&self) -> usize {
        match self {
            DistinguisherSpec::NoisyBit { aux_bits, .. } => *aux_bits,
            _ => 0,
        }
    }

    fn label(&self) -> String {
        format!("{self:?}")
    }
}

/// A deterministic distinguisher from a closure over `(target, candidate)`.
pub struct FnDistinguisher<F> {
    label: String,
    f: F,
}

impl<F> FnDistinguisher<F>
where
    F: Fn(&BitString, &BitString) -> Result<bool> + Send + Sync,
{
    pub fn new(label: impl Into<String>, f: F) -> Self {
        Self {
            label: label.into(),
            f,
        }
    }
}

impl<F> Distinguisher for FnDistinguisher<F>
where
    F: Fn(&BitString, &BitString) -> Result<bool> + Send + Sync,
{
    fn decide(&self, target: &BitString, candidate: &BitString, _aux: &BitString) -> Result<bool> {
        (self.f)(target, candidate)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// `H_j` at seed `s` and uniform part `fill`.
pub fn hybrid_sample(
    prg: &TargetedPrg,
    x: &BitString,
    j: usize,
    seed: &BitString,
    fill: &BitString,
) -> Result<BitString> {
    let m = prg.m();
    if j > m {
        return Err(Error::domain(format!("hybrid index {j} exceeds m = {m}")));
    }
    if fill.len() != m - j {
        return Err(Error::LengthMismatch {
            left: fill.len(),
            right: m - j,
        });
    }
    let mut out = prg.expand(x, seed)?.slice(0, j);
    out.extend_from(fill);
    Ok(out)
}

/// How often `D` accepts each candidate, summed over its coins.
struct AcceptCounts<'a> {
    d: &'a dyn Distinguisher,
    target: &'a BitString,
    auxes: Vec<BitString>,
}

impl<'a> AcceptCounts<'a> {
    fn new(d: &'a dyn Distinguisher, target: &'a BitString) -> Result<Self> {
        guard("distinguisher coins", d.aux_bits() as u64, AUX_LIMIT as u64)?;
        Ok(Self {
            d,
            target,
            auxes: BitString::all(d.aux_bits()).collect(),
        })
    }

    fn count(&self, candidate: &BitString) -> Result<u64> {
        let mut hits = 0;
        for aux in &self.auxes {
            hits += self.d.decide(self.target, candidate, aux)? as u64;
        }
        Ok(hits)
    }

    fn weight(&self) -> u64 {
        self.auxes.len() as u64
    }
}

/// `P[D(H_j) = 1]`, exactly, over the seed, the uniform tail and the coins
/// of `D`.
pub fn hybrid_acceptance(
    d: &dyn Distinguisher,
    prg: &TargetedPrg,
    x: &BitString,
    j: usize,
) -> Result<BigRational> {
    let (m, dd) = (prg.m(), prg.d());
    if j > m {
        return Err(Error::domain(format!("hybrid index {j} exceeds m = {m}")));
    }
    guard("seed length d", dd as u64, EXACT_LIMIT as u64)?;
    guard("output length m", m as u64, EXACT_LIMIT as u64)?;
    let z = prg.truth_table(x)?;
    let counts = AcceptCounts::new(d, x)?;
    // How many seeds produce each j-bit prefix.
    let mut prefixes = vec![0u64; 1 << j];
    for s in 0..1u64 << dd {
        let prefix = (0..j).fold(0usize, |acc, i| (acc << 1) | z.bit(prg.index(s, i)) as usize);
        prefixes[prefix] += 1;
    }
    let tail = m - j;
    let mut total = BigUint::zero();
    for (prefix, &seeds) in prefixes.iter().enumerate() {
        if seeds == 0 {
            continue;
        }
        let mut hits = 0u64;
        for fill in 0..1u64 << tail {
            let candidate = BitString::from_u64(((prefix as u64) << tail) | fill, m);
            hits += counts.count(&candidate)?;
        }
        total += BigUint::from(seeds) * hits;
    }
    let denom = BigUint::one() << (dd + tail) as u32;
    let denom = denom * counts.weight();
    Ok(BigRational::new(total.into(), denom.into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdvantageMode {
    Exact,
    Sampled { samples: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdvantageReport {
    /// `P[D(G(x, s)) = 1]`.
    #[serde(with = "crate::text")]
    pub p_generator: BigRational,
    /// `P[D(U_m) = 1]`.
    #[serde(with = "crate::text")]
    pub p_uniform: BigRational,
    /// `P[D(G) = 0] - P[D(U) = 0]`.
    #[serde(with = "crate::text")]
    pub beta_signed_b0: BigRational,
    /// `P[D(G) = 1] - P[D(U) = 1]`.
    #[serde(with = "crate::text")]
    pub beta_signed_b1: BigRational,
    #[serde(with = "crate::text")]
    pub beta: BigRational,
    /// The answer `b` for which `P[D(G) = b] - P[D(U) = b] = beta`.
    pub b_star: bool,
    pub mode: AdvantageMode,
}

impl AdvantageReport {
    fn from_probabilities(p_generator: BigRational, p_uniform: BigRational, mode: AdvantageMode) -> Self {
        let b1 = &p_generator - &p_uniform;
        let b0 = -b1.clone();
        let b_star = b1 >= b0;
        let beta = if b_star { b1.clone() } else { b0.clone() };
        Self {
            p_generator,
            p_uniform,
            beta_signed_b0: b0,
            beta_signed_b1: b1,
            beta,
            b_star,
            mode,
        }
    }
}

pub fn exact_advantage(d: &dyn Distinguisher, prg: &TargetedPrg, x: &BitString) -> Result<AdvantageReport> {
    let p_generator = hybrid_acceptance(d, prg, x, prg.m())?;
    let p_uniform = hybrid_acceptance(d, prg, x, 0)?;
    Ok(AdvantageReport::from_probabilities(
        p_generator,
        p_uniform,
        AdvantageMode::Exact,
    ))
}

/// Monte Carlo version of [`exact_advantage`] for seeds or coins too wide to
/// enumerate.
pub fn estimate_advantage(
    d: &dyn Distinguisher,
    prg: &TargetedPrg,
    x: &BitString,
    samples: u64,
    rng: &mut RandomStream,
) -> Result<AdvantageReport> {
    if samples == 0 {
        return Err(Error::domain("at least one sample is needed"));
    }
    let z = prg.truth_table(x)?;
    let (mut gen_hits, mut unif_hits) = (0u64, 0u64);
    for _ in 0..samples {
        let seed = rng.next_u64_bits(prg.d() as u32);
        let aux = rng.next_bits(d.aux_bits());
        gen_hits += d.decide(x, &prg.expand_table(&z, seed), &aux)? as u64;
        let uniform = rng.next_bits(prg.m());
        let aux = rng.next_bits(d.aux_bits());
        unif_hits += d.decide(x, &uniform, &aux)? as u64;
    }
    let ratio = |hits: u64| BigRational::new(BigInt::from(hits), BigInt::from(samples));
    Ok(AdvantageReport::from_probabilities(
        ratio(gen_hits),
        ratio(unif_hits),
        AdvantageMode::Sampled { samples },
    ))
}

/// What the leak algorithm writes, before serialization. `j` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeakOutput {
    pub j: usize,
    /// Seed bits outside `I_j`, in ascending position order.
    pub y_off: BitString,
    /// `tables[i][k] = h(y_{I_{i+1}})` when `y_{I_j}` reads `k`; `j - 1`
    /// tables of `2^r` bits.
    pub tables: Vec<BitString>,
    pub b: bool,
    pub w_j: bool,
    /// `w_{j+1} .. w_m`.
    pub w_tail: BitString,
}

/// Width of the field holding `j - 1`.
pub fn index_width(m: usize) -> usize {
    if m <= 1 {
        0
    } else {
        (usize::BITS - (m - 1).leading_zeros()) as usize
    }
}

impl LeakOutput {
    /// `ceil(log2 m) + (d - r) + (j - 1) 2^r + 2 + (m - j)`.
    pub fn serialized_len(params: &ToyParams, j: usize) -> usize {
        index_width(params.m) + (params.d - params.r) + (j - 1) * params.n + 2 + (params.m - j)
    }

    /// Fields in order: `j - 1`, `y_off`, the tables, `b`, `w_j`, `w_tail`.
    pub fn to_bits(&self, params: &ToyParams) -> BitString {
        let mut out = BitString::from_u64((self.j - 1) as u64, index_width(params.m));
        out.extend_from(&self.y_off);
        for t in &self.tables {
            out.extend_from(t);
        }
        out.push(self.b);
        out.push(self.w_j);
        out.extend_from(&self.w_tail);
        out
    }

    pub fn from_bits(bits: &BitString, params: &ToyParams) -> Result<Self> {
        let width = index_width(params.m);
        if bits.len() < width {
            return Err(Error::Decode("leak output shorter than its index field".into()));
        }
        let j = bits.slice(0, width).to_u64()? as usize + 1;
        if j > params.m {
            return Err(Error::Decode(format!("leak index {j} exceeds m = {}", params.m)));
        }
        let expected = Self::serialized_len(params, j);
        if bits.len() != expected {
            return Err(Error::Decode(format!(
                "leak output for j = {j} has {} bits, expected {expected}",
                bits.len()
            )));
        }
        let mut pos = width;
        let mut take = |len: usize| {
            let part = bits.slice(pos, pos + len);
            pos += len;
            part
        };
        let y_off = take(params.d - params.r);
        let tables = (1..j).map(|_| take(params.n)).collect();
        let flags = take(2);
        let w_tail = take(params.m - j);
        Ok(Self {
            j,
            y_off,
            tables,
            b: flags.bit(0),
            w_j: flags.bit(1),
            w_tail,
        })
    }

    fn check(&self, params: &ToyParams) -> Result<()> {
        let ok = (1..=params.m).contains(&self.j)
            && self.y_off.len() == params.d - params.r
            && self.tables.len() == self.j - 1
            && self.tables.iter().all(|t| t.len() == params.n)
            && self.w_tail.len() == params.m - self.j;
        if ok {
            Ok(())
        } else {
            Err(Error::domain("leak output does not match the generator parameters"))
        }
    }
}

/// The random choices of the leak algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeakChoice {
    pub j: usize,
    pub y_off: u64,
    pub b: bool,
    pub w_j: bool,
    pub w_tail: BitString,
}

/// Places `y_off` on the positions outside `I_j` and `k` on `I_j`.
struct SeedLayout {
    d: usize,
    inside: Vec<usize>,
    outside: Vec<usize>,
}

impl SeedLayout {
    fn new(prg: &TargetedPrg, j: usize) -> Self {
        let inside = prg.design().sets[j - 1].clone();
        let outside = (0..prg.d()).filter(|p| !inside.contains(p)).collect();
        Self {
            d: prg.d(),
            inside,
            outside,
        }
    }

    fn compose(&self, y_off: u64, k: u64) -> u64 {
        let mut seed = 0u64;
        let mut place = |positions: &[usize], value: u64| {
            let len = positions.len();
            for (t, &p) in positions.iter().enumerate() {
                let bit = (value >> (len - 1 - t)) & 1;
                seed |= bit << (self.d - 1 - p);
            }
        };
        place(&self.outside, y_off);
        place(&self.inside, k);
        seed
    }
}

/// The `j - 1` tables for the given `j` and `y_off`.
fn leak_tables(prg: &TargetedPrg, z: &BitString, j: usize, y_off: u64) -> Vec<BitString> {
    let layout = SeedLayout::new(prg, j);
    (0..j - 1)
        .map(|i| {
            (0..prg.n() as u64)
                .map(|k| z.bit(prg.index(layout.compose(y_off, k), i)))
                .collect()
        })
        .collect()
}

pub fn leak_from_choice(prg: &TargetedPrg, z: &BitString, choice: &LeakChoice) -> Result<LeakOutput> {
    let p = prg.params();
    if z.len() != p.n {
        return Err(Error::LengthMismatch {
            left: z.len(),
            right: p.n,
        });
    }
    if !(1..=p.m).contains(&choice.j) || choice.w_tail.len() != p.m - choice.j {
        return Err(Error::domain("leak choice does not match the generator parameters"));
    }
    Ok(LeakOutput {
        j: choice.j,
        y_off: BitString::from_u64(choice.y_off, p.d - p.r),
        tables: leak_tables(prg, z, choice.j, choice.y_off),
        b: choice.b,
        w_j: choice.w_j,
        w_tail: choice.w_tail.clone(),
    })
}

/// One run of the leak algorithm on truth table `z`.
pub fn run_leak(prg: &TargetedPrg, z: &BitString, rng: &mut RandomStream) -> Result<LeakOutput> {
    let p = prg.params();
    let j = rng.below(p.m as u64) as usize + 1;
    let y_off = rng.next_u64_bits((p.d - p.r) as u32);
    let b = rng.next_bit();
    let w_j = rng.next_bit();
    let w_tail = rng.next_bits(p.m - j);
    leak_from_choice(
        prg,
        z,
        &LeakChoice {
            j,
            y_off,
            b,
            w_j,
            w_tail,
        },
    )
}

/// The candidate `H_{j-1}` handed to `D` for position `k`.
fn predictor_candidate(leak: &LeakOutput, k: usize) -> BitString {
    let mut candidate: BitString = leak.tables.iter().map(|t| t.bit(k)).collect();
    candidate.push(leak.w_j);
    candidate.extend_from(&leak.w_tail);
    candidate
}

/// `out[k] = D(x, H_{j-1}(k)) xor b xor w_j` for every `k < n`.
pub fn run_attacker(
    params: &ToyParams,
    x: &BitString,
    leak: &LeakOutput,
    d: &dyn Distinguisher,
) -> Result<BitString> {
    if d.aux_bits() != 0 {
        return Err(Error::domain("the attacker runs deterministic distinguishers only"));
    }
    leak.check(params)?;
    let flip = leak.b ^ leak.w_j;
    let none = BitString::new();
    (0..params.n)
        .map(|k| Ok(d.decide(x, &predictor_candidate(leak, k), &none)? ^ flip))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    #[serde(with = "crate::text")]
    pub beta: BigRational,
    pub b_star: bool,
    /// `beta / (8m)`.
    #[serde(with = "crate::text")]
    pub bound: BigRational,
    /// Probability over the leak's choices that the attacker agrees with
    /// `f(x)` on at least `agreement_threshold` positions.
    #[serde(with = "crate::text")]
    pub fraction: BigRational,
    /// `(1/2 + beta/(2m)) n`.
    #[serde(with = "crate::text")]
    pub agreement_threshold: BigRational,
    /// Number of `(j, y_off, b, w_j, w_tail)` choices visited.
    pub choices: u64,
    pub pass: bool,
}

/// Exact success probability of the attacker over all leak choices.
pub fn attack_success_census(d: &dyn Distinguisher, prg: &TargetedPrg, x: &BitString) -> Result<CensusReport> {
    let p = prg.params();
    let exponent = (p.d - p.r + p.m - 1) as u32;
    let visits = (p.m as u64).checked_shl(exponent).unwrap_or(u64::MAX);
    guard("census size m*2^(d-r+m-1)", visits, CENSUS_LIMIT)?;
    if d.aux_bits() != 0 {
        return Err(Error::domain("the census runs deterministic distinguishers only"));
    }
    let adv = exact_advantage(d, prg, x)?;
    let z = prg.truth_table(x)?;
    let (m, n) = (p.m, p.n);
    let two_m = BigRational::from_integer(BigInt::from(2 * m));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let threshold = (half + &adv.beta / &two_m) * BigRational::from_integer(BigInt::from(n));
    let reaches = |agree: usize| BigRational::from_integer(BigInt::from(agree)) >= threshold;

    // Every choice for index j carries weight 2^(j-1) over the common
    // denominator m 2^(d-r) 4 2^(m-1).
    let mut weighted = BigUint::zero();
    let mut choices = 0u64;
    let none = BitString::new();
    for j in 1..=m {
        for y_off in 0..1u64 << (p.d - p.r) {
            let tables = leak_tables(prg, &z, j, y_off);
            for tail in 0..1u64 << (m - j) {
                let w_tail = BitString::from_u64(tail, m - j);
                for w_j in [false, true] {
                    let leak = LeakOutput {
                        j,
                        y_off: BitString::new(),
                        tables: tables.clone(),
                        b: false,
                        w_j,
                        w_tail: w_tail.clone(),
                    };
                    // Agreement with b = 0; b = 1 complements every output bit.
                    let mut agree = 0;
                    for k in 0..n {
                        let guess = d.decide(x, &predictor_candidate(&leak, k), &none)? ^ w_j;
                        agree += (guess == z.bit(k)) as usize;
                    }
                    let hits = reaches(agree) as u64 + reaches(n - agree) as u64;
                    weighted += BigUint::from(hits) << (j - 1);
                    choices += 2;
                }
            }
        }
    }
    let denom = BigUint::from(m) << (p.d - p.r + 2 + m - 1);
    let fraction = BigRational::new(weighted.into(), denom.into());
    let bound = &adv.beta / BigRational::from_integer(BigInt::from(8 * m));
    Ok(CensusReport {
        pass: fraction >= bound,
        beta: adv.beta,
        b_star: adv.b_star,
        bound,
        fraction,
        agreement_threshold: threshold,
        choices,
    })
}

/// The worst-case leak length `log m + (d - r) + m + m 2^(2 alpha^2 d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeakBudget {
    /// `ceil(log2 m)`.
    pub index_bits: u64,
    /// `d - r`.
    pub seed_bits: u64,
    /// `m`, for `b`, `w_j` and the tail.
    pub guess_bits: u64,
    /// `m 2^(2 alpha^2 d)`, with the exponent rounded down.
    #[serde(with = "crate::text")]
    pub table_bits: BigUint,
    #[serde(with = "crate::text")]
    pub total: BigUint,
    /// `log2 m + 2 alpha^2 d`, when `m` is a power of two.
    pub table_exponent: Option<String>,
    /// `eps log2 n`.
    #[serde(with = "crate::text")]
    pub epsilon_log_n: Rational64,
    /// Whether the table exponent equals `eps log2 n` exactly.
    pub identity_holds: bool,
}

pub fn leak_bit_length(params: &PaperParams) -> LeakBudget {
    let index_bits = if params.m <= 1 {
        0
    } else {
        64 - (params.m - 1).leading_zeros() as u64
    };
    let seed_bits = params.d - params.r;
    let guess_bits = params.m;
    let table_bits = BigUint::from(params.m) << params.s_overlap;
    let total = &table_bits + index_bits + seed_bits + guess_bits;
    let exponents = leakage_exponents(params);
    let epsilon_log_n = params.epsilon * Rational64::from_integer(params.log2_n as i64);
    LeakBudget {
        index_bits,
        seed_bits,
        guess_bits,
        table_bits,
        total,
        table_exponent: exponents.map(|(lhs, _)| lhs.to_string()),
        epsilon_log_n,
        identity_holds: exponents.is_some_and(|(lhs, rhs)| lhs == rhs),
    }
}

/// Both sides of `log2 m + 2 alpha^2 d = (2 alpha + alpha^3/5) log2 n` for
/// `log2 m = alpha^3 log2(n) / 5` and `d = log2(n) / alpha`.
pub fn leakage_identity(alpha: Rational64, log2_n: u64) -> (Rational64, Rational64) {
    let l = Rational64::from_integer(log2_n as i64);
    let five = Rational64::from_integer(5);
    let two = Rational64::from_integer(2);
    let cube = alpha * alpha * alpha;
    let log_m = cube * l / five;
    let d = l / alpha;
    (log_m + two * alpha * alpha * d, (two * alpha + cube / five) * l)
}

/// Second half of a leak/attacker pair: sees `x` and the leak, guesses
/// `f(x)`.
pub trait Attacker: Send + Sync {
    fn attack(&self, x: &BitString, leak: &BitString, rng: &mut RandomStream) -> Result<BitString>;
    fn label(&self) -> String;
}

/// First half of a leak/attacker pair: sees `x` and `f(x)`.
pub trait Leak: Send + Sync {
    fn leak(&self, x: &BitString, fx: &BitString, rng: &mut RandomStream) -> Result<BitString>;
    fn label(&self) -> String;
}

/// Leaks `f(x)` whole.
pub struct IdentityLeak;

impl Leak for IdentityLeak {
    fn leak(&self, _x: &BitString, fx: &BitString, _rng: &mut RandomStream) -> Result<BitString> {
        Ok(fx.clone())
    }

    fn label(&self) -> String {
        "identity".into()
    }
}

pub struct EmptyLeak;

impl Leak for EmptyLeak {
    fn leak(&self, _x: &BitString, _fx: &BitString, _rng: &mut RandomStream) -> Result<BitString> {
        Ok(BitString::new())
    }

    fn label(&self) -> String {
        "empty".into()
    }
}

/// Outputs the leak unchanged.
pub struct CopyAttacker;

impl Attacker for CopyAttacker {
    fn attack(&self, _x: &BitString, leak: &BitString, _rng: &mut RandomStream) -> Result<BitString> {
        Ok(leak.clone())
    }

    fn label(&self) -> String {
        "copy".into()
    }
}

pub struct ConstantAttacker(pub BitString);

impl Attacker for ConstantAttacker {
    fn attack(&self, _x: &BitString, _leak: &BitString, _rng: &mut RandomStream) -> Result<BitString> {
        Ok(self.0.clone())
    }

    fn label(&self) -> String {
        format!("constant {}", self.0)
    }
}

/// A uniform guess of `|x|` bits.
pub struct RandomGuess;

impl Attacker for RandomGuess {
    fn attack(&self, x: &BitString, _leak: &BitString, rng: &mut RandomStream) -> Result<BitString> {
        Ok(rng.next_bits(x.len()))
    }

    fn label(&self) -> String {
        "random guess".into()
    }
}

/// The leak algorithm built from a generator, serialized.
pub struct NwLeak {
    pub prg: TargetedPrg,
}

impl Leak for NwLeak {
    fn leak(&self, _x: &BitString, fx: &BitString, rng: &mut RandomStream) -> Result<BitString> {
        Ok(run_leak(&self.prg, fx, rng)?.to_bits(&self.prg.params()))
    }

    fn label(&self) -> String {
        "nw leak".into()
    }
}

/// The attacker built from a distinguisher; reads a serialized leak.
pub struct NwAttacker<D> {
    pub params: ToyParams,
    pub distinguisher: D,
}

impl<D: Distinguisher> Attacker for NwAttacker<D> {
    fn attack(&self, x: &BitString, leak: &BitString, _rng: &mut RandomStream) -> Result<BitString> {
        let parsed = LeakOutput::from_bits(leak, &self.params)?;
        run_attacker(&self.params, x, &parsed, &self.distinguisher)
    }

    fn label(&self) -> String {
        format!("nw attacker with {}", self.distinguisher.label())
    }
}

/// Parameters of one hardness experiment: targets of `n` bits, leaks of at
/// most `ell` bits, success when the guess is within distance `< dist`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardnessSetting {
    pub n: usize,
    pub ell: usize,
    pub dist: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HardnessEstimate {
    pub trials: u64,
    pub successes: u64,
    /// Trials whose leak exceeded `ell`; they count as failures.
    pub leak_violations: u64,
    pub estimate: f64,
    /// Two-sided 95% Hoeffding interval.
    pub lower: f64,
    pub upper: f64,
    /// `1/n`.
    pub threshold: f64,
    /// Lower confidence bound at or above `1/n`.
    pub violates: bool,
}

/// Hoeffding half-width for `trials` samples at confidence `1 - delta`.
pub fn hoeffding_radius(trials: u64, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * trials as f64)).sqrt()
}

/// Estimates `P[|leak| <= ell and d_H(A(x, leak(x, f(x))), f(x)) < dist]`
/// over uniform `x` and the pair's coins.
pub fn test_hardness(
    f: &dyn crate::nwprg::HardFunction,
    leak: &dyn Leak,
    attacker: &dyn Attacker,
    setting: HardnessSetting,
    trials: u64,
    rng: &mut RandomStream,
) -> Result<HardnessEstimate> {
    if trials == 0 {
        return Err(Error::domain("at least one trial is needed"));
    }
    let mut xs = rng.split("x");
    let mut leak_rng = rng.split("leak");
    let mut attack_rng = rng.split("attacker");
    let (mut successes, mut leak_violations) = (0, 0);
    for _ in 0..trials {
        let x = xs.next_bits(setting.n);
        let fx = f.evaluate(&x)?;
        let w = leak.leak(&x, &fx, &mut leak_rng)?;
        if w.len() > setting.ell {
            leak_violations += 1;
            continue;
        }
        let guess = attacker.attack(&x, &w, &mut attack_rng)?;
        if guess.len() == fx.len() && hamming_distance(&guess, &fx)? < setting.dist {
            successes += 1;
        }
    }
    let estimate = successes as f64 / trials as f64;
    let radius = hoeffding_radius(trials, 0.05);
    let threshold = 1.0 / setting.n as f64;
    let lower = (estimate - radius).max(0.0);
    Ok(HardnessEstimate {
        trials,
        successes,
        leak_violations,
        estimate,
        lower,
        upper: (estimate + radius).min(1.0),
        threshold,
        violates: lower >= threshold,
    })
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "beta={} fraction={} bound={} pass={}",
            self.beta, self.fraction, self.bound, self.pass
        )
    }
}
