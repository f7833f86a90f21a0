//! The targeted Nisan-Wigderson generator.
//!
//! For a target `x` the generator reads the truth table `z = f(x)` of length
//! `n = 2^r` and outputs, for every design set `I_j`, the bit
//! `z[int(s restricted to I_j)]`, where the restriction takes the seed bits
//! at the (ascending) indices of `I_j` and reads them big-endian.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitString;
use crate::design::{floor_pow2, verify_design, Design};
use crate::error::{guard, Error, Result};
use crate::stream::RandomStream;

/// Widest seed the generator accepts, and the enumeration guard.
pub const MAX_SEED_BITS: usize = 24;
/// Widest design set, so truth tables hold at most `2^20` entries.
pub const MAX_TABLE_BITS: usize = 20;

/// A length-preserving function `f`, the stand-in for the hard function.
pub trait HardFunction: Send + Sync {
    fn evaluate(&self, x: &BitString) -> Result<BitString>;
    fn label(&self) -> String;
}

/// The oracles that can be named in configuration files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Oracle {
    /// `f(x) = x`: the target is its own truth table.
    Target,
    /// A fixed table, returned for every `x` of the same length.
    Table(BitString),
    /// `f(x)` is `|x|` bits of a stream keyed by `key` and `x`.
    Seeded(u64),
}

impl HardFunction for Oracle {
    fn evaluate(&self, x: &BitString) -> Result<BitString> {
        match self {
            Oracle::Target => Ok(x.clone()),
            Oracle::Table(table) => {
                if table.len() != x.len() {
                    return Err(Error::LengthMismatch {
                        left: table.len(),
                        right: x.len(),
                    });
                }
                Ok(table.clone())
            }
            Oracle::Seeded(key) => {
                Ok(RandomStream::new(*key).split(&format!("f:{x}")).next_bits(x.len()))
            }
        }
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Oracle::Target => f.write_str("table"),
            Oracle::Table(t) => write!(f, "table:{t}"),
            Oracle::Seeded(key) => write!(f, "seeded:{key}"),
        }
    }
}

impl FromStr for Oracle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "table" {
            return Ok(Oracle::Target);
        }
        if let Some(bits) = s.strip_prefix("table:") {
            return Ok(Oracle::Table(bits.parse()?));
        }
        if let Some(key) = s.strip_prefix("seeded:") {
            return key
                .parse()
                .map(Oracle::Seeded)
                .map_err(|_| Error::config(format!("bad oracle key {key:?}")));
        }
        Err(Error::config(format!(
            "unknown oracle {s:?}; expected table, table:<bits> or seeded:<u64>"
        )))
    }
}

impl Serialize for Oracle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Oracle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Any closure `x -> f(x)`, for tests that need an ad hoc oracle.
pub struct FnOracle<F> {
    label: String,
    f: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&BitString) -> BitString + Send + Sync,
{
    pub fn new(label: impl Into<String>, f: F) -> Self {
        Self {
            label: label.into(),
            f,
        }
    }
}

impl<F> HardFunction for FnOracle<F>
where
    F: Fn(&BitString) -> BitString + Send + Sync,
{
    fn evaluate(&self, x: &BitString) -> Result<BitString> {
        let z = (self.f)(x);
        if z.len() != x.len() {
            return Err(Error::LengthMismatch {
                left: z.len(),
                right: x.len(),
            });
        }
        Ok(z)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Desk-scale parameters: `m` output bits, seeds of `d` bits, design sets of
/// size `r` with overlaps at most `s_overlap`, and targets of `n = 2^r` bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToyParams {
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub s_overlap: usize,
}

#[derive(Clone)]
pub struct TargetedPrg {
    design: Design,
    oracle: Arc<dyn HardFunction>,
    params: ToyParams,
}

impl fmt::Debug for TargetedPrg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TargetedPrg")
            .field("design", &self.design)
            .field("oracle", &self.oracle.label())
            .field("params", &self.params)
            .finish()
    }
}

impl TargetedPrg {
    /// Uses the first `m` sets of `design`.
    pub fn new(design: &Design, oracle: Arc<dyn HardFunction>, m: usize) -> Result<Self> {
        let report = verify_design(design);
        if let Some(v) = report.violation {
            return Err(Error::config(format!("invalid design: {v:?}")));
        }
        if m > design.len() {
            return Err(Error::config(format!(
                "the generator needs {m} sets but the design has {}",
                design.len()
            )));
        }
        guard("seed length d", design.d as u64, MAX_SEED_BITS as u64)?;
        guard("set size r", design.r as u64, MAX_TABLE_BITS as u64)?;
        let params = ToyParams {
            m,
            n: 1 << design.r,
            d: design.d,
            r: design.r,
            s_overlap: design.s,
        };
        Ok(Self {
            design: design.truncated(m),
            oracle,
            params,
        })
    }

    pub fn with_oracle(design: &Design, oracle: Oracle, m: usize) -> Result<Self> {
        Self::new(design, Arc::new(oracle), m)
    }

    pub fn params(&self) -> ToyParams {
        self.params
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    pub fn r(&self) -> usize {
        self.params.r
    }

    /// The `m` sets in use.
    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn oracle(&self) -> &Arc<dyn HardFunction> {
        &self.oracle
    }

    /// `z = f(x)`, checked to have `n` entries.
    pub fn truth_table(&self, x: &BitString) -> Result<BitString> {
        if x.len() != self.params.n {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: self.params.n,
            });
        }
        let z = self.oracle.evaluate(x)?;
        if z.len() != self.params.n {
            return Err(Error::LengthMismatch {
                left: z.len(),
                right: self.params.n,
            });
        }
        Ok(z)
    }

    /// `int(seed restricted to I_j)` for a seed given as a `d`-bit integer;
    /// `j` is 0-based here.
    pub fn index(&self, seed: u64, j: usize) -> usize {
        let d = self.params.d;
        self.design.sets[j]
            .iter()
            .fold(0usize, |acc, &i| (acc << 1) | ((seed >> (d - 1 - i)) & 1) as usize)
    }

    /// Generator output for a truth table already computed.
    pub fn expand_table(&self, z: &BitString, seed: u64) -> BitString {
        (0..self.params.m).map(|j| z.bit(self.index(seed, j))).collect()
    }

    pub fn expand(&self, x: &BitString, seed: &BitString) -> Result<BitString> {
        if seed.len() != self.params.d {
            return Err(Error::LengthMismatch {
                left: seed.len(),
                right: self.params.d,
            });
        }
        let z = self.truth_table(x)?;
        Ok(self.expand_table(&z, seed.to_u64()?))
    }

    /// All `(seed, output)` pairs, seeds in lexicographic order.
    pub fn enumerate_outputs(&self, x: &BitString) -> Result<Vec<(BitString, BitString)>> {
        guard("seed length d", self.params.d as u64, MAX_SEED_BITS as u64)?;
        let z = self.truth_table(x)?;
        let d = self.params.d;
        Ok((0..1u64 << d)
            .map(|s| (BitString::from_u64(s, d), self.expand_table(&z, s)))
            .collect())
    }
}

/// Parameters tied together as in the hardness-to-generator argument:
/// `n = m^k` with `k = ceil(5 / alpha^3)`, `d = log2(n) / alpha`,
/// `ell = n^eps` with `eps = 2 alpha + alpha^3 / 5`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperParams {
    #[serde(with = "crate::text")]
    pub alpha: Rational64,
    pub m: u64,
    pub security_constant: u64,
    /// The exponent `k` in `n = m^k`.
    pub exponent: u64,
    #[serde(with = "crate::text")]
    pub n: BigUint,
    /// `log2 n`, rounded up when `n` is not a power of two.
    pub log2_n: u64,
    pub log2_n_exact: bool,
    pub d: u64,
    pub r: u64,
    pub s_overlap: u64,
    #[serde(with = "crate::text")]
    pub epsilon: Rational64,
    #[serde(with = "crate::text")]
    pub ell: BigUint,
    #[serde(with = "crate::text")]
    pub dist_threshold: BigUint,
    /// `floor(2^(alpha^4 d / 5))`, the design size promised for these
    /// parameters.
    #[serde(with = "crate::text")]
    pub design_size_floor: BigUint,
    /// `design_size_floor - m`; negative when rounding broke the promise.
    #[serde(with = "crate::text")]
    pub design_slack: BigInt,
    pub c1: String,
    pub c2: String,
    /// Set when `n` is far beyond anything that can be enumerated.
    pub paper_scale: bool,
    pub notes: Vec<String>,
}

/// `floor(n^(p/q))`.
fn floor_rational_power(n: &BigUint, exponent: Rational64) -> BigUint {
    let p = *exponent.numer() as u32;
    let q = *exponent.denom() as u32;
    n.pow(p).nth_root(q)
}

pub fn derive_paper_params(m: u64, alpha: Rational64, security_constant: u64) -> Result<PaperParams> {
    let zero = Rational64::zero();
    let one = Rational64::one();
    if !(alpha > zero && alpha < one) {
        return Err(Error::domain(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    if m < 2 {
        return Err(Error::domain(format!("m = {m} must be at least 2")));
    }
    let mut notes = Vec::new();
    let cube = alpha * alpha * alpha;
    let k_exact = Rational64::from_integer(5) / cube;
    let exponent = k_exact.ceil().to_integer() as u64;
    if !k_exact.is_integer() {
        notes.push(format!("5/alpha^3 = {k_exact} rounded up to {exponent}"));
    }
    let n = BigUint::from(m).pow(exponent as u32);
    let log2_m_exact = m.is_power_of_two();
    let log2_n = if log2_m_exact {
        exponent * m.trailing_zeros() as u64
    } else {
        n.bits()
    };
    if !log2_m_exact {
        notes.push(format!("log2 n rounded up to {log2_n}"));
    }
    let d_exact = Rational64::from_integer(log2_n as i64) / alpha;
    let d = d_exact.ceil().to_integer() as u64;
    if !d_exact.is_integer() {
        notes.push(format!("log2(n)/alpha = {d_exact} rounded up to {d}"));
    }
    let d_q = Rational64::from_integer(d as i64);
    let r = (alpha * d_q).floor().to_integer() as u64;
    let s_overlap = (Rational64::from_integer(2) * alpha * alpha * d_q)
        .floor()
        .to_integer() as u64;
    let epsilon = Rational64::from_integer(2) * alpha + cube / Rational64::from_integer(5);
    let ell = floor_rational_power(&n, epsilon);
    let m_sq = BigUint::from(m) * m;
    let dist_threshold = (&m_sq - 2u32) * &n / (BigUint::from(2u32) * &m_sq);
    let design_size_floor = floor_pow2(alpha * alpha * alpha * alpha * d_q / Rational64::from_integer(5));
    let design_slack = BigInt::from(design_size_floor.clone()) - BigInt::from(m);
    if design_slack < BigInt::zero() {
        notes.push("design size floor is below m".to_string());
    }
    let ceil_log_m = 64 - (m - 1).leading_zeros() as u64;
    Ok(PaperParams {
        alpha,
        m,
        security_constant,
        exponent,
        n,
        log2_n,
        log2_n_exact: log2_m_exact,
        d,
        r,
        s_overlap,
        epsilon,
        ell,
        dist_threshold,
        design_size_floor,
        design_slack,
        c1: format!(
            "leak and attacker time: m * 2^r = {m} * 2^{r} evaluations of the distinguisher \
             plus {d} seed bits per evaluation"
        ),
        c2: format!(
            "leak and attacker space: ceil(log2 m) + d + r = {ceil_log_m} + {d} + {r} work bits"
        ),
        paper_scale: log2_n > MAX_SEED_BITS as u64,
        notes,
    })
}

/// `log2(m) + 2 alpha^2 d`, the exponent of the table term of the leakage,
/// next to `eps * log2 n`; exact when `m` is a power of two.
pub fn leakage_exponents(params: &PaperParams) -> Option<(Rational64, Rational64)> {
    if !params.m.is_power_of_two() {
        return None;
    }
    let log_m = Rational64::from_integer(params.m.trailing_zeros() as i64);
    let two = Rational64::from_integer(2);
    let lhs = log_m + two * params.alpha * params.alpha * Rational64::from_integer(params.d as i64);
    let rhs = params.epsilon * Rational64::from_integer(params.log2_n as i64);
    Some((lhs, rhs))
}
