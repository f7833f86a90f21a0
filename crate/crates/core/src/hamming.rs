//! Hamming geometry and the counting quantities behind the "random strings are
//! hard to approximate" bound.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: &BitString, b: &BitString) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b.iter()).filter(|(x, y)| x != y).count())
}

/// `H(p) = p log2(1/p) + (1-p) log2(1/(1-p))`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("entropy argument {p} outside [0, 1]")));
    }
    let term = |q: f64| if q == 0.0 { 0.0 } else { -q * q.log2() };
    Ok(term(p) + term(1.0 - p))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `sum_{i=0}^{radius} C(n, i)`: the number of `n`-bit strings within
/// distance `radius` of a fixed centre.
pub fn hamming_ball_volume(n: u64, radius: u64) -> Result<BigUint> {
    if radius > n {
        return Err(Error::domain(format!(
            "ball radius {radius} exceeds the dimension {n}"
        )));
    }
    Ok((0..=radius).map(|i| binomial(n, i)).sum())
}

/// Exact form of the bad-set bound `2^(ell+1) * 2n * vol(n, dist - 1)`.
///
/// The event is `d_H < dist`, so the balls have radius `dist - 1`.
pub fn bad_set_bound(n: u64, ell: u64, dist: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::domain("bad-set bound needs n >= 1"));
    }
    if dist == 0 || dist > n {
        return Err(Error::domain(format!(
            "distance threshold {dist} must lie in 1..={n}"
        )));
    }
    let volume = hamming_ball_volume(n, dist - 1)?;
    Ok((BigUint::one() << (ell + 1)) * BigUint::from(2 * n) * volume)
}
