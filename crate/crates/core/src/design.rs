//! Combinatorial designs: families of `r`-subsets of `{0..d-1}` whose pairwise
//! intersections have at most `s` elements.
//!
//! Three generators are provided. All of them emit sets in a canonical order
//! so that the `j`-th set handed to the generator is the same on every run.
//!
//! * [`gen_design_greedy`] walks the `r`-subsets in lexicographic order and
//!   keeps every subset compatible with the ones already kept.
//! * [`gen_design_km`] derives `(r, s)` from a density `alpha` and runs the
//!   greedy walk until the `floor(2^(alpha^4 d / 5))` size floor is met.
//! * [`design_from_polynomials`] uses graphs of low-degree polynomials over
//!   `GF(p)`.

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Design {
    pub d: usize,
    pub r: usize,
    pub s: usize,
    pub sets: Vec<Vec<usize>>,
}

impl Design {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// A design of the first `m` sets.
    pub fn truncated(&self, m: usize) -> Design {
        Design {
            sets: self.sets[..m.min(self.sets.len())].to_vec(),
            ..self.clone()
        }
    }
}

/// First failure found by [`verify_design`]. Set positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Parameters { d: usize, r: usize, s: usize },
    SetSize { set: usize, size: usize },
    NotAscending { set: usize },
    OutOfRange { set: usize, element: usize },
    Overlap { first: usize, second: usize, overlap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignReport {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
}

impl DesignReport {
    fn fail(v: Violation) -> Self {
        Self {
            valid: false,
            violation: Some(v),
        }
    }
}

/// Size of the intersection of two ascending index lists.
pub fn overlap(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Checks `d > r > s`, the shape of every set, then all pairs in
/// lexicographic `(j, k)` order.
pub fn verify_design(design: &Design) -> DesignReport {
    let Design { d, r, s, sets } = design;
    if !(d > r && r > s) {
        return DesignReport::fail(Violation::Parameters {
            d: *d,
            r: *r,
            s: *s,
        });
    }
    for (idx, set) in sets.iter().enumerate() {
        let set_no = idx + 1;
        if set.len() != *r {
            return DesignReport::fail(Violation::SetSize {
                set: set_no,
                size: set.len(),
            });
        }
        if set.windows(2).any(|w| w[0] >= w[1]) {
            return DesignReport::fail(Violation::NotAscending { set: set_no });
        }
        if let Some(&element) = set.iter().find(|&&e| e >= *d) {
            return DesignReport::fail(Violation::OutOfRange {
                set: set_no,
                element,
            });
        }
    }
    for j in 0..sets.len() {
        for k in j + 1..sets.len() {
            let size = overlap(&sets[j], &sets[k]);
            if size > *s {
                return DesignReport::fail(Violation::Overlap {
                    first: j + 1,
                    second: k + 1,
                    overlap: size,
                });
            }
        }
    }
    DesignReport {
        valid: true,
        violation: None,
    }
}

/// A generated design together with how far it fell short of the request.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignBuild {
    pub design: Design,
    pub requested: usize,
    pub shortfall: usize,
}

fn check_shape(d: usize, r: usize, s: usize) -> Result<()> {
    if d > r && r > s {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "design parameters need d > r > s, got d={d} r={r} s={s}"
        )))
    }
}

/// Lexicographic greedy selection of `r`-subsets.
///
/// The result is exactly what a naive scan over all `C(d, r)` subsets would
/// keep, but prefixes that already overlap a kept set in more than `s`
/// places are cut off, which keeps large-`d` instances tractable.
pub fn gen_design_greedy(d: usize, r: usize, s: usize, m_target: usize) -> Result<DesignBuild> {
    check_shape(d, r, s)?;
    let mut search = GreedySearch {
        d,
        r,
        s,
        target: m_target,
        kept: Vec::new(),
        members: Vec::new(),
        counts: Vec::new(),
        partial: Vec::with_capacity(r),
    };
    if m_target > 0 {
        search.extend(0);
    }
    let sets = search.kept;
    let shortfall = m_target - sets.len();
    Ok(DesignBuild {
        design: Design { d, r, s, sets },
        requested: m_target,
        shortfall,
    })
}

struct GreedySearch {
    d: usize,
    r: usize,
    s: usize,
    target: usize,
    kept: Vec<Vec<usize>>,
    /// `members[k][e]`: element `e` belongs to kept set `k`.
    members: Vec<Vec<bool>>,
    /// Overlap of each kept set with `partial`.
    counts: Vec<usize>,
    partial: Vec<usize>,
}

impl GreedySearch {
    /// Returns `true` once the target is met.
    fn extend(&mut self, from: usize) -> bool {
        if self.partial.len() == self.r {
            let mut member = vec![false; self.d];
            for &e in &self.partial {
                member[e] = true;
            }
            self.kept.push(self.partial.clone());
            self.members.push(member);
            self.counts.push(self.r);
            return self.kept.len() == self.target;
        }
        let needed = self.r - self.partial.len();
        for e in from..=self.d - needed {
            // A set kept deeper in this branch may already clash with the
            // current prefix; then so does every extension of it.
            if self.counts.iter().any(|&c| c > self.s) {
                return false;
            }
            let fits = self
                .members
                .iter()
                .zip(&self.counts)
                .all(|(m, &c)| !m[e] || c < self.s);
            if !fits {
                continue;
            }
            self.push(e);
            let done = self.extend(e + 1);
            self.pop(e);
            if done {
                return true;
            }
        }
        false
    }

    fn push(&mut self, e: usize) {
        self.partial.push(e);
        for (m, c) in self.members.iter().zip(self.counts.iter_mut()) {
            if m[e] {
                *c += 1;
            }
        }
    }

    fn pop(&mut self, e: usize) {
        self.partial.pop();
        for (m, c) in self.members.iter().zip(self.counts.iter_mut()) {
            if m[e] {
                *c -= 1;
            }
        }
    }
}

/// Output of [`gen_design_km`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KmDesign {
    pub design: Design,
    /// `floor(2^(alpha^4 d / 5))`.
    pub size_floor: u64,
    /// `alpha^4 d / 5` as an exact fraction, written `num/den`.
    pub size_exponent: String,
    /// Whether `alpha d` and `2 alpha^2 d` were both integers.
    pub integral: bool,
    pub meets_floor: bool,
    pub notes: Vec<String>,
}

/// Largest size floor the greedy walk is asked to reach.
pub const KM_SIZE_LIMIT: u64 = 1 << 16;

/// `floor(2^q)` for a non-negative rational `q`.
pub fn floor_pow2(q: Rational64) -> BigUint {
    assert!(q >= Rational64::zero());
    let (num, den) = (*q.numer() as u64, *q.denom() as u32);
    (BigUint::from(1u8) << num).nth_root(den)
}

/// A `(d, floor(alpha d), floor(2 alpha^2 d))` design of at least
/// `floor(2^(alpha^4 d / 5))` sets, built greedily.
pub fn gen_design_km(d: usize, alpha: Rational64) -> Result<KmDesign> {
    let zero = Rational64::zero();
    let one = Rational64::from_integer(1);
    if !(alpha > zero && alpha < one) {
        return Err(Error::domain(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    let d_r = Rational64::from_integer(d as i64);
    let r_exact = alpha * d_r;
    let s_exact = Rational64::from_integer(2) * alpha * alpha * d_r;
    let r = r_exact.floor().to_integer() as usize;
    let s = s_exact.floor().to_integer() as usize;
    let mut notes = Vec::new();
    if !r_exact.is_integer() {
        notes.push(format!("alpha*d = {r_exact} rounded down to {r}"));
    }
    if !s_exact.is_integer() {
        notes.push(format!("2*alpha^2*d = {s_exact} rounded down to {s}"));
    }
    if r <= s {
        return Err(Error::domain(format!(
            "degenerate design: r = {r} is not larger than s = {s}"
        )));
    }
    check_shape(d, r, s)?;
    let exponent = alpha * alpha * alpha * alpha * d_r / Rational64::from_integer(5);
    let floor = floor_pow2(exponent);
    let size_floor = floor
        .to_u64()
        .filter(|&f| f <= KM_SIZE_LIMIT)
        .ok_or(Error::Guard {
            what: "design size floor",
            requested: floor.to_u64().unwrap_or(u64::MAX),
            limit: KM_SIZE_LIMIT,
        })?;
    let build = gen_design_greedy(d, r, s, size_floor as usize)?;
    Ok(KmDesign {
        meets_floor: build.design.len() as u64 >= size_floor,
        design: build.design,
        size_floor,
        size_exponent: exponent.to_string(),
        integral: r_exact.is_integer() && s_exact.is_integer(),
        notes,
    })
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|i| i * i <= p).all(|i| !p.is_multiple_of(i))
}

/// Graphs of the polynomials of degree `<= degree` over `GF(p)`.
///
/// The universe is `GF(p) x GF(p)` flattened as `(i, v) -> i*p + v`, so every
/// set `{(i, q(i))}` is already ascending. Polynomials are visited in
/// lexicographic order of their coefficient vector `(c_0, c_1, ..)`, constant
/// term most significant. Two distinct polynomials agree on at most `degree`
/// points, hence `s = degree`.
pub fn design_from_polynomials(p: u64, degree: usize, m_target: usize) -> Result<Design> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    if degree as u64 >= p {
        return Err(Error::domain(format!(
            "degree {degree} must be smaller than p = {p}"
        )));
    }
    let available = (degree as u32 + 1)
        .checked_mul(64 - p.leading_zeros())
        .filter(|&bits| bits < 63)
        .map(|_| p.pow(degree as u32 + 1));
    if let Some(total) = available {
        if m_target as u64 > total {
            return Err(Error::domain(format!(
                "only {total} polynomials of degree <= {degree} over GF({p})"
            )));
        }
    }
    let p_us = p as usize;
    let mut coeffs = vec![0u64; degree + 1];
    let mut sets = Vec::with_capacity(m_target);
    for _ in 0..m_target {
        let set = (0..p)
            .map(|i| {
                // Horner, highest degree first.
                let v = coeffs.iter().rev().fold(0u64, |acc, &c| (acc * i + c) % p);
                (i as usize) * p_us + v as usize
            })
            .collect();
        sets.push(set);
        // Odometer over the coefficient vector, last coefficient fastest.
        for c in coeffs.iter_mut().rev() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
    Ok(Design {
        d: p_us * p_us,
        r: p_us,
        s: degree,
        sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design(d: usize, r: usize, s: usize, sets: &[&[usize]]) -> Design {
        Design {
            d,
            r,
            s,
            sets: sets.iter().map(|s| s.to_vec()).collect(),
        }
    }

    #[test]
    fn verify_examples() {
        assert!(verify_design(&design(3, 2, 1, &[&[0, 1], &[1, 2]])).valid);
        let bad = verify_design(&design(3, 2, 0, &[&[0, 1], &[1, 2]]));
        assert!(!bad.valid);
        assert_eq!(
            bad.violation,
            Some(Violation::Overlap {
                first: 1,
                second: 2,
                overlap: 1
            })
        );
        assert!(verify_design(&design(4, 2, 1, &[&[0, 1], &[0, 2], &[0, 3]])).valid);
    }

    #[test]
    fn verify_reports_malformed_input() {
        let v = |d: Design| verify_design(&d).violation.unwrap();
        assert!(matches!(
            v(design(2, 2, 1, &[])),
            Violation::Parameters { .. }
        ));
        assert_eq!(
            v(design(4, 2, 1, &[&[0, 1], &[2]])),
            Violation::SetSize { set: 2, size: 1 }
        );
        assert_eq!(
            v(design(4, 2, 1, &[&[1, 0]])),
            Violation::NotAscending { set: 1 }
        );
        assert_eq!(
            v(design(4, 2, 1, &[&[1, 1]])),
            Violation::NotAscending { set: 1 }
        );
        assert_eq!(
            v(design(4, 2, 1, &[&[0, 4]])),
            Violation::OutOfRange { set: 1, element: 4 }
        );
    }

    #[test]
    fn first_violation_in_lexicographic_pair_order() {
        // (1,2) is fine, (1,3) and (2,3) both violate.
        let d = design(6, 3, 1, &[&[0, 1, 2], &[2, 3, 4], &[0, 1, 3]]);
        assert_eq!(
            verify_design(&d).violation,
            Some(Violation::Overlap {
                first: 1,
                second: 3,
                overlap: 2
            })
        );
    }

    #[test]
    fn greedy_examples() {
        let b = gen_design_greedy(4, 2, 1, 3).unwrap();
        assert_eq!(b.design.sets, vec![vec![0, 1], vec![0, 2], vec![0, 3]]);
        assert_eq!(b.shortfall, 0);

        let b = gen_design_greedy(3, 2, 1, 1).unwrap();
        assert_eq!(b.design.sets, vec![vec![0, 1]]);

        let b = gen_design_greedy(4, 2, 0, 3).unwrap();
        assert_eq!(b.design.sets, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(b.shortfall, 1);

        assert!(gen_design_greedy(3, 3, 1, 1).is_err());
        assert!(gen_design_greedy(4, 2, 2, 1).is_err());
    }

    /// Naive scan over every subset, the oracle for the pruned search.
    fn naive_greedy(d: usize, r: usize, s: usize, m: usize) -> Vec<Vec<usize>> {
        use itertools::Itertools;
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for c in (0..d).combinations(r) {
            if kept.len() == m {
                break;
            }
            if kept.iter().all(|k| overlap(k, &c) <= s) {
                kept.push(c);
            }
        }
        kept
    }

    #[test]
    fn pruned_greedy_matches_naive_scan() {
        for d in 3..=9 {
            for r in 1..d {
                for s in 0..r {
                    for m in [1, 3, 7, 50] {
                        let fast = gen_design_greedy(d, r, s, m).unwrap();
                        assert_eq!(fast.design.sets, naive_greedy(d, r, s, m), "{d} {r} {s} {m}");
                        assert!(verify_design(&fast.design).valid);
                    }
                }
            }
        }
    }

    #[test]
    fn km_examples() {
        let third = Rational64::new(1, 3);
        let km = gen_design_km(405, third).unwrap();
        assert_eq!((km.design.r, km.design.s), (135, 90));
        assert_eq!(km.size_floor, 2);
        assert_eq!(km.size_exponent, "1");
        assert!(km.integral && km.meets_floor);
        assert!(km.design.len() >= 2);
        assert!(verify_design(&km.design).valid);

        let km = gen_design_km(18, third).unwrap();
        assert_eq!((km.design.r, km.design.s), (6, 4));
        assert_eq!(km.size_floor, 1);
        assert_eq!(km.design.len(), 1);

        assert!(gen_design_km(80, Rational64::new(1, 2)).is_err());
        assert!(gen_design_km(80, Rational64::new(3, 2)).is_err());
    }

    #[test]
    fn km_records_rounding() {
        let km = gen_design_km(20, Rational64::new(1, 3)).unwrap();
        assert_eq!((km.design.r, km.design.s), (6, 4));
        assert!(!km.integral);
        assert_eq!(km.notes.len(), 2);
    }

    #[test]
    fn floor_pow2_is_exact() {
        assert_eq!(floor_pow2(Rational64::new(0, 1)), BigUint::from(1u8));
        assert_eq!(floor_pow2(Rational64::new(1, 2)), BigUint::from(1u8));
        assert_eq!(floor_pow2(Rational64::new(7, 2)), BigUint::from(11u8));
        assert_eq!(floor_pow2(Rational64::new(10, 1)), BigUint::from(1024u32));
    }

    #[test]
    fn polynomial_examples() {
        let d = design_from_polynomials(2, 1, 4).unwrap();
        assert_eq!((d.d, d.r, d.s), (4, 2, 1));
        assert_eq!(d.sets, vec![vec![0, 2], vec![0, 3], vec![1, 3], vec![1, 2]]);
        assert!(verify_design(&d).valid);

        let d = design_from_polynomials(3, 0, 3).unwrap();
        assert_eq!(d.sets, vec![vec![0, 3, 6], vec![1, 4, 7], vec![2, 5, 8]]);
        assert!(verify_design(&d).valid);

        let d = design_from_polynomials(3, 1, 9).unwrap();
        assert_eq!(d.len(), 9);
        assert!(verify_design(&d).valid);

        assert!(design_from_polynomials(4, 1, 2).is_err());
        assert!(design_from_polynomials(3, 3, 2).is_err());
        assert!(design_from_polynomials(3, 1, 10).is_err());
    }

    #[test]
    fn polynomial_overlap_bound_is_tight() {
        for p in [2u64, 3, 5, 7] {
            for degree in 0..p.min(3) as usize {
                let total = p.pow(degree as u32 + 1) as usize;
                let d = design_from_polynomials(p, degree, total.min(200)).unwrap();
                let max = (0..d.len())
                    .flat_map(|j| (j + 1..d.len()).map(move |k| (j, k)))
                    .map(|(j, k)| overlap(&d.sets[j], &d.sets[k]))
                    .max()
                    .unwrap_or(0);
                assert!(verify_design(&d).valid);
                if d.len() > 1 {
                    assert_eq!(max, degree, "p={p} degree={degree}");
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let d = design(3, 2, 1, &[&[0, 1], &[1, 2]]);
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"d":3,"r":2,"s":1,"sets":[[0,1],[1,2]]}"#);
        assert_eq!(serde_json::from_str::<Design>(&json).unwrap(), d);
    }
}
