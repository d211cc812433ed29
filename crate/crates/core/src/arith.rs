//! Closed-form numerology: Brill-Noether numbers, plane genus and degree
//! bounds, gonality cover degrees, theta characteristics and hyperelliptic
//! 2-torsion strata. Counts are exact big integers.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `rho(g, r, d) = g - (r + 1)(g - d + r)`, arguments in that order.
pub fn rho(g: i64, r: i64, d: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}

/// `C(d - 1, 2) - delta`.
pub fn plane_genus(d: u32, delta: usize) -> i64 {
    let d = d as i64;
    (d - 1) * (d - 2) / 2 - delta as i64
}

/// Least `d` with `3d >= 2g + 6`.
pub fn minimal_plane_degree(g: u32) -> u32 {
    (2 * g + 6).div_ceil(3)
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn big_binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `g! / ((g - k + 1)! (g - k + 2)!)`, defined when `rho(g, 1, k) = 0`.
pub fn gonality_cover_degree(g: u64, k: u64) -> Result<BigUint> {
    if k < 1 || rho(g as i64, 1, k as i64) != 0 {
        return Err(Error::RhoNotZero { g, k });
    }
    Ok(factorial(g) / (factorial(g - k + 1) * factorial(g - k + 2)))
}

/// `(2^{g-1}(2^g + 1), 2^{g-1}(2^g - 1))`.
pub fn theta_counts(g: u32) -> (BigUint, BigUint) {
    assert!(g >= 1, "genus at least 1");
    let half = BigUint::one() << (g - 1);
    let full = BigUint::one() << g;
    (&half * (&full + 1u32), &half * (&full - 1u32))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub t: u64,
    /// `C(2g + 2, 2t)`.
    #[serde(with = "crate::decimal")]
    pub e_t: BigUint,
    #[serde(with = "crate::decimal")]
    pub b_t: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCensus {
    pub g: u64,
    pub strata: Vec<Stratum>,
    #[serde(with = "crate::decimal")]
    pub total: BigUint,
}

/// Strata of nonzero 2-torsion points on a hyperelliptic Jacobian by the
/// number `2t` of Weierstrass points in the support, `1 <= t <= (g+1)/2`.
/// At `t = (g + 1)/2` (odd `g`) complementary subsets give the same point.
pub fn hyperelliptic_two_torsion_census(g: u64) -> TorsionCensus {
    assert!(g >= 2, "genus at least 2");
    let mut strata = Vec::new();
    let mut total = BigUint::zero();
    for t in 1..=g.div_ceil(2) {
        let e_t = big_binomial(2 * g + 2, 2 * t);
        let b_t = if g % 2 == 1 && t == g.div_ceil(2) { &e_t / 2u32 } else { e_t.clone() };
        total += &b_t;
        strata.push(Stratum { t, e_t, b_t });
    }
    TorsionCensus { g, strata, total }
}
