//! Classes `dH - sum m_i E_i` on a blown-up plane and the quadratic
//! reflections acting on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiplicityClass {
    pub d: i64,
    pub m: Vec<i64>,
}

impl MultiplicityClass {
    pub fn new(d: i64, m: Vec<i64>) -> Self {
        Self { d, m }
    }

    /// `<p(D), H>`.
    pub fn h_value(&self) -> i64 {
        self.d
    }

    /// `D^2 = d^2 - sum m_i^2`.
    pub fn self_intersection(&self) -> i64 {
        self.d * self.d - self.m.iter().map(|x| x * x).sum::<i64>()
    }

    /// `K.D = -3d + sum m_i`.
    pub fn canonical_pairing(&self) -> i64 {
        -3 * self.d + self.m.iter().sum::<i64>()
    }

    pub fn has_negative_multiplicity(&self) -> bool {
        self.m.iter().any(|&x| x < 0)
    }

    /// Multiplicities sorted in decreasing order.
    pub fn sorted(&self) -> Self {
        let mut m = self.m.clone();
        m.sort_unstable_by(|a, b| b.cmp(a));
        Self { d: self.d, m }
    }
}

impl fmt::Display for MultiplicityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.d)?;
        let parts: Vec<String> = self.m.iter().map(i64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Parses `d;m1,m2,...`; an entry `m^k` stands for `k` copies of `m`.
impl FromStr for MultiplicityClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected 'd;m1,m2,...', got {s:?}"));
        let (d, rest) = s.split_once(';').ok_or_else(bad)?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        let mut m = Vec::new();
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.split_once('^') {
                Some((v, k)) => {
                    let v: i64 = v.trim().parse().map_err(|_| bad())?;
                    let k: usize = k.trim().parse().map_err(|_| bad())?;
                    m.extend(std::iter::repeat_n(v, k));
                }
                None => m.push(part.parse().map_err(|_| bad())?),
            }
        }
        Ok(Self { d, m })
    }
}

/// The reflection centred at points `i, j, k`:
/// `d' = 2d - m_i - m_j - m_k`, `m_i' = d - m_j - m_k` and cyclically.
pub fn quadratic_reflection(c: &MultiplicityClass, i: usize, j: usize, k: usize) -> Result<MultiplicityClass> {
    let n = c.m.len();
    if i == j || j == k || i == k || i >= n || j >= n || k >= n {
        return Err(Error::IndexError(format!("({i}, {j}, {k}) for {n} points")));
    }
    let (mi, mj, mk) = (c.m[i], c.m[j], c.m[k]);
    let mut m = c.m.clone();
    m[i] = c.d - mj - mk;
    m[j] = c.d - mi - mk;
    m[k] = c.d - mi - mj;
    Ok(MultiplicityClass { d: 2 * c.d - mi - mj - mk, m })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub minimal: MultiplicityClass,
    /// Index triples in application order.
    pub word: Vec<[usize; 3]>,
    /// No triple of multiplicities exceeds the degree.
    pub terminal: bool,
    /// Some intermediate class had a negative multiplicity.
    pub passed_negative: bool,
}

/// Indices of the three largest multiplicities, ties by lower index.
fn top_three(c: &MultiplicityClass) -> Option<[usize; 3]> {
    if c.m.len() < 3 {
        return None;
    }
    let mut idx: Vec<usize> = (0..c.m.len()).collect();
    idx.sort_by(|&a, &b| c.m[b].cmp(&c.m[a]).then(a.cmp(&b)));
    Some([idx[0], idx[1], idx[2]])
}

/// Greedy reduction: reflect on the three largest multiplicities while
/// their sum exceeds the degree, at most `depth_limit` times.
pub fn cremona_minimize(c: &MultiplicityClass, depth_limit: usize) -> Reduction {
    let mut cur = c.clone();
    let mut word = Vec::new();
    let mut passed_negative = cur.has_negative_multiplicity();
    loop {
        let Some(t) = top_three(&cur) else {
            return Reduction { minimal: cur, word, terminal: true, passed_negative };
        };
        let excess = cur.m[t[0]] + cur.m[t[1]] + cur.m[t[2]] > cur.d;
        if !excess {
            return Reduction { minimal: cur, word, terminal: true, passed_negative };
        }
        if word.len() == depth_limit {
            return Reduction { minimal: cur, word, terminal: false, passed_negative };
        }
        cur = quadratic_reflection(&cur, t[0], t[1], t[2]).expect("distinct indices");
        passed_negative |= cur.has_negative_multiplicity();
        word.push(t);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub g: i64,
    /// `(d', delta')` with `g = C(d'-1, 2) - delta'`, `delta' >= 0`,
    /// `g <= 3d'/2 - 3` and `d'^2 - 4 delta' >= 0`.
    pub pairs: Vec<(i64, i64)>,
}

impl RigidityReport {
    pub fn feasible(&self) -> bool {
        !self.pairs.is_empty()
    }
}

pub fn rigidity_feasibility(g: i64) -> RigidityReport {
    // d'^2 - 4 delta' = -d'^2 + 6 d' - 4 + 4g, negative beyond this bound
    let bound = 3 + (5 + 4 * g.max(0)).isqrt() + 1;
    let pairs = (1..=bound)
        .filter_map(|d| {
            let delta = (d - 1) * (d - 2) / 2 - g;
            let ok = delta >= 0 && 2 * g <= 3 * d - 6 && d * d - 4 * delta >= 0;
            ok.then_some((d, delta))
        })
        .collect();
    RigidityReport { g, pairs }
}
