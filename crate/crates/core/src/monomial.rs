//! Graded-lex monomial bases of homogeneous forms.
//!
//! Monomials of degree `d` in `n` variables are listed with the exponent of
//! `x1` descending, ties broken by the exponent of `x2` descending, and so
//! on (`x1 > x2 > ... > xn`). For ternary sextics the order begins
//! `x1^6, x1^5 x2, x1^5 x3, x1^4 x2^2, ...`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

#[derive(Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    nvars: usize,
    degree: u32,
    exps: Vec<Vec<u32>>,
}

/// `C(n, k)` in `u64`; small arguments only.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of monomials of degree `d` in `n` variables.
pub fn count(nvars: usize, degree: u32) -> usize {
    if nvars == 0 {
        return usize::from(degree == 0);
    }
    binomial(degree as u64 + nvars as u64 - 1, nvars as u64 - 1) as usize
}

fn generate(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if degree == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if nvars == 1 {
        return vec![vec![degree]];
    }
    let mut out = Vec::with_capacity(count(nvars, degree));
    for e in (0..=degree).rev() {
        for mut tail in generate(nvars - 1, degree - e) {
            tail.insert(0, e);
            out.push(tail);
        }
    }
    out
}

type Cache = RwLock<HashMap<(usize, u32), Arc<MonomialBasis>>>;

static CACHE: OnceLock<Cache> = OnceLock::new();

impl MonomialBasis {
    /// Shared basis for `(nvars, degree)`.
    pub fn get(nvars: usize, degree: u32) -> Arc<MonomialBasis> {
        let cache = CACHE.get_or_init(Default::default);
        if let Some(b) = cache.read().unwrap().get(&(nvars, degree)) {
            return b.clone();
        }
        let basis = Arc::new(MonomialBasis { nvars, degree, exps: generate(nvars, degree) });
        cache.write().unwrap().entry((nvars, degree)).or_insert(basis).clone()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self, index: usize) -> &[u32] {
        &self.exps[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.exps.iter().map(Vec::as_slice)
    }

    /// Position of an exponent vector, `None` if it does not belong here.
    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        if exps.len() != self.nvars || exps.iter().sum::<u32>() != self.degree {
            return None;
        }
        let mut idx = 0;
        let mut rem = self.degree;
        for (i, &e) in exps.iter().enumerate().take(self.nvars.saturating_sub(1)) {
            let tail_vars = self.nvars - i - 1;
            for larger in e + 1..=rem {
                idx += count(tail_vars, rem - larger);
            }
            rem -= e;
        }
        Some(idx)
    }
}
