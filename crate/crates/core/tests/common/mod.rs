//! Independent oracles. Nothing here calls into the library's algebra.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

/// Rank mod `p` by plain Gaussian elimination.
pub fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let pow = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = (r as u128 * a as u128 % p as u128) as u64;
            }
            a = (a as u128 * a as u128 % p as u128) as u64;
            e >>= 1;
        }
        r
    };
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else { continue };
        rows.swap(rank, piv);
        let inv = pow(rows[rank][c], p - 2);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[c].is_multiple_of(p) {
                let f = (row[c] as u128 * inv as u128 % p as u128) as u64;
                for (x, &y) in row.iter_mut().zip(&pivot).skip(c) {
                    let sub = (f as u128 * y as u128 % p as u128) as u64;
                    *x = (*x + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Fraction-free (Bareiss) rank over the integers.
pub fn bareiss_rank(mut m: Vec<Vec<i128>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        for r in rank + 1..m.len() {
            for k in c + 1..cols {
                m[r][k] = (m[rank][c] * m[r][k] - m[r][c] * m[rank][k]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
    }
    rank
}

fn exponents(d: u32) -> Vec<[u32; 3]> {
    let mut v = Vec::new();
    for a in 0..=d {
        for b in 0..=d - a {
            v.push([a, b, d - a - b]);
        }
    }
    v
}

fn monomial_val(e: [u32; 3], pt: [i128; 3], p: i128) -> i128 {
    (0..3).fold(1i128, |acc, i| {
        (0..e[i]).fold(acc, |a, _| a * pt[i] % p)
    })
}

/// Double-point conditions on plane curves of degree `d`: the three
/// first partials at each point, Euler's identity supplying `f(P) = 0`.
pub fn double_point_rows(d: u32, pts: &[[u64; 3]], p: u64) -> Vec<Vec<u64>> {
    let mons = exponents(d);
    let p = p as i128;
    let mut rows = Vec::new();
    for pt in pts {
        let q = pt.map(|c| c as i128);
        for v in 0..3 {
            rows.push(
                mons.iter()
                    .map(|&e| {
                        if e[v] == 0 {
                            return 0;
                        }
                        let mut e2 = e;
                        e2[v] -= 1;
                        (e[v] as i128 * monomial_val(e2, q, p) % p) as u64
                    })
                    .collect(),
            );
        }
    }
    rows
}

/// Projective dimension of plane curves of degree `d` double at `pts`.
pub fn double_point_dim(d: u32, pts: &[[u64; 3]], p: u64) -> i64 {
    let n = exponents(d).len() as i64;
    if pts.is_empty() {
        return n - 1;
    }
    n - 1 - rank_mod(double_point_rows(d, pts, p), p) as i64
}

/// Even and odd theta characteristics in genus `g`: quadratic forms on
/// `F_2^{2g}` refining the standard symplectic form, split by Arf invariant.
pub fn arf_theta_counts(g: u32) -> (u64, u64) {
    let n = 2 * g;
    let pair = |x: u32, y: u32| -> u32 {
        // basis e_1..e_g = bits 0..g, f_i = bit g + i
        let xe = x & ((1 << g) - 1);
        let xf = x >> g;
        let ye = y & ((1 << g) - 1);
        let yf = y >> g;
        ((xe & yf).count_ones() + (xf & ye).count_ones()) & 1
    };
    let (mut even, mut odd) = (0, 0);
    for values in 0u32..1 << n {
        let mut zeros = 0u64;
        for x in 0u32..1 << n {
            let mut q = 0;
            for i in 0..n {
                if x >> i & 1 == 1 {
                    q ^= values >> i & 1;
                    for j in i + 1..n {
                        if x >> j & 1 == 1 {
                            q ^= pair(1 << i, 1 << j);
                        }
                    }
                }
            }
            if q == 0 {
                zeros += 1;
            }
        }
        if zeros > 1 << (n - 1) {
            even += 1;
        } else {
            odd += 1;
        }
    }
    (even, odd)
}

/// Catalan numbers by `C_{n+1} = sum C_i C_{n-i}`.
pub fn catalan(n: usize) -> u128 {
    let mut c = vec![1u128];
    for k in 0..n {
        c.push((0..=k).map(|i| c[i] * c[k - i]).sum());
    }
    c[n]
}

fn reflect(d: i64, m: &[i64], t: [usize; 3]) -> (i64, Vec<i64>) {
    let [i, j, k] = t;
    let mut out = m.to_vec();
    out[i] = d - m[j] - m[k];
    out[j] = d - m[i] - m[k];
    out[k] = d - m[i] - m[j];
    (2 * d - m[i] - m[j] - m[k], out)
}

/// Least degree reachable by words of at most `max_len` reflections.
pub fn bfs_min_degree(d: i64, m: &[i64], max_len: usize) -> i64 {
    let n = m.len();
    let triples: Vec<[usize; 3]> = (0..n)
        .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| [i, j, k])))
        .collect();
    let mut seen: HashSet<(i64, Vec<i64>)> = HashSet::new();
    let mut queue = VecDeque::from([((d, m.to_vec()), 0usize)]);
    let mut best = d;
    while let Some(((cd, cm), len)) = queue.pop_front() {
        if !seen.insert((cd, cm.clone())) {
            continue;
        }
        best = best.min(cd);
        if len == max_len {
            continue;
        }
        for &t in &triples {
            queue.push_back((reflect(cd, &cm, t), len + 1));
        }
    }
    best
}

/// Distinct permutations of `(1,1,1,-1,-1,-1)` up to sign, scaled to a
/// leading `1`.
pub fn segre_orbit() -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for mask in 0u32..64 {
        if mask.count_ones() != 3 {
            continue;
        }
        let v: Vec<i64> = (0..6).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
        let s = v[0];
        out.insert(v.iter().map(|x| x * s).collect());
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
