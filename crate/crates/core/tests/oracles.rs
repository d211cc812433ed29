mod common;

use modcurves::field::{PrimeField, DEFAULT_PRIME};
use modcurves::form::Form;
use modcurves::interpolation::{system_dim, FatPointScheme};
use modcurves::irreducible::{absolutely_irreducible, Irreducibility};
use modcurves::matrix::FpMatrix;
use modcurves::resultant::sylvester_resultant;
use modcurves::seed;
use modcurves::severi::certify_node;
use proptest::prelude::*;
use rand::Rng;

fn pmul(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn ppow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = pmul(r, a, p);
        }
        a = pmul(a, a, p);
        e >>= 1;
    }
    r
}

proptest! {
    #[test]
    fn rank_matches_plain_elimination(rows in proptest::collection::vec(proptest::collection::vec(0u64..251, 6), 1..8)) {
        let f = PrimeField::small(251).unwrap();
        let m = FpMatrix::from_rows(f, &rows).unwrap();
        prop_assert_eq!(m.rank(), common::rank_mod(rows, 251));
    }

    #[test]
    fn small_integer_rank_is_the_rational_rank(rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 5), 1..6)) {
        // every minor is below the default prime in absolute value
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let reduced: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
        let wide: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        prop_assert_eq!(FpMatrix::from_rows(f, &reduced).unwrap().rank(), common::bareiss_rank(wide));
    }

    /// `Res(c prod (t - r_i), b) = c^n prod b(r_i)`.
    #[test]
    fn resultant_is_the_root_product(
        c in 1u64..1009,
        roots in proptest::collection::vec(0u64..1009, 1..5),
        b in proptest::collection::vec(0u64..1009, 1..5),
    ) {
        let p = 1009;
        let f = PrimeField::new(p).unwrap();
        let mut a = vec![c];
        for &r in &roots {
            let mut next = vec![0; a.len() + 1];
            for (i, &ai) in a.iter().enumerate() {
                next[i + 1] = (next[i + 1] + ai) % p;
                next[i] = (next[i] + p - pmul(ai, r, p)) % p;
            }
            a = next;
        }
        let eval = |t: u64| b.iter().rev().fold(0, |acc, &bi| (pmul(acc, t, p) + bi) % p);
        let n = (b.len() - 1) as u64;
        let expected = roots.iter().fold(ppow(c, n, p), |acc, &r| pmul(acc, eval(r), p));
        prop_assert_eq!(sylvester_resultant(f, &a, &b), expected);
    }
}

/// Double-point dimensions over `Q` at small integer points against the
/// library's count at the working prime.
#[test]
fn postulation_over_the_rationals() {
    let f = PrimeField::new(DEFAULT_PRIME).unwrap();
    let mut rng = seed::rng(11);
    for d in 1..=3u32 {
        for delta in 0..=4usize {
            for _ in 0..5 {
                let pts: Vec<[u64; 3]> = (0..delta).map(|_| [rng.gen_range(1..5), rng.gen_range(0..5), rng.gen_range(0..5)]).collect();
                let Ok(z) = FatPointScheme::uniform(f, &pts, 2) else { continue };
                let n = common::binomial(d as u64 + 2, 2) as i64;
                let rational = if delta == 0 {
                    n - 1
                } else {
                    let rows = common::double_point_rows(d, &pts, u64::MAX >> 1);
                    let wide: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
                    n - 1 - common::bareiss_rank(wide) as i64
                };
                assert_eq!(system_dim(f, &z, d).unwrap(), rational, "d = {d}, points {pts:?}");
            }
        }
    }
}

/// Coefficient of `t^2` in `h(t)` from `d + 1` values, by Lagrange.
fn quadratic_coefficient(vals: &[u64], p: u64) -> u64 {
    let n = vals.len();
    let mut out = 0;
    for (i, &v) in vals.iter().enumerate() {
        // basis polynomial prod_{j != i} (t - j) / (i - j)
        let mut poly = vec![1u64];
        let mut denom = 1u64;
        for j in (0..n).filter(|&j| j != i) {
            let mut next = vec![0; poly.len() + 1];
            for (k, &c) in poly.iter().enumerate() {
                next[k + 1] = (next[k + 1] + c) % p;
                next[k] = (next[k] + p - pmul(c, j as u64, p)) % p;
            }
            poly = next;
            denom = pmul(denom, (i as u64 + p - j as u64) % p, p);
        }
        let w = pmul(v, ppow(denom, p - 2, p), p);
        out = (out + pmul(w, poly[2], p)) % p;
    }
    out
}

/// Node at `(0:0:1)` iff exactly 0 or 2 tangent directions over `F_p`.
#[test]
fn node_certification_matches_tangent_directions() {
    let p = 61;
    let f = PrimeField::small(p).unwrap();
    let mut rng = seed::rng(5);
    let d = 5u32;
    for case in 0..60 {
        let mut terms = Vec::new();
        let q: [i64; 3] = match case % 3 {
            0 => std::array::from_fn(|_| rng.gen_range(0..p as i64)),
            1 => {
                let (a, b) = (rng.gen_range(0..p as i64), rng.gen_range(1..p as i64));
                [a * a, 2 * a * b, b * b]
            }
            _ => [0, 0, 0],
        };
        for (k, &c) in q.iter().enumerate() {
            terms.push((vec![2 - k as u32, k as u32, d - 2], c));
        }
        for i in 0..=d {
            for j in 0..=d - i {
                if i + j >= 3 {
                    terms.push((vec![i, j, d - i - j], rng.gen_range(0..p as i64)));
                }
            }
        }
        let form = Form::from_terms(f, 3, d, &terms).unwrap();
        let directions = (0..=p)
            .filter(|&s| {
                let (u, v) = if s == p { (1, 0) } else { (s, 1) };
                let vals: Vec<u64> = (0..=d as u64).map(|t| form.eval(&[pmul(t, u, p), pmul(t, v, p), 1])).collect();
                quadratic_coefficient(&vals, p) == 0
            })
            .count();
        let node = directions == 0 || directions == 2;
        assert_eq!(certify_node(&form, &[0, 0, 1]), node, "case {case}: {directions} directions");
    }
}

type Fp2 = (u64, u64);

/// Conics over `F_p` split into lines over the algebraic closure exactly
/// when they contain a line over `F_{p^2}`; search them all.
fn contains_line_over_fp2(c: &[u64; 6], p: u64, n: u64) -> bool {
    let add = |a: Fp2, b: Fp2| ((a.0 + b.0) % p, (a.1 + b.1) % p);
    let mul = |a: Fp2, b: Fp2| ((pmul(a.0, b.0, p) + pmul(pmul(a.1, b.1, p), n, p)) % p, (pmul(a.0, b.1, p) + pmul(a.1, b.0, p)) % p);
    let eval = |x: [Fp2; 3]| {
        // coefficient order x^2, xy, xz, y^2, yz, z^2
        let mons = [mul(x[0], x[0]), mul(x[0], x[1]), mul(x[0], x[2]), mul(x[1], x[1]), mul(x[1], x[2]), mul(x[2], x[2])];
        mons.iter().zip(c).fold((0, 0), |acc, (&m, &k)| add(acc, mul(m, (k, 0))))
    };
    let neg = |a: Fp2| ((p - a.0) % p, (p - a.1) % p);
    let elems: Vec<Fp2> = (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).collect();
    let zero = (0, 0);
    let one = (1, 0);
    // line a x + b y + z = 0, then b y + z, then z (the line z = 0)
    let mut lines: Vec<[Fp2; 3]> = Vec::new();
    for &a in &elems {
        for &b in &elems {
            lines.push([a, b, one]);
        }
    }
    for &b in &elems {
        lines.push([zero, one, b]);
    }
    lines.push([one, zero, zero]);
    lines.iter().any(|l| {
        // three points of the line
        let pts: [[Fp2; 3]; 3] = if l[2] == one {
            [[one, zero, neg(l[0])], [zero, one, neg(l[1])], [one, one, neg(add(l[0], l[1]))]]
        } else if l[1] == one {
            [[one, zero, zero], [zero, neg(l[2]), one], [one, neg(l[2]), one]]
        } else {
            [[zero, one, zero], [zero, zero, one], [zero, one, one]]
        };
        pts.iter().all(|&x| eval(x) == zero)
    })
}

#[test]
fn conic_reducibility_matches_line_search() {
    let p = 31;
    let f = PrimeField::small(p).unwrap();
    let n = f.nonresidue();
    let mut rng = seed::rng(9);
    let mut reducible = 0;
    for case in 0..30 {
        let conic = match case % 3 {
            0 => Form::from_coeffs(f, 3, 2, (0..6).map(|_| f.random(&mut rng)).collect()).unwrap(),
            1 => {
                let l = |r: &mut rand_chacha::ChaCha8Rng| Form::linear(f, &[f.random(r), f.random(r), 1]);
                l(&mut rng).mul(&l(&mut rng))
            }
            _ => {
                // L * conj(L) for L = a + sqrt(n) b, a and b linear over F_p
                let a = Form::linear(f, &[f.random(&mut rng), f.random(&mut rng), 1]);
                let b = Form::linear(f, &[f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)]);
                a.mul(&a).sub(&b.mul(&b).scale(n))
            }
        };
        let c: [u64; 6] = [
            conic.coeff(&[2, 0, 0]),
            conic.coeff(&[1, 1, 0]),
            conic.coeff(&[1, 0, 1]),
            conic.coeff(&[0, 2, 0]),
            conic.coeff(&[0, 1, 1]),
            conic.coeff(&[0, 0, 2]),
        ];
        let split = contains_line_over_fp2(&c, p, n);
        reducible += split as usize;
        let verdict = absolutely_irreducible(&conic).unwrap();
        assert_eq!(verdict == Irreducibility::Yes, !split, "case {case}: {verdict:?}");
    }
    assert!(reducible >= 20);
}
