//! Resultants of ternary forms and gcds of binary forms.
//!
//! A binary form `b(x1, x2)` of degree `n` is a [`Form`] in two variables;
//! its dehomogenization `b(t, 1)` is a [`UPoly`] of degree `n - k`, where
//! `k` is the power of `x2` dividing `b`.

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::form::Form;
use crate::matrix::FpMatrix;
use crate::upoly::UPoly;

/// Sylvester determinant of two univariate polynomials of formal degrees
/// `a.len() - 1` and `b.len() - 1` (coefficients low degree first).
pub fn sylvester_resultant(field: PrimeField, a: &[u64], b: &[u64]) -> u64 {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return 1;
    }
    let mut s = FpMatrix::zeros(field, size, size);
    for r in 0..n {
        for (j, &c) in a.iter().rev().enumerate() {
            s.set(r, r + j, c);
        }
    }
    for r in 0..m {
        for (j, &c) in b.iter().rev().enumerate() {
            s.set(n + r, r + j, c);
        }
    }
    s.determinant()
}

/// `b(t, 1)`.
pub fn dehomogenize(b: &Form) -> UPoly<PrimeField> {
    assert_eq!(b.nvars(), 2);
    let d = b.degree() as usize;
    let mut coeffs = vec![0; d + 1];
    for (e, c) in b.terms() {
        coeffs[e[0] as usize] = c;
    }
    UPoly::new(b.field(), coeffs)
}

/// `x2^degree * u(x1 / x2)`; `degree >= deg u`.
pub fn homogenize(u: &UPoly<PrimeField>, degree: u32) -> Form {
    let f = u.field();
    let mut out = Form::zero(f, 2, degree);
    for (k, &c) in u.coeffs().iter().enumerate() {
        if c != 0 {
            out.set_coeff(&[k as u32, degree - k as u32], c);
        }
    }
    out
}

/// Power of `x2` dividing a nonzero binary form.
pub fn x2_multiplicity(b: &Form) -> u32 {
    b.terms().map(|(e, _)| e[1]).min().unwrap_or(u32::MAX)
}

/// Monic binary gcd (monic in the dehomogenized sense).
pub fn binary_gcd(a: &Form, b: &Form) -> Form {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    let g = dehomogenize(a).gcd(&dehomogenize(b));
    let k = x2_multiplicity(a).min(x2_multiplicity(b));
    homogenize(&g, g.degree().unwrap_or(0) as u32 + k)
}

/// Linear factors of a binary form with multiplicities, as points
/// `(a : b)` of `P^1` with `b x1 - a x2` the factor. Only factors over the
/// base field are returned.
pub fn binary_roots<R: rand::Rng + ?Sized>(b: &Form, rng: &mut R) -> Vec<([u64; 2], usize)> {
    let u = dehomogenize(b);
    let mut out: Vec<([u64; 2], usize)> =
        u.roots(rng).into_iter().map(|r| ([r, 1], u.root_multiplicity(r))).collect();
    let k = x2_multiplicity(b);
    if k > 0 {
        out.push(([1, 0], k as usize));
    }
    out
}

/// `Res_{x3}(f, g)` as a binary form in `(x1, x2)` of degree `deg f * deg g`.
///
/// Computed from Sylvester determinants at `x2 = 1`,
/// `x1 = 0, 1, ..., mn` and interpolated. Formal degrees are the total
/// degrees; the leading coefficients in `x3` are constants and at least one
/// must be nonzero.
pub fn resultant_x3(f: &Form, g: &Form) -> Result<Form> {
    assert!(f.nvars() == 3 && g.nvars() == 3, "ternary forms expected");
    let field = f.field();
    let m = f.degree();
    let n = g.degree();
    if f.coeff(&[0, 0, m]) == 0 && g.coeff(&[0, 0, n]) == 0 {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let total = (m * n) as u64;
    if total + 1 > field.modulus() {
        return Err(Error::UnsupportedModulus { p: field.modulus(), reason: "too small to interpolate the resultant" });
    }
    let xs: Vec<u64> = (0..=total).collect();
    let ys: Vec<u64> = xs
        .iter()
        .map(|&a| {
            let fa = pad(f.slice_last(&field, &[a, 1]), m as usize);
            let ga = pad(g.slice_last(&field, &[a, 1]), n as usize);
            sylvester_resultant(field, &fa, &ga)
        })
        .collect();
    let u = UPoly::interpolate(field, &xs, &ys);
    Ok(homogenize(&u, m * n))
}

/// Resultant eliminating `x_{var+1}`; the result is a binary form in the two
/// remaining variables in their original order.
pub fn resultant_wrt(f: &Form, g: &Form, var: usize) -> Result<Form> {
    let perm: Vec<usize> = match var {
        0 => vec![1, 2, 0],
        1 => vec![0, 2, 1],
        2 => vec![0, 1, 2],
        _ => return Err(Error::IndexError(format!("variable {var} of 3"))),
    };
    resultant_x3(&f.permute_vars(&perm), &g.permute_vars(&perm))
}

fn pad(u: UPoly<PrimeField>, len_minus_one: usize) -> Vec<u64> {
    let mut c = u.coeffs().to_vec();
    c.resize(len_minus_one + 1, 0);
    c
}

/// Resultant in `t` of two univariate polynomials over any field with
/// nonzero leading coefficients, by the Euclidean algorithm.
pub fn univariate_resultant<F: Field>(a: &UPoly<F>, b: &UPoly<F>) -> F::Elem {
    let f = a.field();
    let (Some(mut da), Some(mut db)) = (a.degree(), b.degree()) else {
        return f.zero();
    };
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = f.one();
    loop {
        if db == 0 {
            return f.mul(acc, f.pow(b.leading().unwrap(), da as u128));
        }
        let r = a.rem(&b);
        let Some(dr) = r.degree() else {
            return f.zero();
        };
        // res(a, b) = (-1)^{da db} lc(b)^{da - dr} res(b, r)
        if da % 2 == 1 && db % 2 == 1 {
            acc = f.neg(acc);
        }
        acc = f.mul(acc, f.pow(b.leading().unwrap(), (da - dr) as u128));
        a = b;
        b = r;
        da = db;
        db = dr;
    }
}
