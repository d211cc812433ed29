//! Square roots of ternary forms up to a unit.

use crate::field::{Field, PrimeField};
use crate::form::Form;

/// Component of `f` of degree `2k - j` in `x1`, as a binary form in
/// `(x2, x3)` of degree `j`.
fn x1_slice(f: &Form, j: u32) -> Form {
    let mut out = Form::zero(f.field(), 2, j);
    let top = f.degree();
    for (e, c) in f.terms() {
        if e[0] == top - j {
            out.set_coeff(&[e[1], e[2]], c);
        }
    }
    out
}

/// `g` with `g^2 = c f` for a unit `c`, if one exists over the base field.
///
/// Both square classes of `c` are tried. The result is normalized so that
/// its first nonzero coefficient is 1.
pub fn perfect_square_root(f: &Form) -> Option<Form> {
    assert_eq!(f.nvars(), 3, "ternary forms expected");
    if f.is_zero() || f.degree() % 2 == 1 {
        return None;
    }
    let field = f.field();
    let d = f.degree();
    let bound = d as u64 + 1;
    // shear x2 -> x2 + a x1, x3 -> x3 + b x1 until the x1^d coefficient is nonzero
    let (a, b) = (0..=bound)
        .flat_map(|a| (0..=bound).map(move |b| (a, b)))
        .find(|&(a, b)| f.eval(&[1, a % field.modulus(), b % field.modulus()]) != 0)?;
    let shear = |s: u64, t: u64| vec![vec![1, 0, 0], vec![s, 1, 0], vec![t, 0, 1]];
    let sheared = f.substitute_linear(&shear(a, b));
    let root = root_with_unit_lead(&sheared, field)?;
    let back = root.substitute_linear(&shear(field.neg(a), field.neg(b)));
    Some(back.normalized())
}

fn root_with_unit_lead(f: &Form, field: PrimeField) -> Option<Form> {
    let d = f.degree();
    let k = d / 2;
    let f0 = f.coeff(&[d, 0, 0]);
    debug_assert_ne!(f0, 0);
    let c = if Field::is_square(&field, f0) { 1 } else { field.nonresidue() };
    let g0 = Field::sqrt(&field, field.mul(c, f0))?;
    let inv2g0 = field.inv(field.mul(2, g0));
    let mut parts: Vec<Form> = vec![Form::constant(field, 2, g0)];
    for j in 1..=k {
        let mut rhs = x1_slice(f, j).scale(c);
        for a in 1..j {
            rhs = rhs.sub(&parts[a as usize].mul(&parts[(j - a) as usize]));
        }
        parts.push(rhs.scale(inv2g0));
    }
    let mut g = Form::zero(field, 3, k);
    for (j, part) in parts.iter().enumerate() {
        for (e, coef) in part.terms() {
            g.set_coeff(&[k - j as u32, e[0], e[1]], coef);
        }
    }
    (g.mul(&g) == f.scale(c)).then_some(g)
}
