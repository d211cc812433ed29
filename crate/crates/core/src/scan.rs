//! Exhaustive search for singular points of plane curves over small fields.
//!
//! `P^2(F_q)` is swept by the lines through `(0:0:1)`: on the line through
//! `(a:b:0)` the partials restrict to polynomials in `t` for the point
//! `(a:b:t)`, and their common roots are the singular points on that line.

use crate::field::Field;
use crate::form::Form;
use crate::upoly::UPoly;

/// Singular points of `f` over `field`, normalized with first nonzero
/// coordinate 1, in sweep order. The field characteristic must exceed
/// `deg f` so that the vanishing of the partials implies `f = 0`.
pub fn singular_points<F: Field>(f: &Form, field: F) -> Vec<[F::Elem; 3]> {
    let grad = f.gradient();
    let mut out = Vec::new();
    let apex = [field.zero(), field.zero(), field.one()];
    if grad.iter().all(|g| field.is_zero(g.eval_in(&field, &apex))) {
        out.push(apex);
    }
    let q = field.order();
    let heads = (0..q).map(|i| [field.one(), field.element(i)]).chain(std::iter::once([field.zero(), field.one()]));
    for head in heads {
        let mut common = UPoly::zero(field);
        for g in &grad {
            common = common.gcd(&g.slice_last(&field, &head));
            if common.degree() == Some(0) {
                break;
            }
        }
        if common.is_zero() {
            // the whole line is singular; report its points
            for i in 0..q {
                out.push([head[0], head[1], field.element(i)]);
            }
            continue;
        }
        for t in common.roots_exhaustive() {
            out.push([head[0], head[1], t]);
        }
    }
    out
}
