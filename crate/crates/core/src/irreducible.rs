//! Absolute irreducibility of plane curves by Gao's partial differential
//! equation criterion.
//!
//! For `F(x, y)` of bidegree `(m, n)` with `gcd(F, F_x) = 1` and
//! `p > (2m - 1) n`, the space of pairs `(g, h)`,
//! `deg g <= (m - 1, n)`, `deg h <= (m, n - 1)`, solving
//!
//! ```text
//! F g_y - g F_y = F h_x - h F_x
//! ```
//!
//! has dimension equal to the number of absolutely irreducible factors of
//! `F`. The ternary form is first moved by a seeded linear change so that
//! `F = f(x, y, 1)` has bidegree `(d, d)` and `x3` does not divide `f`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::form::Form;
use crate::matrix::FpMatrix;
use crate::resultant::{resultant_wrt, sylvester_resultant};
use crate::upoly::UPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "factor_degree")]
pub enum Irreducibility {
    Yes,
    /// Reducible over the algebraic closure; carries the least degree of an
    /// absolutely irreducible factor.
    No(u32),
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityReport {
    pub verdict: Irreducibility,
    /// Dimension of the solution space, i.e. the number of absolutely
    /// irreducible factors.
    pub solution_dim: usize,
    /// Rows are the images of `x1, x2, x3`.
    pub coordinate_change: Vec<Vec<u64>>,
    /// Factor degrees with multiplicity, when reducible.
    pub factor_degrees: Vec<u32>,
    pub seed: u64,
}

const CHANGE_ATTEMPTS: usize = 32;

/// Verdict only, with a fixed seed.
pub fn absolutely_irreducible(f: &Form) -> Result<Irreducibility> {
    Ok(absolutely_irreducible_report(f, 0)?.verdict)
}

pub fn absolutely_irreducible_report(f: &Form, seed: u64) -> Result<IrreducibilityReport> {
    assert_eq!(f.nvars(), 3, "ternary forms expected");
    let field = f.field();
    let d = f.degree();
    let inconclusive = |change: Vec<Vec<u64>>| IrreducibilityReport {
        verdict: Irreducibility::Inconclusive,
        solution_dim: 0,
        coordinate_change: change,
        factor_degrees: Vec::new(),
        seed,
    };
    if d == 0 || f.is_zero() {
        return Ok(inconclusive(Vec::new()));
    }
    if d == 1 {
        return Ok(IrreducibilityReport {
            verdict: Irreducibility::Yes,
            solution_dim: 1,
            coordinate_change: identity(),
            factor_degrees: Vec::new(),
            seed,
        });
    }
    let (m, n) = (d as u64, d as u64);
    if field.modulus() <= (2 * m - 1) * n {
        return Ok(inconclusive(Vec::new()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = None;
    for _ in 0..CHANGE_ATTEMPTS {
        let change: Vec<Vec<u64>> = (0..3).map(|_| (0..3).map(|_| field.random(&mut rng)).collect()).collect();
        if FpMatrix::from_rows(field, &change).unwrap().determinant() == 0 {
            continue;
        }
        let g = f.substitute_linear(&change);
        if g.coeff(&[d, 0, 0]) != 0 && g.coeff(&[0, d, 0]) != 0 {
            chosen = Some((change, g));
            break;
        }
    }
    let Some((change, g)) = chosen else {
        return Ok(inconclusive(Vec::new()));
    };
    // gcd(F, F_x) = 1 iff the discriminant in x1 is nonzero; F has no factor
    // free of x since its x^d coefficient is a unit.
    if resultant_wrt(&g, &g.partial(0), 0)?.is_zero() {
        return Err(Error::NotSquarefree);
    }
    let big = Bivariate::from_form(&g);
    let sys = gao_system(&big);
    let kernel = sys.kernel_basis();
    let dim = kernel.len();
    if dim == 1 {
        return Ok(IrreducibilityReport {
            verdict: Irreducibility::Yes,
            solution_dim: 1,
            coordinate_change: change,
            factor_degrees: vec![d],
            seed,
        });
    }
    let degrees = factor_degrees(&big, &kernel, dim, &mut rng);
    let min = degrees.iter().copied().min().unwrap_or(1);
    Ok(IrreducibilityReport {
        verdict: Irreducibility::No(min),
        solution_dim: dim,
        coordinate_change: change,
        factor_degrees: degrees,
        seed,
    })
}

fn identity() -> Vec<Vec<u64>> {
    vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
}

/// Dense `F[i][j]` = coefficient of `x^i y^j`.
struct Bivariate {
    field: PrimeField,
    m: usize,
    n: usize,
    c: Vec<Vec<u64>>,
}

impl Bivariate {
    fn from_form(f: &Form) -> Self {
        let d = f.degree() as usize;
        let mut c = vec![vec![0; d + 1]; d + 1];
        for (e, v) in f.terms() {
            c[e[0] as usize][e[1] as usize] = v;
        }
        Self { field: f.field(), m: d, n: d, c }
    }

    fn get(&self, i: isize, j: isize) -> u64 {
        if i < 0 || j < 0 || i as usize > self.m || j as usize > self.n {
            0
        } else {
            self.c[i as usize][j as usize]
        }
    }

    /// `F(x, y0)` as a polynomial in `x`.
    fn at_y(&self, y0: u64) -> UPoly<PrimeField> {
        let f = self.field;
        let coeffs =
            (0..=self.m).map(|i| self.c[i].iter().rev().fold(0, |acc, &v| f.add(f.mul(acc, y0), v))).collect();
        UPoly::new(f, coeffs)
    }
}

/// Unknowns: `g_{ab}` for `a < m, b <= n`, then `h_{ab}` for `a <= m, b < n`.
/// Rows: coefficients of `x^i y^j`, `i < 2m`, `j < 2n`.
fn gao_system(f: &Bivariate) -> FpMatrix {
    let fld = f.field;
    let (m, n) = (f.m, f.n);
    let g_cols = m * (n + 1);
    let h_cols = (m + 1) * n;
    let rows = 4 * m * n;
    let mut mat = FpMatrix::zeros(fld, rows, g_cols + h_cols);
    let row = |i: usize, j: usize| i * 2 * n + j;
    // g = x^a y^b contributes F * b x^a y^{b-1} - x^a y^b F_y
    for a in 0..m {
        for b in 0..=n {
            let col = a * (n + 1) + b;
            for i in 0..2 * m {
                for j in 0..2 * n {
                    let (si, sj) = (i as isize - a as isize, j as isize - b as isize);
                    let t1 = fld.mul(fld.from_u64(b as u64), f.get(si, sj + 1));
                    let t2 = fld.mul(fld.from_u64((sj + 1).max(0) as u64), f.get(si, sj + 1));
                    let v = fld.sub(t1, t2);
                    if v != 0 {
                        mat.set(row(i, j), col, v);
                    }
                }
            }
        }
    }
    // h = x^a y^b contributes -F * a x^{a-1} y^b + x^a y^b F_x
    for a in 0..=m {
        for b in 0..n {
            let col = g_cols + a * n + b;
            for i in 0..2 * m {
                for j in 0..2 * n {
                    let (si, sj) = (i as isize - a as isize, j as isize - b as isize);
                    let t1 = fld.mul(fld.from_u64(a as u64), f.get(si + 1, sj));
                    let t2 = fld.mul(fld.from_u64((si + 1).max(0) as u64), f.get(si + 1, sj));
                    let v = fld.sub(t2, t1);
                    if v != 0 {
                        mat.set(row(i, j), col, v);
                    }
                }
            }
        }
    }
    mat
}

/// Degrees of the absolutely irreducible factors, from the multiplicities
/// of the roots of `R(lambda) = Res_x(F(x, y0), g(x, y0) - lambda F_x(x, y0))`
/// for a random solution `g`.
fn factor_degrees(f: &Bivariate, kernel: &[Vec<u64>], dim: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let fld = f.field;
    let (m, n) = (f.m, f.n);
    let mut last = Vec::new();
    for _ in 0..8 {
        let coef: Vec<u64> = kernel.iter().map(|_| fld.random(rng)).collect();
        let mut sol = vec![0u64; kernel[0].len()];
        for (c, v) in coef.iter().zip(kernel) {
            for (s, &x) in sol.iter_mut().zip(v) {
                *s = fld.add(*s, fld.mul(*c, x));
            }
        }
        let y0 = fld.random(rng);
        let fx0 = f.at_y(y0);
        if fx0.degree() != Some(m) || fx0.gcd(&fx0.derivative()).degree() != Some(0) {
            continue;
        }
        // g(x, y0), degree <= m - 1
        let g0: Vec<u64> = (0..m)
            .map(|a| (0..=n).rev().fold(0, |acc, b| fld.add(fld.mul(acc, y0), sol[a * (n + 1) + b])))
            .collect();
        let dfx = fx0.derivative();
        let fcoeffs = fx0.coeffs().to_vec();
        let lambdas: Vec<u64> = (0..=m as u64).collect();
        let values: Vec<u64> = lambdas
            .iter()
            .map(|&l| {
                let mut second: Vec<u64> = (0..m).map(|a| fld.sub(g0[a], fld.mul(l, dfx.coeff(a)))).collect();
                second.resize(m, 0);
                sylvester_resultant(fld, &fcoeffs, &second)
            })
            .collect();
        let r = UPoly::interpolate(fld, &lambdas, &values);
        let mut degrees = Vec::new();
        for (mult, part) in r.squarefree_decomposition() {
            for _ in 0..part.degree().unwrap_or(0) {
                degrees.push(mult as u32);
            }
        }
        degrees.sort_unstable();
        if degrees.len() == dim && degrees.iter().sum::<u32>() as usize == m {
            return degrees;
        }
        last = degrees;
    }
    last
}
