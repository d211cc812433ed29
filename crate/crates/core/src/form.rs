//! Homogeneous forms with dense coefficient vectors over the monomial basis
//! of [`crate::monomial`].
//!
//! Ternary forms (plane curves) are the main use; the same type carries the
//! binary forms produced by resultants and the quaternary and senary forms
//! of the special families.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::monomial::MonomialBasis;
use crate::upoly::UPoly;

#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    field: PrimeField,
    basis: Arc<MonomialBasis>,
    coeffs: Vec<u64>,
}

/// Ternary form `f(x1, x2, x3)`.
pub type HomForm = Form;

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}; deg {}](", self.nvars(), self.degree())?;
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*x^{:?}", self.field.lift(c), e)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl Form {
    pub fn zero(field: PrimeField, nvars: usize, degree: u32) -> Self {
        let basis = MonomialBasis::get(nvars, degree);
        let coeffs = vec![0; basis.len()];
        Self { field, basis, coeffs }
    }

    pub fn from_coeffs(field: PrimeField, nvars: usize, degree: u32, coeffs: Vec<u64>) -> Result<Self> {
        let basis = MonomialBasis::get(nvars, degree);
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} monomials",
                coeffs.len(),
                basis.len()
            )));
        }
        let coeffs = coeffs.into_iter().map(|c| field.reduce(c)).collect();
        Ok(Self { field, basis, coeffs })
    }

    /// Sum of `coeff * x^exps` terms, all of the same degree.
    pub fn from_terms(field: PrimeField, nvars: usize, degree: u32, terms: &[(Vec<u32>, i64)]) -> Result<Self> {
        let mut f = Self::zero(field, nvars, degree);
        for (e, c) in terms {
            let i = f
                .basis
                .index_of(e)
                .ok_or_else(|| Error::DimensionMismatch(format!("monomial {e:?} not of degree {degree}")))?;
            f.coeffs[i] = field.add(f.coeffs[i], field.from_i64(*c));
        }
        Ok(f)
    }

    pub fn monomial(field: PrimeField, exps: &[u32], coeff: u64) -> Self {
        let degree = exps.iter().sum();
        let mut f = Self::zero(field, exps.len(), degree);
        let i = f.basis.index_of(exps).unwrap();
        f.coeffs[i] = field.reduce(coeff);
        f
    }

    pub fn constant(field: PrimeField, nvars: usize, c: u64) -> Self {
        Self::monomial(field, &vec![0; nvars], c)
    }

    /// The coordinate `x_{i+1}`.
    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, &e, 1)
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(field: PrimeField, coeffs: &[u64]) -> Self {
        Self::from_coeffs(field, coeffs.len(), 1, coeffs.to_vec()).unwrap()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.basis.nvars()
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree()
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, exps: &[u32]) -> u64 {
        self.basis.index_of(exps).map_or(0, |i| self.coeffs[i])
    }

    pub fn set_coeff(&mut self, exps: &[u32], c: u64) {
        let i = self.basis.index_of(exps).expect("monomial of the right degree");
        self.coeffs[i] = self.field.reduce(c);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Nonzero `(exponents, coefficient)` pairs in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u64)> {
        self.basis.iter().zip(self.coeffs.iter().copied()).filter(|&(_, c)| c != 0)
    }

    fn same_shape(&self, other: &Self) {
        assert!(
            self.nvars() == other.nvars() && self.degree() == other.degree(),
            "forms of different shapes"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        let f = self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        Self { field: f, basis: self.basis.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_shape(other);
        let f = self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.sub(a, b)).collect();
        Self { field: f, basis: self.basis.clone(), coeffs }
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        let coeffs = self.coeffs.iter().map(|&a| f.mul(a, c)).collect();
        Self { field: f, basis: self.basis.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars(), other.nvars(), "forms in different rings");
        let f = self.field;
        let mut out = Self::zero(f, self.nvars(), self.degree() + other.degree());
        let mut e = vec![0u32; self.nvars()];
        for (ea, a) in self.terms() {
            for (eb, b) in other.terms() {
                for ((slot, &x), &y) in e.iter_mut().zip(ea).zip(eb) {
                    *slot = x + y;
                }
                let i = out.basis.index_of(&e).unwrap();
                out.coeffs[i] = f.add(out.coeffs[i], f.mul(a, b));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.field, self.nvars(), 1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `d/dx_{i+1}`; the derivative of a constant is the zero constant.
    pub fn partial(&self, i: usize) -> Self {
        let f = self.field;
        let d = self.degree();
        let mut out = Self::zero(f, self.nvars(), d.saturating_sub(1));
        if d == 0 {
            return out;
        }
        let mut e = vec![0u32; self.nvars()];
        for (ea, c) in self.terms() {
            if ea[i] == 0 {
                continue;
            }
            e.copy_from_slice(ea);
            e[i] -= 1;
            let j = out.basis.index_of(&e).unwrap();
            out.coeffs[j] = f.add(out.coeffs[j], f.mul(c, f.from_u64(ea[i] as u64)));
        }
        out
    }

    /// All first partials.
    pub fn gradient(&self) -> Vec<Form> {
        (0..self.nvars()).map(|i| self.partial(i)).collect()
    }

    /// The three partials of a ternary form.
    pub fn partials(&self) -> (Form, Form, Form) {
        assert_eq!(self.nvars(), 3, "partials() is for ternary forms");
        (self.partial(0), self.partial(1), self.partial(2))
    }

    pub fn eval(&self, pt: &[u64]) -> u64 {
        self.eval_in(&self.field, pt)
    }

    /// Evaluation at a point with coordinates in an extension field.
    pub fn eval_in<F: Field>(&self, field: &F, pt: &[F::Elem]) -> F::Elem {
        assert_eq!(pt.len(), self.nvars());
        let d = self.degree() as usize;
        let powers: Vec<Vec<F::Elem>> = pt
            .iter()
            .map(|&x| {
                let mut v = Vec::with_capacity(d + 1);
                let mut acc = field.one();
                for _ in 0..=d {
                    v.push(acc);
                    acc = field.mul(acc, x);
                }
                v
            })
            .collect();
        let mut total = field.zero();
        for (e, c) in self.terms() {
            let mut term = field.embed(c);
            for (k, &ek) in e.iter().enumerate() {
                term = field.mul(term, powers[k][ek as usize]);
            }
            total = field.add(total, term);
        }
        total
    }

    /// `t -> f(head_0, ..., head_{n-2}, t)`: the last variable kept free,
    /// the others fixed, over any field containing the coefficients.
    pub fn slice_last<F: Field>(&self, field: &F, head: &[F::Elem]) -> UPoly<F> {
        let n = self.nvars();
        assert_eq!(head.len() + 1, n);
        let d = self.degree() as usize;
        let powers: Vec<Vec<F::Elem>> = head
            .iter()
            .map(|&x| {
                let mut v = vec![field.one(); d + 1];
                for j in 1..=d {
                    v[j] = field.mul(v[j - 1], x);
                }
                v
            })
            .collect();
        let mut coeffs = vec![field.zero(); d + 1];
        for (e, c) in self.terms() {
            let mut term = field.embed(c);
            for k in 0..n - 1 {
                term = field.mul(term, powers[k][e[k] as usize]);
            }
            let slot = e[n - 1] as usize;
            coeffs[slot] = field.add(coeffs[slot], term);
        }
        UPoly::new(*field, coeffs)
    }

    /// Permutes variables: the new variable `i` is the old `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Form {
        let n = self.nvars();
        assert_eq!(perm.len(), n);
        let mut out = Form::zero(self.field, n, self.degree());
        let mut e = vec![0u32; n];
        for (ea, c) in self.terms() {
            for i in 0..n {
                e[i] = ea[perm[i]];
            }
            let j = out.basis.index_of(&e).unwrap();
            out.coeffs[j] = c;
        }
        out
    }

    /// `f(L_1, ..., L_n)` for forms `L_i` of a common degree in a common ring.
    pub fn compose(&self, images: &[Form]) -> Form {
        assert_eq!(images.len(), self.nvars());
        let f = self.field;
        let m = images[0].nvars();
        let k = images[0].degree();
        let d = self.degree();
        let powers: Vec<Vec<Form>> = images
            .iter()
            .map(|l| {
                let mut v = vec![Form::constant(f, m, 1)];
                for j in 1..=d as usize {
                    let next = v[j - 1].mul(l);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Form::zero(f, m, d * k);
        for (e, c) in self.terms() {
            let mut term = Form::constant(f, m, c);
            for (i, &ei) in e.iter().enumerate() {
                if ei > 0 {
                    term = term.mul(&powers[i][ei as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Linear substitution `x_i -> sum_j m[i][j] y_j`.
    pub fn substitute_linear(&self, m: &[Vec<u64>]) -> Form {
        let images: Vec<Form> = m.iter().map(|row| Form::linear(self.field, row)).collect();
        self.compose(&images)
    }

    /// Order of vanishing at a point: the least `k` with a nonzero `k`-th
    /// order partial there.
    pub fn vanishing_order(&self, pt: &[u64]) -> u32 {
        let n = self.nvars();
        let Some(anchor) = pt.iter().position(|&c| c != 0) else {
            panic!("zero vector is not a projective point");
        };
        // x_anchor -> pt_anchor * t, x_j -> pt_j * t + u_j
        let m: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut row = vec![0; n];
                row[anchor] = pt[i];
                if i != anchor {
                    row[i] = 1;
                }
                row
            })
            .collect();
        let g = self.substitute_linear(&m);
        let d = self.degree();
        g.terms()
            .map(|(e, _)| d - e[anchor])
            .min()
            .unwrap_or(u32::MAX)
    }

    /// Whether every monomial is divisible by `x_i^a x_j^b` for some
    /// `a + b = 2`, i.e. membership in `(x_i, x_j)^2`.
    pub fn in_square_of_coordinate_ideal(&self, i: usize, j: usize) -> bool {
        self.terms().all(|(e, _)| e[i] + e[j] >= 2)
    }

    pub fn to_record(&self) -> FormRecord {
        FormRecord {
            nvars: self.nvars(),
            degree: self.degree(),
            terms: self.terms().map(|(e, c)| (e.to_vec(), c)).collect(),
        }
    }

    pub fn from_record(field: PrimeField, r: &FormRecord) -> Result<Self> {
        let mut f = Self::zero(field, r.nvars, r.degree);
        for (e, c) in &r.terms {
            let i = f
                .basis
                .index_of(e)
                .ok_or_else(|| Error::Parse(format!("monomial {e:?} does not match degree {}", r.degree)))?;
            f.coeffs[i] = field.reduce(*c);
        }
        Ok(f)
    }

    /// Normalized so that the first nonzero coefficient is 1.
    pub fn normalized(&self) -> Form {
        match self.coeffs.iter().find(|&&c| c != 0) {
            None => self.clone(),
            Some(&c) => self.scale(self.field.inv(c)),
        }
    }

    /// Whether `self` and `other` agree up to a nonzero scalar.
    pub fn proportional(&self, other: &Form) -> bool {
        self.nvars() == other.nvars()
            && self.degree() == other.degree()
            && !self.is_zero()
            && !other.is_zero()
            && self.normalized() == other.normalized()
    }
}

/// Serialized form: `(exponent tuple, coefficient)` pairs in basis order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormRecord {
    pub nvars: usize,
    pub degree: u32,
    pub terms: Vec<(Vec<u32>, u64)>,
}
