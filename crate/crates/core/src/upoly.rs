//! Dense univariate polynomials over any [`Field`], coefficients stored low
//! degree first with no trailing zeros.

use rand::Rng;

use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> UPoly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|&c| field.is_zero(c)) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: F) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// `t - a`
    pub fn linear_root(field: F, a: F::Elem) -> Self {
        Self::new(field, vec![field.neg(a), field.one()])
    }

    pub fn field(&self) -> F {
        self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<F::Elem> {
        self.coeffs.last().copied()
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, x: F::Elem) -> F::Elem {
        let f = self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(f, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: F::Elem) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        let p = f.prime();
        Self::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.embed(p.from_u64(i as u64))))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(self.field.inv(l)),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let f = self.field;
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = f.inv(d.leading().unwrap());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dd], lead_inv);
            quot[i] = c;
            if f.is_zero(c) {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, dc));
            }
        }
        rem.truncate(dd);
        (Self::new(f, quot), Self::new(f, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of `root` as a zero of `self`.
    pub fn root_multiplicity(&self, root: F::Elem) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Self::linear_root(self.field, root);
        let mut cur = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = cur.div_rem(&lin);
            if !r.is_zero() {
                return m;
            }
            m += 1;
            cur = q;
        }
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u128, modulus: &Self) -> Self {
        let f = self.field;
        let mut base = self.rem(modulus);
        let mut acc = Self::constant(f, f.one()).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// Lagrange interpolation through `(xs[i], ys[i])`, distinct `xs`.
    pub fn interpolate(field: F, xs: &[F::Elem], ys: &[F::Elem]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let f = field;
        let n = xs.len();
        // Newton divided differences
        let mut coef: Vec<F::Elem> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = f.sub(coef[i], coef[i - 1]);
                let den = f.sub(xs[i], xs[i - j]);
                coef[i] = f.div(num, den);
            }
        }
        let mut out = Self::constant(f, coef[n - 1]);
        for i in (0..n - 1).rev() {
            out = out.mul(&Self::linear_root(f, xs[i])).add(&Self::constant(f, coef[i]));
        }
        out
    }

    /// Yun's squarefree decomposition: `(multiplicity, factor)` pairs with
    /// monic, pairwise coprime, squarefree factors. Valid when the
    /// characteristic exceeds the degree.
    pub fn squarefree_decomposition(&self) -> Vec<(usize, Self)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let a = self.monic();
        let da = a.derivative();
        let b = a.gcd(&da);
        let mut c = a.div_rem(&b).0;
        let mut d = da.div_rem(&b).0.sub(&c.derivative());
        let mut i = 1;
        while c.degree().unwrap_or(0) > 0 {
            let y = c.gcd(&d);
            if y.degree().unwrap_or(0) > 0 {
                out.push((i, y.clone()));
            }
            c = c.div_rem(&y).0;
            d = d.div_rem(&y).0.sub(&c.derivative());
            i += 1;
        }
        out
    }

    /// Distinct roots in the base field of `self` (Cantor-Zassenhaus on the
    /// product of linear factors), sorted by enumeration-independent value
    /// order is not guaranteed; deterministic for a fixed `rng` state.
    pub fn roots<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<F::Elem> {
        let f = self.field;
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let q = f.order();
        let g = self.monic();
        let t = Self::new(f, vec![f.zero(), f.one()]);
        let tq = t.pow_mod(q, &g);
        let split = g.gcd(&tq.sub(&t));
        let mut out = Vec::new();
        split_linear(&split, q, rng, &mut out);
        out
    }

    /// Roots by trying every field element; for small fields only.
    pub fn roots_exhaustive(&self) -> Vec<F::Elem> {
        let f = self.field;
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        (0..f.order()).map(|i| f.element(i)).filter(|&x| f.is_zero(self.eval(x))).collect()
    }
}

fn split_linear<F: Field, R: Rng + ?Sized>(g: &UPoly<F>, q: u128, rng: &mut R, out: &mut Vec<F::Elem>) {
    let f = g.field;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(f.neg(g.monic().coeff(0))),
        Some(_) => loop {
            let a = f.random(rng);
            let shift = UPoly::new(f, vec![a, f.one()]);
            let h = shift.pow_mod((q - 1) / 2, g).sub(&UPoly::constant(f, f.one()));
            let d = g.gcd(&h);
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && dd < g.degree().unwrap() {
                split_linear(&d, q, rng, out);
                split_linear(&g.div_rem(&d).0, q, rng, out);
                return;
            }
        },
    }
}
