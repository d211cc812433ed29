//! Divisor classes on the moduli of curves and of spin curves, as exact
//! rational vectors over the tautological and boundary generators.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    fn sign(self) -> char {
        match self {
            Parity::Plus => '+',
            Parity::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Mg(u32),
    Spin(u32, Parity),
}

impl Basis {
    pub fn genus(self) -> u32 {
        match self {
            Basis::Mg(g) | Basis::Spin(g, _) => g,
        }
    }

    /// Every legal symbol, `lambda` first.
    pub fn symbols(self) -> Vec<Symbol> {
        let h = self.genus() / 2;
        let mut out = vec![Symbol::Lambda];
        match self {
            Basis::Mg(_) => out.extend((0..=h).map(Symbol::Delta)),
            Basis::Spin(..) => {
                out.extend((0..=h).map(Symbol::Alpha));
                out.extend((0..=h).map(Symbol::Beta));
            }
        }
        out
    }

    pub fn is_legal(self, s: Symbol) -> bool {
        let h = self.genus() / 2;
        match (self, s) {
            (_, Symbol::Lambda) => true,
            (Basis::Mg(_), Symbol::Delta(i)) => i <= h,
            (Basis::Spin(..), Symbol::Alpha(i) | Symbol::Beta(i)) => i <= h,
            _ => false,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Mg(g) => write!(f, "Mbar_{g}"),
            Basis::Spin(g, p) => write!(f, "Sbar{}_{g}", p.sign()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symbol {
    Lambda,
    Delta(u32),
    Alpha(u32),
    Beta(u32),
}

impl Symbol {
    pub fn is_boundary(self) -> bool {
        self != Symbol::Lambda
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Lambda => write!(f, "lambda"),
            Symbol::Delta(i) => write!(f, "delta_{i}"),
            Symbol::Alpha(i) => write!(f, "alpha_{i}"),
            Symbol::Beta(i) => write!(f, "beta_{i}"),
        }
    }
}

/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliDivisorClass {
    basis: Basis,
    coeffs: BTreeMap<Symbol, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ModuliDivisorClass {
    pub fn zero(basis: Basis) -> Result<Self> {
        if basis.genus() < 2 {
            return Err(Error::IllegalSymbol(format!("genus {} below 2", basis.genus())));
        }
        Ok(Self { basis, coeffs: BTreeMap::new() })
    }

    pub fn from_terms(basis: Basis, terms: &[(Symbol, BigRational)]) -> Result<Self> {
        let mut c = Self::zero(basis)?;
        for (s, v) in terms {
            c.add_term(*s, v.clone())?;
        }
        Ok(c)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeff(&self, s: Symbol) -> BigRational {
        self.coeffs.get(&s).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Symbol, &BigRational)> {
        self.coeffs.iter().map(|(s, v)| (*s, v))
    }

    pub fn add_term(&mut self, s: Symbol, v: BigRational) -> Result<()> {
        if !self.basis.is_legal(s) {
            return Err(Error::IllegalSymbol(format!("{s} on {}", self.basis)));
        }
        let e = self.coeffs.entry(s).or_insert_with(BigRational::zero);
        *e += v;
        if e.is_zero() {
            self.coeffs.remove(&s);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.basis, other.basis)));
        }
        let mut out = self.clone();
        for (s, v) in other.terms() {
            out.add_term(s, v.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let coeffs = if k.is_zero() {
            BTreeMap::new()
        } else {
            self.coeffs.iter().map(|(s, v)| (*s, v * k)).collect()
        };
        Self { basis: self.basis, coeffs }
    }
}

impl fmt::Display for ModuliDivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (n, (s, v)) in self.coeffs.iter().enumerate() {
            match (n, v.is_negative()) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            let mag = v.abs();
            if mag.is_one() {
                write!(f, "{s}")?;
            } else {
                write!(f, "{mag}*{s}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ClassRecord {
    basis: Basis,
    /// `(symbol, "p/q")` pairs in symbol order.
    terms: Vec<(Symbol, String)>,
}

impl Serialize for ModuliDivisorClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ClassRecord { basis: self.basis, terms: self.coeffs.iter().map(|(k, v)| (*k, v.to_string())).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModuliDivisorClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ClassRecord::deserialize(d)?;
        let mut terms = Vec::with_capacity(r.terms.len());
        for (s, v) in r.terms {
            terms.push((s, v.parse::<BigRational>().map_err(D::Error::custom)?));
        }
        ModuliDivisorClass::from_terms(r.basis, &terms).map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slope {
    Finite(BigRational),
    Infinity,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(q) => write!(f, "{q}"),
            Slope::Infinity => write!(f, "infinity"),
        }
    }
}

/// `a / min b_i` for `c = a lambda - sum b_i D_i`, minimum over every
/// boundary generator of the basis (absent generators have `b_i = 0`).
pub fn slope(c: &ModuliDivisorClass) -> Result<Slope> {
    let mut min: Option<BigRational> = None;
    for s in c.basis.symbols().into_iter().filter(|s| s.is_boundary()) {
        let b = -c.coeff(s);
        if b.is_negative() {
            return Err(Error::NegativeBoundaryCoefficient(s.to_string()));
        }
        if min.as_ref().is_none_or(|m| b < *m) {
            min = Some(b);
        }
    }
    match min {
        Some(b) if !b.is_zero() => Ok(Slope::Finite(c.coeff(Symbol::Lambda) / b)),
        _ => Ok(Slope::Infinity),
    }
}

/// `6 + 12/(g + 1)`.
pub fn slope_bound(g: u32) -> BigRational {
    int(6) + rat(12, g as i64 + 1)
}

/// `13 lambda - 2 delta - delta_1`, with `delta = sum delta_i`.
pub fn canonical_class_mg(g: u32) -> Result<ModuliDivisorClass> {
    let mut c = ModuliDivisorClass::zero(Basis::Mg(g))?;
    c.add_term(Symbol::Lambda, int(13))?;
    for i in 0..=g / 2 {
        c.add_term(Symbol::Delta(i), int(-2))?;
    }
    c.add_term(Symbol::Delta(1), int(-1))?;
    Ok(c)
}

/// `13 lambda - 2 alpha_0 - 3 beta_0 - 2 sum_{i>=1}(alpha_i + beta_i) - (alpha_1 + beta_1)`.
pub fn canonical_class_spin(g: u32, parity: Parity) -> Result<ModuliDivisorClass> {
    let mut c = ModuliDivisorClass::zero(Basis::Spin(g, parity))?;
    c.add_term(Symbol::Lambda, int(13))?;
    c.add_term(Symbol::Alpha(0), int(-2))?;
    c.add_term(Symbol::Beta(0), int(-3))?;
    for i in 1..=g / 2 {
        c.add_term(Symbol::Alpha(i), int(-2))?;
        c.add_term(Symbol::Beta(i), int(-2))?;
    }
    c.add_term(Symbol::Alpha(1), int(-1))?;
    c.add_term(Symbol::Beta(1), int(-1))?;
    Ok(c)
}

/// `1/4 lambda - 1/16 alpha_0 - 1/2 sum_{i=1}^{g/2} beta_i` on the even side.
pub fn theta_null_class(g: u32) -> Result<ModuliDivisorClass> {
    let mut c = ModuliDivisorClass::zero(Basis::Spin(g, Parity::Plus))?;
    c.add_term(Symbol::Lambda, rat(1, 4))?;
    c.add_term(Symbol::Alpha(0), rat(-1, 16))?;
    for i in 1..=g / 2 {
        c.add_term(Symbol::Beta(i), rat(-1, 2))?;
    }
    Ok(c)
}

/// `(g+8) lambda - (g+2)/4 alpha_0 - 2 beta_0 - sum 2(g-i) alpha_i - sum 2i beta_i`
/// on the odd side, `1 <= i <= g/2`.
pub fn sigma_class(g: u32) -> Result<ModuliDivisorClass> {
    let mut c = ModuliDivisorClass::zero(Basis::Spin(g, Parity::Minus))?;
    let g64 = g as i64;
    c.add_term(Symbol::Lambda, int(g64 + 8))?;
    c.add_term(Symbol::Alpha(0), rat(-(g64 + 2), 4))?;
    c.add_term(Symbol::Beta(0), int(-2))?;
    for i in 1..=g / 2 {
        c.add_term(Symbol::Alpha(i), int(-2 * (g64 - i as i64)))?;
        c.add_term(Symbol::Beta(i), int(-2 * i as i64))?;
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilNumbers {
    pub lambda_r: BigRational,
    pub delta_r: BigRational,
    pub ratio: BigRational,
}

/// `lambda.R = chi + g - 1`, `delta.R = c2 + 4(g - 1)`.
pub fn pencil_numbers(chi: i64, c2: i64, g: u32) -> Result<PencilNumbers> {
    let g = g as i64;
    let lambda_r = int(chi + g - 1);
    let delta_r = int(c2 + 4 * (g - 1));
    if lambda_r.is_zero() {
        return Err(Error::DimensionMismatch("lambda.R vanishes".into()));
    }
    let ratio = &delta_r / &lambda_r;
    Ok(PencilNumbers { lambda_r, delta_r, ratio })
}

/// Blow-ups needed to resolve a pencil in `|C|` on a K3 surface: `C^2 = 2g - 2`.
pub fn k3_pencil_blowups(g: u32) -> i64 {
    2 * g as i64 - 2
}

/// `c2` of the K3 surface blown up at the base points of the pencil.
pub fn k3_pencil_c2(g: u32) -> i64 {
    24 + k3_pencil_blowups(g)
}

pub fn k3_pencil_numbers(g: u32) -> Result<PencilNumbers> {
    pencil_numbers(2, k3_pencil_c2(g), g)
}

/// How boundary generators pull back under the forgetful map to the
/// moduli of curves, restricted to one parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PullbackRule {
    /// `delta_0 -> alpha_0 + 2 beta_0`, `delta_i -> alpha_i + beta_i`.
    Standard,
    /// `delta_0 -> alpha_0 + 2 beta_0`, `delta_i -> 2(alpha_i + beta_i)`.
    Literal,
}

pub fn pullback(c: &ModuliDivisorClass, parity: Parity, rule: PullbackRule) -> Result<ModuliDivisorClass> {
    let Basis::Mg(g) = c.basis else {
        return Err(Error::IllegalSymbol(format!("pullback from {}", c.basis)));
    };
    let mut out = ModuliDivisorClass::zero(Basis::Spin(g, parity))?;
    let k = match rule {
        PullbackRule::Standard => int(1),
        PullbackRule::Literal => int(2),
    };
    for (s, v) in c.terms() {
        match s {
            Symbol::Lambda => out.add_term(Symbol::Lambda, v.clone())?,
            Symbol::Delta(0) => {
                out.add_term(Symbol::Alpha(0), v.clone())?;
                out.add_term(Symbol::Beta(0), v * int(2))?;
            }
            Symbol::Delta(i) => {
                out.add_term(Symbol::Alpha(i), v * &k)?;
                out.add_term(Symbol::Beta(i), v * &k)?;
            }
            _ => unreachable!("legal symbols on Mbar_g"),
        }
    }
    Ok(out)
}

/// Canonical class of the spin moduli from Riemann-Hurwitz: the pullback
/// of the canonical class plus the ramification divisor `beta_0`.
pub fn canonical_class_spin_via_pullback(g: u32, parity: Parity, rule: PullbackRule) -> Result<ModuliDivisorClass> {
    let mut k = pullback(&canonical_class_mg(g)?, parity, rule)?;
    k.add_term(Symbol::Beta(0), int(1))?;
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_slopes() {
        for g in 4..30 {
            let k = canonical_class_mg(g).unwrap();
            assert_eq!(slope(&k).unwrap(), Slope::Finite(rat(13, 2)));
            assert_eq!(k.coeff(Symbol::Delta(1)), int(-3));
        }
    }

    #[test]
    fn infinite_and_negative() {
        let c = ModuliDivisorClass::from_terms(Basis::Mg(5), &[(Symbol::Lambda, int(7))]).unwrap();
        assert_eq!(slope(&c).unwrap(), Slope::Infinity);
        let c = ModuliDivisorClass::from_terms(Basis::Mg(5), &[(Symbol::Delta(2), int(1))]).unwrap();
        assert!(matches!(slope(&c), Err(Error::NegativeBoundaryCoefficient(_))));
        assert!(ModuliDivisorClass::from_terms(Basis::Mg(5), &[(Symbol::Delta(3), int(1))]).is_err());
        assert!(ModuliDivisorClass::from_terms(Basis::Mg(5), &[(Symbol::Alpha(0), int(1))]).is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(slope_bound(23), rat(13, 2));
        assert_eq!(slope_bound(10), rat(78, 11));
        for g in 2..40 {
            assert!(slope_bound(g + 1) < slope_bound(g));
            assert_eq!(k3_pencil_numbers(g).unwrap().ratio, slope_bound(g));
        }
        assert_eq!(k3_pencil_numbers(11).unwrap().ratio, int(7));
    }

    #[test]
    fn spin_classes() {
        let k = canonical_class_spin(8, Parity::Plus).unwrap();
        assert_eq!(k.coeff(Symbol::Lambda), int(13));
        assert_eq!(k.coeff(Symbol::Alpha(0)), int(-2));
        assert_eq!(k.coeff(Symbol::Beta(0)), int(-3));
        assert_eq!(k.coeff(Symbol::Alpha(1)), int(-3));
        let t = theta_null_class(8).unwrap();
        assert_eq!(t.coeff(Symbol::Lambda), rat(1, 4));
        assert_eq!(t.coeff(Symbol::Alpha(0)), rat(-1, 16));
        for i in 1..=4 {
            assert_eq!(t.coeff(Symbol::Beta(i)), rat(-1, 2));
        }
        let s11 = sigma_class(11).unwrap();
        assert_eq!(s11.coeff(Symbol::Lambda), int(19));
        assert_eq!(s11.coeff(Symbol::Alpha(0)), rat(-13, 4));
        let s12 = sigma_class(12).unwrap();
        assert_eq!(s12.coeff(Symbol::Lambda) - s11.coeff(Symbol::Lambda), int(1));
    }

    #[test]
    fn riemann_hurwitz() {
        for g in 4..20 {
            for p in [Parity::Plus, Parity::Minus] {
                let want = canonical_class_spin(g, p).unwrap();
                assert_eq!(canonical_class_spin_via_pullback(g, p, PullbackRule::Standard).unwrap(), want);
                assert_ne!(canonical_class_spin_via_pullback(g, p, PullbackRule::Literal).unwrap(), want);
            }
        }
    }

    #[test]
    fn serde_roundtrip() {
        let s = sigma_class(9).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<ModuliDivisorClass>(&j).unwrap(), s);
        assert_eq!(canonical_class_mg(4).unwrap().to_string(), "13*lambda - 2*delta_0 - 3*delta_1 - 2*delta_2");
    }

    proptest! {
        #[test]
        fn slope_is_scale_invariant(g in 4u32..25, n in 1i64..1000, d in 1i64..1000) {
            let k = rat(n, d);
            for c in [canonical_class_mg(g).unwrap(), sigma_class(g).unwrap(), theta_null_class(g).unwrap()] {
                prop_assert_eq!(slope(&c.scale(&k)).unwrap(), slope(&c).unwrap());
            }
        }
    }
}
