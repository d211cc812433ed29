//! Fat-point linear systems on `P^2`.
//!
//! A point of multiplicity `nu` is imposed through all partial derivatives
//! of order `nu - 1`, evaluated at a projective representative. When
//! `p > d`, Euler's identity makes the lower-order conditions follow, so the
//! point contributes `C(nu + 1, 2)` rows and no affine chart is needed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::form::Form;
use crate::matrix::FpMatrix;
use crate::monomial::{binomial, MonomialBasis};
use crate::par::{self, Execution};
use crate::seed;
use crate::square::perfect_square_root;

/// Resampling limit for general position.
pub const RESAMPLE_LIMIT: usize = 16;

/// Scales a nonzero vector so that its first nonzero coordinate is 1.
pub fn normalize_point(field: PrimeField, pt: [u64; 3]) -> Result<[u64; 3]> {
    let pt = pt.map(|c| field.reduce(c));
    let lead = pt
        .iter()
        .copied()
        .find(|&c| c != 0)
        .ok_or_else(|| Error::DimensionMismatch("zero vector is not a point of P^2".into()))?;
    let inv = field.inv(lead);
    Ok(pt.map(|c| field.mul(c, inv)))
}

pub fn random_point<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> [u64; 3] {
    loop {
        let v = [field.random(rng), field.random(rng), field.random(rng)];
        if let Ok(p) = normalize_point(field, v) {
            return p;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FatPointScheme {
    points: Vec<[u64; 3]>,
    multiplicities: Vec<u32>,
}

impl FatPointScheme {
    pub fn new(field: PrimeField, points: &[[u64; 3]], multiplicities: &[u32]) -> Result<Self> {
        if points.len() != multiplicities.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} points, {} multiplicities",
                points.len(),
                multiplicities.len()
            )));
        }
        if multiplicities.contains(&0) {
            return Err(Error::DimensionMismatch("multiplicities must be positive".into()));
        }
        let pts: Vec<[u64; 3]> = points.iter().map(|&p| normalize_point(field, p)).collect::<Result<_>>()?;
        for (i, p) in pts.iter().enumerate() {
            if pts[..i].contains(p) {
                return Err(Error::IndexError(format!("repeated point {p:?}")));
            }
        }
        Ok(Self { points: pts, multiplicities: multiplicities.to_vec() })
    }

    /// All points with the same multiplicity.
    pub fn uniform(field: PrimeField, points: &[[u64; 3]], nu: u32) -> Result<Self> {
        Self::new(field, points, &vec![nu; points.len()])
    }

    /// `count` uniform random distinct points, each of multiplicity `nu`.
    pub fn random<R: Rng + ?Sized>(field: PrimeField, count: usize, nu: u32, rng: &mut R) -> Self {
        let mut pts: Vec<[u64; 3]> = Vec::with_capacity(count);
        while pts.len() < count {
            let p = random_point(field, rng);
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        Self { points: pts, multiplicities: vec![nu; count] }
    }

    pub fn points(&self) -> &[[u64; 3]] {
        &self.points
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The first `k` points.
    pub fn prefix(&self, k: usize) -> Self {
        Self { points: self.points[..k].to_vec(), multiplicities: self.multiplicities[..k].to_vec() }
    }

    pub fn condition_count(&self) -> usize {
        self.multiplicities.iter().map(|&nu| binomial(nu as u64 + 1, 2) as usize).sum()
    }
}

fn falling(e: u32, k: u32) -> u64 {
    (0..k).map(|i| (e - i) as u64).product()
}

/// Exponent vectors of total degree `k` in three variables.
fn derivative_orders(k: u32) -> Vec<[u32; 3]> {
    MonomialBasis::get(3, k).iter().map(|e| [e[0], e[1], e[2]]).collect()
}

/// Rows: for each point, the order-`(nu - 1)` partials of every monomial.
/// Columns follow the monomial basis of degree `d`.
pub fn conditions_matrix(field: PrimeField, z: &FatPointScheme, d: u32) -> Result<FpMatrix> {
    if field.modulus() <= d as u64 {
        return Err(Error::UnsupportedModulus { p: field.modulus(), reason: "prime must exceed the degree" });
    }
    let basis = MonomialBasis::get(3, d);
    let mut rows = Vec::with_capacity(z.condition_count());
    for (pt, &nu) in z.points.iter().zip(&z.multiplicities) {
        let k = nu - 1;
        let pows: Vec<Vec<u64>> = pt
            .iter()
            .map(|&c| {
                let mut v = vec![1u64; d as usize + 1];
                for j in 1..v.len() {
                    v[j] = field.mul(v[j - 1], c);
                }
                v
            })
            .collect();
        for alpha in derivative_orders(k) {
            let row: Vec<u64> = basis
                .iter()
                .map(|e| {
                    if (0..3).any(|i| e[i] < alpha[i]) {
                        return 0;
                    }
                    (0..3).fold(1, |acc, i| {
                        let c = field.mul(field.from_u64(falling(e[i], alpha[i])), pows[i][(e[i] - alpha[i]) as usize]);
                        field.mul(acc, c)
                    })
                })
                .collect();
            rows.push(row);
        }
    }
    Ok(FpMatrix::from_row_list(field, basis.len(), rows))
}

/// Projective dimension of `|I_Z(d)|`, `-1` if empty.
pub fn system_dim(field: PrimeField, z: &FatPointScheme, d: u32) -> Result<i64> {
    let m = conditions_matrix(field, z, d)?;
    Ok(m.cols() as i64 - 1 - m.rank() as i64)
}

/// `max(-1, C(d + 2, 2) - 1 - sum C(nu_i + 1, 2))`.
pub fn expected_dim(d: u32, multiplicities: &[u32]) -> i64 {
    let conditions: i64 = multiplicities.iter().map(|&nu| binomial(nu as u64 + 1, 2) as i64).sum();
    (binomial(d as u64 + 2, 2) as i64 - 1 - conditions).max(-1)
}

/// Whether the conditions matrix has maximal rank.
pub fn is_regular(field: PrimeField, z: &FatPointScheme, d: u32) -> Result<bool> {
    let m = conditions_matrix(field, z, d)?;
    Ok(m.rank() == m.rows().min(m.cols()))
}

/// Random points in general position for degree `d`: resampled until the
/// conditions matrix has maximal rank.
pub fn general_scheme<R: Rng + ?Sized>(
    field: PrimeField,
    count: usize,
    nu: u32,
    d: u32,
    rng: &mut R,
) -> Result<FatPointScheme> {
    for _ in 0..RESAMPLE_LIMIT {
        let z = FatPointScheme::random(field, count, nu, rng);
        if is_regular(field, &z, d)? {
            return Ok(z);
        }
    }
    Err(Error::GeneralPositionExhausted(RESAMPLE_LIMIT))
}

/// A basis of `H^0(I_Z(d))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub degree: u32,
    pub basis: Vec<Form>,
    pub scheme: FatPointScheme,
}

impl LinearSystem {
    pub fn new(field: PrimeField, z: &FatPointScheme, d: u32) -> Result<Self> {
        let m = conditions_matrix(field, z, d)?;
        let basis = m
            .kernel_basis()
            .into_iter()
            .map(|v| Form::from_coeffs(field, 3, d, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { degree: d, basis, scheme: z.clone() })
    }

    /// Projective dimension.
    pub fn dim(&self) -> i64 {
        self.basis.len() as i64 - 1
    }

    /// A uniformly random nonzero member.
    pub fn random_member<R: Rng + ?Sized>(&self, field: PrimeField, rng: &mut R) -> Result<Form> {
        if self.basis.is_empty() {
            return Err(Error::EmptyKernel);
        }
        loop {
            let mut f = Form::zero(field, 3, self.degree);
            for b in &self.basis {
                f = f.add(&b.scale(field.random(rng)));
            }
            if !f.is_zero() {
                return Ok(f);
            }
        }
    }

    /// Every basis element vanishes to the assigned order at every point,
    /// checked by repeated differentiation and evaluation.
    pub fn verify_membership(&self) -> bool {
        self.basis.iter().all(|f| vanishes_to_order(f, &self.scheme))
    }
}

/// All partials of order `< nu_i` vanish at point `i`.
pub fn vanishes_to_order(f: &Form, z: &FatPointScheme) -> bool {
    z.points.iter().zip(&z.multiplicities).all(|(pt, &nu)| {
        let mut layer = vec![f.clone()];
        for _ in 0..nu {
            if layer.iter().any(|g| g.eval(pt) != 0) {
                return false;
            }
            layer = layer.iter().flat_map(|g| g.gradient()).collect();
        }
        true
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusCell {
    pub d: u32,
    pub delta: usize,
    pub expected: i64,
    /// Dimension at the maximal rank seen over the trials.
    pub observed: i64,
    pub special: bool,
    /// Dimensions of the individual trials, in trial order.
    pub trial_dims: Vec<i64>,
    /// Some trial fell below the maximal rank.
    pub disagreement: bool,
    /// A random member of the system is a perfect square.
    pub nodality_failure: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub prime: u64,
    pub multiplicity: u32,
    pub trials: usize,
    pub seed: u64,
    pub cells: Vec<CensusCell>,
}

impl Census {
    pub fn cell(&self, d: u32, delta: usize) -> Option<&CensusCell> {
        self.cells.iter().find(|c| c.d == d && c.delta == delta)
    }

    pub fn special_cells(&self) -> Vec<(u32, usize)> {
        self.cells.iter().filter(|c| c.special).map(|c| (c.d, c.delta)).collect()
    }
}

/// Seeded census over `1 <= d <= d_max`, `0 <= delta <= delta_max`.
///
/// Each `(d, delta, trial)` draws its own points from a derived seed; cells
/// are returned sorted by `(d, delta)`.
pub fn postulation_census(
    field: PrimeField,
    d_max: u32,
    delta_max: usize,
    multiplicity: u32,
    trials: usize,
    master_seed: u64,
    exec: Execution,
) -> Result<Census> {
    let jobs: Vec<(u32, usize)> =
        (1..=d_max).flat_map(|d| (0..=delta_max).map(move |delta| (d, delta))).collect();
    let cells = par::map(exec, jobs, |(d, delta)| {
        census_cell(field, d, delta, multiplicity, trials.max(1), master_seed)
    });
    let cells = cells.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Census { prime: field.modulus(), multiplicity, trials, seed: master_seed, cells })
}

fn census_cell(
    field: PrimeField,
    d: u32,
    delta: usize,
    nu: u32,
    trials: usize,
    master_seed: u64,
) -> Result<CensusCell> {
    let cols = binomial(d as u64 + 2, 2) as i64;
    let mut best: Option<(usize, FatPointScheme)> = None;
    let mut ranks = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut rng = seed::rng(seed::derive(master_seed, "postulation", &[d as u64, delta as u64, nu as u64, t as u64]));
        let z = FatPointScheme::random(field, delta, nu, &mut rng);
        let r = conditions_matrix(field, &z, d)?.rank();
        ranks.push(r);
        if best.as_ref().is_none_or(|(br, _)| r > *br) {
            best = Some((r, z));
        }
    }
    let (max_rank, z) = best.expect("at least one trial");
    let observed = cols - 1 - max_rank as i64;
    let expected = expected_dim(d, &vec![nu; delta]);
    let nodality_failure = if observed >= 0 && d.is_multiple_of(2) {
        let sys = LinearSystem::new(field, &z, d)?;
        let mut rng = seed::rng(seed::derive(master_seed, "postulation-member", &[d as u64, delta as u64, nu as u64]));
        let member = sys.random_member(field, &mut rng)?;
        perfect_square_root(&member).is_some()
    } else {
        false
    };
    Ok(CensusCell {
        d,
        delta,
        expected,
        observed,
        special: observed != expected,
        trial_dims: ranks.iter().map(|&r| cols - 1 - r as i64).collect(),
        disagreement: ranks.iter().any(|&r| r != max_rank),
        nodality_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_point_line() {
        let f = PrimeField::default();
        let z = FatPointScheme::uniform(f, &[[3, 5, 7]], 1).unwrap();
        let m = conditions_matrix(f, &z, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 3));
        let n = normalize_point(f, [3, 5, 7]).unwrap();
        assert_eq!(m.row(0), &n);
        assert_eq!(system_dim(f, &z, 1).unwrap(), 1);
        assert_eq!(expected_dim(1, &[1]), 1);
    }

    #[test]
    fn double_points_in_degree_six() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let z = FatPointScheme::random(f, 4, 2, &mut rng);
        let m = conditions_matrix(f, &z, 6).unwrap();
        assert_eq!((m.rows(), m.cols(), m.rank()), (12, 28, 12));
        assert_eq!(m.kernel_basis().len(), 16);
        let sys = LinearSystem::new(f, &z, 6).unwrap();
        assert_eq!(sys.dim(), 15);
        assert!(sys.verify_membership());
        let z9 = FatPointScheme::random(f, 9, 2, &mut rng);
        assert_eq!(conditions_matrix(f, &z9, 6).unwrap().rank(), 27);
        assert_eq!(expected_dim(6, &[2; 9]), 0);
    }

    #[test]
    fn classical_special_systems() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let z = FatPointScheme::random(f, 2, 2, &mut rng);
        assert!(!is_regular(f, &z, 2).unwrap());
        assert_eq!(system_dim(f, &z, 2).unwrap(), 0);
        let z = FatPointScheme::random(f, 5, 2, &mut rng);
        assert!(!is_regular(f, &z, 4).unwrap());
        let z = FatPointScheme::random(f, 4, 2, &mut rng);
        assert!(is_regular(f, &z, 6).unwrap());
    }

    #[test]
    fn repeated_points_rejected() {
        let f = PrimeField::default();
        assert!(matches!(FatPointScheme::uniform(f, &[[1, 2, 3], [2, 4, 6]], 2), Err(Error::IndexError(_))));
    }

    #[test]
    fn monotone_in_delta() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for d in [3u32, 5, 7] {
            let z = FatPointScheme::random(f, 12, 2, &mut rng);
            let dims: Vec<i64> = (0..=12).map(|k| system_dim(f, &z.prefix(k), d).unwrap()).collect();
            assert!(dims.windows(2).all(|w| w[1] <= w[0]), "{dims:?}");
        }
    }
}
