//! Sampling and certification of nodal plane curves.
//!
//! A curve of degree `d` with `delta` assigned double points is drawn from
//! `|I_Z^2(d)|` for random `Z` and then certified:
//!
//! * each point of `Z` is an ordinary double point (local Hessian test);
//! * the curve is absolutely irreducible (see [`crate::irreducible`]);
//! * there are no further singular points. At the working prime this is
//!   read off `B = gcd(Res_{x3}(f, f_1), Res_{x3}(f, f_2))`, which must be
//!   `prod L_k^c` over the node projections `L_k` for the per-node exponent
//!   `c` measured on exhaustively scanned instances at small primes.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::plane_genus;
use crate::error::{Error, Result};
use crate::field::{Fp2, PrimeField};
use crate::form::{Form, FormRecord};
use crate::interpolation::{expected_dim, general_scheme, FatPointScheme, LinearSystem, RESAMPLE_LIMIT};
use crate::irreducible::{absolutely_irreducible_report, Irreducibility, IrreducibilityReport};
use crate::matrix::FpMatrix;
use crate::monomial::binomial;
use crate::par::{self, Execution};
use crate::resultant::{binary_gcd, dehomogenize, resultant_x3, x2_multiplicity};
use crate::scan::singular_points;
use crate::seed;

/// Prime of the exhaustively scanned calibration instances.
pub const CALIBRATION_PRIME: u64 = 251;
/// Prime whose quadratic extension is scanned as well.
pub const EXTENSION_PRIME: u64 = 61;
pub const CALIBRATION_INSTANCES: usize = 2;
const CALIBRATION_SEED: u64 = 0x00ca_11b4_a7e0;

/// Degree of the map `f` of the genus-6 construction.
pub const GENUS6_COVER_DEGREE: u64 = 5;
/// Degree of the map `m_6` of the genus-6 construction.
pub const GENUS6_M6_DEGREE: u64 = 120;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeveriRange {
    pub g: u32,
    pub d_min: u32,
    pub delta: usize,
    pub expected_dim: i64,
    pub feasible: bool,
}

/// Least `d` with `3d >= 2g + 6`, and the node count giving genus `g`.
pub fn severi_range(g: u32) -> SeveriRange {
    let d_min = (2 * g + 6).div_ceil(3);
    let delta = (binomial(d_min as u64 - 1, 2) as i64 - g as i64).max(0) as usize;
    let expected = binomial(d_min as u64 + 2, 2) as i64 - 1 - 3 * delta as i64;
    SeveriRange { g, d_min, delta, expected_dim: expected, feasible: expected >= 0 }
}

fn hessian_minor(f: &Form, pt: &[u64; 3]) -> Option<u64> {
    let field = f.field();
    let grad = f.gradient();
    if f.eval(pt) != 0 || grad.iter().any(|g| g.eval(pt) != 0) {
        return None;
    }
    let i = pt.iter().position(|&c| c != 0)?;
    let inv = field.inv(pt[i]);
    let norm: Vec<u64> = pt.iter().map(|&c| field.mul(c, inv)).collect();
    let (a, b) = match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let h = |j: usize, k: usize| grad[j].partial(k).eval(&norm);
    Some(field.sub(field.mul(h(a, a), h(b, b)), field.mul(h(a, b), h(a, b))))
}

/// Whether `pt` is an ordinary double point of `f`: `f` and its gradient
/// vanish there and the Hessian of the affine chart `x_i = 1`, `pt_i != 0`,
/// is nondegenerate.
pub fn certify_node(f: &Form, pt: &[u64; 3]) -> bool {
    hessian_minor(f, pt).is_some_and(|h| h != 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeEvidence {
    pub point: [u64; 3],
    pub hessian_minor: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub d: u32,
    pub delta: usize,
    pub prime: u64,
    pub instances: usize,
    /// Exponent of each node projection in the resultant gcd.
    pub per_node: u32,
    pub extension_prime: u64,
    /// Nodes were the only singular points over `F_{p^2}`.
    pub extension_scan_clean: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultantEvidence {
    /// Rows are the images of `x1, x2, x3`.
    pub coordinate_change: Vec<Vec<u64>>,
    pub change_attempt: usize,
    pub gcd_degree: u32,
    pub per_node: u32,
    pub node_multiplicities: Vec<u32>,
    pub gcd: FormRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingRecord {
    pub master_seed: u64,
    pub attempt: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodalCurveCertificate {
    pub prime: u64,
    pub degree: u32,
    pub delta: usize,
    pub genus: i64,
    pub form: FormRecord,
    pub nodes: FatPointScheme,
    pub node_evidence: Vec<NodeEvidence>,
    pub irreducibility: IrreducibilityReport,
    pub extra_singularities: ResultantEvidence,
    pub calibration: Calibration,
    /// Seed of the coordinate changes used in certification.
    pub seed: u64,
    pub sampling: Option<SamplingRecord>,
    /// The checks hold modulo `prime`; each fails for a characteristic-zero
    /// curve with probability at most `degree_bound / prime`.
    pub degree_bound: u64,
}

static CALIBRATIONS: OnceLock<Mutex<HashMap<(u32, usize), Calibration>>> = OnceLock::new();

/// Calibration for `(d, delta)`, computed once per process.
pub fn calibration(d: u32, delta: usize) -> Result<Calibration> {
    let cache = CALIBRATIONS.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&(d, delta)) {
        return Ok(c.clone());
    }
    let c = calibrate(d, delta)?;
    cache.lock().unwrap().insert((d, delta), c.clone());
    Ok(c)
}

fn calibrate(d: u32, delta: usize) -> Result<Calibration> {
    let small = PrimeField::small(CALIBRATION_PRIME)?;
    let mut seen: Vec<u32> = Vec::new();
    for instance in 0..CALIBRATION_INSTANCES {
        let mut measured = None;
        for attempt in 0..RESAMPLE_LIMIT {
            let mut rng = seed::rng(seed::derive(
                CALIBRATION_SEED,
                "calibration",
                &[d as u64, delta as u64, instance as u64, attempt as u64],
            ));
            let Some((f, z)) = clean_instance(small, d, delta, &mut rng, |f| singular_points(f, small))? else {
                continue;
            };
            if let Some(c) = measure_per_node(&f, &z, &mut rng)? {
                measured = Some(c);
                break;
            }
        }
        match measured {
            Some(c) => seen.push(c),
            None => {
                return Err(Error::CalibrationMismatch(format!(
                    "no clean instance for (d, delta) = ({d}, {delta}) at p = {CALIBRATION_PRIME}"
                )))
            }
        }
    }
    if seen.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::CalibrationMismatch(format!("per-node exponents {seen:?} disagree")));
    }
    let base = PrimeField::small(EXTENSION_PRIME)?;
    let ext = Fp2::new(base);
    let mut clean = false;
    if base.modulus() > d as u64 {
        for attempt in 0..RESAMPLE_LIMIT {
            let mut rng =
                seed::rng(seed::derive(CALIBRATION_SEED, "calibration-ext", &[d as u64, delta as u64, attempt as u64]));
            // points off the base field can never match a node
            let scan = |f: &Form| -> Vec<[u64; 3]> {
                singular_points(f, ext)
                    .into_iter()
                    .map(|p| if p.iter().all(|c| c[1] == 0) { p.map(|c| c[0]) } else { [u64::MAX; 3] })
                    .collect()
            };
            if clean_instance(base, d, delta, &mut rng, scan)?.is_some() {
                clean = true;
                break;
            }
        }
    }
    if !clean {
        return Err(Error::CalibrationMismatch(format!(
            "no clean instance for (d, delta) = ({d}, {delta}) over F_{{{EXTENSION_PRIME}^2}}"
        )));
    }
    Ok(Calibration {
        d,
        delta,
        prime: CALIBRATION_PRIME,
        instances: CALIBRATION_INSTANCES,
        per_node: seen[0],
        extension_prime: EXTENSION_PRIME,
        extension_scan_clean: clean,
    })
}

/// A random member of `|I_Z^2(d)|` at a small prime whose singular points,
/// as found by `scan`, are exactly the nodes of `Z`.
fn clean_instance<R: Rng>(
    field: PrimeField,
    d: u32,
    delta: usize,
    rng: &mut R,
    scan: impl Fn(&Form) -> Vec<[u64; 3]>,
) -> Result<Option<(Form, FatPointScheme)>> {
    let z = match general_scheme(field, delta, 2, d, rng) {
        Ok(z) => z,
        Err(Error::GeneralPositionExhausted(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let sys = LinearSystem::new(field, &z, d)?;
    let f = sys.random_member(field, rng)?;
    let mut found = scan(&f);
    found.sort();
    let mut expect = z.points().to_vec();
    expect.sort();
    if found != expect || !z.points().iter().all(|p| certify_node(&f, p)) {
        return Ok(None);
    }
    Ok(Some((f, z)))
}

/// Common exponent of the node projections in the resultant gcd, if the
/// gcd has no other factors and the exponents agree.
fn measure_per_node<R: Rng>(f: &Form, z: &FatPointScheme, rng: &mut R) -> Result<Option<u32>> {
    for _ in 0..RESAMPLE_LIMIT {
        let Some((_, g, images)) = generic_coordinates(f, z, rng) else {
            continue;
        };
        let b = resultant_gcd(&g)?;
        let mults: Vec<u32> = images.iter().map(|q| binary_multiplicity(&b, q)).collect();
        if b.degree() != mults.iter().sum::<u32>() {
            return Ok(None);
        }
        let c = mults.first().copied().unwrap_or(0);
        if mults.iter().all(|&m| m == c) {
            return Ok(Some(c));
        }
        return Ok(None);
    }
    Ok(None)
}

fn random_invertible<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> (FpMatrix, FpMatrix) {
    loop {
        let rows: Vec<Vec<u64>> = (0..3).map(|_| (0..3).map(|_| field.random(rng)).collect()).collect();
        let m = FpMatrix::from_rows(field, &rows).unwrap();
        if let Some(inv) = m.inverse() {
            return (m, inv);
        }
    }
}

/// `M`, `f(M y)` and the node images.
type GenericCoordinates = (Vec<Vec<u64>>, Form, Vec<[u64; 3]>);

/// A coordinate change `x = M y` after which the `x3^d` coefficient is a
/// unit and the nodes project from `(0:0:1)` to distinct points. Returns
/// `M`, `f(M y)` and the node images `M^{-1} p`.
fn generic_coordinates<R: Rng + ?Sized>(
    f: &Form,
    z: &FatPointScheme,
    rng: &mut R,
) -> Option<GenericCoordinates> {
    let field = f.field();
    let (m, inv) = random_invertible(field, rng);
    let g = f.substitute_linear(&m.to_rows());
    if g.coeff(&[0, 0, f.degree()]) == 0 {
        return None;
    }
    let images: Vec<[u64; 3]> = z
        .points()
        .iter()
        .map(|p| {
            let v = inv.mul_vec(p);
            [v[0], v[1], v[2]]
        })
        .collect();
    let mut projections: Vec<[u64; 2]> = Vec::with_capacity(images.len());
    for q in &images {
        if q[0] == 0 && q[1] == 0 {
            return None;
        }
        let pr = if q[1] != 0 { [field.mul(q[0], field.inv(q[1])), 1] } else { [1, 0] };
        if projections.contains(&pr) {
            return None;
        }
        projections.push(pr);
    }
    Some((m.to_rows(), g, images))
}

fn resultant_gcd(g: &Form) -> Result<Form> {
    let r1 = resultant_x3(g, &g.partial(0))?;
    let r2 = resultant_x3(g, &g.partial(1))?;
    Ok(binary_gcd(&r1, &r2))
}

/// Multiplicity of the projection of `q` as a root of the binary form `b`.
fn binary_multiplicity(b: &Form, q: &[u64; 3]) -> u32 {
    let field = b.field();
    if q[1] == 0 {
        return x2_multiplicity(b);
    }
    let t = field.mul(q[0], field.inv(q[1]));
    dehomogenize(b).root_multiplicity(t) as u32
}

/// Resultant-gcd accounting at the working prime.
pub fn certify_no_extra_singularities(
    f: &Form,
    z: &FatPointScheme,
    calibration: &Calibration,
    seed: u64,
) -> Result<ResultantEvidence> {
    let mut rng = seed::rng(seed::derive(seed, "extra-singularities", &[]));
    for attempt in 0..RESAMPLE_LIMIT {
        let Some((change, g, images)) = generic_coordinates(f, z, &mut rng) else {
            continue;
        };
        let r1 = resultant_x3(&g, &g.partial(0))?;
        let r2 = resultant_x3(&g, &g.partial(1))?;
        if r1.is_zero() || r2.is_zero() {
            return Err(Error::ExtraSingularityFound("resultant vanishes identically (repeated component)".into()));
        }
        let b = binary_gcd(&r1, &r2);
        let mults: Vec<u32> = images.iter().map(|q| binary_multiplicity(&b, q)).collect();
        let accounted: u32 = mults.iter().sum();
        if b.degree() > accounted {
            let witness = extra_witness(&b, &images, &mults, &mut rng);
            return Err(Error::ExtraSingularityFound(witness));
        }
        if let Some(k) = mults.iter().position(|&m| m != calibration.per_node) {
            return Err(Error::CalibrationMismatch(format!(
                "node {k} contributes {} against calibrated {}",
                mults[k], calibration.per_node
            )));
        }
        return Ok(ResultantEvidence {
            coordinate_change: change,
            change_attempt: attempt,
            gcd_degree: b.degree(),
            per_node: calibration.per_node,
            node_multiplicities: mults,
            gcd: b.to_record(),
        });
    }
    Err(Error::CertificationExhausted { attempts: RESAMPLE_LIMIT, last: "no generic coordinates found".into() })
}

fn extra_witness<R: Rng + ?Sized>(b: &Form, images: &[[u64; 3]], mults: &[u32], rng: &mut R) -> String {
    let field = b.field();
    let mut u = dehomogenize(b);
    for (q, &m) in images.iter().zip(mults) {
        if q[1] != 0 {
            let t = field.mul(q[0], field.inv(q[1]));
            for _ in 0..m {
                u = u.div_rem(&crate::upoly::UPoly::linear_root(field, t)).0;
            }
        }
    }
    let roots = u.roots(rng);
    match roots.first() {
        Some(t) => format!("projection ({t}:1) in generic coordinates"),
        None => format!("unaccounted factor of degree {} over an extension", u.degree().unwrap_or(0)),
    }
}

/// Full certification of `f` with assigned nodes `z`.
pub fn certify_curve(f: &Form, z: &FatPointScheme, seed: u64) -> Result<NodalCurveCertificate> {
    let field = f.field();
    let d = f.degree();
    let delta = z.len();
    if z.multiplicities().iter().any(|&m| m != 2) {
        return Err(Error::DimensionMismatch("nodes must have multiplicity 2".into()));
    }
    let mut node_evidence = Vec::with_capacity(delta);
    for p in z.points() {
        match hessian_minor(f, p) {
            Some(h) if h != 0 => node_evidence.push(NodeEvidence { point: *p, hessian_minor: h }),
            _ => return Err(Error::ExtraSingularityFound(format!("{p:?} is not an ordinary double point"))),
        }
    }
    let irreducibility = absolutely_irreducible_report(f, seed::derive(seed, "irreducibility", &[]))?;
    if irreducibility.verdict != Irreducibility::Yes {
        return Err(Error::CertificationExhausted {
            attempts: 1,
            last: format!("irreducibility verdict {:?}", irreducibility.verdict),
        });
    }
    let cal = calibration(d, delta)?;
    let extra = certify_no_extra_singularities(f, z, &cal, seed)?;
    Ok(NodalCurveCertificate {
        prime: field.modulus(),
        degree: d,
        delta,
        genus: plane_genus(d, delta),
        form: f.to_record(),
        nodes: z.clone(),
        node_evidence,
        irreducibility,
        extra_singularities: extra,
        calibration: cal,
        seed,
        sampling: None,
        degree_bound: (2 * d as u64) * (d as u64) * (d as u64),
    })
}

/// Recomputes every piece of evidence from the stored form, nodes and seed.
pub fn verify_certificate(cert: &NodalCurveCertificate) -> Result<()> {
    let field = PrimeField::small(cert.prime)?;
    let f = Form::from_record(field, &cert.form)?;
    let z = FatPointScheme::new(field, cert.nodes.points(), cert.nodes.multiplicities())?;
    let mut again = certify_curve(&f, &z, cert.seed)?;
    again.sampling = cert.sampling.clone();
    if again != *cert {
        return Err(Error::EvidenceMismatch("nodal curve certificate".into()));
    }
    if cert.genus != plane_genus(cert.degree, cert.nodes.len()) {
        return Err(Error::EvidenceMismatch("genus".into()));
    }
    Ok(())
}

/// Whether `(d, delta)` lies in the sampling range.
pub fn check_range(d: u32, delta: usize) -> Result<()> {
    let infeasible = d < 1
        || (d, delta) == (6, 9)
        || expected_dim(d, &vec![2; delta]) < 0
        || plane_genus(d.max(1), delta) < 0;
    if infeasible {
        return Err(Error::InfeasibleRange { d, delta });
    }
    Ok(())
}

/// Samples and certifies a `delta`-nodal curve of degree `d`, resampling up
/// to 16 times.
pub fn sample_nodal_curve(field: PrimeField, d: u32, delta: usize, master_seed: u64) -> Result<NodalCurveCertificate> {
    check_range(d, delta)?;
    let mut last = String::new();
    for attempt in 0..RESAMPLE_LIMIT {
        let job = seed::derive(master_seed, "sample-curve", &[d as u64, delta as u64, attempt as u64]);
        let mut rng = seed::rng(job);
        let result = general_scheme(field, delta, 2, d, &mut rng).and_then(|z| {
            let sys = LinearSystem::new(field, &z, d)?;
            let f = sys.random_member(field, &mut rng)?;
            certify_curve(&f, &z, job)
        });
        match result {
            Ok(mut cert) => {
                cert.sampling = Some(SamplingRecord { master_seed, attempt });
                return Ok(cert);
            }
            Err(e @ Error::CalibrationMismatch(_)) => return Err(e),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::CertificationExhausted { attempts: RESAMPLE_LIMIT, last })
}

/// One sample per seed, in seed order.
pub fn sample_nodal_curves(
    field: PrimeField,
    d: u32,
    delta: usize,
    seeds: &[u64],
    exec: Execution,
) -> Vec<Result<NodalCurveCertificate>> {
    if let Err(e) = check_range(d, delta).and_then(|_| calibration(d, delta).map(|_| ())) {
        return seeds.iter().map(|_| Err(e.clone())).collect();
    }
    par::map(exec, seeds.to_vec(), |s| sample_nodal_curve(field, d, delta, s))
}

/// `Z = {(1:0:0), (0:1:0), (0:0:1), (1:1:1)}` with multiplicity 2.
pub fn genus6_scheme(field: PrimeField) -> FatPointScheme {
    FatPointScheme::uniform(field, &[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], 2).expect("distinct points")
}

/// `|I_Z^2(6)|` for the four fixed points.
pub fn genus6_system(field: PrimeField) -> Result<LinearSystem> {
    LinearSystem::new(field, &genus6_scheme(field), 6)
}

/// A random member of the genus-6 system, certified as a 4-nodal curve.
pub fn genus6_random_member(field: PrimeField, master_seed: u64) -> Result<NodalCurveCertificate> {
    let sys = genus6_system(field)?;
    let mut last = String::new();
    for attempt in 0..RESAMPLE_LIMIT {
        let job = seed::derive(master_seed, "genus6", &[attempt as u64]);
        let mut rng = seed::rng(job);
        let f = sys.random_member(field, &mut rng)?;
        match certify_curve(&f, &sys.scheme, job) {
            Ok(mut cert) => {
                cert.sampling = Some(SamplingRecord { master_seed, attempt });
                return Ok(cert);
            }
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::CertificationExhausted { attempts: RESAMPLE_LIMIT, last })
}

/// Parameters of the displayed genus-6 sextic: `a` in the basis
/// `l1^4, l1^2 l2^2, l2^4`, `b` in `l3^4, l3^2 l4^2, l4^4`, `c` over the
/// quadratic monomials of `(l1, l2, l3)` in basis order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzParams {
    pub z: [u64; 4],
    pub a: [u64; 3],
    pub b: [u64; 3],
    pub c: [u64; 6],
}

impl AnsatzParams {
    /// 4 + 3 + 3 + 6 coefficients.
    pub const COUNT: usize = 16;

    pub fn random<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> Self {
        let mut draw = || field.random(rng);
        Self {
            z: [draw(), draw(), draw(), draw()],
            a: [draw(), draw(), draw()],
            b: [draw(), draw(), draw()],
            c: [draw(), draw(), draw(), draw(), draw(), draw()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzMember {
    pub form: Form,
    /// Measured vanishing order at each point of `{l1 l2 = l3 l4 = 0}`.
    pub base_orders: Vec<([u64; 3], u32)>,
}

/// The displayed sextic
/// `z1 (l2 l3 l4)^2 + z2 (l1 l3 l4)^2 + z3 (l1 l2 l4)^2 + z4 (l1 l2 l3)^2
///  + a l1 l2 + b l3 l4 + c l1 l2 l3 l4` with `l_i = x_i` and
/// `l4 = x1 + x2 + x3`, taken literally.
pub fn displayed_ansatz_member(field: PrimeField, params: &AnsatzParams) -> AnsatzMember {
    let l: Vec<Form> = (0..3).map(|i| Form::var(field, 3, i)).collect();
    let l4 = Form::linear(field, &[1, 1, 1]);
    let (l1, l2, l3) = (&l[0], &l[1], &l[2]);
    let sq = |a: &Form, b: &Form, c: &Form| a.mul(b).mul(c).pow(2);
    let mut f = sq(l2, l3, &l4).scale(params.z[0]);
    f = f.add(&sq(l1, l3, &l4).scale(params.z[1]));
    f = f.add(&sq(l1, l2, &l4).scale(params.z[2]));
    f = f.add(&sq(l1, l2, l3).scale(params.z[3]));
    let quartic = |u: &Form, v: &Form, c: &[u64; 3]| {
        u.pow(4).scale(c[0]).add(&u.pow(2).mul(&v.pow(2)).scale(c[1])).add(&v.pow(4).scale(c[2]))
    };
    f = f.add(&quartic(l1, l2, &params.a).mul(&l1.mul(l2)));
    f = f.add(&quartic(l3, &l4, &params.b).mul(&l3.mul(&l4)));
    let c = Form::from_coeffs(field, 3, 2, params.c.to_vec()).expect("six quadratic coefficients");
    f = f.add(&c.mul(&l1.mul(l2).mul(l3).mul(&l4)));
    let minus = field.neg(1);
    let base = [[0, 1, 0], [0, 1, minus], [1, 0, 0], [1, 0, minus]];
    let base_orders = base.iter().map(|p| (*p, f.vanishing_order(p))).collect();
    AnsatzMember { form: f, base_orders }
}
