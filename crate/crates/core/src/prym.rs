//! Conic bundles `x^T M(x) y`-style hypersurfaces in `P^2 x P^2` given by a
//! symmetric matrix of quadrics, their discriminant sextics and the double
//! cover of the discriminant by the line components of singular fibres.
//!
//! Admissibility is certified without scanning the plane: a fibre of rank
//! at most one lies over a singular point of the discriminant, and over a
//! rank-two fibre with vertex `y` the bundle is singular at `(x, y)` exactly
//! when the discriminant is singular at `x`. Hence once the discriminant is
//! certified nodal at the projections of the claimed bundle nodes, the rank
//! at those points decides both the rank condition and `Sing V`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Fp2, PrimeField};
use crate::form::{Form, FormRecord};
use crate::interpolation::{random_point, FatPointScheme, RESAMPLE_LIMIT};
use crate::matrix::FpMatrix;
use crate::monomial::MonomialBasis;
use crate::par::{self, Execution};
use crate::severi::{certify_curve, NodalCurveCertificate, SamplingRecord};
use crate::square::perfect_square_root;
use crate::upoly::UPoly;
use crate::seed;

/// Index pairs of the stored entries, upper triangle row by row.
pub const ENTRY_ORDER: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn slot(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    ENTRY_ORDER.iter().position(|&p| p == (i, j)).unwrap()
}

/// Form of bidegree `(dx, dy)` in `(x1, x2, x3; y1, y2, y3)`; coefficient
/// `k * ny + l` belongs to `x^{a_k} y^{b_l}` for the graded-lex bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiHomForm {
    field: PrimeField,
    dx: u32,
    dy: u32,
    coeffs: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiHomRecord {
    pub dx: u32,
    pub dy: u32,
    /// `(x exponents, y exponents, coefficient)` for nonzero terms.
    pub terms: Vec<(Vec<u32>, Vec<u32>, u64)>,
}

impl BiHomForm {
    pub fn zero(field: PrimeField, dx: u32, dy: u32) -> Self {
        let n = MonomialBasis::get(3, dx).len() * MonomialBasis::get(3, dy).len();
        Self { field, dx, dy, coeffs: vec![0; n] }
    }

    pub fn from_coeffs(field: PrimeField, dx: u32, dy: u32, coeffs: Vec<u64>) -> Result<Self> {
        let z = Self::zero(field, dx, dy);
        if coeffs.len() != z.coeffs.len() {
            return Err(Error::DimensionMismatch(format!("{} coefficients for {}", coeffs.len(), z.coeffs.len())));
        }
        Ok(Self { coeffs: coeffs.into_iter().map(|c| field.reduce(c)).collect(), ..z })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.dx, self.dy)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn index(&self, a: &[u32], b: &[u32]) -> Option<usize> {
        let xb = MonomialBasis::get(3, self.dx);
        let yb = MonomialBasis::get(3, self.dy);
        Some(xb.index_of(a)? * yb.len() + yb.index_of(b)?)
    }

    pub fn coeff(&self, a: &[u32], b: &[u32]) -> u64 {
        self.index(a, b).map_or(0, |k| self.coeffs[k])
    }

    pub fn terms(&self) -> Vec<(Vec<u32>, Vec<u32>, u64)> {
        let xb = MonomialBasis::get(3, self.dx);
        let yb = MonomialBasis::get(3, self.dy);
        let ny = yb.len();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (xb.exponents(k / ny).to_vec(), yb.exponents(k % ny).to_vec(), c))
            .collect()
    }

    /// The same polynomial as a form in six variables `x1..x3, y1..y3`.
    pub fn to_form(&self) -> Form {
        let mut f = Form::zero(self.field, 6, self.dx + self.dy);
        for (a, b, c) in self.terms() {
            let e: Vec<u32> = a.iter().chain(&b).copied().collect();
            f.set_coeff(&e, c);
        }
        f
    }

    pub fn from_form(f: &Form, dx: u32) -> Result<Self> {
        if f.nvars() != 6 || f.degree() < dx {
            return Err(Error::DimensionMismatch("expected a senary form".into()));
        }
        let mut out = Self::zero(f.field(), dx, f.degree() - dx);
        for (e, c) in f.terms() {
            if e[..3].iter().sum::<u32>() != dx {
                return Err(Error::DimensionMismatch(format!("term {e:?} outside bidegree")));
            }
            let k = out.index(&e[..3], &e[3..]).unwrap();
            out.coeffs[k] = c;
        }
        Ok(out)
    }

    pub fn eval(&self, x: &[u64; 3], y: &[u64; 3]) -> u64 {
        self.to_form().eval(&[x[0], x[1], x[2], y[0], y[1], y[2]])
    }

    pub fn to_record(&self) -> BiHomRecord {
        BiHomRecord { dx: self.dx, dy: self.dy, terms: self.terms() }
    }

    pub fn from_record(field: PrimeField, r: &BiHomRecord) -> Result<Self> {
        let mut out = Self::zero(field, r.dx, r.dy);
        for (a, b, c) in &r.terms {
            let k = out
                .index(a, b)
                .ok_or_else(|| Error::DimensionMismatch(format!("term {a:?} {b:?} outside bidegree")))?;
            out.coeffs[k] = field.reduce(*c);
        }
        Ok(out)
    }
}

/// Symmetric `3 x 3` matrix of ternary forms with `deg a_ij` equal to
/// `(deg a_ii + deg a_jj) / 2`, so the determinant is homogeneous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymQuadMatrix {
    entries: [Form; 6],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymQuadRecord {
    /// Entries in [`ENTRY_ORDER`].
    pub entries: Vec<FormRecord>,
}

impl SymQuadMatrix {
    pub fn new(entries: [Form; 6]) -> Result<Self> {
        let field = entries[0].field();
        if field.modulus() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if entries.iter().any(|e| e.nvars() != 3 || e.field() != field) {
            return Err(Error::DimensionMismatch("entries must be ternary forms over one field".into()));
        }
        let d = |i: usize| entries[slot(i, i)].degree();
        for &(i, j) in &ENTRY_ORDER {
            if 2 * entries[slot(i, j)].degree() != d(i) + d(j) {
                return Err(Error::DimensionMismatch(format!("entry ({i}, {j}) has inconsistent degree")));
            }
        }
        Ok(Self { entries })
    }

    /// The symmetric matrix with `a_ii = diag[i]`, off-diagonal entries zero.
    pub fn diagonal(diag: [Form; 3]) -> Result<Self> {
        let field = diag[0].field();
        let [a, b, c] = diag;
        let z = |p: &Form, q: &Form| Form::zero(field, 3, (p.degree() + q.degree()) / 2);
        let (e12, e13, e23) = (z(&a, &b), z(&a, &c), z(&b, &c));
        Self::new([a, e12, e13, b, e23, c])
    }

    pub fn field(&self) -> PrimeField {
        self.entries[0].field()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.entries[slot(i, j)]
    }

    pub fn entries(&self) -> &[Form; 6] {
        &self.entries
    }

    pub fn is_quadratic(&self) -> bool {
        self.entries.iter().all(|e| e.degree() == 2)
    }

    pub fn eval(&self, x: &[u64; 3]) -> [[u64; 3]; 3] {
        self.eval_in(&self.field(), x)
    }

    pub fn eval_in<F: Field>(&self, field: &F, x: &[F::Elem; 3]) -> [[F::Elem; 3]; 3] {
        let mut m = [[field.zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.entry(i, j).eval_in(field, x);
            }
        }
        m
    }

    /// `a_kk a_ll - a_kl^2` for `{k, l}` the complement of `c`.
    pub fn cofactor(&self, c: usize) -> Form {
        let (k, l) = complement(c);
        self.entry(k, k).mul(self.entry(l, l)).sub(&self.entry(k, l).mul(self.entry(k, l)))
    }

    pub fn to_record(&self) -> SymQuadRecord {
        SymQuadRecord { entries: self.entries.iter().map(Form::to_record).collect() }
    }

    pub fn from_record(field: PrimeField, r: &SymQuadRecord) -> Result<Self> {
        let forms = r.entries.iter().map(|e| Form::from_record(field, e)).collect::<Result<Vec<_>>>()?;
        let entries: [Form; 6] =
            forms.try_into().map_err(|_| Error::DimensionMismatch("six entries expected".into()))?;
        Self::new(entries)
    }
}

fn complement(c: usize) -> (usize, usize) {
    match c {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// `sum_i a_ii y_i^2 + sum_{i<j} 2 a_ij y_i y_j`.
pub fn bundle_from_matrix(m: &SymQuadMatrix) -> Result<BiHomForm> {
    if !m.is_quadratic() {
        return Err(Error::DimensionMismatch("bundle needs quadratic entries".into()));
    }
    let field = m.field();
    let mut out = BiHomForm::zero(field, 2, 2);
    for &(i, j) in &ENTRY_ORDER {
        let mut b = [0u32; 3];
        b[i] += 1;
        b[j] += 1;
        let scale = if i == j { 1 } else { 2 };
        for (a, c) in m.entry(i, j).terms() {
            let k = out.index(a, &b).unwrap();
            out.coeffs[k] = field.mul(c, scale);
        }
    }
    Ok(out)
}

pub fn matrix_from_bundle(f: &BiHomForm) -> Result<SymQuadMatrix> {
    let field = f.field();
    if field.modulus() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if f.bidegree() != (2, 2) {
        return Err(Error::DimensionMismatch(format!("bidegree {:?}", f.bidegree())));
    }
    let half = field.inv(2);
    let mut entries: [Form; 6] = std::array::from_fn(|_| Form::zero(field, 3, 2));
    for (a, b, c) in f.terms() {
        let idx: Vec<usize> = (0..3).flat_map(|i| std::iter::repeat_n(i, b[i] as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        let v = if i == j { c } else { field.mul(c, half) };
        entries[slot(i, j)].set_coeff(&a, v);
    }
    SymQuadMatrix::new(entries)
}

/// `det M` by cofactor expansion along the first row.
pub fn discriminant(m: &SymQuadMatrix) -> Result<Form> {
    let a = |i, j| m.entry(i, j);
    let t1 = a(0, 0).mul(&m.cofactor(0));
    let t2 = a(0, 1).mul(&a(0, 1).mul(a(2, 2)).sub(&a(1, 2).mul(a(0, 2))));
    let t3 = a(0, 2).mul(&a(0, 1).mul(a(1, 2)).sub(&a(1, 1).mul(a(0, 2))));
    let det = t1.sub(&t2).add(&t3);
    if det.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    Ok(det)
}

fn rank3(field: PrimeField, m: &[[u64; 3]; 3]) -> usize {
    FpMatrix::from_rows(field, &m.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("3 x 3").rank()
}

/// Assigned singular point `(x, y)` of a bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleNode {
    pub x: [u64; 3],
    pub y: [u64; 3],
}

/// `6 delta x 36` matrix of the first partials at the nodes; columns follow
/// the coefficient order of a `(2, 2)` [`BiHomForm`].
pub fn bundle_conditions(field: PrimeField, nodes: &[BundleNode]) -> FpMatrix {
    let xb = MonomialBasis::get(3, 2);
    let yb = MonomialBasis::get(3, 2);
    let cols = xb.len() * yb.len();
    let monomial = |e: &[u32], pt: &[u64; 3], wrt: Option<usize>| -> u64 {
        let mut v = 1u64;
        let mut e = e.to_vec();
        if let Some(i) = wrt {
            if e[i] == 0 {
                return 0;
            }
            v = e[i] as u64;
            e[i] -= 1;
        }
        (0..3).fold(v, |acc, k| field.mul(acc, field.pow(pt[k], e[k] as u64)))
    };
    let mut rows = Vec::with_capacity(6 * nodes.len());
    for n in nodes {
        for (side, i) in (0..2).flat_map(|s| (0..3).map(move |i| (s, i))) {
            let mut row = vec![0; cols];
            for (k, a) in xb.iter().enumerate() {
                for (l, b) in yb.iter().enumerate() {
                    let (dx, dy) = if side == 0 { (Some(i), None) } else { (None, Some(i)) };
                    row[k * yb.len() + l] = field.mul(monomial(a, &n.x, dx), monomial(b, &n.y, dy));
                }
            }
            rows.push(row);
        }
    }
    FpMatrix::from_row_list(field, cols, rows)
}

/// A sampled bundle singular at its assigned nodes, with the system it was
/// drawn from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodalBundle {
    pub prime: u64,
    pub delta: usize,
    pub form: BiHomRecord,
    pub nodes: Vec<BundleNode>,
    /// Projective dimension of the system, `35 - 5 delta`.
    pub system_dim: i64,
    pub sampling: SamplingRecord,
}

impl NodalBundle {
    pub fn bundle(&self) -> Result<BiHomForm> {
        BiHomForm::from_record(PrimeField::small(self.prime)?, &self.form)
    }
}

/// Random `delta`-nodal `(2, 2)` bundle, `4 <= delta <= 7`. Node sets whose
/// conditions are dependent are redrawn.
pub fn sample_nodal_bundle(field: PrimeField, delta: usize, master_seed: u64) -> Result<NodalBundle> {
    if !(4..=7).contains(&delta) {
        return Err(Error::InfeasibleDelta(delta));
    }
    let mut last = Error::UnexpectedRank { got: 0, expected: 5 * delta };
    for attempt in 0..RESAMPLE_LIMIT {
        let job = seed::derive(master_seed, "conic-bundle", &[delta as u64, attempt as u64]);
        let mut rng = seed::rng(job);
        let nodes: Vec<BundleNode> =
            (0..delta).map(|_| BundleNode { x: random_point(field, &mut rng), y: random_point(field, &mut rng) }).collect();
        let m = bundle_conditions(field, &nodes);
        let rank = m.rank();
        if rank != 5 * delta {
            last = Error::UnexpectedRank { got: rank, expected: 5 * delta };
            continue;
        }
        let v = m.random_kernel_vector(rng.gen())?;
        let form = BiHomForm::from_coeffs(field, 2, 2, v)?;
        return Ok(NodalBundle {
            prime: field.modulus(),
            delta,
            form: form.to_record(),
            nodes,
            system_dim: 35 - 5 * delta as i64,
            sampling: SamplingRecord { master_seed, attempt },
        });
    }
    Err(last)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverVerdict {
    Split,
    GeometricallyConnected,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueSample {
    /// Smooth point of the discriminant over `F_{p^2}`, as `[re, im]` pairs.
    pub point: [[u64; 2]; 3],
    /// Index `c` of the cofactor used; the vertex has `v_c != 0`.
    pub chart: usize,
    /// `-a_kk a_ll + a_kl^2` at the point, `{k, l}` the complement of `c`.
    pub line_discriminant: [u64; 2],
    pub square: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub verdict: CoverVerdict,
    pub samples: Vec<ResidueSample>,
    pub lines_tried: usize,
    /// A diagonal cofactor whose negative is a constant times a square.
    pub global_square_cofactor: Option<usize>,
    /// `1 - 2^{-n}` for `n` samples.
    pub confidence: f64,
}

fn global_square_cofactor(m: &SymQuadMatrix) -> Option<usize> {
    (0..3).find(|&c| {
        let q = m.cofactor(c).neg();
        if q.is_zero() {
            return false;
        }
        q.degree() == 0 || perfect_square_root(&q).is_some()
    })
}

/// Square classes of the discriminant of the split conic at random smooth
/// points of the discriminant curve over `F_{p^2}`.
///
/// Both classes occurring proves the cover is non-split over every
/// constant extension. All samples square with a global cofactor square
/// root gives `Split`.
pub fn cover_residue_test(m: &SymQuadMatrix, n_samples: usize, seed: u64) -> Result<CoverReport> {
    let field = m.field();
    let ext = Fp2::new(field);
    let det = discriminant(m)?;
    let grad = [det.partial(0), det.partial(1), det.partial(2)];
    let d = det.degree() as usize;
    let mut rng = seed::rng(seed::derive(seed, "cover-residue", &[]));
    let budget = 64 * n_samples + 64;
    let mut samples = Vec::with_capacity(n_samples);
    let mut lines = 0;
    while samples.len() < n_samples {
        if lines == budget {
            return Err(Error::TooFewSmoothPoints);
        }
        lines += 1;
        let a: [[u64; 2]; 3] = std::array::from_fn(|_| ext.random(&mut rng));
        let b: [[u64; 2]; 3] = std::array::from_fn(|_| ext.random(&mut rng));
        let on_line = |t: [u64; 2]| -> [[u64; 2]; 3] { std::array::from_fn(|i| ext.add(a[i], ext.mul(t, b[i]))) };
        let ts: Vec<[u64; 2]> = (0..=d as u64).map(|t| ext.embed(t)).collect();
        let vs: Vec<[u64; 2]> = ts.iter().map(|&t| det.eval_in(&ext, &on_line(t))).collect();
        let restricted = UPoly::interpolate(ext, &ts, &vs);
        if restricted.degree().unwrap_or(0) == 0 {
            continue;
        }
        let Some(&t) = restricted.roots(&mut rng).first() else {
            continue;
        };
        let x = on_line(t);
        if grad.iter().all(|g| ext.is_zero(g.eval_in(&ext, &x))) {
            continue;
        }
        let mx = m.eval_in(&ext, &x);
        let chart = (0..3).find(|&c| {
            let (k, l) = complement(c);
            !ext.is_zero(ext.sub(ext.mul(mx[k][k], mx[l][l]), ext.mul(mx[k][l], mx[k][l])))
        });
        let Some(chart) = chart else {
            continue;
        };
        let (k, l) = complement(chart);
        let disc = ext.sub(ext.mul(mx[k][l], mx[k][l]), ext.mul(mx[k][k], mx[l][l]));
        samples.push(ResidueSample { point: x, chart, line_discriminant: disc, square: ext.is_square(disc) });
    }
    let squares = samples.iter().filter(|s| s.square).count();
    let witness = global_square_cofactor(m);
    let verdict = if n_samples == 0 {
        CoverVerdict::Inconclusive
    } else if squares > 0 && squares < n_samples {
        CoverVerdict::GeometricallyConnected
    } else if squares == n_samples && witness.is_some() {
        CoverVerdict::Split
    } else {
        CoverVerdict::Inconclusive
    };
    let confidence = 1.0 - 0.5f64.powi(n_samples as i32);
    Ok(CoverReport { verdict, samples, lines_tried: lines, global_square_cofactor: witness, confidence })
}

/// `diag(1, 1, f)` for a random ternary sextic `f`.
pub fn split_control_fixture<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> Result<SymQuadMatrix> {
    let n = MonomialBasis::get(3, 6).len();
    let f = Form::from_coeffs(field, 3, 6, (0..n).map(|_| field.random(rng)).collect())?;
    let one = Form::constant(field, 3, 1);
    SymQuadMatrix::diagonal([one.clone(), one, f])
}

/// Dimension of the cokernel of `H^0(O(k-3))^3 -> H^0(O(k-1))^3`, `G -> M G`.
pub fn cokernel_h0(m: &SymQuadMatrix, k: u32) -> Result<usize> {
    if !m.is_quadratic() {
        return Err(Error::DimensionMismatch("cokernel needs quadratic entries".into()));
    }
    let field = m.field();
    let target = MonomialBasis::get(3, k - 1);
    let nt = target.len();
    if k < 3 {
        return Ok(3 * nt);
    }
    let source = MonomialBasis::get(3, k - 3);
    let ns = source.len();
    let mut mat = FpMatrix::zeros(field, 3 * nt, 3 * ns);
    for j in 0..3 {
        for (s, e) in source.iter().enumerate() {
            let g = Form::monomial(field, e, 1);
            for i in 0..3 {
                for (t, c) in m.entry(i, j).mul(&g).terms() {
                    let r = i * nt + target.index_of(t).unwrap();
                    mat.set(r, j * ns + s, field.add(mat.get(r, j * ns + s), c));
                }
            }
        }
    }
    Ok(3 * nt - mat.rank())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleNodeEvidence {
    pub node: BundleNode,
    pub fibre_rank: usize,
    /// Rank of the Hessian of the affine chart through the node.
    pub chart_hessian_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityEvidence {
    pub bundle_nodes: Vec<BundleNodeEvidence>,
    pub discriminant: NodalCurveCertificate,
    pub cover: CoverReport,
}

fn not_admissible(clause: u8, detail: impl Into<String>) -> Error {
    Error::NotAdmissible { clause, detail: detail.into() }
}

fn check_bundle_node(field: PrimeField, f: &Form, m: &SymQuadMatrix, n: &BundleNode) -> Result<BundleNodeEvidence> {
    let pt = [n.x[0], n.x[1], n.x[2], n.y[0], n.y[1], n.y[2]];
    let mx = m.eval(&n.x);
    let fibre_rank = rank3(field, &mx);
    if fibre_rank != 2 {
        return Err(not_admissible(2, format!("fibre over {:?} has rank {fibre_rank}", n.x)));
    }
    let grad = f.gradient();
    if f.eval(&pt) != 0 || grad.iter().any(|g| g.eval(&pt) != 0) {
        return Err(not_admissible(3, format!("bundle is not singular at {n:?}")));
    }
    let i = (0..3).find(|&i| n.x[i] != 0).unwrap();
    let j = 3 + (0..3).find(|&j| n.y[j] != 0).unwrap();
    let free: Vec<usize> = (0..6).filter(|&v| v != i && v != j).collect();
    let rows: Vec<Vec<u64>> = free.iter().map(|&a| free.iter().map(|&b| grad[a].partial(b).eval(&pt)).collect()).collect();
    let chart_hessian_rank = FpMatrix::from_rows(field, &rows)?.rank();
    if chart_hessian_rank != 4 {
        return Err(not_admissible(3, format!("singular point {n:?} is not a node")));
    }
    Ok(BundleNodeEvidence { node: *n, fibre_rank, chart_hessian_rank })
}

/// Certifies the admissibility clauses for `m` with claimed bundle nodes.
/// Clauses: (2) fibres of rank at least two, (3) exactly the claimed nodes
/// with an integral nodal discriminant, (4) non-split cover.
pub fn certify_admissible(m: &SymQuadMatrix, nodes: &[BundleNode], n_samples: usize, seed: u64) -> Result<AdmissibilityEvidence> {
    let field = m.field();
    let det = discriminant(m)?;
    let mut bundle_nodes = Vec::with_capacity(nodes.len());
    if !nodes.is_empty() {
        let f = bundle_from_matrix(m)?.to_form();
        for n in nodes {
            bundle_nodes.push(check_bundle_node(field, &f, m, n)?);
        }
    }
    let xs: Vec<[u64; 3]> = nodes.iter().map(|n| n.x).collect();
    let z = FatPointScheme::uniform(field, &xs, 2).map_err(|e| not_admissible(3, e.to_string()))?;
    let disc = certify_curve(&det, &z, seed::derive(seed, "discriminant", &[]))
        .map_err(|e| not_admissible(3, format!("discriminant: {e}")))?;
    let cover = cover_residue_test(m, n_samples, seed)?;
    if cover.verdict == CoverVerdict::Split {
        return Err(not_admissible(4, "the double cover of the discriminant splits"));
    }
    Ok(AdmissibilityEvidence { bundle_nodes, discriminant: disc, cover })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CokernelDim {
    pub k: u32,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrymCertificate {
    pub prime: u64,
    pub delta: usize,
    /// `10 - delta`.
    pub genus: i64,
    pub bundle: NodalBundle,
    pub matrix: SymQuadRecord,
    pub discriminant: FormRecord,
    pub admissibility: AdmissibilityEvidence,
    pub cokernel: Vec<CokernelDim>,
    pub n_samples: usize,
    pub seed: u64,
}

pub const COKERNEL_TWISTS: [u32; 3] = [1, 3, 4];
pub const DEFAULT_RESIDUE_SAMPLES: usize = 50;

pub fn prym_certificate(bundle: &NodalBundle, n_samples: usize, seed: u64) -> Result<PrymCertificate> {
    let f = bundle.bundle()?;
    let field = f.field();
    let m = matrix_from_bundle(&f)?;
    let det = discriminant(&m)?;
    let admissibility = certify_admissible(&m, &bundle.nodes, n_samples, seed)?;
    if admissibility.discriminant.delta != bundle.delta || bundle.nodes.len() != bundle.delta {
        return Err(Error::EvidenceMismatch("node count".into()));
    }
    let cokernel = COKERNEL_TWISTS.iter().map(|&k| Ok(CokernelDim { k, dim: cokernel_h0(&m, k)? })).collect::<Result<_>>()?;
    Ok(PrymCertificate {
        prime: field.modulus(),
        delta: bundle.delta,
        genus: 10 - bundle.delta as i64,
        bundle: bundle.clone(),
        matrix: m.to_record(),
        discriminant: det.to_record(),
        admissibility,
        cokernel,
        n_samples,
        seed,
    })
}

/// Recomputes the certificate from its bundle and seed.
pub fn verify_prym_certificate(cert: &PrymCertificate) -> Result<()> {
    let again = prym_certificate(&cert.bundle, cert.n_samples, cert.seed)?;
    if again != *cert {
        return Err(Error::EvidenceMismatch("prym certificate".into()));
    }
    let projections: Vec<[u64; 3]> = cert.admissibility.discriminant.nodes.points().to_vec();
    let field = PrimeField::small(cert.prime)?;
    let claimed = FatPointScheme::uniform(field, &cert.bundle.nodes.iter().map(|n| n.x).collect::<Vec<_>>(), 2)?;
    if projections != claimed.points() || cert.genus != 10 - cert.delta as i64 {
        return Err(Error::EvidenceMismatch("node projections".into()));
    }
    Ok(())
}

/// Sample then certify, one bundle per seed.
pub fn sample_prym_certificate(field: PrimeField, delta: usize, master_seed: u64, n_samples: usize) -> Result<PrymCertificate> {
    let bundle = sample_nodal_bundle(field, delta, master_seed)?;
    prym_certificate(&bundle, n_samples, seed::derive(master_seed, "prym-certificate", &[delta as u64]))
}

pub fn sample_prym_certificates(
    field: PrimeField,
    delta: usize,
    seeds: &[u64],
    n_samples: usize,
    exec: Execution,
) -> Vec<Result<PrymCertificate>> {
    par::map(exec, seeds.to_vec(), |s| sample_prym_certificate(field, delta, s, n_samples))
}

#[cfg(test)]
mod tests {
    use super::*;

fn det3<F: Field>(f: &F, m: &[[F::Elem; 3]; 3]) -> F::Elem {
    let minor = |r: usize, c: usize| {
        let (a, b) = complement(r);
        let (k, l) = complement(c);
        f.sub(f.mul(m[a][k], m[b][l]), f.mul(m[a][l], m[b][k]))
    };
    let t0 = f.mul(m[0][0], minor(0, 0));
    let t1 = f.mul(m[0][1], minor(0, 1));
    let t2 = f.mul(m[0][2], minor(0, 2));
    f.add(f.sub(t0, t1), t2)
}

    fn fp() -> PrimeField {
        PrimeField::new(crate::field::DEFAULT_PRIME).unwrap()
    }

    fn random_matrix(field: PrimeField, seed: u64) -> SymQuadMatrix {
        let mut rng = seed::rng(seed);
        let entries = std::array::from_fn(|_| Form::from_coeffs(field, 3, 2, (0..6).map(|_| field.random(&mut rng)).collect()).unwrap());
        SymQuadMatrix::new(entries).unwrap()
    }

    #[test]
    fn diagonal_bundle() {
        let f = fp();
        let sq = |i: usize| Form::var(f, 3, i).pow(2);
        let m = SymQuadMatrix::diagonal([sq(0), sq(1), sq(2)]).unwrap();
        let b = bundle_from_matrix(&m).unwrap();
        assert_eq!(b.terms().len(), 3);
        assert_eq!(b.coeff(&[2, 0, 0], &[2, 0, 0]), 1);
        assert_eq!(discriminant(&m).unwrap(), sq(0).mul(&sq(1)).mul(&sq(2)));
        assert_eq!(matrix_from_bundle(&b).unwrap(), m);
    }

    #[test]
    fn roundtrip_and_pointwise_determinant() {
        let f = fp();
        let m = random_matrix(f, 3);
        let b = bundle_from_matrix(&m).unwrap();
        assert_eq!(matrix_from_bundle(&b).unwrap(), m);
        assert_eq!(BiHomForm::from_form(&b.to_form(), 2).unwrap(), b);
        assert_eq!(BiHomForm::from_record(f, &b.to_record()).unwrap(), b);
        let det = discriminant(&m).unwrap();
        assert_eq!(det.degree(), 6);
        let mut rng = seed::rng(9);
        for _ in 0..100 {
            let x = random_point(f, &mut rng);
            assert_eq!(det.eval(&x), det3(&f, &m.eval(&x)));
        }
    }

    fn random_nodes(f: PrimeField, delta: usize, seed: u64) -> Vec<BundleNode> {
        let mut rng = seed::rng(seed);
        (0..delta).map(|_| BundleNode { x: random_point(f, &mut rng), y: random_point(f, &mut rng) }).collect()
    }

    #[test]
    fn each_node_imposes_five_conditions() {
        let f = fp();
        for delta in 1..=6 {
            let m = bundle_conditions(f, &random_nodes(f, delta, delta as u64));
            assert_eq!((m.rows(), m.rank()), (6 * delta, 5 * delta));
        }
    }

    /// Bilinear forms vanishing at seven points span a pencil `<B1, B2>`,
    /// and `B1^2, B1 B2, B2^2` are all singular there.
    #[test]
    fn seven_nodes_are_dependent() {
        let f = fp();
        for seed in 0..4 {
            assert_eq!(bundle_conditions(f, &random_nodes(f, 7, seed)).rank(), 33);
        }
        assert_eq!(sample_nodal_bundle(f, 7, 2), Err(Error::UnexpectedRank { got: 33, expected: 35 }));
    }

    /// With six nodes the system is `Sym^2` of the three bilinear forms
    /// through them, so `M = A^T Q A` and the discriminant is a square.
    #[test]
    fn six_nodes_give_square_discriminants() {
        let f = fp();
        let nb = sample_nodal_bundle(f, 6, 3).unwrap();
        assert_eq!(nb.system_dim, 5);
        let det = discriminant(&matrix_from_bundle(&nb.bundle().unwrap()).unwrap()).unwrap();
        assert!(perfect_square_root(&det).is_some());
    }

    #[test]
    fn sampled_bundle_is_singular_at_nodes() {
        let f = fp();
        let nb = sample_nodal_bundle(f, 4, 1).unwrap();
        assert_eq!(nb.system_dim, 15);
        let form = nb.bundle().unwrap().to_form();
        for n in &nb.nodes {
            let pt = [n.x[0], n.x[1], n.x[2], n.y[0], n.y[1], n.y[2]];
            assert!(form.gradient().iter().all(|g| g.eval(&pt) == 0));
        }
        assert_eq!(sample_nodal_bundle(f, 3, 1), Err(Error::InfeasibleDelta(3)));
    }

    #[test]
    fn cokernel_small_twists() {
        let m = random_matrix(fp(), 4);
        assert_eq!(cokernel_h0(&m, 1).unwrap(), 3);
        assert_eq!(cokernel_h0(&m, 3).unwrap(), 15);
    }

    #[test]
    fn split_fixture_splits() {
        let field = PrimeField::new(1_000_000_009).unwrap();
        let m = split_control_fixture(field, &mut seed::rng(11)).unwrap();
        let r = cover_residue_test(&m, 20, 3).unwrap();
        assert_eq!(r.verdict, CoverVerdict::Split);
        assert_eq!(cover_residue_test(&m, 0, 3).unwrap().verdict, CoverVerdict::Inconclusive);
        let err = certify_admissible(&m, &[], 20, 3).unwrap_err();
        assert!(matches!(err, Error::NotAdmissible { clause: 4, .. }), "{err}");
    }

    #[test]
    fn common_row_factor_is_rejected() {
        let f = fp();
        let m = random_matrix(f, 8);
        let l = Form::linear(f, &[1, 2, 3]);
        let lin = |seed: u64| {
            let mut rng = seed::rng(seed);
            Form::from_coeffs(f, 3, 1, (0..3).map(|_| f.random(&mut rng)).collect()).unwrap()
        };
        let mut e = m.entries().clone();
        e[slot(0, 0)] = l.mul(&lin(1));
        e[slot(0, 1)] = l.mul(&lin(2));
        e[slot(0, 2)] = l.mul(&lin(3));
        let m = SymQuadMatrix::new(e).unwrap();
        let err = certify_admissible(&m, &[], 10, 1).unwrap_err();
        assert!(matches!(err, Error::NotAdmissible { clause: 3, .. }), "{err}");
    }

    #[test]
    fn end_to_end_certificates() {
        let f = fp();
        for (delta, genus) in [(4, 6), (5, 5)] {
            let c = sample_prym_certificate(f, delta, 1, DEFAULT_RESIDUE_SAMPLES).unwrap();
            assert_eq!(c.genus, genus);
            assert_eq!(c.admissibility.discriminant.delta, delta);
            assert_eq!(c.admissibility.cover.verdict, CoverVerdict::GeometricallyConnected);
            verify_prym_certificate(&c).unwrap();
        }
    }
}
