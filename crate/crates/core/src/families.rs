//! Fixed families: sextic surfaces double along the edges of the coordinate
//! tetrahedron, plane sextics singular at the vertices of a quadrilateral,
//! the ten-nodal cubic threefold, and polynomial relations among the
//! components of a map.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::PrimeField;
use crate::form::{Form, FormRecord};
use crate::interpolation::{system_dim, FatPointScheme};
use crate::matrix::FpMatrix;
use crate::monomial::MonomialBasis;
use crate::severi::certify_node;

/// The six edges `{x_i = x_j = 0}`, `i < j`.
pub const TETRAHEDRON_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn product(field: PrimeField, nvars: usize, vars: &[usize]) -> Form {
    let mut e = vec![0u32; nvars];
    for &v in vars {
        e[v] += 1;
    }
    Form::monomial(field, &e, 1)
}

/// `q x1 x2 x3 x4 + a1 (x2 x3 x4)^2 + a2 (x1 x3 x4)^2 + a3 (x1 x2 x4)^2 + a4 (x1 x2 x3)^2`.
pub fn enriques_sextic(q: &Form, a: [u64; 4]) -> Form {
    assert_eq!((q.nvars(), q.degree()), (4, 2), "quadratic quaternary form expected");
    let field = q.field();
    let mut f = q.mul(&product(field, 4, &[0, 1, 2, 3]));
    for (k, &ak) in a.iter().enumerate() {
        let others: Vec<usize> = (0..4).filter(|&v| v != k).collect();
        f = f.add(&product(field, 4, &others).pow(2).scale(ak));
    }
    f
}

/// `f` restricted to the edge `{x_i = x_j = 0}`, parametrized by `(s, t)`.
fn restrict_to_edge(f: &Form, i: usize, j: usize) -> Form {
    let field = f.field();
    let mut free = (0..4).filter(|&v| v != i && v != j);
    let (s, t) = (free.next().unwrap(), free.next().unwrap());
    let images: Vec<Form> = (0..4)
        .map(|v| match v {
            _ if v == s => Form::var(field, 2, 0),
            _ if v == t => Form::var(field, 2, 1),
            _ => Form::zero(field, 2, 1),
        })
        .collect();
    f.compose(&images)
}

/// The union of the six edges is in the singular locus of `f`.
pub fn edge_partials_vanish(f: &Form) -> bool {
    let grad = f.gradient();
    TETRAHEDRON_EDGES.iter().all(|&(i, j)| grad.iter().all(|g| restrict_to_edge(g, i, j).is_zero()))
}

pub fn edges_in_double_locus(f: &Form) -> bool {
    TETRAHEDRON_EDGES.iter().all(|&(i, j)| f.in_square_of_coordinate_ideal(i, j))
}

/// The 14 spanning members: `m x1 x2 x3 x4` for quadratic monomials `m`,
/// then the four squares.
pub fn enriques_generators(field: PrimeField) -> Vec<Form> {
    let quad = MonomialBasis::get(4, 2);
    let mut gens: Vec<Form> = quad.iter().map(|e| enriques_sextic(&Form::monomial(field, e, 1), [0; 4])).collect();
    let zero = Form::zero(field, 4, 2);
    for k in 0..4 {
        let mut a = [0; 4];
        a[k] = 1;
        gens.push(enriques_sextic(&zero, a));
    }
    gens
}

/// Projective dimension of the span of `forms` (common degree and ring).
pub fn span_dim(forms: &[Form]) -> i64 {
    let field = forms[0].field();
    let rows: Vec<Vec<u64>> = forms.iter().map(|f| f.coeffs().to_vec()).collect();
    FpMatrix::from_row_list(field, rows[0].len(), rows).rank() as i64 - 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnriquesReport {
    pub member: FormRecord,
    pub double_along_edges: bool,
    pub edge_partials_vanish: bool,
    pub family_dim: i64,
}

pub fn enriques_report<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> EnriquesReport {
    let q = Form::from_coeffs(field, 4, 2, (0..10).map(|_| field.random(rng)).collect()).unwrap();
    let a = std::array::from_fn(|_| field.random(rng));
    let f = enriques_sextic(&q, a);
    EnriquesReport {
        member: f.to_record(),
        double_along_edges: edges_in_double_locus(&f),
        edge_partials_vanish: edge_partials_vanish(&f),
        family_dim: span_dim(&enriques_generators(field)),
    }
}

/// `l1 = x1, l2 = x2, l3 = x3, l4 = x1 + x2 + x3`.
pub fn quadrilateral(field: PrimeField) -> [Form; 4] {
    let l = |c: [u64; 3]| Form::linear(field, &c);
    [l([1, 0, 0]), l([0, 1, 0]), l([0, 0, 1]), l([1, 1, 1])]
}

/// Pairwise intersections `l_a = l_b = 0` in the order of index pairs.
pub fn quadrilateral_vertices(field: PrimeField) -> [[u64; 3]; 6] {
    let m = field.neg(1);
    [[0, 0, 1], [0, 1, 0], [0, 1, m], [1, 0, 0], [1, 0, m], [1, m, 0]]
}

/// `l1 l2 l3 l4 q + z1 (l1 l2 l3)^2 + z2 (l1 l2 l4)^2 + z3 (l1 l3 l4)^2 + z4 (l2 l3 l4)^2`,
/// with `q` a quadratic form in `(l1, l2, l3)`.
pub fn cayley_sextic(q: &Form, z: [u64; 4]) -> Form {
    assert_eq!((q.nvars(), q.degree()), (3, 2), "quadratic ternary form expected");
    let field = q.field();
    let l = quadrilateral(field);
    let prod = |idx: &[usize]| idx.iter().fold(Form::constant(field, 3, 1), |acc, &i| acc.mul(&l[i]));
    let q = q.compose(&[l[0].clone(), l[1].clone(), l[2].clone()]);
    let mut f = prod(&[0, 1, 2, 3]).mul(&q);
    for (zk, idx) in z.iter().zip([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]) {
        f = f.add(&prod(&idx).pow(2).scale(*zk));
    }
    f
}

pub fn cayley_generators(field: PrimeField) -> Vec<Form> {
    let mut gens: Vec<Form> =
        MonomialBasis::get(3, 2).iter().map(|e| cayley_sextic(&Form::monomial(field, e, 1), [0; 4])).collect();
    let zero = Form::zero(field, 3, 2);
    for k in 0..4 {
        let mut z = [0; 4];
        z[k] = 1;
        gens.push(cayley_sextic(&zero, z));
    }
    gens
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyReport {
    pub member: FormRecord,
    pub family_dim: i64,
    /// `dim |I_Z^2(6)|` for the six vertices.
    pub singular_system_dim: i64,
    pub nodes_at_vertices: Vec<bool>,
}

pub fn cayley_report<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> Result<CayleyReport> {
    let q = Form::from_coeffs(field, 3, 2, (0..6).map(|_| field.random(rng)).collect())?;
    let z = std::array::from_fn(|_| field.random(rng));
    let f = cayley_sextic(&q, z);
    let vertices = quadrilateral_vertices(field);
    let scheme = FatPointScheme::uniform(field, &vertices, 2)?;
    Ok(CayleyReport {
        member: f.to_record(),
        family_dim: span_dim(&cayley_generators(field)),
        singular_system_dim: system_dim(field, &scheme, 6)?,
        nodes_at_vertices: vertices.iter().map(|v| certify_node(&f, v)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegreReport {
    /// Singular points, each with first coordinate `1`.
    pub points: Vec<Vec<i64>>,
    /// Solutions of the same system with five coordinates.
    pub five_coordinate_points: usize,
}

/// Singular points of `{sum y_i = sum y_i^3 = 0}` in `P^{n-1}`.
///
/// A point is singular iff `3 y_i^2` is the same for every `i`, so
/// `y = s (e_1, ..., e_n)` with signs `e_i`; the linear equation forces as
/// many plus as minus signs, and then the cubic vanishes.
pub fn fermat_cubic_section_singular_points(n: usize) -> Vec<Vec<i64>> {
    (0..1u32 << (n - 1))
        .map(|mask| {
            let mut y = vec![1i64];
            y.extend((1..n).map(|i| if mask >> (i - 1) & 1 == 1 { -1 } else { 1 }));
            y
        })
        .filter(|y| y.iter().sum::<i64>() == 0 && y.iter().map(|v| v * v * v).sum::<i64>() == 0)
        .collect()
}

pub fn segre_primal() -> SegreReport {
    SegreReport {
        points: fermat_cubic_section_singular_points(6),
        five_coordinate_points: fermat_cubic_section_singular_points(5).len(),
    }
}

/// `sum y_i^3` and `sum y_i` in six variables.
pub fn segre_equations(field: PrimeField) -> (Form, Form) {
    let cubic = (0..6).fold(Form::zero(field, 6, 3), |acc, i| acc.add(&Form::var(field, 6, i).pow(3)));
    (cubic, Form::linear(field, &[1; 6]))
}

/// Basis of the degree-`k` relations among `maps`, as forms in one variable
/// per map. Rows are evaluations at `2 N` random points, `N` the number of
/// monomials.
pub fn find_image_relation<R: Rng + ?Sized>(maps: &[Form], k: u32, rng: &mut R) -> Vec<Form> {
    let field = maps[0].field();
    let n = maps[0].nvars();
    let basis = MonomialBasis::get(maps.len(), k);
    let rows: Vec<Vec<u64>> = (0..2 * basis.len())
        .map(|_| {
            let pt: Vec<u64> = (0..n).map(|_| field.random(rng)).collect();
            let vals: Vec<u64> = maps.iter().map(|m| m.eval(&pt)).collect();
            basis
                .iter()
                .map(|e| e.iter().zip(&vals).fold(1, |acc, (&ei, &v)| field.mul(acc, field.pow(v, ei as u64))))
                .collect()
        })
        .collect();
    let m = FpMatrix::from_row_list(field, basis.len(), rows);
    m.kernel_basis()
        .into_iter()
        .map(|v| Form::from_coeffs(field, maps.len(), k, v).unwrap().normalized())
        .collect()
}

/// `x1^2 x2^2 + x3^2 x4^2`, `x1^2 x3^2 + x2^2 x4^2`, `x1^2 x4^2 + x2^2 x3^2`,
/// `x1 x2 x3 x4`, `sum x_i^4`.
pub fn invariant_quartics(field: PrimeField) -> [Form; 5] {
    let sq = |i: usize, j: usize| product(field, 4, &[i, i, j, j]);
    let pair = |a: (usize, usize), b: (usize, usize)| sq(a.0, a.1).add(&sq(b.0, b.1));
    let quartic = (0..4).fold(Form::zero(field, 4, 4), |acc, i| acc.add(&Form::var(field, 4, i).pow(4)));
    [pair((0, 1), (2, 3)), pair((0, 2), (1, 3)), pair((0, 3), (1, 2)), product(field, 4, &[0, 1, 2, 3]), quartic]
}

/// `4e^3 - a^2 e - b^2 e - c^2 e + abc + d^2 e` in `(a, b, c, d, e)`, reading
/// the stray superscript as absent.
pub fn displayed_cubic_reading(field: PrimeField) -> Form {
    let m = |e: [u32; 5], c: i64| (e.to_vec(), c);
    Form::from_terms(
        field,
        5,
        3,
        &[
            m([0, 0, 0, 0, 3], 4),
            m([2, 0, 0, 0, 1], -1),
            m([0, 2, 0, 0, 1], -1),
            m([0, 0, 2, 0, 1], -1),
            m([1, 1, 1, 0, 0], 1),
            m([0, 0, 0, 2, 1], 1),
        ],
    )
    .unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub degree: u32,
    pub relations: Vec<FormRecord>,
    /// Signed coefficients of the first relation.
    pub first_relation_terms: Vec<(Vec<u32>, i64)>,
    pub fresh_points: usize,
    pub vanish_at_fresh_points: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantQuarticReport {
    pub cubic: RelationReport,
    /// Least-degree search beyond the cubic one.
    pub quartic: RelationReport,
    /// Some cubic relation is proportional to [`displayed_cubic_reading`]
    /// in `(a, b, c, d, e) = (u1, u2, u3, u4, u5)` or with `d = 2 u4`.
    pub matches_displayed_reading: bool,
}

pub fn relations_vanish<R: Rng + ?Sized>(maps: &[Form], relations: &[Form], points: usize, rng: &mut R) -> bool {
    let field = maps[0].field();
    (0..points).all(|_| {
        let pt: Vec<u64> = (0..maps[0].nvars()).map(|_| field.random(rng)).collect();
        let vals: Vec<u64> = maps.iter().map(|m| m.eval(&pt)).collect();
        relations.iter().all(|r| r.eval(&vals) == 0)
    })
}

pub const FRESH_POINTS: usize = 200;

pub fn relation_report<R: Rng + ?Sized>(maps: &[Form], degree: u32, rng: &mut R) -> (Vec<Form>, RelationReport) {
    let field = maps[0].field();
    let relations = find_image_relation(maps, degree, rng);
    let vanish = relations_vanish(maps, &relations, FRESH_POINTS, rng);
    let first_relation_terms = relations
        .first()
        .map(|r| r.terms().map(|(e, c)| (e.to_vec(), field.lift(c))).collect())
        .unwrap_or_default();
    let report = RelationReport {
        degree,
        relations: relations.iter().map(Form::to_record).collect(),
        first_relation_terms,
        fresh_points: FRESH_POINTS,
        vanish_at_fresh_points: vanish,
    };
    (relations, report)
}

pub fn invariant_quartic_relation<R: Rng + ?Sized>(field: PrimeField, rng: &mut R) -> InvariantQuarticReport {
    let maps = invariant_quartics(field);
    let (cubics, cubic) = relation_report(&maps, 3, rng);
    let (_, quartic) = relation_report(&maps, 4, rng);
    let reading = displayed_cubic_reading(field);
    let half = field.inv(2);
    let rescaled = reading.substitute_linear(&[
        vec![1, 0, 0, 0, 0],
        vec![0, 1, 0, 0, 0],
        vec![0, 0, 1, 0, 0],
        vec![0, 0, 0, half, 0],
        vec![0, 0, 0, 0, 1],
    ]);
    let matches_displayed_reading = cubics.iter().any(|r| r.proportional(&reading) || r.proportional(&rescaled));
    InvariantQuarticReport { cubic, quartic, matches_displayed_reading }
}
