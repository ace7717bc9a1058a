//! Strictly contact vector fields of `R^3` with `α = dz + x dy`.
//!
//! A field preserving `α` is determined by its Hamiltonian `H = α(X)`,
//! which cannot depend on `z`. Liouville plane fields lift by adding a
//! constant multiple of the Reeb field `∂z`. The homogeneous fields of
//! degree `d` have an explicit basis of `ad_{X_1}` eigenvectors, with
//! `X_1 = a(x∂x - y∂y)`, and a field `Σ c_d X_d` with `c_1 != 0` is
//! linearized degree by degree.

use num_traits::Zero;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::germclass::normalizing_diffeo;
use crate::linalg::{rank, solve_left};
use crate::liouville2d::{LiouvilleDiffeo, PlaneField};
use crate::{DiffeoGerm, Jet, Rational, TrivarPoly};

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn mono(e: [u32; 3], c: i64) -> TrivarPoly {
    TrivarPoly::monomial(e, int(c))
}

/// `Xx ∂x + Xy ∂y + Xz ∂z`, optionally remembering the Hamiltonian it came
/// from.
#[derive(Clone, Debug, PartialEq)]
pub struct Field3 {
    comps: [TrivarPoly; 3],
    hamiltonian: Option<TrivarPoly>,
}

impl Field3 {
    pub fn new(xx: TrivarPoly, xy: TrivarPoly, xz: TrivarPoly) -> Self {
        Self {
            comps: [xx, xy, xz],
            hamiltonian: None,
        }
    }

    pub fn zero() -> Self {
        Self::new(TrivarPoly::zero(), TrivarPoly::zero(), TrivarPoly::zero())
    }

    pub fn components(&self) -> &[TrivarPoly; 3] {
        &self.comps
    }

    pub fn xx(&self) -> &TrivarPoly {
        &self.comps[X]
    }

    pub fn xy(&self) -> &TrivarPoly {
        &self.comps[Y]
    }

    pub fn xz(&self) -> &TrivarPoly {
        &self.comps[Z]
    }

    pub fn hamiltonian(&self) -> Option<&TrivarPoly> {
        self.hamiltonian.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(TrivarPoly::is_zero)
    }

    /// Largest component degree; `None` for the zero field.
    pub fn degree(&self) -> Option<u32> {
        self.comps.iter().filter_map(TrivarPoly::degree).max()
    }

    fn map(&self, f: impl Fn(&TrivarPoly) -> TrivarPoly) -> Self {
        Self::new(f(&self.comps[0]), f(&self.comps[1]), f(&self.comps[2]))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = self.map(|p| p.scale(s));
        out.hamiltonian = self.hamiltonian.as_ref().map(|h| h.scale(s));
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::new(
            &self.comps[0] + &other.comps[0],
            &self.comps[1] + &other.comps[1],
            &self.comps[2] + &other.comps[2],
        );
        if let (Some(a), Some(b)) = (&self.hamiltonian, &other.hamiltonian) {
            out.hamiltonian = Some(a + b);
        }
        out
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.map(|p| p.homogeneous_part(d))
    }

    pub fn truncate_degree(&self, d: u32) -> Self {
        self.map(|p| p.truncate_degree(d))
    }

    pub fn eval_f64(&self, p: [f64; 3]) -> [f64; 3] {
        [
            self.comps[0].eval_f64(&p),
            self.comps[1].eval_f64(&p),
            self.comps[2].eval_f64(&p),
        ]
    }
}

impl Serialize for Field3 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("Xx", &self.comps[0])?;
        m.serialize_entry("Xy", &self.comps[1])?;
        m.serialize_entry("Xz", &self.comps[2])?;
        m.serialize_entry("hamiltonian", &self.hamiltonian)?;
        m.end()
    }
}

/// `α(X) = Xz + x·Xy`.
pub fn contact_form(field: &Field3) -> TrivarPoly {
    &field.comps[Z] + &(&TrivarPoly::var(X) * &field.comps[Y])
}

/// `X = -H_y ∂x + H_x ∂y + (H - x H_x) ∂z`.
pub fn field_from_hamiltonian(h: &TrivarPoly) -> Result<Field3> {
    if h.depends_on(Z) {
        return Err(Error::HamiltonianDependsOnZ);
    }
    let hx = h.partial(X);
    let mut out = Field3::new(-&h.partial(Y), hx.clone(), h - &(&TrivarPoly::var(X) * &hx));
    out.hamiltonian = Some(h.clone());
    Ok(out)
}

pub fn reeb_field() -> Field3 {
    let mut r = Field3::new(TrivarPoly::zero(), TrivarPoly::zero(), mono([0, 0, 0], 1));
    r.hamiltonian = Some(mono([0, 0, 0], 1));
    r
}

/// Components of `L_X α = d(α(X)) + Xx dy - Xy dx` on `dx, dy, dz`.
pub fn lie_residual_3d(field: &Field3) -> [TrivarPoly; 3] {
    let g = contact_form(field);
    [
        &g.partial(X) - &field.comps[Y],
        &g.partial(Y) + &field.comps[X],
        g.partial(Z),
    ]
}

pub fn is_strictly_contact(field: &Field3) -> bool {
    lie_residual_3d(field).iter().all(TrivarPoly::is_zero)
}

/// Drops `∂z`; the result is tagged Liouville when it has the
/// `(-x f'(y), f(y))` shape (germ order at least `order`).
pub fn project_to_plane(field: &Field3, order: usize) -> Result<PlaneField> {
    let xx = field.comps[X].project::<2>();
    let xy = field.comps[Y].project::<2>();
    match (xx, xy) {
        (Some(xx), Some(xy)) => Ok(PlaneField::from_components(xx, xy, order)),
        _ => Err(Error::ComponentsDependOnZ),
    }
}

/// `(Xx, Xy, c)` for a Liouville plane field `X_f`, with Hamiltonian
/// `x f(y) + c`.
pub fn lift_liouville(field: &PlaneField, c: &Rational) -> Result<Field3> {
    let f = field.liouville_germ()?;
    let mut out = Field3::new(
        field.xx().embed::<3>(),
        field.xy().embed::<3>(),
        TrivarPoly::constant(c.clone()),
    );
    let fx = &TrivarPoly::var(X) * &TrivarPoly::from_univariate(f, Y);
    out.hamiltonian = Some(&fx + &TrivarPoly::constant(c.clone()));
    if !is_strictly_contact(&out) {
        return Err(Error::Invariant("lift is not strictly contact".into()));
    }
    Ok(out)
}

/// `X_d = d x y^{d-1} ∂x - y^d ∂y`, Hamiltonian `-x y^d`.
pub fn liouville_homogeneous(d: u32) -> Field3 {
    assert!(d >= 1, "degree must be positive");
    let mut out = Field3::new(
        mono([1, d - 1, 0], d as i64),
        mono([0, d, 0], -1),
        TrivarPoly::zero(),
    );
    out.hamiltonian = Some(mono([1, d, 0], -1));
    debug_assert!(is_strictly_contact(&out));
    out
}

/// `[X, Y]_i = Σ_j X_j ∂_j Y_i - Y_j ∂_j X_i`.
pub fn lie_bracket(a: &Field3, b: &Field3) -> Field3 {
    let comp = |i: usize| {
        let mut acc = TrivarPoly::zero();
        for j in 0..3 {
            acc = &acc + &(&a.comps[j] * &b.comps[i].partial(j));
            acc = &acc - &(&b.comps[j] * &a.comps[i].partial(j));
        }
        acc
    };
    Field3::new(comp(0), comp(1), comp(2))
}

/// Class and row of a basis field, and its exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisLabel {
    /// 1, 2 or 3.
    pub class: u8,
    /// Row within the class, from 1.
    pub row: u8,
    pub m: Vec<u32>,
}

impl BasisLabel {
    /// Eigenvalue of `ad_{X_1}` on this field, as a multiple of `a`.
    pub fn eigenvalue(&self) -> i64 {
        let m: Vec<i64> = self.m.iter().map(|&v| v as i64).collect();
        match (self.class, self.row) {
            (1, 1) => -m[0] - 1,
            (1, 2) => m[0] + 1,
            (1, 3) => m[0] - m[1],
            _ => m[0] - m[1],
        }
    }
}

/// Basis of homogeneous fields of degree `d` on `R^3`, made of `ad_{X_1}` eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct HomBasis {
    pub degree: u32,
    pub labels: Vec<BasisLabel>,
    pub fields: Vec<Field3>,
    pub counts: [usize; 3],
}

impl HomBasis {
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    /// Exponents of degree `d` in a fixed order; coordinates of a field
    /// are its coefficients on `(monomial, component)` pairs.
    fn monomials(&self) -> Vec<[u32; 3]> {
        monomials(self.degree)
    }

    pub fn vectorize(&self, field: &Field3) -> Vec<Rational> {
        let mons = self.monomials();
        field
            .comps
            .iter()
            .flat_map(|p| mons.iter().map(move |e| p.coeff(e)))
            .collect()
    }

    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        self.fields.iter().map(|f| self.vectorize(f)).collect()
    }

    /// Coordinates of a homogeneous field of this degree.
    pub fn coordinates(&self, field: &Field3) -> Option<Vec<Rational>> {
        solve_left(&self.matrix(), &self.vectorize(field))
    }

    /// Number of basis fields with zero `ad_{X_1}` eigenvalue.
    pub fn kernel_dimension(&self) -> usize {
        self.labels.iter().filter(|l| l.eigenvalue() == 0).count()
    }
}

impl Serialize for HomBasis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            #[serde(flatten)]
            label: &'a BasisLabel,
            eigenvalue: i64,
            field: &'a Field3,
        }
        let entries: Vec<Entry> = self
            .labels
            .iter()
            .zip(&self.fields)
            .map(|(label, field)| Entry {
                label,
                eigenvalue: label.eigenvalue(),
                field,
            })
            .collect();
        let mut st = s.serialize_struct("HomBasis", 5)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("counts", &self.counts)?;
        st.serialize_field("total", &self.len())?;
        st.serialize_field("kernel_dimension", &self.kernel_dimension())?;
        st.serialize_field("fields", &entries)?;
        st.end()
    }
}

/// Exponent triples of total degree `d`, lexicographic.
fn monomials(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for i in 0..=d {
        for j in 0..=d - i {
            out.push([i, j, d - i - j]);
        }
    }
    out
}

/// Pairs `(m1, m2)` with `m1 + m2 = s`, `m1` ascending.
fn pairs(s: u32) -> impl Iterator<Item = [u32; 2]> {
    (0..=s).map(move |m1| [m1, s - m1])
}

/// Triples with `m1 + m2 + m3 = s`, lexicographic.
fn triples(s: u32) -> impl Iterator<Item = [u32; 3]> {
    (0..=s).flat_map(move |m1| (0..=s - m1).map(move |m2| [m1, m2, s - m1 - m2]))
}

pub fn homogeneous_basis(d: u32) -> Result<HomBasis> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let mut labels = Vec::new();
    let mut fields = Vec::new();
    let mut push = |class: u8, row: u8, m: Vec<u32>, f: Field3| {
        labels.push(BasisLabel { class, row, m });
        fields.push(f);
    };
    let z = TrivarPoly::zero;
    for [m1, m2] in pairs(d) {
        push(
            1,
            1,
            vec![m1, m2],
            Field3::new(mono([0, m1, m2], 1), z(), z()),
        );
    }
    for [m1, m2] in pairs(d) {
        push(
            1,
            2,
            vec![m1, m2],
            Field3::new(z(), mono([m1, 0, m2], 1), z()),
        );
    }
    for [m1, m2] in pairs(d) {
        push(
            1,
            3,
            vec![m1, m2],
            Field3::new(z(), z(), mono([m1, m2, 0], 1)),
        );
    }
    let s = d - 1;
    for [m1, m2, m3] in triples(s) {
        let (a, b) = ((1 + m2) as i64, -((1 + m1) as i64));
        push(
            2,
            1,
            vec![m1, m2, m3],
            Field3::new(mono([m1 + 1, m2, m3], a), mono([m1, m2 + 1, m3], b), z()),
        );
    }
    for [m1, m2, m3] in triples(s) {
        let (a, b) = ((1 + m3) as i64, -((1 + m2) as i64));
        push(
            2,
            2,
            vec![m1, m2, m3],
            Field3::new(z(), mono([m1, m2 + 1, m3], a), mono([m1, m2, m3 + 1], b)),
        );
    }
    for [m1, m2, m3] in triples(s) {
        push(
            3,
            1,
            vec![m1, m2, m3],
            Field3::new(
                mono([m1 + 1, m2, m3], 1),
                mono([m1, m2 + 1, m3], 1),
                mono([m1, m2, m3 + 1], 1),
            ),
        );
    }
    let d_us = d as usize;
    let counts = [3 * d_us + 3, d_us * d_us + d_us, (d_us * d_us + d_us) / 2];
    let basis = HomBasis {
        degree: d,
        labels,
        fields,
        counts,
    };
    let dim = 3 * (d_us * d_us + 3 * d_us + 2) / 2;
    if basis.len() != dim || counts.iter().sum::<usize>() != dim {
        return Err(Error::Invariant(format!(
            "basis has {} fields, expected {}",
            basis.len(),
            dim
        )));
    }
    if rank(dim, basis.matrix()) != dim {
        return Err(Error::Invariant("basis is rank deficient".into()));
    }
    Ok(basis)
}

/// `a (x∂x - y∂y)`.
pub fn linear_part(a: &Rational) -> Field3 {
    liouville_homogeneous(1).scale(a)
}

/// Matrix of `ad_{X_1}` on the degree-`d` basis: entry `(i, j)` is the
/// coefficient of basis field `i` in `[X_1, B_j]`. Row-major.
pub fn ad_matrix(a: &Rational, d: u32) -> Result<Vec<Vec<Rational>>> {
    if a.is_zero() {
        return Err(Error::ZeroLinearPart);
    }
    let basis = homogeneous_basis(d)?;
    let x1 = linear_part(a);
    let columns: Vec<Vec<Rational>> = basis
        .fields
        .iter()
        .map(|b| {
            basis
                .coordinates(&lie_bracket(&x1, b))
                .ok_or_else(|| Error::Invariant("bracket left the degree".into()))
        })
        .collect::<Result<_>>()?;
    let n = basis.len();
    Ok((0..n)
        .map(|i| (0..n).map(|j| columns[j][i].clone()).collect())
        .collect())
}

/// Coefficients `c_0, c_1, ..., c_D` with `X = Σ c_d X_d`; `c_0` is always
/// zero (kept so that indices match degrees).
pub fn liouville_coefficients(field: &Field3) -> Result<Vec<Rational>> {
    let top = field.degree().unwrap_or(0);
    let mut c = vec![Rational::zero()];
    for d in 1..=top {
        let part = field.homogeneous_part(d);
        let cd = -part.comps[Y].coeff(&[0, d, 0]);
        let rebuilt = liouville_homogeneous(d).scale(&cd);
        if rebuilt.comps != part.comps {
            return Err(Error::NotInLiouvilleSpan(format!("degree {} part", d)));
        }
        c.push(cd);
    }
    if !field.homogeneous_part(0).is_zero() {
        return Err(Error::NotInLiouvilleSpan("constant part".into()));
    }
    Ok(c)
}

/// `Σ c_d X_d` for `d = 1..`, from `c[d]`.
pub fn liouville_sum(c: &[Rational]) -> Field3 {
    c.iter()
        .enumerate()
        .skip(1)
        .filter(|(_, v)| !v.is_zero())
        .fold(Field3::zero(), |acc, (d, v)| {
            acc.add(&liouville_homogeneous(d as u32).scale(v))
        })
}

/// One homological step: the generator `coefficient · X_degree`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Generator {
    pub degree: u32,
    #[serde(serialize_with = "ser_rational")]
    pub coefficient: Rational,
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Linearization {
    #[serde(serialize_with = "ser_rational")]
    pub a: Rational,
    pub generators: Vec<Generator>,
    /// The transformed field, truncated at the requested degree.
    pub field: Field3,
    /// The coordinate change `(x/h'(y), h(y), z)`, as its generator `h`.
    pub plane_map: LiouvilleDiffeo,
    /// `α` pulled back by the coordinate change, minus `α`, as the jet
    /// multiplying `x dy` (the `dz` and `dx` parts are untouched).
    pub contact_residual: Jet,
}

fn exp_ad(y: &Field3, x: &Field3, n: u32) -> Field3 {
    let mut term = x.clone();
    let mut acc = x.clone();
    let mut k = 1i64;
    loop {
        term = lie_bracket(y, &term)
            .truncate_degree(n)
            .scale(&Rational::new(1.into(), k.into()));
        if term.is_zero() {
            return acc;
        }
        acc = acc.add(&term);
        k += 1;
    }
}

/// Time-one flow of `v(y) ∂y` as a jet of order `n`, via `Σ D^k(y)/k!`
/// with `D = v d/dy`. `v` vanishes to order at least 2, so `D` raises
/// degrees and the coefficient lost to each derivative is never needed.
fn flow_1d(v: &Jet, n: usize) -> Jet {
    let mut term = Jet::var(n);
    let mut acc = term.clone();
    for k in 1..=n {
        let dp = term.derivative().extend_exact(n);
        term = v
            .mul(&dp)
            .scale(&Rational::new(1.into(), (k as i64).into()));
        acc = &acc + &term;
    }
    acc
}

/// Removes every nonlinear term of `X = Σ c_d X_d` through degree `n`, one
/// degree at a time; `a = c_1`.
pub fn normal_form_linearize(field: &Field3, n: u32) -> Result<Linearization> {
    let c = liouville_coefficients(field)?;
    let a = c.get(1).cloned().unwrap_or_else(Rational::zero);
    if a.is_zero() {
        return Err(Error::ZeroLinearPart);
    }
    let order = n as usize;
    let mut x = field.truncate_degree(n);
    let mut generators = Vec::new();
    let mut h = DiffeoGerm::identity(order);
    for d in 2..=n {
        let cd = -x.homogeneous_part(d).comps[Y].coeff(&[0, d, 0]);
        if cd.is_zero() {
            continue;
        }
        let g = cd / (&a * int(1 - d as i64));
        let y = liouville_homogeneous(d).scale(&g);
        x = exp_ad(&y, &x, n);
        // y-component of the generator: -g y^d.
        let v = Jet::monomial(order, d as usize, -g.clone());
        h = h.compose(&DiffeoGerm::new(flow_1d(&v, order))?);
        generators.push(Generator {
            degree: d,
            coefficient: g,
        });
    }
    let x_final = x.truncate_degree(n);
    let residual_c = liouville_coefficients(&x_final)?;
    if residual_c.iter().skip(2).any(|v| !v.is_zero()) {
        return Err(Error::Invariant("nonlinear terms survived".into()));
    }
    let plane_map = LiouvilleDiffeo::new(h);
    let contact_residual = plane_map.pullback_residual();
    Ok(Linearization {
        a,
        generators,
        field: x_final,
        plane_map,
        contact_residual,
    })
}

/// The same coordinate change obtained from the germ side: normalize the
/// projected germ with the RK action.
pub fn germ_route_linearization(field: &Field3, n: u32) -> Result<LiouvilleDiffeo> {
    let plane = project_to_plane(&field.truncate_degree(n), n as usize)?;
    let f = plane.liouville_germ()?.truncate(n as usize);
    let (phi, _) = normalizing_diffeo(&f)?;
    Ok(LiouvilleDiffeo::new(phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(terms: &[([u32; 3], i64)]) -> TrivarPoly {
        TrivarPoly::from_terms(terms.iter().map(|&(e, c)| (e, int(c))))
    }

    #[test]
    fn hamiltonian_examples() {
        let f = field_from_hamiltonian(&tp(&[([1, 1, 0], 1)])).unwrap();
        assert_eq!(
            f.comps,
            [
                tp(&[([1, 0, 0], -1)]),
                tp(&[([0, 1, 0], 1)]),
                TrivarPoly::zero()
            ]
        );
        let f = field_from_hamiltonian(&tp(&[([1, 0, 0], 1)])).unwrap();
        assert_eq!(
            f.comps,
            [
                TrivarPoly::zero(),
                tp(&[([0, 0, 0], 1)]),
                TrivarPoly::zero()
            ]
        );
        let f = field_from_hamiltonian(&tp(&[([2, 0, 0], 1)])).unwrap();
        assert_eq!(
            f.comps,
            [
                TrivarPoly::zero(),
                tp(&[([1, 0, 0], 2)]),
                tp(&[([2, 0, 0], -1)])
            ]
        );
        assert!(is_strictly_contact(&f));
        assert_eq!(contact_form(&f), tp(&[([2, 0, 0], 1)]));
        assert!(matches!(
            field_from_hamiltonian(&tp(&[([0, 0, 1], 1)])),
            Err(Error::HamiltonianDependsOnZ)
        ));
        assert_eq!(
            field_from_hamiltonian(&tp(&[([0, 0, 0], 1)])).unwrap(),
            reeb_field()
        );
    }

    #[test]
    fn residual_examples() {
        let r = lie_residual_3d(&Field3::new(
            tp(&[([1, 0, 0], 1)]),
            TrivarPoly::zero(),
            TrivarPoly::zero(),
        ));
        assert_eq!(
            r,
            [
                TrivarPoly::zero(),
                tp(&[([1, 0, 0], 1)]),
                TrivarPoly::zero()
            ]
        );
        let r = lie_residual_3d(&Field3::new(
            TrivarPoly::zero(),
            TrivarPoly::zero(),
            tp(&[([0, 0, 1], 1)]),
        ));
        assert_eq!(
            r,
            [
                TrivarPoly::zero(),
                TrivarPoly::zero(),
                tp(&[([0, 0, 0], 1)])
            ]
        );
        assert!(is_strictly_contact(&reeb_field()));
    }

    #[test]
    fn projection_and_lift() {
        let a1 = crate::liouville2d::field_from_germ(&Jet::from_ints(6, &[0, 0, 1]));
        let lifted = lift_liouville(&a1, &int(3)).unwrap();
        assert_eq!(project_to_plane(&lifted, 6).unwrap(), a1);
        let flat = lift_liouville(&a1, &int(0)).unwrap();
        assert_eq!(flat.xz(), &TrivarPoly::zero());

        let g =
            project_to_plane(&field_from_hamiltonian(&tp(&[([2, 0, 0], 1)])).unwrap(), 6).unwrap();
        assert_eq!(g.kind(), crate::liouville2d::FieldKind::General);
        let r = project_to_plane(&reeb_field(), 6).unwrap();
        assert!(r.xx().is_zero() && r.xy().is_zero());
        let dz = Field3::new(
            tp(&[([0, 0, 1], 1)]),
            TrivarPoly::zero(),
            TrivarPoly::zero(),
        );
        assert!(matches!(
            project_to_plane(&dz, 6),
            Err(Error::ComponentsDependOnZ)
        ));

        let zero = crate::liouville2d::field_from_germ(&Jet::zero(4));
        let lifted = lift_liouville(&zero, &int(1)).unwrap();
        assert_eq!(lifted.comps, reeb_field().comps);
    }

    #[test]
    fn homogeneous_examples() {
        let x1 = liouville_homogeneous(1);
        assert_eq!(
            x1.comps,
            [
                tp(&[([1, 0, 0], 1)]),
                tp(&[([0, 1, 0], -1)]),
                TrivarPoly::zero()
            ]
        );
        let x2 = liouville_homogeneous(2);
        assert_eq!(
            x2.comps,
            [
                tp(&[([1, 1, 0], 2)]),
                tp(&[([0, 2, 0], -1)]),
                TrivarPoly::zero()
            ]
        );
        assert_eq!(lie_bracket(&x1, &x2).comps, x2.scale(&int(-1)).comps);
        let plane = project_to_plane(&liouville_homogeneous(3), 6).unwrap();
        let model = crate::liouville2d::field_from_germ(&Jet::from_ints(6, &[0, 0, 0, 1]));
        assert_eq!(plane, model.reversed());
    }

    #[test]
    fn bracket_examples() {
        let f = field_from_hamiltonian(&tp(&[([1, 2, 0], 1), ([0, 1, 0], 3)])).unwrap();
        assert!(lie_bracket(&f, &f).is_zero());
        let xdx = Field3::new(
            tp(&[([1, 0, 0], 1)]),
            TrivarPoly::zero(),
            TrivarPoly::zero(),
        );
        let ydy = Field3::new(
            TrivarPoly::zero(),
            tp(&[([0, 1, 0], 1)]),
            TrivarPoly::zero(),
        );
        assert!(lie_bracket(&xdx, &ydy).is_zero());
    }

    #[test]
    fn basis_degree_one() {
        let b = homogeneous_basis(1).unwrap();
        assert_eq!(b.len(), 9);
        assert_eq!(b.counts, [6, 2, 1]);
        let second: Vec<&Field3> = b
            .labels
            .iter()
            .zip(&b.fields)
            .filter(|(l, _)| l.class == 2)
            .map(|(_, f)| f)
            .collect();
        assert_eq!(
            second[0].comps,
            [
                tp(&[([1, 0, 0], 1)]),
                tp(&[([0, 1, 0], -1)]),
                TrivarPoly::zero()
            ]
        );
        assert_eq!(
            second[1].comps,
            [
                TrivarPoly::zero(),
                tp(&[([0, 1, 0], 1)]),
                tp(&[([0, 0, 1], -1)])
            ]
        );
        assert_eq!(homogeneous_basis(2).unwrap().len(), 18);
    }

    #[test]
    fn liouville_field_sits_in_second_class() {
        for d in 1..=6 {
            let b = homogeneous_basis(d).unwrap();
            let i = b
                .labels
                .iter()
                .position(|l| l.class == 2 && l.row == 1 && l.m == vec![0, d - 1, 0])
                .unwrap();
            assert_eq!(b.fields[i].comps, liouville_homogeneous(d).comps);
            assert_eq!(b.labels[i].eigenvalue(), 1 - d as i64);
        }
    }

    #[test]
    fn ad_matrix_examples() {
        let m = ad_matrix(&int(1), 2).unwrap();
        assert!(crate::linalg::is_diagonal(&m));
        assert!(matches!(ad_matrix(&int(0), 2), Err(Error::ZeroLinearPart)));
    }

    #[test]
    fn linearize_examples() {
        let x1 = linear_part(&int(1));
        let out = normal_form_linearize(&x1, 12).unwrap();
        assert!(out.generators.is_empty());
        assert_eq!(out.field.comps, x1.comps);

        let x = x1.add(&liouville_homogeneous(2));
        let out = normal_form_linearize(&x, 12).unwrap();
        assert_eq!(
            out.generators[0],
            Generator {
                degree: 2,
                coefficient: int(-1)
            }
        );
        assert_eq!(out.field.comps, x1.comps);
        assert!(out.contact_residual.is_zero());
        let germ_side = germ_route_linearization(&x, 12).unwrap();
        assert_eq!(germ_side, out.plane_map);

        assert!(matches!(
            normal_form_linearize(&liouville_homogeneous(2), 12),
            Err(Error::ZeroLinearPart)
        ));
        assert!(matches!(
            normal_form_linearize(&reeb_field(), 12),
            Err(Error::NotInLiouvilleSpan(_))
        ));
    }
}
