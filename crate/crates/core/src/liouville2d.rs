//! Plane vector fields preserving the Liouville form `x dy`.
//!
//! Every such field comes from a germ `f(y)`:
//! `X_f = -x f'(y) ∂x + f(y) ∂y`, with first integral `x f(y)`. Changes of
//! coordinates preserving `x dy` are `(x, y) -> (x/h'(y), h(y))`, and they act
//! on the germ by the RK action. This module holds that dictionary plus
//! equilibria, singularity-class tangent spaces, the unfoldings `Q_a` and
//! `T_{a,b}`, and the formal linearization of Liouville diffeomorphisms.

use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::germclass::{reversal_related, rk_action, shifted_row};
use crate::jet::{DiffeoGermOf, JetOf};
use crate::linalg::RowSpace;
use crate::roots::{real_roots, RealRoot, UPoly};
use crate::scalar::{rational_from_f64, Scalar};
use crate::{BivarPoly, DiffeoGerm, Jet, Rational};

const X: usize = 0;
const Y: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Liouville,
    General,
}

/// `Xx ∂x + Xy ∂y` with polynomial components. Liouville fields also carry
/// their germ.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneField {
    germ: Option<Jet>,
    xx: BivarPoly,
    xy: BivarPoly,
}

impl PlaneField {
    /// A field with no germ attached, whatever its components.
    pub fn general(xx: BivarPoly, xy: BivarPoly) -> Self {
        Self { germ: None, xx, xy }
    }

    /// Tags the field as Liouville when `Xy = f(y)` and `Xx = -x f'(y)`;
    /// the germ gets order `max(order, deg f)`.
    pub fn from_components(xx: BivarPoly, xy: BivarPoly, order: usize) -> Self {
        if let Some(f) = xy.to_univariate(Y, order) {
            let candidate = field_from_germ(&f);
            if candidate.xx == xx {
                return candidate;
            }
        }
        Self::general(xx, xy)
    }

    pub fn kind(&self) -> FieldKind {
        if self.germ.is_some() {
            FieldKind::Liouville
        } else {
            FieldKind::General
        }
    }

    pub fn germ(&self) -> Option<&Jet> {
        self.germ.as_ref()
    }

    pub fn liouville_germ(&self) -> Result<&Jet> {
        self.germ.as_ref().ok_or(Error::NotLiouville)
    }

    pub fn xx(&self) -> &BivarPoly {
        &self.xx
    }

    pub fn xy(&self) -> &BivarPoly {
        &self.xy
    }

    /// `-X`, the same field with time reversed. Stays Liouville with germ
    /// `-f`.
    pub fn reversed(&self) -> Self {
        Self {
            germ: self.germ.as_ref().map(|f| -f),
            xx: -&self.xx,
            xy: -&self.xy,
        }
    }

    pub fn eval_f64(&self, p: [f64; 2]) -> [f64; 2] {
        [self.xx.eval_f64(&p), self.xy.eval_f64(&p)]
    }

    /// The first integral `x f(y)` at a point.
    pub fn first_integral(&self, p: [f64; 2]) -> Option<f64> {
        self.germ.as_ref().map(|f| p[0] * f.eval_f64(p[1]))
    }
}

impl Serialize for PlaneField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("kind", &self.kind())?;
        m.serialize_entry("germ", &self.germ)?;
        m.serialize_entry("Xx", &self.xx)?;
        m.serialize_entry("Xy", &self.xy)?;
        m.end()
    }
}

/// `X_f = -x f'(y) ∂x + f(y) ∂y`.
pub fn field_from_germ(f: &Jet) -> PlaneField {
    let df = BivarPoly::from_univariate(&f.derivative(), Y);
    let xx = -&(&BivarPoly::var(X) * &df);
    PlaneField {
        germ: Some(f.clone()),
        xx,
        xy: BivarPoly::from_univariate(f, Y),
    }
}

/// Components of `L_X(x dy) = d(x Xy) + Xx dy - Xy dx` on `dx` and `dy`.
pub fn lie_residual_2d(field: &PlaneField) -> (BivarPoly, BivarPoly) {
    let contraction = &BivarPoly::var(X) * &field.xy;
    (
        &contraction.partial(X) - &field.xy,
        &contraction.partial(Y) + &field.xx,
    )
}

/// `(x, y) -> (x/h'(y), h(y))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiouvilleDiffeo {
    h: DiffeoGerm,
}

impl LiouvilleDiffeo {
    pub fn new(h: DiffeoGerm) -> Self {
        Self { h }
    }

    pub fn identity(order: usize) -> Self {
        Self::new(DiffeoGerm::identity(order))
    }

    pub fn generator(&self) -> &DiffeoGerm {
        &self.h
    }

    /// `self ∘ inner`; the generators compose the same way.
    pub fn compose(&self, inner: &Self) -> Self {
        Self::new(self.h.compose(&inner.h))
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.h.inverse())
    }

    /// `1/h'` as a jet of order `order(h) - 1`.
    fn inv_slope(&self) -> Jet {
        self.h.jet().derivative().reciprocal().expect("h'(0) != 0")
    }

    /// The two components as polynomials in `x, y`; the first is exact
    /// through `y^{N-1}`.
    pub fn components(&self) -> (BivarPoly, BivarPoly) {
        (
            &BivarPoly::var(X) * &BivarPoly::from_univariate(&self.inv_slope(), Y),
            BivarPoly::from_univariate(self.h.jet(), Y),
        )
    }

    /// Pullback of `x dy` minus `x dy`, divided by `x dy`: the jet
    /// `(1/h')·h' - 1`. The `dx` part vanishes identically because the
    /// second component does not involve `x`.
    pub fn pullback_residual(&self) -> Jet {
        let slope = self.h.jet().derivative();
        let prod = self.inv_slope().mul(&slope);
        &prod - &Jet::one(prod.order())
    }

    pub fn apply_f64(&self, p: [f64; 2]) -> [f64; 2] {
        let h = self.h.jet();
        [p[0] / h.derivative().eval_f64(p[1]), h.eval_f64(p[1])]
    }
}

/// The Liouville field that `psi` carries to `X_f`: the field of the germ
/// `rk_action(f, h)`. Equivalently `psi_*(X_g) = X_f` for the returned
/// `X_g`.
pub fn pushforward(psi: &LiouvilleDiffeo, field: &PlaneField) -> Result<PlaneField> {
    let f = field.germ.as_ref().ok_or(Error::KindMismatch)?;
    Ok(field_from_germ(&rk_action(f, &psi.h)))
}

/// `X ~ Y` under reversal of time: the germ of one is RK-equivalent to the
/// negative of the other's.
pub fn time_reversal_related(a: &PlaneField, b: &PlaneField) -> Result<bool> {
    Ok(reversal_related(a.liouville_germ()?, b.liouville_germ()?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EquilibriumType {
    HyperbolicSaddle,
    DegenerateLine,
}

/// Zero `y*` of the germ: a saddle at `(0, y*)` or the line `y = y*`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equilibrium {
    pub y: RealRoot,
    pub kind: EquilibriumType,
    /// `f'(y*)`; exact for rational roots, at the bracket midpoint otherwise.
    pub slope: Rational,
}

impl Equilibrium {
    pub fn is_exact(&self) -> bool {
        matches!(self.y, RealRoot::Exact(_))
    }

    pub fn y_f64(&self) -> f64 {
        self.y.to_f64()
    }

    pub fn location_f64(&self) -> [f64; 2] {
        [0.0, self.y_f64()]
    }

    /// `(-f'(y*), f'(y*))` for saddles.
    pub fn eigenvalues(&self) -> Option<(Rational, Rational)> {
        match self.kind {
            EquilibriumType::HyperbolicSaddle => Some((-self.slope.clone(), self.slope.clone())),
            EquilibriumType::DegenerateLine => None,
        }
    }

    pub fn eigenvalues_f64(&self) -> Option<(f64, f64)> {
        self.eigenvalues().map(|(a, b)| (a.to_f64(), b.to_f64()))
    }
}

fn number(r: &Rational, exact: bool) -> serde_json::Value {
    if exact {
        r.to_string().into()
    } else {
        serde_json::json!(r.to_f64())
    }
}

impl Serialize for Equilibrium {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let exact = self.is_exact();
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("type", &self.kind)?;
        m.serialize_entry(
            "location",
            &[
                number(&Rational::zero(), true),
                number(&self.y.approx(), exact),
            ],
        )?;
        m.serialize_entry(
            "eigenvalues",
            &self
                .eigenvalues()
                .map(|(a, b)| [number(&a, exact), number(&b, exact)]),
        )?;
        m.serialize_entry("exact", &exact)?;
        m.end()
    }
}

/// Zeros of the germ in `[lo, hi]`, ascending. The retained coefficients
/// are taken as an exact polynomial. Rational roots come out exact; the rest
/// are bracketed to width `1e-12`. Degeneracy (`f'(y*) = 0`) is decided
/// exactly through `gcd(f, f')`.
pub fn equilibria(field: &PlaneField, lo: f64, hi: f64) -> Result<Vec<Equilibrium>> {
    let f = field.germ.as_ref().ok_or(Error::NotLiouville)?;
    if f.is_zero() {
        return Err(Error::ZeroGerm { order: f.order() });
    }
    let (Some(lo), Some(hi)) = (rational_from_f64(lo), rational_from_f64(hi)) else {
        return Err(Error::InvalidArgument("interval must be finite".into()));
    };
    let p = UPoly::new(f.coeffs().to_vec());
    let dp = p.derivative();
    let repeated = p.gcd(&dp);
    let square_free = p.square_free();
    let tol = Rational::new(1.into(), 1_000_000_000_000i64.into());
    Ok(real_roots(&p, &lo, &hi, &tol)
        .into_iter()
        .map(|y| {
            let kind = if y.is_root_of(&square_free, &repeated) {
                EquilibriumType::DegenerateLine
            } else {
                EquilibriumType::HyperbolicSaddle
            };
            let slope = dp.eval(&y.approx());
            Equilibrium { y, kind, slope }
        })
        .collect())
}

/// Tangent space to the singularity class of `X_f`: the ideal `<f>`,
/// spanned by `y^i f` and truncated to degree `deg` (columns `1..y^deg`
/// including the constant column 0).
pub fn singularity_class_tangent(f: &Jet, deg: usize) -> Result<RowSpace<Rational>> {
    if f.is_zero() {
        return Err(Error::ZeroGerm { order: f.order() });
    }
    if deg == 0 || deg > f.order() {
        return Err(Error::InvalidArgument(format!(
            "degree {} outside 1..={}",
            deg,
            f.order()
        )));
    }
    Ok(RowSpace::new(
        deg + 1,
        (0..=deg).map(|i| shifted_row(f, i, deg)),
    ))
}

/// `Σ_e a^e g_e(y)`: a germ depending polynomially on parameters
/// `a = (a_1, ..., a_p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GermFamily {
    params: usize,
    terms: Vec<(Vec<u32>, Jet)>,
}

impl GermFamily {
    pub fn new(params: usize, terms: Vec<(Vec<u32>, Jet)>) -> Result<Self> {
        if terms.iter().any(|(e, _)| e.len() != params) {
            return Err(Error::InvalidArgument(
                "exponent length differs from the parameter count".into(),
            ));
        }
        if terms.is_empty() {
            return Err(Error::InvalidArgument("empty family".into()));
        }
        Ok(Self { params, terms })
    }

    /// A family that does not depend on any parameter.
    pub fn constant(f: Jet) -> Self {
        Self {
            params: 0,
            terms: vec![(Vec::new(), f)],
        }
    }

    /// `a y + y^2`.
    pub fn q(order: usize) -> Self {
        Self {
            params: 1,
            terms: vec![
                (vec![0], Jet::monomial(order, 2, Rational::one())),
                (vec![1], Jet::monomial(order, 1, Rational::one())),
            ],
        }
    }

    /// `a y + b y^2 + y^3`.
    pub fn t(order: usize) -> Self {
        Self {
            params: 2,
            terms: vec![
                (vec![0, 0], Jet::monomial(order, 3, Rational::one())),
                (vec![1, 0], Jet::monomial(order, 1, Rational::one())),
                (vec![0, 1], Jet::monomial(order, 2, Rational::one())),
            ],
        }
    }

    pub fn params(&self) -> usize {
        self.params
    }

    fn order(&self) -> usize {
        self.terms.iter().map(|(_, g)| g.order()).min().unwrap()
    }

    pub fn at(&self, a: &[Rational]) -> Result<Jet> {
        if a.len() != self.params {
            return Err(Error::InvalidArgument(format!(
                "expected {} parameters, got {}",
                self.params,
                a.len()
            )));
        }
        let mut out = Jet::zero(self.order());
        for (e, g) in &self.terms {
            let w = e.iter().zip(a).fold(Rational::one(), |acc, (&k, v)| {
                acc * num_traits::pow(v.clone(), k as usize)
            });
            out = &out + &g.scale(&w);
        }
        Ok(out)
    }

    /// `∂/∂a_i` at `a = 0`.
    pub fn derivative_at_origin(&self, i: usize) -> Jet {
        let mut out = Jet::zero(self.order());
        for (e, g) in &self.terms {
            let linear_in_i = e
                .iter()
                .enumerate()
                .all(|(j, &k)| if j == i { k == 1 } else { k == 0 });
            if linear_in_i {
                out = &out + g;
            }
        }
        out
    }
}

/// Outcome of a transversality test.
#[derive(Clone, Debug, PartialEq)]
pub struct Transversality {
    pub transversal: bool,
    pub rank: usize,
    pub codim: usize,
    /// Parameter derivatives reduced modulo the tangent space, on the
    /// monomials `y, ..., y^deg`.
    pub projections: Vec<Vec<Rational>>,
}

impl Serialize for Transversality {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("transversal", &self.transversal)?;
        m.serialize_entry("rank", &self.rank)?;
        m.serialize_entry("codim", &self.codim)?;
        m.serialize_entry("projections", &crate::linalg::to_strings(&self.projections))?;
        m.end()
    }
}

/// Do the parameter derivatives of `family` at the origin span the quotient
/// of `m` (up to degree `deg`) by the tangent space of the model's
/// singularity class?
pub fn transversality_check(
    family: &GermFamily,
    model: &Jet,
    deg: usize,
) -> Result<Transversality> {
    let origin = family.at(&vec![Rational::zero(); family.params])?;
    let n = origin.order().min(model.order());
    if origin.truncate(n) != model.truncate(n) {
        return Err(Error::FamilyMismatch);
    }
    let tangent = singularity_class_tangent(model, deg)?;
    let constants_outside = !tangent.contains_unit(0);
    let codim = deg + 1 - tangent.rank() - usize::from(constants_outside);
    let projections: Vec<Vec<Rational>> = (0..family.params)
        .map(|i| {
            let mut row = shifted_row(&family.derivative_at_origin(i), 0, deg);
            row[0] = Rational::zero();
            tangent.reduce(&row)[1..].to_vec()
        })
        .collect();
    let rank = crate::linalg::rank(deg, projections.clone());
    Ok(Transversality {
        transversal: rank == codim,
        rank,
        codim,
        projections,
    })
}

/// `X_{a y + y^2} = (-a x - 2 x y) ∂x + (a y + y^2) ∂y`.
pub fn unfolding_q(a: &Rational, order: usize) -> PlaneField {
    field_from_germ(&GermFamily::q(order).at(std::slice::from_ref(a)).unwrap())
}

/// `X_{a y + b y^2 + y^3}`.
pub fn unfolding_t(a: &Rational, b: &Rational, order: usize) -> PlaneField {
    field_from_germ(&GermFamily::t(order).at(&[a.clone(), b.clone()]).unwrap())
}

/// Formal linearization of the Liouville diffeomorphism generated by `h`:
/// returns `ψ` with `ψ∘h∘ψ^{-1} = λ y`, `λ = h'(0)`, and the defect jet
/// `ψ∘h∘ψ^{-1} - λ y`. Then `(x/ψ', ψ)` conjugates `(x/h', h)` to
/// `(x/λ, λ y)`.
pub fn liouville_diffeo_linearize<T: Scalar>(
    h: &DiffeoGermOf<T>,
) -> Result<(DiffeoGermOf<T>, JetOf<T>)> {
    let lambda = h.multiplier().clone();
    if lambda.abs().is_one() {
        return Err(Error::ResonantMultiplier(lambda.to_string()));
    }
    let n = h.order();
    // powers[k] = h^k; coefficient j of psi∘h is then a short sum.
    let mut powers = vec![JetOf::monomial(n, 0, T::one()), h.jet().clone()];
    for k in 2..=n {
        powers.push(powers[k - 1].mul(h.jet()));
    }
    let mut psi: JetOf<T> = JetOf::var(n);
    let mut lambda_j = lambda.clone();
    for j in 2..=n {
        lambda_j = lambda_j * lambda.clone();
        // psi_j·λ^j + r_j = λ·psi_j, with r_j from the lower coefficients.
        let r = (1..j).fold(T::zero(), |acc, k| {
            acc + psi.coeff(k).clone() * powers[k].coeff(j).clone()
        });
        let denom = lambda.clone() - lambda_j.clone();
        psi.set_coeff(j, r / denom);
    }
    let psi = DiffeoGermOf::new(psi)?;
    let conj = psi.compose(h).compose(&psi.inverse());
    let residual = conj.jet() - &JetOf::monomial(n, 1, lambda);
    Ok((psi, residual))
}
