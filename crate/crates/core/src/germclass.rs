//! Restricted contact (RK) equivalence of univariate germs.
//!
//! `g = (1/φ')·(f∘φ)` for a diffeomorphism germ `φ` fixing the origin. This
//! module provides the group action, the classification by order of
//! vanishing, two codimension computations, the determinacy test, and
//! explicit normalizing diffeomorphisms.
//!
//! The action is the pullback of the one-dimensional vector field
//! `f(x)·∂/∂x`, so the residue of `dx/f` at the origin is preserved by it.
//! For `k >= 2` that residue is a genuine modulus: a germ of order `k` whose
//! residue is nonzero cannot be brought to `±x^k`, and [`normalizing_diffeo`]
//! reports [`Error::Obstructed`] at degree `2k-1` instead of returning a
//! wrong certificate.

use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::jet::{DiffeoGermOf, JetOf};
use crate::linalg::RowSpace;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum GermKind<T> {
    /// Nonvanishing at the origin; equivalent to the constant 1.
    Unit,
    /// Order one with linear coefficient `a`; equivalent to `a·x`.
    Linear(T),
    /// Order `k >= 2`; equivalent to `sign·x^k`. The sign is always `+1`
    /// for even `k`.
    Power { k: usize, sign: i8 },
    /// Flat through the retained order.
    Undetermined { order: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Codim {
    Finite(usize),
    NotApplicable,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GermClassOf<T> {
    pub kind: GermKind<T>,
    pub codim: Codim,
}

impl<T: Scalar> GermClassOf<T> {
    /// Class symbol: `""` for units, `A0` for linear germs, `A{k-1}` for
    /// order `k`.
    pub fn symbol(&self) -> String {
        match &self.kind {
            GermKind::Unit => String::new(),
            GermKind::Linear(_) => "A0".into(),
            GermKind::Power { k, .. } => format!("A{}", k - 1),
            GermKind::Undetermined { .. } => "undetermined".into(),
        }
    }

    pub fn sign(&self) -> Option<i8> {
        match self.kind {
            GermKind::Power { sign, .. } => Some(sign),
            _ => None,
        }
    }

    pub fn is_determined(&self) -> bool {
        !matches!(self.kind, GermKind::Undetermined { .. })
    }

    /// The model germ `1`, `a·x` or `±x^k` at the given order.
    pub fn normal_form(&self, order: usize) -> Option<JetOf<T>> {
        match &self.kind {
            GermKind::Unit => Some(JetOf::one(order)),
            GermKind::Linear(a) => Some(JetOf::monomial(order, 1, a.clone())),
            GermKind::Power { k, sign } => Some(JetOf::monomial(
                order,
                *k,
                T::from_i64(*sign as i64).unwrap(),
            )),
            GermKind::Undetermined { .. } => None,
        }
    }
}

impl<T: Scalar> Serialize for GermClassOf<T> {
    /// `{"class": "A2", "sign": -1, "codim": 2, "a": null}`.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("class", &self.symbol())?;
        m.serialize_entry("sign", &self.sign())?;
        match self.codim {
            Codim::Finite(c) => m.serialize_entry("codim", &c)?,
            Codim::NotApplicable => m.serialize_entry("codim", "NotApplicable")?,
            Codim::Undetermined => m.serialize_entry("codim", "Undetermined")?,
        }
        let a = match &self.kind {
            GermKind::Linear(a) => Some(a.to_string()),
            _ => None,
        };
        m.serialize_entry("a", &a)?;
        if let GermKind::Undetermined { order } = self.kind {
            m.serialize_entry("order", &order)?;
        }
        m.end()
    }
}

/// `(1/φ')·(f∘φ)`. The result is exact through order
/// `min(order(f), order(φ) - 1)`, one less than `φ` because of `φ'`.
pub fn rk_action<T: Scalar>(f: &JetOf<T>, phi: &DiffeoGermOf<T>) -> JetOf<T> {
    let composed = f.compose(phi.jet()).expect("diffeo germs fix the origin");
    let inv_deriv = phi
        .jet()
        .derivative()
        .reciprocal()
        .expect("diffeo germs have nonzero linear term");
    composed.mul(&inv_deriv)
}

pub fn classify_germ<T: Scalar>(f: &JetOf<T>) -> GermClassOf<T> {
    match f.order_of_vanishing() {
        None => GermClassOf {
            kind: GermKind::Undetermined { order: f.order() },
            codim: Codim::Undetermined,
        },
        Some(0) => GermClassOf {
            kind: GermKind::Unit,
            codim: Codim::NotApplicable,
        },
        Some(1) => GermClassOf {
            kind: GermKind::Linear(f.coeff(1).clone()),
            codim: Codim::Finite(0),
        },
        Some(k) => {
            let sign = if k % 2 == 0 || f.coeff(k).is_positive() {
                1
            } else {
                -1
            };
            GermClassOf {
                kind: GermKind::Power { k, sign },
                codim: Codim::Finite(k - 1),
            }
        }
    }
}

fn nonzero<T: Scalar>(f: &JetOf<T>) -> Result<()> {
    if f.is_zero() {
        Err(Error::ZeroGerm { order: f.order() })
    } else {
        Ok(())
    }
}

fn check_deg<T: Scalar>(f: &JetOf<T>, deg: usize) -> Result<()> {
    if deg > f.order() || deg == 0 {
        return Err(Error::InvalidArgument(format!(
            "degree {} outside 1..={}",
            deg,
            f.order()
        )));
    }
    Ok(())
}

/// Coefficients `0..=deg` of `x^shift · g`.
pub(crate) fn shifted_row<T: Scalar>(g: &JetOf<T>, shift: usize, deg: usize) -> Vec<T> {
    (0..=deg)
        .map(|d| {
            if d >= shift && d - shift <= g.order() {
                g.coeff(d - shift).clone()
            } else {
                T::zero()
            }
        })
        .collect()
}

/// Row-reduced span of `{x^i·f : i >= 0} ∪ {x^j·f' : j >= 1}` truncated to
/// degree `deg` (columns are the monomials `1, x, ..., x^deg`).
pub fn rk_tangent_space<T: Scalar>(f: &JetOf<T>, deg: usize) -> Result<RowSpace<T>> {
    nonzero(f)?;
    check_deg(f, deg)?;
    let df = f.derivative();
    let rows = (0..=deg)
        .map(|i| shifted_row(f, i, deg))
        .chain((1..=deg).map(|j| shifted_row(&df, j, deg)));
    Ok(RowSpace::new(deg + 1, rows))
}

/// `dim(m / (T_RK f ∩ m))` computed in the polynomials of degree `<= deg`.
pub fn rk_codim_linear<T: Scalar>(f: &JetOf<T>, deg: usize) -> Result<usize> {
    let tangent = rk_tangent_space(f, deg)?;
    let leaves_m = tangent.basis().iter().any(|r| !r[0].is_zero());
    let span_with_m = deg + usize::from(leaves_m);
    Ok(span_with_m - tangent.rank())
}

/// Sufficient determinacy test `m^{k+1} ⊆ m·T_RK f`, decided in the
/// polynomials of degree `<= order(f)`.
pub fn is_k_determined<T: Scalar>(f: &JetOf<T>, k: usize) -> Result<bool> {
    nonzero(f)?;
    let n = f.order();
    if k + 1 > n {
        return Err(Error::InvalidArgument(format!(
            "k + 1 = {} exceeds the jet order {}",
            k + 1,
            n
        )));
    }
    let df = f.derivative();
    let rows = (1..=n)
        .map(|i| shifted_row(f, i, n))
        .chain((2..=n).map(|j| shifted_row(&df, j, n)));
    let space = RowSpace::new(n + 1, rows);
    Ok((k + 1..=n).all(|d| space.contains_unit(d)))
}

/// Residue of `dx/f` at the origin: the coefficient of `x^{k-1}` in
/// `x^k / f` for a germ of order `k`. It is invariant under the RK action and
/// vanishes on the models `±x^k`; for `k = 1` it equals `1/a`. Returns `None`
/// when the jet is too short (`2k - 1 > order`) or flat, and zero for units.
pub fn rk_residue<T: Scalar>(f: &JetOf<T>) -> Option<T> {
    let k = f.order_of_vanishing()?;
    if k == 0 {
        return Some(T::zero());
    }
    if 2 * k - 1 > f.order() {
        return None;
    }
    let unit = f.shift_down(k)?;
    let inv = unit.reciprocal().ok()?;
    Some(inv.coeff(k - 1).clone())
}

/// A diffeomorphism `φ` with `rk_action(f, φ)` equal to the normal form of
/// `classify_germ(f)` through order `order(f) - 1`.
///
/// Units use the inverse of `K = ∫ 1/f` (so that `φ' = f(φ)`). Linear and
/// power germs are solved order by order from `f(φ) = σ x^k φ'`: the
/// leading coefficient from `c_k p^{k-1} = σ`, then
/// `σ(k - m - 1)·p_{m+1} = -[f(φ)]_{k+m}` for `m >= 1`. At `m = k - 1` the
/// left side vanishes; a nonzero right side there is the residue
/// obstruction. Coefficients that the retained jet cannot determine are set
/// to zero.
pub fn normalizing_diffeo<T: Scalar>(f: &JetOf<T>) -> Result<(DiffeoGermOf<T>, GermClassOf<T>)> {
    let class = classify_germ(f);
    let n = f.order();
    let phi = match &class.kind {
        GermKind::Undetermined { order } => return Err(Error::ZeroGerm { order: *order }),
        GermKind::Unit => {
            if n == 0 {
                return Err(Error::InvalidArgument("order 0 jet has no diffeo".into()));
            }
            let k = f.reciprocal()?.integrate().truncate(n);
            DiffeoGermOf::new(k)?.inverse()
        }
        GermKind::Linear(a) => solve_rk_homological(f, 1, a.clone(), T::one())?,
        GermKind::Power { k, sign } => {
            let sigma = T::from_i64(*sign as i64).unwrap();
            let target = sigma.clone() / f.coeff(*k).clone();
            let exponent = (*k - 1) as u32;
            let p1 = target
                .exact_root(exponent)
                .ok_or_else(|| Error::IrrationalScaling {
                    exponent,
                    target: target.to_string(),
                })?;
            solve_rk_homological(f, *k, sigma, p1)?
        }
    };
    Ok((phi, class))
}

fn solve_rk_homological<T: Scalar>(
    f: &JetOf<T>,
    k: usize,
    sigma: T,
    p1: T,
) -> Result<DiffeoGermOf<T>> {
    let n = f.order();
    let mut phi = JetOf::monomial(n, 1, p1);
    for m in 1..=n.saturating_sub(k) {
        let r = f.compose(&phi)?.coeff(k + m).clone();
        let slope = sigma.clone() * T::from_i64(k as i64 - m as i64 - 1).unwrap();
        if slope.is_zero() {
            if !r.is_zero() {
                let residue = rk_residue(f).unwrap_or(r);
                return Err(Error::Obstructed {
                    degree: k + m,
                    residue: residue.to_string(),
                });
            }
            continue;
        }
        phi.set_coeff(m + 1, -r / slope);
    }
    DiffeoGermOf::new(phi)
}

/// Verifies a normalizing diffeo: `rk_action(f, φ)` against the normal form
/// through the order the action can certify.
pub fn certify_normal_form<T: Scalar>(
    f: &JetOf<T>,
    phi: &DiffeoGermOf<T>,
    class: &GermClassOf<T>,
) -> bool {
    let image = rk_action(f, phi);
    match class.normal_form(image.order()) {
        Some(nf) => image == nf,
        None => false,
    }
}

/// `f` and `g` define fields related by a reversal of time: `f` is
/// RK-equivalent to `-g`, decided on the classes.
pub fn reversal_related<T: Scalar>(f: &JetOf<T>, g: &JetOf<T>) -> bool {
    let cf = classify_germ(f);
    let cg = classify_germ(&-g);
    cf.is_determined() && cf.kind == cg.kind
}

/// Multiplicative identity check used by tests and the CLI: is `f` a unit
/// with `f(0) = 1`?
pub fn is_one<T: Scalar>(f: &JetOf<T>) -> bool {
    f.coeff(0).is_one() && f.coeffs()[1..].iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{DiffeoGerm, GermClass, Jet, Rational};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn jet(order: usize, c: &[i64]) -> Jet {
        Jet::from_ints(order, c)
    }

    fn x_over_1px(n: usize) -> DiffeoGerm {
        DiffeoGerm::new(Jet::var(n).mul(&jet(n, &[1, 1]).reciprocal().unwrap())).unwrap()
    }

    #[test]
    fn action_examples() {
        let g = rk_action(&Jet::var(12), &x_over_1px(12));
        assert_eq!(g, jet(11, &[0, 1, 1]));

        let f = jet(10, &[3, -1, 0, 4]);
        assert_eq!(rk_action(&f, &DiffeoGerm::identity(10)), f.truncate(9));

        let cube = jet(6, &[0, 0, 0, 1]);
        let half = DiffeoGerm::scaling(6, q(1, 2)).unwrap();
        assert_eq!(rk_action(&cube, &half), Jet::monomial(5, 3, q(1, 4)));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_germ(&jet(8, &[5, 1])).kind, GermKind::Unit);
        let lin = classify_germ(&jet(8, &[0, 2, 0, 1]));
        assert_eq!(lin.kind, GermKind::Linear(q(2, 1)));
        assert_eq!(lin.codim, Codim::Finite(0));
        let a2 = classify_germ(&jet(8, &[0, 0, 0, -1, 0, 1]));
        assert_eq!(a2.kind, GermKind::Power { k: 3, sign: -1 });
        assert_eq!(a2.codim, Codim::Finite(2));
        assert_eq!(a2.symbol(), "A2");
        // even order: sign absorbed
        let a3 = classify_germ(&jet(8, &[0, 0, 0, 0, -7]));
        assert_eq!(a3.kind, GermKind::Power { k: 4, sign: 1 });
        let flat = classify_germ(&Jet::zero(12));
        assert_eq!(flat.kind, GermKind::Undetermined { order: 12 });
    }

    #[test]
    fn class_json() {
        let c: GermClass = classify_germ(&jet(8, &[0, 0, 0, -1]));
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"class":"A2","sign":-1,"codim":2,"a":null}"#
        );
        let c: GermClass = classify_germ(&jet(8, &[2]));
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"class":"","sign":null,"codim":"NotApplicable","a":null}"#
        );
        let c: GermClass = classify_germ(&Jet::new(8, [q(0, 1), q(-3, 2)]));
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"class":"A0","sign":null,"codim":0,"a":"-3/2"}"#
        );
    }

    fn monomial_span(deg: usize, from: usize) -> RowSpace<Rational> {
        RowSpace::new(
            deg + 1,
            (from..=deg).map(|d| {
                let mut r = vec![q(0, 1); deg + 1];
                r[d] = q(1, 1);
                r
            }),
        )
    }

    #[test]
    fn tangent_space_examples() {
        let t = rk_tangent_space(&jet(12, &[0, 0, 1]), 10).unwrap();
        assert_eq!(t, monomial_span(10, 2));
        let t = rk_tangent_space(&Jet::var(12), 10).unwrap();
        assert_eq!(t, monomial_span(10, 1));
        let t = rk_tangent_space(&jet(12, &[0, 0, 0, 1]), 10).unwrap();
        assert_eq!(t, monomial_span(10, 3));
        assert!(matches!(
            rk_tangent_space(&Jet::zero(12), 10),
            Err(Error::ZeroGerm { .. })
        ));
    }

    #[test]
    fn codim_examples() {
        assert_eq!(rk_codim_linear(&jet(12, &[0, 0, 1]), 12).unwrap(), 1);
        assert_eq!(rk_codim_linear(&Jet::var(12), 12).unwrap(), 0);
        assert_eq!(
            rk_codim_linear(&jet(12, &[0, 0, 0, 0, 1, 0, 0, 1]), 12).unwrap(),
            3
        );
        assert_eq!(rk_codim_linear(&jet(12, &[2, 1]), 12).unwrap(), 0);
    }

    #[test]
    fn determinacy_examples() {
        assert!(is_k_determined(&Jet::var(12), 1).unwrap());
        assert!(is_k_determined(&jet(12, &[0, 0, 1]), 2).unwrap());
        assert!(!is_k_determined(&jet(12, &[0, 0, 1]), 1).unwrap());
        assert!(is_k_determined(&jet(12, &[0, 0, 1]), 12).is_err());
    }

    #[test]
    fn determinacy_threshold_on_monomials() {
        for k in 1..=9 {
            let f = Jet::monomial(12, k, q(1, 1));
            for j in 0..=11 {
                assert_eq!(is_k_determined(&f, j).unwrap(), j >= k, "k={k} j={j}");
            }
        }
    }

    #[test]
    fn normalize_examples() {
        // x + x^2 -> x/(1-x)
        let f = jet(12, &[0, 1, 1]);
        let (phi, class) = normalizing_diffeo(&f).unwrap();
        assert_eq!(
            phi.jet(),
            &jet(12, &[0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1])
        );
        assert_eq!(rk_action(&f, &phi), Jet::var(11));
        assert_eq!(class.kind, GermKind::Linear(q(1, 1)));

        let f = jet(12, &[0, 0, 0, -4]);
        let (phi, _) = normalizing_diffeo(&f).unwrap();
        assert_eq!(phi.jet(), &Jet::monomial(12, 1, q(1, 2)));
        assert_eq!(rk_action(&f, &phi), Jet::monomial(11, 3, q(-1, 1)));

        let f = Jet::monomial(12, 1, q(-7, 3));
        let (phi, _) = normalizing_diffeo(&f).unwrap();
        assert_eq!(phi, DiffeoGerm::identity(12));
    }

    #[test]
    fn unit_normalization_uses_inverse_antiderivative() {
        let f = jet(12, &[1, 1]);
        let (phi, class) = normalizing_diffeo(&f).unwrap();
        assert_eq!(class.kind, GermKind::Unit);
        assert_eq!(rk_action(&f, &phi), Jet::one(11));
        // The antiderivative K of 1/f itself does not certify: f(K)·f != 1.
        let k = DiffeoGerm::new(f.reciprocal().unwrap().integrate().truncate(12)).unwrap();
        assert_ne!(rk_action(&f, &k), Jet::one(11));
    }

    #[test]
    fn even_power_with_negative_lead_flips_orientation() {
        let f = jet(12, &[0, 0, -3]);
        let (phi, class) = normalizing_diffeo(&f).unwrap();
        assert_eq!(class.kind, GermKind::Power { k: 2, sign: 1 });
        assert_eq!(phi.multiplier(), &q(-1, 3));
        assert!(certify_normal_form(&f, &phi, &class));
    }

    #[test]
    fn residue_obstruction() {
        // x^2 + x^3 has residue -1 and is not equivalent to x^2.
        let f = jet(12, &[0, 0, 1, 1]);
        assert_eq!(rk_residue(&f), Some(q(-1, 1)));
        match normalizing_diffeo(&f) {
            Err(Error::Obstructed { degree, residue }) => {
                assert_eq!(degree, 3);
                assert_eq!(residue, "-1");
            }
            other => panic!("expected obstruction, got {other:?}"),
        }
        // x^2 + x^4 has zero residue and normalizes.
        let f = jet(12, &[0, 0, 1, 0, 1]);
        assert_eq!(rk_residue(&f), Some(q(0, 1)));
        let (phi, class) = normalizing_diffeo(&f).unwrap();
        assert!(certify_normal_form(&f, &phi, &class));
    }

    #[test]
    fn irrational_scaling_reported() {
        let f = jet(12, &[0, 0, 0, 0, 2]);
        assert!(matches!(
            normalizing_diffeo(&f),
            Err(Error::IrrationalScaling { exponent: 3, .. })
        ));
    }

    #[test]
    fn float_instantiation_normalizes_irrational_scaling() {
        let f = JetOf::<f64>::from_ints(10, &[0, 0, 0, 0, 2]);
        let (phi, _) = normalizing_diffeo(&f).unwrap();
        let g = rk_action(&f, &phi);
        assert!((g.coeff(4) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reversal_relation() {
        let cube = jet(10, &[0, 0, 0, 1]);
        let neg_cube = jet(10, &[0, 0, 0, -2]);
        assert!(reversal_related(&cube, &neg_cube));
        assert!(!reversal_related(&cube, &cube));
        let sq = jet(10, &[0, 0, 1]);
        assert!(reversal_related(&sq, &sq));
    }

    fn arb_jet(order: usize) -> impl Strategy<Value = Jet> {
        proptest::collection::vec((-5i64..=5, 1i64..=3), order + 1)
            .prop_map(move |v| Jet::new(order, v.into_iter().map(|(n, d)| q(n, d))))
    }

    fn arb_diffeo(order: usize) -> impl Strategy<Value = DiffeoGerm> {
        (arb_jet(order), prop_oneof![-3i64..=-1, 1i64..=3]).prop_map(|(mut j, c1)| {
            j.set_coeff(0, q(0, 1));
            j.set_coeff(1, q(c1, 2));
            DiffeoGerm::new(j).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn right_action_law(f in arb_jet(9), phi in arb_diffeo(9), chi in arb_diffeo(9)) {
            let lhs = rk_action(&f, &phi.compose(&chi));
            let rhs = rk_action(&rk_action(&f, &phi), &chi);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn classification_invariant(f in arb_jet(10), shift in 0usize..7, phi in arb_diffeo(10)) {
            let f = f.shift_up(shift);
            if let Some(k) = f.order_of_vanishing() {
                if k + 2 <= 9 {
                    let g = rk_action(&f, &phi);
                    prop_assert_eq!(classify_germ(&g), classify_germ(&f));
                }
            }
        }

        #[test]
        fn codim_matches_order(f in arb_jet(12), shift in 1usize..8) {
            let f = f.shift_up(shift);
            if let Some(k) = f.order_of_vanishing() {
                if k + 2 <= 12 {
                    prop_assert_eq!(rk_codim_linear(&f, 12).unwrap(), k - 1);
                }
            }
        }

        #[test]
        fn residue_is_invariant(f in arb_jet(12), shift in 1usize..5, phi in arb_diffeo(12)) {
            let f = f.shift_up(shift);
            if let Some(r) = rk_residue(&f) {
                let g = rk_action(&f, &phi);
                if let Some(s) = rk_residue(&g) {
                    prop_assert_eq!(r, s);
                }
            }
        }
    }
}
