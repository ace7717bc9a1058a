//! Sparse polynomials in `N` variables named `x`, `y`, `z` (in that order).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::jet::JetOf;
use crate::scalar::Scalar;

const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

pub type Exponent<const N: usize> = [u32; N];

/// `Σ c_e · x^e`, stored without zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<T, const N: usize> {
    terms: BTreeMap<Exponent<N>, T>,
}

impl<T: Scalar, const N: usize> Default for Poly<T, N> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar, const N: usize> Poly<T, N> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial([0; N], c)
    }

    pub fn monomial(e: Exponent<N>, c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// The `i`-th coordinate function.
    pub fn var(i: usize) -> Self {
        let mut e = [0; N];
        e[i] = 1;
        Self::monomial(e, T::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent<N>, T)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent<N>, c: T) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent<N>, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent<N>) -> T {
        self.terms.get(e).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c.clone() * s.clone())))
    }

    pub fn partial(&self, var: usize) -> Self {
        Self::from_terms(self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, c)| {
            let mut d = *e;
            d[var] -= 1;
            (d, c.clone() * T::from_u32(e[var]).unwrap())
        }))
    }

    /// Drops every monomial of total degree above `deg`.
    pub fn truncate_degree(&self, deg: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= deg)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_part(&self, deg: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == deg)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn eval_f64(&self, at: &[f64; N]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(at)
                    .fold(c.to_f64(), |acc, (&k, &v)| acc * v.powi(k as i32))
            })
            .sum()
    }

    /// Pre-converted coefficient list for repeated floating-point evaluation.
    pub fn to_f64_terms(&self) -> Vec<(Exponent<N>, f64)> {
        self.terms.iter().map(|(e, c)| (*e, c.to_f64())).collect()
    }

    /// Univariate jet in variable `var` when the polynomial depends on no
    /// other variable. The order is at least `order` and at least the degree.
    pub fn to_univariate(&self, var: usize, order: usize) -> Option<JetOf<T>> {
        let mut coeffs: Vec<T> = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &k)| i != var && k > 0) {
                return None;
            }
            let k = e[var] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, T::zero());
            }
            coeffs[k] = c.clone();
        }
        let n = order.max(coeffs.len().saturating_sub(1));
        Some(JetOf::new(n, coeffs))
    }

    /// Polynomial `Σ c_k v^k` in variable `var` from a jet's retained
    /// coefficients.
    pub fn from_univariate(jet: &JetOf<T>, var: usize) -> Self {
        Self::from_terms(jet.coeffs().iter().enumerate().map(|(k, c)| {
            let mut e = [0; N];
            e[var] = k as u32;
            (e, c.clone())
        }))
    }

    /// Coefficient of `v^k` viewed as a polynomial in the other variables.
    pub fn coefficient_of(&self, var: usize, k: u32) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e[var] == k)
                .map(|(e, c)| {
                    let mut d = *e;
                    d[var] = 0;
                    (d, c.clone())
                }),
        )
    }

    /// Embeds into `M >= N` variables, the new variables absent.
    pub fn embed<const M: usize>(&self) -> Poly<T, M> {
        Poly::from_terms(self.terms.iter().map(|(e, c)| {
            let mut d = [0; M];
            d[..N].copy_from_slice(e);
            (d, c.clone())
        }))
    }

    /// Restricts to the first `M` variables; `None` if a dropped variable
    /// appears.
    pub fn project<const M: usize>(&self) -> Option<Poly<T, M>> {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[M..].iter().any(|&k| k > 0) {
                return None;
            }
            let mut d = [0; M];
            d.copy_from_slice(&e[..M]);
            out.add_term(d, c.clone());
        }
        Some(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(T::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl<T: Scalar, const N: usize> Add for &Poly<T, N> {
    type Output = Poly<T, N>;
    fn add(self, rhs: Self) -> Poly<T, N> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<T: Scalar, const N: usize> Sub for &Poly<T, N> {
    type Output = Poly<T, N>;
    fn sub(self, rhs: Self) -> Poly<T, N> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<T: Scalar, const N: usize> Mul for &Poly<T, N> {
    type Output = Poly<T, N>;
    fn mul(self, rhs: Self) -> Poly<T, N> {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = [0; N];
                for i in 0..N {
                    e[i] = ea[i] + eb[i];
                }
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Scalar, const N: usize> Neg for &Poly<T, N> {
    type Output = Poly<T, N>;
    fn neg(self) -> Poly<T, N> {
        self.scale(&-T::one())
    }
}

impl<T: Scalar, const N: usize> fmt::Display for Poly<T, N> {
    /// Parseable notation: `-3*x*y^2 + 1/2*z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest total degree first, then lexicographically.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then(b.cmp(a))
        });
        for (n, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if !mag.is_one() || is_const {
                factors.push(mag.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(VAR_NAMES[i].to_string()),
                    _ => factors.push(format!("{}^{}", VAR_NAMES[i], k)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<T: Scalar, const N: usize> Serialize for Poly<T, N> {
    /// `[[i, j, ..., "c"], ...]` in ascending exponent order.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            let mut entry: Vec<serde_json::Value> = e.iter().map(|&k| k.into()).collect();
            entry.push(c.to_string().into());
            seq.serialize_element(&entry)?;
        }
        seq.end()
    }
}
