//! Real roots of univariate rational polynomials.
//!
//! Roots are isolated with Sturm sequences and refined by bisection, all in
//! exact arithmetic. A root is reported exactly when it is rational;
//! multiplicity questions are answered with polynomial gcds, never with a
//! floating-point tolerance.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Dense polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    c: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Self { c }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.c.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.c
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, a| acc * x + a)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        Self::new(self.c.iter().map(|a| a / &l).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.c.clone();
        let mut q = vec![Rational::zero(); self.c.len().saturating_sub(dd)];
        let l = d.lead().clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let t = r.last().unwrap() / &l;
            for (i, b) in d.c.iter().enumerate() {
                r[k + i] = &r[k + i] - &t * b;
            }
            q[k] = t;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Self::new(q), Self::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `f / gcd(f, f')`: same roots, all simple.
    pub fn square_free(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    fn sturm(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(Self::new(r.c.iter().map(|a| -a).collect()));
        }
        seq
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        if self.is_zero() {
            return 0;
        }
        let seq = self.sturm();
        let va = sign_changes(&seq, a);
        let vb = sign_changes(&seq, b);
        va.saturating_sub(vb)
    }
}

fn sign_changes(seq: &[UPoly], x: &Rational) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| p.eval(x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// A real root: exact when rational, otherwise an isolating interval
/// `(lo, hi]` together with its midpoint.
#[derive(Clone, Debug, PartialEq)]
pub enum RealRoot {
    Exact(Rational),
    Isolated { lo: Rational, hi: Rational },
}

impl RealRoot {
    pub fn approx(&self) -> Rational {
        match self {
            RealRoot::Exact(r) => r.clone(),
            RealRoot::Isolated { lo, hi } => (lo + hi) / Rational::from_integer(2.into()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        crate::Scalar::to_f64(&self.approx())
    }

    /// Is this root also a root of `g`? Exact in both cases: for an isolated
    /// root, `gcd(p, g)` is counted on the isolating interval of `p`.
    pub fn is_root_of(&self, p: &UPoly, g: &UPoly) -> bool {
        match self {
            RealRoot::Exact(r) => g.eval(r).is_zero(),
            RealRoot::Isolated { lo, hi } => p.gcd(g).count_roots(lo, hi) > 0,
        }
    }
}

/// Distinct real roots of `p` in `[lo, hi]`, ascending; isolating intervals
/// are refined to width below `tol`. `p` must be nonzero.
pub fn real_roots(p: &UPoly, lo: &Rational, hi: &Rational, tol: &Rational) -> Vec<RealRoot> {
    if p.degree().unwrap_or(0) == 0 || lo > hi {
        return Vec::new();
    }
    let s = p.square_free();
    let lead_den = integer_leading(&s);
    let mut out = Vec::new();
    if s.eval(lo).is_zero() {
        out.push(RealRoot::Exact(lo.clone()));
    }
    let mut stack = vec![(lo.clone(), hi.clone())];
    let mut isolated = Vec::new();
    while let Some((a, b)) = stack.pop() {
        match s.count_roots(&a, &b) {
            0 => {}
            1 => isolated.push((a, b)),
            _ => {
                let m = (&a + &b) / Rational::from_integer(2.into());
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
    for (a, b) in isolated {
        out.push(refine(&s, a, b, tol, &lead_den));
    }
    out.sort_by_key(|x| x.approx());
    out
}

/// Leading coefficient of the primitive integer multiple of `s`; every
/// rational root of `s` has a denominator dividing it.
fn integer_leading(s: &UPoly) -> BigInt {
    let l = s.c.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
    let ints: Vec<BigInt> = s.c.iter().map(|a| (a * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
    (ints.last().unwrap() / g).abs()
}

fn refine(s: &UPoly, mut a: Rational, mut b: Rational, tol: &Rational, den: &BigInt) -> RealRoot {
    let two = Rational::from_integer(2.into());
    let den_q = Rational::from_integer(den.clone());
    let one = Rational::one();
    while &b - &a >= *tol || (&b - &a) * &den_q >= one {
        if s.eval(&b).is_zero() {
            return RealRoot::Exact(b);
        }
        let m = (&a + &b) / &two;
        if s.count_roots(&a, &m) == 1 {
            b = m;
        } else {
            a = m;
        }
    }
    if s.eval(&b).is_zero() {
        return RealRoot::Exact(b);
    }
    // The interval is shorter than 1/den, so it holds at most one
    // candidate m/den.
    let lo_m = (&a * &den_q).ceil().to_integer();
    let hi_m = (&b * &den_q).floor().to_integer();
    let mut m = lo_m;
    while m <= hi_m {
        let r = Rational::new(m.clone(), den.clone());
        if r > a && s.eval(&r).is_zero() {
            return RealRoot::Exact(r);
        }
        m += 1;
    }
    RealRoot::Isolated { lo: a, hi: b }
}
