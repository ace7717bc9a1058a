//! Random jets and diffeomorphism germs for property tests and `verify`.

use num_bigint::BigInt;
use rand::Rng;

use crate::{DiffeoGerm, Jet, Rational};

/// Uniform-ish rational `p/q` with `1 <= q <= max_den` and `|p/q| <= bound`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, bound: i64, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den.max(1));
    let p = rng.gen_range(-bound * q..=bound * q);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64, max_den: i64) -> Rational {
    loop {
        let r = rational(rng, bound, max_den);
        if r != Rational::from_integer(0.into()) {
            return r;
        }
    }
}

/// Jet of the given order with random coefficients in degrees
/// `low..=high` (clamped to the order) and zeros elsewhere.
pub fn jet<R: Rng + ?Sized>(rng: &mut R, order: usize, low: usize, high: usize, bound: i64) -> Jet {
    let zero = Rational::from_integer(0.into());
    Jet::new(
        order,
        (0..=order).map(|k| {
            if k >= low && k <= high {
                rational(rng, bound, 4)
            } else {
                zero.clone()
            }
        }),
    )
}

/// Germ vanishing to order exactly `k`, random through degree `high`.
pub fn germ_of_order<R: Rng + ?Sized>(
    rng: &mut R,
    order: usize,
    k: usize,
    high: usize,
    bound: i64,
) -> Jet {
    let mut f = jet(rng, order, k, high.max(k), bound);
    if k <= order {
        f.set_coeff(k, nonzero_rational(rng, bound, 4));
    }
    f
}

/// Diffeomorphism germ with random coefficients through degree `high`.
pub fn diffeo<R: Rng + ?Sized>(rng: &mut R, order: usize, high: usize, bound: i64) -> DiffeoGerm {
    DiffeoGerm::new(germ_of_order(rng, order, 1, high, bound)).expect("linear term is nonzero")
}
