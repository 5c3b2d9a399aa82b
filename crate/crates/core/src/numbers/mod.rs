//! Exact arithmetic: rationals, the shape field Q(√−3), sums of square roots
//! of rationals, outward-rounded interval arithmetic, and rational
//! reconstruction from floating-point approximations.

mod interval;
mod reconstruct;
mod shape;
mod sqrtsum;
mod squarefree;

pub use interval::{ComplexInterval, Dyadic, Interval, DEFAULT_PRECISION, MAX_PRECISION};
pub use reconstruct::{rational_reconstruct, rational_reconstruct_exact};
pub use shape::ShapeNum;
pub use sqrtsum::SqrtSum;
pub use squarefree::{prime_factor_big, squarefree_decompose, squarefree_decompose_big};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}
