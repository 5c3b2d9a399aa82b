use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;

/// The last continued-fraction convergent of `x` whose denominator does not
/// exceed `max_den`.
pub fn rational_reconstruct(x: f64, max_den: u64) -> Rational {
    let q = Rational::from_float(x).expect("finite value");
    rational_reconstruct_exact(&q, max_den)
}

/// As [`rational_reconstruct`], for an exact rational approximation.
pub fn rational_reconstruct_exact(x: &Rational, max_den: u64) -> Rational {
    assert!(max_den >= 1);
    let bound = BigInt::from(max_den);
    // Convergents h/k via h_n = a_n h_{n−1} + h_{n−2}.
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let mut best = Rational::from_integer(x.numer().div_floor(x.denom()));
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        let h = &a * &h1 + &h0;
        let k = &a * &k1 + &k0;
        if k > bound {
            break;
        }
        best = Rational::new(h.clone(), k.clone());
        (h0, h1) = (h1, h);
        (k0, k1) = (k1, k);
        (num, den) = (den, r);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{int, rat};

    #[test]
    fn simple_values() {
        assert_eq!(rational_reconstruct(0.5, 10000), rat(1, 2));
        assert_eq!(rational_reconstruct(0.333333333, 10000), rat(1, 3));
        assert_eq!(rational_reconstruct(2.0 / 7.0, 10000), rat(2, 7));
        assert_eq!(rational_reconstruct(-1.25, 10000), rat(-5, 4));
        assert_eq!(rational_reconstruct(3.0, 10000), int(3));
        assert_eq!(rational_reconstruct(std::f64::consts::PI, 1000), rat(355, 113));
    }
}
