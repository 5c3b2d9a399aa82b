use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{format_rational, int, rat, Rational, SqrtSum};
use crate::error::{Error, Result};

/// An element `a + b√−3` of the field Q(√−3), where shapes of tetrahedra in
/// tetrahedral manifolds live.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ShapeNum {
    pub a: Rational,
    pub b: Rational,
}

impl ShapeNum {
    pub fn new(a: Rational, b: Rational) -> Self {
        ShapeNum { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        ShapeNum { a, b: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// √−3.
    pub fn sqrt_minus_three() -> Self {
        ShapeNum::new(Rational::zero(), Rational::one())
    }

    /// ζ = (1 + √−3)/2, the shape of the regular ideal tetrahedron.
    pub fn regular() -> Self {
        ShapeNum::new(rat(1, 2), rat(1, 2))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        ShapeNum::new(self.a.clone(), -self.b.clone())
    }

    /// |z|² = a² + 3b².
    pub fn norm(&self) -> Rational {
        &self.a * &self.a + int(3) * &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(ShapeNum::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn div(&self, other: &ShapeNum) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Real part.
    pub fn re(&self) -> &Rational {
        &self.a
    }

    /// Imaginary part, `b·√3`, as a one-term square-root sum.
    pub fn im(&self) -> SqrtSum {
        SqrtSum::term(self.b.clone(), 3)
    }

    /// Sign of the imaginary part: positive for positively oriented shapes.
    pub fn im_sign(&self) -> i32 {
        if self.b.is_positive() {
            1
        } else if self.b.is_negative() {
            -1
        } else {
            0
        }
    }

    /// The three edge parameters `(z, 1/(1−z), 1 − 1/z)`.
    pub fn params(&self) -> Result<[ShapeNum; 3]> {
        if self.is_zero() || self.is_one() {
            return Err(Error::DegenerateShape);
        }
        let one = ShapeNum::one();
        let z1 = (&one - self).inv()?;
        let z2 = &one - &self.inv()?;
        Ok([self.clone(), z1, z2])
    }

    /// |z| = √(a² + 3b²) as a canonical one-term square-root sum.
    pub fn abs(&self) -> SqrtSum {
        SqrtSum::sqrt_of(&self.norm())
    }

    pub fn pow(&self, k: u32) -> ShapeNum {
        let mut acc = ShapeNum::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Display for ShapeNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*sqrt(-3)", format_rational(&self.a), format_rational(&self.b))
    }
}

impl fmt::Debug for ShapeNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &ShapeNum {
    type Output = ShapeNum;
    fn add(self, o: &ShapeNum) -> ShapeNum {
        ShapeNum::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &ShapeNum {
    type Output = ShapeNum;
    fn sub(self, o: &ShapeNum) -> ShapeNum {
        ShapeNum::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &ShapeNum {
    type Output = ShapeNum;
    fn mul(self, o: &ShapeNum) -> ShapeNum {
        // (a + b√−3)(c + d√−3) = (ac − 3bd) + (ad + bc)√−3
        ShapeNum::new(
            &self.a * &o.a - int(3) * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Neg for &ShapeNum {
    type Output = ShapeNum;
    fn neg(self) -> ShapeNum {
        ShapeNum::new(-self.a.clone(), -self.b.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_shape_is_a_fixed_point() {
        let z = ShapeNum::regular();
        let [a, b, c] = z.params().unwrap();
        assert_eq!(a, z);
        assert_eq!(b, z);
        assert_eq!(c, z);
        assert!(z.pow(6).is_one());
    }

    #[test]
    fn params_of_two() {
        let [z, z1, z2] = ShapeNum::from_rational(int(2)).params().unwrap();
        assert_eq!(z, ShapeNum::from_rational(int(2)));
        assert_eq!(z1, ShapeNum::from_rational(int(-1)));
        assert_eq!(z2, ShapeNum::from_rational(rat(1, 2)));
    }

    #[test]
    fn degenerate_shapes_are_rejected() {
        assert_eq!(ShapeNum::zero().params(), Err(Error::DegenerateShape));
        assert_eq!(ShapeNum::one().params(), Err(Error::DegenerateShape));
    }

    #[test]
    fn abs_values() {
        assert_eq!(ShapeNum::regular().abs(), SqrtSum::from_rational(int(1)));
        assert_eq!(ShapeNum::new(int(1), int(1)).abs(), SqrtSum::from_rational(int(2)));
        assert_eq!(ShapeNum::sqrt_minus_three().abs(), SqrtSum::term(int(1), 3));
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism() {
        let x = ShapeNum::new(rat(3, 7), rat(-2, 5));
        let y = ShapeNum::new(rat(1, 3), rat(4, 1));
        assert_eq!(x.conj().conj(), x);
        assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
    }
}
