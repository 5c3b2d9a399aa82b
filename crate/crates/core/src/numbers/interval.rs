//! Interval arithmetic over dyadic rationals with directed rounding.
//!
//! Every endpoint is `m·2^e` with `m` an arbitrary-precision integer. After
//! each operation lower endpoints are rounded towards −∞ and upper endpoints
//! towards +∞ to the working precision, so the exact value of any expression
//! built from these operations lies in the resulting interval.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Rational, ShapeNum};
use crate::error::{Error, Result};

/// Precision (in bits) used when nothing else is requested.
pub const DEFAULT_PRECISION: u32 = 64;
/// Upper bound for precision doubling in undecided comparisons.
pub const MAX_PRECISION: u32 = 1 << 14;

/// The dyadic rational `mant·2^exp`.
#[derive(Clone, Debug)]
pub struct Dyadic {
    pub mant: BigInt,
    pub exp: i64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Round {
    Down,
    Up,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn div_round(n: &BigInt, d: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Down => n.div_floor(d),
        Round::Up => -((-n).div_floor(d)),
    }
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic {
            mant: BigInt::from(n),
            exp: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        Dyadic {
            mant: div_round(&self.mant, &pow2(shift), dir),
            exp: self.exp + shift as i64,
        }
    }

    /// Exact value as a rational.
    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as u64)
        } else {
            Rational::new(self.mant.clone(), pow2((-self.exp) as u64))
        }
    }

    /// Nearest-ish f64 (for display and diagnostics only).
    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = (&self.mant >> shift as u64).to_f64().unwrap_or(0.0);
        m * 2f64.powi((self.exp + shift).clamp(-2000, 2000) as i32)
    }

    fn from_rational(q: &Rational, prec: u32, dir: Round) -> Dyadic {
        if q.is_zero() {
            return Dyadic::zero();
        }
        let (n, d) = (q.numer(), q.denom());
        let k = prec as i64 + 2 + d.bits() as i64 - n.bits() as i64;
        let (num, den) = if k >= 0 {
            (n << k as u64, d.clone())
        } else {
            (n.clone(), d << (-k) as u64)
        };
        Dyadic {
            mant: div_round(&num, &den, dir),
            exp: -k,
        }
        .round(prec, dir)
    }

    fn add(&self, o: &Dyadic) -> Dyadic {
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &o.mant << (o.exp - e) as u64;
        Dyadic { mant: a + b, exp: e }
    }

    fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -self.mant.clone(),
            exp: self.exp,
        }
    }

    fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic {
            mant: &self.mant * &o.mant,
            exp: self.exp + o.exp,
        }
    }

    /// `self / o` rounded in the given direction to `prec` bits.
    fn div(&self, o: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        let k = prec as i64 + 2 + o.mant.bits() as i64 - self.mant.bits() as i64;
        let k = k.max(0);
        let (mut num, mut den) = (&self.mant << k as u64, o.mant.clone());
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Dyadic {
            mant: div_round(&num, &den, dir),
            exp: self.exp - o.exp - k,
        }
        .round(prec, dir)
    }

    /// Square root of a non-negative dyadic, rounded in the given direction.
    fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.mant.is_negative());
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Scale so the mantissa has about 2·prec bits and the exponent is even.
        let mut shift = 2 * prec as i64 + 4 - self.mant.bits() as i64;
        shift = shift.max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as u64;
        let e = self.exp - shift;
        let mut r = m.sqrt();
        if dir == Round::Up && &r * &r != m {
            r += 1;
        }
        Dyadic { mant: r, exp: e / 2 }.round(prec, dir)
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), o.signum());
        if sa != sb || sa == 0 {
            return sa.cmp(&sb);
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &o.mant << (o.exp - e) as u64;
        a.cmp(&b)
    }
}

/// A closed real interval `[lo, hi]` carrying its working precision.
#[derive(Clone)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub prec: u32,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

impl Interval {
    fn make(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        debug_assert!(lo <= hi);
        Interval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn point(d: Dyadic, prec: u32) -> Interval {
        Interval::make(d.clone(), d, prec)
    }

    pub fn from_int(n: i64, prec: u32) -> Interval {
        Interval::point(Dyadic::from_int(n), prec)
    }

    pub fn zero(prec: u32) -> Interval {
        Interval::from_int(0, prec)
    }

    /// Interval with the given (already ordered) endpoints.
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval::make(lo, hi, prec)
    }

    /// Enclosure of a rational.
    pub fn from_rational(q: &Rational, prec: u32) -> Interval {
        Interval {
            lo: Dyadic::from_rational(q, prec, Round::Down),
            hi: Dyadic::from_rational(q, prec, Round::Up),
            prec,
        }
    }

    /// Smallest interval containing `x` (for use as a test oracle).
    pub fn from_f64(x: f64, prec: u32) -> Interval {
        let q = Rational::from_float(x).expect("finite float");
        Interval::from_rational(&q, prec.max(64))
    }

    pub fn with_precision(&self, prec: u32) -> Interval {
        Interval::make(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn width(&self) -> Rational {
        self.hi.to_rational() - self.lo.to_rational()
    }

    pub fn midpoint(&self) -> Rational {
        (self.hi.to_rational() + self.lo.to_rational()) / Rational::from_integer(2.into())
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    pub fn contains(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    /// Certain sign, or `None` while the interval straddles 0 (or is not exactly 0).
    pub fn sign(&self) -> Option<i32> {
        if self.is_positive() {
            Some(1)
        } else if self.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec.min(o.prec);
        Interval::make(self.lo.add(&o.lo), self.hi.add(&o.hi), p)
    }

    pub fn neg(&self) -> Interval {
        Interval::make(self.hi.neg(), self.lo.neg(), self.prec)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec.min(o.prec);
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::make(lo, hi, p)
    }

    pub fn scale_rational(&self, q: &Rational) -> Interval {
        self.mul(&Interval::from_rational(q, self.prec))
    }

    /// Reciprocal; fails if the interval contains 0.
    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::IndeterminateDivision);
        }
        let one = Dyadic::from_int(1);
        Ok(Interval {
            lo: one.div(&self.hi, self.prec, Round::Down),
            hi: one.div(&self.lo, self.prec, Round::Up),
            prec: self.prec,
        })
    }

    pub fn div(&self, o: &Interval) -> Result<Interval> {
        if o.contains_zero() {
            return Err(Error::IndeterminateDivision);
        }
        let p = self.prec.min(o.prec);
        let c = [
            self.lo.div(&o.lo, p, Round::Down),
            self.lo.div(&o.hi, p, Round::Down),
            self.hi.div(&o.lo, p, Round::Down),
            self.hi.div(&o.hi, p, Round::Down),
        ];
        let d = [
            self.lo.div(&o.lo, p, Round::Up),
            self.lo.div(&o.hi, p, Round::Up),
            self.hi.div(&o.lo, p, Round::Up),
            self.hi.div(&o.hi, p, Round::Up),
        ];
        Ok(Interval {
            lo: c.iter().min().unwrap().clone(),
            hi: d.iter().max().unwrap().clone(),
            prec: p,
        })
    }

    /// Square root; negative parts of the interval are clipped to 0.
    pub fn sqrt(&self) -> Result<Interval> {
        if self.is_negative() {
            return Err(Error::IndeterminateDivision);
        }
        let lo = if self.lo.signum() < 0 {
            Dyadic::zero()
        } else {
            self.lo.sqrt(self.prec, Round::Down)
        };
        Ok(Interval {
            lo,
            hi: self.hi.sqrt(self.prec, Round::Up),
            prec: self.prec,
        })
    }

    /// Convex hull.
    pub fn hull(&self, o: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.prec.min(o.prec),
        }
    }

    /// Enclosure of π (Machin's formula).
    pub fn pi(prec: u32) -> Interval {
        let w = prec + 16;
        let a = atan_small(&Interval::from_rational(&Rational::new(1.into(), 5.into()), w));
        let b = atan_small(&Interval::from_rational(&Rational::new(1.into(), 239.into()), w));
        let pi = a.mul(&Interval::from_int(16, w)).sub(&b.mul(&Interval::from_int(4, w)));
        pi.with_precision(prec)
    }

    /// Enclosure of arctan over the whole interval (arctan is increasing).
    pub fn atan(&self) -> Interval {
        let w = self.prec + 16;
        let lo = atan_point(&self.lo, w).lo;
        let hi = atan_point(&self.hi, w).hi;
        Interval::make(lo, hi, self.prec)
    }
}

/// arctan at an exact point, as an enclosure at working precision `w`.
fn atan_point(d: &Dyadic, w: u32) -> Interval {
    if d.signum() < 0 {
        return atan_point(&d.neg(), w).neg();
    }
    let x = Interval::point(d.clone(), w);
    let one = Dyadic::from_int(1);
    if *d > one {
        // atan(x) = π/2 − atan(1/x)
        let inv = x.recip().expect("positive");
        let half_pi = Interval::pi(w).mul(&Interval::from_rational(&Rational::new(1.into(), 2.into()), w));
        return half_pi.sub(&inv.atan_reduced(w));
    }
    x.atan_reduced(w)
}

impl Interval {
    /// arctan for intervals inside [0, 1], endpoint by endpoint.
    fn atan_reduced(&self, w: u32) -> Interval {
        let lo = atan_unit(&self.lo, w).lo;
        let hi = atan_unit(&self.hi, w).hi;
        Interval::make(lo, hi, w)
    }
}

/// arctan at a point of [0, 1].
fn atan_unit(d: &Dyadic, w: u32) -> Interval {
    let half = Dyadic {
        mant: BigInt::one(),
        exp: -1,
    };
    let x = Interval::point(d.clone(), w);
    if *d <= half {
        return atan_small(&x);
    }
    // atan(x) = π/4 + atan((x − 1)/(x + 1)), and |(x−1)/(x+1)| ≤ 1/3 here.
    let one = Interval::from_int(1, w);
    let quarter_pi = Interval::pi(w).mul(&Interval::from_rational(&Rational::new(1.into(), 4.into()), w));
    let t = x.sub(&one).div(&x.add(&one)).expect("x + 1 > 0");
    let lo = atan_small_signed(&Interval::point(t.lo.clone(), w)).lo;
    let hi = atan_small_signed(&Interval::point(t.hi.clone(), w)).hi;
    quarter_pi.add(&Interval::make(lo, hi, w))
}

fn atan_small_signed(x: &Interval) -> Interval {
    if x.lo.signum() < 0 {
        atan_small(&x.neg()).neg()
    } else {
        atan_small(x)
    }
}

/// Taylor series of arctan at a point interval `x` with `0 ≤ x ≤ 1/2`. The
/// series alternates with decreasing terms, so the first omitted term bounds
/// the remainder.
fn atan_small(x: &Interval) -> Interval {
    let w = x.prec;
    if x.hi.is_zero() {
        return Interval::zero(w);
    }
    let x2 = x.mul(x);
    let mut power = x.clone();
    let mut sum = Interval::zero(w);
    let mut k: i64 = 0;
    let eps = Dyadic {
        mant: BigInt::one(),
        exp: -(w as i64) - 4,
    };
    loop {
        let term = power.div(&Interval::from_int(2 * k + 1, w)).unwrap();
        if term.hi < eps {
            let bound = term.hi.clone();
            sum = sum.add(&Interval::make(bound.neg(), bound, w));
            return sum;
        }
        sum = if k % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        power = power.mul(&x2);
        k += 1;
    }
}

/// A rectangle `re × im` in the complex plane.
#[derive(Clone, Debug)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexInterval { re, im }
    }

    /// Enclosure of `a + b√−3`.
    pub fn from_shape(z: &ShapeNum, prec: u32) -> Self {
        let sqrt3 = Interval::from_int(3, prec + 8).sqrt().unwrap();
        let im = Interval::from_rational(&z.b, prec + 8).mul(&sqrt3);
        ComplexInterval {
            re: Interval::from_rational(&z.a, prec),
            im: im.with_precision(prec),
        }
    }

    pub fn add(&self, o: &ComplexInterval) -> ComplexInterval {
        ComplexInterval::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn mul(&self, o: &ComplexInterval) -> ComplexInterval {
        ComplexInterval::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn contains_origin(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Enclosure of the argument over the rectangle. The branch is the
    /// principal one except for rectangles meeting the negative real axis,
    /// where values near π are returned (possibly slightly above π).
    pub fn arg(&self) -> Result<Interval> {
        if self.contains_origin() {
            return Err(Error::OriginInRectangle);
        }
        let w = self.re.prec.min(self.im.prec) + 16;
        let re = self.re.with_precision(w);
        let im = self.im.with_precision(w);
        let half_pi = Interval::pi(w).mul(&Interval::from_rational(&Rational::new(1.into(), 2.into()), w));
        let prec = w - 16;
        let out = if re.is_positive() {
            im.div(&re)?.atan()
        } else if im.is_positive() {
            half_pi.sub(&re.div(&im)?.atan())
        } else if im.is_negative() {
            half_pi.neg().sub(&re.div(&im)?.atan())
        } else {
            Interval::pi(w).add(&im.div(&re)?.atan())
        };
        Ok(out.with_precision(prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{int, rat};

    #[test]
    fn addition_of_integers_is_exact() {
        let a = Interval::new(Dyadic::from_int(1), Dyadic::from_int(2), 64);
        let b = Interval::new(Dyadic::from_int(3), Dyadic::from_int(4), 64);
        let s = a.add(&b);
        assert_eq!(s.lo, Dyadic::from_int(4));
        assert_eq!(s.hi, Dyadic::from_int(6));
    }

    #[test]
    fn sqrt_of_four() {
        let s = Interval::from_int(4, DEFAULT_PRECISION).sqrt().unwrap();
        assert!(s.contains_rational(&int(2)));
        assert!(s.width() <= rat(1, 1 << 50));
    }

    #[test]
    fn sqrt_two_is_tight_and_correct() {
        let s = Interval::from_int(2, 53).sqrt().unwrap();
        assert!(s.width() <= rat(1, 1 << 50));
        assert!(s.lo.to_rational() * s.lo.to_rational() <= int(2));
        assert!(s.hi.to_rational() * s.hi.to_rational() >= int(2));
    }

    #[test]
    fn division_by_zero_interval() {
        let z = Interval::new(Dyadic::from_int(-1), Dyadic::from_int(1), 64);
        assert_eq!(
            Interval::from_int(1, 64).div(&z).unwrap_err(),
            Error::IndeterminateDivision
        );
    }

    #[test]
    fn pi_digits() {
        let pi = Interval::pi(200);
        // 3.14159265358979323846264338327950288419716939937510
        let lo = Rational::new(
            "314159265358979323846264338327950288419716939937510".parse().unwrap(),
            BigInt::from(10).pow(50),
        );
        let hi = &lo + Rational::new(1.into(), BigInt::from(10).pow(50));
        assert!(pi.lo.to_rational() <= hi && pi.hi.to_rational() >= lo);
        assert!(pi.width() < Rational::new(1.into(), BigInt::from(10).pow(55)));
    }

    #[test]
    fn arg_of_regular_shape_contains_pi_over_three() {
        let z = ComplexInterval::from_shape(&ShapeNum::regular(), 80);
        let a = z.arg().unwrap();
        let third = Interval::pi(120).div(&Interval::from_int(3, 120)).unwrap();
        assert!(!a.sub(&third).is_positive() && !a.sub(&third).is_negative());
        assert!(a.width() < rat(1, 1 << 60));
    }

    #[test]
    fn arg_quadrants() {
        let f = |a: f64, b: f64| {
            ComplexInterval::new(Interval::from_f64(a, 64), Interval::from_f64(b, 64))
                .arg()
                .unwrap()
        };
        for (a, b) in [
            (1.0, 0.0),
            (0.0, 1.0),
            (-1.0, 0.5),
            (-1.0, -0.5),
            (0.3, -2.0),
            (-3.0, 0.0),
        ] {
            let want = f64::atan2(b, a);
            let got = f(a, b);
            let mid = got.midpoint();
            let mid = num_traits::ToPrimitive::to_f64(&mid).unwrap();
            let diff = (mid - want).abs().min((mid - want - 2.0 * std::f64::consts::PI).abs());
            assert!(diff < 1e-12, "arg({a},{b}) = {mid}, want {want}");
        }
        let o = ComplexInterval::new(Interval::zero(64), Interval::zero(64));
        assert_eq!(o.arg().unwrap_err(), Error::OriginInRectangle);
    }

    #[test]
    fn atan_matches_float() {
        for x in [-5.0, -0.7, -0.2, 0.0, 0.1, 0.45, 0.5, 0.75, 1.0, 1.5, 40.0] {
            let a = Interval::from_f64(x, 64).atan();
            let mid = num_traits::ToPrimitive::to_f64(&a.midpoint()).unwrap();
            assert!((mid - f64::atan(x)).abs() < 1e-14, "atan({x})");
        }
    }
}
