use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::interval::{Interval, DEFAULT_PRECISION};
use super::squarefree::{prime_factor_big, squarefree_decompose_big};
use super::{format_rational, parse_rational, Rational};
use crate::error::{Error, ParseError, Result};

/// An element `r₁√n₁ + … + r_k√n_k` of Q(√Q⁺), kept in canonical form:
/// radicands are square-free and strictly increasing, coefficients nonzero.
/// Canonical form is unique, so derived equality is equality of values.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SqrtSum {
    terms: Vec<(BigUint, Rational)>,
}

impl SqrtSum {
    pub fn zero() -> Self {
        SqrtSum { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::term(r, 1)
    }

    /// `r·√n` for any positive `n`, normalized.
    pub fn term(r: Rational, n: u64) -> Self {
        Self::term_big(r, BigUint::from(n))
    }

    /// `r·√n` for a radicand of any size.
    pub fn term_big(r: Rational, n: BigUint) -> Self {
        assert!(!n.is_zero(), "radicand must be positive");
        if r.is_zero() {
            return Self::zero();
        }
        let (s, m) = squarefree_decompose_big(&n);
        SqrtSum {
            terms: vec![(m, r * Rational::from_integer(BigInt::from(s)))],
        }
    }

    /// `√q` for a non-negative rational `q`.
    pub fn sqrt_of(q: &Rational) -> Self {
        assert!(!q.is_negative(), "square root of a negative rational");
        if q.is_zero() {
            return Self::zero();
        }
        // √(p/d) = √(p·d)/d
        let pd = (q.numer() * q.denom()).to_biguint().unwrap();
        let (s, m) = squarefree_decompose_big(&pd);
        let coef = Rational::new(BigInt::from(s), q.denom().clone());
        SqrtSum { terms: vec![(m, coef)] }
    }

    fn from_map(map: BTreeMap<BigUint, Rational>) -> Self {
        SqrtSum {
            terms: map.into_iter().filter(|(_, r)| !r.is_zero()).collect(),
        }
    }

    /// Terms as `(radicand, coefficient)`, radicands increasing.
    pub fn terms(&self) -> &[(BigUint, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if it is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(n, r)] if n.is_one() => Some(r.clone()),
            _ => None,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        SqrtSum {
            terms: self.terms.iter().map(|(n, r)| (n.clone(), r * q)).collect(),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Exact quotient by prime-conjugate rationalization of the denominator.
    pub fn div(&self, d: &SqrtSum) -> Result<SqrtSum> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let [(n, r)] = d.terms.as_slice() {
            // x / (r√n) = x·√n / (r·n)
            let root = SqrtSum {
                terms: vec![(n.clone(), Rational::one())],
            };
            let scale = (r * Rational::from_integer(BigInt::from(n.clone()))).recip();
            return Ok((self * &root).scale(&scale));
        }
        let mut num = self.clone();
        let mut den = d.clone();
        loop {
            let Some((n, _)) = den.terms.iter().rev().find(|(n, _)| !n.is_one()) else {
                break;
            };
            let p = prime_factor_big(n);
            // den = d0 + √p·d1 with p dividing no radicand of d0 or d1.
            let mut conj = BTreeMap::new();
            for (m, r) in &den.terms {
                let v = if (m % &p).is_zero() { -r.clone() } else { r.clone() };
                conj.insert(m.clone(), v);
            }
            let conj = SqrtSum::from_map(conj);
            num = &num * &conj;
            den = &den * &conj;
        }
        let q = den.as_rational().expect("rationalized denominator");
        Ok(num.scale(&q.recip()))
    }

    pub fn recip(&self) -> Result<SqrtSum> {
        SqrtSum::one().div(self)
    }

    /// Enclosure of the value at the given precision.
    pub fn to_interval(&self, prec: u32) -> Interval {
        let w = prec + 8;
        let mut acc = Interval::zero(w);
        for (n, r) in &self.terms {
            let root = Interval::from_rational(&Rational::from_integer(BigInt::from(n.clone())), w)
                .sqrt()
                .unwrap();
            acc = acc.add(&root.scale_rational(r));
        }
        acc.with_precision(prec)
    }

    /// Sign, decided exactly for zero and by refining enclosures otherwise.
    pub fn sign(&self) -> i32 {
        match self.terms.as_slice() {
            [] => return 0,
            [(_, r)] => return if r.is_positive() { 1 } else { -1 },
            _ => {}
        }
        if self.terms.iter().all(|(_, r)| r.is_positive()) {
            return 1;
        }
        if self.terms.iter().all(|(_, r)| r.is_negative()) {
            return -1;
        }
        // A nonzero canonical sum is a nonzero algebraic number, so this
        // loop terminates.
        let mut prec = DEFAULT_PRECISION;
        loop {
            if let Some(s) = self.to_interval(prec).sign() {
                return s;
            }
            prec *= 2;
        }
    }

    pub fn cmp_value(&self, o: &SqrtSum) -> std::cmp::Ordering {
        (self - o).sign().cmp(&0)
    }

    /// Approximate value (diagnostics only).
    pub fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.to_interval(64).midpoint()).unwrap_or(f64::NAN)
    }
}

impl fmt::Display for SqrtSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (n, r)) in self.terms.iter().enumerate() {
            let body = format_rational(&r.abs());
            let sign = if r.is_negative() {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if n.is_one() {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sign}{body}*sqrt({n})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SqrtSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for SqrtSum {
    type Err = ParseError;

    /// Accepts `r1*sqrt(n1)+r2*sqrt(n2)-...` with rationals `p/q`; terms
    /// need not be canonical.
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let bad = || ParseError::new(format!("bad square-root sum `{s}`"));
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let mut pieces = Vec::new();
        let mut cur = String::new();
        for c in s.chars() {
            if (c == '+' || c == '-') && !cur.is_empty() && !cur.ends_with('(') {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(c);
        }
        pieces.push(cur);
        let mut acc = SqrtSum::zero();
        for piece in pieces {
            let (neg, body) = match piece.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            let (coef, rad) = if let Some(i) = body.find("sqrt(") {
                let head = body[..i].trim_end_matches('*');
                let inner = body[i + 5..].strip_suffix(')').ok_or_else(bad)?;
                let rad: BigUint = inner.parse().map_err(|_| bad())?;
                if rad.is_zero() {
                    return Err(bad());
                }
                let coef = if head.is_empty() {
                    Rational::one()
                } else {
                    parse_rational(head).ok_or_else(bad)?
                };
                (coef, rad)
            } else {
                (parse_rational(body).ok_or_else(bad)?, BigUint::one())
            };
            let coef = if neg { -coef } else { coef };
            acc = &acc + &SqrtSum::term_big(coef, rad);
        }
        Ok(acc)
    }
}

impl Add for &SqrtSum {
    type Output = SqrtSum;
    fn add(self, o: &SqrtSum) -> SqrtSum {
        let mut map: BTreeMap<BigUint, Rational> = self.terms.iter().cloned().collect();
        for (n, r) in &o.terms {
            *map.entry(n.clone()).or_insert_with(Rational::zero) += r;
        }
        SqrtSum::from_map(map)
    }
}

impl Neg for &SqrtSum {
    type Output = SqrtSum;
    fn neg(self) -> SqrtSum {
        SqrtSum {
            terms: self.terms.iter().map(|(n, r)| (n.clone(), -r.clone())).collect(),
        }
    }
}

impl Sub for &SqrtSum {
    type Output = SqrtSum;
    fn sub(self, o: &SqrtSum) -> SqrtSum {
        self + &(-o)
    }
}

impl Mul for &SqrtSum {
    type Output = SqrtSum;
    fn mul(self, o: &SqrtSum) -> SqrtSum {
        let mut map: BTreeMap<BigUint, Rational> = BTreeMap::new();
        for (m, r) in &self.terms {
            for (n, s) in &o.terms {
                // √m·√n = g·√((m/g)(n/g)) for square-free m, n and g = gcd(m, n)
                let g = m.gcd(n);
                let rad = (m / &g) * (n / &g);
                let c = r * s * Rational::from_integer(BigInt::from(g));
                *map.entry(rad).or_insert_with(Rational::zero) += c;
            }
        }
        SqrtSum::from_map(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{int, rat};

    fn r(n: i64) -> SqrtSum {
        SqrtSum::from_rational(int(n))
    }

    fn s(n: u64) -> SqrtSum {
        SqrtSum::term(int(1), n)
    }

    #[test]
    fn canonical_addition() {
        assert_eq!(&s(8) + &s(2), SqrtSum::term(int(3), 2));
        assert!((&(&(&s(2) + &s(3)) - &s(2)) - &s(3)).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&(&s(2) + &s(3)) * &(&s(2) - &s(3)), r(-1));
        assert_eq!(&s(6) * &s(10), SqrtSum::term(int(2), 15));
    }

    #[test]
    fn rationalization() {
        let x = (&r(1) + &s(2)).recip().unwrap();
        assert_eq!(x, &r(-1) + &s(2));
        let y = &SqrtSum::term(int(2), 3) + &s(5);
        assert_eq!(y.div(&y).unwrap(), r(1));
        let d = &(&s(2) + &s(3)) + &s(5);
        let q = r(1).div(&d).unwrap();
        assert_eq!(&q * &d, r(1));
        assert_eq!(r(1).div(&SqrtSum::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn signs() {
        assert_eq!(SqrtSum::zero().sign(), 0);
        assert_eq!((&(&s(2) + &s(3)) - &s(5)).sign(), 1);
        assert_eq!(SqrtSum::term(rat(-1, 6), 6).sign(), -1);
        // 1 + √2 − √(3 + 2√2) = 0 is not representable; pick close values instead
        let close = &(&SqrtSum::term(int(1), 2) * &r(1_000_001)) - &SqrtSum::term(int(1_414_215), 1);
        assert_eq!(close.sign(), -1);
    }

    #[test]
    fn sqrt_of_rationals() {
        assert_eq!(SqrtSum::sqrt_of(&rat(1, 6)), SqrtSum::term(rat(1, 6), 6));
        assert_eq!(SqrtSum::sqrt_of(&rat(9, 4)), SqrtSum::from_rational(rat(3, 2)));
        assert_eq!(SqrtSum::sqrt_of(&int(12)), SqrtSum::term(int(2), 3));
    }

    #[test]
    fn text_round_trip() {
        for t in ["0", "3*sqrt(2)", "-1/6*sqrt(6)", "1-2/3*sqrt(5)+7*sqrt(30)"] {
            let x: SqrtSum = t.parse().unwrap();
            assert_eq!(x.to_string(), t);
        }
        let x: SqrtSum = "sqrt(8)+sqrt(2)".parse().unwrap();
        assert_eq!(x.to_string(), "3*sqrt(2)");
        assert!("sqrt(0)".parse::<SqrtSum>().is_err());
        assert!("".parse::<SqrtSum>().is_err());
    }

    #[test]
    fn interval_contains_sqrt_two() {
        let i = s(2).to_interval(53);
        assert!(i.width() <= rat(1, 1 << 50));
        let reference: BigInt = "14142135623730950488016887242096980785696718753769".parse().unwrap();
        let lo = Rational::new(reference.clone(), BigInt::from(10).pow(49));
        let hi = Rational::new(reference + 1, BigInt::from(10).pow(49));
        assert!(i.lo.to_rational() <= lo && hi <= i.hi.to_rational());
    }
}
