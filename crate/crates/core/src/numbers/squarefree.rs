//! Square-free decomposition of machine integers: `n = s²·m` with `m`
//! square-free. Trial division handles the small radicands that occur in
//! practice; Pollard's rho (with a deterministic Miller–Rabin test) covers
//! whatever cofactor is left.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_BOUND: u64 = 1 << 12;

/// Returns `(s, m)` with `n = s²·m` and `m` square-free. `n` must be positive.
pub fn squarefree_decompose(n: u64) -> (u64, u64) {
    assert!(n > 0, "squarefree_decompose(0)");
    let mut rest = n;
    let mut square = 1u64;
    let mut free = 1u64;

    let push = |p: u64, e: u32, square: &mut u64, free: &mut u64| {
        *square *= p.pow(e / 2);
        if e % 2 == 1 {
            *free *= p;
        }
    };

    let mut p = 2u64;
    while p < TRIAL_BOUND && p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            push(p, e, &mut square, &mut free);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        let mut primes = Vec::new();
        factor_into(rest, &mut primes);
        primes.sort_unstable();
        let mut i = 0;
        while i < primes.len() {
            let q = primes[i];
            let mut e = 0;
            while i < primes.len() && primes[i] == q {
                e += 1;
                i += 1;
            }
            push(q, e, &mut square, &mut free);
        }
    }
    (square, free)
}

/// [`squarefree_decompose`] for arbitrary-size integers.
pub fn squarefree_decompose_big(n: &BigUint) -> (BigUint, BigUint) {
    assert!(!n.is_zero(), "squarefree_decompose_big(0)");
    if let Some(small) = n.to_u64() {
        let (s, m) = squarefree_decompose(small);
        return (BigUint::from(s), BigUint::from(m));
    }
    let mut primes = Vec::new();
    factor_big(n.clone(), &mut primes);
    primes.sort();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut i = 0;
    while i < primes.len() {
        let q = primes[i].clone();
        let mut e = 0u32;
        while i < primes.len() && primes[i] == q {
            e += 1;
            i += 1;
        }
        square *= q.pow(e / 2);
        if e % 2 == 1 {
            free *= q;
        }
    }
    (square, free)
}

/// Some prime factor of `n > 1`.
pub fn prime_factor_big(n: &BigUint) -> BigUint {
    assert!(n > &BigUint::one());
    if let Some(small) = n.to_u64() {
        let mut v = Vec::new();
        factor_into(small, &mut v);
        return BigUint::from(*v.iter().min().unwrap());
    }
    let mut p = 2u64;
    while p < TRIAL_BOUND {
        if (n % p).is_zero() {
            return BigUint::from(p);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut m = n.clone();
    while !is_prime_big(&m) {
        m = pollard_rho_big(&m);
        if let Some(small) = m.to_u64() {
            return prime_factor_big(&BigUint::from(small));
        }
    }
    m
}

fn factor_big(mut n: BigUint, out: &mut Vec<BigUint>) {
    let mut p = 2u64;
    while p < TRIAL_BOUND {
        let bp = BigUint::from(p);
        while (&n % &bp).is_zero() {
            n /= &bp;
            out.push(bp.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            let mut v = Vec::new();
            factor_into(small, &mut v);
            out.extend(v.into_iter().map(BigUint::from));
            continue;
        }
        if is_prime_big(&m) {
            out.push(m);
            continue;
        }
        let d = pollard_rho_big(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
}

fn is_prime_big(n: &BigUint) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    // Probabilistic beyond 2^64 but with 20 fixed bases the error is negligible.
    'witness: for a in [
        2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho_big(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // Deterministic witness set for all 64-bit integers.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: u64) -> (u64, u64) {
        let mut s = 1;
        let mut k = 2;
        while k * k <= n {
            if n % (k * k) == 0 {
                s = k;
            }
            k += 1;
        }
        (s, n / (s * s))
    }

    #[test]
    fn matches_brute_force_for_small_numbers() {
        for n in 1..5000 {
            assert_eq!(squarefree_decompose(n), brute(n), "n = {n}");
        }
    }

    #[test]
    fn large_cofactors() {
        let p = 1_000_003u64;
        let q = 999_983u64;
        assert_eq!(squarefree_decompose(p * p * 6), (p, 6));
        assert_eq!(squarefree_decompose(p * q), (1, p * q));
        assert_eq!(squarefree_decompose(p * p * q), (p, q));
    }

    #[test]
    fn big_integers() {
        let p = BigUint::from(1_000_000_007u64);
        let n = &p * &p * &p * BigUint::from(12u32);
        assert_eq!(
            squarefree_decompose_big(&n),
            (&p * BigUint::from(2u32), BigUint::from(3 * 1_000_000_007u64))
        );
        let big = BigUint::from(u64::MAX) * BigUint::from(u64::MAX) * BigUint::from(5u32);
        assert_eq!(
            squarefree_decompose_big(&big),
            (BigUint::from(u64::MAX), BigUint::from(5u32))
        );
        // Square-free part beyond 64 bits.
        let q = BigUint::from(18_446_744_073_709_551_557u64);
        let r = BigUint::from(1_000_000_007u64);
        assert_eq!(squarefree_decompose_big(&(&q * &r * &r * &r)), (r.clone(), &q * &r));
    }

    #[test]
    fn prime_factors() {
        assert_eq!(prime_factor_big(&BigUint::from(35u32)), BigUint::from(5u32));
        let q = BigUint::from(18_446_744_073_709_551_557u64);
        let r = BigUint::from(1_000_000_007u64);
        let f = prime_factor_big(&(&q * &r));
        assert!(f == q || f == r);
    }
}
