//! Coefficient fields for exact polynomial arithmetic: the rationals with
//! arbitrary-precision coefficients, and prime fields with word-sized moduli.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A field of coefficients. Instances carry runtime data (the modulus for a
/// prime field), so two values of the same Rust type can still belong to
/// different fields; operations check this where it is observable.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + std::hash::Hash + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// None exactly when `a` is zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// Human-readable field name, e.g. `QQ` or `GF(101)`.
    fn name(&self) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The rational numbers.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn name(&self) -> String {
        "QQ".to_string()
    }
}

/// The prime field of order `p`, elements stored as reduced residues.
/// Supports any odd prime below 2^63; multiplication goes through u128.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    p: u64,
}

impl Fp {
    /// The modulus must be a prime; this is asserted probabilistically.
    pub fn new(p: u64) -> Fp {
        assert!(p >= 2 && p < (1 << 63), "modulus out of range: {p}");
        assert!(is_prime_u64(p), "modulus {p} is not prime");
        Fp { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, a);
            }
            a = self.mul_raw(a, a);
            e >>= 1;
        }
        acc
    }
}

impl Field for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_raw(*a, *b)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: p is prime, so a^(p-2) inverts a.
        Some(self.pow(*a, self.p - 2))
    }
    fn from_int(&self, n: i64) -> u64 {
        ((n as i128).rem_euclid(self.p as i128)) as u64
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        let m = n % BigInt::from(self.p);
        let m = if m.is_negative() { m + BigInt::from(self.p) } else { m };
        let (_, digits) = m.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }
    fn name(&self) -> String {
        format!("GF({})", self.p)
    }
}

/// Deterministic Miller-Rabin for u64; the witness set covers the full range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        a %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(mut n: u64) -> u64 {
    loop {
        n += 1;
        if is_prime_u64(n) {
            return n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_basics() {
        let f = Fp::new(101);
        assert_eq!(f.add(&100, &5), 4);
        assert_eq!(f.sub(&3, &7), 97);
        assert_eq!(f.mul(&50, &50), 2500 % 101);
        let inv = f.inv(&37).unwrap();
        assert_eq!(f.mul(&37, &inv), 1);
        assert_eq!(f.from_int(-1), 100);
    }

    #[test]
    fn fp_large_modulus() {
        let p = (1u64 << 62) - 57; // prime
        assert!(is_prime_u64(p));
        let f = Fp::new(p);
        let a = p - 2;
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), 1);
    }

    #[test]
    fn rationals_inverse() {
        let q = Rationals;
        let x = q.from_int(-6);
        let y = q.inv(&x).unwrap();
        assert_eq!(q.mul(&x, &y), q.one());
        assert!(q.inv(&q.zero()).is_none());
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(101));
        assert!(is_prime_u64(32003));
        assert!(is_prime_u64(65537));
        assert!(is_prime_u64(65521));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(32001));
        assert_eq!(next_prime(1 << 30), 1073741827);
    }
}
