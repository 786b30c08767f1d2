//! Modular arithmetic primitives: primality, multiplicative order, odd
//! primitive roots and quadratic-residue classification.

use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Result};

/// Index of an order-2 cyclotomic class. `D0` is the class of squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Class {
    D0,
    D1,
}

impl Class {
    pub const BOTH: [Class; 2] = [Class::D0, Class::D1];

    pub fn index(self) -> u8 {
        match self {
            Class::D0 => 0,
            Class::D1 => 1,
        }
    }

    pub fn from_index(i: u8) -> Self {
        if i.is_multiple_of(2) {
            Class::D0
        } else {
            Class::D1
        }
    }

    /// The other class (`i + 1 mod 2`).
    pub fn other(self) -> Self {
        match self {
            Class::D0 => Class::D1,
            Class::D1 => Class::D0,
        }
    }
}

/// Class of a product: the class index is additive mod 2.
impl std::ops::Mul for Class {
    type Output = Class;

    fn mul(self, rhs: Class) -> Class {
        if self == rhs {
            Class::D0
        } else {
            Class::D1
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Residue of an odd prime modulo 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PMod8 {
    One,
    Three,
    Five,
    Seven,
}

impl PMod8 {
    pub fn of(p: u64) -> Self {
        match p % 8 {
            1 => PMod8::One,
            3 => PMod8::Three,
            5 => PMod8::Five,
            7 => PMod8::Seven,
            _ => panic!("{p} is even"),
        }
    }

    pub fn value(self) -> u64 {
        match self {
            PMod8::One => 1,
            PMod8::Three => 3,
            PMod8::Five => 5,
            PMod8::Seven => 7,
        }
    }

    /// `p ≡ ±1 (mod 8)`, i.e. 2 is a quadratic residue.
    pub fn two_is_square(self) -> bool {
        matches!(self, PMod8::One | PMod8::Seven)
    }

    /// `p ≡ 1 (mod 4)`, i.e. −1 is a quadratic residue.
    pub fn minus_one_is_square(self) -> bool {
        matches!(self, PMod8::One | PMod8::Five)
    }
}

impl fmt::Display for PMod8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn pow_mod_unchecked(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut base = base % modulus;
    let mut acc = 1 % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// `base^exp mod modulus`, reduced into `[0, modulus)`.
pub fn mod_pow(base: u64, exp: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(invalid(format!(
            "modulus must be at least 2, got {modulus}"
        )));
    }
    Ok(pow_mod_unchecked(base, exp, modulus))
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors in ascending order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Euler's totient by factorisation.
pub fn totient(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, r| acc / r * (r - 1))
}

/// Least `k ≥ 1` with `a^k ≡ 1 (mod modulus)`.
pub fn multiplicative_order(a: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(invalid(format!(
            "modulus must be at least 2, got {modulus}"
        )));
    }
    if gcd(a % modulus, modulus) != 1 {
        return Err(invalid(format!("{a} is not a unit modulo {modulus}")));
    }
    let phi = totient(modulus);
    Ok(order_dividing(a, modulus, phi, &prime_factors(phi)))
}

/// Order of `a` given that it divides `group_order` (whose prime factors are supplied).
fn order_dividing(a: u64, modulus: u64, group_order: u64, factors: &[u64]) -> u64 {
    let mut order = group_order;
    for &r in factors {
        while order.is_multiple_of(r) && pow_mod_unchecked(a, order / r, modulus) == 1 {
            order /= r;
        }
    }
    order
}

pub(crate) fn validate_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(invalid(format!("p must be an odd prime, got {p}")));
    }
    Ok(())
}

/// Odd primitive roots of `p^m` in increasing order, all below `2p^m`.
///
/// Each one is also a primitive root of `2p^m`.
pub fn odd_primitive_roots(p: u64, m: u32) -> Result<impl Iterator<Item = u64>> {
    validate_odd_prime(p)?;
    if m == 0 {
        return Err(invalid("m must be at least 1"));
    }
    let q = p
        .checked_pow(m)
        .filter(|q| q.checked_mul(2).is_some())
        .ok_or_else(|| invalid(format!("{p}^{m} overflows")))?;
    let phi = q / p * (p - 1);
    let factors = prime_factors(phi);
    Ok((3..2 * q)
        .step_by(2)
        .filter(move |&g| g % p != 0 && order_dividing(g, q, phi, &factors) == phi))
}

/// Smallest odd `g > 1` generating the unit group of `p^m`.
pub fn find_odd_primitive_root(p: u64, m: u32) -> Result<u64> {
    let g = odd_primitive_roots(p, m)?
        .next()
        .expect("a primitive root of p^m exists and one of g, g + p^m is odd");
    let q = p.pow(m);
    let phi = q / p * (p - 1);
    assert_eq!(
        multiplicative_order(g, 2 * q)?,
        phi,
        "odd primitive root of {p}^{m} must also generate the units of 2*{p}^{m}"
    );
    Ok(g)
}

#[inline]
pub(crate) fn euler_class(n: u64, p: u64) -> Class {
    if pow_mod_unchecked(n, (p - 1) / 2, p) == 1 {
        Class::D0
    } else {
        Class::D1
    }
}

/// Quadratic-residue class of `n` modulo the odd prime `p` by Euler's criterion.
pub fn qr_class(n: i64, p: u64) -> Result<Class> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(invalid(format!("p must be an odd prime, got {p}")));
    }
    let r = n.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Err(invalid(format!("{p} divides {n}")));
    }
    Ok(euler_class(r, p))
}

/// One instance `(p, m, q = p^m, N = 2p^m, g)` of the sequence family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimePowerParams {
    p: u64,
    m: u32,
    q: u64,
    period: u64,
    g: u64,
    phi: u64,
}

impl PrimePowerParams {
    /// Uses the smallest odd primitive root.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        let g = find_odd_primitive_root(p, m)?;
        Self::with_root(p, m, g)
    }

    pub fn with_root(p: u64, m: u32, g: u64) -> Result<Self> {
        validate_odd_prime(p)?;
        if m == 0 {
            return Err(invalid("m must be at least 1"));
        }
        let q = p
            .checked_pow(m)
            .filter(|q| q.checked_mul(2).is_some())
            .ok_or_else(|| invalid(format!("{p}^{m} overflows")))?;
        let phi = q / p * (p - 1);
        if g.is_multiple_of(2) || g <= 1 || g >= 2 * q {
            return Err(invalid(format!(
                "g must be odd with 1 < g < {}, got {g}",
                2 * q
            )));
        }
        if gcd(g, p) != 1 || multiplicative_order(g, q)? != phi {
            return Err(invalid(format!("{g} is not a primitive root of {q}")));
        }
        Ok(Self {
            p,
            m,
            q,
            period: 2 * q,
            g,
            phi,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `p^m`, the period of the component sequences.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// `2p^m`, the period of the main sequence.
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    /// `φ(p^m) = p^(m−1)(p−1)`.
    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// `p^(m−1)`.
    pub fn lower_power(&self) -> u64 {
        self.q / self.p
    }

    pub fn p_mod_8(&self) -> PMod8 {
        PMod8::of(self.p)
    }

    /// `p^j` for `j ≤ m`.
    pub fn p_pow(&self, j: u32) -> u64 {
        self.p.pow(j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;
    use proptest::prelude::*;

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(5, 2, 18), Ok(7));
        assert_eq!(mod_pow(7, 0, 9), Ok(1));
        assert_eq!(mod_pow(3, 6, 7), Ok(1));
        assert!(matches!(mod_pow(3, 2, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn multiplicative_order_examples() {
        assert_eq!(multiplicative_order(5, 9), Ok(6));
        assert_eq!(multiplicative_order(1, 9), Ok(1));
        assert_eq!(multiplicative_order(8, 9), Ok(2));
        assert!(matches!(
            multiplicative_order(3, 9),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn odd_primitive_root_examples() {
        assert_eq!(find_odd_primitive_root(3, 2), Ok(5));
        assert_eq!(find_odd_primitive_root(5, 1), Ok(3));
        assert_eq!(find_odd_primitive_root(7, 1), Ok(3));
        assert!(find_odd_primitive_root(9, 1).is_err());
        assert!(find_odd_primitive_root(2, 1).is_err());
    }

    #[test]
    fn qr_class_examples() {
        assert_eq!(qr_class(2, 7), Ok(Class::D0));
        assert_eq!(qr_class(2, 5), Ok(Class::D1));
        assert_eq!(qr_class(4, 5), Ok(Class::D0));
        assert_eq!(qr_class(-1, 5), Ok(Class::D0));
        assert!(matches!(qr_class(10, 5), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn params_reject_bad_input() {
        assert!(PrimePowerParams::new(9, 1).is_err());
        assert!(PrimePowerParams::new(3, 0).is_err());
        // 3 is not a primitive root of 9 (not even a unit).
        assert!(PrimePowerParams::with_root(3, 2, 3).is_err());
        // 8 is even.
        assert!(PrimePowerParams::with_root(3, 2, 8).is_err());
        // 7 has order 3 modulo 9.
        assert!(PrimePowerParams::with_root(3, 2, 7).is_err());
        let params = PrimePowerParams::with_root(3, 2, 5).unwrap();
        assert_eq!((params.q(), params.period(), params.phi()), (9, 18, 6));
    }

    // Brute-force order for the property below.
    fn naive_order(a: u64, n: u64) -> u64 {
        let mut x = a % n;
        let mut k = 1;
        while x != 1 {
            x = x * a % n;
            k += 1;
        }
        k
    }

    const SMALL_PRIMES: [u64; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

    proptest! {
        #[test]
        fn order_matches_naive(a in 1u64..500, n in 2u64..500) {
            prop_assume!(gcd(a, n) == 1);
            prop_assert_eq!(multiplicative_order(a, n).unwrap(), naive_order(a, n));
        }

        #[test]
        fn euler_agrees_with_enumeration(idx in 0usize..10, m in 1u32..3) {
            let p = SMALL_PRIMES[idx];
            let g = find_odd_primitive_root(p, m).unwrap();
            let squares: std::collections::BTreeSet<u64> =
                (0..(p - 1) / 2).map(|t| pow_mod_unchecked(g, 2 * t, p)).collect();
            for n in 1..p {
                prop_assert_eq!(qr_class(n as i64, p).unwrap() == Class::D0, squares.contains(&n));
            }
        }

        #[test]
        fn root_generates_both_moduli(idx in 0usize..10, m in 1u32..3) {
            let p = SMALL_PRIMES[idx];
            let g = find_odd_primitive_root(p, m).unwrap();
            let q = p.pow(m);
            prop_assert_eq!(g % 2, 1);
            prop_assert_eq!(naive_order(g, q), q / p * (p - 1));
            prop_assert_eq!(naive_order(g, 2 * q), q / p * (p - 1));
        }
    }
}
