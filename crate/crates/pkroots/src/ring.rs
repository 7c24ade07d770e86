//! The ambient ring `Z/(p^k)` and capped p-adic valuations.
//!
//! Every residue computation in the crate happens in a [`PrimePowerRing`].
//! Valuations are capped at the working precision `k`: a residue that is
//! zero mod `p^k` is indistinguishable from one with valuation `>= k`, and
//! [`CappedValuation::AtLeastCap`] makes that explicit.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::Error;

/// A p-adic valuation truncated at the working precision.
///
/// `Finite(v)` is exact (`v < k` always holds for values produced by this
/// crate); `AtLeastCap` stands for "at least `k`", which is all the counting
/// recursion ever needs to know.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CappedValuation {
    Finite(u32),
    AtLeastCap,
}

impl CappedValuation {
    pub fn is_finite(self) -> bool {
        matches!(self, CappedValuation::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            CappedValuation::Finite(v) => Some(v),
            CappedValuation::AtLeastCap => None,
        }
    }
}

/// The ring `Z/(p^k)` with `p` prime and `k >= 1`; residues are represented
/// by the integers `{0, ..., p^k - 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePowerRing {
    p: u64,
    k: u32,
    modulus: BigUint,
}

impl PrimePowerRing {
    /// Builds `Z/(p^k)`, validating that `p` is prime and `k >= 1`.
    pub fn new(p: u64, k: u32) -> Result<Self, Error> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidPrecision);
        }
        Ok(Self {
            p,
            k,
            modulus: BigUint::from(p).pow(k),
        })
    }

    /// Same prime at a strictly smaller precision `k - drop`.
    pub(crate) fn lower_precision(&self, drop: u32) -> Self {
        debug_assert!(drop < self.k);
        Self {
            p: self.p,
            k: self.k - drop,
            modulus: self.pow_p(self.k - drop),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// `p^e`, computed by binary exponentiation.
    pub fn pow_p(&self, e: u32) -> BigUint {
        BigUint::from(self.p).pow(e)
    }

    /// Canonical representative of `n` mod `p^k` in `{0, ..., p^k - 1}`.
    pub fn reduce(&self, n: &BigInt) -> BigUint {
        let m = BigInt::from(self.modulus.clone());
        let r = n.mod_floor(&m);
        debug_assert!(!r.is_negative());
        r.to_biguint().expect("mod_floor result is non-negative")
    }

    /// Capped valuation of `n` mod `p^k`: the exact number of times `p`
    /// divides the canonical representative, or `AtLeastCap` iff the
    /// representative is zero.
    pub fn valuation(&self, n: &BigInt) -> CappedValuation {
        self.valuation_of_residue(&self.reduce(n))
    }

    /// Capped valuation of an already-reduced residue.
    pub fn valuation_of_residue(&self, r: &BigUint) -> CappedValuation {
        if r.is_zero() {
            return CappedValuation::AtLeastCap;
        }
        let p = BigUint::from(self.p);
        let mut v = 0u32;
        let mut rest = r.clone();
        loop {
            let (q, rem) = rest.div_rem(&p);
            if !rem.is_zero() {
                break;
            }
            v += 1;
            rest = q;
        }
        debug_assert!(v < self.k);
        CappedValuation::Finite(v)
    }

    /// Residue addition.
    pub(crate) fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.modulus {
            s - &self.modulus
        } else {
            s
        }
    }

    /// Residue multiplication.
    pub(crate) fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.modulus
    }
}

/// Deterministic Miller-Rabin primality test, exact for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // This witness set decides primality for every n < 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ring(p: u64, k: u32) -> PrimePowerRing {
        PrimePowerRing::new(p, k).unwrap()
    }

    #[test]
    fn construction_validates_inputs() {
        assert!(PrimePowerRing::new(2, 1).is_ok());
        assert!(PrimePowerRing::new(123_456_791, 23).is_ok());
        assert_eq!(PrimePowerRing::new(1, 3), Err(Error::NotPrime(1)));
        assert_eq!(PrimePowerRing::new(561, 1), Err(Error::NotPrime(561)));
        assert_eq!(PrimePowerRing::new(5, 0), Err(Error::InvalidPrecision));
    }

    #[test]
    fn modulus_matches_pow_p() {
        for (p, k) in [(2u64, 10u32), (3, 7), (17, 100), (123_456_791, 23)] {
            let r = ring(p, k);
            assert_eq!(r.pow_p(k), *r.modulus());
        }
        assert_eq!(ring(3, 7).pow_p(0), BigUint::one());
        assert_eq!(ring(3, 7).pow_p(6), BigUint::from(729u32));
        assert_eq!(ring(17, 2).pow_p(2), BigUint::from(289u32));
    }

    #[test]
    fn reduce_canonical_range() {
        let r = ring(3, 1);
        assert_eq!(r.reduce(&BigInt::from(-10)), BigUint::from(2u32));
        assert_eq!(r.reduce(&BigInt::from(738)), BigUint::zero());
        let r7 = ring(3, 7);
        assert_eq!(r7.reduce(&BigInt::from(2187)), BigUint::zero());
        assert_eq!(r7.reduce(&BigInt::from(-10)), BigUint::from(2177u32));
    }

    #[test]
    fn valuation_examples() {
        let r = ring(3, 7);
        assert_eq!(r.valuation(&BigInt::from(738)), CappedValuation::Finite(2));
        assert_eq!(r.valuation(&BigInt::from(45)), CappedValuation::Finite(2));
        assert_eq!(
            ring(5, 4).valuation(&BigInt::from(0)),
            CappedValuation::AtLeastCap
        );
    }

    #[test]
    fn valuation_orders_below_cap() {
        assert!(CappedValuation::Finite(6) < CappedValuation::AtLeastCap);
        assert!(CappedValuation::Finite(0) < CappedValuation::Finite(1));
    }

    #[test]
    fn primality_covers_large_inputs() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(257));
        assert!(is_prime_u64(263));
        assert!(is_prime_u64(10_009));
        assert!(is_prime_u64(123_456_791));
        assert!(is_prime_u64(2_305_843_009_213_693_951)); // 2^61 - 1
        assert!(!is_prime_u64(0));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(4));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }
}
