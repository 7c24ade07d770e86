//! Brute-force ground truth: evaluate at every residue of `Z/(p^k)`.
//!
//! Only usable at desk scale, which is exactly its job: the engine is
//! validated against it on every ring small enough to enumerate.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::Error;
use crate::polymod::PolyMod;
use crate::ring::mul_mod_u64;

/// Default cap on the modulus: keeps a full enumeration in the seconds
/// range for moderate degrees.
pub const DEFAULT_BRUTE_FORCE_GUARD: u64 = 10_000_000;

/// Counts `|{x in Z/(p^k) : f(x) = 0}|` by exhaustive Horner evaluation.
/// Refuses moduli above `guard` rather than hanging.
pub fn brute_force_count(f: &PolyMod, guard: u64) -> Result<BigUint, Error> {
    let modulus = f.ring().modulus();
    let m = modulus.to_u64().filter(|&m| m <= guard).ok_or_else(|| {
        Error::GuardExceeded {
            modulus: modulus.to_string(),
            guard,
        }
    })?;
    // Residues fit in u64 within the guard, so the whole scan runs on
    // machine words.
    let coeffs: Vec<u64> = f
        .coeffs()
        .iter()
        .map(|c| c.to_u64().expect("reduced coefficient fits once modulus does"))
        .collect();
    let mut count = 0u64;
    for x in 0..m {
        let mut acc = 0u64;
        for &c in coeffs.iter().rev() {
            acc = (mul_mod_u64(acc, x, m) + c) % m;
        }
        if acc == 0 {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PrimePowerRing;
    use num_bigint::BigInt;

    fn poly(p: u64, k: u32, raw: &[i64]) -> PolyMod {
        let ring = PrimePowerRing::new(p, k).unwrap();
        let coeffs: Vec<BigInt> = raw.iter().map(|&c| BigInt::from(c)).collect();
        PolyMod::from_integer_coeffs(ring, &coeffs).unwrap()
    }

    #[test]
    fn running_example_has_190_roots() {
        let f = poly(3, 7, &[738, -10, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(
            brute_force_count(&f, DEFAULT_BRUTE_FORCE_GUARD).unwrap(),
            BigUint::from(190u32)
        );
    }

    #[test]
    fn small_cases() {
        assert_eq!(
            brute_force_count(&poly(2, 3, &[0, 0, 1]), 100).unwrap(),
            BigUint::from(2u32)
        );
        assert_eq!(
            brute_force_count(&poly(2, 3, &[8]), 100).unwrap(),
            BigUint::from(8u32)
        );
    }

    #[test]
    fn guard_refuses_large_moduli() {
        let f = poly(17, 100, &[-8, 28, -38, 25, -8, 1]);
        assert!(matches!(
            brute_force_count(&f, DEFAULT_BRUTE_FORCE_GUARD),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(matches!(
            brute_force_count(&poly(101, 4, &[1, 1]), 1000),
            Err(Error::GuardExceeded { .. })
        ));
    }
}
