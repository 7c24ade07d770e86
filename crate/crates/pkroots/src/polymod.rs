//! Dense polynomials with coefficients in `Z/(p^k)`.
//!
//! A [`PolyMod`] keeps its *formal* degree: reducing `x^10 - 10x + 738` mod
//! `3^7` yields a length-11 coefficient vector even when leading coefficients
//! vanish mod `p^k`. The content-valuation step of the counting recursion
//! ranges over all formal coefficient slots, so the length is part of the
//! value. Only [`PolyMod::reduce_mod_p`] strips down to the true degree.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::error::Error;
use crate::polyfp::PolyFp;
use crate::ring::{CappedValuation, PrimePowerRing};

/// A polynomial over `Z/(p^k)`, stored as residues in increasing-degree order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMod {
    ring: PrimePowerRing,
    coeffs: Vec<BigUint>,
}

impl PolyMod {
    /// Reduces a raw integer coefficient vector (constant term first) into
    /// the ring. The formal degree `raw.len() - 1` is preserved.
    pub fn from_integer_coeffs(ring: PrimePowerRing, raw: &[BigInt]) -> Result<Self, Error> {
        if raw.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        let coeffs = raw.iter().map(|c| ring.reduce(c)).collect();
        Ok(Self { ring, coeffs })
    }

    /// Wraps residues that are already canonical.
    pub(crate) fn from_residues(ring: PrimePowerRing, coeffs: Vec<BigUint>) -> Self {
        debug_assert!(!coeffs.is_empty());
        debug_assert!(coeffs.iter().all(|c| c < ring.modulus()));
        Self { ring, coeffs }
    }

    pub fn ring(&self) -> &PrimePowerRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// The length-derived degree bound (trailing zeros included).
    pub fn formal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Horner evaluation of `f(x)` mod `p^k`.
    pub fn eval(&self, x: &BigUint) -> BigUint {
        let mut acc = BigUint::zero();
        for c in self.coeffs.iter().rev() {
            acc = self.ring.add(&self.ring.mul(&acc, x), c);
        }
        acc
    }

    /// Minimum capped valuation over all coefficients; `AtLeastCap` iff the
    /// polynomial is identically zero mod `p^k`.
    pub fn content_valuation(&self) -> CappedValuation {
        let mut best = CappedValuation::AtLeastCap;
        for c in &self.coeffs {
            let v = self.ring.valuation_of_residue(c);
            if v < best {
                best = v;
                if best == CappedValuation::Finite(0) {
                    break;
                }
            }
        }
        best
    }

    /// Divides every coefficient exactly by `p^drop`, landing in
    /// `Z/(p^(k-drop))`. Requires `1 <= drop <= k-1` and `drop` at most the
    /// content valuation; a non-exact division signals a caller logic error.
    pub fn divide_by_p_power(&self, drop: u32) -> Result<Self, Error> {
        let k = self.ring.k();
        if drop == 0 || drop >= k {
            return Err(Error::ValuationOutOfRange { drop, k });
        }
        let target = self.ring.lower_precision(drop);
        let divisor = self.ring.pow_p(drop);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(&divisor);
            if !r.is_zero() {
                return Err(Error::InexactDivision { power: drop });
            }
            debug_assert!(&q < target.modulus());
            coeffs.push(q);
        }
        Ok(Self::from_residues(target, coeffs))
    }

    /// Coefficients of `f(base + x)` mod `p^k`, by repeated synthetic
    /// division. `base` may be any residue; the formal degree is preserved.
    pub fn taylor_shift(&self, base: &BigUint) -> Self {
        let mut c = self.coeffs.clone();
        let d = c.len() - 1;
        for i in 0..d {
            for j in (i..d).rev() {
                let t = self.ring.mul(base, &c[j + 1]);
                c[j] = self.ring.add(&c[j], &t);
            }
        }
        Self::from_residues(self.ring.clone(), c)
    }

    /// Convenience for shift bases in `{0, ..., p-1}`.
    pub fn taylor_shift_small(&self, base: u64) -> Self {
        debug_assert!(base < self.ring.p());
        self.taylor_shift(&BigUint::from(base))
    }

    /// Coefficient-wise reduction mod `p`, trimmed to the true degree.
    pub fn reduce_mod_p(&self) -> PolyFp {
        let p = BigUint::from(self.ring.p());
        let coeffs: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c % &p;
                r.iter_u64_digits().next().unwrap_or(0)
            })
            .collect();
        PolyFp::new(self.ring.p(), coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, k: u32) -> PrimePowerRing {
        PrimePowerRing::new(p, k).unwrap()
    }

    fn poly(p: u64, k: u32, raw: &[i64]) -> PolyMod {
        let coeffs: Vec<BigInt> = raw.iter().map(|&c| BigInt::from(c)).collect();
        PolyMod::from_integer_coeffs(ring(p, k), &coeffs).unwrap()
    }

    /// x^10 - 10x + 738, the running example.
    fn running_example() -> PolyMod {
        poly(3, 7, &[738, -10, 0, 0, 0, 0, 0, 0, 0, 0, 1])
    }

    #[test]
    fn reduction_preserves_formal_degree() {
        let f = running_example();
        assert_eq!(f.formal_degree(), 10);
        assert_eq!(f.coeffs()[0], BigUint::from(738u32));
        assert_eq!(f.coeffs()[1], BigUint::from(2177u32)); // -10 mod 3^7
        assert_eq!(f.coeffs()[10], BigUint::from(1u32));
    }

    #[test]
    fn negative_coefficients_reduce_canonically() {
        let g = poly(17, 100, &[-8, 28, -38, 25, -8, 1]);
        let m = ring(17, 100).modulus().clone();
        assert_eq!(g.coeffs()[0], &m - 8u32);
        assert_eq!(g.coeffs()[2], &m - 38u32);
        assert_eq!(g.coeffs()[1], BigUint::from(28u32));
    }

    #[test]
    fn empty_coefficients_rejected() {
        assert_eq!(
            PolyMod::from_integer_coeffs(ring(3, 2), &[]),
            Err(Error::EmptyCoefficients)
        );
        let z = poly(3, 2, &[0]);
        assert!(z.is_zero());
    }

    #[test]
    fn eval_examples() {
        let f = running_example();
        assert_eq!(f.eval(&BigUint::from(1u32)), BigUint::from(729u32));
        let lin = poly(5, 3, &[-1, 1]);
        assert_eq!(lin.eval(&BigUint::from(1u32)), BigUint::zero());
        let c = poly(7, 2, &[5]);
        assert_eq!(c.eval(&BigUint::from(33u32)), BigUint::from(5u32));
    }

    #[test]
    fn content_valuation_examples() {
        assert_eq!(
            poly(3, 5, &[9, 0, 3]).content_valuation(),
            CappedValuation::Finite(1)
        );
        assert_eq!(
            running_example().content_valuation(),
            CappedValuation::Finite(0)
        );
        assert_eq!(
            poly(3, 4, &[0, 0]).content_valuation(),
            CappedValuation::AtLeastCap
        );
    }

    #[test]
    fn divide_by_p_power_examples() {
        let f = poly(3, 5, &[9, 0, 3]);
        let g = f.divide_by_p_power(1).unwrap();
        assert_eq!(g.ring().k(), 4);
        assert_eq!(g.coeffs(), &[3u32.into(), 0u32.into(), 1u32.into()]);

        let h = poly(5, 4, &[0, 5]).divide_by_p_power(1).unwrap();
        assert_eq!(h.coeffs(), &[0u32.into(), 1u32.into()]);

        let q = poly(3, 4, &[27, 9]).divide_by_p_power(2).unwrap();
        assert_eq!(q.ring().k(), 2);
        assert_eq!(q.coeffs(), &[3u32.into(), 1u32.into()]);
    }

    #[test]
    fn divide_by_p_power_rejects_bad_drops() {
        let f = poly(3, 5, &[9, 0, 3]);
        assert_eq!(
            f.divide_by_p_power(0),
            Err(Error::ValuationOutOfRange { drop: 0, k: 5 })
        );
        assert_eq!(
            f.divide_by_p_power(5),
            Err(Error::ValuationOutOfRange { drop: 5, k: 5 })
        );
        assert_eq!(
            f.divide_by_p_power(2),
            Err(Error::InexactDivision { power: 2 })
        );
    }

    #[test]
    fn taylor_shift_binomial() {
        let f = poly(7, 3, &[0, 0, 1]);
        let s = f.taylor_shift_small(1);
        assert_eq!(s.coeffs(), &[1u32.into(), 2u32.into(), 1u32.into()]);

        let lin = poly(5, 2, &[-2, 1]);
        let shifted = lin.taylor_shift_small(2);
        assert_eq!(shifted.coeffs(), &[0u32.into(), 1u32.into()]);
    }

    #[test]
    fn taylor_shift_matches_binomial_expansion() {
        // Independent route: f(x + b) via explicit binomial sums over Z.
        let raw: Vec<i64> = vec![738, -10, 0, 0, 0, 0, 0, 0, 0, 0, 1];
        let f = running_example();
        let shifted = f.taylor_shift_small(1);
        let mut expected = vec![BigInt::zero(); raw.len()];
        for (j, &c) in raw.iter().enumerate() {
            // c * (x + 1)^j
            let mut binom = BigInt::from(1);
            for (i, e) in expected.iter_mut().enumerate().take(j + 1) {
                *e += &binom * c;
                binom = binom * (j - i) / (i + 1);
            }
        }
        let expected =
            PolyMod::from_integer_coeffs(ring(3, 7), &expected).unwrap();
        assert_eq!(shifted, expected);
        assert_eq!(shifted.coeffs()[0], BigUint::from(729u32));
        assert_eq!(shifted.coeffs()[1], BigUint::zero());
        assert_eq!(shifted.coeffs()[2], BigUint::from(45u32));
    }

    #[test]
    fn reduce_mod_p_strips_to_true_degree() {
        let f = running_example();
        let fp = f.reduce_mod_p();
        assert_eq!(fp.degree(), 10);
        assert_eq!(fp.coeffs(), &[0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 1]);

        assert!(poly(3, 5, &[9, 0, 3]).reduce_mod_p().is_zero());

        let lin = poly(2, 4, &[-1, 1]).reduce_mod_p();
        assert_eq!(lin.coeffs(), &[1, 1]);
    }
}
