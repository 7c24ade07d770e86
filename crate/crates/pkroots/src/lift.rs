//! Root-cluster descent: how a residue class `z + p*Z` of `Z/(p^k)` is
//! rescaled into a fresh counting problem at lower precision.
//!
//! The coefficient of `x^i` in `f(z + p*x)` is `c_i * p^i`, where `c_i` is
//! the `i`-th coefficient of the shifted polynomial `f(z + x)`. The minimum
//! of `i + ord_p(c_i)` is therefore the content valuation of `f(z + p*x)`
//! ([`shift_valuation`]); dividing by that power of `p` gives the child
//! polynomial whose roots mod `p^(k-s)` correspond `p^(s-1)`-to-one to the
//! roots of `f` lying over `z` ([`child_poly`]).

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::Error;
use crate::polymod::PolyMod;
use crate::ring::CappedValuation;

/// The content valuation `s` of `f(base + p*x)`, capped at the precision
/// `k`: `Finite(s)` with `s < k` is exact, `AtLeastCap` means `s >= k`.
/// Errors if `f` vanishes identically mod `p^k`.
pub fn shift_valuation(f: &PolyMod, base: u64) -> Result<CappedValuation, Error> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(valuation_of_shifted(&f.taylor_shift_small(base)))
}

/// As [`shift_valuation`], given the already-shifted coefficients of
/// `f(base + x)`. Coefficient slots with index `>= k` contribute at least
/// `k` and are skipped.
pub(crate) fn valuation_of_shifted(shifted: &PolyMod) -> CappedValuation {
    let ring = shifted.ring();
    let k = ring.k();
    let mut best: Option<u32> = None;
    for (i, c) in shifted.coeffs().iter().enumerate().take(k as usize) {
        if let CappedValuation::Finite(v) = ring.valuation_of_residue(c) {
            let term = i as u32 + v;
            if term < k && best.is_none_or(|b| term < b) {
                best = Some(term);
                if term == 0 {
                    break;
                }
            }
        }
    }
    match best {
        Some(s) => CappedValuation::Finite(s),
        None => CappedValuation::AtLeastCap,
    }
}

/// The rescaled polynomial `f(base + p*x) / p^s` over `Z/(p^(k-s))`.
///
/// Requires `s = shift_valuation(f, base)` and `2 <= s <= k-1`. A non-exact
/// coefficient division means `s` was not the shift valuation; it aborts
/// with an error rather than rounding.
pub fn child_poly(f: &PolyMod, base: u64, exponent: u32) -> Result<PolyMod, Error> {
    child_of_shifted(&f.taylor_shift_small(base), exponent)
}

/// As [`child_poly`], given the already-shifted coefficients.
pub(crate) fn child_of_shifted(shifted: &PolyMod, exponent: u32) -> Result<PolyMod, Error> {
    let ring = shifted.ring();
    let k = ring.k();
    if exponent < 2 || exponent >= k {
        return Err(Error::ExponentOutOfRange { exponent, k });
    }
    let target = ring.lower_precision(exponent);
    let mut coeffs = Vec::with_capacity(shifted.coeffs().len());
    // p^(i - s) mod p^(k-s), grown incrementally for i >= s.
    let p = BigUint::from(ring.p());
    let mut scale = BigUint::from(1u32);
    for (i, c) in shifted.coeffs().iter().enumerate() {
        let i = i as u32;
        if i >= exponent {
            if i > exponent {
                scale = (&scale * &p) % target.modulus();
            }
            coeffs.push((c * &scale) % target.modulus());
        } else {
            let divisor = ring.pow_p(exponent - i);
            let (q, r) = c.div_rem(&divisor);
            if !r.is_zero() {
                return Err(Error::InexactDivision {
                    power: exponent - i,
                });
            }
            coeffs.push(q % target.modulus());
        }
    }
    Ok(PolyMod::from_residues(target, coeffs))
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

    fn running_example() -> PolyMod {
        poly(3, 7, &[738, -10, 0, 0, 0, 0, 0, 0, 0, 0, 1])
    }

    #[test]
    fn shift_valuation_examples() {
        assert_eq!(
            shift_valuation(&running_example(), 1).unwrap(),
            CappedValuation::Finite(4)
        );

        let mid = poly(3, 3, &[9, 0, 5, 13, 21]);
        assert_eq!(
            shift_valuation(&mid, 0).unwrap(),
            CappedValuation::Finite(2)
        );

        let lin = poly(5, 4, &[-1, 1]);
        assert_eq!(
            shift_valuation(&lin, 1).unwrap(),
            CappedValuation::Finite(1)
        );

        assert_eq!(
            shift_valuation(&poly(3, 2, &[0, 0]), 0),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn shift_valuation_saturates() {
        // (x - 1)^2 over Z/(2^2): shifting by 1 leaves only slots with
        // i + ord >= 2.
        let f = poly(2, 2, &[1, -2, 1]);
        assert_eq!(
            shift_valuation(&f, 1).unwrap(),
            CappedValuation::AtLeastCap
        );
    }

    #[test]
    fn child_poly_running_example() {
        // First descent: (x^10 - 10x + 738, z = 1, s = 4) over 3^7.
        let child = child_poly(&running_example(), 1, 4).unwrap();
        assert_eq!(child.ring().k(), 3);
        assert_eq!(child.formal_degree(), 10);
        let expected = poly(3, 3, &[9, 0, 5, 13, 21, 0, 0, 0, 0, 0, 0]);
        assert_eq!(child, expected);

        // Second descent: (21x^4 + 13x^3 + 5x^2 + 9, z = 0, s = 2) over 3^3
        // lands on 2(x - 1)(x - 2) = 2x^2 + 1 mod 3.
        let mid = poly(3, 3, &[9, 0, 5, 13, 21]);
        let grandchild = child_poly(&mid, 0, 2).unwrap();
        assert_eq!(grandchild.ring().k(), 1);
        assert_eq!(grandchild, poly(3, 1, &[1, 0, 2, 0, 0]));
    }

    #[test]
    fn child_poly_quintic_example() {
        // (x-1)^2 (x-2)^3 over 17^100, z = 1, s = 2:
        // child is x^2 (4913x^3 - 867x^2 + 51x - 1) over 17^98.
        let g = poly(17, 100, &[-8, 28, -38, 25, -8, 1]);
        let child = child_poly(&g, 1, 2).unwrap();
        assert_eq!(child.ring().k(), 98);
        assert_eq!(child, poly(17, 98, &[0, 0, -1, 51, -867, 4913]));

        // z = 2, s = 3: child is x^3 (289x^2 + 34x + 1) over 17^97.
        let child2 = child_poly(&g, 2, 3).unwrap();
        assert_eq!(child2.ring().k(), 97);
        assert_eq!(child2, poly(17, 97, &[0, 0, 0, 1, 34, 289]));
    }

    #[test]
    fn child_poly_rejects_bad_exponents() {
        let f = running_example();
        assert_eq!(
            child_poly(&f, 1, 1),
            Err(Error::ExponentOutOfRange { exponent: 1, k: 7 })
        );
        assert_eq!(
            child_poly(&f, 1, 7),
            Err(Error::ExponentOutOfRange { exponent: 7, k: 7 })
        );
        // s = 5 overshoots the true shift valuation 4: slot i = 2 holds 45,
        // which is not divisible by 3^3.
        assert_eq!(
            child_poly(&f, 1, 5),
            Err(Error::InexactDivision { power: 3 })
        );
    }

    #[test]
    fn scaling_identity_on_small_rings() {
        // eval(f, z + p*t) = p^s * eval(child, t) mod p^k, for every t.
        for (p, k) in [(2u64, 5u32), (3, 4), (5, 3)] {
            let f = poly(
                p,
                k,
                &[
                    (p * p) as i64,
                    0,
                    (2 * p) as i64,
                    1,
                    p as i64 + 1,
                ],
            );
            for z in 0..p {
                let s = match shift_valuation(&f, z).unwrap() {
                    CappedValuation::Finite(s) if (2..k).contains(&s) => s,
                    _ => continue,
                };
                let child = child_poly(&f, z, s).unwrap();
                let m = f.ring().modulus();
                let scale = f.ring().pow_p(s);
                let child_mod = child.ring().modulus().clone();
                let mut t = BigUint::zero();
                while t < child_mod {
                    let arg = (BigUint::from(z) + BigUint::from(p) * &t) % m;
                    let lhs = f.eval(&arg);
                    let rhs = (&scale * child.eval(&t)) % m;
                    assert_eq!(lhs, rhs, "p={p} k={k} z={z} t={t}");
                    t += 1u32;
                }
            }
        }
    }

    #[test]
    fn child_reduction_degree_bounded_by_exponent() {
        let f = running_example();
        let child = child_poly(&f, 1, 4).unwrap();
        assert!(child.reduce_mod_p().degree() <= 4);

        let g = poly(17, 100, &[-8, 28, -38, 25, -8, 1]);
        assert!(child_poly(&g, 1, 2).unwrap().reduce_mod_p().degree() <= 2);
        assert!(child_poly(&g, 2, 3).unwrap().reduce_mod_p().degree() <= 3);
    }
}
