//! Algebraic invariants, checked against independent routes: naive
//! expansions, exhaustive enumeration, and brute-force counting.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pkroots::{
    count_roots, CappedValuation, CountConfig, PolyFp, PolyMod, PrimePowerRing,
};

fn ring(p: u64, k: u32) -> PrimePowerRing {
    PrimePowerRing::new(p, k).unwrap()
}

fn poly_from(p: u64, k: u32, raw: &[i64]) -> PolyMod {
    let coeffs: Vec<BigInt> = raw.iter().map(|&c| BigInt::from(c)).collect();
    PolyMod::from_integer_coeffs(ring(p, k), &coeffs).unwrap()
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

fn coeff_vec() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-1000i64..1000, 1..=9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn capped_valuation_is_multiplicative(
        p in small_prime(),
        k in 1u32..12,
        n in -100_000i64..100_000,
        e in 0u32..15,
    ) {
        let r = ring(p, k);
        let n = BigInt::from(n);
        prop_assume!(!r.reduce(&n).is_zero());
        let v = match r.valuation(&n) {
            CappedValuation::Finite(v) => v,
            CappedValuation::AtLeastCap => unreachable!("nonzero residue"),
        };
        let scaled = &n * BigInt::from(r.pow_p(e));
        let expected = if v + e < k {
            CappedValuation::Finite(v + e)
        } else {
            CappedValuation::AtLeastCap
        };
        prop_assert_eq!(r.valuation(&scaled), expected);
    }

    #[test]
    fn reduce_is_an_idempotent_homomorphism(
        p in small_prime(),
        k in 1u32..10,
        a in -1_000_000i64..1_000_000,
        b in -1_000_000i64..1_000_000,
    ) {
        let r = ring(p, k);
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        let direct = r.reduce(&(&a + &b));
        let staged = r.reduce(&BigInt::from(r.reduce(&a) + r.reduce(&b)));
        prop_assert_eq!(direct, staged);

        let once = r.reduce(&a);
        prop_assert_eq!(r.reduce(&BigInt::from(once.clone())), once);
    }

    #[test]
    fn taylor_shift_agrees_with_argument_shift(
        p in prop::sample::select(vec![2u64, 3, 5]),
        k in 1u32..4,
        raw in coeff_vec(),
    ) {
        let f = poly_from(p, k, &raw);
        let m = f.ring().modulus().clone();
        for z in 0..p {
            let shifted = f.taylor_shift_small(z);
            let mut x = BigUint::zero();
            while x < m {
                let arg = (&x + BigUint::from(z)) % &m;
                prop_assert_eq!(shifted.eval(&x), f.eval(&arg));
                x += 1u32;
            }
        }
    }

    #[test]
    fn taylor_shift_round_trips(
        p in small_prime(),
        k in 1u32..8,
        raw in coeff_vec(),
        base in 0u64..10_000,
    ) {
        let f = poly_from(p, k, &raw);
        let m = f.ring().modulus().clone();
        let fwd = BigUint::from(base) % &m;
        let back = (&m - &fwd) % &m;
        let round = f.taylor_shift(&fwd).taylor_shift(&back);
        prop_assert_eq!(round, f);
    }

    #[test]
    fn content_drops_with_exact_division(
        p in small_prime(),
        k in 4u32..10,
        raw in coeff_vec(),
        boost in 1u32..3,
        v in 1u32..3,
    ) {
        prop_assume!(v <= boost);
        // Scale everything by p^boost and pin a unit into the constant slot
        // so the content valuation is exactly `boost`.
        let scale = BigInt::from(ring(p, k).pow_p(boost));
        let mut raw_scaled: Vec<BigInt> =
            raw.iter().map(|&c| BigInt::from(c) * &scale).collect();
        raw_scaled[0] = &scale * (BigInt::from(raw[0]) * p + 1);
        let f = PolyMod::from_integer_coeffs(ring(p, k), &raw_scaled).unwrap();
        prop_assert_eq!(f.content_valuation(), CappedValuation::Finite(boost));

        let g = f.divide_by_p_power(v).unwrap();
        prop_assert_eq!(g.content_valuation(), CappedValuation::Finite(boost - v));
    }

    #[test]
    fn reduction_commutes_with_shift(
        p in small_prime(),
        k in 1u32..8,
        raw in coeff_vec(),
    ) {
        let f = poly_from(p, k, &raw);
        for z in 0..p {
            let lhs = f.taylor_shift_small(z).reduce_mod_p();
            // Independent route: shift the reduction with plain binomial
            // accumulation over Z, then reduce.
            let shifted_ints = shift_integer_reference(&raw, z as i64);
            let rhs = poly_from(p, 1, &shifted_ints).reduce_mod_p();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn distinct_root_count_matches_enumeration(
        p in prop::sample::select(vec![2u64, 3, 5, 7, 13, 31, 67, 101]),
        raw in coeff_vec(),
    ) {
        let h = PolyFp::new(p, raw.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect());
        prop_assume!(!h.is_zero());
        let expected = (0..p).filter(|&x| h.eval(x) == 0).count() as u64;
        prop_assert_eq!(h.distinct_root_count().unwrap(), expected);
    }

    #[test]
    fn split_linear_recovers_planted_roots(
        p in prop::sample::select(vec![11u64, 101, 257, 1009, 10007]),
        picks in prop::collection::btree_set(0u64..10_000, 1..=6),
        seed in 0u64..1000,
    ) {
        let roots: Vec<u64> = picks.iter().map(|r| r % p).collect::<std::collections::BTreeSet<_>>()
            .into_iter().collect();
        let mut h = PolyFp::one(p);
        for &r in &roots {
            h = mul_fp(&h, &PolyFp::new(p, vec![(p - r) % p, 1]));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rs = h.split_linear(&mut rng, 64);
        prop_assert!(rs.complete());
        prop_assert_eq!(rs.roots(), &roots[..]);
        for &r in rs.roots() {
            prop_assert_eq!(h.eval(r), 0);
        }
    }

    #[test]
    fn degenerate_roots_are_common_zeros(
        p in small_prime(),
        raw in coeff_vec(),
        seed in 0u64..1000,
    ) {
        let h = PolyFp::new(p, raw.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect());
        prop_assume!(!h.is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rs = h.degenerate_roots(&mut rng, 64).unwrap();
        prop_assert!(rs.complete(), "small fields never fail");
        let d = h.derivative();
        for &z in rs.roots() {
            prop_assert_eq!(h.eval(z), 0);
            prop_assert_eq!(d.eval(z), 0);
        }
        // Completeness the other way: every common zero is reported.
        for z in 0..p {
            if h.eval(z) == 0 && d.eval(z) == 0 {
                prop_assert!(rs.roots().contains(&z));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_valuation_respects_multiplicity(
        p in small_prime(),
        k in 2u32..7,
        raw in coeff_vec(),
        seed in 0u64..1000,
    ) {
        use pkroots::shift_valuation;

        let f = poly_from(p, k, &raw);
        prop_assume!(!f.is_zero());
        let reduction = f.reduce_mod_p();
        prop_assume!(!reduction.is_zero());
        // The same polynomial at precision 2 decides lift existence mod p^2.
        let f2 = poly_from(p, 2, &raw);

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degenerate = reduction.degenerate_roots(&mut rng, 64).unwrap();
        prop_assert!(degenerate.complete());
        for &z in degenerate.roots() {
            let mult = multiplicity_at(&reduction, z);
            prop_assert!(mult >= 2, "degenerate roots are multiple roots");

            let lifts = (0..p).any(|t| {
                let x = BigUint::from(z + p * t) % f2.ring().modulus();
                f2.eval(&x).is_zero()
            });
            let s = shift_valuation(&f, z).unwrap();
            // A degenerate root lifts one more digit iff its cluster
            // valuation clears 2.
            let s_at_least_2 = match s {
                CappedValuation::Finite(v) => v >= 2,
                CappedValuation::AtLeastCap => true,
            };
            prop_assert_eq!(lifts, s_at_least_2, "p={} z={} s={:?}", p, z, s);
            // And a finite valuation never exceeds the multiplicity.
            if let CappedValuation::Finite(v) = s {
                prop_assert!(v <= mult, "p={} z={} s={} mult={}", p, z, v, mult);
            }
        }
    }

    #[test]
    fn scaling_factor_splits_off(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        k in 2u32..8,
        raw in coeff_vec(),
        v in 1u32..4,
    ) {
        prop_assume!(v < k);
        let g_low = poly_from(p, k - v, &raw);
        let scale = BigInt::from(ring(p, k).pow_p(v));
        let raw_scaled: Vec<BigInt> = raw.iter().map(|&c| BigInt::from(c) * &scale).collect();
        let f = PolyMod::from_integer_coeffs(ring(p, k), &raw_scaled).unwrap();

        let cfg = CountConfig::default();
        let full = count_roots(&f, 0, &cfg);
        let part = count_roots(&g_low, 0, &cfg);
        prop_assert!(full.exact && part.exact);
        prop_assert_eq!(full.count, ring(p, k).pow_p(v) * part.count);
    }

    #[test]
    fn count_never_exceeds_ring_size(
        p in small_prime(),
        k in 1u32..8,
        raw in coeff_vec(),
    ) {
        let f = poly_from(p, k, &raw);
        let r = count_roots(&f, 0, &CountConfig::default());
        let size = f.ring().modulus().clone();
        prop_assert!(r.count <= size);
        // The converse is false: nonzero polynomials can vanish on every
        // residue (x^p - x already does at k = 1), so only this direction
        // holds.
        if f.is_zero() {
            prop_assert_eq!(r.count, size);
        }
    }
}

/// Coefficients of f(x + z) over Z, via binomial accumulation.
fn shift_integer_reference(raw: &[i64], z: i64) -> Vec<i64> {
    let mut out = vec![0i64; raw.len()];
    for (j, &c) in raw.iter().enumerate() {
        // (x + z)^j one term at a time: C(j, i) z^(j-i) x^i
        let mut binom: i128 = 1;
        let mut zpow: i128 = 1;
        // iterate i from j down to 0 so z^(j-i) grows as binom updates
        let mut terms = vec![0i128; j + 1];
        for i in (0..=j).rev() {
            terms[i] = binom * zpow;
            binom = binom * i as i128 / (j - i + 1) as i128;
            zpow *= z as i128;
        }
        for (i, t) in terms.iter().enumerate() {
            out[i] = (out[i] as i128 + c as i128 * t) as i64;
        }
    }
    out
}

/// Multiplicity of the root `z` of `h`, by repeated synthetic division.
fn multiplicity_at(h: &PolyFp, z: u64) -> u32 {
    let p = h.p();
    let mut h = h.clone();
    let mut mult = 0;
    while !h.is_zero() && h.coeffs().len() > 1 {
        // Divide by (x - z); stop once the remainder h(z) is nonzero.
        let a = h.coeffs();
        let d = a.len() - 1;
        let mut quotient = vec![0u64; d];
        let mut acc = 0u64;
        for i in (1..=d).rev() {
            acc = ((acc as u128 * z as u128 % p as u128) as u64 + a[i]) % p;
            quotient[i - 1] = acc;
        }
        let rem = ((acc as u128 * z as u128 % p as u128) as u64 + a[0]) % p;
        if rem != 0 {
            break;
        }
        mult += 1;
        h = PolyFp::new(p, quotient);
    }
    mult
}

fn mul_fp(a: &PolyFp, b: &PolyFp) -> PolyFp {
    let p = a.p();
    if a.is_zero() || b.is_zero() {
        return PolyFp::zero(p);
    }
    let mut coeffs = vec![0u64; a.coeffs().len() + b.coeffs().len() - 1];
    for (i, &x) in a.coeffs().iter().enumerate() {
        for (j, &y) in b.coeffs().iter().enumerate() {
            coeffs[i + j] = (coeffs[i + j] + (x as u128 * y as u128 % p as u128) as u64) % p;
        }
    }
    PolyFp::new(p, coeffs)
}
