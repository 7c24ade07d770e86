//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values. Criterion 10 (byte-identical JSON output) lives in
//! the command-line crate's acceptance tests, next to the JSON writer.
//!
//! Run with `cargo test -p pkroots --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pkroots::{
    brute_force_count, build_tree, child_poly, count_roots, shift_valuation, tree_stats,
    CappedValuation, CountConfig, CountResult, PolyMod, PrimePowerRing, TreeNode,
    DEFAULT_BRUTE_FORCE_GUARD,
};

fn ring(p: u64, k: u32) -> PrimePowerRing {
    PrimePowerRing::new(p, k).unwrap()
}

fn poly(p: u64, k: u32, raw: &[i64]) -> PolyMod {
    let coeffs: Vec<BigInt> = raw.iter().map(|&c| BigInt::from(c)).collect();
    PolyMod::from_integer_coeffs(ring(p, k), &coeffs).unwrap()
}

fn poly_big(p: u64, k: u32, raw: &[BigInt]) -> PolyMod {
    PolyMod::from_integer_coeffs(ring(p, k), raw).unwrap()
}

/// Integer polynomial product, used to expand factored test inputs.
fn mul_int_polys(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn int_poly_pow(base: &[BigInt], e: u32) -> Vec<BigInt> {
    let mut acc = vec![BigInt::from(1)];
    for _ in 0..e {
        acc = mul_int_polys(&acc, base);
    }
    acc
}

/// (x - 1234)^3 (x - 7193)^4 (x - 2030)^12, expanded over Z.
fn timing_table_poly() -> Vec<BigInt> {
    let f1 = int_poly_pow(&[BigInt::from(-1234), BigInt::from(1)], 3);
    let f2 = int_poly_pow(&[BigInt::from(-7193), BigInt::from(1)], 4);
    let f3 = int_poly_pow(&[BigInt::from(-2030), BigInt::from(1)], 12);
    mul_int_polys(&mul_int_polys(&f1, &f2), &f3)
}

fn running_example_coeffs() -> Vec<i64> {
    let mut raw = vec![0i64; 11];
    raw[0] = 738;
    raw[1] = -10;
    raw[10] = 1;
    raw
}

fn quintic_coeffs() -> Vec<i64> {
    vec![-8, 28, -38, 25, -8, 1]
}

#[test]
fn criterion_01_golden_count_running_example() {
    let start = Instant::now();
    let f = poly(3, 7, &running_example_coeffs());
    let (root, result) = build_tree(&f, 0, &CountConfig::default()).unwrap();
    let elapsed = start.elapsed();

    assert!(result.exact);
    assert_eq!(result.count, BigUint::from(190u32));

    let stats = tree_stats(&root);
    assert_eq!(stats.nodes, 3);
    let mut precisions = Vec::new();
    let mut node = Some(&root);
    while let Some(n) = node {
        precisions.push(n.precision);
        node = n.children.first().map(|e| &e.node);
    }
    assert_eq!(precisions, vec![7, 3, 1]);

    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "criterion 1 PASS: N = 190 exact, tree nodes 3 at precisions (7,3,1), {elapsed:?}"
    );
}

#[test]
fn criterion_02_golden_count_quintic() {
    const DECIMAL: &str = "1620424537653706124196923258781575759359875675913436470380245486276378993995166018";

    let start = Instant::now();
    let f = poly(17, 100, &quintic_coeffs());
    let (root, result) = build_tree(&f, 0, &CountConfig::default()).unwrap();
    let elapsed = start.elapsed();

    assert!(result.exact);
    assert_eq!(result.count.to_string(), DECIMAL);
    let expected = ring(17, 100).pow_p(50) + ring(17, 100).pow_p(66);
    assert_eq!(result.count, expected);

    let stats = tree_stats(&root);
    assert_eq!(stats.depth, 49);
    assert_eq!(stats.nodes, 83);
    let mut exponents: Vec<u32> = root.children.iter().map(|e| e.exponent).collect();
    exponents.sort_unstable();
    assert_eq!(exponents, vec![2, 3]);

    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!(
        "criterion 2 PASS: N = 17^50 + 17^66 ({} digits), depth 49, 83 nodes, \
         root edge exponents (2,3), {elapsed:?}",
        DECIMAL.len()
    );
}

#[test]
fn criterion_03_timing_table_counts() {
    const P: u64 = 123_456_791;
    const K10: &str = "6662463731107084597239930491383079081613573366742531838643898960928425583";
    const K23: &str = "835246507397636707835912727935014993473814207009903666897740500800316540116998486687526544735315400399242092096638763251220316295804045232463245408233080887254694925939\
73";

    let coeffs = timing_table_poly();
    assert_eq!(coeffs.len(), 20); // degree 19

    let p_big = BigUint::from(P);
    let cases: [(u32, BigUint); 4] = [
        (1, BigUint::from(3u32)),
        (3, BigUint::from(3u32) * p_big.pow(2)),
        (10, p_big.pow(6) + p_big.pow(7) + p_big.pow(9)),
        (23, p_big.pow(15) + p_big.pow(17) + p_big.pow(21)),
    ];

    for (k, expected) in cases {
        let start = Instant::now();
        let f = poly_big(P, k, &coeffs);
        let result = count_roots(&f, 0, &CountConfig::default());
        let elapsed = start.elapsed();
        assert!(result.exact, "k={k} should count exactly");
        assert_eq!(result.count, expected, "k={k}");
        match k {
            1 => assert_eq!(result.count.to_string(), "3"),
            3 => assert_eq!(result.count.to_string(), "45724737732053043"),
            10 => assert_eq!(result.count.to_string(), K10),
            23 => assert_eq!(result.count.to_string(), K23),
            _ => unreachable!(),
        }
        assert!(elapsed < Duration::from_secs(5), "k={k} took {elapsed:?}");
        println!("criterion 3 PASS (k={k}): N = {}, {elapsed:?}", result.count);
    }
}

/// Shared random-instance stream for criteria 4 and 5.
fn random_instances(n: usize) -> Vec<(u64, u32, Vec<BigInt>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let primes = [2u64, 3, 5, 7, 11, 13];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let p = primes[rng.gen_range(0..primes.len())];
        let max_k = (1..=17)
            .take_while(|&k| (p as f64).powi(k) <= 2.0e5)
            .last()
            .unwrap();
        let k = rng.gen_range(1..=max_k) as u32;
        let modulus = p.pow(k);
        let degree = rng.gen_range(1..=8usize);
        let coeffs: Vec<BigInt> = (0..=degree)
            .map(|_| BigInt::from(rng.gen_range(0..modulus)))
            .collect();
        out.push((p, k, coeffs));
    }
    out
}

#[test]
fn criterion_04_oracle_equivalence() {
    let start = Instant::now();
    let mut inexact_runs = 0usize;
    for (i, (p, k, coeffs)) in random_instances(500).iter().enumerate() {
        let f = poly_big(*p, *k, coeffs);
        let result = count_roots(&f, i as u64, &CountConfig::default());
        let oracle = brute_force_count(&f, DEFAULT_BRUTE_FORCE_GUARD).unwrap();
        if result.exact {
            assert_eq!(
                result.count, oracle,
                "exact run disagrees with oracle: p={p} k={k} coeffs={coeffs:?}"
            );
        } else {
            inexact_runs += 1;
            assert!(
                result.count <= oracle,
                "inexact run over-counts: p={p} k={k} coeffs={coeffs:?}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(inexact_runs, 0, "default budgets should never fail here");
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "criterion 4 PASS: 500 randomized instances match the oracle \
         (0 inexact), {elapsed:?}"
    );
}

fn assert_tree_bounds(root: &TreeNode, d: usize, k: u32, label: &str) {
    let stats = tree_stats(root);
    assert!(
        stats.depth <= (k - 1) / 2,
        "{label}: depth {} > floor((k-1)/2) = {}",
        stats.depth,
        (k - 1) / 2
    );
    for (level, &width) in stats.widths.iter().enumerate().skip(1) {
        assert!(
            width <= (d / 2) as u64,
            "{label}: width {width} at depth {level} > floor(d/2) = {}",
            d / 2
        );
    }
    assert!(
        stats.nodes <= 1 + (d as u64 / 2) * u64::from((k - 1) / 2),
        "{label}: {} nodes > 1 + floor(d/2) * floor((k-1)/2)",
        stats.nodes
    );

    fn edge_sums(node: &TreeNode, label: &str) {
        let parent_reduced_degree = node.poly.reduce_mod_p().degree() as u64;
        let sum: u64 = node.children.iter().map(|e| u64::from(e.exponent)).sum();
        assert!(
            sum <= parent_reduced_degree,
            "{label}: child edge exponent sum {sum} > parent reduced degree \
             {parent_reduced_degree}"
        );
        for edge in &node.children {
            edge_sums(&edge.node, label);
        }
    }
    edge_sums(root, label);
}

#[test]
fn criterion_05_tree_bounds() {
    let mut checked = 0usize;
    for (i, (p, k, coeffs)) in random_instances(500).iter().enumerate() {
        let f = poly_big(*p, *k, coeffs);
        if f.is_zero() {
            continue; // no tree for a vanishing polynomial
        }
        let (root, _) = build_tree(&f, i as u64, &CountConfig::default()).unwrap();
        assert_tree_bounds(&root, f.formal_degree(), *k, &format!("p={p} k={k}"));
        checked += 1;
    }

    let f = poly(3, 7, &running_example_coeffs());
    let (root, _) = build_tree(&f, 0, &CountConfig::default()).unwrap();
    assert_tree_bounds(&root, 10, 7, "golden (3,7)");

    let g = poly(17, 100, &quintic_coeffs());
    let (root, _) = build_tree(&g, 0, &CountConfig::default()).unwrap();
    assert_tree_bounds(&root, 5, 100, "golden (17,100)");

    println!(
        "criterion 5 PASS: depth/width/node-count/edge-sum bounds hold on \
         {checked} random instances plus both golden instances"
    );
}

#[test]
fn criterion_06_lift_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11f7);
    let primes = [2u64, 3, 5, 7, 11, 13, 17];
    let mut verified = 0usize;
    let mut tried = 0usize;
    while verified < 200 {
        tried += 1;
        assert!(tried < 20_000, "not enough usable lift instances");
        let p = primes[rng.gen_range(0..primes.len())];
        let max_k = (1..=17)
            .take_while(|&k| (p as f64).powi(k) <= 1.0e5)
            .last()
            .unwrap();
        if max_k < 3 {
            continue;
        }
        let k = rng.gen_range(3..=max_k) as u32;
        let modulus = p.pow(k);
        let degree = rng.gen_range(2..=8usize);
        let coeffs: Vec<BigInt> = (0..=degree)
            .map(|_| BigInt::from(rng.gen_range(0..modulus)))
            .collect();
        let f = poly_big(p, k, &coeffs);
        if f.is_zero() {
            continue;
        }
        let z = rng.gen_range(0..p);
        let s = match shift_valuation(&f, z).unwrap() {
            CappedValuation::Finite(s) if (2..k).contains(&s) => s,
            _ => continue,
        };
        let child = child_poly(&f, z, s).unwrap();

        // deg(child mod p) <= s
        let reduced = child.reduce_mod_p();
        assert!(
            reduced.is_zero() || reduced.degree() as u32 <= s,
            "child reduction degree exceeds s: p={p} k={k} z={z} s={s}"
        );

        // f(z + p*t) = p^s * child(t) mod p^k for every t
        let m = f.ring().modulus().clone();
        let scale = f.ring().pow_p(s);
        let child_modulus = child.ring().modulus().clone();
        let mut t = BigUint::zero();
        while t < child_modulus {
            let arg = (BigUint::from(z) + BigUint::from(p) * &t) % &m;
            let lhs = f.eval(&arg);
            let rhs = (&scale * child.eval(&t)) % &m;
            assert_eq!(lhs, rhs, "scaling identity: p={p} k={k} z={z} s={s} t={t}");
            t += 1u32;
        }
        verified += 1;
    }
    println!(
        "criterion 6 PASS: scaling identity and child degree bound verified \
         on {verified} random lift instances"
    );
}

#[test]
fn criterion_07_monomial_law() {
    for d in 1u32..=6 {
        for k in 1u32..=6 {
            for p in [2u64, 3, 5] {
                let mut raw = vec![0i64; d as usize + 1];
                raw[d as usize] = 1;
                let f = poly(p, k, &raw);
                let result = count_roots(&f, 0, &CountConfig::default());
                assert!(result.exact);
                let expected = ring(p, k).pow_p(k - k.div_ceil(d));
                assert_eq!(result.count, expected, "x^{d} over {p}^{k}");
                let oracle = brute_force_count(&f, DEFAULT_BRUTE_FORCE_GUARD).unwrap();
                assert_eq!(result.count, oracle, "x^{d} over {p}^{k} vs oracle");
            }
        }
    }
    println!(
        "criterion 7 PASS: count(x^d mod p^k) = p^(k - ceil(k/d)) on the \
         full (d,k,p) grid, matching the oracle"
    );
}

/// Product of (x - r)^m factors, expanded over Z.
fn factored(factors: &[(i64, u32)]) -> Vec<BigInt> {
    let mut acc = vec![BigInt::from(1)];
    for &(r, m) in factors {
        let linear = [BigInt::from(-r), BigInt::from(1)];
        acc = mul_int_polys(&acc, &int_poly_pow(&linear, m));
    }
    acc
}

#[test]
fn criterion_08_las_vegas_contract_under_forced_failure() {
    // Primes above the small-field enumeration threshold, with guard-sized
    // rings, and polynomials with at least two degenerate roots so a real
    // split is required.
    let starved = CountConfig {
        split_budget: Some(0),
    };
    let cases = [
        (263u64, 2u32, vec![(1i64, 2u32), (2, 2)]),
        (269, 2, vec![(3, 2), (5, 3)]),
        (263, 1, vec![(1, 2), (2, 2), (7, 2)]),
    ];
    for (p, k, factors) in &cases {
        let f = poly_big(*p, *k, &factored(factors));
        let result = count_roots(&f, 0, &starved);
        assert!(!result.exact, "p={p} k={k} must report failure");
        assert!(!result.failures.is_empty());
        let oracle = brute_force_count(&f, DEFAULT_BRUTE_FORCE_GUARD).unwrap();
        assert!(
            result.count <= oracle,
            "p={p} k={k}: starved count must stay a lower bound"
        );

        // And the same instances succeed with the default budget.
        let recovered = count_roots(&f, 0, &CountConfig::default());
        assert!(recovered.exact);
        assert_eq!(recovered.count, oracle);
    }
    println!(
        "criterion 8 PASS: zero-budget runs report exact=false with failure \
         paths and stay at or below the oracle; default budgets recover"
    );
}

#[test]
fn criterion_09_performance_sanity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe9c);
    let ring250 = ring(2, 250);
    let modulus = ring250.modulus().clone();
    let coeffs: Vec<BigInt> = (0..=15)
        .map(|_| {
            let mut bytes = [0u8; 32];
            rng.fill(&mut bytes);
            BigInt::from(BigUint::from_bytes_le(&bytes) % &modulus)
        })
        .collect();
    let f = poly_big(2, 250, &coeffs);

    let start = Instant::now();
    let result = count_roots(&f, 0, &CountConfig::default());
    let elapsed = start.elapsed();

    assert!(result.exact);
    assert!(result.count <= *ring250.modulus());
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "criterion 9 PASS: random degree-15 polynomial mod 2^250 counted in \
         {elapsed:?} (count has {} digits)",
        result.count.to_string().len()
    );
}

/// Supporting check for criterion 8's inputs: the factored forms really do
/// have the advertised degenerate structure.
#[test]
fn forced_failure_inputs_have_degenerate_roots() {
    for (p, factors, expected) in [
        (263u64, vec![(1i64, 2u32), (2, 2)], vec![1u64, 2]),
        (269, vec![(3, 2), (5, 3)], vec![3, 5]),
        (263, vec![(1, 2), (2, 2), (7, 2)], vec![1, 2, 7]),
    ] {
        let f = poly_big(p, 2, &factored(&factors));
        let part = f.reduce_mod_p().degenerate_part().unwrap();
        assert_eq!(part.degree(), expected.len());
        for z in expected {
            assert_eq!(part.eval(z), 0, "z={z} should be degenerate mod {p}");
        }
    }
}

#[allow(dead_code)]
fn debug_result(tag: &str, r: &CountResult) {
    eprintln!(
        "{tag}: count={} exact={} nodes={} depth={} draws={}",
        r.count, r.exact, r.stats.tree_nodes, r.stats.tree_depth, r.stats.rng_draws
    );
}
