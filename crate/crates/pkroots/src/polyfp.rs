//! Polynomial arithmetic over the prime field `Z/(p)` and root isolation.
//!
//! The counting recursion needs three things from the prime field: the number
//! of distinct roots of a reduction (a gcd with `x^p - x`), the monic
//! polynomial whose roots are exactly the *degenerate* roots (roots shared
//! with the derivative), and the values of those degenerate roots. Only the
//! last step is randomized: [`PolyFp::split_linear`] peels linear factors off
//! a split squarefree polynomial with random quadratic-residue probes and
//! reports honestly, via [`RootSet::complete`], whether it got them all.

use rand::Rng;

use crate::error::Error;
use crate::ring::{mul_mod_u64, pow_mod_u64};

/// Fields this small are searched exhaustively instead of probing randomly,
/// so isolation over them can never fail.
pub const SMALL_FIELD_LIMIT: u64 = 257;

/// A polynomial over `Z/(p)` with no trailing zero coefficients.
/// The zero polynomial is the empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

/// Distinct residues verified to be roots of the query polynomial.
///
/// `complete == true` guarantees the list is *all* roots in `Z/(p)`; a
/// `false` flag means some randomized split ran out of attempts and the list
/// is a subset. Failure is reported through the flag, never an error: the
/// engine turns partial lists into certified lower bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    roots: Vec<u64>,
    complete: bool,
}

impl RootSet {
    pub(crate) fn empty() -> Self {
        Self {
            roots: Vec::new(),
            complete: true,
        }
    }

    /// Strictly increasing list of verified roots.
    pub fn roots(&self) -> &[u64] {
        &self.roots
    }

    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

impl PolyFp {
    /// Builds a polynomial from raw coefficients (constant term first),
    /// reducing mod `p` and trimming trailing zeros.
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        debug_assert!(p >= 2);
        for c in &mut coeffs {
            if *c >= p {
                *c %= p;
            }
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self { p, coeffs: vec![1] }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mul_mod_u64(acc, x, self.p) + c) % self.p;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.p);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod_u64(i as u64 % self.p, c, self.p))
            .collect();
        Self::new(self.p, coeffs)
    }

    /// Scales to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&1) => self.clone(),
            Some(&lead) => {
                let inv = pow_mod_u64(lead, self.p - 2, self.p);
                let coeffs = self
                    .coeffs
                    .iter()
                    .map(|&c| mul_mod_u64(c, inv, self.p))
                    .collect();
                Self { p: self.p, coeffs }
            }
        }
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0u64; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *c = (a + self.p - b) % self.p;
        }
        Self::new(self.p, coeffs)
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = (coeffs[i + j] + mul_mod_u64(a, b, self.p)) % self.p;
            }
        }
        Self::new(self.p, coeffs)
    }

    /// Euclidean division, returning `(quotient, remainder)`.
    fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.degree() < divisor.degree() || self.is_zero() {
            return (Self::zero(self.p), self.clone());
        }
        let p = self.p;
        let lead_inv = pow_mod_u64(*divisor.coeffs.last().unwrap(), p - 2, p);
        let mut rem = self.coeffs.clone();
        let deg_diff = self.degree() - divisor.degree();
        let mut quot = vec![0u64; deg_diff + 1];
        for i in (0..=deg_diff).rev() {
            let idx = i + divisor.degree();
            let c = mul_mod_u64(rem[idx], lead_inv, p);
            if c == 0 {
                continue;
            }
            quot[i] = c;
            for (j, &dcoef) in divisor.coeffs.iter().enumerate() {
                let t = mul_mod_u64(c, dcoef, p);
                rem[i + j] = (rem[i + j] + p - t) % p;
            }
        }
        (Self::new(p, quot), Self::new(p, rem))
    }

    fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd via the Euclidean algorithm; `gcd(a, 0)` is `monic(a)`.
    pub fn gcd(a: &Self, b: &Self) -> Result<Self, Error> {
        assert_eq!(a.p, b.p);
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `base^exp mod modulus`, by square-and-multiply.
    fn pow_mod(base: &Self, mut exp: u64, modulus: &Self) -> Self {
        let mut acc = Self::one(base.p);
        let mut sq = base.rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&sq).rem(modulus);
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul(&sq).rem(modulus);
            }
        }
        acc
    }

    /// `x^p mod h`, the map whose fixed points are the elements of `Z/(p)`.
    /// Requires `deg h >= 1`.
    pub fn frobenius_power_mod(h: &Self) -> Result<Self, Error> {
        if h.degree() < 1 || h.is_zero() {
            return Err(Error::ConstantPolynomial);
        }
        let x = Self::new(h.p, vec![0, 1]);
        Ok(Self::pow_mod(&x, h.p, h))
    }

    /// Number of distinct roots of `self` in `Z/(p)`, as
    /// `deg gcd(self, x^p - x)` computed without materializing a degree-p
    /// polynomial.
    pub fn distinct_root_count(&self) -> Result<u64, Error> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree() == 0 {
            return Ok(0);
        }
        let frob = Self::frobenius_power_mod(self)?;
        let x = Self::new(self.p, vec![0, 1]);
        let g = Self::gcd(self, &frob.sub(&x))?;
        Ok(g.degree() as u64)
    }

    /// The monic polynomial whose roots are exactly the degenerate roots of
    /// `self`: `gcd(gcd(self, self'), x^p - x)`. When the derivative
    /// vanishes identically, every distinct root of `self` is degenerate.
    pub fn degenerate_part(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let common = Self::gcd(self, &self.derivative())?;
        if common.degree() == 0 {
            return Ok(Self::one(self.p));
        }
        let frob = Self::frobenius_power_mod(&common)?;
        let x = Self::new(self.p, vec![0, 1]);
        Self::gcd(&common, &frob.sub(&x))
    }

    /// Extracts the roots of a monic squarefree polynomial that splits into
    /// distinct linear factors.
    ///
    /// For `p <= SMALL_FIELD_LIMIT` every residue is tried, so the result is
    /// always complete. Larger fields are split recursively with
    /// `gcd(h, (x+a)^((p-1)/2) - 1)` for uniform random `a`; each binary
    /// split gets `budget` attempts and a proper split occurs with
    /// probability at least `1/2 - 1/(2p)` per attempt. Exhausting a budget
    /// marks the result incomplete instead of raising an error.
    pub fn split_linear<R: Rng + ?Sized>(&self, rng: &mut R, budget: u32) -> RootSet {
        let mut roots = Vec::new();
        let mut complete = true;
        if self.degree() >= 1 {
            if self.p <= SMALL_FIELD_LIMIT {
                for x in 0..self.p {
                    if self.eval(x) == 0 {
                        roots.push(x);
                    }
                }
            } else {
                self.split_recursive(rng, budget, &mut roots, &mut complete);
            }
        }
        roots.sort_unstable();
        debug_assert!(!complete || roots.len() == self.degree() || self.degree() == 0);
        RootSet { roots, complete }
    }

    fn split_recursive<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        budget: u32,
        roots: &mut Vec<u64>,
        complete: &mut bool,
    ) {
        match self.degree() {
            0 => return,
            1 => {
                // Monic x + c0 has root -c0.
                let c0 = self.coeffs[0];
                roots.push((self.p - c0) % self.p);
                return;
            }
            _ => {}
        }
        for _ in 0..budget {
            let a = rng.gen_range(0..self.p);
            let probe = Self::new(self.p, vec![a, 1]);
            let power = Self::pow_mod(&probe, (self.p - 1) / 2, self);
            let shifted = power.sub(&Self::one(self.p));
            let g = Self::gcd(self, &shifted).expect("self is nonzero");
            if g.degree() >= 1 && g.degree() < self.degree() {
                let (q, r) = self.div_rem(&g);
                debug_assert!(r.is_zero());
                g.split_recursive(rng, budget, roots, complete);
                q.split_recursive(rng, budget, roots, complete);
                return;
            }
        }
        *complete = false;
    }

    /// Roots `z` of `self` with `self'(z) = 0`, isolated Las Vegas style.
    pub fn degenerate_roots<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        budget: u32,
    ) -> Result<RootSet, Error> {
        let part = self.degenerate_part()?;
        if part.degree() == 0 {
            return Ok(RootSet::empty());
        }
        Ok(part.split_linear(rng, budget))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    /// x^10 + 2x over Z/(3), i.e. x(x^9 - 1): the reduction of the running
    /// example.
    fn running_reduction() -> PolyFp {
        PolyFp::new(3, vec![0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 1])
    }

    #[test]
    fn gcd_examples() {
        let a = PolyFp::new(7, vec![6, 0, 1]); // x^2 - 1
        let b = PolyFp::new(7, vec![6, 1]); // x - 1
        assert_eq!(PolyFp::gcd(&a, &b).unwrap(), b);

        let f = PolyFp::new(5, vec![3, 1, 4]);
        assert_eq!(PolyFp::gcd(&f, &PolyFp::zero(5)).unwrap(), f.monic());

        // gcd(x(x^9 - 1), x^3 - x) over Z/(3) picks out the roots {0, 1}.
        let g = PolyFp::gcd(&running_reduction(), &PolyFp::new(3, vec![0, 2, 0, 1])).unwrap();
        assert_eq!(g.degree(), 2);
        assert_eq!(g.eval(0), 0);
        assert_eq!(g.eval(1), 0);

        assert_eq!(
            PolyFp::gcd(&PolyFp::zero(3), &PolyFp::zero(3)),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn frobenius_examples() {
        let h = PolyFp::new(3, vec![1, 0, 1]); // x^2 + 1
        assert_eq!(
            PolyFp::frobenius_power_mod(&h).unwrap(),
            PolyFp::new(3, vec![0, 2])
        );

        // x - a: Fermat gives x^p = a mod (x - a).
        for p in [5u64, 13, 101] {
            for a in [0u64, 1, 3] {
                let h = PolyFp::new(p, vec![(p - a) % p, 1]);
                assert_eq!(
                    PolyFp::frobenius_power_mod(&h).unwrap(),
                    PolyFp::new(p, vec![a])
                );
            }
        }

        // x^p - x fixes x.
        let h = PolyFp::new(5, vec![0, 4, 0, 0, 0, 1]);
        assert_eq!(
            PolyFp::frobenius_power_mod(&h).unwrap(),
            PolyFp::new(5, vec![0, 1])
        );

        assert_eq!(
            PolyFp::frobenius_power_mod(&PolyFp::one(5)),
            Err(Error::ConstantPolynomial)
        );
    }

    #[test]
    fn distinct_root_count_examples() {
        assert_eq!(running_reduction().distinct_root_count().unwrap(), 2);
        assert_eq!(
            PolyFp::new(3, vec![1, 0, 1]).distinct_root_count().unwrap(),
            0
        );
        let split_all = PolyFp::new(5, vec![0, 4, 0, 0, 0, 1]); // x^5 - x
        assert_eq!(split_all.distinct_root_count().unwrap(), 5);
        assert_eq!(
            PolyFp::zero(5).distinct_root_count(),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn distinct_root_count_matches_enumeration() {
        let polys = [
            PolyFp::new(101, vec![7, 3, 0, 1]),
            PolyFp::new(97, vec![1, 1, 1, 1, 1]),
            PolyFp::new(13, vec![12, 0, 1, 5]),
            PolyFp::new(2, vec![1, 1, 1]),
        ];
        for h in polys {
            let expected = (0..h.p()).filter(|&x| h.eval(x) == 0).count() as u64;
            assert_eq!(h.distinct_root_count().unwrap(), expected);
        }
    }

    #[test]
    fn split_linear_examples() {
        let h = PolyFp::new(7, vec![6, 0, 1]); // x^2 - 1
        let rs = h.split_linear(&mut rng(), 16);
        assert!(rs.complete());
        assert_eq!(rs.roots(), &[1, 6]);

        let x = PolyFp::new(11, vec![0, 1]);
        let rs = x.split_linear(&mut rng(), 16);
        assert_eq!(rs.roots(), &[0]);

        let h = PolyFp::new(3, vec![0, 2, 1]); // x^2 - x = x(x + 2)
        let rs = h.split_linear(&mut rng(), 16);
        assert!(rs.complete());
        assert_eq!(rs.roots(), &[0, 1]);
    }

    #[test]
    fn split_linear_large_prime() {
        // (x - 2)(x - 77)(x - 1000)(x - 9999) over a prime above the
        // enumeration limit exercises the randomized path.
        let p = 10_007u64;
        let mut h = PolyFp::one(p);
        for r in [2u64, 77, 1000, 9999] {
            h = h.mul(&PolyFp::new(p, vec![(p - r) % p, 1]));
        }
        let rs = h.split_linear(&mut rng(), 64);
        assert!(rs.complete());
        assert_eq!(rs.roots(), &[2, 77, 1000, 9999]);
    }

    #[test]
    fn split_linear_zero_budget_reports_incomplete() {
        let p = 263u64;
        let h = PolyFp::new(p, vec![2, p - 3, 1]); // (x - 1)(x - 2)
        let rs = h.split_linear(&mut rng(), 0);
        assert!(!rs.complete());
        assert!(rs.roots().is_empty());

        // Degree 1 needs no randomness even with zero budget.
        let lin = PolyFp::new(p, vec![p - 5, 1]);
        let rs = lin.split_linear(&mut rng(), 0);
        assert!(rs.complete());
        assert_eq!(rs.roots(), &[5]);
    }

    #[test]
    fn degenerate_roots_examples() {
        let rs = running_reduction().degenerate_roots(&mut rng(), 16).unwrap();
        assert!(rs.complete());
        assert_eq!(rs.roots(), &[1]);

        // 2(x - 1)(x - 2) = 2x^2 + 1 mod 3 has only non-degenerate roots.
        let h = PolyFp::new(3, vec![1, 0, 2]);
        let rs = h.degenerate_roots(&mut rng(), 16).unwrap();
        assert!(rs.complete());
        assert!(rs.roots().is_empty());

        let sq = PolyFp::new(5, vec![0, 0, 1]); // x^2
        let rs = sq.degenerate_roots(&mut rng(), 16).unwrap();
        assert_eq!(rs.roots(), &[0]);
    }

    #[test]
    fn degenerate_roots_with_vanishing_derivative() {
        // x^3 + 1 = (x + 1)^3 over Z/(3): derivative vanishes, the lone
        // distinct root 2 is degenerate.
        let h = PolyFp::new(3, vec![1, 0, 0, 1]);
        assert!(h.derivative().is_zero());
        let rs = h.degenerate_roots(&mut rng(), 16).unwrap();
        assert_eq!(rs.roots(), &[2]);
    }

    #[test]
    fn split_is_deterministic_for_fixed_seed() {
        let p = 100_003u64;
        let mut h = PolyFp::one(p);
        for r in [11u64, 222, 3333, 44444, 55555] {
            h = h.mul(&PolyFp::new(p, vec![(p - r) % p, 1]));
        }
        let a = h.split_linear(&mut ChaCha8Rng::seed_from_u64(42), 64);
        let b = h.split_linear(&mut ChaCha8Rng::seed_from_u64(42), 64);
        assert_eq!(a, b);
        assert!(a.complete());
        assert_eq!(a.roots(), &[11, 222, 3333, 44444, 55555]);
    }
}
