//! Arithmetic in a word-size prime field `F_p`.
//!
//! Elements are plain `u64` values kept in canonical form `0 <= a < p`. The
//! modulus is bounded by `2^32` so every product of two reduced elements fits
//! in a `u64`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A field element. Always reduced modulo the owning field's prime.
pub type Elem = u64;

/// Lower end of the default prime range.
pub const DEFAULT_PRIME_MIN: u64 = 1 << 28;
/// Upper end (exclusive) of the default prime range.
pub const DEFAULT_PRIME_MAX: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds `F_p`. Requires `3 < p < 2^32` and `p` prime.
    pub fn new(p: u64) -> Result<Self> {
        if p <= 3 || p >= (1 << 32) {
            return Err(Error::BadPrime(p));
        }
        if !is_prime_u32(p) {
            return Err(Error::BadPrime(p));
        }
        Ok(Self { p })
    }

    /// A pseudorandom prime in `[2^28, 2^31)` determined by `seed`.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f1e1_d000_0001);
        loop {
            let c = rng.gen_range(DEFAULT_PRIME_MIN..DEFAULT_PRIME_MAX) | 1;
            if is_prime_u32(c) {
                return Self { p: c };
            }
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        (a * b) % self.p
    }

    pub fn pow(&self, mut a: Elem, mut e: u64) -> Elem {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        // extended Euclid on i64; p < 2^32 keeps everything in range
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.p as i64, a as i64);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1);
        if t < 0 {
            (t + self.p as i64) as u64
        } else {
            t as u64
        }
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn from_i64(&self, x: i64) -> Elem {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn from_u64(&self, x: u64) -> Elem {
        x % self.p
    }

    /// Symmetric representative in `(-p/2, p/2]`, handy for printing.
    pub fn to_signed(&self, a: Elem) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    /// Reduces an arbitrary-length decimal integer (optional leading `-`).
    pub fn parse_decimal(&self, s: &str) -> Option<Elem> {
        let s = s.trim();
        let (neg, digits) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        if digits.is_empty() {
            return None;
        }
        let mut acc = 0u64;
        for ch in digits.chars() {
            let d = ch.to_digit(10)? as u64;
            acc = (acc * 10 + d) % self.p;
        }
        Some(if neg { self.neg(acc) } else { acc })
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(1..self.p)
    }

    /// Precomputes a multiplier for repeated products by the constant `w`.
    #[inline]
    pub fn shoup(&self, w: Elem) -> ShoupMul {
        ShoupMul {
            w,
            w_pre: (((w as u128) << 64) / self.p as u128) as u64,
            p: self.p,
        }
    }

    /// `dst[j] -= c * src[j]` for all `j`.
    #[inline]
    pub fn sub_mul_assign(&self, dst: &mut [Elem], src: &[Elem], c: Elem) {
        if c == 0 {
            return;
        }
        let w = self.neg(c);
        let w_pre = (w << 32) / self.p;
        #[cfg(target_arch = "x86_64")]
        if std::is_x86_feature_detected!("avx2") {
            // SAFETY: the feature was detected at runtime
            unsafe { mul_acc_avx2(dst, src, w, w_pre, self.p) };
            return;
        }
        mul_acc(dst, src, w, w_pre, self.p);
    }

    /// `dst[j] += c * src[j]` for all `j`.
    #[inline]
    pub fn add_mul_assign(&self, dst: &mut [Elem], src: &[Elem], c: Elem) {
        self.sub_mul_assign(dst, src, self.neg(c));
    }

    pub fn scale_assign(&self, v: &mut [Elem], c: Elem) {
        let m = self.shoup(c);
        for x in v.iter_mut() {
            *x = m.mul(*x);
        }
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        let acc: u128 = a.iter().zip(b).map(|(&x, &y)| (x * y) as u128).sum();
        (acc % self.p as u128) as u64
    }
}

/// Multiplication by a fixed constant using a precomputed quotient
/// approximation (Shoup's trick). Only valid for reduced inputs.
#[derive(Clone, Copy, Debug)]
pub struct ShoupMul {
    w: u64,
    w_pre: u64,
    p: u64,
}

impl ShoupMul {
    #[inline(always)]
    pub fn mul(&self, x: Elem) -> Elem {
        let q = ((x as u128 * self.w_pre as u128) >> 64) as u64;
        let r = x.wrapping_mul(self.w).wrapping_sub(q.wrapping_mul(self.p));
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }
}

/// `dst[j] += w * src[j]` with a 32-bit Shoup quotient `w_pre`. Every
/// product is 32 x 32 -> 64 bits, which vectorizes. Wrapping ops keep
/// overflow checks out of the loop; nothing here can overflow.
#[inline(always)]
fn mul_acc(dst: &mut [Elem], src: &[Elem], w: u64, w_pre: u64, p: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        let x = s as u32 as u64;
        let q = x.wrapping_mul(w_pre) >> 32;
        let r = x.wrapping_mul(w).wrapping_sub(q.wrapping_mul(p));
        let r = if r >= p { r - p } else { r };
        let t = d.wrapping_add(r);
        *d = if t >= p { t - p } else { t };
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn mul_acc_avx2(dst: &mut [Elem], src: &[Elem], w: u64, w_pre: u64, p: u64) {
    mul_acc(dst, src, w, w_pre, p)
}

/// Deterministic Miller-Rabin, exact for every `n < 2^32`.
pub fn is_prime_u32(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        a %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = (r as u128 * a as u128 % n as u128) as u64;
            }
            a = (a as u128 * a as u128 % n as u128) as u64;
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 7, 61] {
        if a % n == 0 {
            continue;
        }
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_match_trial_division() {
        let trial = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000 {
            assert_eq!(is_prime_u32(n), trial(n), "n = {n}");
        }
    }

    #[test]
    fn random_prime_in_range_and_deterministic() {
        let a = PrimeField::random(7);
        let b = PrimeField::random(7);
        assert_eq!(a, b);
        assert!(a.modulus() >= DEFAULT_PRIME_MIN && a.modulus() < DEFAULT_PRIME_MAX);
        assert_ne!(PrimeField::random(7), PrimeField::random(8));
    }

    #[test]
    fn rejects_tiny_or_composite_moduli() {
        assert!(PrimeField::new(3).is_err());
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn inverse_and_shoup() {
        let f = PrimeField::random(1);
        for a in [1u64, 2, 3, 12345, f.modulus() - 1] {
            assert_eq!(f.mul(a, f.inv(a)), 1);
            let s = f.shoup(a);
            for x in [0u64, 1, 99, f.modulus() - 2] {
                assert_eq!(s.mul(x), f.mul(a, x));
            }
        }
    }

    #[test]
    fn decimal_parsing_reduces() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.parse_decimal("15"), Some(1));
        assert_eq!(f.parse_decimal("-1"), Some(6));
        assert_eq!(
            f.parse_decimal("123456789012345678901234567890"),
            Some((123456789012345678901234567890u128 % 7) as u64)
        );
        assert_eq!(f.parse_decimal("x1"), None);
    }

    #[test]
    fn dot_matches_naive() {
        let f = PrimeField::random(3);
        let a: Vec<u64> = (0..17).map(|i| f.from_u64(i * 987654321)).collect();
        let b: Vec<u64> = (0..17).map(|i| f.from_u64(i * 123456789 + 5)).collect();
        let naive = a.iter().zip(&b).fold(0, |acc, (x, y)| f.add(acc, f.mul(*x, *y)));
        assert_eq!(f.dot(&a, &b), naive);
    }
}
