//! Dense univariate polynomials over `F_p` and root finding.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{Elem, PrimeField};

/// Coefficients in increasing degree, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn new(field: PrimeField, mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn constant(field: PrimeField, c: Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// `x - a`.
    pub fn linear_root(field: PrimeField, a: Elem) -> Self {
        Self::new(field, vec![field.neg(a), 1])
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                f.add(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Self::new(f, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, c: Elem) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let f = self.field;
        let mut c = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a != 0 {
                f.add_mul_assign(&mut c[i..i + other.coeffs.len()], &other.coeffs, a);
            }
        }
        Self::new(f, c)
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        Self::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.from_u64(i as u64)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()))
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let f = self.field;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let inv = f.inv(d.lead());
        let mut r = self.coeffs.clone();
        let mut q = vec![0; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + dd], inv);
            q[k] = c;
            if c != 0 {
                f.sub_mul_assign(&mut r[k..k + dd + 1], &d.coeffs, c);
            }
        }
        r.truncate(dd);
        (Self::new(f, q), Self::new(f, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `base^e mod self`.
    fn powmod(&self, base: &Self, mut e: u64) -> Self {
        let f = self.field;
        let mut result = Self::constant(f, 1).rem(self);
        let mut b = base.rem(self);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b).rem(self);
            }
            b = b.mul(&b).rem(self);
            e >>= 1;
        }
        result
    }

    /// Distinct roots in `F_p`, sorted increasingly.
    pub fn roots(&self) -> Vec<Elem> {
        let f = self.field;
        match self.degree() {
            None | Some(0) => return Vec::new(),
            Some(1) => return vec![f.div(f.neg(self.coeffs[0]), self.coeffs[1])],
            _ => {}
        }
        let x = Self::new(f, vec![0, 1]);
        let xp = self.powmod(&x, f.modulus());
        let split = self.gcd(&xp.sub(&x));
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(split.coeffs.len() as u64);
        split_linear(&split, &mut rng, &mut out);
        out.sort_unstable();
        out
    }

    /// Multiplicity of `a` as a root (0 if not a root). The zero polynomial
    /// has no meaningful multiplicity and returns `usize::MAX`.
    pub fn root_multiplicity(&self, a: Elem) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Self::linear_root(self.field, a);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.divrem(&lin);
            if !r.is_zero() {
                return k;
            }
            p = q;
            k += 1;
        }
    }

    /// Resultant of two polynomials, taken with their actual degrees.
    pub fn resultant(&self, other: &Self) -> Elem {
        let f = self.field;
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return 0;
        };
        if db == 0 {
            return f.pow(other.lead(), da as u64);
        }
        if da == 0 {
            return f.pow(self.lead(), db as u64);
        }
        let r = self.rem(other);
        let Some(dr) = r.degree() else {
            return 0;
        };
        let mut res = f.mul(f.pow(other.lead(), (da - dr) as u64), other.resultant(&r));
        if da * db % 2 == 1 {
            res = f.neg(res);
        }
        res
    }

    /// The polynomial of degree `< xs.len()` through the points
    /// `(xs[i], ys[i])`; the `xs` must be distinct.
    pub fn interpolate(field: PrimeField, xs: &[Elem], ys: &[Elem]) -> Self {
        // Newton divided differences
        let n = xs.len();
        let mut c = ys.to_vec();
        for k in 1..n {
            for i in (k..n).rev() {
                let num = field.sub(c[i], c[i - 1]);
                c[i] = field.div(num, field.sub(xs[i], xs[i - k]));
            }
        }
        let mut p = Self::zero(field);
        for i in (0..n).rev() {
            p = p
                .mul(&Self::linear_root(field, xs[i]))
                .add(&Self::constant(field, c[i]));
        }
        p
    }
}

/// Equal-degree splitting of a monic product of distinct linear factors.
fn split_linear(g: &UniPoly, rng: &mut ChaCha8Rng, out: &mut Vec<Elem>) {
    let f = g.field;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(f.neg(g.coeffs[0])),
        Some(_) => loop {
            let a = f.random_elem(rng);
            let shifted = UniPoly::new(f, vec![a, 1]);
            let h = g.powmod(&shifted, (f.modulus() - 1) / 2);
            let d = g.gcd(&h.sub(&UniPoly::constant(f, 1)));
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && Some(dd) != g.degree() {
                split_linear(&d, rng, out);
                split_linear(&g.divrem(&d).0, rng, out);
                return;
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_detects_common_roots() {
        let f = PrimeField::new(101).unwrap();
        let a = UniPoly::linear_root(f, 3).mul(&UniPoly::linear_root(f, 5));
        let b = UniPoly::linear_root(f, 5).mul(&UniPoly::linear_root(f, 9));
        assert_eq!(a.resultant(&b), 0);
        // Res(x - 3, x - 9) = 3 - 9 = -6
        let c = UniPoly::linear_root(f, 3);
        let d = UniPoly::linear_root(f, 9);
        assert_eq!(c.resultant(&d), f.from_i64(-6));
        // Res(x^2 + 1, x - 2) = 5 up to the sign (-1)^(2*1)
        let e = UniPoly::new(f, vec![1, 0, 1]);
        assert_eq!(e.resultant(&UniPoly::linear_root(f, 2)), 5);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = PrimeField::new(1_000_003).unwrap();
        let p = UniPoly::new(f, vec![4, 0, 7, 1, 9]);
        let xs: Vec<Elem> = (10..15).collect();
        let ys: Vec<Elem> = xs.iter().map(|&x| p.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(f, &xs, &ys), p);
    }

    #[test]
    fn roots_of_product() {
        let f = PrimeField::random(21);
        let rs = [5u64, 17, 123456, f.modulus() - 3];
        let mut p = UniPoly::constant(f, 7);
        for &r in &rs {
            p = p.mul(&UniPoly::linear_root(f, r));
        }
        // an irreducible-ish quadratic factor with no roots keeps things honest
        let nonres = (2..).find(|&c| f.pow(c, (f.modulus() - 1) / 2) != 1).unwrap();
        p = p.mul(&UniPoly::new(f, vec![f.neg(nonres), 0, 1]));
        let mut want = rs.to_vec();
        want.sort_unstable();
        assert_eq!(p.roots(), want);
    }

    #[test]
    fn repeated_roots_reported_once() {
        let f = PrimeField::new(10007).unwrap();
        let l = UniPoly::linear_root(f, 3);
        let p = l.mul(&l).mul(&UniPoly::linear_root(f, 9));
        assert_eq!(p.roots(), vec![3, 9]);
        assert_eq!(p.root_multiplicity(3), 2);
        assert_eq!(p.root_multiplicity(9), 1);
        assert_eq!(p.root_multiplicity(4), 0);
    }

    #[test]
    fn divrem_reconstructs() {
        let f = PrimeField::new(97).unwrap();
        let a = UniPoly::new(f, vec![1, 2, 3, 4, 5, 6]);
        let b = UniPoly::new(f, vec![7, 0, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = PrimeField::new(97).unwrap();
        let c = UniPoly::new(f, vec![3, 1]);
        let a = c.mul(&UniPoly::new(f, vec![1, 1, 1]));
        let b = c.mul(&UniPoly::new(f, vec![5, 2])).scale(11);
        assert_eq!(a.gcd(&b), c);
    }
}
