//! Sparse multivariate polynomials over `F_p`.

use std::collections::BTreeMap;
use std::fmt;

use super::field::{Elem, PrimeField};
use super::univar::UniPoly;

/// Exponent vector, one entry per variable.
pub type Exponent = Vec<u16>;

/// A polynomial stored as a map from exponent vectors to nonzero
/// coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: PrimeField,
    nvars: usize,
    terms: BTreeMap<Exponent, Elem>,
}

impl Poly {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        Self {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: Elem) -> Self {
        Self::monomial(field, vec![0; nvars], c)
    }

    /// The single variable `x_i`.
    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, e, 1)
    }

    pub fn monomial(field: PrimeField, exp: Exponent, c: Elem) -> Self {
        let mut p = Self::zero(field, exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms<I>(field: PrimeField, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, Elem)>,
    {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Adds `c * x^exp`, dropping the term if it cancels.
    pub fn add_term(&mut self, exp: Exponent, c: Elem) {
        assert_eq!(exp.len(), self.nvars, "exponent length must equal nvars");
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, Elem)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }
    pub fn coeff(&self, exp: &[u16]) -> Elem {
        self.terms.get(exp).copied().unwrap_or(0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| total(e)).max()
    }

    /// True for the zero polynomial and for polynomials whose terms all have
    /// the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|e| total(e));
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    pub fn scale(&self, c: Elem) -> Self {
        if c == 0 {
            return Self::zero(self.field, self.nvars);
        }
        let f = self.field;
        Self {
            field: f,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &x)| (e.clone(), f.mul(x, c))).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), self.field.neg(c));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_compatible(other);
        let f = self.field;
        let mut out = Poly::zero(f, self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::constant(self.field, self.nvars, 1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Poly {
        assert!(i < self.nvars, "variable index out of range");
        let f = self.field;
        let mut out = Poly::zero(f, self.nvars);
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, f.mul(c, f.from_u64(e[i] as u64)));
        }
        out
    }

    pub fn eval(&self, point: &[Elem]) -> Elem {
        assert_eq!(point.len(), self.nvars, "point length must equal nvars");
        let f = self.field;
        let maxdeg = self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0) as usize;
        // power tables per variable
        let pows: Vec<Vec<Elem>> = point
            .iter()
            .map(|&x| {
                let mut t = Vec::with_capacity(maxdeg + 1);
                let mut acc = 1;
                for _ in 0..=maxdeg {
                    t.push(acc);
                    acc = f.mul(acc, x);
                }
                t
            })
            .collect();
        let mut s = 0;
        for (e, &c) in &self.terms {
            let mut m = c;
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    m = f.mul(m, pows[v][k as usize]);
                }
            }
            s = f.add(s, m);
        }
        s
    }

    /// Restriction to a line through `base` with direction `dir`:
    /// `t -> self(base + t * dir)`.
    pub fn restrict_to_line(&self, base: &[Elem], dir: &[Elem]) -> UniPoly {
        let f = self.field;
        let linear: Vec<UniPoly> = base
            .iter()
            .zip(dir)
            .map(|(&b, &d)| UniPoly::new(f, vec![b, d]))
            .collect();
        let mut out = UniPoly::zero(f);
        for (e, &c) in &self.terms {
            let mut term = UniPoly::constant(f, c);
            for (v, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(&linear[v]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Substitutes field values for every variable except `keep`.
    pub fn slice(&self, keep: usize, point: &[Elem]) -> UniPoly {
        let mut base = point.to_vec();
        base[keep] = 0;
        let mut dir = vec![0; self.nvars];
        dir[keep] = 1;
        self.restrict_to_line(&base, &dir)
    }

    fn check_compatible(&self, other: &Poly) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
        assert_eq!(self.nvars, other.nvars, "polynomials in different rings");
    }
}

pub(crate) fn total(e: &[u16]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let names: Vec<String> = if self.nvars <= 3 {
            ["x", "y", "z"][..self.nvars].iter().map(|s| s.to_string()).collect()
        } else {
            (0..self.nvars).map(|i| format!("x{i}")).collect()
        };
        for (k, (e, &c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(out, " + ")?;
            }
            write!(out, "{}", self.field.to_signed(c))?;
            for (v, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(out, "*{}", names[v])?,
                    _ => write!(out, "*{}^{}", names[v], p)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xyz(f: PrimeField) -> (Poly, Poly, Poly) {
        (Poly::var(f, 3, 0), Poly::var(f, 3, 1), Poly::var(f, 3, 2))
    }

    #[test]
    fn partial_examples() {
        let f = PrimeField::new(101).unwrap();
        let (x, y, _) = xyz(f);
        let x2y = x.mul(&x).mul(&y);
        assert_eq!(x2y.partial(0), x.mul(&y).scale(2));
        assert!(Poly::constant(f, 3, 5).partial(0).is_zero());

        let f7 = PrimeField::new(7).unwrap();
        let x = Poly::var(f7, 1, 0);
        assert!(x.pow(7).partial(0).is_zero());
    }

    #[test]
    fn eval_examples() {
        let f = PrimeField::new(7).unwrap();
        let x = Poly::var(f, 2, 0);
        let y = Poly::var(f, 2, 1);
        let q = x.mul(&x).add(&y.mul(&y));
        assert_eq!(q.eval(&[2, 2]), 1);
        let g = q.add(&Poly::constant(f, 2, 3));
        assert_eq!(g.eval(&[0, 0]), 3);
    }

    #[test]
    fn homogeneity_and_degree() {
        let f = PrimeField::new(13).unwrap();
        let (x, y, z) = xyz(f);
        let h = x.mul(&y).add(&z.mul(&z));
        assert!(h.is_homogeneous());
        assert_eq!(h.degree(), Some(2));
        assert!(!h.add(&x).is_homogeneous());
        assert_eq!(Poly::zero(f, 3).degree(), None);
        assert!(h.sub(&h).is_zero());
    }

    #[test]
    fn restriction_to_line_matches_eval() {
        let f = PrimeField::random(4);
        let (x, y, z) = xyz(f);
        let p = x.pow(3).add(&y.mul(&z).scale(7)).sub(&z.pow(3));
        let base = [3, 5, 7];
        let dir = [11, 1, 2];
        let u = p.restrict_to_line(&base, &dir);
        for t in 0..6u64 {
            let pt: Vec<u64> = (0..3).map(|i| f.add(base[i], f.mul(t, dir[i]))).collect();
            assert_eq!(u.eval(t), p.eval(&pt));
        }
    }

    fn arb_poly(f: PrimeField, deg: u16) -> impl Strategy<Value = Poly> {
        proptest::collection::vec((0..=deg, 0..=deg, any::<u64>()), 0..6).prop_map(move |ts| {
            Poly::from_terms(
                f,
                3,
                ts.into_iter()
                    .filter(|(a, b, _)| a + b <= deg)
                    .map(|(a, b, c)| (vec![a, b, deg - a - b], f.from_u64(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn leibniz(a in arb_poly(PrimeField::random(9), 3), b in arb_poly(PrimeField::random(9), 2), i in 0usize..3) {
            let lhs = a.mul(&b).partial(i);
            let rhs = a.mul(&b.partial(i)).add(&b.mul(&a.partial(i)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn euler_identity(a in arb_poly(PrimeField::random(9), 4)) {
            let f = a.field();
            let mut s = Poly::zero(f, 3);
            for i in 0..3 {
                s = s.add(&Poly::var(f, 3, i).mul(&a.partial(i)));
            }
            prop_assert_eq!(s, a.scale(4));
        }

        #[test]
        fn homogeneous_scaling(a in arb_poly(PrimeField::random(9), 3), lam in 1u64..1000, pt in proptest::array::uniform3(0u64..1000)) {
            let f = a.field();
            let scaled: Vec<u64> = pt.iter().map(|&v| f.mul(v, lam)).collect();
            prop_assert_eq!(a.eval(&scaled), f.mul(f.pow(lam, 3), a.eval(&pt)));
        }
    }
}
