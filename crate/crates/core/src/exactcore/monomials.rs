//! Graded monomial bases and dense coordinates of homogeneous forms.

use std::collections::HashMap;

use super::field::{Elem, PrimeField};
use super::poly::{total, Exponent, Poly};

/// All monomials of a fixed degree in `nvars` variables, listed in
/// lexicographically decreasing order (`x0^d` first).
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    nvars: usize,
    degree: usize,
    exps: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: usize) -> Self {
        let mut exps = Vec::new();
        let mut cur = vec![0u16; nvars];
        fill(&mut cur, 0, degree, &mut exps);
        let index = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Self {
            nvars,
            degree,
            exps,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn len(&self) -> usize {
        self.exps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }
    pub fn exponent(&self, i: usize) -> &[u16] {
        &self.exps[i]
    }
    pub fn exponents(&self) -> &[Exponent] {
        &self.exps
    }
    pub fn index_of(&self, exp: &[u16]) -> Option<usize> {
        self.index.get(exp).copied()
    }

    /// Values of every monomial at `point`.
    pub fn eval_all(&self, field: PrimeField, point: &[Elem]) -> Vec<Elem> {
        assert_eq!(point.len(), self.nvars);
        let pows: Vec<Vec<Elem>> = point
            .iter()
            .map(|&x| {
                let mut t = vec![1; self.degree + 1];
                for k in 1..=self.degree {
                    t[k] = field.mul(t[k - 1], x);
                }
                t
            })
            .collect();
        self.exps
            .iter()
            .map(|e| {
                e.iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .fold(1, |acc, (v, &k)| field.mul(acc, pows[v][k as usize]))
            })
            .collect()
    }

    /// Dense coefficient vector of a homogeneous polynomial of this degree.
    pub fn coords(&self, p: &Poly) -> Vec<Elem> {
        assert_eq!(p.nvars(), self.nvars);
        let mut v = vec![0; self.len()];
        for (e, c) in p.terms() {
            let i = self
                .index_of(e)
                .unwrap_or_else(|| panic!("term of degree {} in a degree-{} basis", total(e), self.degree));
            v[i] = c;
        }
        v
    }

    pub fn to_poly(&self, field: PrimeField, coords: &[Elem]) -> Poly {
        assert_eq!(coords.len(), self.len());
        Poly::from_terms(
            field,
            self.nvars,
            coords
                .iter()
                .zip(&self.exps)
                .filter(|(&c, _)| c != 0)
                .map(|(&c, e)| (e.clone(), c)),
        )
    }

    /// Table `t[i * other.len() + j]` = index in `target` of
    /// `self[i] * other[j]`.
    pub fn product_table(&self, other: &MonomialBasis, target: &MonomialBasis) -> Vec<u32> {
        assert_eq!(self.nvars, other.nvars);
        assert_eq!(target.nvars, self.nvars);
        assert_eq!(target.degree, self.degree + other.degree);
        let mut buf = vec![0u16; self.nvars];
        let mut t = Vec::with_capacity(self.len() * other.len());
        for a in &self.exps {
            for b in &other.exps {
                for v in 0..self.nvars {
                    buf[v] = a[v] + b[v];
                }
                t.push(target.index_of(&buf).expect("product degree matches target") as u32);
            }
        }
        t
    }
}

fn fill(cur: &mut Vec<u16>, var: usize, left: usize, out: &mut Vec<Exponent>) {
    if var + 1 == cur.len() {
        cur[var] = left as u16;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in (0..=left).rev() {
        cur[var] = k as u16;
        fill(cur, var + 1, left - k, out);
    }
    cur[var] = 0;
}

/// Number of monomials of degree `d` in `n` variables.
pub fn count_monomials(n: usize, d: usize) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    binomial(n + d - 1, d)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Dense product of two forms given in monomial coordinates.
pub fn mul_dense(field: PrimeField, a: &[Elem], b: &[Elem], table: &[u32], target_len: usize) -> Vec<Elem> {
    let mut out = vec![0; target_len];
    accumulate_product(field, a, b, table, &mut out);
    out
}

/// `out += a * b` in monomial coordinates.
pub fn accumulate_product(field: PrimeField, a: &[Elem], b: &[Elem], table: &[u32], out: &mut [Elem]) {
    let nb = b.len();
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        let row = &table[i * nb..(i + 1) * nb];
        for (&cb, &t) in b.iter().zip(row) {
            if cb != 0 {
                let t = t as usize;
                out[t] = field.add(out[t], field.mul(ca, cb));
            }
        }
    }
}
