//! Essential quartic relations among the quadric generators.
//!
//! A quadratic relation `sum_j q_j f_j = 0` is written with
//! `q_j = w_j + sum_i a_ji f_i`, `w_j` in the complement `W` of `I_2`.
//! Modulo Koszul relations only the symmetric part `s_ij = a_ij + a_ji`
//! (and `s_ii = a_ii`) of `a` matters, so relations modulo Koszul are the
//! kernel of
//!
//! `W^m (+) Sym^2(k^m) -> S_4,  (w, s) -> sum_j w_j f_j + sum_{i<=j} s_ij f_i f_j`.
//!
//! Essential relations are kernel vectors outside the span of the images of
//! `x_l * (linear syzygy)`.

use super::presentation::CanonicalPresentation;
use crate::error::{Error, Result};
use crate::exactcore::monomials::{accumulate_product, count_monomials};
use crate::exactcore::{Echelon, Elem, MatrixF, MonomialBasis};

const MAX_UNKNOWNS: usize = 3200;

fn sym_index(m: usize, i: usize, j: usize) -> usize {
    // i <= j, rows of the upper triangle
    i * m - i * (i + 1) / 2 + j
}

fn unknowns(pres: &CanonicalPresentation) -> usize {
    let m = pres.m();
    m * pres.complement().len() + m * (m + 1) / 2
}

pub(crate) fn explicit_feasible(pres: &CanonicalPresentation) -> bool {
    unknowns(pres) <= MAX_UNKNOWNS && count_monomials(pres.g(), 4) <= 2 * MAX_UNKNOWNS
}

/// Coordinates `(w, s)` of a relation given as `m` quadrics.
fn relation_coords(pres: &CanonicalPresentation, q: &[Vec<Elem>]) -> Vec<Elem> {
    let f = pres.field();
    let m = pres.m();
    let nw = pres.complement().len();
    let mut v = vec![0; unknowns(pres)];
    let off = m * nw;
    for (j, qj) in q.iter().enumerate() {
        let (a, w) = pres.reduce_quadric(qj);
        v[j * nw..(j + 1) * nw].copy_from_slice(&w);
        // a[i] is the coefficient of f_i in q_j
        for (i, &ai) in a.iter().enumerate() {
            if ai != 0 {
                let k = off + sym_index(m, i.min(j), i.max(j));
                v[k] = f.add(v[k], ai);
            }
        }
    }
    v
}

/// Relation as `m` quadrics from `(w, s)` coordinates: `q_j` collects
/// `w_j` and `s_ij f_i` for `i <= j`.
fn coords_to_relation(pres: &CanonicalPresentation, v: &[Elem]) -> Vec<Vec<Elem>> {
    let f = pres.field();
    let m = pres.m();
    let nw = pres.complement().len();
    let off = m * nw;
    (0..m)
        .map(|j| {
            let mut q = pres.complement_to_quadric(&v[j * nw..(j + 1) * nw]);
            for i in 0..=j {
                let s = v[off + sym_index(m, i, j)];
                if s != 0 {
                    f.add_mul_assign(&mut q, &pres.quadrics()[i], s);
                }
            }
            q
        })
        .collect()
}

pub(crate) fn essential_quartic_syzygies(pres: &CanonicalPresentation) -> Result<Vec<Vec<Vec<Elem>>>> {
    let f = pres.field();
    let g = pres.g();
    let m = pres.m();
    let s2 = pres.s2();
    let s4 = MonomialBasis::new(g, 4);
    let t22 = s2.product_table(s2, &s4);
    let n = unknowns(pres);
    let nw = pres.complement().len();

    let mut data = vec![0; s4.len() * n];
    let mut put_column = |col: usize, vals: &[Elem]| {
        for (r, &x) in vals.iter().enumerate() {
            if x != 0 {
                data[r * n + col] = x;
            }
        }
    };
    let quads = pres.quadrics();
    let mut scratch = vec![0; s4.len()];
    for j in 0..m {
        for (k, &w) in pres.complement().iter().enumerate() {
            scratch.iter_mut().for_each(|x| *x = 0);
            let mut mono = vec![0; s2.len()];
            mono[w] = 1;
            accumulate_product(f, &mono, &quads[j], &t22, &mut scratch);
            put_column(j * nw + k, &scratch);
        }
    }
    for i in 0..m {
        for j in i..m {
            scratch.iter_mut().for_each(|x| *x = 0);
            accumulate_product(f, &quads[i], &quads[j], &t22, &mut scratch);
            put_column(m * nw + sym_index(m, i, j), &scratch);
        }
    }
    let relations = MatrixF::new(f, s4.len(), n, data).kernel();

    let mut trivial = Echelon::new(f, n);
    for c in 0..pres.m1() {
        for l in 0..g {
            let q: Vec<Vec<Elem>> = (0..m)
                .map(|j| {
                    let mut x = vec![0; g];
                    x[l] = 1;
                    let mut out = vec![0; s2.len()];
                    pres.add_linear_product(&x, pres.syz_entry(c, j), &mut out);
                    out
                })
                .collect();
            trivial.push(relation_coords(pres, &q));
        }
    }
    let mut essential = Vec::new();
    for v in relations {
        if trivial.push(v.clone()) {
            let rel = coords_to_relation(pres, &v);
            check_quartic_relation(pres, &rel, &s4, &t22)?;
            essential.push(rel);
        }
    }
    Ok(essential)
}

fn check_quartic_relation(
    pres: &CanonicalPresentation,
    rel: &[Vec<Elem>],
    s4: &MonomialBasis,
    t22: &[u32],
) -> Result<()> {
    let mut acc = vec![0; s4.len()];
    for (q, fj) in rel.iter().zip(pres.quadrics()) {
        accumulate_product(pres.field(), q, fj, t22, &mut acc);
    }
    if acc.iter().any(|&x| x != 0) {
        return Err(Error::CertificateFail("quartic syzygy is not a relation".into()));
    }
    Ok(())
}
