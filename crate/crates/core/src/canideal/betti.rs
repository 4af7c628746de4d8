//! Vanishing of the Betti number `beta_{2,4}` via an Artinian reduction.
//!
//! Cutting the canonical ring by two general linear forms gives a graded
//! Gorenstein algebra `A` with Hilbert function `(1, g-2, g-2, 1)` and the
//! same graded Betti numbers. `beta_{2,4}` is the homology of the Koszul
//! strand
//!
//! `wedge^3 U (x) A_1 -> wedge^2 U (x) A_2 -> U (x) A_3`,  `U = A_1`.
//!
//! The outer map is tiny and its rank is computed exactly. The rank of the
//! inner map is bounded below by eliminating random combinations of its
//! rows; reaching the dimension of the kernel of the outer map proves the
//! homology vanishes. Failing to reach it proves nothing, and the caller
//! falls back to an explicit computation.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::presentation::CanonicalPresentation;
use crate::error::Result;
use crate::exactcore::{Echelon, Elem, MatrixF, MonomialBasis};

pub(crate) fn certify_no_quadratic_syzygies(pres: &CanonicalPresentation, seed: u64) -> Result<bool> {
    let f = pres.field();
    let g = pres.g();
    if g < 5 {
        return Ok(false);
    }
    let n = g - 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa271_7a11_0000_0002);

    // restrict to the subspace x = T u
    let t: Vec<Vec<Elem>> = (0..g)
        .map(|_| (0..n).map(|_| f.random_elem(&mut rng)).collect())
        .collect();
    let u1 = MonomialBasis::new(n, 1);
    let u2 = MonomialBasis::new(n, 2);
    let u3 = MonomialBasis::new(n, 3);
    let tu11 = u1.product_table(&u1, &u2);
    let tu21 = u2.product_table(&u1, &u3);
    let s2 = pres.s2();
    let restricted: Vec<Vec<Elem>> = pres
        .quadrics()
        .iter()
        .map(|q| {
            let mut out = vec![0; u2.len()];
            for (k, &c) in q.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let e = s2.exponent(k);
                let mut vars = e
                    .iter()
                    .enumerate()
                    .flat_map(|(v, &p)| std::iter::repeat_n(v, p as usize));
                let (a, b) = (vars.next().unwrap(), vars.next().unwrap());
                let ta: Vec<Elem> = t[a].iter().map(|&x| f.mul(x, c)).collect();
                crate::exactcore::monomials::accumulate_product(f, &ta, &t[b], &tu11, &mut out);
            }
            out
        })
        .collect();

    // A_2 = S'_2 / J_2
    let mut j2 = Echelon::new(f, u2.len());
    j2.push_rows(restricted.iter().cloned());
    if j2.rank() != pres.m() {
        return Ok(false);
    }
    j2.make_reduced();
    let basis2 = j2.free_columns();
    if basis2.len() != n {
        return Ok(false);
    }
    // reduction of every degree-2 monomial to A_2 coordinates
    let mut red2 = vec![vec![0; n]; u2.len()];
    for (k, &c) in basis2.iter().enumerate() {
        red2[c][k] = 1;
    }
    for (row, &lead) in j2.rows().iter().zip(j2.pivots()) {
        for (k, &c) in basis2.iter().enumerate() {
            red2[lead][k] = f.neg(row[c]);
        }
    }

    // A_3 is one-dimensional; lambda spans the functionals killing J_3
    let mut j3 = Echelon::new(f, u3.len());
    j3.push_rows(j2.rows().iter().flat_map(|row| {
        (0..n).map(|i| {
            let mut v = vec![0; u3.len()];
            for (a, &c) in row.iter().enumerate() {
                if c != 0 {
                    v[tu21[a * n + i] as usize] = f.add(v[tu21[a * n + i] as usize], c);
                }
            }
            v
        })
    }));
    let lambda = j3.kernel();
    if lambda.len() != 1 {
        return Ok(false);
    }
    let lambda = &lambda[0];
    // mu[a][k] = lambda(u_a * basis2[k])
    let mu: Vec<Vec<Elem>> = (0..n)
        .map(|a| basis2.iter().map(|&b| lambda[tu21[b * n + a] as usize]).collect())
        .collect();

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut pair_index = vec![usize::MAX; n * n];
    for (k, &(a, b)) in pairs.iter().enumerate() {
        pair_index[a * n + b] = k;
    }
    let mid = pairs.len() * n;

    // outer map: e_a ^ e_b (x) beta -> e_b mu[a][beta] - e_a mu[b][beta]
    let mut d3 = MatrixF::zeros(f, n, mid);
    for (k, &(a, b)) in pairs.iter().enumerate() {
        for beta in 0..n {
            let col = k * n + beta;
            d3.set(b, col, f.add(d3.get(b, col), mu[a][beta]));
            d3.set(a, col, f.sub(d3.get(a, col), mu[b][beta]));
        }
    }
    let target = mid - d3.rank();

    // inner map rows: e_a ^ e_b ^ e_c (x) u_l
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| (a, b, c))))
        .collect();
    let source = triples.len() * n;
    let prod = |a: usize, l: usize| &red2[tu11[a * n + l] as usize];
    let inner_row = |idx: usize, coeff: Elem, out: &mut [Elem]| {
        let (a, b, c) = triples[idx / n];
        let l = idx % n;
        let terms = [
            (pair_index[b * n + c], a, coeff),
            (pair_index[a * n + c], b, f.neg(coeff)),
            (pair_index[a * n + b], c, coeff),
        ];
        for (p, v, s) in terms {
            f.add_mul_assign(&mut out[p * n..(p + 1) * n], prod(v, l), s);
        }
    };
    let mut ech = Echelon::new(f, mid);
    let per_row = 6.min(source);
    let mut attempts = 0;
    while ech.rank() < target && attempts < 3 * target + 64 {
        let batch: Vec<Vec<Elem>> = (0..16)
            .map(|_| {
                let mut row = vec![0; mid];
                for idx in sample(&mut rng, source, per_row) {
                    inner_row(idx, f.random_nonzero(&mut rng), &mut row);
                }
                row
            })
            .collect();
        attempts += batch.len();
        ech.push_rows(batch);
    }
    Ok(ech.rank() == target)
}
