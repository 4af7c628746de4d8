//! Graded pieces of `Hom(I/I^2, S/I)`: sections of the twisted normal
//! bundle `N(-k)` of the canonical curve for `k = 1, 2`.
//!
//! For `k = 1` an element assigns a linear form `phi_j` to each quadric
//! `f_j`; it is stored as a vector of length `m g` with `phi_j` in the slot
//! `j g .. (j + 1) g`. For `k = 2` it assigns a constant to each quadric.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::presentation::{CanonicalPresentation, QuarticSyzygies};
use crate::error::{Error, Result};
use crate::exactcore::{Echelon, Elem};

#[derive(Clone, Debug)]
pub struct NormalSectionSpace {
    pub k: usize,
    pub dim: usize,
    pub basis: Vec<Vec<Elem>>,
}

fn check_supported(pres: &CanonicalPresentation) -> Result<()> {
    if pres.quartic_status() == QuarticSyzygies::Pending {
        return Err(Error::BadInput("syzygies have not been computed".into()));
    }
    if pres.cubic_generators() > 0 {
        return Err(Error::Unsupported(format!(
            "canonical ideal has {} cubic generators; only quadric presentations are handled",
            pres.cubic_generators()
        )));
    }
    if pres.quartic_status() == QuarticSyzygies::Unknown {
        return Err(Error::Unsupported(
            "quartic syzygies neither certified absent nor small enough to compute".into(),
        ));
    }
    Ok(())
}

/// Values `r_jc(P)` of every linear syzygy entry at the point `x`:
/// `out[c][j]`.
fn syzygy_values(pres: &CanonicalPresentation, x: &[Elem]) -> Vec<Vec<Elem>> {
    let f = pres.field();
    let g = pres.g();
    pres.syz3()
        .iter()
        .map(|col| col.chunks_exact(g).map(|l| f.dot(l, x)).collect())
        .collect()
}

/// `phi_j(P)` for a tuple of linear forms.
fn linear_tuple_values(pres: &CanonicalPresentation, phi: &[Elem], x: &[Elem]) -> Vec<Elem> {
    let f = pres.field();
    phi.chunks_exact(pres.g()).map(|l| f.dot(l, x)).collect()
}

/// Quartic syzygy entries evaluated at a point: `out[c][j] = q_jc(P)`.
fn quartic_values(pres: &CanonicalPresentation, x: &[Elem]) -> Vec<Vec<Elem>> {
    let f = pres.field();
    let mono = pres.s2().eval_all(f, x);
    pres.syz4ess()
        .iter()
        .map(|col| col.iter().map(|q| f.dot(q, &mono)).collect())
        .collect()
}

/// Checks the contraction conditions for a tuple of linear forms at every
/// sample point. Quadrics (resp. cubics) restricted to the curve are
/// sections of `omega^2` (resp. `omega^3`), so vanishing at more than
/// `4g - 4` (resp. `6g - 6`) points is vanishing on the curve.
pub fn satisfies_k1(pres: &CanonicalPresentation, phi: &[Elem]) -> bool {
    let f = pres.field();
    pres.coords().table.iter().all(|x| {
        let vals = linear_tuple_values(pres, phi, x);
        syzygy_values(pres, x).iter().all(|r| f.dot(r, &vals) == 0)
            && quartic_values(pres, x).iter().all(|q| f.dot(q, &vals) == 0)
    })
}

fn satisfies_k1_batch(pres: &CanonicalPresentation, phis: &[Vec<Elem>]) -> bool {
    let f = pres.field();
    pres.coords().table.iter().all(|x| {
        let r = syzygy_values(pres, x);
        let q = quartic_values(pres, x);
        phis.iter().all(|phi| {
            let vals = linear_tuple_values(pres, phi, x);
            r.iter().all(|rc| f.dot(rc, &vals) == 0) && q.iter().all(|qc| f.dot(qc, &vals) == 0)
        })
    })
}

pub fn normal_sections(pres: &CanonicalPresentation, k: usize, seed: u64) -> Result<NormalSectionSpace> {
    check_supported(pres)?;
    match k {
        1 => normal_sections_k1(pres, seed, &[]),
        2 => normal_sections_k2(pres, &[]),
        _ => Err(Error::BadInput(format!("twist k = {k} not in {{1, 2}}"))),
    }
}

/// Same as [`normal_sections`] with extra quadratic-entry relation columns
/// imposed (each column is `m` dense quadrics).
pub fn normal_sections_with_columns(
    pres: &CanonicalPresentation,
    k: usize,
    seed: u64,
    extra: &[Vec<Vec<Elem>>],
) -> Result<NormalSectionSpace> {
    check_supported(pres)?;
    match k {
        1 => normal_sections_k1(pres, seed, extra),
        2 => normal_sections_k2(pres, extra),
        _ => Err(Error::BadInput(format!("twist k = {k} not in {{1, 2}}"))),
    }
}

fn normal_sections_k1(pres: &CanonicalPresentation, seed: u64, extra: &[Vec<Vec<Elem>>]) -> Result<NormalSectionSpace> {
    let f = pres.field();
    let g = pres.g();
    let m = pres.m();
    let n = m * g;
    let pts = &pres.coords().table;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6e6f_726d_616c_0001);
    let mut ech = Echelon::new(f, n);

    let tensor_row = |v: &[Elem], x: &[Elem]| -> Vec<Elem> {
        let mut row = Vec::with_capacity(n);
        for &vj in v {
            row.extend(x.iter().map(|&xl| f.mul(vj, xl)));
        }
        row
    };

    // quadratic-entry columns are imposed exactly: they are few
    let s2 = pres.s2();
    for x in pts {
        let mono = s2.eval_all(f, x);
        let mut rows = Vec::new();
        for col in pres.syz4ess().iter().chain(extra) {
            let v: Vec<Elem> = col.iter().map(|q| f.dot(q, &mono)).collect();
            rows.push(tensor_row(&v, x));
        }
        ech.push_rows(rows);
    }

    // linear syzygies: random combinations per point, then exact check
    let m1 = pres.m1();
    let mut per_point = if m1 == 0 {
        0
    } else {
        (n + n / 8 + 64).div_ceil(pts.len()).min(m1)
    };
    for round in 0..6 {
        if per_point > 0 {
            for x in pts {
                let r = syzygy_values(pres, x);
                let rows: Vec<Vec<Elem>> = (0..per_point)
                    .map(|_| {
                        let mut v = vec![0; m];
                        for rc in &r {
                            f.add_mul_assign(&mut v, rc, f.random_elem(&mut rng));
                        }
                        tensor_row(&v, x)
                    })
                    .collect();
                ech.push_rows(rows);
            }
        }
        let basis = ech.kernel();
        if satisfies_k1_batch(pres, &basis) {
            return Ok(NormalSectionSpace {
                k: 1,
                dim: basis.len(),
                basis,
            });
        }
        per_point = (per_point.max(1) * 2).min(m1.max(1));
        if round == 5 {
            break;
        }
    }
    Err(Error::CertificateFail("normal-section solve did not stabilise".into()))
}

fn normal_sections_k2(pres: &CanonicalPresentation, extra: &[Vec<Vec<Elem>>]) -> Result<NormalSectionSpace> {
    let f = pres.field();
    let g = pres.g();
    let m = pres.m();
    let mut ech = Echelon::new(f, m);
    // sum_j r_jc phi_j = 0 as a linear form
    'outer: for col in pres.syz3() {
        for l in 0..g {
            if ech.rank() == m {
                break 'outer;
            }
            ech.push((0..m).map(|j| col[j * g + l]).collect());
        }
    }
    // sum_j q_jc phi_j in I_2
    for col in pres.syz4ess().iter().chain(extra) {
        let proj: Vec<Vec<Elem>> = col.iter().map(|q| pres.reduce_quadric(q).1).collect();
        for w in 0..pres.complement().len() {
            ech.push((0..m).map(|j| proj[j][w]).collect());
        }
    }
    let basis = ech.kernel();
    Ok(NormalSectionSpace {
        k: 2,
        dim: basis.len(),
        basis,
    })
}

/// The tuples `(d f_1/d x_i, ..., d f_m/d x_i)`, one per coordinate.
pub fn trivial_normal_fields(pres: &CanonicalPresentation) -> Result<Vec<Vec<Elem>>> {
    let f = pres.field();
    let g = pres.g();
    let m = pres.m();
    let s2 = pres.s2();
    let fields: Vec<Vec<Elem>> = (0..g)
        .map(|i| {
            let mut v = vec![0; m * g];
            for (j, q) in pres.quadrics().iter().enumerate() {
                for (k, &c) in q.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let e = s2.exponent(k);
                    match e[i] {
                        0 => {}
                        2 => v[j * g + i] = f.add(v[j * g + i], f.add(c, c)),
                        _ => {
                            let other = e.iter().enumerate().position(|(t, &p)| p == 1 && t != i).unwrap();
                            v[j * g + other] = f.add(v[j * g + other], c);
                        }
                    }
                }
            }
            v
        })
        .collect();
    if !satisfies_k1_batch(pres, &fields) {
        return Err(Error::CertificateFail(
            "a trivial normal field violates the contraction conditions".into(),
        ));
    }
    let mut e = Echelon::new(f, m * g);
    e.push_rows(fields.iter().cloned());
    if e.rank() != g {
        return Err(Error::RankFail {
            what: "trivial normal fields",
            expected: g,
            found: e.rank(),
        });
    }
    Ok(fields)
}
