//! Multiplication maps and Gaussian maps `Phi_{omega^k, omega}` by point
//! evaluation.
//!
//! A section of `omega^j` is evaluated in the chart `z = 1` with local
//! coordinate `x` (see [`crate::curvemodel::SectionBasis`]). A linear map
//! into `H^0(omega^n)` is injective on evaluation at more than
//! `n(2g-2)` distinct points, so ranks of evaluation matrices are exact
//! ranks over `F_p`.

use crate::curvemodel::{CurvePoint, PlaneCurve, SectionBasis};
use crate::error::{Error, Result};
use crate::exactcore::{Echelon, Elem, MatrixF};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussReport {
    pub k: usize,
    pub dim_source: usize,
    pub dim_target: usize,
    pub rank: usize,
    pub corank: usize,
    pub prime: u64,
    pub seed: u64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultReport {
    pub k: usize,
    pub dim_left: usize,
    pub dim_right: usize,
    pub dim_target: usize,
    pub rank: usize,
    pub corank: usize,
    /// For `k = 1`: dimension of the kernel restricted to `Sym^2`, i.e. the
    /// number of independent quadrics containing the canonical image.
    pub sym_kernel: Option<usize>,
    /// Basis of `R(omega^k, omega)`, as coefficient vectors over the pairs
    /// `(a, b)` indexed `a * dim_right + b`.
    pub kernel: Vec<Vec<Elem>>,
    pub prime: u64,
    pub seed: u64,
    pub points: usize,
}

fn check_genus(c: &PlaneCurve) -> Result<usize> {
    let g = c.genus();
    if g < 2 {
        return Err(Error::BadInput(format!("{}: genus {g} < 2", c.name())));
    }
    Ok(g)
}

/// `h^0(omega^n) = (2n-1)(g-1)` for `n >= 2`, `g` for `n = 1`.
pub fn h0_omega_power(g: usize, n: usize) -> usize {
    match n {
        0 => 1,
        1 => g,
        _ => (2 * n - 1) * (g - 1),
    }
}

/// Entry of the Gaussian map on a pure tensor: `S T' - T S'`.
#[inline]
fn gauss_entry(c: &PlaneCurve, s: (Elem, Elem), t: (Elem, Elem)) -> Elem {
    let f = c.field();
    f.sub(f.mul(s.0, t.1), f.mul(t.0, s.1))
}

/// Rows indexed by pairs `i < j` of canonical sections, columns by `M`
/// sample points; entry `S_i S_j' - S_j S_i'`.
pub fn wahl_matrix(c: &PlaneCurve, points: usize, seed: u64) -> Result<MatrixF> {
    let g = check_genus(c)?;
    let basis = c.adjoint_basis()?;
    let pts = c.sample_points(points, seed)?;
    Ok(wahl_matrix_at(c, &basis, &pts, g))
}

fn wahl_matrix_at(c: &PlaneCurve, basis: &SectionBasis, pts: &[CurvePoint], g: usize) -> MatrixF {
    let jets: Vec<Vec<(Elem, Elem)>> = pts.iter().map(|q| basis.jets_at(q)).collect();
    let mut rows = Vec::with_capacity(g * (g - 1) / 2);
    for i in 0..g {
        for j in i + 1..g {
            rows.push(jets.iter().map(|jq| gauss_entry(c, jq[i], jq[j])).collect());
        }
    }
    MatrixF::from_rows(c.field(), pts.len(), rows)
}

/// Default evaluation count for the Wahl map: `6g - 5`.
pub fn wahl_points(g: usize) -> usize {
    6 * g - 5
}

/// Corank of the Wahl map `wedge^2 H^0(omega) -> H^0(omega^3)`.
pub fn wahl_corank(c: &PlaneCurve, seed: u64, points: Option<usize>) -> Result<GaussReport> {
    let g = check_genus(c)?;
    let m = points.unwrap_or_else(|| wahl_points(g));
    if m < wahl_points(g) {
        return Err(Error::BadInput(format!(
            "need at least {} points, got {m}",
            wahl_points(g)
        )));
    }
    let mat = wahl_matrix(c, m, seed)?;
    let rank = mat.rank();
    let target = 5 * (g - 1);
    Ok(GaussReport {
        k: 1,
        dim_source: g * (g - 1) / 2,
        dim_target: target,
        rank,
        corank: target - rank,
        prime: c.field().modulus(),
        seed,
        points: m,
    })
}

/// Values `S_a(q) T_b(q)` for all pairs, one row per pair.
fn product_rows(left: &[Vec<(Elem, Elem)>], right: &[Vec<(Elem, Elem)>], c: &PlaneCurve) -> Vec<Vec<Elem>> {
    let f = c.field();
    let (nl, nr) = (left[0].len(), right[0].len());
    let mut rows = vec![Vec::with_capacity(left.len()); nl * nr];
    for (lq, rq) in left.iter().zip(right) {
        for a in 0..nl {
            for b in 0..nr {
                rows[a * nr + b].push(f.mul(lq[a].0, rq[b].0));
            }
        }
    }
    rows
}

/// Rank of `mu: H^0(omega^k) (x) H^0(omega) -> H^0(omega^(k+1))`.
pub fn mult_rank(c: &PlaneCurve, k: usize, seed: u64, points: Option<usize>) -> Result<MultReport> {
    let g = check_genus(c)?;
    if !(1..=2).contains(&k) {
        return Err(Error::BadInput(format!("twist k = {k} not in {{1, 2}}")));
    }
    let min_points = (2 * k + 2) * (g - 1) + 1;
    let m = points.unwrap_or(min_points);
    if m < min_points {
        return Err(Error::BadInput(format!("need at least {min_points} points, got {m}")));
    }
    let can = c.adjoint_basis()?;
    let left = c.omega_power_basis(k, seed)?;
    let pts = c.sample_points(m, seed)?;
    let lj: Vec<_> = pts.iter().map(|q| left.jets_at(q)).collect();
    let rj: Vec<_> = pts.iter().map(|q| can.jets_at(q)).collect();
    let rows = product_rows(&lj, &rj, c);
    let mat = MatrixF::from_rows(c.field(), m, rows);
    let kernel = mat.left_kernel();
    let rank = left.len() * g - kernel.len();
    let target = h0_omega_power(g, k + 1);
    let sym_kernel = (k == 1).then(|| {
        let mut e = Echelon::new(c.field(), m);
        for a in 0..g {
            for b in a..g {
                e.push(mat.row(a * g + b).to_vec());
            }
        }
        g * (g + 1) / 2 - e.rank()
    });
    Ok(MultReport {
        k,
        dim_left: left.len(),
        dim_right: g,
        dim_target: target,
        rank,
        corank: target.saturating_sub(rank),
        sym_kernel,
        kernel,
        prime: c.field().modulus(),
        seed,
        points: m,
    })
}

/// Corank of `Phi_{omega^k, omega}` restricted to `R(omega^k, omega)`.
///
/// For `k = 2` the rank on the kernel of `mu` is obtained as
/// `rank[mu | Phi] - rank[mu]` over the full tensor product, which avoids
/// materializing the kernel.
pub fn gauss_corank(c: &PlaneCurve, k: usize, seed: u64, points: Option<usize>) -> Result<GaussReport> {
    let g = check_genus(c)?;
    match k {
        1 => wahl_corank(c, seed, points),
        2 => {
            let min_points = 8 * g - 7;
            let m = points.unwrap_or(min_points);
            if m < min_points {
                return Err(Error::BadInput(format!("need at least {min_points} points, got {m}")));
            }
            let f = c.field();
            let can = c.adjoint_basis()?;
            let sq = c.omega_power_basis(2, seed)?;
            let pts = c.sample_points(m, seed)?;
            let lj: Vec<_> = pts.iter().map(|q| sq.jets_at(q)).collect();
            let rj: Vec<_> = pts.iter().map(|q| can.jets_at(q)).collect();
            let mu_rows = product_rows(&lj, &rj, c);
            let nr = g;
            let mut combined = Echelon::new(f, 2 * m);
            let mut mu_only = Echelon::new(f, m);
            mu_only.push_rows(mu_rows.iter().cloned());
            combined.push_rows(mu_rows.into_iter().enumerate().map(|(ab, mut row)| {
                let (a, b) = (ab / nr, ab % nr);
                row.extend(lj.iter().zip(&rj).map(|(lq, rq)| gauss_entry(c, lq[a], rq[b])));
                row
            }));
            let rank = combined.rank() - mu_only.rank();
            let source = sq.len() * g - mu_only.rank();
            let target = h0_omega_power(g, 4);
            Ok(GaussReport {
                k,
                dim_source: source,
                dim_target: target,
                rank,
                corank: target - rank,
                prime: f.modulus(),
                seed,
                points: m,
            })
        }
        _ => Err(Error::BadInput(format!("twist k = {k} not in {{1, 2}}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvemodel::Gonality;
    use crate::exactcore::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn curve(seed: u64, d: usize, mults: &[usize]) -> PlaneCurve {
        let f = PrimeField::random(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PlaneCurve::random_with_singularities("t", f, d, mults, Gonality::Unknown, &mut rng).unwrap()
    }

    #[test]
    fn quartic_shape_and_corank() {
        let c = curve(1, 4, &[]);
        let m = wahl_matrix(&c, 13, 0).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 13));
        // a smooth quartic has injective Wahl map: corank 10 - 3 = 7
        assert_eq!(wahl_corank(&c, 0, None).unwrap().corank, 7);
    }

    #[test]
    fn hyperelliptic_quintic() {
        let c = curve(2, 5, &[3]);
        let r = wahl_corank(&c, 0, None).unwrap();
        assert_eq!(r.corank, 3 * 3 - 2);
        assert!(r.rank <= r.dim_source.min(r.dim_target));
    }

    #[test]
    fn more_points_do_not_change_rank() {
        let c = curve(3, 5, &[2]);
        let g = c.genus();
        let a = wahl_matrix(&c, 6 * g - 5, 4).unwrap().rank();
        let b = wahl_matrix(&c, 6 * g + 5, 4).unwrap().rank();
        assert_eq!(a, b);
        let mut cols: Vec<usize> = (0..6 * g + 5).collect();
        cols.pop();
        let full = wahl_matrix(&c, 6 * g + 5, 4).unwrap();
        assert!(full.select_columns(&cols).rank() <= full.rank());
    }

    #[test]
    fn multiplication_surjective_for_smooth_quintic() {
        let c = curve(4, 5, &[]);
        let r = mult_rank(&c, 1, 0, None).unwrap();
        assert_eq!(r.dim_target, 15);
        assert_eq!(r.corank, 0);
        // 21 - 15 quadrics through the canonical curve of genus 6
        assert_eq!(r.sym_kernel, Some(6));
        assert_eq!(r.kernel.len(), 36 - 15);
    }

    #[test]
    fn quartic_has_no_quadrics() {
        let c = curve(5, 4, &[]);
        let r = mult_rank(&c, 1, 0, None).unwrap();
        assert_eq!(r.sym_kernel, Some(0));
        assert_eq!(r.corank, 0);
    }

    #[test]
    fn gaussian_kills_symmetric_tensors() {
        let c = curve(6, 5, &[]);
        let basis = c.adjoint_basis().unwrap();
        for q in c.sample_points(20, 1).unwrap() {
            let jq = basis.jets_at(&q);
            for a in 0..jq.len() {
                for b in 0..jq.len() {
                    let s = c
                        .field()
                        .add(gauss_entry(&c, jq[a], jq[b]), gauss_entry(&c, jq[b], jq[a]));
                    assert_eq!(s, 0);
                }
            }
        }
    }

    #[test]
    fn gauss_k1_is_wahl() {
        let c = curve(7, 5, &[2]);
        assert_eq!(gauss_corank(&c, 1, 0, None).unwrap(), wahl_corank(&c, 0, None).unwrap());
    }

    #[test]
    fn second_gaussian_positive_for_hyperelliptic() {
        let c = curve(8, 5, &[3]);
        let r = gauss_corank(&c, 2, 0, None).unwrap();
        assert_eq!(r.dim_target, 14);
        assert!(r.corank > 0);
    }
}
