//! Extensions of a canonical curve from ribbons.
//!
//! A ribbon class is a tuple `f_v = (phi_1, .., phi_m)` of linear forms in
//! `N(-1)` modulo the trivial fields. Given the quadrics `f` and their
//! linear syzygies `r` (so `f r = 0`), the extension data is
//!
//! - `r_v`, constants with `f_v r + f r_v = 0`,
//! - `h_v`, constants with `f_v r_v + h_v r = 0`,
//!
//! and `f + t f_v + t^2 h_v` are the equations of a surface in `P^g`
//! having the curve as its hyperplane section `t = 0`.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::canideal::{normal_sections, trivial_normal_fields, CanonicalPresentation, QuarticSyzygies};
use crate::error::{Error, Result};
use crate::exactcore::{Echelon, Elem, MatrixF, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonVector {
    /// `phi_j` in slot `j g .. (j + 1) g`.
    pub f_v: Vec<Elem>,
    /// Reduced modulo the trivial fields.
    pub normalized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionData {
    pub f_v: RibbonVector,
    /// `r_v[j][c]`: constant multiplying `f_j` in lifted syzygy `c`.
    pub r_v: Vec<Vec<Elem>>,
    pub h_v: Vec<Elem>,
}

/// Quadrics `f_j + t phi_j + t^2 h_j` in the variables `x_0 .. x_{g-1}, t`.
#[derive(Clone, Debug)]
pub struct SurfaceExtension {
    pub equations: Vec<Poly>,
    /// `sum_j h_j (r_v)_jc` per syzygy: the `t^3` coefficient of the
    /// product expansion.
    pub residue: Vec<Elem>,
}

/// Quadrics `f + sum_a t_a f_a + sum_{a,b} t_a t_b B_ab` in the variables
/// `x_0 .. x_{g-1}, t_1 .. t_n`.
#[derive(Clone, Debug)]
pub struct UniversalExtension {
    pub g: usize,
    pub equations: Vec<Poly>,
    /// Symmetric table, `b[a][b][j]`; `b[a][a] = h_{v_a}`.
    pub b: Vec<Vec<Vec<Elem>>>,
}

fn cliff_gate(pres: &CanonicalPresentation) -> Result<()> {
    if pres.cubic_generators() > 0 {
        return Err(Error::CliffGate(format!(
            "{} cubic generators in the canonical ideal",
            pres.cubic_generators()
        )));
    }
    match pres.quartic_status() {
        QuarticSyzygies::Unknown | QuarticSyzygies::Pending => {
            return Err(Error::CliffGate("quartic syzygies not determined".into()))
        }
        _ if !pres.syz4ess().is_empty() => {
            return Err(Error::CliffGate(format!(
                "{} essential quartic syzygies",
                pres.syz4ess().len()
            )))
        }
        _ => {}
    }
    Ok(())
}

/// A complement of the trivial fields inside `N(-1)`, one vector per
/// direction of the Wahl cokernel. Each vector is reduced against the
/// reduced echelon form of the trivial fields.
pub fn ribbon_basis(pres: &CanonicalPresentation, seed: u64) -> Result<Vec<RibbonVector>> {
    cliff_gate(pres)?;
    let space = normal_sections(pres, 1, seed)?;
    let trivial = trivial_normal_fields(pres)?;
    let n = pres.m() * pres.g();
    let mut triv = Echelon::new(pres.field(), n);
    triv.push_rows(trivial);
    triv.make_reduced();
    let mut span = triv.clone();
    let mut out = Vec::new();
    for v in space.basis {
        let mut w = v;
        triv.reduce(&mut w);
        if span.push(w.clone()) {
            out.push(RibbonVector {
                f_v: w,
                normalized: true,
            });
        }
    }
    if span.rank() != space.dim {
        return Err(Error::RankFail {
            what: "trivial fields inside N(-1)",
            expected: space.dim,
            found: span.rank(),
        });
    }
    Ok(out)
}

/// A seeded random combination of the basis vectors.
pub fn random_ribbon(pres: &CanonicalPresentation, basis: &[RibbonVector], seed: u64) -> RibbonVector {
    let f = pres.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7269_6262_6f6e);
    let mut v = vec![0; pres.m() * pres.g()];
    for b in basis {
        f.add_mul_assign(&mut v, &b.f_v, f.random_nonzero(&mut rng));
    }
    RibbonVector {
        f_v: v,
        normalized: false,
    }
}

/// `sum_j phi_j r_jc` as a dense quadric.
fn contract_linear(pres: &CanonicalPresentation, f_v: &[Elem], c: usize) -> Vec<Elem> {
    let g = pres.g();
    let mut q = vec![0; pres.s2().len()];
    for j in 0..pres.m() {
        pres.add_linear_product(&f_v[j * g..(j + 1) * g], pres.syz_entry(c, j), &mut q);
    }
    q
}

/// The constants `r_v` with `f_v r + f r_v = 0`.
pub fn lift_relations(pres: &CanonicalPresentation, f_v: &[Elem]) -> Result<Vec<Vec<Elem>>> {
    let f = pres.field();
    let m = pres.m();
    if f_v.len() != m * pres.g() {
        return Err(Error::BadInput(format!(
            "f_v has length {}, expected {}",
            f_v.len(),
            m * pres.g()
        )));
    }
    let mut r_v = vec![vec![0; pres.m1()]; m];
    for c in 0..pres.m1() {
        // the quadrics are independent, so the coordinates are unique
        let (a, w) = pres.reduce_quadric(&contract_linear(pres, f_v, c));
        if w.iter().any(|&x| x != 0) {
            return Err(Error::Infeasible(format!("f_v r_{c} is not in the ideal")));
        }
        for (row, &aj) in r_v.iter_mut().zip(&a) {
            row[c] = f.neg(aj);
        }
    }
    Ok(r_v)
}

/// Solver for `h r = rhs` where `h` is a tuple of constants and both sides
/// are tuples of linear forms indexed by `(c, l)`.
#[derive(Clone, Debug)]
pub struct SecondOrderSolver {
    pivot_rows: Vec<usize>,
    square: MatrixF,
}

impl SecondOrderSolver {
    pub fn new(pres: &CanonicalPresentation) -> Result<Self> {
        let f = pres.field();
        let m = pres.m();
        let mut ech = Echelon::new(f, m);
        let mut pivot_rows = Vec::with_capacity(m);
        let mut rows = Vec::with_capacity(m);
        'outer: for c in 0..pres.m1() {
            for l in 0..pres.g() {
                let row = Self::row(pres, c, l);
                if ech.push(row.clone()) {
                    pivot_rows.push(c * pres.g() + l);
                    rows.push(row);
                    if ech.rank() == m {
                        break 'outer;
                    }
                }
            }
        }
        if ech.rank() < m {
            return Err(Error::NonUnique {
                what: "second-order correction",
                dim: m - ech.rank(),
            });
        }
        Ok(Self {
            pivot_rows,
            square: MatrixF::from_rows(f, m, rows),
        })
    }

    fn row(pres: &CanonicalPresentation, c: usize, l: usize) -> Vec<Elem> {
        (0..pres.m()).map(|j| pres.syz_entry(c, j)[l]).collect()
    }

    /// Unique `h` with `sum_j h_j r_jc = rhs[c]` for every `c`; `rhs` is
    /// laid out as `c g + l`.
    pub fn solve(&self, pres: &CanonicalPresentation, rhs: &[Elem]) -> Result<Vec<Elem>> {
        let f = pres.field();
        let g = pres.g();
        let sub: Vec<Elem> = self.pivot_rows.iter().map(|&i| rhs[i]).collect();
        let h = self.square.solve_affine(&sub)?.particular;
        for c in 0..pres.m1() {
            for l in 0..g {
                let lhs = (0..pres.m()).fold(0, |acc, j| f.add(acc, f.mul(h[j], pres.syz_entry(c, j)[l])));
                if lhs != rhs[c * g + l] {
                    return Err(Error::Infeasible(format!(
                        "second-order system inconsistent at syzygy {c}"
                    )));
                }
            }
        }
        Ok(h)
    }
}

/// `sum_j phi_j (r_v)_jc` laid out as `c g + l`.
fn pair_term(pres: &CanonicalPresentation, f_v: &[Elem], r_v: &[Vec<Elem>]) -> Vec<Elem> {
    let f = pres.field();
    let g = pres.g();
    let mut out = vec![0; pres.m1() * g];
    for (j, row) in r_v.iter().enumerate() {
        let phi = &f_v[j * g..(j + 1) * g];
        for (c, &r) in row.iter().enumerate() {
            if r != 0 {
                f.add_mul_assign(&mut out[c * g..(c + 1) * g], phi, r);
            }
        }
    }
    out
}

/// The constants `h_v` with `f_v r_v + h_v r = 0`.
pub fn second_order(pres: &CanonicalPresentation, f_v: &[Elem], r_v: &[Vec<Elem>]) -> Result<Vec<Elem>> {
    second_order_with(&SecondOrderSolver::new(pres)?, pres, f_v, r_v)
}

fn second_order_with(
    solver: &SecondOrderSolver,
    pres: &CanonicalPresentation,
    f_v: &[Elem],
    r_v: &[Vec<Elem>],
) -> Result<Vec<Elem>> {
    let f = pres.field();
    let rhs: Vec<Elem> = pair_term(pres, f_v, r_v).into_iter().map(|x| f.neg(x)).collect();
    solver.solve(pres, &rhs)
}

impl ExtensionData {
    pub fn compute(pres: &CanonicalPresentation, f_v: &RibbonVector) -> Result<Self> {
        Self::compute_with(&SecondOrderSolver::new(pres)?, pres, f_v)
    }

    pub fn compute_with(solver: &SecondOrderSolver, pres: &CanonicalPresentation, f_v: &RibbonVector) -> Result<Self> {
        let r_v = lift_relations(pres, &f_v.f_v)?;
        let h_v = second_order_with(solver, pres, &f_v.f_v, &r_v)?;
        let data = Self {
            f_v: f_v.clone(),
            r_v,
            h_v,
        };
        data.verify(pres)?;
        Ok(data)
    }

    /// Checks `f_v r + f r_v = 0` and `f_v r_v + h_v r = 0` coefficient by
    /// coefficient.
    pub fn verify(&self, pres: &CanonicalPresentation) -> Result<()> {
        let f = pres.field();
        let g = pres.g();
        for c in 0..pres.m1() {
            let mut q = contract_linear(pres, &self.f_v.f_v, c);
            for (fj, row) in pres.quadrics().iter().zip(&self.r_v) {
                f.add_mul_assign(&mut q, fj, row[c]);
            }
            if q.iter().any(|&x| x != 0) {
                return Err(Error::CertificateFail(format!("f_v r + f r_v != 0 at syzygy {c}")));
            }
        }
        let mut lin = pair_term(pres, &self.f_v.f_v, &self.r_v);
        for c in 0..pres.m1() {
            for (j, &h) in self.h_v.iter().enumerate() {
                f.add_mul_assign(&mut lin[c * g..(c + 1) * g], pres.syz_entry(c, j), h);
            }
        }
        if lin.iter().any(|&x| x != 0) {
            return Err(Error::CertificateFail("f_v r_v + h_v r != 0".into()));
        }
        Ok(())
    }
}

/// Exponent of a quadric monomial in `g + extra` variables.
fn quadric_exponent(pres: &CanonicalPresentation, k: usize, extra: usize) -> Vec<u16> {
    let mut e = pres.s2().exponent(k).to_vec();
    e.resize(pres.g() + extra, 0);
    e
}

fn base_equations(pres: &CanonicalPresentation, extra: usize) -> Vec<Poly> {
    let f = pres.field();
    pres.quadrics()
        .iter()
        .map(|q| {
            Poly::from_terms(
                f,
                pres.g() + extra,
                q.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(k, &c)| (quadric_exponent(pres, k, extra), c)),
            )
        })
        .collect()
}

fn add_linear_times_var(p: &mut Poly, lin: &[Elem], var: usize, nvars: usize) {
    for (i, &c) in lin.iter().enumerate() {
        if c != 0 {
            let mut e = vec![0; nvars];
            e[i] += 1;
            e[var] += 1;
            p.add_term(e, c);
        }
    }
}

/// Builds `f + t f_v + t^2 h_v` and re-verifies the expansion
/// `(f + t f_v + t^2 h_v)(r + t r_v) = t^3 h_v r_v` degree by degree.
pub fn surface_equations(pres: &CanonicalPresentation, data: &ExtensionData) -> Result<SurfaceExtension> {
    let f = pres.field();
    let g = pres.g();
    let m = pres.m();
    data.verify(pres)?;
    // t^0: f r = 0
    let s3 = crate::exactcore::MonomialBasis::new(g, 3);
    let t21 = pres.s2().product_table(pres.s1(), &s3);
    for c in 0..pres.m1() {
        let mut acc = vec![0; s3.len()];
        for j in 0..m {
            crate::exactcore::monomials::accumulate_product(
                f,
                &pres.quadrics()[j],
                pres.syz_entry(c, j),
                &t21,
                &mut acc,
            );
        }
        if acc.iter().any(|&x| x != 0) {
            return Err(Error::CertificateFail(format!("f r != 0 at syzygy {c}")));
        }
    }
    let residue: Vec<Elem> = (0..pres.m1())
        .map(|c| (0..m).fold(0, |acc, j| f.add(acc, f.mul(data.h_v[j], data.r_v[j][c]))))
        .collect();

    let mut equations = base_equations(pres, 1);
    for (j, p) in equations.iter_mut().enumerate() {
        add_linear_times_var(p, &data.f_v.f_v[j * g..(j + 1) * g], g, g + 1);
        let mut e = vec![0; g + 1];
        e[g] = 2;
        p.add_term(e, data.h_v[j]);
    }
    Ok(SurfaceExtension { equations, residue })
}

/// Extension data and equations for a ribbon in one call.
pub fn extend(pres: &CanonicalPresentation, v: &RibbonVector) -> Result<(ExtensionData, SurfaceExtension)> {
    let data = ExtensionData::compute(pres, v)?;
    let surf = surface_equations(pres, &data)?;
    Ok((data, surf))
}

/// Assembles `f + sum_a t_a f_a + sum_{a,b} t_a t_b B_ab` from a ribbon
/// basis. `B_ab` is the polarization of `v -> h_v`, solved from the
/// symmetrized right-hand side `-(f_a r_b + f_b r_a) / 2`.
pub fn universal_equations(pres: &CanonicalPresentation, basis: &[RibbonVector]) -> Result<UniversalExtension> {
    let f = pres.field();
    let g = pres.g();
    let n = basis.len();
    let nvars = g + n;
    let solver = SecondOrderSolver::new(pres)?;
    let lifts: Vec<Vec<Vec<Elem>>> = basis
        .iter()
        .map(|v| lift_relations(pres, &v.f_v))
        .collect::<Result<_>>()?;
    let half = f.inv(2);
    let mut b = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        for c in a..n {
            let mut rhs = pair_term(pres, &basis[a].f_v, &lifts[c]);
            let other = pair_term(pres, &basis[c].f_v, &lifts[a]);
            let s = f.neg(half);
            f.scale_assign(&mut rhs, s);
            f.add_mul_assign(&mut rhs, &other, s);
            let h = solver.solve(pres, &rhs)?;
            b[c][a] = h.clone();
            b[a][c] = h;
        }
    }
    let mut equations = base_equations(pres, n);
    for (j, p) in equations.iter_mut().enumerate() {
        for (a, v) in basis.iter().enumerate() {
            add_linear_times_var(p, &v.f_v[j * g..(j + 1) * g], g + a, nvars);
        }
        for a in 0..n {
            for c in a..n {
                let mut e = vec![0; nvars];
                e[g + a] += 1;
                e[g + c] += 1;
                let coeff = if a == c {
                    b[a][a][j]
                } else {
                    f.add(b[a][c][j], b[a][c][j])
                };
                p.add_term(e, coeff);
            }
        }
    }
    Ok(UniversalExtension { g, equations, b })
}

impl UniversalExtension {
    pub fn nvars(&self) -> usize {
        self.equations.first().map_or(self.g + self.b.len(), Poly::nvars)
    }

    /// Substitutes `t_a = u_a t`, giving quadrics in `x_0 .. x_{g-1}, t`.
    pub fn specialize(&self, u: &[Elem]) -> Vec<Poly> {
        let g = self.g;
        self.equations
            .iter()
            .map(|p| {
                let f = p.field();
                let mut out = Poly::zero(f, g + 1);
                for (e, c) in p.terms() {
                    let mut coeff = c;
                    let mut deg = 0;
                    for (a, &k) in e[g..].iter().enumerate() {
                        coeff = f.mul(coeff, f.pow(u[a], k as u64));
                        deg += k;
                    }
                    let mut ex = e[..g].to_vec();
                    ex.push(deg);
                    out.add_term(ex, coeff);
                }
                out
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let names: Vec<String> = (0..self.g)
            .map(|i| format!("x{i}"))
            .chain((1..=self.b.len()).map(|a| format!("t{a}")))
            .collect();
        export(&names, &self.equations)
    }
}

impl SurfaceExtension {
    pub fn to_text(&self) -> String {
        let g = self.equations.first().map_or(0, |p| p.nvars() - 1);
        let names: Vec<String> = (0..g).map(|i| format!("x{i}")).chain(["t".to_string()]).collect();
        export(&names, &self.equations)
    }

    /// The part of the equations of degree `k` in `t`.
    pub fn t_part(&self, k: u16) -> Vec<Poly> {
        self.equations
            .iter()
            .map(|p| {
                let n = p.nvars();
                Poly::from_terms(
                    p.field(),
                    n,
                    p.terms().filter(|(e, _)| e[n - 1] == k).map(|(e, c)| (e.clone(), c)),
                )
            })
            .collect()
    }
}

fn export(names: &[String], eqs: &[Poly]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "vars {}", names.join(" "));
    let _ = writeln!(s, "m {}", eqs.len());
    for (j, p) in eqs.iter().enumerate() {
        let terms: Vec<String> = p
            .terms()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(v, &k)| {
                        if k == 1 {
                            names[v].clone()
                        } else {
                            format!("{}^{k}", names[v])
                        }
                    })
                    .collect();
                format!("{c}*{}", mono.join("*"))
            })
            .collect();
        let _ = writeln!(s, "eq {j} {}", terms.join(" + "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvemodel::{Gonality, PlaneCurve};
    use crate::exactcore::PrimeField;

    fn combine(f: PrimeField, len: usize, terms: &[(Elem, &[Elem])]) -> Vec<Elem> {
        let mut v = vec![0; len];
        for &(c, x) in terms {
            f.add_mul_assign(&mut v, x, c);
        }
        v
    }

    fn small_presentation() -> CanonicalPresentation {
        // a septic with three nodes: g = 12, no quadratic syzygies
        let field = PrimeField::random(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = PlaneCurve::random_with_singularities("septic", field, 7, &[2, 2, 2], Gonality::Plane(7), &mut rng)
            .unwrap();
        CanonicalPresentation::compute(&c, 1).unwrap()
    }

    #[test]
    fn zero_ribbon_gives_cone() {
        let pres = small_presentation();
        let zero = RibbonVector {
            f_v: vec![0; pres.m() * pres.g()],
            normalized: true,
        };
        let r_v = lift_relations(&pres, &zero.f_v).unwrap();
        assert!(r_v.iter().flatten().all(|&x| x == 0));
        let (data, surf) = extend(&pres, &zero).unwrap();
        assert!(data.h_v.iter().all(|&x| x == 0));
        for (p, q) in surf.equations.iter().zip(base_equations(&pres, 1)) {
            assert_eq!(*p, q);
        }
    }

    #[test]
    fn trivial_field_lifts_to_derivative_of_syzygies() {
        let pres = small_presentation();
        let fields = trivial_normal_fields(&pres).unwrap();
        for (i, v) in fields.iter().enumerate().take(3) {
            let r_v = lift_relations(&pres, v).unwrap();
            for c in 0..pres.m1() {
                for j in 0..pres.m() {
                    assert_eq!(r_v[j][c], pres.syz_entry(c, j)[i], "x_{i} c={c} j={j}");
                }
            }
        }
    }

    #[test]
    fn lift_is_linear() {
        let pres = small_presentation();
        let f = pres.field();
        let fields = trivial_normal_fields(&pres).unwrap();
        let (a, b) = (f.from_u64(7), f.from_u64(11));
        let n = pres.m() * pres.g();
        let mix = combine(f, n, &[(a, &fields[0]), (b, &fields[1])]);
        let lhs = lift_relations(&pres, &mix).unwrap();
        let r0 = lift_relations(&pres, &fields[0]).unwrap();
        let r1 = lift_relations(&pres, &fields[1]).unwrap();
        for j in 0..pres.m() {
            for c in 0..pres.m1() {
                assert_eq!(lhs[j][c], f.add(f.mul(a, r0[j][c]), f.mul(b, r1[j][c])));
            }
        }
    }

    #[test]
    fn ribbon_extension_certificates() {
        let pres = small_presentation();
        let basis = ribbon_basis(&pres, 2).unwrap();
        assert!(!basis.is_empty());
        let v = random_ribbon(&pres, &basis, 9);
        let (data, surf) = extend(&pres, &v).unwrap();
        assert_eq!(surf.t_part(1).len(), pres.m());
        let f = pres.field();
        let lam = f.from_u64(1234567);
        let scaled = RibbonVector {
            f_v: v.f_v.iter().map(|&x| f.mul(lam, x)).collect(),
            normalized: false,
        };
        let (sdata, _) = extend(&pres, &scaled).unwrap();
        let l2 = f.mul(lam, lam);
        assert!(sdata.h_v.iter().zip(&data.h_v).all(|(&a, &b)| a == f.mul(l2, b)));
    }

    #[test]
    fn universal_specializes_to_surfaces() {
        let pres = small_presentation();
        let basis = ribbon_basis(&pres, 2).unwrap();
        let uni = universal_equations(&pres, &basis).unwrap();
        assert_eq!(uni.nvars(), pres.g() + basis.len());
        let mut u = vec![0; basis.len()];
        u[0] = 1;
        let (_, surf) = extend(&pres, &basis[0]).unwrap();
        assert_eq!(uni.specialize(&u), surf.equations);
        if basis.len() > 1 {
            u[1] = 1;
            let f = pres.field();
            let sum = RibbonVector {
                f_v: combine(f, pres.m() * pres.g(), &[(1, &basis[0].f_v), (1, &basis[1].f_v)]),
                normalized: false,
            };
            let (_, surf) = extend(&pres, &sum).unwrap();
            assert_eq!(uni.specialize(&u), surf.equations);
        }
    }

    #[test]
    fn infeasible_on_non_normal_tuple() {
        let pres = small_presentation();
        let mut v = vec![0; pres.m() * pres.g()];
        v[0] = 1;
        assert!(matches!(lift_relations(&pres, &v), Err(Error::Infeasible(_))));
    }
}
