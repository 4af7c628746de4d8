use std::fmt::Write as _;

use crate::curvemodel::{CurvePoint, Gonality, PlaneCurve};
use crate::error::{Error, Result};
use crate::exactcore::monomials::{accumulate_product, count_monomials};
use crate::exactcore::{Echelon, Elem, MatrixF, MonomialBasis, PrimeField};

use super::{betti, syzygy};

/// Canonical images of sample points: `table[q][i] = A_i(q) / F_y(q)`.
#[derive(Clone, Debug)]
pub struct CanonicalCoords {
    pub g: usize,
    pub seed: u64,
    pub points: Vec<CurvePoint>,
    pub table: Vec<Vec<Elem>>,
}

pub fn canonical_coords(c: &PlaneCurve, points: usize, seed: u64) -> Result<CanonicalCoords> {
    if c.gonality() == Gonality::Hyperelliptic {
        return Err(Error::HyperellipticInput);
    }
    let g = c.genus();
    if g < 3 {
        return Err(Error::BadInput(format!(
            "{}: canonical embedding needs genus >= 3, got {g}",
            c.name()
        )));
    }
    let basis = c.adjoint_basis()?;
    let pts = c.sample_points(points, seed)?;
    let table: Vec<Vec<Elem>> = pts.iter().map(|q| basis.values_at(q)).collect();
    let mut e = Echelon::new(c.field(), g);
    e.push_rows(table.iter().cloned());
    if e.rank() != g {
        return Err(Error::RankFail {
            what: "canonical coordinate table",
            expected: g,
            found: e.rank(),
        });
    }
    Ok(CanonicalCoords {
        g,
        seed,
        points: pts,
        table,
    })
}

/// How the degree-4 part of the relation module was handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuarticSyzygies {
    /// Not computed yet.
    Pending,
    /// Essential quartic relations computed explicitly.
    Explicit,
    /// `beta_{2,4} = 0` certified on an Artinian reduction, so there are no
    /// essential quartic relations.
    CertifiedEmpty,
    /// Too large for the explicit computation and not certified empty.
    Unknown,
}

/// Quadrics through the canonical curve and their first syzygies.
///
/// Quadrics are dense vectors over the degree-2 monomials of the `g`
/// canonical coordinates, in reduced echelon form: quadric `j` has a one at
/// monomial `leads[j]` and zeros at every other lead. The monomials not used
/// as leads span a complement `W` of `I_2`.
///
/// A linear syzygy is stored as a vector of length `m g`; entry `j g + i`
/// is the coefficient of `x_i` in the relation entry multiplying `f_j`.
/// An essential quartic syzygy is stored as `m` dense quadrics.
#[derive(Clone, Debug)]
pub struct CanonicalPresentation {
    field: PrimeField,
    g: usize,
    coords: CanonicalCoords,
    s1: MonomialBasis,
    s2: MonomialBasis,
    /// `s1 x s1 -> s2`
    t11: Vec<u32>,
    quadrics: Vec<Vec<Elem>>,
    leads: Vec<usize>,
    complement: Vec<usize>,
    /// position of a monomial in `complement`, if it is there
    complement_pos: Vec<Option<usize>>,
    syz3: Vec<Vec<Elem>>,
    syz4ess: Vec<Vec<Vec<Elem>>>,
    cubic_generators: usize,
    quartic: QuarticSyzygies,
}

/// Default number of sample points for the canonical embedding: enough to
/// test membership in `I_3` by evaluation.
pub fn presentation_points(g: usize) -> usize {
    6 * g - 5
}

/// Quadric generators of the canonical ideal.
pub fn quadric_generators(c: &PlaneCurve, seed: u64, points: Option<usize>) -> Result<CanonicalPresentation> {
    let g = c.genus();
    let m_pts = points.unwrap_or_else(|| presentation_points(g.max(3)));
    if m_pts < 4 * g - 3 {
        return Err(Error::BadInput(format!(
            "need at least {} points, got {m_pts}",
            4 * g - 3
        )));
    }
    let coords = canonical_coords(c, m_pts, seed)?;
    CanonicalPresentation::from_coords(c.field(), coords)
}

/// Fills in linear syzygies and essential quartic syzygies.
pub fn first_syzygies(mut pres: CanonicalPresentation, seed: u64) -> Result<CanonicalPresentation> {
    pres.compute_syzygies(seed)?;
    Ok(pres)
}

impl CanonicalPresentation {
    /// Quadrics, linear syzygies and quartic syzygies in one go.
    pub fn compute(c: &PlaneCurve, seed: u64) -> Result<Self> {
        first_syzygies(quadric_generators(c, seed, None)?, seed)
    }

    pub fn from_coords(field: PrimeField, coords: CanonicalCoords) -> Result<Self> {
        let g = coords.g;
        let s1 = MonomialBasis::new(g, 1);
        let s2 = MonomialBasis::new(g, 2);
        let mut ev = Echelon::new(field, s2.len());
        ev.push_rows(coords.table.iter().map(|x| s2.eval_all(field, x)));
        let expected = 3 * (g - 1);
        if ev.rank() != expected {
            return Err(Error::SurjectivityFail {
                expected,
                found: ev.rank(),
            });
        }
        let leads = ev.free_columns();
        let quadrics = ev.kernel();
        let complement = ev.pivots().to_vec();
        let mut complement_pos = vec![None; s2.len()];
        for (k, &w) in complement.iter().enumerate() {
            complement_pos[w] = Some(k);
        }
        let t11 = s1.product_table(&s1, &s2);
        Ok(Self {
            field,
            g,
            coords,
            s1,
            s2,
            t11,
            quadrics,
            leads,
            complement,
            complement_pos,
            syz3: Vec::new(),
            syz4ess: Vec::new(),
            cubic_generators: 0,
            quartic: QuarticSyzygies::Pending,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn g(&self) -> usize {
        self.g
    }
    /// Number of quadric generators.
    pub fn m(&self) -> usize {
        self.quadrics.len()
    }
    /// Number of linear syzygies.
    pub fn m1(&self) -> usize {
        self.syz3.len()
    }
    pub fn coords(&self) -> &CanonicalCoords {
        &self.coords
    }
    pub fn s1(&self) -> &MonomialBasis {
        &self.s1
    }
    pub fn s2(&self) -> &MonomialBasis {
        &self.s2
    }
    pub fn quadrics(&self) -> &[Vec<Elem>] {
        &self.quadrics
    }
    pub fn leads(&self) -> &[usize] {
        &self.leads
    }
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }
    pub fn syz3(&self) -> &[Vec<Elem>] {
        &self.syz3
    }
    pub fn syz4ess(&self) -> &[Vec<Vec<Elem>>] {
        &self.syz4ess
    }
    /// Minimal cubic generators of the ideal (zero when it is generated by
    /// quadrics).
    pub fn cubic_generators(&self) -> usize {
        self.cubic_generators
    }
    pub fn quartic_status(&self) -> QuarticSyzygies {
        self.quartic
    }
    /// Product table `s1 x s1 -> s2`.
    pub fn linear_product_table(&self) -> &[u32] {
        &self.t11
    }

    /// Linear form multiplying `f_j` in linear syzygy `c`.
    pub fn syz_entry(&self, c: usize, j: usize) -> &[Elem] {
        &self.syz3[c][j * self.g..(j + 1) * self.g]
    }

    /// Writes `q = w + sum_i a_i f_i` with `w` supported on the complement;
    /// returns `(a, w)` with `w` indexed like [`Self::complement`].
    pub fn reduce_quadric(&self, q: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
        let a: Vec<Elem> = self.leads.iter().map(|&l| q[l]).collect();
        let mut w: Vec<Elem> = self.complement.iter().map(|&c| q[c]).collect();
        for (fi, &ai) in self.quadrics.iter().zip(&a) {
            if ai != 0 {
                for (k, &c) in self.complement.iter().enumerate() {
                    w[k] = self.field.sub(w[k], self.field.mul(ai, fi[c]));
                }
            }
        }
        (a, w)
    }

    pub fn in_ideal_deg2(&self, q: &[Elem]) -> bool {
        self.reduce_quadric(q).1.iter().all(|&x| x == 0)
    }

    /// Dense quadric from a complement vector.
    pub fn complement_to_quadric(&self, w: &[Elem]) -> Vec<Elem> {
        let mut q = vec![0; self.s2.len()];
        for (k, &c) in self.complement.iter().enumerate() {
            q[c] = w[k];
        }
        q
    }

    pub fn complement_index(&self, monomial: usize) -> Option<usize> {
        self.complement_pos[monomial]
    }

    /// `out += a * b` for linear forms `a`, `b`.
    pub fn add_linear_product(&self, a: &[Elem], b: &[Elem], out: &mut [Elem]) {
        accumulate_product(self.field, a, b, &self.t11, out);
    }

    fn compute_syzygies(&mut self, seed: u64) -> Result<()> {
        let f = self.field;
        let g = self.g;
        let m = self.m();
        let s3 = MonomialBasis::new(g, 3);
        let t21 = self.s2.product_table(&self.s1, &s3);
        let n = m * g;
        if m > 0 {
            // columns: x_i f_j at position j g + i
            let mut data = vec![0; s3.len() * n];
            for (j, fj) in self.quadrics.iter().enumerate() {
                for (a, &c) in fj.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for i in 0..g {
                        let row = t21[a * g + i] as usize;
                        data[row * n + j * g + i] = c;
                    }
                }
            }
            let mat = MatrixF::new(f, s3.len(), n, data);
            let ech = mat.echelon();
            drop(mat);
            let rank = ech.rank();
            let dim_i3 = count_monomials(g, 3) - 5 * (g - 1);
            if rank > dim_i3 {
                return Err(Error::CertificateFail(format!(
                    "S_1 I_2 has dimension {rank} > dim I_3 = {dim_i3}"
                )));
            }
            self.cubic_generators = dim_i3 - rank;
            self.syz3 = ech.kernel();
            for c in 0..self.syz3.len() {
                self.check_linear_syzygy(c, &s3, &t21)?;
            }
        } else {
            self.cubic_generators = count_monomials(g, 3) - 5 * (g - 1);
        }

        self.quartic = QuarticSyzygies::Unknown;
        self.syz4ess.clear();
        if m < 2 {
            // a single quadric has only multiples of the trivial relation
            self.quartic = QuarticSyzygies::Explicit;
            return Ok(());
        }
        if self.cubic_generators == 0 && betti::certify_no_quadratic_syzygies(self, seed)? {
            self.quartic = QuarticSyzygies::CertifiedEmpty;
            return Ok(());
        }
        if syzygy::explicit_feasible(self) {
            self.syz4ess = syzygy::essential_quartic_syzygies(self)?;
            self.quartic = QuarticSyzygies::Explicit;
        }
        Ok(())
    }

    fn check_linear_syzygy(&self, c: usize, s3: &MonomialBasis, t21: &[u32]) -> Result<()> {
        let mut acc = vec![0; s3.len()];
        for j in 0..self.m() {
            accumulate_product(self.field, &self.quadrics[j], self.syz_entry(c, j), t21, &mut acc);
        }
        if acc.iter().any(|&x| x != 0) {
            return Err(Error::CertificateFail(format!("linear syzygy {c} is not a relation")));
        }
        Ok(())
    }

    /// Text export: dimensions, then sparse quadric rows and syzygy entries.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mono = |i: usize| {
            self.s2
                .exponent(i)
                .iter()
                .enumerate()
                .flat_map(|(v, &e)| std::iter::repeat_n(v, e as usize))
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(".")
        };
        let _ = writeln!(s, "g {}", self.g);
        let _ = writeln!(s, "m {}", self.m());
        let _ = writeln!(s, "m1 {}", self.m1());
        let _ = writeln!(s, "syz4ess {}", self.syz4ess.len());
        for (j, q) in self.quadrics.iter().enumerate() {
            let terms: Vec<String> = q
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| format!("{}:x{}", c, mono(i)))
                .collect();
            let _ = writeln!(s, "quadric {j} {}", terms.join(" "));
        }
        for c in 0..self.m1() {
            for j in 0..self.m() {
                let e = self.syz_entry(c, j);
                if e.iter().all(|&x| x == 0) {
                    continue;
                }
                let terms: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| format!("{x}:x{i}"))
                    .collect();
                let _ = writeln!(s, "syz3 {c} {j} {}", terms.join(" "));
            }
        }
        for (c, col) in self.syz4ess.iter().enumerate() {
            for (j, q) in col.iter().enumerate() {
                let terms: Vec<String> = q
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| format!("{}:x{}", x, mono(i)))
                    .collect();
                if !terms.is_empty() {
                    let _ = writeln!(s, "syz4 {c} {j} {}", terms.join(" "));
                }
            }
        }
        s
    }
}
