use super::curve::{taylor_coefficients, taylor_rows, PlaneCurve};
use super::points::CurvePoint;
use crate::error::{Error, Result};
use crate::exactcore::{Echelon, Elem, MatrixF, MonomialBasis, Poly, PrimeField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionRole {
    Canonical,
    CanonicalPower(usize),
    ExtensionSystem,
}

/// Plane forms representing sections of a line bundle on the curve. A
/// representative `B` of weight `k` gives the section `B / F_y^k * dx^k` in
/// the chart `z = 1`.
#[derive(Clone, Debug)]
pub struct SectionBasis {
    role: SectionRole,
    weight: usize,
    field: PrimeField,
    monomials: MonomialBasis,
    reps: Vec<Vec<Elem>>,
}

/// Values and x-derivatives of every monomial of a basis at `(x, y, 1)`.
struct MonomialJet {
    val: Vec<Elem>,
    dx: Vec<Elem>,
    dy: Vec<Elem>,
}

impl MonomialJet {
    fn new(field: PrimeField, basis: &MonomialBasis, x: Elem, y: Elem) -> Self {
        let d = basis.degree();
        let powers = |v: Elem| {
            let mut t = vec![1; d + 1];
            for k in 1..=d {
                t[k] = field.mul(t[k - 1], v);
            }
            t
        };
        let (px, py) = (powers(x), powers(y));
        let n = basis.len();
        let mut jet = Self {
            val: Vec::with_capacity(n),
            dx: Vec::with_capacity(n),
            dy: Vec::with_capacity(n),
        };
        for e in basis.exponents() {
            let (s, t) = (e[0] as usize, e[1] as usize);
            jet.val.push(field.mul(px[s], py[t]));
            jet.dx.push(if s == 0 {
                0
            } else {
                field.mul(field.from_u64(s as u64), field.mul(px[s - 1], py[t]))
            });
            jet.dy.push(if t == 0 {
                0
            } else {
                field.mul(field.from_u64(t as u64), field.mul(px[s], py[t - 1]))
            });
        }
        jet
    }
}

impl SectionBasis {
    pub fn new(
        role: SectionRole,
        weight: usize,
        field: PrimeField,
        monomials: MonomialBasis,
        reps: Vec<Vec<Elem>>,
    ) -> Self {
        debug_assert!(reps.iter().all(|r| r.len() == monomials.len()));
        Self {
            role,
            weight,
            field,
            monomials,
            reps,
        }
    }

    pub fn role(&self) -> SectionRole {
        self.role
    }
    pub fn weight(&self) -> usize {
        self.weight
    }
    pub fn len(&self) -> usize {
        self.reps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
    /// Degree of the plane representatives.
    pub fn degree(&self) -> usize {
        self.monomials.degree()
    }
    pub fn monomials(&self) -> &MonomialBasis {
        &self.monomials
    }
    /// Representatives as coordinate vectors in [`Self::monomials`].
    pub fn coords(&self) -> &[Vec<Elem>] {
        &self.reps
    }
    pub fn polys(&self) -> Vec<Poly> {
        self.reps
            .iter()
            .map(|r| self.monomials.to_poly(self.field, r))
            .collect()
    }

    /// Raw values `B(q)` of the representatives (no `F_y` twist).
    pub fn rep_values(&self, pt: &[Elem]) -> Vec<Elem> {
        let m = self.monomials.eval_all(self.field, pt);
        self.reps.iter().map(|r| self.field.dot(r, &m)).collect()
    }

    /// Section values `B(q) / F_y(q)^k`.
    pub fn values_at(&self, q: &CurvePoint) -> Vec<Elem> {
        let f = self.field;
        let scale = f.pow(f.inv(q.fy), self.weight as u64);
        self.rep_values(&q.coords())
            .into_iter()
            .map(|v| f.mul(v, scale))
            .collect()
    }

    /// `(value, d/dx value)` of every section at `q`.
    pub fn jets_at(&self, q: &CurvePoint) -> Vec<(Elem, Elem)> {
        let f = self.field;
        let jet = MonomialJet::new(f, &self.monomials, q.x, q.y);
        let inv = f.inv(q.fy);
        let k = self.weight as u64;
        let inv_k = f.pow(inv, k);
        let inv_k1 = f.mul(inv_k, inv);
        let kk = f.from_u64(k);
        self.reps
            .iter()
            .map(|r| {
                let b = f.dot(r, &jet.val);
                let db = f.add(f.dot(r, &jet.dx), f.mul(f.dot(r, &jet.dy), q.dy));
                let num = f.sub(f.mul(db, q.fy), f.mul(kk, f.mul(b, q.dfy)));
                (f.mul(b, inv_k), f.mul(num, inv_k1))
            })
            .collect()
    }
}

/// Local coordinates `(value, derivative)` of `A / F_y^k * dx^k` at `q`,
/// with derivative taken along the curve with respect to `x`.
pub fn omega_eval(c: &PlaneCurve, a: &Poly, q: &CurvePoint, k: usize) -> (Elem, Elem) {
    let f = c.field();
    let pt = q.coords();
    let b = a.eval(&pt);
    let db = f.add(a.partial(0).eval(&pt), f.mul(a.partial(1).eval(&pt), q.dy));
    let inv = f.inv(q.fy);
    let inv_k = f.pow(inv, k as u64);
    let num = f.sub(f.mul(db, q.fy), f.mul(f.from_u64(k as u64), f.mul(b, q.dfy)));
    (f.mul(b, inv_k), f.mul(num, f.mul(inv_k, inv)))
}

impl PlaneCurve {
    /// Degree `d-3` adjoints: forms vanishing to order `m-1` at each
    /// singular point. Their dimension must equal the genus.
    pub fn adjoint_basis(&self) -> Result<SectionBasis> {
        if self.degree() < 3 {
            return Err(Error::InvalidCurve(format!(
                "{}: degree below 3 has no canonical series",
                self.name()
            )));
        }
        let f = self.field();
        let basis = MonomialBasis::new(3, self.degree() - 3);
        let mut rows = Vec::new();
        for s in self.singular_points() {
            rows.extend(taylor_rows(f, &basis, s.x, s.y, s.m - 1));
        }
        let reps = kernel_or_all(f, basis.len(), rows);
        if reps.len() != self.genus() {
            return Err(Error::DimensionMismatch {
                what: "adjoint series",
                expected: self.genus(),
                found: reps.len(),
            });
        }
        Ok(SectionBasis::new(SectionRole::Canonical, 1, f, basis, reps))
    }

    /// Representatives of `H^0(omega^k)` as forms of degree `k(d-3)` whose
    /// local germs lie in `m^(k(m_i-1)) + (F)` at each singular point. A
    /// subset independent on the curve is selected by evaluation.
    pub fn omega_power_basis(&self, k: usize, seed: u64) -> Result<SectionBasis> {
        if k == 1 {
            return self.adjoint_basis();
        }
        let g = self.genus();
        if g < 2 || k == 0 {
            return Err(Error::BadInput(format!("omega^{k} basis needs genus >= 2 and k >= 1")));
        }
        let f = self.field();
        let n = k * (self.degree() - 3);
        let basis = MonomialBasis::new(3, n);
        let fb = MonomialBasis::new(3, self.degree());
        let fc = fb.coords(self.equation());
        let mut rows = Vec::new();
        for s in self.singular_points() {
            rows.extend(conductor_power_rows(f, &basis, &fb, &fc, s.x, s.y, s.m, k));
        }
        let candidates = kernel_or_all(f, basis.len(), rows);
        let expected = (2 * k - 1) * (g - 1);
        let pts = self.sample_points(2 * k * (g - 1) + 1, seed)?;
        let tmp = SectionBasis::new(SectionRole::CanonicalPower(k), k, f, basis.clone(), candidates);
        let mut ech = Echelon::new(f, pts.len());
        let mut chosen = Vec::new();
        let table: Vec<Vec<Elem>> = pts.iter().map(|q| tmp.rep_values(&q.coords())).collect();
        for (i, rep) in tmp.reps.iter().enumerate() {
            let row: Vec<Elem> = table.iter().map(|vals| vals[i]).collect();
            if ech.push(row) {
                chosen.push(rep.clone());
            }
        }
        if chosen.len() != expected {
            return Err(Error::DimensionMismatch {
                what: "omega^k series",
                expected,
                found: chosen.len(),
            });
        }
        Ok(SectionBasis::new(SectionRole::CanonicalPower(k), k, f, basis, chosen))
    }
}

fn kernel_or_all(f: PrimeField, n: usize, rows: Vec<Vec<Elem>>) -> Vec<Vec<Elem>> {
    if rows.is_empty() {
        (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect()
    } else {
        MatrixF::from_rows(f, n, rows).kernel()
    }
}

/// Conditions for a germ to lie in `m^N + (F)` with `N = k(m-1)`: the jet of
/// order `< N` must lie in the span of the jets of `F * u^a v^b`.
#[allow(clippy::too_many_arguments)]
fn conductor_power_rows(
    f: PrimeField,
    basis: &MonomialBasis,
    fb: &MonomialBasis,
    fc: &[Elem],
    a: Elem,
    b: Elem,
    m: usize,
    k: usize,
) -> Vec<Vec<Elem>> {
    let big_n = k * (m - 1);
    let rows = taylor_rows(f, basis, a, b, big_n);
    if big_n <= m {
        return rows;
    }
    let idx = |n: usize, j: usize| n * (n + 1) / 2 + j;
    let jet_dim = big_n * (big_n + 1) / 2;
    let fjet = taylor_coefficients(f, fb, fc, a, b, big_n);
    let mut span = Vec::new();
    for s in 0..big_n - m {
        for beta in 0..=s {
            let mut v = vec![0; jet_dim];
            for (n, level) in fjet.iter().enumerate() {
                if n + s >= big_n {
                    break;
                }
                for (j, &c) in level.iter().enumerate() {
                    v[idx(n + s, j + beta)] = c;
                }
            }
            span.push(v);
        }
    }
    let annihilators = MatrixF::from_rows(f, jet_dim, span).kernel();
    annihilators
        .iter()
        .map(|w| {
            let mut row = vec![0; basis.len()];
            for (t, &c) in w.iter().enumerate() {
                if c != 0 {
                    f.add_mul_assign(&mut row, &rows[t], c);
                }
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvemodel::{Gonality, SingularPoint};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn curve(seed: u64, d: usize, mults: &[usize]) -> PlaneCurve {
        let f = PrimeField::random(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PlaneCurve::random_with_singularities("t", f, d, mults, Gonality::Unknown, &mut rng).unwrap()
    }

    #[test]
    fn adjoint_examples() {
        let q4 = curve(1, 4, &[]);
        let b = q4.adjoint_basis().unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b.degree(), 1);

        let s7 = curve(2, 7, &[]);
        assert_eq!(s7.adjoint_basis().unwrap().len(), 15);
    }

    #[test]
    fn quintic_triple_point_at_origin_gives_conics_through_it() {
        let f = PrimeField::random(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut c = None;
        for _ in 0..10 {
            let basis = MonomialBasis::new(3, 5);
            let rows = taylor_rows(f, &basis, 0, 0, 3);
            let k = MatrixF::from_rows(f, basis.len(), rows).kernel();
            let mut coords = vec![0; basis.len()];
            for v in &k {
                f.add_mul_assign(&mut coords, v, f.random_elem(&mut rng));
            }
            let sing = vec![SingularPoint { x: 0, y: 0, m: 3 }];
            if let Ok(cc) = PlaneCurve::new("q", basis.to_poly(f, &coords), sing, Gonality::Hyperelliptic) {
                c = Some(cc);
                break;
            }
        }
        let b = c.unwrap().adjoint_basis().unwrap();
        let mut got: Vec<String> = b.polys().iter().map(|p| p.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["1*x*y", "1*x^2", "1*y^2"]);
    }

    #[test]
    fn jets_match_symbolic_quotient_rule() {
        let c = curve(5, 4, &[]);
        let basis = c.adjoint_basis().unwrap();
        let polys = basis.polys();
        for q in c.sample_points(100, 1).unwrap() {
            let fast = basis.jets_at(&q);
            for (i, a) in polys.iter().enumerate() {
                assert_eq!(fast[i], omega_eval(&c, a, &q, 1));
            }
        }
    }

    #[test]
    fn fy_representative_is_constant() {
        let c = curve(6, 5, &[]);
        for q in c.sample_points(5, 0).unwrap() {
            assert_eq!(omega_eval(&c, c.fy(), &q, 1), (1, 0));
            assert_eq!(omega_eval(&c, &Poly::zero(c.field(), 3), &q, 1), (0, 0));
        }
    }

    #[test]
    fn product_rule_bridge() {
        let c = curve(7, 5, &[2]);
        let basis = c.adjoint_basis().unwrap();
        let polys = basis.polys();
        for q in c.sample_points(10, 3).unwrap() {
            let jets = basis.jets_at(&q);
            let f = c.field();
            for i in 0..polys.len() {
                for j in 0..polys.len() {
                    let (v, d) = omega_eval(&c, &polys[i].mul(&polys[j]), &q, 2);
                    let (vi, di) = jets[i];
                    let (vj, dj) = jets[j];
                    assert_eq!(v, f.mul(vi, vj));
                    assert_eq!(d, f.add(f.mul(vi, dj), f.mul(vj, di)));
                }
            }
        }
    }

    #[test]
    fn omega_squared_dimension_including_hyperelliptic() {
        let c = curve(8, 5, &[3]);
        assert_eq!(c.omega_power_basis(2, 0).unwrap().len(), 6);
        let s = curve(9, 6, &[2]);
        assert_eq!(s.omega_power_basis(2, 0).unwrap().len(), 3 * 8);
    }
}
