use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactcore::monomials::binomial;
use crate::exactcore::{Elem, MatrixF, MonomialBasis, Poly, PrimeField, UniPoly};

/// Declared gonality class of a curve. Never computed, only recorded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gonality {
    Hyperelliptic,
    Trigonal,
    Tetragonal,
    /// General member of the plane curves of the given degree with the
    /// listed singularities; gonality comes from projection from a point of
    /// maximal multiplicity.
    Plane(usize),
    Unknown,
}

impl fmt::Display for Gonality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gonality::Hyperelliptic => write!(f, "hyperelliptic"),
            Gonality::Trigonal => write!(f, "trigonal"),
            Gonality::Tetragonal => write!(f, "tetragonal"),
            Gonality::Plane(d) => write!(f, "plane({d})"),
            Gonality::Unknown => write!(f, "unknown"),
        }
    }
}

impl FromStr for Gonality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "hyperelliptic" => Gonality::Hyperelliptic,
            "trigonal" => Gonality::Trigonal,
            "tetragonal" => Gonality::Tetragonal,
            "unknown" => Gonality::Unknown,
            _ => {
                let d = s
                    .strip_prefix("plane(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|d| d.trim().parse().ok())
                    .ok_or_else(|| Error::BadInput(format!("unknown gonality label `{s}`")))?;
                Gonality::Plane(d)
            }
        })
    }
}

/// An ordinary singular point in the affine chart `z = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub x: Elem,
    pub y: Elem,
    pub m: usize,
}

/// A plane curve `F(x, y, z) = 0` with ordinary singularities, all lying in
/// the chart `z = 1`.
#[derive(Clone, Debug)]
pub struct PlaneCurve {
    name: String,
    field: PrimeField,
    degree: usize,
    f: Poly,
    sing: Vec<SingularPoint>,
    gonality: Gonality,
    fx: Poly,
    fy: Poly,
    fxy: Poly,
    fyy: Poly,
    /// `F(x, y, 1) = sum_t y_coeffs[t](x) * y^t`
    y_coeffs: Vec<UniPoly>,
}

impl PlaneCurve {
    /// Validates `f` and the singular points and caches derivatives.
    pub fn new(name: impl Into<String>, f: Poly, sing: Vec<SingularPoint>, gonality: Gonality) -> Result<Self> {
        let name = name.into();
        if f.nvars() != 3 {
            return Err(Error::InvalidCurve(format!(
                "{name}: expected 3 variables, got {}",
                f.nvars()
            )));
        }
        let degree = match f.degree() {
            Some(d) if d >= 1 && f.is_homogeneous() => d,
            _ => {
                return Err(Error::InvalidCurve(format!(
                    "{name}: F must be a nonzero homogeneous form"
                )))
            }
        };
        let field = f.field();
        if (degree as u64) >= field.modulus() {
            return Err(Error::InvalidCurve(format!(
                "{name}: degree {degree} not below the characteristic"
            )));
        }
        for (i, a) in sing.iter().enumerate() {
            if a.m < 2 {
                return Err(Error::InvalidCurve(format!(
                    "{name}: singular multiplicity {} < 2",
                    a.m
                )));
            }
            if sing[..i].iter().any(|b| b.x == a.x && b.y == a.y) {
                return Err(Error::InvalidCurve(format!(
                    "{name}: repeated singular point ({}, {})",
                    a.x, a.y
                )));
            }
        }
        let mut y_coeffs = vec![Vec::new(); degree + 1];
        for (e, c) in f.terms() {
            let (i, j) = (e[0] as usize, e[1] as usize);
            let v = &mut y_coeffs[j];
            if v.len() <= i {
                v.resize(i + 1, 0);
            }
            v[i] = c;
        }
        let y_coeffs = y_coeffs.into_iter().map(|c| UniPoly::new(field, c)).collect();
        let fx = f.partial(0);
        let fy = f.partial(1);
        let curve = Self {
            fxy: fy.partial(0),
            fyy: fy.partial(1),
            fx,
            fy,
            name,
            field,
            degree,
            f,
            sing,
            gonality,
            y_coeffs,
        };
        curve.validate()?;
        Ok(curve)
    }

    fn validate(&self) -> Result<()> {
        let basis = MonomialBasis::new(3, self.degree);
        let coords = basis.coords(&self.f);
        for s in &self.sing {
            let jet = taylor_coefficients(self.field, &basis, &coords, s.x, s.y, s.m + 1);
            let order = jet.iter().position(|level| level.iter().any(|&c| c != 0));
            if order != Some(s.m) {
                return Err(Error::InvalidCurve(format!(
                    "{}: F has order {:?} at ({}, {}), declared {}",
                    self.name, order, s.x, s.y, s.m
                )));
            }
            if !binary_form_squarefree(self.field, &jet[s.m]) {
                return Err(Error::InvalidCurve(format!(
                    "{}: singularity at ({}, {}) is not ordinary",
                    self.name, s.x, s.y
                )));
            }
        }
        if !self.is_reduced() {
            return Err(Error::InvalidCurve(format!("{}: F is not reduced", self.name)));
        }
        let arith = (self.degree - 1) * self.degree.saturating_sub(2) / 2;
        let delta: usize = self.sing.iter().map(|s| s.m * (s.m - 1) / 2).sum();
        if delta > arith {
            return Err(Error::InvalidCurve(format!(
                "{}: singularities drop the genus below zero",
                self.name
            )));
        }
        Ok(())
    }

    /// A repeated factor makes every line section non-squarefree; a few fixed
    /// lines suffice to see a reduced curve.
    fn is_reduced(&self) -> bool {
        let f = self.field;
        (1..=4u64).any(|k| {
            let base = [f.from_u64(3 * k + 1), f.from_u64(7 * k * k + 2), 1];
            let dir = [1, f.from_u64(5 * k + 11), f.from_u64(k + 13)];
            let u = self.f.restrict_to_line(&base, &dir);
            u.degree() == Some(self.degree) && u.gcd(&u.derivative()).degree() == Some(0)
        })
    }

    /// A random curve of degree `d` with ordinary singular points of the
    /// given multiplicities at random affine positions.
    pub fn random_with_singularities<R: Rng + ?Sized>(
        name: impl Into<String>,
        field: PrimeField,
        d: usize,
        mults: &[usize],
        gonality: Gonality,
        rng: &mut R,
    ) -> Result<Self> {
        let name = name.into();
        let basis = MonomialBasis::new(3, d);
        let mut last = None;
        for _ in 0..20 {
            let sing: Vec<SingularPoint> = mults
                .iter()
                .map(|&m| SingularPoint {
                    x: field.random_elem(rng),
                    y: field.random_elem(rng),
                    m,
                })
                .collect();
            let f = random_form_with_multiplicities(field, &basis, &sing, rng);
            match PlaneCurve::new(name.clone(), f, sing, gonality) {
                Ok(c) => return Ok(c),
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap_or(Error::InvalidCurve(name)))
    }

    /// [`Self::random_with_singularities`] driven by a ChaCha8 stream.
    pub fn seeded(
        name: impl Into<String>,
        field: PrimeField,
        d: usize,
        mults: &[usize],
        gonality: Gonality,
        seed: u64,
    ) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with_singularities(name, field, d, mults, gonality, &mut rng)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn equation(&self) -> &Poly {
        &self.f
    }
    pub fn singular_points(&self) -> &[SingularPoint] {
        &self.sing
    }
    pub fn gonality(&self) -> Gonality {
        self.gonality
    }
    pub fn fx(&self) -> &Poly {
        &self.fx
    }
    pub fn fy(&self) -> &Poly {
        &self.fy
    }
    pub fn fxy(&self) -> &Poly {
        &self.fxy
    }
    pub fn fyy(&self) -> &Poly {
        &self.fyy
    }

    /// `(d-1)(d-2)/2 - sum m_i(m_i-1)/2`.
    pub fn genus(&self) -> usize {
        let d = self.degree;
        let arith = (d - 1) * d.saturating_sub(2) / 2;
        arith - self.sing.iter().map(|s| s.m * (s.m - 1) / 2).sum::<usize>()
    }

    /// Clifford index implied by the declared gonality, if any.
    pub fn declared_cliff(&self) -> Option<usize> {
        match self.gonality {
            Gonality::Hyperelliptic => Some(0),
            Gonality::Trigonal => Some(1),
            Gonality::Tetragonal => Some(2),
            Gonality::Plane(d) => {
                let mmax = self.sing.iter().map(|s| s.m).max().unwrap_or(0).max(2);
                Some(d.saturating_sub(2 + mmax))
            }
            Gonality::Unknown => None,
        }
    }

    /// The univariate polynomial `y -> F(x0, y, 1)`.
    pub fn y_slice(&self, x0: Elem) -> UniPoly {
        UniPoly::new(self.field, self.y_coeffs.iter().map(|c| c.eval(x0)).collect())
    }
}

/// Taylor coefficients of a form (given by coordinates in `basis`) at the
/// affine point `(a, b)`: `out[n][i]` is the coefficient of `u^(n-i) v^i`
/// in `F(a + u, b + v, 1)`, for `n < order`.
pub fn taylor_coefficients(
    field: PrimeField,
    basis: &MonomialBasis,
    coords: &[Elem],
    a: Elem,
    b: Elem,
    order: usize,
) -> Vec<Vec<Elem>> {
    let rows = taylor_rows(field, basis, a, b, order);
    let mut out = Vec::with_capacity(order);
    let mut it = rows.iter();
    for n in 0..order {
        out.push((0..=n).map(|_| field.dot(it.next().unwrap(), coords)).collect());
    }
    out
}

/// Linear functionals on forms of `basis` giving the Taylor coefficients of
/// total order `< order` at `(a, b)` in the chart `z = 1`; ordered by total
/// order, then by the power of `v`.
pub fn taylor_rows(field: PrimeField, basis: &MonomialBasis, a: Elem, b: Elem, order: usize) -> Vec<Vec<Elem>> {
    let d = basis.degree();
    let pa: Vec<Elem> = (0..=d)
        .scan(1, |acc, _| {
            let v = *acc;
            *acc = field.mul(*acc, a);
            Some(v)
        })
        .collect();
    let pb: Vec<Elem> = (0..=d)
        .scan(1, |acc, _| {
            let v = *acc;
            *acc = field.mul(*acc, b);
            Some(v)
        })
        .collect();
    let mut rows = Vec::new();
    for n in 0..order {
        for j in 0..=n {
            let i = n - j;
            let row = basis
                .exponents()
                .iter()
                .map(|e| {
                    let (s, t) = (e[0] as usize, e[1] as usize);
                    if s < i || t < j {
                        return 0;
                    }
                    let c = field.from_u64((binomial(s, i) as u64) * (binomial(t, j) as u64));
                    field.mul(c, field.mul(pa[s - i], pb[t - j]))
                })
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// A binary form `sum_i c[i] u^(n-i) v^i` is squarefree over the algebraic
/// closure.
fn binary_form_squarefree(field: PrimeField, c: &[Elem]) -> bool {
    let n = c.len() - 1;
    // h(t) = form(t, 1); factors of v show up as a degree drop
    let h = UniPoly::new(field, c.iter().rev().copied().collect());
    let Some(dh) = h.degree() else { return false };
    if dh + 1 < n {
        return false;
    }
    dh == 0 || h.gcd(&h.derivative()).degree() == Some(0)
}

fn random_form_with_multiplicities<R: Rng + ?Sized>(
    field: PrimeField,
    basis: &MonomialBasis,
    sing: &[SingularPoint],
    rng: &mut R,
) -> Poly {
    let mut rows = Vec::new();
    for s in sing {
        rows.extend(taylor_rows(field, basis, s.x, s.y, s.m));
    }
    let kernel = if rows.is_empty() {
        (0..basis.len())
            .map(|i| {
                let mut v = vec![0; basis.len()];
                v[i] = 1;
                v
            })
            .collect()
    } else {
        MatrixF::from_rows(field, basis.len(), rows).kernel()
    };
    let mut coords = vec![0; basis.len()];
    for v in &kernel {
        field.add_mul_assign(&mut coords, v, field.random_elem(rng));
    }
    basis.to_poly(field, &coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quintic_with_triple_point(field: PrimeField) -> PlaneCurve {
        // y^3 z^2 - x^3 z^2 + x^5 + y^5 + x^2 y^3
        let t = |e: [u16; 3], c: i64| (e.to_vec(), field.from_i64(c));
        let f = Poly::from_terms(
            field,
            3,
            [
                t([0, 3, 2], 1),
                t([3, 0, 2], -1),
                t([5, 0, 0], 1),
                t([0, 5, 0], 1),
                t([2, 3, 0], 1),
            ],
        );
        PlaneCurve::new(
            "q5",
            f,
            vec![SingularPoint { x: 0, y: 0, m: 3 }],
            Gonality::Hyperelliptic,
        )
        .unwrap()
    }

    #[test]
    fn genus_examples() {
        let f = PrimeField::random(1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let q4 = PlaneCurve::random_with_singularities("q4", f, 4, &[], Gonality::Plane(4), &mut rng).unwrap();
        assert_eq!(q4.genus(), 3);
        assert_eq!(quintic_with_triple_point(f).genus(), 3);
        let s7 = PlaneCurve::random_with_singularities("s7", f, 7, &[], Gonality::Plane(7), &mut rng).unwrap();
        assert_eq!(s7.genus(), 15);
        assert_eq!(s7.declared_cliff(), Some(3));
    }

    #[test]
    fn rejects_wrong_multiplicity_and_non_ordinary() {
        let f = PrimeField::random(2);
        let c = quintic_with_triple_point(f);
        let bad = PlaneCurve::new(
            "bad",
            c.equation().clone(),
            vec![SingularPoint { x: 0, y: 0, m: 2 }],
            Gonality::Unknown,
        );
        assert!(matches!(bad, Err(Error::InvalidCurve(_))));
        // cusp y^2 z - x^3: tangent cone y^2 is a double line
        let cusp = Poly::from_terms(f, 3, [(vec![0, 2, 1], 1), (vec![3, 0, 0], f.neg(1))]);
        let r = PlaneCurve::new(
            "cusp",
            cusp,
            vec![SingularPoint { x: 0, y: 0, m: 2 }],
            Gonality::Unknown,
        );
        assert!(matches!(r, Err(Error::InvalidCurve(_))));
    }

    #[test]
    fn rejects_non_reduced() {
        let f = PrimeField::random(3);
        let x = Poly::var(f, 3, 0);
        let y = Poly::var(f, 3, 1);
        let z = Poly::var(f, 3, 2);
        let line = x.add(&y.scale(2)).add(&z);
        let sq = line.mul(&line).mul(&x.sub(&z));
        assert!(PlaneCurve::new("sq", sq, vec![], Gonality::Unknown).is_err());
    }

    #[test]
    fn random_curves_have_requested_singularities() {
        let f = PrimeField::random(4);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = PlaneCurve::random_with_singularities("n", f, 6, &[2, 2, 3], Gonality::Unknown, &mut rng).unwrap();
        assert_eq!(c.genus(), 10 - 1 - 1 - 3);
        assert_eq!(c.singular_points().len(), 3);
    }

    #[test]
    fn gonality_labels_roundtrip() {
        for g in [
            Gonality::Hyperelliptic,
            Gonality::Trigonal,
            Gonality::Tetragonal,
            Gonality::Plane(7),
            Gonality::Unknown,
        ] {
            assert_eq!(g.to_string().parse::<Gonality>().unwrap(), g);
        }
        assert!("pentagonal".parse::<Gonality>().is_err());
    }
}
