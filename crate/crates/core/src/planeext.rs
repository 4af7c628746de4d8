//! Surfaces extending a plane model: the system of degree-`d` forms through
//! the scheme cut on the curve by a cubic `T` (with multiplicity `m_i` at
//! the singular points), its map to `P^g`, and the contraction of `T`.
//!
//! The simple intersection points of `T` and the curve need not be rational
//! over `F_p`. Passing through them is imposed as ideal membership: with
//! `D` a product of lines `L_i^{m_i}` through the singular points,
//! `G D in (F, T)` says exactly that `G` vanishes on the simple base points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvemodel::PlaneCurve;
use crate::error::{Error, Result};
use crate::exactcore::{Echelon, Elem, MatrixF, MonomialBasis, Poly, PrimeField, UniPoly};

#[derive(Clone, Debug)]
pub struct PlaneExtensionSystem {
    pub curve: PlaneCurve,
    pub cubic: Poly,
    /// Number of simple base points, `3d - sum m_i`.
    pub simple_basepoints: usize,
    monomials: MonomialBasis,
    /// Coordinates in `monomials`; the first element is `F`.
    basis: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImagePoint {
    pub source: [Elem; 3],
    pub image: Vec<Elem>,
    pub on_curve: bool,
    pub on_cubic: bool,
}

#[derive(Clone, Debug)]
pub struct SurfaceImageSample {
    pub points: Vec<ImagePoint>,
    /// Rank of the images of cubic points (1 when contracted).
    pub cubic_rank: usize,
    /// Rank of the images of curve points inside the hyperplane.
    pub curve_span: usize,
    /// Rank of `[images / (T F_y) | canonical coordinates]` on curve points.
    pub joint_rank: usize,
    /// Rank of the images of general plane points.
    pub general_rank: usize,
}

fn affine(x: Elem, y: Elem) -> [Elem; 3] {
    [x, y, 1]
}

/// Cubic forms vanishing at the given affine points; the dimension must be
/// `10 - a`.
pub fn cubics_through(field: PrimeField, points: &[[Elem; 2]]) -> Result<Vec<Poly>> {
    if points.len() > 9 {
        return Err(Error::BadInput(format!("{} points, at most 9 allowed", points.len())));
    }
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(Error::BadInput(format!("repeated point ({}, {})", p[0], p[1])));
        }
    }
    let s3 = MonomialBasis::new(3, 3);
    let rows: Vec<Vec<Elem>> = points.iter().map(|p| s3.eval_all(field, &affine(p[0], p[1]))).collect();
    let kernel = if rows.is_empty() {
        MatrixF::zeros(field, 1, s3.len()).kernel()
    } else {
        MatrixF::from_rows(field, s3.len(), rows).kernel()
    };
    let expected = 10 - points.len();
    if kernel.len() != expected {
        return Err(Error::DimensionMismatch {
            what: "cubics through the points",
            expected,
            found: kernel.len(),
        });
    }
    Ok(kernel.iter().map(|v| s3.to_poly(field, v)).collect())
}

/// A plane cubic is smooth iff its partials generate everything in degree 4.
pub fn is_smooth_cubic(t: &Poly) -> bool {
    let f = t.field();
    let s2 = MonomialBasis::new(3, 2);
    let s4 = MonomialBasis::new(3, 4);
    let mut e = Echelon::new(f, s4.len());
    for i in 0..3 {
        let d = t.partial(i);
        for k in 0..s2.len() {
            let mono = Poly::monomial(f, s2.exponent(k).to_vec(), 1);
            e.push(s4.coords(&d.mul(&mono)));
        }
    }
    e.rank() == s4.len()
}

/// `p(A X)` for a 3 x 3 matrix `A`.
fn substitute_linear(p: &Poly, a: &[[Elem; 3]; 3]) -> Poly {
    let f = p.field();
    let lin: Vec<Poly> = (0..3)
        .map(|k| {
            Poly::from_terms(
                f,
                3,
                (0..3).map(|l| {
                    let mut e = vec![0; 3];
                    e[l] = 1;
                    (e, a[k][l])
                }),
            )
        })
        .collect();
    let mut out = Poly::zero(f, 3);
    for (e, c) in p.terms() {
        let mut term = Poly::constant(f, 3, c);
        for (k, &ek) in e.iter().enumerate() {
            if ek > 0 {
                term = term.mul(&lin[k].pow(ek as u32));
            }
        }
        out = out.add(&term);
    }
    out
}

/// `p(x0, y, 1)` as a polynomial in `y`.
fn y_poly(p: &Poly, x0: Elem) -> UniPoly {
    let f = p.field();
    let mut coeffs = vec![0; p.degree().unwrap_or(0) + 1];
    for (e, c) in p.terms() {
        let j = e[1] as usize;
        coeffs[j] = f.add(coeffs[j], f.mul(c, f.pow(x0, e[0] as u64)));
    }
    UniPoly::new(f, coeffs)
}

/// Checks that `T` meets the curve with multiplicity exactly `m_i` at each
/// singular point and transversally elsewhere. A projection is chosen at
/// random; the resultant then has roots of multiplicity `m_i` over the
/// singular points and simple roots elsewhere. Returns the number of simple
/// intersection points.
fn check_transversal(c: &PlaneCurve, t: &Poly, rng: &mut ChaCha8Rng) -> Result<usize> {
    let f = c.field();
    let d = c.degree();
    let sing = c.singular_points();
    let simple = 3 * d - sing.iter().map(|s| s.m).sum::<usize>();
    let mut best = 0;
    for _ in 0..4 {
        let a: [[Elem; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| f.random_elem(rng)));
        let am = MatrixF::new(f, 3, 3, a.iter().flatten().copied().collect());
        if am.rank() < 3 {
            continue;
        }
        let fa = substitute_linear(c.equation(), &a);
        let ta = substitute_linear(t, &a);
        // the projection centre (0 : 1 : 0) must lie on neither curve
        if fa.eval(&[0, 1, 0]) == 0 || ta.eval(&[0, 1, 0]) == 0 {
            continue;
        }
        let xs: Vec<Elem> = (0..=3 * d as u64).collect();
        let ys: Vec<Elem> = xs.iter().map(|&x| y_poly(&fa, x).resultant(&y_poly(&ta, x))).collect();
        let res = UniPoly::interpolate(f, &xs, &ys);
        if res.degree() != Some(3 * d) {
            continue;
        }
        let mut rest = res.clone();
        let mut ok = true;
        let mut seen = Vec::new();
        for s in sing {
            let Ok(q) = am.solve_affine(&[s.x, s.y, 1]) else {
                ok = false;
                break;
            };
            let q = q.particular;
            if q[2] == 0 {
                ok = false;
                break;
            }
            let xq = f.div(q[0], q[2]);
            if seen.contains(&xq) || res.root_multiplicity(xq) != s.m {
                ok = false;
                break;
            }
            seen.push(xq);
            for _ in 0..s.m {
                rest = rest.divrem(&UniPoly::linear_root(f, xq)).0;
            }
        }
        if !ok {
            continue;
        }
        let sqfree = rest.gcd(&rest.derivative()).degree() == Some(0);
        if sqfree {
            return Ok(simple);
        }
        let distinct = rest.degree().unwrap_or(0) - rest.gcd(&rest.derivative()).degree().unwrap_or(0);
        best = best.max(distinct);
    }
    Err(Error::DimensionMismatch {
        what: "simple intersection points of the cubic and the curve",
        expected: simple,
        found: best,
    })
}

/// A line through `(x, y)` meeting `T` and the curve nowhere else on their
/// intersection, and missing the other singular points.
fn auxiliary_line(c: &PlaneCurve, t: &Poly, i: usize, rng: &mut ChaCha8Rng) -> Result<Poly> {
    let f = c.field();
    let s = &c.singular_points()[i];
    for _ in 0..32 {
        let (dx, dy) = (f.random_elem(rng), f.random_nonzero(rng));
        // L = dy (x - x_i z) - dx (y - y_i z)
        let l = Poly::from_terms(
            f,
            3,
            [
                (vec![1, 0, 0], dy),
                (vec![0, 1, 0], f.neg(dx)),
                (vec![0, 0, 1], f.sub(f.mul(dx, s.y), f.mul(dy, s.x))),
            ],
        );
        let others_ok = c
            .singular_points()
            .iter()
            .enumerate()
            .all(|(j, q)| j == i || l.eval(&[q.x, q.y, 1]) != 0);
        if !others_ok {
            continue;
        }
        let base = [s.x, s.y, 1];
        let dir = [dx, dy, 0];
        let tl = t.restrict_to_line(&base, &dir);
        if tl.degree() != Some(3) || tl.root_multiplicity(0) != 1 {
            continue;
        }
        let q = tl.divrem(&UniPoly::new(f, vec![0, 1])).0;
        let fl = c.equation().restrict_to_line(&base, &dir);
        if fl.gcd(&q).degree() == Some(0) {
            return Ok(l);
        }
    }
    Err(Error::Exhausted { wanted: 1, found: 0 })
}

/// The forms of degree `d` through the base scheme of `T` on the curve;
/// dimension `g + 1`, containing `F` and `T` times every adjoint.
pub fn extension_system(c: &PlaneCurve, t: &Poly) -> Result<PlaneExtensionSystem> {
    extension_system_seeded(c, t, 0)
}

pub fn extension_system_seeded(c: &PlaneCurve, t: &Poly, seed: u64) -> Result<PlaneExtensionSystem> {
    let f = c.field();
    let d = c.degree();
    if t.nvars() != 3 || t.degree() != Some(3) || !t.is_homogeneous() {
        return Err(Error::BadInput("T must be a ternary cubic form".into()));
    }
    for s in c.singular_points() {
        if t.eval(&[s.x, s.y, 1]) != 0 {
            return Err(Error::BadInput(format!("T does not pass through ({}, {})", s.x, s.y)));
        }
    }
    if !is_smooth_cubic(t) {
        return Err(Error::BadInput("T is singular".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x706c_616e_6578_7400);
    let simple = check_transversal(c, t, &mut rng)?;

    let mut dpoly = Poly::constant(f, 3, 1);
    for (i, s) in c.singular_points().iter().enumerate() {
        dpoly = dpoly.mul(&auxiliary_line(c, t, i, &mut rng)?.pow(s.m as u32));
    }
    let dd = dpoly.degree().unwrap_or(0);
    let n = d + dd;
    let sn = MonomialBasis::new(3, n);
    let sd = MonomialBasis::new(3, d);

    // (F, T) in degree n, reduced so remainders are canonical
    let mut ideal = Echelon::new(f, sn.len());
    for (gen, k) in [(c.equation(), d), (t, 3)] {
        let sk = MonomialBasis::new(3, n - k);
        ideal.push_rows((0..sk.len()).map(|i| sn.coords(&gen.mul(&Poly::monomial(f, sk.exponent(i).to_vec(), 1)))));
    }
    ideal.make_reduced();
    let free = ideal.free_columns();

    let mut rows: Vec<Vec<Elem>> = vec![vec![0; sd.len()]; free.len()];
    for e in 0..sd.len() {
        let mut v = sn.coords(&dpoly.mul(&Poly::monomial(f, sd.exponent(e).to_vec(), 1)));
        ideal.reduce(&mut v);
        for (row, &k) in rows.iter_mut().zip(&free) {
            row[e] = v[k];
        }
    }
    for s in c.singular_points() {
        rows.extend(crate::curvemodel::taylor_rows(f, &sd, s.x, s.y, s.m));
    }
    let kernel = MatrixF::from_rows(f, sd.len(), rows).kernel();
    let g = c.genus();
    if kernel.len() != g + 1 {
        return Err(Error::DimensionMismatch {
            what: "extension system",
            expected: g + 1,
            found: kernel.len(),
        });
    }

    let mut span = Echelon::new(f, sd.len());
    span.push_rows(kernel.iter().cloned());
    let fc = sd.coords(c.equation());
    if !span.contains(&fc) {
        return Err(Error::CertificateFail("F is not in the extension system".into()));
    }
    for q in c.adjoint_basis()?.polys() {
        if !span.contains(&sd.coords(&t.mul(&q))) {
            return Err(Error::CertificateFail(
                "T times an adjoint is not in the extension system".into(),
            ));
        }
    }
    let mut chosen = Echelon::new(f, sd.len());
    chosen.push(fc.clone());
    let mut basis = vec![fc];
    for v in kernel {
        if chosen.push(v.clone()) {
            basis.push(v);
        }
    }
    Ok(PlaneExtensionSystem {
        curve: c.clone(),
        cubic: t.clone(),
        simple_basepoints: simple,
        monomials: sd,
        basis,
    })
}

/// A random smooth cubic through the singular points for which the
/// extension system exists; returns the cubic, the system and the number
/// of attempts used.
pub fn admissible_cubic(c: &PlaneCurve, seed: u64, max_attempts: usize) -> Result<(Poly, PlaneExtensionSystem, usize)> {
    let f = c.field();
    let pts: Vec<[Elem; 2]> = c.singular_points().iter().map(|s| [s.x, s.y]).collect();
    let cubics = cubics_through(f, &pts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6375_6269_6300);
    for attempt in 1..=max_attempts {
        let mut t = Poly::zero(f, 3);
        for q in &cubics {
            t = t.add(&q.scale(f.random_elem(&mut rng)));
        }
        if t.is_zero() || !is_smooth_cubic(&t) {
            continue;
        }
        match extension_system_seeded(c, &t, rng.gen()) {
            Ok(sys) => return Ok((t, sys, attempt)),
            Err(Error::DimensionMismatch { .. } | Error::Exhausted { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Exhausted { wanted: 1, found: 0 })
}

impl PlaneExtensionSystem {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis forms; the first is the curve equation.
    pub fn polys(&self) -> Vec<Poly> {
        let f = self.curve.field();
        self.basis.iter().map(|v| self.monomials.to_poly(f, v)).collect()
    }

    pub fn eval(&self, pt: &[Elem; 3]) -> Vec<Elem> {
        let f = self.curve.field();
        let m = self.monomials.eval_all(f, pt);
        self.basis.iter().map(|v| f.dot(v, &m)).collect()
    }
}

fn rank_of(f: PrimeField, rows: impl IntoIterator<Item = Vec<Elem>>, cols: usize) -> usize {
    let mut e = Echelon::new(f, cols);
    e.push_rows(rows);
    e.rank()
}

/// Images of general plane points, curve points and cubic points, with the
/// contraction and hyperplane-section checks.
pub fn surface_sample(sys: &PlaneExtensionSystem, m: usize, seed: u64) -> Result<SurfaceImageSample> {
    let c = &sys.curve;
    let f = c.field();
    let g = c.genus();
    let t = &sys.cubic;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7375_7266_6163_6500);
    let mut points = Vec::new();

    // general points
    let mut general = Vec::new();
    while general.len() < m {
        let pt = affine(f.random_elem(&mut rng), f.random_elem(&mut rng));
        if c.equation().eval(&pt) != 0 && t.eval(&pt) != 0 {
            let image = sys.eval(&pt);
            general.push(image.clone());
            points.push(ImagePoint {
                source: pt,
                image,
                on_curve: false,
                on_cubic: false,
            });
        }
    }
    let general_rank = rank_of(f, general, g + 1);

    // curve points
    let adj = c.adjoint_basis()?;
    let mut curve_rows = Vec::new();
    let mut joint_rows = Vec::new();
    for q in c.sample_points(m, seed)? {
        let pt = q.coords();
        let tv = t.eval(&pt);
        if tv == 0 {
            continue;
        }
        let image = sys.eval(&pt);
        if image[0] != 0 {
            return Err(Error::SectionFail("curve point off the hyperplane F = 0".into()));
        }
        let scale = f.inv(f.mul(tv, q.fy));
        let mut row: Vec<Elem> = image[1..].iter().map(|&v| f.mul(v, scale)).collect();
        row.extend(adj.values_at(&q));
        joint_rows.push(row);
        curve_rows.push(image[1..].to_vec());
        points.push(ImagePoint {
            source: pt,
            image,
            on_curve: true,
            on_cubic: false,
        });
    }
    let curve_span = rank_of(f, curve_rows, g);
    let joint_rank = rank_of(f, joint_rows, 2 * g);
    if curve_span != g {
        return Err(Error::SectionFail(format!(
            "curve images span dimension {curve_span}, expected {g}"
        )));
    }
    if joint_rank != g {
        return Err(Error::SectionFail(format!(
            "hyperplane section differs from the canonical embedding (joint rank {joint_rank})"
        )));
    }

    // cubic points
    let mut cubic_rows = Vec::new();
    let mut tries = 0;
    while cubic_rows.len() < m && tries < 50 * m + 100 {
        tries += 1;
        let x = f.random_elem(&mut rng);
        for y in y_poly(t, x).roots() {
            let pt = affine(x, y);
            if cubic_rows.len() >= m || c.equation().eval(&pt) == 0 {
                continue;
            }
            let image = sys.eval(&pt);
            cubic_rows.push(image.clone());
            points.push(ImagePoint {
                source: pt,
                image,
                on_curve: false,
                on_cubic: true,
            });
        }
    }
    if cubic_rows.is_empty() {
        return Err(Error::ContractionFail("no points found on the cubic".into()));
    }
    let cubic_rank = rank_of(f, cubic_rows, g + 1);
    if cubic_rank != 1 {
        return Err(Error::ContractionFail(format!(
            "cubic images span rank {cubic_rank}, expected a single point"
        )));
    }
    Ok(SurfaceImageSample {
        points,
        cubic_rank,
        curve_span,
        joint_rank,
        general_rank,
    })
}

/// Whether two cubics cut different divisors on the curve: their values on
/// sample curve points are not proportional.
pub fn cut_divisors_differ(c: &PlaneCurve, t1: &Poly, t2: &Poly, seed: u64) -> Result<bool> {
    let f = c.field();
    let pts = c.sample_points(20, seed)?;
    let rows: Vec<Vec<Elem>> = pts
        .iter()
        .map(|q| {
            let pt = q.coords();
            vec![t1.eval(&pt), t2.eval(&pt)]
        })
        .collect();
    Ok(rank_of(f, rows, 2) == 2)
}

impl SurfaceImageSample {
    /// Rows `x y z | flags | image`.
    pub fn to_text(&self) -> String {
        self.points
            .iter()
            .map(|p| {
                let img: Vec<String> = p.image.iter().map(Elem::to_string).collect();
                format!(
                    "point {} {} {} curve={} cubic={} image {}\n",
                    p.source[0],
                    p.source[1],
                    p.source[2],
                    u8::from(p.on_curve),
                    u8::from(p.on_cubic),
                    img.join(" ")
                )
            })
            .collect()
    }
}
