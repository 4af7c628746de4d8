use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::exactcore::Elem;

/// A smooth affine point `(x, y, 1)` of the curve with `F_y != 0`, so that
/// `x` is a local coordinate there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurvePoint {
    pub x: Elem,
    pub y: Elem,
    pub fx: Elem,
    pub fy: Elem,
    /// `dy/dx = -F_x / F_y`
    pub dy: Elem,
    /// `d(F_y)/dx` along the curve
    pub dfy: Elem,
}

impl CurvePoint {
    pub fn coords(&self) -> [Elem; 3] {
        [self.x, self.y, 1]
    }
}

impl PlaneCurve {
    /// Builds the point record, or `None` if `(x, y)` is not an admissible
    /// smooth point.
    pub fn point_at(&self, x: Elem, y: Elem) -> Option<CurvePoint> {
        let f = self.field();
        let pt = [x, y, 1];
        if self.equation().eval(&pt) != 0 {
            return None;
        }
        if self.singular_points().iter().any(|s| s.x == x && s.y == y) {
            return None;
        }
        let fy = self.fy().eval(&pt);
        if fy == 0 {
            return None;
        }
        let fx = self.fx().eval(&pt);
        let dy = f.neg(f.div(fx, fy));
        let dfy = f.add(self.fxy().eval(&pt), f.mul(self.fyy().eval(&pt), dy));
        Some(CurvePoint { x, y, fx, fy, dy, dfy })
    }

    /// `count` distinct admissible points, scanning x-values in a seeded
    /// pseudorandom order and taking all roots of `F(x0, y, 1)`.
    pub fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<CurvePoint>> {
        let f = self.field();
        let p = f.modulus();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ p);
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return Ok(out);
        }
        let take = |x0: Elem, out: &mut Vec<CurvePoint>| {
            for y0 in self.y_slice(x0).roots() {
                if let Some(q) = self.point_at(x0, y0) {
                    out.push(q);
                    if out.len() == count {
                        return true;
                    }
                }
            }
            false
        };
        if p < 1 << 16 {
            let mut xs: Vec<Elem> = (0..p).collect();
            xs.shuffle(&mut rng);
            for x0 in xs {
                if take(x0, &mut out) {
                    return Ok(out);
                }
            }
        } else {
            let mut seen = HashSet::new();
            for _ in 0..(40 * count + 1000) {
                let x0 = f.random_elem(&mut rng);
                if seen.insert(x0) && take(x0, &mut out) {
                    return Ok(out);
                }
            }
        }
        Err(Error::Exhausted {
            wanted: count,
            found: out.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvemodel::Gonality;
    use crate::exactcore::{Poly, PrimeField};

    fn conic(p: u64) -> PlaneCurve {
        let f = PrimeField::new(p).unwrap();
        let g = Poly::from_terms(
            f,
            3,
            [(vec![2, 0, 0], 1), (vec![0, 2, 0], 1), (vec![0, 0, 2], f.neg(1))],
        );
        PlaneCurve::new("conic", g, vec![], Gonality::Unknown).unwrap()
    }

    #[test]
    fn conic_point_over_f7() {
        let c = conic(7);
        let pts = c.sample_points(1, 0).unwrap();
        let q = pts[0];
        assert_eq!((q.x * q.x + q.y * q.y + 6) % 7, 0);
        assert!(c.sample_points(0, 0).unwrap().is_empty());
        // (2, 2) is a point
        assert!(c.point_at(2, 2).is_some());
    }

    #[test]
    fn small_field_exhausts() {
        let c = conic(7);
        // a conic over F_7 has 8 points; at most 6 have y != 0 in the chart
        assert!(matches!(c.sample_points(50, 1), Err(Error::Exhausted { .. })));
    }

    #[test]
    fn sampler_is_deterministic_and_distinct() {
        let c = conic(1_000_003);
        let a = c.sample_points(40, 5).unwrap();
        assert_eq!(a, c.sample_points(40, 5).unwrap());
        assert_ne!(a, c.sample_points(40, 6).unwrap());
        let set: HashSet<_> = a.iter().map(|q| (q.x, q.y)).collect();
        assert_eq!(set.len(), 40);
    }
}
