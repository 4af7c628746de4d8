use proptest::prelude::*;

use wahl_core::curvemodel::{Gonality, PlaneCurve};
use wahl_core::exactcore::{Elem, PrimeField};
use wahl_core::planeext::{admissible_cubic, cubics_through, cut_divisors_differ, surface_sample};

#[test]
fn nodal_septic_extension() {
    let c = PlaneCurve::seeded("septic", PrimeField::random(5), 7, &[2, 2, 2], Gonality::Plane(7), 5).unwrap();
    let g = c.genus();
    let (t, sys, _) = admissible_cubic(&c, 1, 20).unwrap();
    assert_eq!(sys.dim(), g + 1);
    // 21 intersections minus two at each node
    assert_eq!(sys.simple_basepoints, 21 - 2 * 3);
    let s = surface_sample(&sys, 2 * g + 10, 1).unwrap();
    assert_eq!(
        (s.cubic_rank, s.curve_span, s.joint_rank, s.general_rank),
        (1, g, g, g + 1)
    );
    let (t2, _, _) = admissible_cubic(&c, 2, 20).unwrap();
    assert!(cut_divisors_differ(&c, &t, &t2, 0).unwrap());
    assert!(!cut_divisors_differ(&c, &t, &t, 0).unwrap());
}

#[test]
fn first_form_is_the_curve() {
    let c = PlaneCurve::seeded("sextic", PrimeField::random(6), 6, &[2], Gonality::Plane(6), 6).unwrap();
    let (_, sys, _) = admissible_cubic(&c, 0, 20).unwrap();
    assert_eq!(&sys.polys()[0], c.equation());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cubics_through_general_points(seed in any::<u64>(), a in 0usize..=9, pts in proptest::collection::vec((any::<u32>(), any::<u32>()), 9)) {
        let f = PrimeField::random(seed);
        let pts: Vec<[Elem; 2]> = pts[..a].iter().map(|&(x, y)| [f.from_u64(x as u64), f.from_u64(y as u64)]).collect();
        let cubics = cubics_through(f, &pts).unwrap();
        prop_assert_eq!(cubics.len(), 10 - a);
        for q in &cubics {
            for p in &pts {
                prop_assert_eq!(q.eval(&[p[0], p[1], 1]), 0);
            }
        }
    }
}
