use proptest::prelude::*;

use wahl_core::curvemodel::{Gonality, PlaneCurve};
use wahl_core::exactcore::PrimeField;
use wahl_core::gaussmap::{gauss_corank, h0_omega_power, mult_rank, wahl_corank, wahl_points};

fn curve(d: usize, mults: &[usize], gon: Gonality, seed: u64) -> PlaneCurve {
    PlaneCurve::seeded("test", PrimeField::random(seed), d, mults, gon, seed).unwrap()
}

#[test]
fn hyperelliptic_coranks() {
    for (d, m, seed) in [(5, 3, 1), (6, 4, 2), (7, 5, 3)] {
        let c = curve(d, &[m], Gonality::Hyperelliptic, seed);
        let g = c.genus();
        assert_eq!(wahl_corank(&c, seed, None).unwrap().corank, 3 * g - 2, "g={g}");
        // Sym^2 of a hyperelliptic canonical system misses g - 2 dimensions
        assert_eq!(mult_rank(&c, 1, seed, None).unwrap().corank, g - 2);
    }
}

#[test]
fn trigonal_corank() {
    let c = curve(6, &[3], Gonality::Trigonal, 4);
    assert_eq!(wahl_corank(&c, 0, None).unwrap().corank, c.genus() + 5);
}

#[test]
fn smooth_quintic_plane() {
    let c = curve(5, &[], Gonality::Plane(5), 7);
    let r = wahl_corank(&c, 0, None).unwrap();
    assert_eq!(r.dim_target, 5 * (c.genus() - 1));
    assert_eq!(r.corank, 10);
}

#[test]
fn too_few_points_is_bad_input() {
    let c = curve(6, &[2], Gonality::Tetragonal, 8);
    assert!(wahl_corank(&c, 0, Some(wahl_points(c.genus()) - 1)).is_err());
}

#[test]
fn second_gaussian_map_shape() {
    let c = curve(6, &[2], Gonality::Tetragonal, 8);
    let g = c.genus();
    let r = gauss_corank(&c, 2, 0, None).unwrap();
    assert_eq!(r.dim_target, h0_omega_power(g, 4));
    // mu is surjective here, so R(omega^2, omega) has the expected size
    assert_eq!(r.dim_source, h0_omega_power(g, 2) * g - h0_omega_power(g, 3));
    assert!(r.rank <= r.dim_target);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn corank_does_not_depend_on_prime_or_points(seed in 0u64..1000, extra in 0usize..20) {
        let c = curve(7, &[2, 2, 2], Gonality::Plane(7), 73);
        let reference = wahl_corank(&c, 0, None).unwrap().corank;
        let other = PlaneCurve::seeded("test", PrimeField::random(seed), 7, &[2, 2, 2], Gonality::Plane(7), 73).unwrap();
        let points = wahl_points(other.genus()) + extra;
        let r = wahl_corank(&other, seed, Some(points)).unwrap();
        prop_assert_eq!(r.corank, reference);
        prop_assert_eq!(r.points, points);
    }

    #[test]
    fn multiplication_is_surjective_off_the_hyperelliptic_locus(seed in 0u64..1000) {
        let c = curve(6, &[2], Gonality::Tetragonal, seed);
        let r = mult_rank(&c, 1, seed, None).unwrap();
        prop_assert_eq!(r.corank, 0);
        prop_assert_eq!(r.sym_kernel, Some((c.genus() - 2) * (c.genus() - 3) / 2));
    }
}
