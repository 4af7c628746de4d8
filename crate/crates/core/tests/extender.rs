use std::sync::OnceLock;

use proptest::prelude::*;

use wahl_core::canideal::CanonicalPresentation;
use wahl_core::curvemodel::{Gonality, PlaneCurve};
use wahl_core::exactcore::{Elem, PrimeField};
use wahl_core::extender::{
    extend, random_ribbon, ribbon_basis, universal_equations, ExtensionData, RibbonVector, SecondOrderSolver,
};

struct Fixture {
    pres: CanonicalPresentation,
    basis: Vec<RibbonVector>,
    solver: SecondOrderSolver,
}

// septic with three nodes: g = 12, corank 7
fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let c = PlaneCurve::seeded("septic", PrimeField::random(21), 7, &[2, 2, 2], Gonality::Plane(7), 21).unwrap();
        let pres = CanonicalPresentation::compute(&c, 0).unwrap();
        let basis = ribbon_basis(&pres, 0).unwrap();
        let solver = SecondOrderSolver::new(&pres).unwrap();
        Fixture { pres, basis, solver }
    })
}

fn h(fx: &Fixture, v: &[Elem]) -> Vec<Elem> {
    let r = RibbonVector {
        f_v: v.to_vec(),
        normalized: false,
    };
    ExtensionData::compute_with(&fx.solver, &fx.pres, &r).unwrap().h_v
}

fn lin(f: PrimeField, terms: &[(Elem, &[Elem])]) -> Vec<Elem> {
    let mut out = vec![0; terms[0].1.len()];
    for &(c, v) in terms {
        f.add_mul_assign(&mut out, v, c);
    }
    out
}

#[test]
fn ribbon_count_is_wahl_corank() {
    assert_eq!(fixture().basis.len(), 7);
}

#[test]
fn universal_extension_restricts_to_every_ribbon() {
    let fx = fixture();
    let f = fx.pres.field();
    let u = universal_equations(&fx.pres, &fx.basis).unwrap();
    assert_eq!(u.nvars(), fx.pres.g() + fx.basis.len());
    let coeffs: Vec<Elem> = (1..=fx.basis.len() as u64).map(|i| i * i + 3).collect();
    let terms: Vec<(Elem, &[Elem])> = coeffs.iter().zip(&fx.basis).map(|(&c, b)| (c, &b.f_v[..])).collect();
    let v = RibbonVector {
        f_v: lin(f, &terms),
        normalized: false,
    };
    let (_, surf) = extend(&fx.pres, &v).unwrap();
    assert_eq!(u.specialize(&coeffs), surf.equations);
}

#[test]
fn surface_equations_export() {
    let fx = fixture();
    let (_, surf) = extend(&fx.pres, &random_ribbon(&fx.pres, &fx.basis, 4)).unwrap();
    let text = surf.to_text();
    assert!(text.starts_with("vars x0 "));
    assert!(text.contains(&format!("\nm {}\n", fx.pres.m())));
    assert!(surf.residue.iter().all(|&x| x == 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn second_order_term_is_quadratic(seed in any::<u64>(), lambda in 1u64..1 << 28) {
        let fx = fixture();
        let f = fx.pres.field();
        let v = random_ribbon(&fx.pres, &fx.basis, seed);
        let hv = h(fx, &v.f_v);
        let hl = h(fx, &lin(f, &[(lambda, &v.f_v)]));
        let l2 = f.mul(lambda, lambda);
        prop_assert_eq!(hl, lin(f, &[(l2, &hv)]));
    }

    #[test]
    fn polarization_is_bilinear(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>(), lambda in 1u64..1 << 28) {
        let fx = fixture();
        let f = fx.pres.field();
        let u = random_ribbon(&fx.pres, &fx.basis, s1).f_v;
        let v = random_ribbon(&fx.pres, &fx.basis, s2).f_v;
        let w = random_ribbon(&fx.pres, &fx.basis, s3).f_v;
        let p = f.modulus();
        let b = |x: &[Elem], y: &[Elem]| {
            let xy = lin(f, &[(1, x), (1, y)]);
            lin(f, &[(1, &h(fx, &xy)), (p - 1, &h(fx, x)), (p - 1, &h(fx, y))])
        };
        let buv = b(&u, &v);
        prop_assert_eq!(&buv, &b(&v, &u));
        prop_assert_eq!(b(&lin(f, &[(lambda, &u)]), &v), lin(f, &[(lambda, &buv)]));
        prop_assert_eq!(b(&lin(f, &[(1, &u), (1, &w)]), &v), lin(f, &[(1, &buv), (1, &b(&w, &v))]));
    }

    #[test]
    fn zero_ribbon_gives_the_cone(seed in any::<u64>()) {
        let fx = fixture();
        let zero = vec![0; fx.pres.m() * fx.pres.g()];
        prop_assert!(h(fx, &zero).iter().all(|&x| x == 0));
        let v = random_ribbon(&fx.pres, &fx.basis, seed);
        prop_assert!(ExtensionData::compute_with(&fx.solver, &fx.pres, &v).unwrap().verify(&fx.pres).is_ok());
    }
}
