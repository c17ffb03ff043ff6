use std::collections::BTreeMap;

use num_traits::Zero;

use super::*;
use crate::classfield::{build_field, characters, delta_group};
use crate::curve::EllipticCurve;
use crate::harmonic::eigencocycle;
use crate::quaternion::{build_algebra, eichler_order, split_at_p};
use crate::tree::{build_quotient, ArithmeticGroup, QuotientGraph};

fn run(nm: u64, p: u64, d: i64, curve: [i64; 5], prec: i64, degree: usize, check: impl Fn(&LFunction)) {
    let alg = build_algebra(nm).unwrap();
    let o = eichler_order(&alg, 1, p).unwrap();
    let s = split_at_p(&o, prec + 10).unwrap();
    let g = ArithmeticGroup::new(o, s).unwrap();
    let q: QuotientGraph = build_quotient(&g, 12).unwrap();
    let e = EllipticCurve::new(curve);
    let a: BTreeMap<u64, i64> = (2..=13).filter(|&l| crate::padic::is_prime(l)).map(|l| (l, e.a_ell(l))).collect();
    let c = eigencocycle(&q, &g, &a, 13).unwrap();
    let field = build_field(d, p).unwrap();
    let delta = delta_group(&field);
    let sys = EmbeddingSystem::build(&field, &delta, &q, &g).unwrap();
    let mom = Moments::compute(&q, &g, &c, prec, degree).unwrap();
    let lf = LFunction::new(Measure::new(&q, &g, &c), &mom, &sys, BranchedLog::iwasawa(g.prime())).unwrap();
    check(&lf);
}

fn central_and_routes(lf: &LFunction) {
    let e = lf.ext.e();
    let prec = lf.mom.prec;
    for i in 0..lf.partials.len() {
        let v = lf.partial_at_center(i).unwrap();
        assert!(v.exact.is_zero());
        assert!(v.numeric.vale().map_or(true, |x| x >= e * prec));
    }
    for chi in characters(&lf.sys.delta) {
        let d = lf.derivative(&chi).unwrap();
        let digits = lf.certify(&d, 3 * e).unwrap();
        assert!(digits >= e * (prec - 3));
        let conj = lf.derivative(&chi.conj()).unwrap();
        if chi.m <= 2 {
            assert!(conj.route_a.distance(&d.route_a) >= e * (prec - 3));
        }
    }
}

#[test]
fn conductor_21_at_3() {
    run(7, 3, -120, [1, 0, 0, -4, -1], 14, 18, |lf| {
        assert_eq!(lf.partials.len(), 2);
        assert_eq!(lf.partials[0].domain.kappa, 1);
        central_and_routes(lf);
    });
}

#[test]
fn conductor_35_at_7() {
    run(5, 7, -7, [0, 1, 1, 9, 1], 8, 10, |lf| {
        assert_eq!(lf.partials[0].domain.kappa, 2);
        central_and_routes(lf);
        // the literal route B is off by the factor -4 = 2 / (-1/2)
        let d = lf.derivative(&characters(&lf.sys.delta)[0]).unwrap();
        let a = d.route_a.eval().unwrap();
        let b = d.route_b.eval().unwrap();
        if !a.is_zero() {
            assert!(b.approx_eq(&a.mul_int(-4)));
        }
    });
}

#[test]
fn finite_difference_matches_derivative() {
    run(7, 3, -120, [1, 0, 0, -4, -1], 14, 18, |lf| {
        let chi = &characters(&lf.sys.delta)[0];
        let d = lf.derivative(chi).unwrap();
        let fd = lf.central_difference(chi, 4).unwrap();
        let e = lf.ext.e();
        assert!(fd.distance(&d.route_a) >= e * (lf.mom.prec - 4 - 3), "{}", fd.distance(&d.route_a));
        let at_one = lf.series(chi, &[Padic::zero(lf.ext.prime(), 20)]).unwrap();
        assert!(at_one[0].coeffs.iter().all(|c| c.vale().map_or(true, |v| v >= e * (lf.mom.prec - 1))));
    });
}

#[test]
fn nonsplit_has_no_exceptional_zero() {
    // 21a1 at 7 and 14a1 at 2: the measure is odd under the uniformizer
    for (nm, p, d, curve, prec, deg) in [(3, 7, -7, [1, 0, 0, -4, -1], 8, 10), (7, 2, -8, [1, 0, 1, 4, -6], 16, 20)] {
        run(nm, p, d, curve, prec, deg, |lf| {
            let eps = crate::harmonic::atkin_lehner_eigenvalue(lf.m.q, lf.m.g, lf.m.c).unwrap();
            assert_eq!(eps, BigRational::from_integer((-1).into()));
            let v = lf.partial_at_center(0).unwrap();
            assert!(!v.exact.is_zero());
            assert!(lf.coleman(0).unwrap().is_zero());
            assert!(!lf.route_a(0).unwrap().is_zero());
        });
    }
}
