use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::padic::{QuadExt, QuadPadic};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn period_round_trip() {
    for (curve, p) in [([1, 0, 0, -4, -1], 3), ([1, 0, 0, -4, -1], 7), ([0, 1, 1, 9, 1], 7), ([0, 1, 1, 9, 1], 5), ([1, 0, 1, 4, -6], 2), ([1, 0, 1, 4, -6], 7)] {
        let e = EllipticCurve::new(curve);
        let t = tate_period(&e, p, 20).unwrap();
        let j = Padic::from_rational(&t.prime, &e.j(), 40).unwrap();
        assert_eq!(t.q.valuation().unwrap(), -j.valuation().unwrap());
        let back = j_of_q(&t.q, 30).unwrap();
        assert!(back.sub(&j).val_or_prec() >= 20, "{curve:?} {p}");
        let by_count = e.a_ell(p) == 1;
        assert_eq!(t.split, by_count, "{curve:?} {p}");
        assert_eq!(tangent_cone_splits(&e, p).unwrap(), by_count, "{curve:?} {p}");
    }
}

#[test]
fn good_reduction_is_rejected() {
    let e = EllipticCurve::new([1, 0, 0, -4, -1]);
    assert_eq!(tate_period(&e, 5, 10).unwrap_err(), Error::NotMultiplicative(5));
    assert!(tangent_cone_splits(&e, 5).is_err());
}

#[test]
fn differential_leading_terms() {
    // 1 + a1 t + (a1^2 + a2) t^2 + (a1^3 + 2 a1 a2 + 2 a3) t^3
    //   + (a1^4 + 3 a1^2 a2 + 6 a1 a3 + a2^2 + 2 a4) t^4
    for a in [[1, 0, 0, -4, -1], [0, 1, 1, 9, 1], [1, 0, 1, 4, -6], [2, -3, 5, 7, 11]] {
        let e = EllipticCurve::new(a);
        let c = formal_log_coefficients(&e, 5);
        let [a1, a2, a3, a4, _] = a;
        let want = [1, a1, a1 * a1 + a2, a1.pow(3) + 2 * a1 * a2 + 2 * a3, a1.pow(4) + 3 * a1 * a1 * a2 + 6 * a1 * a3 + a2 * a2 + 2 * a4];
        for (x, y) in c.iter().zip(want) {
            assert_eq!(*x, BigInt::from(y), "{a:?}");
        }
    }
}

fn twist_setup(curve: [i64; 5], p: u64, d: i64, x: BigRational, y: BigRational) -> (TateCurve, LocalCurve, KPoint) {
    let e = EllipticCurve::new(curve);
    let t = tate_period(&e, p, 20).unwrap();
    let ext = QuadExt::ramified(&t.prime, d).unwrap();
    let lc = LocalCurve::new(&e, &ext, 20);
    let pt = KPoint::from_twist(&e, d, x, y).unwrap();
    (t, lc, pt)
}

#[test]
fn log_is_a_homomorphism() {
    let (t, lc, pt) = twist_setup([0, 1, 1, 9, 1], 7, -7, r(-48, 1), r(540, 1));
    let prec = t.prec;
    let p = pt.localize(&lc.ext, prec + GUARD).unwrap();
    assert!(lc.is_on(&p));
    let l1 = t.log_e(&lc, &p).unwrap();
    assert!(!l1.is_zero());
    for k in [2u64, 3, 5] {
        let lk = t.log_e(&lc, &lc.mul(k, &p).unwrap()).unwrap();
        assert!(lk.sub(&l1.mul_int(k as i64)).vale().unwrap_or(i64::MAX) >= lc.ext.e() * (prec - 3), "{k}");
    }
    // the conjugate of a point from the twist is its negative
    let pbar = pt.conj().localize(&lc.ext, prec + GUARD).unwrap();
    let lbar = t.log_e(&lc, &pbar).unwrap();
    assert!(lbar.add(&l1).vale().unwrap_or(i64::MAX) >= lc.ext.e() * (prec - 3));
    let sum = lc.add(&p, &pbar).unwrap();
    assert!(sum.is_none());
}

#[test]
fn torsion_has_zero_log() {
    let e = EllipticCurve::new([1, 0, 0, -4, -1]);
    let t = tate_period(&e, 3, 20).unwrap();
    let ext = QuadExt::ramified(&t.prime, -15).unwrap();
    let lc = LocalCurve::new(&e, &ext, 20);
    for (x, y) in [(-2, 1), (-1, -1), (5, 8), (2, -1)] {
        let pt = KPoint { d: -15, x: KElt::rational(r(x, 1)), y: KElt::rational(r(y, 1)) };
        assert!(pt.is_on(&e));
        let l = t.log_e(&lc, &pt.localize(&ext, 30).unwrap()).unwrap();
        assert!(l.vale().map_or(true, |v| v >= 2 * 18), "{x} {y}");
    }
}

#[test]
fn combination_collapses_for_trivial_character() {
    let (t, lc, pt) = twist_setup([1, 0, 0, -4, -1], 3, -15, r(225, 16), r(601425, 64));
    let chi = crate::classfield::Character::trivial(1);
    let side = point_combination(&t, &lc, std::slice::from_ref(&pt), &chi).unwrap();
    let direct = side.logs[0].sub(&side.conj_logs[0]);
    assert!(side.combination.coeffs[0].approx_eq(&direct));
    assert!(direct.approx_eq(&side.logs[0].mul_int(2)));
    let two = crate::classfield::Character { m: 2, exps: vec![0, 1] };
    assert!(matches!(point_combination(&t, &lc, &[pt], &two), Err(Error::OrbitIncomplete(_))));
}

#[test]
fn nonsplit_log_is_refused() {
    let e = EllipticCurve::new([1, 0, 0, -4, -1]);
    let t = tate_period(&e, 7, 10).unwrap();
    assert!(!t.split);
    let ext = QuadExt::ramified(&t.prime, -7).unwrap();
    let lc = LocalCurve::new(&e, &ext, 10);
    let pt: LocalPoint = Some((QuadPadic::from_int(&ext, -2, 20), QuadPadic::from_int(&ext, 1, 20)));
    assert!(matches!(t.log_e(&lc, &pt), Err(Error::Unsupported(_))));
}

#[test]
fn recognition_examples() {
    let five = Prime::new(5);
    let x = Padic::from_ratio(&five, 3, 7, 30).unwrap();
    assert_eq!(rational_recognize(&x, &BigInt::from(1000)), Some(r(3, 7)));
    let y = Padic::from_ratio(&five, -250, 13, 30).unwrap();
    assert_eq!(rational_recognize(&y, &BigInt::from(1000)), Some(r(-250, 13)));
    assert_eq!(rational_recognize(&Padic::zero(&five, 30), &BigInt::from(1000)), Some(r(0, 1)));
    let three = Prime::new(3);
    let z = Padic::from_ratio(&three, 5, 27, 20).unwrap();
    assert_eq!(rational_recognize(&z, &BigInt::from(1000)), Some(r(5, 27)));
    // too little precision for a unique answer
    assert_eq!(rational_recognize(&Padic::from_ratio(&five, 3, 7, 6).unwrap(), &BigInt::from(1000)), None);
}

proptest! {
    #[test]
    fn random_units_are_not_recognized(n in 1u64..u64::MAX) {
        let five = Prime::new(5);
        let big = BigInt::from(n) * BigInt::from(n) * 5 + 1;
        let x = Padic::from_bigint(&five, &big, 30);
        prop_assume!(big > BigInt::from(1000));
        prop_assert_eq!(rational_recognize(&x, &BigInt::from(1000)), None);
    }

    #[test]
    fn small_rationals_round_trip(a in -1000i64..=1000, b in 1i64..=1000) {
        let p = Prime::new(7);
        prop_assume!(b % 7 != 0);
        let x = Padic::from_ratio(&p, a, b, 30).unwrap();
        prop_assert_eq!(rational_recognize(&x, &BigInt::from(1000)), Some(r(a, b)));
    }
}

mod against_measure {
    use std::collections::BTreeMap;

    use super::*;
    use crate::classfield::{build_field, characters, delta_group};
    use crate::embeddings::EmbeddingSystem;
    use crate::harmonic::eigencocycle;
    use crate::lfunction::LFunction;
    use crate::measure::{Measure, Moments};
    use crate::quaternion::{build_algebra, eichler_order, split_at_p};
    use crate::tree::{build_quotient, ArithmeticGroup};

    pub fn run(nm: u64, p: u64, d: i64, curve: [i64; 5], prec: i64, degree: usize, check: impl Fn(&LFunction, &TateCurve)) {
        let alg = build_algebra(nm).unwrap();
        let o = eichler_order(&alg, 1, p).unwrap();
        let s = split_at_p(&o, prec + 10).unwrap();
        let g = ArithmeticGroup::new(o, s).unwrap();
        let q = build_quotient(&g, 12).unwrap();
        let e = EllipticCurve::new(curve);
        let a: BTreeMap<u64, i64> = (2..=13).filter(|&l| crate::padic::is_prime(l)).map(|l| (l, e.a_ell(l))).collect();
        let c = eigencocycle(&q, &g, &a, 13).unwrap();
        let field = build_field(d, p).unwrap();
        let delta = delta_group(&field);
        let sys = EmbeddingSystem::build(&field, &delta, &q, &g).unwrap();
        let mom = Moments::compute(&q, &g, &c, prec, degree).unwrap();
        let t = tate_period(&e, p, prec).unwrap();
        let lf = LFunction::new(Measure::new(&q, &g, &c), &mom, &sys, t.log.clone()).unwrap();
        check(&lf, &t);
    }

    #[test]
    fn multiplicative_integral_matches_coleman_and_point() {
        // the generator of the twist gives a small multiple of the trace of the Heegner point
        for (nm, p, d, curve, prec, deg, x, y, want) in [
            (5, 7, -7, [0, 1, 1, 9, 1], 12, 14, r(-48, 1), r(540, 1), r(-1, 12)),
            (7, 3, -15, [1, 0, 0, -4, -1], 16, 20, r(225, 16), r(601425, 64), r(-1, 8)),
        ] {
            run(nm, p, d, curve, prec, deg, |lf, t| {
                let chi = &characters(&lf.sys.delta)[0];
                let (js, mi) = mult_integral_to_point(lf, chi, t).unwrap();
                let e = lf.ext.e();
                for (i, j) in js.iter().enumerate() {
                    assert!(t.log.log_quad(j).unwrap().approx_eq(&lf.coleman(i).unwrap()));
                    let ni = norm_identity(lf, i, t).unwrap();
                    assert!(ni.agreement >= e * (prec - 2));
                    assert_eq!(ni.norm_exponent.map(|(k, v)| (k, v >= prec - 2)), Some((0, true)));
                }
                let a = lf.derivative(chi).unwrap().route_a.coeffs[0].clone();
                assert!(mi.coeffs[0].approx_eq(&a.mul_int(-(lf.partials[0].domain.kappa as i64))));
                let curve = EllipticCurve::new(curve);
                let lc = LocalCurve::new(&curve, &lf.ext, prec);
                let pt = KPoint::from_twist(&curve, d, x.clone(), y.clone()).unwrap();
                let side = point_combination(t, &lc, &[pt], &crate::classfield::Character::trivial(1)).unwrap();
                let ratio = a.div(&side.combination.coeffs[0]).unwrap();
                assert_eq!(recognize_quad(&ratio, &BigInt::from(100), 2), Some(want.clone()));
            });
        }
    }

    #[test]
    fn nonsplit_norm_identity_is_trivial() {
        run(3, 7, -7, [1, 0, 0, -4, -1], 8, 10, |lf, t| {
            assert_eq!(t.a_p, -1);
            let ni = norm_identity(lf, 0, t).unwrap();
            assert!(ni.agreement >= lf.ext.e() * 6);
            assert!(ni.j.mul(&ni.j_w).approx_eq(&QuadPadic::one(&lf.ext, 8)));
        });
    }
}
