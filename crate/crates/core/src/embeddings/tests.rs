use std::collections::BTreeMap;

use super::*;
use crate::classfield::{build_field, delta_group};
use crate::curve::EllipticCurve;
use crate::harmonic::{eigencocycle, Cocycle};
use crate::measure::{Measure, Moments};
use crate::padic::{BranchedLog, Padic, QuadExt, QuadPadic};
use crate::quaternion::{build_algebra, eichler_order, split_at_p};
use crate::tree::build_quotient;

struct Setup {
    g: ArithmeticGroup,
    q: QuotientGraph,
    field: QuadField,
    sys: EmbeddingSystem,
}

fn setup(nm: u64, np: u64, p: u64, d: i64) -> Setup {
    let alg = build_algebra(nm).unwrap();
    let o = eichler_order(&alg, np, p).unwrap();
    let s = split_at_p(&o, 30).unwrap();
    let g = ArithmeticGroup::new(o, s).unwrap();
    let q = build_quotient(&g, 12).unwrap();
    let field = build_field(d, p).unwrap();
    let delta = delta_group(&field);
    let sys = EmbeddingSystem::build(&field, &delta, &q, &g).unwrap();
    Setup { g, q, field, sys }
}

fn cocycle(s: &Setup, curve: [i64; 5], bound: u64) -> Cocycle {
    let e = EllipticCurve::new(curve);
    let a: BTreeMap<u64, i64> = (2..=bound).filter(|&l| crate::padic::is_prime(l)).map(|l| (l, e.a_ell(l))).collect();
    eigencocycle(&s.q, &s.g, &a, bound).unwrap()
}

#[test]
fn counts_and_free_action() {
    for (nm, np, p, d, hp) in [(7, 1, 3, -120, 2), (5, 1, 7, -7, 1), (7, 1, 3, -15, 1), (3, 1, 7, -7, 1), (7, 1, 2, -8, 1)] {
        let s = setup(nm, np, p, d);
        let orbits = if s.sys.delta.p_principal { 1 } else { 2 };
        assert_eq!(s.sys.list.len(), orbits * hp, "{nm} {p} {d}");
        assert_eq!(s.sys.orbit_count(), orbits);
        assert_eq!(s.sys.other.is_some(), orbits == 2);
        for emb in &s.sys.list {
            assert!(squares_to_disc(emb, d));
            assert!(is_optimal(&s.field, &emb.omega));
            assert!(in_edge_order(&s.g, &emb.edge, &emb.omega).unwrap());
            assert_eq!(s.g.order.orient(&emb.omega).unwrap(), emb.orientation);
        }
        // identity and the class of the prime above p act trivially
        let lvl = (nm * np * p) as i64;
        for i in 0..s.sys.list.len() {
            assert_eq!(s.sys.action[0][i], i);
            assert_eq!(act_by_class(&s.field, &s.q, &s.g, &s.sys.list, i, s.field.p_class).unwrap(), i);
        }
        assert!(s.field.ideal_coprime_to(0, lvl).a % p as i64 != 0);
    }
}

#[test]
fn generator_cycle_returns() {
    let s = setup(7, 1, 3, -120);
    let dg = &s.sys.delta;
    for gen in 0..dg.order() {
        let ord = dg.group.element_order(gen);
        let mut i = 0;
        for _ in 0..ord {
            i = s.sys.action[gen][i];
        }
        assert_eq!(i, 0);
    }
}

#[test]
fn eta_round_trip_and_twist_invariance() {
    let s = setup(7, 1, 3, -120);
    let prime = s.g.prime().clone();
    let ext = QuadExt::ramified(&prime, -120).unwrap();
    for emb in &s.sys.list {
        let (z, zbar) = fixed_points(&s.g, emb, &ext, -120).unwrap();
        assert!(z.conj().approx_eq(&zbar));
        let poly = twist_polynomial(&s.g, emb).unwrap();
        // roots of the twist polynomial
        for r in [&z, &zbar] {
            let lift = |x: &Padic| QuadPadic::from_padic(&ext, x.clone());
            let val = lift(&poly[0]).add(&lift(&poly[1]).mul(r)).add(&lift(&poly[2]).mul(r).mul(r));
            assert!(val.vale().map_or(true, |v| v >= 2 * 20));
        }
        for k in 0..100i64 {
            let a = Padic::from_ratio(&prime, 7 * k - 3, 1 + 3 * (k % 5), 25).unwrap();
            let alpha = eta_inverse(&z, &zbar, Some(&a)).unwrap();
            assert!(alpha.norm().approx_eq(&Padic::one(&prime, 20)));
            let back = eta(&z, &zbar, &alpha).unwrap().unwrap();
            assert!(back.approx_eq(&QuadPadic::from_padic(&ext, a.clone())), "{k}");
        }
        assert!(eta(&z, &zbar, &eta_inverse(&z, &zbar, None).unwrap()).unwrap().is_none());
        for (x, y) in [(1, 1), (2, -1), (0, 1), (3, 5), (-4, 1), (1, 2), (5, -3), (7, 1), (2, 3), (-1, 4)] {
            let o = &emb.omega;
            let alpha = o.scale(&rat(y)).add(&Quat::scalar(o.a, o.b, rat(x)));
            let moved = twist_act(&poly, &s.g.iota(&alpha).unwrap()).unwrap();
            for (m, p0) in moved.iter().zip(&poly) {
                assert!(m.sub(p0).val_or_prec() >= 15);
            }
        }
    }
}

#[test]
fn partial_values_vanish_and_kernel_factor() {
    // 35a1 at 7, D = -7: the prime above 7 is principal
    let s = setup(5, 1, 7, -7);
    let c = cocycle(&s, [0, 1, 1, 9, 1], 13);
    let m = Measure::new(&s.q, &s.g, &c);
    let prime = s.g.prime().clone();
    let ext = QuadExt::ramified(&prime, -7).unwrap();
    let mom = Moments::compute(&s.q, &s.g, &c, 12, 14).unwrap();
    let log = BranchedLog::iwasawa(&prime);
    for emb in &s.sys.list {
        let dom = GDomain::new(&s.field, &s.g, emb).unwrap();
        assert_eq!(dom.kappa, 2);
        assert!(dom.mass(&m).unwrap().is_zero());
        let (z, zbar) = fixed_points(&s.g, emb, &ext, -7).unwrap();
        let half = dom.log_integral(&m, &mom, &z, &zbar, &log).unwrap();
        let other = m.pieces_for(&dom.complement(&s.g).unwrap()).unwrap();
        let rest = m.integrate_log_ratio(&mom, other, &zbar, &z, &log).unwrap();
        let whole = m.coleman_integral(&mom, &z, &zbar, &log).unwrap();
        assert!(whole.approx_eq(&half.add(&rest)));
        assert!(rest.approx_eq(&half), "translation by the uniformizer");
    }
    // 21a1 at 3, D = -120: not principal, the domain is everything
    let s = setup(7, 1, 3, -120);
    let c = cocycle(&s, [1, 0, 0, -4, -1], 13);
    let m = Measure::new(&s.q, &s.g, &c);
    for emb in &s.sys.list {
        let dom = GDomain::new(&s.field, &s.g, emb).unwrap();
        assert_eq!(dom.kappa, 1);
        assert!(dom.mass(&m).unwrap().is_zero());
    }
}

