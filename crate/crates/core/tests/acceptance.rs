//! The acceptance suite. Each criterion prints one PASS/FAIL line; known
//! failures of the literal statements are printed, not hidden, and the test
//! only fails when a line this implementation is expected to pass does not.
//! It runs without the test harness so that the lines are always shown.

use std::fmt::Write as _;

use anticyclo_core::classfield::{build_field, characters, delta_group};
use anticyclo_core::embeddings::EmbeddingSystem;
use anticyclo_core::harmonic::{cocycle_space, hecke_matrix};
use anticyclo_core::lfunction::LFunction;
use anticyclo_core::measure::{total_mass, Measure, Moments};
use anticyclo_core::padic::{Padic, QuadExt, QuadPadic};
use anticyclo_core::pipeline::{audit, build, check, run, Built, InstanceConfig, BULLETS, SLACK};
use anticyclo_core::tate::{rational_recognize, tate_period};
use anticyclo_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

const I1: &str = "curve = 1 0 0 -4 -1\nd = -120\np = 3\nprec = 16\ndegree = 20\n";
const I2: &str = "curve = 0 1 1 9 1\nd = -7\np = 7\nprec = 22\ndegree = 26\npoint = twist -48 540\n";
const I3: &str = "curve = 1 0 0 -4 -1\nd = -15\np = 3\nprec = 24\ndegree = 28\npoint = twist 225/16 601425/64\n";
const I4: &str = "curve = 1 0 0 -4 -1\nd = -7\np = 7\nprec = 10\ndegree = 12\n";

fn cfg(text: &str) -> InstanceConfig {
    InstanceConfig::parse(text).unwrap()
}

struct Line {
    name: &'static str,
    pass: bool,
    /// Expected to fail: the literal statement does not hold.
    known: bool,
    detail: String,
}

fn line(name: &'static str, pass: bool, detail: String) -> Line {
    Line { name, pass, known: false, detail }
}

fn digits(d: i64) -> String {
    if d >= i64::MAX / 8 {
        "all".into()
    } else {
        d.to_string()
    }
}

fn hypothesis_gate() -> Line {
    let mut d = String::new();
    let mut ok = true;
    for (n, p, disc) in [(21, 3, -120), (14, 2, -8)] {
        let a = check(n, p, disc);
        ok &= a.is_ok();
        let _ = write!(d, "({n},{p},{disc}) {}; ", if a.is_ok() { "accepted" } else { "rejected" });
    }
    for (n, p, disc, bullet) in [(21, 3, -3, "unit obstruction"), (14, 2, -4, "unit obstruction"), (70, 2, -8, "odd factor count")] {
        let got = check(n, p, disc);
        ok &= got == Err(Error::HypothesisViolation(bullet.into()));
        let _ = write!(d, "({n},{p},{disc}) -> {}; ", got.err().map_or("accepted".into(), |e| e.to_string()));
    }
    ok &= audit(21, 3, -120).results.len() == BULLETS.len();
    line("C1 hypothesis gate", ok, d)
}

fn structure(b: &Built, hecke: &[u64]) -> (bool, String) {
    let g = &b.graph;
    let mass = g.mass == g.mass_formula;
    let harmonic = b.c.is_harmonic(&b.q);
    let mut equivariant = true;
    let mut antisymmetric = true;
    for glues in &b.q.children {
        for gl in glues.iter().flatten().take(20) {
            let e = b.q.oriented_rep(gl);
            let moved = b.g.act_edge(&gl.gamma, &e).unwrap();
            let v = b.c.value_on(&b.q, &b.g, &e).unwrap();
            equivariant &= b.c.value_on(&b.q, &b.g, &moved).unwrap() == v;
            antisymmetric &= b.c.value_on(&b.q, &b.g, &e.reverse()).unwrap() == -v;
        }
    }
    let basis = cocycle_space(&b.q, 2).unwrap();
    let ops: Vec<_> = hecke.iter().map(|&l| hecke_matrix(&b.q, &b.g, l).unwrap()).collect();
    let mut commute = true;
    for x in &ops {
        for y in &ops {
            for c in &basis {
                commute &= x.apply(&y.apply(c)).values == y.apply(&x.apply(c)).values;
            }
        }
    }
    let ok = mass && harmonic && equivariant && antisymmetric && commute;
    let d = format!(
        "N-={} mass {} = {} ({}), betti {}, harmonic {harmonic}, antisymmetric {antisymmetric}, equivariant {equivariant}, T_l commute for l in {hecke:?}: {commute}",
        b.audit.n_minus, g.mass, g.mass_formula, if mass { "equal" } else { "DIFFER" }, basis.len()
    );
    (ok, d)
}

fn structure_suite() -> Line {
    let b1 = build(&cfg(I1)).unwrap();
    let (ok1, d1) = structure(&b1, &[2, 5, 11, 13]);
    // a larger quotient, with a Hecke module of dimension above one
    let b2 = build(&cfg("curve = 1 1 0 -4 -5\nd = -15\np = 3\n")).unwrap();
    let (ok2, d2) = structure(&b2, &[2, 5, 7]);
    line("C2 structure suite", ok1 && ok2 && b2.graph.betti > 1, format!("{d1}; {d2}"))
}

fn measure_suite(level: usize) -> Line {
    let b = build(&cfg(I1)).unwrap();
    let m = Measure::new(&b.q, &b.g, &b.c);
    let mut sums_vanish = true;
    for lv in 1..=level {
        sums_vanish &= total_mass(&m, &m.covering(lv).unwrap()).is_zero();
    }
    let mut invariant = true;
    let cov = m.covering(2).unwrap();
    for (i, gl) in b.q.children.iter().flat_map(|c| c[0].iter().chain(&c[1])).take(30).enumerate() {
        let piece = &cov[i % cov.len()];
        let moved = b.g.act_edge(&gl.gamma, &piece.edge).unwrap();
        invariant &= b.g.in_gamma(&gl.gamma) && m.mass(&moved).unwrap() == m.piece_mass(piece);
    }
    // Riemann sums against the moment integral of log((x - z)/(x - zbar))
    let prime = b.g.prime().clone();
    let ext = QuadExt::ramified(&prime, -120).unwrap();
    let prec = 16;
    let mom = Moments::compute(&b.q, &b.g, &b.c, prec, 20).unwrap();
    let z = QuadPadic::new(&ext, Padic::from_int(&prime, 1, 30), Padic::from_int(&prime, 1, 30));
    let zb = z.conj();
    let log = anticyclo_core::padic::BranchedLog::iwasawa(&prime);
    let exact = m.coleman_integral(&mom, &zb, &z, &log).unwrap();
    let phi = |x: Option<&BigRational>| {
        let Some(x) = x else { return Ok(QuadPadic::zero(&ext, 30)) };
        let xp = QuadPadic::from_padic(&ext, Padic::from_rational(&prime, x, 30)?);
        log.log_quad(&xp.sub(&z).div(&xp.sub(&zb))?)
    };
    let mut worst_c = 0;
    for lv in 3..=level {
        let v = m.riemann_sum(lv, phi).unwrap().sub(&exact).vale().unwrap_or(i64::MAX);
        worst_c = worst_c.max(lv as i64 - v / ext.e());
    }
    let stable = worst_c <= 2;
    line(
        "C3 measure suite",
        sums_vanish && invariant && stable,
        format!("level sums vanish to level {level}: {sums_vanish}; invariance spot checks: {invariant}; Riemann sums within p^-(m-c), c = {worst_c}"),
    )
}

/// The pieces of the computation the L-function criteria need.
fn with_lfunction<T>(text: &str, mut f: impl FnMut(&LFunction, &InstanceConfig) -> T) -> T {
    let c = cfg(text);
    let b = build(&c).unwrap();
    let field = build_field(c.d, c.p).unwrap();
    let delta = delta_group(&field);
    let sys = EmbeddingSystem::build(&field, &delta, &b.q, &b.g).unwrap();
    let mom = Moments::compute(&b.q, &b.g, &b.c, c.prec, c.degree).unwrap();
    let tate = tate_period(&b.curve, c.p, c.prec).unwrap();
    let lf = LFunction::new(Measure::new(&b.q, &b.g, &b.c), &mom, &sys, tate.log.clone()).unwrap();
    f(&lf, &c)
}

fn central_vanishing() -> Vec<Line> {
    let mut ok = true;
    let mut d = String::new();
    for (name, text) in [("I1", I1), ("I2", I2), ("I3", I3)] {
        with_lfunction(text, |lf, c| {
            let e = lf.ext.e();
            for i in 0..lf.partials.len() {
                let v = lf.partial_at_center(i).unwrap();
                let numeric = v.numeric.vale().map_or(true, |x| x >= e * (c.prec - SLACK));
                ok &= v.exact.is_zero() && numeric;
                let _ = write!(d, "{name} Psi_{i}: exact {}, numeric {}; ", v.exact, if numeric { "0 within certificate" } else { "NONZERO" });
            }
        });
    }
    let mut lines = vec![line("C4 central vanishing (split instances)", ok, d)];
    let nonsplit = with_lfunction(I4, |lf, _| lf.partial_at_center(0).unwrap().exact);
    lines.push(Line {
        name: "C4 central vanishing (non-split 21a1, p=7)",
        pass: nonsplit.is_zero(),
        known: true,
        detail: format!("L(Psi_0, 1) = {nonsplit}; the measure is odd under the uniformizer and the sign is +1"),
    });
    lines
}

fn two_routes() -> Vec<Line> {
    let mut literal = true;
    let mut corrected = true;
    let mut fd_ok = true;
    let mut dl = String::new();
    let mut dc = String::new();
    for (name, text) in [("I1", I1), ("I2", I2), ("I3", I3)] {
        with_lfunction(text, |lf, c| {
            let e = lf.ext.e();
            // the central difference is off by O(h^2), so h = p^t with 3t >= n - c
            let t = (c.prec - SLACK + 2) / 3;
            for chi in characters(&lf.sys.delta) {
                let der = lf.derivative(&chi).unwrap();
                let (lit, cor) = der.agreement();
                let need = e * (c.prec - SLACK);
                literal &= lit >= need;
                corrected &= cor >= need;
                let ratio = match (der.route_b.eval(), der.route_a.eval()) {
                    (Some(b), Some(a)) if !a.is_zero() => {
                        let r = b.div(&a).unwrap();
                        rational_recognize(r.a(), &BigInt::from(100)).map_or("?".into(), |q| q.to_string())
                    }
                    (_, Some(a)) if a.is_zero() => "undefined, both vanish".into(),
                    _ => "?".into(),
                };
                let _ = write!(dl, "{name} chi{:?}: {lit} digits, B/A = {ratio}; ", chi.exps);
                let fd = lf.central_difference(&chi, t).unwrap();
                let dist = fd.distance(&der.route_a);
                fd_ok &= dist >= e * (c.prec - t - SLACK);
                let _ = write!(dc, "{name} chi{:?}: {} digits, finite difference at p^{t} {dist} digits; ", chi.exps, digits(cor));
            }
        });
    }
    vec![
        Line { name: "C5 two routes (literal factor 2)", pass: literal, known: true, detail: dl },
        line("C5 two routes (corrected) and finite difference", corrected && fd_ok, dc),
    ]
}

fn norm_identity() -> Line {
    let mut ok = true;
    let mut d = String::new();
    for (name, text) in [("I2", I2), ("I3", I3), ("I4", I4)] {
        let r = run(&cfg(text)).unwrap();
        let prec = cfg(text).prec;
        for n in &r.norms {
            // agreement counts uniformizer digits of the ramified K_p
            let good = n.agreement >= 2 * (prec - SLACK) && n.norm_exponent.map_or(false, |(k, v)| k == 0 && v >= prec - SLACK);
            ok &= good;
            let _ = write!(d, "{name} ({}) J.J_w = J^(1+a_p) to {} digits, N(J) = q^{}; ", if r.split { "split" } else { "non-split" }, digits(n.agreement), n.norm_exponent.map_or("?".into(), |(k, v)| format!("{k} (1 + O(p^{v}))")));
        }
    }
    line("C6 norm identity", ok, d)
}

fn main_formula() -> Line {
    let mut ok = true;
    let mut d = String::new();
    for (name, text) in [("35a1 p=7 D=-7", I2), ("21a1 p=3 D=-15", I3)] {
        let c = cfg(text);
        let r = run(&c).unwrap();
        for ch in &r.characters {
            let forced = ch.sign.w == -1;
            let pt = ch.point.as_ref().unwrap();
            let digits = pt.ratio.as_ref().map_or(0, |x| x.prec());
            let small = pt.recognized.as_ref().map_or(false, |q| q.numer().abs() <= BigInt::from(c.height) && q.denom() <= &BigInt::from(c.height));
            ok &= forced && small && c.prec >= 20;
            let rec = pt.recognized.as_ref().map_or("none".into(), |q| q.to_string());
            let unit = pt.recognized.as_ref().map_or(false, |q| q.numer().abs() == *q.denom());
            let _ = write!(d, "{name}: sign {}, ratio recognized as {rec} from {digits} digits ({}); ", ch.sign.w, if unit { "equal up to sign" } else { "residual rational factor" });
        }
    }
    line("C7 derivative against the point side", ok, d)
}

fn determinism() -> Line {
    let dir = std::env::temp_dir().join(format!("anticyclo-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let mut c = cfg(I3);
    let plain = [run(&c).unwrap().render(), run(&c).unwrap().render()];
    c.cache = Some(dir.clone());
    let cold = run(&c).unwrap();
    let warm = run(&c).unwrap();
    let _ = std::fs::remove_dir_all(&dir);
    let ok = plain[0] == plain[1] && cold.render() == warm.render() && cold.render() == plain[0] && !cold.from_cache && warm.from_cache;
    line(
        "C8 determinism and cache",
        ok,
        format!("repeat identical: {}; cold (cache miss: {}) and warm (cache hit: {}) identical: {}", plain[0] == plain[1], !cold.from_cache, warm.from_cache, cold.render() == warm.render()),
    )
}

fn report(lines: &[Line]) {
    for l in lines {
        let tag = match (l.pass, l.known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("{tag:12} {}: {}", l.name, l.detail);
    }
    let broken: Vec<&str> = lines.iter().filter(|l| !l.pass && !l.known).map(|l| l.name).collect();
    if !broken.is_empty() {
        eprintln!("unexpected failures: {broken:?}");
        std::process::exit(1);
    }
}

fn main() {
    let mut lines = vec![hypothesis_gate(), structure_suite(), measure_suite(6)];
    lines.extend(central_vanishing());
    lines.extend(two_routes());
    lines.push(norm_identity());
    lines.push(main_formula());
    lines.push(determinism());
    report(&lines);
}
