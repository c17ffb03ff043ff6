//! End-to-end driver: configuration, hypothesis audit, the cached exact
//! stages, the p-adic stages and the text report.

mod cache;
mod config;
mod hypotheses;
mod report;

use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::classfield::{build_field, characters, delta_group, Character};
use crate::curve::EllipticCurve;
use crate::embeddings::EmbeddingSystem;
use crate::error::{Error, Result};
use crate::harmonic::{atkin_lehner_eigenvalue, betti_number, eigencocycle, Cocycle};
use crate::lfunction::{sign, LFunction};
use crate::measure::{total_mass, Measure, Moments};
use crate::padic::{Padic, QuadPadic};
use crate::quaternion::{build_algebra, eichler_order, split_at_p};
use crate::tate::{mult_integral_to_point, norm_identity, point_combination, recognize_quad, tate_period, KElt, KPoint, LocalCurve};
use crate::tree::{build_quotient, eichler_mass, ArithmeticGroup, QuotientGraph};

pub use cache::{cache_key, cache_path, CacheEntry, CACHE_VERSION};
pub use config::{CharacterSelector, InstanceConfig, PointInput};
pub use hypotheses::{audit, check, Audit, BULLETS};
pub use report::{fmt_padic, fmt_quad, CharacterReport, GraphSummary, LValueReport, NormReport, PointReport};

/// Depth to which the quotient exploration may go.
const QUOTIENT_DEPTH: usize = 12;

/// Digits of slack allowed when certifying and recognizing.
pub const SLACK: i64 = 3;

/// Process exit status for an error: 2 for a violated hypothesis, 3 for a
/// precision failure, 4 for a broken internal invariant and 1 for bad
/// configuration or I/O.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::HypothesisViolation(_)
        | Error::UnitObstruction(_)
        | Error::NotFundamental(_)
        | Error::NotRamified { .. }
        | Error::BadDiscriminant(_)
        | Error::LevelNotCoprime(_)
        | Error::NotMultiplicative(_) => 2,
        Error::PrecisionExhausted(_)
        | Error::RouteDisagreement(_)
        | Error::OutsideConvergenceDomain(_)
        | Error::DivisionByIndistinguishableZero
        | Error::UniformizationFailed(_)
        | Error::NonUnitSample => 3,
        Error::Config(_) | Error::VersionMismatch { .. } | Error::CorruptCache(_) => 1,
        _ => 4,
    }
}

/// The exact stages: hypothesis audit, quotient graph and eigencocycle.
pub struct Built {
    pub curve: EllipticCurve,
    pub audit: Audit,
    pub g: ArithmeticGroup,
    pub q: QuotientGraph,
    pub c: Cocycle,
    pub graph: GraphSummary,
    pub from_cache: bool,
}

pub fn conductor(curve: &EllipticCurve) -> Result<u64> {
    curve
        .semistable_conductor()
        .map_err(|_| Error::HypothesisViolation("p exactly divides N".into()))
}

pub fn build(cfg: &InstanceConfig) -> Result<Built> {
    let curve = cfg.elliptic_curve();
    let n = conductor(&curve)?;
    let audit = check(n, cfg.p, cfg.d)?;
    let alg = build_algebra(audit.n_minus)?;
    let order = eichler_order(&alg, audit.n_plus, cfg.p)?;
    let split = split_at_p(&order, cfg.prec + 10)?;
    let g = ArithmeticGroup::new(order, split)?;
    let q = build_quotient(&g, QUOTIENT_DEPTH)?;
    let graph = GraphSummary {
        vertices: q.vertices.len(),
        edges: q.edges.len(),
        mass: q.mass(0),
        mass_formula: eichler_mass(audit.n_minus, audit.n_plus),
        betti: betti_number(&q),
    };
    let traces = cfg.traces(cfg.hecke_bound);
    let key = cache_key(audit.n_minus, audit.n_plus, cfg.p, &traces, cfg.hecke_bound);
    let cached = match &cfg.cache {
        Some(dir) => CacheEntry::load(dir, &key)?,
        None => None,
    };
    let (c, from_cache) = match cached {
        Some(entry) => {
            if entry.vertices != graph.vertices || entry.edges != graph.edges || entry.mass != graph.mass {
                return Err(Error::CorruptCache("cached graph summary differs from the rebuilt graph".into()));
            }
            let c = Cocycle { values: entry.cocycle };
            if c.values.len() != graph.edges || !c.is_harmonic(&q) {
                return Err(Error::CorruptCache("cached cocycle is not harmonic on the rebuilt graph".into()));
            }
            (c, true)
        }
        None => {
            let c = eigencocycle(&q, &g, &traces, cfg.hecke_bound)?;
            if let Some(dir) = &cfg.cache {
                let entry = CacheEntry { key, vertices: graph.vertices, edges: graph.edges, mass: graph.mass.clone(), cocycle: c.values.clone() };
                entry.save(dir)?;
            }
            (c, false)
        }
    };
    Ok(Built { curve, audit, g, q, c, graph, from_cache })
}

fn local_points(cfg: &InstanceConfig, curve: &EllipticCurve) -> Result<Vec<KPoint>> {
    cfg.points
        .iter()
        .map(|pt| match pt {
            PointInput::Twist(x, y) => KPoint::from_twist(curve, cfg.d, x.clone(), y.clone()),
            PointInput::Field([x0, x1, y0, y1]) => {
                let p = KPoint {
                    d: cfg.d,
                    x: KElt { r: x0.clone(), s: x1.clone() },
                    y: KElt { r: y0.clone(), s: y1.clone() },
                };
                if !p.is_on(curve) {
                    return Err(Error::Config("supplied point is not on the curve".into()));
                }
                Ok(p)
            }
        })
        .collect()
}

fn selected(cfg: &InstanceConfig, all: Vec<Character>) -> Result<Vec<(usize, Character)>> {
    match cfg.character {
        CharacterSelector::All => Ok(all.into_iter().enumerate().collect()),
        CharacterSelector::Index(i) => {
            let n = all.len();
            let chi = all.into_iter().nth(i).ok_or_else(|| Error::Config(format!("character {i} out of range (0..{n})")))?;
            Ok(vec![(i, chi)])
        }
    }
}

/// The whole computation, from the configuration to the report.
pub fn run(cfg: &InstanceConfig) -> Result<LValueReport> {
    let b = build(cfg)?;
    let m = Measure::new(&b.q, &b.g, &b.c);
    for lv in 1..=cfg.check_level() {
        if !total_mass(&m, &m.covering(lv)?).is_zero() {
            return Err(Error::Invariant(format!("measure of P^1 is not zero at level {lv}")));
        }
    }
    let eps = atkin_lehner_eigenvalue(&b.q, &b.g, &b.c)?;
    let field = build_field(cfg.d, cfg.p)?;
    let delta = delta_group(&field);
    let sys = EmbeddingSystem::build(&field, &delta, &b.q, &b.g)?;
    let mom = Moments::compute(&b.q, &b.g, &b.c, cfg.prec, cfg.degree)?;
    let tate = tate_period(&b.curve, cfg.p, cfg.prec)?;
    let lf = LFunction::new(m, &mom, &sys, tate.log.clone())?;
    let index_h_hp = field.class_number() / delta.order();
    let e = lf.ext.e();

    let norms = (0..lf.partials.len())
        .map(|i| {
            let n = norm_identity(&lf, i, &tate)?;
            Ok(NormReport { index: i, agreement: n.agreement, norm_exponent: n.norm_exponent })
        })
        .collect::<Result<Vec<_>>>()?;

    let points = local_points(cfg, &b.curve)?;
    let lc = (!points.is_empty()).then(|| LocalCurve::new(&b.curve, &lf.ext, cfg.prec));
    let height = BigInt::from(cfg.height);

    let mut reports = Vec::new();
    for (index, chi) in selected(cfg, characters(&delta))? {
        let sg = sign(cfg.p, &b.audit.n_minus_primes(), tate.a_p, 1);
        let central = (0..lf.partials.len())
            .map(|i| lf.partial_at_center(i).map(|v| (v.exact, v.numeric)))
            .collect::<Result<Vec<_>>>()?;
        let d = lf.derivative(&chi)?;
        let certified = lf.certify(&d, SLACK * e).map_err(|err| err.to_string());
        let point = match &lc {
            None => None,
            Some(lc) => Some(point_report(&lf, &tate, lc, &points, &chi, &d.route_a, index_h_hp, &height)?),
        };
        reports.push(CharacterReport {
            index,
            exps: chi.exps.clone(),
            order: chi.m,
            sign: sg,
            central,
            agreement: d.agreement(),
            route_a: d.route_a,
            route_b: d.route_b,
            route_b_corrected: d.route_b_corrected,
            certified,
            point,
        });
    }

    Ok(LValueReport {
        config: cfg.canonical(),
        audit: b.audit.results.clone(),
        n: b.audit.n,
        n_minus: b.audit.n_minus,
        n_plus: b.audit.n_plus,
        graph: b.graph.clone(),
        level_checked: cfg.check_level(),
        cocycle: b.c.values.clone(),
        atkin_lehner: eps,
        q: tate.q.clone(),
        split: tate.split,
        embeddings: sys.list.len(),
        orbits: sys.orbit_count(),
        kappa: lf.partials[0].domain.kappa,
        index_h_hp,
        norms,
        characters: reports,
        from_cache: b.from_cache,
    })
}

#[allow(clippy::too_many_arguments)]
fn point_report(
    lf: &LFunction,
    tate: &crate::tate::TateCurve,
    lc: &LocalCurve,
    points: &[KPoint],
    chi: &Character,
    route_a: &crate::lfunction::ChiSum,
    index_h_hp: usize,
    height: &BigInt,
) -> Result<PointReport> {
    if !tate.split {
        let (_, mi) = mult_integral_to_point(lf, chi, tate)?;
        return Ok(PointReport { combination: mi, ratio: None, recognized: None, note: Some("non-split reduction: no point-side logarithm".into()) });
    }
    let side = match point_combination(tate, lc, points, chi) {
        Ok(s) => s,
        Err(Error::OrbitIncomplete(msg)) => {
            let (_, mi) = mult_integral_to_point(lf, chi, tate)?;
            return Ok(PointReport { combination: mi, ratio: None, recognized: None, note: Some(format!("orbit incomplete: {msg}")) });
        }
        Err(err) => return Err(err),
    };
    let (Some(lhs), Some(rhs)) = (route_a.eval(), side.combination.eval()) else {
        return Ok(PointReport { combination: side.combination, ratio: None, recognized: None, note: Some("character values outside Q_p".into()) });
    };
    if rhs.is_zero() {
        return Ok(PointReport { combination: side.combination, ratio: None, recognized: None, note: Some("point side vanishes".into()) });
    }
    let factor = Padic::from_ratio(lf.ext.prime(), index_h_hp as i64, 2, lf.mom.prec)?;
    let ratio = lhs.mul(&QuadPadic::from_padic(&lf.ext, factor)).div(&rhs)?;
    let recognized = recognize_quad(&ratio, height, SLACK);
    let note = match &recognized {
        Some(r) if r.numer().magnitude() == r.denom().magnitude() => Some("equal up to sign".into()),
        Some(_) => Some("small rational multiple: the point is not the Heegner combination".into()),
        None => Some("no rational of the given height".into()),
    };
    Ok(PointReport { combination: side.combination, ratio: Some(ratio), recognized, note })
}

/// Write the report text next to a cache, if one is configured.
pub fn write_report(report: &LValueReport, path: &Path) -> Result<()> {
    std::fs::write(path, report.render()).map_err(|e| Error::Config(format!("report write: {e}")))
}
