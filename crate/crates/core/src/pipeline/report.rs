use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::lfunction::{ChiSum, SignReport};
use crate::padic::{ExtKind, Padic, QuadPadic, EXACT};

/// `(p, Qp, valuation, [digits], precision)`, least significant digit first.
pub fn fmt_padic(x: &Padic) -> String {
    let p = x.p();
    let prec = if x.prec() >= EXACT { "exact".to_string() } else { x.prec().to_string() };
    if x.is_zero() {
        return format!("({p}, Q{p}, zero, [], {prec})");
    }
    let mut u = x.unit().clone();
    let mut digits = Vec::new();
    let rel = if x.prec() >= EXACT { i64::MAX } else { x.rel_prec() };
    let big = x.prime().big().clone();
    let mut k = 0;
    while k < rel.min(4096) && !(rel == i64::MAX && u == num_bigint::BigInt::from(0)) {
        let (q, r) = u.div_rem(&big);
        digits.push(r.to_u64().unwrap().to_string());
        u = q;
        k += 1;
    }
    format!("({p}, Q{p}, {}, [{}], {prec})", x.valuation().unwrap(), digits.join(" "))
}

pub fn fmt_quad(x: &QuadPadic) -> String {
    let ext = x.ext();
    let tag = match ext.kind() {
        ExtKind::Ramified => format!("Q{}(sqrt {})", ext.prime().p(), ext.d()),
        ExtKind::Unramified => format!("Q{}^2", ext.prime().p()),
    };
    format!("{tag} {{ {} + {} t }}", fmt_padic(x.a()), fmt_padic(x.b()))
}

pub fn fmt_chi_sum(s: &ChiSum) -> String {
    let parts: Vec<String> = s.coeffs.iter().enumerate().map(|(j, c)| format!("zeta{}^{j}: {}", s.m, fmt_quad(c))).collect();
    parts.join("; ")
}

fn fmt_digits(d: i64) -> String {
    if d >= i64::MAX / 8 {
        "all".into()
    } else {
        d.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub mass: BigRational,
    pub mass_formula: BigRational,
    pub betti: usize,
}

#[derive(Clone, Debug)]
pub struct PointReport {
    pub combination: ChiSum,
    /// `L'(chi) [H:H_p] / 2` divided by the point side.
    pub ratio: Option<QuadPadic>,
    pub recognized: Option<BigRational>,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct CharacterReport {
    pub index: usize,
    pub exps: Vec<u32>,
    pub order: u32,
    pub sign: SignReport,
    /// Exact and numeric `L_p(E/K, Psi_i, 1)` for each `i`.
    pub central: Vec<(BigRational, QuadPadic)>,
    pub route_a: ChiSum,
    pub route_b: ChiSum,
    pub route_b_corrected: ChiSum,
    pub agreement: (i64, i64),
    pub certified: Result<i64, String>,
    pub point: Option<PointReport>,
}

#[derive(Clone, Debug)]
pub struct NormReport {
    pub index: usize,
    pub agreement: i64,
    pub norm_exponent: Option<(i64, i64)>,
}

#[derive(Clone, Debug)]
pub struct LValueReport {
    pub config: String,
    pub audit: Vec<(&'static str, bool)>,
    pub n: u64,
    pub n_minus: u64,
    pub n_plus: u64,
    pub graph: GraphSummary,
    /// Covering sums were checked to vanish exactly through this level.
    pub level_checked: usize,
    pub cocycle: Vec<BigRational>,
    pub atkin_lehner: BigRational,
    pub q: Padic,
    pub split: bool,
    pub embeddings: usize,
    pub orbits: usize,
    pub kappa: usize,
    pub index_h_hp: usize,
    pub norms: Vec<NormReport>,
    pub characters: Vec<CharacterReport>,
    pub from_cache: bool,
}

impl LValueReport {
    /// The report as line-oriented text. Whether the cocycle came from the
    /// cache is deliberately not part of it.
    pub fn render(&self) -> String {
        let mut s = String::from("anticyclo report v1\n[config]\n");
        s += &self.config;
        s += "[hypotheses]\n";
        for (name, ok) in &self.audit {
            s += &format!("{name}: {}\n", if *ok { "pass" } else { "FAIL" });
        }
        s += &format!("N = {}, N- = {}, N+ = {}\n", self.n, self.n_minus, self.n_plus);
        let g = &self.graph;
        s += "[quotient]\n";
        s += &format!("vertices = {}\nedges = {}\nmass = {}\nmass formula = {}\nbetti = {}\n", g.vertices, g.edges, g.mass, g.mass_formula, g.betti);
        s += "[cocycle]\n";
        let vals: Vec<String> = self.cocycle.iter().map(|v| v.to_string()).collect();
        s += &format!("values = {}\natkin-lehner = {}\n", vals.join(" "), self.atkin_lehner);
        s += &format!("[measure]\ncovering sums vanish through level {}\n", self.level_checked);
        s += "[tate]\n";
        s += &format!("q = {}\nreduction = {}\n", fmt_padic(&self.q), if self.split { "split" } else { "non-split" });
        s += "[embeddings]\n";
        s += &format!("count = {}\norbits = {}\nkappa = {}\n[H:H_p] = {}\n", self.embeddings, self.orbits, self.kappa, self.index_h_hp);
        for n in &self.norms {
            let norm = match n.norm_exponent {
                Some((k, v)) => format!("q^{k} (1 + O(p^{}))", fmt_digits(v)),
                None => "not in q^Z".into(),
            };
            s += &format!("norm identity {}: agreement {} digits, N(J) = {norm}\n", n.index, fmt_digits(n.agreement));
        }
        for c in &self.characters {
            s += &format!("[character {}]\n", c.index);
            let exps: Vec<String> = c.exps.iter().map(|e| e.to_string()).collect();
            s += &format!("order = {}\nexponents = {}\n", c.order, exps.join(" "));
            let sigma: Vec<String> = c.sign.sigma.iter().map(|l| l.to_string()).collect();
            s += &format!("sigma = {}\nsign = {}\n", sigma.join(" "), c.sign.w);
            for (i, (exact, num)) in c.central.iter().enumerate() {
                s += &format!("L(Psi_{i}, 1) = {exact} exactly, {} numerically\n", fmt_quad(num));
            }
            s += &format!("route A = {}\n", fmt_chi_sum(&c.route_a));
            s += &format!("route B = {}\n", fmt_chi_sum(&c.route_b));
            s += &format!("route B corrected = {}\n", fmt_chi_sum(&c.route_b_corrected));
            s += &format!("agreement = {} (literal), {} (corrected)\n", fmt_digits(c.agreement.0), fmt_digits(c.agreement.1));
            s += &match &c.certified {
                Ok(d) => format!("certificate = {} digits\n", fmt_digits(*d)),
                Err(e) => format!("certificate = FAILED {e}\n"),
            };
            if let Some(pt) = &c.point {
                s += &format!("point side = {}\n", fmt_chi_sum(&pt.combination));
                if let Some(r) = &pt.ratio {
                    s += &format!("ratio = {}\n", fmt_quad(r));
                }
                s += &match &pt.recognized {
                    Some(r) => format!("recognized = {r}\n"),
                    None => "recognized = none\n".into(),
                };
                if let Some(n) = &pt.note {
                    s += &format!("note = {n}\n");
                }
            }
        }
        s
    }
}
