use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anticyclo_core::error::Error;
use anticyclo_core::pipeline::{self, fmt_quad, InstanceConfig, LValueReport};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "anticyclo", version, about = "Anticyclotomic p-adic L-functions of elliptic curves over Q")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Audit the hypotheses on (N, p, D).
    Check(Instance),
    /// Build the quotient graph and the eigencocycle, filling the cache.
    Build(Instance),
    /// Compute central values and the derivative for each character.
    Lp(Output),
    /// Check the norm identity and compare with the supplied points.
    Verify(Output),
    /// Print the full report.
    Report(Output),
}

#[derive(Args)]
struct Instance {
    /// Configuration file of `key = value` lines.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Weierstrass coefficients, "a1 a2 a3 a4 a6".
    #[arg(long, allow_hyphen_values = true)]
    curve: Option<String>,
    /// Trace overrides, "l:a_l l:a_l ...".
    #[arg(long, allow_hyphen_values = true)]
    ap: Option<String>,
    #[arg(short = 'd', long, allow_hyphen_values = true)]
    disc: Option<i64>,
    #[arg(short, long)]
    p: Option<u64>,
    #[arg(long)]
    prec: Option<i64>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    level: Option<usize>,
    #[arg(long)]
    hecke_bound: Option<u64>,
    /// "all" or a character index.
    #[arg(long)]
    character: Option<String>,
    /// "twist x y" or "field x0 x1 y0 y1"; may be repeated.
    #[arg(long, allow_hyphen_values = true)]
    point: Vec<String>,
    #[arg(long)]
    height: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory holding the exact artifacts between runs.
    #[arg(long, env = "ANTICYCLO_CACHE")]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    #[command(flatten)]
    instance: Instance,
    /// Also write the full report to this file.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

impl Instance {
    fn load(&self) -> Result<InstanceConfig, Error> {
        let text = match &self.config {
            Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
            None => String::new(),
        };
        let mut o: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                o.push((k.to_string(), v));
            }
        };
        put("curve", self.curve.clone());
        put("ap", self.ap.clone());
        put("d", self.disc.map(|v| v.to_string()));
        put("p", self.p.map(|v| v.to_string()));
        put("prec", self.prec.map(|v| v.to_string()));
        put("degree", self.degree.map(|v| v.to_string()));
        put("level", self.level.map(|v| v.to_string()));
        put("hecke_bound", self.hecke_bound.map(|v| v.to_string()));
        put("character", self.character.clone());
        put("height", self.height.map(|v| v.to_string()));
        put("seed", self.seed.map(|v| v.to_string()));
        put("cache", self.cache.as_ref().map(|v| v.display().to_string()));
        for pt in &self.point {
            put("point", Some(pt.clone()));
        }
        InstanceConfig::parse_with(&text, &o)
    }
}

fn check(inst: &Instance) -> Result<i32, Error> {
    let cfg = inst.load()?;
    let n = pipeline::conductor(&cfg.elliptic_curve())?;
    let a = pipeline::audit(n, cfg.p, cfg.d);
    println!("N = {n}, p = {}, D = {}", cfg.p, cfg.d);
    for (name, ok) in &a.results {
        println!("{name}: {}", if *ok { "pass" } else { "FAIL" });
    }
    match a.first_failure() {
        Some(name) => {
            eprintln!("error: hypothesis violated: {name}");
            Ok(2)
        }
        None => {
            println!("N- = {}, N+ = {}", a.n_minus, a.n_plus);
            Ok(0)
        }
    }
}

fn build(inst: &Instance) -> Result<i32, Error> {
    let cfg = inst.load()?;
    let b = pipeline::build(&cfg)?;
    let g = &b.graph;
    println!("N- = {}, N+ = {}", b.audit.n_minus, b.audit.n_plus);
    println!("vertices = {}, edges = {}, betti = {}", g.vertices, g.edges, g.betti);
    println!("mass = {} (formula {})", g.mass, g.mass_formula);
    let vals: Vec<String> = b.c.values.iter().map(|v| v.to_string()).collect();
    println!("cocycle = {}", vals.join(" "));
    println!("cache = {}", if b.from_cache { "hit" } else if cfg.cache.is_some() { "written" } else { "off" });
    Ok(0)
}

fn computed(out: &Output) -> Result<LValueReport, Error> {
    let cfg = out.instance.load()?;
    let r = pipeline::run(&cfg)?;
    if let Some(path) = &out.out {
        pipeline::write_report(&r, path)?;
    }
    Ok(r)
}

fn certificate_status(r: &LValueReport) -> i32 {
    if r.characters.iter().any(|c| c.certified.is_err()) {
        3
    } else {
        0
    }
}

fn lp(out: &Output) -> Result<i32, Error> {
    let r = computed(out)?;
    println!("reduction = {}, kappa = {}, [H:H_p] = {}", if r.split { "split" } else { "non-split" }, r.kappa, r.index_h_hp);
    for c in &r.characters {
        println!("character {} (order {}): sign {}", c.index, c.order, c.sign.w);
        for (i, (exact, _)) in c.central.iter().enumerate() {
            println!("  L(Psi_{i}, 1) = {exact}");
        }
        if let Some(v) = c.route_a.eval() {
            println!("  L' = {}", fmt_quad(&v));
        }
        match &c.certified {
            Ok(d) if *d > i64::MAX / 8 => println!("  certified to all digits"),
            Ok(d) => println!("  certified to {d} digits"),
            Err(e) => println!("  certificate FAILED: {e}"),
        }
    }
    Ok(certificate_status(&r))
}

fn verify(out: &Output) -> Result<i32, Error> {
    let r = computed(out)?;
    for n in &r.norms {
        match n.norm_exponent {
            Some((k, _)) => println!("norm identity {}: N(J) = q^{k}", n.index),
            None => println!("norm identity {}: N(J) not a power of q", n.index),
        }
    }
    for c in &r.characters {
        let Some(pt) = &c.point else {
            println!("character {}: no points supplied", c.index);
            continue;
        };
        let rec = pt.recognized.as_ref().map_or("none".to_string(), |q| q.to_string());
        println!("character {}: ratio recognized as {rec}", c.index);
        if let Some(n) = &pt.note {
            println!("  {n}");
        }
    }
    Ok(certificate_status(&r))
}

fn report(out: &Output) -> Result<i32, Error> {
    let r = computed(out)?;
    print!("{}", r.render());
    Ok(certificate_status(&r))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let start = Instant::now();
    let res = match &cli.cmd {
        Cmd::Check(i) => check(i),
        Cmd::Build(i) => build(i),
        Cmd::Lp(o) => lp(o),
        Cmd::Verify(o) => verify(o),
        Cmd::Report(o) => report(o),
    };
    eprintln!("runtime: {:.2?}", start.elapsed());
    let code = match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            pipeline::exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
