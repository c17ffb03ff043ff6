use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use num_rational::BigRational;

use crate::curve::EllipticCurve;
use crate::error::{Error, Result};

/// A global point as supplied by the user.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointInput {
    /// `(x, y)` on the short model of the twist by `D`.
    Twist(BigRational, BigRational),
    /// `x = x0 + x1 sqrt(D)`, `y = y0 + y1 sqrt(D)` on the given model.
    Field([BigRational; 4]),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharacterSelector {
    All,
    Index(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceConfig {
    pub curve: [i64; 5],
    /// Traces of Frobenius overriding point counts.
    pub ap: BTreeMap<u64, i64>,
    pub d: i64,
    pub p: u64,
    pub prec: i64,
    /// Degree of the moment expansions.
    pub degree: usize,
    /// Depth of the exact level-by-level measure checks; by default the
    /// deepest level up to 6 with at most `10^4` covering pieces.
    pub level: Option<usize>,
    pub hecke_bound: u64,
    pub character: CharacterSelector,
    pub points: Vec<PointInput>,
    pub height: u64,
    pub cache: Option<PathBuf>,
    pub seed: u64,
}

impl Default for InstanceConfig {
    fn default() -> InstanceConfig {
        InstanceConfig {
            curve: [0; 5],
            ap: BTreeMap::new(),
            d: 0,
            p: 0,
            prec: 20,
            degree: 24,
            level: None,
            hecke_bound: 13,
            character: CharacterSelector::All,
            points: Vec::new(),
            height: 1000,
            cache: None,
            seed: 0,
        }
    }
}

fn parse<T: FromStr>(key: &str, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Config(format!("{key}: cannot parse {s:?}")))
}

fn parse_rat(key: &str, s: &str) -> Result<BigRational> {
    BigRational::from_str(s).map_err(|_| Error::Config(format!("{key}: cannot parse rational {s:?}")))
}

impl InstanceConfig {
    /// One `key = value` per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<InstanceConfig> {
        InstanceConfig::parse_with(text, &[])
    }

    /// Parse `text`, then apply `overrides` on top of it. Overridden
    /// points replace those of the file rather than adding to them.
    pub fn parse_with(text: &str, overrides: &[(String, String)]) -> Result<InstanceConfig> {
        let mut c = InstanceConfig::default();
        let mut seen = std::collections::BTreeSet::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if key != "point" && !seen.insert(key.to_string()) {
                return Err(Error::Config(format!("line {}: duplicate key {key}", no + 1)));
            }
            c.set(key, value).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("line {}: {m}", no + 1)),
                other => other,
            })?;
        }
        if overrides.iter().any(|(k, _)| k == "point") {
            c.points.clear();
        }
        for (key, value) in overrides {
            c.set(key, value)?;
            seen.insert(key.clone());
        }
        for required in ["curve", "d", "p"] {
            if !seen.contains(required) {
                return Err(Error::Config(format!("missing key {required}")));
            }
        }
        if c.prec < 4 || c.degree < 2 {
            return Err(Error::Config("prec must be at least 4 and degree at least 2".into()));
        }
        Ok(c)
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let c = self;
        let words: Vec<&str> = value.split_whitespace().collect();
        match key {
            "curve" => {
                if words.len() != 5 {
                    return Err(Error::Config("curve: expected a1 a2 a3 a4 a6".into()));
                }
                for (i, w) in words.iter().enumerate() {
                    c.curve[i] = parse(key, w)?;
                }
            }
            "ap" => {
                for w in words {
                    let (l, a) = w.split_once(':').ok_or_else(|| Error::Config(format!("ap: expected l:a_l, got {w}")))?;
                    c.ap.insert(parse(key, l)?, parse(key, a)?);
                }
            }
            "d" => c.d = parse(key, value)?,
            "p" => c.p = parse(key, value)?,
            "prec" => c.prec = parse(key, value)?,
            "degree" => c.degree = parse(key, value)?,
            "level" => c.level = Some(parse(key, value)?),
            "hecke_bound" => c.hecke_bound = parse(key, value)?,
            "height" => c.height = parse(key, value)?,
            "seed" => c.seed = parse(key, value)?,
            "cache" => c.cache = Some(PathBuf::from(value)),
            "character" => {
                c.character = if value == "all" { CharacterSelector::All } else { CharacterSelector::Index(parse(key, value)?) }
            }
            "point" => c.points.push(match words.as_slice() {
                ["twist", x, y] => PointInput::Twist(parse_rat(key, x)?, parse_rat(key, y)?),
                ["field", a, b, e, f] => {
                    PointInput::Field([parse_rat(key, a)?, parse_rat(key, b)?, parse_rat(key, e)?, parse_rat(key, f)?])
                }
                _ => return Err(Error::Config(format!("point: expected `twist x y` or `field x0 x1 y0 y1`, got {value:?}"))),
            }),
            _ => return Err(Error::Config(format!("unknown key {key}"))),
        }
        Ok(())
    }

    /// The level actually checked.
    pub fn check_level(&self) -> usize {
        self.level.unwrap_or_else(|| {
            let pieces = |m: u32| (self.p + 1) * self.p.pow(m - 1);
            (1..=6).take_while(|&m| pieces(m) <= 10_000).last().unwrap_or(1) as usize
        })
    }

    pub fn elliptic_curve(&self) -> EllipticCurve {
        EllipticCurve::new(self.curve)
    }

    /// `a_l` for primes `l <= bound`, from the override table when given.
    pub fn traces(&self, bound: u64) -> BTreeMap<u64, i64> {
        let e = self.elliptic_curve();
        (2..=bound)
            .filter(|&l| crate::padic::is_prime(l))
            .map(|l| (l, self.ap.get(&l).copied().unwrap_or_else(|| e.a_ell(l))))
            .collect()
    }

    /// The canonical text of every setting that affects the results. The
    /// cache directory is left out.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let c = &self.curve;
        s += &format!("curve = {} {} {} {} {}\n", c[0], c[1], c[2], c[3], c[4]);
        if !self.ap.is_empty() {
            let parts: Vec<String> = self.ap.iter().map(|(l, a)| format!("{l}:{a}")).collect();
            s += &format!("ap = {}\n", parts.join(" "));
        }
        s += &format!("d = {}\np = {}\nprec = {}\ndegree = {}\n", self.d, self.p, self.prec, self.degree);
        if let Some(level) = self.level {
            s += &format!("level = {level}\n");
        }
        s += &format!("hecke_bound = {}\nheight = {}\nseed = {}\n", self.hecke_bound, self.height, self.seed);
        s += &match self.character {
            CharacterSelector::All => "character = all\n".to_string(),
            CharacterSelector::Index(i) => format!("character = {i}\n"),
        };
        for pt in &self.points {
            s += &match pt {
                PointInput::Twist(x, y) => format!("point = twist {x} {y}\n"),
                PointInput::Field([a, b, e, f]) => format!("point = field {a} {b} {e} {f}\n"),
            };
        }
        s
    }
}
