//! Text encodings of maps: the `prefix=[..] tail(..)` form, its JSON
//! mirror, and short generator spellings such as `beta:4`.

use crate::error::{Error, Result};
use crate::generators::{
    alpha_family, alpha_gen, beta_gen, collapse_witness, delta_gen, lambda_gen, xi, PeriodicSet,
};
use crate::map::FenceMap;

/// Canonical DSL rendering of the normal form of `m`.
pub fn render_map(m: &FenceMap) -> String {
    let m = m.normalize();
    format!(
        "prefix=[{}] tail(start={}, period={}, drift={}, base=[{}])",
        join(m.prefix()),
        m.tail_start(),
        m.tail_period(),
        m.tail_drift(),
        join(m.tail_base())
    )
}

/// JSON mirror of the normal form of `m`.
pub fn render_json(m: &FenceMap) -> String {
    serde_json::to_string(&m.normalize()).expect("maps serialize")
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

/// Parses the DSL, the JSON mirror, or a generator spelling, returning the
/// canonical map.
pub fn parse_map(text: &str) -> Result<FenceMap> {
    let t = text.trim();
    let lead = text.len() - text.trim_start().len();
    if t.starts_with('{') {
        return serde_json::from_str::<FenceMap>(t)
            .map(|m| m.normalize())
            .map_err(|e| Error::Parse { pos: lead + e.column().saturating_sub(1), msg: e.to_string() });
    }
    if t.starts_with("prefix") {
        let mut p = Parser { src: text, pos: lead };
        let m = p.dsl()?;
        p.ws();
        if p.pos != text.len() {
            return p.fail("trailing input");
        }
        return Ok(m.normalize());
    }
    spelling(t).map_err(|e| match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + lead, msg },
        other => other,
    })
}

fn spelling(t: &str) -> Result<FenceMap> {
    let (name, arg) = match t.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (t, None),
    };
    let index = |a: Option<&str>| -> Result<u64> {
        let a = a.ok_or_else(|| Error::Parse { pos: name.len(), msg: format!("{name} needs :k") })?;
        match a.trim().parse::<u64>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(Error::Parse { pos: name.len() + 1, msg: format!("bad index {a:?}") }),
        }
    };
    match name {
        "xi" => no_arg(arg, xi()),
        "id" | "identity" => no_arg(arg, FenceMap::identity()),
        "witness" => no_arg(arg, collapse_witness()),
        "alpha" => Ok(alpha_gen(index(arg)?)),
        "beta" => Ok(beta_gen(index(arg)?)),
        "lambda" => lambda_gen(index(arg)?),
        "delta" => Ok(delta_gen(index(arg)?)),
        "family" => {
            let a = arg.ok_or_else(|| Error::Parse { pos: 6, msg: "family needs :[..]".into() })?;
            Ok(alpha_family(&parse_periodic_set(a, name.len() + 1)?))
        }
        _ => Err(Error::Parse { pos: 0, msg: format!("unknown map spelling {t:?}") }),
    }
}

fn no_arg(arg: Option<&str>, m: FenceMap) -> Result<FenceMap> {
    match arg {
        None => Ok(m),
        Some(_) => Err(Error::Parse { pos: 0, msg: "this generator takes no index".into() }),
    }
}

/// `[members;period;pattern]`, e.g. `[1,4;2;01]`: members listed explicitly,
/// then a 0/1 pattern of the given length repeating from one past the
/// largest member.
pub fn parse_periodic_set(s: &str, offset: usize) -> Result<PeriodicSet> {
    let err = |msg: &str| Error::Parse { pos: offset, msg: msg.to_string() };
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| err("expected [members;period;pattern]"))?;
    let parts: Vec<&str> = inner.split(';').collect();
    if parts.len() != 3 {
        return Err(err("expected three ';'-separated fields"));
    }
    let members = if parts[0].trim().is_empty() {
        vec![]
    } else {
        parts[0]
            .split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| err("bad member")))
            .collect::<Result<Vec<_>>>()?
    };
    let period: usize = parts[1].trim().parse().map_err(|_| err("bad period"))?;
    let pattern = parts[2]
        .trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(err("pattern must be 0/1")),
        })
        .collect::<Result<Vec<_>>>()?;
    if pattern.len() != period || period == 0 {
        return Err(err("pattern length must equal the positive period"));
    }
    PeriodicSet::new(members, pattern).map_err(|_| err("members start at 1"))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn lit(&mut self, s: &str) -> Result<()> {
        self.ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            Ok(())
        } else {
            self.fail(&format!("expected {s:?}"))
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.ws();
        let digits = self.src[self.pos..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.fail("expected an integer");
        }
        let v = self.src[self.pos..self.pos + digits].parse().map_err(|_| Error::Parse {
            pos: self.pos,
            msg: "integer out of range".into(),
        })?;
        self.pos += digits;
        Ok(v)
    }

    fn list(&mut self) -> Result<Vec<u64>> {
        self.lit("[")?;
        let mut out = Vec::new();
        self.ws();
        if self.src[self.pos..].starts_with(']') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            let at = self.pos;
            let v = self.int()?;
            if v == 0 {
                return Err(Error::Parse { pos: at, msg: "values must be at least 1".into() });
            }
            out.push(v);
            self.ws();
            if self.src[self.pos..].starts_with(',') {
                self.pos += 1;
            } else {
                self.lit("]")?;
                return Ok(out);
            }
        }
    }

    fn field(&mut self, name: &str) -> Result<u64> {
        self.lit(name)?;
        self.lit("=")?;
        self.int()
    }

    fn dsl(&mut self) -> Result<FenceMap> {
        self.lit("prefix")?;
        self.lit("=")?;
        let prefix = self.list()?;
        self.lit("tail")?;
        self.lit("(")?;
        let start = self.field("start")?;
        self.lit(",")?;
        let period = self.field("period")?;
        self.lit(",")?;
        let drift = self.field("drift")?;
        self.lit(",")?;
        self.lit("base")?;
        self.lit("=")?;
        let at = self.pos;
        let base = self.list()?;
        self.lit(")")?;
        FenceMap::new(prefix, start, period, drift, base)
            .map_err(|e| Error::Parse { pos: at, msg: e.to_string() })
    }
}
