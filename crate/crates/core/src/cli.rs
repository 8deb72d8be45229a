//! The `fence` command line.
//!
//! Exit codes: 0 success or true, 1 false or failed verification, 2 usage
//! or precondition error, 3 disagreement with the brute-force oracle.
//! [`run`] does all the work and returns the exit code with the captured
//! output, so the binary is a thin wrapper and tests can call it directly.

use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dsl::{parse_map, render_map};
use crate::factor::{
    delta_word, explicit, g_word, h_word, k_split, theta_lambda_factor, verify_word, GeneratorWord, TargetClass,
    SCHEMA_VERSION,
};
use crate::generators::{delta_gen, ClassTag};
use crate::invariants::{classify, Analysis, BlockStream, BlockTail, KClass};
use crate::oracle;
use crate::{Error, FenceMap};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "fence", version, about = "Exact computation with fence-preserving maps of ℕ")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// Class parameter n (≥ 1).
    #[arg(long, global = true)]
    n: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Emit::Text)]
    emit: Emit,

    /// Cross-check the structural answer against brute force; exit 3 on disagreement.
    #[arg(long, global = true)]
    oracle: bool,

    /// Brute-force horizon, and the display length for tables.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    horizon: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Is the map fence-preserving?
    Check { map: String },
    /// Values at the given points, or α(1..horizon) when none are given.
    Eval { map: String, points: Vec<u64> },
    /// Left-to-right composition: `compose a b` is x ↦ b(a(x)).
    Compose {
        #[arg(required = true, num_args = 2..)]
        maps: Vec<String>,
    },
    /// Invariants and class memberships.
    Classify { map: String },
    /// Factor into a generator word.
    Factor {
        map: String,
        #[arg(long, value_enum)]
        scheme: Scheme,
    },
    /// Check a JSON generator word against a target map.
    Verify {
        /// Word file; `-` or absent reads stdin.
        word: Option<String>,
        #[arg(long)]
        target: String,
    },
    /// Canonical form of a map expression or generator spelling.
    Gen { spelling: String },
    /// The constancy blocks of a map.
    Blocks { map: String },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Emit {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Scheme {
    ThetaLambda,
    H,
    G,
    Delta,
    Ksplit,
}

/// Exit code plus captured streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn out(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn err(code: i32, stderr: String) -> Self {
        Outcome { code, stdout: String::new(), stderr }
    }
}

/// Lazily read stdin, shared by every `-` operand.
struct Input<'a> {
    stdin: &'a mut dyn Read,
    cached: Option<String>,
}

impl Input<'_> {
    fn text(&mut self, arg: &str) -> Result<String, Outcome> {
        if arg != "-" {
            return Ok(arg.to_string());
        }
        if self.cached.is_none() {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Outcome::err(EXIT_USAGE, format!("cannot read stdin: {e}\n")))?;
            self.cached = Some(s);
        }
        Ok(self.cached.clone().unwrap_or_default())
    }

    fn map(&mut self, arg: &str) -> Result<FenceMap, Outcome> {
        let t = self.text(arg)?;
        parse_map(&t).map_err(fail)
    }
}

fn fail(e: Error) -> Outcome {
    let code = match e {
        Error::Internal(_) => EXIT_FALSE,
        _ => EXIT_USAGE,
    };
    Outcome::err(code, format!("error: {e}\n"))
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { Outcome::out(code, text) } else { Outcome::err(code, text) };
        }
    };
    let mut input = Input { stdin, cached: None };
    execute(&cli, &mut input).unwrap_or_else(|o| o)
}

fn emit_json(v: Value) -> String {
    let mut obj = json!({ "schema_version": SCHEMA_VERSION });
    if let (Some(o), Value::Object(extra)) = (obj.as_object_mut(), v) {
        o.extend(extra);
    }
    format!("{}\n", serde_json::to_string_pretty(&obj).expect("json values serialize"))
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn horizon(cli: &Cli, maps: &[&FenceMap]) -> u64 {
    let auto = oracle::horizon_for(maps);
    cli.horizon.map_or(auto, |h| h.max(auto))
}

fn need_n(cli: &Cli) -> Result<u64, Outcome> {
    match cli.n {
        Some(0) => Err(Outcome::err(EXIT_USAGE, "error: --n starts at 1\n".into())),
        Some(n) => Ok(n),
        None => Err(Outcome::err(EXIT_USAGE, "error: this command needs --n\n".into())),
    }
}

/// The structural block stream agrees with brute force up to `h`.
fn blocks_agree(m: &FenceMap, h: u64) -> bool {
    let brute = oracle::brute_blocks(m, h);
    let bs = BlockStream::of(m);
    brute.iter().zip(bs.iter()).all(|(b, s)| {
        b.start == s.start
            && b.value == s.value
            && if b.truncated { s.len.is_none_or(|l| l >= b.len) } else { s.len == Some(b.len) }
    }) && bs.iter().take_while(|s| s.start <= h).count() == brute.len()
}

fn execute(cli: &Cli, input: &mut Input<'_>) -> Result<Outcome, Outcome> {
    let json = cli.emit == Emit::Json;
    match &cli.verb {
        Verb::Check { map } => {
            let m = input.map(map)?;
            let ok = m.is_fence_preserving();
            if cli.oracle && oracle::brute_preserving(&m, horizon(cli, &[&m])) != ok {
                return Err(Outcome::err(EXIT_ORACLE, "oracle disagrees on fence preservation\n".into()));
            }
            let text = if json {
                emit_json(json!({ "map": render_map(&m), "fence_preserving": ok }))
            } else {
                format!("fence-preserving: {ok}\n")
            };
            Ok(Outcome::out(if ok { EXIT_OK } else { EXIT_FALSE }, text))
        }
        Verb::Eval { map, points } => {
            let m = input.map(map)?;
            let xs: Vec<u64> = if points.is_empty() { (1..=cli.horizon.unwrap_or(20)).collect() } else { points.clone() };
            if xs.contains(&0) {
                return Err(Outcome::err(EXIT_USAGE, "error: points start at 1\n".into()));
            }
            let vals: Vec<u64> = xs.iter().map(|&x| m.eval(x)).collect();
            if cli.oracle {
                // evaluate through an unfolded, non-canonical representation
                let wide = m.unfold_period(2).unfold_start(m.tail_period());
                if xs.iter().zip(&vals).any(|(&x, &v)| wide.eval(x) != v) {
                    return Err(Outcome::err(EXIT_ORACLE, "oracle disagrees on evaluation\n".into()));
                }
            }
            let text = if json {
                emit_json(json!({ "points": xs, "values": vals }))
            } else {
                xs.iter().zip(&vals).map(|(x, v)| format!("{x} -> {v}\n")).collect()
            };
            Ok(Outcome::out(EXIT_OK, text))
        }
        Verb::Compose { maps } => {
            let ms = maps.iter().map(|s| input.map(s)).collect::<Result<Vec<_>, _>>()?;
            let c = ms[1..].iter().fold(ms[0].clone(), |acc, b| acc.compose(b));
            if cli.oracle {
                let refs: Vec<&FenceMap> = ms.iter().chain(std::iter::once(&c)).collect();
                let h = horizon(cli, &refs);
                if (1..=h).any(|x| ms.iter().fold(x, |y, m| m.eval(y)) != c.eval(x)) {
                    return Err(Outcome::err(EXIT_ORACLE, "oracle disagrees on composition\n".into()));
                }
            }
            let text = if json { emit_json(json!({ "map": to_value(&c.normalize()) })) } else { format!("{c}\n") };
            Ok(Outcome::out(EXIT_OK, text))
        }
        Verb::Classify { map } => {
            let m = input.map(map)?;
            let n = need_n(cli)?;
            let report = classify(&m, n).map_err(fail)?;
            if cli.oracle && !blocks_agree(&m, horizon(cli, &[&m])) {
                return Err(Outcome::err(EXIT_ORACLE, "oracle disagrees on the block structure\n".into()));
            }
            let text = if json {
                emit_json(json!({ "map": render_map(&m), "report": to_value(&report) }))
            } else {
                classify_text(&report)
            };
            Ok(Outcome::out(EXIT_OK, text))
        }
        Verb::Factor { map, scheme } => {
            let m = input.map(map)?;
            let word = factor(cli, &m, *scheme)?;
            let report = verify_word(&word, &m);
            if cli.oracle && report.oracle_agrees != report.composed_equals_target {
                return Err(Outcome::err(EXIT_ORACLE, "oracle disagrees on recomposition\n".into()));
            }
            let code = if report.success() { EXIT_OK } else { EXIT_FALSE };
            let text = if json { format!("{}\n", serde_json::to_string_pretty(&word).expect("words serialize")) } else { word_text(&word) };
            Ok(Outcome::out(code, text))
        }
        Verb::Verify { word, target } => {
            let t = input.map(target)?;
            let src = match word.as_deref() {
                None | Some("-") => input.text("-")?,
                Some(path) => std::fs::read_to_string(path)
                    .map_err(|e| Outcome::err(EXIT_USAGE, format!("error: cannot read {path}: {e}\n")))?,
            };
            let w: GeneratorWord = serde_json::from_str(&src)
                .map_err(|e| Outcome::err(EXIT_USAGE, format!("error: malformed word: {e}\n")))?;
            let report = verify_word(&w, &t);
            if cli.oracle && report.oracle_agrees != report.composed_equals_target {
                return Err(Outcome::err(EXIT_ORACLE, "oracle disagrees on recomposition\n".into()));
            }
            let code = if report.success() { EXIT_OK } else { EXIT_FALSE };
            let text = if json {
                format!("{}\n", serde_json::to_string_pretty(&report).expect("reports serialize"))
            } else {
                verify_text(&report)
            };
            Ok(Outcome::out(code, text))
        }
        Verb::Gen { spelling } => {
            let m = input.map(spelling)?;
            let text = if json { emit_json(json!({ "map": to_value(&m.normalize()) })) } else { format!("{m}\n") };
            Ok(Outcome::out(EXIT_OK, text))
        }
        Verb::Blocks { map } => {
            let m = input.map(map)?;
            let h = horizon(cli, &[&m]);
            if cli.oracle && !blocks_agree(&m, h) {
                return Err(Outcome::err(EXIT_ORACLE, "oracle disagrees on the block structure\n".into()));
            }
            let bs = BlockStream::of(&m);
            let text = if json { emit_json(json!({ "blocks": to_value(&bs) })) } else { blocks_text(&bs, cli.horizon.unwrap_or(20)) };
            Ok(Outcome::out(EXIT_OK, text))
        }
    }
}

fn factor(cli: &Cli, m: &FenceMap, scheme: Scheme) -> Result<GeneratorWord, Outcome> {
    match scheme {
        Scheme::ThetaLambda => {
            let n = need_n(cli)?;
            let (g1, g2) = theta_lambda_factor(m, n).map_err(fail)?;
            Ok(GeneratorWord::new(
                TargetClass::ThetaLambda { n },
                vec![explicit(g1, ClassTag::Theta), explicit(g2, ClassTag::LambdaN { n })],
            ))
        }
        Scheme::H => h_word(m, need_n(cli)?).map_err(fail),
        Scheme::G => g_word(m, need_n(cli)?).map_err(fail),
        Scheme::Delta => {
            let n = need_n(cli)?;
            // δ_m is constant exactly on 1..=m
            let k = BlockStream::of(m).nth(1).and_then(|b| b.len).unwrap_or(0);
            if k == 0 || *m != delta_gen(k) {
                return Err(Outcome::err(EXIT_USAGE, "error: the delta scheme takes a map of the form delta:m\n".into()));
            }
            Ok(delta_word(k, n))
        }
        Scheme::Ksplit => {
            let l = match Analysis::of(m).k_class() {
                KClass::K(l) => l,
                _ => return Err(Outcome::err(EXIT_USAGE, "error: ksplit needs a map of class K(l)\n".into())),
            };
            let (g1, g2) = k_split(m).map_err(fail)?;
            Ok(GeneratorWord::new(
                TargetClass::KSplit { l },
                vec![explicit(g1, ClassTag::KAbove { l }), explicit(g2, ClassTag::KAbove { l })],
            ))
        }
    }
}

fn classify_text(r: &crate::invariants::ClassReport) -> String {
    let v = to_value(r);
    let mut out = String::new();
    if let Value::Object(fields) = v {
        for (k, val) in fields {
            let shown = match &val {
                _ if k == "k_class" => match r.k_class {
                    KClass::NotInP => "not in P".to_string(),
                    KClass::K(l) => format!("K({l})"),
                    KClass::KInf => "K(ℵ₀)".to_string(),
                },
                Value::Object(o) if o.get("kind").and_then(Value::as_str) == Some("aleph0") => "ℵ₀".to_string(),
                Value::Object(o) if o.contains_key("value") => o["value"].to_string(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {shown}\n"));
        }
    }
    out
}

fn word_text(w: &GeneratorWord) -> String {
    let mut out = format!("{w}\n");
    for (i, f) in w.factors.iter().enumerate() {
        if let crate::generators::GeneratorSymbol::Explicit { map, .. } = f {
            out.push_str(&format!("  [{}] {f} = {map}\n", i + 1));
        }
    }
    out
}

fn verify_text(r: &crate::factor::VerificationReport) -> String {
    let mut out = format!(
        "composed equals target: {}\noracle agrees: {}\n",
        r.composed_equals_target, r.oracle_agrees
    );
    if let Some(w) = r.mismatch_witness {
        out.push_str(&format!("first mismatch at {}: word gives {}, target {}\n", w.x, w.composed, w.target));
    }
    for c in &r.factor_certifications {
        match &c.failed {
            None => out.push_str(&format!("factor {} ({}): ok\n", c.index + 1, c.factor)),
            Some(p) => out.push_str(&format!("factor {} ({}): fails {p}\n", c.index + 1, c.factor)),
        }
    }
    out.push_str(if r.success() { "verified\n" } else { "NOT verified\n" });
    out
}

fn blocks_text(bs: &BlockStream, h: u64) -> String {
    let mut out = String::new();
    for b in bs.iter().take_while(|b| b.start <= h) {
        match b.len {
            Some(l) => out.push_str(&format!("[{}..{}] -> {}\n", b.start, b.start + l - 1, b.value)),
            None => out.push_str(&format!("[{}..] -> {}\n", b.start, b.value)),
        }
    }
    match &bs.tail {
        BlockTail::InfiniteBlock { .. } => out.push_str("finitely many blocks\n"),
        BlockTail::Periodic { start, period, .. } => {
            out.push_str(&format!("... periodic from {start} with period {period}\n"))
        }
    }
    out
}
