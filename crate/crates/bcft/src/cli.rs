//! The `bcft` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on invalid input.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::braids::{cable_compose, papb_generator, parse_word, BraidWord};
use crate::coords::CoordSystem;
use crate::latticecft::{
    bootstrap_check, expansion_consistency_check, generator_path, ker_t_check, monodromy_check, sample_bulk_points,
    sample_open_points, single_valuedness_check, skew_symmetry_check, BoundaryData, Charge, Charges, LatticeError,
    ModelConfig, OpenPoint, SampleSpec, VerifyReport,
};
use crate::series::{expand_in, parse_power_product};
use crate::trees::{format_tree, parse_any, parse_colored, parse_tree, ParsedTree, Tree};

#[derive(Parser, Debug)]
#[command(name = "bcft", version, about = "Trees, coordinates, series and braids for boundary CFT expansions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Truncation order [default: 30, or the config's truncation].
    #[arg(long = "N", global = true)]
    pub n: Option<u32>,
    /// Tolerance for numeric checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for random sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Model configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse, compose, permute or double trees.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Coordinates of a tree, optionally evaluated at a point.
    Coords {
        tree: String,
        /// Comma-separated points, e.g. "1+2i,0.5,-1i".
        #[arg(long)]
        point: Option<String>,
    },
    /// Expand a power product in the coordinates of a tree.
    Expand { tree: String, function: String },
    /// Braid words and the colored generators.
    #[command(subcommand)]
    Braid(BraidCmd),
    /// Run a verification suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
pub enum TreeCmd {
    Parse { tree: String },
    /// `A ∘_p B`.
    Compose { a: String, p: u32, b: String },
    /// Relabel leaf `i` as `g(i)`; `g` is comma-separated.
    Permute { tree: String, perm: String },
    Double { tree: String },
}

#[derive(Subcommand, Debug)]
pub enum BraidCmd {
    /// Permutation, purity and crossing counts of a word.
    Show {
        word: String,
        #[arg(long)]
        strands: Option<usize>,
    },
    /// Cable `h` into strand `p` of `g`.
    Cable {
        g: String,
        p: usize,
        h: String,
        #[arg(long)]
        strands: Option<usize>,
        #[arg(long)]
        inner: Option<usize>,
    },
    /// One of alpha_o, alpha_c, sigma, p, q.
    Generator { name: String },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Bulk tree expansions against the closed form.
    BulkConsistency {
        #[arg(long, value_delimiter = ';', default_value = "1(2(34));(12)(34);(1(23))4")]
        trees: Vec<String>,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Bulk-boundary tree expansions against the closed form.
    BoundaryConsistency {
        #[arg(long, value_delimiter = ';', default_value = "t(c1) o2;o2 t(c1)")]
        trees: Vec<String>,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Conditions on σ and η over a box of charges.
    Bootstrap {
        #[arg(long = "box", default_value_t = 5)]
        bound: i64,
    },
    /// Skew-symmetry of the two-point function by continuation.
    Skew {
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    /// Certificate membership and coordinate round trips on random points.
    Regions {
        tree: String,
        #[arg(long, default_value_t = 1000)]
        points: usize,
    },
    /// Continuation along the paths of the five generators.
    Monodromy,
}

/// Errors that map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{0}")]
    Msg(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Tree(#[from] crate::trees::TreeError),
    #[error(transparent)]
    Coord(#[from] crate::coords::CoordError),
    #[error(transparent)]
    Series(#[from] crate::series::SeriesError),
    #[error(transparent)]
    Braid(#[from] crate::braids::BraidError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Output text and exit code.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

/// Serializes JSON with every float written to 17 significant digits.
pub fn to_json_string(v: &Value) -> String {
    let mut s = String::new();
    write_json(v, 0, &mut s);
    s.push('\n');
    s
}

fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Number(n) if n.is_f64() => {
            let f = n.as_f64().unwrap();
            let _ = write!(out, "{f:.16e}");
        }
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(x, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_json(x, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn parse_complex(s: &str) -> Result<C64, InputError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || InputError::Msg(format!("bad complex number '{s}'"));
    if let Some(body) = t.strip_suffix('i') {
        let split = body.char_indices().skip(1).filter(|(k, c)| (*c == '+' || *c == '-') && !body[..*k].ends_with('e')).last();
        let (re, im) = match split {
            Some((k, _)) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => x.parse().map_err(|_| bad())?,
        };
        Ok(C64::new(re.parse().map_err(|_| bad())?, im))
    } else {
        Ok(C64::new(t.parse().map_err(|_| bad())?, 0.0))
    }
}

fn c64_json(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn tree_text(t: &ParsedTree) -> String {
    match t {
        ParsedTree::Plain(a) => format_tree(a),
        ParsedTree::Colored(e) => e.format(),
    }
}

fn word(s: &str, strands: Option<usize>) -> Result<BraidWord, InputError> {
    match strands {
        Some(n) => Ok(parse_word(s, n)?),
        None => Ok(s.parse()?),
    }
}

struct Ctx {
    global: Global,
}

impl Ctx {
    fn config(&self) -> Result<ModelConfig, InputError> {
        let path = self.global.config.as_ref().ok_or_else(|| InputError::Msg("--config is required".into()))?;
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| InputError::Msg(format!("bad config: {e}")))
    }

    fn seed(&self, cfg: Option<&ModelConfig>) -> u64 {
        self.global.seed.or(cfg.map(|c| c.seed)).unwrap_or(0)
    }

    fn truncation(&self, cfg: Option<&ModelConfig>) -> u32 {
        self.global.n.or(cfg.map(|c| c.truncation)).unwrap_or(30)
    }

    fn tol(&self, cfg: Option<&ModelConfig>, default: f64) -> f64 {
        self.global.tol.or(cfg.map(|c| c.tolerance)).unwrap_or(default)
    }

    fn emit(&self, value: Value, text: String) -> String {
        match self.global.format {
            Format::Json => to_json_string(&value),
            Format::Text => text + "\n",
        }
    }

    fn report(&self, reports: Vec<VerifyReport>) -> Outcome {
        let passed = reports.iter().all(|r| r.passed);
        let value = if reports.len() == 1 {
            reports[0].to_json()
        } else {
            json!({ "passed": passed, "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>() })
        };
        let text = reports.iter().map(|r| r.to_text()).collect::<Vec<_>>().join("\n");
        Outcome { text: self.emit(value, text), code: if passed { 0 } else { 1 } }
    }
}

fn timed(f: impl FnOnce() -> Result<VerifyReport, LatticeError>) -> Result<VerifyReport, LatticeError> {
    let start = Instant::now();
    let mut r = f()?;
    r.runtime = Some(start.elapsed());
    Ok(r)
}

fn run_tree(ctx: &Ctx, cmd: &TreeCmd) -> Result<Outcome, InputError> {
    let out = match cmd {
        TreeCmd::Parse { tree } => {
            let t = parse_any(tree)?;
            let (kind, leaves) = match &t {
                ParsedTree::Plain(a) => ("plain", json!(a.leaves())),
                ParsedTree::Colored(e) => ("colored", json!({ "closed": e.labels().0, "open": e.labels().1 })),
            };
            let text = tree_text(&t);
            ctx.emit(json!({ "tree": text, "kind": kind, "leaves": leaves }), text.clone())
        }
        TreeCmd::Compose { a, p, b } => {
            let text = match (parse_any(a)?, parse_any(b)?) {
                (ParsedTree::Plain(x), ParsedTree::Plain(y)) => format_tree(&x.compose(*p, &y)?),
                (ParsedTree::Colored(x), y) => {
                    let y = match y {
                        ParsedTree::Colored(y) => y,
                        ParsedTree::Plain(y) => crate::trees::ColoredTree::from_plain(&y)?,
                    };
                    x.compose(*p, &y)?.format()
                }
                (ParsedTree::Plain(_), ParsedTree::Colored(_)) => {
                    return Err(InputError::Msg("cannot graft a colored tree into a plain tree".into()))
                }
            };
            ctx.emit(json!({ "tree": text }), text.clone())
        }
        TreeCmd::Permute { tree, perm } => {
            let g: Vec<u32> = perm
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| InputError::Msg(format!("bad permutation '{perm}'"))))
                .collect::<Result<_, _>>()?;
            let text = format_tree(&parse_tree(tree)?.permute(&g)?);
            ctx.emit(json!({ "tree": text }), text.clone())
        }
        TreeCmd::Double { tree } => {
            let e = parse_colored(tree)?;
            let text = format_tree(&e.doubling()?);
            let order: Vec<String> = e.doubled_leaf_order()?.iter().map(|l| l.to_string()).collect();
            ctx.emit(json!({ "tree": text, "leaves": order }), format!("{text}\n{}", order.join(" ")))
        }
    };
    Ok(Outcome { text: out, code: 0 })
}

fn run_coords(ctx: &Ctx, tree: &str, point: Option<&str>) -> Result<Outcome, InputError> {
    let cs = CoordSystem::new(&parse_tree(tree)?)?;
    let root = &cs.vertices()[0];
    let ratios: Vec<Value> = cs.edge_ratios().into_iter().map(|(n, r)| json!({ "name": n, "ratio": r })).collect();
    let mut v = json!({
        "tree": format_tree(cs.tree()),
        "variables": cs.var_names(),
        "z_A": format!("z{}", cs.rightmost()),
        "x_A": format!("z{}-z{}", root.l, root.r),
        "ratios": ratios,
    });
    let mut text = cs.to_string();
    if let Some(p) = point {
        let pts: Vec<C64> = p.split(',').map(parse_complex).collect::<Result<_, _>>()?;
        let cv = cs.psi(&pts)?;
        let m = cs.region_membership(&pts);
        let names = cs.var_names();
        let vals: serde_json::Map<String, Value> =
            names.iter().cloned().zip(cv.as_vec().into_iter().map(c64_json)).collect();
        v["values"] = Value::Object(vals);
        v["in_region"] = json!(m.in_u);
        v["margin"] = json!(m.margin);
        for (n, c) in names.iter().zip(cv.as_vec()) {
            let _ = write!(text, "\n{n} ≈ {c}");
        }
        let _ = write!(text, "\nin U_A: {} (margin {:.3})", m.in_u, m.margin);
    }
    Ok(Outcome { text: ctx.emit(v, text.trim_end().to_string()), code: 0 })
}

fn run_expand(ctx: &Ctx, tree: &str, function: &str) -> Result<Outcome, InputError> {
    let cs = CoordSystem::new(&parse_tree(tree)?)?;
    let f = parse_power_product(function)?;
    let s = expand_in(&cs, &f, ctx.truncation(None))?;
    let v = json!({
        "tree": format_tree(cs.tree()),
        "function": f.to_string(),
        "truncation": ctx.truncation(None),
        "variables": cs.var_names(),
        "sign_flag": s.sign_flag(),
        "terms": s.to_json(),
    });
    Ok(Outcome { text: ctx.emit(v, s.to_string()), code: 0 })
}

fn run_braid(ctx: &Ctx, cmd: &BraidCmd) -> Result<Outcome, InputError> {
    let show = |w: &BraidWord| {
        let labels: Vec<u32> = (1..=w.strands() as u32).collect();
        let ab: Vec<Value> = w.abelianization(&labels).into_iter().map(|((a, b), c)| json!([a, b, c])).collect();
        (
            json!({ "word": w.to_string(), "strands": w.strands(), "permutation": w.permutation(), "pure": w.is_pure(), "crossings": ab }),
            format!("{w}\npermutation {:?}{}", w.permutation(), if w.is_pure() { " (pure)" } else { "" }),
        )
    };
    let (v, text) = match cmd {
        BraidCmd::Show { word: w, strands } => show(&word(w, *strands)?),
        BraidCmd::Cable { g, p, h, strands, inner } => show(&cable_compose(&word(g, *strands)?, *p, &word(h, *inner)?)?),
        BraidCmd::Generator { name } => {
            let m = papb_generator(name)?;
            let text = format!("{} -> {}: {}", m.source, m.target, m.word);
            (m.to_json(), text)
        }
    };
    Ok(Outcome { text: ctx.emit(v, text), code: 0 })
}

fn split_charges(all: &[Charge], r: usize, s: usize) -> Result<Charges, InputError> {
    if all.len() != r + s {
        return Err(InputError::Msg(format!("config has {} charges, trees need {}", all.len(), r + s)));
    }
    Ok(Charges::new(all[..r].to_vec(), all[r..].to_vec()))
}

fn bulk_samples(trees: &[Tree], rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<Vec<OpenPoint>>, LatticeError> {
    trees
        .iter()
        .map(|t| {
            Ok(sample_bulk_points(t, rng, count, SampleSpec::default())?
                .into_iter()
                .map(|bulk| OpenPoint { bulk, boundary: vec![] })
                .collect())
        })
        .collect()
}

fn run_verify(ctx: &Ctx, cmd: &VerifyCmd) -> Result<Outcome, InputError> {
    let reports = match cmd {
        VerifyCmd::Bootstrap { bound } => {
            let cfg = ctx.config()?;
            let bd = cfg.boundary()?;
            vec![timed(|| Ok(bootstrap_check(&bd, *bound)))?, timed(|| Ok(ker_t_check(&bd, *bound)))?]
        }
        VerifyCmd::BulkConsistency { trees, points } => {
            let cfg = ctx.config()?;
            let bd = cfg.boundary()?;
            let ts: Vec<Tree> = trees.iter().map(|t| parse_tree(t)).collect::<Result<_, _>>()?;
            let r = ts.first().map(|t| t.size()).unwrap_or(0);
            let charges = split_charges(&cfg.charges(), r, 0)?;
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed(Some(&cfg)));
            let samples = bulk_samples(&ts, &mut rng, *points)?;
            let parsed: Vec<ParsedTree> = ts.into_iter().map(ParsedTree::Plain).collect();
            let tol = ctx.tol(Some(&cfg), 1e-6);
            let mut rep = timed(|| expansion_consistency_check(&bd, &charges, &parsed, &samples, ctx.truncation(Some(&cfg)), tol))?;
            rep.parameters["seed"] = json!(ctx.seed(Some(&cfg)));
            let loops: Vec<Vec<C64>> = samples.iter().flat_map(|s| s.iter().take(2).map(|p| p.bulk.clone())).collect();
            vec![rep, timed(|| single_valuedness_check(&bd.model, &charges.bulk, &loops, 1e-12))?]
        }
        VerifyCmd::BoundaryConsistency { trees, points } => {
            let cfg = ctx.config()?;
            let bd = cfg.boundary()?;
            let ts: Vec<_> = trees.iter().map(|t| parse_colored(t)).collect::<Result<_, _>>()?;
            let (r, s) = ts.first().map(|t| t.rs()).unwrap_or((0, 0));
            let charges = split_charges(&cfg.charges(), r, s)?;
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed(Some(&cfg)));
            let samples: Vec<Vec<OpenPoint>> =
                ts.iter().map(|t| sample_open_points(t, &mut rng, *points, SampleSpec::default())).collect::<Result<_, _>>()?;
            let parsed: Vec<ParsedTree> = ts.into_iter().map(ParsedTree::Colored).collect();
            let tol = ctx.tol(Some(&cfg), 1e-6);
            let mut rep = timed(|| expansion_consistency_check(&bd, &charges, &parsed, &samples, ctx.truncation(Some(&cfg)), tol))?;
            rep.parameters["seed"] = json!(ctx.seed(Some(&cfg)));
            vec![rep]
        }
        VerifyCmd::Skew { points } => {
            let cfg = ctx.config()?;
            let model = cfg.model()?;
            let ch = cfg.charges();
            if ch.len() != 2 {
                return Err(InputError::Msg("skew needs exactly two charges".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed(Some(&cfg)));
            let pts: Vec<(C64, C64)> = (0..*points)
                .map(|_| {
                    let mut z = || C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                    (z(), z())
                })
                .collect();
            let tol = ctx.global.tol.unwrap_or(1e-10);
            vec![timed(|| skew_symmetry_check(&model, ch[0], ch[1], &pts, tol))?]
        }
        VerifyCmd::Regions { tree, points } => vec![timed(|| regions_check(tree, *points, ctx.seed(None), ctx.global.tol.unwrap_or(1e-12)))
            .map_err(|e| InputError::Msg(e.to_string()))?],
        VerifyCmd::Monodromy => {
            let bd: BoundaryData = ctx.config()?.boundary()?;
            vec![timed(|| monodromy_report(&bd, ctx.global.tol.unwrap_or(1e-10)))?]
        }
    };
    Ok(ctx.report(reports))
}

fn monodromy_report(bd: &BoundaryData, tol: f64) -> Result<VerifyReport, LatticeError> {
    let cases = [
        ("alpha_o", Charges::new(vec![], vec![(1, 0), (2, 1), (-1, 0)])),
        ("alpha_c", Charges::new(vec![(1, 0), (0, 1), (1, 1)], vec![])),
        ("sigma", Charges::new(vec![(1, 2), (0, 1)], vec![])),
        ("p", Charges::new(vec![(1, 1)], vec![(2, 0)])),
        ("q", Charges::new(vec![(1, 0), (1, -1)], vec![])),
    ];
    let mut rep = VerifyReport::new("monodromy", json!({ "reflection": bd.rho() }), tol);
    for (name, ch) in cases {
        let m = monodromy_check(bd, &generator_path(name)?, &ch, tol)?;
        rep.push(m.value_error);
        if m.measured != m.expected {
            rep.fail(format!("{name}: crossings {:?} differ from the word's {:?}", m.measured, m.expected));
        }
    }
    Ok(rep.finish())
}

/// Membership and `Ψ^{-1}Ψ` round trips on random points in a box.
fn regions_check(tree: &str, points: usize, seed: u64, tol: f64) -> Result<VerifyReport, LatticeError> {
    let a = parse_tree(tree)?;
    let cs = CoordSystem::new(&a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = VerifyReport::new("regions", json!({ "tree": format_tree(&a), "seed": seed }), tol);
    let mut inside = 0;
    for _ in 0..points {
        let p: Vec<C64> = (0..a.size()).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        if cs.region_membership(&p).in_u {
            inside += 1;
        }
        let cv = cs.psi(&p)?;
        let back = cs.inverse(&cv);
        let scale = p.iter().map(|z| z.norm()).fold(1.0, f64::max);
        rep.push(back.iter().zip(&p).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale);
    }
    rep.extra.insert("inside".into(), json!(inside));
    Ok(rep.finish())
}

/// Runs the command line on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome { text: e.to_string(), code };
        }
    };
    let ctx = Ctx { global: cli.global.clone() };
    let result = match &cli.command {
        Command::Tree(t) => run_tree(&ctx, t),
        Command::Coords { tree, point } => run_coords(&ctx, tree, point.as_deref()),
        Command::Expand { tree, function } => run_expand(&ctx, tree, function),
        Command::Braid(b) => run_braid(&ctx, b),
        Command::Verify(v) => run_verify(&ctx, v),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => return Outcome { text: format!("error: {e}\n"), code: 2 },
    };
    if let Some(path) = &cli.global.out {
        if let Err(e) = std::fs::write(path, &outcome.text) {
            return Outcome { text: format!("error: {e}\n"), code: 2 };
        }
        return Outcome { text: String::new(), code: outcome.code };
    }
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> Outcome {
        run(std::iter::once("bcft").chain(args.iter().copied()))
    }

    #[test]
    fn tree_commands() {
        let o = call(&["tree", "compose", "3((12)4)", "2", "2(13)", "--format", "text"]);
        assert_eq!((o.text.trim(), o.code), ("5((1(3(24)))6)", 0));
        let o = call(&["tree", "compose", "3((12)4)", "2", "", "--format", "text"]);
        assert_eq!(o.text.trim(), "2(13)");
        let o = call(&["tree", "double", "t(c1) o2", "--format", "text"]);
        assert!(o.text.starts_with("(12)3"), "{}", o.text);
        assert_eq!(call(&["tree", "parse", "(12"]).code, 2);
    }

    #[test]
    fn float_format() {
        let s = to_json_string(&json!({ "a": 0.1, "b": [1, 2.5] }));
        assert!(s.contains("1.0000000000000001e-1"));
        assert!(s.contains("2.5000000000000000e0"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"], 0.1);
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1+2i").unwrap(), C64::new(1.0, 2.0));
        assert_eq!(parse_complex("-1i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("0.5").unwrap(), C64::new(0.5, 0.0));
        assert_eq!(parse_complex("1e-3-i").unwrap(), C64::new(1e-3, -1.0));
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn expand_and_braid() {
        let o = call(&["expand", "(23)((15)4)", "(z2-z1)^-1", "--N", "2"]);
        assert_eq!(o.code, 0);
        let v: Value = serde_json::from_str(&o.text).unwrap();
        assert_eq!(v["terms"].as_array().unwrap().len(), 7);
        let o = call(&["braid", "cable", "s1", "1", "s1", "--format", "text"]);
        assert!(o.text.starts_with("s2 s1 s2\n"), "{}", o.text);
        assert_eq!(call(&["braid", "generator", "r"]).code, 2);
    }
}
