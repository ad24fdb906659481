//! The `radonbound` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bounds::{catalog_bound, q_poly, q_search, BoundDerivation, SearchMode, SpaceTag};
use crate::constrained::{build_constrained, validate_almost_embedding, validate_constrained};
use crate::error::{Error, Result};
use crate::exact::{helly, levi_check, radon, verify_main_theorem, RadonNumber, Verdict};
use crate::families::GeneratorSpec;
use crate::graphs::{parse_expr, Graph};
use crate::space::SetFamily;

#[derive(Parser, Debug)]
#[command(name = "radonbound", version, about = "Radon-number bounds and exact invariants of finite convexity spaces")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bound polynomial of a join/union expression.
    Bound {
        #[arg(long)]
        expr: String,
        /// Also evaluate at this b.
        #[arg(long)]
        b: Option<u64>,
        /// Print only the polynomial.
        #[arg(long)]
        coeffs: bool,
    },
    /// Best decomposition bound for a graph file or expression.
    Search {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        b: u64,
        #[arg(long, default_value = "value")]
        mode: SearchMode,
    },
    /// Smallest catalog bound for a space.
    Catalog {
        #[arg(long)]
        space: SpaceTag,
        #[arg(long)]
        b: u64,
    },
    /// Exact Radon, Helly and TC1 values of a family.
    Exact {
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        which: Which,
    },
    /// Build a constrained map of an expression.
    Construct {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        family: PathBuf,
        /// Comma-separated vertex names; defaults to the smallest admissible set.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<String>>,
        /// Also require an almost-embedding.
        #[arg(long)]
        check_ae: bool,
    },
    /// Compare the exact Radon number with the bound of an expression.
    Verify {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        expr: String,
    },
    /// Write a generated family as JSON (`-` for standard output).
    Gen {
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        sets: Option<usize>,
        #[arg(long)]
        prob: Option<f64>,
    },
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct Which {
    #[arg(long)]
    all: bool,
    #[arg(long)]
    radon: bool,
    #[arg(long)]
    helly: bool,
    #[arg(long)]
    tc1: bool,
    #[arg(long)]
    levi: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Intervals,
    Multipath,
    Lowerbound,
    Random,
}

/// What a command produced: text and JSON renderings plus whether a computed
/// check failed.
struct Report {
    text: String,
    json: serde_json::Value,
    failed: bool,
}

impl Report {
    fn ok(text: String, json: serde_json::Value) -> Self {
        Report { text, json, failed: false }
    }
}

/// Runs the command line; returns 0 on success, 1 when a computed check
/// fails and 2 on bad input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(report) => {
            let body = if cli.json {
                match serde_json::to_string_pretty(&report.json) {
                    Ok(s) => s + "\n",
                    Err(e) => {
                        let _ = writeln!(err, "error: {e}");
                        return 2;
                    }
                }
            } else {
                report.text
            };
            if let Err(e) = out.write_all(body.as_bytes()) {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            i32::from(report.failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(v)?)
}

fn dispatch(cmd: Command) -> Result<Report> {
    match cmd {
        Command::Bound { expr, b, coeffs } => bound(&expr, b, coeffs),
        Command::Search { graph, b, mode } => search(&graph, b, mode),
        Command::Catalog { space, b } => catalog(space, b),
        Command::Exact { family, which } => exact(&family, &which),
        Command::Construct {
            expr,
            family,
            points,
            check_ae,
        } => construct(&expr, &family, points.as_deref(), check_ae),
        Command::Verify { family, expr } => verify(&family, &expr),
        Command::Gen {
            kind,
            out,
            n,
            k,
            m,
            seed,
            sets,
            prob,
        } => gen(kind, &out, n, k, m, seed, sets, prob),
    }
}

fn derivation_text(d: &BoundDerivation, b: Option<u64>) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "expr: {}", d.expr);
    let _ = writeln!(t, "q(b) = {}", d.poly);
    if let Some(b) = b {
        let _ = writeln!(t, "q({b}) = {}", d.poly.eval(b));
    }
    t.push_str("derivation:\n");
    for line in d.trace().lines() {
        let _ = writeln!(t, "  {line}");
    }
    t
}

fn derivation_json(d: &BoundDerivation, b: Option<u64>) -> Result<serde_json::Value> {
    let mut v = to_value(d)?;
    v["text"] = json!(d.poly.to_string());
    if let Some(b) = b {
        v["b"] = json!(b);
        v["value"] = json!(d.poly.eval(b).to_string());
    }
    Ok(v)
}

fn bound(expr: &str, b: Option<u64>, coeffs: bool) -> Result<Report> {
    let d = q_poly(&parse_expr(expr)?)?;
    let text = if coeffs {
        let mut t = format!("{}\n", d.poly);
        if let Some(b) = b {
            let _ = writeln!(t, "{}", d.poly.eval(b));
        }
        t
    } else {
        derivation_text(&d, b)
    };
    Ok(Report::ok(text, derivation_json(&d, b)?))
}

/// An existing file is read as graph JSON, anything else as an expression.
fn load_graph(arg: &str) -> Result<Graph> {
    if Path::new(arg).is_file() {
        Graph::load(arg)
    } else {
        Ok(parse_expr(arg)?.realize())
    }
}

fn search(graph: &str, b: u64, mode: SearchMode) -> Result<Report> {
    if b == 0 {
        return Err(Error::Range("b must be positive".into()));
    }
    let g = load_graph(graph)?;
    let d = q_search(&g, b, mode)?;
    let mut text = format!("value: {}\n", d.poly.eval(b));
    text.push_str(&derivation_text(&d, None));
    Ok(Report::ok(text, derivation_json(&d, Some(b))?))
}

fn catalog(space: SpaceTag, b: u64) -> Result<Report> {
    if b == 0 {
        return Err(Error::Range("b must be positive".into()));
    }
    let c = catalog_bound(space, b)?;
    let mut text = format!("{}\nwinner: {}\ncandidates:\n", c.value, c.winner);
    for e in &c.all {
        let _ = writeln!(text, "  {}  {}  = {}", e.expr, e.poly, e.value);
    }
    let mut json = to_value(&c)?;
    json["space"] = json!(space.to_string());
    json["b"] = json!(b);
    Ok(Report::ok(text, json))
}

fn exact(path: &Path, which: &Which) -> Result<Report> {
    let fam = SetFamily::load(path)?;
    let none = !(which.radon || which.helly || which.tc1 || which.levi);
    let all = which.all || none;
    let mut text = String::new();
    let mut json = serde_json::Map::new();
    let mut failed = false;
    if all || which.radon {
        let r = radon(&fam)?;
        let witness = fam.space().names_of(r.witness.iter().copied());
        let _ = writeln!(text, "radon: {}", r.number);
        let _ = writeln!(text, "  unsplittable: {{{}}}", witness.join(","));
        json.insert("radon".into(), to_value(&r.number)?);
        json.insert("radon_witness".into(), json!(witness));
    }
    if all || which.helly {
        let h = helly(&fam)?;
        let _ = writeln!(text, "helly: {}", h.number);
        let _ = writeln!(text, "  minimal empty family: {{{}}}", h.witness.join(","));
        json.insert("helly".into(), json!(h.number));
        json.insert("helly_witness".into(), json!(h.witness));
    }
    if all || which.tc1 {
        let t = fam.tc1()?;
        let _ = writeln!(text, "tc1: {t}");
        json.insert("tc1".into(), json!(t));
    }
    if all || which.levi {
        let holds = levi_check(&fam)?;
        failed |= !holds;
        let _ = writeln!(text, "levi: {}", if holds { "holds" } else { "FAILS" });
        json.insert("levi_holds".into(), json!(holds));
    }
    Ok(Report {
        text,
        json: serde_json::Value::Object(json),
        failed,
    })
}

fn construct(expr: &str, path: &Path, points: Option<&[String]>, check_ae: bool) -> Result<Report> {
    let fam = SetFamily::load(path)?;
    let e = parse_expr(expr)?;
    let space = fam.space();
    let pts = points.map(|names| space.vertices_of(names)).transpose()?;
    let cm = build_constrained(&e, &fam, pts.as_deref())?;
    let constrained = validate_constrained(&cm, &fam);
    let ae = check_ae.then(|| validate_almost_embedding(&cm));

    let map = cm.to_json(space);
    let mut text = format!("expr: {e}\nb: {}\n", fam.tc1()? + 1);
    let _ = writeln!(text, "points: {{{}}}", space.names_of(cm.points.iter().copied()).join(","));
    for (v, img) in &map.vertex_images {
        let _ = writeln!(text, "vertex {v} -> {img}  phi {{{}}}", map.phi[v].join(","));
    }
    for (edge, walk) in &map.edge_images {
        let _ = writeln!(text, "edge {edge} -> {}  phi {{{}}}", walk.join(" "), map.phi[edge].join(","));
    }
    let status = |r: &std::result::Result<(), _>| match r {
        Ok(()) => "ok".to_string(),
        Err(v) => format!("FAIL: {v}"),
    };
    let _ = writeln!(text, "constrained: {}", status(&constrained));
    let mut json = json!({
        "map": to_value(&map)?,
        "constrained": constrained.is_ok(),
    });
    if let Err(v) = &constrained {
        json["constrained_violation"] = json!(v.to_string());
    }
    if let Some(ae) = &ae {
        let _ = writeln!(text, "almost-embedding: {}", status(ae));
        json["almost_embedding"] = json!(ae.is_ok());
        if let Err(v) = ae {
            json["almost_embedding_violation"] = json!(v.to_string());
        }
    }
    let failed = constrained.is_err() || ae.is_some_and(|r| r.is_err());
    Ok(Report { text, json, failed })
}

fn verify(path: &Path, expr: &str) -> Result<Report> {
    let fam = SetFamily::load(path)?;
    let r = verify_main_theorem(&fam, &parse_expr(expr)?)?;
    let mut text = String::new();
    let _ = writeln!(text, "expr: {}", r.expr);
    let _ = writeln!(text, "tc1: {}", r.tc1);
    let _ = writeln!(text, "b: {}", r.b);
    let _ = writeln!(text, "q(b) = {}", r.poly);
    let _ = writeln!(text, "bound: {}", r.bound);
    let _ = writeln!(text, "radon: {}", r.radon);
    let _ = writeln!(text, "verdict: {}", r.verdict);
    if r.radon == RadonNumber::Unbounded {
        text.push_str("note: no Radon number inside the model; the bound's hypothesis fails\n");
    }
    Ok(Report {
        text,
        json: to_value(&r)?,
        failed: r.verdict == Verdict::Fail,
    })
}

#[allow(clippy::too_many_arguments)]
fn gen(
    kind: Kind,
    out: &Path,
    n: Option<usize>,
    k: Option<usize>,
    m: Option<usize>,
    seed: Option<u64>,
    sets: Option<usize>,
    prob: Option<f64>,
) -> Result<Report> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Error::Range(format!("--kind needs --{flag}")));
    let generator = match kind {
        Kind::Intervals => GeneratorSpec::Intervals {
            m: need(m.or(n), "m")?,
        },
        Kind::Multipath => GeneratorSpec::Multipath {
            k: need(k, "k")?,
            m: need(m, "m")?,
        },
        Kind::Lowerbound => GeneratorSpec::LowerBound { n: need(n, "n")? },
        Kind::Random => GeneratorSpec::Random {
            seed: seed.ok_or_else(|| Error::Range("--kind random needs --seed".into()))?,
            vertices: n.unwrap_or(8),
            edge_prob: prob.unwrap_or(0.5),
            sets: sets.unwrap_or(4),
        },
    };
    let fam = generator.generate()?;
    let body = fam.to_json_string();
    if out == Path::new("-") {
        return Ok(Report::ok(body.clone(), serde_json::from_str(&body)?));
    }
    std::fs::write(out, &body).map_err(|source| Error::Io {
        path: out.display().to_string(),
        source,
    })?;
    let text = format!(
        "wrote {} members over {} vertices to {}\n",
        fam.members().len(),
        fam.space().vertex_count(),
        out.display()
    );
    let json = json!({
        "out": out.display().to_string(),
        "members": fam.members().len(),
        "vertices": fam.space().vertex_count(),
    });
    Ok(Report::ok(text, json))
}
