//! Command-line front end for `skeinlab`.
//!
//! Every verb renders to a `String` so that tests can drive [`run`] without a
//! subprocess. Errors carry an exit code and a one-line
//! `error:<category>: <message>` rendering.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use skeinlab::laurent::{LaurentPoly1, LaurentPoly2};
use skeinlab::skein::{self, Freeness, Indices};
use skeinlab::{Coefficient, LinkClass, ManifoldModel, ModuleTag, MoveTrace};

/// Exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Malformed input: JSON, schema, inline specs, unknown builtins, usage.
    pub const PARSE: i32 = 2;
    /// Well-formed input that does not fit the model: dimensions, component
    /// indices, unknown class ids, slides outside the torus subgroup.
    pub const DIMENSION: i32 = 3;
    /// A file could not be read.
    pub const IO: i32 = 4;
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub category: String,
    pub message: String,
}

impl CliError {
    pub fn render(&self) -> String {
        format!(
            "error:{}: {}",
            self.category,
            self.message.replace('\n', " ")
        )
    }

    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: exit::PARSE,
            category: "usage".into(),
            message: message.into(),
        }
    }
}

impl From<skeinlab::Error> for CliError {
    fn from(e: skeinlab::Error) -> Self {
        let category = e.category();
        let code = match category {
            "parse" | "schema" | "builtin" => exit::PARSE,
            _ => exit::DIMENSION,
        };
        CliError {
            code,
            category: category.into(),
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "skeinlab",
    version,
    about = "Skein modules of framed links from intersection data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Indices and summands of one link class.
    Index {
        #[arg(long)]
        manifold: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        json: bool,
    },
    /// Summand table over all classes with coordinates and size bounded by B.
    Decompose {
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a move trace and reduce it in a module.
    Reduce {
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        trace: String,
        #[arg(long, default_value = "sprime")]
        module: String,
        #[arg(long)]
        json: bool,
    },
    /// Freeness verdict with a witness when the module has torsion.
    Freeness {
        #[arg(long)]
        manifold: String,
        /// One of sprime, s, l, w; all four when omitted.
        #[arg(long)]
        module: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Push a rendered two-variable element to s, l or w (no reduction).
    Specialize {
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        module: String,
        #[arg(long)]
        json: bool,
    },
    /// Index rows for every alpha listed in a file, one per line.
    Table {
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        alphas: String,
        #[arg(long)]
        json: bool,
    },
}

/// Parses arguments (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> CliResult<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError {
                code: exit::OK,
                category: "help".into(),
                message: e.to_string(),
            },
            _ => {
                let text = e.to_string();
                let first = text
                    .lines()
                    .next()
                    .unwrap_or("invalid arguments")
                    .trim_start_matches("error: ");
                CliError::usage(first.to_string())
            }
        }
    })?;
    run(&cli.command)
}

pub fn run(cmd: &Command) -> CliResult<String> {
    match cmd {
        Command::Index {
            manifold,
            alpha,
            json,
        } => {
            let m = load_manifold(manifold)?;
            let a = LinkClass::parse(alpha, &m)?;
            cmd_index(&m, &a, *json)
        }
        Command::Decompose {
            manifold,
            bound,
            json,
        } => {
            let m = load_manifold(manifold)?;
            let alphas = skein::enumerate_link_classes(&m, *bound);
            let header = format!(
                "# {} decomposition, bound {bound}, {} classes",
                m.name,
                alphas.len()
            );
            cmd_rows(&m, &alphas, &header, *json)
        }
        Command::Reduce {
            manifold,
            trace,
            module,
            json,
        } => {
            let m = load_manifold(manifold)?;
            let tag: ModuleTag = module.parse()?;
            let text = read_file(trace)?;
            let tr = MoveTrace::from_json(&text, &m)?;
            cmd_reduce(&m, &tr, tag, *json)
        }
        Command::Freeness {
            manifold,
            module,
            json,
        } => {
            let m = load_manifold(manifold)?;
            let tags = match module {
                Some(t) => vec![t.parse::<ModuleTag>()?],
                None => ModuleTag::ALL.to_vec(),
            };
            cmd_freeness(&m, &tags, *json)
        }
        Command::Specialize {
            element,
            module,
            json,
        } => {
            let tag: ModuleTag = module.parse()?;
            cmd_specialize(element, tag, *json)
        }
        Command::Table {
            manifold,
            alphas,
            json,
        } => {
            let m = load_manifold(manifold)?;
            let text = read_file(alphas)?;
            let list = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| LinkClass::parse(l, &m))
                .collect::<Result<Vec<_>, _>>()?;
            let header = format!("# {} table, {} classes", m.name, list.len());
            cmd_rows(&m, &list, &header, *json)
        }
    }
}

fn read_file(path: &str) -> CliResult<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| CliError {
        code: exit::IO,
        category: "io".into(),
        message: format!("{path}: {e}"),
    })
}

/// `builtin:NAME[:p,q,...]` or a path to a manifold document.
pub fn load_manifold(spec: &str) -> CliResult<ManifoldModel> {
    if let Some(rest) = spec.strip_prefix("builtin:") {
        let (name, params) = match rest.split_once(':') {
            Some((n, p)) => (n, p),
            None => (rest, ""),
        };
        let params = params
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<i64>().map_err(|_| CliError {
                    code: exit::PARSE,
                    category: "builtin".into(),
                    message: format!("parameter `{s}` of `{spec}` is not an integer"),
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        return Ok(ManifoldModel::builtin(name, &params)?);
    }
    Ok(ManifoldModel::from_json(&read_file(spec)?)?)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn summand_text(m: &ManifoldModel, a: &LinkClass, tag: ModuleTag) -> CliResult<String> {
    let s = skein::summand(m, a, tag)?;
    Ok(if s.is_free() {
        format!("{s} (free)")
    } else {
        s.to_string()
    })
}

fn cmd_index(m: &ManifoldModel, a: &LinkClass, json: bool) -> CliResult<String> {
    let ix = skein::indices(m, a)?;
    let mut summands = Vec::new();
    for tag in ModuleTag::ALL {
        summands.push((tag, skein::summand(m, a, tag)?));
    }
    let all_free = summands.iter().all(|(_, s)| s.is_free());
    if json {
        let rels: serde_json::Map<String, serde_json::Value> = summands
            .iter()
            .map(|(t, s)| {
                let list: Vec<String> = s.relations.iter().map(|r| r.to_string()).collect();
                (t.to_string(), json!(list))
            })
            .collect();
        return Ok(to_json(&json!({
            "manifold": m.name,
            "alpha": a.to_string(),
            "eps_prime": ix.eps_prime,
            "eps": ix.eps,
            "mu": ix.mu,
            "eps2": ix.eps2,
            "summands": rels,
            "free": all_free,
        })));
    }
    let mut out = String::new();
    writeln!(out, "manifold: {}", m.name).unwrap();
    writeln!(out, "alpha: {a}").unwrap();
    writeln!(
        out,
        "eps'={} eps={} mu={} eps2={}",
        ix.eps_prime, ix.eps, ix.mu, ix.eps2
    )
    .unwrap();
    for (tag, s) in &summands {
        writeln!(out, "{tag}: {s}").unwrap();
    }
    if all_free {
        writeln!(out, "free in all four modules").unwrap();
    }
    Ok(out)
}

#[derive(Serialize)]
struct Row {
    alpha: String,
    #[serde(flatten)]
    indices: Indices,
    sprime: String,
}

fn cmd_rows(
    m: &ManifoldModel,
    alphas: &[LinkClass],
    header: &str,
    json: bool,
) -> CliResult<String> {
    let mut rows = Vec::with_capacity(alphas.len());
    for a in alphas {
        rows.push(Row {
            alpha: a.to_string(),
            indices: skein::indices(m, a)?,
            sprime: summand_text(m, a, ModuleTag::Sprime)?,
        });
    }
    if json {
        return Ok(to_json(&json!({ "manifold": m.name, "rows": rows })));
    }
    let cols: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.alpha.clone(),
                r.indices.eps_prime.to_string(),
                r.indices.eps.to_string(),
                r.indices.mu.to_string(),
                r.sprime.clone(),
            ]
        })
        .collect();
    let titles = ["alpha", "eps'", "eps", "mu", "summand"];
    let mut widths = titles.map(str::len);
    for c in &cols {
        for (w, s) in widths.iter_mut().zip(c) {
            *w = (*w).max(s.chars().count());
        }
    }
    let line = |cells: [&str; 5]| {
        let mut s = String::new();
        for (k, cell) in cells.iter().enumerate() {
            if k == 4 {
                s.push_str(cell);
            } else {
                let pad = widths[k] - cell.chars().count();
                s.push_str(cell);
                s.push_str(&" ".repeat(pad + 2));
            }
        }
        s.push('\n');
        s
    };
    let mut out = String::new();
    writeln!(out, "{header}").unwrap();
    out.push_str(&line(titles));
    for c in &cols {
        out.push_str(&line([&c[0], &c[1], &c[2], &c[3], &c[4]]));
    }
    Ok(out)
}

fn cmd_reduce(m: &ManifoldModel, tr: &MoveTrace, tag: ModuleTag, json: bool) -> CliResult<String> {
    let (w, elem) = skein::trace_evaluate(m, tr)?;
    let alpha = tr.alpha();
    let reduced_pair = elem
        .coefficient(&alpha)
        .and_then(Coefficient::as_two)
        .and_then(|p| p.as_monomial().map(|(e, _)| e))
        .expect("a trace evaluates to a monomial");
    let target = match tag {
        ModuleTag::Sprime => elem.clone(),
        _ => skein::element_specialize(m, &elem, tag)?,
    };
    let coeff = target
        .coefficient(&alpha)
        .expect("a monomial never reduces to zero");
    let monomial = match coeff {
        Coefficient::Two(p) => {
            let ([a, b], _) = p.as_monomial().expect("monomial");
            format!("q1^{a} q2^{b}")
        }
        Coefficient::One(p) => {
            let ([a], _) = p.as_monomial().expect("monomial");
            format!("q^{a}")
        }
    };
    if json {
        return Ok(to_json(&json!({
            "manifold": m.name,
            "alpha": alpha.to_string(),
            "module": tag.to_string(),
            "raw": [w.w1, w.w2],
            "reduced": reduced_pair,
            "coefficient": coeff.to_string(),
            "element": target.to_string(),
        })));
    }
    let mut out = String::new();
    writeln!(out, "alpha: {alpha}").unwrap();
    writeln!(
        out,
        "raw ({},{}), reduced ({},{})",
        w.w1, w.w2, reduced_pair[0], reduced_pair[1]
    )
    .unwrap();
    writeln!(out, "{tag}: {monomial} [x_α]").unwrap();
    writeln!(out, "reduced: {coeff}·[x_α]").unwrap();
    Ok(out)
}

fn cmd_freeness(m: &ManifoldModel, tags: &[ModuleTag], json: bool) -> CliResult<String> {
    let verdicts: Vec<(ModuleTag, Freeness)> =
        tags.iter().map(|&t| (t, skein::is_free(m, t))).collect();
    if json {
        let items: Vec<serde_json::Value> = verdicts
            .iter()
            .map(|(t, v)| match v {
                Freeness::Free => json!({ "module": t.to_string(), "free": true }),
                Freeness::NotFree {
                    surface,
                    class,
                    value,
                } => json!({
                    "module": t.to_string(),
                    "free": false,
                    "witness": { "surface": surface.0, "class": class.free, "pairing": value },
                }),
            })
            .collect();
        return Ok(to_json(&json!({ "manifold": m.name, "verdicts": items })));
    }
    let mut out = String::new();
    for (tag, v) in &verdicts {
        let kind = if *tag == ModuleTag::W {
            "sphere"
        } else {
            "torus"
        };
        let text = match v {
            Freeness::Free => {
                let none = match tag {
                    ModuleTag::W => m.sphere_gens.is_empty(),
                    _ => m.all_torus_generators().is_empty(),
                };
                if none {
                    format!("free (no {kind} classes)")
                } else {
                    "free (all pairings vanish)".to_string()
                }
            }
            Freeness::NotFree {
                surface,
                class,
                value,
            } => format!("NOT free; witness {kind} {surface} pairs {value} with class {class}"),
        };
        if tags.len() == 1 {
            writeln!(out, "{text}").unwrap();
        } else {
            writeln!(out, "{tag}: {text}").unwrap();
        }
    }
    Ok(out)
}

fn cmd_specialize(element: &str, tag: ModuleTag, json: bool) -> CliResult<String> {
    let map = tag.specialization().ok_or_else(|| {
        CliError::from(skeinlab::Error::ModuleMismatch(
            "specialize targets s, l or w".into(),
        ))
    })?;
    let terms: Vec<(String, LaurentPoly2)> = skein::parse_rendered_element(element)?;
    // Merge equal labels after the coefficient map.
    let mut merged: Vec<(String, LaurentPoly1)> = Vec::new();
    for (label, c) in terms {
        let s = c.specialize(map);
        match merged.iter_mut().find(|(l, _)| *l == label) {
            Some((_, acc)) => *acc = &*acc + &s,
            None => merged.push((label, s)),
        }
    }
    let rendered = skein::render_element(&merged);
    if json {
        return Ok(to_json(
            &json!({ "module": tag.to_string(), "element": rendered }),
        ));
    }
    Ok(format!("{rendered}\n"))
}
