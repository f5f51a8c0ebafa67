use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use flagrig::classify::{classify, Verdict};
use flagrig::json::{algebra_doc, verdict_to_json};
use flagrig::models::{
    a4_deg_table, build_model, compare_graded, render, verify_bracket_table, Profile, CATALOG,
};
use flagrig::prolongation::prolongation_tower;
use flagrig::selftest::run_all;
use flagrig::serre::{degree_one_presentation, parabolic_nilradical};
use flagrig::splitting::{distribution_splitting, relative_fiber_splitting};
use flagrig::{nilpotent_quotient, Error, GradedLieAlgebra, MarkedDiagram};

#[derive(Parser)]
#[command(name = "flagrig", version, about = "Root data, graded nilradicals and rigidity of marked ADE diagrams")]
struct Cli {
    /// Run the subcommand once per line of FILE, using the line as its spec.
    #[arg(long, global = true, value_name = "FILE")]
    batch: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Clone)]
enum Cmd {
    /// Positive roots with heights.
    Roots { spec: Option<String> },
    /// Graded dimensions, total dimension and Picard number.
    Dims { spec: Option<String> },
    /// Basis and structure constants of the negative nilradical.
    Nilradical {
        spec: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Degree-one presentation, its quotient dimensions and the comparison.
    Present { spec: Option<String> },
    /// Build a catalog model (or STD(<spec>)).
    Model {
        id: Option<String>,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// List the model catalog.
    Models,
    /// Graded comparison of two models or diagrams.
    Compare { a: String, b: String },
    /// Prolongation tower against root data.
    Prolong {
        spec: Option<String>,
        #[arg(long, default_value_t = 2)]
        steps: usize,
    },
    /// Splitting type of a distribution layer along a minimal curve.
    Split {
        spec: Option<String>,
        #[arg(long)]
        beta: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        alpha: usize,
    },
    /// Splitting type of a relative tangent bundle along a minimal curve.
    SplitFiber {
        spec: Option<String>,
        #[arg(long = "A", value_delimiter = ',', required = true)]
        subset: Vec<usize>,
        #[arg(long)]
        alpha: usize,
    },
    /// Rigidity verdict with its rule trace.
    Classify {
        spec: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in acceptance checks.
    Selftest,
}

struct Outcome {
    out: String,
    err: String,
    code: u8,
}

impl Outcome {
    fn ok(out: String) -> Self {
        Outcome { out, err: String::new(), code: 0 }
    }

    fn failed(out: String, code: u8, err: String) -> Self {
        Outcome { out, err, code }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Outcome { out: String::new(), err: format!("error: {e}"), code: e.exit_code() as u8 }
    }
}

fn node(i: usize) -> Result<usize, Error> {
    i.checked_sub(1).ok_or_else(|| Error::Parse("node numbers start at 1".into()))
}

fn tuple(xs: &[usize]) -> String {
    format!("({})", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn algebra_or_diagram(id: &str) -> Result<GradedLieAlgebra, Error> {
    match build_model(id) {
        Err(Error::UnknownModel(_)) if MarkedDiagram::parse(id).is_ok() => build_model(&format!("STD({id})")),
        r => r,
    }
}

fn json_text<T: serde::Serialize>(x: &T, compact: bool) -> String {
    let s = if compact { serde_json::to_string(x) } else { serde_json::to_string_pretty(x) };
    s.expect("serializable") + "\n"
}

fn write_algebra(out: &mut String, g: &GradedLieAlgebra) {
    let _ = writeln!(out, "dims {} total {}", tuple(&g.dims()), g.dim());
    for i in 0..g.dim() {
        let _ = writeln!(out, "  {} degree -{}", g.label(i), g.degree(i));
    }
    for (&(i, j), v) in g.structure_constants() {
        let _ = writeln!(out, "  [{},{}] = {}", g.label(i), g.label(j), render(g, v));
    }
}

fn write_profile(out: &mut String, name: &str, p: &Profile) {
    let _ = writeln!(
        out,
        "{name}: dims {} lower central {} centre {} generic ad ranks {} bracket ranks {}",
        tuple(&p.dims),
        tuple(&p.lower_central),
        tuple(&p.center),
        tuple(&p.generic_ad_ranks),
        tuple(&p.bracket_ranks)
    );
}

fn write_verdict(out: &mut String, v: &Verdict, depth: usize) {
    let pad = "  ".repeat(depth);
    let _ = writeln!(out, "{pad}{} -> {} (canonical {})", v.input, v, v.canonical_form);
    if let Some(d) = &v.degeneration {
        let model = d.model.as_ref().map(|m| format!(" [model {m}]")).unwrap_or_default();
        let _ = writeln!(out, "{pad}  degeneration: {}{model}", d.name);
    }
    for c in &v.constraints {
        let _ = writeln!(out, "{pad}  constraint: {c}");
    }
    for s in &v.trace {
        let _ = writeln!(out, "{pad}  {}: {}", s.rule, s.citation);
        for w in &s.witnesses {
            if w.subset.is_empty() {
                let _ = writeln!(out, "{pad}    pair {:?}: no marked subset has a rigid fiber", w.pair);
            } else {
                let _ = writeln!(out, "{pad}    pair {:?} via A = {:?}", w.pair, w.subset);
            }
        }
        for c in &s.children {
            write_verdict(out, c, depth + 2);
        }
    }
}

fn spec_of<'a>(spec: &'a Option<String>, item: Option<&'a str>) -> Result<&'a str, Error> {
    item.or(spec.as_deref()).ok_or_else(|| Error::Parse("missing <spec> argument".into()))
}

/// Runs one command; `item` overrides the spec in batch mode.
fn execute(cmd: &Cmd, item: Option<&str>, compact: bool) -> Outcome {
    match run_cmd(cmd, item, compact) {
        Ok(o) => o,
        Err(e) => e.into(),
    }
}

fn run_cmd(cmd: &Cmd, item: Option<&str>, compact: bool) -> Result<Outcome, Error> {
    let mut out = String::new();
    match cmd {
        Cmd::Roots { spec } => {
            let md = MarkedDiagram::parse(spec_of(spec, item)?)?;
            let roots = md.positive_roots();
            let _ = writeln!(out, "{} positive roots", roots.len());
            for r in roots {
                let _ = writeln!(out, "  {} height {}", r.pretty(), r.height());
            }
        }
        Cmd::Dims { spec } => {
            let md = MarkedDiagram::parse(spec_of(spec, item)?)?;
            if md.marked().is_empty() {
                return Err(Error::EmptyMarking);
            }
            let _ = writeln!(out, "{} picard number {}", md.graded_dims(), md.picard_number());
        }
        Cmd::Nilradical { spec, json } => {
            let md = MarkedDiagram::parse(spec_of(spec, item)?)?;
            let h = parabolic_nilradical(&md)?;
            if *json {
                out = json_text(&algebra_doc(&h.algebra), compact);
            } else {
                write_algebra(&mut out, &h.algebra);
            }
        }
        Cmd::Present { spec } => {
            let md = MarkedDiagram::parse(spec_of(spec, item)?)?;
            let (p, _) = degree_one_presentation(&md)?;
            let _ = writeln!(out, "generators {}: {}", p.num_generators(), p.labels.join(" "));
            let _ = writeln!(out, "relations {}", p.relations.len());
            for r in &p.relations {
                let _ = writeln!(out, "  {}", r.render(&|i| p.labels[i].clone()));
            }
            let expected = md.graded_dims().dims;
            let found = nilpotent_quotient(&p).map(|g| g.dims());
            let _ = writeln!(out, "nilradical dims {}", tuple(&expected));
            match found {
                Ok(d) if d == expected => {
                    let _ = writeln!(out, "quotient dims {}\nmatch yes", tuple(&d));
                }
                Ok(d) => {
                    let _ = writeln!(out, "quotient dims {}\nmatch no", tuple(&d));
                    return Ok(Outcome::failed(out, 4, "error: quotient dimensions differ".into()));
                }
                Err(e) => return Ok(Outcome::failed(out, e.exit_code() as u8, format!("error: {e}"))),
            }
        }
        Cmd::Model { id, verify, json } => {
            let id = spec_of(id, item)?;
            let g = build_model(id)?;
            if *json {
                out = json_text(&algebra_doc(&g), compact);
            } else {
                let _ = writeln!(out, "{id}");
                write_algebra(&mut out, &g);
            }
            if *verify {
                let mut problems = Vec::new();
                if let Some(m) = CATALOG.iter().find(|m| m.id == id) {
                    if g.dims() != m.expected_dims {
                        problems.push(format!("dims {} expected {}", tuple(&g.dims()), tuple(m.expected_dims)));
                    }
                }
                if !g.check_jacobi() {
                    problems.push("Jacobi identity fails".into());
                }
                if id == "A4_DEG" {
                    for m in verify_bracket_table(&g, &a4_deg_table())? {
                        problems.push(format!("[{},{}] = {} expected {}", m.left, m.right, m.actual, m.expected));
                    }
                }
                if !*json {
                    let _ = writeln!(out, "verify {}", if problems.is_empty() { "ok" } else { "FAILED" });
                }
                if !problems.is_empty() {
                    return Ok(Outcome::failed(out, 4, problems.join("\n")));
                }
            }
        }
        Cmd::Models => {
            for m in CATALOG {
                let _ = writeln!(out, "{:<14} {:<14} {}", m.id, tuple(m.expected_dims), m.description);
            }
            let _ = writeln!(out, "{:<14} {:<14} standard nilradical of any marked diagram", "STD(<spec>)", "");
        }
        Cmd::Compare { a, b } => {
            let (ga, gb) = (algebra_or_diagram(a)?, algebra_or_diagram(b)?);
            let c = compare_graded(&ga, &gb, None);
            write_profile(&mut out, a, &c.profile_a);
            write_profile(&mut out, b, &c.profile_b);
            let _ = writeln!(out, "{}", c.summary());
        }
        Cmd::Prolong { spec, steps } => {
            let md = MarkedDiagram::parse(spec_of(spec, item)?)?;
            let r = prolongation_tower(&md, *steps)?;
            let _ = writeln!(out, "{}", r.diagram);
            let _ = writeln!(out, "step computed root-data verified");
            for row in &r.rows {
                let _ = writeln!(out, "{:>4} {:>8} {:>9} {}", row.step, row.computed, row.root_data, row.verified);
            }
            if r.exception {
                let _ = writeln!(out, "note: exceptional marking, degree-0 derivations may exceed g_0");
            }
            let bad = r.mismatches();
            if !bad.is_empty() {
                let _ = writeln!(out, "mismatch at steps {bad:?}");
            }
            if r.rows.iter().any(|x| !x.verified) || (!bad.is_empty() && !r.exception) {
                return Ok(Outcome::failed(out, 4, "error: tower disagrees with root data".into()));
            }
        }
        Cmd::Split { spec, beta, k, alpha } => {
            let md = MarkedDiagram::parse(spec_of(spec, item)?)?;
            let t = distribution_splitting(&md, node(*beta)?, *k, node(*alpha)?)?;
            let _ = writeln!(out, "{t} total {}", t.total);
        }
        Cmd::SplitFiber { spec, subset, alpha } => {
            let md = MarkedDiagram::parse(spec_of(spec, item)?)?;
            let a: BTreeSet<usize> = subset.iter().map(|&i| node(i)).collect::<Result<_, _>>()?;
            let t = relative_fiber_splitting(&md, &a, node(*alpha)?)?;
            let _ = writeln!(out, "{t} total {}", t.total);
        }
        Cmd::Classify { spec, json } => {
            let md = MarkedDiagram::parse(spec_of(spec, item)?)?;
            let v = classify(&md)?;
            if *json {
                out = if compact { json_text(&v, true) } else { verdict_to_json(&v) + "\n" };
            } else {
                write_verdict(&mut out, &v, 0);
            }
        }
        Cmd::Selftest => {
            let checks = run_all();
            for c in &checks {
                let _ = writeln!(out, "{c}");
            }
            let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.criterion.to_string()).collect();
            let _ = writeln!(out, "{} of {} criteria passed", checks.len() - failed.len(), checks.len());
            if !failed.is_empty() {
                return Ok(Outcome::failed(out, 4, format!("failed criteria: {}", failed.join(", "))));
            }
        }
    }
    Ok(Outcome::ok(out))
}

fn batch_capable(cmd: &Cmd) -> bool {
    !matches!(cmd, Cmd::Models | Cmd::Compare { .. } | Cmd::Selftest)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcomes: Vec<Outcome> = match &cli.batch {
        None => vec![execute(&cli.cmd, None, false)],
        Some(path) => {
            if !batch_capable(&cli.cmd) {
                eprintln!("error: this subcommand does not take --batch");
                return ExitCode::from(2);
            }
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            };
            let items: Vec<&str> =
                text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
            items
                .par_iter()
                .map(|item| {
                    let mut o = execute(&cli.cmd, Some(item), true);
                    if !o.err.is_empty() {
                        o.err = format!("{item}: {}", o.err);
                    }
                    o
                })
                .collect()
        }
    };
    let mut code = 0;
    for o in &outcomes {
        print!("{}", o.out);
        if !o.err.is_empty() {
            eprintln!("{}", o.err);
        }
        code = code.max(o.code);
    }
    ExitCode::from(code)
}
