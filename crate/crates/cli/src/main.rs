use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use plumbob::check::{check_all_with, CheckOptions, Status};
use plumbob::contfrac::{hj_expand, lens_tree, LensParams};
use plumbob::intform::{determinant, smith_normal_form, IntMatrix};
use plumbob::legendrian::{c1_vector, conjugate_plan, front_stats, plan, run_plan, ZigzagSide};
use plumbob::openbook::{canonical_form, compose_from_edges, openbook_from_tree, PlanarOpenBook};
use plumbob::render::{render_front_svg, render_page_svg, render_tree_svg};
use plumbob::rollup::{rolled_link, RolledLink};
use plumbob::PlumbingTree;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "plumbob", version, about = "Rolled-up diagrams, planar open books and Legendrian data of plumbing trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the non-positivity and Milnor conditions
    Validate(FileArgs),
    /// Hirzebruch-Jung expansion of -P/Q and its linear tree
    Lens {
        p: i64,
        q: i64,
        #[arg(long)]
        json: bool,
    },
    /// Chain decomposition, rolled framings, twist boxes, linking matrix
    Rollup(FileArgs),
    /// Planar open book supporting the contact structure
    Openbook {
        #[command(flatten)]
        file: FileArgs,
        #[arg(long, value_enum, default_value_t = Route::Tree)]
        route: Route,
    },
    /// Legendrian realization and first Chern class
    Legendrian {
        #[command(flatten)]
        file: FileArgs,
        /// Put every zigzag on the left
        #[arg(long)]
        conjugate: bool,
    },
    /// First homology of the boundary from both intersection forms
    Homology(FileArgs),
    /// Run every cross-check
    Check {
        #[command(flatten)]
        file: FileArgs,
        /// Corrupt entry I,J of the linking matrix first
        #[arg(long, hide = true, value_parser = parse_pair)]
        fault_q: Option<(usize, usize)>,
    },
    /// Write an SVG drawing
    Render {
        file: PathBuf,
        #[arg(long, value_enum)]
        what: Drawing,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

#[derive(clap::Args)]
struct FileArgs {
    /// Tree file in the line format or JSON; `-` reads stdin
    file: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Tree,
    Edges,
    Plan,
}

#[derive(Clone, Copy, ValueEnum)]
enum Drawing {
    Tree,
    Page,
    Front,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected I,J")?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((parse(a)?, parse(b)?))
}

/// Failure classes, mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Validation(String),
    Mismatch(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Validation(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Mismatch(out)) => {
            print!("{out}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate(f) => validate(&f),
        Command::Lens { p, q, json } => lens(p, q, json),
        Command::Rollup(f) => rollup(&f),
        Command::Openbook { file, route } => openbook(&file, route),
        Command::Legendrian { file, conjugate } => legendrian(&file, conjugate),
        Command::Homology(f) => homology(&f),
        Command::Check { file, fault_q } => check(&file, fault_q),
        Command::Render { file, what, output } => render(&file, what, &output),
    }
}

fn read_tree(path: &Path) -> Result<PlumbingTree, Failure> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).context("reading stdin")?
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    PlumbingTree::parse_any(&text).map_err(|e| Failure::Usage(anyhow!("{}: {e}", path.display())))
}

/// Trees that fail non-positivity cannot be rolled up.
fn read_valid_tree(path: &Path) -> Result<PlumbingTree, Failure> {
    let tree = read_tree(path)?;
    let report = tree.validate();
    if !report.non_positive {
        let bad: Vec<&str> = report.violations.iter().map(|v| v.vertex.as_str()).collect();
        return Err(Failure::Validation(format!(
            "not a non-positive tree: e + d > 0 at {}\n",
            bad.join(", ")
        )));
    }
    Ok(tree)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn validate(f: &FileArgs) -> Outcome {
    let tree = read_tree(&f.file)?;
    let r = tree.validate();
    let out = if f.json {
        pretty(&json!({ "vertices": tree.len(), "edges": tree.edge_count(), "report": r }))
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "vertices           {}", tree.len());
        let _ = writeln!(s, "edges              {}", tree.edge_count());
        let _ = writeln!(s, "non_positive       {}", r.non_positive);
        let _ = writeln!(s, "milnor_criterion   {}", r.milnor_criterion);
        let _ = writeln!(s, "negative_definite  {}", r.negative_definite);
        for v in &r.violations {
            let _ = writeln!(s, "violation          {} ({:?})", v.vertex, v.check);
        }
        s
    };
    if r.non_positive {
        Ok(out)
    } else {
        Err(Failure::Validation(out))
    }
}

fn lens(p: i64, q: i64, json: bool) -> Outcome {
    let params = LensParams::new(p, q).map_err(|e| Failure::Usage(e.into()))?;
    let exp = hj_expand(params);
    let tree = lens_tree(params).map_err(|e| Failure::Usage(e.into()))?;
    if json {
        return Ok(pretty(&json!({
            "p": p,
            "q": q,
            "expansion": exp.coefficients(),
            "tree": tree.to_json(),
        })));
    }
    let coeffs: Vec<String> = exp.coefficients().iter().map(ToString::to_string).collect();
    Ok(format!("L({p}, {q}): [{}]\n{}", coeffs.join(", "), tree.serialize()))
}

fn chain_json(tree: &PlumbingTree, link: &RolledLink) -> Vec<Value> {
    let dec = &link.decomposition;
    (0..dec.len())
        .map(|c| {
            let ch = dec.chain(c);
            let eulers = dec.eulers(tree, c);
            json!({
                "vertices": ch.vertices.iter().map(|&v| tree.id(v)).collect::<Vec<_>>(),
                "eulers": eulers,
                "framings": link.chain_framings(c),
                "twist_boxes": plumbob::rollup::twist_boxes(&eulers),
                "attachment": ch.attachment.map(|a| json!({
                    "chain": a.parent + 1,
                    "position": a.index + 1,
                    "slot": a.slot + 1,
                })),
            })
        })
        .collect()
}

fn matrix_text(m: &IntMatrix) -> String {
    let rows = m.rows();
    let width = rows.iter().flatten().map(|x| x.to_string().len()).max().unwrap_or(1);
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|x| format!("{:>width$}", x.to_string())).collect();
            format!("  {}\n", cells.join(" "))
        })
        .collect()
}

fn rollup(f: &FileArgs) -> Outcome {
    let tree = read_valid_tree(&f.file)?;
    let link = rolled_link(&tree).map_err(|e| Failure::Usage(e.into()))?;
    if f.json {
        return Ok(pretty(&json!({
            "chains": chain_json(&tree, &link),
            "q": link.q,
            "p": link.p,
        })));
    }
    let mut s = String::new();
    let dec = &link.decomposition;
    for c in 0..dec.len() {
        let ch = dec.chain(c);
        let ids: Vec<&str> = ch.vertices.iter().map(|&v| tree.id(v)).collect();
        match ch.attachment {
            None => {
                let _ = writeln!(s, "chain {}: {}", c + 1, ids.join(" - "));
            }
            Some(a) => {
                let _ = writeln!(
                    s,
                    "chain {}: {} (on chain {} position {}, hole {})",
                    c + 1,
                    ids.join(" - "),
                    a.parent + 1,
                    a.index + 1,
                    a.slot + 1
                );
            }
        }
        let _ = writeln!(s, "  framings     {}", join(&link.chain_framings(c)));
        let _ = writeln!(s, "  twist boxes  {}", join(&plumbob::rollup::twist_boxes(&dec.eulers(&tree, c))));
    }
    let comps: Vec<String> = link.components.iter().map(|c| tree.id(c.vertex).to_string()).collect();
    let _ = writeln!(s, "components (by last vertex): {}", comps.join(" "));
    let _ = writeln!(s, "q (linking matrix):");
    s.push_str(&matrix_text(&link.q));
    let _ = writeln!(s, "p (rows: vertices {}):", join(&(0..tree.len()).map(|v| tree.id(v)).collect::<Vec<_>>()));
    s.push_str(&matrix_text(&link.p));
    Ok(s)
}

fn build_book(tree: &PlumbingTree, route: Route) -> Result<PlanarOpenBook, Failure> {
    let book = match route {
        Route::Tree => openbook_from_tree(tree).map_err(anyhow::Error::from),
        Route::Edges => compose_from_edges(tree).map_err(anyhow::Error::from),
        Route::Plan => plan(tree)
            .and_then(|p| run_plan(&p.moves))
            .map_err(anyhow::Error::from),
    };
    book.map_err(Failure::Usage)
}

fn openbook(f: &FileArgs, route: Route) -> Outcome {
    let tree = read_valid_tree(&f.file)?;
    let book = build_book(&tree, route)?;
    let stats = book.page_stats();
    if f.json {
        let mut v = book.to_json();
        v["page"] = json!(stats);
        return Ok(pretty(&v));
    }
    let canon = canonical_form(&book);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "page: sphere with {} holes (euler characteristic {}), {} twists",
        stats.boundary_components, stats.euler_characteristic, stats.twists
    );
    let labels: Vec<&str> = book.boundaries().iter().map(String::as_str).collect();
    let _ = writeln!(s, "boundaries: {}", labels.join(" "));
    let _ = writeln!(s, "outer boundary: {}", canon.root);
    for (side, k) in book.rooted_multiplicities(&canon.root) {
        let inside: Vec<&str> = side.iter().map(String::as_str).collect();
        let _ = writeln!(s, "  {k} x around {{{}}}", inside.join(", "));
    }
    let _ = writeln!(s, "canonical code: {}", canon.code);
    Ok(s)
}

fn side_name(s: ZigzagSide) -> &'static str {
    match s {
        ZigzagSide::Left => "left",
        ZigzagSide::Right => "right",
    }
}

fn legendrian(f: &FileArgs, conjugate: bool) -> Outcome {
    let tree = read_valid_tree(&f.file)?;
    let mut p = plan(&tree).map_err(|e| Failure::Usage(e.into()))?;
    if conjugate {
        p = conjugate_plan(&p);
    }
    let front = front_stats(&p);
    let c1 = c1_vector(&p);
    if f.json {
        return Ok(pretty(&json!({
            "conjugated": conjugate,
            "components": front.components,
            "twist_boxes": front.twist_boxes,
            "c1": {
                "per_component": c1.per_component,
                "per_vertex": (0..tree.len()).map(|v| json!({ "id": tree.id(v), "value": c1.per_vertex[v] })).collect::<Vec<_>>(),
            },
        })));
    }
    let mut s = String::new();
    let _ = writeln!(s, "{:>4} {:>5} {:>4} {:>7} {:>4} {:>4} {:>7}  side", "comp", "chain", "pos", "framing", "tb", "rot", "zigzags");
    for c in &front.components {
        let _ = writeln!(
            s,
            "{:>4} {:>5} {:>4} {:>7} {:>4} {:>4} {:>7}  {}",
            c.component + 1,
            c.chain + 1,
            c.position + 1,
            c.framing,
            c.tb,
            c.rot,
            c.zigzags,
            side_name(c.side)
        );
    }
    let _ = writeln!(s, "c1 on components: {}", join(&c1.per_component));
    let per_vertex: Vec<String> = (0..tree.len()).map(|v| format!("{}={}", tree.id(v), c1.per_vertex[v])).collect();
    let _ = writeln!(s, "c1 on vertices:   {}", per_vertex.join(" "));
    Ok(s)
}

fn homology_group(factors: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for d in factors {
        match d.as_str() {
            "1" => {}
            "0" => parts.push("Z".into()),
            d => parts.push(format!("Z/{d}")),
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn homology(f: &FileArgs) -> Outcome {
    let tree = read_tree(&f.file)?;
    let a = tree.intersection_matrix();
    let fa: Vec<String> = smith_normal_form(&a).d.iter().map(ToString::to_string).collect();
    let det = determinant(&a);
    let rolled = if tree.validate().non_positive {
        let link = rolled_link(&tree).map_err(|e| Failure::Usage(e.into()))?;
        Some((
            smith_normal_form(&link.q).d.iter().map(ToString::to_string).collect::<Vec<_>>(),
            determinant(&link.q),
        ))
    } else {
        None
    };
    let agree = rolled
        .as_ref()
        .is_none_or(|(fq, dq)| *fq == fa && dq.magnitude() == det.magnitude());
    let out = if f.json {
        pretty(&json!({
            "invariant_factors": fa,
            "determinant": det.to_string(),
            "h1": homology_group(&fa),
            "rolled": rolled.as_ref().map(|(fq, dq)| json!({ "invariant_factors": fq, "determinant": dq.to_string() })),
            "agree": agree,
        }))
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "H_1 = {}", homology_group(&fa));
        let _ = writeln!(s, "invariant factors  {}", fa.join(" "));
        let _ = writeln!(s, "det A              {det}");
        match &rolled {
            Some((fq, dq)) => {
                let _ = writeln!(s, "rolled factors     {}", fq.join(" "));
                let _ = writeln!(s, "det Q              {dq}");
            }
            None => {
                let _ = writeln!(s, "rolled             (tree is not non-positive)");
            }
        }
        s
    };
    if agree {
        Ok(out)
    } else {
        Err(Failure::Mismatch(out))
    }
}

fn check(f: &FileArgs, fault_q: Option<(usize, usize)>) -> Outcome {
    let tree = read_tree(&f.file)?;
    let report = check_all_with(&tree, CheckOptions { q_fault: fault_q, framing_fault: None });
    let out = if f.json {
        pretty(&json!(report))
    } else {
        let mut s = String::new();
        for c in &report.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            let _ = write!(s, "{status}  {}", c.name);
            if c.status == Status::Fail {
                let _ = write!(s, "  {}", c.detail);
            }
            s.push('\n');
        }
        let _ = writeln!(s, "{}", if report.pass { "all checks passed" } else { "checks failed" });
        s
    };
    match report.exit_code() {
        0 => Ok(out),
        1 => Err(Failure::Validation(out)),
        _ => Err(Failure::Mismatch(out)),
    }
}

fn render(file: &Path, what: Drawing, output: &Path) -> Outcome {
    let tree = match what {
        Drawing::Tree => read_tree(file)?,
        _ => read_valid_tree(file)?,
    };
    let doc = match what {
        Drawing::Tree => render_tree_svg(&tree),
        Drawing::Page => render_page_svg(&build_book(&tree, Route::Tree)?),
        Drawing::Front => render_front_svg(&plan(&tree).map_err(|e| Failure::Usage(e.into()))?),
    };
    std::fs::write(output, &doc.text).with_context(|| format!("writing {}", output.display()))?;
    Ok(format!("wrote {}\n", output.display()))
}
