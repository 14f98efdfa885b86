//! Cross-checks every construction against the others on one tree.

use serde::Serialize;
use serde_json::{json, Value};

use crate::graph::PlumbingTree;
use crate::intform::{self, smith_normal_form};
use crate::legendrian::{self, c1_consistent, c1_vector, conjugate_plan, front_stats, run_plan};
use crate::openbook::{self, canonical_form, compose_from_edges, is_noncrossing, openbook_from_tree, PlanarOpenBook};
use crate::rollup::{self, RolledLink};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: &'static str,
    pub status: Status,
    /// On failure, the first offending datum.
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<CheckEntry>,
    pub pass: bool,
}

impl CheckReport {
    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// 0 when everything passes, 1 when the tree is not non-positive, 3 on
    /// any other mismatch.
    pub fn exit_code(&self) -> i32 {
        if self.get("validation").is_some_and(|c| c.status == Status::Fail) {
            1
        } else if self.pass {
            0
        } else {
            3
        }
    }
}

/// Deliberate corruption of the rolled link before checking, used to make
/// sure mismatches are caught.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Add one to the linking matrix entry `(i, j)`.
    pub q_fault: Option<(usize, usize)>,
    /// Add one to the recorded framing of a component.
    pub framing_fault: Option<usize>,
}

pub const CHECK_NAMES: [&str; 6] = [
    "validation",
    "congruence",
    "route_equivalence",
    "counting",
    "legendrian_consistency",
    "homology",
];

pub fn check_all(tree: &PlumbingTree) -> CheckReport {
    check_all_with(tree, CheckOptions::default())
}

pub fn check_all_with(tree: &PlumbingTree, opts: CheckOptions) -> CheckReport {
    let report = tree.validate();
    let mut checks = Vec::with_capacity(CHECK_NAMES.len());
    let valid = report.non_positive;
    checks.push(entry(
        "validation",
        valid,
        json!({
            "non_positive": report.non_positive,
            "milnor_criterion": report.milnor_criterion,
            "violations": report.violations,
        }),
    ));
    if !valid {
        for name in &CHECK_NAMES[1..] {
            checks.push(CheckEntry {
                name,
                status: Status::Skipped,
                detail: Value::Null,
            });
        }
        return CheckReport { checks, pass: false };
    }

    let mut link = rollup::rolled_link(tree).expect("non-positive trees decompose");
    let n = link.q.dim();
    if let Some((i, j)) = opts.q_fault {
        if i < n && j < n {
            let v = link.q.get(i, j) + 1;
            link.q.set(i, j, v);
        }
    }
    if let Some(k) = opts.framing_fault {
        if let Some(c) = link.components.get_mut(k) {
            c.framing += 1;
        }
    }

    checks.push(congruence(tree, &link));
    let books = route_books(tree, &link);
    checks.push(route_equivalence(&books));
    checks.push(counting(tree, &books));
    checks.push(legendrian_consistency(tree, &link));
    checks.push(homology(tree, &link));
    let pass = checks.iter().all(|c| c.status == Status::Pass);
    CheckReport { checks, pass }
}

fn entry(name: &'static str, ok: bool, detail: Value) -> CheckEntry {
    CheckEntry {
        name,
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

fn congruence(tree: &PlumbingTree, link: &RolledLink) -> CheckEntry {
    let a = tree.intersection_matrix();
    let by_basis = match intform::congruence_transform(&a, &link.p) {
        Ok(m) => m,
        Err(e) => return entry("congruence", false, json!({ "error": e.to_string() })),
    };
    let by_slides = rollup::handle_slide_oracle(tree).expect("non-positive trees decompose");
    let n = a.dim();
    for i in 0..n {
        if link.q.get(i, i) != &link.components[i].framing.into() {
            return entry(
                "congruence",
                false,
                json!({ "component": i, "framing": link.components[i].framing, "q_diagonal": link.q.get(i, i).to_string() }),
            );
        }
        for j in 0..n {
            let q = link.q.get(i, j);
            if q != by_basis.get(i, j) || q != by_slides.get(i, j) {
                return entry(
                    "congruence",
                    false,
                    json!({
                        "entry": [i, j],
                        "q": q.to_string(),
                        "pt_a_p": by_basis.get(i, j).to_string(),
                        "handle_slides": by_slides.get(i, j).to_string(),
                    }),
                );
            }
        }
    }
    entry("congruence", true, json!({ "dimension": n }))
}

struct RouteBooks {
    tree: Result<PlanarOpenBook, String>,
    edges: Result<PlanarOpenBook, String>,
    plan: Result<PlanarOpenBook, String>,
}

impl RouteBooks {
    fn named(&self) -> [(&'static str, &Result<PlanarOpenBook, String>); 3] {
        [("tree", &self.tree), ("edges", &self.edges), ("plan", &self.plan)]
    }
}

fn route_books(tree: &PlumbingTree, link: &RolledLink) -> RouteBooks {
    let plan = legendrian::plan_for_link(tree, link.clone());
    RouteBooks {
        tree: openbook_from_tree(tree).map_err(|e| e.to_string()),
        edges: compose_from_edges(tree).map_err(|e| e.to_string()),
        plan: run_plan(&plan.moves).map_err(|e| e.to_string()),
    }
}

fn route_equivalence(books: &RouteBooks) -> CheckEntry {
    let mut codes = serde_json::Map::new();
    let mut distinct = Vec::new();
    for (name, book) in books.named() {
        match book {
            Ok(b) => {
                let code = canonical_form(b).code;
                if !distinct.contains(&code) {
                    distinct.push(code.clone());
                }
                codes.insert(name.into(), json!(code));
            }
            Err(e) => {
                return entry("route_equivalence", false, json!({ "route": name, "error": e }));
            }
        }
    }
    entry("route_equivalence", distinct.len() == 1, Value::Object(codes))
}

fn counting(tree: &PlumbingTree, books: &RouteBooks) -> CheckEntry {
    let boundaries: usize = (0..tree.len())
        .map(|v| (-tree.euler(v)) as usize - tree.degree(v))
        .sum();
    let twists: usize =
        (0..tree.len()).map(|v| (-tree.euler(v)) as usize).sum::<usize>() - (tree.len() - 1);
    for (name, book) in books.named() {
        let Ok(b) = book else {
            return entry("counting", false, json!({ "route": name, "error": "construction failed" }));
        };
        let stats = b.page_stats();
        if stats.boundary_components != boundaries
            || stats.twists != twists
            || !is_noncrossing(b.curves(), b.boundaries())
        {
            return entry(
                "counting",
                false,
                json!({
                    "route": name,
                    "expected": { "boundaries": boundaries, "twists": twists },
                    "found": stats,
                }),
            );
        }
    }
    entry(
        "counting",
        true,
        json!({ "boundaries": boundaries, "twists": twists }),
    )
}

fn legendrian_consistency(tree: &PlumbingTree, link: &RolledLink) -> CheckEntry {
    const NAME: &str = "legendrian_consistency";
    let plan = legendrian::plan_for_link(tree, link.clone());
    let front = front_stats(&plan);
    for f in &front.components {
        let m = f.framing;
        let expected_zig = (-m - 2).max(0) as usize;
        if !f.consistent() || f.zigzags != expected_zig {
            return entry(NAME, false, json!({ "component": f }));
        }
        if f.position > 0 {
            let v = link.decomposition.chain(f.chain).vertices[f.position];
            if f.new_zigzags as i64 != (tree.euler(v) + 2).abs() {
                return entry(NAME, false, json!({ "component": f, "euler": tree.euler(v) }));
            }
        }
    }
    let c1 = c1_vector(&plan);
    if !c1_consistent(&plan, &c1) {
        return entry(NAME, false, json!({ "c1": c1 }));
    }
    let conj = c1_vector(&conjugate_plan(&plan));
    let negated = conj.per_component.iter().zip(&c1.per_component).all(|(a, b)| *a == -b)
        && conj.per_vertex.iter().zip(&c1.per_vertex).all(|(a, b)| *a == -b);
    if !negated {
        return entry(NAME, false, json!({ "c1": c1, "conjugate": conj }));
    }
    let conj_book = run_plan(&conjugate_plan(&plan).moves).map_err(|e| e.to_string());
    let book = run_plan(&plan.moves).map_err(|e| e.to_string());
    match (book, conj_book) {
        (Ok(a), Ok(b)) if openbook::isomorphic(&a, &b) => {
            entry(NAME, true, json!({ "components": front.components.len() }))
        }
        (a, b) => entry(
            NAME,
            false,
            json!({ "plan": a.map(|b| canonical_form(&b).code), "conjugate": b.map(|b| canonical_form(&b).code) }),
        ),
    }
}

fn homology(tree: &PlumbingTree, link: &RolledLink) -> CheckEntry {
    let a = tree.intersection_matrix();
    let sa = smith_normal_form(&a);
    let sq = smith_normal_form(&link.q);
    let da = intform::determinant(&a);
    let dq = intform::determinant(&link.q);
    let fa: Vec<String> = sa.d.iter().map(ToString::to_string).collect();
    let fq: Vec<String> = sq.d.iter().map(ToString::to_string).collect();
    entry(
        "homology",
        fa == fq && da.magnitude() == dq.magnitude(),
        json!({
            "invariant_factors": fa,
            "rolled_invariant_factors": fq,
            "det": da.to_string(),
            "rolled_det": dq.to_string(),
        }),
    )
}
