//! Plumbing trees: the weighted trees whose vertices are circle bundles over
//! spheres (weighted by Euler number) and whose edges prescribe plumbing.
//!
//! Trees are read from a small line-based format:
//!
//! ```text
//! # comments and blank lines are ignored
//! vertex a -2
//! vertex b -3
//! edge a b
//! ```
//!
//! and from the equivalent JSON document
//! `{"vertices":[{"id":"a","euler":-2}],"edges":[["a","b"]]}`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intform::{self, IntMatrix};

/// Largest Euler number a vertex may carry.
pub const MAX_EULER: i64 = -2;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid JSON document: {0}")]
    Json(String),
    #[error("tree has no vertices")]
    Empty,
    #[error("duplicate vertex id `{0}`")]
    DuplicateId(String),
    #[error("edge references unknown vertex `{0}`")]
    UnknownId(String),
    #[error("vertex `{id}` has Euler number {euler}, expected <= {MAX_EULER}")]
    EulerTooLarge { id: String, euler: i64 },
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("edge `{0}`-`{1}` declared twice")]
    DuplicateEdge(String, String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph contains a cycle")]
    Cyclic,
    #[error("invalid vertex id `{0}`")]
    InvalidId(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub euler: i64,
}

/// A weighted tree. Vertex order is declaration order and is the row order of
/// every matrix derived from the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingTree {
    vertices: Vec<Vertex>,
    /// Index pairs with `a < b`.
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TreeDocument {
    vertices: Vec<Vertex>,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && !id.starts_with('#') && !id.chars().any(char::is_whitespace)
}

impl PlumbingTree {
    /// Builds a tree from vertices in declaration order and edges given by id.
    pub fn new<I, E>(vertices: I, edges: E) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (String, i64)>,
        E: IntoIterator<Item = (String, String)>,
    {
        let mut index = HashMap::new();
        let mut vs = Vec::new();
        for (id, euler) in vertices {
            if !valid_id(&id) {
                return Err(GraphError::InvalidId(id));
            }
            if euler > MAX_EULER {
                return Err(GraphError::EulerTooLarge { id, euler });
            }
            if index.insert(id.clone(), vs.len()).is_some() {
                return Err(GraphError::DuplicateId(id));
            }
            vs.push(Vertex { id, euler });
        }
        if vs.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut es = BTreeSet::new();
        for (a, b) in edges {
            let ia = *index.get(&a).ok_or_else(|| GraphError::UnknownId(a.clone()))?;
            let ib = *index.get(&b).ok_or_else(|| GraphError::UnknownId(b.clone()))?;
            if ia == ib {
                return Err(GraphError::SelfLoop(a));
            }
            if !es.insert((ia.min(ib), ia.max(ib))) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        Self::from_parts(vs, es)
    }

    fn from_parts(vertices: Vec<Vertex>, edges: BTreeSet<(usize, usize)>) -> Result<Self, GraphError> {
        let n = vertices.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        // A connected graph with n vertices is a tree iff it has n - 1 edges.
        if reached < n {
            return Err(GraphError::Disconnected);
        }
        if edges.len() != n - 1 {
            return Err(GraphError::Cyclic);
        }
        Ok(PlumbingTree {
            vertices,
            edges,
            adjacency,
        })
    }

    /// A linear tree `v1 - v2 - ... - vk` with the given Euler numbers.
    pub fn linear(eulers: &[i64]) -> Result<Self, GraphError> {
        let vertices = eulers
            .iter()
            .enumerate()
            .map(|(i, &e)| (format!("v{}", i + 1), e));
        let edges = (1..eulers.len()).map(|i| (format!("v{i}"), format!("v{}", i + 1)));
        Self::new(vertices, edges)
    }

    /// Parses the line-based tree format.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut vertices: Vec<(String, i64)> = Vec::new();
        let mut edges = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let tokens = tokenize(line);
            let Some(&(col, keyword)) = tokens.first() else {
                continue;
            };
            let syntax = |column: usize, message: String| GraphError::Syntax {
                line: lineno + 1,
                column,
                message,
            };
            match keyword {
                "vertex" => {
                    if tokens.len() != 3 {
                        return Err(syntax(col, "expected `vertex <id> <euler>`".into()));
                    }
                    let id = tokens[1].1;
                    let (e_col, e) = tokens[2];
                    let euler: i64 = e
                        .parse()
                        .map_err(|_| syntax(e_col, format!("invalid Euler number `{e}`")))?;
                    vertices.push((id.to_string(), euler));
                }
                "edge" => {
                    if tokens.len() != 3 {
                        return Err(syntax(col, "expected `edge <id> <id>`".into()));
                    }
                    edges.push((tokens[1].1.to_string(), tokens[2].1.to_string()));
                }
                other => {
                    return Err(syntax(col, format!("unknown keyword `{other}`")));
                }
            }
        }
        Self::new(vertices, edges)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let doc: TreeDocument =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Self::new(
            doc.vertices.into_iter().map(|v| (v.id, v.euler)),
            doc.edges,
        )
    }

    /// Parses either format, picking JSON when the document starts with `{`.
    pub fn parse_any(text: &str) -> Result<Self, GraphError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::parse(text)
        }
    }

    /// Canonical text form: vertices in declaration order, then edges sorted
    /// by the declaration indices of their endpoints.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("vertex {} {}\n", v.id, v.euler));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!(
                "edge {} {}\n",
                self.vertices[a].id, self.vertices[b].id
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = TreeDocument {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| (self.vertices[a].id.clone(), self.vertices[b].id.clone()))
                .collect(),
        };
        serde_json::to_value(doc).expect("tree document serializes")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn euler(&self, i: usize) -> i64 {
        self.vertices[i].euler
    }

    pub fn id(&self, i: usize) -> &str {
        &self.vertices[i].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// Edges as index pairs `(a, b)` with `a < b`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Neighbours of `i` in increasing index order.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.len()).map(|i| self.degree(i)).collect()
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.degree(i) == 1
    }

    /// The plumbing matrix: Euler numbers on the diagonal, 1 for each edge.
    pub fn intersection_matrix(&self) -> IntMatrix {
        let n = self.len();
        let mut m = IntMatrix::zeros(n);
        for (i, v) in self.vertices.iter().enumerate() {
            m.set(i, i, v.euler);
        }
        for &(a, b) in &self.edges {
            m.set(a, b, 1);
            m.set(b, a, 1);
        }
        m
    }

    /// Checks the non-positivity and Milnor inequalities at every vertex.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut non_positive = true;
        let mut milnor = true;
        for (i, v) in self.vertices.iter().enumerate() {
            let d = self.degree(i) as i64;
            if v.euler + d > 0 {
                non_positive = false;
                violations.push(Violation {
                    vertex: v.id.clone(),
                    check: Check::NonPositive,
                });
            }
            if v.euler + 2 * d > 0 {
                milnor = false;
                violations.push(Violation {
                    vertex: v.id.clone(),
                    check: Check::MilnorCriterion,
                });
            }
        }
        let negative_definite = intform::is_negative_definite(&self.intersection_matrix())
            .expect("intersection matrix is symmetric");
        ValidationReport {
            non_positive,
            milnor_criterion: milnor,
            negative_definite,
            violations,
        }
    }
}

impl fmt::Display for PlumbingTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, byte)),
            (true, Some((c, s))) => {
                out.push((c, &line[s..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, s)) = start {
        out.push((c, &line[s..]));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    NonPositive,
    MilnorCriterion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub vertex: String,
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// `e_v + d_v <= 0` at every vertex.
    pub non_positive: bool,
    /// `e_v + 2 d_v <= 0` at every vertex.
    pub milnor_criterion: bool,
    pub negative_definite: bool,
    pub violations: Vec<Violation>,
}
