//! Tree generators for test suites: seeded random non-positive trees and an
//! exhaustive enumeration of small ones.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::PlumbingTree;

/// Seed used when `PLUMBOB_SEED` is unset or unparsable.
pub const DEFAULT_SEED: u64 = 0x5eed_b00c;

/// Suite seed from the `PLUMBOB_SEED` environment variable.
pub fn seed_from_env() -> u64 {
    std::env::var("PLUMBOB_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// The branched example: chain `-2, -6, -2` with the chain `-4, -3` hanging
/// off its middle vertex.
pub fn branched_example() -> PlumbingTree {
    PlumbingTree::parse(
        "vertex u1 -2\nvertex u2 -6\nvertex u3 -2\nvertex v1 -4\nvertex v2 -3\n\
         edge u1 u2\nedge u2 u3\nedge u2 v1\nedge v1 v2\n",
    )
    .expect("example parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomTreeParams {
    pub max_vertices: usize,
    pub min_euler: i64,
    pub max_degree: usize,
    /// Keep `e + d <= 0` at every vertex.
    pub non_positive: bool,
}

impl Default for RandomTreeParams {
    fn default() -> Self {
        RandomTreeParams {
            max_vertices: 12,
            min_euler: -9,
            max_degree: 4,
            non_positive: true,
        }
    }
}

/// A random tree grown by attaching each new vertex to an earlier one. Ids
/// and declaration order are shuffled so nothing downstream can rely on them.
pub fn random_tree<R: Rng>(rng: &mut R, params: RandomTreeParams) -> PlumbingTree {
    let n = rng.gen_range(1..=params.max_vertices);
    let mut degree = vec![0usize; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&u| degree[u] < params.max_degree).collect();
        let u = *open.choose(rng).expect("a path always has room");
        degree[u] += 1;
        degree[v] += 1;
        edges.push((u, v));
    }
    let eulers: Vec<i64> = degree
        .iter()
        .map(|&d| {
            let hi = if params.non_positive { (-(d as i64)).min(-2) } else { -2 };
            rng.gen_range(params.min_euler.min(hi)..=hi)
        })
        .collect();

    let mut names: Vec<usize> = (0..n).collect();
    names.shuffle(rng);
    let id = |v: usize| format!("n{}", names[v]);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    edges.shuffle(rng);
    PlumbingTree::new(
        order.iter().map(|&v| (id(v), eulers[v])),
        edges.iter().map(|&(a, b)| if rng.gen() { (id(a), id(b)) } else { (id(b), id(a)) }),
    )
    .expect("generated trees are valid")
}

/// `count` random trees from `seed` with the default parameters.
pub fn random_trees(seed: u64, count: usize) -> Vec<PlumbingTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_tree(&mut rng, RandomTreeParams::default()))
        .collect()
}

/// All non-positive trees up to isomorphism with at most `max_vertices`
/// vertices and Euler numbers from `eulers`, in a deterministic order.
pub fn enumerate_trees(max_vertices: usize, eulers: &[i64]) -> Vec<PlumbingTree> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        for shape in tree_shapes(n) {
            let mut seen = BTreeSet::new();
            let mut adj = vec![Vec::new(); n];
            for &(a, b) in &shape {
                adj[a].push(b);
                adj[b].push(a);
            }
            let mut assignment = vec![0usize; n];
            loop {
                let weights: Vec<i64> = assignment.iter().map(|&i| eulers[i]).collect();
                let ok = (0..n).all(|v| weights[v] + adj[v].len() as i64 <= 0);
                if ok && seen.insert(canonical_code(&adj, &weights)) {
                    out.push(build(&shape, &weights));
                }
                if !advance(&mut assignment, eulers.len()) {
                    break;
                }
            }
        }
    }
    out
}

/// At most `cap` trees of `trees`, taken at evenly spaced indices.
pub fn strided_sample(trees: Vec<PlumbingTree>, cap: usize) -> Vec<PlumbingTree> {
    let len = trees.len();
    if len <= cap {
        return trees;
    }
    let keep: BTreeSet<usize> = (0..cap).map(|i| i * len / cap).collect();
    trees
        .into_iter()
        .enumerate()
        .filter(|(i, _)| keep.contains(i))
        .map(|(_, t)| t)
        .collect()
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn build(edges: &[(usize, usize)], weights: &[i64]) -> PlumbingTree {
    let id = |v: usize| format!("v{}", v + 1);
    PlumbingTree::new(
        weights.iter().enumerate().map(|(v, &e)| (id(v), e)),
        edges.iter().map(|&(a, b)| (id(a), id(b))),
    )
    .expect("enumerated trees are valid")
}

/// Edge lists of all unlabelled trees on `n` vertices, one per isomorphism
/// class.
pub fn tree_shapes(n: usize) -> Vec<Vec<(usize, usize)>> {
    match n {
        0 => return vec![],
        1 => return vec![vec![]],
        2 => return vec![vec![(0, 1)]],
        _ => {}
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut code = vec![0usize; n - 2];
    loop {
        let edges = prufer_decode(&code, n);
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        if seen.insert(canonical_code(&adj, &vec![0; n])) {
            out.push(edges);
        }
        if !advance(&mut code, n) {
            break;
        }
    }
    out
}

fn prufer_decode(code: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf.min(c), leaf.max(c)));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges.sort_unstable();
    edges
}

/// Weighted AHU code of an unrooted tree, rooted at its center (the smaller
/// code of the two for a bicentre).
fn canonical_code(adj: &[Vec<usize>], weights: &[i64]) -> String {
    centers(adj)
        .into_iter()
        .map(|c| rooted_code(adj, weights, c, usize::MAX))
        .min()
        .expect("non-empty tree")
}

fn rooted_code(adj: &[Vec<usize>], weights: &[i64], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| rooted_code(adj, weights, w, v))
        .collect();
    kids.sort();
    format!("{}({})", weights[v], kids.concat())
}

fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
}
