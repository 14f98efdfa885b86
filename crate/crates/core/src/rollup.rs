//! Chain decompositions of plumbing trees and their rolled-up surgery
//! diagrams.
//!
//! A tree is cut into linear chains. Inside each chain `w_1, ..., w_m` the
//! unknot of `w_{i+1}` is slid over the (already slid) unknot of `w_i`, so
//! the new basis vector of position `i` is `w_1 + ... + w_i`. The first
//! vertex of a branch chain is a meridian of its attachment vertex, which
//! after rolling wraps once around every parent component from the
//! attachment position onwards.
//!
//! Positions and chain indices are 0-based throughout.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::graph::PlumbingTree;
use crate::intform::{self, IntFormError, IntMatrix};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RollupError {
    #[error("vertex `{0}` violates e + d <= 0")]
    NotNonPositive(String),
    #[error("vertex `{vertex}` needs {needed} branch holes but only {available} exist")]
    Capacity {
        vertex: String,
        needed: usize,
        available: usize,
    },
    #[error("root endpoints must be two distinct leaves")]
    BadRoot,
    #[error(transparent)]
    IntForm(#[from] IntFormError),
}

/// Where a branch chain is plugged into its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Attachment {
    pub parent: usize,
    /// Position of the attachment vertex within the parent chain.
    pub index: usize,
    /// Which stabilization hole of that position the branch occupies.
    pub slot: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    /// Tree vertex indices, from the attached end to the leaf end.
    pub vertices: Vec<usize>,
    pub attachment: Option<Attachment>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainDecomposition {
    chains: Vec<Chain>,
    /// `(chain, position)` of every tree vertex.
    #[serde(skip)]
    location: Vec<(usize, usize)>,
}

/// Knobs for the free choices of the decomposition. The default is the
/// canonical decomposition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecompositionOptions {
    /// Explicit root chain endpoints (two distinct leaves).
    pub root: Option<(usize, usize)>,
    /// Prefer the largest id instead of the smallest at every tie-break.
    pub reverse_ties: bool,
}

impl ChainDecomposition {
    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn chain(&self, c: usize) -> &Chain {
        &self.chains[c]
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// `(chain, position)` of a tree vertex.
    pub fn locate(&self, vertex: usize) -> (usize, usize) {
        self.location[vertex]
    }

    /// Branch chains attached at `(chain, index)`, ordered by slot.
    pub fn branches_at(&self, chain: usize, index: usize) -> Vec<usize> {
        let mut out: Vec<(usize, usize)> = self
            .chains
            .iter()
            .enumerate()
            .filter_map(|(c, ch)| match ch.attachment {
                Some(a) if a.parent == chain && a.index == index => Some((a.slot, c)),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out.into_iter().map(|(_, c)| c).collect()
    }

    /// Euler numbers of a chain, in chain order.
    pub fn eulers(&self, tree: &PlumbingTree, chain: usize) -> Vec<i64> {
        self.chains[chain].vertices.iter().map(|&v| tree.euler(v)).collect()
    }

    /// Components in global order as `(chain, position, vertex)`.
    pub fn components(&self) -> Vec<(usize, usize, usize)> {
        self.chains
            .iter()
            .enumerate()
            .flat_map(|(c, ch)| ch.vertices.iter().enumerate().map(move |(i, &v)| (c, i, v)))
            .collect()
    }
}

/// Number of stabilization holes a chain vertex with Euler number `e`
/// contributes to its page.
pub fn holes_at(euler: i64) -> usize {
    (-euler - 2) as usize
}

pub fn chain_decomposition(tree: &PlumbingTree) -> Result<ChainDecomposition, RollupError> {
    chain_decomposition_with(tree, DecompositionOptions::default())
}

pub fn chain_decomposition_with(
    tree: &PlumbingTree,
    opts: DecompositionOptions,
) -> Result<ChainDecomposition, RollupError> {
    for (i, v) in tree.vertices().iter().enumerate() {
        if v.euler + tree.degree(i) as i64 > 0 {
            return Err(RollupError::NotNonPositive(v.id.clone()));
        }
    }
    let n = tree.len();
    let by_id = |list: &mut Vec<usize>| {
        list.sort_by(|&a, &b| tree.id(a).cmp(tree.id(b)));
        if opts.reverse_ties {
            list.reverse();
        }
    };

    let root_path = if n == 1 {
        vec![0]
    } else {
        let (a, b) = match opts.root {
            Some((a, b)) => {
                if a == b || a >= n || b >= n || !tree.is_leaf(a) || !tree.is_leaf(b) {
                    return Err(RollupError::BadRoot);
                }
                (a, b)
            }
            None => {
                let mut leaves: Vec<usize> = (0..n).filter(|&i| tree.is_leaf(i)).collect();
                by_id(&mut leaves);
                (leaves[0], leaves[1])
            }
        };
        tree_path(tree, a, b)
    };

    let mut builder = Builder {
        tree,
        by_id: &by_id,
        visited: vec![false; n],
        chains: Vec::new(),
    };
    builder.build(root_path, None)?;

    let mut location = vec![(usize::MAX, usize::MAX); n];
    for (c, ch) in builder.chains.iter().enumerate() {
        for (i, &v) in ch.vertices.iter().enumerate() {
            location[v] = (c, i);
        }
    }
    debug_assert!(location.iter().all(|&(c, _)| c != usize::MAX));
    Ok(ChainDecomposition {
        chains: builder.chains,
        location,
    })
}

struct Builder<'a, F> {
    tree: &'a PlumbingTree,
    by_id: &'a F,
    visited: Vec<bool>,
    chains: Vec<Chain>,
}

impl<F: Fn(&mut Vec<usize>)> Builder<'_, F> {
    fn build(&mut self, vertices: Vec<usize>, attachment: Option<Attachment>) -> Result<(), RollupError> {
        for &v in &vertices {
            self.visited[v] = true;
        }
        let idx = self.chains.len();
        self.chains.push(Chain {
            vertices: vertices.clone(),
            attachment,
        });
        for (pos, &v) in vertices.iter().enumerate() {
            let mut spawn: Vec<usize> = self
                .tree
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| !self.visited[w])
                .collect();
            (self.by_id)(&mut spawn);
            let available = holes_at(self.tree.euler(v));
            if spawn.len() > available {
                return Err(RollupError::Capacity {
                    vertex: self.tree.id(v).to_string(),
                    needed: spawn.len(),
                    available,
                });
            }
            for (slot, w) in spawn.into_iter().enumerate() {
                let walk = self.walk_to_leaf(v, w);
                self.build(
                    walk,
                    Some(Attachment {
                        parent: idx,
                        index: pos,
                        slot,
                    }),
                )?;
            }
        }
        Ok(())
    }

    /// Follows the tree from `start` (entered from `from`) to a leaf.
    fn walk_to_leaf(&self, from: usize, start: usize) -> Vec<usize> {
        let mut walk = vec![start];
        let (mut prev, mut cur) = (from, start);
        loop {
            let mut next: Vec<usize> = self
                .tree
                .neighbors(cur)
                .iter()
                .copied()
                .filter(|&w| w != prev)
                .collect();
            if next.is_empty() {
                return walk;
            }
            (self.by_id)(&mut next);
            prev = cur;
            cur = next[0];
            walk.push(cur);
        }
    }
}

fn tree_path(tree: &PlumbingTree, a: usize, b: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; tree.len()];
    parent[a] = a;
    let mut queue = VecDeque::from([a]);
    while let Some(v) = queue.pop_front() {
        for &w in tree.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![b];
    let mut cur = b;
    while cur != a {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

/// Framings of the rolled chain: `m_i = 2(i - 1) + n_1 + ... + n_i`.
pub fn rolled_framings(eulers: &[i64]) -> Vec<i64> {
    let mut sum = 0;
    eulers
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            sum += n;
            sum + 2 * i as i64
        })
        .collect()
}

/// Mutual linking `l_i = n_1 + ... + n_i + 2i - 1` of component `i` with every
/// later component of the same chain (1-based `i`; the returned vector is
/// indexed from 0).
pub fn rolled_linkings(eulers: &[i64]) -> Vec<i64> {
    let mut sum = 0;
    eulers
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            sum += n;
            sum + 2 * (i as i64 + 1) - 1
        })
        .collect()
}

/// Full twists in the boxes of the rolled diagram: `[n_1 + 1, n_2 + 2, ...,
/// n_{k-1} + 2]`.
pub fn twist_boxes(eulers: &[i64]) -> Vec<i64> {
    let k = eulers.len();
    (0..k.saturating_sub(1))
        .map(|i| eulers[i] + if i == 0 { 1 } else { 2 })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkComponent {
    pub chain: usize,
    pub position: usize,
    pub framing: i64,
    /// Tree vertex index whose unknot this component ends with.
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RolledLink {
    pub decomposition: ChainDecomposition,
    pub components: Vec<LinkComponent>,
    /// Linking matrix in component order, framings on the diagonal.
    pub q: IntMatrix,
    /// Basis change: rows are tree vertices (declaration order), columns are
    /// components.
    pub p: IntMatrix,
}

impl RolledLink {
    pub fn framings(&self) -> Vec<i64> {
        self.components.iter().map(|c| c.framing).collect()
    }

    pub fn chain_framings(&self, chain: usize) -> Vec<i64> {
        self.components
            .iter()
            .filter(|c| c.chain == chain)
            .map(|c| c.framing)
            .collect()
    }

    pub fn component_index(&self, chain: usize, position: usize) -> Option<usize> {
        self.components
            .iter()
            .position(|c| c.chain == chain && c.position == position)
    }
}

/// Builds the rolled-up diagram of a tree from closed-form linking numbers.
pub fn rolled_link(tree: &PlumbingTree) -> Result<RolledLink, RollupError> {
    rolled_link_with(tree, DecompositionOptions::default())
}

pub fn rolled_link_with(tree: &PlumbingTree, opts: DecompositionOptions) -> Result<RolledLink, RollupError> {
    let dec = chain_decomposition_with(tree, opts)?;
    let comps = dec.components();
    let n = comps.len();

    let framings: Vec<Vec<i64>> = (0..dec.len()).map(|c| rolled_framings(&dec.eulers(tree, c))).collect();
    let linkings: Vec<Vec<i64>> = (0..dec.len()).map(|c| rolled_linkings(&dec.eulers(tree, c))).collect();

    let mut q = IntMatrix::zeros(n);
    for (a, &(ca, ia, _)) in comps.iter().enumerate() {
        for (b, &(cb, ib, _)) in comps.iter().enumerate() {
            let value = if ca == cb {
                if ia == ib {
                    framings[ca][ia]
                } else {
                    linkings[ca][ia.min(ib)]
                }
            } else {
                wraps(&dec, (ca, ia), (cb, ib)) as i64
            };
            q.set(a, b, value);
        }
    }

    let mut p = IntMatrix::zeros(n);
    for (k, &(c, i, _)) in comps.iter().enumerate() {
        for &v in &dec.chain(c).vertices[..=i] {
            p.set(v, k, 1);
        }
    }

    let components = comps
        .iter()
        .map(|&(chain, position, vertex)| LinkComponent {
            chain,
            position,
            framing: framings[chain][position],
            vertex,
        })
        .collect();
    Ok(RolledLink {
        decomposition: dec,
        components,
        q,
        p,
    })
}

/// A branch component wraps once around every component of its parent chain
/// from the attachment position on.
fn wraps(dec: &ChainDecomposition, (ca, ia): (usize, usize), (cb, ib): (usize, usize)) -> bool {
    let child_of = |child: usize, parent: usize, parent_pos: usize| {
        matches!(dec.chain(child).attachment, Some(a) if a.parent == parent && parent_pos >= a.index)
    };
    child_of(ca, cb, ib) || child_of(cb, ca, ia)
}

/// Performs the handle slides one at a time on the intersection matrix: in
/// each chain, left to right, the basis vector of a vertex is replaced by
/// itself plus the current basis vector of its chain predecessor. The result
/// is returned in component order.
pub fn handle_slide_oracle(tree: &PlumbingTree) -> Result<IntMatrix, RollupError> {
    handle_slide_oracle_with(tree, DecompositionOptions::default())
}

pub fn handle_slide_oracle_with(
    tree: &PlumbingTree,
    opts: DecompositionOptions,
) -> Result<IntMatrix, RollupError> {
    let dec = chain_decomposition_with(tree, opts)?;
    let mut m = tree.intersection_matrix();
    let one = num_bigint::BigInt::from(1);
    for chain in dec.chains() {
        for pair in chain.vertices.windows(2) {
            let (pred, cur) = (pair[0], pair[1]);
            m.add_row_multiple(cur, pred, &one);
            m.add_col_multiple(cur, pred, &one);
        }
    }
    let order: Vec<usize> = dec.components().into_iter().map(|(_, _, v)| v).collect();
    Ok(m.permuted(&order))
}

/// `q = pᵀ A p` and `q` equals the slide-by-slide result, both exactly.
pub fn verify_congruence(tree: &PlumbingTree, link: &RolledLink) -> Result<bool, RollupError> {
    let a = tree.intersection_matrix();
    if link.q.dim() != a.dim() || link.p.dim() != a.dim() {
        return Err(IntFormError::DimensionMismatch(a.dim(), link.q.dim()).into());
    }
    let by_basis = intform::congruence_transform(&a, &link.p)?;
    let by_slides = handle_slide_oracle(tree)?;
    Ok(by_basis == link.q && by_slides == link.q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{branched_example, star};

    #[test]
    fn decomposition_examples() {
        let single = PlumbingTree::parse("vertex a -5").unwrap();
        let d = chain_decomposition(&single).unwrap();
        assert_eq!(d.chains(), &[Chain { vertices: vec![0], attachment: None }]);

        let t = branched_example();
        let d = chain_decomposition(&t).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.eulers(&t, 0), vec![-2, -6, -2]);
        assert_eq!(d.eulers(&t, 1), vec![-4, -3]);
        assert_eq!(
            d.chain(1).attachment,
            Some(Attachment { parent: 0, index: 1, slot: 0 })
        );

        let s = star(-4, 3);
        let d = chain_decomposition(&s).unwrap();
        assert_eq!(d.len(), 2);
        let ids = |c: usize| d.chain(c).vertices.iter().map(|&v| s.id(v)).collect::<Vec<_>>();
        assert_eq!(ids(0), vec!["a", "c", "b"]);
        assert_eq!(ids(1), vec!["d"]);
        assert_eq!(d.chain(1).attachment, Some(Attachment { parent: 0, index: 1, slot: 0 }));
    }

    #[test]
    fn decomposition_rejects_bad_vertex() {
        assert_eq!(
            chain_decomposition(&star(-2, 3)),
            Err(RollupError::NotNonPositive("c".into()))
        );
    }

    #[test]
    fn framings_and_boxes() {
        assert_eq!(rolled_framings(&[-2, -6, -2]), vec![-2, -6, -6]);
        assert_eq!(rolled_framings(&[-4, -3]), vec![-4, -5]);
        assert_eq!(rolled_framings(&[-2, -2, -2]), vec![-2, -2, -2]);
        assert_eq!(twist_boxes(&[-2, -6, -2]), vec![-1, -4]);
        assert_eq!(twist_boxes(&[-4, -3]), vec![-3]);
        assert_eq!(twist_boxes(&[-2]), Vec::<i64>::new());
        assert_eq!(rolled_linkings(&[-2, -3]), vec![-1, -2]);
    }

    #[test]
    fn rolled_link_examples() {
        let t = PlumbingTree::linear(&[-2, -3]).unwrap();
        let l = rolled_link(&t).unwrap();
        assert_eq!(l.framings(), vec![-2, -3]);
        assert_eq!(l.q, IntMatrix::from_rows(&[vec![-2, -1], vec![-1, -3]]));
        assert_eq!(l.p, IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]));

        let single = PlumbingTree::parse("vertex a -5").unwrap();
        let l = rolled_link(&single).unwrap();
        assert_eq!(l.q, IntMatrix::from_rows(&[vec![-5]]));

        let t = branched_example();
        let l = rolled_link(&t).unwrap();
        let mut f = l.framings();
        f.sort_unstable();
        assert_eq!(f, vec![-6, -6, -5, -4, -2]);
        // branch components are 3 and 4; root components 0, 1, 2
        for b in [3, 4] {
            assert_eq!(l.q.get_i64(b, 0), Some(0));
            assert_eq!(l.q.get_i64(b, 1), Some(1));
            assert_eq!(l.q.get_i64(b, 2), Some(1));
        }
        assert!(verify_congruence(&t, &l).unwrap());
        assert_eq!(
            intform::determinant(&l.q).magnitude(),
            intform::determinant(&t.intersection_matrix()).magnitude()
        );
    }

    #[test]
    fn slide_oracle_examples() {
        let t = PlumbingTree::linear(&[-2, -3]).unwrap();
        assert_eq!(
            handle_slide_oracle(&t).unwrap(),
            IntMatrix::from_rows(&[vec![-2, -1], vec![-1, -3]])
        );
        let single = PlumbingTree::parse("vertex a -7").unwrap();
        assert_eq!(handle_slide_oracle(&single).unwrap(), single.intersection_matrix());
        let t = PlumbingTree::linear(&[-2, -2, -2]).unwrap();
        assert_eq!(
            handle_slide_oracle(&t).unwrap(),
            IntMatrix::from_rows(&[vec![-2, -1, -1], vec![-1, -2, -1], vec![-1, -1, -2]])
        );
    }

    #[test]
    fn perturbed_q_is_rejected() {
        let t = branched_example();
        let mut l = rolled_link(&t).unwrap();
        let v = l.q.get(1, 3) + 1;
        l.q.set(1, 3, v);
        assert!(!verify_congruence(&t, &l).unwrap());
    }

    #[test]
    fn alternative_roots_are_congruent() {
        let t = branched_example();
        let leaves: Vec<usize> = (0..t.len()).filter(|&i| t.is_leaf(i)).collect();
        for &a in &leaves {
            for &b in &leaves {
                if a == b {
                    continue;
                }
                let opts = DecompositionOptions { root: Some((a, b)), reverse_ties: false };
                let l = rolled_link_with(&t, opts).unwrap();
                let a_m = t.intersection_matrix();
                assert_eq!(intform::congruence_transform(&a_m, &l.p).unwrap(), l.q);
                assert_eq!(handle_slide_oracle_with(&t, opts).unwrap(), l.q);
            }
        }
    }
}
