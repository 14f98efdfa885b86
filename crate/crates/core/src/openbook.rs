//! Planar open books with monodromy a product of positive Dehn twists along
//! disjoint curves.
//!
//! A page is a sphere with holes, one per binding component. A simple closed
//! curve on it is determined up to isotopy by the bipartition of the
//! boundary components it induces. Every curve is stored as the side that
//! does not contain the smallest boundary label. Twists along disjoint
//! curves commute, so the monodromy is a multiset of curves.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::PlumbingTree;
use crate::rollup::{self, ChainDecomposition, RollupError};

pub type Side = BTreeSet<String>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OpenBookError {
    #[error("a page needs at least one boundary component")]
    NoBoundary,
    #[error("duplicate boundary label `{0}`")]
    DuplicateBoundary(String),
    #[error("unknown boundary label `{0}`")]
    UnknownBoundary(String),
    #[error("curve {0:?} does not separate the boundary components")]
    TrivialCurve(Vec<String>),
    #[error("curves {0:?} and {1:?} intersect")]
    Crossing(Vec<String>, Vec<String>),
    #[error("no twist curve parallel to boundary `{0}`")]
    NoParallelCurve(String),
    #[error("Euler number {0} has no bundle open book")]
    BadEuler(i64),
    #[error("invalid open book JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Rollup(#[from] RollupError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarOpenBook {
    boundaries: BTreeSet<String>,
    /// Normalized sides, sorted; repeats encode multiplicity.
    curves: Vec<Side>,
}

/// Two bipartitions of `all` can be realized disjointly.
pub fn sides_compatible(s: &Side, t: &Side, all: &BTreeSet<String>) -> bool {
    s.is_subset(t)
        || t.is_subset(s)
        || s.is_disjoint(t)
        || s.union(t).count() == all.len()
}

/// Every pair of curves can be realized disjointly.
pub fn is_noncrossing(curves: &[Side], all: &BTreeSet<String>) -> bool {
    curves
        .iter()
        .enumerate()
        .all(|(i, s)| curves[i + 1..].iter().all(|t| sides_compatible(s, t, all)))
}

impl PlanarOpenBook {
    pub fn new<B, C, S>(boundaries: B, curves: C) -> Result<Self, OpenBookError>
    where
        B: IntoIterator<Item = String>,
        C: IntoIterator<Item = S>,
        S: IntoIterator<Item = String>,
    {
        let mut set = BTreeSet::new();
        for b in boundaries {
            if !set.insert(b.clone()) {
                return Err(OpenBookError::DuplicateBoundary(b));
            }
        }
        let Some(first) = set.iter().next().cloned() else {
            return Err(OpenBookError::NoBoundary);
        };
        let mut sides = Vec::new();
        for c in curves {
            let side: Side = c.into_iter().collect();
            if let Some(u) = side.iter().find(|l| !set.contains(*l)) {
                return Err(OpenBookError::UnknownBoundary(u.clone()));
            }
            if side.is_empty() || side.len() == set.len() {
                return Err(OpenBookError::TrivialCurve(side.into_iter().collect()));
            }
            sides.push(if side.contains(&first) { complement(&side, &set) } else { side });
        }
        for (i, s) in sides.iter().enumerate() {
            if let Some(t) = sides[i + 1..].iter().find(|t| !sides_compatible(s, t, &set)) {
                return Err(OpenBookError::Crossing(
                    s.iter().cloned().collect(),
                    t.iter().cloned().collect(),
                ));
            }
        }
        sides.sort();
        Ok(PlanarOpenBook { boundaries: set, curves: sides })
    }

    pub fn boundaries(&self) -> &BTreeSet<String> {
        &self.boundaries
    }

    pub fn curves(&self) -> &[Side] {
        &self.curves
    }

    pub fn boundary_count(&self) -> usize {
        self.boundaries.len()
    }

    pub fn twist_count(&self) -> usize {
        self.curves.len()
    }

    /// Distinct curves with their multiplicities.
    pub fn curve_multiplicities(&self) -> Vec<(Side, usize)> {
        let mut out: Vec<(Side, usize)> = Vec::new();
        for c in &self.curves {
            match out.last_mut() {
                Some((s, k)) if s == c => *k += 1,
                _ => out.push((c.clone(), 1)),
            }
        }
        out
    }

    /// The side of curve `index` that does not contain `label`.
    pub fn side_without(&self, index: usize, label: &str) -> Side {
        let s = &self.curves[index];
        if s.contains(label) {
            complement(s, &self.boundaries)
        } else {
            s.clone()
        }
    }

    /// Curve `index` is parallel to boundary `label`.
    pub fn is_parallel(&self, index: usize, label: &str) -> bool {
        let s = self.side_without(index, label);
        s.len() + 1 == self.boundaries.len()
    }

    pub fn page_stats(&self) -> PageStats {
        PageStats {
            boundary_components: self.boundaries.len(),
            euler_characteristic: 2 - self.boundaries.len() as i64,
            twists: self.curves.len(),
        }
    }

    /// Curves as inside-sets seen from the canonical root, with the
    /// canonical code.
    pub fn to_json(&self) -> Value {
        let canon = canonical_form(self);
        let curves: Vec<Value> = self
            .rooted_multiplicities(&canon.root)
            .into_iter()
            .map(|(s, k)| json!({ "inside": s, "multiplicity": k }))
            .collect();
        json!({
            "root": canon.root,
            "boundaries": self.boundaries,
            "curves": curves,
            "canonical_code": canon.code,
        })
    }

    /// Accepts the output of [`to_json`](Self::to_json); `root` and
    /// `canonical_code` are ignored and either side of a curve may be given.
    pub fn from_json(value: &Value) -> Result<Self, OpenBookError> {
        #[derive(Deserialize)]
        struct Raw {
            boundaries: Vec<String>,
            curves: Vec<RawCurve>,
        }
        #[derive(Deserialize)]
        struct RawCurve {
            #[serde(alias = "side")]
            inside: Vec<String>,
            #[serde(default = "one")]
            multiplicity: usize,
        }
        fn one() -> usize {
            1
        }
        let raw: Raw = serde_json::from_value(value.clone()).map_err(|e| OpenBookError::Json(e.to_string()))?;
        let curves = raw
            .curves
            .into_iter()
            .flat_map(|c| std::iter::repeat_n(c.inside, c.multiplicity));
        Self::new(raw.boundaries, curves)
    }

    /// Distinct curves as sides away from `root`, with multiplicities,
    /// sorted by side.
    pub fn rooted_multiplicities(&self, root: &str) -> Vec<(Side, usize)> {
        let mut sides: Vec<Side> = (0..self.curves.len()).map(|i| self.side_without(i, root)).collect();
        sides.sort();
        let mut out: Vec<(Side, usize)> = Vec::new();
        for s in sides {
            match out.last_mut() {
                Some((t, k)) if *t == s => *k += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }

    fn relabel(&self, rename: &BTreeMap<String, String>) -> Self {
        let map = |l: &String| rename.get(l).cloned().unwrap_or_else(|| l.clone());
        Self::new(
            self.boundaries.iter().map(map),
            self.curves.iter().map(|s| s.iter().map(map).collect::<Vec<_>>()),
        )
        .expect("relabelling is a bijection")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PageStats {
    pub boundary_components: usize,
    pub euler_characteristic: i64,
    pub twists: usize,
}

fn complement(side: &Side, all: &BTreeSet<String>) -> Side {
    all.difference(side).cloned().collect()
}

/// The open book of the disc bundle with Euler number `n <= -2`: a sphere
/// with `|n|` holes and one twist around each hole.
pub fn bundle_openbook(n: i64) -> Result<PlanarOpenBook, OpenBookError> {
    bundle_with_prefix(n, "b")
}

fn bundle_with_prefix(n: i64, prefix: &str) -> Result<PlanarOpenBook, OpenBookError> {
    if n > -2 {
        return Err(OpenBookError::BadEuler(n));
    }
    let labels: Vec<String> = (1..=-n).map(|k| format!("{prefix}{k}")).collect();
    let curves = labels.iter().map(|l| vec![l.clone()]);
    PlanarOpenBook::new(labels.clone(), curves)
}

/// Plumbs two open books: the neighbourhoods of `b1` in `ob1` and `b2` in
/// `ob2` are identified, one twist parallel to each is traded for a single
/// twist around the new neck. Labels of `ob2` that collide with `ob1` are
/// primed.
pub fn plumb(
    ob1: &PlanarOpenBook,
    b1: &str,
    ob2: &PlanarOpenBook,
    b2: &str,
) -> Result<PlanarOpenBook, OpenBookError> {
    for (ob, b) in [(ob1, b1), (ob2, b2)] {
        if !ob.boundaries.contains(b) {
            return Err(OpenBookError::UnknownBoundary(b.to_string()));
        }
    }
    let mut rename = BTreeMap::new();
    let mut taken: BTreeSet<String> = ob1.boundaries.union(&ob2.boundaries).cloned().collect();
    for l in &ob2.boundaries {
        if ob1.boundaries.contains(l) {
            let mut fresh = format!("{l}'");
            while taken.contains(&fresh) {
                fresh.push('\'');
            }
            taken.insert(fresh.clone());
            rename.insert(l.clone(), fresh);
        }
    }
    let ob2 = ob2.relabel(&rename);
    let b2 = rename.get(b2).map(String::as_str).unwrap_or(b2);

    let drop1 = (0..ob1.curves.len())
        .find(|&i| ob1.is_parallel(i, b1))
        .ok_or_else(|| OpenBookError::NoParallelCurve(b1.to_string()))?;
    let drop2 = (0..ob2.curves.len())
        .find(|&i| ob2.is_parallel(i, b2))
        .ok_or_else(|| OpenBookError::NoParallelCurve(b2.to_string()))?;

    let rest1: Vec<String> = ob1.boundaries.iter().filter(|l| *l != b1).cloned().collect();
    let rest2: Vec<String> = ob2.boundaries.iter().filter(|l| *l != b2).cloned().collect();
    let mut curves: Vec<Side> = Vec::new();
    curves.extend((0..ob1.curves.len()).filter(|&i| i != drop1).map(|i| ob1.side_without(i, b1)));
    curves.extend((0..ob2.curves.len()).filter(|&i| i != drop2).map(|i| ob2.side_without(i, b2)));
    curves.push(rest1.iter().cloned().collect());
    if rest2.is_empty() {
        return Err(OpenBookError::TrivialCurve(rest1));
    }
    PlanarOpenBook::new(rest1.into_iter().chain(rest2), curves)
}

/// Builds the open book of a tree by plumbing bundle open books along the
/// edges, breadth first from the first declared vertex.
pub fn compose_from_edges(tree: &PlumbingTree) -> Result<PlanarOpenBook, OpenBookError> {
    for i in 0..tree.len() {
        if tree.euler(i) + tree.degree(i) as i64 > 0 {
            return Err(RollupError::NotNonPositive(tree.id(i).to_string()).into());
        }
    }
    let labels = |v: usize| -> VecDeque<String> {
        (1..=-tree.euler(v)).map(|k| format!("{}.{}", tree.id(v), k)).collect()
    };
    let mut remaining: Vec<VecDeque<String>> = vec![VecDeque::new(); tree.len()];
    let mut book = bundle_with_prefix(tree.euler(0), &format!("{}.", tree.id(0)))?;
    remaining[0] = labels(0);
    let mut seen = vec![false; tree.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for &w in tree.neighbors(u) {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            let child = bundle_with_prefix(tree.euler(w), &format!("{}.", tree.id(w)))?;
            let glue = remaining[u]
                .pop_front()
                .ok_or_else(|| RollupError::NotNonPositive(tree.id(u).to_string()))?;
            let mut own = labels(w);
            let entry = own.pop_front().expect("bundle has at least two boundaries");
            book = plumb(&book, &glue, &child, &entry)?;
            remaining[w] = own;
            queue.push_back(w);
        }
    }
    Ok(book)
}

/// Label of the outer binding component of the direct construction.
pub const OUTER: &str = "o";
/// Label of the hole created by the initial Hopf band.
pub const HOPF_HOLE: &str = "h0";

/// Label of the `slot`-th stabilization hole of position `index` in `chain`.
pub fn hole_label(chain: usize, index: usize, slot: usize) -> String {
    format!("h{}.{}.{}", chain + 1, index + 1, slot + 1)
}

/// Builds the open book of a tree directly from its rolled-up diagram.
///
/// The page is a disc (outer boundary `o`) with holes: `h0` from the Hopf
/// band and one hole per stabilization. Every hole carries a twist around
/// it; the hole occupied by a branch chain instead carries the neck twist
/// around itself and the whole branch subtree. Each rolled component adds
/// one twist enclosing the holes on its inner side.
pub fn openbook_from_tree(tree: &PlumbingTree) -> Result<PlanarOpenBook, OpenBookError> {
    let dec = rollup::chain_decomposition(tree)?;
    openbook_from_decomposition(tree, &dec)
}

pub fn openbook_from_decomposition(
    tree: &PlumbingTree,
    dec: &ChainDecomposition,
) -> Result<PlanarOpenBook, OpenBookError> {
    let subtree = SubtreeHoles::new(tree, dec);
    let mut boundaries = vec![OUTER.to_string(), HOPF_HOLE.to_string()];
    let mut curves: Vec<Side> = vec![Side::from([HOPF_HOLE.to_string()])];

    for (c, chain) in dec.chains().iter().enumerate() {
        let k = chain.vertices.len();
        for j in 0..k {
            let branches = dec.branches_at(c, j);
            for slot in 0..rollup::holes_at(tree.euler(chain.vertices[j])) {
                let h = hole_label(c, j, slot);
                boundaries.push(h.clone());
                let mut twist = Side::from([h]);
                if let Some(&b) = branches.get(slot) {
                    twist.extend(subtree.of_chain(b));
                }
                curves.push(twist);
            }
        }
        for j in 0..k {
            let level: Side = match chain.attachment {
                None => std::iter::once(HOPF_HOLE.to_string())
                    .chain((0..=j).flat_map(|i| subtree.at_position(c, i)))
                    .collect(),
                Some(a) => std::iter::once(hole_label(a.parent, a.index, a.slot))
                    .chain((j + 1..k).flat_map(|i| subtree.at_position(c, i)))
                    .collect(),
            };
            curves.push(level);
        }
    }
    PlanarOpenBook::new(boundaries, curves)
}

/// Hole labels below each chain position.
struct SubtreeHoles {
    /// `(chain, position)` -> own holes plus every hole of branches hanging
    /// off that position.
    at: BTreeMap<(usize, usize), Vec<String>>,
}

impl SubtreeHoles {
    fn new(tree: &PlumbingTree, dec: &ChainDecomposition) -> Self {
        let mut at = BTreeMap::new();
        // children come after parents in chain order
        for c in (0..dec.len()).rev() {
            let chain = dec.chain(c);
            for (j, &v) in chain.vertices.iter().enumerate() {
                let mut holes: Vec<String> = (0..rollup::holes_at(tree.euler(v)))
                    .map(|s| hole_label(c, j, s))
                    .collect();
                for b in dec.branches_at(c, j) {
                    for i in 0..dec.chain(b).vertices.len() {
                        holes.extend(at.get(&(b, i)).cloned().unwrap_or_default());
                    }
                }
                at.insert((c, j), holes);
            }
        }
        SubtreeHoles { at }
    }

    fn at_position(&self, chain: usize, index: usize) -> Vec<String> {
        self.at[&(chain, index)].clone()
    }

    fn of_chain(&self, chain: usize) -> Vec<String> {
        self.at
            .range((chain, 0)..(chain + 1, 0))
            .flat_map(|(_, v)| v.iter().cloned())
            .collect()
    }
}

/// A node of the nesting forest of a page seen from one boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForestNode {
    Boundary {
        label: String,
    },
    Curve {
        side: Side,
        multiplicity: usize,
        children: Vec<ForestNode>,
    },
}

impl ForestNode {
    pub fn code(&self) -> String {
        match self {
            ForestNode::Boundary { .. } => "b".to_string(),
            ForestNode::Curve {
                multiplicity,
                children,
                ..
            } => format!("{multiplicity}({})", join_codes(children)),
        }
    }

    fn min_label(&self) -> &str {
        match self {
            ForestNode::Boundary { label } => label,
            ForestNode::Curve { side, .. } => side.iter().next().expect("sides are non-empty"),
        }
    }
}

fn join_codes(nodes: &[ForestNode]) -> String {
    nodes.iter().map(ForestNode::code).collect::<Vec<_>>().join(",")
}

/// The page drawn with `root` as the outer boundary: curves nest according
/// to their sides away from `root`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Forest {
    pub root: String,
    pub children: Vec<ForestNode>,
}

impl Forest {
    pub fn code(&self) -> String {
        join_codes(&self.children)
    }
}

pub fn laminar_forest(book: &PlanarOpenBook, root: &str) -> Result<Forest, OpenBookError> {
    if !book.boundaries.contains(root) {
        return Err(OpenBookError::UnknownBoundary(root.to_string()));
    }
    let mut counts: BTreeMap<Side, usize> = BTreeMap::new();
    for i in 0..book.curves.len() {
        *counts.entry(book.side_without(i, root)).or_default() += 1;
    }
    let sets: Vec<(Side, usize)> = counts.into_iter().collect();
    // parent of a set: the smallest strictly larger set containing it
    let parent_of = |members: &Side, own: Option<usize>| -> Option<usize> {
        sets.iter()
            .enumerate()
            .filter(|(i, (s, _))| Some(*i) != own && s.len() > members.len() && members.is_subset(s))
            .min_by_key(|(_, (s, _))| s.len())
            .map(|(i, _)| i)
    };
    let mut kids: Vec<Vec<Item>> = vec![Vec::new(); sets.len()];
    let mut top: Vec<Item> = Vec::new();
    for (i, (s, _)) in sets.iter().enumerate() {
        match parent_of(s, Some(i)) {
            Some(p) => kids[p].push(Item::Set(i)),
            None => top.push(Item::Set(i)),
        }
    }
    for b in book.boundaries.iter().filter(|b| *b != root) {
        let single = Side::from([b.clone()]);
        // a singleton set equal to {b} is the innermost curve around b
        let holder = sets
            .iter()
            .position(|(s, _)| *s == single)
            .or_else(|| parent_of(&single, None));
        match holder {
            Some(p) => kids[p].push(Item::Boundary(b.clone())),
            None => top.push(Item::Boundary(b.clone())),
        }
    }

    fn build(item: &Item, sets: &[(Side, usize)], kids: &[Vec<Item>]) -> ForestNode {
        match item {
            Item::Boundary(label) => ForestNode::Boundary { label: label.clone() },
            Item::Set(i) => ForestNode::Curve {
                side: sets[*i].0.clone(),
                multiplicity: sets[*i].1,
                children: sorted(kids[*i].iter().map(|k| build(k, sets, kids)).collect()),
            },
        }
    }
    let children = sorted(top.iter().map(|k| build(k, &sets, &kids)).collect());
    Ok(Forest {
        root: root.to_string(),
        children,
    })
}

#[derive(Clone)]
enum Item {
    Set(usize),
    Boundary(String),
}

fn sorted(mut nodes: Vec<ForestNode>) -> Vec<ForestNode> {
    nodes.sort_by_cached_key(|n| (n.code(), n.min_label().to_string()));
    nodes
}

/// A label-free normal form: the least forest code over all choices of outer
/// boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    /// Smallest boundary label realizing the code.
    pub root: String,
    pub code: String,
}

pub fn canonical_form(book: &PlanarOpenBook) -> CanonicalForm {
    let labels: Vec<&String> = book.boundaries.iter().collect();
    let index: BTreeMap<&String, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let curves: Vec<Bits> = book
        .curves
        .iter()
        .map(|s| Bits::from_indices(labels.len(), s.iter().map(|l| index[l])))
        .collect();
    let mut best: Option<CanonicalForm> = None;
    for (r, label) in labels.iter().enumerate() {
        let code = root_code(&curves, labels.len(), r);
        if best.as_ref().is_none_or(|b| code < b.code) {
            best = Some(CanonicalForm {
                root: (*label).clone(),
                code,
            });
        }
    }
    best.expect("books have a boundary")
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Bits(Vec<u64>);

impl Bits {
    fn from_indices(n: usize, idx: impl Iterator<Item = usize>) -> Self {
        let mut b = Bits(vec![0; n.div_ceil(64)]);
        for i in idx {
            b.0[i / 64] |= 1 << (i % 64);
        }
        b
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn complement(&self, n: usize) -> Self {
        let mut b = Bits(self.0.iter().map(|w| !w).collect());
        if !n.is_multiple_of(64) {
            *b.0.last_mut().expect("n > 0") &= (1 << (n % 64)) - 1;
        }
        b
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// Same string as `laminar_forest(book, root).code()`, on bitsets.
fn root_code(curves: &[Bits], n: usize, root: usize) -> String {
    let mut sides: Vec<Bits> = curves
        .iter()
        .map(|c| if c.contains(root) { c.complement(n) } else { c.clone() })
        .collect();
    sides.sort_by_key(|s| (s.count(), s.clone()));
    let mut sets: Vec<(Bits, usize)> = Vec::new();
    for s in sides {
        match sets.last_mut() {
            Some((t, k)) if *t == s => *k += 1,
            _ => sets.push((s, 1)),
        }
    }
    // supersets of a set form a chain, so the first one by size is the parent
    let m = sets.len();
    let mut kids: Vec<Vec<String>> = vec![Vec::new(); m + 1];
    for b in (0..n).filter(|&b| b != root) {
        let holder = sets.iter().position(|(s, _)| s.contains(b)).unwrap_or(m);
        kids[holder].push("b".to_string());
    }
    for i in 0..m {
        let mut children = std::mem::take(&mut kids[i]);
        children.sort();
        let code = format!("{}({})", sets[i].1, children.join(","));
        let parent = (i + 1..m).find(|&j| sets[i].0.is_subset(&sets[j].0)).unwrap_or(m);
        kids[parent].push(code);
    }
    let mut top = std::mem::take(&mut kids[m]);
    top.sort();
    top.join(",")
}

pub fn isomorphic(a: &PlanarOpenBook, b: &PlanarOpenBook) -> bool {
    a.boundary_count() == b.boundary_count()
        && a.twist_count() == b.twist_count()
        && canonical_form(a).code == canonical_form(b).code
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{branched_example, star};

    fn book(bs: &[&str], cs: &[&[&str]]) -> PlanarOpenBook {
        PlanarOpenBook::new(
            bs.iter().map(|s| s.to_string()),
            cs.iter().map(|c| c.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
        )
        .unwrap()
    }

    fn mults(b: &PlanarOpenBook) -> Vec<usize> {
        let mut m: Vec<usize> = b.curve_multiplicities().into_iter().map(|(_, k)| k).collect();
        m.sort_unstable_by(|a, b| b.cmp(a));
        m
    }

    #[test]
    fn bundles() {
        let b = bundle_openbook(-2).unwrap();
        assert_eq!(b.boundary_count(), 2);
        assert_eq!(mults(&b), vec![2]);
        let b = bundle_openbook(-4).unwrap();
        assert_eq!(b.boundary_count(), 4);
        assert_eq!(mults(&b), vec![1, 1, 1, 1]);
        assert_eq!(bundle_openbook(-1), Err(OpenBookError::BadEuler(-1)));
    }

    #[test]
    fn plumbing_two_bundles() {
        let a = bundle_openbook(-2).unwrap();
        let b = bundle_openbook(-3).unwrap();
        let p = plumb(&a, "b1", &b, "b1").unwrap();
        assert_eq!(p.boundary_count(), 3);
        assert_eq!(p.twist_count(), 4);
        assert_eq!(mults(&p), vec![2, 1, 1]);
        assert!(p.boundaries().contains("b2'"));

        let aa = plumb(&a, "b1", &a, "b2").unwrap();
        assert_eq!(aa.boundary_count(), 2);
        assert_eq!(mults(&aa), vec![3]);

        let none = book(&["x", "y", "z"], &[&["x", "y"]]);
        assert_eq!(plumb(&none, "x", &b, "b1"), Err(OpenBookError::NoParallelCurve("x".into())));
    }

    #[test]
    fn normalization_and_crossing() {
        let b = book(&["a", "b", "c"], &[&["a"], &["b", "c"]]);
        assert_eq!(b.curve_multiplicities().len(), 1);
        let err = PlanarOpenBook::new(
            ["a", "b", "c", "d"].map(String::from),
            [vec!["a".to_string(), "b".to_string()], vec!["b".to_string(), "c".to_string()]],
        );
        assert!(matches!(err, Err(OpenBookError::Crossing(..))));
        let trivial = PlanarOpenBook::new(["a", "b"].map(String::from), [vec!["a".to_string(), "b".to_string()]]);
        assert!(matches!(trivial, Err(OpenBookError::TrivialCurve(_))));
    }

    #[test]
    fn canonical_form_ignores_labels_and_outer_choice() {
        let x = book(&["a", "b", "c", "d"], &[&["a"], &["a", "b"], &["c"]]);
        let y = book(&["p", "q", "r", "s"], &[&["s"], &["s", "r"], &["q"]]);
        let z = book(&["p", "q", "r", "s"], &[&["s"], &["s", "r"], &["q", "r", "s"]]);
        assert!(isomorphic(&x, &y));
        assert_eq!(canonical_form(&x).code, canonical_form(&z).code);
        let w = book(&["p", "q", "r", "s"], &[&["s"], &["p", "q"], &["q"]]);
        assert!(isomorphic(&x, &w));
        let v = book(&["p", "q", "r", "s"], &[&["s"], &["s"], &["q"]]);
        assert!(!isomorphic(&x, &v));
    }

    #[test]
    fn direct_route_on_example() {
        let t = branched_example();
        let b = openbook_from_tree(&t).unwrap();
        assert_eq!(
            b.page_stats(),
            PageStats { boundary_components: 9, euler_characteristic: -7, twists: 13 }
        );
        let e = compose_from_edges(&t).unwrap();
        assert_eq!(e.page_stats(), b.page_stats());
        assert!(isomorphic(&b, &e));
    }

    #[test]
    fn direct_route_small_trees() {
        for t in [
            PlumbingTree::linear(&[-2]).unwrap(),
            PlumbingTree::linear(&[-5]).unwrap(),
            PlumbingTree::linear(&[-2, -3]).unwrap(),
            PlumbingTree::linear(&[-3, -2, -4]).unwrap(),
            star(-3, 3),
            star(-5, 4),
        ] {
            let b = openbook_from_tree(&t).unwrap();
            let e = compose_from_edges(&t).unwrap();
            assert!(isomorphic(&b, &e), "{t}");
        }
    }

    #[test]
    fn bitset_code_matches_forest_code() {
        for t in crate::gen::random_trees(11, 40) {
            let b = openbook_from_tree(&t).unwrap();
            let c = canonical_form(&b);
            assert_eq!(laminar_forest(&b, &c.root).unwrap().code(), c.code);
            let slow = b.boundaries().iter().map(|r| laminar_forest(&b, r).unwrap().code()).min().unwrap();
            assert_eq!(slow, c.code);
        }
    }

    #[test]
    fn json_round_trip() {
        let b = openbook_from_tree(&branched_example()).unwrap();
        assert_eq!(PlanarOpenBook::from_json(&b.to_json()).unwrap(), b);
    }
}
