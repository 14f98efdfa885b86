//! Legendrian realizations of rolled-up diagrams and the open books they
//! sit on.
//!
//! Each chain starts from a Legendrian unknot with `tb = -1` on a page of the
//! Hopf open book (root chain) or as a meridian through a stabilization hole
//! of its parent (branch chains). Later components of a chain are Legendrian
//! push-offs of the previous one. Every zigzag is a stabilization of the
//! open book, which adds a hole to the page and a twist around it.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::graph::PlumbingTree;
use crate::openbook::{self, OpenBookError, PlanarOpenBook, Side, HOPF_HOLE, OUTER};
use crate::rollup::{self, RolledLink, RollupError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LegendrianError {
    #[error("move {0} comes before the initial Hopf band")]
    BeforeStart(usize),
    #[error("move {0} starts a second Hopf band")]
    AlreadyStarted(usize),
    #[error("move {index} refers to component {found} but component {expected:?} is active")]
    UnknownComponent {
        index: usize,
        expected: Option<usize>,
        found: usize,
    },
    #[error("move {index} needs interface hole `{label}` which does not exist")]
    MissingInterface { index: usize, label: String },
    #[error("move {index} creates hole `{label}` which already exists")]
    DuplicateHole { index: usize, label: String },
    #[error("no component {0}")]
    NoSuchComponent(usize),
    #[error(transparent)]
    Rollup(#[from] RollupError),
    #[error(transparent)]
    OpenBook(#[from] OpenBookError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZigzagSide {
    Left,
    Right,
}

impl ZigzagSide {
    pub fn flipped(self) -> Self {
        match self {
            ZigzagSide::Left => ZigzagSide::Right,
            ZigzagSide::Right => ZigzagSide::Left,
        }
    }

    /// Contribution to the rotation number.
    pub fn rotation(self) -> i64 {
        match self {
            ZigzagSide::Left => 1,
            ZigzagSide::Right => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Hopf open book with the unknot of component 0 on its page.
    StartHopf,
    /// Component `component` starts a branch chain as a meridian through
    /// the hole `interface`.
    BranchStart { component: usize, interface: String },
    /// One zigzag on the active component, creating hole `hole`.
    Stabilize {
        component: usize,
        hole: String,
        side: ZigzagSide,
    },
    /// Legendrian surgery on the active component.
    Surgery { component: usize },
    /// The next component is a push-off of the active one.
    PushOff { component: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LegendrianPlan {
    pub link: RolledLink,
    pub moves: Vec<Move>,
    /// Zigzag side of each component.
    pub sides: Vec<ZigzagSide>,
}

/// All zigzags on the right.
pub fn plan(tree: &PlumbingTree) -> Result<LegendrianPlan, LegendrianError> {
    Ok(plan_for_link(tree, rollup::rolled_link(tree)?))
}

/// Plan realizing a given rolled link of `tree`. Stabilization counts come
/// from the Euler numbers of the tree, not from the link framings.
pub fn plan_for_link(tree: &PlumbingTree, link: RolledLink) -> LegendrianPlan {
    let dec = &link.decomposition;
    let mut moves = Vec::new();
    let mut comp = 0;
    for (c, chain) in dec.chains().iter().enumerate() {
        match chain.attachment {
            None => moves.push(Move::StartHopf),
            Some(a) => moves.push(Move::BranchStart {
                component: comp,
                interface: openbook::hole_label(a.parent, a.index, a.slot),
            }),
        }
        for (j, &v) in chain.vertices.iter().enumerate() {
            if j > 0 {
                moves.push(Move::PushOff { component: comp });
            }
            for s in 0..rollup::holes_at(tree.euler(v)) {
                moves.push(Move::Stabilize {
                    component: comp,
                    hole: openbook::hole_label(c, j, s),
                    side: ZigzagSide::Right,
                });
            }
            moves.push(Move::Surgery { component: comp });
            comp += 1;
        }
    }
    let sides = vec![ZigzagSide::Right; link.components.len()];
    LegendrianPlan { link, moves, sides }
}

/// The mirror realization: every zigzag switches sides.
pub fn conjugate_plan(plan: &LegendrianPlan) -> LegendrianPlan {
    let moves = plan
        .moves
        .iter()
        .map(|m| match m {
            Move::Stabilize { component, hole, side } => Move::Stabilize {
                component: *component,
                hole: hole.clone(),
                side: side.flipped(),
            },
            other => other.clone(),
        })
        .collect();
    LegendrianPlan {
        link: plan.link.clone(),
        moves,
        sides: plan.sides.iter().map(|s| s.flipped()).collect(),
    }
}

/// Replays the moves on a page. Curves are tracked by their side away from
/// the outer boundary `o`.
pub fn run_plan(moves: &[Move]) -> Result<PlanarOpenBook, LegendrianError> {
    let mut boundaries: Vec<String> = Vec::new();
    let mut curves: Vec<Side> = Vec::new();
    // boundary the active knot runs around, and the active component
    let mut anchor: Option<String> = None;
    let mut active: Option<usize> = None;
    let mut next_component = 0;

    let check = |index: usize, active: Option<usize>, found: usize| {
        if active == Some(found) {
            Ok(())
        } else {
            Err(LegendrianError::UnknownComponent {
                index,
                expected: active,
                found,
            })
        }
    };

    for (index, m) in moves.iter().enumerate() {
        if anchor.is_none() && !matches!(m, Move::StartHopf) {
            return Err(LegendrianError::BeforeStart(index));
        }
        match m {
            Move::StartHopf => {
                if !boundaries.is_empty() {
                    return Err(LegendrianError::AlreadyStarted(index));
                }
                boundaries = vec![OUTER.to_string(), HOPF_HOLE.to_string()];
                curves.push(Side::from([HOPF_HOLE.to_string()]));
                anchor = Some(OUTER.to_string());
                active = Some(next_component);
                next_component += 1;
            }
            Move::BranchStart { component, interface } => {
                if *component != next_component {
                    return Err(LegendrianError::UnknownComponent {
                        index,
                        expected: Some(next_component),
                        found: *component,
                    });
                }
                if interface == OUTER || !boundaries.contains(interface) {
                    return Err(LegendrianError::MissingInterface {
                        index,
                        label: interface.clone(),
                    });
                }
                anchor = Some(interface.clone());
                active = Some(next_component);
                next_component += 1;
            }
            Move::PushOff { component } => {
                if *component != next_component || active.is_none() {
                    return Err(LegendrianError::UnknownComponent {
                        index,
                        expected: Some(next_component),
                        found: *component,
                    });
                }
                active = Some(next_component);
                next_component += 1;
            }
            Move::Stabilize { component, hole, .. } => {
                check(index, active, *component)?;
                if boundaries.contains(hole) {
                    return Err(LegendrianError::DuplicateHole {
                        index,
                        label: hole.clone(),
                    });
                }
                let a = anchor.as_ref().expect("started");
                for side in curves.iter_mut() {
                    if side.contains(a) {
                        side.insert(hole.clone());
                    }
                }
                boundaries.push(hole.clone());
                curves.push(Side::from([hole.clone()]));
            }
            Move::Surgery { component } => {
                check(index, active, *component)?;
                let a = anchor.as_ref().expect("started");
                let side: Side = if a == OUTER {
                    boundaries.iter().filter(|b| *b != OUTER).cloned().collect()
                } else {
                    Side::from([a.clone()])
                };
                curves.push(side);
            }
        }
    }
    if anchor.is_none() {
        return Err(LegendrianError::BeforeStart(moves.len()));
    }
    Ok(PlanarOpenBook::new(boundaries, curves)?)
}

/// Front data of one rolled component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentFront {
    pub component: usize,
    pub chain: usize,
    pub position: usize,
    /// Smooth framing from the rolled-up diagram.
    pub framing: i64,
    /// Thurston–Bennequin number of the Legendrian realization.
    pub tb: i64,
    pub rot: i64,
    /// Zigzags added on this component beyond those of its push-off parent.
    pub new_zigzags: usize,
    pub zigzags: usize,
    pub side: ZigzagSide,
}

impl ComponentFront {
    /// Legendrian surgery framing `tb - 1` equals the smooth framing.
    pub fn consistent(&self) -> bool {
        self.tb - 1 == self.framing
            && self.zigzags as i64 == -self.tb - 1
            && self.rot.unsigned_abs() as usize == self.zigzags
            && self.rot * self.side.rotation() >= 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrontStats {
    pub components: Vec<ComponentFront>,
    /// Twist boxes of each chain.
    pub twist_boxes: Vec<Vec<i64>>,
}

impl FrontStats {
    pub fn consistent(&self) -> bool {
        self.components.iter().all(ComponentFront::consistent)
    }
}

pub fn front_stats(plan: &LegendrianPlan) -> FrontStats {
    let link = &plan.link;
    let n = link.components.len();
    let mut new_zigzags = vec![0usize; n];
    let mut new_rot = vec![0i64; n];
    for m in &plan.moves {
        if let Move::Stabilize { component, side, .. } = m {
            if *component < n {
                new_zigzags[*component] += 1;
                new_rot[*component] += side.rotation();
            }
        }
    }
    let mut components = Vec::with_capacity(n);
    let (mut zig, mut rot) = (0usize, 0i64);
    for (k, c) in link.components.iter().enumerate() {
        if c.position == 0 {
            zig = 0;
            rot = 0;
        }
        zig += new_zigzags[k];
        rot += new_rot[k];
        components.push(ComponentFront {
            component: k,
            chain: c.chain,
            position: c.position,
            framing: c.framing,
            tb: -1 - zig as i64,
            rot,
            new_zigzags: new_zigzags[k],
            zigzags: zig,
            side: plan.sides.get(k).copied().unwrap_or(ZigzagSide::Right),
        });
    }
    let dec = &link.decomposition;
    let twist_boxes = (0..dec.len())
        .map(|c| {
            let eulers: Vec<i64> = dec.chain(c).vertices.iter().map(|&v| link_euler(link, v)).collect();
            rollup::twist_boxes(&eulers)
        })
        .collect();
    FrontStats { components, twist_boxes }
}

pub fn component_front(plan: &LegendrianPlan, component: usize) -> Result<ComponentFront, LegendrianError> {
    front_stats(plan)
        .components
        .into_iter()
        .nth(component)
        .ok_or(LegendrianError::NoSuchComponent(component))
}

/// Euler number of a tree vertex, recovered from the chain framings.
fn link_euler(link: &RolledLink, vertex: usize) -> i64 {
    let (c, j) = link.decomposition.locate(vertex);
    let f = link.chain_framings(c);
    if j == 0 {
        f[0]
    } else {
        f[j] - f[j - 1] - 2
    }
}

/// First Chern class of the Stein filling, on the rolled basis (rotation
/// numbers) and on the vertex basis (indexed by tree vertex).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct C1Vector {
    pub per_component: Vec<i64>,
    pub per_vertex: Vec<i64>,
}

pub fn c1_vector(plan: &LegendrianPlan) -> C1Vector {
    let front = front_stats(plan);
    let per_component: Vec<i64> = front.components.iter().map(|c| c.rot).collect();
    let mut per_vertex = vec![0; per_component.len()];
    for (k, c) in plan.link.components.iter().enumerate() {
        per_vertex[c.vertex] = if c.position == 0 {
            per_component[k]
        } else {
            per_component[k] - per_component[k - 1]
        };
    }
    C1Vector {
        per_component,
        per_vertex,
    }
}

/// Rotation numbers transform like the basis: `per_component = pᵀ per_vertex`.
pub fn c1_consistent(plan: &LegendrianPlan, c1: &C1Vector) -> bool {
    let p = &plan.link.p;
    (0..p.dim()).all(|k| {
        let sum: num_bigint::BigInt = (0..p.dim()).map(|v| p.get(v, k) * c1.per_vertex[v]).sum();
        sum == c1.per_component[k].into()
    })
}

/// Holes created by the plan, in creation order.
pub fn holes(moves: &[Move]) -> Vec<String> {
    moves
        .iter()
        .filter_map(|m| match m {
            Move::Stabilize { hole, .. } => Some(hole.clone()),
            _ => None,
        })
        .collect()
}

/// Distinct stabilization holes per component.
pub fn holes_by_component(moves: &[Move]) -> Vec<BTreeSet<String>> {
    let mut out: Vec<BTreeSet<String>> = Vec::new();
    for m in moves {
        if let Move::Stabilize { component, hole, .. } = m {
            if out.len() <= *component {
                out.resize(component + 1, BTreeSet::new());
            }
            out[*component].insert(hole.clone());
        }
    }
    out
}
