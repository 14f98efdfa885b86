//! Deterministic SVG drawings of trees, pages and schematic fronts.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::graph::PlumbingTree;
use crate::legendrian::{front_stats, LegendrianPlan, ZigzagSide};
use crate::openbook::{canonical_form, laminar_forest, ForestNode, PlanarOpenBook, Side};

/// An SVG document with a tally of the drawing elements it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvgDoc {
    pub text: String,
    counts: BTreeMap<&'static str, usize>,
}

impl SvgDoc {
    pub fn count(&self, element: &str) -> usize {
        self.counts.get(element).copied().unwrap_or(0)
    }
}

struct Builder {
    body: String,
    counts: BTreeMap<&'static str, usize>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            body: String::new(),
            counts: BTreeMap::new(),
        }
    }

    fn element(&mut self, name: &'static str, attrs: &str, content: Option<&str>) {
        *self.counts.entry(name).or_default() += 1;
        match content {
            Some(c) => {
                let _ = writeln!(self.body, "  <{name} {attrs}>{}</{name}>", escape(c));
            }
            None => {
                let _ = writeln!(self.body, "  <{name} {attrs}/>");
            }
        }
    }

    fn finish(self, width: f64, height: f64) -> SvgDoc {
        let mut text = String::new();
        let _ = writeln!(text, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            text,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = num(width.max(1.0)),
            h = num(height.max(1.0)),
        );
        let _ = writeln!(
            text,
            "  <style>.binding{{fill:none;stroke:#000;stroke-width:2}} .twist{{fill:none;stroke:#c00;stroke-width:1}} \
             .knot{{fill:none;stroke:#00c;stroke-width:1.5}} .vertex{{fill:#fff;stroke:#000}} \
             .edge{{stroke:#000}} .box{{fill:#eee;stroke:#000}} text{{font-family:monospace;font-size:11px}}</style>"
        );
        text.push_str(&self.body);
        text.push_str("</svg>\n");
        SvgDoc {
            text,
            counts: self.counts,
        }
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const HOLE_RADIUS: f64 = 8.0;
const PAD: f64 = 6.0;
const RING: f64 = 4.0;
const MARGIN: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub enum CircleKind {
    /// A binding component; the outer one has `outer` set.
    Binding { label: String, outer: bool },
    /// One copy of a twist curve; `side` is its side away from the outer
    /// boundary.
    Twist { side: Side, copy: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutCircle {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
    pub kind: CircleKind,
}

impl LayoutCircle {
    /// `other` lies in the open disc bounded by `self`.
    pub fn contains(&self, other: &LayoutCircle) -> bool {
        let d = ((self.cx - other.cx).powi(2) + (self.cy - other.cy).powi(2)).sqrt();
        d + other.r < self.r - 1e-9
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageLayout {
    pub root: String,
    pub circles: Vec<LayoutCircle>,
    pub size: f64,
}

/// Nested-circle layout of a page with the canonical root outermost.
/// Siblings sit side by side on the horizontal diameter of their parent.
pub fn page_layout(book: &PlanarOpenBook) -> PageLayout {
    let root = canonical_form(book).root;
    let forest = laminar_forest(book, &root).expect("canonical root is a boundary");
    let inner = row_width(&forest.children) / 2.0 + PAD;
    let outer_r = inner.max(HOLE_RADIUS + PAD);
    let size = 2.0 * (outer_r + MARGIN);
    let c = size / 2.0;
    let mut circles = vec![LayoutCircle {
        cx: c,
        cy: c,
        r: outer_r,
        kind: CircleKind::Binding {
            label: root.clone(),
            outer: true,
        },
    }];
    place_row(&forest.children, c, c, &mut circles);
    PageLayout { root, circles, size }
}

fn radius(node: &ForestNode) -> f64 {
    match node {
        ForestNode::Boundary { .. } => HOLE_RADIUS,
        ForestNode::Curve {
            multiplicity,
            children,
            ..
        } => row_width(children) / 2.0 + PAD + RING * (*multiplicity as f64 - 1.0),
    }
}

fn row_width(nodes: &[ForestNode]) -> f64 {
    let sum: f64 = nodes.iter().map(|n| 2.0 * radius(n)).sum();
    sum + PAD * nodes.len().saturating_sub(1) as f64
}

fn place_row(nodes: &[ForestNode], cx: f64, cy: f64, out: &mut Vec<LayoutCircle>) {
    let mut x = cx - row_width(nodes) / 2.0;
    for node in nodes {
        let r = radius(node);
        place(node, x + r, cy, out);
        x += 2.0 * r + PAD;
    }
}

fn place(node: &ForestNode, cx: f64, cy: f64, out: &mut Vec<LayoutCircle>) {
    match node {
        ForestNode::Boundary { label } => out.push(LayoutCircle {
            cx,
            cy,
            r: HOLE_RADIUS,
            kind: CircleKind::Binding {
                label: label.clone(),
                outer: false,
            },
        }),
        ForestNode::Curve {
            side,
            multiplicity,
            children,
        } => {
            let r = radius(node);
            for k in 0..*multiplicity {
                out.push(LayoutCircle {
                    cx,
                    cy,
                    r: r - RING * k as f64,
                    kind: CircleKind::Twist {
                        side: side.clone(),
                        copy: k,
                    },
                });
            }
            place_row(children, cx, cy, out);
        }
    }
}

/// One circle per boundary component and per twist; no labels.
pub fn render_page_svg(book: &PlanarOpenBook) -> SvgDoc {
    let layout = page_layout(book);
    let mut b = Builder::new();
    for c in &layout.circles {
        let class = match c.kind {
            CircleKind::Binding { .. } => "binding",
            CircleKind::Twist { .. } => "twist",
        };
        b.element(
            "circle",
            &format!(r#"class="{class}" cx="{}" cy="{}" r="{}""#, num(c.cx), num(c.cy), num(c.r)),
            None,
        );
    }
    b.finish(layout.size, layout.size)
}

/// Schematic fronts: one cusped loop per component, components of a chain
/// nested left to right, each annotated with its classical invariants.
pub fn render_front_svg(plan: &LegendrianPlan) -> SvgDoc {
    let front = front_stats(plan);
    let mut b = Builder::new();
    let chains = front.twist_boxes.len();
    let max_len = (0..chains)
        .map(|c| front.components.iter().filter(|f| f.chain == c).count())
        .max()
        .unwrap_or(0);
    let band = 70.0 + 14.0 * max_len as f64;
    let width = 360.0;
    let mut y0 = MARGIN;
    for c in 0..chains {
        let comps: Vec<_> = front.components.iter().filter(|f| f.chain == c).collect();
        let mid = y0 + band / 2.0;
        for f in &comps {
            let half_w = 30.0 + 12.0 * f.position as f64;
            let half_h = 12.0 + 5.0 * f.position as f64;
            let left = 80.0 - half_w;
            let right = 80.0 + half_w;
            let zig = f.zigzags.min(12);
            let mut d = format!("M {} {}", num(left), num(mid));
            let _ = write!(d, " Q {} {} {} {}", num(80.0), num(mid - 2.0 * half_h), num(right), num(mid));
            // zigzags as a sawtooth on the lower strand
            let step = if zig > 0 { 2.0 * half_w / (2 * zig + 1) as f64 } else { 0.0 };
            let dir = if f.side == ZigzagSide::Right { 1.0 } else { -1.0 };
            for k in 0..zig {
                let xa = right - step * (2 * k + 1) as f64;
                let xb = right - step * (2 * k + 2) as f64;
                let _ = write!(d, " L {} {} L {} {}", num(xa), num(mid + half_h * 0.5), num(xb - dir), num(mid + half_h * 0.9));
            }
            let _ = write!(d, " Q {} {} {} {} Z", num(80.0), num(mid + 2.0 * half_h), num(left), num(mid));
            b.element("path", &format!(r#"class="knot" d="{d}""#), None);
            let side = match f.side {
                ZigzagSide::Left => "left",
                ZigzagSide::Right => "right",
            };
            b.element(
                "text",
                &format!(r#"x="{}" y="{}""#, num(180.0), num(y0 + 14.0 + 13.0 * f.position as f64)),
                Some(&format!(
                    "m={} tb={} rot={} zigzags={} side={side}",
                    f.framing, f.tb, f.rot, f.zigzags
                )),
            );
        }
        for (k, t) in front.twist_boxes[c].iter().enumerate() {
            let x = 20.0 + 44.0 * k as f64;
            let y = y0 + band - 22.0;
            b.element(
                "rect",
                &format!(r#"class="box" x="{}" y="{}" width="36" height="16""#, num(x), num(y)),
                None,
            );
            b.element(
                "text",
                &format!(r#"x="{}" y="{}""#, num(x + 4.0), num(y + 12.0)),
                Some(&t.to_string()),
            );
        }
        y0 += band;
    }
    b.finish(width, y0 + MARGIN)
}

/// Layered drawing: breadth-first layers from the first declared vertex.
pub fn render_tree_svg(tree: &PlumbingTree) -> SvgDoc {
    let n = tree.len();
    let mut depth = vec![usize::MAX; n];
    let mut layers: Vec<Vec<usize>> = Vec::new();
    depth[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        if layers.len() <= depth[v] {
            layers.push(Vec::new());
        }
        layers[depth[v]].push(v);
        for &w in tree.neighbors(v) {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let (dx, dy, r) = (110.0, 70.0, 16.0);
    let widest = layers.iter().map(Vec::len).max().unwrap_or(1) as f64;
    let width = widest * dx + 2.0 * MARGIN;
    let mut pos = vec![(0.0, 0.0); n];
    for (d, layer) in layers.iter().enumerate() {
        let offset = (width - layer.len() as f64 * dx) / 2.0;
        for (i, &v) in layer.iter().enumerate() {
            pos[v] = (offset + dx * (i as f64 + 0.5), MARGIN + r + dy * d as f64);
        }
    }
    let mut b = Builder::new();
    for (a, c) in tree.edges() {
        b.element(
            "line",
            &format!(
                r#"class="edge" x1="{}" y1="{}" x2="{}" y2="{}""#,
                num(pos[a].0),
                num(pos[a].1),
                num(pos[c].0),
                num(pos[c].1)
            ),
            None,
        );
    }
    for v in 0..n {
        let (x, y) = pos[v];
        b.element(
            "circle",
            &format!(r#"class="vertex" cx="{}" cy="{}" r="{}""#, num(x), num(y), num(r)),
            None,
        );
        b.element(
            "text",
            &format!(r#"x="{}" y="{}" text-anchor="middle""#, num(x), num(y + r + 13.0)),
            Some(&format!("{}: {}", tree.id(v), tree.euler(v))),
        );
    }
    b.finish(width, 2.0 * MARGIN + 2.0 * r + dy * (layers.len() as f64 - 1.0) + 16.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendrian::{conjugate_plan, plan};
    use crate::openbook::{bundle_openbook, openbook_from_tree};
    use crate::testing::branched_example;

    #[test]
    fn page_counts() {
        assert_eq!(render_page_svg(&bundle_openbook(-3).unwrap()).count("circle"), 6);
        assert_eq!(render_page_svg(&bundle_openbook(-2).unwrap()).count("circle"), 4);
        let b = openbook_from_tree(&branched_example()).unwrap();
        assert_eq!(render_page_svg(&b).count("circle"), 9 + 13);
    }

    #[test]
    fn front_annotations() {
        let single = PlumbingTree::linear(&[-2]).unwrap();
        let doc = render_front_svg(&plan(&single).unwrap());
        assert_eq!(doc.count("path"), 1);
        assert!(doc.text.contains("m=-2 tb=-1 rot=0"));

        let p = plan(&branched_example()).unwrap();
        let doc = render_front_svg(&p);
        assert_eq!(doc.count("path"), 5);
        assert_eq!(doc.count("rect"), 3);
        for m in ["m=-2 ", "m=-6 ", "m=-4 ", "m=-5 "] {
            assert!(doc.text.contains(m), "{m}");
        }
        let conj = render_front_svg(&conjugate_plan(&p));
        assert!(conj.text.contains("side=left"));
        assert!(!doc.text.contains("side=left"));
    }

    #[test]
    fn tree_counts() {
        let doc = render_tree_svg(&branched_example());
        assert_eq!((doc.count("circle"), doc.count("line")), (5, 4));
        assert!(doc.text.contains("u2: -6"));
        let doc = render_tree_svg(&PlumbingTree::linear(&[-3]).unwrap());
        assert_eq!((doc.count("circle"), doc.count("line")), (1, 0));
    }

    #[test]
    fn number_formatting() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(2.5), "2.5");
        assert_eq!(num(-0.001), "0");
    }
}
