//! SVG arc diagrams of book embeddings.
//!
//! The spine is vertical with the first vertex at the bottom. Page 1 arcs are
//! semicircles to the left, page 2 to the right; further pages are drawn to
//! the right as flatter or wider half-ellipses with a dashed stroke, one
//! scale per page, so arcs of one page still cross only if their intervals
//! interleave.

use crate::book::{verify_kube, BookEmbedding};
use crate::graph::Digraph;
use crate::Error;
use std::fmt::Write;

const GAP: f64 = 40.0;
const MARGIN: f64 = 30.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcShape {
    pub edge: usize,
    pub page: usize,
    /// Spine positions of the endpoints, lo < hi.
    pub lo: usize,
    pub hi: usize,
}

/// The arcs of a drawing, by spine interval.
pub fn arc_shapes(g: &Digraph, be: &BookEmbedding) -> Vec<ArcShape> {
    let pos = be.positions();
    g.edges
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| {
            let (a, b) = (pos[u], pos[v]);
            ArcShape { edge: e, page: be.sigma[e], lo: a.min(b), hi: a.max(b) }
        })
        .collect()
}

/// Horizontal stretch of the half-ellipses of a page (1 for pages 1 and 2).
fn stretch(page: usize) -> f64 {
    if page <= 2 {
        1.0
    } else {
        1.0 + 0.4 * (page - 2) as f64
    }
}

/// Renders a valid book embedding. `labels` names the vertices (indices are
/// used when empty).
pub fn render_arc_diagram(g: &Digraph, be: &BookEmbedding, labels: &[String]) -> Result<String, Error> {
    let rep = verify_kube(g, be);
    if !rep.valid {
        return Err(Error::Invalid(format!("not a valid {}UBE: {:?}", be.k, rep.violation)));
    }
    let n = be.order.len();
    let shapes = arc_shapes(g, be);
    let span = shapes.iter().map(|a| a.hi - a.lo).max().unwrap_or(1) as f64 * GAP / 2.0;
    let left = span;
    let right = span * stretch(be.k.max(2));
    let width = left + right + 2.0 * MARGIN;
    let height = (n.max(1) - 1) as f64 * GAP + 2.0 * MARGIN;
    let cx = MARGIN + left;
    let y = |i: usize| height - MARGIN - i as f64 * GAP;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    )
    .unwrap();
    writeln!(s, r##"<line class="spine" x1="{cx:.1}" y1="{:.1}" x2="{cx:.1}" y2="{:.1}" stroke="#999" stroke-width="1"/>"##, y(0), y(n.saturating_sub(1))).unwrap();
    for a in &shapes {
        let r = (a.hi - a.lo) as f64 * GAP / 2.0;
        let rx = r * stretch(a.page);
        // y decreases upward in SVG; sweep 0 bulges left when going up
        let sweep = if a.page == 1 { 0 } else { 1 };
        let dash = if a.page > 2 { r#" stroke-dasharray="5,3""# } else { "" };
        writeln!(
            s,
            r#"<path class="arc page-{p}" data-edge="{e}" data-lo="{lo}" data-hi="{hi}" d="M {cx:.1} {y0:.1} A {rx:.1} {r:.1} 0 0 {sweep} {cx:.1} {y1:.1}" fill="none" stroke="{c}" stroke-width="1.5"{dash}/>"#,
            p = a.page,
            e = a.edge,
            lo = a.lo,
            hi = a.hi,
            y0 = y(a.lo),
            y1 = y(a.hi),
            c = COLORS[(a.page - 1) % COLORS.len()],
        )
        .unwrap();
    }
    for (i, &v) in be.order.iter().enumerate() {
        let name = labels.get(v).cloned().unwrap_or_else(|| v.to_string());
        writeln!(s, r#"<circle class="vertex" data-vertex="{v}" cx="{cx:.1}" cy="{:.1}" r="4" fill="black"/>"#, y(i)).unwrap();
        writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-size="11" font-family="sans-serif">{}</text>"#, cx + 6.0, y(i) - 4.0, escape(&name)).unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Arcs read back from a rendered document: (page, lo, hi).
pub fn parse_arcs(svg: &str) -> Vec<(usize, usize, usize)> {
    let attr = |line: &str, key: &str| -> Option<usize> {
        let i = line.find(&format!("{key}=\""))? + key.len() + 2;
        line[i..].split('"').next()?.parse().ok()
    };
    svg.lines()
        .filter(|l| l.contains(r#"class="arc"#))
        .filter_map(|l| {
            let page = l.split("page-").nth(1)?.split('"').next()?.parse().ok()?;
            Some((page, attr(l, "data-lo")?, attr(l, "data-hi")?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn diamond_has_two_arcs_per_side() {
        let p = fixtures::diamond();
        assert_eq!(p.g.edges, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        let be = BookEmbedding { k: 2, order: vec![0, 1, 2, 3], sigma: vec![1, 1, 2, 2] };
        let svg = render_arc_diagram(&p.g, &be, &[]).unwrap();
        let arcs = parse_arcs(&svg);
        assert_eq!(arcs.iter().filter(|a| a.0 == 1).count(), 2);
        assert_eq!(arcs.iter().filter(|a| a.0 == 2).count(), 2);
    }

    #[test]
    fn single_edge() {
        let p = fixtures::k2();
        let be = BookEmbedding { k: 2, order: vec![0, 1], sigma: vec![1] };
        assert_eq!(parse_arcs(&render_arc_diagram(&p.g, &be, &[]).unwrap()).len(), 1);
    }

    #[test]
    fn third_page_is_dashed() {
        let g = Digraph::new(4, vec![(0, 2), (1, 3), (0, 1), (2, 3), (0, 3)]);
        let be = BookEmbedding { k: 3, order: vec![0, 1, 2, 3], sigma: vec![1, 2, 1, 1, 3] };
        let svg = render_arc_diagram(&g, &be, &[]).unwrap();
        let line = svg.lines().find(|l| l.contains("page-3")).unwrap();
        assert!(line.contains("stroke-dasharray"));
    }

    #[test]
    fn invalid_embedding_is_rejected() {
        let g = Digraph::new(4, vec![(0, 2), (1, 3), (0, 1), (2, 3)]);
        let be = BookEmbedding { k: 2, order: vec![0, 1, 2, 3], sigma: vec![1, 1, 1, 1] };
        assert!(render_arc_diagram(&g, &be, &[]).is_err());
    }
}
