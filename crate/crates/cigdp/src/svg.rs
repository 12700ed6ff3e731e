//! Deterministic SVG rendering of drawings.
//!
//! Layers become columns, ranks run top to bottom. Incremental vertices
//! and the arcs touching them are styled differently from the frozen
//! originals. Only placed vertices (and arcs with both endpoints placed)
//! are drawn.

use crate::drawing::Drawing;
use std::fmt::Write as _;

pub struct RenderOptions {
    /// Horizontal distance between layer columns.
    pub column_gap: u32,
    /// Vertical distance between ranks.
    pub row_gap: u32,
    pub margin: u32,
    pub vertex_radius: u32,
    /// Emit a `<text>` label with the vertex id next to each circle.
    pub labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            column_gap: 90,
            row_gap: 28,
            margin: 40,
            vertex_radius: 7,
            labels: false,
        }
    }
}

pub fn render_svg(drawing: &Drawing, opts: &RenderOptions) -> String {
    let g = drawing.graph();
    let crossings = drawing.count_crossings();
    let max_rank = (0..g.num_layers())
        .map(|l| drawing.placed_count(l))
        .max()
        .unwrap_or(0) as u32;
    let width = 2 * opts.margin + opts.column_gap * (g.num_layers() as u32 - 1).max(1);
    let height = 2 * opts.margin + opts.row_gap * max_rank.saturating_sub(1);
    let x = |layer: usize| opts.margin + opts.column_gap * layer as u32;
    let y = |rank: u32| opts.margin + opts.row_gap * (rank - 1);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, "<title>crossings: {crossings}</title>");
    out.push_str(concat!(
        "<style>\n",
        ".arc-orig{stroke:#555;stroke-width:1.2;}\n",
        ".arc-inc{stroke:#c0392b;stroke-width:1.2;stroke-dasharray:5 3;}\n",
        ".v-orig{fill:#2c3e50;}\n",
        ".v-inc{fill:#e67e22;stroke:#c0392b;stroke-width:1.5;}\n",
        ".lbl{font:10px monospace;fill:#333;}\n",
        "</style>\n"
    ));
    let _ = writeln!(
        out,
        r##"<rect width="{width}" height="{height}" fill="#ffffff"/>"##
    );

    for pair in 0..g.num_layers().saturating_sub(1) {
        for arc in g.arcs_between(pair) {
            let (Some(rt), Some(rh)) = (drawing.rank(arc.tail), drawing.rank(arc.head)) else {
                continue;
            };
            let class = if g.is_incremental_arc(*arc) {
                "arc-inc"
            } else {
                "arc-orig"
            };
            let _ = writeln!(
                out,
                r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                x(pair),
                y(rt),
                x(pair + 1),
                y(rh)
            );
        }
    }

    for layer in 0..g.num_layers() {
        for &v in drawing.layer_order(layer) {
            let rank = drawing.rank(v).unwrap();
            let class = if g.is_original(v) { "v-orig" } else { "v-inc" };
            let _ = writeln!(
                out,
                r#"<circle class="{class}" cx="{}" cy="{}" r="{}"/>"#,
                x(layer),
                y(rank),
                opts.vertex_radius
            );
            if opts.labels {
                let _ = writeln!(
                    out,
                    r#"<text class="lbl" x="{}" y="{}">{v}</text>"#,
                    x(layer) + opts.vertex_radius + 3,
                    y(rank) + 3
                );
            }
        }
    }

    out.push_str("</svg>\n");
    out
}
