//! Static dendrogram drawings.
//!
//! Layout heights are the running maximum of raw heights up the tree, so a
//! parent is never drawn below its children; raw heights are annotated.

use std::fmt::Write as _;

use crate::band::BandMatrix;
use crate::dendrogram::{Dendrogram, NodeRef};

const SHADES: &[u8] = b" .:-=+*#%@";
const TXT_WIDTH: usize = 60;
const MAX_STRIP: usize = 20;

struct Layout {
    /// Position along the leaf axis, in leaf units.
    leaf_pos: Vec<f64>,
    merge_pos: Vec<f64>,
    merge_level: Vec<f64>,
    max_level: f64,
}

fn layout(d: &Dendrogram<f64>) -> Layout {
    let leaf_pos: Vec<f64> = (0..d.p()).map(|i| i as f64).collect();
    let mut merge_pos = Vec::with_capacity(d.len());
    let mut merge_level: Vec<f64> = Vec::with_capacity(d.len());
    let at = |r: NodeRef, pos: &[f64], level: &[f64]| match r {
        NodeRef::Leaf(i) => (i as f64, 0.0),
        NodeRef::Merge(t) => (pos[t], level[t]),
    };
    for m in d.merges() {
        let (xl, yl) = at(m.left, &merge_pos, &merge_level);
        let (xr, yr) = at(m.right, &merge_pos, &merge_level);
        merge_pos.push(0.5 * (xl + xr));
        merge_level.push(m.height.max(yl).max(yr).max(0.0));
    }
    let max_level = merge_level.iter().copied().fold(0.0, f64::max);
    Layout {
        leaf_pos,
        merge_pos,
        merge_level,
        max_level,
    }
}

fn shade(v: f64, max_abs: f64) -> char {
    if max_abs <= 0.0 {
        return ' ';
    }
    let k = ((v.abs() / max_abs) * (SHADES.len() - 1) as f64).round() as usize;
    SHADES[k.min(SHADES.len() - 1)] as char
}

fn band_max(m: &BandMatrix<f64>) -> f64 {
    (0..m.p())
        .flat_map(|i| m.row(i).iter().copied())
        .fold(0.0, |a, v: f64| a.max(v.abs()))
}

/// Text drawing: one line per leaf, tree growing to the right, optional
/// heat strip of each leaf's band row on the left, then one annotation
/// line per merge.
pub fn render_txt(d: &Dendrogram<f64>, matrix: Option<&BandMatrix<f64>>) -> String {
    let p = d.p();
    let lay = layout(d);
    let rows = 2 * p - 1;
    // column of every node, forced strictly right of its children
    let scale = |y: f64| {
        if lay.max_level > 0.0 {
            (y / lay.max_level * TXT_WIDTH as f64).round() as usize
        } else {
            0
        }
    };
    let mut merge_col: Vec<usize> = Vec::with_capacity(d.len());
    let mut merge_row: Vec<usize> = Vec::with_capacity(d.len());
    let node = |r: NodeRef, col: &[usize], row: &[usize]| match r {
        NodeRef::Leaf(i) => (2 * i, 0usize),
        NodeRef::Merge(t) => (row[t], col[t]),
    };
    for (t, m) in d.merges().iter().enumerate() {
        let (rl, cl) = node(m.left, &merge_col, &merge_row);
        let (rr, cr) = node(m.right, &merge_col, &merge_row);
        merge_col.push(scale(lay.merge_level[t]).max(cl + 1).max(cr + 1));
        merge_row.push((rl + rr) / 2);
    }
    let width = merge_col.iter().copied().max().unwrap_or(0) + 2;
    let mut grid = vec![vec![' '; width]; rows];
    for r in 0..p {
        grid[2 * r][0] = '-';
    }
    for (t, m) in d.merges().iter().enumerate() {
        let c = merge_col[t];
        let (rl, cl) = node(m.left, &merge_col, &merge_row);
        let (rr, cr) = node(m.right, &merge_col, &merge_row);
        for (row, from) in [(rl, cl), (rr, cr)] {
            for cell in &mut grid[row][from + 1..c] {
                *cell = '-';
            }
        }
        for row in &mut grid[rl..=rr] {
            if row[c] == ' ' {
                row[c] = '|';
            }
        }
        grid[rl][c] = '+';
        grid[rr][c] = '+';
    }

    let label_w = p.to_string().len();
    let strip_w = matrix.map_or(0, |m| m.h().min(MAX_STRIP));
    let max_abs = matrix.map_or(0.0, band_max);
    let mut out = String::new();
    for (r, line) in grid.iter().enumerate() {
        let tree: String = line.iter().collect();
        let tree = tree.trim_end();
        if r % 2 == 0 {
            let i = r / 2;
            let strip: String = match matrix {
                Some(m) => m.row(i)[..strip_w]
                    .iter()
                    .map(|&v| shade(v, max_abs))
                    .collect(),
                None => String::new(),
            };
            let sep = if strip.is_empty() { "" } else { " " };
            let _ = writeln!(out, "{strip}{sep}{:>label_w$} {tree}", i + 1);
        } else {
            let pad = strip_w + usize::from(strip_w > 0) + label_w + 1;
            let _ = writeln!(out, "{:pad$}{tree}", "");
        }
    }
    for (t, m) in d.merges().iter().enumerate() {
        let _ = writeln!(
            out,
            "merge {}: {} {} height={}",
            t + 1,
            m.left,
            m.right,
            crate::io::format_sig(m.height, crate::io::HEIGHT_DIGITS)
        );
    }
    out
}

/// SVG drawing: leaves along the x axis, tree above, optional band heat
/// strip below with cell `(i, i + d)` centred between leaves `i` and `i + d`.
pub fn render_svg(d: &Dendrogram<f64>, matrix: Option<&BandMatrix<f64>>) -> String {
    let p = d.p();
    let lay = layout(d);
    let margin = 20.0;
    let dx = (800.0 / p as f64).clamp(2.0, 20.0);
    let tree_h = 300.0;
    let strip_rows = matrix.map_or(0, |m| m.h().min(MAX_STRIP));
    let cell_h = dx.min(10.0);
    let width = 2.0 * margin + p as f64 * dx;
    let base = margin + tree_h;
    let height = base + margin + strip_rows as f64 * cell_h + margin;

    let x = |pos: f64| margin + (pos + 0.5) * dx;
    let y = |level: f64| {
        if lay.max_level > 0.0 {
            base - level / lay.max_level * tree_h
        } else {
            base
        }
    };
    let node = |r: NodeRef| match r {
        NodeRef::Leaf(i) => (x(lay.leaf_pos[i]), base),
        NodeRef::Merge(t) => (x(lay.merge_pos[t]), y(lay.merge_level[t])),
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(s, r#"  <g fill="none" stroke="black" stroke-width="1">"#);
    for (t, m) in d.merges().iter().enumerate() {
        let (xl, yl) = node(m.left);
        let (xr, yr) = node(m.right);
        let yt = y(lay.merge_level[t]);
        let _ = writeln!(
            s,
            r#"    <path d="M{xl:.2},{yl:.2} V{yt:.2} H{xr:.2} V{yr:.2}"><title>merge {} height {}</title></path>"#,
            t + 1,
            crate::io::format_sig(m.height, crate::io::HEIGHT_DIGITS)
        );
    }
    let _ = writeln!(s, "  </g>");
    let _ = writeln!(s, r#"  <g fill="black">"#);
    for &pos in &lay.leaf_pos {
        let _ = writeln!(
            s,
            r#"    <circle cx="{:.2}" cy="{base:.2}" r="1.5"/>"#,
            x(pos)
        );
    }
    let _ = writeln!(s, "  </g>");
    if let Some(m) = matrix {
        let max_abs = band_max(m);
        let top = base + margin;
        let _ = writeln!(s, r#"  <g stroke="none">"#);
        for i in 0..p {
            for dd in 0..strip_rows.min(p - i) {
                let v = m.get(i, i + dd);
                let level = if max_abs > 0.0 {
                    v.abs() / max_abs
                } else {
                    0.0
                };
                let grey = (255.0 * (1.0 - level)).round() as u8;
                let cx = x(i as f64 + dd as f64 / 2.0);
                let _ = writeln!(
                    s,
                    r#"    <rect x="{:.2}" y="{:.2}" width="{dx:.2}" height="{cell_h:.2}" fill="rgb({grey},{grey},{grey})"/>"#,
                    cx - dx / 2.0,
                    top + dd as f64 * cell_h
                );
            }
        }
        let _ = writeln!(s, "  </g>");
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::read_merges;

    #[test]
    fn txt_tree_for_three_leaves() {
        let d = read_merges("-1 -2 0.5\n1 -3 1.03333333333\n".as_bytes()).unwrap();
        let txt = render_txt(&d, None);
        assert_eq!(txt.lines().filter(|l| l.starts_with("merge ")).count(), 2);
        assert!(txt.lines().next().unwrap().starts_with("1 -"));
    }

    #[test]
    fn non_monotone_heights_still_draw_upwards() {
        let d = read_merges("-1 -2 2\n1 -3 1\n".as_bytes()).unwrap();
        let lay = layout(&d);
        assert_eq!(lay.merge_level, vec![2.0, 2.0]);
        let txt = render_txt(&d, None);
        assert!(txt.contains("height=1"));
    }

    #[test]
    fn single_leaf() {
        let d = read_merges("".as_bytes()).unwrap();
        assert_eq!(render_txt(&d, None), "1 -\n");
        let svg = render_svg(&d, None);
        assert_eq!(svg.matches("<circle").count(), 1);
    }

    #[test]
    fn strip_uses_band_rows() {
        let d = read_merges("-1 -2 0.5\n".as_bytes()).unwrap();
        let m = BandMatrix::from_diagonals(&[vec![1.0, 1.0], vec![0.5]]).unwrap();
        let txt = render_txt(&d, Some(&m));
        assert!(txt.starts_with("@+ 1"));
        let svg = render_svg(&d, Some(&m));
        assert_eq!(svg.matches("<rect").count(), 3);
    }
}
