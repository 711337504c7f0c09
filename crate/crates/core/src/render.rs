//! Deterministic drawings of dotted diagrams: ASCII character grids and
//! standalone TikZ pictures.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::diagrams::{string_kind, DottedDiagram, StringKind};

#[derive(Debug, Error)]
#[error("unsupported render format `{0}`, expected ascii or tikz")]
pub struct RenderFormatError(String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Tikz,
}

impl FromStr for RenderFormat {
    type Err = RenderFormatError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(RenderFormat::Ascii),
            "tikz" => Ok(RenderFormat::Tikz),
            other => Err(RenderFormatError(other.to_string())),
        }
    }
}

impl fmt::Display for RenderFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenderFormat::Ascii => write!(f, "ascii"),
            RenderFormat::Tikz => write!(f, "tikz"),
        }
    }
}

pub fn render(d: &DottedDiagram, format: RenderFormat) -> String {
    match format {
        RenderFormat::Ascii => render_ascii(d),
        RenderFormat::Tikz => render_tikz(d),
    }
}

/// Boundary point p occupies character column 2(p-1); odd columns carry
/// crossings and arc interiors. Dots mark the canonical position of their
/// string: '*' for one dot, the digit for 2..9, '#' beyond.
fn render_ascii(d: &DottedDiagram) -> String {
    let width_points = d.a().max(d.b());
    if width_points == 0 {
        return String::new();
    }
    let w = (2 * width_points - 1) as usize;
    let h = (2 * width_points + 1) as usize;
    let mut grid = vec![vec![' '; w]; h];

    let put = |grid: &mut Vec<Vec<char>>, r: usize, c: usize, ch: char| {
        let cell = &mut grid[r][c];
        *cell = match (*cell, ch) {
            (' ', x) => x,
            (x, y) if x == y => x,
            ('/', '\\') | ('\\', '/') => 'X',
            _ => '+',
        };
    };

    let col = |p: u32| (2 * (p - 1)) as usize;
    for ((p, q), _) in d.strings() {
        match string_kind((p, q)) {
            StringKind::Through => {
                let (cb, ct) = (col(p.index()) as i64, col(q.index()) as i64);
                let steps = (h - 1) as i64;
                // Nearest column along the straight line, ties to the even
                // column so that mirrored strands stay mirror images.
                let at = |r: usize| {
                    let up = steps - r as i64;
                    let num = (ct - cb) * up;
                    let q = num.div_euclid(steps);
                    let rem2 = 2 * num.rem_euclid(steps);
                    let col = cb + q;
                    if rem2 > steps || (rem2 == steps && col % 2 != 0) {
                        col + 1
                    } else {
                        col
                    }
                };
                for r in 0..h {
                    let here = at(r);
                    let from_below = if r + 1 < h { here - at(r + 1) } else { 0 };
                    let to_above = if r > 0 { at(r - 1) - here } else { 0 };
                    let ch = if from_below > 0 || to_above > 0 {
                        '/'
                    } else if from_below < 0 || to_above < 0 {
                        '\\'
                    } else {
                        '|'
                    };
                    put(&mut grid, r, here as usize, ch);
                }
            }
            StringKind::Cap => {
                let (cl, cr) = (col(p.index()), col(q.index()));
                let rt = h - 2 - (q.index() - p.index()) as usize;
                put(&mut grid, rt, cl, '.');
                put(&mut grid, rt, cr, '.');
                for c in cl + 1..cr {
                    put(&mut grid, rt, c, '-');
                }
                for r in rt + 1..h {
                    put(&mut grid, r, cl, '|');
                    put(&mut grid, r, cr, '|');
                }
            }
            StringKind::Cup => {
                let (cl, cr) = (col(p.index()), col(q.index()));
                let rb = (q.index() - p.index()) as usize;
                put(&mut grid, rb, cl, '\'');
                put(&mut grid, rb, cr, '\'');
                for c in cl + 1..cr {
                    put(&mut grid, rb, c, '-');
                }
                for r in 0..rb {
                    put(&mut grid, r, cl, '|');
                    put(&mut grid, r, cr, '|');
                }
            }
        }
    }
    for ((p, q), dots) in d.strings() {
        if dots == 0 {
            continue;
        }
        let (r, c) = match string_kind((p, q)) {
            StringKind::Through | StringKind::Cap => (h - 1, col(p.index())),
            StringKind::Cup => (0, col(p.index())),
        };
        grid[r][c] = match dots {
            1 => '*',
            2..=9 => char::from_digit(dots, 10).expect("single digit"),
            _ => '#',
        };
    }

    let rows: Vec<String> =
        grid.iter().map(|r| r.iter().collect::<String>().trim_end().to_string()).collect();
    let first = rows.iter().position(|r| !r.is_empty()).unwrap_or(0);
    let last = rows.iter().rposition(|r| !r.is_empty()).unwrap_or(0);
    rows[first..=last].join("\n")
}

fn num(x: f64) -> String {
    format!("{x:.3}")
}

/// Bottom point i sits at (i-1, 0), top point j at (j-1, 2); dots are filled
/// circle nodes spaced along their string from its canonical end.
fn render_tikz(d: &DottedDiagram) -> String {
    let height = 2.0f64;
    let mut body = Vec::new();
    for ((p, q), dots) in d.strings() {
        let (i, j) = (p.index(), q.index());
        match string_kind((p, q)) {
            StringKind::Through => {
                let (xb, xt) = ((i - 1) as f64, (j - 1) as f64);
                body.push(format!(
                    "\\draw ({},{}) -- ({},{});",
                    num(xb),
                    num(0.0),
                    num(xt),
                    num(height)
                ));
                for n in 0..dots {
                    let t = 0.15 + 0.12 * n as f64;
                    body.push(node_at(xb + t * (xt - xb), t * height));
                }
            }
            StringKind::Cap => {
                let (xl, xr) = ((i - 1) as f64, (j - 1) as f64);
                let r = (xr - xl) / 2.0;
                body.push(format!("\\draw ({},{}) arc (0:180:{});", num(xr), num(0.0), num(r)));
                let cx = (xl + xr) / 2.0;
                for n in 0..dots {
                    let theta = (180.0 - 18.0 * (n + 1) as f64).to_radians();
                    body.push(node_at(cx + r * theta.cos(), r * theta.sin()));
                }
            }
            StringKind::Cup => {
                let (xl, xr) = ((i - 1) as f64, (j - 1) as f64);
                let r = (xr - xl) / 2.0;
                body.push(format!(
                    "\\draw ({},{}) arc (180:360:{});",
                    num(xl),
                    num(height),
                    num(r)
                ));
                let cx = (xl + xr) / 2.0;
                for n in 0..dots {
                    let theta = (180.0 + 18.0 * (n + 1) as f64).to_radians();
                    body.push(node_at(cx + r * theta.cos(), height + r * theta.sin()));
                }
            }
        }
    }
    let mut out = String::new();
    out.push_str("\\documentclass{standalone}\n\\usepackage{tikz}\n\\begin{document}\n");
    out.push_str("\\begin{tikzpicture}\n");
    for line in body {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("\\end{tikzpicture}\n\\end{document}\n");
    out
}

fn node_at(x: f64, y: f64) -> String {
    format!("\\node at ({},{}) [circle,fill,inner sep=1.5pt] {{}};", num(x), num(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{Connector, Pt};

    fn diagram(a: u32, b: u32, strings: &[((Pt, Pt), u32)]) -> DottedDiagram {
        DottedDiagram::from_parts(a, b, strings.to_vec()).expect("valid diagram")
    }

    #[test]
    fn identity_on_one_strand_is_a_vertical_bar() {
        let d = DottedDiagram::identity(1);
        assert_eq!(render(&d, RenderFormat::Ascii), "|\n|\n|");
    }

    #[test]
    fn swap_crosses_in_the_middle() {
        let d = diagram(2, 2, &[((Pt::B(1), Pt::T(2)), 0), ((Pt::B(2), Pt::T(1)), 0)]);
        assert_eq!(render(&d, RenderFormat::Ascii), "| |\n\\ /\n X\n/ \\\n| |");
    }

    #[test]
    fn cap_and_cup_render_with_dots() {
        let cap = diagram(2, 0, &[((Pt::B(1), Pt::B(2)), 1)]);
        assert_eq!(render(&cap, RenderFormat::Ascii), ".-.\n| |\n* |");

        let cup = diagram(0, 2, &[((Pt::T(1), Pt::T(2)), 2)]);
        assert_eq!(render(&cup, RenderFormat::Ascii), "2 |\n'-'");

        let tikz = render(&cap, RenderFormat::Tikz);
        assert!(tikz.starts_with("\\documentclass{standalone}"));
        assert!(tikz.contains("arc (0:180:0.500)"));
        assert_eq!(tikz.matches("circle,fill").count(), 1);
        assert!(tikz.ends_with("\\end{document}\n"));
    }

    #[test]
    fn tikz_draws_each_string_and_dot_once() {
        let d = diagram(
            3,
            3,
            &[((Pt::B(1), Pt::B(2)), 2), ((Pt::B(3), Pt::T(1)), 1), ((Pt::T(2), Pt::T(3)), 0)],
        );
        let tikz = render(&d, RenderFormat::Tikz);
        assert_eq!(tikz.matches("\\draw").count(), 3);
        assert_eq!(tikz.matches("\\node").count(), 3);
    }

    #[test]
    fn format_parsing_accepts_only_the_two_names() {
        assert_eq!("ascii".parse::<RenderFormat>().unwrap(), RenderFormat::Ascii);
        assert_eq!("tikz".parse::<RenderFormat>().unwrap(), RenderFormat::Tikz);
        assert!("svg".parse::<RenderFormat>().is_err());
    }

    #[test]
    fn every_small_basis_diagram_renders_without_panicking() {
        for (a, b) in [(0u32, 0u32), (1, 1), (2, 2), (3, 1), (1, 3), (4, 2), (3, 3)] {
            for k in 0..=2u32 {
                for d in crate::diagrams::enumerate_basis(a, b, k) {
                    let text = render(&d, RenderFormat::Ascii);
                    if a.max(b) > 0 {
                        assert!(!text.is_empty());
                    }
                    let tikz = render(&d, RenderFormat::Tikz);
                    assert_eq!(
                        tikz.matches("\\draw").count(),
                        d.connector().num_strings(),
                        "one stroke per string of {d}"
                    );
                    assert_eq!(tikz.matches("\\node").count(), d.total_dots() as usize);
                }
            }
        }
        let empty = DottedDiagram::undotted(Connector::new(0, 0, vec![]).unwrap());
        assert_eq!(render(&empty, RenderFormat::Ascii), "");
    }
}
