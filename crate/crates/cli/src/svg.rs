//! SVG rendering of plane tropical curves, their Newton subdivisions and
//! stable intersections.

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use tropical_core::hypersurface::{TropicalHypersurface, WeightedPolyhedralComplex};
use tropical_core::rational::{format_rational, Rat};
use tropical_core::{Error, Result};

const PANEL: f64 = 360.0;
const PAD: f64 = 20.0;

/// Drawing window for a plane complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotSpec {
    pub min: [Rat; 2],
    pub max: [Rat; 2],
}

impl PlotSpec {
    /// Bounding box of the points widened by 20% on every side, and by at least
    /// one unit around a degenerate extent.
    pub fn around(points: &[&[Rat]]) -> Self {
        let mut min = [Rat::from_integer(0.into()), Rat::from_integer(0.into())];
        let mut max = min.clone();
        for k in 0..2 {
            if let Some(lo) = points.iter().map(|p| &p[k]).min() {
                min[k] = lo.clone();
            }
            if let Some(hi) = points.iter().map(|p| &p[k]).max() {
                max[k] = hi.clone();
            }
            let width = &max[k] - &min[k];
            let margin = if width == Rat::from_integer(0.into()) {
                Rat::from_integer(1.into())
            } else {
                width / Rat::from_integer(5.into())
            };
            min[k] = &min[k] - &margin;
            max[k] = &max[k] + &margin;
        }
        Self { min, max }
    }

    fn bounds(&self) -> [(f64, f64); 2] {
        [0, 1].map(|k| (f64_of(&self.min[k]), f64_of(&self.max[k])))
    }
}

fn f64_of(q: &Rat) -> f64 {
    q.to_f64().unwrap_or(0.0)
}

fn require_plane(c: &WeightedPolyhedralComplex) -> Result<()> {
    if c.ambient_dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: c.ambient_dim,
        });
    }
    Ok(())
}

/// Largest `t >= 0` with `p + t d` inside the box.
fn exit_time(p: [f64; 2], d: [f64; 2], b: [(f64, f64); 2]) -> f64 {
    let mut t = f64::INFINITY;
    for k in 0..2 {
        if d[k] > 0.0 {
            t = t.min((b[k].1 - p[k]) / d[k]);
        } else if d[k] < 0.0 {
            t = t.min((b[k].0 - p[k]) / d[k]);
        }
    }
    t.max(0.0)
}

struct Canvas {
    out: String,
    x0: f64,
    bounds: [(f64, f64); 2],
}

impl Canvas {
    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        let [(xl, xh), (yl, yh)] = self.bounds;
        let sx = PANEL / (xh - xl);
        let sy = PANEL / (yh - yl);
        (self.x0 + PAD + (p[0] - xl) * sx, PAD + (yh - p[1]) * sy)
    }

    fn segment(&mut self, a: [f64; 2], b: [f64; 2], color: &str, label: Option<u64>) {
        let (x1, y1) = self.map(a);
        let (x2, y2) = self.map(b);
        let _ = writeln!(
            self.out,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}" stroke-width="2"/>"#
        );
        if let Some(m) = label.filter(|&m| m >= 2) {
            let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
            let _ = writeln!(
                self.out,
                r#"<text x="{:.2}" y="{:.2}" font-size="14" fill="{color}">{m}</text>"#,
                mx + 5.0,
                my - 5.0
            );
        }
    }

    fn dot(&mut self, p: [f64; 2], fill: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(
            self.out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{fill}" stroke="black" stroke-width="1"/>"#
        );
    }

    fn frame(&mut self) {
        let _ = writeln!(
            self.out,
            r##"<rect x="{:.2}" y="{PAD}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#ccc"/>"##,
            self.x0 + PAD
        );
    }

    /// One-dimensional cells, with rays and lineality clipped at the box.
    fn curve(&mut self, c: &WeightedPolyhedralComplex, color: &str) {
        let pt = |i: usize| [f64_of(&c.vertices[i][0]), f64_of(&c.vertices[i][1])];
        let dir = |v: &[tropical_core::rational::Int]| [v[0].to_f64().unwrap_or(0.0), v[1].to_f64().unwrap_or(0.0)];
        for (cell, &m) in c.maximal_cells.iter().zip(&c.multiplicities) {
            let label = Some(m);
            match (cell.vertices.as_slice(), cell.rays.as_slice(), c.lineality.as_slice()) {
                ([a, b], [], []) => self.segment(pt(*a), pt(*b), color, label),
                ([a], [r], []) => {
                    let p = pt(*a);
                    let d = dir(&c.rays[*r]);
                    let t = exit_time(p, d, self.bounds);
                    self.segment(p, [p[0] + t * d[0], p[1] + t * d[1]], color, label);
                }
                ([a], [], [l]) => {
                    let p = pt(*a);
                    let d = dir(l);
                    let back = [-d[0], -d[1]];
                    let t1 = exit_time(p, d, self.bounds);
                    let t0 = exit_time(p, back, self.bounds);
                    self.segment(
                        [p[0] - t0 * d[0], p[1] - t0 * d[1]],
                        [p[0] + t1 * d[0], p[1] + t1 * d[1]],
                        color,
                        label,
                    );
                }
                ([a], [], []) => self.dot(pt(*a), "white"),
                _ => {}
            }
        }
    }
}

fn document(width: f64, body: &str) -> String {
    let height = PANEL + 2.0 * PAD;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn vertex_refs(c: &WeightedPolyhedralComplex) -> Vec<&[Rat]> {
    c.vertices.iter().map(Vec::as_slice).collect()
}

/// Lattice-ordered boundary of a planar point set (monotone chain).
fn polygon(mut pts: Vec<[i64; 2]>) -> Vec<[i64; 2]> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [i64; 2], a: [i64; 2], b: [i64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[i64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[i64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Newton subdivision on the left, the curve on the right.
pub fn render_hypersurface(h: &TropicalHypersurface) -> Result<String> {
    let c = &h.complex;
    require_plane(c)?;
    let cfg = &h.dual.configuration;
    let pts: Vec<Vec<Rat>> = cfg
        .points
        .iter()
        .map(|p| p.iter().map(|&x| Rat::from_integer(x.into())).collect())
        .collect();
    let newton_spec = PlotSpec::around(&pts.iter().map(Vec::as_slice).collect::<Vec<_>>());
    let mut left = Canvas {
        out: String::new(),
        x0: 0.0,
        bounds: newton_spec.bounds(),
    };
    left.frame();
    for cell in &h.dual.cells {
        let poly = polygon(cell.iter().map(|&i| [cfg.points[i][0], cfg.points[i][1]]).collect());
        for k in 0..poly.len() {
            let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
            let f = |p: [i64; 2]| [p[0] as f64, p[1] as f64];
            left.segment(f(a), f(b), "black", None);
        }
    }
    for (p, h) in cfg.points.iter().zip(&cfg.heights) {
        let q = [p[0] as f64, p[1] as f64];
        left.dot(q, "black");
        let (x, y) = left.map(q);
        let _ = writeln!(
            left.out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" fill="gray">{}</text>"#,
            x + 6.0,
            y + 14.0,
            format_rational(h)
        );
    }
    let mut right = Canvas {
        out: String::new(),
        x0: PANEL + 2.0 * PAD,
        bounds: PlotSpec::around(&vertex_refs(c)).bounds(),
    };
    right.frame();
    right.curve(c, "#c0392b");
    for i in 0..c.vertices.len() {
        right.dot([f64_of(&c.vertices[i][0]), f64_of(&c.vertices[i][1])], "#c0392b");
    }
    Ok(document(2.0 * (PANEL + 2.0 * PAD), &(left.out + &right.out)))
}

/// Two curves in red and blue with the intersection points in white.
pub fn render_intersection(
    a: &WeightedPolyhedralComplex,
    b: &WeightedPolyhedralComplex,
    meet: &WeightedPolyhedralComplex,
) -> Result<String> {
    for c in [a, b, meet] {
        require_plane(c)?;
    }
    let mut all = vertex_refs(a);
    all.extend(vertex_refs(b));
    all.extend(vertex_refs(meet));
    let mut canvas = Canvas {
        out: String::new(),
        x0: 0.0,
        bounds: PlotSpec::around(&all).bounds(),
    };
    canvas.frame();
    canvas.curve(a, "#c0392b");
    canvas.curve(b, "#2471a3");
    canvas.curve(meet, "black");
    Ok(document(PANEL + 2.0 * PAD, &canvas.out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_has_margin() {
        let p = [Rat::from_integer((-3).into()), Rat::from_integer((-1).into())];
        let q = [Rat::from_integer(2.into()), Rat::from_integer(4.into())];
        let spec = PlotSpec::around(&[&p, &q]);
        assert_eq!(spec.min[0], Rat::from_integer((-4).into()));
        assert_eq!(spec.max[1], Rat::from_integer(5.into()));
        let single = PlotSpec::around(&[&p]);
        assert!(single.min[0] < single.max[0] && single.min[1] < single.max[1]);
    }

    #[test]
    fn rays_stop_at_the_box() {
        let b = [(-1.0, 1.0), (-1.0, 1.0)];
        assert_eq!(exit_time([0.0, 0.0], [1.0, 1.0], b), 1.0);
        assert_eq!(exit_time([0.0, 0.0], [-2.0, 0.0], b), 0.5);
    }

    #[test]
    fn hull_order() {
        let sq = polygon(vec![[1, 1], [0, 0], [1, 0], [0, 1], [0, 0]]);
        assert_eq!(sq, vec![[0, 0], [1, 0], [1, 1], [0, 1]]);
    }
}
