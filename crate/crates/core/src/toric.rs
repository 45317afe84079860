//! Junior simplices of Gorenstein cyclic quotient singularities.
//!
//! For `1/d(a,b,c)` with `a+b+c ≡ 0 (mod d)` the lattice points of the
//! triangle `{x_1+x_2+x_3 = 1}` are its three corners and the group elements of
//! age one. Every full lattice triangulation of that triangle is unimodular and
//! describes a crepant resolution: vertices are exceptional divisors, edges
//! their intersection curves, triangles the torus-fixed points.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::singloc::QuotientSingularity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum JuniorLocation {
    Corner(usize),
    /// On the edge where coordinate `i` vanishes.
    Edge(usize),
    Interior,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JuniorPoint {
    /// `d` times the barycentric coordinates; the entries sum to `d`.
    pub scaled: [u64; 3],
    /// Group element `k` with `scaled = (ka, kb, kc) mod d`; `None` for corners.
    pub group_element: Option<u64>,
    pub location: JuniorLocation,
}

impl JuniorPoint {
    fn new(scaled: [u64; 3], group_element: Option<u64>) -> Self {
        let zeros: Vec<usize> = (0..3).filter(|&i| scaled[i] == 0).collect();
        let location = match zeros.as_slice() {
            [] => JuniorLocation::Interior,
            [i] => JuniorLocation::Edge(*i),
            _ => JuniorLocation::Corner((0..3).find(|&i| scaled[i] != 0).expect("nonzero sum")),
        };
        Self {
            scaled,
            group_element,
            location,
        }
    }

    pub fn barycentric(&self) -> [Ratio<u64>; 3] {
        let d: u64 = self.scaled.iter().sum();
        self.scaled.map(|x| Ratio::new(x, d))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaCounts {
    pub v: u64,
    pub e: u64,
    pub s: u64,
}

fn check_three_fold(q: &QuotientSingularity) -> Result<()> {
    if q.weights.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "junior simplex needs three weights, got {q}"
        )));
    }
    if q.weights.contains(&0) {
        return Err(Error::InvalidInput(format!("zero weight in {q}")));
    }
    if q.weights.iter().fold(q.order, |g, w| g.gcd(w)) != 1 {
        return Err(Error::InvalidInput(format!("{q} does not act faithfully")));
    }
    q.require_gorenstein()
}

/// Vertex, edge and triangle counts of any unimodular triangulation of the
/// junior simplex, from the orders `d_i = gcd(weight_i, d)` alone.
pub fn lemma_counts(q: &QuotientSingularity) -> Result<LemmaCounts> {
    check_three_fold(q)?;
    let d = q.order;
    let sum: u64 = q.gcds.iter().sum();
    if !(d + sum).is_multiple_of(2) {
        return Err(Error::ParityViolation {
            order: d,
            weights: q.weights.clone(),
        });
    }
    Ok(LemmaCounts {
        v: (d + 2 + sum) / 2,
        e: (3 * d + sum) / 2,
        s: d,
    })
}

/// Corners first, then age-one group elements in increasing `k`.
pub fn junior_points(q: &QuotientSingularity) -> Result<Vec<JuniorPoint>> {
    let counts = lemma_counts(q)?;
    let d = q.order;
    let mut points: Vec<JuniorPoint> = (0..3)
        .map(|i| {
            let mut scaled = [0; 3];
            scaled[i] = d;
            JuniorPoint::new(scaled, None)
        })
        .collect();
    for k in 1..d {
        let scaled = [0, 1, 2].map(|i| k * q.weights[i] % d);
        if scaled.iter().sum::<u64>() == d {
            points.push(JuniorPoint::new(scaled, Some(k)));
        }
    }
    debug_assert_eq!(points.len() as u64, counts.v);
    Ok(points)
}

/// Basis `(p, q), (0, r)` of the lattice spanned by `(d,0)`, `(0,d)` and
/// `(a,b)`, in Hermite normal form.
fn junior_lattice_basis(d: i64, a: i64, b: i64) -> (i64, i64, i64) {
    let ext = a.extended_gcd(&d);
    let p = ext.gcd;
    let r = d.gcd(&(b * (d / p)));
    let q = (ext.x * b).rem_euclid(r);
    (p, q, r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JuniorTriangulation {
    pub singularity: QuotientSingularity,
    pub points: Vec<JuniorPoint>,
    /// Integer coordinates of each point in a basis of the junior lattice.
    pub lattice: Vec<(i64, i64)>,
    /// Counter-clockwise index triples.
    pub triangles: Vec<[usize; 3]>,
    pub edges: Vec<(usize, usize)>,
}

fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn ccw(lattice: &[(i64, i64)], t: [usize; 3]) -> [usize; 3] {
    if orient(lattice[t[0]], lattice[t[1]], lattice[t[2]]) < 0 {
        [t[0], t[2], t[1]]
    } else {
        t
    }
}

/// Inserts each point into the current triangulation, splitting every
/// triangle that contains it.
fn insert_points(
    lattice: &[(i64, i64)],
    start: Vec<[usize; 3]>,
    order: &[usize],
) -> Vec<[usize; 3]> {
    let mut triangles: Vec<[usize; 3]> = start.into_iter().map(|t| ccw(lattice, t)).collect();
    for &p in order {
        let pt = lattice[p];
        let mut next = Vec::with_capacity(triangles.len() + 2);
        for t in triangles {
            let sides = [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])];
            let signs = sides.map(|(u, v)| orient(lattice[u], lattice[v], pt));
            if signs.iter().all(|&s| s >= 0) {
                for ((u, v), s) in sides.into_iter().zip(signs) {
                    if s > 0 {
                        next.push([u, v, p]);
                    }
                }
            } else {
                next.push(t);
            }
        }
        triangles = next;
    }
    triangles
}

fn edges_of(triangles: &[[usize; 3]]) -> Vec<(usize, usize)> {
    let mut set = BTreeSet::new();
    for t in triangles {
        for (u, v) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            set.insert((u.min(v), u.max(v)));
        }
    }
    set.into_iter().collect()
}

fn build(
    q: &QuotientSingularity,
    order: Option<&[usize]>,
    chord: Option<(usize, usize)>,
) -> Result<JuniorTriangulation> {
    let points = junior_points(q)?;
    let d = q.order as i64;
    let (p, qq, r) = junior_lattice_basis(d, q.weights[0] as i64, q.weights[1] as i64);
    if p * r != d {
        return Err(Error::InvalidInput(format!(
            "{q}: junior lattice has covolume {} ≠ {d}",
            p * r
        )));
    }
    let lattice: Vec<(i64, i64)> = points
        .iter()
        .map(|pt| {
            let (x, y) = (pt.scaled[0] as i64, pt.scaled[1] as i64);
            let c1 = x / p;
            (c1, (y - c1 * qq) / r)
        })
        .collect();
    let default_order: Vec<usize> = (3..points.len()).collect();
    let mut order: Vec<usize> = order.map(<[usize]>::to_vec).unwrap_or(default_order);
    let mut sorted = order.clone();
    sorted.sort_unstable();
    if sorted != (3..points.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidInput(
            "insertion order must list every non-corner point once".into(),
        ));
    }
    let start = match chord {
        None => vec![[0, 1, 2]],
        Some((corner, target)) => {
            if corner > 2
                || points.get(target).map(|pt| pt.location) != Some(JuniorLocation::Edge(corner))
            {
                return Err(Error::InvalidInput(format!(
                    "chord must join corner {corner} to a point on the opposite edge"
                )));
            }
            order.retain(|&i| i != target);
            let others: Vec<usize> = (0..3).filter(|&i| i != corner).collect();
            vec![[corner, others[0], target], [corner, target, others[1]]]
        }
    };
    let triangles = insert_points(&lattice, start, &order);
    let tri = JuniorTriangulation {
        singularity: q.clone(),
        edges: edges_of(&triangles),
        points,
        lattice,
        triangles,
    };
    tri.validate()?;
    Ok(tri)
}

/// Full unimodular triangulation, inserting points in their listed order.
pub fn triangulate(q: &QuotientSingularity) -> Result<JuniorTriangulation> {
    build(q, None, None)
}

/// Same, with an explicit insertion order of the non-corner point indices.
pub fn triangulate_with_order(
    q: &QuotientSingularity,
    order: &[usize],
) -> Result<JuniorTriangulation> {
    build(q, Some(order), None)
}

/// Triangulation containing the segment from `corner` to the point `target`
/// on the opposite edge.
pub fn triangulate_with_chord(
    q: &QuotientSingularity,
    corner: usize,
    target: usize,
) -> Result<JuniorTriangulation> {
    build(q, None, Some((corner, target)))
}

impl JuniorTriangulation {
    pub fn counts(&self) -> LemmaCounts {
        LemmaCounts {
            v: self.points.len() as u64,
            e: self.edges.len() as u64,
            s: self.triangles.len() as u64,
        }
    }

    fn area(&self, t: &[usize; 3]) -> i64 {
        orient(self.lattice[t[0]], self.lattice[t[1]], self.lattice[t[2]])
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidInput(format!("{}: {msg}", self.singularity)));
        let c = self.counts();
        if c.s != self.singularity.order {
            return fail(format!("{} triangles", c.s));
        }
        if let Some(t) = self.triangles.iter().find(|t| self.area(t) != 1) {
            return fail(format!("triangle {t:?} has area {}", self.area(t)));
        }
        let used: BTreeSet<usize> = self.triangles.iter().flatten().copied().collect();
        if used.len() != self.points.len() {
            return fail(format!(
                "{} of {} points used",
                used.len(),
                self.points.len()
            ));
        }
        if c.v + c.s != c.e + 1 {
            return fail(format!("v - e + s = {} - {} + {}", c.v, c.e, c.s));
        }
        Ok(())
    }

    pub fn index_of(&self, scaled: [u64; 3]) -> Option<usize> {
        self.points.iter().position(|p| p.scaled == scaled)
    }

    /// Number of non-corner points on each edge (edge `i` is `x_i = 0`).
    pub fn boundary_split(&self) -> [u64; 3] {
        let mut out = [0; 3];
        for p in &self.points {
            if let JuniorLocation::Edge(i) = p.location {
                out[i] += 1;
            }
        }
        out
    }

    pub fn interior_count(&self) -> u64 {
        self.points
            .iter()
            .filter(|p| p.location == JuniorLocation::Interior)
            .count() as u64
    }

    pub fn triangles_at(&self, vertex: usize) -> usize {
        self.triangles
            .iter()
            .filter(|t| t.contains(&vertex))
            .count()
    }

    /// Lattice points on the segment from `a` to `b`, in order, if every
    /// consecutive pair is an edge of the triangulation.
    pub fn edge_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let (pa, pb) = (self.lattice[a], self.lattice[b]);
        let len = (pb.0 - pa.0).abs() + (pb.1 - pa.1).abs();
        let mut on: Vec<(i64, usize)> = (0..self.points.len())
            .filter(|&i| {
                let pi = self.lattice[i];
                orient(pa, pb, pi) == 0
                    && (pi.0 - pa.0) * (pb.0 - pa.0) + (pi.1 - pa.1) * (pb.1 - pa.1) >= 0
                    && (pi.0 - pb.0) * (pa.0 - pb.0) + (pi.1 - pb.1) * (pa.1 - pb.1) >= 0
            })
            .map(|i| {
                let pi = self.lattice[i];
                ((pi.0 - pa.0).abs() + (pi.1 - pa.1).abs(), i)
            })
            .collect();
        debug_assert!(on.iter().all(|&(t, _)| t <= len));
        on.sort_unstable();
        let path: Vec<usize> = on.into_iter().map(|(_, i)| i).collect();
        path.windows(2)
            .all(|w| self.edges.contains(&(w[0].min(w[1]), w[0].max(w[1]))))
            .then_some(path)
    }

    pub fn neighbours(&self, vertex: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(u, v)| {
                if u == vertex {
                    Some(v)
                } else if v == vertex {
                    Some(u)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Schematic picture: equilateral triangle, lattice-true positions, the
    /// `marked` vertices circled.
    pub fn to_svg(&self, marked: &[usize]) -> String {
        let size = 400.0_f64;
        let margin = 40.0;
        let corners = [
            (margin, margin + size * 0.866),
            (margin + size, margin + size * 0.866),
            (margin + size / 2.0, margin),
        ];
        let d = self.singularity.order as f64;
        let pos = |i: usize| {
            let s = self.points[i].scaled;
            let (mut x, mut y) = (0.0, 0.0);
            for k in 0..3 {
                x += corners[k].0 * s[k] as f64 / d;
                y += corners[k].1 * s[k] as f64 / d;
            }
            (x, y)
        };
        let mut svg = String::new();
        let w = size + 2.0 * margin;
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{:.0}" viewBox="0 0 {w:.0} {:.0}">"#,
            size * 0.866 + 2.0 * margin,
            size * 0.866 + 2.0 * margin
        );
        let _ = writeln!(svg, "<title>{}</title>", self.singularity);
        for &(u, v) in &self.edges {
            let (a, b) = (pos(u), pos(v));
            let _ = writeln!(
                svg,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
                a.0, a.1, b.0, b.1
            );
        }
        for i in 0..self.points.len() {
            let (x, y) = pos(i);
            let _ = writeln!(
                svg,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#
            );
            if marked.contains(&i) {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="8" fill="none" stroke="black"/>"#
                );
            }
        }
        for (k, (x, y)) in corners.iter().enumerate() {
            let dy = if k == 2 { -12.0 } else { 22.0 };
            let _ = writeln!(
                svg,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="14">κ{}</text>"#,
                y + dy,
                k + 1
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// Interior lattice points of the junior segment of a Gorenstein surface
/// quotient `1/m(a,b)`, scaled by `m` and ordered by the first coordinate.
pub fn junior_segment(q: &QuotientSingularity) -> Result<Vec<[u64; 2]>> {
    if q.weights.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "junior segment needs two weights, got {q}"
        )));
    }
    q.require_gorenstein()?;
    let m = q.order;
    let mut out: Vec<[u64; 2]> = (1..m)
        .map(|k| [k * q.weights[0] % m, k * q.weights[1] % m])
        .filter(|p| p[0] + p[1] == m)
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Length of the exceptional chain resolving a Gorenstein surface quotient
/// `1/m(a,b)`, which is of type `A_{m-1}`.
pub fn hj_chain(m: u64, (a, b): (u64, u64)) -> Result<u64> {
    if m < 2 || (a + b) % m != 0 {
        return Err(Error::NotGorenstein {
            order: m,
            weights: vec![a % m.max(1), b % m.max(1)],
        });
    }
    Ok(m - 1)
}

/// Hirzebruch–Jung continued fraction `n/q = b1 - 1/(b2 - ...)`.
pub fn hirzebruch_jung(n: u64, q: u64) -> Vec<u64> {
    let (mut n, mut q) = (n, q);
    let mut out = Vec::new();
    while q != 0 {
        let b = n.div_ceil(q);
        out.push(b);
        (n, q) = (q, b * q - n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: u64, w: &[u64]) -> QuotientSingularity {
        QuotientSingularity::new(d, w).unwrap()
    }

    #[test]
    fn lemma_examples() {
        assert_eq!(
            lemma_counts(&q(9, &[1, 3, 5])).unwrap(),
            LemmaCounts { v: 8, e: 16, s: 9 }
        );
        assert_eq!(lemma_counts(&q(28, &[1, 3, 24])).unwrap().v, 18);
        assert_eq!(lemma_counts(&q(49, &[1, 6, 42])).unwrap().v, 30);
        assert_eq!(
            lemma_counts(&q(6, &[1, 2, 3])).unwrap(),
            LemmaCounts { v: 7, e: 12, s: 6 }
        );
        assert_eq!(lemma_counts(&q(21, &[1, 2, 18])).unwrap().v, 14);
    }

    #[test]
    fn rejects_bad_types() {
        assert!(matches!(
            lemma_counts(&q(6, &[1, 2, 4])),
            Err(Error::NotGorenstein { .. })
        ));
        assert!(lemma_counts(&q(2, &[1, 1, 0])).is_err());
        assert!(lemma_counts(&q(4, &[2, 2, 4])).is_err());
    }

    #[test]
    fn boundary_splits() {
        let t = triangulate(&q(28, &[1, 3, 24])).unwrap();
        assert_eq!(t.boundary_split().iter().sum::<u64>() + 3, 6);
        let t = triangulate(&q(49, &[1, 6, 42])).unwrap();
        assert_eq!(t.boundary_split().iter().sum::<u64>() + 3, 9);
        assert_eq!(t.interior_count(), 21);
        let t = triangulate(&q(21, &[1, 2, 18])).unwrap();
        assert_eq!(t.points.len(), 14);
        assert_eq!(t.boundary_split().iter().sum::<u64>() + 3, 5);
    }

    #[test]
    fn small_triangulations() {
        let t = triangulate(&q(6, &[1, 2, 3])).unwrap();
        assert_eq!(t.counts(), LemmaCounts { v: 7, e: 12, s: 6 });
        assert_eq!(t.boundary_split(), [0, 1, 2]);
        let t = triangulate(&q(9, &[1, 3, 5])).unwrap();
        assert_eq!(t.counts(), LemmaCounts { v: 8, e: 16, s: 9 });
        let t = triangulate(&q(15, &[1, 4, 10])).unwrap();
        assert_eq!((t.counts().v, t.counts().s), (12, 15));
    }

    #[test]
    fn chord_is_an_edge() {
        let sing = q(9, &[1, 2, 6]);
        let pts = junior_points(&sing).unwrap();
        let target = pts
            .iter()
            .position(|p| p.location == JuniorLocation::Edge(2))
            .unwrap();
        let t = triangulate_with_chord(&sing, 2, target).unwrap();
        let path = t.edge_path(2, target).unwrap();
        assert_eq!(path.len(), 4);
        assert_eq!(t.counts(), lemma_counts(&sing).unwrap());
        assert!(triangulate_with_chord(&sing, 0, target).is_err());
    }

    #[test]
    fn svg_is_deterministic() {
        let t = triangulate(&q(6, &[1, 2, 3])).unwrap();
        let a = t.to_svg(&[3]);
        assert_eq!(a, t.to_svg(&[3]));
        assert!(a.starts_with("<svg"));
        assert_eq!(a.matches("<line").count(), 12);
        assert_eq!(a.matches(r#"r="8""#).count(), 1);
    }

    #[test]
    fn segments() {
        assert_eq!(
            junior_segment(&q(3, &[1, 2])).unwrap(),
            vec![[1, 2], [2, 1]]
        );
        assert_eq!(junior_segment(&q(5, &[1, 4])).unwrap().len(), 4);
        assert!(junior_segment(&q(5, &[1, 2])).is_err());
    }

    #[test]
    fn hj_chains() {
        assert_eq!(hj_chain(5, (1, 4)).unwrap(), 4);
        assert_eq!(hj_chain(2, (1, 1)).unwrap(), 1);
        assert_eq!(hj_chain(3, (1, 2)).unwrap(), 2);
        assert!(hj_chain(5, (1, 2)).is_err());
        assert_eq!(hirzebruch_jung(3, 2), vec![2, 2]);
        assert_eq!(hirzebruch_jung(5, 4), vec![2, 2, 2, 2]);
        assert_eq!(hirzebruch_jung(7, 3), vec![3, 2, 2]);
    }
}
