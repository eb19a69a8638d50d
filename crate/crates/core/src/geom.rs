//! Planar helpers: cross/dot products, distances to segments and rays, and
//! convex polygons with clipping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Complex;

/// Tolerance used for purely planar predicates (shared edges, overlaps).
pub(crate) const GEOM_EPS: f64 = 1e-10;

#[inline]
pub fn cross(a: Complex, b: Complex) -> f64 {
    a.re * b.im - a.im * b.re
}

#[inline]
pub fn dot(a: Complex, b: Complex) -> f64 {
    a.re * b.re + a.im * b.im
}

pub fn point_segment_distance(p: Complex, a: Complex, b: Complex) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (dot(p - a, ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance from `p` to the ray `{origin + t·dir, t ≥ 0}`; `dir` must be a unit vector.
pub fn point_ray_distance(p: Complex, origin: Complex, dir: Complex) -> f64 {
    let v = p - origin;
    let t = dot(v, dir);
    if t <= 0.0 {
        v.norm()
    } else {
        cross(dir, v).abs()
    }
}

/// Whether two rays (unit directions) share a point.
pub fn rays_intersect(o1: Complex, d1: Complex, o2: Complex, d2: Complex, tol: f64) -> bool {
    let denom = cross(d1, d2);
    if denom.abs() < 1e-15 {
        // parallel: they meet only if one origin lies on the other ray
        return point_ray_distance(o2, o1, d1) <= tol || point_ray_distance(o1, o2, d2) <= tol;
    }
    let w = o2 - o1;
    let t1 = cross(w, d2) / denom;
    let t2 = cross(w, d1) / denom;
    t1 >= -tol && t2 >= -tol
}

/// A closed convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex>", into = "Vec<Complex>")]
pub struct ConvexPolygon {
    vertices: Vec<Complex>,
}

impl TryFrom<Vec<Complex>> for ConvexPolygon {
    type Error = Error;
    fn try_from(v: Vec<Complex>) -> Result<Self> {
        ConvexPolygon::new(v)
    }
}

impl From<ConvexPolygon> for Vec<Complex> {
    fn from(p: ConvexPolygon) -> Self {
        p.vertices
    }
}

impl ConvexPolygon {
    /// Builds a polygon, reorienting clockwise input and dropping repeated vertices.
    pub fn new(mut vertices: Vec<Complex>) -> Result<Self> {
        if vertices
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::invalid("polygon vertex is not finite"));
        }
        vertices.dedup_by(|a, b| (*a - *b).norm() <= GEOM_EPS);
        while vertices.len() > 1 && (vertices[0] - vertices[vertices.len() - 1]).norm() <= GEOM_EPS
        {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(Error::invalid("polygon needs at least 3 distinct vertices"));
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        let area = signed_area(&vertices);
        if area <= GEOM_EPS * GEOM_EPS {
            return Err(Error::invalid("polygon has zero area"));
        }
        let n = vertices.len();
        let scale = vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if cross(b - a, c - b) < -GEOM_EPS * scale {
                return Err(Error::invalid("polygon is not convex"));
            }
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Complex] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (Complex, Complex)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> Complex {
        let n = self.vertices.len();
        let a = self.area();
        let mut c = Complex::new(0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            c += (p + q) * cross(p, q);
        }
        c / (6.0 * a)
    }

    pub fn translated(&self, t: Complex) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|v| v + t).collect(),
        }
    }

    pub fn bbox(&self) -> (Complex, Complex) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices[1..] {
            lo.re = lo.re.min(v.re);
            lo.im = lo.im.min(v.im);
            hi.re = hi.re.max(v.re);
            hi.im = hi.im.max(v.im);
        }
        (lo, hi)
    }

    /// Signed distance of `p` to the boundary: positive inside.
    pub fn depth(&self, p: Complex) -> f64 {
        self.edges()
            .map(|(a, b)| cross(b - a, p - a) / (b - a).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Closed containment with slack `margin` (positive margin enlarges).
    pub fn contains(&self, p: Complex, margin: f64) -> bool {
        self.depth(p) >= -margin
    }

    /// Euclidean distance from `p` to the closed polygon.
    pub fn distance_to(&self, p: Complex) -> f64 {
        if self.depth(p) >= 0.0 {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether the ray `{origin + t·dir, t ≥ 0}` meets the interior at points
    /// deeper than `tol` inside the polygon.
    pub fn ray_crosses_interior(&self, origin: Complex, dir: Complex, tol: f64) -> bool {
        let mut lo = 0.0_f64;
        let mut hi = f64::INFINITY;
        for (a, b) in self.edges() {
            let e = b - a;
            let len = e.norm();
            // cross(e, origin + t dir - a) >= tol * len
            let c0 = cross(e, origin - a) - tol * len;
            let c1 = cross(e, dir);
            if c1.abs() < 1e-300 {
                if c0 < 0.0 {
                    return false;
                }
            } else if c1 > 0.0 {
                lo = lo.max(-c0 / c1);
            } else {
                hi = hi.min(-c0 / c1);
            }
        }
        hi - lo > tol
    }

    /// Intersection with another convex polygon (Sutherland–Hodgman).
    pub fn intersection(&self, other: &ConvexPolygon) -> Option<ConvexPolygon> {
        let mut out = self.vertices.clone();
        for (a, b) in other.edges() {
            if out.is_empty() {
                return None;
            }
            let e = b - a;
            let input = std::mem::take(&mut out);
            let n = input.len();
            for i in 0..n {
                let p = input[i];
                let q = input[(i + 1) % n];
                let sp = cross(e, p - a);
                let sq = cross(e, q - a);
                if sp >= 0.0 {
                    out.push(p);
                }
                if (sp >= 0.0) != (sq >= 0.0) {
                    let t = sp / (sp - sq);
                    out.push(p + (q - p) * t);
                }
            }
        }
        ConvexPolygon::new(out).ok()
    }

    /// The longest boundary segment shared with `other` (collinear edge
    /// overlap of positive length), if any.
    pub fn shared_edge(&self, other: &ConvexPolygon) -> Option<(Complex, Complex)> {
        let mut best: Option<(Complex, Complex)> = None;
        for (a, b) in self.edges() {
            let e = b - a;
            let len = e.norm();
            let u = e / len;
            for (c, d) in other.edges() {
                if cross(u, c - a).abs() > GEOM_EPS || cross(u, d - a).abs() > GEOM_EPS {
                    continue;
                }
                let tc = dot(c - a, u);
                let td = dot(d - a, u);
                let lo = tc.min(td).max(0.0);
                let hi = tc.max(td).min(len);
                if hi - lo > GEOM_EPS && best.is_none_or(|(p, q)| (q - p).norm() < hi - lo) {
                    best = Some((a + u * lo, a + u * hi));
                }
            }
        }
        best
    }
}

fn signed_area(v: &[Complex]) -> f64 {
    let n = v.len();
    (0..n).map(|i| cross(v[i], v[(i + 1) % n])).sum::<f64>() / 2.0
}
