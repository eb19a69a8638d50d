use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::TAU;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::continuation::{lift_segment, LiftState};
use crate::error::{Error, Result};
use crate::geom::{cross, dot, ConvexPolygon, GEOM_EPS};
use crate::surface::{SheetComplex, SheetDomain, SurfacePoint};
use crate::{Complex, Sheet};

/// The part of a compact region lying on one sheet, as a union of convex cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionPiece {
    pub sheet: Sheet,
    pub cells: Vec<ConvexPolygon>,
}

/// Two pieces glued across the slit of `branch` along `edge`.
///
/// `from` lies on the clockwise side of the slit and `to` on the
/// counterclockwise side, so `to.sheet = σ(from.sheet)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gluing {
    pub from: usize,
    pub to: usize,
    pub branch: usize,
    pub edge: (Complex, Complex),
}

/// A connected compact set of a sheet complex made of finitely many convex
/// cells, each lying on one sheet, with a basepoint.
#[derive(Debug, Clone)]
pub struct CompactRegion {
    surface: SheetComplex,
    basepoint: SurfacePoint,
    pieces: Vec<RegionPiece>,
    gluings: Vec<Gluing>,
    cells: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, Complex)>>,
    base_cell: usize,
}

impl Serialize for CompactRegion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CompactRegion", 3)?;
        st.serialize_field("basepoint", &self.basepoint)?;
        st.serialize_field("pieces", &self.pieces)?;
        st.serialize_field("declared_gluings", &self.gluings)?;
        st.end()
    }
}

/// Portion of `[a, b]` shared with some edge of `cell`.
fn edge_overlap(cell: &ConvexPolygon, a: Complex, b: Complex) -> Option<(Complex, Complex)> {
    let len = (b - a).norm();
    if len == 0.0 {
        return None;
    }
    let u = (b - a) / len;
    let tol = GEOM_EPS * (1.0 + a.norm().max(b.norm()));
    for (p, q) in cell.edges() {
        if cross(u, p - a).abs() > tol || cross(u, q - a).abs() > tol {
            continue;
        }
        let (tp, tq) = (dot(p - a, u), dot(q - a, u));
        let lo = tp.min(tq).max(0.0);
        let hi = tp.max(tq).min(len);
        if hi - lo > tol {
            return Some((a + u * lo, a + u * hi));
        }
    }
    None
}

fn boxes_touch(a: &ConvexPolygon, b: &ConvexPolygon, slack: f64) -> bool {
    let (alo, ahi) = a.bbox();
    let (blo, bhi) = b.bbox();
    alo.re <= bhi.re + slack
        && blo.re <= ahi.re + slack
        && alo.im <= bhi.im + slack
        && blo.im <= ahi.im + slack
}

impl CompactRegion {
    /// Validates the pieces and gluings and builds the cell adjacency graph.
    pub fn new(
        surface: &SheetComplex,
        basepoint: SurfacePoint,
        pieces: Vec<RegionPiece>,
        gluings: Vec<Gluing>,
    ) -> Result<CompactRegion> {
        surface.validate_point(&basepoint)?;
        if pieces.is_empty() {
            return Err(Error::invalid("a region needs at least one piece"));
        }
        let tol = *surface.tolerances();
        let mut cells = Vec::new();
        for (i, piece) in pieces.iter().enumerate() {
            if !surface.sheet_domain().contains(piece.sheet) {
                return Err(Error::invalid(format!(
                    "piece {i} lies on sheet {} outside the domain",
                    piece.sheet
                )));
            }
            if piece.cells.is_empty() {
                return Err(Error::invalid(format!("piece {i} has no cells")));
            }
            for (k, cell) in piece.cells.iter().enumerate() {
                for (j, b) in surface.branches().iter().enumerate() {
                    if cell.contains(b.position, tol.branch) {
                        return Err(Error::invalid(format!(
                            "cell {k} of piece {i} contains branch {j}"
                        )));
                    }
                    if cell.ray_crosses_interior(b.position, b.direction(), tol.slit) {
                        return Err(Error::invalid(format!(
                            "cell {k} of piece {i} crosses the slit of branch {j}"
                        )));
                    }
                }
                cells.push((i, k));
            }
        }
        let cell = |c: usize| &pieces[cells[c].0].cells[cells[c].1];
        let sheet = |c: usize| pieces[cells[c].0].sheet;
        let mut adjacency: Vec<Vec<(usize, Complex)>> = vec![Vec::new(); cells.len()];
        let link = |x: usize, y: usize, m: Complex, adjacency: &mut Vec<Vec<(usize, Complex)>>| {
            if !adjacency[x].iter().any(|&(z, _)| z == y) {
                adjacency[x].push((y, m));
                adjacency[y].push((x, m));
            }
        };

        for x in 0..cells.len() {
            for y in x + 1..cells.len() {
                if sheet(x) != sheet(y) || !boxes_touch(cell(x), cell(y), GEOM_EPS) {
                    continue;
                }
                if let Some(i) = cell(x).intersection(cell(y)) {
                    if i.area() > GEOM_EPS * GEOM_EPS {
                        link(x, y, i.centroid(), &mut adjacency);
                        continue;
                    }
                }
                if let Some((a, b)) = cell(x).shared_edge(cell(y)) {
                    let m = (a + b) * 0.5;
                    if surface.slit_at(m).is_none() {
                        link(x, y, m, &mut adjacency);
                    }
                }
            }
        }

        for (g_index, g) in gluings.iter().enumerate() {
            let bad = |msg: &str| Err(Error::invalid(format!("gluing {g_index}: {msg}")));
            if g.from >= pieces.len() || g.to >= pieces.len() {
                return bad("piece index out of range");
            }
            let Some(branch) = surface.branches().get(g.branch) else {
                return bad("branch index out of range");
            };
            let (a, b) = g.edge;
            for e in [a, b] {
                if (e - branch.position).norm() > tol.branch && !branch.on_ray(e, tol.slit) {
                    return bad("edge does not lie on the slit");
                }
            }
            if branch.monodromy.apply(pieces[g.from].sheet) != pieces[g.to].sheet {
                return bad("sheets are not related by the branch monodromy");
            }
            let mut realized = false;
            for x in (0..cells.len()).filter(|&x| cells[x].0 == g.from) {
                let Some((p, q)) = edge_overlap(cell(x), a, b) else {
                    continue;
                };
                if branch.side_value(cell(x).centroid()) >= 0.0 {
                    continue;
                }
                for y in (0..cells.len()).filter(|&y| cells[y].0 == g.to) {
                    if branch.side_value(cell(y).centroid()) <= 0.0 {
                        continue;
                    }
                    if let Some((r, s)) = edge_overlap(cell(y), p, q) {
                        link(x, y, (r + s) * 0.5, &mut adjacency);
                        realized = true;
                    }
                }
            }
            if !realized {
                return bad("no pair of cells meets along the edge");
            }
        }

        let base_cell = (0..cells.len())
            .filter(|&c| sheet(c) == basepoint.sheet || basepoint.slit_side.is_some())
            .find(|&c| {
                let centroid = cell(c).centroid();
                cell(c).contains(basepoint.w, tol.dist)
                    && surface
                        .point(sheet(c), centroid)
                        .ok()
                        .and_then(|from| {
                            lift_segment(
                                surface,
                                LiftState::at(surface, &from),
                                centroid,
                                basepoint.w,
                                &[],
                                None,
                            )
                            .ok()
                        })
                        .is_some_and(|st| surface.same_point(&st.point(basepoint.w), &basepoint))
            })
            .ok_or_else(|| Error::invalid("basepoint does not lie in the region"))?;

        let mut seen = vec![false; cells.len()];
        let mut queue = VecDeque::from([base_cell]);
        seen[base_cell] = true;
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("region is not connected"));
        }
        Ok(CompactRegion {
            surface: surface.clone(),
            basepoint,
            pieces,
            gluings,
            cells,
            adjacency,
            base_cell,
        })
    }

    /// Sectors of `{ε ≤ |w − c| ≤ r}` on each sheet of `sheets` (inclusive)
    /// around the single branch `c` of `surface`. Consecutive sheets are glued
    /// along the slit; a slit side without a listed partner sheet is cut back
    /// by a thin collar so the region stays away from it.
    pub fn truncated_annulus(
        surface: &SheetComplex,
        sheets: (Sheet, Sheet),
        eps: f64,
        r: f64,
        basepoint: SurfacePoint,
    ) -> Result<CompactRegion> {
        let [branch] = surface.branches() else {
            return Err(Error::unsupported(
                "annulus regions need a surface with exactly one branch",
            ));
        };
        if !(eps > 0.0 && eps < r && r.is_finite()) {
            return Err(Error::invalid("annulus needs 0 < eps < r"));
        }
        if sheets.0 > sheets.1 {
            return Err(Error::invalid("empty sheet interval"));
        }
        if sheets.1 - sheets.0 > 10_000 {
            return Err(Error::invalid("too many sheets for an annulus region"));
        }
        let listed: Vec<Sheet> = (sheets.0..=sheets.1).collect();
        let index = |s: Sheet| listed.iter().position(|&x| x == s);
        let c = branch.position;
        let theta = branch.slit_angle;
        let collar = 2.0 * surface.tolerances().slit / eps;
        let sectors = 64;
        let mut pieces = Vec::new();
        let mut gluings = Vec::new();
        for (i, &s) in listed.iter().enumerate() {
            if !surface.sheet_domain().contains(s) {
                return Err(Error::invalid(format!(
                    "sheet {s} outside the sheet domain"
                )));
            }
            let up = branch.monodromy.apply(s);
            let down = branch.monodromy.apply_inverse(s);
            let start = theta - TAU + if index(down).is_some() { 0.0 } else { collar };
            let end = theta - if index(up).is_some() { 0.0 } else { collar };
            let cells = (0..sectors)
                .map(|k| {
                    let a0 = start + (end - start) * k as f64 / sectors as f64;
                    let a1 = if k + 1 == sectors {
                        end
                    } else {
                        start + (end - start) * (k + 1) as f64 / sectors as f64
                    };
                    let (e0, e1) = (Complex::from_polar(1.0, a0), Complex::from_polar(1.0, a1));
                    ConvexPolygon::new(vec![c + e0 * eps, c + e0 * r, c + e1 * r, c + e1 * eps])
                })
                .collect::<Result<Vec<_>>>()?;
            pieces.push(RegionPiece { sheet: s, cells });
            if let Some(j) = index(up) {
                let d = branch.direction();
                gluings.push(Gluing {
                    from: i,
                    to: j,
                    branch: 0,
                    edge: (c + d * eps, c + d * r),
                });
            }
        }
        CompactRegion::new(surface, basepoint, pieces, gluings)
    }

    /// Square of half-width `half` centred at the basepoint on every sheet of
    /// a finitely sheeted surface whose slits are all parallel, cut into
    /// rectangles along the slits and with the cells touching a branch
    /// position removed.
    pub fn sheet_grid(
        surface: &SheetComplex,
        basepoint: SurfacePoint,
        half: f64,
    ) -> Result<CompactRegion> {
        let SheetDomain::Finite(count) = surface.sheet_domain() else {
            return Err(Error::unsupported("grid regions need finitely many sheets"));
        };
        if !(half > 0.0 && half.is_finite()) {
            return Err(Error::invalid("grid half-width must be positive"));
        }
        let theta = surface.branches().first().map_or(0.0, |b| b.slit_angle);
        if surface
            .branches()
            .iter()
            .any(|b| (b.slit_angle - theta).abs() > 1e-12)
        {
            return Err(Error::unsupported("grid regions need parallel slits"));
        }
        let rot = Complex::from_polar(1.0, theta);
        let center = basepoint.w;
        let to_frame = |w: Complex| (w - center) / rot;
        let from_frame = |z: Complex| center + z * rot;

        let mut xs: Vec<f64> = (0..=8).map(|k| -half + half * k as f64 / 4.0).collect();
        let mut ys = xs.clone();
        for b in surface.branches() {
            let z = to_frame(b.position);
            if z.re.abs() < half {
                xs.push(z.re);
            }
            if z.im.abs() < half {
                ys.push(z.im);
            }
        }
        for v in [&mut xs, &mut ys] {
            v.sort_by(f64::total_cmp);
            v.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * half);
        }
        let near_branch = surface.tolerances().branch.max(1e-9 * half);
        let mut rects = Vec::new();
        for i in 0..xs.len() - 1 {
            for j in 0..ys.len() - 1 {
                let corners = [
                    Complex::new(xs[i], ys[j]),
                    Complex::new(xs[i + 1], ys[j]),
                    Complex::new(xs[i + 1], ys[j + 1]),
                    Complex::new(xs[i], ys[j + 1]),
                ];
                let poly = ConvexPolygon::new(corners.iter().map(|&z| from_frame(z)).collect())?;
                if surface
                    .branches()
                    .iter()
                    .all(|b| poly.distance_to(b.position) > near_branch)
                {
                    rects.push(((i, j), poly));
                }
            }
        }
        let pieces: Vec<RegionPiece> = (0..count as Sheet)
            .map(|s| RegionPiece {
                sheet: s,
                cells: rects.iter().map(|(_, p)| p.clone()).collect(),
            })
            .collect();
        let mut gluings = Vec::new();
        let present: BTreeSet<(usize, usize)> = rects.iter().map(|(k, _)| *k).collect();
        for (bi, b) in surface.branches().iter().enumerate() {
            let z = to_frame(b.position);
            let Some(j) = ys.iter().position(|&y| y == z.im) else {
                continue;
            };
            if j == 0 || j + 1 == ys.len() {
                continue;
            }
            for i in 0..xs.len() - 1 {
                if xs[i] < z.re || !present.contains(&(i, j - 1)) || !present.contains(&(i, j)) {
                    continue;
                }
                let edge = (
                    from_frame(Complex::new(xs[i], z.im)),
                    from_frame(Complex::new(xs[i + 1], z.im)),
                );
                for s in 0..count as Sheet {
                    let t = b.monodromy.apply(s);
                    gluings.push(Gluing {
                        from: s as usize,
                        to: t as usize,
                        branch: bi,
                        edge,
                    });
                }
            }
        }
        CompactRegion::new(surface, basepoint, pieces, gluings)
    }

    pub fn surface(&self) -> &SheetComplex {
        &self.surface
    }

    pub fn basepoint(&self) -> &SurfacePoint {
        &self.basepoint
    }

    pub fn pieces(&self) -> &[RegionPiece] {
        &self.pieces
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    /// Sheets met by the region.
    pub fn sheets(&self) -> BTreeSet<Sheet> {
        self.pieces.iter().map(|p| p.sheet).collect()
    }

    pub(crate) fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Piece index, sheet and polygon of a cell.
    pub(crate) fn cell(&self, c: usize) -> (usize, Sheet, &ConvexPolygon) {
        let (p, k) = self.cells[c];
        (p, self.pieces[p].sheet, &self.pieces[p].cells[k])
    }

    /// Neighbouring cells with a connector point on their common part.
    pub(crate) fn neighbors(&self, c: usize) -> &[(usize, Complex)] {
        &self.adjacency[c]
    }

    pub(crate) fn base_cell(&self) -> usize {
        self.base_cell
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{make_logarithm, make_nth_root, make_plane};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn logarithm_annulus_has_one_piece_per_sheet() {
        let s = make_logarithm();
        let k =
            CompactRegion::truncated_annulus(&s, (-1, 1), 0.1, 2.0, s.point(0, c(1., 0.)).unwrap())
                .unwrap();
        assert_eq!(k.pieces().len(), 3);
        assert_eq!(k.gluings().len(), 2);
        assert_eq!(k.sheets().len(), 3);
    }

    #[test]
    fn cyclic_annulus_on_the_cube_root() {
        let s = make_nth_root(3).unwrap();
        let k =
            CompactRegion::truncated_annulus(&s, (0, 2), 0.1, 2.0, s.point(0, c(1., 0.)).unwrap())
                .unwrap();
        assert_eq!(k.gluings().len(), 3);
    }

    #[test]
    fn basepoint_outside_is_rejected() {
        let s = make_logarithm();
        let r =
            CompactRegion::truncated_annulus(&s, (-1, 1), 0.1, 2.0, s.point(4, c(1., 0.)).unwrap());
        assert!(r.is_err());
    }

    #[test]
    fn disconnected_pieces_are_rejected() {
        let s = make_plane();
        let sq = |x: f64| {
            ConvexPolygon::new(vec![c(x, 0.), c(x + 1., 0.), c(x + 1., 1.), c(x, 1.)]).unwrap()
        };
        let pieces = vec![RegionPiece {
            sheet: 0,
            cells: vec![sq(0.), sq(3.)],
        }];
        let r = CompactRegion::new(&s, s.point(0, c(0.5, 0.5)).unwrap(), pieces, vec![]);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn cells_crossing_a_slit_are_rejected() {
        let s = make_nth_root(2).unwrap();
        let sq =
            ConvexPolygon::new(vec![c(-2., -1.), c(-1., -1.), c(-1., 1.), c(-2., 1.)]).unwrap();
        let r = CompactRegion::new(
            &s,
            s.point(0, c(-1.5, 0.5)).unwrap(),
            vec![RegionPiece {
                sheet: 0,
                cells: vec![sq],
            }],
            vec![],
        );
        assert!(r.is_err());
    }

    #[test]
    fn grid_on_a_two_branch_surface() {
        let p = crate::poly::PolynomialSpec::from_real(&[0., -3., 0., 1.]).unwrap();
        let s = crate::surface::make_polynomial(&p).unwrap();
        let z0 = s.point(0, c(0.3, 0.7)).unwrap();
        let k = CompactRegion::sheet_grid(&s, z0, 3.0).unwrap();
        assert_eq!(k.pieces().len(), 3);
        assert!(!k.gluings().is_empty());
    }
}
