//! Lifting planar polylines through `π`.
//!
//! A lift follows the polyline on the current sheet and changes sheet at
//! every transverse crossing of a slit ray: `σ` for a counterclockwise
//! crossing, `σ⁻¹` for a clockwise one. A vertex lying on a slit keeps the
//! side it was reached from (or the start point's `slit_side`), so crossings
//! at vertices are counted exactly once.

pub(crate) mod inverse;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{cross, dot, point_segment_distance};
use crate::surface::{RamificationPoint, SheetComplex, SlitSide, SurfacePoint};
use crate::{Complex, Sheet};

pub use inverse::{continue_inverse, continue_inverse_with};

/// A planar polyline with at least two vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex>", into = "Vec<Complex>")]
pub struct Polyline {
    vertices: Vec<Complex>,
}

impl TryFrom<Vec<Complex>> for Polyline {
    type Error = Error;
    fn try_from(v: Vec<Complex>) -> Result<Self> {
        Polyline::new(v)
    }
}

impl From<Polyline> for Vec<Complex> {
    fn from(p: Polyline) -> Self {
        p.vertices
    }
}

impl Polyline {
    pub fn new(vertices: Vec<Complex>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::invalid("polyline needs at least two vertices"));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("polyline vertex is not finite"));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("consecutive polyline vertices coincide"));
        }
        Ok(Polyline { vertices })
    }

    pub fn vertices(&self) -> &[Complex] {
        &self.vertices
    }

    pub fn reversed(&self) -> Polyline {
        let mut v = self.vertices.clone();
        v.reverse();
        Polyline { vertices: v }
    }

    /// Regular polygon around `center`, starting at angle `start`, traversed
    /// `laps` times counterclockwise (clockwise for negative `laps`).
    pub fn circle(
        center: Complex,
        radius: f64,
        start: f64,
        vertices_per_lap: usize,
        laps: i32,
    ) -> Result<Polyline> {
        if laps == 0 || vertices_per_lap < 3 || radius.is_nan() || radius <= 0.0 {
            return Err(Error::invalid(
                "circle needs nonzero laps, >= 3 vertices and a positive radius",
            ));
        }
        let sign = laps.signum() as f64;
        let total = vertices_per_lap * laps.unsigned_abs() as usize;
        let first = center + Complex::from_polar(radius, start);
        let v = (0..=total)
            .map(|k| {
                if k % vertices_per_lap == 0 {
                    first
                } else {
                    center
                        + Complex::from_polar(
                            radius,
                            start + sign * TAU * k as f64 / vertices_per_lap as f64,
                        )
                }
            })
            .collect();
        Polyline::new(v)
    }
}

/// A slit crossing applied at the start of a lift step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlitCrossing {
    pub branch: usize,
    pub counterclockwise: bool,
}

/// A straight piece of a lift lying on a single sheet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftStep {
    pub segment: (Complex, Complex),
    pub sheet: Sheet,
    /// The crossing that moved the lift onto `sheet` at `segment.0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossing: Option<SlitCrossing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedPath {
    pub start: SurfacePoint,
    pub steps: Vec<LiftStep>,
    pub end: SurfacePoint,
}

/// Lift state at a vertex: current sheet and, when the vertex lies on a
/// slit, the branch and the side it is taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct LiftState {
    pub sheet: Sheet,
    pub on_slit: Option<(usize, SlitSide)>,
}

impl LiftState {
    pub(crate) fn at(s: &SheetComplex, p: &SurfacePoint) -> LiftState {
        LiftState {
            sheet: p.sheet,
            on_slit: s.slit_at(p.w).zip(p.slit_side),
        }
    }

    pub(crate) fn point(&self, w: Complex) -> SurfacePoint {
        SurfacePoint {
            sheet: self.sheet,
            w,
            slit_side: self.on_slit.map(|(_, side)| side),
        }
    }
}

fn side_of(value: f64) -> SlitSide {
    if value > 0.0 {
        SlitSide::Below
    } else {
        SlitSide::Above
    }
}

/// Lifts the straight segment `a → b`. Branches listed in `exempt` are
/// endpoints of the segment (apex departures or arrivals) and are neither
/// proximity-checked nor crossed.
pub(crate) fn lift_segment(
    s: &SheetComplex,
    state: LiftState,
    a: Complex,
    b: Complex,
    exempt: &[usize],
    mut steps: Option<&mut Vec<LiftStep>>,
) -> Result<LiftState> {
    let tol = s.tolerances();
    let branches = s.branches();
    for (j, br) in branches.iter().enumerate() {
        if !exempt.contains(&j) && point_segment_distance(br.position, a, b) <= tol.branch {
            return Err(Error::HitsRamification {
                branch: j,
                at: br.position,
            });
        }
    }
    let len = (b - a).norm();
    let mut events: Vec<(f64, usize, bool)> = Vec::new();
    let mut carried: Option<(usize, SlitSide)> = None;

    if let Some((j, side)) = state.on_slit {
        let br = &branches[j];
        let along = br.on_ray(b, tol.slit) || cross(br.direction(), b - a).abs() <= tol.slit;
        if along {
            carried = Some((j, side));
        } else {
            let going = cross(br.direction(), b - a);
            match side {
                SlitSide::Above if going > 0.0 => events.push((0.0, j, true)),
                SlitSide::Below if going < 0.0 => events.push((0.0, j, false)),
                _ => {}
            }
        }
    }

    for (j, br) in branches.iter().enumerate() {
        if exempt.contains(&j) || state.on_slit.is_some_and(|(k, _)| k == j) {
            continue;
        }
        if br.on_ray(a, tol.slit) {
            return Err(Error::invalid("path vertex lies on two slits"));
        }
        if br.on_ray(b, tol.slit) {
            continue;
        }
        let sa = br.side_value(a);
        let sb = br.side_value(b);
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let u = sa / (sa - sb);
            let x = a + (b - a) * u;
            if dot(x - br.position, br.direction()) > 0.0 {
                events.push((u, j, sa < 0.0));
            }
        }
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    for w in events.windows(2) {
        if w[0].1 != w[1].1 && (w[1].0 - w[0].0) * len <= tol.slit {
            return Err(Error::invalid(
                "simultaneous crossings of two slits; perturb the path",
            ));
        }
    }

    let mut sheet = state.sheet;
    let mut from = a;
    let mut pending: Option<SlitCrossing> = None;
    for &(u, j, ccw) in &events {
        let x = if u == 0.0 { a } else { a + (b - a) * u };
        if (x - from).norm() > 0.0 {
            if let Some(out) = steps.as_deref_mut() {
                out.push(LiftStep {
                    segment: (from, x),
                    sheet,
                    crossing: pending.take(),
                });
            }
            from = x;
        }
        let m = &branches[j].monodromy;
        sheet = if ccw {
            m.apply(sheet)
        } else {
            m.apply_inverse(sheet)
        };
        pending = Some(SlitCrossing {
            branch: j,
            counterclockwise: ccw,
        });
    }
    if let Some(out) = steps {
        out.push(LiftStep {
            segment: (from, b),
            sheet,
            crossing: pending.take(),
        });
    }

    let mut on_slit = None;
    for (j, br) in branches.iter().enumerate() {
        if exempt.contains(&j) || !br.on_ray(b, tol.slit) {
            continue;
        }
        if on_slit.is_some() {
            return Err(Error::invalid("path vertex lies on two slits"));
        }
        let arriving = cross(br.direction(), a - b);
        on_slit = Some(match carried {
            Some((k, side)) if k == j => (j, side),
            _ if arriving.abs() > 0.0 => (j, side_of(arriving)),
            _ => return Err(Error::invalid("path runs onto a slit without a side")),
        });
    }
    Ok(LiftState { sheet, on_slit })
}

pub(crate) fn lift_vertices(
    s: &SheetComplex,
    start: LiftState,
    vertices: &[Complex],
    mut steps: Option<&mut Vec<LiftStep>>,
) -> Result<LiftState> {
    let mut state = start;
    for w in vertices.windows(2) {
        state = lift_segment(s, state, w[0], w[1], &[], steps.as_deref_mut())?;
    }
    Ok(state)
}

/// Leaves the apex of `branch` on `sheet` along the segment to `target`.
pub(crate) fn lift_from_apex(
    s: &SheetComplex,
    branch: usize,
    sheet: Sheet,
    target: Complex,
) -> Result<LiftState> {
    let c = s.branches()[branch].position;
    let on_own = s.branches()[branch].on_ray(target, s.tolerances().slit);
    let start = LiftState {
        sheet,
        on_slit: on_own.then_some((branch, SlitSide::Above)),
    };
    lift_segment(s, start, c, target, &[branch], None)
}

/// Lifts `path` from `start`. Sheet changes happen exactly at transverse
/// slit crossings. A path ending on a slit ends on the side it arrived from.
pub fn lift_path(s: &SheetComplex, start: &SurfacePoint, path: &Polyline) -> Result<LiftedPath> {
    s.validate_point(start)?;
    let v = path.vertices();
    if (v[0] - start.w).norm() > s.tolerances().dist {
        return Err(Error::invalid("path does not begin at the start point"));
    }
    if v.windows(2)
        .any(|w| (w[1] - w[0]).norm() <= s.tolerances().branch)
    {
        return Err(Error::invalid(
            "consecutive polyline vertices closer than the branch tolerance",
        ));
    }
    let mut steps = Vec::new();
    let end = lift_vertices(s, LiftState::at(s, start), v, Some(&mut steps))?;
    Ok(LiftedPath {
        start: *start,
        steps,
        end: end.point(v[v.len() - 1]),
    })
}

/// Result of [`loop_order`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopOrder {
    Finite(u32),
    /// The lift did not close within the given number of laps.
    InfiniteUpToBound(u32),
}

/// Number of counterclockwise laps of the circle of `radius` around the
/// ramification point after which the lift started on one of its sheets
/// first closes up.
pub fn loop_order(
    s: &SheetComplex,
    r: &RamificationPoint,
    radius: f64,
    max_laps: u32,
) -> Result<LoopOrder> {
    let branch = s
        .branches()
        .get(r.branch_index)
        .ok_or_else(|| Error::invalid("ramification point does not belong to this surface"))?;
    let c = branch.position;
    if !radius.is_finite() || radius <= s.tolerances().branch {
        return Err(Error::invalid("loop radius must be positive"));
    }
    if let Some(k) = s.branches().iter().enumerate().position(|(k, b)| {
        k != r.branch_index && (b.position - c).norm() <= radius + s.tolerances().branch
    }) {
        return Err(Error::invalid(format!(
            "loop of radius {radius} encloses branch {k}"
        )));
    }
    let verts = 64;
    let mut start_angle = branch.slit_angle + PI;
    let mut first = c + Complex::from_polar(radius, start_angle);
    for k in 1..32 {
        if s.slit_at(first).is_none() {
            break;
        }
        start_angle = branch.slit_angle + PI + 0.1 * k as f64;
        first = c + Complex::from_polar(radius, start_angle);
    }
    let start = lift_from_apex(s, r.branch_index, r.cycle.representative(), first)?;
    let lap = Polyline::circle(c, radius, start_angle, verts, 1)?;
    let mut state = start;
    for laps in 1..=max_laps {
        state = lift_vertices(s, state, lap.vertices(), None)?;
        if state.sheet == start.sheet {
            return Ok(LoopOrder::Finite(laps));
        }
    }
    Ok(LoopOrder::InfiniteUpToBound(max_laps))
}
