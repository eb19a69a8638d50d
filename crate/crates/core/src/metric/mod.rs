//! The flat path metric `|dπ|`.
//!
//! Every cone angle of a sheet complex is `2π·order ≥ 4π`, so a geodesic is
//! a chain of straight chart segments that bends only at cone points. The
//! distance is therefore the shortest path in the visibility graph on the
//! two endpoints and the cone points, where an edge exists when the straight
//! segment between two nodes lifts to the surface and joins them.

mod region;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::continuation::{lift_from_apex, lift_segment, LiftState};
use crate::error::{Error, Result};
use crate::surface::{
    Monodromy, RamificationCycle, RamificationPoint, SheetComplex, SheetDomain, SlitSide,
    SurfacePoint,
};
use crate::{Complex, Sheet};

pub use region::{CompactRegion, Gluing, RegionPiece};

/// Length of the geodesic between two points at radii `r1`, `r2` from a cone
/// point whose angular separation, measured around the cone, is `dphi`.
pub fn cone_distance(r1: f64, r2: f64, dphi: f64) -> Result<f64> {
    if !(r1 >= 0.0 && r2 >= 0.0 && dphi >= 0.0) {
        return Err(Error::invalid(
            "cone_distance needs nonnegative radii and angle",
        ));
    }
    if dphi <= PI {
        Ok((r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * dphi.cos())
            .max(0.0)
            .sqrt())
    } else {
        Ok(r1 + r2)
    }
}

/// A vertex of a geodesic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WitnessNode {
    Point {
        point: SurfacePoint,
    },
    Ramification {
        point: RamificationPoint,
    },
    /// A branch position passed on a sheet the branch leaves fixed (a
    /// regular point of the surface).
    Regular {
        branch_index: usize,
        sheet: Sheet,
        w: Complex,
    },
}

impl WitnessNode {
    pub fn w(&self) -> Complex {
        match self {
            WitnessNode::Point { point } => point.w,
            WitnessNode::Ramification { point } => point.w,
            WitnessNode::Regular { w, .. } => *w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value: f64,
    pub witness: Vec<WitnessNode>,
}

#[derive(Debug, Clone, PartialEq)]
enum ConeKind {
    Cycle(Vec<Sheet>),
    Orbit { residue: i64, modulus: i64 },
    Fixed(Sheet),
}

#[derive(Debug, Clone, PartialEq)]
struct ConeNode {
    branch: usize,
    kind: ConeKind,
}

impl ConeNode {
    fn contains(&self, s: Sheet) -> bool {
        match &self.kind {
            ConeKind::Cycle(c) => c.contains(&s),
            ConeKind::Orbit { residue, modulus } => s.rem_euclid(*modulus) == *residue,
            ConeKind::Fixed(f) => *f == s,
        }
    }

    fn departures(&self, window: (Sheet, Sheet)) -> Vec<Sheet> {
        match &self.kind {
            ConeKind::Cycle(c) => c.clone(),
            ConeKind::Orbit { residue, modulus } => (window.0..=window.1)
                .filter(|s| s.rem_euclid(*modulus) == *residue)
                .collect(),
            ConeKind::Fixed(f) => vec![*f],
        }
    }

    fn witness(&self, s: &SheetComplex) -> WitnessNode {
        let w = s.branches()[self.branch].position;
        match &self.kind {
            ConeKind::Fixed(sheet) => WitnessNode::Regular {
                branch_index: self.branch,
                sheet: *sheet,
                w,
            },
            ConeKind::Cycle(c) => WitnessNode::Ramification {
                point: RamificationPoint {
                    branch_index: self.branch,
                    cycle: RamificationCycle::Sheets(c.clone()),
                    order: crate::surface::Order::Finite(c.len() as u32),
                    w,
                },
            },
            ConeKind::Orbit { residue, .. } => WitnessNode::Ramification {
                point: RamificationPoint {
                    branch_index: self.branch,
                    cycle: s.branches()[self.branch].monodromy.cycle_of(*residue),
                    order: crate::surface::Order::Infinite,
                    w,
                },
            },
        }
    }
}

fn cone_nodes(s: &SheetComplex, window: (Sheet, Sheet)) -> Vec<ConeNode> {
    let mut out = Vec::new();
    for (j, b) in s.branches().iter().enumerate() {
        match &b.monodromy {
            Monodromy::Shift(k) => {
                let m = k.abs();
                for r in 0..m {
                    out.push(ConeNode {
                        branch: j,
                        kind: ConeKind::Orbit {
                            residue: r,
                            modulus: m,
                        },
                    });
                }
            }
            Monodromy::Cycles(cycles) => {
                for c in cycles.iter().filter(|c| c.len() >= 2) {
                    out.push(ConeNode {
                        branch: j,
                        kind: ConeKind::Cycle(c.clone()),
                    });
                }
                let fixed: Vec<Sheet> = match s.sheet_domain() {
                    SheetDomain::Finite(n) => (0..n as Sheet).collect(),
                    SheetDomain::AllIntegers => (window.0..=window.1).collect(),
                };
                for f in fixed {
                    if !cycles.iter().any(|c| c.contains(&f)) {
                        out.push(ConeNode {
                            branch: j,
                            kind: ConeKind::Fixed(f),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Exact geodesic distance between two points of `s`.
pub fn distance(s: &SheetComplex, p: &SurfacePoint, q: &SurfacePoint) -> Result<DistanceResult> {
    s.validate_point(p)?;
    s.validate_point(q)?;
    if s.same_point(p, q) {
        return Ok(DistanceResult {
            value: 0.0,
            witness: vec![
                WitnessNode::Point { point: *p },
                WitnessNode::Point { point: *q },
            ],
        });
    }
    let lo = p.sheet.min(q.sheet);
    let hi = p.sheet.max(q.sheet);
    match s.sheet_domain() {
        SheetDomain::Finite(_) => {
            Ok(solve(s, p, q, (lo, hi))?.unwrap_or_else(|| unreachable_result(p, q)))
        }
        SheetDomain::AllIntegers => {
            // Widen the window of departure sheets until the answer is stable.
            let mut margin = 1;
            let mut best = solve(s, p, q, (lo - margin, hi + margin))?;
            if s.branches().len() > 1 {
                while margin < 64 {
                    margin *= 2;
                    let next = solve(s, p, q, (lo - margin, hi + margin))?;
                    let stable = match (&best, &next) {
                        (Some(a), Some(b)) => b.value >= a.value,
                        (None, None) => false,
                        _ => false,
                    };
                    best = next;
                    if stable {
                        break;
                    }
                }
            }
            Ok(best.unwrap_or_else(|| unreachable_result(p, q)))
        }
    }
}

fn unreachable_result(p: &SurfacePoint, q: &SurfacePoint) -> DistanceResult {
    DistanceResult {
        value: f64::INFINITY,
        witness: vec![
            WitnessNode::Point { point: *p },
            WitnessNode::Point { point: *q },
        ],
    }
}

fn solve(
    s: &SheetComplex,
    p: &SurfacePoint,
    q: &SurfacePoint,
    window: (Sheet, Sheet),
) -> Result<Option<DistanceResult>> {
    let cones = cone_nodes(s, window);
    let n = cones.len() + 2;
    let (ip, iq) = (0usize, 1usize);
    let mut adj = vec![vec![f64::INFINITY; n]; n];
    let sp = LiftState::at(s, p);
    let tol = s.tolerances();

    // direct segment
    if let Ok(st) = lift_segment(s, sp, p.w, q.w, &[], None) {
        if s.same_point(&st.point(q.w), q) {
            adj[ip][iq] = (q.w - p.w).norm();
            adj[iq][ip] = adj[ip][iq];
        }
    }
    for (a, node) in cones.iter().enumerate() {
        let ia = a + 2;
        let c = s.branches()[node.branch].position;
        if let Ok(st) = lift_segment(s, sp, p.w, c, &[node.branch], None) {
            if node.contains(st.sheet) {
                adj[ip][ia] = (c - p.w).norm();
                adj[ia][ip] = adj[ip][ia];
            }
        }
        for d in node.departures(window) {
            if let Ok(st) = lift_from_apex(s, node.branch, d, q.w) {
                if s.same_point(&st.point(q.w), q) {
                    adj[ia][iq] = (q.w - c).norm();
                    adj[iq][ia] = adj[ia][iq];
                    break;
                }
            }
        }
        for (b, other) in cones.iter().enumerate().skip(a + 1) {
            if other.branch == node.branch {
                continue;
            }
            let ib = b + 2;
            let c2 = s.branches()[other.branch].position;
            for d in node.departures(window) {
                let start = LiftState {
                    sheet: d,
                    on_slit: s.branches()[node.branch]
                        .on_ray(c2, tol.slit)
                        .then_some((node.branch, SlitSide::Above)),
                };
                if let Ok(st) = lift_segment(s, start, c, c2, &[node.branch, other.branch], None) {
                    if other.contains(st.sheet) {
                        adj[ia][ib] = (c2 - c).norm();
                        adj[ib][ia] = adj[ia][ib];
                        break;
                    }
                }
            }
        }
    }

    // Dijkstra on the dense graph
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[ip] = 0.0;
    while let Some(u) = (0..n)
        .filter(|&i| !done[i] && dist[i].is_finite())
        .min_by(|&x, &y| dist[x].total_cmp(&dist[y]))
    {
        if u == iq {
            break;
        }
        done[u] = true;
        for v in 0..n {
            let w = adj[u][v];
            if w.is_finite() && dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                prev[v] = u;
            }
        }
    }
    if !dist[iq].is_finite() {
        return Ok(None);
    }
    let mut chain = vec![iq];
    while let Some(&last) = chain.last() {
        if last == ip {
            break;
        }
        chain.push(prev[last]);
    }
    chain.reverse();
    let witness = chain
        .into_iter()
        .map(|i| match i {
            0 => WitnessNode::Point { point: *p },
            1 => WitnessNode::Point { point: *q },
            k => cones[k - 2].witness(s),
        })
        .collect();
    Ok(Some(DistanceResult {
        value: dist[iq],
        witness,
    }))
}

/// Absolute angle of `p` around the single branch of `s`: sheet index along
/// the branch cycle times `2π` plus the chart angle, the chart angle taken in
/// `(θ − 2π, θ]` for slit angle `θ`. Returns the angle together with an
/// identifier of the cycle and its length (`None` for infinite order).
fn absolute_angle(s: &SheetComplex, p: &SurfacePoint) -> Option<(f64, i64, Option<usize>)> {
    let [b] = s.branches() else { return None };
    let theta = b.slit_angle;
    let v = p.w - b.position;
    let alpha = match p.slit_side {
        Some(SlitSide::Above) => theta,
        Some(SlitSide::Below) => theta - TAU,
        None => {
            let a = v.arg();
            let back = (theta - a).rem_euclid(TAU);
            theta - back
        }
    };
    match &b.monodromy {
        Monodromy::Cycles(cycles) => {
            let (ci, c) = cycles
                .iter()
                .enumerate()
                .find(|(_, c)| c.contains(&p.sheet))?;
            let idx = c.iter().position(|&x| x == p.sheet)?;
            Some((TAU * idx as f64 + alpha, ci as i64, Some(c.len())))
        }
        Monodromy::Shift(k) => {
            let m = k.abs();
            let residue = p.sheet.rem_euclid(m);
            let idx = (p.sheet - residue) / k;
            Some((TAU * idx as f64 + alpha, residue, None))
        }
    }
}

/// Closed-form distance on a surface with a single branch, through
/// [`cone_distance`]. `None` when the surface has several branches or the
/// points lie on different cycles of the branch.
pub fn cone_oracle_distance(s: &SheetComplex, p: &SurfacePoint, q: &SurfacePoint) -> Option<f64> {
    let (fp, cp, len) = absolute_angle(s, p)?;
    let (fq, cq, _) = absolute_angle(s, q)?;
    if cp != cq {
        return None;
    }
    let d = (fp - fq).abs();
    let dphi = match len {
        Some(m) => {
            let period = TAU * m as f64;
            let d = d.rem_euclid(period);
            d.min(period - d)
        }
        None => d,
    };
    let c = s.branches()[0].position;
    cone_distance((p.w - c).norm(), (q.w - c).norm(), dphi).ok()
}
