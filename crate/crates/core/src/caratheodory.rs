//! Translation embeddings of compact regions and pointed convergence of
//! surface families.
//!
//! A region `K ⊂ S` with basepoint `z0` embeds into `(S', z')` when the
//! chart translation `w ↦ w + T`, `T = π'(z') − π(z0)`, lifts to an injective
//! map of `K` into `S'` sending `z0` to `z'`. The lift is built cell by cell:
//! each convex cell of `K` is simply connected and, once it misses every
//! branch position of `S'`, has a unique lift through the image of one of
//! its points. The checker propagates these lifts along the adjacency graph
//! of `K` and then looks for two cells whose images meet.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::continuation::{lift_segment, LiftState};
use crate::error::{Error, Result};
use crate::metric::{distance, CompactRegion};
use crate::surface::{make_nth_root, make_plane, SheetComplex, SheetDomain, SurfacePoint};
use crate::{Complex, Sheet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingFailure {
    /// A translated cell contains a branch position of the target.
    RamificationObstruction,
    /// Lifts along two routes through `K` disagree, so a gluing of `K` is not
    /// realized by the target's monodromy.
    GluingMismatch,
    /// Two distinct points of `K` land on the same point of the target.
    InjectivityCollision,
    /// A lift hit a degenerate configuration of target slits.
    SlitIntersection,
}

impl fmt::Display for EmbeddingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EmbeddingFailure::RamificationObstruction => "ramification-obstruction",
            EmbeddingFailure::GluingMismatch => "gluing-mismatch",
            EmbeddingFailure::InjectivityCollision => "injectivity-collision",
            EmbeddingFailure::SlitIntersection => "slit-intersection",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingResult {
    pub found: bool,
    pub translation: Complex,
    /// Target sheet of the centroid of the first cell of each piece.
    pub sheet_assignment: BTreeMap<usize, Sheet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_reason: Option<EmbeddingFailure>,
}

fn classify(e: &Error) -> EmbeddingFailure {
    match e {
        Error::HitsRamification { .. } => EmbeddingFailure::RamificationObstruction,
        _ => EmbeddingFailure::SlitIntersection,
    }
}

/// Lifts the polyline through `points`, skipping zero-length pieces.
fn lift_chain(s: &SheetComplex, mut state: LiftState, points: &[Complex]) -> Result<LiftState> {
    let mut from = points[0];
    for &to in &points[1..] {
        if to != from {
            state = lift_segment(s, state, from, to, &[], None)?;
            from = to;
        }
    }
    Ok(state)
}

/// Decides whether `k` embeds into `target` by the chart translation taking
/// its basepoint to `z_n`.
pub fn embed_check(
    k: &CompactRegion,
    target: &SheetComplex,
    z_n: &SurfacePoint,
) -> Result<EmbeddingResult> {
    target.validate_point(z_n)?;
    let source = k.surface();
    let t = z_n.w - k.basepoint().w;
    let fail = |reason: EmbeddingFailure| EmbeddingResult {
        found: false,
        translation: t,
        sheet_assignment: BTreeMap::new(),
        failure_reason: Some(reason),
    };
    let n = k.cell_count();
    let tol = *target.tolerances();

    for c in 0..n {
        let moved = k.cell(c).2.translated(t);
        if target
            .branches()
            .iter()
            .any(|b| moved.contains(b.position, tol.branch))
        {
            return Ok(fail(EmbeddingFailure::RamificationObstruction));
        }
    }

    let centroid = |c: usize| k.cell(c).2.centroid();
    let mut image: Vec<Option<LiftState>> = vec![None; n];
    let base = k.base_cell();
    match lift_chain(
        target,
        LiftState::at(target, z_n),
        &[z_n.w, centroid(base) + t],
    ) {
        Ok(st) => image[base] = Some(st),
        Err(e) => return Ok(fail(classify(&e))),
    }
    let mut queue = VecDeque::from([base]);
    while let Some(x) = queue.pop_front() {
        let sx = image[x].expect("queued cells have images");
        for &(y, m) in k.neighbors(x) {
            let path = [centroid(x) + t, m + t, centroid(y) + t];
            let sy = match lift_chain(target, sx, &path) {
                Ok(st) => st,
                Err(e) => return Ok(fail(classify(&e))),
            };
            match image[y] {
                None => {
                    image[y] = Some(sy);
                    queue.push_back(y);
                }
                Some(prev) => {
                    let w = centroid(y) + t;
                    if !target.same_point(&prev.point(w), &sy.point(w)) {
                        return Ok(fail(EmbeddingFailure::GluingMismatch));
                    }
                }
            }
        }
    }
    let image: Vec<LiftState> = image
        .into_iter()
        .map(|s| s.expect("regions are connected"))
        .collect();

    // Injectivity: every pair of cells whose planar shadows meet.
    for x in 0..n {
        for y in x + 1..n {
            let (_, sheet_x, px) = k.cell(x);
            let (_, sheet_y, py) = k.cell(y);
            let (alo, ahi) = px.bbox();
            let (blo, bhi) = py.bbox();
            if alo.re > bhi.re || blo.re > ahi.re || alo.im > bhi.im || blo.im > ahi.im {
                continue;
            }
            if k.neighbors(x).iter().any(|&(z, _)| z == y) {
                continue;
            }
            let common = match px.intersection(py) {
                Some(i) if i.area() > 0.0 => i.centroid(),
                _ => match px.shared_edge(py) {
                    Some((a, b)) => (a + b) * 0.5,
                    None => continue,
                },
            };
            let src = (
                lift_chain(
                    source,
                    LiftState {
                        sheet: sheet_x,
                        on_slit: None,
                    },
                    &[px.centroid(), common],
                ),
                lift_chain(
                    source,
                    LiftState {
                        sheet: sheet_y,
                        on_slit: None,
                    },
                    &[py.centroid(), common],
                ),
            );
            let tgt = (
                lift_chain(target, image[x], &[px.centroid() + t, common + t]),
                lift_chain(target, image[y], &[py.centroid() + t, common + t]),
            );
            let (Ok(a), Ok(b)) = src else {
                return Ok(fail(EmbeddingFailure::SlitIntersection));
            };
            let (ta, tb) = match tgt {
                (Ok(ta), Ok(tb)) => (ta, tb),
                (Err(e), _) | (_, Err(e)) => return Ok(fail(classify(&e))),
            };
            let same_source = source.same_point(&a.point(common), &b.point(common));
            let same_target = target.same_point(&ta.point(common + t), &tb.point(common + t));
            if same_source && !same_target {
                return Ok(fail(EmbeddingFailure::GluingMismatch));
            }
            if !same_source && same_target {
                return Ok(fail(EmbeddingFailure::InjectivityCollision));
            }
        }
    }

    // The embedding is a local isometry: straight chords inside a cell keep
    // their length in the target. Checked on a spread of cells.
    let stride = (n / 6).max(1);
    for c in (0..n).step_by(stride) {
        let poly = k.cell(c).2;
        let v = poly.vertices();
        let (a, b) = (v[0], v[v.len() / 2]);
        let cen = poly.centroid() + t;
        let ends = (
            lift_chain(target, image[c], &[cen, a + t]),
            lift_chain(target, image[c], &[cen, b + t]),
        );
        let (Ok(ea), Ok(eb)) = ends else {
            return Ok(fail(EmbeddingFailure::SlitIntersection));
        };
        let d = distance(target, &ea.point(a + t), &eb.point(b + t))?;
        if (d.value - (b - a).norm()).abs() > tol.dist * (1.0 + d.value) {
            return Ok(fail(EmbeddingFailure::GluingMismatch));
        }
    }

    let mut sheet_assignment = BTreeMap::new();
    for (c, img) in image.iter().enumerate().take(n) {
        sheet_assignment.entry(k.cell(c).0).or_insert(img.sheet);
    }
    Ok(EmbeddingResult {
        found: true,
        translation: t,
        sheet_assignment,
        failure_reason: None,
    })
}

/// How a family was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    NthRootToLog,
    ScaledRecentred,
    Constant,
    Custom,
}

type Generator = Arc<dyn Fn(u32) -> Result<(SheetComplex, SurfacePoint)> + Send + Sync>;

/// A pointed sequence `n ↦ (S_n, z_n)`, `n ≥ 1`.
#[derive(Clone)]
pub struct SurfaceFamily {
    kind: FamilyKind,
    generator: Generator,
}

impl fmt::Debug for SurfaceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceFamily")
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

impl SurfaceFamily {
    /// `S_n` = the `n`-th root surface (the plane for `n = 1`), pointed above 1.
    pub fn nth_root_to_log() -> Self {
        SurfaceFamily {
            kind: FamilyKind::NthRootToLog,
            generator: Arc::new(|n| {
                let s = if n == 1 {
                    make_plane()
                } else {
                    make_nth_root(n)?
                };
                let z = s.point(0, Complex::new(1.0, 0.0))?;
                Ok((s, z))
            }),
        }
    }

    /// `π_n = n·(π − π(z0))`: the surface scaled by `n` and recentred so the
    /// basepoint projects to 0.
    pub fn scaled_recentred(s: SheetComplex, z0: SurfacePoint) -> Result<Self> {
        s.validate_point(&z0)?;
        Ok(SurfaceFamily {
            kind: FamilyKind::ScaledRecentred,
            generator: Arc::new(move |n| {
                let lambda = Complex::new(n as f64, 0.0);
                let shift = -lambda * z0.w;
                let sn = s.scale(lambda)?.translate(shift)?;
                let zn = z0.transported(lambda, shift);
                sn.validate_point(&zn)?;
                Ok((sn, zn))
            }),
        })
    }

    pub fn constant(s: SheetComplex, z0: SurfacePoint) -> Result<Self> {
        s.validate_point(&z0)?;
        Ok(SurfaceFamily {
            kind: FamilyKind::Constant,
            generator: Arc::new(move |_| Ok((s.clone(), z0))),
        })
    }

    pub fn custom(
        f: impl Fn(u32) -> Result<(SheetComplex, SurfacePoint)> + Send + Sync + 'static,
    ) -> Self {
        SurfaceFamily {
            kind: FamilyKind::Custom,
            generator: Arc::new(f),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn member(&self, n: u32) -> Result<(SheetComplex, SurfacePoint)> {
        if n == 0 {
            return Err(Error::invalid("family members are indexed from 1"));
        }
        (self.generator)(n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub n: u32,
    pub found: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_reason: Option<EmbeddingFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    /// Least `N` with an embedding for every `n` in `N..=n_max`.
    pub threshold: u32,
    pub n_max: u32,
    /// Whether the set of `n` with an embedding is upward closed.
    pub monotone: bool,
    pub rows: Vec<ThresholdRow>,
}

/// Runs [`embed_check`] for every member `1..=n_max`.
pub fn threshold_scan(
    k: &CompactRegion,
    family: &SurfaceFamily,
    n_max: u32,
) -> Result<Vec<ThresholdRow>> {
    if n_max == 0 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    (1..=n_max)
        .map(|n| {
            let (s, z) = family.member(n)?;
            let r = embed_check(k, &s, &z)?;
            Ok(ThresholdRow {
                n,
                found: r.found,
                failure_reason: r.failure_reason,
            })
        })
        .collect()
}

/// Least `N ≤ n_max` such that `K` embeds into every member `n ∈ [N, n_max]`.
pub fn convergence_threshold(
    k: &CompactRegion,
    family: &SurfaceFamily,
    n_max: u32,
) -> Result<ThresholdReport> {
    let rows = threshold_scan(k, family, n_max)?;
    report_from_rows(rows, n_max)
}

pub fn report_from_rows(rows: Vec<ThresholdRow>, n_max: u32) -> Result<ThresholdReport> {
    let largest_failing = rows.iter().filter(|r| !r.found).map(|r| r.n).max();
    if largest_failing == Some(n_max) {
        return Err(Error::ThresholdNotFound {
            largest_failing: n_max,
        });
    }
    let threshold = largest_failing.map_or(1, |n| n + 1);
    let first_found = rows.iter().find(|r| r.found).map(|r| r.n).unwrap_or(n_max);
    let monotone = rows.iter().all(|r| r.found == (r.n >= first_found));
    Ok(ThresholdReport {
        threshold,
        n_max,
        monotone,
        rows,
    })
}

/// The canonical compact of radius `r` around `z0`.
///
/// - one branch at `c`: the annulus `{ε ≤ |w − c| ≤ |z0 − c| + r}` with
///   `ε = |z0 − c|/10`, over every sheet of a finite domain or over
///   `m = max(1, ⌈r⌉)` sheets on each side of the basepoint sheet;
/// - otherwise a square of half-width `r` around `z0` on every sheet (finite
///   domains with parallel slits, which covers polynomial surfaces).
pub fn canonical_compact(s: &SheetComplex, z0: &SurfacePoint, r: f64) -> Result<CompactRegion> {
    s.validate_point(z0)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid("radius must be positive"));
    }
    match s.branches() {
        [b] => {
            let rho = (z0.w - b.position).norm();
            let sheets = match s.sheet_domain() {
                SheetDomain::Finite(n) => (0, n as Sheet - 1),
                SheetDomain::AllIntegers => {
                    let m = r.ceil().max(1.0) as Sheet;
                    (z0.sheet - m, z0.sheet + m)
                }
            };
            CompactRegion::truncated_annulus(s, sheets, 0.1 * rho, rho + r, *z0)
        }
        _ => CompactRegion::sheet_grid(s, *z0, r),
    }
}

/// Whether the canonical compacts of each pointed surface embed into the
/// other at every radius, with reciprocal chart translations.
pub fn mutual_embedding_test(
    s: &SheetComplex,
    z0: &SurfacePoint,
    s2: &SheetComplex,
    z2: &SurfacePoint,
    radii: &[f64],
) -> Result<bool> {
    if radii.is_empty() {
        return Err(Error::invalid("at least one radius is required"));
    }
    for &r in radii {
        let k = canonical_compact(s, z0, r)?;
        let k2 = canonical_compact(s2, z2, r)?;
        let there = embed_check(&k, s2, z2)?;
        if !there.found {
            return Ok(false);
        }
        let back = embed_check(&k2, s, z0)?;
        if !back.found {
            return Ok(false);
        }
        debug_assert_eq!(there.translation, -back.translation);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ConvexPolygon;
    use crate::metric::RegionPiece;
    use crate::surface::{make_logarithm, Monodromy, SlitBranch};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn log_annulus(m: i64) -> CompactRegion {
        let s = make_logarithm();
        CompactRegion::truncated_annulus(&s, (-m, m), 0.1, 2.0, s.point(0, c(1., 0.)).unwrap())
            .unwrap()
    }

    #[test]
    fn square_embeds_trivially() {
        let s = make_logarithm();
        let sq =
            ConvexPolygon::new(vec![c(1., -0.5), c(2., -0.5), c(2., 0.5), c(1., 0.5)]).unwrap();
        let k = CompactRegion::new(
            &s,
            s.point(0, c(1.5, 0.)).unwrap(),
            vec![RegionPiece {
                sheet: 0,
                cells: vec![sq],
            }],
            vec![],
        )
        .unwrap();
        let t = make_nth_root(2).unwrap();
        let r = embed_check(&k, &t, &t.point(0, c(1.5, 0.)).unwrap()).unwrap();
        assert!(r.found);
        assert_eq!(r.translation, c(0., 0.));
        assert_eq!(r.sheet_assignment, BTreeMap::from([(0, 0)]));
    }

    #[test]
    fn three_log_sheets_into_the_cube_root() {
        let k = log_annulus(1);
        let t = make_nth_root(3).unwrap();
        let r = embed_check(&k, &t, &t.point(0, c(1., 0.)).unwrap()).unwrap();
        assert!(r.found, "{r:?}");
        assert_eq!(r.sheet_assignment, BTreeMap::from([(0, 2), (1, 0), (2, 1)]));
    }

    #[test]
    fn three_log_sheets_collide_in_the_square_root() {
        let k = log_annulus(1);
        let t = make_nth_root(2).unwrap();
        let r = embed_check(&k, &t, &t.point(0, c(1., 0.)).unwrap()).unwrap();
        assert_eq!(
            r.failure_reason,
            Some(EmbeddingFailure::InjectivityCollision)
        );
    }

    #[test]
    fn branch_inside_the_image() {
        let k = log_annulus(1);
        let t = make_nth_root(3).unwrap().translate(c(1.0, 0.0)).unwrap();
        let r = embed_check(&k, &t, &t.point(0, c(1., 0.5)).unwrap()).unwrap();
        assert_eq!(
            r.failure_reason,
            Some(EmbeddingFailure::RamificationObstruction)
        );
    }

    #[test]
    fn thresholds_follow_the_sheet_count() {
        let fam = SurfaceFamily::nth_root_to_log();
        let rep = convergence_threshold(&log_annulus(1), &fam, 6).unwrap();
        assert_eq!(rep.threshold, 3);
        assert!(rep.monotone);
        let err = convergence_threshold(&log_annulus(2), &fam, 4).unwrap_err();
        assert_eq!(err, Error::ThresholdNotFound { largest_failing: 4 });
    }

    #[test]
    fn scaled_logarithm_converges_to_the_plane() {
        let plane = make_plane();
        let sq = ConvexPolygon::new(vec![c(-2.5, -2.5), c(2.5, -2.5), c(2.5, 2.5), c(-2.5, 2.5)])
            .unwrap();
        let k = CompactRegion::new(
            &plane,
            plane.point(0, c(0., 0.)).unwrap(),
            vec![RegionPiece {
                sheet: 0,
                cells: vec![sq],
            }],
            vec![],
        )
        .unwrap();
        let log = make_logarithm();
        let fam =
            SurfaceFamily::scaled_recentred(log.clone(), log.point(0, c(1., 0.)).unwrap()).unwrap();
        assert_eq!(convergence_threshold(&k, &fam, 6).unwrap().threshold, 3);
    }

    #[test]
    fn relabelled_surfaces_are_mutually_embedded() {
        let a = make_nth_root(3).unwrap();
        let b = SheetComplex::new(
            SheetDomain::Finite(3),
            vec![SlitBranch::new(
                c(0., 0.),
                std::f64::consts::PI,
                Monodromy::Cycles(vec![vec![0, 2, 1]]),
            )],
            "reversed",
        )
        .unwrap();
        let za = a.point(0, c(1., 0.)).unwrap();
        let zb = b.point(1, c(1., 0.)).unwrap();
        assert!(mutual_embedding_test(&a, &za, &b, &zb, &[1.0, 2.0]).unwrap());
        let two = make_nth_root(2).unwrap();
        assert!(
            !mutual_embedding_test(&two, &two.point(0, c(1., 0.)).unwrap(), &a, &za, &[2.0])
                .unwrap()
        );
    }
}
