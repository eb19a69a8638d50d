//! Sheet-complex presentation of log-Riemann surfaces.
//!
//! Sheets are copies of the plane indexed by [`Sheet`]. Every branch carries
//! a slit ray `{position + t·e^{iθ}, t ≥ 0}`; crossing the ray
//! counterclockwise around the branch position moves from sheet `s` to
//! `σ(s)`, crossing it clockwise moves to `σ⁻¹(s)`. Ramification points are
//! the nontrivial cycles (or shift orbits) of the branch permutations.

mod polynomial;

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{cross, dot, point_ray_distance, rays_intersect};
use crate::tolerance::Tolerances;
use crate::{Complex, Sheet};

pub use polynomial::{
    make_polynomial, make_polynomial_with, monodromy_at_infinity, PolynomialSurface,
};

/// Index set of the sheets of a complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SheetDomain {
    /// Sheets `0..count`.
    Finite(u32),
    /// Sheets indexed by all integers.
    AllIntegers,
}

impl SheetDomain {
    pub fn contains(&self, s: Sheet) -> bool {
        match *self {
            SheetDomain::Finite(n) => (0..n as Sheet).contains(&s),
            SheetDomain::AllIntegers => true,
        }
    }

    pub fn count(&self) -> Option<u32> {
        match *self {
            SheetDomain::Finite(n) => Some(n),
            SheetDomain::AllIntegers => None,
        }
    }
}

/// Sheet permutation applied by a counterclockwise slit crossing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monodromy {
    /// Disjoint cycles; unlisted sheets are fixed.
    Cycles(Vec<Vec<Sheet>>),
    /// `s ↦ s + step` on an integer-indexed domain.
    Shift(i64),
}

impl Monodromy {
    /// The same permutation in canonical form: trivial cycles dropped, each
    /// cycle rotated to start at its least element, cycles sorted.
    pub fn normalized(&self) -> Monodromy {
        match self {
            Monodromy::Shift(k) => Monodromy::Shift(*k),
            Monodromy::Cycles(cycles) => {
                let mut out: Vec<Vec<Sheet>> = cycles
                    .iter()
                    .filter(|c| c.len() >= 2)
                    .map(|c| {
                        let pos = c
                            .iter()
                            .enumerate()
                            .min_by_key(|(_, &s)| s)
                            .map(|(i, _)| i)
                            .unwrap_or(0);
                        let mut r = c.clone();
                        r.rotate_left(pos);
                        r
                    })
                    .collect();
                out.sort();
                Monodromy::Cycles(out)
            }
        }
    }

    pub fn apply(&self, s: Sheet) -> Sheet {
        match self {
            Monodromy::Shift(k) => s + k,
            Monodromy::Cycles(cycles) => {
                for c in cycles {
                    if let Some(i) = c.iter().position(|&x| x == s) {
                        return c[(i + 1) % c.len()];
                    }
                }
                s
            }
        }
    }

    pub fn apply_inverse(&self, s: Sheet) -> Sheet {
        match self {
            Monodromy::Shift(k) => s - k,
            Monodromy::Cycles(cycles) => {
                for c in cycles {
                    if let Some(i) = c.iter().position(|&x| x == s) {
                        return c[(i + c.len() - 1) % c.len()];
                    }
                }
                s
            }
        }
    }

    /// Applies the permutation `laps` times (negative for inverse).
    pub fn apply_power(&self, s: Sheet, laps: i64) -> Sheet {
        let mut s = s;
        for _ in 0..laps.unsigned_abs() {
            s = if laps > 0 {
                self.apply(s)
            } else {
                self.apply_inverse(s)
            };
        }
        s
    }

    /// The cycle through `s` in the form used by [`RamificationPoint`].
    pub fn cycle_of(&self, s: Sheet) -> RamificationCycle {
        match self {
            Monodromy::Shift(k) => {
                let m = k.abs();
                if m == 1 {
                    RamificationCycle::AllIntegers
                } else {
                    RamificationCycle::Orbit {
                        residue: s.rem_euclid(m),
                        modulus: m,
                    }
                }
            }
            Monodromy::Cycles(cycles) => cycles
                .iter()
                .find(|c| c.contains(&s))
                .map(|c| RamificationCycle::Sheets(c.clone()))
                .unwrap_or(RamificationCycle::Sheets(vec![s])),
        }
    }

    fn validate(&self, domain: SheetDomain) -> Result<()> {
        match self {
            Monodromy::Shift(k) => {
                if *k == 0 {
                    return Err(Error::invalid("shift monodromy needs a nonzero step"));
                }
                if domain != SheetDomain::AllIntegers {
                    return Err(Error::invalid(
                        "shift monodromy requires the all-integers sheet domain",
                    ));
                }
            }
            Monodromy::Cycles(cycles) => {
                let mut seen = BTreeSet::new();
                for c in cycles {
                    for &s in c {
                        if !domain.contains(s) {
                            return Err(Error::invalid(format!(
                                "cycle entry {s} outside the sheet domain"
                            )));
                        }
                        if !seen.insert(s) {
                            return Err(Error::invalid(format!("sheet {s} appears in two cycles")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn commutes_trivially(&self) -> bool {
        matches!(self, Monodromy::Cycles(c) if c.is_empty())
    }
}

/// Side of a slit ray on which a point sitting exactly on the ray is taken.
///
/// `Above` is the clockwise side (angles just below the slit angle), which for
/// the standard slit along the negative real axis is the upper half plane;
/// `Below` is the counterclockwise side. A point `(s, Below)` is the same
/// surface point as `(σ⁻¹(s), Above)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlitSide {
    Above,
    Below,
}

/// A branch position with its slit ray and monodromy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlitBranch {
    pub position: Complex,
    /// Direction of the slit ray, normalized into `[0, 2π)`.
    pub slit_angle: f64,
    pub monodromy: Monodromy,
}

impl SlitBranch {
    pub fn new(position: Complex, slit_angle: f64, monodromy: Monodromy) -> Self {
        SlitBranch {
            position,
            slit_angle: slit_angle.rem_euclid(TAU),
            monodromy: monodromy.normalized(),
        }
    }

    /// Unit vector along the slit ray.
    pub fn direction(&self) -> Complex {
        Complex::from_polar(1.0, self.slit_angle)
    }

    /// Perpendicular offset (positive on the counterclockwise side).
    pub(crate) fn side_value(&self, w: Complex) -> f64 {
        cross(self.direction(), w - self.position)
    }

    pub(crate) fn on_ray(&self, w: Complex, tol: f64) -> bool {
        let v = w - self.position;
        let d = self.direction();
        dot(v, d) > 0.0 && cross(d, v).abs() < tol
    }
}

/// A log-Riemann surface as sheets glued along slit rays.
#[derive(Debug, Clone, PartialEq)]
pub struct SheetComplex {
    sheet_domain: SheetDomain,
    branches: Vec<SlitBranch>,
    label: String,
    tolerances: Tolerances,
}

impl SheetComplex {
    /// Validates and builds a complex with default tolerances.
    pub fn new(
        sheet_domain: SheetDomain,
        branches: Vec<SlitBranch>,
        label: impl Into<String>,
    ) -> Result<Self> {
        Self::with_tolerances(sheet_domain, branches, label, Tolerances::default())
    }

    pub fn with_tolerances(
        sheet_domain: SheetDomain,
        branches: Vec<SlitBranch>,
        label: impl Into<String>,
        tolerances: Tolerances,
    ) -> Result<Self> {
        if sheet_domain == SheetDomain::Finite(0) {
            return Err(Error::invalid(
                "finite sheet domain needs at least one sheet",
            ));
        }
        let branches: Vec<SlitBranch> = branches
            .into_iter()
            .map(|b| SlitBranch::new(b.position, b.slit_angle, b.monodromy))
            .collect();
        for (j, b) in branches.iter().enumerate() {
            if !b.position.is_finite() || !b.slit_angle.is_finite() {
                return Err(Error::invalid(format!(
                    "branch {j} has a non-finite position or angle"
                )));
            }
            b.monodromy.validate(sheet_domain)?;
        }
        for j in 0..branches.len() {
            for k in 0..branches.len() {
                if j == k {
                    continue;
                }
                let (a, b) = (&branches[j], &branches[k]);
                if k > j && (a.position - b.position).norm() <= tolerances.branch {
                    return Err(Error::invalid(format!(
                        "branches {j} and {k} share a position"
                    )));
                }
                if point_ray_distance(b.position, a.position, a.direction()) <= tolerances.slit {
                    return Err(Error::invalid(format!(
                        "branch {k} lies on the slit of branch {j}"
                    )));
                }
                if k > j
                    && rays_intersect(
                        a.position,
                        a.direction(),
                        b.position,
                        b.direction(),
                        tolerances.slit,
                    )
                    && !(a.monodromy.commutes_trivially() || b.monodromy.commutes_trivially())
                {
                    return Err(Error::invalid(format!(
                        "slits of branches {j} and {k} intersect"
                    )));
                }
            }
        }
        let sc = SheetComplex {
            sheet_domain,
            branches,
            label: label.into(),
            tolerances,
        };
        sc.check_connected()?;
        Ok(sc)
    }

    /// The same surface with other tolerances (revalidated).
    pub fn retolerance(&self, tolerances: Tolerances) -> Result<Self> {
        Self::with_tolerances(
            self.sheet_domain,
            self.branches.clone(),
            self.label.clone(),
            tolerances,
        )
    }

    fn check_connected(&self) -> Result<()> {
        match self.sheet_domain {
            SheetDomain::Finite(n) => {
                let mut parent: Vec<usize> = (0..n as usize).collect();
                fn find(p: &mut [usize], x: usize) -> usize {
                    let mut r = x;
                    while p[r] != r {
                        r = p[r];
                    }
                    p[x] = r;
                    r
                }
                for b in &self.branches {
                    for s in 0..n as Sheet {
                        let t = b.monodromy.apply(s);
                        let (rs, rt) =
                            (find(&mut parent, s as usize), find(&mut parent, t as usize));
                        parent[rs] = rt;
                    }
                }
                let root = find(&mut parent, 0);
                if (0..n as usize).any(|s| find(&mut parent, s) != root) {
                    return Err(Error::invalid("sheet complex is not connected"));
                }
            }
            SheetDomain::AllIntegers => {
                let g = self
                    .branches
                    .iter()
                    .filter_map(|b| match b.monodromy {
                        Monodromy::Shift(k) => Some(k.unsigned_abs()),
                        _ => None,
                    })
                    .fold(0u64, gcd);
                if g == 0 {
                    return Err(Error::invalid(
                        "an all-integers sheet domain needs a shift monodromy to be connected",
                    ));
                }
                // residue classes mod g must be linked by cycles
                let g = g as usize;
                let mut parent: Vec<usize> = (0..g).collect();
                for b in &self.branches {
                    if let Monodromy::Cycles(cycles) = &b.monodromy {
                        for c in cycles {
                            for w in c.windows(2) {
                                let a = w[0].rem_euclid(g as i64) as usize;
                                let z = w[1].rem_euclid(g as i64) as usize;
                                let (ra, rz) = (root_of(&parent, a), root_of(&parent, z));
                                parent[ra] = rz;
                            }
                        }
                    }
                }
                let r0 = root_of(&parent, 0);
                if (0..g).any(|x| root_of(&parent, x) != r0) {
                    return Err(Error::invalid("sheet complex is not connected"));
                }
            }
        }
        Ok(())
    }

    pub fn sheet_domain(&self) -> SheetDomain {
        self.sheet_domain
    }

    pub fn branches(&self) -> &[SlitBranch] {
        &self.branches
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    /// Replaces `π` by `λ·π`: positions and slit directions are mapped by `w ↦ λw`.
    pub fn scale(&self, lambda: Complex) -> Result<Self> {
        if !lambda.is_finite() || lambda.norm() == 0.0 {
            return Err(Error::invalid(
                "scale factor must be a nonzero finite complex number",
            ));
        }
        let branches = self
            .branches
            .iter()
            .map(|b| {
                SlitBranch::new(
                    b.position * lambda,
                    b.slit_angle + lambda.arg(),
                    b.monodromy.clone(),
                )
            })
            .collect();
        Self::with_tolerances(
            self.sheet_domain,
            branches,
            self.label.clone(),
            self.tolerances,
        )
    }

    /// Replaces `π` by `π + c`.
    pub fn translate(&self, c: Complex) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::invalid("translation must be finite"));
        }
        let branches = self
            .branches
            .iter()
            .map(|b| SlitBranch::new(b.position + c, b.slit_angle, b.monodromy.clone()))
            .collect();
        Self::with_tolerances(
            self.sheet_domain,
            branches,
            self.label.clone(),
            self.tolerances,
        )
    }

    /// Index of the branch whose slit ray passes within `tol_slit` of `w`.
    pub fn slit_at(&self, w: Complex) -> Option<usize> {
        self.branches
            .iter()
            .position(|b| b.on_ray(w, self.tolerances.slit))
    }

    fn slits_at(&self, w: Complex) -> usize {
        self.branches
            .iter()
            .filter(|b| b.on_ray(w, self.tolerances.slit))
            .count()
    }

    /// A point off every slit. Fails when `w` is on a slit (use [`Self::point_on_slit`]).
    pub fn point(&self, sheet: Sheet, w: Complex) -> Result<SurfacePoint> {
        let p = SurfacePoint {
            sheet,
            w,
            slit_side: None,
        };
        self.validate_point(&p)?;
        Ok(p)
    }

    pub fn point_on_slit(&self, sheet: Sheet, w: Complex, side: SlitSide) -> Result<SurfacePoint> {
        let p = SurfacePoint {
            sheet,
            w,
            slit_side: Some(side),
        };
        self.validate_point(&p)?;
        Ok(p)
    }

    /// A point at `w`, taking the side `side` if `w` happens to lie on a slit.
    pub fn point_with_default_side(
        &self,
        sheet: Sheet,
        w: Complex,
        side: SlitSide,
    ) -> Result<SurfacePoint> {
        let slit_side = self.slit_at(w).map(|_| side);
        let p = SurfacePoint {
            sheet,
            w,
            slit_side,
        };
        self.validate_point(&p)?;
        Ok(p)
    }

    pub fn validate_point(&self, p: &SurfacePoint) -> Result<()> {
        if !self.sheet_domain.contains(p.sheet) {
            return Err(Error::invalid(format!(
                "sheet {} outside the sheet domain",
                p.sheet
            )));
        }
        if !p.w.is_finite() {
            return Err(Error::invalid("point coordinate is not finite"));
        }
        if let Some(j) = self
            .branches
            .iter()
            .position(|b| (b.position - p.w).norm() <= self.tolerances.branch)
        {
            return Err(Error::HitsRamification { branch: j, at: p.w });
        }
        match (self.slits_at(p.w), p.slit_side) {
            (0, None) | (1, Some(_)) => Ok(()),
            (0, Some(_)) => Err(Error::invalid("slit_side given for a point off every slit")),
            (1, None) => Err(Error::invalid(
                "point lies on a slit; slit_side is required",
            )),
            _ => Err(Error::invalid("point lies on two slits")),
        }
    }

    /// Canonical form used for equality of surface points: points on a slit
    /// are expressed on the clockwise (`Above`) side.
    pub fn canonical_point(&self, p: &SurfacePoint) -> SurfacePoint {
        match (p.slit_side, self.slit_at(p.w)) {
            (Some(SlitSide::Below), Some(j)) => SurfacePoint {
                sheet: self.branches[j].monodromy.apply_inverse(p.sheet),
                w: p.w,
                slit_side: Some(SlitSide::Above),
            },
            _ => *p,
        }
    }

    /// Whether two point records denote the same point of the surface
    /// (chart coordinates compared within `tol_dist`).
    pub fn same_point(&self, a: &SurfacePoint, b: &SurfacePoint) -> bool {
        if (a.w - b.w).norm() > self.tolerances.dist {
            return false;
        }
        let (ca, cb) = (self.canonical_point(a), self.canonical_point(b));
        ca.sheet == cb.sheet
    }

    /// Sum of `(order − 1)` over finite ramification points.
    pub fn finite_ramification_total(&self) -> u64 {
        ramification_points(self)
            .iter()
            .map(|r| match r.order {
                Order::Finite(k) => k as u64 - 1,
                Order::Infinite => 0,
            })
            .sum()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn root_of(p: &[usize], mut x: usize) -> usize {
    while p[x] != x {
        x = p[x];
    }
    x
}

/// A point of the surface: a sheet and its chart coordinate `w = π(point)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub sheet: Sheet,
    pub w: Complex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slit_side: Option<SlitSide>,
}

impl SurfacePoint {
    /// The same point after `π ↦ λπ + c`.
    pub fn transported(&self, lambda: Complex, c: Complex) -> SurfacePoint {
        SurfacePoint {
            sheet: self.sheet,
            w: self.w * lambda + c,
            slit_side: self.slit_side,
        }
    }
}

/// Order of a ramification point. Serialized as an integer or `"infinite"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(k) => s.serialize_u32(*k),
            Order::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Finite(u32),
            Symbol(String),
        }
        match Raw::deserialize(d)? {
            Raw::Finite(k) => Ok(Order::Finite(k)),
            Raw::Symbol(s) if s == "infinite" => Ok(Order::Infinite),
            Raw::Symbol(s) => Err(serde::de::Error::custom(format!("unknown order {s:?}"))),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// The sheets meeting at a ramification point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RamificationCycle {
    Sheets(Vec<Sheet>),
    /// Every integer sheet (a `Shift(±1)` branch).
    AllIntegers,
    /// The residue class `residue mod modulus` of a `Shift(±modulus)` branch.
    Orbit {
        residue: i64,
        modulus: i64,
    },
}

impl RamificationCycle {
    pub fn contains(&self, s: Sheet) -> bool {
        match self {
            RamificationCycle::Sheets(v) => v.contains(&s),
            RamificationCycle::AllIntegers => true,
            RamificationCycle::Orbit { residue, modulus } => s.rem_euclid(*modulus) == *residue,
        }
    }

    /// A sheet of the cycle: its least element or the residue.
    pub fn representative(&self) -> Sheet {
        match self {
            RamificationCycle::Sheets(v) => v[0],
            RamificationCycle::AllIntegers => 0,
            RamificationCycle::Orbit { residue, .. } => *residue,
        }
    }
}

/// A completion point of the surface where `π` is a covering of degree ≥ 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RamificationPoint {
    pub branch_index: usize,
    pub cycle: RamificationCycle,
    pub order: Order,
    pub w: Complex,
}

impl RamificationPoint {
    /// Whether the point belongs to the finite completion `S^×`.
    pub fn is_finite(&self) -> bool {
        matches!(self.order, Order::Finite(_))
    }
}

/// One entry per nontrivial cycle or shift orbit, in branch order.
pub fn ramification_points(s: &SheetComplex) -> Vec<RamificationPoint> {
    let mut out = Vec::new();
    for (j, b) in s.branches.iter().enumerate() {
        match &b.monodromy {
            Monodromy::Cycles(cycles) => {
                for c in cycles.iter().filter(|c| c.len() >= 2) {
                    out.push(RamificationPoint {
                        branch_index: j,
                        cycle: RamificationCycle::Sheets(c.clone()),
                        order: Order::Finite(c.len() as u32),
                        w: b.position,
                    });
                }
            }
            Monodromy::Shift(k) => {
                let m = k.abs();
                for r in 0..m {
                    out.push(RamificationPoint {
                        branch_index: j,
                        cycle: b.monodromy.cycle_of(r),
                        order: Order::Infinite,
                        w: b.position,
                    });
                }
            }
        }
    }
    out
}

/// The plane: one sheet, no branches.
pub fn make_plane() -> SheetComplex {
    SheetComplex::new(SheetDomain::Finite(1), Vec::new(), "plane").expect("plane is valid")
}

/// The surface of `w^{1/n}`: `n` sheets slit along the negative real axis,
/// glued by the cycle `(0 1 … n−1)`.
pub fn make_nth_root(n: u32) -> Result<SheetComplex> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "n-th root surface needs n >= 2, got {n}"
        )));
    }
    let cycle: Vec<Sheet> = (0..n as Sheet).collect();
    SheetComplex::new(
        SheetDomain::Finite(n),
        vec![SlitBranch::new(
            Complex::new(0.0, 0.0),
            PI,
            Monodromy::Cycles(vec![cycle]),
        )],
        format!("nth_root({n})"),
    )
}

/// The surface of `log w`: integer-indexed sheets slit along the negative
/// real axis, glued by `s ↦ s + 1`.
pub fn make_logarithm() -> SheetComplex {
    SheetComplex::new(
        SheetDomain::AllIntegers,
        vec![SlitBranch::new(
            Complex::new(0.0, 0.0),
            PI,
            Monodromy::Shift(1),
        )],
        "logarithm",
    )
    .expect("logarithm is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn plane_has_no_ramification() {
        let p = make_plane();
        assert_eq!(p.sheet_domain(), SheetDomain::Finite(1));
        assert!(p.branches().is_empty());
        assert!(ramification_points(&p).is_empty());
    }

    #[test]
    fn nth_root_points() {
        let s = make_nth_root(3).unwrap();
        let r = ramification_points(&s);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].order, Order::Finite(3));
        assert_eq!(r[0].w, c(0., 0.));
        assert_eq!(make_nth_root(5).unwrap().finite_ramification_total(), 4);
        assert!(make_nth_root(1).is_err());
    }

    #[test]
    fn square_root_is_an_involution() {
        let s = make_nth_root(2).unwrap();
        let m = &s.branches()[0].monodromy;
        assert_eq!(m.apply(0), 1);
        assert_eq!(m.apply(m.apply(0)), 0);
    }

    #[test]
    fn logarithm_has_one_infinite_point() {
        let s = make_logarithm();
        let r = ramification_points(&s);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].order, Order::Infinite);
        assert_eq!(r[0].cycle, RamificationCycle::AllIntegers);
        let m = &s.branches()[0].monodromy;
        let mut sheet = 0;
        for _ in 0..50 {
            sheet = m.apply(sheet);
            assert_ne!(sheet, 0);
        }
    }

    #[test]
    fn crossing_then_inverse_is_identity() {
        for m in [
            Monodromy::Cycles(vec![vec![0, 3, 1], vec![2, 4]]),
            Monodromy::Shift(-3),
            Monodromy::Cycles(vec![]),
        ] {
            for s in 0..5 {
                assert_eq!(m.apply_inverse(m.apply(s)), s);
                assert_eq!(m.apply(m.apply_inverse(s)), s);
            }
        }
    }

    #[test]
    fn cycle_rotation_is_normalized() {
        let a = Monodromy::Cycles(vec![vec![1, 2, 0]]).normalized();
        let b = Monodromy::Cycles(vec![vec![0, 1, 2]]).normalized();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_complexes_are_rejected() {
        // shift on a finite domain
        let r = SheetComplex::new(
            SheetDomain::Finite(3),
            vec![SlitBranch::new(c(0., 0.), PI, Monodromy::Shift(1))],
            "bad",
        );
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
        // second branch on the first slit
        let r = SheetComplex::new(
            SheetDomain::Finite(2),
            vec![
                SlitBranch::new(c(0., 0.), PI, Monodromy::Cycles(vec![vec![0, 1]])),
                SlitBranch::new(c(-1., 0.), 0.5, Monodromy::Cycles(vec![vec![0, 1]])),
            ],
            "bad",
        );
        assert!(r.is_err());
        // disconnected
        let r = SheetComplex::new(
            SheetDomain::Finite(3),
            vec![SlitBranch::new(
                c(0., 0.),
                PI,
                Monodromy::Cycles(vec![vec![0, 1]]),
            )],
            "bad",
        );
        assert!(r.is_err());
        // overlapping cycles
        let r = SheetComplex::new(
            SheetDomain::Finite(3),
            vec![SlitBranch::new(
                c(0., 0.),
                PI,
                Monodromy::Cycles(vec![vec![0, 1], vec![1, 2]]),
            )],
            "bad",
        );
        assert!(r.is_err());
    }

    #[test]
    fn points_on_slits_need_a_side() {
        let s = make_nth_root(2).unwrap();
        assert!(s.point(0, c(-1., 0.)).is_err());
        assert!(s.point_on_slit(0, c(-1., 0.), SlitSide::Above).is_ok());
        assert!(s.point_on_slit(0, c(1., 0.), SlitSide::Above).is_err());
        assert!(matches!(
            s.point(0, c(0., 0.)),
            Err(Error::HitsRamification { .. })
        ));
        let below = s.point_on_slit(1, c(-1., 0.), SlitSide::Below).unwrap();
        let above = s.point_on_slit(0, c(-1., 0.), SlitSide::Above).unwrap();
        assert!(s.same_point(&below, &above));
    }

    #[test]
    fn scale_and_translate_move_branches() {
        let s = make_nth_root(2).unwrap();
        let t = s.translate(c(1., 0.)).unwrap();
        assert_eq!(t.branches()[0].position, c(1., 0.));
        let sc = s.scale(c(0., 3.)).unwrap();
        assert_eq!(sc.branches()[0].position, c(0., 0.));
        assert!((sc.branches()[0].slit_angle - 1.5 * PI).abs() < 1e-12);
        assert!(s.scale(c(0., 0.)).is_err());
    }
}
