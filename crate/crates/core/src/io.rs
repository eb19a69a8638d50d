//! JSON description formats.
//!
//! Surfaces:
//!
//! ```json
//! {"kind":"nth_root","n":3}
//! {"kind":"logarithm"}
//! {"kind":"plane"}
//! {"kind":"polynomial","coefficients":[[0,0],[-3,0],[0,0],[1,0]]}
//! {"kind":"sheet_complex","sheet_domain":{"finite":2},
//!  "branches":[{"position":[0,0],"slit_angle":3.14159,"monodromy":{"cycles":[[0,1]]}}]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs and surface points are
//! `{"sheet":0,"w":[1,0]}` with an optional `"slit_side":"above"|"below"`.

use serde::{Deserialize, Serialize};

use crate::caratheodory::{canonical_compact, SurfaceFamily};
use crate::continuation::Polyline;
use crate::error::Result;
use crate::metric::{CompactRegion, Gluing, RegionPiece};
use crate::poly::PolynomialSpec;
use crate::surface::{
    make_logarithm, make_nth_root, make_plane, make_polynomial_with, SheetComplex, SheetDomain,
    SlitBranch, SurfacePoint,
};
use crate::tolerance::Tolerances;
use crate::uniformization::SurfaceKind;
use crate::Sheet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceSpec {
    NthRoot {
        n: u32,
    },
    Logarithm,
    Plane,
    Polynomial {
        coefficients: PolynomialSpec,
    },
    SheetComplex {
        sheet_domain: SheetDomain,
        branches: Vec<SlitBranch>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

impl SurfaceSpec {
    pub fn build(&self, tol: Tolerances) -> Result<SheetComplex> {
        let s = match self {
            SurfaceSpec::NthRoot { n } => make_nth_root(*n)?,
            SurfaceSpec::Logarithm => make_logarithm(),
            SurfaceSpec::Plane => make_plane(),
            SurfaceSpec::Polynomial { coefficients } => {
                return Ok(make_polynomial_with(coefficients, tol)?.surface)
            }
            SurfaceSpec::SheetComplex {
                sheet_domain,
                branches,
                label,
            } => {
                return SheetComplex::with_tolerances(
                    *sheet_domain,
                    branches.clone(),
                    label.clone().unwrap_or_default(),
                    tol,
                )
            }
        };
        if *s.tolerances() == tol {
            Ok(s)
        } else {
            s.retolerance(tol)
        }
    }

    /// The explicit `sheet_complex` form of a surface.
    pub fn from_surface(s: &SheetComplex) -> SurfaceSpec {
        SurfaceSpec::SheetComplex {
            sheet_domain: s.sheet_domain(),
            branches: s.branches().to_vec(),
            label: (!s.label().is_empty()).then(|| s.label().to_string()),
        }
    }

    pub fn kind(&self) -> SurfaceKind {
        match self {
            SurfaceSpec::NthRoot { n } => SurfaceKind::NthRoot { n: *n },
            SurfaceSpec::Logarithm => SurfaceKind::Logarithm,
            SurfaceSpec::Plane => SurfaceKind::Plane,
            SurfaceSpec::Polynomial { coefficients } => SurfaceKind::Polynomial {
                coefficients: coefficients.clone(),
            },
            SurfaceSpec::SheetComplex { .. } => SurfaceKind::Other,
        }
    }
}

/// A compact region of some surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionSpec {
    /// Truncated annulus around the single branch, over `sheets[0]..=sheets[1]`.
    Annulus {
        sheets: (Sheet, Sheet),
        eps: f64,
        r: f64,
        basepoint: SurfacePoint,
    },
    /// Square of half-width `half_width` around the basepoint on every sheet.
    Grid {
        half_width: f64,
        basepoint: SurfacePoint,
    },
    /// The canonical compact of the given radius.
    Canonical {
        radius: f64,
        basepoint: SurfacePoint,
    },
    Pieces {
        basepoint: SurfacePoint,
        pieces: Vec<RegionPiece>,
        #[serde(default)]
        gluings: Vec<Gluing>,
    },
}

impl RegionSpec {
    pub fn build(&self, s: &SheetComplex) -> Result<CompactRegion> {
        match self {
            RegionSpec::Annulus {
                sheets,
                eps,
                r,
                basepoint,
            } => CompactRegion::truncated_annulus(s, *sheets, *eps, *r, *basepoint),
            RegionSpec::Grid {
                half_width,
                basepoint,
            } => CompactRegion::sheet_grid(s, *basepoint, *half_width),
            RegionSpec::Canonical { radius, basepoint } => canonical_compact(s, basepoint, *radius),
            RegionSpec::Pieces {
                basepoint,
                pieces,
                gluings,
            } => CompactRegion::new(s, *basepoint, pieces.clone(), gluings.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `n`-th root surfaces pointed above 1 (the plane for `n = 1`).
    NthRootToLog,
    ScaledRecentred {
        surface: SurfaceSpec,
        basepoint: SurfacePoint,
    },
    Constant {
        surface: SurfaceSpec,
        basepoint: SurfacePoint,
    },
}

impl FamilySpec {
    pub fn build(&self, tol: Tolerances) -> Result<SurfaceFamily> {
        match self {
            FamilySpec::NthRootToLog => Ok(SurfaceFamily::nth_root_to_log()),
            FamilySpec::ScaledRecentred { surface, basepoint } => {
                SurfaceFamily::scaled_recentred(surface.build(tol)?, *basepoint)
            }
            FamilySpec::Constant { surface, basepoint } => {
                SurfaceFamily::constant(surface.build(tol)?, *basepoint)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftRequest {
    pub surface: SurfaceSpec,
    pub start: SurfacePoint,
    pub path: Polyline,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceRequest {
    pub surface: SurfaceSpec,
    pub p: SurfacePoint,
    pub q: SurfacePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedRequest {
    pub source: SurfaceSpec,
    pub region: RegionSpec,
    pub target: SurfaceSpec,
    pub target_basepoint: SurfacePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergeRequest {
    pub family: FamilySpec,
    pub source: SurfaceSpec,
    pub region: RegionSpec,
    pub n_max: u32,
}
