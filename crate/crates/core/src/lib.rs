//! Log-Riemann surfaces presented as slit-plane sheet complexes.
//!
//! A surface is a set of copies of the plane (sheets) cut along rays (slits)
//! issuing from branch positions and glued back together by a permutation
//! of the sheets (the monodromy of the branch). The chart coordinate of a
//! point is its projection `π`, so the flat metric `|dπ|` is Euclidean on
//! every sheet.
//!
//! - [`surface`]: the [`SheetComplex`] type and the example constructors
//!   (plane, n-th root, logarithm, polynomial surfaces).
//! - [`continuation`]: lifting planar polylines through `π`, loop orders and
//!   continuation of inverse branches of polynomials.
//! - [`metric`]: exact geodesic distances and compact regions.
//! - [`caratheodory`]: translation embeddings of compacts, convergence
//!   thresholds and the limit-uniqueness witness.
//! - [`uniformization`]: conformal radii and normalized chart uniformizations,
//!   including the Euler family `(1 + z/n)^n → e^z`.
//! - [`io`]: the JSON description formats consumed by the CLI.

pub mod caratheodory;
pub mod continuation;
pub mod error;
pub mod geom;
pub mod io;
pub mod metric;
pub mod poly;
pub mod surface;
pub mod tolerance;
pub mod uniformization;

pub use caratheodory::{
    convergence_threshold, embed_check, mutual_embedding_test, EmbeddingFailure, EmbeddingResult,
    FamilyKind, SurfaceFamily, ThresholdReport,
};
pub use continuation::{
    continue_inverse, lift_path, loop_order, LiftStep, LiftedPath, LoopOrder, Polyline,
};
pub use error::{Error, Result};
pub use metric::{cone_distance, distance, CompactRegion, DistanceResult, WitnessNode};
pub use poly::PolynomialSpec;
pub use surface::{
    make_logarithm, make_nth_root, make_plane, make_polynomial, ramification_points, Monodromy,
    Order, RamificationCycle, RamificationPoint, SheetComplex, SheetDomain, SlitBranch, SlitSide,
    SurfacePoint,
};
pub use tolerance::Tolerances;
pub use uniformization::{
    chart_uniformization, conformal_radius, convergence_report, sup_error_on_disc, ChartFamilyKind,
    ChartMapFamily, ConformalRadius, SurfaceKind,
};

/// Complex numbers used for chart coordinates throughout the crate.
pub type Complex = num_complex::Complex64;

/// Sheet index. Finite domains use `0..count`, infinite ones all of `i64`.
pub type Sheet = i64;
