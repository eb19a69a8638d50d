//! Conformal radii and normalized uniformizations written in charts.
//!
//! For a pointed surface `(S, z0)` with conformal radius `R`, the normalized
//! uniformization `G: D_R → S^×` has `G(0) = z0` and `(π ∘ G)′(0) = 1`. The
//! families handled here have closed forms for `h = π ∘ G`:
//!
//! | family | member `h_n(z)` | limit `h(z)` |
//! |---|---|---|
//! | n-th root, base `w₀` | `(w₀ + z/(n w₀^{n−1}))^n` | `e^z` when `w₀ = 1` |
//! | scaled logarithm, recentred | `n(e^{z/n} − 1)` | `z` |
//! | polynomial `p`, base `z₀` | `p(z₀ + z/p′(z₀))` | same map |
//! | plane, base `w₀` | `w₀ + z` | same map |

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::PolynomialSpec;
use crate::surface::SurfacePoint;
use crate::{Complex, Sheet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConformalRadius {
    Finite(f64),
    Infinite,
}

/// Surfaces whose conformal radius is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceKind {
    Plane,
    NthRoot {
        n: u32,
    },
    Logarithm,
    Polynomial {
        coefficients: PolynomialSpec,
    },
    /// Any other sheet complex; no closed form is available.
    Other,
}

/// Conformal radius of `(S, basepoint)`. The supported surfaces all have a
/// finite completion biholomorphic to the plane.
pub fn conformal_radius(kind: &SurfaceKind, _basepoint: &SurfacePoint) -> Result<ConformalRadius> {
    match kind {
        SurfaceKind::Plane | SurfaceKind::Logarithm | SurfaceKind::Polynomial { .. } => {
            Ok(ConformalRadius::Infinite)
        }
        SurfaceKind::NthRoot { n } if *n >= 2 => Ok(ConformalRadius::Infinite),
        SurfaceKind::NthRoot { n } => Err(Error::invalid(format!(
            "n-th root surface needs n >= 2, got {n}"
        ))),
        SurfaceKind::Other => Err(Error::unsupported(
            "no closed-form conformal radius for this surface",
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChartFamilyKind {
    NthRoot { base: Complex },
    ScaledLogRecentred,
    Polynomial { p: PolynomialSpec, z0: Complex },
    Plane { base: Complex },
}

/// A family of normalized chart uniformizations `h_n = π_n ∘ G_n` together
/// with its limit `h = π ∘ G`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartMapFamily {
    kind: ChartFamilyKind,
    /// `1/p′(z₀)` for the polynomial family.
    #[serde(skip)]
    inv_derivative: Complex,
}

/// `log(1 + u)` accurate for small `u`.
fn log1p(u: Complex) -> Complex {
    let re = 0.5 * (2.0 * u.re + u.norm_sqr()).ln_1p();
    let im = u.im.atan2(1.0 + u.re);
    Complex::new(re, im)
}

/// `e^u − 1` accurate for small `u`.
fn expm1(u: Complex) -> Complex {
    let half_sin = (0.5 * u.im).sin();
    let re = u.re.exp_m1() * u.im.cos() - 2.0 * half_sin * half_sin;
    let im = u.re.exp() * u.im.sin();
    Complex::new(re, im)
}

/// `(1 + u)^n` through `exp(n·log(1 + u))`, exact for integer `n` on any branch.
fn one_plus_pow(u: Complex, n: u32) -> Complex {
    (log1p(u) * n as f64).exp()
}

/// Builds the chart family; fails for a polynomial basepoint at a critical point.
pub fn chart_uniformization(kind: ChartFamilyKind) -> Result<ChartMapFamily> {
    let inv_derivative = match &kind {
        ChartFamilyKind::NthRoot { base } => {
            if base.norm() == 0.0 || !base.is_finite() {
                return Err(Error::invalid(
                    "n-th root base must be a nonzero finite point",
                ));
            }
            Complex::new(1.0, 0.0)
        }
        ChartFamilyKind::Polynomial { p, z0 } => {
            let d = p.derivative_at(*z0);
            if d.norm() == 0.0 {
                return Err(Error::invalid(
                    "p'(z0) = 0: basepoint is a ramification point",
                ));
            }
            d.inv()
        }
        ChartFamilyKind::Plane { base } if !base.is_finite() => {
            return Err(Error::invalid("plane base must be finite"));
        }
        _ => Complex::new(1.0, 0.0),
    };
    Ok(ChartMapFamily {
        kind,
        inv_derivative,
    })
}

impl ChartMapFamily {
    pub fn kind(&self) -> &ChartFamilyKind {
        &self.kind
    }

    /// `h_n(z)`; the single-map families ignore `n`.
    pub fn member(&self, n: u32, z: Complex) -> Result<Complex> {
        if n == 0 {
            return Err(Error::invalid("family members are indexed from 1"));
        }
        Ok(match &self.kind {
            ChartFamilyKind::NthRoot { base } => {
                let wn = base.powu(n);
                wn * one_plus_pow(z / (wn * n as f64), n)
            }
            ChartFamilyKind::ScaledLogRecentred => expm1(z / n as f64) * n as f64,
            ChartFamilyKind::Polynomial { p, z0 } => p.eval(*z0 + z * self.inv_derivative),
            ChartFamilyKind::Plane { base } => *base + z,
        })
    }

    /// `h(z)`, when the family has a limit.
    pub fn limit(&self, z: Complex) -> Result<Complex> {
        match &self.kind {
            ChartFamilyKind::NthRoot { base } if *base == Complex::new(1.0, 0.0) => Ok(z.exp()),
            ChartFamilyKind::NthRoot { .. } => Err(Error::unsupported(
                "the n-th root family converges only for base 1",
            )),
            ChartFamilyKind::ScaledLogRecentred => Ok(z),
            _ => self.member(1, z),
        }
    }

    /// `π_n(z_n) = h_n(0)`.
    pub fn basepoint_value(&self, n: u32) -> Result<Complex> {
        match &self.kind {
            ChartFamilyKind::NthRoot { base } => Ok(base.powu(n)),
            ChartFamilyKind::ScaledLogRecentred => Ok(Complex::new(0.0, 0.0)),
            ChartFamilyKind::Polynomial { p, z0 } => Ok(p.eval(*z0)),
            ChartFamilyKind::Plane { base } => Ok(*base),
        }
    }

    /// Central difference `(h_n(δ) − h_n(−δ))/(2δ)` with `δ = 10⁻⁵`.
    pub fn derivative_at_zero(&self, n: u32) -> Result<Complex> {
        let h = 1e-5;
        let d = Complex::new(h, 0.0);
        Ok((self.member(n, d)? - self.member(n, -d)?) / (2.0 * h))
    }

    /// Conformal radii `(R_n, R)`; all supported families are entire.
    pub fn radii(&self) -> (ConformalRadius, ConformalRadius) {
        (ConformalRadius::Infinite, ConformalRadius::Infinite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupError {
    pub value: f64,
    pub arg_max: Complex,
}

/// `max |f − g|` over `samples` equispaced points of `|z| = r`, starting at
/// `z = r`. By the maximum principle this is the sup over the closed disc.
pub fn sup_error_on_disc(
    f: impl Fn(Complex) -> Complex,
    g: impl Fn(Complex) -> Complex,
    r: f64,
    samples: usize,
) -> Result<SupError> {
    if samples < 8 {
        return Err(Error::invalid("at least 8 samples are required"));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid("radius must be positive"));
    }
    let mut best = SupError {
        value: -1.0,
        arg_max: Complex::new(r, 0.0),
    };
    for k in 0..samples {
        let z = if k == 0 {
            Complex::new(r, 0.0)
        } else {
            Complex::from_polar(r, TAU * k as f64 / samples as f64)
        };
        let e = (f(z) - g(z)).norm();
        if e > best.value {
            best = SupError {
                value: e,
                arg_max: z,
            };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub r: f64,
    pub n: u32,
    pub sup_error: f64,
    pub arg_max: Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
    /// `(r, n)` pairs whose error exceeds the error at the previous listed `n`.
    pub violations: Vec<(f64, u32)>,
}

/// Sup errors of `h_n − h` on the circles of the given radii.
pub fn convergence_report(
    family: &ChartMapFamily,
    radii: &[f64],
    n_list: &[u32],
    samples: usize,
) -> Result<ConvergenceReport> {
    family.limit(Complex::new(0.0, 0.0))?;
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for &r in radii {
        let mut prev: Option<f64> = None;
        for &n in n_list {
            let e = sup_error_on_disc(
                |z| {
                    family
                        .member(n, z)
                        .unwrap_or(Complex::new(f64::NAN, f64::NAN))
                },
                |z| family.limit(z).unwrap_or(Complex::new(f64::NAN, f64::NAN)),
                r,
                samples,
            )?;
            if prev.is_some_and(|p| e.value > p) {
                violations.push((r, n));
            }
            prev = Some(e.value);
            rows.push(ReportRow {
                r,
                n,
                sup_error: e.value,
                arg_max: e.arg_max,
            });
        }
    }
    Ok(ConvergenceReport { rows, violations })
}

/// The point of `make_nth_root(n)` over `w = u^n` reached from the basepoint
/// `(0, 1)` along the image of the segment `[1, u]` (for `|arg u| < π`).
pub fn nth_root_chart_point(n: u32, u: Complex) -> SurfacePoint {
    let phi = n as f64 * u.arg();
    let k = ((phi - PI) / TAU).ceil() as Sheet;
    SurfacePoint {
        sheet: k.rem_euclid(n as Sheet),
        w: Complex::from_polar(u.norm().powi(n as i32), phi),
        slit_side: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn euler_member_values() {
        let f = chart_uniformization(ChartFamilyKind::NthRoot { base: c(1., 0.) }).unwrap();
        let mut direct = c(1., 0.);
        for _ in 0..10 {
            direct *= c(1.1, 0.);
        }
        assert!((f.member(10, c(1., 0.)).unwrap() - direct).norm() < 1e-12);
        assert!((f.limit(c(1., 0.)).unwrap().re - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn scaled_log_member() {
        let f = chart_uniformization(ChartFamilyKind::ScaledLogRecentred).unwrap();
        let v = f.member(10, c(1., 0.)).unwrap();
        assert!((v.re - 10.0 * (0.1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn general_base() {
        let w0 = c(0.3, 1.2);
        let f = chart_uniformization(ChartFamilyKind::NthRoot { base: w0 }).unwrap();
        let z = c(0.2, -0.1);
        let expected = (w0 + z / (w0.powu(4) * 5.0)).powu(5);
        assert!((f.member(5, z).unwrap() - expected).norm() < 1e-12);
        assert!((f.derivative_at_zero(5).unwrap() - c(1., 0.)).norm() < 1e-8);
        assert!(f.limit(z).is_err());
    }

    #[test]
    fn polynomial_family_is_normalized() {
        let p = PolynomialSpec::from_real(&[0., -3., 0., 1.]).unwrap();
        let f = chart_uniformization(ChartFamilyKind::Polynomial {
            p: p.clone(),
            z0: c(2., 0.5),
        })
        .unwrap();
        assert_eq!(f.member(1, c(0., 0.)).unwrap(), p.eval(c(2., 0.5)));
        assert!((f.derivative_at_zero(1).unwrap() - c(1., 0.)).norm() < 1e-8);
        let bad = chart_uniformization(ChartFamilyKind::Polynomial { p, z0: c(1., 0.) });
        assert!(matches!(bad, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn sup_error_basics() {
        assert!(sup_error_on_disc(|z| z, |z| z, 1.0, 7).is_err());
        let e = sup_error_on_disc(|z| z, |z| z, 1.0, 64).unwrap();
        assert_eq!(e.value, 0.0);
        let e = sup_error_on_disc(|z| z * z, |_| c(0., 0.), 2.0, 64).unwrap();
        assert!((e.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn radii_are_infinite() {
        let z = SurfacePoint {
            sheet: 0,
            w: c(1., 0.),
            slit_side: None,
        };
        assert_eq!(
            conformal_radius(&SurfaceKind::NthRoot { n: 5 }, &z).unwrap(),
            ConformalRadius::Infinite
        );
        assert_eq!(
            conformal_radius(&SurfaceKind::Logarithm, &z).unwrap(),
            ConformalRadius::Infinite
        );
        assert!(matches!(
            conformal_radius(&SurfaceKind::Other, &z),
            Err(Error::UnsupportedInput(_))
        ));
    }

    #[test]
    fn chart_point_sheets() {
        let p = nth_root_chart_point(4, Complex::from_polar(1.0, 0.3 * PI));
        // absolute angle 1.2π lies in the band of sheet 1
        assert_eq!(p.sheet, 1);
        assert!((p.w - Complex::from_polar(1.0, 1.2 * PI)).norm() < 1e-12);
    }
}
