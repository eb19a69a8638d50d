//! Continuation of a local inverse of a polynomial along a planar polyline.

use crate::error::{Error, Result};
use crate::poly::{self, PolynomialSpec};
use crate::tolerance::Tolerances;
use crate::Complex;

const MAX_CORRECTOR_ITERATIONS: usize = 20;
const MIN_STEP: f64 = 1e-14;

/// Predictor–corrector engine: the predictor is the previous point, the
/// corrector Newton's method on `p(z) = w`. Steps are bounded by a quarter
/// of the distance from `z` to the nearest critical point (mapped through
/// `|p′(z)|`) and halved whenever the corrector fails.
pub(crate) struct InverseContinuation<'a> {
    p: &'a PolynomialSpec,
    critical: Vec<Complex>,
}

impl<'a> InverseContinuation<'a> {
    pub(crate) fn new(p: &'a PolynomialSpec, critical: Vec<Complex>, _tol: Tolerances) -> Self {
        InverseContinuation { p, critical }
    }

    fn step_cap(&self, z: Complex, dp: Complex) -> f64 {
        let nearest = self
            .critical
            .iter()
            .map(|c| (z - c).norm())
            .fold(f64::INFINITY, f64::min);
        0.25 * nearest * dp.norm()
    }

    fn correct(&self, z0: Complex, w: Complex) -> Option<Complex> {
        let mut z = z0;
        for _ in 0..MAX_CORRECTOR_ITERATIONS {
            let (v, dv) = self.p.eval_with_derivative(z);
            if dv.norm() == 0.0 {
                return None;
            }
            let dz = (v - w) / dv;
            z -= dz;
            if !z.is_finite() {
                return None;
            }
            if dz.norm() <= 1e-13 * (1.0 + z.norm()) {
                return Some(z);
            }
        }
        None
    }

    /// Endpoint of the inverse branch through `z_start` continued along `path`.
    pub(crate) fn continue_along(&self, path: &[Complex], z_start: Complex) -> Result<Complex> {
        let mut z = z_start;
        for seg in path.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let len = (b - a).norm();
            if len == 0.0 {
                continue;
            }
            let mut t = 0.0;
            let mut h = len / 8.0;
            while t < len {
                let (_, dp) = self.p.eval_with_derivative(z);
                h = h.min(len - t).min(self.step_cap(z, dp));
                if h < MIN_STEP {
                    let residual = (self.p.eval(z) - (a + (b - a) * (t / len))).norm();
                    return Err(Error::numeric(
                        "continuation step underflow near a critical value",
                        residual,
                    ));
                }
                let t_next = if len - t <= h { len } else { t + h };
                let target = if t_next == len {
                    b
                } else {
                    a + (b - a) * (t_next / len)
                };
                match self.correct(z, target) {
                    Some(z_new)
                        if (z_new - z).norm() <= 3.0 * h / dp.norm() + 1e-15 * (1.0 + z.norm()) =>
                    {
                        z = z_new;
                        t = t_next;
                        h *= 1.5;
                    }
                    _ => h *= 0.5,
                }
            }
        }
        Ok(z)
    }
}

/// Continues the local inverse of `p` through `z_start` along `w_path`.
///
/// `p(z_start)` must match the first vertex within the root tolerance
/// (relative residual), and the path must stay more than `tol.branch` away
/// from every critical value.
pub fn continue_inverse(
    p: &PolynomialSpec,
    w_path: &[Complex],
    z_start: Complex,
) -> Result<Complex> {
    continue_inverse_with(p, w_path, z_start, Tolerances::default())
}

pub fn continue_inverse_with(
    p: &PolynomialSpec,
    w_path: &[Complex],
    z_start: Complex,
    tol: Tolerances,
) -> Result<Complex> {
    if w_path.len() < 2 {
        return Err(Error::invalid("path needs at least two vertices"));
    }
    let scale = p.magnitude_at(z_start).max(w_path[0].norm());
    let residual = (p.eval(z_start) - w_path[0]).norm() / scale.max(f64::MIN_POSITIVE);
    if residual > tol.root.max(1e-12) {
        return Err(Error::invalid(format!(
            "p(z_start) does not match the first vertex (residual {residual:e})"
        )));
    }
    let critical = poly::roots(&p.derivative_coefficients(), tol.root)?;
    for c in &critical {
        let v = p.eval(*c);
        for seg in w_path.windows(2) {
            if crate::geom::point_segment_distance(v, seg[0], seg[1]) <= tol.branch {
                return Err(Error::numeric("path passes through a critical value", 0.0));
            }
        }
    }
    InverseContinuation::new(p, critical, tol).continue_along(w_path, z_start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn circle(center: Complex, r: f64, start: f64, n: usize) -> Vec<Complex> {
        (0..=n)
            .map(|k| center + Complex::from_polar(r, start + TAU * k as f64 / n as f64))
            .collect()
    }

    #[test]
    fn square_root_along_the_real_axis() {
        let p = PolynomialSpec::from_real(&[0., 0., 1.]).unwrap();
        let z = continue_inverse(&p, &[c(1., 0.), c(4., 0.)], c(1., 0.)).unwrap();
        assert!((z - c(2., 0.)).norm() < 1e-12);
    }

    #[test]
    fn square_root_monodromy() {
        let p = PolynomialSpec::from_real(&[0., 0., 1.]).unwrap();
        let z = continue_inverse(&p, &circle(c(0., 0.), 1.0, 0.0, 64), c(1., 0.)).unwrap();
        assert!((z - c(-1., 0.)).norm() < 1e-12);
    }

    #[test]
    fn mismatched_start_is_rejected() {
        let p = PolynomialSpec::from_real(&[0., 0., 1.]).unwrap();
        assert!(continue_inverse(&p, &[c(1., 0.), c(4., 0.)], c(2., 0.)).is_err());
    }

    #[test]
    fn path_through_critical_value_fails() {
        let p = PolynomialSpec::from_real(&[0., 0., 1.]).unwrap();
        let r = continue_inverse(&p, &[c(1., 0.), c(-1., 0.)], c(1., 0.));
        assert!(matches!(r, Err(Error::NumericFailure { .. })));
    }
}
