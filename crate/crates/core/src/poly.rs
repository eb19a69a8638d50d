//! Complex polynomials and a simultaneous (Aberth–Ehrlich) root finder.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Complex;

/// A polynomial of degree at least 2, coefficients listed constant term first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex>", into = "Vec<Complex>")]
pub struct PolynomialSpec {
    coefficients: Vec<Complex>,
}

impl TryFrom<Vec<Complex>> for PolynomialSpec {
    type Error = Error;
    fn try_from(c: Vec<Complex>) -> Result<Self> {
        PolynomialSpec::new(c)
    }
}

impl From<PolynomialSpec> for Vec<Complex> {
    fn from(p: PolynomialSpec) -> Self {
        p.coefficients
    }
}

impl PolynomialSpec {
    pub fn new(coefficients: Vec<Complex>) -> Result<Self> {
        if coefficients
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::invalid("polynomial coefficient is not finite"));
        }
        if coefficients.len() < 3 {
            return Err(Error::invalid("polynomial degree must be at least 2"));
        }
        if coefficients.last().is_some_and(|c| c.norm() == 0.0) {
            return Err(Error::invalid("leading coefficient is zero"));
        }
        Ok(PolynomialSpec { coefficients })
    }

    /// Builds from real coefficients, constant term first.
    pub fn from_real(coefficients: &[f64]) -> Result<Self> {
        Self::new(coefficients.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    pub fn coefficients(&self) -> &[Complex] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, z: Complex) -> Complex {
        horner(&self.coefficients, z)
    }

    pub fn derivative_at(&self, z: Complex) -> Complex {
        horner_derivative(&self.coefficients, z).1
    }

    /// Value and first derivative together.
    pub fn eval_with_derivative(&self, z: Complex) -> (Complex, Complex) {
        horner_derivative(&self.coefficients, z)
    }

    /// `Σ |a_k| max(1, |z|)^k`, the scale against which residuals are measured.
    pub fn magnitude_at(&self, z: Complex) -> f64 {
        magnitude(&self.coefficients, z)
    }

    pub(crate) fn derivative_coefficients(&self) -> Vec<Complex> {
        derivative(&self.coefficients)
    }
}

pub(crate) fn horner(coeffs: &[Complex], z: Complex) -> Complex {
    coeffs
        .iter()
        .rev()
        .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub(crate) fn horner_derivative(coeffs: &[Complex], z: Complex) -> (Complex, Complex) {
    let mut p = Complex::new(0.0, 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub(crate) fn derivative(coeffs: &[Complex]) -> Vec<Complex> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

fn magnitude(coeffs: &[Complex], z: Complex) -> f64 {
    let r = z.norm().max(1.0);
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// Relative backward error of `z` as a root of `coeffs`.
pub(crate) fn relative_residual(coeffs: &[Complex], z: Complex) -> f64 {
    let m = magnitude(coeffs, z);
    if m == 0.0 {
        0.0
    } else {
        horner(coeffs, z).norm() / m
    }
}

/// All roots of the polynomial with the given coefficients (constant term
/// first, nonzero leading coefficient) by Aberth–Ehrlich iteration.
///
/// Fails with a numeric failure when some root's relative residual exceeds
/// `tol_residual` after the iteration budget.
pub fn roots(coeffs: &[Complex], tol_residual: f64) -> Result<Vec<Complex>> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    if lead.norm() == 0.0 {
        return Err(Error::invalid("leading coefficient is zero"));
    }
    if deg == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }
    // Initial guesses on a circle of the Fujiwara-type radius, rotated off the axes.
    let radius = (0..deg)
        .map(|k| (coeffs[k] / lead).norm().powf(1.0 / (deg - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex> = (0..deg)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / deg as f64 + 0.4;
            Complex::from_polar(radius, angle)
        })
        .collect();

    let mut converged = vec![false; deg];
    for _ in 0..800 {
        let mut all = true;
        for i in 0..deg {
            if converged[i] {
                continue;
            }
            let (p, dp) = horner_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex = (0..deg)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 || !denom.is_finite() {
                ratio
            } else {
                ratio / denom
            };
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                converged[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    // Newton polishing where it helps; multiple roots stay at Aberth accuracy.
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner_derivative(coeffs, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = *zi - p / dp;
            if cand.is_finite() && relative_residual(coeffs, cand) < relative_residual(coeffs, *zi)
            {
                *zi = cand;
            } else {
                break;
            }
        }
    }
    let worst = z
        .iter()
        .map(|&zi| relative_residual(coeffs, zi))
        .fold(0.0, f64::max);
    if worst > tol_residual {
        return Err(Error::numeric("root finder did not converge", worst));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn cubic_roots() {
        // (z-1)(z+2)(z-i) expanded
        let r = [c(1., 0.), c(-2., 0.), c(0., 1.)];
        let mut coeffs = vec![c(1., 0.)];
        for root in r {
            let mut next = vec![c(0., 0.); coeffs.len() + 1];
            for (k, &a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * root;
            }
            coeffs = next;
        }
        let found = roots(&coeffs, 1e-12).unwrap();
        for root in r {
            let best = found
                .iter()
                .map(|f| (f - root).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12, "{root} missed by {best}");
        }
    }

    #[test]
    fn derivative_of_cubic() {
        let p = PolynomialSpec::from_real(&[0., -3., 0., 1.]).unwrap();
        let (v, d) = p.eval_with_derivative(c(1., 0.));
        assert_eq!(v, c(-2., 0.));
        assert_eq!(d, c(0., 0.));
        assert_eq!(
            p.derivative_coefficients(),
            vec![c(-3., 0.), c(0., 0.), c(3., 0.)]
        );
    }

    #[test]
    fn double_root_has_small_backward_error() {
        let found = roots(&[c(0., 0.), c(0., 0.), c(3., 0.)], 1e-12).unwrap();
        assert_eq!(found.len(), 2);
        for z in found {
            assert!(z.norm() < 1e-6);
        }
    }

    #[test]
    fn degenerate_specs_are_rejected() {
        assert!(PolynomialSpec::from_real(&[1., 2., 0.]).is_err());
        assert!(PolynomialSpec::from_real(&[1., 2.]).is_err());
    }
}
