//! Polynomial surfaces: `π = p` on `ℂ` minus the critical points, presented
//! with one slit per critical value and sheets labeled by the preimages of a
//! regular basepoint.

use std::f64::consts::{PI, TAU};

use super::{Monodromy, SheetComplex, SheetDomain, SlitBranch};
use crate::continuation::inverse::InverseContinuation;
use crate::error::{Error, Result};
use crate::geom::point_ray_distance;
use crate::poly::{self, PolynomialSpec};
use crate::tolerance::Tolerances;
use crate::{Complex, Sheet};

/// Golden angle in radians; successive multiples spread evenly over the circle.
const GOLDEN_ANGLE: f64 = PI * (3.0 - 2.236_067_977_499_79);
const LOOP_VERTICES: usize = 64;
const GRID: usize = 21;

/// A critical point of `p` with its multiplicity as a root of `p′`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint {
    pub z: Complex,
    pub multiplicity: u32,
    pub value: Complex,
}

/// A polynomial surface together with the data used to label its sheets.
#[derive(Debug, Clone)]
pub struct PolynomialSurface {
    pub surface: SheetComplex,
    pub polynomial: PolynomialSpec,
    pub critical_points: Vec<CriticalPoint>,
    /// Regular value at which sheets are labeled.
    pub basepoint: Complex,
    /// Preimages of the basepoint, sorted; sheet `k` is the inverse branch through `preimages[k]`.
    pub preimages: Vec<Complex>,
    pub slit_angle: f64,
}

pub fn make_polynomial(p: &PolynomialSpec) -> Result<SheetComplex> {
    Ok(make_polynomial_with(p, Tolerances::default())?.surface)
}

pub fn make_polynomial_with(p: &PolynomialSpec, tol: Tolerances) -> Result<PolynomialSurface> {
    let d = p.degree();
    let crit = critical_points(p, &tol)?;
    let values: Vec<Complex> = crit.iter().map(|c| c.value).collect();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if (values[i] - values[j]).norm() <= tol.branch {
                return Err(Error::unsupported(format!(
                    "critical points {} and {} share the critical value {}",
                    crit[i].z, crit[j].z, values[i]
                )));
            }
        }
    }

    let theta = choose_slit_angle(&values, tol.slit)?;
    let dir = Complex::from_polar(1.0, theta);
    let w0 = choose_basepoint(&values, dir);
    let preimages = sorted_preimages(p, w0, &tol)?;

    let engine = InverseContinuation::new(p, crit.iter().map(|c| c.z).collect(), tol);
    let scale = scale_of(&values);
    // rotated frame in which every slit points along +x
    let rot = dir.conj();
    let x_min = values
        .iter()
        .map(|v| (v * rot).re)
        .fold((w0 * rot).re, f64::min)
        - scale
        - 1.0;

    let mut branches = Vec::with_capacity(crit.len());
    for (j, cp) in crit.iter().enumerate() {
        let v = cp.value;
        let rho = loop_radius(j, &values, dir, scale);
        let start = v - dir * rho;
        let approach = approach_path(w0, start, rot, x_min);
        let at_start: Vec<Complex> = preimages
            .iter()
            .map(|&z| engine.continue_along(&approach, z))
            .collect::<Result<_>>()?;
        check_distinct(&at_start, "loop start")?;

        let circle: Vec<Complex> = (0..=LOOP_VERTICES)
            .map(|k| {
                v + Complex::from_polar(rho, theta + PI + TAU * k as f64 / LOOP_VERTICES as f64)
            })
            .collect();
        let mut perm = vec![usize::MAX; d];
        for (k, &z) in at_start.iter().enumerate() {
            let end = engine.continue_along(&circle, z)?;
            perm[k] = match_preimage(end, &at_start)?;
        }
        let mut seen = vec![false; d];
        for &m in &perm {
            if seen[m] {
                return Err(Error::numeric(
                    "loop continuation is not a permutation",
                    0.0,
                ));
            }
            seen[m] = true;
        }
        let monodromy = cycles_of(&perm);
        let nontrivial: Vec<usize> = match &monodromy {
            Monodromy::Cycles(c) => c.iter().map(|c| c.len()).collect(),
            Monodromy::Shift(_) => unreachable!(),
        };
        if nontrivial != [cp.multiplicity as usize + 1] {
            return Err(Error::numeric(
                format!(
                    "monodromy around critical value {v} has cycle lengths {nontrivial:?}, expected one cycle of length {}",
                    cp.multiplicity + 1
                ),
                0.0,
            ));
        }
        branches.push(SlitBranch::new(v, theta, monodromy));
    }

    let surface =
        SheetComplex::with_tolerances(SheetDomain::Finite(d as u32), branches, "polynomial", tol)?;
    Ok(PolynomialSurface {
        surface,
        polynomial: p.clone(),
        critical_points: crit,
        basepoint: w0,
        preimages,
        slit_angle: theta,
    })
}

/// Critical points grouped with multiplicity. Root approximations sharing a
/// critical value and lying close together are one multiple critical point.
pub(crate) fn critical_points(p: &PolynomialSpec, tol: &Tolerances) -> Result<Vec<CriticalPoint>> {
    let dp = p.derivative_coefficients();
    let approx = poly::roots(&dp, tol.root)?;
    let mut groups: Vec<Vec<Complex>> = Vec::new();
    'outer: for z in approx {
        let v = p.eval(z);
        for g in groups.iter_mut() {
            let rep = g[0];
            let cluster = 1e-3 * (1.0 + rep.norm());
            if (p.eval(rep) - v).norm() <= tol.branch.max(1e-12 * p.magnitude_at(z))
                && (rep - z).norm() <= cluster
            {
                g.push(z);
                continue 'outer;
            }
        }
        groups.push(vec![z]);
    }
    let mut out: Vec<CriticalPoint> = groups
        .into_iter()
        .map(|g| {
            let z = g.iter().sum::<Complex>() / g.len() as f64;
            CriticalPoint {
                z,
                multiplicity: g.len() as u32,
                value: p.eval(z),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    Ok(out)
}

fn scale_of(values: &[Complex]) -> f64 {
    let mut s: f64 = 1.0;
    for a in values {
        for b in values {
            s = s.max((a - b).norm());
        }
    }
    s
}

fn clearance(values: &[Complex], dir: Complex) -> f64 {
    let mut m = f64::INFINITY;
    for (j, &a) in values.iter().enumerate() {
        for (k, &b) in values.iter().enumerate() {
            if j != k {
                m = m.min(point_ray_distance(b, a, dir));
            }
        }
    }
    m
}

fn choose_slit_angle(values: &[Complex], tol_slit: f64) -> Result<f64> {
    for k in 0..4096 {
        let theta = (GOLDEN_ANGLE * k as f64).rem_euclid(TAU);
        if clearance(values, Complex::from_polar(1.0, theta)) > tol_slit {
            return Ok(theta);
        }
    }
    Err(Error::numeric(
        "no slit direction clears the critical values",
        0.0,
    ))
}

/// Grid point maximizing the distance to the critical values and their slits.
fn choose_basepoint(values: &[Complex], dir: Complex) -> Complex {
    let n = values.len() as f64;
    let center = values.iter().sum::<Complex>() / n;
    let half = 1.5
        * values
            .iter()
            .map(|v| (v - center).norm())
            .fold(1.0, f64::max);
    let mut best = (f64::NEG_INFINITY, center);
    for i in 0..GRID {
        for j in 0..GRID {
            let x = -1.0 + 2.0 * i as f64 / (GRID - 1) as f64;
            let y = -1.0 + 2.0 * j as f64 / (GRID - 1) as f64;
            let w = center + Complex::new(x, y) * half;
            let score = values
                .iter()
                .map(|&v| (w - v).norm().min(point_ray_distance(w, v, dir)))
                .fold(f64::INFINITY, f64::min);
            if score > best.0 {
                best = (score, w);
            }
        }
    }
    best.1
}

fn sorted_preimages(p: &PolynomialSpec, w0: Complex, tol: &Tolerances) -> Result<Vec<Complex>> {
    let mut shifted = p.coefficients().to_vec();
    shifted[0] -= w0;
    let mut z = poly::roots(&shifted, tol.root)?;
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    check_distinct(&z, "basepoint preimages")?;
    Ok(z)
}

/// Radius of the monodromy loop around `values[j]`: small enough that the
/// loop meets no other critical value and no other slit.
fn loop_radius(j: usize, values: &[Complex], dir: Complex, scale: f64) -> f64 {
    let v = values[j];
    let mut r = 0.5 * scale;
    for (k, &u) in values.iter().enumerate() {
        if k != j {
            r = r.min((u - v).norm()).min(point_ray_distance(v, u, dir));
        }
    }
    0.4 * r
}

/// Path from `w0` to `target` that crosses no slit: out to the far side
/// opposite the slit direction, across, and back in along the target's height.
fn approach_path(w0: Complex, target: Complex, rot: Complex, x_min: f64) -> Vec<Complex> {
    let unrot = rot.conj();
    let a = w0 * rot;
    let b = target * rot;
    let mut pts = vec![a, Complex::new(x_min, a.im), Complex::new(x_min, b.im), b];
    pts.dedup_by(|p, q| (*p - *q).norm() < 1e-12);
    pts.into_iter().map(|p| p * unrot).collect()
}

fn check_distinct(z: &[Complex], what: &str) -> Result<()> {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if (z[i] - z[j]).norm() < 1e-10 * (1.0 + z[i].norm()) {
                return Err(Error::numeric(
                    format!("{what} are not distinct"),
                    (z[i] - z[j]).norm(),
                ));
            }
        }
    }
    Ok(())
}

fn match_preimage(z: Complex, candidates: &[Complex]) -> Result<usize> {
    let mut d: Vec<(f64, usize)> = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| ((z - c).norm(), i))
        .collect();
    d.sort_by(|a, b| a.0.total_cmp(&b.0));
    let nearest = d[0];
    let second = d.get(1).map(|x| x.0).unwrap_or(f64::INFINITY);
    if nearest.0 > 1e-6 * (1.0 + z.norm()) || nearest.0 * 1e3 > second {
        return Err(Error::numeric(
            "continued preimage does not match a sheet",
            nearest.0,
        ));
    }
    Ok(nearest.1)
}

fn cycles_of(perm: &[usize]) -> Monodromy {
    let mut seen = vec![false; perm.len()];
    let mut cycles = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            c.push(x as Sheet);
            x = perm[x];
        }
        if c.len() >= 2 {
            cycles.push(c);
        }
    }
    Monodromy::Cycles(cycles).normalized()
}

/// Product of the branch permutations in the order a large counterclockwise
/// circle crosses the slits (by slit angle, then by transverse offset).
/// `None` for infinite sheet domains.
pub fn monodromy_at_infinity(s: &SheetComplex) -> Option<Monodromy> {
    let n = s.sheet_domain().count()? as usize;
    let mut order: Vec<usize> = (0..s.branches().len()).collect();
    order.sort_by(|&a, &b| {
        let (ba, bb) = (&s.branches()[a], &s.branches()[b]);
        ba.slit_angle.total_cmp(&bb.slit_angle).then(
            ba.side_value(Complex::new(0.0, 0.0))
                .total_cmp(&bb.side_value(Complex::new(0.0, 0.0)))
                .reverse(),
        )
    });
    let perm: Vec<usize> = (0..n)
        .map(|start| {
            let mut x = start as Sheet;
            for &j in &order {
                x = s.branches()[j].monodromy.apply(x);
            }
            x as usize
        })
        .collect();
    Some(cycles_of(&perm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{ramification_points, Order};

    #[test]
    fn z_squared_is_the_square_root_surface() {
        let p = PolynomialSpec::from_real(&[0., 0., 1.]).unwrap();
        let s = make_polynomial(&p).unwrap();
        assert_eq!(s.branches().len(), 1);
        assert!(s.branches()[0].position.norm() < 1e-12);
        assert_eq!(
            s.branches()[0].monodromy,
            Monodromy::Cycles(vec![vec![0, 1]])
        );
    }

    #[test]
    fn z_cubed_has_a_three_cycle() {
        let p = PolynomialSpec::from_real(&[0., 0., 0., 1.]).unwrap();
        let s = make_polynomial(&p).unwrap();
        let r = ramification_points(&s);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].order, Order::Finite(3));
        assert!(r[0].w.norm() < 1e-9);
    }

    #[test]
    fn cubic_with_two_critical_values() {
        let p = PolynomialSpec::from_real(&[0., -3., 0., 1.]).unwrap();
        let ps = make_polynomial_with(&p, Tolerances::default()).unwrap();
        let r = ramification_points(&ps.surface);
        assert_eq!(r.len(), 2);
        assert!((r[0].w - Complex::new(-2.0, 0.0)).norm() < 1e-9);
        assert!((r[1].w - Complex::new(2.0, 0.0)).norm() < 1e-9);
        assert!(r.iter().all(|x| x.order == Order::Finite(2)));
        let inf = monodromy_at_infinity(&ps.surface).unwrap();
        assert!(matches!(&inf, Monodromy::Cycles(c) if c.len() == 1 && c[0].len() == 3));
    }

    #[test]
    fn coincident_critical_values_are_rejected() {
        // z^4 - 2 z^2 has critical values 0, -1, -1
        let p = PolynomialSpec::from_real(&[0., 0., -2., 0., 1.]).unwrap();
        assert!(matches!(
            make_polynomial(&p),
            Err(Error::UnsupportedInput(_))
        ));
    }
}
