//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::f64::consts::{E, PI, TAU};
use std::time::{Duration, Instant};

use logrs::caratheodory::{convergence_threshold, mutual_embedding_test, SurfaceFamily};
use logrs::metric::cone_oracle_distance;
use logrs::surface::monodromy_at_infinity;
use logrs::uniformization::{chart_uniformization, ChartFamilyKind};
use logrs::{
    cone_distance, distance, loop_order, make_logarithm, make_nth_root, make_plane,
    make_polynomial, ramification_points, CompactRegion, Complex, LoopOrder, Monodromy, Order,
    PolynomialSpec, SheetComplex, SheetDomain, SlitBranch, SurfacePoint,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(())
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = logrs_cli::main_with(
        std::iter::once("logrs").chain(args.iter().copied()),
        &mut std::io::empty(),
        &mut out,
        &mut err,
        None,
    );
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    String::from_utf8(out).map_err(|e| e.to_string())
}

/// `(n, sup_error)` pairs from an `euler` CSV table.
fn euler_rows(args: &[&str]) -> Result<Vec<(u32, f64)>, String> {
    let csv = run_cli(args)?;
    let mut lines = csv.lines();
    if lines.next() != Some("family,r,n,sup_error,arg_max_re,arg_max_im") {
        return Err("unexpected CSV header".into());
    }
    lines
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let n = f[2].parse().map_err(|_| format!("bad n in {l}"))?;
            let e = f[3].parse().map_err(|_| format!("bad sup_error in {l}"))?;
            Ok((n, e))
        })
        .collect()
}

fn euler_table() -> Outcome {
    let start = Instant::now();
    let rows = euler_rows(&["euler", "--radii", "1", "--n-list", "10,100,1000"])?;
    within(Duration::from_secs(1), start)?;
    let quoted = [0.1245394, 0.0134680, 0.0013579];
    let mut worst = 0.0f64;
    for (i, &(n, e)) in rows.iter().enumerate() {
        let closed = E - (1.0 + 1.0 / n as f64).powi(n as i32);
        worst = worst.max((e - closed).abs());
        if (e - quoted[i]).abs() > 5e-8 {
            return Err(format!("n={n}: {e} far from quoted {}", quoted[i]));
        }
    }
    check(
        rows.len() == 3 && worst < 1e-9,
        format!("3 rows, max |err - closed form| = {worst:.2e}"),
    )
}

fn euler_rate() -> Outcome {
    let start = Instant::now();
    let rows = euler_rows(&["euler", "--radii", "1", "--n-list", "100,1000"])?;
    within(Duration::from_secs(1), start)?;
    let scaled: Vec<f64> = rows.iter().map(|&(n, e)| n as f64 * e).collect();
    check(
        rows.len() == 2 && scaled.iter().all(|v| (1.22..=1.50).contains(v)),
        format!("n * sup_error = {scaled:?}"),
    )
}

fn scaled_family() -> Outcome {
    let rows = euler_rows(&[
        "euler",
        "--family",
        "scaled-log",
        "--radii",
        "1",
        "--n-list",
        "10,100",
    ])?;
    let quoted = [0.0517091808, 0.0050167084];
    let mut worst = 0.0f64;
    for (i, &(n, e)) in rows.iter().enumerate() {
        let n = n as f64;
        let closed = n * (1.0 / n).exp_m1() - 1.0;
        worst = worst.max((e - closed).abs()).max((e - quoted[i]).abs());
    }
    check(
        rows.len() == 2 && worst < 1e-9,
        format!("max deviation {worst:.2e}"),
    )
}

fn covering_order() -> Outcome {
    let start = Instant::now();
    for n in 2..=12u32 {
        let s = make_nth_root(n).map_err(|e| e.to_string())?;
        let r = &ramification_points(&s)[0];
        let got = loop_order(&s, r, 1.0, 50).map_err(|e| e.to_string())?;
        if got != LoopOrder::Finite(n) {
            return Err(format!("nth_root({n}) gave {got:?}"));
        }
    }
    let log = make_logarithm();
    let got =
        loop_order(&log, &ramification_points(&log)[0], 1.0, 50).map_err(|e| e.to_string())?;
    within(Duration::from_secs(1), start)?;
    check(
        got == LoopOrder::InfiniteUpToBound(50),
        format!("n in 2..=12 exact, logarithm {got:?}"),
    )
}

fn random_point(rng: &mut ChaCha8Rng, s: &SheetComplex, sheets: (i64, i64)) -> SurfacePoint {
    loop {
        let w = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        if w.norm() < 1e-3 || s.slit_at(w).is_some() {
            continue;
        }
        let sheet = rng.random_range(sheets.0..=sheets.1);
        return s.point(sheet, w).expect("generic point");
    }
}

fn surfaces_for_sampling() -> Vec<(String, SheetComplex, (i64, i64))> {
    let mut v: Vec<_> = [2u32, 3, 5, 8]
        .iter()
        .map(|&n| {
            (
                format!("nth_root({n})"),
                make_nth_root(n).unwrap(),
                (0, n as i64 - 1),
            )
        })
        .collect();
    v.push(("logarithm".into(), make_logarithm(), (-6, 6)));
    v
}

/// Shortest path on a polar mesh of a cone with apex at 0. Angles are
/// absolute (unwrapped); `periodic` closes the angular direction for a finite
/// cone. Node `(k, j)` sits at radius `k*h` and angle offset `j*dphi`.
struct PolarMesh {
    rings: usize,
    spokes: usize,
    h: f64,
    dphi: f64,
    periodic: bool,
}

impl PolarMesh {
    fn node(&self, k: usize, j: usize) -> usize {
        1 + (k - 1) * self.spokes + j
    }

    fn shortest(&self, from: (usize, usize), to: (usize, usize)) -> f64 {
        let total = 1 + self.rings * self.spokes;
        let mut dist = vec![f64::INFINITY; total];
        let mut heap = BinaryHeap::new();
        let src = self.node(from.0, from.1);
        let dst = self.node(to.0, to.1);
        dist[src] = 0.0;
        heap.push(Reverse((ordered(0.0), src)));
        let stencil: [(i64, i64); 8] = [
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
        ];
        while let Some(Reverse((d, u))) = heap.pop() {
            let d = f64::from_bits(d);
            if d > dist[u] {
                continue;
            }
            if u == dst {
                return d;
            }
            let mut relax = |v: usize, len: f64, heap: &mut BinaryHeap<_>| {
                if d + len < dist[v] {
                    dist[v] = d + len;
                    heap.push(Reverse((ordered(d + len), v)));
                }
            };
            if u == 0 {
                for j in 0..self.spokes {
                    relax(self.node(1, j), self.h, &mut heap);
                }
                continue;
            }
            let k = (u - 1) / self.spokes + 1;
            let j = (u - 1) % self.spokes;
            if k == 1 {
                relax(0, self.h, &mut heap);
            }
            for (dk, dj) in stencil {
                let nk = k as i64 + dk;
                if nk < 1 || nk > self.rings as i64 {
                    continue;
                }
                let mut nj = j as i64 + dj;
                if self.periodic {
                    nj = nj.rem_euclid(self.spokes as i64);
                } else if nj < 0 || nj >= self.spokes as i64 {
                    continue;
                }
                let len = cone_distance(
                    k as f64 * self.h,
                    nk as f64 * self.h,
                    self.dphi * dj.abs() as f64,
                )
                .unwrap();
                relax(self.node(nk as usize, nj as usize), len, &mut heap);
            }
        }
        f64::INFINITY
    }
}

/// Order-preserving key for nonnegative floats.
fn ordered(x: f64) -> u64 {
    x.to_bits()
}

fn distance_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for (name, s, sheets) in surfaces_for_sampling() {
        for _ in 0..200 {
            let p = random_point(&mut rng, &s, sheets);
            let q = random_point(&mut rng, &s, sheets);
            let d = distance(&s, &p, &q).map_err(|e| e.to_string())?.value;
            let oracle = cone_oracle_distance(&s, &p, &q).ok_or(format!("{name}: no oracle"))?;
            worst = worst.max((d - oracle).abs());
        }
    }
    if worst >= 1e-9 {
        return Err(format!("max |distance - cone oracle| = {worst:.2e}"));
    }

    // Cube root: total angle 6*pi. Sheet s covers absolute angles (2*pi*s - pi, 2*pi*s + pi].
    let mesh = PolarMesh {
        rings: 100,
        spokes: 1200,
        h: 0.025,
        dphi: 6.0 * PI / 1200.0,
        periodic: true,
    };
    let idx = |abs_angle: f64, phi0: f64| ((abs_angle - phi0) / mesh.dphi).round() as usize;
    let cube = make_nth_root(3).unwrap();
    let exact = distance(
        &cube,
        &cube.point(0, c(0., 1.)).unwrap(),
        &cube.point(1, c(0., 1.)).unwrap(),
    )
    .map_err(|e| e.to_string())?
    .value;
    let ring = (1.0 / mesh.h).round() as usize;
    let m1 = mesh.shortest((ring, idx(PI / 2.0, 0.0)), (ring, idx(PI / 2.0 + TAU, 0.0)));

    // Logarithm: absolute angles from -3*pi to 13*pi cover sheets -1..=6.
    let phi0 = -3.0 * PI;
    let lmesh = PolarMesh {
        rings: 100,
        spokes: 1601,
        h: 0.025,
        dphi: PI / 100.0,
        periodic: false,
    };
    let lidx = |a: f64| ((a - phi0) / lmesh.dphi).round() as usize;
    let log = make_logarithm();
    let exact_log = distance(
        &log,
        &log.point(0, c(1., 0.)).unwrap(),
        &log.point(5, c(1., 0.)).unwrap(),
    )
    .map_err(|e| e.to_string())?
    .value;
    let m2 = lmesh.shortest((ring, lidx(0.0)), (ring, lidx(10.0 * PI)));
    within(Duration::from_secs(30), start)?;
    check(
        (exact - 2.0).abs() < 1e-9 && (m1 - exact).abs() < 1e-3 && (exact_log - 2.0).abs() < 1e-9 && (m2 - exact_log).abs() < 1e-3,
        format!(
            "1000 pairs max |delta| = {worst:.2e}; mesh {m1:.6} vs {exact} on nth_root(3), {m2:.6} vs {exact_log} on logarithm"
        ),
    )
}

fn lipschitz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut surfaces = surfaces_for_sampling();
    surfaces.push(("plane".into(), make_plane(), (0, 0)));
    let cubic = make_polynomial(&PolynomialSpec::from_real(&[0., -3., 0., 1.]).unwrap()).unwrap();
    surfaces.push(("z^3-3z".into(), cubic, (0, 2)));
    let mut worst = f64::INFINITY;
    for (_, s, sheets) in &surfaces {
        for _ in 0..500 {
            let p = random_point(&mut rng, s, *sheets);
            let q = random_point(&mut rng, s, *sheets);
            let d = distance(s, &p, &q).map_err(|e| e.to_string())?.value;
            worst = worst.min(d - (p.w - q.w).norm());
        }
    }
    check(
        worst >= -1e-12,
        format!(
            "{} surfaces x 500 pairs, min(d - |dw|) = {worst:.2e}",
            surfaces.len()
        ),
    )
}

fn is_single_cycle(m: &Monodromy, d: usize) -> bool {
    match m {
        Monodromy::Cycles(cs) => {
            let long: Vec<_> = cs.iter().filter(|c| c.len() > 1).collect();
            long.len() == 1 && long[0].len() == d
        }
        _ => false,
    }
}

fn polynomial_builder() -> Outcome {
    let start = Instant::now();
    let s = make_polynomial(&PolynomialSpec::from_real(&[0., -3., 0., 1.]).unwrap())
        .map_err(|e| e.to_string())?;
    let mut pts: Vec<(Complex, Order)> = ramification_points(&s)
        .iter()
        .map(|r| (r.w, r.order))
        .collect();
    pts.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
    let cubic_ok = pts.len() == 2
        && pts.iter().all(|p| p.1 == Order::Finite(2))
        && (pts[0].0 - c(-2., 0.)).norm() < 1e-9
        && (pts[1].0 - c(2., 0.)).norm() < 1e-9;
    if !cubic_ok {
        return Err(format!("z^3-3z ramification {pts:?}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut built = 0;
    let mut attempts = 0;
    while built < 20 {
        attempts += 1;
        if attempts > 200 {
            return Err("could not draw 20 polynomials with separated critical values".into());
        }
        let d = rng.random_range(2..=6usize);
        let coeffs: Vec<Complex> = (0..=d)
            .map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
            .collect();
        let Ok(p) = PolynomialSpec::new(coeffs) else {
            continue;
        };
        let Ok(s) = make_polynomial(&p) else { continue };
        let total: u32 = ramification_points(&s)
            .iter()
            .map(|r| match r.order {
                Order::Finite(k) => k - 1,
                Order::Infinite => u32::MAX / 4,
            })
            .sum();
        if total as usize != d - 1 {
            return Err(format!("degree {d}: sum(order - 1) = {total}"));
        }
        match monodromy_at_infinity(&s) {
            Some(m) if is_single_cycle(&m, d) => {}
            other => return Err(format!("degree {d}: monodromy at infinity {other:?}")),
        }
        built += 1;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!(
        "z^3-3z ok; 20 random polynomials ok ({attempts} draws)"
    ))
}

fn caratheodory_thresholds() -> Outcome {
    let log = make_logarithm();
    let family = SurfaceFamily::nth_root_to_log();
    let mut found = Vec::new();
    for m in 1..=3i64 {
        let k = CompactRegion::truncated_annulus(
            &log,
            (-m, m),
            0.1,
            2.0,
            log.point(0, c(1., 0.)).unwrap(),
        )
        .map_err(|e| e.to_string())?;
        let rep = convergence_threshold(&k, &family, 2 * m as u32 + 3)
            .map_err(|e| format!("m={m}: {e}"))?;
        if rep.threshold != 2 * m as u32 + 1 || !rep.monotone {
            return Err(format!(
                "m={m}: threshold {} monotone {}",
                rep.threshold, rep.monotone
            ));
        }
        found.push(rep.threshold);
    }
    Ok(format!("thresholds {found:?} for m = 1, 2, 3, monotone"))
}

fn uniqueness() -> Outcome {
    let log = make_logarithm();
    let a = mutual_embedding_test(
        &log,
        &log.point(0, c(1., 0.)).unwrap(),
        &log,
        &log.point(7, c(1., 0.)).unwrap(),
        &[1.0, 2.0],
    )
    .map_err(|e| e.to_string())?;
    let cube = make_nth_root(3).unwrap();
    let z = cube.point(0, c(1., 0.)).unwrap();
    let mut presentations = Vec::new();
    for cycle in [vec![1, 2, 0], vec![2, 0, 1], vec![0, 2, 1]] {
        let s = SheetComplex::new(
            SheetDomain::Finite(3),
            vec![SlitBranch::new(
                c(0., 0.),
                PI,
                Monodromy::Cycles(vec![cycle]),
            )],
            "cube root presentation",
        )
        .map_err(|e| e.to_string())?;
        let zb = s.point(1, c(1., 0.)).unwrap();
        presentations.push(
            mutual_embedding_test(&cube, &z, &s, &zb, &[1.0, 2.0]).map_err(|e| e.to_string())?,
        );
    }
    let two = make_nth_root(2).unwrap();
    let b = mutual_embedding_test(&two, &two.point(0, c(1., 0.)).unwrap(), &cube, &z, &[2.0])
        .map_err(|e| e.to_string())?;
    check(
        a && presentations.iter().all(|&x| x) && !b,
        format!("logarithm vs sheet 7: {a}; cube root presentations: {presentations:?}; sqrt vs cube root: {b}"),
    )
}

fn normalization() -> Outcome {
    let mut worst = 0.0f64;
    for kind in [
        ChartFamilyKind::NthRoot { base: c(1., 0.) },
        ChartFamilyKind::ScaledLogRecentred,
    ] {
        let f = chart_uniformization(kind).map_err(|e| e.to_string())?;
        for n in 1..=10_000u32 {
            let d = f.derivative_at_zero(n).map_err(|e| format!("n={n}: {e}"))?;
            worst = worst.max((d - c(1., 0.)).norm());
        }
    }
    check(
        worst < 1e-8,
        format!("2 families, n = 1..=10000, max |h'(0) - 1| = {worst:.2e}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("euler_table", euler_table),
        ("euler_rate", euler_rate),
        ("scaled_family", scaled_family),
        ("covering_order", covering_order),
        ("distance_oracle", distance_oracle),
        ("lipschitz", lipschitz),
        ("polynomial_builder", polynomial_builder),
        ("caratheodory_thresholds", caratheodory_thresholds),
        ("uniqueness", uniqueness),
        ("normalization", normalization),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{secs:.2}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
