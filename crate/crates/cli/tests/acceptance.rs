//! Acceptance criteria 1 to 10, one `[PASS]` or `[FAIL]` line each.
//! Tolerances are fixed below; the process exits non-zero on any failure.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use holonorm::catalog::{FunctionHandle, Kind};
use holonorm::geometry::{classify, ConeClass, DomainSpec};
use holonorm::numerics::{cauchy_derivative, derivative, segment_integral, Tolerance};
use holonorm::probe::{estimate_sup, find_divergence_witness, ProbeConfig};
use holonorm::sampling::{random_bounded_hpoly, random_interior_points, random_unbounded_hpoly, rng};
use holonorm::spaces::{chain_bound, primitive, PRIMITIVE_TOL};
use holonorm::{favard_constant, lk_constant, verify_max_form};
use holonorm_cli::{run, ExperimentConfig};
use num_complex::Complex64;
use rand::Rng;

const K0_TOL: f64 = 1e-10;
const K1_TOL: f64 = 1e-9;
const CONSTANT_TIME: Duration = Duration::from_secs(1);
const SQRT2_TOL: f64 = 1e-9;
const LK_CEILING_TOL: f64 = 1e-9;
const LK_SLACK: f64 = 0.05;
const FIXTURE_REL: f64 = 0.01;
const RECESSION_TIME: Duration = Duration::from_secs(10);
const WITNESS_TIME: Duration = Duration::from_secs(5);
const WITNESS_THRESHOLD: f64 = 1e3;
const EXP_REL: f64 = 1e-9;
const MODULUS_REL: f64 = 1e-9;
const CHAIN_CASES: usize = 200;
const CAUCHY_REL: f64 = 1e-8;
const CAUCHY_MIN_DISTANCE: f64 = 0.1;
const PATH_ABS: f64 = 1e-9;
const LIPSCHITZ_PAIRS: usize = 1000;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn uhp_exp() -> FunctionHandle {
    FunctionHandle::directional_exp(-FRAC_PI_2)
}

fn favard() -> Check {
    let mut notes = Vec::new();
    for (n, exact, tol) in [(0, 1.0, K0_TOL), (1, FRAC_PI_2, K1_TOL)] {
        let start = Instant::now();
        let k = favard_constant(n, tol).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        ensure((k.value - exact).abs() <= tol, || format!("K_{n} = {} off by {:e}", k.value, (k.value - exact).abs()))?;
        ensure(k.tail_bound <= tol && k.lower() <= exact && exact <= k.upper(), || {
            format!("K_{n}: certified interval [{}, {}] misses {exact}", k.lower(), k.upper())
        })?;
        ensure(took < CONSTANT_TIME, || format!("K_{n} took {took:?}"))?;
        notes.push(format!("K_{n}={:.12} in {took:.1?}", k.value));
    }
    Ok(notes.join(", "))
}

fn kolmogorov() -> Check {
    let k = lk_constant(2, 1, SQRT2_TOL).map_err(|e| e.to_string())?;
    ensure((k.value - SQRT_2).abs() <= SQRT2_TOL, || format!("C(2,1) = {}", k.value))?;
    let mut count = 0;
    for n in 2..=12 {
        for j in 1..n {
            let v = lk_constant(n, j, 1e-10).map_err(|e| e.to_string())?.value;
            ensure((1.0..=FRAC_PI_2 + LK_CEILING_TOL).contains(&v), || format!("C({n},{j}) = {v}"))?;
            count += 1;
        }
    }
    Ok(format!("C(2,1)={:.12}, {count} constants in [1, pi/2]", k.value))
}

fn landau_kolmogorov() -> Check {
    let functions = [
        FunctionHandle::pole(c(0.0, -2.0)),
        uhp_exp(),
        FunctionHandle::constant(c(5.0, 0.0)),
        FunctionHandle::sum(vec![
            Kind::Pole { w: c(0.0, -1.0) },
            Kind::ScalarMultiple {
                factor: c(0.5, 0.0),
                inner: Box::new(Kind::DirectionalExp { theta: -FRAC_PI_2 }),
            },
        ]),
        FunctionHandle::scalar_multiple(c(0.0, 2.0), Kind::Pole { w: c(-1.0, -1.0) }),
    ];
    let domains = [
        DomainSpec::upper_half_plane(),
        DomainSpec::strip(0.0, 1.0).unwrap(),
        DomainSpec::quadrant(),
    ];
    let cfg = ProbeConfig::default();
    let mut checked = 0;
    for f in &functions {
        for d in &domains {
            for a1 in 0..=2u32 {
                for a2 in a1 + 2..=a1 + 4 {
                    for l in a1 + 1..a2 {
                        let r = verify_max_form(f, d, a1, l, a2, &cfg, LK_SLACK).map_err(|e| format!("{f} ({a1},{l},{a2}): {e}"))?;
                        ensure(r.pass, || format!("{f} ({a1},{l},{a2}): {} > {}", r.lhs, r.rhs))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    let pole = FunctionHandle::pole(c(0.0, -2.0));
    let uhp = DomainSpec::upper_half_plane();
    for (order, exact) in [(0, 0.5), (1, 0.25), (2, 0.25)] {
        let est = estimate_sup(&pole, order, &uhp, &cfg).map_err(|e| e.to_string())?.sup_estimate;
        ensure((est - exact).abs() <= FIXTURE_REL * exact, || format!("M_{order} probe {est} vs {exact}"))?;
    }
    Ok(format!("{checked} inequalities on 3 domains, pole fixture within 1%"))
}

fn recession() -> Check {
    let start = Instant::now();
    let mut r = rng(0);
    let mut checks = 0u64;
    for i in 0..50 {
        let d = random_unbounded_hpoly(&mut r);
        let cone = d.recession_cone().map_err(|e| e.to_string())?;
        let dirs = cone.sample_directions(16);
        ensure(!dirs.is_empty(), || format!("domain {i}: empty cone"))?;
        let points = random_interior_points(&d, 10, 1e-6, &mut r);
        ensure(points.len() == 10, || format!("domain {i}: only {} base points", points.len()))?;
        for p in &points {
            for h in &dirs {
                for t in [0.0, 1.0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6] {
                    checks += 1;
                    ensure(d.contains(p + h * t), || format!("domain {i}: {p} + {t}*{h} escapes"))?;
                }
            }
        }
    }
    let cone_of = |d: DomainSpec| d.recession_cone().unwrap();
    ensure(classify(&cone_of(DomainSpec::upper_half_plane())) == ConeClass::HalfPlane, || "half-plane class".into())?;
    ensure(classify(&cone_of(DomainSpec::unit_square())) == ConeClass::Bounded, || "square class".into())?;
    let strip = cone_of(DomainSpec::strip(0.0, 1.0).unwrap());
    ensure(classify(&strip) == ConeClass::StripLike, || format!("strip class {strip:?}"))?;
    let dirs = strip.sample_directions(16);
    ensure(dirs.len() == 2 && dirs.contains(&c(1.0, 0.0)) && dirs.contains(&c(-1.0, 0.0)), || format!("strip directions {dirs:?}"))?;
    match classify(&cone_of(DomainSpec::quadrant())) {
        ConeClass::ProperCone { angle_degrees: 90.0 } => {}
        other => return Err(format!("quadrant class {other:?}")),
    }
    let took = start.elapsed();
    ensure(took < RECESSION_TIME, || format!("took {took:?}"))?;
    Ok(format!("{checks} ray points inside, fixtures classified, {took:.1?}"))
}

fn witnesses() -> Check {
    let cfg = ProbeConfig::default();
    let start = Instant::now();
    let w = FunctionHandle::boundary_essential();
    let disc = DomainSpec::unit_disc();
    let wit = find_divergence_witness(&w, 1, &disc, WITNESS_THRESHOLD, &cfg)
        .map_err(|e| e.to_string())?
        .ok_or("no witness for w'")?;
    let took = start.elapsed();
    ensure(wit.is_valid_for(&disc) && took < WITNESS_TIME, || format!("w' witness invalid or slow ({took:?})"))?;
    let w1 = w.closed_form_derivative(1);
    for (z, m) in wit.points.iter().zip(&wit.moduli) {
        let again = w1.eval(*z).map_err(|e| e.to_string())?.norm();
        ensure((again - m).abs() <= 1e-9 * m, || format!("w' at {z}: {again} vs {m}"))?;
    }

    let mut worst = 0.0f64;
    for theta in [0.0, 0.7, -FRAC_PI_2, 2.5, PI] {
        let f = FunctionHandle::directional_exp(theta);
        for n in 1..=20 {
            let z = Complex64::from_polar(n as f64, theta);
            let m = f.eval(z).map_err(|e| e.to_string())?.norm();
            let exact = (n as f64).exp();
            worst = worst.max((m - exact).abs() / exact);
        }
    }
    ensure(worst <= EXP_REL, || format!("exp along rays: relative deviation {worst:e}"))?;

    let uhp = DomainSpec::upper_half_plane();
    for l in 1..=5 {
        let f = FunctionHandle::monomial(l + 1);
        let wit = find_divergence_witness(&f, l, &uhp, WITNESS_THRESHOLD, &cfg)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("no witness for z^{} order {l}", l + 1))?;
        ensure(wit.is_valid_for(&uhp), || format!("z^{} witness invalid", l + 1))?;
    }
    Ok(format!(
        "w' reached {:.4e} in {took:.1?}, exp rays within {worst:.1e}, z^(l+1) escalates for l<=5",
        wit.moduli.last().unwrap()
    ))
}

fn modulus_identity() -> Check {
    let mut r = rng(6);
    let region = DomainSpec::disc(c(0.0, 0.0), 6.0).unwrap();
    let points = random_interior_points(&region, 100, 0.0, &mut r);
    let mut worst = 0.0f64;
    for theta in [0.0, 1.0, -FRAC_PI_2, 2.9] {
        let f = FunctionHandle::directional_exp(theta);
        for z in &points {
            let base = f.eval(*z).map_err(|e| e.to_string())?.norm();
            for l in 0..=6 {
                let v = derivative(&f, l, *z, Tolerance::default()).map_err(|e| e.to_string())?.value.norm();
                worst = worst.max((v - base).abs() / base);
            }
        }
    }
    ensure(worst <= MODULUS_REL, || format!("relative deviation {worst:e}"))?;
    Ok(format!("max relative deviation {worst:.2e} over 100 points, l<=6"))
}

fn chain_bounds() -> Check {
    let cfg = ProbeConfig::default();
    let mut r = rng(47);
    let mut worst_ratio = 0.0f64;
    for i in 0..CHAIN_CASES {
        let d = random_bounded_hpoly(&mut r);
        let mut w = d.interior_point() + Complex64::from_polar(4.0, r.gen_range(0.0..std::f64::consts::TAU));
        while d.closure_distance(w) < 0.5 {
            w *= 1.5;
        }
        let f = match i % 6 {
            0 => FunctionHandle::pole(w),
            1 => FunctionHandle::sine(),
            2 => FunctionHandle::monomial(r.gen_range(1..=5)),
            3 => FunctionHandle::directional_exp(r.gen_range(0.0..std::f64::consts::TAU)),
            4 => FunctionHandle::sum(vec![Kind::Pole { w }, Kind::Sine]),
            _ => FunctionHandle::scalar_multiple(c(0.0, 3.0), Kind::Monomial { degree: 3 }),
        };
        let alpha = r.gen_range(1..=4u32);
        let l = r.gen_range(0..alpha);
        let z_o = random_interior_points(&d, 1, 0.0, &mut r)[0];
        let b = chain_bound(&f, l, alpha, &d, z_o, &cfg).map_err(|e| format!("case {i}: {e}"))?;
        ensure(b.pass, || format!("case {i} {f} l={l} alpha={alpha}: {} > {}", b.lhs, b.rhs))?;
        worst_ratio = worst_ratio.max(b.lhs / b.rhs);
    }
    let b = chain_bound(&FunctionHandle::monomial(2), 0, 2, &DomainSpec::unit_square(), c(0.5, 0.5), &cfg).map_err(|e| e.to_string())?;
    ensure((b.lhs - 2.0).abs() <= 0.02 && (b.rhs - 6.5).abs() <= 0.065, || format!("z^2 fixture lhs {} rhs {}", b.lhs, b.rhs))?;
    Ok(format!("{CHAIN_CASES} cases, worst lhs/rhs {worst_ratio:.3}; z^2 fixture lhs {:.6} rhs {:.6}", b.lhs, b.rhs))
}

fn cauchy_engine() -> Check {
    let catalog = [
        FunctionHandle::pole(c(1.5, -0.5)),
        FunctionHandle::pole(c(0.2, 0.3)),
        FunctionHandle::boundary_essential(),
        FunctionHandle::directional_exp(1.1),
        FunctionHandle::monomial(5),
        FunctionHandle::sine(),
        FunctionHandle::constant(c(-2.0, 0.5)),
        FunctionHandle::sum(vec![Kind::Pole { w: c(0.0, 2.0) }, Kind::Sine]),
        FunctionHandle::scalar_multiple(c(0.0, 3.0), Kind::Monomial { degree: 3 }),
    ];
    let mut r = rng(8);
    let disc = DomainSpec::unit_disc();
    let mut worst = 0.0f64;
    for f in &catalog {
        let mut points = Vec::new();
        while points.len() < 100 {
            let z = random_interior_points(&disc, 1, CAUCHY_MIN_DISTANCE, &mut r)[0];
            if f.singular_points().iter().all(|s| (z - s).norm() >= CAUCHY_MIN_DISTANCE) {
                points.push(z);
            }
        }
        for z in points {
            for l in 0..=8 {
                let exact = f.closed_form_derivative(l).eval(z).map_err(|e| e.to_string())?;
                let ci = cauchy_derivative(f, l, z, Tolerance::default()).map_err(|e| format!("{f} l={l} at {z}: {e}"))?;
                let rel = (ci.value - exact).norm() / exact.norm().max(1.0);
                worst = worst.max(rel);
                ensure(rel <= CAUCHY_REL, || format!("{f} l={l} at {z}: {} vs {exact}", ci.value))?;
            }
        }
    }
    Ok(format!("{} entries x 100 points x l<=8, worst {worst:.2e}", catalog.len()))
}

fn primitives() -> Check {
    let fixtures = [
        DomainSpec::unit_disc(),
        DomainSpec::unit_square(),
        DomainSpec::hpoly(&[(c(-1.0, 0.0), 0.0), (c(0.0, -1.0), 0.0), (c(1.0, 1.0), 2.0)]).unwrap(),
        random_bounded_hpoly(&mut rng(3)),
    ];
    let functions = [FunctionHandle::pole(c(3.0, 2.0)), FunctionHandle::directional_exp(0.8)];
    let mut r = rng(9);
    let mut worst_path = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for d in &fixtures {
        let base = d.interior_point();
        for f in &functions {
            let sup = f.closed_form_sup(d).ok_or("no closed-form sup")?;
            let pts = random_interior_points(d, 2 * LIPSCHITZ_PAIRS, 0.0, &mut r);
            ensure(pts.len() == 2 * LIPSCHITZ_PAIRS, || "too few sample points".into())?;
            let value = |z| primitive(f, base, z, d).map_err(|e| e.to_string());
            for (k, pair) in pts.chunks(2).enumerate() {
                let (z, w) = (pair[0], pair[1]);
                let (fz, fw) = (value(z)?, value(w)?);
                let gap = (fz - fw).norm();
                worst_ratio = worst_ratio.max(gap / (sup * (z - w).norm()));
                ensure(gap <= sup * (z - w).norm() * (1.0 + 1e-9), || format!("{f}: Lipschitz fails at {z}, {w}"))?;
                if k < 100 {
                    let via = fw + segment_integral(f, w, z, PRIMITIVE_TOL).map_err(|e| e.to_string())?;
                    worst_path = worst_path.max((fz - via).norm());
                }
            }
        }
    }
    ensure(worst_path <= PATH_ABS, || format!("path dependence {worst_path:e}"))?;
    Ok(format!("path gap {worst_path:.1e}, worst Lipschitz ratio {worst_ratio:.4} over {LIPSCHITZ_PAIRS} pairs per fixture"))
}

fn fixture_paths() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    paths
}

fn golden_determinism() -> Check {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let paths = fixture_paths();
    for path in &paths {
        let once = || -> Result<String, String> {
            let cfg = ExperimentConfig::load(path).map_err(|e| e.to_string())?;
            Ok(run(cfg).map_err(|e| e.to_string())?.results_json())
        };
        let (a, b) = (once()?, once()?);
        let name = path.file_stem().unwrap().to_string_lossy();
        ensure(a == b, || format!("{name}: two runs differ"))?;
        let stored = fs::read_to_string(golden.join(format!("{name}.json"))).map_err(|e| format!("{name}: {e}"))?;
        ensure(a == stored, || format!("{name}: differs from golden file"))?;
    }
    Ok(format!("{} fixture configs byte-identical across two runs and golden files", paths.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("favard constants", favard),
        ("kolmogorov constant and range", kolmogorov),
        ("landau-kolmogorov verification", landau_kolmogorov),
        ("recession geometry", recession),
        ("divergence witnesses", witnesses),
        ("modulus identity", modulus_identity),
        ("chain bound", chain_bounds),
        ("derivative engine", cauchy_engine),
        ("primitive", primitives),
        ("cli determinism", golden_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("[PASS] {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
