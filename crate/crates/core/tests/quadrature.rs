use holonorm::catalog::{FunctionHandle, Kind};
use holonorm::numerics::{cauchy_derivative, derivative, integrate_segment, segment_integral, DerivativeMethod, OpaqueFn, Region, Tolerance};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Composite midpoint rule on a straight segment.
fn midpoint(f: impl Fn(Complex64) -> Complex64, a: Complex64, b: Complex64, n: usize) -> Complex64 {
    let step = (b - a) / n as f64;
    (0..n).map(|k| f(a + step * (k as f64 + 0.5))).sum::<Complex64>() * step
}

#[test]
fn log_integral_matches_midpoint_oracle() {
    let f = FunctionHandle::pole(c(3.0, 0.0));
    let v = segment_integral(&f, c(0.0, 0.0), c(1.0, 0.0), 1e-13).unwrap();
    let oracle = midpoint(|z| 1.0 / (z - 3.0), c(0.0, 0.0), c(1.0, 0.0), 200_000);
    assert!((v - oracle).norm() < 1e-10);
    assert!((v.re - (2.0f64 / 3.0).ln()).abs() < 1e-13 && v.im.abs() < 1e-15);
}

#[test]
fn exp_integral_on_a_slanted_segment() {
    let f = FunctionHandle::make(Kind::DirectionalExp { theta: 0.0 }).unwrap();
    let (a, b) = (c(-0.5, 1.0), c(1.5, -2.0));
    let q = integrate_segment(&f, a, b, 1e-13).unwrap();
    assert!((q.value - (b.exp() - a.exp())).norm() < 1e-12);
    assert!(q.error_estimate < 1e-13);
}

#[test]
fn opaque_and_catalog_routes_agree() {
    let w = c(0.5, 2.0);
    let opaque = OpaqueFn::new(Region::punctured(w), move |z| 1.0 / (z - w));
    let handle = FunctionHandle::pole(w);
    for order in 0..=6 {
        let z = c(0.1, -0.3);
        let a = derivative(&opaque, order, z, Tolerance::default()).unwrap();
        let b = derivative(&handle, order, z, Tolerance::default()).unwrap();
        assert_eq!(a.method, DerivativeMethod::CauchyIntegral);
        assert_eq!(b.method, DerivativeMethod::ClosedForm);
        assert!((a.value - b.value).norm() <= 1e-8 * b.value.norm(), "order {order}");
    }
}

fn catalog() -> Vec<FunctionHandle> {
    vec![
        FunctionHandle::pole(c(1.5, -0.5)),
        FunctionHandle::boundary_essential(),
        FunctionHandle::directional_exp(1.1),
        FunctionHandle::monomial(5),
        FunctionHandle::sine(),
        FunctionHandle::constant(c(-2.0, 0.5)),
        FunctionHandle::sum(vec![Kind::Pole { w: c(0.0, 2.0) }, Kind::Sine]),
        FunctionHandle::scalar_multiple(c(0.0, 3.0), Kind::Monomial { degree: 3 }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cauchy_agrees_with_closed_form(re in -0.7f64..0.7, im in -0.7f64..0.7, order in 0u32..=6, which in 0usize..8) {
        let f = &catalog()[which];
        let z = c(re, im);
        prop_assume!(f.singular_points().iter().all(|s| (z - s).norm() >= 0.3));
        let cf = f.closed_form_derivative(order).eval(z).unwrap();
        let ci = cauchy_derivative(f, order, z, Tolerance::default()).unwrap();
        prop_assert!((ci.value - cf).norm() <= 1e-8 * cf.norm().max(1.0), "{} vs {}", ci.value, cf);
    }

    #[test]
    fn segment_integral_is_additive(t in 0.05f64..0.95, re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let f = FunctionHandle::sum(vec![Kind::Pole { w: c(0.0, 3.0) }, Kind::Monomial { degree: 2 }]);
        let a = c(-1.0, -1.0);
        let b = c(re, im);
        let m = a + (b - a) * t;
        let whole = segment_integral(&f, a, b, 1e-13).unwrap();
        let split = segment_integral(&f, a, m, 1e-13).unwrap() + segment_integral(&f, m, b, 1e-13).unwrap();
        prop_assert!((whole - split).norm() < 1e-11);
    }

    #[test]
    fn derivative_is_linear(re in -1.0f64..1.0, im in -1.0f64..1.0, order in 0u32..=4, k in -3.0f64..3.0) {
        let z = c(re, im);
        let f = FunctionHandle::sine();
        let g = FunctionHandle::directional_exp(0.4);
        let combo = OpaqueFn::new(Region::entire(), move |z: Complex64| z.sin() + (Complex64::from_polar(1.0, -0.4) * z).exp() * k);
        let lhs = cauchy_derivative(&combo, order, z, Tolerance::default()).unwrap().value;
        let rhs = f.closed_form_derivative(order).eval(z).unwrap() + g.closed_form_derivative(order).eval(z).unwrap() * k;
        prop_assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm().max(1.0));
    }
}
