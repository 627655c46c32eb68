//! Seeded generators for random polygonal domains and interior points.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{clip_to_disc, DomainSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random unbounded intersection of half-planes containing the origin: a
/// strip, a half-strip, or up to four half-planes sharing a recession axis.
pub fn random_unbounded_hpoly<R: Rng>(rng: &mut R) -> DomainSpec {
    let axis = rng.gen_range(0.0..TAU);
    let unit = |a: f64| Complex64::from_polar(1.0, a);
    let mut pairs: Vec<(Complex64, f64)> = Vec::new();
    match rng.gen_range(0..6) {
        0 => {
            pairs.push((unit(axis + PI / 2.0), rng.gen_range(0.2..3.0)));
            pairs.push((unit(axis - PI / 2.0), rng.gen_range(0.2..3.0)));
        }
        1 => {
            pairs.push((unit(axis + PI / 2.0), rng.gen_range(0.2..3.0)));
            pairs.push((unit(axis - PI / 2.0), rng.gen_range(0.2..3.0)));
            pairs.push((unit(axis + PI), rng.gen_range(0.2..3.0)));
        }
        _ => {
            let count = rng.gen_range(1..=4);
            for _ in 0..count {
                let a = axis + rng.gen_range((PI / 2.0 + 0.05)..(1.5 * PI - 0.05));
                pairs.push((unit(a), rng.gen_range(0.2..3.0)));
            }
        }
    }
    DomainSpec::hpoly(&pairs).expect("origin is interior")
}

/// Random bounded convex polygon with 4 to 8 sides around a point of `[-1, 1]²`.
pub fn random_bounded_hpoly<R: Rng>(rng: &mut R) -> DomainSpec {
    let sides = rng.gen_range(4..=8);
    let center = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let phase = rng.gen_range(0.0..TAU);
    let pairs: Vec<(Complex64, f64)> = (0..sides)
        .map(|i| {
            let a = phase + TAU * (i as f64 + rng.gen_range(0.0..0.5)) / sides as f64;
            let n = Complex64::from_polar(1.0, a);
            let offset = rng.gen_range(0.3..2.0) + center.re * n.re + center.im * n.im;
            (n, offset)
        })
        .collect();
    DomainSpec::hpoly(&pairs).expect("center is interior")
}

/// `count` points of `d` at distance at least `min_slack` from its boundary,
/// drawn uniformly from the bounding box (or the box of `d ∩ D(0, 8)`).
pub fn random_interior_points<R: Rng>(d: &DomainSpec, count: usize, min_slack: f64, rng: &mut R) -> Vec<Complex64> {
    let window = if d.is_bounded() {
        d.bounding_box()
    } else {
        clip_to_disc(d, 8).ok().and_then(|c| c.bounding_box())
    };
    let (lo, hi) = window.unwrap_or((Complex64::new(-8.0, -8.0), Complex64::new(8.0, 8.0)));
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count && attempts < 10_000 * count.max(1) {
        attempts += 1;
        let z = Complex64::new(rng.gen_range(lo.re..=hi.re), rng.gen_range(lo.im..=hi.im));
        if d.contains(z) && d.boundary_distance(z) >= min_slack {
            out.push(z);
        }
    }
    out
}
