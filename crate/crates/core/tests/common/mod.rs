#![allow(dead_code)]

use rand::Rng;
use seppack_core::planar::{contact_graph, PlanarPacking, Point, SymmetricPolygon};
use seppack_core::scalar::{int, rat};

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Strict convex hull (no collinear vertices), counterclockwise.
pub fn convex_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Symmetric hull of a few random lattice points; `None` when degenerate.
pub fn random_polygon<R: Rng>(rng: &mut R) -> Option<SymmetricPolygon> {
    let count = rng.random_range(2..6);
    let mut pts = Vec::new();
    for _ in 0..count {
        let p = (rng.random_range(-6..=6), rng.random_range(-6..=6));
        pts.push(p);
        pts.push((-p.0, -p.1));
    }
    let hull = convex_hull(&pts);
    if hull.len() < 4 {
        return None;
    }
    SymmetricPolygon::from_ints(&hull).ok()
}

pub fn random_boundary_point<R: Rng>(body: &SymmetricPolygon, rng: &mut R) -> Point {
    let e = rng.random_range(0..body.len());
    let t = rat(rng.random_range(0..=16), 16);
    body.boundary_point(e, &t)
}

/// Grows a packing of up to `n` translates by attaching translates at random
/// boundary contacts of random existing ones.
pub fn random_packing<R: Rng>(body: &SymmetricPolygon, n: usize, rng: &mut R) -> PlanarPacking {
    let two = int(2);
    let mut centers = vec![Point::origin()];
    let mut attempts = 0;
    while centers.len() < n && attempts < 40 * n {
        attempts += 1;
        let base = &centers[rng.random_range(0..centers.len())];
        let candidate = base.add(&random_boundary_point(body, rng).scale(&two));
        if centers.iter().all(|c| body.gauge(&c.sub(&candidate)) >= two) {
            centers.push(candidate);
        }
    }
    let packing = PlanarPacking::new(body.clone(), centers).expect("distinct centres");
    contact_graph(&packing).expect("grown without overlaps");
    packing
}

pub fn reference_bodies() -> Vec<(&'static str, SymmetricPolygon)> {
    vec![
        ("square", SymmetricPolygon::square()),
        ("hexagon", SymmetricPolygon::hexagon()),
        ("octagon", SymmetricPolygon::octagon()),
    ]
}
