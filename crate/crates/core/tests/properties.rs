mod common;

use std::cmp::Ordering;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seppack_core::certificate::{lift_from_code, max_admissible_epsilon, reduce_certificate, verify_certificate};
use seppack_core::ell1::{min_distance, touching_pairs, verify_total_separability_l1, BinaryCode, BitWord, L1Packing};
use seppack_core::linalg::{Matrix, Vector};
use seppack_core::planar::{
    arc_measure, build_pi_measure, contact_graph, generate_packing, is_quasi_hexagon, line_separates,
    polygon_angle_sum, triangle_angle_sum, verify_total_separability, AngularMeasure, ArcDirection, BodyClass,
    Line, PlanarPacking, Point, SymmetricPolygon,
};
use seppack_core::polyomino::{
    adjacency_count, max_adjacency, merge_clusters, optimal_cluster, CellCluster, Lattice,
};
use seppack_core::scalar::{int, rat, Rational};
use seppack_core::spherical::{deletion_search, verify_code, SphericalCode};
use seppack_core::Scalar;

fn exact(s: &Scalar) -> Rational {
    s.as_exact().expect("exact scalar").clone()
}

/// Rational unit vector from a point of `Q^(d-1)` by inverse stereographic projection.
fn rational_unit_vector(y: &[Rational]) -> Vector {
    let n2 = y.iter().fold(int(0), |a, t| a + t * t);
    let denom = &n2 + int(1);
    let mut entries: Vec<Rational> = y.iter().map(|t| int(2) * t / &denom).collect();
    entries.push((&n2 - int(1)) / &denom);
    Vector::exact(entries).unwrap()
}

fn random_exact_code(dim: usize, count: usize, rng: &mut ChaCha8Rng) -> Option<SphericalCode> {
    let vectors: Vec<Vector> = (0..count)
        .map(|_| {
            let y: Vec<Rational> = (0..dim - 1).map(|_| rat(rng.random_range(-8..=8), rng.random_range(1..=4))).collect();
            let v = rational_unit_vector(&y);
            if rng.random_bool(0.5) {
                v.neg()
            } else {
                v
            }
        })
        .collect();
    let mut hi: Option<Rational> = None;
    let mut lo: Option<Rational> = None;
    for i in 0..count {
        for j in i + 1..count {
            let g = exact(&vectors[i].dot(&vectors[j]).unwrap());
            hi = Some(hi.map_or(g.clone(), |h| h.max(g.clone())));
            lo = Some(lo.map_or(g.clone(), |l| l.min(g)));
        }
    }
    let (hi, lo) = (hi?, lo?);
    // Admissible windows (-1 + 2α, α] exist iff hi < (1 + lo) / 2.
    if hi >= (int(1) + &lo) / int(2) {
        return None;
    }
    SphericalCode::new(dim, vectors, Scalar::Exact(hi)).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trace_bound_never_exceeds_rank(
        n in 1usize..6,
        cells in proptest::collection::vec((-5i64..=5, 1i64..=4), 36),
    ) {
        let entries: Vec<Scalar> = cells[..n * n].iter().map(|&(p, q)| Scalar::ratio(p, q)).collect();
        prop_assume!(entries.iter().any(|e| !e.is_zero()));
        let m = Matrix::new(n, n, entries).unwrap();
        let bound = exact(&m.rank_lower_bound_trace().unwrap());
        prop_assert!(bound <= int(m.rank_exact().unwrap() as i64));
    }

    #[test]
    fn lifted_exact_codes_are_accepted(seed in any::<u64>(), dim in 2usize..5, count in 2usize..6, k in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = random_exact_code(dim, count, &mut rng);
        prop_assume!(code.is_some());
        let code = code.unwrap();
        prop_assert!(verify_code(&code).accepted());
        let cert = lift_from_code(&code, k).unwrap();
        prop_assert_eq!(cert.dimension(), dim + 1 + k);
        prop_assert_eq!(cert.len(), count + 2 * k);
        prop_assert!(verify_certificate(&cert).unwrap().accepted());
        let alpha = exact(code.alpha());
        for i in 0..count {
            for j in 0..count {
                let g = exact(&code.vectors()[i].dot(&code.vectors()[j]).unwrap());
                let phi = exact(&cert.pairs()[i].phi.apply(&cert.pairs()[j].x).unwrap());
                prop_assert_eq!(phi, (g - &alpha) / (int(1) - &alpha));
            }
        }

        let eps = max_admissible_epsilon(&cert).unwrap();
        let red = reduce_certificate(&cert, &eps).unwrap();
        prop_assert_eq!(red.removed, k);
        let m = &red.matrix;
        let third = rat(1, 3);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let a = exact(m.get(i, j));
                if i == j {
                    prop_assert_eq!(a, int(1));
                } else {
                    prop_assert!(-&third < a && a < third);
                }
            }
        }
        let rank = m.rank_exact().unwrap();
        prop_assert!(rank + k <= cert.dimension() + 1);
        prop_assert!(exact(&m.rank_lower_bound_trace().unwrap()) <= int(rank as i64));
    }

    #[test]
    fn l1_packings_of_random_codes(seed in any::<u64>(), len in 3usize..12, count in 2usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut words: Vec<BitWord> = (0..count)
            .map(|_| BitWord::from_bits(&(0..len).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>()))
            .collect();
        words.sort();
        words.dedup();
        prop_assume!(words.len() >= 2);
        let code = BinaryCode::new(words.clone()).unwrap();
        let brute = (0..words.len())
            .flat_map(|i| (i + 1..words.len()).map(move |j| (i, j)))
            .map(|(i, j)| words[i].hamming(&words[j]))
            .min()
            .unwrap();
        prop_assert_eq!(min_distance(&code).unwrap(), brute);
        let packing = L1Packing::from_code(code).unwrap();
        prop_assert!(verify_total_separability_l1(&packing).unwrap().accepted());
        for (i, j) in touching_pairs(&packing) {
            prop_assert_eq!(words[i].hamming(&words[j]), brute);
        }
    }

    #[test]
    fn merge_preserves_size_connectivity_and_contacts(seed in any::<u64>(), n1 in 1usize..40, n2 in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grow = |n: usize, rng: &mut ChaCha8Rng| {
            let mut cells = vec![(0i64, 0i64)];
            while cells.len() < n {
                let (x, y) = cells[rng.random_range(0..cells.len())];
                let step = [(1, 0), (-1, 0), (0, 1), (0, -1)][rng.random_range(0..4)];
                let c = (x + step.0, y + step.1);
                if !cells.contains(&c) {
                    cells.push(c);
                }
            }
            CellCluster::new(Lattice::Square, cells).unwrap()
        };
        for (a, b) in [(grow(n1, &mut rng), grow(n2, &mut rng)), (optimal_cluster(Lattice::Square, n1).unwrap(), optimal_cluster(Lattice::Square, n2).unwrap())] {
            let merged = merge_clusters(&a, &b).unwrap();
            prop_assert_eq!(merged.len(), n1 + n2 - 1);
            prop_assert!(adjacency_count(&merged) >= adjacency_count(&a) + adjacency_count(&b));
            prop_assert!(adjacency_count(&merged) <= max_adjacency(Lattice::Square, (n1 + n2 - 1) as u64));
        }
    }
}

#[test]
fn deletion_outputs_are_valid_codes() {
    let third = 1.0 / 3.0;
    for dim in 5..=60 {
        for seed in 0..100 {
            let code = deletion_search(dim, seed).unwrap();
            assert!(verify_code(&code).accepted(), "d={dim} seed={seed}");
            assert!(code.coherence() < third - 1e-9, "d={dim} seed={seed}");
            if seed % 25 == 0 {
                let cert = lift_from_code(&code, 1).unwrap();
                assert!(verify_certificate(&cert).unwrap().accepted(), "d={dim} seed={seed}");
            }
        }
    }
}

fn translate_line(body: &SymmetricPolygon, packing: &PlanarPacking, i: usize, normal: &Point) -> Line {
    let support = body.vertices().iter().map(|v| normal.dot(v)).max().unwrap();
    Line {
        normal: normal.clone(),
        offset: normal.dot(&packing.centers()[i]) + support,
    }
}

/// Candidate directions: facet normals and fine convex combinations of adjacent ones,
/// both signs.
fn sampled_normals(body: &SymmetricPolygon, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let ns = body.normals();
    let m = ns.len();
    let mut out = Vec::new();
    for a in 0..m {
        out.push(ns[a].clone());
        for _ in 0..6 {
            let l = rat(rng.random_range(1..64), 64);
            out.push(ns[a].scale(&l).add(&ns[(a + 1) % m].scale(&(int(1) - &l))));
        }
    }
    out
}

#[test]
fn separability_verdicts_match_sampled_lines_and_contact_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bodies: Vec<SymmetricPolygon> = common::reference_bodies().into_iter().map(|b| b.1).collect();
    bodies.push(SymmetricPolygon::elongated_octagon());
    let mut refuted = 0;
    for body in &bodies {
        let cap = body.classify().hadwiger_degree();
        let quasi = is_quasi_hexagon(body).0;
        for _ in 0..150 {
            let n = rng.random_range(2..9);
            let packing = common::random_packing(body, n, &mut rng);
            let report = verify_total_separability(&packing).unwrap();
            for w in &report.pairs {
                match &w.line {
                    Some(line) => assert!(line_separates(&packing, line, w.i, w.j)),
                    None => {
                        refuted += 1;
                        for normal in sampled_normals(body, &mut rng) {
                            for (a, b) in [(w.i, w.j), (w.j, w.i)] {
                                let line = translate_line(body, &packing, a, &normal);
                                assert!(!line_separates(&packing, &line, a, b), "{:?}", packing.centers());
                            }
                        }
                    }
                }
            }
            if report.separable {
                assert!(report.graph.max_degree() <= cap);
                if !quasi {
                    assert!(report.graph.find_triangle().is_none(), "{:?}", packing.centers());
                }
            }
        }
    }
    assert!(refuted > 0, "the sampler never produced a non-separable pair");
}

#[test]
fn random_polygons_are_classified_and_packed_consistently() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = [0usize; 3];
    let mut tried = 0;
    while tried < 150 {
        let Some(body) = common::random_polygon(&mut rng) else { continue };
        tried += 1;
        let class = body.classify();
        seen[class as usize] += 1;
        let (quasi, witness) = is_quasi_hexagon(&body);
        assert_eq!(quasi, class != BodyClass::General);
        if quasi {
            let w = witness.expect("quasi hexagons have a vertex witness");
            assert_eq!(w.u1.add(&w.u2), *body.vertex(w.vertex));
            assert_eq!(body.gauge(&w.u1), int(1));
            assert_eq!(body.gauge(&w.u2), int(1));
        }
        let lattice = seppack_core::planar::lattice_for(class);
        for n in 1..=12 {
            let packing = generate_packing(&body, n).unwrap();
            let graph = contact_graph(&packing).unwrap();
            assert_eq!(graph.edge_count() as u64, max_adjacency(lattice, n as u64), "{:?} n={n}", body.vertices());
            assert!(verify_total_separability(&packing).unwrap().separable, "{:?} n={n}", body.vertices());
        }
    }
    assert!(seen.iter().all(|&c| c > 0), "classes seen: {seen:?}");
}

#[test]
fn measure_axioms_on_random_bodies() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut pi_measures = 0;
    let mut tried = 0;
    while tried < 60 {
        let Some(body) = common::random_polygon(&mut rng) else { continue };
        tried += 1;
        let mut measures = vec![AngularMeasure::uniform(&body)];
        if !is_quasi_hexagon(&body).0 {
            let mu = build_pi_measure(&body).unwrap();
            for (e, s, t) in mu.zero_arcs() {
                assert_eq!(mu.edge_arc_mass(*e, s, t), int(0));
            }
            measures.push(mu);
            pi_measures += 1;
        }
        for mu in &measures {
            assert_eq!(mu.total_mass(), int(2));
            for _ in 0..10 {
                let p = common::random_boundary_point(&body, &mut rng);
                let q = common::random_boundary_point(&body, &mut rng);
                let a = arc_measure(mu, &p, &q, ArcDirection::Clockwise).unwrap();
                let b = arc_measure(mu, &p.neg(), &q.neg(), ArcDirection::Clockwise).unwrap();
                assert_eq!(a, b);
                let back = arc_measure(mu, &q, &p, ArcDirection::Clockwise).unwrap();
                if p != q {
                    assert_eq!(a + back, int(2));
                }
                assert_eq!(arc_measure(mu, &p, &p.neg(), ArcDirection::Clockwise).unwrap(), int(1));
                let tri: Vec<Point> = (0..3).map(|_| Point::ints(rng.random_range(-20..=20), rng.random_range(-20..=20))).collect();
                let cr = tri[1].sub(&tri[0]).cross(&tri[2].sub(&tri[0]));
                if cr != int(0) {
                    assert_eq!(triangle_angle_sum(mu, &[tri[0].clone(), tri[1].clone(), tri[2].clone()]).unwrap(), int(1));
                }
            }
            let quad = [Point::ints(0, 0), Point::ints(7, -1), Point::ints(9, 5), Point::ints(-2, 4)];
            assert_eq!(polygon_angle_sum(mu, &quad).unwrap(), int(2));
        }
    }
    assert!(pi_measures > 0);
}

#[test]
fn minor_arc_is_the_smaller_half() {
    let body = SymmetricPolygon::elongated_octagon();
    let mu = build_pi_measure(&body).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let p = common::random_boundary_point(&body, &mut rng);
        let q = common::random_boundary_point(&body, &mut rng);
        if q == p.neg() {
            assert!(arc_measure(&mu, &p, &q, ArcDirection::Minor).is_err());
            continue;
        }
        let minor = arc_measure(&mu, &p, &q, ArcDirection::Minor).unwrap();
        let cw = arc_measure(&mu, &p, &q, ArcDirection::Clockwise).unwrap();
        let ccw = arc_measure(&mu, &q, &p, ArcDirection::Clockwise).unwrap();
        assert!(minor == cw || minor == ccw);
        // The minor arc spans less than a half turn, so it lies in an arc of measure 1.
        assert!(minor.cmp(&int(1)) != Ordering::Greater);
    }
}
