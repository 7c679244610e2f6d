use std::collections::{BTreeSet, HashSet};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seppack_core::ell1::{alon_parameters, alon_rs_code, indicator_encode, min_distance, min_distance_neighbor_count, rs_symbol_code, BinaryField};
use seppack_core::linalg::Matrix;
use seppack_core::polyomino::{adjacency_count, count_adjacencies, max_adjacency, optimal_cluster, Lattice};
use seppack_core::scalar::{rat, Rational};
use seppack_core::Scalar;

type Cell = (i64, i64);

/// Fixed polyominoes with up to `max` cells, by Redelmeier's method: every
/// polyomino is generated once, from the cell (0, 0) as its lowest-then-leftmost
/// cell.
fn enumerate_fixed(max: usize, mut visit: impl FnMut(&[Cell])) {
    fn allowed(c: Cell) -> bool {
        c.1 > 0 || (c.1 == 0 && c.0 >= 0)
    }
    fn neighbours(c: Cell) -> [Cell; 4] {
        [(c.0 + 1, c.1), (c.0 - 1, c.1), (c.0, c.1 + 1), (c.0, c.1 - 1)]
    }
    fn recurse(
        untried: &mut Vec<Cell>,
        poly: &mut Vec<Cell>,
        seen: &mut HashSet<Cell>,
        max: usize,
        visit: &mut dyn FnMut(&[Cell]),
    ) {
        while let Some(cell) = untried.pop() {
            poly.push(cell);
            visit(poly);
            if poly.len() < max {
                let mut added = Vec::new();
                for nb in neighbours(cell) {
                    if allowed(nb) && seen.insert(nb) {
                        added.push(nb);
                    }
                }
                let mut next = untried.clone();
                next.extend(added.iter().copied());
                recurse(&mut next, poly, seen, max, visit);
                for nb in added {
                    seen.remove(&nb);
                }
            }
            poly.pop();
        }
    }
    let mut seen = HashSet::from([(0, 0)]);
    recurse(&mut vec![(0, 0)], &mut Vec::new(), &mut seen, max, &mut visit);
}

#[test]
fn polyomino_enumeration_matches_formula() {
    let mut counts = [0u64; 9];
    let mut best = [0u64; 9];
    enumerate_fixed(8, |cells| {
        let n = cells.len();
        counts[n] += 1;
        best[n] = best[n].max(count_adjacencies(Lattice::Square, cells));
    });
    // Fixed polyomino counts, a classical sequence.
    assert_eq!(&counts[1..], &[1, 2, 6, 19, 63, 216, 760, 2725]);
    for n in 1..=8 {
        assert_eq!(best[n], max_adjacency(Lattice::Square, n as u64));
        assert_eq!(adjacency_count(&optimal_cluster(Lattice::Square, n).unwrap()), best[n]);
    }
}

#[test]
fn formula_floors_match_real_arithmetic_away_from_ties() {
    // Independent evaluation with f64 wherever the argument is far from an integer.
    for n in 1u64..5000 {
        for (lattice, value) in [
            (Lattice::Square, 2.0 * n as f64 - 2.0 * (n as f64).sqrt()),
            (Lattice::King, 4.0 * n as f64 - ((28 * n - 12) as f64).sqrt()),
            (Lattice::Triangular, 3.0 * n as f64 - ((12 * n - 3) as f64).sqrt()),
        ] {
            if (value - value.round()).abs() > 1e-6 {
                assert_eq!(max_adjacency(lattice, n), value.floor() as u64, "{lattice:?} n={n}");
            }
        }
    }
    // At perfect squares the square-lattice bound is attained by an n = s² block.
    for s in 1u64..100 {
        assert_eq!(max_adjacency(Lattice::Square, s * s), 2 * s * (s - 1));
    }
}

/// Rank by textbook Gaussian elimination over the rationals.
fn rational_rank(rows: usize, cols: usize, mut a: Vec<Vec<Rational>>) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[rank][c];
                for k in c..cols {
                    let v = &f * &a[rank][k];
                    a[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn bareiss_rank_matches_rational_elimination() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let rows = rng.random_range(1..7);
        let cols = rng.random_range(1..7);
        // Low-rank structure is common: products of thin random factors.
        let inner = rng.random_range(1..5);
        let f: Vec<Vec<Rational>> = (0..rows)
            .map(|_| (0..inner).map(|_| rat(rng.random_range(-3..=3), rng.random_range(1..=3))).collect())
            .collect();
        let g: Vec<Vec<Rational>> = (0..inner)
            .map(|_| (0..cols).map(|_| rat(rng.random_range(-3..=3), rng.random_range(1..=3))).collect())
            .collect();
        let a: Vec<Vec<Rational>> = (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| (0..inner).fold(Rational::zero(), |acc, t| acc + &f[i][t] * &g[t][j]))
                    .collect()
            })
            .collect();
        let m = Matrix::new(rows, cols, a.iter().flatten().cloned().map(Scalar::Exact).collect()).unwrap();
        assert_eq!(m.rank_exact().unwrap(), rational_rank(rows, cols, a));
    }
}

/// `GF(4) = {0, 1, ω, ω²}` with `ω² = ω + 1`, multiplied through discrete logs.
fn gf4_mul(a: u32, b: u32) -> u32 {
    if a == 0 || b == 0 {
        return 0;
    }
    // Elements as bit patterns: 1 = 0b01, ω = 0b10, ω² = ω + 1 = 0b11.
    let log = |x: u32| match x {
        1 => 0,
        2 => 1,
        3 => 2,
        _ => unreachable!(),
    };
    [1, 2, 3][(log(a) + log(b)) % 3]
}

#[test]
fn field_multiplication_matches_log_tables() {
    let field = BinaryField::new(2).unwrap();
    for a in 0..4 {
        for b in 0..4 {
            assert_eq!(field.mul(a, b), gf4_mul(a, b));
        }
    }
    // Every nonzero element of GF(16) has an inverse and x^15 = 1.
    let f16 = BinaryField::new(4).unwrap();
    for a in 1..16 {
        assert_eq!((1..16).filter(|&b| f16.mul(a, b) == 1).count(), 1);
        let mut p = 1;
        for _ in 0..15 {
            p = f16.mul(p, a);
        }
        assert_eq!(p, 1);
    }
}

#[test]
fn reed_solomon_k2_by_brute_force() {
    // All polynomials c0 + c1 x over GF(4), evaluated at every field element.
    let mut words = BTreeSet::new();
    for c0 in 0..4 {
        for c1 in 0..4 {
            let symbols: Vec<u32> = (0..4).map(|x| c0 ^ gf4_mul(c1, x)).collect();
            let mut bits = vec![false; 16];
            for (e, s) in symbols.iter().enumerate() {
                bits[e * 4 + *s as usize] = true;
            }
            words.insert(bits);
        }
    }
    let code = alon_rs_code(2).unwrap();
    let ours: BTreeSet<Vec<bool>> = code.words().iter().map(|w| (0..w.len()).map(|i| w.get(i)).collect()).collect();
    assert_eq!(ours, words);

    let list: Vec<&Vec<bool>> = words.iter().collect();
    let dist = |a: &Vec<bool>, b: &Vec<bool>| a.iter().zip(b).filter(|(x, y)| x != y).count() as u32;
    let d = list
        .iter()
        .enumerate()
        .flat_map(|(i, a)| list[i + 1..].iter().map(move |b| dist(a, b)))
        .min()
        .unwrap();
    assert_eq!(d, 6);
    assert_eq!(min_distance(&code).unwrap(), d);
    let params = alon_parameters(2).unwrap();
    assert_eq!((params.min_distance, params.neighbor_count), (6, 12));
    for (i, a) in list.iter().enumerate() {
        let brute = list.iter().filter(|b| dist(a, b) == d).count();
        assert_eq!(brute, 12);
        assert_eq!(min_distance_neighbor_count(&code, &code.words()[i]).unwrap(), brute);
    }
}

#[test]
fn binary_distance_is_twice_symbol_distance() {
    let symbols = rs_symbol_code(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..2000 {
        let a = &symbols[rng.random_range(0..symbols.len())];
        let b = &symbols[rng.random_range(0..symbols.len())];
        let sym = a.iter().zip(b).filter(|(x, y)| x != y).count() as u32;
        assert_eq!(indicator_encode(a, 8).hamming(&indicator_encode(b, 8)), 2 * sym);
        if a != b {
            // Two distinct polynomials of degree < 4 agree on at most 3 points.
            assert!(sym >= 5);
        }
    }
}
