use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::packing::{contact_graph, PlanarPacking};
use super::polygon::{angle_cmp_from, Point};
use crate::error::{Error, Result};

/// Counts along the outer boundary walk of a contact graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryReport {
    /// Translates in the packing.
    pub n: usize,
    /// Contacts.
    pub e: usize,
    /// Distinct vertices on the boundary walk.
    pub v: usize,
    /// Boundary vertices of degree 2, 3 and 4 in the whole contact graph.
    pub v2: usize,
    pub v3: usize,
    pub v4: usize,
    /// The closed walk, starting at the lowest (then leftmost) centre.
    pub walk: Vec<usize>,
    /// `v₂ + 2v₃ + 3v₄ ≤ 2v - 4`.
    pub anglesum_ok: bool,
    /// `2e ≤ 4n - 4 - v`.
    pub euler_ok: bool,
}

fn is_same_direction(a: &Point, b: &Point) -> bool {
    a.cross(b).is_zero() && a.dot(b).is_positive()
}

/// Next vertex after arriving at `v`: the neighbour reached by the smallest strictly
/// positive counterclockwise turn from `back` (the direction pointing back along the
/// incoming edge). This keeps the outer face on the right.
fn next_vertex(centers: &[Point], adj: &[Vec<usize>], v: usize, back: &Point) -> usize {
    let dir = |w: usize| centers[w].sub(&centers[v]);
    *adj[v]
        .iter()
        .min_by(|&&a, &&b| {
            let (da, db) = (dir(a), dir(b));
            let (sa, sb) = (is_same_direction(back, &da), is_same_direction(back, &db));
            match (sa, sb) {
                (true, true) => Ordering::Equal,
                (true, false) => Ordering::Greater,
                (false, true) => Ordering::Less,
                (false, false) => angle_cmp_from(back, &da, &db),
            }
        })
        .expect("vertex with a neighbour")
}

/// Walks the outer boundary of the contact graph of a connected packing of at least
/// three translates of a body that is not a parallelogram, and evaluates the two
/// counting inequalities for that walk.
pub fn boundary_analysis(packing: &PlanarPacking) -> Result<BoundaryReport> {
    let n = packing.len();
    if n < 3 {
        return Err(Error::Domain("the boundary walk needs at least three translates".to_string()));
    }
    if packing.body().is_parallelogram() {
        return Err(Error::Precondition(
            "contact graphs of parallelogram packings need not be plane".to_string(),
        ));
    }
    let graph = contact_graph(packing)?;
    if !graph.is_connected() {
        return Err(Error::Domain("contact graph is not connected".to_string()));
    }
    let centers = packing.centers();
    let adj = graph.adjacency();
    let start = (0..n)
        .min_by(|&a, &b| {
            (&centers[a].y, &centers[a].x).cmp(&(&centers[b].y, &centers[b].x))
        })
        .expect("nonempty");
    let first = next_vertex(centers, &adj, start, &Point::ints(0, -1));
    let mut walk = alloc::vec![start];
    let (mut prev, mut cur) = (start, first);
    // Each directed edge is traversed at most once, so the loop is bounded.
    for _ in 0..=2 * graph.edge_count() {
        let back = centers[prev].sub(&centers[cur]);
        let next = next_vertex(centers, &adj, cur, &back);
        if cur == start && next == first {
            break;
        }
        walk.push(cur);
        prev = cur;
        cur = next;
    }
    let degrees = graph.degrees();
    let distinct: BTreeSet<usize> = walk.iter().copied().collect();
    let count = |k: usize| distinct.iter().filter(|&&w| degrees[w] == k).count();
    let (v, v2, v3, v4) = (distinct.len(), count(2), count(3), count(4));
    let e = graph.edge_count();
    Ok(BoundaryReport {
        n,
        e,
        v,
        v2,
        v3,
        v4,
        walk,
        anglesum_ok: v2 + 2 * v3 + 3 * v4 + 4 <= 2 * v,
        euler_ok: 2 * e + 4 + v <= 4 * n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::generate::generate_packing;
    use crate::planar::polygon::SymmetricPolygon;

    #[test]
    fn octagon_square_block() {
        let p = PlanarPacking::new(
            SymmetricPolygon::octagon(),
            [(0, 0), (2, 0), (4, 0), (0, 2), (2, 2), (4, 2), (0, 4), (2, 4), (4, 4)]
                .iter()
                .map(|&(x, y)| Point::ints(x, y))
                .collect(),
        )
        .unwrap();
        let r = boundary_analysis(&p).unwrap();
        assert_eq!((r.n, r.e, r.v), (9, 12, 8));
        assert_eq!((r.v2, r.v3, r.v4), (4, 4, 0));
        assert_eq!(r.walk, alloc::vec![0, 1, 2, 5, 8, 7, 6, 3]);
        assert!(r.anglesum_ok && r.euler_ok);
    }

    #[test]
    fn octagon_two_by_two() {
        let p = PlanarPacking::new(
            SymmetricPolygon::octagon(),
            [(0, 0), (2, 0), (0, 2), (2, 2)].iter().map(|&(x, y)| Point::ints(x, y)).collect(),
        )
        .unwrap();
        let r = boundary_analysis(&p).unwrap();
        assert_eq!((r.v, r.v2, r.e), (4, 4, 4));
        assert!(r.anglesum_ok && r.euler_ok);
    }

    #[test]
    fn walk_revisits_cut_vertices() {
        // A path: the walk goes out and back.
        let p = PlanarPacking::new(
            SymmetricPolygon::octagon(),
            (0..3).map(|i| Point::ints(2 * i, 0)).collect(),
        )
        .unwrap();
        let r = boundary_analysis(&p).unwrap();
        assert_eq!(r.walk, alloc::vec![0, 1, 2, 1]);
        assert_eq!(r.v, 3);
    }

    #[test]
    fn generated_packings_satisfy_both_inequalities() {
        for body in [SymmetricPolygon::octagon(), SymmetricPolygon::elongated_octagon()] {
            for n in 3..40 {
                let r = boundary_analysis(&generate_packing(&body, n).unwrap()).unwrap();
                assert!(r.euler_ok && r.anglesum_ok, "n={n}");
            }
        }
    }

    #[test]
    fn errors() {
        let sq = generate_packing(&SymmetricPolygon::square(), 4).unwrap();
        assert!(matches!(boundary_analysis(&sq), Err(Error::Precondition(_))));
        let apart = PlanarPacking::new(
            SymmetricPolygon::octagon(),
            [(0, 0), (2, 0), (10, 0)].iter().map(|&(x, y)| Point::ints(x, y)).collect(),
        )
        .unwrap();
        assert!(matches!(boundary_analysis(&apart), Err(Error::Domain(_))));
    }
}
