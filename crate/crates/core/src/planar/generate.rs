use alloc::format;
use alloc::vec::Vec;

use super::packing::PlanarPacking;
use super::polygon::{is_quasi_hexagon, min_area_circumscribed_parallelogram, BodyClass, Point, SymmetricPolygon};
use crate::error::{Error, Result};
use crate::polyomino::{max_adjacency, optimal_cluster, Lattice};
use crate::scalar::{int, Rational};

/// Largest contact number of a totally separable packing of `n` translates of a
/// body of the given class.
pub fn csep_formula(class: BodyClass, n: u64) -> u64 {
    max_adjacency(lattice_for(class), n)
}

pub fn lattice_for(class: BodyClass) -> Lattice {
    match class {
        BodyClass::Parallelogram => Lattice::King,
        BodyClass::QuasiHexagon => Lattice::Triangular,
        BodyClass::General => Lattice::Square,
    }
}

/// Class of the body, lattice, and the basis `(b₁, b₂)` such that cell `(x, y)` sits
/// at `2(x b₁ + y b₂)`.
///
/// - parallelogram: `b₁, b₂` are midpoints of two adjacent edges (king moves);
/// - other quasi hexagons: the witness vectors `u₁, u₂` (triangular lattice);
/// - otherwise: side midpoints of a minimum-area circumscribed parallelogram.
pub fn packing_basis(body: &SymmetricPolygon) -> Result<(BodyClass, Lattice, Point, Point)> {
    let half = Rational::new(1.into(), 2.into());
    if body.is_parallelogram() {
        let v = body.vertices();
        let b1 = v[0].add(&v[1]).scale(&half);
        let b2 = v[1].add(&v[2]).scale(&half);
        return Ok((BodyClass::Parallelogram, Lattice::King, b1, b2));
    }
    match is_quasi_hexagon(body) {
        (true, Some(w)) => Ok((BodyClass::QuasiHexagon, Lattice::Triangular, w.u1, w.u2)),
        (true, None) => Err(Error::Internal(format!(
            "quasi hexagon without a vertex witness: {:?}",
            body.vertices()
        ))),
        (false, _) => {
            let p = min_area_circumscribed_parallelogram(body)?;
            let [p1, p2, _, _] = p.midpoints;
            Ok((BodyClass::General, Lattice::Square, p1, p2))
        }
    }
}

/// `n` translates placed on an optimal cluster of the body's lattice.
pub fn generate_packing(body: &SymmetricPolygon, n: usize) -> Result<PlanarPacking> {
    if n == 0 {
        return Err(Error::Domain("a packing needs at least one translate".into()));
    }
    let (_, lattice, b1, b2) = packing_basis(body)?;
    let cluster = optimal_cluster(lattice, n)?;
    let two = int(2);
    let (b1, b2) = (b1.scale(&two), b2.scale(&two));
    let centers: Vec<Point> = cluster
        .cells()
        .iter()
        .map(|&(x, y)| b1.scale(&int(x)).add(&b2.scale(&int(y))))
        .collect();
    PlanarPacking::new(body.clone(), centers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::packing::contact_graph;
    use crate::planar::separability::verify_total_separability;

    #[test]
    fn formula_examples() {
        assert_eq!(csep_formula(BodyClass::Parallelogram, 4), 6);
        assert_eq!(csep_formula(BodyClass::QuasiHexagon, 3), 3);
        assert_eq!(csep_formula(BodyClass::General, 1), 0);
        assert_eq!(csep_formula(BodyClass::General, 4), 4);
    }

    #[test]
    fn small_packings_meet_the_formula() {
        for (body, n, count) in [
            (SymmetricPolygon::square(), 4, 6),
            (SymmetricPolygon::hexagon(), 3, 3),
            (SymmetricPolygon::octagon(), 4, 4),
        ] {
            let p = generate_packing(&body, n).unwrap();
            assert_eq!(contact_graph(&p).unwrap().edge_count(), count);
            assert!(verify_total_separability(&p).unwrap().separable);
        }
    }
}
