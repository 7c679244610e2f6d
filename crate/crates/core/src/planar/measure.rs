use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::packing::PlanarPacking;
use super::polygon::{is_quasi_hexagon, Point, SymmetricPolygon};
use super::separability::verify_total_separability;
use crate::error::{Error, Result};
use crate::scalar::{int, Rational};

/// A piece of constant density on one edge: parameters `t ∈ [start, end]` carry
/// mass `rate · (end - start)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub start: Rational,
    pub end: Rational,
    pub rate: Rational,
}

/// An atom-free, centrally symmetric measure on the boundary of a polygon, in units
/// of `π` (total mass 2). Boundary points are addressed as `edge + t`, `t ∈ [0, 1]`
/// the affine parameter along the edge; the density is piecewise constant in `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngularMeasure {
    body: SymmetricPolygon,
    pieces: Vec<Vec<Piece>>,
    edge_mass: Vec<Rational>,
    zero_arcs: Vec<(usize, Rational, Rational)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcDirection {
    Clockwise,
    Minor,
}

impl AngularMeasure {
    /// Mass spread uniformly with respect to gauge-length over the complement of
    /// `zero` (edge, start, end) and normalised to 2.
    fn with_zero_set(body: &SymmetricPolygon, zero: Vec<(usize, Rational, Rational)>) -> Result<Self> {
        let m = body.len();
        let lengths: Vec<Rational> = (0..m).map(|i| body.edge_length(i)).collect();
        let mut support: Vec<Vec<(Rational, Rational)>> = Vec::with_capacity(m);
        for e in 0..m {
            let mut blocked: Vec<(Rational, Rational)> = zero
                .iter()
                .filter(|z| z.0 == e)
                .map(|z| (z.1.clone(), z.2.clone()))
                .collect();
            blocked.sort();
            let mut free = Vec::new();
            let mut cursor = int(0);
            for (s, t) in blocked {
                if s > cursor {
                    free.push((cursor.clone(), s.clone()));
                }
                cursor = cursor.max(t);
            }
            if cursor < int(1) {
                free.push((cursor, int(1)));
            }
            support.push(free);
        }
        let total_length = (0..m)
            .flat_map(|e| support[e].iter().map(move |(s, t)| (e, s, t)))
            .fold(int(0), |acc, (e, s, t)| acc + &lengths[e] * (t - s));
        if total_length.is_zero() {
            return Err(Error::Internal(format!(
                "the prescribed zero set covers the whole boundary of {:?}",
                body.vertices()
            )));
        }
        let mut pieces = Vec::with_capacity(m);
        let mut edge_mass = Vec::with_capacity(m);
        for e in 0..m {
            let rate = int(2) * &lengths[e] / &total_length;
            let list: Vec<Piece> = support[e]
                .iter()
                .map(|(s, t)| Piece {
                    start: s.clone(),
                    end: t.clone(),
                    rate: rate.clone(),
                })
                .collect();
            edge_mass.push(list.iter().fold(int(0), |acc, p| acc + &p.rate * (&p.end - &p.start)));
            pieces.push(list);
        }
        Ok(AngularMeasure {
            body: body.clone(),
            pieces,
            edge_mass,
            zero_arcs: zero,
        })
    }

    /// Density uniform in gauge-length over the whole boundary.
    pub fn uniform(body: &SymmetricPolygon) -> Self {
        AngularMeasure::with_zero_set(body, Vec::new()).expect("empty zero set")
    }

    pub fn body(&self) -> &SymmetricPolygon {
        &self.body
    }

    pub fn pieces(&self, edge: usize) -> &[Piece] {
        &self.pieces[edge]
    }

    /// The arcs the measure is required to vanish on, as `(edge, start, end)`.
    pub fn zero_arcs(&self) -> &[(usize, Rational, Rational)] {
        &self.zero_arcs
    }

    pub fn total_mass(&self) -> Rational {
        self.edge_mass.iter().fold(int(0), |a, b| a + b)
    }

    /// Mass of the boundary from parameter 0 to `edge + t`, counterclockwise.
    pub fn cumulative(&self, edge: usize, t: &Rational) -> Rational {
        let before = self.edge_mass[..edge].iter().fold(int(0), |a, b| a + b);
        self.pieces[edge].iter().fold(before, |acc, p| {
            let end = (&p.end).min(t);
            if *end > p.start {
                acc + &p.rate * (end - &p.start)
            } else {
                acc
            }
        })
    }

    /// Mass of the part of edge `edge` with parameter in `[start, end]`.
    pub fn edge_arc_mass(&self, edge: usize, start: &Rational, end: &Rational) -> Rational {
        self.cumulative(edge, end) - self.cumulative(edge, start)
    }
}

/// π-measure of a body that is not a quasi hexagon: for every edge `[a, b]` of
/// gauge-length `ℓ > 1` it vanishes on the parts of the edge within gauge distance
/// `ℓ - 1` of either endpoint and on the two adjacent edges; elsewhere it is uniform
/// in gauge-length.
pub fn build_pi_measure(body: &SymmetricPolygon) -> Result<AngularMeasure> {
    if is_quasi_hexagon(body).0 {
        return Err(Error::Domain("a π-measure is only defined for bodies that are not quasi hexagons".to_string()));
    }
    let m = body.len();
    let one = int(1);
    let mut zero = Vec::new();
    for e in 0..m {
        let l = body.edge_length(e);
        if l <= one {
            continue;
        }
        zero.push((e, int(0), (&l - &one) / &l));
        zero.push((e, &one / &l, one.clone()));
        zero.push(((e + m - 1) % m, int(0), one.clone()));
        zero.push(((e + 1) % m, int(0), one.clone()));
    }
    zero.sort();
    zero.dedup();
    AngularMeasure::with_zero_set(body, zero)
}

fn parameter(body: &SymmetricPolygon, p: &Point) -> Result<Rational> {
    let (e, t) = body.boundary_parameter(p)?;
    Ok(int(e as i64) + t)
}

fn split(s: &Rational) -> (usize, Rational) {
    let e = s.floor();
    let t = s - &e;
    (e.to_integer().try_into().expect("small index"), t)
}

/// Measure of the arc from `p` to `q` (both on the boundary): the clockwise arc, or
/// the minor arc (the one of the two arcs that is at most a half turn). The minor
/// arc between opposite points is ambiguous and rejected.
pub fn arc_measure(mu: &AngularMeasure, p: &Point, q: &Point, direction: ArcDirection) -> Result<Rational> {
    let body = &mu.body;
    match direction {
        ArcDirection::Clockwise => {
            let sp = parameter(body, p)?;
            let sq = parameter(body, q)?;
            let (ep, tp) = split(&sp);
            let (eq, tq) = split(&sq);
            let fp = mu.cumulative(ep, &tp);
            let fq = mu.cumulative(eq, &tq);
            Ok(if sq <= sp { fp - fq } else { fp + int(2) - fq })
        }
        ArcDirection::Minor => {
            parameter(body, p)?;
            parameter(body, q)?;
            if *q == p.neg() {
                return Err(Error::Domain(format!("the minor arc between {p} and its opposite point is ambiguous")));
            }
            match p.cross(q).cmp(&int(0)) {
                Ordering::Greater => arc_measure(mu, q, p, ArcDirection::Clockwise),
                _ => arc_measure(mu, p, q, ArcDirection::Clockwise),
            }
        }
    }
}

/// Interior angle at `v` of a counterclockwise polygon with previous vertex `u` and
/// next vertex `w`: the clockwise arc from the unit-gauge direction of `u - v` to
/// that of `w - v`.
pub fn interior_angle(mu: &AngularMeasure, u: &Point, v: &Point, w: &Point) -> Result<Rational> {
    let a = mu.body.normalize(&u.sub(v))?;
    let b = mu.body.normalize(&w.sub(v))?;
    arc_measure(mu, &a, &b, ArcDirection::Clockwise)
}

/// Sum of the interior angles of a convex polygon given in either orientation.
/// For `k` vertices this is `k - 2` exactly, for every symmetric measure.
pub fn polygon_angle_sum(mu: &AngularMeasure, vertices: &[Point]) -> Result<Rational> {
    let k = vertices.len();
    if k < 3 {
        return Err(Error::Domain("a polygon needs at least three vertices".to_string()));
    }
    let mut vs = vertices.to_vec();
    let turn = |vs: &[Point], i: usize| {
        let a = &vs[i];
        let b = &vs[(i + 1) % k];
        let c = &vs[(i + 2) % k];
        b.sub(a).cross(&c.sub(b))
    };
    if turn(&vs, 0).is_negative() {
        vs.reverse();
    }
    for i in 0..k {
        if !turn(&vs, i).is_positive() {
            return Err(Error::Domain("polygon is degenerate or not strictly convex".to_string()));
        }
    }
    let mut sum = int(0);
    for i in 0..k {
        sum += interior_angle(mu, &vs[(i + k - 1) % k], &vs[i], &vs[(i + 1) % k])?;
    }
    Ok(sum)
}

pub fn triangle_angle_sum(mu: &AngularMeasure, triangle: &[Point; 3]) -> Result<Rational> {
    polygon_angle_sum(mu, triangle)
}

/// Four translates around a central `K`: either `{K, K + 2u₀, K + 2u₁, K + 2u₂}` or,
/// with `shifted`, `{K, K + 2u₀, K + 2u₁, K + 2(u₁ - u₂)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiAngleConfig {
    pub u0: Point,
    pub u1: Point,
    pub u2: Point,
    pub shifted: bool,
}

impl PiAngleConfig {
    pub fn packing(&self, body: &SymmetricPolygon) -> Result<PlanarPacking> {
        let two = int(2);
        let fourth = if self.shifted {
            self.u1.sub(&self.u2)
        } else {
            self.u2.clone()
        };
        PlanarPacking::new(
            body.clone(),
            vec![
                Point::origin(),
                self.u0.scale(&two),
                self.u1.scale(&two),
                fourth.scale(&two),
            ],
        )
    }
}

/// For a separable configuration with `u₁` strictly inside the clockwise arc from
/// `u₂` to `u₀`, reports whether that arc has measure at least `π`.
pub fn lemma_piangle_check(mu: &AngularMeasure, config: &PiAngleConfig) -> Result<bool> {
    let body = &mu.body;
    let s = [&config.u0, &config.u1, &config.u2]
        .iter()
        .map(|u| parameter(body, u))
        .collect::<Result<Vec<_>>>()?;
    let period = int(body.len() as i64);
    let cw = |from: &Rational, to: &Rational| {
        let d = from - to;
        if d.is_negative() {
            d + &period
        } else {
            d
        }
    };
    let to_u1 = cw(&s[2], &s[1]);
    let to_u0 = cw(&s[2], &s[0]);
    if to_u1.is_zero() || to_u1 >= to_u0 {
        return Err(Error::Precondition("u1 is not inside the clockwise arc from u2 to u0".to_string()));
    }
    let packing = config.packing(body)?;
    match verify_total_separability(&packing) {
        Ok(report) if report.separable => {}
        Ok(_) => return Err(Error::Precondition("configuration is not totally separable".to_string())),
        Err(Error::Overlap { i, j, .. }) => {
            return Err(Error::Precondition(format!("configuration is not a packing: translates {i} and {j} overlap")))
        }
        Err(e) => return Err(e),
    }
    Ok(arc_measure(mu, &config.u2, &config.u0, ArcDirection::Clockwise)? >= int(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn uniform_measure_basics() {
        let body = SymmetricPolygon::octagon();
        let mu = AngularMeasure::uniform(&body);
        assert_eq!(mu.total_mass(), int(2));
        let p = body.vertex(0).clone();
        assert_eq!(arc_measure(&mu, &p, &p.neg(), ArcDirection::Clockwise).unwrap(), int(1));
        assert!(arc_measure(&mu, &p, &p.neg(), ArcDirection::Minor).is_err());
        // Adjacent vertices: the share of the edge in the total gauge-length.
        let perimeter = (0..8).fold(int(0), |a, e| a + body.edge_length(e));
        let expected = int(2) * body.edge_length(0) / perimeter;
        let q = body.vertex(1).clone();
        assert_eq!(arc_measure(&mu, &q, &p, ArcDirection::Clockwise).unwrap(), expected);
        assert_eq!(arc_measure(&mu, &p, &q, ArcDirection::Minor).unwrap(), expected);
    }

    #[test]
    fn pi_measure_of_elongated_octagon() {
        let body = SymmetricPolygon::elongated_octagon();
        let mu = build_pi_measure(&body).unwrap();
        assert_eq!(mu.total_mass(), int(2));
        for (e, s, t) in mu.zero_arcs() {
            assert_eq!(mu.edge_arc_mass(*e, s, t), int(0));
        }
        assert_eq!(mu.edge_arc_mass(0, &rat(1, 3), &rat(2, 3)), rat(1, 2));
        assert_eq!(mu.edge_arc_mass(2, &int(0), &int(1)), rat(1, 2));
        assert!(build_pi_measure(&SymmetricPolygon::square()).is_err());
        assert_eq!(build_pi_measure(&SymmetricPolygon::octagon()).unwrap(), AngularMeasure::uniform(&SymmetricPolygon::octagon()));
    }

    #[test]
    fn angle_sums() {
        let mu = build_pi_measure(&SymmetricPolygon::elongated_octagon()).unwrap();
        let tri = [Point::ints(0, 0), Point::ints(3, 1), Point::ints(1, 2)];
        assert_eq!(triangle_angle_sum(&mu, &tri).unwrap(), int(1));
        let quad = [Point::ints(0, 0), Point::ints(4, 0), Point::ints(5, 3), Point::ints(-1, 2)];
        assert_eq!(polygon_angle_sum(&mu, &quad).unwrap(), int(2));
        let flat = [Point::ints(0, 0), Point::ints(1, 1), Point::ints(2, 2)];
        assert!(triangle_angle_sum(&mu, &flat).is_err());
    }

    #[test]
    fn compass_configuration() {
        let body = SymmetricPolygon::octagon();
        let mu = AngularMeasure::uniform(&body);
        let config = PiAngleConfig {
            u0: Point::ints(1, 0),
            u1: Point::ints(0, 1),
            u2: Point::ints(-1, 0),
            shifted: false,
        };
        assert!(lemma_piangle_check(&mu, &config).unwrap());
        assert_eq!(arc_measure(&mu, &config.u2, &config.u0, ArcDirection::Clockwise).unwrap(), int(1));
        // K, K + 2u0 and K + 2u1 touch pairwise: a triangle, never separable here.
        let broken = PiAngleConfig {
            u0: Point::ints(1, 0),
            u1: Point::ratios((1, 2), (111, 140)),
            u2: Point::ints(-1, 0),
            shifted: false,
        };
        assert_eq!(body.gauge(&broken.u1), int(1));
        assert!(matches!(lemma_piangle_check(&mu, &broken), Err(Error::Precondition(_))));
    }
}
