use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, rat, rational_to_f64, Rational};

/// A point (or vector) of the plane with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub fn ratios(x: (i64, i64), y: (i64, i64)) -> Self {
        Point::new(rat(x.0, x.1), rat(y.0, y.1))
    }

    pub fn origin() -> Self {
        Point::ints(0, 0)
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> Point {
        Point::new(-&self.x, -&self.y)
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn dot(&self, o: &Point) -> Rational {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rational_to_f64(&self.x), rational_to_f64(&self.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

/// Half-plane index of a nonzero direction for angular sorting: 0 for angles in
/// `[0, π)`, 1 for `[π, 2π)`.
fn half(p: &Point) -> u8 {
    if p.y.is_positive() || (p.y.is_zero() && p.x.is_positive()) {
        0
    } else {
        1
    }
}

/// Exact comparison of the counterclockwise angles of two nonzero directions,
/// measured from the positive x axis.
pub fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    half(a)
        .cmp(&half(b))
        .then_with(|| int(0).cmp(&a.cross(b)))
}

/// Counterclockwise angle order of `a` and `b` measured from `reference`.
pub fn angle_cmp_from(reference: &Point, a: &Point, b: &Point) -> Ordering {
    let rel = |p: &Point| {
        // Rotate so that `reference` becomes the positive x axis (up to scale).
        Point::new(reference.dot(p), reference.cross(p))
    };
    angle_cmp(&rel(a), &rel(b))
}

/// The line `{x : normal · x = offset}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub normal: Point,
    pub offset: Rational,
}

impl Line {
    /// Same line with the normal scaled to a primitive integer vector with
    /// positive leading component, so equal lines compare equal.
    pub fn canonical(&self) -> Line {
        let lcm = [&self.normal.x, &self.normal.y, &self.offset]
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let nums: Vec<BigInt> = [&self.normal.x, &self.normal.y, &self.offset]
            .iter()
            .map(|r| r.numer() * (&lcm / r.denom()))
            .collect();
        let mut g = nums.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if g.is_zero() {
            return self.clone();
        }
        let leading = if nums[0].is_zero() { &nums[1] } else { &nums[0] };
        if leading.is_negative() {
            g = -g;
        }
        let f = |v: &BigInt| Rational::from_integer(v / &g);
        Line {
            normal: Point::new(f(&nums[0]), f(&nums[1])),
            offset: f(&nums[2]),
        }
    }

    pub fn side(&self, p: &Point) -> Ordering {
        self.normal.dot(p).cmp(&self.offset)
    }
}

/// An origin-symmetric convex polygon with rational vertices in counterclockwise
/// order, no three of them collinear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricPolygon {
    vertices: Vec<Point>,
    /// `normals[i] · x = 1` on edge `i` (from `vertices[i]` to `vertices[i + 1]`).
    normals: Vec<Point>,
}

impl SymmetricPolygon {
    /// Accepts the vertices in either orientation (clockwise input is reversed)
    /// starting anywhere; checks strict convexity and central symmetry.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let m = vertices.len();
        if m < 4 || m % 2 == 1 {
            return Err(Error::Domain(format!(
                "a centrally symmetric polygon needs an even number >= 4 of vertices, got {m}"
            )));
        }
        let mut vertices = vertices;
        let turn = |vs: &[Point], i: usize| {
            let a = &vs[i];
            let b = &vs[(i + 1) % m];
            let c = &vs[(i + 2) % m];
            b.sub(a).cross(&c.sub(b))
        };
        if turn(&vertices, 0).is_negative() {
            vertices.reverse();
        }
        for i in 0..m {
            if !turn(&vertices, i).is_positive() {
                return Err(Error::Domain(format!(
                    "vertices are not in strictly convex position at {}",
                    vertices[(i + 1) % m]
                )));
            }
        }
        let half = m / 2;
        for i in 0..half {
            if vertices[i + half] != vertices[i].neg() {
                return Err(Error::Domain(format!(
                    "polygon is not symmetric about the origin: {} has no opposite vertex {}",
                    vertices[i],
                    vertices[i].neg()
                )));
            }
        }
        // Strict convexity plus symmetry makes the turning total 2π exactly once
        // only if the edge directions wind once; check the angular order.
        for i in 0..m {
            if !vertices[i].cross(&vertices[(i + 1) % m]).is_positive() {
                return Err(Error::Domain("vertices wind around the origin more than once".to_string()));
            }
        }
        let normals = (0..m)
            .map(|i| {
                let a = &vertices[i];
                let b = &vertices[(i + 1) % m];
                let c = a.cross(b);
                Point::new((&b.y - &a.y) / &c, (&a.x - &b.x) / &c)
            })
            .collect();
        Ok(SymmetricPolygon { vertices, normals })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self> {
        SymmetricPolygon::new(coords.iter().map(|&(x, y)| Point::ints(x, y)).collect())
    }

    /// `[-1, 1]²`.
    pub fn square() -> Self {
        SymmetricPolygon::from_ints(&[(1, -1), (1, 1), (-1, 1), (-1, -1)]).expect("valid body")
    }

    /// `conv{±(1,0), ±(0,1), ±(1,1)}`.
    pub fn hexagon() -> Self {
        SymmetricPolygon::from_ints(&[(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)])
            .expect("valid body")
    }

    /// Octagon with vertices `(±1, 0)`, `(0, ±1)`, `(±r, ±r)` for `r = 70/99 ≈ 1/√2`:
    /// a rational stand-in for the regular octagon of circumradius 1.
    pub fn octagon() -> Self {
        let r = rat(70, 99);
        let z = int(0);
        let o = int(1);
        let vs = [
            (o.clone(), z.clone()),
            (r.clone(), r.clone()),
            (z.clone(), o.clone()),
            (-r.clone(), r.clone()),
        ];
        let mut vertices: Vec<Point> = vs.iter().map(|(x, y)| Point::new(x.clone(), y.clone())).collect();
        let opposite: Vec<Point> = vertices.iter().map(Point::neg).collect();
        vertices.extend(opposite);
        SymmetricPolygon::new(vertices).expect("valid body")
    }

    /// Octagon `(1, ∓3/4)`, `(±1/4, 1)` and antipodes: one pair of opposite edges of
    /// gauge-length `3/2` and no quasi-hexagon structure.
    pub fn elongated_octagon() -> Self {
        let vs = [
            Point::ratios((1, 1), (-3, 4)),
            Point::ratios((1, 1), (3, 4)),
            Point::ratios((1, 4), (1, 1)),
            Point::ratios((-1, 4), (1, 1)),
        ];
        let mut vertices = vs.to_vec();
        vertices.extend(vs.iter().map(Point::neg));
        SymmetricPolygon::new(vertices).expect("valid body")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.len()]
    }

    /// Edge `i` as its endpoints.
    pub fn edge(&self, i: usize) -> (&Point, &Point) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn is_parallelogram(&self) -> bool {
        self.len() == 4
    }

    /// Minkowski functional `‖x‖_K`: the largest value of a facet functional at `x`.
    pub fn gauge(&self, x: &Point) -> Rational {
        self.normals
            .iter()
            .map(|n| n.dot(x))
            .max()
            .expect("nonempty")
            .max(int(0))
    }

    /// Gauge-length of edge `i`.
    pub fn edge_length(&self, i: usize) -> Rational {
        let (a, b) = self.edge(i);
        self.gauge(&b.sub(a))
    }

    /// Edges whose closure contains `p`, for `p` on the boundary: one edge for a
    /// relative-interior point, the two incident edges `(i - 1, i)` for vertex `i`.
    pub fn boundary_location(&self, p: &Point) -> Result<BoundaryLocation> {
        if self.gauge(p) != int(1) {
            return Err(Error::Domain(format!("{p} is not on the boundary")));
        }
        let m = self.len();
        if let Some(i) = self.vertices.iter().position(|v| v == p) {
            return Ok(BoundaryLocation::Vertex(i));
        }
        let i = (0..m)
            .find(|&i| self.normals[i].dot(p) == int(1))
            .expect("gauge 1 means some facet is tight");
        Ok(BoundaryLocation::Edge(i))
    }

    /// Position of a boundary point as `edge + t` with `t ∈ [0, 1)` the affine
    /// parameter along the edge.
    pub fn boundary_parameter(&self, p: &Point) -> Result<(usize, Rational)> {
        match self.boundary_location(p)? {
            BoundaryLocation::Vertex(i) => Ok((i, int(0))),
            BoundaryLocation::Edge(i) => {
                let (a, b) = self.edge(i);
                let d = b.sub(a);
                let t = if d.x.is_zero() {
                    (&p.y - &a.y) / &d.y
                } else {
                    (&p.x - &a.x) / &d.x
                };
                Ok((i, t))
            }
        }
    }

    /// The boundary point at `edge + t`.
    pub fn boundary_point(&self, edge: usize, t: &Rational) -> Point {
        let (a, b) = self.edge(edge);
        a.add(&b.sub(a).scale(t))
    }

    /// `x / ‖x‖_K` for `x ≠ 0`.
    pub fn normalize(&self, x: &Point) -> Result<Point> {
        if x.is_origin() {
            return Err(Error::Domain("cannot normalise the zero vector".to_string()));
        }
        Ok(x.scale(&(int(1) / self.gauge(x))))
    }

    /// Euclidean area, exactly.
    pub fn area(&self) -> Rational {
        let m = self.len();
        (0..m)
            .map(|i| self.vertices[i].cross(&self.vertices[(i + 1) % m]))
            .fold(int(0), |a, b| a + b)
            / int(2)
    }

    pub fn classify(&self) -> BodyClass {
        if self.is_parallelogram() {
            BodyClass::Parallelogram
        } else if is_quasi_hexagon(self).0 {
            BodyClass::QuasiHexagon
        } else {
            BodyClass::General
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryLocation {
    Vertex(usize),
    Edge(usize),
}

/// The three classes that determine the optimal contact numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BodyClass {
    Parallelogram,
    /// A quasi hexagon that is not a parallelogram.
    QuasiHexagon,
    General,
}

impl BodyClass {
    pub fn name(self) -> &'static str {
        match self {
            BodyClass::Parallelogram => "parallelogram",
            BodyClass::QuasiHexagon => "quasi-hexagon",
            BodyClass::General => "general",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "parallelogram" => Ok(BodyClass::Parallelogram),
            "quasi-hexagon" | "quasi-hex" => Ok(BodyClass::QuasiHexagon),
            "general" => Ok(BodyClass::General),
            other => Err(Error::Parse(format!("unknown body class {other:?}"))),
        }
    }

    /// Largest contact degree in a totally separable packing of the class.
    pub fn hadwiger_degree(self) -> usize {
        match self {
            BodyClass::Parallelogram => 8,
            BodyClass::QuasiHexagon => 6,
            BodyClass::General => 4,
        }
    }
}

impl fmt::Display for BodyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Two unit-gauge vectors `u₁, u₂` with `[u₁, u₁ + u₂]` and `[u₂, u₁ + u₂]` on the
/// boundary; `u₁ + u₂` is a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiHexagonWitness {
    pub u1: Point,
    pub u2: Point,
    /// Index of the vertex `u₁ + u₂`.
    pub vertex: usize,
}

/// Whether the boundary contains two segments with a common endpoint, each of
/// gauge-length at least 1 (collinear segments allowed). Equivalently, some edge
/// has gauge-length at least 2 or two adjacent edges have gauge-length at least 1.
///
/// The witness is taken at a vertex `b` with both incident edges long for which
/// `b = w₁ + w₂`, where `w₁`, `w₂` are the unit-gauge directions from the
/// neighbouring vertices towards `b`.
pub fn is_quasi_hexagon(body: &SymmetricPolygon) -> (bool, Option<QuasiHexagonWitness>) {
    let m = body.len();
    let one = int(1);
    let lengths: Vec<Rational> = (0..m).map(|i| body.edge_length(i)).collect();
    let literal = lengths.iter().any(|l| *l >= int(2))
        || (0..m).any(|i| lengths[i] >= one && lengths[(i + 1) % m] >= one);
    if !literal {
        return (false, None);
    }
    for b in 0..m {
        let before = (b + m - 1) % m;
        if lengths[before] < one || lengths[b] < one {
            continue;
        }
        let vb = body.vertex(b);
        let w1 = vb.sub(body.vertex(before)).scale(&(int(1) / &lengths[before]));
        let w2 = vb.sub(body.vertex(b + 1)).scale(&(int(1) / &lengths[b]));
        if w1.add(&w2) == *vb {
            return (
                true,
                Some(QuasiHexagonWitness {
                    u1: w1,
                    u2: w2,
                    vertex: b,
                }),
            );
        }
    }
    (true, None)
}

/// A centred parallelogram `{|n₁·x| ≤ 1, |n₂·x| ≤ 1}` containing the body, with the
/// midpoints `p₁` (`n₁·p₁ = 1`, `n₂·p₁ = 0`) and `p₂` of two adjacent sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircumscribedParallelogram {
    pub n1: Point,
    pub n2: Point,
    /// Corners in counterclockwise order.
    pub corners: [Point; 4],
    /// Side midpoints `p₁, p₂, -p₁, -p₂`.
    pub midpoints: [Point; 4],
    pub area: Rational,
}

/// A minimum-area parallelogram containing the body. Its sides lie on facet lines:
/// the area is `4 / |det(n_i, n_j)|` over pairs of facet functionals. Among the
/// minimisers, the first pair whose side midpoints lie on the boundary is returned.
pub fn min_area_circumscribed_parallelogram(body: &SymmetricPolygon) -> Result<CircumscribedParallelogram> {
    let half = body.len() / 2;
    let normals = &body.normals()[..half];
    let mut best = int(0);
    for i in 0..half {
        for j in i + 1..half {
            best = best.max(normals[i].cross(&normals[j]).abs());
        }
    }
    for i in 0..half {
        for j in i + 1..half {
            let det = normals[i].cross(&normals[j]);
            if det.abs() != best {
                continue;
            }
            let (n1, n2) = if det.is_positive() {
                (normals[i].clone(), normals[j].clone())
            } else {
                (normals[j].clone(), normals[i].clone())
            };
            let det = n1.cross(&n2);
            // Solve n1·p = a, n2·p = b.
            let solve = |a: &Rational, b: &Rational| {
                Point::new((a * &n2.y - b * &n1.y) / &det, (b * &n1.x - a * &n2.x) / &det)
            };
            let (one, zero) = (int(1), int(0));
            let p1 = solve(&one, &zero);
            let p2 = solve(&zero, &one);
            if body.gauge(&p1) != one || body.gauge(&p2) != one {
                continue;
            }
            let c = solve(&one, &one);
            let d = solve(&-one.clone(), &one);
            return Ok(CircumscribedParallelogram {
                corners: [c.clone(), d.clone(), c.neg(), d.neg()],
                midpoints: [p1.clone(), p2.clone(), p1.neg(), p2.neg()],
                area: int(4) / det.abs(),
                n1,
                n2,
            });
        }
    }
    Err(Error::Internal(
        "no minimum-area circumscribed parallelogram has its midpoints on the boundary".to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_examples() {
        let sq = SymmetricPolygon::square();
        assert_eq!(sq.gauge(&Point::ints(2, 0)), int(2));
        assert_eq!(sq.gauge(&Point::ints(1, 1)), int(1));
        assert_eq!(sq.gauge(&Point::origin()), int(0));
        assert_eq!(SymmetricPolygon::hexagon().gauge(&Point::ints(1, 1)), int(1));
        assert_eq!(SymmetricPolygon::hexagon().gauge(&Point::ints(1, -1)), int(2));
    }

    #[test]
    fn invalid_polygons_are_rejected() {
        assert!(SymmetricPolygon::from_ints(&[(1, 0), (0, 1), (-1, 0)]).is_err());
        assert!(SymmetricPolygon::from_ints(&[(1, 0), (1, 1), (-1, 0), (-1, -2)]).is_err());
        // Collinear vertex (1, 0) between (1, -1) and (1, 1).
        assert!(SymmetricPolygon::from_ints(&[(1, -1), (1, 0), (1, 1), (-1, 1), (-1, 0), (-1, -1)]).is_err());
        // Clockwise input is reoriented.
        let cw = SymmetricPolygon::from_ints(&[(1, 1), (1, -1), (-1, -1), (-1, 1)]).unwrap();
        assert_eq!(cw.area(), int(4));
    }

    #[test]
    fn classification() {
        let (q, w) = is_quasi_hexagon(&SymmetricPolygon::square());
        assert!(q && w.is_some());
        let (q, w) = is_quasi_hexagon(&SymmetricPolygon::hexagon());
        assert!(q);
        let w = w.unwrap();
        let hex = SymmetricPolygon::hexagon();
        assert_eq!(w.u1.add(&w.u2), *hex.vertex(w.vertex));
        assert_eq!((hex.gauge(&w.u1), hex.gauge(&w.u2)), (int(1), int(1)));
        assert!(!is_quasi_hexagon(&SymmetricPolygon::octagon()).0);
        assert!(!is_quasi_hexagon(&SymmetricPolygon::elongated_octagon()).0);
        let lengths: Vec<Rational> = (0..8).map(|i| SymmetricPolygon::elongated_octagon().edge_length(i)).collect();
        assert_eq!(lengths[..4], [rat(3, 2), rat(3, 4), rat(1, 2), rat(3, 4)]);
    }

    #[test]
    fn circumscribed_parallelograms() {
        let p = min_area_circumscribed_parallelogram(&SymmetricPolygon::square()).unwrap();
        assert_eq!(p.area, int(4));
        let mut mids = p.midpoints.to_vec();
        mids.sort();
        let mut expected = [Point::ints(1, 0), Point::ints(0, 1), Point::ints(-1, 0), Point::ints(0, -1)].to_vec();
        expected.sort();
        assert_eq!(mids, expected);
        let h = min_area_circumscribed_parallelogram(&SymmetricPolygon::hexagon()).unwrap();
        assert_eq!(h.area, int(4));
        let body = SymmetricPolygon::octagon();
        let o = min_area_circumscribed_parallelogram(&body).unwrap();
        assert!(o.midpoints.iter().all(|m| body.gauge(m) == int(1)));
    }

    #[test]
    fn canonical_lines() {
        let a = Line { normal: Point::ratios((1, 2), (0, 1)), offset: rat(1, 2) };
        let b = Line { normal: Point::ints(-3, 0), offset: int(-3) };
        assert_eq!(a.canonical(), b.canonical());
    }
}
