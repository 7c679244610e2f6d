use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::polygon::{Point, SymmetricPolygon};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, rational_to_f64, Rational};

/// Translates `centers[i] + K` of one body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarPacking {
    body: SymmetricPolygon,
    centers: Vec<Point>,
}

impl PlanarPacking {
    /// Rejects duplicate centres. Overlaps are reported by [`PlanarPacking::check`]
    /// and by the functions that need a packing.
    pub fn new(body: SymmetricPolygon, centers: Vec<Point>) -> Result<Self> {
        let mut sorted: Vec<&Point> = centers.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("duplicate centre {}", w[0])));
        }
        Ok(PlanarPacking { body, centers })
    }

    pub fn body(&self) -> &SymmetricPolygon {
        &self.body
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Checks `‖c_i - c_j‖_K ≥ 2` for all pairs; the error names the first
    /// overlapping pair in lexicographic order.
    pub fn check(&self) -> Result<()> {
        contact_graph(self).map(|_| ())
    }
}

/// Integer coordinates for the facet functionals and the centres of a packing:
/// `normals[k] = L·n_k`, `centers[i] = M·c_i`, and `‖c_i - c_j‖_K` compares with 2
/// as `max_k normals[k]·(centers[i] - centers[j])` with `2·L·M`.
pub(crate) struct IntegerFrame {
    pub normals: Vec<(i128, i128)>,
    pub centers: Vec<(i128, i128)>,
    pub two: i128,
}

impl IntegerFrame {
    pub fn new(body: &SymmetricPolygon, centers: &[Point]) -> Option<Self> {
        let lcm_of = |values: &mut dyn Iterator<Item = &Rational>| {
            values.fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
        };
        let l = lcm_of(&mut body.normals().iter().flat_map(|p| [&p.x, &p.y]));
        let m = lcm_of(&mut centers.iter().flat_map(|p| [&p.x, &p.y]));
        let bound = BigInt::from(1u64 << 40);
        let scale = |p: &Point, s: &BigInt| -> Option<(i128, i128)> {
            let x = (&p.x * Rational::from_integer(s.clone())).to_integer();
            let y = (&p.y * Rational::from_integer(s.clone())).to_integer();
            if x.abs() > bound || y.abs() > bound {
                return None;
            }
            Some((x.to_i128()?, y.to_i128()?))
        };
        let normals = body
            .normals()
            .iter()
            .map(|n| scale(n, &l))
            .collect::<Option<Vec<_>>>()?;
        let centers = centers
            .iter()
            .map(|c| scale(c, &m))
            .collect::<Option<Vec<_>>>()?;
        let two = (BigInt::from(2) * &l * &m).to_i128()?;
        if two.abs() > 1i128 << 90 {
            return None;
        }
        Some(IntegerFrame { normals, centers, two })
    }

    /// `max_k normals[k]·(centers[i] - centers[j])`, i.e. `2LM·‖c_i - c_j‖_K / 2`.
    pub fn scaled_gauge(&self, i: usize, j: usize) -> i128 {
        let (xi, yi) = self.centers[i];
        let (xj, yj) = self.centers[j];
        let (dx, dy) = (xi - xj, yi - yj);
        self.normals
            .iter()
            .map(|&(a, b)| a * dx + b * dy)
            .max()
            .expect("nonempty")
    }
}

/// Undirected simple graph on `n` vertices with sorted edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl ContactGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        ContactGraph { n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Some triangle `(a, b, c)` with `a < b < c`, if any.
    pub fn find_triangle(&self) -> Option<(usize, usize, usize)> {
        let adj = self.adjacency();
        for &(a, b) in &self.edges {
            for &c in &adj[b] {
                if c > b && self.has_edge(a, c) {
                    return Some((a, b, c));
                }
            }
        }
        None
    }
}

/// Pairs of centres whose Euclidean distance allows `‖c_i - c_j‖_K ≤ 2`, found by
/// bucketing on a grid of cell size slightly above `2·max|v|`.
fn candidate_pairs(body: &SymmetricPolygon, centers: &[Point]) -> Vec<(usize, usize)> {
    let radius = body
        .vertices()
        .iter()
        .map(|v| {
            let (x, y) = v.to_f64();
            libm::sqrt(x * x + y * y)
        })
        .fold(0.0, f64::max);
    let cell = 2.0 * radius * 1.001;
    let key = |p: &Point| {
        let (x, y) = p.to_f64();
        (libm::floor(x / cell) as i64, libm::floor(y / cell) as i64)
    };
    let mut buckets: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, c) in centers.iter().enumerate() {
        buckets.entry(key(c)).or_default().push(i);
    }
    let mut pairs = Vec::new();
    for (i, c) in centers.iter().enumerate() {
        let (kx, ky) = key(c);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(list) = buckets.get(&(kx + dx, ky + dy)) {
                    pairs.extend(list.iter().filter(|&&j| j > i).map(|&j| (i, j)));
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Touching pairs (`‖c_i - c_j‖_K = 2`). Fails with [`Error::Overlap`] on the first
/// pair (lexicographically) at gauge below 2.
pub fn contact_graph(packing: &PlanarPacking) -> Result<ContactGraph> {
    let body = packing.body();
    let centers = packing.centers();
    let pairs = candidate_pairs(body, centers);
    let mut edges = Vec::new();
    if let Some(frame) = IntegerFrame::new(body, centers) {
        for (i, j) in pairs {
            let g = frame.scaled_gauge(i, j);
            if g < frame.two {
                let gauge = body.gauge(&centers[i].sub(&centers[j]));
                return Err(Error::Overlap {
                    i,
                    j,
                    gauge: format_rational(&gauge),
                });
            }
            if g == frame.two {
                edges.push((i, j));
            }
        }
    } else {
        let two = int(2);
        for (i, j) in pairs {
            let gauge = body.gauge(&centers[i].sub(&centers[j]));
            if gauge < two {
                return Err(Error::Overlap {
                    i,
                    j,
                    gauge: format_rational(&gauge),
                });
            }
            if gauge == two {
                edges.push((i, j));
            }
        }
    }
    Ok(ContactGraph::new(centers.len(), edges))
}

/// Float approximation of `‖x‖_K`, for presentation.
pub fn gauge_f64(body: &SymmetricPolygon, x: &Point) -> f64 {
    rational_to_f64(&body.gauge(x))
}
