use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Signed;

use super::packing::{contact_graph, ContactGraph, PlanarPacking};
use super::polygon::{BoundaryLocation, Line};
use crate::error::Result;
use crate::scalar::{int, Rational};

/// Outcome of the separability check for one touching pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub i: usize,
    pub j: usize,
    /// A line separating translates `i` and `j` and missing every interior.
    pub line: Option<Line>,
    /// On failure, a translate whose constraint emptied the feasible set.
    pub blocker: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparabilityReport {
    pub separable: bool,
    pub graph: ContactGraph,
    pub pairs: Vec<PairWitness>,
}

impl SeparabilityReport {
    pub fn lines(&self) -> Vec<Line> {
        self.pairs.iter().filter_map(|p| p.line.clone()).collect()
    }

    /// Witness lines with duplicates removed, in canonical form and sorted.
    pub fn distinct_lines(&self) -> Vec<Line> {
        let mut lines: Vec<Line> = self.lines().iter().map(Line::canonical).collect();
        lines.sort();
        lines.dedup();
        lines
    }

    pub fn first_failure(&self) -> Option<&PairWitness> {
        self.pairs.iter().find(|p| p.line.is_none())
    }
}

/// Sorted disjoint closed intervals of the parameter range.
type IntervalSet = Vec<(Rational, Rational)>;

fn intersect(a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = (&a[i].0).max(&b[j].0).clone();
        let hi = (&a[i].1).min(&b[j].1).clone();
        if lo <= hi {
            out.push((lo, hi));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// `{λ ∈ [0, 1] : f(λ) ≤ 0} ∪ {λ ∈ [0, 1] : f(λ) ≥ top}` for
/// `f(λ) = b + λ (a - b)`.
fn allowed(a: &Rational, b: &Rational, top: &Rational) -> IntervalSet {
    let zero = int(0);
    let one = int(1);
    let slope = a - b;
    // Sublevel {f ≤ level} or superlevel {f ≥ level} within [0, 1].
    let piece = |level: &Rational, below: bool| -> Option<(Rational, Rational)> {
        if slope == zero {
            let holds = if below { b <= level } else { b >= level };
            return holds.then(|| (zero.clone(), one.clone()));
        }
        let root = (level - b) / &slope;
        // f ≤ level ⇔ λ ≤ root when the slope is positive.
        let lower_side = below == slope.is_positive();
        let (lo, hi) = if lower_side {
            (zero.clone(), root.min(one.clone()))
        } else {
            (root.max(zero.clone()), one.clone())
        };
        (lo <= hi).then_some((lo, hi))
    };
    let mut out: IntervalSet = [piece(&zero, true), piece(top, false)]
        .into_iter()
        .flatten()
        .collect();
    out.sort();
    if out.len() == 2 && out[0].1 >= out[1].0 {
        let hi = (&out[0].1).max(&out[1].1).clone();
        out = vec![(out[0].0.clone(), hi)];
    }
    out
}

/// Decides, for every touching pair, whether a line separates the two translates
/// without meeting any translate's interior.
///
/// Such a line passes through the contact and is supporting for both translates,
/// so its functional lies in the normal cone of `K` at `d/2` (`d = c_j - c_i`),
/// spanned by one or two facet functionals `n_a`, `n_b`. For
/// `φ_λ = λ n_a + (1 - λ) n_b` the line is `φ_λ(x) = φ_λ(c_i) + 1`, and translate `t`
/// avoids it exactly when `φ_λ(c_t - c_i) ≤ 0` or `≥ 2`. Each condition is linear in
/// `λ`, so the feasible set is a finite union of closed intervals computed exactly.
/// The witness uses the smallest feasible `λ`.
pub fn verify_total_separability(packing: &PlanarPacking) -> Result<SeparabilityReport> {
    let graph = contact_graph(packing)?;
    let body = packing.body();
    let centers = packing.centers();
    let m = body.len();
    let two = int(2);
    let mut pairs = Vec::with_capacity(graph.edge_count());
    for &(i, j) in graph.edges() {
        let half = centers[j].sub(&centers[i]).scale(&Rational::new(1.into(), 2.into()));
        let (na, nb) = match body.boundary_location(&half)? {
            BoundaryLocation::Edge(e) => (e, e),
            BoundaryLocation::Vertex(v) => (v, (v + m - 1) % m),
        };
        let (na, nb) = (&body.normals()[na], &body.normals()[nb]);
        let mut feasible: IntervalSet = if na == nb {
            vec![(int(0), int(0))]
        } else {
            vec![(int(0), int(1))]
        };
        let mut blocker = None;
        for (t, ct) in centers.iter().enumerate() {
            if t == i || t == j {
                continue;
            }
            let delta = ct.sub(&centers[i]);
            let (a, b) = (na.dot(&delta), nb.dot(&delta));
            let zero = int(0);
            if (a <= zero && b <= zero) || (a >= two && b >= two) {
                continue;
            }
            feasible = intersect(&feasible, &allowed(&a, &b, &two));
            if feasible.is_empty() {
                blocker = Some(t);
                break;
            }
        }
        let line = feasible.first().map(|(lambda, _)| {
            let phi = na.scale(lambda).add(&nb.scale(&(int(1) - lambda)));
            let offset = phi.dot(&centers[i]) + int(1);
            Line { normal: phi, offset }
        });
        pairs.push(PairWitness { i, j, line, blocker });
    }
    Ok(SeparabilityReport {
        separable: pairs.iter().all(|p| p.line.is_some()),
        graph,
        pairs,
    })
}

/// Independent check that `line` separates translates `i` and `j` and that every
/// translate lies in one closed side: evaluates the line at every vertex of every
/// translate.
pub fn line_separates(packing: &PlanarPacking, line: &Line, i: usize, j: usize) -> bool {
    let body = packing.body();
    let side_of = |t: usize| -> Option<Ordering> {
        let mut side = Ordering::Equal;
        for v in body.vertices() {
            let s = line.side(&packing.centers()[t].add(v));
            if s == Ordering::Equal {
                continue;
            }
            if side == Ordering::Equal {
                side = s;
            } else if side != s {
                return None;
            }
        }
        Some(side)
    };
    let mut sides = Vec::with_capacity(packing.len());
    for t in 0..packing.len() {
        match side_of(t) {
            Some(s) => sides.push(s),
            None => return false,
        }
    }
    sides[i] != Ordering::Equal && sides[j] != Ordering::Equal && sides[i] != sides[j]
}

/// `true` if translate `t` meets the open side of no line, i.e. its vertices are
/// all on one closed side. Exposed for oracles that sample directions.
pub fn misses_interior(packing: &PlanarPacking, line: &Line, t: usize) -> bool {
    let mut seen = Ordering::Equal;
    for v in packing.body().vertices() {
        let s = line.side(&packing.centers()[t].add(v));
        if s == Ordering::Equal {
            continue;
        }
        if seen == Ordering::Equal {
            seen = s;
        } else if seen != s {
            return false;
        }
    }
    true
}
