//! Counting distance-graph embeddings in a point set.
//!
//! For a graph G on n vertices with m edges and a set A in F_q^d, `C` counts
//! ordered tuples (x_1, ..., x_n) in A^n with |x_i - x_j|^2 = lambda_ij on
//! every edge; coincidences between non-adjacent vertices are allowed. `C*`
//! counts only tuples of pairwise distinct points. The normalized values are
//! N = C q^(m - nd) and N* = C* q^(m - nd).

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::geometry::{q_power, PointSet, Space, SphereIndex};
use crate::graph::DistanceGraph;
use crate::harness::report::fixed17;

/// Default ceiling on tuple-edge checks for the brute-force counter.
pub const DEFAULT_ORACLE_BUDGET: u128 = 100_000_000;

/// Slack on the theorem inequalities.
pub const THEOREM_TOLERANCE: f64 = 1e-9;

/// Raw and normalized embedding counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingCount {
    pub n: usize,
    pub m: usize,
    pub q: u32,
    pub d: usize,
    pub c: u128,
    pub c_star: u128,
}

impl EmbeddingCount {
    fn scale(&self) -> BigRational {
        q_power(self.q, self.m as i64 - (self.n * self.d) as i64)
    }

    /// N = C q^(m - nd).
    pub fn normalized(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.c)) * self.scale()
    }

    /// N* = C* q^(m - nd).
    pub fn normalized_star(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.c_star)) * self.scale()
    }

    pub fn normalized_f64(&self) -> f64 {
        self.normalized().to_f64().unwrap_or(f64::NAN)
    }

    pub fn normalized_star_f64(&self) -> f64 {
        self.normalized_star().to_f64().unwrap_or(f64::NAN)
    }
}

fn check_inputs(set: &PointSet, graph: &DistanceGraph) -> Result<()> {
    graph.check_lengths(set.space().field().order())
}

fn falling(base: u128, r: u128, k: usize) -> u128 {
    (0..k as u128).map(|i| base.saturating_sub(r + i)).product()
}

/// Exact counts by enumerating all of A^n. Intended as the reference.
pub fn count_bruteforce(
    set: &PointSet,
    graph: &DistanceGraph,
    budget: u128,
) -> Result<EmbeddingCount> {
    check_inputs(set, graph)?;
    let space = set.space();
    let n = graph.vertex_count();
    let size = set.len() as u128;
    let work = size
        .checked_pow(n as u32)
        .and_then(|t| t.checked_mul(graph.edge_count().max(1) as u128))
        .unwrap_or(u128::MAX);
    if work > budget {
        return Err(Error::BudgetExceeded {
            what: "brute-force embedding count",
            required: work,
            budget,
        });
    }
    let mut out = EmbeddingCount {
        n,
        m: graph.edge_count(),
        q: space.field().order(),
        d: space.dim(),
        c: 0,
        c_star: 0,
    };
    if n > 0 && set.is_empty() {
        return Ok(out);
    }

    let members = set.members();
    let mut odometer = vec![0usize; n];
    let mut tuple = vec![0usize; n];
    loop {
        for (t, &o) in tuple.iter_mut().zip(&odometer) {
            *t = members[o] as usize;
        }
        let fits = graph
            .edges()
            .iter()
            .all(|e| space.distance_index(tuple[e.i], tuple[e.j]) == e.length());
        if fits {
            out.c += 1;
            let distinct = (0..n).all(|i| (i + 1..n).all(|j| tuple[i] != tuple[j]));
            if distinct {
                out.c_star += 1;
            }
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            odometer[k] += 1;
            if odometer[k] < members.len() {
                break;
            }
            odometer[k] = 0;
        }
    }
}

/// One vertex placement in the search order.
#[derive(Clone, Debug)]
struct Step {
    /// Earlier step whose sphere supplies candidates, with the edge length.
    anchor: Option<(usize, FieldElement)>,
    /// Remaining constraints against earlier steps.
    checks: Vec<(usize, FieldElement)>,
}

/// Greedy order: repeatedly place the unplaced vertex with the smallest
/// candidate estimate, ties to the lowest index.
fn plan(set: &PointSet, graph: &DistanceGraph, spheres: &SphereIndex) -> Vec<Step> {
    let active: Vec<usize> = (0..graph.vertex_count())
        .filter(|&v| graph.degrees()[v] > 0)
        .collect();
    let mut position: BTreeMap<usize, usize> = BTreeMap::new();
    let mut steps = Vec::with_capacity(active.len());
    let size_a = set.len();
    while position.len() < active.len() {
        let (_, v) = active
            .iter()
            .filter(|v| !position.contains_key(v))
            .map(|&v| {
                let est = graph
                    .neighbors(v)
                    .filter(|(w, _)| position.contains_key(w))
                    .map(|(_, l)| spheres.size(FieldElement(l)))
                    .min()
                    .unwrap_or(usize::MAX)
                    .min(size_a);
                (est, v)
            })
            .min()
            .expect("an unplaced active vertex remains");
        let mut constraints: Vec<(usize, FieldElement)> = graph
            .neighbors(v)
            .filter_map(|(w, l)| position.get(&w).map(|&pos| (pos, FieldElement(l))))
            .collect();
        constraints.sort();
        let anchor = constraints
            .iter()
            .copied()
            .min_by_key(|&(pos, l)| (spheres.size(l), pos))
            .filter(|&(_, l)| spheres.size(l) <= size_a);
        if let Some(a) = anchor {
            constraints.retain(|&c| c != a);
        }
        position.insert(v, steps.len());
        steps.push(Step {
            anchor,
            checks: constraints,
        });
    }
    steps
}

struct Search<'a> {
    set: &'a PointSet,
    space: &'a Space,
    field: &'a FiniteField,
    d: usize,
    steps: Vec<Step>,
    /// Coordinates of each sphere member, keyed by length.
    sphere_coords: BTreeMap<u32, Vec<FieldElement>>,
    /// For the final step when it has a lone anchor: |A cap (x + S_lambda)| per x.
    leaf_counts: Option<Vec<AtomicU32>>,
}

const UNCOMPUTED: u32 = u32::MAX;

impl<'a> Search<'a> {
    fn new(set: &'a PointSet, graph: &DistanceGraph, spheres: &'a SphereIndex) -> Self {
        let space = set.space();
        let field = space.field();
        let d = space.dim();
        let steps = plan(set, graph, spheres);
        let mut sphere_coords = BTreeMap::new();
        for step in &steps {
            if let Some((_, l)) = step.anchor {
                sphere_coords.entry(l.0).or_insert_with(|| {
                    let members = spheres.sphere(l);
                    let mut coords = vec![FieldElement::ZERO; members.len() * d];
                    for (chunk, &u) in coords.chunks_mut(d).zip(members) {
                        space.decode_into(u as usize, chunk);
                    }
                    coords
                });
            }
        }
        let leaf_counts = steps
            .last()
            .filter(|s| s.anchor.is_some() && s.checks.is_empty() && steps.len() > 1)
            .map(|_| {
                (0..space.size())
                    .map(|_| AtomicU32::new(UNCOMPUTED))
                    .collect()
            });
        Search {
            set,
            space,
            field,
            d,
            steps,
            sphere_coords,
            leaf_counts,
        }
    }

    #[inline]
    fn distance(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        let f = self.field;
        a.iter().zip(b).fold(FieldElement::ZERO, |acc, (&x, &y)| {
            f.add(acc, f.square(f.sub(x, y)))
        })
    }

    fn leaf_count(&self, x: usize, x_coords: &[FieldElement], lambda: FieldElement) -> u32 {
        let cache = self.leaf_counts.as_ref().expect("leaf cache enabled");
        let cached = cache[x].load(Ordering::Relaxed);
        if cached != UNCOMPUTED {
            return cached;
        }
        let coords = &self.sphere_coords[&lambda.0];
        let mut y = vec![FieldElement::ZERO; self.d];
        let mut count = 0u32;
        for u in coords.chunks(self.d) {
            for j in 0..self.d {
                y[j] = self.field.add(x_coords[j], u[j]);
            }
            if self.set.contains(self.space.encode(&y)) {
                count += 1;
            }
        }
        cache[x].store(count, Ordering::Relaxed);
        count
    }

    /// Adds (C, C*) contributions of all completions of the partial placement.
    fn descend(
        &self,
        depth: usize,
        placed: &mut Vec<usize>,
        coords: &mut Vec<FieldElement>,
        distinct: bool,
        acc: &mut (u128, u128),
    ) {
        let d = self.d;
        if depth == self.steps.len() {
            acc.0 += 1;
            acc.1 += distinct as u128;
            return;
        }
        let step = &self.steps[depth];

        if depth + 1 == self.steps.len() && self.leaf_counts.is_some() {
            let (pos, l) = step.anchor.expect("leaf cache implies an anchor");
            let x = placed[pos];
            let total = self.leaf_count(x, &coords[pos * d..(pos + 1) * d], l) as u128;
            acc.0 += total;
            if distinct {
                let x_coords = &coords[pos * d..(pos + 1) * d];
                let collisions = (0..placed.len())
                    .filter(|&k| self.distance(&coords[k * d..(k + 1) * d], x_coords) == l)
                    .count() as u128;
                acc.1 += total - collisions;
            }
            return;
        }

        let mut y = vec![FieldElement::ZERO; d];
        let mut visit = |y_idx: usize,
                         y: &[FieldElement],
                         placed: &mut Vec<usize>,
                         coords: &mut Vec<FieldElement>| {
            let ok = step
                .checks
                .iter()
                .all(|&(pos, l)| self.distance(y, &coords[pos * d..(pos + 1) * d]) == l);
            if !ok {
                return;
            }
            let still_distinct = distinct && !placed.contains(&y_idx);
            placed.push(y_idx);
            coords.extend_from_slice(y);
            self.descend(depth + 1, placed, coords, still_distinct, acc);
            placed.pop();
            coords.truncate(coords.len() - d);
        };

        match step.anchor {
            Some((pos, l)) => {
                let sphere = &self.sphere_coords[&l.0];
                for u in sphere.chunks(d) {
                    for j in 0..d {
                        y[j] = self.field.add(coords[pos * d + j], u[j]);
                    }
                    let y_idx = self.space.encode(&y);
                    if self.set.contains(y_idx) {
                        visit(y_idx, &y, placed, coords);
                    }
                }
            }
            None => {
                for &m in self.set.members() {
                    self.space.decode_into(m as usize, &mut y);
                    visit(m as usize, &y, placed, coords);
                }
            }
        }
    }

    fn run(&self) -> (u128, u128) {
        if self.steps.is_empty() {
            return (1, 1);
        }
        let d = self.d;
        // The first step never has an anchor; split work across its candidates.
        self.set
            .members()
            .par_iter()
            .map(|&x| {
                let mut placed = Vec::with_capacity(self.steps.len());
                let mut coords = Vec::with_capacity(self.steps.len() * d);
                placed.push(x as usize);
                coords.resize(d, FieldElement::ZERO);
                self.space.decode_into(x as usize, &mut coords[..d]);
                let mut acc = (0u128, 0u128);
                self.descend(1, &mut placed, &mut coords, true, &mut acc);
                acc
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    }
}

/// Exact counts by vertex-at-a-time search over sphere neighbor lists.
pub fn count_backtracking(
    set: &PointSet,
    graph: &DistanceGraph,
    spheres: &SphereIndex,
) -> Result<EmbeddingCount> {
    check_inputs(set, graph)?;
    set.space().ensure_same(spheres.space())?;
    let space = set.space();
    let search = Search::new(set, graph, spheres);
    let active = search.steps.len();
    let (c_active, c_star_active) = search.run();
    let isolated = graph.vertex_count() - active;
    let size = set.len() as u128;
    Ok(EmbeddingCount {
        n: graph.vertex_count(),
        m: graph.edge_count(),
        q: space.field().order(),
        d: space.dim(),
        c: c_active * size.pow(isolated as u32),
        c_star: c_star_active * falling(size, active as u128, isolated),
    })
}

fn check_triangle_inputs(spheres: &SphereIndex, lambda: FieldElement) -> Result<()> {
    let space = spheres.space();
    if lambda.0 >= space.field().order() {
        return Err(Error::ElementOutOfRange {
            value: lambda.0 as u64,
            q: space.field().order(),
        });
    }
    if lambda.is_zero() {
        return Err(Error::ZeroElement("equilateral triangle counting"));
    }
    if space.dim() < 2 {
        return Err(Error::InvalidArgument(
            "triangle counting needs d >= 2".into(),
        ));
    }
    Ok(())
}

fn sphere_intersection(spheres: &SphereIndex, lambda: FieldElement, y0: usize) -> usize {
    let space = spheres.space();
    spheres
        .sphere(lambda)
        .iter()
        .filter(|&&u| space.distance_index(u as usize, y0) == lambda)
        .count()
}

/// |S_lambda(0) cap S_lambda(y0)| for every y0 on the sphere, in sphere order.
pub fn triangle_intersection_profile(
    spheres: &SphereIndex,
    lambda: FieldElement,
) -> Result<Vec<usize>> {
    check_triangle_inputs(spheres, lambda)?;
    Ok(spheres
        .sphere(lambda)
        .par_iter()
        .map(|&y0| sphere_intersection(spheres, lambda, y0 as usize))
        .collect())
}

/// Equilateral-triangle count in the whole space, C = q^d |S_lambda| I with
/// I the sphere intersection size at the first point of S_lambda.
pub fn fullspace_triangle_count(
    spheres: &SphereIndex,
    lambda: FieldElement,
) -> Result<EmbeddingCount> {
    check_triangle_inputs(spheres, lambda)?;
    let space = spheres.space();
    let sphere = spheres.sphere(lambda);
    let c = match sphere.first() {
        None => 0,
        Some(&y0) => {
            let inter = sphere
                .par_chunks(4096)
                .map(|chunk| {
                    chunk
                        .iter()
                        .filter(|&&u| space.distance_index(u as usize, y0 as usize) == lambda)
                        .count()
                })
                .sum::<usize>();
            space.size() as u128 * sphere.len() as u128 * inter as u128
        }
    };
    Ok(EmbeddingCount {
        n: 3,
        m: 3,
        q: space.field().order(),
        d: space.dim(),
        c,
        c_star: c,
    })
}

/// Which theorem a record is judged against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Asymptotic,
    Genuine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Held,
    Failed,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphSummary {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub t: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SetSummary {
    pub field: String,
    pub q: u32,
    pub d: usize,
    pub size: usize,
    #[serde(serialize_with = "fixed17")]
    pub alpha: f64,
    pub seed: Option<u64>,
}

/// Comparison of the counts against the asymptotic and genuine-copy bounds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremCheckRecord {
    pub kind: CheckKind,
    pub graph: GraphSummary,
    pub set: SetSummary,
    pub c: u128,
    pub c_star: u128,
    #[serde(serialize_with = "fixed17")]
    pub n_value: f64,
    #[serde(serialize_with = "fixed17")]
    pub n_star: f64,
    /// alpha >= 4 m q^(t - (d+1)/2).
    pub hypothesis_met: bool,
    /// |N - alpha^n|.
    #[serde(serialize_with = "fixed17")]
    pub gap: f64,
    /// 4 m alpha^(n-1) q^(t - (d+1)/2).
    #[serde(serialize_with = "fixed17")]
    pub bound: f64,
    /// gap <= bound, evaluated only under the hypothesis.
    pub holds: Option<bool>,
    /// N - N*.
    #[serde(serialize_with = "fixed17")]
    pub defect: f64,
    /// 2 n^2 alpha^(n-1) q^(t-d).
    #[serde(serialize_with = "fixed17")]
    pub defect_bound: f64,
    /// defect <= defect_bound, evaluated only under the hypothesis.
    pub defect_holds: Option<bool>,
    /// alpha >= 12 n^2 q^(t - (d+1)/2).
    pub genuine_threshold_met: bool,
    /// C* >= |A|^n q^-m / 2.
    pub genuine_holds: bool,
    pub status: Status,
}

/// alpha >= coef q^(half_exp / 2), decided exactly.
fn density_at_least(alpha: &BigRational, coef: u64, q: u32, half_exp: i64) -> bool {
    if coef == 0 {
        return true;
    }
    let rhs_sq = BigRational::from_integer(BigInt::from(coef).pow(2)) * q_power(q, half_exp);
    alpha * alpha >= rhs_sq
}

fn build_record(
    kind: CheckKind,
    set: &PointSet,
    graph: &DistanceGraph,
    counts: &EmbeddingCount,
) -> TheoremCheckRecord {
    let space = set.space();
    let q = space.field().order();
    let d = space.dim() as i64;
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let t = graph.max_degree() as i64;
    let alpha_exact = set.density_exact();
    let alpha = set.density();
    let qf = q as f64;
    // Exponent t - (d+1)/2 carried doubled to stay integral.
    let half_exp = 2 * t - d - 1;
    let q_half = qf.powf(half_exp as f64 / 2.0);

    let n_exact = counts.normalized();
    let n_star_exact = counts.normalized_star();
    let alpha_n = num_traits::pow(alpha_exact.clone(), n);
    let gap = (&n_exact - &alpha_n).to_f64().unwrap_or(f64::NAN).abs();
    let alpha_pow = |e: usize| alpha.powi(e as i32);
    let bound = 4.0 * m as f64 * alpha_pow(n.saturating_sub(1)) * q_half;
    let hypothesis_met = density_at_least(&alpha_exact, 4 * m as u64, q, half_exp);
    let holds = hypothesis_met.then_some(gap <= bound + THEOREM_TOLERANCE);

    let defect = (&n_exact - &n_star_exact).to_f64().unwrap_or(f64::NAN);
    let defect_bound =
        2.0 * (n * n) as f64 * alpha_pow(n.saturating_sub(1)) * qf.powi((t - d) as i32);
    let defect_holds = hypothesis_met.then_some(defect <= defect_bound + THEOREM_TOLERANCE);
    let genuine_threshold_met = density_at_least(&alpha_exact, 12 * (n * n) as u64, q, half_exp);
    let genuine_holds =
        BigInt::from(2u8) * BigInt::from(counts.c_star) * BigInt::from(q).pow(m as u32)
            >= BigInt::from(set.len()).pow(n as u32);

    let status = match kind {
        CheckKind::Asymptotic => match holds {
            None => Status::NotApplicable,
            Some(true) => Status::Held,
            Some(false) => Status::Failed,
        },
        CheckKind::Genuine => {
            let gated: Vec<bool> = defect_holds
                .into_iter()
                .chain(genuine_threshold_met.then_some(genuine_holds))
                .collect();
            if gated.is_empty() {
                Status::NotApplicable
            } else if gated.iter().all(|&b| b) {
                Status::Held
            } else {
                Status::Failed
            }
        }
    };

    TheoremCheckRecord {
        kind,
        graph: GraphSummary {
            name: String::new(),
            n,
            m,
            t: t as usize,
        },
        set: SetSummary {
            field: space.field().spec().to_string(),
            q,
            d: space.dim(),
            size: set.len(),
            alpha,
            seed: None,
        },
        c: counts.c,
        c_star: counts.c_star,
        n_value: n_exact.to_f64().unwrap_or(f64::NAN),
        n_star: n_star_exact.to_f64().unwrap_or(f64::NAN),
        hypothesis_met,
        gap,
        bound,
        holds,
        defect,
        defect_bound,
        defect_holds,
        genuine_threshold_met,
        genuine_holds,
        status,
    }
}

fn check_counts_match(
    set: &PointSet,
    graph: &DistanceGraph,
    counts: &EmbeddingCount,
) -> Result<()> {
    let space = set.space();
    if counts.n != graph.vertex_count()
        || counts.m != graph.edge_count()
        || counts.q != space.field().order()
        || counts.d != space.dim()
    {
        return Err(Error::InvalidArgument(
            "counts were computed for a different graph or space".into(),
        ));
    }
    Ok(())
}

/// Record judged by |N - alpha^n| <= 4 m alpha^(n-1) q^(t - (d+1)/2).
pub fn asymptotic_check(
    set: &PointSet,
    graph: &DistanceGraph,
    counts: &EmbeddingCount,
) -> Result<TheoremCheckRecord> {
    check_counts_match(set, graph, counts)?;
    Ok(build_record(CheckKind::Asymptotic, set, graph, counts))
}

/// Record judged by the coincidence-defect bound and the genuine-copy count.
pub fn genuine_check(
    set: &PointSet,
    graph: &DistanceGraph,
    counts: &EmbeddingCount,
) -> Result<TheoremCheckRecord> {
    check_counts_match(set, graph, counts)?;
    Ok(build_record(CheckKind::Genuine, set, graph, counts))
}
