//! Distance graphs: simple graphs whose edges carry nonzero lengths.
//!
//! Lengths are stored as field-element encodings and only interpreted
//! against a field at counting time.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::harness::rng::SplitMix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub lambda: u32,
}

impl Edge {
    pub fn length(&self) -> FieldElement {
        FieldElement(self.lambda)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceGraph {
    n: usize,
    edges: Vec<Edge>,
    degrees: Vec<usize>,
}

impl DistanceGraph {
    /// Canonicalizes and validates an edge list (`i < j`, sorted).
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, u32)>) -> Result<Self> {
        let mut out = Vec::new();
        let mut degrees = vec![0usize; n];
        for (a, b, lambda) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has a vertex outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at vertex {a}")));
            }
            if lambda == 0 {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) has length 0")));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            out.push(Edge { i, j, lambda });
            degrees[i] += 1;
            degrees[j] += 1;
        }
        out.sort();
        if let Some(w) = out
            .windows(2)
            .find(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j))
        {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].i, w[0].j
            )));
        }
        Ok(DistanceGraph {
            n,
            edges: out,
            degrees,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Maximum vertex degree t.
    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Neighbors of `v` with the connecting edge length.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.edges.iter().filter_map(move |e| {
            if e.i == v {
                Some((e.j, e.lambda))
            } else if e.j == v {
                Some((e.i, e.lambda))
            } else {
                None
            }
        })
    }

    /// The graph with edge `index` removed.
    pub fn without_edge(&self, index: usize) -> DistanceGraph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != index)
            .map(|(_, e)| (e.i, e.j, e.lambda));
        DistanceGraph::new(self.n, edges).expect("subgraph of a valid graph")
    }

    /// Checks every length is a nonzero element of F_q.
    pub fn check_lengths(&self, q: u32) -> Result<()> {
        match self.edges.iter().find(|e| e.lambda >= q) {
            Some(e) => Err(Error::InvalidGraph(format!(
                "edge ({}, {}) has length {} outside F_{q}",
                e.i, e.j, e.lambda
            ))),
            None => Ok(()),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for e in &self.edges {
            writeln!(out, "e {} {} {}", e.i, e.j, e.lambda).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let line_no = lineno + 1;
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| -> Result<u64> {
                s.parse::<u64>()
                    .map_err(|e| Error::parse(line_no, format!("bad number {s:?}: {e}")))
            };
            match toks.as_slice() {
                ["n", count] => {
                    if n.is_some() {
                        return Err(Error::parse(line_no, "repeated `n` line"));
                    }
                    n = Some(num(count)? as usize);
                }
                ["e", i, j, l] => {
                    if n.is_none() {
                        return Err(Error::parse(line_no, "edge before `n` line"));
                    }
                    let lambda = u32::try_from(num(l)?)
                        .map_err(|_| Error::parse(line_no, "length encoding too large"))?;
                    edges.push((num(i)? as usize, num(j)? as usize, lambda));
                }
                _ => return Err(Error::parse(line_no, format!("unrecognized line {raw:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::parse(1, "missing `n` line"))?;
        DistanceGraph::new(n, edges)
    }
}

impl fmt::Display for DistanceGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn parse_graph(text: &str) -> Result<DistanceGraph> {
    DistanceGraph::parse(text)
}

pub fn serialize_graph(g: &DistanceGraph) -> String {
    g.to_text()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Path,
    Cycle,
    Complete,
    Star,
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(GraphKind::Path),
            "cycle" => Ok(GraphKind::Cycle),
            "complete" => Ok(GraphKind::Complete),
            "star" => Ok(GraphKind::Star),
            _ => Err(Error::InvalidArgument(format!("unknown graph kind {s:?}"))),
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::Path => "path",
            GraphKind::Cycle => "cycle",
            GraphKind::Complete => "complete",
            GraphKind::Star => "star",
        })
    }
}

/// How generated edges get their lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Lengths {
    /// Every edge gets the same encoding.
    Uniform(u32),
    /// Independent uniform nonzero elements of F_q, drawn in edge order
    /// from a SplitMix64 stream.
    Random { seed: u64, q: u32 },
}

pub fn generate(kind: GraphKind, n: usize, lengths: Lengths) -> Result<DistanceGraph> {
    let min_n = if kind == GraphKind::Cycle { 3 } else { 2 };
    if n < min_n {
        return Err(Error::InvalidGraph(format!(
            "{kind} needs at least {min_n} vertices, got {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = match kind {
        GraphKind::Path => (0..n - 1).map(|i| (i, i + 1)).collect(),
        GraphKind::Cycle => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        GraphKind::Complete => (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect(),
        GraphKind::Star => (1..n).map(|j| (0, j)).collect(),
    };
    let lambdas: Vec<u32> = match lengths {
        Lengths::Uniform(l) => vec![l; pairs.len()],
        Lengths::Random { seed, q } => {
            if q < 3 {
                return Err(Error::InvalidArgument(format!(
                    "q = {q} has no usable lengths"
                )));
            }
            let mut rng = SplitMix::new(seed);
            (0..pairs.len())
                .map(|_| 1 + (rng.next_u64() % (q as u64 - 1)) as u32)
                .collect()
        }
    };
    DistanceGraph::new(
        n,
        pairs.into_iter().zip(lambdas).map(|((i, j), l)| (i, j, l)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_graph_examples() {
        let g = DistanceGraph::new(2, [(0, 1, 1)]).unwrap();
        assert_eq!((g.edge_count(), g.max_degree()), (1, 1));
        let tri = DistanceGraph::new(3, [(0, 1, 2), (1, 2, 2), (2, 0, 2)]).unwrap();
        assert_eq!((tri.edge_count(), tri.max_degree()), (3, 2));
        assert_eq!(
            tri.edges()[1],
            Edge {
                i: 0,
                j: 2,
                lambda: 2
            }
        );
        assert!(DistanceGraph::new(3, [(0, 1, 1), (0, 1, 2)]).is_err());
        assert!(DistanceGraph::new(3, [(0, 1, 1), (1, 0, 1)]).is_err());
        assert!(DistanceGraph::new(3, [(0, 0, 1)]).is_err());
        assert!(DistanceGraph::new(3, [(0, 1, 0)]).is_err());
        assert!(DistanceGraph::new(3, [(0, 3, 1)]).is_err());
    }

    #[test]
    fn generator_examples() {
        let p = generate(GraphKind::Path, 3, Lengths::Uniform(1)).unwrap();
        assert_eq!(p.to_text(), "n 3\ne 0 1 1\ne 1 2 1\n");
        assert_eq!(p.max_degree(), 2);
        let k3 = generate(GraphKind::Complete, 3, Lengths::Uniform(4)).unwrap();
        assert_eq!(
            k3,
            DistanceGraph::new(3, [(0, 1, 4), (0, 2, 4), (1, 2, 4)]).unwrap()
        );
        let c4 = generate(GraphKind::Cycle, 4, Lengths::Uniform(1)).unwrap();
        assert_eq!((c4.edge_count(), c4.max_degree()), (4, 2));
        assert!(generate(GraphKind::Cycle, 2, Lengths::Uniform(1)).is_err());
        assert!(generate(GraphKind::Path, 1, Lengths::Uniform(1)).is_err());
    }

    #[test]
    fn generator_closed_forms() {
        for n in 2..=12usize {
            for kind in [
                GraphKind::Path,
                GraphKind::Cycle,
                GraphKind::Complete,
                GraphKind::Star,
            ] {
                if kind == GraphKind::Cycle && n < 3 {
                    continue;
                }
                let g = generate(
                    kind,
                    n,
                    Lengths::Random {
                        seed: n as u64,
                        q: 7,
                    },
                )
                .unwrap();
                let (m, t) = match kind {
                    GraphKind::Path => (n - 1, if n >= 3 { 2 } else { 1 }),
                    GraphKind::Cycle => (n, 2),
                    GraphKind::Complete => (n * (n - 1) / 2, n - 1),
                    GraphKind::Star => (n - 1, n - 1),
                };
                assert_eq!((g.edge_count(), g.max_degree()), (m, t), "{kind} n={n}");
                assert!(g.edges().iter().all(|e| (1..7).contains(&e.lambda)));
                for k in 0..g.edge_count() {
                    assert!(g.without_edge(k).max_degree() <= t);
                }
            }
        }
    }

    #[test]
    fn random_lengths_are_deterministic() {
        let a = generate(GraphKind::Complete, 4, Lengths::Random { seed: 9, q: 5 }).unwrap();
        let b = generate(GraphKind::Complete, 4, Lengths::Random { seed: 9, q: 5 }).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_examples() {
        let g = parse_graph("n 2\ne 0 1 1").unwrap();
        assert_eq!(
            g.edges(),
            &[Edge {
                i: 0,
                j: 1,
                lambda: 1
            }]
        );
        let messy = "# triangle\nn 3\n\ne 2 1 5  # reversed\ne 0 1 5\ne 0 2 5\n";
        let g = parse_graph(messy).unwrap();
        assert_eq!(serialize_graph(&g), "n 3\ne 0 1 5\ne 0 2 5\ne 1 2 5\n");
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
        assert!(matches!(
            parse_graph("n 2\ne 0 0 1"),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(parse_graph("e 0 1 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("n 2\nx 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("n 2\nn 3"), Err(Error::Parse { .. })));
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn length_check_against_field() {
        let g = DistanceGraph::new(2, [(0, 1, 5)]).unwrap();
        assert!(g.check_lengths(7).is_ok());
        assert!(g.check_lengths(5).is_err());
    }
}
