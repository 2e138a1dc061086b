use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::char_sums::{all_sums, CharSumRecord};
use crate::embeddings::{
    asymptotic_check, count_backtracking, count_bruteforce, fullspace_triangle_count,
    genuine_check, EmbeddingCount, Status, TheoremCheckRecord, DEFAULT_ORACLE_BUDGET,
};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec, FiniteField};
use crate::fourier::{distance_theorem_gaps, DistanceGap, FunctionTable};
use crate::geometry::{PointSet, SigmaCheck, Space, SphereIndex};
use crate::graph::{generate, DistanceGraph, GraphKind, Lengths};
use crate::harness::report::fixed17;
use crate::harness::rng::SplitMix;

/// Environment variable overriding the brute-force budget.
pub const BUDGET_ENV: &str = "FFDG_BUDGET";

/// The oracle budget, honoring `FFDG_BUDGET` when it parses.
pub fn default_budget() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BUDGET)
}

/// Bernoulli(density) subset of the space: index i is kept when the i-th
/// SplitMix64 output, as a 53-bit fraction, is below `density`.
pub fn random_set(space: &Space, density: f64, seed: u64) -> Result<PointSet> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidArgument(format!(
            "density {density} is outside [0, 1]"
        )));
    }
    let mut rng = SplitMix::new(seed);
    let mut bits = FixedBitSet::with_capacity(space.size());
    for i in 0..space.size() {
        if rng.next_f64() < density {
            bits.insert(i);
        }
    }
    Ok(PointSet::from_bits(space.clone(), bits))
}

pub fn random_set_in(
    field: Arc<FiniteField>,
    d: usize,
    density: f64,
    seed: u64,
) -> Result<PointSet> {
    random_set(&Space::new(field, d)?, density, seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Sigma,
    Distance,
    Sums,
    Asymptotic,
    Genuine,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == other || self == Suite::All
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sigma" => Suite::Sigma,
            "distance" => Suite::Distance,
            "sums" => Suite::Sums,
            "asymptotic" => Suite::Asymptotic,
            "genuine" => Suite::Genuine,
            "all" => Suite::All,
            _ => return Err(Error::InvalidArgument(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphSource {
    File(PathBuf),
    Generator {
        kind: GraphKind,
        n: usize,
        lengths: Lengths,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SetSource {
    File(PathBuf),
    Full,
    Bernoulli {
        #[serde(serialize_with = "fixed17")]
        density: f64,
        seed: u64,
    },
}

fn display<T: std::fmt::Display, S: Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Everything needed to reproduce one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSpec {
    #[serde(serialize_with = "display")]
    pub field: FieldSpec,
    pub d: usize,
    pub graph: Option<GraphSource>,
    pub set: SetSource,
    pub suite: Suite,
    /// Count with the brute-force enumerator instead of the search.
    pub oracle: bool,
    pub budget: u128,
    /// Where the report goes; not echoed so the bytes do not depend on it.
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(field: FieldSpec, d: usize, suite: Suite) -> Self {
        ExperimentSpec {
            field,
            d,
            graph: None,
            set: SetSource::Full,
            suite,
            oracle: false,
            budget: default_budget(),
            out: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "suite", rename_all = "lowercase")]
pub enum Record {
    Sigma(SigmaCheck),
    Distance(DistanceGap),
    Sums(CharSumRecord),
    Asymptotic(TheoremCheckRecord),
    Genuine(TheoremCheckRecord),
}

impl Record {
    pub fn status(&self) -> Status {
        let from_bool = |b: bool| if b { Status::Held } else { Status::Failed };
        match self {
            Record::Sigma(r) => from_bool(r.holds),
            Record::Distance(r) => from_bool(r.holds),
            Record::Sums(r) if r.bound.is_none() => Status::NotApplicable,
            Record::Sums(r) => from_bool(r.passes()),
            Record::Asymptotic(r) | Record::Genuine(r) => r.status,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checked: usize,
    pub held: usize,
    pub not_applicable: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub spec: ExperimentSpec,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }
}

fn load_set(spec: &ExperimentSpec, space: &Space) -> Result<(PointSet, Option<u64>)> {
    match &spec.set {
        SetSource::Full => Ok((PointSet::full(space.clone()), None)),
        SetSource::Bernoulli { density, seed } => {
            Ok((random_set(space, *density, *seed)?, Some(*seed)))
        }
        SetSource::File(path) => {
            let set = PointSet::parse(&std::fs::read_to_string(path)?)?;
            space.ensure_same(set.space())?;
            // Rebind to the experiment's space so both share one field.
            let set =
                PointSet::from_indices(space.clone(), set.members().iter().map(|&m| m as usize))?;
            Ok((set, None))
        }
    }
}

fn load_graph(source: &GraphSource) -> Result<(DistanceGraph, String)> {
    match source {
        GraphSource::File(path) => {
            let g = DistanceGraph::parse(&std::fs::read_to_string(path)?)?;
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok((g, name))
        }
        GraphSource::Generator { kind, n, lengths } => {
            Ok((generate(*kind, *n, *lengths)?, format!("{kind}({n})")))
        }
    }
}

/// The triangle with equal sides on the whole space has a closed-form count.
fn equilateral_length(graph: &DistanceGraph) -> Option<FieldElement> {
    let edges = graph.edges();
    (graph.vertex_count() == 3
        && edges.len() == 3
        && edges.iter().all(|e| e.lambda == edges[0].lambda))
    .then(|| edges[0].length())
}

/// Counts with the fastest applicable method, or the brute-force oracle.
pub fn count_embeddings(
    set: &PointSet,
    graph: &DistanceGraph,
    spheres: &SphereIndex,
    oracle: Option<u128>,
) -> Result<EmbeddingCount> {
    if let Some(budget) = oracle {
        return count_bruteforce(set, graph, budget);
    }
    let full = set.len() == set.space().size();
    match equilateral_length(graph) {
        Some(l) if full && set.space().dim() >= 2 => {
            graph.check_lengths(set.space().field().order())?;
            fullspace_triangle_count(spheres, l)
        }
        _ => count_backtracking(set, graph, spheres),
    }
}

fn summarize(records: &[Record]) -> Summary {
    let mut s = Summary {
        checked: records.len(),
        ..Summary::default()
    };
    for r in records {
        match r.status() {
            Status::Held => s.held += 1,
            Status::NotApplicable => s.not_applicable += 1,
            Status::Failed => s.failed += 1,
        }
    }
    s
}

/// Runs the selected suite and writes the report to `spec.out` when set.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Report> {
    let field = Arc::new(spec.field.build()?);
    let space = Space::new(field.clone(), spec.d)?;
    let suite = spec.suite;
    let mut records = Vec::new();

    let needs_spheres = [
        Suite::Sigma,
        Suite::Distance,
        Suite::Asymptotic,
        Suite::Genuine,
    ]
    .iter()
    .any(|&s| suite.includes(s));
    let spheres = if needs_spheres {
        Some(SphereIndex::build(&space)?)
    } else {
        None
    };

    if suite.includes(Suite::Sigma) && spec.d >= 2 {
        let spheres = spheres.as_ref().expect("built above");
        for l in field.nonzero_elements() {
            records.push(Record::Sigma(spheres.sigma_check(l)?));
        }
    }

    let set = if [Suite::Distance, Suite::Asymptotic, Suite::Genuine]
        .iter()
        .any(|&s| suite.includes(s))
    {
        Some(load_set(spec, &space)?)
    } else {
        None
    };

    if suite.includes(Suite::Distance) {
        let (a, _) = set.as_ref().expect("loaded above");
        let ind = FunctionTable::indicator(a);
        let gaps = distance_theorem_gaps(&ind, &ind, spheres.as_ref().expect("built above"))?;
        records.extend(gaps.into_iter().map(Record::Distance));
    }

    if suite.includes(Suite::Sums) {
        records.extend(all_sums(&field).into_iter().map(Record::Sums));
    }

    let wants_counts = suite.includes(Suite::Asymptotic) || suite.includes(Suite::Genuine);
    match (&spec.graph, wants_counts) {
        (Some(source), true) => {
            let (graph, name) = load_graph(source)?;
            let (a, seed) = set.as_ref().expect("loaded above");
            let spheres = spheres.as_ref().expect("built above");
            let counts = count_embeddings(a, &graph, spheres, spec.oracle.then_some(spec.budget))?;
            let label = |mut r: TheoremCheckRecord| {
                r.graph.name = name.clone();
                r.set.seed = *seed;
                r
            };
            if suite.includes(Suite::Asymptotic) {
                records.push(Record::Asymptotic(label(asymptotic_check(
                    a, &graph, &counts,
                )?)));
            }
            if suite.includes(Suite::Genuine) {
                records.push(Record::Genuine(label(genuine_check(a, &graph, &counts)?)));
            }
        }
        (None, true) if suite != Suite::All => {
            return Err(Error::InvalidArgument(format!(
                "suite {suite:?} needs a graph"
            )));
        }
        _ => {}
    }

    let summary = summarize(&records);
    let report = Report {
        spec: spec.clone(),
        records,
        summary,
    };
    if let Some(path) = &spec.out {
        std::fs::write(path, report.to_json()?)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(p: u32, k: u32, d: usize) -> Space {
        Space::new(Arc::new(FiniteField::new(p, k, None).unwrap()), d).unwrap()
    }

    #[test]
    fn random_set_extremes() {
        let s = space(3, 1, 2);
        assert_eq!(random_set(&s, 1.0, 9).unwrap().len(), 9);
        assert!(random_set(&s, 0.0, 9).unwrap().is_empty());
        assert!(random_set(&s, 1.5, 9).is_err());
        assert!(random_set(&s, f64::NAN, 9).is_err());
    }

    #[test]
    fn random_set_follows_the_stream() {
        let s = space(3, 1, 2);
        let a = random_set(&s, 0.5, 42).unwrap();
        // Independent replay of the SplitMix64 stream.
        let mut state = 42u64;
        let mut expect = Vec::new();
        for i in 0..9u32 {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^= z >> 31;
            if z >> 11 < 1 << 52 {
                expect.push(i);
            }
        }
        assert_eq!(a.members(), &expect[..]);
        assert_eq!(random_set(&s, 0.5, 42).unwrap().members(), a.members());
    }

    fn spec(q: &str, d: usize, suite: Suite) -> ExperimentSpec {
        let mut s = ExperimentSpec::new(q.parse().unwrap(), d, suite);
        s.budget = DEFAULT_ORACLE_BUDGET;
        s
    }

    #[test]
    fn sigma_suite_holds() {
        for q in ["3", "5", "7", "9"] {
            for d in [2, 3] {
                let r = run_experiment(&spec(q, d, Suite::Sigma)).unwrap();
                assert!(r.passed());
                assert_eq!(r.summary.held, r.summary.checked);
                assert!(r.summary.checked > 0);
            }
        }
    }

    #[test]
    fn asymptotic_path_full_space() {
        let mut s = spec("3", 7, Suite::Asymptotic);
        s.graph = Some(GraphSource::Generator {
            kind: GraphKind::Path,
            n: 3,
            lengths: Lengths::Uniform(1),
        });
        let r = run_experiment(&s).unwrap();
        assert_eq!(r.records.len(), 1);
        assert_eq!(r.records[0].status(), Status::Held);
        assert_eq!(r.summary.failed, 0);
    }

    #[test]
    fn reports_are_deterministic() {
        let mut s = spec("5", 2, Suite::All);
        s.graph = Some(GraphSource::Generator {
            kind: GraphKind::Cycle,
            n: 4,
            lengths: Lengths::Random { seed: 3, q: 5 },
        });
        s.set = SetSource::Bernoulli {
            density: 0.6,
            seed: 8,
        };
        let a = run_experiment(&s).unwrap().to_json().unwrap();
        let b = run_experiment(&s).unwrap().to_json().unwrap();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["spec"]["set"]["bernoulli"]["seed"], 8);
        assert_eq!(v["summary"]["failed"], 0);
    }

    #[test]
    fn oracle_and_search_agree_in_reports() {
        let mut s = spec("3", 2, Suite::Genuine);
        s.graph = Some(GraphSource::Generator {
            kind: GraphKind::Complete,
            n: 3,
            lengths: Lengths::Uniform(2),
        });
        let fast = run_experiment(&s).unwrap();
        s.oracle = true;
        let slow = run_experiment(&s).unwrap();
        assert_eq!(fast.records, slow.records);
    }

    #[test]
    fn graph_suites_need_a_graph() {
        assert!(run_experiment(&spec("3", 2, Suite::Asymptotic)).is_err());
        assert!(run_experiment(&spec("3", 2, Suite::All)).is_ok());
    }

    #[test]
    fn set_file_must_match_space() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.set");
        let a = random_set(&space(5, 1, 2), 0.5, 1).unwrap();
        std::fs::write(&path, a.to_text()).unwrap();
        let mut s = spec("5", 2, Suite::Distance);
        s.set = SetSource::File(path.clone());
        assert!(run_experiment(&s).is_ok());
        let mut s = spec("3", 2, Suite::Distance);
        s.set = SetSource::File(path);
        assert!(matches!(run_experiment(&s), Err(Error::SpaceMismatch(_))));
    }
}
