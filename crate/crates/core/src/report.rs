//! End-to-end runs with structured results.
//!
//! Each `compute_*` function returns a serializable report. Reports print in
//! a console layout (`=` banners, `-->` phase lines) through `Display`, and
//! everything printed there is also in the JSON.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::time::Instant;

use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::boardman::{coinvariant_dim, CoinvariantResult, Truncation};
use crate::cache::{load_cache, save_cache};
use crate::error::{CacheError, Error, Result};
use crate::group::{enumerate_group, symmetric_generators, transvection, GroupElement};
use crate::invariants::{
    build_weight_graph, check_cluster_closure, clusters, glk_invariants, is_invariant_under, sigma_invariants,
    ClusterAnalysis, ClusterResult, InvariantBasis,
};
use crate::kameko::{kameko_map, target_degree};
use crate::monomial::Polynomial;
use crate::reducer::{build_cohit_basis_with_stats, CohitBasis};

const BANNER: &str = "================================================================================";

/// Seconds per phase, keyed by phase name.
pub type Timings = BTreeMap<String, f64>;

struct Stopwatch {
    enabled: bool,
    phases: Timings,
    last: Instant,
}

impl Stopwatch {
    fn new(enabled: bool) -> Self {
        Stopwatch {
            enabled,
            phases: Timings::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        self.phases.insert(phase.to_owned(), (now - self.last).as_secs_f64());
        self.last = now;
    }

    fn finish(self) -> Option<Timings> {
        self.enabled.then_some(self.phases)
    }
}

/// Loads `B_n` from `cache_dir` or builds it (and stores it there).
/// A corrupt cache file is reported and replaced. Returns whether the cache
/// was used.
pub fn load_or_build(k: usize, n: u32, cache_dir: Option<&Path>) -> Result<(CohitBasis, bool)> {
    if let Some(dir) = cache_dir {
        match load_cache(k, n, dir) {
            Ok(Some(cb)) => {
                info!("loaded cohit basis for k={k}, n={n} from {}", dir.display());
                return Ok((cb, true));
            }
            Ok(None) => {}
            Err(CacheError::Io(source)) => {
                return Err(Error::Io {
                    path: crate::cache::cache_path(dir, k, n),
                    source,
                })
            }
            Err(e) => warn!("ignoring cache for k={k}, n={n}: {e}"),
        }
    }
    let (cb, stats) = build_cohit_basis_with_stats(k, n);
    info!(
        "built cohit basis for k={k}, n={n}: {} hit tasks, {} basis monomials",
        stats.hit_tasks,
        cb.dim()
    );
    if let Some(dir) = cache_dir {
        save_cache(&cb, dir).map_err(|e| match e {
            CacheError::Io(source) => Error::Io {
                path: dir.to_path_buf(),
                source,
            },
            other => Error::Cache(other),
        })?;
    }
    Ok((cb, false))
}

/// Writes `value` as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Clone, Debug, Default)]
pub struct InvariantOptions<'a> {
    pub cache_dir: Option<&'a Path>,
    pub sigma_only: bool,
    /// Put per-phase wall-clock times into the report.
    pub record_timings: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub dim: usize,
    pub weights: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub k: usize,
    pub n: u32,
    pub basis_size: usize,
    pub clusters: Vec<ClusterSummary>,
    pub sigma_dim: usize,
    /// `None` for a symmetric-only run.
    pub gl_dim: Option<usize>,
    pub sigma_generators: Vec<String>,
    pub gl_generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
    pub cache_hit: bool,
}

/// A report together with the objects it summarizes.
#[derive(Clone, Debug)]
pub struct InvariantRun {
    pub report: InvariantReport,
    pub basis: CohitBasis,
    pub analysis: ClusterAnalysis,
}

/// The full invariant computation for `(QP_k)_n`.
pub fn compute_invariants(k: usize, n: u32, opts: &InvariantOptions<'_>) -> Result<InvariantRun> {
    let mut clock = Stopwatch::new(opts.record_timings);
    let (cb, cache_hit) = load_or_build(k, n, opts.cache_dir)?;
    clock.lap("basis");

    let graph = build_weight_graph(&cb)?;
    let cls = clusters(&graph, &cb);
    if let Some((i, j)) = check_cluster_closure(&cb, &cls)? {
        panic!("cluster closure violated: basis element {i} leaks into {j}");
    }
    clock.lap("clusters");

    let results: Vec<ClusterResult> = cls
        .into_iter()
        .map(|cluster| {
            let sigma = sigma_invariants(&cluster, &cb)?;
            Ok(ClusterResult { cluster, sigma })
        })
        .collect::<Result<_>>()?;
    let mut analysis = ClusterAnalysis {
        graph,
        clusters: results,
        gl: None,
    };
    clock.lap("sigma");

    if !opts.sigma_only {
        analysis.gl = Some(glk_invariants(&analysis.sigma_span(), &cb)?);
        clock.lap("gl");
    }

    let generators = |b: &InvariantBasis| b.polynomials().map(Polynomial::to_string).collect::<Vec<_>>();
    let report = InvariantReport {
        k,
        n,
        basis_size: cb.dim(),
        clusters: analysis
            .clusters
            .iter()
            .map(|c| ClusterSummary {
                dim: c.cluster.dim(),
                weights: c.cluster.weights.iter().map(|w| w.entries().to_vec()).collect(),
            })
            .collect(),
        sigma_dim: analysis.sigma_dim(),
        gl_dim: analysis.gl.as_ref().map(InvariantBasis::dim),
        sigma_generators: generators(&analysis.sigma_span()),
        gl_generators: analysis.gl.as_ref().map(generators).unwrap_or_default(),
        timings: clock.finish(),
        cache_hit,
    };
    Ok(InvariantRun {
        report,
        basis: cb,
        analysis,
    })
}

fn fmt_weights(weights: &[Vec<u32>]) -> String {
    let parts: Vec<String> = weights
        .iter()
        .map(|w| {
            let inner: Vec<String> = w.iter().map(u32::to_string).collect();
            format!("({})", inner.join(", "))
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_timings(f: &mut fmt::Formatter<'_>, timings: &Option<Timings>) -> fmt::Result {
    if let Some(t) = timings {
        for (phase, secs) in t {
            writeln!(f, "  {phase}: {secs:.3} s")?;
        }
        writeln!(f, "Total execution time: {:.2} seconds", t.values().sum::<f64>())?;
    }
    Ok(())
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (k, n) = (self.k, self.n);
        writeln!(f, "{BANNER}")?;
        writeln!(f, "GLOBAL ANALYSIS OF (QP_k)^(GL_k(F_2))_n WITH k = {k}, n = {n}")?;
        writeln!(f, "{BANNER}")?;
        let source = if self.cache_hit { "loaded from cache" } else { "computed" };
        writeln!(f, "--> Admissible basis with {} monomials ({source}).", self.basis_size)?;
        writeln!(f, "--> Found {} independent cluster(s) of interacting weight spaces.", self.clusters.len())?;
        for (i, c) in self.clusters.iter().enumerate() {
            writeln!(f, "  -- Cluster {} (dim={}, weights={})", i + 1, c.dim, fmt_weights(&c.weights))?;
        }
        writeln!(f, "--> Found {} Sigma_{k}-invariants.", self.sigma_dim)?;
        if let Some(gl) = self.gl_dim {
            writeln!(f, "--> Found {gl} GL_{k}-invariants.")?;
        }
        writeln!(f, "{BANNER}")?;
        writeln!(f, "FINAL RESULTS for (QP_{k})_{n}")?;
        writeln!(f, "{BANNER}")?;
        writeln!(f, "Dimension of (QP_{{{k}}})_{{{n}}}^Sigma_{k}: {}", self.sigma_dim)?;
        if let Some(gl) = self.gl_dim {
            writeln!(f, "Dimension of (QP_{{{k}}})_{{{n}}}^GL_{k}: {gl}")?;
        }
        writeln!(f)?;
        writeln!(f, "Sigma_{k}-invariants:")?;
        for (i, g) in self.sigma_generators.iter().enumerate() {
            writeln!(f, "  Sigma_{k}[{}] = [{g}]", i + 1)?;
        }
        if self.gl_dim.is_some() {
            writeln!(f)?;
            writeln!(f, "GL_{k}-invariants:")?;
            for (i, g) in self.gl_generators.iter().enumerate() {
                writeln!(f, "  GL_{k}[{}] = [{g}]", i + 1)?;
            }
        }
        writeln!(f, "{BANNER}")?;
        fmt_timings(f, &self.timings)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSummary {
    pub params: Vec<u32>,
    pub level: u32,
    pub dim_w: usize,
    pub dim_d: usize,
    pub coinvariant_dim: usize,
    /// Pairs `(w, g)` with `g w != w`.
    pub difference_pairs: usize,
    /// Distinct difference polynomials among them.
    pub difference_polynomials: usize,
    /// The `W` basis, printed in the truncated ring.
    pub w_basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoardmanReport {
    pub k: usize,
    pub n: u32,
    /// Parameters from the closed-form rules.
    pub params: Vec<Vec<u32>>,
    /// Every orbit type in this degree.
    pub orbits: Vec<OrbitSummary>,
    pub level: u32,
    pub dim_w: usize,
    pub dim_d: usize,
    pub total: usize,
    pub invalid_degree: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl BoardmanReport {
    fn from_result(r: &CoinvariantResult, timings: Option<Timings>) -> Self {
        BoardmanReport {
            k: r.k,
            n: r.n,
            params: r.params.iter().map(|p| p.as_vec()).collect(),
            orbits: r
                .orbits
                .iter()
                .map(|o| OrbitSummary {
                    params: o.params.as_vec(),
                    level: o.level,
                    dim_w: o.dim_w,
                    dim_d: o.dim_d,
                    coinvariant_dim: o.coinvariant_dim,
                    difference_pairs: o.differences.pairs,
                    difference_polynomials: o.differences.distinct,
                    w_basis: o.w_basis.iter().map(|w| w.to_string()).collect(),
                })
                .collect(),
            level: r.level,
            dim_w: r.dim_w,
            dim_d: r.dim_d,
            total: r.total,
            invalid_degree: r.is_invalid_degree(),
            timings,
        }
    }
}

pub fn compute_boardman(k: usize, n: u32, truncation: Truncation, record_timings: bool) -> Result<BoardmanReport> {
    let mut clock = Stopwatch::new(record_timings);
    let r = coinvariant_dim(k, n, truncation)?;
    clock.lap("orbits");
    Ok(BoardmanReport::from_result(&r, clock.finish()))
}

fn fmt_params(params: &[u32]) -> String {
    let inner: Vec<String> = params.iter().map(u32::to_string).collect();
    format!("({})", inner.join(", "))
}

impl fmt::Display for BoardmanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (k, n) = (self.k, self.n);
        writeln!(f, "{BANNER}")?;
        writeln!(f, "Starting computation for k={k}, n={n}")?;
        let listed: Vec<String> = self.params.iter().map(|p| fmt_params(p)).collect();
        writeln!(f, "--> Parameters: [{}]", listed.join(", "))?;
        if self.invalid_degree {
            writeln!(f, "--> No h-orbit in this degree; the coinvariant space is zero.")?;
        }
        writeln!(f, "--> Found {} h-orbit(s), truncation level l = {}", self.orbits.len(), self.level)?;
        for (i, o) in self.orbits.iter().enumerate() {
            writeln!(f)?;
            writeln!(f, "--- h-orbit #{} with parameters {} ---", i + 1, fmt_params(&o.params))?;
            writeln!(f, "--> dim(W) = {}", o.dim_w)?;
            for (j, w) in o.w_basis.iter().enumerate() {
                writeln!(f, "    W[{j}] = {w}")?;
            }
            writeln!(
                f,
                "--> {} difference polynomials ({} distinct)",
                o.difference_pairs, o.difference_polynomials
            )?;
            writeln!(f, "--> dim(D) = {}", o.dim_d)?;
            writeln!(f, "--> Coinvariant dimension for this orbit: {} - {} = {}", o.dim_w, o.dim_d, o.coinvariant_dim)?;
        }
        if self.orbits.len() > 1 {
            writeln!(f)?;
            writeln!(f, "--> All orbits together: dim(W) = {}, dim(D) = {}", self.dim_w, self.dim_d)?;
        }
        writeln!(f)?;
        writeln!(
            f,
            "Conclusion: dim [(P_A H_*(BV_{k}))_{n}]_(GL_{k}) = {} - {} = {}",
            self.dim_w, self.dim_d, self.total
        )?;
        writeln!(f, "{BANNER}")?;
        fmt_timings(f, &self.timings)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KamekoReport {
    pub k: usize,
    pub n: u32,
    pub target_degree: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub epimorphism: bool,
}

pub fn compute_kameko(k: usize, n: u32, cache_dir: Option<&Path>) -> Result<KamekoReport> {
    let degree = target_degree(k, n)?;
    let (source, _) = load_or_build(k, n, cache_dir)?;
    let (target, _) = load_or_build(k, degree, cache_dir)?;
    let map = kameko_map(&source, &target)?;
    Ok(KamekoReport {
        k,
        n,
        target_degree: degree,
        source_dim: map.source_dim,
        target_dim: map.target_dim,
        rank: map.rank,
        kernel_dim: map.kernel_dim(),
        epimorphism: map.is_epimorphism(),
    })
}

impl fmt::Display for KamekoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (k, n, m) = (self.k, self.n, self.target_degree);
        writeln!(f, "{BANNER}")?;
        writeln!(f, "Kameko map (QP_{k})_{n} -> (QP_{k})_{m}")?;
        writeln!(f, "{BANNER}")?;
        writeln!(f, "--> dim (QP_{k})_{n} = {}", self.source_dim)?;
        writeln!(f, "--> dim (QP_{k})_{m} = {}", self.target_dim)?;
        writeln!(f, "--> rank = {}, kernel dimension = {}", self.rank, self.kernel_dim)?;
        let verdict = if self.epimorphism { "is" } else { "is not" };
        writeln!(f, "--> The Kameko map {verdict} an epimorphism.")?;
        writeln!(f, "{BANNER}")
    }
}

/// Outcome of checking one polynomial against `(QP_k)_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub k: usize,
    pub n: u32,
    pub polynomial: String,
    pub is_hit: bool,
    /// Fixed modulo hits by the transpositions.
    pub sigma_invariant: bool,
    /// Fixed modulo hits by the transpositions and the transvection.
    pub gl_invariant: bool,
    /// The same over every group element; only for `k <= 3`.
    pub gl_invariant_full_group: Option<bool>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.sigma_invariant && self.gl_invariant && self.gl_invariant_full_group != Some(false)
    }
}

/// Checks `p`, which must be homogeneous of degree `n` (or zero).
pub fn verify_polynomial(cb: &CohitBasis, p: &Polynomial) -> Result<VerifyReport> {
    let (k, n) = (cb.k(), cb.n());
    crate::monomial::check_rank(k, p.rank())?;
    match p.homogeneous_degree()? {
        Some(d) if d != n => return Err(Error::DegreeMismatch { expected: n, found: d }),
        _ => {}
    }
    let sym = symmetric_generators(k);
    let sigma_invariant = is_invariant_under(cb, &sym, p)?;
    let gl_invariant = if k < 2 {
        sigma_invariant
    } else {
        let mut gens: Vec<GroupElement> = sym;
        gens.push(transvection(k)?);
        is_invariant_under(cb, &gens, p)?
    };
    let gl_invariant_full_group = if k <= 3 {
        Some(is_invariant_under(cb, &enumerate_group(k)?, p)?)
    } else {
        None
    };
    Ok(VerifyReport {
        k,
        n,
        polynomial: p.to_string(),
        is_hit: cb.is_hit(p)?,
        sigma_invariant,
        gl_invariant,
        gl_invariant_full_group,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.k;
        writeln!(f, "{BANNER}")?;
        writeln!(f, "Checking [{}] in (QP_{k})_{}", self.polynomial, self.n)?;
        writeln!(f, "{BANNER}")?;
        writeln!(f, "--> hit: {}", yes_no(self.is_hit))?;
        writeln!(f, "--> Sigma_{k}-invariant: {}", yes_no(self.sigma_invariant))?;
        writeln!(f, "--> GL_{k}-invariant (generators): {}", yes_no(self.gl_invariant))?;
        if let Some(full) = self.gl_invariant_full_group {
            writeln!(f, "--> GL_{k}-invariant (all elements): {}", yes_no(full))?;
        }
        writeln!(f, "{BANNER}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    #[test]
    fn peterson_report() {
        let run = compute_invariants(2, 3, &InvariantOptions::default()).unwrap();
        let r = &run.report;
        assert_eq!((r.basis_size, r.sigma_dim, r.gl_dim), (3, 2, Some(1)));
        assert!(!r.cache_hit);
        assert!(r.timings.is_none());
        assert_eq!(r.clusters.iter().map(|c| c.dim).sum::<usize>(), r.basis_size);
        let text = r.to_string();
        assert!(text.contains("FINAL RESULTS for (QP_2)_3"));
        assert!(text.contains("GL_2[1] = ["));
    }

    #[test]
    fn sigma_only_has_no_gl_stage() {
        let opts = InvariantOptions {
            sigma_only: true,
            ..Default::default()
        };
        let r = compute_invariants(3, 7, &opts).unwrap().report;
        assert_eq!(r.gl_dim, None);
        assert!(r.gl_generators.is_empty());
        assert!(!r.to_string().contains("GL_3-invariants"));
    }

    #[test]
    fn json_round_trip() {
        let opts = InvariantOptions {
            record_timings: true,
            ..Default::default()
        };
        let r = compute_invariants(3, 7, &opts).unwrap().report;
        assert!(r.timings.as_ref().is_some_and(|t| t.contains_key("sigma")));
        let back: InvariantReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);

        let b = compute_boardman(3, 3, Truncation::default(), false).unwrap();
        let back: BoardmanReport = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn cache_is_used_and_corruption_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let opts = InvariantOptions {
            cache_dir: Some(dir.path()),
            ..Default::default()
        };
        let cold = compute_invariants(3, 7, &opts).unwrap().report;
        let warm = compute_invariants(3, 7, &opts).unwrap().report;
        assert!(!cold.cache_hit && warm.cache_hit);
        assert_eq!(InvariantReport { cache_hit: true, ..cold.clone() }, warm);

        let path = crate::cache::cache_path(dir.path(), 3, 7);
        let mut bytes = std::fs::read(&path).unwrap();
        let mid = bytes.len() / 2;
        bytes[mid] ^= 1;
        std::fs::write(&path, bytes).unwrap();
        let rebuilt = compute_invariants(3, 7, &opts).unwrap().report;
        assert!(!rebuilt.cache_hit);
        assert_eq!(rebuilt, cold);
    }

    #[test]
    fn verify_examples() {
        let cb = build_cohit_basis_with_stats(2, 3).0;
        let r = verify_polynomial(&cb, &parse_polynomial("x1^3", 2).unwrap()).unwrap();
        assert!(!r.sigma_invariant && !r.passed());
        let r = verify_polynomial(&cb, &parse_polynomial("0", 2).unwrap()).unwrap();
        assert!(r.is_hit && r.passed());
        assert!(matches!(
            verify_polynomial(&cb, &parse_polynomial("x1^2", 2).unwrap()),
            Err(Error::DegreeMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn kameko_report() {
        let r = compute_kameko(2, 2, None).unwrap();
        assert_eq!((r.target_degree, r.target_dim), (0, 1));
        assert!(r.epimorphism);
        assert!(compute_kameko(4, 31, None).is_err());
    }
}
