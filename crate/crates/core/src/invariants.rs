//! Global cluster analysis: the weight interaction graph on `B_n`, its
//! connected components, the `Σ_k`-invariants of `(QP_k)_n` computed cluster
//! by cluster, and the `GL_k`-invariants among them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::graph::UnGraph;
use rayon::prelude::*;

use crate::error::Result;
use crate::gf2::{kernel_basis, BitMatrix, BitVec};
use crate::group::{substitute, symmetric_generators, transvection, GroupElement};
use crate::monomial::{Polynomial, WeightVector};
use crate::reducer::CohitBasis;

/// Vertices are the weights occurring in `B_n` (sorted), edges are index pairs
/// `(a, b)` with `a <= b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightGraph {
    pub vertices: Vec<WeightVector>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl WeightGraph {
    pub fn vertex_index(&self, w: &WeightVector) -> Option<usize> {
        self.vertices.binary_search(w).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub weights: Vec<WeightVector>,
    /// Sorted indices into `B_n`.
    pub basis_indices: Vec<usize>,
}

impl Cluster {
    pub fn dim(&self) -> usize {
        self.basis_indices.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum InvariantLevel {
    Symmetric,
    General,
}

impl fmt::Display for InvariantLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvariantLevel::Symmetric => "Sigma",
            InvariantLevel::General => "GL",
        })
    }
}

/// Invariant classes as representative polynomials together with their
/// coordinates over `B_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantBasis {
    pub level: InvariantLevel,
    pub elements: Vec<(Polynomial, BitVec)>,
}

impl InvariantBasis {
    pub fn empty(level: InvariantLevel) -> Self {
        InvariantBasis {
            level,
            elements: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn polynomials(&self) -> impl Iterator<Item = &Polynomial> + '_ {
        self.elements.iter().map(|(p, _)| p)
    }

    /// Whether a coordinate vector over `B_n` lies in the span.
    pub fn spans(&self, coords: &BitVec) -> bool {
        let rows: Vec<BitVec> = self.elements.iter().map(|(_, c)| c.clone()).collect();
        BitMatrix::from_bitvecs(coords.len(), &rows).rref().contains(coords)
    }
}

/// `φ((g - I) p)`.
fn defect(cb: &CohitBasis, g: &GroupElement, p: &Polynomial) -> Result<BitVec> {
    let mut moved = substitute(g, p)?;
    moved.add_assign(p)?;
    cb.reduce(&moved)
}

pub fn build_weight_graph(cb: &CohitBasis) -> Result<WeightGraph> {
    let weights: Vec<WeightVector> = cb.basis().iter().map(|m| m.weight()).collect();
    let vertices: Vec<WeightVector> = weights.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let vertex_of = |w: &WeightVector| vertices.binary_search(w).expect("basis weight is a vertex");
    let gens = symmetric_generators(cb.k());
    let per_monomial: Vec<Vec<(usize, usize)>> = cb
        .basis()
        .par_iter()
        .zip(weights.par_iter())
        .map(|(m, w)| -> Result<Vec<(usize, usize)>> {
            let src = vertex_of(w);
            let mut edges = Vec::new();
            let p = Polynomial::from_monomial(m.clone());
            for g in &gens {
                let image = cb.reduce(&substitute(g, &p)?)?;
                for i in image.ones() {
                    let dst = vertex_of(&weights[i]);
                    edges.push((src.min(dst), src.max(dst)));
                }
            }
            Ok(edges)
        })
        .collect::<Result<_>>()?;
    let edges = per_monomial.into_iter().flatten().collect();
    Ok(WeightGraph { vertices, edges })
}

/// Connected components of the graph, each expanded to the basis indices of
/// its weights. Clusters are ordered by their smallest basis index.
pub fn clusters(graph: &WeightGraph, cb: &CohitBasis) -> Vec<Cluster> {
    let mut g: UnGraph<(), ()> = UnGraph::with_capacity(graph.vertices.len(), graph.edges.len());
    let nodes: Vec<_> = graph.vertices.iter().map(|_| g.add_node(())).collect();
    for &(a, b) in &graph.edges {
        if a != b {
            g.add_edge(nodes[a], nodes[b], ());
        }
    }
    let components = petgraph::algo::kosaraju_scc(&g);

    let mut by_vertex = vec![usize::MAX; graph.vertices.len()];
    for (c, comp) in components.iter().enumerate() {
        for node in comp {
            by_vertex[node.index()] = c;
        }
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); components.len()];
    for (i, m) in cb.basis().iter().enumerate() {
        let v = graph.vertex_index(&m.weight()).expect("graph built from this basis");
        members[by_vertex[v]].push(i);
    }
    let mut out: Vec<Cluster> = components
        .iter()
        .zip(members)
        .map(|(comp, basis_indices)| {
            let mut weights: Vec<WeightVector> = comp.iter().map(|n| graph.vertices[n.index()].clone()).collect();
            weights.sort();
            Cluster { weights, basis_indices }
        })
        .collect();
    out.sort_by_key(|c| c.basis_indices.first().copied().unwrap_or(usize::MAX));
    out
}

/// Checks that every transposition keeps each cluster's span closed modulo
/// hits. Returns the first offending `(basis index, leaked basis index)`.
pub fn check_cluster_closure(cb: &CohitBasis, clusters: &[Cluster]) -> Result<Option<(usize, usize)>> {
    let mut cluster_of = vec![usize::MAX; cb.dim()];
    for (c, cl) in clusters.iter().enumerate() {
        for &i in &cl.basis_indices {
            cluster_of[i] = c;
        }
    }
    for g in symmetric_generators(cb.k()) {
        for (i, m) in cb.basis().iter().enumerate() {
            let image = cb.reduce(&substitute(&g, &Polynomial::from_monomial(m.clone()))?)?;
            let leak = image.ones().find(|&j| cluster_of[j] != cluster_of[i]);
            if let Some(j) = leak {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

fn lift(cb: &CohitBasis, indices: &[usize], local: &BitVec) -> (Polynomial, BitVec) {
    let global = BitVec::from_indices(cb.dim(), local.ones().map(|j| indices[j])).expect("cluster indices are in range");
    (cb.polynomial_of(&global), global)
}

/// Kernel of `A_Σ`: column `j` stacks `φ((ρᵢ - I) m_j)` for `i = 1..k-1`,
/// block `i-1` occupying rows `(i-1) N .. i N` with `N = |B_n|`.
pub fn sigma_invariants(cluster: &Cluster, cb: &CohitBasis) -> Result<InvariantBasis> {
    let gens = symmetric_generators(cb.k());
    let total = cb.dim();
    let columns: Vec<BitVec> = cluster
        .basis_indices
        .par_iter()
        .map(|&i| -> Result<BitVec> {
            let p = Polynomial::from_monomial(cb.basis()[i].clone());
            let mut col = BitVec::zeros(gens.len() * total);
            for (block, g) in gens.iter().enumerate() {
                for r in defect(cb, g, &p)?.ones() {
                    col.set(block * total + r, true);
                }
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    let a_sigma = BitMatrix::from_columns(gens.len() * total, &columns);
    let elements = kernel_basis(&a_sigma)
        .iter()
        .map(|v| lift(cb, &cluster.basis_indices, v))
        .collect();
    Ok(InvariantBasis {
        level: InvariantLevel::Symmetric,
        elements,
    })
}

/// Kernel of `A_GL` with columns `φ((ρ_k - I) s_j)`, recombining the given
/// `Σ_k`-invariants. For `k = 1` every invariant is kept.
pub fn glk_invariants(sigma: &InvariantBasis, cb: &CohitBasis) -> Result<InvariantBasis> {
    if sigma.elements.is_empty() {
        return Ok(InvariantBasis::empty(InvariantLevel::General));
    }
    let columns: Vec<BitVec> = if cb.k() < 2 {
        vec![BitVec::zeros(cb.dim()); sigma.dim()]
    } else {
        let rho = transvection(cb.k())?;
        sigma
            .elements
            .par_iter()
            .map(|(p, _)| defect(cb, &rho, p))
            .collect::<Result<_>>()?
    };
    let a_gl = BitMatrix::from_columns(cb.dim(), &columns);
    let elements = kernel_basis(&a_gl)
        .iter()
        .map(|v| {
            let mut coords = BitVec::zeros(cb.dim());
            for j in v.ones() {
                coords.xor_assign(&sigma.elements[j].1);
            }
            (cb.polynomial_of(&coords), coords)
        })
        .collect();
    Ok(InvariantBasis {
        level: InvariantLevel::General,
        elements,
    })
}

/// Is `p` fixed modulo hits by every element of `gens`?
pub fn is_invariant_under(cb: &CohitBasis, gens: &[GroupElement], p: &Polynomial) -> Result<bool> {
    for g in gens {
        if !defect(cb, g, p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Results for one cluster.
#[derive(Clone, Debug)]
pub struct ClusterResult {
    pub cluster: Cluster,
    pub sigma: InvariantBasis,
}

/// Graph, clusters, per-cluster `Σ_k`-invariants and the `GL_k`-invariants.
#[derive(Clone, Debug)]
pub struct ClusterAnalysis {
    pub graph: WeightGraph,
    pub clusters: Vec<ClusterResult>,
    /// `None` when only the symmetric stage was requested.
    pub gl: Option<InvariantBasis>,
}

impl ClusterAnalysis {
    pub fn sigma_dim(&self) -> usize {
        self.clusters.iter().map(|c| c.sigma.dim()).sum()
    }

    pub fn gl_dim(&self) -> usize {
        self.gl.as_ref().map_or(0, InvariantBasis::dim)
    }

    pub fn sigma_invariants(&self) -> impl Iterator<Item = &(Polynomial, BitVec)> + '_ {
        self.clusters.iter().flat_map(|c| c.sigma.elements.iter())
    }

    pub fn gl_invariants(&self) -> impl Iterator<Item = &(Polynomial, BitVec)> + '_ {
        self.gl.iter().flat_map(|g| g.elements.iter())
    }

    /// All clusters' `Σ_k`-invariants together.
    pub fn sigma_span(&self) -> InvariantBasis {
        InvariantBasis {
            level: InvariantLevel::Symmetric,
            elements: self.sigma_invariants().cloned().collect(),
        }
    }
}

/// Graph, clusters, per-cluster `Σ_k`-invariants, then (unless `sigma_only`)
/// the `GL_k` stage over all of them at once: the transvection does not
/// preserve clusters, so an invariant may combine several of them.
///
/// Panics if a cluster leaks under a transposition, which would mean the
/// graph missed an edge.
pub fn analyze(cb: &CohitBasis, sigma_only: bool) -> Result<ClusterAnalysis> {
    let graph = build_weight_graph(cb)?;
    let cls = clusters(&graph, cb);
    if let Some((i, j)) = check_cluster_closure(cb, &cls)? {
        panic!("cluster closure violated: basis element {i} leaks into {j}");
    }
    let results: Vec<ClusterResult> = cls
        .into_iter()
        .map(|cluster| {
            let sigma = sigma_invariants(&cluster, cb)?;
            Ok(ClusterResult { cluster, sigma })
        })
        .collect::<Result<_>>()?;
    let mut analysis = ClusterAnalysis {
        graph,
        clusters: results,
        gl: None,
    };
    if !sigma_only {
        analysis.gl = Some(glk_invariants(&analysis.sigma_span(), cb)?);
    }
    Ok(analysis)
}

/// Weight groups of the basis: weight vector to sorted basis indices.
pub fn weight_groups(cb: &CohitBasis) -> BTreeMap<WeightVector, Vec<usize>> {
    let mut groups: BTreeMap<WeightVector, Vec<usize>> = BTreeMap::new();
    for (i, m) in cb.basis().iter().enumerate() {
        groups.entry(m.weight()).or_default().push(i);
    }
    groups
}
