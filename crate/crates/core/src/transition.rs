//! The decorated transition graph of a graph map, its simple cycles, the
//! equivariant shadow polytope, extremal and vertex subgraphs, stability and
//! the dilatation.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgePath, GraphMap};
use crate::group_ring::LaurentElement;
use crate::homology::HomologyData;
use crate::hull::{affine_dimension, hull_vertices, in_convex_hull, Point};
use crate::intmat::IntMatrix;
use crate::magnus::MagnusMatrix;

/// Default cap on the number of simple cycles.
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

/// One traversal of `e_target` inside `φ(e_source)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub source: usize,
    pub target: usize,
    /// 1-based count of this traversal among the traversals of `target` in
    /// `φ(source)`.
    pub decoration: usize,
    /// Index of the traversal within `φ(source)`.
    pub position: usize,
    pub sign: i64,
    /// Prefix of `φ(source)` before the traversal; for a backward traversal
    /// the reversed step itself is included, so the prefix always ends at the
    /// origin of `target`.
    pub prefix: EdgePath,
    pub translation: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct TransitionGraph {
    map: GraphMap,
    homology: HomologyData,
    arcs: Vec<Arc>,
    out_arcs: Vec<Vec<usize>>,
}

/// Scans each `φ(e_i)` left to right; each traversal becomes an arc.
/// The translation of an arc from `e_i` is that of
/// `φ(tree_path(o(e_i))) · prefix`, which reduces to the translation of the
/// prefix on a one-vertex graph.
pub fn transition_graph(f: &GraphMap, h: &HomologyData) -> TransitionGraph {
    let g = f.graph();
    let m = g.num_edges();
    let mut arcs = Vec::new();
    let mut out_arcs = vec![Vec::new(); m];
    for i in 0..m {
        let img = f.edge_image(i);
        let shift = &h.vertex_shift[g.origin(i)];
        let mut seen = vec![0usize; m];
        for (pos, &s) in img.steps().iter().enumerate() {
            seen[s.edge] += 1;
            let prefix = if s.forward {
                img.prefix(g, pos)
            } else {
                img.prefix(g, pos + 1)
            };
            let translation: Vec<i64> = h
                .translate(&prefix)
                .iter()
                .zip(shift)
                .map(|(a, b)| a + b)
                .collect();
            out_arcs[i].push(arcs.len());
            arcs.push(Arc {
                source: i,
                target: s.edge,
                decoration: seen[s.edge],
                position: pos,
                sign: s.sign(),
                prefix,
                translation,
            });
        }
    }
    TransitionGraph {
        map: f.clone(),
        homology: h.clone(),
        arcs,
        out_arcs,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathData {
    pub sign: i64,
    pub translation: Vec<i64>,
    /// The recursive prefix `p(δη) = φ(p(δ)) · p(η)`.
    pub prefix: EdgePath,
}

impl TransitionGraph {
    pub fn map(&self) -> &GraphMap {
        &self.map
    }

    pub fn homology(&self) -> &HomologyData {
        &self.homology
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, a: usize) -> &Arc {
        &self.arcs[a]
    }

    pub fn num_nodes(&self) -> usize {
        self.out_arcs.len()
    }

    pub fn dim(&self) -> usize {
        self.homology.dim()
    }

    pub fn out_arcs(&self, node: usize) -> &[usize] {
        &self.out_arcs[node]
    }

    /// Unsigned count matrix `e(i, j)`.
    pub fn count_matrix(&self) -> IntMatrix {
        let m = self.num_nodes();
        let mut c = IntMatrix::zeros(m, m);
        for a in &self.arcs {
            c[(a.source, a.target)] += 1;
        }
        c
    }

    /// Sign, translation and recursive prefix of a composable arc sequence.
    pub fn path_data(&self, arcs: &[usize]) -> Result<PathData> {
        let Some(&first) = arcs.first() else {
            return Err(Error::NonComposable("empty arc sequence".into()));
        };
        for w in arcs.windows(2) {
            if self.arcs[w[0]].target != self.arcs[w[1]].source {
                return Err(Error::NonComposable(format!(
                    "arc {} ends at node {} but arc {} starts at node {}",
                    w[0], self.arcs[w[0]].target, w[1], self.arcs[w[1]].source
                )));
            }
        }
        let mut sign = 1;
        let mut translation = vec![0i64; self.dim()];
        let mut prefix = self.arcs[first].prefix.clone();
        for (n, &a) in arcs.iter().enumerate() {
            let arc = &self.arcs[a];
            sign *= arc.sign;
            for (x, y) in translation.iter_mut().zip(&arc.translation) {
                *x += y;
            }
            if n > 0 {
                prefix = self.map.apply(&prefix).concat(&arc.prefix)?;
            }
        }
        Ok(PathData {
            sign,
            translation,
            prefix,
        })
    }

    /// All simple directed cycles, each a sequence of arcs starting at its
    /// smallest node. Order: by smallest node, then Johnson's search order,
    /// then parallel-arc choices lexicographically.
    pub fn simple_cycles(&self, cap: usize) -> Result<Vec<Cycle>> {
        let m = self.num_nodes();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
        for a in &self.arcs {
            if !adj[a.source].contains(&a.target) {
                adj[a.source].push(a.target);
            }
        }
        for row in adj.iter_mut() {
            row.sort_unstable();
        }
        let node_cycles = johnson_cycles(&adj, cap)?;
        let mut out = Vec::new();
        for nodes in node_cycles {
            let k = nodes.len();
            let choices: Vec<Vec<usize>> = (0..k)
                .map(|i| {
                    let (u, v) = (nodes[i], nodes[(i + 1) % k]);
                    self.out_arcs[u]
                        .iter()
                        .copied()
                        .filter(|&a| self.arcs[a].target == v)
                        .collect()
                })
                .collect();
            let mut idx = vec![0usize; k];
            'expand: loop {
                let arcs: Vec<usize> = (0..k).map(|i| choices[i][idx[i]]).collect();
                out.push(self.cycle_from_arcs(arcs));
                if out.len() > cap {
                    return Err(Error::CycleCap(cap));
                }
                let mut i = k;
                loop {
                    if i == 0 {
                        break 'expand;
                    }
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < choices[i].len() {
                        break;
                    }
                    idx[i] = 0;
                }
            }
        }
        Ok(out)
    }

    pub fn cycle_from_arcs(&self, arcs: Vec<usize>) -> Cycle {
        let mut sign = 1;
        let mut translation = vec![0i64; self.dim()];
        for &a in &arcs {
            sign *= self.arcs[a].sign;
            for (x, y) in translation.iter_mut().zip(&self.arcs[a].translation) {
                *x += y;
            }
        }
        Cycle {
            arcs,
            sign,
            translation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub arcs: Vec<usize>,
    pub sign: i64,
    pub translation: Vec<i64>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// `t_n(γ) = t(γ) / length(γ)`.
    pub fn normalized_translation(&self) -> Point {
        let len = BigInt::from(self.arcs.len());
        self.translation
            .iter()
            .map(|&x| BigRational::new(BigInt::from(x), len.clone()))
            .collect()
    }
}

/// Johnson's elementary-circuit enumeration on a simple digraph.
fn johnson_cycles(adj: &[Vec<usize>], cap: usize) -> Result<Vec<Vec<usize>>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        in_scc: Vec<bool>,
        blocked: Vec<bool>,
        b: Vec<BTreeSet<usize>>,
        stack: Vec<usize>,
        out: Vec<Vec<usize>>,
        cap: usize,
        start: usize,
    }

    impl State<'_> {
        fn unblock(&mut self, u: usize) {
            let mut work = vec![u];
            while let Some(x) = work.pop() {
                if !self.blocked[x] {
                    continue;
                }
                self.blocked[x] = false;
                let bs = std::mem::take(&mut self.b[x]);
                work.extend(bs);
            }
        }

        fn circuit(&mut self, v: usize) -> Result<bool> {
            let mut found = false;
            self.stack.push(v);
            self.blocked[v] = true;
            for idx in 0..self.adj[v].len() {
                let w = self.adj[v][idx];
                if !self.in_scc[w] {
                    continue;
                }
                if w == self.start {
                    self.out.push(self.stack.clone());
                    if self.out.len() > self.cap {
                        return Err(Error::CycleCap(self.cap));
                    }
                    found = true;
                } else if !self.blocked[w] && self.circuit(w)? {
                    found = true;
                }
            }
            if found {
                self.unblock(v);
            } else {
                for idx in 0..self.adj[v].len() {
                    let w = self.adj[v][idx];
                    if self.in_scc[w] {
                        self.b[w].insert(v);
                    }
                }
            }
            self.stack.pop();
            Ok(found)
        }
    }

    let n = adj.len();
    let mut st = State {
        adj,
        in_scc: vec![false; n],
        blocked: vec![false; n],
        b: vec![BTreeSet::new(); n],
        stack: Vec::new(),
        out: Vec::new(),
        cap,
        start: 0,
    };
    for s in 0..n {
        let comp = scc_containing(adj, s, s);
        st.in_scc = vec![false; n];
        for &v in &comp {
            st.in_scc[v] = true;
            st.blocked[v] = false;
            st.b[v].clear();
        }
        st.start = s;
        st.circuit(s)?;
    }
    Ok(st.out)
}

/// Strongly connected component of `s` in the subgraph induced on nodes `>= lo`.
fn scc_containing(adj: &[Vec<usize>], s: usize, lo: usize) -> Vec<usize> {
    let n = adj.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            if forward {
                for &w in &adj[v] {
                    if w >= lo && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            } else {
                for (u, row) in adj.iter().enumerate() {
                    if u >= lo && !seen[u] && row.contains(&v) {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        seen
    };
    let f = reach(true);
    let b = reach(false);
    (0..n).filter(|&v| f[v] && b[v]).collect()
}

/// Strongly connected components (Kosaraju), each sorted.
pub fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut assigned = vec![false; n];
    let mut comps = Vec::new();
    for s in 0..n {
        if assigned[s] {
            continue;
        }
        let comp = scc_containing(adj, s, 0);
        for &v in &comp {
            assigned[v] = true;
        }
        comps.push(comp);
    }
    comps
}

// ---------------------------------------------------------------------------
// Shadow

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowPolytope {
    pub dim: usize,
    pub vertices: Vec<Point>,
    /// For each vertex, the indices (into `cycles`) of the simple cycles whose
    /// normalized translation equals it.
    pub generators: Vec<Vec<usize>>,
    pub cycles: Vec<Cycle>,
    pub affine_dim: usize,
}

impl ShadowPolytope {
    pub fn contains(&self, p: &Point) -> bool {
        in_convex_hull(&self.vertices, p)
    }

    pub fn vertex_index(&self, u: &Point) -> Option<usize> {
        self.vertices.iter().position(|v| v == u)
    }

    /// Whether every vertex has integer coordinates.
    pub fn is_integral(&self) -> bool {
        self.vertices.iter().flatten().all(|x| x.is_integer())
    }

    /// Least common denominator of the vertex coordinates.
    pub fn denominator(&self) -> BigInt {
        self.vertices.iter().flatten().fold(BigInt::one(), |acc, x| {
            num_integer::Integer::lcm(&acc, x.denom())
        })
    }
}

/// Convex hull of the normalized translations of the simple cycles.
pub fn shadow(t: &TransitionGraph, cap: usize) -> Result<ShadowPolytope> {
    let cycles = t.simple_cycles(cap)?;
    shadow_from_cycles(t.dim(), cycles)
}

pub fn shadow_from_cycles(dim: usize, cycles: Vec<Cycle>) -> Result<ShadowPolytope> {
    let points: Vec<Point> = cycles.iter().map(|c| c.normalized_translation()).collect();
    let mut idx = hull_vertices(&points);
    idx.sort_by(|&a, &b| points[a].cmp(&points[b]));
    let vertices: Vec<Point> = idx.iter().map(|&i| points[i].clone()).collect();
    let generators = vertices
        .iter()
        .map(|v| (0..points.len()).filter(|&i| points[i] == *v).collect())
        .collect();
    let affine_dim = if vertices.is_empty() {
        0
    } else {
        affine_dimension(&vertices)
    };
    Ok(ShadowPolytope {
        dim,
        vertices,
        generators,
        cycles,
        affine_dim,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelectionKind {
    Extremal {
        functional: Vec<BigRational>,
        maximum: BigRational,
    },
    Vertex(Point),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgraphSelection {
    pub arcs: BTreeSet<usize>,
    pub kind: SelectionKind,
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Union of the simple cycles maximizing `ω ∘ t_n`.
pub fn extremal_subgraph(shadow: &ShadowPolytope, omega: &[BigRational]) -> Result<SubgraphSelection> {
    if omega.len() != shadow.dim {
        return Err(Error::DimensionMismatch {
            expected: shadow.dim,
            found: omega.len(),
        });
    }
    let values: Vec<BigRational> = shadow
        .cycles
        .iter()
        .map(|c| dot(omega, &c.normalized_translation()))
        .collect();
    let Some(max) = values.iter().max().cloned() else {
        return Ok(SubgraphSelection {
            arcs: BTreeSet::new(),
            kind: SelectionKind::Extremal {
                functional: omega.to_vec(),
                maximum: BigRational::zero(),
            },
        });
    };
    let arcs = shadow
        .cycles
        .iter()
        .zip(&values)
        .filter(|(_, v)| **v == max)
        .flat_map(|(c, _)| c.arcs.iter().copied())
        .collect();
    Ok(SubgraphSelection {
        arcs,
        kind: SelectionKind::Extremal {
            functional: omega.to_vec(),
            maximum: max,
        },
    })
}

/// Union of the simple cycles with `t_n = u`, for a vertex `u` of the shadow.
pub fn vertex_subgraph(shadow: &ShadowPolytope, u: &Point) -> Result<SubgraphSelection> {
    let idx = shadow.vertex_index(u).ok_or(Error::NotAShadowVertex)?;
    let arcs = shadow.generators[idx]
        .iter()
        .flat_map(|&c| shadow.cycles[c].arcs.iter().copied())
        .collect();
    Ok(SubgraphSelection {
        arcs,
        kind: SelectionKind::Vertex(u.clone()),
    })
}

pub(crate) fn subgraph_matrix_of_arcs(
    t: &TransitionGraph,
    arcs: impl IntoIterator<Item = usize>,
) -> MagnusMatrix {
    let m = t.num_nodes();
    let d = t.dim();
    let mut a = MagnusMatrix::zeros(m, d);
    for idx in arcs {
        let arc = &t.arcs[idx];
        let term = LaurentElement::signed_monomial(arc.translation.clone(), arc.sign);
        let cur = a.entry(arc.source, arc.target).try_add(&term).expect("same dimension");
        *a.entry_mut(arc.source, arc.target) = cur;
    }
    a
}

/// Group-ring matrix built from the selected arcs only.
pub fn subgraph_matrix(t: &TransitionGraph, sel: &SubgraphSelection) -> MagnusMatrix {
    subgraph_matrix_of_arcs(t, sel.arcs.iter().copied())
}

/// `A` is stable (not nilpotent) iff some `trace(A^k) ≠ 0` with `k <= m`.
pub fn is_stable(a: &MagnusMatrix) -> bool {
    a.trace_powers(a.size()).iter().any(|t| !t.is_zero())
}

/// Smallest `k <= bound` such that every `trace(A_v^k)` is a single monomial
/// at `k v` with positive coefficient.
pub fn positive_power(matrices: &[MagnusMatrix], vertices: &[Point], bound: usize) -> Result<Option<usize>> {
    if matrices.len() != vertices.len() {
        return Err(Error::DimensionMismatch {
            expected: matrices.len(),
            found: vertices.len(),
        });
    }
    for (i, a) in matrices.iter().enumerate() {
        if !is_stable(a) {
            return Err(Error::UnstableVertex(i));
        }
    }
    let traces: Vec<Vec<LaurentElement>> = matrices.iter().map(|a| a.trace_powers(bound)).collect();
    for k in 1..=bound {
        let ok = traces.iter().zip(vertices).all(|(tr, v)| {
            let Some((e, c)) = tr[k - 1].as_monomial() else {
                return false;
            };
            let kb = BigInt::from(k);
            c.is_positive()
                && e.len() == v.len()
                && e.iter()
                    .zip(v)
                    .all(|(x, y)| BigRational::from_integer(BigInt::from(*x)) == y * BigRational::from_integer(kb.clone()))
        });
        if ok {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Perron-Frobenius eigenvalue of the count matrix, by power iteration with
/// Collatz-Wielandt bounds on each strongly connected block.
pub fn dilatation(t: &TransitionGraph) -> f64 {
    perron_root(&t.count_matrix(), 1e-12)
}

/// Spectral radius of a nonnegative integer matrix.
pub fn perron_root(c: &IntMatrix, tol: f64) -> f64 {
    let n = c.rows();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| c[(i, j)] != 0).collect())
        .collect();
    let mut best: f64 = 0.0;
    for comp in strongly_connected_components(&adj) {
        let k = comp.len();
        if k == 1 {
            best = best.max(c[(comp[0], comp[0])] as f64);
            continue;
        }
        // (B + I) is primitive for irreducible B
        let b: Vec<Vec<f64>> = comp
            .iter()
            .map(|&i| {
                comp.iter()
                    .map(|&j| c[(i, j)] as f64 + if i == j { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        let mut x = vec![1.0; k];
        let mut estimate = 0.0;
        for _ in 0..1_000_000 {
            let y: Vec<f64> = b
                .iter()
                .map(|row| row.iter().zip(&x).map(|(a, v)| a * v).sum())
                .collect();
            let ratios: Vec<f64> = y.iter().zip(&x).map(|(a, v)| a / v).collect();
            let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ratios.iter().cloned().fold(0.0, f64::max);
            estimate = 0.5 * (lo + hi);
            let norm = y.iter().cloned().fold(0.0, f64::max);
            x = y.iter().map(|v| v / norm).collect();
            if hi - lo <= tol * hi.max(1.0) {
                break;
            }
        }
        best = best.max(estimate - 1.0);
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub mode: String,
    pub expected: i64,
    pub shadow_dimension: usize,
    pub matches: bool,
    pub applicable: bool,
    pub note: String,
}

/// Compares the shadow dimension with `d + 1 - b` (surface mode, boundary
/// count `b` given) or `d` (free mode). Advisory only.
pub fn dimension_diagnostic(f: &GraphMap, shadow: &ShadowPolytope, d: usize, dilatation: f64) -> DimensionReport {
    let (mode, expected) = match f.boundary() {
        Some(b) => ("surface", d as i64 + 1 - b as i64),
        None => ("free", d as i64),
    };
    let applicable = dilatation > 1.0 + 1e-9;
    let matches = expected == shadow.affine_dim as i64;
    let note = if applicable {
        if matches {
            "shadow dimension agrees with the expected value".to_string()
        } else {
            "shadow dimension differs from the expected value".to_string()
        }
    } else {
        "input has no exponential growth, so the dimension formula does not apply".to_string()
    };
    DimensionReport {
        mode: mode.to_string(),
        expected,
        shadow_dimension: shadow.affine_dim,
        matches,
        applicable,
        note,
    }
}
