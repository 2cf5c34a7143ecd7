//! Finite abelian covers of a graph determined by finite quotients of `H_f`,
//! lifts of the graph map, and the lifted homology action.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::cyclotomic::{CycElem, CyclotomicField};
use crate::error::{Error, Result};
use crate::graph::{EdgePath, Graph, GraphMap, Step};
use crate::group_ring::Character;
use crate::homology::HomologyData;
use crate::intmat::{integer_left_kernel, row_hermite, smith_normal_form, IntMatrix};
use crate::magnus::MagnusMatrix;
use crate::ring::Ring;

/// `Z^d / L` for a full-rank lattice `L` (rows of `basis`), presented as
/// `⊕ Z/n_i` through the Smith form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuotient {
    basis: IntMatrix,
    moduli: Vec<i64>,
    map: IntMatrix,
    lift: IntMatrix,
    description: String,
}

impl FiniteQuotient {
    pub fn from_basis(basis: IntMatrix, description: impl Into<String>) -> Result<Self> {
        let d = basis.cols();
        if basis.rows() != d {
            return Err(Error::InfiniteQuotient);
        }
        let snf = smith_normal_form(&basis.to_big());
        if snf.rank < d {
            return Err(Error::InfiniteQuotient);
        }
        let keep: Vec<usize> = (0..d).filter(|&i| snf.diagonal[i] != BigInt::from(1)).collect();
        let moduli = keep
            .iter()
            .map(|&i| {
                snf.diagonal[i]
                    .to_i64()
                    .ok_or_else(|| Error::ResourceCap("quotient too large".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let right = IntMatrix::try_from_big(&snf.right, d)?;
        let right_inv = IntMatrix::try_from_big(&snf.right_inverse, d)?;
        let map = IntMatrix::from_columns(
            &keep.iter().map(|&i| right.column(i)).collect::<Vec<_>>(),
            d,
        );
        let lift = IntMatrix::from_rows(keep.iter().map(|&i| right_inv.row(i).to_vec()).collect(), d);
        let basis = IntMatrix::try_from_big(&row_hermite(&basis.to_big()), d)?;
        Ok(FiniteQuotient {
            basis,
            moduli,
            map,
            lift,
            description: description.into(),
        })
    }

    /// `H_f / k H_f`.
    pub fn modulo(d: usize, k: i64) -> Result<Self> {
        if k <= 0 {
            return Err(Error::InfiniteQuotient);
        }
        let mut b = IntMatrix::zeros(d, d);
        for i in 0..d {
            b[(i, i)] = k;
        }
        Self::from_basis(b, format!("H_f/{k}H_f"))
    }

    /// `H_f / ker ξ`, cyclic of the exact order of `ξ`.
    pub fn from_character(xi: &Character) -> Result<Self> {
        let xi = xi.normalized();
        let d = xi.dim();
        // {h : e·h ≡ 0 mod N} is the projection of the left kernel of [e; N].
        let mut col = xi.exponents.clone();
        col.push(xi.order as i64);
        let m = IntMatrix::from_columns(&[col], d + 1);
        let k = integer_left_kernel(&m)?;
        let rows: Vec<Vec<i64>> = (0..k.rows()).map(|i| k.row(i)[..d].to_vec()).collect();
        let basis = IntMatrix::from_rows(rows, d);
        let desc = format!(
            "H_f/ker(xi), xi = ({}) / {}",
            xi.exponents
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            xi.order
        );
        Self::from_basis(basis, desc)
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().product::<i64>() as usize
    }

    /// Canonical form of the class of `x ∈ Z^d`.
    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        (0..self.moduli.len())
            .map(|i| {
                let v: i64 = (0..self.dim()).map(|k| x[k] * self.map[(k, i)]).sum();
                v.rem_euclid(self.moduli[i])
            })
            .collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((x, y), n)| (x + y).rem_euclid(*n))
            .collect()
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(&self.moduli)
            .map(|(x, n)| (-x).rem_euclid(*n))
            .collect()
    }

    /// A representative in `Z^d` of a canonical element.
    pub fn representative(&self, q: &[i64]) -> Vec<i64> {
        (0..self.dim())
            .map(|j| q.iter().enumerate().map(|(i, x)| x * self.lift[(i, j)]).sum())
            .collect()
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &n in &self.moduli {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..n).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Whether `ξ` is trivial on the defining lattice.
    pub fn admits(&self, xi: &Character) -> bool {
        xi.dim() == self.dim() && (0..self.basis.rows()).all(|r| xi.pairing(self.basis.row(r)) == 0)
    }
}

#[derive(Clone, Debug)]
pub struct CoverGraph {
    base: Graph,
    quotient: FiniteQuotient,
    graph: Graph,
    cocycle: Vec<Vec<i64>>,
    vertex_labels: Vec<(usize, Vec<i64>)>,
    edge_labels: Vec<(usize, Vec<i64>)>,
    vertex_index: BTreeMap<(usize, Vec<i64>), usize>,
    edge_index: BTreeMap<(usize, Vec<i64>), usize>,
    deck: Vec<Vec<i64>>,
}

fn label_suffix(q: &[i64]) -> String {
    q.iter().map(|x| format!("_{x}")).collect()
}

/// The cover with vertices `(v, q)` and edges `(e, q)` running from `(o(e), q)`
/// to `(τ(e), q + c̄(e))`, restricted to the component of `(base, 0)`.
pub fn abelian_cover(g: &Graph, h: &HomologyData, quotient: FiniteQuotient) -> Result<CoverGraph> {
    if quotient.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: quotient.dim(),
        });
    }
    let cocycle: Vec<Vec<i64>> = (0..g.num_edges())
        .map(|e| quotient.reduce(h.quotient.per_edge_cocycle(e)))
        .collect();
    let zero = vec![0i64; quotient.moduli().len()];
    // Breadth-first search from (base, 0).
    let mut seen: BTreeMap<(usize, Vec<i64>), ()> = BTreeMap::new();
    seen.insert((g.base(), zero.clone()), ());
    let mut queue = VecDeque::from([(g.base(), zero.clone())]);
    while let Some((v, q)) = queue.pop_front() {
        for e in 0..g.num_edges() {
            if g.origin(e) == v {
                let next = (g.terminus(e), quotient.add(&q, &cocycle[e]));
                if seen.insert(next.clone(), ()).is_none() {
                    queue.push_back(next);
                }
            }
            if g.terminus(e) == v {
                let next = (g.origin(e), quotient.add(&q, &quotient.neg(&cocycle[e])));
                if seen.insert(next.clone(), ()).is_none() {
                    queue.push_back(next);
                }
            }
        }
    }
    let vertex_labels: Vec<(usize, Vec<i64>)> = seen.into_keys().collect();
    let vertex_index: BTreeMap<(usize, Vec<i64>), usize> = vertex_labels
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    let deck: Vec<Vec<i64>> = vertex_labels
        .iter()
        .filter(|(v, _)| *v == g.base())
        .map(|(_, q)| q.clone())
        .collect();
    let mut edge_labels = Vec::new();
    for e in 0..g.num_edges() {
        for (v, q) in &vertex_labels {
            if *v == g.origin(e) {
                edge_labels.push((e, q.clone()));
            }
        }
    }
    let edge_index: BTreeMap<(usize, Vec<i64>), usize> = edge_labels
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    let vnames = vertex_labels
        .iter()
        .map(|(v, q)| format!("{}{}", g.vertex_name(*v), label_suffix(q)))
        .collect();
    let edges = edge_labels
        .iter()
        .map(|(e, q)| {
            let o = vertex_index[&(g.origin(*e), q.clone())];
            let t = vertex_index[&(g.terminus(*e), quotient.add(q, &cocycle[*e]))];
            (format!("{}{}", g.edge_name(*e), label_suffix(q)), o, t)
        })
        .collect();
    let base = vertex_index[&(g.base(), zero)];
    let graph = Graph::new(vnames, edges, base)?;
    Ok(CoverGraph {
        base: g.clone(),
        quotient,
        graph,
        cocycle,
        vertex_labels,
        edge_labels,
        vertex_index,
        edge_index,
        deck,
    })
}

impl CoverGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn base_graph(&self) -> &Graph {
        &self.base
    }

    pub fn quotient(&self) -> &FiniteQuotient {
        &self.quotient
    }

    /// Number of sheets: the order of the effective deck group.
    pub fn degree(&self) -> usize {
        self.deck.len()
    }

    /// The deck group actually realised by the component of `(base, 0)`.
    pub fn deck_group(&self) -> &[Vec<i64>] {
        &self.deck
    }

    pub fn reduced_cocycle(&self, e: usize) -> &[i64] {
        &self.cocycle[e]
    }

    pub fn vertex_label(&self, v: usize) -> &(usize, Vec<i64>) {
        &self.vertex_labels[v]
    }

    pub fn edge_label(&self, e: usize) -> &(usize, Vec<i64>) {
        &self.edge_labels[e]
    }

    pub fn vertex_at(&self, v: usize, q: &[i64]) -> Option<usize> {
        self.vertex_index.get(&(v, q.to_vec())).copied()
    }

    pub fn edge_at(&self, e: usize, q: &[i64]) -> Option<usize> {
        self.edge_index.get(&(e, q.to_vec())).copied()
    }

    /// Image of a cover vertex under the covering projection.
    pub fn project_vertex(&self, v: usize) -> usize {
        self.vertex_labels[v].0
    }

    pub fn project_edge(&self, e: usize) -> usize {
        self.edge_labels[e].0
    }

    /// Lifts a base path starting at the cover vertex over its start with
    /// label `q`.
    pub fn lift_path(&self, p: &EdgePath, q: &[i64]) -> Result<EdgePath> {
        let start = self
            .vertex_at(p.start(), q)
            .ok_or_else(|| Error::LiftInconsistency("start point is not in the cover".into()))?;
        let mut cur = q.to_vec();
        let mut steps = Vec::with_capacity(p.len());
        for s in p.steps() {
            if s.forward {
                let e = self
                    .edge_at(s.edge, &cur)
                    .ok_or_else(|| Error::LiftInconsistency("lifted edge missing".into()))?;
                steps.push(Step::forward(e));
                cur = self.quotient.add(&cur, &self.cocycle[s.edge]);
            } else {
                cur = self.quotient.add(&cur, &self.quotient.neg(&self.cocycle[s.edge]));
                let e = self
                    .edge_at(s.edge, &cur)
                    .ok_or_else(|| Error::LiftInconsistency("lifted edge missing".into()))?;
                steps.push(Step::backward(e));
            }
        }
        EdgePath::from_steps(&self.graph, start, steps)
    }

    /// Deck transformation by `σ` on cover edges (a permutation).
    pub fn deck_edge_permutation(&self, sigma: &[i64]) -> Vec<usize> {
        self.edge_labels
            .iter()
            .map(|(e, q)| self.edge_index[&(*e, self.quotient.add(q, sigma))])
            .collect()
    }

    pub fn deck_vertex_permutation(&self, sigma: &[i64]) -> Vec<usize> {
        self.vertex_labels
            .iter()
            .map(|(v, q)| self.vertex_index[&(*v, self.quotient.add(q, sigma))])
            .collect()
    }

    /// Applies a deck transformation to a path.
    pub fn deck_path(&self, sigma: &[i64], p: &EdgePath) -> EdgePath {
        let ep = self.deck_edge_permutation(sigma);
        let vp = self.deck_vertex_permutation(sigma);
        let steps = p
            .steps()
            .iter()
            .map(|s| Step {
                edge: ep[s.edge],
                forward: s.forward,
            })
            .collect();
        EdgePath::from_steps(&self.graph, vp[p.start()], steps).expect("deck maps paths to paths")
    }
}

#[derive(Clone, Debug)]
pub struct LiftedMap {
    pub cover: CoverGraph,
    pub map: GraphMap,
}

/// The lift of `f` fixing `(base, 0)`: the edge `(e, q)` goes to the lift of
/// `φ(e)` starting at label `q + δ(o(e))`.
pub fn lift_map(f: &GraphMap, h: &HomologyData, cover: CoverGraph) -> Result<LiftedMap> {
    let g = f.graph();
    let shifts: Vec<Vec<i64>> = h
        .vertex_shift
        .iter()
        .map(|s| cover.quotient.reduce(s))
        .collect();
    let mut images = Vec::with_capacity(cover.graph.num_edges());
    for (e, q) in &cover.edge_labels {
        let start = cover.quotient.add(q, &shifts[g.origin(*e)]);
        let lifted = cover.lift_path(f.edge_image(*e), &start)?;
        let end_label = cover
            .quotient
            .add(&cover.quotient.add(q, &cover.cocycle[*e]), &shifts[g.terminus(*e)]);
        let expected_end = cover.vertex_at(f.vertex_image(g.terminus(*e)), &end_label);
        if expected_end != Some(lifted.end()) {
            return Err(Error::LiftInconsistency(format!(
                "lift of the image of `{}` ends at the wrong sheet",
                cover.graph.edge_name(cover.edge_index[&(*e, q.clone())])
            )));
        }
        images.push(lifted);
    }
    let map = GraphMap::new(cover.graph.clone(), images, f.boundary())?;
    Ok(LiftedMap { cover, map })
}

impl LiftedMap {
    /// Matrix of the lifted map on `H_1` of the cover.
    pub fn h1_action(&self) -> Result<IntMatrix> {
        let st = crate::homology::spanning_tree(self.map.graph())?;
        Ok(crate::homology::homology_action(&self.map, &st))
    }

    /// Matrix of the lifted map on 1-chains of the cover (column = image of
    /// an edge).
    pub fn chain_action(&self) -> IntMatrix {
        let n = self.map.num_edges();
        let mut m = IntMatrix::zeros(n, n);
        for e in 0..n {
            for s in self.map.edge_image(e).steps() {
                m[(s.edge, e)] += s.sign();
            }
        }
        m
    }
}

/// Convenience: `abelian_cover` followed by `lift_map`.
pub fn lifted_cover(f: &GraphMap, h: &HomologyData, quotient: FiniteQuotient) -> Result<LiftedMap> {
    let cover = abelian_cover(f.graph(), h, quotient)?;
    lift_map(f, h, cover)
}

pub fn h1_action_on_cover(lm: &LiftedMap) -> Result<IntMatrix> {
    lm.h1_action()
}

/// Checks that the lifted chain map acts on the `ξ`-isotypic vectors
/// `w_i = Σ_q ξ(q)^{-1} (e_i, q)` by the specialized Magnus matrix:
/// `φ̃(w_i) = Σ_j A(ξ)_{ij} w_j`, exactly in `Q(ζ_N)`.
pub fn cover_chain_action_check(lm: &LiftedMap, a: &MagnusMatrix, xi: &Character) -> Result<bool> {
    let cover = &lm.cover;
    if !cover.quotient.admits(xi) {
        return Err(Error::IncompatibleCharacter(
            "character is not trivial on the defining lattice".into(),
        ));
    }
    if a.dim() != xi.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: xi.dim(),
        });
    }
    let field = CyclotomicField::new(xi.order);
    let spec = a.specialize_in(xi, &field)?;
    let n = cover.graph.num_edges();
    let m = cover.base.num_edges();
    let value = |q: &[i64]| -> i64 { xi.pairing(&cover.quotient.representative(q)) };
    // w_i as dense vectors over cover edges
    let w: Vec<Vec<CycElem>> = (0..m)
        .map(|i| {
            let mut v = vec![field.zero(); n];
            for (idx, (e, q)) in cover.edge_labels.iter().enumerate() {
                if *e == i {
                    v[idx] = field.zeta_pow(-value(q));
                }
            }
            v
        })
        .collect();
    for i in 0..m {
        let mut lhs = vec![field.zero(); n];
        for (idx, (e, q)) in cover.edge_labels.iter().enumerate() {
            if *e != i {
                continue;
            }
            let coeff = field.zeta_pow(-value(q));
            for s in lm.map.edge_image(idx).steps() {
                let c = if s.forward {
                    coeff.clone()
                } else {
                    field.neg(&coeff)
                };
                lhs[s.edge] = field.add(&lhs[s.edge], &c);
            }
        }
        let mut rhs = vec![field.zero(); n];
        for j in 0..m {
            if field.is_zero(&spec[i][j]) {
                continue;
            }
            for k in 0..n {
                if !field.is_zero(&w[j][k]) {
                    let t = field.mul(&spec[i][j], &w[j][k]);
                    rhs[k] = field.add(&rhs[k], &t);
                }
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Helper for reporting: the absolute value of a determinant as `u64`.
pub fn lattice_index(basis: &IntMatrix) -> u64 {
    basis.determinant().abs().to_u64().unwrap_or(u64::MAX)
}
