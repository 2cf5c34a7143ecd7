//! Integer homology of graphs through a spanning tree, the induced action
//! `f_*`, and the torsion-free quotient `H_f = coker(I - f_*)/torsion`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{EdgePath, Graph, GraphMap, Step};
use crate::intmat::{integer_left_kernel, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    tree_edges: Vec<bool>,
    tree_paths: Vec<EdgePath>,
    basis: Vec<usize>,
    basis_index: Vec<Option<usize>>,
}

/// Breadth-first spanning tree from the base, scanning edges in declaration
/// order. The non-tree edges, in declaration order, form the `H_1` basis.
pub fn spanning_tree(g: &Graph) -> Result<SpanningTree> {
    let nv = g.num_vertices();
    let mut tree_paths: Vec<Option<EdgePath>> = vec![None; nv];
    let mut tree_edges = vec![false; g.num_edges()];
    tree_paths[g.base()] = Some(EdgePath::empty(g.base()));
    let mut queue = VecDeque::from([g.base()]);
    while let Some(v) = queue.pop_front() {
        for e in 0..g.num_edges() {
            for step in [Step::forward(e), Step::backward(e)] {
                if step.start(g) != v {
                    continue;
                }
                let w = step.end(g);
                if tree_paths[w].is_none() {
                    let p = tree_paths[v]
                        .as_ref()
                        .unwrap()
                        .concat(&EdgePath::single(g, step))?;
                    tree_paths[w] = Some(p);
                    tree_edges[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let tree_paths = tree_paths
        .into_iter()
        .map(|p| p.ok_or(Error::Disconnected))
        .collect::<Result<Vec<_>>>()?;
    let basis: Vec<usize> = (0..g.num_edges()).filter(|&e| !tree_edges[e]).collect();
    let mut basis_index = vec![None; g.num_edges()];
    for (i, &e) in basis.iter().enumerate() {
        basis_index[e] = Some(i);
    }
    Ok(SpanningTree {
        tree_edges,
        tree_paths,
        basis,
        basis_index,
    })
}

impl SpanningTree {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn is_tree_edge(&self, e: usize) -> bool {
        self.tree_edges[e]
    }

    pub fn tree_edges(&self) -> Vec<usize> {
        (0..self.tree_edges.len()).filter(|&e| self.tree_edges[e]).collect()
    }

    pub fn tree_path(&self, v: usize) -> &EdgePath {
        &self.tree_paths[v]
    }

    /// Index of `e` in the basis, if it is a non-tree edge.
    pub fn basis_index(&self, e: usize) -> Option<usize> {
        self.basis_index[e]
    }

    /// The class of `tree_path(start) · p · tree_path(end)^{-1}` in `Z^r`.
    pub fn path_class(&self, p: &EdgePath) -> Vec<i64> {
        let mut v = vec![0i64; self.rank()];
        for s in p.steps() {
            if let Some(i) = self.basis_index[s.edge] {
                v[i] += s.sign();
            }
        }
        v
    }

    /// The loop `tree_path(o(e)) · e · tree_path(τ(e))^{-1}`.
    pub fn edge_loop(&self, g: &Graph, e: usize) -> EdgePath {
        self.tree_paths[g.origin(e)]
            .concat(&EdgePath::single(g, Step::forward(e)))
            .and_then(|p| p.concat(&self.tree_paths[g.terminus(e)].reverse()))
            .expect("tree paths are composable")
    }
}

/// Matrix of `f_*` on `H_1(Γ; Z)`: column `j` is the class of the image of
/// the loop of the `j`-th basis edge.
pub fn homology_action(f: &GraphMap, st: &SpanningTree) -> IntMatrix {
    let r = st.rank();
    let columns: Vec<Vec<i64>> = st
        .basis()
        .iter()
        .map(|&e| st.path_class(&f.apply(&st.edge_loop(f.graph(), e))))
        .collect();
    IntMatrix::from_columns(&columns, r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantQuotient {
    projection: IntMatrix,
    per_edge: Vec<Vec<i64>>,
}

/// `H_f`: the projection `P` is a Hermite-form basis of the integer left
/// kernel of `I - f_*`, which is saturated, so `Z^r / ker P` is torsion free.
pub fn equivariant_quotient(action: &IntMatrix, st: &SpanningTree, num_edges: usize) -> Result<EquivariantQuotient> {
    let r = action.rows();
    let diff = IntMatrix::identity(r).sub(action);
    let projection = if r == 0 {
        IntMatrix::zeros(0, 0)
    } else {
        integer_left_kernel(&diff)?
    };
    let per_edge = (0..num_edges)
        .map(|e| match st.basis_index(e) {
            Some(i) => projection.column(i),
            None => vec![0; projection.rows()],
        })
        .collect();
    Ok(EquivariantQuotient {
        projection,
        per_edge,
    })
}

impl EquivariantQuotient {
    pub fn rank(&self) -> usize {
        self.projection.rows()
    }

    pub fn projection(&self) -> &IntMatrix {
        &self.projection
    }

    pub fn per_edge_cocycle(&self, e: usize) -> &[i64] {
        &self.per_edge[e]
    }

    pub fn project(&self, class: &[i64]) -> Vec<i64> {
        if self.rank() == 0 {
            return Vec::new();
        }
        self.projection.mul_vec(class)
    }

    /// Translation of a path in `H_f`: `P · path_class(p)`.
    pub fn translate(&self, _st: &SpanningTree, p: &EdgePath) -> Vec<i64> {
        let mut v = vec![0i64; self.rank()];
        for s in p.steps() {
            for (x, c) in v.iter_mut().zip(&self.per_edge[s.edge]) {
                *x += s.sign() * c;
            }
        }
        v
    }
}

/// Spanning tree, homology action and `H_f` of a graph map, computed together.
#[derive(Clone, Debug)]
pub struct HomologyData {
    pub tree: SpanningTree,
    pub action: IntMatrix,
    pub quotient: EquivariantQuotient,
    /// `δ(v)`: translation of `φ(tree_path(v))`, the shift of the lift that
    /// fixes the base fibre point.
    pub vertex_shift: Vec<Vec<i64>>,
}

impl HomologyData {
    pub fn compute(f: &GraphMap) -> Result<Self> {
        let g = f.graph();
        let tree = spanning_tree(g)?;
        let action = homology_action(f, &tree);
        let quotient = equivariant_quotient(&action, &tree, g.num_edges())?;
        let vertex_shift = (0..g.num_vertices())
            .map(|v| quotient.translate(&tree, &f.apply(tree.tree_path(v))))
            .collect();
        Ok(HomologyData {
            tree,
            action,
            quotient,
            vertex_shift,
        })
    }

    pub fn rank(&self) -> usize {
        self.tree.rank()
    }

    pub fn dim(&self) -> usize {
        self.quotient.rank()
    }

    pub fn translate(&self, p: &EdgePath) -> Vec<i64> {
        self.quotient.translate(&self.tree, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph_map;

    fn map(text: &str) -> GraphMap {
        parse_graph_map(text).unwrap()
    }

    const S3: &str = "vertices: v0\nedges: a: v0 -> v0 ; b: v0 -> v0\nbase: v0\nmap a -> b a B\nmap b -> b\n";
    const GOLDEN: &str = "vertices: v\nedges: a: v -> v ; b: v -> v\nbase: v\nmap a -> a b\nmap b -> a\n";
    const TWIST: &str = "vertices: v\nedges: a: v -> v ; b: v -> v\nbase: v\nmap a -> a\nmap b -> b a\n";

    #[test]
    fn trees() {
        let f = map(S3);
        let st = spanning_tree(f.graph()).unwrap();
        assert!(st.tree_edges().is_empty());
        assert_eq!(st.basis(), &[0, 1]);
        let theta = map("vertices: u v\nedges: a: u -> v ; b: u -> v ; c: u -> v\nbase: u\nmap a -> a\nmap b -> b\nmap c -> c\n");
        let st = spanning_tree(theta.graph()).unwrap();
        assert_eq!(st.tree_edges(), vec![0]);
        assert_eq!(st.rank(), 2);
    }

    #[test]
    fn classes() {
        let f = map(S3);
        let g = f.graph();
        let st = spanning_tree(g).unwrap();
        let p = f.edge_image(0);
        assert_eq!(st.path_class(p), vec![1, 0]);
        assert_eq!(st.path_class(&EdgePath::empty(0)), vec![0, 0]);
        let back = EdgePath::from_steps(g, 0, vec![Step::forward(0), Step::backward(0)]).unwrap();
        assert_eq!(st.path_class(&back), vec![0, 0]);
    }

    #[test]
    fn actions() {
        let f = map(S3);
        let st = spanning_tree(f.graph()).unwrap();
        assert_eq!(homology_action(&f, &st), IntMatrix::identity(2));
        let g = map(GOLDEN);
        let st = spanning_tree(g.graph()).unwrap();
        assert_eq!(
            homology_action(&g, &st),
            IntMatrix::from_rows(vec![vec![1, 1], vec![1, 0]], 2)
        );
    }

    #[test]
    fn quotients() {
        let h = HomologyData::compute(&map(S3)).unwrap();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.quotient.projection(), &IntMatrix::identity(2));
        let h = HomologyData::compute(&map(GOLDEN)).unwrap();
        assert_eq!(h.dim(), 0);
        let h = HomologyData::compute(&map(TWIST)).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.quotient.per_edge_cocycle(0), &[0]);
        assert_eq!(h.quotient.per_edge_cocycle(1), &[1]);
    }

    #[test]
    fn translations() {
        let f = map(S3);
        let h = HomologyData::compute(&f).unwrap();
        let g = f.graph();
        let b = EdgePath::single(g, Step::forward(1));
        assert_eq!(h.translate(&b), vec![0, 1]);
        assert_eq!(h.translate(&EdgePath::empty(0)), vec![0, 0]);
        assert_eq!(h.translate(f.edge_image(0)), vec![1, 0]);
    }
}
