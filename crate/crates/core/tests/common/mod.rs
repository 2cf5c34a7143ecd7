//! Helpers shared by the integration tests: corpus access, random graph maps,
//! random paths, random group-ring data and a few exact oracles.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ttcover::corpus;
use ttcover::graph::{EdgePath, Graph, GraphMap, Step};
use ttcover::group_ring::{Character, Lattice, LaurentElement};
use ttcover::homology::spanning_tree;
use ttcover::intmat::IntMatrix;
use ttcover::transition::TransitionGraph;

pub mod checks;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn corpus_maps() -> Vec<(&'static str, GraphMap)> {
    corpus::CORPUS
        .iter()
        .map(|e| (e.name, corpus::load(e.name).expect("corpus parses")))
        .collect()
}

/// Freely reduces a step sequence.
pub fn reduce_steps(steps: &[Step]) -> Vec<Step> {
    let mut out: Vec<Step> = Vec::with_capacity(steps.len());
    for &s in steps {
        if out.last() == Some(&s.inverse()) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    out
}

pub fn steps_at(g: &Graph, v: usize) -> Vec<Step> {
    (0..g.num_edges())
        .flat_map(|e| [Step::forward(e), Step::backward(e)])
        .filter(|s| s.start(g) == v)
        .collect()
}

/// A random reduced walk of exactly `len` steps from `v` (shorter only if `v`
/// has no outgoing step).
pub fn random_walk(g: &Graph, v: usize, len: usize, rng: &mut impl Rng) -> EdgePath {
    let mut steps: Vec<Step> = Vec::new();
    let mut cur = v;
    for _ in 0..len {
        let options: Vec<Step> = steps_at(g, cur)
            .into_iter()
            .filter(|s| steps.last().is_none_or(|l| *s != l.inverse()))
            .collect();
        let Some(&s) = options.choose(rng) else { break };
        steps.push(s);
        cur = s.end(g);
    }
    EdgePath::from_steps(g, v, steps).expect("walk is composable")
}

/// Reduced path from `u` to `w` through the spanning tree.
pub fn tree_route(g: &Graph, u: usize, w: usize) -> Vec<Step> {
    let st = spanning_tree(g).expect("connected");
    let mut steps = st.tree_path(u).reverse().steps().to_vec();
    steps.extend_from_slice(st.tree_path(w).steps());
    reduce_steps(&steps)
}

/// A random graph map on a connected graph with up to three vertices and
/// four edges. Vertex images are random (base fixed); each edge image is a
/// random walk closed up by a tree route and freely reduced.
pub fn random_graph_map(rng: &mut impl Rng) -> GraphMap {
    loop {
        let nv = rng.gen_range(1..=3usize);
        let ne = rng.gen_range(nv.max(2)..=4usize);
        let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
        let mut edges = Vec::new();
        for e in 0..ne {
            let (o, t) = if e + 1 < nv {
                (rng.gen_range(0..=e), e + 1)
            } else {
                (rng.gen_range(0..nv), rng.gen_range(0..nv))
            };
            edges.push((format!("{}", (b'a' + e as u8) as char), o, t));
        }
        let Ok(g) = Graph::new(names, edges, 0) else { continue };
        let mut vimg: Vec<usize> = (0..nv).map(|_| rng.gen_range(0..nv)).collect();
        vimg[0] = 0;
        let mut images = Vec::new();
        for e in 0..ne {
            let start = vimg[g.origin(e)];
            let len = rng.gen_range(1..=3);
            let walk = random_walk(&g, start, len, rng);
            let mut steps = walk.steps().to_vec();
            steps.extend(tree_route(&g, walk.end(), vimg[g.terminus(e)]));
            images.push(EdgePath::from_steps(&g, start, reduce_steps(&steps)).expect("composable"));
        }
        if let Ok(f) = GraphMap::new(g, images, None) {
            return f;
        }
    }
}

pub fn random_laurent(rng: &mut impl Rng, d: usize, support: usize, radius: i64) -> LaurentElement {
    let terms: Vec<(Vec<i64>, BigRational)> = (0..support)
        .map(|_| {
            let e = (0..d).map(|_| rng.gen_range(-radius..=radius)).collect();
            (e, rat(rng.gen_range(-5..=5)))
        })
        .collect();
    LaurentElement::from_terms(d, terms).expect("consistent dimension")
}

/// A random full-rank sublattice of `Z^d` with index at most `max_index`,
/// optionally translated.
pub fn random_lattice(rng: &mut impl Rng, d: usize, max_index: i64, translate: bool) -> Lattice {
    loop {
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|_| (0..d).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        let m = IntMatrix::from_rows(rows, d);
        let det = m.determinant();
        if det == BigInt::from(0) || det.magnitude() > &num_bigint::BigUint::from(max_index as u64) {
            continue;
        }
        let l = Lattice::new(m).expect("nonsingular");
        if !translate {
            return l;
        }
        let w = (0..d).map(|_| rng.gen_range(-4..=4)).collect();
        return l.with_translate(w).expect("dimension matches");
    }
}

pub fn random_character(rng: &mut impl Rng, d: usize, max_order: u64) -> Character {
    let n = rng.gen_range(1..=max_order);
    Character::new(n, (0..d).map(|_| rng.gen_range(0..n as i64)).collect())
}

/// All based closed walks of length `k` in the transition graph, as arc
/// sequences (each cyclic rotation counted separately).
pub fn based_cycles(t: &TransitionGraph, k: usize) -> Vec<Vec<usize>> {
    fn extend(t: &TransitionGraph, k: usize, walk: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let first = t.arc(walk[0]).source;
        let last = t.arc(*walk.last().expect("nonempty")).target;
        if walk.len() == k {
            if last == first {
                out.push(walk.clone());
            }
            return;
        }
        for &a in t.out_arcs(last) {
            walk.push(a);
            extend(t, k, walk, out);
            walk.pop();
        }
    }
    let mut out = Vec::new();
    for a in 0..t.arcs().len() {
        let mut walk = vec![a];
        extend(t, k, &mut walk, &mut out);
    }
    out
}

/// A random composable arc sequence of length `1..=max_len`.
pub fn random_arc_path(t: &TransitionGraph, max_len: usize, rng: &mut impl Rng) -> Vec<usize> {
    let len = rng.gen_range(1..=max_len);
    let mut path = vec![rng.gen_range(0..t.arcs().len())];
    while path.len() < len {
        let node = t.arc(*path.last().expect("nonempty")).target;
        match t.out_arcs(node).choose(rng) {
            Some(&a) => path.push(a),
            None => break,
        }
    }
    path
}
