//! Property checks used both by the per-module integration tests and by the
//! acceptance gate. Each check panics with a descriptive message on failure
//! and returns how many instances it examined.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use ttcover::covers::{cover_chain_action_check, lifted_cover, FiniteQuotient, LiftedMap};
use ttcover::cyclotomic::CyclotomicField;
use ttcover::graph::{EdgePath, GraphMap, Step};
use ttcover::group_ring::{character_grid, Lattice, LaurentElement};
use ttcover::homology::HomologyData;
use ttcover::intmat::IntMatrix;
use ttcover::magnus::{equivariant_charpoly, magnus_matrix, MagnusMatrix, DEFAULT_CHARPOLY_BOUND};
use ttcover::poly::{eigenvalues_complex, spectral_radius};
use ttcover::ring::{berkowitz, mat_pow, trace, Ring};
use ttcover::transition::{
    dilatation, extremal_subgraph, is_stable, positive_power, shadow, subgraph_matrix, transition_graph,
    vertex_subgraph, SelectionKind, SubgraphSelection, TransitionGraph, DEFAULT_CYCLE_CAP,
};

use super::*;

pub struct Analysed {
    pub name: &'static str,
    pub map: GraphMap,
    pub homology: HomologyData,
    pub transition: TransitionGraph,
    pub magnus: MagnusMatrix,
}

pub fn analysed_corpus() -> Vec<Analysed> {
    corpus_maps()
        .into_iter()
        .map(|(name, map)| {
            let homology = HomologyData::compute(&map).unwrap();
            let transition = transition_graph(&map, &homology);
            let magnus = magnus_matrix(&transition);
            Analysed {
                name,
                map,
                homology,
                transition,
                magnus,
            }
        })
        .collect()
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn cycle_translation(t: &TransitionGraph, w: &[usize]) -> Vec<i64> {
    w.iter().fold(vec![0i64; t.dim()], |acc, &a| add(&acc, &t.arc(a).translation))
}

pub fn normalized(t: &TransitionGraph, w: &[usize]) -> Vec<BigRational> {
    let len = BigInt::from(w.len());
    cycle_translation(t, w)
        .into_iter()
        .map(|x| BigRational::new(BigInt::from(x), len.clone()))
        .collect()
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |s, (x, y)| s + x * y)
}

// ---------------------------------------------------------------------------
// Group ring

/// `(1/|N_L|) Σ_ξ conj(ξ(w)) t(ξ)` summed directly over the annihilator.
pub fn annihilator_average(t: &LaurentElement, lattice: &Lattice) -> BigRational {
    let (order, chars) = lattice.annihilator();
    let field = CyclotomicField::new(order);
    let w = lattice.translate_or_zero();
    let mut acc = field.zero();
    for xi in &chars {
        let shift = field.zeta_pow(-xi.pairing(&w) * (order / xi.order) as i64);
        acc = field.add(&acc, &field.mul(&shift, &t.specialize(xi, &field).unwrap()));
    }
    field.as_rational(&acc).expect("average is rational") / rat(chars.len() as i64)
}

pub fn special_lattice(instances: usize, seed: u64) -> usize {
    let mut r = rng(seed);
    for i in 0..instances {
        let d = r.gen_range(1..=3);
        let support = r.gen_range(1..=8);
        let t = random_laurent(&mut r, d, support, 4);
        let translated = r.gen_bool(0.5);
        let lattice = random_lattice(&mut r, d, 27, translated);
        let direct = t.lattice_restriction(&lattice).unwrap();
        assert_eq!(annihilator_average(&t, &lattice), direct, "instance {i}");
        assert_eq!(t.average_over_annihilator(&lattice).unwrap(), direct, "instance {i}");
        assert_eq!(lattice.annihilator().1.len() as u64, lattice.index());
    }
    instances
}

pub fn parseval(instances: usize, seed: u64) -> usize {
    let mut r = rng(seed);
    for i in 0..instances {
        let d = r.gen_range(1..=2);
        let b = r.gen_range(1..=2);
        let support = r.gen_range(1..=6);
        let t = random_laurent(&mut r, d, support, b);
        let q = 2 * t.support_radius().max(0) as u64 + 1;
        let field = CyclotomicField::new(q);
        let grid = character_grid(d, q);
        assert_eq!(grid.len() as u64, q.pow(d as u32));
        let mut acc = field.zero();
        for xi in &grid {
            acc = field.add(&acc, &field.norm_sq(&t.specialize(xi, &field).unwrap()));
        }
        let mean = field.as_rational(&acc).unwrap() / rat(grid.len() as i64);
        let l2: BigRational = t.terms().values().fold(BigRational::zero(), |s, c| s + c * c);
        assert_eq!(mean, l2, "instance {i}");
        assert_eq!(t.l2_norm_squared(), l2, "instance {i}");
    }
    instances
}

// ---------------------------------------------------------------------------
// Magnus matrices

pub fn specialization_coherence(chars_per_map: usize, seed: u64) -> usize {
    let mut r = rng(seed);
    let mut n = 0;
    for x in analysed_corpus() {
        let a = &x.magnus;
        let cp = equivariant_charpoly(a, DEFAULT_CHARPOLY_BOUND).unwrap();
        let traces = a.trace_powers(6);
        for _ in 0..chars_per_map {
            let xi = random_character(&mut r, a.dim(), 12);
            let (field, s) = a.specialize(&xi).unwrap();
            let via: Vec<_> = cp.iter().map(|c| c.specialize(&xi, &field).unwrap()).collect();
            assert_eq!(berkowitz(&field, &s), via, "{} at {xi}", x.name);
            for (k, tk) in traces.iter().enumerate() {
                let direct = trace(&field, &mat_pow(&field, &s, k + 1));
                assert_eq!(tk.specialize(&xi, &field).unwrap(), direct, "{}, k={}", x.name, k + 1);
            }
            n += 1;
        }
    }
    n
}

/// `t_k(jZ^d) = (1/|N_L|) Σ_{ξ ∈ N_L} Σ_i ρ_i(ξ)^k` for `k = 1..=2m`, to 1e-6
/// relative.
pub fn trace_recurrence() -> usize {
    let mut n = 0;
    for x in analysed_corpus() {
        let a = &x.magnus;
        let d = a.dim();
        let traces = a.trace_powers(2 * a.size());
        for j in 1..=4 {
            let lattice = Lattice::scaled(d, j).unwrap();
            let (_, chars) = lattice.annihilator();
            let roots: Vec<Complex64> = chars
                .iter()
                .flat_map(|xi| eigenvalues_complex(&a.specialize_numeric(&xi.values()).unwrap()))
                .collect();
            let c = 1.0 / chars.len() as f64;
            for (k, tk) in traces.iter().enumerate() {
                let exact = tk.lattice_restriction(&lattice).unwrap().to_f64().unwrap();
                let sum: Complex64 = roots.iter().map(|z| z.powi(k as i32 + 1)).sum::<Complex64>() * c;
                let tol = 1e-6 * (1.0 + exact.abs());
                assert!(
                    (sum.re - exact).abs() < tol && sum.im.abs() < tol,
                    "{}, j={j}, k={}: {sum} vs {exact}",
                    x.name,
                    k + 1
                );
                n += 1;
            }
        }
    }
    n
}

/// On every corpus map whose shadow vertices are all stable, a common
/// positive power exists below 64.
pub fn positive_power_on_corpus() -> usize {
    let mut n = 0;
    for x in analysed_corpus() {
        let s = shadow(&x.transition, DEFAULT_CYCLE_CAP).unwrap();
        let mats: Vec<MagnusMatrix> = s
            .vertices
            .iter()
            .map(|u| subgraph_matrix(&x.transition, &vertex_subgraph(&s, u).unwrap()))
            .collect();
        if !mats.iter().all(is_stable) {
            continue;
        }
        let k = positive_power(&mats, &s.vertices, 64).unwrap();
        assert!(matches!(k, Some(k) if k <= 64), "{}: {k:?}", x.name);
        n += 1;
    }
    assert!(n > 0);
    n
}

// ---------------------------------------------------------------------------
// Transition graphs

pub fn check_groupoid(f: &GraphMap, t: &TransitionGraph, arcs: &[usize]) {
    let h = t.homology();
    let g = f.graph();
    let data = t.path_data(arcs).unwrap();
    let k = arcs.len();
    let sum = cycle_translation(t, arcs);
    let sign: i64 = arcs.iter().map(|&a| t.arc(a).sign).product();
    assert_eq!(data.translation, sum);
    assert_eq!(data.sign, sign);
    let first = t.arc(arcs[0]).source;
    let shift = h.translate(&f.apply_power(h.tree.tree_path(g.origin(first)), k));
    assert_eq!(data.translation, add(&shift, &h.translate(&data.prefix)));
    // the prefix runs from φ^k(o(e)) to the origin of the last target; when
    // every traversal is forward it is literally the part of φ^k(e) before it
    let last = t.arc(*arcs.last().unwrap());
    let image = f.apply_power(&EdgePath::single(g, Step::forward(first)), k);
    assert_eq!(data.prefix.start(), image.start());
    assert_eq!(data.prefix.end(), g.origin(last.target));
    if arcs.iter().all(|&a| t.arc(a).sign > 0) {
        let n = data.prefix.len();
        assert_eq!(&image.steps()[..n], data.prefix.steps());
        assert_eq!(image.steps()[n], Step::forward(last.target));
    }
}

pub fn groupoid_on_corpus(paths: usize, seed: u64) -> usize {
    let mut r = rng(seed);
    let mut n = 0;
    for x in analysed_corpus() {
        if x.transition.arcs().is_empty() {
            continue;
        }
        for _ in 0..paths {
            let arcs = random_arc_path(&x.transition, 5, &mut r);
            check_groupoid(&x.map, &x.transition, &arcs);
            n += 1;
        }
    }
    n
}

/// For random integer functionals `ω`, the closed walks of length at most 6
/// inside `T_ω` all attain the maximum `M_ω` of `ω` on the shadow.
pub fn extremal_on_corpus(functionals: usize, seed: u64) -> usize {
    let mut r = rng(seed);
    let mut n = 0;
    for x in analysed_corpus() {
        let t = &x.transition;
        let s = shadow(t, DEFAULT_CYCLE_CAP).unwrap();
        let walks: Vec<Vec<usize>> = (1..=6).flat_map(|k| based_cycles(t, k)).collect();
        for _ in 0..functionals {
            let omega: Vec<BigRational> = (0..t.dim()).map(|_| rat(r.gen_range(-5..=5))).collect();
            let sel = extremal_subgraph(&s, &omega).unwrap();
            let best = s.vertices.iter().map(|v| dot(&omega, v)).max().unwrap();
            let SelectionKind::Extremal { maximum, .. } = &sel.kind else {
                panic!("extremal selection expected");
            };
            assert_eq!(*maximum, best, "{}", x.name);
            for w in &walks {
                if w.iter().all(|a| sel.arcs.contains(a)) {
                    assert_eq!(dot(&omega, &normalized(t, w)), best, "{}: {w:?}", x.name);
                }
            }
            n += 1;
        }
    }
    n
}

// ---------------------------------------------------------------------------
// Covers

/// Lower-triangular row Hermite forms of the sublattices of `Z^d` of index `n`.
pub fn hermite_forms(d: usize, n: i64) -> Vec<IntMatrix> {
    fn diagonals(d: usize, n: i64) -> Vec<Vec<i64>> {
        if d == 0 {
            return if n == 1 { vec![Vec::new()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for a in (1..=n).filter(|a| n % a == 0) {
            for mut rest in diagonals(d - 1, n / a) {
                rest.insert(0, a);
                out.push(rest);
            }
        }
        out
    }
    let mut out = Vec::new();
    for diag in diagonals(d, n) {
        let free: Vec<(usize, usize)> = (0..d).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
        let count: i64 = free.iter().map(|&(_, j)| diag[j]).product();
        for mut code in 0..count {
            let mut m = IntMatrix::zeros(d, d);
            for i in 0..d {
                m[(i, i)] = diag[i];
            }
            for &(i, j) in &free {
                m[(i, j)] = code % diag[j];
                code /= diag[j];
            }
            out.push(m);
        }
    }
    out
}

/// Every sublattice of index at most `max_degree` of every corpus `H_f`, with
/// every character of its annihilator.
pub fn chain_action_on_small_covers(max_degree: i64) -> usize {
    let mut checked = 0usize;
    for x in analysed_corpus().into_iter().filter(|x| x.homology.dim() > 0) {
        for n in 1..=max_degree {
            for basis in hermite_forms(x.homology.dim(), n) {
                let lattice = Lattice::new(basis.clone()).unwrap();
                let q = FiniteQuotient::from_basis(basis, "hnf").unwrap();
                let lm = lifted_cover(&x.map, &x.homology, q).unwrap();
                assert_eq!(lm.cover.degree() as i64, n);
                for xi in lattice.annihilator().1 {
                    assert!(
                        cover_chain_action_check(&lm, &x.magnus, &xi).unwrap(),
                        "{}, index {n}, {xi}",
                        x.name
                    );
                    checked += 1;
                }
            }
        }
    }
    checked
}

pub struct ComputedCover {
    pub name: &'static str,
    pub dilatation: f64,
    pub lifted: LiftedMap,
}

/// `H_f / k H_f` for every corpus map, `k <= 5`, degree at most 27.
pub fn small_covers() -> Vec<ComputedCover> {
    let mut out = Vec::new();
    for x in analysed_corpus() {
        let d = x.homology.dim();
        let lambda = dilatation(&x.transition);
        for k in 1..=5i64 {
            if k > 1 && (d == 0 || (k as usize).pow(d as u32) > 27) {
                break;
            }
            let lm = lifted_cover(&x.map, &x.homology, FiniteQuotient::modulo(d, k).unwrap()).unwrap();
            out.push(ComputedCover {
                name: x.name,
                dilatation: lambda,
                lifted: lm,
            });
        }
    }
    out
}

pub fn spectral_bounds(covers: &[ComputedCover]) -> usize {
    for c in covers {
        let rho = spectral_radius(&c.lifted.h1_action().unwrap());
        assert!(
            rho >= 1.0 - 1e-9 && rho <= c.dilatation + 1e-9,
            "{}: H1 radius {rho}, dilatation {}",
            c.name,
            c.dilatation
        );
        let chain = spectral_radius(&c.lifted.chain_action());
        if chain > 1.0 + 1e-6 {
            assert!(rho > 1.0 + 1e-6, "{}: chain radius {chain}, H1 radius {rho}", c.name);
        }
    }
    covers.len()
}

fn rational_inverse(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero()).expect("invertible");
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &piv;
        }
        let row = a[c].clone();
        for (i, r) in a.iter_mut().enumerate() {
            if i != c && !r[c].is_zero() {
                let f = r[c].clone();
                for (x, y) in r.iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// `L` with `P σ_* = L P`, solved over `Q` and checked to be integral.
fn induced_matrix(p: &IntMatrix, ps: &IntMatrix) -> IntMatrix {
    let big = |m: &IntMatrix| -> Vec<Vec<BigRational>> {
        m.to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect()
    };
    let mul = |a: &[Vec<BigRational>], b: &[Vec<BigRational>]| -> Vec<Vec<BigRational>> {
        a.iter()
            .map(|r| {
                (0..b[0].len())
                    .map(|j| r.iter().zip(b).fold(BigRational::zero(), |s, (x, row)| s + x * &row[j]))
                    .collect()
            })
            .collect()
    };
    let (pb, pt) = (big(p), big(&p.transpose()));
    let l = mul(&mul(&big(ps), &pt), &rational_inverse(&mul(&pb, &pt)));
    let rows: Vec<Vec<i64>> = l
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    assert!(x.is_integer(), "induced action is integral");
                    x.to_integer().to_i64().unwrap()
                })
                .collect()
        })
        .collect();
    let l = IntMatrix::from_rows(rows, p.rows());
    assert_eq!(l.mul(p), *ps);
    l
}

/// A deck transformation acting on the transition graph of the lifted map:
/// arcs are permuted, and translations of length-`k` cycles move by
/// `t ↦ L t + k τ`.
pub struct DeckAction {
    pub arc_perm: Vec<usize>,
    pub linear: IntMatrix,
    pub shift: Vec<i64>,
}

impl DeckAction {
    pub fn apply(&self, h: &[i64], k: i64) -> Vec<i64> {
        if h.is_empty() {
            return Vec::new();
        }
        self.linear
            .mul_vec(h)
            .iter()
            .zip(&self.shift)
            .map(|(a, b)| a + k * b)
            .collect()
    }
}

pub fn deck_actions(lm: &LiftedMap, t: &TransitionGraph) -> Vec<DeckAction> {
    let c = &lm.cover;
    let h = t.homology();
    let g = c.graph();
    let p = h.quotient.projection();
    let by_position: HashMap<(usize, usize), usize> =
        t.arcs().iter().enumerate().map(|(i, a)| ((a.source, a.position), i)).collect();
    c.deck_group()
        .iter()
        .map(|s| {
            let ep = c.deck_edge_permutation(s);
            let arc_perm = t.arcs().iter().map(|a| by_position[&(ep[a.source], a.position)]).collect();
            if h.dim() == 0 {
                return DeckAction {
                    arc_perm,
                    linear: IntMatrix::zeros(0, 0),
                    shift: Vec::new(),
                };
            }
            let cols: Vec<Vec<i64>> = h
                .tree
                .basis()
                .iter()
                .map(|&e| h.tree.path_class(&c.deck_path(s, &h.tree.edge_loop(g, e))))
                .collect();
            let sigma = IntMatrix::from_columns(&cols, h.rank());
            let linear = induced_matrix(p, &p.mul(&sigma));
            let y = h.tree.tree_path(c.deck_vertex_permutation(s)[g.base()]);
            let shift = h
                .translate(&lm.map.apply(y))
                .iter()
                .zip(h.translate(y))
                .map(|(a, b)| a - b)
                .collect();
            DeckAction { arc_perm, linear, shift }
        })
        .collect()
}

/// `trace(A[π]^k)` is fixed by the deck action, cycle translations follow the
/// affine rule, and every coefficient is divisible by the size of the
/// stabilizer of its monomial. Returns the number of monomials with a
/// nontrivial stabilizer.
pub fn deck_invariance(max_degree: usize) -> usize {
    let mut with_stabilizer = 0;
    for c in small_covers() {
        let lm = &c.lifted;
        if lm.cover.degree() > max_degree {
            continue;
        }
        let hc = HomologyData::compute(&lm.map).unwrap();
        let t = transition_graph(&lm.map, &hc);
        let a = magnus_matrix(&t);
        let actions = deck_actions(lm, &t);
        for k in 1..=3i64 {
            if k <= 2 {
                for w in based_cycles(&t, k as usize) {
                    for d in &actions {
                        let image: Vec<usize> = w.iter().map(|&x| d.arc_perm[x]).collect();
                        assert_eq!(
                            cycle_translation(&t, &image),
                            d.apply(&cycle_translation(&t, &w), k),
                            "{}",
                            c.name
                        );
                    }
                }
            }
            let tr = a.trace_power(k as usize);
            for (h, coeff) in tr.terms() {
                let mut stab = 0;
                for d in &actions {
                    let image = d.apply(h, k);
                    assert_eq!(tr.coefficient(&image), *coeff, "{}: k={k}", c.name);
                    if image == *h {
                        stab += 1;
                    }
                }
                assert!((coeff / rat(stab)).is_integer(), "{}: {coeff} / {stab}", c.name);
                if stab > 1 {
                    with_stabilizer += 1;
                }
            }
        }
    }
    assert!(with_stabilizer > 0);
    with_stabilizer
}

/// For each integral nonzero shadow vertex `u` and `p ∈ {2, 3, 5}`, the
/// degree-`p` cyclic cover given by a character with `ψ(u) ≠ 0`: every
/// coefficient of `trace(A_u[π]^k)`, `k <= 6`, is divisible by `p`.
pub fn cyclic_divisibility() -> usize {
    let mut exercised = 0;
    for x in analysed_corpus().into_iter().filter(|x| x.homology.dim() > 0) {
        let t = &x.transition;
        let s = shadow(t, DEFAULT_CYCLE_CAP).unwrap();
        let base_arc: HashMap<(usize, usize), usize> =
            t.arcs().iter().enumerate().map(|(i, a)| ((a.source, a.position), i)).collect();
        for u in &s.vertices {
            if !u.iter().all(|v| v.is_integer()) || u.iter().all(|v| v.is_zero()) {
                continue;
            }
            let ui: Vec<i64> = u.iter().map(|v| v.to_integer().to_i64().unwrap()).collect();
            let sel = vertex_subgraph(&s, u).unwrap();
            for p in [2u64, 3, 5] {
                let psi = character_grid(x.homology.dim(), p)
                    .into_iter()
                    .find(|xi| xi.pairing(&ui) != 0)
                    .expect("u is nonzero");
                let lm = lifted_cover(&x.map, &x.homology, FiniteQuotient::from_character(&psi).unwrap()).unwrap();
                assert_eq!(lm.cover.degree() as u64, p);
                let hc = HomologyData::compute(&lm.map).unwrap();
                let tc = transition_graph(&lm.map, &hc);
                let lifted = SubgraphSelection {
                    arcs: tc
                        .arcs()
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| sel.arcs.contains(&base_arc[&(lm.cover.project_edge(a.source), a.position)]))
                        .map(|(i, _)| i)
                        .collect(),
                    kind: SelectionKind::Vertex(u.clone()),
                };
                let au = subgraph_matrix(&tc, &lifted);
                for k in 1..=6 {
                    for c in au.trace_power(k).terms().values() {
                        assert!(
                            (c / rat(p as i64)).is_integer(),
                            "{}: u = {ui:?}, p = {p}, k = {k}, coefficient {c}",
                            x.name
                        );
                    }
                }
                exercised += 1;
            }
        }
    }
    assert!(exercised >= 3, "{exercised}");
    exercised
}
