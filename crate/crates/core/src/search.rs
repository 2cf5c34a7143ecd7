//! Detection criteria (anchoring, L²-trace, character scan), conversion of a
//! finding into a cover certificate, the brute-force oracle, the tower
//! search, and certificate verification.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::covers::{lifted_cover, FiniteQuotient};
use crate::cyclotomic::CyclotomicField;
use crate::error::{Error, Result};
use crate::graph::{parse_graph_map, GraphMap};
use crate::group_ring::{character_grid, Character, LaurentElement, Lattice};
use crate::homology::HomologyData;
use crate::hull::{affine_dimension, in_convex_hull, Point};
use crate::intmat::IntMatrix;
use crate::magnus::{magnus_matrix, MagnusMatrix};
use crate::poly::{charpoly, unit_circle_test, IntPoly, UnitCircleVerdict};
use crate::ring::Ring;
use crate::transition::{transition_graph, ShadowPolytope};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Largest power `k` in `trace(A^k)`.
    pub max_power: usize,
    /// Largest order of the characters scanned.
    pub max_character_order: u64,
    /// Largest index of the lattices `jZ^d` and of polytope lattices.
    pub max_lattice_index: u64,
    pub max_tower_depth: usize,
    /// Bound on the total degree of any cover built.
    pub max_cover_degree: usize,
    /// Tower levels use the quotients `H_f/kH_f` for `2 <= k <=` this.
    pub max_tower_modulus: i64,
    /// Character grids larger than this are skipped.
    pub max_grid_points: usize,
    /// The Magnus criteria are only run on graphs with at most this many
    /// edges; larger tower levels get the direct test only.
    pub max_magnus_size: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_power: 8,
            max_character_order: 12,
            max_lattice_index: 64,
            max_tower_depth: 3,
            max_cover_degree: 2000,
            max_tower_modulus: 3,
            max_grid_points: 20_000,
            max_magnus_size: 24,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_power == 0
            || self.max_character_order == 0
            || self.max_lattice_index == 0
            || self.max_cover_degree == 0
            || self.max_grid_points == 0
        {
            return Err(Error::Invalid("search bounds must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    Direct,
    Anchored {
        power: usize,
        lattice: Vec<Vec<i64>>,
        translate: Vec<i64>,
        value: String,
    },
    L2 {
        power: usize,
        norm_squared: String,
    },
    Character {
        character: Character,
        power: usize,
        magnitude: f64,
    },
}

impl Finding {
    pub fn method(&self) -> &'static str {
        match self {
            Finding::Direct => "direct",
            Finding::Anchored { .. } => "anchoring",
            Finding::L2 { .. } => "l2trace",
            Finding::Character { .. } => "character",
        }
    }
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `|t(ξ)|² − m²` compared with zero, exactly.
fn exceeds(t: &LaurentElement, xi: &Character, field: &CyclotomicField, m: usize) -> Result<bool> {
    // Floating-point values far from the threshold decide immediately; the
    // rounding error is many orders of magnitude below the margin.
    let z = t.specialize_numeric(&xi.values())?;
    let l1: f64 = t.terms().values().map(|c| c.to_f64().unwrap_or(f64::INFINITY).abs()).sum();
    let margin = 1e-9 * (1.0 + l1 * l1);
    let gap = z.norm_sqr() - (m * m) as f64;
    if gap > margin {
        return Ok(true);
    }
    if gap < -margin {
        return Ok(false);
    }
    let v = t.specialize(xi, field)?;
    let gap = field.sub(&field.norm_sq(&v), &field.from_rational(rat((m * m) as i64)));
    Ok(field.real_sign(&gap) == Ordering::Greater)
}

/// Off-circle test on `f_*` itself.
pub fn check_direct(f: &GraphMap) -> Result<Option<Finding>> {
    let h = HomologyData::compute(f)?;
    let v = unit_circle_test(&charpoly(&h.action))?;
    Ok(v.is_off().then_some(Finding::Direct))
}

/// Scans `k <= K`, lattices `jZ^d` of index at most the bound and their
/// translates by support points of `trace(A^k)`, for `t_k(L + w) > m`.
pub fn check_anchored(a: &MagnusMatrix, cfg: &SearchConfig) -> Result<Option<Finding>> {
    let m = a.size();
    let d = a.dim();
    let bound = rat(m as i64);
    let traces = a.trace_powers(cfg.max_power);
    let mut scales = Vec::new();
    let mut j: i64 = 1;
    while (j as u64).checked_pow(d as u32).is_some_and(|x| x <= cfg.max_lattice_index) {
        scales.push(j);
        if d == 0 {
            break;
        }
        j += 1;
    }
    for (k, t) in traces.iter().enumerate() {
        for &j in &scales {
            let base = Lattice::scaled(d, j)?;
            let mut seen: Vec<Vec<i64>> = Vec::new();
            let candidates = std::iter::once(vec![0; d]).chain(t.terms().keys().cloned());
            for w in candidates {
                let coset: Vec<i64> = w.iter().map(|x| x.rem_euclid(j)).collect();
                if seen.contains(&coset) {
                    continue;
                }
                seen.push(coset.clone());
                let lattice = base.clone().with_translate(coset.clone())?;
                let value = t.lattice_restriction(&lattice)?;
                if value > bound {
                    return Ok(Some(Finding::Anchored {
                        power: k + 1,
                        lattice: base.basis().to_rows(),
                        translate: coset,
                        value: value.to_string(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// First `k <= K` with `‖trace(A^k)‖₂ > m`, compared via squares.
pub fn check_l2(a: &MagnusMatrix, cfg: &SearchConfig) -> Result<Option<Finding>> {
    let m = a.size() as i64;
    for (k, t) in a.trace_powers(cfg.max_power).iter().enumerate() {
        let n2 = t.l2_norm_squared();
        if n2 > rat(m * m) {
            return Ok(Some(Finding::L2 {
                power: k + 1,
                norm_squared: n2.to_string(),
            }));
        }
    }
    Ok(None)
}

/// Scans `k <= K`, orders `q <= Q` and the characters of exact order `q`
/// for `|trace(A^k)(ξ)| > m`.
pub fn character_scan(a: &MagnusMatrix, cfg: &SearchConfig) -> Result<Option<Finding>> {
    let m = a.size();
    let d = a.dim();
    let traces = a.trace_powers(cfg.max_power);
    let fields: Vec<CyclotomicField> = (1..=cfg.max_character_order).map(CyclotomicField::new).collect();
    for (k, t) in traces.iter().enumerate() {
        if t.is_zero() {
            continue;
        }
        for q in 1..=cfg.max_character_order {
            if grid_size(d, q).is_none_or(|n| n > cfg.max_grid_points) {
                continue;
            }
            let field = &fields[q as usize - 1];
            for xi in character_grid(d, q) {
                if xi.exact_order() != q {
                    continue;
                }
                if exceeds(t, &xi, field, m)? {
                    let magnitude = field.to_complex(&t.specialize(&xi, field)?).norm();
                    return Ok(Some(Finding::Character {
                        character: xi,
                        power: k + 1,
                        magnitude,
                    }));
                }
            }
        }
    }
    Ok(None)
}

fn grid_size(d: usize, q: u64) -> Option<usize> {
    (q as usize).checked_pow(d as u32)
}

/// A character with `|trace(A^k)(ξ)| > m`, located from an anchoring or L²
/// finding by averaging over the annihilator or over a Plancherel grid.
pub fn locate_character(a: &MagnusMatrix, finding: &Finding, cfg: &SearchConfig) -> Result<Character> {
    let m = a.size();
    let d = a.dim();
    let mut oversized = None;
    let (power, candidates): (usize, Vec<Character>) = match finding {
        Finding::Character { character, .. } => return Ok(character.clone()),
        Finding::Direct => return Ok(Character::trivial(d)),
        Finding::Anchored { power, lattice, .. } => {
            let l = Lattice::new(IntMatrix::from_rows(lattice.clone(), d))?;
            (*power, l.annihilator().1)
        }
        Finding::L2 { power, .. } => {
            let t = a.trace_power(*power);
            let q = 2 * t.support_radius() as u64 + 1;
            if grid_size(d, q).is_none_or(|n| n > cfg.max_grid_points) {
                oversized = Some(q);
                (*power, Vec::new())
            } else {
                (*power, character_grid(d, q))
            }
        }
    };
    let t = a.trace_power(power);
    // Small orders first, so the resulting cover is as small as possible.
    for q in 1..=cfg.max_character_order {
        if grid_size(d, q).is_none_or(|n| n > cfg.max_grid_points) {
            break;
        }
        let field = CyclotomicField::new(q);
        for xi in character_grid(d, q) {
            if xi.exact_order() == q && exceeds(&t, &xi, &field, m)? {
                return Ok(xi);
            }
        }
    }
    let mut candidates: Vec<Character> = candidates.into_iter().map(|x| x.normalized()).collect();
    candidates.sort_by_key(|x| x.order);
    let mut fields: std::collections::BTreeMap<u64, CyclotomicField> = Default::default();
    for xi in candidates {
        let field = fields.entry(xi.order).or_insert_with(|| CyclotomicField::new(xi.order));
        if exceeds(&t, &xi, field, m)? {
            return Ok(xi);
        }
    }
    if let Some(q) = oversized {
        return Err(Error::ResourceCap(format!(
            "Plancherel grid of order {q} in dimension {d} exceeds the grid bound"
        )));
    }
    Err(Error::Verification(format!(
        "no character with |t_{power}(ξ)| > {m} among the averaging set"
    )))
}

// ---------------------------------------------------------------------------
// Certificates

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerLevel {
    /// Human description of the quotient of this level's `H_f`.
    pub quotient: String,
    /// Basis of the kernel lattice in the coordinates of this level's `H_f`.
    pub basis: Vec<Vec<i64>>,
    /// Number of sheets over the previous level.
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub input: String,
    pub input_digest: String,
    pub method: String,
    /// Power of the map that was lifted.
    pub power: usize,
    pub tower: Vec<TowerLevel>,
    pub degree: usize,
    /// Characteristic polynomial of the lifted `H_1` action, constant term
    /// first.
    #[serde(with = "bigint_list")]
    pub charpoly: Vec<BigInt>,
    pub verdict: String,
    #[serde(with = "bigint_list")]
    pub witness_factor: Vec<BigInt>,
    pub zero_eigenvalues: usize,
    pub modulus: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finding: Option<Finding>,
}

mod bigint_list {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Number;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let nums: Vec<Number> = v
            .iter()
            .map(|x| x.to_string().parse::<Number>().expect("integers are JSON numbers"))
            .collect();
        nums.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let nums = Vec::<Number>::deserialize(d)?;
        nums.iter()
            .map(|n| n.to_string().parse::<BigInt>().map_err(D::Error::custom))
            .collect()
    }
}

const OFF: &str = "off_unit_circle";

pub fn input_digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl CoverCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn certificate(
    input: &GraphMap,
    method: &str,
    tower: Vec<TowerLevel>,
    poly: &IntPoly,
    verdict: &UnitCircleVerdict,
    finding: Option<Finding>,
) -> CoverCertificate {
    let text = input.to_text();
    CoverCertificate {
        input_digest: input_digest(&text),
        input: text,
        method: method.into(),
        power: 1,
        degree: tower.iter().map(|l| l.degree).product(),
        tower,
        charpoly: poly.coeffs().to_vec(),
        verdict: OFF.into(),
        witness_factor: verdict.witness.as_ref().map(|w| w.coeffs().to_vec()).unwrap_or_default(),
        zero_eigenvalues: verdict.zero_eigenvalues,
        modulus: verdict.max_modulus.unwrap_or(f64::NAN),
        finding,
    }
}

/// One cover step on top of `map`, returning the lifted map and the level.
fn cover_step(map: &GraphMap, quotient: FiniteQuotient) -> Result<(GraphMap, TowerLevel)> {
    let h = HomologyData::compute(map)?;
    let desc = quotient.description().to_string();
    let basis = quotient.basis().to_rows();
    let lm = lifted_cover(map, &h, quotient)?;
    let level = TowerLevel {
        quotient: desc,
        basis,
        degree: lm.cover.degree(),
    };
    Ok((lm.map, level))
}

fn h1_verdict(map: &GraphMap) -> Result<(IntPoly, UnitCircleVerdict)> {
    let h = HomologyData::compute(map)?;
    let p = charpoly(&h.action);
    let v = unit_circle_test(&p)?;
    Ok((p, v))
}

/// Turns a finding on the last level of `tower` (whose map is `map`) into a
/// certificate, verified before it is returned.
fn convert_finding(
    input: &GraphMap,
    map: &GraphMap,
    tower: &[TowerLevel],
    finding: Finding,
    method: &str,
    cfg: &SearchConfig,
) -> Result<CoverCertificate> {
    let mut levels = tower.to_vec();
    let final_map = if finding == Finding::Direct {
        map.clone()
    } else {
        let h = HomologyData::compute(map)?;
        let a = magnus_matrix(&transition_graph(map, &h));
        let xi = locate_character(&a, &finding, cfg)?;
        if xi.exact_order() == 1 {
            map.clone()
        } else {
            let (next, level) = cover_step(map, FiniteQuotient::from_character(&xi)?)?;
            levels.push(level);
            next
        }
    };
    let (p, v) = h1_verdict(&final_map)?;
    if !v.is_off() {
        return Err(Error::Verification(format!(
            "{} finding did not produce an off-circle cover; charpoly {p}",
            finding.method()
        )));
    }
    let cert = certificate(input, method, levels, &p, &v, Some(finding));
    verify(&cert)?;
    Ok(cert)
}

/// Certificate from a finding on `f` itself.
pub fn build_certificate(f: &GraphMap, finding: Finding, cfg: &SearchConfig) -> Result<CoverCertificate> {
    let method = finding.method();
    convert_finding(f, f, &[], finding, method, cfg)
}

/// Runs the Magnus-matrix criteria in order: L², anchoring, character scan.
pub fn magnus_criteria(a: &MagnusMatrix, cfg: &SearchConfig) -> Result<Option<Finding>> {
    if let Some(x) = check_l2(a, cfg)? {
        return Ok(Some(x));
    }
    if let Some(x) = check_anchored(a, cfg)? {
        return Ok(Some(x));
    }
    character_scan(a, cfg)
}

/// Exhaustive check of `H_f/kH_f` covers for `k = 1, 2, ...` while
/// `k^d <= max_degree`.
pub fn brute_force_oracle(f: &GraphMap, max_degree: usize) -> Result<Option<CoverCertificate>> {
    let h = HomologyData::compute(f)?;
    let d = h.dim();
    let mut k: i64 = 1;
    loop {
        let degree = (k as usize).checked_pow(d as u32);
        if degree.is_none_or(|n| n > max_degree) || (d == 0 && k > 1) {
            return Ok(None);
        }
        let (map, tower) = if k == 1 {
            (f.clone(), Vec::new())
        } else {
            let (m, level) = cover_step(f, FiniteQuotient::modulo(d, k)?)?;
            (m, vec![level])
        };
        let (p, v) = h1_verdict(&map)?;
        if v.is_off() {
            return Ok(Some(certificate(f, "brute-force", tower, &p, &v, None)));
        }
        k += 1;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TowerOutcome {
    Found(Box<CoverCertificate>),
    NoneWithinBounds { covers_examined: usize },
    CapReached(String),
}

/// Depth-first search over towers of abelian covers, trying the direct test
/// and the Magnus criteria at every level.
pub fn tower_search(f: &GraphMap, cfg: &SearchConfig) -> Result<TowerOutcome> {
    cfg.validate()?;
    let mut examined = 0;
    match tower_level(f, f, &[], 1, cfg, &mut examined) {
        Ok(Some(c)) => Ok(TowerOutcome::Found(Box::new(c))),
        Ok(None) => Ok(TowerOutcome::NoneWithinBounds {
            covers_examined: examined,
        }),
        Err(Error::ResourceCap(msg)) => Ok(TowerOutcome::CapReached(msg)),
        Err(e) => Err(e),
    }
}

fn tower_level(
    input: &GraphMap,
    map: &GraphMap,
    tower: &[TowerLevel],
    degree: usize,
    cfg: &SearchConfig,
    examined: &mut usize,
) -> Result<Option<CoverCertificate>> {
    *examined += 1;
    let method = |m: &str| if tower.is_empty() { m.to_string() } else { "tower".to_string() };
    let h = HomologyData::compute(map)?;
    let p = charpoly(&h.action);
    let v = unit_circle_test(&p)?;
    if v.is_off() {
        return Ok(Some(certificate(input, &method("direct"), tower.to_vec(), &p, &v, Some(Finding::Direct))));
    }
    if map.num_edges() <= cfg.max_magnus_size {
        let a = magnus_matrix(&transition_graph(map, &h));
        if let Some(finding) = magnus_criteria(&a, cfg)? {
            let order = match &finding {
                Finding::Character { character, .. } => character.exact_order() as usize,
                _ => 1,
            };
            if degree.saturating_mul(order) <= cfg.max_cover_degree {
                let m = method(finding.method());
                return convert_finding(input, map, tower, finding, &m, cfg).map(Some);
            }
        }
    }
    if tower.len() >= cfg.max_tower_depth || h.dim() == 0 {
        return Ok(None);
    }
    for k in 2..=cfg.max_tower_modulus {
        let Some(order) = (k as usize).checked_pow(h.dim() as u32) else {
            continue;
        };
        if degree.saturating_mul(order) > cfg.max_cover_degree {
            continue;
        }
        let (next, level) = cover_step(map, FiniteQuotient::modulo(h.dim(), k)?)?;
        let next_degree = degree * level.degree;
        let mut t = tower.to_vec();
        t.push(level);
        if let Some(c) = tower_level(input, &next, &t, next_degree, cfg, examined)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Re-derives a certificate from its own contents: input digest, tower
/// reconstruction, characteristic polynomial and exact verdict.
pub fn verify(cert: &CoverCertificate) -> Result<()> {
    let fail = |m: String| Err(Error::Verification(m));
    if input_digest(&cert.input) != cert.input_digest {
        return fail("input digest does not match the input".into());
    }
    if cert.power != 1 {
        return fail(format!("unsupported power {}", cert.power));
    }
    if cert.verdict != OFF {
        return fail(format!("unknown verdict `{}`", cert.verdict));
    }
    let mut map = parse_graph_map(&cert.input)?;
    let mut degree = 1usize;
    for (i, level) in cert.tower.iter().enumerate() {
        let h = HomologyData::compute(&map)?;
        let basis = IntMatrix::from_rows(level.basis.clone(), h.dim());
        if level.basis.iter().any(|r| r.len() != h.dim()) || level.basis.len() != h.dim() {
            return fail(format!("tower level {i} has a basis of the wrong shape"));
        }
        let q = FiniteQuotient::from_basis(basis, level.quotient.clone())?;
        let lm = lifted_cover(&map, &h, q)?;
        if lm.cover.degree() != level.degree {
            return fail(format!(
                "tower level {i} has degree {} but {} was recorded",
                lm.cover.degree(),
                level.degree
            ));
        }
        degree *= level.degree;
        map = lm.map;
    }
    if degree != cert.degree {
        return fail(format!("total degree is {degree} but {} was recorded", cert.degree));
    }
    let (p, v) = h1_verdict(&map)?;
    if p.coeffs() != cert.charpoly.as_slice() {
        return fail(format!("characteristic polynomial mismatch: recomputed {p}"));
    }
    if !v.is_off() {
        return fail("the characteristic polynomial has all roots on the unit circle".into());
    }
    let w = v.witness.as_ref().map(|w| w.coeffs().to_vec()).unwrap_or_default();
    if w != cert.witness_factor {
        return fail("witness factor mismatch".into());
    }
    if v.zero_eigenvalues != cert.zero_eigenvalues {
        return fail("zero eigenvalue count mismatch".into());
    }
    let modulus = v.max_modulus.unwrap_or(f64::NAN);
    if !((modulus - cert.modulus).abs() <= 1e-6) {
        return fail(format!("modulus {} does not match recomputed {modulus}", cert.modulus));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Lattices meeting a polytope in vertices

#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeLattice {
    /// The polytope was scaled by this factor to make its vertices integral.
    pub scale: i64,
    pub lattice: Lattice,
    /// The points of the scaled polytope in the translated lattice, all of
    /// which are vertices.
    pub points: Vec<Vec<i64>>,
}

/// A translated lattice meeting `scale · P` in at least `dim P + 1` points,
/// all vertices, found by scanning sublattices in order of index (Hermite
/// normal forms) and vertex translates, with `preferred` tried first.
pub fn lattice_from_polytope(
    p: &ShadowPolytope,
    preferred: Option<&Point>,
    cfg: &SearchConfig,
) -> Result<PolytopeLattice> {
    let d = p.dim;
    if p.vertices.is_empty() {
        return Err(Error::DegeneratePolytope("the polytope is empty".into()));
    }
    let scale = p.denominator().to_i64().ok_or_else(|| Error::ResourceCap("denominator".into()))?;
    let to_int = |v: &Point| -> Vec<i64> {
        v.iter()
            .map(|x| (x * rat(scale)).to_integer().to_i64().expect("scaled vertices are small"))
            .collect()
    };
    let verts: Vec<Vec<i64>> = p.vertices.iter().map(to_int).collect();
    let vpoints: Vec<Point> = verts.iter().map(|v| v.iter().map(|&x| rat(x)).collect()).collect();
    let dim = affine_dimension(&vpoints);
    let mut translates: Vec<Vec<i64>> = Vec::new();
    if let Some(u) = preferred {
        if p.vertex_index(u).is_none() {
            return Err(Error::NotAShadowVertex);
        }
        translates.push(to_int(u));
    }
    for v in &verts {
        if !translates.contains(v) {
            translates.push(v.clone());
        }
    }
    if dim == 0 {
        let lattice = Lattice::scaled(d, 1)?.with_translate(translates[0].clone())?;
        return Ok(PolytopeLattice {
            scale,
            lattice,
            points: vec![translates[0].clone()],
        });
    }
    let interior = integer_points(&verts, &vpoints)?;
    for index in 1..=cfg.max_lattice_index {
        for basis in hermite_forms(d, index as i64) {
            let lattice = Lattice::new(basis)?;
            for w in &translates {
                let l = lattice.clone().with_translate(w.clone())?;
                let hits: Vec<Vec<i64>> = interior.iter().filter(|x| l.contains(x)).cloned().collect();
                if hits.len() > dim && hits.iter().all(|x| verts.contains(x)) {
                    return Ok(PolytopeLattice {
                        scale,
                        lattice: l,
                        points: hits,
                    });
                }
            }
        }
    }
    Err(Error::ResourceCap(format!(
        "no lattice of index at most {} meets the polytope only in vertices",
        cfg.max_lattice_index
    )))
}

/// Integer points of the convex hull of `verts`.
fn integer_points(verts: &[Vec<i64>], vpoints: &[Point]) -> Result<Vec<Vec<i64>>> {
    let d = verts[0].len();
    let lo: Vec<i64> = (0..d).map(|i| verts.iter().map(|v| v[i]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..d).map(|i| verts.iter().map(|v| v[i]).max().unwrap()).collect();
    let volume = lo
        .iter()
        .zip(&hi)
        .try_fold(1usize, |acc, (a, b)| acc.checked_mul((b - a + 1) as usize));
    if volume.is_none_or(|v| v > 1_000_000) {
        return Err(Error::ResourceCap("polytope bounding box is too large".into()));
    }
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        let pt: Point = x.iter().map(|&c| rat(c)).collect();
        if in_convex_hull(vpoints, &pt) {
            out.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == d {
                return Ok(out);
            }
            x[i] += 1;
            if x[i] <= hi[i] {
                break;
            }
            x[i] = lo[i];
            i += 1;
        }
    }
}

/// All lower-triangular Hermite normal forms of determinant `n` in
/// dimension `d`, in lexicographic order of their diagonals.
fn hermite_forms(d: usize, n: i64) -> Vec<IntMatrix> {
    fn diagonals(d: usize, n: i64) -> Vec<Vec<i64>> {
        if d == 0 {
            return if n == 1 { vec![Vec::new()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for a in 1..=n {
            if n % a == 0 {
                for mut rest in diagonals(d - 1, n / a) {
                    rest.insert(0, a);
                    out.push(rest);
                }
            }
        }
        out
    }
    let mut out = Vec::new();
    for diag in diagonals(d, n) {
        // entries below the diagonal in column j range over 0..diag[j]
        let slots: Vec<(usize, usize)> = (0..d).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
        let mut vals = vec![0i64; slots.len()];
        loop {
            let mut m = IntMatrix::zeros(d, d);
            for i in 0..d {
                m[(i, i)] = diag[i];
            }
            for (s, &(i, j)) in slots.iter().enumerate() {
                m[(i, j)] = vals[s];
            }
            out.push(m);
            let mut s = 0;
            loop {
                if s == slots.len() {
                    break;
                }
                vals[s] += 1;
                if vals[s] < diag[slots[s].1] {
                    break;
                }
                vals[s] = 0;
                s += 1;
            }
            if s == slots.len() {
                break;
            }
        }
    }
    out
}
