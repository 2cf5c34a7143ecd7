//! Serializable summaries of the analyses, shared by the command-line
//! front end and its tests.

use std::fmt::Write as _;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphMap;
use crate::homology::HomologyData;
use crate::hull::Point;
use crate::magnus::{charpoly_text, equivariant_charpoly, magnus_matrix, MagnusMatrix, DEFAULT_CHARPOLY_BOUND};
use crate::search::{self, input_digest, CoverCertificate, Finding, SearchConfig};
use crate::transition::{
    dilatation, dimension_diagnostic, is_stable, positive_power, shadow, subgraph_matrix, transition_graph,
    vertex_subgraph, DimensionReport, TransitionGraph, DEFAULT_CYCLE_CAP,
};

/// Immersion diagnostics are run up to this power.
pub const IMMERSION_POWER: usize = 8;
/// Bound for `positive_power`.
pub const POSITIVE_POWER_BOUND: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub rank: usize,
    pub dim: usize,
    pub action: Vec<Vec<i64>>,
    pub projection: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcReport {
    pub source: String,
    pub target: String,
    pub decoration: usize,
    pub sign: i64,
    pub prefix: String,
    pub translation: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagnusReport {
    pub size: usize,
    pub dim: usize,
    pub matrix: Vec<Vec<String>>,
    pub arcs: Vec<ArcReport>,
    /// `trace(A^k)` for `k = 1..=K`.
    pub trace_powers: Vec<String>,
    /// Absent when the matrix exceeds the size bound.
    pub charpoly: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShadowReport {
    pub dim: usize,
    pub affine_dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub simple_cycles: usize,
    pub integral: bool,
    pub dimension: DimensionReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexStability {
    pub vertex: Vec<String>,
    pub stable: bool,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub vertices: Vec<VertexStability>,
    pub positive_power: Option<usize>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub direct: Option<Finding>,
    pub l2: Option<Finding>,
    pub anchored: Option<Finding>,
    pub character: Option<Finding>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input_digest: String,
    pub vertices: usize,
    pub edges: usize,
    pub immersion_backtracks: usize,
    pub homology: HomologyReport,
    pub magnus: MagnusReport,
    pub shadow: ShadowReport,
    pub stability: StabilityReport,
    pub dilatation: f64,
    pub criteria: CriteriaReport,
    pub certificate: Option<CoverCertificate>,
}

fn fmt_point(p: &Point) -> Vec<String> {
    p.iter().map(fmt_rational).collect()
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_tuple(v: &[String]) -> String {
    format!("({})", v.join(", "))
}

pub fn homology_report(h: &HomologyData) -> HomologyReport {
    HomologyReport {
        rank: h.rank(),
        dim: h.dim(),
        action: h.action.to_rows(),
        projection: h.quotient.projection().to_rows(),
    }
}

pub fn magnus_report(t: &TransitionGraph, a: &MagnusMatrix, max_power: usize) -> Result<MagnusReport> {
    let g = t.map().graph();
    let arcs = t
        .arcs()
        .iter()
        .map(|arc| ArcReport {
            source: g.edge_name(arc.source).to_string(),
            target: g.edge_name(arc.target).to_string(),
            decoration: arc.decoration,
            sign: arc.sign,
            prefix: arc.prefix.to_text(g),
            translation: arc.translation.clone(),
        })
        .collect();
    let charpoly = match equivariant_charpoly(a, DEFAULT_CHARPOLY_BOUND) {
        Ok(c) => Some(charpoly_text(&c)),
        Err(Error::MatrixTooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(MagnusReport {
        size: a.size(),
        dim: a.dim(),
        matrix: a.to_text_rows(),
        arcs,
        trace_powers: a.trace_powers(max_power).iter().map(|x| x.to_string()).collect(),
        charpoly,
    })
}

pub fn shadow_and_stability(t: &TransitionGraph) -> Result<(ShadowReport, StabilityReport, f64)> {
    let s = shadow(t, DEFAULT_CYCLE_CAP)?;
    let lambda = dilatation(t);
    let dimension = dimension_diagnostic(t.map(), &s, t.dim(), lambda);
    let mats: Vec<MagnusMatrix> = s
        .vertices
        .iter()
        .map(|u| vertex_subgraph(&s, u).map(|sel| subgraph_matrix(t, &sel)))
        .collect::<Result<_>>()?;
    let vertices: Vec<VertexStability> = s
        .vertices
        .iter()
        .zip(&mats)
        .map(|(u, a)| VertexStability {
            vertex: fmt_point(u),
            stable: is_stable(a),
            matrix: a.to_text_rows(),
        })
        .collect();
    let (positive, note) = match positive_power(&mats, &s.vertices, POSITIVE_POWER_BOUND) {
        Ok(Some(k)) => (Some(k), format!("all vertex traces are positive monomials at power {k}")),
        Ok(None) => (None, format!("no common positive power up to {POSITIVE_POWER_BOUND}")),
        Err(Error::UnstableVertex(i)) => (None, format!("vertex {i} is unstable")),
        Err(e) => return Err(e),
    };
    let shadow = ShadowReport {
        dim: s.dim,
        affine_dim: s.affine_dim,
        vertices: s.vertices.iter().map(fmt_point).collect(),
        simple_cycles: s.cycles.len(),
        integral: s.is_integral(),
        dimension,
    };
    let stability = StabilityReport {
        vertices,
        positive_power: positive,
        note,
    };
    Ok((shadow, stability, lambda))
}

pub fn criteria_report(f: &GraphMap, a: &MagnusMatrix, cfg: &SearchConfig) -> Result<CriteriaReport> {
    Ok(CriteriaReport {
        direct: search::check_direct(f)?,
        l2: search::check_l2(a, cfg)?,
        anchored: search::check_anchored(a, cfg)?,
        character: search::character_scan(a, cfg)?,
    })
}

/// Full analysis; the certificate is attached when `certify` is set and one
/// of the criteria fires on the map itself.
pub fn analyze(f: &GraphMap, cfg: &SearchConfig, certify: bool) -> Result<AnalysisReport> {
    let h = HomologyData::compute(f)?;
    let t = transition_graph(f, &h);
    let a = magnus_matrix(&t);
    let (shadow, stability, dilatation) = shadow_and_stability(&t)?;
    let criteria = criteria_report(f, &a, cfg)?;
    let certificate = if certify {
        let first = [&criteria.direct, &criteria.l2, &criteria.anchored, &criteria.character]
            .into_iter()
            .flatten()
            .next()
            .cloned();
        first.map(|x| search::build_certificate(f, x, cfg)).transpose()?
    } else {
        None
    };
    Ok(AnalysisReport {
        input_digest: input_digest(&f.to_text()),
        vertices: f.graph().num_vertices(),
        edges: f.graph().num_edges(),
        immersion_backtracks: f.check_immersion(IMMERSION_POWER).backtracks.len(),
        homology: homology_report(&h),
        magnus: magnus_report(&t, &a, cfg.max_power)?,
        shadow,
        stability,
        dilatation,
        criteria,
        certificate,
    })
}

fn matrix_text(rows: &[Vec<String>]) -> String {
    rows.iter()
        .map(|r| format!("[{}]", r.join(", ")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn finding_text(f: &Option<Finding>) -> String {
    match f {
        None => "none".into(),
        Some(Finding::Direct) => "f_* has an eigenvalue off the unit circle".into(),
        Some(Finding::L2 { power, norm_squared }) => {
            format!("k = {power}, squared norm {norm_squared}")
        }
        Some(Finding::Anchored {
            power,
            lattice,
            translate,
            value,
        }) => format!("k = {power}, lattice {lattice:?} + {translate:?}, value {value}"),
        Some(Finding::Character {
            character,
            power,
            magnitude,
        }) => format!("k = {power}, {character}, |t| = {magnitude:.6}"),
    }
}

impl MagnusReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "Magnus matrix ({}x{}, H_f of rank {}):", self.size, self.size, self.dim);
        for row in &self.matrix {
            let _ = writeln!(s, "  [{}]", row.join(", "));
        }
        let _ = writeln!(s, "transition arcs:");
        for a in &self.arcs {
            let _ = writeln!(
                s,
                "  {} -> {} #{}  sign {:+}  t = {:?}  prefix \"{}\"",
                a.source, a.target, a.decoration, a.sign, a.translation, a.prefix
            );
        }
        for (k, t) in self.trace_powers.iter().enumerate() {
            let _ = writeln!(s, "trace(A^{}) = {t}", k + 1);
        }
        match &self.charpoly {
            Some(c) => {
                let _ = writeln!(s, "det(xI - A) = {c}");
            }
            None => {
                let _ = writeln!(s, "det(xI - A) not computed (matrix too large)");
            }
        }
        s
    }
}

impl ShadowReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let verts: Vec<String> = self.vertices.iter().map(|v| fmt_tuple(v)).collect();
        let _ = writeln!(
            s,
            "shadow: dimension {} in H_f of rank {}, {} simple cycles",
            self.affine_dim, self.dim, self.simple_cycles
        );
        let _ = writeln!(s, "vertices: {}", verts.join(" "));
        let d = &self.dimension;
        let _ = writeln!(
            s,
            "dimension check ({} mode): expected {}, found {}: {}",
            d.mode, d.expected, d.shadow_dimension, d.note
        );
        s
    }
}

impl StabilityReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let _ = writeln!(
                s,
                "vertex {}: {}  A_u = {}",
                fmt_tuple(&v.vertex),
                if v.stable { "stable" } else { "unstable" },
                matrix_text(&v.matrix)
            );
        }
        let _ = writeln!(s, "{}", self.note);
        s
    }
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "input sha256 {}", self.input_digest);
        let _ = writeln!(
            s,
            "graph: {} vertices, {} edges; immersion backtracks up to power {}: {}",
            self.vertices, self.edges, IMMERSION_POWER, self.immersion_backtracks
        );
        let h = &self.homology;
        let _ = writeln!(s, "H_1 rank {}, f_* = {:?}", h.rank, h.action);
        let _ = writeln!(s, "H_f rank {}, projection {:?}", h.dim, h.projection);
        s.push_str(&self.magnus.to_text());
        s.push_str(&self.shadow.to_text());
        s.push_str(&self.stability.to_text());
        let _ = writeln!(s, "dilatation {:.9}", self.dilatation);
        let c = &self.criteria;
        let _ = writeln!(s, "direct: {}", finding_text(&c.direct));
        let _ = writeln!(s, "l2 trace: {}", finding_text(&c.l2));
        let _ = writeln!(s, "anchoring: {}", finding_text(&c.anchored));
        let _ = writeln!(s, "character scan: {}", finding_text(&c.character));
        if let Some(cert) = &self.certificate {
            s.push_str(&certificate_text(cert));
        }
        s
    }
}

pub fn certificate_text(c: &CoverCertificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "certificate ({}), total degree {}", c.method, c.degree);
    for (i, l) in c.tower.iter().enumerate() {
        let _ = writeln!(s, "  level {}: {} (degree {})", i + 1, l.quotient, l.degree);
    }
    let w = crate::poly::IntPoly::new(c.witness_factor.clone());
    let p = crate::poly::IntPoly::new(c.charpoly.clone());
    let _ = writeln!(s, "  charpoly {p}");
    let _ = writeln!(s, "  witness {w}, largest root modulus {:.6}", c.modulus);
    s
}
