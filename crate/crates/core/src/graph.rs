//! Finite graphs, edge paths and graph self-maps, with the `.gm` text format.
//!
//! ```text
//! vertices: v0
//! edges: a: v0 -> v0 ; b: v0 -> v0
//! base: v0
//! boundary: 1            # optional
//! map a -> b a B
//! map b -> b
//! ```
//!
//! Edge names start with a lowercase letter; the uppercase spelling of a
//! name denotes the reversed edge.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    origin: Vec<usize>,
    terminus: Vec<usize>,
    base: usize,
}

fn valid_edge_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && name
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn valid_vertex_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

impl Graph {
    /// Builds a graph from vertex names, `(name, origin, terminus)` edges and a
    /// base vertex index.
    pub fn new(
        vertex_names: Vec<String>,
        edges: Vec<(String, usize, usize)>,
        base: usize,
    ) -> Result<Self> {
        let nv = vertex_names.len();
        if nv == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if base >= nv {
            return Err(Error::InvalidGraph("base vertex out of range".into()));
        }
        for (i, v) in vertex_names.iter().enumerate() {
            if !valid_vertex_name(v) {
                return Err(Error::InvalidGraph(format!("invalid vertex name `{v}`")));
            }
            if vertex_names[..i].contains(v) {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{v}`")));
            }
        }
        let mut edge_names = Vec::with_capacity(edges.len());
        let mut origin = Vec::with_capacity(edges.len());
        let mut terminus = Vec::with_capacity(edges.len());
        for (name, o, t) in edges {
            if !valid_edge_name(&name) {
                return Err(Error::InvalidGraph(format!(
                    "invalid edge name `{name}` (must start with a lowercase letter)"
                )));
            }
            if edge_names.contains(&name) {
                return Err(Error::InvalidGraph(format!("duplicate edge `{name}`")));
            }
            if o >= nv || t >= nv {
                return Err(Error::InvalidGraph(format!("edge `{name}` endpoint out of range")));
            }
            edge_names.push(name);
            origin.push(o);
            terminus.push(t);
        }
        let g = Graph {
            vertex_names,
            edge_names,
            origin,
            terminus,
            base,
        };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.num_vertices()];
        let mut queue = VecDeque::from([self.base]);
        seen[self.base] = true;
        while let Some(v) = queue.pop_front() {
            for e in 0..self.num_edges() {
                for (a, b) in [(self.origin[e], self.terminus[e]), (self.terminus[e], self.origin[e])] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        queue.push_back(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_names.len()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn origin(&self, e: usize) -> usize {
        self.origin[e]
    }

    pub fn terminus(&self, e: usize) -> usize {
        self.terminus[e]
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|v| v == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|v| v == name)
    }

    /// Euler-characteristic rank `#E - #V + 1` of `H_1`.
    pub fn betti(&self) -> usize {
        self.num_edges() + 1 - self.num_vertices()
    }

    /// Parses a token: lowercase name for a forward step, uppercase for a
    /// backward step.
    pub fn parse_step(&self, token: &str) -> Option<Step> {
        if let Some(e) = self.edge_index(token) {
            return Some(Step::forward(e));
        }
        let lower = token.to_ascii_lowercase();
        if lower != token && token == lower.to_ascii_uppercase() {
            return self.edge_index(&lower).map(Step::backward);
        }
        None
    }

    pub fn step_name(&self, s: Step) -> String {
        if s.forward {
            self.edge_names[s.edge].clone()
        } else {
            self.edge_names[s.edge].to_ascii_uppercase()
        }
    }
}

/// A traversal of one edge, forward (`+`) or backward (`-`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

impl Step {
    pub fn forward(edge: usize) -> Self {
        Step {
            edge,
            forward: true,
        }
    }

    pub fn backward(edge: usize) -> Self {
        Step {
            edge,
            forward: false,
        }
    }

    pub fn inverse(self) -> Self {
        Step {
            edge: self.edge,
            forward: !self.forward,
        }
    }

    pub fn sign(self) -> i64 {
        if self.forward {
            1
        } else {
            -1
        }
    }

    pub fn start(self, g: &Graph) -> usize {
        if self.forward {
            g.origin(self.edge)
        } else {
            g.terminus(self.edge)
        }
    }

    pub fn end(self, g: &Graph) -> usize {
        if self.forward {
            g.terminus(self.edge)
        } else {
            g.origin(self.edge)
        }
    }
}

/// A literal (unreduced) edge path. The anchor is the start vertex, which
/// keeps empty paths located.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgePath {
    anchor: usize,
    end: usize,
    steps: Vec<Step>,
}

impl EdgePath {
    pub fn empty(v: usize) -> Self {
        EdgePath {
            anchor: v,
            end: v,
            steps: Vec::new(),
        }
    }

    pub fn single(g: &Graph, s: Step) -> Self {
        EdgePath {
            anchor: s.start(g),
            end: s.end(g),
            steps: vec![s],
        }
    }

    /// A path from its steps; fails unless consecutive steps are composable.
    pub fn from_steps(g: &Graph, start: usize, steps: Vec<Step>) -> Result<Self> {
        let mut cur = start;
        for (i, s) in steps.iter().enumerate() {
            if s.start(g) != cur {
                return Err(Error::NonComposable(format!(
                    "step {} (`{}`) starts at `{}` but the path is at `{}`",
                    i + 1,
                    g.step_name(*s),
                    g.vertex_name(s.start(g)),
                    g.vertex_name(cur)
                )));
            }
            cur = s.end(g);
        }
        Ok(EdgePath {
            anchor: start,
            end: cur,
            steps,
        })
    }

    pub fn start(&self) -> usize {
        self.anchor
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn reverse(&self) -> EdgePath {
        EdgePath {
            anchor: self.end,
            end: self.anchor,
            steps: self.steps.iter().rev().map(|s| s.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &EdgePath) -> Result<EdgePath> {
        if self.end != other.anchor {
            return Err(Error::NonComposable(
                "paths do not meet end to start".into(),
            ));
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Ok(EdgePath {
            anchor: self.anchor,
            end: other.end,
            steps,
        })
    }

    /// The prefix consisting of the first `n` steps.
    pub fn prefix(&self, g: &Graph, n: usize) -> EdgePath {
        let end = if n == 0 {
            self.anchor
        } else {
            self.steps[n - 1].end(g)
        };
        EdgePath {
            anchor: self.anchor,
            end,
            steps: self.steps[..n].to_vec(),
        }
    }

    /// Space-separated tokens; the empty path prints as the empty string.
    pub fn to_text(&self, g: &Graph) -> String {
        self.steps
            .iter()
            .map(|&s| g.step_name(s))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphMap {
    graph: Graph,
    vertex_image: Vec<usize>,
    edge_image: Vec<EdgePath>,
    boundary: Option<u32>,
}

impl GraphMap {
    /// Builds a map from the images of the edges; vertex images are read off
    /// the endpoints of the edge images and checked for consistency.
    pub fn new(graph: Graph, edge_image: Vec<EdgePath>, boundary: Option<u32>) -> Result<Self> {
        if edge_image.len() != graph.num_edges() {
            return Err(Error::InvalidGraph(format!(
                "expected {} edge images, found {}",
                graph.num_edges(),
                edge_image.len()
            )));
        }
        let mut vertex_image: Vec<Option<usize>> = vec![None; graph.num_vertices()];
        if graph.num_edges() == 0 {
            vertex_image[graph.base()] = Some(graph.base());
        }
        for (e, img) in edge_image.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::EmptyImage(graph.edge_name(e).to_string()));
            }
            for (v, w) in [(graph.origin(e), img.start()), (graph.terminus(e), img.end())] {
                match vertex_image[v] {
                    None => vertex_image[v] = Some(w),
                    Some(prev) if prev != w => {
                        return Err(Error::EndpointMismatch(format!(
                            "vertex `{}` would map to both `{}` and `{}` (via edge `{}`)",
                            graph.vertex_name(v),
                            graph.vertex_name(prev),
                            graph.vertex_name(w),
                            graph.edge_name(e)
                        )))
                    }
                    _ => {}
                }
            }
        }
        let vertex_image: Vec<usize> = vertex_image
            .into_iter()
            .map(|x| x.expect("connected graph with edges has no isolated vertex"))
            .collect();
        if vertex_image[graph.base()] != graph.base() {
            return Err(Error::BaseNotFixed(graph.vertex_name(graph.base()).to_string()));
        }
        Ok(GraphMap {
            graph,
            vertex_image,
            edge_image,
            boundary,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn boundary(&self) -> Option<u32> {
        self.boundary
    }

    pub fn with_boundary(mut self, b: Option<u32>) -> Self {
        self.boundary = b;
        self
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.vertex_image[v]
    }

    pub fn edge_image(&self, e: usize) -> &EdgePath {
        &self.edge_image[e]
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    /// Image of a path: the concatenation of the images of its steps.
    pub fn apply(&self, p: &EdgePath) -> EdgePath {
        let mut steps = Vec::new();
        for &s in p.steps() {
            let img = &self.edge_image[s.edge];
            if s.forward {
                steps.extend_from_slice(img.steps());
            } else {
                steps.extend(img.steps().iter().rev().map(|t| t.inverse()));
            }
        }
        EdgePath {
            anchor: self.vertex_image[p.start()],
            end: self.vertex_image[p.end()],
            steps,
        }
    }

    /// `φ^k` applied to a path (`k = 0` is the identity).
    pub fn apply_power(&self, p: &EdgePath, k: usize) -> EdgePath {
        let mut cur = p.clone();
        for _ in 0..k {
            cur = self.apply(&cur);
        }
        cur
    }

    /// The literal path `φ^k(e)` for `k >= 1`.
    pub fn iterate_edge_image(&self, e: usize, k: usize) -> Result<EdgePath> {
        if e >= self.num_edges() {
            return Err(Error::UndeclaredEdge(format!("#{e}")));
        }
        if k == 0 {
            return Err(Error::Invalid("iteration power must be positive".into()));
        }
        Ok(self.apply_power(&self.edge_image[e].clone(), k - 1))
    }

    /// `φ^k` as a graph map.
    pub fn power(&self, k: usize) -> Result<GraphMap> {
        if k == 0 {
            return Err(Error::Invalid("map power must be positive".into()));
        }
        let images = (0..self.num_edges())
            .map(|e| self.iterate_edge_image(e, k))
            .collect::<Result<Vec<_>>>()?;
        GraphMap::new(self.graph.clone(), images, self.boundary)
    }

    /// Reports every backtrack (a step followed by its inverse) in `φ^k(e)`
    /// for `k <= max_power`.
    pub fn check_immersion(&self, max_power: usize) -> ImmersionReport {
        let mut backtracks = Vec::new();
        for e in 0..self.num_edges() {
            let mut path = self.edge_image[e].clone();
            for k in 1..=max_power {
                if k > 1 {
                    path = self.apply(&path);
                }
                for (i, w) in path.steps().windows(2).enumerate() {
                    if w[1] == w[0].inverse() {
                        backtracks.push(Backtrack {
                            edge: self.graph.edge_name(e).to_string(),
                            power: k,
                            position: i,
                        });
                    }
                }
            }
        }
        ImmersionReport {
            max_power,
            backtracks,
        }
    }

    /// Canonical `.gm` text.
    pub fn to_text(&self) -> String {
        let g = &self.graph;
        let mut out = String::new();
        out.push_str(&format!("vertices: {}\n", g.vertex_names.join(" ")));
        let edges: Vec<String> = (0..g.num_edges())
            .map(|e| {
                format!(
                    "{}: {} -> {}",
                    g.edge_name(e),
                    g.vertex_name(g.origin(e)),
                    g.vertex_name(g.terminus(e))
                )
            })
            .collect();
        out.push_str(&format!("edges: {}\n", edges.join(" ; ")));
        out.push_str(&format!("base: {}\n", g.vertex_name(g.base())));
        if let Some(b) = self.boundary {
            out.push_str(&format!("boundary: {b}\n"));
        }
        for e in 0..g.num_edges() {
            out.push_str(&format!(
                "map {} -> {}\n",
                g.edge_name(e),
                self.edge_image[e].to_text(g)
            ));
        }
        out
    }
}

impl fmt::Display for GraphMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Backtrack {
    pub edge: String,
    pub power: usize,
    /// Index of the first step of the backtracking pair.
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImmersionReport {
    pub max_power: usize,
    pub backtracks: Vec<Backtrack>,
}

impl ImmersionReport {
    pub fn is_immersion(&self) -> bool {
        self.backtracks.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Parser

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of `s` with their 1-based columns, where `s`
/// starts at column `offset + 1`.
fn tokens(s: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if c.is_whitespace() {
            if let Some(b) = start.take() {
                out.push((offset + b + 1, &s[b..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(b) = start {
        out.push((offset + b + 1, &s[b..]));
    }
    out
}

struct RawEdge<'a> {
    name: &'a str,
    origin: (usize, usize, &'a str),
    terminus: (usize, usize, &'a str),
}

pub fn parse_graph_map(text: &str) -> Result<GraphMap> {
    let mut vertices: Vec<(usize, usize, &str)> = Vec::new();
    let mut raw_edges: Vec<RawEdge> = Vec::new();
    let mut base: Option<(usize, usize, &str)> = None;
    let mut boundary: Option<u32> = None;
    let mut maps: Vec<(usize, usize, &str, Vec<(usize, &str)>)> = Vec::new();

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let lead = content.len() - content.trim_start().len();
        let body = content.trim_start();
        if let Some(rest) = body.strip_prefix("map") {
            if !rest.starts_with(char::is_whitespace) {
                return Err(syntax(line, lead + 1, "unknown statement"));
            }
            let off = lead + 3;
            let Some(arrow) = rest.find("->") else {
                return Err(syntax(line, off + 1, "expected `->` in map statement"));
            };
            let lhs = tokens(&rest[..arrow], off);
            if lhs.len() != 1 {
                return Err(syntax(line, off + 1, "expected exactly one edge before `->`"));
            }
            let rhs = tokens(&rest[arrow + 2..], off + arrow + 2);
            maps.push((line, lhs[0].0, lhs[0].1, rhs));
            continue;
        }
        let Some(colon) = body.find(':') else {
            return Err(syntax(line, lead + 1, "expected `keyword:`"));
        };
        let keyword = body[..colon].trim();
        let value = &body[colon + 1..];
        let voff = lead + colon + 1;
        match keyword {
            "vertices" => {
                for (col, tok) in tokens(value, voff) {
                    vertices.push((line, col, tok));
                }
            }
            "edges" => {
                let mut seg_off = voff;
                for seg in value.split(';') {
                    let seg_len = seg.len();
                    if !seg.trim().is_empty() {
                        let Some(c) = seg.find(':') else {
                            return Err(syntax(line, seg_off + 1, "expected `name: origin -> terminus`"));
                        };
                        let name_toks = tokens(&seg[..c], seg_off);
                        if name_toks.len() != 1 {
                            return Err(syntax(line, seg_off + 1, "expected a single edge name"));
                        }
                        let ends = &seg[c + 1..];
                        let Some(a) = ends.find("->") else {
                            return Err(syntax(line, seg_off + c + 2, "expected `->` in edge declaration"));
                        };
                        let o = tokens(&ends[..a], seg_off + c + 1);
                        let t = tokens(&ends[a + 2..], seg_off + c + 1 + a + 2);
                        if o.len() != 1 || t.len() != 1 {
                            return Err(syntax(line, seg_off + c + 2, "expected `origin -> terminus`"));
                        }
                        raw_edges.push(RawEdge {
                            name: name_toks[0].1,
                            origin: (line, o[0].0, o[0].1),
                            terminus: (line, t[0].0, t[0].1),
                        });
                    }
                    seg_off += seg_len + 1;
                }
            }
            "base" => {
                let t = tokens(value, voff);
                if t.len() != 1 {
                    return Err(syntax(line, voff + 1, "expected a single base vertex"));
                }
                if base.is_some() {
                    return Err(syntax(line, lead + 1, "duplicate base statement"));
                }
                base = Some((line, t[0].0, t[0].1));
            }
            "boundary" => {
                let t = tokens(value, voff);
                if t.len() != 1 {
                    return Err(syntax(line, voff + 1, "expected a single nonnegative integer"));
                }
                boundary = Some(t[0].1.parse().map_err(|_| {
                    syntax(line, t[0].0, "boundary count must be a nonnegative integer")
                })?);
            }
            other => {
                return Err(syntax(line, lead + 1, format!("unknown statement `{other}`")));
            }
        }
    }

    if vertices.is_empty() {
        return Err(syntax(1, 1, "missing `vertices:` statement"));
    }
    let Some(base) = base else {
        return Err(syntax(1, 1, "missing `base:` statement"));
    };
    let vertex_names: Vec<String> = vertices.iter().map(|v| v.2.to_string()).collect();
    for (i, &(line, col, name)) in vertices.iter().enumerate() {
        if vertex_names[..i].iter().any(|v| v == name) {
            return Err(syntax(line, col, format!("duplicate vertex `{name}`")));
        }
        if !valid_vertex_name(name) {
            return Err(syntax(line, col, format!("invalid vertex name `{name}`")));
        }
    }
    let lookup_vertex = |name: &str| -> Result<usize> {
        vertex_names
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UndeclaredVertex(name.to_string()))
    };
    let mut edges = Vec::new();
    for (i, e) in raw_edges.iter().enumerate() {
        if !valid_edge_name(e.name) {
            return Err(syntax(
                e.origin.0,
                1,
                format!("invalid edge name `{}` (must start with a lowercase letter)", e.name),
            ));
        }
        if raw_edges[..i].iter().any(|f| f.name == e.name) {
            return Err(syntax(e.origin.0, 1, format!("duplicate edge `{}`", e.name)));
        }
        edges.push((
            e.name.to_string(),
            lookup_vertex(e.origin.2)?,
            lookup_vertex(e.terminus.2)?,
        ));
    }
    let base_idx = lookup_vertex(base.2)?;
    let graph = Graph::new(vertex_names, edges, base_idx)?;

    let mut images: BTreeMap<usize, EdgePath> = BTreeMap::new();
    for (line, col, name, rhs) in maps {
        let Some(e) = graph.edge_index(name) else {
            return Err(Error::UndeclaredEdge(name.to_string()));
        };
        if images.contains_key(&e) {
            return Err(syntax(line, col, format!("duplicate map for edge `{name}`")));
        }
        if rhs.is_empty() {
            return Err(Error::EmptyImage(name.to_string()));
        }
        let mut steps = Vec::with_capacity(rhs.len());
        for (_, tok) in &rhs {
            let s = graph
                .parse_step(tok)
                .ok_or_else(|| Error::UndeclaredEdge(tok.to_string()))?;
            steps.push(s);
        }
        let start = steps[0].start(&graph);
        let path = EdgePath::from_steps(&graph, start, steps).map_err(|err| match err {
            Error::NonComposable(m) => {
                Error::NonComposable(format!("image of `{name}` (line {line}): {m}"))
            }
            other => other,
        })?;
        images.insert(e, path);
    }
    let mut edge_images = Vec::with_capacity(graph.num_edges());
    for e in 0..graph.num_edges() {
        match images.remove(&e) {
            Some(p) => edge_images.push(p),
            None => {
                return Err(Error::InvalidGraph(format!(
                    "edge `{}` has no `map` statement",
                    graph.edge_name(e)
                )))
            }
        }
    }
    GraphMap::new(graph, edge_images, boundary)
}
