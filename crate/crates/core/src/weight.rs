//! Weight data, the star-shaped graph, and the grading group L(p).

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{self, Error, Result};

/// A weight sequence `p = (p_1, ..., p_n)` together with distinct point labels.
///
/// Branches with `p_i = 1` are kept (they still name a point of the line) but
/// contribute no vertices to the star graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightType {
    weights: Vec<u32>,
    points: Vec<String>,
}

#[derive(Deserialize)]
struct WeightTypeJson {
    weights: Vec<u32>,
    #[serde(default)]
    points: Option<Vec<String>>,
}

impl WeightType {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        let points = (1..=weights.len()).map(|i| format!("l{i}")).collect();
        Self::with_points(weights, points)
    }

    pub fn with_points(weights: Vec<u32>, points: Vec<String>) -> Result<Self> {
        if let Some(pos) = weights.iter().position(|&p| p == 0) {
            return Err(Error::InvalidWeights(format!(
                "weight {} is zero; every weight must be at least 1",
                pos + 1
            )));
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidWeights(format!(
                "{} weights but {} points",
                weights.len(),
                points.len()
            )));
        }
        let mut seen = HashSet::new();
        for label in &points {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicatePoint(label.clone()));
            }
        }
        Ok(Self { weights, points })
    }

    /// Parses either the comma-separated form `2,3,5` or the JSON object form
    /// `{"weights":[2,3,5],"points":["a","b","c"]}`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('{') {
            let raw: WeightTypeJson =
                serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            return match raw.points {
                Some(points) => Self::with_points(raw.weights, points),
                None => Self::new(raw.weights),
            };
        }
        if text.is_empty() {
            return Self::new(Vec::new());
        }
        let weights = text
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad weight `{}`", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(weights)
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn branch_count(&self) -> usize {
        self.weights.len()
    }

    /// Weight of branch `i` (1-based).
    pub fn weight(&self, i: usize) -> Result<i64> {
        if i == 0 || i > self.weights.len() {
            return Err(Error::IndexOutOfRange(format!(
                "branch {i} (weight type has {} branches)",
                self.weights.len()
            )));
        }
        Ok(self.weights[i - 1] as i64)
    }

    pub fn star_graph(&self) -> StarGraph {
        StarGraph::build(self)
    }

    pub fn identity(&self) -> GradingElement {
        GradingElement {
            k: 0,
            a: vec![0; self.weights.len()],
        }
    }

    /// The generator `x_i` (1-based branch) in normal form.
    pub fn generator(&self, i: usize) -> Result<GradingElement> {
        let mut raw = vec![0; self.branch_count()];
        self.weight(i)?;
        raw[i - 1] = 1;
        self.lp_normalize(&raw, 0)
    }

    /// Reduces `k c + sum_i raw_i x_i` to the unique normal form with
    /// `0 <= a_i < p_i`.
    pub fn lp_normalize(&self, raw: &[i64], k: i64) -> Result<GradingElement> {
        if self.weights.is_empty() {
            return Err(Error::Branchless);
        }
        if raw.len() != self.weights.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} x-coefficients for {} branches",
                raw.len(),
                self.weights.len()
            )));
        }
        let mut k = k;
        let mut a = Vec::with_capacity(raw.len());
        for (&x, &p) in raw.iter().zip(&self.weights) {
            let p = p as i64;
            k = error::add(k, x.div_euclid(p))?;
            a.push(x.rem_euclid(p));
        }
        Ok(GradingElement { k, a })
    }

    pub fn lp_add(&self, x: &GradingElement, y: &GradingElement) -> Result<GradingElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        let raw =
            x.a.iter()
                .zip(&y.a)
                .map(|(&u, &v)| error::add(u, v))
                .collect::<Result<Vec<_>>>()?;
        self.lp_normalize(&raw, error::add(x.k, y.k)?)
    }

    pub fn lp_neg(&self, x: &GradingElement) -> Result<GradingElement> {
        self.check_element(x)?;
        let raw =
            x.a.iter()
                .map(|&u| error::neg(u))
                .collect::<Result<Vec<_>>>()?;
        self.lp_normalize(&raw, error::neg(x.k)?)
    }

    fn check_element(&self, x: &GradingElement) -> Result<()> {
        if x.a.len() != self.weights.len() {
            return Err(Error::ShapeMismatch(format!(
                "grading element has {} coordinates, weight type has {} branches",
                x.a.len(),
                self.weights.len()
            )));
        }
        for (i, (&a, &p)) in x.a.iter().zip(&self.weights).enumerate() {
            if a < 0 || a >= p as i64 {
                return Err(Error::ShapeMismatch(format!(
                    "coordinate a_{} = {a} is not reduced modulo {p}",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for WeightType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// An element `k c + sum_i a_i x_i` of L(p) in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradingElement {
    pub k: i64,
    pub a: Vec<i64>,
}

/// A vertex of the star graph: the centre `*` or `[branch, depth]`, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Star,
    Arm { branch: usize, depth: usize },
}

impl Vertex {
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "*" {
            return Ok(Vertex::Star);
        }
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("bad vertex `{t}`")))?;
        let (i, j) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad vertex `{t}`")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad vertex `{t}`")))
        };
        Ok(Vertex::Arm {
            branch: parse(i)?,
            depth: parse(j)?,
        })
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Star => write!(f, "*"),
            Vertex::Arm { branch, depth } => write!(f, "[{branch},{depth}]"),
        }
    }
}

impl Serialize for Vertex {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// The star-shaped graph with canonical vertex order: `*` first, then each
/// branch in input order with depth ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarGraph {
    vertices: Vec<Vertex>,
    /// Flat index of `[i,1]` for each branch, `None` for weight-1 branches.
    arm_start: Vec<Option<usize>>,
    arm_len: Vec<usize>,
    neighbors: Vec<Vec<usize>>,
}

impl StarGraph {
    pub fn build(w: &WeightType) -> Self {
        let mut vertices = vec![Vertex::Star];
        let mut arm_start = Vec::with_capacity(w.branch_count());
        let mut arm_len = Vec::with_capacity(w.branch_count());
        for (i, &p) in w.weights().iter().enumerate() {
            let len = p as usize - 1;
            arm_len.push(len);
            if len == 0 {
                arm_start.push(None);
                continue;
            }
            arm_start.push(Some(vertices.len()));
            for j in 1..=len {
                vertices.push(Vertex::Arm {
                    branch: i + 1,
                    depth: j,
                });
            }
        }
        let mut neighbors = vec![Vec::new(); vertices.len()];
        for (start, &len) in arm_start.iter().zip(&arm_len) {
            let Some(start) = *start else { continue };
            let mut prev = 0;
            for v in start..start + len {
                neighbors[prev].push(v);
                neighbors[v].push(prev);
                prev = v;
            }
        }
        Self {
            vertices,
            arm_start,
            arm_len,
            neighbors,
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        match v {
            Vertex::Star => Some(0),
            Vertex::Arm { branch, depth } => {
                let b = branch.checked_sub(1)?;
                let start = (*self.arm_start.get(b)?)?;
                (depth >= 1 && depth <= self.arm_len[b]).then(|| start + depth - 1)
            }
        }
    }

    pub fn require(&self, v: Vertex) -> Result<usize> {
        self.index_of(v)
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub fn neighbors(&self, idx: usize) -> &[usize] {
        &self.neighbors[idx]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].contains(&b)
    }

    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for (a, ns) in self.neighbors.iter().enumerate() {
            for &b in ns {
                if a < b {
                    out.push((self.vertices[a], self.vertices[b]));
                }
            }
        }
        out
    }

    /// Flat index of `[i,1]` (0-based branch) and the arm length.
    pub(crate) fn arm(&self, branch: usize) -> (Option<usize>, usize) {
        (self.arm_start[branch], self.arm_len[branch])
    }

    pub(crate) fn arm_count(&self) -> usize {
        self.arm_len.len()
    }

    /// Cartan entry `a_vw` between flat indices.
    pub fn cartan_entry(&self, a: usize, b: usize) -> i64 {
        if a == b {
            2
        } else if self.adjacent(a, b) {
            -1
        } else {
            0
        }
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.len())
            .map(|a| (0..self.len()).map(|b| self.cartan_entry(a, b)).collect())
            .collect()
    }
}
