//! The lattice `Q^ = Q + Z delta`, its symmetric form, the positive cone, and
//! the classes of sheaves.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{self, Error, Result};
use crate::weight::{GradingElement, StarGraph, Vertex, WeightType};

/// An element `m alpha_* + sum x_ij alpha_ij + r delta` of `Q^`.
///
/// `branch[i-1]` holds the `p_i - 1` coefficients of branch `i`, so a branch of
/// weight 1 has an empty list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassVector {
    pub star: i64,
    pub branch: Vec<Vec<i64>>,
    pub delta: i64,
}

impl ClassVector {
    pub fn is_zero(&self) -> bool {
        self.star == 0 && self.delta == 0 && self.branch.iter().flatten().all(|&x| x == 0)
    }

    /// True when the vector has no `delta` component.
    pub fn is_delta_free(&self) -> bool {
        self.delta == 0
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        let ok = self.branch.len() == other.branch.len()
            && self
                .branch
                .iter()
                .zip(&other.branch)
                .all(|(a, b)| a.len() == b.len());
        if ok {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(
                "class vectors belong to different weight types".into(),
            ))
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> Result<i64>) -> Result<Self> {
        self.same_shape(other)?;
        let branch = self
            .branch
            .iter()
            .zip(&other.branch)
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .map(|(&x, &y)| f(x, y))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            star: f(self.star, other.star)?,
            branch,
            delta: f(self.delta, other.delta)?,
        })
    }

    fn map(&self, f: impl Fn(i64) -> Result<i64>) -> Result<Self> {
        let branch = self
            .branch
            .iter()
            .map(|a| a.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            star: f(self.star)?,
            branch,
            delta: f(self.delta)?,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, error::add)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, error::sub)
    }

    pub fn checked_neg(&self) -> Result<Self> {
        self.map(error::neg)
    }

    pub fn checked_scale(&self, c: i64) -> Result<Self> {
        self.map(|x| error::mul(x, c))
    }

    /// The same vector with the `delta` coefficient replaced.
    pub fn with_delta(&self, delta: i64) -> Self {
        Self {
            delta,
            ..self.clone()
        }
    }

    /// Coefficients of the simple roots in canonical vertex order (`delta` dropped).
    pub fn finite_coefficients(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(1 + self.branch.iter().map(Vec::len).sum::<usize>());
        out.push(self.star);
        for arm in &self.branch {
            out.extend_from_slice(arm);
        }
        out
    }

    /// Sum of absolute values of the simple-root coefficients.
    pub fn finite_height(&self) -> i64 {
        self.finite_coefficients().iter().map(|x| x.abs()).sum()
    }
}

impl Ord for ClassVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.finite_coefficients()
            .cmp(&other.finite_coefficients())
            .then(self.delta.cmp(&other.delta))
    }
}

impl PartialOrd for ClassVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Objects whose classes can be computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SheafObject {
    /// `S_{i,j}[r]`: length `r` and top `S_{i,j}` for `r > 0`, the shift `TY`
    /// for `r < 0`.
    Tube {
        branch: usize,
        top: i64,
        length: i64,
    },
    /// A torsion sheaf of length `r` at a point outside the weighted points.
    Generic { length: i64 },
    /// `O(k c + sum a_i x_i)`, given by raw (not necessarily reduced) coordinates.
    Line { k: i64, raw: Vec<i64> },
}

/// The lattice of a fixed weight type.
#[derive(Debug, Clone)]
pub struct RootLattice {
    weights: WeightType,
    graph: StarGraph,
}

impl RootLattice {
    pub fn new(weights: WeightType) -> Self {
        let graph = weights.star_graph();
        Self { weights, graph }
    }

    pub fn weights(&self) -> &WeightType {
        &self.weights
    }

    pub fn graph(&self) -> &StarGraph {
        &self.graph
    }

    /// Number of simple roots (vertices of the star graph).
    pub fn rank(&self) -> usize {
        self.graph.len()
    }

    pub fn zero(&self) -> ClassVector {
        ClassVector {
            star: 0,
            branch: self
                .weights
                .weights()
                .iter()
                .map(|&p| vec![0; p as usize - 1])
                .collect(),
            delta: 0,
        }
    }

    pub fn delta(&self, r: i64) -> ClassVector {
        ClassVector {
            delta: r,
            ..self.zero()
        }
    }

    pub fn simple_root(&self, v: Vertex) -> Result<ClassVector> {
        let idx = self.graph.require(v)?;
        let mut flat = vec![0; self.rank()];
        flat[idx] = 1;
        Ok(self.from_flat(&flat, 0))
    }

    pub fn check_shape(&self, v: &ClassVector) -> Result<()> {
        let ok = v.branch.len() == self.weights.branch_count()
            && v.branch
                .iter()
                .zip(self.weights.weights())
                .all(|(arm, &p)| arm.len() == p as usize - 1);
        if ok {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "vector does not fit weight type ({})",
                self.weights
            )))
        }
    }

    /// Simple-root coefficients in canonical vertex order, after a shape check.
    pub fn flatten(&self, v: &ClassVector) -> Result<Vec<i64>> {
        self.check_shape(v)?;
        Ok(v.finite_coefficients())
    }

    pub fn from_flat(&self, flat: &[i64], delta: i64) -> ClassVector {
        debug_assert_eq!(flat.len(), self.rank());
        let branch = (0..self.graph.arm_count())
            .map(|b| match self.graph.arm(b) {
                (Some(start), len) => flat[start..start + len].to_vec(),
                (None, _) => Vec::new(),
            })
            .collect();
        ClassVector {
            star: flat[0],
            branch,
            delta,
        }
    }

    /// The Cartan form of the star graph on flat coefficient slices.
    pub fn form_flat(&self, x: &[i64], y: &[i64]) -> Result<i64> {
        let mut acc = 0i64;
        for v in 0..self.rank() {
            let mut row = error::mul(2, y[v])?;
            for &w in self.graph.neighbors(v) {
                row = error::sub(row, y[w])?;
            }
            acc = error::add(acc, error::mul(x[v], row)?)?;
        }
        Ok(acc)
    }

    /// `(u, v)`: the Cartan form of the star graph, with `delta` in the radical.
    pub fn symmetric_form(&self, u: &ClassVector, v: &ClassVector) -> Result<i64> {
        let x = self.flatten(u)?;
        let y = self.flatten(v)?;
        self.form_flat(&x, &y)
    }

    /// Membership in the cone spanned by `alpha_ij`, `delta - sum_j alpha_ij`,
    /// `alpha_* + k delta` (all `k`) and `delta`.
    ///
    /// A positive `alpha_*` coefficient absorbs any deficit through `k`. With
    /// no `alpha_*`, each branch's most negative entry must be paid for by a
    /// copy of `delta - sum_j alpha_ij`.
    pub fn cone_contains(&self, phi: &ClassVector) -> Result<bool> {
        self.check_shape(phi)?;
        Ok(cone_contains_parts(phi.star, &phi.branch, phi.delta))
    }

    pub fn encode_simple(&self, i: usize, j: i64) -> Result<ClassVector> {
        let p = self.weights.weight(i)?;
        if j < 0 || j >= p {
            return Err(Error::IndexOutOfRange(format!(
                "simple S_({i},{j}) with p_{i} = {p}"
            )));
        }
        if j == 0 {
            let mut v = self.delta(1);
            for x in v.branch[i - 1].iter_mut() {
                *x = -1;
            }
            Ok(v)
        } else {
            let mut v = self.zero();
            v.branch[i - 1][j as usize - 1] = 1;
            Ok(v)
        }
    }

    /// Class of `S_{i,j}[r]`. For `r > 0` the composition factors are
    /// `S_{i,j}, S_{i,j-1}, ..., S_{i,j-r+1}`; for `r < 0` the class is minus
    /// that of the object with factors `S_{i,j+1}, ..., S_{i,j-r}`.
    pub fn encode_tube_object(&self, i: usize, j: i64, r: i64) -> Result<ClassVector> {
        let p = self.weights.weight(i)?;
        if j < 0 || j >= p {
            return Err(Error::IndexOutOfRange(format!(
                "tube top S_({i},{j}) with p_{i} = {p}"
            )));
        }
        if r == 0 {
            return Err(Error::ZeroLength);
        }
        // Whole periods contribute delta each; only the remainder is summed.
        let periods = r.abs() / p;
        let rest = r.abs() % p;
        let mut acc = self.delta(periods);
        for t in 0..rest {
            let idx = if r > 0 {
                (j - t).rem_euclid(p)
            } else {
                (j + 1 + t).rem_euclid(p)
            };
            acc = acc.checked_add(&self.encode_simple(i, idx)?)?;
        }
        if r < 0 {
            acc = acc.checked_neg()?;
        }
        Ok(acc)
    }

    /// `[O(x)] = alpha_* + k delta + sum_i sum_{j=1}^{a_i} alpha_ij` for `x` in
    /// normal form `(k, a)`.
    pub fn encode_line_bundle(&self, x: &GradingElement) -> Result<ClassVector> {
        if x.a.len() != self.weights.branch_count() {
            return Err(Error::ShapeMismatch(format!(
                "grading element has {} coordinates for {} branches",
                x.a.len(),
                self.weights.branch_count()
            )));
        }
        let mut v = self.delta(x.k);
        v.star = 1;
        for (i, &a) in x.a.iter().enumerate() {
            let p = self.weights.weight(i + 1)?;
            if a < 0 || a >= p {
                return Err(Error::ShapeMismatch(format!(
                    "coordinate a_{} = {a} is not reduced modulo {p}",
                    i + 1
                )));
            }
            for j in 1..=a {
                v.branch[i][j as usize - 1] += 1;
            }
        }
        Ok(v)
    }

    pub fn encode_generic_torsion(&self, r: i64) -> Result<ClassVector> {
        if r < 1 {
            return Err(Error::InvalidTorsionLength(r));
        }
        Ok(self.delta(r))
    }

    pub fn encode(&self, obj: &SheafObject) -> Result<ClassVector> {
        match obj {
            SheafObject::Tube {
                branch,
                top,
                length,
            } => self.encode_tube_object(*branch, *top, *length),
            SheafObject::Generic { length } => self.encode_generic_torsion(*length),
            SheafObject::Line { k, raw } => {
                // An empty coordinate list stands for all zeros.
                let zeros = vec![0; self.weights.branch_count()];
                let raw = if raw.is_empty() { &zeros } else { raw };
                let x = self.weights.lp_normalize(raw, *k)?;
                self.encode_line_bundle(&x)
            }
        }
    }
}

pub(crate) fn cone_contains_parts(star: i64, branch: &[Vec<i64>], delta: i64) -> bool {
    match star.cmp(&0) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => {
            let need: i128 = branch
                .iter()
                .map(|arm| {
                    arm.iter()
                        .copied()
                        .min()
                        .map_or(0, |m| (-(m as i128)).max(0))
                })
                .sum();
            delta as i128 >= need
        }
    }
}
