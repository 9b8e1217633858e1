//! A symbolic graded Lie algebra whose basis mirrors the explicit elements
//! realising the loop algebra on sheaf classes.
//!
//! Basis symbols carry their sign normalisation: `Tube(i, j, m)` stands for
//! `l(m) 1_(S_ij[m])`, `Line(k)` for `l(k) 1_(O(kc))`, `ShiftedLine(k)` for the
//! normalised class function of the shift `T O(kc)` and `Hline(r)` for
//! `l(r) 1_(H_r)`. The Cartan part is kept as a single lattice vector `d`
//! standing for `h_d`.
//!
//! Only brackets that follow from the computed table are evaluated; every
//! other pair of basis symbols yields [`BracketError::NotDerivable`].

mod jacobi;
mod relations;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::error::{self, Error, Result};
use crate::lattice::ClassVector;
use crate::weight::{Vertex, WeightType};
use crate::weyl::RootSystem;

pub use jacobi::JacobiReport;
pub use relations::{FailedInstance, RelationReport, SkippedFamily};

/// Euler characteristic of the orbit space of `H_r`. It is the structure
/// constant of both `[h_{*,r}, h_{*,-r}]` and `[h_{*,r}, e_{*,s}]`.
pub const HLINE_EULER_CHARACTERISTIC: i64 = 2;

/// `l(r)`: `1` for `r >= 0`, `-1` otherwise.
pub fn sign_l(r: i64) -> i64 {
    if r >= 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorSymbol {
    E(Vertex, i64),
    F(Vertex, i64),
    H(Vertex, i64),
    C,
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSymbol::E(v, r) => write!(f, "e_{{{v},{r}}}"),
            GeneratorSymbol::F(v, r) => write!(f, "f_{{{v},{r}}}"),
            GeneratorSymbol::H(v, r) => write!(f, "h_{{{v},{r}}}"),
            GeneratorSymbol::C => write!(f, "c"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    /// Branch (1-based), top reduced modulo `p_i`, nonzero length.
    Tube {
        branch: usize,
        top: i64,
        length: i64,
    },
    Line(i64),
    ShiftedLine(i64),
    /// Nonzero index.
    Hline(i64),
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Tube {
                branch,
                top,
                length,
            } => write!(f, "Tube({branch},{top},{length})"),
            Basis::Line(k) => write!(f, "Line({k})"),
            Basis::ShiftedLine(k) => write!(f, "ShiftedLine({k})"),
            Basis::Hline(r) => write!(f, "Hline({r})"),
        }
    }
}

/// A finite integer combination of basis symbols plus a Cartan part.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelElement {
    terms: BTreeMap<Basis, i64>,
    /// `None` encodes the zero Cartan vector.
    cartan: Option<ClassVector>,
}

impl ModelElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: Basis, coeff: i64) -> Self {
        let mut out = Self::zero();
        if coeff != 0 {
            out.terms.insert(b, coeff);
        }
        out
    }

    pub fn cartan(d: ClassVector) -> Self {
        Self {
            terms: BTreeMap::new(),
            cartan: (!d.is_zero()).then_some(d),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.cartan.is_none()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &i64)> {
        self.terms.iter()
    }

    pub fn cartan_part(&self) -> Option<&ClassVector> {
        self.cartan.as_ref()
    }

    fn add_term(&mut self, b: Basis, coeff: i64) -> Result<()> {
        if coeff == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(b).or_insert(0);
        *entry = error::add(*entry, coeff)?;
        if *entry == 0 {
            self.terms.remove(&b);
        }
        Ok(())
    }

    fn add_cartan(&mut self, d: &ClassVector) -> Result<()> {
        let sum = match &self.cartan {
            Some(c) => c.checked_add(d)?,
            None => d.clone(),
        };
        self.cartan = (!sum.is_zero()).then_some(sum);
        Ok(())
    }

    /// `self + c * other`.
    pub fn add_scaled(&mut self, other: &ModelElement, c: i64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        for (&b, &x) in &other.terms {
            self.add_term(b, error::mul(x, c)?)?;
        }
        if let Some(d) = &other.cartan {
            self.add_cartan(&d.checked_scale(c)?)?;
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &ModelElement) -> Result<ModelElement> {
        let mut out = self.clone();
        out.add_scaled(other, 1)?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &ModelElement) -> Result<ModelElement> {
        let mut out = self.clone();
        out.add_scaled(other, -1)?;
        Ok(out)
    }

    pub fn checked_scale(&self, c: i64) -> Result<ModelElement> {
        let mut out = ModelElement::zero();
        out.add_scaled(self, c)?;
        Ok(out)
    }
}

impl fmt::Display for ModelElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, &c) in &self.terms {
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "{b}")?;
            first = false;
        }
        if let Some(d) = &self.cartan {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "Cartan({})", crate::format::class_to_text(d))?;
        }
        Ok(())
    }
}

/// Degree of an element in `Q^`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Degree {
    Homogeneous(ClassVector),
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error("[{left}, {right}] is not derivable: {reason}")]
    NotDerivable {
        left: String,
        right: String,
        reason: String,
    },

    #[error(transparent)]
    Lattice(#[from] Error),
}

enum PairRule {
    Value(ModelElement),
    /// A full-period tube against `Line`, evaluated on `h_{[i,j],r}` combinations.
    Combination,
    Missing(&'static str),
}

/// `(top, coefficient)` pairs of full-period tube terms keyed by `(branch, r)`.
type TubeGroups = BTreeMap<(usize, i64), Vec<(i64, i64)>>;

#[derive(Debug, Clone)]
pub struct LoopModel {
    system: RootSystem,
}

impl LoopModel {
    pub fn new(weights: WeightType) -> Self {
        Self {
            system: RootSystem::new(weights),
        }
    }

    pub fn system(&self) -> &RootSystem {
        &self.system
    }

    fn weight(&self, branch: usize) -> Result<i64> {
        self.system.lattice().weights().weight(branch)
    }

    /// A tube symbol with its top reduced modulo the branch weight.
    pub fn tube(&self, branch: usize, top: i64, length: i64) -> Result<Basis> {
        let p = self.weight(branch)?;
        if length == 0 {
            return Err(Error::ZeroLength);
        }
        Ok(Basis::Tube {
            branch,
            top: top.rem_euclid(p),
            length,
        })
    }

    fn tube_element(&self, branch: usize, top: i64, length: i64) -> Result<ModelElement> {
        Ok(ModelElement::basis(self.tube(branch, top, length)?, 1))
    }

    pub fn model_of_generator(&self, g: GeneratorSymbol) -> Result<ModelElement> {
        let lattice = self.system.lattice();
        if let GeneratorSymbol::E(v, _) | GeneratorSymbol::F(v, _) | GeneratorSymbol::H(v, _) = g {
            lattice.graph().require(v)?;
        }
        match g {
            GeneratorSymbol::C => Ok(ModelElement::cartan(lattice.delta(-1))),
            GeneratorSymbol::H(v, 0) => {
                Ok(ModelElement::cartan(lattice.simple_root(v)?.checked_neg()?))
            }
            GeneratorSymbol::E(Vertex::Star, r) => Ok(ModelElement::basis(Basis::Line(r), 1)),
            GeneratorSymbol::F(Vertex::Star, r) => {
                Ok(ModelElement::basis(Basis::ShiftedLine(error::neg(r)?), 1))
            }
            GeneratorSymbol::H(Vertex::Star, r) => Ok(ModelElement::basis(Basis::Hline(r), 1)),
            GeneratorSymbol::E(Vertex::Arm { branch, depth }, r) => {
                let p = self.weight(branch)?;
                self.tube_element(branch, depth as i64, error::add(error::mul(r, p)?, 1)?)
            }
            GeneratorSymbol::F(Vertex::Arm { branch, depth }, r) => {
                let p = self.weight(branch)?;
                self.tube_element(branch, depth as i64 - 1, error::sub(error::mul(r, p)?, 1)?)
            }
            GeneratorSymbol::H(Vertex::Arm { branch, depth }, r) => {
                let p = self.weight(branch)?;
                let len = error::mul(r, p)?;
                self.tube_element(branch, depth as i64, len)?
                    .checked_sub(&self.tube_element(branch, depth as i64 - 1, len)?)
            }
        }
    }

    pub fn basis_degree(&self, b: &Basis) -> Result<ClassVector> {
        let lattice = self.system.lattice();
        match *b {
            Basis::Tube {
                branch,
                top,
                length,
            } => lattice.encode_tube_object(branch, top, length),
            Basis::Line(k) => {
                let mut v = lattice.delta(k);
                v.star = 1;
                Ok(v)
            }
            Basis::ShiftedLine(k) => {
                let mut v = lattice.delta(error::neg(k)?);
                v.star = -1;
                Ok(v)
            }
            Basis::Hline(r) => Ok(lattice.delta(r)),
        }
    }

    /// Common degree of all terms; Cartan parts have degree zero. The zero
    /// element is reported as homogeneous of degree zero.
    pub fn degree(&self, x: &ModelElement) -> Result<Degree> {
        let mut common: Option<ClassVector> = None;
        if x.cartan.is_some() {
            common = Some(self.system.lattice().zero());
        }
        for b in x.terms.keys() {
            let d = self.basis_degree(b)?;
            match &common {
                None => common = Some(d),
                Some(c) if *c == d => {}
                Some(_) => return Ok(Degree::Mixed),
            }
        }
        Ok(Degree::Homogeneous(
            common.unwrap_or_else(|| self.system.lattice().zero()),
        ))
    }

    /// Bracket of two tube symbols in the same tube.
    fn tube_bracket(&self, branch: usize, j: i64, r: i64, k: i64, s: i64) -> Result<ModelElement> {
        let p = self.weight(branch)?;
        let same = |a: i64, b: i64| (a - b).rem_euclid(p) == 0;
        let total = error::add(r, s)?;
        let mut out = ModelElement::zero();
        if total != 0 {
            if same(j - r, k) {
                out.add_scaled(&self.tube_element(branch, j, total)?, 1)?;
            }
            if same(j, k - s) {
                out.add_scaled(&self.tube_element(branch, k, total)?, -1)?;
            }
        } else if same(j - r, k) {
            let class = self.system.lattice().encode_tube_object(branch, j, r)?;
            out = ModelElement::cartan(class.checked_neg()?);
        }
        Ok(out)
    }

    fn pair_rule(&self, a: &Basis, b: &Basis) -> Result<PairRule> {
        use Basis::*;
        let chi = HLINE_EULER_CHARACTERISTIC;
        let lattice = self.system.lattice();
        let rule = match (*a, *b) {
            (
                Tube {
                    branch: i,
                    top: j,
                    length: r,
                },
                Tube {
                    branch: i2,
                    top: k,
                    length: s,
                },
            ) => {
                if i != i2 {
                    PairRule::Value(ModelElement::zero())
                } else {
                    PairRule::Value(self.tube_bracket(i, j, r, k, s)?)
                }
            }
            (Hline(r), Hline(s)) => {
                if r == -s {
                    PairRule::Value(ModelElement::cartan(lattice.delta(-error::mul(chi, r)?)))
                } else {
                    PairRule::Value(ModelElement::zero())
                }
            }
            (Line(r), ShiftedLine(k)) | (ShiftedLine(k), Line(r)) => {
                let value = if r == k {
                    let mut d = lattice.delta(error::neg(r)?);
                    d.star = -1;
                    ModelElement::cartan(d)
                } else {
                    ModelElement::basis(Hline(error::sub(r, k)?), 1)
                };
                let sign = if matches!(a, Line(_)) { 1 } else { -1 };
                PairRule::Value(value.checked_scale(sign)?)
            }
            (Hline(r), Line(s)) => {
                PairRule::Value(ModelElement::basis(Line(error::add(r, s)?), chi))
            }
            (Line(s), Hline(r)) => {
                PairRule::Value(ModelElement::basis(Line(error::add(r, s)?), -chi))
            }
            (Tube { branch, length, .. }, Line(_)) | (Line(_), Tube { branch, length, .. }) => {
                let p = self.weight(branch)?;
                if p >= 2 && length % p == 0 {
                    PairRule::Combination
                } else {
                    PairRule::Missing(
                        "tube/line brackets are only known for h_{[i,j],r} combinations",
                    )
                }
            }
            (Line(_), Line(_)) => {
                PairRule::Missing("brackets of two line bundles are not computed")
            }
            (ShiftedLine(_), ShiftedLine(_)) => {
                PairRule::Missing("brackets of two shifted line bundles are not computed")
            }
            (Hline(_), ShiftedLine(_)) | (ShiftedLine(_), Hline(_)) => {
                PairRule::Missing("H_r against shifted line bundles is not computed")
            }
            (Hline(_), Tube { .. }) | (Tube { .. }, Hline(_)) => {
                PairRule::Missing("H_r against tube objects is not computed")
            }
            (Tube { .. }, ShiftedLine(_)) | (ShiftedLine(_), Tube { .. }) => {
                PairRule::Missing("tube objects against shifted line bundles are not computed")
            }
        };
        Ok(rule)
    }

    /// Full-period tube terms grouped by `(branch, r)` where the length is `r p_i`.
    fn full_period_groups(&self, x: &ModelElement) -> Result<TubeGroups> {
        let mut groups = TubeGroups::new();
        for (b, &c) in &x.terms {
            if let Basis::Tube {
                branch,
                top,
                length,
            } = *b
            {
                let p = self.weight(branch)?;
                if p >= 2 && length % p == 0 {
                    groups
                        .entry((branch, length / p))
                        .or_default()
                        .push((top, c));
                }
            }
        }
        Ok(groups)
    }

    /// `[sum_j c_j h_{[i,j],r}, Line(s)]` for a group with coefficients `t_top`.
    ///
    /// Coefficients `t_0..t_{p-1}` come from such a combination exactly when
    /// they sum to zero, and then `c_1 = -t_0`. Only `h_{[i,1],r}` acts, by `-1`.
    fn combination_with_line(
        &self,
        branch: usize,
        r: i64,
        group: &[(i64, i64)],
        s: i64,
    ) -> Result<ModelElement, BracketError> {
        let sum = group
            .iter()
            .try_fold(0i64, |acc, &(_, c)| error::add(acc, c))?;
        if sum != 0 {
            let p = self.weight(branch)?;
            let tube = Basis::Tube {
                branch,
                top: group[0].0,
                length: r * p,
            };
            return Err(BracketError::NotDerivable {
                left: tube.to_string(),
                right: Basis::Line(s).to_string(),
                reason: "tube terms do not assemble into h_{[i,j],r} combinations".into(),
            });
        }
        let t0 = group
            .iter()
            .find(|(top, _)| *top == 0)
            .map_or(0, |&(_, c)| c);
        Ok(ModelElement::basis(Basis::Line(error::add(r, s)?), t0))
    }

    /// The bracket, extended bilinearly from the basis table. Cartan elements
    /// act by `[h_d, b] = -(d, deg b) b`.
    pub fn bracket(
        &self,
        x: &ModelElement,
        y: &ModelElement,
    ) -> Result<ModelElement, BracketError> {
        let lattice = self.system.lattice();
        let mut out = ModelElement::zero();
        if let Some(d) = &x.cartan {
            for (b, &c) in &y.terms {
                let pairing = lattice.symmetric_form(d, &self.basis_degree(b)?)?;
                out.add_term(*b, error::mul(error::neg(pairing)?, c)?)?;
            }
        }
        if let Some(d) = &y.cartan {
            for (b, &c) in &x.terms {
                let pairing = lattice.symmetric_form(d, &self.basis_degree(b)?)?;
                out.add_term(*b, error::mul(pairing, c)?)?;
            }
        }
        for (a, &ca) in &x.terms {
            for (b, &cb) in &y.terms {
                match self.pair_rule(a, b)? {
                    PairRule::Value(v) => out.add_scaled(&v, error::mul(ca, cb)?)?,
                    PairRule::Combination => {}
                    PairRule::Missing(reason) => {
                        return Err(BracketError::NotDerivable {
                            left: a.to_string(),
                            right: b.to_string(),
                            reason: reason.into(),
                        })
                    }
                }
            }
        }
        for ((branch, r), group) in self.full_period_groups(x)? {
            for (b, &cb) in &y.terms {
                if let Basis::Line(s) = *b {
                    let v = self.combination_with_line(branch, r, &group, s)?;
                    out.add_scaled(&v, cb)?;
                }
            }
        }
        for ((branch, r), group) in self.full_period_groups(y)? {
            for (a, &ca) in &x.terms {
                if let Basis::Line(s) = *a {
                    let v = self.combination_with_line(branch, r, &group, s)?;
                    out.add_scaled(&v, error::neg(ca)?)?;
                }
            }
        }
        Ok(out)
    }
}
