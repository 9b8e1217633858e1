//! Sweep of the loop-algebra relations over a window of loop indices.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{BracketError, GeneratorSymbol, LoopModel, ModelElement};
use crate::error::Result;
use crate::weight::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailedInstance {
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
}

/// Instances of one relation family that could not be evaluated because a
/// bracket falls outside the computed table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedFamily {
    pub family: String,
    pub vertices: String,
    pub reason: String,
    pub instances: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub verified: usize,
    pub failed: Vec<FailedInstance>,
    pub not_derivable: Vec<SkippedFamily>,
}

impl RelationReport {
    pub fn skipped(&self) -> usize {
        self.not_derivable.iter().map(|s| s.instances).sum()
    }

    pub fn is_success(&self) -> bool {
        self.failed.is_empty()
    }
}

const HH: &str = "[h_{i,k}, h_{j,l}] = k d_{k,-l} a_ij c";
const EF: &str = "[e_{i,k}, f_{j,l}] = d_ij (h_{i,k+l} + k d_{k,-l} c)";
const HE: &str = "[h_{i,k}, e_{j,l}] = a_ij e_{j,k+l}";
const HF: &str = "[h_{i,k}, f_{j,l}] = -a_ij f_{j,k+l}";
const EE: &str = "[e_{i,k}, e_{i,l}] = 0";
const FF: &str = "[f_{i,k}, f_{i,l}] = 0";
const CENTRAL: &str = "[c, x] = 0";
const SERRE_E: &str = "ad(e_{i,k_1})..ad(e_{i,k_n}) e_{j,l} = 0, n = 1 - a_ij";
const SERRE_F: &str = "ad(f_{i,k_1})..ad(f_{i,k_n}) f_{j,l} = 0, n = 1 - a_ij";

fn kind(v: Vertex) -> &'static str {
    match v {
        Vertex::Star => "*",
        Vertex::Arm { .. } => "arm",
    }
}

struct Sweep<'a> {
    model: &'a LoopModel,
    verified: usize,
    failed: Vec<FailedInstance>,
    skipped: BTreeMap<(&'static str, String, String), usize>,
}

impl Sweep<'_> {
    fn gen(&self, g: GeneratorSymbol) -> Result<ModelElement> {
        self.model.model_of_generator(g)
    }

    fn record(
        &mut self,
        family: &'static str,
        vertices: String,
        relation: impl FnOnce() -> String,
        lhs: std::result::Result<ModelElement, BracketError>,
        rhs: &ModelElement,
    ) -> Result<()> {
        match lhs {
            Ok(lhs) if lhs == *rhs => self.verified += 1,
            Ok(lhs) => self.failed.push(FailedInstance {
                relation: relation(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            }),
            Err(BracketError::NotDerivable { reason, .. }) => {
                *self.skipped.entry((family, vertices, reason)).or_insert(0) += 1;
            }
            Err(BracketError::Lattice(e)) => return Err(e),
        }
        Ok(())
    }
}

impl LoopModel {
    /// Checks every relation instance with loop indices in `[-k, k]`.
    pub fn check_loop_relations(&self, truncation: i64) -> Result<RelationReport> {
        use GeneratorSymbol::{E, F, H};
        let graph = self.system.lattice().graph().clone();
        let verts: Vec<(usize, Vertex)> = graph.vertices().iter().copied().enumerate().collect();
        let window: Vec<i64> = (-truncation..=truncation).collect();
        let c = self.model_of_generator(GeneratorSymbol::C)?;
        let mut s = Sweep {
            model: self,
            verified: 0,
            failed: Vec::new(),
            skipped: BTreeMap::new(),
        };

        for &(a, vi) in &verts {
            for &(b, vj) in &verts {
                let aij = graph.cartan_entry(a, b);
                let pair = format!("i={}, j={}", kind(vi), kind(vj));
                for &k in &window {
                    let hik = s.gen(H(vi, k))?;
                    let eik = s.gen(E(vi, k))?;
                    for &l in &window {
                        let ejl = s.gen(E(vj, l))?;
                        let fjl = s.gen(F(vj, l))?;

                        let central = if k == -l { k * aij } else { 0 };
                        let rhs = c.checked_scale(central)?;
                        let lhs = self.bracket(&hik, &s.gen(H(vj, l))?);
                        let label = || format!("[h_{{{vi},{k}}}, h_{{{vj},{l}}}] = {central} c");
                        s.record(HH, pair.clone(), label, lhs, &rhs)?;

                        let rhs = if a == b {
                            let central = if k == -l { k } else { 0 };
                            s.gen(H(vi, k + l))?
                                .checked_add(&c.checked_scale(central)?)?
                        } else {
                            ModelElement::zero()
                        };
                        let lhs = self.bracket(&eik, &fjl);
                        let label = || format!("[e_{{{vi},{k}}}, f_{{{vj},{l}}}]");
                        s.record(EF, pair.clone(), label, lhs, &rhs)?;

                        let rhs = s.gen(E(vj, k + l))?.checked_scale(aij)?;
                        let lhs = self.bracket(&hik, &ejl);
                        let label = || format!("[h_{{{vi},{k}}}, e_{{{vj},{l}}}]");
                        s.record(HE, pair.clone(), label, lhs, &rhs)?;

                        let rhs = s.gen(F(vj, k + l))?.checked_scale(-aij)?;
                        let lhs = self.bracket(&hik, &fjl);
                        let label = || format!("[h_{{{vi},{k}}}, f_{{{vj},{l}}}]");
                        s.record(HF, pair.clone(), label, lhs, &rhs)?;
                    }
                }
            }
        }

        let zero = ModelElement::zero();
        for &(_, v) in &verts {
            let single = format!("i={}", kind(v));
            for &k in &window {
                for &l in &window {
                    let lhs = self.bracket(&s.gen(E(v, k))?, &s.gen(E(v, l))?);
                    let label = || format!("[e_{{{v},{k}}}, e_{{{v},{l}}}]");
                    s.record(EE, single.clone(), label, lhs, &zero)?;
                    let lhs = self.bracket(&s.gen(F(v, k))?, &s.gen(F(v, l))?);
                    let label = || format!("[f_{{{v},{k}}}, f_{{{v},{l}}}]");
                    s.record(FF, single.clone(), label, lhs, &zero)?;
                }
                for g in [E(v, k), F(v, k), H(v, k)] {
                    let lhs = self.bracket(&c, &s.gen(g)?);
                    s.record(
                        CENTRAL,
                        format!("x at {}", kind(v)),
                        || format!("[c, {g}]"),
                        lhs,
                        &zero,
                    )?;
                }
            }
        }

        for &(a, vi) in &verts {
            for &(b, vj) in &verts {
                if a == b {
                    continue;
                }
                let n = (1 - graph.cartan_entry(a, b)) as u32;
                let pair = format!("i={}, j={}", kind(vi), kind(vj));
                let tuples = (window.len() as u64).pow(n + 1);
                for code in 0..tuples {
                    let mut rest = code;
                    let mut idx = Vec::with_capacity(n as usize + 1);
                    for _ in 0..=n {
                        idx.push(window[(rest % window.len() as u64) as usize]);
                        rest /= window.len() as u64;
                    }
                    let (l, ks) = idx.split_last().unwrap();
                    for (family, pos) in [(SERRE_E, true), (SERRE_F, false)] {
                        let make = |v: Vertex, r: i64| if pos { E(v, r) } else { F(v, r) };
                        let lhs = ks.iter().rev().try_fold(s.gen(make(vj, *l))?, |acc, &k| {
                            self.bracket(&s.gen(make(vi, k))?, &acc)
                        });
                        let label = || {
                            let head: Vec<String> =
                                ks.iter().map(|&k| format!("ad({})", make(vi, k))).collect();
                            format!("{} {}", head.join(""), make(vj, *l))
                        };
                        s.record(family, pair.clone(), label, lhs, &zero)?;
                    }
                }
            }
        }

        let not_derivable = s
            .skipped
            .into_iter()
            .map(|((family, vertices, reason), instances)| SkippedFamily {
                family: family.to_string(),
                vertices,
                reason,
                instances,
            })
            .collect();
        Ok(RelationReport {
            verified: s.verified,
            failed: s.failed,
            not_derivable,
        })
    }
}
