//! Simple reflections, root classification by height descent, and root
//! enumeration by upward Weyl closure.

use std::collections::HashSet;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{self, Error, Result};
use crate::lattice::{ClassVector, RootLattice};
use crate::weight::{Vertex, WeightType};

/// Flat coefficient vectors of positive roots.
pub type RootSet = HashSet<Vec<i64>>;

/// Default cap on the number of vectors `enumerate_roots` may produce.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NotRoot,
    Real,
    Imaginary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalCase {
    SimpleRoot,
    FundamentalRegion,
    Defect,
}

/// Number of isoclasses of indecomposable sheaves of a given class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Count {
    Zero,
    One,
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    Real,
    Imaginary,
}

impl From<RootKind> for Verdict {
    fn from(k: RootKind) -> Self {
        match k {
            RootKind::Real => Verdict::Real,
            RootKind::Imaginary => Verdict::Imaginary,
        }
    }
}

/// Reflection word `v_1, ..., v_k`; the terminal vector is
/// `s_{v_k} ... s_{v_1}` applied to the input.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ReflectionWord(pub Vec<Vertex>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Terminal {
    pub case: TerminalCase,
    pub vector: ClassVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootClassification {
    pub verdict: Verdict,
    pub cone_positive: bool,
    pub count: Count,
    pub word: ReflectionWord,
    pub terminal: Terminal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub case: TerminalCase,
    pub word: ReflectionWord,
    pub terminal: ClassVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumeratedRoot {
    pub vector: ClassVector,
    pub kind: RootKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Zero,
    Positive,
    Negative,
    Mixed,
}

fn sign_of(x: &[i64]) -> Sign {
    let mut pos = false;
    let mut neg = false;
    for &c in x {
        pos |= c > 0;
        neg |= c < 0;
        if pos && neg {
            return Sign::Mixed;
        }
    }
    match (pos, neg) {
        (false, false) => Sign::Zero,
        (true, false) => Sign::Positive,
        (false, true) => Sign::Negative,
        (true, true) => Sign::Mixed,
    }
}

struct Descent {
    verdict: Verdict,
    case: TerminalCase,
    /// `None` when the input is already terminal.
    terminal: Option<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    lattice: RootLattice,
}

impl RootSystem {
    pub fn new(weights: WeightType) -> Self {
        Self {
            lattice: RootLattice::new(weights),
        }
    }

    pub fn from_lattice(lattice: RootLattice) -> Self {
        Self { lattice }
    }

    pub fn lattice(&self) -> &RootLattice {
        &self.lattice
    }

    fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// `(x, alpha_v)` for flat coefficients.
    fn pairing(&self, x: &[i64], v: usize) -> Result<i64> {
        let mut acc = error::mul(2, x[v])?;
        for &w in self.lattice.graph().neighbors(v) {
            acc = error::sub(acc, x[w])?;
        }
        Ok(acc)
    }

    /// `s_v(phi) = phi - (phi, alpha_v) alpha_v`.
    pub fn reflect(&self, v: Vertex, phi: &ClassVector) -> Result<ClassVector> {
        let idx = self.lattice.graph().require(v)?;
        let mut x = self.lattice.flatten(phi)?;
        let p = self.pairing(&x, idx)?;
        x[idx] = error::sub(x[idx], p)?;
        Ok(self.lattice.from_flat(&x, phi.delta))
    }

    /// Connectivity of the support of a nonzero, sign-homogeneous vector.
    ///
    /// On a star this means: with the centre in the support every arm's support
    /// is an initial segment; without it the support is one interval of one arm.
    fn support_connected(&self, x: &[i64]) -> bool {
        let g = self.lattice.graph();
        if x[0] != 0 {
            for b in 0..g.arm_count() {
                if let (Some(start), len) = g.arm(b) {
                    let arm = &x[start..start + len];
                    let first_gap = arm.iter().position(|&c| c == 0).unwrap_or(len);
                    if arm[first_gap..].iter().any(|&c| c != 0) {
                        return false;
                    }
                }
            }
            true
        } else {
            let mut arms_used = 0;
            for b in 0..g.arm_count() {
                if let (Some(start), len) = g.arm(b) {
                    let arm = &x[start..start + len];
                    let Some(first) = arm.iter().position(|&c| c != 0) else {
                        continue;
                    };
                    arms_used += 1;
                    let last = arm.iter().rposition(|&c| c != 0).unwrap();
                    if arms_used > 1 || arm[first..=last].contains(&0) {
                        return false;
                    }
                }
            }
            arms_used == 1
        }
    }

    /// Height descent on a nonzero nonnegative vector with connected support.
    ///
    /// Reflects at the first vertex (canonical order) with positive pairing
    /// until the vector is a simple root, lies in the fundamental region, or
    /// leaves the set of positive vectors with connected support.
    fn descend(
        &self,
        x: &mut [i64],
        mut word: Option<&mut Vec<usize>>,
    ) -> Result<(Verdict, TerminalCase)> {
        loop {
            if x.iter().sum::<i64>() == 1 {
                return Ok((Verdict::Real, TerminalCase::SimpleRoot));
            }
            let mut step = None;
            for v in 0..x.len() {
                let p = self.pairing(x, v)?;
                if p > 0 {
                    step = Some((v, p));
                    break;
                }
            }
            let Some((v, p)) = step else {
                return Ok((Verdict::Imaginary, TerminalCase::FundamentalRegion));
            };
            // Height drops by exactly p > 0 here, so the loop terminates.
            x[v] = error::sub(x[v], p)?;
            if let Some(w) = word.as_deref_mut() {
                w.push(v);
            }
            if x[v] < 0 || !self.support_connected(x) {
                return Ok((Verdict::NotRoot, TerminalCase::Defect));
            }
        }
    }

    fn classify_flat(&self, alpha: &[i64], word: Option<&mut Vec<usize>>) -> Result<Descent> {
        let defect = Descent {
            verdict: Verdict::NotRoot,
            case: TerminalCase::Defect,
            terminal: None,
        };
        let sign = sign_of(alpha);
        match sign {
            Sign::Zero | Sign::Mixed => return Ok(defect),
            Sign::Positive | Sign::Negative => {}
        }
        if !self.support_connected(alpha) {
            return Ok(defect);
        }
        let mut buf: Vec<i64> = if sign == Sign::Negative {
            alpha
                .iter()
                .map(|&c| error::neg(c))
                .collect::<Result<_>>()?
        } else {
            alpha.to_vec()
        };
        let (verdict, case) = self.descend(&mut buf, word)?;
        if sign == Sign::Negative {
            for c in buf.iter_mut() {
                *c = -*c;
            }
        }
        Ok(Descent {
            verdict,
            case,
            terminal: Some(buf),
        })
    }

    /// Root verdict of `alpha + delta * delta` from flat coefficients. This is
    /// the allocation-light path behind [`RootSystem::classify_hat`].
    pub fn verdict_flat(&self, alpha: &[i64], delta: i64) -> Result<Verdict> {
        if alpha.len() != self.rank() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for {} vertices",
                alpha.len(),
                self.rank()
            )));
        }
        match sign_of(alpha) {
            Sign::Zero => Ok(if delta != 0 {
                Verdict::Imaginary
            } else {
                Verdict::NotRoot
            }),
            Sign::Mixed => Ok(Verdict::NotRoot),
            Sign::Positive | Sign::Negative => Ok(self.classify_flat(alpha, None)?.verdict),
        }
    }

    fn reduce_flat(&self, phi: &ClassVector) -> Result<Reduction> {
        let alpha = self.lattice.flatten(phi)?;
        if alpha.iter().all(|&c| c == 0) {
            let case = if phi.delta != 0 {
                TerminalCase::FundamentalRegion
            } else {
                TerminalCase::Defect
            };
            return Ok(Reduction {
                case,
                word: ReflectionWord::default(),
                terminal: phi.clone(),
            });
        }
        let mut word = Vec::new();
        let d = self.classify_flat(&alpha, Some(&mut word))?;
        let vertices = self.lattice.graph().vertices();
        let terminal = match d.terminal {
            Some(t) => self.lattice.from_flat(&t, phi.delta),
            None => phi.clone(),
        };
        Ok(Reduction {
            case: d.case,
            word: ReflectionWord(word.into_iter().map(|v| vertices[v]).collect()),
            terminal,
        })
    }

    /// Reduces `phi` by simple reflections to `+-alpha_v + r delta`, to
    /// `alpha + r delta` with `alpha` in the fundamental region, or to a
    /// defect (mixed signs, disconnected support, or zero).
    pub fn reduce_to_case(&self, phi: &ClassVector) -> Result<Reduction> {
        self.reduce_flat(phi)
    }

    fn verdict_of_case(case: TerminalCase) -> Verdict {
        match case {
            TerminalCase::SimpleRoot => Verdict::Real,
            TerminalCase::FundamentalRegion => Verdict::Imaginary,
            TerminalCase::Defect => Verdict::NotRoot,
        }
    }

    fn count_for(verdict: Verdict, cone_positive: bool) -> Count {
        match (verdict, cone_positive) {
            (Verdict::Real, true) => Count::One,
            (Verdict::Imaginary, true) => Count::Infinite,
            _ => Count::Zero,
        }
    }

    /// Classifies a vector with zero `delta` coefficient as a root of the
    /// Kac-Moody algebra of the star graph.
    pub fn classify_finite_part(&self, alpha: &ClassVector) -> Result<RootClassification> {
        if !alpha.is_delta_free() {
            return Err(Error::NotDeltaFree);
        }
        let red = self.reduce_flat(alpha)?;
        // The zero vector is not a root; `reduce_flat` only promotes it when delta != 0.
        let verdict = Self::verdict_of_case(red.case);
        let cone_positive = self.lattice.cone_contains(alpha)?;
        Ok(RootClassification {
            verdict,
            cone_positive,
            count: Self::count_for(verdict, cone_positive),
            word: red.word,
            terminal: Terminal {
                case: red.case,
                vector: red.terminal,
            },
        })
    }

    /// Classifies `phi = alpha + r delta` as a root of the loop algebra:
    /// a root iff `alpha` is a root, or `alpha = 0` and `r != 0`.
    pub fn classify_hat(&self, phi: &ClassVector) -> Result<RootClassification> {
        let red = self.reduce_flat(phi)?;
        let verdict = Self::verdict_of_case(red.case);
        let cone_positive = self.lattice.cone_contains(phi)?;
        Ok(RootClassification {
            verdict,
            cone_positive,
            count: Self::count_for(verdict, cone_positive),
            word: red.word,
            terminal: Terminal {
                case: red.case,
                vector: red.terminal,
            },
        })
    }

    /// Zero, one or infinitely many indecomposable sheaves of class `phi`:
    /// one for positive real roots, infinitely many for positive imaginary
    /// roots, where positive means membership in the sheaf cone.
    pub fn indecomposable_count(&self, phi: &ClassVector) -> Result<Count> {
        let alpha = self.lattice.flatten(phi)?;
        let verdict = self.verdict_flat(&alpha, phi.delta)?;
        Ok(Self::count_for(verdict, self.lattice.cone_contains(phi)?))
    }

    /// Nonzero nonnegative vectors in the fundamental region of height at most
    /// `max_height`: connected support and `(x, alpha_v) <= 0` for every `v`.
    ///
    /// On a star the region conditions force every arm to be a convex,
    /// nonincreasing sequence starting at the centre coefficient and ending
    /// at an implicit zero, with the centre at most half the sum of its
    /// neighbours.
    pub fn fundamental_region(&self, max_height: i64) -> Vec<Vec<i64>> {
        let g = self.lattice.graph();
        let arms: Vec<(usize, usize)> = (0..g.arm_count())
            .filter_map(|b| match g.arm(b) {
                (Some(start), len) => Some((start, len)),
                (None, _) => None,
            })
            .collect();
        let mut out = Vec::new();
        for m in 1..=max_height {
            let budget = max_height - m;
            let choices: Vec<Vec<Vec<i64>>> = arms
                .iter()
                .map(|&(_, len)| convex_arms(m, len, budget))
                .collect();
            let mut current = vec![0; self.rank()];
            current[0] = m;
            product_arms(&arms, &choices, 0, budget, &mut current, &mut |x| {
                let neighbour_sum: i64 = g.neighbors(0).iter().map(|&w| x[w]).sum();
                if 2 * m <= neighbour_sum {
                    out.push(x.to_vec());
                }
            });
        }
        out
    }

    /// Positive roots of the star graph's Kac-Moody algebra with height at most
    /// `max_height`, split into real and imaginary.
    ///
    /// Real roots: upward closure of the simple roots. Imaginary roots: upward
    /// closure of the fundamental region. Every positive root of height `h`
    /// descends to a seed through roots of smaller height, so reversing those
    /// paths reaches all roots without exceeding the bound.
    pub fn positive_roots(&self, max_height: i64, limit: usize) -> Result<(RootSet, RootSet)> {
        let n = self.rank();
        let simples = (0..n).map(|v| {
            let mut x = vec![0; n];
            x[v] = 1;
            x
        });
        let real = if max_height >= 1 {
            self.upward_closure(simples.collect(), max_height, limit)?
        } else {
            HashSet::new()
        };
        let imaginary =
            self.upward_closure(self.fundamental_region(max_height), max_height, limit)?;
        Ok((real, imaginary))
    }

    fn upward_closure(
        &self,
        seeds: Vec<Vec<i64>>,
        max_height: i64,
        limit: usize,
    ) -> Result<HashSet<Vec<i64>>> {
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut frontier = Vec::new();
        for s in seeds {
            if seen.insert(s.clone()) {
                frontier.push(s);
            }
        }
        while let Some(x) = frontier.pop() {
            let height: i64 = x.iter().sum();
            for v in 0..x.len() {
                let p = self.pairing(&x, v)?;
                if p < 0 && height - p <= max_height {
                    let mut y = x.clone();
                    y[v] -= p;
                    if seen.insert(y.clone()) {
                        if seen.len() > limit {
                            return Err(Error::ResourceBound {
                                limit,
                                what: "roots",
                            });
                        }
                        frontier.push(y);
                    }
                }
            }
        }
        Ok(seen)
    }

    pub fn enumerate_roots(
        &self,
        max_height: i64,
        delta: RangeInclusive<i64>,
    ) -> Result<Vec<EnumeratedRoot>> {
        self.enumerate_roots_with_limit(max_height, delta, DEFAULT_ENUMERATION_LIMIT)
    }

    /// All roots `alpha + r delta` of the loop algebra with `alpha` of height
    /// at most `max_height` and `r` in `delta`, in lexicographic order.
    pub fn enumerate_roots_with_limit(
        &self,
        max_height: i64,
        delta: RangeInclusive<i64>,
        limit: usize,
    ) -> Result<Vec<EnumeratedRoot>> {
        if max_height < 1 {
            return Err(Error::IndexOutOfRange(format!(
                "height bound {max_height} < 1"
            )));
        }
        let (real, imaginary) = self.positive_roots(max_height, limit)?;
        let width = if delta.is_empty() {
            0
        } else {
            (delta.end() - delta.start() + 1) as usize
        };
        let total = (2 * (real.len() + imaginary.len()) + 1).saturating_mul(width);
        if total > limit {
            return Err(Error::ResourceBound {
                limit,
                what: "enumerated roots",
            });
        }
        let mut keyed: Vec<(Vec<i64>, i64, RootKind)> = Vec::with_capacity(total);
        let tagged = real
            .iter()
            .map(|x| (x, RootKind::Real))
            .chain(imaginary.iter().map(|x| (x, RootKind::Imaginary)));
        for (x, kind) in tagged {
            let neg: Vec<i64> = x.iter().map(|c| -c).collect();
            for r in delta.clone() {
                keyed.push((x.clone(), r, kind));
                keyed.push((neg.clone(), r, kind));
            }
        }
        let zero = vec![0; self.rank()];
        for r in delta.clone().filter(|&r| r != 0) {
            keyed.push((zero.clone(), r, RootKind::Imaginary));
        }
        keyed.sort();
        Ok(keyed
            .into_iter()
            .map(|(x, r, kind)| EnumeratedRoot {
                vector: self.lattice.from_flat(&x, r),
                kind,
            })
            .collect())
    }
}

/// Convex nonincreasing sequences `x_1..x_len` with `x_0 = m`, implicit
/// `x_{len+1} = 0`, and sum at most `budget`.
fn convex_arms(m: i64, len: usize, budget: i64) -> Vec<Vec<i64>> {
    fn go(
        prev2: i64,
        prev1: i64,
        left: usize,
        budget: i64,
        acc: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if left == 0 {
            // Convexity at the last vertex against the implicit trailing zero.
            if acc.is_empty() || 2 * prev1 <= prev2 {
                out.push(acc.clone());
            }
            return;
        }
        let lo = if acc.is_empty() {
            0
        } else {
            (2 * prev1 - prev2).max(0)
        };
        let hi = prev1.min(budget);
        for x in lo..=hi {
            acc.push(x);
            go(prev1, x, left - 1, budget - x, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    let mut acc = Vec::with_capacity(len);
    go(0, m, len, budget, &mut acc, &mut out);
    out
}

fn product_arms(
    arms: &[(usize, usize)],
    choices: &[Vec<Vec<i64>>],
    idx: usize,
    budget: i64,
    current: &mut Vec<i64>,
    emit: &mut impl FnMut(&[i64]),
) {
    if idx == arms.len() {
        emit(current);
        return;
    }
    let (start, len) = arms[idx];
    for seq in &choices[idx] {
        let used: i64 = seq.iter().sum();
        if used > budget {
            continue;
        }
        current[start..start + len].copy_from_slice(seq);
        product_arms(arms, choices, idx + 1, budget - used, current, emit);
    }
    current[start..start + len].iter_mut().for_each(|c| *c = 0);
}
