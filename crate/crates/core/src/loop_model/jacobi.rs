//! Randomised Jacobi and antisymmetry checks on the tube and Cartan part.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{BracketError, LoopModel, ModelElement};
use crate::error::{Error, Result};
use crate::lattice::ClassVector;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobiReport {
    pub samples: usize,
    pub jacobi_failures: usize,
    pub antisymmetry_failures: usize,
    pub first_failure: Option<String>,
}

impl JacobiReport {
    pub fn is_success(&self) -> bool {
        self.jacobi_failures == 0 && self.antisymmetry_failures == 0
    }
}

fn lattice_error(e: BracketError) -> Error {
    match e {
        BracketError::Lattice(e) => e,
        // Tube and Cartan symbols always bracket inside the table.
        BracketError::NotDerivable {
            left,
            right,
            reason,
        } => {
            unreachable!("[{left}, {right}] left the tube family: {reason}")
        }
    }
}

impl LoopModel {
    fn random_cartan(&self, rng: &mut ChaCha8Rng) -> ClassVector {
        let mut d = self.system.lattice().zero();
        d.star = rng.gen_range(-2..=2);
        for arm in &mut d.branch {
            for x in arm.iter_mut() {
                *x = rng.gen_range(-2..=2);
            }
        }
        d.delta = rng.gen_range(-2..=2);
        d
    }

    /// One to three tube symbols with lengths in `[-max_length, max_length]`,
    /// plus a Cartan part with probability one half.
    fn random_element(&self, rng: &mut ChaCha8Rng, max_length: i64) -> Result<ModelElement> {
        let weights = self.system.lattice().weights().weights().to_vec();
        let mut x = ModelElement::zero();
        let terms = if weights.is_empty() {
            0
        } else {
            rng.gen_range(1..=3)
        };
        for _ in 0..terms {
            let branch = rng.gen_range(1..=weights.len());
            let top = rng.gen_range(0..weights[branch - 1] as i64);
            let mut length = rng.gen_range(1..=max_length);
            if rng.gen_bool(0.5) {
                length = -length;
            }
            let coeff = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
            x.add_scaled(
                &ModelElement::basis(self.tube(branch, top, length)?, 1),
                coeff,
            )?;
        }
        if terms == 0 || rng.gen_bool(0.5) {
            x.add_scaled(&ModelElement::cartan(self.random_cartan(rng)), 1)?;
        }
        Ok(x)
    }

    /// Samples `samples` triples from the span of tube symbols and Cartan
    /// elements and checks that the cyclic Jacobi sum vanishes and that
    /// `[x, y] = -[y, x]`.
    pub fn check_jacobi(&self, samples: usize, seed: u64, max_length: i64) -> Result<JacobiReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = JacobiReport {
            samples,
            jacobi_failures: 0,
            antisymmetry_failures: 0,
            first_failure: None,
        };
        let br = |a: &ModelElement, b: &ModelElement| self.bracket(a, b).map_err(lattice_error);
        for _ in 0..samples {
            let x = self.random_element(&mut rng, max_length)?;
            let y = self.random_element(&mut rng, max_length)?;
            let z = self.random_element(&mut rng, max_length)?;
            let mut sum = br(&x, &br(&y, &z)?)?;
            sum.add_scaled(&br(&y, &br(&z, &x)?)?, 1)?;
            sum.add_scaled(&br(&z, &br(&x, &y)?)?, 1)?;
            if !sum.is_zero() {
                report.jacobi_failures += 1;
                report
                    .first_failure
                    .get_or_insert_with(|| format!("jacobi x={x} y={y} z={z} sum={sum}"));
            }
            let anti = br(&x, &y)?.checked_add(&br(&y, &x)?)?;
            if !anti.is_zero() {
                report.antisymmetry_failures += 1;
                report
                    .first_failure
                    .get_or_insert_with(|| format!("antisymmetry x={x} y={y} sum={anti}"));
            }
        }
        Ok(report)
    }
}
