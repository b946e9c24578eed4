//! Randomised property suite for the Clifford algebra kernel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::multivector::Multivector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub property: String,
    pub dim: usize,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub const SELFTEST_TOL: f64 = 1e-12;

fn random_mv(rng: &mut ChaCha8Rng, dim: usize) -> Multivector {
    let c = (0..1usize << dim)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    Multivector::new(dim, c).expect("finite coefficients")
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Multivector {
    let c: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    Multivector::vector(&c)
}

fn rel_scalar(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

type Property = fn(&mut ChaCha8Rng, usize) -> f64;

fn associativity(rng: &mut ChaCha8Rng, dim: usize) -> f64 {
    let (a, b, c) = (
        random_mv(rng, dim),
        random_mv(rng, dim),
        random_mv(rng, dim),
    );
    ((&a * &b) * &c).rel_diff(&(&a * (&b * &c)))
}

fn vector_split(rng: &mut ChaCha8Rng, dim: usize) -> f64 {
    let a = random_vector(rng, dim);
    let b = random_mv(rng, dim);
    (&a * &b).rel_diff(&(a.lcontract(&b) + (&a ^ &b)))
}

fn contraction_adjunction(rng: &mut ChaCha8Rng, dim: usize) -> f64 {
    let (x, a, b) = (
        random_mv(rng, dim),
        random_mv(rng, dim),
        random_mv(rng, dim),
    );
    let left = rel_scalar(
        (&x ^ &a).scalar_product(&b),
        x.scalar_product(&a.lcontract(&b)),
    );
    let right = rel_scalar(
        a.scalar_product(&(&b ^ &x)),
        a.rcontract(&b).scalar_product(&x),
    );
    left.max(right)
}

fn bivector_split(rng: &mut ChaCha8Rng, dim: usize) -> f64 {
    let b = random_mv(rng, dim).grade(2);
    let a = random_mv(rng, dim);
    (&b * &a).rel_diff(&(b.lcontract(&a) + b.commutator(&a) + (&b ^ &a)))
}

/// Violation of positive definiteness: negative |A|², a nonzero A with
/// vanishing norm, or disagreement between ⟨A,A⟩ and A∗Aᵗ.
fn positive_definite(rng: &mut ChaCha8Rng, dim: usize) -> f64 {
    let a = random_mv(rng, dim);
    let n2 = a.norm_squared();
    let mut r = (-n2).max(0.0);
    if !a.is_zero() && n2 <= 0.0 {
        r = r.max(1.0);
    }
    r = r.max(rel_scalar(n2, a.scalar_product(&a.reverse())));
    r.max(Multivector::zero(dim).norm_squared())
}

pub const PROPERTIES: [(&str, Property); 5] = [
    ("associativity", associativity),
    ("vector-split", vector_split),
    ("contraction-adjunction", contraction_adjunction),
    ("bivector-split", bivector_split),
    ("positive-definite-norm", positive_definite),
];

/// Runs every property `cases` times in each dimension. Residuals are
/// coefficientwise relative differences.
pub fn run(dims: &[usize], cases: usize, seed: u64) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();
    for (name, prop) in PROPERTIES {
        for &dim in dims {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (dim as u64) << 32);
            let max_residual = (0..cases).map(|_| prop(&mut rng, dim)).fold(0.0, f64::max);
            out.push(PropertyOutcome {
                property: name.to_string(),
                dim,
                cases,
                max_residual,
                tolerance: SELFTEST_TOL,
                pass: max_residual < SELFTEST_TOL,
            });
        }
    }
    out
}
