//! Laplace–Beltrami operator from the intrinsic coordinate formula
//! Δφ = (1/√g) ∂ᵢ(√g gⁱʲ ∂ⱼφ), applied to every coefficient of a
//! multivector field.
//!
//! Shares nothing with the frame-based vector derivative beyond the chart's
//! Jacobian, so it is an independent oracle for identities relating ◇ and Δ.

use nalgebra::DMatrix;

use crate::calculus::MultivectorField;
use crate::chart::{jacobian_at, FDConfig};
use crate::error::{GeoError, Result};
use crate::Multivector;

fn coordinate_shift(u: &[f64], axis: usize, t: f64) -> Vec<f64> {
    let mut p = u.to_vec();
    p[axis] += t;
    p
}

fn metric_data(
    field: &MultivectorField<'_>,
    u: &[f64],
    rank_tol: f64,
) -> Result<(f64, DMatrix<f64>)> {
    let j = jacobian_at(field.chart(), u);
    let g = j.transpose() * &j;
    let det = g.determinant();
    if !(det > rank_tol * rank_tol) {
        return Err(GeoError::RankDeficient(det.max(0.0).sqrt()));
    }
    let inv = g.try_inverse().ok_or(GeoError::RankDeficient(0.0))?;
    Ok((det.sqrt(), inv))
}

fn diff(a: Multivector, b: Multivector, h: f64) -> Multivector {
    (a - b) * (0.5 / h)
}

/// √g Σⱼ gⁱʲ ∂ⱼF at `p`, inner step `h`.
fn flux(
    field: &MultivectorField<'_>,
    p: &[f64],
    axis: usize,
    h: f64,
    rank_tol: f64,
) -> Result<Multivector> {
    let m = p.len();
    let (sqrt_g, ginv) = metric_data(field, p, rank_tol)?;
    let mut acc = Multivector::zero(field.chart().ambient_dim());
    for j in 0..m {
        let w = sqrt_g * ginv[(axis, j)];
        if w == 0.0 {
            continue;
        }
        let d = diff(
            field.eval(&coordinate_shift(p, j, h))?,
            field.eval(&coordinate_shift(p, j, -h))?,
            h,
        );
        acc += d * w;
    }
    Ok(acc)
}

/// Δ_ℳ F, coefficientwise. Inner coordinate step `h1`, outer `h2`.
pub fn laplace_beltrami(
    field: &MultivectorField<'_>,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<Multivector> {
    let m = u.len();
    let (sqrt_g, _) = metric_data(field, u, cfg.rank_tol)?;
    let mut acc = Multivector::zero(field.chart().ambient_dim());
    for i in 0..m {
        let plus = flux(
            field,
            &coordinate_shift(u, i, cfg.h2),
            i,
            cfg.h1,
            cfg.rank_tol,
        )?;
        let minus = flux(
            field,
            &coordinate_shift(u, i, -cfg.h2),
            i,
            cfg.h1,
            cfg.rank_tol,
        )?;
        acc += diff(plus, minus, cfg.h2);
    }
    Ok(acc * (1.0 / sqrt_g))
}
