//! Parametric charts φ: U ⊂ ℝᵐ → ℝᴺ and orthonormal frames along them.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::blade::{
    modified_gram_schmidt, orthogonalize, pivoted_basis_completion, OrthoFrame, UnitBlade, Vector,
};
use crate::error::{GeoError, Result};

/// Step of the finite-difference Jacobian used when a chart has no
/// analytic one.
pub const JACOBIAN_FD_STEP: f64 = 1e-6;

/// Axis-aligned parameter box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Domain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(GeoError::InvalidParameter(
                "domain bounds must be non-empty and of equal length".into(),
            ));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
            return Err(GeoError::InvalidParameter(format!(
                "empty domain {lower:?}..{upper:?}"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        u.len() == self.dim()
            && u.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (l, h))| *l <= *x && *x <= *h)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, h)| 0.5 * (l + h))
            .collect()
    }

    /// Shrinks every side by `d`.
    pub fn inset(&self, d: f64) -> Result<Domain> {
        Domain::new(
            self.lower.iter().map(|l| l + d).collect(),
            self.upper.iter().map(|h| h - d).collect(),
        )
    }

    /// Tensor grid with `counts[i]` points along axis i (the last count is
    /// repeated for missing axes) spanning the box inset by `inset`. A count
    /// of 1 places the point at the centre.
    pub fn grid(&self, counts: &[usize], inset: f64) -> Result<Vec<Vec<f64>>> {
        let inner = self.inset(inset)?;
        let m = self.dim();
        let Some(&last) = counts.last() else {
            return Err(GeoError::InvalidParameter("empty grid counts".into()));
        };
        let counts: Vec<usize> = (0..m).map(|i| *counts.get(i).unwrap_or(&last)).collect();
        if counts.contains(&0) {
            return Err(GeoError::InvalidParameter(
                "grid counts must be positive".into(),
            ));
        }
        let axes: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let (l, h, c) = (inner.lower[i], inner.upper[i], counts[i]);
                if c == 1 {
                    vec![0.5 * (l + h)]
                } else {
                    (0..c)
                        .map(|k| l + (h - l) * k as f64 / (c - 1) as f64)
                        .collect()
                }
            })
            .collect();
        let mut points = vec![Vec::new()];
        for axis in &axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |x| {
                        let mut q = p.clone();
                        q.push(*x);
                        q
                    })
                })
                .collect();
        }
        Ok(points)
    }
}

/// A parametrised m-dimensional submanifold of ℝᴺ.
pub trait Chart: Send + Sync {
    fn intrinsic_dim(&self) -> usize;
    fn ambient_dim(&self) -> usize;
    fn domain(&self) -> &Domain;
    fn eval(&self, u: &[f64]) -> Vector;

    /// Analytic N×m Jacobian, if known. Second-order quantities are only
    /// accurate for charts that provide one.
    fn jacobian(&self, _u: &[f64]) -> Option<DMatrix<f64>> {
        None
    }

    fn codim(&self) -> usize {
        self.ambient_dim() - self.intrinsic_dim()
    }
}

type EvalFn = Box<dyn Fn(&[f64]) -> Vector + Send + Sync>;
type JacFn = Box<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

/// Chart assembled from closures.
pub struct FnChart {
    m: usize,
    n: usize,
    domain: Domain,
    eval: EvalFn,
    jac: Option<JacFn>,
}

impl FnChart {
    pub fn new(
        ambient_dim: usize,
        domain: Domain,
        eval: impl Fn(&[f64]) -> Vector + Send + Sync + 'static,
    ) -> Self {
        Self {
            m: domain.dim(),
            n: ambient_dim,
            domain,
            eval: Box::new(eval),
            jac: None,
        }
    }

    pub fn with_jacobian(
        mut self,
        jac: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        self.jac = Some(Box::new(jac));
        self
    }
}

impl Chart for FnChart {
    fn intrinsic_dim(&self) -> usize {
        self.m
    }
    fn ambient_dim(&self) -> usize {
        self.n
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn eval(&self, u: &[f64]) -> Vector {
        (self.eval)(u)
    }
    fn jacobian(&self, u: &[f64]) -> Option<DMatrix<f64>> {
        self.jac.as_ref().map(|j| j(u))
    }
}

/// Finite-difference settings shared by every derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FDConfig {
    /// Step of first derivatives (arc length along the manifold).
    pub h1: f64,
    /// Step of the outer derivative in nested (second-order) stencils.
    pub h2: f64,
    /// One level of Richardson extrapolation on every central difference.
    pub richardson: bool,
    /// Absolute lower bound for the smallest singular value of a Jacobian.
    pub rank_tol: f64,
    /// Tolerance of frame orthogonality and orientation checks.
    pub frame_tol: f64,
}

impl Default for FDConfig {
    fn default() -> Self {
        Self {
            h1: 1e-5,
            h2: 1e-4,
            richardson: false,
            rank_tol: 1e-8,
            frame_tol: 1e-9,
        }
    }
}

impl FDConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h1 > 0.0 && self.h1 < 1.0) {
            return Err(GeoError::InvalidParameter(format!(
                "h1 = {} not in (0, 1)",
                self.h1
            )));
        }
        if !(self.h2 > 0.0) {
            return Err(GeoError::InvalidParameter(format!(
                "h2 = {} must be positive",
                self.h2
            )));
        }
        Ok(())
    }

    /// Same settings with a different first-derivative step.
    pub fn with_h1(self, h1: f64) -> Self {
        Self { h1, ..self }
    }
}

/// Jacobian at `u`: analytic when the chart has one, otherwise central
/// differences.
pub fn jacobian_at(chart: &dyn Chart, u: &[f64]) -> DMatrix<f64> {
    if let Some(j) = chart.jacobian(u) {
        return j;
    }
    let (n, m) = (chart.ambient_dim(), chart.intrinsic_dim());
    let mut j = DMatrix::zeros(n, m);
    let mut p = u.to_vec();
    for c in 0..m {
        p[c] = u[c] + JACOBIAN_FD_STEP;
        let fp = chart.eval(&p);
        p[c] = u[c] - JACOBIAN_FD_STEP;
        let fm = chart.eval(&p);
        p[c] = u[c];
        j.set_column(c, &((fp - fm) / (2.0 * JACOBIAN_FD_STEP)));
    }
    j
}

/// Orthonormal tangent and normal frames with the Gauss map at one point.
#[derive(Debug, Clone)]
pub struct FramePoint {
    pub u: Vec<f64>,
    pub x: Vector,
    pub tangent: OrthoFrame,
    pub normal: OrthoFrame,
    /// 𝔗 = τ₁∧…∧τ_m.
    pub gauss: UnitBlade,
    /// 𝒩 = ★𝔗.
    pub normal_blade: UnitBlade,
    pub jacobian: DMatrix<f64>,
    /// Gram matrix JᵀJ.
    pub metric: DMatrix<f64>,
    /// Parameter velocities u̇ⱼ with J u̇ⱼ = τⱼ.
    pub pullbacks: Vec<Vector>,
    /// Standard basis indices used to complete the normal frame.
    pub pivots: Vec<usize>,
}

impl FramePoint {
    pub fn m(&self) -> usize {
        self.tangent.len()
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn k(&self) -> usize {
        self.normal.len()
    }

    pub fn tau(&self, j: usize) -> &Vector {
        &self.tangent.vectors()[j]
    }

    pub fn normal_vector(&self, a: usize) -> &Vector {
        &self.normal.vectors()[a]
    }

    /// √det g.
    pub fn volume_factor(&self) -> f64 {
        self.metric.determinant().sqrt()
    }

    /// Orthogonal projection of an ambient vector onto the tangent space.
    pub fn tangential(&self, v: &Vector) -> Vector {
        let mut out = Vector::zeros(v.len());
        for t in self.tangent.vectors() {
            out.axpy(t.dot(v), t, 1.0);
        }
        out
    }

    /// Least-squares parameter velocity for an ambient vector `a` and the
    /// residual |J u̇ − a|.
    pub fn pullback(&self, a: &Vector) -> (Vector, f64) {
        let svd = self.jacobian.clone().svd(true, true);
        let udot = svd.solve(a, 1e-14).expect("svd with both factors");
        let resid = (&self.jacobian * &udot - a).norm();
        (udot, resid)
    }
}

fn check_domain(chart: &dyn Chart, u: &[f64]) -> Result<()> {
    if u.len() != chart.intrinsic_dim() {
        return Err(GeoError::DimensionMismatch {
            left: chart.intrinsic_dim(),
            right: u.len(),
        });
    }
    if !chart.domain().contains(u) {
        return Err(GeoError::OutsideDomain { u: u.to_vec() });
    }
    Ok(())
}

pub(crate) fn ensure_in_domain(chart: &dyn Chart, u: &[f64]) -> Result<()> {
    check_domain(chart, u)
}

fn tangent_frame(
    chart: &dyn Chart,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<(DMatrix<f64>, Vec<Vector>, DMatrix<f64>)> {
    let jac = jacobian_at(chart, u);
    let smin = jac.singular_values().min();
    if !(smin > cfg.rank_tol) {
        return Err(GeoError::RankDeficient(smin));
    }
    let cols: Vec<Vector> = jac.column_iter().map(|c| c.into_owned()).collect();
    let (q, r) = modified_gram_schmidt(&cols);
    Ok((jac, q, r))
}

/// Frame at `u`: Gram–Schmidt of the Jacobian columns in coordinate order,
/// completed by pivoted standard basis vectors to a positively oriented
/// orthonormal basis (τ₁∧…∧τ_m∧n₁∧…∧n_k = +i).
pub fn frame_at(chart: &dyn Chart, u: &[f64], cfg: &FDConfig) -> Result<FramePoint> {
    frame_impl(chart, u, None, cfg)
}

/// As [`frame_at`], with the normal completion forced to use the given
/// basis indices in order. Freezing the pivots of a stencil centre keeps the
/// normal frame field smooth across the stencil.
pub fn frame_at_with_pivots(
    chart: &dyn Chart,
    u: &[f64],
    pivots: &[usize],
    cfg: &FDConfig,
) -> Result<FramePoint> {
    frame_impl(chart, u, Some(pivots), cfg)
}

fn frame_impl(
    chart: &dyn Chart,
    u: &[f64],
    pivots: Option<&[usize]>,
    cfg: &FDConfig,
) -> Result<FramePoint> {
    check_domain(chart, u)?;
    let n = chart.ambient_dim();
    let m = chart.intrinsic_dim();
    let k = n - m;
    let (jac, tangent, r) = tangent_frame(chart, u, cfg)?;

    let (pivots, mut normals) = match pivots {
        None => pivoted_basis_completion(n, k, &tangent, |e| e.clone()),
        Some(p) => {
            if p.len() != k {
                return Err(GeoError::InvalidParameter(format!(
                    "expected {k} normal pivots, got {}",
                    p.len()
                )));
            }
            let mut basis = tangent.clone();
            let mut out = Vec::with_capacity(k);
            for &i in p {
                let e = Vector::from_fn(n, |row, _| if row == i { 1.0 } else { 0.0 });
                let v = orthogonalize(&e, &basis);
                let norm = v.norm();
                if norm < cfg.frame_tol.sqrt() {
                    return Err(GeoError::RankDeficient(norm));
                }
                let v = v / norm;
                basis.push(v.clone());
                out.push(v);
            }
            (p.to_vec(), out)
        }
    };

    if k > 0 {
        let full = DMatrix::from_columns(&[tangent.clone(), normals.clone()].concat());
        if full.determinant() < 0.0 {
            let last = normals.last_mut().expect("k > 0");
            *last *= -1.0;
        }
    }

    let tangent = OrthoFrame::from_trusted(tangent);
    let normal = OrthoFrame::from_trusted(normals);
    let gauss = UnitBlade::from_trusted(tangent.wedge(n), m);
    let normal_blade = gauss.dual();
    let metric = jac.transpose() * &jac;
    let rinv = r.try_inverse().ok_or(GeoError::RankDeficient(0.0))?;
    let pullbacks = rinv.column_iter().map(|c| c.into_owned()).collect();

    Ok(FramePoint {
        u: u.to_vec(),
        x: chart.eval(u),
        tangent,
        normal,
        gauss,
        normal_blade,
        jacobian: jac,
        metric,
        pullbacks,
        pivots,
    })
}

/// Normalised wedge of the Jacobian columns; smooth in u and independent of
/// any frame choice.
pub fn gauss_blade_at(chart: &dyn Chart, u: &[f64]) -> Result<crate::Multivector> {
    check_domain(chart, u)?;
    let jac = jacobian_at(chart, u);
    let n = chart.ambient_dim();
    let w = jac
        .column_iter()
        .fold(crate::Multivector::scalar(n, 1.0), |acc, c| {
            acc ^ crate::Multivector::vector(c.into_owned().as_slice())
        });
    let norm = w.norm();
    if !(norm > 0.0) {
        return Err(GeoError::RankDeficient(0.0));
    }
    Ok(w * (1.0 / norm))
}
