//! Registry of residual checks over catalog entries.
//!
//! Each check is a family (`gauss-derivative`, `identity-map`, ...) made of
//! one or more sub-checks with their own tolerance and applicability. A
//! family id runs every applicable sub-check; `family/sub` runs one.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blade::{to_multivector, Vector};
use crate::calculus::{derivatives, gauss_map, normal_map, second_derivatives, MultivectorField};
use crate::catalog::CatalogEntry;
use crate::chart::{Domain, FDConfig};
use crate::curvature::{
    curl_of_h, hypersurface_jacobi, hypersurface_quantities, log_blade_laplacian,
    mean_curvature_derivatives, mean_curvature_routes, second_fundamental,
    shape_of_derivative_terms,
};
use crate::error::{GeoError, Result};
use crate::laplace::laplace_beltrami;
use crate::Multivector;

/// When a sub-check is meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Applicability {
    Always,
    Hypersurface,
    Minimal,
    ParallelH,
    /// Needs a log patch and a curl-free H.
    LogPatch,
    /// Log patch on a hypersurface with curl-free H.
    LogPatchHypersurface,
    /// Needs closed-form expectations in the catalog.
    ClosedForm,
}

impl Applicability {
    pub fn applies(&self, e: &CatalogEntry) -> bool {
        let hyper = e.chart.codim() == 1;
        match self {
            Self::Always => true,
            Self::Hypersurface => hyper,
            Self::Minimal => e.expected.is_minimal,
            Self::ParallelH => e.expected.is_parallel_h,
            Self::LogPatch => e.log_patch.is_some() && e.expected.is_parallel_h,
            Self::LogPatchHypersurface => {
                hyper && e.log_patch.is_some() && e.expected.is_parallel_h
            }
            Self::ClosedForm => e.expected.b2.is_some() || e.expected.h_norm.is_some(),
        }
    }

    fn reason(&self) -> &'static str {
        match self {
            Self::Always => "",
            Self::Hypersurface => "needs codimension 1",
            Self::Minimal => "needs a minimal entry",
            Self::ParallelH => "needs parallel mean curvature",
            Self::LogPatch => "needs a log patch and parallel mean curvature",
            Self::LogPatchHypersurface => {
                "needs a hypersurface with a log patch and parallel mean curvature"
            }
            Self::ClosedForm => "needs closed-form curvature data",
        }
    }
}

type Residual = fn(&CatalogEntry, &[f64], &FDConfig) -> Result<f64>;

pub struct CheckSpec {
    pub id: &'static str,
    pub anchor: &'static str,
    pub tolerance: f64,
    pub applicability: Applicability,
    residual: Residual,
}

impl CheckSpec {
    pub fn family(&self) -> &'static str {
        self.id.split('/').next().unwrap_or(self.id)
    }

    pub fn residual_at(&self, e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
        (self.residual)(e, u, cfg)
    }
}

impl std::fmt::Debug for CheckSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckSpec")
            .field("id", &self.id)
            .field("tolerance", &self.tolerance)
            .field("applicability", &self.applicability)
            .finish()
    }
}

fn rel(x: f64, scale: f64) -> f64 {
    x / scale.max(1.0)
}

fn dim(e: &CatalogEntry) -> usize {
    e.chart.ambient_dim()
}

// ---- identity map ---------------------------------------------------------

fn identity_derivative(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let x = MultivectorField::identity(e.chart());
    let d = derivatives(&x, u, cfg)?.left();
    Ok((d - Multivector::scalar(dim(e), e.chart.intrinsic_dim() as f64)).norm())
}

fn identity_graded(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let x = MultivectorField::identity(e.chart());
    Ok(second_derivatives(&x, u, cfg)?.graded_laplacian().norm())
}

fn identity_laplace(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let x = MultivectorField::identity(e.chart());
    let h = second_fundamental(e.chart(), u, cfg)?.mean_curvature_mv();
    Ok(rel((laplace_beltrami(&x, u, cfg)? - &h).norm(), h.norm()))
}

/// (∂∧∂)x = ∂²x − Δx should equal −H.
fn identity_wedge_square(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let x = MultivectorField::identity(e.chart());
    let h = second_fundamental(e.chart(), u, cfg)?.mean_curvature_mv();
    let wedge_sq = second_derivatives(&x, u, cfg)?.second_left() - laplace_beltrami(&x, u, cfg)?;
    Ok(rel((wedge_sq + &h).norm(), h.norm()))
}

// ---- Gauss map ------------------------------------------------------------

fn gauss_derivative(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let d = derivatives(&gauss_map(e.chart()), u, cfg)?;
    let h = second_fundamental(e.chart(), u, cfg)?.mean_curvature_mv();
    Ok((d.left() + h * &d.value).norm())
}

fn monogenic_left(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(derivatives(&gauss_map(e.chart()), u, cfg)?.left().norm())
}

fn monogenic_right(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(derivatives(&gauss_map(e.chart()), u, cfg)?.right().norm())
}

fn mean_curvature_norm(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(second_fundamental(e.chart(), u, cfg)?.mean_curvature.norm())
}

fn graded_gauss(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let field = gauss_map(e.chart());
    let s = second_derivatives(&field, u, cfg)?;
    let curl = curl_of_h(e.chart(), u, cfg)?;
    Ok((s.graded_laplacian() + curl * &s.center.value).norm())
}

fn graded_gauss_harmonic(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(second_derivatives(&gauss_map(e.chart()), u, cfg)?
        .graded_laplacian()
        .norm())
}

fn normal_derivative(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let d = derivatives(&normal_map(e.chart()), u, cfg)?;
    let h = second_fundamental(e.chart(), u, cfg)?.mean_curvature_mv();
    Ok((d.left() + h * &d.value).norm())
}

fn normal_graded(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let s = second_derivatives(&normal_map(e.chart()), u, cfg)?;
    let curl = curl_of_h(e.chart(), u, cfg)?;
    Ok((s.graded_laplacian() + curl * &s.center.value).norm())
}

fn covariant_flat(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(derivatives(&gauss_map(e.chart()), u, cfg)?
        .covariant()
        .norm())
}

// ---- mean curvature -------------------------------------------------------

fn divergence_lemma_h(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let d = mean_curvature_derivatives(e.chart(), u, cfg)?;
    let h = &d.value;
    Ok((d.scalar_divergence() + h.inner(h)).abs())
}

fn divergence_lemma_normals(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let chart = e.chart();
    let sf = second_fundamental(chart, u, cfg)?;
    let rates = crate::curvature::frame_rates(chart, &sf.frame, cfg)?;
    let mut worst: f64 = 0.0;
    for a in 0..sf.frame.k() {
        let div: f64 = (0..sf.frame.m())
            .map(|j| sf.frame.tau(j).dot(&rates.normal[j][a]))
            .sum();
        worst = worst.max((div + sf.mean_curvature.dot(sf.frame.normal_vector(a))).abs());
    }
    Ok(worst)
}

fn parallel_curl_free(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(curl_of_h(e.chart(), u, cfg)?.norm())
}

fn routes_spread(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(mean_curvature_routes(e.chart(), u, cfg)?.spread())
}

fn mean_curvature_normal(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let sf = second_fundamental(e.chart(), u, cfg)?;
    Ok(sf.tangential_mean_curvature().norm() / (1.0 + sf.mean_curvature.norm()))
}

fn gauss_off_grade(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(crate::curvature::mean_curvature_via_gauss(e.chart(), u, cfg)?.off_grade)
}

// ---- second fundamental form ---------------------------------------------

fn shape_symmetry(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(second_fundamental(e.chart(), u, cfg)?.symmetry_defect())
}

fn norm_b_consistency(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let sf = second_fundamental(e.chart(), u, cfg)?;
    let via_shape: f64 = sf.shape.iter().map(|s| s.inner(s)).sum();
    Ok(rel((sf.norm_b2 - via_shape).abs(), sf.norm_b2))
}

fn shape_tangent_wedge(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(second_fundamental(e.chart(), u, cfg)?
        .tangent_wedge_shape()
        .norm())
}

fn shape_jacobi_lemma(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let sf = second_fundamental(e.chart(), u, cfg)?;
    let t = sf.frame.gauss.as_multivector();
    let mut worst: f64 = 0.0;
    for sa in &sf.shape {
        for sb in &sf.shape {
            worst = worst.max(sb.commutator(sa).commutator(t).norm());
        }
    }
    Ok(worst)
}

fn boxed_decomposition(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(shape_of_derivative_terms(e.chart(), u, cfg)?.boxed_residual())
}

fn jacobi_general(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(shape_of_derivative_terms(e.chart(), u, cfg)?.jacobi_residual())
}

// ---- hypersurfaces --------------------------------------------------------

fn hyper_field_equation(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(hypersurface_jacobi(e.chart(), u, cfg)?.jacobi)
}

fn hyper_graded(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(hypersurface_jacobi(e.chart(), u, cfg)?.graded)
}

fn hyper_four_vector(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    Ok(second_fundamental(e.chart(), u, cfg)?.four_vector.norm())
}

fn hyper_shape(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let hs = hypersurface_quantities(e.chart(), u, cfg)?;
    let sf = second_fundamental(e.chart(), u, cfg)?;
    Ok(hs
        .shape
        .iter()
        .zip(&sf.shape)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

/// (∂∧H)×n = ∂ℋ, with ∂∧H from the h-coefficient H field.
fn hyper_curl_gradient(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let hs = hypersurface_quantities(e.chart(), u, cfg)?;
    let curl = curl_of_h(e.chart(), u, cfg)?;
    let lhs = curl.commutator(&to_multivector(&hs.normal));
    Ok((lhs - to_multivector(&hs.grad_mean_curvature)).norm())
}

// ---- log Laplacian ----------------------------------------------------------

fn log_lemma(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let patch = e
        .log_patch
        .as_ref()
        .ok_or_else(|| not_applicable("log-superharmonic", Applicability::LogPatch))?;
    Ok(log_blade_laplacian(e.chart(), u, &patch.reference, cfg)?.residual())
}

fn log_inequality(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let patch = e
        .log_patch
        .as_ref()
        .ok_or_else(|| not_applicable("log-superharmonic", Applicability::LogPatch))?;
    Ok((-log_blade_laplacian(e.chart(), u, &patch.reference, cfg)?.inequality_margin()).max(0.0))
}

// ---- graded Laplacian forms -----------------------------------------------

fn forms_routes(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let s = second_derivatives(&gauss_map(e.chart()), u, cfg)?;
    let (a, b, c) = (
        s.graded_laplacian(),
        s.graded_laplacian_div_curl(),
        s.graded_laplacian_mean(),
    );
    Ok((&a - &b).norm().max((&a - &c).norm()).max((&b - &c).norm()))
}

fn height(e: &CatalogEntry) -> MultivectorField<'_> {
    let n = dim(e);
    MultivectorField::from_ambient(e.chart(), move |x| Multivector::scalar(n, x[n - 1]))
}

fn forms_scalar(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let phi = height(e);
    let diamond = second_derivatives(&phi, u, cfg)?.graded_laplacian();
    Ok((diamond - laplace_beltrami(&phi, u, cfg)?).norm())
}

/// ∂²φ = ◇φ + S(∂φ), where S(a) = Σⱼ ⟨τⱼ, a⟩ S_{τⱼ} for tangent a.
fn forms_scalar_shape(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let phi = height(e);
    let s = second_derivatives(&phi, u, cfg)?;
    let sf = second_fundamental(e.chart(), u, cfg)?;
    let grad: Vector = crate::blade::to_vector(&s.center.left().grade(1));
    let mut shape = Multivector::zero(dim(e));
    for (j, sj) in sf.shape.iter().enumerate() {
        shape += sj * sf.frame.tau(j).dot(&grad);
    }
    Ok((s.second_left() - s.graded_laplacian() - shape).norm())
}

/// Δ𝔗 = ◇𝔗 − Σⱼ S_{τⱼ}×Dⱼ𝔗.
fn forms_laplace_bridge(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let field = gauss_map(e.chart());
    let s = second_derivatives(&field, u, cfg)?;
    let sf = second_fundamental(e.chart(), u, cfg)?;
    let mut bridge = s.graded_laplacian();
    for (sj, dj) in sf.shape.iter().zip(&s.center.along) {
        bridge -= sj.commutator(dj);
    }
    Ok((bridge - laplace_beltrami(&field, u, cfg)?).norm())
}

// ---- catalog facts --------------------------------------------------------

fn facts_b2(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let Some(f) = &e.expected.b2 else {
        return Ok(0.0);
    };
    let want = f(u);
    Ok(rel(
        (second_fundamental(e.chart(), u, cfg)?.norm_b2 - want).abs(),
        want,
    ))
}

fn facts_h_norm(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    let Some(f) = &e.expected.h_norm else {
        return Ok(0.0);
    };
    let want = f(u);
    Ok(rel(
        (second_fundamental(e.chart(), u, cfg)?.mean_curvature.norm() - want).abs(),
        want,
    ))
}

/// H points to the side opposite the outward normal on closed convex
/// hypersurfaces; reported as max(0, ⟨H, n⟩).
fn facts_inward(e: &CatalogEntry, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    if e.name != "sphere" {
        return Ok(0.0);
    }
    let sf = second_fundamental(e.chart(), u, cfg)?;
    let radial = &sf.frame.x / sf.frame.x.norm();
    Ok(sf.mean_curvature.dot(&radial).max(0.0))
}

macro_rules! check {
    ($id:expr, $tol:expr, $app:ident, $f:ident, $anchor:expr) => {
        CheckSpec {
            id: $id,
            anchor: $anchor,
            tolerance: $tol,
            applicability: Applicability::$app,
            residual: $f,
        }
    };
}

pub static REGISTRY: &[CheckSpec] = &[
    check!(
        "identity-map/derivative",
        1e-5,
        Always,
        identity_derivative,
        "identity map: ∂x = m"
    ),
    check!(
        "identity-map/graded-laplacian",
        1e-4,
        Always,
        identity_graded,
        "identity map: ◇x = 0"
    ),
    check!(
        "identity-map/laplace-beltrami",
        1e-4,
        Always,
        identity_laplace,
        "identity map: Δx = H (relative)"
    ),
    check!(
        "identity-map/wedge-square",
        1e-4,
        Always,
        identity_wedge_square,
        "identity map: (∂∧∂)x = S(∂)x = −H (relative)"
    ),
    check!(
        "gauss-derivative",
        1e-5,
        Always,
        gauss_derivative,
        "derivative of the Gauss map: ∂𝔗 = −H𝔗"
    ),
    check!(
        "minimal-monogenic/left",
        1e-5,
        Minimal,
        monogenic_left,
        "minimal iff the Gauss map is monogenic: ∂𝔗 = 0"
    ),
    check!(
        "minimal-monogenic/right",
        1e-5,
        Minimal,
        monogenic_right,
        "minimal iff the Gauss map is monogenic: 𝔗∂ = 0"
    ),
    check!(
        "minimal-monogenic/mean-curvature",
        1e-6,
        Minimal,
        mean_curvature_norm,
        "minimal submanifold: H = 0"
    ),
    check!(
        "graded-laplace-gauss/theorem",
        1e-3,
        Always,
        graded_gauss,
        "graded Laplacian of the Gauss map: ◇𝔗 = −(∂∧H)𝔗"
    ),
    check!(
        "graded-laplace-gauss/harmonic",
        1e-3,
        ParallelH,
        graded_gauss_harmonic,
        "curl-free H iff the Gauss map is graded-harmonic: ◇𝔗 = 0"
    ),
    check!(
        "normal-versions/derivative",
        1e-5,
        Always,
        normal_derivative,
        "normal pseudoscalar: ∂𝒩 = −H𝒩"
    ),
    check!(
        "normal-versions/graded-laplacian",
        1e-3,
        Always,
        normal_graded,
        "normal pseudoscalar: ◇𝒩 = −(∂∧H)𝒩"
    ),
    check!(
        "normal-divergence-lemma/mean-curvature",
        1e-4,
        Always,
        divergence_lemma_h,
        "normal fields: ⟨∂,X⟩ + ⟨H,X⟩ = 0 for X = H"
    ),
    check!(
        "normal-divergence-lemma/normals",
        1e-4,
        Always,
        divergence_lemma_normals,
        "normal fields: ⟨∂,X⟩ + ⟨H,X⟩ = 0 for X = n_α"
    ),
    check!(
        "parallel-curlfree",
        1e-4,
        ParallelH,
        parallel_curl_free,
        "parallel mean curvature iff ∂∧H = 0"
    ),
    check!(
        "mean-curvature/routes",
        1e-4,
        Always,
        routes_spread,
        "mean curvature vector: trace of h, −(∂𝔗)𝔗⁻¹ and −Σ⟨∂,n_α⟩n_α agree (relative)"
    ),
    check!(
        "mean-curvature/normal",
        1e-6,
        Always,
        mean_curvature_normal,
        "mean curvature vector is normal: |P_𝔗(H)| ≤ tol·(1 + |H|)"
    ),
    check!(
        "mean-curvature/off-grade",
        1e-5,
        Always,
        gauss_off_grade,
        "−(∂𝔗)𝔗⁻¹ is a vector"
    ),
    check!(
        "shape-symmetry",
        1e-5,
        Always,
        shape_symmetry,
        "second fundamental form is symmetric: h_αjl = h_αlj"
    ),
    check!(
        "shape-symmetry/tangent-wedge",
        1e-5,
        Always,
        shape_tangent_wedge,
        "shape bivectors: ∂_a∧S_a = 0"
    ),
    check!(
        "normB-consistency",
        1e-6,
        Always,
        norm_b_consistency,
        "norm of the second fundamental form: Σh² = ⟨S(∂_a), S_a⟩ (relative)"
    ),
    check!(
        "shape-jacobi-lemma",
        1e-6,
        Always,
        shape_jacobi_lemma,
        "shape bivectors: (S_b×S_a)×𝔗 = 0"
    ),
    check!(
        "boxed-decomposition",
        1e-3,
        Always,
        boxed_decomposition,
        "◇𝔗 = Δ𝔗 + |B|²𝔗 − ⟨(S(∂_a)∧S_a)𝔗⟩_m"
    ),
    check!(
        "jacobi-general",
        1e-3,
        Always,
        jacobi_general,
        "Jacobi field equation: Δ𝔗 + |B|²𝔗 − ⟨(S(∂_a)∧S_a)𝔗⟩_m + (∂∧H)𝔗 = 0"
    ),
    check!(
        "jacobi-hypersurface/field-equation",
        1e-3,
        Hypersurface,
        hyper_field_equation,
        "hypersurface Jacobi equation: Δn + |B|²n + ∂ℋ = 0"
    ),
    check!(
        "jacobi-hypersurface/graded-laplacian",
        1e-3,
        Hypersurface,
        hyper_graded,
        "hypersurface: ◇n = Δn + |B|²n"
    ),
    check!(
        "jacobi-hypersurface/four-vector",
        1e-6,
        Hypersurface,
        hyper_four_vector,
        "hypersurface: S(∂_a)∧S_a = 0"
    ),
    check!(
        "jacobi-hypersurface/shape-bivector",
        1e-5,
        Hypersurface,
        hyper_shape,
        "hypersurface shape bivector: S_a = n∧((a·∂)n)"
    ),
    check!(
        "jacobi-hypersurface/curl-gradient",
        1e-4,
        Hypersurface,
        hyper_curl_gradient,
        "hypersurface: (∂∧H)×n = ∂ℋ"
    ),
    check!(
        "covariant-flat",
        1e-6,
        Always,
        covariant_flat,
        "covariant derivative of the Gauss map: ∇𝔗 = 0"
    ),
    check!(
        "log-superharmonic/lemma",
        1e-3,
        LogPatch,
        log_lemma,
        "−Δ ln⟨𝔗,I⟩ = |B|² + (|∂_a⟨S_a𝔗,I⟩|² − ⟨(S(∂_a)∧S_a)𝔗,I⟩⟨𝔗,I⟩)/⟨𝔗,I⟩²"
    ),
    check!(
        "log-superharmonic/inequality",
        1e-3,
        LogPatchHypersurface,
        log_inequality,
        "hypersurface: −Δ ln⟨𝔗,I⟩ ≥ |B|² (reported as the violation)"
    ),
    check!(
        "graded-laplacian-forms/routes",
        1e-6,
        Always,
        forms_routes,
        "◇𝔗 by grade projection of ∂², ∂⌟(∂∧F) + ∂∧(∂⌟F) and ½(∂²F + F∂²)"
    ),
    check!(
        "graded-laplacian-forms/scalar",
        1e-4,
        Always,
        forms_scalar,
        "graded Laplacian equals Laplace–Beltrami on scalars"
    ),
    check!(
        "graded-laplacian-forms/scalar-shape",
        1e-3,
        Always,
        forms_scalar_shape,
        "scalars: ∂²φ = ◇φ + S(∂φ)"
    ),
    check!(
        "graded-laplacian-forms/laplace-bridge",
        1e-3,
        Always,
        forms_laplace_bridge,
        "◇F = Δ_ℳF + (∂∧∂)×F for F = 𝔗"
    ),
    check!(
        "expected-facts/b2",
        1e-5,
        ClosedForm,
        facts_b2,
        "catalog closed form for |B|² (relative)"
    ),
    check!(
        "expected-facts/h-norm",
        1e-5,
        ClosedForm,
        facts_h_norm,
        "catalog closed form for |H| (relative)"
    ),
    check!(
        "expected-facts/inward",
        1e-9,
        ClosedForm,
        facts_inward,
        "H points inward on spheres with outward normal"
    ),
];

/// Distinct family ids in registry order.
pub fn families() -> Vec<&'static str> {
    let mut out: Vec<&'static str> = Vec::new();
    for c in REGISTRY {
        if !out.contains(&c.family()) {
            out.push(c.family());
        }
    }
    out
}

/// Every accepted check id: families and sub-checks.
pub fn check_ids() -> Vec<&'static str> {
    let mut out = families();
    for c in REGISTRY {
        if !out.contains(&c.id) {
            out.push(c.id);
        }
    }
    out
}

pub fn lookup(id: &str) -> Option<&'static CheckSpec> {
    REGISTRY.iter().find(|c| c.id == id)
}

fn not_applicable(check: &str, a: Applicability) -> GeoError {
    GeoError::NotApplicable {
        check: check.to_string(),
        reason: a.reason().to_string(),
    }
}

/// Sub-checks selected by a family or sub-check id.
pub fn resolve(id: &str) -> Result<Vec<&'static CheckSpec>> {
    let v: Vec<&'static CheckSpec> = REGISTRY
        .iter()
        .filter(|c| c.id == id || c.family() == id)
        .collect();
    if v.is_empty() {
        return Err(GeoError::UnknownCheck {
            name: id.to_string(),
            valid: check_ids().join(", "),
        });
    }
    Ok(v)
}

/// Evaluation grid: per-axis counts (the last repeats) and an inset from
/// the domain boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub counts: Vec<usize>,
    pub inset: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            counts: vec![5, 5],
            inset: 0.05,
        }
    }
}

impl GridSpec {
    pub fn new(counts: Vec<usize>, inset: f64) -> Self {
        Self { counts, inset }
    }

    pub fn validate(&self, cfg: &FDConfig) -> Result<()> {
        if self.counts.is_empty() || self.counts.iter().any(|c| *c < 2) {
            return Err(GeoError::InvalidParameter(format!(
                "grid counts must be at least 2, got {:?}",
                self.counts
            )));
        }
        if !(self.inset >= 2.0 * cfg.h2) {
            return Err(GeoError::InvalidParameter(format!(
                "grid inset {} must be at least 2·h2 = {}",
                self.inset,
                2.0 * cfg.h2
            )));
        }
        Ok(())
    }

    pub fn points(&self, domain: &Domain) -> Result<Vec<Vec<f64>>> {
        domain.grid(&self.counts, self.inset)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResidual {
    pub u: Vec<f64>,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub anchor: String,
    pub points: Vec<PointResidual>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Residual recorded for a point whose evaluation failed.
pub const FAILED_RESIDUAL: f64 = f64::MAX;

fn evaluate(
    spec: &CheckSpec,
    entry: &CatalogEntry,
    grid: &GridSpec,
    cfg: &FDConfig,
    tol_scale: f64,
) -> CheckResult {
    let target = if matches!(
        spec.applicability,
        Applicability::LogPatch | Applicability::LogPatchHypersurface
    ) {
        entry.on_log_patch().unwrap_or_else(|| entry.clone())
    } else {
        entry.clone()
    };
    let tolerance = spec.tolerance * tol_scale;
    let points = match grid.points(target.chart.domain()) {
        Ok(p) => p,
        Err(err) => {
            return CheckResult {
                check_id: spec.id.to_string(),
                anchor: spec.anchor.to_string(),
                points: vec![PointResidual {
                    u: Vec::new(),
                    residual: FAILED_RESIDUAL,
                    error: Some(err.to_string()),
                }],
                max_residual: FAILED_RESIDUAL,
                tolerance,
                pass: false,
            }
        }
    };
    let points: Vec<PointResidual> = points
        .into_par_iter()
        .map(|u| match spec.residual_at(&target, &u, cfg) {
            Ok(r) if r.is_finite() => PointResidual {
                u,
                residual: r.abs(),
                error: None,
            },
            Ok(r) => PointResidual {
                u,
                residual: FAILED_RESIDUAL,
                error: Some(format!("non-finite residual {r}")),
            },
            Err(err) => PointResidual {
                u,
                residual: FAILED_RESIDUAL,
                error: Some(err.to_string()),
            },
        })
        .collect();
    let max_residual = points.iter().map(|p| p.residual).fold(0.0, f64::max);
    CheckResult {
        check_id: spec.id.to_string(),
        anchor: spec.anchor.to_string(),
        points,
        max_residual,
        tolerance,
        pass: max_residual <= tolerance,
    }
}

/// Runs a family or a single sub-check. Sub-checks that do not apply to the
/// entry are skipped when a family is named; naming an inapplicable check
/// directly, or a family none of whose sub-checks apply, is an error.
pub fn run_check(
    id: &str,
    entry: &CatalogEntry,
    grid: &GridSpec,
    cfg: &FDConfig,
    tol_scale: f64,
) -> Result<Vec<CheckResult>> {
    cfg.validate()?;
    grid.validate(cfg)?;
    validate_scale(tol_scale)?;
    let specs = resolve(id)?;
    let applicable: Vec<&CheckSpec> = specs
        .iter()
        .copied()
        .filter(|s| s.applicability.applies(entry))
        .collect();
    if applicable.is_empty() {
        return Err(not_applicable(id, specs[0].applicability));
    }
    Ok(applicable
        .into_iter()
        .map(|s| evaluate(s, entry, grid, cfg, tol_scale))
        .collect())
}

fn validate_scale(s: f64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(GeoError::InvalidParameter(format!(
            "tolerance scale {s} must be positive"
        )));
    }
    Ok(())
}

/// Every applicable sub-check in registry order. Point failures are
/// recorded in the results; configuration errors make every check fail.
pub fn run_all(
    entry: &CatalogEntry,
    grid: &GridSpec,
    cfg: &FDConfig,
    tol_scale: f64,
) -> Vec<CheckResult> {
    let config_error = cfg
        .validate()
        .and_then(|_| grid.validate(cfg))
        .and_then(|_| validate_scale(tol_scale))
        .err();
    REGISTRY
        .iter()
        .filter(|s| s.applicability.applies(entry))
        .map(|s| match &config_error {
            None => evaluate(s, entry, grid, cfg, tol_scale),
            Some(err) => CheckResult {
                check_id: s.id.to_string(),
                anchor: s.anchor.to_string(),
                points: vec![PointResidual {
                    u: Vec::new(),
                    residual: FAILED_RESIDUAL,
                    error: Some(err.to_string()),
                }],
                max_residual: FAILED_RESIDUAL,
                tolerance: s.tolerance * tol_scale,
                pass: false,
            },
        })
        .collect()
}

/// Statements of the theory that the registry must cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statement {
    IdentityMapExample,
    WedgeSquareIsShape,
    GradedLaplacianForms,
    ScalarCoincidence,
    ScalarSecondDerivative,
    GaussDerivativeTheorem,
    MinimalMonogenicCorollary,
    NormalFieldDivergenceLemma,
    ParallelCurlFreeProposition,
    GradedLaplaceGaussTheorem,
    GradedHarmonicCorollary,
    NormalPseudoscalarFormulas,
    MeanCurvatureTrace,
    SecondFundamentalSymmetry,
    NormBLemma,
    ShapeCommutatorLemma,
    BoxedDecomposition,
    JacobiFieldEquation,
    CurlFreeJacobiLemma,
    LogLaplacianLemma,
    HypersurfaceShapeBivector,
    HypersurfaceFourVector,
    HypersurfaceGradedLaplacian,
    HypersurfaceCurlGradient,
    HypersurfaceJacobiEquation,
    HypersurfaceLogInequality,
    CovariantGaussFlat,
}

/// Statement → check ids exercising it.
pub const COVERAGE: &[(Statement, &[&str])] = &[
    (
        Statement::IdentityMapExample,
        &[
            "identity-map/derivative",
            "identity-map/graded-laplacian",
            "identity-map/laplace-beltrami",
        ],
    ),
    (
        Statement::WedgeSquareIsShape,
        &["identity-map/wedge-square"],
    ),
    (
        Statement::GradedLaplacianForms,
        &[
            "graded-laplacian-forms/routes",
            "graded-laplacian-forms/laplace-bridge",
        ],
    ),
    (
        Statement::ScalarCoincidence,
        &["graded-laplacian-forms/scalar"],
    ),
    (
        Statement::ScalarSecondDerivative,
        &["graded-laplacian-forms/scalar-shape"],
    ),
    (Statement::GaussDerivativeTheorem, &["gauss-derivative"]),
    (
        Statement::MinimalMonogenicCorollary,
        &[
            "minimal-monogenic/left",
            "minimal-monogenic/right",
            "minimal-monogenic/mean-curvature",
        ],
    ),
    (
        Statement::NormalFieldDivergenceLemma,
        &[
            "normal-divergence-lemma/mean-curvature",
            "normal-divergence-lemma/normals",
        ],
    ),
    (
        Statement::ParallelCurlFreeProposition,
        &["parallel-curlfree"],
    ),
    (
        Statement::GradedLaplaceGaussTheorem,
        &["graded-laplace-gauss/theorem"],
    ),
    (
        Statement::GradedHarmonicCorollary,
        &["graded-laplace-gauss/harmonic"],
    ),
    (
        Statement::NormalPseudoscalarFormulas,
        &[
            "normal-versions/derivative",
            "normal-versions/graded-laplacian",
        ],
    ),
    (
        Statement::MeanCurvatureTrace,
        &[
            "mean-curvature/routes",
            "mean-curvature/normal",
            "mean-curvature/off-grade",
        ],
    ),
    (
        Statement::SecondFundamentalSymmetry,
        &["shape-symmetry", "shape-symmetry/tangent-wedge"],
    ),
    (Statement::NormBLemma, &["normB-consistency"]),
    (Statement::ShapeCommutatorLemma, &["shape-jacobi-lemma"]),
    (Statement::BoxedDecomposition, &["boxed-decomposition"]),
    (Statement::JacobiFieldEquation, &["jacobi-general"]),
    (
        Statement::CurlFreeJacobiLemma,
        &["jacobi-general", "parallel-curlfree"],
    ),
    (Statement::LogLaplacianLemma, &["log-superharmonic/lemma"]),
    (
        Statement::HypersurfaceShapeBivector,
        &["jacobi-hypersurface/shape-bivector"],
    ),
    (
        Statement::HypersurfaceFourVector,
        &["jacobi-hypersurface/four-vector"],
    ),
    (
        Statement::HypersurfaceGradedLaplacian,
        &["jacobi-hypersurface/graded-laplacian"],
    ),
    (
        Statement::HypersurfaceCurlGradient,
        &["jacobi-hypersurface/curl-gradient"],
    ),
    (
        Statement::HypersurfaceJacobiEquation,
        &["jacobi-hypersurface/field-equation"],
    ),
    (
        Statement::HypersurfaceLogInequality,
        &["log-superharmonic/inequality"],
    ),
    (Statement::CovariantGaussFlat, &["covariant-flat"]),
];
