//! Vector derivative ∂ = Σⱼ τⱼ (τⱼ·∂) on a chart, by central differences.
//!
//! Directional derivatives pull the ambient direction back to the parameter
//! domain and difference the field along the straight parameter line, so the
//! step is measured in arc length. Everything built from ∂ (divergence,
//! curl, right derivative, covariant derivative) is an algebraic combination
//! of the same stencil values. Second-order operators differentiate a
//! first-order combination once more with the outer step `h2`, recomputing
//! the frame at every outer stencil point.

use crate::blade::{project, to_multivector, Vector};
use crate::chart::{ensure_in_domain, frame_at, gauss_blade_at, Chart, FDConfig, FramePoint};
use crate::error::{GeoError, Result};
use crate::Multivector;

/// Largest least-squares residual accepted when pulling a direction back to
/// the parameter domain.
pub const TANGENT_TOL: f64 = 1e-8;

type Rule<'a> = dyn Fn(&[f64]) -> Result<Multivector> + Send + Sync + 'a;

/// Multivector-valued function on a chart, evaluated at parameter points.
pub struct MultivectorField<'a> {
    chart: &'a dyn Chart,
    rule: Box<Rule<'a>>,
}

impl<'a> MultivectorField<'a> {
    pub fn new(
        chart: &'a dyn Chart,
        rule: impl Fn(&[f64]) -> Result<Multivector> + Send + Sync + 'a,
    ) -> Self {
        Self {
            chart,
            rule: Box::new(rule),
        }
    }

    /// Field given as a function of the ambient point x = φ(u).
    pub fn from_ambient(
        chart: &'a dyn Chart,
        f: impl Fn(&Vector) -> Multivector + Send + Sync + 'a,
    ) -> Self {
        Self::new(chart, move |u| Ok(f(&chart.eval(u))))
    }

    /// F(x) = x.
    pub fn identity(chart: &'a dyn Chart) -> Self {
        Self::from_ambient(chart, to_multivector)
    }

    pub fn constant(chart: &'a dyn Chart, value: Multivector) -> Self {
        Self::new(chart, move |_| Ok(value.clone()))
    }

    pub fn chart(&self) -> &'a dyn Chart {
        self.chart
    }

    pub fn eval(&self, u: &[f64]) -> Result<Multivector> {
        ensure_in_domain(self.chart, u)?;
        (self.rule)(u)
    }
}

/// u ↦ 𝔗(u), the normalised wedge of the Jacobian columns.
pub fn gauss_map(chart: &dyn Chart) -> MultivectorField<'_> {
    MultivectorField::new(chart, move |u| gauss_blade_at(chart, u))
}

/// u ↦ 𝒩(u) = ★𝔗(u).
pub fn normal_map(chart: &dyn Chart) -> MultivectorField<'_> {
    MultivectorField::new(chart, move |u| Ok(gauss_blade_at(chart, u)?.hodge()))
}

fn shifted(u: &[f64], dir: &Vector, t: f64) -> Vec<f64> {
    u.iter().zip(dir.iter()).map(|(a, d)| a + t * d).collect()
}

/// Central difference of `f` at 0 with step `h`, optionally with one level
/// of Richardson extrapolation (4 D(h/2) − D(h)) / 3.
pub(crate) fn central<F>(f: F, h: f64, richardson: bool) -> Result<Multivector>
where
    F: Fn(f64) -> Result<Multivector>,
{
    let diff = |h: f64| -> Result<Multivector> { Ok((f(h)? - f(-h)?) * (0.5 / h)) };
    if richardson {
        let coarse = diff(h)?;
        let fine = diff(0.5 * h)?;
        Ok((fine * 4.0 - coarse) * (1.0 / 3.0))
    } else {
        diff(h)
    }
}

/// (a·∂)F at `u` for a tangent vector `a`.
pub fn directional_derivative(
    field: &MultivectorField<'_>,
    u: &[f64],
    a: &Vector,
    cfg: &FDConfig,
) -> Result<Multivector> {
    let frame = frame_at(field.chart(), u, cfg)?;
    directional_in(field, &frame, a, cfg.h1, cfg.richardson)
}

fn directional_in(
    field: &MultivectorField<'_>,
    frame: &FramePoint,
    a: &Vector,
    h: f64,
    richardson: bool,
) -> Result<Multivector> {
    let (udot, resid) = frame.pullback(a);
    if resid > TANGENT_TOL * a.norm().max(1.0) {
        return Err(GeoError::NotTangent(resid));
    }
    central(|t| field.eval(&shifted(&frame.u, &udot, t)), h, richardson)
}

/// Frame and the directional derivatives Dⱼ F = (τⱼ·∂)F at one point.
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub frame: FramePoint,
    pub value: Multivector,
    pub along: Vec<Multivector>,
}

impl Derivatives {
    fn taus(&self) -> impl Iterator<Item = (Multivector, &Multivector)> {
        self.frame
            .tangent
            .vectors()
            .iter()
            .map(to_multivector)
            .zip(self.along.iter())
    }

    fn sum(&self, f: impl Fn(&Multivector, &Multivector) -> Multivector) -> Multivector {
        self.taus()
            .fold(Multivector::zero(self.value.dim()), |acc, (t, d)| {
                acc + f(&t, d)
            })
    }

    /// ∂F = Σ τⱼ DⱼF.
    pub fn left(&self) -> Multivector {
        self.sum(|t, d| t * d)
    }

    /// F∂ = Σ (DⱼF) τⱼ.
    pub fn right(&self) -> Multivector {
        self.sum(|t, d| d * t)
    }

    /// ∂⌟F.
    pub fn divergence(&self) -> Multivector {
        self.sum(|t, d| t.lcontract(d))
    }

    /// ∂∧F.
    pub fn curl(&self) -> Multivector {
        self.sum(|t, d| t ^ d)
    }

    /// F⌞∂.
    pub fn right_divergence(&self) -> Multivector {
        self.sum(|t, d| d.rcontract(t))
    }

    /// F∧∂.
    pub fn right_curl(&self) -> Multivector {
        self.sum(|t, d| d ^ t)
    }

    /// ∇F = Σ τⱼ P_𝔗(DⱼF).
    pub fn covariant(&self) -> Multivector {
        let g = &self.frame.gauss;
        self.sum(|t, d| t * project(d, g))
    }

    /// ⟨∂, X⟩ for a vector field: Σ ⟨τⱼ, DⱼX⟩.
    pub fn scalar_divergence(&self) -> f64 {
        self.taus().map(|(t, d)| t.inner(d)).sum()
    }
}

pub(crate) fn derivatives_at_frame(
    field: &MultivectorField<'_>,
    frame: FramePoint,
    h: f64,
    richardson: bool,
) -> Result<Derivatives> {
    let value = field.eval(&frame.u)?;
    let along = frame
        .pullbacks
        .iter()
        .map(|udot| central(|t| field.eval(&shifted(&frame.u, udot, t)), h, richardson))
        .collect::<Result<Vec<_>>>()?;
    Ok(Derivatives {
        frame,
        value,
        along,
    })
}

/// First-order stencil at `u` with step `h1`.
pub fn derivatives(field: &MultivectorField<'_>, u: &[f64], cfg: &FDConfig) -> Result<Derivatives> {
    let frame = frame_at(field.chart(), u, cfg)?;
    derivatives_at_frame(field, frame, cfg.h1, cfg.richardson)
}

/// Left vector derivative ∂F.
pub fn vector_derivative(
    field: &MultivectorField<'_>,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<Multivector> {
    Ok(derivatives(field, u, cfg)?.left())
}

/// Right vector derivative F∂.
pub fn vector_derivative_right(
    field: &MultivectorField<'_>,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<Multivector> {
    Ok(derivatives(field, u, cfg)?.right())
}

pub fn divergence(field: &MultivectorField<'_>, u: &[f64], cfg: &FDConfig) -> Result<Multivector> {
    Ok(derivatives(field, u, cfg)?.divergence())
}

pub fn curl(field: &MultivectorField<'_>, u: &[f64], cfg: &FDConfig) -> Result<Multivector> {
    Ok(derivatives(field, u, cfg)?.curl())
}

pub fn covariant_derivative(
    field: &MultivectorField<'_>,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<Multivector> {
    Ok(derivatives(field, u, cfg)?.covariant())
}

/// ∂F computed with an arbitrary orthonormal tangent frame instead of the
/// Gram–Schmidt one.
pub fn vector_derivative_in_frame(
    field: &MultivectorField<'_>,
    u: &[f64],
    frame_vectors: &[Vector],
    cfg: &FDConfig,
) -> Result<Multivector> {
    let frame = frame_at(field.chart(), u, cfg)?;
    let mut acc = Multivector::zero(field.chart().ambient_dim());
    for a in frame_vectors {
        let d = directional_in(field, &frame, a, cfg.h1, cfg.richardson)?;
        acc += to_multivector(a) * d;
    }
    Ok(acc)
}

/// Nested stencil: first-order derivatives at the centre and at u ± h2·u̇ᵢ
/// (and ± h2/2 with Richardson) for every tangent direction i.
#[derive(Debug, Clone)]
pub struct SecondDerivatives {
    pub center: Derivatives,
    /// Per direction: (offset, first-order data at u + offset·u̇ᵢ).
    pub outer: Vec<Vec<(f64, Derivatives)>>,
    h2: f64,
    richardson: bool,
}

impl SecondDerivatives {
    /// Dᵢ G along each centre tangent direction for a first-order quantity G.
    pub fn outer_derivative(&self, g: impl Fn(&Derivatives) -> Multivector) -> Vec<Multivector> {
        self.outer
            .iter()
            .map(|pts| {
                let at = |t: f64| -> Multivector {
                    let (_, d) = pts
                        .iter()
                        .find(|(o, _)| *o == t)
                        .expect("stencil offset present");
                    g(d)
                };
                let diff = |h: f64| (at(h) - at(-h)) * (0.5 / h);
                if self.richardson {
                    (diff(0.5 * self.h2) * 4.0 - diff(self.h2)) * (1.0 / 3.0)
                } else {
                    diff(self.h2)
                }
            })
            .collect()
    }

    fn contract_outer(
        &self,
        inner: impl Fn(&Derivatives) -> Multivector,
        combine: impl Fn(&Multivector, &Multivector) -> Multivector,
    ) -> Multivector {
        let ds = self.outer_derivative(inner);
        let dim = self.center.value.dim();
        self.center
            .frame
            .tangent
            .vectors()
            .iter()
            .zip(ds.iter())
            .fold(Multivector::zero(dim), |acc, (t, d)| {
                acc + combine(&to_multivector(t), d)
            })
    }

    /// ∂²F = ∂(∂F).
    pub fn second_left(&self) -> Multivector {
        self.contract_outer(|d| d.left(), |t, d| t * d)
    }

    /// F∂² = (F∂)∂.
    pub fn second_right(&self) -> Multivector {
        self.contract_outer(|d| d.right(), |t, d| d * t)
    }

    /// ◇F = Σ_r ⟨∂²⟨F⟩_r⟩_r.
    pub fn graded_laplacian(&self) -> Multivector {
        let dim = self.center.value.dim();
        let mut grades = self.center.value.grades();
        for pts in &self.outer {
            for (_, d) in pts {
                for a in &d.along {
                    grades = grades.union(a.grades());
                }
            }
        }
        let mut acc = Multivector::zero(dim);
        for r in grades.iter() {
            let part = self.contract_outer(
                |d| {
                    d.frame
                        .tangent
                        .vectors()
                        .iter()
                        .zip(&d.along)
                        .fold(Multivector::zero(dim), |s, (t, a)| {
                            s + to_multivector(t) * a.grade(r)
                        })
                },
                |t, d| t * d,
            );
            acc += part.grade(r);
        }
        acc
    }

    /// ∂⌟(∂∧F) + ∂∧(∂⌟F).
    pub fn graded_laplacian_div_curl(&self) -> Multivector {
        self.contract_outer(|d| d.curl(), |t, d| t.lcontract(d))
            + self.contract_outer(|d| d.divergence(), |t, d| t ^ d)
    }

    /// ½(∂²F + F∂²).
    pub fn graded_laplacian_mean(&self) -> Multivector {
        (self.second_left() + self.second_right()) * 0.5
    }
}

/// Builds the nested stencil around `u`.
pub fn second_derivatives(
    field: &MultivectorField<'_>,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<SecondDerivatives> {
    let chart = field.chart();
    let center = derivatives(field, u, cfg)?;
    let offsets: Vec<f64> = if cfg.richardson {
        vec![cfg.h2, -cfg.h2, 0.5 * cfg.h2, -0.5 * cfg.h2]
    } else {
        vec![cfg.h2, -cfg.h2]
    };
    let mut outer = Vec::with_capacity(center.frame.m());
    for udot in &center.frame.pullbacks {
        let mut pts = Vec::with_capacity(offsets.len());
        for &t in &offsets {
            let p = shifted(u, udot, t);
            let frame = frame_at(chart, &p, cfg)?;
            pts.push((
                t,
                derivatives_at_frame(field, frame, cfg.h1, cfg.richardson)?,
            ));
        }
        outer.push(pts);
    }
    Ok(SecondDerivatives {
        center,
        outer,
        h2: cfg.h2,
        richardson: cfg.richardson,
    })
}

/// ∂²F.
pub fn second_derivative(
    field: &MultivectorField<'_>,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<Multivector> {
    Ok(second_derivatives(field, u, cfg)?.second_left())
}

/// ◇F as the per-grade projection of ∂²F.
pub fn graded_laplacian(
    field: &MultivectorField<'_>,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<Multivector> {
    Ok(second_derivatives(field, u, cfg)?.graded_laplacian())
}

/// ◇F by its three algebraic routes, for cross-checking.
#[derive(Debug, Clone)]
pub struct GradedLaplacianRoutes {
    pub projected: Multivector,
    pub div_curl: Multivector,
    pub mean: Multivector,
}

impl GradedLaplacianRoutes {
    /// Largest pairwise norm difference.
    pub fn spread(&self) -> f64 {
        let a = (&self.projected - &self.div_curl).norm();
        let b = (&self.projected - &self.mean).norm();
        let c = (&self.div_curl - &self.mean).norm();
        a.max(b).max(c)
    }
}

pub fn graded_laplacian_routes(
    field: &MultivectorField<'_>,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<GradedLaplacianRoutes> {
    let s = second_derivatives(field, u, cfg)?;
    Ok(GradedLaplacianRoutes {
        projected: s.graded_laplacian(),
        div_curl: s.graded_laplacian_div_curl(),
        mean: s.graded_laplacian_mean(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{get, get_default};
    use crate::chart::Domain;
    use crate::chart::FnChart;
    use std::collections::BTreeMap;

    fn cfg() -> FDConfig {
        FDConfig::default()
    }

    fn sphere() -> crate::catalog::CatalogEntry {
        get_default("sphere").unwrap()
    }

    #[test]
    fn identity_field_has_derivative_m() {
        let e = sphere();
        let x = MultivectorField::identity(e.chart());
        let u = [1.0, 0.4];
        let d = derivatives(&x, &u, &cfg()).unwrap();
        assert!(d.left().approx_eq(&Multivector::scalar(3, 2.0), 1e-8));
        assert!(d.divergence().approx_eq(&Multivector::scalar(3, 2.0), 1e-8));
        assert!(d.curl().norm() < 1e-8);
        assert!(d.covariant().approx_eq(&Multivector::scalar(3, 2.0), 1e-8));
        assert!((&d.divergence() + &d.curl()).approx_eq(&d.left(), 1e-10));
    }

    #[test]
    fn constant_field_has_zero_derivatives() {
        let e = get_default("torus").unwrap();
        let c = Multivector::new(3, (0..8).map(|i| i as f64).collect()).unwrap();
        let f = MultivectorField::constant(e.chart(), c);
        let u = [0.3, -0.2];
        assert!(vector_derivative(&f, &u, &cfg()).unwrap().is_zero());
        assert!(second_derivative(&f, &u, &cfg()).unwrap().is_zero());
        assert!(covariant_derivative(&f, &u, &cfg()).unwrap().is_zero());
    }

    #[test]
    fn linear_function_on_plane_has_gradient_e1() {
        let e = get_default("plane").unwrap();
        let f = MultivectorField::from_ambient(e.chart(), |x| Multivector::scalar(3, x[0]));
        let g = vector_derivative(&f, &[0.2, 0.7], &cfg()).unwrap();
        assert!(g.approx_eq(&Multivector::basis_vector(3, 0), 1e-9));
    }

    #[test]
    fn directional_derivative_of_identity_is_the_direction() {
        let e = sphere();
        let x = MultivectorField::identity(e.chart());
        let u = [0.9, 0.3];
        let frame = frame_at(e.chart(), &u, &cfg()).unwrap();
        let a = frame.tau(0).clone();
        let d = directional_derivative(&x, &u, &a, &cfg()).unwrap();
        assert!(d.approx_eq(&to_multivector(&a), 1e-8));
    }

    #[test]
    fn unit_sphere_gauss_map_rotates_at_unit_rate() {
        let e = sphere();
        let t = gauss_map(e.chart());
        let u = [1.1, -0.4];
        let frame = frame_at(e.chart(), &u, &cfg()).unwrap();
        for j in 0..2 {
            let d = directional_derivative(&t, &u, frame.tau(j), &cfg()).unwrap();
            assert!((d.norm() - 1.0).abs() < 1e-8, "{}", d.norm());
            assert_eq!(d.grades().single(), Some(2));
        }
    }

    #[test]
    fn non_tangent_direction_is_rejected() {
        let e = sphere();
        let t = gauss_map(e.chart());
        let u = [1.0, 0.0];
        let frame = frame_at(e.chart(), &u, &cfg()).unwrap();
        let n = frame.normal_vector(0).clone();
        assert!(matches!(
            directional_derivative(&t, &u, &n, &cfg()),
            Err(GeoError::NotTangent(_))
        ));
    }

    #[test]
    fn stencil_leaving_domain_is_an_error() {
        let e = sphere();
        let x = MultivectorField::identity(e.chart());
        let edge = [0.2, 0.0];
        assert!(matches!(
            vector_derivative(&x, &edge, &cfg()),
            Err(GeoError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn catenoid_gauss_map_is_monogenic() {
        let e = get_default("catenoid").unwrap();
        let t = gauss_map(e.chart());
        for u in e.chart.domain().grid(&[3], 0.1).unwrap() {
            let d = derivatives(&t, &u, &cfg()).unwrap();
            assert!(d.left().norm() < 1e-6);
            assert!(d.right().norm() < 1e-6);
        }
    }

    #[test]
    fn monogenicity_terms_are_equivalent_for_homogeneous_fields() {
        for name in ["sphere", "catenoid", "torus", "helicoid"] {
            let e = get_default(name).unwrap();
            let t = gauss_map(e.chart());
            let d = derivatives(&t, &[0.7, 0.3], &cfg()).unwrap();
            let (l, r) = (d.left().norm(), d.right().norm());
            assert!((l - r).abs() < 1e-8, "{name}: {l} vs {r}");
        }
    }

    #[test]
    fn gauss_map_has_no_divergence_and_normal_map_no_curl() {
        for name in ["sphere", "torus", "clifford_torus", "graph"] {
            let e = get_default(name).unwrap();
            let u = e.chart.domain().center();
            let dt = derivatives(&gauss_map(e.chart()), &u, &cfg()).unwrap();
            assert!(dt.divergence().norm() < 1e-8, "{name}");
            let dn = derivatives(&normal_map(e.chart()), &u, &cfg()).unwrap();
            assert!(dn.curl().norm() < 1e-8, "{name}");
        }
    }

    #[test]
    fn normal_map_is_hodge_of_gauss_map() {
        for name in ["sphere", "clifford_torus", "helicoid"] {
            let e = get_default(name).unwrap();
            for u in e.chart.domain().grid(&[4, 5], 0.1).unwrap() {
                let t = gauss_map(e.chart()).eval(&u).unwrap();
                let n = normal_map(e.chart()).eval(&u).unwrap();
                let i = Multivector::pseudoscalar(t.dim());
                assert!((&t * &n).approx_eq(&i, 1e-9), "{name}");
                assert!(n.approx_eq(&t.hodge(), 1e-12));
            }
        }
    }

    #[test]
    fn vector_derivative_is_frame_independent() {
        let e = get_default("torus").unwrap();
        let c = e.chart();
        let f = MultivectorField::from_ambient(c, |x| {
            Multivector::vector(&[x[0] * x[1], x[2], 1.0]) + Multivector::scalar(3, x[0] * x[0])
        });
        let u = [0.4, 1.3];
        let frame = frame_at(c, &u, &cfg()).unwrap();
        let reference = vector_derivative(&f, &u, &cfg()).unwrap();
        for theta in [0.3, 1.7, -2.5] {
            let (s, co) = f64::sin_cos(theta);
            let a = frame.tau(0) * co + frame.tau(1) * s;
            let b = frame.tau(0) * (-s) + frame.tau(1) * co;
            let rotated = vector_derivative_in_frame(&f, &u, &[a, b], &cfg()).unwrap();
            assert!(rotated.approx_eq(&reference, 1e-8));
        }
    }

    #[test]
    fn left_right_relations() {
        let e = get_default("helicoid").unwrap();
        let c = e.chart();
        let f = MultivectorField::from_ambient(c, |x| {
            let v = Multivector::vector(x.as_slice());
            (&v ^ &Multivector::basis_vector(3, 2)) + v * x[1] + Multivector::scalar(3, x[0])
        });
        let d = derivatives(&f, &[0.5, 0.2], &cfg()).unwrap();
        assert!(d
            .divergence()
            .approx_eq(&d.right_divergence().involute(), 1e-8));
        assert!(d.curl().approx_eq(&(-d.right_curl().involute()), 1e-8));
    }

    #[test]
    fn graded_laplacian_routes_agree() {
        for name in ["sphere", "torus", "clifford_torus"] {
            let e = get_default(name).unwrap();
            let u = [0.9, 0.4];
            let routes = graded_laplacian_routes(&gauss_map(e.chart()), &u, &cfg()).unwrap();
            assert!(routes.spread() < 1e-6, "{name}: {}", routes.spread());
            let routes =
                graded_laplacian_routes(&MultivectorField::identity(e.chart()), &u, &cfg())
                    .unwrap();
            assert!(routes.spread() < 1e-6, "{name}: {}", routes.spread());
            assert!(routes.projected.norm() < 1e-4);
        }
    }

    #[test]
    fn identity_has_vanishing_second_derivative() {
        let e = get_default("torus").unwrap();
        let x = MultivectorField::identity(e.chart());
        assert!(second_derivative(&x, &[0.1, 2.0], &cfg()).unwrap().norm() < 1e-4);
    }

    #[test]
    fn clifford_torus_gauss_map_is_graded_harmonic() {
        let e = get_default("clifford_torus").unwrap();
        let d = graded_laplacian(&gauss_map(e.chart()), &[0.3, -1.0], &cfg()).unwrap();
        assert!(d.norm() < 1e-3);
    }

    #[test]
    fn central_differences_converge_at_second_order() {
        let e = sphere();
        let t = gauss_map(e.chart());
        let u = [1.0, 0.5];
        let exact = derivatives(&t, &u, &cfg().with_h1(1e-4)).unwrap().left();
        let err = |h: f64| (derivatives(&t, &u, &cfg().with_h1(h)).unwrap().left() - &exact).norm();
        let ratio = err(2e-2) / err(1e-2);
        assert!((3.0..=5.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn richardson_improves_accuracy() {
        let e = sphere();
        let x = MultivectorField::identity(e.chart());
        let u = [1.0, 0.5];
        let frame = frame_at(e.chart(), &u, &cfg()).unwrap();
        let a = frame.tau(1).clone();
        let want = to_multivector(&a);
        let coarse = FDConfig { h1: 2e-2, ..cfg() };
        let plain = (directional_derivative(&x, &u, &a, &coarse).unwrap() - &want).norm();
        let rich = (directional_derivative(
            &x,
            &u,
            &a,
            &FDConfig {
                richardson: true,
                ..coarse
            },
        )
        .unwrap()
            - &want)
            .norm();
        assert!(rich < 0.05 * plain, "{rich} vs {plain}");
    }

    #[test]
    fn works_without_analytic_jacobian() {
        let domain = Domain::new(vec![0.3, -1.0], vec![2.8, 1.0]).unwrap();
        let chart = FnChart::new(3, domain, |u| {
            Vector::from_vec(vec![
                u[0].sin() * u[1].cos(),
                u[0].sin() * u[1].sin(),
                u[0].cos(),
            ])
        });
        let x = MultivectorField::identity(&chart);
        let d = vector_derivative(&x, &[1.2, 0.1], &cfg()).unwrap();
        assert!(d.approx_eq(&Multivector::scalar(3, 2.0), 1e-6));
    }

    #[test]
    fn three_sphere_identity_derivative() {
        let mut p = BTreeMap::new();
        p.insert("m".to_string(), 3.0);
        let e = get("sphere", &p).unwrap();
        let d = vector_derivative(
            &MultivectorField::identity(e.chart()),
            &[1.0, 1.0, 0.5],
            &cfg(),
        )
        .unwrap();
        assert!(d.approx_eq(&Multivector::scalar(4, 3.0), 1e-8));
    }
}
