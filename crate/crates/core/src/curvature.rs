//! Second fundamental form, shape bivectors and the mean curvature vector.
//!
//! Coefficients h_αjl = ⟨n_α, (τ_l·∂)τ_j⟩ come from central differences of the
//! Gram–Schmidt tangent frame field; the normal frame field keeps the pivots
//! chosen at the centre so it is smooth across the stencil. The mean
//! curvature vector is available by three routes that share no
//! differentiated quantity: the trace of h, the Gauss map derivative
//! −⟨(∂𝔗)𝔗⁻¹⟩₁, and the normal divergences −Σ⟨∂,n_α⟩n_α.

use crate::blade::{to_multivector, to_vector, UnitBlade, Vector};
use crate::calculus::{
    derivatives, derivatives_at_frame, gauss_map, normal_map, second_derivatives, Derivatives,
    MultivectorField,
};
use crate::chart::{frame_at, frame_at_with_pivots, Chart, FDConfig, FramePoint};
use crate::error::{GeoError, Result};
use crate::laplace::laplace_beltrami;
use crate::Multivector;

fn shifted(u: &[f64], dir: &Vector, t: f64) -> Vec<f64> {
    u.iter().zip(dir.iter()).map(|(a, d)| a + t * d).collect()
}

/// Central difference of a flat list of values, as in
/// [`crate::calculus`] but without the multivector wrapper.
fn central_flat(f: impl Fn(f64) -> Result<Vec<f64>>, h: f64, richardson: bool) -> Result<Vec<f64>> {
    let diff = |h: f64| -> Result<Vec<f64>> {
        let (p, q) = (f(h)?, f(-h)?);
        Ok(p.iter().zip(&q).map(|(a, b)| (a - b) * (0.5 / h)).collect())
    };
    if richardson {
        let (coarse, fine) = (diff(h)?, diff(0.5 * h)?);
        Ok(fine
            .iter()
            .zip(&coarse)
            .map(|(f, c)| (4.0 * f - c) / 3.0)
            .collect())
    } else {
        diff(h)
    }
}

/// Rates of change of the frame fields along each centre tangent direction.
#[derive(Debug, Clone)]
pub struct FrameRates {
    /// `tangent[l][j]` = (τ_l·∂)τⱼ.
    pub tangent: Vec<Vec<Vector>>,
    /// `normal[l][α]` = (τ_l·∂)n_α, normals with frozen pivots.
    pub normal: Vec<Vec<Vector>>,
}

/// Differentiates the tangent and normal frame fields at `center` with step
/// `h1` along every pullback direction.
pub fn frame_rates(chart: &dyn Chart, center: &FramePoint, cfg: &FDConfig) -> Result<FrameRates> {
    let n = center.n();
    let (m, k) = (center.m(), center.k());
    let mut tangent = Vec::with_capacity(m);
    let mut normal = Vec::with_capacity(m);
    for udot in &center.pullbacks {
        let pack = |t: f64| -> Result<Vec<f64>> {
            let f = frame_at_with_pivots(chart, &shifted(&center.u, udot, t), &center.pivots, cfg)?;
            let mut c = Vec::with_capacity((m + k) * n);
            for v in f.tangent.vectors().iter().chain(f.normal.vectors()) {
                c.extend(v.iter());
            }
            Ok(c)
        };
        let c = central_flat(pack, cfg.h1, cfg.richardson)?;
        let vecs: Vec<Vector> = (0..m + k)
            .map(|i| Vector::from_column_slice(&c[i * n..(i + 1) * n]))
            .collect();
        tangent.push(vecs[..m].to_vec());
        normal.push(vecs[m..].to_vec());
    }
    Ok(FrameRates { tangent, normal })
}

/// Curvature data at one point.
#[derive(Debug, Clone)]
pub struct SecondFundamentalData {
    pub frame: FramePoint,
    /// `h[α][j][l]` = ⟨n_α, (τ_l·∂)τⱼ⟩.
    pub h: Vec<Vec<Vec<f64>>>,
    /// S_{τⱼ} = Σ_{l,α} h_αjl τ_l∧n_α.
    pub shape: Vec<Multivector>,
    /// H = Σ_α Σ_l h_αll n_α.
    pub mean_curvature: Vector,
    /// |B|² = Σ h².
    pub norm_b2: f64,
    /// Σⱼ S_{τⱼ}∧S_{τⱼ}.
    pub four_vector: Multivector,
}

impl SecondFundamentalData {
    pub fn mean_curvature_mv(&self) -> Multivector {
        to_multivector(&self.mean_curvature)
    }

    /// max |h_αjl − h_αlj|.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for ha in &self.h {
            for (j, row) in ha.iter().enumerate() {
                for (l, v) in row.iter().enumerate() {
                    worst = worst.max((v - ha[l][j]).abs());
                }
            }
        }
        worst
    }

    /// Σⱼ |S_{τⱼ}|².
    pub fn shape_norm_sum(&self) -> f64 {
        self.shape.iter().map(Multivector::norm_squared).sum()
    }

    /// Σⱼ τⱼ∧S_{τⱼ}, zero by symmetry of h.
    pub fn tangent_wedge_shape(&self) -> Multivector {
        let n = self.frame.n();
        self.frame
            .tangent
            .vectors()
            .iter()
            .zip(&self.shape)
            .fold(Multivector::zero(n), |acc, (t, s)| {
                acc + (to_multivector(t) ^ s)
            })
    }

    /// Tangential part of H, which should vanish.
    pub fn tangential_mean_curvature(&self) -> Vector {
        self.frame.tangential(&self.mean_curvature)
    }
}

/// h, S, H, |B|² and the 4-vector term at `u`.
pub fn second_fundamental(
    chart: &dyn Chart,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<SecondFundamentalData> {
    let frame = frame_at(chart, u, cfg)?;
    let rates = frame_rates(chart, &frame, cfg)?;
    Ok(assemble(frame, &rates))
}

fn assemble(frame: FramePoint, rates: &FrameRates) -> SecondFundamentalData {
    let (n, m, k) = (frame.n(), frame.m(), frame.k());
    let h: Vec<Vec<Vec<f64>>> = (0..k)
        .map(|a| {
            let na = frame.normal_vector(a);
            (0..m)
                .map(|j| (0..m).map(|l| na.dot(&rates.tangent[l][j])).collect())
                .collect()
        })
        .collect();
    let taus: Vec<Multivector> = frame.tangent.vectors().iter().map(to_multivector).collect();
    let normals: Vec<Multivector> = frame.normal.vectors().iter().map(to_multivector).collect();
    let shape: Vec<Multivector> = (0..m)
        .map(|j| {
            let mut s = Multivector::zero(n);
            for (a, na) in normals.iter().enumerate() {
                for (l, tl) in taus.iter().enumerate() {
                    s += (tl ^ na) * h[a][j][l];
                }
            }
            s
        })
        .collect();
    let mut mean_curvature = Vector::zeros(n);
    for (a, ha) in h.iter().enumerate() {
        let trace: f64 = (0..m).map(|l| ha[l][l]).sum();
        mean_curvature.axpy(trace, frame.normal_vector(a), 1.0);
    }
    let norm_b2 = h.iter().flatten().flatten().map(|x| x * x).sum();
    let four_vector = shape
        .iter()
        .fold(Multivector::zero(n), |acc, s| acc + s.wedge(s));
    SecondFundamentalData {
        frame,
        h,
        shape,
        mean_curvature,
        norm_b2,
        four_vector,
    }
}

/// H from the Gauss map: ⟨−(∂𝔗)𝔗⁻¹⟩₁ together with the norm of the
/// discarded other grades.
#[derive(Debug, Clone)]
pub struct GaussRoute {
    pub mean_curvature: Vector,
    pub off_grade: f64,
}

pub fn mean_curvature_via_gauss(
    chart: &dyn Chart,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<GaussRoute> {
    let field = gauss_map(chart);
    let d = derivatives(&field, u, cfg)?;
    Ok(gauss_route_from(&d))
}

fn gauss_route_from(d: &Derivatives) -> GaussRoute {
    let full = -(d.left() * d.value.reverse());
    let v = full.grade(1);
    GaussRoute {
        off_grade: (&full - &v).norm(),
        mean_curvature: to_vector(&v),
    }
}

/// H = −Σ_α ⟨∂,n_α⟩ n_α from a frozen-pivot normal frame field.
pub fn mean_curvature_via_normal_frame(
    chart: &dyn Chart,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<Vector> {
    let frame = frame_at(chart, u, cfg)?;
    let rates = frame_rates(chart, &frame, cfg)?;
    Ok(normal_route_from(&frame, &rates))
}

/// ⟨∂, n_α⟩ for every normal in the frozen-pivot frame.
fn normal_divergences(frame: &FramePoint, rates: &FrameRates) -> Vec<f64> {
    (0..frame.k())
        .map(|a| {
            (0..frame.m())
                .map(|j| frame.tau(j).dot(&rates.normal[j][a]))
                .sum()
        })
        .collect()
}

fn normal_route_from(frame: &FramePoint, rates: &FrameRates) -> Vector {
    let mut h = Vector::zeros(frame.n());
    for (a, div) in normal_divergences(frame, rates).into_iter().enumerate() {
        h.axpy(-div, frame.normal_vector(a), 1.0);
    }
    h
}

/// The three mean curvature vectors at one point.
#[derive(Debug, Clone)]
pub struct MeanCurvatureRoutes {
    pub coefficients: Vector,
    pub gauss: Vector,
    pub normal_frame: Vector,
    pub gauss_off_grade: f64,
}

impl MeanCurvatureRoutes {
    /// Largest pairwise difference divided by max(1, |H|).
    pub fn spread(&self) -> f64 {
        let v = [&self.coefficients, &self.gauss, &self.normal_frame];
        let scale = v.iter().map(|x| x.norm()).fold(1.0, f64::max);
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                worst = worst.max((v[i] - v[j]).norm());
            }
        }
        worst / scale
    }
}

pub fn mean_curvature_routes(
    chart: &dyn Chart,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<MeanCurvatureRoutes> {
    let frame = frame_at(chart, u, cfg)?;
    let rates = frame_rates(chart, &frame, cfg)?;
    let normal_frame = normal_route_from(&frame, &rates);
    let coefficients = assemble(frame, &rates).mean_curvature;
    let g = mean_curvature_via_gauss(chart, u, cfg)?;
    Ok(MeanCurvatureRoutes {
        coefficients,
        gauss: g.mean_curvature,
        normal_frame,
        gauss_off_grade: g.off_grade,
    })
}

/// u ↦ H(u) from the h coefficients, differentiated internally with `h1`.
pub fn mean_curvature_field<'a>(chart: &'a dyn Chart, cfg: &FDConfig) -> MultivectorField<'a> {
    let cfg = *cfg;
    MultivectorField::new(chart, move |u| {
        Ok(second_fundamental(chart, u, &cfg)?.mean_curvature_mv())
    })
}

/// First-order stencil of a field that is itself built from derivatives:
/// the outer step `h2` is used.
pub fn outer_derivatives(
    field: &MultivectorField<'_>,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<Derivatives> {
    let frame = frame_at(field.chart(), u, cfg)?;
    derivatives_at_frame(field, frame, cfg.h2, cfg.richardson)
}

/// Derivatives of the H field at `u`.
pub fn mean_curvature_derivatives(
    chart: &dyn Chart,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<Derivatives> {
    outer_derivatives(&mean_curvature_field(chart, cfg), u, cfg)
}

/// ∂∧H.
pub fn curl_of_h(chart: &dyn Chart, u: &[f64], cfg: &FDConfig) -> Result<Multivector> {
    Ok(mean_curvature_derivatives(chart, u, cfg)?.curl())
}

/// Summands of ◇𝔗 = Δ𝔗 + |B|²𝔗 − ⟨S4 𝔗⟩_m, plus (∂∧H)𝔗.
#[derive(Debug, Clone)]
pub struct ShapeTerms {
    pub gauss: Multivector,
    pub graded_laplacian: Multivector,
    pub laplace_beltrami: Multivector,
    pub b2_term: Multivector,
    pub four_vector_term: Multivector,
    pub curl_h_term: Multivector,
}

impl ShapeTerms {
    /// |◇𝔗 − (Δ𝔗 + |B|²𝔗 − ⟨S4 𝔗⟩_m)|.
    pub fn boxed_residual(&self) -> f64 {
        (&self.graded_laplacian
            - &(&self.laplace_beltrami + &self.b2_term - &self.four_vector_term))
            .norm()
    }

    /// |Δ𝔗 + |B|²𝔗 − ⟨S4 𝔗⟩_m + (∂∧H)𝔗|.
    pub fn jacobi_residual(&self) -> f64 {
        (&self.laplace_beltrami + &self.b2_term - &self.four_vector_term + &self.curl_h_term).norm()
    }
}

pub fn shape_of_derivative_terms(
    chart: &dyn Chart,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<ShapeTerms> {
    let sf = second_fundamental(chart, u, cfg)?;
    let m = sf.frame.m();
    let gauss = sf.frame.gauss.as_multivector().clone();
    let field = gauss_map(chart);
    let graded_laplacian = second_derivatives(&field, u, cfg)?.graded_laplacian();
    let laplace_beltrami = laplace_beltrami(&field, u, cfg)?;
    let curl_h = curl_of_h(chart, u, cfg)?;
    Ok(ShapeTerms {
        b2_term: &gauss * sf.norm_b2,
        four_vector_term: (&sf.four_vector * &gauss).grade(m),
        curl_h_term: curl_h * &gauss,
        gauss,
        graded_laplacian,
        laplace_beltrami,
    })
}

fn require_hypersurface(chart: &dyn Chart) -> Result<()> {
    if chart.codim() != 1 {
        return Err(GeoError::CodimensionMismatch {
            expected: 1,
            got: chart.codim(),
        });
    }
    Ok(())
}

/// ℋ = −⟨∂, n⟩ for a hypersurface.
pub fn scalar_mean_curvature(chart: &dyn Chart, u: &[f64], cfg: &FDConfig) -> Result<f64> {
    require_hypersurface(chart)?;
    let frame = frame_at(chart, u, cfg)?;
    let rates = frame_rates(chart, &frame, cfg)?;
    Ok(-normal_divergences(&frame, &rates)[0])
}

/// Hypersurface quantities at one point.
#[derive(Debug, Clone)]
pub struct HypersurfaceData {
    pub normal: Vector,
    pub mean_curvature: f64,
    pub grad_mean_curvature: Vector,
    /// S_a = n∧((a·∂)n) for a = τⱼ.
    pub shape: Vec<Multivector>,
}

pub fn hypersurface_quantities(
    chart: &dyn Chart,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<HypersurfaceData> {
    require_hypersurface(chart)?;
    let frame = frame_at(chart, u, cfg)?;
    let rates = frame_rates(chart, &frame, cfg)?;
    let normal = frame.normal_vector(0).clone();
    let nm = to_multivector(&normal);
    let shape = rates
        .normal
        .iter()
        .map(|dn| &nm ^ &to_multivector(&dn[0]))
        .collect();
    let mean_curvature = -normal_divergences(&frame, &rates)[0];
    let cfg_inner = *cfg;
    let field = MultivectorField::new(chart, move |p| {
        Ok(Multivector::scalar(
            chart.ambient_dim(),
            scalar_mean_curvature(chart, p, &cfg_inner)?,
        ))
    });
    let grad = derivatives_at_frame(&field, frame, cfg.h2, cfg.richardson)?.left();
    Ok(HypersurfaceData {
        normal,
        mean_curvature,
        grad_mean_curvature: to_vector(&grad.grade(1)),
        shape,
    })
}

/// Both sides of the logarithmic Laplacian identity at one point.
#[derive(Debug, Clone, Copy)]
pub struct LogLaplacian {
    /// −Δ ln⟨𝔗,I⟩.
    pub lhs: f64,
    /// |B|² + (Σⱼ⟨Sⱼ𝔗,I⟩² − ⟨S4 𝔗,I⟩⟨𝔗,I⟩)/⟨𝔗,I⟩².
    pub rhs: f64,
    pub norm_b2: f64,
    pub pairing: f64,
}

impl LogLaplacian {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    /// lhs − |B|², nonnegative on hypersurfaces.
    pub fn inequality_margin(&self) -> f64 {
        self.lhs - self.norm_b2
    }
}

pub fn log_blade_laplacian(
    chart: &dyn Chart,
    u: &[f64],
    reference: &UnitBlade,
    cfg: &FDConfig,
) -> Result<LogLaplacian> {
    let (n, m) = (chart.ambient_dim(), chart.intrinsic_dim());
    if reference.dim() != n {
        return Err(GeoError::DimensionMismatch {
            left: n,
            right: reference.dim(),
        });
    }
    if reference.grade() != m {
        return Err(GeoError::InvalidParameter(format!(
            "reference blade has grade {}, expected {m}",
            reference.grade()
        )));
    }
    let i = reference.as_multivector().clone();
    let i_ref = &i;
    let field = MultivectorField::new(chart, move |p| {
        let t = crate::chart::gauss_blade_at(chart, p)?;
        let c = t.inner(i_ref);
        if !(c > 0.0) {
            return Err(GeoError::NonPositivePairing(c));
        }
        Ok(Multivector::scalar(n, c.ln()))
    });
    let lhs = -laplace_beltrami(&field, u, cfg)?.scalar_part();

    let sf = second_fundamental(chart, u, cfg)?;
    let t = sf.frame.gauss.as_multivector();
    let pairing = t.inner(&i);
    if !(pairing > 0.0) {
        return Err(GeoError::NonPositivePairing(pairing));
    }
    let grad_sq: f64 = sf.shape.iter().map(|s| (s * t).inner(&i).powi(2)).sum();
    let four = (&sf.four_vector * t).inner(&i);
    let rhs = sf.norm_b2 + (grad_sq - four * pairing) / (pairing * pairing);
    Ok(LogLaplacian {
        lhs,
        rhs,
        norm_b2: sf.norm_b2,
        pairing,
    })
}

/// Residual of Δn + |B|²n + ∂ℋ and of ◇n − (Δn + |B|²n) for a hypersurface.
#[derive(Debug, Clone)]
pub struct HypersurfaceJacobi {
    pub jacobi: f64,
    pub graded: f64,
}

pub fn hypersurface_jacobi(
    chart: &dyn Chart,
    u: &[f64],
    cfg: &FDConfig,
) -> Result<HypersurfaceJacobi> {
    require_hypersurface(chart)?;
    let hs = hypersurface_quantities(chart, u, cfg)?;
    let sf = second_fundamental(chart, u, cfg)?;
    let field = normal_map(chart);
    let lap = laplace_beltrami(&field, u, cfg)?;
    let diamond = second_derivatives(&field, u, cfg)?.graded_laplacian();
    let n = to_multivector(&hs.normal);
    let b2n = &n * sf.norm_b2;
    let grad = to_multivector(&hs.grad_mean_curvature);
    Ok(HypersurfaceJacobi {
        jacobi: (&lap + &b2n + &grad).norm(),
        graded: (&diamond - &(&lap + &b2n)).norm(),
    })
}
