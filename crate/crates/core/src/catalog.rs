//! Built-in charts with analytic curvature data.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::blade::{hyperplane_blade, UnitBlade, Vector};
use crate::chart::{gauss_blade_at, Chart, Domain, FnChart};
use crate::error::{GeoError, Result};

pub type ClosedForm = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Facts known in closed form for a catalog entry.
#[derive(Clone)]
pub struct ExpectedFacts {
    pub is_minimal: bool,
    pub is_parallel_h: bool,
    pub codim: usize,
    /// |B|² as a function of the parameters.
    pub b2: Option<ClosedForm>,
    /// |H| as a function of the parameters.
    pub h_norm: Option<ClosedForm>,
}

impl fmt::Debug for ExpectedFacts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExpectedFacts")
            .field("is_minimal", &self.is_minimal)
            .field("is_parallel_h", &self.is_parallel_h)
            .field("codim", &self.codim)
            .field("b2", &self.b2.is_some())
            .field("h_norm", &self.h_norm.is_some())
            .finish()
    }
}

/// A sub-domain on which ⟨𝔗, I⟩ stays positive for a fixed reference blade.
#[derive(Debug, Clone)]
pub struct LogPatch {
    pub domain: Domain,
    pub reference: UnitBlade,
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub chart: Arc<dyn Chart>,
    pub expected: ExpectedFacts,
    pub log_patch: Option<LogPatch>,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("intrinsic_dim", &self.chart.intrinsic_dim())
            .field("ambient_dim", &self.chart.ambient_dim())
            .field("expected", &self.expected)
            .field("log_patch", &self.log_patch)
            .finish()
    }
}

impl CatalogEntry {
    pub fn chart(&self) -> &dyn Chart {
        self.chart.as_ref()
    }

    /// Same entry restricted to its log patch, if it has one.
    pub fn on_log_patch(&self) -> Option<CatalogEntry> {
        let patch = self.log_patch.as_ref()?;
        let restricted = Restricted {
            inner: self.chart.clone(),
            domain: patch.domain.clone(),
        };
        Some(CatalogEntry {
            chart: Arc::new(restricted),
            ..self.clone()
        })
    }
}

struct Restricted {
    inner: Arc<dyn Chart>,
    domain: Domain,
}

impl Chart for Restricted {
    fn intrinsic_dim(&self) -> usize {
        self.inner.intrinsic_dim()
    }
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn eval(&self, u: &[f64]) -> Vector {
        self.inner.eval(u)
    }
    fn jacobian(&self, u: &[f64]) -> Option<DMatrix<f64>> {
        self.inner.jacobian(u)
    }
}

pub const NAMES: [&str; 8] = [
    "plane",
    "graph",
    "sphere",
    "cylinder",
    "torus",
    "catenoid",
    "helicoid",
    "clifford_torus",
];

pub fn list() -> &'static [&'static str] {
    &NAMES
}

/// Parameter names and defaults of an entry.
pub fn default_params(name: &str) -> Result<BTreeMap<String, f64>> {
    let pairs: &[(&str, f64)] = match name {
        "plane" => &[("m", 2.0), ("n", 3.0)],
        "graph" => &[("a", 1.0), ("b", 0.0), ("c", 0.0), ("d", 0.0)],
        "sphere" => &[("r", 1.0), ("m", 2.0)],
        "cylinder" => &[("r", 1.0)],
        "torus" => &[("R", 2.0), ("r", 0.5)],
        "catenoid" => &[("c", 1.0)],
        "helicoid" => &[("c", 1.0)],
        "clifford_torus" => &[("r", std::f64::consts::FRAC_1_SQRT_2)],
        _ => {
            return Err(GeoError::UnknownManifold {
                name: name.to_string(),
                valid: NAMES.join(", "),
            })
        }
    };
    Ok(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
}

fn merged(name: &str, overrides: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
    let mut p = default_params(name)?;
    for (k, v) in overrides {
        if !p.contains_key(k) {
            let valid: Vec<&str> = p.keys().map(String::as_str).collect();
            return Err(GeoError::InvalidParameter(format!(
                "unknown parameter '{k}' for {name}; valid: {}",
                valid.join(", ")
            )));
        }
        if !v.is_finite() {
            return Err(GeoError::InvalidParameter(format!(
                "parameter {k} = {v} is not finite"
            )));
        }
        p.insert(k.clone(), *v);
    }
    Ok(p)
}

fn positive(p: &BTreeMap<String, f64>, key: &str) -> Result<f64> {
    let v = p[key];
    if !(v > 0.0) {
        return Err(GeoError::InvalidParameter(format!(
            "{key} = {v} must be positive"
        )));
    }
    Ok(v)
}

fn integer(p: &BTreeMap<String, f64>, key: &str) -> Result<usize> {
    let v = p[key];
    if v.fract() != 0.0 || v < 1.0 {
        return Err(GeoError::InvalidParameter(format!(
            "{key} = {v} must be a positive integer"
        )));
    }
    Ok(v as usize)
}

fn dom(lower: &[f64], upper: &[f64]) -> Domain {
    Domain::new(lower.to_vec(), upper.to_vec()).expect("static domain is valid")
}

fn constant(c: f64) -> Option<ClosedForm> {
    Some(Arc::new(move |_| c))
}

fn facts(
    minimal: bool,
    parallel: bool,
    codim: usize,
    b2: Option<ClosedForm>,
    h: Option<ClosedForm>,
) -> ExpectedFacts {
    ExpectedFacts {
        is_minimal: minimal,
        is_parallel_h: parallel,
        codim,
        b2,
        h_norm: h,
    }
}

fn jac(rows: usize, cols: usize, data: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(rows, cols, data)
}

/// Gauss map at `u` as the log-patch reference blade.
fn tangent_reference(chart: &dyn Chart, u: &[f64]) -> UnitBlade {
    let t = gauss_blade_at(chart, u).expect("reference point is regular");
    UnitBlade::normalized(t).expect("Gauss map is a unit blade")
}

/// Looks up an entry, overriding default parameters with `params`.
pub fn get(name: &str, params: &BTreeMap<String, f64>) -> Result<CatalogEntry> {
    let p = merged(name, params)?;
    let (chart, expected, log_patch): (Arc<dyn Chart>, ExpectedFacts, Option<LogPatch>) = match name
    {
        "plane" => plane(&p)?,
        "graph" => graph(&p),
        "sphere" => sphere(&p)?,
        "cylinder" => cylinder(&p)?,
        "torus" => torus(&p)?,
        "catenoid" => catenoid(&p)?,
        "helicoid" => helicoid(&p)?,
        "clifford_torus" => clifford_torus(&p)?,
        _ => unreachable!("merged() rejects unknown names"),
    };
    Ok(CatalogEntry {
        name: name.to_string(),
        params: p,
        chart,
        expected,
        log_patch,
    })
}

/// Entry with default parameters.
pub fn get_default(name: &str) -> Result<CatalogEntry> {
    get(name, &BTreeMap::new())
}

type Built = (Arc<dyn Chart>, ExpectedFacts, Option<LogPatch>);

fn plane(p: &BTreeMap<String, f64>) -> Result<Built> {
    let m = integer(p, "m")?;
    let n = integer(p, "n")?;
    if m > n || n > crate::multivector::MAX_DIM {
        return Err(GeoError::InvalidParameter(format!(
            "plane needs 1 ≤ m ≤ n ≤ {}, got m = {m}, n = {n}",
            crate::multivector::MAX_DIM
        )));
    }
    let domain = dom(&vec![-1.0; m], &vec![1.0; m]);
    let chart = FnChart::new(n, domain.clone(), move |u| {
        Vector::from_fn(n, |i, _| if i < m { u[i] } else { 0.0 })
    })
    .with_jacobian(move |_| DMatrix::from_fn(n, m, |i, j| if i == j { 1.0 } else { 0.0 }));
    let reference = tangent_reference(&chart, &domain.center());
    Ok((
        Arc::new(chart),
        facts(true, true, n - m, constant(0.0), constant(0.0)),
        Some(LogPatch { domain, reference }),
    ))
}

/// z = a u² + b uv + c v² + d u³ over [−½, ½]².
fn graph(p: &BTreeMap<String, f64>) -> Built {
    let (a, b, c, d) = (p["a"], p["b"], p["c"], p["d"]);
    let fu = move |u: f64, v: f64| 2.0 * a * u + b * v + 3.0 * d * u * u;
    let fv = move |u: f64, v: f64| b * u + 2.0 * c * v;
    let chart = FnChart::new(3, dom(&[-0.5, -0.5], &[0.5, 0.5]), move |x| {
        let (u, v) = (x[0], x[1]);
        Vector::from_vec(vec![
            u,
            v,
            a * u * u + b * u * v + c * v * v + d * u * u * u,
        ])
    })
    .with_jacobian(move |x| jac(3, 2, &[1.0, 0.0, 0.0, 1.0, fu(x[0], x[1]), fv(x[0], x[1])]));
    // Principal data from the graph formulas: ℋ = div(∇f/W), K = det(Hess f)/W⁴.
    let curv = move |x: &[f64]| -> (f64, f64) {
        let (u, v) = (x[0], x[1]);
        let (p_, q) = (fu(u, v), fv(u, v));
        let (r, s, t) = (2.0 * a + 6.0 * d * u, b, 2.0 * c);
        let w2 = 1.0 + p_ * p_ + q * q;
        let mean = ((1.0 + q * q) * r - 2.0 * p_ * q * s + (1.0 + p_ * p_) * t) / w2.powf(1.5);
        let gauss = (r * t - s * s) / (w2 * w2);
        (mean, gauss)
    };
    let flat = a == 0.0 && b == 0.0 && c == 0.0 && d == 0.0;
    (
        Arc::new(chart),
        facts(
            flat,
            flat,
            1,
            Some(Arc::new(move |x| {
                let (h, k) = curv(x);
                h * h - 2.0 * k
            })),
            Some(Arc::new(move |x| curv(x).0.abs())),
        ),
        None,
    )
}

fn sphere(p: &BTreeMap<String, f64>) -> Result<Built> {
    let r = positive(p, "r")?;
    let m = integer(p, "m")?;
    let (chart, patch): (FnChart, LogPatch) = match m {
        2 => {
            let chart = FnChart::new(3, dom(&[0.2, -PI], &[PI - 0.2, PI]), move |x| {
                let (t, f) = (x[0], x[1]);
                Vector::from_vec(vec![
                    r * t.sin() * f.cos(),
                    r * t.sin() * f.sin(),
                    r * t.cos(),
                ])
            })
            .with_jacobian(move |x| {
                let (t, f) = (x[0], x[1]);
                let (st, ct, sf, cf) = (t.sin(), t.cos(), f.sin(), f.cos());
                jac(
                    3,
                    2,
                    &[
                        r * ct * cf,
                        -r * st * sf,
                        r * ct * sf,
                        r * st * cf,
                        -r * st,
                        0.0,
                    ],
                )
            });
            let e3 = Vector::from_vec(vec![0.0, 0.0, 1.0]);
            let patch = LogPatch {
                domain: dom(&[0.2, -1.0], &[1.2, 1.0]),
                reference: hyperplane_blade(&e3)?,
            };
            (chart, patch)
        }
        3 => {
            // First coordinate negated so that the Jacobian columns followed
            // by the outward normal are positively oriented.
            let chart = FnChart::new(
                4,
                dom(&[0.2, 0.2, -PI], &[PI - 0.2, PI - 0.2, PI]),
                move |x| {
                    let (a, t, f) = (x[0], x[1], x[2]);
                    Vector::from_vec(vec![
                        -r * a.cos(),
                        r * a.sin() * t.cos(),
                        r * a.sin() * t.sin() * f.cos(),
                        r * a.sin() * t.sin() * f.sin(),
                    ])
                },
            )
            .with_jacobian(move |x| {
                let (a, t, f) = (x[0], x[1], x[2]);
                let (sa, ca, st, ct, sf, cf) =
                    (a.sin(), a.cos(), t.sin(), t.cos(), f.sin(), f.cos());
                jac(
                    4,
                    3,
                    &[
                        r * sa,
                        0.0,
                        0.0,
                        r * ca * ct,
                        -r * sa * st,
                        0.0,
                        r * ca * st * cf,
                        r * sa * ct * cf,
                        -r * sa * st * sf,
                        r * ca * st * sf,
                        r * sa * ct * sf,
                        r * sa * st * cf,
                    ],
                )
            });
            let pole = Vector::from_vec(vec![-1.0, 0.0, 0.0, 0.0]);
            let patch = LogPatch {
                domain: dom(&[0.2, 0.3, -1.0], &[1.2, PI - 0.3, 1.0]),
                reference: hyperplane_blade(&pole)?,
            };
            (chart, patch)
        }
        _ => {
            return Err(GeoError::InvalidParameter(format!(
                "sphere supports m ∈ {{2, 3}}, got {m}"
            )))
        }
    };
    let mf = m as f64;
    Ok((
        Arc::new(chart),
        facts(false, true, 1, constant(mf / (r * r)), constant(mf / r)),
        Some(patch),
    ))
}

fn cylinder(p: &BTreeMap<String, f64>) -> Result<Built> {
    let r = positive(p, "r")?;
    let chart = FnChart::new(3, dom(&[-PI, -1.0], &[PI, 1.0]), move |x| {
        Vector::from_vec(vec![r * x[0].cos(), r * x[0].sin(), x[1]])
    })
    .with_jacobian(move |x| jac(3, 2, &[-r * x[0].sin(), 0.0, r * x[0].cos(), 0.0, 0.0, 1.0]));
    let reference = tangent_reference(&chart, &[0.0, 0.0]);
    Ok((
        Arc::new(chart),
        facts(false, true, 1, constant(1.0 / (r * r)), constant(1.0 / r)),
        Some(LogPatch {
            domain: dom(&[-0.6, -0.5], &[0.6, 0.5]),
            reference,
        }),
    ))
}

fn torus(p: &BTreeMap<String, f64>) -> Result<Built> {
    let big = positive(p, "R")?;
    let r = positive(p, "r")?;
    if r >= big {
        return Err(GeoError::InvalidParameter(format!(
            "torus needs r < R, got r = {r}, R = {big}"
        )));
    }
    let chart = FnChart::new(3, dom(&[-PI, -PI], &[PI, PI]), move |x| {
        let (u, v) = (x[0], x[1]);
        let w = big + r * v.cos();
        Vector::from_vec(vec![w * u.cos(), w * u.sin(), r * v.sin()])
    })
    .with_jacobian(move |x| {
        let (u, v) = (x[0], x[1]);
        let w = big + r * v.cos();
        jac(
            3,
            2,
            &[
                -w * u.sin(),
                -r * v.sin() * u.cos(),
                w * u.cos(),
                -r * v.sin() * u.sin(),
                0.0,
                r * v.cos(),
            ],
        )
    });
    // Principal curvatures 1/r (meridian) and cos v/(R + r cos v) (parallel).
    let k2 = move |x: &[f64]| x[1].cos() / (big + r * x[1].cos());
    Ok((
        Arc::new(chart),
        facts(
            false,
            false,
            1,
            Some(Arc::new(move |x| 1.0 / (r * r) + k2(x).powi(2))),
            Some(Arc::new(move |x| (1.0 / r + k2(x)).abs())),
        ),
        None,
    ))
}

fn catenoid(p: &BTreeMap<String, f64>) -> Result<Built> {
    let c = positive(p, "c")?;
    let chart = FnChart::new(3, dom(&[-PI, -c], &[PI, c]), move |x| {
        let (u, v) = (x[0], x[1]);
        let ch = (v / c).cosh();
        Vector::from_vec(vec![c * ch * u.cos(), c * ch * u.sin(), v])
    })
    .with_jacobian(move |x| {
        let (u, v) = (x[0], x[1]);
        let (ch, sh) = ((v / c).cosh(), (v / c).sinh());
        jac(
            3,
            2,
            &[
                -c * ch * u.sin(),
                sh * u.cos(),
                c * ch * u.cos(),
                sh * u.sin(),
                0.0,
                1.0,
            ],
        )
    });
    let reference = tangent_reference(&chart, &[0.0, 0.0]);
    Ok((
        Arc::new(chart),
        facts(
            true,
            true,
            1,
            Some(Arc::new(move |x| 2.0 / (c * c * (x[1] / c).cosh().powi(4)))),
            constant(0.0),
        ),
        Some(LogPatch {
            domain: dom(&[-0.5, -0.5 * c], &[0.5, 0.5 * c]),
            reference,
        }),
    ))
}

fn helicoid(p: &BTreeMap<String, f64>) -> Result<Built> {
    let c = positive(p, "c")?;
    let chart = FnChart::new(3, dom(&[-PI, -1.0], &[PI, 1.0]), move |x| {
        let (u, v) = (x[0], x[1]);
        Vector::from_vec(vec![v * u.cos(), v * u.sin(), c * u])
    })
    .with_jacobian(move |x| {
        let (u, v) = (x[0], x[1]);
        jac(3, 2, &[-v * u.sin(), u.cos(), v * u.cos(), u.sin(), c, 0.0])
    });
    let reference = tangent_reference(&chart, &[0.0, 0.0]);
    Ok((
        Arc::new(chart),
        facts(
            true,
            true,
            1,
            Some(Arc::new(move |x| {
                2.0 * c * c / (c * c + x[1] * x[1]).powi(2)
            })),
            constant(0.0),
        ),
        Some(LogPatch {
            domain: dom(&[-0.5, -0.5], &[0.5, 0.5]),
            reference,
        }),
    ))
}

fn clifford_torus(p: &BTreeMap<String, f64>) -> Result<Built> {
    let r = positive(p, "r")?;
    let chart = FnChart::new(4, dom(&[-PI, -PI], &[PI, PI]), move |x| {
        let (u, v) = (x[0], x[1]);
        Vector::from_vec(vec![r * u.cos(), r * u.sin(), r * v.cos(), r * v.sin()])
    })
    .with_jacobian(move |x| {
        let (u, v) = (x[0], x[1]);
        jac(
            4,
            2,
            &[
                -r * u.sin(),
                0.0,
                r * u.cos(),
                0.0,
                0.0,
                -r * v.sin(),
                0.0,
                r * v.cos(),
            ],
        )
    });
    let reference = tangent_reference(&chart, &[0.0, 0.0]);
    Ok((
        Arc::new(chart),
        facts(
            false,
            true,
            2,
            constant(2.0 / (r * r)),
            constant(std::f64::consts::SQRT_2 / r),
        ),
        Some(LogPatch {
            domain: dom(&[-0.6, -0.6], &[0.6, 0.6]),
            reference,
        }),
    ))
}
