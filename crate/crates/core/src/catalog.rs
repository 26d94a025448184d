//! Closed-form geometry library: constant-curvature hypersurfaces in
//! definite and indefinite signatures, flat and graph controls, the
//! Veronese surface, and a set of reference curves.
//!
//! Every chart is a [`ProductChart`], so all partial derivatives are exact;
//! every curve is a [`ClosedFormCurve`] with exact derivatives. Entries
//! carry a table of known facts that the verification suites check against
//! the engines — the catalog is self-verifying.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use nalgebra::DVector;

use crate::chart::{ClosedFormParamCurve, Factor, ImmersionChart, ParamCurve, ProductChart, Term};
use crate::error::GeoError;
use crate::jets::{ClosedFormCurve, Curve};
use crate::linalg::MetricSignature;
use crate::Result;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Expected values for a catalog chart, verified by the suites.
#[derive(Debug, Clone, Default)]
pub struct KnownFacts {
    /// `<H, H>` where defined (constant over the chart).
    pub mean_curvature_sq: Option<f64>,
    /// Isotropy constant `L = <h(X,X), h(X,X)>` when constant.
    pub isotropy_constant: Option<f64>,
    /// Planarity order of normal sections.
    pub planarity_order: Option<usize>,
    /// Whether every normal section is a geodesic.
    pub geodesic_sections: Option<bool>,
    pub totally_umbilical: Option<bool>,
    /// Whether the first covariant derivative of `h` vanishes.
    pub one_parallel: Option<bool>,
    /// Whether the mean curvature vector is parallel (`D H = 0`).
    pub parallel_mean_curvature: Option<bool>,
    /// Short derivation note for the facts.
    pub note: &'static str,
}

/// A named geometry: chart, facts and optional parameter curves used by the
/// intrinsic checks.
pub struct CatalogEntry {
    pub name: String,
    pub chart: ImmersionChart,
    pub facts: KnownFacts,
    pub curves: Vec<(String, Box<dyn ParamCurve>)>,
}

impl core::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("chart", &self.chart)
            .field("facts", &self.facts)
            .finish()
    }
}

/// A named reference curve with expected Frenet data.
pub struct CatalogCurve {
    pub name: String,
    pub signature: MetricSignature,
    pub curve: Box<dyn Curve>,
    /// True when the parametrization is already unit pseudo-speed.
    pub unit_speed: bool,
    /// Natural span for sampled checks.
    pub span: f64,
    pub expected_rank: usize,
    pub expected_curvatures: Vec<f64>,
    pub is_w_curve: bool,
    pub note: &'static str,
}

impl core::fmt::Debug for CatalogCurve {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("CatalogCurve")
            .field("name", &self.name)
            .field("expected_rank", &self.expected_rank)
            .finish()
    }
}

fn ones(n: usize) -> Vec<Factor> {
    alloc::vec![Factor::One; n]
}

/// Components of the unit round sphere `S^k` in nested angle coordinates
/// `phi_1 .. phi_k`, as factor lists over `total` parameter axes starting at
/// `axis_offset`.
fn round_sphere_factors(k: usize, total: usize, axis_offset: usize) -> Vec<Vec<Factor>> {
    // Omega_0 = prod_j cos phi_j; Omega_i = sin phi_i prod_{j>i} cos phi_j.
    let mut comps = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let mut factors = ones(total);
        if i > 0 {
            factors[axis_offset + i - 1] = Factor::sin(1.0);
        }
        for j in (i + 1)..=k {
            factors[axis_offset + j - 1] = Factor::cos(1.0);
        }
        comps.push(factors);
    }
    comps
}

fn center_or_zero(center: Option<&[f64]>, dim: usize) -> Result<DVector<f64>> {
    match center {
        None => Ok(DVector::zeros(dim)),
        Some(a) => {
            if a.len() != dim {
                return Err(GeoError::Dimension {
                    expected: dim,
                    got: a.len(),
                });
            }
            Ok(DVector::from_column_slice(a))
        }
    }
}

/// Constant-curvature hypersurface `{<p - a, p - a> = 1/c}` with `c > 0`
/// in `E^{n+1}_r`: round sphere for `r = 0`, one-sheeted (de Sitter type)
/// hypersurface for `r = 1`. Charts for `r >= 2` are not provided.
pub fn pseudo_sphere(n: usize, r: usize, c: f64, center: Option<&[f64]>) -> Result<CatalogEntry> {
    if c <= 0.0 {
        return Err(GeoError::InvalidGeometry {
            reason: String::from("pseudo_sphere requires c > 0"),
        });
    }
    if n < 1 || r > n {
        return Err(GeoError::InvalidGeometry {
            reason: format!("invalid dimension/index pair (n = {n}, r = {r})"),
        });
    }
    let radius = 1.0 / c.sqrt();
    let m = n + 1;
    let sig = MetricSignature::new(m, r)?;
    let offset = center_or_zero(center, m)?;
    let (components, domain): (Vec<Vec<Term>>, Vec<(f64, f64)>) = match r {
        0 => {
            let factors = round_sphere_factors(n, n, 0);
            let comps = factors
                .into_iter()
                .map(|f| alloc::vec![Term::new(radius, f)])
                .collect();
            // The azimuth axis has no chart singularity; keep it wide enough
            // for full-period geodesics.
            let mut dom = alloc::vec![(-7.0, 7.0)];
            for _ in 1..n {
                dom.push((-1.2, 1.2));
            }
            (comps, dom)
        }
        1 => {
            // x_0 = R sinh w, x_i = R cosh w Omega_i; params (theta.., w).
            let w_axis = n - 1;
            let mut comps: Vec<Vec<Term>> = Vec::with_capacity(m);
            let mut first = ones(n);
            first[w_axis] = Factor::sinh(1.0);
            comps.push(alloc::vec![Term::new(radius, first)]);
            for mut factors in round_sphere_factors(n - 1, n, 0) {
                factors[w_axis] = Factor::cosh(1.0);
                comps.push(alloc::vec![Term::new(radius, factors)]);
            }
            let mut dom: Vec<(f64, f64)> = alloc::vec![(-7.0, 7.0)];
            for _ in 1..(n - 1) {
                dom.push((-1.2, 1.2));
            }
            dom.push((-1.4, 1.4));
            (comps, dom)
        }
        _ => {
            return Err(GeoError::InvalidGeometry {
                reason: format!("no built-in chart for index r = {r}"),
            })
        }
    };
    let chart = ImmersionChart::new(
        sig,
        r,
        domain,
        Box::new(ProductChart::new(n, components, offset)),
    )?;
    let mut curves: Vec<(String, Box<dyn ParamCurve>)> = Vec::new();
    if n == 2 && r == 0 {
        curves.push((String::from("latitude_circle"), latitude_circle()));
        curves.push((String::from("equator"), equator()));
        curves.push((String::from("spiral"), sphere_spiral()));
    }
    Ok(CatalogEntry {
        name: format!("pseudo_sphere:n={n},r={r},c={c}"),
        chart,
        facts: KnownFacts {
            mean_curvature_sq: Some(c),
            isotropy_constant: Some(c),
            planarity_order: Some(2),
            geodesic_sections: Some(true),
            totally_umbilical: Some(true),
            one_parallel: Some(true),
            parallel_mean_curvature: Some(true),
            note: "position-vector identity h(X,Y) = -c <X,Y> (p - a)",
        },
        curves,
    })
}

/// Constant-curvature hypersurface `{<p - a, p - a> = 1/c}` with `c < 0`
/// in `E^{n+1}_{r+1}`: hyperbolic space (upper sheet) for `r = 0`,
/// anti-de-Sitter type for `r = 1`.
pub fn pseudo_hyperbolic(n: usize, r: usize, c: f64, center: Option<&[f64]>) -> Result<CatalogEntry> {
    if c >= 0.0 {
        return Err(GeoError::InvalidGeometry {
            reason: String::from("pseudo_hyperbolic requires c < 0"),
        });
    }
    if n < 1 || r > n {
        return Err(GeoError::InvalidGeometry {
            reason: format!("invalid dimension/index pair (n = {n}, r = {r})"),
        });
    }
    let radius = 1.0 / (-c).sqrt();
    let m = n + 1;
    let sig = MetricSignature::new(m, r + 1)?;
    let offset = center_or_zero(center, m)?;
    let (components, domain): (Vec<Vec<Term>>, Vec<(f64, f64)>) = match r {
        0 => {
            // x_0 = R cosh rho, x_i = R sinh rho Omega_i; params (theta.., rho).
            let rho_axis = n - 1;
            let mut comps: Vec<Vec<Term>> = Vec::with_capacity(m);
            let mut first = ones(n);
            first[rho_axis] = Factor::cosh(1.0);
            comps.push(alloc::vec![Term::new(radius, first)]);
            for mut factors in round_sphere_factors(n - 1, n, 0) {
                factors[rho_axis] = Factor::sinh(1.0);
                comps.push(alloc::vec![Term::new(radius, factors)]);
            }
            let mut dom: Vec<(f64, f64)> = alloc::vec![(-3.2, 3.2)];
            for _ in 1..(n - 1) {
                dom.push((-1.2, 1.2));
            }
            dom.push((0.15, 2.2));
            (comps, dom)
        }
        1 => {
            // (x_0, x_1) = R cosh mu (cos t, sin t), rest = R sinh mu Omega;
            // params (t, theta.., mu).
            let mu_axis = n - 1;
            let mut comps: Vec<Vec<Term>> = Vec::with_capacity(m);
            for phase in 0..2 {
                let mut factors = ones(n);
                factors[0] = if phase == 0 {
                    Factor::cos(1.0)
                } else {
                    Factor::sin(1.0)
                };
                factors[mu_axis] = Factor::cosh(1.0);
                comps.push(alloc::vec![Term::new(radius, factors)]);
            }
            for mut factors in round_sphere_factors(n - 2, n, 1) {
                factors[mu_axis] = Factor::sinh(1.0);
                comps.push(alloc::vec![Term::new(radius, factors)]);
            }
            let mut dom: Vec<(f64, f64)> = alloc::vec![(-3.2, 3.2)];
            for _ in 1..(n - 1) {
                dom.push((-1.2, 1.2));
            }
            dom.push((0.15, 2.2));
            (comps, dom)
        }
        _ => {
            return Err(GeoError::InvalidGeometry {
                reason: format!("no built-in chart for index r = {r}"),
            })
        }
    };
    let chart = ImmersionChart::new(
        sig,
        r,
        domain,
        Box::new(ProductChart::new(n, components, offset)),
    )?;
    Ok(CatalogEntry {
        name: format!("pseudo_hyperbolic:n={n},r={r},c={c}"),
        chart,
        facts: KnownFacts {
            mean_curvature_sq: Some(c),
            isotropy_constant: Some(c),
            planarity_order: Some(2),
            geodesic_sections: Some(true),
            totally_umbilical: Some(true),
            one_parallel: Some(true),
            parallel_mean_curvature: Some(true),
            note: "position-vector identity h(X,Y) = -c <X,Y> (p - a)",
        },
        curves: Vec::new(),
    })
}

fn latitude_circle() -> Box<dyn ParamCurve> {
    Box::new(ClosedFormParamCurve::new(
        2,
        Box::new(|t: f64, k: usize| match k {
            0 => nalgebra::dvector![t, core::f64::consts::FRAC_PI_4],
            1 => nalgebra::dvector![1.0, 0.0],
            _ => nalgebra::dvector![0.0, 0.0],
        }),
    ))
}

fn equator() -> Box<dyn ParamCurve> {
    Box::new(ClosedFormParamCurve::new(
        2,
        Box::new(|t: f64, k: usize| match k {
            0 => nalgebra::dvector![t, 0.0],
            1 => nalgebra::dvector![1.0, 0.0],
            _ => nalgebra::dvector![0.0, 0.0],
        }),
    ))
}

/// Latitude-varying spiral: the geodesic curvature changes along the curve.
fn sphere_spiral() -> Box<dyn ParamCurve> {
    Box::new(ClosedFormParamCurve::new(
        2,
        Box::new(|t: f64, k: usize| {
            let a = 0.45_f64;
            let w = 1.1_f64;
            let phase = k as f64 * core::f64::consts::FRAC_PI_2;
            let second = a * w.powi(k as i32) * (w * t + phase).sin();
            match k {
                0 => nalgebra::dvector![t, 0.35 + second],
                1 => nalgebra::dvector![1.0, second],
                _ => nalgebra::dvector![0.0, second],
            }
        }),
    ))
}

fn plane() -> Result<CatalogEntry> {
    // Tilted plane through an offset point; a and b orthonormal.
    let a = [0.8, 0.6, 0.0];
    let b = [-0.36, 0.48, 0.8];
    let components = (0..3)
        .map(|i| {
            alloc::vec![
                Term::new(a[i], alloc::vec![Factor::power(1), Factor::One]),
                Term::new(b[i], alloc::vec![Factor::One, Factor::power(1)]),
            ]
        })
        .collect();
    let chart = ImmersionChart::new(
        MetricSignature::euclidean(3),
        0,
        alloc::vec![(-2.0, 2.0), (-2.0, 2.0)],
        Box::new(ProductChart::new(
            2,
            components,
            nalgebra::dvector![0.1, -0.2, 0.3],
        )),
    )?;
    Ok(CatalogEntry {
        name: String::from("plane"),
        chart,
        facts: KnownFacts {
            mean_curvature_sq: Some(0.0),
            isotropy_constant: Some(0.0),
            planarity_order: Some(1),
            geodesic_sections: Some(true),
            totally_umbilical: Some(true),
            one_parallel: Some(true),
            parallel_mean_curvature: Some(true),
            note: "totally geodesic: h = 0",
        },
        curves: Vec::new(),
    })
}

fn cylinder() -> Result<CatalogEntry> {
    let components = alloc::vec![
        alloc::vec![Term::new(1.0, alloc::vec![Factor::cos(1.0), Factor::One])],
        alloc::vec![Term::new(1.0, alloc::vec![Factor::sin(1.0), Factor::One])],
        alloc::vec![Term::new(1.0, alloc::vec![Factor::One, Factor::power(1)])],
    ];
    let chart = ImmersionChart::new(
        MetricSignature::euclidean(3),
        0,
        alloc::vec![(-3.2, 3.2), (-2.0, 2.0)],
        Box::new(ProductChart::new(2, components, DVector::zeros(3))),
    )?;
    Ok(CatalogEntry {
        name: String::from("cylinder"),
        chart,
        facts: KnownFacts {
            mean_curvature_sq: Some(0.25),
            isotropy_constant: None,
            planarity_order: None,
            geodesic_sections: Some(false),
            totally_umbilical: Some(false),
            one_parallel: Some(true),
            parallel_mean_curvature: Some(true),
            note: "oblique normal sections are plane cuts, not helical geodesics",
        },
        curves: Vec::new(),
    })
}

/// Flat quadric control in `E^3_1`: a Lorentzian cylinder around the
/// timelike axis. Carrier of the reference spacelike helix.
fn lorentz_cylinder() -> Result<CatalogEntry> {
    let a = 1.2;
    let components = alloc::vec![
        alloc::vec![Term::new(1.0, alloc::vec![Factor::One, Factor::power(1)])],
        alloc::vec![Term::new(a, alloc::vec![Factor::cos(1.0), Factor::One])],
        alloc::vec![Term::new(a, alloc::vec![Factor::sin(1.0), Factor::One])],
    ];
    let chart = ImmersionChart::new(
        MetricSignature::lorentzian(3),
        1,
        alloc::vec![(-3.2, 3.2), (-2.0, 2.0)],
        Box::new(ProductChart::new(2, components, DVector::zeros(3))),
    )?;
    Ok(CatalogEntry {
        name: String::from("lorentz_cylinder"),
        chart,
        facts: KnownFacts {
            mean_curvature_sq: None,
            isotropy_constant: None,
            planarity_order: None,
            geodesic_sections: Some(false),
            totally_umbilical: Some(false),
            one_parallel: Some(true),
            parallel_mean_curvature: Some(true),
            note: "flat quadric carrier for the indefinite helix",
        },
        curves: Vec::new(),
    })
}

fn graph_entry(
    name: &str,
    param_dim: usize,
    ambient: usize,
    graph_terms: Vec<Term>,
    domain: Vec<(f64, f64)>,
    totally_umbilical: Option<bool>,
    parallel_mean_curvature: Option<bool>,
    note: &'static str,
) -> Result<CatalogEntry> {
    let mut components: Vec<Vec<Term>> = Vec::with_capacity(ambient);
    for i in 0..param_dim {
        let mut factors = ones(param_dim);
        factors[i] = Factor::power(1);
        components.push(alloc::vec![Term::new(1.0, factors)]);
    }
    components.push(graph_terms);
    let chart = ImmersionChart::new(
        MetricSignature::euclidean(ambient),
        0,
        domain,
        Box::new(ProductChart::new(param_dim, components, DVector::zeros(ambient))),
    )?;
    Ok(CatalogEntry {
        name: name.to_string(),
        chart,
        facts: KnownFacts {
            totally_umbilical,
            parallel_mean_curvature,
            note,
            ..KnownFacts::default()
        },
        curves: Vec::new(),
    })
}

fn paraboloid() -> Result<CatalogEntry> {
    graph_entry(
        "paraboloid",
        2,
        3,
        alloc::vec![
            Term::new(1.0, alloc::vec![Factor::power(2), Factor::One]),
            Term::new(1.0, alloc::vec![Factor::One, Factor::power(2)]),
        ],
        alloc::vec![(-0.8, 0.8), (-0.8, 0.8)],
        Some(false),
        Some(false),
        "rotationally symmetric graph; umbilical only at the apex",
    )
}

fn graph_cubic() -> Result<CatalogEntry> {
    graph_entry(
        "graph_cubic",
        1,
        2,
        alloc::vec![Term::new(1.0, alloc::vec![Factor::power(3)])],
        alloc::vec![(-0.8, 0.8)],
        None,
        None,
        "third derivative of the height feeds the derivative of h",
    )
}

fn graph_quartic() -> Result<CatalogEntry> {
    graph_entry(
        "graph_quartic",
        1,
        2,
        alloc::vec![Term::new(1.0, alloc::vec![Factor::power(4)])],
        alloc::vec![(-0.8, 0.8)],
        None,
        None,
        "fourth derivative of the height feeds the second derivative of h",
    )
}

fn graph_mixed() -> Result<CatalogEntry> {
    graph_entry(
        "graph_mixed",
        2,
        3,
        alloc::vec![
            Term::new(1.0, alloc::vec![Factor::power(2), Factor::One]),
            Term::new(1.0, alloc::vec![Factor::One, Factor::power(3)]),
        ],
        alloc::vec![(-0.8, 0.8), (-0.8, 0.8)],
        Some(false),
        Some(false),
        "generic graph: mean curvature is not parallel",
    )
}

fn graph_aniso() -> Result<CatalogEntry> {
    graph_entry(
        "graph_aniso",
        2,
        3,
        alloc::vec![
            Term::new(1.0, alloc::vec![Factor::power(2), Factor::One]),
            Term::new(3.0, alloc::vec![Factor::One, Factor::power(2)]),
        ],
        alloc::vec![(-0.8, 0.8), (-0.8, 0.8)],
        Some(false),
        Some(false),
        "anisotropic graph: L differs along the axes",
    )
}

/// Veronese-type minimal surface in `E^5`: the classical isotropic control
/// with planar geodesic normal sections. Image of the round sphere of
/// radius sqrt(3) inside the unit hypersphere of `E^5`.
fn veronese() -> Result<CatalogEntry> {
    let s3 = 3.0f64.sqrt();
    let components = alloc::vec![
        // (sqrt3/2) sin u sin 2v
        alloc::vec![Term::new(
            s3 / 2.0,
            alloc::vec![Factor::sin(1.0), Factor::sin(2.0)]
        )],
        // (sqrt3/2) cos u sin 2v
        alloc::vec![Term::new(
            s3 / 2.0,
            alloc::vec![Factor::cos(1.0), Factor::sin(2.0)]
        )],
        // (sqrt3/2) sin 2u cos^2 v
        alloc::vec![
            Term::new(s3 / 4.0, alloc::vec![Factor::sin(2.0), Factor::One]),
            Term::new(s3 / 4.0, alloc::vec![Factor::sin(2.0), Factor::cos(2.0)]),
        ],
        // (sqrt3/2) cos 2u cos^2 v
        alloc::vec![
            Term::new(s3 / 4.0, alloc::vec![Factor::cos(2.0), Factor::One]),
            Term::new(s3 / 4.0, alloc::vec![Factor::cos(2.0), Factor::cos(2.0)]),
        ],
        // (3 cos 2v - 1) / 4
        alloc::vec![
            Term::new(-0.25, alloc::vec![Factor::One, Factor::One]),
            Term::new(0.75, alloc::vec![Factor::One, Factor::cos(2.0)]),
        ],
    ];
    let chart = ImmersionChart::new(
        MetricSignature::euclidean(5),
        0,
        alloc::vec![(-1.2, 1.2), (-0.55, 0.55)],
        Box::new(ProductChart::new(2, components, DVector::zeros(5))),
    )?;
    Ok(CatalogEntry {
        name: String::from("veronese"),
        chart,
        facts: KnownFacts {
            mean_curvature_sq: Some(1.0),
            isotropy_constant: Some(4.0 / 3.0),
            planarity_order: Some(2),
            geodesic_sections: Some(true),
            totally_umbilical: Some(false),
            one_parallel: Some(true),
            parallel_mean_curvature: Some(true),
            note: "isotropic minimal surface in the unit hypersphere; geodesics map to circles",
        },
        curves: Vec::new(),
    })
}

/// Control geometries: flat and graph charts plus the Veronese surface.
pub fn controls() -> Vec<CatalogEntry> {
    alloc::vec![
        plane().expect("built-in chart"),
        cylinder().expect("built-in chart"),
        lorentz_cylinder().expect("built-in chart"),
        paraboloid().expect("built-in chart"),
        graph_cubic().expect("built-in chart"),
        graph_quartic().expect("built-in chart"),
        graph_mixed().expect("built-in chart"),
        graph_aniso().expect("built-in chart"),
        veronese().expect("built-in chart"),
    ]
}

/// Every catalog chart, including the canonical constant-curvature trio.
pub fn all_charts() -> Vec<CatalogEntry> {
    let mut out = alloc::vec![
        pseudo_sphere(2, 0, 1.0, None).expect("built-in chart"),
        pseudo_sphere(2, 1, 1.0, None).expect("built-in chart"),
        pseudo_hyperbolic(2, 0, -1.0, None).expect("built-in chart"),
    ];
    out.extend(controls());
    out
}

fn parse_kv(spec: &str) -> Result<(usize, usize, f64, Option<Vec<f64>>)> {
    let mut n = None;
    let mut r = None;
    let mut c = None;
    let mut center = None;
    for pair in spec.split(',') {
        let mut it = pair.splitn(2, '=');
        let key = it.next().unwrap_or("").trim();
        let value = it.next().ok_or_else(|| GeoError::InvalidGeometry {
            reason: format!("malformed parameter '{pair}'"),
        })?;
        match key {
            "n" => {
                n = Some(value.parse::<usize>().map_err(|_| GeoError::InvalidGeometry {
                    reason: format!("bad n '{value}'"),
                })?)
            }
            "r" => {
                r = Some(value.parse::<usize>().map_err(|_| GeoError::InvalidGeometry {
                    reason: format!("bad r '{value}'"),
                })?)
            }
            "c" => {
                c = Some(value.parse::<f64>().map_err(|_| GeoError::InvalidGeometry {
                    reason: format!("bad c '{value}'"),
                })?)
            }
            "a" => {
                let coords: core::result::Result<Vec<f64>, _> =
                    value.split(';').map(|x| x.trim().parse::<f64>()).collect();
                center = Some(coords.map_err(|_| GeoError::InvalidGeometry {
                    reason: format!("bad center '{value}'"),
                })?);
            }
            other => {
                return Err(GeoError::InvalidGeometry {
                    reason: format!("unknown parameter '{other}'"),
                })
            }
        }
    }
    Ok((
        n.unwrap_or(2),
        r.unwrap_or(0),
        c.ok_or_else(|| GeoError::InvalidGeometry {
            reason: String::from("missing curvature parameter c"),
        })?,
        center,
    ))
}

/// Resolves a chart by name. Accepts the fixed control names, the
/// shorthands `sphere2`, `de_sitter2`, `hyperbolic2`, and parametrized
/// references like `pseudo_sphere:n=2,r=1,c=1` (optional center
/// `a=x;y;z`).
pub fn lookup(name: &str) -> Result<CatalogEntry> {
    if let Some(spec) = name.strip_prefix("pseudo_sphere:") {
        let (n, r, c, center) = parse_kv(spec)?;
        return pseudo_sphere(n, r, c, center.as_deref());
    }
    if let Some(spec) = name.strip_prefix("pseudo_hyperbolic:") {
        let (n, r, c, center) = parse_kv(spec)?;
        return pseudo_hyperbolic(n, r, c, center.as_deref());
    }
    match name {
        "sphere2" => pseudo_sphere(2, 0, 1.0, None),
        "de_sitter2" => pseudo_sphere(2, 1, 1.0, None),
        "hyperbolic2" => pseudo_hyperbolic(2, 0, -1.0, None),
        other => all_charts()
            .into_iter()
            .find(|e| e.name == other)
            .ok_or_else(|| GeoError::UnknownGeometry {
                name: other.to_string(),
            }),
    }
}

fn line_curve() -> CatalogCurve {
    let p0 = [0.5, -0.25, 1.0];
    let v = [2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0];
    CatalogCurve {
        name: String::from("line"),
        signature: MetricSignature::euclidean(3),
        curve: Box::new(ClosedFormCurve::new(
            3,
            Box::new(move |s: f64, k: usize| match k {
                0 => nalgebra::dvector![p0[0] + s * v[0], p0[1] + s * v[1], p0[2] + s * v[2]],
                1 => nalgebra::dvector![v[0], v[1], v[2]],
                _ => DVector::zeros(3),
            }),
        )),
        unit_speed: true,
        span: 2.0,
        expected_rank: 1,
        expected_curvatures: Vec::new(),
        is_w_curve: true,
        note: "geodesic of the ambient space",
    }
}

fn circle_curve() -> CatalogCurve {
    CatalogCurve {
        name: String::from("circle"),
        signature: MetricSignature::euclidean(2),
        curve: Box::new(ClosedFormCurve::new(
            2,
            Box::new(|s: f64, k: usize| {
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                nalgebra::dvector![(s + phase).cos(), (s + phase).sin()]
            }),
        )),
        unit_speed: true,
        span: 4.0,
        expected_rank: 2,
        expected_curvatures: alloc::vec![1.0],
        is_w_curve: true,
        note: "unit circle at unit speed",
    }
}

fn ellipse_curve() -> CatalogCurve {
    CatalogCurve {
        name: String::from("ellipse"),
        signature: MetricSignature::euclidean(2),
        curve: Box::new(ClosedFormCurve::new(
            2,
            Box::new(|t: f64, k: usize| {
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                nalgebra::dvector![2.0 * (t + phase).cos(), (t + phase).sin()]
            }),
        )),
        unit_speed: false,
        span: 2.0,
        expected_rank: 2,
        expected_curvatures: Vec::new(),
        is_w_curve: false,
        note: "curvature varies between the semi-axes",
    }
}

fn helix_curve() -> CatalogCurve {
    let (a, b) = (1.0_f64, 0.5_f64);
    let denom = a * a + b * b;
    let omega = 1.0 / denom.sqrt();
    CatalogCurve {
        name: String::from("helix"),
        signature: MetricSignature::euclidean(3),
        curve: Box::new(ClosedFormCurve::new(
            3,
            Box::new(move |s: f64, k: usize| {
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                let radial = a * omega.powi(k as i32);
                let axial = match k {
                    0 => b * omega * s,
                    1 => b * omega,
                    _ => 0.0,
                };
                nalgebra::dvector![
                    radial * (omega * s + phase).cos(),
                    radial * (omega * s + phase).sin(),
                    axial
                ]
            }),
        )),
        unit_speed: true,
        span: 4.0,
        expected_rank: 3,
        expected_curvatures: alloc::vec![a / denom, b / denom],
        is_w_curve: true,
        note: "right circular helix",
    }
}

fn lorentz_helix_curve() -> CatalogCurve {
    let (a, b) = (1.2_f64, 0.5_f64);
    let denom = a * a - b * b;
    let omega = 1.0 / denom.sqrt();
    CatalogCurve {
        name: String::from("lorentz_helix"),
        signature: MetricSignature::lorentzian(3),
        curve: Box::new(ClosedFormCurve::new(
            3,
            Box::new(move |s: f64, k: usize| {
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                let radial = a * omega.powi(k as i32);
                let axial = match k {
                    0 => b * omega * s,
                    1 => b * omega,
                    _ => 0.0,
                };
                nalgebra::dvector![
                    axial,
                    radial * (omega * s + phase).cos(),
                    radial * (omega * s + phase).sin()
                ]
            }),
        )),
        unit_speed: true,
        span: 4.0,
        expected_rank: 3,
        expected_curvatures: alloc::vec![a / denom, b / denom],
        is_w_curve: true,
        note: "spacelike helix around the timelike axis",
    }
}

fn hyperbola_curve() -> CatalogCurve {
    CatalogCurve {
        name: String::from("hyperbola_e21"),
        signature: MetricSignature::lorentzian(2),
        curve: Box::new(ClosedFormCurve::new(
            2,
            Box::new(|s: f64, k: usize| {
                if k % 2 == 0 {
                    nalgebra::dvector![s.cosh(), s.sinh()]
                } else {
                    nalgebra::dvector![s.sinh(), s.cosh()]
                }
            }),
        )),
        unit_speed: true,
        span: 2.0,
        expected_rank: 2,
        expected_curvatures: alloc::vec![1.0],
        is_w_curve: true,
        note: "spacelike curve with timelike normal: the sign flips in the frame recursion",
    }
}

fn latitude_circle_curve() -> CatalogCurve {
    let phi = core::f64::consts::FRAC_PI_4;
    let rho = phi.cos();
    CatalogCurve {
        name: String::from("latitude_circle"),
        signature: MetricSignature::euclidean(3),
        curve: Box::new(ClosedFormCurve::new(
            3,
            Box::new(move |t: f64, k: usize| {
                let phase = k as f64 * core::f64::consts::FRAC_PI_2;
                let height = if k == 0 { phi.sin() } else { 0.0 };
                nalgebra::dvector![
                    rho * (t + phase).cos(),
                    rho * (t + phase).sin(),
                    height
                ]
            }),
        )),
        unit_speed: false,
        span: 2.0,
        expected_rank: 2,
        expected_curvatures: alloc::vec![1.0 / rho],
        is_w_curve: true,
        note: "circle of radius cos(pi/4) on the unit sphere",
    }
}

/// Reference curves with expected Frenet data.
pub fn all_curves() -> Vec<CatalogCurve> {
    alloc::vec![
        line_curve(),
        circle_curve(),
        ellipse_curve(),
        helix_curve(),
        lorentz_helix_curve(),
        hyperbola_curve(),
        latitude_circle_curve(),
    ]
}

/// Resolves a reference curve by name.
pub fn lookup_curve(name: &str) -> Result<CatalogCurve> {
    all_curves()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| GeoError::UnknownGeometry {
            name: name.to_string(),
        })
}
