//! Extrinsic invariants of an immersed submanifold of `E^m_s`: induced
//! connection, second fundamental form, shape operator, normal connection,
//! first and second covariant derivatives of `h`, mean curvature, geodesics
//! and pseudo-isotropy.
//!
//! The ambient space is always flat, so the ambient covariant derivative is
//! the directional derivative and the Gauss formula splits second
//! derivatives of the immersion into a Christoffel part plus `h`:
//!
//! ```text
//! d2f(a, b) = Gamma(a, b) . df + h(a, b)
//! ```
//!
//! Derivatives of `h` follow the Van der Waerden-Bortolotti recipe: the
//! normal projection of the directional derivative of the coordinate-
//! extended field, minus `h` contracted with Christoffel corrections. With
//! coordinate extensions only first-order probe data enters, so straight
//! parameter lines serve as probe curves.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::chart::ImmersionChart;
use crate::error::GeoError;
use crate::jets::{self, compose_derivatives, immersion_jet, Curve, ImmersionJet};
use crate::linalg::{complete_frame, pseudo_gram_schmidt_with, CausalKind};
use crate::ode::{self, OdeField, OdeOptions, OdeSolution};
use crate::sample::{direction_sweep, orthogonal_complement_2d};
use crate::tolerances::Tolerances;
use crate::Result;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Extrinsic data of an immersion at one parameter point: frames, induced
/// metric, Christoffel symbols, second fundamental form on the frame and
/// mean curvature.
#[derive(Debug, Clone)]
pub struct ExtrinsicState {
    pub param_point: Vec<f64>,
    pub position: DVector<f64>,
    /// Pseudo-orthonormal tangent frame `e_1 .. e_n` (ambient vectors).
    pub tangent_frame: Vec<DVector<f64>>,
    pub tangent_signs: Vec<f64>,
    /// Parameter directions realizing the frame: `e_i = df(frame_directions[i])`.
    pub frame_directions: Vec<DVector<f64>>,
    /// Pseudo-orthonormal normal frame `xi_1 .. xi_{m-n}`.
    pub normal_frame: Vec<DVector<f64>>,
    pub normal_signs: Vec<f64>,
    /// `h(e_i, e_j)` on frame pairs.
    pub h_frame: Vec<Vec<DVector<f64>>>,
    /// Mean curvature vector `H = (1/n) sum_i <e_i, e_i> h(e_i, e_i)`.
    pub mean_curvature: DVector<f64>,
    /// Induced metric `G_ij = <d_i f, d_j f>` in coordinate directions.
    pub metric: DMatrix<f64>,
    pub metric_inverse: DMatrix<f64>,
    /// Christoffel symbols: `christoffel[k][(i, j)]`.
    pub christoffel: Vec<DMatrix<f64>>,
    ambient_signature: crate::linalg::MetricSignature,
    jet: ImmersionJet,
}

impl ExtrinsicState {
    pub fn param_dim(&self) -> usize {
        self.frame_directions.len()
    }

    pub fn normal_dim(&self) -> usize {
        self.normal_frame.len()
    }

    pub fn ambient_dot(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        self.ambient_signature.dot(a, b)
    }

    /// Projection onto the tangent space.
    pub fn tangent_project(&self, w: &DVector<f64>) -> DVector<f64> {
        let mut acc = DVector::zeros(w.len());
        for (e, &eps) in self.tangent_frame.iter().zip(self.tangent_signs.iter()) {
            acc += e * (eps * self.ambient_dot(w, e));
        }
        acc
    }

    /// Projection onto the normal space.
    pub fn normal_project(&self, w: &DVector<f64>) -> DVector<f64> {
        w - self.tangent_project(w)
    }

    /// Ambient tangent vector realizing a parameter direction.
    pub fn push_forward(&self, a: &DVector<f64>) -> DVector<f64> {
        let n = self.param_dim();
        let m = self.position.len();
        let mut out = DVector::zeros(m);
        for i in 0..n {
            let mut alpha = alloc::vec![0usize; n];
            alpha[i] = 1;
            out += self.jet.partial(&alpha) * a[i];
        }
        out
    }

    /// Parameter direction whose push-forward equals the tangential part of
    /// an ambient vector.
    pub fn pull_back(&self, ambient: &DVector<f64>) -> DVector<f64> {
        let n = self.param_dim();
        let mut out = DVector::zeros(n);
        for i in 0..n {
            let component =
                self.tangent_signs[i] * self.ambient_dot(ambient, &self.tangent_frame[i]);
            out += &self.frame_directions[i] * component;
        }
        out
    }

    /// Second fundamental form on parameter directions:
    /// `h(a, b) = P_N(d2 f(a, b))`.
    pub fn second_fundamental_form(&self, a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
        let second = self.jet.contract(&[a, b]);
        self.normal_project(&second)
    }

    /// Christoffel contraction `Gamma(a, b)` in parameter coordinates.
    pub fn christoffel_contract(&self, a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
        let n = self.param_dim();
        let mut out = DVector::zeros(n);
        for k in 0..n {
            out[k] = (a.transpose() * &self.christoffel[k] * b)[(0, 0)];
        }
        out
    }

    /// Induced metric on parameter directions.
    pub fn induced_dot(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (a.transpose() * &self.metric * b)[(0, 0)]
    }

    pub fn jet(&self) -> &ImmersionJet {
        &self.jet
    }
}

/// Computes the extrinsic state of `chart` at `u`.
///
/// The tangent frame comes from pseudo-orthonormalizing the coordinate
/// basis; the normal frame completes it to a full frame of the ambient
/// space. Rank loss surfaces as `ImmersionSingular`, a sign count differing
/// from the declared index as `IndexMismatch`, and a degenerate (null)
/// intermediate as `NullIntermediate`.
pub fn extrinsic_state(chart: &ImmersionChart, u: &[f64], tols: &Tolerances) -> Result<ExtrinsicState> {
    let n = chart.param_dim();
    let sig = *chart.signature();
    let jet = immersion_jet(chart, u, 2.min(jets::MAX_IMMERSION_ORDER))?;
    let partials = jet.first_partials();
    let frame = match pseudo_gram_schmidt_with(&partials, &sig, tols.null, tols.rank) {
        Ok(f) => f,
        Err(GeoError::RankDeficient { index }) => {
            return Err(GeoError::ImmersionSingular {
                expected: n,
                got: index,
            })
        }
        Err(e) => return Err(e),
    };
    let negatives = frame.signs.iter().filter(|&&s| s < 0.0).count();
    if negatives != chart.index() {
        return Err(GeoError::IndexMismatch {
            expected: chart.index(),
            got: negatives,
        });
    }
    let normal = complete_frame(&frame, &sig, tols.null)?;

    // Induced metric and Christoffel symbols from first and second partials.
    let metric = DMatrix::from_fn(n, n, |i, j| sig.dot(&partials[i], &partials[j]));
    let metric_inverse = metric.clone().try_inverse().ok_or(GeoError::ImmersionSingular {
        expected: n,
        got: 0,
    })?;
    // dG[l][(i, j)] = d_l G_ij = <d_l d_i f, d_j f> + <d_i f, d_l d_j f>.
    let second = |i: usize, j: usize| {
        let mut alpha = alloc::vec![0usize; n];
        alpha[i] += 1;
        alpha[j] += 1;
        jet.partial(&alpha).clone()
    };
    let mut dg = Vec::with_capacity(n);
    for l in 0..n {
        dg.push(DMatrix::from_fn(n, n, |i, j| {
            sig.dot(&second(l, i), &partials[j]) + sig.dot(&partials[i], &second(l, j))
        }));
    }
    let mut christoffel = Vec::with_capacity(n);
    for k in 0..n {
        christoffel.push(DMatrix::from_fn(n, n, |i, j| {
            let mut acc = 0.0;
            for l in 0..n {
                acc += 0.5 * metric_inverse[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
            }
            acc
        }));
    }

    let mut state = ExtrinsicState {
        param_point: u.to_vec(),
        position: jet.position().clone(),
        tangent_frame: frame.vectors.clone(),
        tangent_signs: frame.signs.clone(),
        frame_directions: frame.coeffs.clone(),
        normal_frame: normal.iter().map(|(v, _)| v.clone()).collect(),
        normal_signs: normal.iter().map(|(_, s)| *s).collect(),
        h_frame: Vec::new(),
        mean_curvature: DVector::zeros(sig.dim()),
        metric,
        metric_inverse,
        christoffel,
        jet,
        ambient_signature: sig,
    };

    let mut h_frame = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(state.second_fundamental_form(
                &state.frame_directions[i].clone(),
                &state.frame_directions[j].clone(),
            ));
        }
        h_frame.push(row);
    }
    let mut mean = DVector::zeros(sig.dim());
    for i in 0..n {
        mean += &h_frame[i][i] * state.tangent_signs[i];
    }
    mean /= n as f64;
    state.h_frame = h_frame;
    state.mean_curvature = mean;
    Ok(state)
}

/// Shape operator `A_xi` as a matrix in the tangent frame: column `j` holds
/// the frame coordinates of `A_xi e_j`, so `entry(i, j) = eps_i <h(e_i, e_j), xi>`.
///
/// Fails with `NotNormal` when `xi` has a tangential component above
/// tolerance.
pub fn shape_operator(state: &ExtrinsicState, xi: &DVector<f64>, tols: &Tolerances) -> Result<DMatrix<f64>> {
    let tangential = state.tangent_project(xi).norm();
    if tangential > tols.normal_valued * xi.norm().max(1.0) * 10.0 {
        return Err(GeoError::NotNormal { value: tangential });
    }
    let n = state.param_dim();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        state.tangent_signs[i] * state.ambient_dot(&state.h_frame[i][j], xi)
    }))
}

/// `A_xi X` as an ambient vector, for `X` given in parameter coordinates.
pub fn shape_operator_apply(
    state: &ExtrinsicState,
    xi: &DVector<f64>,
    x_param: &DVector<f64>,
    tols: &Tolerances,
) -> Result<DVector<f64>> {
    let a = shape_operator(state, xi, tols)?;
    // Frame coordinates of X.
    let x_amb = state.push_forward(x_param);
    let n = state.param_dim();
    let mut coords = DVector::zeros(n);
    for i in 0..n {
        coords[i] = state.tangent_signs[i] * state.ambient_dot(&x_amb, &state.tangent_frame[i]);
    }
    let out_coords = a * coords;
    let mut out = DVector::zeros(state.position.len());
    for i in 0..n {
        out += &state.tangent_frame[i] * out_coords[i];
    }
    Ok(out)
}

/// Derivative of a normal field along the geodesic through `(u, X)`:
/// returns the full ambient derivative together with its normal part
/// (`D_X xi`) and tangential part (which reproduces `-A_xi X`).
#[derive(Debug, Clone)]
pub struct NormalFieldDerivative {
    pub full: DVector<f64>,
    pub normal: DVector<f64>,
    pub tangential: DVector<f64>,
}

/// Differentiates a normal field `u -> xi(u)` along the geodesic through
/// `u` with initial direction `x_param`, splitting the result into normal
/// (`D_X xi`) and tangential (Weingarten) parts.
pub fn normal_connection_derivative<F>(
    chart: &ImmersionChart,
    u: &[f64],
    x_param: &DVector<f64>,
    field: &F,
    tols: &Tolerances,
) -> Result<NormalFieldDerivative>
where
    F: Fn(&[f64]) -> Result<DVector<f64>>,
{
    let state = extrinsic_state(chart, u, tols)?;
    let xi0 = field(u)?;
    let tangential = state.tangent_project(&xi0).norm();
    if tangential > tols.normal_valued * xi0.norm().max(1.0) * 10.0 {
        return Err(GeoError::NotNormal { value: tangential });
    }
    let geo = integrate_geodesic(chart, u, x_param, 0.2, tols)?;
    let h = jets::fd_step(1, 0.0);
    let offsets = [-2.0, -1.0, 1.0, 2.0];
    let weights = [1.0, -8.0, 8.0, -1.0];
    let mut acc = DVector::zeros(chart.ambient_dim());
    for (&o, &c) in offsets.iter().zip(weights.iter()) {
        let up = geo.param_point(o * h)?;
        acc += field(up.as_slice())? * c;
    }
    acc /= 12.0 * h;
    Ok(NormalFieldDerivative {
        normal: state.normal_project(&acc),
        tangential: state.tangent_project(&acc),
        full: acc,
    })
}

/// First covariant derivative of the second fundamental form,
/// `(nabla_X h)(Y, Z)`, for parameter-coordinate directions.
///
/// Built as `P_N(d/dt h_{u + tX}(Y, Z)) - h(Gamma(X, Y), Z) - h(Y, Gamma(X, Z))`
/// with coordinate-extended `Y`, `Z`; symmetric in all three slots on flat
/// ambient spaces (Codazzi).
pub fn nabla_h(
    chart: &ImmersionChart,
    u: &[f64],
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    tols: &Tolerances,
) -> Result<DVector<f64>> {
    let state = extrinsic_state(chart, u, tols)?;
    nabla_h_with(chart, &state, u, x, y, z, tols)
}

fn h_at(chart: &ImmersionChart, u: &[f64], y: &DVector<f64>, z: &DVector<f64>, tols: &Tolerances) -> Result<DVector<f64>> {
    let state = extrinsic_state(chart, u, tols)?;
    Ok(state.second_fundamental_form(y, z))
}

fn nabla_h_with(
    chart: &ImmersionChart,
    state: &ExtrinsicState,
    u: &[f64],
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    tols: &Tolerances,
) -> Result<DVector<f64>> {
    let h_step = jets::fd_step(1, scale_of(u));
    let offsets = [-2.0, -1.0, 1.0, 2.0];
    let weights = [1.0, -8.0, 8.0, -1.0];
    let mut deriv = DVector::zeros(chart.ambient_dim());
    for (&o, &c) in offsets.iter().zip(weights.iter()) {
        let mut up = u.to_vec();
        for i in 0..u.len() {
            up[i] += o * h_step * x[i];
        }
        deriv += h_at(chart, &up, y, z, tols)? * c;
    }
    deriv /= 12.0 * h_step;
    let d_term = state.normal_project(&deriv);
    let gxy = state.christoffel_contract(x, y);
    let gxz = state.christoffel_contract(x, z);
    Ok(d_term
        - state.second_fundamental_form(&gxy, z)
        - state.second_fundamental_form(y, &gxz))
}

fn scale_of(u: &[f64]) -> f64 {
    u.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

/// Second covariant derivative `(nabla_W nabla_X h)(Y, Z)` with all four
/// correction terms, coordinate-extended arguments.
pub fn nabla2_h(
    chart: &ImmersionChart,
    u: &[f64],
    w: &DVector<f64>,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    tols: &Tolerances,
) -> Result<DVector<f64>> {
    let state = extrinsic_state(chart, u, tols)?;
    let h_step = jets::fd_step(1, scale_of(u)) * 4.0;
    let offsets = [-2.0, -1.0, 1.0, 2.0];
    let weights = [1.0, -8.0, 8.0, -1.0];
    let mut deriv = DVector::zeros(chart.ambient_dim());
    for (&o, &c) in offsets.iter().zip(weights.iter()) {
        let mut up = u.to_vec();
        for i in 0..u.len() {
            up[i] += o * h_step * w[i];
        }
        deriv += nabla_h(chart, &up, x, y, z, tols)? * c;
    }
    deriv /= 12.0 * h_step;
    let d_term = state.normal_project(&deriv);
    let gwx = state.christoffel_contract(w, x);
    let gwy = state.christoffel_contract(w, y);
    let gwz = state.christoffel_contract(w, z);
    Ok(d_term
        - nabla_h_with(chart, &state, u, &gwx, y, z, tols)?
        - nabla_h_with(chart, &state, u, x, &gwy, z, tols)?
        - nabla_h_with(chart, &state, u, x, y, &gwz, tols)?)
}

/// Mean curvature vector of a state (already stored; recomputed here from
/// an explicit frame for frame-independence checks).
pub fn mean_curvature(state: &ExtrinsicState) -> DVector<f64> {
    state.mean_curvature.clone()
}

/// Umbilicity report: max residual of `h(e_i, e_j) - g(e_i, e_j) H` over
/// the samples.
#[derive(Debug, Clone)]
pub struct UmbilicalReport {
    pub umbilical: bool,
    pub max_residual: f64,
}

pub fn is_totally_umbilical(
    chart: &ImmersionChart,
    points: &[Vec<f64>],
    tols: &Tolerances,
) -> Result<UmbilicalReport> {
    let mut worst = 0.0f64;
    for u in points {
        let state = extrinsic_state(chart, u, tols)?;
        let n = state.param_dim();
        for i in 0..n {
            for j in 0..n {
                let metric_factor = if i == j { state.tangent_signs[i] } else { 0.0 };
                let resid =
                    (&state.h_frame[i][j] - &state.mean_curvature * metric_factor).norm();
                worst = worst.max(resid);
            }
        }
    }
    Ok(UmbilicalReport {
        umbilical: worst <= tols.umbilical,
        max_residual: worst,
    })
}

/// Parallel-mean-curvature report: max `|D_X H|` over sample points and a
/// direction sweep.
#[derive(Debug, Clone)]
pub struct ParallelMeanCurvatureReport {
    pub parallel: bool,
    pub max_residual: f64,
}

pub fn is_parallel_mean_curvature(
    chart: &ImmersionChart,
    points: &[Vec<f64>],
    directions_per_point: usize,
    tols: &Tolerances,
) -> Result<ParallelMeanCurvatureReport> {
    let mut worst = 0.0f64;
    let h_step = jets::fd_step(1, 0.0);
    let offsets = [-2.0, -1.0, 1.0, 2.0];
    let weights = [1.0, -8.0, 8.0, -1.0];
    for u in points {
        let state = extrinsic_state(chart, u, tols)?;
        for (dir, _) in direction_sweep(&state.tangent_signs, directions_per_point) {
            // Parameter direction of the swept frame vector.
            let mut x = DVector::zeros(state.param_dim());
            for i in 0..state.param_dim() {
                x += &state.frame_directions[i] * dir[i];
            }
            let mut deriv = DVector::zeros(chart.ambient_dim());
            for (&o, &c) in offsets.iter().zip(weights.iter()) {
                let mut up = u.clone();
                for i in 0..u.len() {
                    up[i] += o * h_step * x[i];
                }
                let neighbor = extrinsic_state(chart, &up, tols)?;
                deriv += &neighbor.mean_curvature * c;
            }
            deriv /= 12.0 * h_step;
            worst = worst.max(state.normal_project(&deriv).norm());
        }
    }
    Ok(ParallelMeanCurvatureReport {
        parallel: worst <= tols.parallel_h,
        max_residual: worst,
    })
}

/// Geodesic field: `y = (u, u')`, `u'' = -Gamma(u)(u', u')`.
struct GeodesicField<'a> {
    chart: &'a ImmersionChart,
    tols: &'a Tolerances,
}

impl<'a> GeodesicField<'a> {
    fn christoffel_acc(&self, u: &[f64], velocity: &DVector<f64>) -> Result<DVector<f64>> {
        let state = extrinsic_state(self.chart, u, self.tols)?;
        Ok(-state.christoffel_contract(velocity, velocity))
    }
}

impl<'a> OdeField for GeodesicField<'a> {
    fn dim(&self) -> usize {
        2 * self.chart.param_dim()
    }

    fn eval(&self, t: f64, y: &DVector<f64>) -> Result<DVector<f64>> {
        let n = self.chart.param_dim();
        let u: Vec<f64> = y.as_slice()[..n].to_vec();
        if !self.chart.contains(&u, 0.0) {
            return Err(GeoError::LeftDomain { t });
        }
        let velocity = DVector::from_column_slice(&y.as_slice()[n..]);
        let acc = self.christoffel_acc(&u, &velocity)?;
        let mut out = DVector::zeros(2 * n);
        for i in 0..n {
            out[i] = velocity[i];
            out[n + i] = acc[i];
        }
        Ok(out)
    }
}

/// A geodesic of the induced metric, as both a parameter-space trajectory
/// and an ambient curve. Ambient derivatives up to order 3 are closed-form
/// (the third uses a finite-difference Christoffel gradient); higher orders
/// fall back to curve-level differences over the machine-smooth evaluation.
pub struct GeodesicCurve<'a> {
    chart: &'a ImmersionChart,
    tols: Tolerances,
    forward: OdeSolution,
    backward: OdeSolution,
    range: (f64, f64),
}

impl<'a> GeodesicCurve<'a> {
    /// Parameter-space state `(u, u')` at arclength `t`.
    pub fn state(&self, t: f64) -> Result<(DVector<f64>, DVector<f64>)> {
        let field = GeodesicField {
            chart: self.chart,
            tols: &self.tols,
        };
        let sol = if t >= 0.0 { &self.forward } else { &self.backward };
        let y = sol.eval(&field, t)?;
        let n = self.chart.param_dim();
        Ok((
            DVector::from_column_slice(&y.as_slice()[..n]),
            DVector::from_column_slice(&y.as_slice()[n..]),
        ))
    }

    /// Parameter point at arclength `t`.
    pub fn param_point(&self, t: f64) -> Result<Vec<f64>> {
        Ok(self.state(t)?.0.as_slice().to_vec())
    }

    pub fn chart(&self) -> &ImmersionChart {
        self.chart
    }
}

impl<'a> Curve for GeodesicCurve<'a> {
    fn ambient_dim(&self) -> usize {
        self.chart.ambient_dim()
    }

    fn point(&self, t: f64) -> DVector<f64> {
        let (u, _) = self.state(t).expect("geodesic covers its domain");
        self.chart.eval(u.as_slice())
    }

    fn derivative(&self, t: f64, order: usize) -> Option<DVector<f64>> {
        if order == 0 {
            return Some(self.point(t));
        }
        if order > 3 {
            return None;
        }
        let (u, du) = self.state(t).ok()?;
        let state = extrinsic_state(self.chart, u.as_slice(), &self.tols).ok()?;
        let ddu = -state.christoffel_contract(&du, &du);
        let mut derivs = alloc::vec![du.clone(), ddu.clone()];
        if order == 3 {
            // u''' = -(dGamma)(u';u',u') - 2 Gamma(u'', u').
            let n = self.chart.param_dim();
            let h = jets::fd_step(1, scale_of(u.as_slice()));
            let offsets = [-2.0, -1.0, 1.0, 2.0];
            let weights = [1.0, -8.0, 8.0, -1.0];
            let mut dgamma = DVector::zeros(n);
            for (&o, &c) in offsets.iter().zip(weights.iter()) {
                let mut up = u.as_slice().to_vec();
                for i in 0..n {
                    up[i] += o * h * du[i];
                }
                let neighbor = extrinsic_state(self.chart, &up, &self.tols).ok()?;
                dgamma += neighbor.christoffel_contract(&du, &du) * c;
            }
            dgamma /= 12.0 * h;
            let dddu = -dgamma - state.christoffel_contract(&ddu, &du) * 2.0;
            derivs.push(dddu);
        }
        let jet = immersion_jet(self.chart, u.as_slice(), order).ok()?;
        Some(compose_derivatives(&jet, &derivs, order).pop().expect("order >= 1"))
    }

    fn domain(&self) -> (f64, f64) {
        self.range
    }
}

/// Integrates the geodesic through `u0` with initial direction `x0`
/// (parameter coordinates), normalized to unit pseudo-speed, covering
/// `t` in `[-span/2, span/2]`.
pub fn integrate_geodesic<'a>(
    chart: &'a ImmersionChart,
    u0: &[f64],
    x0: &DVector<f64>,
    span: f64,
    tols: &Tolerances,
) -> Result<GeodesicCurve<'a>> {
    let state = extrinsic_state(chart, u0, tols)?;
    let speed_sq = state.induced_dot(x0, x0);
    if speed_sq.abs() < 1e-12 {
        return Err(GeoError::NullSegment { t: 0.0 });
    }
    let x_unit = x0 / speed_sq.abs().sqrt();
    let n = chart.param_dim();
    let mut y0 = DVector::zeros(2 * n);
    for i in 0..n {
        y0[i] = u0[i];
        y0[n + i] = x_unit[i];
    }
    let field = GeodesicField { chart, tols };
    let opts = OdeOptions::default();
    let half = span / 2.0;
    let forward = ode::integrate(&field, 0.0, &y0, half, &opts)?;
    let backward = ode::integrate(&field, 0.0, &y0, -half, &opts)?;
    Ok(GeodesicCurve {
        chart,
        tols: tols.clone(),
        forward,
        backward,
        range: (-half, half),
    })
}

/// Pseudo-isotropy data at one sample point.
#[derive(Debug, Clone)]
pub struct PointIsotropy {
    pub point: Vec<f64>,
    pub l_min: f64,
    pub l_max: f64,
    pub spread: f64,
    /// Max `|<h(X,X), h(X,Y)>|` over sampled pseudo-orthonormal pairs.
    pub cross_max: f64,
    pub directions: usize,
}

/// Isotropy profile over a sample set.
#[derive(Debug, Clone)]
pub struct IsotropyProfile {
    pub per_point: Vec<PointIsotropy>,
    /// Sample points dropped due to isolated frame degeneracies.
    pub skipped_points: usize,
    pub l_min: f64,
    pub l_max: f64,
    /// Spread of `L = <h(X,X), h(X,X)>` over all points and directions.
    pub global_spread: f64,
    pub cross_max: f64,
}

/// Sweeps unit tangent directions at each sample point and reports the
/// spread of `L = <h(X, X), h(X, X)>` plus the orthogonality cross-check
/// `<h(X,X), h(X,Y)>` on pseudo-orthonormal pairs. Null directions are
/// excluded by the sweep.
pub fn pseudo_isotropy_profile(
    chart: &ImmersionChart,
    points: &[Vec<f64>],
    directions_per_point: usize,
    tols: &Tolerances,
) -> Result<IsotropyProfile> {
    let sig = *chart.signature();
    let mut per_point = Vec::with_capacity(points.len());
    let mut l_min = f64::INFINITY;
    let mut l_max = f64::NEG_INFINITY;
    let mut cross_global = 0.0f64;
    let mut skipped = 0usize;
    for u in points {
        // Isolated frame degeneracies are measure-zero under perturbation:
        // skip the sample point instead of aborting the sweep.
        let state = match extrinsic_state(chart, u, tols) {
            Ok(state) => state,
            Err(GeoError::NullIntermediate { .. }) => {
                skipped += 1;
                continue;
            }
            Err(other) => return Err(other),
        };
        let n = state.param_dim();
        let mut p_min = f64::INFINITY;
        let mut p_max = f64::NEG_INFINITY;
        let mut p_cross = 0.0f64;
        let dirs = direction_sweep(&state.tangent_signs, directions_per_point);
        let count = dirs.len();
        for (coords, _kind) in &dirs {
            let mut x = DVector::zeros(n);
            for i in 0..n {
                x += &state.frame_directions[i] * coords[i];
            }
            let hxx = state.second_fundamental_form(&x, &x);
            let l = sig.dot(&hxx, &hxx);
            p_min = p_min.min(l);
            p_max = p_max.max(l);
            if n == 2 {
                if let Some((ycoords, _)) = orthogonal_complement_2d(&state.tangent_signs, coords)
                {
                    let mut y = DVector::zeros(n);
                    for i in 0..n {
                        y += &state.frame_directions[i] * ycoords[i];
                    }
                    let hxy = state.second_fundamental_form(&x, &y);
                    p_cross = p_cross.max(sig.dot(&hxx, &hxy).abs());
                }
            }
        }
        l_min = l_min.min(p_min);
        l_max = l_max.max(p_max);
        cross_global = cross_global.max(p_cross);
        per_point.push(PointIsotropy {
            point: u.clone(),
            l_min: p_min,
            l_max: p_max,
            spread: p_max - p_min,
            cross_max: p_cross,
            directions: count,
        });
    }
    if per_point.is_empty() {
        return Err(GeoError::NullIntermediate {
            index: skipped,
            value: 0.0,
        });
    }
    Ok(IsotropyProfile {
        per_point,
        skipped_points: skipped,
        l_min,
        l_max,
        global_spread: l_max - l_min,
        cross_max: cross_global,
    })
}

/// Causal character of a tangent direction given in parameter coordinates.
pub fn tangent_causal_kind(state: &ExtrinsicState, x: &DVector<f64>) -> CausalKind {
    let q = state.induced_dot(x, x);
    if q.abs() < 1e-10 * x.norm_squared().max(1e-300) {
        CausalKind::Null
    } else if q > 0.0 {
        CausalKind::Spacelike
    } else {
        CausalKind::Timelike
    }
}
