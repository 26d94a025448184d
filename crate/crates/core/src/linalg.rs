//! Indefinite inner products, causal classification and
//! pseudo-orthonormalization over `E^m_s`.
//!
//! Conventions: the first `s` coordinates carry the minus sign, so
//! `<u, v> = -sum_{i<s} u_i v_i + sum_{i>=s} u_i v_i`. Normalization always
//! divides by `|<w,w>|^{1/2}`, which preserves causal character; null
//! vectors are never normalized. Rank decisions deliberately use the
//! Euclidean inner product: linear dependence is a vector-space property
//! and the indefinite Gram matrix can be singular for independent vectors.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::GeoError;
use crate::Result;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Default absolute null tolerance on the self inner product of a
/// Euclidean-normalized vector.
pub const TOL_NULL: f64 = 1e-8;
/// Default relative tolerance for numerical rank decisions.
pub const TOL_RANK: f64 = 1e-8;

/// Signature of a nondegenerate symmetric bilinear form on `R^m`:
/// dimension `m` and index `s` (number of timelike directions),
/// `0 <= s <= m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricSignature {
    dim: usize,
    index: usize,
}

impl MetricSignature {
    /// Creates a signature with `index` minus signs among `dim` coordinates.
    pub fn new(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 || index > dim {
            return Err(GeoError::Dimension {
                expected: dim,
                got: index,
            });
        }
        Ok(Self { dim, index })
    }

    /// Positive definite signature on `R^m`.
    pub fn euclidean(dim: usize) -> Self {
        Self { dim, index: 0 }
    }

    /// Signature with a single timelike direction (index 1).
    pub fn lorentzian(dim: usize) -> Self {
        debug_assert!(dim >= 1);
        Self { dim, index: 1 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Metric coefficient of the `i`-th standard basis vector.
    pub fn coefficient(&self, i: usize) -> f64 {
        if i < self.index {
            -1.0
        } else {
            1.0
        }
    }

    /// Indefinite inner product. Panics on dimension mismatch; use
    /// [`inner_product`] for the checked variant.
    pub fn dot(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        assert_eq!(u.len(), self.dim, "metric dot: dimension mismatch");
        assert_eq!(v.len(), self.dim, "metric dot: dimension mismatch");
        let mut acc = 0.0;
        for i in 0..self.index {
            acc -= u[i] * v[i];
        }
        for i in self.index..self.dim {
            acc += u[i] * v[i];
        }
        acc
    }

    /// Self inner product `<v, v>`.
    pub fn norm_sq(&self, v: &DVector<f64>) -> f64 {
        self.dot(v, v)
    }

    /// `|<v, v>|^{1/2}` — the pseudo-norm of a non-null vector.
    pub fn pseudo_norm(&self, v: &DVector<f64>) -> f64 {
        self.norm_sq(v).abs().sqrt()
    }

    /// Gram matrix of the standard basis: `diag(-1 x index, +1 x rest)`.
    pub fn gram(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| {
            if i == j {
                self.coefficient(i)
            } else {
                0.0
            }
        })
    }
}

/// Causal class of a vector under an indefinite metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalKind {
    Spacelike,
    Timelike,
    Null,
}

/// Causal class together with the self inner product that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausalCharacter {
    pub kind: CausalKind,
    pub norm_sq: f64,
}

impl CausalCharacter {
    pub fn is_null(&self) -> bool {
        self.kind == CausalKind::Null
    }
}

/// Checked indefinite inner product; `DimensionError` on length mismatch.
pub fn inner_product(u: &DVector<f64>, v: &DVector<f64>, sig: &MetricSignature) -> Result<f64> {
    if u.len() != sig.dim() {
        return Err(GeoError::Dimension {
            expected: sig.dim(),
            got: u.len(),
        });
    }
    if v.len() != sig.dim() {
        return Err(GeoError::Dimension {
            expected: sig.dim(),
            got: v.len(),
        });
    }
    Ok(sig.dot(u, v))
}

/// Classifies `v` as spacelike, timelike or null.
///
/// The test is scale invariant: the self inner product is compared against
/// `tol_null` after Euclidean normalization, so `causal_character(c * v)`
/// agrees with `causal_character(v)` for any `c != 0`. A zero vector is
/// null by convention.
pub fn causal_character(v: &DVector<f64>, sig: &MetricSignature, tol_null: f64) -> CausalCharacter {
    let norm_sq = sig.norm_sq(v);
    let euclid_sq = v.norm_squared();
    let kind = if euclid_sq == 0.0 || norm_sq.abs() <= tol_null * euclid_sq {
        CausalKind::Null
    } else if norm_sq > 0.0 {
        CausalKind::Spacelike
    } else {
        CausalKind::Timelike
    };
    CausalCharacter { kind, norm_sq }
}

/// A pseudo-orthonormal frame produced by [`pseudo_gram_schmidt`].
///
/// `vectors[i]` satisfies `<V_i, V_j> = signs[i] * delta_ij`, and
/// `coeffs[i]` expresses `V_i` in terms of the input sequence:
/// `V_i = sum_j coeffs[i][j] * input_j`. The span of the first `k` outputs
/// equals the span of the first `k` inputs for every `k`.
#[derive(Debug, Clone)]
pub struct PseudoFrame {
    pub vectors: Vec<DVector<f64>>,
    pub signs: Vec<f64>,
    pub coeffs: Vec<DVector<f64>>,
}

impl PseudoFrame {
    /// Component of `w` along `V_i` in the pseudo-orthonormal expansion
    /// `w = sum_i eps_i <w, V_i> V_i + (off-span part)`.
    pub fn component(&self, sig: &MetricSignature, w: &DVector<f64>, i: usize) -> f64 {
        self.signs[i] * sig.dot(w, &self.vectors[i])
    }

    /// Projection of `w` onto the span of the frame.
    pub fn project(&self, sig: &MetricSignature, w: &DVector<f64>) -> DVector<f64> {
        let mut acc = DVector::zeros(w.len());
        for i in 0..self.vectors.len() {
            acc += &self.vectors[i] * self.component(sig, w, i);
        }
        acc
    }
}

/// Pseudo-orthonormalizes `vectors` under `sig` by modified Gram-Schmidt.
///
/// Fails with `RankDeficient` when an input is dependent on its
/// predecessors within `tol_rank` (relative, Euclidean), and with
/// `NullIntermediate` when an orthogonalized residual is numerically null
/// — the indefinite analogue of the construction breaking down.
pub fn pseudo_gram_schmidt(
    vectors: &[DVector<f64>],
    sig: &MetricSignature,
    tol_null: f64,
) -> Result<PseudoFrame> {
    pseudo_gram_schmidt_with(vectors, sig, tol_null, TOL_RANK)
}

/// [`pseudo_gram_schmidt`] with an explicit rank tolerance.
pub fn pseudo_gram_schmidt_with(
    vectors: &[DVector<f64>],
    sig: &MetricSignature,
    tol_null: f64,
    tol_rank: f64,
) -> Result<PseudoFrame> {
    let m = sig.dim();
    let k = vectors.len();
    if k > m {
        return Err(GeoError::RankDeficient { index: m });
    }
    let mut frame = PseudoFrame {
        vectors: Vec::with_capacity(k),
        signs: Vec::with_capacity(k),
        coeffs: Vec::with_capacity(k),
    };
    for (idx, v) in vectors.iter().enumerate() {
        if v.len() != m {
            return Err(GeoError::Dimension {
                expected: m,
                got: v.len(),
            });
        }
        let mut w = v.clone();
        let mut coeff = DVector::zeros(k);
        coeff[idx] = 1.0;
        for j in 0..frame.vectors.len() {
            let alpha = frame.signs[j] * sig.dot(&w, &frame.vectors[j]);
            w -= &frame.vectors[j] * alpha;
            coeff -= &frame.coeffs[j] * alpha;
        }
        let w_norm = w.norm();
        if w_norm <= tol_rank * v.norm().max(f64::MIN_POSITIVE) {
            return Err(GeoError::RankDeficient { index: idx });
        }
        let self_ip = sig.norm_sq(&w);
        let normalized_ip = self_ip / (w_norm * w_norm);
        if normalized_ip.abs() <= tol_null {
            return Err(GeoError::NullIntermediate {
                index: idx,
                value: normalized_ip,
            });
        }
        let scale = 1.0 / self_ip.abs().sqrt();
        frame.vectors.push(&w * scale);
        frame.coeffs.push(&coeff * scale);
        frame.signs.push(if self_ip > 0.0 { 1.0 } else { -1.0 });
    }
    Ok(frame)
}

/// Singular values of the matrix whose rows are `vectors` (Euclidean),
/// sorted descending.
pub fn singular_profile(vectors: &[DVector<f64>]) -> Vec<f64> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = vectors[0].len();
    let rows = vectors.len();
    let mat = DMatrix::from_fn(rows, m, |i, j| vectors[i][j]);
    let mut sv: Vec<f64> = mat.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    sv
}

/// Numerical rank of a vector sequence: the count of singular values above
/// `tol_rank` times the largest one.
pub fn dependence_order(vectors: &[DVector<f64>], tol_rank: f64) -> usize {
    let sv = singular_profile(vectors);
    match sv.first() {
        None => 0,
        Some(&top) if top == 0.0 => 0,
        Some(&top) => sv.iter().filter(|&&s| s > tol_rank * top).count(),
    }
}

/// Completes `frame` to a full pseudo-orthonormal frame of the ambient
/// space, drawing candidates from the standard basis.
///
/// Each round greedily picks the candidate with the largest orthogonalized
/// residual whose residual is not numerically null; candidates that are
/// nearly dependent on the accumulated frame are skipped. Deterministic:
/// ties resolve to the lowest basis index.
pub fn complete_frame(
    frame: &PseudoFrame,
    sig: &MetricSignature,
    tol_null: f64,
) -> Result<Vec<(DVector<f64>, f64)>> {
    let m = sig.dim();
    let mut acc_vectors: Vec<DVector<f64>> = frame.vectors.clone();
    let mut acc_signs: Vec<f64> = frame.signs.clone();
    let mut added: Vec<(DVector<f64>, f64)> = Vec::new();
    let mut used = alloc::vec![false; m];
    while acc_vectors.len() < m {
        let mut best: Option<(usize, DVector<f64>, f64, f64)> = None;
        for cand in 0..m {
            if used[cand] {
                continue;
            }
            let mut w = DVector::zeros(m);
            w[cand] = 1.0;
            for j in 0..acc_vectors.len() {
                let alpha = acc_signs[j] * sig.dot(&w, &acc_vectors[j]);
                w -= &acc_vectors[j] * alpha;
            }
            let norm = w.norm();
            if norm <= 1e-6 {
                continue;
            }
            let self_ip = sig.norm_sq(&w);
            if (self_ip / (norm * norm)).abs() <= tol_null {
                continue;
            }
            if best.as_ref().map_or(true, |b| norm > b.3) {
                best = Some((cand, w, self_ip, norm));
            }
        }
        let (cand, w, self_ip, _) = best.ok_or(GeoError::NullIntermediate {
            index: acc_vectors.len(),
            value: 0.0,
        })?;
        used[cand] = true;
        let scale = 1.0 / self_ip.abs().sqrt();
        let sign = if self_ip > 0.0 { 1.0 } else { -1.0 };
        let v = &w * scale;
        acc_vectors.push(v.clone());
        acc_signs.push(sign);
        added.push((v, sign));
    }
    Ok(added)
}
