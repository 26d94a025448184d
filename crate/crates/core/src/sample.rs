//! Deterministic sampling: a small splittable RNG and direction sweeps on
//! indefinite unit spheres.
//!
//! Everything here is seeded and reproducible; verification runs must
//! produce byte-identical reports for identical configs.

use alloc::vec::Vec;
use nalgebra::DVector;

use crate::linalg::CausalKind;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// SplitMix64: tiny, seedable, reproducible across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Unit directions in a pseudo-orthonormal tangent frame with the given
/// signs, from a deterministic low-discrepancy sweep. Directions whose
/// normalized self inner product falls below `min_causal` are skipped, so
/// the sweep never returns near-null directions; both causal characters
/// appear whenever the signs are mixed.
///
/// Returned coordinates `x` satisfy `sum_i signs_i x_i^2 = ±1`.
pub fn direction_sweep(signs: &[f64], count: usize) -> Vec<(DVector<f64>, CausalKind)> {
    let n = signs.len();
    let mut out = Vec::new();
    if n == 0 || count == 0 {
        return out;
    }
    if n == 1 {
        out.push((
            DVector::from_element(1, 1.0),
            if signs[0] > 0.0 {
                CausalKind::Spacelike
            } else {
                CausalKind::Timelike
            },
        ));
        return out;
    }
    // Golden-ratio angle sweep for n = 2; golden-vector sweep otherwise.
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    let min_causal = 0.15;
    let mut phase = 0.137;
    let mut attempts = 0;
    while out.len() < count && attempts < 64 * count {
        attempts += 1;
        phase = (phase + GOLDEN) % 1.0;
        let raw: DVector<f64> = if n == 2 {
            let theta = core::f64::consts::PI * phase;
            DVector::from_vec(alloc::vec![theta.cos(), theta.sin()])
        } else {
            let mut v = DVector::zeros(n);
            let mut p = phase;
            for i in 0..n {
                p = (p + GOLDEN) % 1.0;
                v[i] = 2.0 * p - 1.0;
            }
            if v.norm() == 0.0 {
                continue;
            }
            v.normalize()
        };
        let mut q = 0.0;
        for i in 0..n {
            q += signs[i] * raw[i] * raw[i];
        }
        let euclid = raw.norm_squared();
        if q.abs() < min_causal * euclid {
            continue;
        }
        let kind = if q > 0.0 {
            CausalKind::Spacelike
        } else {
            CausalKind::Timelike
        };
        out.push((&raw / q.abs().sqrt(), kind));
    }
    out
}

/// A direction pseudo-orthogonal to `x` in a two-dimensional frame with the
/// given signs, normalized to unit pseudo-norm. `None` when the complement
/// is numerically null.
pub fn orthogonal_complement_2d(signs: &[f64], x: &DVector<f64>) -> Option<(DVector<f64>, CausalKind)> {
    debug_assert_eq!(signs.len(), 2);
    debug_assert_eq!(x.len(), 2);
    let y = DVector::from_vec(alloc::vec![signs[1] * x[1], -signs[0] * x[0]]);
    let q = signs[0] * y[0] * y[0] + signs[1] * y[1] * y[1];
    let euclid = y.norm_squared();
    if euclid == 0.0 || q.abs() < 0.15 * euclid {
        return None;
    }
    let kind = if q > 0.0 {
        CausalKind::Spacelike
    } else {
        CausalKind::Timelike
    };
    Some((&y / q.abs().sqrt(), kind))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let x = a.next_f64();
        assert!((0.0..1.0).contains(&x));
    }

    #[test]
    fn definite_sweep_is_unit_and_spacelike() {
        let signs = [1.0, 1.0];
        for (x, kind) in direction_sweep(&signs, 16) {
            assert_eq!(kind, CausalKind::Spacelike);
            let q: f64 = x[0] * x[0] + x[1] * x[1];
            assert!((q - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn indefinite_sweep_covers_both_characters() {
        let signs = [-1.0, 1.0];
        let dirs = direction_sweep(&signs, 24);
        assert!(dirs.len() >= 20);
        let spacelike = dirs.iter().filter(|(_, k)| *k == CausalKind::Spacelike).count();
        let timelike = dirs.iter().filter(|(_, k)| *k == CausalKind::Timelike).count();
        assert!(spacelike > 0 && timelike > 0);
        for (x, _) in &dirs {
            let q: f64 = -x[0] * x[0] + x[1] * x[1];
            assert!((q.abs() - 1.0).abs() < 1e-12, "q = {q}");
        }
    }

    #[test]
    fn complement_is_orthogonal_and_unit() {
        let signs = [-1.0, 1.0];
        for (x, _) in direction_sweep(&signs, 12) {
            if let Some((y, _)) = orthogonal_complement_2d(&signs, &x) {
                let ip = signs[0] * x[0] * y[0] + signs[1] * x[1] * y[1];
                assert!(ip.abs() < 1e-12);
                let q = signs[0] * y[0] * y[0] + signs[1] * y[1] * y[1];
                assert!((q.abs() - 1.0).abs() < 1e-12);
            }
        }
    }
}
