//! Quasi-isometry constants from sampled distance pairs.

use crate::error::AdsError;
use crate::Result;

#[derive(Debug, Clone, Copy)]
pub struct QiConfig {
    /// Additive-budget cap: the search minimizes A subject to B(A) <= b_max.
    pub b_max: f64,
}

impl Default for QiConfig {
    fn default() -> Self {
        QiConfig { b_max: 0.5 }
    }
}

/// Smallest (A, B) with (1/A) d - B <= d' <= A d + B over the sample,
/// minimizing A subject to feasibility with B <= b_max, tie-broken by the
/// minimal feasible B at that A.
///
/// `pairs` are (d, d') distance pairs; at least 100 are required and
/// distances must be positive.
pub fn qi_constants(pairs: &[(f64, f64)], cfg: &QiConfig) -> Result<(f64, f64)> {
    if pairs.len() < 100 {
        return Err(AdsError::InvalidInput(format!(
            "need at least 100 sample pairs, got {}",
            pairs.len()
        )));
    }
    for &(d, dp) in pairs {
        if d <= 0.0 || dp <= 0.0 || !d.is_finite() || !dp.is_finite() {
            return Err(AdsError::InvalidInput(
                "distance pairs must be positive and finite".into(),
            ));
        }
    }
    // B(A): the minimal additive constant making A feasible; non-increasing
    let b_of = |a: f64| -> f64 {
        let mut b: f64 = 0.0;
        for &(d, dp) in pairs {
            b = b.max(dp - a * d).max(d / a - dp);
        }
        b.max(0.0)
    };
    // A with B = 0: the pure multiplicative bound
    let mut a_hi: f64 = 1.0;
    for &(d, dp) in pairs {
        a_hi = a_hi.max(dp / d).max(d / dp);
    }
    if b_of(1.0) <= cfg.b_max {
        // bisect the smallest feasible A in [1, a_hi]
        return Ok((1.0, b_of(1.0)));
    }
    let mut lo = 1.0;
    let mut hi = a_hi;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if b_of(mid) <= cfg.b_max {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi, b_of(hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn isometry_samples_give_one_zero() {
        let pairs: Vec<(f64, f64)> = (0..200)
            .map(|i| {
                let d = 0.1 + i as f64 * 0.1;
                (d, d)
            })
            .collect();
        let (a, b) = qi_constants(&pairs, &QiConfig::default()).unwrap();
        assert!((a - 1.0).abs() <= 1e-9);
        assert!(b.abs() <= 1e-9);
    }

    #[test]
    fn additive_noise_gives_small_b() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let delta = 0.05;
        let pairs: Vec<(f64, f64)> = (0..500)
            .map(|_| {
                let d: f64 = rng.random_range(0.1..20.0);
                let noisy: f64 = d + rng.random_range(-delta..delta);
                (d, noisy.max(1e-3))
            })
            .collect();
        let (a, b) = qi_constants(&pairs, &QiConfig::default()).unwrap();
        assert!(a <= 1.0 + 1e-9, "A = {a}");
        assert!(b <= 2.0 * delta, "B = {b}");
    }

    #[test]
    fn multiplicative_stretch_forces_a() {
        // d' = e d: with a capped additive budget the slope must be ~ e
        let pairs: Vec<(f64, f64)> = (0..300)
            .map(|i| {
                let d = 0.1 + i as f64 * (20.0 - 0.1) / 299.0;
                (d, std::f64::consts::E * d)
            })
            .collect();
        let (a, _b) = qi_constants(&pairs, &QiConfig::default()).unwrap();
        assert!(
            (a - std::f64::consts::E).abs() <= 0.05,
            "A = {a}, expected ~ e"
        );
    }

    #[test]
    fn too_few_pairs_rejected() {
        let pairs = vec![(1.0, 1.0); 50];
        assert!(qi_constants(&pairs, &QiConfig::default()).is_err());
    }
}
