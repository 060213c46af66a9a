//! Oracle SI-SNR, permutation resolution between ground-truth and estimated
//! sources, and the correlation statistics used for evaluation.
//!
//! SI-SNR uses the standard zero-mean, projection-based definition: both
//! signals are mean-subtracted, the estimate is projected onto the reference,
//! and the ratio of projection energy to residual energy is reported in dB.
//! The result is invariant to rescaling (positive or negative) of the
//! estimate.

use crate::audio::AudioSignal;
use crate::error::{Error, Result};

/// Assignment between ground-truth sources and estimated sources.
///
/// `mapping` is a bijection of (truth index, estimate index) pairs;
/// `per_pair_sisnr[i]` is the SI-SNR of `mapping[i]`. A perfect pair carries
/// the `+infinity` sentinel.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationAssignment {
    pub mapping: [(usize, usize); 2],
    pub per_pair_sisnr: [f64; 2],
}

impl PermutationAssignment {
    /// SI-SNR of the truth matched to estimate `k` under this assignment.
    pub fn sisnr_for_estimate(&self, k: usize) -> f64 {
        for (i, &(_, est)) in self.mapping.iter().enumerate() {
            if est == k {
                return self.per_pair_sisnr[i];
            }
        }
        unreachable!("mapping is a bijection over both estimates")
    }
}

fn check_pair(reference: &AudioSignal, estimate: &AudioSignal) -> Result<()> {
    if reference.len() != estimate.len() {
        return Err(Error::LengthMismatch { left: reference.len(), right: estimate.len() });
    }
    if reference.sample_rate() != estimate.sample_rate() {
        return Err(Error::RateMismatch {
            left: reference.sample_rate(),
            right: estimate.sample_rate(),
        });
    }
    if reference.len() < 2 {
        return Err(Error::DegenerateSignal("SI-SNR needs at least 2 samples".into()));
    }
    Ok(())
}

/// Scale-invariant signal-to-noise ratio in dB.
///
/// Returns the `+infinity` sentinel when the residual energy is below
/// `1e-12` times the projection energy, and `-infinity` when the estimate
/// carries no component of the reference at all.
pub fn si_snr(reference: &AudioSignal, estimate: &AudioSignal) -> Result<f64> {
    check_pair(reference, estimate)?;
    let s = reference.samples();
    let e = estimate.samples();
    let n = s.len() as f64;
    let s_mean = s.iter().sum::<f64>() / n;
    let e_mean = e.iter().sum::<f64>() / n;

    let mut dot = 0.0;
    let mut ss = 0.0;
    for (&si, &ei) in s.iter().zip(e) {
        let sz = si - s_mean;
        let ez = ei - e_mean;
        dot += ez * sz;
        ss += sz * sz;
    }
    if ss == 0.0 {
        return Err(Error::DegenerateSignal("constant reference".into()));
    }
    let alpha = dot / ss;
    let target_energy = alpha * alpha * ss;
    let mut residual_energy = 0.0;
    for (&si, &ei) in s.iter().zip(e) {
        let r = (ei - e_mean) - alpha * (si - s_mean);
        residual_energy += r * r;
    }

    if target_energy == 0.0 {
        // Estimate is orthogonal to (or entirely devoid of) the reference.
        return Ok(f64::NEG_INFINITY);
    }
    if residual_energy < 1e-12 * target_energy {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (target_energy / residual_energy).log10())
}

/// Maps the infinity sentinels onto large finite scores so assignment sums
/// stay ordered and NaN-free.
fn assignment_score(v: f64) -> f64 {
    if v == f64::INFINITY {
        1e18
    } else if v == f64::NEG_INFINITY {
        -1e18
    } else {
        v
    }
}

/// Chooses the truth/estimate assignment maximizing mean pairwise SI-SNR over
/// the two possible 2x2 bijections. Ties go to the identity mapping.
pub fn resolve_permutation(
    truths: &[AudioSignal; 2],
    estimates: &[AudioSignal; 2],
) -> Result<PermutationAssignment> {
    let s00 = si_snr(&truths[0], &estimates[0])?;
    let s11 = si_snr(&truths[1], &estimates[1])?;
    let s01 = si_snr(&truths[0], &estimates[1])?;
    let s10 = si_snr(&truths[1], &estimates[0])?;

    let identity = assignment_score(s00) + assignment_score(s11);
    let swapped = assignment_score(s01) + assignment_score(s10);
    if swapped > identity {
        Ok(PermutationAssignment { mapping: [(0, 1), (1, 0)], per_pair_sisnr: [s01, s10] })
    } else {
        Ok(PermutationAssignment { mapping: [(0, 0), (1, 1)], per_pair_sisnr: [s00, s11] })
    }
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch { left: xs.len(), right: ys.len() });
    }
    if xs.len() < 2 {
        return Err(Error::DegenerateStatistics(
            "correlation needs at least 2 points".into(),
        ));
    }
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - x_mean;
        let dy = y - y_mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateStatistics("constant input sequence".into()));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Mean absolute error between two equal-length sequences.
pub fn mean_absolute_error(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch { left: xs.len(), right: ys.len() });
    }
    if xs.is_empty() {
        return Err(Error::DegenerateStatistics("empty sequences".into()));
    }
    let total: f64 = xs.iter().zip(ys).map(|(&x, &y)| (x - y).abs()).sum();
    Ok(total / xs.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sig(samples: &[f64]) -> AudioSignal {
        AudioSignal::new(samples.to_vec(), 8000).unwrap()
    }

    fn random_sig(rng: &mut ChaCha8Rng, n: usize) -> AudioSignal {
        let samples: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        AudioSignal::new(samples, 8000).unwrap()
    }

    /// Brute-force SI-SNR straight from the definition, kept deliberately
    /// separate from the implementation above.
    fn si_snr_reference(s: &[f64], e: &[f64]) -> f64 {
        let n = s.len() as f64;
        let sm = s.iter().sum::<f64>() / n;
        let em = e.iter().sum::<f64>() / n;
        let sz: Vec<f64> = s.iter().map(|v| v - sm).collect();
        let ez: Vec<f64> = e.iter().map(|v| v - em).collect();
        let alpha = sz.iter().zip(&ez).map(|(a, b)| a * b).sum::<f64>()
            / sz.iter().map(|a| a * a).sum::<f64>();
        let st: Vec<f64> = sz.iter().map(|v| alpha * v).collect();
        let err: Vec<f64> = ez.iter().zip(&st).map(|(a, b)| a - b).collect();
        let num = st.iter().map(|v| v * v).sum::<f64>();
        let den = err.iter().map(|v| v * v).sum::<f64>();
        10.0 * (num / den).log10()
    }

    #[test]
    fn identical_signals_hit_the_sentinel() {
        let s = sig(&[0.3, -0.6, 0.1, 0.9]);
        assert_eq!(si_snr(&s, &s).unwrap(), f64::INFINITY);
    }

    #[test]
    fn hand_derived_case() {
        let s = sig(&[1.0, -1.0, 1.0, -1.0]);
        let e = sig(&[1.0, -1.0, 1.0, 1.0]);
        let v = si_snr(&s, &e).unwrap();
        assert!((v - (-3.0103)).abs() < 5e-4, "got {v}");
        assert!((v - si_snr_reference(s.samples(), e.samples())).abs() < 1e-12);
    }

    #[test]
    fn matches_reference_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let s = random_sig(&mut rng, 257);
            let e = random_sig(&mut rng, 257);
            let got = si_snr(&s, &e).unwrap();
            let want = si_snr_reference(s.samples(), e.samples());
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn scale_and_shift_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = random_sig(&mut rng, 512);
        let e = random_sig(&mut rng, 512);
        let base = si_snr(&s, &e).unwrap();
        for alpha in [3.0, -2.0, 0.01] {
            let scaled = sig(&e.samples().iter().map(|v| alpha * v).collect::<Vec<_>>());
            assert!((si_snr(&s, &scaled).unwrap() - base).abs() < 1e-6);
        }
        let shifted = sig(&e.samples().iter().map(|v| v + 5.0).collect::<Vec<_>>());
        assert!((si_snr(&s, &shifted).unwrap() - base).abs() < 1e-6);
    }

    #[test]
    fn errors_on_mismatch_and_constant_reference() {
        let a = sig(&[0.1, 0.2, 0.3]);
        let b = sig(&[0.1, 0.2]);
        assert!(matches!(si_snr(&a, &b), Err(Error::LengthMismatch { .. })));
        let c = sig(&[0.5, 0.5, 0.5]);
        assert!(matches!(si_snr(&c, &a), Err(Error::DegenerateSignal(_))));
    }

    #[test]
    fn permutation_identity_and_swap() {
        // Orthogonal signals after mean removal.
        let a = sig(&[1.0, -1.0, 1.0, -1.0]);
        let b = sig(&[1.0, 1.0, -1.0, -1.0]);

        let id = resolve_permutation(&[a.clone(), b.clone()], &[a.clone(), b.clone()]).unwrap();
        assert_eq!(id.mapping, [(0, 0), (1, 1)]);
        assert_eq!(id.per_pair_sisnr, [f64::INFINITY, f64::INFINITY]);

        let sw = resolve_permutation(&[a.clone(), b.clone()], &[b, a]).unwrap();
        assert_eq!(sw.mapping, [(0, 1), (1, 0)]);
    }

    #[test]
    fn permutation_matches_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let t0 = random_sig(&mut rng, 64);
            let t1 = random_sig(&mut rng, 64);
            let noisy = |t: &AudioSignal, rng: &mut ChaCha8Rng| {
                sig(&t
                    .samples()
                    .iter()
                    .map(|v| v + 0.3 * rng.random_range(-1.0..1.0))
                    .collect::<Vec<_>>())
            };
            let (e0, e1) = if rng.random_bool(0.5) {
                (noisy(&t0, &mut rng), noisy(&t1, &mut rng))
            } else {
                (noisy(&t1, &mut rng), noisy(&t0, &mut rng))
            };
            let truths = [t0.clone(), t1.clone()];
            let ests = [e0.clone(), e1.clone()];
            let got = resolve_permutation(&truths, &ests).unwrap();

            let id = si_snr(&t0, &e0).unwrap() + si_snr(&t1, &e1).unwrap();
            let sw = si_snr(&t0, &e1).unwrap() + si_snr(&t1, &e0).unwrap();
            let want = if sw > id { [(0, 1), (1, 0)] } else { [(0, 0), (1, 1)] };
            assert_eq!(got.mapping, want);
        }
    }

    #[test]
    fn pearson_cases() {
        let xs = [0.5, 1.0, 2.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        assert!((pearson(&xs, &ys).unwrap() - 1.0).abs() < 1e-9);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson(&xs, &neg).unwrap() + 1.0).abs() < 1e-9);

        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [1.0, 3.0, 2.0, 4.0];
        assert!((pearson(&a, &b).unwrap() - 0.8).abs() < 1e-12);

        assert!(matches!(
            pearson(&[1.0, 1.0], &[2.0, 3.0]),
            Err(Error::DegenerateStatistics(_))
        ));
    }

    #[test]
    fn pearson_affine_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..100).map(|_| rng.random_range(-5.0..5.0)).collect();
        let ys: Vec<f64> = (0..100).map(|_| rng.random_range(-5.0..5.0)).collect();
        let base = pearson(&xs, &ys).unwrap();
        let scaled: Vec<f64> = xs.iter().map(|x| 2.5 * x - 7.0).collect();
        assert!((pearson(&scaled, &ys).unwrap() - base).abs() < 1e-9);
        assert!((pearson(&ys, &xs).unwrap() - base).abs() < 1e-12);
    }

    #[test]
    fn mae_cases() {
        assert_eq!(mean_absolute_error(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(mean_absolute_error(&[0.0, 0.0], &[1.0, 3.0]).unwrap(), 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let xs: Vec<f64> = (0..57).map(|_| rng.random_range(-3.0..3.0)).collect();
        let ys: Vec<f64> = (0..57).map(|_| rng.random_range(-3.0..3.0)).collect();
        let manual = xs.iter().zip(&ys).map(|(x, y)| (x - y).abs()).sum::<f64>() / 57.0;
        assert!((mean_absolute_error(&xs, &ys).unwrap() - manual).abs() < 1e-15);
        assert!(matches!(
            mean_absolute_error(&[1.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
