//! Small numeric helpers shared across evaluation and design code.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Arithmetic mean; zero for an empty slice.
pub fn mean<F: Scalar>(xs: &[F]) -> F {
    if xs.is_empty() {
        return F::zero();
    }
    let sum = xs.iter().fold(F::zero(), |a, &x| a + x);
    sum / F::from64(xs.len() as f64)
}

/// Central moments (m2, m3) about the mean.
fn central_moments<F: Scalar>(xs: &[F]) -> (F, F) {
    let m = mean(xs);
    let n = F::from64(xs.len() as f64);
    let mut m2 = F::zero();
    let mut m3 = F::zero();
    for &x in xs {
        let d = x - m;
        m2 = m2 + d * d;
        m3 = m3 + d * d * d;
    }
    (m2 / n, m3 / n)
}

/// Sample skewness g1 = m3 / m2^(3/2). None when the values carry no spread.
pub fn skewness_g1<F: Scalar>(xs: &[F]) -> Option<F> {
    if xs.len() < 2 {
        return None;
    }
    let (m2, m3) = central_moments(xs);
    if m2 <= F::zero() {
        return None;
    }
    Some(m3 / m2.powf(F::from64(1.5)))
}

/// Slope of the weighted least-squares line through `(x, y)` points.
///
/// Weights must be non-negative; points with zero weight drop out. Returns
/// an error when fewer than two distinct x positions carry weight.
pub fn wls_slope<F: Scalar>(points: &[(F, F, F)]) -> Result<F> {
    let mut sw = F::zero();
    let mut swx = F::zero();
    let mut swy = F::zero();
    for &(x, y, w) in points {
        if w < F::zero() {
            return Err(Error::InvalidParameter("weights must be >= 0".into()));
        }
        sw = sw + w;
        swx = swx + w * x;
        swy = swy + w * y;
    }
    if sw <= F::zero() {
        return Err(Error::DegenerateBins);
    }
    let xbar = swx / sw;
    let ybar = swy / sw;
    let mut sxx = F::zero();
    let mut sxy = F::zero();
    for &(x, y, w) in points {
        let dx = x - xbar;
        sxx = sxx + w * dx * dx;
        sxy = sxy + w * dx * (y - ybar);
    }
    if sxx <= F::zero() {
        return Err(Error::DegenerateBins);
    }
    Ok(sxy / sxx)
}

/// Ranks starting at 1, ties sharing the average of their positions.
pub fn average_ranks<F: Scalar>(xs: &[F]) -> Vec<f64> {
    let n = xs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).expect("rankable values"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let shared = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = shared;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation between two equal-length series.
pub fn spearman<F: Scalar>(a: &[F], b: &[F]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::InvalidParameter(
            "correlation needs at least two points".into(),
        ));
    }
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let n = ra.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut da = 0.0;
    let mut db = 0.0;
    for i in 0..ra.len() {
        let xa = ra[i] - ma;
        let xb = rb[i] - mb;
        num += xa * xb;
        da += xa * xa;
        db += xb * xb;
    }
    if da == 0.0 || db == 0.0 {
        return Err(Error::InvalidParameter(
            "correlation undefined for a constant series".into(),
        ));
    }
    Ok(num / (da * db).sqrt())
}

/// Result of a two-sample Kolmogorov-Smirnov test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsTest {
    /// Largest gap between the two empirical distribution functions.
    pub statistic: f64,
    /// Asymptotic two-sided p-value.
    pub p_value: f64,
}

/// Two-sample KS test with the asymptotic Kolmogorov p-value.
pub fn two_sample_ks<F: Scalar>(a: &[F], b: &[F]) -> Result<KsTest> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter(
            "both samples must be non-empty".into(),
        ));
    }
    let mut sa: Vec<f64> = a.iter().map(|x| x.into64()).collect();
    let mut sb: Vec<f64> = b.iter().map(|x| x.into64()).collect();
    sa.sort_by(|x, y| x.partial_cmp(y).expect("sortable values"));
    sb.sort_by(|x, y| x.partial_cmp(y).expect("sortable values"));
    let (na, nb) = (sa.len(), sb.len());
    let mut i = 0;
    let mut j = 0;
    let mut stat: f64 = 0.0;
    while i < na && j < nb {
        let cut = sa[i].min(sb[j]);
        while i < na && sa[i] <= cut {
            i += 1;
        }
        while j < nb && sb[j] <= cut {
            j += 1;
        }
        let gap = (i as f64 / na as f64 - j as f64 / nb as f64).abs();
        stat = stat.max(gap);
    }
    let en = ((na as f64 * nb as f64) / (na as f64 + nb as f64)).sqrt();
    Ok(KsTest {
        statistic: stat,
        p_value: kolmogorov_sf(en * stat),
    })
}

/// Survival function of the Kolmogorov distribution.
fn kolmogorov_sf(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * (-2.0 * (k as f64) * (k as f64) * t * t).exp();
        sum += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mean_and_skewness_match_hand_values() {
        assert_abs_diff_eq!(mean(&[1.0f64, 2.0, 3.0, 6.0]), 3.0);
        // Symmetric data has zero skewness.
        assert_abs_diff_eq!(
            skewness_g1(&[-2.0f64, -1.0, 0.0, 1.0, 2.0]).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        // Constant data has none at all.
        assert!(skewness_g1(&[4.0f64, 4.0, 4.0]).is_none());
        // {0, 0, 1}: m2 = 2/9, m3 = 2/27, g1 = m3 / m2^1.5 = 1/sqrt(2).
        assert_abs_diff_eq!(
            skewness_g1(&[0.0f64, 0.0, 1.0]).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn wls_slope_matches_hand_computation() {
        // Three bins at x = 1, 2, 3 with rates 0.2, 0.5, 0.6 and
        // weights 10, 20, 10. Weighted means: xbar = 2, ybar = 0.45.
        // sxy = 10*(-1)*(-0.25) + 0 + 10*(1)*(0.15) = 4.0; sxx = 20.
        let pts = [(1.0f64, 0.2, 10.0), (2.0, 0.5, 20.0), (3.0, 0.6, 10.0)];
        assert_abs_diff_eq!(wls_slope(&pts).unwrap(), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn wls_slope_rejects_degenerate_input() {
        assert!(wls_slope(&[(1.0f64, 0.5, 1.0)]).is_err());
        assert!(wls_slope(&[(1.0f64, 0.1, 1.0), (1.0, 0.9, 3.0)]).is_err());
        assert!(wls_slope(&[(1.0f64, 0.1, 0.0), (2.0, 0.9, 0.0)]).is_err());
    }

    #[test]
    fn midranks_share_tied_positions() {
        let ranks = average_ranks(&[10.0f64, 20.0, 20.0, 30.0]);
        assert_eq!(ranks, vec![1.0, 2.5, 2.5, 4.0]);
    }

    #[test]
    fn spearman_detects_monotone_association() {
        let a = [1.0f64, 2.0, 3.0, 4.0, 5.0];
        let b = [2.0f64, 4.0, 9.0, 16.0, 30.0];
        assert_abs_diff_eq!(spearman(&a, &b).unwrap(), 1.0, epsilon = 1e-12);
        let c = [5.0f64, 4.0, 3.0, 2.0, 1.0];
        assert_abs_diff_eq!(spearman(&a, &c).unwrap(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn ks_statistic_matches_hand_computation() {
        // a = {1, 2}, b = {1.5, 2.5, 3.5}: largest EDF gap is at 2 <= x < 2.5
        // where F_a = 1 and F_b = 1/3.
        let t = two_sample_ks(&[1.0f64, 2.0], &[1.5f64, 2.5, 3.5]).unwrap();
        assert_abs_diff_eq!(t.statistic, 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn ks_identical_samples_have_zero_statistic() {
        let xs = [0.3f64, 0.7, 1.1, 2.2];
        let t = two_sample_ks(&xs, &xs).unwrap();
        assert_abs_diff_eq!(t.statistic, 0.0);
        assert_abs_diff_eq!(t.p_value, 1.0);
    }
}
