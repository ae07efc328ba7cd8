//! Rank transformations and the classical rank statistics with midrank tie
//! handling: U and the rank-biserial correlation for two samples, W and the
//! matched-pairs rank-biserial correlation for paired data, and the observed
//! Spearman correlation.

use crate::{Error, Result};

/// A vector of raw measurements (or Likert codes). All values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!(
                "samples must contain only finite values, found {v}"
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Midranks of a set of observations: tied values share the average of the
/// rank positions they occupy, so the ranks always sum to n(n+1)/2.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    ranks: Vec<f64>,
}

impl RankVector {
    /// Wrap a precomputed midrank vector (internal; used where ranks are
    /// produced from intermediate values rather than a `Sample`).
    pub(crate) fn from_raw(ranks: Vec<f64>) -> Self {
        Self { ranks }
    }

    pub fn ranks(&self) -> &[f64] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

pub(crate) fn midranks_of(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j (0-based) share midrank ((i+1) + (j+1)) / 2
        let mid = (i + j + 2) as f64 / 2.0;
        for k in i..=j {
            ranks[order[k]] = mid;
        }
        i = j + 1;
    }
    ranks
}

/// Average-rank (midrank) assignment for one sample.
pub fn midranks(sample: &Sample) -> Result<RankVector> {
    if sample.is_empty() {
        return Err(Error::InvalidData("cannot rank an empty sample".into()));
    }
    Ok(RankVector {
        ranks: midranks_of(sample.values()),
    })
}

/// Midranks of the concatenation of two samples (aggregated ranking).
pub fn aggregated_midranks(x: &Sample, y: &Sample) -> Result<RankVector> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidData(
            "aggregated ranking needs both samples nonempty".into(),
        ));
    }
    let mut all = Vec::with_capacity(x.len() + y.len());
    all.extend_from_slice(x.values());
    all.extend_from_slice(y.values());
    Ok(RankVector {
        ranks: midranks_of(&all),
    })
}

/// The U statistic and its complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UStatistic {
    /// U computed from the x-ranks: sum of aggregated x-ranks minus
    /// n_x (n_x + 1) / 2.
    pub u: f64,
    /// The complementary statistic from the y-ranks; u + u_complement is
    /// always n_x * n_y.
    pub u_complement: f64,
}

/// Mann-Whitney-Wilcoxon U on aggregated midranks.
pub fn u_statistic(x: &Sample, y: &Sample) -> Result<UStatistic> {
    let agg = aggregated_midranks(x, y)?;
    let nx = x.len();
    let ny = y.len();
    let sum_x: f64 = agg.ranks()[..nx].iter().sum();
    let u = sum_x - (nx * (nx + 1)) as f64 / 2.0;
    Ok(UStatistic {
        u,
        u_complement: (nx * ny) as f64 - u,
    })
}

fn sign_of(d: f64) -> f64 {
    if d > 0.0 {
        1.0
    } else if d < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Rank-biserial correlation by the pairwise sign count: the difference
/// between the proportions of pairs with x_i > y_j and x_i < y_j. Ties
/// contribute zero. Equals 1 - 2 U'/(n_x n_y) with U' built from the y-ranks.
pub fn rank_biserial(x: &Sample, y: &Sample) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidData(
            "rank_biserial needs both samples nonempty".into(),
        ));
    }
    let mut acc = 0.0;
    for &xi in x.values() {
        for &yj in y.values() {
            acc += sign_of(xi - yj);
        }
    }
    Ok(acc / (x.len() * y.len()) as f64)
}

/// Difference scores split into signs and midranks of absolute values.
/// Zero differences are dropped before ranking; their count is retained.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedRankDecomposition {
    /// Nonzero difference scores, in original order.
    pub differences: Vec<f64>,
    /// Midranks of |d| over the nonzero differences.
    pub abs_ranks: RankVector,
    /// Sign of each retained difference (+1 or -1).
    pub signs: Vec<i8>,
    /// Number of zero differences removed.
    pub dropped_zeros: usize,
}

impl SignedRankDecomposition {
    pub fn len(&self) -> usize {
        self.differences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.differences.is_empty()
    }
}

fn decompose(differences: &[f64]) -> SignedRankDecomposition {
    let kept: Vec<f64> = differences.iter().copied().filter(|d| *d != 0.0).collect();
    let dropped_zeros = differences.len() - kept.len();
    let abs: Vec<f64> = kept.iter().map(|d| d.abs()).collect();
    let signs: Vec<i8> = kept.iter().map(|d| if *d > 0.0 { 1 } else { -1 }).collect();
    SignedRankDecomposition {
        abs_ranks: RankVector {
            ranks: midranks_of(&abs),
        },
        differences: kept,
        signs,
        dropped_zeros,
    }
}

/// Signed rank statistic W for paired samples, with d_i = y_i - x_i so that
/// positive W indicates an increase from x to y.
pub fn signed_rank_w_paired(x: &Sample, y: &Sample) -> Result<(f64, SignedRankDecomposition)> {
    if x.len() != y.len() {
        return Err(Error::InvalidData(format!(
            "paired samples must have equal length, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(Error::InvalidData("paired samples are empty".into()));
    }
    let d: Vec<f64> = x
        .values()
        .iter()
        .zip(y.values())
        .map(|(xi, yi)| yi - xi)
        .collect();
    Ok(signed_rank_from_differences(&d))
}

/// Signed rank statistic W for one sample against a test value,
/// with d_i = x_i - test_value.
pub fn signed_rank_w_one_sample(
    x: &Sample,
    test_value: f64,
) -> Result<(f64, SignedRankDecomposition)> {
    if x.is_empty() {
        return Err(Error::InvalidData("sample is empty".into()));
    }
    if !test_value.is_finite() {
        return Err(Error::InvalidData("test value must be finite".into()));
    }
    let d: Vec<f64> = x.values().iter().map(|xi| xi - test_value).collect();
    Ok(signed_rank_from_differences(&d))
}

/// Signed rank statistic from precomputed difference scores.
pub fn signed_rank_from_differences(d: &[f64]) -> (f64, SignedRankDecomposition) {
    let dec = decompose(d);
    let w = dec
        .abs_ranks
        .ranks()
        .iter()
        .zip(&dec.signs)
        .map(|(r, s)| r * f64::from(*s))
        .sum();
    (w, dec)
}

/// Matched-pairs rank-biserial correlation, (T+ - T-)/(T+ + T-) with T+ and
/// T- the rank sums of positive and negative differences.
pub fn matched_rank_biserial(dec: &SignedRankDecomposition) -> Result<f64> {
    if dec.is_empty() {
        return Err(Error::UndefinedStatistic(
            "all differences are zero; the matched-pairs rank-biserial correlation is undefined"
                .into(),
        ));
    }
    let mut t_pos = 0.0;
    let mut t_neg = 0.0;
    for (r, s) in dec.abs_ranks.ranks().iter().zip(&dec.signs) {
        if *s > 0 {
            t_pos += r;
        } else {
            t_neg += r;
        }
    }
    Ok((t_pos - t_neg) / (t_pos + t_neg))
}

/// Observed Spearman correlation: the Pearson product-moment correlation of
/// the two midrank vectors.
pub fn spearman_rho(x: &Sample, y: &Sample) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidData(format!(
            "spearman_rho needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::InvalidData(
            "spearman_rho needs at least two pairs".into(),
        ));
    }
    let rx = midranks_of(x.values());
    let ry = midranks_of(y.values());
    pearson(&rx, &ry)
}

fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::UndefinedStatistic(
            "correlation undefined for a constant margin".into(),
        ));
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> Sample {
        Sample::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sample_rejects_non_finite() {
        assert!(Sample::new(vec![1.0, f64::NAN]).is_err());
        assert!(Sample::new(vec![f64::INFINITY]).is_err());
        assert!(Sample::new(vec![]).is_ok());
    }

    #[test]
    fn midranks_movie_ratings() {
        // aggregated ranking of (4,3,1) against (2,3,5)
        let agg = aggregated_midranks(&s(&[4.0, 3.0, 1.0]), &s(&[2.0, 3.0, 5.0])).unwrap();
        assert_eq!(agg.ranks(), &[5.0, 3.5, 1.0, 2.0, 3.5, 6.0]);
    }

    #[test]
    fn midranks_all_tied_and_sorted() {
        assert_eq!(
            midranks(&s(&[7.0, 7.0, 7.0])).unwrap().ranks(),
            &[2.0, 2.0, 2.0]
        );
        assert_eq!(
            midranks(&s(&[10.0, 20.0, 30.0])).unwrap().ranks(),
            &[1.0, 2.0, 3.0]
        );
        assert!(midranks(&s(&[])).is_err());
    }

    #[test]
    fn midranks_sum_invariant() {
        let mut st = crate::rngdist::RngStream::new(21, 0);
        for _ in 0..200 {
            let n = 1 + (st.next_u64() % 40) as usize;
            let vals: Vec<f64> = (0..n).map(|_| (st.next_u64() % 7) as f64).collect();
            let r = midranks(&s(&vals)).unwrap();
            let sum: f64 = r.ranks().iter().sum();
            let expected = (n * (n + 1)) as f64 / 2.0;
            assert!((sum - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn u_statistic_movie_ratings() {
        let u = u_statistic(&s(&[4.0, 3.0, 1.0]), &s(&[2.0, 3.0, 5.0])).unwrap();
        assert_eq!(u.u, 3.5);
        assert_eq!(u.u_complement, 5.5);
    }

    #[test]
    fn u_statistic_separation_extremes() {
        let u = u_statistic(&s(&[1.0, 2.0]), &s(&[3.0, 4.0])).unwrap();
        assert_eq!(u.u, 0.0);
        let u = u_statistic(&s(&[3.0, 4.0]), &s(&[1.0, 2.0])).unwrap();
        assert_eq!(u.u, 4.0);
        assert!(u_statistic(&s(&[]), &s(&[1.0])).is_err());
    }

    #[test]
    fn u_complement_identity_under_ties() {
        let mut st = crate::rngdist::RngStream::new(22, 0);
        for _ in 0..200 {
            let nx = 1 + (st.next_u64() % 8) as usize;
            let ny = 1 + (st.next_u64() % 8) as usize;
            let xv: Vec<f64> = (0..nx).map(|_| (st.next_u64() % 5) as f64).collect();
            let yv: Vec<f64> = (0..ny).map(|_| (st.next_u64() % 5) as f64).collect();
            let u = u_statistic(&s(&xv), &s(&yv)).unwrap();
            assert!((u.u + u.u_complement - (nx * ny) as f64).abs() < 1e-9);
            // transform through U': 1 - 2U'/(nx ny) equals the pairwise count
            let rb = rank_biserial(&s(&xv), &s(&yv)).unwrap();
            let via_u = 1.0 - 2.0 * u.u_complement / (nx * ny) as f64;
            assert!((rb - via_u).abs() < 1e-9, "rb {rb} vs {via_u}");
        }
    }

    #[test]
    fn rank_biserial_movie_ratings() {
        let rb = rank_biserial(&s(&[4.0, 3.0, 1.0]), &s(&[2.0, 3.0, 5.0])).unwrap();
        assert!((rb - (3.0 - 5.0) / 9.0).abs() < 1e-12);
    }

    #[test]
    fn rank_biserial_symmetry_cases() {
        assert_eq!(
            rank_biserial(&s(&[1.0, 2.0, 3.0]), &s(&[3.0, 1.0, 2.0])).unwrap(),
            0.0
        );
        assert_eq!(rank_biserial(&s(&[1.0, 2.0]), &s(&[3.0, 4.0])).unwrap(), -1.0);
        // antisymmetry
        let a = s(&[1.0, 5.0, 2.0, 2.0]);
        let b = s(&[4.0, 0.0, 2.0]);
        let ab = rank_biserial(&a, &b).unwrap();
        let ba = rank_biserial(&b, &a).unwrap();
        assert!((ab + ba).abs() < 1e-12);
    }

    #[test]
    fn signed_rank_tutoring_example() {
        // before (5,8,4), after (6,7,7): d = (1,-1,3), W = 1.5 - 1.5 + 3 = 3
        let (w, dec) = signed_rank_w_paired(&s(&[5.0, 8.0, 4.0]), &s(&[6.0, 7.0, 7.0])).unwrap();
        assert_eq!(w, 3.0);
        assert_eq!(dec.abs_ranks.ranks(), &[1.5, 1.5, 3.0]);
        assert_eq!(dec.signs, vec![1, -1, 1]);
        assert_eq!(dec.dropped_zeros, 0);
        // T+ = 4.5, T- = 1.5 -> 0.5
        assert!((matched_rank_biserial(&dec).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn signed_rank_extremes() {
        let (w, dec) = signed_rank_w_one_sample(&s(&[1.0, 2.0, 3.0]), 0.0).unwrap();
        assert_eq!(w, 6.0);
        assert_eq!(matched_rank_biserial(&dec).unwrap(), 1.0);

        let (w, dec) = signed_rank_w_one_sample(&s(&[-2.0, 2.0]), 0.0).unwrap();
        assert_eq!(w, 0.0);
        assert_eq!(matched_rank_biserial(&dec).unwrap(), 0.0);
    }

    #[test]
    fn signed_rank_zero_differences_dropped() {
        let (w, dec) = signed_rank_w_paired(&s(&[1.0, 2.0, 5.0]), &s(&[1.0, 4.0, 3.0])).unwrap();
        assert_eq!(dec.dropped_zeros, 1);
        assert_eq!(dec.len(), 2);
        assert_eq!(w, 0.0); // d = (+2, -2) after dropping the zero
        assert!(signed_rank_w_paired(&s(&[1.0]), &s(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn matched_rank_biserial_all_zero_is_undefined() {
        let (_, dec) = signed_rank_w_paired(&s(&[1.0, 2.0]), &s(&[1.0, 2.0])).unwrap();
        assert!(matches!(
            matched_rank_biserial(&dec),
            Err(Error::UndefinedStatistic(_))
        ));
    }

    #[test]
    fn matched_rank_biserial_sign_flip() {
        let d = [3.0, -1.0, 2.0, -4.0, 0.5];
        let (_, dec) = signed_rank_from_differences(&d);
        let flipped: Vec<f64> = d.iter().map(|v| -v).collect();
        let (_, dec2) = signed_rank_from_differences(&flipped);
        let a = matched_rank_biserial(&dec).unwrap();
        let b = matched_rank_biserial(&dec2).unwrap();
        assert!((a + b).abs() < 1e-12);
    }

    #[test]
    fn spearman_perfect_and_reversed() {
        assert_eq!(
            spearman_rho(&s(&[1.0, 2.0, 3.0]), &s(&[10.0, 20.0, 30.0])).unwrap(),
            1.0
        );
        assert_eq!(
            spearman_rho(&s(&[1.0, 2.0, 3.0]), &s(&[3.0, 2.0, 1.0])).unwrap(),
            -1.0
        );
    }

    #[test]
    fn spearman_hand_computed_value() {
        // ranks (1,2,3,4) vs (2,1,4,3): product-moment correlation 0.6
        let r = spearman_rho(&s(&[1.0, 2.0, 3.0, 4.0]), &s(&[2.0, 1.0, 4.0, 3.0])).unwrap();
        assert!((r - 0.6).abs() < 1e-12);
    }

    #[test]
    fn spearman_rejects_constant_margin() {
        assert!(matches!(
            spearman_rho(&s(&[1.0, 1.0, 1.0]), &s(&[1.0, 2.0, 3.0])),
            Err(Error::UndefinedStatistic(_))
        ));
        assert!(spearman_rho(&s(&[1.0]), &s(&[2.0])).is_err());
    }

    #[test]
    fn monotone_invariance_of_rank_statistics() {
        let mut st = crate::rngdist::RngStream::new(23, 0);
        for _ in 0..100 {
            let nx = 2 + (st.next_u64() % 6) as usize;
            let ny = 2 + (st.next_u64() % 6) as usize;
            let xv: Vec<f64> = (0..nx).map(|_| (st.next_u64() % 9) as f64).collect();
            let yv: Vec<f64> = (0..ny).map(|_| (st.next_u64() % 9) as f64).collect();
            let f = |v: f64| (v * 0.7 + 1.0).exp(); // strictly increasing
            let fx: Vec<f64> = xv.iter().map(|&v| f(v)).collect();
            let fy: Vec<f64> = yv.iter().map(|&v| f(v)).collect();
            let u1 = u_statistic(&s(&xv), &s(&yv)).unwrap();
            let u2 = u_statistic(&s(&fx), &s(&fy)).unwrap();
            assert_eq!(u1.u, u2.u);
            assert_eq!(
                rank_biserial(&s(&xv), &s(&yv)).unwrap(),
                rank_biserial(&s(&fx), &s(&fy)).unwrap()
            );
        }
    }

    #[test]
    fn pairwise_count_equals_u_transform_exhaustively() {
        // brute force over all small samples with values in {0, 1, 2}
        for nx in 1..=3usize {
            for ny in 1..=3usize {
                let mut xi = vec![0u8; nx];
                loop {
                    let mut yi = vec![0u8; ny];
                    loop {
                        let xv: Vec<f64> = xi.iter().map(|&v| v as f64).collect();
                        let yv: Vec<f64> = yi.iter().map(|&v| v as f64).collect();
                        let rb = rank_biserial(&s(&xv), &s(&yv)).unwrap();
                        let u = u_statistic(&s(&xv), &s(&yv)).unwrap();
                        let via = 1.0 - 2.0 * u.u_complement / (nx * ny) as f64;
                        assert!((rb - via).abs() < 1e-12);
                        // advance y multiset
                        let mut k = 0;
                        loop {
                            if k == ny {
                                break;
                            }
                            yi[k] += 1;
                            if yi[k] < 3 {
                                break;
                            }
                            yi[k] = 0;
                            k += 1;
                        }
                        if yi.iter().all(|&v| v == 0) {
                            break;
                        }
                    }
                    let mut k = 0;
                    loop {
                        if k == nx {
                            break;
                        }
                        xi[k] += 1;
                        if xi[k] < 3 {
                            break;
                        }
                        xi[k] = 0;
                        k += 1;
                    }
                    if xi.iter().all(|&v| v == 0) {
                        break;
                    }
                }
            }
        }
    }
}
