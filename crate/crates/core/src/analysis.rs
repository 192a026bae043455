//! Pattern studies over G_N: floor bands, link-density scaling, stretching
//! similarity between sizes, consecutive divisor-count census and the sign
//! balance of `Δc_n` and `Δs(n)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::analytic::{self, link_density, prime_clustering};
use crate::error::{DivnetError, Result};
use crate::numtheory::{floor_bands, SieveTables};
use crate::rational::ExactRational;

/// One floor band `(lo, hi]` of G_N where `⌊N/n⌋ = a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandSummary {
    pub a: u64,
    pub lo: u64,
    pub hi: u64,
    /// Degree of every prime in the band (equals `a`).
    pub prime_degree: u64,
    /// Clustering of every prime in the band.
    pub prime_clustering: ExactRational,
    pub prime_count: u64,
}

fn require_tables(size: u64, tables: &SieveTables) -> Result<()> {
    if size > tables.limit() {
        return Err(DivnetError::NodeOutOfRange { n: size, limit: tables.limit() });
    }
    Ok(())
}

pub fn band_decomposition(size: u64, tables: &SieveTables) -> Result<Vec<BandSummary>> {
    if size < 2 {
        return Err(DivnetError::SizeTooSmall { min: 2, got: size });
    }
    require_tables(size, tables)?;
    floor_bands(size)
        .map(|band| {
            Ok(BandSummary {
                a: band.a,
                lo: band.lo,
                hi: band.hi,
                prime_degree: band.a,
                prime_clustering: prime_clustering(band.a)?,
                prime_count: band.nodes().filter(|&n| tables.is_prime(n)).count() as u64,
            })
        })
        .collect()
}

/// Least-squares line through `(ln N, ln LD(N))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub sizes: Vec<u64>,
    pub densities: Vec<ExactRational>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
}

/// Geometric samples from `min` to `max` inclusive, rounded and deduplicated.
pub fn geometric_sizes(min: u64, max: u64, samples: usize) -> Result<Vec<u64>> {
    if min < 2 || max < min || samples < 2 {
        return Err(DivnetError::InvalidFit(format!(
            "need 2 <= min <= max and at least 2 samples, got {min}..{max} x {samples}"
        )));
    }
    let ratio = max as f64 / min as f64;
    let mut sizes: Vec<u64> = (0..samples)
        .map(|i| {
            let t = i as f64 / (samples - 1) as f64;
            (min as f64 * ratio.powf(t)).round() as u64
        })
        .collect();
    sizes.dedup();
    Ok(sizes)
}

/// Fits `ln LD = slope · ln N + intercept`, densities from the `O(√N)` path.
pub fn scaling_fit(sizes: &[u64]) -> Result<ScalingFit> {
    if sizes.len() < 3 {
        return Err(DivnetError::InvalidFit(format!(
            "need at least 3 sizes, got {}",
            sizes.len()
        )));
    }
    let distinct: BTreeSet<_> = sizes.iter().collect();
    if distinct.len() != sizes.len() {
        return Err(DivnetError::InvalidFit("sizes must be distinct".into()));
    }
    let densities = sizes
        .iter()
        .map(|&n| link_density(n))
        .collect::<Result<Vec<_>>>()?;

    let xs: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = densities.iter().map(|d| d.to_f64().ln()).collect();
    let count = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / count;
    let mean_y = ys.iter().sum::<f64>() / count;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();

    Ok(ScalingFit {
        sizes: sizes.to_vec(),
        densities,
        slope,
        intercept,
        residual: (sse / count).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StretchMeasure {
    Degree,
    Clustering,
}

/// Band-wise comparison of one measure between G_N1 and G_N2.
#[derive(Debug, Clone, PartialEq)]
pub struct StretchReport {
    /// Mean of the two directional node coverages, in `[0, 1]`.
    pub score: f64,
    /// Fraction of nodes of G_N1 whose value also occurs in the same band of G_N2.
    pub coverage_forward: f64,
    /// Same, from G_N2 into G_N1.
    pub coverage_backward: f64,
    /// Band indices present in both networks.
    pub bands_compared: usize,
    /// Of those, bands whose sets of attained values are identical.
    pub bands_identical: usize,
}

type BandValues = BTreeMap<u64, BTreeSet<ExactRational>>;

fn measure_values(
    size: u64,
    measure: StretchMeasure,
    tables: &SieveTables,
) -> Result<Vec<ExactRational>> {
    Ok(match measure {
        StretchMeasure::Degree => analytic::degree_profile(size, tables)?
            .into_iter()
            .map(|(_, k)| ExactRational::from_integer(k as i128))
            .collect(),
        StretchMeasure::Clustering => analytic::clustering_profile(size, tables)?
            .into_iter()
            .map(|p| p.coefficient)
            .collect(),
    })
}

fn band_values(size: u64, values: &[ExactRational]) -> BandValues {
    floor_bands(size)
        .map(|band| {
            let set = band.nodes().map(|n| values[n as usize - 1]).collect();
            (band.a, set)
        })
        .collect()
}

fn coverage(size: u64, values: &[ExactRational], other: &BandValues) -> f64 {
    let hits = (1..=size)
        .filter(|&n| {
            other
                .get(&(size / n))
                .is_some_and(|set| set.contains(&values[n as usize - 1]))
        })
        .count();
    hits as f64 / size as f64
}

/// How well the band/value structure of G_N1 survives stretching to G_N2.
///
/// Node `n` of one network is matched when its value is attained somewhere in
/// the band with the same index `⌊N/n⌋` of the other network. The score
/// averages both directions, so it is 1.0 exactly when every band attains the
/// same value set in both networks.
pub fn stretch_similarity(
    small: u64,
    large: u64,
    measure: StretchMeasure,
    tables: &SieveTables,
) -> Result<StretchReport> {
    if small < 2 {
        return Err(DivnetError::SizeTooSmall { min: 2, got: small });
    }
    if small > large {
        return Err(DivnetError::InvalidInput(format!(
            "stretch comparison needs N1 <= N2, got {small} > {large}"
        )));
    }
    require_tables(large, tables)?;
    let values_small = measure_values(small, measure, tables)?;
    let values_large = measure_values(large, measure, tables)?;
    let bands_small = band_values(small, &values_small);
    let bands_large = band_values(large, &values_large);

    let mut bands_compared = 0;
    let mut bands_identical = 0;
    for (a, set) in &bands_small {
        if let Some(other) = bands_large.get(a) {
            bands_compared += 1;
            if set == other {
                bands_identical += 1;
            }
        }
    }

    let coverage_forward = coverage(small, &values_small, &bands_large);
    let coverage_backward = coverage(large, &values_large, &bands_small);
    Ok(StretchReport {
        score: (coverage_forward + coverage_backward) / 2.0,
        coverage_forward,
        coverage_backward,
        bands_compared,
        bands_identical,
    })
}

/// Counts of `n < N` with `s(n) = s(n+1) + k`, keyed by `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable {
    pub size: u64,
    pub counts: BTreeMap<i64, u64>,
}

impl CensusTable {
    pub fn count(&self, k: i64) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

pub fn heathbrown_census(size: u64, tables: &SieveTables) -> Result<CensusTable> {
    if size < 2 {
        return Err(DivnetError::SizeTooSmall { min: 2, got: size });
    }
    require_tables(size, tables)?;
    let mut counts = BTreeMap::new();
    for n in 1..size {
        *counts.entry(analytic::delta_divisor(n, tables)?).or_insert(0) += 1;
    }
    Ok(CensusTable { size, counts })
}

/// Every `n < N` with `s(n) − s(n+1) = k`.
pub fn census_pairs(size: u64, k: i64, tables: &SieveTables) -> Result<Vec<u64>> {
    if size < 2 {
        return Err(DivnetError::SizeTooSmall { min: 2, got: size });
    }
    require_tables(size, tables)?;
    let mut out = Vec::new();
    for n in 1..size {
        if analytic::delta_divisor(n, tables)? == k {
            out.push(n);
        }
    }
    Ok(out)
}

/// Sign counts of a consecutive-difference sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SignStats {
    pub count_zero: u64,
    pub count_pos: u64,
    pub count_neg: u64,
    pub mean: ExactRational,
}

impl SignStats {
    pub fn total(&self) -> u64 {
        self.count_zero + self.count_pos + self.count_neg
    }

    /// `|pos − neg| / total`.
    pub fn sign_imbalance(&self) -> f64 {
        self.count_pos.abs_diff(self.count_neg) as f64 / self.total() as f64
    }

    fn from_signs(signs: impl Iterator<Item = i32>, sum: ExactRational, len: u64) -> Self {
        let mut by_sign: HashMap<i32, u64> = HashMap::new();
        for s in signs {
            *by_sign.entry(s).or_insert(0) += 1;
        }
        SignStats {
            count_zero: by_sign.get(&0).copied().unwrap_or(0),
            count_pos: by_sign.get(&1).copied().unwrap_or(0),
            count_neg: by_sign.get(&-1).copied().unwrap_or(0),
            mean: sum
                .checked_mul(&ExactRational::from_counts(1, len).expect("len > 0"))
                .expect("mean overflow"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSymmetry {
    /// Over `Δc_n = c_n − c_{n+1}`, `n = 1..N−1`.
    pub clustering: SignStats,
    /// Over `Δs(n) = s(n) − s(n+1)`, `n = 1..N−1`.
    pub divisor: SignStats,
}

pub fn delta_symmetry_stats(size: u64, tables: &SieveTables) -> Result<DeltaSymmetry> {
    if size < 3 {
        return Err(DivnetError::SizeTooSmall { min: 3, got: size });
    }
    require_tables(size, tables)?;
    let profile = analytic::clustering_profile(size, tables)?;
    let len = size - 1;

    // Both sums telescope.
    let c_sum = profile[0].coefficient - profile[size as usize - 1].coefficient;
    let clustering = SignStats::from_signs(
        profile.windows(2).map(|w| (w[0].coefficient - w[1].coefficient).signum()),
        c_sum,
        len,
    );

    let s_sum = ExactRational::from_integer(
        tables.divisor_count(1) as i128 - tables.divisor_count(size) as i128,
    );
    let divisor = SignStats::from_signs(
        (1..size).map(|n| {
            (tables.divisor_count(n) as i64 - tables.divisor_count(n + 1) as i64).signum() as i32
        }),
        s_sum,
        len,
    );
    Ok(DeltaSymmetry { clustering, divisor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::build_sieve;

    fn r(num: i128, den: i128) -> ExactRational {
        ExactRational::new(num, den).unwrap()
    }

    #[test]
    fn band_examples() {
        let t = build_sieve(1000).unwrap();
        let bands = band_decomposition(1000, &t).unwrap();
        let value_over = |lo: u64, hi: u64| -> BTreeSet<ExactRational> {
            bands
                .iter()
                .filter(|b| b.lo >= lo && b.hi <= hi && b.prime_count > 0)
                .map(|b| b.prime_clustering)
                .collect()
        };
        // (200, 333] is the union of bands a = 4 and a = 3.
        assert_eq!(value_over(200, 333), BTreeSet::from([r(2, 3)]));
        assert_eq!(value_over(166, 200), BTreeSet::from([r(1, 2)]));

        let bands10 = band_decomposition(10, &t).unwrap();
        let top = bands10.last().unwrap();
        assert_eq!((top.lo, top.hi, top.prime_degree), (5, 10, 1));
        assert!(band_decomposition(1, &t).is_err());
    }

    #[test]
    fn bands_cover_every_node_once() {
        let t = build_sieve(5000).unwrap();
        let bands = band_decomposition(5000, &t).unwrap();
        assert!(bands.len() as u64 <= 2 * 5000u64.isqrt());
        let covered: u64 = bands.iter().map(|b| b.hi - b.lo).sum();
        assert_eq!(covered, 5000);
        let primes: u64 = bands.iter().map(|b| b.prime_count).sum();
        assert_eq!(primes, 669);
    }

    #[test]
    fn geometric_powers_of_two() {
        let sizes = geometric_sizes(256, 65_536, 9).unwrap();
        assert_eq!(sizes, (8..=16).map(|k| 1u64 << k).collect::<Vec<_>>());
        assert!(geometric_sizes(1, 10, 3).is_err());
    }

    #[test]
    fn scaling_rejects_degenerate_input() {
        assert!(scaling_fit(&[100, 200]).is_err());
        assert!(scaling_fit(&[100, 100, 200]).is_err());
        assert!(scaling_fit(&[1, 100, 200]).is_err());
    }

    #[test]
    fn scaling_fit_recovers_a_clean_line() {
        let fit = scaling_fit(&[10, 100, 1000, 10_000]).unwrap();
        assert!(fit.residual >= 0.0);
        assert!(fit.slope < 0.0);
        for (&n, d) in fit.sizes.iter().zip(&fit.densities) {
            assert_eq!(*d, link_density(n).unwrap());
        }
    }

    #[test]
    fn stretch_identity_is_one() {
        let t = build_sieve(2000).unwrap();
        for measure in [StretchMeasure::Degree, StretchMeasure::Clustering] {
            let report = stretch_similarity(2000, 2000, measure, &t).unwrap();
            assert_eq!(report.score, 1.0);
            assert_eq!(report.bands_compared, report.bands_identical);
        }
        assert!(stretch_similarity(2000, 1000, StretchMeasure::Degree, &t).is_err());
    }

    #[test]
    fn census_examples() {
        let t = build_sieve(100).unwrap();
        let zero_pairs = census_pairs(100, 0, &t).unwrap();
        for n in [93, 94, 85, 86] {
            assert!(zero_pairs.contains(&n));
        }
        assert!(census_pairs(100, 2, &t).unwrap().contains(&82));
        assert!(census_pairs(5, -1, &t).unwrap().contains(&3));
        let table = heathbrown_census(100, &t).unwrap();
        assert_eq!(table.total(), 99);
        assert_eq!(table.count(0), zero_pairs.len() as u64);
    }

    #[test]
    fn symmetry_counts_at_hundred() {
        let t = build_sieve(100).unwrap();
        let stats = delta_symmetry_stats(100, &t).unwrap();
        assert_eq!(stats.clustering.total(), 99);
        assert_eq!(stats.divisor.total(), 99);
        let delta = crate::analytic::delta_clustering_profile(100, &t).unwrap();
        let count = |sign: i32| delta.iter().filter(|(_, d)| d.signum() == sign).count() as u64;
        assert_eq!(stats.clustering.count_zero, count(0));
        assert_eq!(stats.clustering.count_pos, count(1));
        assert_eq!(stats.clustering.count_neg, count(-1));
        assert_eq!(delta[92].1.signum(), 0);
        assert_eq!(delta[81].1.signum(), 1);
        assert_eq!(delta[72].1.signum(), -1);
        let sum = delta.iter().fold(ExactRational::ZERO, |acc, (_, d)| acc + *d);
        assert_eq!(stats.clustering.mean, sum.checked_mul(&r(1, 99)).unwrap());
    }
}
