//! Closed-form network measures of G_N built from floor and divisor functions.
//!
//! Nothing here materializes the graph. A node `n` of G_N has `M = ⌊N/n⌋ − 1`
//! proper multiples and `s(n) − 1` proper divisors as neighbours; every
//! measure below is an exact count over those two sets.

use rayon::prelude::*;

use crate::error::{DivnetError, Result};
use crate::numtheory::{divisor_summatory, SieveTables};
use crate::rational::ExactRational;

/// Edge counts among the neighbours of one node, split by where they live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusteringParts {
    pub n: u64,
    /// Links among the proper divisors of `n`.
    pub divisor_links: u64,
    /// Links among the proper multiples of `n`.
    pub multiple_links: u64,
    /// Links between a proper divisor and a proper multiple.
    pub cross_links: u64,
    /// `divisor_links + multiple_links + cross_links`.
    pub neighbor_links: u64,
    pub degree: u64,
    pub coefficient: ExactRational,
}

fn check_node(n: u64, size: u64) -> Result<()> {
    if n == 0 || n > size {
        Err(DivnetError::NodeOutOfRange { n, limit: size })
    } else {
        Ok(())
    }
}

fn check_tables(n: u64, tables: &SieveTables) -> Result<()> {
    if n > tables.limit() {
        Err(DivnetError::NodeOutOfRange { n, limit: tables.limit() })
    } else {
        Ok(())
    }
}

/// `C(k, 2)`.
pub(crate) fn pairs(k: u64) -> u64 {
    if k < 2 {
        0
    } else {
        (k as u128 * (k as u128 - 1) / 2)
            .try_into()
            .expect("pair count exceeds u64")
    }
}

/// `e / C(k, 2)`, or zero when `k < 2`.
pub(crate) fn ratio_over_pairs(links: u64, degree: u64) -> ExactRational {
    match pairs(degree) {
        0 => ExactRational::ZERO,
        p => ExactRational::from_counts(links, p).expect("nonzero pair count"),
    }
}

/// Total edges of G_N: `Σ (⌊N/i⌋ − 1) = D(N) − N`.
pub fn edge_count(size: u64) -> u64 {
    divisor_summatory(size) - size
}

/// `k_n = ⌊N/n⌋ + s(n) − 2`. Reduces to `⌊N/p⌋` for primes and `N − 1` at 1.
pub fn degree(n: u64, size: u64, tables: &SieveTables) -> Result<u64> {
    check_node(n, size)?;
    check_tables(n, tables)?;
    Ok(size / n + tables.divisor_count(n) - 2)
}

pub fn degree_profile(size: u64, tables: &SieveTables) -> Result<Vec<(u64, u64)>> {
    check_tables(size, tables)?;
    (1..=size)
        .into_par_iter()
        .map(|n| degree(n, size, tables).map(|k| (n, k)))
        .collect()
}

/// Link density as the single fraction `(D(N) − N) / C(N, 2)`, `O(√N)`.
pub fn link_density(size: u64) -> Result<ExactRational> {
    if size < 2 {
        return Err(DivnetError::SizeTooSmall { min: 2, got: size });
    }
    ExactRational::from_counts(edge_count(size), pairs(size))
}

/// Clustering of a node described only by its band index `a = ⌊N/n⌋`, its
/// divisor count and `d3`. `summatory_a` is `D(a)`, shared across a band.
fn parts_from_signature(
    n: u64,
    a: u64,
    s: u64,
    d3: u64,
    summatory_a: u64,
) -> ClusteringParts {
    let divisor_links = d3 + 1 - 2 * s;
    // Edges of G_a with node 1 removed.
    let multiple_links = summatory_a - a - (a - 1);
    let cross_links = (a - 1) * (s - 1);
    let neighbor_links = divisor_links + multiple_links + cross_links;
    let degree = a + s - 2;
    ClusteringParts {
        n,
        divisor_links,
        multiple_links,
        cross_links,
        neighbor_links,
        degree,
        coefficient: ratio_over_pairs(neighbor_links, degree),
    }
}

/// Local clustering coefficient with its edge decomposition.
///
/// `c_n = 0` whenever `k_n < 2`.
pub fn clustering(n: u64, size: u64, tables: &SieveTables) -> Result<ClusteringParts> {
    check_node(n, size)?;
    check_tables(n, tables)?;
    let a = size / n;
    Ok(parts_from_signature(
        n,
        a,
        tables.divisor_count(n),
        tables.d3(n),
        divisor_summatory(a),
    ))
}

/// Clustering for every node, evaluated band by band so `D(a)` is computed
/// once per band.
pub fn clustering_profile(size: u64, tables: &SieveTables) -> Result<Vec<ClusteringParts>> {
    if size == 0 {
        return Err(DivnetError::SizeTooSmall { min: 1, got: 0 });
    }
    check_tables(size, tables)?;
    let bands: Vec<_> = crate::numtheory::floor_bands(size).collect();
    let per_band: Vec<Vec<ClusteringParts>> = bands
        .par_iter()
        .map(|band| {
            let summatory_a = divisor_summatory(band.a);
            band.nodes()
                .map(|n| {
                    parts_from_signature(
                        n,
                        band.a,
                        tables.divisor_count(n),
                        tables.d3(n),
                        summatory_a,
                    )
                })
                .collect()
        })
        .collect();
    Ok(per_band.into_iter().flatten().collect())
}

/// Clustering of any prime `p` with `⌊N/p⌋ = a`:
/// `Σ_{j=2..a} ⌊a/j⌋ / C(a, 2)`, zero for `a = 1`.
pub fn prime_clustering(a: u64) -> Result<ExactRational> {
    if a == 0 {
        return Err(DivnetError::InvalidInput("band index must be positive".into()));
    }
    Ok(ratio_over_pairs(divisor_summatory(a) - a, a))
}

/// `c_n − c_{n+1}` from two full clustering evaluations.
pub fn delta_clustering(n: u64, size: u64, tables: &SieveTables) -> Result<ExactRational> {
    check_node(n, size)?;
    check_node(n + 1, size)?;
    let here = clustering(n, size, tables)?.coefficient;
    let next = clustering(n + 1, size, tables)?.coefficient;
    here.checked_sub(&next)
        .ok_or(DivnetError::Overflow("delta clustering"))
}

fn in_band(n: u64, size: u64) -> Result<u64> {
    check_node(n, size)?;
    check_node(n + 1, size)?;
    let a = size / n;
    if size / (n + 1) != a {
        return Err(DivnetError::CrossBand { n, next: n + 1, size });
    }
    Ok(a)
}

/// `Δc_n` for a pair sharing the band `⌊N/n⌋ = ⌊N/(n+1)⌋ = a`.
///
/// Both coefficients are evaluated from `(a, s, d3)` with one shared `D(a)`.
/// Rejects pairs that straddle a band boundary.
pub fn delta_clustering_in_band(
    n: u64,
    size: u64,
    tables: &SieveTables,
) -> Result<ExactRational> {
    let a = in_band(n, size)?;
    check_tables(n + 1, tables)?;
    let summatory_a = divisor_summatory(a);
    let signature = |m: u64| {
        parts_from_signature(m, a, tables.divisor_count(m), tables.d3(m), summatory_a)
            .coefficient
    };
    signature(n)
        .checked_sub(&signature(n + 1))
        .ok_or(DivnetError::Overflow("delta clustering"))
}

/// True iff `s(n) = s(n+1)` and `d3(n) = d3(n+1)` for an in-band pair, which
/// forces `Δc_n = 0`.
pub fn delta_zero_predicate(n: u64, size: u64, tables: &SieveTables) -> Result<bool> {
    in_band(n, size)?;
    check_tables(n + 1, tables)?;
    Ok(tables.divisor_count(n) == tables.divisor_count(n + 1) && tables.d3(n) == tables.d3(n + 1))
}

/// `Δs(n) = s(n) − s(n+1)`.
pub fn delta_divisor(n: u64, tables: &SieveTables) -> Result<i64> {
    if n == 0 {
        return Err(DivnetError::NodeOutOfRange { n, limit: tables.limit() });
    }
    check_tables(n + 1, tables)?;
    Ok(tables.divisor_count(n) as i64 - tables.divisor_count(n + 1) as i64)
}

/// `Δc_n` for `n = 1..N−1`, exact.
pub fn delta_clustering_profile(
    size: u64,
    tables: &SieveTables,
) -> Result<Vec<(u64, ExactRational)>> {
    let profile = clustering_profile(size, tables)?;
    Ok(profile
        .windows(2)
        .map(|w| (w[0].n, w[0].coefficient - w[1].coefficient))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::build_sieve;

    fn r(num: i128, den: i128) -> ExactRational {
        ExactRational::new(num, den).unwrap()
    }

    #[test]
    fn degree_examples() {
        let t = build_sieve(100).unwrap();
        assert_eq!(degree(37, 100, &t).unwrap(), 2);
        assert_eq!(degree(1, 100, &t).unwrap(), 99);
        assert_eq!(degree(12, 100, &t).unwrap(), 12);
        assert_eq!(degree(71, 100, &t).unwrap(), 1);
        assert!(matches!(degree(101, 100, &t), Err(DivnetError::NodeOutOfRange { .. })));
        assert!(matches!(degree(0, 100, &t), Err(DivnetError::NodeOutOfRange { .. })));
    }

    #[test]
    fn degree_profile_of_two() {
        let t = build_sieve(2).unwrap();
        assert_eq!(degree_profile(2, &t).unwrap(), vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn link_density_examples() {
        assert_eq!(link_density(2).unwrap(), ExactRational::ONE);
        assert_eq!(link_density(3).unwrap(), r(2, 3));
        assert!(matches!(link_density(1), Err(DivnetError::SizeTooSmall { .. })));
        assert!(matches!(link_density(0), Err(DivnetError::SizeTooSmall { .. })));
    }

    #[test]
    fn link_density_two_term_form_agrees() {
        for size in 2..=3000u64 {
            let two_term = ExactRational::from_counts(divisor_summatory(size), pairs(size)).unwrap()
                - ExactRational::from_counts(2, size - 1).unwrap();
            assert_eq!(link_density(size).unwrap(), two_term, "N = {size}");
        }
    }

    #[test]
    fn link_density_is_not_monotone() {
        // Highly divisible sizes add more than enough edges to raise it.
        assert_eq!(link_density(5).unwrap(), r(1, 2));
        assert_eq!(link_density(6).unwrap(), r(8, 15));
        assert_eq!(link_density(4).unwrap(), link_density(3).unwrap());
    }

    #[test]
    fn link_density_drops_at_every_prime_size() {
        let t = build_sieve(10_000).unwrap();
        for size in (4..=10_000).filter(|&n| t.is_prime(n)) {
            assert!(link_density(size).unwrap() < link_density(size - 1).unwrap(), "N = {size}");
        }
    }

    #[test]
    fn clustering_examples() {
        let t = build_sieve(100).unwrap();
        assert_eq!(clustering(93, 100, &t).unwrap().coefficient, r(2, 3));
        assert_eq!(clustering(1, 4, &t).unwrap().coefficient, r(1, 3));
        // ⌊N/3⌋ < p ≤ ⌊N/2⌋
        assert_eq!(clustering(37, 100, &t).unwrap().coefficient, ExactRational::ONE);
        assert_eq!(clustering(71, 100, &t).unwrap().coefficient, ExactRational::ZERO);
        assert!(clustering(0, 100, &t).is_err());
    }

    #[test]
    fn clustering_at_fifty_for_32_and_45() {
        let t = build_sieve(500).unwrap();
        assert_eq!(clustering(32, 50, &t).unwrap().coefficient, ExactRational::ONE);
        assert_eq!(clustering(45, 50, &t).unwrap().coefficient, r(7, 10));
        // 20/21 and 47/66 are attained at larger sizes.
        for size in 96..=127 {
            assert_eq!(clustering(32, size, &t).unwrap().coefficient, r(20, 21));
        }
        for size in 360..=404 {
            assert_eq!(clustering(45, size, &t).unwrap().coefficient, r(47, 66));
        }
    }

    #[test]
    fn parts_sum_and_bounds() {
        let size = 2000;
        let t = build_sieve(size).unwrap();
        for p in clustering_profile(size, &t).unwrap() {
            assert_eq!(p.neighbor_links, p.divisor_links + p.multiple_links + p.cross_links);
            assert!(p.coefficient >= ExactRational::ZERO);
            assert!(p.coefficient <= ExactRational::ONE);
            assert_eq!(p, clustering(p.n, size, &t).unwrap());
        }
    }

    #[test]
    fn node_one_links_two_ways() {
        let t = build_sieve(10_000).unwrap();
        for size in 2..=10_000u64 {
            let e1 = clustering(1, size, &t).unwrap().neighbor_links;
            assert_eq!(e1, divisor_summatory(size) + 1 - 2 * size);
            assert_eq!(e1, edge_count(size) - (size - 1));
        }
    }

    #[test]
    fn prime_clustering_examples() {
        assert_eq!(prime_clustering(1).unwrap(), ExactRational::ZERO);
        assert_eq!(prime_clustering(2).unwrap(), ExactRational::ONE);
        assert_eq!(prime_clustering(3).unwrap(), r(2, 3));
        assert_eq!(prime_clustering(5).unwrap(), r(1, 2));
        assert!(prime_clustering(0).is_err());
    }

    #[test]
    fn primes_reduce_to_band_formula() {
        let size = 10_000;
        let t = build_sieve(size).unwrap();
        for p in (2..=size).filter(|&p| t.is_prime(p)) {
            assert_eq!(
                clustering(p, size, &t).unwrap().coefficient,
                prime_clustering(size / p).unwrap(),
                "p = {p}"
            );
        }
    }

    #[test]
    fn delta_examples() {
        let t = build_sieve(100).unwrap();
        assert_eq!(delta_clustering(93, 100, &t).unwrap(), ExactRational::ZERO);
        assert_eq!(delta_clustering(82, 100, &t).unwrap(), r(2, 3));
        assert_eq!(delta_clustering(73, 100, &t).unwrap(), r(-2, 3));
        assert_eq!(delta_clustering(3, 5, &t).unwrap(), ExactRational::from_integer(-1));
        assert!(delta_clustering(100, 100, &t).is_err());
    }

    #[test]
    fn in_band_path_matches_general_path() {
        let size = 10_000;
        let t = build_sieve(size).unwrap();
        for n in 1..size {
            match delta_clustering_in_band(n, size, &t) {
                Ok(v) => assert_eq!(v, delta_clustering(n, size, &t).unwrap(), "n = {n}"),
                Err(DivnetError::CrossBand { .. }) => assert_ne!(size / n, size / (n + 1)),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn zero_predicate_examples() {
        let t = build_sieve(100).unwrap();
        assert!(delta_zero_predicate(93, 100, &t).unwrap());
        assert!(!delta_zero_predicate(82, 100, &t).unwrap());
        // 50 | 100 puts 50 and 51 in different bands.
        assert!(matches!(
            delta_zero_predicate(50, 100, &t),
            Err(DivnetError::CrossBand { .. })
        ));
    }

    #[test]
    fn zero_predicate_for_prime_pair() {
        let t = build_sieve(10).unwrap();
        // 2 and 3 share the band ⌊3/n⌋ = 1 of G_3.
        assert!(delta_zero_predicate(2, 3, &t).unwrap());
    }

    #[test]
    fn delta_divisor_examples() {
        let t = build_sieve(100).unwrap();
        assert_eq!(delta_divisor(93, &t).unwrap(), 0);
        assert_eq!(delta_divisor(82, &t).unwrap(), 2);
        assert_eq!(delta_divisor(3, &t).unwrap(), -1);
        assert!(delta_divisor(100, &t).is_err());
    }

    #[test]
    fn delta_telescopes_over_a_band() {
        let size = 5000;
        let t = build_sieve(size).unwrap();
        let c = clustering_profile(size, &t).unwrap();
        let deltas = delta_clustering_profile(size, &t).unwrap();
        for band in crate::numtheory::floor_bands(size) {
            let (first, last) = (band.lo + 1, band.hi);
            let sum = (first..last).fold(ExactRational::ZERO, |acc, n| acc + deltas[n as usize - 1].1);
            assert_eq!(
                sum,
                c[first as usize - 1].coefficient - c[last as usize - 1].coefficient
            );
        }
    }
}
