//! Sieves and arithmetic-function kernels.
//!
//! Everything the closed-form measures need is precomputed once per limit in
//! [`SieveTables`]: smallest prime factor, divisor count `s(n)` and the
//! divisor-count convolution `d3(n) = Σ_{m|n} s(m)`.

use crate::error::{DivnetError, Result};

/// Per-n arithmetic tables for `1..=limit`. Index 0 is unused.
#[derive(Debug, Clone)]
pub struct SieveTables {
    limit: u64,
    spf: Vec<u32>,
    s: Vec<u32>,
    d3: Vec<u32>,
}

/// Builds the tables for `1..=limit`.
///
/// `spf` comes from a linear sieve, `s` is assembled multiplicatively from
/// `spf`, and `d3` is a Dirichlet sieve adding `s(d)` to every multiple of `d`.
pub fn build_sieve(limit: u64) -> Result<SieveTables> {
    if limit == 0 {
        return Err(DivnetError::SizeTooSmall { min: 1, got: 0 });
    }
    if limit > u32::MAX as u64 {
        return Err(DivnetError::Overflow("sieve limit exceeds u32 storage"));
    }
    let n_max = limit as usize;

    let mut spf = vec![0u32; n_max + 1];
    let mut primes: Vec<u32> = Vec::new();
    spf[1] = 1;
    for i in 2..=n_max {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let least = spf[i];
        for &p in &primes {
            let m = i * p as usize;
            if p > least || m > n_max {
                break;
            }
            spf[m] = p;
        }
    }

    // s(n) = s(rest) * (e + 1) where n = p^e * rest and p = spf(n).
    let mut s = vec![0u32; n_max + 1];
    let mut exponent = vec![0u32; n_max + 1];
    let mut rest = vec![0u32; n_max + 1];
    s[1] = 1;
    for n in 2..=n_max {
        let p = spf[n] as usize;
        let m = n / p;
        if m % p == 0 {
            exponent[n] = exponent[m] + 1;
            rest[n] = rest[m];
        } else {
            exponent[n] = 1;
            rest[n] = m as u32;
        }
        s[n] = s[rest[n] as usize] * (exponent[n] + 1);
    }
    drop(exponent);
    drop(rest);

    let mut d3 = vec![0u32; n_max + 1];
    for d in 1..=n_max {
        let sd = s[d];
        for m in (d..=n_max).step_by(d) {
            d3[m] = d3[m]
                .checked_add(sd)
                .expect("d3 overflowed u32 storage");
        }
    }

    Ok(SieveTables { limit, spf, s, d3 })
}

impl SieveTables {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn check(&self, n: u64) -> Result<usize> {
        if n == 0 || n > self.limit {
            Err(DivnetError::NodeOutOfRange { n, limit: self.limit })
        } else {
            Ok(n as usize)
        }
    }

    /// Smallest prime factor; `spf(1) == 1`.
    ///
    /// Panics when `n` is outside `1..=limit`.
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[self.check(n).expect("spf lookup")] as u64
    }

    /// Number of divisors of `n`, including `n`.
    pub fn divisor_count(&self, n: u64) -> u64 {
        self.s[self.check(n).expect("divisor_count lookup")] as u64
    }

    /// `Σ_{m|n} s(m)`.
    pub fn d3(&self, n: u64) -> u64 {
        self.d3[self.check(n).expect("d3 lookup")] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf(n) == n
    }

    pub fn factorize(&self, n: u64) -> Result<FactoredInteger> {
        factorize(n, self)
    }
}

/// `n` together with its prime-power factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// Validates that `factors` has strictly increasing primes, positive
    /// exponents and multiplies out to `n`.
    pub fn new(n: u64, factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut product: u64 = 1;
        let mut last = 1;
        for &(p, e) in &factors {
            if p <= last || e == 0 {
                return Err(DivnetError::InvalidInput(format!(
                    "malformed factorization of {n}"
                )));
            }
            last = p;
            let pe = p.checked_pow(e).ok_or(DivnetError::Overflow("factor power"))?;
            product = product
                .checked_mul(pe)
                .ok_or(DivnetError::Overflow("factor product"))?;
        }
        if product != n {
            return Err(DivnetError::InvalidInput(format!(
                "factors multiply to {product}, not {n}"
            )));
        }
        Ok(FactoredInteger { n, factors })
    }

    pub fn value(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// `Π (j_i + 1)`.
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// `Π (j_i + 1)(j_i + 2) / 2^k`, the closed form of `Σ_{m|n} s(m)`.
    pub fn divisor_count_sum(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(_, e)| {
                let e = e as u64;
                (e + 1) * (e + 2) / 2
            })
            .product()
    }

    pub fn divisors(&self) -> Vec<u64> {
        list_divisors(self)
    }
}

pub fn factorize(n: u64, tables: &SieveTables) -> Result<FactoredInteger> {
    let mut rest = tables.check(n)?;
    let mut factors = Vec::new();
    while rest > 1 {
        let p = tables.spf[rest] as usize;
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        factors.push((p as u64, e));
    }
    Ok(FactoredInteger { n, factors })
}

/// `⌊total / n⌋`.
pub fn floor_div(total: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(DivnetError::ZeroDivisor);
    }
    Ok(total / n)
}

/// Divisor summatory function `D(x) = Σ_{j=1..x} ⌊x/j⌋` in `O(√x)` via the
/// hyperbola split `2·Σ_{j≤r} ⌊x/j⌋ − r²` with `r = ⌊√x⌋`.
pub fn divisor_summatory(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    let r = x.isqrt();
    let head: u128 = (1..=r).map(|j| (x / j) as u128).sum();
    let total = 2 * head - (r as u128) * (r as u128);
    u64::try_from(total).expect("divisor summatory exceeds u64")
}

/// All divisors of `n`, ascending. Has exactly `s(n)` entries.
pub fn list_divisors(n: &FactoredInteger) -> Vec<u64> {
    let mut divisors = vec![1u64];
    for &(p, e) in &n.factors {
        let current = divisors.len();
        let mut power = 1u64;
        for _ in 0..e {
            power *= p;
            for i in 0..current {
                divisors.push(divisors[i] * power);
            }
        }
    }
    divisors.sort_unstable();
    divisors
}

/// One maximal run of nodes sharing `⌊N/n⌋ = a`: the interval `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FloorBand {
    pub a: u64,
    pub lo: u64,
    pub hi: u64,
}

impl FloorBand {
    pub fn nodes(&self) -> std::ops::RangeInclusive<u64> {
        self.lo + 1..=self.hi
    }

    pub fn contains(&self, n: u64) -> bool {
        n > self.lo && n <= self.hi
    }
}

/// Floor bands of `1..=total` in increasing node order (decreasing `a`).
/// At most `2⌊√total⌋` of them.
pub fn floor_bands(total: u64) -> impl Iterator<Item = FloorBand> {
    let mut n = 1u64;
    std::iter::from_fn(move || {
        if n > total {
            return None;
        }
        let a = total / n;
        let hi = total / a;
        let band = FloorBand { a, lo: n - 1, hi };
        n = hi + 1;
        Some(band)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_summatory(x: u64) -> u64 {
        (1..=x).map(|j| x / j).sum()
    }

    #[test]
    fn sieve_rejects_zero() {
        assert!(matches!(build_sieve(0), Err(DivnetError::SizeTooSmall { .. })));
    }

    #[test]
    fn sieve_of_one() {
        let t = build_sieve(1).unwrap();
        assert_eq!(t.divisor_count(1), 1);
        assert_eq!(t.d3(1), 1);
        assert_eq!(t.spf(1), 1);
    }

    #[test]
    fn reported_divisor_counts() {
        let t = build_sieve(100).unwrap();
        assert_eq!(t.divisor_count(32), 6);
        assert_eq!(t.divisor_count(45), 6);
        assert_eq!(t.divisor_count(93), 4);
        assert_eq!(t.divisor_count(94), 4);
        assert_eq!(t.divisor_count(82), 4);
        assert_eq!(t.divisor_count(83), 2);
    }

    #[test]
    fn factorize_examples() {
        let t = build_sieve(50).unwrap();
        assert!(t.factorize(1).unwrap().factors().is_empty());
        assert_eq!(t.factorize(32).unwrap().factors(), &[(2, 5)]);
        assert_eq!(t.factorize(45).unwrap().factors(), &[(3, 2), (5, 1)]);
        assert!(matches!(t.factorize(51), Err(DivnetError::NodeOutOfRange { .. })));
        assert!(matches!(t.factorize(0), Err(DivnetError::NodeOutOfRange { .. })));
    }

    #[test]
    fn floor_div_examples() {
        assert_eq!(floor_div(5, 2).unwrap(), 2);
        assert_eq!(floor_div(100, 71).unwrap(), 1);
        assert_eq!(floor_div(77, 77).unwrap(), 1);
        assert_eq!(floor_div(5, 0), Err(DivnetError::ZeroDivisor));
    }

    #[test]
    fn summatory_examples() {
        assert_eq!(divisor_summatory(0), 0);
        assert_eq!(divisor_summatory(1), 1);
        assert_eq!(naive_summatory(5), 10);
        assert_eq!(divisor_summatory(5), 10);
        assert_eq!(naive_summatory(10), 27);
        assert_eq!(divisor_summatory(10), 27);
    }

    #[test]
    fn summatory_matches_naive_loop() {
        for x in 0..=10_000 {
            assert_eq!(divisor_summatory(x), naive_summatory(x), "x = {x}");
        }
    }

    #[test]
    fn list_divisors_examples() {
        let t = build_sieve(100).unwrap();
        assert_eq!(list_divisors(&t.factorize(1).unwrap()), vec![1]);
        assert_eq!(
            list_divisors(&t.factorize(45).unwrap()),
            vec![1, 3, 5, 9, 15, 45]
        );
        assert_eq!(list_divisors(&t.factorize(97).unwrap()), vec![1, 97]);
    }

    #[test]
    fn factored_integer_validation() {
        assert!(FactoredInteger::new(12, vec![(2, 2), (3, 1)]).is_ok());
        assert!(FactoredInteger::new(12, vec![(3, 1), (2, 2)]).is_err());
        assert!(FactoredInteger::new(12, vec![(2, 1), (3, 1)]).is_err());
        assert!(FactoredInteger::new(1, vec![]).is_ok());
    }

    #[test]
    fn tables_agree_with_brute_force_up_to_ten_thousand() {
        let limit = 10_000;
        let t = build_sieve(limit).unwrap();
        for n in 1..=limit {
            let f = t.factorize(n).unwrap();
            let rebuilt: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(rebuilt, n);
            assert_eq!(t.divisor_count(n), f.divisor_count());
            assert_eq!(t.d3(n), f.divisor_count_sum());
            let divisors = list_divisors(&f);
            assert_eq!(divisors.len() as u64, t.divisor_count(n));
            assert!(divisors.iter().all(|d| n % d == 0));
            let direct: u64 = divisors.iter().map(|&m| t.divisor_count(m)).sum();
            assert_eq!(t.d3(n), direct);
            if n >= 2 {
                let p = t.spf(n);
                assert!(n % p == 0);
                assert_eq!(t.divisor_count(p), 2);
            }
        }
    }

    #[test]
    fn bands_partition_and_are_monotone() {
        for total in [1u64, 2, 10, 99, 100, 1000, 12_345] {
            let bands: Vec<_> = floor_bands(total).collect();
            assert!(bands.len() as u64 <= 2 * total.isqrt());
            let mut next = 1;
            for pair in bands.windows(2) {
                assert_eq!(pair[0].hi, pair[1].lo);
                assert!(pair[0].a > pair[1].a);
            }
            for b in &bands {
                assert_eq!(b.lo + 1, next);
                for n in b.nodes() {
                    assert_eq!(total / n, b.a);
                }
                next = b.hi + 1;
            }
            assert_eq!(next, total + 1);
        }
    }
}
