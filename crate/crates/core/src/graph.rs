//! Ground-truth measures from an explicitly built divisibility graph.
//!
//! The graph is stored as sorted adjacency lists. Anything the adjacency
//! matrix would give (`A_ij`, `[A²]_st`) is answered by binary search or
//! sorted-list intersection instead.

use std::collections::{BTreeMap, VecDeque};
use std::io::{self, Write};

use rayon::prelude::*;

use crate::analytic::{pairs, ratio_over_pairs};
use crate::error::{DivnetError, Result};
use crate::rational::ExactRational;

/// Largest size for which Brandes accumulates in exact rationals.
pub const EXACT_BRANDES_LIMIT: u64 = 2000;

/// Sources per block when accumulating Brandes dependencies. Fixed so float
/// sums are added in the same order for any worker count.
const BRANDES_BLOCK: usize = 64;

/// G_N: nodes `1..=N`, `i ~ j` iff `i ≠ j` and one divides the other.
#[derive(Debug, Clone)]
pub struct DivisibilityGraph {
    size: u64,
    adjacency: Vec<Vec<u32>>,
    edge_count: u64,
}

pub fn build_graph(size: u64) -> Result<DivisibilityGraph> {
    if size == 0 {
        return Err(DivnetError::SizeTooSmall { min: 1, got: 0 });
    }
    if size > u32::MAX as u64 {
        return Err(DivnetError::Overflow("graph size exceeds u32 node ids"));
    }
    let n_max = size as usize;
    let mut adjacency = vec![Vec::new(); n_max + 1];
    let mut edge_count = 0u64;
    // Divisors of m are all pushed before m's own multiples, so every list
    // comes out ascending.
    for i in 1..=n_max {
        for m in (2 * i..=n_max).step_by(i) {
            adjacency[i].push(m as u32);
            adjacency[m].push(i as u32);
            edge_count += 1;
        }
    }
    Ok(DivisibilityGraph { size, adjacency, edge_count })
}

impl DivisibilityGraph {
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    fn check(&self, n: u64) -> Result<usize> {
        if n == 0 || n > self.size {
            Err(DivnetError::NodeOutOfRange { n, limit: self.size })
        } else {
            Ok(n as usize)
        }
    }

    pub fn neighbors(&self, n: u64) -> Result<&[u32]> {
        Ok(&self.adjacency[self.check(n)?])
    }

    pub fn is_adjacent(&self, i: u64, j: u64) -> bool {
        match (self.check(i), self.check(j)) {
            (Ok(i), Ok(_)) => self.adjacency[i].binary_search(&(j as u32)).is_ok(),
            _ => false,
        }
    }

    /// `[A²]_st`: number of common neighbours.
    pub fn common_neighbor_count(&self, s: u64, t: u64) -> Result<usize> {
        let (s, t) = (self.check(s)?, self.check(t)?);
        Ok(intersection_size(&self.adjacency[s], &self.adjacency[t]))
    }

    /// Edges as `(i, j)` with `i < j`, ascending by `i` then `j`.
    pub fn edges(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, list)| {
            list.iter()
                .filter(move |&&j| j as usize > i)
                .map(move |&j| (i as u64, j as u64))
        })
    }
}

fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if small.len() * 16 < large.len() {
        return small.iter().filter(|x| large.binary_search(x).is_ok()).count();
    }
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < small.len() && j < large.len() {
        match small[i].cmp(&large[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

fn intersection_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// Row sum of the adjacency matrix.
pub fn degree_oracle(g: &DivisibilityGraph, n: u64) -> Result<u64> {
    Ok(g.neighbors(n)?.len() as u64)
}

pub fn degree_profile_oracle(g: &DivisibilityGraph) -> Vec<(u64, u64)> {
    (1..=g.size)
        .map(|n| (n, g.adjacency[n as usize].len() as u64))
        .collect()
}

/// Edges (half the adjacency sum) over `C(N, 2)`.
pub fn link_density_oracle(g: &DivisibilityGraph) -> Result<ExactRational> {
    if g.size < 2 {
        return Err(DivnetError::SizeTooSmall { min: 2, got: g.size });
    }
    let degree_sum: u64 = g.adjacency.iter().map(|l| l.len() as u64).sum();
    ExactRational::from_counts(degree_sum / 2, pairs(g.size))
}

/// Link densities of every prefix graph G_m, `m = 2..=N`, read off G_N.
///
/// G_m is the subgraph of G_N induced by `1..=m`, so its edge count is the
/// number of edges whose larger endpoint is at most `m`.
pub fn link_density_prefix_oracle(g: &DivisibilityGraph) -> Vec<(u64, ExactRational)> {
    let mut edges = 0u64;
    let mut out = Vec::with_capacity(g.size.saturating_sub(1) as usize);
    for m in 1..=g.size {
        edges += g.adjacency[m as usize].iter().filter(|&&j| (j as u64) < m).count() as u64;
        if m >= 2 {
            out.push((m, ExactRational::from_counts(edges, pairs(m)).expect("m >= 2")));
        }
    }
    out
}

/// Edges among the neighbours of `n`, by triangle counting.
pub fn neighbor_links_oracle(g: &DivisibilityGraph, n: u64) -> Result<u64> {
    let own = g.neighbors(n)?;
    let twice: usize = own
        .iter()
        .map(|&u| intersection_size(own, &g.adjacency[u as usize]))
        .sum();
    Ok(twice as u64 / 2)
}

/// Local clustering by triangle counting; zero when the degree is below 2.
pub fn clustering_oracle(g: &DivisibilityGraph, n: u64) -> Result<ExactRational> {
    let links = neighbor_links_oracle(g, n)?;
    Ok(ratio_over_pairs(links, degree_oracle(g, n)?))
}

pub fn clustering_profile_oracle(g: &DivisibilityGraph) -> Vec<(u64, ExactRational)> {
    (1..=g.size)
        .into_par_iter()
        .map(|n| (n, clustering_oracle(g, n).expect("node in range")))
        .collect()
}

/// Ordered `(s, t)` pairs routed through one node, grouped by the number of
/// geodesics `g_st` between them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeodesicTally {
    by_paths: BTreeMap<u32, u64>,
}

impl GeodesicTally {
    fn record(&mut self, paths: u32, pairs: u64) {
        *self.by_paths.entry(paths).or_insert(0) += pairs;
    }

    fn merge(&mut self, other: &GeodesicTally) {
        for (&paths, &count) in &other.by_paths {
            self.record(paths, count);
        }
    }

    /// `Σ count / g_st`, divided by `normalizer`.
    pub fn exact(&self, normalizer: u64) -> Result<ExactRational> {
        let mut sum = ExactRational::ZERO;
        for (&paths, &count) in &self.by_paths {
            let term = ExactRational::from_counts(count, paths as u64)?;
            sum = sum
                .checked_add(&term)
                .ok_or(DivnetError::Overflow("exact betweenness"))?;
        }
        let norm = ExactRational::from_counts(1, normalizer)?;
        sum.checked_mul(&norm)
            .ok_or(DivnetError::Overflow("exact betweenness"))
    }

    pub fn to_f64(&self, normalizer: u64) -> f64 {
        let sum: f64 = self
            .by_paths
            .iter()
            .map(|(&paths, &count)| count as f64 / paths as f64)
            .sum();
        sum / normalizer as f64
    }
}

fn betweenness_normalizer(size: u64) -> Result<u64> {
    if size < 3 {
        return Err(DivnetError::SizeTooSmall { min: 3, got: size });
    }
    Ok((size - 1) * (size - 2))
}

/// Betweenness of one node straight from the adjacency structure.
///
/// Every non-adjacent pair of G_N is joined by length-2 paths (through 1 at
/// least), so a pair `(s, t)` of neighbours of `n` contributes `1/[A²]_st`
/// exactly when `A_st = 0`. Both orders of each pair are counted and the sum
/// is divided by `(N−1)(N−2)`.
pub fn betweenness_matrix(g: &DivisibilityGraph, n: u64) -> Result<ExactRational> {
    let normalizer = betweenness_normalizer(g.size)?;
    betweenness_matrix_tally(g, n)?.exact(normalizer)
}

pub fn betweenness_matrix_tally(g: &DivisibilityGraph, n: u64) -> Result<GeodesicTally> {
    let own = g.neighbors(n)?;
    let mut tally = GeodesicTally::default();
    for (i, &s) in own.iter().enumerate() {
        let s_list = &g.adjacency[s as usize];
        for &t in &own[i + 1..] {
            if s_list.binary_search(&t).is_ok() {
                continue;
            }
            let paths = intersection_size(s_list, &g.adjacency[t as usize]);
            tally.record(paths as u32, 2);
        }
    }
    Ok(tally)
}

/// [`betweenness_matrix`] for every node in one sweep over non-adjacent pairs.
pub fn betweenness_matrix_profile(g: &DivisibilityGraph) -> Result<Vec<GeodesicTally>> {
    betweenness_normalizer(g.size)?;
    let n_max = g.size as usize;
    let tallies = (1..=n_max)
        .into_par_iter()
        .fold(
            || (vec![GeodesicTally::default(); n_max + 1], Vec::new()),
            |(mut acc, mut common), s| {
                let s_list = &g.adjacency[s];
                let mut next_adjacent = s_list.iter().peekable();
                for t in s + 1..=n_max {
                    while next_adjacent.next_if(|&&x| (x as usize) < t).is_some() {}
                    if next_adjacent.next_if(|&&x| x as usize == t).is_some() {
                        continue;
                    }
                    intersection_into(s_list, &g.adjacency[t], &mut common);
                    let paths = common.len() as u32;
                    for &via in &common {
                        acc[via as usize].record(paths, 2);
                    }
                }
                (acc, common)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(
            || vec![GeodesicTally::default(); n_max + 1],
            |mut left, right| {
                for (l, r) in left.iter_mut().zip(&right) {
                    l.merge(r);
                }
                left
            },
        );
    Ok(tallies.into_iter().skip(1).collect())
}

pub fn betweenness_matrix_values(g: &DivisibilityGraph) -> Result<Vec<(u64, f64)>> {
    let normalizer = betweenness_normalizer(g.size)?;
    Ok(betweenness_matrix_profile(g)?
        .iter()
        .enumerate()
        .map(|(i, t)| (i as u64 + 1, t.to_f64(normalizer)))
        .collect())
}

pub fn betweenness_matrix_exact(g: &DivisibilityGraph) -> Result<Vec<(u64, ExactRational)>> {
    let normalizer = betweenness_normalizer(g.size)?;
    betweenness_matrix_profile(g)?
        .iter()
        .enumerate()
        .map(|(i, t)| Ok((i as u64 + 1, t.exact(normalizer)?)))
        .collect()
}

/// Accumulator for Brandes dependencies.
trait Dependency: Copy + Send + Sync {
    fn zero() -> Self;
    /// `(num / den) * (1 + self)`.
    fn share(self, num: u64, den: u64) -> Result<Self>;
    fn plus(self, other: Self) -> Result<Self>;
    fn normalize(self, normalizer: u64) -> Result<Self>;
}

impl Dependency for f64 {
    fn zero() -> Self {
        0.0
    }

    fn share(self, num: u64, den: u64) -> Result<Self> {
        Ok(num as f64 / den as f64 * (1.0 + self))
    }

    fn plus(self, other: Self) -> Result<Self> {
        Ok(self + other)
    }

    fn normalize(self, normalizer: u64) -> Result<Self> {
        Ok(self / normalizer as f64)
    }
}

impl Dependency for ExactRational {
    fn zero() -> Self {
        ExactRational::ZERO
    }

    fn share(self, num: u64, den: u64) -> Result<Self> {
        let ratio = ExactRational::from_counts(num, den)?;
        (ExactRational::ONE + self)
            .checked_mul(&ratio)
            .ok_or(DivnetError::Overflow("brandes dependency"))
    }

    fn plus(self, other: Self) -> Result<Self> {
        self.checked_add(&other)
            .ok_or(DivnetError::Overflow("brandes dependency"))
    }

    fn normalize(self, normalizer: u64) -> Result<Self> {
        self.checked_mul(&ExactRational::from_counts(1, normalizer)?)
            .ok_or(DivnetError::Overflow("brandes dependency"))
    }
}

/// Single-source Brandes pass: BFS counting shortest paths, then dependency
/// accumulation in reverse BFS order. Adds into `out`.
fn brandes_source<D: Dependency>(
    g: &DivisibilityGraph,
    source: usize,
    out: &mut [D],
) -> Result<()> {
    let n_max = g.size as usize;
    let mut sigma = vec![0u64; n_max + 1];
    let mut dist = vec![u32::MAX; n_max + 1];
    let mut delta = vec![D::zero(); n_max + 1];
    let mut order = Vec::with_capacity(n_max);
    let mut queue = VecDeque::new();

    sigma[source] = 1;
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in &g.adjacency[v] {
            let w = w as usize;
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
            }
        }
    }

    for &w in order.iter().rev() {
        for &v in &g.adjacency[w] {
            let v = v as usize;
            if dist[v] != u32::MAX && dist[v] + 1 == dist[w] {
                let share = delta[w].share(sigma[v], sigma[w])?;
                delta[v] = delta[v].plus(share)?;
            }
        }
        if w != source {
            out[w] = out[w].plus(delta[w])?;
        }
    }
    Ok(())
}

fn brandes<D: Dependency>(g: &DivisibilityGraph) -> Result<Vec<(u64, D)>> {
    let normalizer = betweenness_normalizer(g.size)?;
    let n_max = g.size as usize;
    let sources: Vec<usize> = (1..=n_max).collect();
    let partials: Vec<Vec<D>> = sources
        .par_chunks(BRANDES_BLOCK)
        .map(|block| {
            let mut acc = vec![D::zero(); n_max + 1];
            for &s in block {
                brandes_source(g, s, &mut acc)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = vec![D::zero(); n_max + 1];
    for part in &partials {
        for (t, &p) in total.iter_mut().zip(part) {
            *t = t.plus(p)?;
        }
    }
    total
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(n, v)| Ok((n as u64, v.normalize(normalizer)?)))
        .collect()
}

/// Brandes betweenness over all sources, normalized by `(N−1)(N−2)`.
pub fn betweenness_brandes(g: &DivisibilityGraph) -> Result<Vec<(u64, f64)>> {
    brandes::<f64>(g)
}

/// Brandes in exact rationals; limited to `N ≤ EXACT_BRANDES_LIMIT`.
pub fn betweenness_brandes_exact(g: &DivisibilityGraph) -> Result<Vec<(u64, ExactRational)>> {
    if g.size > EXACT_BRANDES_LIMIT {
        return Err(DivnetError::InvalidInput(format!(
            "exact Brandes is limited to N <= {EXACT_BRANDES_LIMIT}"
        )));
    }
    brandes::<ExactRational>(g)
}

/// Writes one `i j` line per edge, ascending.
pub fn write_edge_list<W: Write>(g: &DivisibilityGraph, mut out: W) -> io::Result<()> {
    for (i, j) in g.edges() {
        writeln!(out, "{i} {j}")?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::divisor_summatory;

    fn r(num: i128, den: i128) -> ExactRational {
        ExactRational::new(num, den).unwrap()
    }

    /// Pair scan straight from the definition.
    fn brute_edges(size: u64) -> Vec<(u64, u64)> {
        let mut edges = Vec::new();
        for i in 1..=size {
            for j in i + 1..=size {
                if j % i == 0 {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    #[test]
    fn rejects_empty_graph() {
        assert!(build_graph(0).is_err());
    }

    #[test]
    fn small_graphs() {
        assert_eq!(build_graph(2).unwrap().edges().collect::<Vec<_>>(), vec![(1, 2)]);
        assert_eq!(
            build_graph(4).unwrap().edges().collect::<Vec<_>>(),
            vec![(1, 2), (1, 3), (1, 4), (2, 4)]
        );
        let g10 = build_graph(10).unwrap();
        assert_eq!(g10.edge_count(), divisor_summatory(10) - 10);
        assert_eq!(g10.edge_count(), 17);
    }

    #[test]
    fn structure_matches_pair_scan() {
        for size in 1..=300 {
            let g = build_graph(size).unwrap();
            assert_eq!(g.edges().collect::<Vec<_>>(), brute_edges(size));
            for n in 1..=size {
                let list = g.neighbors(n).unwrap();
                assert!(list.windows(2).all(|w| w[0] < w[1]));
                assert!(!list.contains(&(n as u32)));
                for &m in list {
                    assert!(g.is_adjacent(m as u64, n));
                }
            }
        }
    }

    #[test]
    fn degree_and_edge_identities() {
        for size in [1u64, 2, 17, 1000, 10_000] {
            let g = build_graph(size).unwrap();
            let degree_sum: u64 = degree_profile_oracle(&g).iter().map(|&(_, k)| k).sum();
            assert_eq!(degree_sum, 2 * g.edge_count());
            assert_eq!(g.edge_count(), divisor_summatory(size) - size);
            assert_eq!(degree_oracle(&g, 1).unwrap(), size - 1);
        }
    }

    #[test]
    fn degree_examples() {
        let g = build_graph(100).unwrap();
        assert_eq!(degree_oracle(&g, 71).unwrap(), 1);
        assert_eq!(degree_oracle(&g, 12).unwrap(), 12);
        assert_eq!(
            g.neighbors(12).unwrap(),
            &[1, 2, 3, 4, 6, 24, 36, 48, 60, 72, 84, 96]
        );
        assert!(degree_oracle(&g, 101).is_err());
    }

    #[test]
    fn link_density_examples() {
        assert_eq!(link_density_oracle(&build_graph(2).unwrap()).unwrap(), ExactRational::ONE);
        assert_eq!(link_density_oracle(&build_graph(3).unwrap()).unwrap(), r(2, 3));
        assert!(link_density_oracle(&build_graph(1).unwrap()).is_err());
    }

    #[test]
    fn prefix_link_densities_match_fresh_graphs() {
        let g = build_graph(300).unwrap();
        for (m, ld) in link_density_prefix_oracle(&g) {
            assert_eq!(ld, link_density_oracle(&build_graph(m).unwrap()).unwrap());
        }
    }

    #[test]
    fn non_adjacent_pairs_share_node_one() {
        let g = build_graph(400).unwrap();
        for s in 2..=400 {
            for t in s + 1..=400 {
                if !g.is_adjacent(s, t) {
                    assert!(g.common_neighbor_count(s, t).unwrap() >= 1);
                }
            }
        }
    }

    #[test]
    fn clustering_examples() {
        let g100 = build_graph(100).unwrap();
        assert_eq!(clustering_oracle(&g100, 93).unwrap(), r(2, 3));
        for p in [53u64, 59, 61, 67, 71, 73, 79, 83, 89, 97] {
            assert_eq!(clustering_oracle(&g100, p).unwrap(), ExactRational::ZERO);
        }
        let g4 = build_graph(4).unwrap();
        assert_eq!(clustering_oracle(&g4, 1).unwrap(), r(1, 3));
    }

    #[test]
    fn betweenness_of_g4() {
        let g = build_graph(4).unwrap();
        // Ordered pairs (2,3),(3,2),(3,4),(4,3) each have one geodesic via 1.
        assert_eq!(betweenness_matrix(&g, 1).unwrap(), r(2, 3));
        assert_eq!(betweenness_matrix(&g, 3).unwrap(), ExactRational::ZERO);
        assert_eq!(betweenness_matrix(&g, 2).unwrap(), ExactRational::ZERO);
        let brandes = betweenness_brandes_exact(&g).unwrap();
        assert_eq!(
            brandes,
            vec![(1, r(2, 3)), (2, ExactRational::ZERO), (3, ExactRational::ZERO), (4, ExactRational::ZERO)]
        );
        assert!(betweenness_matrix(&build_graph(2).unwrap(), 1).is_err());
        assert!(betweenness_brandes(&build_graph(2).unwrap()).is_err());
    }

    #[test]
    fn universal_neighbor_dominates() {
        let g = build_graph(300).unwrap();
        let values = betweenness_brandes(&g).unwrap();
        let top = values[0].1;
        assert!(values[1..].iter().all(|&(_, v)| v < top));
    }

    #[test]
    fn per_node_and_sweep_agree() {
        let g = build_graph(150).unwrap();
        let sweep = betweenness_matrix_exact(&g).unwrap();
        for (n, value) in sweep {
            assert_eq!(value, betweenness_matrix(&g, n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn clique_neighborhoods_have_zero_betweenness() {
        let g = build_graph(500).unwrap();
        for n in 1..=500 {
            let own = g.neighbors(n).unwrap();
            let clique = own.iter().enumerate().all(|(i, &s)| {
                own[i + 1..].iter().all(|&t| g.is_adjacent(s as u64, t as u64))
            });
            if clique {
                assert_eq!(betweenness_matrix(&g, n).unwrap(), ExactRational::ZERO);
            }
        }
    }

    #[test]
    fn matrix_and_brandes_exact_agree_small() {
        for size in 3..=60 {
            let g = build_graph(size).unwrap();
            assert_eq!(
                betweenness_matrix_exact(&g).unwrap(),
                betweenness_brandes_exact(&g).unwrap(),
                "N = {size}"
            );
        }
    }

    #[test]
    fn exact_brandes_is_capped() {
        let g = build_graph(EXACT_BRANDES_LIMIT + 1).unwrap();
        assert!(betweenness_brandes_exact(&g).is_err());
    }

    #[test]
    fn edge_list_format() {
        let mut buf = Vec::new();
        write_edge_list(&build_graph(4).unwrap(), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1 2\n1 3\n1 4\n2 4\n");
    }
}
