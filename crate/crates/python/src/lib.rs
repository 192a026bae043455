//! Python bindings for `divnet`.
//!
//! Exact values come back as `fractions.Fraction`; errors raised by the
//! engine surface as `ValueError`.

use std::sync::OnceLock;

use divnet::analysis::{self, StretchMeasure};
use divnet::{analytic, graph, numtheory, DivnetError, ExactRational};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error(err: DivnetError) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn fraction<'py>(py: Python<'py>, value: ExactRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((value.numerator(), value.denominator()))
}

fn fraction_pairs<'py>(
    py: Python<'py>,
    rows: Vec<(u64, ExactRational)>,
) -> PyResult<Vec<(u64, Bound<'py, PyAny>)>> {
    rows.into_iter()
        .map(|(n, v)| Ok((n, fraction(py, v)?)))
        .collect()
}

fn sieve(limit: u64) -> PyResult<numtheory::SieveTables> {
    numtheory::build_sieve(limit).map_err(value_error)
}

/// Smallest-prime-factor, divisor-count and d3 tables up to `limit`.
#[pyclass(name = "SieveTables", module = "divnet", frozen)]
struct PySieveTables {
    inner: numtheory::SieveTables,
}

impl PySieveTables {
    fn check(&self, n: u64) -> PyResult<()> {
        if n == 0 || n > self.inner.limit() {
            return Err(value_error(DivnetError::NodeOutOfRange {
                n,
                limit: self.inner.limit(),
            }));
        }
        Ok(())
    }
}

#[pymethods]
impl PySieveTables {
    #[new]
    fn new(py: Python<'_>, limit: u64) -> PyResult<Self> {
        let inner = py.detach(|| sieve(limit))?;
        Ok(Self { inner })
    }

    #[getter]
    fn limit(&self) -> u64 {
        self.inner.limit()
    }

    fn spf(&self, n: u64) -> PyResult<u64> {
        self.check(n)?;
        Ok(self.inner.spf(n))
    }

    fn divisor_count(&self, n: u64) -> PyResult<u64> {
        self.check(n)?;
        Ok(self.inner.divisor_count(n))
    }

    fn d3(&self, n: u64) -> PyResult<u64> {
        self.check(n)?;
        Ok(self.inner.d3(n))
    }

    fn is_prime(&self, n: u64) -> PyResult<bool> {
        self.check(n)?;
        Ok(self.inner.is_prime(n))
    }

    fn factorize(&self, n: u64) -> PyResult<Vec<(u64, u32)>> {
        let f = self.inner.factorize(n).map_err(value_error)?;
        Ok(f.factors().to_vec())
    }

    fn __repr__(&self) -> String {
        format!("SieveTables(limit={})", self.inner.limit())
    }
}

/// Closed-form measures of G_N for one network size.
#[pyclass(name = "DivisorNetwork", module = "divnet", frozen)]
struct PyDivisorNetwork {
    size: u64,
    tables: numtheory::SieveTables,
}

#[pymethods]
impl PyDivisorNetwork {
    #[new]
    fn new(py: Python<'_>, size: u64) -> PyResult<Self> {
        if size == 0 {
            return Err(value_error(DivnetError::SizeTooSmall { min: 1, got: 0 }));
        }
        let tables = py.detach(|| sieve(size))?;
        Ok(Self { size, tables })
    }

    #[getter]
    fn size(&self) -> u64 {
        self.size
    }

    fn edge_count(&self) -> u64 {
        analytic::edge_count(self.size)
    }

    fn link_density<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, analytic::link_density(self.size).map_err(value_error)?)
    }

    fn degree(&self, n: u64) -> PyResult<u64> {
        analytic::degree(n, self.size, &self.tables).map_err(value_error)
    }

    fn degree_profile(&self, py: Python<'_>) -> PyResult<Vec<(u64, u64)>> {
        py.detach(|| analytic::degree_profile(self.size, &self.tables))
            .map_err(value_error)
    }

    fn clustering<'py>(&self, py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
        let parts = analytic::clustering(n, self.size, &self.tables).map_err(value_error)?;
        fraction(py, parts.coefficient)
    }

    /// Link counts behind the clustering coefficient of node `n`.
    fn clustering_parts<'py>(&self, py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyDict>> {
        let p = analytic::clustering(n, self.size, &self.tables).map_err(value_error)?;
        let d = PyDict::new(py);
        d.set_item("n", p.n)?;
        d.set_item("divisor_links", p.divisor_links)?;
        d.set_item("multiple_links", p.multiple_links)?;
        d.set_item("cross_links", p.cross_links)?;
        d.set_item("neighbor_links", p.neighbor_links)?;
        d.set_item("degree", p.degree)?;
        d.set_item("coefficient", fraction(py, p.coefficient)?)?;
        Ok(d)
    }

    fn clustering_profile<'py>(
        &self,
        py: Python<'py>,
    ) -> PyResult<Vec<(u64, Bound<'py, PyAny>)>> {
        let parts = py
            .detach(|| analytic::clustering_profile(self.size, &self.tables))
            .map_err(value_error)?;
        fraction_pairs(py, parts.into_iter().map(|p| (p.n, p.coefficient)).collect())
    }

    fn delta_clustering<'py>(&self, py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
        fraction(
            py,
            analytic::delta_clustering(n, self.size, &self.tables).map_err(value_error)?,
        )
    }

    fn delta_zero_predicate(&self, n: u64) -> PyResult<bool> {
        analytic::delta_zero_predicate(n, self.size, &self.tables).map_err(value_error)
    }

    fn delta_divisor(&self, n: u64) -> PyResult<i64> {
        if n >= self.size {
            return Err(value_error(DivnetError::NodeOutOfRange {
                n: n + 1,
                limit: self.size,
            }));
        }
        analytic::delta_divisor(n, &self.tables).map_err(value_error)
    }

    /// One dict per floor band with the prime degree and clustering there.
    fn bands<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let bands = analysis::band_decomposition(self.size, &self.tables).map_err(value_error)?;
        bands
            .into_iter()
            .map(|b| {
                let d = PyDict::new(py);
                d.set_item("a", b.a)?;
                d.set_item("lo", b.lo)?;
                d.set_item("hi", b.hi)?;
                d.set_item("prime_degree", b.prime_degree)?;
                d.set_item("prime_clustering", fraction(py, b.prime_clustering)?)?;
                d.set_item("prime_count", b.prime_count)?;
                Ok(d)
            })
            .collect()
    }

    /// Counts of `k = s(n) - s(n+1)` over consecutive pairs.
    fn census(&self, py: Python<'_>) -> PyResult<std::collections::BTreeMap<i64, u64>> {
        let table = py
            .detach(|| analysis::heathbrown_census(self.size, &self.tables))
            .map_err(value_error)?;
        Ok(table.counts)
    }

    fn census_pairs(&self, k: i64) -> PyResult<Vec<u64>> {
        analysis::census_pairs(self.size, k, &self.tables).map_err(value_error)
    }

    fn delta_symmetry<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let stats = py
            .detach(|| analysis::delta_symmetry_stats(self.size, &self.tables))
            .map_err(value_error)?;
        let d = PyDict::new(py);
        for (name, s) in [("clustering", stats.clustering), ("divisor", stats.divisor)] {
            let row = PyDict::new(py);
            row.set_item("zero", s.count_zero)?;
            row.set_item("positive", s.count_pos)?;
            row.set_item("negative", s.count_neg)?;
            row.set_item("imbalance", s.sign_imbalance())?;
            row.set_item("mean", fraction(py, s.mean)?)?;
            d.set_item(name, row)?;
        }
        Ok(d)
    }

    /// Band-wise similarity of this network's profile with a larger one.
    #[pyo3(signature = (larger, measure = "degree"))]
    fn stretch_similarity<'py>(
        &self,
        py: Python<'py>,
        larger: u64,
        measure: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let measure = match measure {
            "degree" => StretchMeasure::Degree,
            "clustering" => StretchMeasure::Clustering,
            other => {
                return Err(PyValueError::new_err(format!(
                    "measure must be 'degree' or 'clustering', got {other:?}"
                )))
            }
        };
        let size = self.size;
        let report = py.detach(|| {
            let tables = numtheory::build_sieve(size.max(larger))?;
            analysis::stretch_similarity(size, larger, measure, &tables)
        });
        let report = report.map_err(value_error)?;
        let d = PyDict::new(py);
        d.set_item("score", report.score)?;
        d.set_item("coverage_forward", report.coverage_forward)?;
        d.set_item("coverage_backward", report.coverage_backward)?;
        d.set_item("bands_compared", report.bands_compared)?;
        d.set_item("bands_identical", report.bands_identical)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("DivisorNetwork(size={})", self.size)
    }
}

/// Explicit adjacency-list graph, used as an independent check.
#[pyclass(name = "DivisibilityGraph", module = "divnet", frozen)]
struct PyDivisibilityGraph {
    inner: graph::DivisibilityGraph,
    tallies: OnceLock<Vec<graph::GeodesicTally>>,
}

impl PyDivisibilityGraph {
    fn tallies(&self, py: Python<'_>) -> PyResult<&[graph::GeodesicTally]> {
        if let Some(t) = self.tallies.get() {
            return Ok(t);
        }
        let computed = py
            .detach(|| graph::betweenness_matrix_profile(&self.inner))
            .map_err(value_error)?;
        Ok(self.tallies.get_or_init(|| computed))
    }

    fn normalizer(&self) -> u64 {
        let n = self.inner.size();
        (n - 1) * (n.saturating_sub(2))
    }
}

#[pymethods]
impl PyDivisibilityGraph {
    #[new]
    fn new(py: Python<'_>, size: u64) -> PyResult<Self> {
        let inner = py.detach(|| graph::build_graph(size)).map_err(value_error)?;
        Ok(Self {
            inner,
            tallies: OnceLock::new(),
        })
    }

    #[getter]
    fn size(&self) -> u64 {
        self.inner.size()
    }

    fn edge_count(&self) -> u64 {
        self.inner.edge_count()
    }

    fn neighbors(&self, n: u64) -> PyResult<Vec<u32>> {
        Ok(self.inner.neighbors(n).map_err(value_error)?.to_vec())
    }

    fn is_adjacent(&self, i: u64, j: u64) -> bool {
        self.inner.is_adjacent(i, j)
    }

    fn edges(&self) -> Vec<(u64, u64)> {
        self.inner.edges().collect()
    }

    fn degree(&self, n: u64) -> PyResult<u64> {
        graph::degree_oracle(&self.inner, n).map_err(value_error)
    }

    fn clustering<'py>(&self, py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, graph::clustering_oracle(&self.inner, n).map_err(value_error)?)
    }

    fn link_density<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, graph::link_density_oracle(&self.inner).map_err(value_error)?)
    }

    /// Exact betweenness of node `n` from common-neighbour counts.
    fn betweenness<'py>(&self, py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
        if n == 0 || n > self.inner.size() {
            return Err(value_error(DivnetError::NodeOutOfRange {
                n,
                limit: self.inner.size(),
            }));
        }
        if self.inner.size() < 3 {
            return Err(value_error(DivnetError::SizeTooSmall {
                min: 3,
                got: self.inner.size(),
            }));
        }
        let tally = &self.tallies(py)?[(n - 1) as usize];
        fraction(py, tally.exact(self.normalizer()).map_err(value_error)?)
    }

    /// Betweenness of every node as floats, by `"matrix"` or `"brandes"`.
    #[pyo3(signature = (method = "matrix"))]
    fn betweenness_profile(&self, py: Python<'_>, method: &str) -> PyResult<Vec<(u64, f64)>> {
        match method {
            "matrix" => {
                let norm = self.normalizer();
                if self.inner.size() < 3 {
                    return Err(value_error(DivnetError::SizeTooSmall {
                        min: 3,
                        got: self.inner.size(),
                    }));
                }
                Ok(self
                    .tallies(py)?
                    .iter()
                    .enumerate()
                    .map(|(i, t)| (i as u64 + 1, t.to_f64(norm)))
                    .collect())
            }
            "brandes" => py
                .detach(|| graph::betweenness_brandes(&self.inner))
                .map_err(value_error),
            other => Err(PyValueError::new_err(format!(
                "method must be 'matrix' or 'brandes', got {other:?}"
            ))),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "DivisibilityGraph(size={}, edges={})",
            self.inner.size(),
            self.inner.edge_count()
        )
    }
}

#[pyfunction]
fn factorize(n: u64) -> PyResult<Vec<(u64, u32)>> {
    let tables = sieve(n.max(1))?;
    let f = numtheory::factorize(n, &tables).map_err(value_error)?;
    Ok(f.factors().to_vec())
}

#[pyfunction]
fn list_divisors(n: u64) -> PyResult<Vec<u64>> {
    let tables = sieve(n.max(1))?;
    let f = numtheory::factorize(n, &tables).map_err(value_error)?;
    Ok(numtheory::list_divisors(&f))
}

#[pyfunction]
fn floor_div(total: u64, n: u64) -> PyResult<u64> {
    numtheory::floor_div(total, n).map_err(value_error)
}

#[pyfunction]
fn divisor_summatory(x: u64) -> u64 {
    numtheory::divisor_summatory(x)
}

#[pyfunction]
fn edge_count(size: u64) -> u64 {
    analytic::edge_count(size)
}

#[pyfunction]
fn link_density(py: Python<'_>, size: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, analytic::link_density(size).map_err(value_error)?)
}

#[pyfunction]
fn prime_clustering(py: Python<'_>, a: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, analytic::prime_clustering(a).map_err(value_error)?)
}

#[pyfunction]
fn geometric_sizes(min: u64, max: u64, samples: usize) -> PyResult<Vec<u64>> {
    analysis::geometric_sizes(min, max, samples).map_err(value_error)
}

/// Least-squares fit of log link density against log N.
#[pyfunction]
fn scaling_fit<'py>(py: Python<'py>, sizes: Vec<u64>) -> PyResult<Bound<'py, PyDict>> {
    let fit = analysis::scaling_fit(&sizes).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("sizes", fit.sizes)?;
    d.set_item("slope", fit.slope)?;
    d.set_item("intercept", fit.intercept)?;
    d.set_item("residual", fit.residual)?;
    let densities = fit
        .densities
        .into_iter()
        .map(|v| fraction(py, v))
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("densities", densities)?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "divnet")]
pub fn divnet_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySieveTables>()?;
    m.add_class::<PyDivisorNetwork>()?;
    m.add_class::<PyDivisibilityGraph>()?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(list_divisors, m)?)?;
    m.add_function(wrap_pyfunction!(floor_div, m)?)?;
    m.add_function(wrap_pyfunction!(divisor_summatory, m)?)?;
    m.add_function(wrap_pyfunction!(edge_count, m)?)?;
    m.add_function(wrap_pyfunction!(link_density, m)?)?;
    m.add_function(wrap_pyfunction!(prime_clustering, m)?)?;
    m.add_function(wrap_pyfunction!(geometric_sizes, m)?)?;
    m.add_function(wrap_pyfunction!(scaling_fit, m)?)?;
    Ok(())
}
