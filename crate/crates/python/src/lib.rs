//! Python bindings for `bgrank`, built as the `bgrank_py` extension module.

use std::collections::BTreeMap;

use bgrank::asymptotics::{self, MainTermSource, WrightParams};
use bgrank::error::Error;
use bgrank::partition as part;
use bgrank::qseries;
use bgrank::turan::{self, Poly, RenormSeq, TuranOrder};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn partition_list(ps: &[PyRef<'_, Partition>]) -> Vec<part::Partition> {
    ps.iter().map(|p| p.inner.clone()).collect()
}

/// An integer partition, parts in weakly decreasing order.
#[pyclass(eq, frozen, skip_from_py_object, module = "bgrank_py")]
#[derive(Clone, PartialEq)]
struct Partition {
    inner: part::Partition,
}

impl From<part::Partition> for Partition {
    fn from(inner: part::Partition) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl Partition {
    #[new]
    #[pyo3(signature = (parts, sort = false))]
    fn new(parts: Vec<usize>, sort: bool) -> PyResult<Self> {
        let inner = if sort {
            part::Partition::from_unsorted(parts)
        } else {
            part::Partition::new(parts).map_err(py_err)?
        };
        Ok(Self { inner })
    }

    #[staticmethod]
    fn staircase(k: usize) -> Self {
        part::Partition::staircase(k).into()
    }

    #[getter]
    fn parts(&self) -> Vec<usize> {
        self.inner.parts().to_vec()
    }

    fn size(&self) -> usize {
        self.inner.size()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.parts().hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        format!("Partition({:?})", self.inner.parts())
    }

    fn conjugate(&self) -> Self {
        self.inner.conjugate().into()
    }

    /// Row-by-row hook lengths.
    fn hook_lengths(&self) -> Vec<Vec<usize>> {
        part::hook_lengths(&self.inner).rows().to_vec()
    }

    fn is_core(&self, t: usize) -> PyResult<bool> {
        part::is_t_core(&self.inner, t).map_err(py_err)
    }

    fn bg_rank(&self) -> i64 {
        part::bg_rank(&self.inner)
    }

    fn two_quotient_rank(&self) -> i64 {
        part::two_quotient_rank(&self.inner)
    }

    /// `(core, quotients)` of the `t`-core/quotient decomposition.
    fn littlewood(&self, t: usize) -> PyResult<(Partition, Vec<Partition>)> {
        let d = part::littlewood_decompose(&self.inner, t).map_err(py_err)?;
        Ok((d.core.into(), d.quotients.into_iter().map(Into::into).collect()))
    }
}

#[pyfunction]
fn littlewood_compose(core: PyRef<'_, Partition>, quotients: Vec<PyRef<'_, Partition>>, t: usize) -> PyResult<Partition> {
    part::littlewood_compose(&core.inner, &partition_list(&quotients), t)
        .map(Into::into)
        .map_err(py_err)
}

#[pyfunction]
fn partitions(n: usize) -> Vec<Partition> {
    part::enumerate_partitions(n).map(Into::into).collect()
}

#[pyfunction]
fn bg_core_size(j: i64) -> usize {
    part::bg_core_size(j)
}

#[pyfunction]
fn p_values(n_max: usize) -> Vec<BigInt> {
    qseries::p_values(n_max)
}

#[pyfunction]
fn p2_values(n_max: usize) -> Vec<BigInt> {
    qseries::p2_values(n_max)
}

/// Partitions of `n` with BG-rank `j`, for `n = 0..=n_max`.
#[pyfunction]
fn pbar_values(j: i64, n_max: usize) -> PyResult<Vec<BigInt>> {
    Ok(qseries::pbar_table(j, n_max).map_err(py_err)?.values().to_vec())
}

/// As `pbar_values`, restricted to 2-quotient rank `≡ a (mod b)`.
#[pyfunction]
fn pbar_abn_values(j: i64, a: usize, b: usize, n_max: usize) -> PyResult<Vec<BigInt>> {
    qseries::pbar_abn_values(j, a, b, n_max).map_err(py_err)
}

/// All residues at once, indexed `[a][n]`.
#[pyfunction]
fn pbar_abn_all_values(j: i64, b: usize, n_max: usize) -> PyResult<Vec<Vec<BigInt>>> {
    qseries::pbar_abn_all_values(j, b, n_max).map_err(py_err)
}

/// Rows `n = 0..=n_max` of the joint count by 2-quotient rank.
#[pyfunction]
fn joint_table(j: i64, n_max: usize) -> PyResult<Vec<BTreeMap<i64, BigInt>>> {
    let t = qseries::joint_table(j, n_max).map_err(py_err)?;
    Ok((0..=n_max).map(|n| t.row(n).clone()).collect())
}

#[pyfunction]
fn jensen_coeffs(seq: Vec<BigInt>, d: usize, n: usize) -> PyResult<Vec<BigInt>> {
    Ok(turan::jensen_poly(&seq, d, n).map_err(py_err)?.coeffs().to_vec())
}

#[pyfunction]
fn is_hyperbolic(seq: Vec<BigInt>, d: usize, n: usize) -> PyResult<bool> {
    Ok(turan::is_hyperbolic(&turan::jensen_poly(&seq, d, n).map_err(py_err)?))
}

/// `(distinct, with_multiplicity)` real roots of an integer polynomial, low to high.
#[pyfunction]
fn real_root_count(coeffs: Vec<BigInt>) -> PyResult<(usize, usize)> {
    let rc = turan::real_root_count_full(&Poly::from_integers(&coeffs)).map_err(py_err)?;
    Ok((rc.distinct, rc.with_multiplicity))
}

/// Integer coefficients of `H_d`, low to high.
#[pyfunction]
fn hermite(d: usize) -> Vec<BigInt> {
    turan::hermite(d).coeffs().iter().map(|c| c.to_integer()).collect()
}

/// `(onset, failures)` of Jensen hyperbolicity over `lo..=hi`.
#[pyfunction]
fn hyperbolicity_scan(seq: Vec<BigInt>, d: usize, lo: usize, hi: usize) -> PyResult<(usize, Vec<usize>)> {
    let s = turan::hyperbolicity_scan(&seq, d, lo, hi).map_err(py_err)?;
    Ok((s.onset(), s.failures))
}

/// Renormalization `(A, δ)` at index `m` of `p̄_0(2m)`.
#[pyfunction]
#[pyo3(signature = (m, with_power = false))]
fn renorm(m: u64, with_power: bool) -> PyResult<(f64, f64)> {
    let rs = if with_power {
        turan::renorm_sequences_with_power_even(m)
    } else {
        turan::renorm_sequences_even(m)
    }
    .map_err(py_err)?;
    Ok((rs.a_of_n, rs.delta_of_n))
}

#[pyfunction]
fn renormalized_jensen(seq: Vec<BigInt>, d: usize, n: usize, a: f64, delta: f64) -> PyResult<Vec<f64>> {
    turan::renormalized_jensen(&seq, d, n, &RenormSeq { a_of_n: a, delta_of_n: delta }).map_err(py_err)
}

#[pyfunction]
fn hermite_distance(coeffs: Vec<f64>, d: usize) -> f64 {
    turan::hermite_distance(&coeffs, d)
}

/// Turán-type report for `order` in `"2"`, `"3"`, `"convexity"`.
#[pyclass(frozen, module = "bgrank_py")]
struct TuranReport {
    #[pyo3(get)]
    order: String,
    #[pyo3(get)]
    all_hold: bool,
    #[pyo3(get)]
    failures: Vec<(usize, Option<usize>)>,
    #[pyo3(get)]
    equalities: Vec<(usize, Option<usize>)>,
    #[pyo3(get)]
    checked: usize,
}

#[pymethods]
impl TuranReport {
    fn __repr__(&self) -> String {
        format!(
            "TuranReport(order={:?}, checked={}, all_hold={}, failures={:?})",
            self.order, self.checked, self.all_hold, self.failures
        )
    }
}

#[pyfunction]
fn turan_report(seq: Vec<BigInt>, order: &str, lo: usize, hi: usize) -> PyResult<TuranReport> {
    let order: TuranOrder = order.parse().map_err(py_err)?;
    let r = turan::turan_report(&seq, order, lo, hi).map_err(py_err)?;
    Ok(TuranReport {
        order: order.to_string(),
        all_hold: r.all_hold(),
        failures: r.failures().map(|row| (row.m, row.m2)).collect(),
        equalities: r.equalities().map(|row| (row.m, row.m2)).collect(),
        checked: r.rows.len(),
    })
}

/// Printed leading term for `p̄_0(a,b;n)` (`b > 1`) or `p̄_0(n)` (`b = 1`).
#[pyfunction]
#[pyo3(signature = (n, b = 1))]
fn main_term(n: u64, b: usize) -> PyResult<f64> {
    let source = if b == 1 { MainTermSource::Total } else { MainTermSource::Equidistributed };
    Ok(asymptotics::main_term(n, b, source).map_err(py_err)?.value)
}

/// Wright's expansion of `p̄_0(a,b;n)` with `terms` correction terms.
#[pyfunction]
#[pyo3(signature = (n, b = 1, terms = 1))]
fn wright_asymptotic(n: u64, b: usize, terms: usize) -> PyResult<f64> {
    asymptotics::wright_asymptotic(n, &WrightParams::bg_rank(b), terms).map_err(py_err)
}

#[pyfunction]
fn wright_coefficient(j: usize, r: usize, a: f64, b: f64) -> PyResult<f64> {
    asymptotics::wright_coefficient(j, r, a, b).map_err(py_err)
}

#[pyfunction]
fn wright_bg_constant() -> f64 {
    asymptotics::wright_bg_constant()
}

#[pyfunction]
fn printed_bg_constant() -> f64 {
    asymptotics::printed_bg_constant()
}

#[pyfunction]
fn dilog_identity_residual(r: i64, b: usize) -> PyResult<f64> {
    asymptotics::dilog_identity_residual(asymptotics::root_of_unity(r, b)).map_err(py_err)
}

/// `(inequality_holds, max_minor_to_major_ratio, passed)` for modulus `b`.
#[pyfunction]
#[pyo3(signature = (b, j = 0))]
fn arc_dominance(b: usize, j: i64) -> PyResult<(bool, f64, bool)> {
    let r = asymptotics::arc_dominance_check_for(j, b).map_err(py_err)?;
    Ok((r.inequality_holds(), r.max_ratio(), r.passed()))
}

#[pymodule]
fn bgrank_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Partition>()?;
    m.add_class::<TuranReport>()?;
    m.add_function(wrap_pyfunction!(littlewood_compose, m)?)?;
    m.add_function(wrap_pyfunction!(partitions, m)?)?;
    m.add_function(wrap_pyfunction!(bg_core_size, m)?)?;
    m.add_function(wrap_pyfunction!(p_values, m)?)?;
    m.add_function(wrap_pyfunction!(p2_values, m)?)?;
    m.add_function(wrap_pyfunction!(pbar_values, m)?)?;
    m.add_function(wrap_pyfunction!(pbar_abn_values, m)?)?;
    m.add_function(wrap_pyfunction!(pbar_abn_all_values, m)?)?;
    m.add_function(wrap_pyfunction!(joint_table, m)?)?;
    m.add_function(wrap_pyfunction!(jensen_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(is_hyperbolic, m)?)?;
    m.add_function(wrap_pyfunction!(real_root_count, m)?)?;
    m.add_function(wrap_pyfunction!(hermite, m)?)?;
    m.add_function(wrap_pyfunction!(hyperbolicity_scan, m)?)?;
    m.add_function(wrap_pyfunction!(renorm, m)?)?;
    m.add_function(wrap_pyfunction!(renormalized_jensen, m)?)?;
    m.add_function(wrap_pyfunction!(hermite_distance, m)?)?;
    m.add_function(wrap_pyfunction!(turan_report, m)?)?;
    m.add_function(wrap_pyfunction!(main_term, m)?)?;
    m.add_function(wrap_pyfunction!(wright_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(wright_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(wright_bg_constant, m)?)?;
    m.add_function(wrap_pyfunction!(printed_bg_constant, m)?)?;
    m.add_function(wrap_pyfunction!(dilog_identity_residual, m)?)?;
    m.add_function(wrap_pyfunction!(arc_dominance, m)?)?;
    Ok(())
}
