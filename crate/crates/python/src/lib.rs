//! Python bindings. Rationals cross the boundary as `"num/den"` strings.

use airy_hodge as ah;
use ah::arith::{parse_rational, Rational};
use ah::connection::Space;
use ah::hodge::PoleVariant;
use ah::{Error, Limits};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    match e.exit_code() {
        3 => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn strings(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn parse_space(s: &str) -> PyResult<Space> {
    match s {
        "a1" => Ok(Space::A1),
        "gm" => Ok(Space::Gm),
        "mid" => Ok(Space::Mid),
        _ => Err(PyValueError::new_err(format!("unknown space {s:?}; use a1, gm or mid"))),
    }
}

/// A table of irregular Hodge numbers.
#[pyclass(frozen)]
struct HodgeTable {
    inner: ah::hodge::HodgeTable,
}

#[pymethods]
impl HodgeTable {
    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    #[getter]
    fn family(&self) -> String {
        self.inner.family.to_string()
    }

    #[getter]
    fn weight(&self) -> usize {
        self.inner.weight
    }

    /// `[(p, q, h), ...]` sorted by `p`.
    #[getter]
    fn entries(&self) -> Vec<(String, String, usize)> {
        self.inner
            .entries
            .iter()
            .map(|e| (e.p.to_string(), e.q.to_string(), e.h))
            .collect()
    }

    fn total(&self) -> usize {
        self.inner.total()
    }

    fn is_symmetric(&self) -> bool {
        self.inner.is_symmetric()
    }

    fn spectrum(&self) -> String {
        ah::hodge::hodge_polynomial(&self.inner).to_string()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("table serializes")
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn to_latex(&self) -> String {
        self.inner.to_latex()
    }

    fn __len__(&self) -> usize {
        self.inner.entries.len()
    }

    fn __repr__(&self) -> String {
        format!("HodgeTable(k={}, family={}, entries={})", self.inner.k, self.inner.family, self.inner.entries.len())
    }
}

/// `Sym^k` of the order-`n` Airy connection.
#[pyclass(frozen)]
struct ConnectionModule {
    inner: ah::connection::ConnectionModule,
}

#[pymethods]
impl ConnectionModule {
    #[new]
    #[pyo3(signature = (n, k, rho = "0"))]
    fn new(n: usize, k: usize, rho: &str) -> PyResult<Self> {
        let rho = parse_rational(rho).map_err(err)?;
        Ok(Self {
            inner: ah::connection::build_symk(n, k, &rho).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels()
    }

    /// Cohomology dimension by exact elimination: `(dim, truncation used)`.
    #[pyo3(signature = (space = "a1"))]
    fn h1_dim(&self, space: &str) -> PyResult<(usize, usize)> {
        let d = ah::connection::h1_dim_bruteforce(&self.inner, parse_space(space)?, &Limits::default()).map_err(err)?;
        Ok((d.dim, d.truncation_used))
    }
}

#[pyfunction]
fn s_nk(n: usize, k: usize) -> PyResult<usize> {
    ah::moments::s_nk(n, k).map_err(err)
}

#[pyfunction]
fn irr(n: usize, k: usize) -> PyResult<String> {
    Ok(ah::moments::irr(n, k).map_err(err)?.to_string())
}

/// `(dim H^1, dim H^1_mid)`.
#[pyfunction]
fn h1_dims(n: usize, k: usize) -> PyResult<(usize, usize)> {
    let d = ah::moments::h1_dims(n, k).map_err(err)?;
    Ok((d.all, d.mid))
}

#[pyfunction]
#[pyo3(signature = (n, k, space = "a1", rho = "0"))]
fn h1_dim_bruteforce(n: usize, k: usize, space: &str, rho: &str) -> PyResult<usize> {
    ConnectionModule::new(n, k, rho)?.h1_dim(space).map(|d| d.0)
}

#[pyfunction]
#[pyo3(signature = (k, mid = false))]
fn hodge_numbers(k: usize, mid: bool) -> PyResult<HodgeTable> {
    let t = ah::hodge::hodge_numbers(k).map_err(err)?;
    Ok(HodgeTable {
        inner: if mid { t.mid } else { t.full },
    })
}

#[pyfunction]
fn tilde_mid_hodge(k: usize) -> PyResult<HodgeTable> {
    Ok(HodgeTable {
        inner: ah::hodge::tilde_mid_hodge(k).map_err(err)?,
    })
}

/// Coefficients of `2 pi Ai Bi` at `w^{1/2 + 3j}`.
#[pyfunction]
fn aibi_series(terms: usize) -> PyResult<Vec<String>> {
    Ok(strings(&ah::asymptotics::aibi_series(terms).map_err(err)?.coeffs))
}

/// `(offset, values)`: `gamma_{k, offset + 3j}` for `j < terms`.
#[pyfunction]
fn gamma(k: usize, terms: usize) -> PyResult<(String, Vec<String>)> {
    let g = ah::asymptotics::gamma(k, terms).map_err(err)?;
    Ok((g.offset.to_string(), strings(&g.values)))
}

/// Names of the middle-cohomology basis classes.
#[pyfunction]
fn mid_basis(k: usize) -> PyResult<Vec<String>> {
    Ok(ah::asymptotics::mid_basis(k).map_err(err)?.names)
}

/// `(m, admissible, f_level)`; `variant` is plain, twisted or odd-simple.
#[pyfunction]
fn yu_pole_level(k: usize, r: usize, nu: usize, variant: &str) -> PyResult<(String, bool, String)> {
    let v = match variant {
        "plain" => PoleVariant::Plain,
        "twisted" => PoleVariant::Twisted,
        "odd-simple" => PoleVariant::OddSimple,
        _ => return Err(PyValueError::new_err(format!("unknown variant {variant:?}"))),
    };
    let y = ah::hodge::yu_pole_level(k, r, nu, v).map_err(err)?;
    Ok((y.m.to_string(), y.admissible, y.f_level.to_string()))
}

/// `(all passed, JSON report)`.
#[pyfunction]
fn verify(ks: Vec<usize>) -> PyResult<(bool, String)> {
    let r = ah::hodge::verify(&ks).map_err(err)?;
    Ok((r.passed(), serde_json::to_string(&r).expect("report serializes")))
}

#[pymodule]
fn pyairyhodge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<HodgeTable>()?;
    m.add_class::<ConnectionModule>()?;
    m.add_function(wrap_pyfunction!(s_nk, m)?)?;
    m.add_function(wrap_pyfunction!(irr, m)?)?;
    m.add_function(wrap_pyfunction!(h1_dims, m)?)?;
    m.add_function(wrap_pyfunction!(h1_dim_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(hodge_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(tilde_mid_hodge, m)?)?;
    m.add_function(wrap_pyfunction!(aibi_series, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(mid_basis, m)?)?;
    m.add_function(wrap_pyfunction!(yu_pole_level, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
