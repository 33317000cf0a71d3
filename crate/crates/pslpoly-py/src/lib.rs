use ::pslpoly::analyze::{self, SearchMode};
use ::pslpoly::families::{self, Family, FamilySpec};
use ::pslpoly::psl2::{self, Flavor, PermAction};
use ::pslpoly::verify::{self, Scope};
use ::pslpoly::{ramify, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::collections::BTreeMap;

fn err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded(_) | Error::IdentityFailed(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A finite field `GF(p^e|modulus)`.
#[pyclass(frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Field(::pslpoly::Field);

#[pymethods]
impl Field {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        ::pslpoly::Field::parse(text).map(Field).map_err(err)
    }

    #[staticmethod]
    fn make(p: u64, e: u32) -> PyResult<Self> {
        ::pslpoly::Field::make(p, e).map(Field).map_err(err)
    }

    #[getter]
    fn order(&self) -> u64 {
        self.0.order()
    }

    #[getter]
    fn characteristic(&self) -> u64 {
        self.0.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Field('{}')", self.0)
    }
}

/// A univariate polynomial over a finite field.
#[pyclass(frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Poly(::pslpoly::Poly);

#[pymethods]
impl Poly {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        ::pslpoly::Poly::parse(text).map(Poly).map_err(err)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.deg()
    }

    #[getter]
    fn field(&self) -> Field {
        Field(self.0.field().clone())
    }

    /// Coefficients as element strings, lowest degree first.
    fn coeffs(&self) -> Vec<String> {
        self.0.coeffs().iter().map(|&c| self.0.field().format_elem(c)).collect()
    }

    fn derivative(&self) -> Poly {
        Poly(self.0.derivative())
    }

    fn compose(&self, inner: &Poly) -> PyResult<Poly> {
        if inner.0.field() != self.0.field() {
            return Err(err(Error::FieldMismatch));
        }
        Ok(Poly(self.0.compose(&inner.0)))
    }

    fn embed_into(&self, field: &Field) -> PyResult<Poly> {
        self.0.embed_into(&field.0).map(Poly).map_err(err)
    }

    /// Monic irreducible factors with multiplicities.
    fn factor(&self) -> Vec<(Poly, u32)> {
        self.0.factor().into_iter().map(|(g, e)| (Poly(g), e)).collect()
    }

    fn __add__(&self, other: &Poly) -> PyResult<Poly> {
        if other.0.field() != self.0.field() {
            return Err(err(Error::FieldMismatch));
        }
        Ok(Poly(&self.0 + &other.0))
    }

    fn __sub__(&self, other: &Poly) -> PyResult<Poly> {
        if other.0.field() != self.0.field() {
            return Err(err(Error::FieldMismatch));
        }
        Ok(Poly(&self.0 - &other.0))
    }

    fn __mul__(&self, other: &Poly) -> PyResult<Poly> {
        if other.0.field() != self.0.field() {
            return Err(err(Error::FieldMismatch));
        }
        Ok(Poly(&self.0 * &other.0))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.0)
    }
}

/// Build a family member; returns the polynomial and a metadata dict.
#[pyfunction]
#[pyo3(signature = (tag, field, q=None, m=None, n=None, d=None, index=None, alpha=None, beta=None))]
#[allow(clippy::too_many_arguments)]
fn family(
    tag: &str,
    field: &Field,
    q: Option<u64>,
    m: Option<u64>,
    n: Option<u64>,
    d: Option<u64>,
    index: Option<usize>,
    alpha: Option<&str>,
    beta: Option<&str>,
) -> PyResult<(Poly, BTreeMap<String, i64>)> {
    let k = &field.0;
    let missing = |name: &str| PyValueError::new_err(format!("{name} is required for tag {tag}"));
    let elem = |s: Option<&str>, name: &str| -> PyResult<::pslpoly::Fe> { k.parse_elem(s.ok_or_else(|| missing(name))?).map_err(err) };
    let q_ = || q.ok_or_else(|| missing("q"));
    let fam = match tag {
        "gen-odd" => Family::GenOdd { q: q_()?, m: m.ok_or_else(|| missing("m"))? },
        "gen-even" => Family::GenEven { q: q_()?, m: m.ok_or_else(|| missing("m"))? },
        "char3" => Family::Char3 { q: q_()?, n: n.ok_or_else(|| missing("n"))?, alpha: elem(alpha, "alpha")? },
        "char2" => Family::Char2 { q: q_()?, n: n.ok_or_else(|| missing("n"))?, alpha: elem(alpha, "alpha")? },
        "char2-footnote" => Family::Char2Footnote {
            q: q_()?,
            alpha: elem(alpha, "alpha")?,
            beta: if beta.is_some() { elem(beta, "beta")? } else { k.zero() },
        },
        "ind7" => Family::Ind7 { n: n.unwrap_or(1), alpha: elem(alpha, "alpha")? },
        "ind11" => Family::Ind11 { n: n.unwrap_or(1), alpha: elem(alpha, "alpha")? },
        "table-b" => Family::TableB { index: index.ok_or_else(|| missing("index"))? },
        "dickson" => Family::Dickson { d: d.ok_or_else(|| missing("d"))?, alpha: elem(alpha, "alpha")? },
        _ => return Err(PyValueError::new_err(format!("unknown tag '{tag}'"))),
    };
    let spec = FamilySpec::new(fam, k);
    let built = families::construct(&spec).map_err(err)?;
    let mut meta = BTreeMap::new();
    meta.insert("degree".to_string(), built.poly.deg() as i64);
    meta.insert("boundary_case".to_string(), built.boundary_case as i64);
    if let Ok(g) = families::galois_closure_data(&spec) {
        meta.insert("predicted_genus".to_string(), g.genus as i64);
        meta.insert("closure_n".to_string(), g.n as i64);
    }
    Ok((Poly(built.poly), meta))
}

/// Bijectivity on the degree-k extensions, k = 1..=max_k (`None` when over budget).
#[pyfunction]
#[pyo3(signature = (poly, max_k, budget=analyze::DEFAULT_BUDGET))]
fn permutation_profile(poly: &Poly, max_k: u32, budget: u64) -> PyResult<Vec<Option<bool>>> {
    let r = analyze::permutation_profile(&poly.0, max_k, budget).map_err(err)?;
    Ok(r.rows.into_iter().map(|row| row.bijective).collect())
}

/// A decomposition `(g, h)` with `deg h = m` over `field`, or `None`.
#[pyfunction]
#[pyo3(signature = (poly, m, field=None, exhaustive=false))]
fn decompose(poly: &Poly, m: usize, field: Option<&Field>, exhaustive: bool) -> PyResult<Option<(Poly, Poly)>> {
    let k = field.map(|f| f.0.clone()).unwrap_or_else(|| poly.0.field().clone());
    let mode = if exhaustive { SearchMode::Exhaustive } else { SearchMode::Pruned };
    let w = analyze::decompose_search(&poly.0, m, &k, mode).map_err(err)?;
    Ok(w.map(|w| (Poly(w.g), Poly(w.h))))
}

/// Counts of factorization patterns of `f(X) - c`, keyed by dash-joined degrees.
#[pyfunction]
#[pyo3(signature = (poly, field=None, samples=None, seed=0))]
fn cycle_stats(poly: &Poly, field: Option<&Field>, samples: Option<u64>, seed: u64) -> PyResult<BTreeMap<String, u64>> {
    let k = field.map(|f| f.0.clone()).unwrap_or_else(|| poly.0.field().clone());
    let s = analyze::frobenius_cycle_stats(&poly.0, &k, samples, seed).map_err(err)?;
    Ok(s.counts.iter().map(|(p, &c)| (psl2::cycle_type_label(p), c)).collect())
}

/// Rows `(order, frob, in_psl, in_pgl, count, observed fixed points, predicted)`.
#[pyfunction]
#[pyo3(signature = (q, flavor="pgammal"))]
#[allow(clippy::type_complexity)]
fn fixed_point_table(q: u64, flavor: &str) -> PyResult<Vec<(u64, u32, bool, bool, u64, BTreeMap<u64, u64>, Option<u64>)>> {
    let act = PermAction::new(q).map_err(err)?;
    let fl = Flavor::parse(flavor).map_err(err)?;
    Ok(psl2::fixed_point_table(&act, fl)
        .into_iter()
        .map(|r| (r.class.order, r.class.frob, r.class.in_psl, r.class.in_pgl, r.count, r.observed, r.predicted))
        .collect())
}

/// Genus and inertia orders for `v^q - v = w^n` over `k(w^r)`.
#[pyfunction]
fn ramification_profile(q: u64, n: u64, r: u64) -> PyResult<(i64, Vec<u64>)> {
    let pr = ramify::ramification_profile(q, n, r).map_err(err)?;
    Ok((pr.genus, pr.branch_places.iter().map(|b| b.inertia_order).collect()))
}

/// Run the self-check suite; returns `(id, passed, detail)` per check.
#[pyfunction]
#[pyo3(signature = (scope="all"))]
fn verify_paper(scope: &str) -> PyResult<Vec<(String, bool, String)>> {
    let scope = Scope::parse(scope).map_err(err)?;
    Ok(verify::run_suite(scope).into_iter().map(|c| (c.id, c.passed, c.detail)).collect())
}

#[pymodule]
fn pslpoly(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Poly>()?;
    m.add_function(wrap_pyfunction!(family, m)?)?;
    m.add_function(wrap_pyfunction!(permutation_profile, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_stats, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_point_table, m)?)?;
    m.add_function(wrap_pyfunction!(ramification_profile, m)?)?;
    m.add_function(wrap_pyfunction!(verify_paper, m)?)?;
    Ok(())
}
