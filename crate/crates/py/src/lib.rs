//! Python bindings. Field elements cross the boundary as integer codes
//! `c0 + c1 p + ... + c_{n-1} p^{n-1}` in the coordinates of the field basis.

use std::sync::Arc;

use invforge::action::GroupElem;
use invforge::construct::{compute_phi, InvariantSet};
use invforge::oracle::{compare, GroupTag};
use invforge::report::{parse_checks, run_verify, RunConfig};
use invforge::sagbi::{subduct as subduct_poly, GenSet};
use invforge::{Error, FieldCtx, GfElem, Poly, Var};
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: Error) -> PyErr {
    match e {
        Error::DivisionByZero => PyZeroDivisionError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Field", module = "invforge", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyField {
    ctx: Arc<FieldCtx>,
}

impl PyField {
    fn elem(&self, code: u32) -> PyResult<GfElem> {
        self.ctx.from_code(code).map_err(err)
    }
}

#[pymethods]
impl PyField {
    /// `F_{p^n}`; raises `ValueError` for p = 2, non-primes or q above the cap.
    #[new]
    #[pyo3(signature = (p, n = 1, max_q = None))]
    fn new(p: i64, n: i64, max_q: Option<u64>) -> PyResult<Self> {
        let ctx = match max_q {
            Some(cap) => FieldCtx::with_cap(p, n, cap),
            None => FieldCtx::new(p, n),
        }
        .map_err(err)?;
        Ok(PyField { ctx: Arc::new(ctx) })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.ctx.p()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.ctx.n()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.ctx.q()
    }

    /// Coefficients of the defining polynomial, constant term first.
    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.ctx.modulus().to_vec()
    }

    #[getter]
    fn omega(&self) -> u32 {
        self.ctx.omega().code()
    }

    fn elements(&self) -> Vec<u32> {
        self.ctx.enumerate().into_iter().map(GfElem::code).collect()
    }

    fn residues(&self) -> Vec<u32> {
        self.ctx.residues().into_iter().map(GfElem::code).collect()
    }

    fn nonresidues(&self) -> Vec<u32> {
        self.ctx.nonresidues().into_iter().map(GfElem::code).collect()
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.ctx.add(self.elem(a)?, self.elem(b)?).code())
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.ctx.mul(self.elem(a)?, self.elem(b)?).code())
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        Ok(self.ctx.inv(self.elem(a)?).map_err(err)?.code())
    }

    fn format(&self, a: u32) -> PyResult<String> {
        Ok(self.ctx.format(self.elem(a)?))
    }

    /// Polynomial from text such as `"a1^2 + 2*a0*a2"`.
    fn poly(&self, text: &str) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: Poly::parse(&self.ctx, text).map_err(err)? })
    }

    /// The coordinate `a0`, `a1` or `a2`.
    fn var(&self, name: &str) -> PyResult<PyPoly> {
        let v = Var::ALL
            .into_iter()
            .find(|v| v.name() == name)
            .ok_or_else(|| PyValueError::new_err(format!("unknown variable '{name}'")))?;
        Ok(PyPoly { inner: Poly::var(&self.ctx, v) })
    }

    fn __repr__(&self) -> String {
        format!("Field(p={}, n={}, q={})", self.ctx.p(), self.ctx.n(), self.ctx.q())
    }
}

#[pyclass(name = "Poly", module = "invforge", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyPoly {
    inner: Poly,
}

#[pymethods]
impl PyPoly {
    #[staticmethod]
    fn from_json(field: &PyField, s: &str) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: Poly::from_json(&field.ctx, s).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField { ctx: self.inner.ctx().clone() }
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn degree(&self) -> Option<u32> {
        self.inner.degree()
    }

    fn num_terms(&self) -> usize {
        self.inner.num_terms()
    }

    /// `[(e0, e1, e2), coeff_code]` in descending grevlex order.
    fn terms(&self) -> Vec<((u32, u32, u32), u32)> {
        self.inner.terms().map(|(m, c)| ((m.exps[0], m.exps[1], m.exps[2]), c.code())).collect()
    }

    fn lead_monomial(&self) -> PyResult<(u32, u32, u32)> {
        let m = self.inner.lead_monomial().map_err(err)?;
        Ok((m.exps[0], m.exps[1], m.exps[2]))
    }

    /// Weight mod q - 1, or `None` when the terms disagree.
    fn weight(&self) -> Option<u32> {
        self.inner.is_isobaric().map(|w| w.value())
    }

    fn exact_divide(&self, other: &PyPoly) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: self.inner.exact_divide(&other.inner).map_err(err)? })
    }

    fn __add__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: self.inner.try_add(&other.inner).map_err(err)? })
    }

    fn __sub__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: self.inner.try_sub(&other.inner).map_err(err)? })
    }

    fn __mul__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: self.inner.try_mul(&other.inner).map_err(err)? })
    }

    fn __neg__(&self) -> PyPoly {
        PyPoly { inner: -&self.inner }
    }

    fn __pow__(&self, e: u32, modulo: Option<Py<PyAny>>) -> PyResult<PyPoly> {
        if modulo.is_some() {
            return Err(PyValueError::new_err("modular exponentiation is not supported"));
        }
        Ok(PyPoly { inner: self.inner.pow(e) })
    }

    fn __eq__(&self, other: &PyPoly) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.inner.to_text())
    }
}

#[pyclass(name = "GroupElem", module = "invforge", frozen)]
pub struct PyGroupElem {
    inner: GroupElem,
}

#[pymethods]
impl PyGroupElem {
    /// `[[a, b], [c, d]]` with codes; must be invertible.
    #[new]
    fn new(field: &PyField, m: [[u32; 2]; 2]) -> PyResult<PyGroupElem> {
        let e = |c| field.elem(c);
        let mat = [[e(m[0][0])?, e(m[0][1])?], [e(m[1][0])?, e(m[1][1])?]];
        Ok(PyGroupElem { inner: GroupElem::new(&field.ctx, mat).map_err(err)? })
    }

    #[staticmethod]
    fn sigma(field: &PyField, c: u32) -> PyResult<PyGroupElem> {
        Ok(PyGroupElem { inner: GroupElem::sigma(&field.ctx, field.elem(c)?) })
    }

    #[staticmethod]
    fn rho(field: &PyField, w: u32) -> PyResult<PyGroupElem> {
        Ok(PyGroupElem { inner: GroupElem::rho(&field.ctx, field.elem(w)?).map_err(err)? })
    }

    #[staticmethod]
    fn tau(field: &PyField) -> PyGroupElem {
        PyGroupElem { inner: GroupElem::tau(&field.ctx) }
    }

    fn matrix(&self) -> [[u32; 2]; 2] {
        self.inner.matrix().map(|r| r.map(GfElem::code))
    }

    /// Matrix on `(a2, a1, a0)`.
    fn induced(&self) -> [[u32; 3]; 3] {
        self.inner.induced().map(|r| r.map(GfElem::code))
    }

    fn compose(&self, other: &PyGroupElem) -> PyResult<PyGroupElem> {
        Ok(PyGroupElem { inner: self.inner.compose(&other.inner) })
    }

    fn apply(&self, f: &PyPoly) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: self.inner.apply(&f.inner).map_err(err)? })
    }
}

#[pyclass(name = "Invariants", module = "invforge", frozen)]
pub struct PyInvariants {
    inner: InvariantSet,
}

#[pymethods]
impl PyInvariants {
    #[new]
    fn new(field: &PyField) -> PyResult<PyInvariants> {
        Ok(PyInvariants { inner: InvariantSet::build(&field.ctx).map_err(err)? })
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField { ctx: self.inner.ctx().clone() }
    }

    #[getter]
    fn a0(&self) -> PyPoly {
        PyPoly { inner: self.inner.p.a0.clone() }
    }

    #[getter(Delta)]
    fn delta(&self) -> PyPoly {
        PyPoly { inner: self.inner.p.delta.clone() }
    }

    #[getter]
    fn beta(&self) -> PyPoly {
        PyPoly { inner: self.inner.p.beta.clone() }
    }

    #[getter]
    fn gamma0(&self) -> PyPoly {
        PyPoly { inner: self.inner.p.gamma0.clone() }
    }

    #[getter(J)]
    fn j(&self) -> PyPoly {
        PyPoly { inner: self.inner.j.clone() }
    }

    #[getter(Gamma)]
    fn big_gamma(&self) -> PyPoly {
        PyPoly { inner: self.inner.big_gamma.clone() }
    }

    #[getter(B)]
    fn b(&self) -> PyPoly {
        PyPoly { inner: self.inner.b.clone() }
    }

    fn gamma(&self, k: u32) -> PyResult<PyPoly> {
        let k = self.inner.ctx().from_code(k).map_err(err)?;
        Ok(PyPoly { inner: self.inner.gamma_k(k).clone() })
    }

    /// `{"text", "json", "uses_gamma", "subduction_steps"}` for Phi in
    /// `B^2 = Delta^q Gamma^2 + J Phi(Delta, J, Gamma)`.
    fn phi<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let phi = compute_phi(&self.inner).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("text", phi.expr.to_text())?;
        d.set_item("json", phi.expr.to_json())?;
        d.set_item("uses_gamma", phi.uses_gamma())?;
        d.set_item("subduction_steps", phi.subduction_steps)?;
        Ok(d)
    }
}

/// Subducts `f` against named generators; returns `(remainder, expression)`.
#[pyfunction]
fn subduct(f: &PyPoly, generators: Vec<(String, PyPoly)>) -> PyResult<(PyPoly, String)> {
    let gens = GenSet::new(generators.into_iter().map(|(n, p)| (n, p.inner))).map_err(err)?;
    let s = subduct_poly(&f.inner, &gens).map_err(err)?;
    Ok((PyPoly { inner: s.remainder }, s.expr.to_text()))
}

/// Runs the verification checks; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (p, n = 1, checks = None, max_degree = None, timing = false))]
fn verify<'py>(
    py: Python<'py>,
    p: i64,
    n: i64,
    checks: Option<&str>,
    max_degree: Option<u32>,
    timing: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let mut cfg = RunConfig::new(p, n);
    cfg.max_degree = max_degree;
    cfg.timing = timing;
    if let Some(list) = checks {
        cfg.checks = parse_checks(list).map_err(err)?;
    }
    let report = py.detach(|| run_verify(&cfg)).map_err(err)?;
    let out = PyDict::new(py);
    let config = PyDict::new(py);
    config.set_item("p", report.config.p)?;
    config.set_item("n", report.config.n)?;
    config.set_item("q", report.config.q)?;
    config.set_item("max_degree", report.config.max_degree)?;
    out.set_item("config", config)?;
    let list = PyList::empty(py);
    for c in &report.checks {
        let d = PyDict::new(py);
        d.set_item("name", &c.name)?;
        d.set_item("paper_anchor", &c.paper_anchor)?;
        d.set_item("pass", c.pass)?;
        d.set_item("detail", &c.detail)?;
        list.append(d)?;
    }
    out.set_item("checks", list)?;
    out.set_item("pass", report.pass())?;
    out.set_item("elapsed_ms", report.elapsed_ms)?;
    Ok(out)
}

/// `[(degree, observed, predicted)]` for group `"P"` or `"SL2"`.
#[pyfunction]
fn hilbert(field: &PyField, group: &str, max_degree: u32) -> PyResult<Vec<(u32, u64, u64)>> {
    let tag = match group {
        "P" => GroupTag::P,
        "SL2" => GroupTag::SL2,
        _ => return Err(PyValueError::new_err(format!("unknown group '{group}', expected 'P' or 'SL2'"))),
    };
    let table = compare(&field.ctx, tag, max_degree).map_err(err)?;
    Ok(table.rows.iter().map(|r| (r.degree, r.observed, r.predicted)).collect())
}

#[pymodule]
#[pyo3(name = "invforge")]
fn invforge_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyPoly>()?;
    m.add_class::<PyGroupElem>()?;
    m.add_class::<PyInvariants>()?;
    m.add_function(wrap_pyfunction!(subduct, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert, m)?)?;
    Ok(())
}
