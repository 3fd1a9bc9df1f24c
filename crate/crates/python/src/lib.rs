//! Python bindings. Rationals cross the boundary as `fractions.Fraction`
//! (anything whose `str()` is `p` or `p/q` is accepted on input), groups and
//! module parameters use the same text forms as the command-line tool.

#![allow(clippy::result_large_err)]

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::sync::PyOnceLock;
use pyo3::types::PyType;

use ::hvir::analysis;
use ::hvir::intermediate::{self, IsoWitness};
use ::hvir::parse::{parse_element, parse_group, parse_params};
use ::hvir::{
    ActionTable, AlgebraElement, ModuleParams, PhiVariant, Rational, RescalingMap, SubgroupSpec, WeightVector,
};

type Witness<'py> = Option<(&'static str, Option<Bound<'py, PyAny>>)>;
type Pairs<'py> = Vec<(Bound<'py, PyAny>, Bound<'py, PyAny>)>;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    obj.str()?.to_str()?.trim().parse().map_err(err)
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    static FRACTION: PyOnceLock<Py<PyType>> = PyOnceLock::new();
    FRACTION.import(py, "fractions", "Fraction")?.call1((q.to_string(),))
}

/// An additive subgroup of Q, e.g. `Group("qk:3")` or `Group("sn:2^inf")`.
#[pyclass(name = "Group", frozen, skip_from_py_object, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyGroup(SubgroupSpec);

#[pymethods]
impl PyGroup {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_group(text).map(PyGroup).map_err(err)
    }

    fn contains(&self, x: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.0.contains(&rational(x)?))
    }

    fn __contains__(&self, x: &Bound<'_, PyAny>) -> PyResult<bool> {
        self.contains(x)
    }

    fn sum(&self, other: &PyGroup) -> PyGroup {
        PyGroup(self.0.sum(&other.0))
    }

    fn intersect(&self, other: &PyGroup) -> PyGroup {
        PyGroup(self.0.intersect(&other.0))
    }

    fn is_subgroup_of(&self, other: &PyGroup) -> bool {
        self.0.is_subgroup_of(&other.0)
    }

    fn rank(&self) -> u32 {
        self.0.rank()
    }

    fn finitely_generated(&self) -> bool {
        self.0.finitely_generated()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Group({:?})", self.0.to_string())
    }
}

/// An element of HVir[Q], parsed from e.g. `"d(1/2) - 3*I(-2) + CD"`.
#[pyclass(name = "Element", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PyElement(AlgebraElement);

#[pymethods]
impl PyElement {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_element(text).map(PyElement).map_err(err)
    }

    fn bracket(&self, other: &PyElement) -> PyElement {
        PyElement(self.0.bracket(&other.0))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn in_subalgebra(&self, group: &PyGroup) -> bool {
        self.0.in_subalgebra(&group.0)
    }

    /// `[("d(1/2)", Fraction(1, 1)), ...]` in canonical order.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<(String, Bound<'py, PyAny>)>> {
        self.0.terms().map(|(k, c)| Ok((k.to_string(), fraction(py, c)?))).collect()
    }

    fn __add__(&self, other: &PyElement) -> PyElement {
        PyElement(self.0.clone() + other.0.clone())
    }

    fn __sub__(&self, other: &PyElement) -> PyElement {
        PyElement(self.0.clone() - other.0.clone())
    }

    fn __neg__(&self) -> PyElement {
        PyElement(-self.0.clone())
    }

    fn __mul__(&self, c: &Bound<'_, PyAny>) -> PyResult<PyElement> {
        Ok(PyElement(self.0.scale(&rational(c)?)))
    }

    fn __rmul__(&self, c: &Bound<'_, PyAny>) -> PyResult<PyElement> {
        self.__mul__(c)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({:?})", self.0.to_string())
    }
}

/// The jacobiator `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]`.
#[pyfunction]
fn jacobiator(x: &PyElement, y: &PyElement, z: &PyElement) -> PyElement {
    PyElement(AlgebraElement::jacobiator(&x.0, &y.0, &z.0))
}

/// The rescaling map HVir[Z] -> HVir[Q_m]; `variant` is `"exact"` or `"centerless"`.
#[pyfunction]
#[pyo3(signature = (x, m, variant = "exact"))]
fn apply_phi(x: &PyElement, m: u32, variant: &str) -> PyResult<PyElement> {
    let variant = match variant {
        "exact" => PhiVariant::ExactCentral,
        "centerless" => PhiVariant::Centerless,
        other => return Err(err(format!("unknown variant `{other}`"))),
    };
    let map = RescalingMap::new(m, variant).map_err(err)?;
    map.apply(&x.0).map(PyElement).map_err(err)
}

/// Module parameters `V(alpha, beta; F)` over a group, e.g. `Module("1/2,2,3@qk:3")`.
#[pyclass(name = "Module", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PyModuleParams(ModuleParams);

#[pymethods]
impl PyModuleParams {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_params(text).map(PyModuleParams).map_err(err)
    }

    #[getter]
    fn alpha<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.0.alpha())
    }

    #[getter]
    fn beta<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.0.beta())
    }

    #[getter(F)]
    fn big_f<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.0.big_f())
    }

    #[getter]
    fn group(&self) -> PyGroup {
        PyGroup(self.0.group().clone())
    }

    /// Applies `x` to the basis vector `v(at)`; returns `[(index, coefficient), ...]`.
    fn act<'py>(&self, py: Python<'py>, x: &PyElement, at: &Bound<'py, PyAny>) -> PyResult<Pairs<'py>> {
        let v = intermediate::act(&self.0, &x.0, &WeightVector::basis(rational(at)?)).map_err(err)?;
        v.entries().map(|(q, c)| Ok((fraction(py, q)?, fraction(py, c)?))).collect()
    }

    /// One of `"Irreducible"`, `"ReducibleTrivialSub"`, `"ReducibleCodimOne"`.
    fn classify(&self) -> String {
        intermediate::classify(&self.0).verdict.to_string()
    }

    /// Parameters of the pulled-back module over Z (group must be `qk:m`).
    fn pullback(&self, m: u32) -> PyResult<PyModuleParams> {
        intermediate::pullback_params(&self.0, m).map(PyModuleParams).map_err(err)
    }

    /// Dimension of the window-truncated submodule generated by `v(s)`, `s` in `seeds`.
    #[pyo3(signature = (bound, seeds, window_group = None))]
    fn closure_dim(
        &self,
        bound: u32,
        seeds: Vec<Bound<'_, PyAny>>,
        window_group: Option<&PyGroup>,
    ) -> PyResult<usize> {
        let window = self.window(bound, window_group)?;
        let seeds = seeds.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        let seeds: Vec<WeightVector> = seeds.into_iter().map(WeightVector::basis).collect();
        analysis::closure(&self.0, &window, &seeds).map(|s| s.dim()).map_err(err)
    }

    /// Empirical verdict and per-vector closure dimensions on a window.
    #[pyo3(signature = (bound, window_group = None))]
    fn reducibility_scan(
        &self,
        bound: u32,
        window_group: Option<&PyGroup>,
    ) -> PyResult<(String, Vec<usize>)> {
        let window = self.window(bound, window_group)?;
        let scan = analysis::reducibility_scan(&self.0, &window).map_err(err)?;
        Ok((scan.classification.verdict.to_string(), scan.dimensions))
    }

    /// Action table on the window, in the text format read by `recover`.
    fn table(&self, bound: u32) -> PyResult<String> {
        let window = self.window(bound, None)?;
        ActionTable::of_module(&self.0, &window).map(|t| t.to_text()).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Module({:?})", self.0.to_string())
    }
}

impl PyModuleParams {
    fn window(&self, bound: u32, group: Option<&PyGroup>) -> PyResult<analysis::Window> {
        let group = group.map_or_else(|| self.0.group().clone(), |g| g.0.clone());
        analysis::Window::new(group, bound).map_err(err)
    }
}

/// `None` if the irreducible subquotients differ, else the witness:
/// `("shift", g)`, `("swap", None)` or `("density", g)`.
#[pyfunction]
fn iso_check<'py>(py: Python<'py>, p1: &PyModuleParams, p2: &PyModuleParams) -> PyResult<Witness<'py>> {
    Ok(match intermediate::iso_check(&p1.0, &p2.0).map_err(err)? {
        None => None,
        Some(IsoWitness::Shift(g)) => Some(("shift", Some(fraction(py, &g)?))),
        Some(IsoWitness::SubquotientSwap) => Some(("swap", None)),
        Some(IsoWitness::DensitySwap(g)) => Some(("density", Some(fraction(py, &g)?))),
    })
}

/// Recovers `(Module, [(index, scale), ...])` from an action table in text form.
#[pyfunction]
fn recover<'py>(py: Python<'py>, table: &str) -> PyResult<(PyModuleParams, Pairs<'py>)> {
    let table: ActionTable = table.parse().map_err(err)?;
    let rec = analysis::recover_params(&table).map_err(err)?;
    let scales =
        rec.scales.iter().map(|(q, c)| Ok((fraction(py, q)?, fraction(py, c)?))).collect::<PyResult<_>>()?;
    Ok((PyModuleParams(rec.params), scales))
}

#[pymodule]
fn hvir(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyElement>()?;
    m.add_class::<PyModuleParams>()?;
    m.add_function(wrap_pyfunction!(jacobiator, m)?)?;
    m.add_function(wrap_pyfunction!(apply_phi, m)?)?;
    m.add_function(wrap_pyfunction!(iso_check, m)?)?;
    m.add_function(wrap_pyfunction!(recover, m)?)?;
    Ok(())
}
