//! Python bindings for `stepup-core`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use stepup_core::certificate::extract_edge_with;
use stepup_core::verification::greedy_independent_lower_bound;
use stepup_core::{
    Color, Error, HypergraphView, LayerParams, OrderedTuple, PairColoring, PhiCheck,
};

fn err(e: Error) -> PyErr {
    match e {
        Error::InternalInconsistency(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn color_name(c: Color) -> &'static str {
    match c {
        Color::Red => "red",
        Color::Blue => "blue",
    }
}

fn parse_color(name: &str) -> PyResult<Color> {
    match name {
        "red" => Ok(Color::Red),
        "blue" => Ok(Color::Blue),
        _ => Err(PyValueError::new_err(format!(
            "color must be 'red' or 'blue', got {name:?}"
        ))),
    }
}

fn tuple(vertices: Vec<u64>) -> PyResult<OrderedTuple> {
    OrderedTuple::new(vertices).map_err(err)
}

/// Red/blue coloring of the pairs of `0..universe`.
#[pyclass(name = "PairColoring", eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPairColoring(PairColoring);

#[pymethods]
impl PyPairColoring {
    /// All-red coloring, or the one whose pair bits are `code`.
    #[new]
    #[pyo3(signature = (universe, code=None))]
    fn new(universe: usize, code: Option<u64>) -> PyResult<Self> {
        if universe < 2 {
            return Err(PyValueError::new_err("universe must be at least 2"));
        }
        Ok(Self(match code {
            Some(c) if universe * (universe - 1) / 2 > 64 => {
                return Err(PyValueError::new_err(format!(
                    "code {c} given for {universe} points, which have more than 64 pairs"
                )))
            }
            Some(c) => PairColoring::from_code(universe, c),
            None => PairColoring::uniform(universe, Color::Red),
        }))
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(err)
    }

    #[staticmethod]
    fn random(universe: usize, seed: u64) -> Self {
        let mut rng = stepup_core::coloring::trial_rng(seed, 0);
        Self(PairColoring::random(universe, &mut rng))
    }

    #[getter]
    fn universe(&self) -> usize {
        self.0.universe()
    }

    fn color(&self, x: usize, y: usize) -> PyResult<&'static str> {
        self.0.color(x, y).map(color_name).map_err(err)
    }

    fn set_color(&mut self, x: usize, y: usize, color: &str) -> PyResult<()> {
        self.0.set_color(x, y, parse_color(color)?).map_err(err)
    }

    fn swapped(&self) -> Self {
        Self(self.0.swapped())
    }

    fn hex(&self) -> String {
        self.0.to_hex()
    }

    fn to_text(&self) -> String {
        self.0.to_string()
    }

    fn is_good_triple(&self, x: usize, y: usize, z: usize) -> PyResult<bool> {
        self.0.is_good_triple(x, y, z).map_err(err)
    }

    fn find_good_triple(&self, values: Vec<usize>) -> PyResult<Option<[usize; 3]>> {
        self.0.find_good_triple(&values).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "PairColoring(universe={}, hex='{}')",
            self.0.universe(),
            self.0.to_hex()
        )
    }
}

/// The 4-graph on `0..2^width` defined by a pair coloring.
#[pyclass(name = "Hypergraph")]
struct PyHypergraph(HypergraphView);

#[pymethods]
impl PyHypergraph {
    #[new]
    fn new(width: u32, coloring: PyRef<'_, PyPairColoring>) -> PyResult<Self> {
        HypergraphView::new(width, coloring.0.clone())
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn width(&self) -> u32 {
        self.0.width()
    }

    #[getter]
    fn vertex_count(&self) -> u64 {
        self.0.vertex_count()
    }

    /// Rule tag (`"I"`, `"II"`, `"III"`) if the increasing quad is an edge.
    fn edge(&self, quad: Vec<u64>) -> PyResult<Option<&'static str>> {
        Ok(self.0.edge_predicate(&quad).map_err(err)?.map(|r| r.tag()))
    }

    #[pyo3(signature = (cap=4096))]
    fn edges(&self, cap: u64) -> PyResult<Vec<([u64; 4], &'static str)>> {
        let edges = self.0.materialize(cap).map_err(err)?;
        Ok(edges.into_iter().map(|e| (e.quad, e.rule.tag())).collect())
    }

    #[pyo3(signature = (cap=64))]
    fn find_k5(&self, py: Python<'_>, cap: u64) -> PyResult<Option<[u64; 5]>> {
        py.detach(|| stepup_core::find_k5(&self.0, cap))
            .map_err(err)
    }

    /// `(alpha, witness)`, exact on at most `cap` (<= 64) vertices.
    #[pyo3(signature = (cap=64))]
    fn alpha(&self, py: Python<'_>, cap: u64) -> PyResult<(usize, Vec<u64>)> {
        let r = py
            .detach(|| stepup_core::independence_number(&self.0, cap))
            .map_err(err)?;
        Ok((r.alpha, r.witness))
    }

    fn greedy_independent(&self, seed: u64) -> Vec<u64> {
        greedy_independent_lower_bound(&self.0, seed).into_vec()
    }

    fn is_independent(&self, vertices: Vec<u64>) -> PyResult<bool> {
        stepup_core::is_independent(&self.0, &tuple(vertices)?).map_err(err)
    }

    /// Edge inside the ascending vertex list, as a dict with `quad`, `rule`,
    /// `case` and the full `trace` text; `None` if the set is too small.
    #[pyo3(signature = (vertices, n, factor=None, depth=5, strict=false))]
    fn extract<'py>(
        &self,
        py: Python<'py>,
        vertices: Vec<u64>,
        n: usize,
        factor: Option<usize>,
        depth: usize,
        strict: bool,
    ) -> PyResult<Option<Bound<'py, PyDict>>> {
        let q = tuple(vertices)?;
        let params = LayerParams {
            n,
            factor: factor.unwrap_or(2 * n),
            depth,
            strict,
        };
        let trace = match extract_edge_with(&self.0, &q, &params) {
            Ok(t) => t,
            Err(Error::InsufficientSize) => return Ok(None),
            Err(e) => return Err(err(e)),
        };
        let text = trace.to_string();
        let case = text
            .lines()
            .next()
            .unwrap_or("")
            .trim_start_matches("case ")
            .to_string();
        let d = PyDict::new(py);
        d.set_item("quad", trace.edge.quad)?;
        d.set_item("rule", trace.edge.rule.tag())?;
        d.set_item("case", case)?;
        d.set_item("trace", text)?;
        Ok(Some(d))
    }
}

#[pyfunction]
fn delta(a: u64, b: u64) -> PyResult<usize> {
    stepup_core::delta(a, b).map_err(err)
}

#[pyfunction]
fn delta_profile(vertices: Vec<u64>) -> PyResult<Vec<usize>> {
    Ok(stepup_core::delta_profile(&tuple(vertices)?)
        .map_err(err)?
        .values()
        .to_vec())
}

/// `None` if every `n`-subset has a good triple, else a subset without one.
#[pyfunction]
fn verify_phi(coloring: PyRef<'_, PyPairColoring>, n: usize) -> PyResult<Option<Vec<usize>>> {
    match stepup_core::verify_phi(&coloring.0, n).map_err(err)? {
        PhiCheck::Ok => Ok(None),
        PhiCheck::Counterexample(set) => Ok(Some(set)),
    }
}

#[pyfunction]
fn search_phi(
    py: Python<'_>,
    universe: usize,
    n: usize,
    trials: u64,
    seed: u64,
) -> PyResult<Option<PyPairColoring>> {
    py.detach(|| stepup_core::random_phi_search(universe, n, trials, seed))
        .map(|o| o.map(PyPairColoring))
        .map_err(err)
}

#[pyfunction]
fn steiner(n: usize) -> PyResult<Vec<[usize; 3]>> {
    Ok(stepup_core::greedy_partial_steiner(n).map_err(err)?.triples)
}

#[pyfunction]
fn bound<'py>(py: Python<'py>, n: usize, c0: f64) -> PyResult<Bound<'py, PyDict>> {
    let r = stepup_core::probabilistic_bound(n, c0).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("c0", r.c0)?;
    d.set_item("domain", r.domain)?;
    d.set_item("triple_count", r.triple_count)?;
    d.set_item("log_expectation", r.log_expectation)?;
    d.set_item("feasible", r.feasible)?;
    Ok(d)
}

/// Runs a `stepup` command line; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn cli(args: Vec<String>) -> (i32, String, String) {
    let out = stepup_core::cli::execute(std::iter::once("stepup".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn stepup(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPairColoring>()?;
    m.add_class::<PyHypergraph>()?;
    m.add_function(wrap_pyfunction!(delta, m)?)?;
    m.add_function(wrap_pyfunction!(delta_profile, m)?)?;
    m.add_function(wrap_pyfunction!(verify_phi, m)?)?;
    m.add_function(wrap_pyfunction!(search_phi, m)?)?;
    m.add_function(wrap_pyfunction!(steiner, m)?)?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(cli, m)?)?;
    Ok(())
}
