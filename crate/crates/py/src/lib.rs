//! Python bindings: a `Record` class around the input document plus the
//! staged analysis, reconstruction and family search entry points. Reports
//! cross the boundary as JSON or text strings together with the exit code
//! the command line would have used.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use split3::algebra::DEFAULT_NODE_BUDGET;
use split3::fixtures;
use split3::io::{parse_input, render_ternary, AlgebraRecord, InputDoc};
use split3::pipeline::{analyze, masa_search_report, reconstruct_report, AnalysisOptions, Stage};
use split3::report::Report;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rendered(report: &Report, format: &str) -> PyResult<(String, u8)> {
    let text = match format {
        "json" => report.to_json_string(),
        "text" => report.to_text(),
        "dot" => report
            .graph()
            .map(str::to_owned)
            .unwrap_or_else(|| "graph roots {\n}\n".into()),
        other => return Err(err(format!("unknown format {other:?}"))),
    };
    Ok((text, report.exit_code()))
}

/// One algebra record: a ternary system ready for analysis, or a binary
/// one ready for reconstruction.
#[pyclass]
struct Record {
    doc: InputDoc,
}

impl Record {
    fn ternary(&self) -> PyResult<&split3::algebra::GradedAlgebra> {
        self.doc
            .ternary()
            .ok_or_else(|| err("this record is binary; use reconstruct()"))
    }
}

#[pymethods]
impl Record {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Record {
            doc: parse_input(text).map_err(err)?,
        })
    }

    /// Loads one of the bundled example records by name.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        let f = fixtures::fixture(name)
            .ok_or_else(|| err(format!("unknown fixture {name:?}")))?;
        Record::new(f.text)
    }

    #[getter]
    fn arity(&self) -> usize {
        if self.doc.ternary().is_some() {
            3
        } else {
            2
        }
    }

    #[getter]
    fn dimension(&self) -> usize {
        match &self.doc.record {
            AlgebraRecord::Ternary(a) => a.dim(),
            AlgebraRecord::Binary(b) => b.dim(),
        }
    }

    #[getter]
    fn flavor(&self) -> Option<String> {
        self.doc.ternary().map(|a| a.flavor().as_str().to_owned())
    }

    #[getter]
    fn basis(&self) -> Vec<String> {
        match &self.doc.record {
            AlgebraRecord::Ternary(a) => a.basis_names().to_vec(),
            AlgebraRecord::Binary(b) => b.basis_names.clone(),
        }
    }

    /// Coefficients of the product of three basis elements, as exact
    /// scalar strings.
    fn bracket(&self, i: usize, j: usize, k: usize) -> PyResult<Vec<String>> {
        let a = self.ternary()?;
        let n = a.dim();
        if i >= n || j >= n || k >= n {
            return Err(err(format!("index out of range for dimension {n}")));
        }
        Ok(a.bracket_unit(i, j, k)
            .iter()
            .map(|c| c.to_string())
            .collect())
    }

    /// Runs the analysis stages and returns (report, exit_code).
    #[pyo3(signature = (upto = "lpass", wide = false, via_dehom = None, format = "json"))]
    fn analyze(
        &self,
        upto: &str,
        wide: bool,
        via_dehom: Option<bool>,
        format: &str,
    ) -> PyResult<(String, u8)> {
        self.ternary()?;
        let stage = Stage::parse(upto).ok_or_else(|| err(format!("unknown stage {upto:?}")))?;
        let opts = AnalysisOptions {
            upto: stage,
            wide,
            via_dehom,
            node_budget: DEFAULT_NODE_BUDGET,
            masa_override: None,
        };
        rendered(&analyze(&self.doc, &opts), format)
    }

    /// Rebuilds a ternary product from a binary record; (report, exit_code).
    #[pyo3(signature = (format = "json"))]
    fn reconstruct(&self, format: &str) -> PyResult<(String, u8)> {
        if self.doc.binary().is_none() {
            return Err(err("this record is ternary; use analyze()"));
        }
        rendered(&reconstruct_report(&self.doc), format)
    }

    /// Searches for a maximal abelian operator family; (report, exit_code).
    #[pyo3(signature = (format = "json"))]
    fn masa_search(&self, format: &str) -> PyResult<(String, u8)> {
        self.ternary()?;
        rendered(&masa_search_report(&self.doc), format)
    }

    /// The twisted counterpart: the designated map folded into the product.
    fn homify(&self) -> PyResult<Record> {
        let h = self.ternary()?.homify().map_err(err)?;
        Ok(self.with_algebra(h))
    }

    /// Unfolds the twist again; inverse of homify.
    fn dehomify(&self) -> PyResult<Record> {
        let p = self.ternary()?.dehomify().map_err(err)?;
        Ok(self.with_algebra(p))
    }

    /// Canonical JSON form of a ternary record.
    fn render(&self) -> PyResult<String> {
        Ok(render_ternary(self.ternary()?).to_string())
    }

    fn __repr__(&self) -> String {
        match &self.doc.record {
            AlgebraRecord::Ternary(a) => format!(
                "Record(arity=3, dim={}, flavor={})",
                a.dim(),
                a.flavor().as_str()
            ),
            AlgebraRecord::Binary(b) => format!("Record(arity=2, dim={})", b.dim()),
        }
    }
}

impl Record {
    fn with_algebra(&self, a: split3::algebra::GradedAlgebra) -> Record {
        Record {
            doc: InputDoc {
                record: AlgebraRecord::Ternary(a),
                masa: self.doc.masa.clone(),
                hints: self.doc.hints.clone(),
                options: self.doc.options,
            },
        }
    }
}

/// Names and summaries of the bundled example records.
#[pyfunction]
fn fixture_list() -> Vec<(String, String)> {
    fixtures::FIXTURES
        .iter()
        .map(|f| (f.name.to_owned(), f.summary.to_owned()))
        .collect()
}

/// Raw JSON text of a bundled record.
#[pyfunction]
fn fixture_text(name: &str) -> PyResult<String> {
    fixtures::fixture(name)
        .map(|f| f.text.to_owned())
        .ok_or_else(|| err(format!("unknown fixture {name:?}")))
}

#[pymodule]
fn split3_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Record>()?;
    m.add_function(wrap_pyfunction!(fixture_list, m)?)?;
    m.add_function(wrap_pyfunction!(fixture_text, m)?)?;
    Ok(())
}
