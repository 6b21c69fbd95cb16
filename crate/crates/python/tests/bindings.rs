use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module<F: FnOnce(Python<'_>, &Bound<'_, PyDict>)>(f: F) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "edgelab").unwrap();
        edgelab_py::edgelab_py(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("edgelab", m).unwrap();
        f(py, &globals);
    });
}

fn run(py: Python<'_>, globals: &Bound<'_, PyDict>, code: &str) {
    let code = std::ffi::CString::new(code).unwrap();
    if let Err(e) = py.run(&code, Some(globals), None) {
        panic!("python error: {e}");
    }
}

#[test]
fn special_functions_from_python() {
    with_module(|py, g| {
        run(py, g, "ai, aip = edgelab.airy(0.0)\nassert abs(ai - 0.355028053887817) < 1e-14\nassert abs(edgelab.f_beta(0.0, 0.0) - 0.822467033424113) < 1e-12");
    });
}

#[test]
fn ensemble_routes_from_python() {
    with_module(|py, g| {
        run(
            py,
            g,
            "eq = edgelab.Equilibrium([2.0, 4.0, 2.0])\n\
             a = edgelab.log_lstat(eq, 8, 0.5)\n\
             b = edgelab.log_lstat(eq, 8, 0.5, route='det')\n\
             assert abs(a - b) < 1e-8\n\
             e = edgelab.Ensemble(eq, 8, 0.5)\n\
             assert e.n == 8 and len(e.log_h()) == 8",
        );
    });
}

#[test]
fn errors_map_to_python_exceptions() {
    with_module(|py, g| {
        run(
            py,
            g,
            "try:\n    edgelab.airy(500.0)\nexcept ValueError:\n    pass\nelse:\n    raise AssertionError('no error')\n\
             try:\n    edgelab.log_lstat(edgelab.Equilibrium([0.0, 0.0, 2.0]), 4, 0.0, route='nope')\nexcept ValueError:\n    pass\nelse:\n    raise AssertionError('no error')",
        );
    });
}

#[test]
fn studies_from_python() {
    with_module(|py, g| {
        run(
            py,
            g,
            "recs = edgelab.run_study('eqmeasure', 'potential = [0.0, 0.0, 2.0]')\n\
             cv = [r for r in recs if r['quantity'] == 'c_v'][0]\n\
             assert abs(cv['value'] - 2.0) < 1e-8\n\
             assert len(cv['config_hash']) == 16",
        );
    });
}
