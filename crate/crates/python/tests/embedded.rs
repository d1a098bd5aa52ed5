use std::ffi::CString;

use pyo3::prelude::*;
use wordeq_py::wordeq_module;

#[test]
fn smoke_script_runs_in_embedded_interpreter() {
    pyo3::append_to_inittab!(wordeq_module);
    Python::initialize();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../python/smoke_test.py");
    let source = std::fs::read_to_string(path).unwrap();
    Python::attach(|py| {
        let code = CString::new(source).unwrap();
        let module = PyModule::from_code(py, &code, c"smoke_test.py", c"smoke_test").unwrap();
        module.getattr("main").unwrap().call0().unwrap();
    });
}
