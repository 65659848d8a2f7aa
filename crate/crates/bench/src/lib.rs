//! Benchmark harness for the crack segmenters in `crackseg`.
//!
//! [`run_benchmark`] runs the selected methods over a dataset manifest, times
//! each prediction, scores it with plain and BPM metrics and aggregates one
//! [`MethodRow`] per method. Masks, a per-patch JSON sidecar, the report and
//! optional overlays are written to the output directory.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod method;
pub mod overlay;
pub mod report;
pub mod run;

pub use dataset::write_synthetic_dataset;
pub use error::{BenchError, Result};
pub use eval::{evaluate_dirs, EvalRecord};
pub use method::{parse_methods, Method};
pub use overlay::{emit_overlay, render_overlay};
pub use report::{emit_report, load_report_csv, MethodRow, ReportFormat};
pub use run::{
    run_benchmark, run_benchmark_detailed, Calibration, PatchRecord, RunConfig, RunOutput,
    SamplerChoice,
};
