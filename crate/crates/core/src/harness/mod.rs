//! Single-pass evaluation protocol, multi-seed aggregation, regret diagnostics
//! and result reporting.

mod aggregate;
mod regret;
mod report;
mod run;
pub mod synthetic;

pub use aggregate::{aggregate, Aggregate, Stat};
pub use regret::{
    batch_comparator, regret_report, total_hinge, Comparator, RegretReport, COMPARATOR_ITERATIONS,
};
pub use report::{
    emit_regret, emit_results, format_table, read_results_csv, write_curves_csv, write_regret_csv,
    write_results_csv, OutputPaths, ResultRow, CURVES_HEADER, REGRET_HEADER, RESULTS_HEADER,
};
pub use run::{checkpoints, run_online, run_seeds, seed_range, CurvePoint, RunRecord, CHECKPOINTS};
