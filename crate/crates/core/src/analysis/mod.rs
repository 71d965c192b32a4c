//! Pareto frontiers, descriptor statistics and report emission.

mod aggregate;
mod descriptors;
mod pareto;
mod plot;
mod report;

pub use aggregate::{aggregate, Report, SystemRow};
pub use descriptors::{descriptor_frequency, FrequencyTable, DEFAULT_TOP_K};
pub use pareto::{frontier_indices, pareto_frontier, SystemPoint};
pub use plot::{emit_plot_data, PlotData};
pub use report::{build_report, examples_csv, write_report, ReportBundle, ReportOptions, DEFAULT_X_COLUMN};
