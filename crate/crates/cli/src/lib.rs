//! Library side of the `mzi-opt` command line tool: scenario files, figure
//! presets and CSV output.

pub mod presets;
pub mod run;
pub mod scenario;

pub use run::{evaluate_scenario, run_to, Failure, Row, Summary};
pub use scenario::{Scenario, Setting, Violation};
