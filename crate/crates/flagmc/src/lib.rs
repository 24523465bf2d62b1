//! File formats, sampling runs with checkpoints, plot data and reports on
//! top of `flagmc-core`.

pub mod flagfile;
pub mod output;
pub mod plot;
pub mod report;
pub mod sampling;

pub use flagfile::{read_flag, read_flag_file, write_flag, FlagError};
