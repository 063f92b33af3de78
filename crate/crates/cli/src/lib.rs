//! Front end for the wedge billiard toolkit: launch parsing, CSV/JSON
//! export and SVG plots.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod export;
pub mod launch;
pub mod plot;

pub use error::CliError;
pub use export::{export_trajectory, read_json, Format};
pub use launch::{Launch, LaunchOptions};
pub use plot::{render_plot, PlotData};
