//! Configuration documents, path files and plot-ready tables.

mod config;
mod path_file;
mod tables;

pub use config::{parse_config, ModelConfig, PathFormat, RunConfig};
pub use path_file::{read_path, read_path_file, write_path, MAGIC, VERSION};
pub use tables::{write_autocov_csv, write_coeffs_csv, write_density_csv, write_shells_csv};
