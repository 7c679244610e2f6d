//! File formats, SVG output, run manifests and the command line for `seppack-core`.

pub use seppack_core as core;

pub mod cli;
pub mod formats;
pub mod manifest;
pub mod svg;
