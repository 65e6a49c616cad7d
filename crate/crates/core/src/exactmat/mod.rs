//! Exact dense matrices, minors and the shared matrix text format.

mod matrix;
mod minors;
mod special;
mod text;

pub use matrix::Matrix;
pub use minors::{enumerate_minors, index_sets, minor, minor_count, MinorIndex, Minors};
pub use special::{all_ones, build_special, exchange, identity, unit, vandermonde, SpecialKind};
pub(crate) use text::{content_lines, parse_body, parse_dims, parse_entry};
pub use text::{format_matrix, parse_matrix};
