//! Line-oriented text formats (`rg1`, `nt1`, `chain1`), DOT export and JSON
//! helpers.
//!
//! Every file starts with a `format <name>` header. `#` starts a comment
//! that runs to the end of the line. Declarations may appear in any order.

mod chain1;
mod dot;
mod json;
mod lexer;
mod nt1;
mod rg1;

pub use chain1::{parse_chains, serialize_chains};
pub use dot::{nt_to_dot, resolution_to_dot};
pub use json::{form_json, int_json, matrix_json};
pub use lexer::{detect_format, Format};
pub use nt1::{parse_ntgraph, serialize_ntgraph};
pub use rg1::{parse_resolution, serialize_resolution};
