//! System files, reports and the `discvar` command line on top of
//! `discvar-core`.

pub mod cli;
pub mod oracle;
pub mod parse;
pub mod random;
pub mod report;

pub use parse::{parse_expression, parse_parameter_file, parse_system_file, ParseError, SystemFile};
pub use report::{Format, Report};
