//! Library side of the `smooth-transitions` command-line tool: descriptor
//! parsing, sampling, output formats and the verification suites.

use std::path::Path;

pub mod descriptor;
pub mod family;
pub mod format;
pub mod output;
pub mod verify;

pub use descriptor::{Built, Descriptor};
pub use family::{Family, StepSpec};
pub use output::{Format, Table};

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] smooth_transitions::Error),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Usage(format!("{}: {e}", path.display()))
    }
}

/// `n` uniform samples of a built function with `derivs` derivative columns.
pub fn sample(built: &Built, n: usize, derivs: usize) -> Result<Table, CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("need at least 2 sample points, got {n}")));
    }
    let mut t = Table::new(built.label(), derivs);
    for x in built.domain().grid(n) {
        let mut row = vec![x];
        if derivs == 0 {
            row.push(built.value(x));
        } else {
            let d = built.derivatives(x, derivs)?;
            row.push(built.value(x));
            row.extend_from_slice(&d[1..]);
        }
        t.rows.push(row);
    }
    Ok(t)
}
