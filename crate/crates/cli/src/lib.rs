//! Library face of the command-line front end: the JSON document types
//! and the error wrapper, shared between the binary and its tests.

use std::fmt;

pub mod documents;

#[derive(Debug)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! from_error {
    ($($ty:ty),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError(e.to_string())
            }
        })*
    };
}

from_error!(
    std::io::Error,
    serde_json::Error,
    hardyball::classify::ClassifyError,
    hardyball::kernels::KernelError,
    hardyball::geometry::GeometryError,
    hardyball::linalg::LinalgError,
    std::num::ParseFloatError,
);
