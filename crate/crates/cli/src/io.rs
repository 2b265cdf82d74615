use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use speclab::calculus::AntilinearMap;
use speclab::domain::{Domain, DomainSpec};
use speclab::linalg::ComplexMatrix;

use crate::error::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses JSON, keeping the line and column of the first error.
pub fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn load_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    parse_json(path, &read(path)?)
}

pub fn load_domain(path: &Path) -> Result<Domain, CliError> {
    let spec: DomainSpec = parse_json(path, &read(path)?)?;
    spec.build().map_err(|e| CliError::Invalid {
        path: path.to_path_buf(),
        what: "domain",
        message: e.to_string(),
    })
}

/// `cauchy`, `two-point` or a JSON file holding an explicit map.
pub fn load_map(spec: &str) -> Result<AntilinearMap, CliError> {
    match spec {
        "cauchy" => Ok(AntilinearMap::ConjugateCauchy),
        "two-point" => Ok(AntilinearMap::two_point_example()),
        path => {
            let path = PathBuf::from(path);
            parse_json(&path, &read(&path)?)
        }
    }
}

/// Writes to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
