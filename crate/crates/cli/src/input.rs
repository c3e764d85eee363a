//! Loading frames, algebras and JSON documents from arguments.

use std::fs;
use std::io::{self, Read};
use std::path::Path;

use muchnik_core::order::element_label;
use muchnik_core::{upset_algebra, AlgebraJson, BrouwerAlgebra, Formula, Poset, PosetJson};
use serde::de::DeserializeOwned;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }
}

pub fn read_text(path: &str) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_owned(),
        source,
    };
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &str) -> Result<T, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn sized(arg: &str, name: &str) -> Result<Option<usize>, CliError> {
    let Some(rest) = arg.strip_prefix(name).and_then(|r| r.strip_prefix(':')) else {
        return Ok(None);
    };
    rest.parse()
        .map(Some)
        .map_err(|_| CliError::Input(format!("`{arg}`: expected {name}:<size>")))
}

/// A built-in frame (`chain:N`, `antichain:N`, `tree:N`, `fork`, `diamond`)
/// or a poset JSON file.
pub fn load_poset(arg: &str) -> Result<Poset, CliError> {
    let labels = |n: usize| (0..n).map(element_label).collect::<Vec<_>>();
    if let Some(n) = sized(arg, "chain")? {
        return Ok(Poset::chain(labels(n)));
    }
    if let Some(n) = sized(arg, "antichain")? {
        return Ok(Poset::antichain(labels(n)));
    }
    if let Some(n) = sized(arg, "tree")? {
        if n == 0 || n > 6 {
            return Err(CliError::Input(format!(
                "`{arg}`: tree height must be 1..=6"
            )));
        }
        return Ok(Poset::binary_tree(n));
    }
    match arg {
        "fork" => Ok(Poset::binary_tree(2)),
        "diamond" => Poset::from_labeled_pairs(
            &["b", "l", "r", "t"],
            &[("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")],
        )
        .map_err(CliError::input),
        path => Poset::try_from(read_json::<PosetJson>(path)?)
            .map_err(|e| CliError::Input(format!("{path}: {e}"))),
    }
}

/// `upsets:<frame>` for the upset algebra of a frame, or an algebra JSON file.
pub fn load_algebra(arg: &str) -> Result<BrouwerAlgebra, CliError> {
    if let Some(frame) = arg.strip_prefix("upsets:") {
        let p = load_poset(frame)?;
        return Ok(upset_algebra(&p).map_err(CliError::input)?.algebra);
    }
    BrouwerAlgebra::try_from(read_json::<AlgebraJson>(arg)?)
        .map_err(|e| CliError::Input(format!("{arg}: {e}")))
}

pub fn load_formula(text: &str) -> Result<Formula, CliError> {
    muchnik_core::parse(text).map_err(|e| CliError::Input(format!("`{text}`: {e}")))
}
