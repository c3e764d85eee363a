//! Formula lists shipped with the crate.

use crate::logic::{parse, Formula};

const IPC_THEOREMS: &str = include_str!("../corpus/ipc_theorems.txt");
const MIXED: &str = include_str!("../corpus/mixed.txt");

/// Parses one formula per line, skipping blank lines and `#` comments.
pub fn parse_lines(text: &str) -> Result<Vec<Formula>, crate::logic::ParseError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse)
        .collect()
}

/// Intuitionistic theorems in up to three variables.
pub fn ipc_theorems() -> Vec<Formula> {
    parse_lines(IPC_THEOREMS).expect("bundled corpus parses")
}

/// Valid and invalid formulas in at most two variables.
pub fn mixed() -> Vec<Formula> {
    parse_lines(MIXED).expect("bundled corpus parses")
}
