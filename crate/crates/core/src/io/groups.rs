//! Group files: one group per line, whitespace-separated 0-based indices.

use std::fs;
use std::path::Path;

use crate::error::{Result, SieveError};
use crate::model::GroupPartition;

/// Parses a partition of `0..n`. Blank lines are skipped.
pub fn parse_groups(text: &str, n: usize) -> Result<GroupPartition> {
    let mut groups = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let group = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| SieveError::Parse {
                    line: k + 1,
                    message: format!("invalid index {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        groups.push(group);
    }
    GroupPartition::new(groups, n)
}

pub fn read_groups(path: &Path, n: usize) -> Result<GroupPartition> {
    parse_groups(&fs::read_to_string(path)?, n)
}
