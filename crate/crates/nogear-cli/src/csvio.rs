//! CSV reading and writing for count series and plot data.
//!
//! A series file holds one observation per line, optionally preceded by a
//! `count` header; an optional second column (e.g. a date) is carried past
//! the math untouched.

use std::fmt::Write as _;
use std::path::Path;

use nogear_core::CountSeries;

use crate::CliError;

/// Read a count series from a CSV file.
pub fn read_series(path: &Path) -> Result<CountSeries, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".to_string());
    parse_series(&raw, &name)
}

/// Parse series text: optional `count[,...]` header, then one non-negative
/// integer per line in the first column.
pub fn parse_series(raw: &str, name: &str) -> Result<CountSeries, CliError> {
    let mut values = Vec::new();
    for (lineno, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let first = line.split(',').next().unwrap_or("").trim();
        if lineno == 0 && first.eq_ignore_ascii_case("count") {
            continue;
        }
        let value: u32 = first.parse().map_err(|_| {
            CliError::input(format!(
                "line {}: cell `{first}` is not a non-negative integer",
                lineno + 1
            ))
        })?;
        values.push(value);
    }
    if values.is_empty() {
        return Err(CliError::input("no observations found in input".to_string()));
    }
    Ok(CountSeries::new(values, name))
}

/// Render a series as CSV with a `count` header.
pub fn series_to_csv(series: &CountSeries) -> String {
    let mut out = String::with_capacity(series.len() * 4 + 8);
    out.push_str("count\n");
    for &v in &series.values {
        let _ = writeln!(out, "{v}");
    }
    out
}

/// Render rows of floats as CSV under a header line.
pub fn table_to_csv(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Write a file, creating parent directories as needed.
pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| {
                CliError::input(format!("cannot create {}: {e}", parent.display()))
            })?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_and_headed_csv() {
        let s = parse_series("count\n1\n2\n0\n", "x").unwrap();
        assert_eq!(s.values, vec![1, 2, 0]);
        let s = parse_series("3\n4\n", "x").unwrap();
        assert_eq!(s.values, vec![3, 4]);
    }

    #[test]
    fn ignores_second_column() {
        let s = parse_series("count,date\n5,2020-07-14\n2,2020-07-15\n", "x").unwrap();
        assert_eq!(s.values, vec![5, 2]);
    }

    #[test]
    fn rejects_non_integer_cells() {
        assert!(parse_series("count\n1.5\n", "x").is_err());
        assert!(parse_series("-3\n", "x").is_err());
        assert!(parse_series("", "x").is_err());
    }

    #[test]
    fn csv_round_trip() {
        let s = CountSeries::new(vec![0, 7, 2], "t");
        let text = series_to_csv(&s);
        let back = parse_series(&text, "t").unwrap();
        assert_eq!(back.values, s.values);
    }
}
