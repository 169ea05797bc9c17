use std::path::Path;

use crate::error::{CliError, CliResult};

/// Reads a one-column CSV of reals. A first line that does not parse as a
/// number is taken as a header; blank lines are skipped.
pub fn read_values(path: &Path) -> CliResult<Vec<f64>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_values(file)
}

pub fn parse_values(reader: impl std::io::Read) -> CliResult<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut values = Vec::new();
    let mut first = true;
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 1 {
            return Err(CliError::Parse {
                line,
                reason: format!("expected one column, found {}", record.len()),
            });
        }
        let field = &record[0];
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => {
                return Err(CliError::Parse {
                    line,
                    reason: format!("`{field}` is not a finite number"),
                })
            }
            Err(_) if first => {}
            Err(_) => {
                return Err(CliError::Parse {
                    line,
                    reason: format!("cannot parse `{field}` as a number"),
                })
            }
        }
        first = false;
    }
    if values.is_empty() {
        return Err(CliError::Data("input contains no observations".into()));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_detected_and_blanks_skipped() {
        let v = parse_values("x\n1.5\n\n-2\n3e-3\n".as_bytes()).unwrap();
        assert_eq!(v, [1.5, -2.0, 3e-3]);
        assert_eq!(parse_values("4\n5\n".as_bytes()).unwrap(), [4.0, 5.0]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_values("value\n1\n2\nabc\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 4, .. }), "{err:?}");
        let err = parse_values("1\n2,3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }), "{err:?}");
        let err = parse_values("1\ninf\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }), "{err:?}");
        assert!(matches!(parse_values("header\n".as_bytes()), Err(CliError::Data(_))));
    }
}
