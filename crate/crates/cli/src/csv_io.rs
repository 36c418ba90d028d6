//! CSV ingestion of block maxima and CSV writing of simulated samples.
//!
//! The first row holds location labels; every later row is one block.
//! The delimiter is read off the header: files whose header contains `;`
//! are semicolon-delimited and take `,` as the decimal mark, all others are
//! comma-delimited with `.` decimals. Empty cells are missing values.

use std::path::Path;

use maxdep::BlockMaximaTable;

use crate::error::{CliError, Result};

/// Parsed CSV before missing values are dealt with.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub labels: Vec<String>,
    pub rows: Vec<RawRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawRow {
    /// 1-based line in the source file.
    pub line: u64,
    pub cells: Vec<Option<f64>>,
}

/// A validated table and the number of incomplete rows dropped to get it.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedTable {
    pub table: BlockMaximaTable,
    pub dropped_rows: usize,
}

fn parse_cell(cell: &str, comma_decimal: bool, line: u64, column: usize) -> Result<Option<f64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    let normalised;
    let text = if comma_decimal {
        normalised = cell.replace(',', ".");
        normalised.as_str()
    } else {
        cell
    };
    match text.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(Some(x)),
        Ok(_) => Err(CliError::Parse {
            line,
            column,
            message: format!("non-finite value `{cell}`"),
        }),
        Err(_) => Err(CliError::Parse {
            line,
            column,
            message: format!("cannot parse `{cell}` as a number"),
        }),
    }
}

/// Parses CSV text into labels and rows of optional values.
pub fn parse_csv_str(text: &str) -> Result<RawTable> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let header = text.lines().next().unwrap_or("");
    let semicolon = header.contains(';');
    let delimiter = if semicolon { b';' } else { b',' };

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut records = reader.records();
    let labels: Vec<String> = match records.next() {
        Some(rec) => rec
            .map_err(|e| csv_error(&e))?
            .iter()
            .map(str::to_owned)
            .collect(),
        None => {
            return Err(CliError::Parse {
                line: 1,
                column: 1,
                message: "empty file: expected a header of location labels".into(),
            })
        }
    };

    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| csv_error(&e))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != labels.len() {
            let hint = if semicolon {
                ""
            } else {
                " (comma-delimited files take '.' decimals; use ';' as the delimiter for ',' decimals)"
            };
            return Err(CliError::Parse {
                line,
                column: rec.len().min(labels.len()) + 1,
                message: format!("expected {} cells, found {}{hint}", labels.len(), rec.len()),
            });
        }
        let cells = rec
            .iter()
            .enumerate()
            .map(|(j, cell)| parse_cell(cell, semicolon, line, j + 1))
            .collect::<Result<Vec<_>>>()?;
        rows.push(RawRow { line, cells });
    }
    Ok(RawTable { labels, rows })
}

fn csv_error(e: &csv::Error) -> CliError {
    let line = e.position().map_or(0, |p| p.line());
    CliError::Parse {
        line,
        column: 0,
        message: e.to_string(),
    }
}

impl RawTable {
    /// Keeps only the named columns, in the given order.
    pub fn select(&self, names: &[String]) -> Result<RawTable> {
        let cols = names
            .iter()
            .map(|name| {
                self.labels
                    .iter()
                    .position(|l| l == name)
                    .ok_or_else(|| CliError::UnknownLocation(name.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RawTable {
            labels: names.to_vec(),
            rows: self
                .rows
                .iter()
                .map(|r| RawRow {
                    line: r.line,
                    cells: cols.iter().map(|&c| r.cells[c]).collect(),
                })
                .collect(),
        })
    }

    /// Validates into a [`BlockMaximaTable`]. Rows with an empty cell are an
    /// error unless `drop_incomplete` is set.
    pub fn into_table(self, drop_incomplete: bool) -> Result<LoadedTable> {
        let mut dropped_rows = 0;
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in self.rows {
            if let Some(col) = row.cells.iter().position(Option::is_none) {
                if drop_incomplete {
                    dropped_rows += 1;
                    continue;
                }
                return Err(CliError::MissingValue {
                    line: row.line,
                    column: col + 1,
                    label: self.labels[col].clone(),
                });
            }
            rows.push(row.cells.into_iter().flatten().collect());
        }
        let table = BlockMaximaTable::new(self.labels, rows)?;
        Ok(LoadedTable {
            table,
            dropped_rows,
        })
    }
}

/// Reads and validates a CSV file of block maxima.
pub fn parse_csv(path: &Path, drop_incomplete: bool) -> Result<LoadedTable> {
    let text = read_text(path)?;
    parse_csv_str(&text)?.into_table(drop_incomplete)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Comma-delimited CSV with shortest round-trip formatting of every value.
pub fn write_rows_csv(labels: &[String], rows: &[Vec<f64>]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(labels).expect("writing to memory");
    for row in rows {
        writer
            .write_record(row.iter().map(|x| x.to_string()))
            .expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("writing to memory")).expect("ASCII output")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, drop: bool) -> Result<LoadedTable> {
        parse_csv_str(text)?.into_table(drop)
    }

    #[test]
    fn dot_decimal_comma_delimited() {
        let t = load("A,B\n1.5,2.5\n3.0,1.0", false).unwrap().table;
        assert_eq!((t.n(), t.k()), (2, 2));
        assert_eq!(t.row(0), &[1.5, 2.5]);
        assert_eq!(t.locations()[1].as_str(), "B");
    }

    #[test]
    fn comma_decimals_need_semicolons() {
        let err = parse_csv_str("A,B\n0,4,0,13").unwrap_err();
        match err {
            CliError::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("expected 2 cells, found 4"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn semicolon_comma_decimal() {
        let raw = parse_csv_str("A;B\n0,4;0,13").unwrap();
        assert_eq!(raw.labels, vec!["A", "B"]);
        assert_eq!(raw.rows[0].cells, vec![Some(0.4), Some(0.13)]);
        // a single row cannot form a table
        assert!(matches!(
            raw.into_table(false),
            Err(CliError::Model(maxdep::Error::Dimension(_)))
        ));
    }

    #[test]
    fn bad_number_reports_coordinates() {
        match parse_csv_str("A,B\n1,2\n3,x\n").unwrap_err() {
            CliError::Parse { line, column, .. } => assert_eq!((line, column), (3, 2)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_csv_str("A,B\n1,inf\n"),
            Err(CliError::Parse { .. })
        ));
        assert!(matches!(parse_csv_str(""), Err(CliError::Parse { .. })));
    }

    #[test]
    fn missing_values() {
        let text = "A,B,C\n1,2,3\n4,,6\n7,8,9\n10,11,\n";
        match load(text, false).unwrap_err() {
            CliError::MissingValue {
                line,
                column,
                label,
            } => {
                assert_eq!((line, column, label.as_str()), (3, 2, "B"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let loaded = load(text, true).unwrap();
        assert_eq!(loaded.dropped_rows, 2);
        assert_eq!(loaded.table.n(), 2);
        assert_eq!(loaded.table.row(1), &[7.0, 8.0, 9.0]);
    }

    #[test]
    fn selection_before_missing_check() {
        let raw = parse_csv_str("A,B,C\n1,,3\n4,5,6\n7,8,9\n").unwrap();
        let sel = raw.select(&["C".into(), "A".into()]).unwrap();
        let t = sel.into_table(false).unwrap().table;
        assert_eq!(t.row(0), &[3.0, 1.0]);
        assert!(matches!(
            raw.select(&["Z".into()]),
            Err(CliError::UnknownLocation(_))
        ));
    }

    #[test]
    fn header_problems_surface_from_table_validation() {
        assert!(matches!(
            load("A,A\n1,2\n3,4\n", false),
            Err(CliError::Model(maxdep::Error::DuplicateLabel(_)))
        ));
        assert!(matches!(
            load("A\n1\n2\n", false),
            Err(CliError::Model(maxdep::Error::Dimension(_)))
        ));
    }

    #[test]
    fn bom_whitespace_and_blank_lines() {
        let t = load("\u{feff}A , B\n 1 , 2 \n\n3,4\n", false)
            .unwrap()
            .table;
        assert_eq!(t.locations()[0].as_str(), "A");
        assert_eq!(t.n(), 2);
    }

    #[test]
    fn written_rows_parse_back_exactly() {
        let rows = vec![vec![0.1 + 0.2, 1e-300], vec![12345.678901234567, 2.0 / 3.0]];
        let text = write_rows_csv(&["L1".into(), "L2".into()], &rows);
        let t = load(&text, false).unwrap().table;
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(t.row(i), row.as_slice());
        }
    }
}
