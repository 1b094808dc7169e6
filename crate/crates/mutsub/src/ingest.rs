//! Reading kill matrices from disk and writing them back: the CSV matrix
//! format, its sidecar mutant manifest, and the per-mutant results-directory
//! format.
//!
//! Both formats are deliberately comma-free in their fields, so parsing is a
//! plain split — no quoting or escaping is ever valid input.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::matrix::{KillMatrix, MatrixError, MutantId, MutantRecord, TestRecord};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl IngestError {
    fn format(path: &Path, line: usize, message: impl Into<String>) -> Self {
        IngestError::Format {
            path: path.to_path_buf(),
            line,
            message: message.into(),
        }
    }

    fn invalid(path: &Path, message: impl Into<String>) -> Self {
        IngestError::Invalid {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, IngestError> {
    let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if text.contains('\r') {
        return Err(IngestError::invalid(
            path,
            "carriage returns are not accepted; convert the file to LF line endings",
        ));
    }
    Ok(text)
}

/// Non-blank lines with their 1-based line numbers.
fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line))
        .filter(|(_, line)| !line.trim().is_empty())
}

/// Parse a kill-matrix CSV. Header is `mutant_id` followed by one column per
/// test name; each row is a mutant id followed by `0`/`1` cells. Test ids
/// are assigned by column position. The `path` is only a label for errors.
pub fn parse_matrix_csv(path: &Path, text: &str) -> Result<KillMatrix, IngestError> {
    let mut lines = numbered_lines(text);
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| IngestError::invalid(path, "empty matrix file"))?;
    let mut columns = header.split(',');
    let first = columns.next().unwrap_or_default();
    if first != "mutant_id" {
        return Err(IngestError::format(
            path,
            header_no,
            format!("header must start with \"mutant_id\", found {first:?}"),
        ));
    }
    let mut tests = Vec::new();
    for (idx, name) in columns.enumerate() {
        if name.is_empty() {
            return Err(IngestError::format(path, header_no, "empty test name in header"));
        }
        tests.push(TestRecord {
            id: idx as u64,
            name: name.to_string(),
        });
    }

    let mut mutants = Vec::new();
    let mut cells = Vec::new();
    for (line_no, line) in lines {
        let mut fields = line.split(',');
        let id_field = fields.next().unwrap_or_default();
        let id: MutantId = id_field.parse().map_err(|_| {
            IngestError::format(path, line_no, format!("invalid mutant id {id_field:?}"))
        })?;
        let mut row = Vec::with_capacity(tests.len());
        for cell in fields {
            match cell {
                "0" => row.push(false),
                "1" => row.push(true),
                other => {
                    return Err(IngestError::format(
                        path,
                        line_no,
                        format!("cell must be 0 or 1, found {other:?}"),
                    ))
                }
            }
        }
        if row.len() != tests.len() {
            return Err(IngestError::format(
                path,
                line_no,
                format!("expected {} cells, found {}", tests.len(), row.len()),
            ));
        }
        mutants.push(MutantRecord::bare(id));
        cells.push(row);
    }
    Ok(KillMatrix::new(mutants, tests, cells)?)
}

/// Parse a mutant manifest. Header is fixed; `equivalent` accepts `true`,
/// `false`, or empty (not annotated).
pub fn parse_manifest_csv(path: &Path, text: &str) -> Result<Vec<MutantRecord>, IngestError> {
    const HEADER: &str = "mutant_id,source_path,mutant_path,line_number,operator_tag,equivalent";
    let mut lines = numbered_lines(text);
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| IngestError::invalid(path, "empty manifest file"))?;
    if header != HEADER {
        return Err(IngestError::format(
            path,
            header_no,
            format!("manifest header must be {HEADER:?}"),
        ));
    }
    let mut records = Vec::new();
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(IngestError::format(
                path,
                line_no,
                format!("expected 6 fields, found {}", fields.len()),
            ));
        }
        let id: MutantId = fields[0].parse().map_err(|_| {
            IngestError::format(path, line_no, format!("invalid mutant id {:?}", fields[0]))
        })?;
        let line_number: u32 = fields[3].parse().map_err(|_| {
            IngestError::format(path, line_no, format!("invalid line number {:?}", fields[3]))
        })?;
        let equivalence_annotation = match fields[5] {
            "" => None,
            "true" => Some(true),
            "false" => Some(false),
            other => {
                return Err(IngestError::format(
                    path,
                    line_no,
                    format!("equivalent must be true, false, or empty, found {other:?}"),
                ))
            }
        };
        records.push(MutantRecord {
            id,
            source_path: fields[1].to_string(),
            mutant_path: fields[2].to_string(),
            line_number,
            operator_tag: fields[4].to_string(),
            equivalence_annotation,
        });
    }
    Ok(records)
}

/// Load a matrix CSV from disk, merging metadata from the sidecar manifest
/// (`<stem>.manifest.csv` next to the matrix) when one exists. A manifest,
/// if present, must describe exactly the matrix's mutants.
pub fn load_matrix_csv(path: &Path) -> Result<KillMatrix, IngestError> {
    let matrix = parse_matrix_csv(path, &read(path)?)?;
    let manifest_path = sidecar_manifest_path(path);
    if !manifest_path.exists() {
        return Ok(matrix);
    }
    let records = parse_manifest_csv(&manifest_path, &read(&manifest_path)?)?;
    apply_manifest(&manifest_path, matrix, records)
}

/// `matrix.csv` -> `matrix.manifest.csv`.
pub fn sidecar_manifest_path(matrix_path: &Path) -> PathBuf {
    matrix_path.with_extension("manifest.csv")
}

fn apply_manifest(
    manifest_path: &Path,
    matrix: KillMatrix,
    records: Vec<MutantRecord>,
) -> Result<KillMatrix, IngestError> {
    let mut by_id: HashMap<MutantId, MutantRecord> = HashMap::with_capacity(records.len());
    for record in records {
        if by_id.insert(record.id, record.clone()).is_some() {
            return Err(IngestError::invalid(
                manifest_path,
                format!("duplicate mutant id {}", record.id),
            ));
        }
    }
    let matrix_ids: BTreeSet<MutantId> = matrix.mutants().iter().map(|m| m.id).collect();
    let manifest_ids: BTreeSet<MutantId> = by_id.keys().copied().collect();
    if matrix_ids != manifest_ids {
        let missing: Vec<String> = matrix_ids
            .difference(&manifest_ids)
            .map(|id| id.to_string())
            .collect();
        let extra: Vec<String> = manifest_ids
            .difference(&matrix_ids)
            .map(|id| id.to_string())
            .collect();
        let mut message = String::from("manifest does not match matrix mutants");
        if !missing.is_empty() {
            message.push_str(&format!("; missing: {}", missing.join(" ")));
        }
        if !extra.is_empty() {
            message.push_str(&format!("; extra: {}", extra.join(" ")));
        }
        return Err(IngestError::invalid(manifest_path, message));
    }
    let mutants = matrix
        .mutants()
        .iter()
        .map(|m| by_id.remove(&m.id).expect("id sets were checked equal"))
        .collect();
    let tests = matrix.tests().to_vec();
    let cells = matrix.cells().to_vec();
    Ok(KillMatrix::new(mutants, tests, cells)?)
}

/// Load a per-mutant results directory: `manifest.csv` names the mutants
/// (in row order), `baseline.txt` lists the test names (in column order),
/// and each `mutant_<id>.txt` lists `FAIL <test>` / `ERROR <test>` lines.
/// Both FAIL and ERROR count as kills.
pub fn load_results_dir(dir: &Path) -> Result<KillMatrix, IngestError> {
    let manifest_path = dir.join("manifest.csv");
    let mutants = parse_manifest_csv(&manifest_path, &read(&manifest_path)?)?;

    let baseline_path = dir.join("baseline.txt");
    let baseline = read(&baseline_path)?;
    let mut tests = Vec::new();
    let mut column: HashMap<&str, usize> = HashMap::new();
    for (line_no, name) in numbered_lines(&baseline) {
        if name.split_whitespace().count() != 1 {
            return Err(IngestError::format(
                &baseline_path,
                line_no,
                format!("expected a single test name, found {name:?}"),
            ));
        }
        if column.insert(name, tests.len()).is_some() {
            return Err(IngestError::format(
                &baseline_path,
                line_no,
                format!("duplicate test name {name:?}"),
            ));
        }
        tests.push(TestRecord {
            id: tests.len() as u64,
            name: name.to_string(),
        });
    }

    let mut cells = Vec::with_capacity(mutants.len());
    for mutant in &mutants {
        let result_path = dir.join(format!("mutant_{}.txt", mutant.id));
        let text = read(&result_path)?;
        let mut row = vec![false; tests.len()];
        for (line_no, line) in numbered_lines(&text) {
            let (verdict, name) = line.split_once(' ').ok_or_else(|| {
                IngestError::format(
                    &result_path,
                    line_no,
                    format!("expected \"FAIL <test>\" or \"ERROR <test>\", found {line:?}"),
                )
            })?;
            if verdict != "FAIL" && verdict != "ERROR" {
                return Err(IngestError::format(
                    &result_path,
                    line_no,
                    format!("unknown verdict {verdict:?}"),
                ));
            }
            let idx = *column.get(name).ok_or_else(|| {
                IngestError::format(
                    &result_path,
                    line_no,
                    format!("test {name:?} is not in baseline.txt"),
                )
            })?;
            row[idx] = true;
        }
        cells.push(row);
    }
    Ok(KillMatrix::new(mutants, tests, cells)?)
}

/// Render a matrix back to the CSV format accepted by [`parse_matrix_csv`].
pub fn render_matrix_csv(matrix: &KillMatrix) -> String {
    let mut out = String::from("mutant_id");
    for test in matrix.tests() {
        out.push(',');
        out.push_str(&test.name);
    }
    out.push('\n');
    for (mutant, row) in matrix.mutants().iter().zip(matrix.cells()) {
        out.push_str(&mutant.id.to_string());
        for &cell in row {
            out.push_str(if cell { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}

/// Render mutant records in the manifest format accepted by
/// [`parse_manifest_csv`].
pub fn render_manifest_csv(mutants: &[MutantRecord]) -> String {
    let mut out =
        String::from("mutant_id,source_path,mutant_path,line_number,operator_tag,equivalent\n");
    for m in mutants {
        let equivalent = match m.equivalence_annotation {
            None => "",
            Some(true) => "true",
            Some(false) => "false",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            m.id, m.source_path, m.mutant_path, m.line_number, m.operator_tag, equivalent
        ));
    }
    out
}

pub fn write_matrix_csv(path: &Path, matrix: &KillMatrix) -> Result<(), IngestError> {
    write_text(path, &render_matrix_csv(matrix))
}

pub fn write_manifest_csv(path: &Path, mutants: &[MutantRecord]) -> Result<(), IngestError> {
    write_text(path, &render_manifest_csv(mutants))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IngestError> {
    fs::write(path, text).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}
