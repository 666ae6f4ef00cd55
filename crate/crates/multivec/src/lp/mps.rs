//! MPS export and import.
//!
//! Row/column names are mangled to short deterministic identifiers
//! (`R0000001`, `C0000001`, in canonical order); the mapping table is written
//! alongside the MPS file as `<file>.names.csv`. Values are printed with
//! shortest-round-trip formatting so re-importing an exported file reproduces
//! the exact coefficient triplets.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use super::{FinalizedLp, LinearProgram, Sense};
use crate::{Error, Result};

fn mangle_row(i: usize) -> String {
    format!("R{:07}", i + 1)
}

fn mangle_col(i: usize) -> String {
    format!("C{:07}", i + 1)
}

fn num(v: f64) -> String {
    format!("{v}")
}

/// Write `lp` in MPS form plus the name-mangling table.
pub fn write_mps(lp: &FinalizedLp, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str("NAME          MULTIVEC\n");
    out.push_str("ROWS\n");
    out.push_str(" N  OBJ\n");
    for (i, row) in lp.rows.iter().enumerate() {
        let tag = match row.sense {
            Sense::Le => 'L',
            Sense::Eq => 'E',
            Sense::Ge => 'G',
        };
        out.push_str(&format!(" {}  {}\n", tag, mangle_row(i)));
    }
    out.push_str("COLUMNS\n");
    for (c, col) in lp.cols.iter().enumerate() {
        let name = mangle_col(c);
        if col.objective != 0.0 {
            out.push_str(&format!(
                "    {:<10}{:<10}{}\n",
                name,
                "OBJ",
                num(col.objective)
            ));
        }
        for (r, v) in lp.col_entries(c) {
            out.push_str(&format!(
                "    {:<10}{:<10}{}\n",
                name,
                mangle_row(r),
                num(v)
            ));
        }
    }
    out.push_str("RHS\n");
    for (i, row) in lp.rows.iter().enumerate() {
        if row.rhs != 0.0 {
            out.push_str(&format!(
                "    {:<10}{:<10}{}\n",
                "RHS",
                mangle_row(i),
                num(row.rhs)
            ));
        }
    }
    out.push_str("BOUNDS\n");
    for (c, col) in lp.cols.iter().enumerate() {
        let name = mangle_col(c);
        match (col.lower.is_finite(), col.upper.is_finite()) {
            (true, true) if col.lower == col.upper => {
                out.push_str(&format!(
                    " FX {:<10}{:<10}{}\n",
                    "BND",
                    name,
                    num(col.lower)
                ));
            }
            (true, true) => {
                out.push_str(&format!(
                    " LO {:<10}{:<10}{}\n",
                    "BND",
                    name,
                    num(col.lower)
                ));
                out.push_str(&format!(
                    " UP {:<10}{:<10}{}\n",
                    "BND",
                    name,
                    num(col.upper)
                ));
            }
            (true, false) => {
                out.push_str(&format!(
                    " LO {:<10}{:<10}{}\n",
                    "BND",
                    name,
                    num(col.lower)
                ));
                out.push_str(&format!(" PL {:<10}{}\n", "BND", name));
            }
            (false, true) => {
                out.push_str(&format!(" MI {:<10}{}\n", "BND", name));
                out.push_str(&format!(
                    " UP {:<10}{:<10}{}\n",
                    "BND",
                    name,
                    num(col.upper)
                ));
            }
            (false, false) => {
                out.push_str(&format!(" FR {:<10}{}\n", "BND", name));
            }
        }
    }
    out.push_str("ENDATA\n");
    fs::write(path, out).map_err(|e| Error::io(path, e))?;

    let names_path = path.with_extension(format!(
        "{}names.csv",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    let mut f = fs::File::create(&names_path).map_err(|e| Error::io(&names_path, e))?;
    writeln!(f, "kind,mps_name,name").map_err(|e| Error::io(&names_path, e))?;
    for (i, row) in lp.rows.iter().enumerate() {
        writeln!(f, "row,{},{}", mangle_row(i), row.name).map_err(|e| Error::io(&names_path, e))?;
    }
    for (c, col) in lp.cols.iter().enumerate() {
        writeln!(f, "col,{},{}", mangle_col(c), col.name).map_err(|e| Error::io(&names_path, e))?;
    }
    Ok(())
}

/// Read an MPS file back into a builder. Names are taken verbatim from the
/// file (i.e. the mangled names for files produced by [`write_mps`]).
pub fn read_mps(path: &Path) -> Result<LinearProgram> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lp = LinearProgram::new();
    #[derive(PartialEq)]
    enum Section {
        None,
        Rows,
        Columns,
        Rhs,
        Bounds,
        Done,
    }
    let mut section = Section::None;
    let mut obj_row: Option<String> = None;
    // Deferred column data: MPS declares coefficients before bounds.
    let mut pending: Vec<(String, String, f64)> = Vec::new(); // (col, row, value)
    let mut col_order: Vec<String> = Vec::new();
    let mut objectives: std::collections::HashMap<String, f64> = Default::default();
    let mut bounds: std::collections::HashMap<String, (f64, f64)> = Default::default();

    let parse_err = |line_no: usize, msg: &str| Error::Parse {
        path: path.to_path_buf(),
        line: line_no as u64 + 1,
        message: msg.to_string(),
    };

    for (ln, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let is_header = !raw.starts_with(' ');
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if is_header {
            section = match fields[0] {
                "NAME" => Section::None,
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "RANGES" => return Err(parse_err(ln, "RANGES section not supported")),
                "ENDATA" => Section::Done,
                other => return Err(parse_err(ln, &format!("unknown section '{other}'"))),
            };
            continue;
        }
        match section {
            Section::Rows => {
                if fields.len() != 2 {
                    return Err(parse_err(ln, "expected '<sense> <name>'"));
                }
                match fields[0] {
                    "N" => {
                        if obj_row.is_some() {
                            return Err(parse_err(ln, "multiple objective rows"));
                        }
                        obj_row = Some(fields[1].to_string());
                    }
                    "L" => {
                        lp.add_row(fields[1], Sense::Le, 0.0)?;
                    }
                    "G" => {
                        lp.add_row(fields[1], Sense::Ge, 0.0)?;
                    }
                    "E" => {
                        lp.add_row(fields[1], Sense::Eq, 0.0)?;
                    }
                    other => return Err(parse_err(ln, &format!("bad row sense '{other}'"))),
                }
            }
            Section::Columns => {
                if fields.len() != 3 && fields.len() != 5 {
                    return Err(parse_err(ln, "expected column, then 1-2 (row, value) pairs"));
                }
                let col = fields[0].to_string();
                if !col_order.contains(&col) {
                    col_order.push(col.clone());
                }
                for pair in fields[1..].chunks(2) {
                    let row = pair[0].to_string();
                    let value: f64 = pair[1]
                        .parse()
                        .map_err(|_| parse_err(ln, "bad numeric value"))?;
                    if Some(&row) == obj_row.as_ref() {
                        *objectives.entry(col.clone()).or_insert(0.0) += value;
                    } else {
                        pending.push((col.clone(), row, value));
                    }
                }
            }
            Section::Rhs => {
                if fields.len() != 3 && fields.len() != 5 {
                    return Err(parse_err(ln, "expected rhs-set, then (row, value) pairs"));
                }
                for pair in fields[1..].chunks(2) {
                    let row = pair[0];
                    let value: f64 = pair[1]
                        .parse()
                        .map_err(|_| parse_err(ln, "bad numeric value"))?;
                    let id = lp
                        .row_id(row)
                        .ok_or_else(|| parse_err(ln, &format!("unknown row '{row}'")))?;
                    lp.rows_mut()[id.index()].rhs = value;
                }
            }
            Section::Bounds => {
                let kind = fields[0];
                let (col, value) = match kind {
                    "UP" | "LO" | "FX" => {
                        if fields.len() != 4 {
                            return Err(parse_err(ln, "expected '<kind> <set> <col> <value>'"));
                        }
                        let v: f64 = fields[3]
                            .parse()
                            .map_err(|_| parse_err(ln, "bad numeric value"))?;
                        (fields[2].to_string(), v)
                    }
                    "FR" | "MI" | "PL" => {
                        if fields.len() != 3 {
                            return Err(parse_err(ln, "expected '<kind> <set> <col>'"));
                        }
                        (fields[2].to_string(), 0.0)
                    }
                    other => return Err(parse_err(ln, &format!("unsupported bound '{other}'"))),
                };
                let entry = bounds.entry(col).or_insert((0.0, f64::INFINITY));
                match kind {
                    "UP" => entry.1 = value,
                    "LO" => entry.0 = value,
                    "FX" => *entry = (value, value),
                    "FR" => *entry = (f64::NEG_INFINITY, f64::INFINITY),
                    "MI" => entry.0 = f64::NEG_INFINITY,
                    "PL" => entry.1 = f64::INFINITY,
                    _ => unreachable!(),
                }
            }
            Section::None | Section::Done => {
                return Err(parse_err(ln, "data outside of a section"));
            }
        }
    }
    if section != Section::Done {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: text.lines().count() as u64,
            message: "missing ENDATA".to_string(),
        });
    }

    for name in &col_order {
        let (lo, up) = bounds.get(name).copied().unwrap_or((0.0, f64::INFINITY));
        let obj = objectives.get(name).copied().unwrap_or(0.0);
        lp.add_column(name.clone(), lo, up, obj)?;
    }
    for (col, row, value) in pending {
        lp.add_coeff_by_name(&row, &col, value)?;
    }
    Ok(lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{LinearProgram, Sense, SolveOptions, Status};

    fn toy() -> LinearProgram {
        let mut lp = LinearProgram::new();
        let x = lp.add_column("x", 0.0, 4.0, -2.0).unwrap();
        let y = lp.add_column("we/structured:name", 0.25, f64::INFINITY, 1.5).unwrap();
        let z = lp
            .add_column("z", f64::NEG_INFINITY, f64::INFINITY, 0.0)
            .unwrap();
        let fixed = lp.add_column("w", 2.0, 2.0, 0.125).unwrap();
        let a = lp.add_row("cap", Sense::Le, 5.5).unwrap();
        let b = lp.add_row("bal", Sense::Eq, 1.0).unwrap();
        let c = lp.add_row("floor", Sense::Ge, -0.75).unwrap();
        lp.add_coeff(a, x, 1.0);
        lp.add_coeff(a, y, 0.27777778);
        lp.add_coeff(b, y, 1.0);
        lp.add_coeff(b, z, -1.0);
        lp.add_coeff(c, z, 3.0);
        lp.add_coeff(c, fixed, -1.0);
        lp
    }

    #[test]
    fn round_trip_reproduces_triplets() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("toy.mps");
        let original = toy().finalize();
        write_mps(&original, &path).unwrap();
        let reread = read_mps(&path).unwrap().finalize();

        assert_eq!(original.num_cols(), reread.num_cols());
        assert_eq!(original.num_rows(), reread.num_rows());
        for c in 0..original.num_cols() {
            let a: Vec<_> = original.col_entries(c).collect();
            let b: Vec<_> = reread.col_entries(c).collect();
            assert_eq!(a, b, "column {c} triplets differ");
            assert_eq!(original.cols[c].lower, reread.cols[c].lower);
            assert_eq!(original.cols[c].upper, reread.cols[c].upper);
            assert_eq!(original.cols[c].objective, reread.cols[c].objective);
        }
        for r in 0..original.num_rows() {
            assert_eq!(original.rows[r].sense, reread.rows[r].sense);
            assert_eq!(original.rows[r].rhs, reread.rows[r].rhs);
        }
        // name table exists and maps every row/col
        let names = std::fs::read_to_string(dir.path().join("toy.mps.names.csv")).unwrap();
        assert!(names.contains("row,R0000001,cap"));
        assert!(names.contains("col,C0000002,we/structured:name"));

        let s1 = original.solve(&SolveOptions::default());
        let s2 = reread.solve(&SolveOptions::default());
        assert_eq!(s1.status, Status::Optimal);
        assert_eq!(s1.objective, s2.objective);
    }

    #[test]
    fn empty_lp_exports_valid_mps() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.mps");
        let lp = LinearProgram::new().finalize();
        write_mps(&lp, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        for section in ["NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"] {
            assert!(text.contains(section), "missing {section}");
        }
        let back = read_mps(&path).unwrap().finalize();
        assert_eq!(back.num_cols(), 0);
        assert_eq!(back.num_rows(), 0);
    }

    #[test]
    fn equality_rows_encode_as_e() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("eq.mps");
        let mut lp = LinearProgram::new();
        let x = lp.add_column("x", 0.0, 1.0, 1.0).unwrap();
        let r = lp.add_row("anchor", Sense::Eq, 0.5).unwrap();
        lp.add_coeff(r, x, 1.0);
        write_mps(&lp.finalize(), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains(" E  R0000001"));
    }
}
