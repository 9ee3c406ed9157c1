use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Result;

/// Writes a CSV file: `#` metadata lines, a header row, the records, then
/// optional `#` footer lines.
pub fn write_csv<I>(
    path: &Path,
    header: &[String],
    columns: &[&str],
    rows: I,
    footer: &[String],
) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut out = BufWriter::new(File::create(path)?);
    for line in header {
        writeln!(out, "{line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let mut out = w.into_inner().map_err(|e| e.into_error())?;
    for line in footer {
        writeln!(out, "# {line}")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a CSV written by [`write_csv`], skipping `#` lines.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let headers = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<_, _>>()?;
    Ok((headers, rows))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_with_comments() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/t.csv");
        write_csv(
            &path,
            &["# a = 1".into()],
            &["x", "y"],
            vec![vec!["1".into(), "two, three".into()]],
            &["done".into()],
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# a = 1\nx,y\n"));
        assert!(text.ends_with("# done\n"));
        let (h, rows) = read_csv(&path).unwrap();
        assert_eq!(h, vec!["x", "y"]);
        assert_eq!(rows, vec![vec!["1".to_string(), "two, three".to_string()]]);
    }
}
