use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::Result;

/// CSV table with a fixed header; floats are written in shortest
/// round-trip form.
pub(crate) struct Csv {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

pub(crate) fn num(x: f64) -> String {
    format!("{x}")
}

/// Writes to `path` when given, else to `stdout`.
pub(crate) fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// A series of the plot: rows of `csv` whose column `key` equals `value`,
/// or all rows.
pub(crate) struct Series {
    pub x: usize,
    pub y: usize,
    pub filter: Option<(usize, String)>,
    pub title: String,
}

/// Gnuplot script drawing `series` from `csv`. Columns are 1-based.
pub(crate) fn gnuplot(csv: &Path, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let file = csv.display().to_string().replace('\'', "''");
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set xlabel '{xlabel}'\nset ylabel '{ylabel}'\n"));
    s.push_str("set grid\n");
    let parts: Vec<String> = series
        .iter()
        .map(|ser| {
            let y = match &ser.filter {
                Some((col, v)) => format!("(strcol({col}) eq '{v}' ? ${} : 1/0)", ser.y),
                None => format!("{}", ser.y),
            };
            format!(
                "'{file}' using {}:{y} with lines title '{}'",
                ser.x, ser.title
            )
        })
        .collect();
    s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
    s
}
