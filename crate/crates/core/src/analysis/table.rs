use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::CorrelationResult;

/// Correlations laid out with one row per level, factor or category and one
/// column per discipline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    /// `None` where the correlation is undefined or the row does not apply.
    pub cells: Vec<Option<CorrelationResult>>,
}

impl CorrelationTable {
    pub fn new(title: impl Into<String>, columns: Vec<String>) -> Self {
        Self { title: title.into(), columns, rows: Vec::new() }
    }

    /// Sets one cell, adding the row if needed.
    pub fn set(&mut self, label: &str, column: usize, value: Option<CorrelationResult>) {
        let width = self.columns.len();
        let row = match self.rows.iter().position(|r| r.label == label) {
            Some(i) => &mut self.rows[i],
            None => {
                self.rows.push(TableRow { label: label.to_string(), cells: vec![None; width] });
                self.rows.last_mut().expect("row just pushed")
            }
        };
        row.cells[column] = value;
    }

    pub fn cell_text(cell: &Option<CorrelationResult>) -> String {
        match cell {
            Some(c) => format!("{:.3}{}", c.r, c.stars()),
            None => "NA".to_string(),
        }
    }

    /// `label,<column...>` with cells such as `0.370*`.
    pub fn write_csv(&self, writer: impl Write) -> csv::Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        let mut header = vec!["label".to_string()];
        header.extend(self.columns.iter().cloned());
        csv.write_record(&header)?;
        for row in &self.rows {
            let mut record = vec![row.label.clone()];
            record.extend(row.cells.iter().map(Self::cell_text));
            csv.write_record(&record)?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn render(&self) -> String {
        let label_width = self.rows.iter().map(|r| r.label.len()).chain([5]).max().unwrap_or(5);
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(j, c)| self.rows.iter().map(|r| Self::cell_text(&r.cells[j]).len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        let _ = write!(out, "{:label_width$}", "");
        for (c, w) in self.columns.iter().zip(&widths) {
            let _ = write!(out, "  {c:>w$}");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{:label_width$}", row.label);
            for (cell, w) in row.cells.iter().zip(&widths) {
                let _ = write!(out, "  {:>w$}", Self::cell_text(cell));
            }
            out.push('\n');
        }
        out.push_str("* p < 0.05, ** p < 0.01 (two-tailed)\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::significance;

    #[test]
    fn csv_cells_carry_stars() {
        let mut table = CorrelationTable::new("scores vs citations", vec!["economics".into(), "literature".into()]);
        table.set("macro", 0, Some(significance(0.370, 40).unwrap()));
        table.set("macro", 1, Some(significance(0.188, 40).unwrap()));
        table.set("micro", 0, Some(significance(0.538, 40).unwrap()));
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "label,economics,literature\nmacro,0.370*,0.188\nmicro,0.538**,NA\n"
        );
        assert!(table.render().contains("0.538**"));
    }
}
