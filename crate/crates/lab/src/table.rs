use std::collections::BTreeMap;
use std::fmt::Write;

use crate::config::Experiment;
use crate::LabError;

/// Rows of one experiment under its fixed header. The first column is
/// always `experiment`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub experiment: Experiment,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Display formatting of `f64` round-trips exactly, so verdicts recomputed
/// from a CSV see the same numbers as the run that wrote it.
pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

impl Table {
    pub fn new(experiment: Experiment, header: &str) -> Table {
        Table {
            experiment,
            header: header.split(',').map(str::to_string).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row; the `experiment` column is filled in.
    pub fn push(&mut self, cells: Vec<String>) {
        let mut row = Vec::with_capacity(cells.len() + 1);
        row.push(self.experiment.name().to_string());
        row.extend(cells);
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Table, LabError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| LabError::Csv("empty file".into()))?
            .split(',')
            .map(|s| s.trim().to_string())
            .collect();
        if header.first().map(String::as_str) != Some("experiment") {
            return Err(LabError::Csv("first column must be 'experiment'".into()));
        }
        let mut experiment = None;
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
            if row.len() != header.len() {
                return Err(LabError::Csv(format!(
                    "row {} has {} fields, header has {}",
                    i + 2,
                    row.len(),
                    header.len()
                )));
            }
            let e: Experiment = row[0].parse()?;
            if experiment.is_some_and(|x| x != e) {
                return Err(LabError::Csv(format!("row {} mixes experiments", i + 2)));
            }
            experiment = Some(e);
            rows.push(row);
        }
        let experiment = match experiment {
            Some(e) => e,
            None => return Err(LabError::Csv("no data rows".into())),
        };
        let expected = crate::experiments::header(experiment);
        if header.join(",") != expected {
            return Err(LabError::Csv(format!(
                "header does not match the {experiment} schema: expected '{expected}'"
            )));
        }
        Ok(Table {
            experiment,
            header,
            rows,
        })
    }

    pub fn records(&self) -> impl Iterator<Item = Record<'_>> {
        let index: BTreeMap<&str, usize> = self.header.iter().enumerate().map(|(i, h)| (h.as_str(), i)).collect();
        let index = std::rc::Rc::new(index);
        self.rows.iter().map(move |r| Record {
            index: index.clone(),
            row: r,
        })
    }
}

/// Named access to one row.
pub struct Record<'a> {
    index: std::rc::Rc<BTreeMap<&'a str, usize>>,
    row: &'a [String],
}

impl Record<'_> {
    pub fn str(&self, col: &str) -> Result<&str, LabError> {
        self.index
            .get(col)
            .map(|&i| self.row[i].as_str())
            .ok_or_else(|| LabError::Csv(format!("missing column '{col}'")))
    }

    pub fn f64(&self, col: &str) -> Result<f64, LabError> {
        let s = self.str(col)?;
        s.parse()
            .map_err(|_| LabError::Csv(format!("column '{col}': '{s}' is not a number")))
    }

    /// Empty cells read as `None`.
    pub fn opt_f64(&self, col: &str) -> Result<Option<f64>, LabError> {
        if self.str(col)?.is_empty() {
            Ok(None)
        } else {
            self.f64(col).map(Some)
        }
    }
}
