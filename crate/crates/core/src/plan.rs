//! Mixed arrays: factors, level tables and the optional block factor.
//!
//! The table is stored the way plans are usually printed, one row per
//! factor and one column per run. Levels are indices `0..s`; the original
//! labels are kept on the [`Factor`] for reporting.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    name: String,
    labels: Vec<String>,
}

impl Factor {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ',') {
            return Err(Error::InvalidPlan(format!("bad factor name `{name}`")));
        }
        if labels.len() < 2 {
            return Err(Error::InvalidPlan(format!("factor `{name}` needs at least two levels")));
        }
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::InvalidPlan(format!("factor `{name}` has repeated level labels")));
        }
        if labels.iter().any(|l| l.is_empty() || l.chars().any(|c| c.is_whitespace() || c == ',')) {
            return Err(Error::InvalidPlan(format!("factor `{name}` has a label with whitespace or commas")));
        }
        Ok(Self { name, labels })
    }

    /// Factor with labels `0..levels`.
    pub fn with_levels(name: impl Into<String>, levels: usize) -> Result<Self> {
        Self::new(name, (0..levels).map(|l| l.to_string()).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn level_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    factors: Vec<Factor>,
    table: Vec<Vec<usize>>,
    block: Option<usize>,
    notes: Vec<String>,
}

impl Plan {
    /// `table[f][run]` is the level index of factor `f` in `run`.
    pub fn new(factors: Vec<Factor>, table: Vec<Vec<usize>>, block: Option<&str>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidPlan("no factors".into()));
        }
        if factors.len() != table.len() {
            return Err(Error::InvalidPlan(format!(
                "{} factors but {} table rows",
                factors.len(),
                table.len()
            )));
        }
        let names: BTreeSet<&str> = factors.iter().map(Factor::name).collect();
        if names.len() != factors.len() {
            return Err(Error::InvalidPlan("duplicate factor names".into()));
        }
        let runs = table[0].len();
        if runs == 0 {
            return Err(Error::InvalidPlan("no runs".into()));
        }
        for (f, row) in factors.iter().zip(&table) {
            if row.len() != runs {
                return Err(Error::InvalidPlan(format!(
                    "factor `{}` has {} runs, expected {runs}",
                    f.name,
                    row.len()
                )));
            }
            let mut seen = vec![false; f.level_count()];
            for &l in row {
                if l >= f.level_count() {
                    return Err(Error::InvalidPlan(format!("factor `{}` has level index {l} out of range", f.name)));
                }
                seen[l] = true;
            }
            if let Some(missing) = seen.iter().position(|s| !s) {
                return Err(Error::InvalidPlan(format!(
                    "level `{}` of factor `{}` never occurs",
                    f.labels[missing], f.name
                )));
            }
        }
        let block = block
            .map(|b| {
                factors
                    .iter()
                    .position(|f| f.name == b)
                    .ok_or_else(|| Error::UnknownFactor(b.to_string()))
            })
            .transpose()?;
        Ok(Self {
            factors,
            table,
            block,
            notes: Vec::new(),
        })
    }

    /// Builds a plan from raw labels, one `Vec` per factor. Each factor's
    /// levels are canonicalized in numeric order when every label is an
    /// integer, lexicographic order otherwise.
    pub fn from_labels(names: Vec<String>, columns: Vec<Vec<String>>, block: Option<&str>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::InvalidPlan("one label column per factor required".into()));
        }
        let mut factors = Vec::with_capacity(names.len());
        let mut table = Vec::with_capacity(names.len());
        for (name, col) in names.into_iter().zip(columns) {
            let mut labels: Vec<String> = col.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
            if labels.iter().all(|l| l.parse::<i64>().is_ok()) {
                labels.sort_by_key(|l| l.parse::<i64>().unwrap());
            }
            let row = col
                .iter()
                .map(|l| labels.iter().position(|x| x == l).unwrap())
                .collect();
            factors.push(Factor::new(name, labels)?);
            table.push(row);
        }
        Self::new(factors, table, block)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn without_notes(&self) -> Self {
        Self {
            notes: Vec::new(),
            ..self.clone()
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor_names(&self) -> Vec<&str> {
        self.factors.iter().map(Factor::name).collect()
    }

    pub fn runs(&self) -> usize {
        self.table[0].len()
    }

    pub fn factor_index(&self, name: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(|| Error::UnknownFactor(name.to_string()))
    }

    pub fn factor(&self, name: &str) -> Result<&Factor> {
        Ok(&self.factors[self.factor_index(name)?])
    }

    pub fn level_count(&self, idx: usize) -> usize {
        self.factors[idx].level_count()
    }

    pub fn levels(&self, idx: usize) -> &[usize] {
        &self.table[idx]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn block_index(&self) -> Option<usize> {
        self.block
    }

    pub fn block_factor(&self) -> Option<&Factor> {
        self.block.map(|b| &self.factors[b])
    }

    /// Same runs with the block designation moved (or removed).
    pub fn with_block(&self, block: Option<&str>) -> Result<Self> {
        let mut out = Self::new(self.factors.clone(), self.table.clone(), block)?;
        out.notes = self.notes.clone();
        Ok(out)
    }

    /// Label of factor `idx` in `run`.
    pub fn label(&self, idx: usize, run: usize) -> &str {
        &self.factors[idx].labels[self.table[idx][run]]
    }

    /// Printed-table rendering: one line per factor, runs as columns.
    pub fn render_rows(&self) -> String {
        let width = self
            .factors
            .iter()
            .flat_map(|f| f.labels.iter().map(String::len))
            .max()
            .unwrap_or(1);
        let name_width = self.factors.iter().map(|f| f.name.len()).max().unwrap_or(1);
        let mut out = String::new();
        for (i, f) in self.factors.iter().enumerate() {
            let cells: Vec<String> = (0..self.runs())
                .map(|r| format!("{:>width$}", self.label(i, r)))
                .collect();
            let tag = if Some(i) == self.block { " (block)" } else { "" };
            out.push_str(&format!("{:<name_width$} | {}{tag}\n", f.name, cells.join(" ")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_factor() -> Plan {
        Plan::new(
            vec![Factor::with_levels("A", 2).unwrap(), Factor::with_levels("B", 3).unwrap()],
            vec![vec![0, 1, 0, 1, 0, 1], vec![0, 0, 1, 1, 2, 2]],
            Some("B"),
        )
        .unwrap()
    }

    #[test]
    fn lookup_and_block() {
        let p = two_factor();
        assert_eq!(p.runs(), 6);
        assert_eq!(p.factor_index("B").unwrap(), 1);
        assert_eq!(p.block_factor().unwrap().name(), "B");
        assert_eq!(p.factor_index("Z"), Err(Error::UnknownFactor("Z".into())));
    }

    #[test]
    fn rejects_invalid_tables() {
        let a = || Factor::with_levels("A", 3).unwrap();
        assert!(Plan::new(vec![a()], vec![vec![0, 1, 3]], None).is_err());
        // level 2 never used
        assert!(Plan::new(vec![a()], vec![vec![0, 1, 1]], None).is_err());
        assert!(Plan::new(vec![a(), a()], vec![vec![0, 1, 2], vec![0, 1, 2]], None).is_err());
        assert!(Plan::new(vec![a()], vec![vec![0, 1, 2]], Some("X")).is_err());
        assert!(Factor::with_levels("A", 1).is_err());
        assert!(Factor::new("A", vec!["x".into(), "x".into()]).is_err());
    }

    #[test]
    fn label_canonicalization() {
        let p = Plan::from_labels(
            vec!["T".into(), "S".into()],
            vec![
                vec!["10".into(), "2".into(), "10".into(), "-1".into()],
                vec!["hi".into(), "lo".into(), "hi".into(), "lo".into()],
            ],
            None,
        )
        .unwrap();
        assert_eq!(p.factors()[0].labels(), &["-1", "2", "10"]);
        assert_eq!(p.levels(0), &[2, 1, 2, 0]);
        assert_eq!(p.levels(1), &[0, 1, 0, 1]);
        assert_eq!(p.label(0, 1), "2");
    }

    #[test]
    fn render_shows_rows_as_factors() {
        let text = two_factor().render_rows();
        assert_eq!(text.lines().next().unwrap(), "A | 0 1 0 1 0 1");
        assert!(text.lines().nth(1).unwrap().ends_with("(block)"));
    }
}
