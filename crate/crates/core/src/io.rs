//! Plan files: a line-oriented text format and CSV.
//!
//! Both store one run per line and one factor per column.
//!
//! Text format:
//!
//! ```text
//! omep-plan 1
//! factor A 3 0 1 2
//! block bl 2 b1 b2
//! note free text to end of line
//! runs 4
//! 0 b1
//! ...
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. Each descriptor
//! gives the name, the level count and the labels in order; exactly the
//! factors introduced with `block` are block factors (at most one).
//!
//! CSV: a header of factor names with the block factor's name suffixed by
//! `*`, an optional row of level counts written `#3`, then one row per run.
//! With level counts the labels are `0..s-1`; without, they are read off
//! the data. Notes are not stored.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::plan::{Factor, Plan};

pub const PLAN_MAGIC: &str = "omep-plan";
pub const PLAN_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlanFormat {
    #[default]
    Text,
    Csv,
}

impl PlanFormat {
    /// `.csv` selects CSV; everything else is the text format.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => PlanFormat::Csv,
            _ => PlanFormat::Text,
        }
    }

    pub fn write(self, plan: &Plan) -> String {
        match self {
            PlanFormat::Text => write_plan(plan),
            PlanFormat::Csv => write_csv(plan),
        }
    }
}

impl FromStr for PlanFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" | "plan" => Ok(PlanFormat::Text),
            "csv" => Ok(PlanFormat::Csv),
            _ => Err(Error::InvalidArgument(format!("unknown format `{s}` (expected text or csv)"))),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn write_plan(plan: &Plan) -> String {
    let mut out = format!("{PLAN_MAGIC} {PLAN_VERSION}\n");
    for (i, f) in plan.factors().iter().enumerate() {
        let kind = if plan.block_index() == Some(i) { "block" } else { "factor" };
        out.push_str(&format!("{kind} {} {} {}\n", f.name(), f.level_count(), f.labels().join(" ")));
    }
    for note in plan.notes() {
        out.push_str(&format!("note {}\n", note.replace(['\n', '\r'], " ")));
    }
    out.push_str(&format!("runs {}\n", plan.runs()));
    for run in 0..plan.runs() {
        let row: Vec<&str> = (0..plan.factors().len()).map(|f| plan.label(f, run)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_plan(text: &str) -> Result<Plan> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (n, header) = lines.next().ok_or_else(|| parse_err(0, "empty plan file"))?;
    match header.split_whitespace().collect::<Vec<_>>()[..] {
        [PLAN_MAGIC, v] if v == PLAN_VERSION.to_string() => {}
        [PLAN_MAGIC, v] => return Err(parse_err(n, format!("unsupported version `{v}`"))),
        _ => return Err(parse_err(n, format!("expected `{PLAN_MAGIC} {PLAN_VERSION}` header"))),
    }

    let mut factors = Vec::new();
    let mut block = None;
    let mut notes = Vec::new();
    let runs = loop {
        let (n, line) = lines.next().ok_or_else(|| parse_err(n, "missing `runs` line"))?;
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match keyword {
            "factor" | "block" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [name, count, labels @ ..] = &parts[..] else {
                    return Err(parse_err(n, "descriptor needs a name and a level count"));
                };
                let count: usize = count.parse().map_err(|_| parse_err(n, format!("bad level count `{count}`")))?;
                if labels.len() != count {
                    return Err(parse_err(n, format!("{count} levels declared but {} labels given", labels.len())));
                }
                let f = Factor::new(*name, labels.iter().map(|l| l.to_string()).collect())
                    .map_err(|e| parse_err(n, e.to_string()))?;
                if keyword == "block" {
                    if block.is_some() {
                        return Err(parse_err(n, "more than one block factor"));
                    }
                    block = Some(f.name().to_string());
                }
                factors.push(f);
            }
            "note" => notes.push(rest.trim().to_string()),
            "runs" => {
                break rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| parse_err(n, format!("bad run count `{}`", rest.trim())))?
            }
            other => return Err(parse_err(n, format!("unexpected `{other}`"))),
        }
    };

    let mut table = vec![Vec::with_capacity(runs); factors.len()];
    let mut last = n;
    for (n, line) in lines.by_ref().take(runs) {
        last = n;
        let cells: Vec<&str> = line.split_whitespace().collect();
        if cells.len() != factors.len() {
            return Err(parse_err(n, format!("expected {} cells, found {}", factors.len(), cells.len())));
        }
        for ((f, cell), col) in factors.iter().zip(cells).zip(table.iter_mut()) {
            let idx = f
                .labels()
                .iter()
                .position(|l| l == cell)
                .ok_or_else(|| parse_err(n, format!("`{cell}` is not a level of `{}`", f.name())))?;
            col.push(idx);
        }
    }
    if table.first().map_or(0, Vec::len) != runs {
        return Err(parse_err(last, format!("expected {runs} runs")));
    }
    if let Some((n, _)) = lines.next() {
        return Err(parse_err(n, "data after the last run"));
    }
    let plan = Plan::new(factors, table, block.as_deref()).map_err(|e| parse_err(0, e.to_string()))?;
    Ok(notes.into_iter().fold(plan, Plan::with_note))
}

fn uses_index_labels(plan: &Plan) -> bool {
    plan.factors()
        .iter()
        .all(|f| f.labels().iter().enumerate().all(|(i, l)| *l == i.to_string()))
}

pub fn write_csv(plan: &Plan) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = plan
        .factors()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if plan.block_index() == Some(i) {
                format!("{}*", f.name())
            } else {
                f.name().to_string()
            }
        })
        .collect();
    w.write_record(&header).expect("in-memory write");
    if uses_index_labels(plan) {
        w.write_record(plan.factors().iter().map(|f| format!("#{}", f.level_count())))
            .expect("in-memory write");
    }
    for run in 0..plan.runs() {
        w.write_record((0..plan.factors().len()).map(|f| plan.label(f, run)))
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("labels are UTF-8")
}

pub fn read_csv(text: &str) -> Result<Plan> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| parse_err(i + 1, e.to_string()))?;
        rows.push((i + 1, rec.iter().map(str::to_string).collect::<Vec<_>>()));
    }
    let mut rows = rows.into_iter();
    let (_, header) = rows.next().ok_or_else(|| parse_err(0, "empty CSV"))?;
    let mut block = None;
    let names: Vec<String> = header
        .iter()
        .map(|h| match h.strip_suffix('*') {
            Some(name) => {
                block = Some(name.to_string());
                name.to_string()
            }
            None => h.clone(),
        })
        .collect();
    if header.iter().filter(|h| h.ends_with('*')).count() > 1 {
        return Err(parse_err(1, "more than one block factor"));
    }

    let mut data: Vec<(usize, Vec<String>)> = rows.collect();
    let mut counts = None;
    if let Some((n, first)) = data.first() {
        if first.iter().any(|c| c.starts_with('#')) {
            let parsed: Option<Vec<usize>> = first.iter().map(|c| c.strip_prefix('#')?.parse().ok()).collect();
            counts = Some(parsed.ok_or_else(|| parse_err(*n, "level-count row must be `#s` in every column"))?);
            data.remove(0);
        }
    }
    let mut columns = vec![Vec::with_capacity(data.len()); names.len()];
    for (n, row) in &data {
        for (col, cell) in columns.iter_mut().zip(row) {
            col.push(cell.clone());
        }
        if row.len() != names.len() {
            return Err(parse_err(*n, format!("expected {} cells, found {}", names.len(), row.len())));
        }
    }

    let plan = match counts {
        None => Plan::from_labels(names, columns, block.as_deref()),
        Some(counts) => {
            if counts.len() != names.len() {
                return Err(parse_err(2, "level-count row has the wrong length"));
            }
            let mut factors = Vec::new();
            let mut table = Vec::new();
            for ((name, s), col) in names.into_iter().zip(counts).zip(columns) {
                let f = Factor::with_levels(name, s).map_err(|e| parse_err(1, e.to_string()))?;
                let mut row = Vec::with_capacity(col.len());
                for (cell, (n, _)) in col.iter().zip(&data) {
                    let idx = f
                        .labels()
                        .iter()
                        .position(|l| l == cell)
                        .ok_or_else(|| parse_err(*n, format!("`{cell}` is not a level of `{}`", f.name())))?;
                    row.push(idx);
                }
                factors.push(f);
                table.push(row);
            }
            Plan::new(factors, table, block.as_deref())
        }
    };
    plan.map_err(|e| parse_err(0, e.to_string()))
}

/// Reads either format, recognizing the text format by its header line.
pub fn read_any(text: &str) -> Result<Plan> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.starts_with(PLAN_MAGIC) => read_plan(text),
        Some(_) => read_csv(text),
        None => Err(parse_err(0, "empty plan file")),
    }
}
