//! Orthogonal arrays and the finite-field construction OA(k², k+1, k, 2).
//!
//! Text format: a header `OA n m k t lambda` followed by `m` lines of `n`
//! space-separated symbols in `0..k`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// `rows x runs` symbol table with its claimed strength and index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalArray {
    symbol_counts: Vec<usize>,
    strength: usize,
    index: usize,
    cells: Vec<Vec<usize>>,
}

impl OrthogonalArray {
    /// Validates the symbol ranges and that every `strength`-row subarray
    /// covers each tuple exactly `index` times.
    pub fn new(cells: Vec<Vec<usize>>, symbol_counts: Vec<usize>, strength: usize, index: usize) -> Result<Self> {
        if cells.len() < 2 || cells.len() != symbol_counts.len() {
            return Err(Error::InvalidArray("need at least two rows and one symbol count per row".into()));
        }
        let runs = cells[0].len();
        for (i, row) in cells.iter().enumerate() {
            if row.len() != runs {
                return Err(Error::InvalidArray(format!("row {i} has {} runs, expected {runs}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&s| s >= symbol_counts[i]) {
                return Err(Error::InvalidArray(format!("row {i} has symbol {bad} out of range")));
            }
        }
        if strength == 0 || strength > cells.len() {
            return Err(Error::InvalidArray(format!("strength {strength} out of range")));
        }
        let oa = Self {
            symbol_counts,
            strength,
            index,
            cells,
        };
        if !oa.has_claimed_strength() {
            return Err(Error::InvalidArray(format!(
                "not an array of strength {strength} and index {index}"
            )));
        }
        Ok(oa)
    }

    pub fn runs(&self) -> usize {
        self.cells[0].len()
    }

    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    pub fn symbol_counts(&self) -> &[usize] {
        &self.symbol_counts
    }

    /// Common symbol count, if all rows share one.
    pub fn symbols(&self) -> Option<usize> {
        let s = self.symbol_counts[0];
        self.symbol_counts.iter().all(|&c| c == s).then_some(s)
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.cells[i]
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Tuple counting over every choice of `strength` rows.
    fn has_claimed_strength(&self) -> bool {
        combinations(self.rows(), self.strength).all(|rows| {
            let expected: usize = rows.iter().map(|&r| self.symbol_counts[r]).product();
            if expected * self.index != self.runs() {
                return false;
            }
            let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
            for run in 0..self.runs() {
                *counts
                    .entry(rows.iter().map(|&r| self.cells[r][run]).collect())
                    .or_default() += 1;
            }
            counts.len() == expected && counts.values().all(|&c| c == self.index)
        })
    }

    pub fn to_text(&self) -> String {
        let k = self.symbols().unwrap_or_else(|| *self.symbol_counts.iter().max().unwrap());
        let mut out = format!(
            "OA {} {} {} {} {}\n",
            self.runs(),
            self.rows(),
            k,
            self.strength,
            self.index
        );
        for row in &self.cells {
            let line: Vec<String> = row.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty orthogonal array file".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 6 || fields[0] != "OA" {
            return Err(Error::Parse {
                line: hline,
                message: "expected header `OA n m k t lambda`".into(),
            });
        }
        let nums: Vec<usize> = fields[1..]
            .iter()
            .map(|f| f.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: hline,
                message: e.to_string(),
            })?;
        let (n, m, k, t, lambda) = (nums[0], nums[1], nums[2], nums[3], nums[4]);
        let mut cells = Vec::with_capacity(m);
        for (line, l) in lines {
            let row: Vec<usize> = l
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e: std::num::ParseIntError| Error::Parse {
                    line,
                    message: e.to_string(),
                })?;
            if row.len() != n {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {n} symbols, found {}", row.len()),
                });
            }
            cells.push(row);
        }
        if cells.len() != m {
            return Err(Error::Parse {
                line: hline,
                message: format!("header declares {m} rows, found {}", cells.len()),
            });
        }
        Self::new(cells, vec![k; m], t, lambda)
    }
}

/// OA(k², k+1, k, 2) of index 1 over GF(k).
///
/// Runs are the pairs `(x, y)` in index order `x * k + y`. Row 0 is `x`;
/// row `1 + c` is `y + c·x` for each field element `c`.
pub fn oa_from_field(k: u64) -> Result<OrthogonalArray> {
    let field = FieldSpec::new(k)?;
    let els: Vec<_> = field.elements().collect();
    let mut cells = vec![Vec::with_capacity(els.len() * els.len()); els.len() + 1];
    for &x in &els {
        for &y in &els {
            cells[0].push(x.index() as usize);
            for (ci, &c) in els.iter().enumerate() {
                cells[ci + 1].push(field.add(y, field.mul(c, x)).index() as usize);
            }
        }
    }
    let k = k as usize;
    Ok(OrthogonalArray {
        symbol_counts: vec![k; k + 1],
        strength: 2,
        index: 1,
        cells,
    })
}

/// Lexicographic `r`-subsets of `0..n`.
pub(crate) fn combinations(n: usize, r: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (r <= n).then(|| (0..r).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut i = r;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - r + i {
                next[i] += 1;
                for j in i + 1..r {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}
