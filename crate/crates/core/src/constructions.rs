//! Plan constructions: the 12-run plans, the 8-run plan `A_8`, the blocked
//! series on `4n` runs and the composition of a block design with an
//! orthogonal array.
//!
//! All constructors are deterministic.

use std::fmt;
use std::str::FromStr;

use crate::block_design::BlockDesign;
use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::oa::OrthogonalArray;
use crate::plan::{Factor, Plan};

/// Which small-factor array sits on top of the `4n`-run series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesVariant {
    /// Three two-level factors.
    I,
    /// One two-level and one three-level factor.
    II,
    /// One four-level factor.
    III,
}

impl SeriesVariant {
    pub const ALL: [SeriesVariant; 3] = [SeriesVariant::I, SeriesVariant::II, SeriesVariant::III];

    /// Level counts of the small factors, in row order.
    pub fn small_levels(self) -> &'static [usize] {
        match self {
            SeriesVariant::I => &[2, 2, 2],
            SeriesVariant::II => &[2, 3],
            SeriesVariant::III => &[4],
        }
    }
}

impl fmt::Display for SeriesVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesVariant::I => "i",
            SeriesVariant::II => "ii",
            SeriesVariant::III => "iii",
        })
    }
}

impl FromStr for SeriesVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" | "1" => Ok(SeriesVariant::I),
            "ii" | "2" => Ok(SeriesVariant::II),
            "iii" | "3" => Ok(SeriesVariant::III),
            _ => Err(Error::InvalidArgument(format!("unknown variant `{s}` (expected i, ii or iii)"))),
        }
    }
}

/// The small 4-column arrays `U_1`, `U_2`, `U_3`.
pub fn build_u(variant: SeriesVariant) -> Vec<Vec<usize>> {
    match variant {
        SeriesVariant::I => vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1], vec![0, 1, 1, 0]],
        SeriesVariant::II => vec![vec![0, 0, 0, 1], vec![0, 1, 2, 0]],
        SeriesVariant::III => vec![vec![0, 1, 2, 3]],
    }
}

/// `U_1` with a row of zeros appended.
pub fn build_v() -> Vec<Vec<usize>> {
    let mut v = build_u(SeriesVariant::I);
    v.push(vec![0; 4]);
    v
}

const SMALL_NAMES: [&str; 3] = ["E", "F", "G"];

fn small_factors(variant: SeriesVariant) -> Vec<Factor> {
    variant
        .small_levels()
        .iter()
        .zip(SMALL_NAMES)
        .map(|(&s, name)| Factor::with_levels(name, s).expect("valid small factor"))
        .collect()
}

/// `[V, V+1, V+2; U_i, U_i, U_i]` (mod 3): four three-level factors `A..D`
/// followed by the small factors `E..`.
pub fn build_a12(variant: SeriesVariant) -> Plan {
    let v = build_v();
    let u = build_u(variant);
    let mut table: Vec<Vec<usize>> = v
        .iter()
        .map(|row| (0..3).flat_map(|shift| row.iter().map(move |&x| (x + shift) % 3)).collect())
        .collect();
    table.extend(u.iter().map(|row| row.repeat(3)));
    let mut factors: Vec<Factor> = ["A", "B", "C", "D"]
        .iter()
        .map(|n| Factor::with_levels(*n, 3).unwrap())
        .collect();
    factors.extend(small_factors(variant));
    Plan::new(factors, table, None).expect("12-run plan is valid")
}

/// The printed 8-run plan for three three-level factors.
pub fn build_a8() -> Plan {
    let table = vec![
        vec![0, 0, 0, 0, 1, 1, 2, 2],
        vec![0, 2, 0, 2, 0, 1, 0, 1],
        vec![2, 0, 0, 2, 1, 0, 0, 1],
    ];
    let factors = ["A", "B", "C"].iter().map(|n| Factor::with_levels(*n, 3).unwrap()).collect();
    Plan::new(factors, table, None).expect("8-run plan is valid")
}

/// Name of the block factor in every blocked construction.
pub const BLOCK: &str = "bl";

/// `[U_i, .., U_i; V, V+1, .., V+n-1]` (mod n) on `n` blocks of size 4.
///
/// Factor order: small factors `E..`, the `n`-level factors `A, B, C`, then
/// the block factor `bl`. `n = 3, 4` are built with a note attached.
pub fn build_series(variant: SeriesVariant, n: usize) -> Result<Plan> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("n must be >= 3, got {n}")));
    }
    let u = build_u(variant);
    let v = build_v();
    let mut table: Vec<Vec<usize>> = u.iter().map(|row| row.repeat(n)).collect();
    for row in &v {
        table.push((0..n).flat_map(|shift| row.iter().map(move |&x| (x + shift) % n)).collect());
    }
    let mut factors = small_factors(variant);
    for name in ["A", "B", "C", BLOCK] {
        factors.push(Factor::with_levels(name, n)?);
    }
    let plan = Plan::new(factors, table, Some(BLOCK))?;
    Ok(if n < 5 {
        plan.with_note(format!("n = {n} lies outside the range n >= 5 of the general construction"))
    } else {
        plan
    })
}

fn treatment_factor_name(i: usize, count: usize) -> String {
    if count <= 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("F{}", i + 1)
    }
}

/// Concatenates one copy of `oa` per block of `design`: in block `j` the
/// first `m-1` rows take their symbols from block `j`'s treatments, and the
/// last row is relabeled to the new blocks `jk, .., jk + k - 1`.
pub fn build_omep_bl(design: &BlockDesign, oa: &OrthogonalArray) -> Result<Plan> {
    if !design.is_binary() {
        return Err(Error::InvalidDesign("design is not binary".into()));
    }
    if !design.is_connected() {
        return Err(Error::InvalidDesign("design is not connected".into()));
    }
    let k = design
        .block_size()
        .ok_or_else(|| Error::InvalidDesign("blocks have unequal sizes".into()))?;
    if oa.symbols() != Some(k) || oa.runs() != k * k || oa.strength() < 2 || oa.index() != 1 {
        return Err(Error::InvalidArgument(format!(
            "need an index-1 strength-2 array on {} runs with {k} symbols, got OA({}, {}, {:?}, {}) of index {}",
            k * k,
            oa.runs(),
            oa.rows(),
            oa.symbols(),
            oa.strength(),
            oa.index()
        )));
    }
    let m = oa.rows();
    let treatment_rows = m - 1;
    let mut table = vec![Vec::with_capacity(design.block_count() * k * k); m];
    for (j, block) in design.blocks().iter().enumerate() {
        for run in 0..oa.runs() {
            for (i, row) in table.iter_mut().take(treatment_rows).enumerate() {
                row.push(block[oa.row(i)[run]]);
            }
            table[treatment_rows].push(j * k + oa.row(treatment_rows)[run]);
        }
    }
    let mut factors: Vec<Factor> = (0..treatment_rows)
        .map(|i| Factor::with_levels(treatment_factor_name(i, treatment_rows), design.treatments()))
        .collect::<Result<_>>()?;
    factors.push(Factor::with_levels(BLOCK, design.block_count() * k)?);
    Plan::new(factors, table, Some(BLOCK))
}

fn is_prime_power(k: usize) -> bool {
    prime_power(k as u64).is_some()
}

/// Two blocks `{1..k}` and `{v-k+1..v}` with `k` the smallest prime power
/// satisfying `2k > v`, so the blocks overlap and the design is connected.
pub fn half_overlap_design(v: usize) -> Result<BlockDesign> {
    if v < 4 {
        return Err(Error::InvalidArgument(format!("half-overlap designs need v >= 4, got {v}")));
    }
    let k = (v / 2 + 1..=v).find(|&k| is_prime_power(k)).expect("a prime lies in (v/2, v]");
    BlockDesign::new(v, vec![(0..k).collect(), (v - k..v).collect()])
}

pub const CATALOG: [&str; 4] = ["a", "b", "c", "d"];

/// The connected equireplicate designs (a)-(d).
pub fn catalog_design(name: &str) -> Result<BlockDesign> {
    match name {
        "a" => BlockDesign::from_one_based(6, &[&[1, 2, 3, 4], &[1, 2, 5, 6], &[3, 4, 5, 6]]),
        "b" => BlockDesign::from_one_based(8, &[&[1, 2, 3, 4], &[5, 6, 7, 8], &[1, 2, 5, 6], &[3, 4, 7, 8]]),
        "c" => BlockDesign::from_one_based(
            10,
            &[&[1, 2, 3, 4, 5], &[6, 7, 8, 9, 10], &[1, 2, 3, 6, 7], &[4, 5, 8, 9, 10]],
        ),
        "d" => BlockDesign::from_one_based(
            12,
            &[&[1, 2, 3, 4, 5, 6, 7, 8], &[1, 2, 3, 4, 9, 10, 11, 12], &[5, 6, 7, 8, 9, 10, 11, 12]],
        ),
        _ => Err(Error::InvalidArgument(format!("unknown catalog design `{name}` (expected a, b, c or d)"))),
    }
}
