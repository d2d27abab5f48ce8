//! Claim-by-claim checks of the constructed plans.
//!
//! Each suite rebuilds its plans from scratch and compares the computed
//! quantities with the stated ones using exact rational equality. A claim
//! that is evaluated outside the parameter range it was stated for is
//! marked non-binding: it is reported, but does not fail the suite.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use crate::analysis::{
    all_full_c_matrices, c_matrix, dof_summary, full_c_matrix, incidence, is_proportional_frequency,
    orthogonal_through, orthogonal_through_block_counts, replication_vector,
};
use crate::block_design::BlockDesign;
use crate::constructions::{
    build_a12, build_a8, build_omep_bl, build_series, catalog_design, half_overlap_design, SeriesVariant, BLOCK,
    CATALOG,
};
use crate::error::{Error, Result};
use crate::linalg::{self, circulant_i64, int, kn, rat, RatMatrix, Rational};
use crate::oa::{oa_from_field, OrthogonalArray};
use crate::plan::Plan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "N/A",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub id: String,
    /// Which construction and statement the claim comes from.
    pub anchor: String,
    pub expected: String,
    pub computed: String,
    pub verdict: Verdict,
    /// Whether a failure fails the suite.
    pub binding: bool,
    pub notes: String,
}

impl ClaimReport {
    fn new(id: impl Into<String>, anchor: impl Into<String>, expected: impl Into<String>, computed: impl Into<String>, ok: bool) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            expected: expected.into(),
            computed: computed.into(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            binding: true,
            notes: String::new(),
        }
    }

    fn matrix(id: impl Into<String>, anchor: impl Into<String>, expected: &RatMatrix, computed: &RatMatrix) -> Self {
        Self::new(id, anchor, expected.to_string(), computed.to_string(), expected == computed)
    }

    fn holds(id: impl Into<String>, anchor: impl Into<String>, holds: bool) -> Self {
        Self::new(id, anchor, "true", holds.to_string(), holds)
    }

    fn not_applicable(id: impl Into<String>, anchor: impl Into<String>, notes: impl Into<String>) -> Self {
        Self {
            verdict: Verdict::NotApplicable,
            notes: notes.into(),
            ..Self::new(id, anchor, "-", "-", true)
        }
    }

    fn non_binding(mut self, why: &str) -> Self {
        self.binding = false;
        self.append_note(why);
        self
    }

    fn with_note(mut self, note: &str) -> Self {
        self.append_note(note);
        self
    }

    fn append_note(&mut self, note: &str) {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(note);
    }

    pub fn is_failure(&self) -> bool {
        self.binding && self.verdict == Verdict::Fail
    }
}

/// No binding claim failed.
pub fn all_passed(reports: &[ClaimReport]) -> bool {
    !reports.iter().any(ClaimReport::is_failure)
}

/// One line per claim plus a summary line.
pub fn render_text(reports: &[ClaimReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let tag = if r.binding { "" } else { " (non-binding)" };
        let _ = writeln!(out, "[{}] {}{tag}: {}", r.verdict, r.id, r.anchor);
        let _ = writeln!(out, "    expected: {}", r.expected);
        let _ = writeln!(out, "    computed: {}", r.computed);
        if !r.notes.is_empty() {
            let _ = writeln!(out, "    notes: {}", r.notes);
        }
    }
    let count = |v| reports.iter().filter(|r| r.verdict == v).count();
    let _ = writeln!(
        out,
        "{} claims: {} pass, {} fail ({} binding), {} not applicable",
        reports.len(),
        count(Verdict::Pass),
        count(Verdict::Fail),
        reports.iter().filter(|r| r.is_failure()).count(),
        count(Verdict::NotApplicable)
    );
    out
}

/// One JSON object per line.
pub fn render_json_lines(reports: &[ClaimReport]) -> String {
    reports
        .iter()
        .map(|r| serde_json::to_string(r).expect("claim reports serialize") + "\n")
        .collect()
}

fn scaled_k(scale: Rational, n: usize) -> RatMatrix {
    kn(n).scale(&scale)
}

/// Checks on the three 12-run plans.
pub fn verify_a12() -> Result<Vec<ClaimReport>> {
    let mut out = Vec::new();
    let plans = SeriesVariant::ALL.map(build_a12);
    let a1 = &plans[0];
    let three_k3 = scaled_k(int(3), 3);

    let mut c_a1 = Vec::new();
    for q in ["A", "B", "C"] {
        let c = full_c_matrix(a1, q)?;
        out.push(ClaimReport::matrix(format!("a12.1.C_{q}"), format!("A_1(12): C_{q} = 3K_3"), &three_k3, &c));
        c_a1.push(c);
    }
    let c_d = full_c_matrix(a1, "D")?;
    let d_expected = scaled_k(rat(4, 3), 3);
    let mut d_claim = ClaimReport::matrix("a12.1.C_D", "A_1(12): C_D = (4/3)K_3", &d_expected, &c_d);
    if c_d != d_expected && c_d == scaled_k(int(2), 3) {
        d_claim = d_claim.with_note("computed C_D is 2K_3, whose diagonal entries are 4/3");
    }
    out.push(d_claim);
    c_a1.push(c_d);

    let names = a1.factor_names();
    let (three, two) = names.split_at(4);
    let mut two_level_ok = true;
    for p in two {
        for q in names.iter().filter(|q| *q != p) {
            two_level_ok &= is_proportional_frequency(a1, p, q)?;
        }
    }
    out.push(ClaimReport::holds(
        "a12.1.two-level-orthogonal",
        "A_1(12): each two-level factor satisfies proportional frequency with every other factor",
        two_level_ok,
    ));
    let mut pf_pairs = Vec::new();
    for (i, p) in three.iter().enumerate() {
        for q in &three[i + 1..] {
            if is_proportional_frequency(a1, p, q)? {
                pf_pairs.push(format!("{p}{q}"));
            }
        }
    }
    out.push(ClaimReport::new(
        "a12.1.three-level-not-proportional",
        "A_1(12): no pair of three-level factors satisfies proportional frequency",
        "none",
        if pf_pairs.is_empty() { "none".to_string() } else { pf_pairs.join(",") },
        pf_pairs.is_empty(),
    ));

    for (i, plan) in plans.iter().enumerate() {
        let tag = i + 1;
        let mut through = true;
        for (p, q) in [("A", "B"), ("A", "C"), ("B", "C")] {
            through &= orthogonal_through(plan, p, q, "D")?;
        }
        out.push(ClaimReport::holds(
            format!("a12.{tag}.through-D"),
            format!("A_{tag}(12): A, B, C mutually orthogonal through D"),
            through,
        ));
        for p in ["A", "B", "C"] {
            let full = full_c_matrix(plan, p)?;
            let partial = c_matrix(plan, p, p, &["D"])?.matrix;
            out.push(ClaimReport::matrix(
                format!("a12.{tag}.C_{p}=C_{p};D"),
                format!("A_{tag}(12): C_{p} = C_{{{p};D}}"),
                &partial,
                &full,
            ));
        }
        let dof = dof_summary(plan)?;
        out.push(ClaimReport::new(
            format!("a12.{tag}.saturated"),
            format!("A_{tag}(12): saturated main effect plan"),
            "model df 12, residual df 0",
            format!("model df {}, residual df {}", dof.model_df, dof.residual_df),
            dof.model_df == 12 && dof.residual_df == 0,
        ));
    }

    let a2 = &plans[1];
    for (q, c1) in ["A", "B", "C", "D"].iter().zip(&c_a1) {
        out.push(ClaimReport::matrix(
            format!("a12.2.C_{q}-same"),
            format!("A_2(12): C_{q} equals that of A_1(12)"),
            c1,
            &full_c_matrix(a2, q)?,
        ));
    }
    out.push(ClaimReport::matrix(
        "a12.2.C_F",
        "A_2(12): new three-level factor F has C = 3K_3",
        &three_k3,
        &full_c_matrix(a2, "F")?,
    ));
    out.push(ClaimReport::matrix(
        "a12.2.C_E",
        "A_2(12): two-level factor E has C = 3K_2",
        &scaled_k(int(3), 2),
        &full_c_matrix(a2, "E")?,
    ));
    out.push(ClaimReport::matrix(
        "a12.3.C_E",
        "A_3(12): four-level factor E has C = 3K_4",
        &scaled_k(int(3), 4),
        &full_c_matrix(&plans[2], "E")?,
    ));

    // Total information of A..D against four copies of (7/3)K_3.
    let ours: Rational = c_a1.iter().map(RatMatrix::trace).sum();
    let theirs = scaled_k(rat(7, 3), 3).trace() * int(4);
    out.push(
        ClaimReport::new(
            "a12.1.total-information",
            "trace of C_A + C_B + C_C + C_D exceeds that of 4 x (7/3)K_3",
            format!("> {theirs}"),
            ours.to_string(),
            ours > theirs,
        )
        .with_note("the comparison plan is represented only by its stated C-matrices"),
    );
    Ok(out)
}

/// Checks that need the 12-run comparison array, which is not built in.
/// Without a user-supplied plan this yields a single not-applicable claim.
pub fn verify_ww(plan: Option<&Plan>) -> Result<Vec<ClaimReport>> {
    let Some(plan) = plan else {
        return Ok(vec![ClaimReport::not_applicable(
            "ww.C_Q",
            "comparison 12-run array: C_Q = (7/3)K_3, Q = A,B,C,D",
            "array not built in; supply it as a plan file",
        )]);
    };
    let mut out = Vec::new();
    for q in ["A", "B", "C", "D"] {
        if plan.factor(q)?.level_count() != 3 {
            return Err(Error::InvalidArgument(format!("factor {q} must have three levels")));
        }
    }
    for q in ["A", "B", "C", "D"] {
        out.push(ClaimReport::matrix(
            format!("ww.C_{q}"),
            format!("comparison 12-run array: C_{q} = (7/3)K_3"),
            &scaled_k(rat(7, 3), 3),
            &full_c_matrix(plan, q)?,
        ));
    }
    for p in ["A", "B", "C"] {
        let full = full_c_matrix(plan, p)?;
        let partial = c_matrix(plan, p, p, &["D"])?.matrix;
        let gap = &partial - &full;
        out.push(ClaimReport::new(
            format!("ww.E_{p};D"),
            format!("comparison 12-run array: C_{p} < C_{{{p};D}}"),
            "nonzero PSD difference",
            gap.to_string(),
            !gap.is_zero() && linalg::is_positive_semidefinite(&gap),
        ));
    }
    Ok(out)
}

/// Checks on the 8-run plan for three three-level factors.
pub fn verify_a8() -> Result<Vec<ClaimReport>> {
    let plan = build_a8();
    let mut out = Vec::new();
    let printed_b = RatMatrix::from_i64(&[&[2, -1, -1], &[-1, 1, 0], &[-1, 0, 1]]);
    let c_b_a = c_matrix(&plan, "B", "B", &["A"])?.matrix;
    let c_b = full_c_matrix(&plan, "B")?;
    out.push(ClaimReport::holds(
        "a8.B-C-through-A",
        "A_8: B and C orthogonal through A",
        orthogonal_through(&plan, "B", "C", "A")?,
    ));
    out.push(ClaimReport::matrix("a8.C_B;A", "A_8: C_{B;A} printed matrix", &printed_b, &c_b_a));
    out.push(ClaimReport::matrix("a8.C_B", "A_8: C_B = C_{B;A}", &c_b_a, &c_b));
    out.push(spectrum_claim(
        "a8.spectrum-C_B",
        "A_8: C_B has spectrum 0^1.1^1.3^1",
        &c_b,
        &[(int(0), 1), (int(1), 1), (int(3), 1)],
    )?);
    out.push(ClaimReport::matrix("a8.C_C", "A_8: C_C equals C_B", &c_b, &full_c_matrix(&plan, "C")?));

    // Hypothetical OMEP for one three-level factor on 8 runs with r = (3,3,2).
    let r = [3i64, 3, 2];
    let hypothetical = RatMatrix::from_fn(3, 3, |i, j| {
        let diag = if i == j { int(r[i]) } else { int(0) };
        diag - rat(r[i] * r[j], 8)
    });
    out.push(
        spectrum_claim(
            "a8.hypothetical-omep-spectrum",
            "three-level factor, best replication on 8 runs: spectrum 0^1.(9/4)^1.3^1",
            &hypothetical,
            &[(int(0), 1), (rat(9, 4), 1), (int(3), 1)],
        )?
        .with_note("replication vector (3,3,2), information R - r r^T / 8"),
    );

    let printed_a = RatMatrix::from_i64(&[&[4, -2, -2], &[-2, 7, -5], &[-2, -5, 7]]).scale(&rat(1, 6));
    let c_a = full_c_matrix(&plan, "A")?;
    out.push(ClaimReport::matrix("a8.C_A", "A_8: C_A = (1/6)[[4,-2,-2],[-2,7,-5],[-2,-5,7]]", &printed_a, &c_a));
    out.push(spectrum_claim(
        "a8.spectrum-C_A",
        "A_8: C_A has spectrum 0^1.1^1.2^1",
        &c_a,
        &[(int(0), 1), (int(1), 1), (int(2), 1)],
    )?);
    let non_orth = !is_proportional_frequency(&plan, "A", "B")? && !is_proportional_frequency(&plan, "A", "C")?;
    out.push(ClaimReport::holds(
        "a8.A-non-orthogonal",
        "A_8: A is non-orthogonal to B and C",
        non_orth,
    ));
    Ok(out)
}

fn spectrum_claim(id: &str, anchor: &str, m: &RatMatrix, claimed: &[(Rational, usize)]) -> Result<ClaimReport> {
    let ok = linalg::verify_spectrum(m, claimed)?;
    let expected: Vec<String> = claimed.iter().map(|(v, k)| format!("{v}^{k}")).collect();
    Ok(ClaimReport::new(
        id,
        anchor,
        expected.join("."),
        linalg::rational_spectrum(m)?.notation(),
        ok,
    ))
}

/// `L = circ(2, 1, 0, .., 0, 1)`: incidence between two n-level factors.
pub fn series_l(n: usize) -> RatMatrix {
    let mut row = vec![0i64; n];
    row[0] += 2;
    row[1] += 1;
    row[n - 1] += 1;
    circulant_i64(&row)
}

/// `M = 2 circ(1, 1, 0, .., 0)`: block-by-level incidence of an n-level factor.
pub fn series_m(n: usize) -> RatMatrix {
    let mut row = vec![0i64; n];
    row[0] = 2;
    row[1] = 2;
    circulant_i64(&row)
}

/// `circ(2, -1, 0, .., 0, -1)`.
pub fn series_c(n: usize) -> RatMatrix {
    let mut row = vec![0i64; n];
    row[0] += 2;
    row[1] -= 1;
    row[n - 1] -= 1;
    circulant_i64(&row)
}

/// `4I - E (H)^- E^T` with `E = [M M M]` and `H` the 3x3 block matrix with
/// `4I` on the diagonal and `L` elsewhere. Built from the circulant
/// formulas alone, not from a plan.
pub fn series_c_d_assembly(n: usize) -> Result<RatMatrix> {
    let m = series_m(n);
    let l = series_l(n);
    let four = RatMatrix::identity(n).scale(&int(4));
    let e = RatMatrix::hstack(&[m.clone(), m.clone(), m])?;
    let h = RatMatrix::from_blocks(&[
        vec![four.clone(), l.clone(), l.clone()],
        vec![l.clone(), four.clone(), l.clone()],
        vec![l.clone(), l, four.clone()],
    ])?;
    linalg::schur_complement(&four, &e, &e.transpose(), &h, linalg::GInverse::Reflexive)
}

/// Checks on the blocked series `A_i(4n)`.
pub fn verify_series(n: usize, variant: SeriesVariant) -> Result<Vec<ClaimReport>> {
    let plan = build_series(variant, n)?;
    let in_range = n >= 5;
    let pre = format!("series.{variant}.n{n}");
    let anchor = |what: &str| format!("A_{variant}({}) on {n} blocks of size 4: {what}", 4 * n);
    let mut out = Vec::new();
    let g = ["A", "B", "C"];
    let small: Vec<String> = plan.factor_names()[..variant.small_levels().len()]
        .iter()
        .map(|s| s.to_string())
        .collect();

    let l = series_l(n);
    for (p, q) in [("A", "B"), ("A", "C"), ("B", "C")] {
        out.push(ClaimReport::matrix(
            format!("{pre}.N^{p}{q}=L"),
            anchor(&format!("N^{{{p},{q}}} = circ(2,1,0,..,0,1)")),
            &l,
            &incidence(&plan, p, q)?,
        ));
    }
    let m = series_m(n);
    for p in g {
        out.push(ClaimReport::matrix(
            format!("{pre}.N^bl{p}=M"),
            anchor(&format!("N^{{bl,{p}}} = 2 circ(1,1,0,..,0)")),
            &m,
            &incidence(&plan, BLOCK, p)?,
        ));
    }
    for (p, q) in [("A", "B"), ("A", "C"), ("B", "C")] {
        let matrix_form = orthogonal_through(&plan, p, q, BLOCK)?;
        let count_form = orthogonal_through_block_counts(&plan, p, q)?;
        out.push(ClaimReport::holds(
            format!("{pre}.{p}{q}-through-bl"),
            anchor(&format!("{p} and {q} orthogonal through the block factor (matrix and block-count forms)")),
            matrix_form && count_form,
        ));
    }
    let mut pf = true;
    for s in &small {
        for other in g.iter().chain(&[BLOCK]) {
            pf &= is_proportional_frequency(&plan, s, other)?;
        }
    }
    out.push(ClaimReport::holds(
        format!("{pre}.small-orthogonal"),
        anchor("small factors satisfy proportional frequency with A, B, C and the block factor"),
        pf,
    ));
    match variant {
        SeriesVariant::I => {
            let mut mutual = true;
            for (i, a) in small.iter().enumerate() {
                for b in &small[i + 1..] {
                    mutual &= is_proportional_frequency(&plan, a, b)?;
                }
            }
            out.push(ClaimReport::holds(
                format!("{pre}.two-level-mutual"),
                anchor("two-level factors mutually orthogonal"),
                mutual,
            ));
        }
        SeriesVariant::II => {
            out.push(ClaimReport::holds(
                format!("{pre}.E-F-non-orthogonal"),
                anchor("two- and three-level factors non-orthogonal to each other"),
                !is_proportional_frequency(&plan, &small[0], &small[1])?,
            ));
        }
        SeriesVariant::III => {}
    }

    let expected_small: Vec<(String, RatMatrix)> = match variant {
        SeriesVariant::I => small
            .iter()
            .map(|s| (format!("{s}: (2n)K_2"), scaled_k(int(2 * n as i64), 2)))
            .collect(),
        SeriesVariant::II => vec![
            (format!("{}: nK_2", small[0]), scaled_k(int(n as i64), 2)),
            (format!("{}: nK_3", small[1]), scaled_k(int(n as i64), 3)),
        ],
        SeriesVariant::III => vec![(format!("{}: nK_4", small[0]), scaled_k(int(n as i64), 4))],
    };
    let all_c = all_full_c_matrices(&plan)?;
    for (i, (what, expected)) in expected_small.iter().enumerate() {
        out.push(ClaimReport::matrix(
            format!("{pre}.C_{}", small[i]),
            anchor(&format!("C-matrix of {what}")),
            expected,
            &all_c[i],
        ));
    }
    let circ = series_c(n);
    for q in g {
        let full = &all_c[plan.factor_index(q)?];
        out.push(ClaimReport::matrix(
            format!("{pre}.C_{q}"),
            anchor(&format!("C_{q} = circ(2,-1,0,..,0,-1)")),
            &circ,
            full,
        ));
        out.push(ClaimReport::matrix(
            format!("{pre}.C_{q}=C_{q};bl"),
            anchor(&format!("C_{q} = C_{{{q};bl}}")),
            &c_matrix(&plan, q, q, &[BLOCK])?.matrix,
            full,
        ));
    }
    let dof = dof_summary(&plan)?;
    out.push(ClaimReport::new(
        format!("{pre}.saturated"),
        anchor("saturated"),
        format!("model df {}, residual df 0", 4 * n),
        format!("model df {}, residual df {}", dof.model_df, dof.residual_df),
        dof.model_df == 4 * n && dof.residual_df == 0,
    ));

    // The block factor read as a fourth n-level treatment factor D.
    let c_d = &all_c[plan.factor_index(BLOCK)?];
    let mut n_level = 0;
    for q in g.iter().chain(&[BLOCK]) {
        n_level += usize::from(plan.factor(q)?.level_count() == n);
    }
    out.push(ClaimReport::new(
        format!("{pre}.D-four-n-level"),
        anchor("block factor as D: four n-level factors on 4n runs with C_D of rank n-1"),
        format!("4 factors, {} runs, rank {}", 4 * n, n - 1),
        format!("{n_level} factors, {} runs, rank {}", plan.runs(), linalg::rank(c_d)),
        n_level == 4 && plan.runs() == 4 * n && linalg::rank(c_d) == n - 1,
    ));
    out.push(ClaimReport::matrix(
        format!("{pre}.C_D-assembly"),
        anchor("C_D = 4I_n - E_D (H_D)^- E_D^T with E_D = [M M M]"),
        &series_c_d_assembly(n)?,
        c_d,
    ));
    let block_reps = replication_vector(&plan, BLOCK)?;
    out.push(ClaimReport::new(
        format!("{pre}.blocks"),
        anchor("n blocks of size 4"),
        format!("{n} blocks of size 4"),
        format!("{} blocks, sizes {:?}", block_reps.len(), block_reps),
        block_reps.len() == n && block_reps.iter().all(|&k| k == 4),
    ));

    if !in_range {
        let why = "n outside the range n >= 5 of the general construction";
        out = out.into_iter().map(|c| c.non_binding(why)).collect();
    }
    Ok(out)
}

/// Where the design for an OMEP-on-blocks check comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DesignSource {
    Catalog(String),
    HalfOverlap(usize),
}

impl DesignSource {
    pub fn design(&self) -> Result<BlockDesign> {
        match self {
            DesignSource::Catalog(name) => catalog_design(name),
            DesignSource::HalfOverlap(v) => half_overlap_design(*v),
        }
    }
}

impl fmt::Display for DesignSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DesignSource::Catalog(name) => write!(f, "{name}"),
            DesignSource::HalfOverlap(v) => write!(f, "half:{v}"),
        }
    }
}

impl FromStr for DesignSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(v) = s.strip_prefix("half:") {
            let v = v
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad half-overlap size `{v}`")))?;
            return Ok(DesignSource::HalfOverlap(v));
        }
        if CATALOG.contains(&s) {
            return Ok(DesignSource::Catalog(s.to_string()));
        }
        Err(Error::InvalidArgument(format!(
            "unknown design `{s}` (expected a, b, c, d or half:V)"
        )))
    }
}

/// Checks on the plan built from a block design and an index-1 array.
/// With `oa = None` the field construction for the block size is used.
pub fn verify_omep_bl(label: &str, design: &BlockDesign, oa: Option<&OrthogonalArray>, remark_binding: bool) -> Result<Vec<ClaimReport>> {
    let pre = format!("omep-bl.{label}");
    let anchor = |what: &str| format!("design {label} ({design}): {what}");
    let k = match design.block_size() {
        Some(k) if design.is_binary() && design.is_connected() => k,
        _ => {
            return Ok(vec![ClaimReport::not_applicable(
                format!("{pre}.precondition"),
                anchor("connected binary design with equal block sizes"),
                "precondition failed: design must be binary, connected and have equal block sizes",
            )])
        }
    };
    let owned;
    let oa = match oa {
        Some(oa) => oa,
        None => {
            owned = oa_from_field(k as u64)?;
            &owned
        }
    };
    let plan = build_omep_bl(design, oa)?;
    let (v, b, m) = (design.treatments(), design.block_count(), oa.rows());
    let mut out = Vec::new();

    let blocks = replication_vector(&plan, BLOCK)?;
    let treatments: Vec<usize> = plan.factors().iter().filter(|f| f.name() != BLOCK).map(|f| f.level_count()).collect();
    let shape_ok = blocks.len() == b * k
        && blocks.iter().all(|&s| s == k)
        && treatments.len() == m - 1
        && treatments.iter().all(|&s| s == v)
        && plan.runs() == b * k * k;
    out.push(ClaimReport::new(
        format!("{pre}.shape"),
        anchor("OMEP for a v^(m-1) experiment on bk blocks of size k"),
        format!("{v}^{} on {} blocks of size {k}, {} runs", m - 1, b * k, b * k * k),
        format!(
            "{} factors with levels {:?}, {} blocks of sizes {:?}, {} runs",
            treatments.len(),
            treatments.iter().collect::<std::collections::BTreeSet<_>>(),
            blocks.len(),
            blocks.iter().collect::<std::collections::BTreeSet<_>>(),
            plan.runs()
        ),
        shape_ok,
    ));

    let names: Vec<&str> = plan.factor_names().into_iter().filter(|n| *n != BLOCK).collect();
    let (mut counts_ok, mut through_ok, mut adjusted_ok) = (true, true, true);
    let mut offenders = Vec::new();
    for (i, a) in names.iter().enumerate() {
        for bname in &names[i + 1..] {
            let c1 = orthogonal_through_block_counts(&plan, a, bname)?;
            let c2 = orthogonal_through(&plan, a, bname, BLOCK)?;
            let c3 = c_matrix(&plan, a, bname, &[BLOCK])?.matrix.is_zero();
            if !(c1 && c2 && c3) {
                offenders.push(format!("{a}{bname}"));
            }
            counts_ok &= c1;
            through_ok &= c2;
            adjusted_ok &= c3;
        }
    }
    let pairs = names.len() * (names.len() - 1) / 2;
    let note = if offenders.is_empty() { String::new() } else { format!("failing pairs: {}", offenders.join(",")) };
    out.push(
        ClaimReport::holds(format!("{pre}.block-counts"), anchor(&format!("B_ij = k U_ij for all {pairs} factor pairs")), counts_ok)
            .with_note(&note),
    );
    out.push(ClaimReport::holds(
        format!("{pre}.through-bl"),
        anchor("every factor pair orthogonal through the block factor"),
        through_ok,
    ));
    out.push(ClaimReport::holds(
        format!("{pre}.adjusted-orthogonal"),
        anchor("C_{A,B;bl} = 0 for every factor pair"),
        adjusted_ok,
    ));

    let kcd = design.c_matrix().scale(&int(k as i64));
    let all_c = all_full_c_matrices(&plan)?;
    let mismatched: Vec<&str> = names
        .iter()
        .enumerate()
        .filter(|(i, _)| all_c[*i] != kcd)
        .map(|(_, n)| *n)
        .collect();
    out.push(
        ClaimReport::new(
            format!("{pre}.C_P=kC_d"),
            anchor("C_P = k C_d for every factor P"),
            kcd.to_string(),
            if mismatched.is_empty() { kcd.to_string() } else { format!("differs for {}", mismatched.join(",")) },
            mismatched.is_empty(),
        ),
    );

    // Hypothetical unblocked OMEP on the same runs: C = r K_v with r = bk^2/v.
    let r = rat((b * k * k) as i64, v as i64);
    let c_p = &all_c[0];
    let shifted = c_p - &RatMatrix::identity(v).scale(&r);
    let at_r = v - linalg::rank(&shifted);
    let spectrum = linalg::rational_spectrum(c_p)?;
    let remark = ClaimReport::new(
        format!("{pre}.all-but-two"),
        anchor("all main effect contrasts but two match the unblocked OMEP value r = bk^2/v"),
        format!("eigenvalue {r} with multiplicity {}", v - 3),
        format!("spectrum {}; multiplicity of {r} is {at_r}", spectrum.notation()),
        at_r + 3 == v,
    );
    out.push(if remark_binding {
        remark
    } else {
        ClaimReport {
            verdict: Verdict::NotApplicable,
            notes: "stated only for the catalog designs; spectrum reported for reference".into(),
            ..remark
        }
    });
    Ok(out)
}

/// The remaining design-(a) spectrum claim.
fn design_a_spectrum() -> Result<ClaimReport> {
    let d = catalog_design("a")?;
    let c_p = d.c_matrix().scale(&int(4));
    spectrum_claim(
        "omep-bl.a.spectrum",
        "design a: C_P has spectrum 0^1.6^2.8^3",
        &c_p,
        &[(int(0), 1), (int(6), 2), (int(8), 3)],
    )
}

/// Suite selector for [`run_suite`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Suite {
    A12,
    A8,
    /// `None` runs all three variants.
    Series(usize, Option<SeriesVariant>),
    OmepBl(DesignSource),
    All,
}

impl FromStr for Suite {
    type Err = Error;

    /// `a12`, `a8`, `series:N[:variant]`, `omep-bl:NAME` or `all`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown suite `{s}`"));
        match s {
            "a12" => return Ok(Suite::A12),
            "a8" => return Ok(Suite::A8),
            "all" => return Ok(Suite::All),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("series:") {
            let mut parts = rest.splitn(2, ':');
            let n = parts.next().and_then(|n| n.parse().ok()).ok_or_else(bad)?;
            let variant = parts.next().map(str::parse).transpose()?;
            return Ok(Suite::Series(n, variant));
        }
        if let Some(rest) = s.strip_prefix("omep-bl:") {
            return Ok(Suite::OmepBl(rest.parse()?));
        }
        Err(bad())
    }
}

/// Values of `n` covered by the `all` suite.
pub const SERIES_SIZES: [usize; 6] = [3, 4, 5, 6, 7, 12];

pub fn run_suite(suite: &Suite) -> Result<Vec<ClaimReport>> {
    match suite {
        Suite::A12 => verify_a12(),
        Suite::A8 => verify_a8(),
        Suite::Series(n, variant) => {
            let variants: Vec<SeriesVariant> = variant.map_or(SeriesVariant::ALL.to_vec(), |v| vec![v]);
            let mut out = Vec::new();
            for v in variants {
                out.extend(verify_series(*n, v)?);
            }
            Ok(out)
        }
        Suite::OmepBl(source) => {
            let design = source.design()?;
            let catalog = matches!(source, DesignSource::Catalog(_));
            let mut out = verify_omep_bl(&source.to_string(), &design, None, catalog)?;
            if *source == DesignSource::Catalog("a".into()) {
                out.push(design_a_spectrum()?);
            }
            Ok(out)
        }
        Suite::All => {
            let mut out = verify_a12()?;
            out.extend(verify_ww(None)?);
            out.extend(verify_a8()?);
            for n in SERIES_SIZES {
                out.extend(run_suite(&Suite::Series(n, None))?);
            }
            for name in CATALOG {
                out.extend(run_suite(&Suite::OmepBl(DesignSource::Catalog(name.into())))?);
            }
            for v in 4..=9 {
                out.extend(run_suite(&Suite::OmepBl(DesignSource::HalfOverlap(v)))?);
            }
            Ok(out)
        }
    }
}
