//! Replications, incidence matrices, orthogonality tests and C-matrices.
//!
//! All Gram blocks are assembled from joint level counts: `X_A^T X_B` is the
//! incidence matrix `N^{A,B}` and `X_A^T 1 = r^A`, so the `n x n` projection
//! is never formed.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, int, GInverse, RatMatrix, Rational};
use crate::plan::Plan;

pub fn replication_vector(plan: &Plan, factor: &str) -> Result<Vec<usize>> {
    Ok(replication_by_index(plan, plan.factor_index(factor)?))
}

pub(crate) fn replication_by_index(plan: &Plan, idx: usize) -> Vec<usize> {
    let mut r = vec![0; plan.level_count(idx)];
    for &l in plan.levels(idx) {
        r[l] += 1;
    }
    r
}

/// Diagonal matrix `R^A`.
pub fn replication_matrix(plan: &Plan, factor: &str) -> Result<RatMatrix> {
    let r = replication_vector(plan, factor)?;
    Ok(RatMatrix::diag(&r.iter().map(|&v| int(v as i64)).collect::<Vec<_>>()))
}

fn incidence_by_index(plan: &Plan, a: usize, b: usize) -> RatMatrix {
    let mut counts = vec![vec![0i64; plan.level_count(b)]; plan.level_count(a)];
    for (&la, &lb) in plan.levels(a).iter().zip(plan.levels(b)) {
        counts[la][lb] += 1;
    }
    RatMatrix::from_fn(counts.len(), plan.level_count(b), |i, j| int(counts[i][j]))
}

/// `N^{A,B}`: joint occurrences of level `i` of `A` and level `j` of `B`.
pub fn incidence(plan: &Plan, a: &str, b: &str) -> Result<RatMatrix> {
    Ok(incidence_by_index(plan, plan.factor_index(a)?, plan.factor_index(b)?))
}

/// 0/1 run-by-level matrix `X_A`.
pub fn design_matrix(plan: &Plan, factor: &str) -> Result<RatMatrix> {
    let idx = plan.factor_index(factor)?;
    let levels = plan.levels(idx);
    Ok(RatMatrix::from_fn(plan.runs(), plan.level_count(idx), |run, l| {
        if levels[run] == l {
            Rational::one()
        } else {
            Rational::zero()
        }
    }))
}

/// Column groups of the full model matrix.
#[derive(Clone, Copy)]
enum Term {
    Mean,
    Factor(usize),
}

fn term_width(plan: &Plan, t: Term) -> usize {
    match t {
        Term::Mean => 1,
        Term::Factor(i) => plan.level_count(i),
    }
}

fn cross(plan: &Plan, a: Term, b: Term) -> RatMatrix {
    let as_row = |i| {
        let r = replication_by_index(plan, i);
        RatMatrix::from_fn(1, r.len(), |_, j| int(r[j] as i64))
    };
    match (a, b) {
        (Term::Mean, Term::Mean) => RatMatrix::from_fn(1, 1, |_, _| int(plan.runs() as i64)),
        (Term::Mean, Term::Factor(j)) => as_row(j),
        (Term::Factor(i), Term::Mean) => as_row(i).transpose(),
        (Term::Factor(i), Term::Factor(j)) => incidence_by_index(plan, i, j),
    }
}

fn gram(plan: &Plan, left: &[Term], right: &[Term]) -> Result<RatMatrix> {
    if left.is_empty() || right.is_empty() {
        let rows = left.iter().map(|&t| term_width(plan, t)).sum();
        let cols = right.iter().map(|&t| term_width(plan, t)).sum();
        return Ok(RatMatrix::zeros(rows, cols));
    }
    let grid: Vec<Vec<RatMatrix>> = left
        .iter()
        .map(|&a| right.iter().map(|&b| cross(plan, a, b)).collect())
        .collect();
    RatMatrix::from_blocks(&grid)
}

/// `C_{U,V;L}` together with what it was computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMatrixResult {
    pub targets: (String, String),
    pub eliminated: Vec<String>,
    pub matrix: RatMatrix,
}

fn resolve_elimination(plan: &Plan, targets: &[usize], eliminate: &[&str]) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = Vec::with_capacity(eliminate.len());
    for name in eliminate {
        let idx = plan.factor_index(name)?;
        if targets.contains(&idx) {
            return Err(Error::OverlappingSets(name.to_string()));
        }
        if !out.contains(&idx) {
            out.push(idx);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// How the eliminated effects are removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    /// Symmetric pivoted elimination on the joint Gram matrix.
    #[default]
    Elimination,
    /// `X_U^T X_V - X_U^T Z (Z^T Z)^- Z^T X_V` with the given g-inverse.
    Projection(GInverse),
}

fn terms_of(eliminated: &[usize]) -> Vec<Term> {
    std::iter::once(Term::Mean)
        .chain(eliminated.iter().map(|&i| Term::Factor(i)))
        .collect()
}

fn c_block(plan: &Plan, u: usize, v: usize, eliminated: &[usize], engine: Engine) -> Result<RatMatrix> {
    let z = terms_of(eliminated);
    match engine {
        Engine::Elimination => {
            let mut terms = z.clone();
            terms.push(Term::Factor(u));
            if v != u {
                terms.push(Term::Factor(v));
            }
            let g = gram(plan, &terms, &terms)?;
            let zw: usize = z.iter().map(|&t| term_width(plan, t)).sum();
            let (su, sv) = (plan.level_count(u), plan.level_count(v));
            let keep_len = if v == u { su } else { su + sv };
            let drop: Vec<usize> = (0..zw).collect();
            let keep: Vec<usize> = (zw..zw + keep_len).collect();
            let schur = linalg::eliminate_symmetric(&g, &keep, &drop)?;
            Ok(if v == u { schur } else { schur.block(0, su, su, sv) })
        }
        Engine::Projection(method) => {
            let uv = incidence_by_index(plan, u, v);
            let uz = gram(plan, &[Term::Factor(u)], &z)?;
            let zv = gram(plan, &z, &[Term::Factor(v)])?;
            let zz = gram(plan, &z, &z)?;
            linalg::schur_complement(&uv, &uz, &zv, &zz, method)
        }
    }
}

/// `C_{U,V;L}`: the `(U,V)` block of the information matrix after the
/// general mean and every factor in `eliminate` have been eliminated.
pub fn c_matrix(plan: &Plan, u: &str, v: &str, eliminate: &[&str]) -> Result<CMatrixResult> {
    c_matrix_with(plan, u, v, eliminate, Engine::default())
}

pub fn c_matrix_with(plan: &Plan, u: &str, v: &str, eliminate: &[&str], engine: Engine) -> Result<CMatrixResult> {
    let (ui, vi) = (plan.factor_index(u)?, plan.factor_index(v)?);
    let elim = resolve_elimination(plan, &[ui, vi], eliminate)?;
    let matrix = c_block(plan, ui, vi, &elim, engine)?;
    Ok(CMatrixResult {
        targets: (u.to_string(), v.to_string()),
        eliminated: elim.iter().map(|&i| plan.factors()[i].name().to_string()).collect(),
        matrix,
    })
}

/// `C_U`: every other factor eliminated.
pub fn full_c_matrix(plan: &Plan, u: &str) -> Result<RatMatrix> {
    full_c_matrix_with(plan, u, Engine::default())
}

pub fn full_c_matrix_with(plan: &Plan, u: &str, engine: Engine) -> Result<RatMatrix> {
    let ui = plan.factor_index(u)?;
    let others: Vec<usize> = (0..plan.factors().len()).filter(|&i| i != ui).collect();
    c_block(plan, ui, ui, &others, engine)
}

/// Full C-matrices of every factor, in plan order.
///
/// Shares work between factors: the factor set is split in halves, each
/// half is eliminated once to give the complement on the other half, and
/// the halves are processed recursively.
pub fn all_full_c_matrices(plan: &Plan) -> Result<Vec<RatMatrix>> {
    let terms = terms_of(&(0..plan.factors().len()).collect::<Vec<_>>());
    let g = gram(plan, &terms, &terms)?;
    let widths: Vec<usize> = (0..plan.factors().len()).map(|i| plan.level_count(i)).collect();
    let total: usize = widths.iter().sum();
    let reduced = linalg::eliminate_symmetric(&g, &(1..=total).collect::<Vec<_>>(), &[0])?;
    let mut out = Vec::with_capacity(widths.len());
    split_eliminate(&reduced, &widths, &mut out)?;
    Ok(out)
}

fn split_eliminate(m: &RatMatrix, widths: &[usize], out: &mut Vec<RatMatrix>) -> Result<()> {
    if widths.len() == 1 {
        out.push(m.clone());
        return Ok(());
    }
    let mid = widths.len() / 2;
    let left: usize = widths[..mid].iter().sum();
    let total = m.rows();
    let left_idx: Vec<usize> = (0..left).collect();
    let right_idx: Vec<usize> = (left..total).collect();
    split_eliminate(&linalg::eliminate_symmetric(m, &left_idx, &right_idx)?, &widths[..mid], out)?;
    split_eliminate(&linalg::eliminate_symmetric(m, &right_idx, &left_idx)?, &widths[mid..], out)
}

/// `C_A` assembled as `C_{A;L} - E (H)^- E^T`, where `E` collects
/// `C_{A,Q;L}` and `H` the blocks `C_{P,Q;L}` over the factors `P, Q`
/// outside `{A} ∪ L`. Equal to [`full_c_matrix`] for any `L`.
pub fn c_matrix_by_blocks(plan: &Plan, a: &str, eliminate: &[&str], method: GInverse) -> Result<RatMatrix> {
    let ai = plan.factor_index(a)?;
    let elim = resolve_elimination(plan, &[ai], eliminate)?;
    let rest: Vec<usize> = (0..plan.factors().len())
        .filter(|i| *i != ai && !elim.contains(i))
        .collect();
    let engine = Engine::Projection(method);
    let base = c_block(plan, ai, ai, &elim, engine)?;
    if rest.is_empty() {
        return Ok(base);
    }
    let e_blocks = rest
        .iter()
        .map(|&q| c_block(plan, ai, q, &elim, engine))
        .collect::<Result<Vec<_>>>()?;
    let e = RatMatrix::hstack(&e_blocks)?;
    let h_grid = rest
        .iter()
        .map(|&p| rest.iter().map(|&q| c_block(plan, p, q, &elim, engine)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let h = RatMatrix::from_blocks(&h_grid)?;
    linalg::schur_complement(&base, &e, &e.transpose(), &h, method)
}

/// `n · N^{A,B} = r^A (r^B)^T`.
pub fn is_proportional_frequency(plan: &Plan, a: &str, b: &str) -> Result<bool> {
    let (ai, bi) = (plan.factor_index(a)?, plan.factor_index(b)?);
    Ok(proportional_by_index(plan, ai, bi))
}

fn proportional_by_index(plan: &Plan, a: usize, b: usize) -> bool {
    let n = plan.runs();
    let ra = replication_by_index(plan, a);
    let rb = replication_by_index(plan, b);
    let mut counts = vec![vec![0usize; rb.len()]; ra.len()];
    for (&la, &lb) in plan.levels(a).iter().zip(plan.levels(b)) {
        counts[la][lb] += 1;
    }
    (0..ra.len()).all(|i| (0..rb.len()).all(|j| n * counts[i][j] == ra[i] * rb[j]))
}

/// `N^{A,B} = N^{A,C} (R^C)^{-1} N^{C,B}`: `A` and `B` are orthogonal through `C`.
pub fn orthogonal_through(plan: &Plan, a: &str, b: &str, c: &str) -> Result<bool> {
    let (ai, bi, ci) = (plan.factor_index(a)?, plan.factor_index(b)?, plan.factor_index(c)?);
    if ai == bi || ai == ci || bi == ci {
        return Err(Error::InvalidArgument(format!("factors {a}, {b}, {c} must be distinct")));
    }
    Ok(through_by_index(plan, ai, bi, ci))
}

fn through_by_index(plan: &Plan, a: usize, b: usize, c: usize) -> bool {
    let counts = |x: usize, y: usize| {
        let mut n = vec![vec![0u128; plan.level_count(y)]; plan.level_count(x)];
        for (&lx, &ly) in plan.levels(x).iter().zip(plan.levels(y)) {
            n[lx][ly] += 1;
        }
        n
    };
    let (ab, ac, cb) = (counts(a, b), counts(a, c), counts(c, b));
    // Clear denominators: multiply both sides by lcm(r^C).
    let rc: Vec<u128> = replication_by_index(plan, c).iter().map(|&r| r as u128).collect();
    let scale = rc.iter().fold(1u128, |l, &r| num_integer::lcm(l, r));
    ab.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, &nij)| {
            let rhs: u128 = rc.iter().enumerate().map(|(k, &r)| ac[i][k] * cb[k][j] * (scale / r)).sum();
            nij * scale == rhs
        })
    })
}

/// `B_{i,j}`: how often level `i` of `A` and level `j` of `B` share a
/// block, over all pairs of runs in that block.
pub fn block_pair_counts(plan: &Plan, a: &str, b: &str) -> Result<Vec<Vec<usize>>> {
    let bl = plan
        .block_index()
        .ok_or_else(|| Error::InvalidArgument("plan has no block factor".into()))?;
    let (ai, bi) = (plan.factor_index(a)?, plan.factor_index(b)?);
    let blocks = plan.level_count(bl);
    let mut in_block_a = vec![vec![0usize; plan.level_count(ai)]; blocks];
    let mut in_block_b = vec![vec![0usize; plan.level_count(bi)]; blocks];
    for run in 0..plan.runs() {
        let blk = plan.levels(bl)[run];
        in_block_a[blk][plan.levels(ai)[run]] += 1;
        in_block_b[blk][plan.levels(bi)[run]] += 1;
    }
    let mut out = vec![vec![0usize; plan.level_count(bi)]; plan.level_count(ai)];
    for blk in 0..blocks {
        for (i, &ca) in in_block_a[blk].iter().enumerate() {
            for (j, &cb) in in_block_b[blk].iter().enumerate() {
                out[i][j] += ca * cb;
            }
        }
    }
    Ok(out)
}

/// Combinatorial check `B_{i,j} = k U_{i,j}` for plans with equal block size `k`.
pub fn orthogonal_through_block_counts(plan: &Plan, a: &str, b: &str) -> Result<bool> {
    let bl = plan
        .block_index()
        .ok_or_else(|| Error::InvalidArgument("plan has no block factor".into()))?;
    let sizes = replication_by_index(plan, bl);
    let k = sizes[0];
    if sizes.iter().any(|&s| s != k) {
        return Err(Error::InvalidArgument("block sizes are not all equal".into()));
    }
    let pair = block_pair_counts(plan, a, b)?;
    let (ai, bi) = (plan.factor_index(a)?, plan.factor_index(b)?);
    let mut together = vec![vec![0usize; plan.level_count(bi)]; plan.level_count(ai)];
    for (&la, &lb) in plan.levels(ai).iter().zip(plan.levels(bi)) {
        together[la][lb] += 1;
    }
    Ok(pair
        .iter()
        .zip(&together)
        .all(|(prow, urow)| prow.iter().zip(urow).all(|(&p, &u)| p == k * u)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofSummary {
    pub model_df: usize,
    pub residual_df: usize,
}

impl DofSummary {
    pub fn is_saturated(&self) -> bool {
        self.residual_df == 0
    }
}

/// Degrees of freedom of the additive main effects model: the rank of
/// `[1, X_A, X_B, ..]` and what is left of `n` runs.
pub fn dof_summary(plan: &Plan) -> Result<DofSummary> {
    let terms: Vec<Term> = std::iter::once(Term::Mean)
        .chain((0..plan.factors().len()).map(Term::Factor))
        .collect();
    let model_df = linalg::rank(&gram(plan, &terms, &terms)?);
    Ok(DofSummary {
        model_df,
        residual_df: plan.runs() - model_df,
    })
}

/// How a pair of factors relates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairRelation {
    Proportional,
    /// Orthogonal through the named third factor.
    Through(String),
    NonOrthogonal,
}

impl fmt::Display for PairRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairRelation::Proportional => write!(f, "orthogonal (proportional frequency)"),
            PairRelation::Through(c) => write!(f, "orthogonal through {c}"),
            PairRelation::NonOrthogonal => write!(f, "non-orthogonal"),
        }
    }
}

/// Proportional frequency first, then the first third factor (in plan
/// order) that the pair is orthogonal through.
pub fn classify_pair(plan: &Plan, a: &str, b: &str) -> Result<PairRelation> {
    let (ai, bi) = (plan.factor_index(a)?, plan.factor_index(b)?);
    if ai == bi {
        return Err(Error::InvalidArgument("cannot classify a factor against itself".into()));
    }
    if proportional_by_index(plan, ai, bi) {
        return Ok(PairRelation::Proportional);
    }
    Ok((0..plan.factors().len())
        .filter(|&c| c != ai && c != bi)
        .find(|&c| through_by_index(plan, ai, bi, c))
        .map_or(PairRelation::NonOrthogonal, |c| {
            PairRelation::Through(plan.factors()[c].name().to_string())
        }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kn;
    use crate::plan::Factor;

    fn plan(rows: &[(&str, usize, &[usize])], block: Option<&str>) -> Plan {
        Plan::new(
            rows.iter().map(|(n, s, _)| Factor::with_levels(*n, *s).unwrap()).collect(),
            rows.iter().map(|(_, _, r)| r.to_vec()).collect(),
            block,
        )
        .unwrap()
    }

    #[test]
    fn design_matrix_of_two_runs_is_identity() {
        let p = plan(&[("A", 2, &[0, 1])], None);
        assert_eq!(design_matrix(&p, "A").unwrap(), RatMatrix::identity(2));
    }

    #[test]
    fn design_matrix_products_give_incidence() {
        let p = plan(&[("A", 3, &[0, 1, 2, 0, 1, 2]), ("B", 2, &[0, 0, 0, 1, 1, 0])], None);
        let xa = design_matrix(&p, "A").unwrap();
        let xb = design_matrix(&p, "B").unwrap();
        assert!(xa.row_sums().iter().all(|v| v.is_one()));
        assert_eq!(&xa.transpose() * &xa, replication_matrix(&p, "A").unwrap());
        assert_eq!(&xa.transpose() * &xb, incidence(&p, "A", "B").unwrap());
        assert_eq!(incidence(&p, "A", "A").unwrap(), replication_matrix(&p, "A").unwrap());
    }

    #[test]
    fn direct_projection_agrees_with_gram_route() {
        let p = plan(
            &[("A", 3, &[0, 1, 2, 0, 1, 2, 0, 0]), ("B", 2, &[0, 0, 0, 1, 1, 0, 1, 1]), ("C", 2, &[0, 1, 0, 1, 0, 1, 1, 0])],
            None,
        );
        let xa = design_matrix(&p, "A").unwrap();
        let z = RatMatrix::hstack(&[
            RatMatrix::from_fn(8, 1, |_, _| Rational::one()),
            design_matrix(&p, "B").unwrap(),
            design_matrix(&p, "C").unwrap(),
        ])
        .unwrap();
        assert_eq!(linalg::project_out(&xa, &z).unwrap(), full_c_matrix(&p, "A").unwrap());
    }

    #[test]
    fn single_factor_c_matrix_is_centered_replication() {
        let p = plan(&[("A", 2, &[0, 1, 0, 1])], None);
        assert_eq!(full_c_matrix(&p, "A").unwrap(), kn(2).scale(&int(2)));
        assert_eq!(dof_summary(&p).unwrap(), DofSummary { model_df: 2, residual_df: 2 });
    }

    #[test]
    fn overlap_and_unknown_errors() {
        let p = plan(&[("A", 2, &[0, 1, 0, 1]), ("B", 2, &[0, 0, 1, 1])], None);
        assert_eq!(c_matrix(&p, "A", "A", &["A"]), Err(Error::OverlappingSets("A".into())));
        assert_eq!(c_matrix(&p, "A", "B", &["B"]), Err(Error::OverlappingSets("B".into())));
        assert_eq!(replication_vector(&p, "Q"), Err(Error::UnknownFactor("Q".into())));
        assert!(orthogonal_through(&p, "A", "A", "B").is_err());
    }

    #[test]
    fn factor_is_not_proportional_to_itself() {
        let p = plan(&[("A", 2, &[0, 1, 0, 1])], None);
        assert!(!is_proportional_frequency(&p, "A", "A").unwrap());
    }

    #[test]
    fn classification_order() {
        let p = plan(&[("A", 2, &[0, 1, 0, 1]), ("B", 2, &[0, 0, 1, 1])], None);
        assert_eq!(classify_pair(&p, "A", "B").unwrap(), PairRelation::Proportional);
        let q = plan(&[("A", 2, &[0, 1, 0, 1, 0]), ("B", 2, &[0, 0, 1, 1, 1])], None);
        assert_eq!(classify_pair(&q, "A", "B").unwrap(), PairRelation::NonOrthogonal);
    }

    #[test]
    fn different_g_inverses_agree() {
        let p = plan(
            &[("A", 3, &[0, 1, 2, 0, 1, 2, 0, 0]), ("B", 2, &[0, 0, 0, 1, 1, 0, 1, 1]), ("C", 2, &[0, 1, 0, 1, 0, 1, 1, 0])],
            None,
        );
        let all = all_full_c_matrices(&p).unwrap();
        for (i, f) in ["A", "B", "C"].into_iter().enumerate() {
            let direct = full_c_matrix_with(&p, f, Engine::Elimination).unwrap();
            assert_eq!(direct, full_c_matrix_with(&p, f, Engine::Projection(GInverse::MoorePenrose)).unwrap());
            assert_eq!(direct, full_c_matrix_with(&p, f, Engine::Projection(GInverse::Reflexive)).unwrap());
            assert_eq!(direct, all[i]);
            assert_eq!(direct, c_matrix_by_blocks(&p, f, &[], GInverse::MoorePenrose).unwrap());
        }
        let ab = c_matrix(&p, "A", "B", &["C"]).unwrap().matrix;
        assert_eq!(ab, c_matrix_with(&p, "A", "B", &["C"], Engine::Projection(GInverse::Reflexive)).unwrap().matrix);
    }
}
