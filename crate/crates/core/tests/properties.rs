//! Randomized properties of the linear algebra, the C-matrix engines and
//! the plan file formats.

use proptest::prelude::*;

use omep_core::analysis::{full_c_matrix_with, Engine};
use omep_core::io::{read_csv, read_plan, write_csv, write_plan};
use omep_core::linalg::{
    char_poly, eliminate_symmetric, g_inverse, is_positive_semidefinite, rank, schur_complement, GInverse,
};
use omep_core::{Factor, Plan, RatMatrix, Rational};

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-4i64..=4, rows * cols)
        .prop_map(move |v| RatMatrix::from_fn(rows, cols, |i, j| Rational::from(v[i * cols + j])))
}

fn square(max: usize) -> impl Strategy<Value = RatMatrix> {
    (1..=max).prop_flat_map(|n| int_matrix(n, n))
}

/// Gram matrix `xᵀx` of a random integer matrix: symmetric PSD, often singular.
fn gram(max: usize) -> impl Strategy<Value = RatMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| int_matrix(r, c)).prop_map(|x| &x.transpose() * &x)
}

fn det(m: &RatMatrix) -> Rational {
    let n = m.rows();
    if n == 1 {
        return m[(0, 0)].clone();
    }
    let mut total = Rational::from(0);
    for j in 0..n {
        let rows: Vec<usize> = (1..n).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let term = &m[(0, j)] * det(&m.select(&rows, &cols));
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Every level occurs: each column starts with `0..s` and is padded with
/// random levels.
fn random_plan() -> impl Strategy<Value = Plan> {
    (0usize..=8, prop::collection::vec(2usize..=4, 1..=4), any::<bool>()).prop_flat_map(|(extra, levels, blocked)| {
        let columns: Vec<_> = levels
            .iter()
            .map(|&s| {
                let pad = 4 - s + extra;
                prop::collection::vec(0..s, pad).prop_map(move |tail| (0..s).chain(tail).collect::<Vec<usize>>())
            })
            .collect();
        (Just(levels), columns, Just(blocked)).prop_map(|(levels, table, blocked)| {
            let factors: Vec<Factor> = levels
                .iter()
                .enumerate()
                .map(|(i, &s)| Factor::with_levels(format!("F{i}"), s).unwrap())
                .collect();
            Plan::new(factors, table, blocked.then_some("F0")).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn char_poly_trace_and_determinant(m in square(4)) {
        let n = m.rows();
        let p = char_poly(&m).unwrap();
        prop_assert_eq!(p.len(), n + 1);
        prop_assert_eq!(&p[n], &Rational::from(1));
        prop_assert_eq!(&p[n - 1], &-m.trace());
        let sign = if n % 2 == 0 { Rational::from(1) } else { Rational::from(-1) };
        prop_assert_eq!(&p[0], &(sign * det(&m)));
    }

    #[test]
    fn elimination_matches_g_inverse_schur(m in gram(5), split in 0usize..5) {
        let n = m.rows();
        let d = split.min(n);
        let drop: Vec<usize> = (0..d).collect();
        let keep: Vec<usize> = (d..n).collect();
        let by_elim = eliminate_symmetric(&m, &keep, &drop).unwrap();
        let by_schur = schur_complement(
            &m.select(&keep, &keep),
            &m.select(&keep, &drop),
            &m.select(&drop, &keep),
            &m.select(&drop, &drop),
            GInverse::MoorePenrose,
        )
        .unwrap();
        prop_assert_eq!(&by_elim, &by_schur);
        prop_assert!(is_positive_semidefinite(&by_elim));
    }

    #[test]
    fn moore_penrose_conditions(m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| int_matrix(r, c))) {
        let g = g_inverse(&m);
        prop_assert_eq!(&(&(&m * &g) * &m), &m);
        prop_assert_eq!(&(&(&g * &m) * &g), &g);
        prop_assert!((&m * &g).is_symmetric());
        prop_assert!((&g * &m).is_symmetric());
    }

    #[test]
    fn c_matrices_are_engine_independent(plan in random_plan()) {
        for f in plan.factor_names() {
            let c = full_c_matrix_with(&plan, f, Engine::Elimination).unwrap();
            prop_assert_eq!(&c, &full_c_matrix_with(&plan, f, Engine::Projection(GInverse::MoorePenrose)).unwrap());
            prop_assert!(c.is_symmetric());
            prop_assert!(is_positive_semidefinite(&c));
            prop_assert!(c.row_sums().iter().all(|s| *s == Rational::from(0)));
            prop_assert!(rank(&c) < c.rows());
        }
    }

    #[test]
    fn plan_files_round_trip(plan in random_plan()) {
        prop_assert_eq!(&read_plan(&write_plan(&plan)).unwrap(), &plan);
        prop_assert_eq!(&read_csv(&write_csv(&plan)).unwrap(), &plan);
    }
}
