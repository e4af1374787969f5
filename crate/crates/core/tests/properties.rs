//! Property tests for the structured kernel family: structural invariants
//! of the materialized matrix, structured-vs-dense agreement, round trips,
//! and the entrywise-inverse contract, over randomized orders and decay
//! parameters.

use proptest::prelude::*;
use wmm_core::dense::{dense_logdet, DenseMat};
use wmm_core::hadamard::HadamardInverse;
use wmm_core::sinkhorn::{self, DiscreteDist, Shape, SinkhornProblem};
use wmm_core::wass::{Wass1D, Wass2D};

fn lambda_strategy() -> impl Strategy<Value = f64> {
    // Stay clear of the open-interval endpoints; the boundary behavior is
    // covered by dedicated unit tests.
    (1u32..=99).prop_map(|k| k as f64 / 100.0)
}

fn noise(seed: u64, count: usize) -> Vec<f64> {
    let mut state = seed;
    (0..count)
        .map(|_| {
            state = state.wrapping_add(0x9E3779B97F4A7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
            z ^= z >> 31;
            2.0 * ((z >> 11) as f64 / 9007199254740992.0) - 1.0
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn materialized_kernel_is_symmetric_toeplitz_positive(
        n in 1usize..=64,
        lambda in lambda_strategy(),
    ) {
        let q = Wass1D::new(n, lambda).unwrap();
        let dense = q.materialize().unwrap();
        for i in 0..n {
            prop_assert_eq!(dense.get(i, i), 1.0);
            for j in 0..n {
                prop_assert!(dense.get(i, j) > 0.0);
                prop_assert_eq!(dense.get(i, j), dense.get(j, i));
                if i + 1 < n && j + 1 < n {
                    prop_assert_eq!(dense.get(i, j), dense.get(i + 1, j + 1));
                }
            }
        }
    }

    #[test]
    fn matvec_agrees_with_dense(
        n in 1usize..=64,
        lambda in lambda_strategy(),
        seed in 0u64..1024,
    ) {
        let q = Wass1D::new(n, lambda).unwrap();
        let x = noise(seed, n);
        let fast = q.matvec(&x).unwrap();
        let dense = q.materialize().unwrap().matvec(&x);
        for (a, b) in fast.iter().zip(&dense) {
            prop_assert!((a - b).abs() <= 1e-12 * n as f64, "{} vs {}", a, b);
        }
    }

    #[test]
    fn solve_round_trips_matvec(
        n in 1usize..=256,
        lambda in lambda_strategy(),
        seed in 0u64..1024,
    ) {
        let q = Wass1D::new(n, lambda).unwrap();
        let x = noise(seed, n);
        let b = q.matvec(&x).unwrap();
        let back = q.solve(&b).unwrap();
        let scale = x.iter().map(|v| v.abs()).fold(1e-30, f64::max);
        for (a, e) in back.iter().zip(&x) {
            prop_assert!((a - e).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn logdet_matches_dense_lu(
        n in 1usize..=32,
        lambda in (1u32..=90).prop_map(|k| k as f64 / 100.0),
    ) {
        let q = Wass1D::new(n, lambda).unwrap();
        let lu = dense_logdet(&q.materialize().unwrap()).unwrap();
        prop_assert!((q.logdet() - lu).abs() <= 1e-8);
    }

    #[test]
    fn kronecker_matvec_agrees_with_dense(
        n in 1usize..=8,
        m in 1usize..=8,
        l1 in lambda_strategy(),
        l2 in lambda_strategy(),
        seed in 0u64..512,
    ) {
        let q = Wass2D::new(Wass1D::new(n, l1).unwrap(), Wass1D::new(m, l2).unwrap());
        let x = noise(seed, n * m);
        let fast = q.matvec(&x).unwrap();
        let dense = q.materialize_capped(64).unwrap().matvec(&x);
        for (a, b) in fast.iter().zip(&dense) {
            prop_assert!((a - b).abs() <= 1e-12 * (n * m) as f64);
        }
    }

    #[test]
    fn entrywise_inverse_cancels_kernel(
        n in 1usize..=32,
        lambda in (10u32..=99).prop_map(|k| k as f64 / 100.0),
    ) {
        let q = Wass1D::new(n, lambda).unwrap();
        let h = HadamardInverse::new(&q).materialize_capped(64).unwrap();
        let dense = q.materialize().unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert!((dense.get(i, j) * h.get(i, j) - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn parsed_distributions_are_normalized(
        raw in proptest::collection::vec(0.0f64..10.0, 1..40),
    ) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-9);
        let text: String = raw.iter().map(|v| format!("{v}\n")).collect();
        let d = sinkhorn::parse_distribution_1d(&text).unwrap();
        let sum: f64 = d.mass().iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!(d.mass().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn sinkhorn_marginals_close_on_random_positive_inputs(
        n in 2usize..=16,
        seed in 0u64..256,
    ) {
        let raw = noise(seed, 2 * n);
        let u: Vec<f64> = raw[..n].iter().map(|v| 1.2 + v).collect();
        let v: Vec<f64> = raw[n..].iter().map(|v| 1.2 + v).collect();
        let u = DiscreteDist::new(u, Shape::OneD(n)).unwrap();
        let v = DiscreteDist::new(v, Shape::OneD(n)).unwrap();
        let p = SinkhornProblem::new(0.25, 0.6, u.clone(), v.clone()).unwrap();
        let tol = 1e-9;
        let r = sinkhorn::solve(&p, tol, 200_000).unwrap();
        prop_assert!(r.converged);
        let q = Wass1D::new(n, p.lambda()).unwrap();
        let kb = q.matvec(&r.b).unwrap();
        let ka = q.matvec(&r.a).unwrap();
        for i in 0..n {
            prop_assert!((r.a[i] * kb[i] - u.mass()[i]).abs() < 10.0 * tol);
            prop_assert!((r.b[i] * ka[i] - v.mass()[i]).abs() < 10.0 * tol);
        }
    }
}

#[test]
fn dense_mat_from_fn_round_trip() {
    let m = DenseMat::from_fn(3, |i, j| (i * 3 + j) as f64);
    assert_eq!(m.get(2, 1), 7.0);
    assert_eq!(m.transpose().get(1, 2), 7.0);
}
