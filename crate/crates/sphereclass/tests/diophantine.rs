use proptest::prelude::*;
use sphereclass::classify::{classify_smooth_sphere, Representable, TypeTag};
use sphereclass::diophantine::*;
use sphereclass::RationalClass;

/// Descending tuples in `[tau, bound]` filtered only at the leaves.
fn naive(sys: &ConstraintSystem) -> Vec<Vec<i64>> {
    fn rec(sys: &ConstraintSystem, a: i64, b: &mut Vec<i64>, rem: i64, out: &mut Vec<Vec<i64>>) {
        if b.len() == sys.k {
            let sum: i64 = b.iter().sum();
            let top: i64 = b.iter().take(3).sum();
            let d = sum - 3 * a;
            let last_ok = sys.last_b.is_none_or(|v| b.last() == Some(&v));
            if rem == 0 && d <= sys.d_max && sys.d_min.is_none_or(|m| d >= m) && a >= top && last_ok
            {
                let mut row = vec![a];
                row.extend_from_slice(b);
                out.push(row);
            }
            return;
        }
        let cap = b.last().copied().unwrap_or(sys.coeff_bound);
        for v in sys.tau..=cap {
            if v * v > rem {
                break;
            }
            b.push(v);
            rec(sys, a, b, rem - v * v, out);
            b.pop();
        }
    }
    let mut out = Vec::new();
    for a in 0..=sys.coeff_bound {
        let rem = a * a - sys.square_target;
        if rem >= 0 {
            rec(sys, a, &mut Vec::new(), rem, &mut out);
        }
    }
    out.sort();
    out
}

#[test]
fn pruned_search_matches_naive_oracle() {
    let mut nonempty = 0;
    for square in [-4i64, -3, -2, -1, 0, 1] {
        for k in 1..=8usize {
            for d_max in [-2i64, 0, 2, 4, 8] {
                for tau in 0..=2i64 {
                    let sys = ConstraintSystem::new(square, k, d_max, tau, 9);
                    let got = verify_reduced_nonexistence(&sys).unwrap().solutions;
                    assert_eq!(got, naive(&sys), "{sys:?}");
                    nonempty += usize::from(!got.is_empty());
                }
            }
        }
    }
    assert!(nonempty > 20, "oracle comparison too weak: {nonempty}");
}

#[test]
fn pruned_search_matches_naive_oracle_k10_slices() {
    for last in [None, Some(1), Some(2), Some(3)] {
        for d_min in [None, Some(2)] {
            let mut sys = ConstraintSystem::new(-4, 10, 2, 1, 12);
            sys.last_b = last;
            sys.d_min = d_min;
            let got = verify_reduced_nonexistence(&sys).unwrap().solutions;
            assert_eq!(got, naive(&sys), "{sys:?}");
        }
    }
}

#[test]
fn b10_two_slice_agrees_with_classifier() {
    let sys = ConstraintSystem::new(-4, 10, 2, 1, 45).with_last_b(2);
    let rep = verify_reduced_nonexistence(&sys).unwrap();
    assert_eq!(rep.solutions, equal_entry_family(45));
    for row in &rep.solutions {
        let a = RationalClass::from_i64(row[0], &row[1..]);
        let v = classify_smooth_sphere(&a);
        assert_eq!(v.representable, Representable::Yes);
        assert_eq!(v.type_tag, TypeTag::T3(row[1].into()));
    }
}

#[test]
fn window_bound_doubling_is_stable() {
    for square in [-4i64, -3, -2, -1] {
        let base = enumerate_window_solutions(square, 64).unwrap().solutions;
        let wide = enumerate_window_solutions(square, 128).unwrap().solutions;
        assert_eq!(base, wide);
        let nonzero = (-4 * square) as usize;
        assert!(base.iter().all(|r| r.len() - 1 <= nonzero));
    }
}

#[test]
fn reports_are_deterministic() {
    let sys = ConstraintSystem::new(-4, 10, 2, 1, 30).with_last_b(2);
    let a = serde_json::to_string(&verify_reduced_nonexistence(&sys).unwrap()).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let b = pool
        .install(|| serde_json::to_string(&verify_reduced_nonexistence(&sys).unwrap()).unwrap());
    assert_eq!(a, b);
    assert!(a.contains("\"box\""));
}

proptest! {
    #[test]
    fn window_output_is_descending_and_in_window(square in -6i64..=-1) {
        for row in enumerate_window_solutions(square, 32).unwrap().solutions {
            let (a, b) = (row[0], &row[1..]);
            prop_assert!(b.windows(2).all(|w| w[0] >= w[1]));
            prop_assert_eq!(a * a - b.iter().map(|v| v * v).sum::<i64>(), square);
            let t: i64 = b.iter().take(3).map(|v| v * v).sum();
            prop_assert!(t + square <= a * a && 4 * a * a <= 3 * t);
        }
    }

    #[test]
    fn rearrange_preserves_sum_and_grows_squares(
        a in 20i64..60,
        mut b in proptest::collection::vec(1i64..6, 3..8),
        num in 1i64..4,
        den in 1i64..5,
    ) {
        b.sort_unstable_by(|x, y| y.cmp(x));
        let s = RearrangementState::from_i64(a, &b, 1);
        let c = num_rational::BigRational::new(num.into(), den.into());
        let (i, j) = (0, b.len() - 1);
        if let Ok(n) = rearrange(&s, i, j, &c) {
            prop_assert_eq!(n.sum_b(), s.sum_b());
            let grow = n.sum_b_sq() - s.sum_b_sq();
            prop_assert!(grow >= &c * &c * num_rational::BigRational::from_integer(2.into()));
        }
    }
}
