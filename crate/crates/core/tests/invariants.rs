mod common;

use bounded_height::arith::rational::{int, pow2, rat, sqrt_r_upper, BigRat};
use bounded_height::arith::{ln_rational, operator_norm_bound, RatMatrix};
use bounded_height::field::quadratic_field;
use bounded_height::lattice::build_s_approx;
use bounded_height::search::units_of_bounded_height;
use num_traits::Zero;
use proptest::prelude::*;

use common::*;

#[test]
fn outputs_are_duplicate_free_and_closed() {
    let mut fields = oracle_fields();
    fields.push(fixture("x6p2.json"));
    for k in &fields {
        for b in [1, 2, 5, 10] {
            let (out, set) = resolved(k, &int(b), &rat(1, 100));
            assert!(!has_duplicates(&out), "{} B = {b}: repeated element", k.label);
            if let Some(v) = closure_violation(k, &set) {
                panic!("{} B = {b}: {v}", k.label);
            }
        }
    }
}

#[test]
fn unit_tuples_respect_the_box_bound() {
    let fields = vec![quadratic_field(2).unwrap(), quadratic_field(5).unwrap(), fixture("x6p2.json"), fixture("zeta13.json")];
    for k in &fields {
        for d in [rat(1, 2), int(2), int(5), int(12)] {
            if k.unit_rank() > 2 && d > int(5) {
                continue;
            }
            if let Some(v) = m_bound_violation(k, &d) {
                panic!("{v}");
            }
        }
    }
}

#[test]
fn library_unit_matrix_contains_the_true_box() {
    let fields = vec![quadratic_field(2).unwrap(), quadratic_field(5).unwrap(), fixture("x6p2.json"), fixture("zeta13.json")];
    let t = rat(1, 100);
    for k in &fields {
        let r = k.unit_rank();
        // S to 2^-300 stands in for the true matrix
        let cols: Vec<Vec<BigRat>> =
            k.fund_units.iter().map(|u| k.lambda_vec(u, &pow2(-300)).unwrap().entries.into_iter().map(|b| b.mid).collect()).collect();
        let s_hi = RatMatrix::from_rows((0..r).map(|i| (0..r).map(|j| cols[j][i].clone()).collect()).collect());
        let s_hi_inv = s_hi.inverse().unwrap();
        for d_tilde in [int(1), int(4), int(9)] {
            let sa = build_s_approx(k, &d_tilde, &t).unwrap();
            assert!(sa.delta_used < sa.delta2 && sa.delta2 <= sa.delta_tilde);
            assert!(sa.s.mul(&sa.s_inv).is_identity());
            let d = &d_tilde - &t / int(12);
            assert!(box_maps_into(&sa.s, &s_hi_inv, &d, &d_tilde), "{} d~ = {d_tilde}", k.label);
        }
    }
}

#[test]
fn unit_counts_obey_the_growth_bound() {
    let fields = vec![quadratic_field(2).unwrap(), quadratic_field(5).unwrap(), fixture("x6p2.json")];
    for k in &fields {
        let r = k.unit_rank();
        let rr = int(r as i64);
        let s = sqrt_r_upper(r);
        let m = build_s_approx(k, &int(1), &rat(1, 100)).unwrap().m;
        // |T| <= r s |T|_sup <= s m / r, and 1 / log 10 < 10/23
        let base = int(2) * &s * &s * &m / &rr + rat(10, 23);
        let mut q = int(k.mu.len() as i64);
        for _ in 0..r {
            q *= &base;
        }
        for dd in [10i64, 100, 10_000] {
            let out = units_of_bounded_height(k, &int(dd)).unwrap();
            assert!(out.borderline.is_empty());
            let log_lo = ln_rational(&int(dd), 64).unwrap().lo();
            let mut bound = q.clone();
            for _ in 0..r {
                bound *= &log_lo;
            }
            let count = int(out.units.len() as i64);
            assert!(count <= bound, "{} D = {dd}: {count} units above q (log D)^r = {bound}", k.label);
        }
    }
}

fn matrix_strategy(r: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-40i64..=40, r * r).prop_filter_map("singular", move |e| {
        let m = RatMatrix::from_rows((0..r).map(|i| (0..r).map(|j| rat(e[i * r + j], 8)).collect()).collect());
        (!m.det().is_zero()).then_some(m)
    })
}

fn schedule_case() -> impl Strategy<Value = (RatMatrix, BigRat, BigRat, Vec<i64>)> {
    (1usize..=4).prop_flat_map(|r| {
        (
            matrix_strategy(r),
            (1i64..=400).prop_map(|d| rat(d, 4)),
            (1i64..=50).prop_map(|e| rat(e, 100)),
            prop::collection::vec(-999i64..=999, r * r),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn perturbed_matrix_keeps_the_inflated_box(case in schedule_case()) {
        let (s, d, eta, f) = case;
        prop_assert!(containment_holds(&s, &d, &eta, &f));
    }

    #[test]
    fn inverse_of_a_perturbed_matrix_is_close(
        v in matrix_strategy(3),
        lam in (1i64..=100).prop_map(|l| rat(l, 100)),
        slack in 0i64..=3,
        f in prop::collection::vec(-999i64..=999, 9),
    ) {
        prop_assert!(perturbation_holds(&v, &lam, slack, &f));
    }

    #[test]
    fn operator_norm_bound_is_an_upper_bound(v in (1usize..=4).prop_flat_map(matrix_strategy)) {
        let b = operator_norm_bound(&v) + pow2(-64);
        prop_assert!(operator_norm_below(&v, &b));
    }
}
