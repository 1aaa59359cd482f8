//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the output.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use bounded_height::arith::rational::{fmt_rat, int, rat, BigRat};
use bounded_height::arith::RatMatrix;
use bounded_height::baseline::{exceeds_lower_bound, ps_enumerate, DEFAULT_CAP};
use bounded_height::field::{quadratic_field, rational_field, FieldData, NFElem};
use bounded_height::search::{self, bounded_height_iq, resolve_exact, units_of_bounded_height};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn imaginary_quadratic_counts() -> Check {
    let k = quadratic_field(-107).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for (b, want) in [(200, 15_275usize), (1000, 393_775)] {
        let t0 = Instant::now();
        let got = bounded_height_iq(&k, &int(b)).map_err(|e| e.to_string())?.len();
        if got != want {
            return Err(format!("B = {b}: {got} elements, expected {want}"));
        }
        notes.push(format!("B = {b}: {got} in {:.1}s", t0.elapsed().as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn real_quadratic_count() -> Check {
    let k = quadratic_field(36865).map_err(|e| e.to_string())?;
    let out = search::run(&k, &int(200), &rat(1, 1000)).map_err(|e| e.to_string())?;
    let (l, lp) = (out.l.len(), out.lprime.len());
    let msg = format!("|L| = {l}, |L'| = {lp}, total {}", l + lp);
    if l + lp == 2143 && lp <= 5 {
        Ok(msg)
    } else {
        Err(format!("{msg}, expected total 2143 with |L'| <= 5"))
    }
}

fn fixture_counts() -> Check {
    let mut notes = Vec::new();
    for (file, want) in [("x6p2.json", 5123usize), ("zeta13.json", 2679)] {
        let k = fixture(file);
        let t0 = Instant::now();
        let out = search::run(&k, &int(100), &rat(1, 100)).map_err(|e| e.to_string())?;
        let (l, lp) = (out.l.len(), out.lprime.len());
        let msg = format!(
            "{}: |L| = {l}, |L'| = {lp}, total {} in {:.1}s (expected {want} +- |L'|)",
            k.label,
            l + lp,
            t0.elapsed().as_secs_f64()
        );
        if (l + lp).abs_diff(want) > lp {
            return Err(msg);
        }
        notes.push(msg);
    }
    Ok(notes.join("; "))
}

fn oracle_equivalence() -> Check {
    let mut runs = 0;
    for k in oracle_fields() {
        for b in [1, 2, 5, 10, 20] {
            let b = int(b);
            let out = search::run(&k, &b, &rat(1, 100)).map_err(|e| e.to_string())?;
            let r = resolve_exact(&out, &k, bounded_height::baseline::RESOLVE_BITS).map_err(|e| e.to_string())?;
            if !r.undecided.is_empty() {
                return Err(format!("{} B = {b}: {} undecided in L'", k.label, r.undecided.len()));
            }
            let ours: BTreeSet<NFElem> = r.final_set(&out).into_iter().collect();
            let ps = ps_enumerate(&k, &b, DEFAULT_CAP).map_err(|e| e.to_string())?;
            if !ps.borderline.is_empty() {
                return Err(format!("{} B = {b}: PS left {} undecided", k.label, ps.borderline.len()));
            }
            let theirs: BTreeSet<NFElem> = ps.elements.into_iter().collect();
            let diff = ours.symmetric_difference(&theirs).count();
            if diff != 0 {
                return Err(format!("{} B = {b}: {diff} discrepancies", k.label));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} field/bound pairs, zero discrepancies"))
}

fn micro_oracles() -> Check {
    let gi = quadratic_field(-1).map_err(|e| e.to_string())?;
    let a = search::run(&gi, &int(2), &rat(1, 100)).map_err(|e| e.to_string())?.total();
    let q = search::run(&rational_field(), &int(10), &rat(1, 7)).map_err(|e| e.to_string())?;
    let q10 = resolve_exact(&q, &rational_field(), 64).map_err(|e| e.to_string())?;
    let b = q.l.len() + q10.inside.len();
    let s2 = quadratic_field(2).map_err(|e| e.to_string())?;
    let u = units_of_bounded_height(&s2, &int(6)).map_err(|e| e.to_string())?;
    let c = u.units.len() + u.borderline.len();
    let msg = format!("Q(i) B = 2: {a}; Q B = 10: {b}; Q(sqrt 2) units D = 6: {c}");
    if (a, b, c) == (13, 127, 10) {
        Ok(msg)
    } else {
        Err(format!("{msg}; expected 13, 127, 10"))
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, r: usize) -> RatMatrix {
    loop {
        let m = RatMatrix::from_rows((0..r).map(|_| (0..r).map(|_| rat(rng.gen_range(-40..=40), 8)).collect()).collect());
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn invariants() -> Check {
    let mut fields = oracle_fields();
    fields.push(fixture("x6p2.json"));
    for k in &fields {
        for b in [1, 2, 5, 10] {
            let (out, set) = resolved(k, &int(b), &rat(1, 100));
            if has_duplicates(&out) {
                return Err(format!("{} B = {b}: repeated element", k.label));
            }
            if let Some(v) = closure_violation(k, &set) {
                return Err(format!("{} B = {b}: {v}", k.label));
            }
        }
    }
    let unit_fields: Vec<FieldData> =
        vec![quadratic_field(2).unwrap(), quadratic_field(5).unwrap(), fixture("x6p2.json"), fixture("zeta13.json")];
    for k in &unit_fields {
        for d in [rat(1, 2), int(2), int(5)] {
            if let Some(v) = m_bound_violation(k, &d) {
                return Err(v);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..100 {
        let r = rng.gen_range(1..=4);
        let s = random_matrix(&mut rng, r);
        let d = rat(rng.gen_range(1..=400), 4);
        let eta = rat(rng.gen_range(1..=50), 100);
        let f: Vec<i64> = (0..r * r).map(|_| rng.gen_range(-999..=999)).collect();
        if !containment_holds(&s, &d, &eta, &f) {
            return Err(format!("containment fails on schedule {i} (r = {r}, d = {}, eta = {})", fmt_rat(&d), fmt_rat(&eta)));
        }
    }
    for i in 0..100 {
        let v = random_matrix(&mut rng, 3);
        let lambda = rat(rng.gen_range(1..=100), 100);
        let f: Vec<i64> = (0..9).map(|_| rng.gen_range(-999..=999)).collect();
        if !perturbation_holds(&v, &lambda, rng.gen_range(0..=3), &f) {
            return Err(format!("perturbation bound fails on matrix {i}"));
        }
    }
    Ok(format!(
        "closure and disjointness on {} runs, M bound on {} schedules, 100 containment and 100 perturbation cases",
        fields.len() * 4,
        unit_fields.len() * 3
    ))
}

fn search_ratios() -> Check {
    let k = quadratic_field(-1).map_err(|e| e.to_string())?;
    let b = int(20);
    let ps = ps_enumerate(&k, &b, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let found = ps.found();
    let sigma = BigRat::new(ps.search_space.clone(), found.into());
    // sigma > B^4 2^3 / found  <=>  space > B^4 2^3
    if !exceeds_lower_bound(2, &b, &ps.search_space) {
        return Err(format!("PS search space {} not above B^4 2^3", ps.search_space));
    }
    let iq = quadratic_field(-107).map_err(|e| e.to_string())?;
    let a5 = search::run(&iq, &int(200), &rat(1, 100)).map_err(|e| e.to_string())?;
    let ratio = BigRat::new(a5.counters.search_space.into(), (a5.total() as u64).into());
    if ratio != int(1) {
        return Err(format!("imaginary quadratic search ratio {}", fmt_rat(&ratio)));
    }
    Ok(format!(
        "sigma_PS(Q(i), 20) = {:.1} > {:.1}; imaginary quadratic ratio exactly 1",
        ratio_f64(&sigma),
        ratio_f64(&BigRat::new((20u64.pow(4) * 8).into(), found.into()))
    ))
}

fn ratio_f64(q: &BigRat) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

fn main() -> ExitCode {
    let checks: [Criterion; 7] = [
        ("imaginary quadratic: Q(sqrt -107), B = 200 and 1000", imaginary_quadratic_counts),
        ("real quadratic: Q(sqrt 36865), B = 200, theta = 1/1000", real_quadratic_count),
        ("committed fixtures: x^6+2 and Q(zeta13), B = 100", fixture_counts),
        ("oracle equivalence against PS", oracle_equivalence),
        ("derived micro-oracles", micro_oracles),
        ("invariant suite", invariants),
        ("search-ratio sanity", search_ratios),
    ];
    let mut failed = 0;
    for (name, f) in checks {
        match f() {
            Ok(msg) => println!("PASS  {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
