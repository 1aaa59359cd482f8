//! Builds the committed field-data files for `x^6 + 2` and `Q(zeta_13)` and
//! checks every certificate before writing them.
//!
//! cargo run --release -p bounded-height --example derive_fixtures [out_dir]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use bounded_height::arith::rational::{int, BigRat};
use bounded_height::arith::roots::isolate_roots;
use bounded_height::field::certify::{certify_class_number_one, certify_roots_of_unity, certify_units};
use bounded_height::field::io::field_to_string;
use bounded_height::field::{FieldData, FieldSpec, Place};

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|c| BigInt::from(*c)).collect()
}

fn rats(v: &[i64]) -> Vec<BigRat> {
    v.iter().map(|c| int(*c)).collect()
}

fn unit_vec(n: usize, i: usize) -> Vec<i64> {
    (0..n).map(|j| (i == j) as i64).collect()
}

fn spec(label: &str, poly: Vec<BigInt>, disc: BigInt, units: Vec<Vec<i64>>, mu: Vec<Vec<i64>>) -> FieldSpec {
    let n = poly.len() - 1;
    let places = isolate_roots(&poly)
        .expect("root isolation")
        .into_iter()
        .map(|e| {
            let local_degree = if e.is_real() { 1 } else { 2 };
            Place { enclosure: e, local_degree }
        })
        .collect();
    let identity: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    FieldSpec {
        label: label.into(),
        poly,
        basis: (0..n).map(|i| rats(&unit_vec(n, i))).collect(),
        disc,
        class_reps: vec![identity],
        fund_units: units.iter().map(|u| rats(u)).collect(),
        mu: mu.iter().map(|z| rats(z)).collect(),
        places,
    }
}

fn sextic() -> FieldSpec {
    // disc(x^6 + a) = -6^6 a^5
    let disc = -BigInt::from(46_656) * BigInt::from(32);
    let units = vec![vec![1, 0, 1, 0, 0, 0], vec![1, -1, 1, 0, -1, 1]];
    let mu = vec![unit_vec(6, 0), unit_vec(6, 0).iter().map(|c| -c).collect()];
    spec("x6+2", ints(&[2, 0, 0, 0, 0, 0, 1]), disc, units, mu)
}

fn cyclotomic13() -> FieldSpec {
    let n = 12;
    // zeta^k in the power basis, zeta^12 = -(1 + ... + zeta^11)
    let power = |k: usize| -> Vec<i64> {
        let k = k % 13;
        if k == 12 {
            vec![-1; n]
        } else {
            unit_vec(n, k)
        }
    };
    let mut mu = Vec::new();
    for k in 0..13 {
        let z = power(k);
        mu.push(z.iter().map(|c| -c).collect());
        mu.push(z);
    }
    // cyclotomic units (1 - zeta^a)/(1 - zeta) = 1 + zeta + ... + zeta^{a-1}
    let units = (2..=6).map(|a| (0..n).map(|j| (j < a) as i64).collect()).collect();
    spec("zeta13", ints(&[1; 13]), BigInt::from(13).pow(11), units, mu)
}

fn main() {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("crates/core/fixtures"));
    std::fs::create_dir_all(&dir).expect("output directory");
    for (file, s, radius) in [("x6p2.json", sextic(), 2), ("zeta13.json", cyclotomic13(), 1)] {
        let k = FieldData::from_spec(s).expect("field data verifies");
        certify_roots_of_unity(&k).expect("roots of unity complete");
        let idx = certify_units(&k).expect("units saturated");
        let primes = certify_class_number_one(&k, radius).expect("class number one");
        println!(
            "{}: n = {}, r = {}, units saturated at every prime <= {}, {} prime ideals below the Minkowski bound are principal",
            k.label,
            k.n,
            k.unit_rank(),
            idx,
            primes.len()
        );
        std::fs::write(dir.join(file), field_to_string(&k)).expect("write fixture");
    }
}
