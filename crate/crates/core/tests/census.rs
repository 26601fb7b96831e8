use serde_json::Value;
use strata::census::{enumerate_ec, minus_fraction_scan, summarize};

fn golden() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/census.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn census_matches_golden_run() {
    let g = golden();
    let bins = g["bins"].as_u64().unwrap() as usize;
    for entry in g["primes"].as_array().unwrap() {
        let p = entry["p"].as_u64().unwrap();
        let s = summarize(&enumerate_ec(p).unwrap(), bins).unwrap();
        assert_eq!(s.class_count, entry["class_count"].as_u64().unwrap());
        assert_eq!(s.curve_total, entry["curve_total"].as_u64().unwrap());
        let tv = entry["tv_to_semicircle"].as_f64().unwrap();
        assert!(
            (s.tv_to_semicircle - tv).abs() < 1e-12,
            "p = {p}: {}",
            s.tv_to_semicircle
        );

        let min = &minus_fraction_scan(p).unwrap()[0];
        let m = &entry["min_fraction"];
        assert_eq!(min.t, m["t"].as_i64().unwrap());
        assert_eq!(min.delta, m["delta"].as_i64().unwrap());
        assert_eq!(min.fraction.to_string(), m["fraction"].as_str().unwrap());
        assert_eq!(min.bound.to_string(), m["bound"].as_str().unwrap());
    }
}

#[test]
fn class_count_is_the_interval_count() {
    for p in [5u64, 7, 11, 13, 17, 19, 101, 1009, 10007] {
        let rows = enumerate_ec(p).unwrap();
        let tmax = (1..).take_while(|t: &u64| t * t < 4 * p).last().unwrap();
        let multiples = (1..=tmax).filter(|t| t % p == 0).count() as u64;
        assert_eq!(rows.len() as u64, 2 * (tmax - multiples), "p = {p}");
    }
}
