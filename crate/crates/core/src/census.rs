//! Elliptic curves over a prime field, grouped by trace and weighted by the
//! Kronecker class number, compared with the semicircle law.

use std::io::Write;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::factor::is_prime_u64;
use crate::error::{domain, Error, Result};
use crate::measures::isogeny_class_count_estimate;
use crate::quadratic::{h_over_h_bound, kronecker_class_number};
use crate::serde_util;

pub const DEFAULT_BINS: usize = 40;

/// One ordinary isogeny class `x^2 - t x + p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusRow {
    pub t: i64,
    pub delta: i64,
    #[serde(rename = "H")]
    pub h: u64,
    #[serde(serialize_with = "serde_util::f64_17")]
    pub normalized_trace: f64,
}

/// Ordinary traces `0 < |t| < 2 sqrt(p)` with `p` not dividing `t`, ascending.
pub fn ordinary_traces(p: u64) -> Result<Vec<i64>> {
    if p < 5 || !is_prime_u64(p) {
        return domain(format!("{p} is not a prime >= 5"));
    }
    // t^2 < 4p, never equal since p is prime
    let tmax = (4 * p as u128).sqrt() as i64;
    let p = p as i64;
    Ok((-tmax..=tmax).filter(|&t| t != 0 && t % p != 0).collect())
}

pub fn enumerate_ec(p: u64) -> Result<Vec<CensusRow>> {
    let traces = ordinary_traces(p)?;
    let scale = 2.0 * (p as f64).sqrt();
    traces
        .par_iter()
        .map(|&t| {
            let delta = t * t - 4 * p as i64;
            let h = kronecker_class_number(&BigInt::from(delta))?
                .to_u64()
                .ok_or_else(|| Error::Internal("class number overflow".into()))?;
            Ok(CensusRow {
                t,
                delta,
                h,
                normalized_trace: t as f64 / scale,
            })
        })
        .collect()
}

/// Semicircle mass of `[-1, x]`, from the antiderivative `(x sqrt(1-x^2) + asin x)/pi`.
pub fn semicircle_cdf(x: f64) -> f64 {
    let x = x.clamp(-1.0, 1.0);
    0.5 + (x * (1.0 - x * x).sqrt() + x.asin()) / std::f64::consts::PI
}

#[derive(Clone, Debug, Serialize)]
pub struct HistogramBin {
    #[serde(serialize_with = "serde_util::f64_17")]
    pub lo: f64,
    #[serde(serialize_with = "serde_util::f64_17")]
    pub hi: f64,
    /// Sum of `H` over traces in the bin.
    pub weight: u64,
    #[serde(serialize_with = "serde_util::f64_17")]
    pub mass: f64,
    #[serde(serialize_with = "serde_util::f64_17")]
    pub semicircle: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusSummary {
    pub p: u64,
    pub bins: usize,
    pub class_count: u64,
    pub curve_total: u64,
    pub histogram: Vec<HistogramBin>,
    #[serde(serialize_with = "serde_util::f64_17")]
    pub tv_to_semicircle: f64,
    #[serde(serialize_with = "serde_util::f64_17")]
    pub predicted_class_count: f64,
}

impl CensusSummary {
    pub fn count_ratio(&self) -> f64 {
        self.class_count as f64 / self.predicted_class_count
    }
}

fn bin_of(x: f64, bins: usize) -> usize {
    (((x + 1.0) / 2.0 * bins as f64).floor() as usize).min(bins - 1)
}

pub fn summarize(rows: &[CensusRow], bins: usize) -> Result<CensusSummary> {
    let Some(first) = rows.first() else {
        return domain("empty census");
    };
    if bins == 0 {
        return domain("need at least one bin");
    }
    let p = ((first.t * first.t - first.delta) / 4) as u64;
    let mut weight = vec![0u64; bins];
    for r in rows {
        weight[bin_of(r.normalized_trace, bins)] += r.h;
    }
    let total: u64 = weight.iter().sum();
    let width = 2.0 / bins as f64;
    let histogram: Vec<HistogramBin> = weight
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let lo = -1.0 + width * i as f64;
            let hi = if i + 1 == bins { 1.0 } else { lo + width };
            HistogramBin {
                lo,
                hi,
                weight: w,
                mass: w as f64 / total as f64,
                semicircle: semicircle_cdf(hi) - semicircle_cdf(lo),
            }
        })
        .collect();
    let tv = 0.5 * histogram.iter().map(|b| (b.mass - b.semicircle).abs()).sum::<f64>();
    Ok(CensusSummary {
        p,
        bins,
        class_count: rows.len() as u64,
        curve_total: total,
        histogram,
        tv_to_semicircle: tv,
        predicted_class_count: isogeny_class_count_estimate(1, &BigInt::from(p))?,
    })
}

/// Share of curves with trace `t` whose endomorphism ring is the order `Z[pi]`.
#[derive(Clone, Debug, Serialize)]
pub struct MinusFraction {
    pub t: i64,
    pub delta: i64,
    #[serde(serialize_with = "serde_util::rat_str")]
    pub fraction: BigRational,
    #[serde(serialize_with = "serde_util::rat_str")]
    pub bound: BigRational,
}

/// `h(t^2 - 4p)/H(t^2 - 4p)` with its bound for every ordinary trace, ascending
/// by fraction and then by trace.
pub fn minus_fraction_scan(p: u64) -> Result<Vec<MinusFraction>> {
    let mut out: Vec<MinusFraction> = ordinary_traces(p)?
        .par_iter()
        .map(|&t| {
            let delta = t * t - 4 * p as i64;
            let (fraction, bound) = h_over_h_bound(&BigInt::from(delta))?;
            Ok(MinusFraction {
                t,
                delta,
                fraction,
                bound,
            })
        })
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.fraction.cmp(&b.fraction).then(a.t.cmp(&b.t)));
    Ok(out)
}

/// CSV with columns `t, delta, H, normalized_trace`.
pub fn write_rows_csv<W: Write>(rows: &[CensusRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "delta", "H", "normalized_trace"])?;
    for r in rows {
        w.write_record([
            r.t.to_string(),
            r.delta.to_string(),
            r.h.to_string(),
            format!("{:.16e}", r.normalized_trace),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::stratified_class_numbers;

    /// Hurwitz-style count by brute force: reduced forms `(a, b, c)` with
    /// `b^2 - 4ac = D`, primitive or not, without automorphism weights.
    fn forms_all(d: i64) -> u64 {
        let mut n = 0;
        let mut a = 1;
        while 3 * a * a <= -d {
            for b in -a + 1..=a {
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                if c < a || (c == a && b < 0) {
                    continue;
                }
                n += 1;
            }
            a += 1;
        }
        n
    }

    #[test]
    fn small_primes() {
        let rows = enumerate_ec(5).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.t).collect::<Vec<_>>(),
            vec![-4, -3, -2, -1, 1, 2, 3, 4]
        );
        assert_eq!(enumerate_ec(101).unwrap().len(), 40);
        assert!(enumerate_ec(91).is_err());
        assert!(enumerate_ec(3).is_err());
        // p = 13: 2 floor(2 sqrt 13) = 14 traces, none divisible by 13
        assert_eq!(enumerate_ec(13).unwrap().len(), 14);
    }

    #[test]
    fn h_matches_form_count() {
        for p in [5u64, 7, 11, 101, 1009] {
            for r in enumerate_ec(p).unwrap() {
                assert!(r.h >= 1);
                assert_eq!(r.h, forms_all(r.delta), "D = {}", r.delta);
            }
        }
    }

    #[test]
    fn stratified_totals_agree() {
        for p in [5u64, 101, 211, 1009] {
            let rows = enumerate_ec(p).unwrap();
            let h: u64 = rows.iter().map(|r| r.h).sum();
            let strat: u64 = rows
                .iter()
                .map(|r| {
                    stratified_class_numbers(&BigInt::from(r.delta))
                        .unwrap()
                        .into_iter()
                        .map(|(_, h)| h.to_u64().unwrap())
                        .sum::<u64>()
                })
                .sum();
            assert_eq!(h, strat);
        }
    }

    #[test]
    fn histogram_is_symmetric_and_normalized() {
        let rows = enumerate_ec(1009).unwrap();
        let s = summarize(&rows, DEFAULT_BINS).unwrap();
        assert_eq!(s.p, 1009);
        assert_eq!(s.class_count, 2 * 63);
        let w: Vec<u64> = s.histogram.iter().map(|b| b.weight).collect();
        let mut rev = w.clone();
        rev.reverse();
        assert_eq!(w, rev);
        assert!((s.histogram.iter().map(|b| b.mass).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((s.histogram.iter().map(|b| b.semicircle).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((s.count_ratio() - 1.0).abs() < 0.05);
        assert!(summarize(&[], 10).is_err());
    }

    #[test]
    fn semicircle_cdf_matches_quadrature() {
        let gl = gauss_quad::legendre::GaussLegendre::new(40).unwrap();
        for (a, b) in [(-1.0, -0.5), (-0.3, 0.2), (0.9, 1.0)] {
            let direct = gl.integrate(a, b, |x| 2.0 / std::f64::consts::PI * (1.0 - x * x).sqrt());
            assert!((semicircle_cdf(b) - semicircle_cdf(a) - direct).abs() < 1e-5);
        }
        assert_eq!(semicircle_cdf(-1.0), 0.0);
        assert!((semicircle_cdf(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn minus_fractions() {
        let scan = minus_fraction_scan(29).unwrap();
        let t2 = scan.iter().find(|m| m.t == 2).unwrap();
        assert_eq!(t2.fraction, BigRational::new(1.into(), 2.into()));
        assert_eq!(t2.bound, BigRational::new(3.into(), 4.into()));
        assert!(scan.windows(2).all(|w| w[0].fraction <= w[1].fraction));
        for m in &scan {
            assert!(m.fraction <= m.bound);
            if crate::quadratic::is_fundamental_discriminant(&BigInt::from(m.delta)) {
                assert_eq!(m.fraction, BigRational::from_integer(1.into()));
                assert_eq!(m.bound, BigRational::from_integer(1.into()));
            }
        }
    }

    #[test]
    fn csv_layout() {
        let rows = enumerate_ec(5).unwrap();
        let mut buf = Vec::new();
        write_rows_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,delta,H,normalized_trace"));
        // t = -4: delta = -4, H(-4) = 1
        assert!(lines.next().unwrap().starts_with("-4,-4,1,"));
    }
}
