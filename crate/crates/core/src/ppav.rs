//! Principally polarized varieties per stratum.
//!
//! Elliptic curves get exact per-conductor counts from class numbers. Abelian
//! surfaces get the discriminant ratio `|disc R / disc R+|` of the minimal order
//! (exactly, by resultants, and again from the Frobenius angles), the
//! order-of-magnitude estimate `sqrt` of that ratio for the minus class number,
//! and certificates for the hypotheses under which that minus class number is
//! the polarized count.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::factor::{is_prime, square_split};
use crate::arith::{isqrt, resultant, to_f64, IntPoly};
use crate::error::{domain, Error, Result};
use crate::quadratic::{
    class_number_imaginary, factor_element_ideal, fundamental_unit, h_over_h_bound, is_fundamental_discriminant,
    kronecker_class_number, stratified_class_numbers, QuadDiscriminant, RealQuadElement,
};
use crate::serde_util;
use crate::weil::IsogenyClassSpec;

/// `|N(alpha^2 - 4q)| * |disc g| = |res(g, x^2 - 4q)| * |res(g, g')|`.
pub fn disc_ratio_exact(spec: &IsogenyClassSpec) -> Result<BigInt> {
    let g = spec.g();
    let x2 = IntPoly::new(vec![-(BigInt::from(4) * spec.q()), BigInt::zero(), BigInt::one()]);
    let norm_delta = resultant(g, &x2)?.abs();
    let disc_g = if g.degree() == Some(1) {
        BigInt::one()
    } else {
        resultant(g, &g.derivative())?.abs()
    };
    Ok(norm_delta * disc_g)
}

/// The same ratio from the angles:
/// `(2^(n(n+1)/2) q^(n(n+1)/4) prod_{i<j} (cos t_i - cos t_j) prod_i sin t_i)^2`.
pub fn disc_ratio_trig(spec: &IsogenyClassSpec) -> f64 {
    let th = spec.angles();
    let n = th.len() as i32;
    let e = n * (n + 1);
    let mut root = 2f64.powi(e / 2) * spec.q_f64().powf(e as f64 / 4.0);
    for i in 0..th.len() {
        root *= th[i].sin();
        for j in i + 1..th.len() {
            root *= th[i].cos() - th[j].cos();
        }
    }
    root * root
}

/// `sqrt |disc R / disc R+|`: the minus class number up to factors `q^(+-eps)`.
///
/// Only an order-of-magnitude indicator; the underlying asymptotic has no
/// effective constants.
pub fn h_minus_estimate(spec: &IsogenyClassSpec) -> Result<f64> {
    Ok(to_f64(&disc_ratio_exact(spec)?).sqrt())
}

fn ordinary_ec_disc(t: &BigInt, q: &BigInt) -> Result<BigInt> {
    let delta = t * t - BigInt::from(4) * q;
    if !delta.is_negative() {
        return domain(format!("t = {t} violates t^2 < 4q for q = {q}"));
    }
    if !t.gcd(q).is_one() {
        return domain(format!("t = {t} is not coprime to q = {q}: not ordinary"));
    }
    Ok(delta)
}

/// `(f, h(f^2 D0))` for every `f | F`, where `t^2 - 4q = F^2 D0`; the counts sum to
/// `H(t^2 - 4q)`, the number of curves in the class.
pub fn ec_stratum_counts(t: &BigInt, q: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
    stratified_class_numbers(&ordinary_ec_disc(t, q)?)
}

/// Evidence level for a sufficient condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certificate {
    Certified,
    Unknown,
}

impl Certificate {
    fn from_bool(b: bool) -> Self {
        if b {
            Certificate::Certified
        } else {
            Certificate::Unknown
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::Certified => "certified",
            Certificate::Unknown => "unknown",
        })
    }
}

/// `K+ = Q(sqrt r)` with `disc g = s^2 r`, and `delta = alpha^2 - 4q` in it.
struct RealQuadraticData {
    conductor: BigInt,
    squarefree: BigInt,
    delta: RealQuadElement,
}

fn real_quadratic_data(spec: &IsogenyClassSpec) -> Result<RealQuadraticData> {
    if spec.n() != 2 {
        return domain(format!("expected n = 2, got n = {}", spec.n()));
    }
    let g = spec.g();
    let (a, c) = (g.coeff(1), g.coeff(0));
    let disc = &a * &a - BigInt::from(4) * c;
    let qd = QuadDiscriminant::new(&disc)?;
    let (s, r) = square_split(&disc)?;
    // alpha = (-a + s sqrt r) / 2
    let four = BigRational::from_integer(4.into());
    let sr = BigRational::from_integer(&s * &s * &r);
    let a_r = BigRational::from_integer(a.clone());
    let delta = RealQuadElement::new(
        (&a_r * &a_r + sr) / &four - BigRational::from_integer(BigInt::from(4) * spec.q()),
        -(a_r * BigRational::from_integer(s)) / BigRational::from_integer(2.into()),
        r.clone(),
    );
    if delta.a.is_zero() && delta.b.is_zero() {
        return domain("alpha^2 - 4q vanishes");
    }
    Ok(RealQuadraticData {
        conductor: qd.conductor,
        squarefree: r,
        delta,
    })
}

/// Odd residue characteristics of primes dividing `(alpha^2 - 4q)` to odd order.
fn odd_ramified_primes(data: &RealQuadraticData) -> Result<Vec<BigInt>> {
    let two = BigInt::from(2);
    Ok(factor_element_ideal(&data.squarefree, &data.delta)?
        .into_iter()
        .filter(|(p, e)| p.ell != two && e % 2 == 1)
        .map(|(p, _)| p.ell)
        .collect())
}

/// Certified when some odd prime of `K+` divides `alpha^2 - 4q` to odd order, which
/// forces `K = K+(sqrt(alpha^2 - 4q))` to ramify there. Never certifies the converse.
pub fn odd_ramification_certificate(spec: &IsogenyClassSpec) -> Result<Certificate> {
    let data = real_quadratic_data(spec)?;
    Ok(Certificate::from_bool(!odd_ramified_primes(&data)?.is_empty()))
}

/// Certified when `K/K+` ramifies at an odd prime not dividing the conductor of
/// `R+ = Z[alpha]`, a sufficient condition for the norm map on Picard groups to
/// be onto the narrow Picard group.
pub fn surjectivity_certificate(spec: &IsogenyClassSpec) -> Result<Certificate> {
    let data = real_quadratic_data(spec)?;
    let ok = odd_ramified_primes(&data)?
        .iter()
        .any(|ell| !data.conductor.is_multiple_of(ell));
    Ok(Certificate::from_bool(ok))
}

/// `[U+_{>0} : (U+)^2]` for `U+` the units of `Z[alpha]`: 1 if the fundamental unit
/// has norm -1, else 2.
pub fn unit_index_real(spec: &IsogenyClassSpec) -> Result<u32> {
    match spec.n() {
        1 => Ok(1),
        2 => {
            let g = spec.g();
            let disc = g.coeff(1).pow(2) - BigInt::from(4) * g.coeff(0);
            let (_, norm) = fundamental_unit(&disc)?;
            Ok(if norm == -1 { 1 } else { 2 })
        }
        n => Err(Error::UnsupportedDegree(2 * n)),
    }
}

/// Which stratum a report describes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stratum {
    /// Endomorphism ring `Z[pi, pi-bar]`.
    Minimal,
    /// Elliptic stratum with endomorphism ring of conductor `f`.
    Conductor(BigInt),
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stratum::Minimal => f.write_str("minimal"),
            Stratum::Conductor(c) => write!(f, "conductor-{c}"),
        }
    }
}

impl Serialize for Stratum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Polarization data for one stratum of an isogeny class.
///
/// `ratio_exact` and `ratio_trig` always describe the minimal order of the class.
#[derive(Clone, Debug, Serialize)]
pub struct StratumReport {
    pub spec: IsogenyClassSpec,
    pub stratum: Stratum,
    #[serde(serialize_with = "serde_util::opt_int_str")]
    pub exact_count: Option<BigInt>,
    #[serde(serialize_with = "serde_util::opt_f64_17")]
    pub estimate: Option<f64>,
    #[serde(serialize_with = "serde_util::int_str")]
    pub ratio_exact: BigInt,
    #[serde(serialize_with = "serde_util::f64_17")]
    pub ratio_trig: f64,
    pub surjectivity: Certificate,
    pub odd_ramified: Certificate,
    pub unit_index_real: u32,
    #[serde(serialize_with = "serde_util::opt_int_str")]
    pub polarizations_per_variety: Option<BigInt>,
}

/// Reports for a simple ordinary class: one per conductor for `n = 1` (exact
/// counts summing to `H(t^2 - 4q)`), a single minimal-stratum report for `n = 2`.
pub fn stratum_reports(spec: &IsogenyClassSpec) -> Result<Vec<StratumReport>> {
    let ratio_exact = disc_ratio_exact(spec)?;
    let ratio_trig = disc_ratio_trig(spec);
    match spec.n() {
        1 => {
            let t = -spec.f().coeff(1);
            let counts = ec_stratum_counts(&t, spec.q())?;
            let delta0 = QuadDiscriminant::new(&ordinary_ec_disc(&t, spec.q())?)?.delta0;
            // K/Q ramifies exactly at the primes dividing D0
            let odd = !(delta0 == BigInt::from(-4) || delta0 == BigInt::from(-8));
            Ok(counts
                .into_iter()
                .map(|(f, h)| StratumReport {
                    spec: spec.clone(),
                    stratum: Stratum::Conductor(f),
                    exact_count: Some(h),
                    estimate: None,
                    ratio_exact: ratio_exact.clone(),
                    ratio_trig,
                    surjectivity: Certificate::Certified,
                    odd_ramified: Certificate::from_bool(odd),
                    unit_index_real: 1,
                    polarizations_per_variety: Some(BigInt::one()),
                })
                .collect())
        }
        2 => {
            let odd_ramified = odd_ramification_certificate(spec)?;
            let unit_index = unit_index_real(spec)?;
            // [U+_{>0} : N(U)] = [U+_{>0} : (U+)^2] once [N(U) : (U+)^2] = 1
            let per_variety = (odd_ramified == Certificate::Certified).then(|| BigInt::from(unit_index));
            Ok(vec![StratumReport {
                spec: spec.clone(),
                stratum: Stratum::Minimal,
                exact_count: None,
                estimate: Some(to_f64(&ratio_exact).sqrt()),
                ratio_exact,
                ratio_trig,
                surjectivity: surjectivity_certificate(spec)?,
                odd_ramified,
                unit_index_real: unit_index,
                polarizations_per_variety: per_variety,
            }])
        }
        n => Err(Error::UnsupportedDegree(2 * n)),
    }
}

/// An elliptic isogeny class whose minimal stratum holds few of its curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeavyClass {
    #[serde(serialize_with = "serde_util::int_str")]
    pub p: BigInt,
    #[serde(serialize_with = "serde_util::int_str")]
    pub t: BigInt,
    #[serde(serialize_with = "serde_util::int_str")]
    pub delta: BigInt,
    #[serde(rename = "F", serialize_with = "serde_util::int_str")]
    pub conductor: BigInt,
    /// `h(delta) / H(delta)`.
    #[serde(serialize_with = "serde_util::rat_str")]
    pub ratio: BigRational,
    /// `prod_{l | F} (l + 1)/(l + 2)`.
    #[serde(serialize_with = "serde_util::rat_str")]
    pub bound: BigRational,
    pub x: u64,
    pub y: u64,
}

/// First prime `p = x^2 + m^2 |D0| y^2` (by `y`, then `x`, both in `1..=limit`),
/// taken with trace `t = 2x`; then `t^2 - 4p = 4 m^2 y^2 D0` has conductor
/// divisible by `m`.
pub fn find_heavy_isogeny_class(m: u64, delta0: i64, limit: u64) -> Result<HeavyClass> {
    if m < 2 {
        return domain(format!("m = {m} must be at least 2"));
    }
    let d0 = BigInt::from(delta0);
    if delta0 >= -4 || !is_fundamental_discriminant(&d0) {
        return domain(format!("{delta0} is not a fundamental discriminant below -4"));
    }
    let n = BigInt::from(m) * BigInt::from(m) * d0.abs();
    let hit = (1..=limit).into_par_iter().find_map_first(|y| {
        let ny2 = &n * BigInt::from(y) * BigInt::from(y);
        (1..=limit).find_map(|x| {
            let p = BigInt::from(x) * BigInt::from(x) + &ny2;
            is_prime(&p).then_some((x, y, p))
        })
    });
    let Some((x, y, p)) = hit else {
        return Err(Error::SearchLimit(limit));
    };
    let t = BigInt::from(2 * x);
    let delta = ordinary_ec_disc(&t, &p)?;
    let conductor = QuadDiscriminant::new(&delta)?.conductor;
    if !conductor.is_multiple_of(&BigInt::from(m)) {
        return Err(Error::Internal(format!("conductor {conductor} not divisible by {m}")));
    }
    let (ratio, bound) = h_over_h_bound(&delta)?;
    if ratio > bound {
        return Err(Error::BoundViolation(format!(
            "h/H = {ratio} exceeds {bound} at p = {p}"
        )));
    }
    Ok(HeavyClass {
        p,
        t,
        delta,
        conductor,
        ratio,
        bound,
        x,
        y,
    })
}

/// The three explicit families of surface strata over `F_p`, `p = 7 mod 8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Small,
    Smaller,
    Smallest,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Small, Family::Smaller, Family::Smallest];

    pub fn name(self) -> &'static str {
        match self {
            Family::Small => "small",
            Family::Smaller => "smaller",
            Family::Smallest => "smallest",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown family {s:?} (small, smaller, smallest)")))
    }
}

/// Outcome of a family member's bound check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundCheck {
    Holds,
    /// The family's bound is only claimed for larger `p`.
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyMember {
    pub family: Family,
    pub p: u64,
    /// `a_p` for `small`, `c_p` for `smallest`, absent for `smaller`.
    pub parameter: Option<i64>,
    pub bound: BoundCheck,
    pub report: StratumReport,
}

/// Weil polynomial of a family member.
pub fn family_polynomial(family: Family, p: u64) -> Result<(IntPoly, Option<i64>)> {
    if p % 8 != 7 || !is_prime(&BigInt::from(p)) {
        return domain(format!("p = {p} must be a prime congruent to 7 mod 8"));
    }
    let pb = BigInt::from(p);
    // p is not a square, so "largest integer below sqrt(p) - 1" is floor(sqrt p) - 1
    let root = isqrt(&pb).to_i64().expect("small p");
    let pi = p as i64;
    // x^4 + a x^3 + b x^2 + a p x + p^2
    let poly = |a: i64, b: i64| crate::weil::quartic_from_ab(&BigInt::from(a), &BigInt::from(b), &pb);
    Ok(match family {
        Family::Small => {
            let a = root - 1;
            (poly(-2 * a, a * a + pi), Some(a))
        }
        Family::Smaller => (poly(1, 2 * pi - 1), None),
        Family::Smallest => {
            let c = isqrt(&(BigInt::from(4) * &pb)).to_i64().expect("small p") - 1;
            (poly(1 - 2 * c, 2 * pi + c * c - c - 1), Some(c))
        }
    })
}

fn check_bound(family: Family, p: u64, ratio: &BigInt) -> Result<BoundCheck> {
    let pb = BigInt::from(p);
    let ok = match family {
        Family::Small => {
            // 32 p^(5/2) < ratio < 144 p^(5/2), squared
            let p5 = pb.pow(5);
            let r2 = ratio * ratio;
            BigInt::from(1024) * &p5 < r2 && r2 < BigInt::from(20736) * p5
        }
        Family::Smaller => *ratio == BigInt::from(5) * (BigInt::from(16) * &pb * &pb - BigInt::from(12) * &pb + 1),
        Family::Smallest => {
            if p <= 144 {
                return Ok(BoundCheck::Skipped);
            }
            BigInt::from(75) * &pb < *ratio && *ratio < BigInt::from(400) * &pb
        }
    };
    if ok {
        Ok(BoundCheck::Holds)
    } else {
        Err(Error::BoundViolation(format!(
            "{} family at p = {p}: ratio {ratio}",
            family.name()
        )))
    }
}

/// Build, validate and bound-check one family member.
pub fn example_family(family: Family, p: u64) -> Result<FamilyMember> {
    let (f, parameter) = family_polynomial(family, p)?;
    let spec = IsogenyClassSpec::simple_ordinary(f, BigInt::from(p))?;
    let report = stratum_reports(&spec)?.remove(0);
    let bound = check_bound(family, p, &report.ratio_exact)?;
    Ok(FamilyMember {
        family,
        p,
        parameter,
        bound,
        report,
    })
}

/// Every family member with `p <= pmax`, in increasing `p`. The first failure (in
/// `p` order) is returned as the error.
pub fn family_sweep(family: Family, pmax: u64) -> Result<Vec<FamilyMember>> {
    let primes: Vec<u64> = (7..=pmax)
        .step_by(8)
        .filter(|&p| crate::arith::factor::is_prime_u64(p))
        .collect();
    let results: Vec<Result<FamilyMember>> = primes.par_iter().map(|&p| example_family(family, p)).collect();
    results.into_iter().collect()
}

/// `h(delta)` for an elliptic stratum, exposed for reports on the minimal stratum.
pub fn minimal_stratum_count(t: &BigInt, q: &BigInt) -> Result<BigInt> {
    class_number_imaginary(&ordinary_ec_disc(t, q)?)
}

/// Total number of curves in the class, `H(t^2 - 4q)`.
pub fn curves_in_class(t: &BigInt, q: &BigInt) -> Result<BigInt> {
    kronecker_class_number(&ordinary_ec_disc(t, q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::FieldContext;
    use crate::weil::{prime_powers_up_to, random_n2_spec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn f23() -> IsogenyClassSpec {
        IsogenyClassSpec::from_i64(&[529, -138, 32, -6, 1], 23).unwrap()
    }

    #[test]
    fn documented_ratios() {
        assert_eq!(disc_ratio_exact(&f23()).unwrap(), b(255_024));
        assert!((disc_ratio_trig(&f23()) / 255_024.0 - 1.0).abs() < 1e-9);
        let s = IsogenyClassSpec::from_i64(&[5, -3, 1], 5).unwrap();
        assert_eq!(disc_ratio_exact(&s).unwrap(), b(11));
        let s = IsogenyClassSpec::from_i64(&[7, 0, 1], 7).unwrap();
        assert_eq!(disc_ratio_exact(&s).unwrap(), b(28));
        assert!((disc_ratio_trig(&s) - 28.0).abs() < 1e-12);
        let m = example_family(Family::Smaller, 7).unwrap();
        assert_eq!(m.report.ratio_exact, b(3505));
        assert!((h_minus_estimate(&m.report.spec).unwrap() - 59.2).abs() < 0.05);
        assert!((h_minus_estimate(&f23()).unwrap() - 505.0).abs() < 0.1);
    }

    #[test]
    fn small_family_closed_form() {
        // ratio = 4p (p - a^2)(9p - a^2) for the small family
        for p in [7u64, 23, 31, 47, 71, 79, 103] {
            let m = example_family(Family::Small, p).unwrap();
            let a = m.parameter.unwrap();
            let pi = p as i64;
            assert_eq!(m.report.ratio_exact, b(4 * pi * (pi - a * a) * (9 * pi - a * a)));
        }
        assert_eq!(example_family(Family::Small, 23).unwrap().parameter, Some(3));
        assert_eq!(example_family(Family::Smallest, 7).unwrap().parameter, Some(4));
        assert_eq!(example_family(Family::Smallest, 7).unwrap().bound, BoundCheck::Skipped);
        assert_eq!(family_polynomial(Family::Smallest, 7).unwrap().0.coeff(2), b(25));
        assert!(example_family(Family::Small, 13).is_err());
    }

    #[test]
    fn family_sweeps() {
        for fam in Family::ALL {
            let members = family_sweep(fam, 2000).unwrap();
            assert!(members.len() > 50);
            for m in &members {
                assert_eq!(m.report.surjectivity, Certificate::Certified, "{fam:?} p = {}", m.p);
            }
        }
    }

    #[test]
    fn elliptic_strata() {
        let counts = ec_stratum_counts(&b(2), &b(29)).unwrap();
        assert_eq!(counts, vec![(b(1), b(1)), (b(2), b(1)), (b(4), b(2))]);
        assert_eq!(curves_in_class(&b(2), &b(29)).unwrap(), b(4));
        assert_eq!(minimal_stratum_count(&b(2), &b(29)).unwrap(), b(2));
        // sqrt|D| against the exact count shows the slack in the estimate
        assert!(((112f64).sqrt() - 10.58).abs() < 0.01);
        assert!(ec_stratum_counts(&b(5), &b(5)).is_err());
        assert!(ec_stratum_counts(&b(11), &b(29)).is_err());
        let reports = stratum_reports(&IsogenyClassSpec::from_i64(&[5, -3, 1], 5).unwrap()).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].exact_count, Some(b(1)));
        assert!(reports[0].estimate.is_none());
    }

    #[test]
    fn ramification_certificates() {
        assert_eq!(odd_ramification_certificate(&f23()).unwrap(), Certificate::Certified);
        assert_eq!(surjectivity_certificate(&f23()).unwrap(), Certificate::Certified);
        let m = example_family(Family::Smaller, 7).unwrap();
        assert_eq!(m.report.odd_ramified, Certificate::Certified);
        // g = x^2 - 320 over q = 81: alpha = 8 sqrt 5 and alpha^2 - 4q = -4
        let s =
            IsogenyClassSpec::simple_ordinary(crate::weil::quartic_from_ab(&b(0), &b(-158), &b(81)), b(81)).unwrap();
        assert_eq!(odd_ramification_certificate(&s).unwrap(), Certificate::Unknown);
        assert_eq!(surjectivity_certificate(&s).unwrap(), Certificate::Unknown);
        assert_eq!(stratum_reports(&s).unwrap()[0].polarizations_per_variety, None);
        assert!(odd_ramification_certificate(&IsogenyClassSpec::from_i64(&[5, -3, 1], 5).unwrap()).is_err());
    }

    #[test]
    fn surjectivity_declines_when_ramification_hides_in_conductor() {
        // search small classes for odd ramification only at primes dividing the conductor
        let mut found = false;
        'outer: for q in [5i64, 7, 9, 11, 13] {
            for a in -12..=12 {
                for bb in -2 * q..=6 * q {
                    let f = crate::weil::quartic_from_ab(&b(a), &b(bb), &b(q));
                    let Ok(s) = IsogenyClassSpec::simple_ordinary(f, b(q)) else {
                        continue;
                    };
                    if odd_ramification_certificate(&s).unwrap() == Certificate::Certified
                        && surjectivity_certificate(&s).unwrap() == Certificate::Unknown
                    {
                        let data = real_quadratic_data(&s).unwrap();
                        for ell in odd_ramified_primes(&data).unwrap() {
                            assert!(data.conductor.is_multiple_of(&ell));
                        }
                        found = true;
                        break 'outer;
                    }
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn heavy_classes() {
        let h = find_heavy_isogeny_class(2, -7, 100).unwrap();
        assert_eq!(
            (h.p.clone(), h.t.clone(), h.delta.clone(), h.conductor.clone()),
            (b(29), b(2), b(-112), b(4))
        );
        assert_eq!(h.ratio, BigRational::new(b(1), b(2)));
        assert_eq!(h.bound, BigRational::new(b(3), b(4)));
        let h = find_heavy_isogeny_class(3, -7, 100).unwrap();
        assert_eq!((h.p.clone(), h.t.clone(), h.conductor.clone()), (b(67), b(4), b(6)));
        assert!(matches!(find_heavy_isogeny_class(2, -4, 10), Err(Error::Domain(_))));
        assert!(matches!(find_heavy_isogeny_class(1, -7, 10), Err(Error::Domain(_))));
        for (m, d0) in [(2u64, -8i64), (5, -11), (6, -15), (4, -19), (7, -20)] {
            let h = find_heavy_isogeny_class(m, d0, 200).unwrap();
            assert!(h.conductor.is_multiple_of(&BigInt::from(m)));
            assert!(h.ratio <= h.bound);
            assert_eq!(
                h.delta,
                BigInt::from(4 * m * m) * BigInt::from(d0) * BigInt::from(h.y * h.y)
            );
        }
    }

    /// Brute force over the search box with the stated ordering.
    #[test]
    fn heavy_search_order() {
        for (m, d0) in [(2u64, -7i64), (3, -7), (5, -15)] {
            let Ok(h) = find_heavy_isogeny_class(m, d0, 60) else {
                continue;
            };
            let n = m * m * d0.unsigned_abs();
            let first = (1..=60u64)
                .flat_map(|y| (1..=60u64).map(move |x| (x, y)))
                .find(|&(x, y)| crate::arith::factor::is_prime_u64(x * x + n * y * y))
                .unwrap();
            assert_eq!((h.x, h.y), first);
        }
    }

    #[test]
    fn lattice_quotient_matches_resultants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pp = prime_powers_up_to(10_000);
        for _ in 0..50 {
            let spec = random_n2_spec(&mut rng, &pp);
            let ctx = FieldContext::new(&spec).unwrap();
            let r = ctx.minimal_order().unwrap();
            let rp = ctx.real_sublattice(&r).unwrap();
            let q = (r.discriminant() / rp.discriminant()).abs();
            assert_eq!(q, BigRational::from_integer(disc_ratio_exact(&spec).unwrap()));
        }
    }

    #[test]
    fn elliptic_totals_match_kronecker() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pp = prime_powers_up_to(5000);
        for _ in 0..300 {
            let q = pp[rng.gen_range(0..pp.len())] as i64;
            let tmax = (2.0 * (q as f64).sqrt()).ceil() as i64;
            let t = rng.gen_range(-tmax..=tmax);
            if t * t >= 4 * q || num_integer::gcd(t, q) != 1 {
                continue;
            }
            let total: BigInt = ec_stratum_counts(&b(t), &b(q))
                .unwrap()
                .into_iter()
                .map(|(_, h)| h)
                .sum();
            assert_eq!(total, kronecker_class_number(&b(t * t - 4 * q)).unwrap());
        }
    }

    #[test]
    fn trig_matches_exact_on_random_specs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pp = prime_powers_up_to(1_000_000);
        for _ in 0..300 {
            let spec = random_n2_spec(&mut rng, &pp);
            let exact = to_f64(&disc_ratio_exact(&spec).unwrap());
            let rel = disc_ratio_trig(&spec) / exact;
            assert!((rel - 1.0).abs() < 1e-9, "{} rel {rel}", spec.f());
        }
    }

    #[test]
    fn report_json_uses_strings() {
        let r = stratum_reports(&f23()).unwrap().remove(0);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["ratio_exact"], "255024");
        assert_eq!(v["stratum"], "minimal");
        assert_eq!(v["surjectivity"], "certified");
        assert!(v["exact_count"].is_null());
        assert_eq!(v["spec"]["q"], "23");
    }
}
