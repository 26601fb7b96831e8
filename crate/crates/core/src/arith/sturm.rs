//! Exact real-root counting and isolation via Sturm sequences.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{IntPoly, RatPoly};
use crate::error::{domain, Result};

/// A real number of the form `a + b*sqrt(m)` with rational `a`, `b` and integer `m > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealPoint {
    Rational(BigRational),
    Surd { a: BigRational, b: BigRational, m: BigInt },
}

impl RealPoint {
    pub fn int(n: i64) -> Self {
        RealPoint::Rational(BigRational::from_integer(n.into()))
    }

    /// `b*sqrt(m)`.
    pub fn sqrt_multiple(b: BigRational, m: BigInt) -> Self {
        RealPoint::Surd {
            a: BigRational::zero(),
            b,
            m,
        }
    }
}

fn sign_of_surd(a: &BigRational, b: &BigRational, m: &BigInt) -> Ordering {
    let sa = a.cmp(&BigRational::zero());
    let sb = b.cmp(&BigRational::zero());
    if sb == Ordering::Equal || sa == sb {
        return if sa == Ordering::Equal { sb } else { sa };
    }
    if sa == Ordering::Equal {
        return sb;
    }
    // opposite signs: the larger magnitude wins
    let lhs = a * a;
    let rhs = b * b * BigRational::from_integer(m.clone());
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Sign of `p` at an exact real point.
pub fn sign_at(p: &IntPoly, x: &RealPoint) -> Ordering {
    match x {
        RealPoint::Rational(r) => p.eval_rational(r).cmp(&BigRational::zero()),
        RealPoint::Surd { a, b, m } => {
            // Horner in Q(sqrt m): (u + v s)(a + b s) = (ua + v b m) + (ub + va) s
            let mr = BigRational::from_integer(m.clone());
            let (mut u, mut v) = (BigRational::zero(), BigRational::zero());
            for c in p.coeffs().iter().rev() {
                let nu = &u * a + &v * b * &mr + BigRational::from_integer(c.clone());
                let nv = &u * b + &v * a;
                u = nu;
                v = nv;
            }
            sign_of_surd(&u, &v, m)
        }
    }
}

/// Precomputed Sturm sequence of a squarefree integer polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<IntPoly>,
}

/// Scale to integer coefficients by a positive factor (signs preserved).
fn positive_integral(p: &RatPoly) -> IntPoly {
    let den = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let q = IntPoly::new(ints);
    let content = q.content();
    if content.is_zero() || content.is_one() {
        return q;
    }
    IntPoly::new(q.coeffs().iter().map(|c| c / &content).collect())
}

impl SturmSequence {
    pub fn new(p: &IntPoly) -> Result<Self> {
        if p.is_zero() {
            return domain("Sturm sequence of the zero polynomial");
        }
        if !p.is_squarefree() {
            return domain(format!("{p} is not squarefree; deflate by gcd(p, p') first"));
        }
        let mut chain = vec![p.clone()];
        let mut prev = p.to_rat();
        let mut cur = p.derivative().to_rat();
        while !cur.is_zero() {
            chain.push(positive_integral(&cur));
            let (_, r) = prev.div_rem(&cur);
            prev = cur;
            cur = r.neg();
        }
        Ok(SturmSequence { chain })
    }

    pub fn polynomial(&self) -> &IntPoly {
        &self.chain[0]
    }

    /// Sign changes of the sequence at `x`, zeros dropped.
    pub fn variations(&self, x: &RealPoint) -> usize {
        let mut count = 0;
        let mut last = Ordering::Equal;
        for s in self.chain.iter().map(|p| sign_at(p, x)) {
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &RealPoint, hi: &RealPoint) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// Number of real roots of the squarefree `p` in `(lo, hi]`.
pub fn sturm_count(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> Result<usize> {
    if lo >= hi {
        return domain(format!("empty interval ({lo}, {hi}]"));
    }
    let seq = SturmSequence::new(p)?;
    Ok(seq.count(&RealPoint::Rational(lo.clone()), &RealPoint::Rational(hi.clone())))
}

/// Cauchy bound: every real root lies in `(-B, B)`.
pub fn cauchy_bound(p: &IntPoly) -> BigRational {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let max = p
        .coeffs()
        .iter()
        .take(p.coeffs().len() - 1)
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    BigRational::new(max, lead) + BigRational::one()
}

/// Sign of `p(n / 2^k)`, computed in integers as `2^(k deg p) p(n / 2^k)`.
pub fn sign_at_dyadic(p: &IntPoly, n: &BigInt, k: usize) -> Ordering {
    let Some(d) = p.degree() else {
        return Ordering::Equal;
    };
    let c = p.coeffs();
    let mut acc = c[d].clone();
    for i in (0..d).rev() {
        acc = acc * n + (&c[i] << (k * (d - i)));
    }
    acc.cmp(&BigInt::zero())
}

fn variations_dyadic(chain: &[IntPoly], n: &BigInt, k: usize) -> usize {
    let mut count = 0;
    let mut last = Ordering::Equal;
    for s in chain.iter().map(|p| sign_at_dyadic(p, n, k)) {
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Approximations within `2^-bits` of every real root of the squarefree `p`
/// in `(-bound, bound]`, ascending.
///
/// Roots are first isolated with the Sturm sequence, then refined by sign
/// bisection; all endpoints are integers scaled by `2^bits`.
pub fn isolate_roots(p: &IntPoly, bound: &BigInt, bits: usize) -> Result<Vec<BigRational>> {
    let seq = SturmSequence::new(p)?;
    let chain = &seq.chain;
    let k = bits;
    let scale = BigInt::one() << k;
    let mut isolated = Vec::new();
    let mut stack = vec![(-(bound << k), bound << k)];
    while let Some((a, b)) = stack.pop() {
        let n = variations_dyadic(chain, &a, k).saturating_sub(variations_dyadic(chain, &b, k));
        if n == 0 {
            continue;
        }
        if n == 1 || &b - &a <= BigInt::one() {
            isolated.push((a, b));
            continue;
        }
        let mid: BigInt = (&a + &b) >> 1;
        stack.push((mid.clone(), b));
        stack.push((a, mid));
    }
    let mut out = Vec::with_capacity(isolated.len());
    for (mut a, mut b) in isolated {
        let sb = sign_at_dyadic(p, &b, k);
        if sb == Ordering::Equal {
            out.push(BigRational::new(b, scale.clone()));
            continue;
        }
        // exactly one simple root in (a, b): keep the half where the sign changes
        while &b - &a > BigInt::one() {
            let mid: BigInt = (&a + &b) >> 1;
            match sign_at_dyadic(p, &mid, k) {
                Ordering::Equal => {
                    a = mid.clone();
                    b = mid;
                    break;
                }
                s if s == sb => b = mid,
                _ => a = mid,
            }
        }
        out.push(BigRational::new(a + b, &scale << 1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn documented_counts() {
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(sturm_count(&p, &rat(0), &rat(2)).unwrap(), 1);
        let p = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(sturm_count(&p, &rat(-10), &rat(10)).unwrap(), 0);
        let p = IntPoly::from_i64(&[-14, -6, 1]);
        assert_eq!(sturm_count(&p, &rat(-10), &rat(10)).unwrap(), 2);
    }

    #[test]
    fn half_open_interval() {
        // roots at 1 and 2
        let p = IntPoly::from_i64(&[2, -3, 1]);
        assert_eq!(sturm_count(&p, &rat(1), &rat(2)).unwrap(), 1);
        assert_eq!(sturm_count(&p, &rat(0), &rat(1)).unwrap(), 1);
        assert_eq!(sturm_count(&p, &rat(0), &rat(2)).unwrap(), 2);
    }

    #[test]
    fn rejects_repeated_roots() {
        let p = IntPoly::from_i64(&[1, 2, 1]);
        assert!(sturm_count(&p, &rat(-3), &rat(3)).is_err());
    }

    #[test]
    fn surd_endpoints() {
        // x^2 - 8 has roots +-2 sqrt 2; count on (-2 sqrt 2, 2 sqrt 2] sees only the upper root
        let p = IntPoly::from_i64(&[-8, 0, 1]);
        let seq = SturmSequence::new(&p).unwrap();
        let hi = RealPoint::sqrt_multiple(rat(2), 2.into());
        let lo = RealPoint::sqrt_multiple(rat(-2), 2.into());
        assert_eq!(seq.count(&lo, &hi), 1);
        assert_eq!(sign_at(&p, &hi), Ordering::Equal);
    }

    #[test]
    fn isolation_brackets_roots() {
        let p = IntPoly::from_i64(&[-14, -6, 1]);
        let roots = isolate_roots(&p, &BigInt::from(10), 60).unwrap();
        assert_eq!(roots.len(), 2);
        let r0 = crate::arith::rat_to_f64(&roots[0]);
        let r1 = crate::arith::rat_to_f64(&roots[1]);
        assert!((r0 - (3.0 - 23f64.sqrt())).abs() < 1e-14);
        assert!((r1 - (3.0 + 23f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn isolation_finds_exact_and_clustered_roots() {
        // roots 1/2, 1, 1 + 2^-40
        let p = &(&IntPoly::from_i64(&[-1, 2]) * &IntPoly::from_i64(&[-1, 1]))
            * &IntPoly::from_i64(&[-((1i64 << 40) + 1), 1i64 << 40]);
        let roots = isolate_roots(&p, &BigInt::from(4), 64).unwrap();
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[0], BigRational::new(1.into(), 2.into()));
        assert_eq!(roots[1], BigRational::one());
        let gap = &roots[2] - BigRational::one();
        assert!((crate::arith::rat_to_f64(&gap) * 2f64.powi(40) - 1.0).abs() < 1e-6);
    }

    /// Sign changes of `p` across an integer grid; exact when roots sit at half-integers.
    fn grid_oracle(p: &IntPoly, span: i64) -> usize {
        let signs: Vec<_> = (-span..=span)
            .map(|x| p.eval(&BigInt::from(x)).cmp(&BigInt::zero()))
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    proptest! {
        #[test]
        fn total_count_matches_root_oracle(
            roots in proptest::collection::vec(-30i64..30, 1..5),
            extra in 0i64..5,
        ) {
            // product of (2x - (2r+1)) times (x^2 + extra + 1)
            let mut p = IntPoly::from_i64(&[extra + 1, 0, 1]);
            let mut distinct = roots.clone();
            distinct.sort();
            distinct.dedup();
            for r in &distinct {
                p = &p * &IntPoly::from_i64(&[-(2 * r + 1), 2]);
            }
            let b = cauchy_bound(&p);
            let n = sturm_count(&p, &-b.clone(), &b).unwrap();
            prop_assert_eq!(n, grid_oracle(&p, 40));
        }
    }
}
