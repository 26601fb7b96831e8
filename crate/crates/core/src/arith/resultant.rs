use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::det_int;
use super::poly::IntPoly;
use crate::error::{domain, Result};

/// Resultant via the Sylvester determinant: `lc(a)^deg(b) * prod b(alpha)` over roots of `a`.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> Result<BigInt> {
    let (Some(m), Some(n)) = (a.degree(), b.degree()) else {
        return domain("resultant of the zero polynomial");
    };
    let size = m + n;
    if size == 0 {
        return Ok(BigInt::one());
    }
    let desc = |p: &IntPoly| p.coeffs().iter().rev().cloned().collect::<Vec<_>>();
    let (da, db) = (desc(a), desc(b));
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![BigInt::zero(); size];
        row[shift..shift + m + 1].clone_from_slice(&da);
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![BigInt::zero(); size];
        row[shift..shift + n + 1].clone_from_slice(&db);
        rows.push(row);
    }
    Ok(det_int(&rows))
}

/// Discriminant of a monic polynomial: `(-1)^(d(d-1)/2) res(p, p')`.
pub fn discriminant(p: &IntPoly) -> Result<BigInt> {
    let Some(d) = p.degree() else {
        return domain("discriminant of the zero polynomial");
    };
    if !p.is_monic() {
        return domain("discriminant expects a monic polynomial");
    }
    if d == 0 {
        return Ok(BigInt::one());
    }
    let r = resultant(p, &p.derivative())?;
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn linear_factor_evaluates() {
        let g = p(&[-14, -6, 1]);
        for a in -5..5 {
            let lin = p(&[-a, 1]);
            assert_eq!(resultant(&lin, &g).unwrap(), g.eval(&BigInt::from(a)));
        }
    }

    #[test]
    fn documented_resultants() {
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])).unwrap(), BigInt::from(1));
        assert_eq!(
            resultant(&p(&[-14, -6, 1]), &p(&[-92, 0, 1])).unwrap(),
            BigInt::from(2772)
        );
        assert!(resultant(&IntPoly::zero(), &p(&[1, 1])).is_err());
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&p(&[-14, -6, 1])).unwrap(), BigInt::from(92));
        assert_eq!(discriminant(&p(&[2, -1, 1])).unwrap(), BigInt::from(-7));
        // x^3 - 2: -27 * 4
        assert_eq!(discriminant(&p(&[-2, 0, 0, 1])).unwrap(), BigInt::from(-108));
    }

    fn monic(max_deg: usize) -> impl Strategy<Value = IntPoly> {
        (1..=max_deg).prop_flat_map(|d| {
            proptest::collection::vec(-20i64..20, d).prop_map(|mut c| {
                c.push(1);
                IntPoly::from_i64(&c)
            })
        })
    }

    /// Product of b over the roots of monic a, computed as the norm of b in Z[x]/(a).
    fn norm_oracle(a: &IntPoly, b: &IntPoly) -> BigInt {
        use crate::arith::matrix::det_int;
        let d = a.degree().unwrap();
        let reduce = |v: Vec<BigInt>| -> Vec<BigInt> {
            let mut v = v;
            for k in (d..v.len()).rev() {
                let c = v[k].clone();
                if c.is_zero() {
                    continue;
                }
                for (i, ai) in a.coeffs().iter().enumerate().take(d) {
                    v[k - d + i] -= &c * ai;
                }
                v[k] = BigInt::zero();
            }
            v.truncate(d);
            v.resize(d, BigInt::zero());
            v
        };
        let rows: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                let mut shifted = vec![BigInt::zero(); i];
                shifted.extend(b.coeffs().iter().cloned());
                reduce(shifted)
            })
            .collect();
        det_int(&rows)
    }

    proptest! {
        #[test]
        fn swap_sign_rule(a in monic(4), b in monic(4)) {
            let (m, n) = (a.degree().unwrap(), b.degree().unwrap());
            let ab = resultant(&a, &b).unwrap();
            let ba = resultant(&b, &a).unwrap();
            let sign = if (m * n) % 2 == 1 { -BigInt::one() } else { BigInt::one() };
            prop_assert_eq!(ab * sign, ba);
        }

        #[test]
        fn matches_norm(a in monic(4), b in monic(4)) {
            prop_assert_eq!(resultant(&a, &b).unwrap(), norm_oracle(&a, &b));
        }
    }
}
