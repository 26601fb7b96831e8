//! Quadratic orders: class numbers from reduced binary quadratic forms, Kronecker
//! class numbers, fundamental units and prime factorization of principal ideals.
//!
//! `H(D)` is the unweighted sum of `h(f^2 D0)` over `f | F`; no correction for the
//! extra automorphisms at `D0 = -3, -4` is applied.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::factor::{divisors, factorize, square_split, valuation};
use crate::arith::{is_square, isqrt, kronecker_symbol, to_f64};
use crate::error::{domain, Error, Result};
use crate::serde_util;

/// `D = F^2 D0` with `D0` a fundamental discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadDiscriminant {
    #[serde(serialize_with = "serde_util::int_str")]
    pub delta: BigInt,
    #[serde(serialize_with = "serde_util::int_str")]
    pub delta0: BigInt,
    #[serde(rename = "F", serialize_with = "serde_util::int_str")]
    pub conductor: BigInt,
}

impl QuadDiscriminant {
    pub fn new(delta: &BigInt) -> Result<Self> {
        let r4 = delta.mod_floor(&BigInt::from(4));
        if !(r4.is_zero() || r4.is_one()) {
            return domain(format!("{delta} is not 0 or 1 mod 4"));
        }
        if is_square(delta) {
            return domain(format!("{delta} is a square"));
        }
        let (s, r) = square_split(delta)?;
        let (delta0, conductor) = if r.mod_floor(&BigInt::from(4)).is_one() {
            (r, s)
        } else {
            (r * 4, s / 2)
        };
        Ok(QuadDiscriminant {
            delta: delta.clone(),
            delta0,
            conductor,
        })
    }

    pub fn is_fundamental(&self) -> bool {
        self.conductor.is_one()
    }
}

pub fn is_fundamental_discriminant(d: &BigInt) -> bool {
    QuadDiscriminant::new(d).is_ok_and(|q| q.is_fundamental())
}

fn small(delta: &BigInt) -> Result<i64> {
    delta
        .to_i64()
        .filter(|d| d.unsigned_abs() < 1 << 60)
        .ok_or_else(|| Error::Domain(format!("{delta} exceeds the enumeration range")))
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.gcd(&b).gcd(&c)
}

/// Count of primitive reduced positive definite forms of discriminant `d < 0`.
fn h_imaginary_i64(d: i64) -> u64 {
    let n = -d;
    let amax = ((n / 3) as f64).sqrt() as i64 + 1;
    let mut count = 0u64;
    for a in 1..=amax {
        let four_a = 4 * a;
        let mut b = (d & 1).abs();
        while b <= a {
            let num = b * b - d;
            if num % four_a == 0 {
                let c = num / four_a;
                if c >= a && gcd3(a, b, c) == 1 {
                    count += if b == 0 || b == a || a == c { 1 } else { 2 };
                }
            }
            b += 2;
        }
    }
    count
}

/// Class number of the imaginary quadratic order of discriminant `delta`, by
/// enumerating primitive reduced forms.
pub fn class_number_imaginary(delta: &BigInt) -> Result<BigInt> {
    if !delta.is_negative() {
        return domain(format!("{delta} is not negative"));
    }
    let r4 = delta.mod_floor(&BigInt::from(4));
    if !(r4.is_zero() || r4.is_one()) {
        return domain(format!("{delta} is not 0 or 1 mod 4"));
    }
    Ok(BigInt::from(h_imaginary_i64(small(delta)?)))
}

/// `h(f^2 D0) = h(D0) f prod_{p | f} (1 - chi(p)/p) / [O* : O_f*]`.
pub fn class_number_by_formula(delta0: &BigInt, f: &BigInt) -> Result<BigInt> {
    if !delta0.is_negative() || !is_fundamental_discriminant(delta0) {
        return domain(format!("{delta0} is not a negative fundamental discriminant"));
    }
    if !f.is_positive() {
        return domain(format!("conductor {f} must be positive"));
    }
    let h0 = class_number_imaginary(delta0)?;
    let mut value = BigRational::from_integer(h0 * f);
    for (p, _) in factorize(f)? {
        let chi = kronecker_symbol(delta0, &p);
        value *= BigRational::new(&p - BigInt::from(chi), p.clone());
    }
    if !f.is_one() {
        if *delta0 == BigInt::from(-4) {
            value /= BigRational::from_integer(2.into());
        } else if *delta0 == BigInt::from(-3) {
            value /= BigRational::from_integer(3.into());
        }
    }
    if !value.is_integer() {
        return Err(Error::Internal(format!(
            "class number formula gave non-integer {value} for ({delta0}, {f})"
        )));
    }
    Ok(value.to_integer())
}

/// Kronecker class number `H(D) = sum_{f | F} h(f^2 D0)`.
pub fn kronecker_class_number(delta: &BigInt) -> Result<BigInt> {
    if !delta.is_negative() {
        return domain(format!("{delta} is not negative"));
    }
    let qd = QuadDiscriminant::new(delta)?;
    let mut total = BigInt::zero();
    for f in divisors(&qd.conductor)? {
        total += class_number_imaginary(&(&f * &f * &qd.delta0))?;
    }
    Ok(total)
}

/// Per-conductor class numbers `(f, h(f^2 D0))` for `f | F`, ascending in `f`.
pub fn stratified_class_numbers(delta: &BigInt) -> Result<Vec<(BigInt, BigInt)>> {
    let qd = QuadDiscriminant::new(delta)?;
    divisors(&qd.conductor)?
        .into_iter()
        .map(|f| {
            let h = class_number_imaginary(&(&f * &f * &qd.delta0))?;
            Ok((f, h))
        })
        .collect()
}

/// `(h(D) / H(D), prod_{p | F} (p + 1) / (p + 2))`.
pub fn h_over_h_bound(delta: &BigInt) -> Result<(BigRational, BigRational)> {
    let qd = QuadDiscriminant::new(delta)?;
    let h = class_number_imaginary(delta)?;
    let big_h = kronecker_class_number(delta)?;
    let mut bound = BigRational::one();
    for (p, _) in factorize(&qd.conductor)? {
        bound *= BigRational::new(&p + 1, &p + 2);
    }
    Ok((BigRational::new(h, big_h), bound))
}

/// `a + b sqrt(d)` with `d` a squarefree integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealQuadElement {
    #[serde(serialize_with = "serde_util::rat_str")]
    pub a: BigRational,
    #[serde(serialize_with = "serde_util::rat_str")]
    pub b: BigRational,
    #[serde(serialize_with = "serde_util::int_str")]
    pub d: BigInt,
}

impl RealQuadElement {
    pub fn new(a: BigRational, b: BigRational, d: BigInt) -> Self {
        RealQuadElement { a, b, d }
    }

    pub fn from_ints(a: i64, b: i64, d: i64) -> Self {
        Self::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
            d.into(),
        )
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.clone())
    }

    pub fn trace(&self) -> BigRational {
        &self.a * BigRational::from_integer(2.into())
    }

    pub fn mul(&self, other: &RealQuadElement) -> RealQuadElement {
        assert_eq!(self.d, other.d, "elements of different fields");
        let d = BigRational::from_integer(self.d.clone());
        RealQuadElement {
            a: &self.a * &other.a + &self.b * &other.b * d,
            b: &self.a * &other.b + &self.b * &other.a,
            d: self.d.clone(),
        }
    }

    pub fn conjugate(&self) -> RealQuadElement {
        RealQuadElement {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// Value under the embedding with positive `sqrt(d)`.
    pub fn to_f64(&self) -> f64 {
        crate::arith::rat_to_f64(&self.a) + crate::arith::rat_to_f64(&self.b) * to_f64(&self.d).sqrt()
    }
}

impl fmt::Display for RealQuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
    }
}

/// Fundamental unit `> 1` of the real quadratic order of discriminant `disc`, with its norm.
///
/// Expands `(sigma + sqrt D)/2` as a continued fraction; the first return of the
/// complete-quotient denominator to 2 closes the period and the preceding
/// convergent `p/q` gives the unit `((2p - sigma q) + q sqrt D)/2`.
pub fn fundamental_unit(disc: &BigInt) -> Result<(RealQuadElement, i32)> {
    if !disc.is_positive() {
        return domain(format!("{disc} is not positive"));
    }
    let qd = QuadDiscriminant::new(disc)?;
    let sigma = disc.mod_floor(&BigInt::from(2));
    let s = isqrt(disc);
    let two = BigInt::from(2);
    let (mut p_big, mut q_big) = (sigma.clone(), two.clone());
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    loop {
        if !q_big.is_positive() {
            return Err(Error::Internal(format!(
                "continued fraction of disc {disc} left the reduced range"
            )));
        }
        let a = (&p_big + &s).div_floor(&q_big);
        let p_next = &a * &p_cur + &p_prev;
        let q_next = &a * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        let new_p = &a * &q_big - &p_big;
        let new_q = (disc - &new_p * &new_p) / &q_big;
        p_big = new_p;
        q_big = new_q;
        if q_big == two {
            break;
        }
    }
    let x = &two * &p_cur - &sigma * &q_cur;
    let y = q_cur;
    // sqrt(disc) = s0 sqrt(d) with d squarefree
    let (s0, d) = square_split(disc)?;
    let unit = RealQuadElement::new(BigRational::new(x, two.clone()), BigRational::new(y * s0, two), d);
    let norm = unit.norm();
    let sign = if norm == BigRational::one() {
        1
    } else if norm == -BigRational::one() {
        -1
    } else {
        return Err(Error::Internal(format!(
            "unit candidate {unit} for {disc} has norm {norm}"
        )));
    };
    debug_assert!(qd.delta == *disc);
    Ok((unit, sign))
}

fn is_reduced_indefinite(a: i64, b: i64, d: i64) -> bool {
    let a2 = 2 * a.abs();
    b > 0 && b * b < d && d < (a2 + b) * (a2 + b) && (a2 - b <= 0 || (a2 - b) * (a2 - b) < d)
}

/// `(h, h+)` of the real quadratic order of discriminant `disc`.
///
/// `h+` is the number of cycles of primitive reduced indefinite forms (proper
/// equivalence classes); `h = h+` when the fundamental unit has norm `-1`, else `h+/2`.
pub fn class_numbers_real(disc: &BigInt) -> Result<(BigInt, BigInt)> {
    let (_, norm) = fundamental_unit(disc)?;
    let d = small(disc)?;
    let s = (d as f64).sqrt() as i64;
    let s = (s - 2..=s + 2).filter(|x| x * x <= d).max().unwrap();
    let mut reduced = Vec::new();
    let mut b = if d % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = (d - b * b) / 4;
        for a in 1..=n {
            if a * a > n {
                break;
            }
            if n % a != 0 {
                continue;
            }
            for (x, y) in [(a, n / a), (n / a, a)] {
                for sign in [1, -1] {
                    let (fa, fc) = (sign * x, -sign * y);
                    if is_reduced_indefinite(fa, b, d) && gcd3(fa, b, fc).abs() == 1 {
                        reduced.push((fa, b, fc));
                    }
                }
            }
        }
        b += 2;
    }
    reduced.sort();
    reduced.dedup();
    let mut seen: HashSet<(i64, i64)> = HashSet::new();
    let mut cycles = 0i64;
    for &(a0, b0, c0) in &reduced {
        if seen.contains(&(a0, b0)) {
            continue;
        }
        cycles += 1;
        let (mut a, mut b, mut c) = (a0, b0, c0);
        for step in 0.. {
            if step > reduced.len() {
                return Err(Error::Internal(format!(
                    "reduction cycle from ({a0}, {b0}, {c0}) did not close"
                )));
            }
            seen.insert((a, b));
            // rho(a, b, c) = (c, b', (b'^2 - D)/(4c)) with b' = -b mod 2|c| in (sqrt D - 2|c|, sqrt D)
            let m = 2 * c.abs();
            let nb = s - (s + b).rem_euclid(m);
            let nc = (nb * nb - d) / (4 * c);
            (a, b, c) = (c, nb, nc);
            if (a, b) == (a0, b0) {
                break;
            }
            if !is_reduced_indefinite(a, b, d) {
                return Err(Error::Internal(format!(
                    "reduction left the reduced set at ({a}, {b}, {c})"
                )));
            }
        }
    }
    let hplus = BigInt::from(cycles);
    let h = if norm == -1 { hplus.clone() } else { &hplus / 2 };
    Ok((h, hplus))
}

/// Class data of a quadratic order.
#[derive(Clone, Debug, Serialize)]
pub struct QuadClassData {
    pub disc: QuadDiscriminant,
    #[serde(serialize_with = "serde_util::int_str")]
    pub h: BigInt,
    #[serde(serialize_with = "serde_util::opt_int_str")]
    pub hplus: Option<BigInt>,
    #[serde(rename = "H", serialize_with = "serde_util::opt_int_str")]
    pub kronecker_h: Option<BigInt>,
    pub fundamental_unit: Option<RealQuadElement>,
    pub unit_norm: Option<i32>,
}

impl QuadClassData {
    pub fn compute(delta: &BigInt) -> Result<Self> {
        let disc = QuadDiscriminant::new(delta)?;
        if delta.is_negative() {
            Ok(QuadClassData {
                h: class_number_imaginary(delta)?,
                kronecker_h: Some(kronecker_class_number(delta)?),
                disc,
                hplus: None,
                fundamental_unit: None,
                unit_norm: None,
            })
        } else {
            let (unit, norm) = fundamental_unit(delta)?;
            let (h, hplus) = class_numbers_real(delta)?;
            Ok(QuadClassData {
                disc,
                h,
                hplus: Some(hplus),
                kronecker_h: None,
                fundamental_unit: Some(unit),
                unit_norm: Some(norm),
            })
        }
    }
}

/// Splitting behaviour of a prime ideal of a real quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    /// `(l, w - r)` with `r` the smaller root of the minimal polynomial of `w` mod `l`.
    #[serde(rename = "split+")]
    SplitPlus,
    /// `(l, w - r)` with `r` the larger root.
    #[serde(rename = "split-")]
    SplitMinus,
    Inert,
    Ramified,
}

/// Prime ideal of the maximal order above the rational prime `ell`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimeIdeal {
    #[serde(serialize_with = "serde_util::int_str")]
    pub ell: BigInt,
    pub kind: Splitting,
}

impl PrimeIdeal {
    pub fn residue_degree(&self) -> u32 {
        if self.kind == Splitting::Inert {
            2
        } else {
            1
        }
    }
}

/// Square root of `n` modulo an odd prime `p` (Tonelli-Shanks); `n` must be a residue.
fn sqrt_mod(n: &BigInt, p: &BigInt) -> BigInt {
    let n = n.mod_floor(p);
    if n.is_zero() {
        return n;
    }
    let one = BigInt::one();
    let pm1: BigInt = p - 1;
    let mut q = pm1.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    let mut z = BigInt::from(2);
    while kronecker_symbol(&z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = n.modpow(&q, p);
    let mut r = n.modpow(&((&q + 1) >> 1), p);
    while t != one {
        let mut i = 0;
        let mut tt = t.clone();
        while tt != one {
            tt = &tt * &tt % p;
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1) as usize), p);
        m = i;
        c = &b * &b % p;
        t = t * &c % p;
        r = r * b % p;
    }
    r
}

/// Factorization of the principal ideal `(x)` in the maximal order of `Q(sqrt d)`.
///
/// Valuations above split primes are separated by removing the rational content
/// `l^k` and testing `x / l^k` against each prime `(l, w - r)`.
pub fn factor_element_ideal(d: &BigInt, x: &RealQuadElement) -> Result<Vec<(PrimeIdeal, u32)>> {
    if x.d != *d {
        return domain(format!("element {x} does not lie in Q(sqrt {d})"));
    }
    let (s, r) = square_split(d)?;
    if !s.is_one() || d <= &BigInt::one() {
        return domain(format!("{d} is not a squarefree integer greater than 1"));
    }
    let _ = r;
    if x.a.is_zero() && x.b.is_zero() {
        return domain("factorization of zero");
    }
    let one_mod_4 = d.mod_floor(&BigInt::from(4)).is_one();
    // x = u + v w, w = (1 + sqrt d)/2 or sqrt d
    let (u, v) = if one_mod_4 {
        (&x.a - &x.b, &x.b * BigRational::from_integer(2.into()))
    } else {
        (x.a.clone(), x.b.clone())
    };
    if !u.is_integer() || !v.is_integer() {
        return domain(format!("{x} is not integral"));
    }
    let (u, v) = (u.to_integer(), v.to_integer());
    let field_disc = if one_mod_4 { d.clone() } else { d * 4 };
    // minimal polynomial of w: X^2 + B X + C
    let (mb, mc) = if one_mod_4 {
        (BigInt::from(-1), -(d - BigInt::one()) / 4)
    } else {
        (BigInt::zero(), -d.clone())
    };
    let norm = x.norm().to_integer().abs();
    let mut out = Vec::new();
    if norm.is_one() {
        return Ok(out);
    }
    for (ell, e) in factorize(&norm)? {
        match kronecker_symbol(&field_disc, &ell) {
            0 => out.push((
                PrimeIdeal {
                    ell,
                    kind: Splitting::Ramified,
                },
                e,
            )),
            -1 => out.push((
                PrimeIdeal {
                    ell,
                    kind: Splitting::Inert,
                },
                e / 2,
            )),
            _ => {
                let k = valuation_or_max(&u, &ell).min(valuation_or_max(&v, &ell));
                let lk = ell.pow(k);
                let (u1, v1) = (&u / &lk, &v / &lk);
                let roots = if ell == BigInt::from(2) {
                    vec![BigInt::zero(), BigInt::one()]
                } else {
                    let disc = (&mb * &mb - BigInt::from(4) * &mc).mod_floor(&ell);
                    let sq = sqrt_mod(&disc, &ell);
                    let inv2: BigInt = (&ell + 1u32) / 2u32;
                    let mut rs: Vec<BigInt> = [sq.clone(), -sq]
                        .into_iter()
                        .map(|t: BigInt| ((t - &mb) * &inv2).mod_floor(&ell))
                        .collect();
                    rs.sort();
                    rs
                };
                let rest = e - 2 * k;
                for (root, kind) in roots.iter().zip([Splitting::SplitPlus, Splitting::SplitMinus]) {
                    let hit = (&u1 + &v1 * root).mod_floor(&ell).is_zero();
                    let val = k + if hit { rest } else { 0 };
                    if val > 0 {
                        out.push((PrimeIdeal { ell: ell.clone(), kind }, val));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn valuation_or_max(n: &BigInt, p: &BigInt) -> u32 {
    if n.is_zero() {
        u32::MAX
    } else {
        valuation(n, p)
    }
}
