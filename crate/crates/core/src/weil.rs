//! Weil polynomials: validation, real Weil polynomials, simplicity and Frobenius angles.
//!
//! Ordinarity is decided by the middle coefficient being coprime to `q`. This is
//! the standard test for `n <= 2`; for larger `n` it is only the operative
//! definition used here, not a theorem about general dimension.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::arith::factor::{divisors, prime_power};
use crate::arith::sturm::{isolate_roots, sign_at, RealPoint, SturmSequence};
use crate::arith::{is_square, isqrt, rat_to_f64, IntPoly};
use crate::error::{Error, Result};
use crate::serde_util;

/// Bits of absolute precision used when refining roots of `g`.
const ROOT_BITS: usize = 110;

/// The real Weil polynomial `g` with `f(x) = x^n g(x + q/x)`.
pub fn real_weil_polynomial(f: &IntPoly, q: &BigInt) -> Result<IntPoly> {
    let deg = f
        .degree()
        .ok_or_else(|| Error::NotWeilShape("zero polynomial".into()))?;
    if deg % 2 == 1 || !f.is_monic() {
        return Err(Error::NotWeilShape(format!("{f} must be monic of even degree")));
    }
    let n = deg / 2;
    let x2q = IntPoly::new(vec![q.clone(), BigInt::zero(), BigInt::one()]);
    let mut h = f.clone();
    let mut g = vec![BigInt::zero(); n + 1];
    for k in (0..=n).rev() {
        let gk = h.coeff(n + k);
        if gk.is_zero() {
            continue;
        }
        let mut shifted = vec![BigInt::zero(); n - k];
        shifted.push(gk.clone());
        let term = &IntPoly::new(shifted) * &x2q.pow(k as u32);
        h = &h - &term;
        g[k] = gk;
    }
    if !h.is_zero() {
        return Err(Error::NotWeilShape(format!(
            "{f} does not satisfy x^{deg} f(q/x) = q^{n} f(x) for q = {q}"
        )));
    }
    Ok(IntPoly::new(g))
}

/// `x^(2n) f(q/x) == q^n f(x)`, checked coefficient-wise.
pub fn satisfies_functional_equation(f: &IntPoly, q: &BigInt) -> bool {
    let Some(deg) = f.degree() else { return false };
    if deg % 2 == 1 {
        return false;
    }
    let n = deg / 2;
    // coefficient of x^k on the left is c_{2n-k} q^{2n-k}
    (0..=deg).all(|k| f.coeff(deg - k) * q.pow((deg - k) as u32) == q.pow(n as u32) * f.coeff(k))
}

fn surd_bounds(q: &BigInt) -> (RealPoint, RealPoint) {
    let two = BigRational::from_integer(2.into());
    (
        RealPoint::sqrt_multiple(-two.clone(), q.clone()),
        RealPoint::sqrt_multiple(two, q.clone()),
    )
}

/// True iff every complex root of `f` has absolute value `sqrt(q)`.
///
/// Equivalent to all roots of `g` being real and inside `[-2 sqrt q, 2 sqrt q]`;
/// the Sturm sequence is evaluated exactly at the surd endpoints.
pub fn is_weil(f: &IntPoly, q: &BigInt) -> bool {
    if !q.is_positive() {
        return false;
    }
    let Ok(g) = real_weil_polynomial(f, q) else {
        return false;
    };
    roots_in_weil_interval(&g, q)
}

fn roots_in_weil_interval(g: &IntPoly, q: &BigInt) -> bool {
    let Ok(sf) = g.squarefree_part() else {
        return false;
    };
    let Some(d) = sf.degree() else { return false };
    if d == 0 {
        return true;
    }
    let seq = SturmSequence::new(&sf).expect("squarefree part is squarefree");
    let (lo, hi) = surd_bounds(q);
    let at_lo = usize::from(sign_at(&sf, &lo) == Ordering::Equal);
    seq.count(&lo, &hi) + at_lo == d
}

/// Middle coefficient of `f` coprime to `q`.
pub fn is_ordinary(f: &IntPoly, q: &BigInt) -> bool {
    let Some(deg) = f.degree() else { return false };
    f.coeff(deg / 2).gcd(q).is_one()
}

fn has_integer_root(f: &IntPoly) -> Result<bool> {
    let c0 = f.coeff(0);
    if c0.is_zero() {
        return Ok(true);
    }
    for d in divisors(&c0.abs())? {
        if f.eval(&d).is_zero() || f.eval(&-d).is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Monic quartic splits as a product of two monic integer quadratics.
fn has_quadratic_factor(f: &IntPoly) -> Result<bool> {
    let [c0, c1, c2, c3] = [0, 1, 2, 3].map(|i| f.coeff(i));
    if c0.is_zero() {
        return Ok(true);
    }
    let pos = divisors(&c0.abs())?;
    let all = pos.iter().flat_map(|d| [d.clone(), -d]);
    for v in all {
        let w = &c0 / &v;
        if v != w {
            let num = &c1 - &c3 * &v;
            let den = &w - &v;
            if !num.is_multiple_of(&den) {
                continue;
            }
            let u = num / den;
            if &v + &w + &u * (&c3 - &u) == c2 {
                return Ok(true);
            }
        } else {
            if c1 != &c3 * &v {
                continue;
            }
            // u^2 - c3 u + (c2 - 2v) = 0
            let disc = &c3 * &c3 - BigInt::from(4) * (&c2 - BigInt::from(2) * &v);
            if is_square(&disc) && (&c3 + isqrt(&disc)).is_even() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Irreducibility over Q of a monic integer polynomial of degree at most 4.
pub fn is_simple(f: &IntPoly) -> Result<bool> {
    let deg = f.degree().ok_or_else(|| Error::Domain("zero polynomial".into()))?;
    if deg > 4 {
        return Err(Error::UnsupportedDegree(deg));
    }
    if !f.is_monic() {
        return Err(Error::Domain(format!("{f} is not monic")));
    }
    Ok(match deg {
        0 => false,
        1 => true,
        2 => {
            let disc = f.coeff(1).pow(2) - BigInt::from(4) * f.coeff(0);
            !is_square(&disc)
        }
        3 => !has_integer_root(f)?,
        _ => !has_integer_root(f)? && !has_quadratic_factor(f)?,
    })
}

/// Real roots of `g` with multiplicity, ascending, each to within `2^-ROOT_BITS`.
fn real_roots(g: &IntPoly, q: &BigInt) -> Result<Vec<BigRational>> {
    let bound = isqrt(&(BigInt::from(4) * q)) + 2;
    let mut roots = Vec::new();
    let mut rest = g.clone();
    while rest.degree().unwrap_or(0) > 0 {
        let sf = rest.squarefree_part()?;
        roots.extend(isolate_roots(&sf, &bound, ROOT_BITS)?);
        let (quot, rem) = rest.to_rat().div_rem(&sf.to_rat());
        debug_assert!(rem.is_zero());
        rest = quot.primitive();
    }
    roots.sort();
    Ok(roots)
}

/// `theta = arccos(r / (2 sqrt q))`, computed as `atan2(sqrt(4q - r^2), r)`.
fn angle_of_root(r: &BigRational, q: &BigInt) -> f64 {
    let s2 = BigRational::from_integer(BigInt::from(4) * q) - r * r;
    let s = if s2.is_positive() { rat_to_f64(&s2).sqrt() } else { 0.0 };
    s.atan2(rat_to_f64(r))
}

/// A validated isogeny class: Weil polynomial `f`, `q`, `n`, real Weil polynomial `g`
/// and Frobenius angles ascending in `[0, pi]`.
#[derive(Clone, Debug, Serialize)]
pub struct IsogenyClassSpec {
    #[serde(serialize_with = "serde_util::poly_strs")]
    f: IntPoly,
    #[serde(serialize_with = "serde_util::int_str")]
    q: BigInt,
    n: usize,
    #[serde(serialize_with = "serde_util::poly_strs")]
    g: IntPoly,
    #[serde(serialize_with = "serde_util::vec_f64_17")]
    angles: Vec<f64>,
    #[serde(skip)]
    roots: Vec<BigRational>,
}

impl IsogenyClassSpec {
    /// Validate `f` as a Weil polynomial over `F_q` (shape, prime-power `q`, root sizes).
    pub fn new(f: IntPoly, q: BigInt) -> Result<Self> {
        if prime_power(&q).is_none() {
            return Err(Error::Domain(format!("q = {q} is not a prime power")));
        }
        let g = real_weil_polynomial(&f, &q)?;
        if !roots_in_weil_interval(&g, &q) {
            return Err(Error::InvalidWeil(format!(
                "{f} has roots off the circle |x| = sqrt({q})"
            )));
        }
        let roots = real_roots(&g, &q)?;
        let mut angles: Vec<f64> = roots.iter().map(|r| angle_of_root(r, &q)).collect();
        angles.sort_by(f64::total_cmp);
        let n = g.degree().unwrap_or(0);
        Ok(IsogenyClassSpec {
            f,
            q,
            n,
            g,
            angles,
            roots,
        })
    }

    pub fn from_i64(coeffs: &[i64], q: i64) -> Result<Self> {
        Self::new(IntPoly::from_i64(coeffs), BigInt::from(q))
    }

    /// Like [`IsogenyClassSpec::new`], additionally requiring a simple ordinary class.
    pub fn simple_ordinary(f: IntPoly, q: BigInt) -> Result<Self> {
        let spec = Self::new(f, q)?;
        if !spec.is_simple()? {
            return Err(Error::InvalidWeil(format!("{} is reducible over Q", spec.f)));
        }
        if !spec.is_ordinary() {
            return Err(Error::InvalidWeil(format!(
                "{} is not ordinary: middle coefficient shares a factor with q",
                spec.f
            )));
        }
        Ok(spec)
    }

    pub fn f(&self) -> &IntPoly {
        &self.f
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> &IntPoly {
        &self.g
    }

    /// Frobenius angles, ascending.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Roots of `g` (the values `2 sqrt(q) cos theta`), ascending, to about 2^-110.
    pub fn real_roots(&self) -> &[BigRational] {
        &self.roots
    }

    pub fn is_ordinary(&self) -> bool {
        is_ordinary(&self.f, &self.q)
    }

    pub fn is_simple(&self) -> Result<bool> {
        is_simple(&self.f)
    }

    pub fn q_f64(&self) -> f64 {
        self.q.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Frobenius angles of a validated class.
pub fn frobenius_angles(spec: &IsogenyClassSpec) -> Vec<f64> {
    spec.angles.clone()
}

/// `x^4 + a x^3 + b x^2 + a q x + q^2`.
pub fn quartic_from_ab(a: &BigInt, b: &BigInt, q: &BigInt) -> IntPoly {
    IntPoly::new(vec![q * q, a * q, b.clone(), a.clone(), BigInt::one()])
}

/// Prime powers up to `max`, ascending.
pub fn prime_powers_up_to(max: u64) -> Vec<u64> {
    (2..=max)
        .filter(|&q| {
            let f = crate::arith::factor::factorize_u64(q);
            f.len() == 1
        })
        .collect()
}

/// Sample a simple ordinary `n = 2` class with `q <= q_max`.
///
/// `q` is drawn uniformly from the prime powers up to `q_max`; `(a, c = b - 2q)` is
/// drawn uniformly from the box `|a| < 4 sqrt q`, `|c| < 4q` and rejected unless
/// `x^2 + a x + c` has two distinct roots strictly inside `(-2 sqrt q, 2 sqrt q)`,
/// `gcd(b, q) = 1` and `f` is irreducible.
pub fn random_n2_spec<R: Rng + ?Sized>(rng: &mut R, prime_powers: &[u64]) -> IsogenyClassSpec {
    loop {
        let q = prime_powers[rng.gen_range(0..prime_powers.len())] as i64;
        let amax = (16.0 * q as f64).sqrt().ceil() as i64;
        let a = rng.gen_range(-amax..=amax);
        let c = rng.gen_range(-4 * q..=4 * q);
        let (ab, cb, qb) = (BigInt::from(a), BigInt::from(c), BigInt::from(q));
        let inside = &ab * &ab < BigInt::from(16) * &qb && BigInt::from(4) * &cb < &ab * &ab && {
            let s = &cb + BigInt::from(4) * &qb;
            s.is_positive() && &s * &s > BigInt::from(4) * &ab * &ab * &qb
        };
        if !inside {
            continue;
        }
        let b = c + 2 * q;
        if b.gcd(&q) != 1 {
            continue;
        }
        let f = quartic_from_ab(&ab, &BigInt::from(b), &qb);
        if !is_simple(&f).unwrap_or(false) {
            continue;
        }
        if let Ok(spec) = IsogenyClassSpec::simple_ordinary(f, qb) {
            return spec;
        }
    }
}
