//! Integer factorization for the sizes this crate meets (at most ~2^96).

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_prime::nt_funcs;
use num_prime::{FactorizationConfig, Primality};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Largest input accepted by [`factorize`].
pub const FACTOR_LIMIT_BITS: u64 = 96;

/// Prime factorization of `n > 0`, as ascending `(prime, exponent)` pairs.
///
/// Inputs below 2^64 are factored with certified primes; larger inputs
/// fall back to probable-prime tests on the cofactors.
pub fn factorize(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    if n.sign() != Sign::Plus {
        return domain(format!("factorize expects a positive integer, got {n}"));
    }
    if n.bits() > FACTOR_LIMIT_BITS {
        return domain(format!("{n} exceeds the {FACTOR_LIMIT_BITS}-bit factoring range"));
    }
    if let Some(small) = n.to_u64() {
        return Ok(factorize_u64(small)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect());
    }
    let big = n.to_biguint().unwrap();
    let (found, rest) = nt_funcs::factors(big, Some(FactorizationConfig::strict()));
    let partial: Vec<(BigInt, u32)> = found.into_iter().map(|(p, e)| (BigInt::from(p), e as u32)).collect();
    match rest {
        None => Ok(partial),
        Some(rem) => Err(Error::Factor {
            partial,
            remaining: rem.into_iter().map(BigInt::from).collect(),
        }),
    }
}

pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    if n <= 1 {
        return Vec::new();
    }
    let map: BTreeMap<u64, usize> = nt_funcs::factorize64(n);
    map.into_iter().map(|(p, e)| (p, e as u32)).collect()
}

pub fn is_prime_u64(n: u64) -> bool {
    nt_funcs::is_prime64(n)
}

pub fn is_prime(n: &BigInt) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None if n.sign() == Sign::Plus => {
            let u: BigUint = n.to_biguint().unwrap();
            !matches!(nt_funcs::is_prime(&u, None), Primality::No)
        }
        None => false,
    }
}

/// `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: &BigInt) -> Option<(BigInt, u32)> {
    if q <= &BigInt::one() {
        return None;
    }
    match factorize(q).ok()?.as_slice() {
        [(p, k)] => Some((p.clone(), *k)),
        _ => None,
    }
}

/// Euler's totient from a factorization.
pub fn totient(n: &BigInt) -> Result<BigInt> {
    if n.is_zero() {
        return domain("totient of zero");
    }
    let mut phi = BigInt::one();
    for (p, e) in factorize(n)? {
        phi *= (&p - 1u32) * p.pow(e - 1);
    }
    Ok(phi)
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut divs = vec![BigInt::one()];
    for (p, e) in factorize(n)? {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

/// Write `n = s^2 * r` with `r` squarefree; returns `(s, r)` (sign kept on `r`).
pub fn square_split(n: &BigInt) -> Result<(BigInt, BigInt)> {
    if n.is_zero() {
        return domain("square split of zero");
    }
    let mut s = BigInt::one();
    let mut r = if n.sign() == Sign::Minus {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let abs = if n.sign() == Sign::Minus { -n } else { n.clone() };
    for (p, e) in factorize(&abs)? {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            r *= &p;
        }
    }
    Ok((s, r))
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    use num_integer::Integer;
    assert!(!n.is_zero());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}
