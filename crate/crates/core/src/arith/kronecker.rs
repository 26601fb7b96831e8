use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

/// Kronecker symbol `(a | n)`, extending the Jacobi symbol to every integer `n`.
pub fn kronecker_symbol(a: &BigInt, n: &BigInt) -> i32 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let two = BigInt::from(2);
    if a.is_even() && n.is_even() {
        return 0;
    }
    let mut a = a.clone();
    let mut n = n.clone();
    let mut result = 1;

    let mut v = 0u32;
    while n.is_even() {
        n /= &two;
        v += 1;
    }
    if v % 2 == 1 {
        // (a | 2) = 1 if a = +-1 mod 8, -1 if a = +-3 mod 8
        let r = a.mod_floor(&BigInt::from(8));
        if r == BigInt::from(3) || r == BigInt::from(5) {
            result = -result;
        }
    }
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    // n is now odd and positive: Jacobi symbol
    a = a.mod_floor(&n);
    while !a.is_zero() {
        while a.is_even() {
            a /= &two;
            let r = n.mod_floor(&BigInt::from(8));
            if r == BigInt::from(3) || r == BigInt::from(5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&BigInt::from(4)) == BigInt::from(3) && n.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// [`kronecker_symbol`] on machine integers.
pub fn kronecker_i64(a: i64, n: i64) -> i32 {
    kronecker_symbol(&BigInt::from(a), &BigInt::from(n))
}
