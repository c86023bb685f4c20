//! Small integer helpers shared by the other modules.

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Splits `q` as `p^e` with `p` prime and `e >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Exponent of the largest power of `p` dividing `n` (`n >= 1`).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// `Some(r)` when `n = p^r`.
pub fn log_exact(n: u64, p: u64) -> Option<u32> {
    let e = valuation(n, p);
    (p.checked_pow(e) == Some(n)).then_some(e)
}

/// Legendre's count of the power of `p` in `n!`.
pub fn legendre(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut power = p;
    while power <= n {
        total += n / power;
        match power.checked_mul(p) {
            Some(next) => power = next,
            None => break,
        }
    }
    total
}

pub fn pow(base: u64, exp: u32) -> u64 {
    base.pow(exp)
}
