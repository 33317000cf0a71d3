//! Small integer helpers shared by the other modules.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc: u128 = 1;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorisation by trial division, as (prime, exponent) pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_factors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, k) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Decompose `q` as `p^e` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = factorize(q);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

/// Multiplicative order of `a` modulo `r`, or `None` when `gcd(a, r) != 1`.
pub fn mult_order(a: u64, r: u64) -> Option<u64> {
    if r == 1 {
        return Some(1);
    }
    if gcd(a % r, r) != 1 {
        return None;
    }
    let mut x = a % r;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * a as u128) % r as u128) as u64;
        k += 1;
    }
    Some(k)
}

/// Largest divisor of `n` coprime to `p`.
pub fn coprime_part(mut n: u64, p: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n
}

/// Exponent of `p` in `n` (for `n > 0`).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// Least prime `s` dividing `p^e - 1` with `p` of order exactly `e` modulo `s`.
pub fn zsigmondy(p: u64, e: u32) -> Option<u64> {
    let n = checked_pow(p, e)? - 1;
    if n == 0 {
        return None;
    }
    let mut cofactor = n;
    let mut d = 2u64;
    while d.saturating_mul(d) <= cofactor {
        if cofactor % d == 0 {
            if mult_order(p, d) == Some(e as u64) {
                return Some(d);
            }
            while cofactor % d == 0 {
                cofactor /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if cofactor > 1 && mult_order(p, cofactor) == Some(e as u64) {
        return Some(cofactor);
    }
    None
}
