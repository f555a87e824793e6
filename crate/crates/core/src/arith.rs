//! Small integer arithmetic: modular products, factorization by trial
//! division, Euler's phi, multiplicative order and the Kronecker symbol.

use num_integer::Integer;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        (a * b) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Prime factorization of `n` as `(prime, exponent)` pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Multiplicative order of `a` modulo `m`; `None` when `gcd(a, m) != 1`.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if a.gcd(&m) != 1 {
        return None;
    }
    let mut order = euler_phi(m);
    for (q, _) in factorize(order) {
        while order.is_multiple_of(q) && pow_mod(a, order / q, m) == 1 {
            order /= q;
        }
    }
    Some(order)
}

/// Kronecker symbol `(a / n)` for `n >= 0`.
pub fn kronecker(a: i64, n: u64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let a_even = a % 2 == 0;
    if a_even && n.is_multiple_of(2) {
        return 0;
    }
    let twos = n.trailing_zeros();
    let mut n = n >> twos;
    let mut sign: i8 = 1;
    if twos % 2 == 1 {
        // (a/2) = +1 for a = ±1 mod 8, -1 for a = ±3 mod 8
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            sign = -sign;
        }
    }
    // Jacobi symbol (a / n) with n odd.
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}
