//! Exact arithmetic on integer polynomials. Coefficients are stored in
//! ascending degree order throughout the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::factorize;

/// Discriminant of a polynomial with integer coefficients, computed as
/// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)` with an exact Bareiss determinant of
/// the Sylvester matrix.
pub fn discriminant(coeffs: &[i64]) -> BigInt {
    let f: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    let n = f.len() - 1;
    if n == 0 {
        return BigInt::zero();
    }
    if n == 1 {
        return BigInt::one();
    }
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let res = resultant(&f, &df);
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    res * BigInt::from(sign) / &f[n]
}

fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    // rows hold descending coefficients shifted right
    for row in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            mat[n + row][row + j] = c.clone();
        }
    }
    bareiss_determinant(mat)
}

fn bareiss_determinant(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let size = mat.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[size - 1][size - 1]
}

/// Number of distinct real roots, by Sturm's theorem.
pub fn count_real_roots(coeffs: &[i64]) -> usize {
    let to_q = |c: &i64| BigRational::from_integer(BigInt::from(*c));
    let f: Vec<BigRational> = coeffs.iter().map(to_q).collect();
    let f = trim(f);
    if f.len() <= 1 {
        return 0;
    }
    let df: Vec<BigRational> = trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    );
    let mut chain = vec![f, df];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        if chain[n - 1].len() == 1 {
            break;
        }
        let r = rational_rem(&chain[n - 2], &chain[n - 1]);
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    let changes = |signs: Vec<i8>| -> usize {
        let nz: Vec<i8> = signs.into_iter().filter(|&s| s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let sign_of = |c: &BigRational| -> i8 {
        if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        }
    };
    let at_pos_inf: Vec<i8> = chain.iter().map(|p| sign_of(p.last().unwrap())).collect();
    let at_neg_inf: Vec<i8> = chain
        .iter()
        .map(|p| {
            let s = sign_of(p.last().unwrap());
            if (p.len() - 1) % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect();
    changes(at_neg_inf) - changes(at_pos_inf)
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rational_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    while rem.len() > db && !rem.is_empty() {
        let shift = rem.len() - 1 - db;
        let c = rem.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        rem.pop();
        rem = trim(rem);
    }
    rem
}

/// Whether a monic integer polynomial has an integer root. Any rational
/// root of a monic integer polynomial is an integer dividing the constant
/// term.
pub fn has_integer_root(coeffs: &[i64]) -> bool {
    let c0 = coeffs[0];
    if c0 == 0 {
        return true;
    }
    let eval = |x: i64| -> BigInt {
        coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &c| acc * x + c)
    };
    divisors(c0.unsigned_abs())
        .into_iter()
        .any(|d| eval(d as i64).is_zero() || eval(-(d as i64)).is_zero())
}

fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let current = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(current.iter().map(|d| d * pk));
        }
    }
    divs
}

/// The m-th cyclotomic polynomial, via exact division of `x^m - 1` by the
/// cyclotomic polynomials of the proper divisors of m.
pub fn cyclotomic(m: u64) -> Vec<i64> {
    let mut poly: Vec<i64> = vec![0; m as usize + 1];
    poly[0] = -1;
    poly[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            poly = exact_div_monic(&poly, &cyclotomic(d));
        }
    }
    poly
}

fn exact_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![0i64; a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db];
        quot[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            rem[i + j] -= c * bj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Whether `n` is a perfect square (n >= 0).
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// `a / b` if b divides a exactly.
pub fn exact_quotient(a: &BigInt, b: &BigInt) -> Option<BigInt> {
    if b.is_zero() {
        return None;
    }
    let (q, r) = a.div_rem(b);
    r.is_zero().then_some(q)
}
