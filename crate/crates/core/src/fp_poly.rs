//! Dense polynomials over the prime field F_p, just enough to recover the
//! degrees and multiplicities of the irreducible factors of a polynomial.

use crate::arith::{mul_mod, pow_mod};

/// Coefficients in ascending degree order, always normalized (no trailing
/// zeros; the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn from_integers(coeffs: &[i64], p: u64) -> Self {
        let coeffs = coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        Self::new(coeffs, p)
    }

    pub fn new(coeffs: Vec<u64>, p: u64) -> Self {
        let mut poly = Self { p, coeffs };
        poly.normalize();
        poly
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn one(p: u64) -> Self {
        Self::new(vec![1], p)
    }

    pub fn x(p: u64) -> Self {
        Self::new(vec![0, 1], p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0 alongside `is_zero`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    fn lead(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn monic(mut self) -> Self {
        if !self.is_zero() && self.lead() != 1 {
            let inv = self.inv(self.lead());
            for c in &mut self.coeffs {
                *c = mul_mod(*c, inv, self.p);
            }
        }
        self
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect();
        Self::new(coeffs, p)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        Self::new(coeffs, p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new(), self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Self::new(out, p)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let p = self.p;
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        if self.coeffs.len() < divisor.coeffs.len() {
            return (Self::new(Vec::new(), p), self.clone());
        }
        let inv_lead = self.inv(divisor.lead());
        let mut quot = vec![0u64; self.coeffs.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = mul_mod(rem[i + dd], inv_lead, p);
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = (rem[i + j] + p - mul_mod(c, d, p)) % p;
            }
        }
        rem.truncate(dd);
        (Self::new(quot, p), Self::new(rem, p))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Exact quotient; the remainder is discarded.
    pub fn quot(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).0
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^exp mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut exp: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = Self::one(self.p).rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// For a polynomial whose derivative vanishes, returns g with g^p = self.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        let coeffs = self.coeffs.iter().step_by(p).copied().collect();
        Self::new(coeffs, self.p)
    }

    /// Squarefree decomposition: monic squarefree, pairwise coprime parts
    /// with their multiplicities, whose product (with powers) is `self.monic()`.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        self.sqf_into(1, &mut out);
        out
    }

    fn sqf_into(&self, mult: u32, out: &mut Vec<(Self, u32)>) {
        let f = self.clone().monic();
        if f.degree() == 0 {
            return;
        }
        let df = f.derivative();
        if df.is_zero() {
            f.pth_root().sqf_into(mult * self.p as u32, out);
            return;
        }
        let mut c = f.gcd(&df);
        let mut w = f.quot(&c);
        let mut i = 1u32;
        while w.degree() > 0 {
            let y = w.gcd(&c);
            let z = w.quot(&y);
            if z.degree() > 0 {
                out.push((z, i * mult));
            }
            i += 1;
            w = y;
            c = c.quot(&w);
        }
        if c.degree() > 0 {
            c.pth_root().sqf_into(mult * self.p as u32, out);
        }
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// `(degree, number of irreducible factors of that degree)`.
    pub fn distinct_degree_counts(&self) -> Vec<(u32, u32)> {
        let p = self.p;
        let mut g = self.clone().monic();
        let mut out = Vec::new();
        let x = Self::x(p);
        let mut h = x.rem(&g);
        let mut k = 1usize;
        while 2 * k <= g.degree() {
            h = h.pow_mod(p, &g);
            let factor = g.gcd(&h.sub(&x));
            if factor.degree() > 0 {
                out.push((k as u32, (factor.degree() / k) as u32));
                g = g.quot(&factor);
                h = h.rem(&g);
            }
            k += 1;
        }
        if g.degree() > 0 {
            out.push((g.degree() as u32, 1));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x2_plus_1_factor_shapes() {
        let f = |p| FpPoly::from_integers(&[1, 0, 1], p);
        assert_eq!(f(3).distinct_degree_counts(), vec![(2, 1)]);
        assert_eq!(f(5).distinct_degree_counts(), vec![(1, 2)]);
        let sqf = f(2).squarefree_decomposition();
        assert_eq!(sqf.len(), 1);
        assert_eq!(sqf[0].1, 2);
        assert_eq!(sqf[0].0, FpPoly::from_integers(&[1, 1], 2));
    }

    #[test]
    fn pth_power_detected() {
        // (x + 1)^3 * (x^2 + 1) over F_3; x^3 + 1 = (x + 1)^3 has zero derivative.
        let p = 3;
        let a = FpPoly::from_integers(&[1, 0, 0, 1], p);
        let b = FpPoly::from_integers(&[1, 0, 1], p);
        let sqf = a.mul(&b).squarefree_decomposition();
        let mut mults: Vec<(usize, u32)> = sqf.iter().map(|(g, e)| (g.degree(), *e)).collect();
        mults.sort();
        assert_eq!(mults, vec![(1, 3), (2, 1)]);
    }

    #[test]
    fn div_rem_reconstructs() {
        let p = 101;
        let a = FpPoly::from_integers(&[3, -7, 11, 5, 0, 9], p);
        let b = FpPoly::from_integers(&[2, 0, 4], p);
        let (q, r) = a.div_rem(&b);
        assert!(r.degree() < b.degree() || r.is_zero());
        let back = q.mul(&b);
        let diff = a.sub(&back).sub(&r);
        assert!(diff.is_zero());
    }

    #[test]
    fn ddf_splits_product_of_known_factors() {
        // over F_7: (x - 1)(x - 2)(x^2 + 1)(x^3 + x + 1)? x^2+1 irreducible mod 7 (7 = 3 mod 4),
        // x^3 + 2 has no root mod 7 (cubes mod 7 are 0, 1, 6) so it is irreducible.
        let p = 7;
        let f = FpPoly::from_integers(&[-1, 1], p)
            .mul(&FpPoly::from_integers(&[-2, 1], p))
            .mul(&FpPoly::from_integers(&[1, 0, 1], p))
            .mul(&FpPoly::from_integers(&[2, 0, 0, 1], p));
        assert_eq!(f.distinct_degree_counts(), vec![(1, 2), (2, 1), (3, 1)]);
    }
}
