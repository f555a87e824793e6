//! Decomposition of rational primes in K: the inertia degrees and
//! ramification indices that determine the prime-ideal norms p^f.

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{FieldKind, FieldSpec};
use crate::fp_poly::FpPoly;

/// `count` prime ideals above p share inertia degree `f` and ramification `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeFactor {
    pub f: u32,
    pub e: u32,
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingType {
    pub p: u64,
    /// Sorted by (f, e).
    pub factors: Vec<PrimeFactor>,
    /// False when p divides the index of the defining polynomial, so the
    /// factorization mod p need not reflect the ideal factorization.
    pub verified: bool,
}

impl SplittingType {
    fn new(p: u64, mut factors: Vec<PrimeFactor>) -> Self {
        factors.sort();
        Self {
            p,
            factors,
            verified: true,
        }
    }

    /// Σ e·f·count, which equals the degree for verified splittings.
    pub fn degree_sum(&self) -> u32 {
        self.factors.iter().map(|t| t.e * t.f * t.count).sum()
    }

    pub fn is_ramified(&self) -> bool {
        self.factors.iter().any(|t| t.e > 1)
    }

    pub fn prime_ideal_count(&self) -> u32 {
        self.factors.iter().map(|t| t.count).sum()
    }

    pub fn require_verified(self) -> Result<Self> {
        if self.verified {
            Ok(self)
        } else {
            Err(Error::UnverifiedSplitting { p: self.p })
        }
    }
}

/// Kronecker symbol (Δ/p) at a prime: 0 ramified, +1 split, −1 inert.
pub fn kronecker_symbol(disc: i64, p: u64) -> i8 {
    arith::kronecker(disc, p)
}

/// Factor shape of a monic integer polynomial modulo p, read as a prime
/// decomposition by Dedekind's criterion.
pub fn dedekind_split(polynomial: &[i64], p: u64) -> SplittingType {
    let f = FpPoly::from_integers(polynomial, p);
    let mut factors: Vec<PrimeFactor> = Vec::new();
    for (part, e) in f.squarefree_decomposition() {
        for (deg, count) in part.distinct_degree_counts() {
            match factors.iter_mut().find(|t| t.f == deg && t.e == e) {
                Some(t) => t.count += count,
                None => factors.push(PrimeFactor { f: deg, e, count }),
            }
        }
    }
    SplittingType::new(p, factors)
}

fn quadratic_split(disc: i64, p: u64) -> SplittingType {
    let factor = match kronecker_symbol(disc, p) {
        1 => PrimeFactor { f: 1, e: 1, count: 2 },
        -1 => PrimeFactor { f: 2, e: 1, count: 1 },
        _ => PrimeFactor { f: 1, e: 2, count: 1 },
    };
    SplittingType::new(p, vec![factor])
}

/// Splitting of p in `field`. Quadratic fields use the Kronecker symbol;
/// everything else goes through [`dedekind_split`]. Primes dividing the
/// polynomial index come back with `verified = false`.
pub fn splitting_type(field: &FieldSpec, p: u64) -> SplittingType {
    match field.kind() {
        FieldKind::Rational => {
            SplittingType::new(p, vec![PrimeFactor { f: 1, e: 1, count: 1 }])
        }
        FieldKind::Quadratic { .. } => {
            let disc = field.discriminant_i64().expect("quadratic discriminant fits i64");
            quadratic_split(disc, p)
        }
        FieldKind::Cyclotomic { .. } | FieldKind::Monogenic => {
            let mut st = dedekind_split(field.polynomial(), p);
            st.verified = !field.is_index_prime(p);
            st
        }
    }
}
