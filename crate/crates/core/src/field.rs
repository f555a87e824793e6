//! Number-field descriptions: degree, discriminant, signature and a monic
//! defining polynomial generating the ring of integers (or flagged when that
//! cannot be confirmed).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{euler_phi, factorize, is_squarefree};
use crate::error::{Error, Result};
use crate::fp_poly::FpPoly;
use crate::poly;
use crate::scalar::Real;

/// Number of small primes tried when certifying irreducibility modulo p.
const IRREDUCIBILITY_PRIMES: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Quadratic { d: i64 },
    Cyclotomic { m: u64 },
    Monogenic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub r1: u32,
    pub r2: u32,
}

/// Immutable description of a number field K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    label: String,
    kind: FieldKind,
    degree: u32,
    discriminant: BigInt,
    signature: Signature,
    /// Ascending coefficients; monic.
    polynomial: Vec<i64>,
    /// c with disc(f) = Δ_K · c²; c = 1 means Z[θ] is the maximal order.
    index_cofactor: BigInt,
    index_warning: bool,
}

impl FieldSpec {
    pub fn rational() -> Self {
        Self {
            label: "Q".into(),
            kind: FieldKind::Rational,
            degree: 1,
            discriminant: BigInt::one(),
            signature: Signature { r1: 1, r2: 0 },
            polynomial: vec![0, 1],
            index_cofactor: BigInt::one(),
            index_warning: false,
        }
    }

    /// Q(√d) for squarefree d ∉ {0, 1}.
    ///
    /// For d ≡ 1 (mod 4) the defining polynomial is x² − x + (1 − d)/4, whose
    /// root (1 + √d)/2 generates the full ring of integers.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::InvalidField(format!("d = {d} does not define a quadratic field")));
        }
        if !is_squarefree(d.unsigned_abs()) {
            return Err(Error::InvalidField(format!("d = {d} is not squarefree")));
        }
        let (disc, polynomial) = if d.rem_euclid(4) == 1 {
            (d, vec![(1 - d) / 4, -1, 1])
        } else {
            (4 * d, vec![-d, 0, 1])
        };
        let signature = if d > 0 {
            Signature { r1: 2, r2: 0 }
        } else {
            Signature { r1: 0, r2: 1 }
        };
        Ok(Self {
            label: quadratic_label(d),
            kind: FieldKind::Quadratic { d },
            degree: 2,
            discriminant: BigInt::from(disc),
            signature,
            polynomial,
            index_cofactor: BigInt::one(),
            index_warning: false,
        })
    }

    /// The quadratic field with fundamental discriminant `disc`.
    pub fn from_fundamental_discriminant(disc: i64) -> Result<Self> {
        if !is_fundamental_discriminant(disc) {
            return Err(Error::InvalidField(format!("{disc} is not a fundamental discriminant")));
        }
        let d = if disc.rem_euclid(4) == 1 { disc } else { disc / 4 };
        Self::quadratic(d)
    }

    /// Q(ζ_m) for m ≥ 3, m ≢ 2 (mod 4).
    pub fn cyclotomic(m: u64) -> Result<Self> {
        if m < 3 || m % 4 == 2 {
            return Err(Error::InvalidField(format!(
                "cyclotomic conductor must be >= 3 and not 2 mod 4, got {m}"
            )));
        }
        let phi = euler_phi(m);
        // |Δ| = m^φ / ∏_{p | m} p^{φ/(p-1)}
        let mut abs_disc = BigInt::from(m).pow(phi as u32);
        for (p, _) in factorize(m) {
            abs_disc /= BigInt::from(p).pow((phi / (p - 1)) as u32);
        }
        let r2 = (phi / 2) as u32;
        let discriminant = if r2.is_multiple_of(2) { abs_disc } else { -abs_disc };
        Ok(Self {
            label: format!("Q(zeta_{m})"),
            kind: FieldKind::Cyclotomic { m },
            degree: phi as u32,
            discriminant,
            signature: Signature { r1: 0, r2 },
            polynomial: poly::cyclotomic(m),
            index_cofactor: BigInt::one(),
            index_warning: false,
        })
    }

    /// A field given by a monic irreducible integer polynomial (ascending
    /// coefficients) together with its true discriminant Δ_K.
    ///
    /// disc(f) must equal Δ_K times a square. Irreducibility is checked
    /// exactly up to degree 3 and certified modulo small primes beyond;
    /// when neither the index nor irreducibility can be confirmed the field
    /// carries `index_warning`.
    pub fn monogenic(polynomial: Vec<i64>, discriminant: BigInt) -> Result<Self> {
        let degree = polynomial.len().saturating_sub(1);
        if degree == 0 {
            return Err(Error::InvalidField("polynomial must have positive degree".into()));
        }
        if polynomial[degree] != 1 {
            return Err(Error::InvalidField("polynomial must be monic".into()));
        }
        if discriminant.is_zero() {
            return Err(Error::InvalidField("discriminant must be nonzero".into()));
        }
        let rem4 = discriminant.mod_floor_i64(4);
        if rem4 != 0 && rem4 != 1 {
            return Err(Error::InvalidField(format!(
                "discriminant {discriminant} is not 0 or 1 mod 4"
            )));
        }

        let certified = match degree {
            1 => true,
            2 | 3 => {
                if poly::has_integer_root(&polynomial) {
                    return Err(Error::InvalidField("polynomial is reducible over Q".into()));
                }
                true
            }
            _ => irreducible_mod_small_prime(&polynomial),
        };

        let poly_disc = poly::discriminant(&polynomial);
        let cofactor_sq = poly::exact_quotient(&poly_disc, &discriminant).ok_or_else(|| {
            Error::InvalidField(format!(
                "field discriminant {discriminant} does not divide disc(f) = {poly_disc}"
            ))
        })?;
        if !poly::is_perfect_square(&cofactor_sq) {
            return Err(Error::InvalidField(format!(
                "disc(f) / Δ_K = {cofactor_sq} is not a square"
            )));
        }
        let index_cofactor = cofactor_sq.sqrt();

        let r1 = poly::count_real_roots(&polynomial) as u32;
        let r2 = (degree as u32 - r1) / 2;
        let expected_sign = if r2.is_multiple_of(2) { 1 } else { -1 };
        if discriminant.signum() != BigInt::from(expected_sign) {
            return Err(Error::InvalidField(format!(
                "sign of Δ_K = {discriminant} contradicts signature ({r1}, {r2})"
            )));
        }

        let index_warning = !certified || !index_cofactor.is_one();
        Ok(Self {
            label: format!("poly[{}]", format_poly(&polynomial)),
            kind: FieldKind::Monogenic,
            degree: degree as u32,
            discriminant,
            signature: Signature { r1, r2 },
            polynomial,
            index_cofactor,
            index_warning,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Parses the short labels used on the command line: `Q`, `Q(i)`,
    /// `Q(sqrt(d))` and `Q(zeta_m)`.
    pub fn from_label(label: &str) -> Result<Self> {
        let compact: String = label.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidInput(format!("unrecognized field label `{label}`"));
        if compact == "Q" {
            return Ok(Self::rational());
        }
        if compact == "Q(i)" {
            return Self::quadratic(-1);
        }
        if let Some(rest) = compact.strip_prefix("Q(sqrt(").and_then(|s| s.strip_suffix("))")) {
            return Self::quadratic(rest.parse().map_err(|_| bad())?);
        }
        if let Some(rest) = compact.strip_prefix("Q(zeta_").and_then(|s| s.strip_suffix(')')) {
            return Self::cyclotomic(rest.parse().map_err(|_| bad())?);
        }
        Err(bad())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    /// Δ_K as a machine integer when it fits.
    pub fn discriminant_i64(&self) -> Option<i64> {
        self.discriminant.to_i64()
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn polynomial(&self) -> &[i64] {
        &self.polynomial
    }

    pub fn index_cofactor(&self) -> &BigInt {
        &self.index_cofactor
    }

    pub fn index_warning(&self) -> bool {
        self.index_warning
    }

    /// Whether Dedekind's criterion may fail at p (p divides the index).
    pub fn is_index_prime(&self, p: u64) -> bool {
        !self.index_cofactor.is_one() && (&self.index_cofactor % p).is_zero()
    }

    pub fn log_abs_disc<T: Real>(&self) -> T {
        T::lit(ln_bigint(&self.discriminant.abs()))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (n = {}, Δ = {}, (r1, r2) = ({}, {}))",
            self.label, self.degree, self.discriminant, self.signature.r1, self.signature.r2
        )
    }
}

fn quadratic_label(d: i64) -> String {
    if d == -1 {
        "Q(i)".into()
    } else {
        format!("Q(sqrt({d}))")
    }
}

fn format_poly(coeffs: &[i64]) -> String {
    coeffs
        .iter()
        .rev()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        n.to_f64().unwrap().ln()
    } else {
        let shift = bits - 64;
        let top: BigInt = n >> shift;
        top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

trait ModFloor {
    fn mod_floor_i64(&self, m: i64) -> i64;
}

impl ModFloor for BigInt {
    fn mod_floor_i64(&self, m: i64) -> i64 {
        use num_integer::Integer;
        self.mod_floor(&BigInt::from(m)).to_i64().unwrap()
    }
}

/// Fundamental discriminant: squarefree and ≡ 1 (mod 4), or 4d with d
/// squarefree and d ≡ 2, 3 (mod 4). 1 is excluded.
pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc == 0 || disc == 1 {
        return false;
    }
    match disc.rem_euclid(4) {
        1 => is_squarefree(disc.unsigned_abs()),
        0 => {
            let d = disc / 4;
            matches!(d.rem_euclid(4), 2 | 3) && is_squarefree(d.unsigned_abs())
        }
        _ => false,
    }
}

fn irreducible_mod_small_prime(polynomial: &[i64]) -> bool {
    let degree = polynomial.len() - 1;
    (2u64..)
        .filter(|&n| crate::arith::is_prime(n))
        .take(IRREDUCIBILITY_PRIMES)
        .any(|p| {
            let f = FpPoly::from_integers(polynomial, p);
            let sqf = f.squarefree_decomposition();
            sqf.len() == 1
                && sqf[0].1 == 1
                && sqf[0].0.distinct_degree_counts() == vec![(degree as u32, 1)]
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quadratic_examples() {
        let k = FieldSpec::quadratic(-1).unwrap();
        assert_eq!(k.discriminant(), &BigInt::from(-4));
        assert_eq!(k.signature(), Signature { r1: 0, r2: 1 });
        assert_eq!(k.degree(), 2);
        assert_eq!(k.label(), "Q(i)");

        let k = FieldSpec::quadratic(5).unwrap();
        assert_eq!(k.discriminant(), &BigInt::from(5));
        assert_eq!(k.signature(), Signature { r1: 2, r2: 0 });

        let k = FieldSpec::quadratic(-23).unwrap();
        assert_eq!(k.discriminant(), &BigInt::from(-23));
        assert_eq!(k.signature(), Signature { r1: 0, r2: 1 });
    }

    #[test]
    fn quadratic_rejects_bad_d() {
        assert!(FieldSpec::quadratic(12).is_err());
        assert!(FieldSpec::quadratic(0).is_err());
        assert!(FieldSpec::quadratic(1).is_err());
        assert!(FieldSpec::quadratic(-4).is_err());
    }

    #[test]
    fn cyclotomic_examples() {
        let k = FieldSpec::cyclotomic(4).unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(k.discriminant(), &BigInt::from(-4));
        assert_eq!(k.polynomial(), &[1, 0, 1]);

        let k = FieldSpec::cyclotomic(5).unwrap();
        assert_eq!(k.degree(), 4);
        assert_eq!(k.discriminant(), &BigInt::from(125));
        assert_eq!(k.signature(), Signature { r1: 0, r2: 2 });

        let k = FieldSpec::cyclotomic(3).unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(k.discriminant(), &BigInt::from(-3));

        assert!(FieldSpec::cyclotomic(2).is_err());
        assert!(FieldSpec::cyclotomic(6).is_err());
    }

    #[test]
    fn cyclotomic_discriminant_matches_polynomial() {
        // Z[ζ_m] is the maximal order, so disc(Φ_m) is the field discriminant.
        for m in [3u64, 4, 5, 7, 8, 9, 12, 15, 16] {
            let k = FieldSpec::cyclotomic(m).unwrap();
            assert_eq!(&poly::discriminant(k.polynomial()), k.discriminant(), "m = {m}");
        }
    }

    #[test]
    fn monogenic_cross_checks() {
        // x^3 - 2: disc -108, Z[2^(1/3)] is maximal.
        let k = FieldSpec::monogenic(vec![-2, 0, 0, 1], BigInt::from(-108)).unwrap();
        assert_eq!(k.signature(), Signature { r1: 1, r2: 1 });
        assert!(!k.index_warning());

        // x^2 - 5 with Δ = 5: index 2, accepted with a warning.
        let k = FieldSpec::monogenic(vec![-5, 0, 1], BigInt::from(5)).unwrap();
        assert!(k.index_warning());
        assert!(k.is_index_prime(2));
        assert!(!k.is_index_prime(3));

        // -108 / -4 = 27 is not a square
        assert!(FieldSpec::monogenic(vec![-2, 0, 0, 1], BigInt::from(-4)).is_err());
        // -108 = -3 * 6^2 is accepted, flagged as a possible index
        assert!(FieldSpec::monogenic(vec![-2, 0, 0, 1], BigInt::from(-3)).unwrap().index_warning());
        // reducible cubic
        assert!(FieldSpec::monogenic(vec![-6, 11, -6, 1], BigInt::from(1)).is_err());
        // wrong sign
        assert!(FieldSpec::monogenic(vec![1, 0, 1], BigInt::from(4)).is_err());
    }

    #[test]
    fn quartic_irreducibility_certified() {
        let k = FieldSpec::monogenic(vec![1, 1, 1, 1, 1], BigInt::from(125)).unwrap();
        assert!(!k.index_warning());
        assert_eq!(k.signature(), Signature { r1: 0, r2: 2 });
        // x^4 + 1 is reducible mod every prime, so it can never be certified.
        let k = FieldSpec::monogenic(vec![1, 0, 0, 0, 1], BigInt::from(256)).unwrap();
        assert!(k.index_warning());
    }

    #[test]
    fn labels_roundtrip() {
        for label in ["Q", "Q(i)", "Q(sqrt(5))", "Q(sqrt(-23))", "Q(zeta_5)"] {
            assert_eq!(FieldSpec::from_label(label).unwrap().label(), label);
        }
        assert!(FieldSpec::from_label("Q(cbrt(2))").is_err());
    }

    #[test]
    fn log_disc_of_large_discriminant() {
        let k = FieldSpec::cyclotomic(101).unwrap();
        let expected = 99.0 * 101f64.ln();
        assert!((k.log_abs_disc::<f64>() - expected).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn quadratic_invariants(d in -5000i64..5000) {
            prop_assume!(d != 0 && d != 1 && is_squarefree(d.unsigned_abs()));
            let k = FieldSpec::quadratic(d).unwrap();
            let s = k.signature();
            prop_assert_eq!(s.r1 + 2 * s.r2, k.degree());
            let disc = k.discriminant_i64().unwrap();
            prop_assert!(disc.rem_euclid(4) == 0 || disc.rem_euclid(4) == 1);
            prop_assert!(is_fundamental_discriminant(disc));
            let pd = poly::discriminant(k.polynomial());
            prop_assert!(pd == BigInt::from(disc) || pd == BigInt::from(4 * disc));
        }
    }
}
