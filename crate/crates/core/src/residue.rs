//! The residue κ_K of the Dedekind zeta function at s = 1.
//!
//! For quadratic fields κ_K = L(1, χ_Δ) is computed twice: once from a
//! finite character sum, once from the class number formula with h_K, R_K
//! and w_K obtained independently (reduced forms for Δ < 0, the
//! continued-fraction regulator for Δ > 0). Other fields take a
//! user-supplied value.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::arith::kronecker;
use crate::error::{Error, Result};
use crate::field::{is_fundamental_discriminant, FieldKind, FieldSpec};
use crate::idealsieve::isqrt;
use crate::records::parse_records;
use crate::scalar::{CompensatedSum, Real};

/// Largest |Δ| accepted by the character-sum route.
pub const MAX_CHARACTER_SUM_DISC: u64 = 10_000_000;
/// Largest |Δ| accepted by the class-data route.
pub const MAX_CLASS_DATA_DISC: u64 = 1_000_000;
/// Distance from an integer tolerated when recovering a real-quadratic h.
const CLASS_NUMBER_ROUNDING_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidueMethod {
    CharacterSum,
    ClassNumberFormula,
    UserSupplied,
    CrossChecked,
}

impl ResidueMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::CharacterSum => "character-sum",
            Self::ClassNumberFormula => "class-number-formula",
            Self::UserSupplied => "user-supplied",
            Self::CrossChecked => "cross-checked",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassComponents<T> {
    pub class_number: u64,
    pub regulator: T,
    pub roots_of_unity: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueValue<T> {
    pub kappa: T,
    pub method: ResidueMethod,
    /// Absolute error bar on `kappa`.
    pub error: T,
    pub components: Option<ClassComponents<T>>,
    pub source: Option<String>,
}

/// A residue supplied from outside, e.g. a residue table entry.
#[derive(Clone, Debug, PartialEq)]
pub struct SuppliedResidue {
    pub kappa: f64,
    pub error: f64,
    pub source: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticClassData<T> {
    pub class_number: u64,
    pub regulator: T,
    pub roots_of_unity: u32,
    /// Norm of the fundamental unit (±1) for real fields.
    pub unit_norm: Option<i8>,
}

fn check_fundamental(disc: i64, ceiling: u64) -> Result<()> {
    if !is_fundamental_discriminant(disc) {
        return Err(Error::InvalidInput(format!("{disc} is not a fundamental discriminant")));
    }
    if disc.unsigned_abs() > ceiling {
        return Err(Error::InvalidInput(format!(
            "|Δ| = {} exceeds the ceiling {ceiling}",
            disc.unsigned_abs()
        )));
    }
    Ok(())
}

/// L(1, χ_Δ) from a finite sum over a full period of the Kronecker character.
///
/// Δ < 0: L = −π/|Δ|^{3/2} Σ_{a<|Δ|} χ(a)·a.
/// Δ > 0: L = −(1/√Δ) Σ_{a<Δ} χ(a)·log sin(πa/Δ), folded onto a ≤ Δ/2 using
/// the evenness of χ.
pub fn l1_character_sum<T: Real>(disc: i64) -> Result<T> {
    check_fundamental(disc, MAX_CHARACTER_SUM_DISC)?;
    let abs = disc.unsigned_abs();
    if disc < 0 {
        let weighted: i128 = (1..abs)
            .map(|a| kronecker(disc, a) as i128 * a as i128)
            .sum();
        let abs_t = T::from_u64_lossy(abs);
        Ok(-T::PI() * T::lit(weighted as f64) / (abs_t * abs_t.sqrt()))
    } else {
        let d = T::from_u64_lossy(abs);
        let mut sum = CompensatedSum::new();
        for a in 1..=abs / 2 {
            let chi = kronecker(disc, a);
            if chi == 0 {
                continue;
            }
            let weight = if 2 * a == abs { T::one() } else { T::lit(2.0) };
            let term = (T::PI() * T::from_u64_lossy(a) / d).sin().ln();
            sum.add(T::lit(chi as f64) * weight * term);
        }
        Ok(-sum.value() / d.sqrt())
    }
}

/// Number of reduced positive-definite primitive forms (a, b, c) with
/// b² − 4ac = Δ < 0, i.e. the class number h(Δ).
pub fn count_reduced_forms(disc: i64) -> u64 {
    debug_assert!(disc < 0);
    let abs = disc.unsigned_abs() as i64;
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= abs {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let numer = b * b - disc;
            if numer % (4 * a) != 0 {
                continue;
            }
            let c = numer / (4 * a);
            if c < a {
                continue;
            }
            if b < 0 && a == c {
                continue;
            }
            if num_integer::gcd(num_integer::gcd(a, b.abs()), c) != 1 {
                continue;
            }
            h += 1;
        }
        a += 1;
    }
    h
}

/// Regulator log ε of the real quadratic order of discriminant Δ > 0,
/// summed from the complete quotients over one period of the continued
/// fraction of ω = (s + √Δ)/2, s ∈ {0, 1}. Also returns the norm of ε.
pub fn real_quadratic_regulator<T: Real>(disc: i64) -> (T, i8) {
    debug_assert!(disc > 0);
    let root = isqrt(disc as u64) as i64;
    let sqrt_d = T::lit(disc as f64).sqrt();
    let step = |p: i64, q: i64| -> (i64, i64) {
        let a = (p + root).div_euclid(q);
        let p_next = a * q - p;
        let q_next = (disc - p_next * p_next) / q;
        (p_next, q_next)
    };
    let (p0, q0) = (disc.rem_euclid(2), 2);
    let first = step(p0, q0);
    let mut state = first;
    let mut log_sum = CompensatedSum::new();
    let mut period = 0u32;
    loop {
        let (p, q) = state;
        debug_assert!(q > 0);
        log_sum.add(((T::lit(p as f64) + sqrt_d) / T::lit(q as f64)).ln());
        period += 1;
        state = step(p, q);
        if state == first {
            break;
        }
    }
    let norm = if period.is_multiple_of(2) { 1 } else { -1 };
    (log_sum.value(), norm)
}

/// h_K, R_K, w_K for the quadratic field of fundamental discriminant Δ.
///
/// For Δ > 0 the class number is recovered from the character sum as
/// L(1, χ)·√Δ / (2R) and must be within 1e-4 of an integer.
pub fn quadratic_class_data<T: Real>(disc: i64) -> Result<QuadraticClassData<T>> {
    check_fundamental(disc, MAX_CLASS_DATA_DISC)?;
    if disc < 0 {
        let roots_of_unity = match disc {
            -3 => 6,
            -4 => 4,
            _ => 2,
        };
        return Ok(QuadraticClassData {
            class_number: count_reduced_forms(disc),
            regulator: T::one(),
            roots_of_unity,
            unit_norm: None,
        });
    }
    let (regulator, norm) = real_quadratic_regulator::<T>(disc);
    let l1: T = l1_character_sum(disc)?;
    let h_real = l1 * T::lit(disc as f64).sqrt() / (T::lit(2.0) * regulator);
    let h_round = h_real.round();
    if (h_real - h_round).abs().as_f64() > CLASS_NUMBER_ROUNDING_TOL || h_round < T::one() {
        return Err(Error::NonIntegralClassNumber {
            discriminant: disc,
            value: h_real.as_f64(),
        });
    }
    Ok(QuadraticClassData {
        class_number: h_round.to_u64().unwrap(),
        regulator,
        roots_of_unity: 2,
        unit_norm: Some(norm),
    })
}

/// κ = 2^{r1} (2π)^{r2} h R / (w √|Δ|).
pub fn class_number_formula<T: Real>(r1: u32, r2: u32, comps: &ClassComponents<T>, abs_disc: T) -> T {
    let two = T::lit(2.0);
    let numer = two.powi(r1 as i32)
        * (two * T::PI()).powi(r2 as i32)
        * T::from_u64_lossy(comps.class_number)
        * comps.regulator;
    numer / (T::from_u64_lossy(comps.roots_of_unity as u64) * abs_disc.sqrt())
}

/// The residue of ζ_K at s = 1.
///
/// Q gives 1 exactly. Quadratic fields are computed by both routes, which
/// must agree to `T::CROSS_CHECK_TOL` relative; disagreement is an error.
/// Any other field needs `supplied`.
pub fn kappa<T: Real>(field: &FieldSpec, supplied: Option<&SuppliedResidue>) -> Result<ResidueValue<T>> {
    match field.kind() {
        FieldKind::Rational => Ok(ResidueValue {
            kappa: T::one(),
            method: ResidueMethod::ClassNumberFormula,
            error: T::zero(),
            components: Some(ClassComponents {
                class_number: 1,
                regulator: T::one(),
                roots_of_unity: 2,
            }),
            source: None,
        }),
        FieldKind::Quadratic { .. } => {
            let disc = field.discriminant_i64().expect("quadratic discriminant fits i64");
            quadratic_kappa(disc)
        }
        _ => {
            let s = supplied.ok_or_else(|| Error::MissingResidue(field.label().to_string()))?;
            user_supplied(s)
        }
    }
}

pub fn user_supplied<T: Real>(s: &SuppliedResidue) -> Result<ResidueValue<T>> {
    if !(s.kappa > 0.0) {
        return Err(Error::NonPositiveResidue(s.kappa));
    }
    Ok(ResidueValue {
        kappa: T::lit(s.kappa),
        method: ResidueMethod::UserSupplied,
        error: T::lit(s.error.abs()),
        components: None,
        source: s.source.clone(),
    })
}

/// Two-route κ for the quadratic field of fundamental discriminant Δ.
pub fn quadratic_kappa<T: Real>(disc: i64) -> Result<ResidueValue<T>> {
    let by_sum: T = l1_character_sum(disc)?;
    let data = quadratic_class_data::<T>(disc)?;
    let comps = ClassComponents {
        class_number: data.class_number,
        regulator: data.regulator,
        roots_of_unity: data.roots_of_unity,
    };
    let (r1, r2) = if disc > 0 { (2, 0) } else { (0, 1) };
    let by_formula = class_number_formula(r1, r2, &comps, T::lit(disc.unsigned_abs() as f64));
    let diff = (by_sum - by_formula).abs();
    if diff > T::lit(T::CROSS_CHECK_TOL) * by_sum.abs() {
        return Err(Error::ResidueMismatch {
            discriminant: disc,
            character_sum: by_sum.as_f64(),
            class_formula: by_formula.as_f64(),
        });
    }
    Ok(ResidueValue {
        kappa: by_formula,
        method: ResidueMethod::CrossChecked,
        error: diff,
        components: Some(comps),
        source: None,
    })
}

/// Residues for fields whose κ is not computed here, keyed by field label.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResidueTable {
    entries: BTreeMap<String, SuppliedResidue>,
}

impl ResidueTable {
    /// Records look like `label=Q(zeta_5) kappa=0.3392 error=1e-4 source="..."`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for rec in parse_records(text) {
            let rec = rec?;
            let label = rec.require("label")?.to_string();
            let kappa: f64 = rec
                .parse_value("kappa")?
                .ok_or_else(|| rec.error("missing key `kappa`"))?;
            let error = rec.parse_value("error")?.unwrap_or(0.0);
            if !(kappa > 0.0) {
                return Err(rec.error(format!("kappa must be positive, got {kappa}")));
            }
            entries.insert(
                label,
                SuppliedResidue {
                    kappa,
                    error,
                    source: rec.get("source").map(str::to_string),
                },
            );
        }
        Ok(Self { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn insert(&mut self, label: impl Into<String>, value: SuppliedResidue) {
        self.entries.insert(label.into(), value);
    }

    pub fn get(&self, label: &str) -> Option<&SuppliedResidue> {
        self.entries.get(label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    const LOG_GOLDEN: f64 = 0.481_211_825_059_603_47;

    /// Leibniz series 1 − 1/3 + 1/5 − … with pairwise averaging of
    /// consecutive partial sums (Euler-style acceleration).
    fn leibniz(terms: usize) -> f64 {
        let mut partial = Vec::with_capacity(terms);
        let mut s = 0.0;
        for k in 0..terms {
            s += if k % 2 == 0 { 1.0 } else { -1.0 } / (2 * k + 1) as f64;
            partial.push(s);
        }
        for _ in 0..20 {
            partial = partial.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        }
        *partial.last().unwrap()
    }

    /// Σ χ₋₃(n)/n summed in pairs (1/(3k+1) − 1/(3k+2)).
    fn chi3_series(pairs: usize) -> f64 {
        (0..pairs)
            .map(|k| 1.0 / (3 * k + 1) as f64 - 1.0 / (3 * k + 2) as f64)
            .sum()
    }

    #[test]
    fn character_sum_gaussian() {
        let oracle = leibniz(200);
        assert!((oracle - PI / 4.0).abs() < 1e-12);
        assert_relative_eq!(l1_character_sum::<f64>(-4).unwrap(), oracle, max_relative = 1e-12);
    }

    #[test]
    fn character_sum_eisenstein() {
        let oracle = chi3_series(5_000_000);
        let value: f64 = l1_character_sum(-3).unwrap();
        assert!((value - oracle).abs() < 1e-7);
        assert_relative_eq!(value, PI / (3.0 * 3f64.sqrt()), max_relative = 1e-14);
    }

    #[test]
    fn character_sum_real_five() {
        let value: f64 = l1_character_sum(5).unwrap();
        assert_relative_eq!(value, 2.0 * LOG_GOLDEN / 5f64.sqrt(), max_relative = 1e-13);
        assert!((value - 0.430409).abs() < 1e-6);
    }

    #[test]
    fn rejects_non_fundamental() {
        assert!(l1_character_sum::<f64>(-8 * 9).is_err());
        assert!(l1_character_sum::<f64>(12 * 4).is_err());
        assert!(quadratic_class_data::<f64>(1).is_err());
    }

    #[test]
    fn class_data_examples() {
        let d = quadratic_class_data::<f64>(-23).unwrap();
        assert_eq!((d.class_number, d.roots_of_unity), (3, 2));
        let d = quadratic_class_data::<f64>(-4).unwrap();
        assert_eq!((d.class_number, d.roots_of_unity, d.regulator), (1, 4, 1.0));
        let d = quadratic_class_data::<f64>(-3).unwrap();
        assert_eq!((d.class_number, d.roots_of_unity), (1, 6));
        let d = quadratic_class_data::<f64>(5).unwrap();
        assert_eq!(d.class_number, 1);
        assert_eq!(d.unit_norm, Some(-1));
        assert_relative_eq!(d.regulator, LOG_GOLDEN, max_relative = 1e-14);
    }

    #[test]
    fn reduced_forms_known_class_numbers() {
        // h(-Δ) for a few classical discriminants
        for (disc, h) in [(-7, 1), (-15, 2), (-20, 2), (-23, 3), (-47, 5), (-71, 7), (-163, 1), (-84, 4)] {
            assert_eq!(count_reduced_forms(disc), h, "Δ = {disc}");
        }
    }

    /// Smallest (t, u), u > 0, with t² − Δu² = ±4; ε = (t + u√Δ)/2.
    fn brute_force_unit(disc: i64) -> (f64, i8) {
        for u in 1i64.. {
            for sign in [-4i64, 4] {
                let t2 = disc * u * u + sign;
                if t2 > 0 {
                    let t = isqrt(t2 as u64) as i64;
                    if t * t == t2 {
                        let eps = (t as f64 + u as f64 * (disc as f64).sqrt()) / 2.0;
                        return (eps.ln(), if sign < 0 { -1 } else { 1 });
                    }
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn regulator_matches_brute_force_units() {
        for disc in (5..400).filter(|&d| is_fundamental_discriminant(d)) {
            let (reg, norm) = real_quadratic_regulator::<f64>(disc);
            let (oracle, oracle_norm) = brute_force_unit(disc);
            if oracle > 30.0 {
                continue;
            }
            assert_relative_eq!(reg, oracle, max_relative = 1e-12);
            assert_eq!(norm, oracle_norm, "Δ = {disc}");
        }
    }

    #[test]
    fn kappa_examples() {
        let q = kappa::<f64>(&FieldSpec::rational(), None).unwrap();
        assert_eq!((q.kappa, q.error), (1.0, 0.0));

        let gauss = kappa::<f64>(&FieldSpec::quadratic(-1).unwrap(), None).unwrap();
        assert_eq!(gauss.method, ResidueMethod::CrossChecked);
        // 2^0 (2π)^1 · 1 · 1 / (4 · √4) = π/4
        assert_relative_eq!(gauss.kappa, 2.0 * PI / (4.0 * 2.0), max_relative = 1e-15);

        let k5 = kappa::<f64>(&FieldSpec::quadratic(5).unwrap(), None).unwrap();
        // 2^2 · 1 · log φ / (2 · √5)
        assert_relative_eq!(k5.kappa, 4.0 * LOG_GOLDEN / (2.0 * 5f64.sqrt()), max_relative = 1e-14);
        assert_relative_eq!(k5.kappa, l1_character_sum::<f64>(5).unwrap(), max_relative = 1e-13);
    }

    #[test]
    fn kappa_for_other_fields_needs_a_value() {
        let z5 = FieldSpec::cyclotomic(5).unwrap();
        assert!(matches!(kappa::<f64>(&z5, None), Err(Error::MissingResidue(_))));
        let s = SuppliedResidue {
            kappa: 0.3,
            error: 1e-3,
            source: Some("table".into()),
        };
        let v = kappa::<f64>(&z5, Some(&s)).unwrap();
        assert_eq!(v.method, ResidueMethod::UserSupplied);
        assert_eq!(v.error, 1e-3);
        let bad = SuppliedResidue {
            kappa: -1.0,
            error: 0.0,
            source: None,
        };
        assert!(kappa::<f64>(&z5, Some(&bad)).is_err());
    }

    #[test]
    fn residue_table_parsing() {
        let t = ResidueTable::parse(
            "# residues\nlabel=Q(zeta_5) kappa=0.25 error=1e-6 source=\"computed elsewhere\"\n",
        )
        .unwrap();
        let e = t.get("Q(zeta_5)").unwrap();
        assert_eq!((e.kappa, e.error), (0.25, 1e-6));
        assert_eq!(e.source.as_deref(), Some("computed elsewhere"));
        assert!(ResidueTable::parse("label=X kappa=-2").is_err());
        assert!(ResidueTable::parse("kappa=2").is_err());
    }

    #[test]
    fn components_consistent_with_kappa() {
        for disc in [-3i64, -4, -23, -84, 5, 8, 12, 229] {
            let v = quadratic_kappa::<f64>(disc).unwrap();
            let c = v.components.unwrap();
            assert!(c.class_number >= 1);
            assert!([2, 4, 6].contains(&c.roots_of_unity));
            assert!(c.regulator > 0.0);
            if disc < 0 {
                assert_eq!(c.regulator, 1.0);
            }
        }
    }
}
