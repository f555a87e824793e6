//! Mertens sums over primes with a prescribed Frobenius class in ℚ(ζ_m)/ℚ.
//! The group is abelian, so each class is a single residue a mod m and the
//! Frobenius condition reads p ≡ a (mod m); ramified primes (p | m) are
//! excluded from every class.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::bounds::{b_bound, BoundConstants, BoundInputs};
use crate::error::{Error, Result};
use crate::field::{FieldKind, FieldSpec};
use crate::idealsieve::{threshold_floor, NormSieve, SieveConfig};
use crate::mertens::{bucket_events, fold_buckets, validate_checkpoints, MertensCheckpoint, MertensSums};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrobeniusClassSpec {
    pub m: u64,
    pub a: u64,
    /// #C / #G = 1/φ(m)
    pub density: Ratio<u64>,
}

impl FrobeniusClassSpec {
    pub fn new(m: u64, a: u64) -> Result<Self> {
        if m < 3 || m % 4 == 2 {
            return Err(Error::InvalidInput(format!(
                "modulus must be >= 3 and not 2 mod 4, got {m}"
            )));
        }
        let a = a % m;
        if a.gcd(&m) != 1 {
            return Err(Error::InvalidInput(format!("residue {a} is not coprime to {m}")));
        }
        Ok(Self {
            m,
            a,
            density: Ratio::new(1, crate::arith::euler_phi(m)),
        })
    }

    /// Every class of (ℤ/mℤ)^× in ascending order of representative.
    pub fn all(m: u64) -> Result<Vec<Self>> {
        FrobeniusClassSpec::new(m, 1)?;
        (1..m)
            .filter(|a| a.gcd(&m) == 1)
            .map(|a| Self::new(m, a))
            .collect()
    }

    pub fn density_real<T: Real>(&self) -> T {
        T::from_u64_lossy(*self.density.numer()) / T::from_u64_lossy(*self.density.denom())
    }

    pub fn label(&self) -> String {
        format!("Q(zeta_{}):a={}", self.m, self.a)
    }
}

/// Sums for every class mod m plus the ramified primes, from one pass.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassSums<T> {
    pub m: u64,
    pub by_class: BTreeMap<u64, Vec<MertensCheckpoint<T>>>,
    /// Contributions of the primes dividing m.
    pub ramified: Vec<MertensCheckpoint<T>>,
}

pub fn ap_mertens_all<T: Real>(m: u64, checkpoints: &[T]) -> Result<ClassSums<T>> {
    ap_mertens_all_with(m, checkpoints, SieveConfig::default())
}

pub fn ap_mertens_all_with<T: Real>(
    m: u64,
    checkpoints: &[T],
    config: SieveConfig,
) -> Result<ClassSums<T>> {
    let classes = FrobeniusClassSpec::all(m)?;
    validate_checkpoints(checkpoints)?;
    let bounds: Vec<u64> = checkpoints.iter().map(|&x| threshold_floor(x)).collect();
    let rational = FieldSpec::rational();
    let sieve = NormSieve::new(&rational, *bounds.last().unwrap(), config)?;
    // slot 0 holds the ramified primes, slot i + 1 the i-th class
    let slot_of: BTreeMap<u64, usize> = classes.iter().enumerate().map(|(i, c)| (c.a, i + 1)).collect();
    let slots = classes.len() + 1;
    let per_segment: Vec<Vec<Vec<MertensSums<T>>>> = sieve
        .segments()
        .into_par_iter()
        .map(|(lo, hi)| {
            let seg = sieve.segment_events(lo, hi);
            let mut grouped: Vec<Vec<(u64, u32)>> = vec![Vec::new(); slots];
            for ev in &seg.events {
                let slot = slot_of.get(&(ev.p % m)).copied().unwrap_or(0);
                grouped[slot].push((ev.norm, ev.count));
            }
            grouped
                .into_iter()
                .map(|evs| bucket_events(&bounds, evs))
                .collect()
        })
        .collect();
    let fold_slot = |slot: usize| {
        let segs: Vec<Vec<MertensSums<T>>> = per_segment.iter().map(|s| s[slot].clone()).collect();
        fold_buckets(checkpoints, &segs)
    };
    Ok(ClassSums {
        m,
        by_class: classes.iter().enumerate().map(|(i, c)| (c.a, fold_slot(i + 1))).collect(),
        ramified: fold_slot(0),
    })
}

/// Σ log p / p, Σ 1/p, Σ log(1 − 1/p) over p ≤ x with p ≡ a (mod m).
pub fn ap_mertens<T: Real>(spec: &FrobeniusClassSpec, checkpoints: &[T]) -> Result<Vec<MertensCheckpoint<T>>> {
    let mut all = ap_mertens_all(spec.m, checkpoints)?;
    Ok(all.by_class.remove(&spec.a).expect("class present"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassResiduals<T> {
    /// A_L(x) = S1 − (#C/#G) log x
    pub a: T,
    /// S2 − (#C/#G) log log x, i.e. M_L + B_L(x)
    pub b_uncentred: T,
}

fn check_cyclotomic(spec: &FrobeniusClassSpec, field: &FieldSpec) -> Result<()> {
    match field.kind() {
        FieldKind::Cyclotomic { m } if m == spec.m => Ok(()),
        _ => Err(Error::InvalidInput(format!(
            "{} is not Q(zeta_{})",
            field.label(),
            spec.m
        ))),
    }
}

pub fn class_residuals<T: Real>(
    spec: &FrobeniusClassSpec,
    cp: &MertensCheckpoint<T>,
    field: &FieldSpec,
) -> Result<ClassResiduals<T>> {
    check_cyclotomic(spec, field)?;
    let density = spec.density_real::<T>();
    let log_x = cp.x.ln();
    Ok(ClassResiduals {
        a: cp.s1 - density * log_x,
        b_uncentred: cp.s2 - density * log_x.ln(),
    })
}

/// The Cauchy-difference test for B_L between two checkpoints:
/// returns `(difference, bound)` where the difference
/// S2(x2) − S2(x1) − (#C/#G)(log log x2 − log log x1) equals
/// B_L(x2) − B_L(x1) and the bound is b_bound(x1) + b_bound(x2) for L.
pub fn cauchy_difference<T: Real>(
    spec: &FrobeniusClassSpec,
    lower: &MertensCheckpoint<T>,
    upper: &MertensCheckpoint<T>,
    field: &FieldSpec,
    constants: &BoundConstants,
) -> Result<(T, T)> {
    let lo = class_residuals(spec, lower, field)?;
    let hi = class_residuals(spec, upper, field)?;
    let log_disc = field.log_abs_disc::<T>();
    let bound = b_bound(&BoundInputs::new(lower.x, log_disc, field.degree()), constants)
        + b_bound(&BoundInputs::new(upper.x, log_disc, field.degree()), constants);
    Ok((hi.b_uncentred - lo.b_uncentred, bound))
}

/// κ_L e^γ (log x)^{#C/#G} ∏(1 − 1/p) − 1, the C_L residual of the product
/// statement; needs an externally supplied κ_L.
pub fn class_product_residual<T: Real>(
    spec: &FrobeniusClassSpec,
    cp: &MertensCheckpoint<T>,
    kappa_l: T,
) -> Result<T> {
    if !(kappa_l > T::zero()) {
        return Err(Error::NonPositiveResidue(kappa_l.as_f64()));
    }
    let density = spec.density_real::<T>();
    let log_scaled = kappa_l.ln() + T::euler_gamma() + density * cp.x.ln().ln() + cp.log_product;
    Ok(log_scaled.exp_m1())
}
