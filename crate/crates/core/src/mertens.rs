//! Mertens sums over prime ideals, the constant M_K and the residuals
//! A_K, B_K, C_K, E_K.
//!
//! One pass over the norm stream fills, per sieve segment, one bucket per
//! checkpoint interval (c_{k-1}, c_k]. Segments merge in ascending order and
//! the buckets are prefix-summed, so results do not depend on how many
//! threads processed the segments.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::idealsieve::{threshold_floor, NormEvent, NormSieve, SieveConfig};
use crate::residue::ResidueValue;
use crate::scalar::{CompensatedSum, Real};

/// Smallest truncation point accepted by [`meissel_mertens`].
pub const MIN_TRUNCATION: f64 = 1e4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MertensCheckpoint<T> {
    pub x: T,
    /// Σ log N(𝔭) / N(𝔭)
    pub s1: T,
    /// Σ 1 / N(𝔭)
    pub s2: T,
    /// Σ log(1 − 1/N(𝔭))
    pub log_product: T,
    /// π_K(x)
    pub prime_ideal_count: u64,
}

impl<T: Real> MertensCheckpoint<T> {
    pub fn product(&self) -> T {
        self.log_product.exp()
    }
}

/// Compensated running sums for the three Mertens quantities.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MertensSums<T> {
    s1: CompensatedSum<T>,
    s2: CompensatedSum<T>,
    log_product: CompensatedSum<T>,
    count: u64,
}

impl<T: Real> MertensSums<T> {
    pub fn new() -> Self {
        Self {
            s1: CompensatedSum::new(),
            s2: CompensatedSum::new(),
            log_product: CompensatedSum::new(),
            count: 0,
        }
    }

    #[inline]
    pub fn add_norm(&mut self, norm: u64, count: u32) {
        let n = T::from_u64_lossy(norm);
        let c = T::from_u64_lossy(count as u64);
        let inv = n.recip();
        self.s1.add(c * n.ln() * inv);
        self.s2.add(c * inv);
        self.log_product.add(c * (-inv).ln_1p());
        self.count += count as u64;
    }

    pub fn add_event(&mut self, ev: &NormEvent) {
        self.add_norm(ev.norm, ev.count);
    }

    pub fn merge(&mut self, other: &Self) {
        self.s1.merge(&other.s1);
        self.s2.merge(&other.s2);
        self.log_product.merge(&other.log_product);
        self.count += other.count;
    }

    pub fn checkpoint(&self, x: T) -> MertensCheckpoint<T> {
        MertensCheckpoint {
            x,
            s1: self.s1.value(),
            s2: self.s2.value(),
            log_product: self.log_product.value(),
            prime_ideal_count: self.count,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Accumulation<T> {
    pub checkpoints: Vec<MertensCheckpoint<T>>,
    /// Primes ≤ max checkpoint whose splitting could not be verified.
    pub unverified_primes: u64,
}

pub fn validate_checkpoints<T: Real>(checkpoints: &[T]) -> Result<()> {
    if checkpoints.is_empty() {
        return Err(Error::InvalidInput("at least one checkpoint is required".into()));
    }
    if let Some(bad) = checkpoints.iter().find(|&&x| !(x >= T::lit(2.0))) {
        return Err(Error::InvalidInput(format!("checkpoint {bad} is below 2")));
    }
    if checkpoints.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput("checkpoints must be ascending".into()));
    }
    Ok(())
}

/// Per-checkpoint-interval buckets for an arbitrary event source, bucketed by
/// the first checkpoint bound ≥ the event's norm.
pub(crate) fn bucket_events<T: Real, I>(bounds: &[u64], events: I) -> Vec<MertensSums<T>>
where
    I: IntoIterator<Item = (u64, u32)>,
{
    let mut buckets = vec![MertensSums::new(); bounds.len()];
    for (norm, count) in events {
        let k = bounds.partition_point(|&b| b < norm);
        if k < buckets.len() {
            buckets[k].add_norm(norm, count);
        }
    }
    buckets
}

/// Merges per-segment buckets in segment order, then prefix-sums over the
/// checkpoint intervals.
pub(crate) fn fold_buckets<T: Real>(
    checkpoints: &[T],
    per_segment: &[Vec<MertensSums<T>>],
) -> Vec<MertensCheckpoint<T>> {
    let mut totals = vec![MertensSums::new(); checkpoints.len()];
    for seg in per_segment {
        for (total, part) in totals.iter_mut().zip(seg) {
            total.merge(part);
        }
    }
    let mut running = MertensSums::new();
    checkpoints
        .iter()
        .zip(&totals)
        .map(|(&x, part)| {
            running.merge(part);
            running.checkpoint(x)
        })
        .collect()
}

/// Mertens quantities at every checkpoint from a single sieve pass.
pub fn accumulate<T: Real>(field: &FieldSpec, checkpoints: &[T]) -> Result<Accumulation<T>> {
    accumulate_with(field, checkpoints, SieveConfig::default())
}

pub fn accumulate_with<T: Real>(
    field: &FieldSpec,
    checkpoints: &[T],
    config: SieveConfig,
) -> Result<Accumulation<T>> {
    validate_checkpoints(checkpoints)?;
    let bounds: Vec<u64> = checkpoints.iter().map(|&x| threshold_floor(x)).collect();
    let sieve = NormSieve::new(field, *bounds.last().unwrap(), config)?;
    let per_segment: Vec<(Vec<MertensSums<T>>, u64)> = sieve
        .segments()
        .into_par_iter()
        .map(|(lo, hi)| {
            let seg = sieve.segment_events(lo, hi);
            let buckets = bucket_events(&bounds, seg.events.iter().map(|e| (e.norm, e.count)));
            (buckets, seg.unverified_primes)
        })
        .collect();
    let unverified_primes = per_segment.iter().map(|(_, u)| u).sum();
    let buckets: Vec<Vec<MertensSums<T>>> = per_segment.into_iter().map(|(b, _)| b).collect();
    Ok(Accumulation {
        checkpoints: fold_buckets(checkpoints, &buckets),
        unverified_primes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MertensConstants<T> {
    pub kappa: T,
    pub kappa_error: T,
    /// M_K
    pub meissel_mertens: T,
    /// Rigorous truncation bound plus the propagated κ error.
    pub meissel_mertens_error: T,
    pub truncation_x: T,
    pub degree: u32,
}

impl<T: Real> MertensConstants<T> {
    /// M_K = γ + log κ + Σ_{N(𝔭) ≤ x}[1/N(𝔭) + log(1 − 1/N(𝔭))], where the
    /// omitted tail is at most n_K/(x − 1) in absolute value.
    pub fn from_checkpoint(
        cp: &MertensCheckpoint<T>,
        kappa: &ResidueValue<T>,
        degree: u32,
    ) -> Result<Self> {
        if !(kappa.kappa > T::zero()) {
            return Err(Error::NonPositiveResidue(kappa.kappa.as_f64()));
        }
        let partial = cp.s2 + cp.log_product;
        let tail = T::from_u64_lossy(degree as u64) / (cp.x - T::one());
        Ok(Self {
            kappa: kappa.kappa,
            kappa_error: kappa.error,
            meissel_mertens: T::euler_gamma() + kappa.kappa.ln() + partial,
            meissel_mertens_error: tail + kappa.error / kappa.kappa,
            truncation_x: cp.x,
            degree,
        })
    }
}

/// M_K truncated at `truncation_x` (≥ [`MIN_TRUNCATION`]).
pub fn meissel_mertens<T: Real>(
    field: &FieldSpec,
    kappa: &ResidueValue<T>,
    truncation_x: T,
) -> Result<MertensConstants<T>> {
    if !(truncation_x >= T::lit(MIN_TRUNCATION)) {
        return Err(Error::InvalidInput(format!(
            "truncation point {truncation_x} is below {MIN_TRUNCATION}"
        )));
    }
    if !(kappa.kappa > T::zero()) {
        return Err(Error::NonPositiveResidue(kappa.kappa.as_f64()));
    }
    let acc = accumulate(field, &[truncation_x])?;
    MertensConstants::from_checkpoint(&acc.checkpoints[0], kappa, field.degree())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residuals<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub e: T,
}

/// A = S1 − log x, B = S2 − log log x − M_K,
/// E = −(log P + log log x + log κ + γ) and C = e^{−E} − 1.
pub fn residuals<T: Real>(cp: &MertensCheckpoint<T>, consts: &MertensConstants<T>) -> Residuals<T> {
    let log_x = cp.x.ln();
    let log_log_x = log_x.ln();
    let e = -(cp.log_product + log_log_x + consts.kappa.ln() + T::euler_gamma());
    Residuals {
        a: cp.s1 - log_x,
        b: cp.s2 - log_log_x - consts.meissel_mertens,
        c: (-e).exp_m1(),
        e,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::kappa;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn ln(x: f64) -> f64 {
        x.ln()
    }

    #[test]
    fn rational_at_ten() {
        let acc = accumulate(&FieldSpec::rational(), &[10.0f64]).unwrap();
        let cp = acc.checkpoints[0];
        let oracle = ln(2.0) / 2.0 + ln(3.0) / 3.0 + ln(5.0) / 5.0 + ln(7.0) / 7.0;
        assert_relative_eq!(cp.s1, oracle, max_relative = 1e-15);
        assert!((cp.s1 - 1.312653).abs() < 1e-6);
        assert_eq!(cp.prime_ideal_count, 4);
    }

    #[test]
    fn rational_at_two() {
        let cp = accumulate(&FieldSpec::rational(), &[2.0f64]).unwrap().checkpoints[0];
        assert_eq!(cp.s2, 0.5);
        assert_relative_eq!(cp.log_product, ln(0.5), max_relative = 1e-15);
    }

    #[test]
    fn gaussian_at_ten() {
        let gauss = FieldSpec::quadratic(-1).unwrap();
        let cp = accumulate(&gauss, &[10.0f64]).unwrap().checkpoints[0];
        let oracle = 0.5 + 2.0 / 5.0 + 1.0 / 9.0;
        assert_relative_eq!(cp.s2, oracle, max_relative = 1e-15);
        assert!((cp.s2 - 1.01111).abs() < 1e-5);
    }

    #[test]
    fn checkpoints_validated() {
        let q = FieldSpec::rational();
        assert!(accumulate::<f64>(&q, &[]).is_err());
        assert!(accumulate(&q, &[1.0f64]).is_err());
        assert!(accumulate(&q, &[100.0f64, 10.0]).is_err());
    }

    #[test]
    fn sums_are_monotone_and_product_bounded_by_s2() {
        let k = FieldSpec::cyclotomic(5).unwrap();
        let grid: Vec<f64> = (1..=40).map(|k| 2.0 * 1.3f64.powi(k)).collect();
        let acc = accumulate(&k, &grid).unwrap();
        for w in acc.checkpoints.windows(2) {
            assert!(w[1].s1 >= w[0].s1 && w[1].s2 >= w[0].s2);
            assert!(w[1].log_product <= w[0].log_product);
        }
        for cp in &acc.checkpoints {
            assert!(cp.s1 >= 0.0 && cp.s2 >= 0.0 && cp.log_product <= 0.0);
            assert!(-cp.log_product >= cp.s2);
        }
    }

    #[test]
    fn reverse_order_s2_agrees() {
        let k = FieldSpec::quadratic(-23).unwrap();
        let x = 1e6;
        let forward = accumulate(&k, &[x]).unwrap().checkpoints[0].s2;
        let events: Vec<NormEvent> = crate::idealsieve::norm_stream(&k, x).unwrap().collect();
        let reverse: CompensatedSum<f64> = events
            .iter()
            .rev()
            .map(|e| e.count as f64 / e.norm as f64)
            .collect();
        assert_relative_eq!(forward, reverse.value(), max_relative = 1e-12);
    }

    #[test]
    fn segment_size_does_not_matter() {
        let k = FieldSpec::quadratic(5).unwrap();
        let grid = [100.0f64, 1e3, 1e4, 1e5];
        let a = accumulate(&k, &grid).unwrap();
        let cfg = SieveConfig {
            segment_size: 1009,
            ..SieveConfig::default()
        };
        let b = accumulate_with(&k, &grid, cfg).unwrap();
        for (x, y) in a.checkpoints.iter().zip(&b.checkpoints) {
            assert_eq!(x.prime_ideal_count, y.prime_ideal_count);
            assert_relative_eq!(x.s1, y.s1, max_relative = 1e-14);
            assert_relative_eq!(x.s2, y.s2, max_relative = 1e-14);
            assert_relative_eq!(x.log_product, y.log_product, max_relative = 1e-14);
        }
    }

    #[test]
    fn meissel_mertens_rational_constant() {
        let k = kappa::<f64>(&FieldSpec::rational(), None).unwrap();
        let c = meissel_mertens(&FieldSpec::rational(), &k, 1e6).unwrap();
        assert!((c.meissel_mertens - 0.2614972128).abs() < 1e-5);
        assert_relative_eq!(c.meissel_mertens_error, 1.0 / (1e6 - 1.0), max_relative = 1e-15);
    }

    #[test]
    fn meissel_mertens_gaussian_inside_interval() {
        let gauss = FieldSpec::quadratic(-1).unwrap();
        let k = kappa::<f64>(&gauss, None).unwrap();
        assert_relative_eq!(k.kappa, PI / 4.0, max_relative = 1e-14);
        let c = meissel_mertens(&gauss, &k, 1e6).unwrap();
        let hi = f64::euler_gamma() + (PI / 4.0).ln();
        assert!(c.meissel_mertens <= hi && c.meissel_mertens >= hi - 2.0);
        assert!(c.meissel_mertens_error >= 2.0 / (1e6 - 1.0));
    }

    #[test]
    fn meissel_mertens_tail_consistency() {
        let k5 = FieldSpec::quadratic(5).unwrap();
        let kap = kappa::<f64>(&k5, None).unwrap();
        let a = meissel_mertens(&k5, &kap, 1e4).unwrap();
        let b = meissel_mertens(&k5, &kap, 1e6).unwrap();
        assert!((a.meissel_mertens - b.meissel_mertens).abs() <= 2.0 / (1e4 - 1.0));
    }

    #[test]
    fn meissel_mertens_rejects_bad_input() {
        let q = FieldSpec::rational();
        let mut k = kappa::<f64>(&q, None).unwrap();
        assert!(meissel_mertens(&q, &k, 100.0).is_err());
        k.kappa = 0.0;
        assert!(matches!(meissel_mertens(&q, &k, 1e4), Err(Error::NonPositiveResidue(_))));
    }

    #[test]
    fn residuals_are_self_consistent() {
        let gauss = FieldSpec::quadratic(-1).unwrap();
        let kap = kappa::<f64>(&gauss, None).unwrap();
        let acc = accumulate(&gauss, &[100.0, 1e3, 1e4, 1e5]).unwrap();
        let consts =
            MertensConstants::from_checkpoint(acc.checkpoints.last().unwrap(), &kap, 2).unwrap();
        for cp in &acc.checkpoints {
            let r = residuals(cp, &consts);
            let direct = kap.kappa * f64::euler_gamma().exp() * cp.x.ln() * cp.product();
            assert_relative_eq!(1.0 + r.c, direct, max_relative = 1e-12);
            assert!(r.c.abs() <= r.e.abs() * r.e.abs().exp());
        }
    }

    #[test]
    fn residual_a_zero_when_s1_equals_log_x() {
        let cp = MertensCheckpoint {
            x: 100.0f64,
            s1: 100f64.ln(),
            s2: 1.0,
            log_product: -1.0,
            prime_ideal_count: 0,
        };
        let consts = MertensConstants {
            kappa: 1.0,
            kappa_error: 0.0,
            meissel_mertens: 0.26,
            meissel_mertens_error: 0.0,
            truncation_x: 1e4,
            degree: 1,
        };
        assert_eq!(residuals(&cp, &consts).a, 0.0);
    }

    #[test]
    fn rational_residuals_shrink() {
        let q = FieldSpec::rational();
        let kap = kappa::<f64>(&q, None).unwrap();
        let grid = [1e4f64, 1e5, 1e6, 1e7];
        let acc = accumulate(&q, &grid).unwrap();
        let consts = MertensConstants::from_checkpoint(&acc.checkpoints[3], &kap, 1).unwrap();
        let rs: Vec<Residuals<f64>> = acc.checkpoints.iter().map(|cp| residuals(cp, &consts)).collect();
        for r in &rs {
            assert!(r.a.abs() < 2.0);
        }
        assert!(rs[0].b.abs() > rs[2].b.abs());
        assert!(rs[0].c.abs() > rs[3].c.abs());
        assert!(rs[3].c.abs() < 1e-3);
    }

    #[test]
    fn single_precision_accumulation() {
        let acc = accumulate(&FieldSpec::rational(), &[1e5f32]).unwrap();
        let acc64 = accumulate(&FieldSpec::rational(), &[1e5f64]).unwrap();
        assert_relative_eq!(
            acc.checkpoints[0].s2 as f64,
            acc64.checkpoints[0].s2,
            max_relative = 1e-6
        );
    }
}
