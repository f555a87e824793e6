//! Segmented sieve of Eratosthenes and the stream of prime-ideal norms
//! N(𝔭) = p^f ≤ x built on top of it.
//!
//! The prime range [2, x] is cut into fixed-width segments. Segment
//! boundaries depend only on the configuration, never on the number of
//! worker threads, so per-segment partial results merge deterministically.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::scalar::Real;
use crate::splitting::splitting_type;

pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 20;
pub const MAX_SIEVE_BOUND: u64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    /// Integers covered by one segment.
    pub segment_size: u64,
    /// Largest admissible sieve bound.
    pub ceiling: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_size: DEFAULT_SEGMENT_SIZE,
            ceiling: MAX_SIEVE_BOUND,
        }
    }
}

impl SieveConfig {
    pub fn check(&self, hi: u64) -> Result<()> {
        let ceiling = self.ceiling.min(MAX_SIEVE_BOUND);
        if hi > ceiling {
            return Err(Error::Resource {
                requested: hi,
                ceiling,
            });
        }
        if self.segment_size == 0 {
            return Err(Error::InvalidInput("segment size must be positive".into()));
        }
        Ok(())
    }

    /// Fixed segment boundaries covering [lo, hi], inclusive.
    pub fn segments(&self, lo: u64, hi: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut start = lo;
        while start <= hi {
            let end = hi.min(start.saturating_add(self.segment_size - 1));
            out.push((start, end));
            if end == u64::MAX {
                break;
            }
            start = end + 1;
        }
        out
    }
}

/// Floor of a real threshold as an integer bound (0 for x < 0).
pub fn threshold_floor<T: Real>(x: T) -> u64 {
    x.floor().to_u64().unwrap_or(0)
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All primes ≤ `limit` by the plain sieve of Eratosthenes.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&k| !composite[k]).map(|k| k as u64).collect()
}

/// Primes in [lo, hi]. `base` must contain every prime ≤ √hi.
pub fn sieve_segment(base: &[u64], lo: u64, hi: u64) -> Vec<u64> {
    let lo = lo.max(2);
    if lo > hi {
        return Vec::new();
    }
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p > hi {
            break;
        }
        let first = (p * p).max(lo.div_ceil(p) * p);
        let mut m = first;
        while m <= hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| lo + i as u64)
        .collect()
}

/// Streaming iterator over the primes of [lo, hi], one segment in memory.
pub struct SegmentedPrimes {
    base: Vec<u64>,
    segments: std::vec::IntoIter<(u64, u64)>,
    current: std::vec::IntoIter<u64>,
}

impl Iterator for SegmentedPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if let Some(p) = self.current.next() {
                return Some(p);
            }
            let (lo, hi) = self.segments.next()?;
            self.current = sieve_segment(&self.base, lo, hi).into_iter();
        }
    }
}

pub fn sieve_primes(lo: u64, hi: u64) -> Result<SegmentedPrimes> {
    sieve_primes_with(lo, hi, &SieveConfig::default())
}

pub fn sieve_primes_with(lo: u64, hi: u64, config: &SieveConfig) -> Result<SegmentedPrimes> {
    config.check(hi)?;
    let lo = lo.max(2);
    let segments = if lo <= hi {
        config.segments(lo, hi)
    } else {
        Vec::new()
    };
    Ok(SegmentedPrimes {
        base: small_primes(isqrt(hi)),
        segments: segments.into_iter(),
        current: Vec::new().into_iter(),
    })
}

/// `count` prime ideals of norm `norm = p^f` lie above `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormEvent {
    pub p: u64,
    pub norm: u64,
    pub count: u32,
}

/// Appends the events for the prime `p` (norms ≤ `bound`) to `out`, one per
/// distinct inertia degree. Returns whether the splitting at p is verified.
pub fn prime_events(field: &FieldSpec, p: u64, bound: u64, out: &mut Vec<NormEvent>) -> bool {
    if p > bound {
        return true;
    }
    let st = splitting_type(field, p);
    let start = out.len();
    for factor in &st.factors {
        let Some(norm) = p.checked_pow(factor.f).filter(|&n| n <= bound) else {
            continue;
        };
        match out[start..].iter_mut().find(|ev| ev.norm == norm) {
            Some(ev) => ev.count += factor.count,
            None => out.push(NormEvent {
                p,
                norm,
                count: factor.count,
            }),
        }
    }
    st.verified
}

/// Everything needed to enumerate N(𝔭) ≤ x segment by segment.
#[derive(Clone, Debug)]
pub struct NormSieve<'a> {
    field: &'a FieldSpec,
    bound: u64,
    base: Vec<u64>,
    config: SieveConfig,
}

/// Events of one prime segment plus the number of unverified primes in it.
#[derive(Clone, Debug, Default)]
pub struct SegmentEvents {
    pub events: Vec<NormEvent>,
    pub unverified_primes: u64,
}

impl<'a> NormSieve<'a> {
    pub fn new(field: &'a FieldSpec, bound: u64, config: SieveConfig) -> Result<Self> {
        config.check(bound)?;
        Ok(Self {
            field,
            bound,
            base: small_primes(isqrt(bound)),
            config,
        })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn field(&self) -> &FieldSpec {
        self.field
    }

    pub fn segments(&self) -> Vec<(u64, u64)> {
        if self.bound < 2 {
            return Vec::new();
        }
        self.config.segments(2, self.bound)
    }

    /// Events for the primes of one segment, in ascending p.
    pub fn segment_events(&self, lo: u64, hi: u64) -> SegmentEvents {
        let mut out = SegmentEvents::default();
        for p in sieve_segment(&self.base, lo, hi) {
            if !prime_events(self.field, p, self.bound, &mut out.events) {
                out.unverified_primes += 1;
            }
        }
        out
    }
}

/// Sequential stream of [`NormEvent`]s for N(𝔭) ≤ x in ascending p.
pub struct NormStream<'a> {
    sieve: NormSieve<'a>,
    segments: std::vec::IntoIter<(u64, u64)>,
    buffer: std::vec::IntoIter<NormEvent>,
    unverified_primes: u64,
}

impl NormStream<'_> {
    /// Unverified primes seen so far.
    pub fn unverified_primes(&self) -> u64 {
        self.unverified_primes
    }
}

impl Iterator for NormStream<'_> {
    type Item = NormEvent;

    fn next(&mut self) -> Option<NormEvent> {
        loop {
            if let Some(ev) = self.buffer.next() {
                return Some(ev);
            }
            let (lo, hi) = self.segments.next()?;
            let seg = self.sieve.segment_events(lo, hi);
            self.unverified_primes += seg.unverified_primes;
            self.buffer = seg.events.into_iter();
        }
    }
}

pub fn norm_stream<T: Real>(field: &FieldSpec, x: T) -> Result<NormStream<'_>> {
    norm_stream_with(field, x, SieveConfig::default())
}

pub fn norm_stream_with<T: Real>(
    field: &FieldSpec,
    x: T,
    config: SieveConfig,
) -> Result<NormStream<'_>> {
    if !(x >= T::lit(2.0)) {
        return Err(Error::InvalidInput(format!("norm threshold must be >= 2, got {x}")));
    }
    let sieve = NormSieve::new(field, threshold_floor(x), config)?;
    let segments = sieve.segments().into_iter();
    Ok(NormStream {
        sieve,
        segments,
        buffer: Vec::new().into_iter(),
        unverified_primes: 0,
    })
}

/// π_K(x), the number of prime ideals of norm ≤ x.
pub fn prime_ideal_count<T: Real>(field: &FieldSpec, x: T) -> Result<u64> {
    Ok(norm_stream(field, x)?.map(|ev| ev.count as u64).sum())
}
