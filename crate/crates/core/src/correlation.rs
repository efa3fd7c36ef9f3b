//! Periodic auto/cross-correlation, family correlation Cor(S) and balance.
//!
//! Two evaluation paths are provided: a naive ±1 sum (the oracle) and a
//! bit-packed path where C = |N - 2·wt(x ⊕ rot_t(y))|. Family reports from
//! either path must be identical.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::BinarySequence;

/// Trace bits packed LSB-first into 64-bit words. Bits past `len` are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PackedSequence {
    words: Vec<u64>,
    len: usize,
}

impl PackedSequence {
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        PackedSequence {
            words,
            len: bits.len(),
        }
    }

    pub fn from_words(mut words: Vec<u64>, len: usize) -> Result<Self> {
        if words.len() != len.div_ceil(64) {
            return Err(Error::Malformed(format!(
                "{} words cannot hold {len} bits",
                words.len()
            )));
        }
        if !len.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        Ok(PackedSequence { words, len })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// rot_t(y)[k] = y[(k + t) mod N].
    pub fn rotated(&self, t: usize) -> PackedSequence {
        let doubled = Doubled::new(self);
        let mut out = vec![0u64; self.words.len()];
        doubled.window(t, &mut out);
        PackedSequence {
            words: out,
            len: self.len,
        }
    }
}

/// y || y with one word of padding, for extracting cyclic windows.
struct Doubled {
    buf: Vec<u64>,
    len: usize,
    last_mask: u64,
}

impl Doubled {
    fn new(y: &PackedSequence) -> Self {
        let n = y.len;
        let mut buf = vec![0u64; (2 * n).div_ceil(64) + 1];
        buf[..y.words.len()].copy_from_slice(&y.words);
        let (wshift, bshift) = (n / 64, n % 64);
        for (i, &w) in y.words.iter().enumerate() {
            buf[i + wshift] |= w << bshift;
            if bshift != 0 {
                buf[i + wshift + 1] |= w >> (64 - bshift);
            }
        }
        let last_mask = if n.is_multiple_of(64) {
            u64::MAX
        } else {
            (1u64 << (n % 64)) - 1
        };
        Doubled {
            buf,
            len: n,
            last_mask,
        }
    }

    #[inline]
    fn window(&self, t: usize, out: &mut [u64]) {
        let (wshift, bshift) = (t / 64, t % 64);
        for (w, slot) in out.iter_mut().enumerate() {
            let lo = self.buf[w + wshift];
            *slot = if bshift == 0 {
                lo
            } else {
                (lo >> bshift) | (self.buf[w + wshift + 1] << (64 - bshift))
            };
        }
        if let Some(last) = out.last_mut() {
            *last &= self.last_mask;
        }
        debug_assert!(self.len == 0 || t < self.len);
    }
}

#[inline]
fn xor_weight(x: &[u64], y: &[u64]) -> u32 {
    x.iter().zip(y).map(|(a, b)| (a ^ b).count_ones()).sum()
}

#[inline]
fn signed_to_abs(len: usize, weight: u32) -> u32 {
    (len as i64 - 2 * weight as i64).unsigned_abs() as u32
}

/// A_t(s) = |Σ s_i s_{i+t}| for 1 <= t <= N-1.
pub fn autocorrelation(s: &BinarySequence, t: usize) -> Result<u32> {
    let n = s.len();
    if t == 0 || t >= n {
        return Err(Error::DelayOutOfRange { t, len: n });
    }
    Ok(signed_sum(s.values(), s.values(), t).unsigned_abs() as u32)
}

/// C_t(u, v) = |Σ u_i v_{i+t}| for 0 <= t <= N-1.
pub fn crosscorrelation(u: &BinarySequence, v: &BinarySequence, t: usize) -> Result<u32> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    if t >= u.len() {
        return Err(Error::DelayOutOfRange { t, len: u.len() });
    }
    Ok(signed_sum(u.values(), v.values(), t).unsigned_abs() as u32)
}

/// Σ u_i v_{(i+t) mod N} on the ±1 values.
pub fn signed_sum(u: &[i8], v: &[i8], t: usize) -> i64 {
    let n = u.len();
    (0..n).map(|i| (u[i] * v[(i + t) % n]) as i64).sum()
}

/// Packed-path correlation |N - 2·wt(x ⊕ rot_t(y))|.
pub fn packed_correlation(x: &PackedSequence, y: &PackedSequence, t: usize) -> Result<u32> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if t >= x.len() {
        return Err(Error::DelayOutOfRange { t, len: x.len() });
    }
    Ok(signed_to_abs(
        x.len(),
        xor_weight(&x.words, &y.rotated(t).words),
    ))
}

/// bal(s) = Σ s_i.
pub fn balance(s: &BinarySequence) -> i64 {
    s.values().iter().map(|&v| v as i64).sum()
}

/// Optimal balance: |bal| = 1 for odd N, bal = 0 for even N.
pub fn is_optimally_balanced(s: &BinarySequence) -> bool {
    let bal = balance(s).unsigned_abs();
    if s.len() % 2 == 1 {
        bal == 1
    } else {
        bal == 0
    }
}

pub fn balanced_count(seqs: &[BinarySequence]) -> usize {
    seqs.iter().filter(|s| is_optimally_balanced(s)).count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrKind {
    Auto,
    Cross,
}

/// Location of a correlation value: A_t(s_i) when kind = auto (i = j), or
/// C_t(s_i, s_j) with i < j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub kind: CorrKind,
    pub i: usize,
    pub j: usize,
    pub t: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// XOR + popcount on packed words.
    Packed,
    /// Direct ±1 summation.
    Naive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub length: usize,
    pub family_size: usize,
    pub max_auto: u32,
    pub max_cross: u32,
    pub cor: u32,
    pub bound: u32,
    pub argmax: Witness,
    pub balance_per_sequence: Vec<i64>,
    pub balanced_count: usize,
    /// Number of evaluated (sequence, pair, delay) positions per correlation value.
    pub spectrum: BTreeMap<u32, u64>,
}

impl CorrelationReport {
    pub fn within_bound(&self) -> bool {
        self.cor <= self.bound
    }

    pub fn all_values_odd(&self) -> bool {
        self.spectrum.keys().all(|v| v % 2 == 1)
    }

    pub fn balance_histogram(&self) -> BTreeMap<i64, usize> {
        let mut h = BTreeMap::new();
        for &b in &self.balance_per_sequence {
            *h.entry(b).or_insert(0) += 1;
        }
        h
    }
}

#[derive(Clone, Debug)]
struct Partial {
    best_auto: Option<(u32, Witness)>,
    best_cross: Option<(u32, Witness)>,
    counts: Vec<u64>,
}

impl Partial {
    fn new(len: usize) -> Self {
        Partial {
            best_auto: None,
            best_cross: None,
            counts: vec![0; len + 1],
        }
    }

    #[inline]
    fn record(&mut self, value: u32, w: Witness) {
        self.counts[value as usize] += 1;
        let slot = match w.kind {
            CorrKind::Auto => &mut self.best_auto,
            CorrKind::Cross => &mut self.best_cross,
        };
        if better(value, w, *slot) {
            *slot = Some((value, w));
        }
    }

    fn merge(&mut self, other: Partial) {
        for (slot, cand) in [
            (&mut self.best_auto, other.best_auto),
            (&mut self.best_cross, other.best_cross),
        ] {
            if let Some((v, w)) = cand {
                if better(v, w, *slot) {
                    *slot = Some((v, w));
                }
            }
        }
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }
}

/// Larger value wins; ties go to the lexicographically smallest witness.
#[inline]
fn better(value: u32, w: Witness, cur: Option<(u32, Witness)>) -> bool {
    match cur {
        None => true,
        Some((cv, cw)) => value > cv || (value == cv && w < cw),
    }
}

/// Cor(S) over autocorrelations at t = 1..N-1 and cross-correlations of
/// every unordered pair i < j at t = 0..N-1 (C_t(u,v) = C_{N-t}(v,u)
/// covers the ordered pairs).
pub fn family_correlation(
    seqs: &[BinarySequence],
    bound: u32,
    method: Method,
) -> CorrelationReport {
    assert!(
        !seqs.is_empty(),
        "family_correlation needs at least one sequence"
    );
    let len = seqs[0].len();
    assert!(
        seqs.iter().all(|s| s.len() == len),
        "sequences of unequal length"
    );

    let partials: Vec<Partial> = (0..seqs.len())
        .into_par_iter()
        .map(|j| match method {
            Method::Packed => column_packed(seqs, j),
            Method::Naive => column_naive(seqs, j),
        })
        .collect();

    let mut total = Partial::new(len);
    for p in partials {
        total.merge(p);
    }

    let (max_auto, auto_w) = total.best_auto.map_or((0, None), |(v, w)| (v, Some(w)));
    let (max_cross, cross_w) = total.best_cross.map_or((0, None), |(v, w)| (v, Some(w)));
    let argmax = match (auto_w, cross_w) {
        (Some(a), Some(c)) => {
            if max_cross > max_auto {
                c
            } else {
                a
            }
        }
        (Some(a), None) => a,
        (None, Some(c)) => c,
        // N = 1: no delays exist at all
        (None, None) => Witness {
            kind: CorrKind::Auto,
            i: 0,
            j: 0,
            t: 0,
        },
    };
    let balance_per_sequence: Vec<i64> = seqs.iter().map(balance).collect();
    CorrelationReport {
        length: len,
        family_size: seqs.len(),
        max_auto,
        max_cross,
        cor: max_auto.max(max_cross),
        bound,
        argmax,
        balanced_count: balanced_count(seqs),
        balance_per_sequence,
        spectrum: total
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(v, &c)| (v as u32, c))
            .collect(),
    }
}

/// All values involving sequence j as the delayed operand: A_t(s_j) and
/// C_t(s_i, s_j) for i < j.
fn column_packed(seqs: &[BinarySequence], j: usize) -> Partial {
    let len = seqs[j].len();
    let mut part = Partial::new(len);
    let doubled = Doubled::new(seqs[j].packed());
    let mut window = vec![0u64; seqs[j].packed().words.len()];
    for t in 0..len {
        doubled.window(t, &mut window);
        for (i, si) in seqs[..=j].iter().enumerate() {
            let kind = if i == j {
                CorrKind::Auto
            } else {
                CorrKind::Cross
            };
            if kind == CorrKind::Auto && t == 0 {
                continue;
            }
            let v = signed_to_abs(len, xor_weight(&si.packed().words, &window));
            part.record(v, Witness { kind, i, j, t });
        }
    }
    part
}

fn column_naive(seqs: &[BinarySequence], j: usize) -> Partial {
    let len = seqs[j].len();
    let mut part = Partial::new(len);
    for t in 0..len {
        for (i, si) in seqs[..=j].iter().enumerate() {
            if i == j {
                if t == 0 {
                    continue;
                }
                let v = autocorrelation(si, t).expect("delay in range");
                part.record(
                    v,
                    Witness {
                        kind: CorrKind::Auto,
                        i,
                        j,
                        t,
                    },
                );
            } else {
                let v = crosscorrelation(si, &seqs[j], t).expect("delay in range");
                part.record(
                    v,
                    Witness {
                        kind: CorrKind::Cross,
                        i,
                        j,
                        t,
                    },
                );
            }
        }
    }
    part
}
