//! m-sequences from a Fibonacci LFSR and Gold families for odd n, used as
//! the comparison baseline.

use crate::error::{Error, Result};
use crate::family::BinarySequence;
use crate::gf2n::{is_irreducible_gf2, poly_degree, FieldContext};

/// Feedback polynomial x^n + Σ c_i x^i (bit i = c_i) and initial state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LfsrSpec {
    pub n: u32,
    pub taps: u32,
    pub seed: u32,
}

impl LfsrSpec {
    /// Smallest-encoding primitive polynomial of degree `n`, seed 1.
    pub fn default_for(n: u32) -> Result<Self> {
        Ok(LfsrSpec {
            n,
            taps: default_taps(n)?,
            seed: 1,
        })
    }
}

/// True iff `taps` is a primitive polynomial of degree `n` over GF(2).
pub fn is_primitive_gf2(taps: u32, n: u32) -> bool {
    if poly_degree(taps as u64) != Some(n) || !is_irreducible_gf2(taps as u64) {
        return false;
    }
    let ctx = FieldContext::new(n, Some(taps)).expect("irreducible of degree n");
    // x is the class of the root
    let x = ctx.element(if n == 1 { 1 } else { 2 }).unwrap();
    ctx.is_primitive_element(x).unwrap()
}

pub fn default_taps(n: u32) -> Result<u32> {
    if !(1..=16).contains(&n) {
        return Err(Error::InvalidLfsr(format!(
            "degree {n} out of range 1..=16"
        )));
    }
    Ok(((1u32 << n)..(1u32 << (n + 1)))
        .find(|&t| is_primitive_gf2(t, n))
        .expect("primitive polynomials exist in every degree"))
}

/// Output bits s_0, s_1, ... with s_{k+n} = Σ c_i s_{k+i}; the seed supplies
/// s_0..s_{n-1} (bit i = s_i).
pub fn lfsr_bits(spec: &LfsrSpec, count: usize) -> Vec<u8> {
    let n = spec.n;
    let mask = (1u32 << n) - 1;
    let feedback = spec.taps & mask;
    let mut state = spec.seed & mask;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push((state & 1) as u8);
        let fb = (state & feedback).count_ones() & 1;
        state = (state >> 1) | (fb << (n - 1));
    }
    out
}

/// One period of the m-sequence as ±1 values (bit 1 ↦ -1). Fails unless the
/// state returns to the seed after exactly 2^n - 1 steps.
pub fn m_sequence(spec: &LfsrSpec) -> Result<BinarySequence> {
    let n = spec.n;
    if !(1..=16).contains(&n) || poly_degree(spec.taps as u64) != Some(n) {
        return Err(Error::InvalidLfsr(format!(
            "taps {:#x} do not have degree {n}",
            spec.taps
        )));
    }
    let mask = (1u32 << n) - 1;
    if spec.seed & mask == 0 || spec.seed > mask {
        return Err(Error::InvalidLfsr(format!(
            "seed {:#x} must be a nonzero {n}-bit state",
            spec.seed
        )));
    }
    let period = (1usize << n) - 1;
    let feedback = spec.taps & mask;
    let mut state = spec.seed;
    for step in 1..=period {
        let fb = (state & feedback).count_ones() & 1;
        state = (state >> 1) | (fb << (n - 1));
        if state == spec.seed && step != period {
            return Err(Error::InvalidLfsr(format!(
                "taps {:#x} give period {step}, not {period}",
                spec.taps
            )));
        }
    }
    if state != spec.seed {
        return Err(Error::InvalidLfsr(format!(
            "taps {:#x} are not primitive",
            spec.taps
        )));
    }
    Ok(BinarySequence::from_bits(&lfsr_bits(spec, period)))
}

/// Gold family from the preferred pair (u, u decimated by 2^k + 1).
#[derive(Clone, Debug)]
pub struct GoldFamily {
    pub n: u32,
    pub k: u32,
    pub lfsr: LfsrSpec,
    pub u: BinarySequence,
    pub v: BinarySequence,
    /// u, v, then u ⊕ shift_t(v) for t = 0..N-1.
    pub sequences: Vec<BinarySequence>,
}

/// Three-valued Gold correlation peak 1 + 2^((n+1)/2).
pub fn gold_bound(n: u32) -> u32 {
    1 + (1u32 << n.div_ceil(2))
}

pub fn gold_family(n: u32) -> Result<GoldFamily> {
    if n.is_multiple_of(2) || !(3..=15).contains(&n) {
        return Err(Error::GoldDegree(n));
    }
    let lfsr = LfsrSpec::default_for(n)?;
    let u = m_sequence(&lfsr)?;
    let k = 1;
    let d = (1usize << k) + 1;
    let len = u.len();
    let ub = u.bits();
    let vb: Vec<u8> = (0..len).map(|i| ub[(d * i) % len]).collect();
    let v = BinarySequence::from_bits(&vb);
    let mut sequences = Vec::with_capacity(len + 2);
    sequences.push(u.clone());
    sequences.push(v.clone());
    for t in 0..len {
        let bits: Vec<u8> = (0..len).map(|i| ub[i] ^ vb[(i + t) % len]).collect();
        sequences.push(BinarySequence::from_bits(&bits));
    }
    Ok(GoldFamily {
        n,
        k,
        lfsr,
        u,
        v,
        sequences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::{autocorrelation, family_correlation, Method};

    #[test]
    fn degree3_m_sequence() {
        let spec = LfsrSpec {
            n: 3,
            taps: 0b1011,
            seed: 1,
        };
        let s = m_sequence(&spec).unwrap();
        assert_eq!(s.len(), 7);
        // period exactly 7: the state sequence first repeats after 7 steps
        let long = lfsr_bits(&spec, 14);
        assert_eq!(long[..7], long[7..]);
        assert!((1..7).all(|p| long[..7] != long[p..p + 7]));
    }

    #[test]
    fn m_sequence_properties() {
        for n in 2..=10 {
            let s = m_sequence(&LfsrSpec::default_for(n).unwrap()).unwrap();
            let ones = s.values().iter().filter(|&&v| v == -1).count();
            assert_eq!(ones, 1 << (n - 1));
            for t in 1..s.len() {
                assert_eq!(autocorrelation(&s, t).unwrap(), 1);
            }
        }
    }

    #[test]
    fn default_taps_small() {
        assert_eq!(default_taps(3).unwrap(), 0b1011);
        assert_eq!(default_taps(5).unwrap(), 0b100101);
        // x^4 + x^3 + x^2 + x + 1 is irreducible but has order 5
        assert!(!is_primitive_gf2(0b11111, 4));
        assert_eq!(default_taps(4).unwrap(), 0b10011);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(m_sequence(&LfsrSpec {
            n: 4,
            taps: 0b11111,
            seed: 1
        })
        .is_err());
        assert!(m_sequence(&LfsrSpec {
            n: 3,
            taps: 0b1011,
            seed: 0
        })
        .is_err());
        assert!(m_sequence(&LfsrSpec {
            n: 3,
            taps: 0b101,
            seed: 1
        })
        .is_err());
        assert!(matches!(gold_family(4), Err(Error::GoldDegree(4))));
        assert!(matches!(gold_family(1), Err(Error::GoldDegree(1))));
    }

    #[test]
    fn gold_families() {
        for n in [3u32, 5, 7] {
            let g = gold_family(n).unwrap();
            let len = (1usize << n) - 1;
            assert_eq!(g.sequences.len(), len + 2);
            assert!(g.sequences.iter().all(|s| s.len() == len));
            let r = family_correlation(&g.sequences, gold_bound(n), Method::Packed);
            assert_eq!(r.cor, gold_bound(n), "n={n}");
        }
        assert_eq!(gold_bound(3), 5);
        assert_eq!(gold_bound(5), 9);
    }
}
