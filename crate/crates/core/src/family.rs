//! Assembly of the family S = {s_i} of q-1 binary sequences of length q+1:
//! s_{i,j} = (-1)^Tr(z_i(P_j)) for class representatives z_i and the place
//! orbit P_0..P_q.

use rayon::prelude::*;

use crate::correlation::PackedSequence;
use crate::error::{Error, Result};
use crate::fq2::{find_primitive_quadratic, QuadraticModulus};
use crate::gf2n::{FieldContext, FieldElement};
use crate::mobius::{place_orbit, sigma_powers, ProjectivePoint};
use crate::riemann_roch::{enumerate_classes, evaluate_lq, lq_action_matrix, LQElement, VElement};

/// A ±1 sequence kept in both unpacked and bit-packed form
/// (bit 1 ⇔ value -1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinarySequence {
    values: Vec<i8>,
    packed: PackedSequence,
}

impl BinarySequence {
    /// From trace bits, 0 ↦ +1 and 1 ↦ -1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let values = bits
            .iter()
            .map(|&b| if b & 1 == 0 { 1 } else { -1 })
            .collect();
        BinarySequence {
            values,
            packed: PackedSequence::from_bits(bits),
        }
    }

    pub fn from_values(values: Vec<i8>) -> Result<Self> {
        if let Some(v) = values.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::Malformed(format!(
                "sequence entry {v} is not +1 or -1"
            )));
        }
        let bits: Vec<u8> = values.iter().map(|&v| (v < 0) as u8).collect();
        Ok(BinarySequence {
            values,
            packed: PackedSequence::from_bits(&bits),
        })
    }

    pub fn from_packed(packed: PackedSequence) -> Self {
        let values = (0..packed.len())
            .map(|i| if packed.bit(i) { -1 } else { 1 })
            .collect();
        BinarySequence { values, packed }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn packed(&self) -> &PackedSequence {
        &self.packed
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.packed.bit(i) as u8).collect()
    }
}

/// The family built for one primitive quadratic.
#[derive(Clone, Debug)]
pub struct SequenceFamily {
    pub modulus: QuadraticModulus,
    pub orbit: Vec<ProjectivePoint>,
    pub reps: Vec<VElement>,
    pub sequences: Vec<BinarySequence>,
    pub bound: u32,
}

impl SequenceFamily {
    pub fn ctx(&self) -> &FieldContext {
        self.modulus.ctx()
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn seq_length(&self) -> usize {
        self.orbit.len()
    }

    /// Σ_k (-1)^Tr((z_i + σ^{-t}(z_j))(P_k)), computed from the functions
    /// themselves rather than from the emitted bits. Its absolute value is
    /// C_t(s_i, s_j) (or A_t(s_i) when i = j).
    pub fn correlation_via_functions(&self, i: usize, j: usize, t: usize) -> i64 {
        let p = &self.modulus;
        let ctx = p.ctx();
        let period = self.orbit.len();
        let powers = sigma_powers(p).expect("family modulus is primitive");
        // σ^{-t} = σ^{q+1-t}
        let inv_power = &powers[(period - t % period) % period];
        let action = lq_action_matrix(p, inv_power).expect("powers of σ fix Q");
        let f =
            LQElement::from_v(self.reps[i]) + action.apply(LQElement::from_v(self.reps[j]), ctx);
        self.orbit
            .iter()
            .map(|&pt| {
                if ctx.trace(evaluate_lq(f, pt, p)) == 0 {
                    1i64
                } else {
                    -1
                }
            })
            .sum()
    }
}

/// ⌊2√q⌋ if odd, else ⌊2√q⌋ - 1, in exact integer arithmetic.
pub fn theoretical_bound(q: u64) -> u32 {
    let t = (4 * q).isqrt();
    (if t % 2 == 1 { t } else { t - 1 }) as u32
}

/// Precomputed 1/p(α_j) per place; `None` at infinity.
fn place_denominators(
    p: &QuadraticModulus,
    orbit: &[ProjectivePoint],
) -> Vec<Option<(FieldElement, FieldElement)>> {
    let ctx = p.ctx();
    orbit
        .iter()
        .map(|pt| match *pt {
            ProjectivePoint::Infinity => None,
            ProjectivePoint::Finite(alpha) => Some((
                alpha,
                ctx.inv(p.eval(alpha)).expect("p has no roots in GF(q)"),
            )),
        })
        .collect()
}

fn emit_with(
    z: VElement,
    dens: &[Option<(FieldElement, FieldElement)>],
    ctx: &FieldContext,
) -> BinarySequence {
    let bits: Vec<u8> = dens
        .iter()
        .map(|d| match *d {
            None => 0,
            Some((alpha, inv_den)) => ctx.trace(ctx.mul(z.c0 + ctx.mul(z.c1, alpha), inv_den)),
        })
        .collect();
    BinarySequence::from_bits(&bits)
}

/// s_j = (-1)^Tr(z(P_j)) for j = 0..=q.
pub fn emit_sequence(
    z: VElement,
    orbit: &[ProjectivePoint],
    p: &QuadraticModulus,
) -> BinarySequence {
    emit_with(z, &place_denominators(p, orbit), p.ctx())
}

/// Runs the whole pipeline: modulus search (or validation of a supplied
/// (a, b)), place orbit, class enumeration and sequence emission.
pub fn build_family(
    ctx: &FieldContext,
    ab: Option<(FieldElement, FieldElement)>,
) -> Result<SequenceFamily> {
    let modulus = match ab {
        Some((a, b)) => QuadraticModulus::new_primitive(ctx, a, b)?,
        None => find_primitive_quadratic(ctx),
    };
    let orbit = place_orbit(&modulus)?;
    let classes = enumerate_classes(&modulus)?;
    let dens = place_denominators(&modulus, &orbit);
    let sequences: Vec<BinarySequence> = classes
        .reps
        .par_iter()
        .map(|&z| emit_with(z, &dens, ctx))
        .collect();
    Ok(SequenceFamily {
        bound: theoretical_bound(ctx.q() as u64),
        modulus,
        orbit,
        reps: classes.reps,
        sequences,
    })
}
