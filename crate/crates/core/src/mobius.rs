//! Möbius maps over GF(q), the order-(q+1) automorphism σ of GF(q)(u)
//! attached to a primitive quadratic, and the cyclic orbit of rational
//! places P_0, ..., P_q on the projective line.

use std::fmt;

use crate::error::{Error, Result};
use crate::fq2::QuadraticModulus;
use crate::gf2n::{FieldContext, FieldElement};

/// u ↦ (m00·u + m01) / (m10·u + m11).
///
/// Coefficients are stored as computed (not normalized) so that the power
/// recursion keeps its literal coefficients; use [`MobiusMap::canonical`] or
/// [`MobiusMap::projectively_eq`] for PGL₂ comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MobiusMap {
    pub m00: FieldElement,
    pub m01: FieldElement,
    pub m10: FieldElement,
    pub m11: FieldElement,
}

/// A point of P¹(GF(q)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjectivePoint {
    Finite(FieldElement),
    Infinity,
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectivePoint::Finite(x) => write!(f, "{x}"),
            ProjectivePoint::Infinity => f.write_str("inf"),
        }
    }
}

impl ProjectivePoint {
    /// Index in 0..=q: finite points by encoding, infinity last.
    pub fn index(self, q: u32) -> usize {
        match self {
            ProjectivePoint::Finite(x) => x.bits() as usize,
            ProjectivePoint::Infinity => q as usize,
        }
    }
}

impl MobiusMap {
    pub const IDENTITY: MobiusMap = MobiusMap {
        m00: FieldElement::ONE,
        m01: FieldElement::ZERO,
        m10: FieldElement::ZERO,
        m11: FieldElement::ONE,
    };

    pub fn new(m00: FieldElement, m01: FieldElement, m10: FieldElement, m11: FieldElement) -> Self {
        MobiusMap { m00, m01, m10, m11 }
    }

    pub fn coefficients(&self) -> [FieldElement; 4] {
        [self.m00, self.m01, self.m10, self.m11]
    }

    pub fn determinant(&self, ctx: &FieldContext) -> FieldElement {
        ctx.mul(self.m00, self.m11) + ctx.mul(self.m01, self.m10)
    }

    /// Matrix product `self · other`, i.e. u ↦ self(other(u)).
    pub fn compose(&self, other: &MobiusMap, ctx: &FieldContext) -> MobiusMap {
        let (a, b, c, d) = (self.m00, self.m01, self.m10, self.m11);
        let (e, f, g, h) = (other.m00, other.m01, other.m10, other.m11);
        MobiusMap {
            m00: ctx.mul(a, e) + ctx.mul(b, g),
            m01: ctx.mul(a, f) + ctx.mul(b, h),
            m10: ctx.mul(c, e) + ctx.mul(d, g),
            m11: ctx.mul(c, f) + ctx.mul(d, h),
        }
    }

    /// M_{k+1} from M_k and M_1:
    /// a' = a1·a + c1·b, b' = b1·a + d1·b, c' = a1·c + c1·d, d' = b1·c + d1·d.
    pub fn power_step(&self, first: &MobiusMap, ctx: &FieldContext) -> MobiusMap {
        let (ak, bk, ck, dk) = (self.m00, self.m01, self.m10, self.m11);
        let (a1, b1, c1, d1) = (first.m00, first.m01, first.m10, first.m11);
        MobiusMap {
            m00: ctx.mul(a1, ak) + ctx.mul(c1, bk),
            m01: ctx.mul(b1, ak) + ctx.mul(d1, bk),
            m10: ctx.mul(a1, ck) + ctx.mul(c1, dk),
            m11: ctx.mul(b1, ck) + ctx.mul(d1, dk),
        }
    }

    /// Scaled so the first nonzero coefficient (m00, m01, m10, m11) is 1.
    pub fn canonical(&self, ctx: &FieldContext) -> MobiusMap {
        let lead = self
            .coefficients()
            .into_iter()
            .find(|c| !c.is_zero())
            .expect("Mobius map with all-zero coefficients");
        let s = ctx.inv(lead).expect("nonzero lead");
        MobiusMap {
            m00: ctx.mul(s, self.m00),
            m01: ctx.mul(s, self.m01),
            m10: ctx.mul(s, self.m10),
            m11: ctx.mul(s, self.m11),
        }
    }

    /// Equality in PGL₂(q).
    pub fn projectively_eq(&self, other: &MobiusMap, ctx: &FieldContext) -> bool {
        self.canonical(ctx) == other.canonical(ctx)
    }

    /// True iff the matrix is a nonzero scalar multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.m01.is_zero() && self.m10.is_zero() && self.m00 == self.m11 && !self.m00.is_zero()
    }

    /// Least k >= 1 with M^k scalar.
    pub fn order(&self, ctx: &FieldContext) -> u64 {
        let mut acc = *self;
        let mut k = 1u64;
        // Element orders in PGL₂(2^n) divide q-1, q+1 or 2.
        let limit = ctx.q() as u64 + 1;
        while !acc.is_scalar() {
            acc = acc.compose(self, ctx);
            k += 1;
            assert!(k <= limit, "order exceeds q+1; map is singular");
        }
        k
    }

    pub fn apply(&self, point: ProjectivePoint, ctx: &FieldContext) -> ProjectivePoint {
        match point {
            ProjectivePoint::Finite(x) => {
                let num = ctx.mul(self.m00, x) + self.m01;
                let den = ctx.mul(self.m10, x) + self.m11;
                if den.is_zero() {
                    ProjectivePoint::Infinity
                } else {
                    ProjectivePoint::Finite(ctx.mul(num, ctx.inv(den).unwrap()))
                }
            }
            ProjectivePoint::Infinity => {
                if self.m10.is_zero() {
                    ProjectivePoint::Infinity
                } else {
                    ProjectivePoint::Finite(ctx.mul(self.m00, ctx.inv(self.m10).unwrap()))
                }
            }
        }
    }
}

/// σ(u) = (a⁻¹b·u + b) / (u + a + a⁻¹b).
pub fn sigma_from_modulus(p: &QuadraticModulus) -> Result<MobiusMap> {
    let ctx = p.ctx();
    if p.a().is_zero() {
        return Err(Error::Reducible {
            a: 0,
            b: p.b().bits(),
        });
    }
    let a_inv_b = ctx.mul(ctx.inv(p.a())?, p.b());
    Ok(MobiusMap::new(
        a_inv_b,
        p.b(),
        FieldElement::ONE,
        p.a() + a_inv_b,
    ))
}

/// M_0 = I, M_1 = σ, ..., M_q via the power recursion.
pub fn sigma_powers(p: &QuadraticModulus) -> Result<Vec<MobiusMap>> {
    let ctx = p.ctx();
    let sigma = sigma_from_modulus(p)?;
    let q = ctx.q() as usize;
    let mut out = Vec::with_capacity(q + 1);
    out.push(MobiusMap::IDENTITY);
    for k in 0..q {
        let next = out[k].power_step(&sigma, ctx);
        out.push(next);
    }
    Ok(out)
}

/// P_j = σ^j(P_0) with P_0 the zero of u: P_j is the zero of σ^j(u),
/// i.e. u = b_j / a_j (char 2), or the infinite place when a_j = 0.
pub fn place_orbit(p: &QuadraticModulus) -> Result<Vec<ProjectivePoint>> {
    let ctx = p.ctx();
    let powers = sigma_powers(p)?;
    let orbit: Vec<ProjectivePoint> = powers
        .iter()
        .map(|m| {
            if m.m00.is_zero() {
                ProjectivePoint::Infinity
            } else {
                ProjectivePoint::Finite(ctx.mul(m.m01, ctx.inv(m.m00).unwrap()))
            }
        })
        .collect();
    let q = ctx.q();
    let mut seen = vec![false; q as usize + 1];
    for (j, pt) in orbit.iter().enumerate() {
        let idx = pt.index(q);
        if seen[idx] {
            return Err(Error::OrbitNotBijective(format!(
                "P_{j} = {pt} repeats an earlier place"
            )));
        }
        seen[idx] = true;
    }
    Ok(orbit)
}
