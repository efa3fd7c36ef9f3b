//! The Riemann-Roch space L(Q) = GF(q) ⊕ V of the quadratic place Q of
//! p(u) = u² + au + b, with ordered basis (1, 1/p(u), u/p(u)), the linear
//! action of powers of σ on it, and the partition of V \ {0} into q-1
//! classes of size q+1.

use crate::error::{Error, Result};
use crate::fq2::QuadraticModulus;
use crate::gf2n::{FieldContext, FieldElement};
use crate::mobius::{sigma_from_modulus, MobiusMap, ProjectivePoint};

/// (c0 + c1·u) / p(u).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VElement {
    pub c0: FieldElement,
    pub c1: FieldElement,
}

impl VElement {
    pub fn new(c0: FieldElement, c1: FieldElement) -> Self {
        VElement { c0, c1 }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    /// Position in the (c1, c0) lexicographic sweep.
    #[inline]
    pub fn index(&self, q: u32) -> usize {
        self.c1.bits() as usize * q as usize + self.c0.bits() as usize
    }

    pub fn from_index(idx: usize, q: u32) -> Self {
        VElement {
            c0: FieldElement::from_raw((idx % q as usize) as u32),
            c1: FieldElement::from_raw((idx / q as usize) as u32),
        }
    }
}

/// c + (c0 + c1·u) / p(u).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct LQElement {
    pub c: FieldElement,
    pub v: VElement,
}

impl LQElement {
    pub fn from_v(v: VElement) -> Self {
        LQElement {
            c: FieldElement::ZERO,
            v,
        }
    }

    fn coords(&self) -> [FieldElement; 3] {
        [self.c, self.v.c0, self.v.c1]
    }

    fn from_coords(x: [FieldElement; 3]) -> Self {
        LQElement {
            c: x[0],
            v: VElement { c0: x[1], c1: x[2] },
        }
    }
}

impl std::ops::Add for LQElement {
    type Output = LQElement;
    fn add(self, rhs: LQElement) -> LQElement {
        LQElement {
            c: self.c + rhs.c,
            v: VElement {
                c0: self.v.c0 + rhs.v.c0,
                c1: self.v.c1 + rhs.v.c1,
            },
        }
    }
}

/// Linear action on L(Q) in the basis (1, 1/p, u/p). `cols[k]` holds the
/// coordinates of the image of the k-th basis vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaMatrix {
    pub cols: [[FieldElement; 3]; 3],
}

impl SigmaMatrix {
    pub fn identity() -> Self {
        let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
        SigmaMatrix {
            cols: [[o, z, z], [z, o, z], [z, z, o]],
        }
    }

    pub fn apply(&self, x: LQElement, ctx: &FieldContext) -> LQElement {
        let x = x.coords();
        let mut out = [FieldElement::ZERO; 3];
        for (k, col) in self.cols.iter().enumerate() {
            if x[k].is_zero() {
                continue;
            }
            for r in 0..3 {
                out[r] += ctx.mul(col[r], x[k]);
            }
        }
        LQElement::from_coords(out)
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn mul(&self, other: &SigmaMatrix, ctx: &FieldContext) -> SigmaMatrix {
        let mut cols = [[FieldElement::ZERO; 3]; 3];
        for (k, col) in other.cols.iter().enumerate() {
            cols[k] = self.apply(LQElement::from_coords(*col), ctx).coords();
        }
        SigmaMatrix { cols }
    }

    pub fn determinant(&self, ctx: &FieldContext) -> FieldElement {
        let m = |r: usize, c: usize| self.cols[c][r];
        let t = |x, y, z| ctx.mul(ctx.mul(x, y), z);
        t(m(0, 0), m(1, 1), m(2, 2))
            + t(m(0, 0), m(1, 2), m(2, 1))
            + t(m(0, 1), m(1, 0), m(2, 2))
            + t(m(0, 1), m(1, 2), m(2, 0))
            + t(m(0, 2), m(1, 0), m(2, 1))
            + t(m(0, 2), m(1, 1), m(2, 0))
    }
}

/// Scalar λ with N(u) = λ·p(u), where N(u) = p(σᵏ(u))·(c_k u + d_k)².
pub fn place_scalar(p: &QuadraticModulus, m: &MobiusMap) -> Result<FieldElement> {
    let ctx = p.ctx();
    let (ak, bk, ck, dk) = (m.m00, m.m01, m.m10, m.m11);
    let (a, b) = (p.a(), p.b());
    let sq = |x| ctx.square(x);
    // (ak u + bk)² + a(ak u + bk)(ck u + dk) + b(ck u + dk)²
    let n2 = sq(ak) + ctx.mul(a, ctx.mul(ak, ck)) + ctx.mul(b, sq(ck));
    let n1 = ctx.mul(a, ctx.mul(ak, dk) + ctx.mul(bk, ck));
    let n0 = sq(bk) + ctx.mul(a, ctx.mul(bk, dk)) + ctx.mul(b, sq(dk));
    let lambda = n2;
    if lambda.is_zero() || n1 != ctx.mul(lambda, a) || n0 != ctx.mul(lambda, b) {
        return Err(Error::PlaceNotFixed);
    }
    Ok(lambda)
}

/// Matrix of f(u) ↦ f(M(u)) on L(Q) for a map M that fixes Q.
pub fn lq_action_matrix(p: &QuadraticModulus, m: &MobiusMap) -> Result<SigmaMatrix> {
    let ctx = p.ctx();
    let lambda_inv = ctx.inv(place_scalar(p, m)?)?;
    let (ak, bk, ck, dk) = (m.m00, m.m01, m.m10, m.m11);
    let (a, b) = (p.a(), p.b());
    // λ⁻¹ (n2 u² + n1 u + n0) / p  =  λ⁻¹ [ n2 + ((n1 + n2 a) u + (n0 + n2 b)) / p ]
    let decompose = |n2: FieldElement, n1: FieldElement, n0: FieldElement| {
        [
            ctx.mul(lambda_inv, n2),
            ctx.mul(lambda_inv, n0 + ctx.mul(n2, b)),
            ctx.mul(lambda_inv, n1 + ctx.mul(n2, a)),
        ]
    };
    // 1/p ↦ (ck u + dk)² / (λ p)
    let img_inv_p = decompose(ctx.square(ck), FieldElement::ZERO, ctx.square(dk));
    // u/p ↦ (ak u + bk)(ck u + dk) / (λ p)
    let img_u_p = decompose(
        ctx.mul(ak, ck),
        ctx.mul(ak, dk) + ctx.mul(bk, ck),
        ctx.mul(bk, dk),
    );
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    Ok(SigmaMatrix {
        cols: [[o, z, z], img_inv_p, img_u_p],
    })
}

/// The σ-action on L(Q) for a primitive quadratic.
#[derive(Clone, Debug)]
pub struct LqAction {
    p: QuadraticModulus,
    sigma: SigmaMatrix,
}

impl LqAction {
    pub fn new(p: &QuadraticModulus) -> Result<Self> {
        let sigma = lq_action_matrix(p, &sigma_from_modulus(p)?)?;
        Ok(LqAction {
            p: p.clone(),
            sigma,
        })
    }

    pub fn modulus(&self) -> &QuadraticModulus {
        &self.p
    }

    pub fn sigma(&self) -> &SigmaMatrix {
        &self.sigma
    }

    /// The V-parts w_0 = z, w_1, ..., w_q of σⁱ(z) for i = 0..=q.
    pub fn orbit_of(&self, z: VElement) -> Result<Vec<VElement>> {
        if z.is_zero() {
            return Err(Error::PartitionFailure(
                "orbit of the zero element requested".into(),
            ));
        }
        let ctx = self.p.ctx();
        let q = ctx.q() as usize;
        let mut out = Vec::with_capacity(q + 1);
        let mut w = z;
        out.push(w);
        for _ in 0..q {
            // Constants are fixed, so the V-part of σ(c + w) is the V-part of σ(w).
            w = self.sigma.apply(LQElement::from_v(w), ctx).v;
            out.push(w);
        }
        let mut seen: Vec<usize> = out.iter().map(|v| v.index(ctx.q())).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::PartitionFailure(format!(
                "orbit of {z:?} has repeated members"
            )));
        }
        Ok(out)
    }
}

/// The q+1 members of the class of `z`, in σ-power order.
pub fn sigma_orbit_of(z: VElement, p: &QuadraticModulus) -> Result<Vec<VElement>> {
    LqAction::new(p)?.orbit_of(z)
}

/// Partition of V \ {0} under z₁ ~ z₂ ⇔ z₁ + σᵗ(z₂) ∈ GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivClassSet {
    /// Canonical representatives, the (c1, c0)-lexicographic minimum of each class.
    pub reps: Vec<VElement>,
    /// Representative index for every element, indexed by [`VElement::index`];
    /// `u32::MAX` at the zero element.
    pub class_of: Vec<u32>,
}

impl EquivClassSet {
    pub fn class_index(&self, z: VElement, q: u32) -> Option<usize> {
        match self.class_of[z.index(q)] {
            u32::MAX => None,
            i => Some(i as usize),
        }
    }
}

pub fn enumerate_classes(p: &QuadraticModulus) -> Result<EquivClassSet> {
    let action = LqAction::new(p)?;
    let q = p.ctx().q();
    let total = q as usize * q as usize;
    let mut class_of = vec![u32::MAX; total];
    let mut reps = Vec::with_capacity(q as usize - 1);
    for idx in 1..total {
        if class_of[idx] != u32::MAX {
            continue;
        }
        let z = VElement::from_index(idx, q);
        let class = reps.len() as u32;
        for w in action.orbit_of(z)? {
            let slot = &mut class_of[w.index(q)];
            if *slot != u32::MAX {
                return Err(Error::PartitionFailure(format!(
                    "{w:?} lies in two classes"
                )));
            }
            *slot = class;
        }
        reps.push(z);
    }
    if reps.len() != q as usize - 1 {
        return Err(Error::PartitionFailure(format!(
            "expected {} classes, found {}",
            q - 1,
            reps.len()
        )));
    }
    Ok(EquivClassSet { reps, class_of })
}

/// z(P): (c0 + c1·α)/p(α) at a finite place, 0 at infinity.
pub fn evaluate_v(z: VElement, point: ProjectivePoint, p: &QuadraticModulus) -> FieldElement {
    match point {
        ProjectivePoint::Infinity => FieldElement::ZERO,
        ProjectivePoint::Finite(alpha) => {
            let ctx = p.ctx();
            let den = p.eval(alpha);
            assert!(!den.is_zero(), "irreducible p has no root in GF(q)");
            ctx.mul(z.c0 + ctx.mul(z.c1, alpha), ctx.inv(den).unwrap())
        }
    }
}

/// Value of c + v at a rational place.
pub fn evaluate_lq(f: LQElement, point: ProjectivePoint, p: &QuadraticModulus) -> FieldElement {
    f.c + evaluate_v(f.v, point, p)
}
