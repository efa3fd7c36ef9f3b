//! Quadratic polynomials x^2 + ax + b over GF(q) and the extension
//! GF(q^2) = GF(q)[x]/(x^2 + ax + b) used to test primitivity.

use crate::error::{Error, Result};
use crate::gf2n::{FieldContext, FieldElement};

/// The quadratic p(x) = x^2 + ax + b over GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticModulus {
    ctx: FieldContext,
    a: FieldElement,
    b: FieldElement,
}

/// Residue c0 + c1·t in GF(q)[x]/(p), t the class of x.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Fq2Element {
    pub c0: FieldElement,
    pub c1: FieldElement,
}

impl Fq2Element {
    pub const ONE: Fq2Element = Fq2Element {
        c0: FieldElement::ONE,
        c1: FieldElement::ZERO,
    };
    /// The class of x.
    pub const ROOT: Fq2Element = Fq2Element {
        c0: FieldElement::ZERO,
        c1: FieldElement::ONE,
    };
}

impl QuadraticModulus {
    /// Wraps (a, b) without checking irreducibility.
    pub fn new(ctx: &FieldContext, a: FieldElement, b: FieldElement) -> Result<Self> {
        ctx.element(a.bits())?;
        ctx.element(b.bits())?;
        Ok(QuadraticModulus {
            ctx: ctx.clone(),
            a,
            b,
        })
    }

    /// Wraps (a, b) and requires p to be primitive irreducible.
    pub fn new_primitive(ctx: &FieldContext, a: FieldElement, b: FieldElement) -> Result<Self> {
        let p = Self::new(ctx, a, b)?;
        if !p.is_primitive()? {
            return Err(Error::NotPrimitive {
                a: a.bits(),
                b: b.bits(),
            });
        }
        Ok(p)
    }

    #[inline]
    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    #[inline]
    pub fn a(&self) -> FieldElement {
        self.a
    }

    #[inline]
    pub fn b(&self) -> FieldElement {
        self.b
    }

    /// p(α) = α^2 + aα + b.
    pub fn eval(&self, alpha: FieldElement) -> FieldElement {
        let ctx = &self.ctx;
        ctx.mul(alpha, alpha + self.a) + self.b
    }

    /// In characteristic 2, x^2 + ax + b (a != 0) has a root in GF(q) iff
    /// Tr(b/a^2) = 0.
    pub fn is_irreducible(&self) -> bool {
        if self.a.is_zero() {
            return false;
        }
        let ctx = &self.ctx;
        let a2_inv = ctx.inv(ctx.square(self.a)).expect("a is nonzero");
        ctx.trace(ctx.mul(self.b, a2_inv)) == 1
    }

    pub fn fq2_mul(&self, u: Fq2Element, v: Fq2Element) -> Fq2Element {
        let ctx = &self.ctx;
        // t^2 = a t + b
        let hi = ctx.mul(u.c1, v.c1);
        Fq2Element {
            c0: ctx.mul(u.c0, v.c0) + ctx.mul(hi, self.b),
            c1: ctx.mul(u.c0, v.c1) + ctx.mul(u.c1, v.c0) + ctx.mul(hi, self.a),
        }
    }

    pub fn fq2_pow(&self, u: Fq2Element, mut e: u64) -> Fq2Element {
        let mut base = u;
        let mut acc = Fq2Element::ONE;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.fq2_mul(acc, base);
            }
            base = self.fq2_mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// True iff the root of p has order q^2 - 1 in GF(q^2). Errors on a
    /// reducible p whose constant term is primitive.
    pub fn is_primitive(&self) -> Result<bool> {
        // The norm of the root is b, so a primitive root forces b primitive.
        // This is checked first: x^2 + x + 1 over GF(4) splits but is simply
        // not primitive.
        if self.b.is_zero() || !self.ctx.is_primitive_element(self.b)? {
            return Ok(false);
        }
        if !self.is_irreducible() {
            return Err(Error::Reducible {
                a: self.a.bits(),
                b: self.b.bits(),
            });
        }
        let q = self.ctx.q() as u64;
        let order = q * q - 1;
        Ok(self
            .ctx
            .factorization_q2m1()
            .iter()
            .all(|&(r, _)| self.fq2_pow(Fq2Element::ROOT, order / r) != Fq2Element::ONE))
    }
}

/// First primitive quadratic in the fixed search order: b over primitive
/// elements by increasing encoding, then a over nonzero elements.
pub fn find_primitive_quadratic(ctx: &FieldContext) -> QuadraticModulus {
    for b in ctx.elements().skip(1) {
        if !ctx.is_primitive_element(b).expect("b is nonzero") {
            continue;
        }
        for a in ctx.elements().skip(1) {
            let p = QuadraticModulus {
                ctx: ctx.clone(),
                a,
                b,
            };
            if p.is_irreducible() && p.is_primitive().expect("checked irreducible") {
                return p;
            }
        }
    }
    unreachable!("phi(q^2-1)/2 > 0 primitive quadratics exist")
}

/// Every primitive quadratic over GF(q), in search order.
pub fn all_primitive_quadratics(ctx: &FieldContext) -> Vec<QuadraticModulus> {
    let mut out = Vec::new();
    for b in ctx.elements().skip(1) {
        if !ctx.is_primitive_element(b).expect("b is nonzero") {
            continue;
        }
        for a in ctx.elements().skip(1) {
            let p = QuadraticModulus {
                ctx: ctx.clone(),
                a,
                b,
            };
            if p.is_irreducible() && p.is_primitive().expect("checked irreducible") {
                out.push(p);
            }
        }
    }
    out
}
