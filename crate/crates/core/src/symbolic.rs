//! Reference rational-function arithmetic over GF(q), used as an oracle for
//! the matrix form of the σ-action on L(Q).
//!
//! σⁱ(u) is obtained by repeated substitution of σ(u) into a reduced
//! fraction, and σⁱ(z) by evaluating z at that fraction; nothing here uses
//! the power recursion or the 3×3 action matrix.

use crate::error::{Error, Result};
use crate::fq2::QuadraticModulus;
use crate::gf2n::{FieldContext, FieldElement};
use crate::mobius::sigma_from_modulus;
use crate::riemann_roch::{LQElement, VElement};

/// Dense polynomial, coefficient i of u^i, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<FieldElement>);

impl Poly {
    pub fn new(mut c: Vec<FieldElement>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: FieldElement) -> Self {
        Poly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.0.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    fn lead(&self) -> FieldElement {
        *self.0.last().expect("nonzero polynomial")
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        Poly::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Poly, ctx: &FieldContext) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &x) in self.0.iter().enumerate() {
            for (j, &y) in other.0.iter().enumerate() {
                out[i + j] += ctx.mul(x, y);
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: FieldElement, ctx: &FieldContext) -> Poly {
        Poly::new(self.0.iter().map(|&x| ctx.mul(x, s)).collect())
    }

    pub fn div_rem(&self, d: &Poly, ctx: &FieldContext) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = ctx.inv(d.lead()).unwrap();
        let mut rem = self.0.clone();
        let mut quo = vec![FieldElement::ZERO; self.0.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = ctx.mul(*rem.last().unwrap(), lead_inv);
            quo[k] = c;
            for (i, &x) in d.0.iter().enumerate() {
                rem[k + i] += ctx.mul(c, x);
            }
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(quo), Poly::new(rem))
    }

    pub fn gcd(&self, other: &Poly, ctx: &FieldContext) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b, ctx).1;
            a = b;
            b = r;
        }
        a
    }
}

/// num / den with den monic and gcd(num, den) = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    pub fn new(num: Poly, den: Poly, ctx: &FieldContext) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den, ctx);
        let (mut num, mut den) = if g.is_zero() {
            (num, den)
        } else {
            (num.div_rem(&g, ctx).0, den.div_rem(&g, ctx).0)
        };
        if num.is_zero() {
            den = Poly::constant(FieldElement::ONE);
        }
        let s = ctx.inv(den.lead()).unwrap();
        num = num.scale(s, ctx);
        den = den.scale(s, ctx);
        Rational { num, den }
    }

    pub fn constant(c: FieldElement) -> Self {
        Rational {
            num: Poly::constant(c),
            den: Poly::constant(FieldElement::ONE),
        }
    }

    pub fn u() -> Self {
        Rational {
            num: Poly::new(vec![FieldElement::ZERO, FieldElement::ONE]),
            den: Poly::constant(FieldElement::ONE),
        }
    }

    pub fn add(&self, o: &Rational, ctx: &FieldContext) -> Rational {
        let num = self.num.mul(&o.den, ctx).add(&o.num.mul(&self.den, ctx));
        Rational::new(num, self.den.mul(&o.den, ctx), ctx)
    }

    pub fn mul(&self, o: &Rational, ctx: &FieldContext) -> Rational {
        Rational::new(self.num.mul(&o.num, ctx), self.den.mul(&o.den, ctx), ctx)
    }

    pub fn div(&self, o: &Rational, ctx: &FieldContext) -> Rational {
        assert!(!o.num.is_zero(), "division by the zero function");
        Rational::new(self.num.mul(&o.den, ctx), self.den.mul(&o.num, ctx), ctx)
    }

    /// Evaluates the polynomial `f` at this fraction (Horner).
    pub fn eval_poly_at(f: &Poly, at: &Rational, ctx: &FieldContext) -> Rational {
        let mut acc = Rational::constant(FieldElement::ZERO);
        for i in (0..f.0.len()).rev() {
            acc = acc.mul(at, ctx).add(&Rational::constant(f.0[i]), ctx);
        }
        acc
    }

    /// self(at): substitutes the fraction `at` for u.
    pub fn compose(&self, at: &Rational, ctx: &FieldContext) -> Rational {
        let n = Rational::eval_poly_at(&self.num, at, ctx);
        let d = Rational::eval_poly_at(&self.den, at, ctx);
        n.div(&d, ctx)
    }
}

/// σⁱ(u) as a reduced fraction, by i substitutions of σ(u).
pub fn sigma_power_of_u(p: &QuadraticModulus, i: usize) -> Result<Rational> {
    let ctx = p.ctx();
    let s = sigma_from_modulus(p)?;
    let sigma_u = Rational::new(
        Poly::new(vec![s.m01, s.m00]),
        Poly::new(vec![s.m11, s.m10]),
        ctx,
    );
    let mut f = Rational::u();
    for _ in 0..i {
        f = f.compose(&sigma_u, ctx);
    }
    Ok(f)
}

/// σⁱ(z) = z(σⁱ(u)) reduced and split as c + (c0 + c1 u)/p(u).
pub fn sigma_image(z: VElement, p: &QuadraticModulus, i: usize) -> Result<LQElement> {
    let ctx = p.ctx();
    let at = sigma_power_of_u(p, i)?;
    let p_poly = Poly::new(vec![p.b(), p.a(), FieldElement::ONE]);
    let z_rat = Rational::new(Poly::new(vec![z.c0, z.c1]), p_poly.clone(), ctx);
    let img = z_rat.compose(&at, ctx);
    if img.num.is_zero() {
        return Ok(LQElement::default());
    }
    if img.den != p_poly {
        return Err(Error::PlaceNotFixed);
    }
    let (quo, rem) = img.num.div_rem(&img.den, ctx);
    if quo.degree().unwrap_or(0) > 0 {
        return Err(Error::PlaceNotFixed);
    }
    Ok(LQElement {
        c: quo.coeff(0),
        v: VElement {
            c0: rem.coeff(0),
            c1: rem.coeff(1),
        },
    })
}
