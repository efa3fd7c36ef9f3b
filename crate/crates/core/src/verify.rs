//! Self-checks of a constructed family against independent computations.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::correlation::{autocorrelation, crosscorrelation, family_correlation, Method};
use crate::error::Result;
use crate::family::{build_family, SequenceFamily};
use crate::gf2n::{FieldContext, FieldElement};
use crate::io::FamilyDocument;
use crate::mobius::{place_orbit, sigma_from_modulus, sigma_powers};
use crate::riemann_roch::{enumerate_classes, lq_action_matrix, LQElement, VElement};
use crate::symbolic::sigma_image;

/// Largest n for the sweeps that cost about q^3 operations.
pub const EXHAUSTIVE_MAX_N: u32 = 8;
/// Largest n for the rational-function oracle.
pub const SYMBOLIC_MAX_N: u32 = 3;
/// Largest n for naive correlation over the whole family.
pub const NAIVE_FULL_MAX_N: u32 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    fn push(&mut self, name: &'static str, outcome: std::result::Result<String, String>) {
        let (status, detail) = match outcome {
            Ok(d) => (Status::Pass, d),
            Err(d) => (Status::Fail, d),
        };
        self.checks.push(Check {
            name,
            status,
            detail,
        });
    }

    fn skip(&mut self, name: &'static str, why: String) {
        self.checks.push(Check {
            name,
            status: Status::Skip,
            detail: why,
        });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            writeln!(f, "{tag}  {:<22} {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn ensure(
    ok: bool,
    pass: String,
    fail: impl FnOnce() -> String,
) -> std::result::Result<String, String> {
    if ok {
        Ok(pass)
    } else {
        Err(fail())
    }
}

fn check_field(ctx: &FieldContext) -> std::result::Result<String, String> {
    for x in ctx.elements() {
        if ctx.trace(x) != ctx.trace_by_squaring(x) {
            return Err(format!("trace mismatch at {x}"));
        }
        if !x.is_zero() && ctx.mul(x, ctx.inv(x).unwrap()) != FieldElement::ONE {
            return Err(format!("x * x^-1 != 1 at {x}"));
        }
    }
    Ok(format!("trace and inverses over {} elements", ctx.q()))
}

fn check_sigma(f: &SequenceFamily) -> std::result::Result<String, String> {
    let ctx = f.ctx();
    let q = ctx.q() as u64;
    let sigma = sigma_from_modulus(&f.modulus).map_err(|e| e.to_string())?;
    let order = sigma.order(ctx);
    ensure(order == q + 1, format!("order {order}"), || {
        format!("order {order}, expected {}", q + 1)
    })
}

fn check_orbit(f: &SequenceFamily) -> std::result::Result<String, String> {
    let orbit = place_orbit(&f.modulus).map_err(|e| e.to_string())?;
    let powers = sigma_powers(&f.modulus).map_err(|e| e.to_string())?;
    let ctx = f.ctx();
    // P_j is the zero of σ^j(u).
    let zero = crate::mobius::ProjectivePoint::Finite(FieldElement::ZERO);
    for (j, (m, pt)) in powers.iter().zip(&orbit).enumerate() {
        if m.apply(*pt, ctx) != zero {
            return Err(format!("M_{j} does not vanish at P_{j}"));
        }
    }
    Ok(format!("{} distinct places", orbit.len()))
}

fn check_partition(f: &SequenceFamily) -> std::result::Result<String, String> {
    let classes = enumerate_classes(&f.modulus).map_err(|e| e.to_string())?;
    let q = f.ctx().q();
    let mut sizes = vec![0usize; classes.reps.len()];
    for idx in 1..(q as usize * q as usize) {
        match classes.class_index(VElement::from_index(idx, q), q) {
            Some(c) => sizes[c] += 1,
            None => return Err(format!("element {idx} unclassified")),
        }
    }
    let ok = classes.reps.len() == q as usize - 1 && sizes.iter().all(|&s| s == q as usize + 1);
    ensure(ok, format!("{} classes of size {}", q - 1, q + 1), || {
        format!("{} classes, sizes {:?}", classes.reps.len(), sizes)
    })
}

/// For every z != 0 and 1 <= t <= q, the V-part of σ^t(z) differs from z,
/// using the action matrix of each M_t directly.
fn check_no_fixed_v_parts(f: &SequenceFamily) -> std::result::Result<String, String> {
    let p = &f.modulus;
    let ctx = p.ctx();
    let q = ctx.q();
    let powers = sigma_powers(p).map_err(|e| e.to_string())?;
    for (t, m) in powers.iter().enumerate().skip(1) {
        let mat = lq_action_matrix(p, m).map_err(|e| e.to_string())?;
        for idx in 1..(q as usize * q as usize) {
            let z = VElement::from_index(idx, q);
            if mat.apply(LQElement::from_v(z), ctx).v == z {
                return Err(format!("V-part of sigma^{t}({z:?}) equals z"));
            }
        }
    }
    Ok(format!(
        "{} elements x {} powers",
        q as u64 * q as u64 - 1,
        q
    ))
}

fn check_symbolic(f: &SequenceFamily) -> std::result::Result<String, String> {
    let p = &f.modulus;
    let ctx = p.ctx();
    let q = ctx.q();
    let powers = sigma_powers(p).map_err(|e| e.to_string())?;
    let mut count = 0;
    for (i, m) in powers.iter().enumerate() {
        let mat = lq_action_matrix(p, m).map_err(|e| e.to_string())?;
        for idx in 1..(q as usize * q as usize) {
            let z = VElement::from_index(idx, q);
            let sym = sigma_image(z, p, i).map_err(|e| e.to_string())?;
            if mat.apply(LQElement::from_v(z), ctx) != sym {
                return Err(format!(
                    "sigma^{i}({z:?}): matrix and rational forms differ"
                ));
            }
            count += 1;
        }
    }
    Ok(format!("{count} images agree"))
}

fn check_packed_vs_naive(f: &SequenceFamily) -> std::result::Result<String, String> {
    let n = f.ctx().n();
    let seqs = if n <= NAIVE_FULL_MAX_N {
        &f.sequences[..]
    } else {
        &f.sequences[..16]
    };
    let a = family_correlation(seqs, f.bound, Method::Packed);
    let b = family_correlation(seqs, f.bound, Method::Naive);
    ensure(
        a == b,
        format!("{} sequences, identical reports", seqs.len()),
        || format!("packed cor {} vs naive cor {}", a.cor, b.cor),
    )
}

/// |Σ_k (-1)^Tr((z_i + σ^{-t} z_j)(P_k))| against the bit-level correlation
/// on a fixed pseudo-random sample of (i, j, t).
fn check_function_identity(f: &SequenceFamily) -> std::result::Result<String, String> {
    let m = f.len();
    let len = f.seq_length();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..64 {
        let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
        let t = if i == j {
            rng.gen_range(1..len)
        } else {
            rng.gen_range(0..len)
        };
        let bits = if i == j {
            autocorrelation(&f.sequences[i], t)
        } else {
            crosscorrelation(&f.sequences[i], &f.sequences[j], t)
        }
        .map_err(|e| e.to_string())?;
        let via = f.correlation_via_functions(i, j, t).unsigned_abs() as u32;
        if bits != via {
            return Err(format!(
                "(i, j, t) = ({i}, {j}, {t}): {bits} from bits, {via} from functions"
            ));
        }
    }
    Ok("64 sampled triples".into())
}

fn check_bound(f: &SequenceFamily) -> std::result::Result<String, String> {
    let r = family_correlation(&f.sequences, f.bound, Method::Packed);
    ensure(
        r.within_bound() && r.all_values_odd(),
        format!("cor {} <= bound {}", r.cor, r.bound),
        || format!("cor {} bound {} odd {}", r.cor, r.bound, r.all_values_odd()),
    )
}

/// Runs every check on the family for GF(2^n), optionally with a given
/// binary modulus and quadratic (a, b).
pub fn verify(n: u32, modulus: Option<u32>, ab: Option<(u32, u32)>) -> Result<VerifyReport> {
    let ctx = FieldContext::new(n, modulus)?;
    let ab = match ab {
        Some((a, b)) => Some((ctx.element(a)?, ctx.element(b)?)),
        None => None,
    };
    let family = build_family(&ctx, ab)?;
    Ok(verify_family(&family))
}

pub fn verify_family(f: &SequenceFamily) -> VerifyReport {
    let n = f.ctx().n();
    let mut r = VerifyReport::default();
    r.push("field arithmetic", check_field(f.ctx()));
    r.push("sigma order", check_sigma(f));
    r.push("orbit bijection", check_orbit(f));
    r.push("class partition", check_partition(f));
    if n <= EXHAUSTIVE_MAX_N {
        r.push("no fixed V-parts", check_no_fixed_v_parts(f));
    } else {
        r.skip("no fixed V-parts", format!("n > {EXHAUSTIVE_MAX_N}"));
    }
    if n <= SYMBOLIC_MAX_N {
        r.push("symbolic oracle", check_symbolic(f));
    } else {
        r.skip("symbolic oracle", format!("n > {SYMBOLIC_MAX_N}"));
    }
    r.push("packed vs naive", check_packed_vs_naive(f));
    r.push("function identity", check_function_identity(f));
    r.push("correlation bound", check_bound(f));
    r
}

/// Rebuilds the family described by a loaded document and compares it,
/// then checks the stored sequences against the bound.
pub fn verify_document(doc: &FamilyDocument) -> Result<VerifyReport> {
    let ctx = FieldContext::new(doc.n, Some(doc.modulus))?;
    let mut r = VerifyReport::default();
    let rebuilt = match build_family(&ctx, Some((ctx.element(doc.a)?, ctx.element(doc.b)?))) {
        Ok(f) => f,
        Err(e) => {
            r.push("parameters", Err(e.to_string()));
            return Ok(r);
        }
    };
    let mismatch = doc
        .sequences
        .iter()
        .zip(&rebuilt.sequences)
        .position(|(x, y)| x != y);
    r.push(
        "sequences match",
        match mismatch {
            None if doc.sequences.len() == rebuilt.sequences.len() => {
                Ok(format!("{} sequences identical", doc.sequences.len()))
            }
            None => Err("sequence count differs".into()),
            Some(i) => Err(format!("sequence {i} differs from the reconstruction")),
        },
    );
    if let Some(reps) = &doc.reps {
        let same = reps
            .iter()
            .zip(&rebuilt.reps)
            .all(|(s, z)| *s == [z.c0.bits(), z.c1.bits()]);
        r.push(
            "representatives",
            ensure(same, "match".into(), || {
                "differ from the reconstruction".into()
            }),
        );
    }
    let report = family_correlation(&doc.sequences, doc.bound, Method::Packed);
    r.push(
        "correlation bound",
        ensure(
            report.within_bound() && report.all_values_odd(),
            format!("cor {} <= {}", report.cor, report.bound),
            || {
                format!(
                    "cor {} exceeds bound {} or even values present",
                    report.cor, report.bound
                )
            },
        ),
    );
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields_pass() {
        for n in 1..=5 {
            let r = verify(n, None, None).unwrap();
            assert!(r.passed(), "n={n}\n{r}");
        }
        let r = verify(2, None, None).unwrap();
        assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{r}");
    }

    #[test]
    fn document_round_trip_and_corruption() {
        let ctx = FieldContext::new(4, None).unwrap();
        let doc = FamilyDocument::from_family(&build_family(&ctx, None).unwrap());
        assert!(verify_document(&doc).unwrap().passed());

        let mut bad = doc.clone();
        let mut bits = bad.sequences[3].bits();
        bits[5] ^= 1;
        bad.sequences[3] = crate::family::BinarySequence::from_bits(&bits);
        let r = verify_document(&bad).unwrap();
        assert!(!r.passed());
        assert!(r.failures().any(|c| c.detail.contains("sequence 3")));
    }

    #[test]
    fn invalid_parameters_are_errors() {
        assert!(verify(0, None, None).is_err());
        assert!(verify(3, Some(0b1111), None).is_err());
        assert!(verify(2, None, Some((1, 1))).is_err());
    }
}
