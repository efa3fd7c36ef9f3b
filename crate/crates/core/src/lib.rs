//! Binary sequence families of length 2^n + 1 with low periodic correlation.
//!
//! The construction works over GF(q), q = 2^n: a primitive quadratic
//! p(x) = x² + ax + b defines a Möbius map σ of order q + 1 that cycles the
//! q + 1 rational places of GF(q)(u). The σ-action on the three-dimensional
//! space L(Q) of the place of p(u) splits the two-dimensional complement V
//! into q - 1 classes; one representative z_i per class yields the sequence
//! s_{i,j} = (-1)^Tr(z_i(P_j)). Every correlation value of the family is at
//! most ⌊2√q⌋, lowered by one when that floor is even.
//!
//! ```
//! use lcseq::{build_family, family_correlation, FieldContext, Method};
//!
//! let ctx = FieldContext::new(5, None).unwrap();
//! let family = build_family(&ctx, None).unwrap();
//! assert_eq!(family.len(), 31);
//! assert_eq!(family.seq_length(), 33);
//! let report = family_correlation(&family.sequences, family.bound, Method::Packed);
//! assert!(report.cor <= 11);
//! ```

pub mod correlation;
pub mod error;
pub mod family;
pub mod fq2;
pub mod gf2n;
pub mod gold;
pub mod io;
pub mod mobius;
pub mod riemann_roch;
pub mod symbolic;
pub mod table;
pub mod verify;

pub use correlation::{family_correlation, CorrelationReport, Method, PackedSequence};
pub use error::{Error, Result};
pub use family::{build_family, theoretical_bound, BinarySequence, SequenceFamily};
pub use fq2::{find_primitive_quadratic, QuadraticModulus};
pub use gf2n::{FieldContext, FieldElement};
pub use mobius::{MobiusMap, ProjectivePoint};
pub use riemann_roch::{enumerate_classes, VElement};
