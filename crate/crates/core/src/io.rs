//! Family artifacts on disk: JSON, CSV and the binary `seqbin` format.
//!
//! seqbin layout (little-endian):
//!
//! ```text
//! "LCS1" | 0x01 | n: u16 | modulus: u32 | a: u32 | b: u32 | count: u32 | length: u32
//! then per sequence ceil(length / 8) bytes of trace bits, LSB first (1 = -1)
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{BinarySequence, SequenceFamily};
use crate::gf2n::FieldContext;
use crate::mobius::ProjectivePoint;

pub const SEQBIN_MAGIC: &[u8; 4] = b"LCS1";
pub const SEQBIN_VERSION: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Seqbin,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "seqbin" => Ok(Format::Seqbin),
            other => Err(Error::Malformed(format!("unknown format {other:?}"))),
        }
    }
}

/// Orbit entry: field element encoding or the token "inf".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrbitEntry {
    Finite(u32),
    Token(InfToken),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfToken {
    #[serde(rename = "inf")]
    Inf,
}

impl From<ProjectivePoint> for OrbitEntry {
    fn from(p: ProjectivePoint) -> Self {
        match p {
            ProjectivePoint::Finite(x) => OrbitEntry::Finite(x.bits()),
            ProjectivePoint::Infinity => OrbitEntry::Token(InfToken::Inf),
        }
    }
}

/// Format-independent view of a family artifact. CSV and seqbin carry no
/// representatives or orbit, so those are optional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDocument {
    pub n: u32,
    pub modulus: u32,
    pub a: u32,
    pub b: u32,
    pub bound: u32,
    pub sequences: Vec<BinarySequence>,
    pub reps: Option<Vec<[u32; 2]>>,
    pub orbit: Option<Vec<OrbitEntry>>,
}

impl FamilyDocument {
    pub fn from_family(f: &SequenceFamily) -> Self {
        FamilyDocument {
            n: f.ctx().n(),
            modulus: f.ctx().modulus(),
            a: f.modulus.a().bits(),
            b: f.modulus.b().bits(),
            bound: f.bound,
            sequences: f.sequences.clone(),
            reps: Some(f.reps.iter().map(|z| [z.c0.bits(), z.c1.bits()]).collect()),
            orbit: Some(f.orbit.iter().map(|&p| p.into()).collect()),
        }
    }

    pub fn q(&self) -> u64 {
        1u64 << self.n
    }

    pub fn length(&self) -> usize {
        self.q() as usize + 1
    }

    /// Same metadata and sequences, ignoring the optional fields.
    pub fn same_family(&self, other: &FamilyDocument) -> bool {
        (self.n, self.modulus, self.a, self.b, self.bound)
            == (other.n, other.modulus, other.a, other.b, other.bound)
            && self.sequences == other.sequences
    }

    fn validate(self) -> Result<Self> {
        let ctx = FieldContext::new(self.n, Some(self.modulus))?;
        ctx.element(self.a)?;
        ctx.element(self.b)?;
        let len = self.length();
        if self.bound != crate::family::theoretical_bound(self.q()) {
            return Err(Error::Malformed(format!(
                "bound {} does not match q = {}",
                self.bound,
                self.q()
            )));
        }
        if self.sequences.len() != len - 2 {
            return Err(Error::Malformed(format!(
                "expected {} sequences for n = {}, found {}",
                len - 2,
                self.n,
                self.sequences.len()
            )));
        }
        if let Some(s) = self.sequences.iter().find(|s| s.len() != len) {
            return Err(Error::Malformed(format!(
                "sequence of length {} (expected {len})",
                s.len()
            )));
        }
        if let Some(reps) = &self.reps {
            if reps.len() != self.sequences.len() {
                return Err(Error::Malformed(
                    "reps and sequences differ in count".into(),
                ));
            }
        }
        if let Some(orbit) = &self.orbit {
            if orbit.len() != len {
                return Err(Error::Malformed(
                    "orbit length differs from sequence length".into(),
                ));
            }
        }
        Ok(self)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonFamily {
    n: u32,
    q: u64,
    modulus: u32,
    a: u32,
    b: u32,
    length: usize,
    family_size: usize,
    bound: u32,
    sequences: Vec<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reps: Option<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    orbit: Option<Vec<OrbitEntry>>,
}

pub fn to_json(doc: &FamilyDocument) -> String {
    let j = JsonFamily {
        n: doc.n,
        q: doc.q(),
        modulus: doc.modulus,
        a: doc.a,
        b: doc.b,
        length: doc.length(),
        family_size: doc.sequences.len(),
        bound: doc.bound,
        sequences: doc.sequences.iter().map(|s| s.values().to_vec()).collect(),
        reps: doc.reps.clone(),
        orbit: doc.orbit.clone(),
    };
    let mut s = serde_json::to_string(&j).expect("family serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<FamilyDocument> {
    let j: JsonFamily = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    if j.q != 1u64 << j.n.min(63)
        || j.length != j.q as usize + 1
        || j.family_size != j.sequences.len()
    {
        return Err(Error::Malformed(
            "inconsistent q / length / family_size".into(),
        ));
    }
    let sequences = j
        .sequences
        .into_iter()
        .map(BinarySequence::from_values)
        .collect::<Result<Vec<_>>>()?;
    FamilyDocument {
        n: j.n,
        modulus: j.modulus,
        a: j.a,
        b: j.b,
        bound: j.bound,
        sequences,
        reps: j.reps,
        orbit: j.orbit,
    }
    .validate()
}

pub fn to_csv(doc: &FamilyDocument) -> String {
    let mut out = String::new();
    for (k, v) in [
        ("n", doc.n as u64),
        ("q", doc.q()),
        ("modulus", doc.modulus as u64),
        ("a", doc.a as u64),
        ("b", doc.b as u64),
        ("length", doc.length() as u64),
        ("family_size", doc.sequences.len() as u64),
        ("bound", doc.bound as u64),
    ] {
        writeln!(out, "# {k}={v}").unwrap();
    }
    for s in &doc.sequences {
        let row: Vec<&str> = s
            .values()
            .iter()
            .map(|&v| if v > 0 { "+1" } else { "-1" })
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn from_csv(text: &str) -> Result<FamilyDocument> {
    let mut meta = std::collections::HashMap::new();
    let mut sequences = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.trim().split_once('=') {
                let v: u64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad metadata value in {line:?}")))?;
                meta.insert(k.trim().to_string(), v);
            }
            continue;
        }
        let values = line
            .split(',')
            .map(|tok| match tok.trim() {
                "+1" | "1" => Ok(1i8),
                "-1" => Ok(-1i8),
                other => Err(Error::Malformed(format!("entry {other:?} is not +1 or -1"))),
            })
            .collect::<Result<Vec<_>>>()?;
        sequences.push(BinarySequence::from_values(values)?);
    }
    let get = |k: &str| -> Result<u32> {
        meta.get(k)
            .map(|&v| v as u32)
            .ok_or_else(|| Error::Malformed(format!("missing metadata {k}")))
    };
    FamilyDocument {
        n: get("n")?,
        modulus: get("modulus")?,
        a: get("a")?,
        b: get("b")?,
        bound: get("bound")?,
        sequences,
        reps: None,
        orbit: None,
    }
    .validate()
}

pub fn to_seqbin(doc: &FamilyDocument) -> Vec<u8> {
    let len = doc.length();
    let mut out = Vec::with_capacity(27 + doc.sequences.len() * len.div_ceil(8));
    out.extend_from_slice(SEQBIN_MAGIC);
    out.push(SEQBIN_VERSION);
    out.extend_from_slice(&(doc.n as u16).to_le_bytes());
    out.extend_from_slice(&doc.modulus.to_le_bytes());
    out.extend_from_slice(&doc.a.to_le_bytes());
    out.extend_from_slice(&doc.b.to_le_bytes());
    out.extend_from_slice(&(doc.sequences.len() as u32).to_le_bytes());
    out.extend_from_slice(&(len as u32).to_le_bytes());
    for s in &doc.sequences {
        let mut bytes = vec![0u8; len.div_ceil(8)];
        for i in 0..len {
            if s.packed().bit(i) {
                bytes[i / 8] |= 1 << (i % 8);
            }
        }
        out.extend_from_slice(&bytes);
    }
    out
}

pub fn from_seqbin(data: &[u8]) -> Result<FamilyDocument> {
    let bad = |m: &str| Error::Malformed(format!("seqbin: {m}"));
    if data.len() < 27 || &data[..4] != SEQBIN_MAGIC {
        return Err(bad("missing LCS1 header"));
    }
    if data[4] != SEQBIN_VERSION {
        return Err(bad(&format!("unsupported version {}", data[4])));
    }
    let u32_at = |o: usize| u32::from_le_bytes(data[o..o + 4].try_into().unwrap());
    let n = u16::from_le_bytes([data[5], data[6]]) as u32;
    let (modulus, a, b, count, len) = (u32_at(7), u32_at(11), u32_at(15), u32_at(19), u32_at(23));
    let (count, len) = (count as usize, len as usize);
    let stride = len.div_ceil(8);
    if data.len() != 27 + count * stride {
        return Err(bad("payload size does not match header"));
    }
    let mut sequences = Vec::with_capacity(count);
    for chunk in data[27..].chunks_exact(stride.max(1)).take(count) {
        if len % 8 != 0 && chunk[stride - 1] >> (len % 8) != 0 {
            return Err(bad("nonzero padding bits"));
        }
        let bits: Vec<u8> = (0..len).map(|i| chunk[i / 8] >> (i % 8) & 1).collect();
        sequences.push(BinarySequence::from_bits(&bits));
    }
    if n == 0 || n > 16 {
        return Err(bad(&format!("degree {n} out of range")));
    }
    let doc = FamilyDocument {
        n,
        modulus,
        a,
        b,
        bound: crate::family::theoretical_bound(1u64 << n),
        sequences,
        reps: None,
        orbit: None,
    };
    if len != doc.length() {
        return Err(bad("sequence length is not q + 1"));
    }
    doc.validate()
}

pub fn encode(doc: &FamilyDocument, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_json(doc).into_bytes(),
        Format::Csv => to_csv(doc).into_bytes(),
        Format::Seqbin => to_seqbin(doc),
    }
}

/// Decodes any of the three formats, detected from the content.
pub fn decode(data: &[u8]) -> Result<FamilyDocument> {
    if data.starts_with(SEQBIN_MAGIC) {
        return from_seqbin(data);
    }
    let text = std::str::from_utf8(data)
        .map_err(|_| Error::Malformed("not UTF-8 and not seqbin".into()))?;
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_csv(text)
    }
}

/// Correlation analysis of one family, as written by `analyze`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisDocument {
    pub n: u32,
    pub q: u64,
    pub modulus: u32,
    pub a: u32,
    pub b: u32,
    pub within_bound: bool,
    pub all_values_odd: bool,
    pub balance_histogram: std::collections::BTreeMap<i64, usize>,
    #[serde(flatten)]
    pub report: crate::correlation::CorrelationReport,
}

impl AnalysisDocument {
    pub fn new(doc: &FamilyDocument, report: crate::correlation::CorrelationReport) -> Self {
        AnalysisDocument {
            n: doc.n,
            q: doc.q(),
            modulus: doc.modulus,
            a: doc.a,
            b: doc.b,
            within_bound: report.within_bound(),
            all_values_odd: report.all_values_odd(),
            balance_histogram: report.balance_histogram(),
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Gold family artifact. Same layout conventions as the family formats, with
/// the LFSR parameters in place of the quadratic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldDocument {
    pub n: u32,
    pub taps: u32,
    pub seed: u32,
    pub decimation: u32,
    pub length: usize,
    pub family_size: usize,
    pub bound: u32,
    pub sequences: Vec<Vec<i8>>,
}

impl GoldDocument {
    pub fn new(g: &crate::gold::GoldFamily) -> Self {
        GoldDocument {
            n: g.n,
            taps: g.lfsr.taps,
            seed: g.lfsr.seed,
            decimation: (1 << g.k) + 1,
            length: g.u.len(),
            family_size: g.sequences.len(),
            bound: crate::gold::gold_bound(g.n),
            sequences: g.sequences.iter().map(|s| s.values().to_vec()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("gold family serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in [
            ("n", self.n as usize),
            ("taps", self.taps as usize),
            ("seed", self.seed as usize),
            ("decimation", self.decimation as usize),
            ("length", self.length),
            ("family_size", self.family_size),
            ("bound", self.bound as usize),
        ] {
            writeln!(out, "# {k}={v}").unwrap();
        }
        for s in &self.sequences {
            let row: Vec<&str> = s.iter().map(|&v| if v > 0 { "+1" } else { "-1" }).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::build_family;
    use proptest::prelude::*;

    fn doc(n: u32) -> FamilyDocument {
        FamilyDocument::from_family(
            &build_family(&FieldContext::new(n, None).unwrap(), None).unwrap(),
        )
    }

    #[test]
    fn json_layout() {
        let text = to_json(&doc(1));
        assert_eq!(
            text,
            "{\"n\":1,\"q\":2,\"modulus\":3,\"a\":1,\"b\":1,\"length\":3,\"family_size\":1,\"bound\":1,\
             \"sequences\":[[-1,-1,1]],\"reps\":[[1,0]],\"orbit\":[0,1,\"inf\"]}\n"
        );
        assert_eq!(from_json(&text).unwrap(), doc(1));
    }

    #[test]
    fn csv_layout() {
        let text = to_csv(&doc(1));
        assert!(text.ends_with("-1,-1,+1\n"));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1);
        assert!(from_csv(&text).unwrap().same_family(&doc(1)));
    }

    #[test]
    fn seqbin_layout() {
        let bin = to_seqbin(&doc(1));
        let mut expect = b"LCS1\x01".to_vec();
        expect.extend_from_slice(&[1, 0]);
        for v in [3u32, 1, 1, 1, 3] {
            expect.extend_from_slice(&v.to_le_bytes());
        }
        expect.push(0b011);
        assert_eq!(bin, expect);
    }

    #[test]
    fn round_trips() {
        for n in 1..=6 {
            let d = doc(n);
            for fmt in [Format::Json, Format::Csv, Format::Seqbin] {
                let back = decode(&encode(&d, fmt)).unwrap();
                assert!(back.same_family(&d), "n={n} {fmt:?}");
            }
            assert_eq!(decode(&encode(&d, Format::Json)).unwrap(), d);
        }
    }

    #[test]
    fn gold_document() {
        let g = crate::gold::gold_family(3).unwrap();
        let d = GoldDocument::new(&g);
        assert_eq!(
            (d.length, d.family_size, d.bound, d.decimation),
            (7, 9, 5, 3)
        );
        let back: GoldDocument = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert_eq!(
            d.to_csv().lines().filter(|l| !l.starts_with('#')).count(),
            9
        );
    }

    #[test]
    fn rejects_corruption() {
        let d = doc(3);
        let mut bin = to_seqbin(&d);
        bin.pop();
        assert!(decode(&bin).is_err());
        let mut bin = to_seqbin(&d);
        bin[0] = b'X';
        assert!(decode(&bin).is_err());

        let json = to_json(&d).replace("[[", "[[0,");
        assert!(decode(json.as_bytes()).is_err());
        let csv = to_csv(&d).replacen("+1", "2", 1);
        assert!(decode(csv.as_bytes()).is_err());
        let csv: String = to_csv(&d)
            .lines()
            .filter(|l| !l.starts_with("# modulus"))
            .map(|l| format!("{l}\n"))
            .collect();
        assert!(decode(csv.as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn seqbin_round_trips_arbitrary_bits(n in 1u32..6, seed in any::<u64>()) {
            let q = 1usize << n;
            let mut state = seed | 1;
            let sequences = (0..q - 1)
                .map(|_| {
                    let bits: Vec<u8> = (0..=q)
                        .map(|_| {
                            state ^= state << 13;
                            state ^= state >> 7;
                            state ^= state << 17;
                            (state & 1) as u8
                        })
                        .collect();
                    BinarySequence::from_bits(&bits)
                })
                .collect();
            let ctx = FieldContext::new(n, None).unwrap();
            let d = FamilyDocument {
                n,
                modulus: ctx.modulus(),
                a: 1,
                b: 1,
                bound: crate::family::theoretical_bound(q as u64),
                sequences,
                reps: None,
                orbit: None,
            };
            prop_assert_eq!(from_seqbin(&to_seqbin(&d)).unwrap(), d.clone());
            prop_assert!(from_json(&to_json(&d)).unwrap().same_family(&d));
        }
    }
}
