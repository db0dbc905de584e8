//! Bundled tables: Shimura and modular curve parameterizations, the list of
//! quaternionic-locus classes, Mestre obstructions, the Humbert surface
//! `H4`, and Hauptmodul metadata.
//!
//! The tables are transcribed as plain text under `data/transcription/`
//! and ingested into `data/bundle.json`, which is what the library loads.
//! The bundle is verified against a SHA-256 checksum before use.

use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, Poly, Rational};
use crate::qforms::BinaryQF;

/// SHA-256 of `data/bundle.json`.
pub const BUNDLE_SHA256: &str = "31199746214fb2e9f62823c9503a1f4ad7ecfd9ffdbb22270e9c90b0947d6349";

const BUNDLE_JSON: &str = include_str!("../data/bundle.json");

/// The transcription sources, embedded so ingestion can be replayed.
pub const TRANSCRIPTIONS: Transcriptions<'static> = Transcriptions {
    shimura: include_str!("../data/transcription/shimura.txt"),
    modular: include_str!("../data/transcription/modular.txt"),
    sq_table: include_str!("../data/transcription/sq_table.txt"),
    mestre: include_str!("../data/transcription/mestre.txt"),
    h4: include_str!("../data/transcription/h4.txt"),
    hauptmodul: include_str!("../data/transcription/hauptmodul.txt"),
};

#[derive(Debug, Clone, Copy)]
pub struct Transcriptions<'a> {
    pub shimura: &'a str,
    pub modular: &'a str,
    pub sq_table: &'a str,
    pub mestre: &'a str,
    pub h4: &'a str,
    pub hauptmodul: &'a str,
}

/// A polynomial stored as `scalar * sum coeffs[k] j^k` with a primitive
/// integer coefficient list (ascending) and positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub scalar: String,
    pub coeffs: Vec<String>,
}

impl PolyRecord {
    pub fn from_poly(p: &Poly) -> Self {
        if p.is_zero() {
            return PolyRecord { scalar: "0".into(), coeffs: Vec::new() };
        }
        let (scalar, z) = p.to_primitive();
        PolyRecord {
            scalar: scalar.to_string(),
            coeffs: z.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<Poly> {
        let scalar = parse_rational(&self.scalar)
            .ok_or_else(|| Error::Data(format!("bad scalar {}", self.scalar)))?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                c.parse::<BigInt>()
                    .map(|n| Rational::from_integer(n) * &scalar)
                    .map_err(|_| Error::Data(format!("bad coefficient {c}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub label: String,
    /// Quaternion discriminant; 1 for modular curves.
    pub d: u64,
    /// Level `N` of a modular curve.
    pub level: Option<u64>,
    pub form: [i64; 3],
    pub s2: PolyRecord,
    pub s3: PolyRecord,
    pub s5: PolyRecord,
    pub s6: PolyRecord,
    pub hauptmodul: Option<String>,
}

/// One class of the quaternionic locus with the prime `p` and parameter
/// `s` of its explicit order, `|W|`, and the genus of the quotient curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqRow {
    pub d: u64,
    pub k: u32,
    pub form: [i64; 3],
    pub p: u64,
    pub s: u64,
    pub w: u8,
    pub genus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MestreRecord {
    pub label: String,
    pub a: PolyRecord,
    pub b: PolyRecord,
}

/// `coef * s2^e[0] s3^e[1] s5^e[2] s6^e[3]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H4Term {
    pub coef: String,
    pub exps: [u32; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HauptmodulRecord {
    pub quotient: String,
    pub d: u64,
    pub properties: Vec<String>,
    pub action: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bundle {
    pub shimura: Vec<CurveRecord>,
    pub modular: Vec<CurveRecord>,
    pub sq_table: Vec<SqRow>,
    pub mestre: Vec<MestreRecord>,
    pub h4: Vec<H4Term>,
    pub hauptmodul: Vec<HauptmodulRecord>,
}

impl Bundle {
    pub fn curve(&self, label: &str) -> Option<&CurveRecord> {
        self.shimura
            .iter()
            .chain(self.modular.iter())
            .find(|c| c.label == label)
    }

    pub fn mestre_row(&self, label: &str) -> Option<&MestreRecord> {
        self.mestre.iter().find(|m| m.label == label)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bundle serializes");
        s.push('\n');
        s
    }
}

/// SHA-256 of a string, hex encoded.
pub fn sha256_hex(s: &str) -> String {
    Sha256::digest(s.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// The verified bundle shipped with the crate.
pub fn bundle() -> Result<&'static Bundle> {
    static CELL: OnceLock<std::result::Result<Bundle, Error>> = OnceLock::new();
    CELL.get_or_init(|| {
        let got = sha256_hex(BUNDLE_JSON);
        if got != BUNDLE_SHA256 {
            return Err(Error::Data(format!("bundle checksum mismatch: {got}")));
        }
        serde_json::from_str(BUNDLE_JSON).map_err(|e| Error::Data(e.to_string()))
    })
    .as_ref()
    .map_err(Clone::clone)
}

// Expression parsing. Grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor factor*          (juxtaposition is multiplication)
//   factor := atom ['^' exponent]
//   atom   := integer | 'j' | '(' expr ')'
//   exponent := '{' digits '}' | digit
// A bare `^` takes a single digit, so `2^23^5` is 2^2 * 3^5.

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at offset {} in '{}'",
            self.i,
            String::from_utf8_lossy(self.s)
        ))
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    1
                }
                Some(b'-') => {
                    self.i += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(b'0'..=b'9' | b'j' | b'(')) {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            let e = self.exponent()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32> {
        match self.peek() {
            Some(b'{') => {
                self.i += 1;
                let start = self.i;
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.i += 1;
                }
                let e = std::str::from_utf8(&self.s[start..self.i])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.err("bad exponent"))?;
                if self.peek() != Some(b'}') {
                    return Err(self.err("expected '}'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(c @ b'0'..=b'9') => {
                self.i += 1;
                Ok(u32::from(c - b'0'))
            }
            _ => Err(self.err("expected exponent")),
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'j') => {
                self.i += 1;
                Ok(Poly::x())
            }
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(b'0'..=b'9') => {
                let start = self.i;
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.i += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.s[start..self.i]).unwrap().parse().unwrap();
                Ok(Poly::constant(Rational::from_integer(n)))
            }
            _ => Err(self.err("unexpected character")),
        }
    }
}

/// Parse a transcribed polynomial expression in `j`.
pub fn parse_poly(src: &str) -> Result<Poly> {
    let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { s: cleaned.as_bytes(), i: 0 };
    let out = p.expr()?;
    if p.i != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_form(s: &str) -> Result<[i64; 3]> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad form '{s}'"))))
        .collect::<Result<_>>()?;
    v.try_into().map_err(|_| Error::Parse(format!("form '{s}' needs three entries")))
}

fn parse_sections(src: &str) -> Result<Vec<(String, Vec<(String, String)>)>> {
    let mut out: Vec<(String, Vec<(String, String)>)> = Vec::new();
    for (n, line) in content_lines(src) {
        if let Some(label) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            out.push((label.to_string(), Vec::new()));
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {n}: expected key = value")))?;
        let sec = out
            .last_mut()
            .ok_or_else(|| Error::Parse(format!("line {n}: entry outside a section")))?;
        sec.1.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn field<'a>(label: &str, kv: &'a [(String, String)], key: &str) -> Result<&'a str> {
    kv.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| Error::Parse(format!("[{label}] missing '{key}'")))
}

fn poly_field(label: &str, kv: &[(String, String)], key: &str) -> Result<PolyRecord> {
    let src = field(label, kv, key)?;
    let p = parse_poly(src).map_err(|e| Error::Parse(format!("[{label}] {key}: {e}")))?;
    Ok(PolyRecord::from_poly(&p))
}

/// Form attached to a modular curve: `x^2 + 4N y^2` for `fY_N`, and
/// `4x^2 + N y^2` or `4x^2 + 4xy + (N+1) y^2` for `fY_N'` (`N` odd).
pub fn modular_form(label: &str, n: u64) -> Result<[i64; 3]> {
    let n = n as i64;
    if label.ends_with('\'') {
        match n % 4 {
            1 => Ok([4, 0, n]),
            3 => Ok([4, 4, n + 1]),
            _ => Err(Error::Data(format!("{label}: level {n} must be odd"))),
        }
    } else {
        Ok([1, 0, 4 * n])
    }
}

fn ingest_curves(src: &str, modular: bool) -> Result<Vec<CurveRecord>> {
    parse_sections(src)?
        .into_iter()
        .map(|(label, kv)| {
            let (d, level, form) = if modular {
                let n: u64 = field(&label, &kv, "N")?
                    .parse()
                    .map_err(|_| Error::Parse(format!("[{label}] bad N")))?;
                (1, Some(n), modular_form(&label, n)?)
            } else {
                let d = field(&label, &kv, "D")?
                    .parse()
                    .map_err(|_| Error::Parse(format!("[{label}] bad D")))?;
                (d, None, parse_form(field(&label, &kv, "form")?)?)
            };
            Ok(CurveRecord {
                s2: poly_field(&label, &kv, "s2")?,
                s3: poly_field(&label, &kv, "s3")?,
                s5: poly_field(&label, &kv, "s5")?,
                s6: poly_field(&label, &kv, "s6")?,
                hauptmodul: kv.iter().find(|(k, _)| k == "hauptmodul").map(|(_, v)| v.clone()),
                label,
                d,
                level,
                form,
            })
        })
        .collect()
}

fn ingest_sq_table(src: &str) -> Result<Vec<SqRow>> {
    content_lines(src)
        .map(|(n, line)| {
            let v: Vec<i64> = line
                .split_whitespace()
                .map(|x| x.parse().map_err(|_| Error::Parse(format!("line {n}: bad integer '{x}'"))))
                .collect::<Result<_>>()?;
            if v.len() != 9 || v.iter().enumerate().any(|(i, &x)| i != 3 && x < 0) {
                return Err(Error::Parse(format!("line {n}: expected 9 non-negative fields")));
            }
            Ok(SqRow {
                d: v[0] as u64,
                k: v[1] as u32,
                form: [v[2], v[3], v[4]],
                p: v[5] as u64,
                s: v[6] as u64,
                w: v[7] as u8,
                genus: v[8] as u32,
            })
        })
        .collect()
}

fn ingest_mestre(src: &str) -> Result<Vec<MestreRecord>> {
    content_lines(src)
        .map(|(n, line)| {
            let parts: Vec<&str> = line.split('|').map(str::trim).collect();
            let [label, a, b] = parts[..] else {
                return Err(Error::Parse(format!("line {n}: expected label | a | b")));
            };
            let pa = parse_poly(a).map_err(|e| Error::Parse(format!("line {n}: {e}")))?;
            let pb = parse_poly(b).map_err(|e| Error::Parse(format!("line {n}: {e}")))?;
            Ok(MestreRecord {
                label: label.to_string(),
                a: PolyRecord::from_poly(&pa),
                b: PolyRecord::from_poly(&pb),
            })
        })
        .collect()
}

fn ingest_h4(src: &str) -> Result<Vec<H4Term>> {
    content_lines(src)
        .map(|(n, line)| {
            let v: Vec<&str> = line.split_whitespace().collect();
            if v.len() != 5 {
                return Err(Error::Parse(format!("line {n}: expected coefficient and four exponents")));
            }
            let coef: BigInt = v[0].parse().map_err(|_| Error::Parse(format!("line {n}: bad coefficient")))?;
            let mut exps = [0u32; 4];
            for (e, s) in exps.iter_mut().zip(&v[1..]) {
                *e = s.parse().map_err(|_| Error::Parse(format!("line {n}: bad exponent")))?;
            }
            Ok(H4Term { coef: coef.to_string(), exps })
        })
        .collect()
}

fn ingest_hauptmodul(src: &str) -> Result<Vec<HauptmodulRecord>> {
    content_lines(src)
        .map(|(n, line)| {
            let parts: Vec<&str> = line.split('|').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(Error::Parse(format!("line {n}: expected four fields")));
            }
            Ok(HauptmodulRecord {
                quotient: parts[0].to_string(),
                d: parts[1].parse().map_err(|_| Error::Parse(format!("line {n}: bad D")))?,
                properties: parts[2].split(',').map(|s| s.trim().to_string()).collect(),
                action: (!parts[3].is_empty()).then(|| parts[3].to_string()),
            })
        })
        .collect()
}

/// Parse all transcriptions into a bundle.
pub fn ingest(t: &Transcriptions<'_>) -> Result<Bundle> {
    Ok(Bundle {
        shimura: ingest_curves(t.shimura, false)?,
        modular: ingest_curves(t.modular, true)?,
        sq_table: ingest_sq_table(t.sq_table)?,
        mestre: ingest_mestre(t.mestre)?,
        h4: ingest_h4(t.h4)?,
        hauptmodul: ingest_hauptmodul(t.hauptmodul)?,
    })
}

/// Ingest the six transcription files found in `dir`.
pub fn ingest_dir(dir: &Path) -> Result<Bundle> {
    let read = |name: &str| {
        std::fs::read_to_string(dir.join(name))
            .map_err(|e| Error::Data(format!("{}: {e}", dir.join(name).display())))
    };
    let (shimura, modular, sq_table, mestre, h4, hauptmodul) = (
        read("shimura.txt")?,
        read("modular.txt")?,
        read("sq_table.txt")?,
        read("mestre.txt")?,
        read("h4.txt")?,
        read("hauptmodul.txt")?,
    );
    ingest(&Transcriptions {
        shimura: &shimura,
        modular: &modular,
        sq_table: &sq_table,
        mestre: &mestre,
        h4: &h4,
        hauptmodul: &hauptmodul,
    })
}

impl CurveRecord {
    pub fn binary_form(&self) -> BinaryQF {
        BinaryQF::from_i64(self.form[0], self.form[1], self.form[2])
    }
}

impl SqRow {
    pub fn binary_form(&self) -> BinaryQF {
        BinaryQF::from_i64(self.form[0], self.form[1], self.form[2])
    }
}

impl H4Term {
    pub fn coefficient(&self) -> BigInt {
        self.coef.parse().unwrap_or_else(|_| BigInt::zero())
    }

    /// Weighted degree under weights `(2, 3, 5, 6)`.
    pub fn weight(&self) -> u32 {
        let [a, b, c, d] = self.exps;
        2 * a + 3 * b + 5 * c + 6 * d
    }
}

/// Whether `p` is the constant one.
pub fn is_one(p: &Poly) -> bool {
    p.degree() == Some(0) && p.coeff(0).is_one()
}
