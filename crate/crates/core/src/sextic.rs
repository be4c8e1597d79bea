//! Sextic fields given as a cubic extension `K = L(theta)` of an imaginary
//! quadratic field `L`. With `rho = -theta1 - theta2` for two conjugates of
//! `theta`, the coordinates of power integral basis generators come from
//! solutions of `N_{K/L}(X - rho*Y) = unit` with
//! `X = x1 + w*y1`, `Y = x2 + w*y2`.
//!
//! Records are read from lines such as
//! `D_K=-10816; omega=i; f=x^3-(1+w)*x^2+5*w*x-(1+4*w); solutions=[(0,2,-3,0,6)]`.
//! Published tuples are `(x1, x2, y1, y2)` with an optional trailing `y0`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::RelPoly;
use crate::par;
use crate::qfield::{IQField, IQInt, OmegaKind};
use crate::relthue::{solve_small, RelThueEquation, SearchConfig, SolveOutcome, Status};

/// Solution data attached to a record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "tuples", rename_all = "snake_case")]
pub enum Published {
    /// Nothing listed for this row.
    Unlisted,
    /// The row states that there are no generators at all.
    NoSolutions,
    Tuples(Vec<PublishedTuple>),
}

/// A listed generator `(x1, x2, y1, y2)` and its `y0`, when given.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PublishedTuple {
    pub x1: i64,
    pub x2: i64,
    pub y1: i64,
    pub y2: i64,
    pub y0: Option<i64>,
}

impl PublishedTuple {
    pub fn projection(&self) -> [i64; 4] {
        [self.x1, self.x2, self.y1, self.y2]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SexticFieldRecord {
    pub d_k: i64,
    pub field: IQField,
    /// `[c0, c1, c2]` of `f = z^3 + c2*z^2 + c1*z + c0`.
    pub f_coeffs: [IQInt; 3],
    pub published: Published,
}

impl SexticFieldRecord {
    pub fn f(&self) -> RelPoly {
        let [c0, c1, c2] = self.f_coeffs.clone();
        RelPoly::new(vec![c0, c1, c2, self.field.one()]).expect("monic cubic")
    }

    /// Normalized text form, accepted again by [`parse_record`].
    pub fn to_line(&self) -> String {
        let omega = match (self.field.kind(), self.field.d()) {
            (OmegaKind::Pure, 1) => "i".to_string(),
            (OmegaKind::Pure, d) => format!("i*sqrt({d})"),
            (OmegaKind::Half, d) => format!("(1+i*sqrt({d}))/2"),
        };
        let mut s = format!("D_K={}; omega={}; f={}", self.d_k, omega, self.f().display_in('x'));
        match &self.published {
            Published::Unlisted => {}
            Published::NoSolutions => s.push_str("; solutions=none"),
            Published::Tuples(ts) => {
                let items: Vec<String> = ts
                    .iter()
                    .map(|t| {
                        let mut v: Vec<String> = t.projection().iter().map(|x| x.to_string()).collect();
                        if let Some(y0) = t.y0 {
                            v.push(y0.to_string());
                        }
                        format!("({})", v.join(","))
                    })
                    .collect();
                s.push_str(&format!("; solutions=[{}]", items.join(",")));
            }
        }
        s
    }
}

impl fmt::Display for SexticFieldRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// Parse one record line. Errors carry the column (0-based, in characters)
/// where parsing stopped.
pub fn parse_record(line: &str) -> Result<SexticFieldRecord> {
    let mut d_k = None;
    let mut field = None;
    let mut f_text = None;
    let mut published = Published::Unlisted;
    let mut col = 0usize;
    for part in line.split(';') {
        let start = col + part.len() - part.trim_start().len();
        col += part.chars().count() + 1;
        let p = part.trim();
        if p.is_empty() {
            continue;
        }
        let Some((key, value)) = p.split_once('=') else {
            return Err(Error::parse(start, format!("expected key=value, found '{p}'")));
        };
        let vcol = start + key.chars().count() + 1;
        match key.trim() {
            "D_K" => {
                d_k = Some(value.trim().parse::<i64>().map_err(|_| Error::parse(vcol, "D_K must be an integer"))?)
            }
            "omega" => field = Some(parse_omega(value.trim(), vcol)?),
            "f" => f_text = Some((value.to_string(), vcol)),
            "solutions" => published = parse_solutions(value.trim(), vcol)?,
            other => return Err(Error::parse(start, format!("unknown key '{other}'"))),
        }
    }
    let d_k = d_k.ok_or_else(|| Error::parse(0, "missing D_K"))?;
    let field = field.ok_or_else(|| Error::parse(0, "missing omega"))?;
    let (text, fcol) = f_text.ok_or_else(|| Error::parse(0, "missing f"))?;
    let coeffs = PolyParser::new(field, &text, fcol).parse()?;
    if coeffs.len() != 4 {
        return Err(Error::parse(fcol, format!("f has degree {}, expected 3", coeffs.len().saturating_sub(1))));
    }
    if !coeffs[3].is_one() {
        return Err(Error::parse(fcol, "f must be monic"));
    }
    let f_coeffs = [coeffs[0].clone(), coeffs[1].clone(), coeffs[2].clone()];
    Ok(SexticFieldRecord { d_k, field, f_coeffs, published })
}

/// Parse every non-empty line that does not start with `#`.
pub fn parse_records(text: &str) -> Result<Vec<SexticFieldRecord>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_record)
        .collect()
}

fn parse_omega(v: &str, col: usize) -> Result<IQField> {
    let s: String = v.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::parse(col, format!("unrecognized omega '{v}'"));
    let sqrt_arg = |t: &str| -> Result<u64> {
        t.strip_prefix("i*sqrt(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|n| n.parse().ok())
            .ok_or_else(bad)
    };
    let field = if s == "i" {
        IQField::new(1, OmegaKind::Pure)
    } else if let Some(inner) = s.strip_prefix("(1+").and_then(|r| r.strip_suffix(")/2")) {
        IQField::new(sqrt_arg(inner)?, OmegaKind::Half)
    } else {
        IQField::new(sqrt_arg(&s)?, OmegaKind::Pure)
    };
    field.map_err(|e| Error::parse(col, e.to_string()))
}

fn parse_solutions(v: &str, col: usize) -> Result<Published> {
    if v == "none" {
        return Ok(Published::NoSolutions);
    }
    let inner = v
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::parse(col, "solutions must be 'none' or a bracketed list"))?;
    let mut out = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let here = col + 1 + (inner.len() - rest.len());
        let body = rest.strip_prefix('(').ok_or_else(|| Error::parse(here, "expected '('"))?;
        let close = body.find(')').ok_or_else(|| Error::parse(here, "unclosed tuple"))?;
        let nums: Vec<i64> = body[..close]
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(here, "tuple entries must be integers"))?;
        let t = match nums.as_slice() {
            &[x1, x2, y1, y2] => PublishedTuple { x1, x2, y1, y2, y0: None },
            &[x1, x2, y1, y2, y0] => PublishedTuple { x1, x2, y1, y2, y0: Some(y0) },
            _ => return Err(Error::parse(here, "tuples have 4 or 5 entries")),
        };
        out.push(t);
        rest = body[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
        } else if !rest.is_empty() {
            return Err(Error::parse(col + 1 + (inner.len() - rest.len()), "expected ','"));
        }
    }
    Ok(Published::Tuples(out))
}

/// Recursive descent over `+ - * ^ ( )`, integers, `w` and `x`, producing
/// polynomial coefficients in `x`.
struct PolyParser {
    field: IQField,
    chars: Vec<(usize, char)>,
    pos: usize,
    end_col: usize,
}

type Poly = Vec<IQInt>;

impl PolyParser {
    fn new(field: IQField, src: &str, col: usize) -> Self {
        let chars: Vec<(usize, char)> =
            src.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).map(|(i, c)| (col + i, c)).collect();
        PolyParser { field, chars, pos: 0, end_col: col + src.chars().count() }
    }

    fn col(&self) -> usize {
        self.chars.get(self.pos).map(|c| c.0).unwrap_or(self.end_col)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn parse(mut self) -> Result<Poly> {
        if self.chars.is_empty() {
            return Err(Error::parse(self.end_col, "empty polynomial"));
        }
        let p = self.expr()?;
        if let Some(c) = self.peek() {
            return Err(Error::parse(self.col(), format!("unexpected '{c}'")));
        }
        Ok(trim(p))
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = vec![];
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    false
                }
                Some('-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if neg { sub(&acc, &t) } else { add(&acc, &t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let rhs = self.power()?;
            acc = mul(&acc, &rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let col = self.col();
        let e = self.integer().ok_or_else(|| Error::parse(col, "expected an exponent"))?;
        let e: u32 = e.try_into().map_err(|_| Error::parse(col, "exponent too large"))?;
        if e > 64 {
            return Err(Error::parse(col, "exponent too large"));
        }
        let mut acc = vec![self.field.one()];
        for _ in 0..e {
            acc = mul(&acc, &base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Poly> {
        let col = self.col();
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                Ok(vec![self.field.zero(), self.field.one()])
            }
            Some('w') => {
                self.pos += 1;
                Ok(vec![self.field.omega()])
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::parse(self.col(), "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer().expect("starts with a digit");
                Ok(vec![self.field.int(n, 0)])
            }
            Some(c) => Err(Error::parse(col, format!("unexpected '{c}'"))),
            None => Err(Error::parse(col, "unexpected end of polynomial")),
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        s.parse().ok()
    }
}

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn add(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let neg: Poly = b.iter().map(|c| -c).collect();
    add(a, &neg)
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let field = a[0].field();
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// `g(z) = f(z + s1)` with `s1 = -c2` the sum of the roots of `f`. Its roots
/// are `theta_k - s1 = -theta_i - theta_j`, the three values of `rho`.
pub fn rho_poly(rec: &SexticFieldRecord) -> RelPoly {
    let s1 = -&rec.f_coeffs[2];
    rec.f().taylor_shift(&s1)
}

/// Coordinates `(x1, x2, y1, y2)` of a solution `X = x1 + w*y1`, `Y = x2 + w*y2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PIBCandidate {
    pub x1: BigInt,
    pub x2: BigInt,
    pub y1: BigInt,
    pub y2: BigInt,
}

impl PIBCandidate {
    pub fn from_pair(x: &IQInt, y: &IQInt) -> Self {
        PIBCandidate { x1: x.a().clone(), x2: y.a().clone(), y1: x.b().clone(), y2: y.b().clone() }
    }

    /// `Y = 0`, so `X` is a unit.
    pub fn is_trivial(&self) -> bool {
        self.x2.is_zero() && self.y2.is_zero()
    }

    pub fn matches(&self, t: &[i64; 4]) -> bool {
        [&self.x1, &self.x2, &self.y1, &self.y2].iter().zip(t).all(|(a, b)| **a == BigInt::from(*b))
    }
}

impl Serialize for PIBCandidate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PIBCandidate", 5)?;
        st.serialize_field("x1", &self.x1.to_string())?;
        st.serialize_field("x2", &self.x2.to_string())?;
        st.serialize_field("y1", &self.y1.to_string())?;
        st.serialize_field("y2", &self.y2.to_string())?;
        st.serialize_field("y0_status", "unsupported")?;
        st.end()
    }
}

impl fmt::Display for PIBCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {} {})", self.x1, self.x2, self.y1, self.y2)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RecordSolution {
    pub d_k: i64,
    pub status: Status,
    /// Every unit multiple of every solution, sorted.
    pub candidates: Vec<PIBCandidate>,
    pub outcome: SolveOutcome,
}

impl RecordSolution {
    pub fn nontrivial(&self) -> impl Iterator<Item = &PIBCandidate> {
        self.candidates.iter().filter(|c| !c.is_trivial())
    }
}

/// Solve the relative Thue equation attached to a record.
pub fn solve_record(rec: &SexticFieldRecord, config: &SearchConfig) -> Result<RecordSolution> {
    let eq = RelThueEquation::new(rho_poly(rec))?;
    let outcome = solve_small(&eq, config)?;
    let mut candidates: Vec<PIBCandidate> = outcome
        .solutions
        .iter()
        .flat_map(|s| rec.field.units().into_iter().map(move |u| PIBCandidate::from_pair(&(&u * &s.x), &(&u * &s.y))))
        .collect();
    candidates.sort();
    candidates.dedup();
    Ok(RecordSolution { d_k: rec.d_k, status: outcome.status, candidates, outcome })
}

/// Solve many records, concurrently when `config.workers` allows.
pub fn solve_records(recs: &[SexticFieldRecord], config: &SearchConfig) -> Vec<Result<RecordSolution>> {
    par::map(recs.iter().collect(), config.workers, |r| solve_record(r, config))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub ok: bool,
    /// `N(X - rho*Y)`, a unit exactly when `ok`.
    pub unit: IQInt,
}

/// Evaluate the norm form at a published tuple.
pub fn verify_published(rec: &SexticFieldRecord, t: [i64; 4]) -> Verification {
    let [x1, x2, y1, y2] = t;
    let x = rec.field.int(x1, y1);
    let y = rec.field.int(x2, y2);
    let unit = rho_poly(rec).homogeneous_value(&x, &y);
    Verification { ok: unit.is_unit(), unit }
}

/// The records shipped with the crate.
pub fn embedded_records() -> Vec<SexticFieldRecord> {
    parse_records(crate::fixtures::SEXTIC_FIELDS).expect("embedded sextic records parse")
}
