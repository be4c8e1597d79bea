//! Published solution tables shipped with the crate.

use std::collections::{BTreeMap, BTreeSet};

use crate::binomial::{binomial_value, extended_canonical, supported_field, SUPPORTED_D};
use crate::error::{Error, Result};
use crate::qfield::IQInt;

/// Sextic field records, one per line.
pub const SEXTIC_FIELDS: &str = include_str!("../fixtures/sextic_fields.txt");

/// Nontrivial solutions of the binomial equations, by `d` and `m`.
pub const BINOMIAL_PAIRS: &str = include_str!("../fixtures/binomial_pairs.txt");

/// One published pair for a given field and `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixturePair {
    pub d: u64,
    pub m: u64,
    pub x: IQInt,
    pub y: IQInt,
}

impl FixturePair {
    /// `X0^4 - m*Y0^4`.
    pub fn value(&self) -> IQInt {
        binomial_value(self.m, &self.x, &self.y)
    }
}

/// Expand the binomial table into individual pairs. Rows marked `*` apply to
/// every supported `d`.
pub fn parse_binomial_table(text: &str) -> Result<Vec<FixturePair>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |col: usize, msg: &str| Error::parse(col, format!("line {}: {msg}", lineno + 1));
        let (head, pairs) = line.split_once(':').ok_or_else(|| bad(0, "missing ':'"))?;
        let mut hw = head.split_whitespace();
        let ds: Vec<u64> = match hw.next() {
            Some("*") => SUPPORTED_D.to_vec(),
            Some(d) => vec![d.parse().map_err(|_| bad(0, "bad d"))?],
            None => return Err(bad(0, "missing d")),
        };
        let m: u64 = hw.next().and_then(|m| m.parse().ok()).ok_or_else(|| bad(0, "bad m"))?;
        let offset = head.len() + 1;
        let mut rest = pairs;
        while let Some(open) = rest.find('(') {
            let close = rest[open..].find(')').ok_or_else(|| bad(offset, "unclosed pair"))? + open;
            let (xs, ys) = rest[open + 1..close].split_once(',').ok_or_else(|| bad(offset, "pair needs ','"))?;
            for &d in &ds {
                let field = supported_field(d)?;
                out.push(FixturePair { d, m, x: field.parse_int(xs)?, y: field.parse_int(ys)? });
            }
            rest = &rest[close + 1..];
        }
    }
    Ok(out)
}

/// The shipped binomial table.
pub fn binomial_pairs() -> Vec<FixturePair> {
    parse_binomial_table(BINOMIAL_PAIRS).expect("embedded binomial table parses")
}

/// Expected nontrivial rows for one field with `m <= m_max`, as sets of
/// extended-orbit representatives.
pub fn expected_binomial_rows(d: u64, m_max: u64) -> BTreeMap<u64, BTreeSet<(String, String)>> {
    orbit_rows(binomial_pairs().iter().filter(|p| p.d == d && p.m <= m_max).map(|p| (p.m, &p.x, &p.y)))
}

/// Group pairs by `m` and reduce them to extended-orbit representatives
/// rendered as text, so that tables from different sources compare directly.
pub fn orbit_rows<'a>(
    pairs: impl Iterator<Item = (u64, &'a IQInt, &'a IQInt)>,
) -> BTreeMap<u64, BTreeSet<(String, String)>> {
    let mut rows: BTreeMap<u64, BTreeSet<(String, String)>> = BTreeMap::new();
    for (m, x, y) in pairs {
        let (a, b) = extended_canonical(x, y);
        rows.entry(m).or_default().insert((a.to_string(), b.to_string()));
    }
    rows
}
