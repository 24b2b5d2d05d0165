//! Orbifold signatures: a dimension `n` and the multiset of locus components
//! `(degree, multiplicity)` written in bracket notation, e.g. `[2_2, 3,3,3]`.
//!
//! Smoothness and general position of the hypersurfaces are standing
//! assumptions; only the combinatorial data is recorded.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Generic value of the b-function on a component: an integer >= 2, or `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn finite(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Syntax {
                column: 0,
                message: format!("multiplicity {m} < 2"),
            });
        }
        Ok(Multiplicity::Finite(m))
    }

    pub fn value(self) -> Option<u64> {
        match self {
            Multiplicity::Finite(m) => Some(m),
            Multiplicity::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Multiplicity::Infinite)
    }
}

impl Ord for Multiplicity {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => a.cmp(b),
            (Multiplicity::Finite(_), Multiplicity::Infinite) => Ordering::Less,
            (Multiplicity::Infinite, Multiplicity::Finite(_)) => Ordering::Greater,
            (Multiplicity::Infinite, Multiplicity::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Multiplicity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocusComponent {
    pub degree: u64,
    pub multiplicity: Multiplicity,
}

impl LocusComponent {
    pub fn new(degree: u64, multiplicity: u64) -> Self {
        debug_assert!(degree >= 1 && multiplicity >= 2);
        LocusComponent {
            degree,
            multiplicity: Multiplicity::Finite(multiplicity),
        }
    }

    pub fn infinite() -> Self {
        LocusComponent {
            degree: 1,
            multiplicity: Multiplicity::Infinite,
        }
    }

    pub fn is_linear(&self) -> bool {
        self.degree == 1
    }

    pub fn finite_multiplicity(&self) -> Result<u64> {
        self.multiplicity.value().ok_or(Error::InfiniteMultiplicity)
    }

    /// Canonical order: degree descending, then multiplicity ascending.
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        other
            .degree
            .cmp(&self.degree)
            .then(self.multiplicity.cmp(&other.multiplicity))
    }

    fn write(&self, f: &mut impl fmt::Write, infinity: &str) -> fmt::Result {
        match self.multiplicity {
            Multiplicity::Infinite => f.write_str(infinity),
            Multiplicity::Finite(m) if self.degree == 1 => write!(f, "{m}"),
            Multiplicity::Finite(m) => write!(f, "{m}_{}", self.degree),
        }
    }
}

/// Sorts components into canonical order. Idempotent.
pub fn canonicalize(mut components: Vec<LocusComponent>) -> Vec<LocusComponent> {
    components.sort_by(LocusComponent::canonical_cmp);
    components
}

/// The pair (ℙⁿ, b) described by its locus. Components are always kept in
/// canonical order, so derived equality is equality of multisets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbifoldSignature {
    dim: u32,
    components: Vec<LocusComponent>,
}

impl OrbifoldSignature {
    pub fn new(dim: u32, components: Vec<LocusComponent>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if components.is_empty() {
            return Err(Error::EmptySignature);
        }
        for c in &components {
            if c.degree == 0 {
                return Err(Error::InvalidComponent("degree 0".into()));
            }
            if c.multiplicity.is_infinite() && c.degree != 1 {
                return Err(Error::InvalidComponent(format!("infinite multiplicity on a degree-{} hypersurface", c.degree)));
            }
        }
        Ok(OrbifoldSignature {
            dim,
            components: canonicalize(components),
        })
    }

    /// Shorthand for an all-linear signature.
    pub fn linear(dim: u32, multiplicities: &[u64]) -> Result<Self> {
        let comps = multiplicities
            .iter()
            .map(|&m| Multiplicity::finite(m).map(|m| LocusComponent { degree: 1, multiplicity: m }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, comps)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn components(&self) -> &[LocusComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.components.iter().map(|c| c.degree).sum()
    }

    pub fn is_linear(&self) -> bool {
        self.components.iter().all(LocusComponent::is_linear)
    }

    pub fn has_infinite(&self) -> bool {
        self.components.iter().any(|c| c.multiplicity.is_infinite())
    }

    /// Multiplicities, failing on `∞`.
    pub fn multiplicities(&self) -> Result<Vec<u64>> {
        self.components.iter().map(LocusComponent::finite_multiplicity).collect()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.degree).collect()
    }

    /// `f_i = m_i / gcd(m_i, d_i)`.
    pub fn f_vector(&self) -> Result<FVector> {
        f_vector_of(&self.components)
    }

    /// `b` on the stratum where exactly the components in `subset` meet:
    /// the product of their multiplicities.
    pub fn stratum_b_value(&self, subset: &[usize]) -> Result<BigUint> {
        check_subset(subset, self.components.len(), self.dim)?;
        let mut b = BigUint::one();
        for &i in subset {
            b *= self.components[i].finite_multiplicity()?;
        }
        Ok(b)
    }

    /// Bracket notation with `inf` for infinite components.
    pub fn render_machine(&self) -> String {
        render_components(&self.components, "inf")
    }

    /// Bracket notation with `∞` for infinite components.
    pub fn render_human(&self) -> String {
        render_components(&self.components, "∞")
    }
}

/// Orders signatures for census listings: total degree, then more components
/// first, then componentwise in canonical order.
impl Ord for OrbifoldSignature {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.total_degree().cmp(&other.total_degree()))
            .then(other.components.len().cmp(&self.components.len()))
            .then_with(|| {
                for (a, b) in self.components.iter().zip(&other.components) {
                    let o = a.canonical_cmp(b);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for OrbifoldSignature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrbifoldSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_human())
    }
}

impl Serialize for OrbifoldSignature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render_machine())
    }
}

pub fn render_components(components: &[LocusComponent], infinity: &str) -> String {
    let mut out = String::from("[");
    for (i, c) in components.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        c.write(&mut out, infinity).expect("writing to String");
    }
    out.push(']');
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FVector(pub Vec<u64>);

impl FVector {
    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn lcm(&self) -> u64 {
        self.0.iter().fold(1, |acc, &f| acc.lcm(&f))
    }
}

pub fn f_vector_of(components: &[LocusComponent]) -> Result<FVector> {
    components
        .iter()
        .map(|c| {
            let m = c.finite_multiplicity()?;
            Ok(m / m.gcd(&c.degree))
        })
        .collect::<Result<Vec<_>>>()
        .map(FVector)
}

/// Validates a stratum index set: in range, no repeats, at most `dim` entries.
pub(crate) fn check_subset(subset: &[usize], len: usize, dim: u32) -> Result<()> {
    if subset.len() > dim as usize {
        return Err(Error::SubsetTooLarge { size: subset.len(), dim });
    }
    let mut seen = vec![false; len];
    for &i in subset {
        if i >= len {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::DuplicateIndex(i));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Parsing

/// Parses bracket notation into a canonical signature on ℙ^`dim`.
pub fn parse_signature(text: &str, dim: u32) -> Result<OrbifoldSignature> {
    OrbifoldSignature::new(dim, parse_components(text)?)
}

/// Parses bracket notation keeping the printed component order.
///
/// ```text
/// SIG  := '[' ITEM (',' ITEM)* ']'
/// ITEM := MULT ('_' DEGREE)? | '∞' ('_' 1)? | 'inf' ('_' 1)?
/// ```
pub fn parse_components(text: &str) -> Result<Vec<LocusComponent>> {
    Parser::new(text).signature()
}

impl FromStr for LocusComponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s);
        p.skip_ws();
        let c = p.item()?;
        p.skip_ws();
        p.expect_end()?;
        Ok(c)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Parser { chars: src.chars().collect(), pos: 0 }
    }

    fn err<T>(&self, column: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { column: column + 1, message: message.into() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.err(self.pos, format!("expected '{c}', found '{x}'")),
            None => self.err(self.pos, format!("expected '{c}', found end of input")),
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(x) => self.err(self.pos, format!("unexpected trailing '{x}'")),
        }
    }

    fn signature(&mut self) -> Result<Vec<LocusComponent>> {
        self.expect('[')?;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            items.push(self.item()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    break;
                }
                Some(x) => return self.err(self.pos, format!("expected ',' or ']', found '{x}'")),
                None => return self.err(self.pos, "unterminated signature, expected ']'"),
            }
        }
        self.expect_end()?;
        Ok(items)
    }

    fn number(&mut self) -> Result<(u64, usize)> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.peek() {
                Some(x) => self.err(start, format!("expected a number, found '{x}'")),
                None => self.err(start, "expected a number, found end of input"),
            };
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        match digits.parse::<u64>() {
            Ok(v) => Ok((v, start)),
            Err(_) => self.err(start, format!("number '{digits}' is too large")),
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        let w: Vec<char> = word.chars().collect();
        if self.chars[self.pos..].starts_with(&w) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn degree_suffix(&mut self) -> Result<Option<(u64, usize)>> {
        self.skip_ws();
        if self.peek() != Some('_') {
            return Ok(None);
        }
        self.pos += 1;
        self.skip_ws();
        let (d, col) = self.number()?;
        if d < 1 {
            return self.err(col, "degree must be at least 1");
        }
        Ok(Some((d, col)))
    }

    fn item(&mut self) -> Result<LocusComponent> {
        let start = self.pos;
        if self.keyword("∞") || self.keyword("inf") {
            if let Some((d, col)) = self.degree_suffix()? {
                if d != 1 {
                    return self.err(col, "infinite multiplicity is only allowed on linear components");
                }
            }
            return Ok(LocusComponent::infinite());
        }
        let (m, _) = self.number()?;
        if m < 2 {
            return self.err(start, format!("multiplicity {m} < 2"));
        }
        let degree = self.degree_suffix()?.map_or(1, |(d, _)| d);
        Ok(LocusComponent::new(degree, m))
    }
}
