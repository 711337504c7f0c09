//! Normal dotted diagrams of the Brauer supercategory.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::word::{Gen, GenWord};

/// A boundary point: `B(i)` on the bottom edge, `T(i)` on the top edge,
/// both 1-based left to right. All bottom points order before top points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pt {
    B(u32),
    T(u32),
}

impl Pt {
    pub fn index(self) -> u32 {
        match self {
            Pt::B(i) | Pt::T(i) => i,
        }
    }

    pub fn is_bottom(self) -> bool {
        matches!(self, Pt::B(_))
    }

    /// Packs the point into the integer convention 1..=a for bottom,
    /// a+1..=a+b for top.
    pub fn to_int(self, a: u32) -> u32 {
        match self {
            Pt::B(i) => i,
            Pt::T(i) => a + i,
        }
    }

    /// Inverse of `to_int`.
    pub fn from_int(v: u32, a: u32, b: u32) -> Option<Pt> {
        if (1..=a).contains(&v) {
            Some(Pt::B(v))
        } else if v > a && v <= a + b {
            Some(Pt::T(v - a))
        } else {
            None
        }
    }
}

impl fmt::Display for Pt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pt::B(i) => write!(f, "B{i}"),
            Pt::T(i) => write!(f, "T{i}"),
        }
    }
}

/// The three string shapes of a connector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StringKind {
    Cap,
    Cup,
    Through,
}

/// Classifies a normalized pair (smaller point first).
pub fn string_kind(pair: (Pt, Pt)) -> StringKind {
    match pair {
        (Pt::B(_), Pt::B(_)) => StringKind::Cap,
        (Pt::T(_), Pt::T(_)) => StringKind::Cup,
        (Pt::B(_), Pt::T(_)) => StringKind::Through,
        (Pt::T(_), Pt::B(_)) => StringKind::Through,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("invalid connector: {0}")]
    BadConnector(String),
    #[error("invalid dotted diagram: {0}")]
    BadDiagram(String),
}

/// A perfect matching on the boundary points of a (source `a`, target `b`)
/// diagram. Pairs are stored with the smaller point first and sorted by
/// their first point, which makes equality structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Connector {
    a: u32,
    b: u32,
    pairs: Vec<(Pt, Pt)>,
}

impl Connector {
    pub fn new(a: u32, b: u32, mut pairs: Vec<(Pt, Pt)>) -> Result<Connector, DiagramError> {
        for pair in &mut pairs {
            if pair.0 > pair.1 {
                *pair = (pair.1, pair.0);
            }
            if pair.0 == pair.1 {
                return Err(DiagramError::BadConnector(format!("point {} paired with itself", pair.0)));
            }
        }
        pairs.sort();
        let total = (a + b) as usize;
        if pairs.len() * 2 != total {
            return Err(DiagramError::BadConnector(format!(
                "{} pairs cannot match {} points",
                pairs.len(),
                total
            )));
        }
        let mut seen = vec![false; total];
        for &(p, q) in &pairs {
            for pt in [p, q] {
                let ok = match pt {
                    Pt::B(i) => i >= 1 && i <= a,
                    Pt::T(i) => i >= 1 && i <= b,
                };
                if !ok {
                    return Err(DiagramError::BadConnector(format!("point {pt} out of range")));
                }
                let slot = (pt.to_int(a) - 1) as usize;
                if seen[slot] {
                    return Err(DiagramError::BadConnector(format!("point {pt} used twice")));
                }
                seen[slot] = true;
            }
        }
        Ok(Connector { a, b, pairs })
    }

    pub fn identity(n: u32) -> Connector {
        let pairs = (1..=n).map(|i| (Pt::B(i), Pt::T(i))).collect();
        Connector { a: n, b: n, pairs }
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn pairs(&self) -> &[(Pt, Pt)] {
        &self.pairs
    }

    pub fn num_strings(&self) -> usize {
        self.pairs.len()
    }

    pub fn kind(&self, idx: usize) -> StringKind {
        string_kind(self.pairs[idx])
    }

    pub fn n_caps(&self) -> usize {
        self.pairs.iter().filter(|&&p| string_kind(p) == StringKind::Cap).count()
    }

    pub fn n_cups(&self) -> usize {
        self.pairs.iter().filter(|&&p| string_kind(p) == StringKind::Cup).count()
    }

    /// Parity of any diagram with this connector: (#cups + #caps) mod 2.
    pub fn parity(&self) -> u8 {
        ((self.n_caps() + self.n_cups()) % 2) as u8
    }

    /// Index of the string containing the given point.
    pub fn index_at(&self, p: Pt) -> usize {
        self.pairs
            .iter()
            .position(|&(x, y)| x == p || y == p)
            .expect("point not on this connector")
    }

    pub fn partner(&self, p: Pt) -> Pt {
        let (x, y) = self.pairs[self.index_at(p)];
        if x == p {
            y
        } else {
            x
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a == self.b && self.pairs.iter().enumerate().all(|(i, &(x, y))| {
            x == Pt::B(i as u32 + 1) && y == Pt::T(i as u32 + 1)
        })
    }
}

/// A normal dotted diagram: a connector plus a dot count per string. Dots sit
/// at the canonical position of their string (bottom end of a through string,
/// left end of a cap, left end of a cup).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DottedDiagram {
    conn: Connector,
    dots: Vec<u32>,
}

impl DottedDiagram {
    pub fn new(conn: Connector, dots: Vec<u32>) -> Result<DottedDiagram, DiagramError> {
        if dots.len() != conn.num_strings() {
            return Err(DiagramError::BadDiagram(format!(
                "{} dot counts for {} strings",
                dots.len(),
                conn.num_strings()
            )));
        }
        Ok(DottedDiagram { conn, dots })
    }

    pub fn undotted(conn: Connector) -> DottedDiagram {
        let dots = vec![0; conn.num_strings()];
        DottedDiagram { conn, dots }
    }

    /// Builds a diagram from unordered (pair, dot count) data.
    pub fn from_parts(
        a: u32,
        b: u32,
        strings: Vec<((Pt, Pt), u32)>,
    ) -> Result<DottedDiagram, DiagramError> {
        let mut strings: Vec<((Pt, Pt), u32)> = strings
            .into_iter()
            .map(|((p, q), k)| (if p <= q { (p, q) } else { (q, p) }, k))
            .collect();
        strings.sort();
        let pairs = strings.iter().map(|&(pq, _)| pq).collect();
        let dots = strings.iter().map(|&(_, k)| k).collect();
        let conn = Connector::new(a, b, pairs)?;
        DottedDiagram::new(conn, dots)
    }

    pub fn identity(n: u32) -> DottedDiagram {
        DottedDiagram::undotted(Connector::identity(n))
    }

    pub fn a(&self) -> u32 {
        self.conn.a()
    }

    pub fn b(&self) -> u32 {
        self.conn.b()
    }

    pub fn connector(&self) -> &Connector {
        &self.conn
    }

    pub fn dots(&self) -> &[u32] {
        &self.dots
    }

    pub fn total_dots(&self) -> u32 {
        self.dots.iter().sum()
    }

    pub fn parity(&self) -> u8 {
        self.conn.parity()
    }

    pub fn strings(&self) -> impl Iterator<Item = ((Pt, Pt), u32)> + '_ {
        self.conn.pairs().iter().copied().zip(self.dots.iter().copied())
    }

    /// Dot count held at bottom point `p`: the stored count when `p` is the
    /// bottom end of a through string or the left end of a cap, else 0.
    pub fn dots_at_bottom(&self, p: u32) -> u32 {
        let idx = self.conn.index_at(Pt::B(p));
        if self.conn.pairs()[idx].0 == Pt::B(p) {
            self.dots[idx]
        } else {
            0
        }
    }

    /// Index, pair, and dot count of the string containing bottom point `p`.
    pub fn string_at_bottom(&self, p: u32) -> (usize, (Pt, Pt), u32) {
        let idx = self.conn.index_at(Pt::B(p));
        (idx, self.conn.pairs()[idx], self.dots[idx])
    }

    pub fn with_dots_added(&self, idx: usize, n: u32) -> DottedDiagram {
        let mut out = self.clone();
        out.dots[idx] += n;
        out
    }

    pub fn with_dots_removed(&self, idx: usize, n: u32) -> DottedDiagram {
        let mut out = self.clone();
        assert!(out.dots[idx] >= n, "removing more dots than present");
        out.dots[idx] -= n;
        out
    }
}

impl fmt::Display for DottedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, ((p, q), k)) in self.strings().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{{{p},{q}}}")?;
            if k > 0 {
                write!(f, ":{k}")?;
            }
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    a: u32,
    b: u32,
    pairs: Vec<[u32; 2]>,
    #[serde(default)]
    dots: Vec<([u32; 2], u32)>,
}

impl Serialize for DottedDiagram {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let a = self.a();
        let json = DiagramJson {
            a,
            b: self.b(),
            pairs: self
                .conn
                .pairs()
                .iter()
                .map(|&(p, q)| [p.to_int(a), q.to_int(a)])
                .collect(),
            dots: self
                .strings()
                .filter(|&(_, k)| k > 0)
                .map(|((p, q), k)| ([p.to_int(a), q.to_int(a)], k))
                .collect(),
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DottedDiagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let json = DiagramJson::deserialize(d)?;
        let point = |v: u32| {
            Pt::from_int(v, json.a, json.b)
                .ok_or_else(|| D::Error::custom(format!("point {v} out of range")))
        };
        let mut pairs = Vec::with_capacity(json.pairs.len());
        for [p, q] in &json.pairs {
            pairs.push((point(*p)?, point(*q)?));
        }
        let conn = Connector::new(json.a, json.b, pairs).map_err(D::Error::custom)?;
        let mut dots = vec![0u32; conn.num_strings()];
        for ([p, q], k) in &json.dots {
            let (p, q) = (point(*p)?, point(*q)?);
            let (p, q) = if p <= q { (p, q) } else { (q, p) };
            let idx = conn
                .pairs()
                .iter()
                .position(|&pq| pq == (p, q))
                .ok_or_else(|| D::Error::custom(format!("dots on missing pair {{{p},{q}}}")))?;
            dots[idx] += k;
        }
        DottedDiagram::new(conn, dots).map_err(D::Error::custom)
    }
}

/// The canonical total order on the strings of a connector: caps by left end
/// ascending, then through strings by bottom end ascending, then cups by
/// right end descending. Entries index into the connector's pair list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringOrder {
    order: Vec<usize>,
}

impl StringOrder {
    pub fn of(conn: &Connector) -> StringOrder {
        let mut caps = Vec::new();
        let mut throughs = Vec::new();
        let mut cups = Vec::new();
        for (idx, &pair) in conn.pairs().iter().enumerate() {
            match string_kind(pair) {
                StringKind::Cap => caps.push(idx),
                StringKind::Through => throughs.push(idx),
                StringKind::Cup => cups.push(idx),
            }
        }
        cups.sort_by_key(|&idx| std::cmp::Reverse(conn.pairs()[idx].1));
        let mut order = caps;
        order.extend(throughs);
        order.extend(cups);
        StringOrder { order }
    }

    pub fn indices(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Double factorial of an odd argument, with values at or below zero mapped
/// to 1 so that the 0-point matching count works out.
fn double_factorial(n: i64) -> BigUint {
    let mut acc = BigUint::one();
    let mut m = n;
    while m > 1 {
        acc *= BigUint::from(m as u64);
        m -= 2;
    }
    acc
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

/// Number of normal dotted diagrams with source `a`, target `b`, and exactly
/// `k` dots.
pub fn count_basis(a: u32, b: u32, k: u32) -> BigUint {
    if a % 2 != b % 2 {
        return BigUint::zero();
    }
    let s = (a + b) / 2;
    let distributions = if k == 0 {
        BigUint::one()
    } else if s == 0 {
        BigUint::zero()
    } else {
        binomial((s + k - 1) as u64, k as u64)
    };
    distributions * double_factorial(a as i64 + b as i64 - 1)
}

/// All perfect matchings of the `a + b` boundary points, in lexicographic
/// order of their sorted pair lists.
pub fn enumerate_connectors(a: u32, b: u32) -> Vec<Connector> {
    if (a + b) % 2 != 0 {
        return Vec::new();
    }
    let points: Vec<Pt> =
        (1..=a).map(Pt::B).chain((1..=b).map(Pt::T)).collect();
    let mut out = Vec::new();
    let mut pairs = Vec::new();
    match_points(&points, &mut pairs, &mut out, a, b);
    out
}

fn match_points(
    points: &[Pt],
    pairs: &mut Vec<(Pt, Pt)>,
    out: &mut Vec<Connector>,
    a: u32,
    b: u32,
) {
    if points.is_empty() {
        out.push(Connector { a, b, pairs: pairs.clone() });
        return;
    }
    let p0 = points[0];
    for j in 1..points.len() {
        let mut rest: Vec<Pt> = Vec::with_capacity(points.len() - 2);
        rest.extend_from_slice(&points[1..j]);
        rest.extend_from_slice(&points[j + 1..]);
        pairs.push((p0, points[j]));
        match_points(&rest, pairs, out, a, b);
        pairs.pop();
    }
}

fn compositions_colex(k: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if k == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for last in 0..=k {
        for mut head in compositions_colex(k - last, parts - 1) {
            head.push(last);
            out.push(head);
        }
    }
    out
}

/// All normal dotted diagrams with exactly `k` dots, connectors in
/// enumeration order and dot distributions in colex order over the
/// string order.
pub fn enumerate_basis(a: u32, b: u32, k: u32) -> Vec<DottedDiagram> {
    let mut out = Vec::new();
    for conn in enumerate_connectors(a, b) {
        let order = StringOrder::of(&conn);
        for dist in compositions_colex(k, order.len()) {
            let mut dots = vec![0u32; conn.num_strings()];
            for (pos, &idx) in order.indices().iter().enumerate() {
                dots[idx] = dist[pos];
            }
            out.push(DottedDiagram { conn: conn.clone(), dots });
        }
    }
    out
}

/// Number of string pairs that cross in any normal drawing of the connector,
/// read off from endpoint interleaving around the boundary circle (bottom
/// points left to right, then top points right to left).
pub fn crossing_count(c: &Connector) -> u32 {
    let circ = |p: Pt| -> u32 {
        match p {
            Pt::B(i) => i,
            Pt::T(j) => c.a() + c.b() + 1 - j,
        }
    };
    let chords: Vec<(u32, u32)> = c
        .pairs()
        .iter()
        .map(|&(p, q)| {
            let (u, v) = (circ(p), circ(q));
            (u.min(v), u.max(v))
        })
        .collect();
    let mut count = 0;
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            let (a1, a2) = chords[i];
            let (b1, b2) = chords[j];
            let interleaved = (a1 < b1 && b1 < a2 && a2 < b2) || (b1 < a1 && a1 < b2 && b2 < a2);
            if interleaved {
                count += 1;
            }
        }
    }
    count
}

/// The upside-down diagram with the sign (-1)^(crossings + #cups + dots).
/// This is the dot-degree-preserving leading term of the flip functor's
/// image of the basis element; on undotted diagrams it is the whole image.
/// Dots sliding back to canonical position past crossings contribute the
/// lower-degree terms, which only the word-level flip produces.
pub fn flip_basis(d: &DottedDiagram) -> (i8, DottedDiagram) {
    let conn = d.connector();
    let exp = crossing_count(conn) + conn.n_cups() as u32 + d.total_dots();
    let sign = if exp % 2 == 0 { 1 } else { -1 };
    let flip_pt = |p: Pt| match p {
        Pt::B(i) => Pt::T(i),
        Pt::T(i) => Pt::B(i),
    };
    let strings = d
        .strings()
        .map(|((p, q), k)| ((flip_pt(p), flip_pt(q)), k))
        .collect();
    let flipped = DottedDiagram::from_parts(conn.b(), conn.a(), strings)
        .expect("flipping preserves matchings");
    (sign, flipped)
}

/// What a letter of a canonical word touches in its diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LetterTag {
    /// Dot letter feeding the string with this index.
    Dot(usize),
    /// Cup-creation letter for the cup with this index.
    Cup(usize),
    /// Cap letter for the cap with this index.
    Cap(usize),
    /// Crossing letter.
    Cross,
}

/// Generator word realizing the diagram, read top to bottom: cup dots, cup
/// creations (higher cups first), through-string crossings, caps (higher caps
/// last), bottom dots. Its normal form is exactly the diagram itself with
/// coefficient one.
pub fn canonical_word(d: &DottedDiagram) -> GenWord {
    canonical_word_tagged(d).0
}

/// `canonical_word` plus a parallel tag per letter.
pub fn canonical_word_tagged(d: &DottedDiagram) -> (GenWord, Vec<LetterTag>) {
    let conn = d.connector();
    let mut letters: Vec<Gen> = Vec::new();
    let mut tags: Vec<LetterTag> = Vec::new();

    for (idx, ((p, q), k)) in d.strings().enumerate() {
        if string_kind((p, q)) == StringKind::Cup && k > 0 {
            for _ in 0..k {
                letters.push(Gen::Y(p.index()));
                tags.push(LetterTag::Dot(idx));
            }
        }
    }

    let mut cups: Vec<usize> = (0..conn.num_strings())
        .filter(|&idx| conn.kind(idx) == StringKind::Cup)
        .collect();
    cups.sort_by_key(|&idx| std::cmp::Reverse(conn.pairs()[idx].0));
    let mut top_wires: Vec<u32> = (1..=conn.b()).collect();
    for idx in cups {
        let (l, r) = conn.pairs()[idx];
        let x = top_wires.iter().position(|&w| w == l.index()).unwrap() + 1;
        let y = top_wires.iter().position(|&w| w == r.index()).unwrap() + 1;
        for t in (x + 1..y).rev() {
            letters.push(Gen::S(t as u32));
            tags.push(LetterTag::Cross);
        }
        letters.push(Gen::BStar(x as u32));
        tags.push(LetterTag::Cup(idx));
        top_wires.remove(y - 1);
        top_wires.remove(x - 1);
    }

    let mut through: Vec<u32> = top_wires
        .iter()
        .map(|&j| conn.partner(Pt::T(j)).index())
        .collect();
    loop {
        let mut swapped = false;
        for t in 0..through.len().saturating_sub(1) {
            if through[t] > through[t + 1] {
                through.swap(t, t + 1);
                letters.push(Gen::S(t as u32 + 1));
                tags.push(LetterTag::Cross);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }

    let mut caps: Vec<usize> = (0..conn.num_strings())
        .filter(|&idx| conn.kind(idx) == StringKind::Cap)
        .collect();
    caps.sort_by_key(|&idx| std::cmp::Reverse(conn.pairs()[idx].0));
    let mut bot_wires: Vec<u32> = (1..=conn.a()).collect();
    let mut apply_seq: Vec<(Gen, LetterTag)> = Vec::new();
    for idx in caps {
        let (l, r) = conn.pairs()[idx];
        let x = bot_wires.iter().position(|&w| w == l.index()).unwrap() + 1;
        let y = bot_wires.iter().position(|&w| w == r.index()).unwrap() + 1;
        for t in (x + 1..y).rev() {
            apply_seq.push((Gen::S(t as u32), LetterTag::Cross));
            bot_wires.swap(t - 1, t);
        }
        apply_seq.push((Gen::B(x as u32), LetterTag::Cap(idx)));
        bot_wires.remove(x);
        bot_wires.remove(x - 1);
    }
    for (g, tag) in apply_seq.into_iter().rev() {
        letters.push(g);
        tags.push(tag);
    }

    for (idx, ((p, _), k)) in d.strings().enumerate() {
        if p.is_bottom() && k > 0 {
            for _ in 0..k {
                letters.push(Gen::Y(p.index()));
                tags.push(LetterTag::Dot(idx));
            }
        }
    }

    let word = GenWord::new(d.a(), letters).expect("canonical word is arity-correct");
    debug_assert_eq!(word.target(), d.b());
    (word, tags)
}

/// Test helper: builds a diagram from raw string data, panicking on bad input.
#[cfg(test)]
pub(crate) fn diagram(a: u32, b: u32, strings: &[((Pt, Pt), u32)]) -> DottedDiagram {
    DottedDiagram::from_parts(a, b, strings.to_vec()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_closed_formula() {
        assert_eq!(count_basis(2, 2, 0), BigUint::from(3u32));
        assert_eq!(count_basis(3, 3, 2), BigUint::from(90u32));
        assert_eq!(count_basis(1, 2, 5), BigUint::zero());
        assert_eq!(count_basis(0, 0, 0), BigUint::one());
        assert_eq!(count_basis(0, 0, 3), BigUint::zero());
        assert_eq!(count_basis(1, 1, 2), BigUint::one());
        assert_eq!(count_basis(4, 2, 1), BigUint::from(45u32));
    }

    #[test]
    fn enumeration_agrees_with_counts() {
        for a in 0..=4u32 {
            for b in 0..=4u32 {
                for k in 0..=3u32 {
                    let basis = enumerate_basis(a, b, k);
                    assert_eq!(
                        BigUint::from(basis.len()),
                        count_basis(a, b, k),
                        "a={a} b={b} k={k}"
                    );
                    for d in &basis {
                        assert_eq!(d.total_dots(), k);
                    }
                }
            }
        }
    }

    #[test]
    fn connector_enumeration_is_lexicographic() {
        let conns = enumerate_connectors(2, 2);
        assert_eq!(conns.len(), 3);
        assert_eq!(conns[0].pairs(), &[(Pt::B(1), Pt::B(2)), (Pt::T(1), Pt::T(2))]);
        assert_eq!(conns[1].pairs(), &[(Pt::B(1), Pt::T(1)), (Pt::B(2), Pt::T(2))]);
        assert_eq!(conns[2].pairs(), &[(Pt::B(1), Pt::T(2)), (Pt::B(2), Pt::T(1))]);
        assert_eq!(enumerate_connectors(1, 1).len(), 1);
        assert!(enumerate_connectors(1, 2).is_empty());
        assert_eq!(enumerate_connectors(0, 0).len(), 1);
    }

    #[test]
    fn crossing_count_from_interleaving() {
        let id2 = Connector::identity(2);
        assert_eq!(crossing_count(&id2), 0);
        let swap = Connector::new(2, 2, vec![(Pt::B(1), Pt::T(2)), (Pt::B(2), Pt::T(1))]).unwrap();
        assert_eq!(crossing_count(&swap), 1);
        let e = Connector::new(2, 2, vec![(Pt::B(1), Pt::B(2)), (Pt::T(1), Pt::T(2))]).unwrap();
        assert_eq!(crossing_count(&e), 0);
        let crossed_cups =
            Connector::new(0, 4, vec![(Pt::T(1), Pt::T(3)), (Pt::T(2), Pt::T(4))]).unwrap();
        assert_eq!(crossing_count(&crossed_cups), 1);
        let nested_cups =
            Connector::new(0, 4, vec![(Pt::T(1), Pt::T(4)), (Pt::T(2), Pt::T(3))]).unwrap();
        assert_eq!(crossing_count(&nested_cups), 0);
        let far_cap =
            Connector::new(3, 1, vec![(Pt::B(1), Pt::B(3)), (Pt::B(2), Pt::T(1))]).unwrap();
        assert_eq!(crossing_count(&far_cap), 1);
    }

    #[test]
    fn flip_examples_and_periodicity() {
        let cap = diagram(2, 0, &[((Pt::B(1), Pt::B(2)), 0)]);
        let cup = diagram(0, 2, &[((Pt::T(1), Pt::T(2)), 0)]);
        assert_eq!(flip_basis(&cap), (1, cup.clone()));
        assert_eq!(flip_basis(&cup), (-1, cap));

        let swap = diagram(2, 2, &[((Pt::B(1), Pt::T(2)), 0), ((Pt::B(2), Pt::T(1)), 0)]);
        assert_eq!(flip_basis(&swap), (-1, swap.clone()));

        let dotted = diagram(1, 1, &[((Pt::B(1), Pt::T(1)), 1)]);
        assert_eq!(flip_basis(&dotted), (-1, dotted.clone()));

        for d in enumerate_basis(2, 2, 1).iter().chain(enumerate_basis(3, 1, 2).iter()) {
            let (s1, d1) = flip_basis(d);
            let (s2, d2) = flip_basis(&d1);
            let expected = if d.parity() == 0 { 1 } else { -1 };
            assert_eq!(s1 * s2, expected, "double flip sign of {d}");
            let (s3, d3) = flip_basis(&d2);
            let (s4, d4) = flip_basis(&d3);
            assert_eq!(s1 * s2 * s3 * s4, 1);
            assert_eq!(&d4, d);
        }
    }

    #[test]
    fn canonical_words_of_small_diagrams() {
        let cases: Vec<(DottedDiagram, &str)> = vec![
            (diagram(1, 1, &[((Pt::B(1), Pt::T(1)), 2)]), "y1^2"),
            (diagram(2, 0, &[((Pt::B(1), Pt::B(2)), 1)]), "b1 y1"),
            (
                diagram(2, 2, &[((Pt::B(1), Pt::T(2)), 1), ((Pt::B(2), Pt::T(1)), 0)]),
                "s1 y1",
            ),
            (
                diagram(0, 4, &[((Pt::T(2), Pt::T(3)), 0), ((Pt::T(1), Pt::T(4)), 0)]),
                "b2* b1*",
            ),
            (
                diagram(0, 4, &[((Pt::T(1), Pt::T(3)), 0), ((Pt::T(2), Pt::T(4)), 0)]),
                "s3 b2* b1*",
            ),
            (diagram(4, 0, &[((Pt::B(1), Pt::B(4)), 0), ((Pt::B(2), Pt::B(3)), 0)]), "b1 b2"),
            (
                diagram(4, 0, &[((Pt::B(1), Pt::B(3)), 0), ((Pt::B(2), Pt::B(4)), 0)]),
                "b1 b2 s3",
            ),
            (
                diagram(
                    3,
                    3,
                    &[
                        ((Pt::B(1), Pt::T(2)), 0),
                        ((Pt::B(2), Pt::B(3)), 0),
                        ((Pt::T(1), Pt::T(3)), 0),
                    ],
                ),
                "s2 b1* b2",
            ),
            (
                diagram(3, 1, &[((Pt::B(1), Pt::B(3)), 1), ((Pt::B(2), Pt::T(1)), 0)]),
                "b1 s2 y1",
            ),
            (diagram(0, 2, &[((Pt::T(1), Pt::T(2)), 1)]), "y1 b1*"),
            (
                diagram(1, 3, &[((Pt::B(1), Pt::T(2)), 0), ((Pt::T(1), Pt::T(3)), 1)]),
                "y1 s2 b1*",
            ),
        ];
        for (d, expected) in cases {
            let w = canonical_word(&d);
            assert_eq!(w.to_string(), expected, "word of {d}");
            assert_eq!(w.source(), d.a());
            assert_eq!(w.target(), d.b());
        }
    }

    #[test]
    fn canonical_word_tags_line_up() {
        let d = diagram(
            3,
            3,
            &[((Pt::B(1), Pt::T(2)), 1), ((Pt::B(2), Pt::B(3)), 2), ((Pt::T(1), Pt::T(3)), 1)],
        );
        let (w, tags) = canonical_word_tagged(&d);
        assert_eq!(w.len(), tags.len());
        let cup_idx = d.connector().index_at(Pt::T(1));
        let cap_idx = d.connector().index_at(Pt::B(2));
        let through_idx = d.connector().index_at(Pt::B(1));
        let mut dot_tags = Vec::new();
        for (g, tag) in w.gens().iter().zip(&tags) {
            match g {
                Gen::Y(_) => dot_tags.push(*tag),
                Gen::B(_) => assert_eq!(*tag, LetterTag::Cap(cap_idx)),
                Gen::BStar(_) => assert_eq!(*tag, LetterTag::Cup(cup_idx)),
                Gen::S(_) => assert_eq!(*tag, LetterTag::Cross),
            }
        }
        assert_eq!(
            dot_tags,
            vec![
                LetterTag::Dot(cup_idx),
                LetterTag::Dot(through_idx),
                LetterTag::Dot(cap_idx),
                LetterTag::Dot(cap_idx)
            ]
        );
    }

    #[test]
    fn json_round_trip() {
        for d in enumerate_basis(3, 1, 2) {
            let text = serde_json::to_string(&d).unwrap();
            let back: DottedDiagram = serde_json::from_str(&text).unwrap();
            assert_eq!(back, d);
        }
        let text = r#"{"a":2,"b":2,"pairs":[[1,2],[3,4]],"dots":[[[1,2],2]]}"#;
        let d: DottedDiagram = serde_json::from_str(text).unwrap();
        assert_eq!(d, diagram(2, 2, &[((Pt::B(1), Pt::B(2)), 2), ((Pt::T(1), Pt::T(2)), 0)]));
        assert!(serde_json::from_str::<DottedDiagram>(r#"{"a":1,"b":1,"pairs":[[1,1]]}"#).is_err());
        assert!(serde_json::from_str::<DottedDiagram>(r#"{"a":2,"b":0,"pairs":[[1,3]]}"#).is_err());
    }

    #[test]
    fn string_order_groups_caps_throughs_cups() {
        let conn = Connector::new(
            4,
            4,
            vec![
                (Pt::B(1), Pt::B(4)),
                (Pt::B(2), Pt::T(3)),
                (Pt::B(3), Pt::T(4)),
                (Pt::T(1), Pt::T(2)),
            ],
        )
        .unwrap();
        let order = StringOrder::of(&conn);
        let kinds: Vec<StringKind> = order.indices().iter().map(|&i| conn.kind(i)).collect();
        assert_eq!(
            kinds,
            vec![StringKind::Cap, StringKind::Through, StringKind::Through, StringKind::Cup]
        );

        let two_cups =
            Connector::new(0, 4, vec![(Pt::T(1), Pt::T(3)), (Pt::T(2), Pt::T(4))]).unwrap();
        let order = StringOrder::of(&two_cups);
        let right_ends: Vec<u32> =
            order.indices().iter().map(|&i| two_cups.pairs()[i].1.index()).collect();
        assert_eq!(right_ends, vec![4, 3]);
    }
}
