//! Words in the generators of the affine VW supercategory.

use std::fmt;
use thiserror::Error;

/// A single generator letter. Words are read left to right as top to bottom,
/// so the rightmost letter is applied to the source object first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    /// Crossing of strands i and i+1.
    S(u32),
    /// Cap joining strands i and i+1, removing both.
    B(u32),
    /// Cup creating two new strands at positions i and i+1.
    BStar(u32),
    /// Dot on strand i.
    Y(u32),
}

impl Gen {
    /// The strand index the generator acts at (1-based).
    pub fn index(self) -> u32 {
        match self {
            Gen::S(i) | Gen::B(i) | Gen::BStar(i) | Gen::Y(i) => i,
        }
    }

    /// Parity of the generator: crossings and dots are even, cups and caps odd.
    pub fn parity(self) -> u8 {
        match self {
            Gen::S(_) | Gen::Y(_) => 0,
            Gen::B(_) | Gen::BStar(_) => 1,
        }
    }

    /// Arity above the generator when the arity below is `m`, or `None`
    /// when the generator does not fit at arity `m`.
    pub fn apply_from_below(self, m: u32) -> Option<u32> {
        match self {
            Gen::S(i) => (i + 1 <= m).then_some(m),
            Gen::Y(i) => (i <= m).then_some(m),
            Gen::B(i) => (i + 1 <= m).then_some(m - 2),
            Gen::BStar(i) => (i <= m + 1).then_some(m + 2),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::S(i) => write!(f, "s{i}"),
            Gen::B(i) => write!(f, "b{i}"),
            Gen::BStar(i) => write!(f, "b{i}*"),
            Gen::Y(i) => write!(f, "y{i}"),
        }
    }
}

/// Error raised while parsing or arity-checking a generator word.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("unrecognized token `{0}`")]
    BadToken(String),
    #[error("letter {position} (`{gen}`) does not fit at arity {arity}")]
    Arity { position: usize, gen: Gen, arity: u32 },
}

/// An arity-checked word in the generators, with fixed source and target.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenWord {
    source: u32,
    target: u32,
    gens: Vec<Gen>,
}

impl GenWord {
    /// Checks that `gens` composes at source arity `source` and records the
    /// resulting target arity. Letters are checked right to left.
    pub fn new(source: u32, gens: Vec<Gen>) -> Result<GenWord, WordError> {
        let target = check_stages(source, &gens)?;
        Ok(GenWord { source, target, gens })
    }

    /// The empty word on `a` strands.
    pub fn identity(a: u32) -> GenWord {
        GenWord { source: a, target: a, gens: Vec::new() }
    }

    /// Parses a whitespace-separated word such as `"b1 s2 y2^2 e1 b3*"` and
    /// arity-checks it at source arity `source`. `e<i>` is shorthand for
    /// `b<i>* b<i>`, and `^k` repeats a letter k times.
    pub fn parse(text: &str, source: u32) -> Result<GenWord, WordError> {
        let mut gens = Vec::new();
        for token in text.split_whitespace() {
            parse_token(token, &mut gens)?;
        }
        GenWord::new(source, gens)
    }

    pub fn source(&self) -> u32 {
        self.source
    }

    pub fn target(&self) -> u32 {
        self.target
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Parity of the word: the number of odd letters mod 2.
    pub fn parity(&self) -> u8 {
        (self.gens.iter().map(|g| g.parity() as u32).sum::<u32>() % 2) as u8
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.gens.len() {
            let g = self.gens[i];
            let mut j = i + 1;
            while j < self.gens.len() && self.gens[j] == g {
                j += 1;
            }
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

fn check_stages(source: u32, gens: &[Gen]) -> Result<u32, WordError> {
    let mut m = source;
    for (rev_idx, &gen) in gens.iter().rev().enumerate() {
        match gen.apply_from_below(m) {
            Some(next) => m = next,
            None => {
                return Err(WordError::Arity { position: gens.len() - rev_idx, gen, arity: m })
            }
        }
    }
    Ok(m)
}

fn parse_token(token: &str, gens: &mut Vec<Gen>) -> Result<(), WordError> {
    let bad = || WordError::BadToken(token.to_string());
    let mut chars = token.char_indices().peekable();
    let kind = chars.next().ok_or_else(bad)?.1;
    let index = parse_nat(token, &mut chars).ok_or_else(bad)?;
    if index == 0 {
        return Err(bad());
    }
    let star = matches!(chars.peek(), Some((_, '*')));
    if star {
        chars.next();
    }
    let power = if matches!(chars.peek(), Some((_, '^'))) {
        chars.next();
        parse_nat(token, &mut chars).ok_or_else(bad)?
    } else {
        1
    };
    if chars.next().is_some() {
        return Err(bad());
    }
    let unit: &[Gen] = match (kind, star) {
        ('s', false) => &[Gen::S(index)],
        ('y', false) => &[Gen::Y(index)],
        ('b', false) => &[Gen::B(index)],
        ('b', true) => &[Gen::BStar(index)],
        ('e', false) => &[Gen::BStar(index), Gen::B(index)],
        _ => return Err(bad()),
    };
    for _ in 0..power {
        gens.extend_from_slice(unit);
    }
    Ok(())
}

fn parse_nat(
    token: &str,
    chars: &mut std::iter::Peekable<std::str::CharIndices<'_>>,
) -> Option<u32> {
    let start = chars.peek()?.0;
    let mut end = start;
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_ascii_digit() {
            end = pos + c.len_utf8();
            chars.next();
        } else {
            break;
        }
    }
    if end == start {
        return None;
    }
    token[start..end].parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_checks_arity_and_computes_target() {
        let w = GenWord::parse("s1 y2", 2).unwrap();
        assert_eq!(w.source(), 2);
        assert_eq!(w.target(), 2);
        assert_eq!(w.gens(), &[Gen::S(1), Gen::Y(2)]);

        let w = GenWord::parse("b1 s2 y2 s2 b1*", 1).unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.source(), 1);
        assert_eq!(w.target(), 1);

        let w = GenWord::parse("b3*", 2).unwrap();
        assert_eq!(w.target(), 4);

        assert_eq!(
            GenWord::parse("s3", 2),
            Err(WordError::Arity { position: 1, gen: Gen::S(3), arity: 2 })
        );
        assert!(GenWord::parse("b3*", 1).is_err());
        assert!(GenWord::parse("s1 b1", 2).is_err());
    }

    #[test]
    fn sugar_and_powers_expand() {
        let w = GenWord::parse("e2", 3).unwrap();
        assert_eq!(w.gens(), &[Gen::BStar(2), Gen::B(2)]);
        assert_eq!(w.target(), 3);
        assert_eq!(w.parity(), 0);

        let w = GenWord::parse("y1^3 s2", 3).unwrap();
        assert_eq!(w.gens(), &[Gen::Y(1), Gen::Y(1), Gen::Y(1), Gen::S(2)]);

        let w = GenWord::parse("e1^2", 2).unwrap();
        assert_eq!(w.gens(), &[Gen::BStar(1), Gen::B(1), Gen::BStar(1), Gen::B(1)]);

        let w = GenWord::parse("b1*^2", 0).unwrap();
        assert_eq!(w.target(), 4);
    }

    #[test]
    fn rejects_malformed_tokens() {
        for text in ["s0", "q1", "s", "s1*", "y2**", "e1*", "b1^", "s1x", "b^2"] {
            assert!(matches!(GenWord::parse(text, 5), Err(WordError::BadToken(_))), "{text}");
        }
    }

    #[test]
    fn display_round_trips() {
        for (text, a) in [("b1 s2 y2 s2 b1*", 1), ("y1 y1 s2 b1* b2", 3), ("", 4)] {
            let w = GenWord::parse(text, a).unwrap();
            let again = GenWord::parse(&w.to_string(), a).unwrap();
            assert_eq!(w, again);
        }
        assert_eq!(GenWord::parse("e1 b2*^2", 2).unwrap().to_string(), "b1* b1 b2*^2");
        assert_eq!(GenWord::parse("y1 y1 s2", 3).unwrap().to_string(), "y1^2 s2");
    }

    #[test]
    fn identity_word_is_empty() {
        let w = GenWord::identity(3);
        assert!(w.is_empty());
        assert_eq!(w.source(), 3);
        assert_eq!(w.target(), 3);
        assert_eq!(GenWord::parse("  ", 3).unwrap(), w);
    }
}
