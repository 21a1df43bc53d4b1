//! Words over named generators.
//!
//! A word is a list of syllables `name^exp` with no two adjacent syllables
//! on the same generator and no zero exponents. Its text form is the
//! whitespace-separated syllables, with `^1` omitted.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, ParseErrorKind, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    pub name: String,
    pub exp: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn gen(name: impl Into<String>) -> Self {
        Word::power_of(name, 1)
    }

    pub fn power_of(name: impl Into<String>, exp: i64) -> Self {
        Word::from_letters([Letter {
            name: name.into(),
            exp,
        }])
    }

    /// Normalizes by merging equal neighbours and dropping zero exponents.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some(prev) if prev.name == l.name => {
                    prev.exp += l.exp;
                    if prev.exp == 0 {
                        out.pop();
                    }
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Sum of the absolute exponents.
    pub fn len(&self) -> usize {
        self.letters.iter().map(|l| l.exp.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    name: l.name.clone(),
                    exp: -l.exp,
                })
                .collect(),
        }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Word) -> Self {
        Word::from_letters(self.letters.iter().chain(&other.letters).cloned())
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.then(&base);
        }
        out
    }

    /// `k⁻¹ self k`.
    pub fn conjugate_by(&self, k: &Word) -> Self {
        k.inverse().then(self).then(k)
    }

    /// `u⁻¹ v⁻¹ u v`.
    pub fn commutator(u: &Word, v: &Word) -> Self {
        u.inverse().then(&v.inverse()).then(u).then(v)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::empty());
        }
        let lex = |msg: String| Error::Parse {
            line: 1,
            kind: ParseErrorKind::Lexical(msg),
        };
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i64>()
                        .map_err(|_| lex(format!("bad exponent in `{tok}`")))?,
                ),
                None => (tok, 1),
            };
            if !is_identifier(name) {
                return Err(lex(format!("bad generator name in `{tok}`")));
            }
            letters.push(Letter {
                name: name.to_string(),
                exp,
            });
        }
        Ok(Word::from_letters(letters))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '+' | '-' | '\''))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if l.exp == 1 {
                f.write_str(&l.name)?;
            } else {
                write!(f, "{}^{}", l.name, l.exp)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let w = Word::parse("x0 x1^-1 x0^2").unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.to_string(), "x0 x1^-1 x0^2");
        assert_eq!(Word::parse("b+^-1 b- a").unwrap().to_string(), "b+^-1 b- a");
    }

    #[test]
    fn normalization() {
        assert!(Word::parse("x0 x0^-1").unwrap().is_empty());
        assert_eq!(Word::parse("x0 x0 x1").unwrap().to_string(), "x0^2 x1");
        let w = Word::parse("a b^-1").unwrap();
        assert!(w.then(&w.inverse()).is_empty());
    }

    #[test]
    fn commutator_shape() {
        let c = Word::commutator(&Word::gen("a"), &Word::gen("b"));
        assert_eq!(c.to_string(), "a^-1 b^-1 a b");
        assert_eq!(Word::gen("f").conjugate_by(&Word::gen("k")).to_string(), "k^-1 f k");
    }

    #[test]
    fn rejects_bad_tokens() {
        assert!(Word::parse("x0^").is_err());
        assert!(Word::parse("1x").is_err());
        assert!(Word::parse("x^a").is_err());
    }
}
