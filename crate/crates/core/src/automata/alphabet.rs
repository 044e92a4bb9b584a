use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AutomataError, Color, Symbol};

/// Ordered set of symbols. Declaration order is the letter order used by
/// shortlex comparisons.
#[derive(Clone, Default)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
    rank: HashMap<Symbol, usize>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = Symbol>>(symbols: I) -> Result<Alphabet, AutomataError> {
        let mut alphabet = Alphabet::default();
        for s in symbols {
            if alphabet.rank.contains_key(&s) {
                return Err(AutomataError::DuplicateSymbol(s.to_string()));
            }
            alphabet.rank.insert(s, alphabet.symbols.len());
            alphabet.symbols.push(s);
        }
        Ok(alphabet)
    }

    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Alphabet, AutomataError> {
        let symbols = tokens
            .iter()
            .map(|t| Symbol::parse(t.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Alphabet::new(symbols)
    }

    /// The doubled alphabet: every symbol in green ink, then every symbol in red ink.
    pub fn colored(&self) -> Alphabet {
        let green = self.symbols.iter().map(|s| s.with_color(Color::Green));
        let red = self.symbols.iter().map(|s| s.with_color(Color::Red));
        let mut seen = std::collections::HashSet::new();
        let all: Vec<Symbol> = green.chain(red).filter(|s| seen.insert(*s)).collect();
        Alphabet::new(all).expect("deduplicated")
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.rank.contains_key(&s)
    }

    pub fn rank(&self, s: Symbol) -> Option<usize> {
        self.rank.get(&s).copied()
    }

    /// Shortlex comparison: shorter words first, then letter by letter in declaration order.
    /// Symbols outside the alphabet sort after every member, by token text.
    pub fn shortlex_cmp(&self, a: &Word, b: &Word) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            for (x, y) in a.iter().zip(b.iter()) {
                let o = match (self.rank(*x), self.rank(*y)) {
                    (Some(i), Some(j)) => i.cmp(&j),
                    (Some(_), None) => Ordering::Less,
                    (None, Some(_)) => Ordering::Greater,
                    (None, None) => x.cmp(y),
                };
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.symbols.iter()).finish()
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.symbols.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let symbols = Vec::<Symbol>::deserialize(deserializer)?;
        Alphabet::new(symbols).map_err(serde::de::Error::custom)
    }
}

/// A finite sequence of symbols.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn new(letters: Vec<Symbol>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Parses whitespace-separated symbol tokens.
    pub fn parse(text: &str) -> Result<Word, AutomataError> {
        text.split_whitespace()
            .map(Symbol::parse)
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.0.iter()
    }

    pub fn recolor(&self, color: Color) -> Word {
        Word(self.0.iter().map(|s| s.with_color(color)).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}
