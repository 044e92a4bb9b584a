use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::AutomataError;
use crate::intern::intern;

/// Ink of a colored symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Green,
    Red,
}

impl Color {
    pub fn prefix(self) -> &'static str {
        match self {
            Color::Green => "G:",
            Color::Red => "R:",
        }
    }

    pub fn opposite(self) -> Color {
        match self {
            Color::Green => Color::Red,
            Color::Red => Color::Green,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    H,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Temperature {
    Warm,
    Cold,
}

impl Parity {
    pub fn letter(self) -> char {
        match self {
            Parity::A => 'A',
            Parity::B => 'B',
        }
    }
}

impl Direction {
    pub fn letter(self) -> char {
        match self {
            Direction::H => 'H',
            Direction::V => 'V',
        }
    }
}

impl Temperature {
    pub fn letter(self) -> char {
        match self {
            Temperature::Warm => 'W',
            Temperature::Cold => 'C',
        }
    }
}

/// A letter of the grid fragment: `T-D-K-S`, or `T-D-K` once the shade is erased.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridLetter<'a> {
    pub parity: Parity,
    pub direction: Direction,
    pub temperature: Temperature,
    pub shade: Option<&'a str>,
}

impl GridLetter<'_> {
    pub fn token(&self) -> String {
        let mut s = format!(
            "{}-{}-{}",
            self.parity.letter(),
            self.direction.letter(),
            self.temperature.letter()
        );
        if let Some(shade) = self.shade {
            s.push('-');
            s.push_str(shade);
        }
        s
    }
}

/// Structured reading of a symbol token with its color prefix removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseLetter<'a> {
    Alpha,
    Beta,
    Omega,
    Grid(GridLetter<'a>),
}

pub(crate) fn is_shade_name(s: &str) -> bool {
    !s.is_empty()
        && s
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

fn parse_base(s: &str) -> Option<BaseLetter<'_>> {
    match s {
        "alpha" => return Some(BaseLetter::Alpha),
        "beta" => return Some(BaseLetter::Beta),
        "omega" => return Some(BaseLetter::Omega),
        _ => {}
    }
    let mut parts = s.splitn(4, '-');
    let parity = match parts.next()? {
        "A" => Parity::A,
        "B" => Parity::B,
        _ => return None,
    };
    let direction = match parts.next()? {
        "H" => Direction::H,
        "V" => Direction::V,
        _ => return None,
    };
    let temperature = match parts.next()? {
        "W" => Temperature::Warm,
        "C" => Temperature::Cold,
        _ => return None,
    };
    let shade = match parts.next() {
        None => None,
        Some(shade) if is_shade_name(shade) => Some(shade),
        Some(_) => return None,
    };
    Some(BaseLetter::Grid(GridLetter {
        parity,
        direction,
        temperature,
        shade,
    }))
}

fn split_color(s: &str) -> (Option<Color>, &str) {
    if let Some(rest) = s.strip_prefix("G:") {
        (Some(Color::Green), rest)
    } else if let Some(rest) = s.strip_prefix("R:") {
        (Some(Color::Red), rest)
    } else {
        (None, s)
    }
}

/// An interned edge label token such as `alpha`, `R:beta` or `G:A-H-C-black`.
///
/// Equality and hashing are by identity of the interned string; ordering is
/// by token text so that sorted collections print deterministically.
#[derive(Clone, Copy)]
pub struct Symbol(&'static str);

impl Symbol {
    pub fn parse(token: &str) -> Result<Symbol, AutomataError> {
        let (_, base) = split_color(token);
        if parse_base(base).is_none() {
            return Err(AutomataError::InvalidSymbol(token.to_owned()));
        }
        Ok(Symbol(intern(token)))
    }

    pub fn name(&self) -> &'static str {
        self.0
    }

    pub fn color(&self) -> Option<Color> {
        split_color(self.0).0
    }

    /// The token without its color prefix.
    pub fn base_name(&self) -> &'static str {
        split_color(self.0).1
    }

    pub fn letter(&self) -> BaseLetter<'static> {
        parse_base(self.base_name()).expect("symbol validated at construction")
    }

    pub fn grid_letter(&self) -> Option<GridLetter<'static>> {
        match self.letter() {
            BaseLetter::Grid(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_grid(&self) -> bool {
        self.grid_letter().is_some()
    }

    pub fn uncolored(&self) -> Symbol {
        Symbol(intern(self.base_name()))
    }

    pub fn with_color(&self, color: Color) -> Symbol {
        Symbol(intern(&format!("{}{}", color.prefix(), self.base_name())))
    }

    /// Drops the shade field of a grid letter; other symbols are returned unchanged.
    pub fn strip_shade(&self) -> Symbol {
        match self.grid_letter() {
            Some(g) if g.shade.is_some() => {
                let bare = GridLetter { shade: None, ..g };
                let prefix = self.color().map(Color::prefix).unwrap_or("");
                Symbol(intern(&format!("{prefix}{}", bare.token())))
            }
            _ => *self,
        }
    }

    /// Replaces (or adds) the shade of a grid letter.
    pub fn with_shade(&self, shade: &str) -> Option<Symbol> {
        let g = self.grid_letter()?;
        if !is_shade_name(shade) {
            return None;
        }
        let shaded = GridLetter {
            shade: Some(shade),
            ..g
        };
        let prefix = self.color().map(Color::prefix).unwrap_or("");
        Some(Symbol(intern(&format!("{prefix}{}", shaded.token()))))
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::ptr::hash(self.0, state)
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(other.0)
    }
}

impl Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.0)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Symbol::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_grammar() {
        for tok in [
            "alpha",
            "G:omega",
            "R:beta",
            "A-H-W-black",
            "G:B-V-C-grey_2",
            "R:A-H-W",
        ] {
            assert!(Symbol::parse(tok).is_ok(), "{tok}");
        }
        for tok in ["gamma", "C-H-W-black", "A-X-W", "A-H-W-Black", "X:alpha", "A-H-W-", ""] {
            assert!(Symbol::parse(tok).is_err(), "{tok}");
        }
    }

    #[test]
    fn recolor_and_strip() {
        let s = Symbol::parse("R:A-H-W-black").unwrap();
        assert_eq!(s.color(), Some(Color::Red));
        assert_eq!(s.with_color(Color::Green).name(), "G:A-H-W-black");
        assert_eq!(s.strip_shade().name(), "R:A-H-W");
        assert_eq!(s.uncolored().name(), "A-H-W-black");
        let a = Symbol::parse("G:alpha").unwrap();
        assert_eq!(a.strip_shade(), a);
        assert_eq!(
            Symbol::parse("A-V-C").unwrap().with_shade("grey").unwrap().name(),
            "A-V-C-grey"
        );
    }
}
