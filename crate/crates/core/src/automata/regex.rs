use std::collections::BTreeSet;
use std::fmt;

use super::{Alphabet, Color, Symbol};

/// Regular expression AST over interned symbols.
///
/// `Class` holds the explicit symbol set a class literal expanded to at parse time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Regex {
    Empty,
    Epsilon,
    Lit(Symbol),
    Class(BTreeSet<Symbol>),
    Union(Box<Regex>, Box<Regex>),
    Concat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
}

impl Regex {
    pub fn lit(s: Symbol) -> Regex {
        Regex::Lit(s)
    }

    pub fn union(a: Regex, b: Regex) -> Regex {
        Regex::Union(Box::new(a), Box::new(b))
    }

    pub fn concat(a: Regex, b: Regex) -> Regex {
        Regex::Concat(Box::new(a), Box::new(b))
    }

    pub fn star(a: Regex) -> Regex {
        Regex::Star(Box::new(a))
    }

    pub fn plus(a: Regex) -> Regex {
        Regex::Plus(Box::new(a))
    }

    /// Left-nested union of all parts; `Empty` when there are none.
    pub fn union_all<I: IntoIterator<Item = Regex>>(parts: I) -> Regex {
        parts
            .into_iter()
            .reduce(Regex::union)
            .unwrap_or(Regex::Empty)
    }

    /// Left-nested concatenation of all parts; `Epsilon` when there are none.
    pub fn concat_all<I: IntoIterator<Item = Regex>>(parts: I) -> Regex {
        parts
            .into_iter()
            .reduce(Regex::concat)
            .unwrap_or(Regex::Epsilon)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Regex::Empty | Regex::Epsilon | Regex::Lit(_) | Regex::Class(_) => 1,
            Regex::Union(a, b) | Regex::Concat(a, b) => 1 + a.size() + b.size(),
            Regex::Star(a) | Regex::Plus(a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Regex::Empty | Regex::Epsilon | Regex::Lit(_) | Regex::Class(_) => 1,
            Regex::Union(a, b) | Regex::Concat(a, b) => 1 + a.depth().max(b.depth()),
            Regex::Star(a) | Regex::Plus(a) => 1 + a.depth(),
        }
    }

    /// Every symbol mentioned by a literal or class.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Regex::Empty | Regex::Epsilon => {}
            Regex::Lit(s) => {
                out.insert(*s);
            }
            Regex::Class(set) => out.extend(set.iter().copied()),
            Regex::Union(a, b) | Regex::Concat(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Regex::Star(a) | Regex::Plus(a) => a.collect_symbols(out),
        }
    }

    /// The same expression with every symbol written in `color` ink.
    pub fn recolor(&self, color: Color) -> Regex {
        match self {
            Regex::Empty => Regex::Empty,
            Regex::Epsilon => Regex::Epsilon,
            Regex::Lit(s) => Regex::Lit(s.with_color(color)),
            Regex::Class(set) => Regex::Class(set.iter().map(|s| s.with_color(color)).collect()),
            Regex::Union(a, b) => Regex::union(a.recolor(color), b.recolor(color)),
            Regex::Concat(a, b) => Regex::concat(a.recolor(color), b.recolor(color)),
            Regex::Star(a) => Regex::star(a.recolor(color)),
            Regex::Plus(a) => Regex::plus(a.recolor(color)),
        }
    }

    /// Serializes in the textual grammar accepted by [`super::parse_regex`].
    ///
    /// Class sets are printed as `[T,D,K,S]` patterns relative to `alphabet`
    /// whenever the set is exactly a pattern's expansion, so parsed expressions
    /// round-trip to equal ASTs.
    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        self.write_text(&mut out, Some(alphabet), 0);
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Union(..) => 0,
            Regex::Concat(..) => 1,
            Regex::Star(_) | Regex::Plus(_) => 2,
            _ => 3,
        }
    }

    fn write_text(&self, out: &mut String, alphabet: Option<&Alphabet>, min_prec: u8) {
        let wrap = self.precedence() < min_prec;
        if wrap {
            out.push('(');
        }
        match self {
            Regex::Empty => out.push_str("empty"),
            Regex::Epsilon => out.push_str("eps"),
            Regex::Lit(s) => out.push_str(s.name()),
            Regex::Class(set) => match alphabet.and_then(|a| class_pattern(set, a)) {
                Some(pattern) => out.push_str(&pattern),
                None => {
                    out.push('(');
                    for (i, s) in set.iter().enumerate() {
                        if i > 0 {
                            out.push_str(" + ");
                        }
                        out.push_str(s.name());
                    }
                    out.push(')');
                }
            },
            Regex::Union(a, b) => {
                a.write_text(out, alphabet, 0);
                out.push_str(" + ");
                b.write_text(out, alphabet, 1);
            }
            Regex::Concat(a, b) => {
                a.write_text(out, alphabet, 1);
                out.push(' ');
                b.write_text(out, alphabet, 2);
            }
            Regex::Star(a) => {
                a.write_text(out, alphabet, 2);
                out.push('*');
            }
            Regex::Plus(a) => {
                a.write_text(out, alphabet, 2);
                out.push_str("^+");
            }
        }
        if wrap {
            out.push(')');
        }
    }
}

impl fmt::Display for Regex {
    /// Alphabet-free rendering; classes print as explicit unions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.write_text(&mut out, None, 0);
        f.write_str(&out)
    }
}

/// One field of a class literal: a fixed value or the `*` wildcard.
pub(crate) type Field<T> = Option<T>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ClassPattern {
    pub color: Option<Color>,
    pub parity: Field<super::Parity>,
    pub direction: Field<super::Direction>,
    pub temperature: Field<super::Temperature>,
    pub shade: Field<String>,
}

impl ClassPattern {
    pub fn matches(&self, s: Symbol) -> bool {
        if self.color.is_some() && s.color() != self.color {
            return false;
        }
        let Some(g) = s.grid_letter() else {
            return false;
        };
        self.parity.is_none_or(|p| p == g.parity)
            && self.direction.is_none_or(|d| d == g.direction)
            && self.temperature.is_none_or(|t| t == g.temperature)
            && self
                .shade
                .as_deref()
                .is_none_or(|sh| g.shade == Some(sh))
    }

    pub fn expand(&self, alphabet: &Alphabet) -> BTreeSet<Symbol> {
        alphabet
            .symbols()
            .iter()
            .copied()
            .filter(|s| self.matches(*s))
            .collect()
    }

    fn render(&self) -> String {
        let prefix = self.color.map(Color::prefix).unwrap_or("");
        if self.parity.is_none()
            && self.direction.is_none()
            && self.temperature.is_none()
            && self.shade.is_none()
        {
            return format!("{prefix}S0");
        }
        let f = |c: Option<char>| c.map(String::from).unwrap_or_else(|| "*".into());
        format!(
            "{prefix}[{},{},{},{}]",
            f(self.parity.map(|p| p.letter())),
            f(self.direction.map(|d| d.letter())),
            f(self.temperature.map(|t| t.letter())),
            self.shade.clone().unwrap_or_else(|| "*".into())
        )
    }
}

/// Finds a class literal whose expansion over `alphabet` is exactly `set`.
fn class_pattern(set: &BTreeSet<Symbol>, alphabet: &Alphabet) -> Option<String> {
    let color = set.iter().next()?.color();
    if set.iter().any(|s| s.color() != color || !s.is_grid()) {
        return None;
    }
    let used: Vec<_> = set.iter().filter_map(|s| s.grid_letter()).collect();
    let scope: Vec<_> = alphabet
        .symbols()
        .iter()
        .filter(|s| color.is_none() || s.color() == color)
        .filter_map(|s| s.grid_letter())
        .collect();

    // `*` when the used values cover every value in scope, the value itself when unique.
    fn field<T: PartialEq + Copy>(used: Vec<T>, scope: Vec<T>) -> Option<Field<T>> {
        let mut distinct: Vec<T> = Vec::new();
        for v in used {
            if !distinct.contains(&v) {
                distinct.push(v);
            }
        }
        if scope.iter().all(|v| distinct.contains(v)) {
            Some(None)
        } else if distinct.len() == 1 {
            Some(Some(distinct[0]))
        } else {
            None
        }
    }

    let pattern = ClassPattern {
        color,
        parity: field(
            used.iter().map(|g| g.parity).collect(),
            scope.iter().map(|g| g.parity).collect(),
        )?,
        direction: field(
            used.iter().map(|g| g.direction).collect(),
            scope.iter().map(|g| g.direction).collect(),
        )?,
        temperature: field(
            used.iter().map(|g| g.temperature).collect(),
            scope.iter().map(|g| g.temperature).collect(),
        )?,
        shade: match field(
            used.iter().map(|g| g.shade).collect(),
            scope.iter().map(|g| g.shade).collect(),
        )? {
            None => None,
            Some(Some(shade)) => Some(shade.to_owned()),
            Some(None) => return None,
        },
    };
    (&pattern.expand(alphabet) == set).then(|| pattern.render())
}
