//! Text syntax for regular expressions.
//!
//! ```text
//! union   := concat ( "+" concat )*
//! concat  := postfix postfix*            juxtaposition
//! postfix := atom ( "*" | "^+" )*
//! atom    := SYMBOL | "eps" | "empty" | CLASS | "S0" | "(" union ")"
//! CLASS   := [ "G:" | "R:" ] "[" T "," D "," K "," S "]"   each field a value or "*"
//! ```

use super::regex::ClassPattern;
use super::{Alphabet, AutomataError, Color, Direction, Parity, Regex, Symbol, Temperature};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Class(Option<Color>, Vec<String>),
    LParen,
    RParen,
    Union,
    Star,
    PlusOp,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | ':')
}

fn syntax(pos: usize, message: impl Into<String>) -> AutomataError {
    AutomataError::Syntax {
        pos,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, AutomataError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            '+' => {
                out.push((pos, Tok::Union));
                i += 1;
            }
            '*' => {
                out.push((pos, Tok::Star));
                i += 1;
            }
            '^' => {
                if chars.get(i + 1).map(|p| p.1) != Some('+') {
                    return Err(syntax(pos, "expected '+' after '^'"));
                }
                out.push((pos, Tok::PlusOp));
                i += 2;
            }
            '[' => {
                let (fields, next) = lex_class(&chars, i)?;
                out.push((pos, Tok::Class(None, fields)));
                i = next;
            }
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i].1) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|p| p.1).collect();
                let color = match word.as_str() {
                    "G:" => Some(Color::Green),
                    "R:" => Some(Color::Red),
                    _ => None,
                };
                match (color, chars.get(i).map(|p| p.1)) {
                    (Some(color), Some('[')) => {
                        let (fields, next) = lex_class(&chars, i)?;
                        out.push((pos, Tok::Class(Some(color), fields)));
                        i = next;
                    }
                    _ => out.push((pos, Tok::Ident(word))),
                }
            }
            other => return Err(syntax(pos, format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

fn lex_class(chars: &[(usize, char)], open: usize) -> Result<(Vec<String>, usize), AutomataError> {
    let mut i = open + 1;
    let mut body = String::new();
    loop {
        match chars.get(i) {
            None => return Err(syntax(chars[open].0, "unterminated class literal")),
            Some((_, ']')) => break,
            Some((_, c)) => body.push(*c),
        }
        i += 1;
    }
    let fields = body.split(',').map(|f| f.trim().to_owned()).collect();
    Ok((fields, i + 1))
}

fn class_pattern(pos: usize, color: Option<Color>, fields: &[String]) -> Result<ClassPattern, AutomataError> {
    if fields.len() != 4 {
        return Err(syntax(pos, format!("class literal needs 4 fields, found {}", fields.len())));
    }
    let wild = |f: &str| f == "*";
    let parity = match fields[0].as_str() {
        f if wild(f) => None,
        "A" => Some(Parity::A),
        "B" => Some(Parity::B),
        f => return Err(syntax(pos, format!("bad class type field '{f}'"))),
    };
    let direction = match fields[1].as_str() {
        f if wild(f) => None,
        "H" => Some(Direction::H),
        "V" => Some(Direction::V),
        f => return Err(syntax(pos, format!("bad class direction field '{f}'"))),
    };
    let temperature = match fields[2].as_str() {
        f if wild(f) => None,
        "W" => Some(Temperature::Warm),
        "C" => Some(Temperature::Cold),
        f => return Err(syntax(pos, format!("bad class temperature field '{f}'"))),
    };
    let shade = match fields[3].as_str() {
        f if wild(f) => None,
        f if super::symbol::is_shade_name(f) => Some(f.to_owned()),
        f => return Err(syntax(pos, format!("bad class shade field '{f}'"))),
    };
    Ok(ClassPattern {
        color,
        parity,
        direction,
        temperature,
        shade,
    })
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn union(&mut self) -> Result<Regex, AutomataError> {
        let mut left = self.concat()?;
        while self.peek() == Some(&Tok::Union) {
            self.at += 1;
            let right = self.concat()?;
            left = Regex::union(left, right);
        }
        Ok(left)
    }

    fn concat(&mut self) -> Result<Regex, AutomataError> {
        let mut left = self.postfix()?;
        while matches!(
            self.peek(),
            Some(Tok::Ident(_) | Tok::Class(..) | Tok::LParen)
        ) {
            let right = self.postfix()?;
            left = Regex::concat(left, right);
        }
        Ok(left)
    }

    fn postfix(&mut self) -> Result<Regex, AutomataError> {
        let mut inner = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => inner = Regex::star(inner),
                Some(Tok::PlusOp) => inner = Regex::plus(inner),
                _ => return Ok(inner),
            }
            self.at += 1;
        }
    }

    fn atom(&mut self) -> Result<Regex, AutomataError> {
        let pos = self.pos();
        let Some((_, tok)) = self.toks.get(self.at).cloned() else {
            return Err(syntax(pos, "unexpected end of expression"));
        };
        self.at += 1;
        match tok {
            Tok::LParen => {
                let inner = self.union()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(syntax(self.pos(), "expected ')'"));
                }
                self.at += 1;
                Ok(inner)
            }
            Tok::Ident(word) => match word.as_str() {
                "eps" => Ok(Regex::Epsilon),
                "empty" => Ok(Regex::Empty),
                "S0" | "G:S0" | "R:S0" => {
                    let color = match word.as_str() {
                        "G:S0" => Some(Color::Green),
                        "R:S0" => Some(Color::Red),
                        _ => None,
                    };
                    let pattern = ClassPattern {
                        color,
                        parity: None,
                        direction: None,
                        temperature: None,
                        shade: None,
                    };
                    self.class(pos, &word, pattern)
                }
                _ => {
                    let unknown = || AutomataError::UnknownSymbol {
                        token: word.clone(),
                        pos,
                    };
                    let symbol = Symbol::parse(&word).map_err(|_| unknown())?;
                    if !self.alphabet.contains(symbol) {
                        return Err(unknown());
                    }
                    Ok(Regex::Lit(symbol))
                }
            },
            Tok::Class(color, fields) => {
                let pattern = class_pattern(pos, color, &fields)?;
                self.class(pos, &format!("[{}]", fields.join(",")), pattern)
            }
            Tok::RParen => Err(syntax(pos, "unexpected ')'")),
            Tok::Union => Err(syntax(pos, "unexpected '+'")),
            Tok::Star => Err(syntax(pos, "unexpected '*'")),
            Tok::PlusOp => Err(syntax(pos, "unexpected '^+'")),
        }
    }

    fn class(&self, pos: usize, text: &str, pattern: ClassPattern) -> Result<Regex, AutomataError> {
        let set = pattern.expand(self.alphabet);
        if set.is_empty() {
            return Err(AutomataError::UnknownSymbol {
                token: text.to_owned(),
                pos,
            });
        }
        Ok(Regex::Class(set))
    }
}

/// Parses `text` against `alphabet`. Class literals expand to the alphabet's matching grid symbols.
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<Regex, AutomataError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        at: 0,
        end: text.len(),
        alphabet,
    };
    let regex = parser.union()?;
    if parser.at != parser.toks.len() {
        return Err(syntax(parser.pos(), "trailing input"));
    }
    Ok(regex)
}

/// Symbol-shaped literal tokens mentioned in `text`, in order of first appearance.
pub fn literal_tokens(text: &str) -> Result<Vec<Symbol>, AutomataError> {
    let mut out = Vec::new();
    for (_, tok) in lex(text)? {
        if let Tok::Ident(word) = tok {
            if let Ok(s) = Symbol::parse(&word) {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    Ok(out)
}
