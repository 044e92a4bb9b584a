//! Symbols, alphabets, regular expressions and their epsilon-free NFAs.

mod alphabet;
mod nfa;
mod parse;
mod regex;
mod symbol;

use thiserror::Error;

pub use alphabet::{Alphabet, Word};
pub use nfa::{Nfa, StateId};
pub use parse::{literal_tokens, parse_regex};
pub use regex::Regex;
pub use symbol::{BaseLetter, Color, Direction, GridLetter, Parity, Symbol, Temperature};

pub(crate) use symbol::is_shade_name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown symbol '{token}' at {pos}")]
    UnknownSymbol { token: String, pos: usize },
    #[error("'{0}' is not a valid symbol token")]
    InvalidSymbol(String),
    #[error("symbol '{0}' is not in the alphabet")]
    ForeignSymbol(String),
    #[error("duplicate symbol '{0}' in alphabet")]
    DuplicateSymbol(String),
}
