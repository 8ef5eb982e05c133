//! Free magma words: fully parenthesized non-associative monomials.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MagmaError {
    #[error("generator {0} is not in the variable list")]
    UnknownGenerator(String),
    #[error("column {col}: {message}")]
    Parse { col: usize, message: String },
}

/// A letter of the alphabet, printed `name` or `name(index)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub name: String,
    pub index: Option<u32>,
}

impl Generator {
    pub fn new(name: &str) -> Self {
        Generator {
            name: name.to_string(),
            index: None,
        }
    }

    pub fn indexed(name: &str, index: u32) -> Self {
        Generator {
            name: name.to_string(),
            index: Some(index),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}({i})", self.name),
            None => write!(f, "{}", self.name),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum MagmaWord {
    Leaf(Generator),
    Node(Arc<MagmaWord>, Arc<MagmaWord>, usize),
}

impl MagmaWord {
    pub fn leaf(g: Generator) -> Self {
        MagmaWord::Leaf(g)
    }

    pub fn var(name: &str) -> Self {
        MagmaWord::Leaf(Generator::new(name))
    }

    pub fn mul(u: &MagmaWord, v: &MagmaWord) -> Self {
        MagmaWord::Node(
            Arc::new(u.clone()),
            Arc::new(v.clone()),
            u.degree() + v.degree(),
        )
    }

    /// Number of leaves.
    pub fn degree(&self) -> usize {
        match self {
            MagmaWord::Leaf(_) => 1,
            MagmaWord::Node(_, _, d) => *d,
        }
    }

    pub fn children(&self) -> Option<(&MagmaWord, &MagmaWord)> {
        match self {
            MagmaWord::Leaf(_) => None,
            MagmaWord::Node(l, r, _) => Some((l, r)),
        }
    }

    pub fn as_leaf(&self) -> Option<&Generator> {
        match self {
            MagmaWord::Leaf(g) => Some(g),
            MagmaWord::Node(..) => None,
        }
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<&Generator> {
        let mut out = Vec::with_capacity(self.degree());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Generator>) {
        match self {
            MagmaWord::Leaf(g) => out.push(g),
            MagmaWord::Node(l, r, _) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// Occurrence count of each of `vars` in the word.
    pub fn multidegree(&self, vars: &[Generator]) -> Result<Vec<u32>, MagmaError> {
        let mut out = vec![0u32; vars.len()];
        for g in self.leaves() {
            let i = vars
                .iter()
                .position(|v| v == g)
                .ok_or_else(|| MagmaError::UnknownGenerator(g.to_string()))?;
            out[i] += 1;
        }
        Ok(out)
    }

    /// Same shape, leaves replaced left to right by `f`.
    pub fn map_leaves(&self, f: &mut impl FnMut(&Generator) -> MagmaWord) -> MagmaWord {
        match self {
            MagmaWord::Leaf(g) => f(g),
            MagmaWord::Node(l, r, _) => MagmaWord::mul(&l.map_leaves(f), &r.map_leaves(f)),
        }
    }

    pub fn parse(text: &str) -> Result<MagmaWord, MagmaError> {
        let mut p = WordParser::new(text);
        p.skip_ws();
        let w = p.word()?;
        p.skip_ws();
        if !p.at_end() {
            return Err(p.error("trailing input after word"));
        }
        Ok(w)
    }
}

/// Degree first, then the printed form.
pub fn canonical_cmp(u: &MagmaWord, v: &MagmaWord) -> Ordering {
    u.degree()
        .cmp(&v.degree())
        .then_with(|| u.to_string().cmp(&v.to_string()))
}

impl Ord for MagmaWord {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_cmp(self, other)
    }
}

impl PartialOrd for MagmaWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MagmaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MagmaWord::Leaf(g) => write!(f, "{g}"),
            MagmaWord::Node(l, r, _) => write!(f, "({l}*{r})"),
        }
    }
}

impl fmt::Debug for MagmaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Character-level reader shared with the free algebra text format.
pub(crate) struct WordParser {
    chars: Vec<char>,
    pos: usize,
}

impl WordParser {
    pub(crate) fn new(text: &str) -> Self {
        WordParser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> MagmaError {
        MagmaError::Parse {
            col: self.pos + 1,
            message: message.into(),
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    pub(crate) fn bump(&mut self) {
        self.pos += 1;
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), MagmaError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    pub(crate) fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn generator(&mut self) -> Result<Generator, MagmaError> {
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            return Err(self.error("expected a generator or '('"));
        }
        let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        // an index must follow the name directly: x(3)
        if self.peek() == Some('(') && self.chars.get(self.pos + 1).is_some_and(char::is_ascii_digit) {
            self.bump();
            let digits = self.take_while(|c| c.is_ascii_digit());
            let index = digits.parse().map_err(|_| self.error("index out of range"))?;
            if self.peek() != Some(')') {
                return Err(self.error("expected ')' after index"));
            }
            self.bump();
            return Ok(Generator {
                name,
                index: Some(index),
            });
        }
        Ok(Generator { name, index: None })
    }

    pub(crate) fn word(&mut self) -> Result<MagmaWord, MagmaError> {
        self.skip_ws();
        if self.peek() == Some('(') {
            self.bump();
            let l = self.word()?;
            self.expect('*')?;
            let r = self.word()?;
            self.expect(')')?;
            Ok(MagmaWord::mul(&l, &r))
        } else {
            Ok(MagmaWord::Leaf(self.generator()?))
        }
    }
}
