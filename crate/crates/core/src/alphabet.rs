//! Finite alphabets and append-only symbol sequences.
//!
//! Symbols are stored as zero-based indices (`u8`), so an alphabet holds at
//! most 256 symbols. Position `i` of a [`SymbolSequence`] is `X_i`.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_ALPHABET: usize = 256;

/// An ordered set of distinct symbol names, mapped bijectively onto `0..size`.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    lookup: HashMap<String, u8>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.len() < 2 {
            return Err(Error::domain(format!(
                "alphabet needs at least 2 symbols, got {}",
                symbols.len()
            )));
        }
        if symbols.len() > MAX_ALPHABET {
            return Err(Error::domain(format!(
                "alphabet holds at most {MAX_ALPHABET} symbols, got {}",
                symbols.len()
            )));
        }
        let mut lookup = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if lookup.insert(s.clone(), i as u8).is_some() {
                return Err(Error::domain(format!("duplicate symbol {s:?} in alphabet")));
            }
        }
        Ok(Alphabet { symbols, lookup })
    }

    /// The alphabet `{"0", "1", ..., "size-1"}`.
    pub fn numeric(size: usize) -> Result<Self> {
        Alphabet::new((0..size).map(|i| i.to_string()))
    }

    /// One symbol per character of `chars`.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Alphabet::new(chars.chars().map(String::from))
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, symbol: &str) -> Option<u8> {
        self.lookup.get(symbol).copied()
    }

    pub fn name(&self, index: u8) -> Option<&str> {
        self.symbols.get(index as usize).map(String::as_str)
    }

    pub fn check(&self, index: u8) -> Result<()> {
        if (index as usize) < self.size() {
            Ok(())
        } else {
            Err(Error::InvalidSymbol {
                index: index as usize,
                size: self.size(),
            })
        }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Alphabet").field(&self.symbols).finish()
    }
}

/// The data segment `X_0, X_1, ..., X_n` over a fixed alphabet.
///
/// Entries are validated on entry and never change afterwards.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolSequence {
    alphabet: Alphabet,
    data: Vec<u8>,
}

impl SymbolSequence {
    pub fn new(alphabet: Alphabet) -> Self {
        SymbolSequence {
            alphabet,
            data: Vec::new(),
        }
    }

    pub fn with_capacity(alphabet: Alphabet, capacity: usize) -> Self {
        SymbolSequence {
            alphabet,
            data: Vec::with_capacity(capacity),
        }
    }

    pub fn from_indices(alphabet: Alphabet, data: Vec<u8>) -> Result<Self> {
        for &x in &data {
            alphabet.check(x)?;
        }
        Ok(SymbolSequence { alphabet, data })
    }

    pub fn push(&mut self, x: u8) -> Result<()> {
        self.alphabet.check(x)?;
        self.data.push(x);
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.data.get(i).copied()
    }

    pub fn into_indices(self) -> Vec<u8> {
        self.data
    }
}
