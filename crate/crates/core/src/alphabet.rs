use crate::error::{Error, Result};
use crate::word::Word;

/// Index of a letter within its alphabet.
///
/// Words store letters as indices so that all counting stays exact integer
/// arithmetic; names only matter at the parsing and printing boundary.
pub type Letter = u32;

/// Ordered set of distinct letter names.
///
/// The position of a name is the letter index used by words, substitution
/// matrices, and length vectors, so the declaration order fixes the indexing
/// of every vector and matrix derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// Builds an alphabet from letter names.
    ///
    /// Names must be non-empty, free of whitespace, and pairwise distinct.
    pub fn new<I, T>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Input(
                "alphabet must contain at least one letter".into(),
            ));
        }
        for name in &names {
            if name.is_empty() {
                return Err(Error::Input("letter names must be non-empty".into()));
            }
            if name.chars().any(char::is_whitespace) {
                return Err(Error::Input(format!(
                    "letter name {name:?} contains whitespace"
                )));
            }
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::Input(format!("duplicate letter name {name:?}")));
            }
        }
        Ok(Alphabet { names })
    }

    /// The two-letter alphabet `{a, b}` used by the built-in binary systems.
    pub fn binary() -> Self {
        Alphabet {
            names: vec!["a".into(), "b".into()],
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Alphabets are never empty; this exists to satisfy the usual pairing
    /// with `len` and always returns `false`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.names[letter as usize]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn index_of(&self, name: &str) -> Option<Letter> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as Letter)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.names.len() as Letter
    }

    pub fn contains(&self, letter: Letter) -> bool {
        (letter as usize) < self.names.len()
    }

    /// Renders a word over this alphabet.
    ///
    /// Single-character names are concatenated; otherwise names are joined
    /// with spaces, matching the whitespace-token input syntax.
    pub fn format_word(&self, word: &Word) -> String {
        let compact = self.names.iter().all(|n| n.chars().count() == 1);
        let parts: Vec<&str> = word.letters().iter().map(|&l| self.name(l)).collect();
        if compact {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    /// Parses whitespace-separated letter names into a word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            match self.index_of(token) {
                Some(l) => letters.push(l),
                None => {
                    return Err(Error::Input(format!("unknown letter {token:?}")));
                }
            }
        }
        Ok(Word::new(letters))
    }
}
