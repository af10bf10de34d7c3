//! The substitution-definition text format.
//!
//! Line-oriented: `#` starts a comment, blank lines are skipped, and each
//! remaining line is one of
//!
//! ```text
//! alphabet: a b
//! rule: a -> a b
//! lengths: 1 1.5
//! ```
//!
//! Letter names are whitespace-separated tokens, so multi-character names
//! (collared alphabets, say) need no quoting. The alphabet line must come
//! before any rule that uses its letters; every letter needs exactly one
//! rule; `lengths:`, when present, gives one positive tile length per
//! letter in alphabet order.

use std::fmt;

use plastic_core::{Alphabet, Letter, Substitution, Word};

/// A parse failure with the 1-based line it points at. Whole-file
/// problems (a letter whose rule never appeared) carry no line.
#[derive(Debug)]
pub struct DefinitionError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for DefinitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

fn err<T>(line: usize, message: String) -> Result<T, DefinitionError> {
    Err(DefinitionError {
        line: Some(line),
        message,
    })
}

/// A parsed definition file: the alphabet, one image per letter, and the
/// optional default tile lengths.
#[derive(Debug)]
pub struct SubstitutionFile {
    alphabet: Alphabet,
    rules: Vec<Word>,
    lengths: Option<Vec<f64>>,
}

impl SubstitutionFile {
    pub fn parse(text: &str) -> Result<SubstitutionFile, DefinitionError> {
        let mut alphabet: Option<Alphabet> = None;
        let mut rules: Vec<Option<Word>> = Vec::new();
        let mut lengths: Option<Vec<f64>> = None;

        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let body = match raw.find('#') {
                Some(at) => &raw[..at],
                None => raw,
            };
            let body = body.trim();
            if body.is_empty() {
                continue;
            }
            let Some((keyword, rest)) = body.split_once(':') else {
                return err(
                    line,
                    "expected \"alphabet:\", \"rule:\" or \"lengths:\"".into(),
                );
            };
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            match keyword.trim() {
                "alphabet" => {
                    if alphabet.is_some() {
                        return err(line, "alphabet declared twice".into());
                    }
                    if tokens.is_empty() {
                        return err(line, "alphabet line declares no letters".into());
                    }
                    for (i, token) in tokens.iter().enumerate() {
                        check_letter_name(token, line)?;
                        if tokens[..i].contains(token) {
                            return err(line, format!("duplicate letter {token:?}"));
                        }
                    }
                    rules = vec![None; tokens.len()];
                    alphabet = Some(Alphabet::new(tokens).map_err(|e| DefinitionError {
                        line: Some(line),
                        message: e.to_string(),
                    })?);
                }
                "rule" => {
                    let Some(alphabet) = alphabet.as_ref() else {
                        return err(line, "alphabet must be declared before rules".into());
                    };
                    let (&head, tail) = tokens.split_first().ok_or_else(|| DefinitionError {
                        line: Some(line),
                        message: "empty rule".into(),
                    })?;
                    let Some(letter) = alphabet.index_of(head) else {
                        return err(line, format!("undeclared letter {head:?}"));
                    };
                    if tail.first() != Some(&"->") {
                        return err(line, format!("expected \"->\" after {head:?}"));
                    }
                    let image_tokens = &tail[1..];
                    if image_tokens.is_empty() {
                        return err(line, format!("rule for {head:?} has an empty image"));
                    }
                    let mut image = Vec::with_capacity(image_tokens.len());
                    for token in image_tokens {
                        match alphabet.index_of(token) {
                            Some(l) => image.push(l),
                            None => {
                                return err(
                                    line,
                                    format!("undeclared letter {token:?} in the image"),
                                );
                            }
                        }
                    }
                    let slot = &mut rules[letter as usize];
                    if slot.is_some() {
                        return err(line, format!("duplicate rule for {head:?}"));
                    }
                    *slot = Some(Word::new(image));
                }
                "lengths" => {
                    let Some(alphabet) = alphabet.as_ref() else {
                        return err(line, "alphabet must be declared before lengths".into());
                    };
                    if lengths.is_some() {
                        return err(line, "lengths declared twice".into());
                    }
                    let mut values = Vec::with_capacity(tokens.len());
                    for (i, token) in tokens.iter().enumerate() {
                        let value: f64 = token.parse().map_err(|_| DefinitionError {
                            line: Some(line),
                            message: format!("invalid length {token:?}"),
                        })?;
                        if !(value.is_finite() && value > 0.0) {
                            let name = alphabet.name(i.min(alphabet.len() - 1) as Letter);
                            return err(
                                line,
                                format!("length for {name:?} must be positive, got {token}"),
                            );
                        }
                        values.push(value);
                    }
                    if values.len() != alphabet.len() {
                        return err(
                            line,
                            format!(
                                "expected {} lengths, found {}",
                                alphabet.len(),
                                values.len()
                            ),
                        );
                    }
                    lengths = Some(values);
                }
                other => return err(line, format!("unknown directive {other:?}")),
            }
        }

        let Some(alphabet) = alphabet else {
            return Err(DefinitionError {
                line: None,
                message: "missing alphabet".into(),
            });
        };
        let mut images = Vec::with_capacity(rules.len());
        for (letter, slot) in rules.into_iter().enumerate() {
            match slot {
                Some(image) => images.push(image),
                None => {
                    return Err(DefinitionError {
                        line: None,
                        message: format!(
                            "missing rule for letter {:?}",
                            alphabet.name(letter as Letter)
                        ),
                    });
                }
            }
        }
        Ok(SubstitutionFile {
            alphabet,
            rules: images,
            lengths,
        })
    }

    /// The file's lengths, or unit lengths when the file declares none.
    pub fn default_lengths(&self) -> Vec<f64> {
        match &self.lengths {
            Some(values) => values.clone(),
            None => vec![1.0; self.alphabet.len()],
        }
    }

    pub fn substitution(&self) -> plastic_core::Result<Substitution> {
        Substitution::new(self.alphabet.clone(), self.rules.clone())
    }
}

/// The canonical text form: alphabet, rules in alphabet order, lengths
/// last. Lengths use shortest-roundtrip float notation, so parsing the
/// rendered text reproduces the exact values.
impl fmt::Display for SubstitutionFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alphabet:")?;
        for name in self.alphabet.names() {
            write!(f, " {name}")?;
        }
        writeln!(f)?;
        for (letter, image) in self.rules.iter().enumerate() {
            write!(f, "rule: {} ->", self.alphabet.name(letter as Letter))?;
            for &l in image.letters() {
                write!(f, " {}", self.alphabet.name(l))?;
            }
            writeln!(f)?;
        }
        if let Some(values) = &self.lengths {
            write!(f, "lengths:")?;
            for value in values {
                write!(f, " {value}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Letter names must stay printable ASCII and CSV-safe, and must not
/// collide with the rule arrow.
fn check_letter_name(token: &str, line: usize) -> Result<(), DefinitionError> {
    if token == "->" {
        return err(line, "\"->\" cannot name a letter".into());
    }
    let clean = token
        .bytes()
        .all(|b| (0x21..=0x7e).contains(&b) && b != b',' && b != b'"');
    if !clean {
        return err(
            line,
            format!("letter name {token:?} must be printable ASCII without ',' or '\"'"),
        );
    }
    Ok(())
}
