//! Construction of Thue-Morse factors with a large surplus of `ab` and
//! `ba` occurrences.
//!
//! The level-`m` word concatenates shrinking even powers of the doubling
//! map applied to alternating seed letters. Each block ends where the
//! next begins in a way that manufactures extra letter alternations, so
//! the combined `ab`/`ba` count runs ahead of the language's mean rate
//! by roughly `m/3`. These words witness that word-level balance of the
//! Thue-Morse language is unbounded even though its letter-level balance
//! is at most 2.

use crate::error::{Error, Result};
use crate::substitution::Substitution;
use crate::word::Word;

/// Builds the level-`m` witness word and certifies it against the
/// language.
///
/// The word is `φ^{2m}(a) · φ^{2m-2}(b) · φ^{2m-4}(a) · …` down to the
/// exponent-0 block, a single letter; its length is `(4^{m+1} - 1) / 3`.
/// Before returning, the construction is checked to occur in a prefix of
/// the fixed point; a miss means the builder itself is broken and comes
/// back as [`Error::Internal`].
pub fn tm_adversarial_word(m: u32) -> Result<Word> {
    if m == 0 {
        return Err(Error::Input(
            "adversarial level m must be at least 1".into(),
        ));
    }
    let sub = Substitution::thue_morse();
    let mut letters = Vec::new();
    for j in 0..=m {
        let seed = j % 2; // alternate a, b, a, ...
        let power = 2 * (m - j);
        letters.extend(sub.apply_power(&[seed], power));
    }
    let expected_len = ((4u128.pow(m + 1) - 1) / 3) as usize;
    if letters.len() != expected_len {
        return Err(Error::Internal(format!(
            "adversarial word has length {} but the block sum predicts {}",
            letters.len(),
            expected_len
        )));
    }
    let word = Word::new(letters);
    verify_factor(&sub, &word)?;
    Ok(word)
}

/// Checks that `word` occurs in the fixed point, scanning prefixes of
/// escalating length before giving up.
fn verify_factor(sub: &Substitution, word: &Word) -> Result<()> {
    for scale in [4usize, 16, 64] {
        let prefix = sub.fixed_point_prefix(0, scale * word.len())?;
        let found = prefix
            .letters()
            .windows(word.len())
            .any(|w| w == word.letters());
        if found {
            return Ok(());
        }
    }
    Err(Error::Internal(
        "adversarial word does not occur in the language it was built for".into(),
    ))
}
