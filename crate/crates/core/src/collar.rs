//! Collared recoding: replace each letter by the window of radius `r`
//! around it, turning word-occurrence questions into letter-occurrence
//! questions over a larger alphabet.
//!
//! The collared alphabet has one letter per factor of length `2r + 1`.
//! Recoding drops `r` positions at each end of the input, and the count
//! of a collared letter in the recoded word equals the count of its
//! window in the original, so balance properties transfer exactly with
//! the window length shifted by `2r`.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::factors::factors;
use crate::substitution::Substitution;
use crate::word::Word;

/// A radius-`r` window recoding of a substitution language.
#[derive(Debug, Clone)]
pub struct CollaredRecoding {
    radius: usize,
    collared: Alphabet,
    windows: Vec<Word>,
    index: HashMap<Word, Letter>,
}

impl CollaredRecoding {
    /// Builds the recoding for all radius-`r` windows of the language.
    ///
    /// Collared letter names are the window spelled out in the base
    /// alphabet, concatenated when every base name is a single character
    /// and dot-separated otherwise.
    pub fn new(sub: &Substitution, radius: usize) -> Result<Self> {
        let width = 2 * radius + 1;
        let set = factors(sub, width)?;
        let base = sub.alphabet();
        let plain = base.names().all(|name| name.chars().count() == 1);
        let windows: Vec<Word> = set.into_iter().collect();
        let names: Vec<String> = windows
            .iter()
            .map(|w| {
                let parts: Vec<&str> = w.letters().iter().map(|&l| base.name(l)).collect();
                if plain {
                    parts.concat()
                } else {
                    parts.join(".")
                }
            })
            .collect();
        let collared = Alphabet::new(names)?;
        let index = windows
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as Letter))
            .collect();
        Ok(CollaredRecoding {
            radius,
            collared,
            windows,
            index,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// The alphabet whose letters are the radius-`r` windows.
    pub fn collared_alphabet(&self) -> &Alphabet {
        &self.collared
    }

    /// All windows, indexed by collared letter.
    pub fn windows(&self) -> &[Word] {
        &self.windows
    }

    /// The window a collared letter stands for.
    pub fn window(&self, letter: Letter) -> &Word {
        &self.windows[letter as usize]
    }

    /// The collared letter for a window, if the window is in the language.
    pub fn collared_letter(&self, window: &Word) -> Option<Letter> {
        self.index.get(window).copied()
    }

    /// Recodes a word letter-by-letter through its radius-`r` windows.
    ///
    /// The output is shorter by `r` at each end. Input words must be long
    /// enough to hold at least one full window, and every window must be
    /// a factor of the language the recoding was built from.
    pub fn recode(&self, word: &Word) -> Result<Word> {
        let width = 2 * self.radius + 1;
        if word.len() < width {
            return Err(Error::Input(format!(
                "word of length {} is too short for radius {} (needs at least {})",
                word.len(),
                self.radius,
                width
            )));
        }
        let letters = word.letters();
        let mut out = Vec::with_capacity(word.len() - 2 * self.radius);
        for start in 0..=word.len() - width {
            let window = Word::from(&letters[start..start + width]);
            match self.index.get(&window) {
                Some(&l) => out.push(l),
                None => {
                    return Err(Error::Input(format!(
                        "window at position {start} is not a factor of the language"
                    )));
                }
            }
        }
        Ok(Word::new(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balance::{balance_profile, LanguageSource};
    use crate::word::count_occurrences;
    use std::collections::BTreeSet;

    #[test]
    fn radius_zero_is_the_identity_recoding() {
        let sub = Substitution::fibonacci();
        let c = CollaredRecoding::new(&sub, 0).unwrap();
        let names: Vec<&str> = c.collared_alphabet().names().collect();
        assert_eq!(names, vec!["a", "b"]);
        let w = sub.fixed_point_prefix(0, 30).unwrap();
        assert_eq!(c.recode(&w).unwrap(), w);
    }

    #[test]
    fn fibonacci_radius_one_alphabet() {
        let c = CollaredRecoding::new(&Substitution::fibonacci(), 1).unwrap();
        let names: BTreeSet<&str> = c.collared_alphabet().names().collect();
        let expected: BTreeSet<&str> = ["aab", "aba", "baa", "bab"].into_iter().collect();
        assert_eq!(names, expected);
    }

    #[test]
    fn thue_morse_radius_one_alphabet_has_six_letters() {
        let c = CollaredRecoding::new(&Substitution::thue_morse(), 1).unwrap();
        assert_eq!(c.collared_alphabet().len(), 6);
    }

    #[test]
    fn recode_shortens_by_the_radius_at_each_end() {
        let sub = Substitution::thue_morse();
        let c = CollaredRecoding::new(&sub, 2).unwrap();
        let w = sub.fixed_point_prefix(0, 40).unwrap();
        assert_eq!(c.recode(&w).unwrap().len(), 36);
    }

    #[test]
    fn window_counts_survive_recoding() {
        // Counting the collared letter of `w` in the recoded word is the
        // same as counting `w` itself in the original.
        let sub = Substitution::fibonacci();
        let c = CollaredRecoding::new(&sub, 1).unwrap();
        let u = sub.fixed_point_prefix(0, 500).unwrap();
        let recoded = c.recode(&u).unwrap();
        for (i, window) in c.windows().iter().enumerate() {
            let direct = count_occurrences(window, &u);
            let lifted = count_occurrences(&Word::single(i as Letter), &recoded);
            assert_eq!(direct, lifted, "window {i}");
        }
    }

    #[test]
    fn collared_letter_balance_matches_shifted_word_balance() {
        // Balance of the word `w` at window length n + 2r equals balance
        // of its collared letter at length n. Checked here on a long
        // one-sided sample; the recoded windows of a recoded prefix are
        // exactly the recodings of the original windows.
        let sub = Substitution::fibonacci();
        let r = 1usize;
        let c = CollaredRecoding::new(&sub, r).unwrap();
        let u = sub.fixed_point_prefix(0, 3_000).unwrap();
        let recoded = c.recode(&u).unwrap();
        let target = Word::from(&[0u32, 1, 0][..]);
        let letter = c.collared_letter(&target).unwrap();
        for n in 1..=25 {
            let word_rows =
                balance_profile(&LanguageSource::Window(&u), &target, n + 2 * r).unwrap();
            let letter_rows =
                balance_profile(&LanguageSource::Window(&recoded), &Word::single(letter), n)
                    .unwrap();
            let w_row = *word_rows.row(n + 2 * r).unwrap();
            let l_row = *letter_rows.row(n).unwrap();
            // The two scans range over the same window index set, so the
            // raw counts agree, not just the spreads.
            assert_eq!((w_row.min, w_row.max), (l_row.min, l_row.max), "length {n}");
        }
    }

    #[test]
    fn short_input_is_rejected() {
        let c = CollaredRecoding::new(&Substitution::fibonacci(), 2).unwrap();
        let err = c.recode(&Word::from(&[0u32, 1, 0][..])).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn foreign_window_is_rejected() {
        let c = CollaredRecoding::new(&Substitution::fibonacci(), 1).unwrap();
        // `bb` never occurs, so any word containing it fails to recode.
        let err = c.recode(&Word::from(&[0u32, 1, 1, 0][..])).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }
}
