use crate::alphabet::Letter;

/// Finite word stored as letter indices.
///
/// Ordering and hashing are by the index sequence, so sorted collections of
/// words come out lexicographic in alphabet order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(letter: Letter) -> Self {
        Word(vec![letter])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letter(&self, i: usize) -> Letter {
        self.0[i]
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Copy of the index range `start..end`.
    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Number of start positions at which `needle` occurs in `haystack`.
///
/// Occurrences may overlap. The empty needle occurs at every boundary,
/// giving `haystack.len() + 1`.
pub fn count_occurrences(needle: &Word, haystack: &Word) -> usize {
    count_in_slice(needle.letters(), haystack.letters())
}

pub(crate) fn count_in_slice(needle: &[Letter], haystack: &[Letter]) -> usize {
    if needle.is_empty() {
        return haystack.len() + 1;
    }
    if needle.len() > haystack.len() {
        return 0;
    }
    haystack
        .windows(needle.len())
        .filter(|w| *w == needle)
        .count()
}

/// Per-position match flags: `flags[p]` is true when `needle` occurs at `p`.
///
/// The vector has `haystack.len() - needle.len() + 1` entries and is empty
/// when the needle does not fit.
pub(crate) fn match_flags(needle: &[Letter], haystack: &[Letter]) -> Vec<bool> {
    if needle.is_empty() || needle.len() > haystack.len() {
        return Vec::new();
    }
    haystack
        .windows(needle.len())
        .map(|w| w == needle)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(letters: &[Letter]) -> Word {
        Word::from(letters)
    }

    #[test]
    fn counts_overlapping_occurrences() {
        assert_eq!(count_occurrences(&w(&[0, 1]), &w(&[0, 1, 0, 1])), 2);
        assert_eq!(count_occurrences(&w(&[0, 0]), &w(&[0, 0, 0])), 2);
        assert_eq!(count_occurrences(&w(&[0]), &w(&[0, 1, 0])), 2);
    }

    #[test]
    fn empty_needle_counts_boundaries() {
        assert_eq!(count_occurrences(&Word::empty(), &w(&[0, 1, 0])), 4);
    }

    #[test]
    fn oversized_needle_never_occurs() {
        assert_eq!(count_occurrences(&w(&[0, 1, 0]), &w(&[0, 1])), 0);
    }

    #[test]
    fn word_ordering_is_lexicographic() {
        let mut v = vec![w(&[1]), w(&[0, 1]), w(&[0]), w(&[0, 0])];
        v.sort();
        assert_eq!(v, vec![w(&[0]), w(&[0, 0]), w(&[0, 1]), w(&[1])]);
    }

    proptest! {
        // Splitting a word can only hide occurrences that straddle the cut,
        // and at most needle-length - 1 positions straddle it.
        #[test]
        fn concat_occurrence_bounds(
            needle in prop::collection::vec(0u32..2, 1..4),
            left in prop::collection::vec(0u32..2, 0..20),
            right in prop::collection::vec(0u32..2, 0..20),
        ) {
            let needle = Word::new(needle);
            let left = Word::new(left);
            let right = Word::new(right);
            let joined = left.concat(&right);
            let split = count_occurrences(&needle, &left) + count_occurrences(&needle, &right);
            let whole = count_occurrences(&needle, &joined);
            prop_assert!(split <= whole);
            prop_assert!(whole <= split + needle.len() - 1);
        }
    }
}
