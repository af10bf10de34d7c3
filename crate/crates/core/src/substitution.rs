use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::matrix::SubstitutionMatrix;
use crate::word::Word;

/// Non-erasing substitution: one replacement word per letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    rules: Vec<Word>,
}

/// Seed for a two-sided fixed sequence.
///
/// `left . right` is anchored at the origin: `power` applications of the
/// substitution extend the word on both sides without disturbing what is
/// already there, because the image of `left` ends with `left` and the image
/// of `right` begins with `right`, and `left right` is itself a factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BiInfiniteSeed {
    pub left: Letter,
    pub right: Letter,
    pub power: u32,
}

impl Substitution {
    /// Builds a substitution, checking one non-empty rule per letter with
    /// all images inside the alphabet.
    pub fn new(alphabet: Alphabet, rules: Vec<Word>) -> Result<Self> {
        if rules.len() != alphabet.len() {
            return Err(Error::Input(format!(
                "expected {} rules, got {}",
                alphabet.len(),
                rules.len()
            )));
        }
        for (i, rule) in rules.iter().enumerate() {
            if rule.is_empty() {
                return Err(Error::Input(format!(
                    "rule for {:?} is erasing (empty image)",
                    alphabet.name(i as Letter)
                )));
            }
            for &l in rule.letters() {
                if !alphabet.contains(l) {
                    return Err(Error::Input(format!(
                        "rule for {:?} uses letter index {} outside the alphabet",
                        alphabet.name(i as Letter),
                        l
                    )));
                }
            }
        }
        Ok(Substitution { alphabet, rules })
    }

    /// a -> ab, b -> a over `{a, b}`.
    pub fn fibonacci() -> Self {
        Substitution::new(
            Alphabet::binary(),
            vec![Word::new(vec![0, 1]), Word::new(vec![0])],
        )
        .expect("built-in rules are valid")
    }

    /// a -> ab, b -> ba over `{a, b}`.
    pub fn thue_morse() -> Self {
        Substitution::new(
            Alphabet::binary(),
            vec![Word::new(vec![0, 1]), Word::new(vec![1, 0])],
        )
        .expect("built-in rules are valid")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Word] {
        &self.rules
    }

    pub fn image(&self, letter: Letter) -> &Word {
        &self.rules[letter as usize]
    }

    /// Applies the substitution to each letter of `word` and concatenates the
    /// images. Letters outside the alphabet are rejected.
    pub fn apply(&self, word: &Word) -> Result<Word> {
        for &l in word.letters() {
            if !self.alphabet.contains(l) {
                return Err(Error::Input(format!(
                    "word uses letter index {} outside the alphabet",
                    l
                )));
            }
        }
        let mut out = Vec::with_capacity(word.len() * 2);
        self.apply_into(&mut out, word.letters());
        Ok(Word::new(out))
    }

    /// Concatenated images of already-validated letters.
    pub(crate) fn apply_into(&self, out: &mut Vec<Letter>, letters: &[Letter]) {
        for &l in letters {
            out.extend_from_slice(self.rules[l as usize].letters());
        }
    }

    /// Applies the substitution `power` times to `letters`.
    pub(crate) fn apply_power(&self, letters: &[Letter], power: u32) -> Vec<Letter> {
        let mut current = letters.to_vec();
        for _ in 0..power {
            let mut next = Vec::with_capacity(current.len() * 2);
            self.apply_into(&mut next, &current);
            current = next;
        }
        current
    }

    /// True when the image of `seed` starts with `seed`, so that iterating
    /// the substitution from `seed` grows a one-sided fixed sequence.
    pub fn is_prolongable(&self, seed: Letter) -> bool {
        self.alphabet.contains(seed) && self.rules[seed as usize].letter(0) == seed
    }

    /// First `n` letters of the one-sided fixed sequence grown from `seed`.
    ///
    /// Each round applies the substitution to the current prefix and
    /// truncates back to `n`, so the full fixed-point word is never
    /// materialized beyond the requested length.
    pub fn fixed_point_prefix(&self, seed: Letter, n: usize) -> Result<Word> {
        if !self.alphabet.contains(seed) {
            return Err(Error::Input(format!(
                "seed letter index {seed} outside the alphabet"
            )));
        }
        if !self.is_prolongable(seed) {
            return Err(Error::Precondition(format!(
                "image of {:?} does not start with it; the one-sided fixed sequence is undefined",
                self.alphabet.name(seed)
            )));
        }
        let mut prefix = vec![seed];
        while prefix.len() < n {
            let mut next = Vec::with_capacity((prefix.len() * 2).min(n));
            for &l in &prefix {
                next.extend_from_slice(self.rules[l as usize].letters());
                if next.len() >= n {
                    break;
                }
            }
            next.truncate(n);
            if next.len() == prefix.len() {
                return Err(Error::Precondition(format!(
                    "substitution does not grow past length {} from seed {:?}",
                    prefix.len(),
                    self.alphabet.name(seed)
                )));
            }
            prefix = next;
        }
        prefix.truncate(n);
        Ok(Word::new(prefix))
    }

    pub fn matrix(&self) -> SubstitutionMatrix {
        SubstitutionMatrix::from_substitution(self)
    }

    pub fn is_primitive(&self) -> bool {
        self.matrix().is_primitive()
    }

    /// True when some image has length at least two, so iteration expands.
    pub fn is_expanding(&self) -> bool {
        self.rules.iter().any(|r| r.len() >= 2)
    }

    /// Finds the smallest power `k` and a two-letter factor `ps` such that
    /// the `k`-fold image of `p` ends with `p` and the `k`-fold image of `s`
    /// starts with `s`.
    ///
    /// Only first and last letters of images matter, so the search iterates
    /// two self-maps of the alphabet instead of expanding words. Both maps
    /// are eventually periodic with period and preperiod at most the
    /// alphabet size, which bounds the search.
    pub fn biinfinite_seed(&self) -> Result<BiInfiniteSeed> {
        crate::matrix::ensure_primitive(self)?;
        let n = self.alphabet.len();
        let two_factors = crate::factors::factors(self, 2)?;
        let first_map: Vec<Letter> = (0..n).map(|i| self.rules[i].letter(0)).collect();
        let last_map: Vec<Letter> = (0..n)
            .map(|i| self.rules[i].letter(self.rules[i].len() - 1))
            .collect();

        // firsts[x] / lasts[x] track the first/last letter of the k-fold
        // image of x, advanced one power per loop turn.
        let mut firsts: Vec<Letter> = (0..n as Letter).collect();
        let mut lasts: Vec<Letter> = (0..n as Letter).collect();
        let budget = (n * n + n) as u32;
        for k in 1..=budget {
            for x in 0..n {
                firsts[x] = first_map[firsts[x] as usize];
                lasts[x] = last_map[lasts[x] as usize];
            }
            for p in 0..n as Letter {
                for s in 0..n as Letter {
                    if lasts[p as usize] == p
                        && firsts[s as usize] == s
                        && two_factors.contains(&Word::new(vec![p, s]))
                    {
                        return Ok(BiInfiniteSeed {
                            left: p,
                            right: s,
                            power: k,
                        });
                    }
                }
            }
        }
        Err(Error::Limit(format!(
            "no two-sided seed found within power budget {budget}"
        )))
    }
}
