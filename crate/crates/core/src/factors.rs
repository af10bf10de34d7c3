//! Exact enumeration of the words occurring in a substitution's subshift.

use std::collections::BTreeSet;

use crate::alphabet::Letter;
use crate::error::{Error, Result};
use crate::matrix::ensure_primitive;
use crate::substitution::Substitution;
use crate::word::Word;

/// All length-`n` factors of the subshift generated by `sub`, ordered by
/// letter index.
///
/// Enumeration starts from the length-`n` windows of iterated letter images
/// (iterated far enough that every image reaches length `n`) and closes
/// under taking windows of the image of every known factor. Processing each
/// factor exactly once reaches the same fixed point as whole-set closure
/// rounds, because the windows contributed by a factor depend on that factor
/// alone. Termination: there are finitely many words of length `n`.
pub fn factors(sub: &Substitution, n: usize) -> Result<BTreeSet<Word>> {
    if n == 0 {
        return Err(Error::Input("factor length must be at least 1".into()));
    }
    ensure_primitive(sub)?;
    if !sub.is_expanding() {
        // A primitive substitution with all images of length 1 is the
        // identity on a single letter; the subshift is one constant sequence.
        return Ok(BTreeSet::from([Word::new(vec![0; n])]));
    }

    let m = power_reaching(sub, n)?;
    let mut set: BTreeSet<Word> = BTreeSet::new();
    let mut queue: Vec<Word> = Vec::new();
    for letter in sub.alphabet().letters() {
        let image = sub.apply_power(&[letter], m);
        push_windows(&image, n, &mut set, &mut queue);
    }
    let mut image_buf: Vec<Letter> = Vec::new();
    while let Some(w) = queue.pop() {
        image_buf.clear();
        sub.apply_into(&mut image_buf, w.letters());
        push_windows(&image_buf, n, &mut set, &mut queue);
    }
    Ok(set)
}

fn push_windows(text: &[Letter], n: usize, set: &mut BTreeSet<Word>, queue: &mut Vec<Word>) {
    if text.len() < n {
        return;
    }
    for start in 0..=text.len() - n {
        let w = Word::new(text[start..start + n].to_vec());
        if set.insert(w.clone()) {
            queue.push(w);
        }
    }
}

/// Smallest power making every letter image at least `n` long.
fn power_reaching(sub: &Substitution, n: usize) -> Result<u32> {
    let a = sub.alphabet().len();
    let mut lens: Vec<u64> = vec![1; a];
    let mut m = 0u32;
    while lens.iter().copied().min().unwrap_or(0) < n as u64 {
        let prev = lens.clone();
        for x in 0..a {
            let mut total: u64 = 0;
            for &y in sub.image(x as Letter).letters() {
                total = total.checked_add(prev[y as usize]).ok_or_else(|| {
                    Error::Limit("image length overflow while seeding factor enumeration".into())
                })?;
            }
            lens[x] = total;
        }
        m += 1;
        if m > 10_000 {
            return Err(Error::Limit(
                "seed power exceeded 10000 without reaching the requested factor length".into(),
            ));
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    fn names(sub: &Substitution, set: &BTreeSet<Word>) -> Vec<String> {
        set.iter().map(|w| sub.alphabet().format_word(w)).collect()
    }

    #[test]
    fn fibonacci_length_two() {
        let sub = Substitution::fibonacci();
        let f2 = factors(&sub, 2).unwrap();
        assert_eq!(names(&sub, &f2), ["aa", "ab", "ba"]);
    }

    #[test]
    fn thue_morse_small_lengths() {
        let sub = Substitution::thue_morse();
        let f2 = factors(&sub, 2).unwrap();
        assert_eq!(names(&sub, &f2), ["aa", "ab", "ba", "bb"]);
        let f3 = factors(&sub, 3).unwrap();
        assert_eq!(names(&sub, &f3), ["aab", "aba", "abb", "baa", "bab", "bba"]);
    }

    #[test]
    fn fibonacci_complexity_is_n_plus_one() {
        let sub = Substitution::fibonacci();
        for n in 1..=50 {
            assert_eq!(factors(&sub, n).unwrap().len(), n + 1, "length {n}");
        }
    }

    #[test]
    fn matches_prefix_scan_for_small_lengths() {
        for sub in [Substitution::fibonacci(), Substitution::thue_morse()] {
            let prefix = sub.fixed_point_prefix(0, 10_000).unwrap();
            for n in 1..=6 {
                let brute: BTreeSet<Word> = prefix
                    .letters()
                    .windows(n)
                    .map(|w| Word::new(w.to_vec()))
                    .collect();
                assert_eq!(factors(&sub, n).unwrap(), brute);
            }
        }
    }

    #[test]
    fn truncations_stay_in_the_language() {
        for sub in [Substitution::fibonacci(), Substitution::thue_morse()] {
            for n in 2..=8 {
                let smaller = factors(&sub, n - 1).unwrap();
                for w in factors(&sub, n).unwrap() {
                    assert!(smaller.contains(&w.subword(0, n - 1)));
                    assert!(smaller.contains(&w.subword(1, n)));
                }
            }
        }
    }

    #[test]
    fn zero_length_is_an_input_error() {
        assert!(matches!(
            factors(&Substitution::fibonacci(), 0),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn non_primitive_is_a_precondition_error() {
        let sub = Substitution::new(
            Alphabet::binary(),
            vec![Word::new(vec![0, 1]), Word::single(1)],
        )
        .unwrap();
        match factors(&sub, 2) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("primitive")),
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn identity_on_one_letter_has_constant_factors() {
        let sub = Substitution::new(Alphabet::new(["a"]).unwrap(), vec![Word::single(0)]).unwrap();
        let f3 = factors(&sub, 3).unwrap();
        assert_eq!(names(&sub, &f3), ["aaa"]);
    }
}
