//! Lazily materialized two-sided fixed sequences.
//!
//! A [`BiSequence`] stands for the bi-infinite sequence grown from a
//! [`crate::BiInfiniteSeed`]: letters at indices `..., -2, -1` come from
//! ever-higher powers of the substitution applied to the left seed
//! letter, letters at `0, 1, 2, ...` from powers applied to the right
//! seed letter. Both limits exist letterwise because each power image
//! extends the previous one without disturbing it. Only a finite window
//! is ever stored; it grows on demand behind a lock and behaves as a
//! pure memo, so shared handles stay cheap and consistent.

use std::sync::RwLock;

use crate::alphabet::Letter;
use crate::error::{Error, Result};
use crate::substitution::{BiInfiniteSeed, Substitution};

/// Growth rounds before concluding something is wrong with the seed.
const GROWTH_ROUNDS: usize = 10_000;
/// Hard ceiling on either window arm, in letters. Checked before each
/// growth round, so the real bound is this times one image-expansion
/// factor; every scan budget in the crate sits far below it.
const ARM_LIMIT: usize = 1 << 26;

/// A bi-infinite fixed sequence of a primitive, expanding substitution.
#[derive(Debug)]
pub struct BiSequence {
    sub: Substitution,
    seed: BiInfiniteSeed,
    window: RwLock<Window>,
}

/// Materialized letters: `left` holds indices `-left.len() ..= -1` in
/// natural order (the index `-1` letter is last), `right` holds
/// `0 .. right.len()`. Each arm is always a full power image of its seed
/// letter, so one more application of `sub^power` extends it in place.
#[derive(Debug)]
struct Window {
    left: Vec<Letter>,
    right: Vec<Letter>,
}

impl BiSequence {
    /// Builds the sequence handle for a primitive, expanding substitution.
    ///
    /// Substitutions whose images all have length 1 never outgrow their
    /// seed and are rejected, as are non-primitive ones (via the seed
    /// search).
    pub fn new(sub: &Substitution) -> Result<Self> {
        if !sub.is_expanding() {
            return Err(Error::Precondition(
                "every image has length 1; the window around the origin never grows".into(),
            ));
        }
        let seed = sub.biinfinite_seed()?;
        let window = Window {
            left: vec![seed.left],
            right: vec![seed.right],
        };
        Ok(BiSequence {
            sub: sub.clone(),
            seed,
            window: RwLock::new(window),
        })
    }

    pub fn substitution(&self) -> &Substitution {
        &self.sub
    }

    pub fn seed(&self) -> BiInfiniteSeed {
        self.seed
    }

    /// The letter at any index, growing the window as needed.
    pub fn letter(&self, index: i64) -> Result<Letter> {
        self.ensure(index, index + 1)?;
        let w = self.window.read().expect("window lock");
        Ok(w.get(index))
    }

    /// The letters at indices `start .. end`.
    pub fn letters_range(&self, start: i64, end: i64) -> Result<Vec<Letter>> {
        if start > end {
            return Err(Error::Input(format!(
                "range start {start} exceeds end {end}"
            )));
        }
        self.ensure(start, end)?;
        let w = self.window.read().expect("window lock");
        Ok((start..end).map(|i| w.get(i)).collect())
    }

    /// Grows the window until it covers indices `lo .. hi`.
    fn ensure(&self, lo: i64, hi: i64) -> Result<()> {
        {
            let w = self.window.read().expect("window lock");
            if w.covers(lo, hi) {
                return Ok(());
            }
        }
        let mut w = self.window.write().expect("window lock");
        for _ in 0..GROWTH_ROUNDS {
            if w.covers(lo, hi) {
                return Ok(());
            }
            if lo < 0 && (w.left.len() as i64) < -lo {
                if w.left.len() > ARM_LIMIT {
                    return Err(Error::Limit(format!(
                        "window needs more than {ARM_LIMIT} letters left of the origin"
                    )));
                }
                w.left = self.sub.apply_power(&w.left, self.seed.power);
            }
            if (w.right.len() as i64) < hi {
                if w.right.len() > ARM_LIMIT {
                    return Err(Error::Limit(format!(
                        "window needs more than {ARM_LIMIT} letters right of the origin"
                    )));
                }
                w.right = self.sub.apply_power(&w.right, self.seed.power);
            }
        }
        if w.covers(lo, hi) {
            return Ok(());
        }
        Err(Error::Internal(format!(
            "window failed to cover [{lo}, {hi}) after {GROWTH_ROUNDS} growth rounds"
        )))
    }
}

impl Window {
    fn covers(&self, lo: i64, hi: i64) -> bool {
        (lo >= 0 || (self.left.len() as i64) >= -lo) && (self.right.len() as i64) >= hi
    }

    fn get(&self, index: i64) -> Letter {
        if index >= 0 {
            self.right[index as usize]
        } else {
            self.left[self.left.len() - (-index) as usize]
        }
    }
}
