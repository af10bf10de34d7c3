//! Discrepancy of a prefix: running difference between the observed
//! occurrence count of a target word and the count an ideal frequency
//! would predict.
//!
//! For a prefix of length `N` the predicted count is `f * (N - |t| + 1)`
//! clamped at zero, the number of admissible start positions scaled by
//! the frequency `f`. Bounded discrepancy along a sequence is the
//! quantitative face of balancedness; a target whose balance grows has
//! prefixes whose discrepancy drifts.

use crate::error::{Error, Result};
use crate::scalar::{s_u64, s_usize, Scalar};
use crate::word::Word;

/// Discrepancy values of one target along the prefixes of a word.
#[derive(Debug, Clone)]
pub struct DiscrepancySeries<S: Scalar> {
    /// The word being counted.
    pub target: Word,
    /// The ideal occurrence frequency used for the prediction.
    pub frequency: S,
    /// `values[N]` is the discrepancy of the length-`N` prefix, for
    /// `N = 0 ..= len`; `values[0]` is always zero.
    pub values: Vec<S>,
    /// Largest absolute value attained along the series.
    pub sup_abs: S,
}

/// Discrepancy of `target` along every prefix of `text`.
///
/// `frequency` must lie in `[0, 1]`; it is the caller's claim about the
/// ideal density of the target, typically a Perron frequency from
/// [`crate::perron_data`] or a letter slope. The series itself makes no
/// attempt to check that claim, it just measures the drift against it.
pub fn discrepancy_series<S: Scalar>(
    text: &Word,
    target: &Word,
    frequency: S,
) -> Result<DiscrepancySeries<S>> {
    if target.is_empty() {
        return Err(Error::Input("discrepancy target must be non-empty".into()));
    }
    if !(frequency >= S::zero() && frequency <= S::one()) {
        return Err(Error::Input(format!(
            "frequency must lie in [0, 1], got {frequency}"
        )));
    }
    let t = target.letters();
    let letters = text.letters();
    let mut values = Vec::with_capacity(letters.len() + 1);
    let mut count = 0u64;
    let mut sup_abs = S::zero();
    for n in 0..=letters.len() {
        if n >= t.len() && letters[n - t.len()..n] == *t {
            count += 1;
        }
        let positions = (n + 1).saturating_sub(t.len());
        let d = s_u64::<S>(count) - frequency * s_usize::<S>(positions);
        if d.abs() > sup_abs {
            sup_abs = d.abs();
        }
        values.push(d);
    }
    Ok(DiscrepancySeries {
        target: target.clone(),
        frequency,
        values,
        sup_abs,
    })
}
