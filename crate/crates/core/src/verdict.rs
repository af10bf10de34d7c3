//! Plasticity verdicts: combine spectral certificates with observed
//! balance behaviour into a structured report.
//!
//! A spectral certificate (every secondary eigenvalue modulus below 1)
//! proves that all mean-matched length changes contract, which settles
//! letter-level plasticity outright. Without a certificate the verdict
//! falls back on finite evidence: balance profiles whose running maxima
//! stop lifting well before the observation horizon are reported as
//! bounded, profiles that keep lifting as growth. Growth of a word-level
//! target downgrades only the "totally" verdict; the Thue-Morse language
//! is the template, with letters balanced and `ab` drifting.

use crate::balance::{balance_profiles, BalanceProfile, LanguageSource};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::SpectralData;
use crate::substitution::Substitution;
use crate::word::Word;

/// What a balance profile looked like over the observed range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalanceTrend {
    /// The running maximum of `B(n)` settled early; consistent with a
    /// bounded profile but not a proof.
    BoundedObserved,
    /// The running maximum kept lifting into the last fifth of the
    /// observed range; consistent with unbounded growth.
    GrowthObserved,
}

/// Digest of one target's balance profile.
#[derive(Debug, Clone)]
pub struct TargetEvidence {
    pub target: Word,
    /// The target spelled in the substitution's alphabet.
    pub name: String,
    pub trend: BalanceTrend,
    /// Largest spread seen over the profiled range.
    pub observed_constant: u64,
    /// Last window length at which the running maximum of `B(n)` rose.
    pub last_lift_n: usize,
    /// How many times the running maximum rose, counting the first row.
    pub lift_count: usize,
    /// Least-squares-free growth estimate: balance gained per unit of
    /// `ln n` between the first and last lift. Only present when the
    /// trend is growth and at least two lifts were seen.
    pub fitted_log_slope: Option<f64>,
}

/// Balance evidence for every letter and every short word of a language.
#[derive(Debug, Clone)]
pub struct BalanceEvidence {
    /// Largest window length profiled.
    pub n_max: usize,
    /// Word targets cover all factors of length `2 ..= word_len`.
    pub word_len: usize,
    pub letters: Vec<TargetEvidence>,
    pub words: Vec<TargetEvidence>,
}

/// Letter-level verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlasticityVerdict {
    /// A spectral certificate holds; every mean-matched length change
    /// contracts, independent of the finite observations.
    PlasticCertified,
    /// No certificate, but letter balance stayed bounded over the
    /// observed range.
    PlasticEvidence,
    /// Letter-balance growth was observed.
    NotPlasticEvidence,
}

/// Word-level (recoding-stable) verdict; evidence only, never certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TotalVerdict {
    /// Every profiled word target stayed bounded.
    TotallyPlasticEvidence,
    /// At least one word target kept lifting.
    GrowthObserved,
}

/// Combined report for one substitution.
#[derive(Debug, Clone)]
pub struct PlasticityReport<S: Scalar> {
    pub verdict: PlasticityVerdict,
    pub total: TotalVerdict,
    /// Names of every target whose trend was growth, letters first.
    pub growth_targets: Vec<String>,
    pub spectral: SpectralData<S>,
    pub evidence: BalanceEvidence,
}

/// Profiles every letter and every factor of length `2 ..= word_len`,
/// sharing one factor enumeration at `n_max` across all targets.
pub fn gather_balance_evidence(
    sub: &Substitution,
    n_max: usize,
    word_len: usize,
) -> Result<BalanceEvidence> {
    if word_len == 0 {
        return Err(Error::Input("word length bound must be at least 1".into()));
    }
    if n_max < word_len {
        return Err(Error::Input(format!(
            "observation horizon {n_max} is below the word length bound {word_len}"
        )));
    }
    let alphabet = sub.alphabet();
    let mut targets: Vec<Word> = alphabet.letters().map(Word::single).collect();
    let letter_count = targets.len();
    for k in 2..=word_len {
        targets.extend(crate::factors::factors(sub, k)?);
    }
    let profiles = balance_profiles(&LanguageSource::Substitution(sub), &targets, n_max)?;
    let mut digests = targets
        .iter()
        .zip(&profiles)
        .map(|(t, p)| digest(alphabet.format_word(t), p));
    let letters = digests.by_ref().take(letter_count).collect();
    let words = digests.collect();
    Ok(BalanceEvidence {
        n_max,
        word_len,
        letters,
        words,
    })
}

/// Classifies one profile by where its running maximum last rose.
fn digest(name: String, profile: &BalanceProfile) -> TargetEvidence {
    let mut running = 0u64;
    let mut lifts: Vec<(usize, u64)> = Vec::new();
    for row in &profile.rows {
        let b = row.balance();
        if lifts.is_empty() || b > running {
            running = b;
            lifts.push((row.n, b));
        }
    }
    let (last_lift_n, _) = *lifts.last().expect("profiles have at least one row");
    let horizon = profile.rows.last().expect("non-empty profile").n;
    // A maximum that still lifted past the first fifth of the range is
    // treated as growth; bounded profiles settle long before that.
    let trend = if last_lift_n * 5 > horizon {
        BalanceTrend::GrowthObserved
    } else {
        BalanceTrend::BoundedObserved
    };
    let fitted_log_slope = match (trend, lifts.first(), lifts.last()) {
        (BalanceTrend::GrowthObserved, Some(&(n0, b0)), Some(&(n1, b1))) if n1 > n0 => {
            Some((b1 as f64 - b0 as f64) / ((n1 as f64).ln() - (n0 as f64).ln()))
        }
        _ => None,
    };
    TargetEvidence {
        target: profile.target.clone(),
        name,
        trend,
        observed_constant: profile.observed_constant,
        last_lift_n,
        lift_count: lifts.len(),
        fitted_log_slope,
    }
}

/// Merges balance evidence with spectral data into the final verdicts.
///
/// A spectral certificate together with observed letter-balance growth
/// is contradictory (the certificate implies letters are balanced) and
/// comes back as [`Error::Internal`]. Word-level growth under a
/// certificate is a consistent and expected outcome.
pub fn plasticity_verdict<S: Scalar>(
    sub: &Substitution,
    evidence: BalanceEvidence,
    spectral: SpectralData<S>,
) -> Result<PlasticityReport<S>> {
    if spectral.dim() != sub.alphabet().len() {
        return Err(Error::Input(format!(
            "spectral data is {}-dimensional but the alphabet has {} letters",
            spectral.dim(),
            sub.alphabet().len()
        )));
    }
    let letter_growth = evidence
        .letters
        .iter()
        .any(|e| e.trend == BalanceTrend::GrowthObserved);
    if spectral.pisot_certificate && letter_growth {
        return Err(Error::Internal(
            "spectral certificate contradicts observed letter-balance growth".into(),
        ));
    }
    let verdict = if spectral.pisot_certificate {
        PlasticityVerdict::PlasticCertified
    } else if letter_growth {
        PlasticityVerdict::NotPlasticEvidence
    } else {
        PlasticityVerdict::PlasticEvidence
    };
    let growth_targets: Vec<String> = evidence
        .letters
        .iter()
        .chain(&evidence.words)
        .filter(|e| e.trend == BalanceTrend::GrowthObserved)
        .map(|e| e.name.clone())
        .collect();
    let total = if growth_targets.is_empty() {
        TotalVerdict::TotallyPlasticEvidence
    } else {
        TotalVerdict::GrowthObserved
    };
    Ok(PlasticityReport {
        verdict,
        total,
        growth_targets,
        spectral,
        evidence,
    })
}
