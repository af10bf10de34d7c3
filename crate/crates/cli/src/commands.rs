//! One function per subcommand. Each builds the complete report text in
//! memory and hands it back, so a failure never leaves half a report on
//! the data stream.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use plastic_core::{
    balance_profiles, conjugacy, count_occurrences, decompose_length_change, default_distance_grid,
    equivariance_residual, factors, fitted_gap_rate, gather_balance_evidence, perron_data,
    plasticity_verdict, sturmian_prefix, tm_adversarial_word, translation_samples, Alphabet,
    BalanceProfile, BalanceTrend, BiSequence, CollaredRecoding, ContractionStatus, Error,
    EvidenceKind, LanguageSource, LengthChangeDecomposition, LengthVector, Letter,
    PlasticityVerdict, Substitution, TargetEvidence, Tiling, TotalVerdict, Word,
};
use sha2::{Digest, Sha256};

use crate::definition::{DefinitionError, SubstitutionFile};
use crate::emit::{fmt_sig, Csv, Json};

/// Relative tolerance for the power iteration behind every spectral call.
const SPECTRAL_TOL: f64 = 1e-12;

/// Prefix length for one-sided collared balance scans. Long enough that
/// every window length up to a few hundred sees thousands of samples,
/// short enough to recode instantly.
const COLLAR_SCAN_LEN: usize = 20_000;

/// A failure carrying the process exit code: 1 usage or parse, 2
/// precondition, 3 convergence or budget.
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: String) -> Failure {
        Failure { code: 1, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::Input(_) => 1,
            // Internal errors are bugs, but they still describe a state
            // the inputs cannot reach when preconditions hold.
            Error::Precondition(_) | Error::Internal(_) => 2,
            Error::Convergence(_) | Error::Limit(_) => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A definition file read from disk, with the digest that identifies the
/// exact bytes in reports.
struct Input {
    file: SubstitutionFile,
    digest: String,
    path: String,
}

fn load(path: &Path) -> Result<Input, Failure> {
    let shown = path.display().to_string();
    let bytes = fs::read(path).map_err(|e| Failure::usage(format!("{shown}: {e}")))?;
    let digest = format!("sha256:{:x}", Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::usage(format!("{shown}: not valid UTF-8")))?;
    let file = SubstitutionFile::parse(&text)
        .map_err(|e: DefinitionError| Failure::usage(format!("{shown}: {e}")))?;
    Ok(Input {
        file,
        digest,
        path: shown,
    })
}

/// Wraps a result payload with the fields every JSON report shares.
fn report(digest: Option<&str>, command: Json, result: Json) -> String {
    Json::Obj(vec![
        ("tool_version", Json::Str(env!("CARGO_PKG_VERSION").into())),
        (
            "input_digest",
            digest.map_or(Json::Null, |d| Json::Str(d.into())),
        ),
        ("command", command),
        ("result", result),
    ])
    .render()
}

/// Parses a target word: whitespace-separated letter names, or, when
/// every letter name is a single character, a compact run like "ab".
fn parse_target(alphabet: &Alphabet, text: &str) -> Result<Word, Error> {
    if let Ok(word) = alphabet.parse_word(text) {
        if !word.is_empty() {
            return Ok(word);
        }
    }
    if alphabet.names().all(|n| n.chars().count() == 1) {
        let spaced: String = text.chars().flat_map(|c| [c, ' ']).collect();
        return alphabet.parse_word(&spaced);
    }
    alphabet.parse_word(text)
}

fn first_prolongable(sub: &Substitution) -> Result<Letter, Error> {
    sub.alphabet()
        .letters()
        .find(|&l| sub.is_prolongable(l))
        .ok_or_else(|| {
            Error::Precondition(
                "no letter starts a one-sided fixed point; cannot sample a prefix".into(),
            )
        })
}

// ---------------------------------------------------------------- factors

pub fn factors_cmd(path: &Path, n: usize, format: Format) -> Result<String, Failure> {
    let input = load(path)?;
    let sub = input.file.substitution()?;
    let names: Vec<String> = factors(&sub, n)?
        .iter()
        .map(|w| sub.alphabet().format_word(w))
        .collect();
    Ok(match format {
        Format::Csv => {
            let mut csv = Csv::new(&["factor"]);
            for name in &names {
                csv.row([name.as_str()]);
            }
            csv.finish()
        }
        Format::Json => report(
            Some(&input.digest),
            Json::Obj(vec![
                ("subcommand", Json::Str("factors".into())),
                ("file", Json::Str(input.path.clone())),
                ("n", Json::Int(n as i128)),
            ]),
            Json::Obj(vec![
                ("count", Json::Int(names.len() as i128)),
                ("factors", Json::strings(names)),
            ]),
        ),
    })
}

// ---------------------------------------------------------------- balance

fn evidence_name(kind: EvidenceKind) -> &'static str {
    match kind {
        EvidenceKind::TwoSidedExact => "two_sided_exact",
        EvidenceKind::OneSidedWindow => "one_sided_window",
    }
}

fn profile_json(alphabet: &Alphabet, profile: &BalanceProfile) -> Json {
    Json::Obj(vec![
        ("target", Json::Str(alphabet.format_word(&profile.target))),
        (
            "evidence",
            Json::Str(evidence_name(profile.evidence).into()),
        ),
        (
            "observed_constant",
            Json::Int(profile.observed_constant as i128),
        ),
        (
            "rows",
            Json::Arr(
                profile
                    .rows
                    .iter()
                    .map(|r| {
                        Json::Obj(vec![
                            ("n", Json::Int(r.n as i128)),
                            ("min", Json::Int(r.min as i128)),
                            ("max", Json::Int(r.max as i128)),
                            ("balance", Json::Int(r.balance() as i128)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
}

fn profile_csv_rows(csv: &mut Csv, alphabet: &Alphabet, profiles: &[BalanceProfile]) {
    for profile in profiles {
        let target = alphabet.format_word(&profile.target);
        for row in &profile.rows {
            csv.row([
                target.as_str(),
                &row.n.to_string(),
                &row.min.to_string(),
                &row.max.to_string(),
                &row.balance().to_string(),
            ]);
        }
    }
}

pub fn balance_cmd(
    path: &Path,
    max_n: usize,
    words: &[String],
    collar: Option<usize>,
    format: Format,
) -> Result<String, Failure> {
    let input = load(path)?;
    let sub = input.file.substitution()?;

    // With a collar the scan runs over the recoded prefix and the
    // displayed alphabet switches to the collared letter names; targets
    // given as --word are spelled as base-alphabet windows.
    let (profiles, display): (Vec<BalanceProfile>, Alphabet) = match collar {
        None => {
            let targets: Vec<Word> = if words.is_empty() {
                sub.alphabet().letters().map(Word::single).collect()
            } else {
                words
                    .iter()
                    .map(|w| parse_target(sub.alphabet(), w))
                    .collect::<Result<_, _>>()?
            };
            let profiles = balance_profiles(&LanguageSource::Substitution(&sub), &targets, max_n)?;
            (profiles, sub.alphabet().clone())
        }
        Some(radius) => {
            let recoding = CollaredRecoding::new(&sub, radius)?;
            let seed = first_prolongable(&sub)?;
            let prefix = sub.fixed_point_prefix(seed, COLLAR_SCAN_LEN + 2 * radius)?;
            let recoded = recoding.recode(&prefix)?;
            let targets: Vec<Word> = if words.is_empty() {
                recoding
                    .collared_alphabet()
                    .letters()
                    .map(Word::single)
                    .collect()
            } else {
                words
                    .iter()
                    .map(|w| {
                        let window = parse_target(sub.alphabet(), w)?;
                        recoding
                            .collared_letter(&window)
                            .map(Word::single)
                            .ok_or_else(|| {
                                Error::Input(format!(
                                    "{:?} is not a length-{} factor, so it names no \
                                     collared letter",
                                    sub.alphabet().format_word(&window),
                                    2 * radius + 1
                                ))
                            })
                    })
                    .collect::<Result<_, _>>()?
            };
            let profiles = balance_profiles(&LanguageSource::Window(&recoded), &targets, max_n)?;
            (profiles, recoding.collared_alphabet().clone())
        }
    };

    Ok(match format {
        Format::Csv => {
            let mut csv = Csv::new(&["target", "n", "min", "max", "balance"]);
            profile_csv_rows(&mut csv, &display, &profiles);
            csv.finish()
        }
        Format::Json => report(
            Some(&input.digest),
            Json::Obj(vec![
                ("subcommand", Json::Str("balance".into())),
                ("file", Json::Str(input.path.clone())),
                ("max_n", Json::Int(max_n as i128)),
                ("words", Json::strings(words.iter().cloned())),
                (
                    "collar",
                    collar.map_or(Json::Null, |r| Json::Int(r as i128)),
                ),
            ]),
            Json::Obj(vec![(
                "profiles",
                Json::Arr(profiles.iter().map(|p| profile_json(&display, p)).collect()),
            )]),
        ),
    })
}

// --------------------------------------------------------------- spectral

pub fn spectral_cmd(path: &Path, format: Format) -> Result<String, Failure> {
    let input = load(path)?;
    let sub = input.file.substitution()?;
    let matrix = sub.matrix();
    let spec = perron_data::<f64>(&matrix, SPECTRAL_TOL)?;
    let names: Vec<&str> = sub.alphabet().names().collect();

    Ok(match format {
        Format::Csv => {
            let mut csv = Csv::new(&["field", "row", "col", "value"]);
            for (i, name) in names.iter().enumerate() {
                csv.row(["alphabet", &i.to_string(), "", name]);
            }
            for i in 0..matrix.dim() {
                for j in 0..matrix.dim() {
                    csv.row([
                        "matrix",
                        &i.to_string(),
                        &j.to_string(),
                        &matrix.entry(i, j).to_string(),
                    ]);
                }
            }
            csv.row(["perron_value", "", "", &fmt_sig(spec.perron_value)]);
            for (i, &f) in spec.frequency.iter().enumerate() {
                csv.row(["frequency", &i.to_string(), "", &fmt_sig(f)]);
            }
            for (i, &v) in spec.left_perron.iter().enumerate() {
                csv.row(["left_perron", &i.to_string(), "", &fmt_sig(v)]);
            }
            for (i, &m) in spec.secondary_moduli.iter().enumerate() {
                csv.row(["secondary_moduli", &i.to_string(), "", &fmt_sig(m)]);
            }
            csv.row([
                "pisot_certificate",
                "",
                "",
                if spec.pisot_certificate {
                    "true"
                } else {
                    "false"
                },
            ]);
            csv.finish()
        }
        Format::Json => report(
            Some(&input.digest),
            Json::Obj(vec![
                ("subcommand", Json::Str("spectral".into())),
                ("file", Json::Str(input.path.clone())),
            ]),
            Json::Obj(vec![
                ("alphabet", Json::strings(names)),
                (
                    "matrix",
                    Json::Arr(
                        (0..matrix.dim())
                            .map(|i| {
                                Json::Arr(
                                    matrix
                                        .row(i)
                                        .iter()
                                        .map(|&e| Json::Int(e as i128))
                                        .collect(),
                                )
                            })
                            .collect(),
                    ),
                ),
                ("perron_value", Json::Float(spec.perron_value)),
                ("frequency", Json::floats(&spec.frequency)),
                ("left_perron", Json::floats(&spec.left_perron)),
                ("secondary_moduli", Json::floats(&spec.secondary_moduli)),
                ("pisot_certificate", Json::Bool(spec.pisot_certificate)),
            ]),
        ),
    })
}

// ------------------------------------------------------------- plasticity

fn trend_name(trend: BalanceTrend) -> &'static str {
    match trend {
        BalanceTrend::BoundedObserved => "bounded_observed",
        BalanceTrend::GrowthObserved => "growth_observed",
    }
}

fn status_name(status: ContractionStatus) -> &'static str {
    match status {
        ContractionStatus::Contracting => "contracting",
        ContractionStatus::NotContracting => "not_contracting",
        ContractionStatus::Indeterminate => "indeterminate",
    }
}

fn evidence_json(e: &TargetEvidence) -> Json {
    Json::Obj(vec![
        ("target", Json::Str(e.name.clone())),
        ("trend", Json::Str(trend_name(e.trend).into())),
        ("observed_constant", Json::Int(e.observed_constant as i128)),
        ("last_lift_n", Json::Int(e.last_lift_n as i128)),
        ("lift_count", Json::Int(e.lift_count as i128)),
        ("fitted_log_slope", Json::float_or_null(e.fitted_log_slope)),
    ])
}

fn decomposition_json(from: &[f64], to: &[f64], dec: &LengthChangeDecomposition<f64>) -> Json {
    Json::Obj(vec![
        ("from", Json::floats(from)),
        ("to", Json::floats(to)),
        ("scale", Json::Float(dec.scale)),
        ("delta", Json::floats(&dec.delta)),
        ("status", Json::Str(status_name(dec.status).into())),
        ("decay_rate", Json::float_or_null(dec.decay_rate)),
    ])
}

pub fn plasticity_cmd(
    path: &Path,
    to: &[f64],
    max_n: usize,
    word_len: usize,
    format: Format,
) -> Result<String, Failure> {
    let input = load(path)?;
    let sub = input.file.substitution()?;
    let spec = perron_data::<f64>(&sub.matrix(), SPECTRAL_TOL)?;
    let evidence = gather_balance_evidence(&sub, max_n, word_len)?;
    let rep = plasticity_verdict(&sub, evidence, spec)?;
    let from = input.file.default_lengths();
    let dec = decompose_length_change(
        &LengthVector::new(from.clone())?,
        &LengthVector::new(to.to_vec())?,
        &rep.spectral,
    )?;

    let verdict = match rep.verdict {
        PlasticityVerdict::PlasticCertified => "plastic_certified",
        PlasticityVerdict::PlasticEvidence => "plastic_evidence",
        PlasticityVerdict::NotPlasticEvidence => "not_plastic_evidence",
    };
    let total = match rep.total {
        TotalVerdict::TotallyPlasticEvidence => "totally_plastic_evidence",
        TotalVerdict::GrowthObserved => "growth_observed",
    };

    Ok(match format {
        Format::Csv => {
            // The verdict and the decomposition are JSON-only; CSV carries
            // the per-target evidence table.
            let mut csv = Csv::new(&[
                "kind",
                "target",
                "trend",
                "observed_constant",
                "last_lift_n",
                "lift_count",
            ]);
            for (kind, list) in [
                ("letter", &rep.evidence.letters),
                ("word", &rep.evidence.words),
            ] {
                for e in list {
                    csv.row([
                        kind,
                        e.name.as_str(),
                        trend_name(e.trend),
                        &e.observed_constant.to_string(),
                        &e.last_lift_n.to_string(),
                        &e.lift_count.to_string(),
                    ]);
                }
            }
            csv.finish()
        }
        Format::Json => report(
            Some(&input.digest),
            Json::Obj(vec![
                ("subcommand", Json::Str("plasticity".into())),
                ("file", Json::Str(input.path.clone())),
                ("to", Json::floats(to)),
                ("max_n", Json::Int(max_n as i128)),
                ("word_len", Json::Int(word_len as i128)),
            ]),
            Json::Obj(vec![
                ("verdict", Json::Str(verdict.into())),
                ("total", Json::Str(total.into())),
                (
                    "growth_targets",
                    Json::strings(rep.growth_targets.iter().cloned()),
                ),
                (
                    "spectral",
                    Json::Obj(vec![
                        ("perron_value", Json::Float(rep.spectral.perron_value)),
                        (
                            "secondary_moduli",
                            Json::floats(&rep.spectral.secondary_moduli),
                        ),
                        (
                            "pisot_certificate",
                            Json::Bool(rep.spectral.pisot_certificate),
                        ),
                    ]),
                ),
                (
                    "evidence",
                    Json::Obj(vec![
                        ("n_max", Json::Int(rep.evidence.n_max as i128)),
                        ("word_len", Json::Int(rep.evidence.word_len as i128)),
                        (
                            "letters",
                            Json::Arr(rep.evidence.letters.iter().map(evidence_json).collect()),
                        ),
                        (
                            "words",
                            Json::Arr(rep.evidence.words.iter().map(evidence_json).collect()),
                        ),
                    ]),
                ),
                ("decomposition", decomposition_json(&from, to, &dec)),
            ]),
        ),
    })
}

// -------------------------------------------------------------- conjugacy

pub struct ConjugacyArgs {
    pub from: Option<Vec<f64>>,
    pub to: Vec<f64>,
    pub max_level: u32,
    pub tolerance: f64,
    pub samples: usize,
    pub at: f64,
    pub fit_from: u32,
    pub fit_to: u32,
}

pub fn conjugacy_cmd(path: &Path, args: &ConjugacyArgs, format: Format) -> Result<String, Failure> {
    let input = load(path)?;
    let sub = input.file.substitution()?;
    let from = args
        .from
        .clone()
        .unwrap_or_else(|| input.file.default_lengths());
    let seq = Arc::new(BiSequence::new(&sub)?);
    let point = Tiling::suspend(&seq, LengthVector::new(from.clone())?, 0.0)?.translate(args.at)?;
    let target = LengthVector::new(args.to.clone())?;
    let conj = conjugacy(&point, &target, args.tolerance, args.max_level)?;

    let rate = fitted_gap_rate(conj.trace(), args.fit_from, args.fit_to);
    let residual = if args.samples == 0 {
        None
    } else {
        let grid = default_distance_grid::<f64>();
        let mut worst = 0.0f64;
        for shift in translation_samples::<f64>(args.samples) {
            worst = worst.max(equivariance_residual(&conj, shift, &grid)?);
        }
        Some(worst)
    };

    Ok(match format {
        Format::Csv => {
            let mut csv = Csv::new(&["level", "offset", "gap"]);
            for row in &conj.trace().rows {
                csv.row([
                    row.level.to_string().as_str(),
                    &fmt_sig(row.offset),
                    &fmt_sig(row.gap),
                ]);
            }
            csv.finish()
        }
        Format::Json => report(
            Some(&input.digest),
            Json::Obj(vec![
                ("subcommand", Json::Str("conjugacy".into())),
                ("file", Json::Str(input.path.clone())),
                ("from", Json::floats(&from)),
                ("to", Json::floats(&args.to)),
                ("at", Json::Float(args.at)),
                ("max_level", Json::Int(args.max_level as i128)),
                ("tolerance", Json::Float(args.tolerance)),
                ("samples", Json::Int(args.samples as i128)),
            ]),
            Json::Obj(vec![
                ("scale", Json::Float(conj.scale())),
                (
                    "matched_lengths",
                    Json::floats(conj.matched_lengths().as_slice()),
                ),
                (
                    "decomposition",
                    decomposition_json(&from, &args.to, conj.decomposition()),
                ),
                ("converged", Json::Bool(conj.trace().converged)),
                (
                    "limit_offset",
                    Json::float_or_null(conj.trace().limit_offset),
                ),
                (
                    "fitted_gap_rate",
                    Json::Obj(vec![
                        ("from_level", Json::Int(args.fit_from as i128)),
                        ("to_level", Json::Int(args.fit_to as i128)),
                        ("rate", Json::float_or_null(rate)),
                    ]),
                ),
                (
                    "equivariance",
                    Json::Obj(vec![
                        ("samples", Json::Int(args.samples as i128)),
                        ("max_residual", Json::float_or_null(residual)),
                    ]),
                ),
                (
                    "trace",
                    Json::Arr(
                        conj.trace()
                            .rows
                            .iter()
                            .map(|r| {
                                Json::Obj(vec![
                                    ("level", Json::Int(r.level as i128)),
                                    ("offset", Json::Float(r.offset)),
                                    ("gap", Json::Float(r.gap)),
                                ])
                            })
                            .collect(),
                    ),
                ),
            ]),
        ),
    })
}

// --------------------------------------------------------------- sturmian

pub fn sturmian_cmd(
    alpha: f64,
    rho: f64,
    length: usize,
    max_n: usize,
    format: Format,
) -> Result<String, Failure> {
    let word = sturmian_prefix(alpha, rho, length)?;
    let alphabet = Alphabet::binary();
    let targets: Vec<Word> = alphabet.letters().map(Word::single).collect();
    let profiles = balance_profiles(&LanguageSource::Window(&word), &targets, max_n)?;

    Ok(match format {
        Format::Csv => {
            // The extra column flags that these rows are one-sided window
            // evidence, not exact language values.
            let mut csv = Csv::new(&["target", "n", "min", "max", "balance", "scan"]);
            for profile in &profiles {
                let target = alphabet.format_word(&profile.target);
                for row in &profile.rows {
                    csv.row([
                        target.as_str(),
                        &row.n.to_string(),
                        &row.min.to_string(),
                        &row.max.to_string(),
                        &row.balance().to_string(),
                        evidence_name(profile.evidence),
                    ]);
                }
            }
            csv.finish()
        }
        Format::Json => report(
            None,
            Json::Obj(vec![
                ("subcommand", Json::Str("sturmian".into())),
                ("alpha", Json::Float(alpha)),
                ("rho", Json::Float(rho)),
                ("length", Json::Int(length as i128)),
                ("max_n", Json::Int(max_n as i128)),
            ]),
            Json::Obj(vec![(
                "profiles",
                Json::Arr(
                    profiles
                        .iter()
                        .map(|p| profile_json(&alphabet, p))
                        .collect(),
                ),
            )]),
        ),
    })
}

// ----------------------------------------------------------- tm-adversary

pub fn tm_adversary_cmd(m: u32, format: Format) -> Result<String, Failure> {
    let word = tm_adversarial_word(m)?;
    let ab = Word::new(vec![0, 1]);
    let ba = Word::new(vec![1, 0]);
    let combined = (count_occurrences(&ab, &word) + count_occurrences(&ba, &word)) as u64;
    let expected = 2.0 / 3.0 * (word.len() - 1) as f64;
    let excess = combined as f64 - expected;

    Ok(match format {
        Format::Csv => {
            let mut csv = Csv::new(&["m", "length", "combined_count", "expected_count", "excess"]);
            csv.row([
                m.to_string().as_str(),
                &word.len().to_string(),
                &combined.to_string(),
                &fmt_sig(expected),
                &fmt_sig(excess),
            ]);
            csv.finish()
        }
        Format::Json => report(
            None,
            Json::Obj(vec![
                ("subcommand", Json::Str("tm-adversary".into())),
                ("m", Json::Int(m as i128)),
            ]),
            Json::Obj(vec![
                ("length", Json::Int(word.len() as i128)),
                ("combined_count", Json::Int(combined as i128)),
                ("expected_count", Json::Float(expected)),
                ("excess", Json::Float(excess)),
            ]),
        ),
    })
}
