//! Perron-Frobenius data for substitution matrices and the decomposition of
//! a tile-length change into a rescaling plus an eigen-supported remainder.

use num_complex::Complex;

use crate::alphabet::Letter;
use crate::error::{Error, Result};
use crate::matrix::{ensure_primitive_matrix, SubstitutionMatrix};
use crate::scalar::{s, Scalar};
use crate::substitution::Substitution;

const POWER_BUDGET: u32 = 100_000;
const ROOT_BUDGET: u32 = 2_000;

/// Moduli within this margin of 1 are treated as undecidable rather than
/// rounded to one side.
fn unit_margin<S: Scalar>() -> S {
    s(1e-9)
}

/// Per-letter positive tile lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthVector<S: Scalar>(Vec<S>);

impl<S: Scalar> LengthVector<S> {
    pub fn new(lengths: Vec<S>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::Input("length vector must not be empty".into()));
        }
        for (i, &l) in lengths.iter().enumerate() {
            if !(l.is_finite() && l > S::zero()) {
                return Err(Error::Input(format!(
                    "length for letter index {i} must be positive and finite, got {l}"
                )));
            }
        }
        Ok(LengthVector(lengths))
    }

    pub fn unit(n: usize) -> Result<Self> {
        LengthVector::new(vec![S::one(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, letter: Letter) -> S {
        self.0[letter as usize]
    }

    pub fn as_slice(&self) -> &[S] {
        &self.0
    }

    /// Same directions, every entry divided by `c`.
    pub fn scaled_down(&self, c: S) -> Result<Self> {
        LengthVector::new(self.0.iter().map(|&l| l / c).collect())
    }
}

/// Left eigenrows of the substitution matrix, one per eigenvalue, used to
/// locate which eigenvalues carry a length-change remainder.
#[derive(Debug, Clone)]
pub(crate) struct LeftEigenBasis<S: Scalar> {
    pub values: Vec<Complex<S>>,
    pub rows: Vec<Vec<Complex<S>>>,
}

/// Perron eigendata of a primitive substitution matrix.
#[derive(Debug, Clone)]
pub struct SpectralData<S: Scalar> {
    pub perron_value: S,
    /// Right Perron eigenvector, normalized to sum 1: the letter frequencies.
    pub frequency: Vec<S>,
    /// Left Perron eigenvector, scaled so its largest entry is 1.
    pub left_perron: Vec<S>,
    /// Moduli of all non-Perron eigenvalues, descending.
    pub secondary_moduli: Vec<S>,
    /// True when every secondary modulus is strictly below 1 (by margin).
    pub pisot_certificate: bool,
    pub(crate) basis: Option<LeftEigenBasis<S>>,
}

impl<S: Scalar> SpectralData<S> {
    pub fn dim(&self) -> usize {
        self.frequency.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionStatus {
    Contracting,
    NotContracting,
    /// Some supporting eigenvalue sits on the unit circle within margin, or
    /// no usable left eigenbasis exists.
    Indeterminate,
}

/// ℓ' split as scale·ℓ + delta, with delta classified by the eigenvalues it
/// lives on.
#[derive(Debug, Clone)]
pub struct LengthChangeDecomposition<S: Scalar> {
    pub scale: S,
    pub delta: Vec<S>,
    pub status: ContractionStatus,
    /// Largest eigenvalue modulus carrying delta; 0 when delta vanishes,
    /// None when the eigenbasis is unusable.
    pub decay_rate: Option<S>,
}

impl<S: Scalar> LengthChangeDecomposition<S> {
    pub fn is_contracting(&self) -> bool {
        self.status == ContractionStatus::Contracting
    }
}

/// Perron eigenvalue, frequencies, left eigendata and the secondary spectrum
/// of a primitive matrix.
///
/// The Perron pair comes from power iteration to relative tolerance `tol`.
/// The rest of the spectrum comes from the characteristic polynomial
/// (simultaneous root iteration); left eigenrows are nullspace vectors per
/// root and are dropped (None) when roots collide, leaving downstream
/// classification indeterminate rather than wrong.
pub fn perron_data<S: Scalar>(m: &SubstitutionMatrix, tol: S) -> Result<SpectralData<S>> {
    ensure_primitive_matrix(m)?;
    if !(tol > S::zero()) {
        return Err(Error::Input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = m.dim();
    let a = m.to_scalar::<S>();

    let (perron_value, frequency) = power_iterate(&a, n, false, tol)?;
    let (_, mut left_perron) = power_iterate(&a, n, true, tol)?;
    let max_entry = left_perron
        .iter()
        .copied()
        .fold(S::zero(), |acc, x| if x > acc { x } else { acc });
    for x in left_perron.iter_mut() {
        *x = *x / max_entry;
    }

    let eigen = all_eigenvalues(&a, n, perron_value)?;
    let perron_slot = nearest_root(&eigen, perron_value);
    let mut secondary_moduli: Vec<S> = eigen
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != perron_slot)
        .map(|(_, z)| z.norm())
        .collect();
    secondary_moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let margin = unit_margin::<S>();
    let pisot_certificate = secondary_moduli.iter().all(|&r| r < S::one() - margin);

    let basis = left_basis(&a, n, &eigen);

    Ok(SpectralData {
        perron_value,
        frequency,
        left_perron,
        secondary_moduli,
        pisot_certificate,
        basis,
    })
}

/// Scale factor and remainder of a length change, with the remainder located
/// in the left eigenbasis.
///
/// The scale preserves the frequency-weighted mean tile length, so the
/// remainder is automatically mean-free: ⟨f, delta⟩ = 0.
pub fn decompose_length_change<S: Scalar>(
    ell: &LengthVector<S>,
    ell_prime: &LengthVector<S>,
    spec: &SpectralData<S>,
) -> Result<LengthChangeDecomposition<S>> {
    let n = spec.dim();
    if ell.len() != n || ell_prime.len() != n {
        return Err(Error::Input(format!(
            "length vectors must have {n} entries, got {} and {}",
            ell.len(),
            ell_prime.len()
        )));
    }
    let dot =
        |u: &[S], v: &[S]| -> S { u.iter().zip(v).fold(S::zero(), |acc, (&x, &y)| acc + x * y) };
    let scale = dot(&spec.frequency, ell_prime.as_slice()) / dot(&spec.frequency, ell.as_slice());
    let delta: Vec<S> = ell_prime
        .as_slice()
        .iter()
        .zip(ell.as_slice())
        .map(|(&lp, &l)| lp - scale * l)
        .collect();

    // A remainder at rounding scale is a pure rescaling, not a direction.
    let magnitude = ell
        .as_slice()
        .iter()
        .chain(ell_prime.as_slice())
        .fold(S::one(), |acc, &l| acc.max(l.abs()));
    let floor = S::epsilon() * s::<S>(64.0) * magnitude * (S::one() + scale.abs());
    let delta_norm = norm2(&delta);
    let (status, decay_rate) = if delta_norm <= floor {
        (ContractionStatus::Contracting, Some(S::zero()))
    } else {
        classify_delta(&delta, spec)?
    };
    Ok(LengthChangeDecomposition {
        scale,
        delta,
        status,
        decay_rate,
    })
}

/// Locates which eigenvalues carry `delta` and classifies their moduli.
///
/// Unlike the full decomposition this performs no mean-matching split, so a
/// component along the left Perron row is possible and reported as growth.
pub fn classify_delta<S: Scalar>(
    delta: &[S],
    spec: &SpectralData<S>,
) -> Result<(ContractionStatus, Option<S>)> {
    let n = spec.dim();
    if delta.len() != n {
        return Err(Error::Input(format!(
            "delta must have {n} entries, got {}",
            delta.len()
        )));
    }
    let basis = match &spec.basis {
        Some(b) => b,
        None => return Ok((ContractionStatus::Indeterminate, None)),
    };
    let delta_norm = norm2(delta);
    if delta_norm == S::zero() {
        return Ok((ContractionStatus::Contracting, Some(S::zero())));
    }

    // Solve sum_k coef_k * row_k = delta for the coefficients.
    let mut cols: Vec<Vec<Complex<S>>> = vec![vec![Complex::new(S::zero(), S::zero()); n]; n];
    for (k, row) in basis.rows.iter().enumerate() {
        for i in 0..n {
            cols[i][k] = row[i];
        }
    }
    let rhs: Vec<Complex<S>> = delta.iter().map(|&d| Complex::new(d, S::zero())).collect();
    let coefs = match solve_complex(cols, rhs) {
        Some(c) => c,
        None => return Ok((ContractionStatus::Indeterminate, None)),
    };

    let threshold = s::<S>(1e-9) * delta_norm;
    let margin = unit_margin::<S>();
    let mut decay = S::zero();
    let mut saw_band = false;
    let mut saw_growth = false;
    for (k, coef) in coefs.iter().enumerate() {
        if coef.norm() <= threshold {
            continue;
        }
        let r = basis.values[k].norm();
        if r > decay {
            decay = r;
        }
        if r >= S::one() - margin && r <= S::one() + margin {
            saw_band = true;
        } else if r > S::one() + margin {
            saw_growth = true;
        }
    }
    let status = if saw_growth {
        ContractionStatus::NotContracting
    } else if saw_band {
        ContractionStatus::Indeterminate
    } else {
        ContractionStatus::Contracting
    };
    Ok((status, Some(decay)))
}

fn norm2<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |acc, &d| acc + d * d).sqrt()
}

/// Geometric length of the level-`level` image block of `letter` under tile
/// lengths `ell`, by iterating the length recursion rather than expanding
/// any word.
pub fn supertile_length<S: Scalar>(
    sub: &Substitution,
    letter: Letter,
    level: u32,
    ell: &LengthVector<S>,
) -> Result<S> {
    let n = sub.alphabet().len();
    if !sub.alphabet().contains(letter) {
        return Err(Error::Input(format!(
            "letter index {letter} outside the alphabet"
        )));
    }
    if ell.len() != n {
        return Err(Error::Input(format!(
            "length vector must have {n} entries, got {}",
            ell.len()
        )));
    }
    Ok(level_lengths(sub, level, ell)[letter as usize])
}

/// Geometric lengths of level-`level` blocks for every letter.
pub(crate) fn level_lengths<S: Scalar>(
    sub: &Substitution,
    level: u32,
    ell: &LengthVector<S>,
) -> Vec<S> {
    let n = sub.alphabet().len();
    let mut lens: Vec<S> = ell.as_slice().to_vec();
    for _ in 0..level {
        let mut next = vec![S::zero(); n];
        for x in 0..n {
            for &y in sub.image(x as Letter).letters() {
                next[x] = next[x] + lens[y as usize];
            }
        }
        lens = next;
    }
    lens
}

/// Tile counts of level-`level` blocks for every letter.
pub(crate) fn level_tile_counts(sub: &Substitution, level: u32) -> Result<Vec<u64>> {
    let n = sub.alphabet().len();
    let mut counts: Vec<u64> = vec![1; n];
    for step in 0..level {
        let mut next = vec![0u64; n];
        for x in 0..n {
            for &y in sub.image(x as Letter).letters() {
                next[x] = next[x].checked_add(counts[y as usize]).ok_or_else(|| {
                    Error::Limit(format!(
                        "supertile tile count overflows 64 bits at level {}",
                        step + 1
                    ))
                })?;
            }
        }
        counts = next;
    }
    Ok(counts)
}

fn mat_vec<S: Scalar>(a: &[S], n: usize, v: &[S], transpose: bool) -> Vec<S> {
    let mut out = vec![S::zero(); n];
    for i in 0..n {
        let mut acc = S::zero();
        for j in 0..n {
            let e = if transpose {
                a[j * n + i]
            } else {
                a[i * n + j]
            };
            acc = acc + e * v[j];
        }
        out[i] = acc;
    }
    out
}

fn power_iterate<S: Scalar>(a: &[S], n: usize, transpose: bool, tol: S) -> Result<(S, Vec<S>)> {
    let mut v = vec![S::one() / crate::scalar::s_usize::<S>(n); n];
    let mut lambda = S::zero();
    for _ in 0..POWER_BUDGET {
        let w = mat_vec(a, n, &v, transpose);
        let norm = w.iter().fold(S::zero(), |acc, &x| acc + x);
        let next: Vec<S> = w.iter().map(|&x| x / norm).collect();
        let step = v
            .iter()
            .zip(&next)
            .fold(S::zero(), |acc, (&x, &y)| acc.max((x - y).abs()));
        let lambda_step = (norm - lambda).abs();
        v = next;
        let prev_lambda = lambda;
        lambda = norm;
        if step < tol && lambda_step < tol * lambda.max(S::one()) && prev_lambda > S::zero() {
            return Ok((lambda, v));
        }
    }
    let w = mat_vec(a, n, &v, transpose);
    let residual = w
        .iter()
        .zip(&v)
        .fold(S::zero(), |acc, (&x, &y)| acc.max((x - lambda * y).abs()));
    Err(Error::Convergence(format!(
        "power iteration did not settle within {POWER_BUDGET} steps; residual {residual:e}"
    )))
}

/// All eigenvalues. Dimensions 1 and 2 are closed-form; beyond that the
/// roots of the characteristic polynomial are found by simultaneous
/// iteration.
fn all_eigenvalues<S: Scalar>(a: &[S], n: usize, perron: S) -> Result<Vec<Complex<S>>> {
    let zero = S::zero();
    match n {
        1 => Ok(vec![Complex::new(a[0], zero)]),
        2 => {
            let (m00, m01, m10, m11) = (a[0], a[1], a[2], a[3]);
            let tr = m00 + m11;
            let det = m00 * m11 - m01 * m10;
            let disc = tr * tr - s::<S>(4.0) * det;
            // Nonnegative matrices: (m00-m11)^2 + 4*m01*m10 >= 0.
            let sq = disc.max(zero).sqrt();
            let half = s::<S>(0.5);
            Ok(vec![
                Complex::new((tr + sq) * half, zero),
                Complex::new((tr - sq) * half, zero),
            ])
        }
        _ => {
            let coeffs = char_poly(a, n);
            durand_kerner(&coeffs, perron)
        }
    }
}

/// Monic characteristic polynomial coefficients c_0..c_{n-1} with
/// p(x) = x^n + c_{n-1} x^{n-1} + ... + c_0, by the trace recursion.
fn char_poly<S: Scalar>(a: &[S], n: usize) -> Vec<S> {
    let mut c = vec![S::zero(); n];
    let mut mk = a.to_vec();
    let trace = |m: &[S]| (0..n).fold(S::zero(), |acc, i| acc + m[i * n + i]);
    let mut ck = -trace(&mk);
    c[n - 1] = ck;
    for k in 2..=n {
        // mk <- a * (mk + ck * I)
        let mut shifted = mk.clone();
        for i in 0..n {
            shifted[i * n + i] = shifted[i * n + i] + ck;
        }
        let mut next = vec![S::zero(); n * n];
        for i in 0..n {
            for l in 0..n {
                let aval = a[i * n + l];
                if aval != S::zero() {
                    for j in 0..n {
                        next[i * n + j] = next[i * n + j] + aval * shifted[l * n + j];
                    }
                }
            }
        }
        mk = next;
        ck = -trace(&mk) / crate::scalar::s_usize::<S>(k);
        c[n - k] = ck;
    }
    c
}

fn durand_kerner<S: Scalar>(coeffs: &[S], scale_hint: S) -> Result<Vec<Complex<S>>> {
    let n = coeffs.len();
    let zero = S::zero();
    let radius = coeffs
        .iter()
        .fold(S::one() + scale_hint, |acc, &c| acc.max(c.abs() + S::one()));
    let seed = Complex::new(s::<S>(0.4), s::<S>(0.9));
    let mut z: Vec<Complex<S>> = (0..n)
        .map(|k| seed.powu(k as u32 + 1) * Complex::new(radius, zero))
        .collect();
    let eval = |x: Complex<S>| {
        let mut p = Complex::new(S::one(), zero);
        for &c in coeffs.iter().rev() {
            p = p * x + Complex::new(c, zero);
        }
        p
    };
    let tol = S::epsilon() * s::<S>(64.0) * radius;
    for _ in 0..ROOT_BUDGET {
        let mut max_step = zero;
        for k in 0..n {
            let mut denom = Complex::new(S::one(), zero);
            for j in 0..n {
                if j != k {
                    denom = denom * (z[k] - z[j]);
                }
            }
            if denom.norm() == zero {
                // Nudge coincident iterates apart.
                z[k] = z[k] + Complex::new(tol + S::epsilon(), tol);
                max_step = max_step.max(tol + tol);
                continue;
            }
            let step = eval(z[k]) / denom;
            z[k] = z[k] - step;
            max_step = max_step.max(step.norm());
        }
        if max_step < tol {
            return Ok(z);
        }
    }
    Err(Error::Convergence(format!(
        "eigenvalue iteration did not settle within {ROOT_BUDGET} rounds"
    )))
}

fn nearest_root<S: Scalar>(roots: &[Complex<S>], target: S) -> usize {
    let mut best = 0;
    let mut best_dist = S::infinity();
    for (k, z) in roots.iter().enumerate() {
        let d = (*z - Complex::new(target, S::zero())).norm();
        if d < best_dist {
            best_dist = d;
            best = k;
        }
    }
    best
}

/// Left eigenrow per eigenvalue, or None when roots collide or a nullspace
/// direction cannot be pinned down.
fn left_basis<S: Scalar>(a: &[S], n: usize, eigen: &[Complex<S>]) -> Option<LeftEigenBasis<S>> {
    let scale = a.iter().fold(S::one(), |acc, &x| acc.max(x.abs()));
    let cluster = s::<S>(1e-7) * scale;
    for i in 0..eigen.len() {
        for j in i + 1..eigen.len() {
            if (eigen[i] - eigen[j]).norm() < cluster {
                return None;
            }
        }
    }
    // Deterministic order: modulus descending, then real part, then imaginary.
    let mut order: Vec<usize> = (0..eigen.len()).collect();
    order.sort_by(|&i, &j| {
        eigen[j]
            .norm()
            .partial_cmp(&eigen[i].norm())
            .unwrap()
            .then(eigen[j].re.partial_cmp(&eigen[i].re).unwrap())
            .then(eigen[j].im.partial_cmp(&eigen[i].im).unwrap())
    });
    let mut values = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for &k in &order {
        let lambda = eigen[k];
        let row = left_nullvector(a, n, lambda)?;
        values.push(lambda);
        rows.push(row);
    }
    Some(LeftEigenBasis { values, rows })
}

/// Nonzero w with w·M = lambda·w, scaled so its largest-modulus entry is 1.
fn left_nullvector<S: Scalar>(a: &[S], n: usize, lambda: Complex<S>) -> Option<Vec<Complex<S>>> {
    let zero = Complex::new(S::zero(), S::zero());
    // Rows of (M^T - lambda I): solving x (as column) in its nullspace gives
    // the left eigenrow of M.
    let mut b: Vec<Vec<Complex<S>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = Complex::new(a[j * n + i], S::zero());
                    if i == j {
                        e - lambda
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let scale = a.iter().fold(S::one(), |acc, &x| acc.max(x.abs()));
    let tiny = s::<S>(1e-10) * scale;

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut row = 0usize;
    for col in 0..n {
        let mut best = row;
        let mut best_norm = S::zero();
        for r in row..n {
            let nm = b[r][col].norm();
            if nm > best_norm {
                best_norm = nm;
                best = r;
            }
        }
        if best_norm <= tiny {
            continue;
        }
        b.swap(row, best);
        pivot_of_col[col] = Some(row);
        for r in row + 1..n {
            if b[r][col].norm() > S::zero() {
                let factor = b[r][col] / b[row][col];
                for cc in col..n {
                    b[r][cc] = b[r][cc] - factor * b[row][cc];
                }
            }
        }
        row += 1;
        if row == n {
            break;
        }
    }
    let free_col = pivot_of_col.iter().position(|p| p.is_none())?;
    let mut x = vec![zero; n];
    x[free_col] = Complex::new(S::one(), S::zero());
    for col in (0..free_col).rev() {
        let prow = pivot_of_col[col].expect("columns before the free one have pivots");
        let mut acc = zero;
        for cc in col + 1..n {
            acc = acc + b[prow][cc] * x[cc];
        }
        x[col] = -acc / b[prow][col];
    }
    // Largest-modulus entry becomes 1 for a reproducible representative.
    let mut best = 0;
    let mut best_norm = S::zero();
    for (i, v) in x.iter().enumerate() {
        if v.norm() > best_norm {
            best_norm = v.norm();
            best = i;
        }
    }
    if best_norm == S::zero() {
        return None;
    }
    let pivot = x[best];
    Some(x.into_iter().map(|v| v / pivot).collect())
}

fn solve_complex<S: Scalar>(
    mut a: Vec<Vec<Complex<S>>>,
    mut b: Vec<Complex<S>>,
) -> Option<Vec<Complex<S>>> {
    let n = b.len();
    for col in 0..n {
        let mut best = col;
        let mut best_norm = S::zero();
        for r in col..n {
            if a[r][col].norm() > best_norm {
                best_norm = a[r][col].norm();
                best = r;
            }
        }
        if best_norm <= S::epsilon() {
            return None;
        }
        a.swap(col, best);
        b.swap(col, best);
        for r in col + 1..n {
            if a[r][col].norm() > S::zero() {
                let factor = a[r][col] / a[col][col];
                for cc in col..n {
                    a[r][cc] = a[r][cc] - factor * a[col][cc];
                }
                b[r] = b[r] - factor * b[col];
            }
        }
    }
    let zero = Complex::new(S::zero(), S::zero());
    let mut x = vec![zero; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for cc in col + 1..n {
            acc = acc - a[col][cc] * x[cc];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::word::Word;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const PHI: f64 = 1.618033988749894848204586834365638118;

    fn fib_spectral() -> SpectralData<f64> {
        perron_data(&Substitution::fibonacci().matrix(), 1e-12).unwrap()
    }

    #[test]
    fn length_vector_validation() {
        assert!(LengthVector::new(vec![1.0, 0.0]).is_err());
        assert!(LengthVector::new(vec![1.0, -2.0]).is_err());
        assert!(LengthVector::new(vec![f64::NAN]).is_err());
        assert!(LengthVector::<f64>::new(vec![]).is_err());
        assert_eq!(LengthVector::new(vec![1.5, 2.0]).unwrap().get(1), 2.0);
    }

    #[test]
    fn fibonacci_perron_data() {
        let spec = fib_spectral();
        assert_relative_eq!(spec.perron_value, PHI, max_relative = 1e-12);
        assert_relative_eq!(spec.frequency[0], 1.0 / PHI, epsilon = 1e-10);
        assert_relative_eq!(spec.frequency[1], 1.0 - 1.0 / PHI, epsilon = 1e-10);
        // Left Perron direction (phi, 1), largest entry scaled to 1.
        assert_relative_eq!(spec.left_perron[0], 1.0, epsilon = 1e-10);
        assert_relative_eq!(spec.left_perron[1], 1.0 / PHI, epsilon = 1e-10);
        assert_eq!(spec.secondary_moduli.len(), 1);
        assert_relative_eq!(spec.secondary_moduli[0], PHI - 1.0, epsilon = 1e-10);
        assert!(spec.pisot_certificate);
    }

    #[test]
    fn thue_morse_perron_data() {
        let spec: SpectralData<f64> =
            perron_data(&Substitution::thue_morse().matrix(), 1e-12).unwrap();
        assert_relative_eq!(spec.perron_value, 2.0, epsilon = 1e-12);
        assert_relative_eq!(spec.frequency[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(spec.frequency[1], 0.5, epsilon = 1e-12);
        assert_eq!(spec.secondary_moduli.len(), 1);
        assert!(spec.secondary_moduli[0].abs() < 1e-10);
        assert!(spec.pisot_certificate);
    }

    #[test]
    fn non_primitive_is_rejected() {
        let sub =
            Substitution::new(Alphabet::binary(), vec![Word::single(0), Word::single(1)]).unwrap();
        assert!(matches!(
            perron_data::<f64>(&sub.matrix(), 1e-12),
            Err(Error::Precondition(_))
        ));
    }

    fn tribonacci() -> Substitution {
        Substitution::new(
            Alphabet::new(["a", "b", "c"]).unwrap(),
            vec![
                Word::new(vec![0, 1]),
                Word::new(vec![0, 2]),
                Word::single(0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn tribonacci_spectrum() {
        let spec: SpectralData<f64> = perron_data(&tribonacci().matrix(), 1e-12).unwrap();
        assert_relative_eq!(spec.perron_value, 1.839286755214161, epsilon = 1e-9);
        assert_eq!(spec.secondary_moduli.len(), 2);
        // Complex conjugate pair with modulus sqrt(1/perron).
        let expected = (1.0 / 1.839286755214161f64).sqrt();
        assert_relative_eq!(spec.secondary_moduli[0], expected, epsilon = 1e-7);
        assert_relative_eq!(spec.secondary_moduli[1], expected, epsilon = 1e-7);
        assert!(spec.pisot_certificate);
        assert!(spec.basis.is_some());
    }

    #[test]
    fn fibonacci_decomposition() {
        let spec = fib_spectral();
        let ell = LengthVector::new(vec![1.0, 1.0]).unwrap();
        let ell2 = LengthVector::new(vec![2.0, 1.0]).unwrap();
        let dec = decompose_length_change(&ell, &ell2, &spec).unwrap();
        assert_relative_eq!(dec.scale, PHI, epsilon = 1e-10);
        // delta parallel to (1-phi, 1): unit-dot within 1e-8 of 1.
        let v = [1.0 - PHI, 1.0];
        let dot = dec.delta[0] * v[0] + dec.delta[1] * v[1];
        let nd = (dec.delta[0].powi(2) + dec.delta[1].powi(2)).sqrt();
        let nv = (v[0] * v[0] + v[1] * v[1]).sqrt();
        assert!((dot.abs() / (nd * nv) - 1.0).abs() < 1e-8);
        assert_eq!(dec.status, ContractionStatus::Contracting);
        assert_relative_eq!(dec.decay_rate.unwrap(), PHI - 1.0, epsilon = 1e-10);
        // Mean-free remainder.
        let fdot = spec.frequency[0] * dec.delta[0] + spec.frequency[1] * dec.delta[1];
        assert!(fdot.abs() < 1e-10);
    }

    #[test]
    fn pure_rescaling_decomposes_trivially() {
        let spec = fib_spectral();
        let ell = LengthVector::new(vec![1.0, 2.0]).unwrap();
        let ell2 = LengthVector::new(vec![2.0, 4.0]).unwrap();
        let dec = decompose_length_change(&ell, &ell2, &spec).unwrap();
        assert_relative_eq!(dec.scale, 2.0, epsilon = 1e-12);
        assert!(dec.delta.iter().all(|d| d.abs() < 1e-12));
        assert_eq!(dec.status, ContractionStatus::Contracting);
        assert_eq!(dec.decay_rate, Some(0.0));
    }

    #[test]
    fn perron_direction_is_not_contracting() {
        // The full decomposition always splits off the Perron component, so
        // the raw classifier is what sees a Perron-supported remainder.
        let spec = fib_spectral();
        let (status, decay) = classify_delta(&[PHI, 1.0], &spec).unwrap();
        assert_eq!(status, ContractionStatus::NotContracting);
        assert_relative_eq!(decay.unwrap(), PHI, epsilon = 1e-8);
    }

    #[test]
    fn decomposition_never_leaves_pisot_directions_for_fibonacci() {
        // With both secondary moduli below 1, every mean-matched remainder
        // contracts; the certificate is exactly this statement.
        let spec = fib_spectral();
        let ell = LengthVector::new(vec![1.0, 1.0]).unwrap();
        for ell2 in [
            LengthVector::new(vec![1.0 + 0.1 * PHI, 1.1]).unwrap(),
            LengthVector::new(vec![3.7, 0.2]).unwrap(),
            LengthVector::new(vec![0.01, 5.0]).unwrap(),
        ] {
            let dec = decompose_length_change(&ell, &ell2, &spec).unwrap();
            assert_eq!(dec.status, ContractionStatus::Contracting);
        }
    }

    #[test]
    fn expanding_secondary_eigenvalue_blocks_contraction() {
        // a -> aaab, b -> abbb: eigenvalues 4 and 2.
        let sub = Substitution::new(
            Alphabet::binary(),
            vec![Word::new(vec![0, 0, 0, 1]), Word::new(vec![0, 1, 1, 1])],
        )
        .unwrap();
        let spec: SpectralData<f64> = perron_data(&sub.matrix(), 1e-12).unwrap();
        assert_relative_eq!(spec.perron_value, 4.0, epsilon = 1e-10);
        assert_relative_eq!(spec.secondary_moduli[0], 2.0, epsilon = 1e-10);
        assert!(!spec.pisot_certificate);
        let ell = LengthVector::new(vec![1.0, 1.0]).unwrap();
        let ell2 = LengthVector::new(vec![2.0, 1.0]).unwrap();
        let dec = decompose_length_change(&ell, &ell2, &spec).unwrap();
        assert_eq!(dec.status, ContractionStatus::NotContracting);
        assert_relative_eq!(dec.decay_rate.unwrap(), 2.0, epsilon = 1e-8);
    }

    #[test]
    fn tribonacci_generic_change_contracts() {
        let spec: SpectralData<f64> = perron_data(&tribonacci().matrix(), 1e-12).unwrap();
        let ell = LengthVector::new(vec![1.0, 1.0, 1.0]).unwrap();
        let ell2 = LengthVector::new(vec![1.2, 1.1, 0.9]).unwrap();
        let dec = decompose_length_change(&ell, &ell2, &spec).unwrap();
        assert_eq!(dec.status, ContractionStatus::Contracting);
        let expected = (1.0 / 1.839286755214161f64).sqrt();
        assert_relative_eq!(dec.decay_rate.unwrap(), expected, epsilon = 1e-6);
    }

    #[test]
    fn supertile_lengths_match_expansion() {
        let ell = LengthVector::new(vec![1.0, 1.0]).unwrap();
        assert_relative_eq!(
            supertile_length(&Substitution::fibonacci(), 0, 2, &ell).unwrap(),
            3.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            supertile_length(&Substitution::fibonacci(), 1, 0, &ell).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        let ell = LengthVector::new(vec![0.7, 1.3]).unwrap();
        for sub in [Substitution::fibonacci(), Substitution::thue_morse()] {
            for letter in sub.alphabet().letters() {
                for level in 0..=8 {
                    let word = sub.apply_power(&[letter], level);
                    let brute: f64 = word.iter().map(|&l| ell.get(l)).sum();
                    assert_relative_eq!(
                        supertile_length(&sub, letter, level, &ell).unwrap(),
                        brute,
                        max_relative = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn tile_counts_match_expansion() {
        let sub = Substitution::fibonacci();
        let counts = level_tile_counts(&sub, 10).unwrap();
        assert_eq!(counts[0] as usize, sub.apply_power(&[0], 10).len());
        assert_eq!(counts[1] as usize, sub.apply_power(&[1], 10).len());
    }

    #[test]
    fn f32_perron_smoke() {
        let spec: SpectralData<f32> =
            perron_data(&Substitution::fibonacci().matrix(), 1e-6).unwrap();
        assert!((spec.perron_value - 1.618_034f32).abs() < 1e-5);
    }

    proptest! {
        // Random primitive 2x2 matrices: eigen residuals and decomposition
        // reconstruction stay tight.
        #[test]
        fn perron_residuals_are_small(
            e00 in 1u64..5, e01 in 1u64..5, e10 in 1u64..5, e11 in 0u64..5,
            l0 in 0.5f64..3.0, l1 in 0.5f64..3.0,
            p0 in 0.5f64..3.0, p1 in 0.5f64..3.0,
        ) {
            let mut rules = Vec::new();
            for (na, nb) in [(e00, e10), (e01, e11)] {
                let mut w = Vec::new();
                w.extend(std::iter::repeat(0u32).take(na as usize));
                w.extend(std::iter::repeat(1u32).take(nb as usize));
                rules.push(Word::new(w));
            }
            let sub = Substitution::new(Alphabet::binary(), rules).unwrap();
            let m = sub.matrix();
            prop_assume!(m.is_primitive());
            let spec: SpectralData<f64> = perron_data(&m, 1e-12).unwrap();
            for i in 0..2 {
                let mut acc = 0.0;
                for j in 0..2 {
                    acc += m.entry(i, j) as f64 * spec.frequency[j];
                }
                prop_assert!((acc - spec.perron_value * spec.frequency[i]).abs() < 1e-9);
            }
            for j in 0..2 {
                let mut acc = 0.0;
                for i in 0..2 {
                    acc += spec.left_perron[i] * m.entry(i, j) as f64;
                }
                prop_assert!((acc - spec.perron_value * spec.left_perron[j]).abs() < 1e-8);
            }
            prop_assert!((spec.frequency.iter().sum::<f64>() - 1.0).abs() < 1e-12);

            let ell = LengthVector::new(vec![l0, l1]).unwrap();
            let ell2 = LengthVector::new(vec![p0, p1]).unwrap();
            let dec = decompose_length_change(&ell, &ell2, &spec).unwrap();
            for i in 0..2 {
                let rebuilt = dec.scale * ell.as_slice()[i] + dec.delta[i];
                prop_assert!((rebuilt - ell2.as_slice()[i]).abs() < 1e-12);
            }
            let fdot: f64 = spec.frequency.iter().zip(&dec.delta).map(|(f, d)| f * d).sum();
            prop_assert!(fdot.abs() < 1e-10);
        }
    }
}
