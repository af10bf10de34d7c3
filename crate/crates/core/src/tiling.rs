//! Suspension tilings of the real line, the tiling metric, supertile
//! decomposition, and the fraction-preserving level maps whose limit
//! conjugates one suspension onto another.
//!
//! A tiling realizes a bi-infinite sequence geometrically: tile `i`
//! carries letter `u_i` and has length `ℓ(u_i)`, intervals are half-open
//! `[a, b)`, and the representation is canonical with the origin sitting
//! `offset` into the tile at sequence index `base`. Translating, locating
//! tiles, and walking positions all stay in exact sequence-index terms so
//! that two tilings over the same sequence handle can be compared without
//! going through the (coarse) metric.
//!
//! Level maps exploit the supertile hierarchy: the sequence is a fixed
//! point of `σ^k`, so for any level `n` it splits into blocks that are
//! `σ^n`-images of the letters of a companion sequence, anchored at the
//! origin index. `psi_n` keeps the underlying sequence and repositions
//! the origin at the same fraction across the level-`n` block in the new
//! geometry; when the length change is contracting these maps form a
//! Cauchy sequence in translation and their limit is the conjugacy.

use std::sync::Arc;

use crate::alphabet::Letter;
use crate::error::{Error, Result};
use crate::scalar::{s, Scalar};
use crate::sequence::BiSequence;
use crate::spectral::{
    decompose_length_change, level_lengths, level_tile_counts, perron_data, ContractionStatus,
    LengthChangeDecomposition, LengthVector,
};
use crate::substitution::Substitution;

/// Tiles walked when normalizing, locating, or anchoring positions.
const ANCHOR_BUDGET: u64 = 10_000_000;
/// Supertile blocks walked when addressing the origin.
const BLOCK_BUDGET: u64 = 1_000_000;
/// Tiles examined by one feasibility check of the metric.
const SCAN_BUDGET: u64 = 4_000_000;

/// A point of the suspension: a sequence made geometric by tile lengths,
/// observed from the origin.
#[derive(Debug, Clone)]
pub struct Tiling<S: Scalar> {
    seq: Arc<BiSequence>,
    lengths: LengthVector<S>,
    /// Sequence index of the tile whose half-open span contains the origin.
    base: i64,
    /// Distance from that tile's left edge to the origin; in `[0, ℓ(u_base))`.
    offset: S,
}

/// The level-`n` block of the supertile hierarchy that contains the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupertileAddress<S: Scalar> {
    pub level: u32,
    /// Sequence index where the block starts.
    pub start_index: i64,
    /// Letter whose level-`level` image spells the block.
    pub seed_letter: Letter,
    /// How far across the block's geometric span the origin sits; in `[0, 1)`.
    pub fraction: S,
}

/// One measured level of a conjugacy iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow<S: Scalar> {
    pub level: u32,
    /// Canonical offset of the level map's image at this level.
    pub offset: S,
    /// Translation distance to the next level's image.
    pub gap: S,
}

/// Record of how the level maps converged (or failed to).
#[derive(Debug, Clone)]
pub struct ConjugacyTrace<S: Scalar> {
    pub rows: Vec<TraceRow<S>>,
    pub converged: bool,
    /// Canonical offset of the accepted limit, when converged.
    pub limit_offset: Option<S>,
}

/// A converged limit of level maps, with everything needed to apply the
/// same map to other points of the same suspension.
#[derive(Debug, Clone)]
pub struct Conjugacy<S: Scalar> {
    scale: S,
    decomposition: LengthChangeDecomposition<S>,
    source: Tiling<S>,
    matched_lengths: LengthVector<S>,
    tolerance: S,
    max_level: u32,
    trace: ConjugacyTrace<S>,
    limit: Tiling<S>,
}

impl<S: Scalar> Tiling<S> {
    /// Suspends a sequence with the given tile lengths, placing the origin
    /// `t` into the geometry and normalizing to the canonical form.
    ///
    /// `t = 0` is the natural embedding: tile 0 starts exactly at the
    /// origin. Any finite `t` is accepted; the representation shifts the
    /// base index until the offset lands inside its tile.
    pub fn suspend(seq: &Arc<BiSequence>, lengths: LengthVector<S>, t: S) -> Result<Tiling<S>> {
        let n = seq.substitution().alphabet().len();
        if lengths.len() != n {
            return Err(Error::Input(format!(
                "length vector has {} entries but the alphabet has {n} letters",
                lengths.len()
            )));
        }
        if !t.is_finite() {
            return Err(Error::Input(format!("offset must be finite, got {t}")));
        }
        let (base, offset) = canonical(seq, &lengths, 0, t)?;
        Ok(Tiling {
            seq: Arc::clone(seq),
            lengths,
            base,
            offset,
        })
    }

    pub fn sequence(&self) -> &Arc<BiSequence> {
        &self.seq
    }

    pub fn lengths(&self) -> &LengthVector<S> {
        &self.lengths
    }

    /// Sequence index of the tile containing the origin.
    pub fn origin_index(&self) -> i64 {
        self.base
    }

    /// Distance from that tile's left edge to the origin.
    pub fn offset(&self) -> S {
        self.offset
    }

    /// Flows the origin `shift` to the right along the tiling; every tile
    /// boundary coordinate drops by `shift`.
    pub fn translate(&self, shift: S) -> Result<Tiling<S>> {
        if !shift.is_finite() {
            return Err(Error::Input(format!("shift must be finite, got {shift}")));
        }
        let (base, offset) = canonical(&self.seq, &self.lengths, self.base, self.offset + shift)?;
        Ok(Tiling {
            seq: Arc::clone(&self.seq),
            lengths: self.lengths.clone(),
            base,
            offset,
        })
    }

    /// Coordinate of the left edge of the tile at a sequence index.
    pub fn position_of_index(&self, index: i64) -> Result<S> {
        if index.abs_diff(self.base) > ANCHOR_BUDGET {
            return Err(Error::Limit(format!(
                "index {index} is more than {ANCHOR_BUDGET} tiles from the origin tile"
            )));
        }
        let mut pos = -self.offset;
        if index >= self.base {
            for l in self.seq.letters_range(self.base, index)? {
                pos = pos + self.lengths.get(l);
            }
        } else {
            for l in self.seq.letters_range(index, self.base)? {
                pos = pos - self.lengths.get(l);
            }
        }
        Ok(pos)
    }

    /// The unique tile whose half-open span `[a, b)` contains `x`; a point
    /// exactly on a boundary belongs to the tile starting there.
    pub fn tile_at(&self, x: S) -> Result<(i64, Letter, (S, S))> {
        if !x.is_finite() {
            return Err(Error::Input(format!("position must be finite, got {x}")));
        }
        let mut i = self.base;
        let mut start = -self.offset;
        let mut len = self.lengths.get(self.seq.letter(i)?);
        let mut steps = 0u64;
        loop {
            if x < start {
                i -= 1;
                len = self.lengths.get(self.seq.letter(i)?);
                start = start - len;
            } else if x >= start + len {
                start = start + len;
                i += 1;
                len = self.lengths.get(self.seq.letter(i)?);
            } else {
                return Ok((i, self.seq.letter(i)?, (start, start + len)));
            }
            steps += 1;
            if steps > ANCHOR_BUDGET {
                return Err(Error::Limit(format!(
                    "position {x} is more than {ANCHOR_BUDGET} tiles from the origin"
                )));
            }
        }
    }

    /// Locates the level-`level` supertile block containing the origin.
    ///
    /// The underlying sequence is fixed by `σ^k` with `k` the seed power,
    /// so it splits into `σ^level`-images of the letters of the companion
    /// sequence `σ^m(w)` where `level + m` is the next multiple of `k`.
    /// Blocks are anchored with a block edge at sequence index 0 and are
    /// half-open like tiles, so the address is unique and a boundary
    /// origin gets fraction 0 in the block on its right.
    pub fn supertile_address(&self, level: u32) -> Result<SupertileAddress<S>> {
        let sub = self.seq.substitution();
        let k = self.seq.seed().power;
        let m = (k - level % k) % k;
        let counts = level_tile_counts(sub, level)?;
        let lens = level_lengths(sub, level, &self.lengths);
        // Companion letters are produced by expanding sequence letters with
        // σ^m, rightward from index 0 and leftward from index -1; the chunk
        // for one sequence letter is consumed in order (or reverse order on
        // the left side).
        let mut right: Vec<Letter> = Vec::new();
        let mut right_at = 0usize;
        let mut next_right = 0i64;
        let mut left: Vec<Letter> = Vec::new(); // reversed: left[0] is index -1
        let mut left_at = 0usize;
        let mut next_left = -1i64;

        let mut start_index = 0i64; // sequence index where the current block starts
        let mut a = -self.position_of_index(0)?; // origin minus block start
        let mut blocks = 0u64;
        loop {
            if a < S::zero() {
                // origin lies left of the current block: step to block -1, -2, ...
                if left_at == left.len() {
                    let chunk = sub.apply_power(&[self.seq.letter(next_left)?], m);
                    next_left -= 1;
                    left.extend(chunk.iter().rev());
                }
                let seed = left[left_at];
                left_at += 1;
                a = a + lens[seed as usize];
                start_index -= counts[seed as usize] as i64;
                if a >= S::zero() {
                    return Ok(SupertileAddress {
                        level,
                        start_index,
                        seed_letter: seed,
                        fraction: fraction_of(a, lens[seed as usize]),
                    });
                }
            } else {
                // origin at or right of the block start: scan rightward.
                if right_at == right.len() {
                    let chunk = sub.apply_power(&[self.seq.letter(next_right)?], m);
                    next_right += 1;
                    right.extend(chunk);
                }
                let seed = right[right_at];
                let width = lens[seed as usize];
                if a < width {
                    return Ok(SupertileAddress {
                        level,
                        start_index,
                        seed_letter: seed,
                        fraction: fraction_of(a, width),
                    });
                }
                right_at += 1;
                a = a - width;
                start_index += counts[seed as usize] as i64;
            }
            blocks += 1;
            if blocks > BLOCK_BUDGET {
                return Err(Error::Limit(format!(
                    "origin is more than {BLOCK_BUDGET} level-{level} blocks from the anchor"
                )));
            }
        }
    }

    /// The level-`level` fraction-preserving map into the geometry of
    /// `target`: same sequence, origin placed the same fraction across the
    /// same supertile block measured with the new lengths.
    pub fn psi_n(&self, target: &LengthVector<S>, level: u32) -> Result<Tiling<S>> {
        if target.len() != self.lengths.len() {
            return Err(Error::Input(format!(
                "target length vector has {} entries but the alphabet has {} letters",
                target.len(),
                self.lengths.len()
            )));
        }
        let addr = self.supertile_address(level)?;
        let width =
            level_lengths(self.seq.substitution(), level, target)[addr.seed_letter as usize];
        let anchor_position = -(addr.fraction * width);
        from_anchor(&self.seq, target, addr.start_index, anchor_position)
    }

    /// The exact shift `s` with `other = self.translate(s)`.
    ///
    /// Defined only between tilings over the same sequence handle and the
    /// same lengths, where rigidity makes the shift independent of the
    /// index it is measured at.
    pub fn translation_to(&self, other: &Tiling<S>) -> Result<S> {
        if !Arc::ptr_eq(&self.seq, &other.seq) {
            return Err(Error::Input(
                "tilings are built on different sequence handles".into(),
            ));
        }
        if self.lengths != other.lengths {
            return Err(Error::Input("tilings use different length vectors".into()));
        }
        Ok(self.position_of_index(other.base)? + other.offset)
    }
}

/// `offset / width` pushed defensively into `[0, 1)`.
fn fraction_of<S: Scalar>(a: S, width: S) -> S {
    let f = a / width;
    if f < S::zero() {
        S::zero()
    } else if f >= S::one() {
        S::one() - S::epsilon()
    } else {
        f
    }
}

/// Canonical `(base, offset)` for an origin sitting `offset` after the
/// left edge of the tile at `base`, walking tiles until it lands inside.
fn canonical<S: Scalar>(
    seq: &Arc<BiSequence>,
    lengths: &LengthVector<S>,
    base: i64,
    offset: S,
) -> Result<(i64, S)> {
    let mut base = base;
    let mut offset = offset;
    let mut steps = 0u64;
    loop {
        if offset < S::zero() {
            base -= 1;
            offset = offset + lengths.get(seq.letter(base)?);
        } else {
            let len = lengths.get(seq.letter(base)?);
            if offset < len {
                return Ok((base, offset));
            }
            offset = offset - len;
            base += 1;
        }
        steps += 1;
        if steps > ANCHOR_BUDGET {
            return Err(Error::Limit(format!(
                "normalization walked more than {ANCHOR_BUDGET} tiles"
            )));
        }
    }
}

/// Builds the canonical tiling with the tile at `anchor_index` starting at
/// coordinate `anchor_position`.
fn from_anchor<S: Scalar>(
    seq: &Arc<BiSequence>,
    lengths: &LengthVector<S>,
    anchor_index: i64,
    anchor_position: S,
) -> Result<Tiling<S>> {
    let (base, offset) = canonical(seq, lengths, anchor_index, -anchor_position)?;
    Ok(Tiling {
        seq: Arc::clone(seq),
        lengths: lengths.clone(),
        base,
        offset,
    })
}

/// Log-spaced resolutions from `10^-9` up to 1, ten per decade.
pub fn default_distance_grid<S: Scalar>() -> Vec<S> {
    (0..=90)
        .map(|j| s(10f64.powf(-9.0 + j as f64 / 10.0)))
        .collect()
}

/// Distance between two tilings: the smallest grid resolution `ε` at
/// which, after translating one tiling by at most `ε`, the two agree tile
/// for tile with every boundary within `ε` over the window `[-1/ε, 1/ε]`;
/// 1 when no grid resolution suffices.
///
/// Tilings over the same sequence handle are compared exactly through
/// their relative translation. Tilings over different handles are
/// compared index-by-index with tile 0 against tile 0, which upper-bounds
/// the distance; a feasibility check whose window would need more than
/// the internal scan budget of tiles is conservatively reported
/// infeasible.
pub fn tiling_distance<S: Scalar>(a: &Tiling<S>, b: &Tiling<S>, grid: &[S]) -> Result<S> {
    if a.seq.substitution().alphabet() != b.seq.substitution().alphabet() {
        return Err(Error::Input("tilings are over different alphabets".into()));
    }
    if grid.is_empty() {
        return Err(Error::Input("resolution grid must not be empty".into()));
    }
    let mut eps: Vec<S> = Vec::with_capacity(grid.len());
    for &e in grid {
        if !(e.is_finite() && e > S::zero()) {
            return Err(Error::Input(format!(
                "grid resolutions must be positive and finite, got {e}"
            )));
        }
        eps.push(e);
    }
    eps.sort_by(|x, y| x.partial_cmp(y).expect("finite resolutions"));

    // Exact translates: feasibility collapses to one inequality.
    if Arc::ptr_eq(&a.seq, &b.seq) && a.lengths == b.lengths {
        let shift = a.translation_to(b)?.abs();
        if shift == S::zero() {
            return Ok(S::zero());
        }
        for &e in &eps {
            if shift <= e + e {
                return Ok(e.min(S::one()));
            }
        }
        return Ok(S::one());
    }

    for &e in &eps {
        if feasible(a, b, e)? {
            return Ok(e.min(S::one()));
        }
    }
    Ok(S::one())
}

/// Whether the two tilings agree at resolution `e` under the identity
/// index alignment: some shift `d` with `|d| ≤ e` brings every boundary
/// pair within `e` over the window, with equal letters throughout.
fn feasible<S: Scalar>(a: &Tiling<S>, b: &Tiling<S>, e: S) -> Result<bool> {
    let radius = S::one() / e + e;
    let min_len = |t: &Tiling<S>| {
        t.lengths
            .as_slice()
            .iter()
            .copied()
            .fold(S::infinity(), S::min)
    };
    // Cheap overestimate of the walk before doing it.
    let span = (radius + radius) / min_len(a).min(min_len(b));
    if span > s::<S>(SCAN_BUDGET as f64) {
        return Ok(false);
    }

    // Index range whose boundaries can land inside the window for either
    // tiling; walking one tile past each end keeps the label check covering
    // every tile that intersects the window.
    let lo_a = boundary_floor(a, -radius)?;
    let lo_b = boundary_floor(b, -radius)?;
    let hi_a = boundary_ceil(a, radius)?;
    let hi_b = boundary_ceil(b, radius)?;
    let lo = lo_a.min(lo_b);
    let hi = hi_a.max(hi_b);
    if hi.abs_diff(lo) > SCAN_BUDGET {
        return Ok(false);
    }

    let mut d_lo = -e;
    let mut d_hi = e;
    let mut pa = a.position_of_index(lo)?;
    let mut pb = b.position_of_index(lo)?;
    let letters_a = a.seq.letters_range(lo, hi + 1)?;
    let letters_b = b.seq.letters_range(lo, hi + 1)?;
    for (i, (&la, &lb)) in letters_a.iter().zip(&letters_b).enumerate() {
        if la != lb {
            return Ok(false);
        }
        let in_window = (pa >= -radius && pa <= radius) || (pb >= -radius && pb <= radius);
        if in_window {
            let diff = pa - pb;
            d_lo = d_lo.max(diff - e);
            d_hi = d_hi.min(diff + e);
            if d_lo > d_hi {
                return Ok(false);
            }
        }
        if i + 1 < letters_a.len() {
            pa = pa + a.lengths.get(la);
            pb = pb + b.lengths.get(lb);
        }
    }
    Ok(true)
}

/// Largest index whose left boundary is at or below `x` (the tile
/// containing `x`), so walking from it covers everything right of `x`.
fn boundary_floor<S: Scalar>(t: &Tiling<S>, x: S) -> Result<i64> {
    Ok(t.tile_at(x)?.0)
}

/// Smallest index whose left boundary is at or above `x`.
fn boundary_ceil<S: Scalar>(t: &Tiling<S>, x: S) -> Result<i64> {
    let (i, _, (start, _)) = t.tile_at(x)?;
    Ok(if start >= x { i } else { i + 1 })
}

impl<S: Scalar> Conjugacy<S> {
    /// Overall rescaling split off before iterating; the level maps run
    /// against `new_lengths / scale`.
    pub fn scale(&self) -> S {
        self.scale
    }

    pub fn decomposition(&self) -> &LengthChangeDecomposition<S> {
        &self.decomposition
    }

    /// The point the conjugacy was iterated from.
    pub fn source(&self) -> &Tiling<S> {
        &self.source
    }

    /// The mean-matched target lengths the limit lives in.
    pub fn matched_lengths(&self) -> &LengthVector<S> {
        &self.matched_lengths
    }

    pub fn tolerance(&self) -> S {
        self.tolerance
    }

    pub fn trace(&self) -> &ConjugacyTrace<S> {
        &self.trace
    }

    pub fn limit(&self) -> &Tiling<S> {
        &self.limit
    }

    /// Applies the same limit map to another point of the same suspension,
    /// iterating levels with the stored tolerance. The point must live on
    /// the same sequence handle and lengths as the original source.
    pub fn image_of(&self, point: &Tiling<S>) -> Result<Tiling<S>> {
        if !Arc::ptr_eq(point.sequence(), self.source.sequence()) {
            return Err(Error::Input(
                "point lives on a different sequence handle".into(),
            ));
        }
        if point.lengths() != self.source.lengths() {
            return Err(Error::Input("point uses different tile lengths".into()));
        }
        let (_, limit) =
            iterate_levels(point, &self.matched_lengths, self.tolerance, self.max_level)?;
        Ok(limit)
    }
}

/// How many consecutive below-tolerance gaps the convergence check must
/// see before trusting them.
///
/// Successive level maps can coincide exactly without being anywhere near
/// the limit: whenever a block's seed letter has a single-letter image,
/// the blocks one level apart are the same word with the same widths and
/// the gap between them is identically zero. Chains of such coincidences
/// are bounded by the longest run of letters whose iterated images stay
/// single letters, so demanding one more small gap than that run defeats
/// every exact coincidence.
fn required_consecutive(sub: &Substitution) -> u32 {
    let n = sub.alphabet().len();
    let cap = (n - 1) * (n - 1) + 2;
    let mut longest = 0u32;
    for letter in 0..n {
        let mut image = vec![letter as Letter];
        let mut run = 0u32;
        for _ in 0..cap {
            image = sub.apply_power(&image, 1);
            if image.len() > 1 {
                break;
            }
            run += 1;
        }
        longest = longest.max(run);
    }
    longest + 1
}

/// Iterates the fraction-preserving level maps of `point` into the
/// `target` geometry until successive images differ by a translation
/// below `tolerance` often enough in a row to rule out exact block
/// coincidences.
fn iterate_levels<S: Scalar>(
    point: &Tiling<S>,
    target: &LengthVector<S>,
    tolerance: S,
    max_level: u32,
) -> Result<(ConjugacyTrace<S>, Tiling<S>)> {
    let required = required_consecutive(point.sequence().substitution());
    let mut prev = point.psi_n(target, 0)?;
    let mut rows: Vec<TraceRow<S>> = Vec::new();
    let mut streak = 0u32;
    for level in 1..=max_level {
        let cur = point.psi_n(target, level)?;
        let gap = prev.translation_to(&cur)?.abs();
        rows.push(TraceRow {
            level: level - 1,
            offset: prev.offset(),
            gap,
        });
        if gap < tolerance {
            streak += 1;
            if streak >= required {
                let trace = ConjugacyTrace {
                    rows,
                    converged: true,
                    limit_offset: Some(cur.offset()),
                };
                return Ok((trace, cur));
            }
        } else {
            streak = 0;
        }
        prev = cur;
    }
    let history: Vec<String> = rows.iter().map(|r| format!("{:e}", r.gap)).collect();
    Err(Error::Convergence(format!(
        "level-map gaps never fell below {tolerance:e} within {max_level} levels: [{}]",
        history.join(", ")
    )))
}

/// Builds the conjugacy from the suspension of `point` onto the suspension
/// with lengths `new_lengths`, up to the overall rescaling reported in
/// `scale`.
///
/// The length change must be contracting: the decomposition is computed
/// first and a remainder supported on a non-contracting eigenvalue is
/// refused with the offending modulus named, since the level maps need
/// not form a Cauchy sequence there. Iteration then runs against the
/// mean-matched lengths until the gap drops below `tolerance`, failing
/// with the full gap history if `max_level` is reached first.
pub fn conjugacy<S: Scalar>(
    point: &Tiling<S>,
    new_lengths: &LengthVector<S>,
    tolerance: S,
    max_level: u32,
) -> Result<Conjugacy<S>> {
    if !(tolerance.is_finite() && tolerance > S::zero()) {
        return Err(Error::Input(format!(
            "tolerance must be positive and finite, got {tolerance}"
        )));
    }
    if max_level == 0 {
        return Err(Error::Input("at least one level must be allowed".into()));
    }
    let eig_tol = S::epsilon() * s(100.0);
    let spec = perron_data(&point.sequence().substitution().matrix(), eig_tol)?;
    let decomposition = decompose_length_change(point.lengths(), new_lengths, &spec)?;
    if !decomposition.is_contracting() {
        return Err(match decomposition.status {
            ContractionStatus::NotContracting => Error::Precondition(format!(
                "length change is not contracting: the remainder has support at eigenvalue modulus {}",
                decomposition
                    .decay_rate
                    .expect("non-contracting remainders carry the offending modulus")
            )),
            _ => Error::Precondition(
                "length change could not be classified against the eigenbasis".into(),
            ),
        });
    }
    let matched_lengths = new_lengths.scaled_down(decomposition.scale)?;
    let (trace, limit) = iterate_levels(point, &matched_lengths, tolerance, max_level)?;
    Ok(Conjugacy {
        scale: decomposition.scale,
        decomposition,
        source: point.clone(),
        matched_lengths,
        tolerance,
        max_level,
        trace,
        limit,
    })
}

/// Geometric rate fitted to a trace's gaps over an inclusive level range:
/// `exp` of the least-squares slope of log gap against level.
///
/// Individual gap ratios wobble when the origin's block chain crosses a
/// boundary, so the line fit is the meaningful rate estimate. Zero gaps
/// come from exact block coincidences and carry no rate information;
/// they are left out, and `None` is returned when fewer than two usable
/// gaps remain in the range.
pub fn fitted_gap_rate<S: Scalar>(
    trace: &ConjugacyTrace<S>,
    from_level: u32,
    to_level: u32,
) -> Option<S> {
    let pts: Vec<(S, S)> = trace
        .rows
        .iter()
        .filter(|r| from_level <= r.level && r.level <= to_level && r.gap > S::zero())
        .map(|r| (s(r.level as f64), r.gap.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = s::<S>(pts.len() as f64);
    let mean_x = pts.iter().fold(S::zero(), |a, p| a + p.0) / n;
    let mean_y = pts.iter().fold(S::zero(), |a, p| a + p.1) / n;
    let mut num = S::zero();
    let mut den = S::zero();
    for (x, y) in pts {
        num = num + (x - mean_x) * (y - mean_y);
        den = den + (x - mean_x) * (x - mean_x);
    }
    if den == S::zero() {
        return None;
    }
    Some((num / den).exp())
}

/// Midpoints of `count` equal slices of `[-10, 10]`, for equivariance
/// spot checks.
pub fn translation_samples<S: Scalar>(count: usize) -> Vec<S> {
    let c = s::<S>(count as f64);
    (0..count)
        .map(|j| s::<S>(-10.0) + s::<S>(20.0) * (s::<S>(j as f64) + s(0.5)) / c)
        .collect()
}

/// How far the conjugacy is from commuting with translation by `shift`,
/// in the tiling metric: compares the image of the translated source with
/// the translated limit.
pub fn equivariance_residual<S: Scalar>(conj: &Conjugacy<S>, shift: S, grid: &[S]) -> Result<S> {
    let moved = conj.source().translate(shift)?;
    let image = conj.image_of(&moved)?;
    let reference = conj.limit().translate(shift)?;
    tiling_distance(&image, &reference, grid)
}
