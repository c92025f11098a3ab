//! Mechanical replay of the n/2 lower-bound argument for nondegenerate
//! covers. Given a family that passes the nondegeneracy check, the pipeline
//! reproduces every object of the argument (minimizing vertex, coordinate
//! flip, origin planes, greedy support partition, sign-majority refinement,
//! the subcube Q_S) and verifies both intermediate claims exhaustively.
//!
//! A claim failure on a valid input signals an implementation bug, not an
//! input error; it is reported as an internal-consistency error.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::family::{Family, Verdict, Violation};
use crate::geometry::{
    full_mask, GeometryError, Hyperplane, SupportMask, Vertex, VertexSet,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("family is not a nondegenerate cover: {0:?}")]
    Degenerate(Violation),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Majority sign of a refined block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// Trace of a plane on the coordinate subspace spanned by a direction set:
/// either a hyperplane in the smaller dimension, or the empty set when the
/// restricted normal vanishes while the offset does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RestrictedTrace {
    Plane(Hyperplane),
    Empty,
}

/// Full trace of the lower-bound pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    /// Vertex minimizing the incidence count (the original family).
    pub minimizing_vertex: Vertex,
    /// Mask of coordinates flipped to move that vertex to the origin.
    pub flip_mask: u32,
    /// The flipped family (same order as the input).
    pub flipped: Family,
    /// Indices (into the flipped family) of planes through the origin.
    pub origin_plane_indices: Vec<usize>,
    /// Greedy support partition blocks T_j, one n-bit mask per origin plane.
    pub partition: Vec<u32>,
    /// Refined blocks T_j' with their majority sign.
    pub refined: Vec<(u32, Sign)>,
    /// S = union of the refined blocks, as an n-bit mask.
    pub s_mask: u32,
    /// The subcube Q_S of vertices supported inside S.
    pub subcube: VertexSet,
    /// Every non-zero vertex of Q_S misses some origin plane.
    pub claim_origin_separation_ok: bool,
    /// The non-origin planes cover Q_S minus the origin and avoid the origin.
    pub claim_subcube_cover_ok: bool,
    /// Traces of the non-origin planes on the S-subspace.
    pub restricted: Vec<RestrictedTrace>,
    pub family_size: usize,
    /// ceil(n/2), the certified lower bound.
    pub lower_bound: usize,
    pub bound_satisfied: bool,
}

/// Substitutes x_i -> 1 - x_i for every coordinate where `w` is one:
/// a_i -> -a_i and b -> b - a_i. Containment transports along v -> v XOR w.
pub fn flip_hyperplane(h: &Hyperplane, w: &Vertex) -> Result<Hyperplane, GeometryError> {
    if h.dim() != w.dim() {
        return Err(GeometryError::DimMismatch(h.dim(), w.dim()));
    }
    let mut normal = h.normal().to_vec();
    let mut offset = h.offset().clone();
    for (i, entry) in normal.iter_mut().enumerate() {
        if w.bits() >> i & 1 == 1 {
            offset -= &*entry;
            *entry = -std::mem::take(entry);
        }
    }
    Ok(Hyperplane::new(normal, offset)?.canonicalize())
}

/// Applies [`flip_hyperplane`] to every plane, preserving order.
pub fn flip_to_origin(f: &Family, w: &Vertex) -> Result<Family, PipelineError> {
    let mut out = Family::empty(f.dim());
    for h in f.planes() {
        let fresh = out
            .push(flip_hyperplane(h, w)?)
            .map_err(|_| PipelineError::Internal("flip changed dimension".into()))?;
        if !fresh {
            return Err(PipelineError::Internal(
                "coordinate flip collapsed two distinct planes".into(),
            ));
        }
    }
    Ok(out)
}

/// Vertex with minimal incidence count, lexicographic tie-break.
pub fn minimizing_vertex(f: &Family) -> Result<Vertex, GeometryError> {
    Ok(f.incidence()?.min_vertex())
}

/// Greedy support partition: block j holds the directions whose first
/// supporting normal in the list is the j-th one. Fails unless the supports
/// exhaust all directions.
pub fn greedy_support_partition(
    dim: usize,
    supports: &[SupportMask],
) -> Result<Vec<u32>, PipelineError> {
    let mut seen = 0u32;
    let mut blocks = Vec::with_capacity(supports.len());
    for s in supports {
        blocks.push(s.mask() & !seen);
        seen |= s.mask();
    }
    if seen != full_mask(dim) {
        return Err(PipelineError::Internal(format!(
            "supports cover mask {seen:#b}, not all of {dim} directions"
        )));
    }
    Ok(blocks)
}

/// Larger sign class of the normal entries inside a block (ties go to the
/// positive class). The result always has at least half the block size.
pub fn sign_majority_refine(block: u32, normal: &[BigInt]) -> (u32, Sign) {
    let mut pos = 0u32;
    let mut neg = 0u32;
    for (i, c) in normal.iter().enumerate() {
        if block >> i & 1 == 1 {
            debug_assert!(!c.is_zero());
            if c.is_positive() {
                pos |= 1 << i;
            } else {
                neg |= 1 << i;
            }
        }
    }
    if pos.count_ones() >= neg.count_ones() {
        (pos, Sign::Positive)
    } else {
        (neg, Sign::Negative)
    }
}

/// Trace of a plane not through the origin on the subspace of coordinates
/// in `s_mask`, as a hyperplane in dimension |S| (coordinates outside S
/// dropped) or the empty trace.
pub fn restrict_to_subspace(
    h: &Hyperplane,
    s_mask: u32,
) -> Result<RestrictedTrace, PipelineError> {
    if h.offset().is_zero() {
        return Err(PipelineError::Internal(
            "restriction requires a plane avoiding the origin".into(),
        ));
    }
    let normal: Vec<BigInt> = (0..h.dim())
        .filter(|i| s_mask >> i & 1 == 1)
        .map(|i| h.normal()[i].clone())
        .collect();
    if normal.iter().all(Zero::is_zero) {
        // restricted equation reads 0 = b with b != 0
        return Ok(RestrictedTrace::Empty);
    }
    Ok(RestrictedTrace::Plane(
        Hyperplane::new(normal, h.offset().clone())?.canonicalize(),
    ))
}

/// Runs the whole pipeline on a nondegenerate cover.
pub fn run_pipeline(f: &Family) -> Result<WitnessReport, PipelineError> {
    let n = f.dim();
    if let Verdict::Fail(violation) = f.is_nondegenerate_cover()? {
        return Err(PipelineError::Degenerate(violation));
    }

    let w = minimizing_vertex(f)?;
    let flipped = flip_to_origin(f, &w)?;
    let origin = Vertex::new(n, 0)?;

    let mut origin_plane_indices = Vec::new();
    for (i, h) in flipped.planes().iter().enumerate() {
        if h.contains(&origin)? {
            origin_plane_indices.push(i);
        }
    }

    let supports: Vec<SupportMask> = origin_plane_indices
        .iter()
        .map(|&i| flipped.planes()[i].support())
        .collect();
    let partition = greedy_support_partition(n, &supports)?;

    let refined: Vec<(u32, Sign)> = partition
        .iter()
        .zip(&origin_plane_indices)
        .map(|(&block, &i)| sign_majority_refine(block, flipped.planes()[i].normal()))
        .collect();

    let s_mask = refined.iter().fold(0u32, |acc, &(m, _)| acc | m);
    let mut subcube = VertexSet::empty(n)?;
    for bits in 0..1u32 << n {
        if bits & !s_mask == 0 {
            subcube.insert(Vertex::new(n, bits)?);
        }
    }

    // Claim: every non-zero vertex of Q_S is missed by some origin plane.
    let mut claim_origin_separation_ok = true;
    'outer: for v in subcube.iter() {
        if v.is_origin() {
            continue;
        }
        for &i in &origin_plane_indices {
            if !flipped.planes()[i].contains(&v)? {
                continue 'outer;
            }
        }
        claim_origin_separation_ok = false;
        break;
    }

    // Claim: the non-origin planes cover Q_S \ {0} and avoid the origin.
    let rest: Vec<&Hyperplane> = flipped
        .planes()
        .iter()
        .enumerate()
        .filter(|(i, _)| !origin_plane_indices.contains(i))
        .map(|(_, h)| h)
        .collect();
    let mut claim_subcube_cover_ok = true;
    for h in &rest {
        if h.contains(&origin)? {
            claim_subcube_cover_ok = false;
        }
    }
    'cover: for v in subcube.iter() {
        if v.is_origin() {
            continue;
        }
        for h in &rest {
            if h.contains(&v)? {
                continue 'cover;
            }
        }
        claim_subcube_cover_ok = false;
        break;
    }

    if !claim_origin_separation_ok {
        return Err(PipelineError::Internal(
            "origin-separation claim failed on a vertex of Q_S".into(),
        ));
    }
    if !claim_subcube_cover_ok {
        return Err(PipelineError::Internal(
            "subcube-cover claim failed for the non-origin planes".into(),
        ));
    }

    let restricted = rest
        .iter()
        .map(|h| restrict_to_subspace(h, s_mask))
        .collect::<Result<Vec<_>, _>>()?;

    let s_size = s_mask.count_ones() as usize;
    let lower_bound = n.div_ceil(2);
    if s_size < lower_bound {
        return Err(PipelineError::Internal(format!(
            "|S| = {s_size} fell below ceil(n/2) = {lower_bound}"
        )));
    }
    // Punctured-cube lower bound, used as a black box: the non-origin
    // planes cover Q_S \ {0} while avoiding 0, so there are at least |S|.
    if rest.len() < s_size {
        return Err(PipelineError::Internal(format!(
            "only {} non-origin planes against |S| = {s_size}",
            rest.len()
        )));
    }
    let bound_satisfied = f.len() >= lower_bound;
    if !bound_satisfied {
        return Err(PipelineError::Internal(format!(
            "family of size {} beats the certified bound {lower_bound}",
            f.len()
        )));
    }

    Ok(WitnessReport {
        minimizing_vertex: w,
        flip_mask: w.bits(),
        flipped,
        origin_plane_indices,
        partition,
        refined,
        s_mask,
        subcube,
        claim_origin_separation_ok,
        claim_subcube_cover_ok,
        restricted,
        family_size: f.len(),
        lower_bound,
        bound_satisfied,
    })
}
