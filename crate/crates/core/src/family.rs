//! Predicates over hyperplane families: cover, skew cover, the
//! nondegeneracy condition, slicing family, and per-vertex incidence.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::geometry::{
    all_vertices, full_mask, Edge, GeometryError, Hyperplane, Vertex, VertexSet, EdgeSet,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("plane has dimension {got}, family has dimension {want}")]
    DimMismatch { want: usize, got: usize },
}

/// Outcome of a predicate: pass, or fail with a re-checkable witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Pass,
    Fail(W),
}

impl<W> Verdict<W> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }
}

/// A failure of the nondegeneracy condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// No plane of the family passes through this vertex at all.
    Uncovered(Vertex),
    /// Every plane through `vertex` has a zero normal entry in `direction`.
    MissingDirection { vertex: Vertex, direction: usize },
}

impl Violation {
    pub fn vertex(&self) -> Vertex {
        match self {
            Violation::Uncovered(v) => *v,
            Violation::MissingDirection { vertex, .. } => *vertex,
        }
    }
}

/// An ordered, duplicate-free list of canonical hyperplanes in a fixed
/// ambient dimension. Order is preserved as given; it parameterizes the
/// witness pipeline's greedy partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    dim: usize,
    planes: Vec<Hyperplane>,
}

impl Family {
    pub fn empty(dim: usize) -> Self {
        Family { dim, planes: Vec::new() }
    }

    /// Canonicalizes every plane and collapses duplicates, keeping the
    /// first occurrence. Rejects dimension mismatches.
    pub fn new(
        dim: usize,
        planes: impl IntoIterator<Item = Hyperplane>,
    ) -> Result<Self, FamilyError> {
        let mut fam = Family::empty(dim);
        for h in planes {
            fam.push(h)?;
        }
        Ok(fam)
    }

    /// Adds a plane (canonicalized); returns false if it was already present.
    pub fn push(&mut self, h: Hyperplane) -> Result<bool, FamilyError> {
        if h.dim() != self.dim {
            return Err(FamilyError::DimMismatch {
                want: self.dim,
                got: h.dim(),
            });
        }
        let c = h.canonicalize();
        if self.planes.contains(&c) {
            Ok(false)
        } else {
            self.planes.push(c);
            Ok(true)
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn planes(&self) -> &[Hyperplane] {
        &self.planes
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    /// Union of the planes' covered vertex sets.
    pub fn covered_union(&self) -> Result<VertexSet, GeometryError> {
        let mut acc = VertexSet::empty(self.dim)?;
        for h in &self.planes {
            acc.union_with(&h.covered_set()?);
        }
        Ok(acc)
    }

    /// Union of the planes' sliced edge sets.
    pub fn sliced_union(&self) -> Result<EdgeSet, GeometryError> {
        let mut acc = EdgeSet::empty(self.dim)?;
        for h in &self.planes {
            acc.union_with(&h.sliced_set()?);
        }
        Ok(acc)
    }

    /// Every vertex on at least one plane; witness is the lexicographically
    /// smallest uncovered vertex on failure.
    pub fn is_cover(&self) -> Result<Verdict<Vertex>, GeometryError> {
        let union = self.covered_union()?;
        Ok(match union.first_missing() {
            None => Verdict::Pass,
            Some(v) => Verdict::Fail(v),
        })
    }

    /// Cover in which every plane has an all-non-zero normal vector.
    pub fn is_skew_cover(&self) -> Result<bool, GeometryError> {
        Ok(self.planes.iter().all(Hyperplane::is_skew) && self.is_cover()?.passed())
    }

    /// The condition of the n/2 lower bound: for every vertex v and every
    /// direction i, some plane through v has a non-zero i-th normal entry.
    /// Witness is the lexicographically smallest failing (vertex, direction).
    pub fn is_nondegenerate_cover(&self) -> Result<Verdict<Violation>, GeometryError> {
        let idx = self.incidence()?;
        let full = full_mask(self.dim);
        for v in all_vertices(self.dim) {
            if idx.count(v) == 0 {
                return Ok(Verdict::Fail(Violation::Uncovered(v)));
            }
            let union = idx.support_union(v);
            if union != full {
                let direction = (!union & full).trailing_zeros() as usize + 1;
                return Ok(Verdict::Fail(Violation::MissingDirection {
                    vertex: v,
                    direction,
                }));
            }
        }
        Ok(Verdict::Pass)
    }

    /// Every edge sliced by at least one plane; witness is the smallest
    /// unsliced edge (by edge index) on failure.
    pub fn is_slicing_family(&self) -> Result<Verdict<Edge>, GeometryError> {
        let union = self.sliced_union()?;
        Ok(match union.first_missing() {
            None => Verdict::Pass,
            Some(e) => Verdict::Fail(e),
        })
    }

    /// Per-vertex incidence counts and support unions.
    pub fn incidence(&self) -> Result<IncidenceIndex, GeometryError> {
        crate::geometry::VertexSet::empty(self.dim)?; // dim ceiling check
        let size = 1usize << self.dim;
        let mut counts = vec![0u32; size];
        let mut unions = vec![0u32; size];
        for h in &self.planes {
            let supp = h.support().mask();
            for v in h.covered_set()?.iter() {
                counts[v.bits() as usize] += 1;
                unions[v.bits() as usize] |= supp;
            }
        }
        Ok(IncidenceIndex {
            dim: self.dim,
            counts,
            unions,
        })
    }

    /// Smallest C with every canonical normal entry in [-C, C].
    pub fn max_abs_coefficient(&self) -> BigInt {
        let mut best = BigInt::zero();
        for h in &self.planes {
            for c in h.normal() {
                let a = c.abs();
                if a > best {
                    best = a;
                }
            }
        }
        best
    }

    /// Re-checks a reported violation against the family.
    pub fn violation_holds(&self, violation: &Violation) -> Result<bool, GeometryError> {
        match violation {
            Violation::Uncovered(v) => {
                for h in &self.planes {
                    if h.contains(v)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Violation::MissingDirection { vertex, direction } => {
                for h in &self.planes {
                    if h.contains(vertex)? && !h.normal()[direction - 1].is_zero() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Per-vertex incidence data: how many planes pass through each vertex and
/// the union of their normal supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceIndex {
    dim: usize,
    counts: Vec<u32>,
    unions: Vec<u32>,
}

impl IncidenceIndex {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self, v: Vertex) -> u32 {
        self.counts[v.bits() as usize]
    }

    pub fn support_union(&self, v: Vertex) -> u32 {
        self.unions[v.bits() as usize]
    }

    /// Vertex with minimal incidence count, lexicographic tie-break.
    pub fn min_vertex(&self) -> Vertex {
        let mut best = 0usize;
        for (i, &c) in self.counts.iter().enumerate() {
            if c < self.counts[best] {
                best = i;
            }
        }
        Vertex::new(self.dim, best as u32).unwrap()
    }
}
