//! Exact-arithmetic hyperplanes over the hypercube `{0,1}^n`.
//!
//! A hyperplane is stored as an integer normal vector `a` and a rational
//! offset `b`, describing `{x : <a,x> = b}`. All predicates (containment,
//! edge slicing) are exact zero/sign tests; there is no floating point
//! anywhere in this crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::bitset::BitSet;

/// Largest supported ambient dimension for bitset types (`2^24`-bit masks).
pub const MAX_DIM: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("normal vector must not be all-zero")]
    ZeroNormal,
    #[error("dimension must be at least 1")]
    ZeroDim,
    #[error("dimension {0} exceeds the supported ceiling of {MAX_DIM}")]
    DimTooLarge(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("vertex bits {bits:#x} out of range for dimension {dim}")]
    VertexOutOfRange { dim: usize, bits: u32 },
    #[error("edge base vertex has a one in direction {0}")]
    BadEdgeBase(usize),
    #[error("direction {direction} out of range 1..={dim}")]
    BadDirection { dim: usize, direction: usize },
}

/// A vertex of `{0,1}^n`, bit `i` of `bits` holding coordinate `x_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    dim: usize,
    bits: u32,
}

impl Vertex {
    pub fn new(dim: usize, bits: u32) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::ZeroDim);
        }
        if dim > MAX_DIM {
            return Err(GeometryError::DimTooLarge(dim));
        }
        if bits >= 1u32 << dim {
            return Err(GeometryError::VertexOutOfRange { dim, bits });
        }
        Ok(Vertex { dim, bits })
    }

    /// Builds a vertex from 0/1 coordinates.
    pub fn from_coords(coords: &[u8]) -> Result<Self, GeometryError> {
        let mut bits = 0u32;
        for (i, &c) in coords.iter().enumerate() {
            if c != 0 {
                bits |= 1 << i;
            }
        }
        Vertex::new(coords.len(), bits)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Coordinate `x_i` for 1-based `i`.
    pub fn coord(&self, i: usize) -> u8 {
        debug_assert!(i >= 1 && i <= self.dim);
        (self.bits >> (i - 1) & 1) as u8
    }

    pub fn coords(&self) -> Vec<u8> {
        (1..=self.dim).map(|i| self.coord(i)).collect()
    }

    /// Hamming support of the vertex as an n-bit mask.
    pub fn support_bits(&self) -> u32 {
        self.bits
    }

    pub fn flip(&self, direction: usize) -> Vertex {
        debug_assert!(direction >= 1 && direction <= self.dim);
        Vertex {
            dim: self.dim,
            bits: self.bits ^ (1 << (direction - 1)),
        }
    }

    pub fn is_origin(&self) -> bool {
        self.bits == 0
    }
}

/// An edge of the hypercube: `base` has a zero in `direction` (1-based),
/// the other endpoint is `base` with that coordinate set to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    dim: usize,
    base: Vertex,
    direction: usize,
}

impl Edge {
    pub fn new(base: Vertex, direction: usize) -> Result<Self, GeometryError> {
        let dim = base.dim();
        if direction == 0 || direction > dim {
            return Err(GeometryError::BadDirection { dim, direction });
        }
        if base.coord(direction) != 0 {
            return Err(GeometryError::BadEdgeBase(direction));
        }
        Ok(Edge { dim, base, direction })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> Vertex {
        self.base
    }

    pub fn direction(&self) -> usize {
        self.direction
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.base, self.base.flip(self.direction))
    }

    /// Fixed edge index: `(direction-1) * 2^(n-1) + rank(base)` where the
    /// rank of the base is the integer formed by deleting the direction bit.
    pub fn index(&self) -> usize {
        let d = self.direction - 1;
        let bits = self.base.bits() as usize;
        let low = bits & ((1 << d) - 1);
        let high = bits >> (d + 1);
        d * (1 << (self.dim - 1)) + (low | high << d)
    }

    /// Inverse of [`Edge::index`].
    pub fn from_index(dim: usize, index: usize) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::ZeroDim);
        }
        let half = 1usize << (dim - 1);
        let d = index / half;
        if d >= dim {
            return Err(GeometryError::BadDirection {
                dim,
                direction: d + 1,
            });
        }
        let rank = index % half;
        let low = rank & ((1 << d) - 1);
        let high = rank >> d;
        let bits = (low | high << (d + 1)) as u32;
        Edge::new(Vertex::new(dim, bits)?, d + 1)
    }
}

/// Returns the number of edges of the n-cube, `n * 2^(n-1)`.
pub fn edge_count(dim: usize) -> usize {
    dim << (dim - 1)
}

/// Iterates over all edges of the n-cube in index order.
pub fn all_edges(dim: usize) -> impl Iterator<Item = Edge> {
    (0..edge_count(dim)).map(move |i| Edge::from_index(dim, i).unwrap())
}

/// Iterates over all vertices of the n-cube in bitmask order.
pub fn all_vertices(dim: usize) -> impl Iterator<Item = Vertex> {
    (0..1u32 << dim).map(move |bits| Vertex { dim, bits })
}

/// Set of non-zero coordinate positions of a normal vector, as an n-bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SupportMask {
    dim: usize,
    mask: u32,
}

impl SupportMask {
    pub fn new(dim: usize, mask: u32) -> Self {
        debug_assert!(dim <= 32 && (mask as u64) < (1u64 << dim));
        SupportMask { dim, mask }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn contains(&self, direction: usize) -> bool {
        direction >= 1 && direction <= self.dim && self.mask >> (direction - 1) & 1 == 1
    }

    pub fn is_full(&self) -> bool {
        self.mask == full_mask(self.dim)
    }

    /// 1-based directions in the support, ascending.
    pub fn directions(&self) -> Vec<usize> {
        (1..=self.dim).filter(|&i| self.contains(i)).collect()
    }
}

pub fn full_mask(dim: usize) -> u32 {
    if dim >= 32 {
        u32::MAX
    } else {
        (1u32 << dim) - 1
    }
}

/// Subset of cube vertices, bit `v` set iff vertex with bitmask `v` is in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    dim: usize,
    bits: BitSet,
}

impl VertexSet {
    pub fn empty(dim: usize) -> Result<Self, GeometryError> {
        check_dim(dim)?;
        Ok(VertexSet {
            dim,
            bits: BitSet::new(1 << dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert(&mut self, v: Vertex) {
        debug_assert_eq!(v.dim(), self.dim);
        self.bits.insert(v.bits() as usize);
    }

    pub fn remove(&mut self, v: Vertex) {
        self.bits.remove(v.bits() as usize);
    }

    pub fn contains(&self, v: Vertex) -> bool {
        debug_assert_eq!(v.dim(), self.dim);
        self.bits.contains(v.bits() as usize)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.dim, other.dim);
        self.bits.union_with(&other.bits);
    }

    pub fn count(&self) -> usize {
        self.bits.count()
    }

    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn first_missing(&self) -> Option<Vertex> {
        self.bits.first_clear().map(|i| Vertex {
            dim: self.dim,
            bits: i as u32,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.iter_ones().map(|i| Vertex {
            dim: self.dim,
            bits: i as u32,
        })
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.bits.is_subset_of(&other.bits)
    }
}

/// Subset of cube edges under the fixed [`Edge::index`] numbering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    dim: usize,
    bits: BitSet,
}

impl EdgeSet {
    pub fn empty(dim: usize) -> Result<Self, GeometryError> {
        check_dim(dim)?;
        Ok(EdgeSet {
            dim,
            bits: BitSet::new(edge_count(dim)),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert(&mut self, e: Edge) {
        debug_assert_eq!(e.dim(), self.dim);
        self.bits.insert(e.index());
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.bits.contains(e.index())
    }

    pub fn union_with(&mut self, other: &EdgeSet) {
        debug_assert_eq!(self.dim, other.dim);
        self.bits.union_with(&other.bits);
    }

    pub fn count(&self) -> usize {
        self.bits.count()
    }

    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn first_missing(&self) -> Option<Edge> {
        self.bits
            .first_clear()
            .map(|i| Edge::from_index(self.dim, i).unwrap())
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.bits
            .iter_ones()
            .map(|i| Edge::from_index(self.dim, i).unwrap())
    }

    pub fn is_subset_of(&self, other: &EdgeSet) -> bool {
        self.bits.is_subset_of(&other.bits)
    }
}

fn check_dim(dim: usize) -> Result<(), GeometryError> {
    if dim == 0 {
        Err(GeometryError::ZeroDim)
    } else if dim > MAX_DIM {
        Err(GeometryError::DimTooLarge(dim))
    } else {
        Ok(())
    }
}

/// An affine hyperplane `{x in R^n : <a,x> = b}` with integer normal `a`
/// and rational offset `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    dim: usize,
    normal: Vec<BigInt>,
    offset: BigRational,
}

impl Hyperplane {
    /// Builds a hyperplane from an integer normal vector, as given
    /// (no canonical rescaling).
    pub fn new(normal: Vec<BigInt>, offset: BigRational) -> Result<Self, GeometryError> {
        if normal.is_empty() {
            return Err(GeometryError::ZeroDim);
        }
        if normal.iter().all(Zero::is_zero) {
            return Err(GeometryError::ZeroNormal);
        }
        Ok(Hyperplane {
            dim: normal.len(),
            normal,
            offset,
        })
    }

    /// Builds a hyperplane from rational coefficients by clearing the
    /// denominators of the normal entries (multiplying the whole equation
    /// by their lcm).
    pub fn from_rational(
        normal: Vec<BigRational>,
        offset: BigRational,
    ) -> Result<Self, GeometryError> {
        if normal.is_empty() {
            return Err(GeometryError::ZeroDim);
        }
        let mut lcm = BigInt::one();
        for c in &normal {
            lcm = lcm.lcm(c.denom());
        }
        let scale = BigRational::from_integer(lcm.clone());
        let ints: Vec<BigInt> = normal.iter().map(|c| (c * &scale).to_integer()).collect();
        Hyperplane::new(ints, offset * scale)
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(normal: &[i64], offset_num: i64, offset_den: i64) -> Self {
        Hyperplane::new(
            normal.iter().map(|&c| BigInt::from(c)).collect(),
            BigRational::new(BigInt::from(offset_num), BigInt::from(offset_den)),
        )
        .expect("valid integer hyperplane")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn offset(&self) -> &BigRational {
        &self.offset
    }

    /// Exact value of `<a,v> - b`.
    pub fn eval(&self, v: &Vertex) -> Result<BigRational, GeometryError> {
        if v.dim() != self.dim {
            return Err(GeometryError::DimMismatch(self.dim, v.dim()));
        }
        let mut sum = BigInt::zero();
        for i in 0..self.dim {
            if v.bits() >> i & 1 == 1 {
                sum += &self.normal[i];
            }
        }
        Ok(BigRational::from_integer(sum) - &self.offset)
    }

    pub fn contains(&self, v: &Vertex) -> Result<bool, GeometryError> {
        Ok(self.eval(v)?.is_zero())
    }

    /// True iff the affine form takes non-zero values of opposite sign at
    /// the two endpoints of the edge.
    pub fn slices(&self, e: &Edge) -> Result<bool, GeometryError> {
        if e.dim() != self.dim {
            return Err(GeometryError::DimMismatch(self.dim, e.dim()));
        }
        let (v, w) = e.endpoints();
        let x = self.eval(&v)?;
        let y = self.eval(&w)?;
        Ok(!x.is_zero() && !y.is_zero() && (x.is_positive() != y.is_positive()))
    }

    pub fn support(&self) -> SupportMask {
        let mut mask = 0u32;
        for (i, c) in self.normal.iter().enumerate() {
            if !c.is_zero() {
                mask |= 1 << i;
            }
        }
        SupportMask {
            dim: self.dim,
            mask,
        }
    }

    pub fn is_skew(&self) -> bool {
        self.support().is_full()
    }

    pub fn is_canonical(&self) -> bool {
        self == &self.canonicalize()
    }

    /// Canonical representative of the same geometric hyperplane: the
    /// normal entries are integers with gcd 1, the first non-zero entry is
    /// positive, and the offset is whatever rational that scaling yields.
    pub fn canonicalize(&self) -> Hyperplane {
        let mut g = BigInt::zero();
        for c in &self.normal {
            g = g.gcd(c);
        }
        // g > 0 since the normal is non-zero.
        let mut normal: Vec<BigInt> = self.normal.iter().map(|c| c / &g).collect();
        let mut offset = &self.offset / BigRational::from_integer(g);
        let first = normal.iter().find(|c| !c.is_zero()).unwrap();
        if first.is_negative() {
            for c in &mut normal {
                *c = -std::mem::take(c);
            }
            offset = -offset;
        }
        Hyperplane {
            dim: self.dim,
            normal,
            offset,
        }
    }

    /// Sign of `<a,v> - b` for every vertex, indexed by vertex bitmask.
    ///
    /// Computed incrementally along a Gray-code walk of the cube, with an
    /// i128 fast path when all scaled coefficients fit.
    pub fn sign_table(&self) -> Result<Vec<i8>, GeometryError> {
        check_dim(self.dim)?;
        let n = self.dim;
        let size = 1usize << n;
        let q = self.offset.denom();
        let p = self.offset.numer();

        // Track t = q * <a,v> and compare against p; q > 0 keeps signs.
        let step: Vec<BigInt> = self.normal.iter().map(|a| a * q).collect();

        let mut signs = vec![0i8; size];
        let fits = |x: &BigInt| i64::try_from(x).is_ok();
        if step.iter().all(fits) && fits(p) {
            let step: Vec<i128> = step.iter().map(|x| i64::try_from(x).unwrap() as i128).collect();
            let p = i64::try_from(p).unwrap() as i128;
            let mut acc: i128 = 0;
            let mut v = 0usize;
            signs[0] = sign_i128(acc - p);
            for k in 1..size {
                let bit = k.trailing_zeros() as usize;
                v ^= 1 << bit;
                if v >> bit & 1 == 1 {
                    acc += step[bit];
                } else {
                    acc -= step[bit];
                }
                signs[v] = sign_i128(acc - p);
            }
        } else {
            let mut acc = BigInt::zero();
            let mut v = 0usize;
            signs[0] = sign_big(&acc, p);
            for k in 1..size {
                let bit = k.trailing_zeros() as usize;
                v ^= 1 << bit;
                if v >> bit & 1 == 1 {
                    acc += &step[bit];
                } else {
                    acc -= &step[bit];
                }
                signs[v] = sign_big(&acc, p);
            }
        }
        Ok(signs)
    }

    /// Vertices contained in the hyperplane, as a bitset.
    pub fn covered_set(&self) -> Result<VertexSet, GeometryError> {
        let signs = self.sign_table()?;
        let mut set = VertexSet::empty(self.dim)?;
        for (v, &s) in signs.iter().enumerate() {
            if s == 0 {
                set.bits.insert(v);
            }
        }
        Ok(set)
    }

    /// Edges sliced by the hyperplane, as a bitset.
    pub fn sliced_set(&self) -> Result<EdgeSet, GeometryError> {
        let signs = self.sign_table()?;
        let n = self.dim;
        let half = 1usize << (n - 1);
        let mut set = EdgeSet::empty(n)?;
        for d in 0..n {
            let lowmask = (1usize << d) - 1;
            for rank in 0..half {
                let base = (rank & lowmask) | (rank >> d) << (d + 1);
                let s0 = signs[base];
                let s1 = signs[base | 1 << d];
                if s0 * s1 < 0 {
                    set.bits.insert(d * half + rank);
                }
            }
        }
        Ok(set)
    }
}

fn sign_i128(x: i128) -> i8 {
    match x.cmp(&0) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

fn sign_big(acc: &BigInt, p: &BigInt) -> i8 {
    match acc.cmp(p) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    }
}

impl std::fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.normal.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            write!(f, "x{}", i + 1)?;
            first = false;
        }
        write!(f, " = {}", self.offset)
    }
}
