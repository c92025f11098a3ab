//! Candidate-hyperplane enumeration for the exact searches.
//!
//! Two candidate spaces are used:
//!
//! * **Sections** (`enumerate_sections`): for every linearly independent
//!   subset of cube vertices, one hyperplane containing them all, obtained
//!   by solving `<a,v> = 1` (planes avoiding the origin) or `<a,v> = 0`
//!   (planes through the origin) exactly. Any hyperplane's vertex section
//!   is contained in the section of the candidate generated from one of its
//!   bases, so minimum plain/punctured cover sizes over this space are
//!   exact, with no coefficient bound.
//!
//! * **C-box planes** (`enumerate_box_hyperplanes`): all canonical normals
//!   in `[-C, C]^n` with offsets at half-integer granularity. Since `<a,v>`
//!   is an integer, containment patterns only occur at integer offsets and
//!   strict-sign patterns are constant between consecutive integers, so
//!   these representatives exhaust every behavior within the box.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::geometry::{EdgeSet, GeometryError, Hyperplane, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerationError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("section enumeration supports n <= {max}, got {got}")]
    DimTooLarge { max: usize, got: usize },
    #[error("box enumeration budget exceeded: {0} candidate normals")]
    BudgetExceeded(u64),
    #[error("C must be a positive integer")]
    BadBox,
}

/// Ceiling for section enumeration (subset count grows as C(2^n, n)).
pub const SECTION_DIM_LIMIT: usize = 5;

/// Ceiling on raw candidate normal count for box enumeration.
pub const BOX_BUDGET: u64 = 2_000_000;

/// What a candidate plane does to the cube, in the coordinates the search
/// cares about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coverage {
    Vertices(VertexSet),
    Edges(EdgeSet),
    /// Bit `v * n + (i-1)` set iff the plane passes through vertex `v` with
    /// a non-zero normal entry in direction `i`.
    VertexDirectionPairs(u128),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub plane: Hyperplane,
    pub covered: Coverage,
}

/// Behavior a box candidate is deduplicated by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxBehavior {
    /// Covered vertex set (plain and skew cover modes).
    CoveredVertices,
    /// Covered vertices and support (nondegenerate mode pair masks).
    VertexDirectionPairs,
    /// Sliced edge set (slicing mode).
    SlicedEdges,
}

fn rat(i: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(i))
}

/// Solves `M x = rhs` exactly by Gauss-Jordan elimination.
/// Returns `None` if the rows are linearly dependent; otherwise the
/// particular solution with all free variables set to zero.
#[allow(clippy::needless_range_loop)] // double-indexing one matrix
fn solve_particular(
    rows: &[Vec<BigRational>],
    rhs: &[BigRational],
) -> Option<Vec<BigRational>> {
    let m = rows.len();
    if m == 0 {
        return Some(Vec::new());
    }
    let n = rows[0].len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(m);
    let mut col = 0;
    for r in 0..m {
        // find a pivot for row r
        let mut found = None;
        while col < n {
            if let Some(k) = (r..m).find(|&k| !a[k][col].is_zero()) {
                found = Some(k);
                break;
            }
            col += 1;
        }
        let k = found?; // dependent rows: no pivot left for this row
        a.swap(r, k);
        let inv = a[r][col].recip();
        for c in col..=n {
            a[r][c] = &a[r][c] * &inv;
        }
        for k in 0..m {
            if k != r && !a[k][col].is_zero() {
                let factor = a[k][col].clone();
                for c in col..=n {
                    let sub = &a[r][c] * &factor;
                    a[k][c] = &a[k][c] - sub;
                }
            }
        }
        pivots.push(col);
        col += 1;
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = a[r][n].clone();
    }
    Some(x)
}

/// A non-zero vector orthogonal to all rows (first free variable set to 1),
/// or `None` when the rows span the whole space or are dependent.
#[allow(clippy::needless_range_loop)] // double-indexing one matrix
fn null_space_vector(rows: &[Vec<BigRational>], n: usize) -> Option<Vec<BigRational>> {
    if rows.is_empty() {
        let mut x = vec![BigRational::zero(); n];
        x[0] = BigRational::one();
        return Some(x);
    }
    // Row-reduce and express pivot variables in terms of the first free one.
    let m = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut col = 0;
    for r in 0..m {
        let mut found = None;
        while col < n {
            if let Some(k) = (r..m).find(|&k| !a[k][col].is_zero()) {
                found = Some(k);
                break;
            }
            col += 1;
        }
        let k = found?;
        a.swap(r, k);
        let inv = a[r][col].recip();
        for c in col..n {
            a[r][c] = &a[r][c] * &inv;
        }
        for k in 0..m {
            if k != r && !a[k][col].is_zero() {
                let factor = a[k][col].clone();
                for c in col..n {
                    let sub = &a[r][c] * &factor;
                    a[k][c] = &a[k][c] - sub;
                }
            }
        }
        pivots.push(col);
        col += 1;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut x = vec![BigRational::zero(); n];
    x[free] = BigRational::one();
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = -a[r][free].clone();
    }
    Some(x)
}

fn vertex_row(bits: u32, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|i| if bits >> i & 1 == 1 { rat(1) } else { rat(0) })
        .collect()
}

/// Enumerates section candidates for plain or punctured cover search.
///
/// With `avoid_origin`, only hyperplanes with `<a,x> = 1` normalization are
/// produced (none passes through the origin); otherwise through-origin
/// planes are enumerated as well.
pub fn enumerate_sections(
    n: usize,
    avoid_origin: bool,
) -> Result<Vec<Candidate>, EnumerationError> {
    if n > SECTION_DIM_LIMIT {
        return Err(EnumerationError::DimTooLarge {
            max: SECTION_DIM_LIMIT,
            got: n,
        });
    }
    let nonzero: Vec<u32> = (1..1u32 << n).collect();
    let mut planes: Vec<Hyperplane> = Vec::new();

    // Planes avoiding the origin: <a, v> = 1 on each independent subset.
    let one = rat(1);
    independent_subsets(&nonzero, n, n, &mut |subset| {
        let rows: Vec<Vec<BigRational>> =
            subset.iter().map(|&b| vertex_row(b, n)).collect();
        let rhs = vec![one.clone(); rows.len()];
        if let Some(a) = solve_particular(&rows, &rhs) {
            if !a.iter().all(Zero::is_zero) {
                planes.push(
                    Hyperplane::from_rational(a, one.clone())
                        .expect("non-zero solution")
                        .canonicalize(),
                );
            }
        }
    });

    if !avoid_origin {
        // Planes through the origin: a non-zero normal orthogonal to each
        // independent subset of size < n.
        independent_subsets(&nonzero, n, n - 1, &mut |subset| {
            let rows: Vec<Vec<BigRational>> =
                subset.iter().map(|&b| vertex_row(b, n)).collect();
            if let Some(a) = null_space_vector(&rows, n) {
                planes.push(
                    Hyperplane::from_rational(a, BigRational::zero())
                        .expect("non-zero null vector")
                        .canonicalize(),
                );
            }
        });
        // the empty subset: any plane through the origin, e.g. x1 = 0
        let mut e1 = vec![0i64; n];
        e1[0] = 1;
        planes.push(Hyperplane::from_ints(&e1, 0, 1));
    }

    let mut out: Vec<Candidate> = Vec::new();
    let mut seen: std::collections::HashMap<Vec<u32>, usize> = std::collections::HashMap::new();
    for plane in planes {
        let covered = plane.covered_set()?;
        debug_assert!(!avoid_origin || !covered.contains(crate::geometry::Vertex::new(n, 0)?));
        let key: Vec<u32> = covered.iter().map(|v| v.bits()).collect();
        match seen.get(&key) {
            Some(&idx) => {
                if plane < out[idx].plane {
                    out[idx].plane = plane;
                }
            }
            None => {
                seen.insert(key, out.len());
                out.push(Candidate {
                    plane,
                    covered: Coverage::Vertices(covered),
                });
            }
        }
    }
    out.sort_by(|a, b| a.plane.cmp(&b.plane));
    Ok(out)
}

/// Calls `f` on every linearly independent subset of `pool` (as 0/1 vertex
/// vectors) of size 1..=max_size, including the empty subset only through
/// the caller's own handling.
fn independent_subsets(pool: &[u32], n: usize, max_size: usize, f: &mut impl FnMut(&[u32])) {
    fn rank_of(rows: &[Vec<BigRational>], candidate: Vec<BigRational>) -> Option<Vec<BigRational>> {
        // reduce candidate against current echelon rows; Some(residual) if
        // independent
        let mut v = candidate;
        for row in rows.iter() {
            let lead = row.iter().position(|x| !x.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let factor = &v[lead] / &row[lead];
                for (a, b) in v.iter_mut().zip(row) {
                    let sub = b * &factor;
                    *a = &*a - sub;
                }
            }
        }
        if v.iter().all(Zero::is_zero) {
            None
        } else {
            Some(v)
        }
    }

    fn rec(
        pool: &[u32],
        n: usize,
        max_size: usize,
        start: usize,
        echelon: &mut Vec<Vec<BigRational>>,
        chosen: &mut Vec<u32>,
        f: &mut impl FnMut(&[u32]),
    ) {
        if !chosen.is_empty() {
            f(chosen);
        }
        if chosen.len() == max_size {
            return;
        }
        for k in start..pool.len() {
            let row = vertex_row(pool[k], n);
            if let Some(residual) = rank_of(echelon, row) {
                echelon.push(residual);
                chosen.push(pool[k]);
                rec(pool, n, max_size, k + 1, echelon, chosen, f);
                chosen.pop();
                echelon.pop();
            }
        }
    }

    if max_size == 0 {
        return;
    }
    rec(pool, n, max_size, 0, &mut Vec::new(), &mut Vec::new(), f);
}

/// Enumerates behavior-distinct candidates with canonical normals in the
/// C-box and half-integer offsets, deduplicated by behavior with dominated
/// candidates removed.
pub fn enumerate_box_hyperplanes(
    n: usize,
    c: u32,
    behavior: BoxBehavior,
) -> Result<Vec<Candidate>, EnumerationError> {
    if c == 0 {
        return Err(EnumerationError::BadBox);
    }
    let raw = (2 * c as u64 + 1).pow(n as u32);
    if raw > BOX_BUDGET {
        return Err(EnumerationError::BudgetExceeded(raw));
    }

    let mut normals: Vec<Vec<i64>> = Vec::new();
    let mut current = vec![-(c as i64); n];
    loop {
        if is_canonical_normal(&current) {
            normals.push(current.clone());
        }
        // odometer over [-C, C]^n
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            current[i] += 1;
            if current[i] <= c as i64 {
                break;
            }
            current[i] = -(c as i64);
            i += 1;
        }
        if i == n {
            break;
        }
    }

    let bound = (c as i64) * n as i64;
    let mut out: Vec<Candidate> = Vec::new();
    let mut seen: std::collections::HashMap<Vec<u64>, usize> = std::collections::HashMap::new();
    for normal in &normals {
        for k in -2 * bound..=2 * bound {
            // offset k/2; integer offsets for containment behaviors,
            // half-integers matter only for slicing
            if matches!(
                behavior,
                BoxBehavior::CoveredVertices | BoxBehavior::VertexDirectionPairs
            ) && k % 2 != 0
            {
                continue;
            }
            let plane = Hyperplane::new(
                normal.iter().map(|&x| BigInt::from(x)).collect(),
                BigRational::new(BigInt::from(k), BigInt::from(2)),
            )
            .expect("non-zero normal");
            let (covered, key) = match behavior {
                BoxBehavior::CoveredVertices => {
                    let s = plane.covered_set()?;
                    if s.is_empty() {
                        continue;
                    }
                    let key = coverage_key_vertices(&s);
                    (Coverage::Vertices(s), key)
                }
                BoxBehavior::VertexDirectionPairs => {
                    let s = plane.covered_set()?;
                    let supp = plane.support().mask();
                    let mut pairs = 0u128;
                    for v in s.iter() {
                        for i in 0..n {
                            if supp >> i & 1 == 1 {
                                pairs |= 1 << (v.bits() as usize * n + i);
                            }
                        }
                    }
                    if pairs == 0 {
                        continue;
                    }
                    let key = vec![pairs as u64, (pairs >> 64) as u64, u64::MAX];
                    (Coverage::VertexDirectionPairs(pairs), key)
                }
                BoxBehavior::SlicedEdges => {
                    let s = plane.sliced_set()?;
                    if s.is_empty() {
                        continue;
                    }
                    let key = coverage_key_edges(&s);
                    (Coverage::Edges(s), key)
                }
            };
            match seen.get(&key) {
                Some(&idx) => {
                    if plane < out[idx].plane {
                        out[idx].plane = plane;
                    }
                }
                None => {
                    seen.insert(key, out.len());
                    out.push(Candidate { plane, covered });
                }
            }
        }
    }
    out.sort_by(|a, b| a.plane.cmp(&b.plane));
    Ok(out)
}

fn is_canonical_normal(a: &[i64]) -> bool {
    let mut g = 0i64;
    for &x in a {
        g = gcd_i64(g, x.abs());
    }
    if g != 1 {
        return false;
    }
    a.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

fn gcd_i64(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn coverage_key_vertices(s: &VertexSet) -> Vec<u64> {
    let mut key: Vec<u64> = s.iter().map(|v| v.bits() as u64).collect();
    key.push(u64::MAX - 1);
    key
}

fn coverage_key_edges(s: &EdgeSet) -> Vec<u64> {
    let mut key: Vec<u64> = s.iter().map(|e| e.index() as u64).collect();
    key.push(u64::MAX - 2);
    key
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vertex;

    #[test]
    fn particular_solution_exact() {
        // x + y = 1, x - y = 1  =>  x = 1, y = 0
        let rows = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let rhs = vec![rat(1), rat(1)];
        assert_eq!(solve_particular(&rows, &rhs).unwrap(), vec![rat(1), rat(0)]);

        // dependent rows rejected
        let rows = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        assert!(solve_particular(&rows, &rhs).is_none());
    }

    #[test]
    fn sections_avoiding_origin_n2() {
        let cands = enumerate_sections(2, true).unwrap();
        let origin = Vertex::new(2, 0).unwrap();
        for cand in &cands {
            let Coverage::Vertices(s) = &cand.covered else {
                panic!()
            };
            assert!(!s.contains(origin));
            assert_eq!(s, &cand.plane.covered_set().unwrap());
        }
        // x1=1, x2=1, x1+x2=1 behaviors must all appear
        for target in [
            Hyperplane::from_ints(&[1, 0], 1, 1),
            Hyperplane::from_ints(&[0, 1], 1, 1),
            Hyperplane::from_ints(&[1, 1], 1, 1),
        ] {
            let want = target.covered_set().unwrap();
            assert!(
                cands.iter().any(|c| match &c.covered {
                    Coverage::Vertices(s) => want.is_subset_of(s),
                    _ => false,
                }),
                "no candidate covers the section of {target}"
            );
        }
    }

    #[test]
    fn sections_with_origin_n2() {
        let cands = enumerate_sections(2, false).unwrap();
        let x1_zero = Hyperplane::from_ints(&[1, 0], 0, 1).covered_set().unwrap();
        assert!(cands.iter().any(|c| match &c.covered {
            Coverage::Vertices(s) => x1_zero.is_subset_of(s),
            _ => false,
        }));
    }

    #[test]
    fn sections_dim_ceiling() {
        assert!(matches!(
            enumerate_sections(6, true),
            Err(EnumerationError::DimTooLarge { .. })
        ));
    }

    #[test]
    fn box_slicing_candidates_n2_c1() {
        let cands = enumerate_box_hyperplanes(2, 1, BoxBehavior::SlicedEdges).unwrap();
        // the axis plane behavior must appear
        let axis = Hyperplane::from_ints(&[1, 0], 1, 2).sliced_set().unwrap();
        assert!(cands.iter().any(|c| matches!(&c.covered,
            Coverage::Edges(s) if s == &axis)));
        // no C=1 candidate slices more than 2 of the 4 edges
        for c in &cands {
            let Coverage::Edges(s) = &c.covered else { panic!() };
            assert!(s.count() <= 2, "{} slices {}", c.plane, s.count());
        }
        // regression: behavior-distinct candidate count for n=2, C=1
        assert_eq!(cands.len(), 6);
    }

    #[test]
    fn box_candidates_recomputable() {
        let cands = enumerate_box_hyperplanes(2, 2, BoxBehavior::CoveredVertices).unwrap();
        for c in &cands {
            let Coverage::Vertices(s) = &c.covered else { panic!() };
            assert_eq!(s, &c.plane.covered_set().unwrap());
        }
    }
}
