//! Constructive reduction from bounded-coefficient slicing families to
//! nondegenerate covers: each plane <a,x> = b with a in the C-box expands
//! to the 2C integer-offset planes <a,x> = floor(b) + z, z = -(C-1)..C.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::family::{Family, Verdict};
use crate::geometry::{GeometryError, Hyperplane};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("C must be a positive integer")]
    BadBox,
    #[error("plane `{plane}` has a normal entry outside [-{c}, {c}]")]
    OutOfBox { plane: String, c: u32 },
    #[error("input is not a slicing family; edge (base {base:#b}, direction {direction}) is unsliced")]
    NotSlicing { base: u32, direction: usize },
}

/// Exact floor of a rational number.
pub fn floor_rational(b: &BigRational) -> BigInt {
    b.floor().to_integer()
}

/// One plane's expansion: the 2C planes sharing its normal with offsets
/// floor(b) + z for z = -(C-1)..C, in increasing z order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionRecord {
    pub source: Hyperplane,
    pub produced: Vec<Hyperplane>,
    pub c: u32,
}

fn check_box(h: &Hyperplane, c: u32) -> Result<(), ReductionError> {
    let bound = BigInt::from(c);
    for entry in h.normal() {
        if entry.abs() > bound {
            return Err(ReductionError::OutOfBox {
                plane: h.to_string(),
                c,
            });
        }
    }
    Ok(())
}

/// Expands a single C-box plane. The input is canonicalized first; the box
/// check applies to the canonical normal.
pub fn expand_hyperplane(h: &Hyperplane, c: u32) -> Result<ExpansionRecord, ReductionError> {
    if c == 0 {
        return Err(ReductionError::BadBox);
    }
    let h = h.canonicalize();
    check_box(&h, c)?;
    let base = floor_rational(h.offset());
    let mut produced = Vec::with_capacity(2 * c as usize);
    for z in -(c as i64 - 1)..=c as i64 {
        let offset = BigRational::from_integer(&base + BigInt::from(z));
        produced.push(Hyperplane::new(h.normal().to_vec(), offset)?);
    }
    Ok(ExpansionRecord {
        source: h,
        produced,
        c,
    })
}

/// Reduces a C-box slicing family to a nondegenerate cover by expanding
/// every plane and taking the deduplicated union. The slicing precondition
/// is checked; the output size is at most 2C times the input size.
pub fn reduce_slicing_to_cover(f: &Family, c: u32) -> Result<Family, ReductionError> {
    if c == 0 {
        return Err(ReductionError::BadBox);
    }
    for h in f.planes() {
        check_box(h, c)?;
    }
    if let Verdict::Fail(e) = f.is_slicing_family()? {
        return Err(ReductionError::NotSlicing {
            base: e.base().bits(),
            direction: e.direction(),
        });
    }
    let mut out = Family::empty(f.dim());
    for h in f.planes() {
        for p in expand_hyperplane(h, c)?.produced {
            out.push(p).expect("dimension preserved");
        }
    }
    debug_assert!(out.len() <= 2 * c as usize * f.len());
    Ok(out)
}

/// Re-checks the proof's per-edge certificate for a C-box slicing family:
/// for each edge, some plane slices it, and for that plane the normal entry
/// in the edge direction is non-zero with |a_i| <= C and |<a,v> - b| < C at
/// both endpoints.
pub fn check_edge_certificates(f: &Family, c: u32) -> Result<(), ReductionError> {
    if c == 0 {
        return Err(ReductionError::BadBox);
    }
    for h in f.planes() {
        check_box(h, c)?;
    }
    let bound = BigRational::from_integer(BigInt::from(c));
    for e in crate::geometry::all_edges(f.dim()) {
        let mut found = false;
        for h in f.planes() {
            if h.slices(&e)? {
                let (v, w) = e.endpoints();
                let x = h.eval(&v)?;
                let y = h.eval(&w)?;
                let a_i = &h.normal()[e.direction() - 1];
                if a_i.is_zero() || x.abs() >= bound || y.abs() >= bound {
                    return Err(ReductionError::NotSlicing {
                        base: e.base().bits(),
                        direction: e.direction(),
                    });
                }
                found = true;
                break;
            }
        }
        if !found {
            return Err(ReductionError::NotSlicing {
                base: e.base().bits(),
                direction: e.direction(),
            });
        }
    }
    Ok(())
}
