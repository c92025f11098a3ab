//! Generators for the explicit families used as fixtures and
//! upper-bound certificates.

use thiserror::Error;

use crate::family::Family;
use crate::geometry::Hyperplane;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("{name} requires n >= {min}, got {got}")]
    DimTooSmall {
        name: &'static str,
        min: usize,
        got: usize,
    },
}

/// The two planes x1 = 0 and x1 = 1. A cover of any dimension, never
/// nondegenerate for n >= 2.
pub fn trivial_cover(n: usize) -> Family {
    assert!(n >= 1);
    let mut normal = vec![0i64; n];
    normal[0] = 1;
    Family::new(
        n,
        [
            Hyperplane::from_ints(&normal, 0, 1),
            Hyperplane::from_ints(&normal, 1, 1),
        ],
    )
    .unwrap()
}

/// The n-plane skew cover: x1 + ... + x_{n-1} - (n-1) x_n = 0 together with
/// the layer planes x1 + ... + x_n = t for t = 1..n-1.
pub fn tight_cover(n: usize) -> Result<Family, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::DimTooSmall {
            name: "tight_cover",
            min: 2,
            got: n,
        });
    }
    let mut skew = vec![1i64; n];
    skew[n - 1] = -((n - 1) as i64);
    let ones = vec![1i64; n];
    let mut planes = vec![Hyperplane::from_ints(&skew, 0, 1)];
    for t in 1..n {
        planes.push(Hyperplane::from_ints(&ones, t as i64, 1));
    }
    Ok(Family::new(n, planes).unwrap())
}

/// Baseline skew cover of size n+1: all layers x1 + ... + x_n = t, t = 0..n.
pub fn sum_layer_cover(n: usize) -> Family {
    assert!(n >= 1);
    let ones = vec![1i64; n];
    Family::new(
        n,
        (0..=n).map(|t| Hyperplane::from_ints(&ones, t as i64, 1)),
    )
    .unwrap()
}

/// The n planes x_i = 1/2; plane i slices exactly the direction-i edges.
pub fn axis_slicing_family(n: usize) -> Family {
    assert!(n >= 1);
    Family::new(
        n,
        (0..n).map(|i| {
            let mut normal = vec![0i64; n];
            normal[i] = 1;
            Hyperplane::from_ints(&normal, 1, 2)
        }),
    )
    .unwrap()
}
