//! Randomized family generators for property suites: skew covers built by
//! rejection, and C-box slicing families completed with axis planes.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::family::Family;
use crate::geometry::{Hyperplane, VertexSet};

/// A random skew cover: repeatedly pick an uncovered vertex, draw a random
/// all-non-zero normal, and put a plane with that normal through the
/// vertex. Every plane is skew, so the result is a skew (hence
/// nondegenerate) cover.
pub fn random_skew_cover(n: usize, rng: &mut impl Rng) -> Family {
    let mut family = Family::empty(n);
    let mut covered = VertexSet::empty(n).expect("dim within ceiling");
    while let Some(v) = covered.first_missing() {
        let normal: Vec<BigInt> = (0..n)
            .map(|_| {
                let mut x = 0i64;
                while x == 0 {
                    x = rng.gen_range(-3..=3);
                }
                BigInt::from(x)
            })
            .collect();
        let through: BigInt = (0..n)
            .filter(|&i| v.bits() >> i & 1 == 1)
            .map(|i| normal[i].clone())
            .sum();
        let plane = Hyperplane::new(normal, BigRational::from_integer(through))
            .expect("non-zero normal");
        covered.union_with(&plane.covered_set().expect("dim within ceiling"));
        family.push(plane).expect("dim matches");
    }
    family
}

/// A random slicing family with canonical normals in the C-box: a handful
/// of random box planes, then axis planes x_i = 1/2 for any direction whose
/// edges are still unsliced.
pub fn random_slicing_family(n: usize, c: u32, rng: &mut impl Rng) -> Family {
    let mut family = Family::empty(n);
    let extras = rng.gen_range(0..=n);
    for _ in 0..extras {
        let normal: Vec<BigInt> = loop {
            let raw: Vec<i64> = (0..n)
                .map(|_| rng.gen_range(-(c as i64)..=c as i64))
                .collect();
            if raw.iter().any(|&x| x != 0) {
                break raw.into_iter().map(BigInt::from).collect();
            }
        };
        let bound = 2 * c as i64 * n as i64;
        let offset = BigRational::new(
            BigInt::from(rng.gen_range(-bound..=bound)),
            BigInt::from(2),
        );
        let plane = Hyperplane::new(normal, offset).expect("non-zero normal");
        // canonical normal must stay in the box (gcd division only shrinks)
        family.push(plane).expect("dim matches");
    }
    let sliced = family.sliced_union().expect("dim within ceiling");
    let mut missing_dirs = vec![false; n];
    for e in crate::geometry::all_edges(n) {
        if !sliced.contains(e) {
            missing_dirs[e.direction() - 1] = true;
        }
    }
    for (i, &missing) in missing_dirs.iter().enumerate() {
        if missing {
            let mut normal = vec![0i64; n];
            normal[i] = 1;
            family
                .push(Hyperplane::from_ints(&normal, 1, 2))
                .expect("dim matches");
        }
    }
    family
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn skew_covers_are_skew_covers() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=8 {
            for _ in 0..5 {
                let f = random_skew_cover(n, &mut rng);
                assert!(f.is_skew_cover().unwrap(), "n = {n}");
                assert!(f.is_nondegenerate_cover().unwrap().passed());
            }
        }
    }

    #[test]
    fn slicing_families_slice_and_stay_in_box() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in 1..=6 {
            for c in 1..=3u32 {
                let f = random_slicing_family(n, c, &mut rng);
                assert!(f.is_slicing_family().unwrap().passed());
                for h in f.planes() {
                    for entry in h.normal() {
                        assert!(entry.abs() <= BigInt::from(c));
                    }
                }
            }
        }
    }

    #[test]
    fn vertex_through_construction_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let f = random_skew_cover(5, &mut rng);
        // the union of covered sets is the full cube by construction
        assert!(f.is_cover().unwrap().passed());
    }
}
