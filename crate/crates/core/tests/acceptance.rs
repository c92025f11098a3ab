//! Acceptance gate: one test per headline guarantee, each printing a
//! single pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; any failure fails the build either way.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cubecover_core::constructions::{axis_slicing_family, tight_cover, trivial_cover};
use cubecover_core::corpus::{random_skew_cover, random_slicing_family};
use cubecover_core::geometry::Hyperplane;
use cubecover_core::reduction::reduce_slicing_to_cover;
use cubecover_core::search::{
    min_cover, min_set_cover, min_set_cover_with, min_slicing, verify_alon_furedi, Mode,
    SolverOptions,
};
use cubecover_core::witness::run_pipeline;
use cubecover_core::Family;

fn report(name: &str, started: Instant, budget_secs: u64) {
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < budget_secs,
        "{name}: exceeded {budget_secs}s budget ({elapsed:?})"
    );
    println!("acceptance: {name} ... pass ({elapsed:?})");
}

/// 1. The tight construction yields n planes passing all three cover
///    predicates for every n in 2..16.
#[test]
fn tight_construction_all_predicates() {
    let started = Instant::now();
    for n in 2..16 {
        let f = tight_cover(n).unwrap();
        assert_eq!(f.len(), n);
        assert!(f.is_cover().unwrap().passed(), "n={n}");
        assert!(f.is_skew_cover().unwrap(), "n={n}");
        assert!(f.is_nondegenerate_cover().unwrap().passed(), "n={n}");
    }
    report("tight construction, n=2..16", started, 1);
}

/// 2. The lower-bound pipeline succeeds on a corpus of 100+ nondegenerate
///    covers with all claims verified exhaustively and |H| >= ceil(n/2).
#[test]
fn lower_bound_pipeline_corpus() {
    let started = Instant::now();
    let mut corpus: Vec<Family> = Vec::new();
    for n in 2..=12 {
        corpus.push(tight_cover(n).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for n in 2..=8 {
        for c in 1..=2 {
            for _ in 0..3 {
                let slicing = random_slicing_family(n, c, &mut rng);
                corpus.push(reduce_slicing_to_cover(&slicing, c).unwrap());
            }
        }
    }
    while corpus.len() < 100 {
        let n = rng.gen_range(2..=9);
        corpus.push(random_skew_cover(n, &mut rng));
    }
    assert!(corpus.len() >= 100);
    for f in &corpus {
        let n = f.dim();
        let r = run_pipeline(f).unwrap_or_else(|e| panic!("n={n}, |F|={}: {e}", f.len()));
        assert!(r.claim_origin_separation_ok && r.claim_subcube_cover_ok);
        assert!(r.s_mask.count_ones() as usize >= n.div_ceil(2));
        assert!(r.family_size >= n.div_ceil(2));
        assert!(r.bound_satisfied);
    }
    report(
        &format!("lower-bound pipeline on {} covers", corpus.len()),
        started,
        30,
    );
}

/// 3. The punctured-cube minimum equals s for s = 2, 3, 4 by certified
///    section-enumeration search.
#[test]
fn punctured_cube_minimum_is_dimension() {
    let started = Instant::now();
    for s in 2..=4 {
        assert!(verify_alon_furedi(s).unwrap(), "s={s}");
    }
    report("punctured-cube minimum, s=2..4", started, 300);
}

/// 4. Reducing the axis slicing family at C=1 gives exactly the 2n planes
///    {x_i = 0, x_i = 1}; random box-C slicing families always reduce to
///    nondegenerate covers within the 2C|H| size bound.
#[test]
fn slicing_reduction_contract() {
    let started = Instant::now();
    for n in 1..=8 {
        let axis = axis_slicing_family(n);
        let reduced = reduce_slicing_to_cover(&axis, 1).unwrap();
        assert_eq!(reduced.len(), 2 * n, "n={n}");
        let mut expected: Vec<Hyperplane> = Vec::new();
        for i in 0..n {
            let mut a = vec![0i64; n];
            a[i] = 1;
            expected.push(Hyperplane::from_ints(&a, 0, 1));
            expected.push(Hyperplane::from_ints(&a, 1, 1));
        }
        let expected = Family::new(n, expected).unwrap();
        assert_eq!(reduced, expected, "n={n}");
        if n >= 2 {
            assert!(reduced.is_nondegenerate_cover().unwrap().passed());
        }
        // equality case of |H'| <= 2C|H|
        assert_eq!(reduced.len(), 2 * axis.len());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xface);
    for _ in 0..40 {
        let n = rng.gen_range(2..=8);
        let c = rng.gen_range(1..=3u32);
        let f = random_slicing_family(n, c, &mut rng);
        let reduced = reduce_slicing_to_cover(&f, c).unwrap();
        assert!(reduced.is_nondegenerate_cover().unwrap().passed());
        assert!(reduced.len() <= 2 * c as usize * f.len());
        // the chain ceil(n/2) <= |H'| <= 2C|H|
        assert!(n.div_ceil(2) <= 2 * c as usize * f.len());
    }
    report("slicing-to-cover reduction", started, 30);
}

/// 5. The trivial 2-plane cover passes is_cover but fails nondegeneracy
///    with a violation that re-checks, for all n in 2..16.
#[test]
fn trivial_cover_boundary() {
    let started = Instant::now();
    for n in 2..16 {
        let f = trivial_cover(n);
        assert!(f.is_cover().unwrap().passed(), "n={n}");
        let verdict = f.is_nondegenerate_cover().unwrap();
        let violation = verdict.witness().unwrap_or_else(|| panic!("n={n}"));
        assert!(f.violation_holds(violation).unwrap(), "n={n}");
    }
    report("trivial-cover boundary, n=2..16", started, 1);
}

/// 6. Exact minima: plain covers need 2 planes for n = 1..5; minimum
///    slicing and nondegenerate-cover sizes stay inside the proven windows.
#[test]
fn exact_minima_windows() {
    let started = Instant::now();
    for n in 1..=5 {
        assert_eq!(min_cover(n, Mode::PlainCover, None).unwrap().minimum, 2);
    }
    assert_eq!(min_slicing(2, 1).unwrap().minimum, 2);
    for n in 1..=4 {
        for c in 1..=2 {
            let r = min_slicing(n, c).unwrap();
            assert!(r.minimum >= n.div_ceil(4 * c as usize), "n={n} C={c}");
            assert!(r.minimum <= n, "n={n} C={c}");
            assert!(r.optimal.is_slicing_family().unwrap().passed());
        }
    }
    for n in 2..=4 {
        let c = (n - 1).max(1) as u32;
        let r = min_cover(n, Mode::NondegenerateCover, Some(c)).unwrap();
        assert!(r.minimum >= n.div_ceil(2), "n={n}");
        assert!(r.minimum <= n, "n={n}");
        assert!(r.optimal.is_nondegenerate_cover().unwrap().passed());
    }
    report("exact minima inside proven windows", started, 600);
}

/// 7. The branch-and-bound solver matches exhaustive subset search on 200
///    random instances and is invariant under worker count.
#[test]
fn solver_matches_exhaustive_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0de);
    for case in 0..200 {
        let universe_len = rng.gen_range(1..=16usize);
        let universe: u128 = (1 << universe_len) - 1;
        let n_sets = rng.gen_range(1..=12usize);
        let sets: Vec<u128> = (0..n_sets)
            .map(|_| rng.gen::<u128>() & universe)
            .collect();

        let expected = exhaustive_minimum(&sets, universe);
        let solved = min_set_cover(universe_len, &sets);
        match expected {
            None => assert!(solved.is_err(), "case {case}: should be infeasible"),
            Some(min) => {
                let solution = solved.unwrap_or_else(|e| panic!("case {case}: {e}"));
                assert_eq!(solution.minimum, min, "case {case}");
                let union = solution.chosen.iter().fold(0u128, |m, &k| m | sets[k]);
                assert_eq!(union & universe, universe, "case {case}");

                // worker-count invariance, including the serial path
                for threads in [1usize, 2, 8] {
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(threads)
                        .build()
                        .unwrap();
                    let again = pool
                        .install(|| min_set_cover(universe_len, &sets))
                        .unwrap();
                    assert_eq!(again, solution, "case {case}, {threads} threads");
                }
                let serial = min_set_cover_with(
                    universe_len,
                    &sets,
                    SolverOptions {
                        parallel: false,
                        ..SolverOptions::default()
                    },
                )
                .unwrap();
                assert_eq!(serial, solution, "case {case}, serial");
            }
        }
    }
    report("solver vs exhaustive oracle, 200 instances", started, 60);
}

fn exhaustive_minimum(sets: &[u128], universe: u128) -> Option<usize> {
    if sets.iter().fold(0u128, |m, &s| m | s) & universe != universe {
        return None;
    }
    (0..=sets.len()).find(|&size| covers_with(sets, 0, size, 0, universe))
}

fn covers_with(sets: &[u128], start: usize, left: usize, acc: u128, universe: u128) -> bool {
    if acc & universe == universe {
        return true;
    }
    if left == 0 {
        return false;
    }
    (start..sets.len()).any(|k| covers_with(sets, k + 1, left - 1, acc | sets[k], universe))
}
