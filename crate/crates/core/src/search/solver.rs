//! Exact minimum set cover by branch-and-bound.
//!
//! Universes are limited to 128 elements and represented as `u128` masks;
//! every search mode in this crate stays well below that at desk scale.
//!
//! The solve runs in two phases. Phase one determines the exact minimum
//! cardinality (branching on the uncovered element with the fewest
//! candidates, greedy upper bound, coverage-ratio lower bound, candidate
//! exclusion, and a seen-mask memo for universes of at most 32 elements).
//! Phase two reconstructs the lexicographically least optimal solution by
//! forced-prefix feasibility checks, which makes the reported cover
//! independent of thread count and candidate exploration order.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("universe of {0} elements exceeds the 128-element solver ceiling")]
    UniverseTooLarge(usize),
    #[error("element {element} is not covered by any candidate")]
    Infeasible { element: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Remove candidates whose coverage is contained in another's.
    pub prune_dominated: bool,
    /// Explore top-level branches on the rayon pool.
    pub parallel: bool,
    /// Memoize visited coverage masks (universes of <= 32 elements only).
    pub memoize: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            prune_dominated: true,
            parallel: true,
            memoize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverSolution {
    pub minimum: usize,
    /// Indices into the caller's candidate list, strictly increasing;
    /// the lexicographically least among all minimum covers (restricted to
    /// non-dominated candidates when dominance pruning is on).
    pub chosen: Vec<usize>,
}

/// Exact minimum-cardinality set cover with default options.
pub fn min_set_cover(universe_len: usize, sets: &[u128]) -> Result<SetCoverSolution, SolverError> {
    min_set_cover_with(universe_len, sets, SolverOptions::default())
}

pub fn min_set_cover_with(
    universe_len: usize,
    sets: &[u128],
    opts: SolverOptions,
) -> Result<SetCoverSolution, SolverError> {
    if universe_len > 128 {
        return Err(SolverError::UniverseTooLarge(universe_len));
    }
    let universe: u128 = if universe_len == 128 {
        u128::MAX
    } else {
        (1u128 << universe_len) - 1
    };
    if universe == 0 {
        return Ok(SetCoverSolution {
            minimum: 0,
            chosen: Vec::new(),
        });
    }

    let mut union = 0u128;
    for s in sets {
        union |= s & universe;
    }
    if union != universe {
        return Err(SolverError::Infeasible {
            element: (!union & universe).trailing_zeros() as usize,
        });
    }

    // Active candidates: trimmed to the universe, optionally with dominated
    // ones removed (ties keep the smaller index).
    let trimmed: Vec<u128> = sets.iter().map(|s| s & universe).collect();
    let active: Vec<usize> = if opts.prune_dominated {
        (0..trimmed.len())
            .filter(|&i| {
                trimmed[i] != 0
                    && !(0..trimmed.len()).any(|j| {
                        j != i
                            && trimmed[i] & !trimmed[j] == 0
                            && (trimmed[i] != trimmed[j] || j < i)
                    })
            })
            .collect()
    } else {
        (0..trimmed.len()).filter(|&i| trimmed[i] != 0).collect()
    };
    let cover: Vec<u128> = active.iter().map(|&i| trimmed[i]).collect();

    let ctx = Ctx::new(universe, universe_len, cover, opts);
    let minimum = ctx.minimum_size();
    let chosen_active = ctx.lex_least(minimum);
    Ok(SetCoverSolution {
        minimum,
        chosen: chosen_active.into_iter().map(|i| active[i]).collect(),
    })
}

struct Ctx {
    universe: u128,
    sets: Vec<u128>,
    /// For each element, the candidates covering it (by descending coverage
    /// size, then index) — phase-one branch order.
    elem_cands: Vec<Vec<usize>>,
    /// Elements ordered by ascending candidate count (fail-first).
    elem_order: Vec<usize>,
    max_cover: usize,
    opts: SolverOptions,
}

impl Ctx {
    fn new(universe: u128, universe_len: usize, sets: Vec<u128>, opts: SolverOptions) -> Self {
        let mut elem_cands: Vec<Vec<usize>> = vec![Vec::new(); universe_len];
        for (i, s) in sets.iter().enumerate() {
            for (e, cands) in elem_cands.iter_mut().enumerate() {
                if s >> e & 1 == 1 {
                    cands.push(i);
                }
            }
        }
        let mut branch_order = elem_cands.clone();
        for list in &mut branch_order {
            list.sort_by_key(|&i| (usize::MAX - sets[i].count_ones() as usize, i));
        }
        let mut elem_order: Vec<usize> = (0..universe_len)
            .filter(|&e| universe >> e & 1 == 1)
            .collect();
        elem_order.sort_by_key(|&e| elem_cands[e].len());
        let max_cover = sets.iter().map(|s| s.count_ones() as usize).max().unwrap_or(1);
        Ctx {
            universe,
            sets,
            elem_cands: branch_order,
            elem_order,
            max_cover,
            opts,
        }
    }

    fn greedy_size(&self) -> usize {
        let mut covered = 0u128;
        let mut count = 0;
        while covered != self.universe {
            let best = self
                .sets
                .iter()
                .max_by_key(|s| (*s & !covered).count_ones())
                .unwrap();
            covered |= best;
            count += 1;
        }
        count
    }

    fn lower_bound(&self, covered: u128) -> usize {
        let remaining = (self.universe & !covered).count_ones() as usize;
        remaining.div_ceil(self.max_cover)
    }

    fn pick_element(&self, covered: u128) -> usize {
        *self
            .elem_order
            .iter()
            .find(|&&e| covered >> e & 1 == 0)
            .expect("some element uncovered")
    }

    fn minimum_size(&self) -> usize {
        let best = AtomicUsize::new(self.greedy_size());
        let e = self.pick_element(0);
        let cands = &self.elem_cands[e];
        let run = |k: usize| {
            let c = cands[k];
            let mut memo = Memo::new(self.universe.count_ones(), self.opts.memoize);
            self.descend(self.sets[c], 1, &cands[..k], &best, &mut memo);
        };
        if self.opts.parallel && cands.len() > 1 {
            (0..cands.len()).into_par_iter().for_each(run);
        } else {
            (0..cands.len()).for_each(run);
        }
        best.load(Ordering::SeqCst)
    }

    fn descend(
        &self,
        covered: u128,
        count: usize,
        banned: &[usize],
        best: &AtomicUsize,
        memo: &mut Memo,
    ) {
        if covered == self.universe {
            best.fetch_min(count, Ordering::SeqCst);
            return;
        }
        if count + self.lower_bound(covered) >= best.load(Ordering::Relaxed) {
            return;
        }
        if !memo.visit(covered, count) {
            return;
        }
        let e = self.pick_element(covered);
        let cands: Vec<usize> = self.elem_cands[e]
            .iter()
            .copied()
            .filter(|c| !banned.contains(c))
            .collect();
        for (k, &c) in cands.iter().enumerate() {
            let mut next_banned = banned.to_vec();
            next_banned.extend_from_slice(&cands[..k]);
            self.descend(covered | self.sets[c], count + 1, &next_banned, best, memo);
        }
    }

    /// Smallest index vector (ascending) among covers of size `minimum`.
    fn lex_least(&self, minimum: usize) -> Vec<usize> {
        let mut chosen = Vec::with_capacity(minimum);
        let mut covered = 0u128;
        let mut start = 0usize;
        while covered != self.universe {
            let budget = minimum - chosen.len();
            let i = (start..self.sets.len())
                .find(|&i| {
                    self.sets[i] & !covered != 0
                        && self.feasible(covered | self.sets[i], budget - 1, i + 1)
                })
                .expect("no completion of a provably optimal prefix");
            chosen.push(i);
            covered |= self.sets[i];
            start = i + 1;
        }
        chosen
    }

    /// Can the remainder be covered with `budget` candidates of index
    /// >= `min_idx`?
    fn feasible(&self, covered: u128, budget: usize, min_idx: usize) -> bool {
        if covered == self.universe {
            return true;
        }
        if budget == 0 || self.lower_bound(covered) > budget {
            return false;
        }
        let e = self.pick_element(covered);
        self.elem_cands[e]
            .iter()
            .filter(|&&c| c >= min_idx)
            .any(|&c| self.feasible(covered | self.sets[c], budget - 1, min_idx))
    }
}

struct Memo {
    table: Option<HashMap<u32, usize>>,
}

impl Memo {
    fn new(universe_bits: u32, enabled: bool) -> Self {
        Memo {
            table: (enabled && universe_bits <= 32).then(HashMap::new),
        }
    }

    /// Records reaching `covered` with `count` picks; false if an
    /// equal-or-cheaper visit already happened.
    fn visit(&mut self, covered: u128, count: usize) -> bool {
        let Some(table) = &mut self.table else {
            return true;
        };
        let key = covered as u32;
        match table.get_mut(&key) {
            Some(prev) if *prev <= count => false,
            Some(prev) => {
                *prev = count;
                true
            }
            None => {
                table.insert(key, count);
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(elems: &[usize]) -> u128 {
        elems.iter().fold(0, |m, &e| m | 1 << e)
    }

    #[test]
    fn tiny_examples() {
        // universe {0,1,2}, candidates {0,1},{1,2},{2}
        let sets = [mask(&[0, 1]), mask(&[1, 2]), mask(&[2])];
        let sol = min_set_cover(3, &sets).unwrap();
        assert_eq!(sol.minimum, 2);
        assert_eq!(sol.chosen, vec![0, 1]);

        let sol = min_set_cover(0, &[]).unwrap();
        assert_eq!(sol.minimum, 0);
        assert!(sol.chosen.is_empty());
    }

    #[test]
    fn infeasible_reports_witness() {
        let sets = [mask(&[0]), mask(&[2])];
        assert_eq!(
            min_set_cover(3, &sets).unwrap_err(),
            SolverError::Infeasible { element: 1 }
        );
    }

    #[test]
    fn chosen_is_lexicographically_least() {
        // two optimal pairs: {0,3} and {1,2}; lex-least is [0,3]
        let sets = [
            mask(&[0, 1]),
            mask(&[0, 2]),
            mask(&[1, 3]),
            mask(&[2, 3]),
        ];
        let sol = min_set_cover_with(
            4,
            &sets,
            SolverOptions {
                prune_dominated: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(sol.minimum, 2);
        assert_eq!(sol.chosen, vec![0, 3]);
    }

    #[test]
    fn dominance_pruning_preserves_minimum() {
        let sets = [
            mask(&[0]),
            mask(&[0, 1]),
            mask(&[2, 3]),
            mask(&[3]),
            mask(&[1, 2]),
        ];
        let pruned = min_set_cover(4, &sets).unwrap();
        let full = min_set_cover_with(
            4,
            &sets,
            SolverOptions {
                prune_dominated: false,
                parallel: false,
                memoize: false,
            },
        )
        .unwrap();
        assert_eq!(pruned.minimum, full.minimum);
    }

    #[test]
    fn exhaustive_oracle_small_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let len = rng.gen_range(1..=10);
            let n_sets = rng.gen_range(1..=8);
            let sets: Vec<u128> = (0..n_sets)
                .map(|_| rng.gen_range(0..1u128 << len))
                .collect();
            let got = min_set_cover(len, &sets);
            let want = exhaustive(len, &sets);
            match (got, want) {
                (Ok(sol), Some(min)) => assert_eq!(sol.minimum, min),
                (Err(SolverError::Infeasible { .. }), None) => {}
                (g, w) => panic!("solver {g:?} vs oracle {w:?}"),
            }
        }
    }

    fn exhaustive(len: usize, sets: &[u128]) -> Option<usize> {
        let universe: u128 = if len == 128 { u128::MAX } else { (1 << len) - 1 };
        for size in 0..=sets.len() {
            let mut found = false;
            subsets(sets.len(), size, &mut |idx: &[usize]| {
                let m: u128 = idx.iter().fold(0, |a, &i| a | sets[i]);
                if m & universe == universe {
                    found = true;
                }
            });
            if found {
                return Some(size);
            }
        }
        None
    }

    fn subsets(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
        fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
            if cur.len() == k {
                f(cur);
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(n, k, i + 1, cur, f);
                cur.pop();
            }
        }
        rec(n, k, 0, &mut Vec::new(), f);
    }
}
