//! Backtracking exact cover over a bitset-encoded family of subsets.
//!
//! Results are returned as ascending subset-index lists, sorted, so the
//! output does not depend on branching order or worker count.

use std::thread;

use super::{Branching, SearchBudget};

/// Ground set `0..universe` and a family of subsets of it.
#[derive(Debug, Clone)]
pub struct ExactCover {
    universe: usize,
    words: usize,
    sets: Vec<Vec<u64>>,
    containing: Vec<Vec<usize>>,
}

/// Raw solver output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolutions {
    pub solutions: Vec<Vec<usize>>,
    pub exhaustive: bool,
    pub nodes: u64,
}

impl ExactCover {
    pub fn new(universe: usize, sets: &[Vec<usize>]) -> Self {
        let words = universe.div_ceil(64).max(1);
        let mut containing = vec![Vec::new(); universe];
        let sets = sets
            .iter()
            .enumerate()
            .map(|(i, set)| {
                let mut bits = vec![0u64; words];
                for &e in set {
                    assert!(e < universe, "element {e} outside universe {universe}");
                    bits[e / 64] |= 1 << (e % 64);
                    containing[e].push(i);
                }
                bits
            })
            .collect();
        ExactCover {
            universe,
            words,
            sets,
            containing,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn solve(
        &self,
        budget: &SearchBudget,
        branching: Branching,
        threads: usize,
    ) -> CoverSolutions {
        let unlimited = budget.max_nodes.is_none() && budget.max_solutions.is_none();
        if threads > 1 && unlimited {
            return self.solve_parallel(branching, threads);
        }
        let mut dfs = Dfs::new(self, budget, branching);
        dfs.run();
        dfs.finish()
    }

    // Splits the candidates for the first branching element across workers.
    fn solve_parallel(&self, branching: Branching, threads: usize) -> CoverSolutions {
        let budget = SearchBudget::default();
        let root = Dfs::new(self, &budget, branching);
        let Some(e) = root.pick() else {
            let mut dfs = root;
            dfs.run();
            return dfs.finish();
        };
        let candidates = self.containing[e].clone();
        let results: Vec<CoverSolutions> = thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|w| {
                    let mine: Vec<usize> = candidates
                        .iter()
                        .copied()
                        .skip(w)
                        .step_by(threads)
                        .collect();
                    let budget = &budget;
                    scope.spawn(move || {
                        let mut total = CoverSolutions {
                            solutions: Vec::new(),
                            exhaustive: true,
                            nodes: 0,
                        };
                        for s in mine {
                            let mut dfs = Dfs::new(self, budget, branching);
                            dfs.choose(s);
                            dfs.run();
                            let part = dfs.finish();
                            total.solutions.extend(part.solutions);
                            total.nodes += part.nodes;
                        }
                        total
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker panicked"))
                .collect()
        });
        let mut merged = CoverSolutions {
            solutions: Vec::new(),
            exhaustive: true,
            nodes: 1,
        };
        for part in results {
            merged.solutions.extend(part.solutions);
            merged.nodes += part.nodes;
        }
        merged.solutions.sort();
        merged
    }
}

struct Dfs<'a> {
    ec: &'a ExactCover,
    budget: &'a SearchBudget,
    branching: Branching,
    covered: Vec<u64>,
    chosen: Vec<usize>,
    solutions: Vec<Vec<usize>>,
    nodes: u64,
    stopped: bool,
}

impl<'a> Dfs<'a> {
    fn new(ec: &'a ExactCover, budget: &'a SearchBudget, branching: Branching) -> Self {
        Dfs {
            ec,
            budget,
            branching,
            covered: vec![0; ec.words],
            chosen: Vec::new(),
            solutions: Vec::new(),
            nodes: 0,
            stopped: false,
        }
    }

    fn is_covered(&self, e: usize) -> bool {
        self.covered[e / 64] >> (e % 64) & 1 == 1
    }

    fn fits(&self, s: usize) -> bool {
        self.ec.sets[s]
            .iter()
            .zip(&self.covered)
            .all(|(a, b)| a & b == 0)
    }

    fn choose(&mut self, s: usize) {
        for (c, w) in self.covered.iter_mut().zip(&self.ec.sets[s]) {
            *c |= w;
        }
        self.chosen.push(s);
    }

    fn unchoose(&mut self) {
        let s = self.chosen.pop().expect("nonempty stack");
        for (c, w) in self.covered.iter_mut().zip(&self.ec.sets[s]) {
            *c &= !w;
        }
    }

    /// Next element to branch on, `None` when everything is covered.
    fn pick(&self) -> Option<usize> {
        let mut uncovered = (0..self.ec.universe).filter(|&e| !self.is_covered(e));
        match self.branching {
            Branching::LowestIndex => uncovered.next(),
            Branching::FewestCandidates => uncovered.min_by_key(|&e| {
                self.ec.containing[e]
                    .iter()
                    .filter(|&&s| self.fits(s))
                    .count()
            }),
        }
    }

    fn run(&mut self) {
        if self.stopped {
            return;
        }
        self.nodes += 1;
        if self.budget.max_nodes.is_some_and(|cap| self.nodes > cap) {
            self.stopped = true;
            return;
        }
        let Some(e) = self.pick() else {
            if self
                .budget
                .max_solutions
                .is_some_and(|cap| self.solutions.len() >= cap)
            {
                // a solution beyond the cap exists, so the listing is partial
                self.stopped = true;
                return;
            }
            let mut found = self.chosen.clone();
            found.sort_unstable();
            self.solutions.push(found);
            return;
        };
        for i in 0..self.ec.containing[e].len() {
            let s = self.ec.containing[e][i];
            if self.fits(s) {
                self.choose(s);
                self.run();
                self.unchoose();
                if self.stopped {
                    return;
                }
            }
        }
    }

    fn finish(self) -> CoverSolutions {
        let mut solutions = self.solutions;
        solutions.sort();
        CoverSolutions {
            solutions,
            exhaustive: !self.stopped,
            nodes: self.nodes,
        }
    }
}
