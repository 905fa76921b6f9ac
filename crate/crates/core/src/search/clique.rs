//! Maximum clique by branch and bound with greedy colouring bounds and a hard
//! size ceiling.

/// Undirected graph on `0..n` with bitset rows.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    rows: Vec<Vec<u64>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            rows: vec![vec![0; n.div_ceil(64).max(1)]; n],
        }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b);
        self.rows[a][b / 64] |= 1 << (b % 64);
        self.rows[b][a / 64] |= 1 << (a % 64);
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.rows[a][b / 64] >> (b % 64) & 1 == 1
    }

    pub fn degree(&self, a: usize) -> usize {
        self.rows[a].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliqueOutcome {
    /// Search finished; `best` is ascending.
    Done {
        best: Vec<usize>,
        optimal: bool,
        nodes: u64,
    },
    /// A clique larger than the ceiling turned up.
    CeilingExceeded { clique: Vec<usize> },
}

struct Bnb<'a> {
    g: &'a Graph,
    ceiling: usize,
    max_nodes: Option<u64>,
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    out_of_budget: bool,
    exceeded: Option<Vec<usize>>,
}

impl Bnb<'_> {
    fn done(&self) -> bool {
        self.out_of_budget || self.exceeded.is_some() || self.best.len() >= self.ceiling
    }

    /// Greedy sequential colouring; returns the vertices ordered by colour and
    /// the (1-based) colour of each position.
    fn colour_sort(&self, p: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in p {
            match classes
                .iter_mut()
                .find(|c| c.iter().all(|&w| !self.g.adjacent(v, w)))
            {
                Some(c) => c.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut order = Vec::with_capacity(p.len());
        let mut colours = Vec::with_capacity(p.len());
        for (i, c) in classes.into_iter().enumerate() {
            colours.extend(std::iter::repeat_n(i + 1, c.len()));
            order.extend(c);
        }
        (order, colours)
    }

    fn expand(&mut self, candidates: Vec<usize>) {
        self.nodes += 1;
        if self.max_nodes.is_some_and(|cap| self.nodes > cap) {
            self.out_of_budget = true;
            return;
        }
        let (order, colours) = self.colour_sort(&candidates);
        for idx in (0..order.len()).rev() {
            if self.done() || self.current.len() + colours[idx] <= self.best.len() {
                return;
            }
            let v = order[idx];
            self.current.push(v);
            if self.current.len() > self.ceiling {
                self.exceeded = Some(self.current.clone());
                return;
            }
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            let next: Vec<usize> = order[..idx]
                .iter()
                .copied()
                .filter(|&w| self.g.adjacent(v, w))
                .collect();
            if !next.is_empty() {
                self.expand(next);
            }
            self.current.pop();
        }
    }
}

/// Largest clique of `g`, never looking past `ceiling` vertices. Reaching the
/// ceiling ends the search and certifies optimality.
pub fn max_clique(g: &Graph, ceiling: usize, max_nodes: Option<u64>) -> CliqueOutcome {
    let mut start: Vec<usize> = (0..g.len()).collect();
    // ascending degree, so the colour pass tries high-degree vertices first
    start.sort_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)));
    let mut bnb = Bnb {
        g,
        ceiling,
        max_nodes,
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        out_of_budget: false,
        exceeded: None,
    };
    if !start.is_empty() && ceiling > 0 {
        bnb.expand(start);
    }
    if let Some(mut clique) = bnb.exceeded {
        clique.sort_unstable();
        return CliqueOutcome::CeilingExceeded { clique };
    }
    let mut best = bnb.best;
    best.sort_unstable();
    let optimal = !bnb.out_of_budget || best.len() >= ceiling;
    CliqueOutcome::Done {
        best,
        optimal,
        nodes: bnb.nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(g: &Graph) -> usize {
        let n = g.len();
        (0u32..1 << n)
            .filter(|mask| {
                (0..n).all(|a| {
                    (a + 1..n).all(|b| mask >> a & 1 == 0 || mask >> b & 1 == 0 || g.adjacent(a, b))
                })
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=12);
            let mut g = Graph::new(n);
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(a, b);
                    }
                }
            }
            let CliqueOutcome::Done { best, optimal, .. } = max_clique(&g, n, None) else {
                panic!("ceiling n cannot be exceeded");
            };
            assert!(optimal);
            assert_eq!(best.len(), brute_force(&g));
            for (i, &a) in best.iter().enumerate() {
                assert!(best[i + 1..].iter().all(|&b| g.adjacent(a, b)));
            }
        }
    }

    #[test]
    fn ceiling_stops_early_and_detects_excess() {
        let mut g = Graph::new(5);
        for a in 0..5 {
            for b in a + 1..5 {
                g.add_edge(a, b);
            }
        }
        match max_clique(&g, 5, None) {
            CliqueOutcome::Done { best, optimal, .. } => {
                assert_eq!(best, vec![0, 1, 2, 3, 4]);
                assert!(optimal);
            }
            other => panic!("{other:?}"),
        }
        assert!(
            matches!(max_clique(&g, 3, None), CliqueOutcome::Done { ref best, .. } if best.len() == 3)
        );
    }

    #[test]
    fn empty_graph() {
        let g = Graph::new(0);
        assert_eq!(
            max_clique(&g, 4, None),
            CliqueOutcome::Done {
                best: vec![],
                optimal: true,
                nodes: 0
            }
        );
    }
}
