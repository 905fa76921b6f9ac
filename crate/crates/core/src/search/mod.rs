//! Enumeration of parallel classes and resolutions by exact cover, and the
//! search for a largest mutually compatible family of resolutions.

mod clique;
mod exact_cover;

pub use clique::{max_clique, CliqueOutcome, Graph};
pub use exact_cover::{CoverSolutions, ExactCover};

use thiserror::Error;

use crate::design::{
    classify_resolution_pair, DesignError, PairKind, ParallelClass, Resolution, SteinerDesign,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("resolution {index} does not fit the design")]
    ForeignResolution { index: usize },
    #[error(
        "internal error: found {size} mutually compatible resolutions, above the bound {bound}"
    )]
    BoundExceeded { size: usize, bound: usize },
}

/// Caps on a search. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_solutions: Option<usize>,
    pub max_nodes: Option<u64>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }
}

/// Which uncovered element to branch on next. Only discovery order differs;
/// the solution set and its sorted output do not.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Branching {
    #[default]
    LowestIndex,
    FewestCandidates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: SearchBudget,
    pub branching: Branching,
    /// Worker count. Budgeted searches always run on one worker so that the
    /// partial result is reproducible.
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: SearchBudget::default(),
            branching: Branching::default(),
            threads: 1,
        }
    }
}

impl From<SearchBudget> for SearchOptions {
    fn from(budget: SearchBudget) -> Self {
        SearchOptions {
            budget,
            ..Default::default()
        }
    }
}

/// Sorted results plus whether the search space was exhausted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration<T> {
    pub items: Vec<T>,
    pub exhaustive: bool,
    pub nodes: u64,
}

/// All parallel classes, found by covering the points with disjoint blocks.
pub fn enumerate_parallel_classes(
    design: &SteinerDesign,
    options: &SearchOptions,
) -> Enumeration<ParallelClass> {
    let ec = ExactCover::new(design.v(), design.blocks());
    let out = ec.solve(&options.budget, options.branching, options.threads);
    let items = out
        .solutions
        .into_iter()
        .map(|blocks| {
            ParallelClass::new(design, blocks).expect("exact cover yields parallel classes")
        })
        .collect();
    Enumeration {
        items,
        exhaustive: out.exhaustive,
        nodes: out.nodes,
    }
}

/// All resolutions built from the given parallel classes.
pub fn enumerate_resolutions_from_classes(
    design: &SteinerDesign,
    classes: &[ParallelClass],
    options: &SearchOptions,
) -> Enumeration<Resolution> {
    let sets: Vec<Vec<usize>> = classes.iter().map(|c| c.blocks().to_vec()).collect();
    let ec = ExactCover::new(design.b(), &sets);
    let out = ec.solve(&options.budget, options.branching, options.threads);
    let mut items: Vec<Resolution> = out
        .solutions
        .into_iter()
        .map(|chosen| {
            let parts = chosen.into_iter().map(|c| sets[c].clone()).collect();
            Resolution::new(design, parts).expect("exact cover yields resolutions")
        })
        .collect();
    items.sort();
    Enumeration {
        items,
        exhaustive: out.exhaustive,
        nodes: out.nodes,
    }
}

/// All resolutions: classes first, then covers of the block set by classes.
/// The solution cap applies to resolutions; the node cap to each stage.
pub fn enumerate_resolutions(
    design: &SteinerDesign,
    options: &SearchOptions,
) -> Enumeration<Resolution> {
    let class_options = SearchOptions {
        budget: SearchBudget {
            max_solutions: None,
            max_nodes: options.budget.max_nodes,
        },
        ..*options
    };
    let classes = enumerate_parallel_classes(design, &class_options);
    let mut out = enumerate_resolutions_from_classes(design, &classes.items, options);
    out.exhaustive &= classes.exhaustive;
    out.nodes += classes.nodes;
    out
}

/// Pairwise compatibility as a graph on resolution indices.
pub fn compatibility_graph(
    design: &SteinerDesign,
    resolutions: &[Resolution],
) -> Result<Graph, SearchError> {
    let p = design.params();
    for (index, r) in resolutions.iter().enumerate() {
        if r.block_count() != p.b || r.classes().len() != p.r {
            return Err(SearchError::ForeignResolution { index });
        }
    }
    let mut g = Graph::new(resolutions.len());
    for i in 0..resolutions.len() {
        for j in i + 1..resolutions.len() {
            if classify_resolution_pair(&resolutions[i], &resolutions[j])? == PairKind::Compatible {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

/// Largest mutually compatible subfamily found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibleFamily {
    /// Ascending indices into the input list.
    pub members: Vec<usize>,
    /// True when no larger family exists among the inputs.
    pub optimal: bool,
    /// The bound (sk-k+1)s.
    pub bound: usize,
    /// True when the family reaches the bound.
    pub attains_bound: bool,
    pub nodes: u64,
}

/// Maximum clique of the compatibility graph, cut off at m_max = (sk-k+1)s.
pub fn max_compatible_set(
    design: &SteinerDesign,
    resolutions: &[Resolution],
    budget: &SearchBudget,
) -> Result<CompatibleFamily, SearchError> {
    let bound = design.params().m_max;
    let g = compatibility_graph(design, resolutions)?;
    match max_clique(&g, bound, budget.max_nodes) {
        CliqueOutcome::CeilingExceeded { clique } => Err(SearchError::BoundExceeded {
            size: clique.len(),
            bound,
        }),
        CliqueOutcome::Done {
            best,
            optimal,
            nodes,
        } => {
            if best.len() > bound {
                return Err(SearchError::BoundExceeded {
                    size: best.len(),
                    bound,
                });
            }
            Ok(CompatibleFamily {
                attains_bound: best.len() == bound,
                members: best,
                optimal,
                bound,
                nodes,
            })
        }
    }
}
