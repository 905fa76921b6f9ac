use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use maxarc::design::{
    compatible_family_from_arc, parameter_table, restrict_to_arc, ArcDesign, SteinerDesign,
};
use maxarc::format::{
    read_design, read_family, read_index_list, read_steiner, write_design, write_family,
    write_index_list, write_resolution,
};
use maxarc::geometry::{denniston_arc, exterior_lines, regular_hyperoval, Arc, ProjectivePlane};
use maxarc::gf::Field;
use maxarc::pipeline::run_pipeline;
use maxarc::rank::{conjecture_check_with_family, rank_report};
use maxarc::reconstruct::{reconstruct_plane, verify_projective_plane};
use maxarc::search::{
    enumerate_parallel_classes, enumerate_resolutions, max_compatible_set, Branching, SearchBudget,
    SearchOptions,
};
use maxarc::Resolution;

use crate::{ArcKind, Budget, Cli, Command, PlaneArc, UsageError};

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut stdout = io::stdout().lock();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
    {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

macro_rules! out {
    ($($arg:tt)*) => { emit(&format!($($arg)*))? };
}

macro_rules! outln {
    ($($arg:tt)*) => { emit(&format!("{}\n", format_args!($($arg)*)))? };
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Prints `value` with a top-level `"schema": 1`.
fn emit_json<T: Serialize>(value: &T) -> Result<()> {
    let mut v = serde_json::to_value(value)?;
    match &mut v {
        Value::Object(map) => {
            map.insert("schema".into(), json!(1));
        }
        other => v = json!({ "schema": 1, "value": other.take() }),
    }
    outln!("{}", serde_json::to_string_pretty(&v)?);
    Ok(())
}

fn field_for_order(q: usize) -> Result<Field> {
    if q < 2 || !q.is_power_of_two() || q > 64 {
        return Err(usage(format!(
            "q = {q} must be a power of two between 2 and 64"
        )));
    }
    Ok(Field::binary(q.trailing_zeros())?)
}

fn load_plane(path: &Path) -> Result<ProjectivePlane> {
    let structure =
        read_design(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(ProjectivePlane::from_incidence(structure)?)
}

fn load_design(path: &Path) -> Result<SteinerDesign> {
    read_steiner(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_arc(plane: &ProjectivePlane, path: &Path) -> Result<Arc> {
    let points =
        read_index_list(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let k = plane
        .line_intersections(&points)?
        .into_iter()
        .max()
        .unwrap_or(0);
    Ok(Arc::new(plane, points, k)?)
}

fn load_plane_arc(input: &PlaneArc) -> Result<(ProjectivePlane, ArcDesign)> {
    let plane = load_plane(&input.plane)?;
    let arc = load_arc(&plane, &input.arc)?;
    let arc_design = restrict_to_arc(&plane, &arc)?;
    Ok((plane, arc_design))
}

fn load_family(design: &SteinerDesign, paths: &[impl AsRef<Path>]) -> Result<Vec<Resolution>> {
    let mut out = Vec::new();
    for p in paths {
        let p = p.as_ref();
        out.extend(
            read_family(design, &read(p)?).with_context(|| format!("parsing {}", p.display()))?,
        );
    }
    Ok(out)
}

fn search_options(cli: &Cli, budget: &Budget) -> SearchOptions {
    SearchOptions {
        budget: SearchBudget {
            max_solutions: budget.max_solutions,
            max_nodes: budget.max_nodes,
        },
        branching: if budget.fewest_candidates {
            Branching::FewestCandidates
        } else {
            Branching::LowestIndex
        },
        threads: cli.threads.max(1),
    }
}

fn write_family_out(family: &[Resolution], out_dir: Option<&Path>) -> Result<()> {
    match out_dir {
        None => out!("{}", write_family(family)),
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for (i, r) in family.iter().enumerate() {
                let path = dir.join(format!("resolution-{i:03}.txt"));
                fs::write(&path, write_resolution(r))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Plane { q } => {
            let plane = ProjectivePlane::build_pg2(&field_for_order(*q)?)?;
            out!("{}", write_design(plane.incidence())?);
        }

        Command::Arc { q, k, kind } => {
            let plane = ProjectivePlane::build_pg2(&field_for_order(*q)?)?;
            let arc = match kind {
                ArcKind::Hyperoval if *k != 2 => return Err(usage("a hyperoval has k = 2")),
                ArcKind::Hyperoval => regular_hyperoval(&plane)?,
                ArcKind::Denniston => {
                    if *k < 2 || !k.is_power_of_two() || k > q {
                        return Err(usage(format!("k = {k} must be a power of two in 2..={q}")));
                    }
                    denniston_arc(&plane, k.trailing_zeros())?
                }
            };
            out!("{}", write_index_list(arc.points()));
        }

        Command::Restrict(input) => {
            let (_, ad) = load_plane_arc(input)?;
            out!("{}", write_design(ad.design().incidence())?);
        }

        Command::Exterior(input) => {
            let plane = load_plane(&input.plane)?;
            let arc = load_arc(&plane, &input.arc)?;
            out!("{}", write_index_list(&exterior_lines(&plane, &arc)));
        }

        Command::Resolutions { input, out_dir } => {
            let (plane, ad) = load_plane_arc(input)?;
            let family = compatible_family_from_arc(&plane, &ad)?;
            write_family_out(&family, out_dir.as_deref())?;
        }

        Command::SearchClasses { design, budget } => {
            let d = load_design(design)?;
            let out = enumerate_parallel_classes(&d, &search_options(cli, budget));
            let classes: Vec<&[usize]> = out.items.iter().map(|c| c.blocks()).collect();
            if cli.json {
                emit_json(
                    &json!({ "classes": classes, "count": classes.len(), "exhaustive": out.exhaustive, "nodes": out.nodes }),
                )?;
            } else {
                for c in &classes {
                    outln!(
                        "{}",
                        c.iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join(" ")
                    );
                }
                eprintln!("{} classes, exhaustive: {}", classes.len(), out.exhaustive);
            }
        }

        Command::SearchResolutions {
            design,
            budget,
            out_dir,
        } => {
            let d = load_design(design)?;
            let out = enumerate_resolutions(&d, &search_options(cli, budget));
            if cli.json {
                let rs: Vec<Vec<&[usize]>> = out
                    .items
                    .iter()
                    .map(|r| r.classes().iter().map(|c| c.blocks()).collect())
                    .collect();
                emit_json(
                    &json!({ "resolutions": rs, "count": rs.len(), "exhaustive": out.exhaustive, "nodes": out.nodes }),
                )?;
                if let Some(dir) = out_dir {
                    write_family_out(&out.items, Some(dir))?;
                }
            } else {
                write_family_out(&out.items, out_dir.as_deref())?;
                eprintln!(
                    "{} resolutions, exhaustive: {}",
                    out.items.len(),
                    out.exhaustive
                );
            }
        }

        Command::MaxCompatible {
            design,
            resolutions,
            max_nodes,
        } => {
            let d = load_design(design)?;
            let rs = load_family(&d, resolutions)?;
            let fam = max_compatible_set(
                &d,
                &rs,
                &SearchBudget {
                    max_solutions: None,
                    max_nodes: *max_nodes,
                },
            )?;
            if cli.json {
                emit_json(&json!({
                    "members": fam.members,
                    "size": fam.members.len(),
                    "bound": fam.bound,
                    "attains_bound": fam.attains_bound,
                    "optimal": fam.optimal,
                    "candidates": rs.len(),
                    "nodes": fam.nodes,
                }))?;
            } else {
                outln!(
                    "members: {}",
                    fam.members
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                );
                outln!("size: {}", fam.members.len());
                outln!("bound: {}", fam.bound);
                outln!("optimal: {}", fam.optimal);
            }
        }

        Command::Reconstruct {
            design,
            family,
            out,
        } => {
            let d = load_design(design)?;
            let fam = load_family(&d, family)?;
            let rec = reconstruct_plane(&d, &fam)?;
            let text = write_design(&rec.plane)?;
            if let Some(path) = out {
                fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            }
            if cli.json {
                let dual = rec
                    .dual
                    .as_ref()
                    .and_then(|x| x.steiner())
                    .map(|x| json!({ "v": x.v(), "k": x.k(), "b": x.b() }));
                emit_json(&json!({
                    "order": rec.order,
                    "points": rec.plane.point_count(),
                    "lines": rec.plane.block_count(),
                    "b_i": rec.structure.block_count(),
                    "dual": dual,
                    "counting": rec.chain,
                }))?;
            } else if out.is_none() {
                out!("{text}");
            }
        }

        Command::VerifyPlane { plane } => {
            let s = read_design(&read(plane)?)
                .with_context(|| format!("parsing {}", plane.display()))?;
            match verify_projective_plane(&s) {
                Ok(order) => {
                    if cli.json {
                        emit_json(&json!({ "ok": true, "order": order }))?;
                    } else {
                        outln!("projective plane of order {order}");
                    }
                }
                Err(v) => {
                    if cli.json {
                        emit_json(&json!({ "ok": false, "violation": v }))?;
                    }
                    bail!("not a projective plane: {v}");
                }
            }
        }

        Command::VerifyDesign { design } => {
            let d = load_design(design)?;
            print_params(cli, d.params())?;
        }

        Command::Rank {
            design,
            p,
            family,
            max_nodes,
        } => {
            let s = read_design(&read(design)?)
                .with_context(|| format!("parsing {}", design.display()))?;
            let mut report = rank_report(&s, *p)?;
            if !family.is_empty() {
                let d = SteinerDesign::validate(s.point_count(), s.blocks().to_vec())?;
                let fam = load_family(&d, family)?;
                let budget = SearchBudget {
                    max_solutions: None,
                    max_nodes: *max_nodes,
                };
                report = conjecture_check_with_family(&d, &fam, &budget);
            }
            if report.is_counterexample_candidate() {
                eprintln!(
                    "WARNING: 2-rank {} is below 3^t - 2^t = {}; counterexample candidate, incidence matrix follows",
                    report.rank,
                    report.conjecture_bound.unwrap_or_default()
                );
                for row in s.incidence_matrix() {
                    eprintln!(
                        "{}",
                        row.iter().map(|x| char::from(b'0' + x)).collect::<String>()
                    );
                }
            }
            emit_json(&report)?;
        }

        Command::Params { s, k } => {
            if *s < 1 || *k < 2 {
                return Err(usage("need s >= 1 and k >= 2"));
            }
            print_params(cli, &parameter_table(*s, *k))?;
        }

        Command::Pipeline { t, k } => {
            if !(2..=6).contains(t) {
                return Err(usage("t must lie in 2..=6"));
            }
            let i = match k {
                None => None,
                Some(k) if k.is_power_of_two() && *k >= 2 && *k < 1 << t => {
                    Some(k.trailing_zeros())
                }
                Some(k) => return Err(usage(format!("k = {k} must be a power of two in 2..2^t"))),
            };
            let summary = run_pipeline(*t, i).map_err(|e| anyhow!(e))?;
            emit_json(&summary)?;
        }
    }
    Ok(())
}

fn print_params(cli: &Cli, p: &maxarc::ArcParams) -> Result<()> {
    if cli.json {
        return emit_json(p);
    }
    let rows = [
        ("s", p.s),
        ("k", p.k),
        ("q", p.q),
        ("v", p.v),
        ("n", p.n),
        ("r", p.r),
        ("b", p.b),
        ("m_max", p.m_max),
        ("b_i_max", p.b_i_max),
        ("disjoint_per_block", p.disjoint_per_block),
        ("srg_vertices", p.srg.vertices),
        ("srg_degree", p.srg.degree),
        ("srg_lambda", p.srg.lambda),
        ("srg_mu", p.srg.mu),
        ("complement_degree", p.complement_degree),
    ];
    for (name, value) in rows {
        outln!("{name} {value}");
    }
    if p.is_affine() {
        outln!("note s = 1: affine plane of order {}", p.k);
    }
    Ok(())
}
