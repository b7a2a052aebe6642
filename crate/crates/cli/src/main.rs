mod out;
mod pair;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use freetrack::currents::{projective_distance, PathIndex};
use freetrack::dsl::{format_map_file, parse_map_file, MapFile};
use freetrack::dynamics::{adversarial_words, wedge_product, NsContext, Orbit, SampleSpec, DEFAULT_BUDGET};
use freetrack::exec::ExecMode;
use freetrack::graph::{cyclic_reduce_word, CyclicWord, Graph};
use freetrack::substitution::{Substitution, DEFAULT_MAX_ITER};
use freetrack::tt::{rational_string, NielsenPath, TrainTrack};
use serde_json::{json, Map, Value};

use out::{approx, exact, weights};
use pair::{load_track, PairFile};

const MAX_POWER: usize = 16;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Toml(String),
    #[error("{0}")]
    Usage(String),
    #[error("{file}: {source}")]
    File { file: String, source: freetrack::Error },
    #[error(transparent)]
    Core(#[from] freetrack::Error),
}

impl CliError {
    fn in_file(path: &Path, source: freetrack::Error) -> CliError {
        CliError::File { file: path.display().to_string(), source }
    }

    fn kind(&self) -> &'static str {
        let core = match self {
            CliError::Io(_) => return "io",
            CliError::Toml(_) => return "pair_file",
            CliError::Usage(_) => return "usage",
            CliError::File { source, .. } | CliError::Core(source) => source,
        };
        match core {
            freetrack::Error::Parse { .. } => "parse",
            freetrack::Error::NotRegular(_) => "regularity",
            freetrack::Error::UnknownEdge(_) => "undeclared_letter",
            freetrack::Error::NotTrainTrack { .. } => "not_train_track",
            freetrack::Error::NotHyperbolic(_) => "not_hyperbolic",
            freetrack::Error::NoConvergence(_) => "no_convergence",
            freetrack::Error::LengthBudget { .. } => "length_budget",
            _ => "error",
        }
    }
}

/// Train tracks, currents and North-South experiments for free group automorphisms.
#[derive(Debug, Parser)]
#[command(name = "freetrack", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run data-parallel loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Debug, clap::Args)]
struct CurrentArgs {
    /// Length of the paths on which currents are evaluated.
    #[arg(long, default_value_t = 3)]
    radius: usize,
    /// Convergence tolerance of frequency iterations.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regularity, train track and expansion data of a map.
    Validate {
        map: PathBuf,
        #[arg(long, default_value_t = MAX_POWER)]
        max_power: usize,
    },
    /// Constants, INPs and the hyperbolicity verdict.
    Analyze {
        map: PathBuf,
        /// Longest cyclic word in the periodic class search.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Largest power in the periodic class search.
        #[arg(long, default_value_t = 6)]
        max_k: usize,
    },
    /// INPs and pre-INPs with search statistics.
    Inps { map: PathBuf },
    /// Limit frequencies of the factors of fᵗ(e).
    Frequencies {
        map: PathBuf,
        #[arg(long)]
        edge: String,
        #[command(flatten)]
        current: CurrentArgs,
        /// Write (path, frequency) rows to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// The simplex of attraction.
    Simplex {
        map: PathBuf,
        #[command(flatten)]
        current: CurrentArgs,
        #[arg(long, default_value_t = 1e-6)]
        dedup_tol: f64,
    },
    /// Limit of a rational current from strata and from its orbit.
    Limit {
        map: PathBuf,
        #[arg(long)]
        word: String,
        #[command(flatten)]
        current: CurrentArgs,
        #[arg(long, default_value_t = 60)]
        nmax: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Forward and backward orbit of one word under a pair.
    Orbit {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 60)]
        nmax: usize,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// North-South convergence report over random rational currents.
    NsReport {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 40)]
        len: usize,
        #[arg(long, default_value_t = 60)]
        nmax: usize,
        /// Neighborhood size for both simplices.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        dedup_tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
        /// Add words through INPs and words confined to single strata.
        #[arg(long)]
        adversarial: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// One-point union of maps at their fixed vertices.
    Wedge {
        #[arg(required = true, num_args = 2..)]
        maps: Vec<PathBuf>,
        /// Write the combined map file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_map(path: &Path) -> Result<MapFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_map_file(&text).map_err(|e| CliError::in_file(path, e))
}

fn parse_loop(g: &Graph, text: &str) -> Result<CyclicWord, CliError> {
    let w = cyclic_reduce_word(&g.parse_word(text)?);
    if w.is_empty() {
        return Err(freetrack::Error::EmptyLoop.into());
    }
    Ok(CyclicWord::new(g, w)?)
}

fn write_csv(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn nielsen(g: &Graph, e: &NielsenPath) -> Value {
    json!({
        "path": e.display(g),
        "left": g.format_word(&e.left.hull),
        "right": g.format_word(&e.right.hull),
        "start": e.start_point(g).display(g),
        "end": e.end_point(g).display(g),
        "period": e.period,
        "pre_period": e.pre_period,
    })
}

/// Wraps every bare number: integers as exact, floats with `tol`. Objects
/// that already carry an `exact` or `tol` key are left alone.
fn mark(v: Value, tol: f64) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => approx(n.as_f64().unwrap(), tol),
        Value::Number(n) => exact(n),
        Value::Array(a) => Value::Array(a.into_iter().map(|x| mark(x, tol)).collect()),
        Value::Object(o) if o.contains_key("exact") || o.contains_key("tol") => Value::Object(o),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, x)| (k, mark(x, tol))).collect::<Map<_, _>>()),
        other => other,
    }
}

fn orbit_rows(o: &Orbit) -> Vec<Value> {
    let mut rs: Vec<_> = o.records.iter().collect();
    rs.sort_by_key(|r| r.step);
    rs.into_iter()
        .map(|r| {
            json!({
                "step": r.step, "len": r.len, "goodness": r.goodness, "goodness_back": r.goodness_back,
                "ilt": r.ilt, "dist_plus": r.dist_plus, "dist_minus": r.dist_minus,
            })
        })
        .collect()
}

fn run(cli: Cli) -> Result<(Value, String), CliError> {
    let mode = if cli.sequential { ExecMode::Sequential } else { ExecMode::default() };
    match cli.command {
        Command::Validate { map, max_power } => {
            let m = read_map(&map)?;
            let f = &m.map;
            let check = f.is_train_track();
            let g = f.graph();
            let mut o = json!({
                "map": m.name,
                "regular": true,
                "train_track": check.train_track,
                "vertices": g.num_vertices(),
                "edges": g.num_edges() / 2,
            });
            if let Some((e, t)) = check.witness {
                o["witness"] = json!(format!("image of {} crosses {}", g.edge_name(e), t.display(g)));
            }
            if check.train_track {
                let t = TrainTrack::new(f.clone(), max_power)?;
                let b = t.bounds();
                o["expanding_power"] = exact(t.power());
                o["lambda_min"] = exact(b.lambda_min);
                o["lambda_max"] = exact(b.lambda_max);
                o["C_f"] = exact(t.cancellation_bound());
                o["C_f_base"] = exact(f.cancellation_bound()?);
                o["illegal_turns"] = json!(t.turns().illegal_turns.iter().map(|x| x.display(t.graph())).collect::<Vec<_>>());
            }
            let summary = format!("{}: train track {}", m.name, check.train_track);
            Ok((mark(o, 0.0), summary))
        }
        Command::Analyze { map, max_len, max_k } => {
            let m = read_map(&map)?;
            let t = TrainTrack::new(m.map, MAX_POWER)?;
            let s = t.find_inps();
            let h = t.hyperbolicity(&s, max_len, max_k, mode);
            let g = t.graph();
            let b = t.bounds();
            let mut constants = json!({
                "C_f": exact(t.cancellation_bound()),
                "C": exact(rational_string(t.critical())),
                "lambda_min": exact(b.lambda_min),
                "lambda_max": exact(b.lambda_max),
            });
            match t.constants(&s) {
                Ok(c) => {
                    constants["A"] = exact(c.a);
                    constants["delta"] = exact(rational_string(&c.delta));
                    constants["R"] = exact(rational_string(&c.r_dich));
                    constants["s"] = exact(c.s_dich);
                    constants["s_good"] = exact(c.s_good);
                    constants["s_bad"] = exact(c.s_bad);
                    constants["stabilization"] = exact(c.stabilization);
                }
                Err(e) => constants["unavailable"] = json!(e.to_string()),
            }
            let o = json!({
                "map": m.name,
                "power": t.power(),
                "constants": constants,
                "inps": s.inps.iter().map(|e| nielsen(g, e)).collect::<Vec<_>>(),
                "hyperbolicity": { "verdict": h.verdict, "witness": h.witness, "max_len": max_len, "max_k": max_k },
            });
            let summary = format!("{}: {} INPs, verdict {:?}", m.name, s.inps.len(), h.verdict);
            Ok((mark(o, 0.0), summary))
        }
        Command::Inps { map } => {
            let t = load_track(&map, MAX_POWER)?;
            let s = t.find_inps();
            let g = t.graph();
            let o = json!({
                "power": t.power(),
                "inps": s.inps.iter().map(|e| nielsen(g, e)).collect::<Vec<_>>(),
                "pre_inps": s.pre_inps.iter().map(|e| nielsen(g, e)).collect::<Vec<_>>(),
                "unresolved": s.unresolved.iter().map(|u| json!({
                    "left": g.format_word(&u.left), "right": g.format_word(&u.right), "reason": u.reason
                })).collect::<Vec<_>>(),
                "window": s.window,
                "pairs": s.pairs,
                "states": s.states,
                "stabilization": s.stabilization,
                "period_bound": s.period_bound,
            });
            let summary = format!("{} INPs, {} pre-INPs", s.inps.len(), s.pre_inps.len());
            Ok((mark(o, 0.0), summary))
        }
        Command::Frequencies { map, edge, current, csv } => {
            let t = load_track(&map, MAX_POWER)?;
            let g = t.graph();
            let e = g.edge_by_name(&edge).ok_or_else(|| freetrack::Error::UnknownEdge(edge.clone()))?;
            let zeta = Substitution::from_map(t.map());
            let fv = zeta.limit_frequencies(e, current.radius, current.tol, DEFAULT_MAX_ITER)?;
            let lambda = zeta.stretch_factor(e, current.tol, DEFAULT_MAX_ITER)?;
            let mut rows = String::from("path,frequency\n");
            let mut values = Map::new();
            for (p, x) in &fv.values {
                rows.push_str(&format!("{},{x:.15e}\n", g.format_word(p)));
                values.insert(g.format_word(p), json!(x));
            }
            let mut o = json!({
                "edge": edge,
                "radius": current.radius,
                "power": t.power(),
                "lift_power": fv.power,
                "iterations": fv.iterations,
                "lambda_e": approx(lambda, current.tol),
                "lambda_e_per_step": approx(lambda.powf(1.0 / t.power() as f64), current.tol),
            });
            match &csv {
                Some(p) => {
                    write_csv(p, &rows)?;
                    o["csv"] = json!(p.display().to_string());
                }
                None => o["frequencies"] = json!({ "tol": current.tol, "values": values }),
            }
            Ok((mark(o, current.tol), format!("{} factors, λ_e = {lambda:.9}", fv.values.len())))
        }
        Command::Simplex { map, current, dedup_tol } => {
            let t = load_track(&map, MAX_POWER)?;
            let s = t.build_simplex(current.radius, current.tol, dedup_tol, freetrack::currents::DEFAULT_LAMBDA_TOL, mode)?;
            let id = |i: usize| format!("v{i}");
            let o = json!({
                "power": t.power(),
                "radius": s.radius,
                "dimension": s.dimension,
                "dedup_tol": exact(s.dedup_tol),
                "vertices": s.vertices.iter().enumerate().map(|(i, v)| json!({
                    "id": id(i),
                    "edges": v.edges,
                    "lambda": approx(v.lambda, s.lambda_tol),
                    "weights": weights(&v.current),
                })).collect::<Vec<_>>(),
                "uniform_faces": s.uniform_faces.iter().map(|f| f.iter().map(|&i| id(i)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            Ok((mark(o, current.tol), format!("{} vertices", s.vertices.len())))
        }
        Command::Limit { map, word, current, nmax, budget } => {
            let t = load_track(&map, MAX_POWER)?;
            let w = parse_loop(t.graph(), &word)?;
            let s = t.find_inps();
            let lim = t.rational_limit_strata(&s, &w, current.radius, current.tol, nmax)?;
            let index = PathIndex::new(t.graph(), current.radius);
            let orbit = t.orbit_current(&index, &w, nmax, budget)?;
            let d = projective_distance(&lim.current, &orbit.current)?;
            let o = json!({
                "word": w.display(t.graph()),
                "strata": {
                    "current": weights(&lim.current),
                    "lambda": approx(lim.lambda, current.tol),
                    "support": lim.support.iter().map(|(e, k)| json!({ "edge": e, "weight": k })).collect::<Vec<_>>(),
                    "steps_to_pseudo_legal": lim.steps,
                },
                "orbit": {
                    "current": weights(&orbit.current),
                    "steps": orbit.steps,
                    "steps_on_words": orbit.materialized,
                },
                "distance": approx(d, current.tol),
            });
            Ok((mark(o, current.tol), format!("distance {d:.3e}")))
        }
        Command::Orbit { pair, word, nmax, radius, budget, csv } => {
            let (p, ap) = PairFile::load(&pair)?;
            let radius = radius.or(p.radius).unwrap_or(3);
            let tol = p.tol.unwrap_or(1e-9);
            let budget = budget.or(p.budget).unwrap_or(DEFAULT_BUDGET);
            let ctx = NsContext::new(ap, radius, tol, p.dedup_tol.unwrap_or(1e-6), 1e-6, budget, mode)?;
            let w = parse_loop(ctx.pair.forward.graph(), &word)?;
            let orbit = ctx.orbit(&w, nmax)?;
            let mut o = json!({
                "word": w.display(ctx.pair.forward.graph()),
                "nmax": nmax,
                "radius": radius,
                "budget": budget,
                "truncated_forward": orbit.truncated_forward,
                "truncated_backward": orbit.truncated_backward,
            });
            match &csv {
                Some(path) => {
                    let report = freetrack::dynamics::NsReport {
                        samples: vec![],
                        m0: None,
                        violations: vec![],
                        u_tol: 0.0,
                        v_tol: 0.0,
                        n_max: nmax,
                        radius,
                        budget,
                        orbits: vec![orbit.clone()],
                    };
                    write_csv(path, &report.csv())?;
                    o["csv"] = json!(path.display().to_string());
                }
                None => o["records"] = json!(orbit_rows(&orbit)),
            }
            Ok((mark(o, tol), format!("{} records", orbit.records.len())))
        }
        Command::NsReport { pair, samples, len, nmax, tol, dedup_tol, seed, radius, budget, adversarial, csv } => {
            let (p, ap) = PairFile::load(&pair)?;
            let radius = radius.or(p.radius).unwrap_or(3);
            let ftol = p.tol.unwrap_or(1e-9);
            let u_tol = tol.or(p.u_tol).unwrap_or(1e-3);
            let v_tol = tol.or(p.v_tol).unwrap_or(1e-3);
            let seed = seed.or(p.seed).unwrap_or(0);
            let budget = budget.or(p.budget).unwrap_or(DEFAULT_BUDGET);
            let dedup = dedup_tol.or(p.dedup_tol).unwrap_or(1e-6);
            let ctx = NsContext::new(ap, radius, ftol, dedup, 1e-6, budget, mode)?;
            let g = ctx.pair.forward.graph().clone();
            let mut words = SampleSpec { count: samples, len, seed }.words(&g);
            if adversarial {
                let s = ctx.pair.forward.find_inps();
                words.extend(adversarial_words(&ctx.pair.forward, &s, len, seed));
            }
            let r = ctx.ns_report(&words, u_tol, v_tol, nmax, mode)?;
            let mut o = json!({
                "seed": seed,
                "samples": words.len(),
                "len": len,
                "nmax": nmax,
                "radius": radius,
                "budget": budget,
                "u_tol": exact(u_tol),
                "v_tol": exact(v_tol),
                "m0": r.m0,
                "violations": r.violations.iter().map(|&i| json!({ "sample": i, "word": r.samples[i].word })).collect::<Vec<_>>(),
                "per_sample": r.samples,
            });
            match &csv {
                Some(path) => {
                    write_csv(path, &r.csv())?;
                    o["csv"] = json!(path.display().to_string());
                }
                None => o["orbits"] = json!(r.orbits.iter().map(orbit_rows).collect::<Vec<_>>()),
            }
            let summary = format!("m0 = {:?}, {} violations over {} samples", r.m0, r.violations.len(), words.len());
            Ok((mark(o, ftol), summary))
        }
        Command::Wedge { maps, out } => {
            let mut factors = Vec::new();
            for path in &maps {
                let m = read_map(path)?;
                let v = match m.fixed_vertex {
                    Some(v) => v,
                    None if m.map.graph().is_rose() => 0,
                    None => return Err(CliError::Usage(format!("{}: non-rose factor needs `fixed-vertex:`", path.display()))),
                };
                factors.push((m.map, v));
            }
            let w = wedge_product(&factors)?;
            let text = format_map_file("wedge", &w, Some(0));
            let mut o = json!({
                "factors": maps.len(),
                "edges": w.graph().num_edges() / 2,
                "vertices": w.graph().num_vertices(),
            });
            match &out {
                Some(p) => {
                    write_csv(p, &text)?;
                    o["file"] = json!(p.display().to_string());
                }
                None => o["map_file"] = json!(text),
            }
            Ok((mark(o, 0.0), format!("wedge of {} maps", maps.len())))
        }
    }
}

fn emit(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((value, summary)) => {
            emit(&value);
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let mut err = json!({ "kind": e.kind(), "message": e.to_string() });
            let core = match &e {
                CliError::File { source, .. } | CliError::Core(source) => Some(source),
                _ => None,
            };
            if let Some(freetrack::Error::Parse { line, col, .. }) = core {
                err["line"] = exact(line);
                err["column"] = exact(col);
            }
            emit(&json!({ "error": err }));
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
