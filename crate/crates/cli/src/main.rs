//! `troptor`: command-line front end. Every subcommand prints one JSON
//! document. Domain errors exit with status 1 and print
//! `{"error":{"kind","message"}}`; usage errors exit with status 2.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use tropical_torelli::graphs::{automorphisms, WeightedGraph};
use tropical_torelli::markings::{Marking, MarkingData};
use tropical_torelli::moduli::{build_moduli_fan, cell_label, enumerate_stable, enumerate_stable_pure, pure_subfan};
use tropical_torelli::ratlin::{parse_rat, IntMatrix, QuadForm, Rat};
use tropical_torelli::stackyfan::{
    fan_to_dot, quotient_point_bijection_check, stratified_quotient_with, FanData, GroupAction, DEFAULT_BUDGET,
};
use tropical_torelli::torelli::{compat_check_genus, jacobian, marked_period, torelli_class, Sigma};
use tropical_torelli::voronoi::{
    delone, gl_equivalent, is_perfect, min_vectors, perfect_cone, reduce_binary, secondary_cone_of_form,
};
use tropical_torelli::Error;

#[derive(Parser)]
#[command(name = "troptor", version, about = "Exact tropical moduli, Voronoi reduction and period maps")]
struct Cli {
    /// Write the JSON result here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for bulk runs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Upper bound on cells and group elements visited while closing orbits.
    #[arg(long, global = true, env = "TROPTOR_CELL_BUDGET", default_value_t = DEFAULT_BUDGET)]
    cell_budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SigmaArg {
    #[value(name = "V", alias = "v")]
    V,
    #[value(name = "P", alias = "p")]
    P,
}

#[derive(Subcommand)]
enum Command {
    /// Stable graphs of genus G up to isomorphism.
    Enumerate {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        pure: bool,
        /// Also write the face poset of the moduli fan as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Tropical Jacobian of a metric graph.
    Jacobian {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'l', long)]
        lengths: PathBuf,
    },
    /// Period matrix of a marked metric graph.
    Period {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'm', long)]
        marking: PathBuf,
        #[arg(short = 'l', long)]
        lengths: PathBuf,
    },
    /// Jacobian and class tag of a metric graph.
    Torelli {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'l', long)]
        lengths: PathBuf,
    },
    /// Arithmetic minimum and minimal vectors.
    Minvec {
        #[arg(short = 'q', long)]
        form: PathBuf,
    },
    /// Cone spanned by the squares of the minimal vectors.
    PerfectCone {
        #[arg(short = 'q', long)]
        form: PathBuf,
    },
    /// Delone subdivision of a definite form.
    Delone {
        #[arg(short = 'q', long)]
        form: PathBuf,
    },
    /// Secondary cone of a positive semidefinite form.
    SecondaryCone {
        #[arg(short = 'q', long)]
        form: PathBuf,
    },
    /// Reduction of a binary form into the principal cone.
    Reduce2 {
        #[arg(short = 'q', long)]
        form: PathBuf,
    },
    /// Arithmetic equivalence of two definite forms.
    GlEquiv {
        #[arg(short = 'a')]
        a: PathBuf,
        #[arg(short = 'b')]
        b: PathBuf,
    },
    /// Stratified quotient of a stacky fan by a group action.
    Quotient {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        action: PathBuf,
        /// Sample this many points for the orbit bijection check.
        #[arg(long, default_value_t = 0)]
        check: usize,
    },
    /// Compatibility of every cell of genus G with a decomposition.
    CompatCheck {
        #[arg(long, value_enum)]
        sigma: SigmaArg,
        #[arg(long)]
        genus: usize,
    },
}

enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(Error::Parse(format!("{}: {e}", path.display()))))
}

fn read_lengths(path: &Path) -> Outcome<Vec<Rat>> {
    let raw: Vec<Value> = read_json(path)?;
    raw.iter()
        .map(|v| match v {
            Value::String(s) => parse_rat(s),
            Value::Number(n) => parse_rat(&n.to_string()),
            other => Err(Error::Parse(format!("not a length: {other}"))),
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::Domain)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn enumerate(genus: usize, pure: bool, dot: Option<&Path>) -> Outcome<Value> {
    let graphs = if pure { enumerate_stable_pure(genus)? } else { enumerate_stable(genus)? };
    let mut records = Vec::with_capacity(graphs.len());
    for (id, g) in graphs.iter().enumerate() {
        records.push(json!({
            "id": id,
            "label": cell_label(g),
            "graph": to_value(g),
            "edges": g.num_edges(),
            "automorphisms": automorphisms(g)?.len(),
        }));
    }
    if let Some(path) = dot {
        let fan = if pure { pure_subfan(genus)? } else { build_moduli_fan(genus)? };
        let name = format!("M{genus}{}", if pure { "pure" } else { "" });
        fs::write(path, fan_to_dot(&fan, &name)).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(Value::Array(records))
}

fn run(cli: &Cli) -> Outcome<Value> {
    match &cli.command {
        Command::Enumerate { genus, pure, dot } => enumerate(*genus, *pure, dot.as_deref()),
        Command::Jacobian { input, lengths } => {
            let g: WeightedGraph = read_json(input)?;
            Ok(to_value(&jacobian(&g, &read_lengths(lengths)?)?))
        }
        Command::Period { input, marking, lengths } => {
            let g: WeightedGraph = read_json(input)?;
            let data: MarkingData = read_json(marking)?;
            let m = Marking::from_data(&g, &data)?;
            Ok(to_value(&marked_period(&g, &m, &read_lengths(lengths)?)?))
        }
        Command::Torelli { input, lengths } => {
            let g: WeightedGraph = read_json(input)?;
            Ok(to_value(&torelli_class(&g, &read_lengths(lengths)?)?))
        }
        Command::Minvec { form } => Ok(to_value(&min_vectors(&read_json::<QuadForm>(form)?)?)),
        Command::PerfectCone { form } => {
            let q: QuadForm = read_json(form)?;
            let cone = perfect_cone(&q)?;
            let rays: Vec<Vec<String>> = cone.rays().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            Ok(json!({ "rays": rays, "dim": cone.dim(), "perfect": is_perfect(&q)? }))
        }
        Command::Delone { form } => Ok(to_value(&delone(&read_json::<QuadForm>(form)?)?)),
        Command::SecondaryCone { form } => Ok(to_value(&secondary_cone_of_form(&read_json::<QuadForm>(form)?)?)),
        Command::Reduce2 { form } => {
            let (h, r) = reduce_binary(&read_json::<QuadForm>(form)?)?;
            Ok(json!({ "h": to_value(&h), "reduced": to_value(&r) }))
        }
        Command::GlEquiv { a, b } => {
            let w: Option<IntMatrix> = gl_equivalent(&read_json(a)?, &read_json(b)?)?;
            Ok(json!({ "equivalent": w.is_some(), "witness": to_value(&w) }))
        }
        Command::Quotient { fan, action, check } => {
            let data: FanData = read_json(fan)?;
            let fan = data.to_fan()?;
            let act: GroupAction = read_json(action)?;
            let q = stratified_quotient_with(&fan, &act, |orbit| orbit[0], cli.cell_budget)?;
            let mut out = json!({
                "fan": to_value(&FanData::from_fan(&q.fan)),
                "orbit_of": q.orbit_of,
                "representatives": q.representatives,
                "transport": to_value(&q.transport),
            });
            if *check > 0 {
                out["bijection"] = to_value(&quotient_point_bijection_check(&fan, &act, *check, cli.seed)?);
            }
            Ok(out)
        }
        Command::CompatCheck { sigma, genus } => {
            let sigma = match sigma {
                SigmaArg::V => Sigma::V,
                SigmaArg::P => Sigma::P,
            };
            let cells = compat_check_genus(*genus, sigma)?;
            let passed = cells.iter().all(|c| c.report.passed());
            Ok(json!({ "genus": genus, "sigma": to_value(&sigma), "passed": passed, "cells": to_value(&cells) }))
        }
    }
}

fn emit(cli: &Cli, v: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string(v).expect("serializable");
    text.push('\n');
    match &cli.output {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("troptor: {e}");
        }
    }
    let (value, code) = match run(&cli) {
        Ok(v) => (v, ExitCode::SUCCESS),
        Err(Failure::Domain(e)) => (json!({ "error": { "kind": e.kind(), "message": e.to_string() } }), ExitCode::from(1)),
        Err(Failure::Io(msg)) => (json!({ "error": { "kind": "io", "message": msg } }), ExitCode::from(1)),
    };
    if let Err(e) = emit(&cli, &value) {
        eprintln!("troptor: {e}");
        return ExitCode::from(1);
    }
    code
}
