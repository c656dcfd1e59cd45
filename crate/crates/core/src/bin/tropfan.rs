use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use std::process::ExitCode;

use tropfan::combtypes::Split;
use tropfan::cyclespec::parse_cycle;
use tropfan::irreducibility::is_globally_irreducible;
use tropfan::modulifan::{format_pairs, is_balanced, psi, psi_natural, psi_skeleton, skeleton, vital, Cycle};
use tropfan::paramcurves::{analyze_regions, mult_closed, special_position, Degree, ParamType, Version};
use tropfan::report::Report;
use tropfan::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "tropfan",
    version,
    about = "Balanced fans in M_0,n, divisor irreducibility and plane curve multiplicities"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a skeleton of M_0,n (or of a ψ-class) is balanced.
    SkeletonCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        codim: usize,
        /// Use the skeleton of ψ_i instead of M_0,n.
        #[arg(long)]
        psi: Option<usize>,
        /// Also print the weighted ray sum at every face.
        #[arg(long)]
        verbose: bool,
    },
    /// Print a divisor on M_0,n as a weighted list of cones.
    #[command(group(ArgGroup::new("which").required(true).args(["vital", "psi", "psi_natural", "sum"])))]
    Divisor {
        #[arg(long)]
        n: usize,
        /// Vital divisor D^S, e.g. `1,2`.
        #[arg(long)]
        vital: Option<String>,
        #[arg(long)]
        psi: Option<usize>,
        #[arg(long)]
        psi_natural: Option<usize>,
        /// Cycle spec such as `psi:1+psi:2`.
        #[arg(long)]
        sum: Option<String>,
    },
    /// Decide irreducibility of a divisor given as a cycle spec.
    Irreducible {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        divisor: String,
    },
    /// Image of the codimension-one cycle of curves through points in special position.
    Special {
        /// `d:<k>` or explicit directions `a,b;c,d;...`.
        #[arg(long)]
        degree: String,
        #[arg(long)]
        version: String,
    },
    /// Multiplicity of a codimension-one type, directly and by closed formula.
    Mult {
        #[arg(long)]
        degree: String,
        /// Splits of the type, e.g. `1,3` or `1,2;1,2,3`.
        #[arg(long = "type")]
        ctype: String,
    },
}

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().filter(|(_, v)| !v.is_null()).map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn big_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(i) => Value::from(i),
        Err(_) => Value::from(x.to_string()),
    }
}

fn cycle_text(z: &Cycle) -> String {
    let mut out = format!("cycle in M_0,{} of dimension {}, {} cones\n", z.n(), z.dim(), z.len());
    for (t, w) in z.cones() {
        out.push_str(&format!("{w:>4}  {t}\n"));
    }
    out
}

/// The report and its text rendering.
fn run(cmd: &Command) -> Result<(Report, String), Error> {
    match cmd {
        Command::SkeletonCheck { n, codim, psi: which, verbose } => {
            let z = match which {
                Some(i) => psi_skeleton(*i, *n, *codim)?,
                None => skeleton(*n, *codim)?,
            };
            let cert = is_balanced(&z);
            let balanced = cert.is_balanced();
            let mut result = json!({
                "balanced": balanced,
                "cones": z.len(),
                "faces": cert.faces.len(),
                "first_violation": cert.first_violation(),
            });
            let mut text = format!("balanced: {balanced} ({} cones, {} faces)\n", z.len(), cert.faces.len());
            if let Some(bad) = cert.first_violation() {
                text.push_str(&format!("first violation at face {}\n", bad.face));
            }
            if *verbose {
                result["face_sums"] = json!(cert
                    .faces
                    .iter()
                    .map(|f| json!({"face": f.face.to_string(), "sum": f.sum.coords()}))
                    .collect::<Vec<_>>());
                for f in &cert.faces {
                    text.push_str(&format!("face {}: {}\n", f.face, format_pairs(&f.sum)));
                }
            }
            let p =
                params(&[("n", json!(n)), ("codim", json!(codim)), ("psi", json!(which)), ("verbose", json!(verbose))]);
            Ok((Report::new("skeleton-check", p, result, balanced), text))
        }
        Command::Divisor { n, vital: s, psi: i, psi_natural: j, sum } => {
            let z = if let Some(s) = s {
                let labels = s
                    .split(',')
                    .map(|l| l.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad label {l:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                vital(&Split::new(*n, &labels)?)?
            } else if let Some(i) = i {
                psi(*i, *n)?
            } else if let Some(j) = j {
                psi_natural(*j, *n)?
            } else {
                parse_cycle(*n, sum.as_deref().expect("one option is required"))?
            };
            let p = params(&[
                ("n", json!(n)),
                ("vital", json!(s)),
                ("psi", json!(i)),
                ("psi_natural", json!(j)),
                ("sum", json!(sum)),
            ]);
            let text = cycle_text(&z);
            Ok((Report::new("divisor", p, json!(z), true), text))
        }
        Command::Irreducible { n, divisor } => {
            let z = parse_cycle(*n, divisor)?;
            let r = is_globally_irreducible(&z)?;
            let text = format!(
                "global: {}\nlocal: {}\nconnected: {} ({} components)\nweight space dimension: {}\n",
                r.global, r.local, r.connected, r.components, r.weight_space_dim
            );
            let p = params(&[("n", json!(n)), ("divisor", json!(divisor))]);
            Ok((Report::new("irreducible", p, json!(r), r.global), text))
        }
        Command::Special { degree, version } => {
            let d: Degree = degree.parse()?;
            let v: Version = version.parse()?;
            let cells = special_position(&d, v)?;
            let mut text = format!("{} image cells\n", cells.len());
            for c in &cells {
                text.push_str(&format!("{:>4}  {:?}\n", c.weight, c.rays));
            }
            let p = params(&[("degree", json!(d.to_string())), ("version", json!(v.to_string()))]);
            Ok((Report::new("special", p, json!({ "cells": cells }), true), text))
        }
        Command::Mult { degree, ctype } => {
            let d: Degree = degree.parse()?;
            let p = ParamType::parse(d.clone(), ctype)?;
            let direct = p.mult_direct()?;
            let dec = analyze_regions(&p);
            let closed = match mult_closed(&p) {
                Ok(c) => Some(c),
                Err(Error::NoClosedForm(_)) => None,
                Err(e) => return Err(e),
            };
            let agree = closed.as_ref().map(|c| *c == direct);
            let result = json!({
                "type": p.comb_type().to_string(),
                "classification": dec.classification.to_string(),
                "structure": dec.structure.to_string(),
                "direct": big_json(&direct),
                "closed": closed.as_ref().map(big_json),
                "agree": agree,
            });
            let text = format!(
                "type {}: {} (structure {})\ndirect: {direct}\nclosed: {}\nagree: {}\n",
                p.comb_type(),
                dec.classification,
                dec.structure,
                closed.as_ref().map_or("none".to_string(), ToString::to_string),
                agree.map_or("n/a".to_string(), |a| a.to_string()),
            );
            let params = params(&[("degree", json!(d.to_string())), ("type", json!(ctype))]);
            Ok((Report::new("mult", params, result, agree != Some(false)), text))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli.command) {
        Ok((report, text)) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{text}"),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        // overlapping image cells: the computation ran but produced no fan
        Err(e @ Error::RefinementRequired(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
