use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use ksparity::incidence::{
    decide_structure_with, generate_cubic_structures, load_graph6, CompletionLimits, DecisionReport,
    IncidenceStructure, Verdict,
};
use ksparity::prooffinder::{
    build_general_constraints, build_ray_constraints, count_proofs, enumerate_proofs, mermin_square, min_weight_proofs,
    proof_size_distribution, sample_proof, ConstraintSystem, GeneralMode, ProofJson,
};
use ksparity::raysystems::{find_bases, load_rays, BuiltinSystem, RaySystem};
use ksparity::{Error, Result};

use crate::{budget, Command, Format, Global, IncidenceSource, Mode, RaySource, Source, SystemName};

pub fn run(cmd: &Command, g: &Global) -> Result<()> {
    let start = Instant::now();
    let out = match cmd {
        Command::Bases { source, list } => bases(source, *list, g),
        Command::Count { source } => count(source, g),
        Command::Distribution { source } => distribution(source, g),
        Command::Minproofs { source, max_size, list } => minproofs(source, *max_size, *list, g),
        Command::Incidence { source, qubits, max_rules, max_length, max_nodes } => {
            let limits = CompletionLimits { max_rules: *max_rules, max_length: *max_length, ..Default::default() };
            incidence(source, *qubits as usize, &limits, *max_nodes, g)
        }
        Command::Sample { source, samples } => sample(source, *samples, g),
        Command::Enumerate { source, limit } => enumerate(source, *limit, g),
    };
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    out
}

fn builtin(name: SystemName) -> Option<BuiltinSystem> {
    match name {
        SystemName::Cell600 => Some(BuiltinSystem::Cell600),
        SystemName::Pauli60_105 => Some(BuiltinSystem::Pauli60_105),
        SystemName::E8 => Some(BuiltinSystem::E8),
        SystemName::Mermin => None,
    }
}

fn ray_system(
    system: Option<SystemName>,
    rays: Option<&std::path::Path>,
    dimension: Option<usize>,
) -> Result<RaySystem> {
    if let Some(path) = rays {
        let (rs, merged) = load_rays(path, dimension)?;
        for w in merged {
            eprintln!("warning: line {} is parallel to ray {} and was merged", w.line, w.merged_into);
        }
        return Ok(rs);
    }
    let name = system.expect("clap requires a source");
    builtin(name)
        .map(BuiltinSystem::build)
        .ok_or_else(|| Error::InvalidInput("mermin is a constraint system, not a ray system".into()))
}

fn constraint_system(src: &Source) -> Result<ConstraintSystem> {
    let direct = match (src.system, &src.structure) {
        (Some(SystemName::Mermin), _) => Some(mermin_square()),
        (_, Some(path)) => Some(ConstraintSystem::from_json(&std::fs::read_to_string(path)?)?),
        _ => None,
    };
    if let Some(cs) = direct {
        if src.mode != Mode::Ray {
            return Err(Error::InvalidInput("--mode applies to ray systems only".into()));
        }
        return Ok(cs);
    }
    let rs = ray_system(src.system, src.rays.as_deref(), src.dimension)?;
    let bases = find_bases(&rs);
    match src.mode {
        Mode::Ray => build_ray_constraints(&bases, &rs),
        Mode::GeneralFull => Ok(build_general_constraints(&bases, &rs, GeneralMode::Full)?.0),
        Mode::GeneralBasis => Ok(build_general_constraints(&bases, &rs, GeneralMode::BasisColumns)?.0),
    }
}

fn sink(g: &Global) -> Result<Box<dyn Write>> {
    Ok(match &g.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(g: &Global, report: &impl Serialize) -> Result<()> {
    let value = serde_json::to_value(report)?;
    let mut w = sink(g)?;
    match g.format {
        Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&value)?)?,
        Format::Table => write_table(&mut w, &value)?,
    }
    w.flush()?;
    Ok(())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.len() <= 16 && items.iter().all(|x| !x.is_object()) => {
            items.iter().map(scalar).collect::<Vec<_>>().join(" ")
        }
        Value::Array(items) => format!("[{} items]", items.len()),
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// Per-structure rows keep only the verdict columns.
fn brief(row: &Value) -> Value {
    const KEYS: [&str; 7] =
        ["index", "verdict", "certificate", "rewrite_order", "rewrite_rules", "product_normal_form", "reason"];
    match row {
        Value::Object(m) if m.contains_key("verdict") => {
            Value::Object(KEYS.iter().filter_map(|&k| m.get(k).map(|v| (k.to_owned(), v.clone()))).collect())
        }
        other => other.clone(),
    }
}

fn write_table(w: &mut dyn Write, v: &Value) -> io::Result<()> {
    let Value::Object(m) = v else {
        return writeln!(w, "{}", scalar(v));
    };
    let width = m.keys().map(String::len).max().unwrap_or(0);
    for (k, v) in m {
        match v {
            Value::Array(rows) if k == "structures" || k == "proofs" || k == "samples" => {
                writeln!(w, "{k}:")?;
                for r in rows {
                    writeln!(w, "  {}", scalar(&brief(r)))?;
                }
            }
            _ => writeln!(w, "{k:width$}  {}", scalar(v))?,
        }
    }
    Ok(())
}

fn bases(src: &RaySource, list: bool, g: &Global) -> Result<()> {
    let rs = ray_system(src.system, src.rays.as_deref(), src.dimension)?;
    let bs = find_bases(&rs);
    let mut report = json!({
        "system": rs.name(),
        "dimension": rs.dimension(),
        "rays": rs.len(),
        "orthogonal_pairs": rs.orthogonality_edges().len(),
        "bases": bs.len(),
    });
    if list {
        report["basis_list"] = json!(bs.bases);
    }
    emit(g, &report)
}

fn system_header(cs: &ConstraintSystem) -> Value {
    json!({
        "system": cs.name(),
        "constraints": cs.constraint_count(),
        "observables": cs.observable_count(),
    })
}

fn count(src: &Source, g: &Global) -> Result<()> {
    let cs = constraint_system(src)?;
    let n = cs.constraint_count();
    let c = count_proofs(&cs);
    let mut report = system_header(&cs);
    report["rank_h"] = json!(cs.h().rank());
    report["rank_h_prime"] = json!(cs.h_prime().rank());
    report["kernel_dimension_h"] = json!(n - cs.h().rank());
    report["kernel_dimension_h_prime"] = json!(n - cs.h_prime().rank());
    report["proofs_log2"] = json!(c.log2());
    report["proofs"] = json!(c.to_decimal());
    emit(g, &report)
}

fn distribution(src: &Source, g: &Global) -> Result<()> {
    let cs = constraint_system(src)?;
    let d = proof_size_distribution(&cs, &budget(g))?;
    let mut report = system_header(&cs);
    report["total"] = json!(d.total().to_string());
    report["distribution"] = json!(d.to_json());
    emit(g, &report)
}

fn minproofs(src: &Source, max_size: usize, list: bool, g: &Global) -> Result<()> {
    let cs = constraint_system(src)?;
    let (proofs, stats) = min_weight_proofs(&cs, max_size, &budget(g))?;
    eprintln!(
        "mitm: stored {} probes {} passes {} key bits {}",
        stats.stored, stats.probes, stats.passes, stats.key_bits
    );
    let mut by_size = std::collections::BTreeMap::<usize, u64>::new();
    for p in &proofs {
        *by_size.entry(p.size()).or_default() += 1;
    }
    let mut report = system_header(&cs);
    report["max_size"] = json!(max_size);
    report["count"] = json!(proofs.len());
    report["by_size"] = json!(by_size.into_iter().collect::<Vec<_>>());
    if list {
        report["proofs"] = json!(proofs.iter().map(|p| p.to_json(&cs)).collect::<Vec<_>>());
    }
    emit(g, &report)
}

fn sample(src: &Source, samples: usize, g: &Global) -> Result<()> {
    let cs = constraint_system(src)?;
    let mut drawn: Vec<ProofJson> = Vec::with_capacity(samples);
    for k in 0..samples as u64 {
        match sample_proof(&cs, g.seed.wrapping_add(k))? {
            Some(p) => drawn.push(p.to_json(&cs)),
            None => break,
        }
    }
    let mut report = system_header(&cs);
    report["seed"] = json!(g.seed);
    report["proofs_log2"] = json!(count_proofs(&cs).log2());
    report["samples"] = json!(drawn);
    emit(g, &report)
}

/// One JSON object per line; `--limit` lifts the enumeration cap.
fn enumerate(src: &Source, limit: Option<u64>, g: &Global) -> Result<()> {
    let cs = constraint_system(src)?;
    let b = match limit {
        Some(_) => budget(g).with_enumeration_log2(64),
        None => budget(g),
    };
    let mut w = sink(g)?;
    let mut io_error = None;
    let mut remaining = limit.unwrap_or(u64::MAX);
    if remaining == 0 {
        return Ok(());
    }
    let visited = enumerate_proofs(&cs, &b, |p| {
        let line = match g.format {
            Format::Json => serde_json::to_string(&p.to_json(&cs)).expect("proof serializes"),
            Format::Table => p.constraints.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
        };
        if let Err(e) = writeln!(w, "{line}") {
            io_error = Some(e);
            return false;
        }
        remaining -= 1;
        remaining > 0
    })?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    w.flush()?;
    eprintln!("enumerated {visited} proofs");
    Ok(())
}

#[derive(Serialize)]
struct StructureEntry {
    index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    #[serde(flatten)]
    report: DecisionReport,
}

#[derive(Serialize)]
struct Rejection {
    line: usize,
    reason: String,
}

#[derive(Serialize, Default)]
struct Summary {
    producing: usize,
    not_producing: usize,
    inconclusive: usize,
}

#[derive(Serialize)]
struct IncidenceReport {
    qubits: usize,
    summary: Summary,
    rejected: Vec<Rejection>,
    structures: Vec<StructureEntry>,
}

fn incidence(
    src: &IncidenceSource,
    qubits: usize,
    limits: &CompletionLimits,
    max_nodes: u64,
    g: &Global,
) -> Result<()> {
    let mut items: Vec<(Option<usize>, IncidenceStructure)> = Vec::new();
    let mut rejected = Vec::new();
    if let Some(n) = src.cubic {
        items.extend(generate_cubic_structures(n)?.into_iter().map(|s| (None, s)));
    } else if let Some(path) = &src.graph6 {
        for rec in load_graph6(path)? {
            match rec.structure {
                Ok(s) => items.push((Some(rec.line), s)),
                Err(reason) => {
                    eprintln!("warning: line {}: {reason}", rec.line);
                    rejected.push(Rejection { line: rec.line, reason });
                }
            }
        }
    } else if let Some(path) = &src.structure {
        items.push((None, IncidenceStructure::from_json(&std::fs::read_to_string(path)?)?));
    }
    let decisions: Vec<_> = items
        .par_iter()
        .map(|(_, inc)| decide_structure_with(inc, qubits, limits, max_nodes))
        .collect::<Result<_>>()?;
    let mut summary = Summary::default();
    let mut structures = Vec::with_capacity(items.len());
    for (index, ((line, inc), d)) in items.iter().zip(&decisions).enumerate() {
        match d.verdict {
            Verdict::ProofFound(_) => summary.producing += 1,
            Verdict::NoProofPossible => summary.not_producing += 1,
            Verdict::Inconclusive(_) => summary.inconclusive += 1,
        }
        structures.push(StructureEntry { index, line: *line, report: d.report(inc) });
    }
    emit(g, &IncidenceReport { qubits, summary, rejected, structures })
}
