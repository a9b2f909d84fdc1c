use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use silting_cli::*;
use silting_core::approximation::{
    add_shift_preenvelope, cosusp_precover, factorization_certificate, generator_pieces, is_left_minimal, left_minimize,
    left_orthogonality_witness, right_orthogonality_witness, susp_envelope_on, EnvelopeResult, Layer,
};
use silting_core::complex::{decompose, minimize, ProjComplex};
use silting_core::glue::{
    add_equivalent, check_generation, check_presilting, glue, glue_shortcut, GenerationOutcome, GenerationReport, GlueCertificate,
    GlueOptions,
};
use silting_core::hom::{hom_basis, support_window, NonPositivityReport};
use silting_core::linalg::Field;
use silting_core::quiver::PathAlgebra;
use silting_core::recollement::idempotent_recollement_by_labels;

#[derive(Parser)]
#[command(name = "silting", version, about = "Homotopy categories of projectives over path algebras, envelopes and silting gluing")]
struct Cli {
    /// Write the KA3 example files into DIR and exit
    #[arg(long, value_name = "DIR")]
    fixtures: Option<PathBuf>,
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the field of every algebra read (`Q` or `Fp:<p>`)
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,
    #[command(subcommand)]
    command: Option<Command>,
}

fn parse_field(s: &str) -> Result<Field, String> {
    Field::parse(s).ok_or_else(|| format!("expected `Q` or `Fp:<prime>`, got `{s}`"))
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra file
    AlgebraCheck { algebra: PathBuf },
    /// Dimensions of Hom(X, Y[k]) over the support window, or at one shift
    Hom {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<i32>,
        /// Include chain-map representatives of each basis
        #[arg(long)]
        representatives: bool,
    },
    /// Minimal model of a complex
    Minimize { x: PathBuf },
    /// Krull-Schmidt decomposition (rational field only)
    Decompose { x: PathBuf },
    /// susp(T)-envelope of M; add(T)[s]-envelope with --shift; cosusp(T)-precover with --precover
    Envelope {
        m: PathBuf,
        #[arg(required = true)]
        t: Vec<PathBuf>,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "precover")]
        shift: Option<i32>,
        #[arg(long)]
        precover: bool,
    },
    /// Recollement data for an idempotent given by vertex labels
    Recollement {
        algebra: PathBuf,
        /// Vertex labels of e, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        e: Vec<String>,
    },
    /// Glue silting sets over eAe and A/AeA
    Glue {
        algebra: PathBuf,
        /// Vertex labels of e, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        e: Vec<String>,
        /// Silting set over eAe (default: eAe itself)
        #[arg(long, num_args = 1..)]
        tc: Vec<PathBuf>,
        /// Silting set over A/AeA
        #[arg(long, num_args = 1..)]
        tb: Vec<PathBuf>,
        /// Split i_*(T_B) directly; requires T_C = {eAe}
        #[arg(long)]
        shortcut: bool,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Non-positivity and generation certificates for a set of complexes
    CheckSilting {
        #[arg(required = true)]
        t: Vec<PathBuf>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

struct Report {
    json: Value,
    summary: Vec<String>,
    /// a mathematical check failed
    failed: bool,
}

impl Report {
    fn ok(json: Value, summary: String) -> Self {
        Report {
            json,
            summary: vec![summary],
            failed: false,
        }
    }
}

fn versioned(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        let mut out = Map::new();
        out.insert("v".into(), json!(FORMAT_VERSION));
        out.append(m);
        return Value::Object(out);
    }
    v
}

fn load_all(paths: &[PathBuf], over: Option<&Arc<PathAlgebra>>, field: Option<Field>) -> Result<Vec<ProjComplex>, CliError> {
    let mut out: Vec<ProjComplex> = Vec::new();
    for p in paths {
        let alg = over.cloned().or_else(|| out.first().map(|x| x.algebra().clone()));
        out.extend(load_complexes(p, alg.as_ref(), field)?);
    }
    Ok(out)
}

fn layers_json(layers: &[Layer]) -> Value {
    Value::Array(
        layers
            .iter()
            .map(|l| {
                json!({
                    "shift": l.shift,
                    "targets": l.summands.iter().map(|s| s.object().describe()).collect::<Vec<_>>(),
                    "s_before": l.s_before,
                    "s_after": l.s_after,
                    "residue": complex_json(&l.residue),
                })
            })
            .collect(),
    )
}

fn presilting_json(r: &NonPositivityReport) -> Value {
    json!({
        "passed": r.passed(),
        "pairs_checked": r.pairs_checked,
        "witness": r.witness.as_ref().map(|w| json!({
            "source": w.source_index, "target": w.target_index, "shift": w.shift, "map": map_json(&w.map),
        })),
    })
}

fn generation_json(r: &GenerationReport) -> Value {
    let (outcome, depth, found) = match &r.outcome {
        GenerationOutcome::Generated { depth, found } => ("generated", Some(*depth), Some(found.clone())),
        GenerationOutcome::Inconclusive => ("inconclusive", None, None),
        GenerationOutcome::NotGenerated => ("not generated", None, None),
    };
    json!({
        "outcome": outcome,
        "depth": depth,
        "found": found,
        "pool": r.pool.iter().map(|x| x.describe()).collect::<Vec<_>>(),
        "steps": r.steps.iter().map(|s| json!({
            "depth": s.depth, "source": s.source, "target": s.target, "shift": s.shift,
            "basis_index": s.basis_index, "produced": s.produced,
        })).collect::<Vec<_>>(),
        "k0": { "matrix": r.k0.matrix, "rank": r.k0.rank, "unimodular": r.k0.unimodular },
    })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn algebra_check(path: &Path, field: Option<Field>) -> Result<Report, CliError> {
    let alg = load_algebra(path, field)?;
    let q = alg.quiver();
    let dims: Vec<usize> = (0..alg.vertex_count()).map(|v| alg.projective_dim(v)).collect();
    let json = json!({
        "algebra": algebra_to_file(&alg),
        "dim": alg.dim(),
        "projective_dims": dims,
    });
    let summary = format!("{} vertices, {} arrows, dimension {} over {}", q.vertex_count(), q.arrows().len(), alg.dim(), alg.field());
    Ok(Report::ok(json, summary))
}

fn hom(x: &Path, y: &Path, shift: Option<i32>, reps: bool, field: Option<Field>) -> Result<Report, CliError> {
    let x = load_complex(x, None, field)?;
    let y = load_complex(y, Some(x.algebra()), field)?;
    let window = match shift {
        Some(k) => Some((k, k)),
        None => support_window(&x, &y),
    };
    let mut out = Map::new();
    out.insert("window".into(), json!(window.map(|(a, b)| [a, b])));
    let mut lines = Vec::new();
    if let Some((lo, hi)) = window {
        for k in lo..=hi {
            let b = hom_basis(&x, &y, k)?;
            let mut entry = Map::new();
            entry.insert("dim".into(), json!(b.dim()));
            if reps {
                entry.insert("representatives".into(), Value::Array(b.representatives.iter().map(map_json).collect()));
            }
            out.insert(k.to_string(), Value::Object(entry));
            lines.push(format!("dim Hom(X, Y[{k}]) = {}", b.dim()));
        }
    }
    Ok(Report {
        json: Value::Object(out),
        summary: lines,
        failed: false,
    })
}

fn minimize_cmd(x: &Path, field: Option<Field>) -> Result<Report, CliError> {
    let x = load_complex(x, None, field)?;
    let m = minimize(&x).complex;
    let summary = format!("{} ≃ {}", x.describe(), m.describe());
    Ok(Report::ok(complex_json(&m), summary))
}

fn decompose_cmd(x: &Path, field: Option<Field>) -> Result<Report, CliError> {
    let x = load_complex(x, None, field)?;
    let d = decompose(&x)?;
    let json = json!({
        "summands": d.summands.iter().map(|s| json!({
            "summand": s.complex.describe(),
            "multiplicity": s.multiplicity,
            "local_certified": s.local_certified,
            "complex": complex_json(&s.complex),
        })).collect::<Vec<_>>(),
    });
    Ok(Report::ok(json, format!("X ≅ {}", d.describe())))
}

fn envelope_cmd(m: &Path, t: &[PathBuf], shift: Option<i32>, precover: bool, field: Option<Field>) -> Result<Report, CliError> {
    let m = load_complex(m, None, field)?;
    let t = load_all(t, Some(m.algebra()), field)?;
    let pieces = generator_pieces(&t)?;
    let (env, checks): (EnvelopeResult, Vec<(&str, bool)>) = if precover {
        let env = cosusp_precover(&m, &t)?;
        let orth = left_orthogonality_witness(&env.u, &pieces)?.is_none();
        let minimal = env.minimal;
        (env, vec![("cone orthogonal", orth), ("right minimal", minimal)])
    } else if let Some(s) = shift {
        let env = left_minimize(&add_shift_preenvelope(&m, &t, s)?)?;
        let minimal = is_left_minimal(&env.map)?;
        (env, vec![("left minimal", minimal)])
    } else {
        let env = susp_envelope_on(&m, &pieces)?;
        let fact = factorization_certificate(&env.map, &pieces)?.is_none();
        let orth = right_orthogonality_witness(&env.v, &pieces)?.is_none();
        let minimal = env.minimal;
        (env, vec![("factorization", fact), ("cocone orthogonal", orth), ("left minimal", minimal)])
    };
    let certificate: Map<String, Value> = checks.iter().map(|(k, v)| (k.replace(' ', "_"), json!(v))).collect();
    let json = json!({
        "class": format!("{:?}", env.class),
        "triangle": { "v": complex_json(&env.v), "m": complex_json(&m), "u": complex_json(&env.u) },
        "map": map_json(&env.map),
        "layers": layers_json(&env.layers),
        "certificate": certificate,
    });
    let mut summary = vec![format!("{} → {} → {} →", env.v.describe(), m.describe(), env.u.describe())];
    summary.extend(checks.iter().map(|(k, v)| format!("{k}: {}", verdict(*v))));
    Ok(Report {
        json,
        summary,
        failed: checks.iter().any(|c| !c.1),
    })
}

fn recollement_cmd(path: &Path, e: &[String], field: Option<Field>) -> Result<Report, CliError> {
    let alg = load_algebra(path, field)?;
    let rec = idempotent_recollement_by_labels(&alg, e)?;
    let mut lines = Vec::new();
    let res: Vec<Value> = rec
        .resolutions
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let c = rec.resolution_complex(i);
            let label = alg.vertex_label(r.vertex);
            lines.push(format!("P̄{label} ≃ {}", c.describe()));
            json!({
                "vertex": label,
                "generators": r.generators.iter().map(|&p| alg.path_name(p)).collect::<Vec<_>>(),
                "complex": complex_json(&c),
            })
        })
        .collect();
    let json = json!({
        "e": rec.subset.iter().map(|&v| alg.vertex_label(v)).collect::<Vec<_>>(),
        "c": algebra_to_file(&rec.c),
        "b": algebra_to_file(&rec.b),
        "resolutions": res,
    });
    Ok(Report {
        json,
        summary: lines,
        failed: false,
    })
}

fn certificate_json(cert: &GlueCertificate) -> Value {
    let alg = &cert.recollement.algebra;
    json!({
        "summary": format!("T ≅ {}", cert.describe()),
        "passed": cert.passed(),
        "shortcut": cert.shortcut,
        "e": cert.recollement.subset.iter().map(|&v| alg.vertex_label(v)).collect::<Vec<_>>(),
        "t": cert.t.iter().map(complex_json).collect::<Vec<_>>(),
        "decomposition": classes_json(&cert.decomposition),
        "triangles": cert.pieces.iter().map(|p| json!({
            "input": p.input,
            "t_tilde": complex_json(&p.t_tilde),
            "i_star": complex_json(&p.m),
            "u_shifted": complex_json(&p.u_shifted),
            "to_i_star": map_json(&p.to_m),
            "to_u": map_json(&p.to_u),
            "layers": layers_json(&p.layers),
        })).collect::<Vec<_>>(),
        "reports": {
            "star": {
                "passed": cert.star.passed(),
                "trace_failure": cert.star.trace_failure.as_ref().map(|(i, r)| json!({ "piece": i, "reason": r })),
                "orthogonality_witness": cert.star.orthogonality_witness.map(|(i, t, k)| json!({ "piece": i, "t_c": t, "shift": k })),
            },
            "presilting": presilting_json(&cert.presilting),
            "generation": generation_json(&cert.generation),
            "co_aisle": {
                "passed": cert.co_aisle.passed(),
                "probes": cert.co_aisle.probes.len(),
                "violations": cert.co_aisle.probes.iter().enumerate().filter(|(_, p)| p.left != p.right).map(|(i, _)| i).collect::<Vec<_>>(),
            },
        },
    })
}

#[allow(clippy::too_many_arguments)]
fn glue_cmd(
    path: &Path,
    e: &[String],
    tc: &[PathBuf],
    tb: &[PathBuf],
    shortcut: bool,
    depth: usize,
    seed: u64,
    field: Option<Field>,
) -> Result<Report, CliError> {
    let alg = load_algebra(path, field)?;
    let rec = idempotent_recollement_by_labels(&alg, e)?;
    let t_c = load_all(tc, Some(&rec.c), field)?;
    let t_b = load_all(tb, Some(&rec.b), field)?;
    let opts = GlueOptions {
        depth,
        seed,
        ..GlueOptions::default()
    };
    let cert = if shortcut {
        let canonical = vec![ProjComplex::stalk_sum(rec.c.clone(), &(0..rec.c.vertex_count()).collect::<Vec<_>>(), 0)];
        if !t_c.is_empty() && !add_equivalent(&t_c, &canonical)? {
            return Err(CliError::Input(String::from("--shortcut requires T_C = {eAe}")));
        }
        glue_shortcut(&rec, &t_b, &opts)?
    } else {
        glue(&rec, &t_c, &t_b, &opts)?
    };
    let summary = vec![
        format!("T ≅ {}", cert.describe()),
        format!("condition (⋆): {}", verdict(cert.star.passed())),
        format!("presilting: {}", verdict(cert.presilting.passed())),
        format!(
            "generation: {} (K₀ {})",
            verdict(cert.generation.generated()),
            if cert.generation.k0.unimodular { "unimodular" } else { "not unimodular" }
        ),
        format!("co-aisle agreement on {} probes: {}", cert.co_aisle.probes.len(), verdict(cert.co_aisle.passed())),
    ];
    Ok(Report {
        json: certificate_json(&cert),
        summary,
        failed: !cert.passed(),
    })
}

fn check_silting_cmd(t: &[PathBuf], depth: usize, field: Option<Field>) -> Result<Report, CliError> {
    let t = load_all(t, None, field)?;
    let pre = check_presilting(&t)?;
    let generation = check_generation(&t, depth)?;
    let ok = pre.passed() && generation.generated() && generation.k0.unimodular;
    let json = json!({
        "silting": ok,
        "presilting": presilting_json(&pre),
        "generation": generation_json(&generation),
    });
    let summary = vec![
        format!("presilting: {}", verdict(pre.passed())),
        format!("generation: {}", verdict(generation.generated())),
    ];
    Ok(Report {
        json,
        summary,
        failed: !ok,
    })
}

fn run(cli: Cli) -> Result<Report, CliError> {
    if let Some(dir) = &cli.fixtures {
        let written = write_fixtures(dir)?;
        let names: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
        return Ok(Report::ok(json!({ "written": names }), format!("wrote {} fixture files", names.len())));
    }
    let field = cli.field;
    match cli.command {
        None => Err(CliError::Input(String::from("no command given; see --help"))),
        Some(Command::AlgebraCheck { algebra }) => algebra_check(&algebra, field),
        Some(Command::Hom { x, y, shift, representatives }) => hom(&x, &y, shift, representatives, field),
        Some(Command::Minimize { x }) => minimize_cmd(&x, field),
        Some(Command::Decompose { x }) => decompose_cmd(&x, field),
        Some(Command::Envelope { m, t, shift, precover }) => envelope_cmd(&m, &t, shift, precover, field),
        Some(Command::Recollement { algebra, e }) => recollement_cmd(&algebra, &e, field),
        Some(Command::Glue { algebra, e, tc, tb, shortcut, depth }) => glue_cmd(&algebra, &e, &tc, &tb, shortcut, depth, cli.seed, field),
        Some(Command::CheckSilting { t, depth }) => check_silting_cmd(&t, depth, field),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&versioned(report.json)).expect("serializable"));
            for line in &report.summary {
                eprintln!("{line}");
            }
            ExitCode::from(if report.failed { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
