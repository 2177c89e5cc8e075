use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use plumbhf::format::{rational_string, root_to_dot, GraphDocument, RootJson};
use plumbhf::lattice::{definiteness, intersection_form, Definiteness, PlumbingGraph};
use plumbhf::obstruction::{exotic_pair_check, run_pipeline, ObstructionContext};
use plumbhf::oracle::{oracle_graded_root, LatticeBox, DEFAULT_MAX_LATTICE_POINTS};
use plumbhf::root::{
    canonical_basis, d_invariant, graded_root, is_almost_rational, tau_sequence, tau_sequence_auto,
    Certification, GradedRoot, TauSequence,
};
use plumbhf::seifert::{brieskorn_graph, star_legs};
use plumbhf::tau::{tau_pair, PresentationDocument};
use plumbhf::BigRational;
use serde_json::{json, Value};

use crate::report::RunReport;
use crate::{Cli, Command};

/// Largest cutoff tried when none is given.
const MAX_AUTO_CUTOFF: usize = 1 << 24;

pub fn exit_code(err: &anyhow::Error) -> u8 {
    use plumbhf::Error as E;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<plumbhf::Error>() {
            return match e {
                E::NotNegativeDefinite => 3,
                E::NotAlmostRational(_) => 4,
                E::Unstabilized { .. } => 5,
                E::BoxTooLarge { .. } | E::IterationCap { .. } | E::Overflow(_) => 1,
                _ => 2,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
        if let Some(Failure(code)) = cause.downcast_ref::<Failure>() {
            return *code;
        }
    }
    1
}

/// Error carrying an explicit exit code.
#[derive(Debug)]
struct Failure(u8);

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exit {}", self.0)
    }
}

impl std::error::Error for Failure {}

pub fn run(cli: &Cli) -> Result<String> {
    let echo: Vec<String> = std::env::args().skip(1).collect();
    match &cli.command {
        Command::Brieskorn { a1, a2, a3, out } => {
            let args = format!("{a1} {a2} {a3}");
            let mut report = RunReport::new(echo, &[args.as_bytes()], cli.timing);
            brieskorn(&mut report, (*a1, *a2, *a3), out.as_deref())?;
            Ok(report.render(cli.json))
        }
        Command::Root {
            graph,
            cutoff,
            dot,
            oracle,
            d,
            root_json,
        } => {
            let bytes = read(graph)?;
            let mut report = RunReport::new(echo, &[&bytes], cli.timing);
            let (g, center) = parse_graph(&bytes)?;
            let (tau, root) = compute_root(&g, center, *cutoff)?;
            describe_root(&mut report, &tau, &root, *d);
            if let Some(path) = dot {
                fs::write(path, root_to_dot(&root))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if let Some(path) = root_json {
                fs::write(path, RootJson::new(&root).to_json() + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if *oracle {
                run_oracle(&mut report, &g, &root)?;
            }
            Ok(report.render(cli.json))
        }
        Command::D { graph, cutoff } => {
            let bytes = read(graph)?;
            let mut report = RunReport::new(echo, &[&bytes], cli.timing);
            let (g, center) = parse_graph(&bytes)?;
            let (tau, root) = compute_root(&g, center, *cutoff)?;
            describe_root(&mut report, &tau, &root, true);
            Ok(report.render(cli.json))
        }
        Command::Tau { presentation } => {
            let bytes = read(presentation)?;
            let mut report = RunReport::new(echo, &[&bytes], cli.timing);
            tau(&mut report, &bytes)?;
            Ok(report.render(cli.json))
        }
        Command::Obstruct {
            graph,
            tau_set,
            presentation,
            g4,
            grading,
            cutoff,
        } => {
            let bytes = read(graph)?;
            let pres_bytes = presentation.as_deref().map(read).transpose()?;
            let mut inputs: Vec<&[u8]> = vec![&bytes];
            if let Some(p) = &pres_bytes {
                inputs.push(p);
            }
            let mut report = RunReport::new(echo, &inputs, cli.timing);
            let set = match (tau_set.as_deref(), &pres_bytes) {
                (Some(text), None) => parse_tau_set(text)?,
                (None, Some(p)) => {
                    let pair = tau_pair(&PresentationDocument::from_json(utf8(p)?)?);
                    Some(pair.as_set())
                }
                _ => bail!(usage("obstruct needs --tau-set or --presentation")),
            };
            let grading: BigRational = grading
                .parse()
                .map_err(|_| usage(&format!("bad grading {grading:?}")))?;
            let manifold = graph
                .file_stem()
                .map_or_else(|| "Y".to_string(), |s| s.to_string_lossy().into_owned());
            let (g, center) = parse_graph(&bytes)?;
            let (_, root) = compute_root(&g, center, *cutoff)?;
            let ctx = ObstructionContext::new(canonical_basis(&root))?;
            let pipeline = run_pipeline(&manifold, &ctx, set.as_ref(), *g4, &grading)?;
            for l in &pipeline.transcript {
                report.line(l.clone());
            }
            report.result("manifold", pipeline.manifold.clone());
            report.result("basis_size", pipeline.basis_size);
            report.result("candidates", pipeline.candidates.clone());
            report.result("filtered", pipeline.filtered.clone());
            report.result("verdict", pipeline.verdict.to_string());
            for c in &pipeline.citations {
                report.cite(c.clone());
            }
            if let Some(set) = &set {
                let exotic = exotic_pair_check(set, *g4);
                report.line(format!("exotic pair: {exotic}"));
                report.result("exotic_pair", exotic.to_string());
            }
            Ok(report.render(cli.json))
        }
    }
}

fn usage(msg: &str) -> anyhow::Error {
    anyhow!(Failure(2)).context(msg.to_string())
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn utf8(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|_| usage("input is not UTF-8"))
}

fn parse_graph(bytes: &[u8]) -> Result<(PlumbingGraph, Option<i64>)> {
    let doc = GraphDocument::from_json(utf8(bytes)?)?;
    Ok((doc.to_graph()?, doc.center))
}

fn parse_tau_set(text: &str) -> Result<Option<[BigRational; 2]>> {
    if text.trim().eq_ignore_ascii_case("unknown") {
        return Ok(None);
    }
    let parts: Vec<BigRational> = text
        .split(',')
        .map(|s| s.trim().parse::<BigRational>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| usage(&format!("bad tau set {text:?}")))?;
    match <[BigRational; 2]>::try_from(parts) {
        Ok(mut set) => {
            set.sort();
            Ok(Some(set))
        }
        Err(_) => Err(usage("tau set needs exactly two values")),
    }
}

fn brieskorn(
    report: &mut RunReport,
    (a1, a2, a3): (i64, i64, i64),
    out: Option<&Path>,
) -> Result<()> {
    let g = brieskorn_graph(a1, a2, a3)?;
    let doc = GraphDocument::from_graph(&g, Some(0));
    let legs = star_legs(&g, 0)?;
    report.line(format!("central weight: {}", g.vertices()[0].weight));
    report.line(format!(
        "arms: {}",
        legs.iter()
            .map(|l| format!("{l:?}"))
            .collect::<Vec<_>>()
            .join(" ")
    ));
    report.result("central_weight", g.vertices()[0].weight);
    report.result("arms", json!(legs));
    match out {
        Some(path) => {
            fs::write(path, doc.to_json() + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
            report.line(format!("wrote {}", path.display()));
        }
        None => report.line(doc.to_json()),
    }
    Ok(())
}

/// Tau sequence at the given center (or the first almost-rational vertex)
/// and its graded root.
fn compute_root(
    g: &PlumbingGraph,
    center: Option<i64>,
    cutoff: Option<usize>,
) -> Result<(TauSequence, GradedRoot)> {
    if definiteness(&intersection_form(g)) != Definiteness::NegativeDefinite {
        return Err(plumbhf::Error::NotNegativeDefinite.into());
    }
    let v0 = match center {
        Some(c) => c,
        None => is_almost_rational(g)?.ok_or(plumbhf::Error::NotAlmostRational(g.id_at(0)))?,
    };
    let tau = match cutoff {
        Some(n) => tau_sequence(g, v0, n)?,
        None => tau_sequence_auto(g, v0, MAX_AUTO_CUTOFF)?,
    };
    let root = graded_root(&tau, g)?;
    Ok((tau, root))
}

fn describe_root(report: &mut RunReport, tau: &TauSequence, root: &GradedRoot, d_only: bool) {
    let d = d_invariant(root);
    let gradings = root.leaf_gradings();
    let window = match tau.certification {
        Certification::Period(w) => format!("period window {w}"),
        Certification::Heuristic(w) => format!("heuristic window {w}"),
    };
    report.result("d", rational_string(&d));
    report.result("cutoff", tau.cutoff());
    report.result("certification", window.clone());
    if d_only {
        report.line(format!("d = {}", rational_string(&d)));
        return;
    }
    let strings: Vec<String> = gradings.iter().map(rational_string).collect();
    let at = if strings.iter().all(|s| *s == strings[0]) {
        format!("grading {}", strings[0])
    } else {
        format!("gradings {}", strings.join(", "))
    };
    report.line(format!(
        "leaves: {} @ {at}; d = {}",
        gradings.len(),
        rational_string(&d)
    ));
    report.line(format!("tau cutoff {} ({window})", tau.cutoff()));
    report.result("leaf_count", gradings.len());
    report.result("leaf_gradings", Value::from(strings));
    report.result("root", root.canonical_form());
}

fn run_oracle(report: &mut RunReport, g: &PlumbingGraph, root: &GradedRoot) -> Result<()> {
    let cap = match std::env::var("PLUMBHF_MAX_LATTICE_POINTS") {
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .map_err(|_| usage(&format!("bad PLUMBHF_MAX_LATTICE_POINTS {v:?}")))?,
        Err(_) => DEFAULT_MAX_LATTICE_POINTS,
    };
    let lattice_box = LatticeBox::canonical(g)?;
    let oracle = oracle_graded_root(g, &lattice_box, None, cap)?;
    let matched = oracle.is_isomorphic(root);
    report.line(format!(
        "oracle: {} ({} lattice points)",
        if matched { "MATCH" } else { "MISMATCH" },
        lattice_box.point_count()
    ));
    report.result("oracle", if matched { "MATCH" } else { "MISMATCH" });
    if !matched {
        report.line(format!("tau root:    {}", root.canonical_form()));
        report.line(format!("oracle root: {}", oracle.canonical_form()));
        return Err(anyhow!(Failure(1)).context("oracle mismatch"));
    }
    Ok(())
}

fn tau(report: &mut RunReport, bytes: &[u8]) -> Result<()> {
    let p = PresentationDocument::from_json(utf8(bytes)?)?;
    let pair = tau_pair(&p);
    let set = pair.as_set();
    let r = rational_string;
    report.line(format!(
        "tau+ = {}, tau- = {}",
        r(&pair.tau_plus),
        r(&pair.tau_minus)
    ));
    report.line(format!("set {{{}, {}}}", r(&set[0]), r(&set[1])));
    report.line(format!(
        "L^T Lambda^-1 L = {}, L^T Lambda^-1 V = {}",
        r(&pair.linking_square),
        r(&pair.rotation_pairing)
    ));
    if !pair.is_integral() {
        report.line("warning: non-integral tau values; the rotation data may violate parity");
    }
    report.result("tau_plus", r(&pair.tau_plus));
    report.result("tau_minus", r(&pair.tau_minus));
    report.result("as_set", Value::from(vec![r(&set[0]), r(&set[1])]));
    report.result("linking_square", r(&pair.linking_square));
    report.result("rotation_pairing", r(&pair.rotation_pairing));
    report.result("integral", pair.is_integral());
    report.cite("2 tau_pm - 1 = tb - L^T Lambda^-1 L +- L^T Lambda^-1 V");
    Ok(())
}
