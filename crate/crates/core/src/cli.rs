//! Command-line front end for the `rigid` binary.
//!
//! Every subcommand writes its main artifact to `--out` (or stdout when absent)
//! followed by a plain-text report on stdout. `run` returns whether all audits
//! passed; the binary maps that to the exit code.

use crate::aut::{self, Perm, DEFAULT_VERTEX_CAP};
use crate::graph::{self, Graph};
use crate::metric::{
    one_point_extend, pushout_amalgam, qu_saturate, read_metric, validate_metric, write_metric, KatetovType, PointId,
    QMetricSpace, Role,
};
use crate::mtower::{self, RMatrix, StageConfig};
use crate::rational::{parse_q, parse_q_list, Q};
use crate::rigid::{self, DegreeSchedule};
use crate::rtype::{self, PointedSpace, RTypeSpec};
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("config line {line}: expected `key = value`")]
    Config { line: usize },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    Aut(#[from] aut::AutError),
    #[error(transparent)]
    Rigid(#[from] rigid::RigidError),
    #[error(transparent)]
    Metric(#[from] crate::metric::MetricError),
    #[error(transparent)]
    RType(#[from] rtype::RTypeError),
    #[error(transparent)]
    Tower(#[from] mtower::TowerError),
}

impl From<crate::rational::ParseFracError> for CliError {
    fn from(e: crate::rational::ParseFracError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "rigid", version, about = "Rigid Rado-like graphs and Urysohn-like metric towers, built and audited exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Group,
}

#[derive(Subcommand, Debug)]
pub enum Group {
    /// Graph constructions
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Metric constructions
    #[command(subcommand)]
    Metric(MetricCmd),
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the artifact here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GraphCmd {
    /// Binary Rado graph on n vertices, then k-saturation
    #[command(args_override_self = true)]
    Rado {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Rigidifying extension of a base graph
    #[command(args_override_self = true)]
    Rigidify {
        /// `radoN` or a graph file
        #[arg(long)]
        base: String,
        /// Saturation rounds (bound k each) applied to the base first
        #[arg(long, default_value_t = 0)]
        saturate: usize,
        #[arg(long, default_value_t = 2)]
        saturate_k: usize,
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        steps: usize,
        /// Vertex cap for the automorphism search of the base
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
        #[arg(long)]
        no_audit: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Layered tower over a base graph
    #[command(args_override_self = true)]
    Tower {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 0)]
        saturate: usize,
        #[arg(long, default_value_t = 2)]
        saturate_k: usize,
        #[arg(long, default_value_t = 3)]
        layers: usize,
        #[arg(long, default_value_t = 6)]
        layer_size: usize,
        /// Schedules separated by `;` (default: consecutive from 2 + layer index)
        #[arg(long)]
        family: Option<String>,
        /// Extension bound for the defect audit
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Automorphism group of a graph
    #[command(args_override_self = true)]
    Aut {
        #[arg(long)]
        input: String,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
        /// Also check this permutation (space-separated images)
        #[arg(long)]
        check: Option<String>,
    },
    /// Extension defects of a graph up to size k
    #[command(args_override_self = true)]
    Defects {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum MetricCmd {
    /// Audit a metric file
    #[command(args_override_self = true)]
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// One-point extension by a finitely supported type
    #[command(args_override_self = true)]
    Extend {
        #[arg(long)]
        input: PathBuf,
        /// `id:value,...`
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        id: Option<PointId>,
        #[command(flatten)]
        output: Output,
    },
    /// Push-out amalgamation of b1 and b2 over a
    #[command(args_override_self = true)]
    Pushout {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b1: PathBuf,
        #[arg(long)]
        b2: PathBuf,
        /// `a_id:b1_id,...` (default: identity)
        #[arg(long)]
        e1: Option<String>,
        #[arg(long)]
        e2: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// One saturation round
    #[command(args_override_self = true)]
    Qu {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value = "1")]
        menu: String,
        #[command(flatten)]
        output: Output,
    },
    /// One saturation round keeping the r-floor around a special point
    #[command(args_override_self = true)]
    Rtype {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        special: PointId,
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        menu: String,
        #[command(flatten)]
        output: Output,
    },
    /// Obstruction gadget, optionally searched for inside a host
    #[command(args_override_self = true)]
    Gadget {
        #[arg(long)]
        n: usize,
        #[arg(long = "L", alias = "l")]
        l: String,
        #[arg(long, requires = "anchor")]
        host: Option<PathBuf>,
        #[arg(long)]
        anchor: Option<PointId>,
        #[command(flatten)]
        output: Output,
    },
    /// Staged metric tower
    #[command(args_override_self = true)]
    Tower {
        /// Base metric file (default: unit triangle plus a far point)
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, default_value = "2,3,5,6;5/2,7/2,11/2,13/2")]
        matrix: String,
        #[arg(long, default_value_t = 1)]
        stages: usize,
        #[arg(long, default_value_t = 2)]
        pairs: usize,
        #[arg(long, default_value_t = 2)]
        fills: usize,
        #[arg(long, default_value = "1")]
        menu: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Stage rigidity audit of a tower file
    #[command(args_override_self = true)]
    Audit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        beta: usize,
    },
}

/// Expands `--config FILE` into `--key value` flags placed right after the
/// subcommand, so flags given on the command line take precedence.
pub fn expand_config(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(pos) = args.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(args);
    };
    let mut args = args;
    let path = match args[pos].strip_prefix("--config=") {
        Some(p) => {
            let p = p.to_string();
            args.remove(pos);
            p
        }
        None => {
            if pos + 1 >= args.len() {
                return Err(CliError::Input("--config needs a file".into()));
            }
            let p = args.remove(pos + 1);
            args.remove(pos);
            p
        }
    };
    let text = read_file(&PathBuf::from(&path))?;
    let mut flags = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(CliError::Config { line: i + 1 })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::Config { line: i + 1 });
        }
        match v {
            "true" => flags.push(format!("--{k}")),
            "false" => {}
            _ => {
                flags.push(format!("--{k}"));
                flags.push(v.to_string());
            }
        }
    }
    // program name, group, subcommand
    let at = args.len().min(3);
    args.splice(at..at, flags);
    Ok(args)
}

fn read_file(p: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })
}

fn emit(output: &Output, artifact: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: "stdout".into(), source };
    match &output.out {
        Some(p) => std::fs::write(p, artifact).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => out.write_all(artifact.as_bytes()).map_err(io),
    }
}

fn load_graph(spec: &str) -> Result<Graph, CliError> {
    if let Some(n) = spec.strip_prefix("rado").and_then(|n| n.parse().ok()) {
        return Ok(graph::binary_rado(n));
    }
    Ok(Graph::from_text(&read_file(&PathBuf::from(spec))?)?)
}

fn load_base(spec: &str, rounds: usize, k: usize) -> Result<Graph, CliError> {
    let mut g = load_graph(spec)?;
    for _ in 0..rounds {
        g = graph::saturate(&g, k);
    }
    Ok(g)
}

fn load_metric(p: &PathBuf) -> Result<(QMetricSpace, BTreeMap<PointId, Role>), CliError> {
    Ok(read_metric(&read_file(p)?)?)
}

fn parse_assignments(s: &str) -> Result<Vec<(PointId, String)>, CliError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (a, b) = t.split_once(':').ok_or_else(|| CliError::Input(format!("expected `id:value`, got {t:?}")))?;
            let a = a.trim().parse().map_err(|_| CliError::Input(format!("bad id {a:?}")))?;
            Ok((a, b.trim().to_string()))
        })
        .collect()
}

fn parse_map(s: Option<&str>, a: &QMetricSpace) -> Result<BTreeMap<PointId, PointId>, CliError> {
    match s {
        None => Ok(a.ids().iter().map(|&p| (p, p)).collect()),
        Some(s) => parse_assignments(s)?
            .into_iter()
            .map(|(k, v)| Ok((k, v.parse().map_err(|_| CliError::Input(format!("bad id {v:?}")))?)))
            .collect(),
    }
}

fn violations_report(m: &QMetricSpace) -> (bool, String) {
    let v = validate_metric(m);
    let mut s = format!("violations={}\n", v.len());
    for x in &v {
        s.push_str(&format!("{x}\n"));
    }
    (v.is_empty(), s)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns `Ok(true)` when every audit passed.
pub fn run(args: Vec<String>, out: &mut dyn Write) -> Result<bool, CliError> {
    let cli = Cli::try_parse_from(expand_config(args)?)?;
    let mut report = String::new();
    let ok = match cli.command {
        Group::Graph(cmd) => run_graph(cmd, out, &mut report)?,
        Group::Metric(cmd) => run_metric(cmd, out, &mut report)?,
    };
    out.write_all(report.as_bytes()).map_err(|source| CliError::Io { path: "stdout".into(), source })?;
    Ok(ok)
}

fn run_graph(cmd: GraphCmd, out: &mut dyn Write, report: &mut String) -> Result<bool, CliError> {
    use std::fmt::Write as _;
    match cmd {
        GraphCmd::Rado { n, k, output } => {
            let g = graph::saturate(&graph::binary_rado(n), k);
            emit(&output, &g.to_text(), out)?;
            let original = graph::binary_rado(n);
            let mut defects = 0;
            for size in 1..=k {
                for q in graph::set_pairs_of_size(&(0..original.vertex_count()).collect::<Vec<_>>(), size) {
                    if graph::find_witness(&g, &q)?.is_none() {
                        defects += 1;
                    }
                }
            }
            let _ = writeln!(report, "vertices={} edges={}", g.vertex_count(), g.edge_count());
            let _ = writeln!(report, "defects_over_original={defects}");
            Ok(defects == 0)
        }
        GraphCmd::Rigidify { base, saturate, saturate_k, schedule, steps, cap, no_audit, output } => {
            let schedule = DegreeSchedule::parse(&schedule)?;
            let base = load_base(&base, saturate, saturate_k)?;
            let (g, state) = rigid::rigidify(&base, &schedule, steps)?;
            emit(&output, &g.to_text(), out)?;
            let _ = writeln!(report, "base_vertices={} vertices={}", state.base_size, g.vertex_count());
            let _ = writeln!(report, "fingerprint={:?} exact_prefix={}", state.v1, state.exact_prefix);
            for i in 0..steps {
                let (a, b) = state.pair_enum[i];
                let sp = state.setpair_enum[i].as_ref().map_or("-".to_string(), rigid::format_query);
                let w = state.witnesses[i].map_or("-".to_string(), |w| w.to_string());
                let _ = writeln!(report, "step {i} pair=({a},{b}) setpair={sp} witness={w}");
            }
            if no_audit {
                let _ = writeln!(report, "rigidity audit skipped");
                return Ok(true);
            }
            let bad = rigid::rigidity_violations(&base, &g, &state, cap)?;
            let _ = writeln!(report, "rigidity_violations={}", bad.len());
            for p in &bad {
                let _ = writeln!(report, "extends: {p}");
            }
            Ok(bad.is_empty())
        }
        GraphCmd::Tower { base, saturate, saturate_k, layers, layer_size, family, k, output } => {
            let base = load_base(&base, saturate, saturate_k)?;
            let family: Vec<DegreeSchedule> = match family {
                Some(f) => f.split(';').map(DegreeSchedule::parse).collect::<Result<_, _>>()?,
                None => (0..layers).map(|i| DegreeSchedule::consecutive(2 + i, layer_size)).collect::<Result<_, _>>()?,
            };
            let tower = rigid::build_tower(&base, &family, layer_size, layers)?;
            emit(&output, &tower.to_text(), out)?;
            let audit = tower.audit(k);
            let _ = writeln!(report, "vertices={} layers={}", tower.top().vertex_count(), layers);
            for (name, pass) in &audit.checks {
                let _ = writeln!(report, "{} {name}", if *pass { "PASS" } else { "FAIL" });
            }
            for f in &audit.failures {
                let _ = writeln!(report, "failure: {f}");
            }
            Ok(audit.passed())
        }
        GraphCmd::Aut { input, limit, cap, check } => {
            let g = load_graph(&input)?;
            let auts = aut::automorphisms_capped(&g, limit, cap)?;
            let _ = writeln!(report, "order={}", auts.order());
            let _ = writeln!(report, "complete={}", auts.is_complete());
            for p in auts.perms() {
                let _ = writeln!(report, "{p}");
            }
            match check {
                Some(c) => {
                    let p = Perm::parse(&c)?;
                    let is = p.is_automorphism_of(&g);
                    let _ = writeln!(report, "check {p}: {}", if is { "automorphism" } else { "not an automorphism" });
                    Ok(is)
                }
                None => Ok(true),
            }
        }
        GraphCmd::Defects { input, k } => {
            let g = load_graph(&input)?;
            let d = graph::extension_defects(&g, k);
            let _ = writeln!(report, "defects={}", d.len());
            for q in &d {
                let _ = writeln!(report, "{}", rigid::format_query(q));
            }
            Ok(true)
        }
    }
}

fn run_metric(cmd: MetricCmd, out: &mut dyn Write, report: &mut String) -> Result<bool, CliError> {
    use std::fmt::Write as _;
    match cmd {
        MetricCmd::Validate { input } => {
            let (m, _) = load_metric(&input)?;
            let (ok, text) = violations_report(&m);
            report.push_str(&text);
            Ok(ok)
        }
        MetricCmd::Extend { input, ty, id, output } => {
            let (m, roles) = load_metric(&input)?;
            let values = parse_assignments(&ty)?
                .into_iter()
                .map(|(p, v)| Ok((p, parse_q(&v)?)))
                .collect::<Result<Vec<(PointId, Q)>, CliError>>()?;
            let t = KatetovType::new(values)?;
            let id = id.unwrap_or_else(|| m.fresh_id());
            let x = one_point_extend(&m, &t, id)?;
            let mut roles = roles;
            roles.insert(id, Role::Fill(t.support().collect()));
            emit(&output, &write_metric(&x, &roles), out)?;
            let _ = writeln!(report, "added={id}");
            let (ok, text) = violations_report(&x);
            report.push_str(&text);
            Ok(ok)
        }
        MetricCmd::Pushout { a, b1, b2, e1, e2, output } => {
            let (a, _) = load_metric(&a)?;
            let (b1, _) = load_metric(&b1)?;
            let (b2, _) = load_metric(&b2)?;
            let e1 = parse_map(e1.as_deref(), &a)?;
            let e2 = parse_map(e2.as_deref(), &a)?;
            let am = pushout_amalgam(&a, &b1, &b2, &e1, &e2)?;
            emit(&output, &write_metric(&am.space, &BTreeMap::new()), out)?;
            for (q, p) in &am.right {
                let _ = writeln!(report, "b2 {q} -> {p}");
            }
            let (ok, text) = violations_report(&am.space);
            report.push_str(&text);
            Ok(ok)
        }
        MetricCmd::Qu { input, k, menu, output } => {
            let (m, roles) = load_metric(&input)?;
            let s = qu_saturate(&m, k, &parse_q_list(&menu)?)?;
            emit(&output, &write_metric(&s, &roles), out)?;
            let _ = writeln!(report, "points={} added={}", s.len(), s.len() - m.len());
            let (ok, text) = violations_report(&s);
            report.push_str(&text);
            Ok(ok)
        }
        MetricCmd::Rtype { input, special, r, k, menu, output } => {
            let (m, roles) = load_metric(&input)?;
            let r = RTypeSpec::new(parse_q(&r)?)?;
            let p = PointedSpace { space: m, special };
            let s = rtype::rtype_saturate(&p, r, k, &parse_q_list(&menu)?)?;
            emit(&output, &write_metric(&s.space, &roles), out)?;
            let floor = rtype::mr_validate(&s, r);
            let _ = writeln!(report, "points={} added={}", s.space.len(), s.space.len() - p.space.len());
            let _ = writeln!(report, "floor={}", if floor { "ok" } else { "violated" });
            let (ok, text) = violations_report(&s.space);
            report.push_str(&text);
            Ok(ok && floor)
        }
        MetricCmd::Gadget { n, l, host, anchor, output } => {
            let g = rtype::make_gadget(n, parse_q(&l)?)?;
            emit(&output, &write_metric(&g.space, &BTreeMap::new()), out)?;
            let _ = writeln!(report, "points={} centre={}", g.space.len(), g.centre());
            let (ok, text) = violations_report(&g.space);
            report.push_str(&text);
            if let (Some(h), Some(a)) = (host, anchor) {
                let (hs, _) = load_metric(&h)?;
                match rtype::gadget_embeds(&hs, a, &g) {
                    Some(m) => {
                        let pairs: Vec<String> = m.iter().map(|(s, t)| format!("{s}:{t}")).collect();
                        let _ = writeln!(report, "embeds at {a}: {}", pairs.join(","));
                    }
                    None => {
                        let _ = writeln!(report, "embeds at {a}: absent");
                    }
                }
            }
            Ok(ok)
        }
        MetricCmd::Tower { base, matrix, stages, pairs, fills, menu, k, output } => {
            let base = match base {
                Some(p) => load_metric(&p)?.0,
                None => mtower::demo_base(),
            };
            let cfg = StageConfig { pair_budget: pairs, fills, menu: parse_q_list(&menu)?, support_bound: k };
            let t = mtower::build_tower(base, RMatrix::parse(&matrix)?, stages, &cfg)?;
            emit(&output, &mtower::write_tower(&t), out)?;
            let _ = writeln!(
                report,
                "stages={} points={} anchors={} fills={}",
                t.stages.len(),
                t.top().len(),
                t.anchors().len(),
                t.fills().len()
            );
            let (ok, text) = violations_report(t.top());
            report.push_str(&text);
            Ok(ok)
        }
        MetricCmd::Audit { input, beta } => {
            let t = mtower::read_tower(&read_file(&input)?)?;
            let rep = mtower::audit_stage_rigidity(&t, beta)?;
            report.push_str(&rep.to_string());
            Ok(rep.passed())
        }
    }
}
