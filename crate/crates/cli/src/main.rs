use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use flockgq::blt::{blt_build, fingerprint, verify_blt, BltParams, BltSet, Family};
use flockgq::knarr::FlockGq;
use flockgq::linspaces::{parse_elem, parse_matrix, Subspace};
use flockgq::search::{
    essential_orbits, export_lp, max_intersection, solve_verified, GroupSpec, Limits, RunDescriptor, Status,
    TacticalSystem,
};
use flockgq::singer::{bundled_pi, collinearity_graph, pi_hemisystem, verify_point_hemisystem, PiSpec, SingerFrame};
use flockgq::typeone::{
    admissible_base_lines, concurrency_graph, verify_hemisystem, Hemisystem, Orientation, TypeOneFrame,
};
use flockgq::Field;

const VERIFY_FAILED: u8 = 1;
const USAGE: u8 = 2;
const LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "flockgq", version, about = "Flock quadrangles, hemisystems and hemisystem search")]
struct Cli {
    /// Worker threads for search and verification.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Write the main output here instead of standard output. Relative paths
    /// are taken from $FLOCKGQ_OUT_DIR when it is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BltArgs {
    /// linear, ftwkb, kantor_monomial, kantor_knuth, fisher, penttila_mondello
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    q: Option<u32>,
    /// Nonsquare for linear and kantor_knuth (element token such as 2 or z3).
    #[arg(long)]
    n: Option<String>,
    /// Kantor-Knuth automorphism exponent.
    #[arg(long)]
    sigma: Option<u32>,
    /// BLT-set JSON file instead of a family.
    #[arg(long, conflicts_with_all = ["family", "q"])]
    blt_file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct GqSource {
    /// GQ file written by build-gq.
    #[arg(long, conflicts_with_all = ["family", "q", "blt_file"])]
    gq: Option<PathBuf>,
    #[command(flatten)]
    blt: BltArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Build and verify a BLT-set of W(3,q).
    Blt(BltArgs),
    /// Build the flock quadrangle of a BLT-set.
    BuildGq {
        #[command(flatten)]
        blt: BltArgs,
        /// Include point and line subspaces in the output.
        #[arg(long)]
        objects: bool,
    },
    /// Check the quadrangle axioms (exhaustive for q <= 7).
    VerifyGq {
        #[command(flatten)]
        src: GqSource,
        #[arg(long, default_value_t = 20000)]
        samples: u64,
    },
    /// Type I hemisystem from a base line and a plane subset.
    Typeone {
        #[command(flatten)]
        src: GqSource,
        /// 0-based index into the admissible lines of W(3,q), canonical order.
        #[arg(long, conflicts_with = "ell_matrix")]
        ell_index: Option<usize>,
        /// Rows of a line of W(5,q), e.g. "0 1 0 1 0 0; 0 0 1 1 1 0".
        #[arg(long)]
        ell_matrix: Option<String>,
        /// 1-based plane indices, e.g. "1,3,4"; "all" lists every valid S.
        #[arg(long = "S", value_name = "S")]
        s: String,
        #[arg(long, default_value = "+")]
        orientation: String,
    },
    /// Check that a file describes a hemisystem.
    Verify {
        #[arg(long)]
        hemi: PathBuf,
        /// Overrides the quadrangle embedded in the hemisystem file.
        #[arg(long)]
        gq: Option<PathBuf>,
    },
    /// Strongly regular graph parameters of a hemisystem.
    Srg {
        #[arg(long)]
        hemi: PathBuf,
        #[arg(long)]
        gq: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Singer-type point-hemisystem of Q^-(5,q).
    Singer {
        #[arg(long)]
        q: u32,
        /// PiSpec JSON; the bundled table is used when absent.
        #[arg(long)]
        pi: Option<PathBuf>,
    },
    /// All point-hemisystems invariant under the Singer-type group.
    SingerScan {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        max_solutions: Option<u64>,
        #[arg(long)]
        time_ms: Option<u64>,
    },
    /// Run a search descriptor; solutions as JSON lines.
    Search {
        #[arg(long)]
        run: PathBuf,
    },
    /// Write the search system in LP format.
    ExportLp {
        #[arg(long)]
        run: PathBuf,
    },
    /// Largest intersection of another solution with a reference.
    MaxIntersection {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        hemi: PathBuf,
    },
    /// Essential line orbits given a set of fixed lines.
    Essential {
        #[arg(long)]
        run: PathBuf,
        /// Comma-separated line indices.
        #[arg(long, default_value = "")]
        fixed: String,
    },
}

struct Output {
    path: Option<PathBuf>,
    buf: Vec<u8>,
}

impl Output {
    fn new(path: Option<PathBuf>) -> Output {
        let path = path.map(|p| match std::env::var_os("FLOCKGQ_OUT_DIR") {
            Some(dir) if p.is_relative() => Path::new(&dir).join(p),
            _ => p,
        });
        Output { path, buf: Vec::new() }
    }

    fn json(&mut self, v: &Value) -> Result<()> {
        serde_json::to_writer_pretty(&mut self.buf, v)?;
        self.buf.push(b'\n');
        Ok(())
    }

    fn line(&mut self, s: &str) {
        self.buf.extend_from_slice(s.as_bytes());
        self.buf.push(b'\n');
    }

    fn finish(self) -> Result<()> {
        match self.path {
            Some(p) => fs::write(&p, &self.buf).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(&self.buf)?;
                out.flush()?;
                Ok(())
            }
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn build_blt(a: &BltArgs) -> Result<BltSet> {
    if let Some(p) = &a.blt_file {
        return Ok(BltSet::from_json(&read_json(p)?)?);
    }
    let family: Family = a.family.as_deref().ok_or_else(|| usage("--family is required"))?.parse()?;
    let q = a.q.ok_or_else(|| usage("--q is required"))?;
    let mut params = BltParams { sigma: a.sigma, ..Default::default() };
    if let Some(n) = &a.n {
        let f = Field::from_order(q)?;
        params.n = Some(f.to_wire(parse_elem(&f, n)?));
    }
    Ok(blt_build(family, q, params)?)
}

fn load_gq(src: &GqSource) -> Result<FlockGq> {
    match &src.gq {
        Some(p) => Ok(FlockGq::from_json(&read_json(p)?)?),
        None => Ok(FlockGq::build(build_blt(&src.blt)?)?),
    }
}

fn usage(msg: &str) -> anyhow::Error {
    anyhow!(flockgq::Error::Config(msg.into()))
}

fn parse_list(s: &str) -> Result<Vec<u32>> {
    s.split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| t.trim().parse::<u32>().map_err(|_| usage(&format!("bad index {t:?}"))))
        .collect()
}

/// Hemisystem, its quadrangle (or Singer frame for point-hemisystems).
enum Loaded {
    Lines(Hemisystem, FlockGq),
    Points(Hemisystem, SingerFrame),
}

fn load_hemi(hemi: &Path, gq: Option<&Path>) -> Result<Loaded> {
    let (h, embedded) = Hemisystem::from_json(&read_json(hemi)?)?;
    if embedded.get("model").and_then(Value::as_str) == Some("Qminus5") {
        let q = embedded["q"].as_u64().ok_or_else(|| usage("point-hemisystem file lacks q"))? as u32;
        return Ok(Loaded::Points(h, SingerFrame::new(q)?));
    }
    let g = match gq {
        Some(p) => FlockGq::from_json(&read_json(p)?)?,
        None => FlockGq::from_json(&embedded)?,
    };
    Ok(Loaded::Lines(h, g))
}

fn load_run(path: &Path) -> Result<(RunDescriptor, TacticalSystem)> {
    let d: RunDescriptor = serde_json::from_value(read_json(path)?).map_err(flockgq::Error::from)?;
    let sys = d.system()?;
    Ok((d, sys))
}

fn run(cli: Cli) -> Result<u8> {
    let mut out = Output::new(cli.out.clone());
    let code = match cli.command {
        Command::Blt(a) => {
            let b = build_blt(&a)?;
            let r = verify_blt(&b)?;
            eprintln!(
                "{} q={}: direct {} anisotropic {}",
                a.family.as_deref().unwrap_or("file"),
                b.q(),
                r.direct,
                r.anisotropic
            );
            out.json(&json!({"schema": "qf/1", "blt": b.to_json(), "report": r, "fingerprint": fingerprint(&b)}))?;
            if r.passed() { 0 } else { VERIFY_FAILED }
        }
        Command::BuildGq { blt, objects } => {
            let g = FlockGq::build(build_blt(&blt)?)?;
            eprintln!("{} points, {} lines", g.num_points(), g.num_lines());
            out.json(&g.to_json(objects))?;
            0
        }
        Command::VerifyGq { src, samples } => {
            let g = load_gq(&src)?;
            let r = g.verify(samples);
            eprintln!("order {:?}, axiom holds: {}", r.order, r.axiom_holds);
            out.json(&serde_json::to_value(&r)?)?;
            if r.axiom_holds { 0 } else { VERIFY_FAILED }
        }
        Command::Typeone { src, ell_index, ell_matrix, s, orientation } => {
            let g = load_gq(&src)?;
            let f = g.field();
            let frame = match (ell_index, ell_matrix) {
                (Some(k), None) => {
                    let lines = admissible_base_lines(g.blt())?;
                    let base = lines
                        .get(k)
                        .ok_or_else(|| usage(&format!("--ell-index {k} out of range 0..{}", lines.len())))?;
                    TypeOneFrame::from_base_line(&g, base)?
                }
                (None, Some(m)) => TypeOneFrame::new(&g, &Subspace::new(f, &parse_matrix(f, &m)?)?)?,
                _ => return Err(usage("give exactly one of --ell-index and --ell-matrix")),
            };
            let orientation: Orientation = orientation.parse()?;
            if s == "all" {
                out.json(&json!({"base_plane": frame.base_plane + 1, "subsets": frame.all_subsets()}))?;
                0
            } else {
                let s: Vec<usize> = parse_list(&s)?.into_iter().map(|x| x as usize).collect();
                let h = frame.build(&g, &s, orientation)?;
                let r = verify_hemisystem(&g, &h.lines);
                eprintln!("{} lines, hemisystem: {}", h.lines.len(), r.passed);
                out.json(&h.to_json(&g.descriptor()))?;
                if r.passed { 0 } else { VERIFY_FAILED }
            }
        }
        Command::Verify { hemi, gq } => match load_hemi(&hemi, gq.as_deref())? {
            Loaded::Lines(h, g) => {
                let r = verify_hemisystem(&g, &h.lines);
                eprintln!("hemisystem: {} ({} violations)", r.passed, r.violations.len());
                out.json(&serde_json::to_value(&r)?)?;
                if r.passed { 0 } else { VERIFY_FAILED }
            }
            Loaded::Points(h, fr) => {
                let r = verify_point_hemisystem(&fr, &h.lines);
                eprintln!("point-hemisystem: {} ({} violations)", r.passed, r.violations.len());
                out.json(&serde_json::to_value(&r)?)?;
                if r.passed { 0 } else { VERIFY_FAILED }
            }
        },
        Command::Srg { hemi, gq, json } => {
            let graph = match load_hemi(&hemi, gq.as_deref())? {
                Loaded::Lines(h, g) => concurrency_graph(&g, &h.lines),
                Loaded::Points(h, fr) => collinearity_graph(&fr, &h.lines),
            };
            match graph.srg_check() {
                Ok(p) => {
                    if json {
                        out.json(&serde_json::to_value(p)?)?;
                    } else {
                        out.line(&format!("{} {} {} {}", p.v, p.k, p.lambda, p.mu));
                    }
                    0
                }
                Err(f) => {
                    eprintln!("not strongly regular: {f:?}");
                    VERIFY_FAILED
                }
            }
        }
        Command::Singer { q, pi } => {
            let fr = SingerFrame::new(q)?;
            let spec: PiSpec = match pi {
                Some(p) => serde_json::from_value(read_json(&p)?).map_err(flockgq::Error::from)?,
                None => bundled_pi(q)?,
            };
            let h = pi_hemisystem(&fr, &spec)?;
            let r = verify_point_hemisystem(&fr, &h.lines);
            eprintln!("{} points, point-hemisystem: {}", h.lines.len(), r.passed);
            out.json(&h.to_json_points(q))?;
            if r.passed { 0 } else { VERIFY_FAILED }
        }
        Command::SingerScan { q, max_solutions, time_ms } => {
            let d = RunDescriptor {
                schema: "qf/1".into(),
                gq: None,
                singer_q: Some(q),
                group: GroupSpec { generators: Vec::new(), builtin: Some("singer".into()) },
                prescribe: Vec::new(),
                forbid: Vec::new(),
                exclude: Vec::new(),
                limits: Limits { max_solutions, max_nodes: None, time_ms },
            };
            stream(&mut out, &d.system()?, &d.limits, cli.threads)?
        }
        Command::Search { run } => {
            let (d, sys) = load_run(&run)?;
            stream(&mut out, &sys, &d.limits, cli.threads)?
        }
        Command::ExportLp { run } => {
            let (_, sys) = load_run(&run)?;
            out.buf.extend_from_slice(export_lp(&sys).as_bytes());
            0
        }
        Command::MaxIntersection { run, hemi } => {
            let (d, sys) = load_run(&run)?;
            let (h, _) = Hemisystem::from_json(&read_json(&hemi)?)?;
            let m = max_intersection(&sys, &h.lines, &d.limits)?;
            eprintln!("max intersection {:?} (exact: {})", m.value, m.exact);
            out.json(&serde_json::to_value(&m)?)?;
            if m.exact { 0 } else { LIMIT }
        }
        Command::Essential { run, fixed } => {
            let (d, sys) = load_run(&run)?;
            let fixed = parse_list(&fixed)?;
            let verdicts = essential_orbits(&sys, &fixed, &sys.line_orbits, &d.limits)?;
            let rows: Vec<Value> = sys
                .line_orbits
                .iter()
                .zip(&verdicts)
                .enumerate()
                .map(|(i, (o, v))| json!({"orbit": i, "size": o.len(), "least": o[0], "verdict": v}))
                .collect();
            out.json(&json!({"schema": "qf/1", "fixed": fixed, "orbits": rows}))?;
            0
        }
    };
    out.finish()?;
    Ok(code)
}

fn stream(out: &mut Output, sys: &TacticalSystem, limits: &Limits, threads: usize) -> Result<u8> {
    let r = solve_verified(sys, limits, threads)?;
    for s in &r.solutions {
        out.line(&serde_json::to_string(&json!({"lines": s}))?);
    }
    eprintln!(
        "{} solutions, {} nodes, status {:?}, {:.2?}",
        r.solutions.len(),
        r.node_count,
        r.status,
        r.wall_time
    );
    Ok(if r.status == Status::Complete { 0 } else { LIMIT })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<flockgq::Error>() {
        Some(flockgq::Error::Verification(_)) => VERIFY_FAILED,
        Some(flockgq::Error::Limit(_)) => LIMIT,
        _ => USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
