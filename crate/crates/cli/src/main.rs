mod address;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rsup_core::format::{self, DotOptions};
use rsup_core::manifest::Project;
use rsup_core::reconfig::{RsOptions, RsupPipeline};
use rsup_core::solvability::{self, CollectMode, Verdict};
use rsup_core::{ops, synthesis, EventId, Error, Generator};

use address::StateAddress;
use report::Summary;

const EXIT_UNSOLVABLE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;

#[derive(Parser)]
#[command(name = "rsup", version, about = "Reconfiguration supervisors for discrete-event systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synchronous product of generator files.
    Sync {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Supremal controllable sublanguage of PLANT under SPEC.
    Supcon {
        plant: PathBuf,
        spec: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// One marked state selflooped with every event of FILE.
    Allevents {
        file: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Reconfiguration specification automaton of a manifest.
    RsBuild {
        manifest: PathBuf,
        #[command(flatten)]
        rs: RsArgs,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// GMode and RSUP for a manifest, with a summary.
    Rsup {
        manifest: PathBuf,
        #[command(flatten)]
        rs: RsArgs,
        #[arg(long)]
        outdir: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Forcible paths from a state to the source states of a switch event.
    Solve {
        manifest: PathBuf,
        #[command(flatten)]
        rs: RsArgs,
        /// `#N` for a state index, or comma-separated events from the initial state.
        #[arg(long, allow_hyphen_values = true)]
        from: StateAddress,
        #[arg(long)]
        event: u32,
        /// Restrict to one RE source state (same syntax as --from).
        #[arg(long)]
        to: Option<StateAddress>,
        /// all-simple (default) or paper-literal.
        #[arg(long)]
        mode: Option<CollectMode>,
        /// Show at most this many paths per target in the text report.
        #[arg(long)]
        max_paths: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Graphviz rendering of a generator file.
    Dot {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Merge parallel edges into one labeled edge.
        #[arg(long)]
        bundle: bool,
    },
}

#[derive(Args, Clone)]
struct RsArgs {
    /// Keep only the first-listed direction of each switch pair.
    #[arg(long)]
    one_way: bool,
    /// Start the RS in this configuration instead of the manifest's.
    #[arg(long)]
    initial: Option<String>,
}

enum Failure {
    Input(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_precondition() {
            Failure::Precondition(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PRECONDITION)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Sync { files, out } => cmd_sync(&files, &out),
        Command::Supcon { plant, spec, out } => cmd_supcon(&plant, &spec, &out),
        Command::Allevents { file, out } => {
            let g = format::read_generator(&file)?;
            format::write_generator(&out, &ops::allevents(&g))?;
            Ok(0)
        }
        Command::RsBuild { manifest, rs, out } => {
            let project = Project::load(&manifest)?;
            let spec = rs_spec(&project, &rs)?;
            format::write_generator(&out, &spec.automaton)?;
            Ok(0)
        }
        Command::Rsup { manifest, rs, outdir, json } => cmd_rsup(&manifest, &rs, &outdir, json),
        Command::Solve { manifest, rs, from, event, to, mode, max_paths, json } => {
            cmd_solve(&manifest, &rs, &from, EventId(event), to.as_ref(), mode, max_paths, json)
        }
        Command::Dot { file, out, bundle } => {
            let g = format::read_generator(&file)?;
            let dot = format::to_dot(&g, DotOptions { bundle });
            match out {
                Some(path) => format::write_text(&path, &dot)?,
                None => print!("{dot}"),
            }
            Ok(0)
        }
    }
}

/// `out.json` → `out.<suffix>.json`.
fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}.{suffix}.json"))
}

fn cmd_sync(files: &[PathBuf], out: &Path) -> CmdResult {
    let gs = files.iter().map(|f| format::read_generator(f)).collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&Generator> = gs.iter().collect();
    let (product, map) = ops::sync(&refs)?;
    format::write_generator(out, &product)?;
    format::write_text(&sidecar(out, "map"), &format::state_map_to_json(&map))?;
    Ok(0)
}

fn cmd_supcon(plant: &Path, spec: &Path, out: &Path) -> CmdResult {
    let plant = format::read_generator(plant)?;
    let spec = format::read_generator(spec)?;
    let result = synthesis::supcon(&plant, &spec)?;
    if result.is_empty() {
        eprintln!("warning: supervisor is empty");
    }
    format::write_generator(out, &result.supervisor)?;
    format::write_text(&sidecar(out, "disabled"), &format::disabled_to_json(&result.disabled))?;
    println!(
        "{}: {} states, {} transitions",
        result.supervisor.name(),
        result.supervisor.state_count(),
        result.supervisor.transition_count()
    );
    Ok(0)
}

fn rs_options(project: &Project, args: &RsArgs) -> RsOptions {
    let mut options = project.rs_options();
    options.one_way |= args.one_way;
    options
}

fn rs_spec(project: &Project, args: &RsArgs) -> Result<rsup_core::reconfig::ReconfigSpec, Error> {
    let rs = project.reconfig_spec(&rs_options(project, args))?;
    match &args.initial {
        Some(initial) => rs.rerooted(initial),
        None => Ok(rs),
    }
}

fn pipeline(project: &Project, args: &RsArgs) -> Result<RsupPipeline, Error> {
    let rs = rs_spec(project, args)?;
    let components: Vec<&Generator> = project.components.iter().collect();
    let specs: Vec<&Generator> = project.specs.iter().collect();
    rsup_core::reconfig::build_rsup(&components, &rs, &specs)
}

fn load_project(manifest: &Path) -> Result<Project, Failure> {
    // Manifest problems are input errors regardless of kind.
    Project::load(manifest).map_err(|e| Failure::Input(e.to_string()))
}

fn cmd_rsup(manifest: &Path, args: &RsArgs, outdir: &Path, json: bool) -> CmdResult {
    let project = load_project(manifest)?;
    let pipeline = pipeline(&project, args).map_err(|e| Failure::Input(e.to_string()))?;
    let controllability = synthesis::is_controllable(&pipeline.gmode, &pipeline.rsup.supervisor)?;
    std::fs::create_dir_all(outdir).map_err(|source| Error::Io { path: outdir.to_path_buf(), source })?;
    let put = |name: &str, text: String| format::write_text(&outdir.join(name), &text);
    put("RS.json", format::generator_to_json(&pipeline.rs.automaton))?;
    put("GMode.json", format::generator_to_json(&pipeline.gmode))?;
    put("GMode.map.json", format::state_map_to_json(&pipeline.gmode_map))?;
    put("SPEC.json", format::generator_to_json(&pipeline.spec))?;
    put("RSUP.json", format::generator_to_json(&pipeline.rsup.supervisor))?;
    put("RSUP.map.json", format::state_map_to_json(&pipeline.rsup.plant_map))?;
    put("RSUP.disabled.json", format::disabled_to_json(&pipeline.rsup.disabled))?;
    let summary = Summary::of(&pipeline, controllability);
    let summary_json = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    put("summary.json", summary_json.clone())?;
    put("summary.txt", summary.text())?;
    if json {
        print!("{summary_json}");
    } else {
        print!("{}", summary.text());
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    manifest: &Path,
    args: &RsArgs,
    from: &StateAddress,
    event: EventId,
    to: Option<&StateAddress>,
    mode: Option<CollectMode>,
    max_paths: Option<usize>,
    json: bool,
) -> CmdResult {
    let project = load_project(manifest)?;
    let pipeline = pipeline(&project, args).map_err(|e| Failure::Input(e.to_string()))?;
    let sup = &pipeline.rsup.supervisor;
    let source = from.locate(sup).map_err(|e| Failure::Input(e.to_string()))?;
    let pr = project.preemption_for(sup)?;
    let mut options = project.solve_options(&pipeline)?;
    if let Some(mode) = mode {
        options.mode = mode;
    }
    if !project.switches().iter().any(|s| s.id() == event) {
        return Err(Failure::Input(format!("event {event} is not a switch event of this manifest")));
    }

    let result = match to {
        None => solvability::solve_event(sup, source, event, &pr, &options)?,
        Some(to) => {
            let target = to.locate(sup).map_err(|e| Failure::Input(e.to_string()))?;
            if sup.successor(target, event).is_none() {
                return Err(Failure::Input(format!("event {event} is not enabled at target [{target}]")));
            }
            solvability::solve_event_at(sup, source, event, target, &pr, &options)?
        }
    };

    if json {
        println!("{}", serde_json::to_string_pretty(&result).expect("report serializes"));
    } else {
        print!("{}", report::event_solution_text(&pipeline, &result, max_paths));
    }
    Ok(match result.verdict {
        Verdict::Solvable => 0,
        Verdict::Unsolvable => EXIT_UNSOLVABLE,
    })
}
