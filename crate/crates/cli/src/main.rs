use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use branchcube::blowup::{build_blowup, verify_npc, verify_table1, CubeComplex, Manifest};
use branchcube::branch::branch_report;
use branchcube::homology::homology;
use branchcube::instance::Instance;
use branchcube::morse::{cyclic_cover_window, finiteness_report, link_census, verify_table2, MorseOrientation};
use branchcube::presentation::{build_hz, fundamental_group_presentation, tietze_simplify, Presentation};
use branchcube::simplicial::{
    barycentric_subdivision, complex_to_json, is_flag, nlcp_verdict, octahedralise, random_flag_nlcp_complex, Simplex,
};
use branchcube_cli::pipeline::{
    exit_code, load_complex, load_signs, run_pipeline, write_artifacts, PipelineConfig, PipelineError, Primes,
};

#[derive(Parser)]
#[command(name = "branchcube", version, about = "Cube complex blowups, Morse functions and branched covers")]
struct Cli {
    /// Write the blowup manifest here whenever a blowup is built.
    #[arg(long, global = true)]
    emit_manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BuildArgs {
    /// Input 2-complex L (complex JSON).
    #[arg(long)]
    l: PathBuf,
    /// Sizes of the three parts of Γ_A.
    #[arg(long, value_delimiter = ',', default_values_t = [4, 4, 4])]
    sizes: Vec<usize>,
    /// JSON file `{"a_plus": [...], "b_plus": [...]}` choosing the Morse signs.
    #[arg(long)]
    signs: Option<PathBuf>,
    /// Allow part sizes below 4 and other sign splits.
    #[arg(long)]
    lab: bool,
}

impl BuildArgs {
    fn config(&self) -> Result<PipelineConfig, PipelineError> {
        let sizes: [usize; 3] =
            self.sizes.clone().try_into().map_err(|_| PipelineError::Input("--sizes takes three part sizes".into()))?;
        Ok(PipelineConfig {
            l_path: self.l.clone(),
            a_part_sizes: sizes,
            morse_signs: self.signs.clone(),
            strict: !self.lab,
            ..PipelineConfig::default()
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reduced integral homology in one degree.
    Homology {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        dim: isize,
    },
    /// Join of the vertex 0-spheres, as complex JSON.
    Octahedralise {
        #[arg(long)]
        file: PathBuf,
    },
    /// Barycentric subdivision, as complex JSON.
    Subdivide {
        #[arg(long)]
        file: PathBuf,
    },
    /// Link of a simplex given by comma-separated vertex labels.
    Link {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        simplex: Vec<String>,
    },
    /// Flag and no-local-cut-points checks.
    Flag {
        #[arg(long)]
        file: PathBuf,
    },
    /// Random connected flag complex with no local cut points.
    RandomFlag {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        vertices: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
    },
    /// Edge-path presentation of π₁.
    Pi1 {
        #[arg(long)]
        file: PathBuf,
        /// Apply Tietze moves before printing.
        #[arg(long)]
        simplify: bool,
    },
    /// Adds the selected words of a word list to a base presentation.
    Hz {
        /// Base presentation text.
        #[arg(long)]
        base: PathBuf,
        /// Presentation text with the same generators whose relations are the words.
        #[arg(long)]
        words: PathBuf,
        /// 0-based word indices.
        #[arg(long, value_delimiter = ',')]
        select: Vec<usize>,
    },
    /// Checks the vertex links of the blowup and its ascending and descending links.
    VerifyTables(BuildArgs),
    /// Link census, finiteness verdicts and a window of the cyclic cover.
    MorseReport {
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long, default_value_t = 0)]
        radius: i64,
    },
    /// Permutation labels, loop monodromy and branched link covers.
    BranchCert {
        #[command(flatten)]
        build: BuildArgs,
        /// `auto` or three primes for the pairs (1,2), (2,3), (3,1).
        #[arg(long, default_value = "auto")]
        primes: Primes,
    },
    /// The full pipeline; artifacts go under `--out`.
    Run {
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long, default_value = "auto")]
        primes: Primes,
        #[arg(long, default_value_t = 0)]
        radius: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn input_err(path: &Path, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Input(format!("{}: {e}", path.display()))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json serializes"));
}

fn load_presentation(path: &Path) -> Result<Presentation, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| input_err(path, e))?;
    Presentation::parse(&text).map_err(|e| input_err(path, e))
}

/// Builds `X` for the table, Morse and branch subcommands.
fn build(
    args: &BuildArgs,
    manifest_path: Option<&Path>,
) -> Result<(Instance, CubeComplex, MorseOrientation), PipelineError> {
    let cfg = args.config()?;
    if cfg.strict && cfg.a_part_sizes.iter().any(|&n| n < 4) {
        return Err(PipelineError::Precondition(format!("part sizes {:?} need --lab", cfg.a_part_sizes)));
    }
    let l = load_complex(&cfg.l_path)?;
    let inst = Instance::new_checked(l, cfg.a_part_sizes)?;
    let x = build_blowup(&inst.gamma_a, &inst.gamma_b)?;
    let f = match &cfg.morse_signs {
        Some(p) => load_signs(p, &x)?,
        None => MorseOrientation::default_for(&x),
    };
    if cfg.strict && f.a_counts(&x, true) != [2, 2, 2] {
        return Err(PipelineError::Precondition("strict mode needs |Aᵢ⁺| = 2; pass --lab".into()));
    }
    if let Some(path) = manifest_path {
        fs::write(path, Manifest::new(&x).with_input("l", &inst.l).to_json()).map_err(|e| input_err(path, e))?;
    }
    Ok((inst, x, f))
}

/// Returns the process exit code.
fn dispatch(cli: Cli) -> Result<i32, PipelineError> {
    let manifest = cli.emit_manifest.as_deref();
    match cli.command {
        Command::Homology { file, dim } => {
            let k = load_complex(&file)?;
            println!("{}", homology(&k, dim).to_json());
        }
        Command::Octahedralise { file } => println!("{}", complex_to_json(&octahedralise(&load_complex(&file)?))),
        Command::Subdivide { file } => println!("{}", complex_to_json(&barycentric_subdivision(&load_complex(&file)?))),
        Command::Link { file, simplex } => {
            let k = load_complex(&file)?;
            let ids = simplex
                .iter()
                .map(|l| k.vertex_by_label(l).ok_or_else(|| PipelineError::Input(format!("no vertex labelled {l}"))))
                .collect::<Result<Vec<_>, _>>()?;
            println!("{}", complex_to_json(&k.link(&Simplex::new(ids))?));
        }
        Command::Flag { file } => {
            let k = load_complex(&file)?;
            print_json(&json!({ "flag": is_flag(&k), "nlcp": format!("{:?}", nlcp_verdict(&k)) }));
        }
        Command::RandomFlag { seed, vertices, density } => {
            println!("{}", complex_to_json(&random_flag_nlcp_complex(seed, vertices, density)?));
        }
        Command::Pi1 { file, simplify } => {
            let k = load_complex(&file)?;
            let mut p = fundamental_group_presentation(&k, 0)?;
            if simplify {
                p = tietze_simplify(&p, 100_000);
            }
            print!("{p}");
        }
        Command::Hz { base, words, select } => {
            let base_p = load_presentation(&base)?;
            let t = load_presentation(&words)?;
            if t.generators != base_p.generators {
                return Err(PipelineError::Input("word list must use the base generators in the same order".into()));
            }
            print!("{}", build_hz(&base_p, &t.relations, &select)?);
        }
        Command::VerifyTables(args) => {
            let (inst, x, f) = build(&args, manifest)?;
            let t1 = verify_table1(&x, &inst)?;
            let t2 = verify_table2(&x, &f, &inst)?;
            let npc = verify_npc(&x)?;
            let ok = t1.passed && t2.passed && npc.npc;
            print_json(&json!({ "table1": t1, "table2": t2, "npc": npc, "passed": ok }));
            return Ok(if ok { 0 } else { 1 });
        }
        Command::MorseReport { build: args, radius } => {
            let (_, x, f) = build(&args, manifest)?;
            let census = link_census(&x, &f)?;
            let fin = finiteness_report(&census);
            let window = cyclic_cover_window(&x, &f, radius)?;
            let census_json: serde_json::Value = serde_json::from_str(&census.to_json()).expect("census is json");
            print_json(&json!({
                "census": census_json,
                "finiteness": fin,
                "window": { "range": window.range, "period": window.period, "lifted_vertices": window.lifted_vertices.len(), "per_level": window.per_level },
            }));
        }
        Command::BranchCert { build: args, primes } => {
            let (_, x, f) = build(&args, manifest)?;
            let primes = match primes {
                Primes::Auto => None,
                Primes::Fixed([p12, p23, p31]) => Some([p23, p31, p12]),
            };
            let r = branch_report(&x, &f, primes)?;
            println!("{}", r.to_json());
            return Ok(if r.monodromy_passed && r.orderings_passed { 0 } else { 1 });
        }
        Command::Run { build: args, primes, radius, seed, out } => {
            let cfg = PipelineConfig {
                q_primes: primes,
                window_radius: radius,
                seed,
                out_dir: out.clone(),
                ..args.config()?
            };
            let run = run_pipeline(&cfg)?;
            if let Some(dir) = &out {
                write_artifacts(&run, dir)?;
            }
            if let (Some(path), Some(m)) = (manifest, &run.manifest) {
                fs::write(path, m.to_json()).map_err(|e| input_err(path, e))?;
            }
            println!("{}", run.report.to_json());
            return Ok(exit_code(&run.report));
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("BRANCHCUBE_WORKERS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("branchcube: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
