use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use branchcube::blowup::{
    branch_locus, build_blowup, hyperplane_directions, verify_branching_locus, verify_npc, verify_table1, Manifest,
};
use branchcube::branch::{branch_report, BranchReport};
use branchcube::homology::homology;
use branchcube::instance::Instance;
use branchcube::morse::{
    finiteness_report, level_function, level_inclusion_homology, link_census, square_sums_vanish, verify_table2,
    Census, LevelWindow, MorseOrientation,
};
use branchcube::presentation::{fundamental_group_presentation, tietze_simplify};
use branchcube::simplicial::{complex_from_json, is_flag, nlcp_verdict, NlcpVerdict, SimplicialComplex};
use branchcube::Error;

use crate::report::{Outcome, Report, Verdict};

const TIETZE_BUDGET: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Primes {
    Auto,
    /// For the coordinate pairs `(1,2), (2,3), (3,1)` in that order.
    Fixed([u64; 3]),
}

impl std::str::FromStr for Primes {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Primes::Auto);
        }
        let qs: Vec<u64> = s
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<Result<_, _>>()?;
        let qs: [u64; 3] = qs.try_into().map_err(|_| "expected three comma-separated primes or `auto`".to_string())?;
        Ok(Primes::Fixed(qs))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineConfig {
    pub l_path: PathBuf,
    pub a_part_sizes: [usize; 3],
    pub q_primes: Primes,
    /// JSON file `{"a_plus": [labels], "b_plus": [labels]}`; `b_plus` is optional.
    pub morse_signs: Option<PathBuf>,
    pub window_radius: i64,
    pub seed: u64,
    #[serde(skip)]
    pub out_dir: Option<PathBuf>,
    /// Requires `|Aᵢ| ≥ 4` and `|Aᵢ⁺| = 2`.
    pub strict: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            l_path: PathBuf::new(),
            a_part_sizes: [4, 4, 4],
            q_primes: Primes::Auto,
            morse_signs: None,
            window_radius: 0,
            seed: 0,
            out_dir: None,
            strict: true,
        }
    }
}

#[derive(Debug)]
pub enum PipelineError {
    Input(String),
    Precondition(String),
    Internal(String),
}

impl std::fmt::Display for PipelineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PipelineError::Input(s) => write!(f, "input error: {s}"),
            PipelineError::Precondition(s) => write!(f, "precondition failed: {s}"),
            PipelineError::Internal(s) => write!(f, "{s}"),
        }
    }
}

impl From<Error> for PipelineError {
    fn from(e: Error) -> Self {
        match kind(&e) {
            ErrorKind::Input => PipelineError::Input(e.to_string()),
            ErrorKind::Precondition => PipelineError::Precondition(e.to_string()),
            ErrorKind::Verification => PipelineError::Internal(e.to_string()),
        }
    }
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Input(_) => 2,
            PipelineError::Precondition(_) => 3,
            PipelineError::Internal(_) => 1,
        }
    }
}

enum ErrorKind {
    Input,
    Precondition,
    Verification,
}

fn kind(e: &Error) -> ErrorKind {
    match e {
        Error::DuplicateVertex { .. } | Error::NotAFace(_) | Error::InvalidInput(_) | Error::Json(_) => {
            ErrorKind::Input
        }
        Error::Precondition(_)
        | Error::Disconnected
        | Error::NotPrime(_)
        | Error::NotPrimitive { .. }
        | Error::ModulusTooSmall { .. }
        | Error::SizeBoundExceeded { .. }
        | Error::SamplingBudgetExhausted(_)
        | Error::SelectorOutOfRange { .. } => ErrorKind::Precondition,
        _ => ErrorKind::Verification,
    }
}

/// Turns a stage error into a failed stage; input errors abort the run.
fn settle<T>(
    report: &mut Report,
    name: &str,
    cites: &[&str],
    r: branchcube::Result<T>,
) -> Result<Option<T>, PipelineError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) => match kind(&e) {
            ErrorKind::Input => Err(PipelineError::Input(e.to_string())),
            ErrorKind::Precondition => {
                report.refuse(name, e.to_string(), cites);
                Ok(None)
            }
            ErrorKind::Verification => {
                report.push(name, Verdict::Fail, json!({ "error": e.to_string() }), cites);
                Ok(None)
            }
        },
    }
}

fn pass(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

pub fn load_complex(path: &Path) -> Result<SimplicialComplex, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| PipelineError::Input(format!("{}: {e}", path.display())))?;
    complex_from_json(&text).map_err(|e| PipelineError::Input(format!("{}: {e}", path.display())))
}

#[derive(Deserialize)]
struct SignsFile {
    a_plus: Vec<String>,
    #[serde(default)]
    b_plus: Option<Vec<String>>,
}

pub fn load_signs(path: &Path, x: &branchcube::blowup::CubeComplex) -> Result<MorseOrientation, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| PipelineError::Input(format!("{}: {e}", path.display())))?;
    let file: SignsFile =
        serde_json::from_str(&text).map_err(|e| PipelineError::Input(format!("{}: {e}", path.display())))?;
    let labels: Vec<&str> = file.a_plus.iter().map(String::as_str).collect();
    let mut f = MorseOrientation::with_a_plus_labels(x, &labels)?;
    if let Some(bs) = file.b_plus {
        let mut b_plus = vec![false; x.gamma_b.num_vertices()];
        for l in &bs {
            let v = x
                .gamma_b
                .vertex_by_label(l)
                .ok_or_else(|| PipelineError::Input(format!("no vertex labelled {l} in Γ_B")))?;
            b_plus[v as usize] = true;
        }
        f = MorseOrientation::new(x, f.a_plus, b_plus)?;
    }
    Ok(f)
}

/// Everything a run produces.
pub struct PipelineRun {
    pub report: Report,
    pub manifest: Option<Manifest>,
    pub certificate: Option<BranchReport>,
    pub census: Option<Census>,
}

pub const LAB_BANNER: &str =
    "LAB MODE: part sizes or sign splits differ from the main construction; results describe a smaller model";

/// Runs every construction and check in order, stopping at the first failure.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineRun, PipelineError> {
    let l = load_complex(&cfg.l_path)?;
    let (mode, banner) = if cfg.strict { ("strict", None) } else { ("lab", Some(LAB_BANNER.to_string())) };
    let config = serde_json::to_value(cfg).expect("config serializes");
    let mut report = Report::new(mode, banner, config);
    let mut run =
        PipelineRun { report: Report::new(mode, None, json!(null)), manifest: None, certificate: None, census: None };

    report.push("input", Verdict::Info, json!({ "f_vector": l.f_vector(), "dim": l.dim() }), &[]);
    if cfg.strict && cfg.a_part_sizes.iter().any(|&n| n < 4) {
        report.refuse("config", format!("strict mode needs every |Aᵢ| ≥ 4, got {:?}", cfg.a_part_sizes), &[]);
        run.report = report;
        return Ok(run);
    }

    let nlcp = nlcp_verdict(&l);
    let dim_ok = l.dim() == 2;
    let nlcp_ok = matches!(nlcp, NlcpVerdict::Holds);
    let nlcp_data = json!({ "result": format!("{nlcp:?}"), "dimension": l.dim() });
    if !(nlcp_ok && dim_ok) {
        let why = if dim_ok {
            format!("L fails the no-local-cut-points test: {nlcp:?}")
        } else {
            format!("L has dimension {}, expected 2", l.dim())
        };
        report.refuse("nlcp", why, &["input"]);
        run.report = report;
        return Ok(run);
    }
    report.push("nlcp", Verdict::Pass, nlcp_data, &["input"]);

    let Some(inst) = settle(&mut report, "subdivision", &["nlcp"], Instance::new(l.clone(), cfg.a_part_sizes))? else {
        run.report = report;
        return Ok(run);
    };
    let lp_flag = is_flag(&inst.l_prime);
    report.push(
        "subdivision",
        pass(lp_flag),
        json!({ "f_vector": inst.l_prime.f_vector(), "flag": lp_flag }),
        &["nlcp"],
    );
    let (fa, fb) = (is_flag(&inst.gamma_a), is_flag(&inst.gamma_b));
    report.push(
        "gamma",
        pass(fa && fb),
        json!({
            "gamma_a": { "f_vector": inst.gamma_a.f_vector(), "flag": fa },
            "gamma_b": { "f_vector": inst.gamma_b.f_vector(), "flag": fb },
        }),
        &["subdivision"],
    );
    if report.halted() {
        run.report = report;
        return Ok(run);
    }

    let Some(x) = settle(&mut report, "blowup", &["gamma"], build_blowup(&inst.gamma_a, &inst.gamma_b))? else {
        run.report = report;
        return Ok(run);
    };
    let mut manifest = Manifest::new(&x).with_input("l", &inst.l);
    report.push(
        "blowup",
        Verdict::Info,
        json!({ "counts": &manifest.counts, "patterns": &manifest.pattern_counts }),
        &["gamma"],
    );

    macro_rules! stop_if_halted {
        () => {
            if report.halted() {
                run.report = report;
                run.manifest = Some(manifest);
                return Ok(run);
            }
        };
    }

    if let Some(t1) = settle(&mut report, "table1", &["blowup"], verify_table1(&x, &inst))? {
        manifest.record("table1", t1.passed);
        report.push("table1", pass(t1.passed), &t1, &["blowup"]);
    }
    stop_if_halted!();
    if let Some(npc) = settle(&mut report, "npc", &["blowup"], verify_npc(&x))? {
        manifest.record("npc", npc.npc);
        report.push("npc", pass(npc.npc), &npc, &["blowup"]);
    }
    stop_if_halted!();
    if let Some(classes) = settle(&mut report, "directions", &["blowup"], hyperplane_directions(&x))? {
        let per: Vec<_> = classes
            .iter()
            .map(
                |c| json!({ "direction": c.direction, "hyperplanes": c.hyperplanes, "dual_edges": c.dual_edges.len() }),
            )
            .collect();
        manifest.record("directions", true);
        report.push("directions", Verdict::Pass, per, &["blowup"]);
    }
    stop_if_halted!();

    let f = match &cfg.morse_signs {
        Some(p) => load_signs(p, &x)?,
        None => MorseOrientation::default_for(&x),
    };
    let plus = f.a_counts(&x, true);
    if cfg.strict && plus != [2, 2, 2] {
        report.refuse("morse", format!("strict mode needs |Aᵢ⁺| = 2 in every part, got {plus:?}"), &["blowup"]);
        stop_if_halted!();
    }
    let lf = level_function(&x, &f);
    let affine = square_sums_vanish(&x, &f);
    let a_plus: Vec<&str> =
        (0..x.gamma_a.num_vertices() as u32).filter(|&v| f.a_plus[v as usize]).map(|v| x.gamma_a.label(v)).collect();
    report.push(
        "morse",
        pass(affine),
        json!({
            "a_plus": a_plus,
            "a_plus_counts": plus,
            "square_sums_vanish": affine,
            "period": lf.period,
            "components": lf.component.iter().max().map_or(0, |c| c + 1),
        }),
        &["blowup"],
    );
    stop_if_halted!();
    if let Some(t2) = settle(&mut report, "table2", &["morse"], verify_table2(&x, &f, &inst))? {
        manifest.record("table2", t2.passed);
        report.push("table2", pass(t2.passed), &t2, &["morse"]);
    }
    stop_if_halted!();

    let y = branch_locus(&x);
    if let Some(cert) = settle(&mut report, "branch_locus", &["blowup"], verify_branching_locus(&x, &y))? {
        manifest.record("branch_locus", cert.passed);
        let data = json!({ "vertices": y.vertices.len(), "edges": y.edges.len(), "certificate": &cert });
        report.push("branch_locus", pass(cert.passed), data, &["blowup", "directions"]);
    }
    stop_if_halted!();

    let primes = match cfg.q_primes {
        Primes::Auto => None,
        // Stored by dropped coordinate: pair (1,2) drops 3, (2,3) drops 1, (3,1) drops 2.
        Primes::Fixed([p12, p23, p31]) => Some([p23, p31, p12]),
    };
    if let Some(br) = settle(&mut report, "monodromy", &["branch_locus"], branch_report(&x, &f, primes))? {
        let pairs_ok = br.pairs.iter().all(|p| p.passed);
        let mono = json!({
            "primes": br.pairs.iter().map(|p| json!({ "pair": p.pair, "q": p.q, "primitive_root": p.primitive_root })).collect::<Vec<_>>(),
            "pairs": br.pairs.iter().map(|p| json!({
                "pair": p.pair,
                "commutator_identity": p.commutator_identity,
                "squares_without_one_corner": p.squares_without_one_corner,
                "euler": [p.euler_lambda, p.euler_bookkeeping],
                "incoming_distinct": p.incoming_distinct,
                "loops": p.loops,
                "loops_transitive": p.loops_transitive,
            })).collect::<Vec<_>>(),
            "branch_vertices": br.branch_vertices,
            "transitive_vertices": br.transitive_vertices,
        });
        manifest.record("monodromy", br.monodromy_passed);
        report.push(
            "monodromy",
            pass(pairs_ok && br.transitive_vertices == br.branch_vertices),
            mono,
            &["branch_locus"],
        );
        let covers = json!({
            "link_types": br.link_types.iter().map(|t| json!({
                "representative": t.representative,
                "count": t.count,
                "link_f_vector": t.link_f_vector,
                "cover_f_vector": t.cover_f_vector,
                "branch_preimages": t.branch_preimages,
                "cover_simply_connected": t.cover_simply_connected,
                "ordering_found": t.ordering.found(),
            })).collect::<Vec<_>>(),
            "failures": br.failures,
        });
        manifest.record("link_covers", br.monodromy_passed && br.orderings_passed);
        report.push("link_covers", pass(br.monodromy_passed && br.orderings_passed), covers, &["monodromy", "table2"]);
        run.certificate = Some(br);
    }
    stop_if_halted!();

    if cfg.window_radius > 0 {
        let r = cfg.window_radius;
        let windows = LevelWindow::new(&x, &f, 0, 0).and_then(|s| Ok((s, LevelWindow::new(&x, &f, -r, r)?)));
        let inc = windows.and_then(|(s, b)| level_inclusion_homology(&x, &f, &s, &b));
        if let Some(inc) = settle(&mut report, "level_sets", &["morse", "table2"], inc)? {
            manifest.record("level_sets", json!({ "h0_iso": inc.h0_iso, "h1_onto": inc.h1_onto }));
            let ok = !inc.hypothesis || (inc.h0_iso && inc.h1_onto);
            report.push("level_sets", pass(ok), &inc, &["morse", "table2"]);
        }
        stop_if_halted!();
    }

    if let Some(census) = settle(&mut report, "finiteness", &["table2"], link_census(&x, &f))? {
        let fin = finiteness_report(&census);
        let h1 = homology(&inst.l, 1);
        let pi1 = if !h1.is_trivial() {
            "nontrivial: H₁(L) ≠ 0".to_string()
        } else {
            let p = fundamental_group_presentation(&inst.l, 0)?;
            if tietze_simplify(&p, TIETZE_BUDGET).is_evidently_trivial() {
                "trivial".to_string()
            } else {
                "undecided: H₁(L) = 0 but the presentation did not reduce".to_string()
            }
        };
        let branch = match pi1.as_str() {
            "trivial" => "π₁(L) = 1: the F₂ branch of the verdict applies",
            p if p.starts_with("undecided") => "H₁(L) = 0: the FP₂-not-finitely-presented branch applies if π₁(L) ≠ 1",
            _ => "H₁(L) ≠ 0: the FP₂ argument does not apply",
        };
        let data = json!({
            "h1_l": h1,
            "pi1_l": pi1,
            "branch": branch,
            "census": census.classes.iter().map(|c| json!({
                "representative": c.representative,
                "f_vector": c.f_vector,
                "count": c.count,
                "simply_connected": c.simply_connected,
            })).collect::<Vec<_>>(),
            "report": fin,
        });
        report.push("finiteness", Verdict::Info, data, &["table2", "link_covers"]);
        run.census = Some(census);
    }
    report.assume(
        "cover_npc",
        "A branched cover of a non-positively curved cube complex over a locally convex branching locus whose link complements are nonempty and connected is non-positively curved. Not computed; only link-level covers are built.",
        &["link_covers"],
    );
    report.assume(
        "morse_criterion",
        "Finiteness verdicts apply the Morse-theoretic criterion for kernels of maps to ℤ as decision logic; the criterion itself is not verified computationally.",
        &["finiteness"],
    );

    run.report = report;
    run.manifest = Some(manifest);
    Ok(run)
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Writes the artifacts of a run under `dir`, plus `index.json` mapping each file
/// to its SHA-256.
pub fn write_artifacts(run: &PipelineRun, dir: &Path) -> Result<BTreeMap<String, String>, PipelineError> {
    fs::create_dir_all(dir).map_err(|e| PipelineError::Input(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<(&str, String)> = vec![("report.json", run.report.to_json())];
    if let Some(m) = &run.manifest {
        files.push(("manifest.json", m.to_json()));
    }
    if let Some(c) = &run.certificate {
        files.push(("certificate.json", c.to_json()));
    }
    if let Some(c) = &run.census {
        files.push(("census.json", c.to_json()));
    }
    let mut index = BTreeMap::new();
    for (name, body) in files {
        fs::write(dir.join(name), &body).map_err(|e| PipelineError::Input(format!("{name}: {e}")))?;
        index.insert(name.to_string(), sha256_hex(body.as_bytes()));
    }
    let text = serde_json::to_string_pretty(&json!({ "files": index })).expect("index serializes");
    fs::write(dir.join("index.json"), text).map_err(|e| PipelineError::Input(format!("index.json: {e}")))?;
    Ok(index)
}

pub fn exit_code(report: &Report) -> i32 {
    match report.outcome {
        Outcome::Passed => 0,
        Outcome::VerificationFailed => 1,
        Outcome::PreconditionFailed => 3,
    }
}
