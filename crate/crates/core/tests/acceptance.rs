//! Acceptance criteria 1 to 10, one line each. Run with
//! `cargo test -p branchcube --test acceptance`.

mod support;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use branchcube::blowup::{build_blowup, verify_npc, verify_table1, CubeComplex};
use branchcube::branch::{branch_report, commutator, is_primitive_root, make_perm_pair};
use branchcube::homology::homology;
use branchcube::instance::{gamma_a, Instance};
use branchcube::morse::{level_inclusion_homology, verify_table2, LevelWindow, MorseOrientation};
use branchcube::simplicial::{
    boundary_of_simplex, cycle, octahedralise, octahedron, projective_plane, random_flag_nlcp_complex, simplex,
    SimplicialComplex,
};
use support::{oracle_reduced_homology, random_complex};

const TABLE_LIMIT: Duration = Duration::from_secs(300);
const LEMMA_SUITE_LIMIT: Duration = Duration::from_secs(120);
const COMMUTATOR_LIMIT: Duration = Duration::from_secs(1);
const LOOPS_LIMIT: Duration = Duration::from_secs(120);
const WINDOW_LIMIT: Duration = Duration::from_secs(300);
const LEMMA_SUITE_SIZE: usize = 50;
const LEMMA_SEED_BUDGET: u64 = 5_000;
const ORACLE_RANDOM: u64 = 10;
const OCTAHEDRAL_RANDOM: u64 = 20;

struct Built {
    name: &'static str,
    inst: Instance,
    x: CubeComplex,
    built_in: Duration,
}

fn build(name: &'static str, l: SimplicialComplex) -> Built {
    let t = Instant::now();
    let inst = Instance::new_checked(l, [4, 4, 4]).expect("instance");
    let x = build_blowup(&inst.gamma_a, &inst.gamma_b).expect("blowup");
    Built { name, inst, x, built_in: t.elapsed() }
}

struct Line {
    id: usize,
    passed: bool,
    detail: String,
}

fn criterion(id: usize, f: impl FnOnce() -> (bool, String)) -> Line {
    let t = Instant::now();
    let (passed, detail) = f();
    let line = Line { id, passed, detail: format!("{detail} [{:.2?}]", t.elapsed()) };
    println!("criterion {:>2}: {}  {}", line.id, if line.passed { "PASS" } else { "FAIL" }, line.detail);
    line
}

fn tables(instances: &[Built], which: usize) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for b in instances {
        let t = Instant::now();
        let (passed, rows) = if which == 1 {
            let r = verify_table1(&b.x, &b.inst).expect("table 1 runs");
            (r.passed, r.rows.len())
        } else {
            let f = MorseOrientation::default_for(&b.x);
            let r = verify_table2(&b.x, &f, &b.inst).expect("table 2 runs");
            (r.passed, r.ascending.rows.len() + r.descending.rows.len())
        };
        let elapsed = t.elapsed() + if which == 1 { b.built_in } else { Duration::ZERO };
        ok &= passed && elapsed < TABLE_LIMIT;
        parts.push(format!("{}: {} vertices, {rows} rows, {:.1?}", b.name, b.x.num_vertices(), elapsed));
    }
    (ok, parts.join("; "))
}

fn lemma_suite() -> (bool, String) {
    let t = Instant::now();
    let (mut tested, mut seed) = (0, 0);
    let mut bad = Vec::new();
    while tested < LEMMA_SUITE_SIZE && seed < LEMMA_SEED_BUDGET {
        let l = random_flag_nlcp_complex(seed, 7, 0.6).expect("sampler");
        if homology(&l, 1).is_trivial() {
            tested += 1;
            if !homology(&octahedralise(&l), 1).is_trivial() {
                bad.push(seed);
            }
        }
        seed += 1;
    }
    let ok = tested == LEMMA_SUITE_SIZE && bad.is_empty() && t.elapsed() < LEMMA_SUITE_LIMIT;
    (ok, format!("{tested} complexes with H₁ = 0 from {seed} seeds, counterexamples {bad:?}"))
}

fn npc(instances: &[Built]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for b in instances {
        let r = verify_npc(&b.x).expect("npc runs");
        ok &= r.npc && r.non_flag_links == 0 && r.vertices_checked == b.x.num_vertices();
        parts.push(format!("{}: {} links flag", b.name, r.vertices_checked - r.non_flag_links));
    }
    (ok, parts.join("; "))
}

/// Every primitive root, every `0 < a < q` and `0 < b < q − 1`, checked against
/// the translation `p ↦ p + a(lᵇ − 1)` computed here.
fn commutators() -> (bool, String) {
    let t = Instant::now();
    let mut cases = 0;
    let mut bad = Vec::new();
    for q in [3u64, 5, 7, 11] {
        for l in (2..q).filter(|&l| is_primitive_root(l, q)) {
            let pp = make_perm_pair(q, l).expect("perm pair");
            for a in 1..q as i64 {
                for b in 1..q as i64 - 1 {
                    cases += 1;
                    let c = commutator(&pp.alpha_pow(a), &pp.beta_pow(b));
                    let lb = (0..b).fold(1u64, |acc, _| acc * l % q);
                    let shift = (a as u64 * (lb + q - 1)) % q;
                    let translation = (0..q as u32).all(|p| c.apply(p) as u64 == (p as u64 + shift) % q);
                    if !(translation && shift != 0 && c.order() == q) {
                        bad.push((q, l, a, b));
                    }
                }
            }
        }
    }
    let ok = bad.is_empty() && t.elapsed() < COMMUTATOR_LIMIT;
    (ok, format!("{cases} cases, failures {bad:?}"))
}

fn window() -> (bool, String) {
    let t = Instant::now();
    let g = gamma_a([2, 2, 2]);
    let x = build_blowup(&g, &g).expect("lab blowup");
    let f = MorseOrientation::default_for(&x);
    let small = LevelWindow::new(&x, &f, 0, 0).expect("window");
    let big = LevelWindow::new(&x, &f, -1, 1).expect("window");
    match level_inclusion_homology(&x, &f, &small, &big) {
        Ok(r) => {
            let ok = r.hypothesis && r.h0_iso && r.h1_onto && t.elapsed() < WINDOW_LIMIT;
            (
                ok,
                format!(
                    "hypothesis {}, H₀ iso {}, H₁ onto {}, H₁ {} → {}",
                    r.hypothesis, r.h0_iso, r.h1_onto, r.h1_small, r.h1_big
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    }
}

fn oracle() -> (bool, String) {
    let mut complexes = vec![cycle(3), octahedron(), projective_plane()];
    complexes.extend((0..ORACLE_RANDOM).map(|s| random_complex(1000 + s, 8)));
    let mut bad = Vec::new();
    for (n, k) in complexes.iter().enumerate() {
        for (i, (betti, torsion)) in oracle_reduced_homology(k).into_iter().enumerate() {
            let h = homology(k, i as isize);
            let got: Vec<i128> = h.torsion.iter().map(|t| t.try_into().expect("small torsion")).collect();
            if h.betti != betti || got != torsion {
                bad.push((n, i));
            }
        }
    }
    (bad.is_empty(), format!("{} complexes, mismatches (complex, degree) {bad:?}", complexes.len()))
}

fn octahedral_laws() -> (bool, String) {
    let mut bad = Vec::new();
    for s in 0..OCTAHEDRAL_RANDOM {
        let k = random_complex(2000 + s, 7);
        let o = octahedralise(&k);
        let (fk, fo) = (k.f_vector(), o.f_vector());
        let scaled = fk.len() == fo.len() && fk.iter().zip(&fo).enumerate().all(|(i, (&a, &b))| b == a << (i + 1));
        if o.num_vertices() != 2 * k.num_vertices() || !scaled {
            bad.push(s);
        }
    }
    (bad.is_empty(), format!("{OCTAHEDRAL_RANDOM} complexes, failures {bad:?}"))
}

fn main() -> ExitCode {
    let instances = [build("one triangle", simplex(2)), build("tetrahedron boundary", boundary_of_simplex(3))];
    let mut lines = vec![
        criterion(1, || tables(&instances, 1)),
        criterion(2, || tables(&instances, 2)),
        criterion(3, lemma_suite),
        criterion(4, || npc(&instances)),
        criterion(5, commutators),
    ];

    // Criteria 6 and 7 read one certificate for the one-triangle instance.
    let t = Instant::now();
    let x = &instances[0].x;
    let cert = branch_report(x, &MorseOrientation::default_for(x), None);
    let cert_time = t.elapsed();
    lines.push(criterion(6, || match &cert {
        Ok(r) => {
            let loops: usize = r.pairs.iter().map(|p| p.loops).sum();
            let full_cycles = r.pairs.iter().all(|p| {
                p.loops > 0
                    && p.loops_transitive == p.loops
                    && p.loop_samples.iter().all(|s| s.cycle_type == vec![p.q as usize])
            });
            let ok = full_cycles && r.pairs.iter().all(|p| p.formula_disagreements == 0) && cert_time < LOOPS_LIMIT;
            (
                ok,
                format!(
                    "{}, {loops} loops, all transitive: {full_cycles}, certificate {cert_time:.1?}",
                    r.pairs
                        .iter()
                        .map(|p| format!("q{}{} = {}", p.pair[0], p.pair[1], p.q))
                        .collect::<Vec<_>>()
                        .join(" ")
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    }));
    lines.push(criterion(7, || match &cert {
        Ok(r) => {
            let found = r.link_types.iter().filter(|t| t.ordering.found()).count();
            (r.orderings_passed, format!("{found} of {} link types ordered", r.link_types.len()))
        }
        Err(e) => (false, e.to_string()),
    }));
    lines.push(criterion(8, window));
    lines.push(criterion(9, oracle));
    lines.push(criterion(10, octahedral_laws));

    let failed: Vec<usize> = lines.iter().filter(|l| !l.passed).map(|l| l.id).collect();
    println!("acceptance: {} of {} passed", lines.len() - failed.len(), lines.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
