mod support;

use std::sync::OnceLock;

use branchcube::blowup::{build_blowup, CubeComplex};
use branchcube::branch::{
    commutator, corner_loops, is_prime, label_graph_with_root, make_perm_pair, monodromy_of_loop, project_graphs,
    smallest_primitive_root, ProjectionGraph,
};
use branchcube::homology::homology;
use branchcube::instance::{gamma_a, Instance};
use branchcube::morse::{orient_edges, square_sums_vanish, MorseOrientation};
use branchcube::presentation::{abelianization, tietze_simplify, Presentation, Word};
use branchcube::simplicial::{barycentric_subdivision, is_flag, octahedralise, random_flag_nlcp_complex, simplex};
use proptest::prelude::*;
use support::random_complex;

fn one_triangle() -> &'static CubeComplex {
    static X: OnceLock<CubeComplex> = OnceLock::new();
    X.get_or_init(|| {
        let inst = Instance::new_checked(simplex(2), [4, 4, 4]).unwrap();
        build_blowup(&inst.gamma_a, &inst.gamma_b).unwrap()
    })
}

fn projection(k: usize) -> &'static ProjectionGraph {
    static G: OnceLock<Vec<ProjectionGraph>> = OnceLock::new();
    &G.get_or_init(|| (0..3).map(|k| project_graphs(one_triangle(), k)).collect())[k]
}

fn lab() -> &'static CubeComplex {
    static X: OnceLock<CubeComplex> = OnceLock::new();
    X.get_or_init(|| {
        let g = gamma_a([2, 2, 2]);
        build_blowup(&g, &g).unwrap()
    })
}

fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..hi).filter(|&q| is_prime(q)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn octahedralisation_scales_face_counts(seed in any::<u64>()) {
        let k = random_complex(seed, 7);
        let s = octahedralise(&k);
        let (fk, fs) = (k.f_vector(), s.f_vector());
        prop_assert_eq!(fs.len(), fk.len());
        for (i, (&a, &b)) in fk.iter().zip(&fs).enumerate() {
            prop_assert_eq!(b, a << (i + 1));
        }
    }

    #[test]
    fn subdivision_is_flag(seed in any::<u64>()) {
        let k = random_complex(seed, 6);
        let sd = barycentric_subdivision(&k);
        prop_assert!(is_flag(&sd));
        prop_assert_eq!(sd.euler_characteristic(), k.euler_characteristic());
    }

    #[test]
    fn octahedralising_acyclic_in_degree_one(seed in any::<u64>()) {
        let l = random_flag_nlcp_complex(seed, 7, 0.6).unwrap();
        prop_assume!(homology(&l, 1).is_trivial());
        prop_assert!(homology(&octahedralise(&l), 1).is_trivial());
    }

    #[test]
    fn conjugation_gives_the_root_power(idx in 0usize..12, a in 1i64..60) {
        let q = primes_between(3, 60)[idx];
        let pp = make_perm_pair(q, smallest_primitive_root(q)).unwrap();
        let conj = pp.beta.inverse().then(&pp.alpha_pow(a)).then(&pp.beta);
        prop_assert_eq!(conj, pp.alpha_pow(a * pp.l as i64));
    }

    #[test]
    fn incoming_labels_distinct_for_every_root(k in 0usize..3, pick in 0usize..4, root_pick in any::<prop::sample::Index>()) {
        let g = projection(k);
        let q = primes_between(g.valence_bound() as u64 + 1, 60)[pick];
        let roots: Vec<u64> = (2..q).filter(|&l| make_perm_pair(q, l).is_ok()).collect();
        let l = roots[root_pick.index(roots.len())];
        let labels = label_graph_with_root(g, q, Some(l)).unwrap();
        prop_assert!(labels.incoming_distinct(g));
    }

    #[test]
    fn monodromy_is_multiplicative(k in 0usize..3, pick in any::<prop::sample::Index>()) {
        let x = one_triangle();
        let g = projection(k);
        let q = primes_between(g.valence_bound() as u64 + 1, 60)[0];
        let labels = label_graph_with_root(g, q, None).unwrap();
        let loops = corner_loops(x, g, &labels).unwrap();
        let walk = &loops[pick.index(loops.len())].walk;
        let m = monodromy_of_loop(x, g, &labels, walk).unwrap();
        let mut twice = walk.clone();
        twice.extend_from_slice(&walk[1..]);
        prop_assert_eq!(monodromy_of_loop(x, g, &labels, &twice).unwrap(), m.then(&m));
        let back: Vec<u32> = walk.iter().rev().copied().collect();
        prop_assert_eq!(monodromy_of_loop(x, g, &labels, &back).unwrap(), m.inverse());
    }

    #[test]
    fn any_signs_give_a_well_defined_level(a_plus in prop::collection::vec(any::<bool>(), 6), b_plus in prop::collection::vec(any::<bool>(), 6)) {
        let x = lab();
        let f = MorseOrientation::new(x, a_plus, b_plus).unwrap();
        prop_assert!(square_sums_vanish(x, &f));
        prop_assert_eq!(orient_edges(x, &f).edges.len(), x.counts()[1]);
    }

    #[test]
    fn tietze_keeps_the_abelianization(gens in 1usize..4, rels in prop::collection::vec(prop::collection::vec((0usize..4, any::<bool>()), 0..6), 0..4)) {
        let relations: Vec<Word> = rels
            .iter()
            .map(|r| Word::new(r.iter().map(|&(g, inv)| (g % gens, if inv { -1 } else { 1 }))))
            .collect();
        let p = Presentation::new((0..gens).map(|i| format!("g{i}")).collect(), relations).unwrap();
        prop_assert_eq!(abelianization(&tietze_simplify(&p, 10_000)), abelianization(&p));
    }

    #[test]
    fn commutator_of_powers(idx in 0usize..8, a in 1i64..40, b in 1i64..40) {
        let q = primes_between(3, 40)[idx];
        let pp = make_perm_pair(q, smallest_primitive_root(q)).unwrap();
        let c = commutator(&pp.alpha_pow(a), &pp.beta_pow(b));
        // Points move by a(lᵇ − 1) under the commutator.
        let lb = (0..b).fold(1u64, |acc, _| acc * pp.l % q);
        let shift = ((a as i128 * (lb as i128 - 1)).rem_euclid(q as i128)) as u32;
        prop_assert!((0..q as u32).all(|p| c.apply(p) == (p + shift) % q as u32));
    }
}
