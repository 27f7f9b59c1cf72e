use branchcube::blowup::build_blowup;
use branchcube::branch::branch_report;
use branchcube::instance::Instance;
use branchcube::morse::MorseOrientation;
use branchcube::simplicial::simplex;

#[test]
fn one_triangle_certificate() {
    let inst = Instance::new_checked(simplex(2), [4, 4, 4]).unwrap();
    let x = build_blowup(&inst.gamma_a, &inst.gamma_b).unwrap();
    let f = MorseOrientation::default_for(&x);
    let r = branch_report(&x, &f, None).unwrap();

    let mut primes = r.primes.to_vec();
    primes.sort_unstable();
    primes.dedup();
    assert_eq!(primes.len(), 3);
    for p in &r.pairs {
        assert!(p.loops > 0);
        assert_eq!(p.loops_transitive, p.loops, "pair {:?}", p.pair);
        assert_eq!(p.euler_lambda, p.euler_bookkeeping);
        assert!(p.passed);
    }
    assert_eq!(r.transitive_vertices, r.branch_vertices);
    assert!(r.failures.is_empty(), "{:?}", r.failures);
    // Six patterns meet the locus; each contributes ascending and descending types.
    assert_eq!(r.link_types.len(), 12);
    for t in &r.link_types {
        assert!(t.branch_preimages.iter().all(|&n| n == 1));
        assert_eq!(t.cover_f_vector[0], t.sheets * (t.link_f_vector[0] - t.branch_vertices) + t.branch_vertices);
        assert_eq!(t.cover_simply_connected.value(), Some(true), "{}", t.representative);
        assert!(t.ordering.found(), "{}", t.representative);
    }
    assert!(r.monodromy_passed && r.orderings_passed);
}
