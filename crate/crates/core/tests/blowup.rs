use branchcube::blowup::{
    branch_locus, build_blowup, hyperplane_directions, verify_branching_locus, verify_table1, Side,
};
use branchcube::instance::Instance;
use branchcube::simplicial::simplex;

#[test]
fn one_triangle_instance() {
    let inst = Instance::new_checked(simplex(2), [4, 4, 4]).unwrap();
    let x = build_blowup(&inst.gamma_a, &inst.gamma_b).unwrap();
    assert!(verify_table1(&x, &inst).unwrap().passed);
    let classes = hyperplane_directions(&x).unwrap();
    let total_edges: usize = classes.iter().map(|c| c.dual_edges.len()).sum();
    assert_eq!(total_edges, x.counts()[1]);

    // Independent recount of the locus edges from endpoint patterns.
    let y = branch_locus(&x);
    let pinned = |k: usize| match k {
        0 => [(1, Side::B), (2, Side::A)],
        1 => [(0, Side::A), (2, Side::B)],
        _ => [(0, Side::B), (1, Side::A)],
    };
    let recount = x
        .cubes()
        .iter()
        .filter(|c| c.dim() == 1)
        .filter(|c| {
            let k = c.free.iter().position(Option::is_some).unwrap();
            x.corners(c).iter().all(|&v| pinned(k).iter().all(|&(i, s)| x.vertex(v).coords[i].side == s))
        })
        .count();
    assert_eq!(y.edges.len(), recount);
    let cert = verify_branching_locus(&x, &y).unwrap();
    assert!(cert.passed && !cert.degenerate);
}
