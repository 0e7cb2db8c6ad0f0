use std::sync::OnceLock;

use flockgq::blt::{blt_build, BltParams, Family};
use flockgq::graph::SrgParams;
use flockgq::knarr::{knarr_autos, FlockGq, LineType, PointType};
use flockgq::linspaces::{parse_matrix, Subspace};
use flockgq::search::*;
use flockgq::typeone::{concurrency_graph, t_group, typeone_build, verify_hemisystem, Orientation};

struct Census {
    gq: FlockGq,
    solutions: Vec<Vec<u32>>,
}

fn gq3() -> FlockGq {
    FlockGq::build(blt_build(Family::Linear, 3, BltParams::default()).unwrap()).unwrap()
}

fn census() -> &'static Census {
    static C: OnceLock<Census> = OnceLock::new();
    C.get_or_init(|| {
        let gq = gq3();
        let sys = TacticalSystem::for_group(gq.incidence(), &GroupAction::trivial()).unwrap();
        let r = solve_verified(&sys, &Limits::default(), 1).unwrap();
        assert_eq!(r.status, Status::Complete);
        Census { gq, solutions: r.solutions }
    })
}

fn table_ell(gq: &FlockGq) -> Subspace {
    let f = gq.field();
    Subspace::new(f, &parse_matrix(f, "0 1 0 1 0 0; 0 0 1 1 1 0").unwrap()).unwrap()
}

/// |PGammaU(n, q)| from |GU(n,q)| = q^(n(n-1)/2) prod (q^i - (-1)^i),
/// divided by the q+1 scalars and multiplied by the 2e field automorphisms.
fn pgammau_order(n: u32, p: u64, e: u32) -> u64 {
    let q = p.pow(e);
    let mut gu = q.pow(n * (n - 1) / 2);
    for i in 1..=n {
        let term = if i % 2 == 0 { q.pow(i) - 1 } else { q.pow(i) + 1 };
        gu *= term;
    }
    gu / (q + 1) * 2 * e as u64
}

#[test]
fn trivial_orbits_and_b_equals_incidence() {
    let gq = gq3();
    let inc = gq.incidence();
    let (po, lo) = GroupAction::trivial().orbits(inc);
    assert_eq!((po.len(), lo.len()), (280, 112));
    let sys = TacticalSystem::for_group(inc, &GroupAction::trivial()).unwrap();
    assert_eq!(sys.target, 2);
    let b = sys.dense_b();
    for (i, row) in b.iter().enumerate() {
        assert_eq!(row.iter().sum::<u32>(), 4);
        for (j, &x) in row.iter().enumerate() {
            assert_eq!(x, inc.is_incident(i, j) as u32);
        }
    }
}

#[test]
fn t_orbits_and_system_shape() {
    let gq = gq3();
    let gens = t_group(&gq, &table_ell(&gq)).unwrap();
    let act = GroupAction::from_maps(&gq, &gens).unwrap();
    let (_, lo) = act.orbits(gq.incidence());
    for o in &lo {
        match gq.line_type(o[0] as usize) {
            LineType::Tangent => assert_eq!(o.len(), 9),
            LineType::Blt => assert_eq!(o.len(), 1),
        }
    }
    let sys = TacticalSystem::for_group(gq.incidence(), &act).unwrap();
    assert_eq!(sys.num_vars(), 12 + 4);
    assert!(sys.dense_b().iter().all(|r| r.iter().sum::<u32>() == 4));
}

#[test]
fn elation_orbits_on_affine_points() {
    let gq = gq3();
    let e = knarr_autos(&gq, &[]).unwrap().elations;
    let act = GroupAction::from_maps(&gq, &e).unwrap();
    let (po, _) = act.orbits(gq.incidence());
    for o in &po {
        if gq.point_type(o[0] as usize) == PointType::Affine {
            assert_eq!(243 % o.len(), 0);
        }
    }
}

#[test]
fn census_q3_matches_group_order_oracle() {
    let c = census();
    let expected = pgammau_order(4, 3, 1) / 40320;
    assert_eq!(pgammau_order(4, 3, 1), 26_127_360);
    assert_eq!(c.solutions.len() as u64, expected);
    let want = SrgParams { v: 56, k: 10, lambda: 0, mu: 2 };
    for s in &c.solutions {
        assert!(verify_hemisystem(&c.gq, s).passed);
        assert_eq!(concurrency_graph(&c.gq, s).srg_check().unwrap(), want);
    }
    let mut sorted = c.solutions.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), c.solutions.len());
}

#[test]
fn t_prescribed_equals_filtered_census() {
    let c = census();
    let gq = &c.gq;
    let ell = table_ell(gq);
    let act = GroupAction::from_maps(gq, &t_group(gq, &ell).unwrap()).unwrap();
    let sys = TacticalSystem::for_group(gq.incidence(), &act).unwrap();
    let mut got = solve_verified(&sys, &Limits::default(), 1).unwrap().solutions;
    got.sort();
    let mut want: Vec<Vec<u32>> = c.solutions.iter().filter(|s| act.fixes_lines(s)).cloned().collect();
    want.sort();
    assert!(!want.is_empty());
    assert_eq!(got, want);
    for s in [vec![1], vec![3], vec![4]] {
        for o in [Orientation::Plus, Orientation::Minus] {
            let h = typeone_build(gq, &ell, &s, o).unwrap();
            assert!(got.contains(&h.lines));
        }
    }
}

#[test]
fn excluding_every_census_member_is_infeasible() {
    let c = census();
    let mut sys = TacticalSystem::for_group(c.gq.incidence(), &GroupAction::trivial()).unwrap();
    for s in &c.solutions {
        sys.exclude(s, s.len() as u32 - 1).unwrap();
    }
    let r = solve_all(&sys, &Limits::default());
    assert_eq!(r.status, Status::Complete);
    assert!(r.solutions.is_empty());
}

#[test]
fn excluding_one_removes_exactly_it() {
    let c = census();
    let mut sys = TacticalSystem::for_group(c.gq.incidence(), &GroupAction::trivial()).unwrap();
    sys.exclude(&c.solutions[5], 55).unwrap();
    let r = solve_all(&sys, &Limits::default());
    let mut want = c.solutions.clone();
    want.remove(5);
    assert_eq!(r.solutions, want);
}

#[test]
fn solver_is_deterministic_across_runs_and_threads() {
    let gq = gq3();
    let sys = TacticalSystem::for_group(gq.incidence(), &GroupAction::trivial()).unwrap();
    let a = solve_all(&sys, &Limits::default());
    let b = solve_all(&sys, &Limits::default());
    let c = solve_all_threads(&sys, &Limits::default(), 4);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&c).unwrap());
}

#[test]
fn limits_are_reported() {
    let gq = gq3();
    let sys = TacticalSystem::for_group(gq.incidence(), &GroupAction::trivial()).unwrap();
    let r = solve_all(&sys, &Limits { max_solutions: Some(3), ..Default::default() });
    assert_eq!(r.status, Status::LimitReached);
    assert_eq!(r.solutions, census().solutions[..3].to_vec());
    let r = solve_all(&sys, &Limits { max_nodes: Some(10), ..Default::default() });
    assert_eq!(r.status, Status::LimitReached);
}

#[test]
fn zero_row_with_positive_target_is_infeasible() {
    let gq = gq3();
    let mut sys = TacticalSystem::for_group(gq.incidence(), &GroupAction::trivial()).unwrap();
    sys.rows[0].clear();
    assert!(solve_all(&sys, &Limits::default()).solutions.is_empty());
}

#[test]
fn max_intersection_matches_brute_force() {
    let c = census();
    let gq = &c.gq;
    let reference = typeone_build(gq, &table_ell(gq), &[1], Orientation::Plus).unwrap().lines;
    let brute = c
        .solutions
        .iter()
        .filter(|s| **s != reference)
        .map(|s| s.iter().filter(|l| reference.binary_search(l).is_ok()).count() as u32)
        .max()
        .unwrap();
    let sys = TacticalSystem::for_group(gq.incidence(), &GroupAction::trivial()).unwrap();
    let m = max_intersection(&sys, &reference, &Limits::default()).unwrap();
    assert!(m.exact);
    assert_eq!(m.value, Some(brute));
    assert!(brute < 56);
    let w = m.witness.unwrap();
    assert!(verify_hemisystem(gq, &w).passed);
    let complement: Vec<u32> = (0..gq.num_lines() as u32).filter(|l| reference.binary_search(l).is_err()).collect();
    assert!(c.solutions.contains(&complement));
    assert!(complement.iter().all(|l| reference.binary_search(l).is_err()));
}

#[test]
fn essential_orbit_probes() {
    let c = census();
    let gq = &c.gq;
    let inc = gq.incidence();
    let sys = TacticalSystem::for_group(inc, &GroupAction::trivial()).unwrap();
    let l1 = 0u32;
    let meets = |m: u32| inc.points_on(m as usize).iter().any(|&p| inc.is_incident(p as usize, l1 as usize));
    let disjoint: Vec<u32> = (0..gq.num_lines() as u32).filter(|&m| !meets(m)).collect();
    let concurrent: Vec<u32> = (1..gq.num_lines() as u32).filter(|&m| meets(m)).collect();
    let v = essential_orbits(&sys, &[l1], &[disjoint.clone(), concurrent], &Limits::default()).unwrap();
    assert_eq!(v[0], Verdict::Essential);
    // census oracle for the second probe
    let avoid_concurrent = c
        .solutions
        .iter()
        .any(|s| s.contains(&l1) && s.iter().all(|&m| m == l1 || !meets(m)));
    assert_eq!(v[1] == Verdict::Inessential, avoid_concurrent);

    let singles: Vec<Vec<u32>> = (0..gq.num_lines() as u32).map(|l| vec![l]).collect();
    let v = essential_orbits(&sys, &[], &singles, &Limits::default()).unwrap();
    assert!(v.iter().all(|&x| x == Verdict::Inessential));

    let blt: Vec<u32> = gq.blt_lines().map(|j| j as u32).collect();
    let v = essential_orbits(&sys, &[], std::slice::from_ref(&blt), &Limits::default()).unwrap();
    let avoid_blt = c.solutions.iter().any(|s| s.iter().all(|l| !blt.contains(l)));
    assert_eq!(v[0] == Verdict::Inessential, avoid_blt);
}

#[test]
fn lp_export_shape_and_golden() {
    let gq = gq3();
    let sys = TacticalSystem::for_group(gq.incidence(), &GroupAction::trivial()).unwrap();
    let lp = export_lp(&sys);
    assert_eq!(lp.lines().filter(|l| l.starts_with(" p")).count(), 280);
    let bin = lp.split("Binary\n").nth(1).unwrap();
    assert_eq!(bin.lines().filter(|l| l.starts_with(" x")).count(), 112);
    assert_eq!(lp, export_lp(&sys));
    let golden = include_str!("data/q3_trivial.lp");
    assert_eq!(lp, golden);
}

#[test]
fn singer_scan_q3_contains_bundled_set() {
    use flockgq::singer::{bundled_pi, pi_hemisystem, SingerFrame};
    let desc: RunDescriptor = serde_json::from_str(r#"{"singer_q":3,"group":{"builtin":"singer"}}"#).unwrap();
    let sys = desc.system().unwrap();
    let r = solve_verified(&sys, &Limits::default(), 1).unwrap();
    let fr = SingerFrame::new(3).unwrap();
    let h = pi_hemisystem(&fr, &bundled_pi(3).unwrap()).unwrap();
    assert!(r.solutions.contains(&h.lines));
}

#[test]
fn run_descriptor_for_flock_model() {
    let gq = gq3();
    let desc = RunDescriptor {
        schema: "qf/1".into(),
        gq: Some(gq.descriptor()),
        singer_q: None,
        group: GroupSpec::default(),
        prescribe: vec![0],
        forbid: vec![],
        exclude: vec![],
        limits: Limits::default(),
    };
    let text = serde_json::to_string(&desc).unwrap();
    let back: RunDescriptor = serde_json::from_str(&text).unwrap();
    let r = solve_all(&back.system().unwrap(), &back.limits);
    let want = census().solutions.iter().filter(|s| s.contains(&0)).count();
    assert_eq!(r.solutions.len(), want);
    assert_eq!(want, 324);
    let bad: RunDescriptor = serde_json::from_str(r#"{"singer_q":3,"gq":null,"schema":"qf/2"}"#).unwrap();
    assert!(bad.system().is_err());
}

#[test]
#[ignore]
fn write_golden_lp() {
    let gq = gq3();
    let sys = TacticalSystem::for_group(gq.incidence(), &GroupAction::trivial()).unwrap();
    std::fs::write(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/q3_trivial.lp"), export_lp(&sys)).unwrap();
}
