use flockgq::graph::SrgParams;
use flockgq::singer::*;

fn check(q: u32) -> SingerFrame {
    let fr = SingerFrame::new(q).unwrap();
    let h = pi_hemisystem(&fr, &bundled_pi(q).unwrap()).unwrap();
    let r = verify_point_hemisystem(&fr, &h.lines);
    assert!(r.passed, "q={q}: size {} violations {}", r.size, r.violations.len());
    fr
}

#[test]
fn bundled_tables_q3_q5() {
    let fr = check(3);
    let h = pi_hemisystem(&fr, &bundled_pi(3).unwrap()).unwrap();
    let g = collinearity_graph(&fr, &h.lines);
    assert_eq!(g.srg_check().unwrap(), SrgParams { v: 56, k: 10, lambda: 0, mu: 2 });
    check(5);
}

#[test]
fn bundled_table_q7() {
    check(7);
}

#[test]
fn bundled_table_q9() {
    check(9);
}

fn orbits_of(n: usize, perm: &[u32]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut o = vec![];
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            o.push(x as u32);
            x = perm[x] as usize;
        }
        o.sort_unstable();
        out.push(o);
    }
    out.sort();
    out
}

#[test]
fn label_classes_are_k_orbits() {
    for q in [3, 5] {
        let fr = SingerFrame::new(q).unwrap();
        let perm = fr.point_perm(&fr.mult_matrix(fr.omega())).unwrap();
        let orbits = orbits_of(perm.len(), &perm);
        assert_eq!(orbits, fr.k_orbits, "q={q}");
        assert!(orbits.iter().all(|o| o.len() as u32 == q * q - q + 1));
        assert_eq!(orbits.len() as u32, (q + 1) * (q + 1));
        // the omega map also permutes singular lines
        fr.line_perm(&fr.mult_matrix(fr.omega())).unwrap();
    }
}

#[test]
fn tau_preserves_bundled_sets() {
    for q in [3, 5] {
        let fr = SingerFrame::new(q).unwrap();
        let tau = tau_perm(&fr).unwrap();
        let h = pi_hemisystem(&fr, &bundled_pi(q).unwrap()).unwrap();
        let mut img: Vec<u32> = h.lines.iter().map(|&p| tau[p as usize]).collect();
        img.sort_unstable();
        assert_eq!(img, h.lines);
    }
}

#[test]
fn multiplier_shift_matches_direct_image() {
    let fr = SingerFrame::new(5).unwrap();
    let big = fr.big();
    let q = 5u64;
    let z = big.exp((q.pow(6) - 1) / (q * q - 1));
    let perm = fr.point_perm(&fr.mult_matrix(z)).unwrap();
    let shift = multiplier_shift(&fr, 1);
    let m2 = (q * q - 1) as u32;
    for (i, &j) in perm.iter().enumerate() {
        let (fa, na) = fr.labels[i];
        let (fb, nb) = fr.labels[j as usize];
        assert_eq!(fa, fb);
        assert_eq!(nb, (na + shift) % m2);
    }
}

#[test]
fn orbit_images_are_hemisystems() {
    let fr = SingerFrame::new(5).unwrap();
    let pi = bundled_pi(5).unwrap();
    let orbit = pi_orbit_closure(&fr, &pi, 1);
    assert!(orbit.len() > 1);
    for p in &orbit {
        let h = pi_hemisystem(&fr, p).unwrap();
        assert!(verify_point_hemisystem(&fr, &h.lines).passed);
    }
}

#[test]
fn pi_spec_json_and_rejects_bad_factor() {
    let pi = bundled_pi(3).unwrap();
    let s = serde_json::to_string(&pi).unwrap();
    let back: PiSpec = serde_json::from_str(&s).unwrap();
    assert_eq!(back, pi);
    let fr = SingerFrame::new(3).unwrap();
    let bad = PiSpec::from_tokens(3, &[(&["1", "1"], &["1"])]).unwrap();
    assert!(pi_hemisystem(&fr, &bad).is_err());
    assert!(pi_hemisystem(&fr, &bundled_pi(3).unwrap()).is_ok());
    assert!(bundled_pi(11).is_err());
}

#[test]
fn single_class_is_not_a_hemisystem() {
    let fr = SingerFrame::new(3).unwrap();
    let r = verify_point_hemisystem(&fr, &fr.k_orbits[0]);
    assert!(!r.passed);
}
