use gridhom::complex::grid_boundary;
use gridhom::fixtures;
use gridhom::homology::ClassLocation;
use gridhom::legendrian::{additivity_check, canonical_state, lambdas, theta, Corner};
use gridhom::Bigrading;

struct Frozen {
    name: &'static str,
    plus: (&'static [u8], (i32, i32), u32),
    minus: (&'static [u8], (i32, i32), u32),
}

const FROZEN: [Frozen; 6] = [
    Frozen { name: "unknot2", plus: (&[1, 0], (0, 0), 0), minus: (&[1, 0], (0, 0), 0) },
    Frozen { name: "unknot3", plus: (&[1, 0, 2], (0, 0), 0), minus: (&[2, 1, 0], (-2, -1), 1) },
    Frozen { name: "unknot4", plus: (&[1, 0, 3, 2], (-2, -1), 1), minus: (&[3, 2, 1, 0], (-2, -1), 1) },
    Frozen { name: "unknot5", plus: (&[1, 0, 3, 4, 2], (-2, -1), 1), minus: (&[4, 2, 3, 1, 0], (-2, -1), 1) },
    Frozen { name: "trefoil_right", plus: (&[1, 0, 4, 3, 2], (-6, -3), 2), minus: (&[4, 3, 2, 1, 0], (-4, -2), 1) },
    Frozen { name: "trefoil_left", plus: (&[4, 0, 1, 2, 3], (2, 1), 0), minus: (&[4, 0, 1, 2, 3], (2, 1), 0) },
];

#[test]
fn canonical_states_are_cycles() {
    for (name, d) in fixtures::all() {
        for which in Corner::BOTH {
            let x = canonical_state(&d, which).state;
            assert!(grid_boundary(&d, &x).is_empty(), "{name} x{which}");
        }
    }
}

#[test]
fn lambda_classes_are_frozen() {
    for f in &FROZEN {
        let [p, m] = lambdas(&fixtures::diagram(f.name)).unwrap();
        for (got, (state, (gm, ga), power)) in [(&p, f.plus), (&m, f.minus)] {
            assert_eq!(got.state, state, "{} {}", f.name, got.which);
            assert_eq!(got.bigrading, Bigrading::new(gm, ga), "{} {}", f.name, got.which);
            assert_eq!(got.location, ClassLocation::NonTorsion { power }, "{} {}", f.name, got.which);
        }
    }
}

#[test]
fn theta_is_lambda_plus() {
    let d = fixtures::diagram("trefoil_right");
    let t = theta(&d).unwrap();
    assert_eq!(t.which, Corner::Plus);
    assert_eq!(t.state, FROZEN[4].plus.0);
}

#[test]
fn additivity_holds_at_6x6() {
    let (g1, g2) = fixtures::connect_pair("unknot2", "unknot2");
    let r = additivity_check(&g1, &g2, 6).unwrap();
    assert_eq!(r.size, 6);
    assert!(r.chain.iter().all(|c| c.holds && c.is_cycle));
    let h = r.homology.as_ref().unwrap();
    assert_eq!(h.len(), 2);
    assert!(h.iter().all(|c| c.holds), "{h:?}");
    assert!(r.passed());
}

#[test]
fn chain_identity_on_larger_sums() {
    for (l, r) in [("unknot3", "unknot3"), ("unknot4", "unknot4"), ("unknot5", "trefoil_right"), ("trefoil_left", "trefoil_right")] {
        let (g1, g2) = fixtures::connect_pair(l, r);
        let rep = additivity_check(&g1, &g2, 0).unwrap();
        assert!(rep.homology.is_none() && rep.scale.is_some());
        assert!(rep.passed(), "{l}#{r}: {:?}", rep.chain);
    }
}
