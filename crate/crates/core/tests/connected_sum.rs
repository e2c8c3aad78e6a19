mod common;

use common::stabilized_fixtures;
use gridhom::connected_sum::{
    class_of, classify, verify_kunneth, CompositeRoute, ConnectedSum, Coverage, Eta, EtaRule, StateClass, VerifyOptions,
};
use gridhom::homology::reduced_cone_homology;
use gridhom::state::enumerate_states;
use gridhom::{fixtures, State};
use std::collections::BTreeMap;

fn unknot_sum() -> ConnectedSum {
    let (g1, g2) = fixtures::connect_pair("unknot2", "unknot2");
    ConnectedSum::new(&g1, &g2).unwrap()
}

fn class_key(c: StateClass) -> String {
    format!("{c:?}")
}

#[test]
fn state_classes_partition_the_6x6_states() {
    let sum = unknot_sum();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for x in enumerate_states(6) {
        let (blocks, class) = classify(&sum.gsharp, &x).unwrap();
        assert_eq!(class, class_of(3, x.as_bytes()));
        assert_eq!(blocks.k(), class.k(), "{x:?}");
        assert_eq!(blocks.x12.len(), blocks.x21.len());
        *counts.entry(class_key(class)).or_default() += 1;
    }
    assert_eq!(counts.values().sum::<usize>(), 720);
    // S_0 is a product of the two summands' state sets.
    let s0: usize = ["II", "IN", "NI", "NN"].iter().map(|k| counts[*k]).sum();
    assert_eq!(s0, 36);
    assert_eq!(counts["II"], 4);
    assert_eq!(counts["NN"], 16);
    assert_eq!(sum.s0_states().len(), 36);
    assert_eq!(sum.c_states().len(), 36 + counts["AD1"]);
    assert_eq!(counts["AD1"], sum.ad_states().len());
    assert_eq!(StateClass::BC0, StateClass::II);
}

#[test]
fn split_and_join_are_inverse_on_s0() {
    let sum = unknot_sum();
    for x in sum.s0_states() {
        let (p, q) = sum.split(&x);
        assert_eq!(sum.join(&p, &q), x);
    }
}

#[test]
fn stabilized_i_and_n_sizes() {
    for s in stabilized_fixtures() {
        let states: Vec<State> = enumerate_states(s.n()).collect();
        let (i, n) = s.split_in(&states);
        let m: usize = (1..s.n()).product();
        assert_eq!(i.len(), m);
        assert_eq!(n.len(), states.len() - m);
        s.check_zero_block().unwrap();
        // e is a bijection from I onto the states of the destabilized diagram.
        let mut images: Vec<State> = i.iter().map(|x| s.e(x)).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), m);
    }
}

#[test]
fn destabilization_is_a_quasi_isomorphism() {
    for s in stabilized_fixtures() {
        let d = s.destabilize().unwrap();
        assert!(d.map.chain_map_failures(&d.source.complex, &d.target.complex).is_empty());
        assert!(d.map.inhomogeneous_generators(&d.source.complex, &d.target.complex).is_empty());
        let cone_h = reduced_cone_homology(&d.map, &d.source.complex, &d.target.complex).unwrap();
        assert!(cone_h.is_empty(), "{:?} {:?}: {cone_h:?}", s.labels.kind, s.diagram);
    }
}

#[test]
fn c_is_a_subcomplex_and_f_behaves() {
    for (l, r) in [("unknot2", "unknot2"), ("unknot3", "unknot3")] {
        let (g1, g2) = fixtures::connect_pair(l, r);
        let sum = ConnectedSum::new(&g1, &g2).unwrap();
        assert!(sum.c_closure_failures().is_empty());
        let c = sum.build_c().unwrap();
        assert!(c.complex().d_squared_failures().is_empty());
        let f = sum.f_map();
        assert!(f.f.chain_map_failures(&f.ad, &f.c0).is_empty());
        for (m, a) in f.slices(4) {
            let s = f.check_slice(m, a);
            assert!(s.injective() && s.image_matches(), "{l}#{r} {s:?}");
        }
    }
}

#[test]
fn eta_is_a_chain_map_only_with_the_corrected_rule() {
    let sum = unknot_sum();
    let c = sum.build_c().unwrap();
    let eta = Eta::new(&sum, EtaRule::Corrected).unwrap();
    let map = eta.chain_map(&c);
    assert!(map.chain_map_failures(c.complex(), &eta.target).is_empty());
    assert!(eta.streaming_failures(&sum, &c.grid.states).is_empty());
    let offset = eta.grading_offset(&c).unwrap();
    let t = gridhom::connected_sum::shifted(&eta.target, offset);
    assert!(map.inhomogeneous_generators(c.complex(), &t).is_empty());

    let literal = Eta::new(&sum, EtaRule::Literal).unwrap();
    assert!(!literal.chain_map(&c).chain_map_failures(c.complex(), &literal.target).is_empty());
}

#[test]
fn eta_agrees_with_the_composite_route_on_s0() {
    let sum = unknot_sum();
    let c = sum.build_c().unwrap();
    let eta = Eta::new(&sum, EtaRule::Corrected).unwrap();
    let route = CompositeRoute::new(&sum, &c).unwrap();
    assert!(route.c0_mismatches(&c).is_empty());
    for (g, x) in c.grid.states.iter().enumerate().skip(c.ad_len) {
        assert_eq!(route.image(g as u32), eta.image(x), "{x:?}");
    }
}

// Frozen counterexample: the quotient of the full complex by C carries
// homology at 6x6, so neither the inclusion nor eta is a quasi-isomorphism.
#[test]
fn quotient_by_c_is_not_acyclic_at_6x6() {
    let sum = unknot_sum();
    let q = sum.quotient_acyclicity_check(None, 3).unwrap();
    let total: usize = q.reduced.as_ref().unwrap().iter().map(|(_, k)| k).sum();
    assert_eq!(total, 12);
    assert!(!q.acyclic());
    assert!(!sum.inclusion_quasi_iso_check(None, 3).unwrap().acyclic());
}

#[test]
fn verify_report_at_6x6() {
    let (g1, g2) = fixtures::connect_pair("unknot2", "unknot2");
    let r = verify_kunneth(&g1, &g2, &VerifyOptions::default()).unwrap();
    assert_eq!(r.size, 6);
    let chain = ["c_closure", "f_injective", "f_image", "eta_chain_map", "eta_homogeneous", "kunneth_tensor", "tau_additive_tensor"];
    for name in chain {
        let c = r.get(name).unwrap();
        assert!(c.passed, "{name}: {}", c.detail);
    }
    assert!(r.get("kunneth_sharp").unwrap().passed);
    assert!(r.get("tau_additive_sharp").unwrap().passed);
    for name in ["quotient_acyclic", "inclusion_quasi_iso", "eta_quasi_iso", "c_homology_kunneth"] {
        assert!(!r.get(name).unwrap().passed, "{name}");
    }
}

#[test]
fn large_sums_skip_full_homology() {
    let (g1, g2) = fixtures::connect_pair("unknot3", "unknot3");
    let opts = VerifyOptions { full_max_size: 6, f_samples: Some(3), seed: 7, ..VerifyOptions::default() };
    let r = verify_kunneth(&g1, &g2, &opts).unwrap();
    assert_eq!(r.size, 8);
    assert!(matches!(r.get("quotient_acyclic").unwrap().coverage, Coverage::Skipped { .. }));
    assert!(matches!(r.get("f_image").unwrap().coverage, Coverage::Sampled { covered: 3, .. }));
    assert!(r.passed());
    // Sampling is reproducible.
    let again = verify_kunneth(&g1, &g2, &opts).unwrap();
    assert_eq!(r.get("f_image").unwrap().window, again.get("f_image").unwrap().window);
}

