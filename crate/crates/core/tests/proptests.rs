mod common;

use common::{dense_rank, oracle_alexander, oracle_maslov};
use gridhom::algebra::{sparse_rank, BigradedUModule, Torsion};
use gridhom::complex::grid_boundary;
use gridhom::homology::{module_structure_auto, Window};
use gridhom::legendrian::{canonical_state, Corner};
use gridhom::state::Gradings;
use gridhom::{Bigrading, F2Matrix, GridComplex, GridDiagram, ModuleElement, Monomial, State, Term};
use proptest::prelude::*;

fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn knot(max_n: usize) -> impl Strategy<Value = GridDiagram> {
    (2..=max_n)
        .prop_flat_map(|n| (perm(n), perm(n)))
        .prop_filter_map("not a knot diagram", |(o, x)| GridDiagram::new(o, x).ok())
}

fn knot_and_state(max_n: usize) -> impl Strategy<Value = (GridDiagram, State)> {
    knot(max_n).prop_flat_map(|d| {
        let n = d.n();
        (Just(d), perm(n).prop_map(|p| State::new(&p).unwrap()))
    })
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec((0u8..6, 1u16..4), 0..4).prop_map(|p| Monomial::from_pairs(p.into_iter().map(|(v, e)| (v as _, e))))
}

fn element() -> impl Strategy<Value = ModuleElement> {
    prop::collection::vec((monomial(), 0u32..5), 0..6)
        .prop_map(|ts| ModuleElement::from_terms(ts.into_iter().map(|(m, g)| Term::new(m, g)).collect()))
}

fn bigrading() -> impl Strategy<Value = Bigrading> {
    (-4i32..4, -3i32..3).prop_map(|(m, a)| Bigrading::new(m, a))
}

fn module() -> impl Strategy<Value = BigradedUModule> {
    (bigrading(), prop::collection::vec((bigrading(), 1u32..4), 0..3))
        .prop_map(|(t, tor)| BigradedUModule::new(vec![t], tor.into_iter().map(|(at, order)| Torsion { at, order }).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gradings_match_oracle((d, x) in knot_and_state(7)) {
        let g = Gradings::new(&d);
        prop_assert_eq!(g.maslov(&x), oracle_maslov(&d, &x));
        prop_assert_eq!(g.alexander(&x).unwrap(), oracle_alexander(&d, &x));
    }

    #[test]
    fn boundary_terms_drop_maslov_by_one((d, x) in knot_and_state(7)) {
        let g = Gradings::new(&d);
        let bx = g.bigrading(&x).unwrap();
        for (m, y) in grid_boundary(&d, &x) {
            let k = m.degree() as i32;
            prop_assert_eq!(g.bigrading(&y).unwrap() + Bigrading::new(-2 * k, -k), bx + Bigrading::new(-1, 0));
        }
    }

    #[test]
    fn d_squared_vanishes(d in knot(5)) {
        let gc = GridComplex::build(&d).unwrap();
        prop_assert!(gc.complex.d_squared_failures().is_empty());
    }

    #[test]
    fn canonical_states_are_cycles(d in knot(7)) {
        for which in Corner::BOTH {
            prop_assert!(grid_boundary(&d, &canonical_state(&d, which).state).is_empty());
        }
    }

    #[test]
    fn homology_survives_translation(d in knot(4), dx in 0usize..4, dy in 0usize..4) {
        let a = module_structure_auto(&GridComplex::build(&d).unwrap().complex).unwrap().module;
        let b = module_structure_auto(&GridComplex::build(&d.translate(dx, dy)).unwrap().complex).unwrap().module;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn text_round_trip(d in knot(8)) {
        prop_assert_eq!(GridDiagram::parse_text(&d.render_text()).unwrap(), d.clone());
        prop_assert_eq!(GridDiagram::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn addition_is_characteristic_two(a in element(), b in element()) {
        prop_assert!(a.add(&a).is_zero());
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&b), a);
    }

    #[test]
    fn scaling_distributes(a in element(), b in element(), m in monomial(), k in monomial()) {
        prop_assert_eq!(a.add(&b).scale(&m), a.scale(&m).add(&b.scale(&m)));
        prop_assert_eq!(a.scale(&m).scale(&k), a.scale(&m.mul(&k)));
    }

    #[test]
    fn monomial_division_inverts_product(m in monomial(), k in monomial()) {
        let p = m.mul(&k);
        prop_assert_eq!(p.degree(), m.degree() + k.degree());
        prop_assert_eq!(p.checked_div(&k), Some(m));
    }

    #[test]
    fn tensor_and_tor_is_symmetric(a in module(), b in module()) {
        prop_assert_eq!(a.tensor_and_tor(&b).unwrap(), b.tensor_and_tor(&a).unwrap());
    }

    #[test]
    fn tensor_with_the_free_module_shifts(a in module(), t in bigrading()) {
        let free = BigradedUModule::new(vec![t], vec![]);
        let got = a.tensor_and_tor(&free).unwrap();
        let want = BigradedUModule::new(
            a.towers.iter().map(|&g| g + t).collect(),
            a.torsion.iter().map(|s| Torsion { at: s.at + t, order: s.order }).collect(),
        );
        prop_assert_eq!(got, want);
    }

    #[test]
    fn ranks_agree(rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 9), 0..12)) {
        let dense: Vec<Vec<u8>> = rows.iter().map(|r| r.iter().map(|&b| b as u8).collect()).collect();
        let want = dense_rank(rows.clone());
        prop_assert_eq!(F2Matrix::from_rows(&dense).rank(), want);
        let sparse = rows.iter().map(|r| r.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u32).collect());
        prop_assert_eq!(sparse_rank(9, sparse), want);
    }

    #[test]
    fn window_round_trip(m in -9i32..9, dm in 0i32..6, a in -9i32..9, da in 0i32..6) {
        let w = Window { m_lo: m, m_hi: m + dm, a_lo: a, a_hi: a + da };
        prop_assert_eq!(w.to_string().parse::<Window>().unwrap(), w);
    }
}
