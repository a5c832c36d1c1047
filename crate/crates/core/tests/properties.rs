use std::collections::BTreeSet;

use itertools::Itertools;
use proptest::prelude::*;

use hombox::boxcx::box_edge;
use hombox::cellcx::{deletion, CellComplex, ComplexBuilder, GroupAction};
use hombox::homcx::hom_complex;
use hombox::{Label, Limits, RGraph};

fn complex_from(facets: &[BTreeSet<usize>]) -> CellComplex {
    let mut b = ComplexBuilder::new();
    for f in facets {
        b.add_labeled_simplex(f.iter().map(|&v| Label::int(v)));
    }
    b.build_closure(&Limits::default()).unwrap()
}

fn facets() -> impl Strategy<Value = Vec<BTreeSet<usize>>> {
    prop::collection::vec(prop::collection::btree_set(0usize..7, 1..5), 1..6)
}

/// Random r-graph on `n` vertices from a mask over all r-subsets.
fn graph(n: usize, r: usize, mask: &[bool]) -> RGraph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<Vec<String>> = names
        .iter()
        .cloned()
        .combinations(r)
        .zip(mask.iter().cycle())
        .filter(|(_, &keep)| keep)
        .map(|(e, _)| e)
        .collect();
    RGraph::new(r, &names, &edges).unwrap()
}

fn vertex_set(k: &CellComplex, c: usize) -> BTreeSet<Label> {
    k.verts(c).iter().map(|&v| k.vertex_label(v).clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deletion_is_intersection_of_single_deletions(fs in facets(), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..4)) {
        let k = complex_from(&fs);
        let s: Vec<usize> = picks.iter().map(|i| i.index(k.len())).collect();
        let all = deletion(&k, &s).unwrap();
        let mut expected: BTreeSet<BTreeSet<Label>> = (0..k.len()).map(|c| vertex_set(&k, c)).collect();
        for &c in &s {
            let single = deletion(&k, &[c]).unwrap();
            let cells: BTreeSet<BTreeSet<Label>> = (0..single.len()).map(|d| vertex_set(&single, d)).collect();
            expected = expected.intersection(&cells).cloned().collect();
        }
        let got: BTreeSet<BTreeSet<Label>> = (0..all.len()).map(|c| vertex_set(&all, c)).collect();
        prop_assert_eq!(got, expected);
        prop_assert!(all.check_invariants().is_ok());
    }

    #[test]
    fn built_complexes_are_graded_and_closed(fs in facets()) {
        let k = complex_from(&fs);
        prop_assert!(k.check_invariants().is_ok());
        for c in 0..k.len() {
            for &f in k.faces(c) {
                prop_assert_eq!(k.dim(f) + 1, k.dim(c));
            }
        }
    }

    #[test]
    fn complete_sub_is_monotone(mask in prop::collection::vec(any::<bool>(), 20), extra in prop::collection::vec(any::<bool>(), 20)) {
        let h = graph(6, 3, &mask);
        let more: Vec<bool> = mask.iter().zip(&extra).map(|(a, b)| *a || *b).collect();
        let h2 = graph(6, 3, &more);
        let l = Limits::default();
        for sizes in [[1, 1, 1], [1, 1, 2], [1, 2, 2], [2, 2, 2]] {
            if h.contains_complete_sub(&sizes, &l).unwrap() {
                prop_assert!(h2.contains_complete_sub(&sizes, &l).unwrap());
            }
        }
        prop_assert_eq!(h.contains_complete_sub(&[1, 1, 1], &l).unwrap(), h.num_edges() > 0);
    }

    #[test]
    fn singleton_parts_generate_iff_edge(mask in prop::collection::vec(any::<bool>(), 10), a in 0usize..5, b in 0usize..5) {
        let h = graph(5, 2, &mask);
        prop_assert_eq!(h.generates_complete(&[vec![a], vec![b]]).unwrap(), h.has_edge(&[a, b]) && a != b);
        for e in h.edges() {
            prop_assert_eq!(e.len(), 2);
            prop_assert!(e[0] != e[1]);
        }
    }

    #[test]
    fn actions_preserve_faces(mask in prop::collection::vec(any::<bool>(), 10)) {
        let h = graph(5, 3, &mask);
        let l = Limits::default();
        let bx = box_edge(&h, &l).unwrap();
        let hk = hom_complex(&h, &l).unwrap();
        for (k, a) in [(&bx.complex, &bx.action), (&hk.complex, &hk.action)] {
            for g in 0..a.order() {
                for c in 0..k.len() {
                    let gc = a.act(g, c);
                    prop_assert_eq!(k.dim(gc), k.dim(c));
                    for &f in k.faces(c) {
                        prop_assert!(k.faces(gc).contains(&a.act(g, f)));
                    }
                    for h2 in 0..a.order() {
                        prop_assert_eq!(a.act(a.product(g, h2), c), a.act(h2, gc));
                    }
                }
            }
        }
        // every multihom generates a complete sub-r-graph with disjoint parts
        for c in 0..hk.len() {
            let f = hk.multihom(c);
            prop_assert!(h.generates_complete(f.parts()).unwrap());
        }
        // p∘i is the identity and F ⊆ i(p(F))
        for c in 0..hk.len() {
            let i = bx.map_i(hk.multihom(c)).unwrap();
            prop_assert_eq!(&bx.map_p(i), hk.multihom(c));
        }
        for c in 0..bx.len() {
            prop_assert!(bx.complex.is_face(c, bx.ip(c)));
        }
    }
}

#[test]
fn one_edge_multipartite_is_the_single_edge_graph() {
    for r in 1..=4 {
        let a = RGraph::complete_multipartite(&vec![1; r]).unwrap();
        let b = RGraph::complete(r, r).unwrap();
        assert_eq!(a.num_edges(), 1);
        assert_eq!(b.num_edges(), 1);
        assert_eq!(a.num_vertices(), b.num_vertices());
        assert_eq!(a.edges()[0].len(), r);
    }
}

#[test]
fn trivial_action_on_built_complex() {
    let k = complex_from(&[BTreeSet::from([0, 1, 2])]);
    let a = GroupAction::trivial(&k);
    assert!(a.is_free());
    assert_eq!(a.orbit_representatives().len(), k.len());
}
