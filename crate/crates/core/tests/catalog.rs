use std::collections::BTreeMap;

use hexad_core::catalog::{self, best_biplane_with_ovals, named_group, HexadTag};
use hexad_core::design::verify_twbd;
use hexad_core::km::{search_designs, SearchConfig};
use hexad_core::subset::binom;
use hexad_core::{are_isomorphic, automorphism_group, canonical_certificate, classify, PermGroup, SetSystem};

fn preserves(g: &PermGroup, s: &SetSystem) -> bool {
    let norm = |b: &[u32]| {
        let mut b = b.to_vec();
        b.sort_unstable();
        b
    };
    let mut blocks: Vec<Vec<u32>> = s.blocks().iter().map(|b| norm(b)).collect();
    blocks.sort();
    g.generators().iter().all(|p| {
        let mut img: Vec<Vec<u32>> = s.blocks().iter().map(|b| norm(&p.apply_to_subset(b).unwrap())).collect();
        img.sort();
        img == blocks
    })
}

#[test]
fn every_entry_is_a_homogeneous_design() {
    for id in catalog::list() {
        let e = catalog::get(id).unwrap();
        let d = e.materialize().unwrap();
        let report = verify_twbd(&d, 3, &[4, 6], 1);
        assert!(report.holds, "{id}: {report:?}");
        let hexads = d.hexads();
        let tetrads = d.tetrads();
        assert_eq!(hexads.len(), e.v, "{id}");
        // Each tetrad covers 4 triples and each hexad 20.
        assert_eq!(4 * tetrads.len() as u64 + 20 * e.v as u64, binom(e.v as u64, 3), "{id}");
        assert!(hexads.is_tactical() && tetrads.is_tactical(), "{id}");
        assert!(e.group.is_transitive(), "{id}");
    }
}

#[test]
fn tetrad_counts_by_degree() {
    let expect = BTreeMap::from([(16, 60), (20, 185), (22, 275), (26, 520), (28, 679)]);
    for id in catalog::list() {
        let e = catalog::get(id).unwrap();
        assert_eq!(e.materialize().unwrap().tetrads().len(), expect[&e.v], "{id}");
    }
}

#[test]
fn verify_all_passes() {
    let reports = catalog::verify_all();
    assert_eq!(reports.len(), 33);
    for r in &reports {
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn full_groups_are_transitive() {
    for id in catalog::list() {
        let d = catalog::materialize(id).unwrap();
        let (g, order) = automorphism_group(&d).unwrap();
        assert!(g.is_transitive(), "{id}");
        assert!(preserves(&g, &d), "{id}");
        assert_eq!(order % d.v() as u64, 0, "{id}");
    }
}

#[test]
fn same_degree_entries_are_pairwise_non_isomorphic() {
    let mut by_v: BTreeMap<usize, Vec<(&str, Vec<u8>)>> = BTreeMap::new();
    for id in catalog::list() {
        let d = catalog::materialize(id).unwrap();
        by_v.entry(d.v()).or_default().push((id, canonical_certificate(&d).as_bytes().to_vec()));
    }
    for (v, entries) in by_v {
        for (i, (a, ca)) in entries.iter().enumerate() {
            for (b, cb) in &entries[i + 1..] {
                assert_ne!(ca, cb, "v={v}: {a} and {b} share a certificate");
            }
        }
    }
}

#[test]
fn flat_listing_is_the_sixteen_point_design() {
    let flat = best_biplane_with_ovals();
    assert!(verify_twbd(&flat, 3, &[4, 6], 1).holds);
    assert_eq!(flat.size_distribution(), BTreeMap::from([(4, 60), (6, 16)]));
    assert!(are_isomorphic(&flat, &catalog::materialize("D16_1").unwrap()));
    assert!(classify(&flat.hexads()).is_biplane);
}

/// The printed full-group generators act on a relabeled copy of D16_1:
/// the group they generate has the right order and admits exactly one
/// design, isomorphic to D16_1.
#[test]
fn sixteen_point_full_group() {
    let d = catalog::materialize("D16_1").unwrap();
    let full = named_group("d16_full").unwrap();
    assert_eq!(full.order().unwrap(), 11520);
    assert!(!preserves(&full, &d));
    let (found, _) = search_designs(&full, SearchConfig::default()).unwrap();
    assert_eq!(found.len(), 1);
    assert!(are_isomorphic(&found[0].design, &d));
}

#[test]
fn gamma_extends_f8_on_the_last_pair() {
    let g = named_group("f8").unwrap().join(&named_group("f8_gamma").unwrap()).unwrap();
    assert_eq!(g.order().unwrap(), 168);
    for id in ["D28_13", "D28_14"] {
        assert!(preserves(&g, &catalog::materialize(id).unwrap()), "{id}");
    }
    for id in ["D28_11", "D28_12"] {
        assert!(!preserves(&g, &catalog::materialize(id).unwrap()), "{id}");
    }
}

/// Same for the order-110 group on 22 points: it does not fix D22_3 as
/// listed, but every design it admits is isomorphic to D22_3.
#[test]
fn f11_designs_are_d22_3() {
    let g = catalog::f11_group();
    assert_eq!(g.order().unwrap(), 110);
    let d = catalog::materialize("D22_3").unwrap();
    let (found, _) = search_designs(&g, SearchConfig::default()).unwrap();
    assert!(!found.is_empty());
    for f in &found {
        assert!(are_isomorphic(&f.design, &d));
    }
    for id in ["D22_1", "D22_2"] {
        let other = catalog::materialize(id).unwrap();
        assert!(found.iter().all(|f| !are_isomorphic(&f.design, &other)), "{id}");
    }
}

#[test]
fn corrupted_block_is_reported_with_a_witness() {
    let d = catalog::materialize("D20_1").unwrap();
    let mut blocks = d.blocks().to_vec();
    let i = blocks.iter().position(|b| b.len() == 4).unwrap();
    let x = (0..20).find(|x| !blocks[i].contains(x)).unwrap();
    blocks[i][3] = x;
    let bad = SetSystem::new(20, blocks).unwrap();
    let report = verify_twbd(&bad, 3, &[4, 6], 1);
    assert!(!report.holds);
    let (triple, count) = report.witness.expect("witness triple");
    assert_eq!(triple.len(), 3);
    assert_ne!(count, 1);
}

#[test]
fn hexad_tags_match_classification() {
    for id in catalog::list() {
        let e = catalog::get(id).unwrap();
        let c = classify(&e.materialize().unwrap().hexads());
        assert!(e.hexads.matches(&c), "{id}: {} vs {}", e.hexads, c.label());
        assert_eq!(e.hexads == HexadTag::NotTwoClass, c.two_class.is_none(), "{id}");
    }
}

#[test]
fn unknown_ids_are_errors() {
    assert!(catalog::get("D99_1").is_err());
    assert!(named_group("nope").is_err());
}
