//! An H1 instance on the pseudo-sphere whose Hodge-Tate spectral sequence
//! does not degenerate. Over a height-2 poset the mod-xi splitting of
//! `eta_{m+1}` can fail, and torsion appears in `H^3(RΓ eta_m K)`.

use decalage_core::generate::{generate_instance, GenConfig, Profile};
use decalage_core::site::PosetSite;
use decalage_core::spectral::{compare_degeneration, degeneration_check_hdr, degeneration_check_ht, h1_witness};
use decalage_core::theorem::{check_torsionfree_eta_m, verify_main_theorem};
use decalage_core::Integers;

#[test]
fn h1_does_not_force_hodge_tate_degeneration() {
    let z = Integers::new(2).unwrap();
    let cfg = GenConfig {
        budget: 300,
        ..GenConfig::default()
    };
    let k = generate_instance(&z, &PosetSite::pseudo_sphere(), Profile::Adversarial, 1, &cfg).unwrap();
    assert_eq!(h1_witness(&k), None);

    let ht = degeneration_check_ht(&k).unwrap();
    assert!(!ht.degenerates);
    assert_eq!(ht.witness, Some([3, 1]));
    assert!(degeneration_check_hdr(&k).unwrap().degenerates);

    let table = check_torsionfree_eta_m(&k).unwrap();
    let torsion: Vec<(i64, i64)> = table.iter().filter(|e| !e.torsion_free).map(|e| (e.i, e.m)).collect();
    assert_eq!(torsion, vec![(3, 0), (3, 1)]);
    for e in table.iter().filter(|e| !e.torsion_free) {
        assert!(e.module.ends_with("R/(2)"), "{}", e.module);
    }
    let not_onto: Vec<(i64, i64)> = table.iter().filter(|e| !e.reduction_surjective).map(|e| (e.i, e.m)).collect();
    assert_eq!(not_onto, vec![(2, 0), (2, 1)]);

    let cmp = compare_degeneration(&k, 2, 2).unwrap();
    assert!(!cmp.equal);

    // the theorem is not asserted: H3 fails
    let report = verify_main_theorem(&k).unwrap();
    assert!(report.h1 && !report.h3 && !report.asserted);
}
