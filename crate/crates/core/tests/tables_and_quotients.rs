//! Sweeps over every table produced for the catalog groups, and epimorphism
//! counts onto cyclic groups against the abelianization.

use grpkit::coset_enum::enumerate;
use grpkit::intlinalg::abelian_invariants;
use grpkit::low_index::low_index_subgroups;
use grpkit::quotients::{count_epimorphisms, count_homomorphisms, Target};
use grpkit::rewrite::{reidemeister_schreier_full, schreier_generators};
use grpkit::{catalog, parse_presentation, CatalogKey, EnumerationLimits};
use num_bigint::BigUint;

const SWEEP: [(CatalogKey, usize); 8] = [
    (CatalogKey::Gamma, 12),
    (CatalogKey::Gamma0, 8),
    (CatalogKey::Lambda0, 8),
    (CatalogKey::Lambda1, 8),
    (CatalogKey::Lambda2, 8),
    (CatalogKey::GammaW, 12),
    (CatalogKey::GammaXC2, 7),
    (CatalogKey::Gamma0XC2, 8),
];

#[test]
fn every_table_closes() {
    for (key, n) in SWEEP {
        let p = catalog(key);
        for rec in low_index_subgroups(p, 1, n).unwrap() {
            let t = &rec.representative;
            assert!(t.relators_close(p), "{key} index {}", rec.index);
            assert!(t.is_standard());
            assert!(t.subgroup_closes());
            assert_eq!(rec.index % rec.class_size, 0);
            for w in schreier_generators(t) {
                assert_eq!(t.trace(0, &w), 0);
            }
            // Re-enumerating the subgroup from its Schreier generators gives
            // the same index.
            let again = enumerate(p, &rec.generators_as_words, EnumerationLimits::default()).unwrap();
            assert_eq!(again.n_cosets(), rec.index, "{key}");
            let rw = reidemeister_schreier_full(p, t);
            let k = p.n_generators() as i64;
            let r = p.relators().len() as i64;
            let n = rec.index as i64;
            assert_eq!(
                1 - rw.generator_words.len() as i64 + rw.raw_relator_count as i64,
                n * (1 - k + r)
            );
        }
    }
}

/// Surjections onto Z/q for prime q: q^r - 1 where r counts invariants
/// divisible by q, free factors included.
fn cyclic_epis(key: CatalogKey, q: u64) -> u64 {
    let inv = abelian_invariants(catalog(key));
    let qb = BigUint::from(q);
    let r = inv.free_rank + inv.torsion.iter().filter(|t| (*t % &qb) == BigUint::from(0u32)).count();
    q.pow(r as u32) - 1
}

#[test]
fn abelian_targets_follow_invariants() {
    for key in [
        CatalogKey::Gamma,
        CatalogKey::Gamma0,
        CatalogKey::Lambda0,
        CatalogKey::Lambda1,
        CatalogKey::Lambda2,
        CatalogKey::GammaW,
    ] {
        for (t, q) in [(Target::Z2, 2), (Target::Z3, 3), (Target::Z5, 5)] {
            let e = count_epimorphisms(catalog(key), &t.group(), None).unwrap();
            assert_eq!(e.total, cyclic_epis(key, q), "{key} onto {t}");
            assert_eq!(e.total % e.aut_order, 0);
            assert_eq!(count_homomorphisms(catalog(key), &t.group()).unwrap(), e.total + 1);
        }
    }
}

#[test]
fn epi_counts_are_divisible() {
    for key in [CatalogKey::Gamma, CatalogKey::Gamma0, CatalogKey::Lambda1] {
        for t in [Target::A4, Target::S3] {
            let e = count_epimorphisms(catalog(key), &t.group(), None).unwrap();
            assert_eq!(e.classes * e.aut_order, e.total);
        }
    }
    let free = parse_presentation("group<a,b | >").unwrap();
    // Generating pairs of S3: 18 of the 36 pairs, three orbits under Aut(S3).
    let e = count_epimorphisms(&free, &Target::S3.group(), None).unwrap();
    assert_eq!((e.total, e.classes), (18, 3));
}
