//! Brute-force oracles for the filter machinery: the principal-filter
//! shortcut is validated against a full subset scan, and the
//! cross-module theorems run on randomised diagonal fixtures.

use cqv_core::lattice::{cone, enumerate_filters, enumerate_quasipoints, Filter, FiniteLattice};
use cqv_core::linops::{normal_spectral_decomposition, ComplexMatrix, Projector, C64};
use cqv_core::observable::{antonymous_function, observable_function, ProjectionLattice};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Every subset of lattice elements that happens to be a proper,
/// meet-closed, upward-closed set.
fn brute_force_filters(l: &FiniteLattice) -> Vec<u64> {
    let n = l.len();
    assert!(n <= 16, "oracle is exponential in the element count");
    let mut out = Vec::new();
    for subset in 1u64..(1 << n) {
        if Filter::from_members(l, subset).is_ok() {
            out.push(subset);
        }
    }
    out
}

#[test]
fn principal_enumeration_matches_subset_scan() {
    let m4 = {
        let mut names = BTreeMap::new();
        names.insert(0b0011u64, "P1".to_string());
        names.insert(0b1100u64, "P2".to_string());
        names.insert(0b0101u64, "Q1".to_string());
        names.insert(0b1010u64, "Q2".to_string());
        FiniteLattice::from_masks(4, vec![0b0011, 0b1100, 0b0101, 0b1010], names).unwrap()
    };
    for l in [
        FiniteLattice::boolean(2).unwrap(),
        FiniteLattice::boolean(3).unwrap(),
        FiniteLattice::boolean(4).unwrap(),
        m4,
    ] {
        let principal: Vec<u64> = {
            let mut v: Vec<u64> = enumerate_filters(&l)
                .unwrap()
                .iter()
                .map(|f| f.members())
                .collect();
            v.sort_unstable();
            v
        };
        assert_eq!(principal, brute_force_filters(&l));
        // Quasipoints are exactly the maximal members of the scan: no
        // other filter's member set strictly contains them.
        let quasi: Vec<u64> = enumerate_quasipoints(&l)
            .unwrap()
            .iter()
            .map(|f| f.members())
            .collect();
        for &f in &principal {
            let maximal = principal.iter().all(|&g| g == f || (g & f) != f);
            assert_eq!(quasi.contains(&f), maximal, "filter {f:#b}");
        }
    }
}

#[test]
fn cones_are_upper_sets_of_embedded_filters() {
    let big = FiniteLattice::boolean(4).unwrap();
    let blockings: Vec<Vec<u64>> = vec![
        vec![0b0011, 0b1100],
        vec![0b0001, 0b1110],
        vec![0b0111, 0b1000],
    ];
    for masks in blockings {
        let small = FiniteLattice::from_masks(4, masks, BTreeMap::new()).unwrap();
        for f in enumerate_filters(&small).unwrap() {
            let coned = cone(&f, &small, &big).unwrap();
            coned.validate(&big).unwrap();
            // Smallest filter containing the image: every member of
            // the cone dominates some embedded member.
            for j in 0..big.len() {
                if coned.contains(j) {
                    let dominated = (0..small.len())
                        .any(|i| f.contains(i) && small.mask(i) & !big.mask(j) == 0);
                    assert!(dominated);
                }
            }
            // And it contains the image itself.
            for i in 0..small.len() {
                if f.contains(i) {
                    assert!(coned.contains(big.index_of(small.mask(i)).unwrap()));
                }
            }
        }
    }
}

#[test]
fn observable_and_antonymous_sum_theorems_randomised() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for trial in 0..30 {
        let n = 2 + trial % 3;
        let cvals: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
        let dvals: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
        let atoms: Vec<Projector> = (0..n)
            .map(|i| {
                let mut mask = vec![false; n];
                mask[i] = true;
                Projector::from_diag_mask(n, &mask)
            })
            .collect();
        let pl = ProjectionLattice::boolean_over(&atoms).unwrap();
        let fam_of = |vals: &[f64]| {
            let m = ComplexMatrix::diag(&vals.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
            let (_, fam) = normal_spectral_decomposition(&m, 1e-10).unwrap();
            pl.family_of(&fam, 1e-9).unwrap()
        };
        let sums: Vec<f64> = cvals.iter().zip(&dvals).map(|(a, b)| a + b).collect();
        let (fc, fd, fs) = (fam_of(&cvals), fam_of(&dvals), fam_of(&sums));
        for q in enumerate_quasipoints(pl.lattice()).unwrap() {
            let a = observable_function(&fc, pl.lattice(), &q).unwrap();
            let b = observable_function(&fd, pl.lattice(), &q).unwrap();
            let s = observable_function(&fs, pl.lattice(), &q).unwrap();
            assert!((s - (a + b)).norm() <= 1e-9, "trial {trial}");
            // Antonymous duality with the negated fixture.
            let g = antonymous_function(&fc, pl.lattice(), &q).unwrap();
            let neg: Vec<f64> = cvals.iter().map(|x| -x).collect();
            let fneg = fam_of(&neg);
            let dual = -observable_function(&fneg, pl.lattice(), &q).unwrap();
            assert!((g - dual).norm() <= 1e-9, "trial {trial}");
        }
    }
}

#[test]
fn stone_pairing_counts_on_generated_posets() {
    use cqv_core::context::{Context, ContextPoset};
    use cqv_core::observable::stone_homeomorphism;
    for k in 2..=4usize {
        let atoms: Vec<Projector> = (0..k)
            .map(|i| {
                let mut mask = vec![false; k];
                mask[i] = true;
                Projector::from_diag_mask(k, &mask)
            })
            .collect();
        let seed = Context::from_atoms(format!("d{k}"), atoms, 1e-12).unwrap();
        let poset = ContextPoset::generate(&seed, 1e-12).unwrap();
        for i in 0..poset.len() {
            let ctx = poset.context(i);
            let pairs = stone_homeomorphism(ctx, 1e-9).unwrap();
            assert_eq!(pairs.len(), ctx.atoms().len());
        }
    }
}
