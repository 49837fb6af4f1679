//! The rank order on the complex plane and the spectral order on
//! normal operators.
//!
//! A complex number is ranked by `Re + Im`; two values of equal rank
//! are equivalent but need not be equal, so this is a total preorder.
//! Infima and suprema of finite sets pick a canonical representative:
//! minimal (maximal) rank, ties broken on the real part, then the
//! imaginary part.

use crate::linops::{SpectralData, TwoParamSpectralFamily, C64};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OrderError {
    #[error("empty set has no infimum or supremum")]
    EmptySet,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// `Re(z) + Im(z)` — the quantity the preorder compares.
pub fn rank(z: C64) -> f64 {
    z.re + z.im
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Less,
    Equivalent,
    Greater,
}

/// Value together with its rank; comparisons only look at the rank.
#[derive(Debug, Clone, Copy)]
pub struct ComplexRanked {
    pub value: C64,
    pub rank: f64,
}

impl ComplexRanked {
    pub fn new(value: C64) -> Self {
        ComplexRanked {
            value,
            rank: rank(value),
        }
    }
}

pub fn cmp_complex(a: C64, b: C64) -> Verdict {
    let (ra, rb) = (rank(a), rank(b));
    if ra < rb {
        Verdict::Less
    } else if ra > rb {
        Verdict::Greater
    } else {
        Verdict::Equivalent
    }
}

fn inf_key(z: &C64) -> (f64, f64, f64) {
    (rank(*z), z.re, z.im)
}

/// Rank-minimal element; rank ties broken on smallest real part, then
/// smallest imaginary part.
pub fn inf_complex<I: IntoIterator<Item = C64>>(set: I) -> Result<C64, OrderError> {
    set.into_iter()
        .min_by(|a, b| inf_key(a).partial_cmp(&inf_key(b)).unwrap())
        .ok_or(OrderError::EmptySet)
}

/// Rank-maximal element; the dual tie-break (largest real part, then
/// largest imaginary part), so that `sup S = -inf(-S)` holds exactly.
pub fn sup_complex<I: IntoIterator<Item = C64>>(set: I) -> Result<C64, OrderError> {
    set.into_iter()
        .max_by(|a, b| inf_key(a).partial_cmp(&inf_key(b)).unwrap())
        .ok_or(OrderError::EmptySet)
}

/// Spectral order `A ≤_s B`, decided by comparing the two-parameter
/// families on the merged cut grid: true iff the family of `B` is below
/// the family of `A` at every grid point (range inclusion `Q ≤ P`
/// tested as `‖PQ − Q‖_F ≤ tol`). Families are piecewise constant, so
/// grid points suffice.
pub fn spectral_order_leq(
    a: &SpectralData,
    b: &SpectralData,
    tol: f64,
) -> Result<bool, OrderError> {
    if a.dim() != b.dim() {
        return Err(OrderError::DimensionMismatch(a.dim(), b.dim()));
    }
    let gap = crate::linops::eigengap(a.frobenius_norm().max(b.frobenius_norm()));
    let fam_a = TwoParamSpectralFamily::from_joint(a, gap).expect("valid spectral data");
    let fam_b = TwoParamSpectralFamily::from_joint(b, gap).expect("valid spectral data");
    let mut eps_grid = fam_a.real_cuts();
    eps_grid.extend(fam_b.real_cuts());
    eps_grid.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut eta_grid = fam_a.imag_cuts();
    eta_grid.extend(fam_b.imag_cuts());
    eta_grid.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for &eps in &eps_grid {
        for &eta in &eta_grid {
            let pa = fam_a.evaluate(eps, eta);
            let pb = fam_b.evaluate(eps, eta);
            if !pb.leq(&pa, tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::{normal_spectral_decomposition, ComplexMatrix, Projector};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rank_ties_are_equivalent() {
        assert_eq!(cmp_complex(c(1.0, 2.0), c(2.0, 1.0)), Verdict::Equivalent);
        assert_eq!(cmp_complex(c(0.0, 0.0), c(1.0, 0.0)), Verdict::Less);
        assert_eq!(cmp_complex(c(0.0, -1.0), c(1.0, 0.0)), Verdict::Less);
    }

    #[test]
    fn inf_examples() {
        assert_eq!(
            inf_complex([c(1.0, 0.0), c(0.0, -1.0)]).unwrap(),
            c(0.0, -1.0)
        );
        // Rank tie broken on the real part.
        assert_eq!(
            inf_complex([c(1.0, 2.0), c(2.0, 1.0)]).unwrap(),
            c(1.0, 2.0)
        );
        assert_eq!(
            inf_complex([c(3.0, 0.0), c(1.0, 1.0), c(2.0, -1.0)]).unwrap(),
            c(2.0, -1.0)
        );
        assert!(inf_complex(std::iter::empty()).is_err());
    }

    #[test]
    fn sup_is_dual_to_inf() {
        let set = [c(1.0, 2.0), c(2.0, 1.0), c(0.0, 0.0), c(-1.0, 4.0)];
        let sup = sup_complex(set).unwrap();
        let dual = -inf_complex(set.iter().map(|z| -z)).unwrap();
        assert_eq!(sup, dual);
    }

    fn o_z() -> ComplexMatrix {
        ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, -1.0)])
    }

    #[test]
    fn o_z_below_its_square() {
        let (oz, _) = normal_spectral_decomposition(&o_z(), 1e-12).unwrap();
        let (id, _) = normal_spectral_decomposition(&ComplexMatrix::identity(2), 1e-12).unwrap();
        assert!(spectral_order_leq(&oz, &id, 1e-10).unwrap());
        assert!(!spectral_order_leq(&id, &oz, 1e-10).unwrap());
    }

    #[test]
    fn spectral_order_reflexive_and_zero_leq_identity() {
        let (oz, _) = normal_spectral_decomposition(&o_z(), 1e-12).unwrap();
        assert!(spectral_order_leq(&oz, &oz, 1e-10).unwrap());
        let zero =
            SpectralData::from_pairs(vec![(c(0.0, 0.0), Projector::identity(2))], 1e-12).unwrap();
        let (id, _) = normal_spectral_decomposition(&ComplexMatrix::identity(2), 1e-12).unwrap();
        assert!(spectral_order_leq(&zero, &id, 1e-10).unwrap());
    }

    fn diag_normal(vals: &[C64]) -> SpectralData {
        let (sd, _) = normal_spectral_decomposition(&ComplexMatrix::diag(vals), 1e-12).unwrap();
        sd
    }

    /// Diagonal fixture oracle: A ≤_s B iff every diagonal slot of A is
    /// componentwise ≤ that of B (shared eigenbasis).
    fn diag_leq_oracle(a: &[C64], b: &[C64]) -> bool {
        a.iter()
            .zip(b)
            .all(|(x, y)| x.re <= y.re + 1e-12 && x.im <= y.im + 1e-12)
    }

    #[test]
    fn spectral_order_matches_diagonal_oracle() {
        let slots = [
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(0.0, 1.0),
            c(1.0, 1.0),
            c(2.0, -1.0),
        ];
        let mut fixtures = Vec::new();
        for i in 0..slots.len() {
            for j in 0..slots.len() {
                if i != j {
                    fixtures.push(vec![slots[i], slots[j]]);
                }
            }
        }
        for a in &fixtures {
            for b in &fixtures {
                let lhs = spectral_order_leq(&diag_normal(a), &diag_normal(b), 1e-10).unwrap();
                assert_eq!(lhs, diag_leq_oracle(a, b), "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn spectral_order_is_partial_order_on_diagonals() {
        let sets: Vec<Vec<C64>> = vec![
            vec![c(0.0, 0.0), c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.5, 0.0), c(1.0, 2.0), c(2.0, 0.0)],
            vec![c(0.0, 0.5), c(2.0, 2.0), c(3.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 1.0), c(2.0, 0.0), c(3.0, -1.0)],
            vec![c(0.5, 0.5), c(1.0, 2.0), c(2.0, 1.0), c(4.0, 0.0)],
            vec![c(0.0, 1.0), c(2.0, 2.0), c(3.0, 0.0), c(4.0, 0.5)],
        ];
        let data: Vec<SpectralData> = sets.iter().map(|s| diag_normal(s)).collect();
        for x in &data {
            assert!(spectral_order_leq(x, x, 1e-10).unwrap());
        }
        let same_dim = |a: &SpectralData, b: &SpectralData| a.dim() == b.dim();
        for x in &data {
            for y in data.iter().filter(|y| same_dim(x, y)) {
                for z in data.iter().filter(|z| same_dim(x, z)) {
                    let xy = spectral_order_leq(x, y, 1e-10).unwrap();
                    let yz = spectral_order_leq(y, z, 1e-10).unwrap();
                    if xy && yz {
                        assert!(spectral_order_leq(x, z, 1e-10).unwrap());
                    }
                }
            }
        }
        // Antisymmetry up to operator equality.
        for x in &data {
            for y in data.iter().filter(|y| same_dim(x, y)) {
                let xy = spectral_order_leq(x, y, 1e-10).unwrap();
                let yx = spectral_order_leq(y, x, 1e-10).unwrap();
                if xy && yx {
                    assert!(x.reconstruct().approx_eq(&y.reconstruct(), 1e-9));
                }
            }
        }
        // Mixed dimensions are rejected rather than compared.
        assert!(matches!(
            spectral_order_leq(&data[0], &data[4], 1e-10),
            Err(OrderError::DimensionMismatch(3, 4))
        ));
    }

    /// For same-basis diagonal fixtures, A ≥_s E implies the rank order
    /// on the self-adjoint sums; the converse fails and the witness
    /// below pins a concrete counterexample.
    #[test]
    fn ordering_consistency_forward_direction() {
        let fixtures: Vec<(Vec<C64>, Vec<C64>)> = vec![
            (
                vec![c(1.0, 0.0), c(0.0, -1.0)],
                vec![c(1.0, 0.0), c(1.0, 0.0)],
            ),
            (
                vec![c(0.0, 0.0), c(1.0, 1.0)],
                vec![c(2.0, 1.0), c(1.0, 2.0)],
            ),
            (
                vec![c(0.5, 0.5), c(2.0, 0.0)],
                vec![c(1.0, 1.0), c(3.0, 0.5)],
            ),
        ];
        for (a, b) in &fixtures {
            let a_geq_b = spectral_order_leq(&diag_normal(b), &diag_normal(a), 1e-10).unwrap();
            if a_geq_b {
                let sa: Vec<C64> = a.iter().map(|z| c(z.re + z.im, 0.0)).collect();
                let sb: Vec<C64> = b.iter().map(|z| c(z.re + z.im, 0.0)).collect();
                assert!(spectral_order_leq(&diag_normal(&sb), &diag_normal(&sa), 1e-10).unwrap());
            }
        }
    }

    #[test]
    fn ordering_consistency_converse_fails() {
        // Sums dominate (2 ≥ 1.5) yet the imaginary components are not
        // dominated, so the normal operators are incomparable.
        let a = vec![c(2.0, 0.0), c(5.0, 0.0)];
        let b = vec![c(1.0, 0.5), c(5.0, 0.0)];
        let sa: Vec<C64> = a.iter().map(|z| c(z.re + z.im, 0.0)).collect();
        let sb: Vec<C64> = b.iter().map(|z| c(z.re + z.im, 0.0)).collect();
        assert!(spectral_order_leq(&diag_normal(&sb), &diag_normal(&sa), 1e-10).unwrap());
        assert!(!spectral_order_leq(&diag_normal(&b), &diag_normal(&a), 1e-10).unwrap());
    }

    proptest! {
        #[test]
        fn preorder_laws(
            a in (-5.0..5.0f64, -5.0..5.0f64),
            b in (-5.0..5.0f64, -5.0..5.0f64),
            d in (-5.0..5.0f64, -5.0..5.0f64),
        ) {
            let (a, b, d) = (c(a.0, a.1), c(b.0, b.1), c(d.0, d.1));
            prop_assert_eq!(cmp_complex(a, a), Verdict::Equivalent);
            let ab = cmp_complex(a, b);
            let ba = cmp_complex(b, a);
            match ab {
                Verdict::Less => prop_assert_eq!(ba, Verdict::Greater),
                Verdict::Greater => prop_assert_eq!(ba, Verdict::Less),
                Verdict::Equivalent => prop_assert_eq!(ba, Verdict::Equivalent),
            }
            let leq = |x: C64, y: C64| cmp_complex(x, y) != Verdict::Greater;
            if leq(a, b) && leq(b, d) {
                prop_assert!(leq(a, d));
            }
        }

        #[test]
        fn inf_is_lower_bound_and_member(set in proptest::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 1..8)) {
            let vals: Vec<C64> = set.iter().map(|&(re, im)| c(re, im)).collect();
            let inf = inf_complex(vals.iter().copied()).unwrap();
            prop_assert!(vals.contains(&inf));
            for v in &vals {
                prop_assert!(cmp_complex(inf, *v) != Verdict::Greater);
            }
        }
    }
}
