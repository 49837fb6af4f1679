//! Observable and antonymous functions of spectral families on the
//! filters of finite projection lattices, plus the pieces built on
//! them: state filters, the Stone–Gel'fand pairing and expectation
//! bounds.
//!
//! The observable function of a normal operator is evaluated through
//! its two real factors, `f_A = f_C + i·f_B`; every call also scans
//! the two-dimensional grid directly and checks both routes agree, so
//! the decomposition theorem is exercised on the way to every value.
//! The antonymous function evaluates each factor as the first cut
//! whose complementary family member leaves the filter, which is the
//! finite-spectrum form of the supremum over the continuum.

use crate::context::{Context, GelfandPoint};
use crate::lattice::{
    enumerate_quasipoints, Filter, FiniteLattice, LatticeError, LatticeSpectralFamily,
};
use crate::linops::{Projector, SpectralData, TwoParamSpectralFamily, C64};
use crate::order::{inf_complex, rank};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ObservableError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("state vector is not normalized (‖ψ‖ = {0})")]
    NotNormalized(f64),
    #[error("projector is not an atom sum of this lattice")]
    NotAnAtomSum,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// Boolean lattice of projections over a list of orthogonal ground
/// atoms, with the mask ↔ matrix bridge.
#[derive(Debug, Clone)]
pub struct ProjectionLattice {
    lattice: FiniteLattice,
    atoms: Vec<Projector>,
}

impl ProjectionLattice {
    /// Full Boolean lattice over the given atoms.
    pub fn boolean_over(atoms: &[Projector]) -> Result<Self, ObservableError> {
        let lattice = FiniteLattice::boolean(atoms.len())?;
        Ok(ProjectionLattice {
            lattice,
            atoms: atoms.to_vec(),
        })
    }

    /// Sub-lattice of the same ground generated by a coarser blocking
    /// of the atoms: elements are the unions of blocks.
    pub fn block_sublattice(&self, blocks: &[Vec<usize>]) -> Result<Self, ObservableError> {
        let mut masks = Vec::new();
        for subset in 0u64..(1 << blocks.len()) {
            let mut mask = 0u64;
            for (b, block) in blocks.iter().enumerate() {
                if subset & (1 << b) != 0 {
                    for &g in block {
                        mask |= 1 << g;
                    }
                }
            }
            masks.push(mask);
        }
        let lattice = FiniteLattice::from_masks(self.atoms.len(), masks, Default::default())?;
        Ok(ProjectionLattice {
            lattice,
            atoms: self.atoms.clone(),
        })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn ground_atoms(&self) -> &[Projector] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    /// Matrix of an element: sum of its ground atoms.
    pub fn projector_of(&self, elem: usize) -> Projector {
        let mask = self.lattice.mask(elem);
        let mut p = Projector::zero(self.dim());
        for (g, atom) in self.atoms.iter().enumerate() {
            if mask & (1 << g) != 0 {
                p = p.orthogonal_sum(atom);
            }
        }
        p
    }

    /// Ground mask of a projector that is a sum of atoms.
    pub fn mask_of_projector(&self, p: &Projector, tol: f64) -> Result<u64, ObservableError> {
        let mut mask = 0u64;
        let mut sum = Projector::zero(self.dim());
        for (g, atom) in self.atoms.iter().enumerate() {
            if atom.leq(p, tol) {
                mask |= 1 << g;
                sum = sum.orthogonal_sum(atom);
            }
        }
        if sum
            .matrix()
            .approx_eq(p.matrix(), tol.max(1e-9 * self.dim() as f64))
        {
            Ok(mask)
        } else {
            Err(ObservableError::NotAnAtomSum)
        }
    }

    /// Express a two-parameter family over this lattice.
    pub fn family_of(
        &self,
        fam: &TwoParamSpectralFamily,
        tol: f64,
    ) -> Result<LatticeSpectralFamily, ObservableError> {
        let mut re_masks = Vec::new();
        let mut running = Projector::zero(self.dim());
        for (_, p) in fam.re_part().pairs() {
            running = running.orthogonal_sum(p);
            re_masks.push(self.mask_of_projector(&running, tol)?);
        }
        let mut im_masks = Vec::new();
        let mut running = Projector::zero(self.dim());
        for (_, p) in fam.im_part().pairs() {
            running = running.orthogonal_sum(p);
            im_masks.push(self.mask_of_projector(&running, tol)?);
        }
        Ok(LatticeSpectralFamily::new(
            fam.real_cuts(),
            re_masks,
            fam.imag_cuts(),
            im_masks,
            &self.lattice,
        )?)
    }
}

/// One-dimensional observable value: the first cut whose family member
/// belongs to the filter. Membership is a suffix of the chain, so the
/// first hit is the infimum.
fn part_observable(
    cuts: &[f64],
    masks: &dyn Fn(usize) -> u64,
    lattice: &FiniteLattice,
    filter: &Filter,
) -> Result<f64, ObservableError> {
    for (j, &c) in cuts.iter().enumerate() {
        let idx = lattice
            .index_of(masks(j))
            .ok_or(LatticeError::FamilyLatticeMismatch(masks(j)))?;
        if filter.contains(idx) {
            return Ok(c);
        }
    }
    unreachable!("the family reaches the top element, which every filter contains")
}

/// One-dimensional antonymous value: the first cut whose complementary
/// family member leaves the filter (the complement chain membership is
/// a prefix).
fn part_antonymous(
    cuts: &[f64],
    masks: &dyn Fn(usize) -> u64,
    lattice: &FiniteLattice,
    filter: &Filter,
) -> Result<f64, ObservableError> {
    let full = lattice.mask(lattice.top());
    for (j, &c) in cuts.iter().enumerate() {
        let comp_mask = full & !masks(j);
        let idx = lattice
            .index_of(comp_mask)
            .ok_or(LatticeError::FamilyLatticeMismatch(comp_mask))?;
        if !filter.contains(idx) {
            return Ok(c);
        }
    }
    unreachable!("the complement of the top is 0, which no filter contains")
}

/// `f_A(𝔅) = inf{λ : E_λ ∈ 𝔅}` under the rank order, computed as
/// `f_C(𝔅) + i·f_B(𝔅)` and checked against the direct grid infimum.
pub fn observable_function(
    fam: &LatticeSpectralFamily,
    lattice: &FiniteLattice,
    filter: &Filter,
) -> Result<C64, ObservableError> {
    let f_re = part_observable(fam.re_cuts(), &|j| fam.re_mask(j), lattice, filter)?;
    let f_im = part_observable(fam.im_cuts(), &|k| fam.im_mask(k), lattice, filter)?;
    let value = C64::new(f_re, f_im);
    let direct = observable_direct(fam, lattice, filter)?;
    assert!(
        (rank(value) - rank(direct)).abs() <= 1e-12 * (1.0 + rank(value).abs()),
        "factorised and direct observable values disagree: {value} vs {direct}"
    );
    Ok(value)
}

/// Direct grid scan: infimum (with the canonical tie-break) over all
/// cut pairs whose family value lies in the filter.
pub fn observable_direct(
    fam: &LatticeSpectralFamily,
    lattice: &FiniteLattice,
    filter: &Filter,
) -> Result<C64, ObservableError> {
    let mut candidates = Vec::new();
    for (j, &eps) in fam.re_cuts().iter().enumerate() {
        for (k, &eta) in fam.im_cuts().iter().enumerate() {
            let p = lattice
                .index_of(fam.re_mask(j))
                .ok_or(LatticeError::FamilyLatticeMismatch(fam.re_mask(j)))?;
            let q = lattice
                .index_of(fam.im_mask(k))
                .ok_or(LatticeError::FamilyLatticeMismatch(fam.im_mask(k)))?;
            if filter.contains(lattice.meet(p, q)) {
                candidates.push(C64::new(eps, eta));
            }
        }
    }
    Ok(inf_complex(candidates).expect("top grid cell is always a candidate"))
}

/// `g_A(𝔅) = sup{λ : 1 − E_λ ∈ 𝔅}`, evaluated per factor in its
/// finite-spectrum form `g_C(𝔅) + i·g_B(𝔅)`.
pub fn antonymous_function(
    fam: &LatticeSpectralFamily,
    lattice: &FiniteLattice,
    filter: &Filter,
) -> Result<C64, ObservableError> {
    let g_re = part_antonymous(fam.re_cuts(), &|j| fam.re_mask(j), lattice, filter)?;
    let g_im = part_antonymous(fam.im_cuts(), &|k| fam.im_mask(k), lattice, filter)?;
    Ok(C64::new(g_re, g_im))
}

/// The filter `T^ψ = {Q : Q ≥ |ψ⟩⟨ψ|}` inside the working lattice.
/// Returns the filter and whether it is maximal (a quasipoint); it is
/// maximal exactly when ψ lies in a single atom.
pub fn state_filter(
    psi: &[C64],
    pl: &ProjectionLattice,
    tol: f64,
) -> Result<(Filter, bool), ObservableError> {
    if psi.len() != pl.dim() {
        return Err(ObservableError::DimensionMismatch(psi.len(), pl.dim()));
    }
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > tol.max(1e-9) {
        return Err(ObservableError::NotNormalized(norm));
    }
    let mut members = 0u64;
    for i in 0..pl.lattice().len() {
        let q = pl.projector_of(i);
        // Q ≥ |ψ⟩⟨ψ| iff Qψ = ψ.
        let mut residual = 0.0f64;
        for r in 0..pl.dim() {
            let mut acc = C64::new(0.0, 0.0);
            for cidx in 0..pl.dim() {
                acc += q.matrix().get(r, cidx) * psi[cidx];
            }
            residual += (acc - psi[r]).norm_sqr();
        }
        if residual.sqrt() <= tol.max(1e-9) {
            members |= 1 << i;
        }
    }
    let filter = Filter::from_members(pl.lattice(), members)?;
    let maximal = filter.is_maximal(pl.lattice());
    Ok((filter, maximal))
}

/// Pairing between the Gel'fand spectrum of a context and the Stone
/// spectrum of its projection lattice: `β(λ) = {P : λ(P) = 1}`.
/// Verifies bijectivity and the clopen-basis correspondence.
pub fn stone_homeomorphism(
    ctx: &Context,
    tol: f64,
) -> Result<Vec<(GelfandPoint, Filter)>, ObservableError> {
    let pl = ProjectionLattice::boolean_over(ctx.atoms())?;
    let mut pairs = Vec::new();
    for point in ctx.gelfand_spectrum() {
        let mut members = 0u64;
        for i in 0..pl.lattice().len() {
            let p = pl.projector_of(i);
            if p.rank() == 0 {
                continue;
            }
            let val = ctx.evaluate(point, p.matrix(), tol).expect("element of V");
            if (val - C64::new(1.0, 0.0)).norm() <= tol.max(1e-9) {
                members |= 1 << i;
            }
        }
        pairs.push((point, Filter::from_members(pl.lattice(), members)?));
    }
    // β is a bijection onto the quasipoints.
    let quasipoints = enumerate_quasipoints(pl.lattice())?;
    assert_eq!(pairs.len(), quasipoints.len());
    for q in &quasipoints {
        assert_eq!(
            pairs.iter().filter(|(_, b)| b == q).count(),
            1,
            "β must hit every quasipoint exactly once"
        );
    }
    // Basis correspondence: λ(P) = 1 iff β(λ) ∈ Q_P.
    for (point, beta) in &pairs {
        for i in 0..pl.lattice().len() {
            let p = pl.projector_of(i);
            if p.rank() == 0 {
                continue;
            }
            let val = ctx.evaluate(*point, p.matrix(), tol).expect("element of V");
            let is_one = (val - C64::new(1.0, 0.0)).norm() <= tol.max(1e-9);
            assert_eq!(is_one, beta.contains(i));
        }
    }
    Ok(pairs)
}

/// `(g_A(T^ψ), ⟨ψ|A|ψ⟩, f_A(T^ψ))` over the Boolean lattice generated
/// by the eigenprojectors of `A`.
pub fn expectation_bounds(
    a: &SpectralData,
    psi: &[C64],
    tol: f64,
) -> Result<(C64, C64, C64), ObservableError> {
    let atoms: Vec<Projector> = a.pairs().iter().map(|(_, p)| p.clone()).collect();
    let pl = ProjectionLattice::boolean_over(&atoms)?;
    let (t_psi, _) = state_filter(psi, &pl, tol)?;
    let gap = crate::linops::eigengap(a.frobenius_norm());
    let fam = TwoParamSpectralFamily::from_joint(a, gap).expect("valid spectral data");
    let lfam = pl.family_of(&fam, tol)?;
    let f = observable_function(&lfam, pl.lattice(), &t_psi)?;
    let g = antonymous_function(&lfam, pl.lattice(), &t_psi)?;
    let expectation = a.reconstruct().expectation(psi);
    Ok((g, expectation, f))
}
