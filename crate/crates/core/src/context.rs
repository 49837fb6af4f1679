//! Classical snapshots at finite dimension.
//!
//! A context is an abelian algebra presented by its atoms — a
//! resolution of the identity into mutually orthogonal projections.
//! The working stand-in for the full poset of contexts is the finite
//! family generated by one seed: every partition of the seed's atoms
//! into at least two blocks, ordered by coarsening.

use crate::linops::{ComplexMatrix, Projector, C64};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ContextError {
    #[error("operators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("input operator is not normal")]
    NonNormalInput,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("generated algebra is trivial (a single atom)")]
    TrivialContext,
    #[error("atoms do not form a resolution of identity: {0}")]
    InvalidAtoms(String),
    #[error("seed has {0} atoms, more than the supported 6")]
    TooManyAtoms(usize),
    #[error("operator does not lie in the span of the context's atoms")]
    OperatorNotInContext,
    #[error("Gel'fand point does not belong to this context")]
    PointNotInContext,
}

/// Abelian snapshot: mutually orthogonal nonzero atoms summing to 1.
#[derive(Debug, Clone)]
pub struct Context {
    label: String,
    atoms: Vec<Projector>,
}

impl Context {
    pub fn from_atoms(
        label: impl Into<String>,
        atoms: Vec<Projector>,
        tol: f64,
    ) -> Result<Self, ContextError> {
        if atoms.len() < 2 {
            return Err(ContextError::TrivialContext);
        }
        let dim = atoms[0].dim();
        let mut sum = ComplexMatrix::zeros(dim);
        for (i, a) in atoms.iter().enumerate() {
            if a.dim() != dim {
                return Err(ContextError::DimensionMismatch(a.dim(), dim));
            }
            if a.rank() == 0 {
                return Err(ContextError::InvalidAtoms(format!("atom {i} is zero")));
            }
            sum = sum.add(a.matrix());
            for (j, b) in atoms.iter().enumerate() {
                if i != j && !a.orthogonal_to(b, tol) {
                    return Err(ContextError::InvalidAtoms(format!(
                        "atoms {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        if !sum.approx_eq(&ComplexMatrix::identity(dim), tol.max(1e-9 * dim as f64)) {
            return Err(ContextError::InvalidAtoms(
                "atoms do not sum to the identity".into(),
            ));
        }
        Ok(Context {
            label: label.into(),
            atoms,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn atoms(&self) -> &[Projector] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    /// Projection of `a` onto the span of the atoms:
    /// `Σ (tr(P_k a)/rank P_k) · P_k`.
    fn span_projection(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim());
        for p in &self.atoms {
            let coeff = p.matrix().mul(a).trace() / (p.rank() as f64);
            out = out.add(&p.matrix().scale(coeff));
        }
        out
    }

    pub fn contains_operator(&self, a: &ComplexMatrix, tol: f64) -> bool {
        a.dim() == self.dim() && self.span_projection(a).approx_eq(a, tol)
    }

    /// One multiplicative functional per atom.
    pub fn gelfand_spectrum(&self) -> Vec<GelfandPoint> {
        (0..self.atoms.len())
            .map(|atom_index| GelfandPoint { atom_index })
            .collect()
    }

    /// Evaluate a functional on an operator in the context's span.
    pub fn evaluate(
        &self,
        point: GelfandPoint,
        a: &ComplexMatrix,
        tol: f64,
    ) -> Result<C64, ContextError> {
        if point.atom_index >= self.atoms.len() {
            return Err(ContextError::PointNotInContext);
        }
        if !self.contains_operator(a, tol) {
            return Err(ContextError::OperatorNotInContext);
        }
        let p = &self.atoms[point.atom_index];
        Ok(p.matrix().mul(a).trace() / (p.rank() as f64))
    }

    /// Restriction of a functional to a coarser context: the unique
    /// atom of `coarser` whose range contains this point's atom.
    pub fn restrict_point(
        &self,
        point: GelfandPoint,
        coarser: &Context,
        tol: f64,
    ) -> Result<GelfandPoint, ContextError> {
        if point.atom_index >= self.atoms.len() {
            return Err(ContextError::PointNotInContext);
        }
        let atom = &self.atoms[point.atom_index];
        for (k, big) in coarser.atoms.iter().enumerate() {
            if atom.leq(big, tol) {
                return Ok(GelfandPoint { atom_index: k });
            }
        }
        Err(ContextError::PointNotInContext)
    }
}

/// Multiplicative functional on a context, named by its atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GelfandPoint {
    pub atom_index: usize,
}

/// Common refinement of the eigenprojector families of pairwise
/// commuting normal operators: the abelian algebra they generate.
pub fn context_from_operators(ops: &[ComplexMatrix], tol: f64) -> Result<Context, ContextError> {
    assert!(!ops.is_empty(), "need at least one generating operator");
    let dim = ops[0].dim();
    for (i, a) in ops.iter().enumerate() {
        if a.dim() != dim {
            return Err(ContextError::DimensionMismatch(a.dim(), dim));
        }
        if !a.is_normal(tol) {
            return Err(ContextError::NonNormalInput);
        }
        for (j, b) in ops.iter().enumerate().skip(i + 1) {
            if a.commutator_norm(b) > tol {
                return Err(ContextError::NonCommuting(i, j));
            }
        }
    }
    let mut atoms = vec![Projector::identity(dim)];
    for op in ops {
        let (joint, _) = crate::linops::normal_spectral_decomposition(op, tol)
            .map_err(|_| ContextError::NonNormalInput)?;
        let mut refined = Vec::new();
        for atom in &atoms {
            for (_, q) in joint.pairs() {
                // Commuting projectors: the product is their meet.
                let m = atom.matrix().mul(q.matrix());
                let rank = m.trace().re.round() as usize;
                if rank == 0 {
                    continue;
                }
                refined.push(
                    Projector::from_matrix(m, tol.max(1e-8))
                        .map_err(|_| ContextError::NonNormalInput)?,
                );
            }
        }
        atoms = refined;
    }
    if atoms.len() < 2 {
        return Err(ContextError::TrivialContext);
    }
    Context::from_atoms(format!("gen[{}]", atoms.len()), atoms, tol.max(1e-8))
}

/// True iff every atom of `small` is a sum of atoms of `big`.
pub fn is_subcontext(small: &Context, big: &Context, tol: f64) -> Result<bool, ContextError> {
    if small.dim() != big.dim() {
        return Err(ContextError::DimensionMismatch(small.dim(), big.dim()));
    }
    for a in small.atoms() {
        let mut sum = ComplexMatrix::zeros(big.dim());
        for b in big.atoms() {
            if b.leq(a, tol) {
                sum = sum.add(b.matrix());
            }
        }
        if !sum.approx_eq(a.matrix(), tol.max(1e-9 * big.dim() as f64)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All partitions of `{0, .., n-1}` in restricted-growth order.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut assignment = vec![0usize; n];
    fn rec(
        k: usize,
        n: usize,
        max_block: usize,
        assignment: &mut Vec<usize>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if k == n {
            let blocks = max_block + 1;
            let mut partition = vec![Vec::new(); blocks];
            for (i, &b) in assignment.iter().enumerate() {
                partition[b].push(i);
            }
            out.push(partition);
            return;
        }
        for b in 0..=max_block + 1 {
            assignment[k] = b;
            rec(k + 1, n, max_block.max(b), assignment, out);
        }
    }
    if n > 0 {
        assignment[0] = 0;
        rec(1, n, 0, &mut assignment, &mut out);
    }
    out
}

fn partition_label(partition: &[Vec<usize>]) -> String {
    let mut blocks: Vec<String> = partition
        .iter()
        .map(|b| {
            b.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    blocks.sort();
    format!("{{{}}}", blocks.join("|"))
}

/// Finite sub-poset of classical snapshots generated by one seed
/// context: one member per partition of the seed's atoms into at
/// least two blocks, ordered by coarsening.
#[derive(Debug, Clone)]
pub struct ContextPoset {
    contexts: Vec<Context>,
    /// Partition of seed-atom indices backing each context.
    partitions: Vec<Vec<Vec<usize>>>,
    /// `leq[i][j]` iff context i ⊆ context j.
    leq: Vec<Vec<bool>>,
    seed_index: usize,
}

impl ContextPoset {
    pub fn generate(seed: &Context, tol: f64) -> Result<Self, ContextError> {
        let k = seed.atoms().len();
        if k > 6 {
            return Err(ContextError::TooManyAtoms(k));
        }
        let mut partitions: Vec<Vec<Vec<usize>>> = set_partitions(k)
            .into_iter()
            .filter(|p| p.len() >= 2)
            .collect();
        partitions.sort_by_key(|p| (usize::MAX - p.len(), partition_label(p)));

        let mut contexts = Vec::new();
        for partition in &partitions {
            let atoms: Vec<Projector> = partition
                .iter()
                .map(|block| {
                    let mut acc = Projector::zero(seed.dim());
                    for &i in block {
                        acc = acc.orthogonal_sum(&seed.atoms()[i]);
                    }
                    acc
                })
                .collect();
            contexts.push(Context::from_atoms(partition_label(partition), atoms, tol)?);
        }

        // V_i ⊆ V_j iff partition j refines partition i (every block of
        // i is a union of blocks of j).
        let refines = |fine: &[Vec<usize>], coarse: &[Vec<usize>]| -> bool {
            fine.iter()
                .all(|fb| coarse.iter().any(|cb| fb.iter().all(|x| cb.contains(x))))
        };
        let n = partitions.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                leq[i][j] = refines(&partitions[j], &partitions[i]);
            }
        }
        let seed_index = partitions.iter().position(|p| p.len() == k).unwrap();
        Ok(ContextPoset {
            contexts,
            partitions,
            leq,
            seed_index,
        })
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    pub fn context(&self, i: usize) -> &Context {
        &self.contexts[i]
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn partition(&self, i: usize) -> &[Vec<usize>] {
        &self.partitions[i]
    }

    /// Index of the seed (the finest member).
    pub fn seed_index(&self) -> usize {
        self.seed_index
    }

    pub fn is_leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// Down-set ↓V in ascending index order (deterministic).
    pub fn down_set(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.leq[i][v]).collect()
    }

    /// Seed-atom mask of one atom of context `i`.
    pub fn atom_block(&self, i: usize, atom: usize) -> &[usize] {
        &self.partitions[i][atom]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::normal_spectral_decomposition;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn o_z() -> ComplexMatrix {
        ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, -1.0)])
    }

    fn diag_seed(n: usize) -> Context {
        let atoms = (0..n)
            .map(|i| {
                let mut mask = vec![false; n];
                mask[i] = true;
                Projector::from_diag_mask(n, &mask)
            })
            .collect();
        Context::from_atoms(format!("diag{n}"), atoms, 1e-12).unwrap()
    }

    #[test]
    fn context_from_o_z() {
        let v = context_from_operators(&[o_z()], 1e-9).unwrap();
        assert_eq!(v.atoms().len(), 2);
        let e1 = Projector::from_diag_mask(2, &[true, false]);
        let e2 = Projector::from_diag_mask(2, &[false, true]);
        assert!(v.atoms().iter().any(|a| a.approx_eq(&e1, 1e-9)));
        assert!(v.atoms().iter().any(|a| a.approx_eq(&e2, 1e-9)));
    }

    #[test]
    fn identity_generates_trivial_algebra() {
        assert!(matches!(
            context_from_operators(&[ComplexMatrix::identity(2)], 1e-9),
            Err(ContextError::TrivialContext)
        ));
    }

    #[test]
    fn refinement_of_two_diagonal_operators() {
        let a = ComplexMatrix::diag(&[c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        let b = ComplexMatrix::diag(&[c(3.0, 0.0), c(4.0, 0.0), c(4.0, 0.0)]);
        let v = context_from_operators(&[a, b], 1e-9).unwrap();
        assert_eq!(v.atoms().len(), 3);
        for i in 0..3 {
            let mut mask = vec![false; 3];
            mask[i] = true;
            let e = Projector::from_diag_mask(3, &mask);
            assert!(v.atoms().iter().any(|a| a.approx_eq(&e, 1e-9)));
        }
    }

    #[test]
    fn non_commuting_generators_rejected() {
        let x = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let z = ComplexMatrix::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(matches!(
            context_from_operators(&[z, x], 1e-9),
            Err(ContextError::NonCommuting(0, 1))
        ));
    }

    #[test]
    fn subcontext_checks() {
        let fine = diag_seed(3);
        let coarse = Context::from_atoms(
            "coarse",
            vec![
                Projector::from_diag_mask(3, &[true, true, false]),
                Projector::from_diag_mask(3, &[false, false, true]),
            ],
            1e-12,
        )
        .unwrap();
        assert!(is_subcontext(&coarse, &fine, 1e-9).unwrap());
        assert!(is_subcontext(&fine, &fine, 1e-9).unwrap());
        assert!(!is_subcontext(&fine, &coarse, 1e-9).unwrap());

        // Incompatible 2-atom contexts: diagonal vs Pauli-X basis.
        let diag = diag_seed(2);
        let hadamard = Context::from_atoms(
            "x-basis",
            vec![
                Projector::from_vector(&[c(1.0, 0.0), c(1.0, 0.0)]),
                Projector::from_vector(&[c(1.0, 0.0), c(-1.0, 0.0)]),
            ],
            1e-12,
        )
        .unwrap();
        assert!(!is_subcontext(&diag, &hadamard, 1e-9).unwrap());
        assert!(!is_subcontext(&hadamard, &diag, 1e-9).unwrap());
    }

    #[test]
    fn poset_counts_match_bell_numbers() {
        assert_eq!(
            ContextPoset::generate(&diag_seed(2), 1e-12).unwrap().len(),
            1
        );
        assert_eq!(
            ContextPoset::generate(&diag_seed(3), 1e-12).unwrap().len(),
            4
        );
        assert_eq!(
            ContextPoset::generate(&diag_seed(4), 1e-12).unwrap().len(),
            14
        );
        assert_eq!(
            ContextPoset::generate(&diag_seed(5), 1e-12).unwrap().len(),
            51
        );
    }

    #[test]
    fn poset_order_laws_by_exhaustive_scan() {
        let poset = ContextPoset::generate(&diag_seed(4), 1e-12).unwrap();
        let n = poset.len();
        for i in 0..n {
            assert!(poset.is_leq(i, i));
            for j in 0..n {
                if poset.is_leq(i, j) && poset.is_leq(j, i) {
                    assert_eq!(i, j);
                }
                for k in 0..n {
                    if poset.is_leq(i, j) && poset.is_leq(j, k) {
                        assert!(poset.is_leq(i, k));
                    }
                }
                // Order agrees with the matrix-level subcontext test.
                assert_eq!(
                    poset.is_leq(i, j),
                    is_subcontext(poset.context(i), poset.context(j), 1e-9).unwrap()
                );
            }
        }
        // The seed dominates everything.
        let seed = poset.seed_index();
        for i in 0..n {
            assert!(poset.is_leq(i, seed));
        }
    }

    #[test]
    fn gelfand_evaluation_on_o_z() {
        let v = context_from_operators(&[o_z()], 1e-9).unwrap();
        let points = v.gelfand_spectrum();
        assert_eq!(points.len(), 2);
        let mut vals: Vec<C64> = points
            .iter()
            .map(|&p| v.evaluate(p, &o_z(), 1e-9).unwrap())
            .collect();
        vals.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        assert!((vals[0] - c(0.0, -1.0)).norm() < 1e-9);
        assert!((vals[1] - c(1.0, 0.0)).norm() < 1e-9);
        // Unit functional.
        for &p in &points {
            let one = v.evaluate(p, &ComplexMatrix::identity(2), 1e-9).unwrap();
            assert!((one - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn gelfand_rejects_operator_outside_span() {
        let v = diag_seed(2);
        let x = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            v.evaluate(GelfandPoint { atom_index: 0 }, &x, 1e-9),
            Err(ContextError::OperatorNotInContext)
        ));
    }

    #[test]
    fn gelfand_reconstruction() {
        // Σ λ(A)·P_atom reproduces A for A in the span.
        let v = diag_seed(3);
        let a = ComplexMatrix::diag(&[c(1.0, 2.0), c(-1.0, 0.0), c(0.5, -0.5)]);
        let mut rebuilt = ComplexMatrix::zeros(3);
        for p in v.gelfand_spectrum() {
            let lam = v.evaluate(p, &a, 1e-9).unwrap();
            rebuilt = rebuilt.add(&v.atoms()[p.atom_index].matrix().scale(lam));
        }
        assert!(rebuilt.approx_eq(&a, 1e-12));
    }

    #[test]
    fn point_restriction_and_functoriality() {
        let poset = ContextPoset::generate(&diag_seed(3), 1e-12).unwrap();
        let seed = poset.seed_index();
        let fine = poset.context(seed);
        for &p in &fine.gelfand_spectrum() {
            for mid_idx in poset.down_set(seed) {
                let mid = poset.context(mid_idx);
                let via_mid = fine.restrict_point(p, mid, 1e-9).unwrap();
                for low_idx in poset.down_set(mid_idx) {
                    let low = poset.context(low_idx);
                    let direct = fine.restrict_point(p, low, 1e-9).unwrap();
                    let composed = mid.restrict_point(via_mid, low, 1e-9).unwrap();
                    assert_eq!(direct, composed);
                }
            }
        }
    }

    #[test]
    fn restriction_merges_atoms() {
        let fine = diag_seed(3);
        let coarse = Context::from_atoms(
            "merge01",
            vec![
                Projector::from_diag_mask(3, &[true, true, false]),
                Projector::from_diag_mask(3, &[false, false, true]),
            ],
            1e-12,
        )
        .unwrap();
        let p = fine
            .restrict_point(GelfandPoint { atom_index: 0 }, &coarse, 1e-9)
            .unwrap();
        assert_eq!(p.atom_index, 0);
        let q = fine
            .restrict_point(GelfandPoint { atom_index: 2 }, &coarse, 1e-9)
            .unwrap();
        assert_eq!(q.atom_index, 1);
    }

    #[test]
    fn too_many_atoms_guard() {
        let seed = diag_seed(7);
        assert!(matches!(
            ContextPoset::generate(&seed, 1e-12),
            Err(ContextError::TooManyAtoms(7))
        ));
    }

    #[test]
    fn decomposition_feeds_context() {
        // The eigencontext of a random-basis normal operator.
        let u = crate::linops::random_unitary(3, 3);
        let n = u
            .mul(&ComplexMatrix::diag(&[
                c(2.0, 3.0),
                c(-1.0, 0.0),
                c(0.0, 1.0),
            ]))
            .mul(&u.adjoint());
        let v = context_from_operators(std::slice::from_ref(&n), 1e-8).unwrap();
        assert_eq!(v.atoms().len(), 3);
        assert!(v.contains_operator(&n, 1e-7));
        let (joint, _) = normal_spectral_decomposition(&n, 1e-8).unwrap();
        for (_, p) in joint.pairs() {
            assert!(v.atoms().iter().any(|a| a.approx_eq(p, 1e-7)));
        }
    }
}
