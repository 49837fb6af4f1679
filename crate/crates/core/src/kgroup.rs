//! Grothendieck completion of the quantity-value monoids, the
//! one-parameter flows they parameterise, and the desk-scale Stone
//! correspondence between Hermitian generators and unitary flows.
//!
//! Fibres are functions on a down-set of contexts. The scalar-valued
//! fibres are cancellative, so the k-equivalence `[a,b] ≡ [c,d] iff
//! a+d = b+c` drops the auxiliary witness of the general construction;
//! pairs are stored as given and equality is equivalence-based.

use crate::context::ContextPoset;
use crate::dasein::{add_quantity, outer_das_normal, QuantityValue};
use crate::linops::{
    normal_spectral_decomposition, unitary_flow, ComplexMatrix, LinopsError, SpectralData, C64,
};
use crate::order::rank;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KgroupError {
    #[error("fibres live over different down-sets")]
    DownSetMismatch,
    #[error("need a sample at nonzero time")]
    NeedNonzeroSample,
    #[error("sample at t={0} is not unitary")]
    NotUnitary(f64),
    #[error("eigenvalue argument {0:.6} lies inside the ±π guard band")]
    BranchAmbiguity(f64),
    #[error("samples violate the group law (residual {0:.3e})")]
    InconsistentSamples(f64),
    #[error(transparent)]
    Linops(#[from] LinopsError),
}

/// Abelian monoid of context-indexed data over a fixed down-set.
pub trait QMonoid: Clone {
    fn down_labels(&self) -> &[String];
    fn add(&self, other: &Self) -> Self;
    fn zero_like(&self) -> Self;
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
    fn restrict(&self, keep: &[String]) -> Self;
}

/// Order-reversing scalar function on a down-set: a fibre of the
/// one-sided quantity-value presheaf. Monotonicity is a property of
/// the source data, checked by the callers that construct these from
/// daseinisation; arithmetic is plain contextwise arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct OrFunction {
    labels: Vec<String>,
    values: Vec<C64>,
}

impl OrFunction {
    pub fn new(labels: Vec<String>, values: Vec<C64>) -> Self {
        assert_eq!(labels.len(), values.len());
        OrFunction { labels, values }
    }

    /// Constant function `c_r` on the down-set.
    pub fn constant(labels: Vec<String>, value: C64) -> Self {
        let values = vec![value; labels.len()];
        OrFunction { labels, values }
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn scale(&self, z: C64) -> Self {
        OrFunction {
            labels: self.labels.clone(),
            values: self.values.iter().map(|v| v * z).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        OrFunction {
            labels: self.labels.clone(),
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// Rank-antitone along every inclusion of the generated poset.
    pub fn is_order_reversing(&self, poset: &ContextPoset) -> bool {
        let index_of = |label: &str| (0..poset.len()).find(|&i| poset.context(i).label() == label);
        for (i, li) in self.labels.iter().enumerate() {
            for (j, lj) in self.labels.iter().enumerate() {
                let (Some(pi), Some(pj)) = (index_of(li), index_of(lj)) else {
                    return false;
                };
                if poset.is_leq(pi, pj) && rank(self.values[i]) < rank(self.values[j]) - 1e-12 {
                    return false;
                }
            }
        }
        true
    }
}

impl QMonoid for OrFunction {
    fn down_labels(&self) -> &[String] {
        &self.labels
    }

    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.labels, other.labels);
        OrFunction {
            labels: self.labels.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn zero_like(&self) -> Self {
        OrFunction {
            labels: self.labels.clone(),
            values: vec![C64::new(0.0, 0.0); self.values.len()],
        }
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.labels == other.labels
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    fn restrict(&self, keep: &[String]) -> Self {
        let mut labels = Vec::new();
        let mut values = Vec::new();
        for (i, l) in self.labels.iter().enumerate() {
            if keep.contains(l) {
                labels.push(l.clone());
                values.push(self.values[i]);
            }
        }
        OrFunction { labels, values }
    }
}

impl QMonoid for QuantityValue {
    fn down_labels(&self) -> &[String] {
        self.labels()
    }

    fn add(&self, other: &Self) -> Self {
        add_quantity(self, other).expect("matching down-sets")
    }

    fn zero_like(&self) -> Self {
        QuantityValue::new(
            self.labels().to_vec(),
            vec![C64::new(0.0, 0.0); self.len()],
            vec![C64::new(0.0, 0.0); self.len()],
        )
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.labels() == other.labels()
            && self
                .mu()
                .iter()
                .zip(other.mu())
                .all(|(a, b)| (a - b).norm() <= tol)
            && self
                .nu()
                .iter()
                .zip(other.nu())
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    fn restrict(&self, keep: &[String]) -> Self {
        QuantityValue::restrict(self, keep)
    }
}

/// Formal difference `[pos, neg]` in the Grothendieck completion.
#[derive(Debug, Clone)]
pub struct KPair<M: QMonoid> {
    pub pos: M,
    pub neg: M,
}

impl<M: QMonoid> KPair<M> {
    pub fn zero_like(template: &M) -> Self {
        KPair {
            pos: template.zero_like(),
            neg: template.zero_like(),
        }
    }
}

/// `θ(a) = [a, 0]`, the universal monoid map into the completion.
pub fn theta<M: QMonoid>(a: &M) -> KPair<M> {
    KPair {
        neg: a.zero_like(),
        pos: a.clone(),
    }
}

pub fn k_add<M: QMonoid>(x: &KPair<M>, y: &KPair<M>) -> Result<KPair<M>, KgroupError> {
    if x.pos.down_labels() != y.pos.down_labels() {
        return Err(KgroupError::DownSetMismatch);
    }
    Ok(KPair {
        pos: x.pos.add(&y.pos),
        neg: x.neg.add(&y.neg),
    })
}

pub fn k_neg<M: QMonoid>(x: &KPair<M>) -> KPair<M> {
    KPair {
        pos: x.neg.clone(),
        neg: x.pos.clone(),
    }
}

/// `[a,b] ≡ [c,d] iff a+d = b+c` contextwise: the cancellative form of
/// the k-equivalence.
pub fn k_equiv<M: QMonoid>(x: &KPair<M>, y: &KPair<M>, tol: f64) -> Result<bool, KgroupError> {
    if x.pos.down_labels() != y.pos.down_labels() {
        return Err(KgroupError::DownSetMismatch);
    }
    Ok(x.pos.add(&y.neg).approx_eq(&x.neg.add(&y.pos), tol))
}

/// Scalar multiplication on the one-sided complex completion, branched
/// on the rank sign of the scalar.
pub fn scalar_mul(z: C64, x: &KPair<OrFunction>) -> KPair<OrFunction> {
    if rank(z) >= 0.0 {
        KPair {
            pos: x.pos.scale(z),
            neg: x.neg.scale(z),
        }
    } else {
        KPair {
            pos: x.neg.scale(-z),
            neg: x.pos.scale(-z),
        }
    }
}

/// Complex conjugation on `k` of the one-sided complex completion.
pub fn k_conjugate(x: &KPair<OrFunction>) -> KPair<OrFunction> {
    KPair {
        pos: x.pos.conj(),
        neg: x.neg.conj(),
    }
}

/// Group element of the one-parameter flow presheaf, tagged by its
/// completion parameter.
#[derive(Debug, Clone)]
pub struct FlowElem<M: QMonoid> {
    pub tag: KPair<M>,
}

pub fn flow_compose<M: QMonoid>(
    a: &FlowElem<M>,
    b: &FlowElem<M>,
) -> Result<FlowElem<M>, KgroupError> {
    Ok(FlowElem {
        tag: k_add(&a.tag, &b.tag)?,
    })
}

pub fn flow_identity<M: QMonoid>(template: &M) -> FlowElem<M> {
    FlowElem {
        tag: KPair::zero_like(template),
    }
}

pub fn flow_inverse<M: QMonoid>(a: &FlowElem<M>) -> FlowElem<M> {
    FlowElem { tag: k_neg(&a.tag) }
}

pub fn flow_restrict<M: QMonoid>(a: &FlowElem<M>, keep: &[String]) -> FlowElem<M> {
    FlowElem {
        tag: KPair {
            pos: a.tag.pos.restrict(keep),
            neg: a.tag.neg.restrict(keep),
        },
    }
}

/// Embed a real parameter as the flow tagged `[c_r, 0]`.
pub fn embed_reals(r: f64, labels: &[String]) -> FlowElem<OrFunction> {
    embed_complex(C64::new(r, 0.0), labels)
}

/// Complex analogue of the embedding.
pub fn embed_complex(t: C64, labels: &[String]) -> FlowElem<OrFunction> {
    FlowElem {
        tag: theta(&OrFunction::constant(labels.to_vec(), t)),
    }
}

/// Sampled unitary flow of a Hermitian generator.
pub fn stone_forward(
    a: &SpectralData,
    ts: &[f64],
    tol: f64,
) -> Result<Vec<ComplexMatrix>, KgroupError> {
    ts.iter().map(|&t| Ok(unitary_flow(a, t, tol)?)).collect()
}

/// Largest commutator norm between a flow sample and the spectral
/// projectors of its generator.
pub fn flow_commutation_residual(a: &SpectralData, u: &ComplexMatrix) -> f64 {
    a.pairs()
        .iter()
        .map(|(_, p)| u.commutator_norm(p.matrix()))
        .fold(0.0, f64::max)
}

/// Recover the Hermitian generator from flow samples. Uses the first
/// sample at nonzero time, guards the principal-branch cut, and
/// cross-checks every remaining sample against the recovered flow.
pub fn stone_inverse(
    samples: &[(f64, ComplexMatrix)],
    tol: f64,
) -> Result<SpectralData, KgroupError> {
    let &(t0, ref u0) = samples
        .iter()
        .find(|(t, _)| t.abs() > 1e-12)
        .ok_or(KgroupError::NeedNonzeroSample)?;
    for (t, u) in samples {
        if !u.is_unitary(tol.max(1e-8) * u.dim() as f64) {
            return Err(KgroupError::NotUnitary(*t));
        }
    }
    // Group-law consistency across available sample pairs.
    let mut law_residual = 0.0f64;
    for (s, us) in samples {
        for (t, ut) in samples {
            if let Some((_, ust)) = samples.iter().find(|(r, _)| (r - (s + t)).abs() < 1e-9) {
                law_residual = law_residual.max(us.mul(ut).dist(ust));
            }
        }
    }
    if law_residual > tol.max(1e-8) {
        return Err(KgroupError::InconsistentSamples(law_residual));
    }
    let (joint, _) = normal_spectral_decomposition(u0, tol.max(1e-9))?;
    let guard = 1e-6;
    let mut pairs = Vec::new();
    for (z, p) in joint.pairs() {
        if (z.norm() - 1.0).abs() > tol.max(1e-7) {
            return Err(KgroupError::NotUnitary(t0));
        }
        let arg = z.arg();
        if std::f64::consts::PI - arg.abs() < guard {
            return Err(KgroupError::BranchAmbiguity(arg));
        }
        pairs.push((C64::new(arg / t0, 0.0), p.clone()));
    }
    // Distinct unitary eigenvalues give distinct arguments inside the
    // guard band, so validation can only fail on degenerate samples.
    let generator = SpectralData::from_pairs(pairs, 1e-12)?;
    // Round trip over all samples.
    let mut worst = 0.0f64;
    for (t, u) in samples {
        let rebuilt = unitary_flow(&generator, *t, tol.max(1e-9))?;
        worst = worst.max(rebuilt.dist(u));
    }
    if worst > tol.max(1e-7) {
        return Err(KgroupError::InconsistentSamples(worst));
    }
    Ok(generator)
}

/// Invariance of outer daseinisation under conjugation by the flow of
/// `a` at the given times, over every context of the poset: the
/// concrete form of the first Stone compatibility condition.
pub fn condition_a_residual(
    a: &SpectralData,
    poset: &ContextPoset,
    ts: &[f64],
    tol: f64,
) -> Result<f64, KgroupError> {
    let mut worst = 0.0f64;
    for &t in ts {
        let u = unitary_flow(a, t, tol)?;
        let conjugated = u.mul(&a.reconstruct()).mul(&u.adjoint());
        let (cj, _) = normal_spectral_decomposition(&conjugated, tol.max(1e-9))?;
        for i in 0..poset.len() {
            let v = poset.context(i);
            let das_a =
                outer_das_normal(a, v, tol).map_err(|_| KgroupError::InconsistentSamples(0.0))?;
            let das_c =
                outer_das_normal(&cj, v, tol).map_err(|_| KgroupError::InconsistentSamples(0.0))?;
            worst = worst.max(das_a.dist(&das_c));
        }
    }
    Ok(worst)
}
