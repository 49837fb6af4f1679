//! Dense complex linear algebra at desk scale.
//!
//! Everything here is sized for n ≤ 16: matrices are flat row-major
//! buffers, the eigensolver is a cyclic Jacobi sweep with complex
//! rotations, and spectral data keeps explicit eigenprojectors rather
//! than eigenvector bases so that equality questions reduce to
//! Frobenius distances between ranges.

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Maximum number of Jacobi sweeps before giving up.
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error)]
pub enum LinopsError {
    #[error("input operator is not normal (commutator residual {residual:.3e})")]
    NonNormalInput { residual: f64 },
    #[error("input operator is not Hermitian (residual {residual:.3e})")]
    NonHermitianInput { residual: f64 },
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("eigenvalue {0} has non-real part beyond tolerance")]
    ComplexEigenvalue(C64),
    #[error("spectral family increment at cell ({0}, {1}) is not a projection")]
    InvalidFamily(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid spectral data: {0}")]
    InvalidSpectralData(String),
}

/// Scale-aware default tolerance: `1e-9 * max(1, ‖input‖_F)`.
pub fn default_tol(norm: f64) -> f64 {
    1e-9 * norm.max(1.0)
}

/// Eigenvalue clustering gap: `1e-7 * ‖input‖_F` (floored at 1e-7 for
/// the zero operator).
pub fn eigengap(norm: f64) -> f64 {
    1e-7 * norm.max(1.0)
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        assert_eq!(data.len(), dim * dim, "entry count must be dim^2");
        ComplexMatrix { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix::new(dim, vec![C64::new(0.0, 0.0); dim * dim])
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m.set(i, i, z);
        }
        m
    }

    /// Build from f64 pairs `(re, im)` in row-major order.
    pub fn from_pairs(dim: usize, pairs: &[(f64, f64)]) -> Self {
        let data = pairs.iter().map(|&(re, im)| C64::new(re, im)).collect();
        ComplexMatrix::new(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix::new(self.dim, data)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix::new(self.dim, data)
    }

    pub fn scale(&self, z: C64) -> ComplexMatrix {
        let data = self.data.iter().map(|a| a * z).collect();
        ComplexMatrix::new(self.dim, data)
    }

    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn dist(&self, other: &ComplexMatrix) -> f64 {
        self.sub(other).frobenius_norm()
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.dim == other.dim && self.dist(other) <= tol
    }

    pub fn commutator_norm(&self, other: &ComplexMatrix) -> f64 {
        self.mul(other).dist(&other.mul(self))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.dist(&self.adjoint()) <= tol
    }

    pub fn is_normal(&self, tol: f64) -> bool {
        let adj = self.adjoint();
        self.mul(&adj).dist(&adj.mul(self)) <= tol
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.mul(self).dist(self) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.mul(&self.adjoint())
            .dist(&ComplexMatrix::identity(self.dim))
            <= tol
    }

    /// `⟨psi| M |psi⟩` for a vector of matching dimension.
    pub fn expectation(&self, psi: &[C64]) -> C64 {
        assert_eq!(psi.len(), self.dim);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += psi[i].conj() * self.get(i, j) * psi[j];
            }
        }
        acc
    }
}

/// Orthogonal projection with its rank recorded.
#[derive(Debug, Clone)]
pub struct Projector {
    matrix: ComplexMatrix,
    rank: usize,
}

impl Projector {
    pub fn from_matrix(matrix: ComplexMatrix, tol: f64) -> Result<Self, LinopsError> {
        let herm = matrix.dist(&matrix.adjoint());
        if herm > tol {
            return Err(LinopsError::NonHermitianInput { residual: herm });
        }
        let idem = matrix.mul(&matrix).dist(&matrix);
        if idem > tol {
            return Err(LinopsError::InvalidSpectralData(format!(
                "not idempotent (residual {idem:.3e})"
            )));
        }
        let tr = matrix.trace().re;
        let rank = tr.round();
        if (tr - rank).abs() > 0.5_f64.min(100.0 * tol * matrix.dim() as f64) {
            return Err(LinopsError::InvalidSpectralData(format!(
                "trace {tr} is not close to an integer"
            )));
        }
        Ok(Projector {
            matrix,
            rank: rank as usize,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Projector {
            matrix: ComplexMatrix::zeros(dim),
            rank: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projector {
            matrix: ComplexMatrix::identity(dim),
            rank: dim,
        }
    }

    /// Rank-one projector `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn from_vector(v: &[C64]) -> Self {
        let n = v.len();
        let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!(norm_sqr > 0.0, "cannot project onto the zero vector");
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, v[i] * v[j].conj() / norm_sqr);
            }
        }
        Projector { matrix: m, rank: 1 }
    }

    /// Diagonal 0/1 projector from a mask over basis indices.
    pub fn from_diag_mask(dim: usize, mask: &[bool]) -> Self {
        assert_eq!(mask.len(), dim);
        let mut m = ComplexMatrix::zeros(dim);
        let mut rank = 0;
        for (i, &on) in mask.iter().enumerate() {
            if on {
                m.set(i, i, C64::new(1.0, 0.0));
                rank += 1;
            }
        }
        Projector { matrix: m, rank }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Range equality within `tol`.
    pub fn approx_eq(&self, other: &Projector, tol: f64) -> bool {
        self.matrix.approx_eq(&other.matrix, tol)
    }

    /// Range inclusion `self ≤ other`, tested as `‖O·S − S‖_F ≤ tol`.
    pub fn leq(&self, other: &Projector, tol: f64) -> bool {
        other.matrix.mul(&self.matrix).dist(&self.matrix) <= tol
    }

    pub fn orthogonal_to(&self, other: &Projector, tol: f64) -> bool {
        self.matrix.mul(&other.matrix).frobenius_norm() <= tol
    }

    /// Orthogonal sum. Caller is responsible for mutual orthogonality.
    pub fn orthogonal_sum(&self, other: &Projector) -> Projector {
        Projector {
            matrix: self.matrix.add(&other.matrix),
            rank: self.rank + other.rank,
        }
    }

    pub fn complement(&self) -> Projector {
        Projector {
            matrix: ComplexMatrix::identity(self.dim()).sub(&self.matrix),
            rank: self.dim() - self.rank,
        }
    }
}

/// Normal operator held as eigenvalue/eigenprojector pairs.
///
/// Pairs are kept sorted by rank order of the eigenvalue (then by real
/// and imaginary part) so that derived data is deterministic.
#[derive(Debug, Clone)]
pub struct SpectralData {
    dim: usize,
    pairs: Vec<(C64, Projector)>,
}

fn eig_sort_key(z: &C64) -> (f64, f64, f64) {
    (z.re + z.im, z.re, z.im)
}

impl SpectralData {
    /// Build from explicit pairs, validating the resolution-of-identity
    /// invariants. This is the exact-fixture entry point that bypasses
    /// the eigensolver.
    pub fn from_pairs(pairs: Vec<(C64, Projector)>, tol: f64) -> Result<Self, LinopsError> {
        if pairs.is_empty() {
            return Err(LinopsError::InvalidSpectralData("no pairs".into()));
        }
        let dim = pairs[0].1.dim();
        let mut sum = ComplexMatrix::zeros(dim);
        for (i, (_, p)) in pairs.iter().enumerate() {
            if p.dim() != dim {
                return Err(LinopsError::DimensionMismatch(p.dim(), dim));
            }
            sum = sum.add(p.matrix());
            for (j, (_, q)) in pairs.iter().enumerate() {
                if i != j && !p.orthogonal_to(q, tol) {
                    return Err(LinopsError::InvalidSpectralData(format!(
                        "projectors {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        if !sum.approx_eq(&ComplexMatrix::identity(dim), tol.max(1e-9 * dim as f64)) {
            return Err(LinopsError::InvalidSpectralData(
                "projectors do not sum to the identity".into(),
            ));
        }
        for i in 0..pairs.len() {
            for j in (i + 1)..pairs.len() {
                if (pairs[i].0 - pairs[j].0).norm() <= tol {
                    return Err(LinopsError::InvalidSpectralData(format!(
                        "eigenvalues {} and {} coincide",
                        pairs[i].0, pairs[j].0
                    )));
                }
            }
        }
        let mut pairs = pairs;
        pairs.sort_by(|a, b| eig_sort_key(&a.0).partial_cmp(&eig_sort_key(&b.0)).unwrap());
        Ok(SpectralData { dim, pairs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[(C64, Projector)] {
        &self.pairs
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        self.pairs.iter().map(|(z, _)| *z).collect()
    }

    /// `Σ λ_k P_k`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim);
        for (z, p) in &self.pairs {
            m = m.add(&p.matrix().scale(*z));
        }
        m
    }

    /// Spectral data of `-A`: eigenvalues negated, projectors shared.
    pub fn negated(&self) -> SpectralData {
        let mut pairs: Vec<_> = self.pairs.iter().map(|(z, p)| (-z, p.clone())).collect();
        pairs.sort_by(|a, b| eig_sort_key(&a.0).partial_cmp(&eig_sort_key(&b.0)).unwrap());
        SpectralData {
            dim: self.dim,
            pairs,
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.reconstruct().frobenius_norm()
    }
}

/// Gap clustering: ascending cluster representatives (mean of each
/// cluster) together with the member indices into `values`. Values
/// whose consecutive sorted gaps stay within `gap` share a cluster.
fn cluster_values(values: &[f64], gap: f64) -> Vec<(f64, Vec<usize>)> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for idx in order {
        match clusters.last_mut() {
            Some(group) if values[idx] - values[*group.last().unwrap()] <= gap => group.push(idx),
            _ => clusters.push(vec![idx]),
        }
    }
    clusters
        .into_iter()
        .map(|members| {
            let mean = members.iter().map(|&i| values[i]).sum::<f64>() / members.len() as f64;
            (mean, members)
        })
        .collect()
}

/// Two-parameter spectral family `P(ε, η) = P₁(ε)·P₂(η)` of a normal
/// operator, stored through the spectral data of its two commuting
/// Hermitian parts.
#[derive(Debug, Clone)]
pub struct TwoParamSpectralFamily {
    dim: usize,
    re_part: SpectralData,
    im_part: SpectralData,
}

impl TwoParamSpectralFamily {
    /// Derive the family from joint spectral data, clustering the real
    /// and imaginary coordinates of the eigenvalues into cuts.
    pub fn from_joint(joint: &SpectralData, gap: f64) -> Result<Self, LinopsError> {
        let dim = joint.dim();
        let group = |pick: &dyn Fn(&C64) -> f64| -> Result<SpectralData, LinopsError> {
            let coords: Vec<f64> = joint.pairs().iter().map(|(z, _)| pick(z)).collect();
            let mut pairs = Vec::new();
            for (cut, members) in cluster_values(&coords, gap) {
                let mut proj = Projector::zero(dim);
                for &k in &members {
                    proj = proj.orthogonal_sum(&joint.pairs()[k].1);
                }
                pairs.push((C64::new(cut, 0.0), proj));
            }
            // Invariants (orthogonality, sum to identity) are inherited
            // from the joint data; revalidate cheaply.
            SpectralData::from_pairs(pairs, default_tol(joint.frobenius_norm()).max(1e-9))
        };
        Ok(TwoParamSpectralFamily {
            dim,
            re_part: group(&|z| z.re)?,
            im_part: group(&|z| z.im)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn re_part(&self) -> &SpectralData {
        &self.re_part
    }

    pub fn im_part(&self) -> &SpectralData {
        &self.im_part
    }

    /// Jump positions of the ε factor, ascending.
    pub fn real_cuts(&self) -> Vec<f64> {
        self.re_part.pairs().iter().map(|(z, _)| z.re).collect()
    }

    /// Jump positions of the η factor, ascending.
    pub fn imag_cuts(&self) -> Vec<f64> {
        self.im_part.pairs().iter().map(|(z, _)| z.re).collect()
    }

    /// `P₁(ε)` — sum of re-part projectors with eigenvalue ≤ ε.
    pub fn re_factor(&self, eps: f64) -> Projector {
        step_sum(&self.re_part, eps)
    }

    /// `P₂(η)`.
    pub fn im_factor(&self, eta: f64) -> Projector {
        step_sum(&self.im_part, eta)
    }

    /// `P(ε, η) = P₁(ε)·P₂(η)`; the factors commute so the product is a
    /// projection.
    pub fn evaluate(&self, eps: f64, eta: f64) -> Projector {
        let p = self.re_factor(eps);
        let q = self.im_factor(eta);
        let m = p.matrix().mul(q.matrix());
        let rank = m.trace().re.round() as usize;
        Projector { matrix: m, rank }
    }
}

fn step_sum(part: &SpectralData, cut: f64) -> Projector {
    let mut proj = Projector::zero(part.dim());
    for (z, p) in part.pairs() {
        if z.re <= cut + 1e-12 {
            proj = proj.orthogonal_sum(p);
        }
    }
    proj
}

/// Split a normal operator into commuting Hermitian parts
/// `(C + C†)/2` and `(C − C†)/(2i)`.
pub fn split_normal(
    c: &ComplexMatrix,
    tol: f64,
) -> Result<(ComplexMatrix, ComplexMatrix), LinopsError> {
    let adj = c.adjoint();
    let residual = c.mul(&adj).dist(&adj.mul(c));
    if residual > tol {
        return Err(LinopsError::NonNormalInput { residual });
    }
    let re = c.add(&adj).scale(C64::new(0.5, 0.0));
    let im = c.sub(&adj).scale(C64::new(0.0, -0.5));
    Ok((re, im))
}

/// Cyclic Jacobi diagonalisation of a Hermitian matrix. Returns the
/// (unsorted) real eigenvalues and the unitary whose columns are the
/// eigenvectors.
fn jacobi_hermitian(h: &ComplexMatrix, tol: f64) -> Result<(Vec<f64>, ComplexMatrix), LinopsError> {
    let herm_res = h.dist(&h.adjoint());
    if herm_res > tol {
        return Err(LinopsError::NonHermitianInput { residual: herm_res });
    }
    let n = h.dim();
    let mut a = h.clone();
    // Symmetrise exactly to keep the iteration honest.
    let adj = a.adjoint();
    a = a.add(&adj).scale(C64::new(0.5, 0.0));
    let mut vecs = ComplexMatrix::identity(n);
    let norm = a.frobenius_norm().max(1.0);
    // Quadratic convergence is cheap, so iterate to machine precision;
    // the caller-supplied tolerance is the acceptance threshold.
    let target = norm * n as f64 * f64::EPSILON;
    let accept = (tol * norm).max(target);

    let off = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    for _ in 0..MAX_SWEEPS {
        if off(&a) <= target {
            let vals = (0..n).map(|i| a.get(i, i).re).collect();
            return Ok((vals, vecs));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a.get(p, q);
                let b = beta.norm();
                if b <= target / (n as f64) {
                    continue;
                }
                let alpha = a.get(p, p).re;
                let gamma = a.get(q, q).re;
                let phase = beta / b; // e^{iφ}
                                      // Real Jacobi angle for [[α, b], [b, γ]].
                let tau = (alpha - gamma) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cos = 1.0 / (1.0 + t * t).sqrt();
                let sin = t * cos;
                // Unitary differs from identity only in the (p,q) plane:
                //   V[p][p] = c, V[p][q] = -conj(s), V[q][p] = s, V[q][q] = c
                // with s = sinθ·e^{-iφ}; then (V† A V)[p][q] = 0.
                let s = phase.conj() * sin;
                // A ← V† A V, applied as row and column updates.
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, apj * cos + aqj * s.conj());
                    a.set(q, j, -apj * s + aqj * cos);
                }
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * cos + aiq * s);
                    a.set(i, q, -aip * s.conj() + aiq * cos);
                }
                for i in 0..n {
                    let vip = vecs.get(i, p);
                    let viq = vecs.get(i, q);
                    vecs.set(i, p, vip * cos + viq * s);
                    vecs.set(i, q, -vip * s.conj() + viq * cos);
                }
            }
        }
    }
    if off(&a) <= accept {
        let vals = (0..n).map(|i| a.get(i, i).re).collect();
        return Ok((vals, vecs));
    }
    Err(LinopsError::NoConvergence(MAX_SWEEPS))
}

fn projector_from_columns(vecs: &ComplexMatrix, cols: &[usize]) -> Projector {
    let n = vecs.dim();
    let mut m = ComplexMatrix::zeros(n);
    for &c in cols {
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j) + vecs.get(i, c) * vecs.get(j, c).conj();
                m.set(i, j, v);
            }
        }
    }
    Projector {
        matrix: m,
        rank: cols.len(),
    }
}

/// Eigendecomposition of a Hermitian matrix into clustered eigenvalues
/// and orthogonal eigenprojectors.
pub fn hermitian_eigendecomposition(
    h: &ComplexMatrix,
    tol: f64,
) -> Result<SpectralData, LinopsError> {
    let (vals, vecs) = jacobi_hermitian(h, tol)?;
    let gap = eigengap(h.frobenius_norm());
    let mut pairs = Vec::new();
    for (cut, cols) in cluster_values(&vals, gap) {
        pairs.push((C64::new(cut, 0.0), projector_from_columns(&vecs, &cols)));
    }
    SpectralData::from_pairs(pairs, default_tol(h.frobenius_norm()))
}

/// Joint spectral decomposition of a normal operator: diagonalise the
/// Hermitian part, then diagonalise the restriction of the
/// anti-Hermitian part inside each eigenspace.
pub fn normal_spectral_decomposition(
    c: &ComplexMatrix,
    tol: f64,
) -> Result<(SpectralData, TwoParamSpectralFamily), LinopsError> {
    let (re, im) = split_normal(c, tol)?;
    let n = c.dim();
    let norm = c.frobenius_norm();
    let gap = eigengap(norm);

    let (re_vals, re_vecs) = jacobi_hermitian(&re, tol)?;

    let mut joint_pairs: Vec<(C64, Projector)> = Vec::new();
    for (eps, cols) in cluster_values(&re_vals, gap) {
        let m = cols.len();
        // Restriction of the imaginary part to this eigenspace.
        let mut restricted = ComplexMatrix::zeros(m);
        for (a, &ca) in cols.iter().enumerate() {
            for (b, &cb) in cols.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        acc += re_vecs.get(i, ca).conj() * im.get(i, j) * re_vecs.get(j, cb);
                    }
                }
                restricted.set(a, b, acc);
            }
        }
        let (im_vals, im_vecs) = jacobi_hermitian(&restricted, tol.max(default_tol(norm)))?;
        for (eta, sub_cols) in cluster_values(&im_vals, gap) {
            // Lift the sub-eigenvectors back to the full space.
            let mut lifted = ComplexMatrix::zeros(n);
            for (slot, &sc) in sub_cols.iter().enumerate() {
                for i in 0..n {
                    let mut acc = C64::new(0.0, 0.0);
                    for (a, &ca) in cols.iter().enumerate() {
                        acc += re_vecs.get(i, ca) * im_vecs.get(a, sc);
                    }
                    lifted.set(i, slot, acc);
                }
            }
            let slots: Vec<usize> = (0..sub_cols.len()).collect();
            joint_pairs.push((C64::new(eps, eta), projector_from_columns(&lifted, &slots)));
        }
    }
    let joint = SpectralData::from_pairs(joint_pairs, default_tol(norm))?;
    let family = TwoParamSpectralFamily::from_joint(&joint, gap)?;
    Ok((joint, family))
}

/// Stieltjes double sum `Σ (ε_j + i·η_k)·ΔΔP` over the cut grid.
pub fn reconstruct_operator(family: &TwoParamSpectralFamily) -> Result<ComplexMatrix, LinopsError> {
    let n = family.dim();
    let tol = default_tol(1.0).max(1e-9 * n as f64);
    let re_cuts = family.real_cuts();
    let im_cuts = family.imag_cuts();
    let mut out = ComplexMatrix::zeros(n);
    for (j, &eps) in re_cuts.iter().enumerate() {
        for (k, &eta) in im_cuts.iter().enumerate() {
            let cur = family.evaluate(eps, eta).matrix().clone();
            let left = if j == 0 {
                ComplexMatrix::zeros(n)
            } else {
                family.evaluate(re_cuts[j - 1], eta).matrix().clone()
            };
            let below = if k == 0 {
                ComplexMatrix::zeros(n)
            } else {
                family.evaluate(eps, im_cuts[k - 1]).matrix().clone()
            };
            let corner = if j == 0 || k == 0 {
                ComplexMatrix::zeros(n)
            } else {
                family
                    .evaluate(re_cuts[j - 1], im_cuts[k - 1])
                    .matrix()
                    .clone()
            };
            let incr = cur.sub(&left).sub(&below).add(&corner);
            if !incr.is_projection(tol.max(1e-7)) {
                return Err(LinopsError::InvalidFamily(j, k));
            }
            out = out.add(&incr.scale(C64::new(eps, eta)));
        }
    }
    Ok(out)
}

/// `U(t) = Σ e^{iλ_k t} P_k` for a Hermitian generator.
pub fn unitary_flow(a: &SpectralData, t: f64, tol: f64) -> Result<ComplexMatrix, LinopsError> {
    let mut out = ComplexMatrix::zeros(a.dim());
    for (z, p) in a.pairs() {
        if z.im.abs() > tol {
            return Err(LinopsError::ComplexEigenvalue(*z));
        }
        let phase = C64::new(0.0, z.re * t).exp();
        out = out.add(&p.matrix().scale(phase));
    }
    Ok(out)
}

/// Deterministic pseudo-random unitary via Gram-Schmidt on a seeded
/// LCG stream; test fixture helper.
#[cfg(test)]
pub(crate) fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    };
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for _ in 0..n {
        let mut v: Vec<C64> = (0..n).map(|_| C64::new(next(), next())).collect();
        for u in &cols {
            let dot: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for i in 0..n {
                v[i] -= dot * u[i];
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= norm;
        }
        cols.push(v);
    }
    let mut m = ComplexMatrix::zeros(n);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            m.set(i, j, col[i]);
        }
    }
    m
}
