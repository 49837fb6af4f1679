//! Finite projection lattices presented as subsets of a ground atom
//! set, together with their filters, quasipoints and cones.
//!
//! Every lattice here shares one representation: an element is a
//! bitmask over ground atoms, ordered by subset inclusion. A Boolean
//! lattice carries all masks; an abstract fixture carries a chosen
//! family of masks (closed enough to have pairwise meets and joins),
//! which is how a non-distributive projection lattice such as the one
//! generated by two incompatible bases is modelled without matrices.
//! Sub-lattices over the same ground set embed by mask identity, so a
//! cone is simply an upward closure in the larger element family.

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("lattice too large: {0} elements (limit 64)")]
    TooLarge(usize),
    #[error("elements {0} and {1} have no unique {2}")]
    NotALattice(usize, usize, &'static str),
    #[error("not a sublattice: element mask {0:#b} missing from the larger lattice")]
    NotASublattice(u64),
    #[error("set is not a filter: {0}")]
    NotAFilter(String),
    #[error("spectral family value {0:#b} is not an element of the lattice")]
    FamilyLatticeMismatch(u64),
    #[error("element has no complement in this lattice")]
    NoComplement,
}

/// Finite lattice of ground-atom masks under subset inclusion.
#[derive(Debug, Clone)]
pub struct FiniteLattice {
    ground: usize,
    /// Element masks, ascending; index 0 is ⊥ = ∅, last is ⊤ = full.
    elems: Vec<u64>,
    /// Preferred display name per element, if any.
    names: Vec<Option<String>>,
    meets: Vec<Vec<usize>>,
    joins: Vec<Vec<usize>>,
}

impl FiniteLattice {
    /// Boolean lattice on `k` ground atoms (all `2^k` subsets).
    pub fn boolean(k: usize) -> Result<Self, LatticeError> {
        if k > 6 {
            return Err(LatticeError::TooLarge(1usize << k));
        }
        let elems: Vec<u64> = (0..(1u64 << k)).collect();
        Self::from_masks(k, elems, BTreeMap::new())
    }

    /// Lattice from explicit masks; ⊥ and ⊤ are added when missing.
    /// Fails when some pair of elements lacks a unique meet or join.
    pub fn from_masks(
        ground: usize,
        mut elems: Vec<u64>,
        names: BTreeMap<u64, String>,
    ) -> Result<Self, LatticeError> {
        let full = if ground == 64 {
            u64::MAX
        } else {
            (1u64 << ground) - 1
        };
        elems.push(0);
        elems.push(full);
        elems.sort_unstable();
        elems.dedup();
        if elems.len() > 64 {
            return Err(LatticeError::TooLarge(elems.len()));
        }
        let n = elems.len();
        let mut meets = vec![vec![0; n]; n];
        let mut joins = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                meets[i][j] = unique_bound(&elems, elems[i], elems[j], true)
                    .ok_or(LatticeError::NotALattice(i, j, "meet"))?;
                joins[i][j] = unique_bound(&elems, elems[i], elems[j], false)
                    .ok_or(LatticeError::NotALattice(i, j, "join"))?;
            }
        }
        let names = elems.iter().map(|m| names.get(m).cloned()).collect();
        Ok(FiniteLattice {
            ground,
            elems,
            names,
            meets,
            joins,
        })
    }

    pub fn ground_count(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mask(&self, i: usize) -> u64 {
        self.elems[i]
    }

    pub fn name(&self, i: usize) -> Option<&str> {
        self.names[i].as_deref()
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.elems.binary_search(&mask).ok()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elems.len() - 1
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.elems[i] & !self.elems[j] == 0
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meets[i][j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.joins[i][j]
    }

    /// Orthocomplement: the unique element whose meet is ⊥ and join is
    /// ⊤ and whose mask is the set complement. Boolean lattices always
    /// have it; abstract fixtures must supply it.
    pub fn complement(&self, i: usize) -> Result<usize, LatticeError> {
        let full = self.elems[self.top()];
        self.index_of(full & !self.elems[i])
            .ok_or(LatticeError::NoComplement)
    }

    /// Minimal nonzero elements.
    pub fn atoms(&self) -> Vec<usize> {
        (1..self.len())
            .filter(|&i| (1..self.len()).all(|j| j == i || !(self.leq(j, i) && self.elems[j] != 0)))
            .collect()
    }

    pub fn is_boolean(&self) -> bool {
        self.len() == 1usize << self.ground
    }

    /// Display label: preferred name, else the atom-set braces form.
    pub fn label(&self, i: usize) -> String {
        if let Some(n) = self.name(i) {
            return n.to_string();
        }
        if self.elems[i] == 0 {
            return "0".to_string();
        }
        if i == self.top() {
            return "1".to_string();
        }
        let bits: Vec<String> = (0..self.ground)
            .filter(|b| self.elems[i] & (1 << b) != 0)
            .map(|b| b.to_string())
            .collect();
        format!("{{{}}}", bits.join(","))
    }
}

/// Largest lower bound (`lower = true`) or least upper bound among the
/// element masks, if unique.
fn unique_bound(elems: &[u64], a: u64, b: u64, lower: bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, &e) in elems.iter().enumerate() {
        let qualifies = if lower {
            e & !a == 0 && e & !b == 0
        } else {
            a & !e == 0 && b & !e == 0
        };
        if !qualifies {
            continue;
        }
        best = match best {
            None => Some(k),
            Some(cur) => {
                let (c, e2) = (elems[cur], e);
                let better = if lower { c & !e2 == 0 } else { e2 & !c == 0 };
                let worse = if lower { e2 & !c == 0 } else { c & !e2 == 0 };
                if better && !worse {
                    Some(k)
                } else if worse {
                    Some(cur)
                } else {
                    // Incomparable candidates: check whether a common
                    // dominating candidate exists later; fail for now.
                    return incomparable_bound(elems, a, b, lower);
                }
            }
        };
    }
    best
}

/// Slow path: collect all bounds and verify a unique extremum.
fn incomparable_bound(elems: &[u64], a: u64, b: u64, lower: bool) -> Option<usize> {
    let bounds: Vec<usize> = elems
        .iter()
        .enumerate()
        .filter(|&(_, &e)| {
            if lower {
                e & !a == 0 && e & !b == 0
            } else {
                a & !e == 0 && b & !e == 0
            }
        })
        .map(|(k, _)| k)
        .collect();
    bounds.iter().copied().find(|&k| {
        bounds.iter().all(|&m| {
            if lower {
                elems[m] & !elems[k] == 0
            } else {
                elems[k] & !elems[m] == 0
            }
        })
    })
}

/// Filter of a lattice: member set, stored as a bitmask over element
/// indices. Proper (0 excluded), meet-closed, upward closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Filter {
    members: u64,
}

impl Filter {
    pub fn from_members(lattice: &FiniteLattice, members: u64) -> Result<Self, LatticeError> {
        let f = Filter { members };
        f.validate(lattice)?;
        Ok(f)
    }

    /// Principal filter ↑x.
    pub fn principal(lattice: &FiniteLattice, x: usize) -> Result<Self, LatticeError> {
        if lattice.mask(x) == 0 {
            return Err(LatticeError::NotAFilter("principal filter at 0".into()));
        }
        let mut members = 0u64;
        for j in 0..lattice.len() {
            if lattice.leq(x, j) {
                members |= 1 << j;
            }
        }
        Ok(Filter { members })
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members & (1 << i) != 0
    }

    pub fn members(&self) -> u64 {
        self.members
    }

    pub fn member_indices(&self, lattice: &FiniteLattice) -> Vec<usize> {
        (0..lattice.len()).filter(|&i| self.contains(i)).collect()
    }

    /// Minimum element (finite filters are principal).
    pub fn base(&self, lattice: &FiniteLattice) -> usize {
        let idx = self.member_indices(lattice);
        idx.iter()
            .copied()
            .find(|&i| idx.iter().all(|&j| lattice.leq(i, j)))
            .expect("a finite filter has a minimum")
    }

    pub fn validate(&self, lattice: &FiniteLattice) -> Result<(), LatticeError> {
        if self.members == 0 {
            return Err(LatticeError::NotAFilter("empty".into()));
        }
        if self.contains(lattice.bottom()) {
            return Err(LatticeError::NotAFilter("contains 0".into()));
        }
        let idx = self.member_indices(lattice);
        for &i in &idx {
            for &j in &idx {
                if !self.contains(lattice.meet(i, j)) {
                    return Err(LatticeError::NotAFilter(format!(
                        "not meet-closed at ({i},{j})"
                    )));
                }
            }
            for j in 0..lattice.len() {
                if lattice.leq(i, j) && !self.contains(j) {
                    return Err(LatticeError::NotAFilter(format!(
                        "not upward closed at ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Maximality: no proper filter strictly contains this one.
    pub fn is_maximal(&self, lattice: &FiniteLattice) -> bool {
        let base = self.base(lattice);
        lattice.atoms().contains(&base)
    }
}

/// All proper filters. Finite lattices only have principal filters
/// (any meet-closed set has a minimum), so this is ↑x per nonzero x;
/// each result is validated. The brute-force subset scan lives in the
/// test suite as the independent oracle for this shortcut.
pub fn enumerate_filters(lattice: &FiniteLattice) -> Result<Vec<Filter>, LatticeError> {
    if lattice.len() > 64 {
        return Err(LatticeError::TooLarge(lattice.len()));
    }
    (1..lattice.len())
        .map(|x| {
            let f = Filter::principal(lattice, x)?;
            f.validate(lattice)?;
            Ok(f)
        })
        .collect()
}

/// All quasipoints (maximal filters): principal filters at atoms.
pub fn enumerate_quasipoints(lattice: &FiniteLattice) -> Result<Vec<Filter>, LatticeError> {
    lattice
        .atoms()
        .into_iter()
        .map(|a| Filter::principal(lattice, a))
        .collect()
}

/// Cone of a filter of `small` inside `big` (same ground set): the
/// upward closure of the embedded member masks — the smallest filter
/// of `big` containing the image.
pub fn cone(
    f: &Filter,
    small: &FiniteLattice,
    big: &FiniteLattice,
) -> Result<Filter, LatticeError> {
    for i in 0..small.len() {
        if big.index_of(small.mask(i)).is_none() {
            return Err(LatticeError::NotASublattice(small.mask(i)));
        }
    }
    let mut members = 0u64;
    for j in 0..big.len() {
        let above = (0..small.len()).any(|i| f.contains(i) && small.mask(i) & !big.mask(j) == 0);
        if above {
            members |= 1 << j;
        }
    }
    Filter::from_members(big, members)
}

/// Clopen basis set Q_a(L) = {quasipoints containing a}.
pub fn clopen_basis(lattice: &FiniteLattice, a: usize) -> Result<Vec<Filter>, LatticeError> {
    Ok(enumerate_quasipoints(lattice)?
        .into_iter()
        .filter(|q| q.contains(a))
        .collect())
}

/// Two-parameter spectral family with values in a lattice, stored in
/// factored form: one monotone chain of elements per axis, the family
/// value at (ε, η) being the meet of the two factors.
#[derive(Debug, Clone)]
pub struct LatticeSpectralFamily {
    re_cuts: Vec<f64>,
    re_masks: Vec<u64>,
    im_cuts: Vec<f64>,
    im_masks: Vec<u64>,
}

impl LatticeSpectralFamily {
    pub fn new(
        re_cuts: Vec<f64>,
        re_masks: Vec<u64>,
        im_cuts: Vec<f64>,
        im_masks: Vec<u64>,
        lattice: &FiniteLattice,
    ) -> Result<Self, LatticeError> {
        assert_eq!(re_cuts.len(), re_masks.len());
        assert_eq!(im_cuts.len(), im_masks.len());
        let full = lattice.mask(lattice.top());
        for chain in [&re_masks, &im_masks] {
            for w in chain.windows(2) {
                if w[0] & !w[1] != 0 {
                    return Err(LatticeError::NotAFilter(
                        "family chain is not monotone".into(),
                    ));
                }
            }
            match chain.last() {
                Some(&m) if m == full => {}
                _ => {
                    return Err(LatticeError::NotAFilter(
                        "family chain does not reach the top".into(),
                    ))
                }
            }
            for &m in chain.iter() {
                if lattice.index_of(m).is_none() {
                    return Err(LatticeError::FamilyLatticeMismatch(m));
                }
            }
        }
        Ok(LatticeSpectralFamily {
            re_cuts,
            re_masks,
            im_cuts,
            im_masks,
        })
    }

    pub fn re_cuts(&self) -> &[f64] {
        &self.re_cuts
    }

    pub fn im_cuts(&self) -> &[f64] {
        &self.im_cuts
    }

    pub fn re_mask(&self, j: usize) -> u64 {
        self.re_masks[j]
    }

    pub fn im_mask(&self, k: usize) -> u64 {
        self.im_masks[k]
    }

    /// Factor masks at real coordinate ε (0 below the first cut).
    pub fn re_factor(&self, eps: f64) -> u64 {
        step_mask(&self.re_cuts, &self.re_masks, eps)
    }

    pub fn im_factor(&self, eta: f64) -> u64 {
        step_mask(&self.im_cuts, &self.im_masks, eta)
    }

    /// Family value as a lattice element: meet of the two factors.
    pub fn value(&self, lattice: &FiniteLattice, eps: f64, eta: f64) -> usize {
        let p = lattice
            .index_of(self.re_factor(eps))
            .expect("validated factor");
        let q = lattice
            .index_of(self.im_factor(eta))
            .expect("validated factor");
        lattice.meet(p, q)
    }
}

fn step_mask(cuts: &[f64], masks: &[u64], x: f64) -> u64 {
    let mut out = 0u64;
    for (c, &m) in cuts.iter().zip(masks) {
        if *c <= x + 1e-12 {
            out = m;
        }
    }
    out
}
