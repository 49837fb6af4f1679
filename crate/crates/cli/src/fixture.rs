//! Fixture files: named operators as flat row-major `[re, im]` arrays,
//! optional abstract lattice data, optional context seeds.

use cqv_core::lattice::{FiniteLattice, LatticeSpectralFamily};
use cqv_core::linops::{ComplexMatrix, C64};
use serde::Deserialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("cannot read fixture: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse fixture: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("operator {0}: expected {1} entries, found {2}")]
    BadOperatorShape(String, usize, usize),
    #[error("unknown operator {0}")]
    UnknownOperator(String),
    #[error("unknown abstract element {0}")]
    UnknownElement(String),
    #[error("unknown abstract atom {0}")]
    UnknownAtom(String),
    #[error("unknown context {0}")]
    UnknownContext(String),
    #[error("abstract lattice rejected: {0}")]
    BadLattice(String),
    #[error("abstract family rejected: {0}")]
    BadFamily(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFile {
    pub dimension: usize,
    #[serde(default)]
    pub operators: BTreeMap<String, Vec<[f64; 2]>>,
    #[serde(default)]
    pub context_seeds: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub abstract_lattice: Option<AbstractSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractSpec {
    pub atoms: Vec<String>,
    pub elements: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub operators: BTreeMap<String, AbstractFamilySpec>,
    #[serde(default)]
    pub contexts: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractFamilySpec {
    pub re: Vec<(f64, String)>,
    pub im: Vec<(f64, String)>,
}

impl FixtureFile {
    pub fn load(path: &std::path::Path) -> Result<(Self, Vec<u8>), FixtureError> {
        let bytes = std::fs::read(path)?;
        let fixture: FixtureFile = serde_json::from_slice(&bytes)?;
        fixture.validate()?;
        Ok((fixture, bytes))
    }

    pub fn parse_str(text: &str) -> Result<Self, FixtureError> {
        let fixture: FixtureFile = serde_json::from_str(text)?;
        fixture.validate()?;
        Ok(fixture)
    }

    fn validate(&self) -> Result<(), FixtureError> {
        let n = self.dimension;
        for (name, entries) in &self.operators {
            if entries.len() != n * n {
                return Err(FixtureError::BadOperatorShape(
                    name.clone(),
                    n * n,
                    entries.len(),
                ));
            }
        }
        for ops in self.context_seeds.values() {
            for op in ops {
                if !self.operators.contains_key(op) {
                    return Err(FixtureError::UnknownOperator(op.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn operator(&self, name: &str) -> Result<ComplexMatrix, FixtureError> {
        let entries = self
            .operators
            .get(name)
            .ok_or_else(|| FixtureError::UnknownOperator(name.to_string()))?;
        let data = entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
        Ok(ComplexMatrix::new(self.dimension, data))
    }

    pub fn seed_operators(&self, seed: &str) -> Result<Vec<ComplexMatrix>, FixtureError> {
        let names = self
            .context_seeds
            .get(seed)
            .ok_or_else(|| FixtureError::UnknownContext(seed.to_string()))?;
        names.iter().map(|n| self.operator(n)).collect()
    }
}

/// A resolved abstract family: the lattice data plus the display name
/// used at each step of the two axes.
pub type ResolvedFamily = (LatticeSpectralFamily, Vec<String>, Vec<String>);

/// Abstract lattice data resolved into masks, keeping every name
/// (aliases included) for rendering.
pub struct AbstractLattice {
    pub lattice: FiniteLattice,
    pub atom_names: Vec<String>,
    /// All (name, mask) pairs as given, aliases preserved.
    pub names: Vec<(String, u64)>,
}

impl AbstractLattice {
    pub fn build(spec: &AbstractSpec) -> Result<Self, FixtureError> {
        let atom_names = spec.atoms.clone();
        if atom_names.len() > 30 {
            return Err(FixtureError::BadLattice("too many atoms".into()));
        }
        let atom_index = |a: &str| -> Result<usize, FixtureError> {
            atom_names
                .iter()
                .position(|x| x == a)
                .ok_or_else(|| FixtureError::UnknownAtom(a.to_string()))
        };
        let mut names = Vec::new();
        let mut masks = Vec::new();
        for (name, atoms) in &spec.elements {
            let mut mask = 0u64;
            for a in atoms {
                mask |= 1 << atom_index(a)?;
            }
            names.push((name.clone(), mask));
            masks.push(mask);
        }
        let mut name_map = BTreeMap::new();
        for (name, mask) in &names {
            // First alphabetical name wins for the lattice's own label.
            name_map.entry(*mask).or_insert_with(|| name.clone());
        }
        let lattice = FiniteLattice::from_masks(atom_names.len(), masks, name_map)
            .map_err(|e| FixtureError::BadLattice(e.to_string()))?;
        Ok(AbstractLattice {
            lattice,
            atom_names,
            names,
        })
    }

    pub fn mask_of(&self, name: &str) -> Result<u64, FixtureError> {
        self.names
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| *m)
            .ok_or_else(|| FixtureError::UnknownElement(name.to_string()))
    }

    /// Sub-lattice spanned by named elements (plus 0 and 1).
    pub fn sublattice(&self, element_names: &[String]) -> Result<FiniteLattice, FixtureError> {
        let mut masks = Vec::new();
        let mut name_map = BTreeMap::new();
        for n in element_names {
            let m = self.mask_of(n)?;
            masks.push(m);
            name_map.entry(m).or_insert_with(|| n.clone());
        }
        FiniteLattice::from_masks(self.atom_names.len(), masks, name_map)
            .map_err(|e| FixtureError::BadLattice(e.to_string()))
    }

    /// Resolve an abstract operator family. Returns the lattice family
    /// together with the display names used per axis step.
    pub fn family(&self, spec: &AbstractFamilySpec) -> Result<ResolvedFamily, FixtureError> {
        type Axis = (Vec<f64>, Vec<u64>, Vec<String>);
        let resolve = |steps: &[(f64, String)]| -> Result<Axis, FixtureError> {
            let mut cuts = Vec::new();
            let mut masks = Vec::new();
            let mut names = Vec::new();
            for (cut, name) in steps {
                cuts.push(*cut);
                masks.push(self.mask_of(name)?);
                names.push(name.clone());
            }
            Ok((cuts, masks, names))
        };
        let (re_cuts, re_masks, re_names) = resolve(&spec.re)?;
        let (im_cuts, im_masks, im_names) = resolve(&spec.im)?;
        let fam = LatticeSpectralFamily::new(re_cuts, re_masks, im_cuts, im_masks, &self.lattice)
            .map_err(|e| FixtureError::BadFamily(e.to_string()))?;
        Ok((fam, re_names, im_names))
    }

    /// Display name for a mask on one axis: prefer a name used by that
    /// axis, then any alias, then a generic brace form.
    pub fn display(&self, mask: u64, axis_names: &[String]) -> String {
        if mask == 0 {
            return "0".to_string();
        }
        for n in axis_names {
            if let Ok(m) = self.mask_of(n) {
                if m == mask {
                    return n.clone();
                }
            }
        }
        if let Some((n, _)) = self.names.iter().find(|(_, m)| *m == mask) {
            return n.clone();
        }
        let bits: Vec<&str> = (0..self.atom_names.len())
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| self.atom_names[b].as_str())
            .collect();
        format!("{{{}}}", bits.join(","))
    }
}
