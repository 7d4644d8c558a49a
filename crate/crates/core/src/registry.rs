//! Named sheaf models, pair classes and the recorded cohomology facts they
//! are checked against.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cohom::{
    self, CohomologyHints, CohomologyProfile, LinearHilbertPolynomial, PartialProfile, Sheaf,
    SheafModel,
};
use crate::error::{CohomError, PairsError, RegistryError};
use crate::poly::{q_int, PoincarePolynomial};

pub const REGISTRY_ENV: &str = "WALLCROSS_REGISTRY";

const EMBEDDED: &str = include_str!("../data/registry.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelEntry {
    pub model: SheafModel,
    pub stable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairClassEntry {
    pub name: String,
    pub sheaf: String,
    pub gamma_dim: u32,
    /// Projective dimensions whose product is the moduli space of the class.
    pub base: Vec<u32>,
    /// `dim Ext¹(Λ, Λ)`, the tangent dimension of the moduli of the class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent_ext1: Option<u64>,
}

/// Cohomology of `⊕ model(twist)` over the listed twists.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CohomologyFact {
    pub model: String,
    pub twists: Vec<(i64, i64)>,
    #[serde(flatten)]
    pub dims: PartialProfile,
}

/// `dim Hom(from(twist), to(twist))`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomFact {
    pub from: (String, (i64, i64)),
    pub to: (String, (i64, i64)),
    pub dim: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegistryFile {
    pub version: u32,
    pub models: BTreeMap<String, ModelEntry>,
    pub pair_classes: Vec<PairClassEntry>,
    #[serde(default)]
    pub cohomology_facts: Vec<CohomologyFact>,
    #[serde(default)]
    pub hom_facts: Vec<HomFact>,
}

/// A pair class resolved against its model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass {
    pub name: String,
    pub sheaf: Sheaf,
    pub gamma_dim: u32,
    pub hilbert: LinearHilbertPolynomial,
    pub base: Vec<u32>,
    pub tangent_ext1: Option<u64>,
}

impl PairClass {
    pub fn base_poincare(&self) -> PoincarePolynomial {
        self.base
            .iter()
            .map(|d| q_int(d + 1).expect("d + 1 > 0"))
            .product()
    }

    /// The class on the other side of the factor swap, named with a prime.
    pub fn swap(&self) -> Self {
        Self {
            name: format!("{}'", self.name),
            sheaf: self.sheaf.swap(),
            gamma_dim: self.gamma_dim,
            hilbert: self.hilbert.swap(),
            base: self.base.clone(),
            tangent_ext1: self.tangent_ext1,
        }
    }
}

/// Immutable after load.
#[derive(Clone, Debug)]
pub struct Registry {
    file: RegistryFile,
    classes: Vec<PairClass>,
    hints: CohomologyHints,
}

impl Registry {
    pub fn embedded() -> Result<Self, RegistryError> {
        Self::from_json_str(EMBEDDED)
    }

    pub fn from_path(path: &Path) -> Result<Self, RegistryError> {
        let text = std::fs::read_to_string(path).map_err(|source| RegistryError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    /// Explicit path, then `WALLCROSS_REGISTRY`, then the embedded copy.
    pub fn load(path: Option<&Path>) -> Result<Self, RegistryError> {
        match path {
            Some(p) => Self::from_path(p),
            None => match std::env::var_os(REGISTRY_ENV) {
                Some(p) if !p.is_empty() => Self::from_path(Path::new(&p)),
                _ => Self::embedded(),
            },
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, RegistryError> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn from_file(file: RegistryFile) -> Result<Self, RegistryError> {
        for (name, entry) in &file.models {
            entry.model.validate().map_err(|e| RegistryError::Invalid {
                name: name.clone(),
                detail: e.to_string(),
            })?;
        }
        let mut classes = Vec::with_capacity(file.pair_classes.len());
        for c in &file.pair_classes {
            let entry = file
                .models
                .get(&c.sheaf)
                .ok_or_else(|| RegistryError::UnknownModel(c.sheaf.clone()))?;
            let hilbert = cohom::hilbert_polynomial(&entry.model)?;
            let class = PairClass {
                name: c.name.clone(),
                sheaf: Sheaf::new(entry.model.clone(), entry.stable),
                gamma_dim: c.gamma_dim,
                hilbert,
                base: c.base.clone(),
                tangent_ext1: c.tangent_ext1,
            };
            let h0 = cohom::sheaf_cohomology(&class.sheaf.model, (0, 0))?.h0;
            if u64::from(c.gamma_dim) > h0 {
                return Err(RegistryError::Invalid {
                    name: c.name.clone(),
                    detail: format!("gamma_dim {} exceeds h0 = {h0}", c.gamma_dim),
                });
            }
            classes.push(class);
        }
        let mut registry = Registry {
            file,
            classes,
            hints: CohomologyHints::new(),
        };
        registry.check_cohomology_facts()?;
        registry.check_hom_facts()?;
        registry.check_class_dimensions()?;
        Ok(registry)
    }

    /// The base of each class is smooth of dimension `dim Ext¹(Λ, Λ)`: the
    /// recorded tangent dimension for pairs, the chased self-extension for sheaves.
    fn check_class_dimensions(&self) -> Result<(), RegistryError> {
        for c in &self.classes {
            let tangent = match c.tangent_ext1 {
                Some(t) => t,
                None => cohom::ext_dimensions(&c.sheaf, &c.sheaf, &self.hints)?
                    .ext1
                    .ok_or_else(|| RegistryError::Invalid {
                        name: c.name.clone(),
                        detail: "self-extensions are not forced".into(),
                    })?,
            };
            let dim: u64 = c.base.iter().map(|&d| u64::from(d)).sum();
            if dim != tangent {
                return Err(RegistryError::Invalid {
                    name: c.name.clone(),
                    detail: format!("base has dimension {dim}, tangent space {tangent}"),
                });
            }
        }
        Ok(())
    }

    pub fn file(&self) -> &RegistryFile {
        &self.file
    }

    pub fn hints(&self) -> &CohomologyHints {
        &self.hints
    }

    pub fn model(&self, name: &str) -> Result<&ModelEntry, RegistryError> {
        self.file
            .models
            .get(name)
            .ok_or_else(|| RegistryError::UnknownModel(name.to_string()))
    }

    pub fn sheaf(&self, name: &str) -> Result<Sheaf, RegistryError> {
        let e = self.model(name)?;
        Ok(Sheaf::new(e.model.clone(), e.stable))
    }

    pub fn classes(&self) -> &[PairClass] {
        &self.classes
    }

    pub fn class(&self, name: &str) -> Option<&PairClass> {
        self.classes.iter().find(|c| c.name == name)
    }

    /// Finds the class with the given Hilbert polynomial and `Γ` dimension,
    /// falling back to the factor swap of a registered class.
    pub fn lookup(
        &self,
        hilbert: LinearHilbertPolynomial,
        gamma_dim: u32,
    ) -> Result<PairClass, PairsError> {
        let find = |p: LinearHilbertPolynomial| {
            self.classes
                .iter()
                .find(|c| c.hilbert == p && c.gamma_dim == gamma_dim)
        };
        if let Some(c) = find(hilbert) {
            return Ok(c.clone());
        }
        if let Some(c) = find(hilbert.swap()) {
            return Ok(c.swap());
        }
        Err(PairsError::UnregisteredClass {
            hilbert: hilbert.to_string(),
            gamma: gamma_dim,
        })
    }

    fn check_cohomology_facts(&mut self) -> Result<(), RegistryError> {
        let facts = self.file.cohomology_facts.clone();
        // First pass: facts forced by the long exact sequence are checked;
        // single-twist facts at ambiguous twists become hints.
        for fact in &facts {
            let model = self.model(&fact.model)?.model.clone();
            if let [t] = fact.twists.as_slice() {
                if let Err(CohomError::AmbiguousRank { .. }) = cohom::sheaf_cohomology(&model, *t) {
                    self.hints.insert(model.twist(t.0, t.1), fact.dims);
                }
            }
        }
        for fact in &facts {
            let model = self.model(&fact.model)?.model.clone();
            let total: CohomologyProfile = fact
                .twists
                .iter()
                .map(|t| cohom::sheaf_cohomology_with_hints(&model, *t, &self.hints))
                .sum::<Result<_, _>>()?;
            let computed = total.as_array();
            for (i, want) in fact.dims.as_array().into_iter().enumerate() {
                if let Some(w) = want {
                    if w != computed[i] {
                        return Err(RegistryError::FactMismatch {
                            fact: format!("h{i} of {} at {:?} = {w}", fact.model, fact.twists),
                            computed: computed[i].to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_hom_facts(&self) -> Result<(), RegistryError> {
        for fact in &self.file.hom_facts {
            let from = self
                .sheaf(&fact.from.0)?
                .twist(fact.from.1 .0, fact.from.1 .1);
            let to = self.sheaf(&fact.to.0)?.twist(fact.to.1 .0, fact.to.1 .1);
            let dim = cohom::serre_dual_hom_dimension(&from, &to, &self.hints)?;
            if dim != fact.dim {
                return Err(RegistryError::FactMismatch {
                    fact: format!(
                        "dim Hom({}{:?}, {}{:?}) = {}",
                        fact.from.0, fact.from.1, fact.to.0, fact.to.1, fact.dim
                    ),
                    computed: dim.to_string(),
                });
            }
        }
        Ok(())
    }
}
