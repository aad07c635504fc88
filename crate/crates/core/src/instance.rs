//! Instance files: a group, a field, a representation and computation limits.
//!
//! ```toml
//! name = "z3_f3"
//! field = "F3"
//!
//! [group]
//! kind = "permutation"          # or "presentation"
//! generators = ["a"]
//! permutations = ["(1 2 3)"]    # presentation: relators = ["a^3"]
//!
//! [representation]
//! kind = "regular"              # "trivial" or "explicit"
//! # dimension = 2
//! # matrices = { a = [[1, 1], [0, 1]] }
//!
//! [subgroup]
//! generators = ["a^2"]
//!
//! [limits]
//! q_max = 3
//! p_max = 2
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::{FieldSpec, Scalar};
use crate::groupalg::{cycle_degree, parse_cycles, AModule, FiniteGroup, GroupAlgebra};
use crate::invariants::Representation;
use crate::linalg::Matrix;
use crate::magnus::memory_cap_from_env;
use crate::words::{parse_word, GroupPresentation, Word};

pub const DEFAULT_Q_MAX: usize = 3;
pub const DEFAULT_P_MAX: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub name: String,
    pub field: String,
    pub group: GroupSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepresentationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<SubgroupSpec>,
    #[serde(default)]
    pub limits: Limits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Presentation,
    Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relators: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub permutations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepresentationKind {
    Trivial,
    Regular,
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationSpec {
    pub kind: RepresentationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub matrices: BTreeMap<String, Vec<Vec<Entry>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSpec {
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    #[serde(default = "default_q_max")]
    pub q_max: usize,
    #[serde(default = "default_p_max")]
    pub p_max: usize,
    /// Truncation degree of the Magnus computation; defaults to `q_max + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub magnus_degree: Option<usize>,
    #[serde(default = "default_enum_cap")]
    pub enum_cap: usize,
}

fn default_q_max() -> usize {
    DEFAULT_Q_MAX
}

fn default_p_max() -> usize {
    DEFAULT_P_MAX
}

fn default_enum_cap() -> usize {
    crate::groupalg::group::DEFAULT_ENUMERATION_CAP
}

impl Default for Limits {
    fn default() -> Self {
        Limits { q_max: DEFAULT_Q_MAX, p_max: DEFAULT_P_MAX, magnus_degree: None, enum_cap: default_enum_cap() }
    }
}

impl Limits {
    pub fn magnus_degree(&self) -> usize {
        self.magnus_degree.unwrap_or(self.q_max + 1)
    }
}

impl InstanceSpec {
    pub fn parse(text: &str) -> Result<Self, Error> {
        toml::from_str(text).map_err(|e| Error::Instance(e.to_string().trim_end().to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("instance specs serialize")
    }
}

/// The group of an instance.
#[derive(Clone, Debug)]
pub enum GroupData {
    Presentation(GroupPresentation),
    Finite(Arc<FiniteGroup>),
}

/// A validated instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub field: FieldSpec,
    pub group: GroupData,
    pub representation: Representation,
    pub subgroup: Option<Vec<Word>>,
    pub memory_cap: u128,
}

impl Instance {
    pub fn parse(text: &str) -> Result<Self, Error> {
        Self::from_spec(InstanceSpec::parse(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Instance(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Instance(msg) => Error::Instance(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_spec(spec: InstanceSpec) -> Result<Self, Error> {
        let field = FieldSpec::parse_tag(&spec.field)?;
        let names = spec.group.generators.clone();
        let group = match spec.group.kind {
            GroupKind::Presentation => {
                if !spec.group.permutations.is_empty() {
                    return Err(Error::Instance("group.permutations given for a presentation".into()));
                }
                let relators = spec
                    .group
                    .relators
                    .iter()
                    .enumerate()
                    .map(|(i, r)| parse_word(r, &names).map_err(|e| located(&format!("group.relators[{i}]"), r, e)))
                    .collect::<Result<Vec<_>, _>>()?;
                GroupData::Presentation(GroupPresentation::new(names.clone(), relators)?)
            }
            GroupKind::Permutation => {
                if !spec.group.relators.is_empty() {
                    return Err(Error::Instance("group.relators given for a permutation group".into()));
                }
                if spec.group.permutations.len() != names.len() {
                    return Err(Error::Instance(format!(
                        "group: {} generators but {} permutations",
                        names.len(),
                        spec.group.permutations.len()
                    )));
                }
                let degree = spec
                    .group
                    .degree
                    .unwrap_or_else(|| spec.group.permutations.iter().map(|p| cycle_degree(p)).max().unwrap_or(0));
                let perms = spec
                    .group
                    .permutations
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        parse_cycles(p, degree).map_err(|e| Error::Instance(format!("group.permutations[{i}]: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                // validates generator names as a side effect
                GroupPresentation::new(names.clone(), Vec::new())?;
                GroupData::Finite(Arc::new(FiniteGroup::enumerate(&names, &perms, spec.limits.enum_cap)?))
            }
        };
        let representation = build_representation(&spec, field, &group)?;
        let subgroup = match &spec.subgroup {
            None => None,
            Some(s) => Some(
                s.generators
                    .iter()
                    .enumerate()
                    .map(|(i, w)| parse_word(w, &names).map_err(|e| located(&format!("subgroup.generators[{i}]"), w, e)))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        Ok(Instance { spec, field, group, representation, subgroup, memory_cap: memory_cap_from_env() })
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn limits(&self) -> &Limits {
        &self.spec.limits
    }

    pub fn finite_group(&self) -> Option<&Arc<FiniteGroup>> {
        match &self.group {
            GroupData::Finite(g) => Some(g),
            GroupData::Presentation(_) => None,
        }
    }

    pub fn algebra(&self) -> Option<GroupAlgebra> {
        self.finite_group().map(|g| GroupAlgebra::new(g.clone(), self.field))
    }

    /// The presentation used for words, `Hom(Γ, R)` and Fox calculus.
    pub fn presentation(&self) -> &GroupPresentation {
        self.representation.presentation()
    }
}

fn located(path: &str, text: &str, e: crate::error::WordError) -> Error {
    Error::Instance(format!("{path} = {text:?}: {e}"))
}

fn build_representation(spec: &InstanceSpec, field: FieldSpec, group: &GroupData) -> Result<Representation, Error> {
    let default = RepresentationSpec { kind: RepresentationKind::Trivial, dimension: None, matrices: BTreeMap::new() };
    let rs = spec.representation.as_ref().unwrap_or(&default);
    if rs.kind != RepresentationKind::Explicit && !rs.matrices.is_empty() {
        return Err(Error::Instance("representation.matrices given for a non-explicit representation".into()));
    }
    match (rs.kind, group) {
        (RepresentationKind::Trivial, GroupData::Presentation(p)) => {
            Ok(Representation::trivial(p.clone(), field, rs.dimension.unwrap_or(1)))
        }
        (RepresentationKind::Trivial, GroupData::Finite(g)) => {
            let d = rs.dimension.unwrap_or(1);
            let id = Matrix::identity(field, d);
            let gens = vec![id; g.generators().len()];
            Ok(Representation::from_group_matrices(g.clone(), field, d, &gens)?)
        }
        (RepresentationKind::Regular, GroupData::Finite(g)) => {
            let alg = GroupAlgebra::new(g.clone(), field);
            if rs.dimension.is_some_and(|d| d != alg.dim()) {
                return Err(Error::Instance(format!("representation.dimension must equal the group order {}", alg.dim())));
            }
            Ok(Representation::from_module(AModule::regular(alg)))
        }
        (RepresentationKind::Regular, GroupData::Presentation(_)) => {
            Err(Error::Instance("the regular representation needs a permutation group".into()))
        }
        (RepresentationKind::Explicit, _) => {
            let names = &spec.group.generators;
            if let Some(extra) = rs.matrices.keys().find(|k| !names.contains(k)) {
                return Err(Error::Instance(format!("representation.matrices.{extra}: unknown generator")));
            }
            let dim = match rs.dimension {
                Some(d) => d,
                None => rs.matrices.values().next().map(Vec::len).unwrap_or(0),
            };
            let mut mats = Vec::with_capacity(names.len());
            for name in names {
                let rows = rs
                    .matrices
                    .get(name)
                    .ok_or_else(|| Error::Instance(format!("representation.matrices.{name}: missing")))?;
                mats.push(parse_matrix(field, dim, rows).map_err(|msg| {
                    Error::Instance(format!("representation.matrices.{name}{msg}"))
                })?);
            }
            match group {
                GroupData::Presentation(p) => Ok(Representation::from_presentation(p.clone(), field, dim, mats)?),
                GroupData::Finite(g) => Ok(Representation::from_group_matrices(g.clone(), field, dim, &mats)?),
            }
        }
    }
}

fn parse_matrix(field: FieldSpec, dim: usize, rows: &[Vec<Entry>]) -> Result<Matrix, String> {
    if rows.len() != dim {
        return Err(format!(": expected {dim} rows, found {}", rows.len()));
    }
    let mut out = Vec::with_capacity(dim);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(format!("[{i}]: expected {dim} entries, found {}", row.len()));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, e)| parse_entry(field, e).map_err(|msg| format!("[{i}][{j}]: {msg}")))
            .collect::<Result<Vec<Scalar>, _>>()?;
        out.push(parsed);
    }
    Matrix::from_rows(field, dim, out).map_err(|e| format!(": {e}"))
}

fn parse_entry(field: FieldSpec, e: &Entry) -> Result<Scalar, String> {
    match e {
        Entry::Int(n) => Ok(field.from_i64(*n)),
        Entry::Text(s) => field.parse_scalar(s).map_err(|e| e.to_string()),
    }
}
