//! Cuspidal label registry: the quadratic character space, the labels that
//! Jordan sets may name, and named cuspidal reducibility datasets.
//!
//! The TOML layout is
//!
//! ```toml
//! series = "SO"      # series the base_parity values are declared for
//! quad_dim = 2
//!
//! [[label]]
//! id = "triv"
//! gl_rank = 1
//! phi_type = "orthogonal"
//! central_char = "00"
//! base_parity = "even"
//!
//! [[reducibility]]
//! name = "ex-triv"
//! rho = "triv"
//! pi = "1_SO(1)"
//! points = ["1/2"]
//! ```
//!
//! Other top-level tables (fixtures, for instance) are ignored here.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::jordan::{parse_family_and_set, JordanSet};
use crate::label::{
    CuspidalLabel, GroupFamily, GroupKind, Parity, PhiType, QuadChar, QuadCharSpace,
};
use crate::reducibility::CuspidalReducibilityData;

/// The registry shipped with the crate, including the example fixtures.
pub const BUILTIN_TOML: &str = include_str!("../data/registry.toml");

#[derive(Debug, Deserialize)]
struct RegistryFile {
    #[serde(default = "default_series")]
    series: GroupKind,
    #[serde(default = "default_quad_dim")]
    quad_dim: u8,
    #[serde(default)]
    label: Vec<LabelRecord>,
    #[serde(default)]
    reducibility: Vec<ReducibilityRecord>,
}

fn default_series() -> GroupKind {
    GroupKind::SoOdd
}

fn default_quad_dim() -> u8 {
    2
}

#[derive(Debug, Deserialize)]
struct LabelRecord {
    id: String,
    gl_rank: u32,
    phi_type: PhiType,
    central_char: String,
    base_parity: Parity,
}

#[derive(Debug, Deserialize)]
struct ReducibilityRecord {
    name: String,
    rho: String,
    pi: String,
    points: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Registry {
    series: GroupKind,
    quad: QuadCharSpace,
    labels: BTreeMap<String, Arc<CuspidalLabel>>,
    reducibility: BTreeMap<String, CuspidalReducibilityData>,
}

impl Registry {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: RegistryFile =
            toml::from_str(text).map_err(|e| Error::Registry(e.to_string()))?;
        let quad = QuadCharSpace::new(file.quad_dim)?;
        let mut labels = BTreeMap::new();
        for rec in file.label {
            let central_char = quad.parse_char(&rec.central_char)?;
            let label = CuspidalLabel::new(
                rec.id,
                rec.gl_rank,
                rec.phi_type,
                central_char,
                rec.base_parity,
            )?;
            if labels.contains_key(&label.id) {
                return Err(Error::Registry(format!(
                    "duplicate label id {:?}",
                    label.id
                )));
            }
            labels.insert(label.id.clone(), Arc::new(label));
        }
        let mut reg = Registry {
            series: file.series,
            quad,
            labels,
            reducibility: BTreeMap::new(),
        };
        for rec in file.reducibility {
            let rho = reg.lookup(&rec.rho)?;
            let points = rec
                .points
                .iter()
                .map(|p| p.parse::<HalfInt>())
                .collect::<Result<Vec<_>>>()?;
            let data = CuspidalReducibilityData::new(rho, rec.pi, points)?;
            if reg.reducibility.insert(rec.name.clone(), data).is_some() {
                return Err(Error::Registry(format!(
                    "duplicate reducibility dataset {:?}",
                    rec.name
                )));
            }
        }
        Ok(reg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Registry(format!("{}: {e}", path.display())))?;
        Registry::from_toml_str(&text)
    }

    pub fn builtin() -> Self {
        Registry::from_toml_str(BUILTIN_TOML).expect("built-in registry parses")
    }

    pub fn series(&self) -> GroupKind {
        self.series
    }

    pub fn quad_space(&self) -> QuadCharSpace {
        self.quad
    }

    pub fn labels(&self) -> impl Iterator<Item = &Arc<CuspidalLabel>> {
        self.labels.values()
    }

    pub fn lookup(&self, id: &str) -> Result<Arc<CuspidalLabel>> {
        self.labels
            .get(id)
            .cloned()
            .ok_or_else(|| Error::UnknownLabel(id.to_string()))
    }

    /// The label of the trivial character of GL(1).
    pub fn trivial(&self) -> Result<Arc<CuspidalLabel>> {
        self.labels
            .values()
            .find(|l| l.is_trivial_character())
            .cloned()
            .ok_or_else(|| Error::Registry("no label for the trivial character of GL(1)".into()))
    }

    /// The GL(1) label with the given quadratic character.
    pub fn quadratic(&self, ch: QuadChar) -> Result<Arc<CuspidalLabel>> {
        self.labels
            .values()
            .find(|l| l.gl_rank == 1 && l.central_char == ch)
            .cloned()
            .ok_or_else(|| {
                Error::Registry(format!(
                    "no GL(1) label for character {}",
                    self.quad.format_char(ch)
                ))
            })
    }

    pub fn reducibility(&self, name: &str) -> Result<&CuspidalReducibilityData> {
        self.reducibility
            .get(name)
            .ok_or_else(|| Error::Registry(format!("unknown reducibility dataset {name:?}")))
    }

    pub fn reducibility_sets(&self) -> impl Iterator<Item = (&String, &CuspidalReducibilityData)> {
        self.reducibility.iter()
    }

    /// Parses `Sp4: triv:1, triv:3` against this registry.
    pub fn parse_jordan(&self, text: &str) -> Result<(GroupFamily, JordanSet)> {
        parse_family_and_set(text, |id| self.lookup(id))
    }

    /// Parses a block list without family prefix.
    pub fn parse_blocks(&self, text: &str) -> Result<JordanSet> {
        JordanSet::parse_blocks(text, |id| self.lookup(id))
    }
}
