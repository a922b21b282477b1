//! JSON model files. Geometry is exact: screw coordinates are rational
//! strings ("p" or "p/q"); floats are rejected.

use crate::exact::{format_rat, parse_rat};
use crate::model::{Joint, JointKind, LinkageModel, ModelError};
use crate::screws::Screw;
use crate::topology::{FundamentalCycle, LinkageGraph};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0} (expected {SCHEMA_VERSION})")]
    SchemaVersion(u32),
    #[error("joint {joint}: malformed rational {value:?}")]
    MalformedRational { joint: u32, value: String },
    #[error("joint {joint}: screw length {len} (expected 6)")]
    ScrewLength { joint: u32, len: usize },
    #[error("duplicate joint id {0}")]
    DuplicateJointId(u32),
    #[error("joint {joint}: unknown vertex {vertex:?}")]
    UnknownVertex { joint: u32, vertex: String },
    #[error("vertex {0:?} is not referenced by any joint")]
    UnreferencedVertex(String),
    #[error("loop {index}: {reason}")]
    LoopNotClosed { index: usize, reason: String },
    #[error("loop {index}: unknown joint id {joint}")]
    LoopUnknownJoint { index: usize, joint: u32 },
    #[error("graph: {0}")]
    Graph(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Minor-enumeration mode for rank stratification, an analysis default that
/// model files may pin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MinorMode {
    #[default]
    Shortcut,
    Sampled,
    Full,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisDefaults {
    #[serde(default = "default_order_cap")]
    pub order_cap: usize,
    #[serde(default)]
    pub minor_mode: MinorMode,
    #[serde(default)]
    pub seed: u64,
}

fn default_order_cap() -> usize {
    6
}

impl Default for AnalysisDefaults {
    fn default() -> Self {
        Self { order_cap: 6, minor_mode: MinorMode::Shortcut, seed: 0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointEntry {
    pub id: u32,
    pub kind: JointKind,
    /// Six rational strings, (angular; linear) ordering.
    pub screw: Vec<String>,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub base: String,
    pub links: Vec<String>,
    pub joints: Vec<JointEntry>,
    /// Optional explicit loops: ordered signed joint ids (sign = traversal
    /// direction). When present they override computed fundamental cycles.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub loops: Vec<Vec<i64>>,
    #[serde(default)]
    pub analysis: AnalysisDefaults,
}

impl ModelFile {
    pub fn from_str(text: &str) -> Result<Self, ModelFileError> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(ModelFileError::SchemaVersion(file.schema_version));
        }
        Ok(file)
    }

    pub fn from_path(path: &Path) -> Result<Self, ModelFileError> {
        Self::from_str(&std::fs::read_to_string(path)?)
    }

    /// Canonical serialization: rationals re-formatted in lowest terms.
    pub fn to_json(&self) -> String {
        let mut normalized = self.clone();
        for j in &mut normalized.joints {
            for s in &mut j.screw {
                if let Some(r) = parse_rat(s) {
                    *s = format_rat(&r);
                }
            }
        }
        serde_json::to_string_pretty(&normalized).expect("model file serializes")
    }

    /// Validates the file and builds the linkage model.
    pub fn to_model(&self) -> Result<LinkageModel, ModelFileError> {
        let mut seen = std::collections::HashSet::new();
        let mut joints = Vec::with_capacity(self.joints.len());
        for entry in &self.joints {
            if !seen.insert(entry.id) {
                return Err(ModelFileError::DuplicateJointId(entry.id));
            }
            if entry.screw.len() != 6 {
                return Err(ModelFileError::ScrewLength { joint: entry.id, len: entry.screw.len() });
            }
            let mut components = Vec::with_capacity(6);
            for s in &entry.screw {
                let r = parse_rat(s).ok_or_else(|| ModelFileError::MalformedRational {
                    joint: entry.id,
                    value: s.clone(),
                })?;
                components.push(r);
            }
            for vertex in [&entry.source, &entry.target] {
                if !self.links.contains(vertex) {
                    return Err(ModelFileError::UnknownVertex {
                        joint: entry.id,
                        vertex: vertex.clone(),
                    });
                }
            }
            joints.push(Joint {
                id: entry.id,
                kind: entry.kind,
                screw: Screw::from_components(&components),
            });
        }
        for link in &self.links {
            let touched = self
                .joints
                .iter()
                .any(|j| &j.source == link || &j.target == link);
            if !touched {
                return Err(ModelFileError::UnreferencedVertex(link.clone()));
            }
        }
        let graph = LinkageGraph::new(
            self.links.clone(),
            &self.base,
            self.joints
                .iter()
                .map(|j| (j.id, j.source.clone(), j.target.clone()))
                .collect(),
        )
        .map_err(ModelFileError::Graph)?;
        let mut loops = Vec::new();
        for (index, ids) in self.loops.iter().enumerate() {
            let mut steps = Vec::with_capacity(ids.len());
            for &signed in ids {
                let joint = signed.unsigned_abs() as u32;
                if !seen.contains(&joint) {
                    return Err(ModelFileError::LoopUnknownJoint { index, joint });
                }
                steps.push((joint, if signed >= 0 { 1i8 } else { -1i8 }));
            }
            let cycle = FundamentalCycle::new(steps);
            graph
                .validate_loop(&cycle)
                .map_err(|e| ModelFileError::LoopNotClosed { index, reason: e.to_string() })?;
            loops.push(cycle);
        }
        Ok(LinkageModel::new(joints, graph, loops)?)
    }
}

/// Parses and validates a model file from disk.
pub fn parse_model(path: &Path) -> Result<LinkageModel, ModelFileError> {
    ModelFile::from_path(path)?.to_model()
}
