//! Product-of-exponentials constraint model: loop maps, instantaneous screws,
//! and the stacked constraint Jacobian.

use crate::exact::{Rat, RatMatrix};
use crate::screws::{exp_twist, Pose, Screw};
use crate::topology::{FundamentalCycle, LinkageGraph, TopologyError};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JointKind {
    Revolute,
    Prismatic,
    Helical,
}

#[derive(Debug, Clone)]
pub struct Joint {
    pub id: u32,
    pub kind: JointKind,
    /// Reference screw coordinates at the zero configuration.
    pub screw: Screw<Rat>,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("joint id {0} appears more than once")]
    DuplicateJoint(u32),
    #[error("loop {0} references unknown joint id {1}")]
    UnknownLoopJoint(usize, u32),
    #[error("joint id {0} repeats within loop {1}")]
    RepeatedJointInLoop(u32, usize),
    #[error("graph edge set does not match the joint list")]
    EdgeJointMismatch,
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Immutable linkage model. The reference configuration is always the zero
/// vector; joint variables are indexed by the position of their joint in
/// `joints` (fixture files list joints in id order).
#[derive(Debug, Clone)]
pub struct LinkageModel {
    joints: Vec<Joint>,
    graph: LinkageGraph,
    loops: Vec<FundamentalCycle>,
}

impl LinkageModel {
    /// Builds and validates a model. When `loops` is empty, fundamental
    /// cycles are computed from the default co-tree; explicit loops override
    /// the computed ones and are validated for closure.
    pub fn new(
        joints: Vec<Joint>,
        graph: LinkageGraph,
        loops: Vec<FundamentalCycle>,
    ) -> Result<Self, ModelError> {
        let mut ids = std::collections::HashSet::new();
        for j in &joints {
            if !ids.insert(j.id) {
                return Err(ModelError::DuplicateJoint(j.id));
            }
        }
        if graph.edge_count() != joints.len()
            || graph.edges().iter().any(|e| !ids.contains(&e.joint_id))
        {
            return Err(ModelError::EdgeJointMismatch);
        }
        let loops = if loops.is_empty() {
            let cotree = graph.default_cotree()?;
            graph.fundamental_cycles(&cotree)?
        } else {
            for c in &loops {
                graph.validate_loop(c)?;
            }
            loops
        };
        for (l, c) in loops.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for &(id, _) in &c.steps {
                if !ids.contains(&id) {
                    return Err(ModelError::UnknownLoopJoint(l, id));
                }
                if !seen.insert(id) {
                    return Err(ModelError::RepeatedJointInLoop(id, l));
                }
            }
        }
        Ok(Self { joints, graph, loops })
    }

    pub fn joints(&self) -> &[Joint] {
        &self.joints
    }

    pub fn graph(&self) -> &LinkageGraph {
        &self.graph
    }

    pub fn loops(&self) -> &[FundamentalCycle] {
        &self.loops
    }

    /// Number of joint variables.
    pub fn n(&self) -> usize {
        self.joints.len()
    }

    /// Number of fundamental cycles.
    pub fn gamma(&self) -> usize {
        self.loops.len()
    }

    /// Column index of a joint id.
    pub fn joint_index(&self, id: u32) -> usize {
        self.joints
            .iter()
            .position(|j| j.id == id)
            .unwrap_or_else(|| panic!("unknown joint id {id}"))
    }

    pub fn joint(&self, id: u32) -> &Joint {
        &self.joints[self.joint_index(id)]
    }

    /// Instantaneous loop screws at the zero reference configuration: the
    /// k-th entry of loop `l` carries Ad of the preceding signed exponentials
    /// applied to the signed screw, which at zero is the signed screw itself.
    pub fn loop_screws(&self, l: usize) -> Vec<(u32, i8, Screw<Rat>)> {
        self.loops[l]
            .steps
            .iter()
            .map(|&(id, sign)| {
                let y = &self.joint(id).screw;
                let s = if sign > 0 { y.clone() } else { y.neg() };
                (id, sign, s)
            })
            .collect()
    }

    /// Loop screws along a float configuration: prefix products of the loop's
    /// signed exponentials, adjoint-applied to the signed reference screws.
    pub fn loop_screws_float(&self, l: usize, q: &[f64]) -> Vec<(u32, i8, Screw<f64>)> {
        assert_eq!(q.len(), self.n());
        let mut prefix = Pose::<f64>::identity();
        self.loops[l]
            .steps
            .iter()
            .map(|&(id, sign)| {
                let joint = self.joint(id);
                let yf = joint.screw.to_f64();
                let signed = if sign > 0 { yf.clone() } else { yf.neg() };
                let s = prefix.adjoint_apply(&signed);
                let theta = f64::from(sign) * q[self.joint_index(id)];
                prefix = prefix.compose(&exp_twist(&yf, &theta));
                (id, sign, s)
            })
            .collect()
    }

    /// Stacked constraint Jacobian at the zero configuration (6γ × n): block
    /// row `l` holds loop-l screws in the columns of their joint ids with
    /// loop-relative signs, zeros elsewhere.
    pub fn jacobian(&self) -> RatMatrix {
        let mut j = RatMatrix::zeros(6 * self.gamma(), self.n());
        for l in 0..self.gamma() {
            for (id, _, s) in self.loop_screws(l) {
                let col = self.joint_index(id);
                for (r, c) in s.components().into_iter().enumerate() {
                    j[(6 * l + r, col)] = c;
                }
            }
        }
        j
    }

    /// Pose of loop `l` at a float configuration.
    pub fn loop_pose(&self, l: usize, q: &[f64]) -> Pose<f64> {
        assert_eq!(q.len(), self.n());
        let mut g = Pose::identity();
        for &(id, sign) in &self.loops[l].steps {
            let joint = self.joint(id);
            let theta = f64::from(sign) * q[self.joint_index(id)];
            g = g.compose(&exp_twist(&joint.screw.to_f64(), &theta));
        }
        g
    }

    /// Per-loop closure residuals (log norm of the loop pose).
    pub fn closure_residual(&self, q: &[f64]) -> Vec<f64> {
        (0..self.gamma()).map(|l| self.loop_pose(l, q).log_norm()).collect()
    }

    /// Float Jacobian at a configuration, rows stacked per loop.
    pub fn jacobian_float(&self, q: &[f64]) -> nalgebra::DMatrix<f64> {
        let mut j = nalgebra::DMatrix::zeros(6 * self.gamma(), self.n());
        for l in 0..self.gamma() {
            for (id, _, s) in self.loop_screws_float(l, q) {
                let col = self.joint_index(id);
                for (r, c) in s.components().into_iter().enumerate() {
                    j[(6 * l + r, col)] += c;
                }
            }
        }
        j
    }

    /// Indices of joint variables that live on the torus (angle wrapping in
    /// path bookkeeping): every non-prismatic joint.
    pub fn angular_indices(&self) -> Vec<usize> {
        self.joints
            .iter()
            .enumerate()
            .filter(|(_, j)| j.kind != JointKind::Prismatic)
            .map(|(i, _)| i)
            .collect()
    }
}
