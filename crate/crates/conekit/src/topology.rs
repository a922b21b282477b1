//! Linkage graph handling: spanning tree / co-tree selection and fundamental
//! cycle extraction with edge orientation signs.

use std::collections::{HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("linkage graph is not connected")]
    Disconnected,
    #[error("unknown joint id {0}")]
    UnknownJoint(u32),
    #[error("co-tree does not leave a spanning tree: {0}")]
    BadCotree(String),
    #[error("loop does not close: {0}")]
    LoopNotClosed(String),
}

/// Directed multigraph of links (vertices) and 1-DOF joints (edges).
#[derive(Debug, Clone)]
pub struct LinkageGraph {
    vertex_names: Vec<String>,
    ground: usize,
    edges: Vec<Edge>,
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub joint_id: u32,
    pub source: usize,
    pub target: usize,
}

/// Ordered, signed loop traversal. Sign +1 means the edge is traversed along
/// its direction, −1 against it. Exactly one co-tree edge per computed cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalCycle {
    pub steps: Vec<(u32, i8)>,
}

impl LinkageGraph {
    pub fn new(
        vertex_names: Vec<String>,
        ground: &str,
        edges: Vec<(u32, String, String)>,
    ) -> Result<Self, String> {
        let index: HashMap<&str, usize> = vertex_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        if index.len() != vertex_names.len() {
            return Err("duplicate vertex name".into());
        }
        let ground = *index.get(ground).ok_or("ground vertex not listed")?;
        let mut seen = std::collections::HashSet::new();
        let edges = edges
            .into_iter()
            .map(|(joint_id, s, t)| {
                if !seen.insert(joint_id) {
                    return Err(format!("duplicate joint id {joint_id}"));
                }
                let source = *index.get(s.as_str()).ok_or(format!("unknown vertex {s}"))?;
                let target = *index.get(t.as_str()).ok_or(format!("unknown vertex {t}"))?;
                Ok(Edge { joint_id, source, target })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(Self { vertex_names, ground, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn ground_name(&self) -> &str {
        &self.vertex_names[self.ground]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_by_joint(&self, joint_id: u32) -> Option<&Edge> {
        self.edges.iter().find(|e| e.joint_id == joint_id)
    }

    fn is_connected(&self) -> bool {
        if self.vertex_names.is_empty() {
            return false;
        }
        let mut adj = vec![Vec::new(); self.vertex_names.len()];
        for e in &self.edges {
            adj[e.source].push(e.target);
            adj[e.target].push(e.source);
        }
        let mut seen = vec![false; self.vertex_names.len()];
        let mut queue = VecDeque::from([self.ground]);
        seen[self.ground] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Number of independent cycles, `n − N + 1` for a connected graph.
    pub fn cycle_space_dimension(&self) -> Result<usize, TopologyError> {
        if !self.is_connected() {
            return Err(TopologyError::Disconnected);
        }
        Ok(self.edges.len() + 1 - self.vertex_names.len())
    }

    /// Greedy spanning tree over ascending joint ids; returns the co-tree
    /// joint ids (the edges that closed a cycle).
    fn greedy_cotree(&self) -> Result<Vec<u32>, TopologyError> {
        if !self.is_connected() {
            return Err(TopologyError::Disconnected);
        }
        let mut order: Vec<&Edge> = self.edges.iter().collect();
        order.sort_by_key(|e| e.joint_id);
        let mut uf: Vec<usize> = (0..self.vertex_names.len()).collect();
        fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let mut cotree = Vec::new();
        for e in order {
            let (a, b) = (find(&mut uf, e.source), find(&mut uf, e.target));
            if a == b {
                cotree.push(e.joint_id);
            } else {
                uf[a] = b;
            }
        }
        Ok(cotree)
    }

    /// Default co-tree: from the greedy cycle basis, pick for each cycle the
    /// highest-id edge exclusive to it.
    pub fn default_cotree(&self) -> Result<Vec<u32>, TopologyError> {
        let cotree = self.greedy_cotree()?;
        let cycles = self.fundamental_cycles(&cotree)?;
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for c in &cycles {
            for &(id, _) in &c.steps {
                *counts.entry(id).or_insert(0) += 1;
            }
        }
        let mut chosen = Vec::new();
        for c in &cycles {
            let pick = c
                .steps
                .iter()
                .map(|&(id, _)| id)
                .filter(|id| counts[id] == 1)
                .max()
                .ok_or_else(|| {
                    TopologyError::BadCotree("a cycle has no exclusive edge".into())
                })?;
            chosen.push(pick);
        }
        chosen.sort_unstable();
        Ok(chosen)
    }

    /// One cycle per co-tree edge: the edge plus the unique tree path between
    /// its endpoints. Cycles are canonicalized to start at their lowest joint
    /// id with positive sign.
    pub fn fundamental_cycles(
        &self,
        cotree: &[u32],
    ) -> Result<Vec<FundamentalCycle>, TopologyError> {
        for &id in cotree {
            if self.edge_by_joint(id).is_none() {
                return Err(TopologyError::UnknownJoint(id));
            }
        }
        let tree: Vec<&Edge> = self
            .edges
            .iter()
            .filter(|e| !cotree.contains(&e.joint_id))
            .collect();
        if tree.len() != self.vertex_names.len() - 1 {
            return Err(TopologyError::BadCotree(format!(
                "{} tree edges for {} vertices",
                tree.len(),
                self.vertex_names.len()
            )));
        }
        // Adjacency over tree edges.
        let mut adj: Vec<Vec<(usize, u32, i8)>> = vec![Vec::new(); self.vertex_names.len()];
        for e in &tree {
            adj[e.source].push((e.target, e.joint_id, 1));
            adj[e.target].push((e.source, e.joint_id, -1));
        }
        let tree_path = |from: usize, to: usize| -> Option<Vec<(u32, i8)>> {
            let mut prev: Vec<Option<(usize, u32, i8)>> = vec![None; adj.len()];
            let mut seen = vec![false; adj.len()];
            let mut queue = VecDeque::from([from]);
            seen[from] = true;
            while let Some(v) = queue.pop_front() {
                if v == to {
                    break;
                }
                for &(w, id, sgn) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        prev[w] = Some((v, id, sgn));
                        queue.push_back(w);
                    }
                }
            }
            if !seen[to] {
                return None;
            }
            let mut path = Vec::new();
            let mut cur = to;
            while cur != from {
                let (p, id, sgn) = prev[cur]?;
                path.push((id, sgn));
                cur = p;
            }
            path.reverse();
            Some(path)
        };
        let mut cycles = Vec::new();
        for &id in cotree {
            let e = self.edge_by_joint(id).unwrap();
            let path = tree_path(e.target, e.source).ok_or(TopologyError::Disconnected)?;
            let mut steps = vec![(e.joint_id, 1i8)];
            steps.extend(path);
            cycles.push(FundamentalCycle { steps }.canonicalized());
        }
        Ok(cycles)
    }

    /// Validates that an explicit ordered signed traversal closes.
    pub fn validate_loop(&self, cycle: &FundamentalCycle) -> Result<(), TopologyError> {
        if cycle.steps.is_empty() {
            return Err(TopologyError::LoopNotClosed("empty loop".into()));
        }
        let first = self
            .edge_by_joint(cycle.steps[0].0)
            .ok_or(TopologyError::UnknownJoint(cycle.steps[0].0))?;
        let start = if cycle.steps[0].1 > 0 { first.source } else { first.target };
        let mut at = start;
        for &(id, sign) in &cycle.steps {
            let e = self.edge_by_joint(id).ok_or(TopologyError::UnknownJoint(id))?;
            let (from, to) = if sign > 0 {
                (e.source, e.target)
            } else {
                (e.target, e.source)
            };
            if from != at {
                return Err(TopologyError::LoopNotClosed(format!(
                    "joint {id} starts at {} but traversal is at {}",
                    self.vertex_names[from], self.vertex_names[at]
                )));
            }
            at = to;
        }
        if at != start {
            return Err(TopologyError::LoopNotClosed(format!(
                "traversal ends at {} instead of {}",
                self.vertex_names[at], self.vertex_names[start]
            )));
        }
        Ok(())
    }
}

impl FundamentalCycle {
    pub fn new(steps: Vec<(u32, i8)>) -> Self {
        Self { steps }
    }

    pub fn joint_ids(&self) -> Vec<u32> {
        self.steps.iter().map(|&(id, _)| id).collect()
    }

    /// Rotates the traversal to start at the lowest joint id and orients it so
    /// that edge's sign is positive.
    fn canonicalized(mut self) -> Self {
        let min_pos = self
            .steps
            .iter()
            .enumerate()
            .min_by_key(|(_, &(id, _))| id)
            .map(|(i, _)| i)
            .unwrap();
        self.steps.rotate_left(min_pos);
        if self.steps[0].1 < 0 {
            self.steps.reverse();
            for s in &mut self.steps {
                s.1 = -s.1;
            }
            self.steps.rotate_right(1); // lowest id back to front after reversal
        }
        self
    }

    /// Signed incidence vector over vertices must vanish (each vertex entered
    /// as often as left).
    pub fn boundary_vanishes(&self, g: &LinkageGraph) -> bool {
        let mut boundary = vec![0i64; g.vertex_count()];
        for &(id, sign) in &self.steps {
            let Some(e) = g.edge_by_joint(id) else {
                return false;
            };
            let (from, to) = if sign > 0 {
                (e.source, e.target)
            } else {
                (e.target, e.source)
            };
            boundary[from] -= 1;
            boundary[to] += 1;
        }
        boundary.iter().all(|&b| b == 0)
    }
}
