use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::TreeError;

pub type VertexId = u32;

/// A tree of coin stacks. Ids are labels only; isomorphic positions play alike.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "TreeJson", into = "TreeJson")]
pub struct TreePosition {
    sizes: BTreeMap<VertexId, u64>,
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

/// Take coins from a leaf so that `new_size` remain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub vertex: VertexId,
    pub new_size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: VertexId,
    pub size: u64,
}

/// On-disk tree layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[VertexId; 2]>,
}

impl TryFrom<TreeJson> for TreePosition {
    type Error = TreeError;

    fn try_from(j: TreeJson) -> Result<Self, TreeError> {
        let vs: Vec<_> = j.vertices.iter().map(|v| (v.id, v.size)).collect();
        let es: Vec<_> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        TreePosition::from_parts(&vs, &es)
    }
}

impl From<TreePosition> for TreeJson {
    fn from(p: TreePosition) -> Self {
        TreeJson {
            vertices: p.sizes.iter().map(|(&id, &size)| VertexJson { id, size }).collect(),
            edges: p.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl TreePosition {
    /// The terminal position.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Build from labeled vertices and edges. Size-0 vertices that are or
    /// become leaves are removed.
    pub fn from_parts(vertices: &[(VertexId, u64)], edges: &[(VertexId, VertexId)]) -> Result<Self, TreeError> {
        let mut sizes = BTreeMap::new();
        let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        for &(id, size) in vertices {
            if sizes.insert(id, size).is_some() {
                return Err(TreeError::DuplicateVertex(id));
            }
            adj.insert(id, BTreeSet::new());
        }
        for &(a, b) in edges {
            if a == b {
                return Err(TreeError::SelfLoop(a));
            }
            if !sizes.contains_key(&a) || !sizes.contains_key(&b) {
                return Err(TreeError::UnknownEdgeEndpoint(a, b));
            }
            if !adj.get_mut(&a).unwrap().insert(b) {
                return Err(TreeError::DuplicateEdge(a, b));
            }
            adj.get_mut(&b).unwrap().insert(a);
        }
        if !sizes.is_empty() {
            if edges.len() != sizes.len() - 1 {
                return Err(TreeError::NotATree(format!(
                    "{} vertices need {} edges, got {}",
                    sizes.len(),
                    sizes.len() - 1,
                    edges.len()
                )));
            }
            let start = *sizes.keys().next().unwrap();
            let mut seen = BTreeSet::from([start]);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &adj[&v] {
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            if seen.len() != sizes.len() {
                return Err(TreeError::NotATree("disconnected".into()));
            }
        }
        let mut p = TreePosition { sizes, adj };
        p.normalize();
        Ok(p)
    }

    pub fn from_json_str(s: &str) -> Result<Self, TreeError> {
        serde_json::from_str(s).map_err(|e| TreeError::Json(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("tree serializes")
    }

    pub fn single(size: u64) -> Self {
        Self::path(&[size])
    }

    /// Path with ids 0..k in order.
    pub fn path(sizes: &[u64]) -> Self {
        let vs: Vec<_> = sizes.iter().enumerate().map(|(i, &s)| (i as VertexId, s)).collect();
        let es: Vec<_> = (1..sizes.len()).map(|i| (i as VertexId - 1, i as VertexId)).collect();
        Self::from_parts(&vs, &es).expect("path is a tree")
    }

    /// Star with center id 0 and leaves 1..=k.
    pub fn star(center: u64, leaves: &[u64]) -> Self {
        let mut vs = vec![(0, center)];
        vs.extend(leaves.iter().enumerate().map(|(i, &s)| (i as VertexId + 1, s)));
        let es: Vec<_> = (1..=leaves.len()).map(|i| (0, i as VertexId)).collect();
        Self::from_parts(&vs, &es).expect("star is a tree")
    }

    pub fn tripod(center: u64, leaves: [u64; 3]) -> Self {
        Self::star(center, &leaves)
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.sizes.contains_key(&v)
    }

    pub fn size(&self, v: VertexId) -> Option<u64> {
        self.sizes.get(&v).copied()
    }

    pub fn degree(&self, v: VertexId) -> Option<usize> {
        self.adj.get(&v).map(|n| n.len())
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.degree(v).is_some_and(|d| d <= 1)
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, u64)> + '_ {
        self.sizes.iter().map(|(&v, &s)| (v, s))
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    /// Edges as `(low, high)` pairs in sorted order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.adj
            .iter()
            .flat_map(|(&a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    pub fn leaves(&self) -> Vec<VertexId> {
        self.adj.iter().filter(|(_, ns)| ns.len() <= 1).map(|(&v, _)| v).collect()
    }

    pub fn total_coins(&self) -> u64 {
        self.sizes.values().sum()
    }

    /// Smallest id above every id in use.
    pub fn next_id(&self) -> VertexId {
        self.sizes.keys().next_back().map_or(0, |&v| v + 1)
    }

    pub fn legal_moves(&self) -> Vec<Move> {
        let mut out = Vec::new();
        for v in self.leaves() {
            let size = self.sizes[&v];
            out.extend((0..size).map(|new_size| Move { vertex: v, new_size }));
        }
        out
    }

    pub fn apply_move(&self, m: Move) -> Result<Self, TreeError> {
        let size = self.size(m.vertex).ok_or(TreeError::UnknownVertex(m.vertex))?;
        if !self.is_leaf(m.vertex) {
            return Err(TreeError::NotALeaf(m.vertex));
        }
        if m.new_size >= size {
            return Err(TreeError::IllegalSize { vertex: m.vertex, new_size: m.new_size, size });
        }
        let mut q = self.clone();
        q.sizes.insert(m.vertex, m.new_size);
        q.normalize();
        Ok(q)
    }

    /// Attach a new leaf of the given size at `at`, returning the new id.
    pub fn with_leaf(&self, at: VertexId, size: u64) -> Result<(Self, VertexId), TreeError> {
        if !self.contains(at) {
            return Err(TreeError::UnknownVertex(at));
        }
        let id = self.next_id();
        let mut q = self.clone();
        q.sizes.insert(id, size);
        q.adj.insert(id, BTreeSet::from([at]));
        q.adj.get_mut(&at).unwrap().insert(id);
        q.normalize();
        Ok((q, id))
    }

    /// Remove a vertex and its edges without normalizing. Caller keeps the
    /// result a tree.
    pub(crate) fn remove_vertex_raw(&mut self, v: VertexId) {
        self.sizes.remove(&v);
        if let Some(ns) = self.adj.remove(&v) {
            for w in ns {
                self.adj.get_mut(&w).unwrap().remove(&v);
            }
        }
    }

    fn normalize(&mut self) {
        let mut work: Vec<VertexId> = self
            .sizes
            .iter()
            .filter(|(_, &s)| s == 0)
            .map(|(&v, _)| v)
            .collect();
        while let Some(v) = work.pop() {
            if self.size(v) != Some(0) || !self.is_leaf(v) {
                continue;
            }
            let ns: Vec<_> = self.neighbors(v).collect();
            self.remove_vertex_raw(v);
            work.extend(ns.into_iter().filter(|w| self.sizes[w] == 0));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_moves() {
        let p = TreePosition::single(3);
        let sizes: Vec<_> = p.legal_moves().iter().map(|m| m.new_size).collect();
        assert_eq!(sizes, vec![0, 1, 2]);
        assert!(TreePosition::empty().legal_moves().is_empty());
    }

    #[test]
    fn tripod_center_not_playable() {
        let p = TreePosition::tripod(2, [1, 1, 1]);
        let moves = p.legal_moves();
        assert_eq!(moves.len(), 3);
        assert!(moves.iter().all(|m| m.vertex != 0 && m.new_size == 0));
        assert_eq!(p.apply_move(Move { vertex: 0, new_size: 1 }), Err(TreeError::NotALeaf(0)));
    }

    #[test]
    fn moves_and_deletion() {
        let p = TreePosition::single(5);
        assert!(p.apply_move(Move { vertex: 0, new_size: 0 }).unwrap().is_empty());
        let t = TreePosition::tripod(6, [1, 7, 8]);
        let r = t.apply_move(Move { vertex: 3, new_size: 4 }).unwrap();
        assert_eq!(r, TreePosition::tripod(6, [1, 7, 4]));
        let e = t.apply_move(Move { vertex: 1, new_size: 0 }).unwrap();
        assert_eq!(e.vertex_count(), 3);
        assert_eq!(e.edges(), vec![(0, 2), (0, 3)]);
        assert!(matches!(
            t.apply_move(Move { vertex: 2, new_size: 7 }),
            Err(TreeError::IllegalSize { .. })
        ));
    }

    #[test]
    fn zero_center_cascade() {
        let p = TreePosition::star(0, &[2, 3]);
        assert_eq!(p.vertex_count(), 3);
        let q = p.apply_move(Move { vertex: 1, new_size: 0 }).unwrap();
        // the empty center is now a leaf and vanishes with it
        assert_eq!(q.vertex_count(), 1);
        assert_eq!(q.size(2), Some(3));
        assert!(TreePosition::single(0).is_empty());
        assert!(TreePosition::path(&[0, 0, 0]).is_empty());
    }

    #[test]
    fn rejects_non_trees() {
        assert!(matches!(
            TreePosition::from_parts(&[(0, 1), (1, 1), (2, 1)], &[(0, 1), (1, 2), (2, 0)]),
            Err(TreeError::NotATree(_))
        ));
        assert!(matches!(
            TreePosition::from_parts(&[(0, 1), (1, 1), (2, 1), (3, 1)], &[(0, 1), (2, 3), (2, 3)]),
            Err(TreeError::DuplicateEdge(2, 3))
        ));
        assert!(matches!(
            TreePosition::from_parts(&[(0, 1)], &[(0, 9)]),
            Err(TreeError::UnknownEdgeEndpoint(0, 9))
        ));
        assert!(matches!(
            TreePosition::from_parts(&[(0, 1), (0, 2)], &[]),
            Err(TreeError::DuplicateVertex(0))
        ));
    }

    #[test]
    fn json_round_trip() {
        let t = TreePosition::tripod(6, [1, 7, 8]);
        let s = t.to_json_string();
        assert_eq!(TreePosition::from_json_str(&s).unwrap(), t);
        let raw = r#"{"vertices":[{"id":4,"size":2},{"id":9,"size":3}],"edges":[[4,9]]}"#;
        let p = TreePosition::from_json_str(raw).unwrap();
        assert_eq!(p.total_coins(), 5);
        assert!(TreePosition::from_json_str(r#"{"vertices":[{"id":1,"size":1}],"edges":[[1,1]]}"#).is_err());
    }

    #[test]
    fn attach_leaf() {
        let (p, id) = TreePosition::single(5).with_leaf(0, 3).unwrap();
        assert_eq!(id, 1);
        assert_eq!(p, TreePosition::path(&[5, 3]));
    }
}
