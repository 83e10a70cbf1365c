//! Rays, P-completions, worlds and box barriers.
//!
//! A ray fixes every stack of a tree but one variable leaf hanging off
//! `attach_at`; `position_at(0)` is the tree without that leaf.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{Move, TreeError, TreeJson, TreePosition, TreeSolver, VertexId};
use crate::tripod::ArrayStore;

#[derive(Debug, Error)]
pub enum RayError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("attach vertex {0} is not in the base tree")]
    UnknownAttach(VertexId),
    #[error("P-completion lemma violated: P positions at n = {found:?} in 0..={bound}")]
    LemmaViolation { found: Vec<u64>, bound: u64 },
    #[error("invalid world: {0}")]
    InvalidWorld(String),
    #[error("position is not in the world: {0}")]
    NotInWorld(String),
    #[error("invalid lattice tuple: {0}")]
    InvalidTuple(String),
    #[error("expected {expected} thresholds, got {got}")]
    ThresholdCount { expected: usize, got: usize },
    #[error("the array source needs a tripod world")]
    NotTripodWorld,
    #[error("shadow maps need a world with at least two leaves")]
    TooFewLeaves,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    base: TreePosition,
    attach_at: VertexId,
}

impl Ray {
    pub fn new(base: TreePosition, attach_at: VertexId) -> Result<Self, RayError> {
        if !base.contains(attach_at) {
            return Err(RayError::UnknownAttach(attach_at));
        }
        Ok(Ray { base, attach_at })
    }

    /// Tripod ray with center `c`, fixed leaves `a` and `b`, variable third leaf.
    pub fn tripod(c: u64, a: u64, b: u64) -> Self {
        Ray::new(TreePosition::star(c, &[a, b]), 0).expect("center is present")
    }

    pub fn base(&self) -> &TreePosition {
        &self.base
    }

    pub fn attach_at(&self) -> VertexId {
        self.attach_at
    }

    pub fn position_at(&self, n: u64) -> TreePosition {
        if n == 0 {
            return self.base.clone();
        }
        self.base.with_leaf(self.attach_at, n).expect("attach vertex exists").0
    }

    /// Sum of the fixed leaves once the variable leaf is present.
    pub fn leaf_sum(&self) -> u64 {
        let (p, var) = self.base.with_leaf(self.attach_at, 1).expect("attach vertex exists");
        p.leaves().into_iter().filter(|&v| v != var).map(|v| p.size(v).unwrap()).sum()
    }

    /// Moves on fixed leaves; each one leads to a distinct seen ray.
    pub fn seen_moves(&self) -> Vec<Move> {
        let (p, var) = self.base.with_leaf(self.attach_at, 1).expect("attach vertex exists");
        p.legal_moves().into_iter().filter(|m| m.vertex != var).collect()
    }

    /// The unique `n` with `position_at(n)` a P position. Every candidate up
    /// to `leaf_sum + 1` is classified so that a second P position is caught too.
    pub fn p_completion(&self, solver: &mut TreeSolver) -> Result<u64, RayError> {
        let bound = self.leaf_sum() + 1;
        let mut found = Vec::new();
        for n in 0..=bound {
            if solver.classify(&self.position_at(n))?.is_p() {
                found.push(n);
            }
        }
        match found.as_slice() {
            [n] => Ok(*n),
            _ => Err(RayError::LemmaViolation { found, bound }),
        }
    }
}

/// All positions sharing a tree shape and inner sizes, plus those with one
/// leaf deleted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World {
    vertices: BTreeSet<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    inner_sizes: BTreeMap<VertexId, u64>,
    leaf_order: Vec<VertexId>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WorldJson {
    #[serde(flatten)]
    pub tree: TreeJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf_order: Option<Vec<VertexId>>,
}

impl World {
    /// World of `shape`; leaf sizes of `shape` are ignored. The default leaf
    /// order is ascending id.
    pub fn new(shape: &TreePosition, leaf_order: Option<Vec<VertexId>>) -> Result<Self, RayError> {
        if shape.is_empty() {
            return Err(RayError::InvalidWorld("empty shape".into()));
        }
        let leaves = shape.leaves();
        let mut inner_sizes = BTreeMap::new();
        for (v, s) in shape.vertices() {
            if !shape.is_leaf(v) {
                if s == 0 {
                    return Err(RayError::InvalidWorld(format!("inner vertex {v} has size 0")));
                }
                inner_sizes.insert(v, s);
            }
        }
        let leaf_order = leaf_order.unwrap_or_else(|| leaves.clone());
        let mut sorted = leaf_order.clone();
        sorted.sort_unstable();
        if sorted != leaves {
            return Err(RayError::InvalidWorld(format!(
                "leaf order {leaf_order:?} is not a permutation of the leaves {leaves:?}"
            )));
        }
        Ok(World {
            vertices: shape.vertices().map(|(v, _)| v).collect(),
            edges: shape.edges(),
            inner_sizes,
            leaf_order,
        })
    }

    /// The tripod world with the given center: center id 0, leaves 1, 2, 3.
    pub fn tripod(center: u64) -> Self {
        World::new(&TreePosition::tripod(center, [1, 1, 1]), None).expect("tripod world")
    }

    pub fn from_json_str(s: &str) -> Result<Self, RayError> {
        let j: WorldJson = serde_json::from_str(s).map_err(|e| RayError::InvalidWorld(e.to_string()))?;
        let shape = TreePosition::try_from(j.tree)?;
        World::new(&shape, j.leaf_order)
    }

    pub fn dimension(&self) -> usize {
        self.leaf_order.len()
    }

    pub fn leaf_order(&self) -> &[VertexId] {
        &self.leaf_order
    }

    pub fn inner_sizes(&self) -> &BTreeMap<VertexId, u64> {
        &self.inner_sizes
    }

    /// Center size when this is a tripod world.
    pub fn tripod_center(&self) -> Option<u64> {
        if self.vertices.len() == 4 && self.inner_sizes.len() == 1 {
            self.inner_sizes.values().next().copied()
        } else {
            None
        }
    }

    fn neighbor_of_leaf(&self, leaf: VertexId) -> Option<VertexId> {
        self.edges.iter().find_map(|&(a, b)| {
            if a == leaf {
                Some(b)
            } else if b == leaf {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Inverse of the lattice map.
    pub fn position(&self, tuple: &[u64]) -> Result<TreePosition, RayError> {
        if tuple.len() != self.dimension() {
            return Err(RayError::InvalidTuple(format!("expected {} coordinates", self.dimension())));
        }
        if tuple.iter().filter(|&&x| x == 0).count() > 1 {
            return Err(RayError::InvalidTuple("more than one zero coordinate".into()));
        }
        let mut vs: Vec<(VertexId, u64)> = self.inner_sizes.iter().map(|(&v, &s)| (v, s)).collect();
        vs.extend(self.leaf_order.iter().zip(tuple).map(|(&v, &s)| (v, s)));
        Ok(TreePosition::from_parts(&vs, &self.edges)?)
    }

    /// Leaf sizes of `p` in leaf order; a deleted leaf reads 0.
    pub fn lattice_tuple(&self, p: &TreePosition) -> Result<Vec<u64>, RayError> {
        let present: BTreeSet<VertexId> = p.vertices().map(|(v, _)| v).collect();
        if !present.is_subset(&self.vertices) {
            return Err(RayError::NotInWorld("unknown vertex ids".into()));
        }
        let missing: Vec<_> = self.vertices.difference(&present).copied().collect();
        if missing.len() > 1 || missing.iter().any(|v| self.inner_sizes.contains_key(v)) {
            return Err(RayError::NotInWorld(format!("missing vertices {missing:?}")));
        }
        for (v, &s) in &self.inner_sizes {
            if p.size(*v) != Some(s) {
                return Err(RayError::NotInWorld(format!("inner vertex {v} has the wrong size")));
            }
        }
        let expected: Vec<_> = self
            .edges
            .iter()
            .copied()
            .filter(|(a, b)| present.contains(a) && present.contains(b))
            .collect();
        if p.edges() != expected {
            return Err(RayError::NotInWorld("edge set differs from the world shape".into()));
        }
        Ok(self.leaf_order.iter().map(|&v| p.size(v).unwrap_or(0)).collect())
    }

    /// Ray varying coordinate `axis` with the other coordinates fixed.
    pub fn axis_ray(&self, axis: usize, fixed: &[u64]) -> Result<Ray, RayError> {
        if self.dimension() < 2 {
            return Err(RayError::TooFewLeaves);
        }
        let tuple = insert_axis(fixed, axis, 0);
        let base = self.position(&tuple)?;
        let leaf = self.leaf_order[axis];
        let at = self.neighbor_of_leaf(leaf).ok_or(RayError::TooFewLeaves)?;
        Ray::new(base, at)
    }
}

fn insert_axis(fixed: &[u64], axis: usize, value: u64) -> Vec<u64> {
    let mut t = fixed.to_vec();
    t.insert(axis, value);
    t
}

/// Lower set: interior positions whose coordinates all reach their thresholds.
#[derive(Debug, Clone)]
pub struct BoxBarrier {
    world: World,
    thresholds: Vec<u64>,
}

impl BoxBarrier {
    pub fn new(world: World, thresholds: Vec<u64>) -> Result<Self, RayError> {
        if thresholds.len() != world.dimension() {
            return Err(RayError::ThresholdCount { expected: world.dimension(), got: thresholds.len() });
        }
        Ok(BoxBarrier { world, thresholds })
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    /// Thresholds with zero read as one, since exterior positions lie above
    /// every barrier.
    pub fn effective_thresholds(&self) -> Vec<u64> {
        self.thresholds.iter().map(|&t| t.max(1)).collect()
    }

    pub fn in_lower(&self, tuple: &[u64]) -> bool {
        tuple.iter().zip(self.effective_thresholds()).all(|(&x, t)| x >= t)
    }
}

/// Where shadow computations get P-completions from.
pub enum CompletionSource<'a> {
    Oracle(&'a mut TreeSolver),
    TripodArray(&'a mut ArrayStore),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ShadowKey {
    pub axis: usize,
    pub fixed: Vec<u64>,
}

pub type ShadowMap = BTreeMap<ShadowKey, bool>;

/// For every axis and every fixed boundary tuple with coordinates in
/// `[t_j, t_j + horizon)`, whether the ray's P position lies above the barrier.
pub fn shadow_map(b: &BoxBarrier, horizon: u64, source: CompletionSource<'_>) -> Result<ShadowMap, RayError> {
    let w = b.world();
    let d = w.dimension();
    if d < 2 {
        return Err(RayError::TooFewLeaves);
    }
    let t = b.effective_thresholds();
    let mut source = source;
    let center = match &source {
        CompletionSource::TripodArray(_) => Some(w.tripod_center().ok_or(RayError::NotTripodWorld)?),
        CompletionSource::Oracle(_) => None,
    };
    let mut out = BTreeMap::new();
    for axis in 0..d {
        let lows: Vec<u64> = (0..d).filter(|&j| j != axis).map(|j| t[j]).collect();
        let mut fixed = lows.clone();
        loop {
            let completion = match &mut source {
                CompletionSource::Oracle(solver) => w.axis_ray(axis, &fixed)?.p_completion(solver)?,
                CompletionSource::TripodArray(store) => {
                    store.c_value(center.unwrap() as u32, fixed[0] as usize, fixed[1] as usize) as u64
                }
            };
            out.insert(ShadowKey { axis, fixed: fixed.clone() }, completion < t[axis]);
            // odometer over the boundary face
            let mut j = 0;
            while j < fixed.len() {
                fixed[j] += 1;
                if fixed[j] < lows[j] + horizon {
                    break;
                }
                fixed[j] = lows[j];
                j += 1;
            }
            if j == fixed.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// One CSV line per ray: axis, fixed coordinates, 1 when shadowed.
pub fn shadow_csv(map: &ShadowMap) -> String {
    let mut s = String::new();
    for (k, &v) in map {
        s.push_str(&k.axis.to_string());
        for x in &k.fixed {
            s.push(',');
            s.push_str(&x.to_string());
        }
        s.push_str(if v { ",1\n" } else { ",0\n" });
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn position_at_examples() {
        let r = Ray::new(TreePosition::single(5), 0).unwrap();
        assert_eq!(r.position_at(0), TreePosition::single(5));
        assert_eq!(r.position_at(3), TreePosition::path(&[5, 3]));
        assert_eq!(r.leaf_sum(), 5);
        assert!(Ray::new(TreePosition::single(5), 3).is_err());
    }

    #[test]
    fn completions() {
        let mut s = TreeSolver::new();
        assert_eq!(Ray::tripod(6, 1, 7).p_completion(&mut s).unwrap(), 8);
        let two_stack = Ray::new(TreePosition::single(5), 0).unwrap();
        assert_eq!(two_stack.p_completion(&mut s).unwrap(), 5);
    }

    #[test]
    fn lattice_examples() {
        let w = World::tripod(6);
        assert_eq!(w.lattice_tuple(&TreePosition::tripod(6, [1, 7, 8])).unwrap(), vec![1, 7, 8]);
        let exterior = TreePosition::tripod(6, [0, 7, 8]);
        assert_eq!(exterior.vertex_count(), 3);
        assert_eq!(w.lattice_tuple(&exterior).unwrap(), vec![0, 7, 8]);
        assert!(w.lattice_tuple(&TreePosition::tripod(5, [1, 7, 8])).is_err());
        assert!(w.lattice_tuple(&TreePosition::path(&[7, 6])).is_err());
        assert!(w.position(&[0, 0, 3]).is_err());
        assert!(w.position(&[1, 2]).is_err());
    }

    #[test]
    fn world_rejects_bad_orders() {
        let shape = TreePosition::tripod(2, [1, 1, 1]);
        assert!(World::new(&shape, Some(vec![3, 1, 2])).is_ok());
        assert!(World::new(&shape, Some(vec![0, 1, 2])).is_err());
        assert!(World::new(&shape, Some(vec![1, 2])).is_err());
        assert!(World::new(&TreePosition::star(0, &[1, 1, 1]), None).is_err());
    }

    #[test]
    fn world_json() {
        let s = r#"{"vertices":[{"id":0,"size":2},{"id":1,"size":1},{"id":2,"size":1},{"id":3,"size":1}],
                    "edges":[[0,1],[0,2],[0,3]],"leaf_order":[2,1,3]}"#;
        let w = World::from_json_str(s).unwrap();
        assert_eq!(w.leaf_order(), &[2, 1, 3]);
        assert_eq!(w.tripod_center(), Some(2));
    }

    #[test]
    fn two_stack_shadow() {
        let shape = TreePosition::path(&[1, 1]);
        let b = BoxBarrier::new(World::new(&shape, None).unwrap(), vec![1, 1]).unwrap();
        let mut s = TreeSolver::new();
        let m = shadow_map(&b, 4, CompletionSource::Oracle(&mut s)).unwrap();
        assert_eq!(m.len(), 8);
        assert!(m.values().all(|&v| !v));
        let zero = BoxBarrier::new(b.world().clone(), vec![0, 0]).unwrap();
        assert_eq!(shadow_map(&zero, 4, CompletionSource::Oracle(&mut s)).unwrap(), m);
    }

    #[test]
    fn csv_layout() {
        let mut m = ShadowMap::new();
        m.insert(ShadowKey { axis: 1, fixed: vec![8, 9] }, true);
        m.insert(ShadowKey { axis: 0, fixed: vec![8, 8] }, false);
        assert_eq!(shadow_csv(&m), "0,8,8,0\n1,8,9,1\n");
    }
}
