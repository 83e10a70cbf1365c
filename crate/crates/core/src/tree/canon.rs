use std::collections::HashMap;

use super::{TreePosition, VertexId};

/// Byte string identifying a position up to size-preserving isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

fn push_varint(out: &mut Vec<u8>, mut x: u64) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

struct Compact {
    sizes: Vec<u64>,
    adj: Vec<Vec<usize>>,
}

impl Compact {
    fn new(p: &TreePosition) -> Self {
        let ids: Vec<VertexId> = p.vertices().map(|(v, _)| v).collect();
        let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let sizes = p.vertices().map(|(_, s)| s).collect();
        let adj = ids.iter().map(|&v| p.neighbors(v).map(|w| index[&w]).collect()).collect();
        Compact { sizes, adj }
    }

    fn centroids(&self) -> Vec<usize> {
        let n = self.sizes.len();
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![0];
        parent[0] = 0;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in &self.adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        let mut sub = vec![1usize; n];
        for &v in order.iter().rev() {
            if v != 0 {
                sub[parent[v]] += sub[v];
            }
        }
        (0..n)
            .filter(|&v| {
                let children = self.adj[v].iter().filter(|&&w| w != 0 && parent[w] == v);
                let worst = children.map(|&w| sub[w]).max().unwrap_or(0).max(n - sub[v]);
                worst <= n / 2
            })
            .collect()
    }

    fn encode(&self, v: usize, from: usize, out: &mut Vec<u8>) {
        let mut kids: Vec<Vec<u8>> = self.adj[v]
            .iter()
            .filter(|&&w| w != from)
            .map(|&w| {
                let mut buf = Vec::new();
                self.encode(w, v, &mut buf);
                buf
            })
            .collect();
        kids.sort();
        push_varint(out, self.sizes[v]);
        push_varint(out, kids.len() as u64);
        for k in kids {
            out.extend_from_slice(&k);
        }
    }
}

pub fn canonical_key(p: &TreePosition) -> CanonicalKey {
    if p.is_empty() {
        return CanonicalKey(Vec::new());
    }
    let c = Compact::new(p);
    let key = c
        .centroids()
        .into_iter()
        .map(|root| {
            let mut out = Vec::new();
            c.encode(root, usize::MAX, &mut out);
            out
        })
        .min()
        .expect("a nonempty tree has a centroid");
    CanonicalKey(key)
}
