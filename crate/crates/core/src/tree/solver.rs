use std::collections::HashMap;

use super::{canonical_key, CanonicalKey, TreeError, TreePosition};
use crate::nim::OutcomeClass;

/// Memoized game-tree search over tree nim positions.
///
/// A solver owns its memo table; give each worker its own.
#[derive(Debug, Default)]
pub struct TreeSolver {
    outcomes: HashMap<CanonicalKey, OutcomeClass>,
    grundy: HashMap<CanonicalKey, u64>,
    limit: Option<usize>,
}

impl TreeSolver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Solver that fails with [`TreeError::MemoLimit`] instead of growing past
    /// `limit` memo entries.
    pub fn with_limit(limit: usize) -> Self {
        TreeSolver { limit: Some(limit), ..Self::default() }
    }

    pub fn memo_len(&self) -> usize {
        self.outcomes.len() + self.grundy.len()
    }

    fn check_room(&self) -> Result<(), TreeError> {
        match self.limit {
            Some(l) if self.memo_len() >= l => Err(TreeError::MemoLimit(l)),
            _ => Ok(()),
        }
    }

    pub fn classify(&mut self, p: &TreePosition) -> Result<OutcomeClass, TreeError> {
        let key = canonical_key(p);
        if let Some(&o) = self.outcomes.get(&key) {
            return Ok(o);
        }
        if let Some(&g) = self.grundy.get(&key) {
            return Ok(OutcomeClass::p_if(g == 0));
        }
        let mut out = OutcomeClass::P;
        for m in p.legal_moves() {
            let q = p.apply_move(m)?;
            if self.classify(&q)?.is_p() {
                out = OutcomeClass::N;
                break;
            }
        }
        self.check_room()?;
        self.outcomes.insert(key, out);
        Ok(out)
    }

    pub fn grundy(&mut self, p: &TreePosition) -> Result<u64, TreeError> {
        let key = canonical_key(p);
        if let Some(&g) = self.grundy.get(&key) {
            return Ok(g);
        }
        let moves = p.legal_moves();
        let mut seen = vec![false; moves.len() + 1];
        for m in moves {
            let g = self.grundy(&p.apply_move(m)?)?;
            if let Some(slot) = seen.get_mut(g as usize) {
                *slot = true;
            }
        }
        let g = seen.iter().position(|&s| !s).unwrap() as u64;
        self.check_room()?;
        self.grundy.insert(key, g);
        Ok(g)
    }

    /// Outcome of the disjunctive sum of the given components.
    pub fn forest_outcome(&mut self, ps: &[TreePosition]) -> Result<OutcomeClass, TreeError> {
        let mut x = 0;
        for p in ps {
            x ^= self.grundy(p)?;
        }
        Ok(OutcomeClass::p_if(x == 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_classifications() {
        let mut s = TreeSolver::new();
        assert_eq!(s.classify(&TreePosition::empty()).unwrap(), OutcomeClass::P);
        assert_eq!(s.classify(&TreePosition::tripod(6, [1, 7, 8])).unwrap(), OutcomeClass::P);
        assert_eq!(s.classify(&TreePosition::tripod(7, [7, 7, 7])).unwrap(), OutcomeClass::P);
        assert_eq!(s.classify(&TreePosition::tripod(6, [1, 7, 9])).unwrap(), OutcomeClass::N);
    }

    #[test]
    fn grundy_values() {
        let mut s = TreeSolver::new();
        assert_eq!(s.grundy(&TreePosition::empty()).unwrap(), 0);
        for n in 0..12 {
            assert_eq!(s.grundy(&TreePosition::single(n)).unwrap(), n);
        }
        // the Grundy value completes the position with a separate heap
        let p = TreePosition::path(&[1, 6, 7]);
        let g = s.grundy(&p).unwrap();
        assert_eq!(s.forest_outcome(&[p.clone(), TreePosition::single(g)]).unwrap(), OutcomeClass::P);
        for h in 0..g {
            assert_eq!(s.forest_outcome(&[p.clone(), TreePosition::single(h)]).unwrap(), OutcomeClass::N);
        }
    }

    #[test]
    fn forest() {
        let mut s = TreeSolver::new();
        assert_eq!(s.forest_outcome(&[]).unwrap(), OutcomeClass::P);
        let t = TreePosition::path(&[2, 3, 1]);
        assert_eq!(s.forest_outcome(&[t.clone(), t]).unwrap(), OutcomeClass::P);
        let f = [TreePosition::tripod(6, [1, 7, 8]), TreePosition::single(3)];
        assert_eq!(s.forest_outcome(&f).unwrap(), OutcomeClass::N);
    }

    #[test]
    fn memo_cap_is_a_hard_stop() {
        let mut s = TreeSolver::with_limit(5);
        assert_eq!(s.classify(&TreePosition::tripod(3, [3, 3, 3])), Err(TreeError::MemoLimit(5)));
        let mut roomy = TreeSolver::with_limit(1000);
        assert!(roomy.classify(&TreePosition::single(2)).is_ok());
    }
}
