use std::collections::HashMap;

use super::{boundary, generate_array, CompletionArray};

/// Completion arrays per center, regrown by doubling on demand.
#[derive(Debug, Default)]
pub struct ArrayStore {
    arrays: HashMap<u32, CompletionArray>,
}

impl ArrayStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, arr: CompletionArray) {
        let keep = self.arrays.get(&arr.center()).is_some_and(|old| old.dim() >= arr.dim());
        if !keep {
            self.arrays.insert(arr.center(), arr);
        }
    }

    /// An array for `center` covering at least `min_dim` rows.
    pub fn array(&mut self, center: u32, min_dim: usize) -> &CompletionArray {
        let have = self.arrays.get(&center).map_or(0, |a| a.dim());
        if have < min_dim {
            let mut dim = have.max(64);
            while dim < min_dim {
                dim *= 2;
            }
            self.arrays.insert(center, generate_array(center, dim));
        }
        &self.arrays[&center]
    }

    pub fn c_value(&mut self, center: u32, a: usize, b: usize) -> u32 {
        if a == 0 {
            return boundary(center, b);
        }
        if b == 0 {
            return boundary(center, a);
        }
        self.array(center, a.max(b) + 1).get(a, b)
    }
}

/// `C_c(a, b)` from a freshly generated array.
pub fn c_value(center: u32, a: usize, b: usize) -> u32 {
    ArrayStore::new().c_value(center, a, b)
}
