use super::{boundary, ArrayView, CompletionArray};

const EMPTY: u32 = u32::MAX;

struct Bits {
    words: usize,
    data: Vec<u64>,
}

impl Bits {
    fn new(lines: usize, cap: usize) -> Self {
        let words = cap / 64 + 2;
        Bits { words, data: vec![0; lines * words] }
    }

    fn line(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn set(&mut self, i: usize, v: u32) {
        let v = v as usize;
        self.data[i * self.words + v / 64] |= 1 << (v % 64);
    }

    fn has(&self, i: usize, v: usize) -> bool {
        self.data[i * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Smallest value at or above `from` absent from line `i`.
    fn next_free(&self, i: usize, from: usize) -> usize {
        let line = self.line(i);
        let mut w = from / 64;
        let mut word = line[w] | ((1u64 << (from % 64)) - 1);
        while word == !0 {
            w += 1;
            word = line[w];
        }
        w * 64 + (!word).trailing_zeros() as usize
    }
}

/// Smallest value at or above `from` absent from both lines.
fn next_free_both(r: &[u64], c: &[u64], from: usize) -> usize {
    let mut w = from / 64;
    let mut word = r[w] | c[w] | ((1u64 << (from % 64)) - 1);
    while word == !0 {
        w += 1;
        word = r[w] | c[w];
    }
    w * 64 + (!word).trailing_zeros() as usize
}

/// Fill the array entry by entry with the mex rule.
pub fn generate_array(center: u32, dim: usize) -> CompletionArray {
    // interior entries never exceed a + b + 1
    let cap = 2 * dim + center as usize + 2;
    let mut rows = Bits::new(dim, cap);
    let mut cols = Bits::new(dim, cap);
    let mut row_mex = vec![0usize; dim];
    let mut col_mex = vec![0usize; dim];
    let mut values = vec![0u32; dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            let v = if a == 0 {
                boundary(center, b)
            } else if b == 0 {
                boundary(center, a)
            } else {
                let from = row_mex[a].max(col_mex[b]);
                next_free_both(rows.line(a), cols.line(b), from) as u32
            };
            values[a * dim + b] = v;
            rows.set(a, v);
            cols.set(b, v);
            if v as usize == row_mex[a] {
                row_mex[a] = rows.next_free(a, row_mex[a]);
            }
            if v as usize == col_mex[b] {
                col_mex[b] = cols.next_free(b, col_mex[b]);
            }
        }
    }
    CompletionArray::from_values(center, dim, values).expect("square grid")
}

/// Entries with values up to `vmax`, placed value by value; higher entries
/// are left unknown.
#[derive(Debug, Clone)]
pub struct LayeredArray {
    center: u32,
    dim: usize,
    vmax: Option<u32>,
    cells: Vec<u32>,
}

impl LayeredArray {
    pub fn vmax(&self) -> Option<u32> {
        self.vmax
    }

    pub fn is_complete(&self) -> bool {
        !self.cells.contains(&EMPTY)
    }

    pub fn into_complete(self) -> Option<CompletionArray> {
        if self.is_complete() {
            CompletionArray::from_values(self.center, self.dim, self.cells).ok()
        } else {
            None
        }
    }
}

impl ArrayView for LayeredArray {
    fn center(&self) -> u32 {
        self.center
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, a: usize, b: usize) -> Option<u32> {
        match self.cells[a * self.dim + b] {
            EMPTY => None,
            v if self.vmax.is_some_and(|m| v > m) => None,
            v => Some(v),
        }
    }
}

fn find(next: &mut [usize], mut j: usize) -> usize {
    let mut root = j;
    while next[root] != root {
        root = next[root];
    }
    while next[j] != root {
        let up = next[j];
        next[j] = root;
        j = up;
    }
    root
}

/// Place 0, 1, 2, ... in turn: in each row, value `v` goes to the earliest
/// empty column that holds no `v` higher up. Stops after `vmax` if given,
/// otherwise when the window is full.
pub fn generate_layers(center: u32, dim: usize, vmax: Option<u32>) -> LayeredArray {
    let mut cells = vec![EMPTY; dim * dim];
    let mut filled = 0usize;
    for b in 0..dim {
        cells[b] = boundary(center, b);
        filled += 1;
    }
    for a in 1..dim {
        cells[a * dim] = boundary(center, a);
        filled += 1;
    }
    let cap = 2 * dim as u64 + center as u64 + 2;
    let mut next = vec![0usize; dim + 1];
    let mut v = 0u32;
    loop {
        if filled == dim * dim || vmax.is_some_and(|m| v > m) {
            break;
        }
        assert!((v as u64) <= cap, "layer {v} exceeds the bound for a {dim}-wide window");
        for (j, slot) in next.iter_mut().enumerate() {
            *slot = j;
        }
        // columns already holding v in row 0
        for j in 1..dim {
            if cells[j] == v {
                next[j] = j + 1;
            }
        }
        for a in 1..dim {
            if cells[a * dim] == v {
                continue;
            }
            let mut j = find(&mut next, 1);
            while j < dim && cells[a * dim + j] != EMPTY {
                j = find(&mut next, j + 1);
            }
            if j < dim {
                cells[a * dim + j] = v;
                filled += 1;
                next[j] = j + 1;
            }
        }
        v += 1;
    }
    LayeredArray { center, dim, vmax, cells }
}

pub fn generate_array_by_layers(center: u32, dim: usize) -> CompletionArray {
    generate_layers(center, dim, None).into_complete().expect("layers fill the window")
}

/// Rows `0..rows` of `C_c`, each `len` entries long, without building the
/// square. Columns are filled left to right so that a column's entries can be
/// tagged with the column index for O(1) membership tests.
pub fn leading_rows(center: u32, rows: usize, len: usize) -> Vec<Vec<u32>> {
    let cap = len + rows + center as usize + 2;
    let mut out: Vec<Vec<u32>> = (0..rows).map(|_| vec![0u32; len]).collect();
    if rows == 0 || len == 0 {
        return out;
    }
    let mut bits = Bits::new(rows, cap);
    let mut row_mex = vec![0usize; rows];
    let mut tag = vec![0u32; cap + 128];
    for b in 0..len {
        let mark = b as u32 + 1;
        for a in 0..rows {
            let v = if a == 0 {
                boundary(center, b)
            } else if b == 0 {
                boundary(center, a)
            } else {
                let mut v = row_mex[a];
                loop {
                    v = bits.next_free(a, v);
                    if tag[v] != mark {
                        break;
                    }
                    v += 1;
                }
                v as u32
            };
            debug_assert!(!bits.has(a, v as usize));
            out[a][b] = v;
            bits.set(a, v);
            tag[v as usize] = mark;
            if v as usize == row_mex[a] {
                row_mex[a] = bits.next_free(a, row_mex[a]);
            }
        }
    }
    out
}

/// Row `row` of `C_c`, `len` entries long.
pub fn row_sequence(center: u32, row: usize, len: usize) -> Vec<u32> {
    leading_rows(center, row + 1, len).pop().unwrap()
}
