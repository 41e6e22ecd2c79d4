/// Dense row-major bit matrix, one `u64`-aligned row per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    /// Builds a matrix from independently computed rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<u64>>) -> Self {
        let words_per_row = cols.div_ceil(64);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * words_per_row);
        for row in rows {
            debug_assert_eq!(row.len(), words_per_row);
            data.extend_from_slice(&row);
        }
        BitMatrix {
            rows: n,
            cols,
            words_per_row,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    /// Sets bit `(i, j)`; returns whether it was previously clear.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize) -> bool {
        let word = &mut self.data[i * self.words_per_row + j / 64];
        let mask = 1u64 << (j % 64);
        let was_clear = *word & mask == 0;
        *word |= mask;
        was_clear
    }

    /// Clears bit `(i, j)`; returns whether it was previously set.
    #[inline]
    pub fn clear(&mut self, i: usize, j: usize) -> bool {
        let word = &mut self.data[i * self.words_per_row + j / 64];
        let mask = 1u64 << (j % 64);
        let was_set = *word & mask != 0;
        *word &= !mask;
        was_set
    }

    pub fn count_ones(&self) -> u64 {
        self.data.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Column indices of the set bits in row `i`, ascending.
    pub fn iter_row(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(k, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + bit)
            })
        })
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::new(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.iter_row(i) {
                out.set(j, i);
            }
        }
        out
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.data
    }

    pub(crate) fn from_words(rows: usize, cols: usize, data: Vec<u64>) -> Option<Self> {
        let words_per_row = cols.div_ceil(64);
        if data.len() != rows * words_per_row {
            return None;
        }
        let m = BitMatrix {
            rows,
            cols,
            words_per_row,
            data,
        };
        // Padding bits past `cols` must be zero.
        let tail = cols % 64;
        if tail != 0 && (0..rows).any(|i| m.row(i)[words_per_row - 1] >> tail != 0) {
            return None;
        }
        Some(m)
    }
}

/// `|x AND y|` over two equally long rows.
#[inline]
pub fn and_popcount(x: &[u64], y: &[u64]) -> u64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| u64::from((a & b).count_ones()))
        .sum()
}
