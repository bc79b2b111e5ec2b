/// Dense boolean matrix, rows packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMat {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMat {
    pub fn new(rows: usize, cols: usize) -> BitMat {
        let words = cols.div_ceil(64);
        BitMat { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn identity(n: usize) -> BitMat {
        let mut m = BitMat::new(n, n);
        for k in 0..n {
            m.set(k, k);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] |= 1 << (c % 64);
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn or_row_from(&mut self, dst: usize, src: &BitMat, src_row: usize) {
        let w = self.words;
        for k in 0..w {
            self.data[dst * w + k] |= src.data[src_row * w + k];
        }
    }

    pub fn is_empty(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// `self ∘ f`, where rows index outputs: `(self ∘ f)[i][j] = ∃k. self[i][k] ∧ f[k][j]`.
    pub fn after(&self, f: &BitMat) -> BitMat {
        assert_eq!(self.cols, f.rows, "bit matrix shapes");
        let mut out = BitMat::new(self.rows, f.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    out.or_row_from(i, f, k);
                }
            }
        }
        out
    }

    pub fn union(&self, other: &BitMat) -> BitMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a | b).collect();
        BitMat { data, ..self.clone() }
    }

    /// Reflexive-transitive closure (Warshall).
    pub fn star(&self) -> BitMat {
        assert_eq!(self.rows, self.cols);
        let mut m = self.union(&BitMat::identity(self.rows));
        for k in 0..self.rows {
            let krow: Vec<u64> = m.row(k).to_vec();
            for i in 0..self.rows {
                if m.get(i, k) {
                    for (w, kw) in krow.iter().enumerate() {
                        m.data[i * self.words + w] |= kw;
                    }
                }
            }
        }
        m
    }

    pub fn sub(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> BitMat {
        let mut out = BitMat::new(rows.len(), cols.len());
        for (oi, i) in rows.enumerate() {
            for (oj, j) in cols.clone().enumerate() {
                if self.get(i, j) {
                    out.set(oi, oj);
                }
            }
        }
        out
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |i| (0..self.cols).filter(move |&j| self.get(i, j)).map(move |j| (i, j)))
    }
}
