use std::fmt;

/// Square nonnegative integer matrix indexed by vertex ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<u64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.n + j] = x;
    }

    pub fn add_at(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.n + j] += x;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.row(i).iter().sum()
    }

    pub fn column_sum(&self, j: usize) -> u64 {
        (0..self.n).map(|i| self.get(i, j)).sum()
    }

    /// Matrix product. Panics on overflow rather than wrapping.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let mut out = IntMatrix::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..self.n {
                    let term = a.checked_mul(other.get(k, j)).expect("vertex matrix overflow");
                    let slot = &mut out.data[i * self.n + j];
                    *slot = slot.checked_add(term).expect("vertex matrix overflow");
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> IntMatrix {
        (0..e).fold(IntMatrix::identity(self.n), |acc, _| acc.mul(self))
    }

    /// Kronecker product, indexing `(i₁, i₂) ↦ i₁·n₂ + i₂`.
    pub fn kronecker(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n * other.n;
        let mut out = IntMatrix::zeros(n);
        for i1 in 0..self.n {
            for j1 in 0..self.n {
                let a = self.get(i1, j1);
                for i2 in 0..other.n {
                    for j2 in 0..other.n {
                        out.set(i1 * other.n + i2, j1 * other.n + j2, a * other.get(i2, j2));
                    }
                }
            }
        }
        out
    }

    /// Row-vector times matrix.
    pub fn left_apply(&self, v: &[u64]) -> Vec<u64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| v[i] * self.get(i, j)).sum())
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
