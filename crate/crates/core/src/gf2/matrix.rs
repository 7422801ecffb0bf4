use std::fmt;

use super::Gf2Vector;

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    cols: usize,
    rows: Vec<Gf2Vector>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct RowReduction {
    /// Reduced row-echelon form; the zero rows are kept at the bottom.
    pub reduced: Gf2Matrix,
    pub rank: usize,
    /// `pivot_columns[r]` is the pivot column of row `r` of `reduced`.
    pub pivot_columns: Vec<usize>,
}

/// Solution set `{offset + span(kernel_basis)}` of a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolutionSet {
    /// A particular solution, or `None` when the system is inconsistent.
    pub offset: Option<Gf2Vector>,
    pub kernel_basis: Vec<Gf2Vector>,
}

impl AffineSolutionSet {
    pub fn is_consistent(&self) -> bool {
        self.offset.is_some()
    }

    /// Dimension of the solution coset, when it exists.
    pub fn dimension(&self) -> Option<usize> {
        self.offset.as_ref().map(|_| self.kernel_basis.len())
    }
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { cols, rows: vec![Gf2Vector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self { cols: n, rows: (0..n).map(|i| Gf2Vector::unit(n, i)).collect() }
    }

    /// # Panics
    /// If the rows do not all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Gf2Vector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length does not match column count");
        }
        Self { cols, rows }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Gf2Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length does not match row count");
            for i in c.ones_iter() {
                m.rows[i].set(j, true);
            }
        }
        m
    }

    /// Parses rows written as bit strings, e.g. `["110", "011"]`.
    pub fn parse_rows(rows: &[&str]) -> Option<Self> {
        let parsed: Option<Vec<Gf2Vector>> = rows.iter().map(|r| Gf2Vector::parse_bits(r)).collect();
        let parsed = parsed?;
        let cols = parsed.first().map_or(0, Gf2Vector::len);
        if parsed.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Self { cols, rows: parsed })
    }

    #[inline]
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Gf2Vector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Gf2Vector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn push_row(&mut self, row: Gf2Vector) {
        assert_eq!(row.len(), self.cols, "row length does not match column count");
        self.rows.push(row);
    }

    pub fn column(&self, j: usize) -> Gf2Vector {
        Gf2Vector::from_bools(&self.rows.iter().map(|r| r.get(j)).collect::<Vec<_>>())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones_iter() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Computes `self · xᵀ`.
    pub fn mul_vec(&self, x: &Gf2Vector) -> Gf2Vector {
        assert_eq!(x.len(), self.cols, "vector length does not match column count");
        Gf2Vector::from_bools(&self.rows.iter().map(|r| r.dot(x)).collect::<Vec<_>>())
    }

    pub fn row_reduce(&self) -> RowReduction {
        let mut reduced = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == reduced.rows.len() {
                break;
            }
            let Some(p) = (rank..reduced.rows.len()).find(|&r| reduced.rows[r].get(col)) else {
                continue;
            };
            reduced.rows.swap(rank, p);
            let pivot_row = reduced.rows[rank].clone();
            for (r, row) in reduced.rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        RowReduction { reduced, rank, pivot_columns: pivots }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }

    /// Basis of `{x : self · xᵀ = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Gf2Vector> {
        let RowReduction { reduced, rank, pivot_columns } = self.row_reduce();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_columns {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = Gf2Vector::unit(self.cols, f);
                for (row, &pc) in reduced.rows[..rank].iter().zip(&pivot_columns) {
                    if row.get(f) {
                        v.set(pc, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Solves `self · xᵀ = target`.
    pub fn solve_affine(&self, target: &Gf2Vector) -> AffineSolutionSet {
        assert_eq!(target.len(), self.rows.len(), "target length does not match row count");
        // Eliminate on the augmented matrix [self | target].
        let augmented = Self {
            cols: self.cols + 1,
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let mut a = r.clone();
                    a.push(target.get(i));
                    a
                })
                .collect(),
        };
        let red = augmented.row_reduce();
        let kernel_basis = self.kernel_basis();
        if red.pivot_columns.last() == Some(&self.cols) {
            return AffineSolutionSet { offset: None, kernel_basis };
        }
        let mut offset = Gf2Vector::zeros(self.cols);
        for (r, &c) in red.pivot_columns.iter().enumerate() {
            if red.reduced.rows[r].get(self.cols) {
                offset.set(c, true);
            }
        }
        AffineSolutionSet { offset: Some(offset), kernel_basis }
    }

    /// Nonzero rows of the reduced row-echelon form: a basis of the row space.
    pub fn row_space_basis(&self) -> Vec<Gf2Vector> {
        let red = self.row_reduce();
        red.reduced.rows.into_iter().take(red.rank).collect()
    }
}

/// Basis of the dual `S^⊥` of `S = span(basis)` inside `GF(2)^n`.
///
/// `n` is needed because an empty basis carries no length information.
pub fn dual_basis(basis: &[Gf2Vector], n: usize) -> Vec<Gf2Vector> {
    Gf2Matrix::from_rows(n, basis.to_vec()).kernel_basis()
}

/// Whether `v` lies in `span(basis)`.
pub fn in_span(basis: &[Gf2Vector], v: &Gf2Vector) -> bool {
    let n = v.len();
    let m = Gf2Matrix::from_columns(n, basis);
    m.solve_affine(v).is_consistent()
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}
