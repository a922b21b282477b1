use super::{Coeff, Jet, Rat, RatMatrix};

/// Dense matrix of jets with one shared truncation order.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMatrix<C: Coeff = Rat> {
    rows: usize,
    cols: usize,
    order: usize,
    entries: Vec<Jet<C>>,
}

impl<C: Coeff> SeriesMatrix<C> {
    pub fn zeros(rows: usize, cols: usize, order: usize) -> Self {
        Self { rows, cols, order, entries: vec![Jet::zero(order); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, order: usize, mut f: impl FnMut(usize, usize) -> Jet<C>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j).truncate(order));
            }
        }
        Self { rows, cols, order, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &Jet<C> {
        assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Jet<C>) {
        assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j] = v.truncate(self.order);
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        Self::from_fn(row_idx.len(), col_idx.len(), self.order, |i, j| {
            self.get(row_idx[i], col_idx[j]).clone()
        })
    }

    /// Matrix of the order-m Taylor coefficients.
    pub fn coeff_matrix_with(&self, m: usize, to_rat: impl Fn(&C) -> Rat) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = to_rat(self.get(i, j).coeff(m));
            }
        }
        out
    }
}

impl SeriesMatrix<Rat> {
    pub fn coeff_matrix(&self, m: usize) -> RatMatrix {
        self.coeff_matrix_with(m, Rat::clone)
    }

    pub fn constant_matrix(&self) -> RatMatrix {
        self.coeff_matrix(0)
    }

    /// Exact determinant as a jet of the matrix order.
    ///
    /// When the value matrix is invertible this is unit-pivot elimination over
    /// the series ring. When it is singular, kernel-directed column additions
    /// push the affected columns to positive valuation, a power of `t` is
    /// factored out (determinant is multilinear in columns), and the smaller
    /// problem recurses; once the factored exponent exceeds the truncation
    /// order the determinant is zero at this order.
    pub fn det(&self) -> Jet<Rat> {
        assert_eq!(self.rows, self.cols, "determinant of non-square series matrix");
        let m: Vec<Vec<Jet<Rat>>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect();
        det_rec(m, self.order)
    }
}

fn det_rec(mut m: Vec<Vec<Jet<Rat>>>, budget: usize) -> Jet<Rat> {
    let n = m.len();
    if n == 0 {
        return Jet::constant(num::One::one(), budget);
    }
    let a0 = RatMatrix::from_rows(
        m.iter()
            .map(|row| row.iter().map(|j| j.coeff(0).clone()).collect())
            .collect(),
    );
    let (rank, pivots) = a0.rank_and_pivots();
    if rank == n {
        return det_unit_lu(m, budget);
    }
    // Column additions from the kernel of the value matrix: each kernel vector
    // has coefficient 1 at its free column, so replacing that column by A·v is
    // an elementary operation and leaves det unchanged.
    let kernel = a0.nullspace();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut shift_total = 0usize;
    for (&f, v) in free.iter().zip(&kernel) {
        let mut col: Vec<Jet<Rat>> = (0..n).map(|_| Jet::zero(budget)).collect();
        for (j, c) in v.iter().enumerate() {
            if num::Zero::is_zero(c) {
                continue;
            }
            for (i, cell) in col.iter_mut().enumerate() {
                *cell = cell.add(&m[i][j].scale(c));
            }
        }
        // The new column has zero value part by construction.
        let val = col.iter().filter_map(|j| j.valuation()).min();
        match val {
            None => return Jet::zero(budget), // a column vanished identically
            Some(v) => {
                debug_assert!(v >= 1);
                shift_total += v;
                if shift_total > budget {
                    return Jet::zero(budget);
                }
                for (i, cell) in col.into_iter().enumerate() {
                    m[i][f] = cell.shift_down(v).truncate(budget);
                }
            }
        }
    }
    let reduced = budget - shift_total;
    let sub: Vec<Vec<Jet<Rat>>> = m
        .into_iter()
        .map(|row| row.into_iter().map(|j| j.truncate(reduced)).collect())
        .collect();
    det_rec(sub, reduced).shift_up(shift_total).truncate(budget)
}

/// Gaussian elimination with unit pivots; requires the value matrix to be
/// invertible (then every Schur complement keeps an invertible value part).
fn det_unit_lu(mut m: Vec<Vec<Jet<Rat>>>, budget: usize) -> Jet<Rat> {
    let n = m.len();
    let mut det = Jet::constant(num::One::one(), budget);
    let mut sign_flip = false;
    for c in 0..n {
        let pr = (c..n)
            .find(|&i| !Coeff::is_zero(m[i][c].coeff(0)))
            .expect("invertible value matrix keeps a unit pivot");
        if pr != c {
            m.swap(c, pr);
            sign_flip = !sign_flip;
        }
        let pivot = m[c][c].clone();
        let inv = pivot.recip().expect("unit pivot");
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].mul(&inv);
            for j in c..n {
                let adj = factor.mul(&m[c][j]);
                m[i][j] = m[i][j].sub(&adj);
            }
        }
        det = det.mul(&pivot);
    }
    if sign_flip {
        det.neg()
    } else {
        det
    }
}
