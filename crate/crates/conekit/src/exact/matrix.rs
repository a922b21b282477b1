use super::{rat, Rat};
use num::{BigInt, Integer, Zero};

/// Dense rational matrix, row-major. Dimensions are fixed at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = rat(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: Vec<Vec<Rat>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn matvec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        out
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        let mut out = Self::zeros(row_idx.len(), col_idx.len());
        for (i, &r) in row_idx.iter().enumerate() {
            for (j, &c) in col_idx.iter().enumerate() {
                out[(i, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Clears denominators per row, yielding an integer matrix with the same
    /// rank and nullspace.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let lcm = self
                    .row(i)
                    .iter()
                    .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect()
            })
            .collect()
    }

    /// Fraction-free Bareiss echelon form of the row-cleared integer matrix.
    ///
    /// Pivot selection is deterministic: columns scanned left to right, first
    /// unused row with a nonzero entry. Returns the echelon rows together with
    /// the pivot column list.
    fn bareiss_echelon(&self) -> (Vec<Vec<BigInt>>, Vec<usize>) {
        let mut m = self.integer_rows();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut prev = BigInt::from(1);
        let mut k = 0;
        for c in 0..cols {
            let Some(pr) = (k..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(k, pr);
            for i in k + 1..rows {
                for j in c + 1..cols {
                    let num = &m[k][c] * &m[i][j] - &m[i][c] * &m[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m[i][j] = q;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[k][c].clone();
            pivots.push(c);
            k += 1;
            if k == rows {
                break;
            }
        }
        (m, pivots)
    }

    /// Rank and pivot columns via fraction-free elimination.
    pub fn rank_and_pivots(&self) -> (usize, Vec<usize>) {
        let (_, pivots) = self.bareiss_echelon();
        (pivots.len(), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rank_and_pivots().0
    }

    /// Pivot rows and pivot columns, in elimination order (rows are original
    /// indices). A square submatrix on these index sets is nonsingular.
    pub fn pivot_rows_cols(&self) -> (Vec<usize>, Vec<usize>) {
        // Re-run elimination tracking original row positions.
        let mut m = self.integer_rows();
        let mut order: Vec<usize> = (0..self.rows).collect();
        let mut prev = BigInt::from(1);
        let mut prows = Vec::new();
        let mut pcols = Vec::new();
        let mut k = 0;
        for c in 0..self.cols {
            let Some(pr) = (k..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(k, pr);
            order.swap(k, pr);
            for i in k + 1..self.rows {
                for j in c + 1..self.cols {
                    let num = &m[k][c] * &m[i][j] - &m[i][c] * &m[k][j];
                    m[i][j] = num / &prev;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[k][c].clone();
            prows.push(order[k]);
            pcols.push(c);
            k += 1;
            if k == self.rows {
                break;
            }
        }
        (prows, pcols)
    }

    /// Exact kernel basis. Each vector has a 1 at its free column and the
    /// remaining support on pivot columns; count = cols − rank.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (ech, pivots) = self.bareiss_echelon();
        let rank = pivots.len();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = rat(1);
            // Back-substitute through the echelon rows above the free column.
            for i in (0..rank).rev() {
                let p = pivots[i];
                if p > f {
                    continue;
                }
                let mut s = Rat::zero();
                for j in p + 1..self.cols {
                    if !ech[i][j].is_zero() && !v[j].is_zero() {
                        s += Rat::from_integer(ech[i][j].clone()) * &v[j];
                    }
                }
                v[p] = -s / Rat::from_integer(ech[i][p].clone());
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of row vectors `w` with `w · M = 0`; count = rows − rank.
    pub fn left_nullspace(&self) -> Vec<Vec<Rat>> {
        self.transpose().nullspace()
    }

    /// Determinant of a square matrix (fraction-free on the integer lift,
    /// rescaled by the row denominator clearing).
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return rat(1);
        }
        let mut scale = rat(1);
        for i in 0..n {
            let lcm = self
                .row(i)
                .iter()
                .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
            scale *= Rat::from_integer(lcm);
        }
        let mut m = self.integer_rows();
        let mut sign = 1i64;
        let mut prev = BigInt::from(1);
        for k in 0..n {
            let Some(pr) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return Rat::zero();
            };
            if pr != k {
                m.swap(k, pr);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m[i][j] = q;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        Rat::from_integer(BigInt::from(sign)) * Rat::from_integer(m[n - 1][n - 1].clone()) / scale
    }

    /// Solves `M y = b` exactly via pivot columns; `None` when inconsistent.
    /// The solution has zeros at non-pivot columns.
    pub fn solve_particular(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = self.clone();
        aug.cols += 1;
        let mut data = Vec::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.push(b[i].clone());
        }
        aug.data = data;
        let (ech, pivots) = aug.bareiss_echelon();
        if pivots.contains(&self.cols) {
            return None; // pivot in the RHS column: inconsistent
        }
        let mut y = vec![Rat::zero(); self.cols];
        for i in (0..pivots.len()).rev() {
            let p = pivots[i];
            let mut s = Rat::from_integer(ech[i][self.cols].clone());
            for j in p + 1..self.cols {
                if !ech[i][j].is_zero() && !y[j].is_zero() {
                    s -= Rat::from_integer(ech[i][j].clone()) * &y[j];
                }
            }
            y[p] = s / Rat::from_integer(ech[i][p].clone());
        }
        Some(y)
    }

    /// True iff `v` lies in the span of the matrix columns.
    pub fn in_column_space(&self, v: &[Rat]) -> bool {
        self.solve_particular(v).is_some()
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_rat(rng: &mut ChaCha8Rng) -> Rat {
        ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5))
    }

    fn rand_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> RatMatrix {
        RatMatrix::from_rows((0..r).map(|_| (0..c).map(|_| rand_rat(rng)).collect()).collect())
    }

    #[test]
    fn identity_rank() {
        let m = RatMatrix::identity(6);
        assert_eq!(m.rank_and_pivots(), (6, (0..6).collect()));
        assert!(m.nullspace().is_empty());
    }

    #[test]
    fn zero_matrix_rank_and_kernel() {
        let m = RatMatrix::zeros(3, 4);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.nullspace().len(), 4);
        assert_eq!(RatMatrix::zeros(2, 2).left_nullspace().len(), 2);
    }

    #[test]
    fn outer_product_has_rank_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u: Vec<Rat> = (0..8).map(|_| rand_rat(&mut rng)).collect();
        let mut v: Vec<Rat> = (0..8).map(|_| rand_rat(&mut rng)).collect();
        v[0] = rat(1); // keep it nonzero
        let m = RatMatrix::from_rows(
            (0..8).map(|i| (0..8).map(|j| &u[i] * &v[j]).collect()).collect(),
        );
        // u could be zero with tiny probability under another seed; assert the setup
        assert!(u.iter().any(|x| !x.is_zero()));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = rand_matrix(&mut rng, 5, 8);
            let ns = m.nullspace();
            assert_eq!(ns.len(), 8 - m.rank());
            for v in &ns {
                assert!(m.matvec(v).iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn rank_equals_transpose_rank_and_kernel_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let r = rng.gen_range(1..=7);
            let c = rng.gen_range(1..=7);
            let m = rand_matrix(&mut rng, r, c);
            let rank = m.rank();
            assert_eq!(rank, m.transpose().rank());
            assert_eq!(m.nullspace().len(), c - rank);
            assert_eq!(m.left_nullspace().len(), r - rank);
        }
    }

    #[test]
    fn full_row_rank_has_empty_left_nullspace() {
        let m = RatMatrix::from_rows(vec![
            vec![rat(1), rat(0), rat(2), rat(0), rat(1)],
            vec![rat(0), rat(1), rat(0), rat(3), rat(0)],
            vec![rat(0), rat(0), rat(0), rat(1), rat(1)],
        ]);
        assert_eq!(m.rank(), 3);
        assert!(m.left_nullspace().is_empty());
    }

    #[test]
    fn det_small_cases() {
        let m = RatMatrix::from_rows(vec![
            vec![rat(2), rat(1)],
            vec![rat(7), rat(4)],
        ]);
        assert_eq!(m.det(), rat(1));
        let m = RatMatrix::from_rows(vec![
            vec![ratio(1, 2), rat(0)],
            vec![rat(5), ratio(2, 3)],
        ]);
        assert_eq!(m.det(), ratio(1, 3));
        assert_eq!(RatMatrix::zeros(3, 3).det(), rat(0));
    }

    #[test]
    fn det_matches_pivot_submatrix_nonsingularity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let m = rand_matrix(&mut rng, 4, 6);
            let (prows, pcols) = m.pivot_rows_cols();
            if prows.is_empty() {
                continue;
            }
            let sub = m.submatrix(&prows, &pcols);
            assert!(!sub.det().is_zero());
        }
    }

    #[test]
    fn solve_particular_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = rand_matrix(&mut rng, 4, 6);
            let x: Vec<Rat> = (0..6).map(|_| rand_rat(&mut rng)).collect();
            let b = m.matvec(&x);
            let y = m.solve_particular(&b).expect("consistent system");
            assert_eq!(m.matvec(&y), b);
        }
        // inconsistent case
        let m = RatMatrix::from_rows(vec![vec![rat(1), rat(0)], vec![rat(1), rat(0)]]);
        assert!(m.solve_particular(&[rat(1), rat(2)]).is_none());
    }
}
