//! Smith normal form over the integers, with unimodular transforms.

use std::fmt;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[i128] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<i128> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[target] += k · row[source]
    fn add_row(&mut self, target: usize, source: usize, k: i128) {
        for j in 0..self.cols {
            let s = self[(source, j)];
            self[(target, j)] += k * s;
        }
    }

    /// col[target] += k · col[source]
    fn add_col(&mut self, target: usize, source: usize, k: i128) {
        for i in 0..self.rows {
            let s = self[(i, source)];
            self[(i, target)] += k * s;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self[(r, j)] = -self[(r, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = i128;
    fn index(&self, (r, c): (usize, usize)) -> &i128 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut i128 {
        &mut self.data[r * self.cols + c]
    }
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d₁ | d₂ | …`, all nonnegative.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: Matrix,
    pub v: Matrix,
    pub diagonal: Vec<i128>,
    pub rank: usize,
}

pub fn smith_normal_form(m: &Matrix) -> Smith {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = d[(i, j)].abs();
                if x != 0 && best.is_none_or(|(bi, bj)| x < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            let q = d[(i, t)].div_euclid(d[(t, t)]);
            if q != 0 {
                d.add_row(i, t, -q);
                u.add_row(i, t, -q);
            }
            if d[(i, t)] != 0 {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = d[(t, j)].div_euclid(d[(t, t)]);
            if q != 0 {
                d.add_col(j, t, -q);
                v.add_col(j, t, -q);
            }
            if d[(t, j)] != 0 {
                clean = false;
            }
        }
        if !clean {
            // A smaller remainder exists; pick it as the next pivot.
            continue;
        }
        // The pivot must divide the whole trailing block.
        let pivot = d[(t, t)];
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[(i, j)] % pivot != 0));
        if let Some(i) = bad {
            d.add_row(t, i, 1);
            u.add_row(t, i, 1);
            continue;
        }
        if pivot < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let diagonal: Vec<i128> = (0..rows.min(cols)).map(|i| d[(i, i)]).collect();
    let rank = diagonal.iter().filter(|&&x| x != 0).count();
    Smith {
        u,
        v,
        diagonal,
        rank,
    }
}

impl Smith {
    /// Basis of the integer kernel `{x : Mx = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<i128>> {
        (self.rank..self.v.cols()).map(|j| self.v.column(j)).collect()
    }

    /// An integer solution of `Mx = b`, if one exists.
    pub fn solve(&self, b: &[i128]) -> Option<Vec<i128>> {
        let ub = self.u.apply(b);
        let mut y = vec![0i128; self.v.rows()];
        for (i, &c) in ub.iter().enumerate() {
            if i < self.rank {
                let di = self.diagonal[i];
                if c % di != 0 {
                    return None;
                }
                y[i] = c / di;
            } else if c != 0 {
                return None;
            }
        }
        Some(self.v.apply(&y))
    }

    /// Invariant factors of the cokernel `ℤ^rows / image`: the nonunit
    /// diagonal entries, then `0` once per free summand.
    pub fn cokernel_invariants(&self) -> Vec<i128> {
        let rows = self.u.rows();
        let mut out: Vec<i128> = self.diagonal[..self.rank]
            .iter()
            .copied()
            .filter(|&x| x != 1)
            .collect();
        out.extend(std::iter::repeat_n(0, rows - self.rank));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &Matrix) -> Smith {
        let s = smith_normal_form(m);
        let d = s.u.mul(m).mul(&s.v);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expected = if i == j { s.diagonal[i] } else { 0 };
                assert_eq!(d[(i, j)], expected, "{m:?}");
            }
        }
        for w in s.diagonal[..s.rank].windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        s
    }

    #[test]
    fn known_forms() {
        let m = Matrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(check(&m).diagonal, vec![2, 6, 12]);
        let m = Matrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(check(&m).diagonal, vec![1, 6]);
        let m = Matrix::from_rows(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(check(&m).rank, 0);
    }

    #[test]
    fn kernel_and_solve() {
        let m = Matrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let s = check(&m);
        assert_eq!(s.rank, 1);
        let k = s.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).iter().all(|&x| x == 0));
        }
        let x = s.solve(&[3, 6]).unwrap();
        assert_eq!(m.apply(&x), vec![3, 6]);
        assert!(s.solve(&[1, 1]).is_none());
        let two = Matrix::from_rows(&[vec![2]]);
        assert!(check(&two).solve(&[1]).is_none());
        assert_eq!(check(&two).cokernel_invariants(), vec![2]);
    }
}
