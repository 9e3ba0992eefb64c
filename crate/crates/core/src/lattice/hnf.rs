//! Row-style Hermite normal form over ℤ for matrices with at most three rows.
//!
//! `H = U·A` with `U` unimodular, `H` in row echelon form, positive pivots,
//! entries above each pivot reduced into `[0, pivot)`, zero rows last. The
//! form is unique for a given `A`, and the Hermite form of a column prefix
//! of `A` is the same prefix of the Hermite form of `A`.

/// Dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: Vec<Vec<i128>>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<i128>>) -> Self {
        Self { rows }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect();
        Self { rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.nrows();
        let m = other.ncols();
        let k = self.ncols();
        let rows = (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| (0..k).map(|t| self.rows[i][t] * other.rows[t][j]).sum())
                    .collect()
            })
            .collect();
        IntMatrix { rows }
    }

    pub fn transpose(&self) -> IntMatrix {
        let rows = (0..self.ncols()).map(|j| self.column(j)).collect();
        IntMatrix { rows }
    }

    /// Determinant of a square matrix of size ≤ 3.
    pub fn det(&self) -> i128 {
        let a = &self.rows;
        match self.nrows() {
            0 => 1,
            1 => a[0][0],
            2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
            3 => {
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                    - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            }
            n => panic!("determinant of {n}x{n} matrix not supported"),
        }
    }

    /// Adjugate of a square matrix of size ≤ 3.
    pub fn adjugate(&self) -> IntMatrix {
        let n = self.nrows();
        if n == 1 {
            return IntMatrix::identity(1);
        }
        let minor = |i: usize, j: usize| -> i128 {
            let rows: Vec<Vec<i128>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| self.rows[r][c])
                        .collect()
                })
                .collect();
            IntMatrix { rows }.det()
        };
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                        sign * minor(j, i)
                    })
                    .collect()
            })
            .collect();
        IntMatrix { rows }
    }

    /// Rank over ℚ (via the Hermite form).
    pub fn rank(&self) -> usize {
        hermite(self).1
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    m.rows.swap(a, b);
}

fn sub_row(m: &mut IntMatrix, target: usize, source: usize, q: i128) {
    if q == 0 {
        return;
    }
    let src = m.rows[source].clone();
    for (t, s) in m.rows[target].iter_mut().zip(src) {
        *t -= q * s;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for v in m.rows[r].iter_mut() {
        *v = -*v;
    }
}

/// Hermite normal form with transform: returns `(H, U, rank)` with `H = U·A`.
pub fn hermite_with_transform(a: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(n);
    let mut pivot_row = 0;
    for col in 0..a.ncols() {
        if pivot_row == n {
            break;
        }
        loop {
            let best = (pivot_row..n)
                .filter(|&r| h.rows[r][col] != 0)
                .min_by_key(|&r| h.rows[r][col].abs());
            let Some(best) = best else { break };
            swap_rows(&mut h, pivot_row, best);
            swap_rows(&mut u, pivot_row, best);
            let p = h.rows[pivot_row][col];
            let mut done = true;
            for r in pivot_row + 1..n {
                let q = h.rows[r][col] / p;
                sub_row(&mut h, r, pivot_row, q);
                sub_row(&mut u, r, pivot_row, q);
                if h.rows[r][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.rows[pivot_row][col] == 0 {
            continue;
        }
        if h.rows[pivot_row][col] < 0 {
            negate_row(&mut h, pivot_row);
            negate_row(&mut u, pivot_row);
        }
        let p = h.rows[pivot_row][col];
        for r in 0..pivot_row {
            let q = h.rows[r][col].div_euclid(p);
            sub_row(&mut h, r, pivot_row, q);
            sub_row(&mut u, r, pivot_row, q);
        }
        pivot_row += 1;
    }
    (h, u, pivot_row)
}

/// Hermite normal form and rank.
pub fn hermite(a: &IntMatrix) -> (IntMatrix, usize) {
    let (h, _, r) = hermite_with_transform(a);
    (h, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i128]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn hermite_is_echelon_and_reduced() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (h, u, r) = hermite_with_transform(&a);
        assert_eq!(r, 3);
        assert_eq!(u.mul(&a), h);
        assert_eq!(u.det().abs(), 1);
        for i in 0..3 {
            for j in 0..i {
                assert_eq!(h.rows[i][j], 0);
            }
            assert!(h.rows[i][i] > 0);
            for k in 0..i {
                assert!(h.rows[k][i] >= 0 && h.rows[k][i] < h.rows[i][i]);
            }
        }
    }

    #[test]
    fn prefix_property() {
        let a = m(&[&[1, -1, 3, 0], &[1, 2, -1, 5], &[0, 1, 1, -2]]);
        let (full, _) = hermite(&a);
        for k in 1..=4 {
            let prefix = IntMatrix::from_rows(a.rows.iter().map(|r| r[..k].to_vec()).collect());
            let (hp, _) = hermite(&prefix);
            for i in 0..3 {
                assert_eq!(hp.rows[i][..], full.rows[i][..k]);
            }
        }
    }

    #[test]
    fn invariant_under_left_unimodular() {
        let a = m(&[&[1, 0, -1, 2], &[0, 1, -1, 1], &[1, 1, -1, 0]]);
        let g = m(&[&[1, 2, 0], &[0, 1, 0], &[-1, 3, 1]]);
        assert_eq!(g.det().abs(), 1);
        assert_eq!(hermite(&a).0, hermite(&g.mul(&a)).0);
    }

    #[test]
    fn rank_deficient() {
        let a = m(&[&[1, 2], &[2, 4], &[3, 6]]);
        let (h, r) = hermite(&a);
        assert_eq!(r, 1);
        assert_eq!(h.rows[1], vec![0, 0]);
    }

    #[test]
    fn adjugate_inverts() {
        let a = m(&[&[2, 1, 0], &[1, 1, 0], &[0, 3, 1]]);
        assert_eq!(a.det(), 1);
        assert_eq!(a.mul(&a.adjugate()), IntMatrix::identity(3));
    }
}
