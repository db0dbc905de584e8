use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// A dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        IntMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self::new(r, c, rows.iter().flatten().cloned().collect())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(&v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
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

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    out[(i, j)] += a * &o[(k, j)];
                }
            }
        }
        out
    }

    /// Determinant by cofactor expansion; intended for size at most 4.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let idx: Vec<usize> = (0..self.cols).collect();
        self.cofactor_det(0, &idx)
    }

    fn cofactor_det(&self, row: usize, cols: &[usize]) -> BigInt {
        match cols.len() {
            0 => BigInt::one(),
            1 => self[(row, cols[0])].clone(),
            2 => {
                &self[(row, cols[0])] * &self[(row + 1, cols[1])]
                    - &self[(row, cols[1])] * &self[(row + 1, cols[0])]
            }
            _ => {
                let mut acc = BigInt::zero();
                for (k, &c) in cols.iter().enumerate() {
                    let a = &self[(row, c)];
                    if a.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let minor = self.cofactor_det(row + 1, &rest);
                    if k % 2 == 0 {
                        acc += a * minor;
                    } else {
                        acc -= a * minor;
                    }
                }
                acc
            }
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det_bareiss(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    /// Adjugate of a square matrix of size at most 4.
    pub fn adjugate(&self) -> Self {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut adj = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<BigInt>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| self[(r, c)].clone())
                            .collect()
                    })
                    .collect();
                let d = if n == 1 {
                    BigInt::one()
                } else {
                    IntMatrix::from_rows(&minor).det()
                };
                adj[(j, i)] = if (i + j) % 2 == 0 { d } else { -d };
            }
        }
        adj
    }

    /// A basis of the lattice `{ x in Z^cols : self * x = 0 }`, computed by
    /// unimodular column reduction.
    pub fn integer_kernel(&self) -> Vec<Vec<BigInt>> {
        let (r, c) = (self.rows, self.cols);
        let mut a = self.to_rows();
        let mut u: Vec<Vec<BigInt>> = IntMatrix::identity(c).to_rows();
        let mut pivot_col = 0;
        for row in 0..r {
            if pivot_col >= c {
                break;
            }
            // Column gcd elimination on `row` among columns pivot_col..c.
            loop {
                let nz: Vec<usize> = (pivot_col..c).filter(|&j| !a[row][j].is_zero()).collect();
                if nz.len() <= 1 {
                    if let Some(&j) = nz.first() {
                        swap_cols(&mut a, &mut u, j, pivot_col);
                        pivot_col += 1;
                    }
                    break;
                }
                let jmin = *nz
                    .iter()
                    .min_by_key(|&&j| a[row][j].abs())
                    .unwrap();
                for &j in &nz {
                    if j == jmin {
                        continue;
                    }
                    let q = a[row][j].div_floor(&a[row][jmin]);
                    add_col_multiple(&mut a, &mut u, j, jmin, &q);
                }
            }
        }
        (pivot_col..c)
            .map(|j| u.iter().map(|row| row[j].clone()).collect())
            .collect()
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in a.iter_mut().chain(u.iter_mut()) {
        row.swap(i, j);
    }
}

/// Column `dst -= q * column src`.
fn add_col_multiple(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in a.iter_mut().chain(u.iter_mut()) {
        let t = &row[src] * q;
        row[dst] -= t;
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (k, x) in self.row(i).iter().enumerate() {
                if k > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// A basis of the right nullspace of a rational matrix. Rows are cleared
/// of denominators and eliminated fraction-free; each basis vector is
/// scaled to a primitive integer vector whose free coordinate is positive.
pub fn nullspace_rational(m: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let cols = m.first().map_or(0, |r| r.len());
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("ragged matrix".into()));
    }
    let mut rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| {
            let den = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter()
                .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i == rank || rows[i][col].is_zero() {
                continue;
            }
            let a = rows[rank][col].clone();
            let b = rows[i][col].clone();
            let (pivot_row, target) = (rows[rank].clone(), &mut rows[i]);
            for (t, pv) in target.iter_mut().zip(pivot_row.iter()) {
                *t = &*t * &a - pv * &b;
            }
            let g = target.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for t in target.iter_mut() {
                    *t /= &g;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -Rational::new(rows[r][f].clone(), rows[r][pc].clone());
        }
        let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = v
            .iter()
            .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        basis.push(
            ints.into_iter()
                .map(|x| Rational::from_integer(x / &g))
                .collect(),
        );
    }
    Ok(basis)
}

/// Solve `m x = rhs` over Q for a square nonsingular `m`.
pub fn solve_rational(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.clone());
            v
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let inv = Rational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pivot = a[col].clone();
                for (x, pv) in a[i].iter_mut().zip(pivot.iter()) {
                    *x -= &f * pv;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cofactor_and_bareiss_agree() {
        let m = IntMatrix::from_i64(&[&[5, 112, 1], &[112, 2520, 22], &[1, 22, 1]]);
        assert_eq!(m.det(), BigInt::from(44));
        assert_eq!(m.det_bareiss(), BigInt::from(44));
        let z = IntMatrix::from_i64(&[&[0, 1, 2, 3], &[1, 0, 4, 5], &[2, 4, 0, 6], &[3, 5, 6, 0]]);
        assert_eq!(z.det(), z.det_bareiss());
    }

    #[test]
    fn kernel_spans_solutions() {
        let m = IntMatrix::from_i64(&[&[2, 4, 6, 8], &[0, 3, 0, 9]]);
        let k = m.integer_kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            let col = IntMatrix::new(4, 1, v.clone());
            assert!(m.mul(&col).to_rows().iter().all(|r| r[0].is_zero()));
        }
    }

    #[test]
    fn adjugate_identity() {
        let m = IntMatrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let p = m.mul(&m.adjugate());
        let d = m.det();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p[(i, j)], if i == j { d.clone() } else { BigInt::zero() });
            }
        }
    }

    #[test]
    fn rational_nullspace() {
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        let m = vec![vec![q(1, 2), q(1, 3), q(0, 1)], vec![q(0, 1), q(1, 1), q(-1, 1)]];
        let ns = nullspace_rational(&m).unwrap();
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![q(-2, 1), q(3, 1), q(3, 1)]);
    }
}
