use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Scalar;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    entries: Vec<C>,
}

/// Exact rational matrix.
pub type ExactMatrix = Matrix<BigRational>;

impl<C: Scalar> Matrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![C::zero(); rows * cols] }
    }

    /// Panics unless every row has the same length.
    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let nrows = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Matrix { rows: nrows, cols, entries: rows.into_iter().flatten().collect() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = C::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &C {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[C] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(C::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)))
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix<C>) -> Matrix<C> {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::<C>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.mul_ref(other.get(k, j));
                    out.entries[i * other.cols + j].add_assign_ref(&t);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Matrix<C> {
        assert_eq!(self.rows, self.cols);
        (0..e).fold(Self::identity(self.rows), |acc, _| acc.mul(self))
    }
}

/// Integer row echelon form by Bareiss fraction-free elimination. Returns the echelon
/// rows and the pivot column of each nonzero row.
fn bareiss_echelon(mut a: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

impl Matrix<BigRational> {
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| (x * &l).to_integer()).collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        bareiss_echelon(self.integer_rows(), self.cols).1.len()
    }

    /// Basis of the right nullspace, each vector scaled to coprime integers with its last
    /// nonzero entry positive. Empty exactly when the columns are independent.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let (ech, pivots) = bareiss_echelon(self.integer_rows(), self.cols);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut x = vec![BigRational::zero(); self.cols];
            x[f] = BigRational::one();
            for (row, &pc) in ech.iter().zip(&pivots).rev() {
                let s = (pc + 1..self.cols).fold(BigRational::zero(), |acc, j| {
                    if row[j].is_zero() {
                        acc
                    } else {
                        acc + BigRational::from_integer(row[j].clone()) * &x[j]
                    }
                });
                x[pc] = -s / BigRational::from_integer(row[pc].clone());
            }
            basis.push(primitive_vector(x));
        }
        basis
    }
}

fn primitive_vector(v: Vec<BigRational>) -> Vec<BigRational> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if let Some(last) = ints.iter().rev().find(|x| !x.is_zero()) {
        if last.is_negative() {
            g = -g;
        }
    }
    ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int_rat;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int_rat(x)).collect()).collect())
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        assert!(m(&[&[1, 0], &[0, 1]]).nullspace().is_empty());
    }

    #[test]
    fn rank_one_example() {
        let ns = m(&[&[1, 1], &[2, 2]]).nullspace();
        assert_eq!(ns, vec![vec![int_rat(-1), int_rat(1)]]);
    }

    #[test]
    fn three_by_four_rank_three() {
        let a = m(&[&[2, -1, 3, 5], &[0, 4, 1, -2], &[7, 1, 0, 3]]);
        assert_eq!(a.rank(), 3);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn matrix_power() {
        let f: Matrix<BigInt> =
            Matrix::from_rows(vec![vec![1.into(), 1.into()], vec![1.into(), 0.into()]]);
        let f5 = f.pow(5);
        assert_eq!(f5.row(0), &[BigInt::from(8), BigInt::from(5)]);
    }
}
