//! Banded matrices and Gaussian elimination with partial pivoting.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Error)]
#[error("banded system is singular at pivot {0}")]
pub struct SingularMatrix(pub usize);

/// Square matrix with `kl` sub- and `ku` superdiagonals. Row `i` stores
/// columns `i − kl ..= i + ku + kl`; the extra `kl` columns hold the
/// fill-in created by row interchanges.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<T>,
}

impl<T: Real> BandedMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self { n, kl, ku, width, data: vec![T::zero(); n * width] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl, "({i}, {j}) outside band");
        i * self.width + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if j + self.kl < i || j > i + self.ku + self.kl {
            return T::zero();
        }
        self.data[self.slot(i, j)]
    }

    /// Adds `v` to entry `(i, j)`, which must lie inside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        assert!(j + self.kl >= i && j <= i + self.ku, "entry ({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(j + self.kl >= i && j <= i + self.ku, "entry ({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] = v;
    }

    /// `y = A x` using the stored band (valid before factorization).
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Solves `A x = b` in place, consuming the matrix.
    pub fn solve(mut self, b: &mut [T]) -> Result<(), SingularMatrix> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let reach = self.ku + self.kl;
        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last_row {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > T::zero()) || !best.is_finite() {
                return Err(SingularMatrix(k));
            }
            let last_col = (k + reach).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let (a, c) = (self.slot(k, j), self.slot(p, j));
                    self.data.swap(a, c);
                }
                b.swap(k, p);
            }
            let pivot = self.data[self.slot(k, k)];
            for i in k + 1..=last_row {
                let s = self.slot(i, k);
                let f = self.data[s] / pivot;
                if f == T::zero() {
                    continue;
                }
                self.data[s] = T::zero();
                for j in k + 1..=last_col {
                    let src = self.data[self.slot(k, j)];
                    let dst = self.slot(i, j);
                    self.data[dst] -= f * src;
                }
                let bk = b[k];
                b[i] -= f * bk;
            }
        }
        for i in (0..n).rev() {
            let last_col = (i + reach).min(n - 1);
            let mut acc = b[i];
            for j in i + 1..=last_col {
                acc -= self.data[self.slot(i, j)] * b[j];
            }
            b[i] = acc / self.data[self.slot(i, i)];
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solves_random_banded_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(n, kl, ku) in &[(1, 0, 0), (5, 1, 1), (40, 3, 5), (60, 5, 2)] {
            let mut a = BandedMatrix::<f64>::zeros(n, kl, ku);
            for i in 0..n {
                for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                    a.set(i, j, rng.gen_range(-1.0..1.0));
                }
            }
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let mut b = a.mul_vec(&x);
            a.solve(&mut b).unwrap();
            for (got, want) in b.iter().zip(&x) {
                assert!((got - want).abs() < 1e-9, "{got} vs {want}");
            }
        }
    }

    #[test]
    fn needs_pivoting() {
        // [[0, 1], [1, 0]]
        let mut a = BandedMatrix::<f64>::zeros(2, 1, 1);
        a.set(0, 1, 1.0);
        a.set(1, 0, 1.0);
        let mut b = vec![3.0, 4.0];
        a.solve(&mut b).unwrap();
        assert_eq!(b, vec![4.0, 3.0]);
    }

    #[test]
    fn reports_singularity() {
        let a = BandedMatrix::<f64>::zeros(3, 1, 1);
        assert_eq!(a.solve(&mut [1.0, 1.0, 1.0]), Err(SingularMatrix(0)));
    }
}
