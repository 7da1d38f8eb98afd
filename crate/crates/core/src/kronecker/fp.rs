//! Dense linear algebra over `F_p` for small `p`, and enumeration of
//! subspaces by reduced row echelon form.

use std::ops::ControlFlow;

/// `F_p` with `p` prime and below `2^31`, so products fit in `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        debug_assert!(is_prime(p) && p < (1 << 31));
        Fp { p }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        let (mut base, mut e, mut acc) = (a, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Rank of the given rows; consumes them as scratch space.
    pub fn rank(self, mut rows: Vec<Vec<u64>>) -> usize {
        let Some(width) = rows.first().map(Vec::len) else {
            return 0;
        };
        let mut rank = 0;
        for col in 0..width {
            let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(rows[rank][col]);
            for x in rows[rank].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in rank + 1..rows.len() {
                let f = rows[i][col];
                if f != 0 {
                    for j in col..width {
                        let t = self.mul(f, rows[rank][j]);
                        rows[i][j] = self.sub(rows[i][j], t);
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// `A x` for `A` given as rows.
    pub fn apply(self, a: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
        a.iter().map(|row| row.iter().zip(x).fold(0, |acc, (&r, &v)| self.add(acc, self.mul(r, v)))).collect()
    }

    pub fn matmul(self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| row.iter().zip(b).fold(0, |acc, (&x, brow)| self.add(acc, self.mul(x, brow[j]))))
                    .collect()
            })
            .collect()
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn invert(self, a: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
        let k = a.len();
        let mut aug: Vec<Vec<u64>> = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..k).map(|j| u64::from(i == j)));
                r
            })
            .collect();
        for col in 0..k {
            let piv = (col..k).find(|&i| aug[i][col] != 0)?;
            aug.swap(col, piv);
            let inv = self.inv(aug[col][col]);
            for x in aug[col].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..k {
                let f = aug[i][col];
                if i != col && f != 0 {
                    for j in 0..2 * k {
                        let t = self.mul(f, aug[col][j]);
                        aug[i][j] = self.sub(aug[i][j], t);
                    }
                }
            }
        }
        Some(aug.into_iter().map(|r| r[k..].to_vec()).collect())
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Visits every `k`-dimensional subspace of `F_p^dim` once, as its reduced
/// row echelon basis. Order: pivot columns lexicographically, then the free
/// entries read row by row as a base-`p` odometer with the last entry
/// fastest.
pub(crate) fn for_each_subspace<B>(
    dim: usize,
    k: usize,
    p: u64,
    f: &mut impl FnMut(&[Vec<u64>]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if k > dim {
        return ControlFlow::Continue(());
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free slots: (row, col) with col > pivot[row] and col not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pv = &pivots;
                (pv[r] + 1..dim).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut basis = vec![vec![0u64; dim]; k];
        for (r, &c) in pivots.iter().enumerate() {
            basis[r][c] = 1;
        }
        let mut digits = vec![0u64; free.len()];
        loop {
            for (&(r, c), &d) in free.iter().zip(&digits) {
                basis[r][c] = d;
            }
            f(&basis)?;
            if !bump(&mut digits, p) {
                break;
            }
        }
        // next pivot combination
        let mut i = k;
        loop {
            if i == 0 {
                return ControlFlow::Continue(());
            }
            i -= 1;
            if pivots[i] < dim - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Base-`p` increment with the last digit fastest; `false` on wrap-around.
pub(crate) fn bump(digits: &mut [u64], p: u64) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}
