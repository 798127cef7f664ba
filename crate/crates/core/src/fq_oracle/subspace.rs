//! Subspaces of `F_q^n` from reduced row-echelon representatives.

use super::field::Field;

#[derive(Clone, Debug)]
pub struct Subspace {
    pub basis: Vec<Vec<u8>>,
    members: Vec<u64>,
}

impl Subspace {
    #[inline]
    pub fn contains(&self, code: usize) -> bool {
        self.members[code / 64] >> (code % 64) & 1 == 1
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn pivot_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for p in start..n {
            acc.push(p);
            rec(p + 1, n, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every `k`-dimensional subspace of `F_q^n`, each exactly once.
pub fn subspaces(field: &Field, n: usize, k: usize) -> Vec<Subspace> {
    let q = field.order();
    let total = q.pow(n as u32);
    let mut out = Vec::new();
    for pivots in pivot_sets(n, k) {
        // free slots: (row, column) with column > pivot and not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pivots = &pivots;
                (pivots[r] + 1..n)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let choices = q.pow(free.len() as u32);
        let mut vals = vec![0u8; free.len()];
        for code in 0..choices {
            field.decode_into(code, &mut vals);
            let mut basis = vec![vec![0u8; n]; k];
            for (r, &p) in pivots.iter().enumerate() {
                basis[r][p] = 1;
            }
            for (&(r, c), &v) in free.iter().zip(&vals) {
                basis[r][c] = v;
            }
            let mut members = vec![0u64; total.div_ceil(64)];
            let mut coeffs = vec![0u8; k];
            let mut v = vec![0u8; n];
            for comb in 0..q.pow(k as u32) {
                field.decode_into(comb, &mut coeffs);
                v.iter_mut().for_each(|x| *x = 0);
                for (row, &c) in basis.iter().zip(&coeffs) {
                    for (x, &b) in v.iter_mut().zip(row) {
                        *x = field.add(*x, field.mul(c, b));
                    }
                }
                let code = field.encode(&v);
                members[code / 64] |= 1 << (code % 64);
            }
            out.push(Subspace { basis, members });
        }
    }
    out
}
