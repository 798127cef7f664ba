//! Brute-force semistable point counts over `F_4`, `F_9` and `F_25`.
//!
//! A representation is destabilized when some tuple of subspaces (one per
//! vertex) of dimension `e` with `slope(e) > slope(d)` is invariant under all
//! arrows. The arrows except the last are enumerated matrix by matrix; the
//! last arrow is handled by precomputed bitsets over all its matrices, so
//! that the union of the bitsets of the tuples preserved by the prefix marks
//! exactly the destabilized completions.

mod field;
mod subspace;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::engine::count_semistable_series;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::quiver::{DimVector, Quiver};
use crate::stability::Stability;

pub use field::Field;
pub use subspace::{subspaces, Subspace};

/// Default cap on the number of representations `q^{dim X_d}`.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest bitset table, in bits, before falling back to direct testing.
const BITSET_LIMIT: usize = 1 << 30;

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub budget: u64,
    pub exec: Exec,
    /// Test every representation individually instead of using bitsets.
    pub direct: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            budget: DEFAULT_BUDGET,
            exec: Exec::default(),
            direct: false,
        }
    }
}

struct Arrow {
    s: usize,
    t: usize,
    rows: usize,
    cols: usize,
    /// `q^{rows·cols}`.
    count: usize,
}

struct Problem {
    field: Field,
    arrows: Vec<Arrow>,
    /// `subs[i][k]`: the `k`-dimensional subspaces at vertex `i`.
    subs: Vec<Vec<Vec<Subspace>>>,
    /// Destabilizing candidates as `(e, subspace index per vertex)`.
    tuples: Vec<(DimVector, Vec<usize>)>,
    dim_x: u32,
}

impl Problem {
    fn new(quiver: &Quiver, stability: &Stability, d: &DimVector, q: u64) -> Result<Problem> {
        quiver.check_len(d)?;
        let field = Field::new(q)?;
        let dims = d.entries();
        let mut subs = Vec::new();
        for &n in dims {
            subs.push(
                (0..=n as usize)
                    .map(|k| subspaces(&field, n as usize, k))
                    .collect::<Vec<_>>(),
            );
        }
        let mut tuples = Vec::new();
        if !d.is_zero() {
            let mu = stability.slope(d)?;
            for e in d.box_iter() {
                if e.is_zero() || e == *d || stability.slope(&e)? <= mu {
                    continue;
                }
                let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
                for (i, &k) in e.entries().iter().enumerate() {
                    let m = subs[i][k as usize].len();
                    acc = acc
                        .into_iter()
                        .flat_map(|p| {
                            (0..m).map(move |j| {
                                let mut p = p.clone();
                                p.push(j);
                                p
                            })
                        })
                        .collect();
                }
                tuples.extend(acc.into_iter().map(|idx| (e.clone(), idx)));
            }
        }
        let qs = field.order();
        let arrows = quiver
            .arrows()
            .iter()
            .map(|&(s, t)| {
                let (rows, cols) = (dims[t] as usize, dims[s] as usize);
                Arrow {
                    s,
                    t,
                    rows,
                    cols,
                    count: qs.pow((rows * cols) as u32),
                }
            })
            .collect();
        Ok(Problem {
            field,
            arrows,
            subs,
            tuples,
            dim_x: quiver.rep_space_dim(d) as u32,
        })
    }

    fn subspace(&self, tuple: usize, vertex: usize) -> &Subspace {
        let (e, idx) = &self.tuples[tuple];
        &self.subs[vertex][e.entries()[vertex] as usize][idx[vertex]]
    }

    fn matrix(&self, arrow: usize, code: usize) -> Vec<u8> {
        let a = &self.arrows[arrow];
        let mut m = vec![0u8; a.rows * a.cols];
        self.field.decode_into(code, &mut m);
        m
    }

    /// `M(U_s) ⊆ U_t` for the matrix `m` of `arrow`.
    fn preserves(&self, arrow: usize, m: &[u8], tuple: usize) -> bool {
        let a = &self.arrows[arrow];
        let us = self.subspace(tuple, a.s);
        let ut = self.subspace(tuple, a.t);
        let mut img = vec![0u8; a.rows];
        us.basis.iter().all(|b| {
            self.field.apply(m, a.rows, a.cols, b, &mut img);
            ut.contains(self.field.encode(&img))
        })
    }

    /// True if some candidate tuple is a subrepresentation of `mats`.
    #[cfg(test)]
    fn destabilized(&self, mats: &[Vec<u8>]) -> bool {
        (0..self.tuples.len()).any(|t| (0..self.arrows.len()).all(|a| self.preserves(a, &mats[a], t)))
    }

    fn count(&self, opts: &OracleOptions) -> u64 {
        let k = self.arrows.len();
        if self.tuples.is_empty() {
            return (self.field.order() as u64).pow(self.dim_x);
        }
        if k == 0 {
            return 0;
        }
        let last = k - 1;
        let n_last = self.arrows[last].count;
        let use_bitsets = !opts.direct && self.tuples.len().saturating_mul(n_last) <= BITSET_LIMIT;
        let tuple_ids: Vec<usize> = (0..self.tuples.len()).collect();
        let bitsets: Vec<Vec<u64>> = if use_bitsets {
            opts.exec.map(&tuple_ids, |&t| {
                let mut bits = vec![0u64; n_last.div_ceil(64)];
                for code in 0..n_last {
                    if self.preserves(last, &self.matrix(last, code), t) {
                        bits[code / 64] |= 1 << (code % 64);
                    }
                }
                bits
            })
        } else {
            Vec::new()
        };

        // Semistable completions of a fixed prefix of matrices.
        let complete = |prefix: &[Vec<u8>]| -> u64 {
            let live: Vec<usize> = (0..self.tuples.len())
                .filter(|&t| prefix.iter().enumerate().all(|(a, m)| self.preserves(a, m, t)))
                .collect();
            if live.is_empty() {
                return n_last as u64;
            }
            if use_bitsets {
                let mut union = vec![0u64; n_last.div_ceil(64)];
                for &t in &live {
                    for (u, b) in union.iter_mut().zip(&bitsets[t]) {
                        *u |= b;
                    }
                }
                n_last as u64 - union.iter().map(|w| w.count_ones() as u64).sum::<u64>()
            } else {
                (0..n_last)
                    .filter(|&code| {
                        let m = self.matrix(last, code);
                        !live.iter().any(|&t| self.preserves(last, &m, t))
                    })
                    .count() as u64
            }
        };

        if k == 1 {
            return complete(&[]);
        }
        // Split on the first arrow's matrix; the middle arrows run inline.
        let middle: usize = self.arrows[1..last].iter().map(|a| a.count).product();
        opts.exec.sum_range(self.arrows[0].count as u64, |c0| {
            let mut prefix = vec![self.matrix(0, c0 as usize)];
            let mut total = 0;
            for mut code in 0..middle {
                prefix.truncate(1);
                for a in 1..last {
                    let n = self.arrows[a].count;
                    prefix.push(self.matrix(a, code % n));
                    code /= n;
                }
                total += complete(&prefix);
            }
            total
        })
    }
}

fn check_budget(quiver: &Quiver, d: &DimVector, q: u64, budget: u64) -> Result<()> {
    let required = BigInt::from(q).pow(quiver.rep_space_dim(d) as u32);
    if required > BigInt::from(budget) {
        return Err(Error::BudgetExceeded {
            required: required.to_string(),
            budget,
        });
    }
    Ok(())
}

pub fn enumerate_ss_count(quiver: &Quiver, stability: &Stability, d: &DimVector, q: u64) -> Result<u64> {
    enumerate_ss_count_with(quiver, stability, d, q, &OracleOptions::default())
}

/// Number of `ζ`-semistable points of `X_d(F_q)`.
pub fn enumerate_ss_count_with(
    quiver: &Quiver,
    stability: &Stability,
    d: &DimVector,
    q: u64,
    opts: &OracleOptions,
) -> Result<u64> {
    let problem = Problem::new(quiver, stability, d, q)?;
    check_budget(quiver, d, q, opts.budget)?;
    Ok(problem.count(opts))
}

/// `|G_d(F_q)|`.
pub fn group_order_at(d: &DimVector, q: u64) -> BigInt {
    let q = BigInt::from(q);
    let mut acc = BigInt::from(1);
    for &n in d.entries() {
        let qn = q.pow(n);
        for j in 0..n {
            acc *= &qn - q.pow(j);
        }
    }
    acc
}

pub fn stacky_count(quiver: &Quiver, stability: &Stability, d: &DimVector, q: u64) -> Result<BigRational> {
    stacky_count_with(quiver, stability, d, q, &OracleOptions::default())
}

pub fn stacky_count_with(
    quiver: &Quiver,
    stability: &Stability,
    d: &DimVector,
    q: u64,
    opts: &OracleOptions,
) -> Result<BigRational> {
    let n = enumerate_ss_count_with(quiver, stability, d, q, opts)?;
    Ok(BigRational::new(BigInt::from(n), group_order_at(d, q)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRow {
    pub d: DimVector,
    pub q: u64,
    pub semistable_points: u64,
    pub group_order: BigInt,
    pub stacky: BigRational,
    /// The recursion's `c^{ss}_d` evaluated at `t = √q`.
    pub predicted: BigRational,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.matched)
    }

    pub fn mismatches(&self) -> Vec<&OracleRow> {
        self.rows.iter().filter(|r| !r.matched).collect()
    }
}

fn integer_sqrt(q: u64) -> Result<u64> {
    let r = (q as f64).sqrt().round() as u64;
    if r * r != q {
        return Err(Error::UnsupportedField(q));
    }
    Ok(r)
}

pub fn oracle_check(quiver: &Quiver, stability: &Stability, bound: &DimVector, q_list: &[u64]) -> Result<OracleReport> {
    oracle_check_with(quiver, stability, bound, q_list, &OracleOptions::default())
}

/// Compares brute-force stacky counts with the HN recursion for every
/// `d <= box` and every `q` in the list.
pub fn oracle_check_with(
    quiver: &Quiver,
    stability: &Stability,
    bound: &DimVector,
    q_list: &[u64],
    opts: &OracleOptions,
) -> Result<OracleReport> {
    let series = count_semistable_series(quiver, stability, bound)?;
    let mut rows = Vec::new();
    for &q in q_list {
        Field::new(q)?;
        let t0 = BigRational::from_integer(BigInt::from(integer_sqrt(q)?));
        for d in bound.graded_box() {
            check_budget(quiver, &d, q, opts.budget)?;
        }
        for d in bound.graded_box() {
            let semistable_points = enumerate_ss_count_with(quiver, stability, &d, q, opts)?;
            let group_order = group_order_at(&d, q);
            let stacky = BigRational::new(BigInt::from(semistable_points), group_order.clone());
            let predicted = series.coeff(&d).eval_at(&t0)?;
            rows.push(OracleRow {
                matched: stacky == predicted,
                d,
                q,
                semistable_points,
                group_order,
                stacky,
                predicted,
            });
        }
    }
    Ok(OracleReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    fn chamber_a() -> Stability {
        Stability::from_ints(&[(-1, 1), (0, 1)]).unwrap()
    }

    fn chamber_b() -> Stability {
        Stability::from_ints(&[(0, 1), (-1, 1)]).unwrap()
    }

    #[test]
    fn a2_counts() {
        let a2 = Quiver::a2();
        assert_eq!(enumerate_ss_count(&a2, &chamber_a(), &dv(&[1, 1]), 4).unwrap(), 3);
        assert_eq!(enumerate_ss_count(&a2, &chamber_b(), &dv(&[1, 1]), 4).unwrap(), 0);
        assert_eq!(enumerate_ss_count(&a2, &chamber_a(), &dv(&[0, 0]), 4).unwrap(), 1);
        assert_eq!(
            stacky_count(&a2, &chamber_a(), &dv(&[1, 1]), 4).unwrap(),
            BigRational::new(1.into(), 3.into())
        );
    }

    #[test]
    fn trivial_stability_counts() {
        let j = Quiver::jordan();
        assert_eq!(
            stacky_count(&j, &Stability::trivial(1), &dv(&[1]), 4).unwrap(),
            BigRational::new(4.into(), 3.into())
        );
        assert_eq!(
            stacky_count(&j, &Stability::trivial(1), &dv(&[2]), 4).unwrap(),
            BigRational::new(64.into(), 45.into())
        );
        let k2 = Quiver::kronecker(2);
        assert_eq!(
            stacky_count(&k2, &Stability::trivial(2), &dv(&[1, 1]), 4).unwrap(),
            BigRational::new(16.into(), 9.into())
        );
    }

    #[test]
    fn budget_and_field_errors() {
        let k2 = Quiver::kronecker(2);
        let opts = OracleOptions {
            budget: 1000,
            ..OracleOptions::default()
        };
        let err = enumerate_ss_count_with(&k2, &chamber_a(), &dv(&[2, 2]), 4, &opts).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { ref required, .. } if required == "65536"));
        assert!(matches!(
            enumerate_ss_count(&k2, &chamber_a(), &dv(&[1, 1]), 16),
            Err(Error::UnsupportedField(16))
        ));
    }

    #[test]
    fn oracle_matches_recursion() {
        let a2 = Quiver::a2();
        for z in [chamber_a(), chamber_b()] {
            let rep = oracle_check(&a2, &z, &dv(&[2, 2]), &[4, 9]).unwrap();
            assert_eq!(rep.rows.len(), 18);
            assert!(rep.passed(), "{:?}", rep.mismatches());
        }
        let rep = oracle_check(&Quiver::jordan(), &Stability::trivial(1), &dv(&[2]), &[4]).unwrap();
        assert!(rep.passed());
        assert!(oracle_check(&a2, &chamber_a(), &dv(&[1, 1]), &[])
            .unwrap()
            .rows
            .is_empty());
    }

    #[test]
    fn strategies_and_splits_agree() {
        let k2 = Quiver::kronecker(2);
        let three = Quiver::kronecker(3);
        let cases = [
            (&k2, dv(&[2, 1]), 4u64),
            (&k2, dv(&[1, 2]), 4),
            (&three, dv(&[1, 1]), 9),
            (&three, dv(&[2, 1]), 4),
        ];
        for (q, d, f) in cases {
            let fast = enumerate_ss_count(q, &chamber_a(), &d, f).unwrap();
            let direct = OracleOptions {
                direct: true,
                exec: Exec::Sequential,
                ..OracleOptions::default()
            };
            assert_eq!(fast, enumerate_ss_count_with(q, &chamber_a(), &d, f, &direct).unwrap());
        }
    }

    fn conj_elementary(field: &Field, m: &mut [u8], rows: usize, cols: usize, side: bool, c: u8) {
        let (i, j) = (0, 1);
        // left: row_i += c row_j (apply E on the target); right: col_j −= c col_i (apply E^{-1} on the source)
        if side {
            for k in 0..cols {
                let v = field.mul(c, m[j * cols + k]);
                m[i * cols + k] = field.add(m[i * cols + k], v);
            }
        } else {
            let nc = field.neg(c);
            for r in 0..rows {
                let v = field.mul(nc, m[r * cols + i]);
                m[r * cols + j] = field.add(m[r * cols + j], v);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn base_change_preserves_semistability(
            codes in prop::collection::vec(0usize..256, 2),
            vertex in 0usize..2,
            c in 1u8..4,
        ) {
            let k2 = Quiver::kronecker(2);
            let d = dv(&[2, 2]);
            let p = Problem::new(&k2, &chamber_a(), &d, 4).unwrap();
            let mats: Vec<Vec<u8>> = codes.iter().enumerate().map(|(a, &x)| p.matrix(a, x)).collect();
            let before = p.destabilized(&mats);
            // g = 1 + c e_{01} at one vertex; arrows run 0 -> 1
            let mut after = mats.clone();
            for m in after.iter_mut() {
                conj_elementary(&p.field, m, 2, 2, vertex == 1, c);
            }
            prop_assert_eq!(before, p.destabilized(&after));
        }
    }
}
