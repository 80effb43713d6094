//! Small exact linear algebra: rank, square solves and Fourier–Motzkin elimination.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::poly::Rational;

/// Rank of a list of rows.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &pivot;
                for c in col..ncols {
                    let d = &f * &rows[rank][c];
                    rows[i][c] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solve `sum_k x_k cols[k] = b` for square nonsingular systems.
pub fn solve(cols: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    if cols.len() != n {
        return None;
    }
    // augmented matrix, row-major
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for c in col..=n {
            m[col][c] = &m[col][c] / &pivot;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for c in col..=n {
                    let d = &f * &m[col][c];
                    m[i][c] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// A constraint `coeffs · x >= rhs`.
pub type Constraint = (Vec<Rational>, Rational);

fn normalize(c: &Constraint) -> Constraint {
    let lead = c.0.iter().find(|x| !x.is_zero()).map(|x| x.abs());
    match lead {
        Some(l) => (c.0.iter().map(|x| x / &l).collect(), &c.1 / &l),
        None => c.clone(),
    }
}

/// Keep one constraint per direction, the strongest.
fn dedupe(cs: Vec<Constraint>) -> Vec<Constraint> {
    let mut best: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    for c in cs {
        let (a, b) = normalize(&c);
        best.entry(a).and_modify(|v| {
            if b > *v {
                *v = b.clone()
            }
        })
        .or_insert(b);
    }
    best.into_iter().collect()
}

/// Find a point satisfying all constraints, or `None` if the system is infeasible.
/// Variables are eliminated from the last to the first, then a point is recovered
/// by back substitution.
pub fn feasible_point(n: usize, constraints: &[Constraint]) -> Option<Vec<Rational>> {
    let mut levels: Vec<Vec<Constraint>> = Vec::with_capacity(n + 1);
    let mut cur = dedupe(constraints.to_vec());
    for v in (0..n).rev() {
        levels.push(cur.clone());
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in cur {
            if c.0[v].is_positive() {
                pos.push(c);
            } else if c.0[v].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for q in &neg {
                // p.a[v] > 0, q.a[v] < 0: combine to cancel x_v
                let lp = p.0[v].clone();
                let lq = -q.0[v].clone();
                let a: Vec<Rational> = p.0.iter().zip(&q.0).map(|(x, y)| x * &lq + y * &lp).collect();
                let b = &p.1 * &lq + &q.1 * &lp;
                rest.push((a, b));
            }
        }
        cur = dedupe(rest);
    }
    // all coefficients are zero now
    if cur.iter().any(|(_, b)| b.is_positive()) {
        return None;
    }
    levels.reverse();
    // levels[v] contains constraints in variables 0..=v
    let mut x = vec![Rational::zero(); n];
    for v in 0..n {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for (a, b) in &levels[v] {
            if a[v].is_zero() {
                continue;
            }
            let partial: Rational = (0..v).map(|k| &a[k] * &x[k]).sum();
            let bound = (b - partial) / &a[v];
            if a[v].is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
        x[v] = match (lo, hi) {
            (Some(l), Some(h)) => {
                debug_assert!(l <= h);
                (l + h) / Rational::from_integer(2.into())
            }
            (Some(l), None) => l.ceil().max(l),
            (None, Some(h)) => h.floor().min(h),
            (None, None) => Rational::zero(),
        };
    }
    debug_assert!(constraints
        .iter()
        .all(|(a, b)| a.iter().zip(&x).map(|(p, q)| p * q).sum::<Rational>() >= *b));
    Some(x)
}

/// Smallest positive integer multiple of `x` with integer entries.
pub fn clear_denominators(x: &[Rational]) -> Vec<Rational> {
    use num_integer::Integer;
    let l = x.iter().fold(num_bigint::BigInt::one(), |acc, q| acc.lcm(q.denom()));
    x.iter().map(|q| q * Rational::from_integer(l.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn rank_and_solve() {
        let rows = vec![vec![rat(1), rat(-1), rat(0)], vec![rat(0), rat(1), rat(-1)], vec![rat(1), rat(0), rat(-1)]];
        assert_eq!(rank(rows), 2);
        let cols = vec![vec![rat(1), rat(0)], vec![rat(1), rat(1)]];
        assert_eq!(solve(&cols, &[rat(3), rat(2)]).unwrap(), vec![rat(1), rat(2)]);
    }

    #[test]
    fn fourier_motzkin() {
        // x >= 1, y >= 1, x + y <= 1 is infeasible
        let cs = vec![
            (vec![rat(1), rat(0)], rat(1)),
            (vec![rat(0), rat(1)], rat(1)),
            (vec![rat(-1), rat(-1)], rat(-1)),
        ];
        assert!(feasible_point(2, &cs).is_none());
        let cs = vec![(vec![rat(1), rat(0)], rat(1)), (vec![rat(1), rat(-1)], rat(1))];
        let p = feasible_point(2, &cs).unwrap();
        assert!(p[0] >= rat(1) && &p[0] - &p[1] >= rat(1));
    }
}
