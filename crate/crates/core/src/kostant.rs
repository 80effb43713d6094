//! Kostant partition functions: the number of ways to write a weight as a
//! nonnegative integer combination of the roots of a flow system.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{binomial, to_integer, LaurentPoly, Rational};
use crate::residue::{iterated_residue, LinearForm, ResidueForm};
use crate::system::{FlowSystem, Permutation, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    /// Memoized dynamic programming over the roots.
    Dp,
    /// Iterated constant term through the residue engine.
    ConstantTerm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub value: BigUint,
    pub method: CountMethod,
}

/// `k_Φ(a)`: number of nonnegative integer solutions of `sum u_α α = a`.
pub fn kostant_count(system: &FlowSystem, a: &Weight) -> Result<CountResult> {
    check_weight(system, a)?;
    let value = count_matrix(system.matrix(), &a.to_ints()?);
    Ok(CountResult { value, method: CountMethod::Dp })
}

/// `k'_Φ(a)`: solutions with every coefficient strictly positive.
pub fn kostant_strict(system: &FlowSystem, a: &Weight) -> Result<CountResult> {
    check_weight(system, a)?;
    let mut b = a.to_ints()?;
    for (i, j, m) in system.edges() {
        b[i - 1] -= m as i64;
        b[j - 1] += m as i64;
    }
    let value = count_matrix(system.matrix(), &b);
    Ok(CountResult { value, method: CountMethod::Dp })
}

/// `k_Φ(a)` as the iterated constant term
/// `CT_{z_1} ... CT_{z_{r+1}} z^a / prod (1 - z_j/z_i)^{m_ij}`,
/// expanding in `z_{r+1}` first.
pub fn kostant_ct(system: &FlowSystem, a: &Weight) -> Result<CountResult> {
    check_weight(system, a)?;
    let form = constant_term_form(system, &a.to_ints()?);
    let v = iterated_residue(&form, &Permutation::identity(system.rank() + 1))?;
    let n = to_integer(&v)
        .filter(|n| !n.is_negative())
        .ok_or_else(|| Error::IdentityViolation(format!("constant term {v} is not a count")))?;
    Ok(CountResult { value: n.magnitude().clone(), method: CountMethod::ConstantTerm })
}

/// The form `z^a prod z_i^{m_ij} / prod (z_i - z_j)^{m_ij} * prod z_k^{-1}`,
/// whose iterated residue is the constant term above.
pub fn constant_term_form(system: &FlowSystem, a: &[i64]) -> ResidueForm {
    let n = system.rank() + 1;
    let mut exp: Vec<i32> = a.iter().map(|&x| x as i32 - 1).collect();
    let mut factors = Vec::new();
    for (i, j, m) in system.edges() {
        exp[i - 1] += m as i32;
        factors.push((LinearForm::Diff(i - 1, j - 1), m));
    }
    let num = LaurentPoly::monomial(n, exp, Rational::one());
    ResidueForm::new(n, num, &factors).expect("well-formed constant-term form")
}

fn check_weight(system: &FlowSystem, a: &Weight) -> Result<()> {
    if a.rank() != system.rank() {
        return Err(Error::InvalidWeight(format!(
            "weight {a} has rank {} but the system has rank {}",
            a.rank(),
            system.rank()
        )));
    }
    if !a.is_integral() {
        return Err(Error::NotIntegral(a.to_string()));
    }
    Ok(())
}

/// `prod_{i=d+1}^{r+d-1} binom(r+d+i+1, 2i) / (2i+1)`, the value of
/// `k_{A_r^+}(1+d, 2+d, ..., r+d)`.
pub fn kk_closed(r: usize, d: usize) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::OutOfRange("rank must be at least 1".into()));
    }
    let (r, d) = (r as i64, d as i64);
    let mut acc = Rational::one();
    for i in d + 1..=r + d - 1 {
        acc *= Rational::new(binomial(r + d + i + 1, 2 * i), BigInt::from(2 * i + 1));
    }
    to_integer(&acc)
        .map(|n| n.magnitude().clone())
        .ok_or_else(|| Error::IdentityViolation(format!("closed form gave non-integer {acc}")))
}

/// Count flows for an upper-triangular multiplicity matrix on `n` vertices
/// (the roots need not span). `a` has length `n`.
pub(crate) fn count_matrix(mult: &[Vec<u32>], a: &[i64]) -> BigUint {
    let n = a.len();
    debug_assert_eq!(mult.len(), n);
    if a.iter().sum::<i64>() != 0 {
        return BigUint::zero();
    }
    let mut edges = Vec::new();
    for (i, row) in mult.iter().enumerate() {
        for (j, &m) in row.iter().enumerate() {
            if j > i && m > 0 {
                edges.push((i, j, m));
            }
        }
    }
    // in_left[e][v]: some edge with index >= e ends at v
    let mut in_left = vec![vec![false; n]; edges.len() + 1];
    for e in (0..edges.len()).rev() {
        in_left[e] = in_left[e + 1].clone();
        in_left[e][edges[e].1] = true;
    }
    let mut dp = FlowCounter { edges, in_left, memo: HashMap::new() };
    let mut rem = a.to_vec();
    dp.count(0, &mut rem)
}

struct FlowCounter {
    edges: Vec<(usize, usize, u32)>,
    in_left: Vec<Vec<bool>>,
    memo: HashMap<(usize, Vec<i64>), BigUint>,
}

impl FlowCounter {
    fn count(&mut self, e: usize, rem: &mut Vec<i64>) -> BigUint {
        let n = rem.len();
        if e == self.edges.len() {
            return if rem.iter().all(|&x| x == 0) { BigUint::one() } else { BigUint::zero() };
        }
        let (src, dst, m) = self.edges[e];
        // everything before the current source is settled
        if rem[..src].iter().any(|&x| x != 0) {
            return BigUint::zero();
        }
        // remaining mass can only move forward
        let mut partial = 0;
        for v in src..n {
            partial += rem[v];
            if partial < 0 {
                return BigUint::zero();
            }
            if v > src && rem[v] < 0 && !self.in_left[e][v] {
                return BigUint::zero();
            }
        }
        let key = (e, rem[src..].to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let last_out = self.edges.get(e + 1).is_none_or(|&(s, _, _)| s != src);
        let avail = rem[src];
        let range = if last_out { avail..=avail } else { 0..=avail };
        let mut total = BigUint::zero();
        for t in range {
            let ways = binomial(t + m as i64 - 1, m as i64 - 1);
            rem[src] -= t;
            rem[dst] += t;
            let sub = self.count(e + 1, rem);
            rem[src] += t;
            rem[dst] -= t;
            if !sub.is_zero() {
                total += sub * ways.magnitude();
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Enumerate every copy of every root separately.
    fn brute_force(system: &FlowSystem, a: &[i64]) -> u64 {
        fn rec(roots: &[(usize, usize)], rem: &mut Vec<i64>, bound: i64) -> u64 {
            match roots.split_first() {
                None => rem.iter().all(|&x| x == 0) as u64,
                Some((&(i, j), rest)) => {
                    let mut total = 0;
                    for u in 0..=bound {
                        rem[i] -= u;
                        rem[j] += u;
                        total += rec(rest, rem, bound);
                        rem[i] += u;
                        rem[j] -= u;
                    }
                    total
                }
            }
        }
        let roots: Vec<(usize, usize)> = system.roots().iter().map(|r| (r.i - 1, r.j - 1)).collect();
        let bound = a.iter().filter(|&&x| x > 0).sum();
        rec(&roots, &mut a.to_vec(), bound)
    }

    fn w(v: &[i64]) -> Weight {
        Weight::from_ints(v).unwrap()
    }

    #[test]
    fn small_examples() {
        let a2 = FlowSystem::complete(2).unwrap();
        assert_eq!(kostant_count(&a2, &w(&[2, 1, -3])).unwrap().value, BigUint::from(3u32));
        assert_eq!(kostant_strict(&a2, &w(&[2, 1, -3])).unwrap().value, BigUint::from(1u32));
        assert_eq!(kostant_count(&a2, &w(&[1, -2, 1])).unwrap().value, BigUint::zero());
        let a3 = FlowSystem::complete(3).unwrap();
        assert_eq!(kostant_count(&a3, &w(&[1, 2, 3, -6])).unwrap().value, BigUint::from(10u32));
    }

    #[test]
    fn rejects_bad_weights() {
        let a2 = FlowSystem::complete(2).unwrap();
        let half = Weight::embed(&[crate::poly::ratio(1, 2), crate::poly::rat(0)]);
        assert!(matches!(kostant_count(&a2, &half), Err(Error::NotIntegral(_))));
        assert!(kostant_count(&a2, &w(&[1, -1])).is_err());
    }

    #[test]
    fn dp_agrees_with_enumeration() {
        let systems = [
            FlowSystem::complete(2).unwrap(),
            FlowSystem::complete(3).unwrap(),
            FlowSystem::pitman_stanley(3).unwrap(),
            FlowSystem::new(2, &[(1, 2, 2), (2, 3, 1), (1, 3, 2)]).unwrap(),
        ];
        for s in &systems {
            let r = s.rank();
            for code in 0..5i64.pow(r as u32) {
                let mut head = Vec::new();
                let mut c = code;
                for _ in 0..r {
                    head.push(c % 5 - 1);
                    c /= 5;
                }
                let a = Weight::embed_ints(&head);
                let ints = a.to_ints().unwrap();
                let dp = kostant_count(s, &a).unwrap().value;
                assert_eq!(dp, BigUint::from(brute_force(s, &ints)), "{s} at {a}");
            }
        }
    }

    #[test]
    fn constant_term_agrees() {
        let a3 = FlowSystem::complete(3).unwrap();
        for head in [[1, 2, 3], [3, 0, 1], [2, -1, 2], [0, 0, 0], [1, -2, 0]] {
            let a = Weight::embed_ints(&head);
            assert_eq!(kostant_count(&a3, &a).unwrap().value, kostant_ct(&a3, &a).unwrap().value);
        }
    }

    #[test]
    fn one_root_with_multiplicity() {
        // m copies of e1 - e2: binom(a + m - 1, m - 1)
        for m in 1..5u32 {
            let s = FlowSystem::new(1, &[(1, 2, m)]).unwrap();
            for a in 0..6i64 {
                let v = kostant_count(&s, &w(&[a, -a])).unwrap().value;
                assert_eq!(BigInt::from(v), binomial(a + m as i64 - 1, m as i64 - 1));
            }
        }
    }

    #[test]
    fn closed_product_matches_dp() {
        for r in 1..=5usize {
            for d in 0..=2usize {
                let head: Vec<i64> = (1..=r as i64).map(|k| k + d as i64).collect();
                let a = Weight::embed_ints(&head);
                let dp = kostant_count(&FlowSystem::complete(r).unwrap(), &a).unwrap().value;
                assert_eq!(dp, kk_closed(r, d).unwrap(), "r={r} d={d}");
            }
        }
    }
}
