//! Morris constants: the scalar `C_{r+1}(l, k1, k2, k3)` multiplying the
//! total residue of the Morris form.
//!
//! The form in the variables `x_0, x_1, ..., x_r` (with `e^{r+1} = 0`) is
//! `x_0^{D-(r+1)} P_l / (prod x_j^{k1} prod (x_0 - x_j)^{k2} prod_{i<j} (x_i - x_j)^{k3})`
//! with `P_l = sum_{w in Σ_r} x_w(1) ... x_w(l)` and
//! `D = (k1 + k2) r + k3 r (r-1)/2 - l`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{factorial, rat, LaurentPoly, Rational};
use crate::residue::{tres_coefficients, LinearForm, ResidueForm, SBasisVector};
use crate::system::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorrisParams {
    pub r: usize,
    pub l: usize,
    pub k1: u32,
    pub k2: u32,
    pub k3: u32,
}

impl MorrisParams {
    pub fn new(r: usize, l: usize, k1: u32, k2: u32, k3: u32) -> Result<MorrisParams> {
        if r == 0 {
            return Err(Error::OutOfRange("r must be at least 1".into()));
        }
        if l > r {
            return Err(Error::OutOfRange(format!("l = {l} exceeds r = {r}")));
        }
        Ok(MorrisParams { r, l, k1, k2, k3 })
    }

    /// `D = (k1 + k2) r + k3 r (r-1)/2 - l`.
    pub fn degree(&self) -> i64 {
        let r = self.r as i64;
        (self.k1 + self.k2) as i64 * r + self.k3 as i64 * r * (r - 1) / 2 - self.l as i64
    }
}

fn half(n: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(2))
}

/// `k1 - 1 + (k3/2)(r - j)`
fn lower_coef(r: usize, j: usize, k1: u32, k3: u32) -> Rational {
    rat(k1 as i64 - 1) + half(k3 as i64 * (r as i64 - j as i64))
}

/// `k1 + k2 - 2 + (k3/2)(2r - j - 1)`
fn pivot(r: usize, j: usize, k1: u32, k2: u32, k3: u32) -> Rational {
    rat(k1 as i64 + k2 as i64 - 2) + half(k3 as i64 * (2 * r as i64 - j as i64 - 1))
}

/// The constant by the recurrences: lowering `l` with the first relation,
/// trading `C(r, k1, ..)` for `C(0, k1-1, ..)`, reducing `r` through
/// `C_{r+1}(r-1, 1, k2, k3) = C_r(0, k3, k2, k3)`, and the base value
/// `C_{r+1}(0, 1, 1, 0) = r!`.
pub fn morris_recurrence(p: &MorrisParams) -> Result<Rational> {
    recurrence(p.r, p.l, p.k1, p.k2, p.k3)
}

fn recurrence(r: usize, l: usize, k1: u32, k2: u32, k3: u32) -> Result<Rational> {
    if k1 == 0 || k2 == 0 {
        return Ok(Rational::zero());
    }
    if r == 1 && k3 != 0 {
        // there is no pair i < j when r = 1
        return recurrence(1, l, k1, k2, 0);
    }
    if l >= 1 {
        let pv = pivot(r, l, k1, k2, k3);
        if !pv.is_zero() {
            return Ok(lower_coef(r, l, k1, k3) / pv * recurrence(r, l - 1, k1, k2, k3)?);
        }
        if k3 == 0 && k1 == 1 {
            return Ok(Rational::zero());
        }
        return Err(Error::Unresolvable(format!(
            "vanishing pivot at r={r}, l={l}, k=({k1},{k2},{k3})"
        )));
    }
    if k1 >= 2 {
        // C(r, k1) = C(0, k1 - 1) and C(r, k1) = prod_j lower_j / pivot_j * C(0, k1)
        let mut factor = Rational::one();
        for j in 1..=r {
            factor *= pivot(r, j, k1, k2, k3) / lower_coef(r, j, k1, k3);
        }
        return Ok(factor * recurrence(r, 0, k1 - 1, k2, k3)?);
    }
    // k1 = 1
    if k3 == 0 {
        if k2 == 1 {
            return Ok(Rational::from_integer(factorial(r as u64)));
        }
        return recurrence(r, 0, k2, 1, 0);
    }
    // k3 > 0 and r >= 2: climb to l = r - 1, then drop the rank
    let mut factor = Rational::one();
    for j in 1..r {
        factor *= pivot(r, j, 1, k2, k3) / lower_coef(r, j, 1, k3);
    }
    Ok(factor * recurrence(r - 1, 0, k3, k2, k3)?)
}

/// `Γ(m/2)` as `q · π^{e/2}` with `e ∈ {0, 1}`; `None` at a pole (`m <= 0`).
fn gamma_half(m: i64) -> Option<(Rational, i32)> {
    if m <= 0 {
        return None;
    }
    if m % 2 == 0 {
        Some((Rational::from_integer(factorial((m / 2 - 1) as u64)), 0))
    } else {
        // Γ(n + 1/2) = (2n)! / (4^n n!) √π
        let n = (m - 1) / 2;
        let q = Rational::new(
            factorial(2 * n as u64),
            BigInt::from(4).pow(n as u32) * factorial(n as u64),
        );
        Some((q, 1))
    }
}

/// The Gamma-product closed form. Defined when `k1 + k2 >= 2` and, for
/// `l >= 1`, when none of the lowering denominators vanishes.
pub fn morris_closed(p: &MorrisParams) -> Result<Rational> {
    let MorrisParams { r, l, k1, k2, k3 } = *p;
    if k1 + k2 < 2 {
        return Err(Error::OutOfRange("closed form needs k1 + k2 >= 2".into()));
    }
    let (r_, k1, k2, k3) = (r as i64, k1 as i64, k2 as i64, k3 as i64);
    let mut value = Rational::from_integer(factorial(r as u64));
    let mut pi_power = 0i32;
    let mut zero = false;
    for j in 0..r_ {
        let num = [2 + k3, 2 * (k1 + k2 - 1) + (r_ + j - 1) * k3];
        let den = [2 + (j + 1) * k3, 2 * k1 + j * k3, 2 * k2 + j * k3];
        for m in num {
            let (q, e) = gamma_half(m).ok_or_else(|| Error::OutOfRange("pole in the numerator".into()))?;
            value *= q;
            pi_power += e;
        }
        for m in den {
            match gamma_half(m) {
                Some((q, e)) => {
                    value /= q;
                    pi_power -= e;
                }
                None => zero = true,
            }
        }
    }
    if zero {
        value = Rational::zero();
    } else if pi_power != 0 {
        return Err(Error::IdentityViolation(format!("leftover factor π^({pi_power}/2)")));
    }
    for j in 1..=l {
        let d = pivot(r, j, k1 as u32, k2 as u32, k3 as u32);
        if d.is_zero() {
            return Err(Error::OutOfRange(format!("closed form undefined at l = {l}")));
        }
        value *= lower_coef(r, j, k1 as u32, k3 as u32) / d;
    }
    Ok(value)
}

/// The Morris form over `x_0, ..., x_r` (variable index 0 is `x_0`).
pub fn morris_form(p: &MorrisParams) -> Result<ResidueForm> {
    let MorrisParams { r, l, k1, k2, k3 } = *p;
    let n = r + 1;
    let mut p_l = LaurentPoly::zero(n);
    for w in Permutation::all(r) {
        let mut exp = vec![0i32; n];
        for j in 1..=l {
            exp[w.apply(j)] += 1;
        }
        p_l.add_term(exp, Rational::one());
    }
    let mut lead = vec![0i32; n];
    lead[0] = (p.degree() - n as i64) as i32;
    let num = p_l.mul_monomial(&lead, &Rational::one());
    let mut factors = Vec::new();
    for j in 1..=r {
        factors.push((LinearForm::Var(j), k1));
        factors.push((LinearForm::Diff(0, j), k2));
        for i in j + 1..=r {
            factors.push((LinearForm::Diff(j, i), k3));
        }
    }
    ResidueForm::new(n, num, &factors)
}

/// `C * sum_{w in Σ_r} ε(w)^{k3} f_{w}` on the basis indexed by permutations of
/// `x_0, ..., x_r` fixing `x_0` in the outermost position.
pub fn expected_vector(p: &MorrisParams, constant: &Rational) -> SBasisVector {
    let mut coeffs = BTreeMap::new();
    if !constant.is_zero() {
        for w in Permutation::all(p.r) {
            let mut line = vec![1];
            line.extend(w.one_line().iter().map(|x| x + 1));
            let full = Permutation::from_one_line(&line).expect("valid permutation");
            let s = if p.k3 % 2 == 1 { w.sign() } else { 1 };
            coeffs.insert(full, constant * rat(s as i64));
        }
    }
    SBasisVector { n: p.r + 1, coeffs }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorrisResidueReport {
    pub params: MorrisParams,
    /// The constant from the recurrences.
    pub constant: Rational,
    pub coefficients: SBasisVector,
    pub expected: SBasisVector,
    pub matches: bool,
    /// The total residue is a multiple of the (anti)symmetrised vector, so
    /// some constant exists at all.
    pub in_span: bool,
}

/// Parameters where the lowering pivot and its right-hand coefficient both
/// vanish (`k1 = k2 = 1`, no effective `k3`, `l >= 1`): the first relation
/// reads `0 = 0` and does not fix the constant.
pub fn is_degenerate(p: &MorrisParams) -> bool {
    p.l >= 1 && p.k1 == 1 && p.k2 == 1 && (p.k3 == 0 || p.r == 1)
}

/// Largest `r` for which the residue cross-check is run.
pub const MAX_RESIDUE_RANK: usize = 3;

/// Compute the total residue of the Morris form and compare it with the
/// constant times the (anti)symmetrised basis vector.
pub fn morris_residue_check(p: &MorrisParams) -> Result<MorrisResidueReport> {
    if p.r > MAX_RESIDUE_RANK {
        return Err(Error::OutOfRange(format!("residue check limited to r <= {MAX_RESIDUE_RANK}")));
    }
    let constant = morris_recurrence(p)?;
    let coefficients = tres_coefficients(&morris_form(p)?)?;
    let expected = expected_vector(p, &constant);
    let matches = coefficients == expected;
    let unit = expected_vector(p, &Rational::one());
    let scale = unit.coeffs.keys().next().map(|w| coefficients.get(w)).unwrap_or_else(Rational::zero);
    let in_span = coefficients == expected_vector(p, &scale);
    Ok(MorrisResidueReport { params: *p, constant, coefficients, expected, matches, in_span })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;
    use crate::volume::catalan;

    fn mp(r: usize, l: usize, k1: u32, k2: u32, k3: u32) -> MorrisParams {
        MorrisParams::new(r, l, k1, k2, k3).unwrap()
    }

    #[test]
    fn known_values() {
        for r in 1..=6usize {
            let fact = Rational::from_integer(factorial(r as u64));
            assert_eq!(morris_recurrence(&mp(r, 0, 1, 1, 0)).unwrap(), fact);
            let cat: Rational = (1..r as u64).map(|i| Rational::from_integer(catalan(i).into())).product();
            assert_eq!(morris_recurrence(&mp(r, 0, 1, 1, 1)).unwrap(), &fact * cat);
        }
        assert_eq!(morris_recurrence(&mp(2, 0, 1, 1, 1)).unwrap(), rat(2));
    }

    #[test]
    fn zero_rules() {
        assert!(morris_recurrence(&mp(3, 1, 0, 2, 1)).unwrap().is_zero());
        assert!(morris_recurrence(&mp(3, 2, 1, 1, 0)).unwrap().is_zero());
        assert!(morris_recurrence(&mp(3, 2, 1, 3, 0)).unwrap().is_zero());
        assert!(MorrisParams::new(2, 3, 1, 1, 1).is_err());
    }

    #[test]
    fn rank_one_ignores_k3() {
        for l in 0..=1 {
            for k3 in 0..3 {
                assert_eq!(
                    morris_recurrence(&mp(1, l, 2, 3, k3)).unwrap(),
                    morris_recurrence(&mp(1, l, 2, 3, 0)).unwrap()
                );
            }
        }
    }

    #[test]
    fn closed_form_spot_values() {
        assert_eq!(morris_closed(&mp(2, 0, 1, 1, 1)).unwrap(), rat(2));
        assert_eq!(morris_closed(&mp(3, 0, 1, 1, 0)).unwrap(), rat(6));
        assert_eq!(morris_closed(&mp(2, 0, 0, 2, 1)).unwrap(), rat(0));
        assert!(morris_closed(&mp(2, 1, 1, 1, 0)).is_err());
        assert!(morris_closed(&mp(2, 0, 1, 0, 0)).is_err());
        // one lowering step from C_3(0, 2, 1, 1): factor (1 + 1/2) / (1 + 1)
        let c0 = morris_closed(&mp(2, 0, 2, 1, 1)).unwrap();
        assert_eq!(morris_closed(&mp(2, 1, 2, 1, 1)).unwrap(), c0 * ratio(3, 4));
    }

    #[test]
    fn recurrence_matches_closed_form() {
        for r in 1..=5usize {
            for l in 0..=r {
                for k1 in 0..=3 {
                    for k2 in 0..=3 {
                        for k3 in 0..=2 {
                            let p = mp(r, l, k1, k2, k3);
                            if let Ok(c) = morris_closed(&p) {
                                assert_eq!(morris_recurrence(&p).unwrap(), c, "{p:?}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn w3_vector() {
        // W_3 = x0^2 / ((x0-x1)(x0-x2)(x1-x2) x1 x2) is half the (2,0,1,1,1) form
        let w3 = ResidueForm::parse(3, "x1^2", "x1-x2, x1-x3, x2-x3, x2, x3").unwrap();
        let v = tres_coefficients(&w3).unwrap();
        assert_eq!(v.get(&Permutation::parse("123").unwrap()), rat(1));
        assert_eq!(v.get(&Permutation::parse("132").unwrap()), rat(-1));
        assert_eq!(v.coeffs.len(), 2);
        let rep = morris_residue_check(&mp(2, 0, 1, 1, 1)).unwrap();
        assert!(rep.matches);
        assert_eq!(rep.coefficients, SBasisVector { n: 3, coeffs: v.coeffs.iter().map(|(w, c)| (w.clone(), c * rat(2))).collect() });
    }

    #[test]
    fn degenerate_pivots_leave_the_span() {
        // 1/(x0 (x0 - x1)) = -f_[x1, x0]: no multiple of f_[x0, x1]
        let rep = morris_residue_check(&mp(1, 1, 1, 1, 0)).unwrap();
        assert!(!rep.in_span);
        assert_eq!(rep.coefficients.get(&Permutation::parse("21").unwrap()), rat(-1));
        for (r, l) in [(2, 1), (2, 2), (3, 1)] {
            let p = mp(r, l, 1, 1, 0);
            assert!(is_degenerate(&p));
            assert!(!morris_residue_check(&p).unwrap().in_span);
        }
        assert!(!is_degenerate(&mp(2, 2, 1, 1, 1)));
    }

    #[test]
    fn residue_check_small() {
        for (r, l, k1, k2, k3) in [(1, 0, 1, 1, 0), (1, 1, 2, 1, 0), (2, 1, 1, 1, 1), (2, 2, 2, 1, 0), (2, 0, 1, 2, 2)] {
            let rep = morris_residue_check(&mp(r, l, k1, k2, k3)).unwrap();
            assert!(rep.matches, "{rep:?}");
        }
    }
}
