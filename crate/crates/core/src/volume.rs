//! Volume and Ehrhart polynomials of flow polytopes on a chamber, and the
//! checks built on them.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::chambers::{ChamberForm, Engine};
use crate::error::{Error, Result};
use crate::kostant::{kostant_count, kostant_strict};
use crate::poly::{factorial, pow_rat, rat, MultiPoly, Rational};
use crate::system::{FlowSystem, Weight};

/// Compositions of `total` into `parts` nonnegative parts, lexicographically decreasing.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn rec(left: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == parts {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in (0..=left).rev() {
            cur.push(x);
            rec(left - x, parts, cur, out);
            cur.pop();
        }
    }
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut cur, &mut out);
    out
}

/// `f_c(i) = <<c, x^i / prod_Φ α>>` for every `|i| = N - r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    pub system: FlowSystem,
    pub chamber: ChamberForm,
    pub entries: BTreeMap<Vec<u32>, Rational>,
}

pub fn coefficient_table(system: &FlowSystem, chamber: &ChamberForm, engine: Engine) -> Result<CoefficientTable> {
    check_ranks(system, chamber)?;
    let r = system.rank();
    let deg = (system.num_roots() - r) as u32;
    let idx = compositions(deg, r);
    let vals: Vec<Result<Rational>> = idx.par_iter().map(|i| chamber.pair_monomial(system, i, engine)).collect();
    let mut entries = BTreeMap::new();
    for (i, v) in idx.into_iter().zip(vals) {
        let v = v?;
        if !v.is_zero() {
            entries.insert(i, v);
        }
    }
    Ok(CoefficientTable { system: system.clone(), chamber: chamber.clone(), entries })
}

fn check_ranks(system: &FlowSystem, chamber: &ChamberForm) -> Result<()> {
    if system.rank() != chamber.rank() {
        return Err(Error::InvalidSystem(format!(
            "system rank {} does not match chamber rank {}",
            system.rank(),
            chamber.rank()
        )));
    }
    Ok(())
}

fn inv_factorial_product(i: &[u32]) -> Rational {
    let d = i.iter().fold(BigInt::one(), |acc, &k| acc * factorial(k as u64));
    Rational::new(BigInt::one(), d)
}

impl CoefficientTable {
    /// `sum_i f(i) a^i / i!`.
    pub fn volume_polynomial(&self) -> MultiPoly {
        let r = self.system.rank();
        let mut p = MultiPoly::zero(r);
        for (i, c) in &self.entries {
            p.add_term(i.clone(), c * inv_factorial_product(i));
        }
        p
    }

    /// `sum_i f(i) prod_k binom(a_k + t_k, i_k)` or the rising-binomial form with shifts `s_k`.
    pub fn ehrhart_polynomial(&self, form: EhrhartForm) -> MultiPoly {
        let r = self.system.rank();
        let shifts = match form {
            EhrhartForm::T => self.system.t_shifts(),
            EhrhartForm::S => self.system.s_shifts(),
        };
        let mut cache: BTreeMap<(usize, u32), MultiPoly> = BTreeMap::new();
        let mut out = MultiPoly::zero(r);
        for (i, c) in &self.entries {
            let mut term = MultiPoly::constant(r, c.clone());
            for (k, &ik) in i.iter().enumerate() {
                if ik == 0 {
                    continue;
                }
                let factor = cache.entry((k, ik)).or_insert_with(|| {
                    let u = &MultiPoly::var(r, k) + &MultiPoly::constant(r, rat(shifts[k]));
                    match form {
                        EhrhartForm::T => MultiPoly::binom(&u, ik),
                        EhrhartForm::S => MultiPoly::rising_binom(&u, ik),
                    }
                });
                term = &term * factor;
            }
            out = &out + &term;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EhrhartForm {
    /// Ordinary binomials shifted by `t_k`.
    #[default]
    T,
    /// Rising binomials shifted by `s_k`.
    S,
}

/// `v(Φ, c)`: the volume of `P_Φ(a)` as a polynomial in `a_1..a_r` for `a` in `c`.
pub fn volume_polynomial(system: &FlowSystem, chamber: &ChamberForm) -> Result<MultiPoly> {
    Ok(coefficient_table(system, chamber, Engine::Dp)?.volume_polynomial())
}

/// `k(Φ, c)`: the number of lattice points of `P_Φ(a)` for integral `a` in the closure of `c`.
pub fn ehrhart_polynomial(system: &FlowSystem, chamber: &ChamberForm, form: EhrhartForm) -> Result<MultiPoly> {
    Ok(coefficient_table(system, chamber, Engine::Dp)?.ehrhart_polynomial(form))
}

/// Euclidean volume of `P_Φ(a)` normalised by the lattice, for `a` in `C(A_r^+)`.
pub fn volume_at(system: &FlowSystem, a: &Weight) -> Result<Rational> {
    if a.rank() != system.rank() {
        return Err(Error::InvalidWeight(format!("weight {a} does not have rank {}", system.rank())));
    }
    let chamber = ChamberForm::locate(a)?;
    let r = system.rank();
    let deg = (system.num_roots() - r) as u32;
    let head = a.head();
    let support: Vec<usize> = (0..r).filter(|&k| !head[k].is_zero()).collect();
    let mut acc = Rational::zero();
    for part in compositions(deg, support.len()) {
        let mut i = vec![0u32; r];
        for (&k, &x) in support.iter().zip(&part) {
            i[k] = x;
        }
        let f = chamber.pair_monomial(system, &i, Engine::Dp)?;
        if f.is_zero() {
            continue;
        }
        let mono: Rational = support.iter().map(|&k| pow_rat(&head[k], i[k] as i64)).product();
        acc += f * mono * inv_factorial_product(&i);
    }
    Ok(acc)
}

/// `(N - r)!` times [`volume_at`].
pub fn relative_volume(system: &FlowSystem, a: &Weight) -> Result<Rational> {
    let deg = (system.num_roots() - system.rank()) as u64;
    Ok(volume_at(system, a)? * Rational::from_integer(factorial(deg)))
}

pub fn catalan(n: u64) -> BigUint {
    let c = factorial(2 * n) / (factorial(n) * factorial(n + 1));
    c.magnitude().clone()
}

/// Relative volume of the Chan–Robbins–Yuen polytope and its companions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CryReport {
    pub n: usize,
    /// Relative volume of `P_{A_n^+}(e^1 - e^{n+1})`.
    pub relative_volume: Rational,
    /// `prod_{i=1}^{n-2} Catalan(i)`.
    pub catalan_product: BigUint,
    /// `k_{A_{n-2}^+}(1, 2, ..., n-2)`.
    pub kostant_value: BigUint,
    /// Relative volume of the face obtained by deleting `e^2 - e^3`.
    pub face_relative_volume: Rational,
    /// `binom(n, 2) * face = 3 * relative_volume`.
    pub face_identity: bool,
}

impl CryReport {
    pub fn all_agree(&self) -> bool {
        let cat = Rational::from_integer(BigInt::from(self.catalan_product.clone()));
        let kv = Rational::from_integer(BigInt::from(self.kostant_value.clone()));
        self.relative_volume == cat && self.relative_volume == kv && self.face_identity
    }
}

pub fn cry_suite(n: usize) -> Result<CryReport> {
    if n < 3 {
        return Err(Error::OutOfRange("the CRY checks need n >= 3".into()));
    }
    let a = FlowSystem::complete(n)?;
    let target = Weight::root(n, 1, n + 1);
    let relative_volume = relative_volume(&a, &target)?;
    let catalan_product = (1..=(n as u64 - 2)).map(catalan).product();
    let small = FlowSystem::complete(n - 2)?;
    let kostant_value =
        kostant_count(&small, &Weight::embed_ints(&(1..=(n as i64 - 2)).collect::<Vec<_>>()))?.value;
    let face = a.without_root(2, 3)?;
    let face_relative_volume = self::relative_volume(&face, &target)?;
    let pairs = rat((n * (n - 1) / 2) as i64);
    let face_identity = &pairs * &face_relative_volume == rat(3) * &relative_volume;
    Ok(CryReport { n, relative_volume, catalan_product, kostant_value, face_relative_volume, face_identity })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReciprocityOutcome {
    /// `k'_Φ(a)`.
    pub strict_count: BigUint,
    /// `k(Φ, c)(-a)`.
    pub value_at_minus_a: Rational,
    /// `k'_Φ(a) = (-1)^N k(Φ, c)(-a)`.
    pub holds: bool,
    /// `k'_Φ(a) = (-1)^{N-r} k(Φ, c)(-a)`, the sign given by the dimension of `P_Φ(a)`.
    pub holds_dimension_sign: bool,
}

/// `k'_Φ(a)` against `±k(Φ, c)(-a)` for a regular integral `a` in the chamber `c`.
pub fn reciprocity_check(system: &FlowSystem, a: &Weight) -> Result<ReciprocityOutcome> {
    let chamber = ChamberForm::from_witness(a)?;
    let k = ehrhart_polynomial(system, &chamber, EhrhartForm::T)?;
    reciprocity_with(system, a, &k)
}

/// Same as [`reciprocity_check`] with a precomputed Ehrhart polynomial for the chamber of `a`.
pub fn reciprocity_with(system: &FlowSystem, a: &Weight, ehrhart: &MultiPoly) -> Result<ReciprocityOutcome> {
    let strict_count = kostant_strict(system, a)?.value;
    let neg: Vec<Rational> = a.head().iter().map(|x| -x).collect();
    let value_at_minus_a = ehrhart.eval(&neg);
    let count = Rational::from_integer(BigInt::from(strict_count.clone()));
    let signed = |exp: usize| if exp % 2 == 1 { -&value_at_minus_a } else { value_at_minus_a.clone() };
    let holds = signed(system.num_roots()) == count;
    let holds_dimension_sign = signed(system.num_roots() - system.rank()) == count;
    Ok(ReciprocityOutcome { strict_count, value_at_minus_a, holds, holds_dimension_sign })
}

/// Divisibility and degree laws of the nice-chamber polynomials.
/// `None` marks a law whose hypotheses do not hold for the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityReport {
    /// The volume is homogeneous of degree `N - r`.
    pub homogeneous: bool,
    /// The volume is divisible by `a_1^{N_1 - 1}`, `N_1 = sum_{k>=2} m_1k`.
    pub leading_power: bool,
    /// The degree in `a_r` is at most `m_{r,r+1} - 1`.
    pub last_degree: bool,
    /// The Ehrhart polynomial is divisible by `(a_1 + 1) ... (a_1 + q)`.
    pub ehrhart_leading_factors: bool,
    /// For `A_r^+`, `r >= 3`: the volume ignores `a_r`, is at most linear in
    /// `a_{r-1}`, is divisible by `a_1^{r-1} (a_1 + ... + a_{r-2} + 3 a_{r-1})`
    /// and satisfies the exact three-term factorisation.
    pub complete_volume: Option<bool>,
    /// For `A_r^+`, `r >= 3`: the Ehrhart polynomial ignores `a_r` and is
    /// divisible by `a_1 + ... + a_{r-2} + 3 a_{r-1} + 3`.
    pub complete_ehrhart: Option<bool>,
    /// `v(a) = ((a_1 + ... + a_{r-2})/c + a_{r-1}) v(Φ - (e^{r-1} - e^r))(a_1, ..., a_{r-2}, 0, 0)`
    /// when `m_{r,r+1} = 1`, `m_{r-1,r+1} + m_{r-1,r} = 2` and the ratio `c` is constant.
    pub factorisation: Option<bool>,
    /// The lattice-point analogue with `+1` in the linear factor and the
    /// Ehrhart polynomial of the smaller system on the right.
    pub factorisation_ehrhart: Option<bool>,
}

impl DivisibilityReport {
    pub fn all_hold(&self) -> bool {
        self.homogeneous
            && self.leading_power
            && self.last_degree
            && self.ehrhart_leading_factors
            && [self.complete_volume, self.complete_ehrhart, self.factorisation, self.factorisation_ehrhart]
                .iter()
                .all(|x| x.unwrap_or(true))
    }
}

/// `p(a_1, ..., a_{r-2}, 0, 0)` written in `r` variables.
fn restrict_last_two(p: &MultiPoly) -> MultiPoly {
    let r = p.nvars();
    let subs: Vec<MultiPoly> =
        (0..r).map(|k| if k + 2 < r { MultiPoly::var(r, k) } else { MultiPoly::zero(r) }).collect();
    p.compose(&subs)
}

/// `c0 + sum coeffs[k] a_{k+1}` in `r` variables.
fn linear(r: usize, coeffs: &[Rational], c0: Rational) -> MultiPoly {
    let mut full = vec![Rational::zero(); r];
    for (k, c) in coeffs.iter().enumerate() {
        full[k] = c.clone();
    }
    MultiPoly::affine(r, &full, c0)
}

pub fn divisibility_report(system: &FlowSystem) -> Result<DivisibilityReport> {
    let r = system.rank();
    let nice = ChamberForm::nice(r);
    let table = coefficient_table(system, &nice, Engine::Dp)?;
    let v = table.volume_polynomial();
    let k = table.ehrhart_polynomial(EhrhartForm::T);
    let n = system.num_roots() as i64;
    let n1: i64 = (2..=r + 1).map(|j| system.multiplicity(1, j) as i64).sum();

    let homogeneous = v.homogeneous_degree() == Some(n - r as i64);
    let leading_power = v.valuation_in(0).is_none_or(|d| d >= n1 - 1);
    let last_degree = v.degree_in(r - 1).is_none_or(|d| d < system.multiplicity(r, r + 1) as i64);
    let mut lead = MultiPoly::one(r);
    for m in 1..=system.q() {
        lead = &lead * &linear(r, &[rat(1)], rat(m));
    }
    let ehrhart_leading_factors = k.divides(&lead);

    let (complete_volume, complete_ehrhart) = if system.is_complete() && r >= 3 {
        let mut coeffs = vec![rat(1); r - 2];
        coeffs.push(rat(3));
        let lin = linear(r, &coeffs, rat(0));
        let lin_plus = linear(r, &coeffs, rat(3));
        let a1 = MultiPoly::var(r, 0).pow(r as u32 - 1);
        let smaller = system.without_root(r - 1, r)?;
        let sv = volume_polynomial(&smaller, &nice)?;
        let sk = ehrhart_polynomial(&smaller, &nice, EhrhartForm::T)?;
        let vol_ok = v.is_independent_of(r - 1)
            && v.degree_in(r - 2).is_none_or(|d| d <= 1)
            && v.divides(&(&a1 * &lin))
            && v.scale(&rat(3)) == &lin * &restrict_last_two(&sv);
        let ehr_ok = k.is_independent_of(r - 1)
            && k.divides(&lin_plus)
            && k.scale(&rat(3)) == &lin_plus * &restrict_last_two(&sk);
        (Some(vol_ok), Some(ehr_ok))
    } else {
        (None, None)
    };

    let (factorisation, factorisation_ehrhart) = match factorisation_ratio(system) {
        Some(c) => {
            let mut coeffs: Vec<Rational> = vec![Rational::one() / &c; r - 2];
            coeffs.push(rat(1));
            let lin = linear(r, &coeffs, rat(0));
            let lin_plus = linear(r, &coeffs, rat(1));
            let smaller = system.without_root(r - 1, r)?;
            let sv = volume_polynomial(&smaller, &nice)?;
            let sk = ehrhart_polynomial(&smaller, &nice, EhrhartForm::T)?;
            let vol = v == &lin * &restrict_last_two(&sv) && v.is_independent_of(r - 1);
            let ehr = k == &lin_plus * &restrict_last_two(&sk);
            (Some(vol), Some(ehr))
        }
        None => (None, None),
    };

    Ok(DivisibilityReport {
        homogeneous,
        leading_power,
        last_degree,
        ehrhart_leading_factors,
        complete_volume,
        complete_ehrhart,
        factorisation,
        factorisation_ehrhart,
    })
}

/// The constant `c = (m_{j,r+1} + m_{j,r} + m_{j,r-1}) / m_{j,r-1}` when the
/// hypotheses of the three-term factorisation hold.
fn factorisation_ratio(system: &FlowSystem) -> Option<Rational> {
    let r = system.rank();
    if r < 3 || system.multiplicity(r, r + 1) != 1 {
        return None;
    }
    if system.multiplicity(r - 1, r + 1) + system.multiplicity(r - 1, r) != 2 || system.multiplicity(r - 1, r) == 0 {
        return None;
    }
    system.without_root(r - 1, r).ok()?;
    let mut c: Option<Rational> = None;
    for j in 1..=r - 2 {
        let d = system.multiplicity(j, r - 1);
        if d == 0 {
            return None;
        }
        let v = Rational::new(
            BigInt::from(system.multiplicity(j, r + 1) + system.multiplicity(j, r) + d),
            BigInt::from(d),
        );
        match &c {
            None => c = Some(v),
            Some(prev) if *prev == v => {}
            Some(_) => return None,
        }
    }
    c.filter(|c| c.is_positive())
}

/// The t-form and s-form of the Ehrhart polynomial of `A_r^+` on the nice chamber.
pub fn lidskii_forms(r: usize) -> Result<(MultiPoly, MultiPoly)> {
    let a = FlowSystem::complete(r)?;
    let table = coefficient_table(&a, &ChamberForm::nice(r), Engine::Dp)?;
    Ok((table.ehrhart_polynomial(EhrhartForm::T), table.ehrhart_polynomial(EhrhartForm::S)))
}

/// Homogeneous top-degree part of a polynomial.
pub fn leading_part(p: &MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::zero(p.nvars());
    if let Some(d) = p.total_degree() {
        for (e, c) in p.terms() {
            if e.iter().map(|&x| x as i64).sum::<i64>() == d {
                out.add_term(e.clone(), c.clone());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, var_names};

    fn poly(s: &str, r: usize) -> MultiPoly {
        parse_poly(s, &var_names("a", r)).unwrap()
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(3, 3).len(), 10);
        assert_eq!(compositions(6, 4).len(), 84);
        assert_eq!(compositions(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn rank_two_polynomials() {
        let a2 = FlowSystem::complete(2).unwrap();
        let nice = ChamberForm::nice(2);
        assert_eq!(volume_polynomial(&a2, &nice).unwrap(), poly("a1", 2));
        assert_eq!(ehrhart_polynomial(&a2, &nice, EhrhartForm::T).unwrap(), poly("a1+1", 2));
        let c2 = ChamberForm::from_witness(&Weight::embed_ints(&[2, -1])).unwrap();
        assert_eq!(volume_polynomial(&a2, &c2).unwrap(), poly("a1+a2", 2));
        assert_eq!(ehrhart_polynomial(&a2, &c2, EhrhartForm::S).unwrap(), poly("a1+a2+1", 2));
    }

    #[test]
    fn nice_chamber_rank_three_and_four() {
        let v3 = volume_polynomial(&FlowSystem::complete(3).unwrap(), &ChamberForm::nice(3)).unwrap();
        assert_eq!(v3, poly("1/6*a1^2*(a1+3*a2)", 3));
        let v4 = volume_polynomial(&FlowSystem::complete(4).unwrap(), &ChamberForm::nice(4)).unwrap();
        // 1/360, not 1/120: the relative volume at e1 - e5 must be 6!/360 = 2
        assert_eq!(v4, poly("1/360*a1^3*(a1+a2+3*a3)*(a1^2+5*a1*a2+10*a2^2)", 4));
    }

    #[test]
    fn engines_give_the_same_tables() {
        let a3 = FlowSystem::complete(3).unwrap();
        for witness in [[1, 1, 1], [3, -1, -1], [3, -2, 1], [3, 2, -1]] {
            let c = ChamberForm::from_witness(&Weight::embed_ints(&witness)).unwrap();
            let dp = coefficient_table(&a3, &c, Engine::Dp).unwrap();
            let series = coefficient_table(&a3, &c, Engine::Series).unwrap();
            assert_eq!(dp.entries, series.entries);
        }
    }

    #[test]
    fn relative_volumes() {
        let a3 = FlowSystem::complete(3).unwrap();
        assert_eq!(relative_volume(&a3, &Weight::root(3, 1, 4)).unwrap(), rat(1));
        let a4 = FlowSystem::complete(4).unwrap();
        assert_eq!(relative_volume(&a4, &Weight::root(4, 1, 5)).unwrap(), rat(2));
        assert!(relative_volume(&a3, &Weight::embed_ints(&[-1, 1, 0])).is_err());
    }

    #[test]
    fn cry_small() {
        let rep = cry_suite(4).unwrap();
        assert!(rep.all_agree());
        assert_eq!(rep.face_relative_volume, rat(1));
        assert!(cry_suite(2).is_err());
    }

    #[test]
    fn reciprocity_example() {
        let a2 = FlowSystem::complete(2).unwrap();
        let out = reciprocity_check(&a2, &Weight::embed_ints(&[2, 1])).unwrap();
        assert!(out.holds && out.holds_dimension_sign);
        assert_eq!(out.strict_count, BigUint::one());
    }

    #[test]
    fn reciprocity_sign_follows_the_dimension() {
        // one root of multiplicity 2: k(a) = a + 1, k'(3) = 2 = (-1)^1 k(-3)
        let m2 = FlowSystem::new(1, &[(1, 2, 2)]).unwrap();
        let out = reciprocity_check(&m2, &Weight::embed_ints(&[3])).unwrap();
        assert_eq!(out.strict_count, BigUint::from(2u32));
        assert_eq!(out.value_at_minus_a, rat(-2));
        assert!(out.holds_dimension_sign && !out.holds);
        // A_3^+ at (3,1,1,-5): k' = 1 while k(c+)(-a) = -1 and N = 6
        let a3 = FlowSystem::complete(3).unwrap();
        let out = reciprocity_check(&a3, &Weight::embed_ints(&[3, 1, 1])).unwrap();
        assert_eq!(out.strict_count, BigUint::one());
        assert_eq!(out.value_at_minus_a, rat(-1));
        assert!(out.holds_dimension_sign && !out.holds);
    }

    #[test]
    fn divisibility_for_complete_systems() {
        for r in 2..=4 {
            let rep = divisibility_report(&FlowSystem::complete(r).unwrap()).unwrap();
            assert!(rep.all_hold(), "r={r}: {rep:?}");
        }
    }

    #[test]
    fn lidskii_and_leading_part() {
        for r in 1..=4 {
            let (t, s) = lidskii_forms(r).unwrap();
            assert_eq!(t, s);
            let v = volume_polynomial(&FlowSystem::complete(r).unwrap(), &ChamberForm::nice(r)).unwrap();
            assert_eq!(leading_part(&t), v);
        }
    }

    /// Residue at 0 of `e^{a x} / (1 - e^{-x})^m` from truncated power series.
    fn exponential_residue(a: i64, m: usize) -> Rational {
        let len = m + 1;
        let fact = |k: usize| Rational::from_integer(factorial(k as u64));
        // (1 - e^{-x}) / x = sum_{k>=0} (-1)^k x^k / (k+1)!
        let g: Vec<Rational> =
            (0..len).map(|k| rat(if k % 2 == 0 { 1 } else { -1 }) / fact(k + 1)).collect();
        let mul = |p: &[Rational], q: &[Rational]| -> Vec<Rational> {
            (0..len).map(|k| (0..=k).map(|i| &p[i] * &q[k - i]).sum()).collect()
        };
        let mut gm = vec![Rational::zero(); len];
        gm[0] = Rational::one();
        for _ in 0..m {
            gm = mul(&gm, &g);
        }
        // invert gm
        let mut inv = vec![Rational::zero(); len];
        inv[0] = Rational::one() / &gm[0];
        for k in 1..len {
            let s: Rational = (1..=k).map(|i| &gm[i] * &inv[k - i]).sum();
            inv[k] = -s / &gm[0];
        }
        let e: Vec<Rational> = (0..len).map(|k| pow_rat(&rat(a), k as i64) / fact(k)).collect();
        mul(&e, &inv)[m - 1].clone()
    }

    #[test]
    fn one_dimensional_residue_formula() {
        for m in 1..5u32 {
            let s = FlowSystem::new(1, &[(1, 2, m)]).unwrap();
            let k = ehrhart_polynomial(&s, &ChamberForm::nice(1), EhrhartForm::T).unwrap();
            for a in 0..6i64 {
                let count = kostant_count(&s, &Weight::from_ints(&[a, -a]).unwrap()).unwrap().value;
                let count = Rational::from_integer(BigInt::from(count));
                assert_eq!(exponential_residue(a, m as usize), count);
                assert_eq!(k.eval_int(&[a]), count);
            }
        }
    }
}
