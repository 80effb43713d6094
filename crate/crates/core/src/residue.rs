//! Iterated residues of rational forms whose denominators are products of
//! `x_i` and `x_i - x_j`.
//!
//! `Ires^σ f = Res_{x_σ(1)} ... Res_{x_σ(n)} f`: the innermost residue is taken
//! in `x_σ(n)`, with every other variable treated as generic and larger in
//! absolute value than the active one. Each factor `(x_k - x_j)` containing the
//! active variable `x_k` is therefore expanded as a geometric series in
//! `x_k / x_j`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kostant::count_matrix;
use crate::poly::{binomial, parse_poly, var_names, LaurentPoly, Rational};
use crate::system::{FlowSystem, Permutation};

/// A linear form in the denominator (0-based variable indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinearForm {
    Var(usize),
    Diff(usize, usize),
}

/// `numerator / prod_{i<j} (x_i - x_j)^{p_ij}`, where powers of single
/// variables live in the Laurent numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueForm {
    nvars: usize,
    numerator: LaurentPoly,
    diffs: BTreeMap<(usize, usize), u32>,
}

impl ResidueForm {
    pub fn new(nvars: usize, numerator: LaurentPoly, factors: &[(LinearForm, u32)]) -> Result<ResidueForm> {
        if numerator.nvars() != nvars {
            return Err(Error::InvalidForm(format!(
                "numerator has {} variables, expected {nvars}",
                numerator.nvars()
            )));
        }
        let mut form = ResidueForm { nvars, numerator, diffs: BTreeMap::new() };
        for &(f, p) in factors {
            form.divide_by(f, p)?;
        }
        Ok(form)
    }

    fn divide_by(&mut self, f: LinearForm, p: u32) -> Result<()> {
        if p == 0 {
            return Ok(());
        }
        match f {
            LinearForm::Var(i) => {
                if i >= self.nvars {
                    return Err(Error::InvalidForm(format!("variable index {i} out of range")));
                }
                let mut e = vec![0i32; self.nvars];
                e[i] = -(p as i32);
                self.numerator = self.numerator.mul_monomial(&e, &Rational::one());
            }
            LinearForm::Diff(i, j) => {
                if i >= self.nvars || j >= self.nvars || i == j {
                    return Err(Error::InvalidForm(format!("bad factor x{} - x{}", i + 1, j + 1)));
                }
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                if i > j && p % 2 == 1 {
                    self.numerator = -&self.numerator;
                }
                *self.diffs.entry((a, b)).or_insert(0) += p;
            }
        }
        Ok(())
    }

    /// Build from roots `e^a - e^b` (1-based, `a, b <= r+1`) with `e^{r+1} = 0`
    /// and `e^k = x_k`.
    pub fn from_roots(r: usize, numerator: LaurentPoly, roots: &[(usize, usize, u32)]) -> Result<ResidueForm> {
        let mut form = ResidueForm::new(r, numerator, &[])?;
        for &(a, b, p) in roots {
            if a == b || a == 0 || b == 0 || a > r + 1 || b > r + 1 {
                return Err(Error::InvalidForm(format!("bad root e^{a} - e^{b}")));
            }
            if a == r + 1 {
                // -(x_b)
                form.divide_by(LinearForm::Var(b - 1), p)?;
                if p % 2 == 1 {
                    form.numerator = -&form.numerator;
                }
            } else if b == r + 1 {
                form.divide_by(LinearForm::Var(a - 1), p)?;
            } else {
                form.divide_by(LinearForm::Diff(a - 1, b - 1), p)?;
            }
        }
        Ok(form)
    }

    /// `x^i / prod_{α ∈ Φ} α` in the variables `x_1..x_r`.
    pub fn monomial_quotient(system: &FlowSystem, exps: &[u32]) -> Result<ResidueForm> {
        let r = system.rank();
        if exps.len() != r {
            return Err(Error::InvalidForm(format!("expected {r} exponents")));
        }
        let num = LaurentPoly::monomial(r, exps.iter().map(|&x| x as i32).collect(), Rational::one());
        Self::from_roots(r, num, &system.edges())
    }

    /// The basis element `f_w = 1 / ((x_w(1) - x_w(2)) ... (x_w(n-1) - x_w(n)) x_w(n))`.
    pub fn basis_element(w: &Permutation) -> ResidueForm {
        let n = w.len();
        let z = w.zero_based();
        let mut factors: Vec<(LinearForm, u32)> = z.windows(2).map(|p| (LinearForm::Diff(p[0], p[1]), 1)).collect();
        factors.push((LinearForm::Var(z[n - 1]), 1));
        ResidueForm::new(n, LaurentPoly::one(n), &factors).expect("well-formed basis element")
    }

    /// Parse a numerator expression in `x1..xn` and a comma-separated list of
    /// denominator factors such as `x1, x1-x2, (x2-x3)^2, x3^4`.
    pub fn parse(nvars: usize, numerator: &str, denominator: &str) -> Result<ResidueForm> {
        let names = var_names("x", nvars);
        let num = parse_poly(numerator, &names)?.to_laurent();
        let mut factors = Vec::new();
        for item in denominator.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (body, p) = match item.rsplit_once('^') {
                Some((b, e)) => (
                    b.trim(),
                    e.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {item:?}")))?,
                ),
                None => (item, 1),
            };
            let body = body.trim_start_matches('(').trim_end_matches(')');
            let var = |s: &str| -> Result<usize> {
                let i = names
                    .iter()
                    .position(|n| n == s.trim())
                    .ok_or_else(|| Error::Parse(format!("unknown variable in factor {item:?}")))?;
                Ok(i)
            };
            let f = match body.split_once('-') {
                Some((a, b)) => LinearForm::Diff(var(a)?, var(b)?),
                None => LinearForm::Var(var(body)?),
            };
            factors.push((f, p));
        }
        Self::new(nvars, num, &factors)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    /// Denominator factors `(x_i - x_j)^p` with `i < j`.
    pub fn diff_factors(&self) -> &BTreeMap<(usize, usize), u32> {
        &self.diffs
    }

    /// Total degree when the form is homogeneous.
    pub fn degree(&self) -> Option<i64> {
        if self.numerator.is_zero() {
            return None;
        }
        let d = self.numerator.homogeneous_degree()?;
        Some(d - self.diffs.values().map(|&p| p as i64).sum::<i64>())
    }

    /// `w · f`: substitute `x_i -> x_{w(i)}`.
    pub fn permute(&self, w: &Permutation) -> Result<ResidueForm> {
        if w.len() != self.nvars {
            return Err(Error::InvalidPermutation(format!("{w} does not act on {} variables", self.nvars)));
        }
        let z = w.zero_based();
        let num = self.numerator.rename_vars(z, self.nvars);
        let factors: Vec<_> = self.diffs.iter().map(|(&(i, j), &p)| (LinearForm::Diff(z[i], z[j]), p)).collect();
        Self::new(self.nvars, num, &factors)
    }

    pub fn scale(&self, c: &Rational) -> ResidueForm {
        ResidueForm { nvars: self.nvars, numerator: self.numerator.scale(c), diffs: self.diffs.clone() }
    }

    /// Sum of two forms over a common denominator.
    pub fn add(&self, other: &ResidueForm) -> Result<ResidueForm> {
        if self.nvars != other.nvars {
            return Err(Error::InvalidForm("forms over different variable counts".into()));
        }
        let mut diffs = self.diffs.clone();
        for (&k, &p) in &other.diffs {
            let e = diffs.entry(k).or_insert(0);
            *e = (*e).max(p);
        }
        let lift = |f: &ResidueForm| -> LaurentPoly {
            let mut num = f.numerator.clone();
            for (&(i, j), &p) in &diffs {
                let have = f.diffs.get(&(i, j)).copied().unwrap_or(0);
                let lin = &LaurentPoly::var(self.nvars, i) - &LaurentPoly::var(self.nvars, j);
                num = &num * &lin.pow(p - have);
            }
            num
        };
        Ok(ResidueForm { nvars: self.nvars, numerator: &lift(self) + &lift(other), diffs })
    }
}

impl fmt::Display for ResidueForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den: Vec<String> = self
            .diffs
            .iter()
            .map(|(&(i, j), &p)| {
                if p == 1 {
                    format!("(x{}-x{})", i + 1, j + 1)
                } else {
                    format!("(x{}-x{})^{}", i + 1, j + 1, p)
                }
            })
            .collect();
        if den.is_empty() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / {}", self.numerator, den.join(""))
        }
    }
}

/// `Ires^σ f`, computed by successive Laurent expansion. `order` lists the
/// variables outermost first.
pub fn iterated_residue(form: &ResidueForm, order: &Permutation) -> Result<Rational> {
    let n = form.nvars;
    if order.len() != n {
        return Err(Error::InvalidPermutation(format!("{order} does not order {n} variables")));
    }
    if let Some(d) = form.degree() {
        if d != -(n as i64) {
            return Ok(Rational::zero());
        }
    }
    let mut num = form.numerator.clone();
    let mut diffs = form.diffs.clone();
    for &z in order.zero_based().iter().rev() {
        // (other variable, power, factor is (x_z - x_other))
        let mut factors = Vec::new();
        diffs.retain(|&(i, j), &mut p| {
            if i == z {
                factors.push((j, p, true));
                false
            } else if j == z {
                factors.push((i, p, false));
                false
            } else {
                true
            }
        });
        num = residue_in(&num, z, &factors);
        if num.is_zero() {
            return Ok(Rational::zero());
        }
    }
    debug_assert!(num.is_constant());
    Ok(num.constant_term())
}

/// Residue at `x_z = 0` of `num / prod (±(x_z - x_o))^p`, expanding each factor in `x_z / x_o`.
fn residue_in(num: &LaurentPoly, z: usize, factors: &[(usize, u32, bool)]) -> LaurentPoly {
    let nv = num.nvars();
    let groups = num.split_by_var(z);
    let Some((&min_e, _)) = groups.iter().next() else {
        return LaurentPoly::zero(nv);
    };
    if min_e >= 0 {
        return LaurentPoly::zero(nv);
    }
    let order = (-1 - min_e) as usize;
    // series[k] = coefficient of x_z^k in prod (1 - x_z/x_o)^{-p}
    let mut series = vec![LaurentPoly::zero(nv); order + 1];
    series[0] = LaurentPoly::one(nv);
    let mut prefactor = vec![0i32; nv];
    let mut sign = Rational::one();
    for &(o, p, forward) in factors {
        prefactor[o] -= p as i32;
        if forward && p % 2 == 1 {
            sign = -sign;
        }
        let mut next = vec![LaurentPoly::zero(nv); order + 1];
        for (k, slot) in next.iter_mut().enumerate() {
            for m in 0..=k {
                if series[k - m].is_zero() {
                    continue;
                }
                let mut e = vec![0i32; nv];
                e[o] = -(m as i32);
                let c = Rational::from_integer(binomial(p as i64 + m as i64 - 1, m as i64));
                *slot = &*slot + &series[k - m].mul_monomial(&e, &c);
            }
        }
        series = next;
    }
    let mut out = LaurentPoly::zero(nv);
    for (&e, part) in &groups {
        if e >= 0 {
            break;
        }
        let k = (-1 - e) as usize;
        if !series[k].is_zero() {
            out = &out + &(part * &series[k]);
        }
    }
    out.mul_monomial(&prefactor, &sign)
}

/// `Ires^σ (x^i / prod_Φ α)` through the Kostant partition function of the
/// system with the terminal roots removed, after relabelling the variables by
/// `σ` and flipping reversed roots.
pub fn iterated_residue_dp(system: &FlowSystem, exps: &[u32], order: &Permutation) -> Result<BigInt> {
    let r = system.rank();
    if exps.len() != r || order.len() != r {
        return Err(Error::InvalidForm(format!("expected {r} exponents and a permutation of {r} letters")));
    }
    let total: i64 = exps.iter().map(|&x| x as i64).sum();
    if total != system.num_roots() as i64 - r as i64 {
        return Ok(BigInt::zero());
    }
    let pos = order.inverse();
    let pos = pos.zero_based();
    // relabelled multiplicities on r+1 vertices, vertex r stays last
    let mut m = vec![vec![0u32; r + 1]; r + 1];
    let mut flips = 0u32;
    for (i, j, mult) in system.edges() {
        let (a, b) = (i - 1, j - 1);
        if b == r {
            m[pos[a]][r] += mult;
        } else {
            let (c, d) = (pos[a], pos[b]);
            if c < d {
                m[c][d] += mult;
            } else {
                m[d][c] += mult;
                flips += mult;
            }
        }
    }
    let z = order.zero_based();
    let target: Vec<i64> = (0..r)
        .map(|c| {
            let t: i64 = m[c][c + 1..].iter().map(|&x| x as i64).sum::<i64>() - 1;
            exps[z[c]] as i64 - t
        })
        .collect();
    let inner: Vec<Vec<u32>> = m[..r].iter().map(|row| row[..r].to_vec()).collect();
    let count = BigInt::from(count_matrix(&inner, &target));
    Ok(if flips % 2 == 1 { -count } else { count })
}

/// Coefficients of a form of degree `-n` on the basis `{f_w}`: `c_w = Ires^w f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SBasisVector {
    pub n: usize,
    pub coeffs: BTreeMap<Permutation, Rational>,
}

impl SBasisVector {
    pub fn get(&self, w: &Permutation) -> Rational {
        self.coeffs.get(w).cloned().unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for SBasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| format!("{c}*f{w}"))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// The total residue of `form` expressed on the basis `{f_w}`.
pub fn tres_coefficients(form: &ResidueForm) -> Result<SBasisVector> {
    let n = form.nvars;
    match form.degree() {
        Some(d) if d == -(n as i64) => {}
        None if form.numerator.is_zero() => {}
        d => {
            return Err(Error::Inhomogeneous(format!("degree {d:?}, expected -{n}")));
        }
    }
    let perms = Permutation::all(n);
    let values: Vec<Result<Rational>> = perms.par_iter().map(|w| iterated_residue(form, w)).collect();
    let mut coeffs = BTreeMap::new();
    for (w, v) in perms.into_iter().zip(values) {
        let v = v?;
        if !v.is_zero() {
            coeffs.insert(w, v);
        }
    }
    Ok(SBasisVector { n, coeffs })
}
