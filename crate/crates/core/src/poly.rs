//! Exact rational arithmetic and sparse multivariate polynomials.
//!
//! `Poly<E>` stores a map from exponent vectors to nonzero rational
//! coefficients. With `E = i32` it is a Laurent polynomial (used by the
//! residue engine), with `E = u32` an ordinary polynomial (volume and
//! Ehrhart polynomials).

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `n choose k` for any integer `n` (falling-factorial definition), zero for `k < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 && k > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    for m in 0..k {
        num *= BigInt::from(n - m);
    }
    num / factorial(k as u64)
}

/// `u (u-1) ... (u-k+1) / k!`
pub fn binom_rat(u: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for m in 0..k {
        acc *= u - rat(m as i64);
    }
    acc / Rational::from_integer(factorial(k as u64))
}

/// `u (u+1) ... (u+k-1) / k!`
pub fn rising_binom_rat(u: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for m in 0..k {
        acc *= u + rat(m as i64);
    }
    acc / Rational::from_integer(factorial(k as u64))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Exponent type of a sparse polynomial.
pub trait Exponent:
    Copy + Ord + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Default variable prefix used when printing.
    const PREFIX: &'static str;
    fn zero() -> Self;
    fn plus(self, other: Self) -> Self;
    fn to_i64(self) -> i64;
    fn from_i64(v: i64) -> Option<Self>;
}

impl Exponent for i32 {
    const PREFIX: &'static str = "x";
    fn zero() -> Self {
        0
    }
    fn plus(self, other: Self) -> Self {
        self.checked_add(other).expect("exponent overflow")
    }
    fn to_i64(self) -> i64 {
        self as i64
    }
    fn from_i64(v: i64) -> Option<Self> {
        i32::try_from(v).ok()
    }
}

impl Exponent for u32 {
    const PREFIX: &'static str = "a";
    fn zero() -> Self {
        0
    }
    fn plus(self, other: Self) -> Self {
        self.checked_add(other).expect("exponent overflow")
    }
    fn to_i64(self) -> i64 {
        self as i64
    }
    fn from_i64(v: i64) -> Option<Self> {
        u32::try_from(v).ok()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<E: Exponent> {
    nvars: usize,
    terms: BTreeMap<Vec<E>, Rational>,
}

pub type LaurentPoly = Poly<i32>;
pub type MultiPoly = Poly<u32>;

impl<E: Exponent> Poly<E> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![E::zero(); nvars], c)
    }

    pub fn monomial(nvars: usize, exp: Vec<E>, c: Rational) -> Self {
        assert_eq!(exp.len(), nvars, "exponent length mismatch");
        let mut p = Self::zero(nvars);
        p.add_term(exp, c);
        p
    }

    /// The variable with 0-based index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exp = vec![E::zero(); nvars];
        exp[i] = E::from_i64(1).unwrap();
        Self::monomial(nvars, exp, Rational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<E>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[E]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![E::zero(); self.nvars])
    }

    /// True when every term is constant.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == E::zero()))
    }

    pub fn add_term(&mut self, exp: Vec<E>, c: Rational) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different variable counts");
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiply by `c * x^exp`.
    pub fn mul_monomial(&self, exp: &[E], c: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            let ne: Vec<E> = e.iter().zip(exp).map(|(&a, &b)| a.plus(b)).collect();
            out.terms.insert(ne, v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Total degree of every term if they all agree.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|e| e.iter().map(|x| x.to_i64()).sum::<i64>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Largest total degree of a term.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|x| x.to_i64()).sum::<i64>())
            .max()
    }

    /// Largest exponent of variable `v` among the terms.
    pub fn degree_in(&self, v: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[v].to_i64()).max()
    }

    /// Smallest exponent of variable `v` among the terms.
    pub fn valuation_in(&self, v: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[v].to_i64()).min()
    }

    pub fn is_independent_of(&self, v: usize) -> bool {
        self.terms.keys().all(|e| e[v] == E::zero())
    }

    /// Rename variables: old variable `i` becomes new variable `map[i]`.
    pub fn rename_vars(&self, map: &[usize], new_nvars: usize) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(new_nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![E::zero(); new_nvars];
            for (i, &x) in e.iter().enumerate() {
                ne[map[i]] = ne[map[i]].plus(x);
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Group terms by the exponent of variable `v`; that exponent is zeroed in the parts.
    pub fn split_by_var(&self, v: usize) -> BTreeMap<E, Self> {
        let mut out: BTreeMap<E, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let k = ne[v];
            ne[v] = E::zero();
            out.entry(k)
                .or_insert_with(|| Self::zero(self.nvars))
                .terms
                .insert(ne, c.clone());
        }
        out
    }

    /// Canonical ordering: total degree descending, then exponent vector descending.
    fn sorted_terms(&self) -> Vec<(&Vec<E>, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: i64 = a.iter().map(|x| x.to_i64()).sum();
            let db: i64 = b.iter().map(|x| x.to_i64()).sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }

    pub fn default_names(&self) -> Vec<String> {
        (1..=self.nvars).map(|i| format!("{}{}", E::PREFIX, i)).collect()
    }

    /// Canonical expanded form with the given variable names.
    pub fn format_with(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (exp, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono: Vec<String> = exp
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != E::zero())
                .map(|(i, &x)| {
                    if x.to_i64() == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], x)
                    }
                })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            let body = if mono.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                mono.join("*")
            } else {
                format!("{}*{}", abs, mono.join("*"))
            };
            match (k, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body)
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body)
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body)
                }
            }
        }
        out
    }

    pub fn to_json(&self, names: &[String]) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| {
                json!({
                    "exp": e.iter().map(|x| x.to_i64()).collect::<Vec<_>>(),
                    "num": c.numer().to_string(),
                    "den": c.denom().to_string(),
                })
            })
            .collect();
        json!({ "vars": names, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("polynomial JSON: {m}"));
        let vars = v.get("vars").and_then(Value::as_array).ok_or_else(|| bad("missing vars"))?;
        let nvars = vars.len();
        let mut p = Self::zero(nvars);
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))? {
            let exp = t.get("exp").and_then(Value::as_array).ok_or_else(|| bad("missing exp"))?;
            if exp.len() != nvars {
                return Err(bad("exponent length"));
            }
            let exp: Vec<E> = exp
                .iter()
                .map(|x| x.as_i64().and_then(E::from_i64).ok_or_else(|| bad("exponent")))
                .collect::<Result<_>>()?;
            let num = t.get("num").and_then(Value::as_str).ok_or_else(|| bad("num"))?;
            let den = t.get("den").and_then(Value::as_str).ok_or_else(|| bad("den"))?;
            p.add_term(exp, parse_rational(&format!("{num}/{den}"))?);
        }
        Ok(p)
    }
}

impl<E: Exponent> fmt::Display for Poly<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&self.default_names()))
    }
}

impl<'a, E: Exponent> Add<&'a Poly<E>> for &'a Poly<E> {
    type Output = Poly<E>;
    fn add(self, rhs: &Poly<E>) -> Poly<E> {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a, E: Exponent> Sub<&'a Poly<E>> for &'a Poly<E> {
    type Output = Poly<E>;
    fn sub(self, rhs: &Poly<E>) -> Poly<E> {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a, E: Exponent> Mul<&'a Poly<E>> for &'a Poly<E> {
    type Output = Poly<E>;
    fn mul(self, rhs: &Poly<E>) -> Poly<E> {
        self.check_vars(rhs);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<E> = ea.iter().zip(eb).map(|(&a, &b)| a.plus(b)).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl<E: Exponent> Neg for &Poly<E> {
    type Output = Poly<E>;
    fn neg(self) -> Poly<E> {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<E: Exponent> $tr<Poly<E>> for Poly<E> {
            type Output = Poly<E>;
            fn $m(self, rhs: Poly<E>) -> Poly<E> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<E: Exponent> Neg for Poly<E> {
    type Output = Poly<E>;
    fn neg(self) -> Poly<E> {
        -&self
    }
}

impl LaurentPoly {
    /// Evaluate at a point with nonzero coordinates wherever a negative exponent occurs.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k < 0 && x.is_zero() {
                    return Err(Error::OutOfRange("negative power of zero".into()));
                }
                t *= pow_rat(x, k as i64);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Convert to an ordinary polynomial when no exponent is negative.
    pub fn to_multi(&self) -> Option<MultiPoly> {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let ne: Option<Vec<u32>> = e.iter().map(|&k| u32::try_from(k).ok()).collect();
            out.terms.insert(ne?, c.clone());
        }
        Some(out)
    }
}

impl MultiPoly {
    pub fn to_laurent(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.terms
                .insert(e.iter().map(|&k| i32::try_from(k).expect("exponent overflow")).collect(), c.clone());
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong length");
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= pow_rat(x, k as i64);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_int(&self, point: &[i64]) -> Rational {
        let p: Vec<Rational> = point.iter().map(|&x| rat(x)).collect();
        self.eval(&p)
    }

    /// Substitute variable `i` by `subs[i]`; all substitutes share one variable count.
    pub fn compose(&self, subs: &[MultiPoly]) -> MultiPoly {
        assert_eq!(subs.len(), self.nvars, "wrong number of substitutes");
        let m = subs.first().map(|s| s.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<MultiPoly>> = subs.iter().map(|s| vec![MultiPoly::one(s.nvars)]).collect();
        let mut out = MultiPoly::zero(m);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &subs[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Affine substitute `c0 + sum coeffs[k] * var_k` over `nvars` variables.
    pub fn affine(nvars: usize, coeffs: &[Rational], c0: Rational) -> MultiPoly {
        let mut p = MultiPoly::constant(nvars, c0);
        for (k, c) in coeffs.iter().enumerate() {
            p = &p + &MultiPoly::var(nvars, k).scale(c);
        }
        p
    }

    /// Division with remainder by `g` in lex order; `g` divides `self` iff the remainder is zero.
    pub fn div_rem(&self, g: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
        self.check_vars(g);
        let (ge, gc) = g
            .terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))
            .ok_or_else(|| Error::OutOfRange("division by zero polynomial".into()))?;
        let mut p = self.clone();
        let mut q = MultiPoly::zero(self.nvars);
        let mut r = MultiPoly::zero(self.nvars);
        while let Some((pe, pc)) = p.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if pe.iter().zip(&ge).all(|(a, b)| a >= b) {
                let te: Vec<u32> = pe.iter().zip(&ge).map(|(a, b)| a - b).collect();
                let tc = &pc / &gc;
                q.add_term(te.clone(), tc.clone());
                p = &p - &g.mul_monomial(&te, &tc);
            } else {
                r.add_term(pe.clone(), pc.clone());
                p.terms.remove(&pe);
            }
        }
        Ok((q, r))
    }

    pub fn divides(&self, g: &MultiPoly) -> bool {
        matches!(self.div_rem(g), Ok((_, r)) if r.is_zero())
    }

    /// `binom(u, k) = u (u-1) ... (u-k+1) / k!`
    pub fn binom(u: &MultiPoly, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(u.nvars);
        for m in 0..k {
            acc = &acc * &(u - &MultiPoly::constant(u.nvars, rat(m as i64)));
        }
        acc.scale(&Rational::new(BigInt::one(), factorial(k as u64)))
    }

    /// `((u, k)) = u (u+1) ... (u+k-1) / k!`
    pub fn rising_binom(u: &MultiPoly, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(u.nvars);
        for m in 0..k {
            acc = &acc * &(u + &MultiPoly::constant(u.nvars, rat(m as i64)));
        }
        acc.scale(&Rational::new(BigInt::one(), factorial(k as u64)))
    }

    /// Lagrange interpolation in one variable.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Result<MultiPoly> {
        for (i, (x, _)) in points.iter().enumerate() {
            if points[..i].iter().any(|(y, _)| y == x) {
                return Err(Error::DuplicateAbscissa(x.to_string()));
            }
        }
        let t = MultiPoly::var(1, 0);
        let mut out = MultiPoly::zero(1);
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = MultiPoly::constant(1, yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let factor = &t - &MultiPoly::constant(1, xj.clone());
                    basis = (&basis * &factor).scale(&(Rational::one() / (xi - xj)));
                }
            }
            out = &out + &basis;
        }
        Ok(out)
    }

    /// Multiply out the denominators and divide by the content, making the
    /// coefficients coprime integers with a positive leading coefficient.
    pub fn primitive_part(&self) -> (Rational, MultiPoly) {
        if self.is_zero() {
            return (Rational::zero(), self.clone());
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut content = Rational::new(num, den);
        if self.sorted_terms()[0].1.is_negative() {
            content = -content;
        }
        (content.clone(), self.scale(&(Rational::one() / content)))
    }
}

/// `x^k` for any integer `k` (x nonzero when k < 0).
pub fn pow_rat(x: &Rational, k: i64) -> Rational {
    if k >= 0 {
        num_traits::pow(x.clone(), k as usize)
    } else {
        Rational::one() / num_traits::pow(x.clone(), (-k) as usize)
    }
}

/// Integer value of a rational, if it is one.
pub fn to_integer(q: &Rational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

pub fn to_i64(q: &Rational) -> Option<i64> {
    to_integer(q).and_then(|n| n.to_i64())
}

/// Parse a polynomial expression such as `"1/6*a1^2*(a1+3*a2)"` over the given names.
pub fn parse_poly(src: &str, names: &[String]) -> Result<MultiPoly> {
    let mut p = Parser { s: src.as_bytes(), pos: 0, names, src };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    names: &'a [String],
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, m: &str) -> Error {
        Error::Parse(format!("{m} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let n = self.names.len();
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        debug_assert_eq!(acc.nvars, n);
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(self.err("division by a non-constant or zero"));
                    }
                    acc = acc.scale(&(Rational::one() / d.constant_term()));
                }
                Some(b'(') => acc = &acc * &self.power()?,
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let k: u32 = std::str::from_utf8(&self.s[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("expected a nonnegative exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let n = self.names.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let v: BigInt = std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap();
                Ok(MultiPoly::constant(n, Rational::from_integer(v)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let i = self
                    .names
                    .iter()
                    .position(|x| x == name)
                    .ok_or_else(|| self.err(&format!("unknown variable {name:?}")))?;
                Ok(MultiPoly::var(n, i))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// Names `prefix1, ..., prefixN`.
pub fn var_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}
