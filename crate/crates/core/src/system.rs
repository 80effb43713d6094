//! Flow systems (multisets of positive roots of type A), weights and permutations.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{rat, to_i64, Rational};

/// The positive root `e^i - e^j` with `1 <= i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn new(i: usize, j: usize) -> Result<Root> {
        if i == 0 || i >= j {
            return Err(Error::InvalidSystem(format!("not a positive root: e^{i} - e^{j}")));
        }
        Ok(Root { i, j })
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}-e{}", self.i, self.j)
    }
}

/// A multiset of positive roots of `A_r`, stored as multiplicities `m_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlowSystem {
    r: usize,
    /// `mult[i][j]` is the multiplicity of `e^{i+1} - e^{j+1}` (0-based storage).
    mult: Vec<Vec<u32>>,
}

impl FlowSystem {
    /// Build a system of rank `r` from edges `(i, j, multiplicity)`, 1-based.
    /// The roots must span the `r`-dimensional space.
    pub fn new(r: usize, edges: &[(usize, usize, u32)]) -> Result<FlowSystem> {
        let s = Self::new_unchecked(r, edges)?;
        if s.span_rank() != r {
            return Err(Error::InvalidSystem(format!(
                "roots span a space of dimension {} instead of {r}",
                s.span_rank()
            )));
        }
        Ok(s)
    }

    /// Like [`FlowSystem::new`] but the spanning condition is not required.
    pub fn new_unchecked(r: usize, edges: &[(usize, usize, u32)]) -> Result<FlowSystem> {
        if r == 0 {
            return Err(Error::InvalidSystem("rank must be at least 1".into()));
        }
        let mut mult = vec![vec![0u32; r + 1]; r + 1];
        for &(i, j, m) in edges {
            Root::new(i, j)?;
            if j > r + 1 {
                return Err(Error::InvalidSystem(format!("root e^{i} - e^{j} exceeds rank {r}")));
            }
            mult[i - 1][j - 1] += m;
        }
        Ok(FlowSystem { r, mult })
    }

    /// All positive roots of `A_r`, each once.
    pub fn complete(r: usize) -> Result<FlowSystem> {
        let edges: Vec<_> = (1..=r + 1)
            .flat_map(|i| (i + 1..=r + 1).map(move |j| (i, j, 1)))
            .collect();
        Self::new(r, &edges)
    }

    /// `{e^i - e^{r+1}} ∪ {e^i - e^{i+1}}`, so `e^r - e^{r+1}` appears twice.
    pub fn pitman_stanley(r: usize) -> Result<FlowSystem> {
        let mut edges: Vec<_> = (1..=r).map(|i| (i, r + 1, 1)).collect();
        edges.extend((1..=r).map(|i| (i, i + 1, 1)));
        Self::new(r, &edges)
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// Multiplicity of `e^i - e^j` (1-based, zero for invalid pairs).
    pub fn multiplicity(&self, i: usize, j: usize) -> u32 {
        if i == 0 || j == 0 || i >= j || j > self.r + 1 {
            0
        } else {
            self.mult[i - 1][j - 1]
        }
    }

    /// 0-based multiplicity matrix.
    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.mult
    }

    /// Total number of roots counted with multiplicity.
    pub fn num_roots(&self) -> usize {
        self.mult.iter().flatten().map(|&m| m as usize).sum()
    }

    /// Roots in lexicographic order, repeated by multiplicity.
    pub fn roots(&self) -> Vec<Root> {
        let mut out = Vec::new();
        for i in 1..=self.r + 1 {
            for j in i + 1..=self.r + 1 {
                for _ in 0..self.multiplicity(i, j) {
                    out.push(Root { i, j });
                }
            }
        }
        out
    }

    /// Distinct roots with their multiplicities.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for i in 1..=self.r + 1 {
            for j in i + 1..=self.r + 1 {
                let m = self.multiplicity(i, j);
                if m > 0 {
                    out.push((i, j, m));
                }
            }
        }
        out
    }

    /// `t_j = sum_{k > j} m_jk - 1` for `1 <= j <= r`.
    pub fn t_shift(&self, j: usize) -> i64 {
        (j + 1..=self.r + 1).map(|k| self.multiplicity(j, k) as i64).sum::<i64>() - 1
    }

    /// `s_j = 1 - sum_{k < j} m_kj` for `1 <= j <= r`.
    pub fn s_shift(&self, j: usize) -> i64 {
        1 - (1..j).map(|k| self.multiplicity(k, j) as i64).sum::<i64>()
    }

    pub fn t_shifts(&self) -> Vec<i64> {
        (1..=self.r).map(|j| self.t_shift(j)).collect()
    }

    pub fn s_shifts(&self) -> Vec<i64> {
        (1..=self.r).map(|j| self.s_shift(j)).collect()
    }

    /// `q = sum_{k >= 2} m_1k - 1`.
    pub fn q(&self) -> i64 {
        self.t_shift(1)
    }

    /// Dimension of the span of the roots, computed exactly.
    pub fn span_rank(&self) -> usize {
        let rows: Vec<Vec<Rational>> = self
            .edges()
            .iter()
            .map(|&(i, j, _)| {
                let mut v = vec![Rational::zero(); self.r + 1];
                v[i - 1] = rat(1);
                v[j - 1] = rat(-1);
                v
            })
            .collect();
        crate::linalg::rank(rows)
    }

    pub fn spans(&self) -> bool {
        self.span_rank() == self.r
    }

    /// Remove every root `e^i - e^{r+1}`, giving a system of rank `r - 1`.
    /// The result need not span.
    pub fn delete_terminal_roots(&self) -> Result<FlowSystem> {
        if self.r < 2 {
            return Err(Error::InvalidSystem("cannot drop the last vertex of a rank-1 system".into()));
        }
        let edges: Vec<_> = self.edges().into_iter().filter(|&(_, j, _)| j <= self.r).collect();
        Self::new_unchecked(self.r - 1, &edges)
    }

    /// Remove one copy of `e^i - e^j`; the result must still span.
    pub fn without_root(&self, i: usize, j: usize) -> Result<FlowSystem> {
        if self.multiplicity(i, j) == 0 {
            return Err(Error::InvalidSystem(format!("root e^{i} - e^{j} not present")));
        }
        let mut edges = self.edges();
        for e in edges.iter_mut() {
            if e.0 == i && e.1 == j {
                e.2 -= 1;
            }
        }
        Self::new(self.r, &edges)
    }

    /// True when this is `A_r^+` with every multiplicity one.
    pub fn is_complete(&self) -> bool {
        (1..=self.r + 1).all(|i| (i + 1..=self.r + 1).all(|j| self.multiplicity(i, j) == 1))
    }

    /// Parse `complete:<r>`, `pitman:<r>` or the JSON object `{"r":..,"edges":[[i,j,m],..]}`.
    pub fn parse(spec: &str) -> Result<FlowSystem> {
        let spec = spec.trim();
        let rank_of = |s: &str| -> Result<usize> {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad rank in system spec {spec:?}")))
        };
        if let Some(r) = spec.strip_prefix("complete:") {
            return Self::complete(rank_of(r)?);
        }
        if let Some(r) = spec.strip_prefix("pitman:") {
            return Self::pitman_stanley(rank_of(r)?);
        }
        let v: Value = serde_json::from_str(spec).map_err(|e| Error::Parse(format!("system JSON: {e}")))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<FlowSystem> {
        if let Some(s) = v.as_str() {
            return Self::parse(s);
        }
        let bad = |m: &str| Error::Parse(format!("system JSON: {m}"));
        let r = v.get("r").and_then(Value::as_u64).ok_or_else(|| bad("missing r"))? as usize;
        let mut edges = Vec::new();
        for e in v.get("edges").and_then(Value::as_array).ok_or_else(|| bad("missing edges"))? {
            let t = e.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("edge must be [i,j,mult]"))?;
            let g = |k: usize| t[k].as_u64().ok_or_else(|| bad("edge entries must be nonnegative integers"));
            edges.push((g(0)? as usize, g(1)? as usize, g(2)? as u32));
        }
        Self::new(r, &edges)
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self.edges().iter().map(|&(i, j, m)| json!([i, j, m])).collect();
        json!({ "r": self.r, "edges": edges })
    }
}

impl fmt::Display for FlowSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edges()
            .iter()
            .map(|&(i, j, m)| if m == 1 { format!("e{i}-e{j}") } else { format!("{m}*(e{i}-e{j})") })
            .collect();
        write!(f, "rank {}: {{{}}}", self.r, parts.join(", "))
    }
}

/// A point of the hyperplane `sum a_k = 0` in `Q^{r+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    coords: Vec<Rational>,
}

impl Weight {
    /// Full coordinates; they must sum to zero.
    pub fn new(coords: Vec<Rational>) -> Result<Weight> {
        if coords.len() < 2 {
            return Err(Error::InvalidWeight("need at least two coordinates".into()));
        }
        let s: Rational = coords.iter().sum();
        if !s.is_zero() {
            return Err(Error::InvalidWeight(format!("coordinates sum to {s}, not 0")));
        }
        Ok(Weight { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Weight> {
        Self::new(coords.iter().map(|&x| rat(x)).collect())
    }

    /// `(a_1, ..., a_r) -> (a_1, ..., a_r, -sum a_k)`.
    pub fn embed(first: &[Rational]) -> Weight {
        let mut coords = first.to_vec();
        coords.push(-first.iter().sum::<Rational>());
        Weight { coords }
    }

    pub fn embed_ints(first: &[i64]) -> Weight {
        Self::embed(&first.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    /// Rank `r`: the number of free coordinates.
    pub fn rank(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// The first `r` coordinates.
    pub fn head(&self) -> &[Rational] {
        &self.coords[..self.rank()]
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn to_ints(&self) -> Result<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| to_i64(c).ok_or_else(|| Error::NotIntegral(self.to_string())))
            .collect()
    }

    /// Partial sums `a_1 + ... + a_k` are all nonnegative.
    pub fn in_cone(&self) -> bool {
        let mut s = Rational::zero();
        for c in self.head() {
            s += c;
            if s.is_negative() {
                return false;
            }
        }
        true
    }

    pub fn neg(&self) -> Weight {
        Weight { coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert_eq!(self.rank(), other.rank());
        Weight { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Weight {
        Weight { coords: self.coords.iter().map(|x| x * c).collect() }
    }

    /// `rho = 1/2 (r, r-2, ..., -r)`.
    pub fn rho(r: usize) -> Weight {
        let coords = (0..=r).map(|k| Rational::new((r as i64 - 2 * k as i64).into(), 2.into())).collect();
        Weight { coords }
    }

    /// `e^i - e^j` (1-based).
    pub fn root(r: usize, i: usize, j: usize) -> Weight {
        let mut coords = vec![Rational::zero(); r + 1];
        coords[i - 1] += Rational::one();
        coords[j - 1] -= Rational::one();
        Weight { coords }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A permutation of `{1, ..., n}` in one-line notation (stored 0-based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    img: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation { img: (0..n).collect() }
    }

    /// From 1-based one-line notation `[w(1), ..., w(n)]`.
    pub fn from_one_line(line: &[usize]) -> Result<Permutation> {
        let n = line.len();
        let mut seen = vec![false; n];
        for &x in line {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidPermutation(format!("{line:?}")));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { img: line.iter().map(|x| x - 1).collect() })
    }

    /// Parse `"213"` or `"2,1,3"`.
    pub fn parse(s: &str) -> Result<Permutation> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        let line: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse().map_err(|_| Error::InvalidPermutation(s.into())))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::InvalidPermutation(s.into())))
                .collect::<Result<_>>()?
        };
        Self::from_one_line(&line)
    }

    pub fn len(&self) -> usize {
        self.img.len()
    }

    pub fn is_empty(&self) -> bool {
        self.img.is_empty()
    }

    /// `w(k)` for 1-based `k`.
    pub fn apply(&self, k: usize) -> usize {
        self.img[k - 1] + 1
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.img.iter().map(|x| x + 1).collect()
    }

    pub(crate) fn zero_based(&self) -> &[usize] {
        &self.img
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.img.len()];
        for (k, &x) in self.img.iter().enumerate() {
            inv[x] = k;
        }
        Permutation { img: inv }
    }

    /// `(self ∘ other)(k) = self(other(k))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation { img: other.img.iter().map(|&k| self.img[k]).collect() }
    }

    /// Number of positions `i < n` with `w(i) > w(i+1)`.
    pub fn descents(&self) -> usize {
        self.img.windows(2).filter(|p| p[0] > p[1]).count()
    }

    /// Sign `±1`.
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.img.len()];
        let mut even_cycles = 0;
        for s in 0..self.img.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut k = s;
            while !seen[k] {
                seen[k] = true;
                k = self.img[k];
                len += 1;
            }
            if len % 2 == 0 {
                even_cycles += 1;
            }
        }
        if even_cycles % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The permutation on `{1..n+1}` that agrees with `self` and fixes `n+1`.
    pub fn extend(&self) -> Permutation {
        let mut img = self.img.clone();
        img.push(img.len());
        Permutation { img }
    }

    /// All permutations of `{1..n}` in lexicographic order of their one-line notation.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation { img: cur.clone() });
                return;
            }
            for x in 0..n {
                if !used[x] {
                    used[x] = true;
                    cur.push(x);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[x] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }

    /// The transposition of `i` and `j` on `{1..n}`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Permutation {
        let mut img: Vec<usize> = (0..n).collect();
        img.swap(i - 1, j - 1);
        Permutation { img }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = self.one_line();
        if line.len() <= 9 {
            let s: String = line.iter().map(|d| char::from(b'0' + *d as u8)).collect();
            write!(f, "[{s}]")
        } else {
            let parts: Vec<String> = line.iter().map(|d| d.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

/// `w · a`, where `w` permutes the first `w.len()` coordinates: `(w·a)_{w(k)} = a_k`.
pub fn permute_weight(w: &Permutation, a: &Weight) -> Result<Weight> {
    let n = w.len();
    if n > a.coords.len() {
        return Err(Error::InvalidPermutation(format!("{w} acts on more coordinates than {a} has")));
    }
    let mut coords = a.coords.clone();
    for k in 0..n {
        coords[w.img[k]] = a.coords[k].clone();
    }
    Ok(Weight { coords })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_system_shifts() {
        let a3 = FlowSystem::complete(3).unwrap();
        assert_eq!(a3.num_roots(), 6);
        assert_eq!(a3.t_shifts(), vec![2, 1, 0]);
        assert_eq!(a3.s_shifts(), vec![1, 0, -1]);
        assert_eq!(a3.q(), 2);
        assert!(a3.is_complete());
    }

    #[test]
    fn pitman_stanley_system() {
        let ps = FlowSystem::pitman_stanley(3).unwrap();
        assert_eq!(ps.multiplicity(3, 4), 2);
        assert_eq!(ps.t_shifts(), vec![1, 1, 1]);
        assert_eq!(ps.s_shifts(), vec![1, 0, 0]);
    }

    #[test]
    fn rejects_bad_systems() {
        assert!(FlowSystem::new(2, &[(2, 1, 1)]).is_err());
        assert!(FlowSystem::new(2, &[(1, 4, 1)]).is_err());
        assert!(matches!(FlowSystem::new(2, &[(1, 2, 1)]), Err(Error::InvalidSystem(_))));
        assert!(FlowSystem::parse("complete:x").is_err());
    }

    #[test]
    fn parse_and_json() {
        let s = FlowSystem::parse(r#"{"r":2,"edges":[[1,2,1],[1,3,1],[2,3,2]]}"#).unwrap();
        assert_eq!(s.multiplicity(2, 3), 2);
        assert_eq!(FlowSystem::from_json(&s.to_json()).unwrap(), s);
        assert_eq!(FlowSystem::parse("complete:2").unwrap(), FlowSystem::complete(2).unwrap());
    }

    #[test]
    fn deletions() {
        let a3 = FlowSystem::complete(3).unwrap();
        let d = a3.delete_terminal_roots().unwrap();
        assert_eq!(d, FlowSystem::complete(2).unwrap());
        let f = a3.without_root(2, 3).unwrap();
        assert_eq!(f.num_roots(), 5);
        assert!(FlowSystem::complete(1).unwrap().without_root(1, 2).is_err());
    }

    #[test]
    fn weights() {
        let w = Weight::embed_ints(&[1, 2]);
        assert_eq!(w.to_ints().unwrap(), vec![1, 2, -3]);
        assert!(Weight::from_ints(&[1, 1]).is_err());
        assert!(!Weight::embed_ints(&[1, -2]).in_cone());
        assert_eq!(Weight::rho(2).to_string(), "(1,0,-1)");
    }

    #[test]
    fn permutation_basics() {
        let w = Permutation::parse("231").unwrap();
        assert_eq!(w.descents(), 1);
        assert_eq!(w.sign(), 1);
        assert_eq!(w.inverse().to_string(), "[312]");
        assert_eq!(Permutation::parse("213").unwrap().sign(), -1);
        assert_eq!(Permutation::all(3).len(), 6);
        assert!(Permutation::from_one_line(&[1, 1]).is_err());
    }

    #[test]
    fn permute_weight_example() {
        let w = Permutation::parse("21").unwrap();
        let a = Weight::from_ints(&[1, 0, -1]).unwrap();
        assert_eq!(permute_weight(&w, &a).unwrap().to_ints().unwrap(), vec![0, 1, -1]);
    }
}
