//! Extraction of linear factors with small integer coefficients, used to print
//! volume and Ehrhart polynomials in factored form.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::{rat, MultiPoly, Rational};

/// `content * prod factor^mult * rest`, with primitive integer factors whose
/// first nonzero variable coefficient is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    pub content: Rational,
    pub factors: Vec<(MultiPoly, u32)>,
    /// Cofactor with no linear factor in the search range; constant 1 when fully split.
    pub rest: MultiPoly,
}

/// Largest absolute variable coefficient tried in a candidate factor.
const COEFF_BOUND: i64 = 3;
/// Largest absolute constant term tried in a candidate factor.
const CONST_BOUND: i64 = 12;
/// Candidates are enumerated only up to this many variables.
const MAX_VARS: usize = 6;

const PROBES: [[i64; MAX_VARS]; 2] = [[3, 7, 11, 17, 23, 29], [5, 2, 13, 19, 31, 37]];

pub fn factor_linear(p: &MultiPoly) -> Factored {
    let n = p.nvars();
    let (content, mut rest) = p.primitive_part();
    let mut factors = Vec::new();
    if p.is_zero() || rest.is_constant() || n > MAX_VARS {
        return Factored { content, factors, rest };
    }
    let used: Vec<bool> = (0..n).map(|v| !rest.is_independent_of(v)).collect();
    let top = top_part(&rest);
    for dir in directions(n, &used) {
        if !vanishes_on(&top, &dir, 0) {
            continue;
        }
        for c in -CONST_BOUND..=CONST_BOUND {
            let mut mult = 0;
            while !rest.is_constant() && vanishes_on(&rest, &dir, c) {
                let l = linear(n, &dir, c);
                match rest.div_rem(&l) {
                    Ok((q, r)) if r.is_zero() => {
                        rest = q;
                        mult += 1;
                    }
                    _ => break,
                }
            }
            if mult > 0 {
                factors.push((linear(n, &dir, c), mult));
            }
        }
    }
    // the quotients stay integral since every factor is primitive; fold any sign into the content
    let (c, prim) = rest.primitive_part();
    let content = content * c;
    factors.sort_by_cached_key(|(f, _)| (f.num_terms(), f.to_string()));
    Factored { content, factors, rest: prim }
}

impl Factored {
    pub fn expand(&self) -> MultiPoly {
        let mut out = self.rest.scale(&self.content);
        for (f, m) in &self.factors {
            out = &out * &f.pow(*m);
        }
        out
    }

    /// Parseable text such as `1/6*(a1 + 1)*(a1 + 2)*(a1 + 3*a2 + 3)`.
    pub fn format_with(&self, names: &[String]) -> String {
        let mut pieces: Vec<(&MultiPoly, u32)> = self.factors.iter().map(|(f, m)| (f, *m)).collect();
        if !self.rest.is_constant() {
            pieces.push((&self.rest, 1));
        }
        // a lone unscaled factor needs no parentheses
        let alone = pieces.len() == 1 && pieces[0].1 == 1 && self.content.is_one();
        let parts: Vec<String> = pieces
            .iter()
            .map(|(f, m)| {
                let s = f.format_with(names);
                let s = if f.num_terms() == 1 || alone { s } else { format!("({s})") };
                if *m == 1 {
                    s
                } else {
                    format!("{s}^{m}")
                }
            })
            .collect();
        if parts.is_empty() {
            return self.content.to_string();
        }
        let body = parts.join("*");
        if self.content.is_one() {
            body
        } else if (-&self.content).is_one() {
            format!("-{body}")
        } else {
            format!("{}*{body}", self.content)
        }
    }
}

fn top_part(p: &MultiPoly) -> MultiPoly {
    let d = p.total_degree().unwrap_or(0);
    let mut out = MultiPoly::zero(p.nvars());
    for (e, c) in p.terms() {
        if e.iter().map(|&x| x as i64).sum::<i64>() == d {
            out.add_term(e.clone(), c.clone());
        }
    }
    out
}

/// Primitive coefficient vectors on the used variables, first nonzero entry positive.
fn directions(n: usize, used: &[bool]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0i64; n]];
    for v in 0..n {
        let choices: Vec<i64> = if used[v] { (-COEFF_BOUND..=COEFF_BOUND).collect() } else { vec![0] };
        out = out
            .into_iter()
            .flat_map(|d| {
                choices.iter().map(move |&c| {
                    let mut d = d.clone();
                    d[v] = c;
                    d
                })
            })
            .collect();
    }
    out.retain(|d| {
        let first = d.iter().find(|&&c| c != 0);
        first.is_some_and(|&c| c > 0) && d.iter().fold(0i64, |g, &c| g.gcd(&c)) == 1
    });
    // fewer variables first, so that a1 is found before a1 + a2 and so on
    out.sort_by_key(|d| (d.iter().filter(|&&c| c != 0).count(), d.iter().map(|c| c.abs()).sum::<i64>()));
    out
}

fn linear(n: usize, dir: &[i64], c: i64) -> MultiPoly {
    let coeffs: Vec<Rational> = dir.iter().map(|&x| rat(x)).collect();
    MultiPoly::affine(n, &coeffs, rat(c))
}

/// Whether `p` vanishes at two probe points of the hyperplane `dir . a + c = 0`.
fn vanishes_on(p: &MultiPoly, dir: &[i64], c: i64) -> bool {
    let pivot = dir.iter().position(|&x| x != 0).expect("nonzero direction");
    PROBES.iter().all(|probe| {
        let mut pt: Vec<Rational> = probe[..dir.len()].iter().map(|&x| rat(x)).collect();
        let others: Rational =
            (0..dir.len()).filter(|&k| k != pivot).map(|k| rat(dir[k]) * &pt[k]).fold(rat(c), |s, x| s + x);
        pt[pivot] = -others / rat(dir[pivot]);
        p.eval(&pt).is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, var_names};

    fn p(s: &str, n: usize) -> MultiPoly {
        parse_poly(s, &var_names("a", n)).unwrap()
    }

    fn round_trip(s: &str, n: usize) -> String {
        let names = var_names("a", n);
        let q = p(s, n);
        let f = factor_linear(&q);
        assert_eq!(f.expand(), q);
        let text = f.format_with(&names);
        assert_eq!(parse_poly(&text, &names).unwrap(), q, "{text}");
        text
    }

    #[test]
    fn splits_products_of_linear_forms() {
        assert_eq!(
            round_trip("(a1+1)*(a1+2)*(a1+3*a2+3)/6", 3),
            "1/6*(a1 + 1)*(a1 + 2)*(a1 + 3*a2 + 3)"
        );
        assert_eq!(round_trip("(a1+a2)^3/6", 3), "1/6*(a1 + a2)^3");
        assert_eq!(round_trip("a1^2*(a1+3*a2)/6", 3), "1/6*a1^2*(a1 + 3*a2)");
        assert_eq!(round_trip("-2*(a1-a2)*a3", 3), "-2*a3*(a1 - a2)");
    }

    #[test]
    fn keeps_irreducible_cofactors() {
        let s = round_trip("a1^3*(a1+a2+3*a3)*(a1^2+5*a1*a2+10*a2^2)/360", 4);
        assert_eq!(s, "1/360*a1^3*(a1 + a2 + 3*a3)*(a1^2 + 5*a1*a2 + 10*a2^2)");
        assert_eq!(round_trip("a1^2 + a2^2 + 1", 2), "a1^2 + a2^2 + 1");
    }

    #[test]
    fn constants() {
        assert_eq!(round_trip("0", 2), "0");
        assert_eq!(round_trip("5/3", 2), "5/3");
        assert_eq!(round_trip("2*a1 + 4", 2), "2*(a1 + 2)");
        assert_eq!(round_trip("a1 + a2 + 1", 2), "a1 + a2 + 1");
    }
}
